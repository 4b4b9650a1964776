use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use qwalk::kernel::{build_kernel, classify_degeneracy, double_zero, genus_classify, CurveKind, Degeneracy, DoubleZero};
use qwalk::numerics::{CertifiedComplex, Precision};
use qwalk::qsummation::{partial_fractions, q_residue, q_residue_infinity};
use qwalk::scalar::OrbitRelation;
use qwalk::series::{check_functional_equation, check_qdiff_equation, default_samples, enumerate};
use qwalk::transcendence::{describe_summability, verdict, Conclusion, TelescoperRHS, TranscendenceError};
use qwalk::uniformize::{q_formula, q_limit, Uniformization};

use crate::config::{AnalysisConfig, ConfigError};
use crate::report::*;

/// Process exit statuses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Decided,
    ConfigError,
    Degenerate,
    GenusOne,
    Undecided,
    /// Genus zero, but outside the family the verdict covers.
    OutsideFamily,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Decided => 0,
            Status::ConfigError => 2,
            Status::Degenerate => 10,
            Status::GenusOne => 11,
            Status::Undecided => 12,
            Status::OutsideFamily => 13,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Status::Decided => "decided",
            Status::ConfigError => "config-error",
            Status::Degenerate => "degenerate",
            Status::GenusOne => "genus-one",
            Status::Undecided => "undecided",
            Status::OutsideFamily => "outside-family",
        }
    }
}

struct Timer {
    enabled: bool,
    start: Instant,
    laps: BTreeMap<String, u64>,
}

impl Timer {
    fn lap(&mut self, name: &str) {
        if self.enabled {
            let ms = self.start.elapsed().as_millis() as u64;
            self.laps.insert(name.to_string(), ms);
            self.start = Instant::now();
        }
    }
}

fn dz_flags(d: &DoubleZero) -> DoubleZeroFlags {
    DoubleZeroFlags {
        present: d.present(),
        at_origin: d.at_origin,
        at_infinity: d.at_infinity,
        other: d.other || d.identically_zero,
    }
}

fn curve_name(k: CurveKind) -> String {
    match k {
        CurveKind::Degenerate(c) => format!("degenerate ({})", c),
        CurveKind::GenusZero => "genus zero".into(),
        CurveKind::GenusZeroNonCanonical => "genus zero (non-canonical)".into(),
        CurveKind::GenusOne => "genus one".into(),
    }
}

fn set_status(r: &mut AnalysisReport, s: Status, msg: impl Into<String>) {
    r.status = StatusSection { code: s.code(), name: s.name().into(), message: msg.into() };
}

fn pole_entries(rhs: &TelescoperRHS, named: &[(String, bool)], b1: bool) -> Vec<PoleEntry> {
    let div = if b1 { &rhs.b1_divisor } else { &rhs.b2_divisor };
    div.entries
        .iter()
        .map(|e| {
            let c = &rhs.classes[e.class];
            let names: Vec<String> = c.slots.iter().map(|s| s.name().to_string()).collect();
            let matched = names.iter().all(|n| named.iter().any(|(m, ok)| m == n && *ok));
            PoleEntry {
                names,
                order: e.order,
                s: (&c.s).into(),
                x: (&c.x).into(),
                y: (&c.y).into(),
                family: c.family,
                shift: c.shift,
                matched,
            }
        })
        .collect()
}

fn uniformization_section(u: &Uniformization, cfg: &AnalysisConfig) -> UniformizationSection {
    let v = &u.ab_values;
    let ab: BTreeMap<String, String> = [
        ("alpha2", &v.a2),
        ("alpha3", &v.a3),
        ("alpha4", &v.a4),
        ("beta2", &v.b2),
        ("beta3", &v.b3),
        ("beta4", &v.b4),
    ]
    .iter()
    .map(|(k, x)| (k.to_string(), x.to_string()))
    .collect();
    let prec = Precision::new(u.bits, cfg.max_bits);
    let qf = q_formula(&u.weights, &u.t_value, prec).map(|q| (&q).into()).unwrap_or(Num { mid: "?".into(), rad: "?".into() });
    let lim = q_limit(u, &[3, 4, 5, 6]);
    let q_limit = match lim {
        Ok(l) => QLimitSection {
            exponents: l.exponents.clone(),
            ratios: l.ratios.iter().map(|r| r.into()).collect(),
            extrapolated: (&l.extrapolated).into(),
        },
        Err(_) => QLimitSection {
            exponents: vec![],
            ratios: vec![],
            extrapolated: (&CertifiedComplex::zero()).into(),
        },
    };
    UniformizationSection {
        alpha_beta: ab,
        lambda: (&u.lambda).into(),
        lambda_squared: (&u.lambda.mul(&u.lambda)).into(),
        q: (&u.q).into(),
        q_closed_form: qf,
        q_inverted: u.q_inverted,
        q_convention: if u.q_inverted {
            "q = lambda^2 with |q| > 1; the closed form gave 1/q".into()
        } else {
            "q = lambda^2 with |q| > 1".into()
        },
        q_limit,
        bits: u.bits,
    }
}

fn residue_table(rhs: &TelescoperRHS, u: &Uniformization, bound: u64) -> Option<ResidueTable> {
    let d = partial_fractions(&rhs.b2, &u.q_complex(), bound).ok()?;
    let mut entries = Vec::new();
    for (bi, block) in d.blocks.iter().enumerate() {
        for j in 1..=block.max_order() {
            let r = q_residue(&d, bi, j).ok()?;
            entries.push(ResidueEntry {
                block: bi,
                representative: (&block.representative).into(),
                order: j,
                certified_nonzero: !r.contains_zero(),
                residue: (&r).into(),
            });
        }
    }
    Some(ResidueTable { at_infinity: (&q_residue_infinity(&d)).into(), entries })
}

fn orbit_entries(rhs: &TelescoperRHS, seps: &[qwalk::transcendence::Separation]) -> Vec<OrbitEntry> {
    seps.iter()
        .map(|s| {
            let (a, b) = (rhs.classes[s.a].label(), rhs.classes[s.b].label());
            match &s.relation {
                OrbitRelation::Same(l) => OrbitEntry {
                    a,
                    b,
                    relation: "same".into(),
                    offset: Some(*l),
                    bound: None,
                    reason: "linked by the automorphism".into(),
                    structural: s.structural,
                },
                OrbitRelation::Distinct(ev) => OrbitEntry {
                    a,
                    b,
                    relation: "distinct".into(),
                    offset: None,
                    bound: Some(ev.bound),
                    reason: ev.reason.clone(),
                    structural: s.structural,
                },
                OrbitRelation::Undecided(ev) => OrbitEntry {
                    a,
                    b,
                    relation: "undecided".into(),
                    offset: None,
                    bound: Some(ev.bound),
                    reason: ev.reason.clone(),
                    structural: s.structural,
                },
            }
        })
        .collect()
}

fn series_section(cfg: &AnalysisConfig, u: &Uniformization, rhs: &TelescoperRHS) -> SeriesSection {
    let w = &u.weights;
    let st = enumerate(w, cfg.series_order);
    let mut sec = SeriesSection {
        order: cfg.series_order,
        functional_equation_residual_terms: 0,
        qdiff_bound: None,
        qdiff_within_bound: false,
        qdiff_samples: vec![],
        error: None,
    };
    let km = match build_kernel(w, &u.t_value) {
        Ok(k) => k,
        Err(e) => {
            sec.error = Some(e.to_string());
            return sec;
        }
    };
    if let Err(e) = check_functional_equation(&st, &km) {
        sec.functional_equation_residual_terms = match &e {
            qwalk::series::SeriesError::ResidualNonzero { count, .. } => *count,
            _ => 0,
        };
        sec.error = Some(e.to_string());
        return sec;
    }
    match check_qdiff_equation(&st, u, rhs, &default_samples(u)) {
        Ok(rep) => {
            sec.qdiff_within_bound = rep.within_bound() && !rep.samples.is_empty();
            sec.qdiff_bound = Some((&rep.bound).into());
            sec.qdiff_samples = rep
                .samples
                .iter()
                .map(|s| QDiffSampleEntry { s: (&s.s).into(), residual1_abs: (&s.abs1).into(), residual2_abs: (&s.abs2).into() })
                .collect();
        }
        Err(e) => sec.error = Some(e.to_string()),
    }
    sec
}

/// Run the whole pipeline on one configuration. The report's status code is
/// the process exit status.
pub fn run_analysis(cfg: &AnalysisConfig, timestamp: bool) -> AnalysisReport {
    let mut timer = Timer { enabled: timestamp, start: Instant::now(), laps: BTreeMap::new() };
    let mut report = AnalysisReport {
        schema_version: SCHEMA_VERSION.into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        run: None,
        input: InputSection {
            weights: BTreeMap::new(),
            t: cfg.t.to_string(),
            t_decimal: cfg.t_decimal.clone(),
            precision_bits: cfg.precision_bits,
            max_bits: cfg.max_bits,
            orbit_bound: cfg.orbit_bound,
            series_order: cfg.series_order,
            notes: vec![],
        },
        status: StatusSection { code: 0, name: String::new(), message: String::new() },
        degeneracy: String::new(),
        discriminant: None,
        classification: None,
        uniformization: None,
        pole_divisor: vec![],
        b1_poles: vec![],
        orbit_evidence: vec![],
        q_residues: None,
        verdict: None,
        series: None,
    };
    let finish = |mut r: AnalysisReport, timer: Timer| {
        if timer.enabled {
            r.run = Some(RunInfo { timestamp: chrono::Utc::now().to_rfc3339(), timings_ms: timer.laps });
        }
        r
    };
    if let Some(d) = &cfg.t_decimal {
        report.input.notes.push(format!("t = {} converted to the dyadic {}", d, cfg.t));
    }
    let w = match cfg.step_weights() {
        Ok(w) => w,
        Err(e) => {
            set_status(&mut report, Status::ConfigError, e.to_string());
            return finish(report, timer);
        }
    };
    report.input.weights = w.as_map();
    if let Some(total) = w.rescaled_from() {
        report.input.notes.push(format!("weights summed to {} and were rescaled to sum 1", total));
    }

    let km = match build_kernel(&w, &cfg.t) {
        Ok(k) => k,
        Err(e) => {
            set_status(&mut report, Status::ConfigError, e.to_string());
            return finish(report, timer);
        }
    };
    report.discriminant = Some(DiscriminantSection {
        double_zero_x: dz_flags(&double_zero(&km.disc_x)),
        double_zero_y: dz_flags(&double_zero(&km.disc_y)),
    });
    if let Degeneracy::Degenerate(c) = classify_degeneracy(&w) {
        report.degeneracy = format!("degenerate (case {})", c);
        set_status(&mut report, Status::Degenerate, "the walk is degenerate; no curve analysis");
        return finish(report, timer);
    }
    report.degeneracy = "nondegenerate".into();
    let cls = match genus_classify(&km, cfg.precision_bits) {
        Ok(c) => c,
        Err(e) => {
            set_status(&mut report, Status::Undecided, e.to_string());
            return finish(report, timer);
        }
    };
    report.classification = Some(ClassificationSection {
        kind: curve_name(cls.kind),
        double_zero_x: dz_flags(&cls.double_zero_x),
        double_zero_y: dz_flags(&cls.double_zero_y),
        singular_point: cls.singular_point.as_ref().map(|(a, b)| [a.into(), b.into()]),
        branch_x: cls.branch_x.as_ref().map(|b| b.iter().map(|p| p.into()).collect()).unwrap_or_default(),
        branch_y: cls.branch_y.as_ref().map(|b| b.iter().map(|p| p.into()).collect()).unwrap_or_default(),
    });
    timer.lap("kernel");
    match cls.kind {
        CurveKind::GenusOne => {
            set_status(&mut report, Status::GenusOne, "the kernel curve has genus one; no verdict");
            return finish(report, timer);
        }
        CurveKind::GenusZeroNonCanonical => {
            set_status(
                &mut report,
                Status::OutsideFamily,
                "genus zero, but the singular point is not at the origin; outside the analyzed family",
            );
            return finish(report, timer);
        }
        _ => {}
    }

    let prec = Precision::new(cfg.precision_bits, cfg.max_bits);
    let v = match verdict(&w, &cfg.t, prec, cfg.orbit_bound) {
        Ok(v) => v,
        Err(TranscendenceError::UnsupportedSupport(m)) => {
            set_status(&mut report, Status::OutsideFamily, m);
            return finish(report, timer);
        }
        Err(TranscendenceError::NotGenusZero(k)) => {
            set_status(&mut report, Status::GenusOne, format!("{:?}", k));
            return finish(report, timer);
        }
        Err(TranscendenceError::DegenerateWalk(c)) => {
            set_status(&mut report, Status::Degenerate, format!("case {}", c));
            return finish(report, timer);
        }
        Err(e) => {
            set_status(&mut report, Status::Undecided, e.to_string());
            return finish(report, timer);
        }
    };
    timer.lap("verdict");
    let a = &v.analysis;
    let u = &a.uniformization;
    report.uniformization = Some(uniformization_section(u, cfg));
    report.pole_divisor = pole_entries(&a.rhs, &a.named_points, false);
    report.b1_poles = pole_entries(&a.rhs, &a.named_points, true);
    report.orbit_evidence = orbit_entries(&a.rhs, &a.separations);
    report.q_residues = residue_table(&a.rhs, u, cfg.orbit_bound);
    let conclusion = match v.conclusion {
        Conclusion::Transcendental => "transcendental",
        Conclusion::Algebraic => "algebraic",
        Conclusion::Undecided => "undecided",
    };
    report.verdict = Some(VerdictSection {
        conclusion: conclusion.into(),
        case_label: v.case_label.as_str().into(),
        expected_divisor: v.case_label.expected_divisor().into(),
        divisor: a.rhs.describe(&a.rhs.b2_divisor),
        via_transpose: v.via_transpose,
        applies_to: vec!["Q(x,0,t)".into(), "Q(0,y,t)".into()],
        certificate: v.certificate.as_ref().map(|c| CertificateSection {
            witness: c.witness.clone(),
            order: c.order,
            s: (&c.s_preimage).into(),
            evidence: c.evidence.clone(),
            citation: c.citation.clone(),
        }),
        summability: describe_summability(&a.summability),
        notes: v.notes.clone(),
        bits_used: v.bits,
    });
    timer.lap("report");
    report.series = Some(series_section(cfg, u, &a.rhs));
    timer.lap("series");
    match v.conclusion {
        Conclusion::Undecided => set_status(&mut report, Status::Undecided, "verdict undecided at the available precision"),
        _ => set_status(&mut report, Status::Decided, format!("{} ({})", conclusion, v.case_label)),
    }
    finish(report, timer)
}

fn summarize(file: String, r: &AnalysisReport) -> SuiteEntry {
    SuiteEntry {
        file,
        code: r.status.code,
        status: r.status.name.clone(),
        curve: r.classification.as_ref().map(|c| c.kind.clone()),
        double_zero: r.discriminant.as_ref().map(|d| d.double_zero_y.present),
        conclusion: r.verdict.as_ref().map(|v| v.conclusion.clone()),
        case_label: r.verdict.as_ref().map(|v| v.case_label.clone()),
        error: if r.status.code == 0 { None } else { Some(r.status.message.clone()) },
    }
}

/// Analyze every named configuration; failures are recorded and the run
/// continues.
pub fn run_configs(configs: Vec<(String, Result<AnalysisConfig, ConfigError>)>, timestamp: bool) -> SuiteReport {
    let mut entries = Vec::new();
    let mut reports = Vec::new();
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for (name, cfg) in configs {
        let entry = match cfg {
            Ok(cfg) => {
                let r = run_analysis(&cfg, timestamp);
                let e = summarize(name, &r);
                reports.push(r);
                e
            }
            Err(err) => SuiteEntry {
                file: name,
                code: Status::ConfigError.code(),
                status: Status::ConfigError.name().into(),
                curve: None,
                double_zero: None,
                conclusion: None,
                case_label: None,
                error: Some(err.to_string()),
            },
        };
        *counts.entry(entry.status.clone()).or_default() += 1;
        entries.push(entry);
    }
    SuiteReport { schema_version: SCHEMA_VERSION.into(), entries, counts, reports }
}

/// Analyze all `*.cfg` files of a directory in name order.
pub fn run_suite(dir: &Path, timestamp: bool) -> Result<SuiteReport, ConfigError> {
    let rd = std::fs::read_dir(dir).map_err(|e| ConfigError::Io { path: dir.display().to_string(), msg: e.to_string() })?;
    let mut files: Vec<_> = rd
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "cfg"))
        .collect();
    files.sort();
    let configs = files
        .iter()
        .map(|p| (p.file_name().unwrap_or_default().to_string_lossy().into_owned(), AnalysisConfig::load(p)))
        .collect();
    Ok(run_configs(configs, timestamp))
}
