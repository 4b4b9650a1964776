//! Analysis reports. Certified numbers are written as decimal midpoint and
//! radius strings so that nothing is lost in serialization.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use qwalk::kernel::ProjPoint;
use qwalk::numerics::{CertifiedComplex, CertifiedReal};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1.0.0";
pub const SCHEMA: &str = include_str!("../report.schema.json");

const DIGITS: u32 = 40;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Num {
    pub mid: String,
    pub rad: String,
}

impl From<&CertifiedReal> for Num {
    fn from(x: &CertifiedReal) -> Self {
        let (mid, rad) = x.render(DIGITS);
        Num { mid, rad }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CNum {
    pub re: Num,
    pub im: Num,
}

impl From<&CertifiedComplex> for CNum {
    fn from(z: &CertifiedComplex) -> Self {
        CNum { re: (&z.re).into(), im: (&z.im).into() }
    }
}

impl CNum {
    pub fn short(&self) -> String {
        let cut = |s: &str| match s.parse::<f64>() {
            Ok(f) if f == 0.0 => "0".to_string(),
            Ok(f) if f.abs() >= 1e-4 && f.abs() < 1e6 => format!("{:.12}", f),
            Ok(f) => format!("{:.10e}", f),
            Err(_) => s.to_string(),
        };
        if self.im.mid == "0" && self.im.rad == "0" {
            cut(&self.re.mid)
        } else {
            format!("{} + {}i", cut(&self.re.mid), cut(&self.im.mid))
        }
    }
}

/// A point `[x0 : x1]` of the projective line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PPoint {
    pub x0: CNum,
    pub x1: CNum,
}

impl From<&ProjPoint> for PPoint {
    fn from(p: &ProjPoint) -> Self {
        PPoint { x0: (&p.x0).into(), x1: (&p.x1).into() }
    }
}

impl PPoint {
    pub fn short(&self) -> String {
        format!("[{} : {}]", self.x0.short(), self.x1.short())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub timestamp: String,
    /// Wall-clock milliseconds per stage.
    pub timings_ms: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputSection {
    /// Normalized weights, keyed `d[i,j]`.
    pub weights: BTreeMap<String, String>,
    pub t: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_decimal: Option<String>,
    pub precision_bits: u32,
    pub max_bits: u32,
    pub orbit_bound: u64,
    pub series_order: usize,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatusSection {
    pub code: i32,
    pub name: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoubleZeroFlags {
    pub present: bool,
    pub at_origin: bool,
    pub at_infinity: bool,
    pub other: bool,
}

/// Exact repeated-root test of both discriminants, with `t` symbolic. Also
/// filled in for degenerate walks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscriminantSection {
    pub double_zero_x: DoubleZeroFlags,
    pub double_zero_y: DoubleZeroFlags,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationSection {
    pub kind: String,
    pub double_zero_x: DoubleZeroFlags,
    pub double_zero_y: DoubleZeroFlags,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub singular_point: Option<[PPoint; 2]>,
    pub branch_x: Vec<PPoint>,
    pub branch_y: Vec<PPoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QLimitSection {
    pub exponents: Vec<u32>,
    pub ratios: Vec<CNum>,
    pub extrapolated: CNum,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformizationSection {
    pub alpha_beta: BTreeMap<String, String>,
    pub lambda: CNum,
    pub lambda_squared: CNum,
    pub q: Num,
    pub q_closed_form: Num,
    pub q_inverted: bool,
    pub q_convention: String,
    pub q_limit: QLimitSection,
    pub bits: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleEntry {
    pub names: Vec<String>,
    pub order: u32,
    pub s: CNum,
    pub x: PPoint,
    pub y: PPoint,
    pub family: u32,
    pub shift: i64,
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitEntry {
    pub a: String,
    pub b: String,
    /// `same`, `distinct` or `undecided`.
    pub relation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
    pub reason: String,
    pub structural: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidueEntry {
    pub block: usize,
    pub representative: CNum,
    pub order: u32,
    pub residue: CNum,
    pub certified_nonzero: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidueTable {
    pub at_infinity: CNum,
    pub entries: Vec<ResidueEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateSection {
    pub witness: String,
    pub order: u32,
    pub s: CNum,
    pub evidence: Vec<String>,
    pub citation: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictSection {
    pub conclusion: String,
    pub case_label: String,
    pub expected_divisor: String,
    pub divisor: String,
    pub via_transpose: bool,
    pub applies_to: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateSection>,
    pub summability: String,
    pub notes: Vec<String>,
    pub bits_used: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QDiffSampleEntry {
    pub s: CNum,
    pub residual1_abs: Num,
    pub residual2_abs: Num,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesSection {
    pub order: usize,
    pub functional_equation_residual_terms: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qdiff_bound: Option<Num>,
    pub qdiff_within_bound: bool,
    pub qdiff_samples: Vec<QDiffSampleEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: String,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunInfo>,
    pub input: InputSection,
    pub status: StatusSection,
    pub degeneracy: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discriminant: Option<DiscriminantSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniformization: Option<UniformizationSection>,
    pub pole_divisor: Vec<PoleEntry>,
    pub b1_poles: Vec<PoleEntry>,
    pub orbit_evidence: Vec<OrbitEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_residues: Option<ResidueTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesSection>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut o = String::new();
        let i = &self.input;
        let w: Vec<String> = i.weights.iter().filter(|(_, v)| v.as_str() != "0").map(|(k, v)| format!("{}={}", k, v)).collect();
        let _ = writeln!(o, "weights      {}", w.join(" "));
        let _ = writeln!(o, "t            {}", i.t_decimal.as_deref().map_or(i.t.clone(), |d| format!("{} ({})", i.t, d)));
        for n in &i.notes {
            let _ = writeln!(o, "note         {}", n);
        }
        let _ = writeln!(o, "status       {} ({}): {}", self.status.name, self.status.code, self.status.message);
        let _ = writeln!(o, "degeneracy   {}", self.degeneracy);
        if let Some(d) = &self.discriminant {
            let _ = writeln!(o, "double zero  x: {}  y: {}", d.double_zero_x.present, d.double_zero_y.present);
        }
        if let Some(c) = &self.classification {
            let _ = writeln!(o, "curve        {}", c.kind);
            for (name, b) in [("branch x", &c.branch_x), ("branch y", &c.branch_y)] {
                if !b.is_empty() {
                    let pts: Vec<String> = b.iter().map(|p| p.short()).collect();
                    let _ = writeln!(o, "{:<12} {}", name, pts.join(", "));
                }
            }
        }
        if let Some(u) = &self.uniformization {
            let _ = writeln!(o, "lambda       {}", u.lambda.short());
            let _ = writeln!(o, "q            {} (+/- {})  {}", u.q.mid, u.q.rad, u.q_convention);
            let _ = writeln!(o, "q limit      {}", u.q_limit.extrapolated.short());
        }
        if !self.pole_divisor.is_empty() {
            let _ = writeln!(o, "poles of b2");
            for p in &self.pole_divisor {
                let _ = writeln!(
                    o,
                    "  {} x{}  s = {}  orbit {}{:+}",
                    p.names.join("="),
                    p.order,
                    p.s.short(),
                    p.family,
                    p.shift
                );
            }
        }
        if !self.orbit_evidence.is_empty() {
            let _ = writeln!(o, "orbits");
            for e in &self.orbit_evidence {
                let _ = writeln!(o, "  {} vs {}: {} {}", e.a, e.b, e.relation, e.reason);
            }
        }
        if let Some(r) = &self.q_residues {
            let _ = writeln!(o, "q-residues   infinity: {}", r.at_infinity.short());
            for e in &r.entries {
                let _ = writeln!(o, "  block {} order {}: {}", e.block, e.order, e.residue.short());
            }
        }
        if let Some(v) = &self.verdict {
            let _ = writeln!(o, "verdict      {} [{}]", v.conclusion, v.case_label);
            let _ = writeln!(o, "divisor      {}", v.divisor);
            if let Some(c) = &v.certificate {
                let _ = writeln!(o, "witness      {} of order {}", c.witness, c.order);
                for e in &c.evidence {
                    let _ = writeln!(o, "  {}", e);
                }
            }
            let _ = writeln!(o, "b2           {}", v.summability);
            for n in &v.notes {
                let _ = writeln!(o, "note         {}", n);
            }
        }
        if let Some(s) = &self.series {
            let _ = writeln!(
                o,
                "series       K={} functional equation residual terms: {}; q-difference within bound: {}",
                s.order, s.functional_equation_residual_terms, s.qdiff_within_bound
            );
            if let Some(e) = &s.error {
                let _ = writeln!(o, "series error {}", e);
            }
        }
        if let Some(r) = &self.run {
            let _ = writeln!(o, "run          {}", r.timestamp);
        }
        o
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub file: String,
    pub code: i32,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub double_zero: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conclusion: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case_label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: String,
    pub entries: Vec<SuiteEntry>,
    pub counts: BTreeMap<String, usize>,
    pub reports: Vec<AnalysisReport>,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut o = String::new();
        let _ = writeln!(o, "{:<28} {:>4}  {:<14} {:<28} {:<6} {}", "model", "code", "status", "curve", "dzero", "verdict");
        for e in &self.entries {
            let verdict = match (&e.conclusion, &e.case_label) {
                (Some(c), Some(l)) => format!("{} [{}]", c, l),
                _ => e.error.clone().unwrap_or_default(),
            };
            let _ = writeln!(
                o,
                "{:<28} {:>4}  {:<14} {:<28} {:<6} {}",
                e.file,
                e.code,
                e.status,
                e.curve.as_deref().unwrap_or("-"),
                e.double_zero.map_or("-".to_string(), |b| b.to_string()),
                verdict
            );
        }
        let counts: Vec<String> = self.counts.iter().map(|(k, v)| format!("{} {}", v, k)).collect();
        let dz = self.entries.iter().filter(|e| e.double_zero == Some(true)).count();
        let _ = writeln!(o, "total {}: {}", self.entries.len(), counts.join(", "));
        let _ = writeln!(o, "double zero in the y-discriminant: {} of {}", dz, self.entries.len());
        o
    }
}
