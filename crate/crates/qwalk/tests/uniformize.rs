use num_rational::BigRational;
use qwalk::kernel::*;
use qwalk::numerics::{CertifiedComplex, CertifiedReal, Precision};
use qwalk::uniformize::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn models() -> Vec<StepWeights> {
    use Dir::*;
    let mut v: Vec<_> = [
        vec![NW, N, SE],
        vec![NW, N, E, SE],
        vec![NW, NE, SE],
        vec![NW, N, NE, SE],
        vec![NW, N, NE, E, SE],
        vec![NW, E, SE],
    ]
    .iter()
    .map(|d| StepWeights::uniform(d))
    .collect();
    v.push(StepWeights::from_dirs(&[(NW, rat(1, 2)), (N, rat(1, 4)), (SE, rat(1, 4))]).unwrap());
    v
}

fn build(w: &StepWeights, t: BigRational) -> Uniformization {
    let km = build_kernel(w, &t).unwrap();
    let cls = genus_classify(&km, 128).unwrap();
    build_uniformization(&km, &cls, Precision::default()).unwrap()
}

fn random_unit(rng: &mut ChaCha8Rng, bits: u32) -> CertifiedComplex {
    // rational point on the unit circle from a Pythagorean parameter
    let m: i64 = rng.gen_range(1..50);
    let n: i64 = rng.gen_range(-50..50);
    let d = m * m + n * n;
    CertifiedComplex::new(
        CertifiedReal::from_rational(&rat(m * m - n * n, d), bits),
        CertifiedReal::from_rational(&rat(2 * m * n, d), bits),
    )
}

#[test]
fn points_lie_on_the_curve() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for w in models() {
        let u = build(&w, rat(157, 512));
        for _ in 0..20 {
            let s = random_unit(&mut rng, u.bits).mul(&CertifiedComplex::from_rational(&rat(rng.gen_range(1..9), 4), u.bits));
            let (x, y) = eval_phi(&u, &SParam::Finite(s)).unwrap();
            let k = u.kernel_at(&x, &y).unwrap();
            assert!(k.contains_zero(), "{} K = {}", w, k);
        }
    }
}

#[test]
fn involutions_preserve_coordinates() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for w in models() {
        let u = build(&w, rat(291, 512));
        for _ in 0..20 {
            let s = random_unit(&mut rng, u.bits).mul(&CertifiedComplex::from_rational(&rat(rng.gen_range(1..9), 3), u.bits));
            assert!(u.x(&s).unwrap().overlaps(&u.x(&u.iota1(&s).unwrap()).unwrap()));
            assert!(u.y(&s).unwrap().overlaps(&u.y(&u.iota2(&s).unwrap()).unwrap()));
        }
    }
}

#[test]
fn branch_points_reproduced() {
    for w in models() {
        let u = build(&w, rat(157, 512));
        let pts = u.distinguished_points();
        assert!(u.x_proj(&pts[0]).compatible(&ProjPoint::zero()));
        assert!(u.x_proj(&pts[1]).compatible(&ProjPoint::zero()));
        assert!(u.x_proj(&pts[2]).compatible(&u.branch_x[2]), "{}", w);
        assert!(u.x_proj(&pts[3]).compatible(&u.branch_x[3]), "{}", w);
        assert!(u.y_proj(&pts[4]).compatible(&u.branch_y[2]), "{}", w);
        assert!(u.y_proj(&pts[5]).compatible(&u.branch_y[3]), "{}", w);
        assert!(!u.branch_x[2].compatible(&u.branch_x[3]));
    }
}

#[test]
fn q_is_real_and_off_the_unit_circle() {
    for w in models() {
        let u = build(&w, rat(157, 512));
        let qf = q_formula(&w, &rat(157, 512), Precision::default()).unwrap();
        let qq = if u.q_inverted { qf.recip().unwrap() } else { qf };
        assert!(qq.overlaps(&u.q));
        assert!(u.q.sub(&CertifiedReal::one()).sign() == qwalk::numerics::Sign::Positive);
        let prod = u.q.mul(&u.q.recip().unwrap());
        assert!(prod.contains_rational(&rat(1, 1)));
    }
}

#[test]
fn q_limit_extrapolates_to_lambda_squared() {
    for w in models() {
        let km = build_kernel(&w, &rat(157, 512)).unwrap();
        let cls = genus_classify(&km, 128).unwrap();
        let u = build_uniformization(&km, &cls, Precision::fixed(256)).unwrap();
        let lim = q_limit(&u, &[3, 4, 5, 6]).unwrap();
        let l2 = u.lambda.mul(&u.lambda);
        let errs: Vec<f64> = lim.ratios.iter().map(|r| r.sub(&l2).abs().unwrap().to_f64()).collect();
        // linear convergence in s
        for p in errs.windows(2) {
            assert!(p[1] < p[0] / 5.0, "{}: {:?}", w, errs);
        }
        let gap = lim.extrapolated.sub(&l2).abs().unwrap().to_f64();
        assert!(gap < 1e-6 && gap < errs[3] / 100.0, "{}: gap {}", w, gap);
    }
}
