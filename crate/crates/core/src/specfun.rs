//! Real Airy function Ai(x), its derivative, and the zeros on the negative axis.
//!
//! Three evaluation regimes:
//!
//! * `|x| <= 5`: Maclaurin series (Taylor expansion about the origin).
//! * `|x| >= 10`: the standard large-argument expansions, exponential on the
//!   decaying side and trigonometric on the oscillating side.
//! * `5 < |x| < 10`: Taylor continuation of the ODE `y'' = x y` from a table of
//!   anchor values. The anchors are seeded by the asymptotic expansion at
//!   `|x| = 10` and stepped inward, a direction that is stable on both sides of
//!   the origin. The truncated asymptotic series alone is only good to ~1e-7 at
//!   `|x| = 5`.
//!
//! The series branch and the asymptotic-seeded branch are independent, so they
//! can be cross-checked where both apply (see [`branches`]).

use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Ai(0) = 3^{-2/3} / Γ(2/3).
pub const AI_0: f64 = 0.355_028_053_887_817_2;
/// Ai'(0) = -3^{-1/3} / Γ(1/3).
pub const AI_PRIME_0: f64 = -0.258_819_403_792_806_8;

const SERIES_LIMIT: f64 = 5.0;
const ASYMPTOTIC_LIMIT: f64 = 10.0;
const ANCHOR_STEP: f64 = 0.25;
// Anchors reach down to |x| = 3.5 so the asymptotic-seeded branch also covers
// the 4 <= |x| <= 6 cross-check window.
const ANCHOR_INNER: f64 = 3.5;

/// Returns Ai(x).
pub fn airy_ai(x: f64) -> Result<f64> {
    Ok(airy_pair(x)?.0)
}

/// Returns Ai'(x).
pub fn airy_ai_prime(x: f64) -> Result<f64> {
    Ok(airy_pair(x)?.1)
}

/// Returns `(Ai(x), Ai'(x))` in one evaluation.
pub fn airy_pair(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("Airy argument must be finite, got {x}")));
    }
    Ok(eval_unchecked(x))
}

pub(crate) fn eval_unchecked(x: f64) -> (f64, f64) {
    let ax = x.abs();
    if ax <= SERIES_LIMIT {
        branches::series(x)
    } else if ax >= ASYMPTOTIC_LIMIT {
        branches::asymptotic(x)
    } else {
        anchored(x)
    }
}

/// Independent evaluation branches, exposed for cross-checking.
pub mod branches {
    use super::*;

    /// Maclaurin series. Accurate to ~1e-13 absolute for `|x| <= 6`; loses
    /// digits to cancellation beyond that.
    pub fn series(x: f64) -> (f64, f64) {
        taylor(0.0, AI_0, AI_PRIME_0, x)
    }

    /// Large-argument expansion for `|x| >= 10`, and Taylor continuation from
    /// asymptotically seeded anchors for `3.5 <= |x| < 10`.
    ///
    /// # Panics
    /// If `|x| < 3.5`.
    pub fn asymptotic(x: f64) -> (f64, f64) {
        let ax = x.abs();
        assert!(ax >= ANCHOR_INNER, "asymptotic branch needs |x| >= {ANCHOR_INNER}");
        if ax >= ASYMPTOTIC_LIMIT {
            if x > 0.0 {
                decaying(x)
            } else {
                oscillating(-x)
            }
        } else {
            anchored(x)
        }
    }
}

/// Taylor expansion of the Airy ODE solution with `y(x0) = y0`, `y'(x0) = dy0`,
/// evaluated at `x`. Coefficients follow
/// `(k+2)(k+1) a_{k+2} = x0 a_k + a_{k-1}`.
fn taylor(x0: f64, y0: f64, dy0: f64, x: f64) -> (f64, f64) {
    let h = x - x0;
    // a[k-1], a[k], a[k+1] rolling window
    let mut a_prev = 0.0;
    let mut a_cur = y0;
    let mut a_next = dy0;
    let mut hk = 1.0; // h^k
    let mut y = 0.0;
    let mut dy = 0.0;
    let scale = y0.abs().max(dy0.abs()).max(f64::MIN_POSITIVE);
    let mut small_run = 0;
    for k in 0..400usize {
        let term = a_cur * hk;
        y += term;
        // d/dh of a_{k+1} h^{k+1}
        let dterm = (k as f64 + 1.0) * a_next * hk;
        dy += dterm;

        let kf = k as f64;
        let a_after = (x0 * a_cur + a_prev) / ((kf + 2.0) * (kf + 1.0));
        a_prev = a_cur;
        a_cur = a_next;
        a_next = a_after;
        hk *= h;

        let tiny = 1e-18 * (y.abs() + scale * 1e-3);
        if term.abs() <= tiny && dterm.abs() <= 1e-18 * (dy.abs() + scale * 1e-3) {
            // the recurrence has period 3 in its sparsity, wait out a full cycle
            small_run += 1;
            if small_run >= 3 {
                break;
            }
        } else {
            small_run = 0;
        }
    }
    (y, dy)
}

struct AnchorTable {
    // positive side, ascending from ANCHOR_INNER to ASYMPTOTIC_LIMIT
    positive: Vec<(f64, f64, f64)>,
    // negative side, keyed by |x|, ascending
    negative: Vec<(f64, f64, f64)>,
}

fn anchors() -> &'static AnchorTable {
    static TABLE: OnceLock<AnchorTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let count = ((ASYMPTOTIC_LIMIT - ANCHOR_INNER) / ANCHOR_STEP).round() as usize;
        let build = |sign: f64| {
            let start = sign * ASYMPTOTIC_LIMIT;
            let (mut y, mut dy) = if sign > 0.0 {
                decaying(start)
            } else {
                oscillating(-start)
            };
            let mut x = start;
            let mut out = vec![(x, y, dy)];
            for _ in 0..count {
                let next = x - sign * ANCHOR_STEP;
                let (ny, ndy) = taylor(x, y, dy, next);
                x = next;
                y = ny;
                dy = ndy;
                out.push((x, y, dy));
            }
            out.reverse();
            out
        };
        AnchorTable {
            positive: build(1.0),
            negative: build(-1.0),
        }
    })
}

fn anchored(x: f64) -> (f64, f64) {
    let table = anchors();
    let list = if x > 0.0 { &table.positive } else { &table.negative };
    let idx = ((x.abs() - ANCHOR_INNER) / ANCHOR_STEP).round() as usize;
    let (x0, y0, dy0) = list[idx.min(list.len() - 1)];
    taylor(x0, y0, dy0, x)
}

/// Coefficients u_k, v_k of the large-argument expansions.
fn expansion_coefficients() -> &'static [(f64, f64)] {
    static COEFFS: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut out = vec![(1.0, 1.0)];
        let mut u = 1.0;
        for k in 1..60 {
            let kf = k as f64;
            u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf);
            let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
            out.push((u, v));
        }
        out
    })
}

/// Sums an asymptotic series `sum c_k (±1/zeta)^k`, stopping at the smallest
/// term.
fn asymptotic_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    for t in terms {
        if t.abs() > last {
            break;
        }
        sum += t;
        last = t.abs();
        if t.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn decaying(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let coeffs = expansion_coefficients();
    let inv = -1.0 / zeta;
    let su = asymptotic_sum(coeffs.iter().scan(1.0, |p, &(u, _)| {
        let t = u * *p;
        *p *= inv;
        Some(t)
    }));
    let sv = asymptotic_sum(coeffs.iter().scan(1.0, |p, &(_, v)| {
        let t = v * *p;
        *p *= inv;
        Some(t)
    }));
    let e = (-zeta).exp();
    let q = x.sqrt().sqrt();
    let norm = 0.5 / PI.sqrt();
    (norm * e / q * su, -norm * q * e * sv)
}

fn oscillating(t: f64) -> (f64, f64) {
    // Ai(-t), Ai'(-t) for t > 0
    let zeta = 2.0 / 3.0 * t * t.sqrt();
    let coeffs = expansion_coefficients();
    let z2 = zeta * zeta;
    let even = |pick: fn(&(f64, f64)) -> f64| {
        asymptotic_sum(coeffs.iter().step_by(2).scan(1.0, move |p, c| {
            let term = pick(c) * *p;
            *p *= -1.0 / z2;
            Some(term)
        }))
    };
    let odd = |pick: fn(&(f64, f64)) -> f64| {
        asymptotic_sum(coeffs.iter().skip(1).step_by(2).scan(1.0 / zeta, move |p, c| {
            let term = pick(c) * *p;
            *p *= -1.0 / z2;
            Some(term)
        }))
    };
    let pu = even(|c| c.0);
    let qu = odd(|c| c.0);
    let pv = even(|c| c.1);
    let qv = odd(|c| c.1);
    let (s, c) = (zeta + FRAC_PI_4).sin_cos();
    let q = t.sqrt().sqrt();
    let rp = PI.sqrt();
    let ai = (s * pu - c * qu) / (rp * q);
    let aip = -q / rp * (c * pv + s * qv);
    (ai, aip)
}

/// The first `n_max` zeros of Ai on the negative axis, stored as positive
/// numbers `z_n` with `Ai(-z_n) = 0`, together with `|Ai'(-z_n)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct AiryZeroTable {
    zeros: Vec<f64>,
    derivatives_at_zero: Vec<f64>,
}

impl AiryZeroTable {
    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    pub fn derivatives_at_zero(&self) -> &[f64] {
        &self.derivatives_at_zero
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// `z_n` for the 1-based index `n`.
    pub fn zero(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.zeros.get(i).copied())
    }

    /// `|Ai'(-z_n)|` for the 1-based index `n`.
    pub fn derivative_at_zero(&self, n: usize) -> Option<f64> {
        n.checked_sub(1)
            .and_then(|i| self.derivatives_at_zero.get(i).copied())
    }
}

/// Crude asymptotic location `(3π(4n-1)/8)^{2/3}` of the n-th zero.
pub fn zero_seed(n: usize) -> f64 {
    (3.0 * PI * (4.0 * n as f64 - 1.0) / 8.0).powf(2.0 / 3.0)
}

/// Approximate number of zeros `z_n` not exceeding `z` (inverse of
/// [`zero_seed`]).
pub fn zero_count_below(z: f64) -> usize {
    if !(z > 0.0) {
        return 0;
    }
    ((8.0 * z.powf(1.5) / (3.0 * PI) + 1.0) / 4.0).floor() as usize
}

/// Refined asymptotic estimate `T(t)` with `t = 3π(4n-1)/8`.
fn zero_estimate(n: usize) -> f64 {
    let t = 3.0 * PI * (4.0 * n as f64 - 1.0) / 8.0;
    let t2 = t.powi(-2);
    t.powf(2.0 / 3.0)
        * (1.0 + t2 * (5.0 / 48.0 + t2 * (-5.0 / 36.0 + t2 * (77125.0 / 82944.0))))
}

const ZERO_TOL: f64 = 1e-12;

/// Safeguarded Newton iteration for the n-th zero: Newton on `f(z) = Ai(-z)`
/// inside a sign-change bracket, bisection whenever a step leaves the bracket
/// or fails to shrink the residual.
fn refine_zero(n: usize) -> Result<f64> {
    let guess = zero_estimate(n);
    // consecutive zeros are at least ~pi/sqrt(z) apart
    let half_gap = 0.4 * PI / guess.sqrt().max(1.0);
    let f = |z: f64| eval_unchecked(-z);
    let mut lo = guess - half_gap;
    let mut hi = guess + half_gap;
    let (mut flo, _) = f(lo);
    let (fhi, _) = f(hi);
    if flo.signum() == fhi.signum() {
        return Err(Error::Numeric(format!(
            "no sign change bracketing Airy zero {n} near {guess}"
        )));
    }
    let mut z = guess;
    let (mut fz, mut dfz) = f(z);
    for _ in 0..200 {
        if fz == 0.0 {
            return Ok(z);
        }
        if fz.signum() == flo.signum() {
            lo = z;
            flo = fz;
        } else {
            hi = z;
        }
        // d/dz Ai(-z) = -Ai'(-z)
        let newton = z + fz / dfz;
        let next = if newton > lo && newton < hi && dfz != 0.0 {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - z).abs();
        let (fn_, dfn) = f(next);
        let stagnated = fn_.abs() >= fz.abs() && step > ZERO_TOL;
        z = next;
        fz = fn_;
        dfz = dfn;
        if stagnated {
            z = 0.5 * (lo + hi);
            let r = f(z);
            fz = r.0;
            dfz = r.1;
        }
        if step <= ZERO_TOL || hi - lo <= ZERO_TOL {
            return Ok(z);
        }
    }
    Err(Error::Numeric(format!("Airy zero {n} did not converge")))
}

/// First `n_max` zeros of Ai on the negative axis.
pub fn airy_zeros(n_max: usize) -> Result<AiryZeroTable> {
    if n_max == 0 {
        return Err(Error::Argument("airy_zeros needs n_max >= 1".into()));
    }
    let mut zeros = Vec::with_capacity(n_max);
    let mut derivatives_at_zero = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let z = refine_zero(n)?;
        if let Some(&prev) = zeros.last() {
            if z <= prev {
                return Err(Error::Numeric(format!("Airy zero {n} out of order")));
            }
        }
        zeros.push(z);
        derivatives_at_zero.push(eval_unchecked(-z).1.abs());
    }
    Ok(AiryZeroTable {
        zeros,
        derivatives_at_zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // (x, Ai(x), Ai'(x)) from a 40-digit reference evaluation.
    const REFERENCE: &[(f64, f64, f64)] = &[
        (0.0, 0.355_028_053_887_817_2, -0.258_819_403_792_806_8),
        (1.5, 0.071_749_497_008_105_41, -0.097_382_012_842_301_32),
        (-1.5, 0.464_256_577_748_869_4, 0.309_186_967_202_410_4),
        (4.5, 0.000_330_250_323_514_308_96, -0.000_717_866_567_557_508_9),
        (-4.5, 0.292_152_781_055_959_5, -0.523_362_532_315_747_7),
        (5.5, 0.000_033_685_311_908_599_81, -0.000_080_463_391_305_565_15),
        (-5.5, 0.017_781_541_276_574_976, 0.864_197_217_771_398_4),
        (7.3, 3.325_137_824_437_759e-7, -9.094_540_388_833_464e-7),
        (-7.3, 0.335_770_370_515_147_3, -0.180_095_804_483_293_65),
        (9.9, 1.518_195_814_104_910_2e-10, -4.814_495_196_468_243e-10),
        (-9.9, 0.136_235_026_447_979_44, 0.907_813_331_537_150_9),
        (10.5, 2.202_274_519_283_401_5e-11, -7.187_696_781_451_567e-11),
        (-10.5, -0.311_926_035_051_050_6, 0.090_957_487_390_681_67),
        (15.0, 2.164_962_520_737_992_5e-18, -8.420_567_954_017_772e-18),
        (-15.0, 0.278_217_490_870_828_9, 0.272_374_204_308_642),
        (20.0, 1.691_672_868_670_540_4e-27, -7.586_391_625_748_354e-27),
        (-20.0, -0.176_406_127_077_984_7, 0.892_862_856_736_471_3),
        (-50.0, -0.161_881_423_612_320_9, 0.968_989_837_276_749),
        (-100.0, 0.176_753_393_239_552_9, -0.242_297_031_660_583_8),
        (-190.25, -0.051_362_696_630_901_48, 1.971_881_062_701_525_3),
    ];

    // decaying side, relative accuracy
    const REFERENCE_TAIL: &[(f64, f64, f64)] = &[
        (30.0, 3.208_217_591_550_495_4e-49, -1.759_876_581_432_726e-48),
        (50.0, 4.584_941_724_074_828_5e-104, -3.244_331_819_828_799e-103),
        (100.0, 2.634_482_152_088_184_6e-291, -2.635_140_361_604_409_7e-290),
    ];

    #[test]
    fn values_at_origin() {
        let (ai, aip) = airy_pair(0.0).unwrap();
        assert!((ai - 0.3550280538878172).abs() < 1e-15);
        assert!((aip + 0.2588194037928068).abs() < 1e-15);
    }

    #[test]
    fn matches_reference_table() {
        for &(x, ai, aip) in REFERENCE {
            let (a, ap) = airy_pair(x).unwrap();
            assert!((a - ai).abs() <= 1e-12, "Ai({x}) = {a}, want {ai}");
            // Ai' grows like |x|^{1/4}
            let tol = 1e-12 * x.abs().max(1.0).powf(0.25);
            assert!((ap - aip).abs() <= tol, "Ai'({x}) = {ap}, want {aip}");
        }
    }

    #[test]
    fn decaying_tail_is_relatively_accurate() {
        for &(x, ai, aip) in REFERENCE_TAIL {
            let (a, ap) = airy_pair(x).unwrap();
            assert!(((a - ai) / ai).abs() < 1e-10, "Ai({x})");
            assert!(((ap - aip) / aip).abs() < 1e-10, "Ai'({x})");
        }
        assert_eq!(airy_ai(200.0).unwrap(), 0.0);
    }

    #[test]
    fn monotone_decay_beyond_three() {
        let mut prev = airy_ai(3.0).unwrap();
        let mut x = 3.0;
        while x < 60.0 {
            x += 0.37;
            let v = airy_ai(x).unwrap();
            assert!(v < prev && v >= 0.0);
            prev = v;
        }
    }

    #[test]
    fn non_finite_is_domain_error() {
        assert!(matches!(airy_ai(f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(airy_ai_prime(f64::INFINITY), Err(Error::Domain(_))));
    }

    #[test]
    fn derivative_matches_central_difference() {
        let h = 1e-5;
        for &x in &[1.5, -1.5, -4.9, 5.1, -7.7, 8.8, -12.0, 11.0] {
            let fd = (airy_ai(x + h).unwrap() - airy_ai(x - h).unwrap()) / (2.0 * h);
            assert!((fd - airy_ai_prime(x).unwrap()).abs() < 1e-7, "x = {x}");
        }
    }

    #[test]
    fn branches_agree_in_overlap_window() {
        let mut x = 4.0;
        while x <= 6.0 {
            for s in [x, -x] {
                let (a1, d1) = branches::series(s);
                let (a2, d2) = branches::asymptotic(s);
                assert!((a1 * d1 - a2 * d2).abs() < 1e-9, "x = {s}");
                assert!((a1 - a2).abs() < 1e-11 && (d1 - d2).abs() < 1e-11, "x = {s}");
            }
            x += 0.05;
        }
    }

    #[test]
    fn regime_boundaries_are_continuous() {
        for b in [5.0, 10.0] {
            for s in [b, -b] {
                let eps = 1e-9;
                let lo = airy_pair(s - eps).unwrap();
                let hi = airy_pair(s + eps).unwrap();
                // first-order change across the gap: Ai' and Ai'' = x Ai
                assert!((hi.0 - lo.0 - 2.0 * eps * hi.1).abs() < 1e-12, "x = {s}");
                assert!((hi.1 - lo.1 - 2.0 * eps * s * hi.0).abs() < 1e-12, "x = {s}");
            }
        }
    }

    #[test]
    fn first_zeros() {
        let t = airy_zeros(2).unwrap();
        assert!((t.zeros()[0] - 2.338107410459767).abs() < 1e-12);
        assert!((t.zeros()[1] - 4.087_949_444_130_97).abs() < 1e-12);
        assert!((t.derivatives_at_zero()[0] - 0.701_210_822_720_691_4).abs() < 1e-12);
        assert_eq!(t.zero(1), Some(t.zeros()[0]));
        assert_eq!(t.zero(0), None);
        assert_eq!(t.zero(3), None);
    }

    #[test]
    fn zero_count_must_be_positive() {
        assert!(matches!(airy_zeros(0), Err(Error::Argument(_))));
    }

    #[test]
    fn far_zeros_match_reference() {
        // (n, z_n, |Ai'(-z_n)|)
        let reference = [
            (10, 12.828_776_752_865_757, 1.067_793_859_157_427_9),
            (50, 38.021_008_677_255_25, 1.400_978_883_949_769),
            (100, 60.455_557_274_116_7, 1.573_201_219_568_069_4),
            (200, 96.047_337_603_081_26, 1.766_226_655_137_970_2),
            (500, 177.009_251_046_479_2, 2.057_899_022_594_922_3),
        ];
        let t = airy_zeros(500).unwrap();
        for (n, z, d) in reference {
            assert!((t.zero(n).unwrap() - z).abs() < 1e-10, "z_{n}");
            assert!((t.derivative_at_zero(n).unwrap() - d).abs() < 1e-10, "Ai'(-z_{n})");
        }
    }

    #[test]
    fn zero_table_invariants() {
        let t = airy_zeros(200).unwrap();
        for (i, (&z, &d)) in t.zeros().iter().zip(t.derivatives_at_zero()).enumerate() {
            assert!(airy_ai(-z).unwrap().abs() < 1e-10);
            assert!(d > 0.0);
            assert!((zero_seed(i + 1) - z).abs() < 0.1, "seed too far at n = {}", i + 1);
            if i > 0 {
                assert!(z > t.zeros()[i - 1]);
            }
        }
    }

    #[test]
    fn tables_are_prefix_stable() {
        let a = airy_zeros(40).unwrap();
        let b = airy_zeros(75).unwrap();
        assert_eq!(a.zeros(), &b.zeros()[..40]);
        assert_eq!(a.derivatives_at_zero(), &b.derivatives_at_zero()[..40]);
    }
}
