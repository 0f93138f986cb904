//! Massive Dirac fermions on a zero-width graphene ring.
//!
//! Energies are in meV, lengths in nm, times in ns. Level `m` has
//! `E_m = E0 ε_m` with `ε_m = ±√(m(m+1) + ν² + 1/4)`, `E0 = ħv_F/R`,
//! `ν = Δ/E0`, and spinor `N_m (e^{imφ}, i φ_B e^{i(m+1)φ})` with
//! `φ_B = (m+½)/(ε_m + τν)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::expansion::{EigenExpansion, EigenTerm};
use crate::grid::Domain1D;
use crate::infomeasures::DensityProfile;

/// `ħ v_F` for `v_F = 10⁶ m/s`, in meV·nm.
pub const HBAR_VF_MEV_NM: f64 = 658.211_956_9;
/// `ħ` in meV·ns.
pub const HBAR_MEV_NS: f64 = 6.582_119_569e-4;
/// Smallest angular grid accepted by [`evolve_ring`].
pub const MIN_ANGULAR_POINTS: usize = 512;
/// Half-width of the packet window in units of `σ_m`.
pub const WINDOW_SIGMAS: f64 = 6.0;
/// Largest `|m|` a packet window may reach.
pub const MAX_ANGULAR_MOMENTUM: i64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valley {
    K,
    KPrime,
}

impl Valley {
    /// `τ = ±1`.
    pub fn tau(self) -> f64 {
        match self {
            Valley::K => 1.0,
            Valley::KPrime => -1.0,
        }
    }

    pub fn from_tau(tau: i32) -> Result<Self> {
        match tau {
            1 => Ok(Valley::K),
            -1 => Ok(Valley::KPrime),
            _ => Err(Error::Argument(format!("tau must be +1 or -1, got {tau}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Positive,
    Negative,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Positive => 1.0,
            Branch::Negative => -1.0,
        }
    }
}

/// Exponent convention of the Gaussian over `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WidthConvention {
    /// `exp(−(m−m0)²/(2σ²))`
    #[default]
    Standard,
    /// `exp(−(m−m0)²/σ²)`
    Narrow,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingParams {
    radius_nm: f64,
    delta_mev: f64,
    valley: Valley,
    branch: Branch,
    e0: f64,
    nu: f64,
}

impl RingParams {
    pub fn new(radius_nm: f64, delta_mev: f64, valley: Valley, branch: Branch) -> Result<Self> {
        if !(radius_nm > 0.0 && radius_nm.is_finite()) {
            return Err(Error::Argument(format!("radius must be positive, got {radius_nm}")));
        }
        if !(delta_mev >= 0.0 && delta_mev.is_finite()) {
            return Err(Error::Argument(format!("gap must be non-negative, got {delta_mev}")));
        }
        let e0 = HBAR_VF_MEV_NM / radius_nm;
        Ok(Self {
            radius_nm,
            delta_mev,
            valley,
            branch,
            e0,
            nu: delta_mev / e0,
        })
    }

    pub fn radius_nm(&self) -> f64 {
        self.radius_nm
    }

    pub fn delta_mev(&self) -> f64 {
        self.delta_mev
    }

    pub fn valley(&self) -> Valley {
        self.valley
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    /// `E0 = ħv_F/R` in meV.
    pub fn e0(&self) -> f64 {
        self.e0
    }

    /// `ν = Δ/E0`.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// `ε_m` on the selected branch.
    pub fn reduced_energy(&self, m: i64) -> f64 {
        let m = m as f64;
        self.branch.sign() * (m * (m + 1.0) + self.nu * self.nu + 0.25).sqrt()
    }

    /// `φ_B(m) = (m+½)/(ε_m + τν)`.
    pub fn spinor_b(&self, m: i64) -> f64 {
        (m as f64 + 0.5) / (self.reduced_energy(m) + self.valley.tau() * self.nu)
    }
}

/// `E_m = E0 ε_m` in meV.
pub fn dispersion(m: i64, params: &RingParams) -> f64 {
    params.e0 * params.reduced_energy(m)
}

/// Smallest `m ≥ 0` whose positive-branch energy reaches `target_mev`.
pub fn first_level_reaching(target_mev: f64, params: &RingParams) -> Result<i64> {
    let p = RingParams {
        branch: Branch::Positive,
        ..*params
    };
    (0..=MAX_ANGULAR_MOMENTUM)
        .find(|&m| dispersion(m, &p) >= target_mev)
        .ok_or_else(|| Error::Argument(format!("no level below |m| = {MAX_ANGULAR_MOMENTUM} reaches {target_mev} meV")))
}

/// A Gaussian superposition of ring eigenstates.
#[derive(Debug, Clone, PartialEq)]
pub struct RingPacket {
    pub m0: i64,
    pub sigma_m: f64,
    pub params: RingParams,
    pub convention: WidthConvention,
    /// Coefficients over `m`, normalized to `Σ|c_m|² = 1`, energies in meV.
    pub coeffs: EigenExpansion,
    pub spinor_b: Vec<f64>,
    /// `N_m = [2π(1 + φ_B²)]^{−1/2}`.
    pub norms: Vec<f64>,
}

impl RingPacket {
    pub fn m_min(&self) -> i64 {
        self.coeffs.terms()[0].quantum_number
    }

    pub fn m_max(&self) -> i64 {
        self.coeffs.terms().last().unwrap().quantum_number
    }

    /// Spectral autocorrelation with `t` in ns.
    pub fn autocorrelation(&self, t_ns: f64) -> Complex64 {
        self.coeffs.autocorrelation(t_ns, HBAR_MEV_NS)
    }
}

/// Builds `c_m ∝ exp(−(m−m0)²/(2σ²))` (or the narrow variant) on `m0 ± 6σ`.
pub fn ring_packet(
    m0: i64,
    sigma_m: f64,
    params: &RingParams,
    convention: WidthConvention,
) -> Result<RingPacket> {
    if !(sigma_m > 0.0 && sigma_m.is_finite()) {
        return Err(Error::Argument(format!("sigma_m must be positive, got {sigma_m}")));
    }
    let half = (WINDOW_SIGMAS * sigma_m).ceil() as i64;
    let (lo, hi) = (m0 - half, m0 + half);
    if lo < -MAX_ANGULAR_MOMENTUM || hi > MAX_ANGULAR_MOMENTUM {
        return Err(Error::Argument(format!(
            "packet window {lo}..={hi} exceeds |m| ≤ {MAX_ANGULAR_MOMENTUM}"
        )));
    }
    let denom = match convention {
        WidthConvention::Standard => 2.0 * sigma_m * sigma_m,
        WidthConvention::Narrow => sigma_m * sigma_m,
    };
    let raw: Vec<(i64, f64)> = (lo..=hi)
        .map(|m| (m, (-((m - m0) as f64).powi(2) / denom).exp()))
        .filter(|(_, c)| *c > 0.0)
        .collect();
    let total: f64 = raw.iter().map(|(_, c)| c * c).sum::<f64>().sqrt();
    let mut terms = Vec::with_capacity(raw.len());
    let mut spinor_b = Vec::with_capacity(raw.len());
    let mut norms = Vec::with_capacity(raw.len());
    for (m, c) in raw {
        let b = params.spinor_b(m);
        if !b.is_finite() {
            return Err(Error::Argument(format!("spinor component undefined at m = {m}")));
        }
        terms.push(EigenTerm {
            quantum_number: m,
            energy: dispersion(m, params),
            coefficient: Complex64::new(c / total, 0.0),
        });
        spinor_b.push(b);
        norms.push((2.0 * PI * (1.0 + b * b)).sqrt().recip());
    }
    Ok(RingPacket {
        m0,
        sigma_m,
        params: *params,
        convention,
        coeffs: EigenExpansion::new(terms),
        spinor_b,
        norms,
    })
}

/// Angular density `ρ(φ,t) = |A|² + |B|²` on a uniform circle grid, with the
/// analytic derivative from the mode sums.
pub fn evolve_ring(packet: &RingPacket, t_ns: f64, angular_points: usize) -> Result<DensityProfile> {
    if angular_points < MIN_ANGULAR_POINTS {
        return Err(Error::Argument(format!(
            "angular_points must be at least {MIN_ANGULAR_POINTS}, got {angular_points}"
        )));
    }
    let span = (packet.m_max() - packet.m_min() + 2) as usize;
    if angular_points <= 2 * span {
        return Err(Error::Argument(format!(
            "angular_points = {angular_points} cannot resolve {span} angular harmonics"
        )));
    }
    if !t_ns.is_finite() {
        return Err(Error::Argument(format!("time must be finite, got {t_ns}")));
    }
    let k = angular_points as i64;
    let mut bufs = vec![vec![Complex64::new(0.0, 0.0); angular_points]; 4];
    for ((term, &b), &nm) in packet
        .coeffs
        .terms()
        .iter()
        .zip(&packet.spinor_b)
        .zip(&packet.norms)
    {
        let m = term.quantum_number;
        let a = term.coefficient * Complex64::from_polar(nm, -term.energy * t_ns / HBAR_MEV_NS);
        let ia = m.rem_euclid(k) as usize;
        let ib = (m + 1).rem_euclid(k) as usize;
        let i = Complex64::i();
        bufs[0][ia] += a;
        bufs[1][ia] += a * i * m as f64;
        bufs[2][ib] += a * i * b;
        bufs[3][ib] += a * i * b * i * (m + 1) as f64;
    }
    let fft = FftPlanner::new().plan_fft_inverse(angular_points);
    for buf in bufs.iter_mut() {
        fft.process(buf);
    }
    let (rho, drho): (Vec<f64>, Vec<f64>) = (0..angular_points)
        .map(|j| {
            let (a, da, bb, db) = (bufs[0][j], bufs[1][j], bufs[2][j], bufs[3][j]);
            (
                a.norm_sqr() + bb.norm_sqr(),
                2.0 * ((a.conj() * da).re + (bb.conj() * db).re),
            )
        })
        .unzip();
    if rho.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric(format!("non-finite ring density at t = {t_ns}")));
    }
    DensityProfile::new(Domain1D::circle(angular_points)?, rho, Some(drho))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingTimeScales {
    /// Classical period in ns.
    pub t_cl: f64,
    /// Revival time in ns; `None` when the spectrum is linear (`ν = 0`).
    pub t_r: Option<f64>,
}

/// `T_cl = 2πħ/(E0|ε'|)`, `T_r = 4πħ/(E0|ε''|)` with `ε' = (m+½)/ε`,
/// `ε'' = ν²/ε³` evaluated at `m0`.
pub fn ring_time_scales(m0: i64, params: &RingParams) -> Result<RingTimeScales> {
    if params.branch != Branch::Positive {
        return Err(Error::Argument("time scales are defined on the positive branch".into()));
    }
    let eps = params.reduced_energy(m0);
    let d1 = (m0 as f64 + 0.5) / eps;
    let d2 = params.nu * params.nu / eps.powi(3);
    let t_cl = 2.0 * PI * HBAR_MEV_NS / (params.e0 * d1.abs());
    let t_r = (d2 > 0.0).then(|| 4.0 * PI * HBAR_MEV_NS / (params.e0 * d2));
    Ok(RingTimeScales { t_cl, t_r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::integrate;
    use crate::infomeasures::{fisher_shannon_product, InfoOptions};

    fn fig2() -> RingParams {
        RingParams::new(50.0, 50.0, Valley::K, Branch::Positive).unwrap()
    }

    #[test]
    fn dispersion_examples() {
        let p = RingParams::new(HBAR_VF_MEV_NM, 0.0, Valley::K, Branch::Positive).unwrap();
        assert_eq!(p.e0(), 1.0);
        assert!((dispersion(0, &p) - 0.5).abs() < 1e-15);
        assert!((dispersion(-1, &p) - 0.5).abs() < 1e-15);
        let q = RingParams { branch: Branch::Negative, ..p };
        assert!((dispersion(0, &q) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn figure_parameters() {
        let p = fig2();
        assert!((p.e0() - 13.164).abs() < 1e-3);
        assert!((p.nu() - 3.798).abs() < 1e-3);
        assert_eq!(p.nu(), p.delta_mev() / p.e0());
        let brute = (0..1000).find(|&m| {
            let m = m as f64;
            13.164239138 * (m * (m + 1.0) + p.nu().powi(2) + 0.25).sqrt() >= 200.0
        });
        assert_eq!(first_level_reaching(200.0, &p).unwrap(), brute.unwrap());
        assert_eq!(brute.unwrap(), 15);
    }

    #[test]
    fn packet_normalization_and_symmetry() {
        let pk = ring_packet(15, 13.0, &fig2(), WidthConvention::Standard).unwrap();
        assert!((pk.coeffs.norm_squared() - 1.0).abs() < 1e-10);
        let t = pk.coeffs.terms();
        let c = |m: i64| t.iter().find(|x| x.quantum_number == m).unwrap().coefficient;
        for k in 1..60 {
            assert_eq!(c(15 + k), c(15 - k));
        }
        let narrow = ring_packet(0, 1e-6, &fig2(), WidthConvention::Standard).unwrap();
        assert_eq!(narrow.coeffs.len(), 1);
        assert_eq!(narrow.coeffs.terms()[0].quantum_number, 0);
    }

    #[test]
    fn basis_states_are_unit_vectors() {
        let pk = ring_packet(15, 13.0, &fig2(), WidthConvention::Standard).unwrap();
        let d = Domain1D::circle(2048).unwrap();
        for (&b, &nm) in pk.spinor_b.iter().zip(&pk.norms) {
            let f = vec![nm * nm * (1.0 + b * b); 2048];
            assert!((integrate(&f, &d).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_packets() {
        let p = fig2();
        assert!(ring_packet(15, 0.0, &p, WidthConvention::Standard).is_err());
        assert!(ring_packet(15, f64::NAN, &p, WidthConvention::Standard).is_err());
        assert!(ring_packet(99_990, 13.0, &p, WidthConvention::Standard).is_err());
        let pk = ring_packet(15, 13.0, &p, WidthConvention::Standard).unwrap();
        assert!(matches!(evolve_ring(&pk, 0.0, 256), Err(Error::Argument(_))));
    }

    #[test]
    fn density_is_normalized_and_positive() {
        let pk = ring_packet(15, 13.0, &fig2(), WidthConvention::Standard).unwrap();
        for t in [0.0, 0.013, 0.0885, 0.177, 1.3] {
            let rho = evolve_ring(&pk, t, 2048).unwrap();
            let mass = integrate(rho.rho(), rho.domain()).unwrap();
            assert!((mass - 1.0).abs() < 1e-8, "t={t}");
            assert!(rho.rho().iter().all(|v| *v >= 0.0));
        }
    }

    #[test]
    fn analytic_derivative_matches_finite_difference() {
        let pk = ring_packet(15, 13.0, &fig2(), WidthConvention::Standard).unwrap();
        let rho = evolve_ring(&pk, 0.05, 4096).unwrap();
        let fd = rho.with_finite_difference(8).unwrap();
        let scale = rho.drho().unwrap().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        for (a, b) in rho.drho().unwrap().iter().zip(fd.drho().unwrap()) {
            assert!((a - b).abs() < 1e-8 * scale);
        }
    }

    #[test]
    fn single_mode_is_stationary() {
        let pk = ring_packet(15, 1e-6, &fig2(), WidthConvention::Standard).unwrap();
        let r0 = evolve_ring(&pk, 0.0, 512).unwrap();
        for t in [0.01, 0.5, 3.0] {
            let r = evolve_ring(&pk, t, 512).unwrap();
            for (a, b) in r0.rho().iter().zip(r.rho()) {
                assert!((a - b).abs() < 1e-12);
                assert!((a - 0.5 / PI).abs() < 1e-12);
            }
            let p = fisher_shannon_product(&r, t, None, &InfoOptions::default()).unwrap();
            assert!(p.sample.product.abs() < 1e-10);
        }
    }

    #[test]
    fn valley_exchange_leaves_density_unchanged() {
        // φ_B(−τ) = 1/φ_B(τ), so the two sublattice sums trade places. The
        // identity needs every φ_B of one sign, i.e. m ≥ 0 throughout.
        let k = fig2();
        let kp = RingParams::new(50.0, 50.0, Valley::KPrime, Branch::Positive).unwrap();
        let a = ring_packet(40, 5.0, &k, WidthConvention::Standard).unwrap();
        let b = ring_packet(40, 5.0, &kp, WidthConvention::Standard).unwrap();
        assert!(a.m_min() >= 0);
        for t in [0.0, 0.07] {
            let ra = evolve_ring(&a, t, 1024).unwrap();
            let rb = evolve_ring(&b, t, 1024).unwrap();
            for (x, y) in ra.rho().iter().zip(rb.rho()) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn time_scales_and_curvature() {
        let p = fig2();
        let ts = ring_time_scales(15, &p).unwrap();
        let t_r = ts.t_r.unwrap();
        assert!((t_r - 0.177).abs() < 1e-3, "{t_r}");
        let e2 = dispersion(16, &p) - 2.0 * dispersion(15, &p) + dispersion(14, &p);
        let eps = p.reduced_energy(15);
        let analytic = p.e0() * p.nu().powi(2) / eps.powi(3);
        assert!(((e2 - analytic) / analytic).abs() < 5e-3);
        let e1 = (dispersion(16, &p) - dispersion(14, &p)) / 2.0;
        let t_cl_fd = 2.0 * PI * HBAR_MEV_NS / e1;
        assert!(((t_cl_fd - ts.t_cl) / ts.t_cl).abs() < 1e-3);
    }

    #[test]
    fn massless_ring_has_no_revival() {
        let p = RingParams::new(50.0, 0.0, Valley::K, Branch::Positive).unwrap();
        let ts = ring_time_scales(7, &p).unwrap();
        assert_eq!(ts.t_r, None);
        assert!((ts.t_cl - 2.0 * PI * HBAR_MEV_NS / p.e0()).abs() < 1e-15);
        let neg = RingParams { branch: Branch::Negative, ..p };
        assert!(ring_time_scales(7, &neg).is_err());
    }
}
