//! Quantum bouncer in gravitational units: `H = p² + z` on `z ≥ 0` with a
//! hard mirror at the origin. Eigenstates are `φ_n(z) = Ai(z − z_n)/|Ai'(−z_n)|`
//! with energies `E_n = z_n`, and `ħ = 1`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expansion::{EigenExpansion, EigenTerm};
use crate::grid::{ComplexField, Domain1D, DomainKind};
use crate::specfun::{self, airy_zeros, AiryZeroTable};

/// Coefficients below this fraction of the largest one end the basis window.
pub const WINDOW_CUTOFF: f64 = 1e-10;
/// Edge coefficients must stay below this fraction of the largest one.
pub const EDGE_TOLERANCE: f64 = 1e-8;
/// Allowed deficit of `Σ|c_n|²` below one.
pub const COMPLETENESS_DEFICIT: f64 = 1e-3;
/// Allowed excess of `Σ|c_n|²` above one.
pub const COMPLETENESS_EXCESS: f64 = 1e-4;
/// Grid size of [`default_domain`].
pub const DEFAULT_POINTS: usize = 4096;
/// Largest zero table [`BouncerPacket::new`] will build.
pub const MAX_TABLE: usize = 50_000;

/// Consecutive sub-threshold coefficients required before the upper tail is
/// considered resolved (isolated nodes of the oscillating Ai can dip below
/// the cutoff on their own).
const TAIL_RUN: usize = 16;

/// A Gaussian packet `Ψ(z,0) = (2/(πσ²))^{1/4} exp(−(z−z0)²/σ²)` expanded on
/// the eigenbasis `n_min..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct BouncerPacket {
    pub z0: f64,
    pub sigma: f64,
    pub p0: f64,
    pub n_min: usize,
    pub n_max: usize,
    pub coeffs: EigenExpansion,
    /// `1/|Ai'(−z_n)|` for each term of `coeffs`.
    pub norms: Vec<f64>,
}

impl BouncerPacket {
    /// Builds the packet, growing the zero table until the window closes.
    pub fn new(z0: f64, sigma: f64) -> Result<Self> {
        check_packet_args(z0, sigma)?;
        let mut n = (specfun::zero_count_below(z0) * 2).max(64);
        loop {
            let table = airy_zeros(n)?;
            match packet_coefficients(z0, sigma, &table) {
                Err(Error::Truncation(_)) if n < MAX_TABLE => n = (n * 2).min(MAX_TABLE),
                other => return other,
            }
        }
    }

    /// Energy expectation `Σ|c_n|² z_n`.
    pub fn mean_energy(&self) -> f64 {
        self.coeffs.mean_energy()
    }

    /// Spectral autocorrelation `⟨Ψ(0)|Ψ(t)⟩`.
    pub fn autocorrelation(&self, t: f64) -> Complex64 {
        self.coeffs.autocorrelation(t, 1.0)
    }

    /// The term with the largest `|c_n|`.
    pub fn peak(&self) -> &EigenTerm {
        self.coeffs.peak().expect("packet has at least one term")
    }
}

fn check_packet_args(z0: f64, sigma: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Argument(format!("sigma must be positive, got {sigma}")));
    }
    if !(z0.is_finite() && z0 >= 5.0 * sigma) {
        return Err(Error::Argument(format!(
            "z0 = {z0} must be at least 5 sigma = {} above the mirror",
            5.0 * sigma
        )));
    }
    Ok(())
}

/// `φ_n(z) = Ai(z − z_n)/|Ai'(−z_n)|` for the 1-based level `n`.
pub fn eigenfunction(n: usize, z: &[f64], table: &AiryZeroTable) -> Result<Vec<f64>> {
    let (zn, norm) = level(n, table)?;
    check_heights(z)?;
    z.iter()
        .map(|&x| specfun::airy_ai(x - zn).map(|a| a * norm))
        .collect()
}

/// `φ_n'(z) = Ai'(z − z_n)/|Ai'(−z_n)|`.
pub fn eigenfunction_derivative(n: usize, z: &[f64], table: &AiryZeroTable) -> Result<Vec<f64>> {
    let (zn, norm) = level(n, table)?;
    check_heights(z)?;
    z.iter()
        .map(|&x| specfun::airy_ai_prime(x - zn).map(|a| a * norm))
        .collect()
}

fn level(n: usize, table: &AiryZeroTable) -> Result<(f64, f64)> {
    match (table.zero(n), table.derivative_at_zero(n)) {
        (Some(zn), Some(d)) => Ok((zn, 1.0 / d)),
        _ => Err(Error::Argument(format!(
            "level {n} outside the zero table (1..={})",
            table.len()
        ))),
    }
}

fn check_heights(z: &[f64]) -> Result<()> {
    match z.iter().find(|x| !(**x >= 0.0)) {
        Some(x) => Err(Error::Argument(format!("height {x} below the mirror"))),
        None => Ok(()),
    }
}

/// Closed-form overlap of the Gaussian packet with level `n`.
pub fn closed_form_coefficient(z0: f64, sigma: f64, zn: f64, norm: f64) -> f64 {
    let s2 = sigma * sigma;
    let s4 = s2 * s2;
    let ai = specfun::eval_unchecked(z0 - zn + s4 / 16.0).0;
    norm * (2.0 * std::f64::consts::PI * s2).powf(0.25)
        * (0.25 * s2 * (z0 - zn + s4 / 24.0)).exp()
        * ai
}

/// Expands the Gaussian packet on the levels of `table`, keeping the window
/// of levels whose coefficients exceed `WINDOW_CUTOFF` times the largest.
pub fn packet_coefficients(z0: f64, sigma: f64, table: &AiryZeroTable) -> Result<BouncerPacket> {
    check_packet_args(z0, sigma)?;
    if table.is_empty() {
        return Err(Error::Argument("empty zero table".into()));
    }
    let zeros = table.zeros();
    let norms: Vec<f64> = table.derivatives_at_zero().iter().map(|d| 1.0 / d).collect();
    let c: Vec<f64> = zeros
        .iter()
        .zip(&norms)
        .map(|(&zn, &nn)| closed_form_coefficient(z0, sigma, zn, nn))
        .collect();
    if let Some(bad) = c.iter().position(|v| !v.is_finite()) {
        return Err(Error::Numeric(format!("non-finite coefficient at level {}", bad + 1)));
    }
    let cmax = c.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let threshold = WINDOW_CUTOFF * cmax;
    let significant = |i: &usize| c[*i].abs() >= threshold;
    let first = (0..c.len()).find(significant).unwrap_or(0);
    let last = (0..c.len()).rev().find(significant).unwrap_or(0);
    if c.len() - 1 - last < TAIL_RUN {
        return Err(Error::Truncation(format!(
            "coefficients still above {WINDOW_CUTOFF:e} of the peak at the last of {} levels; \
             use a larger zero table",
            c.len()
        )));
    }
    let lo = first.saturating_sub(1);
    let hi = last + 1;
    if lo > 0 && c[lo].abs() >= EDGE_TOLERANCE * cmax {
        return Err(Error::Truncation(format!("lower edge coefficient at level {} too large", lo + 1)));
    }
    let terms: Vec<EigenTerm> = (lo..=hi)
        .map(|i| EigenTerm {
            quantum_number: i as i64 + 1,
            energy: zeros[i],
            coefficient: Complex64::new(c[i], 0.0),
        })
        .collect();
    let coeffs = EigenExpansion::new(terms);
    let total = coeffs.norm_squared();
    if !(1.0 - COMPLETENESS_DEFICIT..=1.0 + COMPLETENESS_EXCESS).contains(&total) {
        return Err(Error::Truncation(format!(
            "Σ|c_n|² = {total} over levels {}..={}; widen the basis window",
            lo + 1,
            hi + 1
        )));
    }
    Ok(BouncerPacket {
        z0,
        sigma,
        p0: 0.0,
        n_min: lo + 1,
        n_max: hi + 1,
        coeffs,
        norms: norms[lo..=hi].to_vec(),
    })
}

/// `[0, z0 + 8√z0]` with [`DEFAULT_POINTS`] nodes.
pub fn default_domain(z0: f64) -> Result<Domain1D> {
    Domain1D::half_line(z0 + 8.0 * z0.sqrt(), DEFAULT_POINTS)
}

/// The initial Gaussian and its derivative sampled on `domain`.
pub fn initial_gaussian(z0: f64, sigma: f64, domain: &Domain1D) -> Result<ComplexField> {
    let a = (2.0 / (std::f64::consts::PI * sigma * sigma)).powf(0.25);
    let z = domain.coordinates();
    let psi: Vec<Complex64> = z
        .iter()
        .map(|x| Complex64::new(a * (-(x - z0).powi(2) / (sigma * sigma)).exp(), 0.0))
        .collect();
    let dpsi = z
        .iter()
        .zip(&psi)
        .map(|(x, v)| v * (-2.0 * (x - z0) / (sigma * sigma)))
        .collect();
    ComplexField::new(domain.clone(), psi, Some(dpsi))
}

/// `(T_cl, T_r) = (2√z0, 4z0²/π)`.
pub fn bouncer_time_scales(z0: f64) -> Result<(f64, f64)> {
    if !(z0 > 0.0 && z0.is_finite()) {
        return Err(Error::Argument(format!("z0 must be positive, got {z0}")));
    }
    Ok((2.0 * z0.sqrt(), 4.0 * z0 * z0 / std::f64::consts::PI))
}

/// Evolves the packet on a sampled eigenbasis. Building the basis is the
/// expensive part; each time step is then two real matrix-vector products.
#[derive(Debug, Clone)]
pub struct BouncerPropagator {
    packet: BouncerPacket,
    domain: Domain1D,
    basis: Vec<f64>,
    dbasis: Vec<f64>,
    scale: f64,
}

impl BouncerPropagator {
    pub fn new(packet: BouncerPacket, domain: Domain1D) -> Result<Self> {
        if domain.kind() == DomainKind::Circle || domain.lower() < 0.0 {
            return Err(Error::Argument("bouncer domain must lie on z ≥ 0".into()));
        }
        let z = domain.coordinates();
        let rows: Vec<(Vec<f64>, Vec<f64>)> = packet
            .coeffs
            .terms()
            .par_iter()
            .zip(&packet.norms)
            .map(|(term, &nn)| {
                z.iter()
                    .map(|&x| {
                        let (a, d) = specfun::eval_unchecked(x - term.energy);
                        (a * nn, d * nn)
                    })
                    .unzip()
            })
            .collect();
        let mut basis = Vec::with_capacity(rows.len() * z.len());
        let mut dbasis = Vec::with_capacity(rows.len() * z.len());
        for (b, d) in rows {
            basis.extend(b);
            dbasis.extend(d);
        }
        let scale = 1.0 / packet.coeffs.norm_squared().sqrt();
        Ok(Self {
            packet,
            domain,
            basis,
            dbasis,
            scale,
        })
    }

    pub fn packet(&self) -> &BouncerPacket {
        &self.packet
    }

    pub fn domain(&self) -> &Domain1D {
        &self.domain
    }

    /// `Ψ(z,t) = Σ c_n e^{−i z_n t} φ_n(z)`, rescaled to unit coefficient norm,
    /// with the derivative channel from `Ai'`.
    pub fn evolve(&self, t: f64) -> Result<ComplexField> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::Argument(format!("time must be non-negative, got {t}")));
        }
        let m = self.domain.points();
        let (mut re, mut im) = (vec![0.0; m], vec![0.0; m]);
        let (mut dre, mut dim) = (vec![0.0; m], vec![0.0; m]);
        for (k, term) in self.packet.coeffs.terms().iter().enumerate() {
            let w = term.coefficient * Complex64::from_polar(self.scale, -term.energy * t);
            let row = &self.basis[k * m..(k + 1) * m];
            let drow = &self.dbasis[k * m..(k + 1) * m];
            for j in 0..m {
                re[j] += w.re * row[j];
                im[j] += w.im * row[j];
                dre[j] += w.re * drow[j];
                dim[j] += w.im * drow[j];
            }
        }
        let join = |a: Vec<f64>, b: Vec<f64>| -> Vec<Complex64> {
            a.into_iter().zip(b).map(|(r, i)| Complex64::new(r, i)).collect()
        };
        let values = join(re, im);
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Numeric(format!("non-finite amplitude at t = {t}")));
        }
        ComplexField::new(self.domain.clone(), values, Some(join(dre, dim)))
    }
}

/// One-shot evolution; prefer [`BouncerPropagator`] for many times.
pub fn evolve(packet: &BouncerPacket, t: f64, domain: &Domain1D) -> Result<ComplexField> {
    BouncerPropagator::new(packet.clone(), domain.clone())?.evolve(t)
}

/// `⟨ψ|p² + z|ψ⟩/⟨ψ|ψ⟩` by quadrature; needs the derivative channel.
pub fn energy_expectation(psi: &ComplexField) -> Result<f64> {
    let d = psi
        .derivative
        .as_ref()
        .ok_or_else(|| Error::Contract("energy expectation needs a derivative".into()))?;
    let z = psi.domain.coordinates();
    let w = psi.domain.weights();
    let e: f64 = (0..z.len())
        .map(|j| w[j] * (d[j].norm_sqr() + z[j] * psi.values[j].norm_sqr()))
        .sum();
    Ok(e / psi.norm_squared())
}
