//! Shannon entropy, entropy power, Fisher information and their product for a
//! sampled 1-D probability density, plus the inequality chain that links them
//! to the position-momentum uncertainty relation.

use std::f64::consts::{E, PI};

use crate::error::{Error, Result};
use crate::grid::{self, finite_difference, Domain1D, DomainKind};

/// Nodes with `ρ` below this are dropped from the entropy integrand (0·ln 0 = 0).
pub const ENTROPY_CUTOFF: f64 = 1e-300;
/// Nodes with `ρ` below this are dropped from the Fisher integrand.
pub const FISHER_CUTOFF: f64 = 1e-14;
/// Negative density entries above this are clamped to zero, below it rejected.
pub const NEGATIVE_TOLERANCE: f64 = -1e-12;
/// Required accuracy of `∫ρ = 1`.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;
/// Default stencil order for finite-difference derivatives.
pub const DEFAULT_FD_ORDER: usize = 8;

/// A sampled probability density with an optional analytic derivative.
#[derive(Debug, Clone)]
pub struct DensityProfile {
    domain: Domain1D,
    rho: Vec<f64>,
    drho: Option<Vec<f64>>,
}

impl DensityProfile {
    /// Validates shape, sign and normalization. Small negative entries
    /// (≥ −1e−12) are clamped to zero.
    pub fn new(domain: Domain1D, rho: Vec<f64>, drho: Option<Vec<f64>>) -> Result<Self> {
        let d = Self::unchecked_norm(domain, rho, drho)?;
        let total = grid::integrate(&d.rho, &d.domain)?;
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::Contract(format!("density integrates to {total}, not 1")));
        }
        Ok(d)
    }

    /// Like [`DensityProfile::new`] but rescales `ρ` (and `ρ'`) to unit mass.
    pub fn normalized(domain: Domain1D, rho: Vec<f64>, drho: Option<Vec<f64>>) -> Result<Self> {
        let mut d = Self::unchecked_norm(domain, rho, drho)?;
        let total = grid::integrate(&d.rho, &d.domain)?;
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::Numeric(format!("density mass {total} cannot be normalized")));
        }
        d.rho.iter_mut().for_each(|r| *r /= total);
        if let Some(dr) = d.drho.as_mut() {
            dr.iter_mut().for_each(|r| *r /= total);
        }
        Ok(d)
    }

    fn unchecked_norm(domain: Domain1D, mut rho: Vec<f64>, drho: Option<Vec<f64>>) -> Result<Self> {
        if rho.len() != domain.points() || drho.as_ref().is_some_and(|d| d.len() != rho.len()) {
            return Err(Error::Argument("density length does not match domain".into()));
        }
        for r in rho.iter_mut() {
            if r.is_nan() {
                return Err(Error::Numeric("NaN in density".into()));
            }
            if *r < NEGATIVE_TOLERANCE {
                return Err(Error::Contract(format!("negative density entry {r}")));
            }
            if *r < 0.0 {
                *r = 0.0;
            }
        }
        Ok(Self { domain, rho, drho })
    }

    pub fn domain(&self) -> &Domain1D {
        &self.domain
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn drho(&self) -> Option<&[f64]> {
        self.drho.as_deref()
    }

    /// Copy with the derivative channel replaced by a centered finite
    /// difference of `ρ`.
    pub fn with_finite_difference(&self, order: usize) -> Result<Self> {
        let d = finite_difference(&self.rho, &self.domain, order)?;
        Ok(Self {
            domain: self.domain.clone(),
            rho: self.rho.clone(),
            drho: Some(d),
        })
    }
}

/// All information measures of one density at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfoSample {
    pub t: f64,
    /// Shannon entropy S (nats).
    pub entropy: f64,
    /// Entropy power N = exp(2S)/(2πe).
    pub entropy_power: f64,
    /// Fisher information I.
    pub fisher: f64,
    /// Fisher-Shannon product P = I·N.
    pub product: f64,
    pub var_x: f64,
    pub var_p: Option<f64>,
}

impl InfoSample {
    /// Builds a sample, deriving N and P from S and I so the identities hold
    /// exactly.
    pub fn from_parts(t: f64, entropy: f64, fisher: f64, var_x: f64, var_p: Option<f64>) -> Self {
        let entropy_power = entropy_power(entropy);
        Self {
            t,
            entropy,
            entropy_power,
            fisher,
            product: fisher * entropy_power,
            var_x,
            var_p,
        }
    }
}

/// `−∫ρ ln ρ`.
pub fn shannon_entropy(rho: &DensityProfile) -> Result<f64> {
    let integrand: Vec<f64> = rho
        .rho
        .iter()
        .map(|&r| if r < ENTROPY_CUTOFF { 0.0 } else { -r * r.ln() })
        .collect();
    grid::integrate(&integrand, &rho.domain)
}

/// `exp(2S)/(2πe)`.
pub fn entropy_power(s: f64) -> f64 {
    (2.0 * s).exp() / (2.0 * PI * E)
}

fn fisher_from(rho: &[f64], drho: &[f64], domain: &Domain1D) -> Result<f64> {
    let integrand: Vec<f64> = rho
        .iter()
        .zip(drho)
        .map(|(&r, &d)| if r < FISHER_CUTOFF { 0.0 } else { d * d / r })
        .collect();
    grid::integrate(&integrand, domain)
}

/// `∫(ρ')²/ρ` using the analytic derivative channel.
pub fn fisher_information(rho: &DensityProfile) -> Result<f64> {
    let drho = rho.drho.as_deref().ok_or_else(|| {
        Error::Contract("Fisher information needs a density derivative".into())
    })?;
    fisher_from(&rho.rho, drho, &rho.domain)
}

/// `∫(ρ')²/ρ` with `ρ'` from a centered finite difference of the given order.
pub fn fisher_information_fd(rho: &DensityProfile, order: usize) -> Result<f64> {
    let d = finite_difference(&rho.rho, &rho.domain, order)?;
    fisher_from(&rho.rho, &d, &rho.domain)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfoOptions {
    /// Allowed undershoot of `P ≥ 1` on line domains.
    pub tol_iso: f64,
    /// Use a finite-difference derivative when the analytic one is missing.
    pub fd_fallback: bool,
    /// Turn an isoperimetric violation into an error instead of a diagnostic.
    pub strict: bool,
}

impl Default for InfoOptions {
    fn default() -> Self {
        Self {
            tol_iso: 1e-3,
            fd_fallback: false,
            strict: false,
        }
    }
}

/// `P < 1 − tol` on a line domain, usually a sign of an under-resolved grid.
#[derive(Debug, Clone, PartialEq)]
pub struct IsoperimetricViolation {
    pub t: f64,
    pub product: f64,
    pub tol_iso: f64,
}

impl std::fmt::Display for IsoperimetricViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "t = {}: P = {} below 1 - {}; refine the grid (more points or a wider window)",
            self.t, self.product, self.tol_iso
        )
    }
}

#[derive(Debug, Clone)]
pub struct ProductOutcome {
    pub sample: InfoSample,
    pub violation: Option<IsoperimetricViolation>,
}

/// Computes S, N, I and P for `rho` and checks `P ≥ 1 − tol_iso` on line
/// domains. Circle densities are never checked: the bound is a real-line
/// statement and a uniform circle density has P = 0.
pub fn fisher_shannon_product(
    rho: &DensityProfile,
    t: f64,
    var_p: Option<f64>,
    opts: &InfoOptions,
) -> Result<ProductOutcome> {
    let s = shannon_entropy(rho)?;
    let i = match (rho.drho.is_some(), opts.fd_fallback) {
        (true, _) => fisher_information(rho)?,
        (false, true) => fisher_information_fd(rho, DEFAULT_FD_ORDER)?,
        (false, false) => {
            return Err(Error::Contract(
                "density has no derivative and finite-difference fallback is disabled".into(),
            ))
        }
    };
    let sample = InfoSample::from_parts(t, s, i, grid::variance(rho), var_p);
    let violation = match rho.domain.kind() {
        DomainKind::Circle => None,
        DomainKind::HalfLine | DomainKind::Line => (sample.product < 1.0 - opts.tol_iso)
            .then_some(IsoperimetricViolation {
                t,
                product: sample.product,
                tol_iso: opts.tol_iso,
            }),
    };
    if let (true, Some(v)) = (opts.strict, &violation) {
        return Err(Error::Contract(v.to_string()));
    }
    Ok(ProductOutcome { sample, violation })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityCheck {
    pub holds: bool,
    /// Distance from the bound, positive when the inequality is satisfied.
    pub margin: f64,
}

impl InequalityCheck {
    fn new(margin: f64, tol: f64) -> Self {
        Self {
            holds: margin >= -tol,
            margin,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyReport {
    /// Stam: `I ≤ 4 Δp²/ħ²`, margin `4Δp²/ħ² − I`.
    pub stam: InequalityCheck,
    /// Power entropy: `N ≤ Δx²`, margin `Δx² − N`.
    pub power_entropy: InequalityCheck,
    /// Heisenberg: `Δx Δp ≥ ħ/2`, margin `ΔxΔp − ħ/2`.
    pub heisenberg: InequalityCheck,
}

impl UncertaintyReport {
    pub fn all_hold(&self) -> bool {
        self.stam.holds && self.power_entropy.holds && self.heisenberg.holds
    }
}

/// Checks the chain `1/Δx² ≤ 1/N ≤ I ≤ 4Δp²/ħ²` that ends in `ΔxΔp ≥ ħ/2`.
///
/// The Fisher information of the position density is bounded *above* by the
/// momentum variance: for `ψ = √ρ e^{iθ}`, `4Δp² = I + 4 Var_ρ(θ')`.
pub fn check_uncertainty_chain(
    sample: &InfoSample,
    hbar_eff: f64,
    tol: f64,
) -> Result<UncertaintyReport> {
    let var_p = sample
        .var_p
        .ok_or_else(|| Error::Argument("uncertainty chain needs a momentum variance".into()))?;
    let h2 = hbar_eff * hbar_eff;
    Ok(UncertaintyReport {
        stam: InequalityCheck::new(4.0 * var_p / h2 - sample.fisher, tol),
        power_entropy: InequalityCheck::new(sample.var_x - sample.entropy_power, tol),
        heisenberg: InequalityCheck::new((sample.var_x * var_p).sqrt() - 0.5 * hbar_eff, tol),
    })
}
