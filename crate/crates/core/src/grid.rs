//! Uniform 1-D grids, quadrature, finite differences and the
//! position-to-momentum transform.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::infomeasures::DensityProfile;

/// Minimum number of grid points accepted by [`Domain1D`].
pub const MIN_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    /// Truncated half-line `[lower, upper]`, both end points sampled.
    HalfLine,
    /// Finite segment of the real line, both end points sampled.
    Line,
    /// The circle `[0, 2π)` with periodic wrap; `upper` is not sampled.
    Circle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Domain1D {
    kind: DomainKind,
    lower: f64,
    upper: f64,
    points: usize,
}

impl Domain1D {
    pub fn half_line(upper: f64, points: usize) -> Result<Self> {
        Self::checked(DomainKind::HalfLine, 0.0, upper, points)
    }

    pub fn line(lower: f64, upper: f64, points: usize) -> Result<Self> {
        Self::checked(DomainKind::Line, lower, upper, points)
    }

    pub fn circle(points: usize) -> Result<Self> {
        Self::checked(DomainKind::Circle, 0.0, 2.0 * PI, points)
    }

    fn checked(kind: DomainKind, lower: f64, upper: f64, points: usize) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) || upper <= lower {
            return Err(Error::Argument(format!(
                "domain bounds must satisfy lower < upper, got [{lower}, {upper}]"
            )));
        }
        if points < MIN_POINTS {
            return Err(Error::Argument(format!(
                "domain needs at least {MIN_POINTS} points, got {points}"
            )));
        }
        Ok(Self {
            kind,
            lower,
            upper,
            points,
        })
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn is_periodic(&self) -> bool {
        self.kind == DomainKind::Circle
    }

    pub fn spacing(&self) -> f64 {
        match self.kind {
            DomainKind::Circle => (self.upper - self.lower) / self.points as f64,
            DomainKind::HalfLine | DomainKind::Line => {
                (self.upper - self.lower) / (self.points - 1) as f64
            }
        }
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        self.lower + i as f64 * self.spacing()
    }

    pub fn coordinates(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.points).map(|i| self.lower + i as f64 * h).collect()
    }

    /// Quadrature weights: composite Simpson on line kinds (Simpson 3/8 on the
    /// last three intervals when the interval count is odd), periodic
    /// trapezoid on the circle.
    pub fn weights(&self) -> Vec<f64> {
        let h = self.spacing();
        let n = self.points;
        if self.is_periodic() {
            return vec![h; n];
        }
        let mut w = vec![0.0; n];
        let intervals = n - 1;
        let simpson_end = if intervals.is_multiple_of(2) { n - 1 } else { n - 4 };
        for i in (0..simpson_end).step_by(2) {
            w[i] += h / 3.0;
            w[i + 1] += 4.0 * h / 3.0;
            w[i + 2] += h / 3.0;
        }
        if simpson_end != n - 1 {
            let s = simpson_end;
            w[s] += 3.0 * h / 8.0;
            w[s + 1] += 9.0 * h / 8.0;
            w[s + 2] += 9.0 * h / 8.0;
            w[s + 3] += 3.0 * h / 8.0;
        }
        w
    }
}

/// Quadrature of sampled values over `domain`.
pub fn integrate(f: &[f64], domain: &Domain1D) -> Result<f64> {
    if f.len() != domain.points() {
        return Err(Error::Argument(format!(
            "integrand has {} samples, domain has {}",
            f.len(),
            domain.points()
        )));
    }
    if f.iter().any(|v| v.is_nan()) {
        return Err(Error::Numeric("NaN in integrand".into()));
    }
    Ok(domain.weights().iter().zip(f).map(|(w, v)| w * v).sum())
}

/// First-derivative weights at offset 0 for the given stencil offsets
/// (Fornberg's recursion, unit spacing).
fn fornberg_first_derivative(offsets: &[f64]) -> Vec<f64> {
    let n = offsets.len();
    // c[j][m] for derivative order m in {0, 1}
    let mut c = vec![[0.0f64; 2]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = offsets[0];
    for i in 1..n {
        let mn = i.min(1);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = offsets[i];
        for j in 0..i {
            let c3 = offsets[i] - offsets[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[1]).collect()
}

/// Centered finite-difference derivative of even `order` (2, 4, 6, 8, ...).
/// Periodic wrap on the circle; one-sided stencils of the same order near the
/// ends of line domains.
pub fn finite_difference(values: &[f64], domain: &Domain1D, order: usize) -> Result<Vec<f64>> {
    if order < 2 || !order.is_multiple_of(2) {
        return Err(Error::Argument(format!(
            "finite-difference order must be even and >= 2, got {order}"
        )));
    }
    let n = values.len();
    if n != domain.points() || n <= order {
        return Err(Error::Argument("finite-difference input does not fit the domain".into()));
    }
    let h = domain.spacing();
    let half = order / 2;
    let centered_offsets: Vec<f64> = (-(half as i64)..=half as i64).map(|o| o as f64).collect();
    let centered = fornberg_first_derivative(&centered_offsets);
    let mut out = vec![0.0; n];
    for (i, slot) in out.iter_mut().enumerate() {
        let (start, weights): (i64, std::borrow::Cow<'_, [f64]>) =
            if domain.is_periodic() || (i >= half && i + half < n) {
                (i as i64 - half as i64, (&centered[..]).into())
            } else {
                let start = if i < half { 0 } else { n - 1 - order };
                let offs: Vec<f64> = (0..=order).map(|k| (start + k) as f64 - i as f64).collect();
                (start as i64, fornberg_first_derivative(&offs).into())
            };
        let mut acc = 0.0;
        for (k, w) in weights.iter().enumerate() {
            let idx = (start + k as i64).rem_euclid(n as i64) as usize;
            acc += w * values[idx];
        }
        *slot = acc / h;
    }
    Ok(out)
}

/// Complex amplitude sampled on a domain, with an optional analytic
/// derivative channel.
#[derive(Debug, Clone)]
pub struct ComplexField {
    pub domain: Domain1D,
    pub values: Vec<Complex64>,
    pub derivative: Option<Vec<Complex64>>,
}

impl ComplexField {
    pub fn new(
        domain: Domain1D,
        values: Vec<Complex64>,
        derivative: Option<Vec<Complex64>>,
    ) -> Result<Self> {
        if values.len() != domain.points()
            || derivative.as_ref().is_some_and(|d| d.len() != domain.points())
        {
            return Err(Error::Argument("field length does not match domain".into()));
        }
        Ok(Self {
            domain,
            values,
            derivative,
        })
    }

    /// `∫|ψ|²`.
    pub fn norm_squared(&self) -> f64 {
        let w = self.domain.weights();
        w.iter().zip(&self.values).map(|(w, v)| w * v.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n2 = self.norm_squared();
        if !(n2 > 0.0 && n2.is_finite()) {
            return Err(Error::Numeric(format!("cannot normalize field with norm² {n2}")));
        }
        let s = 1.0 / n2.sqrt();
        self.values.iter_mut().for_each(|v| *v *= s);
        if let Some(d) = self.derivative.as_mut() {
            d.iter_mut().for_each(|v| *v *= s);
        }
        Ok(())
    }

    /// `∫ conj(self) other` over the shared domain.
    pub fn overlap(&self, other: &ComplexField) -> Result<Complex64> {
        if self.domain != other.domain {
            return Err(Error::Argument("overlap of fields on different domains".into()));
        }
        let w = self.domain.weights();
        Ok(w.iter()
            .zip(self.values.iter().zip(&other.values))
            .map(|(w, (a, b))| a.conj() * b * *w)
            .sum())
    }

    /// Replaces the derivative channel with a centered finite difference of
    /// the amplitude.
    pub fn with_finite_difference_derivative(&self, order: usize) -> Result<ComplexField> {
        let re: Vec<f64> = self.values.iter().map(|v| v.re).collect();
        let im: Vec<f64> = self.values.iter().map(|v| v.im).collect();
        let dre = finite_difference(&re, &self.domain, order)?;
        let dim = finite_difference(&im, &self.domain, order)?;
        let d = dre.into_iter().zip(dim).map(|(r, i)| Complex64::new(r, i)).collect();
        ComplexField::new(self.domain.clone(), self.values.clone(), Some(d))
    }

    /// `ρ = |ψ|²` with `ρ' = 2 Re(ψ* ψ')` when the derivative is present.
    pub fn density(&self) -> Result<DensityProfile> {
        let rho = self.values.iter().map(|v| v.norm_sqr()).collect();
        let drho = self.derivative.as_ref().map(|d| {
            self.values
                .iter()
                .zip(d)
                .map(|(v, dv)| 2.0 * (v.conj() * dv).re)
                .collect()
        });
        DensityProfile::new(self.domain.clone(), rho, drho)
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Zero-padded momentum-space amplitude of a line field.
///
/// `amplitude[k]` is `ψ̃(p_k) = dz/√(2π) Σ_j ψ_j e^{-i p_k z_j}` on the grid
/// `p_k = 2πk/L_ext` (`L_ext` = padded length), stored in ascending `p` order.
#[derive(Debug, Clone)]
pub struct MomentumSpectrum {
    pub domain: Domain1D,
    pub amplitude: Vec<Complex64>,
    source: Domain1D,
    padded_len: usize,
}

/// Padding factor applied before the transform.
pub const ZERO_PAD_FACTOR: usize = 4;
const NORM_TOLERANCE: f64 = 1e-4;
const PARSEVAL_TOLERANCE: f64 = 1e-8;

impl MomentumSpectrum {
    pub fn from_field(psi: &ComplexField) -> Result<Self> {
        let src = &psi.domain;
        if src.is_periodic() {
            return Err(Error::Argument(
                "momentum transform needs a line or half-line domain".into(),
            ));
        }
        let norm = psi.norm_squared();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Contract(format!(
                "momentum transform needs a normalized field, ∫|ψ|² = {norm}"
            )));
        }
        let n = src.points();
        let n_ext = (ZERO_PAD_FACTOR * n).next_power_of_two();
        let dz = src.spacing();
        let mut buf = vec![Complex64::new(0.0, 0.0); n_ext];
        buf[..n].copy_from_slice(&psi.values);
        PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n_ext).process(&mut buf));

        let dp = 2.0 * PI / (n_ext as f64 * dz);
        let scale = dz / (2.0 * PI).sqrt();
        let half = n_ext / 2;
        let mut amplitude = Vec::with_capacity(n_ext);
        // ascending p: k = -half .. half-1
        for j in 0..n_ext {
            let k = j as i64 - half as i64;
            let idx = k.rem_euclid(n_ext as i64) as usize;
            let p = k as f64 * dp;
            let phase = Complex64::from_polar(1.0, -p * src.lower());
            amplitude.push(buf[idx] * phase * scale);
        }
        let p_min = -(half as f64) * dp;
        let domain = Domain1D::line(p_min, p_min + (n_ext - 1) as f64 * dp, n_ext)?;
        Ok(Self {
            domain,
            amplitude,
            source: src.clone(),
            padded_len: n_ext,
        })
    }

    /// Spacing of the momentum grid, `2π/L_ext`.
    pub fn resolution(&self) -> f64 {
        self.domain.spacing()
    }

    pub fn padded_len(&self) -> usize {
        self.padded_len
    }

    /// Recovers the position-space samples on the original domain.
    pub fn inverse(&self) -> Result<ComplexField> {
        let n_ext = self.padded_len;
        let half = n_ext / 2;
        let dz = self.source.spacing();
        let mut buf = vec![Complex64::new(0.0, 0.0); n_ext];
        for (j, a) in self.amplitude.iter().enumerate() {
            let k = j as i64 - half as i64;
            let p = k as f64 * self.resolution();
            let idx = k.rem_euclid(n_ext as i64) as usize;
            buf[idx] = a * Complex64::from_polar(1.0, p * self.source.lower());
        }
        PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n_ext).process(&mut buf));
        let scale = (2.0 * PI).sqrt() / dz / n_ext as f64;
        let values = buf[..self.source.points()].iter().map(|v| v * scale).collect();
        ComplexField::new(self.source.clone(), values, None)
    }

    /// Normalized `|ψ̃(p)|²`, after checking Parseval against the source norm.
    pub fn density(&self) -> Result<DensityProfile> {
        let raw: Vec<f64> = self.amplitude.iter().map(|a| a.norm_sqr()).collect();
        let total = integrate(&raw, &self.domain)?;
        if (1.0 - total).abs() > PARSEVAL_TOLERANCE {
            return Err(Error::Numeric(format!(
                "Parseval residual {} exceeds {PARSEVAL_TOLERANCE}",
                (1.0 - total).abs()
            )));
        }
        DensityProfile::new(
            self.domain.clone(),
            raw.into_iter().map(|r| r / total).collect(),
            None,
        )
    }
}

/// Momentum-space probability density of a normalized line field.
pub fn momentum_density(psi: &ComplexField) -> Result<DensityProfile> {
    MomentumSpectrum::from_field(psi)?.density()
}

/// `∫x ρ` over the density's own domain coordinate.
pub fn mean(rho: &DensityProfile) -> f64 {
    let w = rho.domain().weights();
    rho.domain()
        .coordinates()
        .iter()
        .zip(rho.rho())
        .zip(&w)
        .map(|((x, r), w)| w * x * r)
        .sum()
}

/// `∫x²ρ − (∫xρ)²`, clamped at zero.
pub fn variance(rho: &DensityProfile) -> f64 {
    let w = rho.domain().weights();
    let m = mean(rho);
    let second: f64 = rho
        .domain()
        .coordinates()
        .iter()
        .zip(rho.rho())
        .zip(&w)
        .map(|((x, r), w)| w * (x - m) * (x - m) * r)
        .sum();
    second.max(0.0)
}
