//! Flat `key = value` run configuration.
//!
//! ```text
//! # comment
//! model = bouncer
//! z0 = 100
//! sigma = 1
//! ```

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::MIN_POINTS;
use crate::ring::{self, Branch, RingParams, Valley, WidthConvention, MIN_ANGULAR_POINTS};

/// Smallest accepted number of time samples.
pub const MIN_SAMPLES: usize = 100;

/// Configurations shipped with the crate, by name.
pub const BUNDLED: &[(&str, &str)] = &[
    ("bouncer_fig1", include_str!("../configs/bouncer_fig1.conf")),
    ("ring_fig2", include_str!("../configs/ring_fig2.conf")),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Bouncer,
    Ring,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Bouncer => "bouncer",
            Model::Ring => "ring",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub model: Model,

    pub z0: f64,
    pub sigma: f64,
    pub p0: f64,
    pub points: usize,
    /// Upper end of the height grid; `z0 + 8√z0` when absent.
    pub z_max: Option<f64>,

    pub m0: Option<i64>,
    /// Picks `m0` as the first level reaching this energy (meV).
    pub target_mev: Option<f64>,
    pub sigma_m: f64,
    pub radius_nm: f64,
    pub delta_mev: f64,
    pub tau: i32,
    pub branch: Branch,
    pub width_convention: WidthConvention,
    pub angular_points: usize,

    /// End time as a multiple of `T_r` (of `T_cl` when `T_r` is unbounded).
    pub t_end: f64,
    pub samples: usize,

    pub detect: bool,
    pub window: usize,
    pub q_max: u32,
    pub tol: f64,
    pub smoothing: bool,
    pub tol_iso: f64,

    pub csv: String,
    pub report: String,
    pub plot: String,
}

impl ModelConfig {
    fn defaults(model: Model) -> Self {
        Self {
            model,
            z0: 100.0,
            sigma: 1.0,
            p0: 0.0,
            points: 4096,
            z_max: None,
            m0: None,
            target_mev: None,
            sigma_m: 13.0,
            radius_nm: 50.0,
            delta_mev: 50.0,
            tau: 1,
            branch: Branch::Positive,
            width_convention: WidthConvention::Standard,
            angular_points: 2048,
            t_end: 1.05,
            samples: 2000,
            detect: true,
            window: 11,
            q_max: 4,
            tol: 0.02,
            smoothing: model == Model::Bouncer,
            tol_iso: 1e-3,
            csv: "series.csv".into(),
            report: "report.txt".into(),
            plot: "product.svg".into(),
        }
    }

    /// Parses the text form. Unknown keys, repeated keys and unparsable
    /// values are usage errors naming the key.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Usage(format!("line {}: expected `key = value`, got `{line}`", lineno + 1))
            })?;
            let (k, v) = (k.trim(), v.trim());
            if pairs.iter().any(|(seen, _)| *seen == k) {
                return Err(Error::Usage(format!("key `{k}` given more than once")));
            }
            pairs.push((k, v));
        }
        let model = match pairs.iter().find(|(k, _)| *k == "model") {
            Some((_, "bouncer")) => Model::Bouncer,
            Some((_, "ring")) => Model::Ring,
            Some((_, v)) => {
                return Err(Error::Usage(format!("key `model`: expected bouncer or ring, got `{v}`")))
            }
            None => return Err(Error::Usage("missing key `model`".into())),
        };
        let mut c = Self::defaults(model);
        for (k, v) in pairs {
            match k {
                "model" => {}
                "z0" => c.z0 = value(k, v)?,
                "sigma" => c.sigma = value(k, v)?,
                "p0" => c.p0 = value(k, v)?,
                "points" => c.points = value(k, v)?,
                "z_max" => c.z_max = Some(value(k, v)?),
                "m0" => c.m0 = Some(value(k, v)?),
                "target_mev" => c.target_mev = Some(value(k, v)?),
                "sigma_m" => c.sigma_m = value(k, v)?,
                "radius_nm" => c.radius_nm = value(k, v)?,
                "delta_mev" => c.delta_mev = value(k, v)?,
                "tau" => c.tau = value(k, v)?,
                "branch" => {
                    c.branch = match v {
                        "+" | "positive" => Branch::Positive,
                        "-" | "negative" => Branch::Negative,
                        _ => return Err(bad(k, v, "+ or -")),
                    }
                }
                "width_convention" => {
                    c.width_convention = match v {
                        "standard" => WidthConvention::Standard,
                        "narrow" => WidthConvention::Narrow,
                        _ => return Err(bad(k, v, "standard or narrow")),
                    }
                }
                "angular_points" => c.angular_points = value(k, v)?,
                "t_end" => c.t_end = value(k, v)?,
                "samples" => c.samples = value(k, v)?,
                "detect" => c.detect = flag(k, v)?,
                "window" => c.window = value(k, v)?,
                "q_max" => c.q_max = value(k, v)?,
                "tol" => c.tol = value(k, v)?,
                "smoothing" => c.smoothing = flag(k, v)?,
                "tol_iso" => c.tol_iso = value(k, v)?,
                "csv" => c.csv = v.to_string(),
                "report" => c.report = v.to_string(),
                "plot" => c.plot = v.to_string(),
                _ => return Err(Error::Usage(format!("unknown key `{k}`"))),
            }
        }
        Ok(c)
    }

    /// Reads a config file, or a bundled config when `source` names one and
    /// no such file exists.
    pub fn load(source: &str) -> Result<Self> {
        let path = Path::new(source);
        if path.exists() {
            let text = std::fs::read_to_string(path)?;
            return Self::parse(&text);
        }
        match bundled(source) {
            Some(text) => Self::parse(text),
            None => Err(Error::Usage(format!(
                "no config file `{source}` and no bundled config of that name"
            ))),
        }
    }

    pub fn ring_params(&self) -> Result<RingParams> {
        RingParams::new(
            self.radius_nm,
            self.delta_mev,
            Valley::from_tau(self.tau)?,
            self.branch,
        )
    }

    /// `m0`, either given or derived from `target_mev`.
    pub fn ring_m0(&self) -> Result<i64> {
        match (self.m0, self.target_mev) {
            (Some(m), _) => Ok(m),
            (None, Some(e)) => ring::first_level_reaching(e, &self.ring_params()?),
            (None, None) => Err(Error::Usage("ring config needs `m0` or `target_mev`".into())),
        }
    }

    /// Problems that would stop [`crate::pipeline::run`] from starting. Each
    /// diagnostic names the offending key.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut d = Diagnostics::default();
        d.require(self.t_end > 0.0 && self.t_end.is_finite(), "t_end", "must be positive");
        d.require(
            self.samples >= MIN_SAMPLES,
            "samples",
            &format!("must be at least {MIN_SAMPLES}, got {}", self.samples),
        );
        if self.detect {
            d.require(
                self.window >= 3 && self.window % 2 == 1,
                "window",
                "must be odd and at least 3",
            );
            d.require(
                self.samples > 2 * self.window,
                "window",
                "series must be longer than twice the window",
            );
            d.require(self.q_max >= 2, "q_max", "must be at least 2");
            d.require(self.tol > 0.0 && self.tol.is_finite(), "tol", "must be positive");
        }
        d.require(self.tol_iso >= 0.0 && self.tol_iso.is_finite(), "tol_iso", "must be non-negative");
        for (key, name) in [("csv", &self.csv), ("report", &self.report), ("plot", &self.plot)] {
            d.require(!name.is_empty(), key, "file name must not be empty");
        }
        match self.model {
            Model::Bouncer => self.validate_bouncer(&mut d),
            Model::Ring => self.validate_ring(&mut d),
        }
        d.0
    }

    fn validate_bouncer(&self, d: &mut Diagnostics) {
        let sigma_ok = self.sigma > 0.0 && self.sigma.is_finite();
        d.require(sigma_ok, "sigma", "must be positive");
        d.require(self.z0 > 0.0 && self.z0.is_finite(), "z0", "must be positive");
        if sigma_ok && self.z0 > 0.0 {
            d.require(
                self.z0 >= 5.0 * self.sigma,
                "z0",
                "must be at least 5 sigma above the mirror",
            );
        }
        d.require(self.p0 == 0.0, "p0", "only p0 = 0 packets are supported");
        d.require(
            self.points >= MIN_POINTS,
            "points",
            &format!("must be at least {MIN_POINTS}"),
        );
        if let Some(z_max) = self.z_max {
            d.require(
                z_max.is_finite() && z_max > self.z0 + 4.0 * self.sigma,
                "z_max",
                "must lie well above z0",
            );
        }
    }

    fn validate_ring(&self, d: &mut Diagnostics) {
        d.require(
            self.sigma_m > 0.0 && self.sigma_m.is_finite(),
            "sigma_m",
            "must be positive",
        );
        d.require(
            self.radius_nm > 0.0 && self.radius_nm.is_finite(),
            "radius_nm",
            "must be positive",
        );
        d.require(
            self.delta_mev >= 0.0 && self.delta_mev.is_finite(),
            "delta_mev",
            "must be non-negative",
        );
        d.require(self.tau == 1 || self.tau == -1, "tau", "must be +1 or -1");
        if self.m0.is_some() && self.target_mev.is_some() {
            d.push("m0", "give either m0 or target_mev, not both");
        }
        if self.m0.is_none() && self.target_mev.is_none() {
            d.push("m0", "missing; give m0 or target_mev");
        }
        if d.0.iter().any(|x| ["radius_nm", "delta_mev", "tau", "sigma_m", "m0"].contains(&x.key.as_str())) {
            return;
        }
        let params = match self.ring_params() {
            Ok(p) => p,
            Err(e) => return d.push("radius_nm", &e.to_string()),
        };
        let m0 = match self.ring_m0() {
            Ok(m) => m,
            Err(e) => return d.push("target_mev", &e.to_string()),
        };
        if self.detect && self.branch == Branch::Negative {
            d.push("branch", "revival time scales are only defined on the positive branch");
        }
        if self.detect && params.nu() == 0.0 {
            d.push(
                "delta_mev",
                "T_r is unbounded for a massless ring (linear dispersion); disable detect",
            );
        }
        match ring::ring_packet(m0, self.sigma_m, &params, self.width_convention) {
            Err(e) => d.push("sigma_m", &e.to_string()),
            Ok(pk) => {
                let span = (pk.m_max() - pk.m_min() + 2) as usize;
                d.require(
                    self.angular_points >= MIN_ANGULAR_POINTS && self.angular_points > 2 * span,
                    "angular_points",
                    &format!(
                        "must be at least {MIN_ANGULAR_POINTS} and above {}",
                        2 * span
                    ),
                );
            }
        }
    }
}

/// A configuration problem tied to one key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub key: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.key, self.message)
    }
}

#[derive(Default)]
struct Diagnostics(Vec<Diagnostic>);

impl Diagnostics {
    fn push(&mut self, key: &str, message: &str) {
        self.0.push(Diagnostic {
            key: key.into(),
            message: message.into(),
        });
    }

    fn require(&mut self, ok: bool, key: &str, message: &str) {
        if !ok {
            self.push(key, message);
        }
    }
}

pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

fn value<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| bad(key, v, std::any::type_name::<T>()))
}

fn flag(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "on" => Ok(true),
        "false" | "no" | "off" => Ok(false),
        _ => Err(bad(key, v, "true or false")),
    }
}

fn bad(key: &str, v: &str, want: &str) -> Error {
    Error::Usage(format!("key `{key}`: cannot read `{v}` as {want}"))
}
