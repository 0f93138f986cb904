//! Runs a configured model over time and writes the series, report and plot.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::bouncer::{self, BouncerPacket, BouncerPropagator};
use crate::config::{Model, ModelConfig};
use crate::error::{Error, Result};
use crate::grid::{self, Domain1D};
use crate::infomeasures::{fisher_shannon_product, InfoOptions, InfoSample, IsoperimetricViolation};
use crate::plot;
use crate::revival::{
    self, InfoSeries, MatchReport, Minimum, ModelTag, RevivalSchedule,
};
use crate::ring::{self, RingPacket};

/// CSV header line.
pub const CSV_HEADER: &str = "t,S,N,I,P,var_x,var_p";

/// Evenly spaced times `0..=t_end`.
pub fn sample_times(t_end: f64, samples: usize) -> Vec<f64> {
    let last = (samples - 1) as f64;
    (0..samples).map(|k| t_end * k as f64 / last).collect()
}

/// Packet and propagator for a bouncer config.
pub fn bouncer_setup(cfg: &ModelConfig) -> Result<BouncerPropagator> {
    let packet = BouncerPacket::new(cfg.z0, cfg.sigma)?;
    let domain = match cfg.z_max {
        Some(z_max) => Domain1D::half_line(z_max, cfg.points)?,
        None => Domain1D::half_line(cfg.z0 + 8.0 * cfg.z0.sqrt(), cfg.points)?,
    };
    BouncerPropagator::new(packet, domain)
}

/// Information measures of the bouncer state at time `t`, with the momentum
/// variance from the transformed amplitude.
pub fn bouncer_sample(
    prop: &BouncerPropagator,
    t: f64,
    opts: &InfoOptions,
) -> Result<(InfoSample, Option<IsoperimetricViolation>)> {
    let psi = prop.evolve(t)?;
    let var_p = grid::variance(&grid::momentum_density(&psi)?);
    let out = fisher_shannon_product(&psi.density()?, t, Some(var_p), opts)?;
    Ok((out.sample, out.violation))
}

/// Information measures of the ring density at time `t` (ns).
pub fn ring_sample(
    packet: &RingPacket,
    t: f64,
    angular_points: usize,
    opts: &InfoOptions,
) -> Result<InfoSample> {
    let rho = ring::evolve_ring(packet, t, angular_points)?;
    Ok(fisher_shannon_product(&rho, t, None, opts)?.sample)
}

/// Everything computed by one run, before anything is written.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub config: ModelConfig,
    pub series: InfoSeries,
    pub t_cl: f64,
    /// `None` for a massless ring.
    pub t_r: Option<f64>,
    /// Values passed to the detector (smoothed P when smoothing is on).
    pub detector_input: Vec<f64>,
    pub smoothing_width: usize,
    pub schedule: Option<RevivalSchedule>,
    pub minima: Vec<Minimum>,
    pub matches: Option<MatchReport>,
    pub violations: Vec<IsoperimetricViolation>,
    /// `|⟨Ψ(0)|Ψ(T_r)⟩|` from the eigen-expansion.
    pub revival_fidelity: Option<f64>,
    /// Model-specific lines for the report.
    pub details: Vec<(String, String)>,
}

impl Simulation {
    pub fn time_unit(&self) -> &'static str {
        match self.config.model {
            Model::Bouncer => "scaled gravitational time (hbar = m g l_g = 1)",
            Model::Ring => "ns",
        }
    }

    pub fn dominant_spacing(&self) -> Option<f64> {
        revival::dominant_spacing(&self.minima)
    }
}

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Usage(format!("cannot start worker pool: {e}")))
}

/// Validates the config and computes the time series and revival analysis.
pub fn simulate(cfg: &ModelConfig, threads: Option<usize>) -> Result<Simulation> {
    let diagnostics = cfg.validate();
    if !diagnostics.is_empty() {
        let text: Vec<String> = diagnostics.iter().map(ToString::to_string).collect();
        return Err(Error::Usage(text.join("; ")));
    }
    let pool = pool(threads)?;
    let opts = InfoOptions {
        tol_iso: cfg.tol_iso,
        ..InfoOptions::default()
    };
    let mut details = Vec::new();
    let (t_cl, t_r, samples, violations, fidelity, tag) = match cfg.model {
        Model::Bouncer => {
            let prop = bouncer_setup(cfg)?;
            let (t_cl, t_r) = bouncer::bouncer_time_scales(cfg.z0)?;
            let times = sample_times(cfg.t_end * t_r, cfg.samples);
            let rows: Vec<(InfoSample, Option<IsoperimetricViolation>)> = pool.install(|| {
                times
                    .par_iter()
                    .map(|&t| bouncer_sample(&prop, t, &opts))
                    .collect::<Result<_>>()
            })?;
            let pk = prop.packet();
            details.push(("levels".into(), format!("{}..={}", pk.n_min, pk.n_max)));
            details.push(("sum |c_n|^2".into(), format!("{}", pk.coeffs.norm_squared())));
            details.push(("peak level".into(), format!("{}", pk.peak().quantum_number)));
            details.push(("grid".into(), format!(
                "[0, {}] with {} points",
                prop.domain().upper(),
                prop.domain().points()
            )));
            let fid = pk.autocorrelation(t_r).norm();
            let (samples, viol): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
            (t_cl, Some(t_r), samples, viol.into_iter().flatten().collect(), Some(fid), ModelTag::Bouncer)
        }
        Model::Ring => {
            let params = cfg.ring_params()?;
            let m0 = cfg.ring_m0()?;
            let packet = ring::ring_packet(m0, cfg.sigma_m, &params, cfg.width_convention)?;
            let scales = ring::ring_time_scales(m0, &params);
            let (t_cl, t_r) = match scales {
                Ok(s) => (s.t_cl, s.t_r),
                Err(_) => {
                    // Negative branch: classical period from |ε'| alone.
                    let eps = params.reduced_energy(m0);
                    let d1 = ((m0 as f64 + 0.5) / eps).abs();
                    (2.0 * std::f64::consts::PI * ring::HBAR_MEV_NS / (params.e0() * d1), None)
                }
            };
            let unit = t_r.unwrap_or(t_cl);
            let times = sample_times(cfg.t_end * unit, cfg.samples);
            let samples: Vec<InfoSample> = pool.install(|| {
                times
                    .par_iter()
                    .map(|&t| ring_sample(&packet, t, cfg.angular_points, &opts))
                    .collect::<Result<_>>()
            })?;
            details.push(("E0 (meV)".into(), format!("{}", params.e0())));
            details.push(("nu".into(), format!("{}", params.nu())));
            details.push(("m0".into(), format!("{m0}")));
            details.push(("E_m0 (meV)".into(), format!("{}", ring::dispersion(m0, &params))));
            details.push(("modes".into(), format!("{}..={}", packet.m_min(), packet.m_max())));
            if let Some(t_r) = t_r {
                details.push(("T_r/2 (ns)".into(), format!("{}", 0.5 * t_r)));
            }
            let fid = t_r.map(|t| packet.autocorrelation(t).norm());
            (t_cl, t_r, samples, Vec::new(), fid, ModelTag::Ring)
        }
    };
    let series = InfoSeries::new(samples, tag)?;
    let products = series.products();
    let dt = series.samples()[1].t - series.samples()[0].t;
    let smoothing_width = if cfg.smoothing {
        ((t_cl / dt).round() as usize) | 1
    } else {
        1
    };
    let detector_input = if smoothing_width > 1 {
        revival::moving_average(&products, smoothing_width)
    } else {
        products
    };
    let (schedule, minima, matches) = match (cfg.detect, t_r) {
        (true, Some(t_r)) => {
            let times = series.times();
            let minima: Vec<Minimum> = revival::detect_minima_in(&times, &detector_input, cfg.window)?
                .into_iter()
                .map(|m| Minimum {
                    p: series.samples()[m.index].product,
                    ..m
                })
                .collect();
            let sched = revival::schedule(t_cl, t_r, cfg.q_max)?;
            let matches = revival::match_schedule(&minima, &sched, cfg.tol)?;
            (Some(sched), minima, Some(matches))
        }
        _ => (None, Vec::new(), None),
    };
    Ok(Simulation {
        config: cfg.clone(),
        series,
        t_cl,
        t_r,
        detector_input,
        smoothing_width,
        schedule,
        minima,
        matches,
        violations,
        revival_fidelity: fidelity,
        details,
    })
}

/// Writes the `# units:` line, the header and one row per sample.
pub fn write_csv(sim: &Simulation, mut out: impl Write) -> Result<()> {
    writeln!(out, "# units: t in {}", sim.time_unit())?;
    writeln!(out, "{CSV_HEADER}")?;
    for s in sim.series.samples() {
        let var_p = s.var_p.map(|v| v.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            s.t, s.entropy, s.entropy_power, s.fisher, s.product, s.var_x, var_p
        )?;
    }
    Ok(())
}

/// Parses a CSV written by [`write_csv`] back into samples.
pub fn read_csv(text: &str) -> Result<Vec<InfoSample>> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::Usage("missing CSV header".into()));
    }
    lines
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 7 {
                return Err(Error::Usage(format!("bad CSV row `{line}`")));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::Usage(format!("bad number `{s}` in CSV")))
            };
            Ok(InfoSample {
                t: num(f[0])?,
                entropy: num(f[1])?,
                entropy_power: num(f[2])?,
                fisher: num(f[3])?,
                product: num(f[4])?,
                var_x: num(f[5])?,
                var_p: if f[6].is_empty() { None } else { Some(num(f[6])?) },
            })
        })
        .collect()
}

/// Plain-text revival report.
pub fn render_report(sim: &Simulation) -> String {
    let cfg = &sim.config;
    let s = sim.series.samples();
    let mut r = String::new();
    let _ = writeln!(r, "model: {}", cfg.model);
    let _ = writeln!(r, "time unit: {}", sim.time_unit());
    for (k, v) in &sim.details {
        let _ = writeln!(r, "{k}: {v}");
    }
    let _ = writeln!(r, "T_cl: {}", sim.t_cl);
    match sim.t_r {
        Some(t) => {
            let _ = writeln!(r, "T_r: {t}");
        }
        None => {
            let _ = writeln!(r, "T_r: unbounded (linear dispersion)");
        }
    }
    let _ = writeln!(r, "samples: {} over [0, {}]", s.len(), s.last().map_or(0.0, |x| x.t));
    let _ = writeln!(r, "P(0): {}", s[0].product);
    let pmin = s.iter().map(|x| x.product).fold(f64::INFINITY, f64::min);
    let _ = writeln!(r, "min P: {pmin}");
    if let Some(f) = sim.revival_fidelity {
        let _ = writeln!(r, "|<Psi(0)|Psi(T_r)>|: {f}");
    }
    if !sim.violations.is_empty() {
        let _ = writeln!(r, "isoperimetric violations: {}", sim.violations.len());
        for v in &sim.violations {
            let _ = writeln!(r, "  {v}");
        }
    }
    let (Some(sched), Some(m)) = (&sim.schedule, &sim.matches) else {
        let _ = writeln!(r, "revival detection: off");
        return r;
    };
    let _ = writeln!(
        r,
        "detector: window {}, smoothing width {}, tol {} T_r",
        cfg.window, sim.smoothing_width, cfg.tol
    );
    let _ = writeln!(r, "schedule (q <= {}):", cfg.q_max);
    for f in &sched.fractions {
        let hit = if m.matched.contains(f) { "matched" } else { "unmatched" };
        let _ = writeln!(r, "  {f}\tt = {}\t{hit}", f.t);
    }
    let _ = writeln!(r, "matched: {} of {}", m.matched.len(), sched.fractions.len());
    let _ = writeln!(r, "minima: {}", sim.minima.len());
    for l in &m.labeled {
        let label = l.fraction.map_or("unassigned".to_string(), |f| f.to_string());
        let _ = writeln!(r, "  t = {}\tP = {}\t{label}", l.minimum.t, l.minimum.p);
    }
    if let Some(d) = sim.dominant_spacing() {
        let t_r = sched.t_r;
        let _ = writeln!(
            r,
            "dominant spacing: {d} ({} T_r, {} T_r/2)",
            d / t_r,
            2.0 * d / t_r
        );
    }
    r
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub threads: Option<usize>,
    pub plot: bool,
}

#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub csv: PathBuf,
    pub report: PathBuf,
    pub plot: Option<PathBuf>,
    /// Set when the plot could not be written; never fails the run.
    pub plot_error: Option<String>,
    pub simulation: Simulation,
}

/// Simulates and writes the CSV, report and (optionally) the SVG plot.
pub fn run(cfg: &ModelConfig, opts: &RunOptions) -> Result<RunArtifacts> {
    let sim = simulate(cfg, opts.threads)?;
    fs::create_dir_all(&opts.out_dir)?;
    let csv = opts.out_dir.join(&cfg.csv);
    let mut buf = Vec::new();
    write_csv(&sim, &mut buf)?;
    fs::write(&csv, buf)?;
    let report = opts.out_dir.join(&cfg.report);
    fs::write(&report, render_report(&sim))?;
    let (plot, plot_error) = if opts.plot {
        let path = opts.out_dir.join(&cfg.plot);
        match write_plot(&sim, &path) {
            Ok(()) => (Some(path), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, None)
    };
    Ok(RunArtifacts {
        csv,
        report,
        plot,
        plot_error,
        simulation: sim,
    })
}

fn write_plot(sim: &Simulation, path: &Path) -> Result<()> {
    let t = sim.series.times();
    let p = sim.series.products();
    let markers: Vec<(f64, String)> = sim
        .schedule
        .as_ref()
        .map(|s| s.fractions.iter().map(|f| (f.t, f.to_string())).collect())
        .unwrap_or_default();
    let title = format!("Fisher-Shannon product, {}", sim.config.model);
    let svg = plot::line_chart(&t, &p, &markers, &title, &format!("t [{}]", sim.time_unit()), "P");
    fs::write(path, svg)?;
    Ok(())
}
