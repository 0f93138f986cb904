//! Fractional revival schedule and minima of the Fisher-Shannon product.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::infomeasures::InfoSample;

/// Default detector half-width in samples.
pub const DEFAULT_WINDOW: usize = 11;

/// `t = p T_r / q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fraction {
    pub p: u32,
    pub q: u32,
    pub t: f64,
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RevivalSchedule {
    pub t_cl: f64,
    pub t_r: f64,
    /// Sorted by time.
    pub fractions: Vec<Fraction>,
}

/// All coprime `p/q ∈ (0, 1]` with `q ≤ q_max`, sorted by time.
pub fn schedule(t_cl: f64, t_r: f64, q_max: u32) -> Result<RevivalSchedule> {
    if q_max < 2 {
        return Err(Error::Argument(format!("q_max must be at least 2, got {q_max}")));
    }
    if !(t_r > 0.0 && t_r.is_finite()) {
        return Err(Error::Argument(format!("revival time must be positive, got {t_r}")));
    }
    let mut fractions: Vec<Fraction> = (1..=q_max)
        .flat_map(|q| (1..=q).map(move |p| (p, q)))
        .filter(|(p, q)| p.gcd(q) == 1)
        .map(|(p, q)| Fraction {
            p,
            q,
            t: p as f64 * t_r / q as f64,
        })
        .collect();
    fractions.sort_by(|a, b| (a.p * b.q).cmp(&(b.p * a.q)));
    Ok(RevivalSchedule {
        t_cl,
        t_r,
        fractions,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelTag {
    Bouncer,
    Ring,
}

impl fmt::Display for ModelTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelTag::Bouncer => "bouncer",
            ModelTag::Ring => "ring",
        })
    }
}

/// Time-ordered information samples of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoSeries {
    samples: Vec<InfoSample>,
    model: ModelTag,
}

impl InfoSeries {
    pub fn new(samples: Vec<InfoSample>, model: ModelTag) -> Result<Self> {
        if samples.windows(2).any(|w| !(w[1].t > w[0].t)) {
            return Err(Error::Argument("sample times must be strictly increasing".into()));
        }
        if let Some(s) = samples.iter().find(|s| s.product.is_nan()) {
            return Err(Error::Numeric(format!("P is NaN at t = {}", s.t)));
        }
        Ok(Self { samples, model })
    }

    pub fn samples(&self) -> &[InfoSample] {
        &self.samples
    }

    pub fn model(&self) -> ModelTag {
        self.model
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn products(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.product).collect()
    }
}

/// Centered moving average over `width` samples; the window shrinks
/// symmetrically near the ends.
pub fn moving_average(values: &[f64], width: usize) -> Vec<f64> {
    let half = width / 2;
    let n = values.len();
    (0..n)
        .map(|i| {
            let h = half.min(i).min(n - 1 - i);
            let s = &values[i - h..=i + h];
            s.iter().sum::<f64>() / s.len() as f64
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub index: usize,
    pub t: f64,
    pub p: f64,
}

/// Strict local minima of `P`: samples lower than every other sample within
/// `window` positions on either side. The first and last `window` samples are
/// never reported.
pub fn detect_minima(series: &InfoSeries, window: usize) -> Result<Vec<Minimum>> {
    detect_minima_in(&series.times(), &series.products(), window)
}

/// [`detect_minima`] on raw arrays.
pub fn detect_minima_in(t: &[f64], p: &[f64], window: usize) -> Result<Vec<Minimum>> {
    if window < 3 || window.is_multiple_of(2) {
        return Err(Error::Argument(format!("window must be odd and at least 3, got {window}")));
    }
    if t.len() != p.len() {
        return Err(Error::Argument("time and value arrays differ in length".into()));
    }
    if p.len() <= 2 * window {
        return Err(Error::Argument(format!(
            "series of {} samples too short for window {window}",
            p.len()
        )));
    }
    Ok((window..p.len() - window)
        .filter(|&i| {
            (i - window..=i + window)
                .filter(|&j| j != i)
                .all(|j| p[i] < p[j])
        })
        .map(|i| Minimum {
            index: i,
            t: t[i],
            p: p[i],
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledMinimum {
    pub minimum: Minimum,
    /// Nearest schedule entry within tolerance, if any.
    pub fraction: Option<Fraction>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchReport {
    pub labeled: Vec<LabeledMinimum>,
    pub matched: Vec<Fraction>,
    pub unmatched: Vec<Fraction>,
}

impl MatchReport {
    pub fn unassigned(&self) -> usize {
        self.labeled.iter().filter(|l| l.fraction.is_none()).count()
    }
}

/// Labels each minimum with the nearest fraction within `tol·T_r`.
pub fn match_schedule(minima: &[Minimum], schedule: &RevivalSchedule, tol: f64) -> Result<MatchReport> {
    if !(tol > 0.0) {
        return Err(Error::Argument(format!("tolerance must be positive, got {tol}")));
    }
    let reach = tol * schedule.t_r;
    let labeled: Vec<LabeledMinimum> = minima
        .iter()
        .map(|m| LabeledMinimum {
            minimum: *m,
            fraction: schedule
                .fractions
                .iter()
                .filter(|f| (f.t - m.t).abs() <= reach)
                .min_by(|a, b| (a.t - m.t).abs().total_cmp(&(b.t - m.t).abs()))
                .copied(),
        })
        .collect();
    let (matched, unmatched) = schedule
        .fractions
        .iter()
        .partition(|f| minima.iter().any(|m| (f.t - m.t).abs() <= reach));
    Ok(MatchReport {
        labeled,
        matched,
        unmatched,
    })
}

/// Median spacing between consecutive minima.
pub fn dominant_spacing(minima: &[Minimum]) -> Option<f64> {
    let mut gaps: Vec<f64> = minima.windows(2).map(|w| w[1].t - w[0].t).collect();
    if gaps.is_empty() {
        return None;
    }
    gaps.sort_by(f64::total_cmp);
    let n = gaps.len();
    Some(if n % 2 == 1 {
        gaps[n / 2]
    } else {
        0.5 * (gaps[n / 2 - 1] + gaps[n / 2])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn labels(s: &RevivalSchedule) -> Vec<(u32, u32)> {
        s.fractions.iter().map(|f| (f.p, f.q)).collect()
    }

    #[test]
    fn schedule_examples() {
        assert_eq!(labels(&schedule(1.0, 1.0, 2).unwrap()), vec![(1, 2), (1, 1)]);
        let s = schedule(20.0, 40000.0 / PI, 4).unwrap();
        assert_eq!(
            labels(&s),
            vec![(1, 4), (1, 3), (1, 2), (2, 3), (3, 4), (1, 1)]
        );
        let want = [3183.10, 4244.13, 6366.20, 8488.26, 9549.30, 12732.40];
        for (f, w) in s.fractions.iter().zip(want) {
            assert!((f.t - w).abs() < 0.01, "{} {}", f.t, w);
        }
        assert!(schedule(1.0, 1.0, 1).is_err());
        assert!(schedule(1.0, f64::INFINITY, 3).is_err());
    }

    #[test]
    fn schedule_is_coprime_and_sorted() {
        let s = schedule(1.0, 1.0, 12).unwrap();
        assert!(s.fractions.iter().all(|f| f.p.gcd(&f.q) == 1 && f.p <= f.q));
        assert!(s.fractions.windows(2).all(|w| w[0].t < w[1].t));
    }

    #[test]
    fn cosine_minima() {
        let n = 1000;
        let t: Vec<f64> = (0..n).map(|i| 2.0 * i as f64 / (n - 1) as f64).collect();
        let dt = t[1];
        let p: Vec<f64> = t.iter().map(|x| 2.0 + (2.0 * PI * x).cos()).collect();
        let m = detect_minima_in(&t, &p, 11).unwrap();
        assert_eq!(m.len(), 2);
        assert!((m[0].t - 0.5).abs() <= dt);
        assert!((m[1].t - 1.5).abs() <= dt);
        // 2 − cos bottoms out at 0, T, 2T; only the interior one is reported.
        // An odd sample count puts a node exactly on T (an even one leaves two
        // equal neighbours, neither of them strict).
        let t: Vec<f64> = (0..=n).map(|i| 2.0 * i as f64 / n as f64).collect();
        let p: Vec<f64> = t.iter().map(|x| 2.0 - (2.0 * PI * x).cos()).collect();
        let m = detect_minima_in(&t, &p, 11).unwrap();
        assert_eq!(m.len(), 1);
        assert!((m[0].t - 1.0).abs() <= dt);
    }

    #[test]
    fn monotone_has_no_minima() {
        let t: Vec<f64> = (0..100).map(f64::from).collect();
        assert!(detect_minima_in(&t, &t, 5).unwrap().is_empty());
    }

    #[test]
    fn detector_arguments() {
        let t: Vec<f64> = (0..20).map(f64::from).collect();
        assert!(detect_minima_in(&t, &t, 4).is_err());
        assert!(detect_minima_in(&t, &t, 1).is_err());
        assert!(detect_minima_in(&t, &t, 11).is_err());
    }

    #[test]
    fn series_validation() {
        let s = |t: f64, p: f64| InfoSample::from_parts(t, 0.0, p * 2.0 * PI * std::f64::consts::E, 1.0, None);
        assert!(InfoSeries::new(vec![s(0.0, 1.0), s(0.0, 1.0)], ModelTag::Ring).is_err());
        assert!(InfoSeries::new(vec![s(0.0, 1.0), s(1.0, f64::NAN)], ModelTag::Ring).is_err());
        let ok = InfoSeries::new(vec![s(0.0, 1.0), s(1.0, 2.0)], ModelTag::Ring).unwrap();
        assert!((ok.products()[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn matching() {
        let s = schedule(1.0, 10.0, 4).unwrap();
        let mins: Vec<Minimum> = s
            .fractions
            .iter()
            .enumerate()
            .map(|(i, f)| Minimum { index: i, t: f.t, p: 1.0 })
            .collect();
        let r = match_schedule(&mins, &s, 0.01).unwrap();
        assert_eq!(r.unassigned(), 0);
        assert!(r.unmatched.is_empty());
        assert!(r.labeled.iter().zip(&s.fractions).all(|(l, f)| l.fraction == Some(*f)));
        let r = match_schedule(&[], &s, 0.01).unwrap();
        assert_eq!(r.unmatched, s.fractions);
        let stray = [Minimum { index: 0, t: 0.5, p: 1.0 }];
        assert_eq!(match_schedule(&stray, &s, 0.01).unwrap().unassigned(), 1);
        assert!(match_schedule(&stray, &s, 0.0).is_err());
    }

    #[test]
    fn spacing_is_median() {
        let m = |t: f64| Minimum { index: 0, t, p: 0.0 };
        assert_eq!(dominant_spacing(&[m(0.0)]), None);
        assert_eq!(dominant_spacing(&[m(0.0), m(1.0), m(2.0), m(10.0)]), Some(1.0));
    }

    #[test]
    fn moving_average_shrinks_at_edges() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(moving_average(&v, 3), vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(moving_average(&[0.0, 3.0, 0.0, 3.0, 0.0], 3), vec![0.0, 1.0, 2.0, 1.0, 0.0]);
    }

    proptest! {
        #[test]
        fn minima_invariant_under_offset_and_rescaling(
            vals in prop::collection::vec(-5.0..5.0f64, 40..200),
            shift in -100.0..100.0f64,
            scale in 0.01..100.0f64,
        ) {
            let t: Vec<f64> = (0..vals.len()).map(|i| i as f64 * 0.3).collect();
            let base = detect_minima_in(&t, &vals, 5).unwrap();
            let shifted: Vec<f64> = vals.iter().map(|v| v + shift).collect();
            let ts: Vec<f64> = t.iter().map(|x| x * scale).collect();
            let other = detect_minima_in(&ts, &shifted, 5).unwrap();
            let idx = |m: &[Minimum]| m.iter().map(|x| x.index).collect::<Vec<_>>();
            // Adding a constant can merge values that differed by less than
            // an ulp of the shift; restrict to well-separated inputs.
            let separated = vals.windows(2).all(|w| (w[0] - w[1]).abs() > 1e-9);
            if separated {
                prop_assert_eq!(idx(&base), idx(&other));
                for (a, b) in base.iter().zip(&other) {
                    prop_assert!((b.t - a.t * scale).abs() <= 1e-12 * b.t.abs().max(1.0));
                }
            }
        }

        #[test]
        fn reported_minima_beat_their_window(vals in prop::collection::vec(0.0..1.0f64, 30..120)) {
            let t: Vec<f64> = (0..vals.len()).map(|i| i as f64).collect();
            for m in detect_minima_in(&t, &vals, 3).unwrap() {
                prop_assert!(vals[m.index] < vals[m.index - 3]);
                prop_assert!(vals[m.index] < vals[m.index + 3]);
            }
        }
    }
}
