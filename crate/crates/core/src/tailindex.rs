//! Tail-index estimator paths: the Hill estimator and the Log Variance (LV)
//! plot.
//!
//! The LV estimator uses each order statistic `u_i = X_{i,n}` in turn as a
//! threshold, takes the log-exceedances `ln(X_{j,n} − u_i)` for `j < i`,
//! and inverts the exGPD variance map on their sample variance to get a raw
//! shape `ξ̃_i` (negative values are clipped to 0). The plotted path is the
//! running mean of the raw values. Because exceedances are differences, the
//! path is unaffected by shifting the data; because the exGPD variance does
//! not depend on `σ`, it is unaffected by scaling too.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::xi_from_variance;
use crate::sample::{sample_variance, SortedSample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathKind {
    HillXi,
    LvXiRaw,
    LvXiSmoothed,
}

impl std::fmt::Display for PathKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PathKind::HillXi => "hill_xi",
            PathKind::LvXiRaw => "lv_xi_raw",
            PathKind::LvXiSmoothed => "lv_xi_smoothed",
        })
    }
}

/// One point of an estimator path; `value` is `None` where the estimator is
/// undefined (ties at the top, or no usable exceedances yet).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathPoint {
    pub k: usize,
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatePath {
    kind: PathKind,
    points: Vec<PathPoint>,
}

impl EstimatePath {
    /// Fails unless the `k` are strictly increasing.
    pub fn new(kind: PathKind, points: Vec<PathPoint>) -> Result<Self> {
        if points.windows(2).any(|w| w[0].k >= w[1].k) {
            return Err(Error::InvalidParams("path indices must be strictly increasing".into()));
        }
        Ok(EstimatePath { kind, points })
    }

    pub fn kind(&self) -> PathKind {
        self.kind
    }

    pub fn points(&self) -> &[PathPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `(k, value)` for the defined points.
    pub fn defined(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.points.iter().filter_map(|p| p.value.map(|v| (p.k, v)))
    }

    pub fn value_at(&self, k: usize) -> Option<f64> {
        self.points
            .binary_search_by_key(&k, |p| p.k)
            .ok()
            .and_then(|i| self.points[i].value)
    }

    /// The points with `k ≤ k_max`.
    pub fn truncated(&self, k_max: usize) -> EstimatePath {
        EstimatePath {
            kind: self.kind,
            points: self.points.iter().copied().take_while(|p| p.k <= k_max).collect(),
        }
    }

    /// Defined values with `lo ≤ k ≤ hi`.
    pub fn window(&self, lo: usize, hi: usize) -> impl Iterator<Item = f64> + '_ {
        self.defined().filter(move |&(k, _)| k >= lo && k <= hi).map(|(_, v)| v)
    }
}

/// Hill estimates `ξ̂_k = (1/k) Σ_{j≤k} ln X_j − ln X_k` for `k ∈ [2, n]`.
pub fn hill_path(s: &SortedSample) -> Result<EstimatePath> {
    hill_path_to(s, s.len())
}

/// Hill estimates for `k ∈ [2, min(k_max, n)]`; only the top `k_max`
/// values need to be positive.
pub fn hill_path_to(s: &SortedSample, k_max: usize) -> Result<EstimatePath> {
    let k_max = k_max.min(s.len());
    if k_max < 2 {
        return Err(Error::TooFewObservations { need: 2, got: k_max });
    }
    let top = &s.values()[..k_max];
    if let Some(j) = top.iter().position(|&x| x <= 0.0) {
        return Err(Error::domain(
            "hill_path",
            format!("order statistic {} is {} (logs need positive values)", j + 1, top[j]),
        ));
    }
    let logs: Vec<f64> = top.iter().map(|x| x.ln()).collect();
    let mut sum = logs[0];
    let mut points = Vec::with_capacity(k_max - 1);
    for k in 2..=k_max {
        let lk = logs[k - 1];
        sum += lk;
        let value = if top[0] == top[k - 1] {
            None
        } else {
            Some(sum / k as f64 - lk)
        };
        points.push(PathPoint { k, value });
    }
    EstimatePath::new(PathKind::HillXi, points)
}

/// Shape from a log-exceedance variance, with negative values clipped to 0.
/// A zero variance (all exceedances tied) is the `ξ → −∞` limit and clips to 0.
pub fn clipped_xi(s2: f64) -> Result<f64> {
    if s2 == 0.0 {
        return Ok(0.0);
    }
    Ok(xi_from_variance(s2)?.max(0.0))
}

/// The raw LV estimate `ξ̃_i` at threshold `u_i = X_{i,n}`, `3 ≤ i ≤ n`.
pub fn lv_raw(s: &SortedSample, i: usize) -> Result<f64> {
    let n = s.len();
    if i < 3 || i > n {
        return Err(Error::domain("lv_raw", format!("index {i} outside [3, {n}]")));
    }
    let mut buf = Vec::with_capacity(i - 1);
    lv_raw_with(s.values(), i, &mut buf)
}

fn lv_raw_with(values: &[f64], i: usize, buf: &mut Vec<f64>) -> Result<f64> {
    let u = values[i - 1];
    buf.clear();
    // descending order: the exceedances are a prefix
    buf.extend(values[..i - 1].iter().take_while(|&&x| x > u).map(|&x| (x - u).ln()));
    if buf.len() < 2 {
        return Err(Error::InsufficientExceedances {
            index: i,
            found: buf.len(),
        });
    }
    clipped_xi(sample_variance(buf))
}

/// Raw LV values `ξ̃_i`, `i ∈ [3, n]`; indices with fewer than two strict
/// exceedances are kept as undefined points.
pub fn lv_raw_path(s: &SortedSample) -> Result<EstimatePath> {
    let n = s.len();
    if n < 3 {
        return Err(Error::TooFewObservations { need: 3, got: n });
    }
    let mut buf = Vec::with_capacity(n);
    let mut points = Vec::with_capacity(n - 2);
    for i in 3..=n {
        let value = match lv_raw_with(s.values(), i, &mut buf) {
            Ok(v) => Some(v),
            Err(Error::InsufficientExceedances { .. }) => None,
            Err(e) => return Err(e),
        };
        points.push(PathPoint { k: i, value });
    }
    EstimatePath::new(PathKind::LvXiRaw, points)
}

/// Running mean of the defined raw values: `ξ̂_k` averages every available
/// `ξ̃_i` with `i ≤ k`. With no skipped indices this is `(k−2)^{−1} Σ_{i=3}^k ξ̃_i`.
pub fn smooth(raw: &EstimatePath) -> EstimatePath {
    let mut sum = 0.0;
    let mut count = 0usize;
    let points = raw
        .points()
        .iter()
        .map(|p| {
            if let Some(v) = p.value {
                sum += v;
                count += 1;
            }
            PathPoint {
                k: p.k,
                value: (count > 0).then(|| sum / count as f64),
            }
        })
        .collect();
    EstimatePath {
        kind: PathKind::LvXiSmoothed,
        points,
    }
}

/// Raw and smoothed LV paths.
pub fn lv_paths(s: &SortedSample) -> Result<(EstimatePath, EstimatePath)> {
    let raw = lv_raw_path(s)?;
    let smoothed = smooth(&raw);
    Ok((raw, smoothed))
}

/// The smoothed LV path.
pub fn lv_path(s: &SortedSample) -> Result<EstimatePath> {
    lv_paths(s).map(|(_, smoothed)| smoothed)
}

/// The reading window `k ∈ [ceil(0.05n), floor(0.20n)]`.
pub fn read_window(n: usize) -> Result<(usize, usize)> {
    if n < 20 {
        return Err(Error::EmptyWindow { n });
    }
    Ok((n.div_ceil(20), n / 5))
}

/// `(min, max)` of the path over the reading window for a sample of size `n`.
pub fn read_region(path: &EstimatePath, n: usize) -> Result<(f64, f64)> {
    let (lo, hi) = read_window(n)?;
    region_between(path, lo, hi).ok_or(Error::EmptyWindow { n })
}

/// `(min, max)` of the defined values with `lo ≤ k ≤ hi`.
pub fn region_between(path: &EstimatePath, lo: usize, hi: usize) -> Option<(f64, f64)> {
    path.window(lo, hi).fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((a, b)) => Some((a.min(v), b.max(v))),
    })
}

/// The top-5% window `k ∈ [2, floor(0.05n)]` used to summarise Hill paths.
pub fn hill_window(n: usize) -> Result<(usize, usize)> {
    let hi = n / 20;
    if hi < 2 {
        return Err(Error::EmptyWindow { n });
    }
    Ok((2, hi))
}

/// Mean of the defined values with `lo ≤ k ≤ hi`.
pub fn window_mean(path: &EstimatePath, lo: usize, hi: usize) -> Option<f64> {
    let (sum, count) = path.window(lo, hi).fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpd::{Family, SimSpec};
    use crate::params::Params;
    use crate::rng::{open_unit, seeded};
    use crate::specfun::PI_SQ_OVER_6;
    use proptest::prelude::*;

    fn sorted(v: Vec<f64>) -> SortedSample {
        SortedSample::from_unsorted(v, "test").unwrap()
    }

    fn gpd(xi: f64, n: usize, seed: u64) -> SortedSample {
        SimSpec {
            family: Family::Gpd,
            mu: 0.0,
            params: Params::new(1.0, xi).unwrap(),
            n,
            seed,
        }
        .sample()
        .unwrap()
    }

    #[test]
    fn hill_examples() {
        let e = std::f64::consts::E;
        let p = hill_path(&sorted(vec![e.powi(3), e.powi(2), e])).unwrap();
        assert!((p.value_at(3).unwrap() - 1.0).abs() < 1e-15);
        let p = hill_path(&sorted(vec![e * e, e])).unwrap();
        assert!((p.value_at(2).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(p.kind(), PathKind::HillXi);
    }

    #[test]
    fn hill_ties_are_undefined() {
        let p = hill_path(&sorted(vec![5.0, 5.0, 5.0, 2.0])).unwrap();
        assert_eq!(p.value_at(2), None);
        assert_eq!(p.value_at(3), None);
        assert!(p.value_at(4).unwrap() > 0.0);
        assert_eq!(p.defined().count(), 1);
    }

    #[test]
    fn hill_rejects_nonpositive() {
        assert!(hill_path(&sorted(vec![3.0, 1.0, 0.0])).is_err());
        assert!(hill_path(&sorted(vec![3.0, -1.0])).is_err());
        // only the top k_max must be positive
        let s = sorted(vec![4.0, 3.0, 2.0, -1.0]);
        assert_eq!(hill_path_to(&s, 3).unwrap().len(), 2);
        assert!(hill_path(&sorted(vec![1.0])).is_err());
    }

    #[test]
    fn hill_on_exact_pareto() {
        let alpha = 2.0;
        let mut rng = seeded(2024);
        let xs = (0..100_000).map(|_| open_unit(&mut rng).powf(-1.0 / alpha)).collect();
        let s = sorted(xs);
        let p = hill_path(&s).unwrap();
        let (lo, hi) = hill_window(s.len()).unwrap();
        let m = window_mean(&p, lo, hi).unwrap();
        assert!((m - 0.5).abs() < 0.05, "{m}");
    }

    #[test]
    fn hill_not_shift_invariant() {
        let mut rng = seeded(7);
        let xs: Vec<f64> = (0..500).map(|_| open_unit(&mut rng).powf(-0.5)).collect();
        let s = sorted(xs);
        let a = hill_path(&s).unwrap();
        let b = hill_path(&s.shifted(10.0)).unwrap();
        assert_ne!(a.value_at(50), b.value_at(50));
    }

    #[test]
    fn clipped_xi_examples() {
        assert_eq!(clipped_xi(PI_SQ_OVER_6).unwrap(), 0.0);
        assert!((clipped_xi(2.0 * PI_SQ_OVER_6).unwrap() - 1.0).abs() < 1e-10);
        // variance 1 is ξ = −1, clipped
        assert_eq!(clipped_xi(1.0).unwrap(), 0.0);
        assert_eq!(clipped_xi(0.0).unwrap(), 0.0);
    }

    #[test]
    fn lv_raw_small_by_hand() {
        // u_3 = 1; exceedances 3 and 1 → logs ln 3, 0
        let s = sorted(vec![4.0, 2.0, 1.0]);
        let ln3 = 3f64.ln();
        let var = ln3 * ln3 / 2.0;
        let want = clipped_xi(var).unwrap();
        assert_eq!(lv_raw(&s, 3).unwrap(), want);
        assert!(lv_raw(&s, 2).is_err());
        assert!(lv_raw(&s, 4).is_err());
    }

    #[test]
    fn lv_raw_insufficient_exceedances() {
        let s = sorted(vec![2.0, 1.0, 1.0, 0.5]);
        assert!(matches!(
            lv_raw(&s, 3),
            Err(Error::InsufficientExceedances { index: 3, found: 1 })
        ));
        let raw = lv_raw_path(&s).unwrap();
        assert_eq!(raw.value_at(3), None);
        assert!(raw.value_at(4).is_some());
        let smooth = smooth(&raw);
        assert_eq!(smooth.value_at(3), None);
        assert_eq!(smooth.value_at(4), raw.value_at(4));
    }

    #[test]
    fn smoothing_examples() {
        let raw = EstimatePath::new(
            PathKind::LvXiRaw,
            vec![
                PathPoint { k: 3, value: Some(0.4) },
                PathPoint { k: 4, value: Some(0.6) },
            ],
        )
        .unwrap();
        let s = smooth(&raw);
        assert_eq!(s.value_at(3), Some(0.4));
        assert!((s.value_at(4).unwrap() - 0.5).abs() < 1e-15);
        let flat = EstimatePath::new(
            PathKind::LvXiRaw,
            (3..50).map(|k| PathPoint { k, value: Some(0.25) }).collect(),
        )
        .unwrap();
        assert!(smooth(&flat).defined().all(|(_, v)| (v - 0.25).abs() < 1e-15));
    }

    #[test]
    fn path_requires_increasing_k() {
        let pts = vec![PathPoint { k: 4, value: None }, PathPoint { k: 4, value: None }];
        assert!(EstimatePath::new(PathKind::HillXi, pts).is_err());
    }

    #[test]
    fn read_region_examples() {
        let flat = EstimatePath::new(
            PathKind::LvXiSmoothed,
            (3..=100).map(|k| PathPoint { k, value: Some(0.3) }).collect(),
        )
        .unwrap();
        assert_eq!(read_region(&flat, 100).unwrap(), (0.3, 0.3));
        assert!(matches!(read_region(&flat, 19), Err(Error::EmptyWindow { n: 19 })));
        assert_eq!(read_window(2000).unwrap(), (100, 400));
        assert_eq!(read_window(2167).unwrap(), (109, 433));
        assert_eq!(hill_window(2167).unwrap(), (2, 108));
    }

    #[test]
    fn lv_on_gpd_sample() {
        let s = gpd(0.5, 2000, 5);
        let path = lv_path(&s).unwrap();
        let (lo, hi) = read_region(&path, s.len()).unwrap();
        assert!(lo >= 0.35 && hi <= 0.65, "[{lo}, {hi}]");
    }

    #[test]
    fn lv_shift_invariance_exact_on_dyadic_data() {
        // values on a 2^-10 grid with small magnitude shift exactly
        let mut rng = seeded(31);
        let xs: Vec<f64> = (0..400)
            .map(|_| ((open_unit(&mut rng).powf(-0.7)) * 1024.0).round() / 1024.0)
            .collect();
        let s = sorted(xs);
        let base = lv_paths(&s).unwrap();
        for &c in &[-7.0, 3.0, 1000.0] {
            assert_eq!(lv_paths(&s.shifted(c)).unwrap(), base, "shift {c}");
        }
    }

    proptest! {
        #[test]
        fn lv_paths_nonnegative_and_prefix_means(seed in 0u64..1000, xi in -0.3f64..1.5) {
            let s = gpd(xi, 200, seed);
            let (raw, smoothed) = lv_paths(&s).unwrap();
            prop_assert!(raw.defined().all(|(_, v)| v >= 0.0));
            prop_assert!(smoothed.defined().all(|(_, v)| v >= 0.0));
            let mut sum = 0.0;
            let mut count = 0.0;
            for (p, q) in raw.points().iter().zip(smoothed.points()) {
                prop_assert_eq!(p.k, q.k);
                if let Some(v) = p.value {
                    sum += v;
                    count += 1.0;
                }
                prop_assert_eq!(q.value, if count > 0.0 { Some(sum / count) } else { None });
            }
        }

        #[test]
        fn lv_shift_invariance_approx(seed in 0u64..1000, c in -50.0f64..50.0) {
            let s = gpd(0.5, 150, seed);
            let a = lv_raw_path(&s).unwrap();
            let b = lv_raw_path(&s.shifted(c)).unwrap();
            for (p, q) in a.points().iter().zip(b.points()) {
                match (p.value, q.value) {
                    (Some(x), Some(y)) => prop_assert!((x - y).abs() < 1e-6, "k = {}: {x} vs {y}", p.k),
                    (x, y) => prop_assert_eq!(x, y),
                }
            }
        }

        #[test]
        fn lv_scale_invariance(seed in 0u64..1000, c in 0.01f64..100.0) {
            let s = gpd(0.5, 150, seed);
            let a = lv_raw_path(&s).unwrap();
            let b = lv_raw_path(&s.scaled(c)).unwrap();
            for (p, q) in a.points().iter().zip(b.points()) {
                match (p.value, q.value) {
                    (Some(x), Some(y)) => prop_assert!((x - y).abs() < 1e-6),
                    (x, y) => prop_assert_eq!(x, y),
                }
            }
        }

        #[test]
        fn hill_k_strictly_increasing(seed in 0u64..1000) {
            let s = gpd(1.0, 100, seed);
            let p = hill_path(&s).unwrap();
            prop_assert!(p.points().windows(2).all(|w| w[0].k < w[1].k));
            prop_assert_eq!(p.points()[0].k, 2);
            prop_assert_eq!(p.points().last().unwrap().k, 100);
        }
    }
}
