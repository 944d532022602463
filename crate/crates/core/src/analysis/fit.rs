//! Growth-model fitting and selection.
//!
//! Two two-parameter models describe a series `n(t)`:
//!
//! - bounded:   `n(t) = -a / ln(t) + b` (saturates as `t` grows)
//! - unbounded: `n(t) =  a * ln(t) + b` (diverges)
//!
//! Both reduce to ordinary least squares on a transformed predictor
//! (`x = -1/ln t` respectively `x = ln t`), solved in closed form. Model
//! quality is reported as R^2 plus AIC/BIC in the full Gaussian-likelihood
//! convention with `k = 2` regression parameters:
//!
//! ```text
//! AIC = N ln(2 pi RSS / N) + N + 2 (k + 1)
//! BIC = N ln(2 pi RSS / N) + N + (k + 1) ln N
//! ```
//!
//! Absolute criterion values depend on the convention; comparisons and
//! differences between the two models on the same data do not.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Natural logarithms throughout; a base change rescales `(a, b)` but not
/// R^2 or the AIC ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthModel {
    Bounded,
    Unbounded,
}

impl GrowthModel {
    fn predictor<R: Real>(self, t: u32) -> R {
        let ln_t = R::from_f64_lossy(t as f64).ln();
        match self {
            GrowthModel::Bounded => -R::one() / ln_t,
            GrowthModel::Unbounded => ln_t,
        }
    }
}

/// Which abscissae inside the fit range participate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FitGrid {
    /// Every integer `t` in range with a defined value (the default).
    #[default]
    Full,
    /// The given number of log-spaced points, rounded to integer `t` and
    /// deduplicated.
    LogResample(usize),
}

/// Fitted parameters and quality measures. `r_squared` is `None` when the
/// response has zero variance (R^2 undefined).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult<R> {
    pub model: GrowthModel,
    pub a: R,
    pub b: R,
    pub r_squared: Option<R>,
    pub aic: R,
    pub bic: R,
    pub t_range: (u32, u32),
    pub n_points: usize,
}

/// Gaussian-likelihood information criteria for a 2-parameter regression
/// with residual sum of squares `rss` over `n` points.
pub fn information_criteria<R: Real>(rss: R, n: usize) -> (R, R) {
    let nf = R::from_usize_lossy(n);
    let tau = R::from_f64_lossy(std::f64::consts::TAU); // 2 pi
    let core = nf * (tau * rss / nf).ln() + nf;
    let k_plus_1 = R::from_f64_lossy(3.0);
    (
        core + R::from_f64_lossy(2.0) * k_plus_1,
        core + k_plus_1 * nf.ln(),
    )
}

struct LinearFit<R> {
    slope: R,
    intercept: R,
    rss: R,
    tss: R,
}

/// Closed-form least squares through centered sums.
fn linear_fit<R: Real>(points: &[(R, R)]) -> LinearFit<R> {
    let n = R::from_usize_lossy(points.len());
    let mut mean_x = R::zero();
    let mut mean_y = R::zero();
    for &(x, y) in points {
        mean_x = mean_x + x;
        mean_y = mean_y + y;
    }
    mean_x = mean_x / n;
    mean_y = mean_y / n;

    let mut sxx = R::zero();
    let mut sxy = R::zero();
    for &(x, y) in points {
        let dx = x - mean_x;
        sxx = sxx + dx * dx;
        sxy = sxy + dx * (y - mean_y);
    }
    let slope = if sxx > R::zero() { sxy / sxx } else { R::zero() };
    let intercept = mean_y - slope * mean_x;

    let mut rss = R::zero();
    let mut tss = R::zero();
    for &(x, y) in points {
        let r = y - (slope * x + intercept);
        rss = rss + r * r;
        let d = y - mean_y;
        tss = tss + d * d;
    }
    LinearFit {
        slope,
        intercept,
        rss,
        tss,
    }
}

fn grid_points(t_range: (u32, u32), grid: FitGrid) -> Vec<u32> {
    let (lo, hi) = t_range;
    match grid {
        FitGrid::Full => (lo..=hi).collect(),
        FitGrid::LogResample(count) => {
            let count = count.max(2);
            let ln_lo = (lo as f64).ln();
            let ln_hi = (hi as f64).ln();
            let mut ts: Vec<u32> = (0..count)
                .map(|j| {
                    let frac = j as f64 / (count - 1) as f64;
                    (ln_lo + frac * (ln_hi - ln_lo)).exp().round() as u32
                })
                .collect();
            ts.dedup();
            ts
        }
    }
}

/// Fits one growth model to `series` (indexed by `t - 1`) over the integer
/// steps of `t_range` where the series is defined.
pub fn fit_growth<R: Real>(
    series: &[Option<R>],
    t_range: (u32, u32),
    model: GrowthModel,
    grid: FitGrid,
) -> Result<FitResult<R>> {
    let (lo, hi) = t_range;
    if lo < 2 {
        return Err(Error::InvalidFitRange {
            lo,
            hi,
            reason: "lower bound below 2 makes ln(t) degenerate".into(),
        });
    }
    if lo > hi {
        return Err(Error::InvalidFitRange {
            lo,
            hi,
            reason: "empty range".into(),
        });
    }

    let mut points: Vec<(R, R)> = Vec::new();
    for t in grid_points(t_range, grid) {
        if let Some(Some(y)) = series.get(t as usize - 1) {
            points.push((model.predictor(t), *y));
        }
    }
    if points.len() < 3 {
        return Err(Error::InsufficientData {
            need: 3,
            found: points.len(),
        });
    }

    let fit = linear_fit(&points);
    let (aic, bic) = information_criteria(fit.rss, points.len());
    let r_squared = if fit.tss > R::zero() {
        Some(R::one() - fit.rss / fit.tss)
    } else {
        None
    };
    Ok(FitResult {
        model,
        a: fit.slope,
        b: fit.intercept,
        r_squared,
        aic,
        bic,
        t_range,
        n_points: points.len(),
    })
}

/// Both fits side by side. `delta_aic`/`delta_bic` are bounded minus
/// unbounded, so positive deltas favor the unbounded model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelComparison<R> {
    pub bounded: FitResult<R>,
    pub unbounded: FitResult<R>,
    pub verdict: GrowthModel,
    pub delta_aic: R,
    pub delta_bic: R,
}

/// Fits both models and selects the one with the lower AIC (ties go to
/// bounded).
pub fn compare_models<R: Real>(
    series: &[Option<R>],
    t_range: (u32, u32),
    grid: FitGrid,
) -> Result<ModelComparison<R>> {
    let bounded = fit_growth(series, t_range, GrowthModel::Bounded, grid)?;
    let unbounded = fit_growth(series, t_range, GrowthModel::Unbounded, grid)?;
    let verdict = if unbounded.aic < bounded.aic {
        GrowthModel::Unbounded
    } else {
        GrowthModel::Bounded
    };
    let delta_aic = bounded.aic - unbounded.aic;
    let delta_bic = bounded.bic - unbounded.bic;
    Ok(ModelComparison {
        bounded,
        unbounded,
        verdict,
        delta_aic,
        delta_bic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series_from(f: impl Fn(u32) -> f64, len: u32) -> Vec<Option<f64>> {
        (1..=len).map(|t| Some(f(t))).collect()
    }

    const RANGE: (u32, u32) = (100, 2000);

    #[test]
    fn unbounded_synthetic_recovers_parameters_exactly() {
        let series = series_from(|t| 1.60238 * (t as f64).ln() - 6.30145, 2000);
        let fit = fit_growth(&series, RANGE, GrowthModel::Unbounded, FitGrid::Full).unwrap();
        assert!((fit.a - 1.60238).abs() < 1e-9, "a = {}", fit.a);
        assert!((fit.b + 6.30145).abs() < 1e-9, "b = {}", fit.b);
        assert!((1.0 - fit.r_squared.unwrap()).abs() < 1e-9);
        assert_eq!(fit.n_points, 1901);
    }

    #[test]
    fn bounded_synthetic_recovers_parameters_exactly() {
        let series = series_from(|t| -57.1218 / (t as f64).ln() + 12.7686, 2000);
        let fit = fit_growth(&series, RANGE, GrowthModel::Bounded, FitGrid::Full).unwrap();
        assert!((fit.a - 57.1218).abs() < 1e-9, "a = {}", fit.a);
        assert!((fit.b - 12.7686).abs() < 1e-9, "b = {}", fit.b);
        assert!((1.0 - fit.r_squared.unwrap()).abs() < 1e-9);
    }

    #[test]
    fn constant_series_fits_a_zero_slope() {
        let series = series_from(|_| 5.0, 2000);
        let fit = fit_growth(&series, RANGE, GrowthModel::Unbounded, FitGrid::Full).unwrap();
        assert_eq!(fit.a, 0.0);
        assert_eq!(fit.b, 5.0);
        // zero response variance: R^2 undefined, flagged as None
        assert!(fit.r_squared.is_none());
    }

    #[test]
    fn fit_agrees_with_normal_equations_oracle() {
        // centered route vs raw normal equations solved by Cramer's rule
        let mut rng = crate::rng::RngStream::new(17, 0);
        let series: Vec<Option<f64>> = (1..=2000)
            .map(|t| Some(2.5 * (t as f64).ln() - 3.0 + (rng.next_f64() - 0.5)))
            .collect();
        let fit = fit_growth(&series, RANGE, GrowthModel::Unbounded, FitGrid::Full).unwrap();

        let (mut n, mut sx, mut sy, mut sxx, mut sxy) = (0.0f64, 0.0, 0.0, 0.0, 0.0);
        for t in RANGE.0..=RANGE.1 {
            let x = (t as f64).ln();
            let y = series[t as usize - 1].unwrap();
            n += 1.0;
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        let det = n * sxx - sx * sx;
        let a = (n * sxy - sx * sy) / det;
        let b = (sxx * sy - sx * sxy) / det;
        assert!((fit.a - a).abs() < 1e-9, "{} vs {}", fit.a, a);
        assert!((fit.b - b).abs() < 1e-9, "{} vs {}", fit.b, b);
    }

    #[test]
    fn information_criteria_match_frozen_reference() {
        // x = [0, 1, 2], y = [1, 2, 4]: slope 1.5, intercept 5/6, rss 1/6;
        // reference values computed independently with big-float arithmetic
        let points = [(0.0f64, 1.0), (1.0, 2.0), (2.0, 4.0)];
        let fit = linear_fit(&points);
        assert!((fit.slope - 1.5).abs() < 1e-12);
        assert!((fit.intercept - 0.8333333333333335).abs() < 1e-12);
        assert!((fit.rss - 0.16666666666666669).abs() < 1e-12);
        assert!((fit.tss - 4.666666666666666).abs() < 1e-12);
        let (aic, bic) = information_criteria(fit.rss, 3);
        assert!((aic - 5.8425159255395425).abs() < 1e-9, "aic = {aic}");
        assert!((bic - 3.1383527915438716).abs() < 1e-9, "bic = {bic}");
    }

    #[test]
    fn perfect_fit_sends_criteria_to_negative_infinity() {
        let (aic, bic) = information_criteria(0.0f64, 100);
        assert_eq!(aic, f64::NEG_INFINITY);
        assert_eq!(bic, f64::NEG_INFINITY);
    }

    #[test]
    fn too_few_points_is_an_error() {
        let mut series = vec![None; 2000];
        series[99] = Some(1.0f64);
        series[999] = Some(2.0);
        assert!(matches!(
            fit_growth(&series, RANGE, GrowthModel::Unbounded, FitGrid::Full),
            Err(Error::InsufficientData { need: 3, found: 2 })
        ));
    }

    #[test]
    fn degenerate_range_is_rejected() {
        let series = series_from(|t| t as f64, 10);
        assert!(matches!(
            fit_growth(&series, (1, 10), GrowthModel::Unbounded, FitGrid::Full),
            Err(Error::InvalidFitRange { .. })
        ));
        assert!(matches!(
            fit_growth(&series, (10, 5), GrowthModel::Unbounded, FitGrid::Full),
            Err(Error::InvalidFitRange { .. })
        ));
    }

    #[test]
    fn verdict_follows_the_generating_model() {
        let unbounded = series_from(|t| 2.0 * (t as f64).ln() + 1.0, 2000);
        let cmp = compare_models(&unbounded, RANGE, FitGrid::Full).unwrap();
        assert_eq!(cmp.verdict, GrowthModel::Unbounded);
        assert!(cmp.delta_aic > 0.0);

        let bounded = series_from(|t| -30.0 / (t as f64).ln() + 9.0, 2000);
        let cmp = compare_models(&bounded, RANGE, FitGrid::Full).unwrap();
        assert_eq!(cmp.verdict, GrowthModel::Bounded);
        assert!(cmp.delta_aic < 0.0);
    }

    #[test]
    fn log_resampled_grid_recovers_exact_data_too() {
        let series = series_from(|t| 1.60238 * (t as f64).ln() - 6.30145, 2000);
        let fit = fit_growth(
            &series,
            RANGE,
            GrowthModel::Unbounded,
            FitGrid::LogResample(101),
        )
        .unwrap();
        assert!((fit.a - 1.60238).abs() < 1e-9);
        assert!(fit.n_points <= 101 && fit.n_points >= 50);
    }

    #[test]
    fn fitting_works_at_f32_with_loose_tolerance() {
        let series: Vec<Option<f32>> = (1..=2000)
            .map(|t| Some(1.5 * (t as f32).ln() - 2.0))
            .collect();
        let fit = fit_growth(&series, RANGE, GrowthModel::Unbounded, FitGrid::Full).unwrap();
        assert!((fit.a - 1.5).abs() < 1e-3, "a = {}", fit.a);
    }
}
