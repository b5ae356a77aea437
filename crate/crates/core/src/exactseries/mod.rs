//! Exact truncated multivariate Laurent series in `u = q^{1/2}` and `z₁..z₄`,
//! with coefficients in ℚ, ℚ[t] or ℚ[t₁,t₃].

mod euler;
mod param;
mod series;
mod window;

use std::sync::Arc;

pub use euler::{euler_product, euler_product_families, exp_const, exp_fixed, EulerFactor, FactorFamily};
pub use param::{int, rat, ParamExps, ParamPoly, ParamRing, ParamTermJson, MAX_PARAMS};
pub use series::{first_mismatch, MultiSeries, SeriesTermJson};
pub use window::{Forms, Monomial, TruncationSpec, Window, INF, NFORMS, NVARS, TOTAL_FORM};

use crate::error::{Error, Result};

const MAX_WIDENINGS: usize = 6;

/// Runs `build` on progressively wider working windows until the result is exact
/// on `target`. Builders that multiply by factors with negative exponents lose
/// exact range; the deficit reported by the first attempt is added as slack.
pub fn with_adaptive_precision<F>(target: &Arc<TruncationSpec>, build: F) -> Result<MultiSeries>
where
    F: FnMut(&Arc<TruncationSpec>) -> Result<MultiSeries>,
{
    with_adaptive_precision_from(target, [0; NFORMS], build)
}

/// As [`with_adaptive_precision`], starting from a caller-estimated slack.
pub fn with_adaptive_precision_from<F>(target: &Arc<TruncationSpec>, initial: Forms, mut build: F) -> Result<MultiSeries>
where
    F: FnMut(&Arc<TruncationSpec>) -> Result<MultiSeries>,
{
    let mut slack = initial;
    let mut last = None;
    for _ in 0..MAX_WIDENINGS {
        let working = if slack.iter().all(|&s| s == 0) {
            target.clone()
        } else {
            Arc::new(target.widened(&slack))
        };
        let result = build(&working)?.restrict(target)?;
        let deficit = result.precision_deficit(target);
        if deficit.iter().all(|&d| d == 0) {
            return Ok(result);
        }
        for (s, d) in slack.iter_mut().zip(deficit) {
            *s += d;
        }
        last = Some(result);
    }
    match last {
        Some(r) => r.check_exact_on_window().map(|_| r),
        None => Err(Error::Domain("adaptive precision made no attempt".into())),
    }
}
