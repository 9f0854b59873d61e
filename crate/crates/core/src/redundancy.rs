//! Redundancy of the environment's classical record: the smallest fragment
//! holding all but a deficit delta of the plateau information, how many such
//! fragments fit in the environment, and the closed-form scaling laws.

use crate::decoherence::{lambda_single_sq, ModelParams};
use crate::error::{Error, Result};
use crate::info::mutual_information;
use crate::states::binary_entropy;

/// Redundancy at one information deficit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RedundancyResult {
    pub delta: f64,
    /// Smallest qualifying fragment size, absent when no fragment reaches
    /// the target.
    pub n_f_delta: Option<u32>,
    /// `nE / nF_delta`, or 0 when no fragment qualifies.
    pub r_delta: f64,
    /// The information target's base: the fully decohered system entropy.
    pub plateau: f64,
    /// Set when only the whole environment (excluded by default, since its
    /// mutual information includes the purely quantum correlations) would
    /// have reached the target.
    pub full_fragment_only: bool,
}

fn plateau_of(p: &ModelParams) -> Result<f64> {
    let plateau = binary_entropy(p.sys.s00())?;
    if plateau <= 0.0 {
        return Err(Error::DegenerateSystem);
    }
    Ok(plateau)
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Invalid(format!("deficit {delta} outside (0, 1)")));
    }
    Ok(())
}

/// Smallest fragment with `I(S:F) >= (1 - delta) H_S`, by bisection over
/// the (monotone in nF) mutual information. `include_full` admits
/// `nF = nE`; by default the full environment is excluded because its
/// mutual information contains the quantum jump.
pub fn fragment_size_for_deficit_with(
    p: &ModelParams,
    delta: f64,
    include_full: bool,
) -> Result<Option<u32>> {
    check_delta(delta)?;
    let target = (1.0 - delta) * plateau_of(p)?;
    let reaches = |n_f: u32| -> Result<bool> {
        Ok(mutual_information(p, n_f)?.mutual_info >= target - 1e-12)
    };
    let hi = if include_full { p.n_env } else { p.n_env - 1 };
    if hi == 0 || !reaches(hi)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (1u32, hi);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if reaches(mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some(lo))
}

/// [`fragment_size_for_deficit_with`] with the whole environment excluded.
pub fn fragment_size_for_deficit(p: &ModelParams, delta: f64) -> Result<Option<u32>> {
    fragment_size_for_deficit_with(p, delta, false)
}

/// Redundancy `R_delta = nE / nF_delta` (0 when no fragment qualifies).
pub fn redundancy(p: &ModelParams, delta: f64) -> Result<RedundancyResult> {
    let plateau = plateau_of(p)?;
    let n_f_delta = fragment_size_for_deficit(p, delta)?;
    let full_fragment_only = n_f_delta.is_none()
        && fragment_size_for_deficit_with(p, delta, true)? == Some(p.n_env);
    Ok(RedundancyResult {
        delta,
        n_f_delta,
        r_delta: n_f_delta.map_or(0.0, |n| p.n_env as f64 / n as f64),
        plateau,
        full_fragment_only,
    })
}

/// Scaling law for a hazy aligned environment:
/// `R ~ nE ln(2 sqrt(l- l+)) / ln delta`. Valid for small deficits.
pub fn scaling_hazy(lp: f64, lm: f64, n_env: u32, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    if (lp + lm - 1.0).abs() > 1e-9 || !(lm > 0.0 && lm < lp && lp < 1.0) {
        return Err(Error::ScalingDomain(format!(
            "need 0 < lambda_- < lambda_+ < 1 summing to 1, got ({lp}, {lm})"
        )));
    }
    Ok(n_env as f64 * (2.0 * (lp * lm).sqrt()).ln() / delta.ln())
}

/// Scaling law for a pure misaligned environment:
/// `R ~ nE ln|Lambda_k|^2 / ln delta` with
/// `|Lambda_k|^2 = cos^2 t + sigma^2 sin^2 t`. Perfect per-qubit
/// correlation (`Lambda_k = 0`) gives `R = nE` exactly.
pub fn scaling_misaligned(sigma: f64, t: f64, n_env: u32, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    if !(-1.0..=1.0).contains(&sigma) {
        return Err(Error::Domain(sigma));
    }
    let env = crate::states::EnvQubit::from_alignment(sigma, 1.0)?;
    let lam_sq = lambda_single_sq(&env, t);
    if lam_sq >= 1.0 - 1e-15 {
        return Err(Error::ScalingDomain(
            "|Lambda_k| = 1: the fragment learns nothing".into(),
        ));
    }
    if lam_sq < 1e-30 {
        return Ok(n_env as f64);
    }
    Ok(n_env as f64 * lam_sq.ln() / delta.ln())
}

/// Limiting redundancy estimated from a grid of deficits.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitingRedundancy {
    /// Extrapolation of `-R_delta ln(delta) / nE` to `delta -> 0`,
    /// linear in `1/ln(delta)`.
    pub r_bar: f64,
    /// The grid samples `(delta, -R_delta ln(delta) / nE)`.
    pub grid: Vec<(f64, f64)>,
    /// Grid values moved both up and down by more than the staircase
    /// jitter; the extrapolation may be unreliable.
    pub non_monotone: bool,
    /// Some grid point had no qualifying fragment, or every `nF_delta`
    /// was 1 (the scaling regime was never entered).
    pub degenerate: bool,
}

/// Estimates `R-bar = lim_{delta->0} -R_delta ln(delta) / nE` by sampling
/// the grid and extrapolating with a least-squares line in `1/ln(delta)`.
pub fn limiting_redundancy(p: &ModelParams, delta_grid: &[f64]) -> Result<LimitingRedundancy> {
    if delta_grid.len() < 2 {
        return Err(Error::Invalid(
            "limiting redundancy needs at least two deficits".into(),
        ));
    }
    let mut grid = Vec::with_capacity(delta_grid.len());
    let mut degenerate = false;
    let mut all_single = true;
    for &delta in delta_grid {
        let r = redundancy(p, delta)?;
        match r.n_f_delta {
            Some(n) => all_single &= n == 1,
            None => degenerate = true,
        }
        grid.push((delta, -r.r_delta * delta.ln() / p.n_env as f64));
    }
    degenerate |= all_single;

    // least-squares fit y = a + b x with x = 1/ln(delta); a is the limit
    let n = grid.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(delta, y) in &grid {
        let x = 1.0 / delta.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let det = n * sxx - sx * sx;
    let r_bar = if det.abs() < 1e-30 {
        sy / n
    } else {
        (sy * sxx - sx * sxy) / det
    };

    let mean = sy / n;
    let jitter = 0.01 * mean.abs() + 1e-12;
    let mut up = false;
    let mut down = false;
    for w in grid.windows(2) {
        let d = w[1].1 - w[0].1;
        if d > jitter {
            up = true;
        }
        if d < -jitter {
            down = true;
        }
    }

    Ok(LimitingRedundancy {
        r_bar,
        grid,
        non_monotone: up && down,
        degenerate,
    })
}
