//! Mutual information, pointer-basis discord, and the plateau asymptotics.

use crate::decoherence::ModelParams;
use crate::error::{Error, Result};
use crate::spectral::{fragment_entropy, ln_binomial};
use crate::states::h2;

/// Information shared between the system and a fragment of `n_f` qubits
/// at time `t`. `mutual_info = fragment_entropy_gain + discord` by
/// construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfoPoint {
    pub n_f: u32,
    pub t: f64,
    pub mutual_info: f64,
    pub discord: f64,
    /// `H_F(t) - nF h`: the entropy the fragment gained by recording the
    /// system, and the classical part of the mutual information.
    pub fragment_entropy_gain: f64,
}

/// Exact mutual information `I(S:F) = [H_F(t) - nF h] + [H(kappa_E) -
/// H(kappa_{E/F})]`. The fragment entropy comes from the total-spin block
/// decomposition (or its closed form); the bracketed discord needs only
/// 2x2 eigenvalues.
pub fn mutual_information(p: &ModelParams, n_f: u32) -> Result<InfoPoint> {
    p.check_fragment(n_f)?;
    if n_f == 0 {
        return Ok(InfoPoint {
            n_f,
            t: p.t,
            mutual_info: 0.0,
            discord: 0.0,
            fragment_entropy_gain: 0.0,
        });
    }
    let h_f = fragment_entropy(&p.sys, &p.env, n_f, p.t)?;
    let gain = h_f - n_f as f64 * p.env.haziness();
    let disc = discord(p, n_f)?;
    Ok(InfoPoint {
        n_f,
        t: p.t,
        mutual_info: gain + disc,
        discord: disc,
        fragment_entropy_gain: gain,
    })
}

/// Mutual information for an initially pure environment, entirely in
/// closed form: `I = H(kappa~_F) + H(kappa_E) - H(kappa_{E/F})`. The
/// fragment term uses the purified system, so it is valid for a mixed
/// system as well.
pub fn mutual_information_pure_env(p: &ModelParams, n_f: u32) -> Result<f64> {
    if !p.env.is_pure() {
        return Err(Error::NotPure);
    }
    p.check_fragment(n_f)?;
    if n_f == 0 {
        return Ok(0.0);
    }
    Ok(h2(p.kappa_tilde_subset(n_f)) + discord(p, n_f)?)
}

/// Quantum discord with respect to the pointer basis,
/// `delta(S:F) = H(kappa_E) - H(kappa_{E/F})`. Depends on the environment
/// only through its misalignment, never its haziness.
pub fn discord(p: &ModelParams, n_f: u32) -> Result<f64> {
    p.check_fragment(n_f)?;
    Ok(h2(p.kappa_subset(p.n_env)) - h2(p.kappa_subset(p.n_env - n_f)))
}

/// Small-coherence approximation to the discord:
/// `(<sx>^2 + <sy>^2)(|Lambda_{E/F}|^2 - |Lambda_E|^2)
///  log2(s00/s11) / (4 (s00 - s11))`,
/// with the removable singularity at `s00 = 1/2` filled by its limit
/// `1/(2 ln 2)`. Accurate once both decoherence factors are small.
pub fn discord_approx(p: &ModelParams, n_f: u32) -> Result<f64> {
    p.check_fragment(n_f)?;
    let sx = 2.0 * p.sys.s01().re;
    let sy = -2.0 * p.sys.s01().im;
    let (s00, s11) = (p.sys.s00(), p.sys.s11());
    let ratio = if (s00 - s11).abs() < 1e-9 {
        1.0 / (2.0 * std::f64::consts::LN_2)
    } else {
        (s00 / s11).log2() / (4.0 * (s00 - s11))
    };
    let lam_env = p.lambda_env().norm_sqr();
    let lam_rem = p.lambda_remainder(n_f).norm_sqr();
    Ok((sx * sx + sy * sy) * (lam_rem - lam_env) * ratio)
}

/// The good-decoherence mutual information `H_F(t) - nF h`, exact whenever
/// the discord vanishes.
pub fn good_decoherence_mi(p: &ModelParams, n_f: u32) -> Result<f64> {
    Ok(mutual_information(p, n_f)?.fragment_entropy_gain)
}

fn check_lambdas(lp: f64, lm: f64) -> Result<()> {
    if (lp + lm - 1.0).abs() > 1e-9 {
        return Err(Error::ScalingDomain(format!(
            "lambda_+ + lambda_- = {} != 1",
            lp + lm
        )));
    }
    if !(lm > 0.0 && lp > lm) {
        return Err(Error::ScalingDomain(format!(
            "need 0 < lambda_- < lambda_+, got ({lp}, {lm})"
        )));
    }
    Ok(())
}

/// Asymptotic deviation of the mutual information from the plateau at
/// `r00 = 1/2`, `t = pi/2`:
/// `(2 sqrt(l- l+))^nF / sqrt(pi nF / 2) * 2 pi sqrt(s00 s11) /
///  (ln2 ln(l+/l-))`.
pub fn asymptotic_deviation(s00: f64, lp: f64, lm: f64, n_f: u32) -> Result<f64> {
    check_lambdas(lp, lm)?;
    if !(0.0..=1.0).contains(&s00) {
        return Err(Error::Domain(s00));
    }
    let decay = (n_f as f64 * (2.0 * (lp * lm).sqrt()).ln()).exp();
    let gauss = (std::f64::consts::PI * n_f as f64 / 2.0).sqrt();
    let pref = 2.0 * std::f64::consts::PI * (s00 * (1.0 - s00)).sqrt()
        / (std::f64::consts::LN_2 * (lp / lm).ln());
    Ok(decay / gauss * pref)
}

/// Exact deviation `H_S - I(S:F)` at `r00 = 1/2`, `t = pi/2`, computed from
/// the rewritten sum
/// `sum_n C(F,n) [ s00 l-^n l+^{F-n} log2(1 + (s11/s00)(l-/l+)^{F-2n})
///              + s11 l-^{F-n} l+^n log2(1 + (s00/s11)(l+/l-)^{F-2n}) ]`
/// rather than by subtraction, so it stays accurate long after the direct
/// difference would cancel to rounding noise.
pub fn plateau_deviation(s00: f64, lp: f64, lm: f64, n_f: u32) -> Result<f64> {
    check_lambdas(lp, lm)?;
    if !(0.0..=1.0).contains(&s00) {
        return Err(Error::Domain(s00));
    }
    let s11 = 1.0 - s00;
    let (ln_lp, ln_lm) = (lp.ln(), lm.ln());
    // ln(1 + e^y), stable for y of either sign and any magnitude
    let ln1pe = |y: f64| -> f64 {
        if y == f64::NEG_INFINITY {
            0.0
        } else if y > 0.0 {
            y + (-y).exp().ln_1p()
        } else {
            y.exp().ln_1p()
        }
    };
    let ln_ratio = |a: f64, b: f64| -> f64 {
        if a == 0.0 {
            f64::NEG_INFINITY
        } else {
            (a / b).ln()
        }
    };
    let f = n_f as f64;
    let mut total = 0.0;
    for n in 0..=n_f as u64 {
        let nn = n as f64;
        let lnc = ln_binomial(n_f as u64, n);
        let k = f - 2.0 * nn;
        if s00 > 0.0 {
            let w = (lnc + nn * ln_lm + (f - nn) * ln_lp).exp();
            total += s00 * w * ln1pe(ln_ratio(s11, s00) + k * (ln_lm - ln_lp));
        }
        if s11 > 0.0 {
            let w = (lnc + (f - nn) * ln_lm + nn * ln_lp).exp();
            total += s11 * w * ln1pe(ln_ratio(s00, s11) + k * (ln_lp - ln_lm));
        }
    }
    Ok(total / std::f64::consts::LN_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{binary_entropy, EnvQubit, SystemQubit};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_PI_2;

    fn params(s00: f64, sigma: f64, zeta: f64, n_env: u32, t: f64) -> ModelParams {
        ModelParams::new(
            SystemQubit::pure(s00).unwrap(),
            EnvQubit::from_alignment(sigma, zeta).unwrap(),
            n_env,
            t,
        )
        .unwrap()
    }

    #[test]
    fn plateau_for_pure_aligned_env() {
        let p = params(0.5, 0.0, 1.0, 200, FRAC_PI_2);
        for n_f in [1u32, 50, 100, 199] {
            let pt = mutual_information(&p, n_f).unwrap();
            assert_abs_diff_eq!(pt.mutual_info, 1.0, epsilon = 1e-9);
            assert_abs_diff_eq!(pt.discord, 0.0, epsilon = 1e-9);
        }
        // grabbing the whole environment adds the quantum correlations
        let full = mutual_information(&p, 200).unwrap();
        assert_abs_diff_eq!(full.mutual_info, 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(full.discord, 1.0, epsilon = 1e-9);
        // nF = 0 carries nothing
        assert_eq!(mutual_information(&p, 0).unwrap().mutual_info, 0.0);
    }

    #[test]
    fn hazy_reference_value() {
        // lambda_+- = (3/4, 1/4): H_F(pi/2) = 1.954435 for nF=2 and
        // h = H(3/4), discord term vanishes at nE = 200
        let env = EnvQubit::new(0.5, Complex64::new(0.25, 0.0)).unwrap();
        let p = ModelParams::new(SystemQubit::pure(0.5).unwrap(), env, 200, FRAC_PI_2).unwrap();
        let pt = mutual_information(&p, 2).unwrap();
        let expect = 1.954435 - 2.0 * 0.811278;
        assert_abs_diff_eq!(pt.mutual_info, expect, epsilon = 1e-5);
        assert_abs_diff_eq!(pt.mutual_info, 0.331879, epsilon = 1e-5);
        assert_abs_diff_eq!(pt.discord, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn pure_env_closed_form_consistency() {
        let p = params(0.3, 0.4, 1.0, 12, 0.8);
        for n_f in 0..=12 {
            let exact = mutual_information(&p, n_f).unwrap().mutual_info;
            let fast = mutual_information_pure_env(&p, n_f).unwrap();
            assert_abs_diff_eq!(exact, fast, epsilon = 1e-9);
        }
        // hazy env rejected
        let hazy = params(0.3, 0.4, 0.5, 12, 0.8);
        assert!(matches!(
            mutual_information_pure_env(&hazy, 3),
            Err(Error::NotPure)
        ));
    }

    #[test]
    fn mixed_system_plateau_level() {
        // existing decoherence of S does not move the plateau
        let sys = SystemQubit::new(0.5, Complex64::new(0.3, 0.0)).unwrap();
        let env = EnvQubit::from_alignment(0.0, 1.0).unwrap();
        let p = ModelParams::new(sys, env, 200, FRAC_PI_2).unwrap();
        let i = mutual_information_pure_env(&p, 40).unwrap();
        assert_abs_diff_eq!(i, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn discord_properties() {
        let p = params(0.5, 0.3, 0.7, 8, 0.0);
        assert_abs_diff_eq!(discord(&p, 3).unwrap(), 0.0, epsilon = 1e-12);

        let p = params(0.5, 0.0, 1.0, 8, FRAC_PI_2);
        assert_abs_diff_eq!(discord(&p, 8).unwrap(), 1.0, epsilon = 1e-12);

        // no coherence, no discord
        let sys = SystemQubit::new(0.4, Complex64::new(0.0, 0.0)).unwrap();
        let env = EnvQubit::from_alignment(0.2, 0.6).unwrap();
        let p = ModelParams::new(sys, env, 8, 1.3).unwrap();
        assert_abs_diff_eq!(discord(&p, 5).unwrap(), 0.0, epsilon = 1e-12);

        // haziness independence at fixed misalignment
        let a = params(0.3, 0.5, 1.0, 10, 0.9);
        let b = params(0.3, 0.5, 0.2, 10, 0.9);
        assert_eq!(discord(&a, 4).unwrap(), discord(&b, 4).unwrap());
    }

    #[test]
    fn discord_approx_matches_exact_in_regime() {
        // pick t near pi/2 with small misalignment so both Lambda factors
        // are tiny but nonzero
        for s00 in [0.35, 0.5, 0.65] {
            let sys = SystemQubit::pure(s00).unwrap();
            let env = EnvQubit::from_alignment(0.02, 1.0).unwrap();
            let p = ModelParams::new(sys, env, 12, 1.45).unwrap();
            for n_f in [2u32, 6] {
                let exact = discord(&p, n_f).unwrap();
                let approx = discord_approx(&p, n_f).unwrap();
                assert!(
                    (approx - exact).abs() <= 0.05 * exact.abs() + 1e-15,
                    "s00={s00} nF={n_f}: exact {exact}, approx {approx}"
                );
            }
        }
    }

    #[test]
    fn decomposition_identity() {
        let p = params(0.4, 0.3, 0.6, 10, 1.1);
        for n_f in 1..=10 {
            let pt = mutual_information(&p, n_f).unwrap();
            assert_abs_diff_eq!(
                pt.mutual_info,
                good_decoherence_mi(&p, n_f).unwrap() + pt.discord,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn antisymmetry_pure_sys_pure_env() {
        let p = params(0.5, 0.25, 1.0, 10, 0.9);
        let hs = p.system_entropy();
        for n_f in 0..=10 {
            let a = mutual_information(&p, n_f).unwrap().mutual_info;
            let b = mutual_information(&p, 10 - n_f).unwrap().mutual_info;
            assert_abs_diff_eq!(a + b, 2.0 * hs, epsilon = 1e-9);
        }
    }

    #[test]
    fn asymptotic_deviation_reference() {
        let v = asymptotic_deviation(0.5, 0.75, 0.25, 40).unwrap();
        assert_abs_diff_eq!(v, 1.652e-3, epsilon = 2e-5);
        // monotone decreasing in nF
        let mut prev = f64::INFINITY;
        for n_f in (10..100).step_by(10) {
            let v = asymptotic_deviation(0.5, 0.75, 0.25, n_f).unwrap();
            assert!(v < prev);
            prev = v;
        }
        // ill-defined limits rejected
        assert!(asymptotic_deviation(0.5, 1.0, 0.0, 10).is_err());
        assert!(asymptotic_deviation(0.5, 0.5, 0.5, 10).is_err());
    }

    #[test]
    fn plateau_deviation_matches_direct_difference() {
        // where the direct subtraction is still well conditioned, the
        // stable rewrite must agree with H_S - I
        for (s00, zeta, n_f) in [(0.5, 0.5, 10u32), (0.25, 0.7, 14), (0.5, 0.3, 8)] {
            let env = EnvQubit::from_alignment(0.0, zeta).unwrap();
            let p = ModelParams::new(SystemQubit::pure(s00).unwrap(), env, 200, FRAC_PI_2)
                .unwrap();
            let i = mutual_information(&p, n_f).unwrap().mutual_info;
            let hs = binary_entropy(s00).unwrap();
            let lp = 0.5 + env.r01().norm();
            let dev = plateau_deviation(s00, lp, 1.0 - lp, n_f).unwrap();
            assert_abs_diff_eq!(dev, hs - i, epsilon = 1e-10);
        }
    }

    #[test]
    fn plateau_deviation_no_cancellation_at_large_nf() {
        let v = plateau_deviation(0.5, 0.75, 0.25, 400).unwrap();
        assert!(v > 0.0 && v < 1e-20, "{v}");
        let approx = asymptotic_deviation(0.5, 0.75, 0.25, 400).unwrap();
        assert!((approx - v).abs() / v < 0.05, "exact {v}, approx {approx}");
    }
}
