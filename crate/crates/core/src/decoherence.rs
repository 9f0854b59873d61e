//! Decoherence factors and system-entropy kernels for the pure-decoherence
//! model H = (1/2) sigma_S^z sum_k sigma_k^z.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::states::{h2, EnvQubit, SystemQubit};

/// Single-qubit decoherence factor `Lambda_k(t) = cos t - i sigma sin t`.
/// Only the misalignment of the environment qubit enters.
pub fn lambda_single(env: &EnvQubit, t: f64) -> Complex64 {
    Complex64::new(t.cos(), -env.sigma() * t.sin())
}

/// Decoherence factor contributed by `n` identical environment qubits,
/// `Lambda_A = Lambda_k^n`. Evaluated in polar form so the modulus stays
/// accurate down to underflow for hundreds of qubits.
pub fn lambda_subset(env: &EnvQubit, n: u32, t: f64) -> Complex64 {
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let lk = lambda_single(env, t);
    let r = lk.norm();
    if r == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let modulus = (n as f64 * r.ln()).exp();
    Complex64::from_polar(modulus, n as f64 * lk.arg())
}

/// Squared modulus `|Lambda_k|^2 = cos^2 t + sigma^2 sin^2 t` without
/// constructing the complex factor.
pub fn lambda_single_sq(env: &EnvQubit, t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    c * c + env.sigma() * env.sigma() * s * s
}

/// Upper eigenvalue of the system decohered by a subset with factor
/// modulus-squared `lam_sq`.
pub fn kappa(sys: &SystemQubit, lam_sq: f64) -> f64 {
    let d = sys.s11() - sys.s00();
    (0.5 * (1.0 + (d * d + 4.0 * sys.s01().norm_sqr() * lam_sq).sqrt())).clamp(0.5, 1.0)
}

/// Variant of [`kappa`] with the coherence replaced by its maximum,
/// `|s01|^2 -> s00 s11`; governs the fragment entropy when the environment
/// starts pure, independent of any preexisting decoherence of the system.
pub fn kappa_tilde(sys: &SystemQubit, lam_sq: f64) -> f64 {
    let d = sys.s11() - sys.s00();
    (0.5 * (1.0 + (d * d + 4.0 * sys.s00() * sys.s11() * lam_sq).sqrt())).clamp(0.5, 1.0)
}

/// Full problem instance: system state, one shared environment-qubit state,
/// environment size, and evolution time.
#[derive(Debug, Clone, Copy)]
pub struct ModelParams {
    pub sys: SystemQubit,
    pub env: EnvQubit,
    pub n_env: u32,
    pub t: f64,
}

impl ModelParams {
    pub fn new(sys: SystemQubit, env: EnvQubit, n_env: u32, t: f64) -> Result<Self> {
        if n_env == 0 {
            return Err(Error::Invalid("environment must contain a qubit".into()));
        }
        if !t.is_finite() {
            return Err(Error::Invalid(format!("non-finite time {t}")));
        }
        Ok(Self { sys, env, n_env, t })
    }

    /// Checks `0 <= n_f <= n_env` before splitting the environment.
    pub fn check_fragment(&self, n_f: u32) -> Result<()> {
        if n_f > self.n_env {
            return Err(Error::Invalid(format!(
                "fragment of {n_f} qubits exceeds environment of {}",
                self.n_env
            )));
        }
        Ok(())
    }

    pub fn lambda_env(&self) -> Complex64 {
        lambda_subset(&self.env, self.n_env, self.t)
    }

    pub fn lambda_fragment(&self, n_f: u32) -> Complex64 {
        lambda_subset(&self.env, n_f, self.t)
    }

    pub fn lambda_remainder(&self, n_f: u32) -> Complex64 {
        lambda_subset(&self.env, self.n_env - n_f, self.t)
    }

    fn lambda_subset_sq(&self, n: u32) -> f64 {
        if n == 0 {
            return 1.0;
        }
        let r2 = lambda_single_sq(&self.env, self.t);
        if r2 == 0.0 {
            return 0.0;
        }
        (n as f64 * r2.ln()).exp()
    }

    pub fn kappa_subset(&self, n: u32) -> f64 {
        kappa(&self.sys, self.lambda_subset_sq(n))
    }

    pub fn kappa_tilde_subset(&self, n: u32) -> f64 {
        kappa_tilde(&self.sys, self.lambda_subset_sq(n))
    }

    /// Entropy of the system decohered by the whole environment, in bits.
    pub fn system_entropy(&self) -> f64 {
        h2(self.kappa_subset(self.n_env))
    }
}
