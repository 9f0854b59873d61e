//! Polynomial-time diagonalization of the fragment density matrix
//! `rho_F(t) = s00 rho~(t)^{x nF} + s11 rho~(-t)^{x nF}`.
//!
//! Both tensor powers are permutation symmetric, so each decomposes over
//! total-spin sectors j = nF/2, nF/2 - 1, ... Every sector contributes a
//! block of dimension 2j+1 repeated B_j times, where B_j counts the paths
//! in the Clebsch-Gordan branching. Within a sector a tensor power of a
//! diagonal 2x2 matrix is again diagonal with entries
//! lambda_+^{nF/2+m} lambda_-^{nF/2-m}; a non-diagonal single-qubit state
//! is handled by conjugating with the spin-j rotation whose Euler angles
//! come from the 2x2 unitary that diagonalizes it.

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::states::{EnvQubit, Spectrum, SystemQubit, EIGEN_CLAMP};

/// Natural log of the binomial coefficient C(n, k).
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    assert!(k <= n);
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// Number of inequivalent copies of the spin-j irrep in n spins-1/2,
/// `B_j = C(n, n/2 - j) - C(n, n/2 - j - 1)`. `two_j` must have the parity
/// of `n`. Returned as `f64`: the count is an exact integer below 2^53 and
/// overflows every fixed-width integer near n = 130.
pub fn multiplicity(n: u32, two_j: u32) -> f64 {
    assert!(two_j <= n && (n - two_j) % 2 == 0);
    let k = ((n - two_j) / 2) as u64;
    // C(n,k) - C(n,k-1) = C(n,k) (2j+1) / (n/2 + j + 1), kept in log space
    let ln_b = ln_binomial(n as u64, k) + ((two_j + 1) as f64).ln()
        - (((n + two_j) / 2 + 1) as f64).ln();
    ln_b.exp()
}

/// Euler angles (z-y-z convention) of an SU(2) element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerAngles {
    /// The defining (spin-1/2) representation,
    /// `R = exp(-i alpha Jz) exp(-i beta Jy) exp(-i gamma Jz)`.
    pub fn d_half(&self) -> Matrix2<Complex64> {
        let (hb_sin, hb_cos) = (self.beta / 2.0).sin_cos();
        let ep = Complex64::from_polar(1.0, -(self.alpha + self.gamma) / 2.0);
        let em = Complex64::from_polar(1.0, -(self.alpha - self.gamma) / 2.0);
        Matrix2::new(
            ep * hb_cos,
            -em * hb_sin,
            em.conj() * hb_sin,
            ep.conj() * hb_cos,
        )
    }
}

const UNITARY_TOL: f64 = 1e-9;

/// Recovers Euler angles from an SU(2) matrix, so that
/// [`EulerAngles::d_half`] reproduces it. When `beta` is 0 or pi only the
/// combination `alpha +- gamma` is determined; `gamma = 0` is chosen.
pub fn euler_from_unitary(u: &Matrix2<Complex64>) -> Result<EulerAngles> {
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    let residual = (det - Complex64::new(1.0, 0.0)).norm().max(
        (u.adjoint() * u - Matrix2::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max),
    );
    if residual > UNITARY_TOL {
        return Err(Error::NotSpecialUnitary(residual));
    }
    let c = u[(0, 0)].norm();
    let s = u[(1, 0)].norm();
    let beta = 2.0 * s.atan2(c);
    if s < 1e-15 {
        return Ok(EulerAngles {
            alpha: 2.0 * u[(1, 1)].arg(),
            beta: 0.0,
            gamma: 0.0,
        });
    }
    if c < 1e-15 {
        return Ok(EulerAngles {
            alpha: 2.0 * u[(1, 0)].arg(),
            beta: std::f64::consts::PI,
            gamma: 0.0,
        });
    }
    let half_sum = u[(1, 1)].arg();
    let half_diff = u[(1, 0)].arg();
    Ok(EulerAngles {
        alpha: half_sum + half_diff,
        beta,
        gamma: half_sum - half_diff,
    })
}

/// Special-unitary `U` with `rho = U Diag[lambda_+, lambda_-] U^dag`,
/// i.e. the columns are the eigenvectors for the descending eigenvalues.
pub fn diagonalizer(rho: &Matrix2<Complex64>) -> (Matrix2<Complex64>, f64, f64) {
    let r00 = rho[(0, 0)].re;
    let r01 = rho[(0, 1)];
    let lp = (0.5 + ((r00 - 0.5).powi(2) + r01.norm_sqr()).sqrt()).min(1.0);
    let norm = (r01.norm_sqr() + (lp - r00).powi(2)).sqrt();
    if norm < 1e-300 {
        // already diagonal with r00 = lambda_+
        return (Matrix2::identity(), lp, 1.0 - lp);
    }
    let a = r01 / norm;
    let b = Complex64::new((lp - r00) / norm, 0.0);
    let u = Matrix2::new(a, -b, b, a.conj());
    (u, lp, 1.0 - lp)
}

/// Angular-momentum operator Jy in the spin-j basis ordered m = j..-j,
/// where `two_j = 2j`.
pub fn jy_matrix(two_j: u32) -> DMatrix<Complex64> {
    let dim = (two_j + 1) as usize;
    let j = two_j as f64 / 2.0;
    let mut jy = DMatrix::zeros(dim, dim);
    for k in 1..dim {
        // column index k holds m = j - k; the raising operator connects it
        // to row k-1 (m + 1)
        let m = j - k as f64;
        let c = (j * (j + 1.0) - m * (m + 1.0)).sqrt();
        jy[(k - 1, k)] = Complex64::new(0.0, -0.5 * c);
        jy[(k, k - 1)] = Complex64::new(0.0, 0.5 * c);
    }
    jy
}

/// Spin-j Wigner rotation `exp(-i alpha Jz) exp(-i beta Jy) exp(-i gamma Jz)`
/// in the basis m = j..-j. The middle factor is evaluated by
/// eigendecomposition of the Hermitian Jy.
pub fn spin_rotation(two_j: u32, angles: &EulerAngles) -> DMatrix<Complex64> {
    let dim = (two_j + 1) as usize;
    let j = two_j as f64 / 2.0;
    let eig = SymmetricEigen::new(jy_matrix(two_j));
    let phases =
        DMatrix::from_diagonal(&eig.eigenvalues.map(|e| Complex64::from_polar(1.0, -angles.beta * e)));
    let mid = &eig.eigenvectors * phases * eig.eigenvectors.adjoint();
    let mut r = mid;
    for k in 0..dim {
        let m = j - k as f64;
        let left = Complex64::from_polar(1.0, -angles.alpha * m);
        for l in 0..dim {
            let mp = j - l as f64;
            let right = Complex64::from_polar(1.0, -angles.gamma * mp);
            r[(k, l)] *= left * right;
        }
    }
    r
}

/// One total-spin sector of the fragment state: the eigenvalues of the
/// (2j+1)-dimensional block and how many times the block repeats.
#[derive(Debug, Clone)]
pub struct SpinBlock {
    pub two_j: u32,
    pub multiplicity: f64,
    pub eigenvalues: Vec<f64>,
}

fn pow_pair(lp: f64, lm: f64, p: u32, q: u32) -> f64 {
    let a = if p == 0 {
        1.0
    } else if lp == 0.0 {
        0.0
    } else {
        (p as f64 * lp.ln()).exp()
    };
    let b = if q == 0 {
        1.0
    } else if lm == 0.0 {
        0.0
    } else {
        (q as f64 * lm.ln()).exp()
    };
    a * b
}

/// Rotated single-qubit state `V(t) rho V(t)^dag` with `V = exp(-i t sz/2)`:
/// the populations are untouched, the coherence picks up `exp(-i t)`.
fn rotated_env(env: &EnvQubit, t: f64) -> Matrix2<Complex64> {
    Matrix2::new(
        Complex64::new(env.r00(), 0.0),
        env.r01() * Complex64::from_polar(1.0, -t),
        env.r01().conj() * Complex64::from_polar(1.0, t),
        Complex64::new(env.r11(), 0.0),
    )
}

/// Spectrum of `rho_F(t)` for a fragment of `n_f` qubits, resolved by
/// total-spin sector.
pub fn fragment_blocks(
    sys: &SystemQubit,
    env: &EnvQubit,
    n_f: u32,
    t: f64,
) -> Result<Vec<SpinBlock>> {
    if n_f == 0 {
        return Ok(vec![SpinBlock {
            two_j: 0,
            multiplicity: 1.0,
            eigenvalues: vec![1.0],
        }]);
    }
    let (u_plus, lp, lm) = diagonalizer(&rotated_env(env, t));
    let (u_minus, _, _) = diagonalizer(&rotated_env(env, -t));
    let ang_plus = euler_from_unitary(&u_plus)?;
    let ang_minus = euler_from_unitary(&u_minus)?;
    let (s00, s11) = (sys.s00(), sys.s11());

    let sectors: Vec<u32> = (0..=n_f / 2).map(|i| n_f % 2 + 2 * i).collect();
    sectors
        .into_par_iter()
        .map(|two_j| {
            let dim = (two_j + 1) as usize;
            let mut m_j = DMatrix::<Complex64>::zeros(dim, dim);
            for k in 0..dim {
                // m = j - k; exponents (nF/2 + m, nF/2 - m)
                let p = (n_f + two_j) / 2 - k as u32;
                let q = n_f - p;
                m_j[(k, k)] = Complex64::new(pow_pair(lp, lm, p, q), 0.0);
            }
            let rp = spin_rotation(two_j, &ang_plus);
            let rm = spin_rotation(two_j, &ang_minus);
            let block = &rp * &m_j * rp.adjoint() * Complex64::new(s00, 0.0)
                + &rm * &m_j * rm.adjoint() * Complex64::new(s11, 0.0);
            let eig = SymmetricEigen::new(block);
            let mut eigenvalues = Vec::with_capacity(dim);
            for &e in eig.eigenvalues.iter() {
                if e < -EIGEN_CLAMP {
                    return Err(Error::NegativeEigenvalue(e));
                }
                eigenvalues.push(e.max(0.0));
            }
            Ok(SpinBlock {
                two_j,
                multiplicity: multiplicity(n_f, two_j),
                eigenvalues,
            })
        })
        .collect()
}

/// Full eigenvalue spectrum of `rho_F(t)` with multiplicities.
pub fn fragment_spectrum(
    sys: &SystemQubit,
    env: &EnvQubit,
    n_f: u32,
    t: f64,
) -> Result<Spectrum> {
    let blocks = fragment_blocks(sys, env, n_f, t)?;
    let mut raw = Vec::new();
    for b in blocks {
        for e in b.eigenvalues {
            raw.push((e, b.multiplicity));
        }
    }
    Spectrum::new(raw)
}

/// True when the closed form [`fragment_entropy_closed`] applies:
/// balanced environment qubits (`r00 = 1/2`) probed at `t = pi/2 (mod pi)`.
pub fn closed_form_applies(env: &EnvQubit, t: f64) -> bool {
    let x = (t - std::f64::consts::FRAC_PI_2) / std::f64::consts::PI;
    (env.r00() - 0.5).abs() <= 1e-12 && (x - x.round()).abs() * std::f64::consts::PI <= 1e-12
}

/// Entropy of `rho_F` in bits, in polynomial time. Dispatches to the
/// closed form where it applies, otherwise to the block diagonalization.
pub fn fragment_entropy(sys: &SystemQubit, env: &EnvQubit, n_f: u32, t: f64) -> Result<f64> {
    if closed_form_applies(env, t) {
        fragment_entropy_closed(sys, env, n_f)
    } else {
        Ok(fragment_spectrum(sys, env, n_f, t)?.entropy())
    }
}

fn ln_or_neg_inf(x: f64) -> f64 {
    if x > 0.0 {
        x.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// Closed-form fragment entropy at `r00 = 1/2`, `t = pi/2`: both branches of
/// `rho_F` are diagonal in the same product basis with eigenvalues
/// `lambda_F(n) = s00 l_-^n l_+^{F-n} + s11 l_-^{F-n} l_+^n`,
/// `l_+- = 1/2 +- |r01|`, each with binomial multiplicity. Everything is
/// accumulated in log space so it stays exact for thousands of qubits.
pub fn fragment_entropy_closed(sys: &SystemQubit, env: &EnvQubit, n_f: u32) -> Result<f64> {
    if (env.r00() - 0.5).abs() > 1e-12 {
        return Err(Error::NotBalanced(env.r00()));
    }
    if n_f == 0 {
        return Ok(0.0);
    }
    let lp = 0.5 + env.r01().norm();
    let lm = 0.5 - env.r01().norm();
    let (ln_lp, ln_lm) = (ln_or_neg_inf(lp), ln_or_neg_inf(lm));
    let (ln_s00, ln_s11) = (ln_or_neg_inf(sys.s00()), ln_or_neg_inf(sys.s11()));
    let f = n_f as f64;
    // 0 * ln(0) must contribute nothing, not NaN
    let mul = |c: f64, ln: f64| if c == 0.0 { 0.0 } else { c * ln };
    let mut h = 0.0;
    for n in 0..=n_f as u64 {
        let nn = n as f64;
        let t0 = ln_s00 + mul(nn, ln_lm) + mul(f - nn, ln_lp);
        let t1 = ln_s11 + mul(f - nn, ln_lm) + mul(nn, ln_lp);
        let m = t0.max(t1);
        if m == f64::NEG_INFINITY {
            continue;
        }
        // ln lambda_F(n) via log-sum-exp
        let ln_lam = m + ((t0 - m).exp() + (t1 - m).exp()).ln();
        h -= (ln_binomial(n_f as u64, n) + ln_lam).exp() * ln_lam;
    }
    Ok(h / std::f64::consts::LN_2)
}
