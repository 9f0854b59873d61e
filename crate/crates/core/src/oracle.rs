//! Brute-force dense simulator for small environments. Ground truth for
//! every fast path: it stores the full 2^(nE+1)-dimensional state, evolves
//! it by the (diagonal) interaction phases, and takes partial traces and
//! entropies directly.

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};
use num_complex::Complex64;

use crate::decoherence::ModelParams;
use crate::error::{Error, Result};
use crate::info::{discord, mutual_information};
use crate::spectral::fragment_spectrum;
use crate::states::{EnvQubit, SystemQubit};

/// Largest environment the dense simulator accepts (the full state has
/// 4^(nE+1) complex entries).
pub const MAX_ENV_QUBITS: u32 = 12;

/// Dense density matrix over qubit 0 (the system, most significant bit)
/// and qubits 1..=nE (the environment).
#[derive(Debug, Clone)]
pub struct DenseState {
    pub matrix: DMatrix<Complex64>,
    pub n_qubits: u32,
}

impl DenseState {
    fn from_matrix(matrix: DMatrix<Complex64>, n_qubits: u32) -> Self {
        debug_assert_eq!(matrix.nrows(), 1usize << n_qubits);
        Self { matrix, n_qubits }
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.diagonal().sum()
    }

    /// Eigenvalues in descending order, tiny negatives clamped to zero.
    pub fn spectrum_desc(&self) -> Result<Vec<f64>> {
        let eig = SymmetricEigen::new(self.matrix.clone());
        let mut vals = Vec::with_capacity(eig.eigenvalues.len());
        for &e in eig.eigenvalues.iter() {
            if e < -1e-10 {
                return Err(Error::NegativeEigenvalue(e));
            }
            vals.push(e.max(0.0));
        }
        vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(vals)
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> Result<f64> {
        Ok(-self
            .spectrum_desc()?
            .iter()
            .filter(|&&e| e > 0.0)
            .map(|e| e * e.log2())
            .sum::<f64>())
    }
}

fn kron_power(base: &Matrix2<Complex64>, n: u32, seed: DMatrix<Complex64>) -> DMatrix<Complex64> {
    let base = DMatrix::from_iterator(2, 2, base.iter().cloned());
    let mut acc = seed;
    for _ in 0..n {
        acc = acc.kronecker(&base);
    }
    acc
}

/// Joint state `U(t) (rho_S x rho_r^{x nE}) U(t)^dag`. The Hamiltonian is
/// diagonal in the computational basis, so evolution only multiplies each
/// entry by a phase: basis state `a` picks up
/// `exp(-i t z_S(a) (n0(a) - n1(a)) / 2)`.
pub fn evolve(sys: &SystemQubit, env: &EnvQubit, t: f64, n_env: u32) -> Result<DenseState> {
    if n_env > MAX_ENV_QUBITS {
        return Err(Error::OracleCap(n_env, MAX_ENV_QUBITS));
    }
    let sys_m = sys.matrix();
    let init = DMatrix::from_iterator(2, 2, sys_m.iter().cloned());
    let mut rho = kron_power(&env.matrix(), n_env, init);

    let dim = 1usize << (n_env + 1);
    let sys_bit = 1usize << n_env; // qubit 0 is the most significant bit
    let phase = |a: usize| -> Complex64 {
        let z_s = if a & sys_bit == 0 { 1.0 } else { -1.0 };
        let ones = (a & (sys_bit - 1)).count_ones() as f64;
        let weight = n_env as f64 - 2.0 * ones; // n0 - n1 over env bits
        Complex64::from_polar(1.0, -t * z_s * weight / 2.0)
    };
    for a in 0..dim {
        let pa = phase(a);
        for b in 0..dim {
            rho[(a, b)] *= pa * phase(b).conj();
        }
    }
    Ok(DenseState::from_matrix(rho, n_env + 1))
}

/// Partial trace keeping the listed qubits (0 = system), in their original
/// order.
pub fn reduce(state: &DenseState, keep: &[u32]) -> Result<DenseState> {
    let n = state.n_qubits;
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.iter().any(|&q| q >= n) {
        return Err(Error::Invalid(format!(
            "kept qubit out of range (n = {n})"
        )));
    }
    let traced: Vec<u32> = (0..n).filter(|q| !keep.contains(q)).collect();
    // bit position of qubit q in the full index (qubit 0 most significant)
    let pos = |q: u32| n - 1 - q;
    let embed = |kept_idx: usize, traced_idx: usize| -> usize {
        let mut full = 0usize;
        for (i, &q) in keep.iter().enumerate() {
            let bit = (kept_idx >> (keep.len() - 1 - i)) & 1;
            full |= bit << pos(q);
        }
        for (i, &q) in traced.iter().enumerate() {
            let bit = (traced_idx >> (traced.len() - 1 - i)) & 1;
            full |= bit << pos(q);
        }
        full
    };
    let dim_k = 1usize << keep.len();
    let dim_t = 1usize << traced.len();
    let mut out = DMatrix::zeros(dim_k, dim_k);
    for i in 0..dim_k {
        for j in 0..dim_k {
            let mut s = Complex64::new(0.0, 0.0);
            for e in 0..dim_t {
                s += state.matrix[(embed(i, e), embed(j, e))];
            }
            out[(i, j)] = s;
        }
    }
    Ok(DenseState::from_matrix(out, keep.len() as u32))
}

/// Fragment entropy conditioned on a projective pointer measurement of the
/// system: `sum_j p_j H(rho_F | S = j)`.
pub fn conditional_fragment_entropy(state_sf: &DenseState) -> Result<f64> {
    let dim = state_sf.matrix.nrows();
    let half = dim / 2;
    let mut total = 0.0;
    for j in 0..2 {
        let block = state_sf
            .matrix
            .view((j * half, j * half), (half, half))
            .into_owned();
        let p = block.diagonal().sum().re;
        if p <= 0.0 {
            continue;
        }
        let branch = DenseState::from_matrix(block / Complex64::new(p, 0.0), state_sf.n_qubits - 1);
        total += p * branch.entropy()?;
    }
    Ok(total)
}

/// Residuals (absolute deviations) of the analytic identities against the
/// dense simulation. All should vanish to solver precision.
#[derive(Debug, Clone, Copy)]
pub struct IdentityReport {
    /// `H_SF(t) - [H_{S decohered by E/F}(t) + nF h]`
    pub joint_entropy: f64,
    /// raw-entropy mutual information vs the fast path
    pub mutual_info: f64,
    /// `H_S - H_SF + H_{F|pointer}` vs the fast-path discord
    pub discord: f64,
    /// `H_{F|pointer} - nF h`
    pub conditional_entropy: f64,
    /// max eigenvalue deviation of rho_F, dense vs block-diagonalized
    pub fragment_spectrum: f64,
    /// dense fragment entropy vs the fast path
    pub fragment_entropy: f64,
}

impl IdentityReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.joint_entropy,
            self.mutual_info,
            self.discord,
            self.conditional_entropy,
            self.fragment_spectrum,
            self.fragment_entropy,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn pass(&self, tol: f64) -> bool {
        self.max_residual() <= tol
    }
}

/// Runs the dense simulation and compares every analytic identity and fast
/// path on one parameter set.
pub fn check_identities(
    sys: &SystemQubit,
    env: &EnvQubit,
    t: f64,
    n_env: u32,
    n_f: u32,
) -> Result<IdentityReport> {
    if n_f >= n_env {
        return Err(Error::Invalid(format!(
            "need a proper fragment, got nF = {n_f} of nE = {n_env}"
        )));
    }
    let full = evolve(sys, env, t, n_env)?;
    let frag_qubits: Vec<u32> = (1..=n_f).collect();
    let mut sf_qubits = vec![0u32];
    sf_qubits.extend(&frag_qubits);

    let rho_s = reduce(&full, &[0])?;
    let rho_f = reduce(&full, &frag_qubits)?;
    let rho_sf = reduce(&full, &sf_qubits)?;

    let h_s = rho_s.entropy()?;
    let h_f = rho_f.entropy()?;
    let h_sf = rho_sf.entropy()?;

    let h = env.haziness();
    // system decohered by the remainder alone, also dense
    let h_s_rem = reduce(&evolve(sys, env, t, n_env - n_f)?, &[0])?.entropy()?;
    let joint_entropy = (h_sf - h_s_rem - n_f as f64 * h).abs();

    let p = ModelParams::new(*sys, *env, n_env, t)?;
    let fast = mutual_information(&p, n_f)?;
    let mutual_info = (h_s + h_f - h_sf - fast.mutual_info).abs();

    let h_cond = conditional_fragment_entropy(&rho_sf)?;
    let conditional_entropy = (h_cond - n_f as f64 * h).abs();
    let discord_res = (h_s - h_sf + h_cond - discord(&p, n_f)?).abs();

    let dense_spec = rho_f.spectrum_desc()?;
    let fast_spec = fragment_spectrum(sys, env, n_f, t)?.eigenvalues_desc();
    let fragment_spectrum = dense_spec
        .iter()
        .zip(&fast_spec)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        .max((dense_spec.len() as f64 - fast_spec.len() as f64).abs());

    let fast_h_f = crate::spectral::fragment_entropy(sys, env, n_f, t)?;
    let fragment_entropy = (h_f - fast_h_f).abs();

    Ok(IdentityReport {
        joint_entropy,
        mutual_info,
        discord: discord_res,
        conditional_entropy,
        fragment_spectrum,
        fragment_entropy,
    })
}
