//! Single-qubit density matrices and scalar entropy functions.
//!
//! All entropies are in bits (base-2 logarithms).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigenvalues in `[-EIGEN_CLAMP, 0]` are treated as exact zeros; anything
/// more negative is an error. Hermitian eigensolvers leave residues of this
/// size on true zeros.
pub const EIGEN_CLAMP: f64 = 1e-12;

const DOMAIN_TOL: f64 = 1e-12;

/// Binary entropy in bits, with `0 log 0 = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(-DOMAIN_TOL..=1.0 + DOMAIN_TOL).contains(&x) {
        return Err(Error::Domain(x));
    }
    Ok(h2(x.clamp(0.0, 1.0)))
}

/// Unchecked binary entropy kernel for callers with structurally valid input.
pub(crate) fn h2(x: f64) -> f64 {
    let mut s = 0.0;
    if x > 0.0 {
        s -= x * x.log2();
    }
    if x < 1.0 {
        s -= (1.0 - x) * (1.0 - x).log2();
    }
    s
}

/// Inverse of [`binary_entropy`] on the branch `x >= 1/2`.
pub fn binary_entropy_inverse_upper(h: f64) -> Result<f64> {
    if !(-DOMAIN_TOL..=1.0 + DOMAIN_TOL).contains(&h) {
        return Err(Error::Domain(h));
    }
    let h = h.clamp(0.0, 1.0);
    let (mut lo, mut hi) = (0.5, 1.0);
    // h2 is strictly decreasing on [1/2, 1]
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h2(mid) > h {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One eigenvalue with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub value: f64,
    /// Multiplicity. Kept as `f64` because total-spin multiplicities exceed
    /// every integer width at a few hundred qubits; values below 2^53 are
    /// exact integers.
    pub weight: f64,
}

/// Eigenvalue/multiplicity list of a density operator.
#[derive(Debug, Clone)]
pub struct Spectrum {
    entries: Vec<SpectrumEntry>,
}

impl Spectrum {
    /// Validates positivity (to within [`EIGEN_CLAMP`]) and unit trace
    /// (to within 1e-9). Tiny negative eigenvalues are clamped to zero.
    pub fn new(raw: Vec<(f64, f64)>) -> Result<Self> {
        let mut entries = Vec::with_capacity(raw.len());
        for (value, weight) in raw {
            if !(weight > 0.0) {
                return Err(Error::InvalidState(format!(
                    "nonpositive multiplicity {weight}"
                )));
            }
            if value < -EIGEN_CLAMP {
                return Err(Error::NegativeEigenvalue(value));
            }
            entries.push(SpectrumEntry {
                value: value.max(0.0),
                weight,
            });
        }
        let s = Self { entries };
        let trace = s.trace();
        if (trace - 1.0).abs() > 1e-9 {
            return Err(Error::TraceDeviation { trace, tol: 1e-9 });
        }
        Ok(s)
    }

    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.iter().map(|e| e.weight * e.value).sum()
    }

    /// Von Neumann entropy in bits; zero eigenvalues contribute nothing.
    pub fn entropy(&self) -> f64 {
        -self
            .entries
            .iter()
            .filter(|e| e.value > 0.0)
            .map(|e| e.weight * e.value * e.value.log2())
            .sum::<f64>()
    }

    /// Eigenvalues expanded by multiplicity, descending. Only meaningful
    /// when every weight is a small exact integer (oracle comparisons).
    pub fn eigenvalues_desc(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for e in &self.entries {
            let w = e.weight.round();
            debug_assert!((e.weight - w).abs() < 1e-6 && w < 9.0e15);
            for _ in 0..w as u64 {
                out.push(e.value);
            }
        }
        out.sort_by(|a, b| b.partial_cmp(a).unwrap());
        out
    }
}

/// Entropy of a spectrum, in bits.
pub fn spectrum_entropy(s: &Spectrum) -> f64 {
    s.entropy()
}

/// 2x2 density matrix of the system qubit in the pointer basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemQubit {
    s00: f64,
    s01: Complex64,
}

impl SystemQubit {
    pub fn new(s00: f64, s01: Complex64) -> Result<Self> {
        if !(-DOMAIN_TOL..=1.0 + DOMAIN_TOL).contains(&s00) {
            return Err(Error::Domain(s00));
        }
        let s00 = s00.clamp(0.0, 1.0);
        if s01.norm_sqr() > s00 * (1.0 - s00) + DOMAIN_TOL {
            return Err(Error::InvalidState(format!(
                "|s01|^2 = {} exceeds s00 s11 = {}",
                s01.norm_sqr(),
                s00 * (1.0 - s00)
            )));
        }
        Ok(Self { s00, s01 })
    }

    /// Pure state with populations `s00`, `1 - s00` and real coherence.
    pub fn pure(s00: f64) -> Result<Self> {
        let s = s00.clamp(0.0, 1.0);
        Self::new(s00, Complex64::new((s * (1.0 - s)).sqrt(), 0.0))
    }

    pub fn s00(&self) -> f64 {
        self.s00
    }

    pub fn s11(&self) -> f64 {
        1.0 - self.s00
    }

    pub fn s01(&self) -> Complex64 {
        self.s01
    }

    pub fn is_pure(&self) -> bool {
        (self.s01.norm_sqr() - self.s00 * self.s11()).abs() <= DOMAIN_TOL
    }

    /// Entropy of the initial state (before any decoherence).
    pub fn initial_entropy(&self) -> f64 {
        let d = self.s11() - self.s00;
        let upper = 0.5 * (1.0 + (d * d + 4.0 * self.s01.norm_sqr()).sqrt());
        h2(upper.min(1.0))
    }

    pub fn matrix(&self) -> nalgebra::Matrix2<Complex64> {
        nalgebra::Matrix2::new(
            Complex64::new(self.s00, 0.0),
            self.s01,
            self.s01.conj(),
            Complex64::new(self.s11(), 0.0),
        )
    }
}

/// 2x2 density matrix of one environment qubit in the interaction basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvQubit {
    r00: f64,
    r01: Complex64,
}

impl EnvQubit {
    pub fn new(r00: f64, r01: Complex64) -> Result<Self> {
        if !(-DOMAIN_TOL..=1.0 + DOMAIN_TOL).contains(&r00) {
            return Err(Error::Domain(r00));
        }
        let r00 = r00.clamp(0.0, 1.0);
        if r01.norm_sqr() > r00 * (1.0 - r00) + DOMAIN_TOL {
            return Err(Error::InvalidState(format!(
                "|r01|^2 = {} exceeds r00 r11 = {}",
                r01.norm_sqr(),
                r00 * (1.0 - r00)
            )));
        }
        Ok(Self { r00, r01 })
    }

    /// Builds `r00 = (1 + sigma)/2` with off-diagonal `zeta sqrt(r00 r11)`.
    /// `zeta = 1` is pure; smaller `zeta` adds haziness at fixed alignment.
    /// The off-diagonal is real and nonnegative; the dynamics depend only on
    /// its modulus.
    pub fn from_alignment(sigma: f64, zeta: f64) -> Result<Self> {
        if !(-1.0 - DOMAIN_TOL..=1.0 + DOMAIN_TOL).contains(&sigma) {
            return Err(Error::Domain(sigma));
        }
        if !(-DOMAIN_TOL..=1.0 + DOMAIN_TOL).contains(&zeta) {
            return Err(Error::Domain(zeta));
        }
        let r00 = (1.0 + sigma.clamp(-1.0, 1.0)) / 2.0;
        let r01 = zeta.clamp(0.0, 1.0) * (r00 * (1.0 - r00)).sqrt();
        Self::new(r00, Complex64::new(r01, 0.0))
    }

    /// Solves for the `zeta` that yields haziness `h` at fixed alignment.
    /// Haziness is strictly decreasing in `zeta`, so bisection suffices;
    /// `h` must not exceed the capacity at this alignment.
    pub fn with_target_haziness(sigma: f64, h: f64) -> Result<Self> {
        let cap = Self::from_alignment(sigma, 0.0)?.haziness();
        if !(-DOMAIN_TOL..=cap + DOMAIN_TOL).contains(&h) {
            return Err(Error::Invalid(format!(
                "target haziness {h} outside [0, {cap}] reachable at sigma = {sigma}"
            )));
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if Self::from_alignment(sigma, mid)?.haziness() > h {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Self::from_alignment(sigma, 0.5 * (lo + hi))
    }

    pub fn r00(&self) -> f64 {
        self.r00
    }

    pub fn r11(&self) -> f64 {
        1.0 - self.r00
    }

    pub fn r01(&self) -> Complex64 {
        self.r01
    }

    /// Misalignment `sigma = r00 - r11`.
    pub fn sigma(&self) -> f64 {
        2.0 * self.r00 - 1.0
    }

    pub fn lambda_plus(&self) -> f64 {
        (0.5 + ((self.r00 - 0.5).powi(2) + self.r01.norm_sqr()).sqrt()).min(1.0)
    }

    pub fn lambda_minus(&self) -> f64 {
        1.0 - self.lambda_plus()
    }

    /// Preexisting entropy of the qubit, in bits.
    pub fn haziness(&self) -> f64 {
        h2(self.lambda_plus())
    }

    /// Maximum entropy the qubit can reach under pure decoherence, in bits.
    pub fn misalignment_capacity(&self) -> f64 {
        h2(self.r00)
    }

    pub fn is_pure(&self) -> bool {
        (self.r01.norm_sqr() - self.r00 * self.r11()).abs() <= DOMAIN_TOL
    }

    pub fn matrix(&self) -> nalgebra::Matrix2<Complex64> {
        nalgebra::Matrix2::new(
            Complex64::new(self.r00, 0.0),
            self.r01,
            self.r01.conj(),
            Complex64::new(self.r11(), 0.0),
        )
    }
}
