//! Clifford multiplication by 2-forms on spinors.
//!
//! Conventions: `γ_i² = -1`, `γ_i γ_j + γ_j γ_i = -2δ_ij`, each `γ_i`
//! skew-hermitian and unitary, and `c(ω) = Σ_{i<j} ω_ij γ_i γ_j`. With these,
//! `c(ω)` is skew-hermitian, `i·c(ω)` is hermitian with spectrum symmetric
//! about zero, and the twisted curvature `R + 2i·c(ω)` has smallest
//! eigenvalue `R - 2|ω|_op`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type CMatrix = DMatrix<Complex64>;

pub const MAX_DIM: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliffError {
    #[error("Clifford dimension must be in 1..={MAX_DIM} (got {0})")]
    DimensionOutOfRange(usize),
    #[error("2-form has dimension {form} but the representation has dimension {rep}")]
    SizeMismatch { rep: usize, form: usize },
    #[error("index pair ({0}, {1}) is not i < j < n")]
    BadPair(usize, usize),
}

/// Complex spinor representation of the Clifford algebra of `ℝ^n`.
#[derive(Debug, Clone)]
pub struct CliffordRep {
    n: usize,
    gammas: Vec<CMatrix>,
}

fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

fn pauli() -> [CMatrix; 3] {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        CMatrix::from_row_slice(2, 2, &[o, l, l, o]),
        CMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
        CMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
    ]
}

/// Builds `γ_1, …, γ_n` from tensor products of Pauli matrices (Jordan–Wigner
/// pattern), multiplied by `i` to make them square to `-1`.
pub fn make_rep(n: usize) -> Result<CliffordRep, CliffError> {
    if n == 0 || n > MAX_DIM {
        return Err(CliffError::DimensionOutOfRange(n));
    }
    let m = n / 2;
    let [sx, sy, sz] = pauli();
    let id2 = CMatrix::identity(2, 2);
    let i = Complex64::new(0.0, 1.0);

    // Hermitian generators e_k with e_k² = 1.
    let chain = |k: usize, middle: &CMatrix| {
        let mut acc = CMatrix::identity(1, 1);
        for _ in 0..k {
            acc = kron(&acc, &sz);
        }
        acc = kron(&acc, middle);
        for _ in k + 1..m {
            acc = kron(&acc, &id2);
        }
        acc
    };
    let mut herm = Vec::with_capacity(n);
    for k in 0..m {
        herm.push(chain(k, &sx));
        herm.push(chain(k, &sy));
    }
    if n % 2 == 1 {
        let mut acc = CMatrix::identity(1, 1);
        for _ in 0..m {
            acc = kron(&acc, &sz);
        }
        herm.push(acc);
    }
    let gammas = herm.into_iter().map(|e| e * i).collect();
    Ok(CliffordRep { n, gammas })
}

impl CliffordRep {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn spinor_dim(&self) -> usize {
        1 << (self.n / 2)
    }

    pub fn gammas(&self) -> &[CMatrix] {
        &self.gammas
    }

    /// Largest entrywise deviation from `γ_iγ_j + γ_jγ_i = -2δ_ij`.
    pub fn anticommutator_defect(&self) -> f64 {
        let dim = self.spinor_dim();
        let mut worst = 0.0f64;
        for (a, ga) in self.gammas.iter().enumerate() {
            for (b, gb) in self.gammas.iter().enumerate() {
                let mut ac = ga * gb + gb * ga;
                if a == b {
                    ac += CMatrix::identity(dim, dim) * Complex64::new(2.0, 0.0);
                }
                worst = worst.max(ac.iter().map(|z| z.norm()).fold(0.0, f64::max));
            }
        }
        worst
    }
}

/// Real 2-form on `ℝ^n`, stored by its strictly upper triangular
/// coefficients `ω_ij`, `i < j`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoForm {
    n: usize,
    upper: Vec<f64>,
}

fn pair_slot(n: usize, i: usize, j: usize) -> usize {
    // rows 0..i contribute (n-1) + (n-2) + ... + (n-i)
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl TwoForm {
    pub fn zero(n: usize) -> Self {
        TwoForm {
            n,
            upper: vec![0.0; n * n.saturating_sub(1) / 2],
        }
    }

    /// `Σ v · e_i ∧ e_j` over the given (0-based) triples.
    pub fn from_entries(n: usize, entries: &[(usize, usize, f64)]) -> Result<Self, CliffError> {
        let mut w = Self::zero(n);
        for &(i, j, v) in entries {
            w.add_entry(i, j, v)?;
        }
        Ok(w)
    }

    pub fn add_entry(&mut self, i: usize, j: usize, v: f64) -> Result<(), CliffError> {
        let (a, b, s) = match i.cmp(&j) {
            std::cmp::Ordering::Less => (i, j, 1.0),
            std::cmp::Ordering::Greater => (j, i, -1.0),
            std::cmp::Ordering::Equal => return Err(CliffError::BadPair(i, j)),
        };
        if b >= self.n {
            return Err(CliffError::BadPair(i, j));
        }
        self.upper[pair_slot(self.n, a, b)] += s * v;
        Ok(())
    }

    /// `e_i ∧ e_j`.
    pub fn elementary(n: usize, i: usize, j: usize) -> Result<Self, CliffError> {
        Self::from_entries(n, &[(i, j, 1.0)])
    }

    /// Standard Kähler form `e_1∧e_2 + e_3∧e_4 + …` on the first `2⌊n/2⌋`
    /// coordinates.
    pub fn kahler(n: usize) -> Self {
        let mut w = Self::zero(n);
        for k in 0..n / 2 {
            w.upper[pair_slot(n, 2 * k, 2 * k + 1)] = 1.0;
        }
        w
    }

    /// Coefficients drawn uniformly from `[-1, 1)`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut w = Self::zero(n);
        for c in &mut w.upper {
            *c = rng.random_range(-1.0..1.0);
        }
        w
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `ω_ij` with antisymmetry (`ω_ii = 0`).
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.upper[pair_slot(self.n, i, j)],
            std::cmp::Ordering::Greater => -self.upper[pair_slot(self.n, j, i)],
            std::cmp::Ordering::Equal => 0.0,
        }
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn scaled(&self, s: f64) -> Self {
        TwoForm {
            n: self.n,
            upper: self.upper.iter().map(|c| c * s).collect(),
        }
    }

    /// Full antisymmetric `n×n` coefficient matrix.
    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }
}

/// `R·I + 2i·c(ω)`.
#[derive(Debug, Clone)]
pub struct TwistedCurvatureOperator {
    pub scalar: f64,
    pub matrix: CMatrix,
}

impl TwistedCurvatureOperator {
    pub fn new(scalar: f64, rep: &CliffordRep, omega: &TwoForm) -> Result<Self, CliffError> {
        let c = clifford_action(rep, omega)?;
        let dim = rep.spinor_dim();
        let matrix = CMatrix::identity(dim, dim) * Complex64::new(scalar, 0.0) + c * Complex64::new(0.0, 2.0);
        Ok(TwistedCurvatureOperator { scalar, matrix })
    }

    /// Largest entrywise deviation from hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Ascending eigenvalues.
    pub fn spectrum(&self) -> Vec<f64> {
        hermitian_eigenvalues(self.matrix.clone())
    }
}

fn hermitian_eigenvalues(m: CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

fn check_size(rep: &CliffordRep, omega: &TwoForm) -> Result<(), CliffError> {
    if rep.n != omega.n {
        return Err(CliffError::SizeMismatch {
            rep: rep.n,
            form: omega.n,
        });
    }
    Ok(())
}

/// `c(ω) = Σ_{i<j} ω_ij γ_i γ_j`.
pub fn clifford_action(rep: &CliffordRep, omega: &TwoForm) -> Result<CMatrix, CliffError> {
    check_size(rep, omega)?;
    let dim = rep.spinor_dim();
    let mut out = CMatrix::zeros(dim, dim);
    for i in 0..rep.n {
        for j in i + 1..rep.n {
            let w = omega.get(i, j);
            if w != 0.0 {
                out += (&rep.gammas[i] * &rep.gammas[j]) * Complex64::new(w, 0.0);
            }
        }
    }
    Ok(out)
}

/// Ascending eigenvalues of the hermitian matrix `i·c(ω)`.
pub fn action_spectrum(rep: &CliffordRep, omega: &TwoForm) -> Result<Vec<f64>, CliffError> {
    let c = clifford_action(rep, omega)?;
    Ok(hermitian_eigenvalues(c * Complex64::new(0.0, 1.0)))
}

/// `|ω|_op`: the largest `|λ|` over the spectrum of `i·c(ω)`, which is the
/// maximum of `|c(ω)ψ|` over unit spinors.
pub fn op_norm(rep: &CliffordRep, omega: &TwoForm) -> Result<f64, CliffError> {
    let ev = action_spectrum(rep, omega)?;
    Ok(ev.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

/// `|ω|_2 = sqrt(Σ_{i<j} ω_ij²)`, so `|e_i∧e_j|_2 = 1`.
pub fn two_norm(omega: &TwoForm) -> f64 {
    omega.upper.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// `tr(c(ω)* c(ω)) / N` with `N` the spinor dimension. Equals `|ω|_2²`
/// exactly under the conventions of this module.
pub fn normalized_trace_norm_sq(rep: &CliffordRep, omega: &TwoForm) -> Result<f64, CliffError> {
    let c = clifford_action(rep, omega)?;
    let tr = (c.adjoint() * &c).trace();
    Ok(tr.re / rep.spinor_dim() as f64)
}

/// Generalized scalar curvature `R - 2|ω|_op`.
pub fn gen_scalar(scalar: f64, rep: &CliffordRep, omega: &TwoForm) -> Result<f64, CliffError> {
    Ok(scalar - 2.0 * op_norm(rep, omega)?)
}

/// Smallest eigenvalue of `R + 2i·c(ω)`.
pub fn twisted_min_eig(scalar: f64, rep: &CliffordRep, omega: &TwoForm) -> Result<f64, CliffError> {
    let op = TwistedCurvatureOperator::new(scalar, rep, omega)?;
    Ok(op.spectrum()[0])
}

/// Values closer to zero than this (relative to `max(1, |R|)`) count as
/// zero, so the boundary case `R = 2|ω|_op` is not positive.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// `(R^tw positive definite, R^gen > 0)`, both with the boundary excluded.
pub fn positivity_equivalent(scalar: f64, rep: &CliffordRep, omega: &TwoForm) -> Result<(bool, bool), CliffError> {
    let tol = POSITIVITY_TOL * scalar.abs().max(1.0);
    let tw = twisted_min_eig(scalar, rep, omega)? > tol;
    let gen = gen_scalar(scalar, rep, omega)? > tol;
    Ok((tw, gen))
}

/// Einstein–Kähler model in dimension `n = 2m`: Ricci form `λJ` and scalar
/// curvature `R = nλ`.
pub fn kahler_einstein_model(n: usize, lambda: f64) -> (f64, TwoForm) {
    (n as f64 * lambda, TwoForm::kahler(n).scaled(lambda))
}

/// `CP²` with the Fubini–Study metric normalized to `R = 6`, and the
/// anticanonical connection with curvature `3ω`, where `ω = J/2` is the
/// Kähler form scaled so that `|ω|_op = 1`.
pub fn fubini_study_cp2() -> (f64, TwoForm) {
    (6.0, TwoForm::kahler(4).scaled(0.5).scaled(3.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureRecord {
    pub n: usize,
    pub omega: Vec<f64>,
    pub scalar: f64,
    pub op_norm: f64,
    pub two_norm: f64,
    pub min_eig: f64,
    pub gen_scalar: f64,
    pub tw_positive: bool,
}

/// Everything the curvature identities need about one `(R, ω)` pair.
pub fn curvature_record(scalar: f64, rep: &CliffordRep, omega: &TwoForm) -> Result<CurvatureRecord, CliffError> {
    let op = op_norm(rep, omega)?;
    let (tw_positive, _) = positivity_equivalent(scalar, rep, omega)?;
    Ok(CurvatureRecord {
        n: omega.n,
        omega: omega.upper.clone(),
        scalar,
        op_norm: op,
        two_norm: two_norm(omega),
        min_eig: twisted_min_eig(scalar, rep, omega)?,
        gen_scalar: scalar - 2.0 * op,
        tw_positive,
    })
}
