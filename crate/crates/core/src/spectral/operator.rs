use super::grid::{Grid, GridFunction};
use super::SpectralError;

/// Symmetric linear operator on `ℝ^len` with cheap spectral bounds.
pub trait SymmetricOperator {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn apply(&self, x: &[f64], y: &mut [f64]);

    fn diagonal(&self) -> Vec<f64>;

    /// `(lower, upper)` enclosing the spectrum.
    fn spectral_bounds(&self) -> (f64, f64);
}

/// `-c_n Δ_h + V` on a periodic grid, `c_n = 4(n-1)/(n-2)` with `n` the grid
/// dimension. `Δ_h` is the second-difference stencil.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteOperator {
    grid: Grid,
    potential: GridFunction,
}

impl DiscreteOperator {
    pub fn new(potential: GridFunction) -> Self {
        DiscreteOperator {
            grid: *potential.grid(),
            potential,
        }
    }

    pub fn constant(grid: Grid, value: f64) -> Self {
        Self::new(GridFunction::constant(grid, value))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn potential(&self) -> &GridFunction {
        &self.potential
    }

    pub fn coupling(&self) -> f64 {
        coupling(self.grid.dim())
    }

    pub fn exponent(&self) -> f64 {
        conformal_exponent(self.grid.dim())
    }

    pub fn with_potential(&self, potential: GridFunction) -> Result<Self, SpectralError> {
        if *potential.grid() != self.grid {
            return Err(SpectralError::GridMismatch);
        }
        Ok(Self::new(potential))
    }

    /// `Δ_h x` (nonpositive operator).
    pub fn laplacian(&self, x: &[f64], y: &mut [f64]) {
        let g = &self.grid;
        let inv_h2 = 1.0 / (g.spacing() * g.spacing());
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for axis in 0..g.dim() {
                acc += x[g.neighbor(i, axis, true)] + x[g.neighbor(i, axis, false)] - 2.0 * x[i];
            }
            *yi = acc * inv_h2;
        }
    }

    pub fn apply_fn(&self, u: &GridFunction) -> Result<GridFunction, SpectralError> {
        if *u.grid() != self.grid {
            return Err(SpectralError::GridMismatch);
        }
        let mut out = vec![0.0; self.grid.len()];
        self.apply(u.values(), &mut out);
        GridFunction::new(self.grid, out)
    }

    /// Stencil diagonal `2·d·c_n/h²`.
    fn stencil_diagonal(&self) -> f64 {
        2.0 * self.grid.dim() as f64 * self.coupling() / (self.grid.spacing() * self.grid.spacing())
    }
}

pub fn coupling(n: usize) -> f64 {
    4.0 * (n as f64 - 1.0) / (n as f64 - 2.0)
}

/// `α = (n+2)/(n-2)`.
pub fn conformal_exponent(n: usize) -> f64 {
    (n as f64 + 2.0) / (n as f64 - 2.0)
}

impl SymmetricOperator for DiscreteOperator {
    fn len(&self) -> usize {
        self.grid.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.laplacian(x, y);
        let c = self.coupling();
        for ((yi, xi), v) in y.iter_mut().zip(x).zip(self.potential.values()) {
            *yi = -c * *yi + v * xi;
        }
    }

    fn diagonal(&self) -> Vec<f64> {
        let s = self.stencil_diagonal();
        self.potential.values().iter().map(|v| s + v).collect()
    }

    fn spectral_bounds(&self) -> (f64, f64) {
        // -c Δ_h has spectrum in [0, 2·stencil diagonal].
        let (lo, hi) = (self.potential.min(), self.potential.max());
        (lo, hi + 2.0 * self.stencil_diagonal())
    }
}

/// `A + shift·I`.
pub struct Shifted<'a, A: SymmetricOperator + ?Sized> {
    pub inner: &'a A,
    pub shift: f64,
}

impl<A: SymmetricOperator + ?Sized> SymmetricOperator for Shifted<'_, A> {
    fn len(&self) -> usize {
        self.inner.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.inner.apply(x, y);
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi += self.shift * xi;
        }
    }

    fn diagonal(&self) -> Vec<f64> {
        self.inner.diagonal().into_iter().map(|d| d + self.shift).collect()
    }

    fn spectral_bounds(&self) -> (f64, f64) {
        let (lo, hi) = self.inner.spectral_bounds();
        (lo + self.shift, hi + self.shift)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[derive(Debug, Clone, Copy)]
pub struct SolveStats {
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Jacobi-preconditioned conjugate gradients for a positive definite
/// operator, starting from `x`.
pub fn conjugate_gradient<A: SymmetricOperator + ?Sized>(
    a: &A,
    b: &[f64],
    x: &mut [f64],
    rel_tol: f64,
    max_iter: usize,
) -> Result<SolveStats, SpectralError> {
    let n = a.len();
    let inv_diag: Vec<f64> = a.diagonal().into_iter().map(|d| 1.0 / d).collect();
    let mut r = vec![0.0; n];
    a.apply(x, &mut r);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    let b_norm = norm(b).max(f64::MIN_POSITIVE);
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    for it in 0..max_iter {
        let res = norm(&r) / b_norm;
        if res <= rel_tol {
            return Ok(SolveStats {
                iterations: it,
                relative_residual: res,
            });
        }
        a.apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            return Err(SpectralError::NotPositiveDefinite);
        }
        let step = rz / pap;
        for i in 0..n {
            x[i] += step * p[i];
            r[i] -= step * ap[i];
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let res = norm(&r) / b_norm;
    if res <= rel_tol * 10.0 {
        Ok(SolveStats {
            iterations: max_iter,
            relative_residual: res,
        })
    } else {
        Err(SpectralError::NoConvergence {
            iterations: max_iter,
            residual: res,
        })
    }
}
