//! Cochains on the periodic cubical grid: 1-forms on edges, 2-forms on faces,
//! the coboundary `d` and its adjoint.
//!
//! Edge `(p, i)` joins `p` to `p + e_i`; face `(p, i<j)` spans `p`,
//! `p + e_i`, `p + e_j`. Inner products carry the cell volume `h^dim`.

use serde::{Deserialize, Serialize};

use super::grid::Grid;
use super::operator::dot;
use super::SpectralError;

/// Direction pairs `(i, j)`, `i < j`, in lexicographic order.
pub fn face_directions(dim: usize) -> Vec<(usize, usize)> {
    (0..dim).flat_map(|i| (i + 1..dim).map(move |j| (i, j))).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeForm {
    grid: Grid,
    // values[axis * len + point]
    values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceForm {
    grid: Grid,
    // values[pair * len + point], pairs as in `face_directions`
    values: Vec<f64>,
}

impl EdgeForm {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self, SpectralError> {
        if values.len() != grid.dim() * grid.len() {
            return Err(SpectralError::InvalidGrid("edge form has the wrong length".into()));
        }
        Ok(EdgeForm { grid, values })
    }

    pub fn zero(grid: Grid) -> Self {
        EdgeForm {
            grid,
            values: vec![0.0; grid.dim() * grid.len()],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn component(&self, axis: usize) -> &[f64] {
        let n = self.grid.len();
        &self.values[axis * n..(axis + 1) * n]
    }

    pub fn inner(&self, other: &EdgeForm) -> f64 {
        dot(&self.values, &other.values) * self.grid.cell_volume()
    }
}

impl FaceForm {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self, SpectralError> {
        if values.len() != face_directions(grid.dim()).len() * grid.len() {
            return Err(SpectralError::InvalidGrid("face form has the wrong length".into()));
        }
        Ok(FaceForm { grid, values })
    }

    /// Constant coefficient `coeffs[k]` on every face of direction pair `k`.
    pub fn constant(grid: Grid, coeffs: &[f64]) -> Result<Self, SpectralError> {
        let pairs = face_directions(grid.dim()).len();
        if coeffs.len() != pairs {
            return Err(SpectralError::InvalidGrid(format!(
                "{} coefficients for {} face directions",
                coeffs.len(),
                pairs
            )));
        }
        let n = grid.len();
        let values = coeffs.iter().flat_map(|&c| std::iter::repeat_n(c, n)).collect();
        Ok(FaceForm { grid, values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn component(&self, pair: usize) -> &[f64] {
        let n = self.grid.len();
        &self.values[pair * n..(pair + 1) * n]
    }

    pub fn is_constant(&self) -> bool {
        let n = self.grid.len();
        self.values.chunks(n).all(|c| c.iter().all(|v| *v == c[0]))
    }

    pub fn add(&self, other: &FaceForm) -> Result<FaceForm, SpectralError> {
        if self.grid != other.grid {
            return Err(SpectralError::GridMismatch);
        }
        Ok(FaceForm {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn inner(&self, other: &FaceForm) -> f64 {
        dot(&self.values, &other.values) * self.grid.cell_volume()
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }
}

/// `(da)_{ij}(p) = (a_j(p+e_i) - a_j(p) - a_i(p+e_j) + a_i(p)) / h`.
pub fn exterior_derivative(a: &EdgeForm) -> FaceForm {
    let g = a.grid;
    let n = g.len();
    let inv_h = 1.0 / g.spacing();
    let pairs = face_directions(g.dim());
    let mut values = vec![0.0; pairs.len() * n];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let (ai, aj) = (a.component(i), a.component(j));
        for p in 0..n {
            let d = aj[g.neighbor(p, i, true)] - aj[p] - ai[g.neighbor(p, j, true)] + ai[p];
            values[k * n + p] = d * inv_h;
        }
    }
    FaceForm { grid: g, values }
}

/// Adjoint of [`exterior_derivative`] for the volume-weighted inner products.
pub fn codifferential(w: &FaceForm) -> EdgeForm {
    let g = w.grid;
    let n = g.len();
    let inv_h = 1.0 / g.spacing();
    let mut out = vec![0.0; g.dim() * n];
    for (k, &(i, j)) in face_directions(g.dim()).iter().enumerate() {
        let c = w.component(k);
        for q in 0..n {
            // a_j enters face (q - e_i) with + and face q with -.
            out[j * n + q] += (c[g.neighbor(q, i, false)] - c[q]) * inv_h;
            // a_i enters face (q - e_j) with - and face q with +.
            out[i * n + q] += (c[q] - c[g.neighbor(q, j, false)]) * inv_h;
        }
    }
    EdgeForm { grid: g, values: out }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PythagorasReport {
    /// `‖Ω0 + da‖²`
    pub total: f64,
    /// `‖Ω0‖² + ‖da‖²`
    pub split: f64,
    /// `⟨Ω0, da⟩`
    pub cross: f64,
}

impl PythagorasReport {
    pub fn relative_gap(&self) -> f64 {
        (self.total - self.split).abs() / self.split.abs().max(f64::MIN_POSITIVE)
    }
}

/// Compares `‖Ω0 + da‖²` with `‖Ω0‖² + ‖da‖²` for a constant-coefficient
/// (hence coclosed) `Ω0`.
pub fn harmonic_pythagoras(omega0: &FaceForm, a: &EdgeForm) -> Result<PythagorasReport, SpectralError> {
    if omega0.grid != a.grid {
        return Err(SpectralError::GridMismatch);
    }
    if !omega0.is_constant() {
        return Err(SpectralError::NotConstant);
    }
    let da = exterior_derivative(a);
    let total = omega0.add(&da)?.norm_sq();
    Ok(PythagorasReport {
        total,
        split: omega0.norm_sq() + da.norm_sq(),
        cross: omega0.inner(&da),
    })
}
