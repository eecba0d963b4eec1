use serde::{Deserialize, Serialize};

use super::SpectralError;

pub const MAX_POINTS: usize = 100_000;

/// Periodic cubical grid on the flat torus `(ℝ / (points·spacing) ℤ)^dim`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    points: usize,
    spacing: f64,
}

impl Grid {
    pub fn new(dim: usize, points: usize, spacing: f64) -> Result<Self, SpectralError> {
        if !(3..=4).contains(&dim) {
            return Err(SpectralError::InvalidGrid(format!("dimension {dim} not in 3..=4")));
        }
        if points < 3 {
            return Err(SpectralError::InvalidGrid(format!("{points} points per axis, need at least 3")));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(SpectralError::InvalidGrid(format!("spacing {spacing} must be positive")));
        }
        match points.checked_pow(dim as u32) {
            Some(total) if total <= MAX_POINTS => Ok(Grid { dim, points, spacing }),
            _ => Err(SpectralError::InvalidGrid(format!(
                "{points}^{dim} points exceeds the limit of {MAX_POINTS}"
            ))),
        }
    }

    /// Grid of the unit torus: spacing `1/points`.
    pub fn unit(dim: usize, points: usize) -> Result<Self, SpectralError> {
        Self::new(dim, points, 1.0 / points as f64)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(self.dim as i32)
    }

    pub fn volume(&self) -> f64 {
        self.cell_volume() * self.len() as f64
    }

    /// Row-major stride of `axis` (last axis fastest).
    pub fn stride(&self, axis: usize) -> usize {
        self.points.pow((self.dim - 1 - axis) as u32)
    }

    pub fn coords(&self, mut index: usize) -> Vec<usize> {
        let mut c = vec![0; self.dim];
        for axis in (0..self.dim).rev() {
            c[axis] = index % self.points;
            index /= self.points;
        }
        c
    }

    /// Index of the neighbor one step forward (`+1`) or backward (`-1`)
    /// along `axis`, wrapping periodically.
    #[inline]
    pub fn neighbor(&self, index: usize, axis: usize, forward: bool) -> usize {
        let stride = self.stride(axis);
        let c = (index / stride) % self.points;
        if forward {
            if c + 1 == self.points {
                index + stride - self.points * stride
            } else {
                index + stride
            }
        } else if c == 0 {
            index + (self.points - 1) * stride
        } else {
            index - stride
        }
    }

    /// Physical position of a grid point.
    pub fn position(&self, index: usize) -> Vec<f64> {
        self.coords(index).into_iter().map(|c| c as f64 * self.spacing).collect()
    }

    pub fn side_length(&self) -> f64 {
        self.points as f64 * self.spacing
    }
}

/// Real value per grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridFunctionFile", into = "GridFunctionFile")]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

/// On-disk layout: axis lengths, spacing, row-major values.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridFunctionFile {
    pub shape: Vec<usize>,
    pub spacing: f64,
    pub values: Vec<f64>,
}

impl TryFrom<GridFunctionFile> for GridFunction {
    type Error = SpectralError;

    fn try_from(f: GridFunctionFile) -> Result<Self, Self::Error> {
        let points = *f
            .shape
            .first()
            .ok_or_else(|| SpectralError::InvalidGrid("empty shape".into()))?;
        if f.shape.iter().any(|&s| s != points) {
            return Err(SpectralError::InvalidGrid(format!("non-cubical shape {:?}", f.shape)));
        }
        let grid = Grid::new(f.shape.len(), points, f.spacing)?;
        GridFunction::new(grid, f.values)
    }
}

impl From<GridFunction> for GridFunctionFile {
    fn from(g: GridFunction) -> Self {
        GridFunctionFile {
            shape: vec![g.grid.points; g.grid.dim],
            spacing: g.grid.spacing,
            values: g.values,
        }
    }
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self, SpectralError> {
        if values.len() != grid.len() {
            return Err(SpectralError::InvalidGrid(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(SpectralError::NonFinite);
        }
        Ok(GridFunction { grid, values })
    }

    pub fn constant(grid: Grid, value: f64) -> Self {
        GridFunction {
            grid,
            values: vec![value; grid.len()],
        }
    }

    pub fn from_fn(grid: Grid, mut f: impl FnMut(&[f64]) -> f64) -> Result<Self, SpectralError> {
        let values = (0..grid.len()).map(|i| f(&grid.position(i))).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn is_positive(&self) -> bool {
        self.min() > 0.0
    }

    /// `∫ f dvol` as a Riemann sum.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_volume()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map(&self, other: &GridFunction, f: impl Fn(f64, f64) -> f64) -> Result<GridFunction, SpectralError> {
        if self.grid != other.grid {
            return Err(SpectralError::GridMismatch);
        }
        Ok(GridFunction {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighbors_wrap() {
        let g = Grid::new(3, 4, 1.0).unwrap();
        let i = 0;
        assert_eq!(g.neighbor(i, 0, false), 3 * 16);
        assert_eq!(g.neighbor(i, 2, false), 3);
        assert_eq!(g.neighbor(3, 2, true), 0);
        for idx in 0..g.len() {
            for axis in 0..3 {
                let f = g.neighbor(idx, axis, true);
                assert_eq!(g.neighbor(f, axis, false), idx);
            }
        }
    }

    #[test]
    fn limits() {
        assert!(Grid::new(2, 8, 1.0).is_err());
        assert!(Grid::new(3, 2, 1.0).is_err());
        assert!(Grid::new(3, 8, 0.0).is_err());
        assert!(Grid::new(4, 20, 1.0).is_err());
        assert!(Grid::new(4, 17, 1.0).is_ok());
    }

    #[test]
    fn json_layout() {
        let g = Grid::new(3, 3, 0.5).unwrap();
        let f = GridFunction::from_fn(g, |x| x[2]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.starts_with(r#"{"shape":[3,3,3],"spacing":0.5,"values":[0.0,0.5,1.0,0.0"#));
        let back: GridFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        let bad = r#"{"shape":[3,4,3],"spacing":0.5,"values":[]}"#;
        assert!(serde_json::from_str::<GridFunction>(bad).is_err());
    }
}
