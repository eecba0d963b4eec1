use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::grid::GridFunction;
use super::operator::{conjugate_gradient, dot, norm, DiscreteOperator, Shifted, SymmetricOperator};
use super::SpectralError;

#[derive(Debug, Clone, Copy)]
pub struct EigenOptions {
    /// Stop once `‖Aφ - μφ‖ ≤ tol·‖φ‖`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            tol: 1e-10,
            max_iter: 5000,
        }
    }
}

/// Lowest eigenvalue with its eigenvector, normalized to `max φ = 1`.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    /// `‖Aφ - μφ‖ / ‖φ‖`.
    pub residual: f64,
    pub iterations: usize,
    /// Whether the dense fallback produced the result.
    pub dense: bool,
}

// Dense fallback is only attempted up to this many unknowns.
const DENSE_FALLBACK_LIMIT: usize = 1000;

/// Shifted inverse iteration for the lowest eigenpair of a symmetric
/// operator, started from the all-ones vector.
///
/// The shift sits strictly below the spectrum, so every solve is positive
/// definite, and for operators of the form `-cΔ + V` the iterates stay
/// positive. If the iteration stalls on a small problem the dense
/// eigendecomposition is used instead.
pub fn lowest_eigenpair<A: SymmetricOperator + ?Sized>(a: &A, opts: EigenOptions) -> Result<EigenPair, SpectralError> {
    let n = a.len();
    let (lo, hi) = a.spectral_bounds();
    let margin = 1e-3 * (hi - lo) + 1e-9 * lo.abs().max(1.0);
    let shifted = Shifted { inner: a, shift: -(lo - margin) };

    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut av = vec![0.0; n];
    let mut next = v.clone();
    let mut last_residual = f64::INFINITY;
    for it in 1..=opts.max_iter {
        conjugate_gradient(&shifted, &v, &mut next, 1e-14, 20 * n + 100)?;
        let s = norm(&next);
        for (vi, ni) in v.iter_mut().zip(&next) {
            *vi = ni / s;
        }
        next.copy_from_slice(&v);
        a.apply(&v, &mut av);
        let rq = dot(&v, &av);
        let residual = av.iter().zip(&v).map(|(x, y)| (x - rq * y).powi(2)).sum::<f64>().sqrt();
        last_residual = residual;
        if residual <= opts.tol {
            return Ok(finish(rq, v, residual, it, false));
        }
    }
    if n <= DENSE_FALLBACK_LIMIT {
        return dense_lowest(a);
    }
    Err(SpectralError::NoConvergence {
        iterations: opts.max_iter,
        residual: last_residual,
    })
}

fn finish(value: f64, mut v: Vec<f64>, residual: f64, iterations: usize, dense: bool) -> EigenPair {
    // Fix the sign so the dominant entries are positive, then scale to max 1.
    let sum: f64 = v.iter().sum();
    if sum < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    v.iter_mut().for_each(|x| *x /= max);
    EigenPair {
        value,
        residual,
        vector: v,
        iterations,
        dense,
    }
}

/// Dense matrix of an operator, column by column.
pub fn to_dense<A: SymmetricOperator + ?Sized>(a: &A) -> DMatrix<f64> {
    let n = a.len();
    let mut m = DMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    let mut col = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        a.apply(&e, &mut col);
        e[j] = 0.0;
        for i in 0..n {
            m[(i, j)] = col[i];
        }
    }
    m
}

fn dense_lowest<A: SymmetricOperator + ?Sized>(a: &A) -> Result<EigenPair, SpectralError> {
    let m = to_dense(a);
    let eig = SymmetricEigen::new(m);
    let (k, &value) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .ok_or(SpectralError::NoConvergence {
            iterations: 0,
            residual: f64::NAN,
        })?;
    let v: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
    let mut av = vec![0.0; v.len()];
    a.apply(&v, &mut av);
    let residual = av.iter().zip(&v).map(|(x, y)| (x - value * y).powi(2)).sum::<f64>().sqrt();
    Ok(finish(value, v, residual, 0, true))
}

/// `μ1` and the positive eigenfunction of `-c_n Δ_h + V`, with `max φ = 1`.
pub fn principal_eigenpair(op: &DiscreteOperator, opts: EigenOptions) -> Result<(f64, GridFunction), SpectralError> {
    let pair = lowest_eigenpair(op, opts)?;
    let phi = GridFunction::new(*op.grid(), pair.vector)?;
    if !phi.is_positive() {
        return Err(SpectralError::NotPositive("principal eigenfunction"));
    }
    Ok((pair.value, phi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(value: f64, tolerance: f64) -> Sign {
        if value > tolerance {
            Sign::Positive
        } else if value < -tolerance {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }
}

/// Positive / zero / negative class of a potential, by the sign of `μ1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trichotomy {
    PositiveClass,
    ZeroClass,
    NegativeClass,
}

impl From<Sign> for Trichotomy {
    fn from(s: Sign) -> Self {
        match s {
            Sign::Positive => Trichotomy::PositiveClass,
            Sign::Zero => Trichotomy::ZeroClass,
            Sign::Negative => Trichotomy::NegativeClass,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrichotomyClass {
    pub class: Trichotomy,
    pub mu1: f64,
    pub tolerance: f64,
}

/// Width of the zero band: `1e-8·scale` plus a floating-point floor that
/// grows with the stencil norm, so `V ≡ 0` is not split by roundoff.
fn zero_band<A: SymmetricOperator + ?Sized>(a: &A, potential_scale: f64) -> f64 {
    let (lo, hi) = a.spectral_bounds();
    1e-8 * potential_scale + 1e3 * f64::EPSILON * (hi - lo)
}

pub fn classify(op: &DiscreteOperator) -> Result<TrichotomyClass, SpectralError> {
    let (mu1, _) = principal_eigenpair(op, EigenOptions::default())?;
    let tolerance = zero_band(op, op.potential().sup_norm());
    Ok(TrichotomyClass {
        class: Sign::of(mu1, tolerance).into(),
        mu1,
        tolerance,
    })
}

/// `W^{-1/2} L W^{-1/2}` with `W = diag(u^{α-1})`: the symmetric form of the
/// generalized problem `L v = μ W v`, i.e. the conformally changed operator
/// `u^{-α} L (u ·)` up to similarity.
pub struct WeightedOperator<'a> {
    base: &'a DiscreteOperator,
    inv_sqrt_w: Vec<f64>,
}

impl<'a> WeightedOperator<'a> {
    pub fn new(base: &'a DiscreteOperator, u: &GridFunction) -> Result<Self, SpectralError> {
        if u.grid() != base.grid() {
            return Err(SpectralError::GridMismatch);
        }
        if !u.is_positive() {
            return Err(SpectralError::NotPositive("conformal factor"));
        }
        let alpha = base.exponent();
        let inv_sqrt_w = u.values().iter().map(|v| v.powf(-(alpha - 1.0) / 2.0)).collect();
        Ok(WeightedOperator { base, inv_sqrt_w })
    }

    fn weight_range(&self) -> (f64, f64) {
        let inv: Vec<f64> = self.inv_sqrt_w.iter().map(|s| s * s).collect();
        (
            inv.iter().copied().fold(f64::INFINITY, f64::min),
            inv.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        )
    }
}

impl SymmetricOperator for WeightedOperator<'_> {
    fn len(&self) -> usize {
        self.base.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let scaled: Vec<f64> = x.iter().zip(&self.inv_sqrt_w).map(|(a, s)| a * s).collect();
        self.base.apply(&scaled, y);
        for (yi, s) in y.iter_mut().zip(&self.inv_sqrt_w) {
            *yi *= s;
        }
    }

    fn diagonal(&self) -> Vec<f64> {
        self.base
            .diagonal()
            .into_iter()
            .zip(&self.inv_sqrt_w)
            .map(|(d, s)| d * s * s)
            .collect()
    }

    fn spectral_bounds(&self) -> (f64, f64) {
        // x^T W^{-1/2} L W^{-1/2} x = y^T L y with y = W^{-1/2} x, and
        // |y|² lies between min(1/w)|x|² and max(1/w)|x|².
        let (lo, hi) = self.base.spectral_bounds();
        let (wmin, wmax) = self.weight_range();
        let scale = |v: f64, lower: bool| match (v >= 0.0, lower) {
            (true, true) | (false, false) => v * wmin,
            _ => v * wmax,
        };
        (scale(lo, true), scale(hi, false))
    }
}

/// Signs of `μ1(L)` and of the lowest eigenvalue of `L v = μ u^{α-1} v`.
pub fn sign_invariance_check(op: &DiscreteOperator, u: &GridFunction) -> Result<(Sign, Sign), SpectralError> {
    let before = classify(op)?;
    let weighted = WeightedOperator::new(op, u)?;
    let pair = lowest_eigenpair(&weighted, EigenOptions::default())?;
    let (_, wmax) = weighted.weight_range();
    let tol = zero_band(&weighted, op.potential().sup_norm() * wmax);
    let before_sign = match before.class {
        Trichotomy::PositiveClass => Sign::Positive,
        Trichotomy::ZeroClass => Sign::Zero,
        Trichotomy::NegativeClass => Sign::Negative,
    };
    Ok((before_sign, Sign::of(pair.value, tol)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::Grid;

    #[test]
    fn constant_potential() {
        let g = Grid::unit(3, 6).unwrap();
        for c in [-2.0, 0.0, 3.5] {
            let (mu, phi) = principal_eigenpair(&DiscreteOperator::constant(g, c), EigenOptions::default()).unwrap();
            assert!((mu - c).abs() < 1e-9, "{mu} vs {c}");
            assert!(phi.values().iter().all(|v| (v - 1.0).abs() < 1e-9));
        }
    }

    #[test]
    fn trichotomy_of_constants() {
        let g = Grid::unit(3, 6).unwrap();
        let cases = [
            (1.0, Trichotomy::PositiveClass),
            (0.0, Trichotomy::ZeroClass),
            (-1.0, Trichotomy::NegativeClass),
        ];
        for (c, want) in cases {
            assert_eq!(classify(&DiscreteOperator::constant(g, c)).unwrap().class, want);
        }
    }

    #[test]
    fn weighted_operator_bounds_enclose_spectrum() {
        let g = Grid::new(3, 4, 0.7).unwrap();
        let op = DiscreteOperator::new(GridFunction::from_fn(g, |x| x[0] - 1.0).unwrap());
        let u = GridFunction::from_fn(g, |x| 1.0 + 0.3 * (x[1] * 2.0).sin()).unwrap();
        let w = WeightedOperator::new(&op, &u).unwrap();
        let eig = SymmetricEigen::new(to_dense(&w));
        let (lo, hi) = w.spectral_bounds();
        for &e in eig.eigenvalues.iter() {
            assert!(e >= lo - 1e-9 && e <= hi + 1e-9);
        }
    }

    #[test]
    fn rejects_nonpositive_factor() {
        let g = Grid::unit(3, 4).unwrap();
        let op = DiscreteOperator::constant(g, 1.0);
        let u = GridFunction::constant(g, 0.0);
        assert!(matches!(sign_invariance_check(&op, &u), Err(SpectralError::NotPositive(_))));
    }
}
