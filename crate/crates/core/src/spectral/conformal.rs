use serde::{Deserialize, Serialize};

use super::grid::GridFunction;
use super::operator::{DiscreteOperator, SymmetricOperator};
use super::SpectralError;

fn require_positive(u: &GridFunction, what: &'static str) -> Result<(), SpectralError> {
    if u.is_positive() {
        Ok(())
    } else {
        Err(SpectralError::NotPositive(what))
    }
}

/// Curvature potential of the conformally changed metric `u^{4/(n-2)} g0`:
/// `u^{-α} L(u)`, where `L` is `base` with potential the curvature of `g0`.
pub fn conformal_scalar(u: &GridFunction, base: &DiscreteOperator) -> Result<GridFunction, SpectralError> {
    require_positive(u, "conformal factor")?;
    let lu = base.apply_fn(u)?;
    let alpha = base.exponent();
    lu.zip_map(u, |l, v| v.powf(-alpha) * l)
}

/// The operator of the metric `u^{4/(n-2)} g0`, acting as
/// `v ↦ u^{-α} L_{g0}(u v)`.
#[derive(Debug, Clone)]
pub struct ConformalChange<'a> {
    base: &'a DiscreteOperator,
    factor: GridFunction,
}

impl<'a> ConformalChange<'a> {
    pub fn new(base: &'a DiscreteOperator, factor: GridFunction) -> Result<Self, SpectralError> {
        if factor.grid() != base.grid() {
            return Err(SpectralError::GridMismatch);
        }
        require_positive(&factor, "conformal factor")?;
        Ok(ConformalChange { base, factor })
    }

    pub fn apply(&self, v: &GridFunction) -> Result<GridFunction, SpectralError> {
        let uv = self.factor.zip_map(v, |a, b| a * b)?;
        let l = self.base.apply_fn(&uv)?;
        let alpha = self.base.exponent();
        l.zip_map(&self.factor, |x, u| u.powf(-alpha) * x)
    }

    /// Curvature after a further change by `v`: `v^{-α}·(this operator)(v)`.
    pub fn conformal_scalar(&self, v: &GridFunction) -> Result<GridFunction, SpectralError> {
        require_positive(v, "conformal factor")?;
        let alpha = self.base.exponent();
        self.apply(v)?.zip_map(v, |x, w| w.powf(-alpha) * x)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathReport {
    /// Largest `|u_t^{-α} L(u_t) - u_t^{-α}((1-t)V + t L(u))|` over samples.
    pub max_violation: f64,
    /// Smallest curvature value met along the sampled path.
    pub min_curvature: f64,
    pub samples: usize,
}

/// Checks the convex-path identity along `u_t = (1-t) + t u`.
///
/// Both endpoints must have positive curvature: `V > 0` for `g0`, and
/// `u^{-α} L(u) > 0` for the far end.
pub fn convex_path_check(u: &GridFunction, base: &DiscreteOperator, ts: &[f64]) -> Result<PathReport, SpectralError> {
    require_positive(u, "conformal factor")?;
    if !base.potential().is_positive() {
        return Err(SpectralError::EndpointNotPositive("base curvature"));
    }
    let lu = base.apply_fn(u)?;
    if !conformal_scalar(u, base)?.is_positive() {
        return Err(SpectralError::EndpointNotPositive("conformally changed curvature"));
    }
    let alpha = base.exponent();
    let v = base.potential().values();
    let mut max_violation = 0.0f64;
    let mut min_curvature = f64::INFINITY;
    let mut tmp = vec![0.0; u.values().len()];
    for &t in ts {
        let ut: Vec<f64> = u.values().iter().map(|x| (1.0 - t) + t * x).collect();
        base.apply(&ut, &mut tmp);
        for i in 0..ut.len() {
            let w = ut[i].powf(-alpha);
            let direct = w * tmp[i];
            let combined = w * ((1.0 - t) * v[i] + t * lu.values()[i]);
            max_violation = max_violation.max((direct - combined).abs());
            min_curvature = min_curvature.min(direct);
        }
    }
    Ok(PathReport {
        max_violation,
        min_curvature,
        samples: ts.len(),
    })
}
