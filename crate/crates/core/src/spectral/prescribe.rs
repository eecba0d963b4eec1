//! Prescribing negative curvature: solve `L u = κ u^α` with `κ < 0` by
//! monotone iteration between a sub- and a supersolution.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::eigen::{principal_eigenpair, EigenOptions};
use super::grid::GridFunction;
use super::operator::{conjugate_gradient, DiscreteOperator, Shifted, SymmetricOperator};
use super::SpectralError;

#[derive(Debug, Clone, Copy)]
pub struct PrescribeOptions {
    /// Stop once `‖L u - κ u^α‖_∞ ≤ tol·‖κ‖_∞`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PrescribeOptions {
    fn default() -> Self {
        PrescribeOptions {
            tol: 1e-7,
            max_iter: 1000,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrescribeReport {
    pub solution: GridFunction,
    pub mu1: f64,
    /// Supersolution: the constant `u_+`.
    pub upper: f64,
    /// Subsolution `u_- = ε φ1`.
    pub lower: GridFunction,
    pub epsilon: f64,
    /// `Λ` in `(L + Λ) u_{k+1} = κ u_k^α + Λ u_k`.
    pub shift: f64,
    pub iterations: usize,
    /// `‖L u_k - κ u_k^α‖_∞` per iterate, starting at `u_+`.
    pub residuals: Vec<f64>,
    /// Every iterate lies below its predecessor.
    pub monotone: bool,
    /// Every iterate lies in `[u_-, u_+]`.
    pub bracketed: bool,
}

fn residual_sup(op: &DiscreteOperator, kappa: &[f64], u: &[f64], alpha: f64) -> f64 {
    let mut lu = vec![0.0; u.len()];
    op.apply(u, &mut lu);
    lu.iter()
        .zip(kappa)
        .zip(u)
        .map(|((l, k), v)| (l - k * v.powf(alpha)).abs())
        .fold(0.0, f64::max)
}

/// Positive solution of `L u = κ u^α` for everywhere-negative `κ`, which
/// exists exactly when `μ1(L) < 0`.
///
/// Iterates `(L + Λ) u_{k+1} = κ u_k^α + Λ u_k` downward from the constant
/// supersolution `u_+`. With `Λ ≥ α ‖κ‖_∞ u_+^{α-1}` the right-hand side is
/// increasing in `u_k` on `[0, u_+]`, so the iterates decrease and stay above
/// the subsolution `u_- = ε φ1`.
pub fn prescribe_curvature(
    base: &DiscreteOperator,
    kappa: &GridFunction,
    opts: PrescribeOptions,
) -> Result<PrescribeReport, SpectralError> {
    if kappa.grid() != base.grid() {
        return Err(SpectralError::GridMismatch);
    }
    if kappa.max() >= 0.0 {
        return Err(SpectralError::KappaNotNegative);
    }
    let (mu1, phi) = principal_eigenpair(base, EigenOptions::default())?;
    if mu1 >= 0.0 {
        return Err(SpectralError::NonNegativeEigenvalue { mu1 });
    }
    let alpha = base.exponent();
    let k = kappa.values();
    let v = base.potential().values();
    let kappa_sup = kappa.sup_norm();

    // L(C) = V C ≥ κ C^α  ⇔  C^{α-1} ≥ -V/|κ| wherever V < 0.
    let ratio = v
        .iter()
        .zip(k)
        .map(|(vi, ki)| (-vi / ki.abs()).max(0.0))
        .fold(0.0, f64::max);
    let upper = ratio.powf(1.0 / (alpha - 1.0)).max(f64::MIN_POSITIVE);

    // L(εφ) = ε μ1 φ ≤ κ ε^α φ^α  ⇐  ε^{α-1} ≤ |μ1| / ‖κ‖_∞  (φ ≤ 1).
    let epsilon = 0.5 * (mu1.abs() / kappa_sup).powf(1.0 / (alpha - 1.0));
    let epsilon = epsilon.min(upper);
    let lower = phi.map(|p| epsilon * p);

    let shift = alpha * kappa_sup * upper.powf(alpha - 1.0) + 1.0;
    let system = Shifted { inner: base, shift };
    let n = k.len();
    let slack = 1e-12 * upper;

    let mut u = vec![upper; n];
    let mut residuals = vec![residual_sup(base, k, &u, alpha)];
    let mut monotone = true;
    let mut bracketed = true;
    let mut next = u.clone();
    let mut iterations = 0;
    while residuals.last().copied().unwrap_or(f64::INFINITY) > opts.tol * kappa_sup {
        if iterations == opts.max_iter {
            return Err(SpectralError::NoConvergence {
                iterations,
                residual: *residuals.last().unwrap_or(&f64::NAN),
            });
        }
        let rhs: Vec<f64> = u
            .iter()
            .zip(k)
            .map(|(ui, ki)| ki * ui.powf(alpha) + shift * ui)
            .collect();
        conjugate_gradient(&system, &rhs, &mut next, 1e-14, 20 * n + 100)?;
        for i in 0..n {
            if next[i] > u[i] + slack {
                monotone = false;
            }
            if next[i] < lower.values()[i] - slack || next[i] > upper + slack {
                bracketed = false;
            }
        }
        u.copy_from_slice(&next);
        iterations += 1;
        residuals.push(residual_sup(base, k, &u, alpha));
    }

    Ok(PrescribeReport {
        solution: GridFunction::new(*base.grid(), u)?,
        mu1,
        upper,
        lower,
        epsilon,
        shift,
        iterations,
        residuals,
        monotone,
        bracketed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralCriterion {
    pub integral: f64,
    pub volume: f64,
    /// `∫ κ < 0`: the rearranged target is not too positive too often.
    pub negative: bool,
}

/// `∫ κ dvol` over the grid torus.
pub fn integral_criterion(kappa: &GridFunction) -> IntegralCriterion {
    let integral = kappa.integral();
    IntegralCriterion {
        integral,
        volume: kappa.grid().volume(),
        negative: integral < 0.0,
    }
}

/// Upper bound `(-C_- + ε C_+)·Vol` for `∫ φ*κ` when `κ < -C_-` on all but
/// volume `ε` and `κ ≤ C_+` everywhere.
pub fn rearrangement_bound(c_minus: &BigRational, c_plus: &BigRational, epsilon: &BigRational, volume: &BigRational) -> BigRational {
    (-c_minus + epsilon * c_plus) * volume
}

/// Largest `ε` for which [`rearrangement_bound`] is still negative (exclusive).
pub fn epsilon_threshold(c_minus: &BigRational, c_plus: &BigRational) -> Option<BigRational> {
    if c_plus.is_positive() {
        Some(c_minus / c_plus)
    } else {
        None
    }
}

/// Whether the bound certifies `∫ φ*κ < 0`.
pub fn rearrangement_certifies(c_minus: &BigRational, c_plus: &BigRational, epsilon: &BigRational, volume: &BigRational) -> bool {
    let b = rearrangement_bound(c_minus, c_plus, epsilon, volume);
    b.is_negative() && !b.is_zero()
}
