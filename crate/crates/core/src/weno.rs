//! Fifth-order WENO reconstruction kernel.
//!
//! Operates on windows of five consecutive point values in upwind
//! orientation (wind blowing from low index to high index). The negative
//! wind direction is handled by mirroring the window before entry, which
//! makes the two directions symmetric with respect to the interface by
//! construction.

use crate::error::{Result, SolverError};

/// Five consecutive upwind-ordered point values `f(u_{j-2}) .. f(u_{j+2})`
/// feeding the reconstruction at interface `j+1/2`.
pub type StencilWindow = [f64; 5];

/// Reconstruction parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WenoParams {
    /// Regularizer keeping the weight denominators away from zero.
    pub epsilon: f64,
    /// Linear (optimal) weights of the three candidate stencils.
    pub linear_weights: [f64; 3],
    /// Exponent on `(epsilon + beta)`: 2 is the standard choice, 1 is the
    /// plain unsquared variant.
    pub beta_power: u32,
}

impl Default for WenoParams {
    fn default() -> Self {
        WenoParams {
            epsilon: 1e-6,
            linear_weights: [0.1, 0.6, 0.3],
            beta_power: 2,
        }
    }
}

impl WenoParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(SolverError::InvalidParameter(format!(
                "weno epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        let sum: f64 = self.linear_weights.iter().sum();
        if self.linear_weights.iter().any(|&g| g <= 0.0) || (sum - 1.0).abs() > 1e-12 {
            return Err(SolverError::InvalidParameter(format!(
                "linear weights must be positive and sum to 1, got {:?}",
                self.linear_weights
            )));
        }
        if self.beta_power != 1 && self.beta_power != 2 {
            return Err(SolverError::InvalidParameter(format!(
                "beta power must be 1 or 2, got {}",
                self.beta_power
            )));
        }
        Ok(())
    }
}

/// Reverse a window about the interface (negative-wind orientation).
pub fn mirror(w: &StencilWindow) -> StencilWindow {
    [w[4], w[3], w[2], w[1], w[0]]
}

/// The three third-order candidate interface values.
pub fn candidate_values(w: &StencilWindow) -> [f64; 3] {
    [
        w[0] / 3.0 - 7.0 / 6.0 * w[1] + 11.0 / 6.0 * w[2],
        -w[1] / 6.0 + 5.0 / 6.0 * w[2] + w[3] / 3.0,
        w[2] / 3.0 + 5.0 / 6.0 * w[3] - w[4] / 6.0,
    ]
}

/// Jiang-Shu smoothness indicators of the three candidate stencils.
pub fn smoothness_indicators(w: &StencilWindow) -> [f64; 3] {
    let b1 = 13.0 / 12.0 * (w[0] - 2.0 * w[1] + w[2]).powi(2)
        + 0.25 * (w[0] - 4.0 * w[1] + 3.0 * w[2]).powi(2);
    let b2 =
        13.0 / 12.0 * (w[1] - 2.0 * w[2] + w[3]).powi(2) + 0.25 * (w[1] - w[3]).powi(2);
    let b3 = 13.0 / 12.0 * (w[2] - 2.0 * w[3] + w[4]).powi(2)
        + 0.25 * (3.0 * w[2] - 4.0 * w[3] + w[4]).powi(2);
    [b1, b2, b3]
}

/// Normalized nonlinear weights `omega_k ~ gamma_k / (eps + beta_k)^p`.
pub fn nonlinear_weights(betas: [f64; 3], params: &WenoParams) -> [f64; 3] {
    let p = params.beta_power as i32;
    let mut w = [0.0; 3];
    for k in 0..3 {
        w[k] = params.linear_weights[k] / (params.epsilon + betas[k]).powi(p);
    }
    let sum = w[0] + w[1] + w[2];
    [w[0] / sum, w[1] / sum, w[2] / sum]
}

/// Convex combination of candidate values with the given weights.
pub fn combine(candidates: [f64; 3], weights: [f64; 3]) -> f64 {
    weights[0] * candidates[0] + weights[1] * candidates[1] + weights[2] * candidates[2]
}

/// WENO5 interface value for a positive-wind window.
pub fn reconstruct_interface(w: &StencilWindow, params: &WenoParams) -> f64 {
    reconstruct_with_weights(w, params).0
}

/// Interface value together with the nonlinear weights that produced it.
pub fn reconstruct_with_weights(w: &StencilWindow, params: &WenoParams) -> (f64, [f64; 3]) {
    let weights = nonlinear_weights(smoothness_indicators(w), params);
    (combine(candidate_values(w), weights), weights)
}
