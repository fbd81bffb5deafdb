//! Parameter-shift gradients.
//!
//! With gates `R_Y(2a) = exp(-i a Y)` the generator is `Y` (eigenvalues
//! ±1), so `∂f/∂a = f(a + π/4) - f(a - π/4)` exactly.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_4;

use crate::problem::Problem;
use crate::Result;

/// Euclidean gradient from `2p` energy evaluations.
pub fn parameter_shift_gradient(problem: &Problem<'_>, theta: &[f64]) -> Result<Vec<f64>> {
    problem.ansatz.check_params(theta)?;
    let mut shifted = theta.to_vec();
    (0..theta.len())
        .map(|i| {
            shifted[i] = theta[i] + FRAC_PI_4;
            let plus = problem.energy(&shifted)?;
            shifted[i] = theta[i] - FRAC_PI_4;
            let minus = problem.energy(&shifted)?;
            shifted[i] = theta[i];
            Ok(plus - minus)
        })
        .collect()
}
