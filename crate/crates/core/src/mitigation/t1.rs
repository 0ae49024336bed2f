//! Correction for relaxation of |1> to |0> before readout.
//!
//! If each excited qubit survives until measurement with probability `p`,
//! the measured `~Z = p Z + (1 - p)`, which is inverted exactly by
//! `Z = ~Z / p - (1 - p) / p`.

use crate::error::{Error, Result};

fn check(p_t: f64) -> Result<()> {
    if p_t > 0.0 && p_t <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("survival probability must lie in (0, 1], got {p_t}")))
    }
}

/// Damped expectation `p_t z + (1 - p_t)`.
pub fn t1_forward(z_exact: f64, p_t: f64) -> Result<f64> {
    check(p_t)?;
    Ok(p_t * z_exact + (1.0 - p_t))
}

pub fn t1_correct(noisy_z: f64, p_t: f64) -> Result<f64> {
    check(p_t)?;
    Ok(noisy_z / p_t - (1.0 - p_t) / p_t)
}
