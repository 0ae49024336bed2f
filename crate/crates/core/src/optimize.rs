//! Derivative-free coordinate search.

use serde::{Deserialize, Serialize};

/// Compass search with one adaptive step per coordinate.
///
/// Each iteration sweeps all coordinates once, trying `+step` then `-step`.
/// A successful move doubles that coordinate's step, a failed one halves it.
/// The search stops after `max_iterations` sweeps, once every step is below
/// `tolerance`, or when the objective reaches `target`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoordinateSearch {
    pub max_iterations: usize,
    pub initial_step: f64,
    pub tolerance: f64,
    #[serde(default)]
    pub target: Option<f64>,
}

impl Default for CoordinateSearch {
    fn default() -> Self {
        Self { max_iterations: 200, initial_step: 0.5, tolerance: 1e-10, target: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
}

impl CoordinateSearch {
    pub fn minimize(&self, mut f: impl FnMut(&[f64]) -> f64, x0: Vec<f64>) -> Minimum {
        let mut x = x0;
        let mut value = f(&x);
        let mut evaluations = 1;
        let mut steps = vec![self.initial_step; x.len()];
        let max_step = 4.0 * self.initial_step.max(1.0);
        let mut iterations = 0;
        while iterations < self.max_iterations {
            if self.target.is_some_and(|t| value <= t) {
                break;
            }
            if steps.iter().all(|&s| s < self.tolerance) {
                break;
            }
            iterations += 1;
            for i in 0..x.len() {
                let original = x[i];
                let mut moved = false;
                for dir in [1.0, -1.0] {
                    x[i] = original + dir * steps[i];
                    let trial = f(&x);
                    evaluations += 1;
                    if trial < value {
                        value = trial;
                        moved = true;
                        break;
                    }
                }
                if moved {
                    steps[i] = (steps[i] * 2.0).min(max_step);
                } else {
                    x[i] = original;
                    steps[i] *= 0.5;
                }
            }
        }
        Minimum { x, value, iterations, evaluations }
    }
}
