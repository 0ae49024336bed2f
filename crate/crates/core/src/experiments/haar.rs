use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng;
use crate::state::{QuantumState, C64};

/// Haar-random pure state: i.i.d. complex standard normals, normalized.
pub fn haar_random_state(qubits: usize, seed: u64) -> Result<QuantumState> {
    if qubits == 0 {
        return Err(Error::InvalidArgument("need at least one qubit".into()));
    }
    let mut rng = rng::stream(seed, 0);
    let amplitudes = (0..1usize << qubits)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            C64::new(re, im)
        })
        .collect();
    let mut state = QuantumState::from_amplitudes(amplitudes)?;
    state.normalize();
    Ok(state)
}
