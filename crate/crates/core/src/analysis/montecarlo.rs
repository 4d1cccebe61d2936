use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::decoder::LookupDecoder;
use super::enumerate::SingleSyndromes;
use crate::error::{Error, Result};
use crate::exec::{sum_range, Execution};
use crate::gf2::{BitVec, RowSpace};
use crate::stabilizer::{Pauli, PauliError, QuantumParityMatrix};

/// Shots per independent random stream. Fixed so that results do not
/// depend on the thread count.
pub const SHARD_SHOTS: u64 = 1 << 14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloResult {
    pub p: f64,
    pub shots: u64,
    pub failures: u64,
    pub rate: f64,
    pub stderr: f64,
    pub seed: u64,
}

/// Estimates the logical failure rate under single-round depolarizing
/// noise: each qubit independently suffers X, Y or Z with probability
/// `p/3` each. A shot fails when the decoder has no correction for the
/// syndrome or the corrected error is not a stabilizer.
///
/// Shard `i` draws from ChaCha8 stream `i` of `seed`, so the estimate is
/// a pure function of `(code, decoder, p, shots, seed)`.
pub fn monte_carlo(
    q: &QuantumParityMatrix,
    decoder: &LookupDecoder,
    p: f64,
    shots: u64,
    seed: u64,
    exec: Execution,
) -> Result<MonteCarloResult> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Range(format!("physical error rate {p} outside [0, 1]")));
    }
    if shots == 0 {
        return Err(Error::Range("shots must be positive".into()));
    }
    if decoder.n() != q.n() || decoder.m() != q.m() {
        return Err(Error::shape("decoder was built for a different code"));
    }
    let singles = SingleSyndromes::new(q);
    let stabilizers = RowSpace::new(&q.stacked());
    let shards = shots.div_ceil(SHARD_SHOTS) as usize;

    let failures = sum_range(exec, 0..shards, |shard| {
        let start = shard as u64 * SHARD_SHOTS;
        let count = SHARD_SHOTS.min(shots - start);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(shard as u64);
        run_shard(&mut rng, &singles, &stabilizers, decoder, p, count)
    });

    let rate = failures as f64 / shots as f64;
    let stderr = (rate * (1.0 - rate) / shots as f64).sqrt();
    Ok(MonteCarloResult {
        p,
        shots,
        failures,
        rate,
        stderr,
        seed,
    })
}

fn run_shard(
    rng: &mut ChaCha8Rng,
    singles: &SingleSyndromes,
    stabilizers: &RowSpace,
    decoder: &LookupDecoder,
    p: f64,
    shots: u64,
) -> u64 {
    let n = singles.n();
    let mut failures = 0;
    let mut error = PauliError::identity(n);
    let mut syndrome = BitVec::zeros(singles.m());
    for _ in 0..shots {
        error.x.clear();
        error.z.clear();
        syndrome.clear();
        let mut hit = false;
        for qubit in 0..n {
            let u: f64 = rng.gen();
            if u < p {
                // one uniform draw picks both "error?" and which Pauli
                let pauli = Pauli::ALL[((3.0 * u / p) as usize).min(2)];
                error.apply(qubit, pauli);
                syndrome.xor_assign(singles.get(qubit, pauli));
                hit = true;
            }
        }
        if !hit {
            continue;
        }
        let failed = match decoder.decode(&syndrome) {
            None => true,
            Some(entry) => !stabilizers.contains(&error.compose(&entry.correction).symplectic()),
        };
        if failed {
            failures += 1;
        }
    }
    failures
}
