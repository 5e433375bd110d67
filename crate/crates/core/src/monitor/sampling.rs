use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot sample {requested} stations from a list of {available}")]
pub struct SampleSizeError {
    pub requested: usize,
    pub available: usize,
}

/// Uniform sample of `n` items without replacement, reproducible for a seed.
pub fn sample_stations<T: Clone>(all: &[T], n: usize, seed: u64) -> Result<Vec<T>, SampleSizeError> {
    if n > all.len() {
        return Err(SampleSizeError {
            requested: n,
            available: all.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(rand::seq::index::sample(&mut rng, all.len(), n)
        .into_iter()
        .map(|i| all[i].clone())
        .collect())
}
