use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{stability_certificate, GeneratorSet, Word};
use crate::{Error, Result};

/// Product-measure sampler over words: each letter drawn independently from
/// `weights`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SequenceSampler {
    weights: Vec<f64>,
    seed: u64,
}

impl SequenceSampler {
    pub fn new(weights: Vec<f64>, seed: u64) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(Error::InvalidArgument("sampler weights must all be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("sampler weights sum to {total}, not 1")));
        }
        Ok(SequenceSampler { weights, seed })
    }

    pub fn uniform(s: usize, seed: u64) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidArgument("uniform sampler over zero generators".into()));
        }
        Self::new(vec![1.0 / s as f64; s], seed)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The word drawn for trial number `trial`. Each trial reads its own ChaCha
    /// stream, so results do not depend on scheduling.
    pub fn sample(&self, depth: usize, trial: u64) -> Vec<usize> {
        let dist = WeightedIndex::new(&self.weights).expect("weights validated on construction");
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial);
        (0..depth).map(|_| dist.sample(&mut rng)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub depth: usize,
    pub trials: u64,
    pub square_free: u64,
    pub estimate: f64,
    /// `sqrt(p(1-p)/T)` at the estimated `p`.
    pub standard_error: f64,
}

/// Fraction of sampled length-`depth` words whose adjusted critical orbit has no
/// squares.
pub fn monte_carlo_stability(
    set: &GeneratorSet,
    sampler: &SequenceSampler,
    depth: usize,
    trials: u64,
) -> Result<MonteCarloEstimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    if sampler.weights.len() != set.len() {
        return Err(Error::InvalidArgument(format!(
            "{} weights for {} generators",
            sampler.weights.len(),
            set.len()
        )));
    }
    let square_free = (0..trials)
        .into_par_iter()
        .filter(|&trial| {
            let word = Word::new(sampler.sample(depth, trial), set).expect("sampled indices are in range");
            stability_certificate(set, &word).is_certified()
        })
        .count() as u64;
    let p = square_free as f64 / trials as f64;
    Ok(MonteCarloEstimate {
        depth,
        trials,
        square_free,
        estimate: p,
        standard_error: (p * (1.0 - p) / trials as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_weights() {
        assert!(SequenceSampler::new(vec![0.5, 0.0, 0.5], 1).is_err());
        assert!(SequenceSampler::new(vec![0.5, 0.6], 1).is_err());
        assert!(SequenceSampler::new(vec![], 1).is_err());
        assert!(SequenceSampler::new(vec![0.25, 0.75], 1).is_ok());
    }

    #[test]
    fn single_generator_always_square_free() {
        let set = GeneratorSet::new([1]).unwrap();
        let sampler = SequenceSampler::uniform(1, 7).unwrap();
        let est = monte_carlo_stability(&set, &sampler, 8, 200).unwrap();
        assert_eq!(est.estimate, 1.0);
    }

    #[test]
    fn single_trial_is_bernoulli() {
        let set = GeneratorSet::new([-4, -12]).unwrap();
        for seed in 0..20 {
            let sampler = SequenceSampler::uniform(2, seed).unwrap();
            let est = monte_carlo_stability(&set, &sampler, 3, 1).unwrap();
            assert!(est.estimate == 0.0 || est.estimate == 1.0);
        }
    }

    #[test]
    fn reproducible_across_thread_counts() {
        let set = GeneratorSet::new([-4, -12, 3]).unwrap();
        let sampler = SequenceSampler::new(vec![0.2, 0.5, 0.3], 99).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| monte_carlo_stability(&set, &sampler, 6, 3000).unwrap())
        };
        let a = run(1);
        assert_eq!(a, run(4));
        assert_eq!(a, monte_carlo_stability(&set, &sampler, 6, 3000).unwrap());
    }
}
