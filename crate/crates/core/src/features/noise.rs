//! Height-noise injection.
//!
//! Many working sites have unique heights, so a raw height column acts as
//! a location fingerprint. Adding Gaussian noise breaks the fingerprint
//! while keeping the height information. The PRNG is partitioned by
//! instance id, so the same instance receives the same noise regardless of
//! dataset order or parallelism.

use crate::data::InstanceId;
use crate::rng;
use rand_distr::{Distribution, Normal};

const NOISE_STREAM: u64 = 0x6865_6967_6874; // distinguishes this consumer of the seed

pub fn add_height_noise(heights: &[f64], ids: &[InstanceId], sigma: f64, seed: u64) -> Vec<f64> {
    assert_eq!(heights.len(), ids.len(), "one id per height");
    if sigma == 0.0 {
        return heights.to_vec();
    }
    let normal = Normal::new(0.0, sigma).expect("sigma validated upstream");
    heights
        .iter()
        .zip(ids)
        .map(|(&h, id)| {
            let mut rng = rng::substream2(seed, NOISE_STREAM, id.0);
            h + normal.sample(&mut rng)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(n: u64) -> Vec<InstanceId> {
        (0..n).map(InstanceId).collect()
    }

    #[test]
    fn zero_sigma_is_identity() {
        let heights = vec![2.0, 3.5, 1.25];
        assert_eq!(add_height_noise(&heights, &ids(3), 0.0, 9), heights);
    }

    #[test]
    fn equal_seeds_give_equal_outputs() {
        let heights = vec![2.0; 50];
        let a = add_height_noise(&heights, &ids(50), 0.2, 4);
        let b = add_height_noise(&heights, &ids(50), 0.2, 4);
        assert_eq!(a, b);
        let c = add_height_noise(&heights, &ids(50), 0.2, 5);
        assert_ne!(a, c);
    }

    #[test]
    fn noise_is_keyed_by_instance_id_not_position() {
        let heights = vec![2.0, 2.0];
        let forward = add_height_noise(&heights, &[InstanceId(1), InstanceId(2)], 0.2, 4);
        let reversed = add_height_noise(&heights, &[InstanceId(2), InstanceId(1)], 0.2, 4);
        assert_eq!(forward[0], reversed[1]);
        assert_eq!(forward[1], reversed[0]);
    }

    #[test]
    fn sample_std_matches_sigma() {
        // Law-of-large-numbers bound on the noise scale.
        let n = 100_000;
        let heights = vec![3.0; n];
        let noised = add_height_noise(&heights, &ids(n as u64), 0.2, 11);
        let deltas: Vec<f64> = noised.iter().map(|v| v - 3.0).collect();
        let mean = deltas.iter().sum::<f64>() / n as f64;
        let std = (deltas.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
        assert!((0.19..=0.21).contains(&std), "std {std}");
    }
}
