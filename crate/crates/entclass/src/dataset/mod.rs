//! Balanced labeled datasets: deterministic generation, persistence, and
//! class-stratified subsampling.

pub mod format;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::derive_stream;
use crate::qsim::{
    build_basis_set, encode_features, sample_state, to_density, BasisSet, MeasurementScheme,
    NoiseConfig, Roster, Shots,
};

/// Stream id reserved for the label-shuffle permutation; sample streams use
/// ids 0..n_samples.
const LABEL_SHUFFLE_STREAM: u64 = u64::MAX;

/// One labeled feature vector. Features are stored as f32, exactly as they
/// are serialized, so in-memory and on-disk values agree bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub features: Vec<f32>,
    pub label: u16,
}

/// Generation metadata embedded in every dataset file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub n_qubits: usize,
    pub n_classes: usize,
    pub scheme: String,
    pub roster: Vec<String>,
    pub dephasing_epsilon: f64,
    /// -1 means exact probabilities; otherwise the per-setting shot count.
    pub shots: i64,
    pub root_seed: u64,
    pub creator_version: String,
}

impl DatasetMeta {
    pub fn noise(&self) -> Result<NoiseConfig> {
        NoiseConfig::new(self.dephasing_epsilon, Shots::from_i64(self.shots)?)
    }
}

/// An ordered collection of samples plus full generation metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub samples: Vec<Sample>,
    pub meta: DatasetMeta,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Feature-vector length M.
    pub fn feature_len(&self) -> usize {
        self.samples.first().map_or(0, |s| s.features.len())
    }

    pub fn n_classes(&self) -> usize {
        self.meta.n_classes
    }

    /// Per-class sample counts.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.meta.n_classes];
        for s in &self.samples {
            counts[s.label as usize] += 1;
        }
        counts
    }
}

/// Everything `generate` needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub n_qubits: usize,
    pub n_samples: usize,
    pub scheme: MeasurementScheme,
    pub noise: NoiseConfig,
    pub root_seed: u64,
}

impl GenConfig {
    pub fn noiseless(n_qubits: usize, n_samples: usize, root_seed: u64) -> Self {
        Self {
            n_qubits,
            n_samples,
            scheme: MeasurementScheme::LocalPauli,
            noise: NoiseConfig::NOISELESS,
            root_seed,
        }
    }
}

/// Generate a balanced dataset with the default roster for the configured
/// qubit count.
pub fn generate(cfg: &GenConfig) -> Result<Dataset> {
    let roster = Roster::default_for(cfg.n_qubits)?;
    let bases = build_basis_set(cfg.n_qubits, cfg.scheme);
    generate_with(&roster, &bases, &cfg.noise, cfg.n_samples, cfg.root_seed)
}

/// Generate a balanced dataset over an explicit roster and basis set.
///
/// Labels cycle round-robin over classes and are then shuffled with a
/// seeded permutation; sample i is drawn from `derive_stream(root_seed, i)`,
/// so the result is byte-identical regardless of worker count.
pub fn generate_with(
    roster: &Roster,
    bases: &BasisSet,
    noise: &NoiseConfig,
    n_samples: usize,
    root_seed: u64,
) -> Result<Dataset> {
    let k = roster.n_classes();
    if n_samples < k {
        return Err(Error::InvalidArgument(format!(
            "need at least {k} samples (one per class), got {n_samples}"
        )));
    }

    let mut labels: Vec<u16> = (0..n_samples).map(|i| (i % k) as u16).collect();
    let mut shuffle_rng = derive_stream(root_seed, LABEL_SHUFFLE_STREAM);
    shuffle_rng.shuffle(&mut labels);

    let samples: Result<Vec<Sample>> = labels
        .par_iter()
        .enumerate()
        .map(|(i, &label)| {
            let mut rng = derive_stream(root_seed, i as u64);
            let family = roster.family(label as usize)?;
            let state = sample_state(family, &mut rng);
            let rho = to_density(&state);
            let features = encode_features(&rho, bases, noise, &mut rng)?;
            Ok(Sample {
                features: features.into_iter().map(|f| f as f32).collect(),
                label,
            })
        })
        .collect();

    Ok(Dataset {
        samples: samples?,
        meta: DatasetMeta {
            n_qubits: roster.n_qubits,
            n_classes: k,
            scheme: bases.scheme().name().to_string(),
            roster: roster.names(),
            dephasing_epsilon: noise.dephasing_epsilon,
            shots: noise.shots.to_i64(),
            root_seed,
            creator_version: env!("CARGO_PKG_VERSION").to_string(),
        },
    })
}

/// Class-stratified subsample without replacement.
///
/// Per-class quota is floor(n/K), with the remainder given to the lowest
/// class ids. Deterministic for a given seed.
pub fn subsample(dataset: &Dataset, n: usize, seed: u64) -> Result<Dataset> {
    if n > dataset.len() {
        return Err(Error::InvalidArgument(format!(
            "requested {n} samples from a dataset of {}",
            dataset.len()
        )));
    }
    let k = dataset.n_classes();
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, s) in dataset.samples.iter().enumerate() {
        by_class[s.label as usize].push(i);
    }

    let mut picked = Vec::with_capacity(n);
    for (class, indices) in by_class.iter_mut().enumerate() {
        let quota = n / k + usize::from(class < n % k);
        if quota > indices.len() {
            return Err(Error::InvalidArgument(format!(
                "class {class} has {} samples, quota is {quota}",
                indices.len()
            )));
        }
        let mut rng = derive_stream(seed, class as u64);
        rng.shuffle(indices);
        picked.extend(indices[..quota].iter().copied());
    }

    Ok(Dataset {
        samples: picked
            .into_iter()
            .map(|i| dataset.samples[i].clone())
            .collect(),
        meta: dataset.meta.clone(),
    })
}

/// Stratified disjoint split into two parts; fractions must sum to 1.
pub fn split(dataset: &Dataset, fractions: (f64, f64), seed: u64) -> Result<(Dataset, Dataset)> {
    let (f0, f1) = fractions;
    if f0 < 0.0 || f1 < 0.0 || (f0 + f1 - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "fractions ({f0}, {f1}) must be non-negative and sum to 1"
        )));
    }
    let k = dataset.n_classes();
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, s) in dataset.samples.iter().enumerate() {
        by_class[s.label as usize].push(i);
    }

    let mut first = Vec::new();
    let mut second = Vec::new();
    for (class, indices) in by_class.iter_mut().enumerate() {
        let mut rng = derive_stream(seed, class as u64);
        rng.shuffle(indices);
        let cut = ((indices.len() as f64) * f0).round() as usize;
        first.extend(indices[..cut].iter().copied());
        second.extend(indices[cut..].iter().copied());
    }

    let take = |idx: Vec<usize>| Dataset {
        samples: idx.into_iter().map(|i| dataset.samples[i].clone()).collect(),
        meta: dataset.meta.clone(),
    };
    Ok((take(first), take(second)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_3q(n: usize, seed: u64) -> Dataset {
        generate(&GenConfig::noiseless(3, n, seed)).unwrap()
    }

    #[test]
    fn balanced_generation_counts() {
        let d = tiny_3q(60, 7);
        assert_eq!(d.class_counts(), vec![10; 6]);
        assert_eq!(d.feature_len(), 216);
    }

    #[test]
    fn uneven_counts_differ_by_at_most_one() {
        let d = tiny_3q(20, 7);
        let counts = d.class_counts();
        let max = counts.iter().max().unwrap();
        let min = counts.iter().min().unwrap();
        assert!(max - min <= 1);
        assert_eq!(counts.iter().sum::<usize>(), 20);
    }

    #[test]
    fn generation_is_deterministic() {
        let a = tiny_3q(24, 11);
        let b = tiny_3q(24, 11);
        assert_eq!(a, b);
        let c = tiny_3q(24, 12);
        assert_ne!(a, c);
    }

    #[test]
    fn generation_is_worker_count_independent() {
        let serial = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| tiny_3q(30, 5));
        let parallel = rayon::ThreadPoolBuilder::new()
            .num_threads(8)
            .build()
            .unwrap()
            .install(|| tiny_3q(30, 5));
        assert_eq!(serial, parallel);
    }

    #[test]
    fn features_are_unit_interval() {
        let d = tiny_3q(12, 3);
        for s in &d.samples {
            assert!(s.features.iter().all(|&f| (0.0..=1.0).contains(&f)));
        }
    }

    #[test]
    fn subsample_quotas() {
        let d = tiny_3q(600, 4);
        let sub = subsample(&d, 100, 9).unwrap();
        assert_eq!(sub.class_counts(), vec![17, 17, 17, 17, 16, 16]);
    }

    #[test]
    fn subsample_full_size_is_a_permutation() {
        let d = tiny_3q(30, 4);
        let sub = subsample(&d, 30, 1).unwrap();
        let mut a: Vec<_> = d.samples.iter().map(|s| (s.label, s.features.clone())).collect();
        let mut b: Vec<_> = sub.samples.iter().map(|s| (s.label, s.features.clone())).collect();
        let key = |s: &(u16, Vec<f32>)| (s.0, s.1.iter().map(|f| f.to_bits()).collect::<Vec<_>>());
        a.sort_by_key(key);
        b.sort_by_key(key);
        assert_eq!(a, b);
    }

    #[test]
    fn subsample_rejects_oversized_requests() {
        let d = tiny_3q(12, 4);
        assert!(subsample(&d, 13, 0).is_err());
    }

    #[test]
    fn split_is_stratified_and_disjoint() {
        let d = tiny_3q(120, 8);
        let (a, b) = split(&d, (0.5, 0.5), 2).unwrap();
        assert_eq!(a.class_counts(), vec![10; 6]);
        assert_eq!(b.class_counts(), vec![10; 6]);
        // Union is the input multiset.
        let mut all: Vec<_> = a
            .samples
            .iter()
            .chain(&b.samples)
            .map(|s| (s.label, s.features.iter().map(|f| f.to_bits()).collect::<Vec<_>>()))
            .collect();
        let mut orig: Vec<_> = d
            .samples
            .iter()
            .map(|s| (s.label, s.features.iter().map(|f| f.to_bits()).collect::<Vec<_>>()))
            .collect();
        all.sort();
        orig.sort();
        assert_eq!(all, orig);
    }

    #[test]
    fn split_rejects_bad_fractions() {
        let d = tiny_3q(12, 8);
        assert!(split(&d, (0.7, 0.7), 0).is_err());
        assert!(split(&d, (-0.1, 1.1), 0).is_err());
    }

    #[test]
    fn generate_requires_one_sample_per_class() {
        assert!(generate(&GenConfig::noiseless(3, 5, 0)).is_err());
    }
}
