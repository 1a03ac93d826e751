//! MinHash signatures over shingle fingerprints.
//!
//! Row `i` uses `h_i(s) = mix64(s ^ key_i)`, where `key_0, key_1, ...` are
//! successive SplitMix64 outputs started from the signature seed. Since
//! `mix64` is a bijection, each row is a permutation of the 64-bit space.
//!
//! An empty set produces [`EMPTY_ROW`] in every row. Rows holding the
//! sentinel never count as matches, so an empty set has estimate 0 against
//! anything, including another empty set.

use serde::{Deserialize, Serialize};

use crate::error::{AuditError, Result};
use crate::hashing::{mix64, splitmix64};
use crate::textprep::ShingleSet;

pub const EMPTY_ROW: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinHashSignature {
    pub values: Vec<u64>,
    pub seed: u64,
}

impl MinHashSignature {
    pub fn hash_count(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty_set(&self) -> bool {
        self.values.iter().all(|&v| v == EMPTY_ROW)
    }
}

/// Precomputed row keys for a fixed `(hash_count, seed)`.
#[derive(Debug, Clone)]
pub struct MinHasher {
    keys: Vec<u64>,
    seed: u64,
}

impl MinHasher {
    pub fn new(hash_count: usize, seed: u64) -> Result<Self> {
        if hash_count < 1 {
            return Err(AuditError::invalid(
                "MinHash needs at least one hash function",
            ));
        }
        let mut state = seed;
        let keys = (0..hash_count).map(|_| splitmix64(&mut state)).collect();
        Ok(MinHasher { keys, seed })
    }

    pub fn row_hash(&self, row: usize, fingerprint: u64) -> u64 {
        mix64(fingerprint ^ self.keys[row])
    }

    pub fn sign(&self, set: &ShingleSet) -> MinHashSignature {
        let mut values = vec![EMPTY_ROW; self.keys.len()];
        for &fp in &set.hashes {
            for (v, &k) in values.iter_mut().zip(&self.keys) {
                let h = mix64(fp ^ k);
                if h < *v {
                    *v = h;
                }
            }
        }
        MinHashSignature {
            values,
            seed: self.seed,
        }
    }
}

pub fn minhash(set: &ShingleSet, hash_count: usize, seed: u64) -> Result<MinHashSignature> {
    Ok(MinHasher::new(hash_count, seed)?.sign(set))
}

/// Fraction of rows where both signatures hold the same non-sentinel minimum.
pub fn jaccard_estimate(a: &MinHashSignature, b: &MinHashSignature) -> Result<f64> {
    if a.hash_count() != b.hash_count() || a.seed != b.seed {
        return Err(AuditError::Incompatible(format!(
            "H={} seed={} vs H={} seed={}",
            a.hash_count(),
            a.seed,
            b.hash_count(),
            b.seed
        )));
    }
    if a.values.is_empty() {
        return Ok(0.0);
    }
    let matches = a
        .values
        .iter()
        .zip(&b.values)
        .filter(|(x, y)| x == y && **x != EMPTY_ROW)
        .count();
    Ok(matches as f64 / a.hash_count() as f64)
}
