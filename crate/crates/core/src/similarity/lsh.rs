//! Banded LSH over MinHash signatures.
//!
//! A signature of `H = bands * rows` values is cut into `bands` slices of
//! `rows` consecutive values. Each slice is fingerprinted (FNV-1a over the
//! little-endian bytes, seeded with the band index) and the document id is
//! dropped into that band's bucket. Two documents become candidates when
//! they share a bucket in at least one band.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::minhash::MinHashSignature;
use crate::error::{AuditError, Result};
use crate::hashing::fingerprint;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LshIndex {
    pub bands: usize,
    pub rows_per_band: usize,
    /// One map per band: bucket key to the ids hashed there.
    pub buckets: Vec<BTreeMap<u64, BTreeSet<String>>>,
}

/// Jaccard level around which the banding S-curve rises: `(1/b)^(1/r)`.
pub fn lsh_threshold(bands: usize, rows: usize) -> f64 {
    (1.0 / bands as f64).powf(1.0 / rows as f64)
}

pub fn band_key(band: usize, slice: &[u64]) -> u64 {
    let mut bytes = Vec::with_capacity(slice.len() * 8);
    for v in slice {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    fingerprint(&bytes, band as u64)
}

pub fn build_lsh(
    signatures: &BTreeMap<String, MinHashSignature>,
    bands: usize,
    rows: usize,
) -> Result<LshIndex> {
    if bands == 0 || rows == 0 {
        return Err(AuditError::invalid(
            "LSH needs at least one band and one row",
        ));
    }
    let mut seed = None;
    let mut buckets = vec![BTreeMap::<u64, BTreeSet<String>>::new(); bands];
    for (id, sig) in signatures {
        if sig.hash_count() != bands * rows {
            return Err(AuditError::invalid(format!(
                "bands x rows = {} but signature `{id}` has H = {}",
                bands * rows,
                sig.hash_count()
            )));
        }
        match seed {
            None => seed = Some(sig.seed),
            Some(s) if s != sig.seed => {
                return Err(AuditError::Incompatible(format!(
                    "signature `{id}` uses seed {} but the index uses {s}",
                    sig.seed
                )))
            }
            _ => {}
        }
        for (band, slice) in sig.values.chunks_exact(rows).enumerate() {
            buckets[band]
                .entry(band_key(band, slice))
                .or_default()
                .insert(id.clone());
        }
    }
    Ok(LshIndex {
        bands,
        rows_per_band: rows,
        buckets,
    })
}

impl LshIndex {
    /// All unordered pairs that share at least one bucket, as `(a, b)` with `a < b`.
    pub fn candidate_pairs(&self) -> BTreeSet<(String, String)> {
        let mut pairs = BTreeSet::new();
        for band in &self.buckets {
            for ids in band.values() {
                let ids: Vec<&String> = ids.iter().collect();
                for (i, a) in ids.iter().enumerate() {
                    for b in &ids[i + 1..] {
                        pairs.insert(((*a).clone(), (*b).clone()));
                    }
                }
            }
        }
        pairs
    }

    /// Number of bands in which `a` and `b` share a bucket.
    pub fn shared_bands(&self, a: &str, b: &str) -> usize {
        self.buckets
            .iter()
            .filter(|band| band.values().any(|ids| ids.contains(a) && ids.contains(b)))
            .count()
    }
}

pub fn candidate_pairs(index: &LshIndex) -> BTreeSet<(String, String)> {
    index.candidate_pairs()
}
