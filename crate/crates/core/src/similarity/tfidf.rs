//! TF-IDF with raw term counts and smoothed inverse document frequency:
//! `idf(t) = ln((1 + N) / (1 + df(t))) + 1`.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{AuditError, Result};
use crate::scalar::Real;
use crate::textprep::TokenStream;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfIdfModel<F> {
    /// Term to column index; indices follow lexicographic term order.
    pub vocabulary: BTreeMap<String, usize>,
    pub idf: Vec<F>,
    pub doc_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfIdfVector<F> {
    pub weights: BTreeMap<usize, F>,
    pub l2_norm: F,
}

impl<F: Real> TfIdfVector<F> {
    pub fn is_zero(&self) -> bool {
        self.l2_norm == F::zero()
    }
}

pub fn fit_tfidf<F: Real>(corpus: &[TokenStream]) -> Result<TfIdfModel<F>> {
    if corpus.is_empty() {
        return Err(AuditError::invalid("cannot fit TF-IDF on an empty corpus"));
    }
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for doc in corpus {
        let unique: HashSet<&str> = doc.tokens.iter().map(String::as_str).collect();
        for t in unique {
            *df.entry(t).or_default() += 1;
        }
    }
    let n = F::from_count(corpus.len());
    let mut vocabulary = BTreeMap::new();
    let mut idf = Vec::with_capacity(df.len());
    for (i, (term, count)) in df.into_iter().enumerate() {
        vocabulary.insert(term.to_owned(), i);
        let ratio = (F::one() + n) / (F::one() + F::from_count(count));
        idf.push(ratio.ln() + F::one());
    }
    Ok(TfIdfModel {
        vocabulary,
        idf,
        doc_count: corpus.len(),
    })
}

impl<F: Real> TfIdfModel<F> {
    pub fn idf_of(&self, term: &str) -> Option<F> {
        self.vocabulary.get(term).map(|&i| self.idf[i])
    }

    /// `weight(t) = count(t) * idf(t)`; terms outside the vocabulary are ignored.
    pub fn vectorize(&self, doc: &TokenStream) -> TfIdfVector<F> {
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for t in &doc.tokens {
            if let Some(&i) = self.vocabulary.get(t) {
                *counts.entry(i).or_default() += 1;
            }
        }
        let weights: BTreeMap<usize, F> = counts
            .into_iter()
            .map(|(i, c)| (i, F::from_count(c) * self.idf[i]))
            .collect();
        let l2_norm = weights.values().map(|&w| w * w).sum::<F>().sqrt();
        TfIdfVector { weights, l2_norm }
    }
}

/// Cosine of the angle between two vectors of the same model, in `[0, 1]`.
/// Zero vectors have cosine 0 with everything.
pub fn cosine<F: Real>(a: &TfIdfVector<F>, b: &TfIdfVector<F>) -> F {
    if a.is_zero() || b.is_zero() {
        return F::zero();
    }
    // merge join over the sorted supports; the summation order is the same
    // whichever argument comes first, so cosine(a, b) == cosine(b, a) exactly
    let mut dot = F::zero();
    let mut xs = a.weights.iter().peekable();
    let mut ys = b.weights.iter().peekable();
    while let (Some(&(i, &w)), Some(&(j, &v))) = (xs.peek(), ys.peek()) {
        match i.cmp(j) {
            std::cmp::Ordering::Less => {
                xs.next();
            }
            std::cmp::Ordering::Greater => {
                ys.next();
            }
            std::cmp::Ordering::Equal => {
                dot = dot + w * v;
                xs.next();
                ys.next();
            }
        }
    }
    (dot / (a.l2_norm * b.l2_norm)).max(F::zero()).min(F::one())
}
