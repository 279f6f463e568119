use std::collections::HashMap;

use rand::Rng;

use super::EmbedError;
use crate::astflat::TokenSequence;

/// Exponent applied to token counts for the noise distribution.
pub const NOISE_POWER: f64 = 0.75;

/// Token vocabulary with the negative-sampling noise distribution.
///
/// Indices follow ascending token value, so the same corpus always yields
/// the same index assignment regardless of document order.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    tokens: Vec<i32>,
    counts: Vec<u64>,
    index: HashMap<i32, usize>,
    noise_cdf: Vec<f64>,
}

impl Vocabulary {
    /// Rebuilds a vocabulary from stored tokens and counts.
    pub fn from_counts(tokens: Vec<i32>, counts: Vec<u64>) -> Result<Self, EmbedError> {
        if tokens.is_empty() || tokens.len() != counts.len() {
            return Err(EmbedError::Format("vocabulary tokens and counts disagree".into()));
        }
        if counts.contains(&0) {
            return Err(EmbedError::Format("vocabulary count of zero".into()));
        }
        let index: HashMap<i32, usize> = tokens.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        if index.len() != tokens.len() {
            return Err(EmbedError::Format("duplicate vocabulary token".into()));
        }
        let weights: Vec<f64> = counts.iter().map(|&c| (c as f64).powf(NOISE_POWER)).collect();
        let total: f64 = weights.iter().sum();
        let mut acc = 0.0;
        let mut noise_cdf: Vec<f64> = weights
            .iter()
            .map(|w| {
                acc += w / total;
                acc
            })
            .collect();
        *noise_cdf.last_mut().expect("non-empty") = 1.0;
        Ok(Vocabulary {
            tokens,
            counts,
            index,
            noise_cdf,
        })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn index_of(&self, token: i32) -> Option<usize> {
        self.index.get(&token).copied()
    }

    pub fn token(&self, index: usize) -> i32 {
        self.tokens[index]
    }

    pub fn tokens(&self) -> &[i32] {
        &self.tokens
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, token: i32) -> Option<u64> {
        self.index_of(token).map(|i| self.counts[i])
    }

    /// Noise probability of the token at `index`.
    pub fn noise_probability(&self, index: usize) -> f64 {
        let prev = if index == 0 { 0.0 } else { self.noise_cdf[index - 1] };
        self.noise_cdf[index] - prev
    }

    pub fn sample_noise<R: Rng>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        self.noise_cdf.partition_point(|&c| c <= u).min(self.tokens.len() - 1)
    }
}

/// Counts every token in the corpus, scope markers included. Nothing is
/// dropped for rarity.
pub fn build_vocab(corpus: &[TokenSequence]) -> Result<Vocabulary, EmbedError> {
    if corpus.is_empty() {
        return Err(EmbedError::EmptyCorpus);
    }
    let mut counts: HashMap<i32, u64> = HashMap::new();
    for doc in corpus {
        if doc.tokens.is_empty() {
            return Err(EmbedError::EmptyDocument(doc.doc_id.clone()));
        }
        for &t in &doc.tokens {
            *counts.entry(t).or_default() += 1;
        }
    }
    let mut pairs: Vec<(i32, u64)> = counts.into_iter().collect();
    pairs.sort_unstable_by_key(|&(t, _)| t);
    let (tokens, counts) = pairs.into_iter().unzip();
    Vocabulary::from_counts(tokens, counts)
}
