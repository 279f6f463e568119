use rand::seq::SliceRandom;
use rand::Rng;

use super::model::{Doc2VecHyper, Doc2VecModel, Method};
use super::sgd::{accumulate_pair, pair_loss};
use super::vocab::{build_vocab, Vocabulary};
use super::EmbedError;
use crate::astflat::TokenSequence;
use crate::matrix::Matrix;
use crate::seed;

/// Stream index reserved for loss evaluation draws.
const EVAL_STREAM: u64 = 0x6576_616c;

/// Training curve.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainStats {
    /// Mean pair loss over the whole corpus after each epoch. Every epoch is
    /// scored against the same noise draws, so the curve only moves when the
    /// parameters do.
    pub epoch_loss: Vec<f64>,
}

pub fn train(corpus: &[TokenSequence], hyper: &Doc2VecHyper) -> Result<Doc2VecModel, EmbedError> {
    train_impl(corpus, hyper, false).map(|(m, _)| m)
}

/// Single-threaded SGD over the corpus. Document rows follow corpus order.
///
/// Each epoch visits the documents in a seeded shuffle; within a document
/// positions are visited left to right. For every position the input vector
/// is the document vector (PV-DBOW) or the mean of the document vector and
/// the input vectors of up to `window` tokens on each side (PV-DM). The
/// input is scored against the true token and `negatives` noise draws (a
/// draw equal to the true token is skipped), then the accumulated input
/// step is added to every vector that formed the input.
pub fn train_with_stats(corpus: &[TokenSequence], hyper: &Doc2VecHyper) -> Result<(Doc2VecModel, TrainStats), EmbedError> {
    train_impl(corpus, hyper, true)
}

fn train_impl(corpus: &[TokenSequence], hyper: &Doc2VecHyper, track: bool) -> Result<(Doc2VecModel, TrainStats), EmbedError> {
    hyper.validate()?;
    let vocab = build_vocab(corpus)?;
    let dim = hyper.dim;
    let mut rng = seed::rng(hyper.seed);

    let init_scale = 0.5 / dim as f64;
    let mut init = |rows: usize| {
        let data = (0..rows * dim).map(|_| rng.gen_range(-init_scale..init_scale)).collect();
        Matrix::from_vec(rows, dim, data)
    };
    let mut doc_vecs = init(corpus.len());
    let mut word_in = match hyper.method {
        Method::PvDm => Some(init(vocab.len())),
        Method::PvDbow => None,
    };
    let mut word_out = Matrix::zeros(vocab.len(), dim);

    let encoded: Vec<Vec<usize>> = corpus
        .iter()
        .map(|d| d.tokens.iter().map(|&t| vocab.index_of(t).expect("vocab covers corpus")).collect())
        .collect();

    let mut order: Vec<usize> = (0..corpus.len()).collect();
    let total_steps = hyper.epochs * corpus.len();
    let mut step = 0;
    let mut input = vec![0.0; dim];
    let mut input_step = vec![0.0; dim];
    let mut epoch_loss = Vec::with_capacity(hyper.epochs);

    for _ in 0..hyper.epochs {
        order.shuffle(&mut rng);
        for &d in &order {
            let alpha = hyper.alpha_at(step, total_steps);
            step += 1;
            let doc = &encoded[d];
            for t in 0..doc.len() {
                let (lo, hi) = position_input(doc, t, doc_vecs.row(d), word_in.as_ref(), hyper.window, &mut input);
                input_step.iter_mut().for_each(|x| *x = 0.0);

                score_position(&vocab, &mut word_out, &input, &mut input_step, doc[t], hyper, alpha, &mut rng);

                for (x, s) in doc_vecs.row_mut(d).iter_mut().zip(&input_step) {
                    *x += s;
                }
                if let Some(wi) = word_in.as_mut() {
                    for j in (lo..=hi).filter(|&j| j != t) {
                        for (x, s) in wi.row_mut(doc[j]).iter_mut().zip(&input_step) {
                            *x += s;
                        }
                    }
                }
            }
        }
        if track {
            epoch_loss.push(corpus_loss(&vocab, &encoded, &doc_vecs, word_in.as_ref(), &word_out, hyper));
        }
    }

    let doc_ids = corpus.iter().map(|d| d.doc_id.clone()).collect();
    let model = Doc2VecModel::assemble(*hyper, vocab, word_in, doc_vecs, word_out, doc_ids)?;
    Ok((model, TrainStats { epoch_loss }))
}

/// Builds the input vector for position `t` of `doc` into `input` and
/// returns the context range `lo..=hi` (which includes `t` itself).
fn position_input(
    doc: &[usize],
    t: usize,
    doc_vec: &[f64],
    word_in: Option<&Matrix>,
    window: usize,
    input: &mut [f64],
) -> (usize, usize) {
    let (lo, hi) = (t.saturating_sub(window), (t + window).min(doc.len() - 1));
    input.copy_from_slice(doc_vec);
    if let Some(wi) = word_in {
        for j in (lo..=hi).filter(|&j| j != t) {
            for (x, w) in input.iter_mut().zip(wi.row(doc[j])) {
                *x += w;
            }
        }
        let n = (hi - lo + 1) as f64; // document vector plus hi-lo context tokens
        input.iter_mut().for_each(|x| *x /= n);
    }
    (lo, hi)
}

fn corpus_loss(
    vocab: &Vocabulary,
    encoded: &[Vec<usize>],
    doc_vecs: &Matrix,
    word_in: Option<&Matrix>,
    word_out: &Matrix,
    hyper: &Doc2VecHyper,
) -> f64 {
    let mut rng = seed::rng(seed::derive(hyper.seed, EVAL_STREAM));
    let mut input = vec![0.0; hyper.dim];
    let (mut total, mut pairs) = (0.0, 0usize);
    for (d, doc) in encoded.iter().enumerate() {
        for t in 0..doc.len() {
            position_input(doc, t, doc_vecs.row(d), word_in, hyper.window, &mut input);
            total += pair_loss(&input, word_out.row(doc[t]), true);
            pairs += 1;
            for _ in 0..hyper.negatives {
                let noise = vocab.sample_noise(&mut rng);
                if noise != doc[t] {
                    total += pair_loss(&input, word_out.row(noise), false);
                    pairs += 1;
                }
            }
        }
    }
    total / pairs as f64
}

#[allow(clippy::too_many_arguments)]
fn score_position<R: Rng>(
    vocab: &Vocabulary,
    word_out: &mut Matrix,
    input: &[f64],
    input_step: &mut [f64],
    target: usize,
    hyper: &Doc2VecHyper,
    alpha: f64,
    rng: &mut R,
) {
    accumulate_pair(input, word_out.row_mut(target), input_step, true, alpha);
    for _ in 0..hyper.negatives {
        let noise = vocab.sample_noise(rng);
        if noise != target {
            accumulate_pair(input, word_out.row_mut(noise), input_step, false, alpha);
        }
    }
}
