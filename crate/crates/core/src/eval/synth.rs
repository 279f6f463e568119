use rand::Rng;

use crate::astflat::{TokenSequence, SCOPE_EXIT};
use crate::dataset::Labels;
use crate::seed;

/// Node count of each generated tree, before any motif is inserted.
pub const SYNTH_NODES: std::ops::RangeInclusive<usize> = 16..=32;

/// Random documents in two classes. Each document is a random tree over the
/// kind codes `1..=vocab_size` that are not in `motif`, flattened with scope
/// markers. A class-1 document, with probability `p_motif`, also carries the
/// motif as a chain (each motif node the only child of the previous one)
/// hung under a random node. Ids are `synth00000`, `synth00001`, ...; the
/// first `n_per_class` documents are class 0.
pub fn synth_corpus(
    n_per_class: usize,
    vocab_size: usize,
    motif: &[i32],
    p_motif: f64,
    seed: u64,
) -> (Vec<TokenSequence>, Labels) {
    assert!((0.0..=1.0).contains(&p_motif), "p_motif outside [0, 1]");
    assert!(
        motif.iter().all(|&m| m >= 1 && m as usize <= vocab_size),
        "motif tokens must lie in 1..=vocab_size"
    );
    let background: Vec<i32> = (1..=vocab_size as i32).filter(|t| !motif.contains(t)).collect();
    assert!(!background.is_empty(), "motif covers the whole vocabulary");

    let mut rng = seed::rng(seed);
    let mut docs = Vec::with_capacity(2 * n_per_class);
    let mut labels = Labels::new();
    for i in 0..2 * n_per_class {
        let label = u8::from(i >= n_per_class);
        let n = rng.gen_range(SYNTH_NODES);
        let mut kinds: Vec<i32> = (0..n).map(|_| background[rng.gen_range(0..background.len())]).collect();
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
        for c in 1..n {
            children[rng.gen_range(0..c)].push(c);
        }
        if label == 1 && !motif.is_empty() && rng.gen_bool(p_motif) {
            let host = rng.gen_range(0..n);
            let slot = rng.gen_range(0..=children[host].len());
            let mut parent: Option<usize> = None;
            for &m in motif {
                let id = kinds.len();
                kinds.push(m);
                children.push(Vec::new());
                match parent {
                    None => children[host].insert(slot, id),
                    Some(p) => children[p].push(id),
                }
                parent = Some(id);
            }
        }
        let id = format!("synth{i:05}");
        docs.push(TokenSequence::new(id.clone(), emit(&kinds, &children)));
        labels.insert(id, label);
    }
    (docs, labels)
}

fn emit(kinds: &[i32], children: &[Vec<usize>]) -> Vec<i32> {
    let mut out = Vec::with_capacity(2 * kinds.len());
    // (node, next child index)
    let mut stack = vec![(0usize, 0usize)];
    out.push(kinds[0]);
    while let Some(top) = stack.last_mut() {
        let (node, next) = *top;
        if next < children[node].len() {
            top.1 += 1;
            let c = children[node][next];
            out.push(kinds[c]);
            stack.push((c, 0));
        } else {
            out.push(SCOPE_EXIT);
            stack.pop();
        }
    }
    out
}
