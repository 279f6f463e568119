//! CART decision trees and the random forest built from them.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::spec::{Criterion, ForestParams, MaxFeatures, TreeParams};
use crate::matrix::Matrix;
use crate::seed;

#[derive(Debug, Clone, PartialEq)]
enum TreeNode {
    Leaf {
        /// Share of positive training rows that reached this leaf.
        positive: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// A binary classification tree. Rows with `x[feature] <= threshold` go left.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    nodes: Vec<TreeNode>,
}

fn impurity(criterion: Criterion, pos: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let p = pos as f64 / n as f64;
    match criterion {
        Criterion::Gini => 2.0 * p * (1.0 - p),
        Criterion::Entropy => {
            let h = |q: f64| if q > 0.0 { -q * q.log2() } else { 0.0 };
            h(p) + h(1.0 - p)
        }
    }
}

struct Grower<'a> {
    x: &'a Matrix,
    y: &'a [u8],
    max_depth: usize,
    min_samples_split: usize,
    criterion: Criterion,
    max_features: usize,
    /// Feature sampling stream; `None` examines every feature in order.
    rng: Option<ChaCha8Rng>,
    nodes: Vec<TreeNode>,
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    score: f64,
}

impl Grower<'_> {
    fn grow(&mut self, rows: &mut [usize], depth: usize) -> usize {
        let n = rows.len();
        let pos = rows.iter().filter(|&&r| self.y[r] == 1).count();
        let id = self.nodes.len();
        self.nodes.push(TreeNode::Leaf {
            positive: pos as f64 / n as f64,
        });
        if depth >= self.max_depth || n < self.min_samples_split || pos == 0 || pos == n {
            return id;
        }
        let Some(best) = self.best_split(rows, pos) else {
            return id;
        };
        let x = self.x;
        let (left, right): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&r| x.get(r, best.feature) <= best.threshold);
        let (mut left, mut right) = (left, right);
        let l = self.grow(&mut left, depth + 1);
        let r = self.grow(&mut right, depth + 1);
        self.nodes[id] = TreeNode::Split {
            feature: best.feature,
            threshold: best.threshold,
            left: l,
            right: r,
        };
        id
    }

    /// Lowest weighted child impurity over the candidate features. A split
    /// is taken even when it does not lower impurity (XOR-like data needs
    /// that); ties keep the first candidate found.
    fn best_split(&mut self, rows: &mut [usize], pos_total: usize) -> Option<BestSplit> {
        let f = self.x.cols();
        let mut features: Vec<usize> = (0..f).collect();
        if let Some(rng) = self.rng.as_mut() {
            features.shuffle(rng);
        }
        let n = rows.len();
        let mut best: Option<BestSplit> = None;
        let mut examined = 0;
        for &feat in &features {
            if examined >= self.max_features {
                break;
            }
            let x = self.x;
            rows.sort_by(|&a, &b| x.get(a, feat).total_cmp(&x.get(b, feat)).then(a.cmp(&b)));
            let lo = x.get(rows[0], feat);
            let hi = x.get(rows[n - 1], feat);
            if lo == hi {
                continue;
            }
            examined += 1;
            let mut pos_left = 0;
            for i in 0..n - 1 {
                pos_left += usize::from(self.y[rows[i]] == 1);
                let (a, b) = (x.get(rows[i], feat), x.get(rows[i + 1], feat));
                if a == b {
                    continue;
                }
                let nl = i + 1;
                let nr = n - nl;
                let score = nl as f64 * impurity(self.criterion, pos_left, nl)
                    + nr as f64 * impurity(self.criterion, pos_total - pos_left, nr);
                if best.as_ref().is_none_or(|bs| score < bs.score) {
                    let mid = a + (b - a) / 2.0;
                    let threshold = if mid < b { mid } else { a };
                    best = Some(BestSplit {
                        feature: feat,
                        threshold,
                        score,
                    });
                }
            }
        }
        best
    }
}

impl DecisionTree {
    pub fn fit(params: &TreeParams, x: &Matrix, y: &[u8], seed: u64) -> Self {
        let rows: Vec<usize> = (0..x.rows()).collect();
        let rng = (params.max_features != MaxFeatures::All).then(|| seed::rng(seed));
        Self::grow(x, y, rows, params.max_depth, params.min_samples_split, params.criterion, params.max_features, rng)
    }

    #[allow(clippy::too_many_arguments)]
    fn grow(
        x: &Matrix,
        y: &[u8],
        mut rows: Vec<usize>,
        max_depth: usize,
        min_samples_split: usize,
        criterion: Criterion,
        max_features: MaxFeatures,
        rng: Option<ChaCha8Rng>,
    ) -> Self {
        let mut g = Grower {
            x,
            y,
            max_depth,
            min_samples_split,
            criterion,
            max_features: max_features.resolve(x.cols()),
            rng,
            nodes: Vec::new(),
        };
        g.grow(&mut rows, 0);
        DecisionTree { nodes: g.nodes }
    }

    pub fn score(&self, row: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                TreeNode::Leaf { positive } => return positive,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => i = if row[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[TreeNode], i: usize) -> usize {
            match nodes[i] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }
}

/// Bagged trees; the score is the mean leaf share across trees.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomForest {
    trees: Vec<DecisionTree>,
}

/// Bootstrap sample for tree `tree` of a forest seeded with `seed`, plus the
/// stream the tree then uses for feature sampling.
pub(crate) fn bootstrap(seed: u64, tree: usize, n: usize) -> (Vec<usize>, ChaCha8Rng) {
    let mut rng = seed::rng(seed::derive(seed, tree as u64));
    let rows = (0..n).map(|_| rng.gen_range(0..n)).collect();
    (rows, rng)
}

impl RandomForest {
    /// Trees train in parallel; tree `t` draws from a stream derived from
    /// `(seed, t)`, so the result does not depend on thread scheduling.
    pub fn fit(params: &ForestParams, x: &Matrix, y: &[u8], seed: u64) -> Self {
        let trees = (0..params.n_trees)
            .into_par_iter()
            .map(|t| {
                let (rows, rng) = bootstrap(seed, t, x.rows());
                DecisionTree::grow(x, y, rows, params.max_depth, 2, params.criterion, params.max_features, Some(rng))
            })
            .collect();
        RandomForest { trees }
    }

    pub fn score(&self, row: &[f64]) -> f64 {
        self.trees.iter().map(|t| t.score(row)).sum::<f64>() / self.trees.len() as f64
    }

    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }
}
