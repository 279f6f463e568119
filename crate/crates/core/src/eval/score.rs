use serde::{Deserialize, Serialize};

/// Precision, recall and F-score of the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub precision: f64,
    pub recall: f64,
    pub f_score: f64,
}

/// Harmonic mean of `p` and `r`, 0 when both are 0.
pub fn harmonic(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Scores from confusion counts; every zero denominator yields 0.
pub fn f_score(tp: u64, fp: u64, fn_: u64) -> Scores {
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    Scores {
        precision,
        recall,
        f_score: harmonic(precision, recall),
    }
}

/// `(tp, fp, fn)` for label 1.
pub fn confusion(truth: &[u8], pred: &[u8]) -> (u64, u64, u64) {
    assert_eq!(truth.len(), pred.len(), "truth and prediction lengths differ");
    let mut c = (0, 0, 0);
    for (&t, &p) in truth.iter().zip(pred) {
        match (t, p) {
            (1, 1) => c.0 += 1,
            (0, 1) => c.1 += 1,
            (1, 0) => c.2 += 1,
            _ => {}
        }
    }
    c
}

pub fn f_score_from_labels(truth: &[u8], pred: &[u8]) -> Scores {
    let (tp, fp, fn_) = confusion(truth, pred);
    f_score(tp, fp, fn_)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic(0.5, 0.5), 0.5);
        assert!((harmonic(0.58, 0.34) - 0.428_695_652).abs() < 1e-9);
        assert_eq!(f_score(0, 7, 3).f_score, 0.0);
        assert_eq!(f_score(0, 0, 0), Scores { precision: 0.0, recall: 0.0, f_score: 0.0 });
    }

    #[test]
    fn counts() {
        assert_eq!(confusion(&[1, 1, 0, 0, 1], &[1, 0, 1, 0, 1]), (2, 1, 1));
        let s = f_score(2, 1, 1);
        assert!((s.f_score - 2.0 / 3.0).abs() < 1e-15);
    }
}
