use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::report::EvalReport;
use crate::dataset::FeatureMode;
use crate::learn::ROSTER;

/// Minimum, quartiles, median and maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiveNumber {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Quantile by linear interpolation between order statistics.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

impl FiveNumber {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        Some(FiveNumber {
            min: v[0],
            q1: quantile(&v, 0.25),
            median: quantile(&v, 0.5),
            q3: quantile(&v, 0.75),
            max: v[v.len() - 1],
        })
    }
}

fn roster_rank(name: &str) -> usize {
    ROSTER.iter().position(|r| *r == name).unwrap_or(ROSTER.len())
}

/// F-scores grouped by classifier then mode, classifiers in roster order.
fn group(reports: &[EvalReport]) -> BTreeMap<(usize, String), BTreeMap<FeatureMode, Vec<f64>>> {
    let mut g: BTreeMap<(usize, String), BTreeMap<FeatureMode, Vec<f64>>> = BTreeMap::new();
    for r in reports {
        let name = r.descriptor.classifier.name().to_owned();
        g.entry((roster_rank(&name), name))
            .or_default()
            .entry(r.descriptor.mode)
            .or_default()
            .push(r.f_score);
    }
    g
}

/// Classifier × feature-mode table. Each cell is the best mean F-score among
/// the runs in that cell; the bracketed count is the number of runs.
pub fn comparison_table(reports: &[EvalReport]) -> String {
    let groups = group(reports);
    let modes: Vec<FeatureMode> = FeatureMode::ALL
        .into_iter()
        .filter(|m| reports.iter().any(|r| r.descriptor.mode == *m))
        .collect();
    let mut s = format!("{:<12}", "classifier");
    for m in &modes {
        write!(s, " {:>16}", m.to_string()).expect("write to string");
    }
    s.push('\n');
    for ((_, name), by_mode) in &groups {
        write!(s, "{name:<12}").expect("write to string");
        for m in &modes {
            match by_mode.get(m) {
                Some(fs) => {
                    let best = fs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    write!(s, " {:>9.4} [{:>4}]", best, fs.len())
                }
                None => write!(s, " {:>16}", "-"),
            }
            .expect("write to string");
        }
        s.push('\n');
    }
    s
}

/// Five-number summary of F-scores for every (classifier, mode), taken over
/// all runs in the input.
pub fn five_number_table(reports: &[EvalReport]) -> String {
    let mut s = format!(
        "{:<12} {:<10} {:>5} {:>8} {:>8} {:>8} {:>8} {:>8}\n",
        "classifier", "mode", "runs", "min", "q1", "median", "q3", "max"
    );
    for ((_, name), by_mode) in group(reports) {
        for (mode, fs) in by_mode {
            let f = FiveNumber::of(&fs).expect("groups are non-empty");
            writeln!(
                s,
                "{:<12} {:<10} {:>5} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
                name,
                mode.to_string(),
                fs.len(),
                f.min,
                f.q1,
                f.median,
                f.q3,
                f.max
            )
            .expect("write to string");
        }
    }
    s
}

/// Both tables, separated by a blank line.
pub fn summary(reports: &[EvalReport]) -> String {
    format!("{}\n{}", comparison_table(reports), five_number_table(reports))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartiles_interpolate() {
        let f = FiveNumber::of(&[4.0, 1.0, 3.0, 2.0, 5.0]).unwrap();
        assert_eq!((f.min, f.q1, f.median, f.q3, f.max), (1.0, 2.0, 3.0, 4.0, 5.0));
        let f = FiveNumber::of(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!((f.q1, f.median, f.q3), (1.75, 2.5, 3.25));
        assert!(FiveNumber::of(&[]).is_none());
    }
}
