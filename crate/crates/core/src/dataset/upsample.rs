use rand::Rng;

use super::table::FeatureTable;
use super::DataError;
use crate::seed;

/// Number of minority rows to add so the minority reaches
/// `round(ratio × majority)`; zero when it already does.
pub fn upsample_target(minority: usize, majority: usize, ratio: f64) -> usize {
    let target = (ratio * majority as f64).round() as usize;
    target.saturating_sub(minority)
}

/// Source rows (indices into `labels`) to duplicate, in draw order.
pub fn upsample_draws(labels: &[u8], ratio: f64, seed: u64) -> Result<Vec<usize>, DataError> {
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(DataError::InvalidRatio(ratio));
    }
    let pos: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == 1).collect();
    let neg: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == 0).collect();
    if pos.is_empty() || neg.is_empty() {
        return Err(DataError::SingleClass);
    }
    let (minority, majority) = if pos.len() <= neg.len() { (pos, neg) } else { (neg, pos) };
    let extra = upsample_target(minority.len(), majority.len(), ratio);
    let mut rng = seed::rng(seed);
    Ok((0..extra).map(|_| minority[rng.gen_range(0..minority.len())]).collect())
}

/// Grows the minority class by sampling its rows with replacement until it
/// holds `round(ratio × majority)` rows. Original rows come first, in order,
/// followed by the duplicates.
pub fn upsample(table: &FeatureTable, ratio: f64, seed: u64) -> Result<FeatureTable, DataError> {
    let draws = upsample_draws(table.labels(), ratio, seed)?;
    let idx: Vec<usize> = (0..table.len()).chain(draws).collect();
    Ok(table.select_rows(&idx))
}
