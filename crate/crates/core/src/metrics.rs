//! Correlation metrics between predicted and subjective scores.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use thiserror::Error;

const VARIANCE_FLOOR: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("need at least 2 score pairs, got {0}")]
    InsufficientData(usize),
    #[error("prediction and ground-truth lists differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("non-finite score at position {0}")]
    NonFinite(usize),
    #[error("{path}: {message}")]
    Csv { path: String, message: String },
    #[error("{count} ids lack a counterpart: {}", .shown.join(", "))]
    Unmatched { count: usize, shown: Vec<String> },
}

/// Spearman rank correlation; tied values share their average rank.
pub fn srcc(predictions: &[f64], ground_truth: &[f64]) -> Result<f64, MetricsError> {
    validate(predictions, ground_truth)?;
    Ok(pearson(&average_ranks(predictions), &average_ranks(ground_truth)))
}

/// Pearson linear correlation.
pub fn plcc(predictions: &[f64], ground_truth: &[f64]) -> Result<f64, MetricsError> {
    validate(predictions, ground_truth)?;
    Ok(pearson(predictions, ground_truth))
}

fn validate(a: &[f64], b: &[f64]) -> Result<(), MetricsError> {
    if a.len() != b.len() {
        return Err(MetricsError::LengthMismatch(a.len(), b.len()));
    }
    if a.len() < 2 {
        return Err(MetricsError::InsufficientData(a.len()));
    }
    if let Some(i) = a.iter().zip(b).position(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(MetricsError::NonFinite(i));
    }
    Ok(())
}

/// 1-based ranks with ties replaced by the mean of their rank span.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // Positions start..end hold ranks start+1 ..= end.
        let rank = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Pearson correlation; 0 when either side has (near) zero variance.
fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx / n < VARIANCE_FLOOR || syy / n < VARIANCE_FLOOR {
        return 0.0;
    }
    (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
}

/// Reads an `id,score` CSV with a header row.
pub fn read_score_csv(path: impl AsRef<Path>) -> Result<Vec<(String, f64)>, MetricsError> {
    let path = path.as_ref();
    let err = |message: String| MetricsError::Csv {
        path: path.display().to_string(),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| err(e.to_string()))?;
    let headers = reader.headers().map_err(|e| err(e.to_string()))?.clone();
    if headers.len() != 2 || &headers[0] != "id" || &headers[1] != "score" {
        return Err(err(format!("expected header `id,score`, found {:?}", headers.iter().collect::<Vec<_>>())));
    }
    let mut rows = Vec::new();
    let mut seen = HashSet::new();
    for record in reader.records() {
        let record = record.map_err(|e| err(e.to_string()))?;
        let id = record[0].to_string();
        let score: f64 = record[1]
            .parse()
            .map_err(|_| err(format!("score {:?} for id {id:?} is not a number", &record[1])))?;
        if !seen.insert(id.clone()) {
            return Err(err(format!("duplicate id {id:?}")));
        }
        rows.push((id, score));
    }
    Ok(rows)
}

/// Pairs scores by id in prediction-file order. Every id must appear in
/// both lists; up to 10 offenders are named otherwise.
pub fn join_scores(
    predictions: &[(String, f64)],
    ground_truth: &[(String, f64)],
) -> Result<(Vec<f64>, Vec<f64>), MetricsError> {
    let gt: HashMap<&str, f64> = ground_truth.iter().map(|(id, s)| (id.as_str(), *s)).collect();
    let pred_ids: HashSet<&str> = predictions.iter().map(|(id, _)| id.as_str()).collect();
    let mut unmatched: Vec<String> = predictions
        .iter()
        .filter(|(id, _)| !gt.contains_key(id.as_str()))
        .map(|(id, _)| id.clone())
        .collect();
    unmatched.extend(
        ground_truth
            .iter()
            .filter(|(id, _)| !pred_ids.contains(id.as_str()))
            .map(|(id, _)| id.clone()),
    );
    if !unmatched.is_empty() {
        let count = unmatched.len();
        unmatched.truncate(10);
        return Err(MetricsError::Unmatched {
            count,
            shown: unmatched,
        });
    }
    Ok(predictions.iter().map(|(id, s)| (*s, gt[id.as_str()])).unzip())
}
