use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::canonical_classes;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassScore {
    pub precision: f64,
    pub recall: f64,
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub accuracy: f64,
    pub labels: Vec<String>,
    pub per_class: BTreeMap<String, ClassScore>,
    /// `confusion[true][predicted]`, indexed like `labels`.
    pub confusion: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fold_accuracies: Option<Vec<f64>>,
}

pub fn accuracy_from_confusion(confusion: &[Vec<usize>]) -> f64 {
    let total: usize = confusion.iter().flatten().sum();
    if total == 0 {
        return 0.0;
    }
    let trace: usize = (0..confusion.len()).map(|i| confusion[i][i]).sum();
    trace as f64 / total as f64
}

/// Scores predictions against ground truth. Classes never predicted get
/// precision 0.
pub fn evaluate(truth: &[String], pred: &[String]) -> Result<EvalReport> {
    if truth.len() != pred.len() {
        return Err(Error::invalid(format!(
            "{} labels but {} predictions",
            truth.len(),
            pred.len()
        )));
    }
    if truth.is_empty() {
        return Err(Error::invalid("nothing to evaluate"));
    }
    let mut all = truth.to_vec();
    all.extend_from_slice(pred);
    let labels = canonical_classes(&all);
    let index: BTreeMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let k = labels.len();
    let mut confusion = vec![vec![0usize; k]; k];
    for (t, p) in truth.iter().zip(pred) {
        confusion[index[t.as_str()]][index[p.as_str()]] += 1;
    }
    let per_class = labels
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let tp = confusion[i][i] as f64;
            let support: usize = confusion[i].iter().sum();
            let predicted: usize = confusion.iter().map(|row| row[i]).sum();
            let ratio = |den: usize| if den == 0 { 0.0 } else { tp / den as f64 };
            (
                l.clone(),
                ClassScore {
                    precision: ratio(predicted),
                    recall: ratio(support),
                    support,
                },
            )
        })
        .collect();
    Ok(EvalReport {
        accuracy: accuracy_from_confusion(&confusion),
        labels,
        per_class,
        confusion,
        fold_accuracies: None,
    })
}

impl EvalReport {
    /// Plain-text table: one line per class, then overall accuracy.
    pub fn summary(&self) -> String {
        let width = self.labels.iter().map(String::len).max().unwrap_or(5).max(5);
        let mut out = format!("{:<width$}  precision  recall  support\n", "class");
        for l in &self.labels {
            let s = &self.per_class[l];
            out += &format!(
                "{:<width$}  {:>9.4}  {:>6.4}  {:>7}\n",
                l, s.precision, s.recall, s.support
            );
        }
        out += &format!("accuracy {:.4}\n", self.accuracy);
        if let Some(f) = &self.fold_accuracies {
            let mean = f.iter().sum::<f64>() / f.len() as f64;
            out += &format!("folds {} mean {:.4}\n", f.len(), mean);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn report_fields() {
        let r = evaluate(&s(&["a", "a", "b", "b"]), &s(&["a", "b", "b", "b"])).unwrap();
        assert_eq!(r.confusion, vec![vec![1, 1], vec![0, 2]]);
        assert_eq!(r.accuracy, 0.75);
        assert_eq!(r.accuracy, accuracy_from_confusion(&r.confusion));
        assert_eq!(r.per_class["a"].precision, 1.0);
        assert_eq!(r.per_class["a"].recall, 0.5);
        assert!((r.per_class["b"].precision - 2.0 / 3.0).abs() < 1e-15);
        for (i, l) in r.labels.iter().enumerate() {
            assert_eq!(r.confusion[i].iter().sum::<usize>(), r.per_class[l].support);
        }
        assert!(r.summary().contains("accuracy 0.7500"));
    }

    #[test]
    fn mismatched_lengths() {
        assert!(evaluate(&s(&["a"]), &s(&[])).is_err());
    }
}
