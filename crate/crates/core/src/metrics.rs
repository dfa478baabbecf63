//! Pixel-level segmentation evaluation.
//!
//! Everything derives from a 2x2 confusion matrix of pixel counts,
//! accumulated over whole images (not patches). Ratios are computed in
//! f64 from u64 counts.

use crate::error::{Error, Result};
use crate::tensor::Mask;

pub const BACKGROUND: usize = 0;
pub const LANE: usize = 1;

/// Pixel counts `n[i][j]`: true class `i` predicted as class `j`
/// (class 1 = lane).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub n: [[u64; 2]; 2],
}

impl ConfusionMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_counts(n00: u64, n01: u64, n10: u64, n11: u64) -> Self {
        ConfusionMatrix {
            n: [[n00, n01], [n10, n11]],
        }
    }

    /// Tally one prediction/truth pair into the matrix.
    pub fn accumulate(&mut self, prediction: &Mask, truth: &Mask) -> Result<()> {
        if (prediction.width, prediction.height) != (truth.width, truth.height) {
            return Err(Error::shape(format!(
                "metrics: accumulate: prediction {}x{} vs truth {}x{}",
                prediction.width, prediction.height, truth.width, truth.height
            )));
        }
        for (&p, &t) in prediction.data.iter().zip(&truth.data) {
            self.n[t as usize][p as usize] += 1;
        }
        Ok(())
    }

    /// Merge another matrix (order-independent).
    pub fn merge(&mut self, other: &ConfusionMatrix) {
        for i in 0..2 {
            for j in 0..2 {
                self.n[i][j] += other.n[i][j];
            }
        }
    }

    /// Total pixels of true class `i`.
    pub fn true_total(&self, i: usize) -> u64 {
        self.n[i][0] + self.n[i][1]
    }

    /// Total pixels predicted as class `j`.
    pub fn predicted_total(&self, j: usize) -> u64 {
        self.n[0][j] + self.n[1][j]
    }

    pub fn total(&self) -> u64 {
        self.n.iter().flatten().sum()
    }

    /// Derive the full metric report. Errors on an empty matrix.
    pub fn report(&self) -> Result<MetricReport> {
        let total = self.total();
        if total == 0 {
            return Err(Error::data("metrics: report: empty confusion matrix"));
        }

        // A class absent from both truth and predictions contributes a
        // defined 0 and is excluded from the means, flagged in the report.
        let absent: Vec<usize> = (0..2)
            .filter(|&i| self.true_total(i) == 0 && self.predicted_total(i) == 0)
            .collect();
        let present: Vec<usize> = (0..2).filter(|i| !absent.contains(i)).collect();

        let acc = |i: usize| -> f64 {
            let t = self.true_total(i);
            if t == 0 {
                0.0
            } else {
                self.n[i][i] as f64 / t as f64
            }
        };
        let iou = |i: usize| -> f64 {
            let denom = self.true_total(i) + self.predicted_total(i) - self.n[i][i];
            if denom == 0 {
                0.0
            } else {
                self.n[i][i] as f64 / denom as f64
            }
        };
        let recall = |i: usize| acc(i);
        let precision = |j: usize| -> f64 {
            let p = self.predicted_total(j);
            if p == 0 {
                0.0
            } else {
                self.n[j][j] as f64 / p as f64
            }
        };

        let diag = self.n[0][0] + self.n[1][1];
        let pixel_accuracy = diag as f64 / total as f64;
        let n_present = present.len() as f64;
        let mean_accuracy = present.iter().map(|&i| acc(i)).sum::<f64>() / n_present;
        let mean_iou = present.iter().map(|&i| iou(i)).sum::<f64>() / n_present;
        let fw_iou = (0..2)
            .map(|i| self.true_total(i) as f64 * iou(i))
            .sum::<f64>()
            / total as f64;

        // Dice on the lane class: 2|P n T| / (|P| + |T|).
        let dice_denom = self.predicted_total(LANE) + self.true_total(LANE);
        let dice = if dice_denom == 0 {
            0.0
        } else {
            2.0 * self.n[LANE][LANE] as f64 / dice_denom as f64
        };

        Ok(MetricReport {
            pixel_accuracy,
            mean_accuracy,
            mean_iou,
            fw_iou,
            dice,
            iou: [iou(0), iou(1)],
            recall: [recall(0), recall(1)],
            precision: [precision(0), precision(1)],
            absent_classes: absent,
        })
    }
}

/// Evaluation criteria; all values in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricReport {
    pub pixel_accuracy: f64,
    pub mean_accuracy: f64,
    pub mean_iou: f64,
    pub fw_iou: f64,
    pub dice: f64,
    pub iou: [f64; 2],
    pub recall: [f64; 2],
    pub precision: [f64; 2],
    /// Classes with no truth pixels and no predictions; their per-class
    /// terms are defined 0 and excluded from the means.
    pub absent_classes: Vec<usize>,
}

impl MetricReport {
    pub fn lane_iou(&self) -> f64 {
        self.iou[LANE]
    }

    /// Flat `key = value` text block.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("pixel_accuracy = {:.9}\n", self.pixel_accuracy));
        s.push_str(&format!("mean_accuracy = {:.9}\n", self.mean_accuracy));
        s.push_str(&format!("mean_iou = {:.9}\n", self.mean_iou));
        s.push_str(&format!("fw_iou = {:.9}\n", self.fw_iou));
        s.push_str(&format!("dice = {:.9}\n", self.dice));
        s.push_str(&format!("iou_background = {:.9}\n", self.iou[0]));
        s.push_str(&format!("iou_lane = {:.9}\n", self.iou[1]));
        s.push_str(&format!("recall_background = {:.9}\n", self.recall[0]));
        s.push_str(&format!("recall_lane = {:.9}\n", self.recall[1]));
        s.push_str(&format!("precision_background = {:.9}\n", self.precision[0]));
        s.push_str(&format!("precision_lane = {:.9}\n", self.precision[1]));
        if !self.absent_classes.is_empty() {
            s.push_str(&format!("absent_classes = {:?}\n", self.absent_classes));
        }
        s
    }

    pub fn all_in_unit_interval(&self) -> bool {
        let mut vals = vec![
            self.pixel_accuracy,
            self.mean_accuracy,
            self.mean_iou,
            self.fw_iou,
            self.dice,
        ];
        vals.extend_from_slice(&self.iou);
        vals.extend_from_slice(&self.recall);
        vals.extend_from_slice(&self.precision);
        vals.iter().all(|v| (0.0..=1.0).contains(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask(w: usize, h: usize, data: Vec<u8>) -> Mask {
        Mask::new(w, h, data).unwrap()
    }

    #[test]
    fn perfect_prediction_scores_one_everywhere() {
        let truth = mask(4, 1, vec![0, 1, 1, 0]);
        let mut cm = ConfusionMatrix::new();
        cm.accumulate(&truth, &truth).unwrap();
        let r = cm.report().unwrap();
        assert_eq!(r.pixel_accuracy, 1.0);
        assert_eq!(r.mean_accuracy, 1.0);
        assert_eq!(r.mean_iou, 1.0);
        assert_eq!(r.fw_iou, 1.0);
        assert_eq!(r.dice, 1.0);
        assert_eq!(r.recall, [1.0, 1.0]);
        assert_eq!(r.precision, [1.0, 1.0]);
        assert!(r.absent_classes.is_empty());
    }

    #[test]
    fn diagonal_grows_on_agreement_off_diagonal_on_disagreement() {
        let mut cm = ConfusionMatrix::new();
        let truth = mask(2, 1, vec![0, 1]);
        cm.accumulate(&truth, &truth).unwrap();
        assert_eq!(cm.n, [[1, 0], [0, 1]]);

        let mut cm = ConfusionMatrix::new();
        let all_lane = mask(3, 1, vec![1, 1, 1]);
        let all_bg = mask(3, 1, vec![0, 0, 0]);
        cm.accumulate(&all_lane, &all_bg).unwrap();
        assert_eq!(cm.n, [[0, 3], [0, 0]]);
    }

    #[test]
    fn hand_evaluated_example_matrix() {
        // n00=6, n01=1, n10=2, n11=3
        let cm = ConfusionMatrix::from_counts(6, 1, 2, 3);
        let r = cm.report().unwrap();
        assert!((r.pixel_accuracy - 9.0 / 12.0).abs() < 1e-15);
        assert!((r.iou[1] - 3.0 / 6.0).abs() < 1e-15);
        assert!((r.mean_iou - 7.0 / 12.0).abs() < 1e-15);
        assert!((r.dice - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn dice_iou_identity_on_lane_class() {
        let cm = ConfusionMatrix::from_counts(100, 7, 13, 42);
        let r = cm.report().unwrap();
        let iou = r.iou[1];
        assert!((r.dice - 2.0 * iou / (1.0 + iou)).abs() < 1e-15);
    }

    #[test]
    fn accumulate_matches_brute_force_tally() {
        use crate::seed;
        let mut rng = seed::stream(9, "metrics", 0);
        for _ in 0..20 {
            let data_p: Vec<u8> = (0..64).map(|_| (seed::uniform(&mut rng) < 0.3) as u8).collect();
            let data_t: Vec<u8> = (0..64).map(|_| (seed::uniform(&mut rng) < 0.3) as u8).collect();
            let pred = mask(8, 8, data_p.clone());
            let truth = mask(8, 8, data_t.clone());
            let mut cm = ConfusionMatrix::new();
            cm.accumulate(&pred, &truth).unwrap();
            let mut expect = [[0u64; 2]; 2];
            for (p, t) in data_p.iter().zip(&data_t) {
                expect[*t as usize][*p as usize] += 1;
            }
            assert_eq!(cm.n, expect);
        }
    }

    #[test]
    fn empty_matrix_rejected_and_shape_mismatch_rejected() {
        assert!(ConfusionMatrix::new().report().is_err());
        let a = mask(2, 2, vec![0; 4]);
        let b = mask(2, 1, vec![0; 2]);
        assert!(ConfusionMatrix::new().accumulate(&a, &b).is_err());
    }

    #[test]
    fn absent_lane_class_is_flagged_and_excluded_from_means() {
        let all_bg = mask(4, 1, vec![0; 4]);
        let mut cm = ConfusionMatrix::new();
        cm.accumulate(&all_bg, &all_bg).unwrap();
        let r = cm.report().unwrap();
        assert_eq!(r.absent_classes, vec![1]);
        assert_eq!(r.mean_iou, 1.0); // background only
        assert_eq!(r.iou[1], 0.0); // defined zero
        assert!(r.all_in_unit_interval());
    }

    #[test]
    fn flipping_false_negative_to_true_positive_is_monotone() {
        let before = ConfusionMatrix::from_counts(50, 5, 10, 20).report().unwrap();
        let after = ConfusionMatrix::from_counts(50, 5, 9, 21).report().unwrap();
        assert!(after.recall[1] >= before.recall[1]);
        assert!(after.iou[1] >= before.iou[1]);
        assert!(after.dice >= before.dice);
    }

    #[test]
    fn lane_iou_invariant_under_duplicated_correct_background() {
        let base = ConfusionMatrix::from_counts(60, 4, 7, 29);
        let duplicated = ConfusionMatrix::from_counts(60 * 5, 4, 7, 29);
        let a = base.report().unwrap();
        let b = duplicated.report().unwrap();
        assert!((a.iou[1] - b.iou[1]).abs() < 1e-15);
    }

    #[test]
    fn merge_is_order_independent() {
        let a = ConfusionMatrix::from_counts(1, 2, 3, 4);
        let b = ConfusionMatrix::from_counts(10, 20, 30, 40);
        let mut ab = a;
        ab.merge(&b);
        let mut ba = b;
        ba.merge(&a);
        assert_eq!(ab, ba);
    }
}
