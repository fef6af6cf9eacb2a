//! Failure analysis over a [`ValidationReport`].

use std::fmt::Write;

use super::ValidationReport;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct FailureDiagnosis {
    /// Recorded failures the statistics are computed over.
    pub failures: usize,
    /// `differing_bit_positions[i]`: failures whose output differs at bit `i`
    /// (cases without parseable output are not counted).
    pub differing_bit_positions: Vec<usize>,
    /// `input_bit_correlations[j]`: fraction of failures with input bit `j` set.
    pub input_bit_correlations: Vec<f64>,
    /// Input bits that stand out from the 0.5 baseline and from the mean of
    /// all input bits by more than [`FailureDiagnosis::threshold`].
    pub flagged_input_bits: Vec<usize>,
    /// `4 / sqrt(failures)`.
    pub threshold: f64,
    pub summary: String,
}

/// Per-output-bit mismatch histogram and per-input-bit correlation with
/// failure.
///
/// A bit is flagged when its correlation differs from 0.5 by more than
/// `4/√F` (roughly a 4σ binomial bound for `F` failures) and also differs
/// from the average correlation of all input bits by the same margin. The
/// second condition keeps failures confined to a few fixed inputs (say, the
/// all-zero input) from flagging every bit at once.
pub fn analyze_failed_test(report: &ValidationReport) -> Result<FailureDiagnosis> {
    let cases = &report.failed;
    if cases.is_empty() {
        return Err(Error::NoFailures);
    }
    let f = cases.len();
    let mut histogram = vec![0usize; report.output_length];
    let mut ones = vec![0usize; report.input_length];
    for case in cases {
        for (j, bit) in case.input.iter().enumerate() {
            ones[j] += bit as usize;
        }
        if let Some(got) = case.got.as_ref().filter(|g| g.len() == case.expected.len()) {
            for (i, (a, b)) in got.iter().zip(case.expected.iter()).enumerate() {
                histogram[i] += (a != b) as usize;
            }
        }
    }
    let correlations: Vec<f64> = ones.iter().map(|&c| c as f64 / f as f64).collect();
    let mean = correlations.iter().sum::<f64>() / correlations.len().max(1) as f64;
    let threshold = 4.0 / (f as f64).sqrt();
    let flagged: Vec<usize> = correlations
        .iter()
        .enumerate()
        .filter(|(_, &c)| (c - 0.5).abs() > threshold && (c - mean).abs() > threshold)
        .map(|(j, _)| j)
        .collect();

    let mut summary = format!(
        "{f} failed cases analyzed ({} total failures in {} cases)",
        report.failed_count, report.total
    );
    if flagged.is_empty() {
        summary.push_str("; no input bit correlates with failure");
    }
    for &j in &flagged {
        let _ = write!(
            summary,
            "; input bit {j} is set in {:.1}% of failures",
            100.0 * correlations[j]
        );
    }
    let with_output: usize = cases.iter().filter(|c| c.got.is_some()).count();
    if with_output > 0 {
        let hot: Vec<String> = histogram
            .iter()
            .enumerate()
            .filter(|(_, &h)| h * 2 > with_output)
            .map(|(i, _)| i.to_string())
            .collect();
        if !hot.is_empty() {
            let _ = write!(
                summary,
                "; output bits differing in most failures: {}",
                hot.join(", ")
            );
        }
    }
    Ok(FailureDiagnosis {
        failures: f,
        differing_bit_positions: histogram,
        input_bit_correlations: correlations,
        flagged_input_bits: flagged,
        threshold,
        summary,
    })
}
