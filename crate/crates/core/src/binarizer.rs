//! Blockwise Pearson correlation of count series, thresholded into bits.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kmerstats::{CountSeries, Symbol};

pub const DEFAULT_THRESHOLD: f64 = 0.50;
pub const DEFAULT_BLOCK_LENGTH: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Argument {
    First,
    Second,
}

impl fmt::Display for Argument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Argument::First => "first",
            Argument::Second => "second",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BinarizeError {
    #[error("vectors differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("correlation needs at least 2 points (got {0})")]
    TooFewPoints(usize),
    #[error("{0} argument has zero variance")]
    ZeroVariance(Argument),
    #[error("zero-variance block in pair {pair} of series {symbol}")]
    ZeroVarianceBlock { symbol: String, pair: usize },
    #[error("series {symbol} yields {blocks} blocks of {block_length}; need at least 2")]
    TooFewBlocks { symbol: String, blocks: usize, block_length: usize },
    #[error("invalid correlation policy: {0}")]
    InvalidPolicy(String),
}

/// How consecutive blocks are paired for correlation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Pairing {
    /// (1,2), (2,3), ..., (B-1,B)
    Chain,
    /// chain plus (B,1)
    #[default]
    Cyclic,
    /// (1,2), (3,4), ...
    Disjoint,
}

impl Pairing {
    pub fn bit_count(self, blocks: usize) -> usize {
        match self {
            Pairing::Chain => blocks.saturating_sub(1),
            Pairing::Cyclic => blocks,
            Pairing::Disjoint => blocks / 2,
        }
    }

    /// 0-based block index pairs, in emission order.
    pub fn pairs(self, blocks: usize) -> Vec<(usize, usize)> {
        match self {
            Pairing::Chain => (1..blocks).map(|k| (k - 1, k)).collect(),
            Pairing::Cyclic => (0..blocks).map(|k| (k, (k + 1) % blocks)).collect(),
            Pairing::Disjoint => (0..blocks / 2).map(|k| (2 * k, 2 * k + 1)).collect(),
        }
    }
}

impl FromStr for Pairing {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "chain" => Ok(Pairing::Chain),
            "cyclic" => Ok(Pairing::Cyclic),
            "disjoint" => Ok(Pairing::Disjoint),
            other => Err(format!("unknown pairing {other:?} (expected chain, cyclic or disjoint)")),
        }
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pairing::Chain => "chain",
            Pairing::Cyclic => "cyclic",
            Pairing::Disjoint => "disjoint",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ZeroVariancePolicy {
    /// Emit 0 and flag the position.
    #[default]
    AsZeroBit,
    Error,
}

impl FromStr for ZeroVariancePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "as_zero_bit" | "as-zero-bit" => Ok(ZeroVariancePolicy::AsZeroBit),
            "error" => Ok(ZeroVariancePolicy::Error),
            other => Err(format!("unknown zero-variance policy {other:?} (expected as_zero_bit or error)")),
        }
    }
}

impl fmt::Display for ZeroVariancePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ZeroVariancePolicy::AsZeroBit => "as_zero_bit",
            ZeroVariancePolicy::Error => "error",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationPolicy {
    pub threshold: f64,
    pub block_length: usize,
    pub pairing: Pairing,
    pub zero_variance: ZeroVariancePolicy,
}

impl Default for CorrelationPolicy {
    fn default() -> Self {
        CorrelationPolicy {
            threshold: DEFAULT_THRESHOLD,
            block_length: DEFAULT_BLOCK_LENGTH,
            pairing: Pairing::Cyclic,
            zero_variance: ZeroVariancePolicy::AsZeroBit,
        }
    }
}

impl CorrelationPolicy {
    pub fn validate(&self) -> Result<(), BinarizeError> {
        if !(self.threshold > 0.0 && self.threshold <= 1.0) {
            return Err(BinarizeError::InvalidPolicy(format!("threshold {} not in (0, 1]", self.threshold)));
        }
        if self.block_length < 2 {
            return Err(BinarizeError::InvalidPolicy(format!("block length {} below 2", self.block_length)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BitString {
    pub symbol: Symbol,
    pub bits: Vec<u8>,
    /// One flag per bit; set where a block had zero variance.
    pub zero_variance: Vec<bool>,
    /// Correlation behind each bit; `None` where undefined.
    pub correlations: Vec<Option<f64>>,
    pub policy: CorrelationPolicy,
    pub source_series_length: usize,
}

impl BitString {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// 1-based positions of zero-variance bits.
    pub fn zero_variance_positions(&self) -> Vec<usize> {
        self.zero_variance.iter().enumerate().filter(|(_, f)| **f).map(|(i, _)| i + 1).collect()
    }
}

/// Sample Pearson correlation via a single-pass co-moment update.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, BinarizeError> {
    if x.len() != y.len() {
        return Err(BinarizeError::LengthMismatch { left: x.len(), right: y.len() });
    }
    if x.len() < 2 {
        return Err(BinarizeError::TooFewPoints(x.len()));
    }
    let (mut mean_x, mut mean_y) = (0.0, 0.0);
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (k, (&xi, &yi)) in x.iter().zip(y).enumerate() {
        let n = (k + 1) as f64;
        let dx = xi - mean_x;
        let dy = yi - mean_y;
        mean_x += dx / n;
        mean_y += dy / n;
        sxx += dx * (xi - mean_x);
        syy += dy * (yi - mean_y);
        sxy += dx * (yi - mean_y);
    }
    finish(sxx, syy, sxy)
}

/// Pearson correlation of integer counts with exact integer moments, so a
/// correlation that is exactly a simple rational (such as 1/2) is reported exactly.
pub fn pearson_counts(x: &[u32], y: &[u32]) -> Result<f64, BinarizeError> {
    if x.len() != y.len() {
        return Err(BinarizeError::LengthMismatch { left: x.len(), right: y.len() });
    }
    if x.len() < 2 {
        return Err(BinarizeError::TooFewPoints(x.len()));
    }
    let n = x.len() as i128;
    let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0i128, 0i128, 0i128, 0i128, 0i128);
    for (&a, &b) in x.iter().zip(y) {
        let (a, b) = (a as i128, b as i128);
        sx += a;
        sy += b;
        sxx += a * a;
        syy += b * b;
        sxy += a * b;
    }
    // n² times the centered (co)moments
    let cxx = n * sxx - sx * sx;
    let cyy = n * syy - sy * sy;
    let cxy = n * sxy - sx * sy;
    if cxx == 0 {
        return Err(BinarizeError::ZeroVariance(Argument::First));
    }
    if cyy == 0 {
        return Err(BinarizeError::ZeroVariance(Argument::Second));
    }
    // reduced by the gcd: inputs scaled by a common factor give identical operands
    let g = gcd(gcd(cxx, cyy), cxy.abs());
    let (cxx, cyy, cxy) = (cxx / g, cyy / g, cxy / g);
    let r = cxy as f64 / ((cxx as f64) * (cyy as f64)).sqrt();
    Ok(r.clamp(-1.0, 1.0))
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn finish(sxx: f64, syy: f64, sxy: f64) -> Result<f64, BinarizeError> {
    if sxx == 0.0 {
        return Err(BinarizeError::ZeroVariance(Argument::First));
    }
    if syy == 0.0 {
        return Err(BinarizeError::ZeroVariance(Argument::Second));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// 1 iff |r| ≥ threshold.
pub fn threshold_bit(r: f64, policy: &CorrelationPolicy) -> u8 {
    u8::from(r.abs() >= policy.threshold)
}

pub fn block_binarize(series: &CountSeries, policy: &CorrelationPolicy) -> Result<BitString, BinarizeError> {
    policy.validate()?;
    let blocks: Vec<&[u32]> = series.counts.chunks_exact(policy.block_length).collect();
    if blocks.len() < 2 {
        return Err(BinarizeError::TooFewBlocks {
            symbol: series.symbol.to_string(),
            blocks: blocks.len(),
            block_length: policy.block_length,
        });
    }
    let pairs = policy.pairing.pairs(blocks.len());
    let mut bits = Vec::with_capacity(pairs.len());
    let mut zero_variance = Vec::with_capacity(pairs.len());
    let mut correlations = Vec::with_capacity(pairs.len());
    for (k, &(i, j)) in pairs.iter().enumerate() {
        match pearson_counts(blocks[i], blocks[j]) {
            Ok(r) => {
                bits.push(threshold_bit(r, policy));
                zero_variance.push(false);
                correlations.push(Some(r));
            }
            Err(BinarizeError::ZeroVariance(_)) => match policy.zero_variance {
                ZeroVariancePolicy::AsZeroBit => {
                    bits.push(0);
                    zero_variance.push(true);
                    correlations.push(None);
                }
                ZeroVariancePolicy::Error => {
                    return Err(BinarizeError::ZeroVarianceBlock { symbol: series.symbol.to_string(), pair: k + 1 })
                }
            },
            Err(other) => return Err(other),
        }
    }
    Ok(BitString {
        symbol: series.symbol,
        bits,
        zero_variance,
        correlations,
        policy: *policy,
        source_series_length: series.counts.len(),
    })
}

/// `symbol,bit_index,bit,zero_variance_flag` rows in input order.
pub fn bits_to_csv(bitstrings: &[BitString]) -> String {
    let mut out = String::from("symbol,bit_index,bit,zero_variance_flag\n");
    for b in bitstrings {
        for (i, (bit, zv)) in b.bits.iter().zip(&b.zero_variance).enumerate() {
            out.push_str(&format!("{},{},{},{}\n", b.symbol, i + 1, bit, u8::from(*zv)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kmerstats::Tiling;
    use crate::seqio::Base;

    fn series(counts: Vec<u32>) -> CountSeries {
        CountSeries {
            symbol: Symbol::Base(Base::A),
            counts,
            window_length: 10,
            tiling: Tiling::Disjoint,
            source_id: "t".into(),
        }
    }

    fn policy(block_length: usize, pairing: Pairing) -> CorrelationPolicy {
        CorrelationPolicy { block_length, pairing, ..CorrelationPolicy::default() }
    }

    #[test]
    fn pearson_examples() {
        assert_eq!(pearson(&[1., 2., 3., 4., 5.], &[2., 4., 6., 8., 10.]).unwrap(), 1.0);
        assert_eq!(pearson(&[1., 2., 3.], &[3., 2., 1.]).unwrap(), -1.0);
        assert_eq!(pearson(&[1., 2., 3.], &[1., 3., 2.]).unwrap(), 0.5);
        assert_eq!(pearson(&[1., 1., 1.], &[1., 2., 3.]), Err(BinarizeError::ZeroVariance(Argument::First)));
        assert_eq!(pearson(&[1., 2., 3.], &[4., 4., 4.]), Err(BinarizeError::ZeroVariance(Argument::Second)));
        assert_eq!(pearson(&[1., 2.], &[1.]), Err(BinarizeError::LengthMismatch { left: 2, right: 1 }));
        assert_eq!(pearson(&[1.], &[1.]), Err(BinarizeError::TooFewPoints(1)));
    }

    #[test]
    fn pearson_counts_examples() {
        assert_eq!(pearson_counts(&[1, 2, 3, 4, 5], &[2, 4, 6, 8, 10]).unwrap(), 1.0);
        assert_eq!(pearson_counts(&[1, 2, 3], &[3, 2, 1]).unwrap(), -1.0);
        assert_eq!(pearson_counts(&[1, 2, 3], &[1, 3, 2]).unwrap(), 0.5);
        assert_eq!(pearson_counts(&[7, 7, 7], &[1, 2, 3]), Err(BinarizeError::ZeroVariance(Argument::First)));
    }

    #[test]
    fn threshold_examples() {
        let p = CorrelationPolicy::default();
        assert_eq!(threshold_bit(0.49, &p), 0);
        assert_eq!(threshold_bit(0.50, &p), 1);
        assert_eq!(threshold_bit(-0.50, &p), 1);
        assert_eq!(threshold_bit(-0.73, &p), 1);
        assert_eq!(threshold_bit(0.0, &p), 0);
    }

    #[test]
    fn bit_counts_per_pairing() {
        let s = series((0..15).map(|i| (i * 7 % 5) as u32).collect());
        assert_eq!(block_binarize(&s, &policy(5, Pairing::Chain)).unwrap().len(), 2);
        assert_eq!(block_binarize(&s, &policy(5, Pairing::Cyclic)).unwrap().len(), 3);
        assert_eq!(block_binarize(&s, &policy(5, Pairing::Disjoint)).unwrap().len(), 1);
        let s = series((0..175).map(|i| (i % 4) as u32).collect());
        assert_eq!(block_binarize(&s, &CorrelationPolicy::default()).unwrap().len(), 35);
    }

    #[test]
    fn chain_example_bits() {
        let s = series(vec![1, 2, 3, 2, 4, 6, 3, 2, 1]);
        let b = block_binarize(&s, &policy(3, Pairing::Chain)).unwrap();
        assert_eq!(b.bits, vec![1, 1]);
        assert_eq!(b.correlations, vec![Some(1.0), Some(-1.0)]);
    }

    #[test]
    fn zero_variance_handling() {
        let s = series(vec![1, 2, 3, 4, 4, 4, 1, 2, 3]);
        let b = block_binarize(&s, &policy(3, Pairing::Chain)).unwrap();
        assert_eq!(b.bits, vec![0, 0]);
        assert_eq!(b.zero_variance_positions(), vec![1, 2]);
        let strict = CorrelationPolicy { zero_variance: ZeroVariancePolicy::Error, ..policy(3, Pairing::Chain) };
        assert!(matches!(block_binarize(&s, &strict), Err(BinarizeError::ZeroVarianceBlock { pair: 1, .. })));
    }

    #[test]
    fn too_few_blocks_and_bad_policy() {
        let s = series(vec![1, 2, 3, 4, 5, 6, 7]);
        assert!(matches!(
            block_binarize(&s, &policy(5, Pairing::Chain)),
            Err(BinarizeError::TooFewBlocks { blocks: 1, .. })
        ));
        assert!(block_binarize(&s, &policy(1, Pairing::Chain)).is_err());
        let p = CorrelationPolicy { threshold: 0.0, ..CorrelationPolicy::default() };
        assert!(p.validate().is_err());
        let p = CorrelationPolicy { threshold: 1.5, ..CorrelationPolicy::default() };
        assert!(p.validate().is_err());
    }

    #[test]
    fn csv_layout() {
        let s = series(vec![1, 2, 3, 2, 4, 6, 3, 3, 3]);
        let b = block_binarize(&s, &policy(3, Pairing::Chain)).unwrap();
        assert_eq!(bits_to_csv(&[b]), "symbol,bit_index,bit,zero_variance_flag\nA,1,1,0\nA,2,0,1\n");
    }
}
