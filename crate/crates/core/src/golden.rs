//! The published 7-vertex reference instance, plus a sequence engineered so the
//! default algorithms pipeline reproduces it.

use crate::graphkit::AdjacencyMatrix;
use crate::kmerstats::Doublet;
use crate::seqio::{Sequence, Strand};

/// Reference 7×7 adjacency matrix; columns are AA, AT, AG, AC, TA, TT, TG.
pub const REFERENCE_ROWS: [[u8; 7]; 7] = [
    [1, 0, 0, 1, 0, 0, 0],
    [1, 1, 0, 0, 1, 1, 0],
    [0, 1, 1, 1, 0, 0, 0],
    [0, 1, 0, 0, 1, 0, 0],
    [0, 1, 0, 0, 1, 1, 0],
    [0, 1, 1, 1, 0, 1, 0],
    [1, 1, 0, 1, 0, 1, 1],
];

/// Hamiltonian path through [`REFERENCE_ROWS`].
pub const REFERENCE_PATH: [usize; 7] = [7, 1, 4, 2, 5, 6, 3];

pub fn reference_matrix() -> AdjacencyMatrix {
    let rows: Vec<&[u8]> = REFERENCE_ROWS.iter().map(|r| &r[..]).collect();
    AdjacencyMatrix::from_rows(&rows).expect("reference matrix is well-formed")
}

/// Two 0/1 blocks of five window counts: identical blocks correlate at 1,
/// the two different ones at 1/6. A doublet's series walks between them,
/// staying on a 1-bit and switching on a 0-bit.
const BLOCK_SAME: [u32; 5] = [1, 1, 0, 0, 0];
const BLOCK_OTHER: [u32; 5] = [1, 0, 1, 0, 0];

const ENGINEERED_WINDOW: usize = 20;
const ENGINEERED_BLOCKS: usize = 8;

/// Per-window counts for the first seven doublets whose block-correlation bits
/// reproduce the columns of [`REFERENCE_ROWS`].
pub fn engineered_count_series() -> Vec<Vec<u32>> {
    (0..7)
        .map(|col| {
            let mut on_same = true;
            let mut series = Vec::with_capacity(ENGINEERED_BLOCKS * 5);
            for k in 0..ENGINEERED_BLOCKS {
                series.extend_from_slice(if on_same { &BLOCK_SAME } else { &BLOCK_OTHER });
                if REFERENCE_ROWS.get(k).is_some_and(|row| row[col] == 0) {
                    on_same = !on_same;
                }
            }
            series
        })
        .collect()
}

/// 800-base sequence realizing [`engineered_count_series`] under 20-base windows
/// with disjoint doublet tiling; unused pairs are filled with CC.
pub fn engineered_sequence() -> Sequence {
    let series = engineered_count_series();
    let windows = series[0].len();
    let cc = Doublet::from_index(Doublet::COUNT - 1).unwrap();
    let mut residues = Vec::with_capacity(windows * ENGINEERED_WINDOW);
    for w in 0..windows {
        let mut pairs = 0;
        for (col, s) in series.iter().enumerate() {
            let d = Doublet::from_index(col).unwrap();
            for _ in 0..s[w] {
                residues.extend([d.first(), d.second()]);
                pairs += 1;
            }
        }
        for _ in pairs..ENGINEERED_WINDOW / 2 {
            residues.extend([cc.first(), cc.second()]);
        }
    }
    Sequence::new(
        "engineered-7x7",
        "synthetic sequence reproducing the 7-vertex reference matrix",
        residues,
        Strand::Plus,
    )
    .expect("static id")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binarizer::{block_binarize, CorrelationPolicy};
    use crate::graphkit::build_adjacency;
    use crate::kmerstats::{window_doublet_counts, Tiling};

    #[test]
    fn engineered_sequence_rebuilds_reference_matrix() {
        let seq = engineered_sequence();
        assert_eq!(seq.len(), 800);
        let counts = window_doublet_counts(&seq, 20, Tiling::Disjoint).unwrap();
        for (col, expected) in engineered_count_series().iter().enumerate() {
            assert_eq!(&counts[col].counts, expected);
        }
        let bits: Vec<_> = counts.iter().map(|s| block_binarize(s, &CorrelationPolicy::default()).unwrap()).collect();
        assert_eq!(build_adjacency(&bits, 7).unwrap(), reference_matrix());
    }
}
