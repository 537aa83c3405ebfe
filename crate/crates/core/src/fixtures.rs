//! Literal matrices and arrays used as reference data.

use alloc::vec::Vec;

use crate::matrix::IncidenceMatrix;

/// A 2-cover-free 9 × 12 group-testing matrix (tests × items).
pub const GT_9X12_ROWS: [&str; 9] = [
    "100100100100",
    "100010010010",
    "100001001001",
    "010100001010",
    "010010100001",
    "010001010100",
    "001100010001",
    "001010001100",
    "001001100010",
];

/// Outcome column that accompanies [`GT_9X12_ROWS`]; items 3 and 12
/// (1-based) are defective.
pub const GT_9X12_OUTCOME: &str = "001010111";

/// `C_{3,1}` written out: rows `(x_i, x_j)` block-major, columns
/// `0, 1, 2, x, x+1, x+2, 2x, 2x+1, 2x+2`.
pub const C3_1_ROWS: [&str; 9] = [
    "100100100",
    "010010010",
    "001001001",
    "100001010",
    "010100001",
    "001010100",
    "100010001",
    "010001100",
    "001100010",
];

/// A 2 × 6 separating hash family of type {1,2} over symbols 1..=4.
pub const SHF_2X6_ONE_BASED: [[u32; 6]; 2] = [[1, 2, 3, 4, 4, 4], [4, 4, 4, 1, 2, 3]];

pub fn parse_bit_rows(rows: &[&str]) -> IncidenceMatrix {
    let bools: Vec<Vec<bool>> = rows.iter().map(|r| r.bytes().map(|b| b == b'1').collect()).collect();
    IncidenceMatrix::from_rows(&bools)
}

pub fn gt_9x12() -> IncidenceMatrix {
    let mut m = parse_bit_rows(&GT_9X12_ROWS);
    m.d_claimed = 2;
    m
}

pub fn gt_9x12_outcome() -> crate::cff::Outcome {
    crate::cff::Outcome(GT_9X12_OUTCOME.bytes().map(|b| b == b'1').collect())
}

pub fn c3_1() -> IncidenceMatrix {
    let mut m = parse_bit_rows(&C3_1_ROWS);
    m.d_claimed = 2;
    m
}
