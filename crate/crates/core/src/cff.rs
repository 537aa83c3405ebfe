//! Polynomial cover-free families, verification, and group-testing decoding.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::cover::{self, Exhausted, RelSets, Relative, Work};
use crate::field::{Field, FieldError};
use crate::matrix::{IncidenceMatrix, Provenance, DEFAULT_MAX_CELLS};
use crate::poly;

/// Default work budget for exhaustive checks, in word operations.
pub const DEFAULT_WORK_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CffError {
    #[error("a {t} x {n} matrix exceeds the limit of {limit} cells")]
    MatrixTooLarge { t: u128, n: u128, limit: u64 },
    #[error("degree bound k must be at least 1")]
    ZeroDegree,
    #[error("matrix has no polynomial block structure")]
    NotBlockStructured,
    #[error("requested {requested} blocks but the matrix has {available}")]
    TooFewBlocks { requested: u32, available: u32 },
    #[error("work budget of {0} exhausted; use the intersection certificate instead")]
    BudgetExceeded(u64),
    #[error("d = {d} needs at least {} columns but the matrix has {n}", d + 1)]
    DTooLarge { d: usize, n: usize },
    #[error("column {column} has weight {weight}, expected {expected}")]
    ColumnWeightNotConstant { column: usize, weight: u32, expected: u32 },
    #[error("item {index} is out of range for {n} items")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("outcome has {got} entries but the matrix has {t} tests")]
    OutcomeLength { got: usize, t: usize },
    #[error("{} items remain after removing cleared ones, more than d = {d}", candidates.len())]
    TooManyCandidates { candidates: Vec<usize>, d: usize },
    #[error("failing test {row} contains none of the remaining candidates")]
    InconsistentOutcome { row: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Column `target` is contained in the union of `covering` (|covering| = d).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CffWitness {
    pub target: usize,
    pub covering: Vec<usize>,
}

impl CffWitness {
    /// Re-checks the witness against `m`.
    pub fn holds(&self, m: &IncidenceMatrix) -> bool {
        (0..m.rows()).all(|r| !m.get(r, self.target) || self.covering.iter().any(|&c| m.get(r, c)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CffVerdict {
    CoverFree,
    Violated(CffWitness),
}

impl CffVerdict {
    pub fn is_cover_free(&self) -> bool {
        matches!(self, CffVerdict::CoverFree)
    }
}

/// Two columns sharing more than `k` rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairFailure {
    pub a: usize,
    pub b: usize,
    pub common: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    /// Every column has weight `b` and every pair meets in at most `k` rows,
    /// so the matrix is `d`-cover-free for all `d <= max_d`.
    Certified {
        k: u32,
        b: u32,
        max_d: u32,
    },
    Failed(PairFailure),
}

/// Test results; `true` means the test failed (contains a defective).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome(pub Vec<bool>);

impl Outcome {
    pub fn failing(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &f)| f).map(|(r, _)| r)
    }
}

/// Largest `d` supported by `C_{q,k}`: `floor((q-1)/k)`.
pub fn max_d(q: u64, k: u32) -> u64 {
    (q - 1) / u64::from(k)
}

/// `C_{q,k}`: rows `(x_i, x_j)` block-major, one column per polynomial of
/// degree `<= k` in canonical order, entry 1 iff `f(x_i) = x_j`.
pub fn build_polynomial_cff(field: &Field, k: u32) -> Result<IncidenceMatrix, CffError> {
    build_polynomial_cff_within(field, k, DEFAULT_MAX_CELLS)
}

pub fn build_polynomial_cff_within(field: &Field, k: u32, max_cells: u64) -> Result<IncidenceMatrix, CffError> {
    if k == 0 {
        return Err(CffError::ZeroDegree);
    }
    let q = field.order();
    let t = u128::from(q) * u128::from(q);
    let n = u128::from(q).pow(k + 1);
    if t.saturating_mul(n) > u128::from(max_cells) {
        return Err(CffError::MatrixTooLarge { t, n, limit: max_cells });
    }
    let (qs, n) = (q as usize, n as usize);
    let mut m = IncidenceMatrix::zeros(qs * qs, n);
    for col in 0..n {
        let coeffs = poly::coeffs_of(col as u64, q, k as usize + 1);
        for a in 0..qs {
            let b = poly::eval_raw(field, &coeffs, a as u32) as usize;
            m.set(a * qs + b, col, true);
        }
    }
    m.d_claimed = max_d(q, k) as u32;
    m.row_labels = Some((0..qs * qs).map(|r| ((r / qs) as u32, (r % qs) as u32)).collect());
    m.col_labels = Some((0..n as u64).collect());
    m.provenance = Provenance::Polynomial {
        q,
        k,
        blocks: q as u32,
        level: field.level(),
    };
    Ok(m)
}

/// The first `b` blocks of `q` rows of a polynomial matrix.
pub fn restrict_blocks(m: &IncidenceMatrix, b: u32) -> Result<IncidenceMatrix, CffError> {
    let Provenance::Polynomial { q, k, blocks, level } = m.provenance else {
        return Err(CffError::NotBlockStructured);
    };
    if b == 0 || b > blocks {
        return Err(CffError::TooFewBlocks {
            requested: b,
            available: blocks,
        });
    }
    let mut out = m.top_left(b as usize * q as usize, m.cols());
    out.d_claimed = (b - 1) / k;
    out.provenance = Provenance::Polynomial { q, k, blocks: b, level };
    Ok(out)
}

struct CoverView<'a>(&'a IncidenceMatrix);

impl Relative for CoverView<'_> {
    fn columns(&self) -> usize {
        self.0.cols()
    }

    fn relative(&self, target: usize) -> RelSets {
        let m = self.0;
        let rows = m.column_rows(target);
        let words = rows.len().div_ceil(64).max(1);
        let mut universe = vec![0u64; words];
        for i in 0..rows.len() {
            universe[i / 64] |= 1 << (i % 64);
        }
        let mut sets = vec![0u64; words * m.cols()];
        for c in 0..m.cols() {
            let col = m.column(c);
            let dst = &mut sets[c * words..(c + 1) * words];
            for (i, &r) in rows.iter().enumerate() {
                if col[r / 64] >> (r % 64) & 1 == 1 {
                    dst[i / 64] |= 1 << (i % 64);
                }
            }
        }
        RelSets { words, universe, sets }
    }
}

fn budget_err(work: &Work) -> impl Fn(Exhausted) -> CffError + '_ {
    move |_| CffError::BudgetExceeded(work.limit)
}

/// Whether column `target` lies inside the union of some `d` other columns.
/// Work is charged to `work`.
pub fn target_is_covered(m: &IncidenceMatrix, target: usize, d: usize, work: &mut Work) -> Result<bool, CffError> {
    if d + 1 > m.cols() {
        return Err(CffError::DTooLarge { d, n: m.cols() });
    }
    let limit = work.limit;
    cover::target_covered(&CoverView(m), target, d, work).map_err(|_| CffError::BudgetExceeded(limit))
}

/// The lexicographically first violating `(d+1)`-tuple, searched directly.
pub fn first_cff_witness(m: &IncidenceMatrix, d: usize, work: &mut Work) -> Result<Option<CffWitness>, CffError> {
    let limit = work.limit;
    let found = cover::first_witness(&CoverView(m), d, work).map_err(|_| CffError::BudgetExceeded(limit))?;
    Ok(found.map(|(target, covering)| CffWitness { target, covering }))
}

/// Decides whether `m` is `d`-cover-free. On failure the witness is the first
/// one met when `(d+1)`-subsets of columns are listed in ascending
/// lexicographic order, taking the smallest covered member of that subset.
pub fn verify_cff_exhaustive(m: &IncidenceMatrix, d: usize) -> Result<CffVerdict, CffError> {
    verify_cff_exhaustive_within(m, d, DEFAULT_WORK_BUDGET)
}

pub fn verify_cff_exhaustive_within(m: &IncidenceMatrix, d: usize, budget: u64) -> Result<CffVerdict, CffError> {
    if d + 1 > m.cols() {
        return Err(CffError::DTooLarge { d, n: m.cols() });
    }
    let mut work = Work::new(budget);
    let view = CoverView(m);
    let mut violated = false;
    for target in 0..m.cols() {
        if cover::target_covered(&view, target, d, &mut work).map_err(budget_err(&work))? {
            violated = true;
            break;
        }
    }
    if !violated {
        return Ok(CffVerdict::CoverFree);
    }
    let w = first_cff_witness(m, d, &mut work)?.expect("a covered column implies a violating tuple");
    Ok(CffVerdict::Violated(w))
}

/// Common weight of all columns, or the first column that differs.
pub fn constant_column_weight(m: &IncidenceMatrix, expected: u32) -> Result<(), CffError> {
    for c in 0..m.cols() {
        let w = m.column_weight(c);
        if w != expected {
            return Err(CffError::ColumnWeightNotConstant {
                column: c,
                weight: w,
                expected,
            });
        }
    }
    Ok(())
}

/// First pair `(a, b)` with `a` in `firsts`, `b > a`, meeting in more than
/// `k` rows.
pub fn certificate_scan(m: &IncidenceMatrix, k: u32, firsts: Range<usize>) -> Option<PairFailure> {
    for a in firsts {
        let ca = m.column(a);
        for b in a + 1..m.cols() {
            let common: u32 = ca.iter().zip(m.column(b)).map(|(x, y)| (x & y).count_ones()).sum();
            if common > k {
                return Some(PairFailure { a, b, common });
            }
        }
    }
    None
}

/// Largest `d` certified by column weight `b` and pairwise intersections `<= k`.
pub fn certified_d(m: &IncidenceMatrix, k: u32, b: u32) -> u32 {
    let by_count = m.cols().saturating_sub(1) as u32;
    match k {
        0 if b > 0 => by_count,
        0 => 0,
        _ => (b.saturating_sub(1) / k).min(by_count),
    }
}

/// Checks constant column weight `b` and `|B_i ∩ B_j| <= k` for all pairs;
/// together they give `|B_0 \ (B_1 ∪ … ∪ B_d)| >= b - dk >= 1`.
pub fn verify_intersection_certificate(m: &IncidenceMatrix, k: u32, b: u32) -> Result<Certificate, CffError> {
    constant_column_weight(m, b)?;
    Ok(match certificate_scan(m, k, 0..m.cols()) {
        Some(f) => Certificate::Failed(f),
        None => Certificate::Certified {
            k,
            b,
            max_d: certified_d(m, k, b),
        },
    })
}

pub fn simulate_outcomes(m: &IncidenceMatrix, defectives: &[usize]) -> Result<Outcome, CffError> {
    let mut acc = vec![0u64; m.words()];
    for &j in defectives {
        if j >= m.cols() {
            return Err(CffError::IndexOutOfRange { index: j, n: m.cols() });
        }
        for (a, w) in acc.iter_mut().zip(m.column(j)) {
            *a |= w;
        }
    }
    Ok(Outcome(
        (0..m.rows()).map(|r| acc[r / 64] >> (r % 64) & 1 == 1).collect(),
    ))
}

/// Items never seen in a passing test, provided there are at most `d` of them
/// and they explain every failing test.
pub fn decode(m: &IncidenceMatrix, y: &Outcome, d: usize) -> Result<Vec<usize>, CffError> {
    if y.0.len() != m.rows() {
        return Err(CffError::OutcomeLength {
            got: y.0.len(),
            t: m.rows(),
        });
    }
    let mut passing = vec![0u64; m.words()];
    for (r, &failed) in y.0.iter().enumerate() {
        if !failed {
            passing[r / 64] |= 1 << (r % 64);
        }
    }
    let candidates: Vec<usize> = (0..m.cols())
        .filter(|&c| m.column(c).iter().zip(&passing).all(|(x, p)| x & p == 0))
        .collect();
    if candidates.len() > d {
        return Err(CffError::TooManyCandidates { candidates, d });
    }
    let explained = simulate_outcomes(m, &candidates)?;
    if let Some(row) = y.failing().find(|&r| !explained.0[r]) {
        return Err(CffError::InconsistentOutcome { row });
    }
    Ok(candidates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn gf(q: u64) -> Field {
        Field::of_order(q).unwrap()
    }

    #[test]
    fn c21_is_four_by_four() {
        let m = build_polynomial_cff(&gf(2), 1).unwrap();
        assert_eq!((m.rows(), m.cols(), m.d_claimed), (4, 4, 1));
        // Columns 0, 1, x, x+1 evaluated at 0 and 1.
        let expect = [[0usize, 0], [1, 1], [0, 1], [1, 0]];
        for (c, vals) in expect.iter().enumerate() {
            let rows: Vec<usize> = vals.iter().enumerate().map(|(a, &b)| a * 2 + b).collect();
            assert_eq!(m.column_rows(c), rows);
        }
    }

    #[test]
    fn c31_matches_table_two() {
        let m = build_polynomial_cff(&gf(3), 1).unwrap();
        assert!(m.same_bits(&fixtures::c3_1()));
        // Column 2x+1 (index 7) has ones at (0,1), (1,0), (2,2).
        assert_eq!(m.column_rows(7), [1, 3, 8]);
    }

    #[test]
    fn restrict_and_errors() {
        let m = build_polynomial_cff(&gf(3), 1).unwrap();
        let r = restrict_blocks(&m, 2).unwrap();
        assert_eq!((r.rows(), r.cols(), r.d_claimed), (6, 9, 1));
        assert!(restrict_blocks(&m, 3).unwrap().same_bits(&m));
        assert!(matches!(restrict_blocks(&m, 4), Err(CffError::TooFewBlocks { .. })));
        assert_eq!(
            restrict_blocks(&fixtures::gt_9x12(), 1).unwrap_err(),
            CffError::NotBlockStructured
        );
        let c42 = build_polynomial_cff(&gf(4), 2).unwrap();
        assert_eq!((c42.rows(), c42.cols(), c42.d_claimed), (16, 64, 1));
        let r = restrict_blocks(&c42, 3).unwrap();
        assert_eq!((r.rows(), r.d_claimed), (12, 1));
        assert!(matches!(
            build_polynomial_cff_within(&gf(4), 2, 100),
            Err(CffError::MatrixTooLarge { .. })
        ));
        assert_eq!(build_polynomial_cff(&gf(4), 0).unwrap_err(), CffError::ZeroDegree);
    }

    #[test]
    fn max_d_values() {
        assert_eq!(max_d(16, 2), 7);
        assert_eq!(max_d(16, 3), 5);
        assert_eq!(max_d(9, 8), 1);
    }

    #[test]
    fn table_two_exhaustive() {
        let m = fixtures::c3_1();
        assert!(verify_cff_exhaustive(&m, 2).unwrap().is_cover_free());
        let v = verify_cff_exhaustive(&m, 3).unwrap();
        assert_eq!(
            v,
            CffVerdict::Violated(CffWitness {
                target: 3,
                covering: vec![0, 1, 2]
            })
        );
    }

    #[test]
    fn duplicate_column_is_caught() {
        let m = IncidenceMatrix::from_rows(&[[true, false, true], [false, true, false]]);
        let v = verify_cff_exhaustive(&m, 1).unwrap();
        assert_eq!(
            v,
            CffVerdict::Violated(CffWitness {
                target: 0,
                covering: vec![2]
            })
        );
        let cert = verify_intersection_certificate(&m, 0, 1).unwrap();
        assert_eq!(cert, Certificate::Failed(PairFailure { a: 0, b: 2, common: 1 }));
    }

    #[test]
    fn exhaustive_budget_and_range() {
        let m = fixtures::c3_1();
        assert_eq!(
            verify_cff_exhaustive_within(&m, 2, 5).unwrap_err(),
            CffError::BudgetExceeded(5)
        );
        assert!(matches!(verify_cff_exhaustive(&m, 9), Err(CffError::DTooLarge { .. })));
    }

    #[test]
    fn certificate_on_c31() {
        let m = fixtures::c3_1();
        assert_eq!(
            verify_intersection_certificate(&m, 1, 3).unwrap(),
            Certificate::Certified { k: 1, b: 3, max_d: 2 }
        );
        assert_eq!(
            verify_intersection_certificate(&fixtures::gt_9x12(), 1, 3).unwrap(),
            Certificate::Certified { k: 1, b: 3, max_d: 2 }
        );
        assert!(matches!(
            verify_intersection_certificate(&fixtures::gt_9x12(), 1, 4),
            Err(CffError::ColumnWeightNotConstant { .. })
        ));
    }

    #[test]
    fn table_one_walkthrough() {
        let m = fixtures::gt_9x12();
        let y = simulate_outcomes(&m, &[2, 11]).unwrap();
        let failing: Vec<usize> = y.failing().collect();
        assert_eq!(failing, [2, 4, 6, 7, 8]);
        assert_eq!(decode(&m, &y, 2).unwrap(), [2, 11]);
    }

    #[test]
    fn decode_edge_cases() {
        let m = fixtures::c3_1();
        assert_eq!(decode(&m, &Outcome(vec![false; 9]), 2).unwrap(), Vec::<usize>::new());
        assert!(matches!(
            decode(&m, &Outcome(vec![false; 3]), 2),
            Err(CffError::OutcomeLength { .. })
        ));
        assert!(matches!(
            decode(&m, &Outcome(vec![true; 9]), 2),
            Err(CffError::TooManyCandidates { .. })
        ));
        // Row 0 fails but every item in it is cleared by a passing test.
        let mut y = simulate_outcomes(&m, &[4]).unwrap();
        y.0[0] = true;
        assert_eq!(decode(&m, &y, 2).unwrap_err(), CffError::InconsistentOutcome { row: 0 });
        for j in 0..9 {
            assert_eq!(simulate_outcomes(&m, &[j]).unwrap().0, m.row_of_column(j));
        }
        assert!(matches!(
            simulate_outcomes(&m, &[9]),
            Err(CffError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn all_small_defective_sets_decode_on_c31() {
        let m = fixtures::c3_1();
        let mut sets: Vec<Vec<usize>> = (0..9).map(|i| vec![i]).collect();
        for i in 0..9 {
            for j in i + 1..9 {
                sets.push(vec![i, j]);
            }
        }
        assert_eq!(sets.len(), 45);
        for s in sets {
            let y = simulate_outcomes(&m, &s).unwrap();
            assert_eq!(decode(&m, &y, 2).unwrap(), s);
        }
    }

    impl IncidenceMatrix {
        fn row_of_column(&self, c: usize) -> Vec<bool> {
            (0..self.rows()).map(|r| self.get(r, c)).collect()
        }
    }
}
