//! Embedding sequences of polynomial cover-free families.
//!
//! Level `i` uses the field of order `q_i = q^(2^i)` and the matrix
//! `C_{q_i,k_i,d_i}` (the first `d_i k_i + 1` blocks of `C_{q_i,k_i}`), with
//! rows and columns reordered so that level `i - 1` is its top-left corner.
//!
//! Rows are pairs `(a, b)` of element indices with `a < d_i k_i + 1` and
//! `b < q_i`. A pair belongs to the first level whose bounds contain it;
//! rows are listed level by level and block-major inside a level. Columns are
//! polynomials, listed by first level containing them (degree `<= k_s`,
//! coefficients in `F_{q_s}`) and by canonical index inside that level. The
//! element order makes every subfield a prefix, so the rows and columns of
//! level `i - 1` come first and evaluate identically.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::field::{Field, FieldError};
use crate::matrix::{IncidenceMatrix, Provenance, DEFAULT_MAX_CELLS};
use crate::poly::{self, DensePolynomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbeddingError {
    #[error("level {level}: {reason}")]
    ParamViolation { level: usize, reason: String },
    #[error("level {level} has {t} x {n} cells, over the limit of {limit}")]
    MatrixTooLarge {
        level: usize,
        t: BigUint,
        n: BigUint,
        limit: u64,
    },
    #[error("level {0} is not materialized")]
    NotMaterialized(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

fn violation(level: usize, reason: impl Into<String>) -> EmbeddingError {
    EmbeddingError::ParamViolation {
        level,
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelParams {
    pub i: u32,
    pub q: u64,
    pub k: u64,
    pub d: u64,
    pub t: BigUint,
    pub n: BigUint,
}

impl LevelParams {
    pub fn new(i: u32, q: u64, k: u64, d: u64) -> Self {
        let t = BigUint::from(d * k + 1) * BigUint::from(q);
        let n = num_traits::pow::pow(BigUint::from(q), (k + 1) as usize);
        Self { i, q, k, d, t, n }
    }

    pub fn blocks(&self) -> u64 {
        self.d * self.k + 1
    }
}

/// Pairs `(a, b)` arranged so that each level's pairs are a prefix of the
/// next level's. Level `s` holds `a < blocks[s]`, `b < widths[s]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedGrid {
    dims: Vec<(u64, u64)>,
}

impl NestedGrid {
    /// `dims[s] = (blocks, width)`; both must be non-decreasing.
    pub fn new(dims: Vec<(u64, u64)>) -> Self {
        debug_assert!(dims.windows(2).all(|w| w[0].0 <= w[1].0 && w[0].1 <= w[1].1));
        Self { dims }
    }

    pub fn len(&self, level: usize) -> u64 {
        let (b, w) = self.dims[level];
        b * w
    }

    pub fn is_empty(&self, level: usize) -> bool {
        self.len(level) == 0
    }

    /// All pairs of `level` in order.
    pub fn pairs(&self, level: usize) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.len(level) as usize);
        for s in 0..=level {
            let (bs, ws) = self.dims[s];
            let (bp, wp) = if s == 0 { (0, 0) } else { self.dims[s - 1] };
            for a in 0..bs {
                for b in 0..ws {
                    if a < bp && b < wp {
                        continue;
                    }
                    out.push((a as u32, b as u32));
                }
            }
        }
        out
    }

    /// Position of `(a, b)` in `pairs(level)`.
    pub fn position(&self, level: usize, a: u64, b: u64) -> u64 {
        let s = (0..=level)
            .find(|&s| a < self.dims[s].0 && b < self.dims[s].1)
            .expect("pair outside the grid");
        let (_, ws) = self.dims[s];
        if s == 0 {
            return a * ws + b;
        }
        let (bp, wp) = self.dims[s - 1];
        let old_before = a.min(bp) * wp + if a < bp { b.min(wp) } else { 0 };
        bp * wp + a * ws + b - old_before
    }
}

/// Columns of an embedding level: polynomial coefficient vectors (padded to
/// the level's length) in nesting order, with their canonical index at the
/// top level.
pub(crate) fn nested_columns(specs: &[(u64, u64)]) -> (Vec<Vec<u32>>, Vec<u64>) {
    let (q_top, k_top) = *specs.last().unwrap();
    let len = k_top as usize + 1;
    let mut cols = Vec::new();
    let mut labels = Vec::new();
    for (s, &(q, k)) in specs.iter().enumerate() {
        let count = poly::count(q, k as usize).expect("level size checked by caller");
        for idx in 0..count {
            let mut coeffs = poly::coeffs_of(idx, q, k as usize + 1);
            if s > 0 {
                let (qp, kp) = specs[s - 1];
                let inside = coeffs
                    .iter()
                    .enumerate()
                    .all(|(j, &c)| if j as u64 > kp { c == 0 } else { u64::from(c) < qp });
                if inside {
                    continue;
                }
            }
            coeffs.resize(len, 0);
            labels.push(poly::index_of(&coeffs, q_top).unwrap_or(u64::MAX));
            cols.push(coeffs);
        }
    }
    (cols, labels)
}

/// Materializes the top level of a nested specification.
///
/// `fields[s]` is the field of level `s`, `specs[s] = (k_s, blocks_s)`.
fn build_level(fields: &[Field], specs: &[(u64, u64)], max_cells: u64) -> Result<IncidenceMatrix, EmbeddingError> {
    let top = fields.len() - 1;
    let field = &fields[top];
    let (k, blocks) = specs[top];
    let q = field.order();
    let params = LevelParams::new(top as u32, q, k, (blocks - 1) / k.max(1));
    let t = BigUint::from(blocks) * BigUint::from(q);
    if &t * &params.n > BigUint::from(max_cells) {
        return Err(EmbeddingError::MatrixTooLarge {
            level: top,
            t,
            n: params.n,
            limit: max_cells,
        });
    }
    let grid = NestedGrid::new(fields.iter().zip(specs).map(|(f, &(_, b))| (b, f.order())).collect());
    let poly_specs: Vec<(u64, u64)> = fields.iter().zip(specs).map(|(f, &(k, _))| (f.order(), k)).collect();
    let (cols, labels) = nested_columns(&poly_specs);
    let rows = grid.pairs(top);
    let mut m = IncidenceMatrix::zeros(rows.len(), cols.len());
    for (c, coeffs) in cols.iter().enumerate() {
        for a in 0..blocks {
            let b = poly::eval_raw(field, coeffs, a as u32);
            m.set(grid.position(top, a, u64::from(b)) as usize, c, true);
        }
    }
    m.d_claimed = ((blocks - 1) / k) as u32;
    m.row_labels = Some(rows);
    m.col_labels = Some(labels);
    m.provenance = Provenance::Embedding {
        level: top as u32,
        q,
        k: k as u32,
        blocks: blocks as u32,
    };
    Ok(m)
}

/// Result of reordering `C_{q^2,k',d'}` around `C_{q,k,d}`.
#[derive(Debug, Clone)]
pub struct Reordered {
    pub matrix: IncidenceMatrix,
    /// Canonical row index `a * q^2 + b` of each row, in the new order.
    pub row_order: Vec<u64>,
    /// Canonical polynomial index over `F_{q^2}` of each column, in the new order.
    pub col_order: Vec<u64>,
}

fn check_level(level: usize, q: u64, k: u64, d: u64) -> Result<(), EmbeddingError> {
    if k == 0 || d == 0 {
        return Err(violation(level, "k and d must be at least 1"));
    }
    match d.checked_mul(k).and_then(|x| x.checked_add(1)) {
        Some(need) if need <= q => Ok(()),
        _ => Err(violation(
            level,
            alloc::format!("q = {q} < d·k + 1 with d = {d}, k = {k}"),
        )),
    }
}

/// `C_{q^2,k',d'}` with rows and columns permuted so that `C_{q,k,d}` is its
/// top-left corner.
pub fn reorder_embedding(field: &Field, k: u64, d: u64, k2: u64, d2: u64) -> Result<Reordered, EmbeddingError> {
    check_level(0, field.order(), k, d)?;
    if k2 < k || d2 < d {
        return Err(violation(1, "k and d may not decrease"));
    }
    let ext = field.extend()?;
    check_level(1, ext.order(), k2, d2)?;
    let fields = [field.clone(), ext];
    let specs = [(k, d * k + 1), (k2, d2 * k2 + 1)];
    let matrix = build_level(&fields, &specs, DEFAULT_MAX_CELLS)?;
    let q2 = fields[1].order();
    let row_order = matrix
        .row_labels
        .as_ref()
        .unwrap()
        .iter()
        .map(|&(a, b)| u64::from(a) * q2 + u64::from(b))
        .collect();
    let col_order = matrix.col_labels.clone().unwrap();
    Ok(Reordered {
        matrix,
        row_order,
        col_order,
    })
}

#[derive(Debug, Clone)]
pub struct EmbeddingLevel {
    pub params: LevelParams,
    /// `None` when the level is too large to store.
    pub matrix: Option<IncidenceMatrix>,
}

impl EmbeddingLevel {
    /// Canonical row indices `a * q + b` in embedding order.
    pub fn row_order(&self) -> Option<Vec<u64>> {
        let q = self.params.q;
        let m = self.matrix.as_ref()?;
        Some(
            m.row_labels
                .as_ref()?
                .iter()
                .map(|&(a, b)| u64::from(a) * q + u64::from(b))
                .collect(),
        )
    }

    /// Canonical polynomial indices in embedding order.
    pub fn col_order(&self) -> Option<&[u64]> {
        self.matrix.as_ref()?.col_labels.as_deref()
    }
}

#[derive(Debug, Clone)]
pub struct EmbeddingSequence {
    /// Fields of the levels that could be created.
    pub fields: Vec<Field>,
    pub levels: Vec<EmbeddingLevel>,
}

impl EmbeddingSequence {
    fn grid(&self, level: usize) -> NestedGrid {
        NestedGrid::new(
            self.levels[..=level]
                .iter()
                .map(|l| (l.params.blocks(), l.params.q))
                .collect(),
        )
    }

    /// Row positions of the ones in the column of polynomial `f` at `level`,
    /// computed without materializing the level.
    pub fn column_rows(&self, level: usize, f: &DensePolynomial) -> Result<Vec<u64>, EmbeddingError> {
        let field = self.fields.get(level).ok_or(EmbeddingError::NotMaterialized(level))?;
        let params = &self.levels[level].params;
        if !field.contains_order(f.order) || f.degree().is_some_and(|deg| deg as u64 > params.k) {
            return Err(violation(level, "polynomial is not a column of this level"));
        }
        let grid = self.grid(level);
        let mut rows: Vec<u64> = (0..params.blocks())
            .map(|a| grid.position(level, a, u64::from(poly::eval_raw(field, &f.coeffs, a as u32))))
            .collect();
        rows.sort_unstable();
        Ok(rows)
    }

    pub fn matrix(&self, level: usize) -> Result<&IncidenceMatrix, EmbeddingError> {
        self.levels
            .get(level)
            .and_then(|l| l.matrix.as_ref())
            .ok_or(EmbeddingError::NotMaterialized(level))
    }
}

fn validate_schedule(q0: u64, schedule: &[(u64, u64)]) -> Result<Vec<u64>, EmbeddingError> {
    let mut orders = Vec::with_capacity(schedule.len());
    let mut q = q0;
    for (i, &(k, d)) in schedule.iter().enumerate() {
        if i > 0 {
            q = q
                .checked_mul(q)
                .ok_or_else(|| violation(i, "field order overflows 64 bits"))?;
            let (kp, dp) = schedule[i - 1];
            if k < kp || d < dp {
                return Err(violation(i, "k and d may not decrease"));
            }
        }
        check_level(i, q, k, d)?;
        orders.push(q);
    }
    Ok(orders)
}

/// Chains the reordering step over `levels` levels. A schedule shorter than
/// `levels` repeats its last entry. Levels whose field or matrix would exceed
/// the limits are kept as parameters only.
pub fn build_embedding_family(
    field: &Field,
    schedule: &[(u64, u64)],
    levels: usize,
) -> Result<EmbeddingSequence, EmbeddingError> {
    build_embedding_family_within(field, schedule, levels, DEFAULT_MAX_CELLS)
}

pub fn build_embedding_family_within(
    field: &Field,
    schedule: &[(u64, u64)],
    levels: usize,
    max_cells: u64,
) -> Result<EmbeddingSequence, EmbeddingError> {
    if levels == 0 || schedule.is_empty() {
        return Err(violation(0, "need at least one level"));
    }
    let mut full: Vec<(u64, u64)> = schedule.iter().copied().take(levels).collect();
    while full.len() < levels {
        full.push(*full.last().unwrap());
    }
    let orders = validate_schedule(field.order(), &full)?;

    let mut fields = vec![field.clone()];
    while fields.len() < levels {
        match fields.last().unwrap().extend() {
            Ok(f) => fields.push(f),
            Err(FieldError::FieldTooLarge { .. }) => break,
            Err(e) => return Err(e.into()),
        }
    }
    let specs: Vec<(u64, u64)> = full.iter().map(|&(k, d)| (k, d * k + 1)).collect();
    let mut out = Vec::with_capacity(levels);
    for (i, (&(k, d), &q)) in full.iter().zip(&orders).enumerate() {
        let params = LevelParams::new(i as u32, q, k, d);
        let cells = &params.t * &params.n;
        let matrix = if i < fields.len() && cells <= BigUint::from(max_cells) {
            Some(build_level(&fields[..=i], &specs[..=i], max_cells)?)
        } else {
            None
        };
        out.push(EmbeddingLevel { params, matrix });
    }
    Ok(EmbeddingSequence { fields, levels: out })
}

/// `d_0` at level 0, then `d_i = ceil(q^(2^i) / k) - 1`, constant `k`.
pub fn schedule_priority_d(q: u64, k: u64, d0: u64, levels: usize) -> Result<Vec<(u64, u64)>, EmbeddingError> {
    if k == 0 || d0 == 0 {
        return Err(violation(0, "k and d_0 must be at least 1"));
    }
    if q <= d0 * k {
        return Err(violation(0, "need q > d_0 k"));
    }
    let mut out = Vec::with_capacity(levels);
    let mut qi = q;
    for i in 0..levels {
        if i > 0 {
            qi = qi
                .checked_mul(qi)
                .ok_or_else(|| violation(i, "field order overflows 64 bits"))?;
        }
        let d = if i == 0 { d0 } else { qi.div_ceil(k) - 1 };
        out.push((k, d));
    }
    Ok(out)
}

/// `k_0` at level 0, then `k_i = ceil(q^(2^i) / d) - 1`, constant `d`.
pub fn schedule_priority_ratio(q: u64, d: u64, k0: u64, levels: usize) -> Result<Vec<(u64, u64)>, EmbeddingError> {
    if d == 0 || k0 == 0 {
        return Err(violation(0, "d and k_0 must be at least 1"));
    }
    if q <= d * k0 {
        return Err(violation(0, "need q > d k_0"));
    }
    let mut out = Vec::with_capacity(levels);
    let mut qi = q;
    for i in 0..levels {
        if i > 0 {
            qi = qi
                .checked_mul(qi)
                .ok_or_else(|| violation(i, "field order overflows 64 bits"))?;
        }
        let k = if i == 0 { k0 } else { qi.div_ceil(d) - 1 };
        out.push((k, d));
    }
    Ok(out)
}

/// Fixed `k` and `d`: rows `(x_l, x_j)` with `x_l` among the first `dk+1`
/// elements of the base field and `x_j` ranging over `F_{q^(2^i)}`. New rows
/// never meet old columns.
pub fn build_monotone_family(
    field: &Field,
    k: u64,
    d: u64,
    levels: usize,
) -> Result<EmbeddingSequence, EmbeddingError> {
    check_level(0, field.order(), k, d)?;
    build_embedding_family(field, &[(k, d)], levels)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyViolation {
    RowsDecrease {
        level: usize,
    },
    ColsDecrease {
        level: usize,
    },
    DDecrease {
        level: usize,
    },
    /// The smaller matrix is not the top-left corner of the larger one.
    CornerMismatch {
        level: usize,
        row: usize,
        col: usize,
    },
    /// Entry of the new-rows × old-columns block that should be 0.
    ZNotZero {
        row: usize,
        col: usize,
    },
    /// Row of the new-rows × old-columns block that is neither a row of the
    /// smaller matrix nor constant.
    ZRowNotAllowed {
        row: usize,
    },
}

fn check_pair(level: usize, small: &IncidenceMatrix, big: &IncidenceMatrix) -> Result<(), FamilyViolation> {
    if small.rows() > big.rows() {
        return Err(FamilyViolation::RowsDecrease { level });
    }
    if small.cols() > big.cols() {
        return Err(FamilyViolation::ColsDecrease { level });
    }
    if let Some((row, col)) = small.first_corner_mismatch(big, small.rows(), small.cols()) {
        return Err(FamilyViolation::CornerMismatch { level, row, col });
    }
    Ok(())
}

/// Non-decreasing rows, columns and `d`, and each materialized level is the
/// top-left corner of the next materialized one.
pub fn check_embedding_family(seq: &EmbeddingSequence) -> Result<(), FamilyViolation> {
    for (i, w) in seq.levels.windows(2).enumerate() {
        let level = i + 1;
        let (a, b) = (&w[0].params, &w[1].params);
        if a.t > b.t {
            return Err(FamilyViolation::RowsDecrease { level });
        }
        if a.n > b.n {
            return Err(FamilyViolation::ColsDecrease { level });
        }
        if a.d > b.d {
            return Err(FamilyViolation::DDecrease { level });
        }
        if let (Some(ma), Some(mb)) = (&w[0].matrix, &w[1].matrix) {
            check_pair(level, ma, mb)?;
            if ma.d_claimed > mb.d_claimed {
                return Err(FamilyViolation::DDecrease { level });
            }
        }
    }
    Ok(())
}

/// Top-left equality and an all-zero block below the smaller matrix.
pub fn check_monotone(small: &IncidenceMatrix, big: &IncidenceMatrix) -> Result<(), FamilyViolation> {
    check_pair(1, small, big)?;
    for col in 0..small.cols() {
        if let Some(row) = (small.rows()..big.rows()).find(|&r| big.get(r, col)) {
            return Err(FamilyViolation::ZNotZero { row, col });
        }
    }
    Ok(())
}

/// Top-left equality and every row of the block below the smaller matrix is
/// a row of the smaller matrix, all zeros, or all ones.
pub fn check_nested(small: &IncidenceMatrix, big: &IncidenceMatrix) -> Result<(), FamilyViolation> {
    check_pair(1, small, big)?;
    let cols = small.cols();
    let old_rows: Vec<Vec<bool>> = (0..small.rows()).map(|r| small.row(r)).collect();
    for row in small.rows()..big.rows() {
        let z: Vec<bool> = (0..cols).map(|c| big.get(row, c)).collect();
        let constant = z.iter().all(|&v| v) || z.iter().all(|&v| !v);
        if !constant && !old_rows.contains(&z) {
            return Err(FamilyViolation::ZRowNotAllowed { row });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cff::{self, Certificate};
    use crate::fixtures;

    fn gf(q: u64) -> Field {
        Field::of_order(q).unwrap()
    }

    #[test]
    fn grid_positions_match_enumeration() {
        let g = NestedGrid::new(vec![(2, 3), (3, 9), (5, 81)]);
        for level in 0..3 {
            for (pos, &(a, b)) in g.pairs(level).iter().enumerate() {
                assert_eq!(g.position(level, u64::from(a), u64::from(b)), pos as u64);
            }
        }
        assert_eq!(g.len(2), 405);
    }

    #[test]
    fn reorder_81_by_729() {
        let r = reorder_embedding(&gf(3), 1, 2, 2, 4).unwrap();
        let m = &r.matrix;
        assert_eq!((m.rows(), m.cols()), (81, 729));
        assert!(m.top_left(9, 9).same_bits(&fixtures::c3_1()));
        for row in 9..27 {
            for col in 0..9 {
                assert!(!m.get(row, col), "({row},{col})");
            }
        }
        assert_eq!(
            cff::verify_intersection_certificate(m, 2, 9).unwrap(),
            Certificate::Certified { k: 2, b: 9, max_d: 4 }
        );
        let mut rows = r.row_order.clone();
        rows.sort_unstable();
        assert_eq!(rows, (0..81).collect::<Vec<_>>());
        let mut cols = r.col_order.clone();
        cols.sort_unstable();
        assert_eq!(cols, (0..729).collect::<Vec<_>>());
    }

    #[test]
    fn reorder_without_growth() {
        let r = reorder_embedding(&gf(3), 1, 2, 1, 2).unwrap();
        assert_eq!((r.matrix.rows(), r.matrix.cols()), (27, 81));
        assert!(r.matrix.top_left(9, 9).same_bits(&fixtures::c3_1()));
    }

    #[test]
    fn reorder_rejects_bad_params() {
        assert!(matches!(
            reorder_embedding(&gf(3), 1, 3, 1, 3),
            Err(EmbeddingError::ParamViolation { level: 0, .. })
        ));
        assert!(matches!(
            reorder_embedding(&gf(3), 1, 2, 1, 1),
            Err(EmbeddingError::ParamViolation { level: 1, .. })
        ));
        assert!(matches!(
            reorder_embedding(&gf(3), 1, 2, 2, 5),
            Err(EmbeddingError::ParamViolation { level: 1, .. })
        ));
    }

    #[test]
    fn schedules_from_tables() {
        let ks = |v: Vec<(u64, u64)>| v.into_iter().map(|(k, _)| k).collect::<Vec<_>>();
        let ds = |v: Vec<(u64, u64)>| v.into_iter().map(|(_, d)| d).collect::<Vec<_>>();
        assert_eq!(ds(schedule_priority_d(4, 2, 1, 4).unwrap()), [1, 7, 127, 32767]);
        assert_eq!(ds(schedule_priority_d(4, 3, 1, 4).unwrap()), [1, 5, 85, 21845]);
        assert_eq!(ks(schedule_priority_ratio(4, 2, 1, 4).unwrap()), [1, 7, 127, 32767]);
        assert_eq!(ks(schedule_priority_ratio(4, 3, 1, 4).unwrap()), [1, 5, 85, 21845]);
        assert!(schedule_priority_d(4, 2, 2, 2).is_err());
        assert!(schedule_priority_ratio(4, 2, 2, 2).is_err());
        assert!(schedule_priority_d(4, 2, 1, 6).is_err());
    }

    #[test]
    fn family_for_q3() {
        let seq = build_embedding_family(&gf(3), &[(1, 2), (2, 4)], 2).unwrap();
        assert_eq!(seq.matrix(0).unwrap().rows(), 9);
        assert_eq!(seq.matrix(1).unwrap().cols(), 729);
        assert_eq!(check_embedding_family(&seq), Ok(()));
        // The schedule picks rows (x_i, ·) with x_i outside F_3, so
        // the block under the corner is not zero.
        assert!(matches!(
            check_monotone(seq.matrix(0).unwrap(), seq.matrix(1).unwrap()),
            Err(FamilyViolation::ZNotZero { .. })
        ));
    }

    #[test]
    fn swapped_columns_break_nesting() {
        let mut seq = build_embedding_family(&gf(3), &[(1, 2), (2, 4)], 2).unwrap();
        seq.levels[1].matrix.as_mut().unwrap().swap_columns(0, 1);
        assert!(matches!(
            check_embedding_family(&seq),
            Err(FamilyViolation::CornerMismatch { level: 1, .. })
        ));
    }

    #[test]
    fn monotone_q3() {
        let seq = build_monotone_family(&gf(3), 1, 2, 2).unwrap();
        let (a, b) = (seq.matrix(0).unwrap(), seq.matrix(1).unwrap());
        assert_eq!((a.rows(), a.cols(), b.rows(), b.cols()), (9, 9, 27, 81));
        assert!(a.same_bits(&fixtures::c3_1()));
        assert_eq!(check_monotone(a, b), Ok(()));
        assert_eq!(check_nested(a, b), Ok(()));
        assert_eq!(check_embedding_family(&seq), Ok(()));
        assert_eq!(check_monotone(a, a), Ok(()));
    }

    #[test]
    fn nested_checker() {
        let small = IncidenceMatrix::from_rows(&[[true, false], [false, true]]);
        let ok = IncidenceMatrix::from_rows(&[
            [true, false, true],
            [false, true, false],
            [false, true, true],
            [true, true, false],
        ]);
        assert_eq!(check_nested(&small, &ok), Ok(()));
        assert!(check_monotone(&small, &ok).is_err());
        let bad = IncidenceMatrix::from_rows(&[[true, false], [false, true], [true, true], [false, false]]);
        assert_eq!(check_nested(&small, &bad), Ok(()));
        let mixed = IncidenceMatrix::from_rows(&[[true, false, false], [false, true, false], [true, true, false]]);
        assert_eq!(check_nested(&small, &mixed), Ok(()));
        let small3 = IncidenceMatrix::from_rows(&[[true, false, false], [false, true, false]]);
        let novel = IncidenceMatrix::from_rows(&[[true, false, false], [false, true, false], [true, false, true]]);
        assert_eq!(
            check_nested(&small3, &novel),
            Err(FamilyViolation::ZRowNotAllowed { row: 2 })
        );
    }

    #[test]
    fn params_only_levels_and_on_demand_columns() {
        let seq = build_embedding_family_within(&gf(3), &[(1, 2)], 3, 10_000).unwrap();
        assert!(seq.levels[1].matrix.is_some());
        assert!(seq.levels[2].matrix.is_none());
        assert_eq!(seq.levels[2].params.t, BigUint::from(3u32 * 81));
        // On-demand generation agrees with the materialized level.
        let m1 = seq.matrix(1).unwrap();
        let labels = m1.col_labels.as_ref().unwrap();
        for (c, &idx) in labels.iter().enumerate() {
            let f = DensePolynomial::from_index(idx, 9, 1);
            let rows: Vec<u64> = m1.column_rows(c).into_iter().map(|r| r as u64).collect();
            assert_eq!(seq.column_rows(1, &f).unwrap(), rows);
        }
        let f = DensePolynomial::new(81, vec![80, 7]);
        assert_eq!(seq.column_rows(2, &f).unwrap().len(), 3);
    }
}
