//! Orthogonal arrays, packing arrays and separating hash families, and the
//! conversion chain from packing arrays down to cover-free incidence
//! matrices.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::cover::{self, RelSets, Relative, Work};
use crate::embedding::{self, EmbeddingLevel, EmbeddingSequence, LevelParams, NestedGrid};
use crate::field::{Field, FieldError};
use crate::matrix::{IncidenceMatrix, Provenance, DEFAULT_MAX_CELLS};
use crate::poly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DesignError {
    #[error("array of {rows} x {cols} cells exceeds the limit of {limit}")]
    ArrayTooLarge { rows: u128, cols: u128, limit: u64 },
    #[error("w = {w} exceeds (k-1)/(t-1) = {max}")]
    WTooLarge { w: usize, max: usize },
    #[error("need {needed} columns, array has {available}")]
    TooFewColumns { needed: usize, available: usize },
    #[error("levels {level} and {next} are not nested: {reason}")]
    NotNested { level: usize, next: usize, reason: String },
    #[error("level {level}: {reason}")]
    ParamViolation { level: usize, reason: String },
    #[error("not a valid packing array: {0:?}")]
    NotAPackingArray(DesignViolation),
    #[error("cell ({row}, {col}) = {value} is outside the alphabet of size {alphabet}")]
    CellOutOfRange {
        row: usize,
        col: usize,
        value: u32,
        alphabet: u32,
    },
    #[error("expected {expected} cells, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("w = {w} needs more than {n} columns")]
    WTooLargeForDomain { w: usize, n: usize },
    #[error("work budget of {0} exhausted")]
    BudgetExceeded(u64),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrayKind {
    Orthogonal,
    Packing,
}

/// `rows × cols` array over `[0, v)`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignArray {
    pub rows: usize,
    pub cols: usize,
    pub v: u32,
    pub t: usize,
    pub kind: ArrayKind,
    pub cells: Vec<u32>,
}

impl DesignArray {
    pub fn new(
        kind: ArrayKind,
        rows: usize,
        cols: usize,
        v: u32,
        t: usize,
        cells: Vec<u32>,
    ) -> Result<Self, DesignError> {
        if cells.len() != rows * cols {
            return Err(DesignError::ShapeMismatch {
                expected: rows * cols,
                got: cells.len(),
            });
        }
        if let Some(i) = cells.iter().position(|&c| c >= v) {
            return Err(DesignError::CellOutOfRange {
                row: i / cols,
                col: i % cols,
                value: cells[i],
                alphabet: v,
            });
        }
        Ok(Self {
            rows,
            cols,
            v,
            t,
            kind,
            cells,
        })
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.cells[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.cells[r * self.cols..(r + 1) * self.cols]
    }

    pub fn as_packing(&self) -> Self {
        Self {
            kind: ArrayKind::Packing,
            ..self.clone()
        }
    }

    /// Largest number of positions in which two distinct rows agree.
    pub fn max_row_agreement(&self) -> usize {
        let mut best = 0;
        for a in 0..self.rows {
            for b in a + 1..self.rows {
                let agree = self.row(a).iter().zip(self.row(b)).filter(|(x, y)| x == y).count();
                best = best.max(agree);
            }
        }
        best
    }
}

/// `N × n` array of function values in `[0, m)`: row `i` is the function
/// `f_i`, column `j` the domain point `j`. Only type `{1, w}` is modelled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SepHashFamily {
    pub functions: usize,
    pub n: usize,
    pub m: u32,
    pub w: usize,
    pub cells: Vec<u32>,
}

impl SepHashFamily {
    pub fn new(functions: usize, n: usize, m: u32, w: usize, cells: Vec<u32>) -> Result<Self, DesignError> {
        if cells.len() != functions * n {
            return Err(DesignError::ShapeMismatch {
                expected: functions * n,
                got: cells.len(),
            });
        }
        if let Some(i) = cells.iter().position(|&c| c >= m) {
            return Err(DesignError::CellOutOfRange {
                row: i / n,
                col: i % n,
                value: cells[i],
                alphabet: m,
            });
        }
        Ok(Self {
            functions,
            n,
            m,
            w,
            cells,
        })
    }

    /// From rows of 1-based symbols; the range size is the largest symbol.
    pub fn from_one_based<R: AsRef<[u32]>>(rows: &[R], w: usize) -> Result<Self, DesignError> {
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let mut cells = Vec::with_capacity(rows.len() * n);
        for r in rows {
            let r = r.as_ref();
            if r.len() != n {
                return Err(DesignError::ShapeMismatch {
                    expected: n,
                    got: r.len(),
                });
            }
            for &s in r {
                cells.push(s.checked_sub(1).ok_or(DesignError::CellOutOfRange {
                    row: 0,
                    col: 0,
                    value: 0,
                    alphabet: 0,
                })?);
            }
        }
        let m = cells.iter().copied().max().map_or(0, |x| x + 1);
        Self::new(rows.len(), n, m, w, cells)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.cells[r * self.n + c]
    }
}

fn check_bush_strength(q: u64, t: usize) -> Result<(), DesignError> {
    if t < 2 || t as u64 > q {
        return Err(DesignError::ParamViolation {
            level: 0,
            reason: alloc::format!("strength {t} must lie in 2..={q}"),
        });
    }
    Ok(())
}

fn too_large(rows: u128, cols: u128, limit: u64) -> Result<(), DesignError> {
    if rows.saturating_mul(cols) > u128::from(limit) {
        Err(DesignError::ArrayTooLarge { rows, cols, limit })
    } else {
        Ok(())
    }
}

/// OA(q^t; t, q, q): rows are the polynomials of degree `< t` in canonical
/// order, columns the field elements, cell `f(x)`.
pub fn bush_oa(field: &Field, t: usize) -> Result<DesignArray, DesignError> {
    let q = field.order();
    check_bush_strength(q, t)?;
    let rows = poly::count(q, t - 1).unwrap_or(u64::MAX);
    too_large(u128::from(rows), u128::from(q), DEFAULT_MAX_CELLS)?;
    let mut cells = Vec::with_capacity((rows * q) as usize);
    for idx in 0..rows {
        let coeffs = poly::coeffs_of(idx, q, t);
        cells.extend((0..q as u32).map(|x| poly::eval_raw(field, &coeffs, x)));
    }
    DesignArray::new(ArrayKind::Orthogonal, rows as usize, q as usize, q as u32, t, cells)
}

/// Bush arrays over `F_q ⊂ F_{q^2} ⊂ …`, one per level, with rows listed
/// subfield-first so that each array is the top-left corner of the next.
pub fn bush_oa_tower(field: &Field, t: usize, levels: usize) -> Result<Vec<DesignArray>, DesignError> {
    check_bush_strength(field.order(), t)?;
    let fields = field.tower(levels)?;
    let mut out = Vec::with_capacity(levels);
    for top in 0..levels {
        let q = fields[top].order();
        let rows = poly::count(q, t - 1).unwrap_or(u64::MAX);
        too_large(u128::from(rows), u128::from(q), DEFAULT_MAX_CELLS)?;
        let specs: Vec<(u64, u64)> = fields[..=top].iter().map(|f| (f.order(), (t - 1) as u64)).collect();
        let (polys, _) = embedding::nested_columns(&specs);
        let mut cells = Vec::with_capacity(polys.len() * q as usize);
        for coeffs in &polys {
            cells.extend((0..q as u32).map(|x| poly::eval_raw(&fields[top], coeffs, x)));
        }
        out.push(DesignArray::new(
            ArrayKind::Orthogonal,
            polys.len(),
            q as usize,
            q as u32,
            t,
            cells,
        )?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProjectionFault {
    /// The tuple occurs more than once.
    Duplicate,
    /// The tuple never occurs (orthogonal arrays only).
    Missing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignViolation {
    pub columns: Vec<usize>,
    pub tuple: Vec<u32>,
    pub fault: ProjectionFault,
}

/// Checks one `t`-column projection.
pub fn check_projection(a: &DesignArray, columns: &[usize]) -> Option<DesignViolation> {
    let v = u128::from(a.v);
    let encode = |r: usize| columns.iter().fold(0u128, |acc, &c| acc * v + u128::from(a.get(r, c)));
    let decode = |mut code: u128| {
        let mut tuple = vec![0u32; columns.len()];
        for slot in tuple.iter_mut().rev() {
            *slot = (code % v) as u32;
            code /= v;
        }
        tuple
    };
    let mut codes: Vec<u128> = (0..a.rows).map(encode).collect();
    codes.sort_unstable();
    if let Some(w) = codes.windows(2).find(|w| w[0] == w[1]) {
        return Some(DesignViolation {
            columns: columns.to_vec(),
            tuple: decode(w[0]),
            fault: ProjectionFault::Duplicate,
        });
    }
    if a.kind == ArrayKind::Orthogonal {
        // Distinct codes, so the first gap is the first missing tuple.
        let total = v.checked_pow(columns.len() as u32).unwrap_or(u128::MAX);
        let missing = codes
            .iter()
            .enumerate()
            .find(|&(i, &c)| c != i as u128)
            .map(|(i, _)| i as u128)
            .or_else(|| ((codes.len() as u128) < total).then_some(codes.len() as u128));
        if let Some(code) = missing {
            return Some(DesignViolation {
                columns: columns.to_vec(),
                tuple: decode(code),
                fault: ProjectionFault::Missing,
            });
        }
    }
    None
}

/// Lexicographic successor of a sorted `k`-subset of `0..n`.
pub fn next_subset(s: &mut [usize], n: usize) -> bool {
    let k = s.len();
    for i in (0..k).rev() {
        if s[i] < n - k + i {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// All `t`-column projections in lexicographic order; first violation wins.
pub fn verify_design(a: &DesignArray) -> Result<(), DesignViolation> {
    let t = a.t.min(a.cols);
    if t == 0 {
        return Ok(());
    }
    let mut cols: Vec<usize> = (0..t).collect();
    loop {
        if let Some(v) = check_projection(a, &cols) {
            return Err(v);
        }
        if !next_subset(&mut cols, a.cols) {
            return Ok(());
        }
    }
}

/// `(k - 1) / (t - 1)`, or `None` for strength 1 where any `w` works.
pub fn max_w(a: &DesignArray) -> Option<usize> {
    (a.t >= 2).then(|| (a.cols - 1) / (a.t - 1))
}

/// Transpose of a verified packing array as an SHF(k; n, v, {1, w}).
pub fn pa_to_shf(a: &DesignArray, w: usize) -> Result<SepHashFamily, DesignError> {
    if let Some(max) = max_w(a) {
        if w > max {
            return Err(DesignError::WTooLarge { w, max });
        }
    }
    verify_design(&a.as_packing()).map_err(DesignError::NotAPackingArray)?;
    let mut cells = Vec::with_capacity(a.cells.len());
    for c in 0..a.cols {
        cells.extend((0..a.rows).map(|r| a.get(r, c)));
    }
    SepHashFamily::new(a.cols, a.rows, a.v, w, cells)
}

struct ShfView<'a>(&'a SepHashFamily);

impl Relative for ShfView<'_> {
    fn columns(&self) -> usize {
        self.0.n
    }

    /// Universe = all functions; column `c` contributes the functions on
    /// which it collides with the target.
    fn relative(&self, target: usize) -> RelSets {
        let s = self.0;
        let words = s.functions.div_ceil(64).max(1);
        let mut universe = vec![0u64; words];
        for r in 0..s.functions {
            universe[r / 64] |= 1 << (r % 64);
        }
        let mut sets = vec![0u64; words * s.n];
        for c in 0..s.n {
            for r in 0..s.functions {
                if s.get(r, c) == s.get(r, target) {
                    sets[c * words + r / 64] |= 1 << (r % 64);
                }
            }
        }
        RelSets { words, universe, sets }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShfViolation {
    /// Column that no function separates from `others`.
    pub target: usize,
    pub others: Vec<usize>,
}

pub const DEFAULT_SHF_BUDGET: u64 = 1_000_000_000;

/// Whether some `w` other columns agree with `target` on every function.
pub fn shf_target_inseparable(s: &SepHashFamily, target: usize, work: &mut Work) -> Result<bool, DesignError> {
    if s.w + 1 > s.n {
        return Err(DesignError::WTooLargeForDomain { w: s.w, n: s.n });
    }
    let limit = work.limit;
    cover::target_covered(&ShfView(s), target, s.w, work).map_err(|_| DesignError::BudgetExceeded(limit))
}

/// First violating `(w+1)`-set of columns in lexicographic order.
pub fn first_shf_violation(s: &SepHashFamily, work: &mut Work) -> Result<Option<ShfViolation>, DesignError> {
    let limit = work.limit;
    let found = cover::first_witness(&ShfView(s), s.w, work).map_err(|_| DesignError::BudgetExceeded(limit))?;
    Ok(found.map(|(target, others)| ShfViolation { target, others }))
}

/// Checks the `{1, w}` property with the default work budget.
pub fn verify_shf(s: &SepHashFamily) -> Result<Result<(), ShfViolation>, DesignError> {
    verify_shf_within(s, DEFAULT_SHF_BUDGET)
}

/// On failure reports the first violating `(w+1)`-set of columns in
/// lexicographic order, with its smallest inseparable member as target.
pub fn verify_shf_within(s: &SepHashFamily, budget: u64) -> Result<Result<(), ShfViolation>, DesignError> {
    if s.w + 1 > s.n {
        return Err(DesignError::WTooLargeForDomain { w: s.w, n: s.n });
    }
    let mut work = Work::new(budget);
    for target in 0..s.n {
        if shf_target_inseparable(s, target, &mut work)? {
            let v = first_shf_violation(s, &mut work)?.expect("an inseparable column implies a violating set");
            return Ok(Err(v));
        }
    }
    Ok(Ok(()))
}

/// One-hot expansion: row `(i, x)` at position `i * m + x` holds a 1 in
/// column `j` iff `f_i(j) = x`.
pub fn shf_to_cff(s: &SepHashFamily) -> IncidenceMatrix {
    let m = s.m as usize;
    let mut out = IncidenceMatrix::zeros(s.functions * m, s.n);
    for i in 0..s.functions {
        for j in 0..s.n {
            out.set(i * m + s.get(i, j) as usize, j, true);
        }
    }
    out.d_claimed = s.w as u32;
    out.row_labels = Some(
        (0..s.functions as u32)
            .flat_map(|i| (0..s.m).map(move |x| (i, x)))
            .collect(),
    );
    out.provenance = Provenance::HashFamily {
        functions: s.functions as u32,
        range: s.m,
        w: s.w as u32,
    };
    out
}

/// First `i(t-1) + 1` columns.
pub fn pa_restrict_columns(a: &DesignArray, i: usize) -> Result<DesignArray, DesignError> {
    let needed = i * a.t.saturating_sub(1) + 1;
    if needed > a.cols {
        return Err(DesignError::TooFewColumns {
            needed,
            available: a.cols,
        });
    }
    let mut cells = Vec::with_capacity(a.rows * needed);
    for r in 0..a.rows {
        cells.extend_from_slice(&a.row(r)[..needed]);
    }
    Ok(DesignArray {
        cols: needed,
        cells,
        ..a.clone()
    })
}

fn not_nested(level: usize, reason: &str) -> DesignError {
    DesignError::NotNested {
        level,
        next: level + 1,
        reason: reason.into(),
    }
}

/// Embedding family of `d_l`-CFFs from nested packing arrays.
///
/// Each array is cut to `d_l(t_l - 1) + 1` columns, transposed and expanded.
/// CFF rows `(i, x)` are listed so that rows of the previous level come
/// first; CFF columns are the array rows in their given order.
pub fn pa_embedding_lift(seq: &[DesignArray], d: &[usize]) -> Result<EmbeddingSequence, DesignError> {
    if seq.is_empty() || seq.len() != d.len() {
        return Err(DesignError::ParamViolation {
            level: 0,
            reason: "need one d per array".into(),
        });
    }
    let mut cut = Vec::with_capacity(seq.len());
    for (l, (a, &dl)) in seq.iter().zip(d).enumerate() {
        if dl == 0 {
            return Err(DesignError::ParamViolation {
                level: l,
                reason: "d must be at least 1".into(),
            });
        }
        if let Some(max) = max_w(a) {
            if dl > max {
                return Err(DesignError::ParamViolation {
                    level: l,
                    reason: alloc::format!("d = {dl} exceeds (k-1)/(t-1) = {max}"),
                });
            }
        }
        verify_design(&a.as_packing()).map_err(DesignError::NotAPackingArray)?;
        cut.push(pa_restrict_columns(a, dl)?);
    }
    for l in 0..seq.len() - 1 {
        let (a, b) = (&cut[l], &cut[l + 1]);
        if d[l] > d[l + 1] {
            return Err(DesignError::ParamViolation {
                level: l + 1,
                reason: "d may not decrease".into(),
            });
        }
        if a.rows > b.rows || a.cols > b.cols || a.v > b.v || seq[l].t > seq[l + 1].t {
            return Err(not_nested(l, "dimensions decrease"));
        }
        if (0..a.rows).any(|r| b.row(r)[..a.cols] != *a.row(r)) {
            return Err(not_nested(l, "top-left corner differs"));
        }
    }

    let grid = NestedGrid::new(cut.iter().map(|a| (a.cols as u64, u64::from(a.v))).collect());
    let mut levels = Vec::with_capacity(cut.len());
    for (l, a) in cut.iter().enumerate() {
        let pairs = grid.pairs(l);
        let mut m = IncidenceMatrix::zeros(pairs.len(), a.rows);
        for j in 0..a.rows {
            for i in 0..a.cols {
                let pos = grid.position(l, i as u64, u64::from(a.get(j, i)));
                m.set(pos as usize, j, true);
            }
        }
        m.d_claimed = d[l] as u32;
        m.row_labels = Some(pairs);
        m.provenance = Provenance::HashFamily {
            functions: a.cols as u32,
            range: a.v,
            w: d[l] as u32,
        };
        let params = LevelParams {
            i: l as u32,
            q: u64::from(a.v),
            k: (a.t - 1) as u64,
            d: d[l] as u64,
            t: BigUint::from(m.rows()),
            n: BigUint::from(m.cols()),
        };
        levels.push(EmbeddingLevel {
            params,
            matrix: Some(m),
        });
    }
    Ok(EmbeddingSequence {
        fields: Vec::new(),
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cff::{self, CffVerdict};
    use crate::embedding::{build_monotone_family, check_embedding_family};
    use crate::fixtures;

    fn gf(q: u64) -> Field {
        Field::of_order(q).unwrap()
    }

    fn all_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut s: Vec<usize> = (0..k).collect();
        loop {
            out.push(s.clone());
            if !next_subset(&mut s, n) {
                return out;
            }
        }
    }

    /// Direct count of every tuple in every projection.
    fn oracle_is_oa(a: &DesignArray) -> bool {
        all_subsets(a.cols, a.t).iter().all(|cols| {
            let total = (a.v as usize).pow(a.t as u32);
            let mut count = vec![0usize; total];
            for r in 0..a.rows {
                let code = cols
                    .iter()
                    .fold(0usize, |acc, &c| acc * a.v as usize + a.get(r, c) as usize);
                count[code] += 1;
            }
            count.iter().all(|&x| x == 1)
        })
    }

    #[test]
    fn bush_small() {
        for (q, rows) in [(2u64, 4usize), (3, 9), (4, 16), (5, 25)] {
            let a = bush_oa(&gf(q), 2).unwrap();
            assert_eq!((a.rows, a.cols), (rows, q as usize));
            assert_eq!(verify_design(&a), Ok(()));
            assert!(oracle_is_oa(&a));
            assert_eq!(verify_design(&a.as_packing()), Ok(()));
            assert!(a.max_row_agreement() <= 1);
        }
        let a = bush_oa(&gf(3), 3).unwrap();
        assert_eq!(a.rows, 27);
        assert_eq!(verify_design(&a), Ok(()));
        assert_eq!(a.max_row_agreement(), 2);
        assert!(bush_oa(&gf(3), 1).is_err());
        assert!(bush_oa(&gf(2), 3).is_err());
    }

    #[test]
    fn corrupted_oa_reports_tuple() {
        let mut a = bush_oa(&gf(3), 2).unwrap();
        a.cells[0] = 1; // row 0 was (0, 0, 0)
        let v = verify_design(&a).unwrap_err();
        assert_eq!(v.columns, [0, 1]);
        assert_eq!(v.tuple, [1, 0]);
        assert_eq!(v.fault, ProjectionFault::Duplicate);

        let mut b = bush_oa(&gf(3), 2).unwrap();
        b.rows -= 1;
        b.cells.truncate(b.rows * b.cols);
        let v = verify_design(&b).unwrap_err();
        assert_eq!(v.fault, ProjectionFault::Missing);
        assert_eq!(verify_design(&b.as_packing()), Ok(()));
    }

    #[test]
    fn shf_chain_matches_polynomial_construction() {
        for q in [2u64, 3, 4, 5] {
            let f = gf(q);
            let a = bush_oa(&f, 2).unwrap();
            let s = pa_to_shf(&a, (q - 1) as usize).unwrap();
            assert_eq!((s.functions, s.n, s.m), (q as usize, (q * q) as usize, q as u32));
            assert_eq!(verify_shf(&s).unwrap(), Ok(()));
            let m = shf_to_cff(&s);
            let c = cff::build_polynomial_cff(&f, 1).unwrap();
            assert!(m.same_bits(&c), "q = {q}");
            for j in 0..m.cols() {
                assert_eq!(m.column_weight(j), q as u32);
            }
        }
        let m = shf_to_cff(&pa_to_shf(&bush_oa(&gf(3), 2).unwrap(), 2).unwrap());
        assert!(m.same_bits(&fixtures::c3_1()));
    }

    #[test]
    fn w_bounds() {
        let a = bush_oa(&gf(3), 2).unwrap();
        assert!(pa_to_shf(&a, 2).is_ok());
        assert_eq!(pa_to_shf(&a, 3), Err(DesignError::WTooLarge { w: 3, max: 2 }));
        let s = pa_to_shf(&a, 1).unwrap();
        assert_eq!(verify_shf(&s).unwrap(), Ok(()));
    }

    #[test]
    fn two_by_six_family() {
        let s = SepHashFamily::from_one_based(&fixtures::SHF_2X6_ONE_BASED, 2).unwrap();
        assert_eq!((s.functions, s.n, s.m), (2, 6, 4));
        assert_eq!(verify_shf(&s).unwrap(), Ok(()));
        // Every column has a symbol no other column shares in some row, so
        // the family also separates against any 3, 4 or 5 others.
        for w in 3..=5 {
            let mut s3 = s.clone();
            s3.w = w;
            assert_eq!(verify_shf(&s3).unwrap(), Ok(()));
        }
        let m = shf_to_cff(&s);
        assert_eq!((m.rows(), m.cols()), (8, 6));
        assert_eq!(cff::verify_cff_exhaustive(&m, 2).unwrap(), CffVerdict::CoverFree);
    }

    #[test]
    fn shf_violation_found() {
        // Column 2 repeats column 0, so it cannot be separated from it.
        let s = SepHashFamily::new(2, 3, 3, 1, vec![0, 1, 0, 1, 2, 1]).unwrap();
        assert_eq!(
            verify_shf(&s).unwrap(),
            Err(ShfViolation {
                target: 0,
                others: vec![2]
            })
        );
        let s = SepHashFamily::new(1, 4, 4, 3, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(verify_shf(&s).unwrap(), Ok(()));
        let big = SepHashFamily { w: 4, ..s };
        assert!(verify_shf(&big).is_err());
    }

    #[test]
    fn identity_shf_gives_unit_columns() {
        let s = SepHashFamily::new(1, 4, 4, 1, vec![0, 1, 2, 3]).unwrap();
        let m = shf_to_cff(&s);
        for j in 0..4 {
            assert_eq!(m.column_rows(j), [j]);
        }
    }

    #[test]
    fn restriction() {
        let a = bush_oa(&gf(3), 2).unwrap();
        let r = pa_restrict_columns(&a, 1).unwrap();
        assert_eq!(r.cols, 2);
        let m = shf_to_cff(&pa_to_shf(&r, 1).unwrap());
        let c = cff::restrict_blocks(&cff::build_polynomial_cff(&gf(3), 1).unwrap(), 2).unwrap();
        assert!(m.same_bits(&c));
        assert_eq!(pa_restrict_columns(&a, 2).unwrap(), a);
        assert_eq!(
            pa_restrict_columns(&a, 3),
            Err(DesignError::TooFewColumns {
                needed: 4,
                available: 3
            })
        );

        let r = pa_restrict_columns(&bush_oa(&gf(4), 2).unwrap(), 2).unwrap();
        let m = shf_to_cff(&pa_to_shf(&r, 2).unwrap());
        assert_eq!((m.rows(), m.cols()), (12, 16));
        assert_eq!(cff::verify_cff_exhaustive(&m, 2).unwrap(), CffVerdict::CoverFree);
    }

    #[test]
    fn lift_binary_tower() {
        let tower = bush_oa_tower(&gf(2), 2, 2).unwrap();
        assert_eq!(tower[1].rows, 16);
        let seq = pa_embedding_lift(&tower, &[1, 1]).unwrap();
        let (a, b) = (seq.matrix(0).unwrap(), seq.matrix(1).unwrap());
        assert_eq!((a.rows(), a.cols(), b.rows(), b.cols()), (4, 4, 8, 16));
        assert_eq!(check_embedding_family(&seq), Ok(()));
        assert_eq!(cff::verify_cff_exhaustive(b, 1).unwrap(), CffVerdict::CoverFree);
    }

    #[test]
    fn lift_matches_monotone_family() {
        let tower = bush_oa_tower(&gf(3), 2, 2).unwrap();
        let seq = pa_embedding_lift(&tower, &[2, 2]).unwrap();
        let mono = build_monotone_family(&gf(3), 1, 2, 2).unwrap();
        for l in 0..2 {
            assert!(seq.matrix(l).unwrap().same_bits(mono.matrix(l).unwrap()), "level {l}");
        }
        assert_eq!(pa_embedding_lift(&tower[..1], &[2]).unwrap().levels.len(), 1);
    }

    #[test]
    fn lift_rejects_unnested() {
        let a = bush_oa(&gf(2), 2).unwrap();
        let b = bush_oa(&gf(4), 2).unwrap();
        // Canonical order over GF(4) lists the constants 2 and 3 before x,
        // so the GF(2) array is not its corner.
        assert!(matches!(
            pa_embedding_lift(&[a.clone(), b], &[1, 1]),
            Err(DesignError::NotNested { .. })
        ));
        assert!(matches!(
            pa_embedding_lift(&[a], &[2]),
            Err(DesignError::ParamViolation { .. })
        ));
        let tower = bush_oa_tower(&gf(3), 2, 2).unwrap();
        assert!(matches!(
            pa_embedding_lift(&tower, &[2, 1]),
            Err(DesignError::ParamViolation { level: 1, .. })
        ));
    }
}
