//! Exact "can this target be covered by at most `s` other columns" search.
//!
//! Both the cover-free property of an incidence matrix and the `{1,w}`
//! separation property of a hash family reduce to the same question: for a
//! target column `x`, is its universe (rows of `B_x`, or all functions) the
//! union of the sets contributed by at most `s` other columns? This module
//! answers it with a branch-and-bound set-cover search and reconstructs the
//! lexicographically first violating tuple when one exists.

use alloc::vec;
use alloc::vec::Vec;

/// Universe and per-column contributions relative to one target.
pub(crate) struct RelSets {
    pub words: usize,
    pub universe: Vec<u64>,
    /// `columns * words` words; the target's own slot is unused.
    pub sets: Vec<u64>,
}

impl RelSets {
    #[inline]
    pub fn set(&self, col: usize) -> &[u64] {
        &self.sets[col * self.words..(col + 1) * self.words]
    }
}

pub(crate) trait Relative {
    fn columns(&self) -> usize;
    fn relative(&self, target: usize) -> RelSets;
}

/// The work limit was hit before the search finished.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Exhausted;

/// Work accounting in word operations.
#[derive(Debug, Clone)]
pub struct Work {
    pub used: u64,
    pub limit: u64,
}

impl Work {
    pub fn new(limit: u64) -> Self {
        Self { used: 0, limit }
    }

    #[inline]
    pub(crate) fn charge(&mut self, n: u64) -> Result<(), Exhausted> {
        self.used = self.used.saturating_add(n);
        if self.used > self.limit {
            Err(Exhausted)
        } else {
            Ok(())
        }
    }
}

#[inline]
pub(crate) fn popcount(ws: &[u64]) -> u32 {
    ws.iter().map(|w| w.count_ones()).sum()
}

#[inline]
fn and_count(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

#[inline]
pub(crate) fn is_empty(ws: &[u64]) -> bool {
    ws.iter().all(|&w| w == 0)
}

/// True if some choice of at most `slots` sets from `candidates` covers
/// `uncovered`.
pub(crate) fn coverable(
    rel: &RelSets,
    uncovered: &[u64],
    candidates: &[usize],
    slots: usize,
    work: &mut Work,
) -> Result<bool, Exhausted> {
    let need = popcount(uncovered);
    if need == 0 {
        return Ok(true);
    }
    if slots == 0 {
        return Ok(false);
    }
    let words = rel.words;
    work.charge((candidates.len() * words) as u64 + 1)?;

    // Keep candidates that still contribute, with their contribution size.
    let mut live: Vec<(usize, u32)> = candidates
        .iter()
        .filter_map(|&c| {
            let k = and_count(rel.set(c), uncovered);
            (k > 0).then_some((c, k))
        })
        .collect();
    let best = live.iter().map(|&(_, k)| k).max().unwrap_or(0);
    if best == 0 || (best as u64) * (slots as u64) < u64::from(need) {
        return Ok(false);
    }
    if best == need {
        return Ok(true);
    }
    if slots == 1 {
        return Ok(false);
    }

    // Branch on the uncovered element with the fewest covering candidates.
    let mut pivot = None;
    let mut pivot_count = usize::MAX;
    for (wi, &w) in uncovered.iter().enumerate() {
        let mut bits = w;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let cnt = live.iter().filter(|&&(c, _)| rel.set(c)[wi] >> b & 1 == 1).count();
            if cnt < pivot_count {
                pivot_count = cnt;
                pivot = Some((wi, b));
            }
        }
    }
    work.charge((live.len() * need as usize) as u64 / 8 + 1)?;
    let (wi, b) = pivot.expect("uncovered is non-empty");
    if pivot_count == 0 {
        return Ok(false);
    }

    // Larger contributions first; ties by column for determinism.
    live.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
    let branch: Vec<usize> = live
        .iter()
        .filter(|&&(c, _)| rel.set(c)[wi] >> b & 1 == 1)
        .map(|&(c, _)| c)
        .collect();
    let mut remaining: Vec<usize> = live.iter().map(|&(c, _)| c).collect();
    let mut seen: Vec<Vec<u64>> = Vec::new();
    let mut next = vec![0u64; words];
    for c in branch {
        let set = rel.set(c);
        for i in 0..words {
            next[i] = uncovered[i] & !set[i];
        }
        // Candidates with an identical residual are interchangeable.
        if seen.contains(&next) {
            remaining.retain(|&r| r != c);
            continue;
        }
        seen.push(next.clone());
        remaining.retain(|&r| r != c);
        if coverable(rel, &next, &remaining, slots - 1, work)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether `target` is covered by at most `d` of the other columns.
pub(crate) fn target_covered<R: Relative>(
    inst: &R,
    target: usize,
    d: usize,
    work: &mut Work,
) -> Result<bool, Exhausted> {
    let rel = inst.relative(target);
    target_covered_in(&rel, inst.columns(), target, d, work)
}

fn target_covered_in(
    rel: &RelSets,
    columns: usize,
    target: usize,
    d: usize,
    work: &mut Work,
) -> Result<bool, Exhausted> {
    let others: Vec<usize> = (0..columns).filter(|&c| c != target).collect();
    coverable(rel, &rel.universe, &others, d, work)
}

/// Lexicographically first sorted `(d+1)`-tuple containing a member covered
/// by the rest, returned as `(target, covering)` with `target` the smallest
/// such member. Callers should first establish that a violation exists;
/// otherwise this is quadratic in the column count for nothing.
pub(crate) fn first_witness<R: Relative>(
    inst: &R,
    d: usize,
    work: &mut Work,
) -> Result<Option<(usize, Vec<usize>)>, Exhausted> {
    let n = inst.columns();
    if d + 1 > n {
        return Ok(None);
    }
    let mut cache: Vec<Option<RelSets>> = (0..n).map(|_| None).collect();
    let mut prefix: Vec<usize> = Vec::with_capacity(d + 1);
    while prefix.len() < d + 1 {
        let lo = prefix.last().map_or(0, |&l| l + 1);
        let mut chosen = None;
        for a in lo..n {
            // Slots left after placing `a`.
            let rest = d - prefix.len();
            if n - (a + 1) < rest {
                break;
            }
            prefix.push(a);
            let ok = feasible(inst, &mut cache, &prefix, a + 1, rest, work)?;
            prefix.pop();
            if ok {
                chosen = Some(a);
                break;
            }
        }
        match chosen {
            Some(a) => prefix.push(a),
            None => return Ok(None),
        }
    }
    for (pos, &x) in prefix.iter().enumerate() {
        let rel = cached(inst, &mut cache, x);
        let mut left = rel.universe.clone();
        for (other_pos, &y) in prefix.iter().enumerate() {
            if other_pos != pos {
                for (l, s) in left.iter_mut().zip(rel.set(y)) {
                    *l &= !s;
                }
            }
        }
        if is_empty(&left) {
            let covering = prefix.iter().copied().filter(|&y| y != x).collect();
            return Ok(Some((x, covering)));
        }
    }
    unreachable!("feasibility search only completes violating tuples")
}

fn cached<'a, R: Relative>(inst: &R, cache: &'a mut [Option<RelSets>], x: usize) -> &'a RelSets {
    if cache[x].is_none() {
        cache[x] = Some(inst.relative(x));
    }
    cache[x].as_ref().unwrap()
}

/// Can `prefix` be completed with `rest` more columns from `lo..` into a
/// tuple with a covered member?
fn feasible<R: Relative>(
    inst: &R,
    cache: &mut [Option<RelSets>],
    prefix: &[usize],
    lo: usize,
    rest: usize,
    work: &mut Work,
) -> Result<bool, Exhausted> {
    let n = inst.columns();
    let pool: Vec<usize> = (lo..n).collect();
    for &x in prefix {
        let rel = cached(inst, cache, x);
        let mut left = rel.universe.clone();
        for &y in prefix.iter().filter(|&&y| y != x) {
            for (l, s) in left.iter_mut().zip(rel.set(y)) {
                *l &= !s;
            }
        }
        if coverable(rel, &left, &pool, rest, work)? {
            return Ok(true);
        }
    }
    if rest == 0 {
        return Ok(false);
    }
    for &y in &pool {
        let rel = cached(inst, cache, y);
        let mut left = rel.universe.clone();
        for &z in prefix {
            for (l, s) in left.iter_mut().zip(rel.set(z)) {
                *l &= !s;
            }
        }
        let others: Vec<usize> = pool.iter().copied().filter(|&c| c != y).collect();
        if coverable(rel, &left, &others, rest - 1, work)? {
            return Ok(true);
        }
    }
    Ok(false)
}
