//! Parallel versions of the verifiers. Verdicts and witnesses match the
//! sequential ones in `cff_core` whenever the work budget suffices.

use std::sync::atomic::{AtomicU64, Ordering};

use cff_core::cff::{self, Certificate, CffError, CffVerdict};
use cff_core::designs::{self, DesignArray, DesignError, DesignViolation, SepHashFamily, ShfViolation};
use cff_core::{IncidenceMatrix, Work};
use rayon::prelude::*;

/// Runs `f` on a pool of `workers` threads (0 = one per core).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Outcome of checking every target column independently.
enum Scan {
    Clean,
    Hit,
    OverBudget,
}

/// `budget` bounds the total work over all targets. Each target runs with
/// the full budget as its own limit, so its cost does not depend on
/// scheduling; targets are skipped only once the finished ones already
/// exceed the budget, in which case the total would too. Running out of
/// budget takes precedence over a violation, which keeps the verdict
/// independent of the thread count.
fn scan_targets(n: usize, budget: u64, check: impl Fn(usize, &mut Work) -> Option<bool> + Sync) -> Scan {
    let used = AtomicU64::new(0);
    let hits: Vec<Option<bool>> = (0..n)
        .into_par_iter()
        .map(|target| {
            if used.load(Ordering::Relaxed) > budget {
                return None;
            }
            let mut work = Work::new(budget);
            let r = check(target, &mut work);
            used.fetch_add(work.used, Ordering::Relaxed);
            r
        })
        .collect();
    if hits.iter().any(Option::is_none) || used.into_inner() > budget {
        Scan::OverBudget
    } else if hits.contains(&Some(true)) {
        Scan::Hit
    } else {
        Scan::Clean
    }
}

pub fn verify_cff(m: &IncidenceMatrix, d: usize, budget: u64) -> Result<CffVerdict, CffError> {
    if d + 1 > m.cols() {
        return Err(CffError::DTooLarge { d, n: m.cols() });
    }
    let scan = scan_targets(m.cols(), budget, |target, work| {
        cff::target_is_covered(m, target, d, work).ok()
    });
    match scan {
        Scan::Clean => Ok(CffVerdict::CoverFree),
        Scan::OverBudget => Err(CffError::BudgetExceeded(budget)),
        Scan::Hit => {
            let mut work = Work::new(budget);
            let w = cff::first_cff_witness(m, d, &mut work)?.expect("a covered column implies a violating tuple");
            Ok(CffVerdict::Violated(w))
        }
    }
}

/// Pairwise intersection scan split by first column.
pub fn verify_certificate(m: &IncidenceMatrix, k: u32, b: u32) -> Result<Certificate, CffError> {
    cff::constant_column_weight(m, b)?;
    let n = m.cols();
    let chunk = (n / (4 * rayon::current_num_threads()).max(1)).max(1);
    let starts: Vec<usize> = (0..n).step_by(chunk).collect();
    let first = starts
        .into_par_iter()
        .filter_map(|s| cff::certificate_scan(m, k, s..(s + chunk).min(n)))
        .min_by_key(|f| (f.a, f.b));
    Ok(match first {
        Some(f) => Certificate::Failed(f),
        None => Certificate::Certified {
            k,
            b,
            max_d: cff::certified_d(m, k, b),
        },
    })
}

/// `t`-subsets of `0..k` whose smallest element is `first`, in order.
fn subsets_from(first: usize, k: usize, t: usize) -> impl Iterator<Item = Vec<usize>> {
    let rest_len = t - 1;
    let pool = k - first - 1;
    let mut cur: Option<Vec<usize>> = (rest_len <= pool).then(|| (0..rest_len).collect());
    std::iter::from_fn(move || {
        let s = cur.as_mut()?;
        let out: Vec<usize> = std::iter::once(first).chain(s.iter().map(|&x| x + first + 1)).collect();
        if rest_len == 0 || !designs::next_subset(s, pool) {
            cur = None;
        }
        Some(out)
    })
}

/// Same first violation as [`designs::verify_design`].
pub fn verify_design(a: &DesignArray) -> Result<(), DesignViolation> {
    let t = a.t.min(a.cols);
    if t == 0 {
        return Ok(());
    }
    let found = (0..=a.cols - t)
        .into_par_iter()
        .filter_map(|first| subsets_from(first, a.cols, t).find_map(|cols| designs::check_projection(a, &cols)))
        .min_by(|x, y| x.columns.cmp(&y.columns));
    match found {
        Some(v) => Err(v),
        None => Ok(()),
    }
}

pub fn verify_shf(s: &SepHashFamily, budget: u64) -> Result<Result<(), ShfViolation>, DesignError> {
    if s.w + 1 > s.n {
        return Err(DesignError::WTooLargeForDomain { w: s.w, n: s.n });
    }
    let scan = scan_targets(s.n, budget, |target, work| {
        designs::shf_target_inseparable(s, target, work).ok()
    });
    match scan {
        Scan::Clean => Ok(Ok(())),
        Scan::OverBudget => Err(DesignError::BudgetExceeded(budget)),
        Scan::Hit => {
            let mut work = Work::new(budget);
            let v = designs::first_shf_violation(s, &mut work)?.expect("an inseparable column implies a violating set");
            Ok(Err(v))
        }
    }
}
