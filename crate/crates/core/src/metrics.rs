//! Exact parameters, compression ratios and the reference ratio tables.
//!
//! Counts are `BigUint`. Ratios below 10^15 are rendered by exact integer
//! division to two decimals; larger ones as `a.bc × 10^E` from base-10
//! logarithms. Both forms truncate rather than round, which is how the
//! reference tables print (512/144 as 3.55, 1.9596 × 10^202 as 1.95).

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricsError {
    #[error("{0}")]
    ParamViolation(String),
    #[error("the bound needs d >= 2, got {0}")]
    DUndefined(u64),
    #[error("unknown table {0:?}; expected k2, k3, d2, d3 or transition")]
    UnknownTable(String),
}

/// Ratios at or above `10^SCIENTIFIC_EXPONENT` are printed in scientific form.
pub const SCIENTIFIC_EXPONENT: f64 = 15.0;

/// `log10(n)` for `n > 0`, accurate to double precision.
pub fn log10_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return libm::log10(n.to_u64().unwrap() as f64);
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().unwrap() as f64;
    libm::log10(top) + shift as f64 * core::f64::consts::LOG10_2
}

/// `n / t` with its decimal rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct BigRatio {
    pub n: BigUint,
    pub t: BigUint,
    /// `log10(n / t)`.
    pub log10: f64,
}

impl BigRatio {
    pub fn is_scientific(&self) -> bool {
        self.log10 >= SCIENTIFIC_EXPONENT
    }

    /// Value as `f64` when it is below the scientific threshold.
    pub fn to_f64(&self) -> Option<f64> {
        if self.is_scientific() {
            return None;
        }
        let (q, r) = (&self.n / &self.t, &self.n % &self.t);
        Some(q.to_f64()? + r.to_f64()? / self.t.to_f64()?)
    }

    /// Mantissa in `[1, 10)` and exponent.
    pub fn mantissa_exponent(&self) -> (f64, i64) {
        let mut e = libm::floor(self.log10) as i64;
        let mut mant = libm::pow(10.0, self.log10 - e as f64);
        if mant >= 10.0 {
            mant /= 10.0;
            e += 1;
        }
        (mant, e)
    }

    /// Mantissa cut to two decimals. The tiny slack keeps values such as
    /// 2.9999999999 that are really 3 from printing as 2.99.
    fn mantissa_digits(&self) -> (u32, i64) {
        let (m, e) = self.mantissa_exponent();
        let h = libm::floor(m * 100.0 + 1e-9) as u32;
        if h >= 1000 {
            (100, e + 1)
        } else {
            (h, e)
        }
    }

    /// Two decimals, truncated.
    fn fixed(&self) -> String {
        let hundredths = (&self.n * 100u32) / &self.t;
        let (int, frac) = (&hundredths / 100u32, (&hundredths % 100u32).to_u32().unwrap());
        format!("{int}.{frac:02}")
    }
}

impl fmt::Display for BigRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_scientific() {
            let (h, e) = self.mantissa_digits();
            write!(f, "{}.{:02} × 10^{e}", h / 100, h % 100)
        } else {
            f.write_str(&self.fixed())
        }
    }
}

/// `n / t`.
pub fn compression_ratio(t: &BigUint, n: &BigUint) -> Result<BigRatio, MetricsError> {
    if t.is_zero() {
        return Err(MetricsError::ParamViolation("t must be at least 1".into()));
    }
    let log10 = if n.is_zero() {
        f64::NEG_INFINITY
    } else {
        log10_big(n) - log10_big(t)
    };
    Ok(BigRatio {
        n: n.clone(),
        t: t.clone(),
        log10,
    })
}

/// `q^(2^i)`.
pub fn level_order(q: u64, i: u32) -> BigUint {
    let mut x = BigUint::from(q);
    for _ in 0..i {
        x = &x * &x;
    }
    x
}

/// `t = (dk+1) q^(2^i)` and `n = (q^(2^i))^(k+1)`.
pub fn level_params(q: u64, k: u64, d: u64, i: u32) -> Result<(BigUint, BigUint), MetricsError> {
    if q < 2 || k == 0 || d == 0 {
        return Err(MetricsError::ParamViolation("need q >= 2, k >= 1, d >= 1".into()));
    }
    let qi = level_order(q, i);
    let blocks = BigUint::from(d) * BigUint::from(k) + 1u32;
    if blocks > qi {
        return Err(MetricsError::ParamViolation(format!(
            "d·k + 1 = {blocks} exceeds the field order {qi}"
        )));
    }
    let n = num_traits::pow::pow(qi.clone(), (k + 1) as usize);
    Ok((blocks * qi, n))
}

/// `n / ((d^2 / log d) log n)` with logarithms to base 2.
pub fn info_bound(n: &BigUint, d: u64) -> Result<f64, MetricsError> {
    info_bound_base(n, d, 2.0)
}

pub fn info_bound_base(n: &BigUint, d: u64, base: f64) -> Result<f64, MetricsError> {
    if d < 2 {
        return Err(MetricsError::DUndefined(d));
    }
    if *n < BigUint::from(2u32) {
        return Err(MetricsError::ParamViolation("n must be at least 2".into()));
    }
    let ln_base = libm::log(base);
    let log_n = log10_big(n) * core::f64::consts::LN_10 / ln_base;
    let log_d = libm::log(d as f64) / ln_base;
    let d2 = (d as f64) * (d as f64);
    // n itself may not fit in f64; go through logs.
    let log10_value = log10_big(n) - libm::log10(d2 / log_d * log_n);
    Ok(libm::pow(10.0, log10_value))
}

/// `n_used / ((dk+1) q)`.
pub fn actual_ratio_with_partial_columns(q: u64, k: u64, d: u64, n_used: &BigUint) -> Result<BigRatio, MetricsError> {
    let (t, n) = level_params(q, k, d, 0)?;
    if *n_used > n {
        return Err(MetricsError::ParamViolation(format!("n_used exceeds q^(k+1) = {n}")));
    }
    compression_ratio(&t, n_used)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableId {
    /// Growing `d`, fixed `k = 2`.
    K2,
    K3,
    /// Growing `k`, fixed `d = 2`.
    D2,
    D3,
    /// `q = 16, 256`, `d = floor(log4 n)`, `n` doubling.
    Transition,
}

impl TableId {
    pub const ALL: [TableId; 5] = [TableId::K2, TableId::K3, TableId::D2, TableId::D3, TableId::Transition];

    pub fn name(self) -> &'static str {
        match self {
            TableId::K2 => "k2",
            TableId::K3 => "k3",
            TableId::D2 => "d2",
            TableId::D3 => "d3",
            TableId::Transition => "transition",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            TableId::K2 => "Prioritizing d increases with fixed k = 2",
            TableId::K3 => "Prioritizing d increases with fixed k = 3",
            TableId::D2 => "Prioritizing ratio increase with fixed d = 2",
            TableId::D3 => "Prioritizing ratio increase with fixed d = 3",
            TableId::Transition => "Compression ratio for q = 16, 256; 1 <= k <= 3; d = log4 n",
        }
    }
}

impl core::str::FromStr for TableId {
    type Err = MetricsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TableId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| MetricsError::UnknownTable(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    /// Level `i`, or the 1-based row number for the transition table.
    pub index: u32,
    pub q: BigUint,
    pub k: u64,
    pub d: u64,
    pub n: BigUint,
    /// `n` in decimal, or as `q^e` when that is shorter than 19 digits.
    pub n_text: String,
    pub t: BigUint,
    pub ratio: BigRatio,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioTable {
    pub id: TableId,
    pub rows: Vec<RatioRow>,
}

fn n_text(q: &BigUint, e: u64, n: &BigUint) -> String {
    if n.bits() < 60 {
        n.to_string()
    } else {
        format!("{q}^{e}")
    }
}

fn row(index: u32, q: BigUint, k: u64, d: u64) -> RatioRow {
    let t = (BigUint::from(d) * BigUint::from(k) + 1u32) * &q;
    let n = num_traits::pow::pow(q.clone(), (k + 1) as usize);
    let ratio = compression_ratio(&t, &n).expect("t > 0");
    RatioRow {
        index,
        n_text: n_text(&q, k + 1, &n),
        q,
        k,
        d,
        n,
        t,
        ratio,
    }
}

const BASE_Q: u64 = 4;
const LEVELS: u32 = 4;

/// `(q, k)` for the transition table: start at `(16, 1)`; raise `k` while
/// `q^(k+1) < n`, and when `dk + 1` no longer fits in `q` move to `q = 256`
/// with the previous `k`.
fn transition_rows() -> Vec<RatioRow> {
    let mut out = Vec::new();
    let (mut q, mut k) = (16u64, 1u64);
    for (r, e) in (7u32..=27).enumerate() {
        let n = BigUint::one() << e;
        let d = u64::from(e / 2);
        loop {
            let cap = num_traits::pow::pow(BigUint::from(q), (k + 1) as usize);
            if d * k + 1 > q {
                q = 256;
                k -= 1;
            } else if cap < n {
                if d * (k + 1) + 1 > q {
                    q = 256;
                } else {
                    k += 1;
                }
            } else {
                break;
            }
        }
        let t = BigUint::from((d * k + 1) * q);
        let ratio = compression_ratio(&t, &n).expect("t > 0");
        out.push(RatioRow {
            index: r as u32 + 1,
            q: BigUint::from(q),
            k,
            d,
            n_text: n.to_string(),
            n,
            t,
            ratio,
        });
    }
    out
}

pub fn emit_table(id: TableId) -> RatioTable {
    let rows = match id {
        TableId::K2 | TableId::K3 => {
            let k = if id == TableId::K2 { 2 } else { 3 };
            (0..LEVELS)
                .map(|i| {
                    let qi = level_order(BASE_Q, i);
                    let d = if i == 0 { 1 } else { div_ceil_big(&qi, k) - 1 };
                    row(i, qi, k, d)
                })
                .collect()
        }
        TableId::D2 | TableId::D3 => {
            let d = if id == TableId::D2 { 2 } else { 3 };
            (0..LEVELS)
                .map(|i| {
                    let qi = level_order(BASE_Q, i);
                    let k = div_ceil_big(&qi, d) - 1;
                    row(i, qi, k, d)
                })
                .collect()
        }
        TableId::Transition => transition_rows(),
    };
    RatioTable { id, rows }
}

fn div_ceil_big(a: &BigUint, b: u64) -> u64 {
    let b = BigUint::from(b);
    ((a + &b - 1u32) / b).to_u64().expect("table parameters fit in u64")
}

const HEADER: [&str; 7] = ["i", "q", "k", "d", "n", "t", "ratio"];

impl RatioRow {
    fn fields(&self) -> [String; 7] {
        [
            self.index.to_string(),
            self.q.to_string(),
            self.k.to_string(),
            self.d.to_string(),
            self.n_text.clone(),
            self.t.to_string(),
            self.ratio.to_string(),
        ]
    }
}

impl RatioTable {
    pub fn to_csv(&self) -> String {
        let mut s = HEADER.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.fields().join(","));
            s.push('\n');
        }
        s
    }

    /// Right-aligned columns under a title line.
    pub fn to_text(&self) -> String {
        let cells: Vec<[String; 7]> = self.rows.iter().map(RatioRow::fields).collect();
        let mut width = HEADER.map(|h| h.chars().count());
        for r in &cells {
            for (w, c) in width.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |fields: &[&str]| {
            let parts: Vec<String> = fields
                .iter()
                .zip(width)
                .map(|(f, w)| format!("{}{f}", " ".repeat(w - f.chars().count())))
                .collect();
            let mut l = parts.join("  ");
            l.push('\n');
            l
        };
        let mut s = format!("{}\n", self.id.title());
        s.push_str(&line(&HEADER));
        for r in &cells {
            let refs: Vec<&str> = r.iter().map(String::as_str).collect();
            s.push_str(&line(&refs));
        }
        s
    }
}
