//! Exact arithmetic in GF(p^m) and towers of quadratic extensions over it.
//!
//! Elements are plain `u32` indices. An element of the base field GF(p^m) is
//! the coefficient tuple of its polynomial representative read as a base-`p`
//! number, least significant coefficient first. An element of a quadratic
//! extension is a pair `(a, b)` meaning `a + b·y`, with index
//! `index(a) + index(b) · q` where `q` is the order of the field below. Two
//! consequences follow and the rest of the crate leans on both:
//!
//! * index 0 is zero, index 1 is one, and the first `q` indices of a level are
//!   exactly the subfield one level down (the embedding is the identity map on
//!   indices);
//! * addition is digit-wise addition mod `p` on the base-`p` digits of the
//!   index at every level of the tower.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

/// Default upper bound on the order of a field that may be created.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 20;
/// Fields up to this order carry exp/log tables; larger ones multiply
/// recursively through the tower.
pub const TABLE_MAX_ORDER: u64 = 1 << 16;
/// Indices are `u32`, so no configured limit may exceed this.
pub const HARD_MAX_ORDER: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    DegreeZero,
    #[error("field of order {p}^{degree} exceeds the configured limit of {limit}")]
    FieldTooLarge { p: u64, degree: u64, limit: u64 },
    #[error("operands live in fields of different order ({left} and {right})")]
    LevelMismatch { left: u64, right: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element index {index} is out of range for a field of order {order}")]
    ElementOutOfRange { index: u64, order: u64 },
    #[error("descriptor does not reproduce the stored modulus at level {level}")]
    DescriptorMismatch { level: u32 },
}

/// Trial-division primality test. Inputs here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Splits `q = p^m` into `(p, m)`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if p * p > q {
        return Some((q, 1));
    }
    let (mut rest, mut m) = (q, 0u32);
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

/// A field in a quadratic tower. Cheap to clone; immutable after creation.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

struct Inner {
    p: u32,
    /// Degree over GF(p).
    degree: u32,
    level: u32,
    order: u64,
    max_order: u64,
    def: Definition,
    tables: Option<LogTables>,
}

enum Definition {
    Prime,
    /// Monic irreducible of degree > 1 over GF(p), coefficients low to high.
    Base {
        modulus: Vec<u32>,
    },
    /// `y^2 + linear·y + constant` over `parent`.
    Quadratic {
        parent: Field,
        linear: u32,
        constant: u32,
    },
}

struct LogTables {
    /// `exp[i] = g^i` for `i < 2(q-1)`, doubled so products skip a reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl core::fmt::Debug for Field {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.inner.p)
            .field("degree", &self.inner.degree)
            .field("level", &self.inner.level)
            .field("order", &self.inner.order)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.descriptor() == other.descriptor()
    }
}

impl Eq for Field {}

/// An element tagged with the order of the field it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub order: u64,
    pub index: u32,
}

/// Enough to rebuild a tower bit-for-bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDescriptor {
    pub p: u64,
    /// Degree of the base field over GF(p).
    pub m: u32,
    pub level: u32,
    /// Modulus coefficient indices, low to high, for levels `0..=level`.
    /// Level 0 of a prime field is `[0, 1]` (the polynomial `x`).
    pub moduli: Vec<Vec<u32>>,
}

impl Field {
    /// GF(p^m) with the default size limit.
    pub fn new(p: u64, m: u32) -> Result<Self, FieldError> {
        Self::with_limit(p, m, DEFAULT_MAX_ORDER)
    }

    pub fn with_limit(p: u64, m: u32, max_order: u64) -> Result<Self, FieldError> {
        let max_order = max_order.min(HARD_MAX_ORDER);
        if m == 0 {
            return Err(FieldError::DegreeZero);
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let too_large = FieldError::FieldTooLarge {
            p,
            degree: u64::from(m),
            limit: max_order,
        };
        let order = checked_pow(p, m).filter(|&o| o <= max_order).ok_or(too_large)?;
        let p32 = p as u32;
        let def = if m == 1 {
            Definition::Prime
        } else {
            Definition::Base {
                modulus: first_irreducible(p32, m),
            }
        };
        Ok(Self::assemble(p32, m, 0, order, max_order, def))
    }

    /// Field of order `q`, which must be a prime power.
    pub fn of_order(q: u64) -> Result<Self, FieldError> {
        match prime_power(q) {
            Some((p, m)) => Self::new(p, m),
            None => Err(FieldError::NotPrime(q)),
        }
    }

    /// The quadratic extension one level up. Its modulus is the first monic
    /// `y^2 + b·y + c` without a root in `self`, scanning `c + b·q` upwards.
    pub fn extend(&self) -> Result<Self, FieldError> {
        let q = self.order();
        let degree = self.inner.degree * 2;
        let order = q
            .checked_mul(q)
            .filter(|&o| o <= self.inner.max_order)
            .ok_or(FieldError::FieldTooLarge {
                p: u64::from(self.inner.p),
                degree: u64::from(degree),
                limit: self.inner.max_order,
            })?;
        let q32 = q as u32;
        let mut found = None;
        'scan: for linear in 0..q32 {
            for constant in 0..q32 {
                if !self.quadratic_has_root(linear, constant) {
                    found = Some((linear, constant));
                    break 'scan;
                }
            }
        }
        let (linear, constant) = found.expect("every finite field has an irreducible quadratic");
        let def = Definition::Quadratic {
            parent: self.clone(),
            linear,
            constant,
        };
        Ok(Self::assemble(
            self.inner.p,
            degree,
            self.inner.level + 1,
            order,
            self.inner.max_order,
            def,
        ))
    }

    /// `self` followed by `levels - 1` successive extensions.
    pub fn tower(&self, levels: usize) -> Result<Vec<Field>, FieldError> {
        let mut out = Vec::with_capacity(levels);
        if levels == 0 {
            return Ok(out);
        }
        out.push(self.clone());
        while out.len() < levels {
            let next = out.last().unwrap().extend()?;
            out.push(next);
        }
        Ok(out)
    }

    fn assemble(p: u32, degree: u32, level: u32, order: u64, max_order: u64, def: Definition) -> Self {
        let mut inner = Inner {
            p,
            degree,
            level,
            order,
            max_order,
            def,
            tables: None,
        };
        if order <= TABLE_MAX_ORDER && !matches!(inner.def, Definition::Prime) {
            let tmp = Field { inner: Arc::new(inner) };
            let tables = tmp.build_tables();
            inner = Arc::try_unwrap(tmp.inner).ok().expect("sole owner");
            inner.tables = Some(tables);
        }
        Field { inner: Arc::new(inner) }
    }

    fn build_tables(&self) -> LogTables {
        let q = self.order() as u32;
        let n = q - 1;
        let start = if q == 2 { 1 } else { 2 };
        for g in start..q {
            let mut exp = vec![0u32; 2 * n as usize];
            let mut x = 1u32;
            let mut period = 0u32;
            loop {
                exp[period as usize] = x;
                period += 1;
                x = self.mul_slow(x, g);
                if x == 1 || period == n {
                    break;
                }
            }
            if x == 1 && period == n {
                let mut log = vec![0u32; q as usize];
                for i in 0..n as usize {
                    exp[i + n as usize] = exp[i];
                    log[exp[i] as usize] = i as u32;
                }
                return LogTables { exp, log };
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }

    pub fn p(&self) -> u64 {
        u64::from(self.inner.p)
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.inner.degree
    }

    pub fn level(&self) -> u32 {
        self.inner.level
    }

    pub fn order(&self) -> u64 {
        self.inner.order
    }

    pub fn max_order(&self) -> u64 {
        self.inner.max_order
    }

    /// The field one level down, if this is an extension.
    pub fn subfield(&self) -> Option<&Field> {
        match &self.inner.def {
            Definition::Quadratic { parent, .. } => Some(parent),
            _ => None,
        }
    }

    /// The level-0 field of the tower.
    pub fn base(&self) -> &Field {
        let mut f = self;
        while let Some(s) = f.subfield() {
            f = s;
        }
        f
    }

    /// True if a field of order `order` sits at or below this one in the tower.
    pub fn contains_order(&self, order: u64) -> bool {
        let mut f = Some(self);
        while let Some(x) = f {
            if x.order() == order {
                return true;
            }
            f = x.subfield();
        }
        false
    }

    /// Modulus coefficients low to high (as indices into the field below).
    pub fn modulus(&self) -> Vec<u32> {
        match &self.inner.def {
            Definition::Prime => vec![0, 1],
            Definition::Base { modulus } => modulus.clone(),
            Definition::Quadratic { linear, constant, .. } => vec![*constant, *linear, 1],
        }
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        let mut moduli = Vec::new();
        let mut f = Some(self);
        while let Some(x) = f {
            moduli.push(x.modulus());
            f = x.subfield();
        }
        moduli.reverse();
        let base = self.base();
        FieldDescriptor {
            p: self.p(),
            m: base.degree(),
            level: self.level(),
            moduli,
        }
    }

    /// Rebuilds the tower described by `desc` and checks that every modulus
    /// comes out identical.
    pub fn from_descriptor(desc: &FieldDescriptor) -> Result<Self, FieldError> {
        Self::from_descriptor_with_limit(desc, DEFAULT_MAX_ORDER)
    }

    pub fn from_descriptor_with_limit(desc: &FieldDescriptor, max_order: u64) -> Result<Self, FieldError> {
        let mut f = Field::with_limit(desc.p, desc.m, max_order)?;
        for level in 0..=desc.level {
            if level > 0 {
                f = f.extend()?;
            }
            if desc.moduli.get(level as usize) != Some(&f.modulus()) {
                return Err(FieldError::DescriptorMismatch { level });
            }
        }
        Ok(f)
    }

    // --- raw index arithmetic -------------------------------------------

    #[inline]
    pub fn zero(&self) -> u32 {
        0
    }

    #[inline]
    pub fn one(&self) -> u32 {
        1
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.inner.p;
        if p == 2 {
            return a ^ b;
        }
        if self.inner.degree == 1 {
            return (a + b) % p;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0u32, 1u32);
        while a != 0 || b != 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let p = self.inner.p;
        if p == 2 {
            return a;
        }
        if self.inner.degree == 1 {
            return (p - a) % p;
        }
        let mut a = a;
        let (mut out, mut place) = (0u32, 1u32);
        while a != 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.inner.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => self.mul_slow(a, b),
        }
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        match &self.inner.def {
            Definition::Prime => ((u64::from(a) * u64::from(b)) % u64::from(self.inner.p)) as u32,
            Definition::Base { modulus } => self.base_mulmod(modulus, a, b),
            Definition::Quadratic {
                parent,
                linear,
                constant,
            } => {
                let q = parent.order() as u32;
                let (a0, a1) = (a % q, a / q);
                let (b0, b1) = (b % q, b / q);
                let hi = parent.mul(a1, b1);
                let c0 = parent.sub(parent.mul(a0, b0), parent.mul(*constant, hi));
                let cross = parent.add(parent.mul(a0, b1), parent.mul(a1, b0));
                let c1 = parent.sub(cross, parent.mul(*linear, hi));
                c0 + c1 * q
            }
        }
    }

    fn base_mulmod(&self, modulus: &[u32], a: u32, b: u32) -> u32 {
        let p = self.inner.p;
        let m = self.inner.degree as usize;
        let da = digits(a, p, m);
        let db = digits(b, p, m);
        let mut prod = vec![0u32; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        reduce_mod(&mut prod, modulus, p);
        undigits(&prod[..m], p)
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        match &self.inner.tables {
            Some(t) => {
                let n = self.order() as u32 - 1;
                Some(t.exp[((n - t.log[a as usize]) % n) as usize])
            }
            None => Some(self.pow(a, self.order() - 2)),
        }
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let (mut base, mut acc) = (a, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn quadratic_has_root(&self, linear: u32, constant: u32) -> bool {
        (0..self.order() as u32).any(|x| {
            let v = self.add(self.mul(x, self.add(x, linear)), constant);
            v == 0
        })
    }

    // --- checked element API -------------------------------------------

    pub fn element(&self, index: u64) -> Result<FieldElement, FieldError> {
        if index >= self.order() {
            return Err(FieldError::ElementOutOfRange {
                index,
                order: self.order(),
            });
        }
        Ok(FieldElement {
            order: self.order(),
            index: index as u32,
        })
    }

    /// Moves an element of a subfield into this field (index-preserving).
    pub fn embed(&self, x: FieldElement) -> Result<FieldElement, FieldError> {
        if !self.contains_order(x.order) {
            return Err(FieldError::LevelMismatch {
                left: self.order(),
                right: x.order,
            });
        }
        Ok(FieldElement {
            order: self.order(),
            index: x.index,
        })
    }

    fn check(&self, x: FieldElement) -> Result<u32, FieldError> {
        if x.order != self.order() {
            return Err(FieldError::LevelMismatch {
                left: self.order(),
                right: x.order,
            });
        }
        Ok(x.index)
    }

    fn wrap(&self, index: u32) -> FieldElement {
        FieldElement {
            order: self.order(),
            index,
        }
    }

    pub fn try_add(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.wrap(self.add(self.check(x)?, self.check(y)?)))
    }

    pub fn try_mul(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.wrap(self.mul(self.check(x)?, self.check(y)?)))
    }

    pub fn try_neg(&self, x: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.wrap(self.neg(self.check(x)?)))
    }

    pub fn try_inv(&self, x: FieldElement) -> Result<FieldElement, FieldError> {
        let a = self.check(x)?;
        self.inv(a).map(|v| self.wrap(v)).ok_or(FieldError::DivisionByZero)
    }
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

fn digits(mut x: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for d in out.iter_mut() {
        *d = x % p;
        x /= p;
    }
    out
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0u32, |acc, &d| acc * p + d)
}

/// Reduces `poly` in place modulo the monic `modulus`; the low
/// `deg(modulus)` coefficients hold the remainder afterwards.
fn reduce_mod(poly: &mut [u32], modulus: &[u32], p: u32) {
    let m = modulus.len() - 1;
    for top in (m..poly.len()).rev() {
        let c = poly[top];
        if c == 0 {
            continue;
        }
        poly[top] = 0;
        for (i, &mc) in modulus[..m].iter().enumerate() {
            let idx = top - m + i;
            poly[idx] = (poly[idx] + (p - c) * mc % p) % p;
        }
    }
}

/// True if the monic `divisor` divides the monic `poly` over GF(p).
fn divides(poly: &[u32], divisor: &[u32], p: u32) -> bool {
    let mut rem = poly.to_vec();
    reduce_mod(&mut rem, divisor, p);
    rem[..divisor.len() - 1].iter().all(|&c| c == 0)
}

fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let m = poly.len() - 1;
    for deg in 1..=m / 2 {
        let count = checked_pow(u64::from(p), deg as u32).unwrap();
        for idx in 0..count {
            let mut divisor = digits(idx as u32, p, deg);
            divisor.push(1);
            if divides(poly, &divisor, p) {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible of degree `m` over GF(p), scanning the low
/// coefficients as a base-`p` number from zero.
fn first_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = checked_pow(u64::from(p), m).unwrap();
    for idx in 0..count {
        let mut poly = digits(idx as u32, p, m as usize);
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
