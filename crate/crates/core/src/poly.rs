//! Dense polynomials over a tower field, indexed as base-`q` numbers.

use alloc::vec::Vec;

use crate::field::{Field, FieldElement, FieldError};

/// Coefficient `j` is the coefficient of `x^j`; trailing zeros are allowed.
///
/// `order` is the order of the field the coefficients were drawn from.
/// Evaluation in any extension of that field is allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DensePolynomial {
    pub order: u64,
    pub coeffs: Vec<u32>,
}

impl DensePolynomial {
    pub fn new(order: u64, coeffs: Vec<u32>) -> Self {
        Self { order, coeffs }
    }

    /// The polynomial with canonical index `index` among those of degree
    /// `<= k` over a field of order `q` (least significant coefficient first).
    pub fn from_index(index: u64, q: u64, k: usize) -> Self {
        Self {
            order: q,
            coeffs: coeffs_of(index, q, k + 1),
        }
    }

    /// Canonical index; `None` if it overflows `u64` or a coefficient is out
    /// of range for a field of order `q`.
    pub fn index_in(&self, q: u64) -> Option<u64> {
        index_of(&self.coeffs, q)
    }

    pub fn index(&self) -> Option<u64> {
        self.index_in(self.order)
    }

    /// Highest index with a non-zero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0)
    }

    /// Checked evaluation at `x`, embedding the coefficients into `x`'s field.
    pub fn eval(&self, field: &Field, x: FieldElement) -> Result<FieldElement, FieldError> {
        if x.order != field.order() {
            return Err(FieldError::LevelMismatch {
                left: field.order(),
                right: x.order,
            });
        }
        if !field.contains_order(self.order) {
            return Err(FieldError::LevelMismatch {
                left: field.order(),
                right: self.order,
            });
        }
        field.element(u64::from(eval_raw(field, &self.coeffs, x.index)))
    }
}

/// Horner evaluation on raw indices.
#[inline]
pub fn eval_raw(field: &Field, coeffs: &[u32], x: u32) -> u32 {
    coeffs
        .iter()
        .rev()
        .fold(0u32, |acc, &c| field.add(field.mul(acc, x), c))
}

pub fn coeffs_of(mut index: u64, q: u64, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((index % q) as u32);
        index /= q;
    }
    out
}

pub fn index_of(coeffs: &[u32], q: u64) -> Option<u64> {
    let mut acc = 0u64;
    for &c in coeffs.iter().rev() {
        if u64::from(c) >= q {
            return None;
        }
        acc = acc.checked_mul(q)?.checked_add(u64::from(c))?;
    }
    Some(acc)
}

/// Number of polynomials of degree `<= k` over a field of order `q`, if it fits.
pub fn count(q: u64, k: usize) -> Option<u64> {
    let mut n = 1u64;
    for _ in 0..=k {
        n = n.checked_mul(q)?;
    }
    Some(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_plus_two_over_gf3() {
        let f = Field::new(3, 1).unwrap();
        let p = DensePolynomial::new(3, alloc::vec![2, 1]);
        let vals: Vec<u32> = (0..3).map(|x| eval_raw(&f, &p.coeffs, x)).collect();
        assert_eq!(vals, [2, 0, 1]);
    }

    #[test]
    fn constant_polynomial() {
        let f = Field::new(2, 3).unwrap();
        for c in 0..8 {
            for x in 0..8 {
                assert_eq!(eval_raw(&f, &[c, 0, 0], x), c);
            }
        }
    }

    #[test]
    fn subfield_evaluation_agrees() {
        let f3 = Field::new(3, 1).unwrap();
        let f9 = f3.extend().unwrap();
        for idx in 0..9 {
            let p = DensePolynomial::from_index(idx, 3, 1);
            for x in 0..3 {
                let low = p.eval(&f3, f3.element(x).unwrap()).unwrap();
                let high = p.eval(&f9, f9.element(x).unwrap()).unwrap();
                assert_eq!(low.index, high.index);
            }
        }
    }

    #[test]
    fn eval_rejects_unembeddable() {
        let f9 = Field::new(3, 2).unwrap();
        let f4 = Field::new(2, 2).unwrap();
        let p = DensePolynomial::new(4, alloc::vec![1, 1]);
        assert!(p.eval(&f9, f9.element(1).unwrap()).is_err());
        assert!(p.eval(&f4, f9.element(1).unwrap()).is_err());
    }

    #[test]
    fn index_bijection() {
        for q in [2u64, 3, 4, 5] {
            for k in 0..3 {
                for i in 0..count(q, k).unwrap() {
                    assert_eq!(DensePolynomial::from_index(i, q, k).index(), Some(i));
                }
            }
        }
        assert_eq!(index_of(&[3], 3), None);
    }
}
