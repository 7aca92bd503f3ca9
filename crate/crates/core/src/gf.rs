//! Prime fields `GF(q)`.
//!
//! Elements are stored as canonical representatives in `[0, q)`. The field
//! order is capped at `2^31 - 1` so every product fits a `u64` intermediate.
//! The `*_raw` helpers on [`Field`] operate on bare canonical values and are
//! what the linear-algebra layer uses in its inner loops.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub const MAX_ORDER: u64 = (1 << 31) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    q: u32,
}

impl Field {
    pub fn new(q: u64) -> Result<Self> {
        if q > MAX_ORDER {
            return Err(Error::FieldTooLarge(q));
        }
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(Field { q: q as u32 })
    }

    #[inline]
    pub fn order(self) -> u32 {
        self.q
    }

    /// Reduces `v` modulo `q`.
    pub fn elem(self, v: u64) -> Elem {
        Elem {
            value: (v % self.q as u64) as u32,
            q: self.q,
        }
    }

    /// Maps a signed integer onto its residue class.
    pub fn elem_signed(self, v: i64) -> Elem {
        let q = self.q as i64;
        self.elem(v.rem_euclid(q) as u64)
    }

    pub fn zero(self) -> Elem {
        Elem {
            value: 0,
            q: self.q,
        }
    }

    pub fn one(self) -> Elem {
        Elem {
            value: 1,
            q: self.q,
        }
    }

    pub fn elements(self) -> impl Iterator<Item = Elem> {
        let q = self.q;
        (0..q).map(move |value| Elem { value, q })
    }

    #[inline]
    pub fn add_raw(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        let q = self.q as u64;
        (if s >= q { s - q } else { s }) as u32
    }

    #[inline]
    pub fn sub_raw(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.q as u64 - b as u64) as u32
        }
    }

    #[inline]
    pub fn neg_raw(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul_raw(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    /// Inverse by the extended Euclidean algorithm.
    pub fn inv_raw(self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        let (mut r0, mut r1) = (self.q as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let quot = r0 / r1;
            (r0, r1) = (r1, r0 - quot * r1);
            (t0, t1) = (t1, t0 - quot * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(t0.rem_euclid(self.q as i64) as u32)
    }

    pub fn pow_raw(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            exp >>= 1;
        }
        acc
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of a prime field. Carries its field order so mixing fields is
/// caught.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem {
    value: u32,
    q: u32,
}

impl Elem {
    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn field(self) -> Field {
        Field { q: self.q }
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn check(self, other: Elem) -> Result<Field> {
        if self.q != other.q {
            return Err(Error::FieldMismatch {
                left: self.q,
                right: other.q,
            });
        }
        Ok(self.field())
    }

    pub fn checked_add(self, other: Elem) -> Result<Elem> {
        let f = self.check(other)?;
        Ok(Elem {
            value: f.add_raw(self.value, other.value),
            q: self.q,
        })
    }

    pub fn checked_sub(self, other: Elem) -> Result<Elem> {
        let f = self.check(other)?;
        Ok(Elem {
            value: f.sub_raw(self.value, other.value),
            q: self.q,
        })
    }

    pub fn checked_mul(self, other: Elem) -> Result<Elem> {
        let f = self.check(other)?;
        Ok(Elem {
            value: f.mul_raw(self.value, other.value),
            q: self.q,
        })
    }

    pub fn inv(self) -> Result<Elem> {
        Ok(Elem {
            value: self.field().inv_raw(self.value)?,
            q: self.q,
        })
    }

    pub fn pow(self, exp: u64) -> Elem {
        Elem {
            value: self.field().pow_raw(self.value, exp),
            q: self.q,
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// Operator forms panic on mixed fields; use the `checked_*` methods when the
// operands come from untrusted input.
impl Add for Elem {
    type Output = Elem;
    fn add(self, rhs: Elem) -> Elem {
        self.checked_add(rhs).expect("field mismatch")
    }
}

impl Sub for Elem {
    type Output = Elem;
    fn sub(self, rhs: Elem) -> Elem {
        self.checked_sub(rhs).expect("field mismatch")
    }
}

impl Mul for Elem {
    type Output = Elem;
    fn mul(self, rhs: Elem) -> Elem {
        self.checked_mul(rhs).expect("field mismatch")
    }
}

impl Neg for Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        Elem {
            value: self.field().neg_raw(self.value),
            q: self.q,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(q: u64) -> Field {
        Field::new(q).unwrap()
    }

    #[test]
    fn add_examples() {
        let f5 = f(5);
        assert_eq!(f5.elem(4) + f5.elem(4), f5.elem(3));
        for x in f5.elements() {
            assert_eq!(f5.zero() + x, x);
        }
        let f2 = f(2);
        assert_eq!(f2.one() + f2.one(), f2.zero());
    }

    #[test]
    fn mul_examples() {
        let f5 = f(5);
        assert_eq!(f5.elem(4) * f5.elem(4), f5.one());
        // 4*(1,0,1) + 1*(1,0,2) = (0,0,1)
        let e6 = [1u64, 0, 1];
        let e7 = [1u64, 0, 2];
        let out: Vec<Elem> = e6
            .iter()
            .zip(e7)
            .map(|(&a, b)| f5.elem(4) * f5.elem(a) + f5.one() * f5.elem(b))
            .collect();
        assert_eq!(out, vec![f5.zero(), f5.zero(), f5.one()]);
        for q in [2, 3, 7, 65521] {
            let fq = f(q);
            for v in [0, 1, q - 1] {
                assert_eq!(fq.one() * fq.elem(v), fq.elem(v));
            }
        }
    }

    #[test]
    fn inv_examples() {
        assert_eq!(f(5).elem(2).inv().unwrap(), f(5).elem(3));
        assert_eq!(f(5).elem(4).inv().unwrap(), f(5).elem(4));
        assert_eq!(f(7).elem(3).inv().unwrap(), f(7).elem(5));
        assert_eq!(f(7).zero().inv(), Err(Error::ZeroInverse));
    }

    #[test]
    fn construction_rejects_bad_orders() {
        assert_eq!(Field::new(0), Err(Error::NotPrime(0)));
        assert_eq!(Field::new(1), Err(Error::NotPrime(1)));
        assert_eq!(Field::new(9), Err(Error::NotPrime(9)));
        assert_eq!(Field::new(1 << 31), Err(Error::FieldTooLarge(1 << 31)));
        assert!(Field::new(MAX_ORDER).is_ok());
    }

    #[test]
    fn mixing_fields_is_an_error() {
        let a = f(5).one();
        let b = f(7).one();
        assert_eq!(
            a.checked_add(b),
            Err(Error::FieldMismatch { left: 5, right: 7 })
        );
        assert!(a.checked_mul(b).is_err());
    }

    #[test]
    fn fermat_exhaustive_small() {
        for q in [2u64, 3, 5, 7, 11, 13] {
            let fq = f(q);
            for a in fq.elements().filter(|a| !a.is_zero()) {
                assert_eq!(a.pow(q - 1), fq.one());
            }
        }
    }

    fn prime_and_triple() -> impl Strategy<Value = (u64, u64, u64, u64)> {
        prop_oneof![
            Just(2u64),
            Just(3),
            Just(5),
            Just(7),
            Just(101),
            Just(65521),
            Just(MAX_ORDER)
        ]
        .prop_flat_map(|q| (Just(q), 0..q, 0..q, 0..q))
    }

    proptest! {
        #[test]
        fn field_axioms((q, a, b, c) in prime_and_triple()) {
            let fq = f(q);
            let (a, b, c) = (fq.elem(a), fq.elem(b), fq.elem(c));
            prop_assert_eq!((a + b) + c, a + (b + c));
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a + b, b + a);
            prop_assert_eq!(a * b, b * a);
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!(a + fq.zero(), a);
            prop_assert_eq!(a * fq.one(), a);
            prop_assert_eq!(a + (-a), fq.zero());
            prop_assert_eq!(a - b + b, a);
            if !a.is_zero() {
                prop_assert_eq!(a * a.inv().unwrap(), fq.one());
                prop_assert_eq!(a.pow(q - 1), fq.one());
            }
        }
    }
}
