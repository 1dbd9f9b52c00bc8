//! Arithmetic in the prime field Z/pZ.
//!
//! [`PrimeField`] is a validated modulus; [`FieldElement`] carries its
//! residue together with the modulus it lives in so that mixing two fields
//! can be detected. The operator impls (`+`, `-`, `*`, unary `-`) panic on a
//! modulus mismatch; the `checked_*` methods report it as an error instead.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use thiserror::Error;

/// Largest modulus (exclusive) accepted by [`PrimeField::new`]. Products of
/// two residues then fit comfortably in a `u128`.
pub const MAX_MODULUS: u64 = 1 << 61;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    CompositeModulus(u64),
    #[error("modulus {0} is outside the supported range (p < 2^61)")]
    UnsupportedModulus(u64),
    #[error("operands belong to different fields (p = {0} and p = {1})")]
    ModulusMismatch(u64, u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
}

/// The field Z/pZ for a prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Builds the field, rejecting composite moduli (and 0, 1).
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= MAX_MODULUS {
            return Err(FieldError::UnsupportedModulus(p));
        }
        if !is_prime(p) {
            return Err(FieldError::CompositeModulus(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Reduces an arbitrary integer into the field.
    #[inline]
    pub fn element(&self, value: u64) -> FieldElement {
        FieldElement {
            value: value % self.p,
            modulus: self.p,
        }
    }

    /// Reduces a signed integer into the field.
    pub fn element_i64(&self, value: i64) -> FieldElement {
        let r = value.rem_euclid(self.p as i64);
        self.element(r as u64)
    }

    /// Checked constructor: `value` must already be a canonical residue.
    pub fn residue(&self, value: u64) -> Option<FieldElement> {
        (value < self.p).then_some(FieldElement {
            value,
            modulus: self.p,
        })
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    /// Does `x` belong to this field?
    #[inline]
    pub fn owns(&self, x: FieldElement) -> bool {
        x.modulus == self.p
    }

    /// `C(n, k) mod p`. Uses the multiplicative formula when `n < p` and
    /// Lucas's theorem otherwise; `k > n` gives zero.
    pub fn binomial(&self, n: u64, k: u64) -> FieldElement {
        if k > n {
            return self.zero();
        }
        if n < self.p {
            return self.binomial_below_p(n, k);
        }
        let (mut n, mut k) = (n, k);
        let mut acc = self.one();
        while k > 0 || n > 0 {
            let (nd, kd) = (n % self.p, k % self.p);
            if kd > nd {
                return self.zero();
            }
            acc *= self.binomial_below_p(nd, kd);
            n /= self.p;
            k /= self.p;
        }
        acc
    }

    // n < p, so every factor of k! is a unit.
    fn binomial_below_p(&self, n: u64, k: u64) -> FieldElement {
        debug_assert!(n < self.p && k <= n);
        let k = k.min(n - k);
        let mut num = self.one();
        let mut den = self.one();
        for i in 0..k {
            num *= self.element(n - i);
            den *= self.element(i + 1);
        }
        num * den.inverse().expect("factorial below p is a unit")
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}Z", self.p)
    }
}

/// A residue modulo a prime, tagged with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    modulus: u64,
}

impl FieldElement {
    /// The canonical representative in `[0, p)`.
    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, rhs: &Self) -> Result<(), FieldError> {
        if self.modulus == rhs.modulus {
            Ok(())
        } else {
            Err(FieldError::ModulusMismatch(self.modulus, rhs.modulus))
        }
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self, FieldError> {
        self.same_field(&rhs)?;
        Ok(self.add_raw(rhs))
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self, FieldError> {
        self.same_field(&rhs)?;
        Ok(self.add_raw(rhs.neg_raw()))
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self, FieldError> {
        self.same_field(&rhs)?;
        Ok(self.mul_raw(rhs))
    }

    #[inline]
    fn add_raw(self, rhs: Self) -> Self {
        // both < 2^61, no overflow
        let mut s = self.value + rhs.value;
        if s >= self.modulus {
            s -= self.modulus;
        }
        Self { value: s, ..self }
    }

    #[inline]
    fn neg_raw(self) -> Self {
        let value = if self.value == 0 {
            0
        } else {
            self.modulus - self.value
        };
        Self { value, ..self }
    }

    #[inline]
    fn mul_raw(self, rhs: Self) -> Self {
        let value = (self.value as u128 * rhs.value as u128 % self.modulus as u128) as u64;
        Self { value, ..self }
    }

    /// `self^e` by square-and-multiply; `0^0 = 1`.
    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Self {
            value: 1 % self.modulus,
            ..self
        };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_raw(base);
            }
            base = base.mul_raw(base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inverse(self) -> Result<Self, FieldError> {
        if self.value == 0 {
            return Err(FieldError::ZeroInverse);
        }
        let (mut r0, mut r1) = (self.modulus as i128, self.value as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        let value = t0.rem_euclid(self.modulus as i128) as u64;
        Ok(Self { value, ..self })
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $atr:ident, $amethod:ident, $checked:ident) => {
        impl $tr for FieldElement {
            type Output = FieldElement;
            #[inline]
            fn $method(self, rhs: Self) -> Self {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $atr for FieldElement {
            #[inline]
            fn $amethod(&mut self, rhs: Self) {
                *self = $tr::$method(*self, rhs);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign, checked_add);
binop!(Sub, sub, SubAssign, sub_assign, checked_sub);
binop!(Mul, mul, MulAssign, mul_assign, checked_mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn neg(self) -> Self {
        self.neg_raw()
    }
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &WITNESSES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mulmod = |a: u64, b: u64| (a as u128 * b as u128 % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn make_field() {
        assert_eq!(f(5).modulus(), 5);
        assert_eq!(f(2).modulus(), 2);
        assert_eq!(PrimeField::new(6), Err(FieldError::CompositeModulus(6)));
        assert_eq!(PrimeField::new(1), Err(FieldError::CompositeModulus(1)));
        assert_eq!(PrimeField::new(0), Err(FieldError::CompositeModulus(0)));
        assert!(PrimeField::new((1 << 61) - 1).is_ok()); // Mersenne prime M61
        assert_eq!(
            PrimeField::new(u64::MAX),
            Err(FieldError::UnsupportedModulus(u64::MAX))
        );
    }

    #[test]
    fn primality_matches_trial_division() {
        let trial = |n: u64| {
            n >= 2
                && (2..n)
                    .take_while(|d| d * d <= n)
                    .all(|d| !n.is_multiple_of(d))
        };
        for n in 0..5000 {
            assert_eq!(is_prime(n), trial(n), "n = {n}");
        }
        // strong pseudoprimes to several small bases
        assert!(!is_prime(3_215_031_751));
        assert!(!is_prime(3_825_123_056_546_413_051));
        assert!(is_prime(1_000_000_007));
    }

    #[test]
    fn arithmetic_examples() {
        let k = f(5);
        assert_eq!((k.element(4) + k.element(1)).value(), 0);
        assert_eq!((k.element(3) * k.element(4)).value(), 2);
        assert_eq!((-k.element(2)).value(), 3);
        assert_eq!((k.element(1) - k.element(3)).value(), 3);
        assert_eq!(k.element_i64(-1).value(), 4);
    }

    #[test]
    fn mismatch_is_reported() {
        let a = f(5).element(1);
        let b = f(7).element(1);
        assert_eq!(a.checked_add(b), Err(FieldError::ModulusMismatch(5, 7)));
        assert_eq!(a.checked_mul(b), Err(FieldError::ModulusMismatch(5, 7)));
        assert_eq!(a.checked_sub(b), Err(FieldError::ModulusMismatch(5, 7)));
    }

    #[test]
    #[should_panic(expected = "different fields")]
    fn mismatch_panics_through_operators() {
        let _ = f(5).element(1) + f(7).element(1);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(f(5).element(2).inverse().unwrap().value(), 3);
        assert_eq!(f(5).element(1).inverse().unwrap().value(), 1);
        // scan 3*y mod 7 for y = 1..6
        let y = (1..7).find(|y| 3 * y % 7 == 1).unwrap();
        assert_eq!(y, 5);
        assert_eq!(f(7).element(3).inverse().unwrap().value(), y);
        assert_eq!(f(5).zero().inverse(), Err(FieldError::ZeroInverse));
    }

    #[test]
    fn pow_examples() {
        let k = f(5);
        assert_eq!(k.element(2).pow(3).value(), 3);
        assert_eq!(k.zero().pow(0).value(), 1);
        assert_eq!(k.element(3).pow(4).value(), 1);
        assert_eq!(k.zero().pow(3).value(), 0);
    }

    #[test]
    fn binomial_examples() {
        let k = f(5);
        assert_eq!(k.binomial(2, 1).value(), 2);
        assert_eq!((k.binomial(2, 0) - k.binomial(2, 1)).value(), 4);
        assert_eq!(21 % 5, 1);
        assert_eq!(k.binomial(7, 2).value(), 1);
        assert_eq!(k.binomial(3, 4).value(), 0);
        assert_eq!(k.binomial(0, 0).value(), 1);
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for p in [2, 3, 5, 7] {
            let k = f(p);
            let all: Vec<_> = (0..p).map(|v| k.element(v)).collect();
            for &x in &all {
                assert_eq!(x + k.zero(), x);
                assert_eq!(x * k.one(), x);
                assert_eq!(x + -x, k.zero());
                for &y in &all {
                    assert_eq!(x + y, y + x);
                    assert_eq!(x * y, y * x);
                    for &z in &all {
                        assert_eq!((x + y) + z, x + (y + z));
                        assert_eq!((x * y) * z, x * (y * z));
                        assert_eq!(x * (y + z), x * y + x * z);
                    }
                }
            }
        }
    }

    #[test]
    fn inverse_and_fermat_exhaustive() {
        for p in [2, 3, 5, 7, 11, 13] {
            let k = f(p);
            for v in 1..p {
                let x = k.element(v);
                assert_eq!(x * x.inverse().unwrap(), k.one());
                assert_eq!(x.pow(p - 1), k.one());
            }
        }
    }

    #[test]
    fn binomial_matches_pascal_triangle() {
        for p in [2, 3, 5, 7, 11, 13] {
            let k = f(p);
            let mut row = vec![1u64];
            for n in 0..=30u64 {
                for (kk, &c) in row.iter().enumerate() {
                    assert_eq!(k.binomial(n, kk as u64).value(), c, "p={p} C({n},{kk})");
                }
                let mut next = vec![1u64; row.len() + 1];
                for i in 1..row.len() {
                    next[i] = (row[i - 1] + row[i]) % p;
                }
                row = next;
            }
        }
    }

    #[test]
    fn binomial_large_modulus() {
        let k = f(1_000_000_007);
        assert_eq!(k.binomial(10, 3).value(), 120);
        assert_eq!(
            k.binomial(60, 30).value(),
            118_264_581_564_861_424 % 1_000_000_007
        );
    }
}
