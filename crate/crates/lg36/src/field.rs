//! Exact coefficient fields: arbitrary-precision rationals and odd prime
//! fields F_p.
//!
//! All higher layers are generic over [`Field`]. A field value carries the
//! runtime data its elements need (for `Fp`, the modulus), so elements stay
//! small plain values.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Zero};
use rand::Rng;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus {0} is not an odd prime below 2^31")]
    BadModulus(u64),
    #[error("cannot parse {0:?} as a field element")]
    Parse(String),
}

/// Identifies a concrete field in configs and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum FieldDescriptor {
    Rationals,
    Prime(u64),
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rationals => write!(f, "q"),
            FieldDescriptor::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

/// A field with exact arithmetic.
///
/// Operations take the field by reference so `Fp` elements need not carry the
/// modulus. `sample` draws from a small window suitable for generic-position
/// arguments; it is not uniform over Q.
pub trait Field: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Rescales a row in place by a nonzero constant to tame coefficient
    /// growth during elimination. Over Q this clears denominators and divides
    /// out the numerator gcd; over F_p it is a no-op. Kernels, ranks and row
    /// spans are unchanged.
    fn normalize_row(&self, _row: &mut [Self::Elem]) {}

    /// Random element from a small sampling window (uniform over F_p).
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// Random nonzero element.
    fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let x = self.sample(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }

    /// A square root of `a`, or `None` when `a` is not a square in this field.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn fmt_elem(&self, a: &Self::Elem) -> String;
    fn parse_elem(&self, s: &str) -> Result<Self::Elem, FieldError>;
    fn descriptor(&self) -> FieldDescriptor;

    /// Iterator over all field elements, available only for finite fields.
    fn enumerate_all(&self) -> Option<Vec<Self::Elem>> {
        None
    }
}

/// The rational numbers with arbitrary-precision arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Result<BigRational, FieldError> {
        if a.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(a.recip())
        }
    }

    fn normalize_row(&self, row: &mut [BigRational]) {
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for x in row.iter() {
            if !x.is_zero() {
                den_lcm = den_lcm.lcm(x.denom());
                num_gcd = num_gcd.gcd(x.numer());
            }
        }
        if num_gcd.is_zero() || (den_lcm.is_one() && num_gcd.is_one()) {
            return;
        }
        let scale = BigRational::new(den_lcm, num_gcd);
        for x in row.iter_mut() {
            *x *= &scale;
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.gen_range(-9..=9))
    }

    fn sqrt(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            return Some(BigRational::zero());
        }
        if a.numer().sign() == num::bigint::Sign::Minus {
            return None;
        }
        // BigRational keeps numerator and denominator reduced, so a rational
        // square must have both parts perfect squares.
        let rn = a.numer().sqrt();
        let rd = a.denom().sqrt();
        if &(&rn * &rn) == a.numer() && &(&rd * &rd) == a.denom() {
            Some(BigRational::new(rn, rd))
        } else {
            None
        }
    }

    fn fmt_elem(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn parse_elem(&self, s: &str) -> Result<BigRational, FieldError> {
        let bad = || FieldError::Parse(s.to_string());
        match s.split_once('/') {
            None => {
                let n: BigInt = s.trim().parse().map_err(|_| bad())?;
                Ok(BigRational::from_integer(n))
            }
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(FieldError::DivisionByZero);
                }
                Ok(BigRational::new(n, d))
            }
        }
    }

    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::Rationals
    }
}

/// The prime field F_p for an odd prime p < 2³¹, elements stored in [0, p).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp {
    p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p < 3 || p % 2 == 0 || p >= (1 << 31) || !is_prime(p) {
            return Err(FieldError::BadModulus(p));
        }
        Ok(Fp { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for Fp {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn from_i64(&self, n: i64) -> u64 {
        let m = n.rem_euclid(self.p as i64);
        m as u64
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }

    fn inv(&self, a: &u64) -> Result<u64, FieldError> {
        if *a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        // Extended Euclid on (a, p); p prime makes every nonzero a invertible.
        let (mut r0, mut r1) = (*a as i128, self.p as i128);
        let (mut s0, mut s1) = (1i128, 0i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Ok(s0.rem_euclid(self.p as i128) as u64)
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }

    fn sqrt(&self, a: &u64) -> Option<u64> {
        let p = self.p;
        if *a == 0 {
            return Some(0);
        }
        if self.pow(*a, (p - 1) / 2) != 1 {
            return None;
        }
        if p % 4 == 3 {
            return Some(self.pow(*a, (p + 1) / 4));
        }
        // Tonelli–Shanks for p ≡ 1 (mod 4). Write p − 1 = q·2^s with q odd.
        let mut q = p - 1;
        let mut s = 0u32;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        // Deterministic scan for a quadratic non-residue.
        let mut z = 2;
        while self.pow(z, (p - 1) / 2) != p - 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(*a, q);
        let mut r = self.pow(*a, (q + 1) / 2);
        while t != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.mul(&t2, &t2);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.mul(&b, &b);
            }
            m = i;
            c = self.mul(&b, &b);
            t = self.mul(&t, &c);
            r = self.mul(&r, &b);
        }
        Some(r)
    }

    fn fmt_elem(&self, a: &u64) -> String {
        a.to_string()
    }

    fn parse_elem(&self, s: &str) -> Result<u64, FieldError> {
        let n: i64 = s
            .trim()
            .parse()
            .map_err(|_| FieldError::Parse(s.to_string()))?;
        Ok(self.from_i64(n))
    }

    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::Prime(self.p)
    }

    fn enumerate_all(&self) -> Option<Vec<u64>> {
        Some((0..self.p).collect())
    }
}
