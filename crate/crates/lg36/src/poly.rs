//! Polynomial utilities: sparse multivariate polynomials with integer
//! coefficients (the defining equations live over ℤ and are evaluated in any
//! [`Field`]), and dense univariate polynomials over a field for
//! interpolation, division, and gcd.

use crate::field::Field;
use std::collections::BTreeMap;

/// Sparse multivariate polynomial over ℤ in a fixed number of variables.
/// Monomials are exponent vectors; only nonzero terms are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct IntPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u8>, i64>,
}

impl std::fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(expo, c)| {
                let mono: Vec<String> = expo
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            format!("t{}", i)
                        } else {
                            format!("t{}^{}", i, e)
                        }
                    })
                    .collect();
                if mono.is_empty() {
                    format!("{}", c)
                } else {
                    format!("{}*{}", c, mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        IntPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: i64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut expo = vec![0u8; nvars];
        expo[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(expo, 1);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, expo: Vec<u8>, c: i64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(expo) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -*c;
        }
        out
    }

    pub fn scale(&self, s: i64) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, &c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                let expo: Vec<u8> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(expo, c1 * c2);
            }
        }
        out
    }

    /// Partial derivative with respect to variable `i`.
    pub fn diff(&self, i: usize) -> Self {
        assert!(i < self.nvars);
        let mut out = Self::zero(self.nvars);
        for (e, &c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut expo = e.clone();
            expo[i] -= 1;
            out.add_term(expo, c * e[i] as i64);
        }
        out
    }

    /// Evaluate at a point of K^nvars.
    pub fn eval<K: Field>(&self, field: &K, point: &[K::Elem]) -> K::Elem {
        assert_eq!(point.len(), self.nvars, "point arity mismatch");
        let mut acc = field.zero();
        for (e, &c) in &self.terms {
            let mut term = field.from_i64(c);
            for (i, &exp) in e.iter().enumerate() {
                for _ in 0..exp {
                    term = field.mul(&term, &point[i]);
                }
            }
            acc = field.add(&acc, &term);
        }
        acc
    }

    /// The coefficient row of a linear-in-monomials view: values of all terms'
    /// coefficients against a fixed monomial list, as field elements.
    pub fn coeff(&self, expo: &[u8]) -> i64 {
        self.terms.get(expo).copied().unwrap_or(0)
    }

    /// Nonzero terms as (exponent vector, coefficient), in fixed
    /// lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &i64)> {
        self.terms.iter()
    }

    /// Build a single-term polynomial.
    pub fn monomial(nvars: usize, expo: Vec<u8>, c: i64) -> Self {
        assert_eq!(expo.len(), nvars, "exponent arity mismatch");
        let mut p = Self::zero(nvars);
        p.add_term(expo, c);
        p
    }
}

/// Dense univariate polynomial over a field; coefficients ascending, no
/// trailing zeros.
#[derive(Clone, PartialEq)]
pub struct UniPoly<K: Field> {
    field: K,
    coeffs: Vec<K::Elem>,
}

impl<K: Field> std::fmt::Debug for UniPoly<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.field.is_zero(c))
            .map(|(i, c)| format!("{}*t^{}", self.field.fmt_elem(c), i))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<K: Field> UniPoly<K> {
    pub fn zero(field: K) -> Self {
        UniPoly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn from_coeffs(field: K, coeffs: Vec<K::Elem>) -> Self {
        let mut p = UniPoly { field, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self
            .coeffs
            .last()
            .is_some_and(|c| self.field.is_zero(c))
        {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[K::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> K::Elem {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| k.add(&self.coeff(i), &other.coeff(i))).collect();
        Self::from_coeffs(k.clone(), coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let k = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| k.sub(&self.coeff(i), &other.coeff(i))).collect();
        Self::from_coeffs(k.clone(), coeffs)
    }

    pub fn scale(&self, s: &K::Elem) -> Self {
        let k = &self.field;
        Self::from_coeffs(k.clone(), self.coeffs.iter().map(|c| k.mul(c, s)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let k = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(k.clone());
        }
        let mut coeffs = vec![k.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = k.add(&coeffs[i + j], &k.mul(a, b));
            }
        }
        Self::from_coeffs(k.clone(), coeffs)
    }

    pub fn eval(&self, x: &K::Elem) -> K::Elem {
        let k = &self.field;
        let mut acc = k.zero();
        for c in self.coeffs.iter().rev() {
            acc = k.add(&k.mul(&acc, x), c);
        }
        acc
    }

    /// Euclidean division: self = q·d + r with deg r < deg d.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let k = &self.field;
        let dlead = k.inv(d.coeffs.last().unwrap()).expect("leading coeff nonzero");
        let dd = d.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![k.zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let last = rem.last().unwrap().clone();
            if k.is_zero(&last) {
                rem.pop();
                continue;
            }
            let shift = rem.len() - 1 - dd;
            let c = k.mul(&last, &dlead);
            quot[shift] = c.clone();
            for (i, dc) in d.coeffs.iter().enumerate() {
                let v = k.sub(&rem[shift + i], &k.mul(&c, dc));
                rem[shift + i] = v;
            }
            rem.pop();
        }
        (
            Self::from_coeffs(k.clone(), quot),
            Self::from_coeffs(k.clone(), rem),
        )
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self
            .field
            .inv(self.coeffs.last().unwrap())
            .expect("leading coeff nonzero");
        self.scale(&inv)
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Exact Lagrange interpolation through distinct nodes.
    pub fn interpolate(field: K, points: &[(K::Elem, K::Elem)]) -> Self {
        let k = &field;
        let mut acc = Self::zero(k.clone());
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = Self::from_coeffs(k.clone(), vec![k.one()]);
            let mut denom = k.one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                basis = basis.mul(&Self::from_coeffs(
                    k.clone(),
                    vec![k.neg(xj), k.one()],
                ));
                denom = k.mul(&denom, &k.sub(xi, xj));
            }
            let c = k.div(yi, &denom).expect("interpolation nodes are distinct");
            acc = acc.add(&basis.scale(&c));
        }
        acc
    }
}
