//! Exact numerology: the graded cohomology ring of the Lagrangian
//! Grassmannian presented by a terminating rewriting system, degrees of
//! Grassmannians by the hook-length formula, vertex-variety degrees read
//! off the Chern classes of the rank-5 incidence bundle, and the
//! Brill–Noether class degree with its involution count.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use thiserror::Error;

use crate::poly::IntPoly;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumerativeError {
    #[error("factorial of the negative number {argument}")]
    NegativeFactorial { argument: i64 },
}

/// Total Chern class coefficients of the rank-5 incidence bundle over P⁵,
/// ascending: 1 + 5t + 12t² + 16t³ + 8t⁴. The degree-k vertex variety has
/// degree c_{6−k}.
pub const INCIDENCE_CHERN: [u64; 5] = [1, 5, 12, 16, 8];

/// A graded polynomial quotient ring presented by monomial rewrite rules
/// LHS → RHS. Every rule must be homogeneous (the weighted degree of each
/// RHS term equals the weighted degree of the LHS) and the system must
/// terminate; reduction stops with a panic after a large step budget
/// otherwise.
#[derive(Debug, Clone)]
pub struct GradedQuotientRing {
    generator_names: Vec<String>,
    generator_degrees: Vec<usize>,
    rules: Vec<(Vec<u8>, IntPoly)>,
}

const REDUCTION_STEP_BUDGET: usize = 100_000;

impl GradedQuotientRing {
    pub fn new(
        generator_names: Vec<String>,
        generator_degrees: Vec<usize>,
        rules: Vec<(Vec<u8>, IntPoly)>,
    ) -> Self {
        assert_eq!(generator_names.len(), generator_degrees.len());
        let n = generator_names.len();
        for (lhs, rhs) in &rules {
            assert_eq!(lhs.len(), n, "rule arity mismatch");
            assert_eq!(rhs.nvars(), n, "rule arity mismatch");
            let lhs_degree: usize = lhs
                .iter()
                .zip(&generator_degrees)
                .map(|(&e, &d)| e as usize * d)
                .sum();
            for (expo, _) in rhs.terms() {
                let term_degree: usize = expo
                    .iter()
                    .zip(&generator_degrees)
                    .map(|(&e, &d)| e as usize * d)
                    .sum();
                assert_eq!(term_degree, lhs_degree, "rules must be homogeneous");
            }
        }
        GradedQuotientRing {
            generator_names,
            generator_degrees,
            rules,
        }
    }

    /// H*(LG(3,6)): generators τ₁, τ₂, τ₃ of degrees 1, 2, 3 with the
    /// relations τ₁² = 2τ₂, τ₂² = 2τ₁τ₃, τ₃² = 0.
    pub fn lagrangian_grassmannian_ring() -> Self {
        let tau = |i: usize| IntPoly::var(3, i);
        Self::new(
            vec!["tau1".into(), "tau2".into(), "tau3".into()],
            vec![1, 2, 3],
            vec![
                (vec![2, 0, 0], tau(1).scale(2)),
                (vec![0, 2, 0], tau(0).mul(&tau(2)).scale(2)),
                (vec![0, 0, 2], IntPoly::zero(3)),
            ],
        )
    }

    pub fn num_generators(&self) -> usize {
        self.generator_names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn generator(&self, i: usize) -> IntPoly {
        IntPoly::var(self.num_generators(), i)
    }

    pub fn weighted_degree(&self, expo: &[u8]) -> usize {
        expo.iter()
            .zip(&self.generator_degrees)
            .map(|(&e, &d)| e as usize * d)
            .sum()
    }

    fn divides(lhs: &[u8], expo: &[u8]) -> bool {
        lhs.iter().zip(expo).all(|(&l, &e)| l <= e)
    }

    /// Normal form under the rewrite rules, scanning terms and rules in
    /// their natural order.
    pub fn reduce(&self, p: &IntPoly) -> IntPoly {
        self.reduce_with_strategy(p, false, false)
    }

    /// Normal form with an explicit scanning strategy: pick the last
    /// reducible term and/or the last applicable rule instead of the
    /// first. Confluent systems give the same answer for every strategy.
    pub fn reduce_with_strategy(
        &self,
        p: &IntPoly,
        pick_last_term: bool,
        pick_last_rule: bool,
    ) -> IntPoly {
        let n = self.num_generators();
        let mut current = p.clone();
        for _ in 0..REDUCTION_STEP_BUDGET {
            let mut candidate: Option<(Vec<u8>, i64, usize)> = None;
            for (expo, &coeff) in current.terms() {
                let mut rule_hit: Option<usize> = None;
                for (ri, (lhs, _)) in self.rules.iter().enumerate() {
                    if Self::divides(lhs, expo) {
                        rule_hit = Some(ri);
                        if !pick_last_rule {
                            break;
                        }
                    }
                }
                if let Some(ri) = rule_hit {
                    candidate = Some((expo.clone(), coeff, ri));
                    if !pick_last_term {
                        break;
                    }
                }
            }
            let Some((expo, coeff, ri)) = candidate else {
                return current;
            };
            let (lhs, rhs) = &self.rules[ri];
            let cofactor: Vec<u8> = expo.iter().zip(lhs).map(|(&e, &l)| e - l).collect();
            let replaced = rhs.mul(&IntPoly::monomial(n, cofactor, coeff));
            current = current
                .sub(&IntPoly::monomial(n, expo, coeff))
                .add(&replaced);
        }
        panic!("rewriting did not terminate within the step budget");
    }

    /// Exponent vectors of the irreducible monomials of weighted degree at
    /// most `max_degree`, in lexicographic order.
    pub fn normal_monomials(&self, max_degree: usize) -> Vec<Vec<u8>> {
        let n = self.num_generators();
        let caps: Vec<u8> = self
            .generator_degrees
            .iter()
            .map(|&d| (max_degree / d.max(1)).min(255) as u8)
            .collect();
        let mut out = Vec::new();
        let mut expo = vec![0u8; n];
        loop {
            if self.weighted_degree(&expo) <= max_degree
                && !self.rules.iter().any(|(lhs, _)| Self::divides(lhs, &expo))
            {
                out.push(expo.clone());
            }
            let mut pos = 0;
            loop {
                if pos == n {
                    return out;
                }
                if expo[pos] < caps[pos] {
                    expo[pos] += 1;
                    break;
                }
                expo[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Ranks of the graded pieces in degrees 0..=max_degree.
    pub fn graded_ranks(&self, max_degree: usize) -> Vec<usize> {
        let mut ranks = vec![0usize; max_degree + 1];
        for expo in self.normal_monomials(max_degree) {
            ranks[self.weighted_degree(&expo)] += 1;
        }
        ranks
    }
}

/// Degree of the Lagrangian Grassmannian in its natural embedding: the
/// coefficient of the top class τ₁τ₂τ₃ in the normal form of τ₁⁶.
pub fn sigma_ring_degree() -> i64 {
    let ring = GradedQuotientRing::lagrangian_grassmannian_ring();
    let tau1 = ring.generator(0);
    let mut power = IntPoly::constant(3, 1);
    for _ in 0..6 {
        power = power.mul(&tau1);
    }
    let reduced = ring.reduce(&power);
    let top = vec![1u8, 1, 1];
    let coefficient = reduced.coeff(&top);
    assert_eq!(
        reduced,
        IntPoly::monomial(3, top, coefficient),
        "the normal form of τ₁⁶ is a multiple of the point class τ₁τ₂τ₃"
    );
    coefficient
}

/// Number of standard Young tableaux of the rows×cols rectangle, by the
/// hook-length formula. Computes the degree of G(rows, rows+cols) in its
/// Plücker embedding.
pub fn rectangle_tableaux(rows: u32, cols: u32) -> u64 {
    assert!(rows >= 1 && cols >= 1);
    assert!(rows * cols <= 30, "cell count too large for exact u128 factorials");
    let cells = (rows * cols) as u128;
    let mut numerator: u128 = 1;
    for i in 1..=cells {
        numerator *= i;
    }
    let mut hooks: u128 = 1;
    for i in 0..rows {
        for j in 0..cols {
            hooks *= ((cols - 1 - j) + (rows - 1 - i) + 1) as u128;
        }
    }
    assert_eq!(numerator % hooks, 0);
    u64::try_from(numerator / hooks).expect("tableau count fits in u64")
}

/// Degree of G(2,6) in the Plücker embedding P¹⁴.
pub fn gr26_degree() -> u64 {
    rectangle_tableaux(2, 4)
}

/// Degrees of the vertex varieties Y(k) for k = 2..5: the locus where k
/// generic sections of the rank-5 incidence bundle drop rank has degree
/// c_{6−k} of the bundle.
pub fn vertex_degrees() -> BTreeMap<u32, u64> {
    (2..=5)
        .map(|k| (k, INCIDENCE_CHERN[(6 - k) as usize]))
        .collect()
}

/// The total Chern class of the incidence bundle, printed ascending.
pub fn chern_polynomial_string() -> String {
    let mut parts = vec![INCIDENCE_CHERN[0].to_string()];
    for (i, c) in INCIDENCE_CHERN.iter().enumerate().skip(1) {
        parts.push(if i == 1 {
            format!("{c}t")
        } else {
            format!("{c}t^{i}")
        });
    }
    parts.join(" + ")
}

fn factorial(n: i64) -> Result<BigInt, EnumerativeError> {
    if n < 0 {
        return Err(EnumerativeError::NegativeFactorial { argument: n });
    }
    let mut acc = BigInt::from(1);
    for i in 2..=n {
        acc *= i;
    }
    Ok(acc)
}

/// Degree of the Brill–Noether class W^r_d on a genus-g curve:
/// g! · ∏_{i=0..r} i! / (g−d+r+i)!. Integral exactly when
/// (r+1)(g+r−d) = g; otherwise the rational class coefficient.
pub fn brill_noether_degree(g: i64, r: i64, d: i64) -> Result<BigRational, EnumerativeError> {
    assert!(g >= 0 && r >= 0, "genus and rank must be nonnegative");
    let mut numerator = factorial(g)?;
    let mut denominator = BigInt::from(1);
    for i in 0..=r {
        numerator *= factorial(i)?;
        denominator *= factorial(g - d + r + i)?;
    }
    Ok(BigRational::new(numerator, denominator))
}

/// Count of unordered pairs swapped by the Serre involution on W^r_d:
/// half the Brill–Noether degree.
pub fn serre_involution_pairs(g: i64, r: i64, d: i64) -> Result<BigRational, EnumerativeError> {
    Ok(brill_noether_degree(g, r, d)? / BigInt::from(2))
}
