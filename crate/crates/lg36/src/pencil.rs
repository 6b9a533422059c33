//! Simultaneous diagonalization of a generic pencil of 2-vectors on F^{2n}
//! and the Segre family of common Lagrangian n-spaces.
//!
//! A pencil spanned by 2-vectors α, α′ with α of full rank contains exactly
//! n members of lower rank, located at the roots of the degree-n Pfaffian
//! polynomial Pf(λα − α′). When those roots are distinct and lie in the
//! field, each degenerate member β_i = λ_iα − α′ has rank exactly 2n−2 and
//! the pencil is a line through the span of a unique n-tuple of rank-2
//! components γ_1,…,γ_n: α and α′ are simultaneously linear combinations
//! of the γ_i, and the ambient space splits as the direct sum of the n
//! planes carrying them.
//!
//! Reading the same coordinate arrays as bilinear forms, an n-space is
//! isotropic for every member of the pencil exactly when it meets each of
//! the n intersection planes W_i = ∩_{j≠i} ker γ_j nontrivially; the family
//! of such n-spaces is a product of n projective lines of degree n! in the
//! ambient Grassmannian.

use rand::Rng;
use thiserror::Error;

use crate::exterior::{basis_masks, MultiVector};
use crate::field::{Field, FieldDescriptor};
use crate::matrix::Matrix;
use crate::poly::UniPoly;

/// Largest prime modulus for which root search scans the whole field;
/// beyond it (and over the rationals) the search tries small fractions
/// p/q with |p| ≤ 64 and q ≤ 16.
const ROOT_SCAN_LIMIT: u64 = 100_000;
const ROOT_NUMERATOR_BOUND: i64 = 64;
const ROOT_DENOMINATOR_BOUND: i64 = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PencilError {
    #[error("the first form has rank {rank}, expected full rank {expected}")]
    AlphaSingular { rank: usize, expected: usize },
    #[error("the Pfaffian polynomial of the pencil has a repeated root")]
    RepeatedRoots,
    #[error(
        "the Pfaffian polynomial does not split over the field: \
         found {found} of {needed} roots"
    )]
    NonSplit { found: usize, needed: usize },
    #[error("pencil member at root {index} has rank {rank}, expected {expected}")]
    ComponentRank {
        index: usize,
        rank: usize,
        expected: usize,
    },
    #[error("component plane {index} has dimension {got}, expected 2")]
    PlaneDimension { index: usize, got: usize },
    #[error("kernel intersection plane {index} has dimension {got}, expected 2")]
    KernelDimension { index: usize, got: usize },
    #[error("the input forms are not linear combinations of the components")]
    Reconstruction,
}

/// Result of diagonalizing the pencil spanned by two 2-vectors.
///
/// All matrices hold basis vectors as rows. Index i throughout refers to
/// the root `roots[i]`: the member λ_iα − α′ is supported on `supports[i]`
/// (dimension 2n−2), the complementary plane `component_planes[i]`
/// (dimension 2) carries the rank-2 component `components[i]`, and
/// `kernel_planes[i]` is the plane ∩_{j≠i} ker γ_j met by every common
/// Lagrangian n-space.
#[derive(Debug, Clone)]
pub struct PencilDiagonalization<K: Field> {
    pub n: usize,
    pub alpha: MultiVector<K>,
    pub alpha_prime: MultiVector<K>,
    /// Pencil parameters λ_i at which λα − α′ drops rank; pairwise distinct.
    pub roots: Vec<K::Elem>,
    /// Rank-2 components γ_i, scaled so the highest nonzero coordinate is 1.
    pub components: Vec<MultiVector<K>>,
    /// Support of the degenerate member at roots[i]; 2n−2 rows.
    pub supports: Vec<Matrix<K>>,
    /// Plane spanned by the component γ_i; 2 rows, wedge of the rows is
    /// proportional to components[i].
    pub component_planes: Vec<Matrix<K>>,
    /// ∩_{j≠i} ker γ_j (kernels taken of the skew coefficient matrices);
    /// 2 rows.
    pub kernel_planes: Vec<Matrix<K>>,
    /// Coefficients c with α = Σ c_i γ_i.
    pub alpha_coefficients: Vec<K::Elem>,
    /// Coefficients c′ with α′ = Σ c′_i γ_i; satisfies c′_i = λ_i c_i.
    pub alpha_prime_coefficients: Vec<K::Elem>,
}

/// Pfaffian of a skew-symmetric matrix of even size, by expansion along
/// the first active row. Pf(A)² = det(A).
pub fn pfaffian<K: Field>(m: &Matrix<K>) -> K::Elem {
    let (rows, cols) = (m.nrows(), m.ncols());
    assert_eq!(rows, cols, "the Pfaffian needs a square matrix");
    assert_eq!(rows % 2, 0, "the Pfaffian needs an even-sized matrix");
    debug_assert!(
        {
            let mut skew = true;
            for i in 0..rows {
                for j in 0..cols {
                    if *m.get(i, j) != m.field().neg(m.get(j, i)) {
                        skew = false;
                    }
                }
            }
            skew
        },
        "the Pfaffian needs a skew-symmetric matrix"
    );
    let indices: Vec<usize> = (0..rows).collect();
    pfaffian_on(m, &indices)
}

fn pfaffian_on<K: Field>(m: &Matrix<K>, indices: &[usize]) -> K::Elem {
    let k = m.field();
    if indices.is_empty() {
        return k.one();
    }
    let first = indices[0];
    let mut acc = k.zero();
    for (pos, &j) in indices.iter().enumerate().skip(1) {
        let entry = m.get(first, j);
        if k.is_zero(entry) {
            continue;
        }
        let rest: Vec<usize> = indices
            .iter()
            .copied()
            .filter(|&x| x != first && x != j)
            .collect();
        let term = k.mul(entry, &pfaffian_on(m, &rest));
        acc = if pos % 2 == 1 {
            k.add(&acc, &term)
        } else {
            k.sub(&acc, &term)
        };
    }
    acc
}

/// The degree-n polynomial λ ↦ Pf(λα − α′), recovered exactly by
/// interpolation at n+1 integer nodes.
pub fn pencil_pfaffian<K: Field>(
    alpha: &MultiVector<K>,
    alpha_prime: &MultiVector<K>,
) -> UniPoly<K> {
    let k = alpha.field().clone();
    let n = alpha.ambient_dim() / 2;
    let nodes: Vec<K::Elem> = (0..=n as i64).map(|i| k.from_i64(i)).collect();
    for (i, x) in nodes.iter().enumerate() {
        for y in nodes.iter().skip(i + 1) {
            assert!(x != y, "the field is too small for {} interpolation nodes", n + 1);
        }
    }
    let points: Vec<(K::Elem, K::Elem)> = nodes
        .into_iter()
        .map(|t| {
            let member = alpha.scale(&t).sub(alpha_prime);
            let value = pfaffian(&member.skew_matrix());
            (t, value)
        })
        .collect();
    UniPoly::interpolate(k, &points)
}

fn root_candidates<K: Field>(field: &K) -> Vec<K::Elem> {
    if let FieldDescriptor::Prime(p) = field.descriptor() {
        if p <= ROOT_SCAN_LIMIT {
            return field
                .enumerate_all()
                .expect("prime fields enumerate their elements");
        }
    }
    let mut out = Vec::new();
    for q in 1..=ROOT_DENOMINATOR_BOUND {
        for p in -ROOT_NUMERATOR_BOUND..=ROOT_NUMERATOR_BOUND {
            if gcd_i64(p.abs(), q) != 1 {
                continue;
            }
            let num = field.from_i64(p);
            let den = field.from_i64(q);
            out.push(field.div(&num, &den).expect("denominator is nonzero"));
        }
    }
    out
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Distinct roots of `poly` found by candidate scan with deflation:
/// exhaustive over small prime fields, bounded small-fraction search
/// otherwise. A candidate that divides twice reports a repeated root.
fn distinct_roots<K: Field>(
    field: &K,
    poly: &UniPoly<K>,
    needed: usize,
) -> Result<Vec<K::Elem>, PencilError> {
    let mut p = poly.clone();
    let mut roots = Vec::with_capacity(needed);
    for c in root_candidates(field) {
        if roots.len() == needed {
            break;
        }
        if !field.is_zero(&p.eval(&c)) {
            continue;
        }
        let linear = UniPoly::from_coeffs(field.clone(), vec![field.neg(&c), field.one()]);
        let (quotient, remainder) = p.div_rem(&linear);
        debug_assert!(remainder.is_zero());
        if field.is_zero(&quotient.eval(&c)) {
            return Err(PencilError::RepeatedRoots);
        }
        p = quotient;
        roots.push(c);
    }
    if roots.len() < needed {
        return Err(PencilError::NonSplit {
            found: roots.len(),
            needed,
        });
    }
    Ok(roots)
}

/// Scale a 2-vector so its highest nonzero coordinate (in the fixed
/// lexicographic pair order) equals 1.
fn normalize_two_vector<K: Field>(v: &MultiVector<K>, masks2: &[u32]) -> MultiVector<K> {
    let k = v.field().clone();
    let dense = v.dense_coords(masks2);
    let last = dense
        .iter()
        .rposition(|c| !k.is_zero(c))
        .expect("a component of the pencil is nonzero");
    let inv = k.inv(&dense[last]).expect("nonzero coordinate");
    v.scale(&inv)
}

pub fn pencil_diagonalize<K: Field>(
    alpha: &MultiVector<K>,
    alpha_prime: &MultiVector<K>,
) -> Result<PencilDiagonalization<K>, PencilError> {
    let k = alpha.field().clone();
    let dim = alpha.ambient_dim();
    assert_eq!(alpha.degree(), 2, "pencil members must be 2-vectors");
    assert_eq!(alpha_prime.degree(), 2, "pencil members must be 2-vectors");
    assert_eq!(
        alpha_prime.ambient_dim(),
        dim,
        "both members must live on the same space"
    );
    assert!(
        dim >= 4 && dim % 2 == 0,
        "the ambient dimension must be even and at least 4"
    );
    let n = dim / 2;

    let alpha_rank = alpha.skew_matrix().rank();
    if alpha_rank != dim {
        return Err(PencilError::AlphaSingular {
            rank: alpha_rank,
            expected: dim,
        });
    }

    let pf = pencil_pfaffian(alpha, alpha_prime);
    let roots = distinct_roots(&k, &pf, n)?;

    let mut supports = Vec::with_capacity(n);
    let mut support_annihilators: Vec<Matrix<K>> = Vec::with_capacity(n);
    for (index, lam) in roots.iter().enumerate() {
        let member = alpha.scale(lam).sub(alpha_prime);
        let skew = member.skew_matrix();
        let rank = skew.rank();
        if rank != dim - 2 {
            return Err(PencilError::ComponentRank {
                index,
                rank,
                expected: dim - 2,
            });
        }
        supports.push(Matrix::from_rows(k.clone(), skew.row_space_basis()));
        support_annihilators.push(Matrix::from_rows(k.clone(), skew.kernel_basis()));
    }

    let masks2 = basis_masks(dim, 2);
    let mut component_planes = Vec::with_capacity(n);
    let mut components = Vec::with_capacity(n);
    for index in 0..n {
        let mut stacked: Option<Matrix<K>> = None;
        for (other, annihilator) in support_annihilators.iter().enumerate() {
            if other == index {
                continue;
            }
            stacked = Some(match stacked {
                None => annihilator.clone(),
                Some(m) => m.vstack(annihilator),
            });
        }
        let plane = stacked
            .expect("a pencil has at least two degenerate members")
            .kernel_basis();
        if plane.len() != 2 {
            return Err(PencilError::PlaneDimension {
                index,
                got: plane.len(),
            });
        }
        let gamma = MultiVector::vector(k.clone(), &plane[0])
            .wedge(&MultiVector::vector(k.clone(), &plane[1]));
        components.push(normalize_two_vector(&gamma, &masks2));
        component_planes.push(Matrix::from_rows(k.clone(), plane));
    }

    let mut kernel_planes = Vec::with_capacity(n);
    for index in 0..n {
        let mut stacked: Option<Matrix<K>> = None;
        for (other, gamma) in components.iter().enumerate() {
            if other == index {
                continue;
            }
            let skew = gamma.skew_matrix();
            stacked = Some(match stacked {
                None => skew,
                Some(m) => m.vstack(&skew),
            });
        }
        let plane = stacked
            .expect("a pencil has at least two components")
            .kernel_basis();
        if plane.len() != 2 {
            return Err(PencilError::KernelDimension {
                index,
                got: plane.len(),
            });
        }
        kernel_planes.push(Matrix::from_rows(k.clone(), plane));
    }

    let coefficient_columns = Matrix::from_rows(
        k.clone(),
        components
            .iter()
            .map(|g| g.dense_coords(&masks2))
            .collect(),
    )
    .transpose();
    let alpha_coefficients = coefficient_columns
        .solve(&alpha.dense_coords(&masks2))
        .ok_or(PencilError::Reconstruction)?;
    let alpha_prime_coefficients = coefficient_columns
        .solve(&alpha_prime.dense_coords(&masks2))
        .ok_or(PencilError::Reconstruction)?;

    Ok(PencilDiagonalization {
        n,
        alpha: alpha.clone(),
        alpha_prime: alpha_prime.clone(),
        roots,
        components,
        supports,
        component_planes,
        kernel_planes,
        alpha_coefficients,
        alpha_prime_coefficients,
    })
}

impl<K: Field> PencilDiagonalization<K> {
    /// True when the n-space spanned by the frame rows meets every plane
    /// ∩_{j≠i} ker γ_j nontrivially — the incidence description of the
    /// common Lagrangian family.
    pub fn meets_every_kernel_plane(&self, frame: &Matrix<K>) -> bool {
        let k = frame.field().clone();
        assert_eq!(frame.ncols(), 2 * self.n);
        self.kernel_planes.iter().all(|plane| {
            let stacked = Matrix::from_rows(k.clone(), frame.rows_vec()).vstack(plane);
            stacked.rank() < frame.nrows() + 2
        })
    }

    /// A point of the i-th common-Lagrangian factor: the combination
    /// a·w₁ + b·w₂ of the kernel-plane basis.
    pub fn kernel_plane_point(&self, index: usize, a: &K::Elem, b: &K::Elem) -> Vec<K::Elem> {
        let k = self.alpha.field();
        let plane = &self.kernel_planes[index];
        (0..plane.ncols())
            .map(|c| {
                k.add(
                    &k.mul(a, plane.get(0, c)),
                    &k.mul(b, plane.get(1, c)),
                )
            })
            .collect()
    }

    /// A random member of the common Lagrangian family: one random nonzero
    /// point on each kernel plane, assembled into an n×2n frame.
    pub fn random_common_lagrangian<R: Rng + ?Sized>(&self, rng: &mut R) -> Matrix<K> {
        let k = self.alpha.field().clone();
        loop {
            let rows: Vec<Vec<K::Elem>> = (0..self.n)
                .map(|i| {
                    let (a, b) = loop {
                        let a = k.sample(rng);
                        let b = k.sample(rng);
                        if !k.is_zero(&a) || !k.is_zero(&b) {
                            break (a, b);
                        }
                    };
                    self.kernel_plane_point(i, &a, &b)
                })
                .collect();
            let frame = Matrix::from_rows(k.clone(), rows);
            if frame.rank() == self.n {
                return frame;
            }
        }
    }
}

/// True when both 2-vectors, read as bilinear forms, restrict to zero on
/// the span of the frame rows.
pub fn common_lagrangian_test<K: Field>(
    frame: &Matrix<K>,
    alpha: &MultiVector<K>,
    alpha_prime: &MultiVector<K>,
) -> bool {
    let n = alpha.ambient_dim() / 2;
    assert_eq!(frame.ncols(), alpha.ambient_dim());
    assert_eq!(
        frame.rank(),
        n,
        "the frame must span an n-dimensional subspace"
    );
    [alpha, alpha_prime].iter().all(|form| {
        frame
            .mul(&form.skew_matrix())
            .mul(&frame.transpose())
            .is_zero()
    })
}

/// Degree of the common-Lagrangian family in its Plücker embedding: n!.
pub fn segre_degree(n: u32) -> u64 {
    assert!(n >= 1 && n <= 20, "n! must fit in 64 bits");
    (1..=n as u64).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rationals};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> Fp {
        Fp::new(p).unwrap()
    }

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn pair_vector<K: Field>(field: &K, dim: usize, pairs: &[(usize, usize, i64)]) -> MultiVector<K> {
        MultiVector::from_terms(
            field.clone(),
            dim,
            2,
            pairs
                .iter()
                .map(|&(a, b, c)| ((1u32 << a) | (1u32 << b), field.from_i64(c))),
        )
    }

    fn component_keys<K: Field>(diag: &[MultiVector<K>]) -> Vec<String> {
        let mut keys: Vec<String> = diag
            .iter()
            .map(|g| {
                let k = g.field();
                let masks = basis_masks(g.ambient_dim(), 2);
                g.dense_coords(&masks)
                    .iter()
                    .map(|c| k.fmt_elem(c))
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        keys.sort();
        keys
    }

    fn random_invertible<K: Field, R: Rng + ?Sized>(
        field: &K,
        dim: usize,
        rng: &mut R,
    ) -> Matrix<K> {
        loop {
            let m = Matrix::from_fn(field.clone(), dim, dim, |_, _| field.sample(rng));
            if !field.is_zero(&m.det()) {
                return m;
            }
        }
    }

    #[test]
    fn pfaffian_of_block_diagonal_and_split_forms() {
        let q = Rationals;
        // Adjacent blocks e₀∧e₁ + e₂∧e₃ + e₄∧e₅: identity matching, Pfaffian 1.
        let blocks = pair_vector(&q, 6, &[(0, 1, 1), (2, 3, 1), (4, 5, 1)]);
        assert_eq!(pfaffian(&blocks.skew_matrix()), q.one());
        // Split pairing e₀∧e₃ + e₁∧e₄ + e₂∧e₅: three crossings, Pfaffian −1.
        let split = pair_vector(&q, 6, &[(0, 3, 1), (1, 4, 1), (2, 5, 1)]);
        assert_eq!(pfaffian(&split.skew_matrix()), q.from_i64(-1));
    }

    #[test]
    fn pfaffian_squares_to_the_determinant() {
        let k = fp(1009);
        let mut r = rng(11);
        for dim in [4usize, 6] {
            let masks = basis_masks(dim, 2);
            for _ in 0..20 {
                let v = MultiVector::from_terms(
                    k,
                    dim,
                    2,
                    masks.iter().map(|&m| (m, k.sample(&mut r))),
                );
                let skew = v.skew_matrix();
                let pf = pfaffian(&skew);
                assert_eq!(k.mul(&pf, &pf), skew.det());
            }
        }
    }

    #[test]
    fn diagonal_pencil_recovers_roots_components_and_coefficients() {
        for use_rationals in [false, true] {
            let run = |alpha: &MultiVector<Fp>, prime: &MultiVector<Fp>| {
                pencil_diagonalize(alpha, prime).unwrap()
            };
            if use_rationals {
                let q = Rationals;
                let alpha = pair_vector(&q, 6, &[(0, 3, 1), (1, 4, 1), (2, 5, 1)]);
                let prime = pair_vector(&q, 6, &[(0, 3, 1), (1, 4, 2), (2, 5, 3)]);
                let diag = pencil_diagonalize(&alpha, &prime).unwrap();
                for want in 1..=3 {
                    assert!(diag.roots.contains(&q.from_i64(want)));
                }
                let expected = component_keys(&[
                    pair_vector(&q, 6, &[(0, 3, 1)]),
                    pair_vector(&q, 6, &[(1, 4, 1)]),
                    pair_vector(&q, 6, &[(2, 5, 1)]),
                ]);
                assert_eq!(component_keys(&diag.components), expected);
            } else {
                let k = fp(1009);
                let alpha = pair_vector(&k, 6, &[(0, 3, 1), (1, 4, 1), (2, 5, 1)]);
                let prime = pair_vector(&k, 6, &[(0, 3, 1), (1, 4, 2), (2, 5, 3)]);
                let diag = run(&alpha, &prime);
                assert_eq!(diag.n, 3);
                for want in 1..=3 {
                    assert!(diag.roots.contains(&k.from_i64(want)));
                }
                let expected = component_keys(&[
                    pair_vector(&k, 6, &[(0, 3, 1)]),
                    pair_vector(&k, 6, &[(1, 4, 1)]),
                    pair_vector(&k, 6, &[(2, 5, 1)]),
                ]);
                assert_eq!(component_keys(&diag.components), expected);
                for i in 0..3 {
                    assert_eq!(
                        diag.alpha_prime_coefficients[i],
                        k.mul(&diag.roots[i], &diag.alpha_coefficients[i]),
                        "the second coefficient of each component is λ_i times the first"
                    );
                }
            }
        }
    }

    #[test]
    fn base_case_on_four_dimensional_space() {
        let k = fp(101);
        let alpha = pair_vector(&k, 4, &[(0, 2, 1), (1, 3, 1)]);
        let prime = pair_vector(&k, 4, &[(0, 2, 1), (1, 3, 2)]);
        let diag = pencil_diagonalize(&alpha, &prime).unwrap();
        assert_eq!(diag.n, 2);
        assert!(diag.roots.contains(&k.from_i64(1)));
        assert!(diag.roots.contains(&k.from_i64(2)));
        let expected = component_keys(&[
            pair_vector(&k, 4, &[(0, 2, 1)]),
            pair_vector(&k, 4, &[(1, 3, 1)]),
        ]);
        assert_eq!(component_keys(&diag.components), expected);
        for (plane, support) in diag.component_planes.iter().zip(diag.supports.iter()) {
            assert_eq!(plane.nrows(), 2);
            assert_eq!(support.nrows(), 2);
        }
    }

    #[test]
    fn conjugated_pencils_round_trip_over_one_hundred_seeds() {
        let k = fp(1009);
        let masks = basis_masks(6, 2);
        let alpha0 = pair_vector(&k, 6, &[(0, 3, 1), (1, 4, 1), (2, 5, 1)]);
        let prime0 = pair_vector(&k, 6, &[(0, 3, 1), (1, 4, 2), (2, 5, 3)]);
        let gammas0 = [
            pair_vector(&k, 6, &[(0, 3, 1)]),
            pair_vector(&k, 6, &[(1, 4, 1)]),
            pair_vector(&k, 6, &[(2, 5, 1)]),
        ];
        for seed in 0..100 {
            let mut r = rng(seed);
            let t = random_invertible(&k, 6, &mut r);
            let alpha = alpha0.apply_linear(&t);
            let prime = prime0.apply_linear(&t);
            let diag = pencil_diagonalize(&alpha, &prime).unwrap();
            for want in 1..=3 {
                assert!(diag.roots.contains(&k.from_i64(want)));
            }
            let expected: Vec<MultiVector<Fp>> = gammas0
                .iter()
                .map(|g| normalize_two_vector(&g.apply_linear(&t), &masks))
                .collect();
            assert_eq!(
                component_keys(&diag.components),
                component_keys(&expected),
                "seed {seed}: conjugated components must match up to permutation"
            );
            // Exact reconstruction: α = Σ c_i γ_i and α′ = Σ λ_i c_i γ_i.
            let mut alpha_sum = MultiVector::zero(k, 6, 2);
            let mut prime_sum = MultiVector::zero(k, 6, 2);
            for i in 0..3 {
                alpha_sum = alpha_sum.add(&diag.components[i].scale(&diag.alpha_coefficients[i]));
                prime_sum =
                    prime_sum.add(&diag.components[i].scale(&diag.alpha_prime_coefficients[i]));
                assert_eq!(
                    diag.alpha_prime_coefficients[i],
                    k.mul(&diag.roots[i], &diag.alpha_coefficients[i])
                );
            }
            assert_eq!(alpha_sum, alpha);
            assert_eq!(prime_sum, prime);
        }
    }

    #[test]
    fn any_basis_of_the_pencil_yields_the_same_components() {
        let k = fp(1009);
        let mut r = rng(42);
        let alpha0 = pair_vector(&k, 6, &[(0, 3, 1), (1, 4, 1), (2, 5, 1)]);
        let prime0 = pair_vector(&k, 6, &[(0, 3, 1), (1, 4, 2), (2, 5, 3)]);
        let t = random_invertible(&k, 6, &mut r);
        let alpha = alpha0.apply_linear(&t);
        let prime = prime0.apply_linear(&t);
        let reference = component_keys(&pencil_diagonalize(&alpha, &prime).unwrap().components);
        let mut remixes = 0;
        while remixes < 30 {
            let (a, b, c, d) = (
                k.sample(&mut r),
                k.sample(&mut r),
                k.sample(&mut r),
                k.sample(&mut r),
            );
            if k.is_zero(&k.sub(&k.mul(&a, &d), &k.mul(&b, &c))) {
                continue;
            }
            let mixed = alpha.scale(&a).add(&prime.scale(&b));
            let mixed_prime = alpha.scale(&c).add(&prime.scale(&d));
            let Ok(diag) = pencil_diagonalize(&mixed, &mixed_prime) else {
                continue;
            };
            assert_eq!(
                component_keys(&diag.components),
                reference,
                "every basis of the pencil determines the same rank-2 components"
            );
            remixes += 1;
        }
    }

    #[test]
    fn repeated_roots_are_rejected() {
        let k = fp(1009);
        let alpha = pair_vector(&k, 6, &[(0, 3, 1), (1, 4, 1), (2, 5, 1)]);
        let prime = pair_vector(&k, 6, &[(0, 3, 1), (1, 4, 1), (2, 5, 3)]);
        assert_eq!(
            pencil_diagonalize(&alpha, &prime).unwrap_err(),
            PencilError::RepeatedRoots
        );
    }

    #[test]
    fn pencils_with_irrational_roots_are_rejected_with_a_clear_error() {
        // Pf(λα − α′) = −λ² + 2: splits only where 2 is a square.
        let q = Rationals;
        let alpha = pair_vector(&q, 4, &[(0, 2, 1), (1, 3, 1)]);
        let prime = pair_vector(&q, 4, &[(0, 3, 1), (1, 2, 2)]);
        assert_eq!(
            pencil_diagonalize(&alpha, &prime).unwrap_err(),
            PencilError::NonSplit {
                found: 0,
                needed: 2
            }
        );

        let k5 = fp(5);
        let alpha5 = pair_vector(&k5, 4, &[(0, 2, 1), (1, 3, 1)]);
        let prime5 = pair_vector(&k5, 4, &[(0, 3, 1), (1, 2, 2)]);
        assert_eq!(
            pencil_diagonalize(&alpha5, &prime5).unwrap_err(),
            PencilError::NonSplit {
                found: 0,
                needed: 2
            }
        );

        let k7 = fp(7);
        let alpha7 = pair_vector(&k7, 4, &[(0, 2, 1), (1, 3, 1)]);
        let prime7 = pair_vector(&k7, 4, &[(0, 3, 1), (1, 2, 2)]);
        let diag = pencil_diagonalize(&alpha7, &prime7).unwrap();
        assert!(diag.roots.contains(&k7.from_i64(3)));
        assert!(diag.roots.contains(&k7.from_i64(4)));
    }

    #[test]
    fn singular_first_members_are_rejected() {
        let k = fp(1009);
        let alpha = pair_vector(&k, 6, &[(0, 3, 1)]);
        let prime = pair_vector(&k, 6, &[(1, 4, 1), (2, 5, 1)]);
        assert_eq!(
            pencil_diagonalize(&alpha, &prime).unwrap_err(),
            PencilError::AlphaSingular {
                rank: 2,
                expected: 6
            }
        );
    }

    #[test]
    fn lagrangian_test_on_the_diagonal_pencil() {
        let k = fp(1009);
        let alpha = pair_vector(&k, 6, &[(0, 3, 1), (1, 4, 1), (2, 5, 1)]);
        let prime = pair_vector(&k, 6, &[(0, 3, 1), (1, 4, 2), (2, 5, 3)]);
        let frame = |rows: &[usize]| {
            Matrix::from_fn(k, 3, 6, |r, c| {
                if rows[r] == c {
                    k.one()
                } else {
                    k.zero()
                }
            })
        };
        assert!(common_lagrangian_test(&frame(&[0, 1, 2]), &alpha, &prime));
        assert!(!common_lagrangian_test(&frame(&[0, 1, 3]), &alpha, &prime));

        let diag = pencil_diagonalize(&alpha, &prime).unwrap();
        for plane in &diag.kernel_planes {
            assert_eq!(plane.nrows(), 2);
        }
        // For the split diagonal pencil the kernel planes are the
        // coordinate pairings {e_i, e_{i+3}}.
        for i in 0..3 {
            let expected = Matrix::from_fn(k, 2, 6, |r, c| {
                if (r == 0 && c == i) || (r == 1 && c == i + 3) {
                    k.one()
                } else {
                    k.zero()
                }
            });
            assert!(diag
                .kernel_planes
                .iter()
                .any(|plane| plane.vstack(&expected).rank() == 2));
        }
    }

    #[test]
    fn vanishing_restriction_matches_kernel_plane_incidence() {
        let k = fp(1009);
        let mut r = rng(7);
        let alpha0 = pair_vector(&k, 6, &[(0, 3, 1), (1, 4, 1), (2, 5, 1)]);
        let prime0 = pair_vector(&k, 6, &[(0, 3, 1), (1, 4, 2), (2, 5, 3)]);
        let t = random_invertible(&k, 6, &mut r);
        let alpha = alpha0.apply_linear(&t);
        let prime = prime0.apply_linear(&t);
        let diag = pencil_diagonalize(&alpha, &prime).unwrap();

        for _ in 0..200 {
            let member = diag.random_common_lagrangian(&mut r);
            assert!(common_lagrangian_test(&member, &alpha, &prime));
            assert!(diag.meets_every_kernel_plane(&member));
        }
        for _ in 0..200 {
            let frame = loop {
                let candidate =
                    Matrix::from_fn(k, 3, 6, |_, _| k.sample(&mut r));
                if candidate.rank() == 3 {
                    break candidate;
                }
            };
            assert_eq!(
                common_lagrangian_test(&frame, &alpha, &prime),
                diag.meets_every_kernel_plane(&frame),
                "the two descriptions of the common Lagrangian family agree"
            );
        }
    }

    #[test]
    fn member_support_and_component_planes_have_the_stated_dimensions() {
        let k = fp(1009);
        let mut r = rng(3);
        let alpha0 = pair_vector(&k, 6, &[(0, 3, 1), (1, 4, 1), (2, 5, 1)]);
        let prime0 = pair_vector(&k, 6, &[(0, 3, 1), (1, 4, 2), (2, 5, 3)]);
        let t = random_invertible(&k, 6, &mut r);
        let diag =
            pencil_diagonalize(&alpha0.apply_linear(&t), &prime0.apply_linear(&t)).unwrap();
        let masks = basis_masks(6, 2);
        for i in 0..3 {
            assert_eq!(diag.supports[i].nrows(), 4);
            assert_eq!(diag.supports[i].rank(), 4);
            assert_eq!(diag.component_planes[i].rank(), 2);
            // γ_i is the wedge of its plane's rows, up to the fixed scale.
            let plane = &diag.component_planes[i];
            let wedge = MultiVector::vector(k, &plane.row(0).to_vec())
                .wedge(&MultiVector::vector(k, &plane.row(1).to_vec()));
            assert_eq!(
                normalize_two_vector(&wedge, &masks),
                diag.components[i]
            );
            // The support of the degenerate member is spanned by the other
            // two component planes.
            let mut others = diag.supports[i].clone();
            for j in 0..3 {
                if j != i {
                    others = others.vstack(&diag.component_planes[j]);
                }
            }
            assert_eq!(others.rank(), 4);
        }
    }

    #[test]
    fn segre_degrees_are_factorials() {
        assert_eq!(segre_degree(1), 1);
        assert_eq!(segre_degree(2), 2);
        assert_eq!(segre_degree(3), 6);
        assert_eq!(segre_degree(4), 24);
    }
}
