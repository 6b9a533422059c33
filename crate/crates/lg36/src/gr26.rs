//! The Grassmannian G(2,6) ⊂ P¹⁴ of 2-vectors, the Pfaffian cubic on skew
//! 2-forms, the kernel map from rank-4 forms to decomposable 2-vectors, and
//! planes of 2-forms on which the Pfaffian vanishes identically.
//!
//! 2-vectors and skew 2-forms share the representation: a `MultiVector` of
//! degree 2 in dimension 6 (equivalently a skew 6×6 matrix), serialized as
//! 15 coordinates in lexicographic pair order (1,2),(1,3),…,(5,6).

use crate::exterior::{basis_masks, MultiVector};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::poly::IntPoly;
use rand::Rng;
use thiserror::Error;

const FULL_MASK: u32 = 0b111111;

#[derive(Debug, Error)]
pub enum GrError {
    #[error("plane basis must consist of 3 independent 2-forms in dimension 6")]
    BadBasis,
    #[error(
        "Pfaffian does not vanish identically on the plane: \
         the coefficient of s^{}·t^{}·u^{} is nonzero",
        .exponents.0, .exponents.1, .exponents.2
    )]
    PfaffianNonzero { exponents: (u8, u8, u8) },
    #[error("plane contains a rank-2 form (parameters [{params}])")]
    RankTwoMember { params: String },
    #[error("kernel span of the plane has dimension {0}, expected 4")]
    KernelSpanDim(usize),
}

fn assert_two_vector<K: Field>(w: &MultiVector<K>) {
    assert_eq!(
        (w.ambient_dim(), w.degree()),
        (6, 2),
        "expected a 2-vector in dimension 6"
    );
}

/// 2-vector of a skew 6×6 matrix: Σ_{i<j} m_ij·e_i∧e_j.
pub fn two_vector_from_skew<K: Field>(m: &Matrix<K>) -> MultiVector<K> {
    assert_eq!((m.nrows(), m.ncols()), (6, 6));
    let k = m.field().clone();
    assert!(m.add(&m.transpose()).is_zero(), "matrix must be skew");
    let mut terms = Vec::new();
    for i in 0..6 {
        for j in i + 1..6 {
            terms.push((1u32 << i | 1 << j, m.get(i, j).clone()));
        }
    }
    MultiVector::from_terms(k, 6, 2, terms)
}

/// Rank of a 2-vector: the rank of its skew matrix (0, 2, 4 or 6).
pub fn two_vector_rank<K: Field>(w: &MultiVector<K>) -> usize {
    assert_two_vector(w);
    w.skew_matrix().rank()
}

/// The 15 coordinates of a 2-vector in lexicographic pair order
/// (1,2),(1,3),…,(5,6) — the serialization order.
pub fn two_vector_coords<K: Field>(w: &MultiVector<K>) -> Vec<K::Elem> {
    assert_two_vector(w);
    w.dense_coords(&basis_masks(6, 2))
}

/// The Pfaffian of a 2-vector in dimension 6, normalized so that the
/// standard symplectic form x₁∧x₄ + x₂∧x₅ + x₃∧x₆ has Pfaffian +1.
/// Satisfies Pf(A)² = det A and Pf(A) = 0 ⇔ rank A ≤ 4.
pub fn pfaffian<K: Field>(w: &MultiVector<K>) -> K::Elem {
    assert_two_vector(w);
    let k = w.field().clone();
    let top = w.wedge(w).wedge(w).coeff_mask(FULL_MASK);
    let six = k.from_i64(6);
    k.neg(&k.div(&top, &six).expect("6 is invertible"))
}

pub fn pfaffian_skew<K: Field>(m: &Matrix<K>) -> K::Elem {
    pfaffian(&two_vector_from_skew(m))
}

/// Do two nonzero multivectors of the same degree span the same line?
pub fn proportional<K: Field>(a: &MultiVector<K>, b: &MultiVector<K>) -> bool {
    assert!(!a.is_zero() && !b.is_zero());
    assert_eq!((a.ambient_dim(), a.degree()), (b.ambient_dim(), b.degree()));
    let masks = basis_masks(a.ambient_dim(), a.degree());
    let k = a.field().clone();
    let rows = vec![a.dense_coords(&masks), b.dense_coords(&masks)];
    Matrix::from_rows(k, rows).rank() == 1
}

/// Kernel map on rank-4 forms, kernel route: the decomposable 2-vector
/// spanning ∧²(ker A) for the skew matrix of A. Panics when rank(A) ≠ 4.
pub fn pker<K: Field>(a: &MultiVector<K>) -> MultiVector<K> {
    assert_two_vector(a);
    let k = a.field().clone();
    let m = a.skew_matrix();
    assert_eq!(m.rank(), 4, "kernel map needs a form of rank exactly 4");
    let kernel = m.kernel_basis();
    let k1 = MultiVector::vector(k.clone(), &kernel[0]);
    let k2 = MultiVector::vector(k, &kernel[1]);
    k1.wedge(&k2)
}

/// Kernel map, quadratic route: the complement reading of A∧A. The 4-form
/// A∧A is decomposable with support the image of A, and the 2-vector with
/// coordinates w_{ab} = ε(a,b)·(A∧A)_{complement}, ε the Koszul sign of
/// e_a∧e_b∧e_complement = e₁…₆, spans the kernel 2-space. Each coordinate is
/// quadratic in the coordinates of A. Panics when rank(A) ≠ 4.
pub fn pker_quadratic<K: Field>(a: &MultiVector<K>) -> MultiVector<K> {
    assert_two_vector(a);
    assert_eq!(
        a.skew_matrix().rank(),
        4,
        "kernel map needs a form of rank exactly 4"
    );
    let w = complement_two_vector(&a.wedge(a));
    debug_assert!(w.wedge(&w).is_zero());
    w
}

/// The degree-2 complement of a 4-vector on a 6-dimensional space: the
/// coefficient on each index pair is the coefficient of the input on the
/// complementary quadruple, signed so that pair ∧ quadruple = +(top form).
/// The complement of a decomposable 4-vector ∧⁴S is a decomposable 2-vector
/// whose plane pairs to zero with S, and linear automorphisms act through it
/// by ∧²(inverse-transpose) up to scale.
pub fn complement_two_vector<K: Field>(sq: &MultiVector<K>) -> MultiVector<K> {
    assert_eq!(
        sq.ambient_dim(),
        6,
        "complement is defined on a 6-dimensional space"
    );
    assert_eq!(sq.degree(), 4, "complement takes a degree-4 multivector");
    let k = sq.field().clone();
    let mut terms = Vec::new();
    for pair in basis_masks(6, 2) {
        let comp = FULL_MASK & !pair;
        let pair_idx: Vec<usize> = (0..6).filter(|&i| pair >> i & 1 == 1).collect();
        let comp_idx: Vec<usize> = (0..6).filter(|&i| comp >> i & 1 == 1).collect();
        let sign = MultiVector::basis(k.clone(), 6, &pair_idx)
            .wedge(&MultiVector::basis(k.clone(), 6, &comp_idx))
            .coeff_mask(FULL_MASK);
        terms.push((pair, k.mul(&sign, &sq.coeff_mask(comp))));
    }
    MultiVector::from_terms(k, 6, 2, terms)
}

/// How the absence of rank-2 members of a plane was established.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum RankTwoCheck {
    /// Every point of P² over the coefficient field was tested.
    Exhaustive { field: String, points: usize },
    /// The field is not small enough to enumerate: a fixed number of
    /// deterministic pseudo-random parameter triples was tested.
    Sampled { field: String, samples: usize },
}

/// A 3-dimensional plane of skew 2-forms on which the Pfaffian vanishes
/// identically and which contains no rank-2 form (so every nonzero member
/// has rank exactly 4).
#[derive(Clone, Debug)]
pub struct PfaffianPlane<K: Field> {
    field: K,
    basis: Vec<MultiVector<K>>,
    check: RankTwoCheck,
}

const RANK_TWO_SAMPLES: usize = 2000;

impl<K: Field> PfaffianPlane<K> {
    /// Validate and build: the basis must be independent, the Pfaffian must
    /// vanish as a polynomial identity in the three plane parameters (all 10
    /// cubic coefficients zero, via the multinomial wedge expansion), and no
    /// member may have rank 2 (exhaustively over an enumerable field of size
    /// ≤ 31, by deterministic sampling otherwise).
    pub fn new(field: K, basis: Vec<MultiVector<K>>) -> Result<Self, GrError> {
        if basis.len() != 3 {
            return Err(GrError::BadBasis);
        }
        for b in &basis {
            if (b.ambient_dim(), b.degree()) != (6, 2) {
                return Err(GrError::BadBasis);
            }
        }
        let rows: Vec<Vec<K::Elem>> = basis.iter().map(two_vector_coords).collect();
        if Matrix::from_rows(field.clone(), rows).rank() != 3 {
            return Err(GrError::BadBasis);
        }

        // Pf(s·A₁ + t·A₂ + u·A₃) expands as −1/6 · Σ multinomial(3; a,b,c)
        // s^a t^b u^c · (A₁^∧a ∧ A₂^∧b ∧ A₃^∧c)|top. All coefficients must be 0.
        for a in 0..=3u8 {
            for b in 0..=(3 - a) {
                let c = 3 - a - b;
                let mut top = MultiVector::basis(field.clone(), 6, &[]);
                for _ in 0..a {
                    top = top.wedge(&basis[0]);
                }
                for _ in 0..b {
                    top = top.wedge(&basis[1]);
                }
                for _ in 0..c {
                    top = top.wedge(&basis[2]);
                }
                if !field.is_zero(&top.coeff_mask(FULL_MASK)) {
                    return Err(GrError::PfaffianNonzero {
                        exponents: (a, b, c),
                    });
                }
            }
        }

        let plane = PfaffianPlane {
            field: field.clone(),
            basis,
            check: RankTwoCheck::Sampled {
                field: field.descriptor().to_string(),
                samples: 0,
            },
        };
        let check = plane.scan_for_rank_two()?;
        Ok(PfaffianPlane { check, ..plane })
    }

    fn scan_for_rank_two(&self) -> Result<RankTwoCheck, GrError> {
        let k = &self.field;
        let name = k.descriptor().to_string();
        let rank_two_at = |s: &K::Elem, t: &K::Elem, u: &K::Elem| -> bool {
            let w = self.member(s, t, u);
            w.wedge(&w).is_zero()
        };
        match k.enumerate_all() {
            Some(elems) if elems.len() <= 31 => {
                // Representatives of P²: (1,t,u), (0,1,u), (0,0,1).
                let one = k.one();
                let zero = k.zero();
                let mut points = 0usize;
                for t in &elems {
                    for u in &elems {
                        points += 1;
                        if rank_two_at(&one, t, u) {
                            return Err(GrError::RankTwoMember {
                                params: format!(
                                    "1, {}, {}",
                                    k.fmt_elem(t),
                                    k.fmt_elem(u)
                                ),
                            });
                        }
                    }
                }
                for u in &elems {
                    points += 1;
                    if rank_two_at(&zero, &one, u) {
                        return Err(GrError::RankTwoMember {
                            params: format!("0, 1, {}", k.fmt_elem(u)),
                        });
                    }
                }
                points += 1;
                if rank_two_at(&zero, &zero, &one) {
                    return Err(GrError::RankTwoMember {
                        params: "0, 0, 1".into(),
                    });
                }
                Ok(RankTwoCheck::Exhaustive {
                    field: name,
                    points,
                })
            }
            _ => {
                use rand::SeedableRng;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5EED_2F0C);
                for _ in 0..RANK_TWO_SAMPLES {
                    let (s, t, u) = (k.sample(&mut rng), k.sample(&mut rng), k.sample(&mut rng));
                    if k.is_zero(&s) && k.is_zero(&t) && k.is_zero(&u) {
                        continue;
                    }
                    if rank_two_at(&s, &t, &u) {
                        return Err(GrError::RankTwoMember {
                            params: format!(
                                "{}, {}, {}",
                                k.fmt_elem(&s),
                                k.fmt_elem(&t),
                                k.fmt_elem(&u)
                            ),
                        });
                    }
                }
                Ok(RankTwoCheck::Sampled {
                    field: name,
                    samples: RANK_TWO_SAMPLES,
                })
            }
        }
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn basis(&self) -> &[MultiVector<K>] {
        &self.basis
    }

    pub fn check_mode(&self) -> &RankTwoCheck {
        &self.check
    }

    /// The member s·A₁ + t·A₂ + u·A₃.
    pub fn member(&self, s: &K::Elem, t: &K::Elem, u: &K::Elem) -> MultiVector<K> {
        self.basis[0]
            .scale(s)
            .add(&self.basis[1].scale(t))
            .add(&self.basis[2].scale(u))
    }
}

/// Is w on the 5-fold Z cut out by the plane: decomposable (w∧w = 0) and
/// annihilated by every form of the plane?
pub fn z_membership<K: Field>(w: &MultiVector<K>, plane: &PfaffianPlane<K>) -> bool {
    assert_two_vector(w);
    assert!(!w.is_zero());
    let k = w.field();
    if !w.wedge(w).is_zero() {
        return false;
    }
    plane.basis().iter().all(|a| k.is_zero(&a.dual_pair(w)))
}

/// The common support W of the plane's kernels: span of ker(A) over the
/// members at a fixed parameter grid. Returns the 4×6 row basis; checks that
/// every plane member annihilates ∧²W.
pub fn quadric_in_z<K: Field>(plane: &PfaffianPlane<K>) -> Result<Matrix<K>, GrError> {
    let k = plane.field().clone();
    let grid: [(i64, i64, i64); 7] = [
        (1, 0, 0),
        (0, 1, 0),
        (0, 0, 1),
        (1, 1, 0),
        (1, 0, 1),
        (0, 1, 1),
        (1, 2, 3),
    ];
    let mut rows: Vec<Vec<K::Elem>> = Vec::new();
    for (s, t, u) in grid {
        let a = plane.member(&k.from_i64(s), &k.from_i64(t), &k.from_i64(u));
        if a.is_zero() || a.skew_matrix().rank() != 4 {
            continue;
        }
        for v in a.skew_matrix().kernel_basis() {
            rows.push(v);
        }
    }
    let mut span = Matrix::from_rows(k.clone(), rows);
    let pivots = span.rref();
    let dim = pivots.len();
    if dim != 4 {
        return Err(GrError::KernelSpanDim(dim));
    }
    let w = Matrix::from_rows(k.clone(), (0..4).map(|r| span.row(r).to_vec()).collect());
    // Every member annihilates ∧²W.
    for a in plane.basis() {
        for i in 0..4 {
            for j in i + 1..4 {
                let wi = MultiVector::vector(k.clone(), w.row(i));
                let wj = MultiVector::vector(k.clone(), w.row(j));
                if !k.is_zero(&a.dual_pair(&wi.wedge(&wj))) {
                    return Err(GrError::KernelSpanDim(dim));
                }
            }
        }
    }
    Ok(w)
}

/// The quadratic map A ↦ ∧²(ker A) evaluated on a parameter list: the image
/// points of the plane's conic of kernels, computed by the quadratic route
/// (so the 15 coordinates are honest quadratic forms in the parameters).
pub fn veronese_locus<K: Field>(
    plane: &PfaffianPlane<K>,
    params: &[(K::Elem, K::Elem, K::Elem)],
) -> Vec<MultiVector<K>> {
    params
        .iter()
        .map(|(s, t, u)| {
            let a = plane.member(s, t, u);
            assert!(!a.is_zero(), "parameters give the zero form");
            pker_quadratic(&a)
        })
        .collect()
}

/// The 15 Plücker quadrics of G(2,6): the coefficients of w∧w ∈ ∧⁴ as
/// polynomials in the 15 coordinates of w (lexicographic pair order).
pub fn plucker_quadrics() -> Vec<IntPoly> {
    let pairs = basis_masks(6, 2);
    let index_of = |m: u32| pairs.iter().position(|&p| p == m).unwrap();
    basis_masks(6, 4)
        .into_iter()
        .map(|m4| {
            let mut q = IntPoly::zero(15);
            for (pos, &m1) in pairs.iter().enumerate() {
                for &m2 in &pairs[pos + 1..] {
                    if m1 & m2 != 0 || m1 | m2 != m4 {
                        continue;
                    }
                    let idx1: Vec<usize> = (0..6).filter(|&i| m1 >> i & 1 == 1).collect();
                    let idx2: Vec<usize> = (0..6).filter(|&i| m2 >> i & 1 == 1).collect();
                    // Sign of e_{m1}∧e_{m2} on the 4-mask, via a tiny integer model.
                    let sign = {
                        let mut perm: Vec<usize> = idx1.iter().chain(idx2.iter()).copied().collect();
                        let mut s = 1i64;
                        for a in 0..perm.len() {
                            for b in a + 1..perm.len() {
                                if perm[a] > perm[b] {
                                    s = -s;
                                }
                            }
                        }
                        perm.sort_unstable();
                        s
                    };
                    let term = IntPoly::var(15, index_of(m1))
                        .mul(&IntPoly::var(15, index_of(m2)))
                        .scale(2 * sign);
                    q = q.add(&term);
                }
            }
            q
        })
        .collect()
}

/// A random decomposable 2-vector v₁∧v₂ ≠ 0.
pub fn random_decomposable<K: Field, R: Rng + ?Sized>(field: &K, rng: &mut R) -> MultiVector<K> {
    loop {
        let v1: Vec<K::Elem> = (0..6).map(|_| field.sample(rng)).collect();
        let v2: Vec<K::Elem> = (0..6).map(|_| field.sample(rng)).collect();
        let w = MultiVector::vector(field.clone(), &v1).wedge(&MultiVector::vector(field.clone(), &v2));
        if !w.is_zero() {
            return w;
        }
    }
}

/// A random 2-vector of rank exactly 4: v₁∧v₂ + v₃∧v₄.
pub fn random_rank_four<K: Field, R: Rng + ?Sized>(field: &K, rng: &mut R) -> MultiVector<K> {
    loop {
        let w = random_decomposable(field, rng).add(&random_decomposable(field, rng));
        if w.skew_matrix().rank() == 4 {
            return w;
        }
    }
}
