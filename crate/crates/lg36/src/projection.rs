//! Projection of a nodal hyperplane section of Σ from its node into G(2,6).
//!
//! A hyperplane section H_ω with a node at [U] carries a rank-2 vector bundle
//! whose space of global sections is 6-dimensional exactly when it is computed
//! through an isotropic direction of the node's conic q_ω. Evaluating the six
//! sections at a point [U′] of the section cuts a 4-dimensional kernel inside
//! the section space, and the 2-plane it determines in the dual section space
//! is a point of G(2,6) ⊂ P¹⁴. This module constructs the section space by
//! exact linear algebra, evaluates the Grassmannian map pointwise, and then
//! certifies that the map is nothing but the linear projection of H_ω from the
//! node: it fits a single 15×12 matrix carrying projected coordinates to
//! Plücker coordinates on every sampled point and cross-validates the fit on
//! held-out samples.
//!
//! Everything is computed in the coordinates adapted to the node: the witness
//! transporter moves the node to the distinguished chart origin, where the
//! pivot plane is U = ⟨e₁,e₂,e₃⟩, its symplectic pairing L_α(U) = ⟨x₄,x₅,x₆⟩,
//! and the hyperplane form has only Y*- and z*-blocks.

use crate::exterior::{basis_masks, MultiVector, SymplecticForm};
use crate::field::Field;
use crate::gr26::complement_two_vector;
use crate::matrix::{solve_homogeneous, Matrix};
use crate::sigma::{sample_h_omega_chart, DualForm, NodalWitness, SigmaPoint, NUM_COORDS};
use rand::Rng;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProjectionError {
    #[error("no isotropic direction of the node conic was found (the conic may have no point over this field)")]
    NoConicPoint,
    #[error("section system solved to dimension {got} instead of 7 (6 modulo the symplectic form)")]
    SectionDimension { got: usize },
    #[error("section evaluation at the sample has rank {rank}, not the rank 2 of the kernel bundle")]
    EvaluationRank { rank: usize },
    #[error("hyperplane sampling produced too few usable points ({accepted} accepted)")]
    NotEnoughSamples { accepted: usize },
    #[error("projection fit is underdetermined: solution space has dimension {solutions}")]
    FitUnderdetermined { solutions: usize },
    #[error("projection fit has no nonzero solution: no linear map matches the sampled Grassmannian points")]
    FitContradiction,
    #[error("fitted projection fails on held-out sample {index}")]
    HeldOutMismatch { index: usize },
    #[error("fitted matrix has rank {rank}, not 12")]
    FitRank { rank: usize },
    #[error("kernel of the transposed fit has dimension {dim}, not 3")]
    PlaneDimension { dim: usize },
}

/// A nonzero solution v of vᵀ·G·v = 0 for a symmetric 3×3 matrix G, found by
/// intersecting the conic with random lines and taking exact square roots of
/// the discriminant. Over F_p a smooth conic always has points and the search
/// succeeds quickly; over Q the conic may have no rational point, in which
/// case the search gives up after `max_tries` lines.
pub fn conic_point<K: Field, R: Rng + ?Sized>(
    field: &K,
    gram: &Matrix<K>,
    rng: &mut R,
    max_tries: usize,
) -> Option<Vec<K::Elem>> {
    assert_eq!((gram.nrows(), gram.ncols()), (3, 3));
    let k = field;
    let quad = |v: &[K::Elem]| -> K::Elem {
        let mut acc = k.zero();
        for i in 0..3 {
            for j in 0..3 {
                acc = k.add(&acc, &k.mul(gram.get(i, j), &k.mul(&v[i], &v[j])));
            }
        }
        acc
    };
    let bilin = |u: &[K::Elem], v: &[K::Elem]| -> K::Elem {
        let mut acc = k.zero();
        for i in 0..3 {
            for j in 0..3 {
                acc = k.add(&acc, &k.mul(gram.get(i, j), &k.mul(&u[i], &v[j])));
            }
        }
        acc
    };
    for _ in 0..max_tries {
        let a: Vec<K::Elem> = (0..3).map(|_| k.sample(rng)).collect();
        let b: Vec<K::Elem> = (0..3).map(|_| k.sample(rng)).collect();
        if b.iter().all(|c| k.is_zero(c)) {
            continue;
        }
        let qb = quad(&b);
        if k.is_zero(&qb) {
            return Some(b);
        }
        // q(a + t·b) = q(b)·t² + 2B(a,b)·t + q(a); solve for t exactly.
        let qa = quad(&a);
        let m = bilin(&a, &b);
        let disc = k.sub(&k.mul(&m, &m), &k.mul(&qa, &qb));
        let Some(root) = k.sqrt(&disc) else {
            continue;
        };
        let t = k
            .div(&k.sub(&root, &m), &qb)
            .expect("q(b) is nonzero on this branch");
        let v: Vec<K::Elem> = (0..3)
            .map(|i| k.add(&a[i], &k.mul(&t, &b[i])))
            .collect();
        if v.iter().all(|c| k.is_zero(c)) {
            continue;
        }
        debug_assert!(k.is_zero(&quad(&v)));
        return Some(v);
    }
    None
}

/// The witness form pulled back to the node's adapted chart, where the node is
/// [1 : 0 : … : 0] and the form has zero u*- and X*-blocks.
pub fn standard_form<K: Field>(witness: &NodalWitness<K>) -> DualForm<K> {
    let k = witness.omega.field();
    let pulled = witness
        .omega
        .to_three_form()
        .apply_linear(&witness.transporter.transpose());
    let omega0 = DualForm::from_three_form(&pulled);
    assert!(
        k.is_zero(omega0.ustar()) && omega0.xstar_matrix().is_zero(),
        "witness form does not annihilate the tangent space at its pivot"
    );
    omega0
}

/// The 12-dimensional space of 2-forms spanned by x_i∧x_j with i ∈ {4,5,6}
/// and j arbitrary distinct: the forms with at most one factor dual to the
/// pivot plane. Fixed basis order: the nine mixed pairs, then the three pairs
/// inside ⟨x₄,x₅,x₆⟩.
fn beta_basis<K: Field>(field: &K) -> Vec<MultiVector<K>> {
    let mut basis = Vec::with_capacity(12);
    for i in 3..6 {
        for j in 0..3 {
            basis.push(MultiVector::basis(field.clone(), 6, &[j, i]));
        }
    }
    for (i, j) in [(3, 4), (3, 5), (4, 5)] {
        basis.push(MultiVector::basis(field.clone(), 6, &[i, j]));
    }
    basis
}

/// All 2-forms β in the 12-dimensional space of [`beta_basis`] such that
/// β∧x lies in the span of α∧⟨x₄,x₅,x₆⟩ and the hyperplane form — the global
/// sections of the kernel bundle through the direction x, before passing
/// modulo the symplectic form. Returns a reduced row basis (each row the 15
/// dense coordinates of a 2-form).
///
/// The solution space has dimension 7 exactly when x = L_α(v) for an
/// isotropic direction v of the node conic, and dimension 6 otherwise; the
/// symplectic form α is always a solution (α∧x = α∧x).
pub fn section_solutions<K: Field>(
    sp: &SymplecticForm<K>,
    omega0: &DualForm<K>,
    x_form: &MultiVector<K>,
) -> Matrix<K> {
    let k = sp.field().clone();
    assert_eq!(x_form.degree(), 1);
    assert!(!x_form.is_zero(), "projection direction x must be nonzero");
    let masks3 = basis_masks(6, 3);
    let betas = beta_basis(&k);
    // Unknowns: 12 coefficients of β, 3 of y ∈ ⟨x₄,x₅,x₆⟩, 1 of the form;
    // equations: the 20 coordinates of β∧x − α∧y − c·ω₀ = 0.
    let mut cols: Vec<Vec<K::Elem>> = Vec::with_capacity(16);
    for b in &betas {
        cols.push(b.wedge(x_form).dense_coords(&masks3));
    }
    let alpha = sp.two_form();
    for i in 3..6 {
        let y = MultiVector::basis(k.clone(), 6, &[i]);
        cols.push(alpha.wedge(&y).neg().dense_coords(&masks3));
    }
    cols.push(omega0.to_three_form().neg().dense_coords(&masks3));
    let rows: Vec<Vec<K::Elem>> = (0..masks3.len())
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect();
    let kernel = solve_homogeneous(k.clone(), &rows, 16);
    let masks2 = basis_masks(6, 2);
    let beta_rows: Vec<Vec<K::Elem>> = kernel
        .iter()
        .map(|sol| {
            let mut b = MultiVector::zero(k.clone(), 6, 2);
            for (i, basis_form) in betas.iter().enumerate() {
                b = b.add(&basis_form.scale(&sol[i]));
            }
            b.dense_coords(&masks2)
        })
        .collect();
    let mut m = Matrix::from_rows(k, beta_rows);
    let rank = m.rref().len();
    Matrix::from_rows(
        m.field().clone(),
        (0..rank).map(|r| m.row(r).to_vec()).collect(),
    )
}

/// Expresses `target` in the row space of `rows`, if possible.
fn solve_in_row_space<K: Field>(
    field: &K,
    rows: &Matrix<K>,
    target: &[K::Elem],
) -> Option<Vec<K::Elem>> {
    let n = rows.nrows();
    let width = rows.ncols();
    assert_eq!(target.len(), width);
    // Kernel of [rowsᵀ | −target]: a kernel vector with nonzero last entry
    // yields the combination.
    let sys: Vec<Vec<K::Elem>> = (0..width)
        .map(|c| {
            let mut row: Vec<K::Elem> = (0..n).map(|r| rows.get(r, c).clone()).collect();
            row.push(field.neg(&target[c]));
            row
        })
        .collect();
    for kv in solve_homogeneous(field.clone(), &sys, n + 1) {
        if !field.is_zero(&kv[n]) {
            let inv = field.inv(&kv[n]).expect("nonzero entry");
            return Some(kv[..n].iter().map(|c| field.mul(c, &inv)).collect());
        }
    }
    None
}

/// The 6-dimensional space of sections of the kernel bundle of a nodal
/// hyperplane section, presented by a fixed basis of 2-forms complementary to
/// the symplectic form, together with the isotropic direction it was computed
/// through. All data lives in the node's adapted chart coordinates.
#[derive(Clone, Debug)]
pub struct SectionSpace<K: Field> {
    omega0: DualForm<K>,
    v: Vec<K::Elem>,
    x_form: MultiVector<K>,
    basis: Vec<MultiVector<K>>,
    rows_with_alpha: Matrix<K>,
}

impl<K: Field> SectionSpace<K> {
    /// The hyperplane form in the node's adapted chart.
    pub fn standard_form(&self) -> &DualForm<K> {
        &self.omega0
    }

    /// The isotropic direction of the node conic, in the pivot-plane basis.
    pub fn direction(&self) -> &[K::Elem] {
        &self.v
    }

    /// The 1-form L_α(v) the sections were solved through.
    pub fn x_form(&self) -> &MultiVector<K> {
        &self.x_form
    }

    /// Six 2-forms spanning the section space modulo the symplectic form.
    pub fn basis(&self) -> &[MultiVector<K>] {
        &self.basis
    }

    /// Reduced row basis (7×15) of the full solution space, α included.
    /// Independent of the choice of isotropic direction, so equality of these
    /// matrices certifies two presentations describe the same bundle.
    pub fn rows_with_alpha(&self) -> &Matrix<K> {
        &self.rows_with_alpha
    }
}

/// Builds the section space of a nodal hyperplane section: picks an isotropic
/// direction v of the node conic, solves the section system through
/// x = L_α(v), checks the solution space is 7-dimensional, and splits off the
/// ever-present symplectic form to leave a 6-dimensional basis.
pub fn section_space<K: Field, R: Rng + ?Sized>(
    sp: &SymplecticForm<K>,
    witness: &NodalWitness<K>,
    rng: &mut R,
) -> Result<SectionSpace<K>, ProjectionError> {
    let k = sp.field().clone();
    let omega0 = standard_form(witness);
    let gram = omega0.ystar_matrix();
    let v = conic_point(&k, &gram, rng, 64).ok_or(ProjectionError::NoConicPoint)?;
    let mut v6 = v.clone();
    v6.extend((0..3).map(|_| k.zero()));
    let x_form = sp.correlation(&MultiVector::vector(k.clone(), &v6));
    let rows = section_solutions(sp, &omega0, &x_form);
    if rows.nrows() != 7 {
        return Err(ProjectionError::SectionDimension { got: rows.nrows() });
    }
    let masks2 = basis_masks(6, 2);
    let alpha_coords = sp.two_form().dense_coords(&masks2);
    let combo = solve_in_row_space(&k, &rows, &alpha_coords)
        .expect("the symplectic form always solves the section system");
    let drop_row = (0..7)
        .rev()
        .find(|&i| !k.is_zero(&combo[i]))
        .expect("the symplectic form is nonzero");
    let basis: Vec<MultiVector<K>> = (0..7)
        .filter(|&r| r != drop_row)
        .map(|r| {
            MultiVector::from_terms(
                k.clone(),
                6,
                2,
                masks2
                    .iter()
                    .zip(rows.row(r))
                    .map(|(&m, c)| (m, c.clone())),
            )
        })
        .collect();
    Ok(SectionSpace {
        omega0,
        v,
        x_form,
        basis,
        rows_with_alpha: rows,
    })
}

/// Evaluates the six sections on a Lagrangian frame lying on the hyperplane
/// section and returns the corresponding point of G(2,6): the kernel of the
/// evaluation is 4-dimensional, and its degree-2 complement in the section
/// space is the Plücker point. Fails with [`ProjectionError::EvaluationRank`]
/// on the bad locus where the evaluation does not have rank 2 (this includes
/// every frame on which the direction form x vanishes, in particular the node
/// itself).
pub fn gr_point<K: Field>(
    section: &SectionSpace<K>,
    frame: &Matrix<K>,
) -> Result<MultiVector<K>, ProjectionError> {
    let k = frame.field().clone();
    assert_eq!((frame.nrows(), frame.ncols()), (3, 6));
    let row_vec = |r: usize| MultiVector::vector(k.clone(), frame.row(r));
    let x_vanishes = (0..3).all(|r| k.is_zero(&section.x_form.dual_pair(&row_vec(r))));
    if x_vanishes {
        return Err(ProjectionError::EvaluationRank { rank: 0 });
    }
    let pair_vectors = [
        row_vec(0).wedge(&row_vec(1)),
        row_vec(0).wedge(&row_vec(2)),
        row_vec(1).wedge(&row_vec(2)),
    ];
    let eval = Matrix::from_rows(
        k.clone(),
        pair_vectors
            .iter()
            .map(|w| section.basis.iter().map(|b| b.dual_pair(w)).collect())
            .collect(),
    );
    let rank = eval.rank();
    if rank != 2 {
        return Err(ProjectionError::EvaluationRank { rank });
    }
    let kernel = eval.kernel_basis();
    debug_assert_eq!(kernel.len(), 4);
    let mut w4 = MultiVector::vector(k.clone(), &kernel[0]);
    for kv in &kernel[1..] {
        w4 = w4.wedge(&MultiVector::vector(k.clone(), kv));
    }
    debug_assert!(!w4.is_zero());
    let w2 = complement_two_vector(&w4);
    debug_assert!(w2.wedge(&w2).is_zero());
    Ok(w2)
}

/// Index in 1..14 of the adapted-chart coordinate eliminated when writing the
/// hyperplane section as a P¹¹: the highest coordinate the form depends on.
pub fn dropped_coordinate<K: Field>(omega0: &DualForm<K>) -> usize {
    let k = omega0.field();
    (1..NUM_COORDS)
        .rev()
        .find(|&i| !k.is_zero(&omega0.coords()[i]))
        .expect("a hyperplane form is nonzero beyond the u*-coordinate")
}

/// Coordinates of a hyperplane point after projection from the node: drop the
/// node's u-coordinate and the coordinate linearly determined by the
/// hyperplane relation, leaving 12 homogeneous coordinates on P¹¹.
pub fn projected_coords<K: Field>(point: &SigmaPoint<K>, dropped: usize) -> Vec<K::Elem> {
    (1..NUM_COORDS)
        .filter(|&i| i != dropped)
        .map(|i| point.coords()[i].clone())
        .collect()
}

/// Rows kept in reduced echelon form while equations stream in, so the rank
/// of a large homogeneous system is tracked without re-eliminating from
/// scratch.
struct EchelonRows<K: Field> {
    field: K,
    // (pivot column, row with 1 at the pivot and 0 above/below in other rows)
    rows: Vec<(usize, Vec<K::Elem>)>,
}

impl<K: Field> EchelonRows<K> {
    fn new(field: K) -> Self {
        EchelonRows {
            field,
            rows: Vec::new(),
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn insert(&mut self, mut row: Vec<K::Elem>) -> bool {
        let k = self.field.clone();
        for (pivot, existing) in &self.rows {
            let c = row[*pivot].clone();
            if !k.is_zero(&c) {
                for (a, b) in row.iter_mut().zip(existing) {
                    *a = k.sub(a, &k.mul(&c, b));
                }
            }
        }
        let Some(pivot) = row.iter().position(|c| !k.is_zero(c)) else {
            return false;
        };
        let inv = k.inv(&row[pivot]).expect("pivot entry is nonzero");
        for a in row.iter_mut() {
            *a = k.mul(a, &inv);
        }
        k.normalize_row(&mut row);
        let scale = row[pivot].clone();
        for (_, existing) in self.rows.iter_mut() {
            let c = k.div(&existing[pivot], &scale).expect("pivot is nonzero");
            if !k.is_zero(&c) {
                for (a, b) in existing.iter_mut().zip(&row) {
                    *a = k.sub(a, &k.mul(&c, b));
                }
            }
        }
        let at = self
            .rows
            .iter()
            .position(|(p, _)| *p > pivot)
            .unwrap_or(self.rows.len());
        self.rows.insert(at, (pivot, row));
        true
    }

    fn into_matrix(self) -> Matrix<K> {
        Matrix::from_rows(self.field, self.rows.into_iter().map(|(_, r)| r).collect())
    }
}

/// A certified linear model of the Grassmannian map of a nodal hyperplane
/// section: a single matrix carries the coordinates of each sample point,
/// projected from the node, to its Plücker point in G(2,6).
#[derive(Clone, Debug)]
pub struct ProjectionFit<K: Field> {
    /// 15×12 matrix from projected P¹¹ coordinates to Plücker coordinates of
    /// G(2,6) in the dual section space; full rank 12.
    pub matrix: Matrix<K>,
    /// The adapted-chart coordinate eliminated by the hyperplane relation.
    pub dropped: usize,
    /// Samples whose Grassmannian point evaluated cleanly and entered the fit.
    pub accepted: usize,
    /// Samples discarded because section evaluation missed rank 2.
    pub discarded: usize,
    /// Held-out samples the fitted matrix was verified on, all exact matches.
    pub held_out: usize,
}

/// True when two coordinate vectors are nonzero and projectively equal.
pub fn coords_proportional<K: Field>(field: &K, a: &[K::Elem], b: &[K::Elem]) -> bool {
    assert_eq!(a.len(), b.len());
    let nz_a = a.iter().any(|c| !field.is_zero(c));
    let nz_b = b.iter().any(|c| !field.is_zero(c));
    if !nz_a || !nz_b {
        return false;
    }
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            let cross = field.sub(&field.mul(&a[i], &b[j]), &field.mul(&a[j], &b[i]));
            if !field.is_zero(&cross) {
                return false;
            }
        }
    }
    true
}

fn sample_pair<K: Field, R: Rng + ?Sized>(
    section: &SectionSpace<K>,
    dropped: usize,
    rng: &mut R,
    discarded: &mut usize,
    budget: &mut usize,
) -> Option<(Vec<K::Elem>, Vec<K::Elem>)> {
    let k = section.omega0.field().clone();
    let masks2 = basis_masks(6, 2);
    while *budget > 0 {
        *budget -= 1;
        let Some(point) = sample_h_omega_chart(&section.omega0, rng, 8) else {
            continue;
        };
        let x = point.x_matrix();
        let mut rows = Vec::with_capacity(3);
        for i in 0..3 {
            let mut row = vec![k.zero(); 6];
            row[i] = k.one();
            for j in 0..3 {
                row[3 + j] = x.get(i, j).clone();
            }
            rows.push(row);
        }
        let frame = Matrix::from_rows(k.clone(), rows);
        match gr_point(section, &frame) {
            Ok(w) => {
                let a = projected_coords(&point, dropped);
                let b = w.dense_coords(&masks2);
                return Some((a, b));
            }
            Err(ProjectionError::EvaluationRank { .. }) => {
                *discarded += 1;
            }
            Err(_) => unreachable!("gr_point only fails with EvaluationRank"),
        }
    }
    None
}

/// Fits the linear projection certifying the Grassmannian map: samples points
/// of the hyperplane section in the node's chart, pairs each point's
/// projected coordinates with its Plücker point, solves for the unique (up to
/// scale) 15×12 matrix matching all pairs projectively, and verifies it on
/// held-out samples. Any failure mode — a solution space that is not a single
/// line, a fitted matrix without full rank, or a held-out mismatch — is an
/// error, never silently absorbed.
pub fn fit_projection<K: Field, R: Rng + ?Sized>(
    section: &SectionSpace<K>,
    n_fit: usize,
    n_test: usize,
    rng: &mut R,
) -> Result<ProjectionFit<K>, ProjectionError> {
    let k = section.omega0.field().clone();
    let dropped = dropped_coordinate(&section.omega0);
    let mut discarded = 0usize;
    let mut budget = 20 * (n_fit + n_test).max(10);
    let mut echelon = EchelonRows::new(k.clone());
    let mut accepted = 0usize;
    while accepted < n_fit {
        let Some((a, b)) = sample_pair(section, dropped, rng, &mut discarded, &mut budget)
        else {
            return Err(ProjectionError::NotEnoughSamples { accepted });
        };
        accepted += 1;
        if echelon.rank() >= 179 {
            continue;
        }
        let pivot = b
            .iter()
            .position(|c| !k.is_zero(c))
            .expect("Plücker points are nonzero");
        for j in 0..15 {
            if j == pivot {
                continue;
            }
            // b_pivot·(M·a)_j − b_j·(M·a)_pivot = 0, linear in the entries of M.
            let mut row = vec![k.zero(); 180];
            for (idx, ac) in a.iter().enumerate() {
                row[j * 12 + idx] = k.mul(&b[pivot], ac);
                row[pivot * 12 + idx] = k.neg(&k.mul(&b[j], ac));
            }
            echelon.insert(row);
        }
    }
    let rank = echelon.rank();
    if rank < 179 {
        return Err(ProjectionError::FitUnderdetermined {
            solutions: 180 - rank,
        });
    }
    if rank == 180 {
        return Err(ProjectionError::FitContradiction);
    }
    let kernel = echelon.into_matrix().kernel_basis();
    debug_assert_eq!(kernel.len(), 1);
    let sol = &kernel[0];
    let matrix = Matrix::from_rows(
        k.clone(),
        (0..15)
            .map(|j| sol[j * 12..(j + 1) * 12].to_vec())
            .collect(),
    );
    let mrank = matrix.rank();
    if mrank != 12 {
        return Err(ProjectionError::FitRank { rank: mrank });
    }
    for index in 0..n_test {
        let Some((a, b)) = sample_pair(section, dropped, rng, &mut discarded, &mut budget)
        else {
            return Err(ProjectionError::NotEnoughSamples {
                accepted: accepted + index,
            });
        };
        let image = apply_to_coords(&matrix, &a);
        if !coords_proportional(&k, &image, &b) {
            return Err(ProjectionError::HeldOutMismatch { index });
        }
    }
    Ok(ProjectionFit {
        matrix,
        dropped,
        accepted,
        discarded,
        held_out: n_test,
    })
}

/// Matrix–vector product on plain coordinate vectors.
pub fn apply_to_coords<K: Field>(m: &Matrix<K>, v: &[K::Elem]) -> Vec<K::Elem> {
    let k = m.field().clone();
    assert_eq!(m.ncols(), v.len());
    (0..m.nrows())
        .map(|r| {
            let mut acc = k.zero();
            for (c, vc) in v.iter().enumerate() {
                acc = k.add(&acc, &k.mul(m.get(r, c), vc));
            }
            acc
        })
        .collect()
}

/// The plane of 2-forms on the dual section space annihilating the image of
/// the fitted projection: the 3-dimensional kernel of the transposed fit
/// matrix, returned as degree-2 multivectors ready for the Pfaffian-plane
/// certification.
pub fn plane_from_fit<K: Field>(
    fit: &ProjectionFit<K>,
) -> Result<Vec<MultiVector<K>>, ProjectionError> {
    let k = fit.matrix.field().clone();
    let kernel = fit.matrix.transpose().kernel_basis();
    if kernel.len() != 3 {
        return Err(ProjectionError::PlaneDimension { dim: kernel.len() });
    }
    let masks2 = basis_masks(6, 2);
    Ok(kernel
        .into_iter()
        .map(|kv| {
            MultiVector::from_terms(k.clone(), 6, 2, masks2.iter().zip(kv).map(|(&m, c)| (m, c)))
        })
        .collect())
}

/// All quadrics vanishing on a set of points: the kernel of the evaluation
/// matrix of the d(d+1)/2 degree-2 monomials x_a·x_b (a ≤ b, lexicographic)
/// at the points, for d the common coordinate length. Supplying more samples
/// than monomials makes the kernel a certificate for the space of quadrics
/// through the sampled variety.
pub fn fit_quadrics<K: Field>(field: &K, points: &[Vec<K::Elem>]) -> Vec<Vec<K::Elem>> {
    assert!(!points.is_empty());
    let d = points[0].len();
    let monomials = quadric_monomials(d);
    let rows: Vec<Vec<K::Elem>> = points
        .iter()
        .map(|p| {
            assert_eq!(p.len(), d);
            monomials
                .iter()
                .map(|&(a, b)| field.mul(&p[a], &p[b]))
                .collect()
        })
        .collect();
    solve_homogeneous(field.clone(), &rows, monomials.len())
}

/// Index pairs (a, b) with a ≤ b in lexicographic order: the monomial basis
/// x_a·x_b of degree-2 forms on a d-dimensional coordinate space.
pub fn quadric_monomials(d: usize) -> Vec<(usize, usize)> {
    let mut m = Vec::with_capacity(d * (d + 1) / 2);
    for a in 0..d {
        for b in a..d {
            m.push((a, b));
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rationals};
    use crate::gr26::{quadric_in_z, PfaffianPlane};
    use crate::sigma::{
        chart_point, lagrangian_frame_of, nodal_dual_form, random_sigma_point, DualForm,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp() -> Fp {
        Fp::new(1009).unwrap()
    }

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn random_witness(k: Fp, rng: &mut ChaCha8Rng) -> NodalWitness<Fp> {
        let sp = SymplecticForm::standard(k);
        let pivot = random_sigma_point(&sp, rng);
        nodal_dual_form(&sp, &pivot, rng)
    }

    /// A witness sitting at the chart origin with a prescribed Y*-block, for
    /// deterministic cross-field tests.
    fn origin_witness<K: Field>(k: K, ystar: &Matrix<K>, zstar: i64) -> NodalWitness<K> {
        let sp = SymplecticForm::standard(k.clone());
        let pivot = chart_point(&k, &Matrix::zero(k.clone(), 3, 3));
        let frame = lagrangian_frame_of(&sp, &pivot);
        let t = sp.complete_to_symplectic(&frame.transpose());
        let omega = DualForm::from_blocks(
            k.clone(),
            k.zero(),
            &Matrix::zero(k.clone(), 3, 3),
            ystar,
            k.from_i64(zstar),
        );
        let push = t.transpose().inverse().unwrap();
        let omega = DualForm::from_three_form(&omega.to_three_form().apply_linear(&push));
        let conic = crate::sigma::q_omega(&sp, &omega, &frame);
        NodalWitness {
            omega,
            pivot,
            frame,
            conic,
            transporter: t,
        }
    }

    #[test]
    fn conic_points_satisfy_the_quadric_over_fp() {
        let k = fp();
        let mut r = rng(11);
        for _ in 0..20 {
            let mut g = Matrix::zero(k, 3, 3);
            loop {
                for i in 0..3 {
                    for j in i..3 {
                        let v = k.sample(&mut r);
                        g.set(i, j, v.clone());
                        g.set(j, i, v);
                    }
                }
                if !k.is_zero(&g.det()) {
                    break;
                }
            }
            let v = conic_point(&k, &g, &mut r, 64).expect("smooth conics over F_p have points");
            assert!(v.iter().any(|c| !k.is_zero(c)));
            let mut q = k.zero();
            for i in 0..3 {
                for j in 0..3 {
                    q = k.add(&q, &k.mul(g.get(i, j), &k.mul(&v[i], &v[j])));
                }
            }
            assert!(k.is_zero(&q));
        }
    }

    #[test]
    fn conic_points_over_the_rationals_when_they_exist() {
        let q = Rationals;
        let mut r = rng(5);
        // v₂² + 2v₁v₃: isotropic over Q.
        let g = Matrix::from_i64(q, &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]);
        let v = conic_point(&q, &g, &mut r, 64).expect("split conic has rational points");
        let qv = {
            let mut acc = q.zero();
            for i in 0..3 {
                for j in 0..3 {
                    acc = q.add(&acc, &q.mul(g.get(i, j), &q.mul(&v[i], &v[j])));
                }
            }
            acc
        };
        assert!(q.is_zero(&qv));
        // v₁² + v₂² + v₃² has no rational point.
        let g = Matrix::from_i64(q, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(conic_point(&q, &g, &mut r, 64).is_none());
    }

    #[test]
    fn section_space_is_six_dimensional_through_isotropic_directions() {
        let k = fp();
        let sp = SymplecticForm::standard(k);
        let mut r = rng(23);
        let masks3 = basis_masks(6, 3);
        for trial in 0..5 {
            let w = random_witness(k, &mut r);
            let s = section_space(&sp, &w, &mut r).expect("section space builds");
            assert_eq!(s.basis().len(), 6, "trial {trial}");
            assert_eq!(s.rows_with_alpha().nrows(), 7);
            // Defining property: β∧x lies in span(α∧x₄, α∧x₅, α∧x₆, ω₀).
            let alpha = sp.two_form();
            let mut span_rows: Vec<Vec<u64>> = (3..6)
                .map(|i| {
                    alpha
                        .wedge(&MultiVector::basis(k, 6, &[i]))
                        .dense_coords(&masks3)
                })
                .collect();
            span_rows.push(s.standard_form().to_three_form().dense_coords(&masks3));
            let base_rank = Matrix::from_rows(k, span_rows.clone()).rank();
            assert_eq!(base_rank, 4);
            for b in s.basis() {
                let mut rows = span_rows.clone();
                rows.push(b.wedge(s.x_form()).dense_coords(&masks3));
                assert_eq!(Matrix::from_rows(k, rows).rank(), 4, "trial {trial}");
            }
            // α is independent of the six basis forms but inside the full rows.
            let masks2 = basis_masks(6, 2);
            let mut rows: Vec<Vec<u64>> =
                s.basis().iter().map(|b| b.dense_coords(&masks2)).collect();
            rows.push(alpha.dense_coords(&masks2));
            assert_eq!(Matrix::from_rows(k, rows).rank(), 7);
        }
    }

    #[test]
    fn section_system_drops_to_dimension_five_off_the_conic() {
        // Deterministic witness at the chart origin: Y* with q(v) = v₂² + 2v₁v₃.
        let q = Rationals;
        let sp = SymplecticForm::standard(q);
        let ystar = Matrix::from_i64(q, &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]);
        let w = origin_witness(q, &ystar, 1);
        let omega0 = standard_form(&w);
        // Isotropic direction (1,0,0): full rank 7 (6 sections + α).
        let mk_x = |v: [i64; 6]| {
            let coords: Vec<_> = v.iter().map(|&c| q.from_i64(c)).collect();
            sp.correlation(&MultiVector::vector(q, &coords))
        };
        let iso = section_solutions(&sp, &omega0, &mk_x([1, 0, 0, 0, 0, 0]));
        assert_eq!(iso.nrows(), 7);
        // Non-isotropic direction (0,1,0): q = 1 ≠ 0, rank drops to 6.
        let off = section_solutions(&sp, &omega0, &mk_x([0, 1, 0, 0, 0, 0]));
        assert_eq!(off.nrows(), 6);
        // Same drop over F_p on a random witness.
        let k = fp();
        let spf = SymplecticForm::standard(k);
        let mut r = rng(31);
        let wf = random_witness(k, &mut r);
        let omega0f = standard_form(&wf);
        let gram = omega0f.ystar_matrix();
        let quad = |v: &[u64; 3]| {
            let mut acc = k.zero();
            for i in 0..3 {
                for j in 0..3 {
                    acc = k.add(&acc, &k.mul(gram.get(i, j), &k.mul(&v[i], &v[j])));
                }
            }
            acc
        };
        let v = loop {
            let cand = [k.sample(&mut r), k.sample(&mut r), k.sample(&mut r)];
            if !k.is_zero(&quad(&cand)) {
                break cand;
            }
        };
        let mut v6: Vec<u64> = v.to_vec();
        v6.extend([0, 0, 0]);
        let x = spf.correlation(&MultiVector::vector(k, &v6));
        assert_eq!(section_solutions(&spf, &omega0f, &x).nrows(), 6);
    }

    #[test]
    fn section_system_rejects_the_zero_direction() {
        let q = Rationals;
        let sp = SymplecticForm::standard(q);
        let ystar = Matrix::from_i64(q, &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]);
        let w = origin_witness(q, &ystar, 1);
        let omega0 = standard_form(&w);
        let zero = MultiVector::zero(q, 6, 1);
        let res = std::panic::catch_unwind(|| section_solutions(&sp, &omega0, &zero));
        assert!(res.is_err());
    }

    #[test]
    fn grassmannian_points_are_decomposable_and_frame_independent() {
        let k = fp();
        let sp = SymplecticForm::standard(k);
        let mut r = rng(41);
        let w = random_witness(k, &mut r);
        let s = section_space(&sp, &w, &mut r).expect("section space builds");
        let masks2 = basis_masks(6, 2);
        let mut ok = 0usize;
        let mut total = 0usize;
        for _ in 0..100 {
            let Some(point) = sample_h_omega_chart(s.standard_form(), &mut r, 8) else {
                continue;
            };
            total += 1;
            let x = point.x_matrix();
            let mut rows = Vec::new();
            for i in 0..3 {
                let mut row = vec![k.zero(); 6];
                row[i] = k.one();
                for j in 0..3 {
                    row[3 + j] = x.get(i, j).clone();
                }
                rows.push(row);
            }
            let frame = Matrix::from_rows(k, rows);
            let Ok(w2) = gr_point(&s, &frame) else {
                continue;
            };
            ok += 1;
            assert!(w2.wedge(&w2).is_zero());
            assert!(!w2.is_zero());
            // Re-evaluate on a mixed frame of the same plane.
            let g = loop {
                let mut m = Matrix::zero(k, 3, 3);
                for i in 0..3 {
                    for j in 0..3 {
                        m.set(i, j, k.sample(&mut r));
                    }
                }
                if !k.is_zero(&m.det()) {
                    break m;
                }
            };
            let mixed = g.mul(&frame);
            let w2m = gr_point(&s, &mixed).expect("same plane, same evaluation rank");
            assert!(coords_proportional(
                &k,
                &w2.dense_coords(&masks2),
                &w2m.dense_coords(&masks2)
            ));
        }
        assert!(total >= 80, "sampling starved: {total}");
        assert!(
            ok * 100 >= total * 95,
            "acceptance rate below 95%: {ok}/{total}"
        );
    }

    #[test]
    fn grassmannian_map_does_not_depend_on_the_conic_direction() {
        let k = fp();
        let sp = SymplecticForm::standard(k);
        let mut r = rng(59);
        let w = random_witness(k, &mut r);
        let s1 = section_space(&sp, &w, &mut r).expect("first section space");
        let s2 = loop {
            let cand = section_space(&sp, &w, &mut r).expect("second section space");
            if !coords_proportional(&k, cand.direction(), s1.direction()) {
                break cand;
            }
        };
        // The two section spaces present the same bundle through different
        // kernels, so they need not agree as subspaces — but each fit must be
        // linear in the same projected coordinates, making the two
        // Grassmannian maps differ only by the frame change matching the fits.
        let fit1 = fit_projection(&s1, 160, 20, &mut r).expect("first fit");
        let fit2 = fit_projection(&s2, 160, 20, &mut r).expect("second fit");
        assert_eq!(fit1.dropped, fit2.dropped);
        // Frame change carrying the first presentation to the second: invert
        // the first fit on 12 independent rows and compose with the second.
        let mut pivot_rows = Vec::new();
        {
            let mut ech = EchelonRows::new(k);
            for row in 0..15 {
                if ech.insert(fit1.matrix.row(row).to_vec()) {
                    pivot_rows.push(row);
                }
            }
        }
        assert_eq!(pivot_rows.len(), 12);
        let sub = Matrix::from_rows(
            k,
            pivot_rows
                .iter()
                .map(|&row| fit1.matrix.row(row).to_vec())
                .collect(),
        );
        let sub_inv = sub.inverse().expect("pivot rows are independent");
        let change = fit2.matrix.mul(&sub_inv);
        let masks2 = basis_masks(6, 2);
        // On 50 common fresh samples both maps evaluate cleanly and the frame
        // change carries one Plücker point to the other.
        let mut checked = 0usize;
        while checked < 50 {
            let Some(point) = sample_h_omega_chart(s1.standard_form(), &mut r, 8) else {
                continue;
            };
            let x = point.x_matrix();
            let mut rows = Vec::new();
            for i in 0..3 {
                let mut row = vec![k.zero(); 6];
                row[i] = k.one();
                for j in 0..3 {
                    row[3 + j] = x.get(i, j).clone();
                }
                rows.push(row);
            }
            let frame = Matrix::from_rows(k, rows);
            let (Ok(w1), Ok(w2)) = (gr_point(&s1, &frame), gr_point(&s2, &frame)) else {
                continue;
            };
            checked += 1;
            let a = projected_coords(&point, fit1.dropped);
            let img1 = apply_to_coords(&fit1.matrix, &a);
            let img2 = apply_to_coords(&fit2.matrix, &a);
            assert!(coords_proportional(&k, &img1, &w1.dense_coords(&masks2)));
            assert!(coords_proportional(&k, &img2, &w2.dense_coords(&masks2)));
            let restricted: Vec<u64> = pivot_rows.iter().map(|&row| img1[row]).collect();
            let moved = apply_to_coords(&change, &restricted);
            assert!(coords_proportional(&k, &moved, &img2));
        }
    }

    #[test]
    fn fitted_projection_is_linear_and_certified_on_held_out_points() {
        let k = fp();
        let sp = SymplecticForm::standard(k);
        let mut r = rng(67);
        let w = random_witness(k, &mut r);
        let s = section_space(&sp, &w, &mut r).expect("section space builds");
        let fit = fit_projection(&s, 160, 40, &mut r).expect("projection fits");
        assert_eq!(fit.matrix.rank(), 12);
        assert_eq!(fit.held_out, 40);
        assert!(fit.accepted >= 160);
        let masks2 = basis_masks(6, 2);
        // Fresh samples: the fitted matrix reproduces the Grassmannian point
        // and its image is always decomposable.
        let mut fresh = 0usize;
        let mut projected_samples: Vec<Vec<u64>> = Vec::new();
        while fresh < 10 {
            let Some(point) = sample_h_omega_chart(s.standard_form(), &mut r, 8) else {
                continue;
            };
            let x = point.x_matrix();
            let mut rows = Vec::new();
            for i in 0..3 {
                let mut row = vec![k.zero(); 6];
                row[i] = k.one();
                for j in 0..3 {
                    row[3 + j] = x.get(i, j).clone();
                }
                rows.push(row);
            }
            let frame = Matrix::from_rows(k, rows);
            let Ok(w2) = gr_point(&s, &frame) else {
                continue;
            };
            fresh += 1;
            let a = projected_coords(&point, fit.dropped);
            let image = apply_to_coords(&fit.matrix, &a);
            assert!(coords_proportional(&k, &image, &w2.dense_coords(&masks2)));
            let im_vec = MultiVector::from_terms(
                k,
                6,
                2,
                masks2.iter().zip(image.iter()).map(|(&m, c)| (m, *c)),
            );
            assert!(im_vec.wedge(&im_vec).is_zero());
            projected_samples.push(a);
        }
        // The annihilator plane of the image is a valid Pfaffian plane whose
        // quadric surface spans a 4-dimensional subspace.
        let plane = plane_from_fit(&fit).expect("kernel of the transpose is a plane");
        let pf = PfaffianPlane::new(k, plane).expect("image plane is Pfaffian with no rank-2 member");
        let wspan = quadric_in_z(&pf).expect("quadric surface spans a 4-space");
        assert_eq!((wspan.nrows(), wspan.ncols()), (4, 6));
        // Quadrics through the projected samples: collect enough points to pin
        // the space down to dimension 15 (pulled back from G(2,6)).
        let mut budget = 4000usize;
        let mut discarded = 0usize;
        while projected_samples.len() < 160 {
            let Some((a, _)) = sample_pair(&s, fit.dropped, &mut r, &mut discarded, &mut budget)
            else {
                break;
            };
            projected_samples.push(a);
        }
        assert!(projected_samples.len() >= 160);
        let quads = fit_quadrics(&k, &projected_samples);
        assert_eq!(quads.len(), 15);
    }

    #[test]
    fn fit_reports_underdetermination_on_tiny_sample_sets() {
        let k = fp();
        let sp = SymplecticForm::standard(k);
        let mut r = rng(73);
        let w = random_witness(k, &mut r);
        let s = section_space(&sp, &w, &mut r).expect("section space builds");
        match fit_projection(&s, 3, 0, &mut r) {
            Err(ProjectionError::FitUnderdetermined { solutions }) => {
                assert!(solutions > 1);
            }
            other => panic!("expected underdetermined fit, got {other:?}"),
        }
    }

    #[test]
    fn quadric_fit_recovers_the_chart_quadrics_and_plucker_quadrics() {
        let k = fp();
        let mut r = rng(83);
        // Chart samples of Σ in P¹³: 14 coordinates, 105 monomials, 21 quadrics.
        let mut pts = Vec::new();
        for _ in 0..300 {
            let mut x = Matrix::zero(k, 3, 3);
            for i in 0..3 {
                for j in i..3 {
                    let v = k.sample(&mut r);
                    x.set(i, j, v.clone());
                    x.set(j, i, v);
                }
            }
            pts.push(chart_point(&k, &x).coords().to_vec());
        }
        assert_eq!(quadric_monomials(14).len(), 105);
        assert_eq!(fit_quadrics(&k, &pts).len(), 21);
        // Decomposable 2-vectors in P¹⁴: 15 coordinates, the 15 Plücker
        // quadrics of G(2,6) and nothing else.
        let masks2 = basis_masks(6, 2);
        let mut pts = Vec::new();
        for _ in 0..300 {
            let a: Vec<u64> = (0..6).map(|_| k.sample(&mut r)).collect();
            let b: Vec<u64> = (0..6).map(|_| k.sample(&mut r)).collect();
            let w = MultiVector::vector(k, &a).wedge(&MultiVector::vector(k, &b));
            if w.is_zero() {
                continue;
            }
            pts.push(w.dense_coords(&masks2));
        }
        assert_eq!(fit_quadrics(&k, &pts).len(), 15);
    }
}
