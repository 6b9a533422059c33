//! The Lagrangian Grassmannian Σ = LG(3,6) in P¹³ = P(V(14)).
//!
//! The 14 homogeneous coordinates are ordered
//! (u, x₁₁,x₁₂,x₁₃,x₂₂,x₂₃,x₃₃, y₁₁,y₁₂,y₁₃,y₂₂,y₂₃,y₃₃, z):
//! on the chart of Lagrangian spaces transverse to ⟨e₄,e₅,e₆⟩ the point of a
//! symmetric matrix X is [1, X, adj X, det X]. This module provides the
//! dictionary between those coordinates and honest 3-vectors in
//! V(14) ⊂ ∧³K⁶, the 21 defining quadrics in their reference order, the
//! quartic invariant f cutting out the tangent variety, the four-orbit
//! classification, tangent spaces and cones, the conic form q_ω(U) of a
//! hyperplane on a Lagrangian plane, and construction of hyperplanes with a
//! prescribed quadratic singularity (nodal witnesses).

use crate::exterior::{basis_masks, MultiVector, SymplecticForm};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::poly::IntPoly;
use rand::Rng;

pub const NUM_COORDS: usize = 14;

pub const COORD_NAMES: [&str; NUM_COORDS] = [
    "u", "x11", "x12", "x13", "x22", "x23", "x33", "y11", "y12", "y13", "y22", "y23", "y33", "z",
];

pub const U_IDX: usize = 0;
pub const Z_IDX: usize = 13;

/// Position of (i,j), i ≤ j, inside the 6 symmetric-matrix slots
/// (11,12,13,22,23,33).
fn sym_slot(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    match (i, j) {
        (0, 0) => 0,
        (0, 1) => 1,
        (0, 2) => 2,
        (1, 1) => 3,
        (1, 2) => 4,
        (2, 2) => 5,
        _ => panic!("symmetric index out of range"),
    }
}

pub fn x_idx(i: usize, j: usize) -> usize {
    1 + sym_slot(i, j)
}

pub fn y_idx(i: usize, j: usize) -> usize {
    7 + sym_slot(i, j)
}

/// The pairing weight of each coordinate: 1 on u, z and the diagonal slots,
/// 2 on off-diagonal slots (symmetric-matrix trace pairing).
pub const PAIRING_WEIGHTS: [i64; NUM_COORDS] = [1, 1, 2, 2, 1, 2, 1, 1, 2, 2, 1, 2, 1, 1];

/// Basis of V(14) indexed by coordinate: each entry is the expansion of the
/// coordinate's basis 3-vector as (0-based index triple, sign) terms. The
/// first term doubles as the coordinate-reading functional: the c-th
/// coordinate of w ∈ V(14) is sign·(coefficient of that triple in w).
const COORD_BASIS: [&[([usize; 3], i64)]; NUM_COORDS] = [
    &[([0, 1, 2], 1)],                      // u    = e₁₂₃
    &[([1, 2, 3], 1)],                      // x₁₁  = e₂₃₄
    &[([0, 2, 3], -1), ([1, 2, 4], 1)],     // x₁₂  = −e₁₃₄ + e₂₃₅
    &[([0, 1, 3], 1), ([1, 2, 5], 1)],      // x₁₃  = e₁₂₄ + e₂₃₆
    &[([0, 2, 4], -1)],                     // x₂₂  = −e₁₃₅
    &[([0, 1, 4], 1), ([0, 2, 5], -1)],     // x₂₃  = e₁₂₅ − e₁₃₆
    &[([0, 1, 5], 1)],                      // x₃₃  = e₁₂₆
    &[([0, 4, 5], 1)],                      // y₁₁  = e₁₅₆
    &[([0, 3, 5], -1), ([1, 4, 5], 1)],     // y₁₂  = −e₁₄₆ + e₂₅₆
    &[([0, 3, 4], 1), ([2, 4, 5], 1)],      // y₁₃  = e₁₄₅ + e₃₅₆
    &[([1, 3, 5], -1)],                     // y₂₂  = −e₂₄₆
    &[([1, 3, 4], 1), ([2, 3, 5], -1)],     // y₂₃  = e₂₄₅ − e₃₄₆
    &[([2, 3, 4], 1)],                      // y₃₃  = e₃₄₅
    &[([3, 4, 5], 1)],                      // z    = e₄₅₆
];

/// 3-vector (or 3-form, on the dual side) from 14 coordinates.
pub fn coords_to_three_vector<K: Field>(field: &K, coords: &[K::Elem]) -> MultiVector<K> {
    assert_eq!(coords.len(), NUM_COORDS);
    let mut terms = Vec::new();
    for (c, expansion) in COORD_BASIS.iter().enumerate() {
        for (triple, sign) in expansion.iter() {
            let mask = triple.iter().fold(0u32, |m, &i| m | 1 << i);
            let v = field.mul(&coords[c], &field.from_i64(*sign));
            terms.push((mask, v));
        }
    }
    MultiVector::from_terms(field.clone(), 6, 3, terms)
}

/// 14 coordinates of a 3-vector. Faithful exactly on V(14) (checked in debug
/// builds by reconstructing the input).
pub fn read_coords<K: Field>(w: &MultiVector<K>) -> Vec<K::Elem> {
    assert_eq!((w.ambient_dim(), w.degree()), (6, 3));
    let field = w.field().clone();
    let coords: Vec<K::Elem> = COORD_BASIS
        .iter()
        .map(|expansion| {
            let (triple, sign) = expansion[0];
            let mask = triple.iter().fold(0u32, |m, &i| m | 1 << i);
            field.mul(&w.coeff_mask(mask), &field.from_i64(sign))
        })
        .collect();
    debug_assert!(
        coords_to_three_vector(&field, &coords) == *w,
        "3-vector does not lie in V(14)"
    );
    coords
}

fn assert_some_nonzero<K: Field>(field: &K, coords: &[K::Elem]) {
    assert!(
        coords.iter().any(|c| !field.is_zero(c)),
        "all 14 coordinates are zero"
    );
}

/// A point of P¹³ in the 14 fixed coordinates (u, X, Y, z).
#[derive(Clone, PartialEq)]
pub struct SigmaPoint<K: Field> {
    field: K,
    coords: Vec<K::Elem>,
}

impl<K: Field> std::fmt::Debug for SigmaPoint<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}]", fmt_coords(&self.field, &self.coords))
    }
}

fn fmt_coords<K: Field>(field: &K, coords: &[K::Elem]) -> String {
    coords
        .iter()
        .map(|c| field.fmt_elem(c))
        .collect::<Vec<_>>()
        .join(", ")
}

impl<K: Field> SigmaPoint<K> {
    pub fn new(field: K, coords: Vec<K::Elem>) -> Self {
        assert_eq!(coords.len(), NUM_COORDS, "need 14 coordinates");
        assert_some_nonzero(&field, &coords);
        SigmaPoint { field, coords }
    }

    pub fn from_i64(field: K, coords: &[i64; NUM_COORDS]) -> Self {
        Self::new(field.clone(), coords.iter().map(|&n| field.from_i64(n)).collect())
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn coords(&self) -> &[K::Elem] {
        &self.coords
    }

    pub fn u(&self) -> &K::Elem {
        &self.coords[U_IDX]
    }

    pub fn z(&self) -> &K::Elem {
        &self.coords[Z_IDX]
    }

    pub fn x(&self, i: usize, j: usize) -> &K::Elem {
        &self.coords[x_idx(i, j)]
    }

    pub fn y(&self, i: usize, j: usize) -> &K::Elem {
        &self.coords[y_idx(i, j)]
    }

    pub fn x_matrix(&self) -> Matrix<K> {
        Matrix::from_fn(self.field.clone(), 3, 3, |i, j| self.x(i, j).clone())
    }

    pub fn y_matrix(&self) -> Matrix<K> {
        Matrix::from_fn(self.field.clone(), 3, 3, |i, j| self.y(i, j).clone())
    }

    pub fn to_three_vector(&self) -> MultiVector<K> {
        coords_to_three_vector(&self.field, &self.coords)
    }

    pub fn from_three_vector(w: &MultiVector<K>) -> Self {
        let field = w.field().clone();
        let coords = read_coords(w);
        Self::new(field, coords)
    }

    pub fn scale(&self, s: &K::Elem) -> Self {
        let coords = self.coords.iter().map(|c| self.field.mul(c, s)).collect();
        Self::new(self.field.clone(), coords)
    }

    /// Projective equality: proportional coordinate vectors.
    pub fn same_projective_point(&self, other: &Self) -> bool {
        let rows = vec![self.coords.clone(), other.coords.clone()];
        Matrix::from_rows(self.field.clone(), rows).rank() == 1
    }
}

/// A hyperplane/linear form on P(V(14)), in the same 14 coordinates
/// (u*, X*, Y*, z*).
#[derive(Clone, PartialEq)]
pub struct DualForm<K: Field> {
    field: K,
    coords: Vec<K::Elem>,
}

impl<K: Field> std::fmt::Debug for DualForm<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "⟨{}⟩", fmt_coords(&self.field, &self.coords))
    }
}

impl<K: Field> DualForm<K> {
    pub fn new(field: K, coords: Vec<K::Elem>) -> Self {
        assert_eq!(coords.len(), NUM_COORDS, "need 14 coordinates");
        assert_some_nonzero(&field, &coords);
        DualForm { field, coords }
    }

    pub fn from_i64(field: K, coords: &[i64; NUM_COORDS]) -> Self {
        Self::new(field.clone(), coords.iter().map(|&n| field.from_i64(n)).collect())
    }

    /// Form with prescribed symmetric blocks: u*·u + tr(X*·X) + tr(Y*·Y) + z*·z.
    pub fn from_blocks(
        field: K,
        ustar: K::Elem,
        xstar: &Matrix<K>,
        ystar: &Matrix<K>,
        zstar: K::Elem,
    ) -> Self {
        let mut coords = vec![field.zero(); NUM_COORDS];
        coords[U_IDX] = ustar;
        coords[Z_IDX] = zstar;
        for i in 0..3 {
            for j in i..3 {
                coords[x_idx(i, j)] = xstar.get(i, j).clone();
                coords[y_idx(i, j)] = ystar.get(i, j).clone();
                assert_eq!(xstar.get(i, j), xstar.get(j, i), "X* must be symmetric");
                assert_eq!(ystar.get(i, j), ystar.get(j, i), "Y* must be symmetric");
            }
        }
        Self::new(field, coords)
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn coords(&self) -> &[K::Elem] {
        &self.coords
    }

    pub fn ustar(&self) -> &K::Elem {
        &self.coords[U_IDX]
    }

    pub fn zstar(&self) -> &K::Elem {
        &self.coords[Z_IDX]
    }

    pub fn xstar_matrix(&self) -> Matrix<K> {
        Matrix::from_fn(self.field.clone(), 3, 3, |i, j| {
            self.coords[x_idx(i, j)].clone()
        })
    }

    pub fn ystar_matrix(&self) -> Matrix<K> {
        Matrix::from_fn(self.field.clone(), 3, 3, |i, j| {
            self.coords[y_idx(i, j)].clone()
        })
    }

    /// Evaluation on a point: u*u + tr(X*X) + tr(Y*Y) + z*z, i.e. the
    /// coordinate pairing with weight 2 on off-diagonal slots.
    pub fn pair(&self, point: &SigmaPoint<K>) -> K::Elem {
        self.pair_coords(point.coords())
    }

    pub fn pair_coords(&self, coords: &[K::Elem]) -> K::Elem {
        assert_eq!(coords.len(), NUM_COORDS);
        let k = &self.field;
        let mut acc = k.zero();
        for c in 0..NUM_COORDS {
            let w = k.from_i64(PAIRING_WEIGHTS[c]);
            acc = k.add(&acc, &k.mul(&k.mul(&self.coords[c], &w), &coords[c]));
        }
        acc
    }

    /// The form as an honest 3-form (element of ∧³ of the dual space), using
    /// the mirrored basis table.
    pub fn to_three_form(&self) -> MultiVector<K> {
        coords_to_three_vector(&self.field, &self.coords)
    }

    pub fn from_three_form(w: &MultiVector<K>) -> Self {
        let field = w.field().clone();
        let coords = read_coords(w);
        Self::new(field, coords)
    }

    pub fn same_projective_form(&self, other: &Self) -> bool {
        let rows = vec![self.coords.clone(), other.coords.clone()];
        Matrix::from_rows(self.field.clone(), rows).rank() == 1
    }
}

/// Adjugate of a 3×3 matrix: adj(M)·M = det(M)·I.
pub fn adjugate3<K: Field>(m: &Matrix<K>) -> Matrix<K> {
    assert_eq!((m.nrows(), m.ncols()), (3, 3));
    let k = m.field().clone();
    Matrix::from_fn(k.clone(), 3, 3, |i, j| {
        // adj(M)_ij = cofactor_ji = (−1)^{i+j}·minor of M deleting row j, col i.
        let rows: Vec<usize> = (0..3).filter(|&r| r != j).collect();
        let cols: Vec<usize> = (0..3).filter(|&c| c != i).collect();
        let minor = k.sub(
            &k.mul(m.get(rows[0], cols[0]), m.get(rows[1], cols[1])),
            &k.mul(m.get(rows[0], cols[1]), m.get(rows[1], cols[0])),
        );
        if (i + j) % 2 == 0 {
            minor
        } else {
            k.neg(&minor)
        }
    })
}

/// Chart parametrization: symmetric X ↦ [1, X, adj X, det X].
pub fn chart_point<K: Field>(field: &K, x: &Matrix<K>) -> SigmaPoint<K> {
    assert_eq!((x.nrows(), x.ncols()), (3, 3));
    assert!(x.sub(&x.transpose()).is_zero(), "chart matrix must be symmetric");
    let adj = adjugate3(x);
    let mut coords = vec![field.zero(); NUM_COORDS];
    coords[U_IDX] = field.one();
    coords[Z_IDX] = x.det();
    for i in 0..3 {
        for j in i..3 {
            coords[x_idx(i, j)] = x.get(i, j).clone();
            coords[y_idx(i, j)] = adj.get(i, j).clone();
        }
    }
    SigmaPoint::new(field.clone(), coords)
}

/// Plücker point of a Lagrangian frame (rows of a 3×6 matrix).
pub fn plucker_lagrangian<K: Field>(
    sp: &SymplecticForm<K>,
    frame: &Matrix<K>,
) -> SigmaPoint<K> {
    assert_eq!((frame.nrows(), frame.ncols()), (3, 6), "frame must be 3×6");
    assert!(
        sp.is_lagrangian_frame(&frame.transpose()),
        "rows must be independent and pairwise α-orthogonal"
    );
    let k = frame.field();
    let rows: Vec<MultiVector<K>> = (0..3)
        .map(|r| MultiVector::vector(k.clone(), frame.row(r)))
        .collect();
    let w = rows[0].wedge(&rows[1]).wedge(&rows[2]);
    SigmaPoint::from_three_vector(&w)
}

/// Recover a Lagrangian frame (3×6, rows) from a point of Σ: the rows span
/// {v : v ∧ w = 0} for the point's 3-vector w. Panics when the point is not
/// on Σ (w not decomposable).
pub fn lagrangian_frame_of<K: Field>(
    sp: &SymplecticForm<K>,
    point: &SigmaPoint<K>,
) -> Matrix<K> {
    let k = point.field().clone();
    let w = point.to_three_vector();
    let masks4 = basis_masks(6, 4);
    let m = Matrix::from_fn(k.clone(), masks4.len(), 6, |r, c| {
        let e = MultiVector::basis(k.clone(), 6, &[c]);
        e.wedge(&w).coeff_mask(masks4[r])
    });
    let kernel = m.kernel_basis();
    assert_eq!(
        kernel.len(),
        3,
        "point is not on Σ: its 3-vector is not decomposable"
    );
    let frame = Matrix::from_rows(k, kernel);
    debug_assert!(sp.is_lagrangian_frame(&frame.transpose()));
    frame
}

fn x_poly(i: usize, j: usize) -> IntPoly {
    IntPoly::var(NUM_COORDS, x_idx(i, j))
}

fn y_poly(i: usize, j: usize) -> IntPoly {
    IntPoly::var(NUM_COORDS, y_idx(i, j))
}

fn u_poly() -> IntPoly {
    IntPoly::var(NUM_COORDS, U_IDX)
}

fn z_poly() -> IntPoly {
    IntPoly::var(NUM_COORDS, Z_IDX)
}

/// Adjugate entry adj(X)_{ij} as a polynomial, for the symbolic symmetric
/// matrix with entries `entry(i,j)`.
fn adj_entry(entry: &dyn Fn(usize, usize) -> IntPoly, i: usize, j: usize) -> IntPoly {
    let rows: Vec<usize> = (0..3).filter(|&r| r != j).collect();
    let cols: Vec<usize> = (0..3).filter(|&c| c != i).collect();
    let minor = entry(rows[0], cols[0])
        .mul(&entry(rows[1], cols[1]))
        .sub(&entry(rows[0], cols[1]).mul(&entry(rows[1], cols[0])));
    if (i + j) % 2 == 0 {
        minor
    } else {
        minor.neg()
    }
}

fn det3(entry: &dyn Fn(usize, usize) -> IntPoly) -> IntPoly {
    let mut acc = IntPoly::zero(NUM_COORDS);
    // Sum over permutations of S₃ with signs.
    let perms: [([usize; 3], i64); 6] = [
        ([0, 1, 2], 1),
        ([1, 2, 0], 1),
        ([2, 0, 1], 1),
        ([0, 2, 1], -1),
        ([2, 1, 0], -1),
        ([1, 0, 2], -1),
    ];
    for (p, sign) in perms {
        let term = entry(0, p[0]).mul(&entry(1, p[1])).mul(&entry(2, p[2]));
        acc = acc.add(&term.scale(sign));
    }
    acc
}

/// The 21 quadrics cutting out Σ, in the reference order: the 12 left-column
/// equations (uY = adj X diagonal, XY = uz·I, then XY off-diagonal) followed
/// by the 9 right-column equations (uY = adj X off-diagonal, zX = adj Y).
pub fn sigma_quadrics() -> Vec<IntPoly> {
    let x = |i, j| x_poly(i, j);
    let y = |i, j| y_poly(i, j);
    let u = u_poly();
    let z = z_poly();
    let uz = u.mul(&z);
    let xy = |i: usize, j: usize| {
        let mut acc = IntPoly::zero(NUM_COORDS);
        for l in 0..3 {
            acc = acc.add(&x(i, l).mul(&y(l, j)));
        }
        acc
    };
    let mut quadrics = Vec::with_capacity(21);
    // Left column.
    quadrics.push(u.mul(&y(0, 0)).sub(&adj_entry(&x, 0, 0)));
    quadrics.push(u.mul(&y(1, 1)).sub(&adj_entry(&x, 1, 1)));
    quadrics.push(u.mul(&y(2, 2)).sub(&adj_entry(&x, 2, 2)));
    quadrics.push(uz.sub(&xy(0, 0)));
    quadrics.push(uz.sub(&xy(1, 1)));
    quadrics.push(uz.sub(&xy(2, 2)));
    quadrics.push(xy(0, 1));
    quadrics.push(xy(0, 2));
    quadrics.push(xy(1, 0));
    quadrics.push(xy(1, 2));
    quadrics.push(xy(2, 0));
    quadrics.push(xy(2, 1));
    // Right column.
    quadrics.push(u.mul(&y(0, 1)).sub(&adj_entry(&x, 0, 1)));
    quadrics.push(u.mul(&y(0, 2)).sub(&adj_entry(&x, 0, 2)));
    quadrics.push(u.mul(&y(1, 2)).sub(&adj_entry(&x, 1, 2)));
    quadrics.push(z.mul(&x(0, 0)).sub(&adj_entry(&y, 0, 0)));
    quadrics.push(z.mul(&x(1, 1)).sub(&adj_entry(&y, 1, 1)));
    quadrics.push(z.mul(&x(2, 2)).sub(&adj_entry(&y, 2, 2)));
    quadrics.push(z.mul(&x(0, 1)).sub(&adj_entry(&y, 0, 1)));
    quadrics.push(z.mul(&x(0, 2)).sub(&adj_entry(&y, 0, 2)));
    quadrics.push(z.mul(&x(1, 2)).sub(&adj_entry(&y, 1, 2)));
    quadrics
}

/// The quartic invariant
/// f = (uz − tr XY)² + 4u·det Y + 4z·det X − 4Σ_{ij} det(X_ij)·det(Y_ij),
/// where X_ij, Y_ij are the 2×2 complementary matrices of the (i,j) slots
/// (plain minors, no cofactor signs). Its vanishing locus is the union of the
/// projective tangent spaces of Σ.
pub fn quartic_f() -> IntPoly {
    let x = |i, j| x_poly(i, j);
    let y = |i, j| y_poly(i, j);
    let u = u_poly();
    let z = z_poly();
    let trxy = {
        let mut acc = IntPoly::zero(NUM_COORDS);
        for i in 0..3 {
            for l in 0..3 {
                acc = acc.add(&x(i, l).mul(&y(l, i)));
            }
        }
        acc
    };
    let lead = u.mul(&z).sub(&trxy);
    let mut f = lead.mul(&lead);
    f = f.add(&u.mul(&det3(&y)).scale(4));
    f = f.add(&z.mul(&det3(&x)).scale(4));
    let minor = |e: &dyn Fn(usize, usize) -> IntPoly, i: usize, j: usize| {
        let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..3).filter(|&c| c != j).collect();
        e(rows[0], cols[0])
            .mul(&e(rows[1], cols[1]))
            .sub(&e(rows[0], cols[1]).mul(&e(rows[1], cols[0])))
    };
    for i in 0..3 {
        for j in 0..3 {
            f = f.sub(&minor(&x, i, j).mul(&minor(&y, i, j)).scale(4));
        }
    }
    f
}

/// The 14 partial derivatives of f, in coordinate order.
pub fn quartic_partials() -> Vec<IntPoly> {
    let f = quartic_f();
    (0..NUM_COORDS).map(|i| f.diff(i)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Orbit {
    Sigma,
    OmegaMinusSigma,
    FMinusOmega,
    Generic,
}

impl std::fmt::Display for Orbit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Orbit::Sigma => "SIGMA",
            Orbit::OmegaMinusSigma => "OMEGA_MINUS_SIGMA",
            Orbit::FMinusOmega => "F_MINUS_OMEGA",
            Orbit::Generic => "GENERIC",
        };
        write!(f, "{}", s)
    }
}

/// Four-orbit classification of a point of P¹³: on Σ (all 21 quadrics
/// vanish), on Ω∖Σ (all 14 partials of f vanish), on F∖Ω (f vanishes), or
/// generic.
pub fn orbit_classify<K: Field>(point: &SigmaPoint<K>) -> Orbit {
    let k = point.field();
    let coords = point.coords();
    if sigma_quadrics().iter().all(|q| k.is_zero(&q.eval(k, coords))) {
        return Orbit::Sigma;
    }
    if quartic_partials().iter().all(|p| k.is_zero(&p.eval(k, coords))) {
        return Orbit::OmegaMinusSigma;
    }
    if k.is_zero(&quartic_f().eval(k, coords)) {
        return Orbit::FMinusOmega;
    }
    Orbit::Generic
}

/// Orbit of a hyperplane under the dual action: classify the inverse
/// correlation image of the form.
pub fn dual_classify<K: Field>(sp: &SymplecticForm<K>, omega: &DualForm<K>) -> Orbit {
    let w = sp.correlation_inv(&omega.to_three_form());
    orbit_classify(&SigmaPoint::from_three_vector(&w))
}

/// Basis (rows of a 7×14 matrix) of the affine tangent space of Σ at a point:
/// (∧²U ∧ V) ∩ V(14) for the point's Lagrangian space U.
pub fn tangent_space<K: Field>(sp: &SymplecticForm<K>, point: &SigmaPoint<K>) -> Matrix<K> {
    let k = point.field().clone();
    let frame = lagrangian_frame_of(sp, point);
    let rows: Vec<MultiVector<K>> = (0..3)
        .map(|r| MultiVector::vector(k.clone(), frame.row(r)))
        .collect();
    let mut spanning: Vec<MultiVector<K>> = Vec::new();
    for a in 0..3 {
        for b in a + 1..3 {
            for i in 0..6 {
                let e = MultiVector::basis(k.clone(), 6, &[i]);
                let w = rows[a].wedge(&rows[b]).wedge(&e);
                if !w.is_zero() {
                    spanning.push(w);
                }
            }
        }
    }
    // Inside the span, cut by the 6 linear conditions "contraction = 0".
    let contraction_rows: Vec<Vec<K::Elem>> = spanning
        .iter()
        .map(|w| sp.contract_3vector(w).to_vector())
        .collect();
    let combos = Matrix::from_rows(k.clone(), contraction_rows)
        .transpose()
        .kernel_basis();
    let masks = basis_masks(6, 3);
    let mut coord_rows: Vec<Vec<K::Elem>> = Vec::new();
    for combo in combos {
        let mut w = MultiVector::zero(k.clone(), 6, 3);
        for (c, v) in combo.iter().zip(&spanning) {
            w = w.add(&v.scale(c));
        }
        if !w.is_zero() {
            debug_assert!(sp.contract_3vector(&w).is_zero());
            let _ = &masks;
            coord_rows.push(read_coords(&w));
        }
    }
    let mut m = Matrix::from_rows(k, coord_rows);
    let pivots = m.rref();
    let basis = Matrix::from_rows(
        m.field().clone(),
        (0..pivots.len()).map(|r| m.row(r).to_vec()).collect(),
    );
    assert_eq!(basis.nrows(), 7, "tangent space must have linear dimension 7");
    debug_assert!(basis.row_space_contains(point.coords()));
    basis
}

/// Does the form annihilate the full tangent space at the point?
pub fn annihilates_tangent_space<K: Field>(
    sp: &SymplecticForm<K>,
    omega: &DualForm<K>,
    point: &SigmaPoint<K>,
) -> bool {
    let k = point.field();
    let t = tangent_space(sp, point);
    (0..t.nrows()).all(|r| k.is_zero(&omega.pair_coords(t.row(r))))
}

/// Pull a form back to the standard chart coordinates adapted to a Lagrangian
/// frame: T = [u₁ u₂ u₃ w₁ w₂ w₃] maps the standard frame to the given one,
/// and the returned form is ω∘∧³T.
fn pull_back_to_chart<K: Field>(
    sp: &SymplecticForm<K>,
    omega: &DualForm<K>,
    frame: &Matrix<K>,
) -> (DualForm<K>, Matrix<K>) {
    let t = sp.complete_to_symplectic(&frame.transpose());
    let pulled = omega.to_three_form().apply_linear(&t.transpose());
    (DualForm::from_three_form(&pulled), t)
}

/// The conic form q_ω(U) of a hyperplane on a Lagrangian plane P(U), as a
/// symmetric 3×3 matrix in the frame's row basis: pull ω back to the chart
/// adapted to U and read the Y*-block. Requires ω to annihilate the tangent
/// space at [U] (then the result is independent of the chart completion).
pub fn q_omega<K: Field>(
    sp: &SymplecticForm<K>,
    omega: &DualForm<K>,
    frame: &Matrix<K>,
) -> Matrix<K> {
    let k = omega.field();
    let (pulled, _t) = pull_back_to_chart(sp, omega, frame);
    assert!(
        k.is_zero(pulled.ustar()) && pulled.xstar_matrix().is_zero(),
        "form does not annihilate the tangent space at the frame's point"
    );
    pulled.ystar_matrix()
}

/// Rank of a point of the tangent space at a pivot, in the pivot's chart:
/// a tangent point is [u : X : 0 : 0] there, and its rank is rank X
/// (0 on the pivot itself, 1 on Σ, 2 on Ω∖Σ, 3 on F∖Ω).
pub fn tangent_point_rank<K: Field>(
    sp: &SymplecticForm<K>,
    pivot_frame: &Matrix<K>,
    point: &SigmaPoint<K>,
) -> usize {
    let k = point.field().clone();
    let t = sp.complete_to_symplectic(&pivot_frame.transpose());
    let tinv = t.inverse().expect("symplectic matrices are invertible");
    let moved = point.to_three_vector().apply_linear(&tinv);
    let local = SigmaPoint::from_three_vector(&moved);
    assert!(
        local.y_matrix().is_zero() && k.is_zero(local.z()),
        "point is not on the tangent space at the pivot"
    );
    local.x_matrix().rank()
}

/// Doubled Gram matrix (entries G_ab = coefficient of v_a·v_b, diagonal
/// doubled) of the 6-variable quadric Q(X) = tr(Y*·adj X) in the variables
/// (x₁₁,x₁₂,x₁₃,x₂₂,x₂₃,x₃₃).
pub fn tangent_cone_gram<K: Field>(field: &K, ystar: &Matrix<K>) -> Matrix<K> {
    assert_eq!((ystar.nrows(), ystar.ncols()), (3, 3));
    let k = field;
    let mut g = Matrix::zero(k.clone(), 6, 6);
    let mut add = |a: usize, b: usize, v: K::Elem| {
        let cur = g.get(a, b).clone();
        g.set(a, b, k.add(&cur, &v));
        if a != b {
            let cur = g.get(b, a).clone();
            g.set(b, a, k.add(&cur, &v));
        }
    };
    let two = k.from_i64(2);
    let s = |i: usize, j: usize| sym_slot(i, j);
    // tr(Y*·adj X) expanded over the six adjugate entries.
    // y₁₁·(x₂₂x₃₃ − x₂₃²)
    add(s(1, 1), s(2, 2), ystar.get(0, 0).clone());
    add(s(1, 2), s(1, 2), k.neg(&k.mul(&two, ystar.get(0, 0))));
    // y₂₂·(x₁₁x₃₃ − x₁₃²)
    add(s(0, 0), s(2, 2), ystar.get(1, 1).clone());
    add(s(0, 2), s(0, 2), k.neg(&k.mul(&two, ystar.get(1, 1))));
    // y₃₃·(x₁₁x₂₂ − x₁₂²)
    add(s(0, 0), s(1, 1), ystar.get(2, 2).clone());
    add(s(0, 1), s(0, 1), k.neg(&k.mul(&two, ystar.get(2, 2))));
    // 2y₁₂·(x₁₃x₂₃ − x₁₂x₃₃)
    add(s(0, 2), s(1, 2), k.mul(&two, ystar.get(0, 1)));
    add(s(0, 1), s(2, 2), k.neg(&k.mul(&two, ystar.get(0, 1))));
    // 2y₁₃·(x₁₂x₂₃ − x₁₃x₂₂)
    add(s(0, 1), s(1, 2), k.mul(&two, ystar.get(0, 2)));
    add(s(0, 2), s(1, 1), k.neg(&k.mul(&two, ystar.get(0, 2))));
    // 2y₂₃·(x₁₂x₁₃ − x₁₁x₂₃)
    add(s(0, 1), s(0, 2), k.mul(&two, ystar.get(1, 2)));
    add(s(0, 0), s(1, 2), k.neg(&k.mul(&two, ystar.get(1, 2))));
    g
}

/// Rank of the tangent cone of the hyperplane section H_ω at a singular
/// point: the chart-local equation at the pivot opens with the quadric
/// Q(X) = tr(Y*₀·adj X) for the pulled-back Y*-block, and the rank of its
/// Gram matrix is 6 exactly for a node.
pub fn tangent_cone_rank<K: Field>(
    sp: &SymplecticForm<K>,
    omega: &DualForm<K>,
    pivot: &SigmaPoint<K>,
) -> usize {
    let frame = lagrangian_frame_of(sp, pivot);
    let k = omega.field();
    let (pulled, _t) = pull_back_to_chart(sp, omega, &frame);
    assert!(
        k.is_zero(pulled.ustar()) && pulled.xstar_matrix().is_zero(),
        "pivot is not a singular point of the hyperplane section"
    );
    tangent_cone_gram(k, &pulled.ystar_matrix()).rank()
}

/// A hyperplane with a certified quadratic singularity: the form ω, the pivot
/// where it annihilates the whole tangent space, a Lagrangian frame of the
/// pivot, the conic q_ω(U) on the pivot plane, and the symplectic transporter
/// from the standard chart.
#[derive(Clone, Debug)]
pub struct NodalWitness<K: Field> {
    pub omega: DualForm<K>,
    pub pivot: SigmaPoint<K>,
    pub frame: Matrix<K>,
    pub conic: Matrix<K>,
    pub transporter: Matrix<K>,
}

/// Build a hyperplane section with a node at the given point of Σ: in the
/// chart adapted to the pivot take a random form (0, 0, Y*, z*) with
/// rank Y* = 3 (so the tangent cone at the pivot has rank 6), then push it
/// forward to the pivot's position.
pub fn nodal_dual_form<K: Field, R: Rng + ?Sized>(
    sp: &SymplecticForm<K>,
    pivot: &SigmaPoint<K>,
    rng: &mut R,
) -> NodalWitness<K> {
    let k = pivot.field().clone();
    let frame = lagrangian_frame_of(sp, pivot);
    let t = sp.complete_to_symplectic(&frame.transpose());
    let ystar = loop {
        let mut y = Matrix::zero(k.clone(), 3, 3);
        for i in 0..3 {
            for j in i..3 {
                let v = k.sample(rng);
                y.set(i, j, v.clone());
                y.set(j, i, v);
            }
        }
        if !k.is_zero(&y.det()) {
            break y;
        }
    };
    let zstar = k.sample(rng);
    let omega0 = DualForm::from_blocks(
        k.clone(),
        k.zero(),
        &Matrix::zero(k.clone(), 3, 3),
        &ystar,
        zstar,
    );
    let push = t
        .transpose()
        .inverse()
        .expect("symplectic matrices are invertible");
    let omega = DualForm::from_three_form(&omega0.to_three_form().apply_linear(&push));
    let conic = q_omega(sp, &omega, &frame);
    debug_assert_eq!(conic.rank(), 3);
    debug_assert_eq!(dual_classify(sp, &omega), Orbit::FMinusOmega);
    NodalWitness {
        omega,
        pivot: pivot.clone(),
        frame,
        conic,
        transporter: t,
    }
}

/// Sample a point of H_ω ∩ Σ in the chart: draw all symmetric entries of X
/// at random except one diagonal slot, in which the hyperplane condition
/// u* + tr(X*X) + tr(Y*·adj X) + z*·det X is affine-linear; solve it exactly
/// and retry when the linear coefficient degenerates.
pub fn sample_h_omega_chart<K: Field, R: Rng + ?Sized>(
    omega: &DualForm<K>,
    rng: &mut R,
    max_tries: usize,
) -> Option<SigmaPoint<K>> {
    let k = omega.field().clone();
    for attempt in 0..max_tries {
        let free = attempt % 3;
        let mut x = Matrix::zero(k.clone(), 3, 3);
        for i in 0..3 {
            for j in i..3 {
                let v = k.sample(rng);
                x.set(i, j, v.clone());
                x.set(j, i, v);
            }
        }
        let eval_at = |v: K::Elem| {
            let mut xx = x.clone();
            xx.set(free, free, v);
            omega.pair(&chart_point(&k, &xx))
        };
        let b = eval_at(k.zero());
        let a_plus_b = eval_at(k.one());
        let a = k.sub(&a_plus_b, &b);
        if k.is_zero(&a) {
            continue;
        }
        let sol = k.neg(&k.div(&b, &a).expect("linear coefficient is nonzero"));
        x.set(free, free, sol);
        let point = chart_point(&k, &x);
        debug_assert!(k.is_zero(&omega.pair(&point)));
        return Some(point);
    }
    None
}

/// A random point of Σ: a random symmetric chart matrix moved by a random
/// symplectic element (so both charts and all orbits of frames occur).
pub fn random_sigma_point<K: Field, R: Rng + ?Sized>(
    sp: &SymplecticForm<K>,
    rng: &mut R,
) -> SigmaPoint<K> {
    let k = sp.field().clone();
    let x = {
        let mut m = Matrix::zero(k.clone(), 3, 3);
        for i in 0..3 {
            for j in i..3 {
                let v = k.sample(rng);
                m.set(i, j, v.clone());
                m.set(j, i, v);
            }
        }
        m
    };
    let s = sp.random_symplectic(rng);
    let w = chart_point(&k, &x).to_three_vector().apply_linear(&s);
    SigmaPoint::from_three_vector(&w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rationals};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q() -> Rationals {
        Rationals
    }

    fn f1009() -> Fp {
        Fp::new(1009).unwrap()
    }

    fn random_symmetric<K: Field>(field: &K, rng: &mut impl Rng) -> Matrix<K> {
        let mut m = Matrix::zero(field.clone(), 3, 3);
        for i in 0..3 {
            for j in i..3 {
                let v = field.sample(rng);
                m.set(i, j, v.clone());
                m.set(j, i, v);
            }
        }
        m
    }

    #[test]
    fn coordinate_basis_spans_the_contraction_kernel() {
        let k = q();
        let sp = SymplecticForm::standard(k);
        for c in 0..NUM_COORDS {
            let mut coords = vec![k.zero(); NUM_COORDS];
            coords[c] = k.one();
            let w = coords_to_three_vector(&k, &coords);
            assert!(
                sp.contract_3vector(&w).is_zero(),
                "basis vector {} is not in V(14)",
                COORD_NAMES[c]
            );
            assert_eq!(read_coords(&w), coords, "coordinate {} round trip", COORD_NAMES[c]);
        }
    }

    #[test]
    fn reading_coordinates_inverts_the_splitting() {
        let k = f1009();
        let sp = SymplecticForm::standard(k);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let w = MultiVector::from_terms(
                k,
                6,
                3,
                basis_masks(6, 3).into_iter().map(|m| (m, k.sample(&mut rng))),
            );
            let (w14, _) = sp.v14_decompose(&w);
            if w14.is_zero() {
                continue;
            }
            let coords = read_coords(&w14);
            assert_eq!(coords_to_three_vector(&k, &coords), w14);
        }
    }

    #[test]
    fn pairing_weights_match_the_exterior_pairing() {
        let k = f1009();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let pc: Vec<u64> = (0..NUM_COORDS).map(|_| k.sample(&mut rng)).collect();
            let fc: Vec<u64> = (0..NUM_COORDS).map(|_| k.sample(&mut rng)).collect();
            let point = SigmaPoint::new(k, pc.clone());
            let form = DualForm::new(k, fc.clone());
            let via_weights = form.pair(&point);
            let via_forms = form.to_three_form().dual_pair(&point.to_three_vector());
            assert_eq!(via_weights, via_forms);
        }
    }

    #[test]
    fn plucker_of_the_two_chart_origins() {
        let k = q();
        let sp = SymplecticForm::standard(k);
        let u0 = Matrix::from_i64(
            k,
            &[
                &[1, 0, 0, 0, 0, 0],
                &[0, 1, 0, 0, 0, 0],
                &[0, 0, 1, 0, 0, 0],
            ],
        );
        let p = plucker_lagrangian(&sp, &u0);
        let mut expected = [0i64; NUM_COORDS];
        expected[U_IDX] = 1;
        assert_eq!(p, SigmaPoint::from_i64(k, &expected));

        let dual = Matrix::from_i64(
            k,
            &[
                &[0, 0, 0, 1, 0, 0],
                &[0, 0, 0, 0, 1, 0],
                &[0, 0, 0, 0, 0, 1],
            ],
        );
        let p = plucker_lagrangian(&sp, &dual);
        let mut expected = [0i64; NUM_COORDS];
        expected[Z_IDX] = 1;
        assert_eq!(p, SigmaPoint::from_i64(k, &expected));
    }

    #[test]
    fn graph_frames_map_to_chart_points() {
        for descriptor in 0..2 {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            if descriptor == 0 {
                let k = q();
                let sp = SymplecticForm::standard(k);
                for _ in 0..10 {
                    let x = random_symmetric(&k, &mut rng);
                    let frame = Matrix::from_fn(k, 3, 6, |r, c| {
                        if c < 3 {
                            k.from_i64((r == c) as i64)
                        } else {
                            x.get(r, c - 3).clone()
                        }
                    });
                    assert_eq!(plucker_lagrangian(&sp, &frame), chart_point(&k, &x));
                }
            } else {
                let k = f1009();
                let sp = SymplecticForm::standard(k);
                for _ in 0..10 {
                    let x = random_symmetric(&k, &mut rng);
                    let frame = Matrix::from_fn(k, 3, 6, |r, c| {
                        if c < 3 {
                            k.from_i64((r == c) as i64)
                        } else {
                            x.get(r, c - 3).clone()
                        }
                    });
                    assert_eq!(plucker_lagrangian(&sp, &frame), chart_point(&k, &x));
                }
            }
        }
    }

    #[test]
    fn quadrics_count_and_vanishing_on_the_chart() {
        let quadrics = sigma_quadrics();
        assert_eq!(quadrics.len(), 21);
        for qd in &quadrics {
            assert_eq!(qd.total_degree(), 2);
        }
        let k = f1009();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let x = random_symmetric(&k, &mut rng);
            let p = chart_point(&k, &x);
            for qd in &quadrics {
                assert!(k.is_zero(&qd.eval(&k, p.coords())));
            }
        }
    }

    #[test]
    fn quadrics_are_linearly_independent() {
        // Coefficient vectors over all 105 degree-2 monomials in 14 variables.
        let k = q();
        let mut monomials = Vec::new();
        for a in 0..NUM_COORDS {
            for b in a..NUM_COORDS {
                let mut e = vec![0u8; NUM_COORDS];
                e[a] += 1;
                e[b] += 1;
                monomials.push(e);
            }
        }
        let rows: Vec<Vec<_>> = sigma_quadrics()
            .iter()
            .map(|qd| monomials.iter().map(|m| k.from_i64(qd.coeff(m))).collect())
            .collect();
        assert_eq!(Matrix::from_rows(k, rows).rank(), 21);
    }

    #[test]
    fn the_x23_point_is_off_sigma_but_on_omega() {
        let k = q();
        let mut coords = [0i64; NUM_COORDS];
        coords[x_idx(1, 2)] = 1;
        let p = SigmaPoint::from_i64(k, &coords);
        let quadrics = sigma_quadrics();
        assert!(quadrics.iter().any(|qd| !k.is_zero(&qd.eval(&k, p.coords()))));
        assert!(quartic_partials()
            .iter()
            .all(|d| k.is_zero(&d.eval(&k, p.coords()))));
        assert_eq!(orbit_classify(&p), Orbit::OmegaMinusSigma);
    }

    #[test]
    fn quartic_vanishes_on_tangent_points_of_sigma() {
        let k = f1009();
        let sp = SymplecticForm::standard(k);
        let f = quartic_f();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut checked = 0;
        while checked < 100 {
            let x = random_symmetric(&k, &mut rng);
            let p = chart_point(&k, &x);
            let t = tangent_space(&sp, &p);
            let combo: Vec<u64> = (0..t.nrows()).map(|_| k.sample(&mut rng)).collect();
            let mut coords = vec![k.zero(); NUM_COORDS];
            for (r, c) in combo.iter().enumerate() {
                for j in 0..NUM_COORDS {
                    coords[j] = k.add(&coords[j], &k.mul(c, t.get(r, j)));
                }
            }
            if coords.iter().all(|c| k.is_zero(c)) {
                continue;
            }
            assert!(k.is_zero(&f.eval(&k, &coords)));
            checked += 1;
        }
    }

    #[test]
    fn quartic_is_nonzero_at_a_generic_point() {
        let k = q();
        let f = quartic_f();
        let mut coords = [0i64; NUM_COORDS];
        coords[U_IDX] = 1;
        coords[Z_IDX] = 1;
        coords[x_idx(0, 0)] = 1;
        coords[y_idx(1, 1)] = 1;
        let p = SigmaPoint::from_i64(k, &coords);
        // (uz − tr XY)² = 1, 4u det Y = 0, 4z det X = 0, minor sum = −4·(x₁₁-complement)(y₁₁-complement)…
        assert!(!k.is_zero(&f.eval(&k, p.coords())));
        assert_eq!(orbit_classify(&p), Orbit::Generic);
    }

    #[test]
    fn orbit_representatives_classify_correctly() {
        let k = q();
        let mut origin = [0i64; NUM_COORDS];
        origin[U_IDX] = 1;
        assert_eq!(orbit_classify(&SigmaPoint::from_i64(k, &origin)), Orbit::Sigma);

        // A tangent point of rank 3 lies on F∖Ω: [0, X, 0, 0] with det X ≠ 0.
        let mut tp = [0i64; NUM_COORDS];
        tp[x_idx(0, 0)] = 1;
        tp[x_idx(1, 1)] = 1;
        tp[x_idx(2, 2)] = 1;
        let p = SigmaPoint::from_i64(k, &tp);
        assert_eq!(orbit_classify(&p), Orbit::FMinusOmega);
    }

    #[test]
    fn orbit_labels_are_symplectically_invariant() {
        let k = f1009();
        let sp = SymplecticForm::standard(k);
        let mut rng = ChaCha8Rng::seed_from_u64(6);

        let mut reps = Vec::new();
        let mut origin = [0i64; NUM_COORDS];
        origin[U_IDX] = 1;
        reps.push((SigmaPoint::from_i64(k, &origin), Orbit::Sigma));
        let mut x23 = [0i64; NUM_COORDS];
        x23[x_idx(1, 2)] = 1;
        reps.push((SigmaPoint::from_i64(k, &x23), Orbit::OmegaMinusSigma));
        let mut rk3 = [0i64; NUM_COORDS];
        rk3[x_idx(0, 0)] = 1;
        rk3[x_idx(1, 1)] = 1;
        rk3[x_idx(2, 2)] = 1;
        reps.push((SigmaPoint::from_i64(k, &rk3), Orbit::FMinusOmega));
        let mut gen = [0i64; NUM_COORDS];
        gen[U_IDX] = 1;
        gen[Z_IDX] = 1;
        gen[x_idx(0, 0)] = 1;
        gen[y_idx(1, 1)] = 1;
        reps.push((SigmaPoint::from_i64(k, &gen), Orbit::Generic));

        for (p, orbit) in &reps {
            assert_eq!(orbit_classify(p), *orbit);
            for _ in 0..20 {
                let s = sp.random_symplectic(&mut rng);
                let moved = SigmaPoint::from_three_vector(&p.to_three_vector().apply_linear(&s));
                assert_eq!(orbit_classify(&moved), *orbit, "orbit changed under {:?}", s);
            }
        }
    }

    #[test]
    fn quartic_is_a_relative_invariant() {
        let k = f1009();
        let sp = SymplecticForm::standard(k);
        let f = quartic_f();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let s = sp.random_symplectic(&mut rng);
            let mut ratio: Option<u64> = None;
            for _ in 0..10 {
                let coords: Vec<u64> = (0..NUM_COORDS).map(|_| k.sample(&mut rng)).collect();
                let p = SigmaPoint::new(k, coords);
                let before = f.eval(&k, p.coords());
                let moved = SigmaPoint::from_three_vector(&p.to_three_vector().apply_linear(&s));
                let after = f.eval(&k, moved.coords());
                if k.is_zero(&before) {
                    assert!(k.is_zero(&after));
                    continue;
                }
                let r = k.div(&after, &before).unwrap();
                match ratio {
                    None => ratio = Some(r),
                    Some(expected) => assert_eq!(r, expected),
                }
            }
        }
    }

    #[test]
    fn dual_classification_of_reference_forms() {
        let k = q();
        let sp = SymplecticForm::standard(k);

        let mut ustar = [0i64; NUM_COORDS];
        ustar[U_IDX] = 1;
        assert_eq!(
            dual_classify(&sp, &DualForm::from_i64(k, &ustar)),
            Orbit::Sigma
        );

        let ident = Matrix::identity(k, 3);
        let zero3 = Matrix::zero(k, 3, 3);
        let omega = DualForm::from_blocks(k, k.zero(), &zero3, &ident, k.zero());
        assert_eq!(dual_classify(&sp, &omega), Orbit::FMinusOmega);

        let mut d110 = Matrix::zero(k, 3, 3);
        d110.set(0, 0, k.one());
        d110.set(1, 1, k.one());
        let omega = DualForm::from_blocks(k, k.zero(), &zero3, &d110, k.zero());
        assert_eq!(dual_classify(&sp, &omega), Orbit::OmegaMinusSigma);

        let mut d100 = Matrix::zero(k, 3, 3);
        d100.set(0, 0, k.one());
        let omega = DualForm::from_blocks(k, k.zero(), &zero3, &d100, k.zero());
        assert_eq!(dual_classify(&sp, &omega), Orbit::Sigma);
    }

    #[test]
    fn tangent_space_at_the_origin_is_u_and_x_directions() {
        let k = q();
        let sp = SymplecticForm::standard(k);
        let mut origin = [0i64; NUM_COORDS];
        origin[U_IDX] = 1;
        let p = SigmaPoint::from_i64(k, &origin);
        let t = tangent_space(&sp, &p);
        assert_eq!(t.nrows(), 7);
        // Span = {[u : X : 0 : 0]}: y- and z-coordinates of every row vanish.
        for r in 0..7 {
            for c in 7..NUM_COORDS {
                assert!(k.is_zero(t.get(r, c)));
            }
        }
        assert!(t.row_space_contains(p.coords()));
    }

    #[test]
    fn tangent_spaces_are_equivariant() {
        let k = f1009();
        let sp = SymplecticForm::standard(k);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5 {
            let p = random_sigma_point(&sp, &mut rng);
            let t = tangent_space(&sp, &p);
            let s = sp.random_symplectic(&mut rng);
            let moved = SigmaPoint::from_three_vector(&p.to_three_vector().apply_linear(&s));
            let t_moved = tangent_space(&sp, &moved);
            // Transport each row of t and check containment in t_moved.
            for r in 0..t.nrows() {
                let w = coords_to_three_vector(&k, t.row(r)).apply_linear(&s);
                assert!(t_moved.row_space_contains(&read_coords(&w)));
            }
        }
    }

    #[test]
    fn conic_form_matches_the_reference_hyperplane() {
        // ω = b(x₁₄₅+x₃₅₆) − c(x₄₁₆+x₂₅₆) − a(x₄₅₂+x₄₃₆) has, at the standard
        // frame, q_ω = [[0,−c,b],[−c,0,−a],[b,−a,0]] (the polynomial
        // b·x₁x₃ − c·x₁x₂ − a·x₂x₃ up to the factor 2 of the Gram pairing).
        let k = q();
        let sp = SymplecticForm::standard(k);
        let (a, b, c) = (k.from_i64(2), k.from_i64(3), k.from_i64(5));
        let mut form = MultiVector::zero(k, 6, 3);
        let term = |idx: &[usize], s: &<Rationals as Field>::Elem| {
            MultiVector::basis(k, 6, idx).scale(s)
        };
        form = form.add(&term(&[0, 3, 4], &b));
        form = form.add(&term(&[2, 4, 5], &b));
        form = form.add(&term(&[3, 0, 5], &k.neg(&c)));
        form = form.add(&term(&[1, 4, 5], &k.neg(&c)));
        form = form.add(&term(&[3, 4, 1], &k.neg(&a)));
        form = form.add(&term(&[3, 2, 5], &k.neg(&a)));
        let omega = DualForm::from_three_form(&form);

        let u0 = Matrix::from_i64(
            k,
            &[
                &[1, 0, 0, 0, 0, 0],
                &[0, 1, 0, 0, 0, 0],
                &[0, 0, 1, 0, 0, 0],
            ],
        );
        let conic = q_omega(&sp, &omega, &u0);
        let expected = Matrix::from_rows(
            k,
            vec![
                vec![k.zero(), k.neg(&c), b.clone()],
                vec![k.neg(&c), k.zero(), k.neg(&a)],
                vec![b.clone(), k.neg(&a), k.zero()],
            ],
        );
        assert_eq!(conic, expected);
    }

    #[test]
    fn conic_form_transforms_as_a_quadratic_form() {
        let k = f1009();
        let sp = SymplecticForm::standard(k);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pivot = random_sigma_point(&sp, &mut rng);
        let witness = nodal_dual_form(&sp, &pivot, &mut rng);
        let g = loop {
            let m = Matrix::from_fn(k, 3, 3, |_, _| k.sample(&mut rng));
            if !k.is_zero(&m.det()) {
                break m;
            }
        };
        let new_frame = g.mul(&witness.frame);
        let q_new = q_omega(&sp, &witness.omega, &new_frame);
        // Under a frame change by G the plane's 3-vector rescales by det G,
        // so the conic transforms as q ↦ (det G)⁻¹·G·q·Gᵀ.
        let scale = k.inv(&g.det()).unwrap();
        assert_eq!(
            q_new,
            g.mul(&witness.conic).mul(&g.transpose()).scale(&scale)
        );
    }

    #[test]
    fn nodal_witnesses_certify_their_invariants() {
        let k = f1009();
        let sp = SymplecticForm::standard(k);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..5 {
            let pivot = random_sigma_point(&sp, &mut rng);
            let w = nodal_dual_form(&sp, &pivot, &mut rng);
            assert!(annihilates_tangent_space(&sp, &w.omega, &w.pivot));
            assert_eq!(w.conic.rank(), 3);
            assert_eq!(dual_classify(&sp, &w.omega), Orbit::FMinusOmega);
            assert_eq!(tangent_cone_rank(&sp, &w.omega, &w.pivot), 6);
        }
    }

    #[test]
    fn tangent_cone_ranks_of_the_three_reference_forms() {
        let k = q();
        let sp = SymplecticForm::standard(k);
        let mut origin = [0i64; NUM_COORDS];
        origin[U_IDX] = 1;
        let pivot = SigmaPoint::from_i64(k, &origin);
        let zero3 = Matrix::zero(k, 3, 3);
        for (diag, expected) in [([1, 1, 1], 6), ([1, 1, 0], 4), ([1, 0, 0], 3)] {
            let mut y = Matrix::zero(k, 3, 3);
            for (i, &d) in diag.iter().enumerate() {
                y.set(i, i, k.from_i64(d));
            }
            let omega = DualForm::from_blocks(k, k.zero(), &zero3, &y, k.zero());
            assert_eq!(
                tangent_cone_rank(&sp, &omega, &pivot),
                expected,
                "rank for diag {:?}",
                diag
            );
        }
    }

    #[test]
    fn tangent_cone_gram_matches_the_polynomial() {
        let k = f1009();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let y = random_symmetric(&k, &mut rng);
            let g = tangent_cone_gram(&k, &y);
            assert_eq!(g, g.transpose());
            let v: Vec<u64> = (0..6).map(|_| k.sample(&mut rng)).collect();
            // Build the symmetric X with slots v, evaluate 2·tr(Y*·adj X).
            let x = Matrix::from_fn(k, 3, 3, |i, j| v[sym_slot(i, j)].clone());
            let adj = adjugate3(&x);
            let mut tr = k.zero();
            for i in 0..3 {
                for j in 0..3 {
                    tr = k.add(&tr, &k.mul(y.get(i, j), adj.get(j, i)));
                }
            }
            let gv = g.mul_vec(&v);
            let mut vgv = k.zero();
            for i in 0..6 {
                vgv = k.add(&vgv, &k.mul(&v[i], &gv[i]));
            }
            assert_eq!(vgv, k.mul(&k.from_i64(2), &tr));
        }
    }

    #[test]
    fn tangent_point_ranks_stratify_the_tangent_cone() {
        let k = q();
        let sp = SymplecticForm::standard(k);
        let u0 = Matrix::from_i64(
            k,
            &[
                &[1, 0, 0, 0, 0, 0],
                &[0, 1, 0, 0, 0, 0],
                &[0, 0, 1, 0, 0, 0],
            ],
        );
        let mk = |u: i64, d: [i64; 3]| {
            let mut c = [0i64; NUM_COORDS];
            c[U_IDX] = u;
            c[x_idx(0, 0)] = d[0];
            c[x_idx(1, 1)] = d[1];
            c[x_idx(2, 2)] = d[2];
            SigmaPoint::from_i64(k, &c)
        };
        assert_eq!(tangent_point_rank(&sp, &u0, &mk(1, [0, 0, 0])), 0);
        assert_eq!(tangent_point_rank(&sp, &u0, &mk(1, [1, 0, 0])), 1);
        assert_eq!(tangent_point_rank(&sp, &u0, &mk(0, [1, 1, 0])), 2);
        assert_eq!(tangent_point_rank(&sp, &u0, &mk(2, [1, 1, 1])), 3);
        // Ranks match orbits: 1 ↔ Σ, 2 ↔ Ω∖Σ, 3 ↔ F∖Ω.
        assert_eq!(orbit_classify(&mk(1, [1, 0, 0])), Orbit::Sigma);
        assert_eq!(orbit_classify(&mk(0, [1, 1, 0])), Orbit::OmegaMinusSigma);
        assert_eq!(orbit_classify(&mk(2, [1, 1, 1])), Orbit::FMinusOmega);
    }

    #[test]
    fn hyperplane_samples_lie_on_the_section() {
        let k = f1009();
        let sp = SymplecticForm::standard(k);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let pivot = random_sigma_point(&sp, &mut rng);
        let witness = nodal_dual_form(&sp, &pivot, &mut rng);
        for _ in 0..20 {
            let p = sample_h_omega_chart(&witness.omega, &mut rng, 50).unwrap();
            assert!(k.is_zero(&witness.omega.pair(&p)));
            assert_eq!(orbit_classify(&p), Orbit::Sigma);
        }
    }

    #[test]
    fn frame_recovery_round_trips() {
        let k = f1009();
        let sp = SymplecticForm::standard(k);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..10 {
            let p = random_sigma_point(&sp, &mut rng);
            let frame = lagrangian_frame_of(&sp, &p);
            let back = plucker_lagrangian(&sp, &frame);
            assert!(back.same_projective_point(&p));
        }
    }

    #[test]
    fn frame_recovery_rejects_points_off_sigma() {
        let k = q();
        let sp = SymplecticForm::standard(k);
        let mut coords = [0i64; NUM_COORDS];
        coords[U_IDX] = 1;
        coords[Z_IDX] = 1;
        let p = SigmaPoint::from_i64(k, &coords);
        let result = std::panic::catch_unwind(|| lagrangian_frame_of(&sp, &p));
        assert!(result.is_err());
    }
}
