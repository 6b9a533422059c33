//! The rank-5 incidence bundle over P⁵ = P(V) and its degeneracy loci.
//!
//! Every point ⟨v⟩ of P(V) carries a 5-dimensional fiber
//! Ê_v = {v∧η : η ∈ ∧²(v^⊥)} ∩ V(14), the span of the Plücker vectors of
//! all Lagrangian 3-spaces through v. A hyperplane form ω on P(V(14))
//! restricts to a functional on each fiber; k independent forms give a k×5
//! value matrix Φ(v), and the vertex locus of level k is
//! {⟨v⟩ : rank Φ(v) ≤ k−1}. This module computes fibers, section values,
//! exhaustive and sampled degeneracy scans, the conics cut on witnessed
//! pivot planes, and the degree of the rank-drop divisor restricted to a
//! line for k = 5.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use thiserror::Error;

use crate::exterior::{basis_masks, mask_indices, MultiVector, SymplecticForm};
use crate::field::{Field, FieldDescriptor};
use crate::matrix::Matrix;
use crate::poly::UniPoly;
use crate::sigma::{
    nodal_dual_form, q_omega, random_sigma_point, read_coords, DualForm, NodalWitness, NUM_COORDS,
};

/// Largest prime for which exhaustive enumeration of P⁵(F_p) is the default
/// scan mode; above it callers should sample.
pub const EXHAUSTIVE_PRIME_LIMIT: u64 = 31;

const MAX_SCAN_RECORDS: usize = 200_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IncidenceError {
    #[error("fiber has dimension {got}, expected 5")]
    FiberDimension { got: usize },
    #[error("the {k} forms of the linear system span only {rank} dimensions")]
    DependentForms { k: usize, rank: usize },
    #[error("pivot {index} pairs to zero with every other form of the system")]
    PivotInsideOrthogonal { index: usize },
    #[error("form {index} of the system carries no pivot witness")]
    MissingWitness { index: usize },
    #[error("the form does not lie in the span of the system")]
    FormOutsideSystem,
    #[error("the pivot conic has rank {rank} < 3: the form lies in a deeper dual stratum")]
    ConicRank { rank: usize },
    #[error("the field does not support exhaustive enumeration")]
    NotEnumerable,
    #[error("line determinant extraction degenerated {tries} times in a row")]
    LineDeterminant { tries: usize },
}

fn unit_vector<K: Field>(field: &K, n: usize, i: usize) -> Vec<K::Elem> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

fn assert_direction<K: Field>(field: &K, v: &[K::Elem]) {
    assert_eq!(v.len(), 6, "points of P(V) have six coordinates");
    assert!(
        v.iter().any(|c| !field.is_zero(c)),
        "the zero vector spans no point of P(V)"
    );
}

/// The 6×15 matrix, over the pair coordinates e_a∧e_b (a < b), of the linear
/// map η ↦ α̃(v∧η) whose kernel is {η : v∧η ∈ V(14)}: column (a,b) holds the
/// contraction α(v,e_a)e_b − α(v,e_b)e_a + α(e_a,e_b)v. Its rank is 5 for
/// every v ≠ 0, and its kernel surjects onto the fiber Ê_v via η ↦ v∧η.
pub fn divisibility_matrix<K: Field>(sp: &SymplecticForm<K>, v: &[K::Elem]) -> Matrix<K> {
    let k = sp.field().clone();
    assert_direction(&k, v);
    let pairings: Vec<K::Elem> = (0..6).map(|a| sp.pair(v, &unit_vector(&k, 6, a))).collect();
    let masks = basis_masks(6, 2);
    Matrix::from_fn(k.clone(), 6, masks.len(), |d, col| {
        let idx = mask_indices(masks[col]);
        let (a, b) = (idx[0], idx[1]);
        let mut t = k.mul(sp.gram().get(a, b), &v[d]);
        if d == b {
            t = k.add(&t, &pairings[a]);
        }
        if d == a {
            t = k.sub(&t, &pairings[b]);
        }
        t
    })
}

/// The k×15 matrix of pairings ⟨Ω_i, v∧e_a∧e_b⟩ over the pair coordinates:
/// row i lists the coefficients of the interior product ι_v(Ω_i).
pub fn incidence_rows<K: Field>(three_forms: &[MultiVector<K>], v: &[K::Elem]) -> Matrix<K> {
    assert!(!three_forms.is_empty());
    let k = three_forms[0].field().clone();
    assert_direction(&k, v);
    let vv = MultiVector::vector(k.clone(), v);
    let masks = basis_masks(6, 2);
    let rows = three_forms
        .iter()
        .map(|f| f.interior(&vv).dense_coords(&masks))
        .collect();
    Matrix::from_rows(k, rows)
}

/// Rank of the stacked section-value matrix Φ(v) of the given forms on the
/// 5-dimensional fiber at ⟨v⟩, computed without constructing the fiber:
/// rank Φ(v) = rank([value rows; divisibility matrix]) − 5. The subtraction
/// is exact because the divisibility matrix has rank 5 at every v ≠ 0, its
/// kernel maps onto Ê_v, and the value rows vanish on the kernel's defect
/// {v∧u : u ∈ V}.
pub fn section_rank<K: Field>(
    sp: &SymplecticForm<K>,
    three_forms: &[MultiVector<K>],
    v: &[K::Elem],
) -> usize {
    let stacked = incidence_rows(three_forms, v).vstack(&divisibility_matrix(sp, v));
    let rank = stacked.rank();
    assert!(rank >= 5, "divisibility matrix degenerated");
    rank - 5
}

/// Fiber of the rank-5 incidence bundle at a point of P(V): the point's
/// direction vector and a reduced 5×14 basis of Ê_v ⊂ V(14).
#[derive(Clone, Debug)]
pub struct EFiber<K: Field> {
    point: Vec<K::Elem>,
    basis: Matrix<K>,
}

impl<K: Field> EFiber<K> {
    pub fn point(&self) -> &[K::Elem] {
        &self.point
    }

    /// Reduced row-echelon 5×14 matrix whose rows span Ê_v.
    pub fn basis(&self) -> &Matrix<K> {
        &self.basis
    }

    /// Coordinates of a 14-vector with respect to the fiber basis, when the
    /// vector lies in the fiber.
    pub fn fiber_coords(&self, coords: &[K::Elem]) -> Option<Vec<K::Elem>> {
        assert_eq!(coords.len(), NUM_COORDS);
        self.basis.transpose().solve(coords)
    }

    pub fn contains(&self, coords: &[K::Elem]) -> bool {
        self.fiber_coords(coords).is_some()
    }
}

/// Compute the fiber Ê_v = {v∧η : η ∈ ∧²(v^⊥)} ∩ V(14): choose four
/// directions completing v inside its α-orthogonal complement, wedge the six
/// candidate pairs with v, and cut by the contraction whose kernel is V(14).
pub fn e_fiber<K: Field>(
    sp: &SymplecticForm<K>,
    v: &[K::Elem],
) -> Result<EFiber<K>, IncidenceError> {
    let k = sp.field().clone();
    assert_direction(&k, v);
    let pair_row: Vec<K::Elem> = (0..6).map(|a| sp.pair(v, &unit_vector(&k, 6, a))).collect();
    let perp = Matrix::from_rows(k.clone(), vec![pair_row]).kernel_basis();
    let mut dirs: Vec<Vec<K::Elem>> = Vec::new();
    let mut stack = vec![v.to_vec()];
    for w in perp {
        let mut trial = stack.clone();
        trial.push(w.clone());
        if Matrix::from_rows(k.clone(), trial.clone()).rank() > stack.len() {
            stack = trial;
            dirs.push(w);
        }
    }
    assert_eq!(dirs.len(), 4, "the α-orthogonal complement must extend v by 4");
    let vv = MultiVector::vector(k.clone(), v);
    let dir_vecs: Vec<MultiVector<K>> = dirs
        .iter()
        .map(|d| MultiVector::vector(k.clone(), d))
        .collect();
    let mut candidates = Vec::with_capacity(6);
    for i in 0..4 {
        for j in (i + 1)..4 {
            candidates.push(vv.wedge(&dir_vecs[i]).wedge(&dir_vecs[j]));
        }
    }
    let contraction_cols: Vec<Vec<K::Elem>> = candidates
        .iter()
        .map(|c| sp.contract_3vector(c).to_vector())
        .collect();
    let con = Matrix::from_fn(k.clone(), 6, candidates.len(), |r, c| {
        contraction_cols[c][r].clone()
    });
    let kernel = con.kernel_basis();
    if kernel.len() != 5 {
        return Err(IncidenceError::FiberDimension { got: kernel.len() });
    }
    let rows: Vec<Vec<K::Elem>> = kernel
        .iter()
        .map(|combo| {
            let mut w = MultiVector::zero(k.clone(), 6, 3);
            for (c, coeff) in combo.iter().enumerate() {
                w = w.add(&candidates[c].scale(coeff));
            }
            read_coords(&w)
        })
        .collect();
    let mut basis = Matrix::from_rows(k.clone(), rows);
    let pivots = basis.rref();
    if pivots.len() != 5 {
        return Err(IncidenceError::FiberDimension { got: pivots.len() });
    }
    Ok(EFiber {
        point: v.to_vec(),
        basis,
    })
}

/// The value at ⟨v⟩ of the section cut by the hyperplane form: the five
/// pairings of ω against the fiber basis. The zero vector exactly when the
/// form vanishes on every Lagrangian Plücker point through v.
pub fn section_value<K: Field>(omega: &DualForm<K>, fiber: &EFiber<K>) -> Vec<K::Elem> {
    (0..5).map(|i| omega.pair_coords(fiber.basis.row(i))).collect()
}

pub fn section_vanishes<K: Field>(omega: &DualForm<K>, fiber: &EFiber<K>) -> bool {
    let k = omega.field();
    section_value(omega, fiber).iter().all(|c| k.is_zero(c))
}

/// A random Lagrangian 3-space through v, as a 3×6 row frame whose first row
/// is v: the remaining rows are drawn from the iterated α-orthogonal
/// complements.
pub fn random_lagrangian_through<K: Field, R: Rng + ?Sized>(
    sp: &SymplecticForm<K>,
    v: &[K::Elem],
    rng: &mut R,
) -> Matrix<K> {
    let k = sp.field().clone();
    assert_direction(&k, v);
    let pair_row =
        |u: &[K::Elem]| -> Vec<K::Elem> { (0..6).map(|a| sp.pair(u, &unit_vector(&k, 6, a))).collect() };
    let combo = |basis: &[Vec<K::Elem>], rng: &mut R| -> Vec<K::Elem> {
        let mut out = vec![k.zero(); 6];
        for b in basis {
            let c = k.sample(rng);
            for (o, e) in out.iter_mut().zip(b.iter()) {
                *o = k.add(o, &k.mul(&c, e));
            }
        }
        out
    };
    let perp1 = Matrix::from_rows(k.clone(), vec![pair_row(v)]).kernel_basis();
    loop {
        let u2 = combo(&perp1, rng);
        if Matrix::from_rows(k.clone(), vec![v.to_vec(), u2.clone()]).rank() != 2 {
            continue;
        }
        let perp2 =
            Matrix::from_rows(k.clone(), vec![pair_row(v), pair_row(&u2)]).kernel_basis();
        let u3 = combo(&perp2, rng);
        let frame = Matrix::from_rows(k.clone(), vec![v.to_vec(), u2, u3]);
        if frame.rank() != 3 {
            continue;
        }
        debug_assert!(sp.is_lagrangian_frame(&frame.transpose()));
        return frame;
    }
}

/// A linear system of k independent hyperplane forms, optionally witnessed:
/// each form may carry a certified nodal pivot whose conic governs the
/// vertex locus on the pivot plane.
#[derive(Clone, Debug)]
pub struct LinearSectionSetup<K: Field> {
    forms: Vec<DualForm<K>>,
    three_forms: Vec<MultiVector<K>>,
    witnesses: Vec<Option<NodalWitness<K>>>,
}

impl<K: Field> LinearSectionSetup<K> {
    pub fn k(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[DualForm<K>] {
        &self.forms
    }

    /// The forms as honest 3-forms, cached for scans.
    pub fn three_forms(&self) -> &[MultiVector<K>] {
        &self.three_forms
    }

    pub fn witness(&self, index: usize) -> Option<&NodalWitness<K>> {
        self.witnesses.get(index).and_then(|w| w.as_ref())
    }

    pub fn witnesses(&self) -> &[Option<NodalWitness<K>>] {
        &self.witnesses
    }
}

fn check_independent<K: Field>(forms: &[DualForm<K>]) -> Result<(), IncidenceError> {
    let k = forms[0].field().clone();
    let rows: Vec<Vec<K::Elem>> = forms.iter().map(|f| f.coords().to_vec()).collect();
    let rank = Matrix::from_rows(k, rows).rank();
    if rank != forms.len() {
        return Err(IncidenceError::DependentForms {
            k: forms.len(),
            rank,
        });
    }
    Ok(())
}

/// Assemble a linear system from bare forms: checks 2 ≤ k ≤ 5 and linear
/// independence.
pub fn setup_from_forms<K: Field>(
    forms: Vec<DualForm<K>>,
) -> Result<LinearSectionSetup<K>, IncidenceError> {
    assert!(
        (2..=5).contains(&forms.len()),
        "linear systems have between 2 and 5 forms"
    );
    check_independent(&forms)?;
    let three_forms = forms.iter().map(|f| f.to_three_form()).collect();
    let witnesses = vec![None; forms.len()];
    Ok(LinearSectionSetup {
        forms,
        three_forms,
        witnesses,
    })
}

/// Assemble a witnessed linear system: besides independence, every pivot
/// must pair nonzero with at least one other form of the system, so that the
/// pivot avoids the common orthogonal and its plane meets the vertex locus
/// in the witnessed conic.
pub fn setup_from_witnesses<K: Field>(
    witnesses: Vec<NodalWitness<K>>,
) -> Result<LinearSectionSetup<K>, IncidenceError> {
    let forms: Vec<DualForm<K>> = witnesses.iter().map(|w| w.omega.clone()).collect();
    let base = setup_from_forms(forms)?;
    let k = base.forms[0].field().clone();
    for (i, w) in witnesses.iter().enumerate() {
        let clears = (0..base.forms.len())
            .any(|j| j != i && !k.is_zero(&base.forms[j].pair(&w.pivot)));
        if !clears {
            return Err(IncidenceError::PivotInsideOrthogonal { index: i });
        }
    }
    Ok(LinearSectionSetup {
        witnesses: witnesses.into_iter().map(Some).collect(),
        ..base
    })
}

/// A generic witnessed system built backwards: k random points of Σ, a nodal
/// hyperplane at each, redrawn until the independence and pivot-position
/// checks pass.
pub fn random_setup<K: Field, R: Rng + ?Sized>(
    sp: &SymplecticForm<K>,
    k: usize,
    rng: &mut R,
) -> LinearSectionSetup<K> {
    assert!((2..=5).contains(&k), "linear systems have between 2 and 5 forms");
    for _ in 0..64 {
        let witnesses: Vec<NodalWitness<K>> = (0..k)
            .map(|_| {
                let pivot = random_sigma_point(sp, rng);
                nodal_dual_form(sp, &pivot, rng)
            })
            .collect();
        if let Ok(setup) = setup_from_witnesses(witnesses) {
            return setup;
        }
    }
    panic!("could not assemble a generic witnessed system in 64 draws");
}

/// One degenerate point found by a scan: projective coordinates (first
/// nonzero coordinate 1) and the rank of the stacked value matrix there.
#[derive(Clone, Debug)]
pub struct ScanRecord<K: Field> {
    pub point: Vec<K::Elem>,
    pub rank: usize,
}

/// Aggregated result of a degeneracy scan over P⁵: per-rank counts, the
/// degenerate points themselves (capped), and the count of points falling
/// below the generic bound rank ≥ k−1.
#[derive(Clone, Debug)]
pub struct DegeneracyScan<K: Field> {
    pub k: usize,
    pub exhaustive: bool,
    pub scanned: u64,
    pub space_size: Option<u128>,
    pub rank_counts: BTreeMap<usize, u64>,
    pub below_generic: u64,
    pub degenerate: Vec<ScanRecord<K>>,
    pub truncated: bool,
}

impl<K: Field> DegeneracyScan<K> {
    fn empty(k: usize, exhaustive: bool) -> Self {
        DegeneracyScan {
            k,
            exhaustive,
            scanned: 0,
            space_size: None,
            rank_counts: BTreeMap::new(),
            below_generic: 0,
            degenerate: Vec::new(),
            truncated: false,
        }
    }

    fn record(&mut self, point: &[K::Elem], rank: usize) {
        *self.rank_counts.entry(rank).or_insert(0) += 1;
        self.scanned += 1;
        if rank + 1 < self.k {
            self.below_generic += 1;
        }
        if rank < self.k {
            if self.degenerate.len() < MAX_SCAN_RECORDS {
                self.degenerate.push(ScanRecord {
                    point: point.to_vec(),
                    rank,
                });
            } else {
                self.truncated = true;
            }
        }
    }

    /// Number of scanned points on the vertex locus (rank ≤ k−1).
    pub fn degenerate_count(&self) -> u64 {
        self.rank_counts
            .iter()
            .filter(|(r, _)| **r < self.k)
            .map(|(_, c)| *c)
            .sum()
    }

    /// CSV listing of the degenerate points: coordinates, rank, and the
    /// stratum label "rank-r".
    pub fn to_csv(&self, field: &K) -> String {
        let mut out = String::from("x0,x1,x2,x3,x4,x5,rank,stratum\n");
        for rec in &self.degenerate {
            let coords: Vec<String> = rec.point.iter().map(|c| field.fmt_elem(c)).collect();
            out.push_str(&format!(
                "{},{},rank-{}\n",
                coords.join(","),
                rec.rank,
                rec.rank
            ));
        }
        out
    }
}

/// Visit every point of P^{n−1} over an enumerable field, first nonzero
/// coordinate normalized to 1, in a fixed deterministic order. Returns the
/// number of points visited.
fn for_each_projective_point<K: Field>(
    field: &K,
    n: usize,
    mut f: impl FnMut(&[K::Elem]),
) -> Result<u128, IncidenceError> {
    let elems = field.enumerate_all().ok_or(IncidenceError::NotEnumerable)?;
    let mut size = 0u128;
    let mut coords = vec![field.zero(); n];
    for lead in 0..n {
        let free = n - lead - 1;
        for c in coords.iter_mut() {
            *c = field.zero();
        }
        coords[lead] = field.one();
        let mut digits = vec![0usize; free];
        'odometer: loop {
            for (d, &di) in digits.iter().enumerate() {
                coords[lead + 1 + d] = elems[di].clone();
            }
            f(&coords);
            size += 1;
            let mut pos = 0;
            while pos < free {
                digits[pos] += 1;
                if digits[pos] < elems.len() {
                    continue 'odometer;
                }
                digits[pos] = 0;
                pos += 1;
            }
            break;
        }
    }
    Ok(size)
}

/// A uniform random point of P⁵: sample six coordinates, reject zero,
/// normalize the first nonzero coordinate to 1.
pub fn random_projective_point<K: Field, R: Rng + ?Sized>(
    field: &K,
    rng: &mut R,
) -> Vec<K::Elem> {
    loop {
        let coords: Vec<K::Elem> = (0..6).map(|_| field.sample(rng)).collect();
        if let Some(lead) = coords.iter().position(|c| !field.is_zero(c)) {
            let inv = field.inv(&coords[lead]).expect("nonzero coordinate");
            return coords.iter().map(|c| field.mul(c, &inv)).collect();
        }
    }
}

fn projective_space_size(field: &FieldDescriptor, n: usize) -> Option<u128> {
    match field {
        FieldDescriptor::Rationals => None,
        FieldDescriptor::Prime(p) => {
            let mut size = 0u128;
            let mut power = 1u128;
            for _ in 0..n {
                size = size.checked_add(power)?;
                power = power.checked_mul(*p as u128)?;
            }
            Some(size)
        }
    }
}

/// Exhaustive degeneracy scan over all of P⁵(F_p): every point's stacked
/// rank is computed and aggregated in enumeration order.
pub fn vertex_scan_exhaustive<K: Field>(
    sp: &SymplecticForm<K>,
    setup: &LinearSectionSetup<K>,
) -> Result<DegeneracyScan<K>, IncidenceError> {
    let mut scan = DegeneracyScan::empty(setup.k(), true);
    let size = for_each_projective_point(sp.field(), 6, |v| {
        let rank = section_rank(sp, setup.three_forms(), v);
        scan.record(v, rank);
    })?;
    scan.space_size = Some(size);
    Ok(scan)
}

/// Sampled degeneracy scan: the given number of uniform points of P⁵, with
/// the total space size reported alongside for coverage.
pub fn vertex_scan_sampled<K: Field, R: Rng + ?Sized>(
    sp: &SymplecticForm<K>,
    setup: &LinearSectionSetup<K>,
    samples: usize,
    rng: &mut R,
) -> DegeneracyScan<K> {
    let mut scan = DegeneracyScan::empty(setup.k(), false);
    for _ in 0..samples {
        let v = random_projective_point(sp.field(), rng);
        let rank = section_rank(sp, setup.three_forms(), &v);
        scan.record(&v, rank);
    }
    scan.space_size = projective_space_size(&sp.field().descriptor(), 6);
    scan
}

/// The points (s:t:u) of the witnessed pivot plane where the stacked system
/// degenerates to rank ≤ k−1, enumerated exhaustively over the plane.
pub fn plane_degenerate_points<K: Field>(
    sp: &SymplecticForm<K>,
    setup: &LinearSectionSetup<K>,
    index: usize,
) -> Result<Vec<Vec<K::Elem>>, IncidenceError> {
    let witness = setup
        .witness(index)
        .ok_or(IncidenceError::MissingWitness { index })?;
    let k = sp.field().clone();
    let frame = witness.frame.clone();
    let mut out = Vec::new();
    for_each_projective_point(sp.field(), 3, |stu| {
        let v: Vec<K::Elem> = (0..6)
            .map(|c| {
                let mut acc = k.zero();
                for (r, s) in stu.iter().enumerate() {
                    acc = k.add(&acc, &k.mul(s, frame.get(r, c)));
                }
                acc
            })
            .collect();
        if section_rank(sp, setup.three_forms(), &v) < setup.k() {
            out.push(stu.to_vec());
        }
    })?;
    Ok(out)
}

/// The points (s:t:u) of P² where the symmetric 3×3 form vanishes.
pub fn conic_zero_set<K: Field>(
    field: &K,
    conic: &Matrix<K>,
) -> Result<Vec<Vec<K::Elem>>, IncidenceError> {
    assert_eq!((conic.nrows(), conic.ncols()), (3, 3));
    let mut out = Vec::new();
    for_each_projective_point(field, 3, |stu| {
        let image = conic.mul_vec(stu);
        let mut value = field.zero();
        for (a, b) in stu.iter().zip(image.iter()) {
            value = field.add(&value, &field.mul(a, b));
        }
        if field.is_zero(&value) {
            out.push(stu.to_vec());
        }
    })?;
    Ok(out)
}

/// The conic cut by the vertex locus on a witnessed pivot plane: for a
/// witness whose form lies in the span of the system, returns q_ω(U_pivot)
/// in the witness frame's row basis. A rank below 3 flags a form outside
/// the open nodal stratum of the dual.
pub fn conic_fiber<K: Field>(
    sp: &SymplecticForm<K>,
    witness: &NodalWitness<K>,
    setup: &LinearSectionSetup<K>,
) -> Result<Matrix<K>, IncidenceError> {
    let k = sp.field().clone();
    let mut rows: Vec<Vec<K::Elem>> = setup.forms.iter().map(|f| f.coords().to_vec()).collect();
    rows.push(witness.omega.coords().to_vec());
    if Matrix::from_rows(k, rows).rank() != setup.k() {
        return Err(IncidenceError::FormOutsideSystem);
    }
    let conic = q_omega(sp, &witness.omega, &witness.frame);
    let rank = conic.rank();
    if rank < 3 {
        return Err(IncidenceError::ConicRank { rank });
    }
    Ok(conic)
}

fn det5<K: Field>(field: &K, m: &Matrix<K>, cols: &[usize]) -> K::Elem {
    let sub = Matrix::from_fn(field.clone(), 5, 5, |r, c| m.get(r, cols[c]).clone());
    sub.det()
}

fn random_pair_subset<R: Rng + ?Sized>(rng: &mut R) -> Vec<usize> {
    let mut set = BTreeSet::new();
    while set.len() < 6 {
        set.insert(rng.gen_range(0..15usize));
    }
    set.into_iter().collect()
}

fn random_three_form<K: Field, R: Rng + ?Sized>(field: &K, rng: &mut R) -> MultiVector<K> {
    let masks = basis_masks(6, 3);
    MultiVector::from_terms(
        field.clone(),
        6,
        3,
        masks.iter().map(|&m| (m, field.sample(rng))),
    )
}

/// Monic generator of the divisor cut on the line {a + t·b} by the locus
/// where five independent sections drop rank. The moving fiber is sampled
/// through Cramer kernel vectors of the divisibility matrix, the 5×5
/// pairing determinant is interpolated from 31 nodes, and the sampling
/// frame's own degeneration divisor — the common content against reference
/// functional frames — is divided out exactly.
pub fn line_section_determinant<K: Field, R: Rng + ?Sized>(
    sp: &SymplecticForm<K>,
    setup: &LinearSectionSetup<K>,
    a: &[K::Elem],
    b: &[K::Elem],
    rng: &mut R,
) -> Result<UniPoly<K>, IncidenceError> {
    assert_eq!(setup.k(), 5, "the line determinant needs a full system of 5 forms");
    let k = sp.field().clone();
    assert_direction(&k, a);
    assert_direction(&k, b);
    assert_eq!(
        Matrix::from_rows(k.clone(), vec![a.to_vec(), b.to_vec()]).rank(),
        2,
        "the two points must span a line"
    );
    let nodes: Vec<K::Elem> = (0..31).map(|i| k.from_i64(i)).collect();
    for (i, x) in nodes.iter().enumerate() {
        for y in nodes.iter().skip(i + 1) {
            assert!(x != y, "the field is too small for 31 interpolation nodes");
        }
    }
    let masks2 = basis_masks(6, 2);
    let masks3 = basis_masks(6, 3);
    let point_at = |t: &K::Elem| -> Vec<K::Elem> {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| k.add(x, &k.mul(t, y)))
            .collect()
    };

    'attempt: for attempt in 0..4 {
        let probe = point_at(&nodes[attempt]);
        let full = divisibility_matrix(sp, &probe);
        let mut drop_row = None;
        for d in 0..6 {
            let rows: Vec<Vec<K::Elem>> = (0..6)
                .filter(|r| *r != d)
                .map(|r| full.row(r).to_vec())
                .collect();
            if Matrix::from_rows(k.clone(), rows).rank() == 5 {
                drop_row = Some(d);
                break;
            }
        }
        let Some(drop_row) = drop_row else { continue };

        let reduced_at = |v: &[K::Elem]| -> Matrix<K> {
            let full = divisibility_matrix(sp, v);
            let rows: Vec<Vec<K::Elem>> = (0..6)
                .filter(|r| *r != drop_row)
                .map(|r| full.row(r).to_vec())
                .collect();
            Matrix::from_rows(k.clone(), rows)
        };
        let kernel_wedge = |v: &[K::Elem], m5: &Matrix<K>, cols: &[usize]| -> MultiVector<K> {
            let eta = MultiVector::from_terms(
                k.clone(),
                6,
                2,
                cols.iter().enumerate().map(|(pos, &c)| {
                    let others: Vec<usize> =
                        cols.iter().copied().filter(|&o| o != c).collect();
                    let minor = det5(&k, m5, &others);
                    let signed = if pos % 2 == 1 { k.neg(&minor) } else { minor };
                    (masks2[c], signed)
                }),
            );
            MultiVector::vector(k.clone(), v).wedge(&eta)
        };

        let probe_m5 = reduced_at(&probe);
        let mut subsets = None;
        for _ in 0..50 {
            let trial: Vec<Vec<usize>> = (0..5).map(|_| random_pair_subset(rng)).collect();
            let wedges: Vec<MultiVector<K>> = trial
                .iter()
                .map(|c| kernel_wedge(&probe, &probe_m5, c))
                .collect();
            let rows: Vec<Vec<K::Elem>> =
                wedges.iter().map(|w| w.dense_coords(&masks3)).collect();
            if Matrix::from_rows(k.clone(), rows).rank() == 5 {
                subsets = Some(trial);
                break;
            }
        }
        let Some(subsets) = subsets else { continue };

        let references: Vec<Vec<MultiVector<K>>> = (0..3)
            .map(|_| (0..5).map(|_| random_three_form(&k, rng)).collect())
            .collect();

        let mut section_values = Vec::with_capacity(nodes.len());
        let mut reference_values = vec![Vec::with_capacity(nodes.len()); 3];
        for t in &nodes {
            let v = point_at(t);
            let m5 = reduced_at(&v);
            let wedges: Vec<MultiVector<K>> = subsets
                .iter()
                .map(|c| kernel_wedge(&v, &m5, c))
                .collect();
            let det_against = |functionals: &[MultiVector<K>]| -> K::Elem {
                Matrix::from_fn(k.clone(), 5, 5, |r, c| functionals[r].dual_pair(&wedges[c]))
                    .det()
            };
            section_values.push(det_against(setup.three_forms()));
            for (r, reference) in references.iter().enumerate() {
                reference_values[r].push(det_against(reference));
            }
        }

        let pairs =
            |ys: &[K::Elem]| -> Vec<(K::Elem, K::Elem)> { nodes.iter().cloned().zip(ys.iter().cloned()).collect() };
        let section_poly = UniPoly::interpolate(k.clone(), &pairs(&section_values));
        if section_poly.is_zero() {
            continue 'attempt;
        }
        let reference_polys: Vec<UniPoly<K>> = reference_values
            .iter()
            .map(|ys| UniPoly::interpolate(k.clone(), &pairs(ys)))
            .collect();
        if reference_polys.iter().any(|p| p.is_zero()) {
            continue 'attempt;
        }
        let content = reference_polys[0]
            .gcd(&reference_polys[1])
            .gcd(&reference_polys[2]);
        let (quotient, remainder) = section_poly.div_rem(&content);
        if !remainder.is_zero() || quotient.is_zero() {
            continue 'attempt;
        }
        return Ok(quotient.monic());
    }
    Err(IncidenceError::LineDeterminant { tries: 4 })
}
