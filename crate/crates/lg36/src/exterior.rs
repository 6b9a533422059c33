//! Exterior powers ∧^k K^n with exact coefficients, the symplectic form on
//! K⁶, and the operators built from it: the correlation ∧^k V ≅ ∧^k V*, the
//! contraction ∧³V → V, the splitting ∧³V = V(14) ⊕ V(6), and exact random
//! symplectic group elements.
//!
//! A multivector stores only its nonzero coordinates, keyed by the bitmask of
//! a strictly increasing index tuple (indices are 0-based; the classical
//! basis vector e₁∧e₂∧e₄ is `basis(field, 6, &[0, 1, 3])`). Signs of
//! reorderings are computed by inversion counting, so all identities hold
//! exactly over any [`Field`].

use crate::field::Field;
use crate::matrix::Matrix;
use rand::Rng;
use std::collections::BTreeMap;

/// Sorted index tuples of a bitmask, lowest first.
pub fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

/// All C(n,k) basis masks, ordered lexicographically by index tuple.
pub fn basis_masks(n: usize, k: usize) -> Vec<u32> {
    fn rec(n: usize, k: usize, start: usize, acc: u32, out: &mut Vec<u32>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..=n - k {
            rec(n, k - 1, i + 1, acc | 1 << i, out);
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(n, k, 0, 0, &mut out);
    }
    out
}

/// Sign (+1/−1 as bool `negative`) and mask of a possibly unsorted index
/// tuple; `None` when an index repeats.
fn sort_sign(indices: &[usize]) -> Option<(u32, bool)> {
    let mut mask = 0u32;
    let mut inversions = 0usize;
    for (pos, &i) in indices.iter().enumerate() {
        assert!(i < 32, "index out of range");
        if mask >> i & 1 == 1 {
            return None;
        }
        inversions += indices[..pos].iter().filter(|&&j| j > i).count();
        mask |= 1 << i;
    }
    Some((mask, inversions % 2 == 1))
}

/// Sign of merging two disjoint sorted tuples: (−1)^{inversions}.
fn merge_parity(m1: u32, m2: u32) -> bool {
    let mut inv = 0u32;
    let mut rest = m2;
    while rest != 0 {
        let j = rest.trailing_zeros();
        inv += (m1 >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    inv % 2 == 1
}

#[derive(Clone, PartialEq)]
pub struct MultiVector<K: Field> {
    field: K,
    n: usize,
    k: usize,
    coeffs: BTreeMap<u32, K::Elem>,
}

impl<K: Field> std::fmt::Debug for MultiVector<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .to_pairs()
            .into_iter()
            .map(|(idx, c)| {
                let labels: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
                format!("{}*e[{}]", c, labels.join(","))
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl<K: Field> MultiVector<K> {
    pub fn zero(field: K, n: usize, k: usize) -> Self {
        assert!(k <= n, "degree exceeds ambient dimension");
        MultiVector {
            field,
            n,
            k,
            coeffs: BTreeMap::new(),
        }
    }

    /// Basis multivector e_{i₁} ∧ … ∧ e_{i_k} for 0-based indices, with the
    /// sign of sorting applied. Panics on a repeated index.
    pub fn basis(field: K, n: usize, indices: &[usize]) -> Self {
        let (mask, negative) = sort_sign(indices).expect("repeated index in basis tuple");
        assert!(indices.iter().all(|&i| i < n), "index out of range");
        let one = field.one();
        let c = if negative { field.neg(&one) } else { one };
        let mut mv = Self::zero(field, n, indices.len());
        mv.coeffs.insert(mask, c);
        mv
    }

    /// Degree-1 multivector from dense coordinates.
    pub fn vector(field: K, coords: &[K::Elem]) -> Self {
        let mut mv = Self::zero(field.clone(), coords.len(), 1);
        for (i, c) in coords.iter().enumerate() {
            if !field.is_zero(c) {
                mv.coeffs.insert(1 << i, c.clone());
            }
        }
        mv
    }

    pub fn from_terms(
        field: K,
        n: usize,
        k: usize,
        terms: impl IntoIterator<Item = (u32, K::Elem)>,
    ) -> Self {
        let mut mv = Self::zero(field, n, k);
        for (mask, c) in terms {
            assert_eq!(mask.count_ones() as usize, k, "mask degree mismatch");
            assert!(mask >> n == 0, "mask out of range");
            mv.add_term(mask, c);
        }
        mv
    }

    fn add_term(&mut self, mask: u32, c: K::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.coeffs.entry(mask) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = self.field.add(e.get(), &c);
                if self.field.is_zero(&v) {
                    e.remove();
                } else {
                    e.insert(v);
                }
            }
        }
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &K::Elem)> {
        self.coeffs.iter().map(|(&m, c)| (m, c))
    }

    /// Coefficient of the sorted tuple behind `mask`.
    pub fn coeff_mask(&self, mask: u32) -> K::Elem {
        self.coeffs
            .get(&mask)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Signed coefficient of an arbitrary (possibly unsorted) index tuple.
    pub fn coeff(&self, indices: &[usize]) -> K::Elem {
        match sort_sign(indices) {
            None => self.field.zero(),
            Some((mask, negative)) => {
                let c = self.coeff_mask(mask);
                if negative {
                    self.field.neg(&c)
                } else {
                    c
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.n, self.k), (other.n, other.k), "degree mismatch in add");
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = self.field.neg(c);
        }
        out
    }

    pub fn scale(&self, s: &K::Elem) -> Self {
        let mut out = Self::zero(self.field.clone(), self.n, self.k);
        for (m, c) in self.terms() {
            out.add_term(m, self.field.mul(c, s));
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "ambient dimension mismatch in wedge");
        assert!(self.k + other.k <= self.n, "wedge degree exceeds dimension");
        let k = &self.field;
        let mut out = Self::zero(k.clone(), self.n, self.k + other.k);
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                if m1 & m2 != 0 {
                    continue;
                }
                let c = k.mul(c1, c2);
                let c = if merge_parity(m1, m2) { k.neg(&c) } else { c };
                out.add_term(m1 | m2, c);
            }
        }
        out
    }

    /// Dual pairing of a k-vector with a k-form (coordinates over dual bases):
    /// Σ over matching index tuples of the coefficient product.
    pub fn dual_pair(&self, other: &Self) -> K::Elem {
        assert_eq!((self.n, self.k), (other.n, other.k), "pairing degree mismatch");
        let k = &self.field;
        let mut acc = k.zero();
        for (m, c) in self.terms() {
            acc = k.add(&acc, &k.mul(c, &other.coeff_mask(m)));
        }
        acc
    }

    /// Interior product by a degree-1 element of the dual space:
    /// ι_ξ(e_S) = Σ_{i∈S} (−1)^{#{j∈S : j<i}} ξ(e_i) · e_{S∖i}.
    pub fn interior(&self, xi: &Self) -> Self {
        assert_eq!(xi.k, 1, "interior product takes a degree-1 argument");
        assert_eq!(self.n, xi.n, "ambient dimension mismatch");
        assert!(self.k >= 1, "cannot contract a scalar");
        let k = &self.field;
        let mut out = Self::zero(k.clone(), self.n, self.k - 1);
        for (m, c) in self.terms() {
            for (xm, xc) in xi.terms() {
                if m & xm == 0 {
                    continue;
                }
                let below = (m & (xm - 1)).count_ones();
                let term = k.mul(c, xc);
                let term = if below % 2 == 1 { k.neg(&term) } else { term };
                out.add_term(m & !xm, term);
            }
        }
        out
    }

    /// Functorial action ∧^k M: each e_i is replaced by the i-th column of M.
    pub fn apply_linear(&self, m: &Matrix<K>) -> Self {
        assert_eq!(m.ncols(), self.n, "matrix must act on the ambient space");
        let k = &self.field;
        let cols: Vec<MultiVector<K>> = (0..m.ncols())
            .map(|j| {
                let coords: Vec<K::Elem> = (0..m.nrows()).map(|i| m.get(i, j).clone()).collect();
                MultiVector::vector(k.clone(), &coords)
            })
            .collect();
        let mut out = Self::zero(k.clone(), m.nrows(), self.k);
        for (mask, c) in self.terms() {
            let mut prod: Option<MultiVector<K>> = None;
            for i in mask_indices(mask) {
                prod = Some(match prod {
                    None => cols[i].clone(),
                    Some(p) => p.wedge(&cols[i]),
                });
            }
            let prod = prod.expect("degree ≥ 1 multivector");
            out = out.add(&prod.scale(c));
        }
        out
    }

    /// Dense coordinates in the order of `masks`.
    pub fn dense_coords(&self, masks: &[u32]) -> Vec<K::Elem> {
        masks.iter().map(|&m| self.coeff_mask(m)).collect()
    }

    /// Dense coordinates of a degree-1 multivector.
    pub fn to_vector(&self) -> Vec<K::Elem> {
        assert_eq!(self.k, 1, "to_vector requires degree 1");
        (0..self.n).map(|i| self.coeff_mask(1 << i)).collect()
    }

    /// Gram-style skew matrix M of a 2-vector: M_ij = coefficient of e_i∧e_j.
    pub fn skew_matrix(&self) -> Matrix<K> {
        assert_eq!(self.k, 2, "skew matrix requires degree 2");
        let k = &self.field;
        let mut m = Matrix::zero(k.clone(), self.n, self.n);
        for (mask, c) in self.terms() {
            let idx = mask_indices(mask);
            m.set(idx[0], idx[1], c.clone());
            m.set(idx[1], idx[0], k.neg(c));
        }
        m
    }

    /// Serialization form: (sorted index tuple, printed scalar) pairs in
    /// lexicographic tuple order.
    pub fn to_pairs(&self) -> Vec<(Vec<usize>, String)> {
        let mut pairs: Vec<(Vec<usize>, String)> = self
            .coeffs
            .iter()
            .map(|(&m, c)| (mask_indices(m), self.field.fmt_elem(c)))
            .collect();
        pairs.sort();
        pairs
    }
}

/// A symplectic form on K^n (n even), stored as its Gram matrix
/// J = (α(e_i, e_j)). The default is J = [[0, I₃], [−I₃, 0]] on K⁶, i.e.
/// α = x₁∧x₄ + x₂∧x₅ + x₃∧x₆.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticForm<K: Field> {
    field: K,
    gram: Matrix<K>,
}

impl<K: Field> SymplecticForm<K> {
    pub fn standard(field: K) -> Self {
        let mut gram = Matrix::zero(field.clone(), 6, 6);
        for i in 0..3 {
            gram.set(i, i + 3, field.one());
            gram.set(i + 3, i, field.neg(&field.one()));
        }
        SymplecticForm { field, gram }
    }

    pub fn from_gram(gram: Matrix<K>) -> Self {
        let field = gram.field().clone();
        assert_eq!(gram.nrows(), gram.ncols(), "Gram matrix must be square");
        assert!(
            gram.add(&gram.transpose()).is_zero(),
            "Gram matrix must be skew-symmetric"
        );
        assert!(!field.is_zero(&gram.det()), "Gram matrix must be invertible");
        SymplecticForm { field, gram }
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &Matrix<K> {
        &self.gram
    }

    /// The form as a 2-form Σ_{i<j} J_ij x_i∧x_j.
    pub fn two_form(&self) -> MultiVector<K> {
        let n = self.dim();
        let mut mv = MultiVector::zero(self.field.clone(), n, 2);
        for i in 0..n {
            for j in i + 1..n {
                mv.add_term(1 << i | 1 << j, self.gram.get(i, j).clone());
            }
        }
        mv
    }

    /// α(u, v) = uᵀ J v on coordinate vectors.
    pub fn pair(&self, u: &[K::Elem], v: &[K::Elem]) -> K::Elem {
        let k = &self.field;
        let jv = self.gram.mul_vec(v);
        let mut acc = k.zero();
        for i in 0..u.len() {
            acc = k.add(&acc, &k.mul(&u[i], &jv[i]));
        }
        acc
    }

    /// The correlation L_α: ∧^k V → ∧^k V*, induced by v ↦ α(v, ·) = Jᵀv.
    pub fn correlation(&self, w: &MultiVector<K>) -> MultiVector<K> {
        w.apply_linear(&self.gram.transpose())
    }

    /// Inverse correlation ∧^k V* → ∧^k V, induced by (Jᵀ)⁻¹.
    pub fn correlation_inv(&self, w: &MultiVector<K>) -> MultiVector<K> {
        let inv = self
            .gram
            .transpose()
            .inverse()
            .expect("Gram matrix is invertible");
        w.apply_linear(&inv)
    }

    /// The contraction ∧³V → V; on decomposables
    /// u∧v∧w ↦ α(u,v)w + α(v,w)u + α(w,u)v.
    pub fn contract_3vector(&self, w: &MultiVector<K>) -> MultiVector<K> {
        assert_eq!(w.degree(), 3, "contraction takes a 3-vector");
        assert_eq!(w.ambient_dim(), self.dim());
        let k = &self.field;
        let mut out = MultiVector::zero(k.clone(), self.dim(), 1);
        for (mask, c) in w.terms() {
            let idx = mask_indices(mask);
            let (a, b, cc) = (idx[0], idx[1], idx[2]);
            for (keep, p, q, flip) in [
                (cc, a, b, false),
                (a, b, cc, false),
                (b, a, cc, true),
            ] {
                let alpha = self.gram.get(p, q);
                if k.is_zero(alpha) {
                    continue;
                }
                let term = k.mul(c, alpha);
                let term = if flip { k.neg(&term) } else { term };
                out.add_term(1 << keep, term);
            }
        }
        out
    }

    /// Split w ∈ ∧³V into (kernel part, complement part) for the contraction:
    /// the first summand contracts to zero (dimension 14 over K⁶), the second
    /// lies in π∧V for the inverse-Gram bivector π (dimension 6).
    pub fn v14_decompose(&self, w: &MultiVector<K>) -> (MultiVector<K>, MultiVector<K>) {
        assert_eq!(w.degree(), 3, "splitting takes a 3-vector");
        let n = self.dim();
        assert!(n >= 4, "splitting needs dimension ≥ 4");
        let k = &self.field;
        let v = self.contract_3vector(w);
        // π = Σ_{i<j} (J⁻¹)_ij e_i∧e_j satisfies contraction(π∧u) = ((2−n)/2)·u
        // (−2u in dimension 6), so the complement projector is
        // w ↦ π ∧ contraction(w) · 2/(2−n).
        let jinv = self.gram.inverse().expect("Gram matrix is invertible");
        let mut pi = MultiVector::zero(k.clone(), n, 2);
        for i in 0..n {
            for j in i + 1..n {
                pi.add_term(1 << i | 1 << j, jinv.get(i, j).clone());
            }
        }
        let scale = k
            .div(&k.from_i64(2), &k.from_i64(2 - n as i64))
            .expect("dimension is not 2");
        let w6 = pi.wedge(&v).scale(&scale);
        let w14 = w.sub(&w6);
        (w14, w6)
    }

    /// Does S satisfy ᵀS·J·S = J exactly?
    pub fn is_symplectic(&self, s: &Matrix<K>) -> bool {
        s.transpose().mul(&self.gram).mul(s) == self.gram
    }

    /// Exact random symplectic matrix: a short random word in the generators
    /// [[A,0],[0,ᵀA⁻¹]] (A invertible), [[I,B],[0,I]] (B symmetric), and J.
    /// Only implemented for the standard form.
    pub fn random_symplectic<R: Rng + ?Sized>(&self, rng: &mut R) -> Matrix<K> {
        assert_eq!(
            *self,
            Self::standard(self.field.clone()),
            "generator words are tied to the standard Gram matrix"
        );
        let k = &self.field;
        let mut s = Matrix::identity(k.clone(), 6);
        let len = rng.gen_range(4..=8);
        for _ in 0..len {
            let g = match rng.gen_range(0..3u8) {
                0 => {
                    let (a, ainv) = loop {
                        let a = Matrix::from_fn(k.clone(), 3, 3, |_, _| k.sample(rng));
                        if let Some(inv) = a.inverse() {
                            break (a, inv);
                        }
                    };
                    let at_inv = ainv.transpose();
                    Matrix::from_fn(k.clone(), 6, 6, |r, c| match (r < 3, c < 3) {
                        (true, true) => a.get(r, c).clone(),
                        (false, false) => at_inv.get(r - 3, c - 3).clone(),
                        _ => k.zero(),
                    })
                }
                1 => {
                    let mut b = Matrix::zero(k.clone(), 3, 3);
                    for i in 0..3 {
                        for j in i..3 {
                            let v = k.sample(rng);
                            b.set(i, j, v.clone());
                            b.set(j, i, v);
                        }
                    }
                    Matrix::from_fn(k.clone(), 6, 6, |r, c| {
                        if r == c {
                            k.one()
                        } else if r < 3 && c >= 3 {
                            b.get(r, c - 3).clone()
                        } else {
                            k.zero()
                        }
                    })
                }
                _ => self.gram.clone(),
            };
            s = s.mul(&g);
        }
        debug_assert!(self.is_symplectic(&s));
        s
    }

    /// Are the columns of U (n×m) independent and pairwise α-orthogonal?
    pub fn is_lagrangian_frame(&self, u: &Matrix<K>) -> bool {
        u.rank() == u.ncols() && u.transpose().mul(&self.gram).mul(u).is_zero()
    }

    /// Extend a Lagrangian frame u₁,u₂,u₃ (columns of a 6×3 matrix) to a
    /// symplectic matrix [u₁ u₂ u₃ w₁ w₂ w₃]: α(u_i, w_j) = δ_ij and
    /// α(w_i, w_j) = 0.
    pub fn complete_to_symplectic(&self, u: &Matrix<K>) -> Matrix<K> {
        assert_eq!(self.dim(), 6);
        assert_eq!((u.nrows(), u.ncols()), (6, 3), "frame must be 6×3");
        assert!(self.is_lagrangian_frame(u), "frame must be Lagrangian");
        let k = &self.field;
        // α(u_i, v) = (UᵀJ v)_i; pick any preimages of the standard basis.
        let m = u.transpose().mul(&self.gram);
        let v: Vec<Vec<K::Elem>> = (0..3)
            .map(|j| {
                let e: Vec<K::Elem> = (0..3).map(|i| k.from_i64((i == j) as i64)).collect();
                m.solve(&e).expect("α is nondegenerate and the frame has rank 3")
            })
            .collect();
        // Correct w_j = v_j − Σ_i c_ij u_i with c = −α(v_i, v_j)/2 so the
        // w-block is isotropic; the cross pairings α(u_i, w_j) are untouched.
        let half = k.inv(&k.from_i64(2)).expect("characteristic is not 2");
        let mut w = v.clone();
        for j in 0..3 {
            for i in 0..3 {
                let c = k.neg(&k.mul(&self.pair(&v[i], &v[j]), &half));
                for r in 0..6 {
                    let t = k.mul(&c, u.get(r, i));
                    w[j][r] = k.sub(&w[j][r], &t);
                }
            }
        }
        let t = Matrix::from_fn(k.clone(), 6, 6, |r, c| {
            if c < 3 {
                u.get(r, c).clone()
            } else {
                w[c - 3][r].clone()
            }
        });
        debug_assert!(self.is_symplectic(&t));
        t
    }
}
