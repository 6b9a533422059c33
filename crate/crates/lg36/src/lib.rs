//! Exact-arithmetic laboratory for the Lagrangian Grassmannian LG(3,6) ⊂ P¹³.
//!
//! The crate builds, from scratch and over exact coefficient fields (arbitrary-
//! precision rationals or an odd prime field F_p), the linear-algebra side of
//! the geometry of Σ = LG(3,6):
//!
//! * [`field`] / [`matrix`] — exact scalars and fraction-free linear algebra;
//! * [`exterior`] — multivectors of C⁶, the symplectic form, the splitting
//!   ∧³C⁶ = V(14) ⊕ V(6);
//! * [`sigma`] — the 14 coordinates of Σ, its 21 quadrics, the invariant
//!   quartic f, the four-orbit stratification, tangent spaces and nodal
//!   hyperplane sections;
//! * [`gr26`] — the Pfaffian cubic of G(2,6), kernel 2-vectors, Pfaffian
//!   planes and the Veronese singular locus of the projected 5-fold;
//! * [`projection`] — the rank-2 section bundle of a nodal hyperplane section
//!   and the fit certifying that its Grassmannian map is projection from the
//!   node;
//! * [`incidence`] — the rank-5 incidence bundle over P⁵ and the vertex
//!   degeneracy loci Y(k);
//! * [`pencil`] — simultaneous diagonalization of generic pencils of 2-forms
//!   and the Segre family of common Lagrangian subspaces;
//! * [`enumerative`] — the small cohomology-ring computations behind the
//!   degree bookkeeping (deg Σ = 16, deg G(2,6) = 14, vertex degrees, the
//!   Brill–Noether number 42);
//! * [`report`] — seeded, deterministic verification runs backing the CLI.
//!
//! Everything is exact: no floating point enters any computation.

pub mod enumerative;
pub mod exterior;
pub mod field;
pub mod gr26;
pub mod incidence;
pub mod matrix;
pub mod pencil;
pub mod poly;
pub mod projection;
pub mod report;
pub mod sigma;

pub use field::{Field, FieldDescriptor, FieldError, Fp, Rationals};
pub use matrix::Matrix;
