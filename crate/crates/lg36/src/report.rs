//! Reproducible verification runs.
//!
//! A run executes a fixed sequence of named checks — quadric generation of
//! the Lagrangian 6-fold, the linearity of projection from a node, the
//! incidence-bundle degeneracy loci, pencil diagonalization, and the exact
//! enumerative tables — and aggregates the outcomes into a versioned report
//! serializable as JSON or CSV.
//!
//! Determinism: every check draws from its own ChaCha stream seeded by the
//! run seed combined with a hash of the check id, and elapsed times are
//! reported as 0 unless timing is requested, so two runs with identical
//! configuration produce byte-identical JSON.
//!
//! Statuses distinguish mathematical violations (`fail`) from honest
//! sampling shortfalls (`anomaly`): a conic with no rational point or a
//! field too small to interpolate on leaves a claim uncertified without
//! contradicting it.

use std::any::Any;
use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num::bigint::BigInt;
use num::rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::enumerative::{
    brill_noether_degree, chern_polynomial_string, gr26_degree, rectangle_tableaux,
    serre_involution_pairs, sigma_ring_degree, vertex_degrees, EnumerativeError,
    GradedQuotientRing, INCIDENCE_CHERN,
};
use crate::exterior::{basis_masks, MultiVector, SymplecticForm};
use crate::field::{Field, FieldDescriptor, Fp, Rationals};
use crate::gr26::{quadric_in_z, PfaffianPlane};
use crate::incidence::{
    conic_fiber, e_fiber, line_section_determinant, plane_degenerate_points,
    random_lagrangian_through, random_projective_point, random_setup, section_rank,
    section_vanishes, vertex_scan_exhaustive, vertex_scan_sampled, DegeneracyScan,
    EXHAUSTIVE_PRIME_LIMIT,
};
use crate::matrix::Matrix;
use crate::pencil::{common_lagrangian_test, pencil_diagonalize, segre_degree};
use crate::poly::IntPoly;
use crate::projection::{
    apply_to_coords, conic_point, coords_proportional, dropped_coordinate, fit_projection,
    fit_quadrics, gr_point, plane_from_fit, projected_coords, quadric_monomials,
    section_solutions, section_space, standard_form, ProjectionError, ProjectionFit,
    SectionSpace,
};
use crate::sigma::{
    chart_point, dual_classify, nodal_dual_form, orbit_classify, quartic_f, quartic_partials,
    random_sigma_point, sample_h_omega_chart, sigma_quadrics, tangent_cone_rank, tangent_space,
    x_idx, y_idx, DualForm, Orbit, SigmaPoint, COORD_NAMES, NUM_COORDS, U_IDX, Z_IDX,
};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Largest prime for which the degeneracy scan walks all of P⁵ instead of
/// sampling: P⁵(F₁₃) has 402,234 points, P⁵(F₁₇) already 1.5 million.
pub const SCAN_EXHAUSTIVE_PRIME_LIMIT: u64 = 13;

/// The coefficient field of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldChoice {
    Rationals,
    Prime(u64),
}

impl FieldChoice {
    /// Parses `"q"` or `"fp:<p>"`, validating that `p` is prime.
    pub fn parse(s: &str) -> Result<FieldChoice, String> {
        if s == "q" {
            return Ok(FieldChoice::Rationals);
        }
        if let Some(rest) = s.strip_prefix("fp:") {
            let p: u64 = rest
                .parse()
                .map_err(|_| format!("field modulus is not an integer: {rest:?}"))?;
            Fp::new(p).map_err(|e| e.to_string())?;
            return Ok(FieldChoice::Prime(p));
        }
        Err(format!("unknown field {s:?}: expected \"q\" or \"fp:<prime>\""))
    }

    pub fn is_rationals(&self) -> bool {
        matches!(self, FieldChoice::Rationals)
    }
}

impl fmt::Display for FieldChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldChoice::Rationals => write!(f, "q"),
            FieldChoice::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

/// Knobs of a verification run. Identical configurations yield identical
/// reports (byte for byte when `timings` is off).
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub field: FieldChoice,
    pub seed: u64,
    /// Budget for sampled scans and equivalence checks.
    pub samples: usize,
    /// Section points fed into the projection fit.
    pub fit_samples: usize,
    /// Held-out section points the fitted projection is certified on.
    pub holdout_samples: usize,
    /// Report wall-clock milliseconds per check (breaks byte-identity).
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            field: FieldChoice::Prime(1009),
            seed: 0,
            samples: 300,
            fit_samples: 200,
            holdout_samples: 50,
            timings: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The claim could not be certified with the available samples or field
    /// (for example a conic without rational points); nothing contradicts it.
    Anomaly,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckStatus::Pass => write!(f, "pass"),
            CheckStatus::Fail => write!(f, "fail"),
            CheckStatus::Anomaly => write!(f, "anomaly"),
        }
    }
}

/// One named check: a stable id, a one-sentence statement of the verified
/// property, the outcome, and structured evidence.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    pub status: CheckStatus,
    pub details: Value,
    pub elapsed_ms: u64,
}

/// A full run: configuration echo, aggregate verdict, and the check list.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub field: String,
    pub seed: u64,
    pub samples: usize,
    /// No check failed (anomalies do not count as failures).
    pub passed: bool,
    /// At least one check ended in an anomaly.
    pub anomalies: bool,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new(config: &RunConfig, checks: Vec<CheckRecord>) -> Self {
        let passed = checks.iter().all(|c| c.status != CheckStatus::Fail);
        let anomalies = checks.iter().any(|c| c.status == CheckStatus::Anomaly);
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            field: config.field.to_string(),
            seed: config.seed,
            samples: config.samples,
            passed,
            anomalies,
            checks,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// One row per check: `id,status,elapsed_ms,anchor,details` with the
    /// details compacted to a single JSON value.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,status,elapsed_ms,anchor,details\n");
        for c in &self.checks {
            let details = serde_json::to_string(&c.details).expect("details serialize");
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                csv_field(&c.id),
                c.status,
                c.elapsed_ms,
                csv_field(&c.anchor),
                csv_field(&details),
            ));
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn check_rng(config: &RunConfig, id: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(config.seed ^ fnv1a(id))
}

fn verdict(ok: bool) -> CheckStatus {
    if ok {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    }
}

fn panic_text(payload: Box<dyn Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "opaque panic payload".to_string()
    }
}

/// Runs one check body with its own deterministic random stream, converting
/// a panic into a failed record instead of aborting the whole run.
fn run_check(
    config: &RunConfig,
    id: &str,
    anchor: &str,
    body: impl FnOnce(&mut ChaCha8Rng) -> (CheckStatus, Value),
) -> CheckRecord {
    let mut rng = check_rng(config, id);
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(move || body(&mut rng)));
    let (status, details) = match outcome {
        Ok(r) => r,
        Err(payload) => (CheckStatus::Fail, json!({ "panic": panic_text(payload) })),
    };
    let elapsed_ms = if config.timings {
        start.elapsed().as_millis() as u64
    } else {
        0
    };
    CheckRecord {
        id: id.to_string(),
        anchor: anchor.to_string(),
        status,
        details,
        elapsed_ms,
    }
}

macro_rules! with_field {
    ($choice:expr, |$k:ident| $body:expr) => {
        match $choice {
            FieldChoice::Rationals => {
                let $k = Rationals;
                $body
            }
            FieldChoice::Prime(p) => {
                let $k = Fp::new(p).expect("field choices carry validated primes");
                $body
            }
        }
    };
}

// ---------------------------------------------------------------------------
// Shared generic helpers

fn random_symmetric<K: Field, R: Rng + ?Sized>(k: &K, rng: &mut R) -> Matrix<K> {
    let mut x = Matrix::zero(k.clone(), 3, 3);
    for i in 0..3 {
        for j in i..3 {
            let v = k.sample(rng);
            x.set(i, j, v.clone());
            x.set(j, i, v);
        }
    }
    x
}

fn conic_value<K: Field>(k: &K, gram: &Matrix<K>, v: &[K::Elem]) -> K::Elem {
    let image = gram.mul_vec(v);
    let mut acc = k.zero();
    for (a, b) in v.iter().zip(image.iter()) {
        acc = k.add(&acc, &k.mul(a, b));
    }
    acc
}

fn mv_eq<K: Field>(k: &K, a: &MultiVector<K>, b: &MultiVector<K>) -> bool {
    a.add(&b.scale(&k.from_i64(-1))).is_zero()
}

/// Representatives (1:t:u), (0:1:u), (0:0:1) of all points of P² over an
/// enumerable field.
fn plane_reps<K: Field>(k: &K) -> Option<Vec<Vec<K::Elem>>> {
    let all = k.enumerate_all()?;
    let mut out = Vec::new();
    for t in &all {
        for u in &all {
            out.push(vec![k.one(), t.clone(), u.clone()]);
        }
    }
    for u in &all {
        out.push(vec![k.zero(), k.one(), u.clone()]);
    }
    out.push(vec![k.zero(), k.zero(), k.one()]);
    Some(out)
}

fn plane_direction<K: Field>(k: &K, frame: &Matrix<K>, stu: &[K::Elem]) -> Vec<K::Elem> {
    (0..6)
        .map(|c| {
            let mut acc = k.zero();
            for (r, s) in stu.iter().enumerate() {
                acc = k.add(&acc, &k.mul(s, frame.get(r, c)));
            }
            acc
        })
        .collect()
}

fn point_key<K: Field>(k: &K, pt: &[K::Elem]) -> String {
    pt.iter()
        .map(|c| k.fmt_elem(c))
        .collect::<Vec<_>>()
        .join(",")
}

fn random_full_rank_frame<K: Field, R: Rng + ?Sized>(
    k: &K,
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Matrix<K> {
    loop {
        let m = Matrix::from_fn(k.clone(), rows, cols, |_, _| k.sample(rng));
        if m.rank() == rows {
            return m;
        }
    }
}

/// Distinct pencil roots: small integers over the rationals (so the root
/// search's bounded fraction candidates always contain them), uniform field
/// elements otherwise. `None` when the field is too small.
fn model_roots<K: Field, R: Rng + ?Sized>(k: &K, n: usize, rng: &mut R) -> Option<Vec<K::Elem>> {
    let mut out: Vec<K::Elem> = Vec::with_capacity(n);
    let mut budget = 64 * n.max(1);
    while out.len() < n && budget > 0 {
        budget -= 1;
        let c = match k.descriptor() {
            FieldDescriptor::Rationals => k.from_i64(rng.gen_range(-20i64..=20)),
            FieldDescriptor::Prime(_) => k.sample(rng),
        };
        if !out.contains(&c) {
            out.push(c);
        }
    }
    (out.len() == n).then_some(out)
}

/// The split model pencil on V(2n): α = Σ e_i∧e_{i+n} and α′ = Σ λ_i e_i∧e_{i+n}.
fn model_pencil<K: Field>(
    k: &K,
    n: usize,
    roots: &[K::Elem],
) -> (MultiVector<K>, MultiVector<K>) {
    let dim = 2 * n;
    let mut alpha = MultiVector::zero(k.clone(), dim, 2);
    let mut alpha_prime = MultiVector::zero(k.clone(), dim, 2);
    for (i, root) in roots.iter().enumerate() {
        let term = MultiVector::basis(k.clone(), dim, &[i, i + n]);
        alpha = alpha.add(&term);
        alpha_prime = alpha_prime.add(&term.scale(root));
    }
    (alpha, alpha_prime)
}

/// Whether two lists of two-vectors agree up to permutation and scale.
fn components_match<K: Field>(
    k: &K,
    masks: &[u32],
    xs: &[MultiVector<K>],
    ys: &[MultiVector<K>],
) -> bool {
    if xs.len() != ys.len() {
        return false;
    }
    let mut used = vec![false; ys.len()];
    'outer: for x in xs {
        let xd = x.dense_coords(masks);
        for (j, y) in ys.iter().enumerate() {
            if !used[j] && coords_proportional(k, &xd, &y.dense_coords(masks)) {
                used[j] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

// ---------------------------------------------------------------------------
// Runner: verify-sigma

/// Checks on the 6-fold itself: its 21 quadrics, the invariant quartic, the
/// four-orbit stratification, and the tangent-cone ranks of singular
/// hyperplane sections.
pub fn run_verify_sigma(config: &RunConfig) -> Vec<CheckRecord> {
    with_field!(config.field, |k| verify_sigma_impl(k, config))
}

fn verify_sigma_impl<K: Field>(k: K, config: &RunConfig) -> Vec<CheckRecord> {
    let sp = SymplecticForm::standard(k.clone());
    let mut records = Vec::new();

    records.push(run_check(
        config,
        "sigma-quadric-space",
        "The homogeneous ideal of the Lagrangian 6-fold in P13 is generated by 21 linearly independent quadrics.",
        |rng| {
            let n = config.samples.max(120);
            let points: Vec<Vec<K::Elem>> = (0..n)
                .map(|_| random_sigma_point(&sp, rng).coords().to_vec())
                .collect();
            let quadrics = sigma_quadrics();
            let all_vanish = points
                .iter()
                .all(|p| quadrics.iter().all(|q| k.is_zero(&q.eval(&k, p))));
            let fitted = fit_quadrics(&k, &points);
            let monomials = quadric_monomials(NUM_COORDS);
            let listed: Vec<Vec<K::Elem>> = quadrics
                .iter()
                .map(|q| {
                    monomials
                        .iter()
                        .map(|&(i, j)| {
                            let mut expo = vec![0u8; NUM_COORDS];
                            expo[i] += 1;
                            expo[j] += 1;
                            k.from_i64(q.coeff(&expo))
                        })
                        .collect()
                })
                .collect();
            let listed_rank = Matrix::from_rows(k.clone(), listed.clone()).rank();
            let mut stacked = listed;
            stacked.extend(fitted.iter().cloned());
            let combined_rank = Matrix::from_rows(k.clone(), stacked).rank();
            let ok = all_vanish
                && fitted.len() == 21
                && listed_rank == 21
                && combined_rank == 21;
            (
                verdict(ok),
                json!({
                    "points": n,
                    "all_listed_quadrics_vanish": all_vanish,
                    "fitted_dimension": fitted.len(),
                    "listed_rank": listed_rank,
                    "combined_rank": combined_rank,
                    "expected_dimension": 21,
                }),
            )
        },
    ));

    records.push(run_check(
        config,
        "sigma-quartic-tangency",
        "The invariant quartic contains every embedded tangent space of the 6-fold.",
        |rng| {
            let f = quartic_f();
            let trials = 100usize;
            let mut tested = 0usize;
            let mut violations = 0usize;
            let mut budget = 20 * trials;
            while tested < trials && budget > 0 {
                budget -= 1;
                let x = random_symmetric(&k, rng);
                let p = chart_point(&k, &x);
                let t = tangent_space(&sp, &p);
                let coeffs: Vec<K::Elem> = (0..t.nrows()).map(|_| k.sample(rng)).collect();
                let mut v = vec![k.zero(); NUM_COORDS];
                for (r, c) in coeffs.iter().enumerate() {
                    for col in 0..NUM_COORDS {
                        v[col] = k.add(&v[col], &k.mul(c, t.get(r, col)));
                    }
                }
                if v.iter().all(|c| k.is_zero(c)) {
                    continue;
                }
                tested += 1;
                if !k.is_zero(&f.eval(&k, &v)) {
                    violations += 1;
                }
            }
            (
                verdict(tested == trials && violations == 0),
                json!({ "tangent_points": tested, "violations": violations }),
            )
        },
    ));

    records.push(run_check(
        config,
        "sigma-singular-witness",
        "The singular locus of the invariant quartic strictly contains the 6-fold: a rank-one coordinate point annihilates all 14 partials yet violates a quadric.",
        |_rng| {
            let mut coords = [0i64; NUM_COORDS];
            coords[x_idx(1, 2)] = 1;
            let p = SigmaPoint::from_i64(k.clone(), &coords);
            let partials_vanish = quartic_partials()
                .iter()
                .all(|d| k.is_zero(&d.eval(&k, p.coords())));
            let off_sigma = sigma_quadrics()
                .iter()
                .any(|q| !k.is_zero(&q.eval(&k, p.coords())));
            let orbit = orbit_classify(&p);
            let ok = partials_vanish && off_sigma && orbit == Orbit::OmegaMinusSigma;
            (
                verdict(ok),
                json!({
                    "witness": COORD_NAMES[x_idx(1, 2)],
                    "all_partials_vanish": partials_vanish,
                    "some_quadric_nonzero": off_sigma,
                    "orbit": orbit.to_string(),
                }),
            )
        },
    ));

    records.push(run_check(
        config,
        "sigma-orbit-invariance",
        "The four orbit labels — the 6-fold, the singular stratum, the quartic, and the open complement — are constant along random symplectic transformations.",
        |rng| {
            let mut reps: Vec<(SigmaPoint<K>, Orbit)> = Vec::new();
            let mut origin = [0i64; NUM_COORDS];
            origin[U_IDX] = 1;
            reps.push((SigmaPoint::from_i64(k.clone(), &origin), Orbit::Sigma));
            let mut x23 = [0i64; NUM_COORDS];
            x23[x_idx(1, 2)] = 1;
            reps.push((SigmaPoint::from_i64(k.clone(), &x23), Orbit::OmegaMinusSigma));
            let mut rk3 = [0i64; NUM_COORDS];
            rk3[x_idx(0, 0)] = 1;
            rk3[x_idx(1, 1)] = 1;
            rk3[x_idx(2, 2)] = 1;
            reps.push((SigmaPoint::from_i64(k.clone(), &rk3), Orbit::FMinusOmega));
            let mut gen = [0i64; NUM_COORDS];
            gen[U_IDX] = 1;
            gen[Z_IDX] = 1;
            gen[x_idx(0, 0)] = 1;
            gen[y_idx(1, 1)] = 1;
            reps.push((SigmaPoint::from_i64(k.clone(), &gen), Orbit::Generic));

            let moves = 20usize;
            let mut mismatches = Vec::new();
            for (p, expected) in &reps {
                if orbit_classify(p) != *expected {
                    mismatches.push(json!({ "orbit": expected.to_string(), "moved": false }));
                }
                for _ in 0..moves {
                    let s = sp.random_symplectic(rng);
                    let moved =
                        SigmaPoint::from_three_vector(&p.to_three_vector().apply_linear(&s));
                    if orbit_classify(&moved) != *expected {
                        mismatches.push(json!({ "orbit": expected.to_string(), "moved": true }));
                    }
                }
            }
            (
                verdict(mismatches.is_empty()),
                json!({
                    "representatives": 4,
                    "moves_per_representative": moves,
                    "mismatches": mismatches,
                }),
            )
        },
    ));

    records.push(run_check(
        config,
        "sigma-dual-cone-ranks",
        "A hyperplane section singular at a fixed point has tangent-cone rank 6, 4, or 3 according to the stratum of its defining form.",
        |_rng| {
            let pivot = chart_point(&k, &Matrix::zero(k.clone(), 3, 3));
            let zero3 = Matrix::zero(k.clone(), 3, 3);
            let cases: [([i64; 3], usize, Orbit); 3] = [
                ([1, 1, 1], 6, Orbit::FMinusOmega),
                ([1, 1, 0], 4, Orbit::OmegaMinusSigma),
                ([1, 0, 0], 3, Orbit::Sigma),
            ];
            let mut rows = Vec::new();
            let mut ok = true;
            for (diag, expected_rank, expected_orbit) in &cases {
                let mut y = Matrix::zero(k.clone(), 3, 3);
                for (i, d) in diag.iter().enumerate() {
                    y.set(i, i, k.from_i64(*d));
                }
                let omega = DualForm::from_blocks(k.clone(), k.zero(), &zero3, &y, k.zero());
                let rank = tangent_cone_rank(&sp, &omega, &pivot);
                let orbit = dual_classify(&sp, &omega);
                ok &= rank == *expected_rank && orbit == *expected_orbit;
                rows.push(json!({
                    "diagonal": diag.to_vec(),
                    "tangent_cone_rank": rank,
                    "expected_rank": expected_rank,
                    "dual_orbit": orbit.to_string(),
                }));
            }
            (verdict(ok), json!({ "forms": rows }))
        },
    ));

    records
}

// ---------------------------------------------------------------------------
// Runner: verify-theorem-a

/// Checks on projection from a node of a singular hyperplane section: the
/// dimension of the section system, the fitted linear projection onto
/// Plücker coordinates of 2-planes, decomposability of fresh images, the
/// Pfaffian-zero plane in the kernel, and the quadrics through the image.
pub fn run_verify_theorem_a(config: &RunConfig) -> Vec<CheckRecord> {
    with_field!(config.field, |k| theorem_a_impl(k, config))
}

/// Fit sizes, scaled down over the rationals where exact arithmetic on the
/// 180-unknown linear system is markedly slower; 40 section points already
/// determine the projection (each contributes 14 equations).
fn fit_sizes(config: &RunConfig) -> (usize, usize) {
    if config.field.is_rationals() {
        (config.fit_samples.min(60), config.holdout_samples.min(15))
    } else {
        (config.fit_samples, config.holdout_samples)
    }
}

fn theorem_a_impl<K: Field>(k: K, config: &RunConfig) -> Vec<CheckRecord> {
    let sp = SymplecticForm::standard(k.clone());
    let mut records = Vec::new();

    records.push(run_check(
        config,
        "projection-section-dimension",
        "At a node of a hyperplane section, the system of two-forms attached to an isotropic direction solves to dimension 7, and to dimension 6 off the node conic.",
        |rng| {
            let mut wrong = Vec::new();
            let mut untested = 0usize;
            for trial in 0..5 {
                let pivot = random_sigma_point(&sp, rng);
                let witness = nodal_dual_form(&sp, &pivot, rng);
                let omega0 = standard_form(&witness);
                let gram = omega0.ystar_matrix();
                match conic_point(&k, &gram, rng, 64) {
                    Some(v3) => {
                        let mut v6 = v3.clone();
                        v6.extend((0..3).map(|_| k.zero()));
                        let x = sp.correlation(&MultiVector::vector(k.clone(), &v6));
                        let rows = section_solutions(&sp, &omega0, &x).nrows();
                        if rows != 7 {
                            wrong.push(json!({
                                "trial": trial, "direction": "isotropic", "rows": rows,
                            }));
                        }
                    }
                    None => untested += 1,
                }
                let mut found_off = false;
                for _ in 0..64 {
                    let v3: Vec<K::Elem> = (0..3).map(|_| k.sample(rng)).collect();
                    if v3.iter().all(|c| k.is_zero(c))
                        || k.is_zero(&conic_value(&k, &gram, &v3))
                    {
                        continue;
                    }
                    let mut v6 = v3.clone();
                    v6.extend((0..3).map(|_| k.zero()));
                    let x = sp.correlation(&MultiVector::vector(k.clone(), &v6));
                    let rows = section_solutions(&sp, &omega0, &x).nrows();
                    if rows != 6 {
                        wrong.push(json!({
                            "trial": trial, "direction": "off-conic", "rows": rows,
                        }));
                    }
                    found_off = true;
                    break;
                }
                if !found_off {
                    untested += 1;
                }
            }
            let status = if !wrong.is_empty() {
                CheckStatus::Fail
            } else if untested > 0 {
                CheckStatus::Anomaly
            } else {
                CheckStatus::Pass
            };
            (
                status,
                json!({
                    "witnesses": 5,
                    "wrong_dimensions": wrong,
                    "untested_directions": untested,
                }),
            )
        },
    ));

    let mut pipeline: Option<(SectionSpace<K>, ProjectionFit<K>)> = None;
    records.push(run_check(
        config,
        "projection-fit",
        "Projection from the node is linear: a unique 15x12 matrix of rank 12 maps projected section coordinates to Plücker points, certified on held-out samples.",
        |rng| {
            let pivot = random_sigma_point(&sp, rng);
            let witness = nodal_dual_form(&sp, &pivot, rng);
            let section = match section_space(&sp, &witness, rng) {
                Ok(s) => s,
                Err(ProjectionError::NoConicPoint) => {
                    return (
                        CheckStatus::Anomaly,
                        json!({ "reason": "the node conic has no point over this field" }),
                    )
                }
                Err(e) => return (CheckStatus::Fail, json!({ "error": e.to_string() })),
            };
            let (n_fit, n_test) = fit_sizes(config);
            match fit_projection(&section, n_fit, n_test, rng) {
                Ok(fit) => {
                    let details = json!({
                        "accepted": fit.accepted,
                        "discarded": fit.discarded,
                        "held_out": fit.held_out,
                        "dropped_coordinate": COORD_NAMES[fit.dropped],
                        "matrix_rows": fit.matrix.nrows(),
                        "matrix_cols": fit.matrix.ncols(),
                    });
                    pipeline = Some((section, fit));
                    (CheckStatus::Pass, details)
                }
                Err(ProjectionError::NotEnoughSamples { accepted }) => (
                    CheckStatus::Anomaly,
                    json!({
                        "reason": "hyperplane sampling exhausted its budget",
                        "accepted": accepted,
                    }),
                ),
                Err(e) => (CheckStatus::Fail, json!({ "error": e.to_string() })),
            }
        },
    ));

    records.push(run_check(
        config,
        "projection-grassmannian-image",
        "Fresh section points project to decomposable two-vectors that match the fitted linear map point by point.",
        |rng| {
            let Some((section, fit)) = pipeline.as_ref() else {
                return (
                    CheckStatus::Anomaly,
                    json!({ "reason": "no fitted projection available" }),
                );
            };
            let masks2 = basis_masks(6, 2);
            let target = if config.field.is_rationals() { 12 } else { 50 };
            let mut verified = 0usize;
            let mut discarded = 0usize;
            let mut budget = 40 * target;
            while verified < target && budget > 0 {
                budget -= 1;
                let Some(point) = sample_h_omega_chart(section.standard_form(), rng, 8) else {
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
                        if !w.wedge(&w).is_zero() {
                            return (
                                CheckStatus::Fail,
                                json!({ "error": "image two-vector is not decomposable" }),
                            );
                        }
                        let projected = projected_coords(&point, fit.dropped);
                        let mapped = apply_to_coords(&fit.matrix, &projected);
                        let plucker = w.dense_coords(&masks2);
                        if !coords_proportional(&k, &mapped, &plucker) {
                            return (
                                CheckStatus::Fail,
                                json!({
                                    "error": "fitted matrix disagrees with the Grassmannian point",
                                    "verified_before_mismatch": verified,
                                }),
                            );
                        }
                        verified += 1;
                    }
                    Err(ProjectionError::EvaluationRank { .. }) => discarded += 1,
                    Err(e) => return (CheckStatus::Fail, json!({ "error": e.to_string() })),
                }
            }
            if verified < target {
                return (
                    CheckStatus::Anomaly,
                    json!({ "reason": "sampling budget exhausted", "verified": verified }),
                );
            }
            (
                CheckStatus::Pass,
                json!({ "fresh_samples": verified, "discarded": discarded }),
            )
        },
    ));

    records.push(run_check(
        config,
        "projection-pfaffian-plane",
        "The kernel of the fitted projection is a plane of two-forms with identically vanishing Pfaffian and no rank-2 member, annihilating the wedge squares of a distinguished 4-space.",
        |_rng| {
            let Some((_, fit)) = pipeline.as_ref() else {
                return (
                    CheckStatus::Anomaly,
                    json!({ "reason": "no fitted projection available" }),
                );
            };
            let basis = match plane_from_fit(fit) {
                Ok(b) => b,
                Err(e) => return (CheckStatus::Fail, json!({ "error": e.to_string() })),
            };
            let plane = match PfaffianPlane::new(k.clone(), basis) {
                Ok(p) => p,
                Err(e) => return (CheckStatus::Fail, json!({ "error": e.to_string() })),
            };
            let w = match quadric_in_z(&plane) {
                Ok(m) => m,
                Err(e) => return (CheckStatus::Fail, json!({ "error": e.to_string() })),
            };
            let mode = serde_json::to_value(plane.check_mode())
                .unwrap_or_else(|_| json!("unserializable"));
            (
                CheckStatus::Pass,
                json!({
                    "plane_dimension": 3,
                    "rank_two_check": mode,
                    "z_space": format!("{}x{}", w.nrows(), w.ncols()),
                }),
            )
        },
    ));

    records.push(run_check(
        config,
        "projection-quadric-count",
        "Quadrics through the projected hyperplane section span a 15-dimensional space in the 12 coordinates of P11.",
        |rng| {
            let pivot = random_sigma_point(&sp, rng);
            let witness = nodal_dual_form(&sp, &pivot, rng);
            let omega0 = standard_form(&witness);
            let dropped = dropped_coordinate(&omega0);
            let n = if config.field.is_rationals() {
                160
            } else {
                config.samples.max(400)
            };
            let mut points: Vec<Vec<K::Elem>> = Vec::with_capacity(n);
            let mut budget = 20 * n;
            while points.len() < n && budget > 0 {
                budget -= 1;
                if let Some(p) = sample_h_omega_chart(&omega0, rng, 8) {
                    points.push(projected_coords(&p, dropped));
                }
            }
            if points.len() < n {
                return (
                    CheckStatus::Anomaly,
                    json!({ "reason": "hyperplane sampling exhausted", "points": points.len() }),
                );
            }
            let dim = fit_quadrics(&k, &points).len();
            (
                verdict(dim == 15),
                json!({ "points": n, "quadric_dimension": dim, "expected_dimension": 15 }),
            )
        },
    ));

    records
}

// ---------------------------------------------------------------------------
// Runner: vertex

/// Checks on the rank-5 incidence bundle over P⁵ and the vertex varieties of
/// linear systems of hyperplane sections: fiber dimension, the quadric of
/// Lagrangian directions, section vanishing on node conics, degeneracy
/// scans, pivot-plane fibers, and the degree-5 line determinant.
pub fn run_vertex(config: &RunConfig) -> Vec<CheckRecord> {
    with_field!(config.field, |k| vertex_impl(k, config))
}

fn vertex_impl<K: Field>(k: K, config: &RunConfig) -> Vec<CheckRecord> {
    let sp = SymplecticForm::standard(k.clone());
    let mut records = Vec::new();

    records.push(run_check(
        config,
        "vertex-fiber-dimension",
        "The incidence bundle has a 5-dimensional fiber inside V(14) at every point of P5.",
        |rng| {
            let points = 20usize;
            for _ in 0..points {
                let v = random_projective_point(&k, rng);
                match e_fiber(&sp, &v) {
                    Ok(fiber) => {
                        let b = fiber.basis();
                        if (b.nrows(), b.ncols()) != (5, NUM_COORDS) {
                            return (
                                CheckStatus::Fail,
                                json!({ "error": format!("fiber basis is {}x{}", b.nrows(), b.ncols()) }),
                            );
                        }
                    }
                    Err(e) => return (CheckStatus::Fail, json!({ "error": e.to_string() })),
                }
            }
            (CheckStatus::Pass, json!({ "points": points }))
        },
    ));

    records.push(run_check(
        config,
        "vertex-fiber-quadric",
        "Plücker points of Lagrangian planes through a fixed direction fill a quadric hypersurface of the projectivized fiber: exactly one quadric vanishes on them.",
        |rng| {
            let small_field =
                matches!(k.descriptor(), FieldDescriptor::Prime(p) if p < 7);
            let base_points = 3usize;
            let frames_per_point = 20usize;
            let mut dims = Vec::new();
            for _ in 0..base_points {
                let v = random_projective_point(&k, rng);
                let fiber = match e_fiber(&sp, &v) {
                    Ok(f) => f,
                    Err(e) => return (CheckStatus::Fail, json!({ "error": e.to_string() })),
                };
                let mut pts5: Vec<Vec<K::Elem>> = Vec::new();
                let mut outside = 0usize;
                let mut budget = 20 * frames_per_point;
                while pts5.len() < frames_per_point && budget > 0 {
                    budget -= 1;
                    let frame = random_lagrangian_through(&sp, &v, rng);
                    let w3 = MultiVector::vector(k.clone(), frame.row(0))
                        .wedge(&MultiVector::vector(k.clone(), frame.row(1)))
                        .wedge(&MultiVector::vector(k.clone(), frame.row(2)));
                    if w3.is_zero() {
                        continue;
                    }
                    let p = SigmaPoint::from_three_vector(&w3);
                    match fiber.fiber_coords(p.coords()) {
                        Some(c5) => pts5.push(c5),
                        None => outside += 1,
                    }
                }
                if outside > 0 {
                    return (
                        CheckStatus::Fail,
                        json!({ "error": "a Lagrangian Plücker point fell outside the fiber", "outside": outside }),
                    );
                }
                dims.push(fit_quadrics(&k, &pts5).len());
            }
            let status = if dims.iter().all(|&d| d == 1) {
                CheckStatus::Pass
            } else if dims.iter().all(|&d| d >= 1) && small_field {
                CheckStatus::Anomaly
            } else {
                CheckStatus::Fail
            };
            (
                status,
                json!({
                    "base_points": base_points,
                    "frames_per_point": frames_per_point,
                    "quadric_dimensions": dims,
                    "expected_dimension": 1,
                }),
            )
        },
    ));

    records.push(run_check(
        config,
        "vertex-section-conic",
        "On a witnessed pivot plane, the section cut by the hyperplane form vanishes exactly on the node conic.",
        |rng| {
            let pivot = random_sigma_point(&sp, rng);
            let witness = nodal_dual_form(&sp, &pivot, rng);
            let exhaustive = matches!(
                k.descriptor(),
                FieldDescriptor::Prime(p) if p <= EXHAUSTIVE_PRIME_LIMIT
            );
            let mut candidates: Vec<Vec<K::Elem>> = Vec::new();
            let mut conic_points_tested = 0usize;
            if exhaustive {
                candidates = plane_reps(&k).expect("small prime fields enumerate");
            } else {
                for _ in 0..config.samples.min(200) {
                    let stu: Vec<K::Elem> = (0..3).map(|_| k.sample(rng)).collect();
                    if stu.iter().all(|c| k.is_zero(c)) {
                        continue;
                    }
                    candidates.push(stu);
                }
                for _ in 0..10 {
                    if let Some(stu) = conic_point(&k, &witness.conic, rng, 32) {
                        candidates.push(stu);
                    }
                }
            }
            let total = candidates.len();
            for stu in &candidates {
                let on_conic = k.is_zero(&conic_value(&k, &witness.conic, stu));
                let v = plane_direction(&k, &witness.frame, stu);
                let fiber = match e_fiber(&sp, &v) {
                    Ok(f) => f,
                    Err(e) => return (CheckStatus::Fail, json!({ "error": e.to_string() })),
                };
                let vanishes = section_vanishes(&witness.omega, &fiber);
                if on_conic != vanishes {
                    return (
                        CheckStatus::Fail,
                        json!({
                            "error": "section vanishing disagrees with the conic",
                            "on_conic": on_conic,
                            "section_vanishes": vanishes,
                        }),
                    );
                }
                if on_conic {
                    conic_points_tested += 1;
                }
            }
            let status = if conic_points_tested == 0 {
                CheckStatus::Anomaly
            } else {
                CheckStatus::Pass
            };
            (
                status,
                json!({
                    "mode": if exhaustive { "exhaustive" } else { "sampled" },
                    "plane_points": total,
                    "conic_points_tested": conic_points_tested,
                }),
            )
        },
    ));

    records.push(run_check(
        config,
        "vertex-degeneracy-scan",
        "Stacked sections of k general hyperplane forms never drop below rank k-1 on P5; the rank-(k-1) locus is the vertex variety of the linear system.",
        |rng| {
            let mut per_k = Vec::new();
            let mut ok = true;
            for kk in [2usize, 3] {
                let setup = random_setup(&sp, kk, rng);
                let (scan, mode): (DegeneracyScan<K>, &str) = match k.descriptor() {
                    FieldDescriptor::Prime(p) if p <= SCAN_EXHAUSTIVE_PRIME_LIMIT => {
                        match vertex_scan_exhaustive(&sp, &setup) {
                            Ok(s) => (s, "exhaustive"),
                            Err(e) => {
                                return (CheckStatus::Fail, json!({ "error": e.to_string() }))
                            }
                        }
                    }
                    _ => (
                        vertex_scan_sampled(&sp, &setup, config.samples, rng),
                        "sampled",
                    ),
                };
                ok &= scan.below_generic == 0;
                let rank_counts: Value = scan
                    .rank_counts
                    .iter()
                    .map(|(r, c)| (r.to_string(), json!(c)))
                    .collect::<serde_json::Map<String, Value>>()
                    .into();
                per_k.push(json!({
                    "k": kk,
                    "mode": mode,
                    "scanned": scan.scanned,
                    "space_size": scan.space_size.map(|s| s.to_string()),
                    "rank_counts": rank_counts,
                    "degenerate_points": scan.degenerate_count(),
                    "below_generic_rank": scan.below_generic,
                    "vertex_degree_for_reference": vertex_degrees().get(&(kk as u32)).copied(),
                }));
            }
            (verdict(ok), json!({ "scans": per_k }))
        },
    ));

    records.push(run_check(
        config,
        "vertex-plane-fibers",
        "Over each witnessed pivot plane, the points where the k stacked sections degenerate coincide exactly with the witness conic.",
        |rng| {
            let exhaustive = matches!(
                k.descriptor(),
                FieldDescriptor::Prime(p) if p <= EXHAUSTIVE_PRIME_LIMIT
            );
            let mut per_k = Vec::new();
            let mut degenerate_tested = 0usize;
            for kk in [2usize, 3] {
                let setup = random_setup(&sp, kk, rng);
                for index in 0..kk {
                    let witness = setup
                        .witness(index)
                        .expect("random setups carry witnesses")
                        .clone();
                    let conic = match conic_fiber(&sp, &witness, &setup) {
                        Ok(c) => c,
                        Err(e) => {
                            return (CheckStatus::Fail, json!({ "error": e.to_string() }))
                        }
                    };
                    if exhaustive {
                        let degenerate = match plane_degenerate_points(&sp, &setup, index) {
                            Ok(pts) => pts,
                            Err(e) => {
                                return (CheckStatus::Fail, json!({ "error": e.to_string() }))
                            }
                        };
                        let zeros = match crate::incidence::conic_zero_set(&k, &conic) {
                            Ok(z) => z,
                            Err(e) => {
                                return (CheckStatus::Fail, json!({ "error": e.to_string() }))
                            }
                        };
                        let mut dk: Vec<String> =
                            degenerate.iter().map(|p| point_key(&k, p)).collect();
                        let mut zk: Vec<String> =
                            zeros.iter().map(|p| point_key(&k, p)).collect();
                        dk.sort();
                        zk.sort();
                        if dk != zk {
                            return (
                                CheckStatus::Fail,
                                json!({
                                    "error": "degenerate plane points differ from the conic zero set",
                                    "k": kk,
                                    "witness": index,
                                    "degenerate": dk.len(),
                                    "conic_zeros": zk.len(),
                                }),
                            );
                        }
                        degenerate_tested += dk.len();
                        per_k.push(json!({
                            "k": kk, "witness": index, "mode": "exhaustive",
                            "conic_points": zk.len(),
                        }));
                    } else {
                        let mut tested = 0usize;
                        for _ in 0..config.samples.min(200) {
                            let stu: Vec<K::Elem> = (0..3).map(|_| k.sample(rng)).collect();
                            if stu.iter().all(|c| k.is_zero(c)) {
                                continue;
                            }
                            let v = plane_direction(&k, &witness.frame, &stu);
                            let drops = section_rank(&sp, setup.three_forms(), &v) < kk;
                            let on_conic = k.is_zero(&conic_value(&k, &conic, &stu));
                            if drops != on_conic {
                                return (
                                    CheckStatus::Fail,
                                    json!({
                                        "error": "rank drop disagrees with the conic off the zero set",
                                        "k": kk, "witness": index,
                                    }),
                                );
                            }
                            if on_conic {
                                degenerate_tested += 1;
                            }
                            tested += 1;
                        }
                        for _ in 0..10 {
                            if let Some(stu) = conic_point(&k, &conic, rng, 32) {
                                let v = plane_direction(&k, &witness.frame, &stu);
                                if section_rank(&sp, setup.three_forms(), &v) >= kk {
                                    return (
                                        CheckStatus::Fail,
                                        json!({
                                            "error": "sections keep full rank on a conic point",
                                            "k": kk, "witness": index,
                                        }),
                                    );
                                }
                                degenerate_tested += 1;
                            }
                        }
                        per_k.push(json!({
                            "k": kk, "witness": index, "mode": "sampled",
                            "plane_samples": tested,
                        }));
                    }
                }
            }
            let status = if degenerate_tested == 0 {
                CheckStatus::Anomaly
            } else {
                CheckStatus::Pass
            };
            (
                status,
                json!({ "planes": per_k, "degenerate_points_tested": degenerate_tested }),
            )
        },
    ));

    records.push(run_check(
        config,
        "vertex-line-determinant",
        "Five independent sections degenerate along a divisor meeting a general line in degree exactly 5, the top Chern number of the bundle.",
        |rng| {
            let enough_nodes = match k.descriptor() {
                FieldDescriptor::Rationals => true,
                FieldDescriptor::Prime(p) => p >= 31,
            };
            if !enough_nodes {
                return (
                    CheckStatus::Anomaly,
                    json!({ "reason": "the field is too small for the 31 interpolation nodes" }),
                );
            }
            let setup = random_setup(&sp, 5, rng);
            let lines = 5usize;
            let mut degrees = Vec::new();
            for _ in 0..lines {
                let (a, b) = loop {
                    let a = random_projective_point(&k, rng);
                    let b = random_projective_point(&k, rng);
                    if Matrix::from_rows(k.clone(), vec![a.clone(), b.clone()]).rank() == 2 {
                        break (a, b);
                    }
                };
                match line_section_determinant(&sp, &setup, &a, &b, rng) {
                    Ok(g) => degrees.push(g.degree()),
                    Err(e) => return (CheckStatus::Fail, json!({ "error": e.to_string() })),
                }
            }
            let ok = degrees.iter().all(|d| *d == Some(5));
            (
                verdict(ok),
                json!({
                    "lines": lines,
                    "degrees": degrees.iter().map(|d| d.map(|v| v as u64)).collect::<Vec<_>>(),
                    "expected_degree": 5,
                }),
            )
        },
    ));

    records
}

// ---------------------------------------------------------------------------
// Runner: pencil

/// Checks on pencils of symplectic forms: diagonalization round trips, the
/// Lagrangian criterion through the kernel planes, and the factorial degree
/// of the family of common Lagrangian subspaces.
pub fn run_pencil(config: &RunConfig) -> Vec<CheckRecord> {
    with_field!(config.field, |k| pencil_impl(k, config))
}

fn pencil_impl<K: Field>(k: K, config: &RunConfig) -> Vec<CheckRecord> {
    let mut records = Vec::new();

    records.push(run_check(
        config,
        "pencil-round-trip",
        "A pencil with split square-free Pfaffian decomposes into rank-2 components paired with its roots, and both forms are exact component combinations with coefficient ratio the root.",
        |rng| {
            let mut failures = Vec::new();
            let mut skipped = Vec::new();
            let mut trials_by_n = Vec::new();
            for n in [2usize, 3] {
                let trials = if config.field.is_rationals() {
                    10
                } else {
                    config.samples.min(100).max(10)
                };
                let mut run = 0usize;
                for trial in 0..trials {
                    let Some(roots) = model_roots(&k, n, rng) else {
                        skipped.push(json!({
                            "n": n,
                            "reason": "field too small for distinct roots",
                        }));
                        break;
                    };
                    let t = random_full_rank_frame(&k, 2 * n, 2 * n, rng);
                    let (a0, a0p) = model_pencil(&k, n, &roots);
                    let alpha = a0.apply_linear(&t);
                    let alpha_prime = a0p.apply_linear(&t);
                    let diag = match pencil_diagonalize(&alpha, &alpha_prime) {
                        Ok(d) => d,
                        Err(e) => {
                            failures.push(json!({
                                "n": n, "trial": trial, "error": e.to_string(),
                            }));
                            continue;
                        }
                    };
                    run += 1;
                    let masks2 = basis_masks(2 * n, 2);
                    let mut used = vec![false; n];
                    let mut ok = true;
                    for (i, root) in roots.iter().enumerate() {
                        let expected = MultiVector::basis(k.clone(), 2 * n, &[i, i + n])
                            .apply_linear(&t);
                        let exp_dense = expected.dense_coords(&masks2);
                        let matched = (0..n).find(|&j| {
                            !used[j]
                                && coords_proportional(
                                    &k,
                                    &exp_dense,
                                    &diag.components[j].dense_coords(&masks2),
                                )
                        });
                        match matched {
                            Some(j) => {
                                used[j] = true;
                                if diag.roots[j] != *root {
                                    ok = false;
                                }
                            }
                            None => ok = false,
                        }
                    }
                    for j in 0..n {
                        let expected_prime =
                            k.mul(&diag.roots[j], &diag.alpha_coefficients[j]);
                        if diag.alpha_prime_coefficients[j] != expected_prime {
                            ok = false;
                        }
                    }
                    let mut recon = MultiVector::zero(k.clone(), 2 * n, 2);
                    let mut recon_prime = MultiVector::zero(k.clone(), 2 * n, 2);
                    for j in 0..n {
                        recon = recon
                            .add(&diag.components[j].scale(&diag.alpha_coefficients[j]));
                        recon_prime = recon_prime
                            .add(&diag.components[j].scale(&diag.alpha_prime_coefficients[j]));
                    }
                    ok &= mv_eq(&k, &recon, &alpha) && mv_eq(&k, &recon_prime, &alpha_prime);
                    if !ok {
                        failures.push(json!({
                            "n": n, "trial": trial,
                            "error": "components, roots, or coefficients disagree with the model",
                        }));
                    }
                }
                trials_by_n.push(json!({ "n": n, "trials": run }));
            }
            let status = if !failures.is_empty() {
                CheckStatus::Fail
            } else if !skipped.is_empty() {
                CheckStatus::Anomaly
            } else {
                CheckStatus::Pass
            };
            (
                status,
                json!({ "trials": trials_by_n, "failures": failures, "skipped": skipped }),
            )
        },
    ));

    records.push(run_check(
        config,
        "pencil-lagrangian-equivalence",
        "A 3-space is Lagrangian for both members of the pencil exactly when it meets each of the three distinguished kernel planes.",
        |rng| {
            let n = 3usize;
            let Some(roots) = model_roots(&k, n, rng) else {
                return (
                    CheckStatus::Anomaly,
                    json!({ "reason": "field too small for distinct roots" }),
                );
            };
            let t = random_full_rank_frame(&k, 2 * n, 2 * n, rng);
            let (a0, a0p) = model_pencil(&k, n, &roots);
            let alpha = a0.apply_linear(&t);
            let alpha_prime = a0p.apply_linear(&t);
            let diag = match pencil_diagonalize(&alpha, &alpha_prime) {
                Ok(d) => d,
                Err(e) => return (CheckStatus::Fail, json!({ "error": e.to_string() })),
            };
            let draws = if config.field.is_rationals() {
                20
            } else {
                config.samples.min(200)
            };
            for _ in 0..draws {
                let frame = diag.random_common_lagrangian(rng);
                if !common_lagrangian_test(&frame, &alpha, &alpha_prime)
                    || !diag.meets_every_kernel_plane(&frame)
                {
                    return (
                        CheckStatus::Fail,
                        json!({ "error": "a constructed common Lagrangian fails the criterion" }),
                    );
                }
            }
            for _ in 0..draws {
                let frame = random_full_rank_frame(&k, n, 2 * n, rng);
                let vanishes = common_lagrangian_test(&frame, &alpha, &alpha_prime);
                let meets = diag.meets_every_kernel_plane(&frame);
                if vanishes != meets {
                    return (
                        CheckStatus::Fail,
                        json!({ "error": "restriction vanishing disagrees with kernel-plane incidence" }),
                    );
                }
            }
            (
                CheckStatus::Pass,
                json!({ "constructed_lagrangians": draws, "random_frames": draws }),
            )
        },
    ));

    records.push(run_check(
        config,
        "pencil-segre-degree",
        "The family of common Lagrangian subspaces is a product of n lines of degree n!, and any basis of the pencil reproduces the same components.",
        |rng| {
            let degrees: Vec<u64> = (1..=4).map(segre_degree).collect();
            let degrees_ok = degrees == vec![1, 2, 6, 24];
            let n = 3usize;
            let Some(roots) = model_roots(&k, n, rng) else {
                return (
                    CheckStatus::Anomaly,
                    json!({ "degrees": degrees, "reason": "field too small for distinct roots" }),
                );
            };
            let t = random_full_rank_frame(&k, 2 * n, 2 * n, rng);
            let (a0, a0p) = model_pencil(&k, n, &roots);
            let alpha = a0.apply_linear(&t);
            let alpha_prime = a0p.apply_linear(&t);
            let base = match pencil_diagonalize(&alpha, &alpha_prime) {
                Ok(d) => d,
                Err(e) => return (CheckStatus::Fail, json!({ "error": e.to_string() })),
            };
            let masks2 = basis_masks(2 * n, 2);
            let mut attempted = 0usize;
            let mut succeeded = 0usize;
            let mut matched = 0usize;
            let mut budget = 100usize;
            while attempted < 10 && budget > 0 {
                budget -= 1;
                let (a, b, c, d) = (
                    k.sample(rng),
                    k.sample(rng),
                    k.sample(rng),
                    k.sample(rng),
                );
                let det = k.sub(&k.mul(&a, &d), &k.mul(&b, &c));
                if k.is_zero(&det) {
                    continue;
                }
                attempted += 1;
                let na = alpha.scale(&a).add(&alpha_prime.scale(&b));
                let nb = alpha.scale(&c).add(&alpha_prime.scale(&d));
                if let Ok(remixed) = pencil_diagonalize(&na, &nb) {
                    succeeded += 1;
                    if components_match(&k, &masks2, &base.components, &remixed.components) {
                        matched += 1;
                    }
                }
            }
            let status = if !degrees_ok || matched != succeeded {
                CheckStatus::Fail
            } else if succeeded < 3 {
                CheckStatus::Anomaly
            } else {
                CheckStatus::Pass
            };
            (
                status,
                json!({
                    "degrees": degrees,
                    "remixes_attempted": attempted,
                    "remixes_succeeded": succeeded,
                    "remixes_matched": matched,
                }),
            )
        },
    ));

    records
}

// ---------------------------------------------------------------------------
// Runner: numerology

/// Exact enumerative checks; these are field-independent integer identities.
pub fn run_numerology(config: &RunConfig) -> Vec<CheckRecord> {
    let mut records = Vec::new();

    records.push(run_check(
        config,
        "numerology-ring-degree",
        "In the cohomology ring with relations tau1^2 = 2 tau2, tau2^2 = 2 tau1 tau3, tau3^2 = 0, the sixth power of the hyperplane class is 16 points.",
        |_rng| {
            let ring = GradedQuotientRing::lagrangian_grassmannian_ring();
            let degree = sigma_ring_degree();
            let ranks = ring.graded_ranks(8);
            let t16 = IntPoly::monomial(3, vec![6, 0, 0], 1);
            let reference = ring.reduce_with_strategy(&t16, false, false);
            let confluent = [(false, true), (true, false), (true, true)]
                .iter()
                .all(|&(a, b)| {
                    ring.reduce_with_strategy(&t16, a, b)
                        .sub(&reference)
                        .is_zero()
                });
            let ok = degree == 16
                && ranks == vec![1, 1, 1, 2, 1, 1, 1, 0, 0]
                && confluent;
            (
                verdict(ok),
                json!({
                    "hyperplane_sixth_power": degree,
                    "graded_ranks": ranks,
                    "reduction_confluent": confluent,
                }),
            )
        },
    ));

    records.push(run_check(
        config,
        "numerology-grassmannian-degree",
        "Hook lengths of rectangular tableaux give the Plücker degrees: 14 for the Grassmannian of 2-planes in 6-space and 42 for 3-planes.",
        |_rng| {
            let g26 = gr26_degree();
            let g36 = rectangle_tableaux(3, 3);
            let g24 = rectangle_tableaux(2, 2);
            let ok = g26 == 14 && g36 == 42 && g24 == 2;
            (
                verdict(ok),
                json!({
                    "gr_2_6_degree": g26,
                    "gr_3_6_degree": g36,
                    "gr_2_4_degree": g24,
                }),
            )
        },
    ));

    records.push(run_check(
        config,
        "numerology-vertex-degrees",
        "The Chern polynomial 1 + 5t + 12t^2 + 16t^3 + 8t^4 of the rank-5 incidence bundle reads off the vertex-variety degrees 8, 16, 12, 5 for k = 2..5.",
        |_rng| {
            let table = vertex_degrees();
            let expected: Vec<(u32, u64)> = vec![(2, 8), (3, 16), (4, 12), (5, 5)];
            let table_ok = expected
                .iter()
                .all(|(kk, d)| table.get(kk).copied() == Some(*d));
            let chern = chern_polynomial_string();
            let chern_ok = chern == "1 + 5t + 12t^2 + 16t^3 + 8t^4"
                && INCIDENCE_CHERN == [1, 5, 12, 16, 8];
            let degrees: Value = table
                .iter()
                .map(|(kk, d)| (kk.to_string(), json!(d)))
                .collect::<serde_json::Map<String, Value>>()
                .into();
            (
                verdict(table_ok && chern_ok),
                json!({
                    "chern_polynomial": chern,
                    "vertex_degrees": degrees,
                }),
            )
        },
    ));

    records.push(run_check(
        config,
        "numerology-brill-noether",
        "The dimension-zero count of linear series is g! times a product of factorial ratios: 42 plane octics at genus 9 forming 21 involution pairs, 2 trigonal pencils at genus 4, and a clean rejection below existence.",
        |_rng| {
            let big = |v: i64| BigRational::from_integer(BigInt::from(v));
            let octics = brill_noether_degree(9, 2, 8);
            let pairs = serre_involution_pairs(9, 2, 8);
            let trigonal = brill_noether_degree(4, 1, 3);
            let rejected = matches!(
                brill_noether_degree(1, 1, 5),
                Err(EnumerativeError::NegativeFactorial { argument: -3 })
            );
            let ok = octics.as_ref() == Ok(&big(42))
                && pairs.as_ref() == Ok(&big(21))
                && trigonal.as_ref() == Ok(&big(2))
                && rejected;
            (
                verdict(ok),
                json!({
                    "plane_octics_genus_9": octics.map(|v| v.to_string()).unwrap_or_default(),
                    "involution_pairs": pairs.map(|v| v.to_string()).unwrap_or_default(),
                    "trigonal_pencils_genus_4": trigonal.map(|v| v.to_string()).unwrap_or_default(),
                    "rejects_nonexistent_series": rejected,
                }),
            )
        },
    ));

    records
}

/// All runners in a fixed order.
pub fn run_all(config: &RunConfig) -> Vec<CheckRecord> {
    let mut checks = run_verify_sigma(config);
    checks.extend(run_verify_theorem_a(config));
    checks.extend(run_vertex(config));
    checks.extend(run_pencil(config));
    checks.extend(run_numerology(config));
    checks
}
