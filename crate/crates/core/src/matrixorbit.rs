//! Does the orbit of `x` under the cyclic group `⟨A⟩ ≤ GL_n(Z)` meet the
//! coset `u + L`?
//!
//! The query asks for `k ∈ Z` with `x·A^k − u ∈ L`. The decider is
//! complete when `L` has full rank, complete for `n = 2`, and otherwise
//! combines a modular sieve (sound `No` answers) with a bounded search.
//!
//! The `n = 2` analysis splits `A` by its eigenvalues:
//!
//! * finite order (`A^12 = I`): test one period;
//! * parabolic (`A = ±(I + N)` with `N² = 0`): `x·A^k = (±1)^k (x + k·xN)`
//!   is affine in `k` up to sign, so the valid exponents form arithmetic
//!   progressions computed by an integer linear solve;
//! * hyperbolic: for a test vector `h`, `g(k) = det(x·A^k, h)` obeys
//!   `g(k+2) = t·g(k+1) − Δ·g(k)`. With `|trace| >= 3` and determinant 1
//!   (using `A²` when `Δ = −1`), once `|g|` stops decreasing it grows
//!   strictly in that direction, which bounds the exponents where
//!   `g(k) = det(u, h)` can hold. Candidates are then checked exactly.
//!
//! This `n = 2` case analysis is a reconstruction; it is verified against
//! brute force in the test suite.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::decision::{Decision, Refutation};
use crate::error::{Error, Result};
use crate::zlattice::{
    abs_u64, order_mod_capped, quotient_exponent, require_unimodular, solve_left, IntMatrix, IntVector, Lattice,
    ModMatrix, DEFAULT_ORDER_CAP,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitConfig {
    /// Search bound `K` for the incomplete case.
    pub max_exponent: u64,
    /// Moduli used by the residue sieve.
    pub moduli: Vec<u64>,
    /// Cap on any period computed modulo an integer.
    pub order_cap: u64,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        OrbitConfig { max_exponent: 10_000, moduli: vec![4, 9, 5, 7, 11], order_cap: DEFAULT_ORDER_CAP }
    }
}

#[derive(Debug, Clone)]
pub struct OrbitQuery {
    pub a: IntMatrix,
    pub x: IntVector,
    pub u: IntVector,
    pub lattice: Lattice,
    pub config: OrbitConfig,
}

impl OrbitQuery {
    pub fn new(a: IntMatrix, x: IntVector, u: IntVector, lattice: Lattice) -> Result<Self> {
        require_unimodular(&a)?;
        let n = a.rows();
        if n == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        if x.dim() != n || u.dim() != n || lattice.dim() != n {
            return Err(Error::dim(format!(
                "matrix is {n}x{n} but x, u, lattice have dimensions {}, {}, {}",
                x.dim(),
                u.dim(),
                lattice.dim()
            )));
        }
        Ok(OrbitQuery { a, x, u, lattice, config: OrbitConfig::default() })
    }

    pub fn with_config(mut self, config: OrbitConfig) -> Self {
        self.config = config;
        self
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    /// Exact check of exponent `k`, with lattice coefficients on success.
    pub fn certify(&self, k: i64) -> Result<Option<OrbitWitness>> {
        let image = self.x.mul_mat(&power(&self.a, k)?)?;
        let diff = image.sub(&self.u)?;
        Ok(self.lattice.member(&diff)?.into_witness().map(|coefficients| OrbitWitness { k, coefficients }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitWitness {
    pub k: i64,
    /// Coefficients `c` with `x·A^k − u = c · generators(L)`.
    pub coefficients: IntVector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Gl2Kind {
    FiniteOrder { order: u32 },
    Parabolic,
    Hyperbolic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Gl2Class {
    pub kind: Gl2Kind,
    #[serde(serialize_with = "crate::json::serialize_bigint")]
    pub trace: BigInt,
    #[serde(serialize_with = "crate::json::serialize_bigint")]
    pub det: BigInt,
    #[serde(serialize_with = "crate::json::serialize_bigint")]
    pub discriminant: BigInt,
}

/// Trichotomy for `A ∈ GL_2(Z)`. Finite orders in `GL_2(Z)` divide 12.
pub fn classify_gl2(a: &IntMatrix) -> Result<Gl2Class> {
    if a.rows() != 2 || a.cols() != 2 {
        return Err(Error::dim(format!("expected a 2x2 matrix, got {}x{}", a.rows(), a.cols())));
    }
    require_unimodular(a)?;
    let trace = &a[(0, 0)] + &a[(1, 1)];
    let det = a.det()?;
    let discriminant = &trace * &trace - BigInt::from(4) * &det;
    let id = IntMatrix::identity(2);
    let mut cur = a.clone();
    let mut kind = None;
    for k in 1..=12u32 {
        if cur == id {
            kind = Some(Gl2Kind::FiniteOrder { order: k });
            break;
        }
        cur = cur.mul(a)?;
    }
    let kind = kind.unwrap_or(if discriminant.is_zero() { Gl2Kind::Parabolic } else { Gl2Kind::Hyperbolic });
    Ok(Gl2Class { kind, trace, det, discriminant })
}

/// Exact `A^k`; negative `k` uses the integer inverse.
pub fn power(a: &IntMatrix, k: i64) -> Result<IntMatrix> {
    if !a.is_square() {
        return Err(Error::dim(format!("{}x{} matrix is not square", a.rows(), a.cols())));
    }
    let mut base = if k < 0 { a.inverse_unimodular()? } else { a.clone() };
    let mut e = k.unsigned_abs();
    let mut acc = IntMatrix::identity(a.rows());
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base)?;
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base)?;
        }
    }
    Ok(acc)
}

/// Orders exponents by `|k|`, positive before negative.
fn exponent_key(k: i64) -> (u64, bool) {
    (k.unsigned_abs(), k < 0)
}

pub fn orbit_coset_decide(q: &OrbitQuery) -> Result<Decision<OrbitWitness>> {
    if let Some(w) = q.certify(0)? {
        return Ok(Decision::Yes(w));
    }
    if q.lattice.is_full_rank() {
        return full_rank_case(q);
    }
    if q.dim() == 2 {
        return gl2_case(q);
    }
    sieve_case(q)
}

/// `∃k: x·A^k = y`, the lattice-free specialisation.
pub fn orbit_equality_decide(a: &IntMatrix, x: &IntVector, y: &IntVector) -> Result<Decision<OrbitWitness>> {
    orbit_equality_decide_with(a, x, y, &OrbitConfig::default())
}

pub fn orbit_equality_decide_with(
    a: &IntMatrix,
    x: &IntVector,
    y: &IntVector,
    config: &OrbitConfig,
) -> Result<Decision<OrbitWitness>> {
    let q = OrbitQuery::new(a.clone(), x.clone(), y.clone(), Lattice::zero(x.dim()))?.with_config(config.clone());
    orbit_coset_decide(&q)
}

fn found(q: &OrbitQuery, k: i64) -> Result<Decision<OrbitWitness>> {
    match q.certify(k)? {
        Some(w) => Ok(Decision::Yes(w)),
        None => unreachable!("exponent {k} passed the exact test but failed certification"),
    }
}

/// `d·Z^n ⊆ L`, so membership of `x·A^k − u` depends on `k` modulo the
/// order of `A` mod `d`.
fn full_rank_case(q: &OrbitQuery) -> Result<Decision<OrbitWitness>> {
    let d = quotient_exponent(&q.lattice)?;
    let period = order_mod_capped(&q.a, &d, q.config.order_cap)?;
    let Some(am) = ModMatrix::from_int(&q.a, &d) else {
        return Err(Error::Capacity(format!("quotient exponent {d} exceeds 64 bits")));
    };
    // w ∈ L iff (w·V)_i ≡ 0 mod d_i, where U·G·V = D.
    let snf = q.lattice.snf();
    let v_mod = ModMatrix::from_int(&snf.v, &d).expect("same modulus");
    let divisors: Vec<u64> = snf.invariant_factors().iter().map(|x| abs_u64(x).expect("d_i divides d")).collect();
    let modulus = am.modulus();
    let u_res = am.reduce_vector(&q.u);
    let mut cur = am.reduce_vector(&q.x);
    let mut best: Option<i64> = None;
    for r in 0..period {
        let diff: Vec<u64> = cur.iter().zip(&u_res).map(|(a, b)| (a + modulus - b) % modulus).collect();
        let coords = v_mod.vec_mul(&diff);
        if coords.iter().zip(&divisors).all(|(c, di)| c % di == 0) {
            let r = r as i64;
            for k in [r, r - period as i64] {
                if best.is_none_or(|b| exponent_key(k) < exponent_key(b)) {
                    best = Some(k);
                }
            }
        }
        cur = am.vec_mul(&cur);
    }
    match best {
        Some(k) => found(q, k),
        None => Ok(Decision::No(Refutation::PeriodExhausted { period })),
    }
}

fn gl2_case(q: &OrbitQuery) -> Result<Decision<OrbitWitness>> {
    let class = classify_gl2(&q.a)?;
    match class.kind {
        Gl2Kind::FiniteOrder { order } => {
            let order = order as i64;
            let mut ks: Vec<i64> = (1 - order..order).collect();
            ks.sort_by_key(|&k| exponent_key(k));
            for k in ks {
                if let Some(w) = q.certify(k)? {
                    return Ok(Decision::Yes(w));
                }
            }
            Ok(Decision::No(Refutation::PeriodExhausted { period: order as u64 }))
        }
        Gl2Kind::Parabolic => parabolic_case(q, &class.trace),
        Gl2Kind::Hyperbolic => hyperbolic_case(q, &class.trace, &class.det),
    }
}

/// Arithmetic progression `{a + b·j}`; `b = 0` is the single point `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Progression {
    a: i128,
    b: i128,
}

impl Progression {
    fn restrict_parity(self, parity: i128) -> Option<Progression> {
        let Progression { a, b } = self;
        if b == 0 {
            return (a.rem_euclid(2) == parity).then_some(self);
        }
        if b % 2 == 0 {
            return (a.rem_euclid(2) == parity).then_some(self);
        }
        let a = if a.rem_euclid(2) == parity { a } else { a + b };
        Some(Progression { a, b: 2 * b })
    }

    fn smallest(self) -> i128 {
        if self.b == 0 {
            return self.a;
        }
        let r = self.a.rem_euclid(self.b);
        if r <= self.b - r {
            r
        } else {
            r - self.b
        }
    }
}

fn to_i128(x: &BigInt) -> Result<i128> {
    i128::try_from(x).map_err(|_| Error::Capacity(format!("exponent {x} exceeds 128 bits")))
}

fn parabolic_case(q: &OrbitQuery, trace: &BigInt) -> Result<Decision<OrbitWitness>> {
    let eps = trace / BigInt::from(2);
    let n_mat = {
        let scaled = if eps.is_negative() { q.a.neg() } else { q.a.clone() };
        scaled.sub(&IntMatrix::identity(2))?
    };
    let w = q.x.mul_mat(&n_mat)?;
    let signs: &[i64] = if eps.is_negative() { &[1, -1] } else { &[1] };
    let mut best: Option<i128> = None;
    for &s in signs {
        // s·(x + k·w) − u ∈ L  ⟺  k·w + c·G = s·u − x
        let target = q.u.scale(&BigInt::from(s)).sub(&q.x)?;
        let stacked = IntMatrix::from_vectors(std::slice::from_ref(&w), 2)?.stack(q.lattice.generators())?;
        let Some(sol) = solve_left(&stacked, &target)? else { continue };
        let a = to_i128(&sol.particular[0])?;
        let b = sol.kernel.iter().fold(BigInt::zero(), |g, k| g.gcd(&k[0]));
        let mut prog = Some(Progression { a, b: to_i128(&b)? });
        if eps.is_negative() {
            prog = prog.and_then(|p| p.restrict_parity(if s == 1 { 0 } else { 1 }));
        }
        if let Some(p) = prog {
            let k = p.smallest();
            if best.is_none_or(|b| (k.unsigned_abs(), k < 0) < (b.unsigned_abs(), b < 0)) {
                best = Some(k);
            }
        }
    }
    match best {
        Some(k) => {
            let k = i64::try_from(k).map_err(|_| Error::Capacity(format!("exponent {k} exceeds 64 bits")))?;
            found(q, k)
        }
        None => Ok(Decision::No(Refutation::LinearSolve)),
    }
}

fn det2(a: &IntVector, b: &IntVector) -> BigInt {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Indices `j >= 0` with `s(j) = c` for `s(j+2) = tr·s(j+1) − s(j)`,
/// `|tr| >= 3`, `s` not identically zero. Also returns the last index
/// inspected.
fn recurrence_hits(s0: BigInt, s1: BigInt, tr: &BigInt, c: &BigInt) -> (Vec<u64>, u64) {
    debug_assert!(tr.abs() >= BigInt::from(3));
    debug_assert!(!(s0.is_zero() && s1.is_zero()));
    let c_abs = c.abs();
    let (mut cur, mut next) = (s0, s1);
    let mut hits = Vec::new();
    let mut j = 0u64;
    loop {
        if cur == *c {
            hits.push(j);
        }
        // |s(j)| <= |s(j+1)|, s(j+1) != 0 ⇒ |s| strictly increases from j+1 on.
        if cur.abs() <= next.abs() && next.abs() > c_abs {
            return (hits, j);
        }
        let after = tr * &next - &cur;
        cur = std::mem::replace(&mut next, after);
        j += 1;
    }
}

fn hyperbolic_case(q: &OrbitQuery, trace: &BigInt, det: &BigInt) -> Result<Decision<OrbitWitness>> {
    if q.x.is_zero() {
        return Ok(Decision::No(Refutation::PeriodExhausted { period: 1 }));
    }
    let xa = q.x.mul_mat(&q.a)?;
    let tests: Vec<IntVector> = match q.lattice.rank() {
        0 => vec![IntVector::from_i64(&[0, 1]), IntVector::from_i64(&[1, 0])],
        _ => q.lattice.basis(),
    };
    let h = tests
        .into_iter()
        .find(|h| !(det2(&q.x, h).is_zero() && det2(&xa, h).is_zero()))
        .expect("hyperbolic matrices have no rational eigenvectors");
    let c = det2(&q.u, &h);
    let g0 = det2(&q.x, &h);
    let g1 = det2(&xa, &h);
    let mut candidates: Vec<i64> = Vec::new();
    let mut bound = 0u64;
    let mut collect = |s0: BigInt, s1: BigInt, tr: &BigInt, map: &dyn Fn(i64) -> i64| {
        let back1 = tr * &s0 - &s1;
        let (fwd, jf) = recurrence_hits(s0.clone(), s1, tr, &c);
        let (bwd, jb) = recurrence_hits(s0, back1, tr, &c);
        candidates.extend(fwd.into_iter().map(|j| map(j as i64)));
        candidates.extend(bwd.into_iter().map(|j| map(-(j as i64))));
        bound = bound.max(map(jf as i64 + 1).unsigned_abs()).max(map(-(jb as i64) - 1).unsigned_abs());
    };
    if det.is_one() {
        collect(g0, g1, trace, &|j| j);
    } else {
        // Δ = −1: split by parity and use A², which has trace t² + 2.
        let g2 = trace * &g1 - det * &g0;
        let g3 = trace * &g2 - det * &g1;
        let tr2 = trace * trace - BigInt::from(2) * det;
        collect(g0, g2, &tr2, &|j| 2 * j);
        collect(g1, g3, &tr2, &|j| 2 * j + 1);
    }
    candidates.sort_by_key(|&k| exponent_key(k));
    candidates.dedup();
    for k in candidates {
        if let Some(w) = q.certify(k)? {
            return Ok(Decision::Yes(w));
        }
    }
    Ok(Decision::No(Refutation::GrowthBound { bound }))
}

struct ResidueFilter {
    period: u64,
    admissible: Vec<bool>,
}

impl ResidueFilter {
    fn allows(&self, k: i64) -> bool {
        self.admissible[k.rem_euclid(self.period as i64) as usize]
    }
}

fn sieve_case(q: &OrbitQuery) -> Result<Decision<OrbitWitness>> {
    let n = q.dim();
    let mut filters = Vec::new();
    for &m in &q.config.moduli {
        if m < 2 {
            continue;
        }
        let mb = BigInt::from(m);
        let period = order_mod_capped(&q.a, &mb, q.config.order_cap)?;
        let am = ModMatrix::from_int(&q.a, &mb).expect("u64 modulus");
        let widened = q.lattice.sum(&Lattice::scaled_full(n, &mb))?;
        let u_res = am.reduce_vector(&q.u);
        let mut cur = am.reduce_vector(&q.x);
        let mut admissible = Vec::with_capacity(period as usize);
        for _ in 0..period {
            let diff: Vec<BigInt> = cur.iter().zip(&u_res).map(|(a, b)| BigInt::from(*a) - BigInt::from(*b)).collect();
            admissible.push(widened.contains(&IntVector::new(diff)));
            cur = am.vec_mul(&cur);
        }
        if !admissible.iter().any(|&b| b) {
            return Ok(Decision::No(Refutation::ModularObstruction { modulus: m }));
        }
        filters.push(ResidueFilter { period, admissible });
    }
    let inverse = q.a.inverse_unimodular()?;
    let test = |k: i64, image: &IntVector| -> Result<Option<OrbitWitness>> {
        if !filters.iter().all(|f| f.allows(k)) {
            return Ok(None);
        }
        let diff = image.sub(&q.u)?;
        Ok(q.lattice.member(&diff)?.into_witness().map(|coefficients| OrbitWitness { k, coefficients }))
    };
    let mut fwd = q.x.clone();
    let mut bwd = q.x.clone();
    for k in 1..=q.config.max_exponent as i64 {
        fwd = fwd.mul_mat(&q.a)?;
        if fwd == q.x {
            // Finite orbit: exponents 0, ±1, ..., ±(k-1) already cover it.
            return Ok(Decision::No(Refutation::PeriodExhausted { period: k as u64 }));
        }
        if let Some(w) = test(k, &fwd)? {
            return Ok(Decision::Yes(w));
        }
        bwd = bwd.mul_mat(&inverse)?;
        if let Some(w) = test(-k, &bwd)? {
            return Ok(Decision::Yes(w));
        }
    }
    Ok(Decision::Unknown { bound: q.config.max_exponent })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[[i64; 2]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    fn v(x: &[i64]) -> IntVector {
        IntVector::from_i64(x)
    }

    fn query(a: IntMatrix, x: &[i64], u: &[i64], gens: IntMatrix) -> OrbitQuery {
        OrbitQuery::new(a, v(x), v(u), Lattice::new(gens)).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_gl2(&m(&[[0, -1], [1, 0]])).unwrap().kind, Gl2Kind::FiniteOrder { order: 4 });
        assert_eq!(classify_gl2(&m(&[[1, 1], [0, 1]])).unwrap().kind, Gl2Kind::Parabolic);
        let c = classify_gl2(&m(&[[2, 1], [1, 1]])).unwrap();
        assert_eq!((c.kind, c.trace, c.discriminant), (Gl2Kind::Hyperbolic, BigInt::from(3), BigInt::from(5)));
        assert_eq!(classify_gl2(&m(&[[-1, 0], [0, -1]])).unwrap().kind, Gl2Kind::FiniteOrder { order: 2 });
        assert_eq!(classify_gl2(&m(&[[-1, 1], [0, -1]])).unwrap().kind, Gl2Kind::Parabolic);
        assert_eq!(classify_gl2(&m(&[[0, 1], [1, 1]])).unwrap().kind, Gl2Kind::Hyperbolic);
        assert_eq!(classify_gl2(&m(&[[0, -1], [1, 1]])).unwrap().kind, Gl2Kind::FiniteOrder { order: 6 });
        assert!(classify_gl2(&IntMatrix::identity(3)).is_err());
    }

    #[test]
    fn power_examples() {
        let a = m(&[[2, 1], [1, 1]]);
        assert_eq!(power(&a, 0).unwrap(), IntMatrix::identity(2));
        assert_eq!(power(&a, 2).unwrap(), m(&[[5, 3], [3, 2]]));
        assert_eq!(power(&a, -1).unwrap(), m(&[[1, -1], [-1, 2]]));
        assert_eq!(power(&a, 5).unwrap().mul(&power(&a, -5).unwrap()).unwrap(), IntMatrix::identity(2));
    }

    // The unipotent fixtures are the transposes of their column-vector
    // forms: (0,1)·[[1,0],[1,1]]^k = (k,1).
    #[test]
    fn unipotent_coset_examples() {
        let a = m(&[[1, 0], [1, 1]]);
        let q = query(a.clone(), &[0, 1], &[2, 1], m(&[[5, 0], [0, 5]]));
        let d = orbit_coset_decide(&q).unwrap();
        assert_eq!(d.witness().unwrap().k, 2);

        let q = query(a, &[0, 1], &[0, 0], m(&[[5, 0], [0, 5]]));
        assert_eq!(orbit_coset_decide(&q).unwrap(), Decision::No(Refutation::PeriodExhausted { period: 5 }));
    }

    #[test]
    fn trivial_coset_example() {
        let q = query(m(&[[2, 1], [1, 1]]), &[3, -4], &[3, -4], IntMatrix::zeros(0, 2));
        assert_eq!(orbit_coset_decide(&q).unwrap().witness().unwrap().k, 0);
    }

    #[test]
    fn equality_examples() {
        let a = m(&[[2, 1], [1, 1]]);
        let x = v(&[1, 0]);
        let y = x.mul_mat(&power(&a, 2).unwrap()).unwrap();
        assert_eq!(orbit_equality_decide(&a, &x, &y).unwrap().witness().unwrap().k, 2);

        let rot = m(&[[0, -1], [1, 0]]);
        let d = orbit_equality_decide(&rot, &v(&[1, 0]), &v(&[-1, 0])).unwrap();
        assert_eq!(d.witness().unwrap().k, 2);

        let d = orbit_equality_decide(&IntMatrix::identity(2), &v(&[1, 0]), &v(&[0, 1])).unwrap();
        assert!(d.is_no());
    }

    #[test]
    fn hyperbolic_negative_exponent() {
        let a = m(&[[2, 1], [1, 1]]);
        let x = v(&[1, 0]);
        let y = x.mul_mat(&power(&a, -3).unwrap()).unwrap();
        assert_eq!(orbit_equality_decide(&a, &x, &y).unwrap().witness().unwrap().k, -3);
        // Same norm form value but not in the orbit.
        let d = orbit_equality_decide(&a, &x, &v(&[1, 1])).unwrap();
        assert!(matches!(d, Decision::No(Refutation::GrowthBound { .. })));
    }

    #[test]
    fn hyperbolic_det_minus_one_rank_one_lattice() {
        let a = m(&[[1, 1], [1, 0]]);
        let x = v(&[1, 0]);
        let target = x.mul_mat(&power(&a, 7).unwrap()).unwrap();
        let h = v(&[1, 2]);
        let u = target.sub(&h.scale(&BigInt::from(3))).unwrap();
        let q = OrbitQuery::new(a, x, u, Lattice::from_vectors(&[h], 2).unwrap()).unwrap();
        let w = orbit_coset_decide(&q).unwrap().into_witness().unwrap();
        assert!(w.k.unsigned_abs() <= 7);
        assert!(q.certify(w.k).unwrap().is_some());
    }

    #[test]
    fn parabolic_progressions() {
        // A = -(I + N): signs alternate.
        let a = m(&[[-1, 0], [-1, -1]]);
        // (0,1)·A^k = (-1)^k (k, 1)
        let q = query(a.clone(), &[0, 1], &[3, -1], IntMatrix::zeros(0, 2));
        assert_eq!(orbit_coset_decide(&q).unwrap().witness().unwrap().k, -3);
        let q = query(a.clone(), &[0, 1], &[3, 1], IntMatrix::zeros(0, 2));
        assert_eq!(orbit_coset_decide(&q).unwrap(), Decision::No(Refutation::LinearSolve));
        // Rank-one lattice spanned by (1, 0): need (-1)^k = 1 in the second coordinate.
        let q = query(a, &[0, 1], &[0, 1], m(&[[7, 0]]));
        assert_eq!(orbit_coset_decide(&q).unwrap().witness().unwrap().k, 0);
    }

    #[test]
    fn sieve_finds_modular_obstruction() {
        let a = IntMatrix::from_i64(&[[1, 1, 0], [0, 1, 0], [0, 0, 1]]);
        // third coordinate is invariant: 0 vs 1 mod every modulus.
        let q = OrbitQuery::new(a, v(&[1, 0, 0]), v(&[5, 3, 1]), Lattice::zero(3)).unwrap();
        assert_eq!(orbit_coset_decide(&q).unwrap(), Decision::No(Refutation::ModularObstruction { modulus: 4 }));
    }

    #[test]
    fn sieve_search_and_unknown() {
        let a = IntMatrix::from_i64(&[[2, 1, 0], [1, 1, 0], [0, 0, 1]]);
        let x = v(&[1, 0, 2]);
        let y = x.mul_mat(&power(&a, -4).unwrap()).unwrap();
        let q = OrbitQuery::new(a.clone(), x.clone(), y, Lattice::zero(3)).unwrap();
        assert_eq!(orbit_coset_decide(&q).unwrap().witness().unwrap().k, -4);

        let cfg = OrbitConfig { max_exponent: 30, moduli: vec![], ..OrbitConfig::default() };
        let q = OrbitQuery::new(a, x, v(&[1, 1, 2]), Lattice::zero(3)).unwrap().with_config(cfg);
        assert_eq!(orbit_coset_decide(&q).unwrap(), Decision::Unknown { bound: 30 });
    }

    #[test]
    fn finite_orbit_in_dimension_three() {
        let a = IntMatrix::from_i64(&[[0, 1, 0], [0, 0, 1], [1, 0, 0]]);
        let q = OrbitQuery::new(a, v(&[1, 2, 3]), v(&[3, 2, 1]), Lattice::zero(3)).unwrap();
        let cfg = OrbitConfig { moduli: vec![], ..OrbitConfig::default() };
        let d = orbit_coset_decide(&q.with_config(cfg)).unwrap();
        assert_eq!(d, Decision::No(Refutation::PeriodExhausted { period: 3 }));
    }

    #[test]
    fn rejects_bad_queries() {
        assert!(OrbitQuery::new(m(&[[2, 0], [0, 1]]), v(&[1, 0]), v(&[1, 0]), Lattice::zero(2)).is_err());
        assert!(OrbitQuery::new(IntMatrix::identity(2), v(&[1, 0, 0]), v(&[1, 0]), Lattice::zero(2)).is_err());
    }
}
