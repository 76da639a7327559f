//! The semidirect product `G = Z^n ⋊_A Z` and its conjugacy problem.
//!
//! Elements are pairs `(u, t^p)` with `u ∈ Z^n`. The generator `t` acts on
//! the fiber by `t⁻¹·x·t = x·A`, so conjugation by `(x, t^k)` induces
//! `A^k` on `Z^n` and the action subgroup is `⟨A⟩`. The product is
//!
//! ```text
//! (u, t^p)·(v, t^q) = (u + v·A^(-p), t^(p+q))
//! ```
//!
//! Conjugacy reduces to twisted conjugacy in `Z^n` when the t-exponent is
//! nonzero and to orbit equality under `⟨A⟩` when it is zero.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::decision::{Decision, Refutation};
use crate::error::{Error, Result};
use crate::matrixorbit::{orbit_equality_decide_with, power, OrbitConfig, OrbitWitness};
use crate::zlattice::{require_unimodular, solve_left, IntMatrix, IntVector};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ZnByZJson", into = "ZnByZJson")]
pub struct ZnByZ {
    n: usize,
    a: IntMatrix,
}

#[derive(Serialize, Deserialize)]
struct ZnByZJson {
    n: usize,
    #[serde(rename = "A")]
    a: IntMatrix,
}

impl TryFrom<ZnByZJson> for ZnByZ {
    type Error = Error;

    fn try_from(j: ZnByZJson) -> Result<Self> {
        let g = ZnByZ::new(j.a)?;
        if g.n != j.n {
            return Err(Error::dim(format!("n = {} but A is {}x{}", j.n, g.n, g.n)));
        }
        Ok(g)
    }
}

impl From<ZnByZ> for ZnByZJson {
    fn from(g: ZnByZ) -> Self {
        ZnByZJson { n: g.n, a: g.a }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GElement {
    pub u: IntVector,
    pub p: i64,
}

impl GElement {
    pub fn new(u: IntVector, p: i64) -> Self {
        GElement { u, p }
    }

    pub fn fiber(u: IntVector) -> Self {
        GElement { u, p: 0 }
    }
}

impl fmt::Display for GElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, t^{})", self.u, self.p)
    }
}

/// Conjugator `(x, t^k)` with `g1^(x, t^k) = g2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CpWitness {
    pub x: IntVector,
    pub k: i64,
}

impl CpWitness {
    pub fn element(&self) -> GElement {
        GElement::new(self.x.clone(), self.k)
    }
}

impl ZnByZ {
    pub fn new(a: IntMatrix) -> Result<Self> {
        require_unimodular(&a)?;
        if a.rows() == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        Ok(ZnByZ { n: a.rows(), a })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    /// The automorphism of the fiber induced by conjugation by `t^k`.
    pub fn action(&self, k: i64) -> Result<IntMatrix> {
        power(&self.a, k)
    }

    pub fn identity(&self) -> GElement {
        GElement::fiber(IntVector::zeros(self.n))
    }

    fn check(&self, g: &GElement) -> Result<()> {
        if g.u.dim() != self.n {
            return Err(Error::dim(format!("element {g} has fiber dimension {} in Z^{}", g.u.dim(), self.n)));
        }
        Ok(())
    }

    fn exponent_sum(a: i64, b: i64) -> Result<i64> {
        a.checked_add(b).ok_or_else(|| Error::Capacity("t-exponent overflows 64 bits".into()))
    }

    pub fn multiply(&self, g: &GElement, h: &GElement) -> Result<GElement> {
        self.check(g)?;
        self.check(h)?;
        let u = g.u.add(&h.u.mul_mat(&self.action(-g.p)?)?)?;
        Ok(GElement::new(u, Self::exponent_sum(g.p, h.p)?))
    }

    pub fn invert(&self, g: &GElement) -> Result<GElement> {
        self.check(g)?;
        let p = g.p.checked_neg().ok_or_else(|| Error::Capacity("t-exponent overflows 64 bits".into()))?;
        Ok(GElement::new(g.u.mul_mat(&self.action(g.p)?)?.neg(), p))
    }

    /// `h⁻¹·g·h`.
    pub fn conjugate(&self, g: &GElement, h: &GElement) -> Result<GElement> {
        let hinv = self.invert(h)?;
        self.multiply(&self.multiply(&hinv, g)?, h)
    }

    /// Exact check of a conjugacy witness.
    pub fn verify_conjugator(&self, g1: &GElement, g2: &GElement, w: &CpWitness) -> Result<bool> {
        Ok(self.conjugate(g1, &w.element())? == *g2)
    }
}

pub fn cp_znbyz(g: &ZnByZ, g1: &GElement, g2: &GElement) -> Result<Decision<CpWitness>> {
    cp_znbyz_with(g, g1, g2, &OrbitConfig::default())
}

/// Conjugacy in `Z^n ⋊_A Z`. Complete when the t-exponent is nonzero;
/// at exponent zero it inherits the completeness of the orbit decider.
pub fn cp_znbyz_with(g: &ZnByZ, g1: &GElement, g2: &GElement, config: &OrbitConfig) -> Result<Decision<CpWitness>> {
    g.check(g1)?;
    g.check(g2)?;
    if g1.p != g2.p {
        return Ok(Decision::No(Refutation::InvariantMismatch {
            invariant: format!("t-exponents {} and {} differ", g1.p, g2.p),
        }));
    }
    let p = g1.p;
    let decision = if p == 0 {
        orbit_equality_decide_with(&g.a, &g1.u, &g2.u, config)?
            .map(|w| CpWitness { x: IntVector::zeros(g.n), k: w.k })
    } else {
        twisted_case(g, g1, g2)?
    };
    if let Decision::Yes(w) = &decision {
        assert!(g.verify_conjugator(g1, g2, w)?, "conjugator failed exact verification");
    }
    Ok(decision)
}

/// `(u + x·(A^(-p) − I))·A^k = v`. Since `g1` centralises itself, the
/// valid `k` form a union of cosets of `pZ`, so `k ∈ [0, |p|)` suffices.
fn twisted_case(g: &ZnByZ, g1: &GElement, g2: &GElement) -> Result<Decision<CpWitness>> {
    let twist = g.action(-g1.p)?.sub(&IntMatrix::identity(g.n))?;
    let inverse = g.a.inverse_unimodular()?;
    let mut v_back = g2.u.clone();
    for k in 0..g1.p.unsigned_abs() as i64 {
        let target = v_back.sub(&g1.u)?;
        if let Some(sol) = solve_left(&twist, &target)? {
            return Ok(Decision::Yes(CpWitness { x: sol.particular, k }));
        }
        v_back = v_back.mul_mat(&inverse)?;
    }
    Ok(Decision::No(Refutation::Exhaustive))
}

/// Orbit decidability of the action subgroup `⟨A⟩` on `Z^n`.
pub fn action_subgroup_od(g: &ZnByZ, x: &IntVector, y: &IntVector) -> Result<Decision<OrbitWitness>> {
    action_subgroup_od_with(g, x, y, &OrbitConfig::default())
}

pub fn action_subgroup_od_with(
    g: &ZnByZ,
    x: &IntVector,
    y: &IntVector,
    config: &OrbitConfig,
) -> Result<Decision<OrbitWitness>> {
    orbit_equality_decide_with(&g.a, x, y, config)
}
