//! Exact integer linear algebra over `Z^n`.
//!
//! Row-vector convention throughout: group elements are rows and a matrix
//! acts on the right, `x ↦ x·A`.

mod lattice;
mod matrix;
mod modular;
mod normal_form;

pub use lattice::{lattice_member, solve_left, solve_left_with, Lattice, LeftSolution};
pub use matrix::{IntMatrix, IntVector};
pub use modular::ModMatrix;
pub use normal_form::{hnf, snf, Hnf, Snf};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::decision::{Decision, Refutation};
use crate::error::{Error, Result};

/// Default cap on the period search in [`order_mod`].
pub const DEFAULT_ORDER_CAP: u64 = 1_000_000;

/// gcd of the entries; 0 for the zero vector.
pub fn content(v: &IntVector) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// `(v / content(v), content(v))`.
pub fn root_abelian(v: &IntVector) -> Result<(IntVector, BigInt)> {
    let c = content(v);
    if c.is_zero() {
        return Err(Error::Invalid("the zero vector has no root".into()));
    }
    Ok((v.div_exact(&c).expect("content divides every entry"), c))
}

/// A unimodular matrix whose first row is the primitive vector `p`.
pub fn complete_to_basis(p: &IntVector) -> Result<IntMatrix> {
    if content(p) != BigInt::one() {
        return Err(Error::Invalid(format!("{p} is not primitive")));
    }
    let column = IntMatrix::from_vectors(std::slice::from_ref(p), p.dim())?.transpose();
    // U·pᵀ = e₁, so pᵀ is the first column of U⁻¹.
    let u = hnf(&column).u;
    Ok(u.inverse_unimodular()?.transpose())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SodGlWitness {
    /// Unimodular `α` with `x·α = image`.
    pub alpha: IntMatrix,
    pub image: IntVector,
    /// Coefficients of `image` over the lattice generators.
    pub coefficients: IntVector,
}

/// Decides whether `x·α ∈ L` for some `α ∈ GL_n(Z)`.
///
/// The orbit of `x` is exactly the set of vectors with the same content,
/// so the answer is yes iff `d_1(L)` divides `content(x)`.
pub fn sod_gl(x: &IntVector, l: &Lattice) -> Result<Decision<SodGlWitness>> {
    let n = l.dim();
    if x.dim() != n {
        return Err(Error::dim(format!("vector of length {} for a lattice in Z^{n}", x.dim())));
    }
    if n == 0 {
        return Err(Error::Invalid("dimension must be positive".into()));
    }
    if x.is_zero() {
        let coefficients = IntVector::zeros(l.generators().rows());
        return Ok(Decision::Yes(SodGlWitness { alpha: IntMatrix::identity(n), image: x.clone(), coefficients }));
    }
    let c = content(x);
    let d1 = l.d1();
    if d1.is_zero() {
        return Ok(Decision::No(Refutation::InvariantMismatch { invariant: "lattice is zero".into() }));
    }
    if !c.is_multiple_of(&d1) {
        return Ok(Decision::No(Refutation::InvariantMismatch {
            invariant: format!("d1 = {d1} does not divide content {c}"),
        }));
    }
    let vinv = l.snf().v.inverse_unimodular()?;
    let target_dir = vinv.row_vector(0);
    let image = target_dir.scale(&c);
    let p = x.div_exact(&c).expect("content divides x");
    let from = complete_to_basis(&p)?;
    let to = complete_to_basis(&target_dir)?;
    let alpha = from.inverse_unimodular()?.mul(&to)?;
    debug_assert_eq!(x.mul_mat(&alpha)?, image);
    let coefficients = l
        .member(&image)?
        .into_witness()
        .expect("d1 * first row of V^-1 lies in the lattice");
    Ok(Decision::Yes(SodGlWitness { alpha, image, coefficients }))
}

/// Twisted conjugacy in `Z^n` twisted by `A`: additively the equation is
/// `x·(I − A) = v − u`. Complete.
pub fn tcp_abelian(a: &IntMatrix, u: &IntVector, v: &IntVector) -> Result<Decision<IntVector>> {
    a.require_unimodular()?;
    let n = a.rows();
    if u.dim() != n || v.dim() != n {
        return Err(Error::dim(format!("vectors must have length {n}")));
    }
    let m = IntMatrix::identity(n).sub(a)?;
    let target = v.sub(u)?;
    Ok(match solve_left(&m, &target)? {
        Some(sol) => Decision::Yes(sol.particular),
        None => Decision::No(Refutation::Exhaustive),
    })
}

/// Largest elementary divisor `d` of a full-rank lattice; `d·Z^n ⊆ L`.
pub fn quotient_exponent(l: &Lattice) -> Result<BigInt> {
    if !l.is_full_rank() {
        return Err(Error::Invalid(format!("lattice of rank {} in Z^{} is not full rank", l.rank(), l.dim())));
    }
    Ok(l.snf().invariant_factors().into_iter().max().unwrap_or_else(BigInt::one))
}

/// Least `T >= 1` with `A^T ≡ I (mod m)`.
pub fn order_mod(a: &IntMatrix, m: &BigInt) -> Result<u64> {
    order_mod_capped(a, m, DEFAULT_ORDER_CAP)
}

pub fn order_mod_capped(a: &IntMatrix, m: &BigInt, cap: u64) -> Result<u64> {
    a.require_unimodular()?;
    if *m < BigInt::from(2) {
        return Err(Error::Invalid(format!("modulus must be at least 2, got {m}")));
    }
    let cap_error = || Error::Capacity(format!("order of the matrix modulo {m} exceeds {cap}"));
    match ModMatrix::from_int(a, m) {
        Some(am) => {
            let id = ModMatrix::identity(a.rows(), am.modulus());
            let mut cur = am.clone();
            for t in 1..=cap {
                if cur == id {
                    return Ok(t);
                }
                cur = cur.mul(&am);
            }
            Err(cap_error())
        }
        None => {
            let id = IntMatrix::identity(a.rows());
            let reduce = |x: &IntMatrix| {
                let rows = x.to_rows().into_iter().map(|r| r.into_iter().map(|e| e.mod_floor(m)).collect()).collect();
                IntMatrix::from_rows(rows).expect("same shape")
            };
            let base = reduce(a);
            let mut cur = base.clone();
            for t in 1..=cap {
                if cur == id {
                    return Ok(t);
                }
                cur = reduce(&cur.mul(&base)?);
            }
            Err(cap_error())
        }
    }
}

/// `|det| == 1` check with a descriptive error for non-square input.
pub fn require_unimodular(a: &IntMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::dim(format!("{}x{} matrix is not square", a.rows(), a.cols())));
    }
    a.require_unimodular()
}

pub(crate) fn abs_u64(x: &BigInt) -> Option<u64> {
    u64::try_from(x.abs()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> IntVector {
        IntVector::from_i64(x)
    }

    #[test]
    fn content_and_root() {
        assert_eq!(content(&v(&[6, 10, 15])), BigInt::from(1));
        assert_eq!(content(&v(&[4, 6])), BigInt::from(2));
        assert_eq!(content(&v(&[0, 0])), BigInt::from(0));
        assert_eq!(content(&v(&[-4, 6])), BigInt::from(2));
        assert_eq!(root_abelian(&v(&[4, 6])).unwrap(), (v(&[2, 3]), BigInt::from(2)));
        assert_eq!(root_abelian(&v(&[1, 0])).unwrap(), (v(&[1, 0]), BigInt::from(1)));
        assert_eq!(root_abelian(&v(&[0, 5])).unwrap(), (v(&[0, 1]), BigInt::from(5)));
        assert!(root_abelian(&v(&[0, 0])).is_err());
    }

    #[test]
    fn basis_completion() {
        for p in [v(&[3, 5]), v(&[0, 1]), v(&[-2, 3, 7]), v(&[6, 10, 15])] {
            let m = complete_to_basis(&p).unwrap();
            assert!(m.is_unimodular());
            assert_eq!(m.row_vector(0), p);
        }
        assert!(complete_to_basis(&v(&[2, 4])).is_err());
    }

    #[test]
    fn sod_gl_examples() {
        let l = Lattice::new(IntMatrix::from_i64(&[[3, 0], [0, 3]]));
        assert!(sod_gl(&v(&[2, 4]), &l).unwrap().is_no());

        let l = Lattice::new(IntMatrix::from_i64(&[[1, 1]]));
        let w = sod_gl(&v(&[2, 0]), &l).unwrap().into_witness().unwrap();
        assert!(w.alpha.is_unimodular());
        assert_eq!(v(&[2, 0]).mul_mat(&w.alpha).unwrap(), w.image);
        assert!(l.contains(&w.image));
        assert_eq!(w.image, v(&[2, 2]));

        let w = sod_gl(&v(&[0, 0]), &l).unwrap().into_witness().unwrap();
        assert_eq!(w.alpha, IntMatrix::identity(2));

        assert!(sod_gl(&v(&[1, 0]), &Lattice::zero(2)).unwrap().is_no());
        assert!(sod_gl(&v(&[1, 0, 0]), &l).is_err());
    }

    #[test]
    fn tcp_examples() {
        let swap = IntMatrix::from_i64(&[[0, 1], [1, 0]]);
        let x = tcp_abelian(&swap, &v(&[1, 0]), &v(&[0, 1])).unwrap().into_witness().unwrap();
        let lhs = x.mul_mat(&IntMatrix::identity(2).sub(&swap).unwrap()).unwrap();
        assert_eq!(lhs, v(&[-1, 1]));
        let id = IntMatrix::identity(2);
        assert_eq!(tcp_abelian(&id, &v(&[3, 1]), &v(&[3, 1])).unwrap(), Decision::Yes(v(&[0, 0])));
        assert!(tcp_abelian(&id, &v(&[1, 0]), &v(&[0, 0])).unwrap().is_no());
        let bad = IntMatrix::from_i64(&[[2, 0], [0, 1]]);
        assert!(matches!(tcp_abelian(&bad, &v(&[0, 0]), &v(&[0, 0])), Err(Error::NotUnimodular(_))));
    }

    #[test]
    fn quotient_exponent_examples() {
        let q = |rows: &[[i64; 2]]| quotient_exponent(&Lattice::new(IntMatrix::from_i64(rows))).unwrap();
        assert_eq!(q(&[[2, 0], [0, 4]]), BigInt::from(4));
        assert_eq!(q(&[[1, 0], [0, 1]]), BigInt::from(1));
        assert_eq!(q(&[[2, 4], [6, 8]]), BigInt::from(4));
        assert!(quotient_exponent(&Lattice::new(IntMatrix::from_i64(&[[1, 1]]))).is_err());
    }

    #[test]
    fn order_mod_examples() {
        let m = |x: i64| BigInt::from(x);
        assert_eq!(order_mod(&IntMatrix::from_i64(&[[1, 1], [0, 1]]), &m(5)).unwrap(), 5);
        assert_eq!(order_mod(&IntMatrix::identity(3), &m(7)).unwrap(), 1);
        assert_eq!(order_mod(&IntMatrix::from_i64(&[[0, -1], [1, 0]]), &m(3)).unwrap(), 4);
        let big = BigInt::from(u64::MAX) * 4 + 1;
        assert_eq!(order_mod(&IntMatrix::from_i64(&[[-1, 0], [0, 1]]), &big).unwrap(), 2);
        let err = order_mod_capped(&IntMatrix::from_i64(&[[1, 1], [0, 1]]), &m(101), 50).unwrap_err();
        assert!(err.is_capacity());
    }
}
