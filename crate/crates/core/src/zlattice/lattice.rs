use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::matrix::{IntMatrix, IntVector};
use super::normal_form::{hnf, snf, Hnf, Snf};
use crate::decision::{Decision, Refutation};
use crate::error::{Error, Result};

/// Integer solutions of `y · M = r`: `y0 + Z-span(kernel)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeftSolution {
    pub particular: IntVector,
    /// Basis of the left kernel `{y : y·M = 0}`.
    pub kernel: Vec<IntVector>,
}

/// Solves `y · M = r` over the integers using a precomputed HNF of `M`.
pub fn solve_left_with(hnf: &Hnf, r: &IntVector) -> Option<LeftSolution> {
    let h = &hnf.h;
    let mut residual = r.entries().to_vec();
    let mut z = vec![BigInt::zero(); h.rows()];
    for (i, &c) in hnf.pivots.iter().enumerate() {
        let (q, rem) = residual[c].div_rem(&h[(i, c)]);
        if !rem.is_zero() {
            return None;
        }
        for j in c..h.cols() {
            let v = &q * &h[(i, j)];
            residual[j] -= v;
        }
        z[i] = q;
    }
    if residual.iter().any(|x| !x.is_zero()) {
        return None;
    }
    let particular = IntVector::new(z).mul_mat(&hnf.u).ok()?;
    let kernel = (hnf.rank()..h.rows()).map(|i| hnf.u.row_vector(i)).collect();
    Some(LeftSolution { particular, kernel })
}

pub fn solve_left(m: &IntMatrix, r: &IntVector) -> Result<Option<LeftSolution>> {
    if r.dim() != m.cols() {
        return Err(Error::dim(format!("target of length {} for {} columns", r.dim(), m.cols())));
    }
    Ok(solve_left_with(&hnf(m), r))
}

/// The sublattice of `Z^n` spanned by the rows of a generator matrix.
/// Normal forms are computed lazily, once.
#[derive(Debug, Clone)]
pub struct Lattice {
    generators: IntMatrix,
    hnf: OnceLock<Hnf>,
    snf: OnceLock<Snf>,
}

impl PartialEq for Lattice {
    /// Equality of the spanned lattices.
    fn eq(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.basis() == other.basis()
    }
}

impl Eq for Lattice {}

impl Lattice {
    pub fn new(generators: IntMatrix) -> Self {
        Lattice { generators, hnf: OnceLock::new(), snf: OnceLock::new() }
    }

    pub fn from_vectors(vs: &[IntVector], dim: usize) -> Result<Self> {
        Ok(Self::new(IntMatrix::from_vectors(vs, dim)?))
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(IntMatrix::zeros(0, dim))
    }

    pub fn full(dim: usize) -> Self {
        Self::new(IntMatrix::identity(dim))
    }

    /// `m·Z^n`.
    pub fn scaled_full(dim: usize, m: &BigInt) -> Self {
        let mut g = IntMatrix::identity(dim);
        for i in 0..dim {
            g[(i, i)] = m.clone();
        }
        Self::new(g)
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.generators.cols()
    }

    pub fn hnf(&self) -> &Hnf {
        self.hnf.get_or_init(|| hnf(&self.generators))
    }

    pub fn snf(&self) -> &Snf {
        self.snf.get_or_init(|| snf(&self.generators))
    }

    pub fn rank(&self) -> usize {
        self.hnf().rank()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim()
    }

    /// HNF basis rows.
    pub fn basis(&self) -> Vec<IntVector> {
        (0..self.rank()).map(|i| self.hnf().h.row_vector(i)).collect()
    }

    /// First elementary divisor: the gcd of all generator entries.
    pub fn d1(&self) -> BigInt {
        self.generators.to_rows().iter().flatten().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    /// Lattice spanned by `self` and `other` together.
    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        Ok(Lattice::new(self.generators.stack(&other.generators)?))
    }

    /// Membership with coefficients `c` such that `c · generators = v`.
    pub fn member(&self, v: &IntVector) -> Result<Decision<IntVector>> {
        if v.dim() != self.dim() {
            return Err(Error::dim(format!("vector of length {} in a lattice of dimension {}", v.dim(), self.dim())));
        }
        Ok(match solve_left_with(self.hnf(), v) {
            Some(sol) => Decision::Yes(sol.particular),
            None => Decision::No(Refutation::Exhaustive),
        })
    }

    pub fn contains(&self, v: &IntVector) -> bool {
        v.dim() == self.dim() && solve_left_with(self.hnf(), v).is_some()
    }
}

pub fn lattice_member(l: &Lattice, v: &IntVector) -> Result<Decision<IntVector>> {
    l.member(v)
}
