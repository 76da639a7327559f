use num_bigint::BigInt;
use num_integer::Integer;

use super::matrix::{IntMatrix, IntVector};

/// Square matrix over `Z/m` for moduli that fit in 64 bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModMatrix {
    n: usize,
    m: u64,
    data: Vec<u64>,
}

fn reduce(x: &BigInt, m: u64) -> u64 {
    u64::try_from(x.mod_floor(&BigInt::from(m))).expect("residue fits")
}

impl ModMatrix {
    /// `None` when `m` does not fit in a `u64` or the matrix is not square.
    pub fn from_int(a: &IntMatrix, m: &BigInt) -> Option<Self> {
        let m = u64::try_from(m).ok()?;
        if !a.is_square() || m == 0 {
            return None;
        }
        let n = a.rows();
        let data = (0..n * n).map(|k| reduce(&a[(k / n, k % n)], m)).collect();
        Some(ModMatrix { n, m, data })
    }

    pub fn identity(n: usize, m: u64) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1 % m;
        }
        ModMatrix { n, m, data }
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        let n = self.n;
        let m = self.m as u128;
        let mut data = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc: u128 = 0;
                for k in 0..n {
                    acc = (acc + self.data[i * n + k] as u128 * other.data[k * n + j] as u128) % m;
                }
                data[i * n + j] = acc as u64;
            }
        }
        ModMatrix { n, m: self.m, data }
    }

    /// Residues of `v·self`.
    pub fn vec_mul(&self, v: &[u64]) -> Vec<u64> {
        let n = self.n;
        let m = self.m as u128;
        (0..n)
            .map(|j| {
                let mut acc: u128 = 0;
                for (i, &x) in v.iter().enumerate() {
                    acc = (acc + x as u128 * self.data[i * n + j] as u128) % m;
                }
                acc as u64
            })
            .collect()
    }

    pub fn reduce_vector(&self, v: &IntVector) -> Vec<u64> {
        v.iter().map(|x| reduce(x, self.m)).collect()
    }
}
