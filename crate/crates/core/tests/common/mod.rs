//! Random instance generators and brute-force oracles shared by the
//! integration tests. The oracles use plain `i64`/`i128` arithmetic and
//! do not call into the library's algorithms.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use orbitkit::words::{Letter, Word};
use orbitkit::zlattice::{IntMatrix, IntVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---- free groups ----

/// A reduced word of exactly `len` letters.
pub fn random_word_of_len(rng: &mut impl Rng, rank: usize, len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::new(rng.gen_range(0..rank), rng.gen_bool(0.5));
        if letters.last().is_some_and(|&p| p == l.inverse()) {
            continue;
        }
        letters.push(l);
    }
    Word::from_letters(rank, letters).unwrap()
}

pub fn random_word(rng: &mut impl Rng, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    random_word_of_len(rng, rank, len)
}

/// All reduced words of length at most `max_len`.
pub fn all_words(rank: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::identity(rank)];
    let mut frontier: Vec<Vec<Letter>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for code in 0..2 * rank as u32 {
                let l = Letter::from_code(code);
                if w.last().is_some_and(|&p| p == l.inverse()) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().map(|v| Word::from_letters(rank, v.iter().copied()).unwrap()));
        frontier = next;
    }
    out
}

/// Naive product with free cancellation, independent of the library.
pub fn naive_product(rank: usize, parts: &[&Word]) -> Word {
    let mut stack: Vec<Letter> = Vec::new();
    for w in parts {
        for &l in w.letters() {
            if stack.last().is_some_and(|&p| p == l.inverse()) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
    }
    Word::from_letters(rank, stack).unwrap()
}

pub fn naive_inverse(w: &Word) -> Word {
    Word::from_letters(w.rank(), w.letters().iter().rev().map(|l| l.inverse())).unwrap()
}

/// Searches all conjugators of length at most `max_len`.
pub fn brute_conjugator(u: &Word, v: &Word, max_len: usize) -> Option<Word> {
    all_words(u.rank(), max_len).into_iter().find(|x| naive_product(u.rank(), &[&naive_inverse(x), u, x]) == *v)
}

/// Every product of at most `k` generators and their inverses.
pub fn products(rank: usize, gens: &[Word], k: usize) -> HashSet<Word> {
    let mut symbols: Vec<Word> = gens.to_vec();
    symbols.extend(gens.iter().map(naive_inverse));
    let mut seen: HashSet<Word> = HashSet::from([Word::identity(rank)]);
    let mut frontier = vec![Word::identity(rank)];
    for _ in 0..k {
        let mut next = Vec::new();
        for w in &frontier {
            for s in &symbols {
                let p = naive_product(rank, &[w, s]);
                if seen.insert(p.clone()) {
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    seen
}

// ---- small integer matrices ----

pub type Mat = Vec<Vec<i64>>;

pub fn ident(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let (n, m, p) = (a.len(), b.len(), b[0].len());
    (0..n).map(|i| (0..p).map(|j| (0..m).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

pub fn vec_mul(v: &[i64], a: &Mat) -> Vec<i64> {
    (0..a[0].len()).map(|j| v.iter().zip(a).map(|(x, row)| x * row[j]).sum()).collect()
}

pub fn vec_mul_i128(v: &[i128], a: &Mat) -> Vec<i128> {
    (0..a[0].len()).map(|j| v.iter().zip(a).map(|(x, row)| x * row[j] as i128).sum()).collect()
}

pub fn det(a: &Mat) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return a[0][0] as i128;
    }
    (0..n)
        .map(|j| {
            let minor: Mat = (1..n).map(|i| (0..n).filter(|&c| c != j).map(|c| a[i][c]).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * a[0][j] as i128 * det(&minor)
        })
        .sum()
}

/// `adj(a)` with `a·adj(a) = det(a)·I`.
pub fn adjugate(a: &Mat) -> Vec<Vec<i128>> {
    let n = a.len();
    if n == 1 {
        return vec![vec![1]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let minor: Mat =
                        (0..n).filter(|&r| r != j).map(|r| (0..n).filter(|&c| c != i).map(|c| a[r][c]).collect()).collect();
                    let s = if (i + j) % 2 == 0 { 1 } else { -1 };
                    s * det(&minor)
                })
                .collect()
        })
        .collect()
}

/// Membership in the row lattice of a square nonsingular matrix:
/// `v ∈ L` iff `v·adj(G) ≡ 0 (mod det G)`.
pub struct SquareLattice {
    pub gens: Mat,
    det: i128,
    adj: Vec<Vec<i128>>,
}

impl SquareLattice {
    pub fn new(gens: Mat) -> Option<Self> {
        let det = det(&gens);
        (det != 0).then(|| SquareLattice { adj: adjugate(&gens), gens, det })
    }

    pub fn contains(&self, v: &[i128]) -> bool {
        let n = v.len();
        (0..n).all(|j| (0..n).map(|i| v[i] * self.adj[i][j]).sum::<i128>() % self.det == 0)
    }
}

/// Unimodular matrix built from `steps` random elementary operations.
pub fn random_unimodular(rng: &mut impl Rng, n: usize, steps: usize, bound: i64) -> Mat {
    loop {
        let mut m = ident(n);
        for _ in 0..steps {
            match rng.gen_range(0..3) {
                0 if n > 1 => {
                    let (i, j) = distinct_pair(rng, n);
                    let c = if rng.gen_bool(0.5) { 1 } else { -1 };
                    let src = m[j].clone();
                    for (dst, s) in m[i].iter_mut().zip(src) {
                        *dst += c * s;
                    }
                }
                1 if n > 1 => {
                    let (i, j) = distinct_pair(rng, n);
                    m.swap(i, j);
                }
                _ => {
                    let i = rng.gen_range(0..n);
                    for x in &mut m[i] {
                        *x = -*x;
                    }
                }
            }
        }
        if m.iter().flatten().all(|x| x.abs() <= bound) {
            return m;
        }
    }
}

fn distinct_pair(rng: &mut impl Rng, n: usize) -> (usize, usize) {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    (idx[0], idx[1])
}

pub fn random_vec(rng: &mut impl Rng, n: usize, bound: i64) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-bound..=bound)).collect()
}

pub fn random_mat(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> Mat {
    (0..rows).map(|_| random_vec(rng, cols, bound)).collect()
}

pub fn to_int_matrix(m: &Mat) -> IntMatrix {
    IntMatrix::from_i64(m)
}

pub fn to_int_matrix_cols(m: &Mat, cols: usize) -> IntMatrix {
    if m.is_empty() {
        IntMatrix::zeros(0, cols)
    } else {
        IntMatrix::from_i64(m)
    }
}

pub fn to_int_vector(v: &[i64]) -> IntVector {
    IntVector::from_i64(v)
}

pub fn to_i128(v: &IntVector) -> Vec<i128> {
    v.iter().map(|x| i128::try_from(x).expect("small entry")).collect()
}

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

/// Orbit of `x` under products of at most `depth` elementary matrices
/// `E_ij(±1)`, transpositions and sign changes, entries bounded by `cap`.
pub fn unimodular_orbit(x: &[i64], depth: usize, cap: i64) -> HashSet<Vec<i64>> {
    let n = x.len();
    let mut seen: HashSet<Vec<i64>> = HashSet::from([x.to_vec()]);
    let mut queue = VecDeque::from([(x.to_vec(), 0usize)]);
    while let Some((v, d)) = queue.pop_front() {
        if d == depth {
            continue;
        }
        let mut next = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for c in [1, -1] {
                    let mut w = v.clone();
                    w[j] += c * v[i];
                    next.push(w);
                }
                if i < j {
                    let mut w = v.clone();
                    w.swap(i, j);
                    next.push(w);
                }
            }
            let mut w = v.clone();
            w[i] = -w[i];
            next.push(w);
        }
        for w in next {
            if w.iter().all(|e| e.abs() <= cap) && seen.insert(w.clone()) {
                queue.push_back((w, d + 1));
            }
        }
    }
    seen
}

// ---- semidirect products, independent arithmetic ----

/// `Z^2 ⋊_A Z` with `t⁻¹·x·t = x·A`, on `i128` entries with powers of `A`
/// precomputed for `|k| <= range`.
pub struct SmallExtension {
    range: i64,
    powers: Vec<Mat>,
}

impl SmallExtension {
    pub fn new(a: &Mat, range: i64) -> Self {
        let inv = inverse_2x2(a);
        let mut powers = Vec::new();
        for k in -range..=range {
            let (base, e) = if k < 0 { (&inv, -k) } else { (a, k) };
            let mut p = ident(2);
            for _ in 0..e {
                p = mat_mul(&p, base);
            }
            powers.push(p);
        }
        SmallExtension { range, powers }
    }

    pub fn power(&self, k: i64) -> &Mat {
        &self.powers[(k + self.range) as usize]
    }

    pub fn mul(&self, g: &(Vec<i128>, i64), h: &(Vec<i128>, i64)) -> (Vec<i128>, i64) {
        let twisted = vec_mul_i128(&h.0, self.power(-g.1));
        (g.0.iter().zip(&twisted).map(|(a, b)| a + b).collect(), g.1 + h.1)
    }

    pub fn inv(&self, g: &(Vec<i128>, i64)) -> (Vec<i128>, i64) {
        let w = vec_mul_i128(&g.0, self.power(g.1));
        (w.into_iter().map(|x| -x).collect(), -g.1)
    }

    pub fn conj(&self, g: &(Vec<i128>, i64), h: &(Vec<i128>, i64)) -> (Vec<i128>, i64) {
        self.mul(&self.mul(&self.inv(h), g), h)
    }
}

pub fn inverse_2x2(a: &Mat) -> Mat {
    let d = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    assert!(d.abs() == 1);
    vec![vec![d * a[1][1], -d * a[0][1]], vec![-d * a[1][0], d * a[0][0]]]
}
