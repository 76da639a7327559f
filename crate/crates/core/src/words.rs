//! Elements of the free group `F_n`: parsing, free and cyclic reduction,
//! roots and the conjugacy decider.
//!
//! Text form: generators are `a`..`z`, their inverses `A`..`Z`; the identity
//! is written `1` (the empty string is also accepted on input).

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::decision::{Decision, Refutation};
use crate::error::{Error, Result};

/// Largest rank expressible with the ASCII letter encoding.
pub const MAX_TEXT_RANK: usize = 26;

/// A generator or inverse generator, encoded as `2 * index + inverse`.
///
/// The derived order is `a < A < b < B < ...`, used for every
/// lexicographic comparison in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u32);

impl Letter {
    /// Generator `index` (0-based), inverted when `inverse` is set.
    pub fn new(index: usize, inverse: bool) -> Self {
        Letter(2 * index as u32 + inverse as u32)
    }

    pub fn from_code(code: u32) -> Self {
        Letter(code)
    }

    pub fn code(self) -> u32 {
        self.0
    }

    /// 0-based generator index.
    pub fn index(self) -> usize {
        (self.0 / 2) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    pub fn sign(self) -> i32 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    pub fn to_char(self) -> Option<char> {
        if self.index() >= MAX_TEXT_RANK {
            return None;
        }
        let base = if self.is_inverse() { b'A' } else { b'a' };
        Some((base + self.index() as u8) as char)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_char() {
            Some(c) => write!(f, "{c}"),
            None if self.is_inverse() => write!(f, "x{}^-1", self.index() + 1),
            None => write!(f, "x{}", self.index() + 1),
        }
    }
}

/// A freely reduced word over a fixed-rank alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(rank: usize) -> Self {
        Word { rank, letters: Vec::new() }
    }

    pub fn generator(rank: usize, index: usize) -> Self {
        assert!(index < rank, "generator {index} out of rank {rank}");
        Word { rank, letters: vec![Letter::new(index, false)] }
    }

    /// Freely reduces `letters`. Fails if a letter falls outside `rank`.
    pub fn from_letters(rank: usize, letters: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if l.index() >= rank {
                return Err(Error::parse(l.to_string(), format!("generator out of rank {rank}")));
            }
            push_reduced(&mut out, l);
        }
        Ok(Word { rank, letters: out })
    }

    /// Builds from letters already known to be in range.
    pub(crate) fn from_letters_unchecked(rank: usize, letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out = Vec::new();
        for l in letters {
            push_reduced(&mut out, l);
        }
        Word { rank, letters: out }
    }

    /// Parses the ASCII form, e.g. `"abA"`.
    pub fn parse(text: &str, rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Invalid("rank must be positive".into()));
        }
        let text = text.trim();
        if text.is_empty() || text == "1" {
            return Ok(Word::identity(rank));
        }
        let mut out = Vec::with_capacity(text.len());
        for c in text.chars() {
            let letter = match c {
                'a'..='z' => Letter::new((c as u8 - b'a') as usize, false),
                'A'..='Z' => Letter::new((c as u8 - b'A') as usize, true),
                _ => return Err(Error::parse(c.to_string(), "illegal character in word")),
            };
            if letter.index() >= rank {
                return Err(Error::parse(c.to_string(), format!("letter out of rank {rank}")));
            }
            push_reduced(&mut out, letter);
        }
        Ok(Word { rank, letters: out })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn check_rank(&self, other: &Word) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: other.rank });
        }
        Ok(())
    }

    /// Freely reduced product `self · other`.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        self.check_rank(other)?;
        Ok(self.mul(other))
    }

    /// Product without the rank check; callers guarantee equal ranks.
    pub(crate) fn mul(&self, other: &Word) -> Word {
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        Word { rank: self.rank, letters: out }
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `self^exp` for any integer exponent.
    pub fn pow(&self, exp: i64) -> Word {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity(self.rank);
        for _ in 0..exp.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `x⁻¹ · self · x`.
    pub fn conjugate_by(&self, x: &Word) -> Word {
        x.inverse().mul(self).mul(x)
    }

    /// Splits `self = c · core · c⁻¹` with `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let n = self.letters.len();
        let mut i = 0;
        while 2 * i + 1 < n && self.letters[i] == self.letters[n - 1 - i].inverse() {
            i += 1;
        }
        let core = Word { rank: self.rank, letters: self.letters[i..n - i].to_vec() };
        let c = Word { rank: self.rank, letters: self.letters[..i].to_vec() };
        (core, c)
    }

    pub fn cyclic_core(&self) -> Word {
        self.cyclic_reduce().0
    }

    pub fn cyclic_len(&self) -> usize {
        self.cyclic_core().len()
    }

    /// Rotation by `offset`: `letters[offset..] ++ letters[..offset]`.
    pub fn rotate(&self, offset: usize) -> Word {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            let o = offset % letters.len();
            letters.rotate_left(o);
        }
        Word { rank: self.rank, letters }
    }

    /// Lexicographically least rotation of the cyclic core; a complete
    /// invariant of the conjugacy class.
    pub fn canonical_cyclic(&self) -> Word {
        let core = self.cyclic_core();
        least_rotation(&core.letters)
            .map(|o| core.rotate(o))
            .unwrap_or(core)
    }

    /// `(root, m)` with `self = root^m` and `m` maximal.
    pub fn root(&self) -> Result<(Word, usize)> {
        if self.is_identity() {
            return Err(Error::Invalid("the identity has no root".into()));
        }
        let (core, c) = self.cyclic_reduce();
        let n = core.len();
        let period = (1..=n)
            .filter(|d| n % d == 0)
            .find(|&d| (d..n).all(|i| core.letters[i] == core.letters[i - d]))
            .unwrap_or(n);
        let base = Word { rank: self.rank, letters: core.letters[..period].to_vec() };
        let root = base.conjugate_by(&c.inverse());
        Ok((root, n / period))
    }

    /// Number of occurrences of each generator, signed; the image of the
    /// word in the abelianisation `Z^n`.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64; self.rank];
        for l in &self.letters {
            sums[l.index()] += l.sign() as i64;
        }
        sums
    }

    /// JSON form `{"rank": n, "letters": [[i, s], ...]}` with 1-based `i`.
    pub fn to_json_form(&self) -> WordJson {
        WordJson {
            rank: self.rank,
            letters: self.letters.iter().map(|l| (l.index() + 1, l.sign())).collect(),
        }
    }

    pub fn from_json_form(form: &WordJson) -> Result<Word> {
        if form.rank == 0 {
            return Err(Error::Invalid("rank must be positive".into()));
        }
        let mut letters = Vec::with_capacity(form.letters.len());
        for &(i, s) in &form.letters {
            if i == 0 || i > form.rank {
                return Err(Error::parse(format!("[{i}, {s}]"), format!("index out of rank {}", form.rank)));
            }
            let inverse = match s {
                1 => false,
                -1 => true,
                _ => return Err(Error::parse(format!("[{i}, {s}]"), "sign must be 1 or -1")),
            };
            letters.push(Letter::new(i - 1, inverse));
        }
        Word::from_letters(form.rank, letters)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex: length first, then letters.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
            .then_with(|| self.rank.cmp(&other.rank))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordJson {
    pub rank: usize,
    pub letters: Vec<(usize, i32)>,
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

fn least_rotation(letters: &[Letter]) -> Option<usize> {
    let n = letters.len();
    if n == 0 {
        return None;
    }
    let mut best = 0;
    for o in 1..n {
        let cmp = (0..n)
            .map(|i| letters[(o + i) % n].cmp(&letters[(best + i) % n]))
            .find(|c| *c != Ordering::Equal)
            .unwrap_or(Ordering::Equal);
        if cmp == Ordering::Less {
            best = o;
        }
    }
    Some(best)
}

/// Decides whether `x⁻¹ u x = v` has a solution.
///
/// Complete: the witness is the shortlex-least conjugator among those
/// induced by the rotation offsets matching the two cyclic cores.
pub fn conjugacy_decide(u: &Word, v: &Word) -> Result<Decision<Word>> {
    u.check_rank(v)?;
    let (cu, c) = u.cyclic_reduce();
    let (cv, d) = v.cyclic_reduce();
    if cu.len() != cv.len() {
        return Ok(Decision::No(Refutation::InvariantMismatch {
            invariant: format!("cyclic length {} != {}", cu.len(), cv.len()),
        }));
    }
    // u = c·cu·c⁻¹, v = d·cv·d⁻¹; cv = p⁻¹·cu·p when cv is cu rotated by |p|.
    let n = cu.len();
    let mut best: Option<Word> = None;
    for offset in 0..n.max(1) {
        if n > 0 && cu.rotate(offset) != cv {
            continue;
        }
        let p = Word { rank: u.rank, letters: cu.letters[..offset.min(n)].to_vec() };
        let x = c.mul(&p).mul(&d.inverse());
        if best.as_ref().is_none_or(|b| x < *b) {
            best = Some(x);
        }
    }
    Ok(match best {
        Some(x) => Decision::Yes(x),
        None => Decision::No(Refutation::InvariantMismatch {
            invariant: format!("cyclic words {} and {} differ", cu.canonical_cyclic(), cv.canonical_cyclic()),
        }),
    })
}
