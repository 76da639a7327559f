//! Whitehead's algorithm for `Aut(F_n)`-orbits of elements, together with
//! the bounded searches built on it.
//!
//! Automorphisms act on the right: `apply(α, w)` is `w·α`. A
//! [`MoveSequence`] `[m1, m2, ...]` first applies `m1`, then `m2`.
//!
//! Inner automorphisms are themselves Whitehead moves (multiplier `l`, cut
//! set = every letter except `l⁻¹` gives `x ↦ l⁻¹·x·l`), so every
//! certificate produced here is a plain list of Type I and Type II moves
//! that maps the source word to the target word exactly.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::decision::{Decision, Refutation};
use crate::error::{Error, Result};
use crate::stallings::StallingsGraph;
use crate::words::{conjugacy_decide, Letter, Word};

/// Resource bounds for the Whitehead machinery.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WhiteheadConfig {
    pub max_rank: usize,
    /// Largest minimal cyclic length for which the level graph is explored.
    pub max_min_length: usize,
    /// Largest number of cyclic words in one level-graph component.
    pub max_component: usize,
    /// Longest intermediate word tolerated by [`cyclic_od_bounded`].
    pub max_word_length: usize,
}

impl Default for WhiteheadConfig {
    fn default() -> Self {
        WhiteheadConfig {
            max_rank: 4,
            max_min_length: 12,
            max_component: 2_000_000,
            max_word_length: 1_000_000,
        }
    }
}

/// An elementary automorphism of `F_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WhiteheadMove {
    /// Signed permutation: generator `i` maps to `images[i]`.
    TypeI { images: Vec<Letter> },
    /// Multiplier `a` with cut set `cut` (bitmask over letter codes,
    /// containing `a` but not `a⁻¹`). A letter `x ∉ {a, a⁻¹}` maps to
    /// `[a⁻¹ if x⁻¹ ∈ cut] · x · [a if x ∈ cut]`; `a` is fixed.
    TypeII { multiplier: Letter, cut: u64 },
}

impl WhiteheadMove {
    /// Conjugation `x ↦ l⁻¹·x·l`.
    pub fn inner(rank: usize, l: Letter) -> Self {
        let all = full_mask(rank);
        WhiteheadMove::TypeII { multiplier: l, cut: all & !(1u64 << l.inverse().code()) }
    }

    pub fn type_ii(multiplier: Letter, cut: &[Letter]) -> Result<Self> {
        let mut mask = 0u64;
        for l in cut {
            if l.code() >= 64 {
                return Err(Error::Invalid("cut sets are limited to rank 32".into()));
            }
            mask |= 1 << l.code();
        }
        let m = WhiteheadMove::TypeII { multiplier, cut: mask };
        m.validate(usize::MAX)?;
        Ok(m)
    }

    fn validate(&self, rank: usize) -> Result<()> {
        match self {
            WhiteheadMove::TypeI { images } => {
                if rank != usize::MAX && images.len() != rank {
                    return Err(Error::RankMismatch { expected: rank, found: images.len() });
                }
                let mut seen = vec![false; images.len()];
                for l in images {
                    if l.index() >= images.len() || seen[l.index()] {
                        return Err(Error::Invalid("type I move is not a signed permutation".into()));
                    }
                    seen[l.index()] = true;
                }
            }
            WhiteheadMove::TypeII { multiplier, cut } => {
                if multiplier.code() >= 64 {
                    return Err(Error::Invalid("cut sets are limited to rank 32".into()));
                }
                if cut & (1 << multiplier.code()) == 0 || cut & (1 << multiplier.inverse().code()) != 0 {
                    return Err(Error::Invalid("cut set must contain the multiplier but not its inverse".into()));
                }
                if rank != usize::MAX
                    && (multiplier.index() >= rank || (rank < 32 && cut >> (2 * rank) != 0)) {
                        return Err(Error::Invalid(format!("move exceeds rank {rank}")));
                    }
            }
        }
        Ok(())
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.validate(w.rank())?;
        Ok(self.apply_unchecked(w))
    }

    pub(crate) fn apply_unchecked(&self, w: &Word) -> Word {
        match self {
            WhiteheadMove::TypeI { images } => Word::from_letters_unchecked(
                w.rank(),
                w.letters().iter().map(|l| {
                    let img = images[l.index()];
                    if l.is_inverse() {
                        img.inverse()
                    } else {
                        img
                    }
                }),
            ),
            WhiteheadMove::TypeII { multiplier, cut } => {
                let a = *multiplier;
                let mut out = Vec::with_capacity(w.len() * 2);
                for &x in w.letters() {
                    if x.index() == a.index() {
                        out.push(x);
                        continue;
                    }
                    if cut & (1 << x.inverse().code()) != 0 {
                        out.push(a.inverse());
                    }
                    out.push(x);
                    if cut & (1 << x.code()) != 0 {
                        out.push(a);
                    }
                }
                Word::from_letters_unchecked(w.rank(), out)
            }
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            WhiteheadMove::TypeI { images } => {
                let mut inv = vec![Letter::new(0, false); images.len()];
                for (i, l) in images.iter().enumerate() {
                    inv[l.index()] = Letter::new(i, l.is_inverse());
                }
                WhiteheadMove::TypeI { images: inv }
            }
            WhiteheadMove::TypeII { multiplier, cut } => {
                let a = *multiplier;
                let cut = (cut & !(1 << a.code())) | (1 << a.inverse().code());
                WhiteheadMove::TypeII { multiplier: a.inverse(), cut }
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            WhiteheadMove::TypeI { images } => images.iter().enumerate().all(|(i, l)| *l == Letter::new(i, false)),
            WhiteheadMove::TypeII { multiplier, cut } => *cut == 1 << multiplier.code(),
        }
    }

    pub fn to_automorphism(&self, rank: usize) -> Result<Automorphism> {
        MoveSequence(vec![self.clone()]).to_automorphism(rank)
    }

    fn to_json(&self) -> MoveJson {
        let pair = |l: &Letter| (l.index() + 1, l.sign());
        match self {
            WhiteheadMove::TypeI { images } => MoveJson::I { images: images.iter().map(pair).collect() },
            WhiteheadMove::TypeII { multiplier, cut } => MoveJson::II {
                multiplier: pair(multiplier),
                cut: (0..64).filter(|c| cut & (1u64 << c) != 0).map(|c| pair(&Letter::from_code(c))).collect(),
            },
        }
    }

    fn from_json(j: &MoveJson) -> Result<Self> {
        let letter = |&(i, s): &(usize, i32)| -> Result<Letter> {
            if i == 0 || !(s == 1 || s == -1) {
                return Err(Error::parse(format!("[{i}, {s}]"), "expected [index >= 1, sign = +-1]"));
            }
            Ok(Letter::new(i - 1, s == -1))
        };
        let m = match j {
            MoveJson::I { images } => {
                WhiteheadMove::TypeI { images: images.iter().map(letter).collect::<Result<_>>()? }
            }
            MoveJson::II { multiplier, cut } => {
                let cut: Vec<Letter> = cut.iter().map(letter).collect::<Result<_>>()?;
                WhiteheadMove::type_ii(letter(multiplier)?, &cut)?
            }
        };
        m.validate(usize::MAX)?;
        Ok(m)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type")]
enum MoveJson {
    I { images: Vec<(usize, i32)> },
    II { multiplier: (usize, i32), cut: Vec<(usize, i32)> },
}

impl Serialize for WhiteheadMove {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for WhiteheadMove {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MoveJson::deserialize(d)?;
        WhiteheadMove::from_json(&j).map_err(serde::de::Error::custom)
    }
}

fn full_mask(rank: usize) -> u64 {
    if rank >= 32 {
        u64::MAX
    } else {
        (1u64 << (2 * rank)) - 1
    }
}

/// Non-identity Type II moves in canonical order: multiplier code
/// ascending, then cut-set bitmask ascending.
pub fn type_ii_moves(rank: usize) -> Vec<WhiteheadMove> {
    assert!(rank <= 16, "type II enumeration limited to rank 16");
    let mut out = Vec::new();
    for a in 0..2 * rank as u32 {
        let a = Letter::from_code(a);
        let others: Vec<u32> = (0..2 * rank as u32).filter(|&c| c / 2 != a.code() / 2).collect();
        for sub in 1u64..(1u64 << others.len()) {
            let mut cut = 1u64 << a.code();
            for (bit, &c) in others.iter().enumerate() {
                if sub & (1 << bit) != 0 {
                    cut |= 1 << c;
                }
            }
            out.push(WhiteheadMove::TypeII { multiplier: a, cut });
        }
    }
    out
}

/// Non-identity signed permutations, permutations in lexicographic order
/// and inversion masks ascending within each.
pub fn type_i_moves(rank: usize) -> Vec<WhiteheadMove> {
    let mut perms = Vec::new();
    permutations(&mut (0..rank).collect::<Vec<_>>(), 0, &mut perms);
    perms.sort();
    let mut out = Vec::new();
    for p in perms {
        for mask in 0u32..(1 << rank) {
            let images = p.iter().enumerate().map(|(i, &j)| Letter::new(j, mask & (1 << i) != 0)).collect();
            let m = WhiteheadMove::TypeI { images };
            if !m.is_identity() {
                out.push(m);
            }
        }
    }
    out
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

/// A composable certificate of `Aut(F_n)`-orbit equivalence.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MoveSequence(pub Vec<WhiteheadMove>);

impl MoveSequence {
    pub fn moves(&self) -> &[WhiteheadMove] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        let mut cur = w.clone();
        for m in &self.0 {
            cur = m.apply(&cur)?;
        }
        Ok(cur)
    }

    pub fn inverse(&self) -> MoveSequence {
        MoveSequence(self.0.iter().rev().map(WhiteheadMove::inverse).collect())
    }

    pub fn extend(&mut self, other: MoveSequence) {
        self.0.extend(other.0);
    }

    /// Appends the inner automorphism `y ↦ x⁻¹·y·x`.
    pub fn push_conjugation(&mut self, x: &Word) {
        for &l in x.letters() {
            self.0.push(WhiteheadMove::inner(x.rank(), l));
        }
    }

    pub fn to_automorphism(&self, rank: usize) -> Result<Automorphism> {
        let gens: Vec<Word> = (0..rank).map(|i| Word::generator(rank, i)).collect();
        let inv = self.inverse();
        let images = gens.iter().map(|g| self.apply(g)).collect::<Result<Vec<_>>>()?;
        let inverse_images = gens.iter().map(|g| inv.apply(g)).collect::<Result<Vec<_>>>()?;
        Automorphism::new(images, Some(inverse_images))
    }
}

/// An automorphism given by generator images, optionally with the images
/// of its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    images: Vec<Word>,
    inverse_images: Option<Vec<Word>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismJson {
    pub images: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse_images: Option<Vec<String>>,
}

impl Automorphism {
    /// Checks that the images generate `F_n` (so they form a basis) and,
    /// when given, that the inverse images compose to the identity on
    /// both sides.
    pub fn new(images: Vec<Word>, inverse_images: Option<Vec<Word>>) -> Result<Self> {
        let rank = images.len();
        if rank == 0 {
            return Err(Error::Invalid("automorphism needs at least one generator image".into()));
        }
        for w in images.iter().chain(inverse_images.iter().flatten()) {
            if w.rank() != rank {
                return Err(Error::RankMismatch { expected: rank, found: w.rank() });
            }
        }
        if !StallingsGraph::build(rank, &images)?.is_whole_group() {
            return Err(Error::Invalid("images do not generate the free group".into()));
        }
        let aut = Automorphism { images, inverse_images: None };
        if let Some(inv) = inverse_images {
            if inv.len() != rank {
                return Err(Error::RankMismatch { expected: rank, found: inv.len() });
            }
            let inv_aut = Automorphism { images: inv.clone(), inverse_images: None };
            for (i, (img, pre)) in aut.images.iter().zip(&inv).enumerate() {
                let g = Word::generator(rank, i);
                if inv_aut.apply_unchecked(img) != g || aut.apply_unchecked(pre) != g {
                    return Err(Error::Invalid("inverse images do not invert the automorphism".into()));
                }
            }
            return Ok(Automorphism { inverse_images: Some(inv), ..aut });
        }
        Ok(aut)
    }

    pub fn identity(rank: usize) -> Self {
        let gens: Vec<Word> = (0..rank).map(|i| Word::generator(rank, i)).collect();
        Automorphism { images: gens.clone(), inverse_images: Some(gens) }
    }

    pub fn parse(images: &[&str], inverse_images: Option<&[&str]>) -> Result<Self> {
        let rank = images.len();
        let p = |s: &[&str]| s.iter().map(|x| Word::parse(x, rank)).collect::<Result<Vec<_>>>();
        Automorphism::new(p(images)?, inverse_images.map(p).transpose()?)
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn inverse_images(&self) -> Option<&[Word]> {
        self.inverse_images.as_deref()
    }

    pub fn inverse(&self) -> Option<Automorphism> {
        self.inverse_images
            .as_ref()
            .map(|inv| Automorphism { images: inv.clone(), inverse_images: Some(self.images.clone()) })
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        if w.rank() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), found: w.rank() });
        }
        Ok(self.apply_unchecked(w))
    }

    fn apply_unchecked(&self, w: &Word) -> Word {
        let mut out = Word::identity(self.rank());
        for l in w.letters() {
            let img = &self.images[l.index()];
            out = if l.is_inverse() { out.mul(&img.inverse()) } else { out.mul(img) };
        }
        out
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Automorphism) -> Result<Automorphism> {
        if other.rank() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), found: other.rank() });
        }
        let images = self.images.iter().map(|w| other.apply_unchecked(w)).collect();
        let inverse_images = match (&self.inverse_images, &other.inverse_images) {
            (Some(a), Some(b)) => {
                let a = Automorphism { images: a.clone(), inverse_images: None };
                Some(b.iter().map(|w| a.apply_unchecked(w)).collect())
            }
            _ => None,
        };
        Ok(Automorphism { images, inverse_images })
    }

    pub fn to_json_form(&self) -> AutomorphismJson {
        AutomorphismJson {
            images: self.images.iter().map(|w| w.to_string()).collect(),
            inverse_images: self.inverse_images.as_ref().map(|v| v.iter().map(|w| w.to_string()).collect()),
        }
    }

    pub fn from_json_form(j: &AutomorphismJson) -> Result<Self> {
        let imgs: Vec<&str> = j.images.iter().map(String::as_str).collect();
        let inv: Option<Vec<&str>> = j.inverse_images.as_ref().map(|v| v.iter().map(String::as_str).collect());
        Automorphism::parse(&imgs, inv.as_deref())
    }
}

fn check_rank(config: &WhiteheadConfig, rank: usize) -> Result<()> {
    if rank > config.max_rank {
        return Err(Error::Capacity(format!("rank {rank} exceeds configured maximum {}", config.max_rank)));
    }
    Ok(())
}

/// Reduces the cyclic length of `w` with strictly decreasing Type II moves.
///
/// Returns the cyclically reduced minimum `w_min` and moves mapping `w`
/// to `w_min` exactly (conjugations included).
pub fn whitehead_minimize(w: &Word) -> Result<(Word, MoveSequence)> {
    whitehead_minimize_with(w, &WhiteheadConfig::default())
}

pub fn whitehead_minimize_with(w: &Word, config: &WhiteheadConfig) -> Result<(Word, MoveSequence)> {
    check_rank(config, w.rank())?;
    let (mut cur, c) = w.cyclic_reduce();
    let mut seq = MoveSequence::default();
    seq.push_conjugation(&c);
    let moves = type_ii_moves(w.rank());
    'outer: loop {
        for m in &moves {
            let img = m.apply_unchecked(&cur);
            let (core, cc) = img.cyclic_reduce();
            if core.len() < cur.len() {
                seq.0.push(m.clone());
                seq.push_conjugation(&cc);
                cur = core;
                continue 'outer;
            }
        }
        break;
    }
    Ok((cur, seq))
}

/// `true` iff `w` lies in the orbit of a generator.
pub fn is_primitive(w: &Word) -> Result<bool> {
    is_primitive_with(w, &WhiteheadConfig::default())
}

pub fn is_primitive_with(w: &Word, config: &WhiteheadConfig) -> Result<bool> {
    Ok(whitehead_minimize_with(w, config)?.0.len() == 1)
}

// Level graphs: cyclically reduced minimal words of one length, joined by
// length-preserving moves. Each component is stored as a BFS tree rooted
// at its least word, so paths are independent of query order.

struct NodeInfo {
    root: Vec<Letter>,
    parent: Option<(Vec<Letter>, WhiteheadMove)>,
}

#[derive(Default)]
struct Level {
    nodes: HashMap<Vec<Letter>, NodeInfo>,
}

type LevelCache = Mutex<HashMap<(usize, usize), Level>>;

fn level_cache() -> &'static LevelCache {
    static CACHE: OnceLock<LevelCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn level_neighbors(w: &Word, moves: &[WhiteheadMove]) -> Vec<(Word, WhiteheadMove)> {
    moves
        .iter()
        .filter_map(|m| {
            let img = m.apply_unchecked(w).canonical_cyclic();
            (img.len() == w.len()).then(|| (img, m.clone()))
        })
        .collect()
}

fn explore_component(level: &mut Level, start: &Word, config: &WhiteheadConfig) -> Result<()> {
    if level.nodes.contains_key(start.letters()) {
        return Ok(());
    }
    let rank = start.rank();
    let mut moves = type_i_moves(rank);
    moves.extend(type_ii_moves(rank));

    let mut seen: HashSet<Word> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(w) = queue.pop_front() {
        for (n, _) in level_neighbors(&w, &moves) {
            if seen.insert(n.clone()) {
                if seen.len() > config.max_component {
                    return Err(Error::Capacity(format!(
                        "level component exceeds {} cyclic words",
                        config.max_component
                    )));
                }
                queue.push_back(n);
            }
        }
    }
    let root = seen.iter().min().unwrap().clone();
    let root_key = root.letters().to_vec();
    level.nodes.insert(root_key.clone(), NodeInfo { root: root_key.clone(), parent: None });
    let mut queue = VecDeque::from([root]);
    while let Some(w) = queue.pop_front() {
        for (n, m) in level_neighbors(&w, &moves) {
            if !level.nodes.contains_key(n.letters()) {
                let info = NodeInfo { root: root_key.clone(), parent: Some((w.letters().to_vec(), m)) };
                level.nodes.insert(n.letters().to_vec(), info);
                queue.push_back(n);
            }
        }
    }
    Ok(())
}

/// Moves leading from the component root to `key`, and the root.
fn chain_from_root(level: &Level, key: &[Letter]) -> (Vec<Letter>, MoveSequence) {
    let mut moves = Vec::new();
    let mut cur = key.to_vec();
    loop {
        let info = &level.nodes[&cur];
        match &info.parent {
            Some((p, m)) => {
                moves.push(m.clone());
                cur = p.clone();
            }
            None => break,
        }
    }
    moves.reverse();
    (cur, MoveSequence(moves))
}

/// Decides whether `u·α = v` for some `α ∈ Aut(F_n)`.
///
/// Complete within the configured rank and length bounds; outside them a
/// capacity error is returned rather than an answer.
pub fn aut_orbit_decide(u: &Word, v: &Word) -> Result<Decision<MoveSequence>> {
    aut_orbit_decide_with(u, v, &WhiteheadConfig::default())
}

pub fn aut_orbit_decide_with(u: &Word, v: &Word, config: &WhiteheadConfig) -> Result<Decision<MoveSequence>> {
    if u.rank() != v.rank() {
        return Err(Error::RankMismatch { expected: u.rank(), found: v.rank() });
    }
    let rank = u.rank();
    let (um, mu) = whitehead_minimize_with(u, config)?;
    let (vm, mv) = whitehead_minimize_with(v, config)?;
    if um.len() != vm.len() {
        return Ok(Decision::No(Refutation::InvariantMismatch {
            invariant: format!("minimal cyclic length {} != {}", um.len(), vm.len()),
        }));
    }
    let len = um.len();
    let mut seq = mu;
    if len > 0 {
        if len > config.max_min_length {
            return Err(Error::Capacity(format!(
                "minimal length {len} exceeds configured maximum {}",
                config.max_min_length
            )));
        }
        let a = um.canonical_cyclic();
        let b = vm.canonical_cyclic();
        let mut cache = level_cache().lock().unwrap_or_else(|e| e.into_inner());
        let level = cache.entry((rank, len)).or_default();
        explore_component(level, &a, config)?;
        if level.nodes[a.letters()].root != level.nodes.get(b.letters()).map_or_else(Vec::new, |n| n.root.clone()) {
            return Ok(Decision::No(Refutation::Exhaustive));
        }
        let (_, to_a) = chain_from_root(level, a.letters());
        let (_, to_b) = chain_from_root(level, b.letters());
        seq.extend(to_a.inverse());
        seq.extend(to_b);
    }
    seq.extend(mv.inverse());
    let image = seq.apply(u)?;
    let Decision::Yes(x) = conjugacy_decide(&image, v)? else {
        unreachable!("level path must end in the conjugacy class of the target");
    };
    seq.push_conjugation(&x);
    debug_assert_eq!(seq.apply(u)?, *v);
    Ok(Decision::Yes(seq))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SodWitness {
    /// The subgroup element hit by the orbit.
    pub h: Word,
    pub moves: MoveSequence,
}

/// Searches subgroup elements of length at most `max_len` for one in the
/// `Aut(F_n)`-orbit of `x`. Never answers `No`.
pub fn sod_aut_bounded(x: &Word, h: &StallingsGraph, max_len: usize) -> Result<Decision<SodWitness>> {
    sod_aut_bounded_with(x, h, max_len, &WhiteheadConfig::default())
}

pub fn sod_aut_bounded_with(
    x: &Word,
    h: &StallingsGraph,
    max_len: usize,
    config: &WhiteheadConfig,
) -> Result<Decision<SodWitness>> {
    if x.rank() != h.rank() {
        return Err(Error::RankMismatch { expected: h.rank(), found: x.rank() });
    }
    for cand in h.enumerate_elements(max_len)? {
        if let Decision::Yes(moves) = aut_orbit_decide_with(x, &cand, config)? {
            return Ok(Decision::Yes(SodWitness { h: cand, moves }));
        }
    }
    Ok(Decision::Unknown { bound: max_len as u64 })
}

/// Bounded search for a primitive element of the subgroup.
pub fn contains_primitive_bounded(h: &StallingsGraph, max_len: usize) -> Result<Decision<SodWitness>> {
    sod_aut_bounded(&Word::generator(h.rank(), 0), h, max_len)
}

pub fn contains_primitive_bounded_with(
    h: &StallingsGraph,
    max_len: usize,
    config: &WhiteheadConfig,
) -> Result<Decision<SodWitness>> {
    sod_aut_bounded_with(&Word::generator(h.rank(), 0), h, max_len, config)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclicOdWitness {
    pub k: i64,
    /// `x` with `x⁻¹ · (u·φ^k) · x = v`.
    pub conjugator: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicOdOutcome {
    pub decision: Decision<CyclicOdWitness>,
    /// Set when `φ` has no inverse images, so only `k >= 0` was searched.
    pub nonnegative_only: bool,
}

/// Searches `k = 0, 1, -1, ..., K, -K` for `u·φ^k` conjugate to `v`.
/// Never answers `No`.
pub fn cyclic_od_bounded(phi: &Automorphism, u: &Word, v: &Word, max_exp: u64) -> Result<CyclicOdOutcome> {
    cyclic_od_bounded_with(phi, u, v, max_exp, &WhiteheadConfig::default())
}

pub fn cyclic_od_bounded_with(
    phi: &Automorphism,
    u: &Word,
    v: &Word,
    max_exp: u64,
    config: &WhiteheadConfig,
) -> Result<CyclicOdOutcome> {
    let inverse = phi.inverse();
    let nonnegative_only = inverse.is_none() && max_exp > 0;
    let found = |k: i64, w: &Word| -> Result<Option<Decision<CyclicOdWitness>>> {
        if w.len() > config.max_word_length {
            return Err(Error::Capacity(format!(
                "orbit word length exceeds {} at exponent {k}",
                config.max_word_length
            )));
        }
        Ok(conjugacy_decide(w, v)?
            .into_witness()
            .map(|x| Decision::Yes(CyclicOdWitness { k, conjugator: x })))
    };
    let outcome = |decision| CyclicOdOutcome { decision, nonnegative_only };
    if let Some(d) = found(0, u)? {
        // rank checks happen inside conjugacy_decide and apply
        return Ok(outcome(d));
    }
    let mut fwd = u.clone();
    let mut bwd = u.clone();
    for k in 1..=max_exp as i64 {
        fwd = phi.apply(&fwd)?;
        if let Some(d) = found(k, &fwd)? {
            return Ok(outcome(d));
        }
        if let Some(inv) = &inverse {
            bwd = inv.apply(&bwd)?;
            if let Some(d) = found(-k, &bwd)? {
                return Ok(outcome(d));
            }
        }
    }
    Ok(outcome(Decision::Unknown { bound: max_exp }))
}
