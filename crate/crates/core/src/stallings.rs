//! Finitely generated subgroups of `F_n` as folded core graphs.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::decision::{Decision, Refutation};
use crate::error::{Error, Result};
use crate::words::{Letter, Word};

/// Default cap on [`StallingsGraph::enumerate_elements`] word length.
pub const DEFAULT_MAX_ENUMERATION_LENGTH: usize = 16;

/// A folded, cored, basepointed graph in canonical BFS numbering.
///
/// Vertex 0 is the basepoint. `trans[v][code]` is the endpoint of the edge
/// leaving `v` labelled by the letter with that code; inverse letters
/// traverse edges backwards.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StallingsGraph {
    rank: usize,
    trans: Vec<Vec<Option<usize>>>,
}

/// JSON form: positive labels only, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub rank: usize,
    pub vertices: usize,
    pub basepoint: usize,
    pub edges: Vec<(usize, usize, usize)>,
}

struct Folder {
    parent: Vec<usize>,
    trans: Vec<Vec<Option<usize>>>,
    pending: Vec<(usize, usize)>,
}

impl Folder {
    fn new(rank: usize) -> Self {
        let mut f = Folder { parent: Vec::new(), trans: Vec::new(), pending: Vec::new() };
        f.add_vertex(rank);
        f
    }

    fn add_vertex(&mut self, rank: usize) -> usize {
        self.parent.push(self.parent.len());
        self.trans.push(vec![None; 2 * rank]);
        self.parent.len() - 1
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn half_link(&mut self, from: usize, code: usize, to: usize) {
        match self.trans[from][code] {
            Some(existing) => self.pending.push((existing, to)),
            None => self.trans[from][code] = Some(to),
        }
    }

    fn link(&mut self, from: usize, l: Letter, to: usize) {
        let (from, to) = (self.find(from), self.find(to));
        self.half_link(from, l.code() as usize, to);
        self.half_link(to, l.inverse().code() as usize, from);
        self.fold();
    }

    fn fold(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            self.parent[a] = b;
            let moved = std::mem::take(&mut self.trans[a]);
            for (code, target) in moved.into_iter().enumerate() {
                if let Some(t) = target {
                    let t = self.find(t);
                    self.half_link(b, code, t);
                }
            }
        }
    }
}

impl StallingsGraph {
    /// Folds the wedge of loops spelling `gens` and removes hanging trees.
    pub fn build(rank: usize, gens: &[Word]) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Invalid("rank must be positive".into()));
        }
        for g in gens {
            if g.rank() != rank {
                return Err(Error::RankMismatch { expected: rank, found: g.rank() });
            }
        }
        let mut f = Folder::new(rank);
        for g in gens.iter().filter(|g| !g.is_identity()) {
            let letters = g.letters();
            let mut cur = 0;
            for (i, &l) in letters.iter().enumerate() {
                let next = if i + 1 == letters.len() { 0 } else { f.add_vertex(rank) };
                f.link(cur, l, next);
                cur = next;
            }
        }
        // Resolve union-find into a plain transition table.
        let n = f.parent.len();
        let mut table: Vec<Option<Vec<Option<usize>>>> = vec![None; n];
        for (v, slot) in table.iter_mut().enumerate() {
            if f.find(v) == v {
                let row = f.trans[v].clone();
                *slot = Some(row.into_iter().map(|t| t.map(|t| f.find(t))).collect());
            }
        }
        let base = f.find(0);
        prune(&mut table, base);
        Ok(Self::canonicalize(rank, &table, base))
    }

    fn canonicalize(rank: usize, table: &[Option<Vec<Option<usize>>>], base: usize) -> Self {
        let mut order = vec![usize::MAX; table.len()];
        let mut queue = VecDeque::from([base]);
        order[base] = 0;
        let mut next = 1;
        let mut visited = vec![base];
        while let Some(v) = queue.pop_front() {
            for t in table[v].as_ref().unwrap().iter().flatten() {
                if order[*t] == usize::MAX {
                    order[*t] = next;
                    next += 1;
                    visited.push(*t);
                    queue.push_back(*t);
                }
            }
        }
        let trans = visited
            .iter()
            .map(|&v| table[v].as_ref().unwrap().iter().map(|t| t.map(|t| order[t])).collect())
            .collect();
        StallingsGraph { rank, trans }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.trans.len()
    }

    pub fn basepoint(&self) -> usize {
        0
    }

    /// Positive-label edges `(src, dst, generator index)` in canonical order.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (v, row) in self.trans.iter().enumerate() {
            for gen in 0..self.rank {
                if let Some(t) = row[2 * gen] {
                    out.push((v, t, gen));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// Target of reading `l` from `v`, if the edge exists.
    pub fn step(&self, v: usize, l: Letter) -> Option<usize> {
        self.trans[v][l.code() as usize]
    }

    /// Reads `w` from the basepoint; returns the visited vertices.
    fn read(&self, w: &Word) -> Option<Vec<usize>> {
        let mut path = vec![0];
        let mut cur = 0;
        for &l in w.letters() {
            cur = self.step(cur, l)?;
            path.push(cur);
        }
        Some(path)
    }

    /// Membership: `w` is in the subgroup iff it spells a closed path at
    /// the basepoint. The witness is the vertex path.
    pub fn member(&self, w: &Word) -> Result<Decision<Vec<usize>>> {
        if w.rank() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: w.rank() });
        }
        Ok(match self.read(w) {
            Some(path) if *path.last().unwrap() == 0 => Decision::Yes(path),
            _ => Decision::No(Refutation::Exhaustive),
        })
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.read(w).is_some_and(|p| *p.last().unwrap() == 0)
    }

    /// `true` when the subgroup is all of `F_n`.
    pub fn is_whole_group(&self) -> bool {
        self.trans.len() == 1 && self.trans[0].iter().all(|t| *t == Some(0))
    }

    /// BFS tree words: `paths[v]` labels the tree path from the basepoint,
    /// together with the tree-edge flags per `(vertex, letter code)`.
    fn spanning_tree(&self) -> (Vec<Word>, Vec<Vec<bool>>) {
        let n = self.trans.len();
        let mut paths: Vec<Option<Word>> = vec![None; n];
        let mut tree = vec![vec![false; 2 * self.rank]; n];
        paths[0] = Some(Word::identity(self.rank));
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for code in 0..2 * self.rank {
                if let Some(t) = self.trans[v][code] {
                    if paths[t].is_none() {
                        let l = Letter::from_code(code as u32);
                        let p = paths[v].as_ref().unwrap().mul(&Word::from_letters_unchecked(self.rank, [l]));
                        paths[t] = Some(p);
                        tree[v][code] = true;
                        tree[t][l.inverse().code() as usize] = true;
                        queue.push_back(t);
                    }
                }
            }
        }
        (paths.into_iter().map(Option::unwrap).collect(), tree)
    }

    /// Free basis: one word per edge outside the BFS spanning tree.
    pub fn basis(&self) -> Vec<Word> {
        let (paths, tree) = self.spanning_tree();
        self.edges()
            .into_iter()
            .filter(|&(v, _, gen)| !tree[v][2 * gen])
            .map(|(v, t, gen)| {
                paths[v]
                    .mul(&Word::generator(self.rank, gen))
                    .mul(&paths[t].inverse())
            })
            .collect()
    }

    /// All subgroup elements of length at most `max_len`, sorted shortlex.
    ///
    /// Fails with a capacity error past [`DEFAULT_MAX_ENUMERATION_LENGTH`];
    /// see [`Self::enumerate_elements_capped`].
    pub fn enumerate_elements(&self, max_len: usize) -> Result<Vec<Word>> {
        self.enumerate_elements_capped(max_len, DEFAULT_MAX_ENUMERATION_LENGTH)
    }

    pub fn enumerate_elements_capped(&self, max_len: usize, cap: usize) -> Result<Vec<Word>> {
        if max_len > cap {
            return Err(Error::Capacity(format!("enumeration length {max_len} exceeds cap {cap}")));
        }
        let mut out = vec![Word::identity(self.rank)];
        let mut stack: Vec<Letter> = Vec::new();
        self.dfs(0, max_len, &mut stack, &mut out);
        out.sort();
        Ok(out)
    }

    fn dfs(&self, v: usize, budget: usize, stack: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if budget == 0 {
            return;
        }
        for code in 0..2 * self.rank {
            let l = Letter::from_code(code as u32);
            if stack.last() == Some(&l.inverse()) {
                continue;
            }
            if let Some(t) = self.trans[v][code] {
                stack.push(l);
                if t == 0 {
                    out.push(Word::from_letters_unchecked(self.rank, stack.iter().copied()));
                }
                self.dfs(t, budget - 1, stack, out);
                stack.pop();
            }
        }
    }

    pub fn to_json_form(&self) -> GraphJson {
        GraphJson {
            rank: self.rank,
            vertices: self.vertex_count(),
            basepoint: 0,
            edges: self.edges().into_iter().map(|(s, t, g)| (s, t, g + 1)).collect(),
        }
    }

    /// Accepts any folded graph in which every vertex is reachable from the
    /// basepoint; the result is re-cored and renumbered canonically.
    pub fn from_json_form(form: &GraphJson) -> Result<Self> {
        if form.rank == 0 || form.vertices == 0 || form.basepoint >= form.vertices {
            return Err(Error::Invalid("graph needs a positive rank and a valid basepoint".into()));
        }
        let mut table = vec![Some(vec![None; 2 * form.rank]); form.vertices];
        for &(s, t, label) in &form.edges {
            if s >= form.vertices || t >= form.vertices || label == 0 || label > form.rank {
                return Err(Error::parse(format!("[{s}, {t}, {label}]"), "edge out of range"));
            }
            let code = 2 * (label - 1);
            for (v, c, w) in [(s, code, t), (t, code + 1, s)] {
                let slot = &mut table[v].as_mut().unwrap()[c];
                if slot.is_some() {
                    return Err(Error::parse(format!("[{s}, {t}, {label}]"), "graph is not folded"));
                }
                *slot = Some(w);
            }
        }
        prune(&mut table, form.basepoint);
        let g = Self::canonicalize(form.rank, &table, form.basepoint);
        let reachable = g.vertex_count();
        let alive = table.iter().filter(|r| r.is_some()).count();
        if reachable != alive {
            return Err(Error::Invalid("graph is not connected".into()));
        }
        Ok(g)
    }
}

/// Repeatedly removes non-basepoint vertices of degree at most one.
fn prune(table: &mut [Option<Vec<Option<usize>>>], base: usize) {
    let degree = |row: &Vec<Option<usize>>| row.iter().filter(|t| t.is_some()).count();
    let mut stack: Vec<usize> = (0..table.len())
        .filter(|&v| v != base && table[v].as_ref().is_some_and(|r| degree(r) <= 1))
        .collect();
    while let Some(v) = stack.pop() {
        let Some(row) = table[v].take() else { continue };
        for (code, t) in row.iter().enumerate() {
            if let Some(t) = *t {
                if t == v {
                    continue;
                }
                if let Some(trow) = table[t].as_mut() {
                    trow[code ^ 1] = None;
                    if t != base && degree(trow) <= 1 {
                        stack.push(t);
                    }
                }
            }
        }
    }
}
