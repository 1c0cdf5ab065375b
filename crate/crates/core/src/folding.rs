use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::abelian::AbelianStructure;
use crate::cosets::SubgroupPresentation;
use crate::error::{Error, Result};
use crate::presentation::{Presentation, TietzeLog, TietzeMove};
use crate::word::{cyclic_core, free_reduce, Letter, Word};

/// Folded subgroup graph of a free group of rank `n`, vertex 0 the base.
/// `adj[v][col]` is the endpoint of the edge leaving `v` reading the letter
/// with column `col`; every edge is stored at both ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldedGraph {
    pub n: usize,
    pub adj: Vec<BTreeMap<usize, usize>>,
}

struct Folder {
    parent: Vec<usize>,
    adj: Vec<BTreeMap<usize, usize>>,
    pending: Vec<(usize, usize)>,
}

impl Folder {
    fn find(&mut self, v: usize) -> usize {
        let mut r = v;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = v;
        while self.parent[x] != r {
            let nx = self.parent[x];
            self.parent[x] = r;
            x = nx;
        }
        r
    }

    fn vertex(&mut self) -> usize {
        self.parent.push(self.adj.len());
        self.adj.push(BTreeMap::new());
        self.adj.len() - 1
    }

    /// Stored endpoints may be stale; they always resolve through `find`.
    fn add_edge(&mut self, u: usize, col: usize, v: usize) {
        let (u, v) = (self.find(u), self.find(v));
        match self.adj[u].get(&col).copied() {
            Some(w) if self.find(w) != v => self.pending.push((w, v)),
            Some(_) => {}
            None => {
                self.adj[u].insert(col, v);
            }
        }
        match self.adj[v].get(&(col ^ 1)).copied() {
            Some(z) if self.find(z) != u => self.pending.push((z, u)),
            Some(_) => {}
            None => {
                self.adj[v].insert(col ^ 1, u);
            }
        }
    }

    fn settle(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            let (keep, gone) = (a.min(b), a.max(b));
            self.parent[gone] = keep;
            let edges = std::mem::take(&mut self.adj[gone]);
            for (col, t) in edges {
                self.add_edge(keep, col, t);
            }
        }
    }
}

pub fn build_folded_graph(words: &[Word], n: usize) -> FoldedGraph {
    let mut f = Folder { parent: vec![0], adj: vec![BTreeMap::new()], pending: Vec::new() };
    for w in words {
        let w = free_reduce(w);
        let letters = w.letters();
        if letters.is_empty() {
            continue;
        }
        let mut cur = 0;
        for (i, l) in letters.iter().enumerate() {
            let next = if i + 1 == letters.len() { 0 } else { f.vertex() };
            f.add_edge(cur, l.col(), next);
            f.settle();
            cur = next;
        }
    }
    // Resolve every endpoint to its representative.
    let m = f.adj.len();
    let mut adj: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); m];
    for (v, out) in adj.iter_mut().enumerate() {
        if f.find(v) != v {
            continue;
        }
        let entries: Vec<(usize, usize)> = f.adj[v].iter().map(|(&c, &t)| (c, t)).collect();
        for (c, t) in entries {
            out.insert(c, f.find(t));
        }
    }
    let alive: Vec<bool> = (0..m).map(|v| f.find(v) == v).collect();
    trim_and_canonicalize(adj, alive, n)
}

/// Removes hanging trees (non-base vertices of degree one), then renumbers
/// vertices breadth-first from the base in column order.
fn trim_and_canonicalize(mut adj: Vec<BTreeMap<usize, usize>>, mut alive: Vec<bool>, n: usize) -> FoldedGraph {
    let mut queue: VecDeque<usize> = (1..adj.len()).filter(|&v| alive[v] && adj[v].len() <= 1).collect();
    while let Some(v) = queue.pop_front() {
        if !alive[v] || adj[v].len() > 1 {
            continue;
        }
        alive[v] = false;
        let edges = std::mem::take(&mut adj[v]);
        for (col, t) in edges {
            adj[t].remove(&(col ^ 1));
            if t != 0 && alive[t] && adj[t].len() <= 1 {
                queue.push_back(t);
            }
        }
    }
    let mut new_of = vec![usize::MAX; adj.len()];
    let mut order = vec![0];
    new_of[0] = 0;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for &t in adj[v].values() {
            if new_of[t] == usize::MAX {
                new_of[t] = order.len();
                order.push(t);
            }
        }
        i += 1;
    }
    let adj = order
        .iter()
        .map(|&v| adj[v].iter().map(|(&c, &t)| (c, new_of[t])).collect())
        .collect();
    FoldedGraph { n, adj }
}

impl FoldedGraph {
    pub fn vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn edges(&self) -> usize {
        self.adj.iter().map(|m| m.len()).sum::<usize>() / 2
    }

    /// Rank of the subgroup: `E − V + 1`.
    pub fn rank(&self) -> usize {
        self.edges() + 1 - self.vertices()
    }

    pub fn is_folded(&self) -> bool {
        self.adj
            .iter()
            .enumerate()
            .all(|(v, m)| m.iter().all(|(&c, &t)| self.adj[t].get(&(c ^ 1)) == Some(&v)))
    }

    pub fn to_dot(&self, names: &[String]) -> String {
        let mut s = String::from("digraph folded {\n  0 [shape=doublecircle];\n");
        for (v, m) in self.adj.iter().enumerate() {
            for (&c, &t) in m {
                let l = Letter::from_col(c);
                if !l.is_inverse() {
                    let _ = writeln!(s, "  {v} -> {t} [label=\"{}\"];", names[l.gen()]);
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

pub fn graph_membership(graph: &FoldedGraph, word: &Word) -> bool {
    let mut v = 0;
    for l in free_reduce(word).letters() {
        match graph.adj[v].get(&l.col()) {
            Some(&t) => v = t,
            None => return false,
        }
    }
    v == 0
}

/// The folded graph is the rose: one vertex with a loop per generator.
pub fn generates_whole(graph: &FoldedGraph) -> bool {
    graph.vertices() == 1 && graph.adj[0].len() == 2 * graph.n
}

/// Surjective and of the right size, hence a basis (free groups are Hopfian).
pub fn is_basis(words: &[Word], n: usize) -> bool {
    words.len() == n && generates_whole(&build_folded_graph(words, n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    /// From the `t` letter forward to the `T` letter.
    #[serde(rename = "t_to_T")]
    TtoInvT,
    /// From the `T` letter forward to the `t` letter.
    #[serde(rename = "T_to_t")]
    InvTtoT,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::TtoInvT => "t_to_T",
            Side::InvTtoT => "T_to_t",
        }
    }
}

fn check_standard(pres: &Presentation, t: usize) -> Result<()> {
    if t >= pres.rank() {
        return Err(Error::UnknownGenerator(format!("g{t}")));
    }
    let name = || pres.generators[t].name.clone();
    if pres.relators.iter().any(|r| {
        let (p, n) = r.occurrences(t);
        p != n
    }) {
        return Err(Error::NotStandardForm(name()));
    }
    if !crate::abelian::is_simple_form(pres, t)? {
        return Err(Error::NotSimpleForm(name()));
    }
    Ok(())
}

/// Subwords strictly between the `t`-letters of every relator, read
/// cyclically; generator ids above `t` shift down by one.
pub fn extract_fiber_subwords(pres: &Presentation, t: usize, side: Side) -> Result<Vec<Word>> {
    check_standard(pres, t)?;
    Ok(pres.relators.iter().map(|r| subword(&cyclic_core(r), t, side)).collect())
}

fn subword(r: &Word, t: usize, side: Side) -> Word {
    let letters = r.letters();
    let n = letters.len();
    let (from, to) = match side {
        Side::TtoInvT => (Letter::pos(t), Letter::neg(t)),
        Side::InvTtoT => (Letter::neg(t), Letter::pos(t)),
    };
    let start = letters.iter().position(|&l| l == from).expect("simple form");
    let mut out = Vec::new();
    let mut i = (start + 1) % n;
    while letters[i] != to {
        out.push(letters[i]);
        i = (i + 1) % n;
    }
    free_reduce(&Word::new(out).map_gens(|g| if g > t { g - 1 } else { g }))
}

/// Generators of `pres` other than `t`, in order.
pub fn fiber_alphabet(pres: &Presentation, t: usize) -> Vec<String> {
    pres.generators.iter().filter(|g| g.id != t).map(|g| g.name.clone()).collect()
}

fn t_pairs(w: &Word, t: usize) -> (usize, usize) {
    w.occurrences(t)
}

/// Replaces a relator with two `t`-pairs by a product of cyclic conjugates
/// of it and a partner relator that has a single `t`-pair. The partner
/// stays, so the normal closure is unchanged.
pub fn concat_double_relators(pres: &Presentation, t: usize) -> Result<(Presentation, TietzeLog)> {
    if t >= pres.rank() {
        return Err(Error::UnknownGenerator(format!("g{t}")));
    }
    let mut log = TietzeLog::new();
    let mut cur = pres.clone();
    'again: loop {
        for a in 0..cur.relators.len() {
            let ra = cyclic_core(&cur.relators[a]);
            if t_pairs(&ra, t) != (2, 2) {
                continue;
            }
            for b in 0..cur.relators.len() {
                if b == a {
                    continue;
                }
                let rb = cyclic_core(&cur.relators[b]);
                let pb = t_pairs(&rb, t);
                if pb.0 == 0 || pb.0 != pb.1 || pb.0 > 2 {
                    continue;
                }
                if let Some(w) = simple_product(&ra, &rb, t) {
                    cur = log.push(&cur, TietzeMove::AddRelator(w))?;
                    cur = log.push(&cur, TietzeMove::RemoveRelator(a))?;
                    continue 'again;
                }
            }
        }
        break;
    }
    if log.moves.is_empty() {
        return Err(Error::NoPattern);
    }
    Ok((cur, log))
}

/// Shortest cyclically reduced product of conjugates of `a^±1` and `b^±1`
/// with exactly one `t` and one `T`.
fn simple_product(a: &Word, b: &Word, t: usize) -> Option<Word> {
    let mut best: Option<Word> = None;
    for x in [a.clone(), a.inverse()] {
        for y in [b.clone(), b.inverse()] {
            for i in 0..x.len() {
                let xr = x.rotate(i);
                for j in 0..y.len() {
                    let w = cyclic_core(&y.rotate(j).mul(&xr));
                    if t_pairs(&w, t) == (1, 1)
                        && best.as_ref().is_none_or(|bw| (w.len(), &w) < (bw.len(), bw))
                    {
                        best = Some(w);
                    }
                }
            }
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HnnVerdict {
    Fibred,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct HnnResult {
    pub verdict: HnnVerdict,
    pub fiber_rank: usize,
    /// Subwords from `t` to `T` generate the fibre.
    pub forward_generates: bool,
    pub backward_generates: bool,
    #[serde(skip)]
    pub subwords: Vec<Word>,
    #[serde(skip)]
    pub other_side: Vec<Word>,
}

/// Core of the ascending check on given subwords over `d` generators.
/// With the three-manifold shortcut one generating side suffices.
pub fn ascending_from_subwords(side_a: &[Word], side_b: Option<&[Word]>, d: usize, three_manifold: bool) -> HnnResult {
    let a = generates_whole(&build_folded_graph(side_a, d));
    let b = side_b.map(|w| generates_whole(&build_folded_graph(w, d)));
    let ok = if three_manifold { a || b == Some(true) } else { a && b == Some(true) };
    HnnResult {
        verdict: if ok { HnnVerdict::Fibred } else { HnnVerdict::Inconclusive },
        fiber_rank: d,
        forward_generates: a,
        backward_generates: b.unwrap_or(false),
        subwords: side_a.to_vec(),
        other_side: side_b.map(|w| w.to_vec()).unwrap_or_default(),
    }
}

pub fn ascending_hnn_check(pres: &Presentation, t: usize) -> Result<HnnResult> {
    let fwd = extract_fiber_subwords(pres, t, Side::TtoInvT)?;
    let back = extract_fiber_subwords(pres, t, Side::InvTtoT)?;
    Ok(ascending_from_subwords(&fwd, Some(&back), pres.rank() - 1, pres.flags.three_manifold))
}

/// Whether every fibre generator maps to a finite-order element of the base
/// homology, so the kernel of the base map lies in the fibre subgroup.
pub fn descent_check(cover: &SubgroupPresentation, base_ab: &AbelianStructure, fiber_gens: &[usize]) -> Result<bool> {
    let inc = cover.inclusion.as_ref().ok_or(Error::NoInclusion(0))?;
    for &g in fiber_gens {
        let w = inc.get(g).ok_or(Error::NoInclusion(g))?;
        if w.max_gen().is_some_and(|m| m >= base_ab.ngens()) {
            return Err(Error::NoInclusion(g));
        }
        if base_ab.free_image(w).iter().any(|x| x != &num_bigint::BigInt::from(0)) {
            return Ok(false);
        }
    }
    Ok(true)
}
