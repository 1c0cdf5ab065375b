use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::abelian::{abelianization, AbelianStructure, Character};
use crate::error::{Error, Result};
use crate::presentation::{default_names, Presentation, TietzeLog, TietzeMove};
use crate::word::{cyclic_core, free_reduce, Letter, Word};

pub const DEFAULT_MAX_COSETS: usize = 100_000;

/// Largest index accepted by [`low_index_subgroups`].
pub const MAX_LOW_INDEX: usize = 6;

/// Complete coset table; coset 0 is the subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    pub ngens: usize,
    /// `action[c][col]` with `col` = [`Letter::col`].
    pub action: Vec<Vec<usize>>,
    pub subgroup_gens: Vec<Word>,
    pub gen_names: Vec<String>,
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.action.len()
    }

    pub fn image(&self, c: usize, l: Letter) -> usize {
        self.action[c][l.col()]
    }

    pub fn act(&self, c: usize, w: &Word) -> usize {
        w.letters().iter().fold(c, |c, &l| self.image(c, l))
    }

    /// Permutation of the cosets induced by a generator.
    pub fn perm(&self, gen: usize) -> Vec<usize> {
        (0..self.index()).map(|c| self.image(c, Letter::pos(gen))).collect()
    }

    /// Every relator closes from every coset, every subgroup generator
    /// fixes coset 0, and the action is by permutations.
    pub fn verify(&self, pres: &Presentation) -> bool {
        let n = self.index();
        let perms_ok = (0..n).all(|c| {
            (0..self.ngens).all(|g| self.image(self.image(c, Letter::pos(g)), Letter::neg(g)) == c)
        });
        perms_ok
            && pres.relators.iter().all(|r| (0..n).all(|c| self.act(c, r) == c))
            && self.subgroup_gens.iter().all(|w| self.act(0, w) == 0)
    }

    /// Breadth-first Schreier transversal by generator column order:
    /// `parent[c] = (coset, letter)` with `coset · letter = c`.
    pub fn transversal(&self) -> Vec<Option<(usize, Letter)>> {
        let n = self.index();
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(c) = queue.pop_front() {
            for col in 0..2 * self.ngens {
                let d = self.action[c][col];
                if !seen[d] {
                    seen[d] = true;
                    parent[d] = Some((c, Letter::from_col(col)));
                    queue.push_back(d);
                }
            }
        }
        parent
    }

    /// Transversal words `rep[c]` with `0 · rep[c] = c`.
    pub fn representatives(&self) -> Vec<Word> {
        let parent = self.transversal();
        let mut reps: Vec<Option<Word>> = vec![None; self.index()];
        reps[0] = Some(Word::empty());
        fn rep(c: usize, parent: &[Option<(usize, Letter)>], reps: &mut Vec<Option<Word>>) -> Word {
            if let Some(w) = &reps[c] {
                return w.clone();
            }
            let (p, l) = parent[c].expect("connected table");
            let w = rep(p, parent, reps).mul(&Word::letter(l));
            reps[c] = Some(w.clone());
            w
        }
        (0..self.index()).map(|c| rep(c, &parent, &mut reps)).collect()
    }

    /// Schreier generators `rep(c)·g·rep(c·g)⁻¹` of the non-tree edges.
    pub fn schreier_generators(&self) -> Vec<Word> {
        let reps = self.representatives();
        schreier_edges(self)
            .into_iter()
            .map(|(c, g)| {
                let d = self.image(c, Letter::pos(g));
                reps[c].mul(&Word::letter(Letter::pos(g))).mul(&reps[d].inverse())
            })
            .collect()
    }

    /// Relabel cosets in order of first appearance, reading rows in order.
    pub fn standardize(&mut self) {
        let n = self.index();
        let mut new_of = vec![usize::MAX; n];
        let mut order = vec![0];
        new_of[0] = 0;
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            for col in 0..2 * self.ngens {
                let d = self.action[c][col];
                if new_of[d] == usize::MAX {
                    new_of[d] = order.len();
                    order.push(d);
                }
            }
            i += 1;
        }
        self.action = order
            .iter()
            .map(|&c| self.action[c].iter().map(|&d| new_of[d]).collect())
            .collect();
    }
}

impl Serialize for CosetTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            index: usize,
            action: BTreeMap<String, Vec<usize>>,
            subgroup_gens: Vec<String>,
        }
        Out {
            index: self.index(),
            action: (0..self.ngens).map(|g| (self.gen_names[g].clone(), self.perm(g))).collect(),
            subgroup_gens: self
                .subgroup_gens
                .iter()
                .map(|w| crate::word::format_word(w, &self.gen_names))
                .collect(),
        }
        .serialize(s)
    }
}

fn schreier_edges(t: &CosetTable) -> Vec<(usize, usize)> {
    let parent = t.transversal();
    let mut out = Vec::new();
    for c in 0..t.index() {
        for g in 0..t.ngens {
            let d = t.image(c, Letter::pos(g));
            let tree = parent[d] == Some((c, Letter::pos(g))) || parent[c] == Some((d, Letter::neg(g)));
            if !tree {
                out.push((c, g))
            }
        }
    }
    out
}

const UNDEF: usize = usize::MAX;

/// Hasse-Lubotzky-Todd-Coxeter enumeration with coincidence processing.
struct Enumerator<'a> {
    rels: &'a [Vec<usize>],
    ncols: usize,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    live: usize,
    max_live: usize,
    queue: Vec<usize>,
}

struct Full;

fn inv(col: usize) -> usize {
    col ^ 1
}

impl<'a> Enumerator<'a> {
    fn new(rels: &'a [Vec<usize>], ncols: usize, max_live: usize) -> Enumerator<'a> {
        Enumerator {
            rels,
            ncols,
            table: vec![vec![UNDEF; ncols]],
            parent: vec![0],
            live: 1,
            max_live,
            queue: Vec::new(),
        }
    }

    fn alive(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = c;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    fn define(&mut self, c: usize, col: usize) -> std::result::Result<usize, Full> {
        if self.live >= self.max_live {
            return Err(Full);
        }
        let n = self.table.len();
        self.table.push(vec![UNDEF; self.ncols]);
        self.parent.push(n);
        self.live += 1;
        self.table[c][col] = n;
        self.table[n][inv(col)] = c;
        Ok(n)
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        self.parent[hi] = lo;
        self.live -= 1;
        self.queue.push(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let e = self.queue[i];
            i += 1;
            for x in 0..self.ncols {
                let f = self.table[e][x];
                if f == UNDEF {
                    continue;
                }
                if self.table[f][inv(x)] == e {
                    self.table[f][inv(x)] = UNDEF;
                }
                let (e1, f1) = (self.rep(e), self.rep(f));
                if self.table[e1][x] != UNDEF {
                    let t = self.table[e1][x];
                    self.merge(f1, t);
                } else if self.table[f1][inv(x)] != UNDEF {
                    let t = self.table[f1][inv(x)];
                    self.merge(e1, t);
                } else {
                    self.table[e1][x] = f1;
                    self.table[f1][inv(x)] = e1;
                }
            }
        }
    }

    /// Scans `w` from `c`, defining new cosets when `fill` is set.
    fn scan(&mut self, c: usize, w: &[usize], fill: bool) -> std::result::Result<(), Full> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        loop {
            while (i as isize) <= j && self.table[f][w[i]] != UNDEF {
                f = self.table[f][w[i]];
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize && self.table[b][inv(w[j as usize])] != UNDEF {
                b = self.table[b][inv(w[j as usize])];
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.table[f][w[i]] = b;
                self.table[b][inv(w[i])] = f;
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    fn lookahead(&mut self) {
        let mut c = 0;
        while c < self.table.len() {
            for r in 0..self.rels.len() {
                if !self.alive(c) {
                    break;
                }
                let rel = &self.rels[r];
                let _ = self.scan(c, rel, false);
            }
            c += 1;
        }
    }

    fn run(&mut self, subgroup: &[Vec<usize>]) -> Result<()> {
        let cap = self.max_live;
        'outer: loop {
            let res: std::result::Result<(), Full> = (|| {
                for w in subgroup {
                    self.scan(0, w, true)?;
                }
                let mut c = 0;
                while c < self.table.len() {
                    for r in 0..self.rels.len() {
                        if !self.alive(c) {
                            break;
                        }
                        let rel = &self.rels[r];
                        self.scan(c, rel, true)?;
                    }
                    if self.alive(c) {
                        for x in 0..self.ncols {
                            if self.table[c][x] == UNDEF {
                                self.define(c, x)?;
                            }
                        }
                    }
                    c += 1;
                }
                Ok(())
            })();
            match res {
                Ok(()) => return Ok(()),
                Err(Full) => {
                    let before = self.live;
                    self.lookahead();
                    if self.live >= before || self.live >= cap {
                        return Err(Error::Overflow(cap));
                    }
                    continue 'outer;
                }
            }
        }
    }

    fn into_table(self) -> Vec<Vec<usize>> {
        let alive: Vec<usize> = (0..self.table.len()).filter(|&c| self.parent[c] == c).collect();
        let mut new_of = vec![UNDEF; self.table.len()];
        for (i, &c) in alive.iter().enumerate() {
            new_of[c] = i;
        }
        alive
            .iter()
            .map(|&c| self.table[c].iter().map(|&d| new_of[d]).collect())
            .collect()
    }
}

fn cols_of(w: &Word) -> Vec<usize> {
    w.letters().iter().map(|l| l.col()).collect()
}

/// Coset enumeration for the subgroup generated by `subgroup_gens`.
/// `Overflow` is inconclusive: the index may be infinite or the bound small.
pub fn todd_coxeter(pres: &Presentation, subgroup_gens: &[Word], max_cosets: usize) -> Result<CosetTable> {
    let rels: Vec<Vec<usize>> = pres.relators.iter().map(|r| cols_of(&cyclic_core(r))).collect();
    let sub: Vec<Vec<usize>> = subgroup_gens.iter().map(|w| cols_of(&free_reduce(w))).collect();
    let mut e = Enumerator::new(&rels, 2 * pres.rank(), max_cosets.max(1));
    e.run(&sub)?;
    let action = e.into_table();
    if action.iter().any(|row| row.contains(&UNDEF)) {
        return Err(Error::Incomplete);
    }
    let mut t = CosetTable {
        ngens: pres.rank(),
        action,
        subgroup_gens: subgroup_gens.iter().map(free_reduce).collect(),
        gen_names: pres.names(),
    };
    t.standardize();
    debug_assert!(t.verify(pres));
    Ok(t)
}

/// Index-`n` subgroup `χ⁻¹(nℤ)`: coset `k` goes to `k + χ(g) mod n`.
pub fn cyclic_cover(pres: &Presentation, chi: &Character, n: usize) -> Result<CosetTable> {
    chi.check(pres)?;
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    let n = n.max(1);
    let action = (0..n)
        .map(|k| {
            (0..2 * pres.rank())
                .map(|col| {
                    let v = chi.of_letter(Letter::from_col(col));
                    (k as i64 + v).rem_euclid(n as i64) as usize
                })
                .collect()
        })
        .collect();
    let mut t = CosetTable { ngens: pres.rank(), action, subgroup_gens: Vec::new(), gen_names: pres.names() };
    t.standardize();
    t.subgroup_gens = t.schreier_generators();
    Ok(t)
}

/// Partial table used by the low-index search.
#[derive(Clone)]
struct Partial {
    rows: Vec<Vec<usize>>,
}

impl Partial {
    fn first_undefined(&self) -> Option<(usize, usize)> {
        for (c, row) in self.rows.iter().enumerate() {
            if let Some(x) = row.iter().position(|&d| d == UNDEF) {
                return Some((c, x));
            }
        }
        None
    }

    fn set(&mut self, c: usize, x: usize, d: usize) -> bool {
        if self.rows[c][x] != UNDEF && self.rows[c][x] != d {
            return false;
        }
        if self.rows[d][inv(x)] != UNDEF && self.rows[d][inv(x)] != c {
            return false;
        }
        self.rows[c][x] = d;
        self.rows[d][inv(x)] = c;
        true
    }

    /// Closes relator scans until nothing changes; false on a conflict.
    fn deduce(&mut self, rels: &[Vec<usize>]) -> bool {
        loop {
            let mut changed = false;
            for c in 0..self.rows.len() {
                for r in rels {
                    let (mut f, mut i) = (c, 0usize);
                    while i < r.len() && self.rows[f][r[i]] != UNDEF {
                        f = self.rows[f][r[i]];
                        i += 1;
                    }
                    if i == r.len() {
                        if f != c {
                            return false;
                        }
                        continue;
                    }
                    let (mut b, mut j) = (c, r.len() - 1);
                    while j > i && self.rows[b][inv(r[j])] != UNDEF {
                        b = self.rows[b][inv(r[j])];
                        j -= 1;
                    }
                    if j == i {
                        if !self.set(f, r[i], b) {
                            return false;
                        }
                        changed = true;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// False if restandardizing from another base coset gives a
    /// lexicographically smaller table on the determined prefix.
    fn canonical(&self) -> bool {
        let n = self.rows.len();
        let ncols = self.rows[0].len();
        'base: for beta in 1..n {
            let mut new_of = vec![UNDEF; n];
            let mut order = vec![beta];
            new_of[beta] = 0;
            let mut i = 0;
            while i < order.len() {
                let old = order[i];
                for x in 0..ncols {
                    let d = self.rows[old][x];
                    let cur = self.rows[i][x];
                    if d == UNDEF || cur == UNDEF {
                        continue 'base;
                    }
                    if new_of[d] == UNDEF {
                        new_of[d] = order.len();
                        order.push(d);
                    }
                    match new_of[d].cmp(&cur) {
                        std::cmp::Ordering::Less => return false,
                        std::cmp::Ordering::Greater => continue 'base,
                        std::cmp::Ordering::Equal => {}
                    }
                }
                i += 1;
            }
        }
        true
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LowIndexResult {
    pub max_index: usize,
    /// `counts[k]` = number of conjugacy classes of index `k + 1`.
    pub counts: Vec<usize>,
    pub tables: Vec<CosetTable>,
}

impl LowIndexResult {
    pub fn count(&self, index: usize) -> usize {
        self.counts.get(index.wrapping_sub(1)).copied().unwrap_or(0)
    }
}

/// One canonical coset table per conjugacy class of subgroups of index at
/// most `max_index`, by backtracking over standardized partial tables.
pub fn low_index_subgroups(pres: &Presentation, max_index: usize) -> Result<LowIndexResult> {
    if max_index == 0 || max_index > MAX_LOW_INDEX {
        return Err(Error::Unsupported(format!("max index {max_index} (supported 1..={MAX_LOW_INDEX})")));
    }
    let ncols = 2 * pres.rank();
    let rels: Vec<Vec<usize>> = pres
        .relators
        .iter()
        .map(|r| cols_of(&cyclic_core(r)))
        .filter(|r| !r.is_empty())
        .collect();
    let mut found: Vec<Vec<Vec<usize>>> = Vec::new();
    let start = Partial { rows: vec![vec![UNDEF; ncols]] };
    if ncols == 0 {
        found.push(vec![vec![]]);
    } else if start.clone().deduce(&rels) {
        let mut stack = vec![start];
        while let Some(p) = stack.pop() {
            let Some((c, x)) = p.first_undefined() else {
                found.push(p.rows);
                continue;
            };
            let n = p.rows.len();
            // Reverse push order so that smaller targets are explored first.
            let mut children = Vec::new();
            for d in 0..n {
                if p.rows[d][inv(x)] != UNDEF {
                    continue;
                }
                let mut q = p.clone();
                if q.set(c, x, d) && q.deduce(&rels) && q.canonical() {
                    children.push(q);
                }
            }
            if n < max_index {
                let mut q = p.clone();
                q.rows.push(vec![UNDEF; ncols]);
                if q.set(c, x, n) && q.deduce(&rels) && q.canonical() {
                    children.push(q);
                }
            }
            stack.extend(children.into_iter().rev());
        }
    }
    let mut counts = vec![0; max_index];
    let mut tables: Vec<CosetTable> = found
        .into_iter()
        .map(|action| {
            let mut t = CosetTable { ngens: pres.rank(), action, subgroup_gens: Vec::new(), gen_names: pres.names() };
            t.subgroup_gens = t.schreier_generators();
            t
        })
        .collect();
    tables.sort_by(|a, b| a.index().cmp(&b.index()).then_with(|| a.action.cmp(&b.action)));
    for t in &tables {
        counts[t.index() - 1] += 1;
    }
    Ok(LowIndexResult { max_index, counts, tables })
}

/// Presentation of a finite-index subgroup with the images of its
/// generators in the ambient group.
#[derive(Clone, Debug)]
pub struct SubgroupPresentation {
    pub presentation: Presentation,
    /// `inclusion[i]` is generator `i` written in the ambient generators.
    pub inclusion: Option<Vec<Word>>,
    pub ambient_names: Vec<String>,
}

impl SubgroupPresentation {
    /// For covers known only from printed data.
    pub fn with_inclusion(presentation: Presentation, ambient_names: &[&str], inclusion: Vec<Word>) -> Self {
        SubgroupPresentation {
            presentation,
            inclusion: Some(inclusion),
            ambient_names: ambient_names.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Simplifies and carries the inclusion along the same moves.
    pub fn simplified(&self, protected: &[usize]) -> SubgroupPresentation {
        let (p, log) = simplify_protected(&self.presentation, protected);
        let inclusion = self.inclusion.as_ref().map(|inc| {
            let mut inc = inc.clone();
            let mut cur = self.presentation.clone();
            for m in &log.moves {
                match m {
                    TietzeMove::Eliminate { gen, .. } => {
                        inc.remove(*gen);
                    }
                    TietzeMove::Reorder(perm) => {
                        inc = perm.iter().map(|&i| inc[i].clone()).collect();
                    }
                    _ => {}
                }
                cur = m.apply(&cur).expect("logged move replays");
            }
            inc
        });
        SubgroupPresentation { presentation: p, inclusion, ambient_names: self.ambient_names.clone() }
    }

    pub fn format_inclusion(&self) -> Vec<String> {
        self.inclusion
            .iter()
            .flatten()
            .map(|w| crate::word::format_word(w, &self.ambient_names))
            .collect()
    }
}

/// Rewrites every relator from every coset in the Schreier generators of
/// a breadth-first transversal. No simplification.
pub fn reidemeister_schreier(pres: &Presentation, table: &CosetTable) -> Result<SubgroupPresentation> {
    if table.ngens != pres.rank() || table.action.iter().any(|r| r.len() != 2 * pres.rank() || r.contains(&UNDEF)) {
        return Err(Error::Incomplete);
    }
    let edges = schreier_edges(table);
    let mut id_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (i, e) in edges.iter().enumerate() {
        id_of.insert(*e, i);
    }
    let mut relators = Vec::new();
    for c in 0..table.index() {
        for r in &pres.relators {
            let mut e = c;
            let mut out = Vec::new();
            for &l in r.letters() {
                let g = l.gen();
                if l.is_inverse() {
                    let f = table.image(e, l);
                    if let Some(&s) = id_of.get(&(f, g)) {
                        out.push(Letter::neg(s));
                    }
                    e = f;
                } else {
                    if let Some(&s) = id_of.get(&(e, g)) {
                        out.push(Letter::pos(s));
                    }
                    e = table.image(e, l);
                }
            }
            debug_assert_eq!(e, c, "relator closes");
            relators.push(free_reduce(&Word::new(out)));
        }
    }
    let names = default_names(edges.len());
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut p = Presentation::new(&format!("{}[{}]", pres.name, table.index()), &refs, relators);
    p.flags = pres.flags;
    Ok(SubgroupPresentation {
        presentation: p,
        inclusion: Some(table.schreier_generators()),
        ambient_names: pres.names(),
    })
}

pub fn simplify_presentation(pres: &Presentation) -> (Presentation, TietzeLog) {
    simplify_protected(pres, &[])
}

/// Total relator length beyond which eliminations are skipped.
const LENGTH_CAP: usize = 200_000;

/// Tietze simplification to a fixpoint. Generators in `protected` and
/// generators occurring in cusp words are never eliminated.
pub fn simplify_protected(pres: &Presentation, protected: &[usize]) -> (Presentation, TietzeLog) {
    let mut log = TietzeLog::new();
    let mut keep: Vec<bool> = (0..pres.rank()).map(|g| protected.contains(&g)).collect();
    for c in &pres.cusps {
        for l in c.meridian.letters().iter().chain(c.longitude.letters()) {
            keep[l.gen()] = true;
        }
    }
    let mut cur = pres.clone();
    if cur.relators.iter().any(|r| cyclic_core(r) != *r) {
        cur = log.push(&cur, TietzeMove::Reduce).expect("reduce");
    }
    loop {
        if let Some(i) = duplicate_relator(&cur) {
            cur = log.push(&cur, TietzeMove::RemoveRelator(i)).expect("in range");
            continue;
        }
        let mut order: Vec<usize> = (0..cur.relators.len()).collect();
        order.sort_by_key(|&i| (cur.relators[i].len(), i));
        let total: usize = cur.relators.iter().map(|r| r.len()).sum();
        let mut step = None;
        'find: for &i in &order {
            let r = &cur.relators[i];
            for (g, &kept) in keep.iter().enumerate().take(cur.rank()) {
                if kept || r.occurrences(g).0 + r.occurrences(g).1 != 1 {
                    continue;
                }
                let grow: usize = cur
                    .relators
                    .iter()
                    .map(|w| {
                        let (p, n) = w.occurrences(g);
                        (p + n) * r.len()
                    })
                    .sum();
                if total + grow > LENGTH_CAP {
                    continue;
                }
                step = Some((g, i));
                break 'find;
            }
        }
        let Some((gen, relator)) = step else { break };
        cur = log.push(&cur, TietzeMove::Eliminate { gen, relator }).expect("valid elimination");
        keep.remove(gen);
        if cur.relators.iter().any(|r| cyclic_core(r) != *r || r.is_empty()) {
            cur = log.push(&cur, TietzeMove::Reduce).expect("reduce");
        }
    }
    (cur, log)
}

/// A relator equal to an earlier one up to rotation and inversion.
fn duplicate_relator(p: &Presentation) -> Option<usize> {
    let key = |w: &Word| {
        let n = w.len();
        let inv = w.inverse();
        (0..n.max(1))
            .flat_map(|k| [w.rotate(k), inv.rotate(k)])
            .min()
            .unwrap_or_default()
    };
    let mut seen = std::collections::HashSet::new();
    for (i, r) in p.relators.iter().enumerate() {
        if !seen.insert(key(r)) {
            return Some(i);
        }
    }
    None
}

/// How the subgroup is specified.
pub enum SubgroupSpec<'a> {
    Table(&'a CosetTable),
    Words { gens: &'a [Word], max_cosets: usize },
}

pub fn subgroup_homology(pres: &Presentation, spec: SubgroupSpec) -> Result<AbelianStructure> {
    let table = match spec {
        SubgroupSpec::Table(t) => t.clone(),
        SubgroupSpec::Words { gens, max_cosets } => todd_coxeter(pres, gens, max_cosets)?,
    };
    let sub = reidemeister_schreier(pres, &table)?;
    let (simple, _) = simplify_presentation(&sub.presentation);
    Ok(abelianization(&simple))
}
