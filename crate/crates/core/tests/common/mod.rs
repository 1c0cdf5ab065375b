//! Independent oracles shared by the property tests and the acceptance run.
#![allow(dead_code)]

use std::collections::HashSet;

use flab_core::fox::{alexander_from_matrix, alexander_matrix_with};
use flab_core::*;
use num_integer::Integer;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn word(p: &Presentation, s: &str) -> Word {
    p.parse_word(s).unwrap()
}

pub fn random_word(rng: &mut ChaCha8Rng, ngens: usize, len: usize) -> Word {
    let letters = (0..len).map(|_| Letter::new(rng.gen_range(0..ngens), rng.gen_bool(0.5))).collect();
    Word::new(letters)
}

/// Determinantal divisors: gcd of all k×k minors, by cofactor expansion.
fn small_det(m: &[Vec<i64>]) -> i64 {
    if m.is_empty() {
        return 1;
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i64>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, &x)| x).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * small_det(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

pub fn determinantal_divisor(a: &[Vec<i64>], k: usize) -> i64 {
    let (m, n) = (a.len(), a[0].len());
    let mut g = 0i64;
    for rows in subsets(m, k) {
        for cols in subsets(n, k) {
            let sub: Vec<Vec<i64>> = rows.iter().map(|&i| cols.iter().map(|&j| a[i][j]).collect()).collect();
            g = g.gcd(&small_det(&sub));
        }
    }
    g
}

/// Checks `U·A·V = D`, unimodularity, divisibility, and the invariant
/// factors against determinantal divisors.
pub fn check_snf(a: &[Vec<i64>]) -> std::result::Result<(), String> {
    let cols = a[0].len();
    let m: Matrix<i64> = Matrix::from_i64(cols, a);
    let s = smith_normal_form(&m);
    if s.u.mul(&m).mul(&s.v) != s.d {
        return Err(format!("U·A·V ≠ D for {a:?}"));
    }
    if !s.u.is_unimodular() || !s.v.is_unimodular() || s.v.mul(&s.v_inv) != Matrix::identity(cols) {
        return Err(format!("transforms not unimodular for {a:?}"));
    }
    let diag = s.diagonal();
    for i in 0..s.d.rows() {
        for j in 0..s.d.cols() {
            if i != j && s.d[(i, j)] != 0 {
                return Err(format!("D not diagonal for {a:?}"));
            }
        }
    }
    let mut prod = 1i64;
    for (k, d) in diag.iter().enumerate() {
        if *d < 0 {
            return Err("negative invariant factor".into());
        }
        if k + 1 < diag.len() && *d != 0 && diag[k + 1] % d != 0 {
            return Err(format!("divisibility fails: {diag:?}"));
        }
        if *d == 0 && diag[k..].iter().any(|x| *x != 0) {
            return Err(format!("zeros not trailing: {diag:?}"));
        }
        prod *= d;
        if prod != determinantal_divisor(a, k + 1) {
            return Err(format!("invariant factors {diag:?} disagree with minors of {a:?}"));
        }
    }
    Ok(())
}

/// Right multiplication in the group ring.
fn right_mul(e: &GroupRingElem, w: &Word) -> GroupRingElem {
    GroupRingElem { terms: e.terms.iter().map(|(c, u)| (*c, free_reduce(&u.mul(w)))).collect() }.normalize()
}

fn scale(e: &GroupRingElem, k: i64) -> GroupRingElem {
    GroupRingElem { terms: e.terms.iter().map(|(c, u)| (c * k, u.clone())).collect() }.normalize()
}

/// Product rule and the fundamental formula `Σ ∂w/∂g·(g−1) = w−1`.
pub fn check_fox(u: &Word, v: &Word, ngens: usize) -> std::result::Result<(), String> {
    let uv = u.mul(v);
    for g in 0..ngens {
        let lhs = fox_derivative(&uv, g);
        let rhs = fox_derivative(u, g).add(&fox_derivative(v, g).left_mul(u));
        if lhs != rhs {
            return Err(format!("product rule fails for gen {g}"));
        }
    }
    let mut total = GroupRingElem::zero();
    for g in 0..ngens {
        let d = fox_derivative(&uv, g);
        total = total.add(&right_mul(&d, &Word::letter(Letter::pos(g)))).add(&scale(&d, -1));
    }
    let expected = GroupRingElem { terms: vec![(1, free_reduce(&uv)), (-1, Word::empty())] };
    if total != expected {
        return Err("fundamental formula fails".into());
    }
    Ok(())
}

/// A relator-level Tietze move that keeps the generators.
pub fn random_relator_move(rng: &mut ChaCha8Rng, p: &Presentation) -> Presentation {
    let mut q = p.clone();
    let n = q.relators.len();
    let i = rng.gen_range(0..n);
    let r = q.relators[i].clone();
    let g = Word::letter(Letter::new(rng.gen_range(0..q.rank()), rng.gen_bool(0.5)));
    q.relators[i] = match rng.gen_range(0..5) {
        0 => r.rotate(rng.gen_range(0..r.len().max(1))),
        1 => r.inverse(),
        2 => g.concat(&r).concat(&g.inverse()),
        3 => {
            let j = rng.gen_range(0..n);
            let other = if rng.gen_bool(0.5) { q.relators[j].clone() } else { q.relators[j].inverse() };
            let conj = g.concat(&other).concat(&g.inverse());
            if j == i { r } else { r.mul(&conj) }
        }
        _ => {
            let k = rng.gen_range(0..=r.len());
            let mut l = r.letters().to_vec();
            let x = Letter::new(rng.gen_range(0..q.rank()), rng.gen_bool(0.5));
            l.splice(k..k, [x, x.inverse()]);
            Word::new(l)
        }
    };
    q
}

/// Δ of `moved`, read in the abelianization of `base` so the two agree
/// in variables.
pub fn delta_in_basis_of(base: &Presentation, moved: &Presentation) -> LaurentPoly {
    let am = alexander_matrix_with(moved, abelianization(base)).unwrap();
    alexander_from_matrix(am).unwrap().delta
}

/// Reduced words over two generators up to length `max`, including the empty word.
pub fn reduced_words(max: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    for _ in 0..max {
        let mut next = Vec::new();
        for w in &frontier {
            for col in 0..4 {
                let l = Letter::from_col(col);
                if w.letters().last().is_some_and(|&x| x == l.inverse()) {
                    continue;
                }
                let mut v = w.letters().to_vec();
                v.push(l);
                next.push(Word::new(v));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Nielsen shortening: replace a generator by a shorter product with
/// another one until nothing shrinks.
pub fn nielsen_shorten(gens: &[Word]) -> Vec<Word> {
    let mut g: Vec<Word> = gens.iter().map(free_reduce).filter(|w| !w.is_empty()).collect();
    loop {
        let mut changed = false;
        'outer: for i in 0..g.len() {
            for j in 0..g.len() {
                if i == j {
                    continue;
                }
                let (u, v) = (&g[i], &g[j]);
                if *u == *v || *u == v.inverse() {
                    g.remove(i);
                    changed = true;
                    break 'outer;
                }
                for c in [u.mul(v), u.mul(&v.inverse()), v.mul(u), v.inverse().mul(u)] {
                    let c = free_reduce(&c);
                    if c.len() < u.len() {
                        if c.is_empty() {
                            g.remove(i);
                        } else {
                            g[i] = c;
                        }
                        changed = true;
                        break 'outer;
                    }
                }
            }
        }
        if !changed {
            return g;
        }
    }
}

/// Elements of the subgroup of length at most `max_len`, by closing under
/// right multiplication with every intermediate kept below `cap`.
pub fn brute_force_members(gens: &[Word], max_len: usize) -> HashSet<Word> {
    let short = nielsen_shorten(gens);
    let cap = max_len + short.iter().map(Word::len).max().unwrap_or(0);
    let mut letters: Vec<Word> = short.clone();
    letters.extend(short.iter().map(Word::inverse));
    let mut seen: HashSet<Word> = HashSet::from([Word::empty()]);
    let mut layer = vec![Word::empty()];
    while !layer.is_empty() {
        let mut next = Vec::new();
        for w in &layer {
            for g in &letters {
                let v = free_reduce(&w.mul(g));
                if v.len() <= cap && seen.insert(v.clone()) {
                    next.push(v);
                }
            }
        }
        layer = next;
    }
    seen.into_iter().filter(|w| w.len() <= max_len).collect()
}

/// Folding against brute force for the subgroup `gens`, on all reduced
/// words up to length `max_len`.
pub fn check_membership(gens: &[Word], tests: &[Word], max_len: usize) -> std::result::Result<(), String> {
    let g = build_folded_graph(gens, 2);
    let brute = brute_force_members(gens, max_len);
    for w in tests {
        let folded = graph_membership(&g, w);
        if folded != brute.contains(w) {
            return Err(format!("membership of {w:?} in {gens:?}: folding {folded}, brute force {}", !folded));
        }
    }
    Ok(())
}

/// Rotations, inversion and negated characters all give the same verdict.
pub fn check_brown_invariance(r: &Word) -> std::result::Result<(), String> {
    let e = exponent_vector(r, 2);
    let g = e[0].gcd(&e[1]);
    let chi = if g == 0 { Character::new(vec![1, 2]) } else { Character::new(vec![e[1] / g, -e[0] / g]) };
    let Ok(base) = brown_rank1(r, &chi) else { return Ok(()) };
    let core = cyclic_core(r);
    for k in 0..core.len() {
        if brown_rank1(&core.rotate(k), &chi).unwrap().fg_kernel != base.fg_kernel {
            return Err(format!("rotation {k} changes the verdict for {r:?}"));
        }
    }
    if brown_rank1(&r.inverse(), &chi).unwrap().fg_kernel != base.fg_kernel {
        return Err(format!("inversion changes the verdict for {r:?}"));
    }
    if brown_rank1(r, &chi.neg()).unwrap().fg_kernel != base.fg_kernel {
        return Err(format!("-chi changes the verdict for {r:?}"));
    }
    Ok(())
}

/// Cyclically reduced two-generator words whose cyclic core uses both generators.
pub fn random_relator(rng: &mut ChaCha8Rng) -> Word {
    loop {
        let len = rng.gen_range(4..24);
        let w = cyclic_core(&random_word(rng, 2, len));
        if (0..2).all(|g| w.occurrences(g) != (0, 0)) {
            return w;
        }
    }
}

/// Ordered pairs up to inversion of nontrivial reduced words up to length 4.
pub fn rank_two_subgroups() -> Vec<Vec<Word>> {
    let words: Vec<Word> = reduced_words(4).into_iter().filter(|w| !w.is_empty()).collect();
    let reps: Vec<Word> = words.iter().filter(|w| **w <= w.inverse()).cloned().collect();
    let mut out: Vec<Vec<Word>> = reps.iter().map(|w| vec![w.clone()]).collect();
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            out.push(vec![reps[i].clone(), reps[j].clone()]);
        }
    }
    out
}
