use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::abelian::{abelianization, is_simple_form, AbelianStructure};
use crate::error::{Error, Result};
use crate::laurent::{laurent_gcd, newton_vertices, Laurent};
use crate::matrix::Matrix;
use crate::presentation::{Flags, Presentation};
use crate::word::{cyclic_core, free_reduce, Letter, Word};
use crate::{IntMatrix, LaurentPoly};

/// Element of the integral group ring of a free group.
#[derive(Clone, Debug, Default)]
pub struct GroupRingElem {
    pub terms: Vec<(i64, Word)>,
}

impl GroupRingElem {
    pub fn zero() -> GroupRingElem {
        GroupRingElem::default()
    }

    pub fn one() -> GroupRingElem {
        GroupRingElem { terms: vec![(1, Word::empty())] }
    }

    /// Combines equal words and drops zero coefficients; sorted by word.
    pub fn normalize(&self) -> GroupRingElem {
        let mut acc: BTreeMap<Word, i64> = BTreeMap::new();
        for (c, w) in &self.terms {
            *acc.entry(free_reduce(w)).or_insert(0) += c;
        }
        GroupRingElem { terms: acc.into_iter().filter(|(_, c)| *c != 0).map(|(w, c)| (c, w)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.normalize().terms.is_empty()
    }

    pub fn add(&self, other: &GroupRingElem) -> GroupRingElem {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        GroupRingElem { terms }.normalize()
    }

    /// `w · self`
    pub fn left_mul(&self, w: &Word) -> GroupRingElem {
        GroupRingElem { terms: self.terms.iter().map(|(c, x)| (*c, w.mul(x))).collect() }.normalize()
    }
}

impl PartialEq for GroupRingElem {
    fn eq(&self, other: &GroupRingElem) -> bool {
        self.normalize().terms == other.normalize().terms
    }
}

/// Fox derivative `∂word/∂gen`.
pub fn fox_derivative(word: &Word, gen: usize) -> GroupRingElem {
    let mut terms = Vec::new();
    let mut prefix: Vec<Letter> = Vec::new();
    for &l in word.letters() {
        if l.gen() == gen {
            if l.is_inverse() {
                let mut p = prefix.clone();
                p.push(l);
                terms.push((-1, Word::new(p)));
            } else {
                terms.push((1, Word::new(prefix.clone())));
            }
        }
        prefix.push(l);
    }
    GroupRingElem { terms }.normalize()
}

/// Free-part images of the generators as small exponent vectors.
fn exponent_images(ab: &AbelianStructure) -> Vec<Vec<i64>> {
    (0..ab.ngens())
        .map(|g| {
            ab.free_image_of_gen(g)
                .iter()
                .map(|x| x.to_i64().expect("exponent fits in i64"))
                .collect()
        })
        .collect()
}

fn word_monomial(w: &Word, imgs: &[Vec<i64>], b: usize) -> Vec<i64> {
    let mut e = vec![0i64; b];
    for l in w.letters() {
        for (acc, x) in e.iter_mut().zip(&imgs[l.gen()]) {
            *acc += l.sign() * x;
        }
    }
    e
}

/// Image in `Z[Z^b]`; torsion is discarded.
pub fn abelian_eval(elem: &GroupRingElem, ab: &AbelianStructure) -> LaurentPoly {
    let imgs = exponent_images(ab);
    Laurent::from_terms(
        ab.betti,
        elem.terms.iter().map(|(c, w)| (word_monomial(w, &imgs, ab.betti), BigInt::from(*c))),
    )
}

/// Row of the Alexander matrix for one relator, accumulated in a single
/// pass over its letters.
pub fn alexander_row(relator: &Word, ab: &AbelianStructure) -> Vec<LaurentPoly> {
    let b = ab.betti;
    let imgs = exponent_images(ab);
    let mut row = vec![Laurent::zero(b); ab.ngens()];
    let mut pos = vec![0i64; b];
    for &l in relator.letters() {
        let g = l.gen();
        if l.is_inverse() {
            for (p, x) in pos.iter_mut().zip(&imgs[g]) {
                *p -= x;
            }
            row[g] = &row[g] - &Laurent::monomial(pos.clone(), BigInt::from(1));
        } else {
            row[g] = &row[g] + &Laurent::monomial(pos.clone(), BigInt::from(1));
            for (p, x) in pos.iter_mut().zip(&imgs[g]) {
                *p += x;
            }
        }
    }
    row
}

#[derive(Clone, Debug)]
pub struct AlexanderMatrix {
    /// Rows indexed by relators, columns by generators.
    pub entries: Vec<Vec<LaurentPoly>>,
    pub basis: AbelianStructure,
}

pub fn alexander_matrix(pres: &Presentation) -> Result<AlexanderMatrix> {
    let ab = abelianization(pres);
    alexander_matrix_with(pres, ab)
}

/// Alexander matrix evaluated through a given abelianization of `pres`.
pub fn alexander_matrix_with(pres: &Presentation, ab: AbelianStructure) -> Result<AlexanderMatrix> {
    if ab.betti == 0 {
        return Err(Error::NoFreePart);
    }
    let entries = pres.relators.iter().map(|r| alexander_row(r, &ab)).collect();
    Ok(AlexanderMatrix { entries, basis: ab })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DeltaStatus {
    Nonzero,
    /// Every `(n-1)`-minor vanishes.
    Zero,
}

/// A minor: rows kept and the deleted column.
#[derive(Clone, Debug)]
pub struct Minor {
    pub rows: Vec<usize>,
    pub deleted_col: usize,
    pub value: LaurentPoly,
}

#[derive(Clone, Debug)]
pub struct AlexanderData {
    pub matrix: Vec<Vec<LaurentPoly>>,
    pub minors: Vec<Minor>,
    /// Normalized; zero when `status` is `Zero`.
    pub delta: LaurentPoly,
    pub status: DeltaStatus,
    pub basis: AbelianStructure,
}

impl AlexanderData {
    pub fn render_delta(&self) -> String {
        self.delta.render(&self.basis.var_names)
    }
}

impl Serialize for AlexanderData {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            variables: &'a [String],
            matrix: Vec<Vec<String>>,
            delta: String,
            status: DeltaStatus,
        }
        let names = &self.basis.var_names;
        Out {
            variables: names,
            matrix: self.matrix.iter().map(|r| r.iter().map(|p| p.render_sum(names)).collect()).collect(),
            delta: self.render_delta(),
            status: self.status,
        }
        .serialize(s)
    }
}

/// Determinant over the Laurent ring by Bareiss elimination.
pub fn laurent_det(m: &[Vec<LaurentPoly>], nvars: usize) -> LaurentPoly {
    let n = m.len();
    if n == 0 {
        return Laurent::one(nvars);
    }
    let mut a: Vec<Vec<LaurentPoly>> = m.to_vec();
    let mut negate = false;
    let mut prev = Laurent::one(nvars);
    for k in 0..n {
        let pivot = (k..n).filter(|&i| !a[i][k].is_zero()).min_by_key(|&i| a[i][k].len());
        let Some(p) = pivot else {
            return Laurent::zero(nvars);
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = Laurent::zero(nvars);
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            return out;
        }
    }
}

pub fn alexander_polynomial(pres: &Presentation) -> Result<AlexanderData> {
    alexander_from_matrix(alexander_matrix(pres)?)
}

/// Δ as the gcd of the `(n-1)`-minors of a computed matrix.
pub fn alexander_from_matrix(am: AlexanderMatrix) -> Result<AlexanderData> {
    let b = am.basis.betti;
    let n = am.basis.ngens();
    let m = am.entries.len();
    let mut minors = Vec::new();
    if n >= 1 && m + 1 >= n {
        for rows in subsets(m, n - 1) {
            for del in 0..n {
                let sub: Vec<Vec<LaurentPoly>> = rows
                    .iter()
                    .map(|&i| (0..n).filter(|&j| j != del).map(|j| am.entries[i][j].clone()).collect())
                    .collect();
                minors.push(Minor { rows: rows.clone(), deleted_col: del, value: laurent_det(&sub, b) });
            }
        }
    }
    let values: Vec<LaurentPoly> = minors.iter().map(|m| m.value.clone()).collect();
    let (delta, status) = match laurent_gcd(&values) {
        Ok(d) => (d, DeltaStatus::Nonzero),
        Err(Error::ZeroIdeal) => (Laurent::zero(b), DeltaStatus::Zero),
        Err(e) => return Err(e),
    };
    Ok(AlexanderData { matrix: am.entries, minors, delta, status, basis: am.basis })
}

/// Data of a presentation in simple form `rᵢ = x uᵢ X vᵢ`.
#[derive(Clone, Debug)]
pub struct SimpleFormData {
    /// `K[i][j]` = exponent sum of generator `j` in `uᵢ` (columns skip `x`).
    pub k: IntMatrix,
    pub l: IntMatrix,
    pub lead: BigInt,
    pub trail: BigInt,
    /// `det(tK + L)`, which is Δ.
    pub det_poly: LaurentPoly,
    /// Characteristic polynomial of the monodromy when every `uᵢ` is a
    /// single generator.
    pub monodromy_charpoly: Option<LaurentPoly>,
}

pub fn simple_form_data(pres: &Presentation, gen: usize) -> Result<SimpleFormData> {
    if !is_simple_form(pres, gen)? {
        return Err(Error::NotSimpleForm(pres.generators[gen].name.clone()));
    }
    let ab = abelianization(pres);
    if ab.betti != 1 || !ab.free_image_of_gen(gen)[0].abs().is_one() {
        return Err(Error::NotStandardForm(pres.generators[gen].name.clone()));
    }
    if (0..pres.rank()).any(|g| g != gen && !ab.free_image_of_gen(g)[0].is_zero()) {
        return Err(Error::NotStandardForm(pres.generators[gen].name.clone()));
    }
    let others: Vec<usize> = (0..pres.rank()).filter(|&g| g != gen).collect();
    if others.len() != pres.relators.len() {
        return Err(Error::Unsupported(format!(
            "{} relators for {} non-{} generators",
            pres.relators.len(),
            others.len(),
            pres.generators[gen].name
        )));
    }
    let d = others.len();
    let mut k = vec![vec![BigInt::zero(); d]; d];
    let mut l = vec![vec![BigInt::zero(); d]; d];
    let mut fibred_shape = true;
    for (i, r) in pres.relators.iter().enumerate() {
        let r = cyclic_core(r);
        let start = r.letters().iter().position(|&x| x == Letter::pos(gen)).expect("simple form");
        let rot = r.rotate(start);
        let end = rot.letters().iter().position(|&x| x == Letter::neg(gen)).expect("simple form");
        let u = &rot.letters()[1..end];
        let v = &rot.letters()[end + 1..];
        fibred_shape &= u.len() == 1 && !u[0].is_inverse();
        for x in u {
            let j = others.iter().position(|&g| g == x.gen()).unwrap();
            k[i][j] += x.sign();
        }
        for x in v {
            let j = others.iter().position(|&g| g == x.gen()).unwrap();
            l[i][j] += x.sign();
        }
    }
    let k = Matrix::from_rows(d, k);
    let l = Matrix::from_rows(d, l);
    let lead = k.det();
    let trail = l.det();
    let entries: Vec<Vec<LaurentPoly>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| Laurent::from_terms(1, [(vec![1], k[(i, j)].clone()), (vec![0], l[(i, j)].clone())]))
                .collect()
        })
        .collect();
    let det_poly = laurent_det(&entries, 1);
    let monodromy_charpoly = (fibred_shape && !det_poly.is_zero()).then(|| det_poly.normalized());
    Ok(SimpleFormData { k, l, lead, trail, det_poly, monodromy_charpoly })
}

/// Independent fibredness obstructions read off Δ.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    /// β₁ = 1 and Δ is not monic.
    pub nonmonic_beta1: bool,
    /// No Newton-polytope vertex has coefficient ±1.
    pub newton_no_units: bool,
    /// β₁ = 1, hyperbolic, and Δ has degree span below 2.
    pub degree_too_small: bool,
    /// Closed hyperbolic with β₁ = 1 and Δ of odd span, span < 4, or
    /// non-monic.
    pub closed_hyperbolic_shape: bool,
    /// For β₁ = 1: whether |Δ(1)| equals the torsion order. Diagnostic.
    pub torsion_consistency: Option<bool>,
    pub delta_at_ones: String,
    pub torsion_order: String,
}

impl ObstructionReport {
    pub fn any(&self) -> bool {
        self.nonmonic_beta1 || self.newton_no_units || self.degree_too_small || self.closed_hyperbolic_shape
    }

    pub fn fired(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.nonmonic_beta1 {
            v.push("nonmonic_beta1");
        }
        if self.newton_no_units {
            v.push("newton_no_units");
        }
        if self.degree_too_small {
            v.push("degree_too_small");
        }
        if self.closed_hyperbolic_shape {
            v.push("closed_hyperbolic_shape");
        }
        v
    }
}

pub fn fibred_obstructions(delta: &LaurentPoly, ab: &AbelianStructure, flags: &Flags) -> ObstructionReport {
    let rank_one = ab.betti == 1;
    let pred = delta.predicates();
    let span = pred.degree_span.first().copied().unwrap_or(0);
    let monic = !delta.is_zero() && pred.is_monic_univariate;
    let newton_no_units = if delta.is_zero() {
        flags.three_manifold
    } else {
        (rank_one || flags.three_manifold)
            && newton_vertices(delta)
                .map(|v| v.iter().all(|(_, c)| !c.abs().is_one()))
                .unwrap_or(false)
    };
    let at_ones = pred.value_at_ones.abs();
    ObstructionReport {
        nonmonic_beta1: rank_one && !monic,
        newton_no_units,
        degree_too_small: rank_one && flags.hyperbolic && !delta.is_zero() && span < 2,
        closed_hyperbolic_shape: rank_one
            && flags.closed
            && flags.hyperbolic
            && (delta.is_zero() || span % 2 == 1 || span < 4 || !monic),
        torsion_consistency: rank_one.then(|| at_ones == ab.torsion_order()),
        delta_at_ones: at_ones.to_string(),
        torsion_order: ab.torsion_order().to_string(),
    }
}
