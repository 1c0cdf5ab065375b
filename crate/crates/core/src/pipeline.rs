use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::abelian::{abelianization, is_simple_form, primitive_characters, to_standard_form, AbelianStructure, Character};
use crate::brown::{brown_quotient, brown_rank1, brown_rank2};
use crate::cosets::{
    cyclic_cover, SubgroupPresentation, low_index_subgroups, reidemeister_schreier, subgroup_homology, SubgroupSpec,
};
use crate::error::{Error, Result};
use crate::folding::{
    ascending_hnn_check, build_folded_graph, concat_double_relators, descent_check, extract_fiber_subwords,
    generates_whole, HnnVerdict, Side,
};
use crate::fox::{alexander_polynomial, fibred_obstructions, DeltaStatus};
use crate::presentation::{substitute, Presentation};
use crate::word::{cyclic_core, format_word, Letter, Word};

/// Appends `mᵖlᑫ` for the chosen cusp and drops that cusp. The result is
/// not marked hyperbolic; set the flag by hand when that is known.
pub fn dehn_fill(pres: &Presentation, cusp_index: usize, p: i64, q: i64) -> Result<Presentation> {
    if p.gcd(&q) != 1 {
        return Err(Error::BadSlope(p, q));
    }
    let cusp = pres.cusps.get(cusp_index).ok_or(Error::NoCusp(cusp_index))?;
    // (p,q) and (-p,-q) are the same slope.
    let (p, q) = if q < 0 || (q == 0 && p < 0) { (-p, -q) } else { (p, q) };
    let rel = cusp.meridian.pow(p).mul(&cusp.longitude.pow(q));
    let mut out = pres.clone();
    out.relators.push(rel);
    out.cusps.remove(cusp_index);
    out.name = format!("{}({},{})", pres.name, p, q);
    out.flags.closed = out.cusps.is_empty();
    // Finitely many fillings of a hyperbolic manifold are not hyperbolic.
    out.flags.hyperbolic = false;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Fibred,
    NotFibred,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct Evidence {
    pub stage: &'static str,
    pub result: String,
    pub detail: Value,
}

/// Positive evidence that can be re-checked without the pipeline.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Brown's walk for a one-relator presentation.
    Walk { relator: String, chi: Vec<i64> },
    /// Brown's walk on one relator of a two-generator presentation.
    Quotient { relator_index: usize, relator: String, chi: Vec<i64> },
    /// Ascending-HNN structure of a cyclic cover, plus descent.
    Cover {
        degree: usize,
        cover: String,
        t: String,
        fiber_rank: usize,
        subwords: Vec<String>,
        side: Side,
        descent: bool,
        #[serde(skip)]
        words: Vec<Word>,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct FibredVerdict {
    pub status: Status,
    pub stage: Option<&'static str>,
    pub evidence: Vec<Evidence>,
    pub caveats: Vec<String>,
    /// Notes that never affect the status.
    pub annotations: Vec<String>,
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug)]
pub struct FibredOptions {
    /// Largest cyclic cover degree tried in the cover stage.
    pub max_cover: usize,
}

impl Default for FibredOptions {
    fn default() -> Self {
        FibredOptions { max_cover: 6 }
    }
}

const QUOTIENT_CAVEAT: &str =
    "fibred-via-quotient: the kernel is finitely generated; manifold fibring needs irreducibility or longitude-slope filling";

struct Run<'a> {
    pres: &'a Presentation,
    ab: AbelianStructure,
    evidence: Vec<Evidence>,
    caveats: Vec<String>,
}

impl Run<'_> {
    fn note(&mut self, stage: &'static str, result: impl Into<String>, detail: Value) {
        self.evidence.push(Evidence { stage, result: result.into(), detail });
    }

    fn finish(self, status: Status, stage: Option<&'static str>, certificate: Option<Certificate>) -> FibredVerdict {
        let mut annotations = Vec::new();
        if self.pres.flags.knot {
            annotations.push("knot exterior: the zero-slope filling is fibred exactly when this manifold is".to_string());
        }
        FibredVerdict { status, stage, evidence: self.evidence, caveats: self.caveats, annotations, certificate }
    }
}

fn uses_both(r: &Word) -> bool {
    (0..2).all(|g| r.occurrences(g) != (0, 0))
}

/// Runs the cascade: Brown for one-relator groups, Alexander obstructions,
/// Brown on relator quotients, then cyclic covers.
pub fn decide_fibred(pres: &Presentation, opts: &FibredOptions) -> FibredVerdict {
    let ab = abelianization(pres);
    let mut run = Run { pres, ab, evidence: Vec::new(), caveats: Vec::new() };
    run.note(
        "homology",
        format!("betti {} torsion {:?}", run.ab.betti, run.ab.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>()),
        serde_json::to_value(&run.ab).unwrap_or(Value::Null),
    );
    if run.ab.betti == 0 {
        return run.finish(Status::NotFibred, Some("homology"), None);
    }
    if !pres.flags.hyperbolic {
        run.caveats.push("Fibred means a character with finitely generated kernel; irreducibility is not checked".into());
    }

    let one_relator = pres.rank() == 2 && pres.relators.len() == 1 && uses_both(&cyclic_core(&pres.relators[0]));
    if one_relator && run.ab.betti == 1 {
        let chi = primitive_characters(&run.ab).expect("betti 1").basis[0].clone();
        match brown_rank1(&pres.relators[0], &chi) {
            Ok(res) => {
                run.note("brown_rank1", if res.fg_kernel { "fg kernel" } else { "kernel not fg" }, json!(res.walk));
                alexander_stage(&mut run, true);
                let cert = res.fg_kernel.then(|| Certificate::Walk {
                    relator: pres.format_word(&res.walk.relator),
                    chi: chi.values.clone(),
                });
                let status = if res.fg_kernel { Status::Fibred } else { Status::NotFibred };
                return run.finish(status, Some("brown_rank1"), cert);
            }
            Err(e) => run.note("brown_rank1", format!("skipped: {e}"), Value::Null),
        }
    }
    if one_relator && run.ab.betti == 2 {
        match brown_rank2(&pres.relators[0]) {
            Ok(rep) => {
                let witness = rep.fg_witness();
                run.note(
                    "brown_rank2",
                    match witness {
                        Some(d) => format!("fg kernel at ({},{})", d.0, d.1),
                        None => "no direction has fg kernel".into(),
                    },
                    json!({ "exceptional_rays": rep.exceptional_rays, "exceptional_cones": rep.exceptional_cones.len(), "hull": rep.hull }),
                );
                alexander_stage(&mut run, true);
                return match witness {
                    Some(d) => {
                        let cert = Certificate::Walk { relator: pres.format_word(&rep.path.relator), chi: vec![d.0, d.1] };
                        run.finish(Status::Fibred, Some("brown_rank2"), Some(cert))
                    }
                    None => run.finish(Status::NotFibred, Some("brown_rank2"), None),
                };
            }
            Err(e) => run.note("brown_rank2", format!("skipped: {e}"), Value::Null),
        }
    }

    if alexander_stage(&mut run, false) {
        return run.finish(Status::NotFibred, Some("alexander"), None);
    }

    if pres.rank() == 2 && pres.relators.len() > 1 {
        if let Some(cert) = quotient_stage(&mut run) {
            run.caveats.push(QUOTIENT_CAVEAT.into());
            return run.finish(Status::Fibred, Some("brown_quotient"), Some(cert));
        }
    }

    if let Some(cert) = cover_stage(&mut run, opts) {
        return run.finish(Status::Fibred, Some("cover"), Some(cert));
    }
    run.finish(Status::Unknown, None, None)
}

/// Returns whether an obstruction fired. With `corroborate` the result
/// is evidence only.
fn alexander_stage(run: &mut Run, corroborate: bool) -> bool {
    let stage = "alexander";
    let data = match alexander_polynomial(run.pres) {
        Ok(d) => d,
        Err(e) => {
            run.note(stage, format!("skipped: {e}"), Value::Null);
            return false;
        }
    };
    let obs = fibred_obstructions(&data.delta, &data.basis, &run.pres.flags);
    let fired = obs.fired();
    let delta = match data.status {
        DeltaStatus::Zero => "0".to_string(),
        DeltaStatus::Nonzero => data.render_delta(),
    };
    let result = if fired.is_empty() {
        format!("delta {delta}: no obstruction")
    } else {
        format!("delta {delta}: {}", fired.join(", "))
    };
    run.note(stage, result, json!({ "delta": delta, "variables": data.basis.var_names, "obstructions": obs, "corroborating": corroborate }));
    !corroborate && obs.any()
}

fn quotient_stage(run: &mut Run) -> Option<Certificate> {
    let pres = run.pres;
    let mut chars: Vec<Character> = Vec::new();
    if run.ab.betti == 1 {
        chars.push(primitive_characters(&run.ab).ok()?.basis[0].clone());
    }
    for (i, r) in pres.relators.iter().enumerate() {
        let core = cyclic_core(r);
        if core.is_empty() || !uses_both(&core) {
            continue;
        }
        let mut candidates = chars.clone();
        if run.ab.betti == 2 {
            if let Ok(rep) = brown_rank2(&core) {
                if let Some(d) = rep.fg_witness() {
                    candidates.push(Character::new(vec![d.0, d.1]));
                }
            }
        }
        for chi in candidates {
            match brown_quotient(pres, i, &chi) {
                Ok(q) if q.fg_kernel_in_quotient => {
                    run.note("brown_quotient", format!("relator {i}: fg kernel for chi {:?}", q.chi), json!(q.walk));
                    return Some(Certificate::Quotient {
                        relator_index: i,
                        relator: pres.format_word(&q.walk.relator),
                        chi: q.chi,
                    });
                }
                Ok(q) => run.note("brown_quotient", format!("relator {i}: kernel not fg for chi {:?}", q.chi), Value::Null),
                Err(e) => run.note("brown_quotient", format!("relator {i}: {e}"), Value::Null),
            }
        }
    }
    None
}

/// A presentation in simple form with respect to `t`, repairing double
/// relators when possible. The flag reports whether relators were dropped.
pub fn prepare_simple_form(pres: &Presentation, t: usize) -> Option<(Presentation, bool)> {
    if pres.relators.iter().any(|r| {
        let (p, n) = r.occurrences(t);
        p != n
    }) {
        return None;
    }
    if is_simple_form(pres, t).ok()? {
        return Some((pres.clone(), false));
    }
    let base = concat_double_relators(pres, t).map(|(p, _)| p).unwrap_or_else(|_| pres.clone());
    let mut kept = base.clone();
    kept.relators = base.relators.iter().filter(|r| cyclic_core(r).occurrences(t) == (1, 1)).cloned().collect();
    if kept.relators.is_empty() {
        return None;
    }
    let dropped = kept.relators.len() != base.relators.len();
    Some((kept, dropped))
}

fn hnn_certificate(p: &Presentation, t: usize, dropped: bool) -> Option<(Side, Vec<Word>, usize)> {
    let mut q = p.clone();
    // One generating side is enough only for a three-manifold group in the
    // exact shape ⟨t, x₁…x_d | d relators⟩.
    if dropped || q.relators.len() + 1 != q.rank() {
        q.flags.three_manifold = false;
    }
    let res = ascending_hnn_check(&q, t).ok()?;
    if res.verdict != HnnVerdict::Fibred {
        return None;
    }
    if res.forward_generates {
        Some((Side::TtoInvT, res.subwords, res.fiber_rank))
    } else {
        Some((Side::InvTtoT, res.other_side, res.fiber_rank))
    }
}

fn cover_stage(run: &mut Run, opts: &FibredOptions) -> Option<Certificate> {
    let pres = run.pres;
    // Degree one: the presentation may already have the right shape.
    for t in 0..pres.rank() {
        let Some((p, dropped)) = prepare_simple_form(pres, t) else { continue };
        if let Some((side, words, d)) = hnn_certificate(&p, t, dropped) {
            run.note("cover", format!("degree 1: ascending HNN over {}", pres.generators[t].name), Value::Null);
            let names: Vec<String> = p.names().into_iter().filter(|n| *n != pres.generators[t].name).collect();
            return Some(Certificate::Cover {
                degree: 1,
                cover: p.to_string(),
                t: pres.generators[t].name.clone(),
                fiber_rank: d,
                subwords: words.iter().map(|w| format_word(w, &names)).collect(),
                side,
                descent: true,
                words,
            });
        }
    }
    if run.ab.betti != 1 {
        run.note("cover", "cyclic covers need betti 1", Value::Null);
        return None;
    }
    let (std, _) = to_standard_form(pres);
    let std_ab = abelianization(&std);
    let x_image = std_ab.free_image_of_gen(0)[0].to_i64()?;
    if x_image.abs() != 1 {
        run.note("cover", "no generator maps to a free generator", Value::Null);
        return None;
    }
    let chi = Character::new((0..std.rank()).map(|g| std_ab.free_image_of_gen(g)[0].to_i64().unwrap_or(0) * x_image).collect());
    for n in 2..=opts.max_cover {
        let Ok(table) = cyclic_cover(&std, &chi, n) else { continue };
        let Ok(sub) = reidemeister_schreier(&std, &table) else { continue };
        let find_t = |inc: &[Word]| inc.iter().position(|w| *w == Word::power_of(0, n as i64) || *w == Word::power_of(0, -(n as i64)));
        let Some(t0) = find_t(sub.inclusion.as_deref().unwrap_or(&[])) else { continue };
        // Eliminating generators can destroy simple form, so try the
        // rewritten presentation before the fully simplified one.
        let all: Vec<usize> = (0..sub.presentation.rank()).collect();
        for (label, simp) in [("rewritten", sub.simplified(&all)), ("simplified", sub.simplified(&[t0]))] {
            if let Some(cert) = try_cover(run, n, label, &simp, &std_ab, &find_t) {
                return Some(cert);
            }
        }
    }
    None
}

fn try_cover(
    run: &mut Run,
    n: usize,
    label: &str,
    simp: &SubgroupPresentation,
    std_ab: &AbelianStructure,
    find_t: &dyn Fn(&[Word]) -> Option<usize>,
) -> Option<Certificate> {
    let t = find_t(simp.inclusion.as_deref().unwrap_or(&[]))?;
    let cover = &simp.presentation;
    let shape = format!("{} generators, {} relators", cover.rank(), cover.relators.len());
    let Some((p, dropped)) = prepare_simple_form(cover, t) else {
        run.note("cover", format!("degree {n} ({label}): not in simple form ({shape})"), Value::Null);
        return None;
    };
    let Some((side, words, d)) = hnn_certificate(&p, t, dropped) else {
        run.note("cover", format!("degree {n} ({label}): subwords do not generate the fibre ({shape})"), Value::Null);
        return None;
    };
    let fiber: Vec<usize> = (0..cover.rank()).filter(|&g| g != t).collect();
    let descent = descent_check(simp, std_ab, &fiber).unwrap_or(false);
    run.note(
        "cover",
        format!("degree {n} ({label}): ascending HNN, fibre rank {d}, descent {descent}"),
        json!({ "inclusion": simp.format_inclusion() }),
    );
    if !descent {
        return None;
    }
    let names: Vec<String> = cover.names().into_iter().enumerate().filter(|(g, _)| *g != t).map(|(_, s)| s).collect();
    Some(Certificate::Cover {
        degree: n,
        cover: p.to_string(),
        t: cover.generators[t].name.clone(),
        fiber_rank: d,
        subwords: words.iter().map(|w| format_word(w, &names)).collect(),
        side,
        descent,
        words,
    })
}

/// Re-validates a certificate independently of the cascade.
pub fn verify_certificate(pres: &Presentation, cert: &Certificate) -> bool {
    match cert {
        Certificate::Walk { relator, chi } => {
            pres.relators.len() == 1
                && pres.parse_word(relator).is_ok_and(|r| {
                    cyclic_core(&r) == cyclic_core(&pres.relators[0])
                        && brown_rank1(&r, &Character::new(chi.clone())).is_ok_and(|x| x.fg_kernel)
                })
        }
        Certificate::Quotient { relator_index, chi, .. } => {
            let c = Character::new(chi.clone());
            c.check(pres).is_ok()
                && pres
                    .relators
                    .get(*relator_index)
                    .is_some_and(|r| uses_both(&cyclic_core(r)) && brown_rank1(r, &c).is_ok_and(|x| x.fg_kernel))
        }
        Certificate::Cover { cover, t, fiber_rank, subwords, words, side, descent, .. } => {
            let Ok(p) = crate::presentation::parse_presentation(cover) else { return false };
            let Ok(ti) = p.gen_index(t) else { return false };
            let Ok(extracted) = extract_fiber_subwords(&p, ti, *side) else { return false };
            let names: Vec<String> = p.names().into_iter().enumerate().filter(|(g, _)| *g != ti).map(|(_, s)| s).collect();
            let printed: Vec<String> = extracted.iter().map(|w| format_word(w, &names)).collect();
            extracted == *words
                && printed == *subwords
                && *fiber_rank == p.rank() - 1
                && generates_whole(&build_folded_graph(words, *fiber_rank))
                && *descent
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CorankReport {
    pub lower: usize,
    pub upper: usize,
    pub evidence: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct CorankOptions {
    pub max_index: usize,
    pub fibred: FibredOptions,
}

impl Default for CorankOptions {
    fn default() -> Self {
        CorankOptions { max_index: 5, fibred: FibredOptions::default() }
    }
}

/// Conjugacy-class counts of subgroups of `F₂` for index 1..=6.
pub const F2_CLASS_COUNTS: [usize; 6] = [1, 3, 7, 26, 97, 624];

/// Bounds on the largest rank of a free group the group maps onto.
pub fn corank_bounds(pres: &Presentation, opts: &CorankOptions) -> CorankReport {
    let ab = abelianization(pres);
    let b = ab.betti;
    // Killing the other generators maps onto the free group on those
    // missing from every relator.
    let unused = (0..pres.rank())
        .filter(|&g| pres.relators.iter().all(|r| cyclic_core(r).occurrences(g) == (0, 0)))
        .count();
    let lower = unused.max(usize::from(b > 0));
    let mut upper = b;
    let mut evidence = vec![format!("betti {b}")];
    if unused > 1 {
        evidence.push(format!("{unused} generators occur in no relator"));
    }
    if upper <= lower {
        return CorankReport { lower, upper, evidence };
    }
    // (a) two generators and a nontrivial relator.
    if pres.rank() == 2 && pres.relators.iter().any(|r| !cyclic_core(r).is_empty()) {
        upper = 1;
        evidence.push("two generators with a nontrivial relator: not free of rank 2".into());
    }
    // (b) fibred with betti at least 2.
    if upper > 1 {
        let v = decide_fibred(pres, &opts.fibred);
        if v.status == Status::Fibred {
            upper = b - 1;
            evidence.push(format!("fibred: corank below betti {b}"));
        }
    }
    // (c) commuting generators.
    if upper > 1 {
        if let Some(msg) = commutator_obstruction(pres) {
            upper = 1;
            evidence.push(msg);
        }
    }
    // (d) index-2 subgroups must all have betti at least 3.
    if upper > 1 {
        if let Ok(li) = low_index_subgroups(pres, 2) {
            let big = li
                .tables
                .iter()
                .filter(|t| t.index() == 2)
                .filter_map(|t| subgroup_homology(pres, SubgroupSpec::Table(t)).ok())
                .filter(|h| h.betti >= 3)
                .count();
            if big < 3 {
                upper = 1;
                evidence.push(format!("only {big} index-2 subgroups have betti at least 3"));
            }
        }
    }
    // (e) subgroup counts must dominate those of F₂.
    if upper > 1 {
        let n = opts.max_index.clamp(2, crate::cosets::MAX_LOW_INDEX);
        if let Ok(li) = low_index_subgroups(pres, n) {
            if let Some(k) = (2..=n).find(|&k| li.count(k) < F2_CLASS_COUNTS[k - 1]) {
                upper = 1;
                evidence.push(format!("index {k}: {} classes, fewer than {} for F2", li.count(k), F2_CLASS_COUNTS[k - 1]));
            }
        }
    }
    CorankReport { lower, upper: upper.max(lower), evidence }
}

/// Cyclic core, up to rotation and inversion, equal to `g h G H`.
fn commutator_pair(r: &Word) -> Option<(usize, usize)> {
    let c = cyclic_core(r);
    if c.len() != 4 {
        return None;
    }
    let l = c.letters();
    for k in 0..4 {
        let (a, b, x, y) = (l[k], l[(k + 1) % 4], l[(k + 2) % 4], l[(k + 3) % 4]);
        if a.gen() != b.gen() && x == a.inverse() && y == b.inverse() {
            return Some((a.gen(), b.gen()));
        }
    }
    None
}

/// The relator pattern `g H k² G h K²`, which becomes a commutator after
/// `g = h x` and then `h = k² Y`.
fn double_square_pattern(r: &Word) -> Option<(usize, usize, usize)> {
    let c = cyclic_core(r);
    if c.len() != 8 {
        return None;
    }
    for w in [c.clone(), c.inverse()] {
        for k in 0..8 {
            let l = w.rotate(k);
            let l = l.letters();
            let (g, h, kk) = (l[0], l[1].inverse(), l[2]);
            let want = [g, h.inverse(), kk, kk, g.inverse(), h, kk.inverse(), kk.inverse()];
            let distinct = g.gen() != h.gen() && h.gen() != kk.gen() && g.gen() != kk.gen();
            if distinct && !g.is_inverse() && !h.is_inverse() && !kk.is_inverse() && l == want {
                return Some((g.gen(), h.gen(), kk.gen()));
            }
        }
    }
    None
}

fn commutator_obstruction(pres: &Presentation) -> Option<String> {
    if pres.rank() != 3 {
        return None;
    }
    for (i, r) in pres.relators.iter().enumerate() {
        let (work, how) = if commutator_pair(r).is_some() {
            (pres.clone(), "commutator")
        } else if let Some((g, h, k)) = double_square_pattern(r) {
            // g := h·x, then h := k²·Y.
            let x = Word::new(vec![Letter::pos(h), Letter::pos(g)]);
            let (p1, _) = substitute(pres, g, "x", &x).ok()?;
            let y = Word::new(vec![Letter::pos(k), Letter::pos(k), Letter::neg(h)]);
            let (p2, _) = substitute(&p1, h, "y", &y).ok()?;
            (p2, "commutator after substitution")
        } else {
            continue;
        };
        let Some((a, b)) = commutator_pair(&work.relators[i]) else { continue };
        let third = (0..3).find(|&g| g != a && g != b)?;
        for (j, other) in work.relators.iter().enumerate() {
            if j == i {
                continue;
            }
            let (p, n) = other.occurrences(third);
            if p != n {
                return Some(format!(
                    "relator {i} is a {how} of {} and {}; relator {j} has nonzero exponent sum in {}",
                    work.generators[a].name, work.generators[b].name, work.generators[third].name
                ));
            }
        }
    }
    None
}

/// Betti number change under filling, for the filling diagnostics.
pub fn betti_drop(before: &Presentation, after: &Presentation) -> i64 {
    abelianization(before).betti as i64 - abelianization(after).betti as i64
}

/// Whether |Δ(1)| equals the torsion order (β₁ = 1 diagnostic).
pub fn torsion_matches(pres: &Presentation) -> Option<bool> {
    let d = alexander_polynomial(pres).ok()?;
    if d.basis.betti != 1 || d.delta.is_zero() {
        return None;
    }
    let v = d.delta.value_at_ones();
    Some(num_traits::Signed::abs(&v) == d.basis.torsion_order() && !v.is_zero())
}
