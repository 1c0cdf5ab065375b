use num_integer::Integer;
use serde::Serialize;

use crate::abelian::{abelianization, primitive_characters, Character};
use crate::error::{Error, Result};
use crate::laurent::hull_2d;
use crate::presentation::Presentation;
use crate::word::{cyclic_core, Word};

/// Heights of a relator under a character, `h₀ = 0` and
/// `h_{i+1} = h_i + χ(letter i)`.
#[derive(Clone, Debug, Serialize)]
pub struct HeightWalk {
    #[serde(skip)]
    pub relator: Word,
    pub chi: Vec<i64>,
    pub heights: Vec<i64>,
}

impl HeightWalk {
    pub fn new(relator: &Word, chi: &Character) -> Result<HeightWalk> {
        let relator = cyclic_core(relator);
        if relator.is_empty() {
            return Err(Error::BadRelator("empty relator".into()));
        }
        if !chi.vanishes_on(&relator) {
            return Err(Error::NotACharacter);
        }
        let mut heights = Vec::with_capacity(relator.len() + 1);
        let mut h = 0i64;
        heights.push(h);
        for &l in relator.letters() {
            h += chi.of_letter(l);
            heights.push(h);
        }
        Ok(HeightWalk { relator, chi: chi.values.clone(), heights })
    }

    /// Cyclic points `P₀ … P_{L-1}`; the closing point is `P₀` again.
    pub fn cyclic_heights(&self) -> &[i64] {
        &self.heights[..self.heights.len() - 1]
    }

    pub fn max(&self) -> i64 {
        *self.heights.iter().max().unwrap()
    }

    pub fn min(&self) -> i64 {
        *self.heights.iter().min().unwrap()
    }

    pub fn indices_at(&self, h: i64) -> Vec<usize> {
        self.cyclic_heights().iter().enumerate().filter(|(_, &x)| x == h).map(|(i, _)| i).collect()
    }

    pub fn levels(&self) -> usize {
        let mut hs = self.cyclic_heights().to_vec();
        hs.sort();
        hs.dedup();
        hs.len()
    }

    /// Whether χ vanishes on some generator occurring in the relator.
    pub fn degenerate(&self) -> bool {
        self.relator.letters().iter().any(|l| self.chi[l.gen()] == 0)
    }

    fn extreme_ok(&self, h: i64) -> bool {
        let at = self.indices_at(h);
        if !self.degenerate() {
            return at.len() == 1;
        }
        // A flat step: two cyclically adjacent points joined by a χ-zero letter.
        let n = self.relator.len();
        if at.len() != 2 {
            return false;
        }
        let (i, j) = (at[0], at[1]);
        let step = if j == i + 1 {
            i
        } else if i == 0 && j == n - 1 {
            j
        } else {
            return false;
        };
        self.chi[self.relator.letters()[step].gen()] == 0
    }

    pub fn fg_kernel(&self) -> bool {
        self.extreme_ok(self.max()) && self.extreme_ok(self.min())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Rank1Result {
    pub fg_kernel: bool,
    pub walk: HeightWalk,
}

/// Brown's criterion for a one-relator group and a character.
pub fn brown_rank1(relator: &Word, chi: &Character) -> Result<Rank1Result> {
    if chi.is_zero() {
        return Err(Error::NotACharacter);
    }
    let walk = HeightWalk::new(relator, chi)?;
    Ok(Rank1Result { fg_kernel: walk.fg_kernel(), walk })
}

/// A relator drawn in the plane: `a` steps horizontally, `b` vertically.
#[derive(Clone, Debug, Serialize)]
pub struct LatticePath {
    #[serde(skip)]
    pub relator: Word,
    pub points: Vec<(i64, i64)>,
}

impl LatticePath {
    pub fn new(relator: &Word) -> Result<LatticePath> {
        let relator = cyclic_core(relator);
        if relator.is_empty() {
            return Err(Error::BadRelator("empty relator".into()));
        }
        if relator.max_gen().unwrap_or(0) > 1 {
            return Err(Error::NotRank2);
        }
        let mut points = vec![(0, 0)];
        let (mut x, mut y) = (0i64, 0i64);
        for l in relator.letters() {
            if l.gen() == 0 {
                x += l.sign();
            } else {
                y += l.sign();
            }
            points.push((x, y));
        }
        if (x, y) != (0, 0) {
            return Err(Error::NotRank2);
        }
        Ok(LatticePath { relator, points })
    }

    pub fn cyclic_points(&self) -> &[(i64, i64)] {
        &self.points[..self.points.len() - 1]
    }

    pub fn visits(&self, p: (i64, i64)) -> usize {
        self.cyclic_points().iter().filter(|&&q| q == p).count()
    }

    /// Hull vertices in counter-clockwise order.
    pub fn hull(&self) -> Vec<(i64, i64)> {
        let pts: Vec<Vec<i64>> = self.cyclic_points().iter().map(|&(x, y)| vec![x, y]).collect();
        hull_2d(&pts).into_iter().map(|v| (v[0], v[1])).collect()
    }
}

pub fn primitive_dir(m: i64, n: i64) -> (i64, i64) {
    let g = m.gcd(&n);
    if g == 0 {
        (0, 0)
    } else {
        (m / g, n / g)
    }
}

/// One representative per `±` pair: first nonzero coordinate positive.
pub fn canonical_sign(d: (i64, i64)) -> (i64, i64) {
    if d.0 < 0 || (d.0 == 0 && d.1 < 0) {
        (-d.0, -d.1)
    } else {
        d
    }
}

fn angle_cmp(a: (i64, i64), b: (i64, i64)) -> std::cmp::Ordering {
    let half = |d: (i64, i64)| if d.1 > 0 || (d.1 == 0 && d.0 > 0) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&(a.0 * b.1 - a.1 * b.0)))
}

#[derive(Clone, Debug, Serialize)]
pub struct HullVertex {
    pub point: (i64, i64),
    pub visits: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RayVerdict {
    pub dir: (i64, i64),
    pub fg: bool,
}

/// Open angular sector strictly between two consecutive critical rays.
#[derive(Clone, Debug, Serialize)]
pub struct Sector {
    pub from: (i64, i64),
    pub to: (i64, i64),
    pub representative: (i64, i64),
    pub fg: bool,
}

/// The character sphere of a two-generator one-relator group cut into
/// critical rays (hull edge normals and their negatives) and the open
/// sectors between them; on each sector the extremal faces are fixed.
#[derive(Clone, Debug, Serialize)]
pub struct ConeReport {
    pub hull: Vec<HullVertex>,
    pub rays: Vec<RayVerdict>,
    pub sectors: Vec<Sector>,
    /// Critical directions (one per `±` pair) whose kernel is not finitely
    /// generated.
    pub exceptional_rays: Vec<(i64, i64)>,
    pub exceptional_cones: Vec<Sector>,
    #[serde(skip)]
    pub path: LatticePath,
}

impl ConeReport {
    /// Recomputed from the walk, not from the enumeration.
    pub fn fg_kernel(&self, m: i64, n: i64) -> Result<bool> {
        let (m, n) = primitive_dir(m, n);
        if (m, n) == (0, 0) {
            return Err(Error::NotACharacter);
        }
        Ok(brown_rank1(&self.path.relator, &Character::new(vec![m, n]))?.fg_kernel)
    }

    pub fn no_fg_direction(&self) -> bool {
        self.rays.iter().all(|r| !r.fg) && self.sectors.iter().all(|s| !s.fg)
    }

    /// A witness direction with finitely generated kernel, if any.
    pub fn fg_witness(&self) -> Option<(i64, i64)> {
        self.sectors
            .iter()
            .find(|s| s.fg)
            .map(|s| canonical_sign(s.representative))
            .or_else(|| self.rays.iter().find(|r| r.fg).map(|r| canonical_sign(r.dir)))
    }
}

pub fn brown_rank2(relator: &Word) -> Result<ConeReport> {
    let path = LatticePath::new(relator)?;
    let hull = path.hull();
    let n = hull.len();
    let mut crit: Vec<(i64, i64)> = Vec::new();
    if n >= 2 {
        for i in 0..n {
            let (p, q) = (hull[i], hull[(i + 1) % n]);
            let normal = primitive_dir(q.1 - p.1, p.0 - q.0);
            crit.push(normal);
            crit.push((-normal.0, -normal.1));
        }
    } else {
        // A closed path with one hull point is impossible for a nonempty
        // reduced relator, but keep the axes as a fallback.
        crit.extend([(1, 0), (0, 1), (-1, 0), (0, -1)]);
    }
    crit.sort_by(|a, b| angle_cmp(*a, *b));
    crit.dedup();

    let fg = |d: (i64, i64)| -> Result<bool> { Ok(brown_rank1(&path.relator, &Character::new(vec![d.0, d.1]))?.fg_kernel) };
    let mut rays = Vec::new();
    for &d in &crit {
        rays.push(RayVerdict { dir: d, fg: fg(d)? });
    }
    let mut sectors = Vec::new();
    for i in 0..crit.len() {
        let (a, b) = (crit[i], crit[(i + 1) % crit.len()]);
        let rep = if a.0 * b.1 - a.1 * b.0 > 0 {
            primitive_dir(a.0 + b.0, a.1 + b.1)
        } else {
            // Sector of angle at least π: turn `a` a quarter counter-clockwise.
            (-a.1, a.0)
        };
        sectors.push(Sector { from: a, to: b, representative: rep, fg: fg(rep)? });
    }
    let mut exceptional_rays: Vec<(i64, i64)> =
        rays.iter().filter(|r| !r.fg).map(|r| canonical_sign(r.dir)).collect();
    exceptional_rays.sort();
    exceptional_rays.dedup();
    let exceptional_cones = sectors
        .iter()
        .filter(|s| !s.fg && canonical_sign(s.representative) == s.representative)
        .cloned()
        .collect();
    let hull = hull.into_iter().map(|p| HullVertex { point: p, visits: path.visits(p) }).collect();
    Ok(ConeReport { hull, rays, sectors, exceptional_rays, exceptional_cones, path })
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientResult {
    pub relator_index: usize,
    pub chi: Vec<i64>,
    pub fg_kernel_in_quotient: bool,
    pub walk: HeightWalk,
}

/// Runs Brown's test on the one-relator group `⟨a,b | rᵢ⟩`, which surjects
/// onto the presented group; a finitely generated kernel there maps onto
/// the kernel of χ downstairs.
pub fn brown_quotient(pres: &Presentation, relator_index: usize, chi: &Character) -> Result<QuotientResult> {
    if pres.rank() != 2 {
        return Err(Error::Unsupported(format!("{} generators", pres.rank())));
    }
    let r = pres
        .relators
        .get(relator_index)
        .ok_or_else(|| Error::BadRelator(format!("no relator {relator_index}")))?;
    chi.check(pres)?;
    let chi = chi.primitive();
    let res = brown_rank1(r, &chi)?;
    let both = (0..2).all(|g| res.walk.relator.occurrences(g) != (0, 0));
    Ok(QuotientResult {
        relator_index,
        chi: chi.values.clone(),
        fg_kernel_in_quotient: both && res.fg_kernel,
        walk: res.walk,
    })
}

/// A hyperbolic two-generator one-relator group is a once-punctured torus
/// bundle group exactly when β₁ = 1 and the walk spans three levels with a
/// unique top and bottom.
pub fn punctured_torus_bundle_test(pres: &Presentation) -> Result<bool> {
    if pres.rank() != 2 || pres.relators.len() != 1 {
        return Err(Error::Unsupported("needs two generators and one relator".into()));
    }
    let ab = abelianization(pres);
    if ab.betti != 1 {
        return Ok(false);
    }
    let chars = primitive_characters(&ab)?;
    let chi = chars.unique().expect("rank one");
    let walk = HeightWalk::new(&pres.relators[0], chi)?;
    // In standard form the top is a flat step, so "unique" is Brown's rule.
    Ok(walk.levels() == 3 && walk.fg_kernel())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutator_everything_fg() {
        let p = Presentation::from_strs("", "ab", &["abAB"]);
        let r = brown_rank2(&p.relators[0]).unwrap();
        assert_eq!(r.hull.len(), 4);
        assert!(r.exceptional_rays.is_empty() && r.exceptional_cones.is_empty());
        assert!(brown_rank1(&p.relators[0], &Character::new(vec![1, 1])).unwrap().fg_kernel);
    }

    #[test]
    fn rejects_non_characters() {
        let p = Presentation::from_strs("", "ab", &["aab"]);
        assert!(matches!(brown_rank1(&p.relators[0], &Character::new(vec![1, 0])), Err(Error::NotACharacter)));
        assert!(matches!(brown_rank2(&p.relators[0]), Err(Error::NotRank2)));
    }

    #[test]
    fn angle_order() {
        let mut v = vec![(0, -1), (-1, 0), (1, 1), (1, 0), (0, 1), (-1, -1)];
        v.sort_by(|a, b| angle_cmp(*a, *b));
        assert_eq!(v, vec![(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]);
    }
}
