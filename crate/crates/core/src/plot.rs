use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::abelian::{abelianization, primitive_characters, Character};
use crate::brown::{HeightWalk, LatticePath};
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::word::{cyclic_core, exponent_vector};

/// Pixels per lattice unit.
pub const UNIT: i64 = 20;
const MARGIN: i64 = 20;

fn header(w: i64, h: i64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n"
    )
}

fn polyline(pts: &[(i64, i64)], style: &str) -> String {
    let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x},{y}")).collect();
    format!("<polyline points=\"{}\" fill=\"none\" {style}/>\n", coords.join(" "))
}

/// Height profile: one letter per horizontal unit, extremes dotted.
pub fn walk_svg(walk: &HeightWalk) -> String {
    let (top, bottom) = (walk.max(), walk.min());
    let n = walk.heights.len() as i64 - 1;
    let w = n * UNIT + 2 * MARGIN;
    let h = (top - bottom) * UNIT + 2 * MARGIN;
    let at = |i: usize, y: i64| (MARGIN + i as i64 * UNIT, MARGIN + (top - y) * UNIT);
    let mut s = header(w, h);
    for level in [top, bottom] {
        let y = at(0, level).1;
        let _ = writeln!(
            s,
            "<line x1=\"{MARGIN}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"gray\" stroke-dasharray=\"3,3\"/>",
            w - MARGIN
        );
    }
    let pts: Vec<(i64, i64)> = walk.heights.iter().enumerate().map(|(i, &y)| at(i, y)).collect();
    s.push_str(&polyline(&pts, "stroke=\"black\" stroke-width=\"2\""));
    for (i, &y) in walk.heights.iter().enumerate() {
        let (px, py) = at(i, y);
        let fill = if y == top || y == bottom { "red" } else { "black" };
        let _ = writeln!(s, "<circle cx=\"{px}\" cy=\"{py}\" r=\"3\" fill=\"{fill}\"/>");
    }
    s.push_str("</svg>\n");
    s
}

/// The relator drawn in the plane with its convex hull; each hull vertex
/// carries its visit count.
pub fn path_svg(path: &LatticePath) -> String {
    let xs = path.points.iter().map(|p| p.0);
    let ys = path.points.iter().map(|p| p.1);
    let (x0, x1) = (xs.clone().min().unwrap(), xs.max().unwrap());
    let (y0, y1) = (ys.clone().min().unwrap(), ys.max().unwrap());
    let w = (x1 - x0) * UNIT + 2 * MARGIN;
    let h = (y1 - y0) * UNIT + 2 * MARGIN;
    let at = |(x, y): (i64, i64)| (MARGIN + (x - x0) * UNIT, MARGIN + (y1 - y) * UNIT);
    let mut s = header(w, h);
    for x in x0..=x1 {
        let px = at((x, 0)).0;
        let _ = writeln!(s, "<line x1=\"{px}\" y1=\"{MARGIN}\" x2=\"{px}\" y2=\"{}\" stroke=\"#ddd\"/>", h - MARGIN);
    }
    for y in y0..=y1 {
        let py = at((0, y)).1;
        let _ = writeln!(s, "<line x1=\"{MARGIN}\" y1=\"{py}\" x2=\"{}\" y2=\"{py}\" stroke=\"#ddd\"/>", w - MARGIN);
    }
    let hull = path.hull();
    let mut ring: Vec<(i64, i64)> = hull.iter().map(|&p| at(p)).collect();
    ring.push(ring[0]);
    s.push_str(&polyline(&ring, "stroke=\"blue\" stroke-dasharray=\"4,3\""));
    let pts: Vec<(i64, i64)> = path.points.iter().map(|&p| at(p)).collect();
    s.push_str(&polyline(&pts, "stroke=\"black\" stroke-width=\"2\""));
    for &v in &hull {
        let (px, py) = at(v);
        let k = path.visits(v);
        let fill = if k == 1 { "red" } else { "white" };
        let _ = writeln!(s, "<circle cx=\"{px}\" cy=\"{py}\" r=\"7\" fill=\"{fill}\" stroke=\"black\"/>");
        let _ = writeln!(
            s,
            "<text x=\"{px}\" y=\"{}\" font-size=\"10\" text-anchor=\"middle\">{k}</text>",
            py + 3
        );
    }
    s.push_str("</svg>\n");
    s
}

/// One SVG per relator that can be drawn: a plane path when the relator has
/// zero exponent sums in two generators, otherwise a height walk.
pub fn plots(pres: &Presentation) -> Result<Vec<(String, String)>> {
    let ab = abelianization(pres);
    let global: Option<Character> =
        if ab.betti == 1 { primitive_characters(&ab).ok().map(|c| c.basis[0].clone()) } else { None };
    let mut out = Vec::new();
    for (i, r) in pres.relators.iter().enumerate() {
        let core = cyclic_core(r);
        if core.is_empty() {
            continue;
        }
        let exps = exponent_vector(&core, pres.rank());
        let stem = format!("{}_r{i}", sanitize(&pres.name));
        if pres.rank() == 2 && exps.iter().all(|e| *e == 0) {
            if let Ok(path) = LatticePath::new(&core) {
                out.push((format!("{stem}_path.svg"), path_svg(&path)));
            }
            continue;
        }
        // With two generators the relator on its own has a unique character.
        let chi = global.clone().or_else(|| {
            (pres.rank() == 2).then(|| {
                let g = num_integer::Integer::gcd(&exps[0], &exps[1]);
                Character::new(vec![exps[1] / g, -exps[0] / g])
            })
        });
        if let Some(walk) = chi.and_then(|c| HeightWalk::new(&core, &c).ok()) {
            out.push((format!("{stem}_walk.svg"), walk_svg(&walk)));
        }
    }
    if out.is_empty() {
        return Err(Error::Unsupported("no relator has a one- or two-variable picture".into()));
    }
    Ok(out)
}

fn sanitize(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect()
}

/// Writes the SVGs from [`plots`] into `dir`.
pub fn emit_plot(pres: &Presentation, dir: &Path) -> Result<Vec<PathBuf>> {
    let io = |e: std::io::Error| Error::Io(e.to_string());
    let files = plots(pres)?;
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut written = Vec::new();
    for (name, svg) in files {
        let path = dir.join(name);
        std::fs::write(&path, svg).map_err(io)?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_relator_is_unsupported() {
        let p = Presentation::from_strs("e", "ab", &["aA"]);
        assert!(matches!(plots(&p), Err(Error::Unsupported(_))));
    }

    #[test]
    fn commutator_square() {
        let p = Presentation::from_strs("c", "ab", &["abAB"]);
        let files = plots(&p).unwrap();
        assert_eq!(files[0].0, "c_r0_path.svg");
        // Four hull vertices, each visited once.
        assert_eq!(files[0].1.matches(">1</text>").count(), 4);
        assert_eq!(files[0].1, plots(&p).unwrap()[0].1);
    }
}
