use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::{cyclic_core, format_word, free_reduce, parse_word_at, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub id: usize,
    pub name: String,
}

/// User-supplied facts about the space the group came from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub three_manifold: bool,
    pub closed: bool,
    pub hyperbolic: bool,
    /// Exterior of a knot in the 3-sphere.
    pub knot: bool,
}

/// Meridian/longitude pair of a cusp.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cusp {
    pub meridian: Word,
    pub longitude: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub generators: Vec<Generator>,
    pub relators: Vec<Word>,
    pub cusps: Vec<Cusp>,
    pub flags: Flags,
}

impl Presentation {
    pub fn new(name: &str, gens: &[&str], relators: Vec<Word>) -> Presentation {
        Presentation {
            name: name.to_string(),
            generators: gens
                .iter()
                .enumerate()
                .map(|(id, n)| Generator { id, name: n.to_string() })
                .collect(),
            relators,
            cusps: Vec::new(),
            flags: Flags::default(),
        }
    }

    /// Builds a presentation from single-letter generator names and relators
    /// in the compact notation. Panics on malformed input; meant for literals.
    pub fn from_strs(name: &str, gens: &str, relators: &[&str]) -> Presentation {
        let names: Vec<String> = gens.chars().map(|c| c.to_string()).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let mut p = Presentation::new(name, &refs, Vec::new());
        for r in relators {
            let w = p.parse_word(r).unwrap_or_else(|e| panic!("bad relator {r}: {e}"));
            p.relators.push(w);
        }
        p
    }

    /// Generators named `a, b, …` when at most 26, `g0, g1, …` otherwise.
    pub fn with_rank(name: &str, rank: usize, relators: Vec<Word>) -> Presentation {
        let names = default_names(rank);
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        Presentation::new(name, &refs, relators)
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn gen_index(&self, name: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let names = self.names();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        crate::word::parse_word(text, &refs)
    }

    pub fn format_word(&self, w: &Word) -> String {
        format_word(w, &self.names())
    }

    /// Relator exponent sums, one row per relator.
    pub fn exponent_matrix(&self) -> Vec<Vec<i64>> {
        self.relators.iter().map(|r| r.exponent_vector(self.rank())).collect()
    }

    pub fn with_name(mut self, name: &str) -> Presentation {
        self.name = name.to_string();
        self
    }

    pub fn with_flags(mut self, flags: Flags) -> Presentation {
        self.flags = flags;
        self
    }
}

pub fn default_names(rank: usize) -> Vec<String> {
    if rank <= 26 {
        (0..rank).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (0..rank).map(|i| format!("g{i}")).collect()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "name: {}", self.name)?;
        writeln!(f, "gens: {}", self.names().join(" "))?;
        for r in &self.relators {
            writeln!(f, "rel: {}", self.format_word(r))?;
        }
        for c in &self.cusps {
            writeln!(
                f,
                "cusp: {} | {}",
                self.format_word(&c.meridian),
                self.format_word(&c.longitude)
            )?;
        }
        let mut tokens = Vec::new();
        if self.flags.three_manifold {
            tokens.push("3manifold");
        }
        if self.flags.closed {
            tokens.push("closed");
        }
        if self.flags.hyperbolic {
            tokens.push("hyperbolic");
        }
        if self.flags.knot {
            tokens.push("knot");
        }
        if !tokens.is_empty() {
            writeln!(f, "flags: {}", tokens.join(" "))?;
        }
        Ok(())
    }
}

/// One Tietze move. Every transformation in the crate is expressed through
/// these so that a log can be replayed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TietzeMove {
    /// Old generator `target` := `replacement`, a word over the new list in
    /// which id `target` denotes the fresh generator `fresh`.
    Substitute { target: usize, fresh: String, replacement: Word },
    /// Append a consequence of the relators.
    AddRelator(Word),
    /// Drop a redundant relator.
    RemoveRelator(usize),
    /// Solve relator `relator` for `gen` (which occurs exactly once there),
    /// substitute everywhere, then delete both.
    Eliminate { gen: usize, relator: usize },
    /// Cyclically reduce every relator and drop the empty ones.
    Reduce,
    /// Generator `i` of the result is old generator `perm[i]`.
    Reorder(Vec<usize>),
}

impl TietzeMove {
    pub fn apply(&self, pres: &Presentation) -> Result<Presentation> {
        match self {
            TietzeMove::Substitute { target, fresh, replacement } => {
                apply_substitute(pres, *target, fresh, replacement)
            }
            TietzeMove::AddRelator(w) => {
                check_alphabet(pres, w)?;
                let mut out = pres.clone();
                out.relators.push(free_reduce(w));
                Ok(out)
            }
            TietzeMove::RemoveRelator(i) => {
                if *i >= pres.relators.len() {
                    return Err(Error::BadRelator(format!("no relator {i}")));
                }
                let mut out = pres.clone();
                out.relators.remove(*i);
                Ok(out)
            }
            TietzeMove::Eliminate { gen, relator } => apply_eliminate(pres, *gen, *relator),
            TietzeMove::Reduce => {
                let mut out = pres.clone();
                out.relators = pres
                    .relators
                    .iter()
                    .map(cyclic_core)
                    .filter(|w| !w.is_empty())
                    .collect();
                Ok(out)
            }
            TietzeMove::Reorder(perm) => {
                let n = pres.rank();
                let mut seen = vec![false; n];
                if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
                    return Err(Error::BadBasis);
                }
                let mut inv = vec![0; n];
                for (i, &p) in perm.iter().enumerate() {
                    inv[p] = i;
                }
                let mut out = pres.clone();
                out.generators = perm
                    .iter()
                    .enumerate()
                    .map(|(id, &p)| Generator { id, name: pres.generators[p].name.clone() })
                    .collect();
                let map = |w: &Word| w.map_gens(|g| inv[g]);
                out.relators = pres.relators.iter().map(|w| free_reduce(&map(w))).collect();
                out.cusps = pres
                    .cusps
                    .iter()
                    .map(|c| Cusp {
                        meridian: free_reduce(&map(&c.meridian)),
                        longitude: free_reduce(&map(&c.longitude)),
                    })
                    .collect();
                Ok(out)
            }
        }
    }
}

fn check_alphabet(pres: &Presentation, w: &Word) -> Result<()> {
    match w.max_gen() {
        Some(g) if g >= pres.rank() => Err(Error::UnknownGenerator(format!("g{g}"))),
        _ => Ok(()),
    }
}

fn apply_substitute(
    pres: &Presentation,
    target: usize,
    fresh: &str,
    replacement: &Word,
) -> Result<Presentation> {
    if target >= pres.rank() {
        return Err(Error::UnknownGenerator(format!("g{target}")));
    }
    check_alphabet(pres, replacement)?;
    let (p, n) = replacement.occurrences(target);
    if p + n != 1 {
        return Err(Error::BadSubstitution);
    }
    if pres.generators.iter().any(|g| g.id != target && g.name == fresh) {
        return Err(Error::DuplicateGenerator(fresh.to_string()));
    }
    let image = |g: usize| {
        if g == target {
            replacement.clone()
        } else {
            Word::letter(Letter::pos(g))
        }
    };
    let mut out = pres.clone();
    out.generators[target].name = fresh.to_string();
    out.relators = pres.relators.iter().map(|w| w.substitute(image)).collect();
    out.cusps = pres
        .cusps
        .iter()
        .map(|c| Cusp {
            meridian: c.meridian.substitute(image),
            longitude: c.longitude.substitute(image),
        })
        .collect();
    Ok(out)
}

/// Expression for `gen` read off a relator in which it occurs once.
pub(crate) fn solve_for(relator: &Word, gen: usize) -> Option<Word> {
    let letters = relator.letters();
    let idx = letters.iter().position(|l| l.gen() == gen)?;
    if letters[idx + 1..].iter().any(|l| l.gen() == gen) {
        return None;
    }
    let u = Word::new(letters[..idx].to_vec());
    let v = Word::new(letters[idx + 1..].to_vec());
    // u g v = 1 gives g = u⁻¹v⁻¹; u G v = 1 gives g = v u.
    Some(if letters[idx].is_inverse() {
        v.mul(&u)
    } else {
        u.inverse().mul(&v.inverse())
    })
}

fn apply_eliminate(pres: &Presentation, gen: usize, relator: usize) -> Result<Presentation> {
    let r = pres
        .relators
        .get(relator)
        .ok_or_else(|| Error::BadRelator(format!("no relator {relator}")))?;
    let expr = solve_for(r, gen)
        .ok_or_else(|| Error::BadRelator(format!("generator {gen} does not occur exactly once")))?;
    let shift = |g: usize| if g > gen { g - 1 } else { g };
    let image = |g: usize| {
        if g == gen {
            expr.map_gens(shift)
        } else {
            Word::letter(Letter::pos(shift(g)))
        }
    };
    let mut out = pres.clone();
    out.generators.remove(gen);
    for (id, g) in out.generators.iter_mut().enumerate() {
        g.id = id;
    }
    out.relators = pres
        .relators
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != relator)
        .map(|(_, w)| w.substitute(image))
        .collect();
    out.cusps = pres
        .cusps
        .iter()
        .map(|c| Cusp {
            meridian: c.meridian.substitute(image),
            longitude: c.longitude.substitute(image),
        })
        .collect();
    Ok(out)
}

/// Ordered record of moves; replaying it on the source yields the target.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TietzeLog {
    pub moves: Vec<TietzeMove>,
}

impl TietzeLog {
    pub fn new() -> TietzeLog {
        TietzeLog::default()
    }

    pub fn replay(&self, source: &Presentation) -> Result<Presentation> {
        let mut p = source.clone();
        for m in &self.moves {
            p = m.apply(&p)?;
        }
        Ok(p)
    }

    /// Applies `m` to `pres` and records it.
    pub fn push(&mut self, pres: &Presentation, m: TietzeMove) -> Result<Presentation> {
        let out = m.apply(pres)?;
        self.moves.push(m);
        Ok(out)
    }

    pub fn extend(&mut self, other: TietzeLog) {
        self.moves.extend(other.moves);
    }
}

/// Replace `target` by `replacement` everywhere; see [`TietzeMove::Substitute`].
pub fn substitute(
    pres: &Presentation,
    target: usize,
    fresh: &str,
    replacement: &Word,
) -> Result<(Presentation, TietzeLog)> {
    let mut log = TietzeLog::new();
    let out = log.push(
        pres,
        TietzeMove::Substitute { target, fresh: fresh.to_string(), replacement: replacement.clone() },
    )?;
    Ok((out, log))
}

/// String form of [`substitute`]: `substitute_str(p, "a", "y", "yB2")`.
pub fn substitute_str(
    pres: &Presentation,
    target: &str,
    fresh: &str,
    replacement: &str,
) -> Result<(Presentation, TietzeLog)> {
    let t = pres.gen_index(target)?;
    let mut names = pres.names();
    names[t] = fresh.to_string();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let w = crate::word::parse_word(replacement, &refs)?;
    substitute(pres, t, fresh, &w)
}

/// Parses every block of a presentation file, isolating errors per block.
/// Each entry carries the 1-based line where its block starts.
pub fn parse_blocks(text: &str) -> Vec<(usize, Result<Presentation>)> {
    let mut blocks: Vec<(usize, Vec<(usize, &str)>)> = Vec::new();
    let mut current: Vec<(usize, &str)> = Vec::new();
    let mut start = 0;
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            if !current.is_empty() {
                blocks.push((start, std::mem::take(&mut current)));
            }
            continue;
        }
        if current.is_empty() {
            start = i + 1;
        }
        current.push((i + 1, line));
    }
    if !current.is_empty() {
        blocks.push((start, current));
    }
    blocks
        .into_iter()
        .filter(|(_, lines)| lines.iter().any(|(_, l)| !strip_comment(l).trim().is_empty()))
        .map(|(start, lines)| (start, parse_block(&lines)))
        .collect()
}

/// Parses a file that must contain exactly one presentation.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut blocks = parse_blocks(text);
    match blocks.len() {
        1 => blocks.pop().unwrap().1,
        0 => Err(Error::Syntax { line: 1, col: 1, msg: "no presentation found".into() }),
        _ => Err(Error::Syntax {
            line: blocks[1].0,
            col: 1,
            msg: "expected a single presentation".into(),
        }),
    }
}

/// Parses all blocks, failing on the first bad one.
pub fn parse_presentations(text: &str) -> Result<Vec<Presentation>> {
    parse_blocks(text).into_iter().map(|(_, r)| r).collect()
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_block(lines: &[(usize, &str)]) -> Result<Presentation> {
    let syntax = |line: usize, col: usize, msg: String| Error::Syntax { line, col, msg };
    let mut name: Option<String> = None;
    let mut gens: Option<(usize, Vec<String>)> = None;
    let mut rels: Vec<(usize, usize, &str)> = Vec::new();
    let mut cusps: Vec<(usize, usize, &str)> = Vec::new();
    let mut flags = Flags::default();
    for &(ln, raw) in lines {
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let colon = line
            .find(':')
            .ok_or_else(|| syntax(ln, 1, "expected `key: value`".into()))?;
        let key = line[..colon].trim();
        let value = &line[colon + 1..];
        let vcol = colon + 2;
        match key {
            "name" => name = Some(value.trim().to_string()),
            "gens" => {
                let mut list: Vec<String> = Vec::new();
                for tok in value.split_whitespace() {
                    let col = value.find(tok).unwrap_or(0) + vcol;
                    let mut chars = tok.chars();
                    let c = chars.next().unwrap();
                    if chars.next().is_some() || !c.is_ascii_lowercase() {
                        return Err(syntax(ln, col, format!("generator `{tok}` must be one lowercase letter")));
                    }
                    if list.iter().any(|g| g == tok) {
                        return Err(Error::DuplicateGenerator(tok.to_string()));
                    }
                    list.push(tok.to_string());
                }
                gens = Some((ln, list));
            }
            "rel" => rels.push((ln, vcol, value)),
            "cusp" => cusps.push((ln, vcol, value)),
            "flags" => {
                for tok in value.split_whitespace() {
                    match tok {
                        "3manifold" => flags.three_manifold = true,
                        "closed" => flags.closed = true,
                        "hyperbolic" => flags.hyperbolic = true,
                        "knot" => flags.knot = true,
                        _ => {
                            let col = value.find(tok).unwrap_or(0) + vcol;
                            return Err(syntax(ln, col, format!("unknown flag `{tok}`")));
                        }
                    }
                }
            }
            _ => return Err(syntax(ln, 1, format!("unknown key `{key}`"))),
        }
    }
    let (_, names) = gens.ok_or_else(|| syntax(lines[0].0, 1, "missing `gens:` line".into()))?;
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let word = |ln: usize, col: usize, text: &str| {
        parse_word_at(text, &refs).map_err(|(e, off)| match e {
            Error::UnknownGenerator(g) => syntax(ln, col + off, format!("unknown generator `{g}`")),
            Error::BadCount(c) => syntax(ln, col + off, format!("bad repetition count `{c}`")),
            other => other,
        })
    };
    let mut pres = Presentation::new(name.as_deref().unwrap_or("unnamed"), &refs, Vec::new());
    pres.flags = flags;
    for (ln, col, text) in rels {
        pres.relators.push(word(ln, col, text)?);
    }
    for (ln, col, text) in cusps {
        let bar = text
            .find('|')
            .ok_or_else(|| syntax(ln, col, "cusp needs `meridian | longitude`".into()))?;
        pres.cusps.push(Cusp {
            meridian: word(ln, col, &text[..bar])?,
            longitude: word(ln, col + bar + 1, &text[bar + 1..])?,
        });
    }
    Ok(pres)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_v3396_block() {
        let text = "name: v3396\ngens: a b c\nrel: aBca2bC\nrel: a2cba2CAB\nflags: 3manifold hyperbolic  # census\n";
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.rank(), 3);
        assert_eq!(p.relators.len(), 2);
        assert!(p.flags.three_manifold && p.flags.hyperbolic && !p.flags.closed);
        assert_eq!(parse_presentation(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn cusp_line() {
        let p = parse_presentation("name: v1539\ngens: a b\nrel: a4B2Ab3AB2Ab3AB2\ncusp: Ab | B3a5B2\n").unwrap();
        assert_eq!(p.cusps.len(), 1);
        assert_eq!(p.format_word(&p.cusps[0].meridian), "Ab");
        assert_eq!(p.format_word(&p.cusps[0].longitude), "B3a5B2");
    }

    #[test]
    fn free_group_block() {
        let p = parse_presentation("gens: a b\n").unwrap();
        assert!(p.relators.is_empty());
    }

    #[test]
    fn syntax_positions() {
        let err = parse_presentation("name: x\ngens: a b\nrel: abq\n").unwrap_err();
        assert_eq!(err, Error::Syntax { line: 3, col: 8, msg: "unknown generator `q`".into() });
        assert_eq!(
            parse_presentation("gens: a a\n").unwrap_err(),
            Error::DuplicateGenerator("a".into())
        );
        assert!(matches!(parse_presentation("gens: a\ncusp: b | a\n"), Err(Error::Syntax { line: 2, .. })));
    }

    #[test]
    fn blocks_isolate_errors() {
        let text = "gens: a\nrel: a2\n\ngens: a\nrel: x\n\n# only a comment\n\ngens: a b\n";
        let blocks = parse_blocks(text);
        assert_eq!(blocks.len(), 3);
        assert!(blocks[0].1.is_ok() && blocks[1].1.is_err() && blocks[2].1.is_ok());
        assert_eq!(blocks[1].0, 4);
    }

    #[test]
    fn substitution_v3384() {
        let p = Presentation::from_strs("v3384", "abc", &["ab2ab2aCb2ab2abcb", "aCAc"]);
        let (q, log) = substitute_str(&p, "a", "y", "yB2").unwrap();
        assert_eq!(q.format_word(&q.relators[0]), "y3B2Cb2y2Bcb");
        assert_eq!(q.format_word(&q.relators[1]), "yB2Cb2Yc");
        assert_eq!(log.replay(&p).unwrap(), q);
        assert_eq!(
            substitute_str(&p, "a", "y", "bc").unwrap_err(),
            Error::BadSubstitution
        );
    }

    #[test]
    fn rename_and_eliminate() {
        let p = Presentation::from_strs("", "ab", &["ab"]);
        let (q, _) = substitute_str(&p, "a", "x", "x").unwrap();
        assert_eq!(q.names(), vec!["x", "b"]);
        assert_eq!(q.format_word(&q.relators[0]), "xb");
        let r = TietzeMove::Eliminate { gen: 1, relator: 0 }.apply(&p).unwrap();
        assert_eq!(r.rank(), 1);
        assert!(r.relators.is_empty());
    }
}
