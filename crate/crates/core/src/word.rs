use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

/// A generator or its inverse, packed as `±(gen + 1)`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(i32);

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Letter {
        let v = gen as i32 + 1;
        Letter(if inverse { -v } else { v })
    }

    pub fn pos(gen: usize) -> Letter {
        Letter::new(gen, false)
    }

    pub fn neg(gen: usize) -> Letter {
        Letter::new(gen, true)
    }

    pub fn gen(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    /// +1 or -1.
    pub fn sign(self) -> i64 {
        if self.0 < 0 {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// Column index in coset tables and folded graphs: `2*gen` for the
    /// generator, `2*gen + 1` for its inverse.
    pub fn col(self) -> usize {
        2 * self.gen() + self.is_inverse() as usize
    }

    pub fn from_col(col: usize) -> Letter {
        Letter::new(col / 2, col % 2 == 1)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "g{}^-1", self.gen())
        } else {
            write!(f, "g{}", self.gen())
        }
    }
}

/// A word in a free group. Equality, ordering and hashing look only at the
/// letters; the flags are cached facts about them.
#[derive(Clone, Default)]
pub struct Word {
    letters: Vec<Letter>,
    reduced: bool,
    cyclic: bool,
}

impl PartialEq for Word {
    fn eq(&self, other: &Word) -> bool {
        self.letters == other.letters
    }
}

impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.letters.hash(state)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Word) -> Ordering {
        self.letters.cmp(&other.letters)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.letters).finish()
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Word {
        Word::new(letters)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Word {
        Word::new(iter.into_iter().collect())
    }
}

impl Word {
    /// Raw word; no reduction is performed.
    pub fn new(letters: Vec<Letter>) -> Word {
        Word { letters, reduced: false, cyclic: false }
    }

    pub fn empty() -> Word {
        Word { letters: Vec::new(), reduced: true, cyclic: true }
    }

    pub fn letter(l: Letter) -> Word {
        Word { letters: vec![l], reduced: true, cyclic: true }
    }

    /// `g^k` for any integer `k`.
    pub fn power_of(gen: usize, k: i64) -> Word {
        let l = Letter::new(gen, k < 0);
        Word {
            letters: vec![l; k.unsigned_abs() as usize],
            reduced: true,
            cyclic: true,
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// True when the reduced flag is set (not recomputed).
    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.cyclic
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
            reduced: self.reduced,
            cyclic: self.cyclic,
        }
    }

    /// Concatenation without reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word::new(letters)
    }

    /// Freely reduced product.
    pub fn mul(&self, other: &Word) -> Word {
        free_reduce(&self.concat(other))
    }

    /// `self^k`, freely reduced; negative `k` uses the inverse.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        free_reduce(&Word::new(letters))
    }

    /// Cyclic rotation by `k` letters to the left.
    pub fn rotate(&self, k: usize) -> Word {
        if self.letters.is_empty() {
            return self.clone();
        }
        let k = k % self.letters.len();
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        Word { letters, reduced: self.cyclic, cyclic: self.cyclic }
    }

    /// Number of letters on generator `gen`, as (positive, negative).
    pub fn occurrences(&self, gen: usize) -> (usize, usize) {
        let mut pos = 0;
        let mut neg = 0;
        for l in &self.letters {
            if l.gen() == gen {
                if l.is_inverse() {
                    neg += 1
                } else {
                    pos += 1
                }
            }
        }
        (pos, neg)
    }

    pub fn max_gen(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.gen()).max()
    }

    /// Replaces every letter by the image of its generator (inverted for
    /// inverse letters), then freely reduces.
    pub fn substitute(&self, image: impl Fn(usize) -> Word) -> Word {
        let mut letters = Vec::new();
        for l in &self.letters {
            let w = image(l.gen());
            if l.is_inverse() {
                letters.extend(w.letters.iter().rev().map(|x| x.inverse()));
            } else {
                letters.extend_from_slice(&w.letters);
            }
        }
        free_reduce(&Word::new(letters))
    }

    /// Renames generator ids through `f`. The result carries no reduction
    /// flags.
    pub fn map_gens(&self, f: impl Fn(usize) -> usize) -> Word {
        Word::new(
            self.letters
                .iter()
                .map(|l| Letter::new(f(l.gen()), l.is_inverse()))
                .collect(),
        )
    }

    pub fn exponent_vector(&self, ngens: usize) -> Vec<i64> {
        exponent_vector(self, ngens)
    }
}

/// Free reduction by a single stack pass.
pub fn free_reduce(word: &Word) -> Word {
    if word.reduced {
        return word.clone();
    }
    let mut out: Vec<Letter> = Vec::with_capacity(word.letters.len());
    for &l in &word.letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    let cyclic = out.len() < 2 || out[0] != out[out.len() - 1].inverse();
    Word { letters: out, reduced: true, cyclic }
}

/// Peels matching first/last pairs off a freely reduced word. Returns
/// `(w', c)` with `word = c·w'·c⁻¹`; `c` lists the peeled letters outermost
/// first.
pub fn cyclic_reduce(word: &Word) -> (Word, Word) {
    let w = free_reduce(word);
    let letters = &w.letters;
    let mut i = 0;
    let mut j = letters.len();
    while j >= i + 2 && letters[i] == letters[j - 1].inverse() {
        i += 1;
        j -= 1;
    }
    let core = Word { letters: letters[i..j].to_vec(), reduced: true, cyclic: true };
    let conj = Word { letters: letters[..i].to_vec(), reduced: true, cyclic: false };
    (core, conj)
}

/// Cyclically reduced form of any word (conjugator dropped).
pub fn cyclic_core(word: &Word) -> Word {
    cyclic_reduce(word).0
}

pub fn exponent_vector(word: &Word, ngens: usize) -> Vec<i64> {
    let mut v = vec![0i64; ngens];
    for l in &word.letters {
        v[l.gen()] += l.sign();
    }
    v
}

/// Parses the compact letter notation (`a4B2Ab3`, `a^4 B^2`) against a list
/// of single-letter generator names.
pub fn parse_word(text: &str, alphabet: &[&str]) -> Result<Word> {
    parse_word_at(text, alphabet).map_err(|(e, _)| e)
}

/// As [`parse_word`], but errors carry the byte offset of the offending
/// character.
pub(crate) fn parse_word_at(
    text: &str,
    alphabet: &[&str],
) -> std::result::Result<Word, (Error, usize)> {
    let lookup = |c: char| -> Option<usize> {
        let lower = c.to_ascii_lowercase();
        alphabet.iter().position(|name| {
            let mut chars = name.chars();
            chars.next() == Some(lower) && chars.next().is_none()
        })
    };
    let mut letters = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if !c.is_ascii_alphabetic() {
            return Err((Error::UnknownGenerator(c.to_string()), pos));
        }
        let gen = lookup(c).ok_or((Error::UnknownGenerator(c.to_string()), pos))?;
        let letter = Letter::new(gen, c.is_ascii_uppercase());
        i += 1;
        let mut caret = false;
        if i < chars.len() && chars[i].1 == '^' {
            caret = true;
            i += 1;
        }
        let start = i;
        while i < chars.len() && chars[i].1.is_ascii_digit() {
            i += 1;
        }
        let count = if start == i {
            if caret {
                let at = chars.get(i).map_or(text.len(), |c| c.0);
                let shown: String = chars[start..].iter().take_while(|c| !c.1.is_whitespace()).map(|c| c.1).collect();
                return Err((Error::BadCount(shown), at));
            }
            1
        } else {
            let digits: String = chars[start..i].iter().map(|c| c.1).collect();
            match digits.parse::<usize>() {
                Ok(0) | Err(_) => return Err((Error::BadCount(digits), chars[start].0)),
                Ok(k) => k,
            }
        };
        letters.extend(std::iter::repeat_n(letter, count));
    }
    Ok(Word::new(letters))
}

/// Prints in the compact notation, runs of length ≥ 2 as `a4`. Names longer
/// than one character print as `g3^2` / `G3^2` tokens separated by spaces.
pub fn format_word(word: &Word, names: &[String]) -> String {
    let single = names.iter().all(|n| n.chars().count() == 1);
    let mut out = String::new();
    let letters = word.letters();
    let mut i = 0;
    while i < letters.len() {
        let l = letters[i];
        let mut run = 1;
        while i + run < letters.len() && letters[i + run] == l {
            run += 1;
        }
        let name = names.get(l.gen()).cloned().unwrap_or_else(|| format!("g{}", l.gen()));
        let glyph = if l.is_inverse() { upper_first(&name) } else { name };
        if single {
            out.push_str(&glyph);
            if run > 1 {
                out.push_str(&run.to_string());
            }
        } else {
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(&glyph);
            if run > 1 {
                out.push('^');
                out.push_str(&run.to_string());
            }
        }
        i += run;
    }
    out
}

fn upper_first(name: &str) -> String {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}
