//! The printed examples, bundled so tests and the CLI share one copy.

use crate::abelian::AbelianStructure;
use crate::cosets::SubgroupPresentation;
use crate::presentation::{parse_presentations, Presentation};
use crate::word::Word;

pub const SUITE: &str = include_str!("../data/suite.txt");

pub fn suite() -> Vec<Presentation> {
    parse_presentations(SUITE).expect("bundled suite parses")
}

pub fn get(name: &str) -> Option<Presentation> {
    suite().into_iter().find(|p| p.name == name)
}

/// A cyclic cover given by the images of its generators in a base group
/// that is in standard form with respect to `base_t`.
#[derive(Clone, Debug)]
pub struct CoverData {
    pub name: &'static str,
    pub base_gens: &'static str,
    pub base_t: usize,
    pub degree: usize,
    pub cover_gens: &'static str,
    /// Images of the cover generators, `t` last.
    pub inclusion: &'static [&'static str],
    /// Fibre basis between `T` and `t`, when no relators are available.
    pub fibre_words: &'static [&'static str],
}

pub const S594: CoverData = CoverData {
    name: "s594",
    base_gens: "acx",
    base_t: 0,
    degree: 2,
    cover_gens: "pqrt",
    inclusion: &["x", "c", "axA", "a2"],
    fibre_words: &[],
};

pub const V3093: CoverData = CoverData {
    name: "v3093",
    base_gens: "bxy",
    base_t: 0,
    degree: 5,
    cover_gens: "pqrst",
    inclusion: &["x", "y", "Bxb", "Byb", "b5"],
    fibre_words: &[],
};

/// The fifth word as printed does not give a basis; see
/// [`V2869_CORRECTED_WORD`].
pub const V2869: CoverData = CoverData {
    name: "v2869",
    base_gens: "xyz",
    base_t: 0,
    degree: 6,
    cover_gens: "abcdeft",
    inclusion: &["y", "z", "xyX", "Xzx", "x2yX2", "x2zX2", "x6"],
    fibre_words: &[
        "F2eBdBaceBabf",
        "Fef",
        "FBabFeBAbEceBabf",
        "F2eBdBaeBadBaCAbDbEf2",
        "F2eBdBacAbDbEFfEbdBabFeBAbEcef",
        "F2eBdBacAbDbf",
    ],
};

/// The fifth v2869 word with its `b` after `FfE` inverted.
pub const V2869_CORRECTED_WORD: &str = "F2eBdBacAbDbEFfEBdBabFeBAbEcef";

pub const V3541: CoverData = CoverData {
    name: "v3541",
    base_gens: "xyz",
    base_t: 2,
    degree: 12,
    cover_gens: "abcdefghijt",
    inclusion: &["x", "y", "zxZ", "zyZ", "Zxz", "Zyz", "z2xZ2", "Z2yz2", "Z3yz3", "Z4yz4", "z12"],
    fibre_words: &["WJ", "jwJ", "jwfBAweJiCIjaI", "jI", "jEWaJ", "iAJicI", "jbDIjEWabFeWJ", "iH", "hFEfBAweJidBAweJ", "hCIhgFEfBAweJidFWJ"],
};

/// The abbreviation used in the v3541 fibre words.
pub const V3541_W: &str = "bDCIjaIhGHicH";

impl CoverData {
    pub fn base(&self) -> Presentation {
        Presentation::from_strs(self.name, self.base_gens, &[])
    }

    /// Homology of the base: only `base_t` survives rationally.
    pub fn base_abelianization(&self) -> AbelianStructure {
        let mut chi = vec![0i64; self.base_gens.len()];
        chi[self.base_t] = 1;
        AbelianStructure::rank_one(&chi).expect("unit character")
    }

    /// The bundled cover presentation, or a relator-free one when the
    /// relators were not printed.
    pub fn cover(&self) -> Presentation {
        suite()
            .into_iter()
            .find(|p| p.name.starts_with(self.name) && p.name.contains("cover"))
            .unwrap_or_else(|| Presentation::from_strs(&format!("{}_cover{}", self.name, self.degree), self.cover_gens, &[]))
    }

    pub fn subgroup(&self) -> SubgroupPresentation {
        let base = self.base();
        let words: Vec<Word> = self.inclusion.iter().map(|w| base.parse_word(w).expect("inclusion word")).collect();
        let names: Vec<String> = self.base_gens.chars().map(String::from).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        SubgroupPresentation::with_inclusion(self.cover(), &refs, words)
    }

    /// Printed fibre words over the cover generators other than `t`.
    pub fn fibre_basis(&self) -> Vec<Word> {
        let fibre: String = self.cover_gens.chars().filter(|&c| c != 't').collect();
        let p = Presentation::from_strs("", &fibre, &[]);
        let (w, w_inv) = if self.name == "v3541" {
            let w = p.parse_word(V3541_W).expect("w parses");
            (V3541_W.to_string(), p.format_word(&w.inverse()))
        } else {
            (String::new(), String::new())
        };
        self.fibre_words
            .iter()
            .map(|s| {
                let expanded: String = s
                    .chars()
                    .map(|c| match c {
                        'w' if !w.is_empty() => w.clone(),
                        'W' if !w.is_empty() => w_inv.clone(),
                        c => c.to_string(),
                    })
                    .collect();
                p.parse_word(&expanded).expect("fibre word parses")
            })
            .collect()
    }

    /// Indices of the fibre generators in the cover.
    pub fn fibre_gens(&self) -> Vec<usize> {
        (0..self.cover_gens.len() - 1).collect()
    }
}
