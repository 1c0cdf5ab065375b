use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{smith_normal_form, Matrix};
use crate::presentation::{Presentation, TietzeLog, TietzeMove};
use crate::word::{cyclic_core, Letter, Word};
use crate::IntMatrix;

/// Abelianization `Z^b ⊕ Z/d₁ ⊕ … ⊕ Z/d_k` of a presentation, with the image
/// of every generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianStructure {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
    /// Per generator: `betti` free coordinates followed by one coordinate per
    /// torsion factor (reduced into `0..d`).
    pub gen_images: Vec<Vec<BigInt>>,
    /// Row `i` is an exponent vector over the generators whose image is the
    /// `i`-th free basis vector.
    pub free_section: Vec<Vec<BigInt>>,
    /// When some set of generators maps onto a basis of the free part, those
    /// generators, in order; the free coordinates are then chosen so that
    /// they map to the unit vectors.
    pub generator_basis: Option<Vec<usize>>,
    /// Names for the free coordinates (Laurent variables).
    pub var_names: Vec<String>,
}

impl AbelianStructure {
    pub fn ngens(&self) -> usize {
        self.gen_images.len()
    }

    /// Free part of a generator's image.
    pub fn free_image_of_gen(&self, g: usize) -> &[BigInt] {
        &self.gen_images[g][..self.betti]
    }

    /// Free part of a word's image.
    pub fn free_image(&self, w: &Word) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.betti];
        for l in w.letters() {
            for (acc, x) in v.iter_mut().zip(self.free_image_of_gen(l.gen())) {
                if l.is_inverse() {
                    *acc -= x;
                } else {
                    *acc += x;
                }
            }
        }
        v
    }

    /// Same as [`free_image`](Self::free_image) from an exponent vector.
    pub fn free_image_of_exponents(&self, e: &[i64]) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.betti];
        for (g, &k) in e.iter().enumerate() {
            if k == 0 {
                continue;
            }
            for (acc, x) in v.iter_mut().zip(self.free_image_of_gen(g)) {
                *acc += x * k;
            }
        }
        v
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |a, b| a * b)
    }

    /// The `n × betti` matrix of free images.
    pub fn free_matrix(&self) -> IntMatrix {
        Matrix::from_rows(
            self.betti,
            (0..self.ngens()).map(|g| self.free_image_of_gen(g).to_vec()).collect(),
        )
    }

    /// A rank-one structure whose free coordinate is the given character
    /// (values per generator, gcd 1); torsion is not recorded. Used when only
    /// the character of a presentation is known, not its relators.
    pub fn rank_one(values: &[i64]) -> Result<AbelianStructure> {
        let chi = Character::new(values.to_vec());
        if !chi.is_primitive() {
            return Err(Error::NotPrimitive);
        }
        // Bezout coefficients give a preimage of 1.
        let mut section = vec![0i64; values.len()];
        let mut g = 0i64;
        for (i, &v) in values.iter().enumerate() {
            let e = g.extended_gcd(&v);
            for s in section.iter_mut().take(i) {
                *s *= e.x;
            }
            section[i] = e.y;
            g = e.gcd;
        }
        if g < 0 {
            section.iter_mut().for_each(|s| *s = -*s);
        }
        Ok(AbelianStructure {
            betti: 1,
            torsion: Vec::new(),
            gen_images: values.iter().map(|&v| vec![BigInt::from(v)]).collect(),
            free_section: vec![section.into_iter().map(BigInt::from).collect()],
            generator_basis: None,
            var_names: vec!["t".into()],
        })
    }
}

impl Serialize for AbelianStructure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            betti: usize,
            torsion: Vec<serde_json::Value>,
            gen_images: Vec<Vec<serde_json::Value>>,
        }
        Out {
            betti: self.betti,
            torsion: self.torsion.iter().map(big_json).collect(),
            gen_images: self.gen_images.iter().map(|r| r.iter().map(big_json).collect()).collect(),
        }
        .serialize(s)
    }
}

/// JSON number when it fits in an i64, string otherwise.
pub(crate) fn big_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(x.to_string()),
    }
}

/// Abelianization via the Smith normal form of the relator exponent matrix.
pub fn abelianization(pres: &Presentation) -> AbelianStructure {
    let n = pres.rank();
    let rows: Vec<Vec<i64>> = pres.exponent_matrix();
    let a: IntMatrix = Matrix::from_i64(n, &rows);
    let snf = smith_normal_form(&a);
    let diag = snf.diagonal();
    let rank = snf.rank();
    let betti = n - rank;
    let torsion_idx: Vec<usize> = (0..rank).filter(|&i| diag[i] > BigInt::one()).collect();
    let torsion: Vec<BigInt> = torsion_idx.iter().map(|&i| diag[i].clone()).collect();
    // Generator g has coordinates row g of V.
    let mut gen_images = Vec::with_capacity(n);
    for g in 0..n {
        let row = snf.v.row(g);
        let mut img: Vec<BigInt> = row[rank..].to_vec();
        for &i in &torsion_idx {
            img.push(row[i].mod_floor(&diag[i]));
        }
        gen_images.push(img);
    }
    let free_section: Vec<Vec<BigInt>> = (rank..n).map(|i| snf.v_inv.row(i).to_vec()).collect();
    let mut ab = AbelianStructure {
        betti,
        torsion,
        gen_images,
        free_section,
        generator_basis: None,
        var_names: Vec::new(),
    };
    choose_generator_basis(&mut ab);
    ab.var_names = match &ab.generator_basis {
        Some(gens) => gens.iter().map(|&g| pres.generators[g].name.clone()).collect(),
        None if betti == 1 => vec!["t".into()],
        None => (1..=betti).map(|i| format!("t{i}")).collect(),
    };
    ab
}

/// Subsets searched when looking for generators that span the free part.
const BASIS_SEARCH_LIMIT: usize = 20_000;

fn choose_generator_basis(ab: &mut AbelianStructure) {
    let b = ab.betti;
    let n = ab.ngens();
    if b == 0 || b > n {
        return;
    }
    let f = ab.free_matrix();
    let mut subset: Vec<usize> = (0..b).collect();
    for _ in 0..BASIS_SEARCH_LIMIT {
        let block = f.select(&subset, &(0..b).collect::<Vec<_>>());
        if block.is_unimodular() {
            let inv = block.inverse_unimodular().expect("unimodular");
            for g in 0..n {
                let free = inv.left_apply(ab.free_image_of_gen(g)).to_vec();
                ab.gen_images[g].splice(0..b, free);
            }
            ab.free_section = subset
                .iter()
                .map(|&g| (0..n).map(|h| BigInt::from((h == g) as i64)).collect())
                .collect();
            ab.generator_basis = Some(subset);
            return;
        }
        if !next_subset(&mut subset, n) {
            return;
        }
    }
}

/// Advances to the next `k`-subset of `0..n` in lexicographic order.
fn next_subset(s: &mut [usize], n: usize) -> bool {
    let k = s.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if s[i] < n - k + i {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// A homomorphism to Z, stored by its values on the presentation generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Character {
    pub values: Vec<i64>,
}

impl Character {
    pub fn new(values: Vec<i64>) -> Character {
        Character { values }
    }

    pub fn eval(&self, w: &Word) -> i64 {
        w.letters().iter().map(|l| l.sign() * self.values[l.gen()]).sum()
    }

    pub fn of_letter(&self, l: Letter) -> i64 {
        l.sign() * self.values[l.gen()]
    }

    pub fn vanishes_on(&self, w: &Word) -> bool {
        self.eval(w) == 0
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn gcd(&self) -> i64 {
        self.values.iter().fold(0i64, |a, &b| a.gcd(&b))
    }

    pub fn is_primitive(&self) -> bool {
        self.gcd() == 1
    }

    /// Divides out the gcd of the values.
    pub fn primitive(&self) -> Character {
        let g = self.gcd();
        if g <= 1 {
            return self.clone();
        }
        Character::new(self.values.iter().map(|v| v / g).collect())
    }

    pub fn neg(&self) -> Character {
        Character::new(self.values.iter().map(|v| -v).collect())
    }

    /// Checks that the character kills every relator.
    pub fn check(&self, pres: &Presentation) -> Result<()> {
        if self.values.len() != pres.rank() {
            return Err(Error::NotACharacter);
        }
        if pres.relators.iter().all(|r| self.vanishes_on(r)) {
            Ok(())
        } else {
            Err(Error::NotACharacter)
        }
    }
}

/// All characters of a group: `Σ cᵢ·basis[i]`, surjective iff `gcd(c) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterSpace {
    pub basis: Vec<Character>,
}

impl CharacterSpace {
    pub fn betti(&self) -> usize {
        self.basis.len()
    }

    /// The character with free-part coefficients `coeffs`.
    pub fn character(&self, coeffs: &[i64]) -> Character {
        assert_eq!(coeffs.len(), self.basis.len());
        let n = self.basis[0].values.len();
        let values = (0..n)
            .map(|g| coeffs.iter().zip(&self.basis).map(|(c, b)| c * b.values[g]).sum())
            .collect();
        Character::new(values)
    }

    /// For rank one, the unique surjection up to sign.
    pub fn unique(&self) -> Option<&Character> {
        (self.basis.len() == 1).then(|| &self.basis[0])
    }
}

/// Characters pulled back through the free coordinates of `ab`.
pub fn primitive_characters(ab: &AbelianStructure) -> Result<CharacterSpace> {
    if ab.betti == 0 {
        return Err(Error::NoCharacters);
    }
    let basis = (0..ab.betti)
        .map(|i| {
            Character::new(
                (0..ab.ngens())
                    .map(|g| ab.gen_images[g][i].to_i64().expect("character value fits in i64"))
                    .collect(),
            )
        })
        .collect();
    Ok(CharacterSpace { basis })
}

/// Substitutions `g := g·h^k` until the first `β₁` generators have zero
/// exponent sum in every relator, then a reorder putting them first.
pub fn to_standard_form(pres: &Presentation) -> (Presentation, TietzeLog) {
    let mut log = TietzeLog::new();
    let mut p = pres.clone();
    let n = p.rank();
    let mut pivots = vec![false; n];
    let nrows = p.relators.len();
    for i in 0..nrows {
        loop {
            let e = p.exponent_matrix();
            let active: Vec<usize> = (0..n).filter(|&g| !pivots[g] && e[i][g] != 0).collect();
            if active.len() <= 1 {
                if let Some(&g) = active.first() {
                    pivots[g] = true;
                }
                break;
            }
            let piv = *active.iter().min_by_key(|&&g| (e[i][g].abs(), g)).unwrap();
            for &q in &active {
                if q == piv {
                    continue;
                }
                // col_q -= k·col_piv, realized as piv := piv·q^{-k}
                let k = e[i][q].div_euclid(e[i][piv]);
                if k == 0 {
                    continue;
                }
                let replacement = Word::letter(Letter::pos(piv)).mul(&Word::power_of(q, -k));
                let m = TietzeMove::Substitute {
                    target: piv,
                    fresh: p.generators[piv].name.clone(),
                    replacement,
                };
                p = log.push(&p, m).expect("valid substitution");
            }
        }
    }
    let perm: Vec<usize> = (0..n).filter(|&g| !pivots[g]).chain((0..n).filter(|&g| pivots[g])).collect();
    if perm.iter().enumerate().any(|(i, &g)| i != g) {
        p = log.push(&p, TietzeMove::Reorder(perm)).expect("valid permutation");
    }
    (p, log)
}

/// Whether every relator, cyclically reduced, has exactly one `gen` and one
/// `gen⁻¹`.
pub fn is_simple_form(pres: &Presentation, gen: usize) -> Result<bool> {
    if gen >= pres.rank() {
        return Err(Error::UnknownGenerator(format!("g{gen}")));
    }
    Ok(!pres.relators.is_empty()
        && pres.relators.iter().all(|r| cyclic_core(r).occurrences(gen) == (1, 1)))
}

/// Whether `gen` has zero exponent sum in every relator.
pub fn is_standard_for(pres: &Presentation, gen: usize) -> bool {
    pres.relators.iter().all(|r| {
        let (p, n) = r.occurrences(gen);
        p == n
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn v3396_homology() {
        let p = Presentation::from_strs("v3396", "abc", &["aBca2bC", "a2cba2CAB"]);
        let ab = abelianization(&p);
        assert_eq!(ab.betti, 2);
        assert_eq!(ab.torsion, big(&[3]));
        assert_eq!(ab.generator_basis, Some(vec![1, 2]));
        assert_eq!(ab.var_names, vec!["b", "c"]);
    }

    #[test]
    fn v3036_homology_and_character() {
        let p = Presentation::from_strs("v3036", "ab", &["a3b3AbAb3a3b3AbAb4AbAb3"]);
        let ab = abelianization(&p);
        assert_eq!((ab.betti, ab.torsion.clone()), (1, big(&[19])));
        let chars = primitive_characters(&ab).unwrap();
        let chi = chars.unique().unwrap();
        assert_eq!(chi.values[0].abs(), 1);
        assert_eq!(chi.values[1], 0);
        assert!(is_standard_for(&p, 0));
        assert!(!is_simple_form(&p, 0).unwrap());
    }

    #[test]
    fn free_and_finite() {
        let f2 = Presentation::from_strs("F2", "ab", &[]);
        let ab = abelianization(&f2);
        assert_eq!((ab.betti, ab.torsion.len()), (2, 0));
        let z2 = Presentation::from_strs("Z2", "a", &["a2"]);
        assert_eq!(primitive_characters(&abelianization(&z2)), Err(Error::NoCharacters));
    }

    #[test]
    fn standard_form_moves() {
        let p = Presentation::from_strs("", "ab", &["ab"]);
        let (q, log) = to_standard_form(&p);
        assert_eq!(log.replay(&p).unwrap(), q);
        assert!(is_standard_for(&q, 0));
        assert_eq!(abelianization(&q).betti, 1);
        let v3384 = Presentation::from_strs("v3384", "abc", &["ab2ab2aCb2ab2abcb", "aCAc"]);
        let (q, _) = to_standard_form(&v3384);
        assert!(is_standard_for(&q, 0) && is_standard_for(&q, 1));
        let ab = abelianization(&q);
        assert_eq!(ab.betti, 2);
        for g in 2..q.rank() {
            assert!(ab.free_image_of_gen(g).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn rank_one_section() {
        let ab = AbelianStructure::rank_one(&[4, 6, 9]).unwrap();
        let s: Vec<i64> = ab.free_section[0].iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(4 * s[0] + 6 * s[1] + 9 * s[2], 1);
        assert_eq!(AbelianStructure::rank_one(&[2, 4]), Err(Error::NotPrimitive));
    }
}
