use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Coeff;

/// Exponent vector of a monomial; entries may be negative.
pub type Monomial = Vec<i64>;

/// Integer Laurent polynomial in `nvars` variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Laurent<T> {
    nvars: usize,
    terms: BTreeMap<Monomial, T>,
}

/// Graded-lex comparison: total degree first, then lexicographic.
pub fn grlex(a: &[i64], b: &[i64]) -> Ordering {
    let da: i64 = a.iter().sum();
    let db: i64 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl<T: Coeff> Laurent<T> {
    pub fn zero(nvars: usize) -> Laurent<T> {
        Laurent { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: T) -> Laurent<T> {
        Laurent::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Laurent<T> {
        Laurent::constant(nvars, T::one())
    }

    pub fn monomial(exps: Monomial, c: T) -> Laurent<T> {
        let mut p = Laurent::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// The variable `t_i` (power `k`).
    pub fn var(nvars: usize, i: usize, k: i64) -> Laurent<T> {
        let mut e = vec![0; nvars];
        e[i] = k;
        Laurent::monomial(e, T::one())
    }

    /// From `(exponents, coefficient)` pairs; repeated monomials add up.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, T)>) -> Laurent<T> {
        let mut p = Laurent::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "monomial length");
            p.add_term(e, c);
        }
        p
    }

    /// Univariate polynomial from coefficients of `t^lo, t^(lo+1), …`.
    pub fn univariate(lo: i64, coeffs: &[i64]) -> Laurent<T> {
        Laurent::from_terms(
            1,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (vec![lo + i as i64], <T as Coeff>::from_i64(c))),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[i64]) -> T {
        self.terms.get(e).cloned().unwrap_or_else(T::zero)
    }

    fn add_term(&mut self, e: Monomial, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    fn same_ring(&self, other: &Laurent<T>) -> Result<()> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(Error::RingMismatch(self.nvars, other.nvars))
        }
    }

    pub fn checked_add(&self, other: &Laurent<T>) -> Result<Laurent<T>> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Laurent<T>) -> Result<Laurent<T>> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Laurent<T>) -> Result<Laurent<T>> {
        self.same_ring(other)?;
        let mut out = Laurent::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Monomial = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Laurent<T> {
        Laurent {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn scalar_mul(&self, k: &T) -> Laurent<T> {
        if k.is_zero() {
            return Laurent::zero(self.nvars);
        }
        Laurent {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.clone() * k.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Laurent<T> {
        let mut out = Laurent::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Multiplies by the monomial `t^shift`.
    pub fn shift(&self, shift: &[i64]) -> Laurent<T> {
        Laurent {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Per-variable minimum exponent (zeros for the zero polynomial).
    pub fn min_exponents(&self) -> Monomial {
        let mut m: Option<Monomial> = None;
        for e in self.terms.keys() {
            m = Some(match m {
                None => e.clone(),
                Some(m) => m.iter().zip(e).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        m.unwrap_or_else(|| vec![0; self.nvars])
    }

    pub fn max_exponents(&self) -> Monomial {
        let mut m: Option<Monomial> = None;
        for e in self.terms.keys() {
            m = Some(match m {
                None => e.clone(),
                Some(m) => m.iter().zip(e).map(|(a, b)| *a.max(b)).collect(),
            });
        }
        m.unwrap_or_else(|| vec![0; self.nvars])
    }

    /// Graded-lex leading term.
    pub fn leading_term(&self) -> Option<(&Monomial, &T)> {
        self.terms.iter().max_by(|a, b| grlex(a.0, b.0))
    }

    /// Canonical representative of `±t^k · self`: minimum exponent 0 in each
    /// variable and positive graded-lex leading coefficient.
    pub fn normalize_units(&self) -> Result<Laurent<T>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let lo: Monomial = self.min_exponents().iter().map(|x| -x).collect();
        let p = self.shift(&lo);
        let (_, c) = p.leading_term().expect("nonzero");
        Ok(if c.is_negative() { p.neg() } else { p })
    }

    /// Normal form, or zero for zero.
    pub fn normalized(&self) -> Laurent<T> {
        self.normalize_units().unwrap_or_else(|_| self.clone())
    }

    /// Equality up to multiplication by a unit `±t^k`.
    pub fn associate(&self, other: &Laurent<T>) -> bool {
        self.normalized() == other.normalized()
    }

    /// All variables inverted.
    pub fn invert_variables(&self) -> Laurent<T> {
        Laurent {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.iter().map(|x| -x).collect(), c.clone())).collect(),
        }
    }

    pub fn value_at_ones(&self) -> T {
        self.terms.values().fold(T::zero(), |a, c| a + c.clone())
    }

    /// Maps exponent vectors through the integer matrix `r` (new = r·old),
    /// landing in a ring with `r.rows()` variables.
    pub fn map_exponents(&self, r: &Matrix<i64>) -> Laurent<T> {
        assert_eq!(r.cols(), self.nvars, "exponent map width");
        Laurent::from_terms(
            r.rows(),
            self.terms.iter().map(|(e, c)| {
                let img = (0..r.rows())
                    .map(|i| (0..r.cols()).map(|j| r[(i, j)] * e[j]).sum())
                    .collect();
                (img, c.clone())
            }),
        )
    }

    /// Degree in variable `v` of a polynomial with nonnegative exponents.
    fn degree_in(&self, v: usize) -> i64 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(-1)
    }

    /// Coefficient of `t_v^k`, as a polynomial not involving `t_v`.
    fn coeff_in(&self, v: usize, k: i64) -> Laurent<T> {
        Laurent {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[v] == k)
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e[v] = 0;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Exact division; `None` if `divisor` does not divide `self` in the
    /// Laurent ring.
    pub fn div_exact(&self, divisor: &Laurent<T>) -> Option<Laurent<T>> {
        if divisor.is_zero() || self.nvars != divisor.nvars {
            return None;
        }
        if self.is_zero() {
            return Some(Laurent::zero(self.nvars));
        }
        // Newton polytopes add under multiplication, which pins the box the
        // quotient's exponents live in.
        let lo: Monomial = self.min_exponents().iter().zip(divisor.min_exponents()).map(|(a, b)| a - b).collect();
        let hi: Monomial = self.max_exponents().iter().zip(divisor.max_exponents()).map(|(a, b)| a - b).collect();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return None;
        }
        let (dlead, dc) = {
            let (e, c) = divisor.terms.iter().next_back().expect("nonzero");
            (e.clone(), c.clone())
        };
        let mut rem = self.clone();
        let mut quot = Laurent::zero(self.nvars);
        while let Some((e, c)) = rem.terms.iter().next_back() {
            if !(c.clone() % dc.clone()).is_zero() {
                return None;
            }
            let qe: Monomial = e.iter().zip(&dlead).map(|(a, b)| a - b).collect();
            if qe.iter().zip(lo.iter().zip(&hi)).any(|(x, (l, h))| x < l || x > h) {
                return None;
            }
            let qc = c.clone() / dc.clone();
            let term = Laurent::monomial(qe, qc);
            rem = &rem - &(&term * divisor);
            quot = &quot + &term;
        }
        Some(quot)
    }

    /// Whether `divisor` divides `self`.
    pub fn divisible_by(&self, divisor: &Laurent<T>) -> bool {
        self.div_exact(divisor).is_some()
    }

    pub fn predicates(&self) -> Predicates<T> {
        let norm = self.normalized();
        let span: Vec<i64> = norm
            .max_exponents()
            .iter()
            .zip(norm.min_exponents())
            .map(|(a, b)| a - b)
            .collect();
        let is_monic_univariate = self.nvars == 1 && !norm.is_zero() && {
            let lo = norm.terms.values().next().unwrap();
            let hi = norm.terms.values().next_back().unwrap();
            lo.abs().is_one() && hi.abs().is_one()
        };
        Predicates {
            is_monic_univariate,
            degree_span: span,
            is_symmetric_under_inversion: norm.is_zero() || norm == self.invert_variables().normalized(),
            value_at_ones: self.value_at_ones(),
        }
    }

    /// Text rendering with the given variable names. Univariate symmetric
    /// polynomials use the bracket convention: `[a_k, …, a_0]` for even span
    /// (leading coefficient down to the middle one), `(a_k, …, a_1)` for odd.
    pub fn render(&self, names: &[String]) -> String {
        if self.nvars == 1 && !self.is_zero() {
            if let Some(s) = self.bracket_form() {
                return s;
            }
        }
        self.render_sum(names)
    }

    fn bracket_form(&self) -> Option<String> {
        let norm = self.normalized();
        let span = norm.max_exponents()[0];
        let c: Vec<T> = (0..=span).map(|i| norm.coeff(&[i])).collect();
        let n = c.len();
        if (0..n).any(|i| c[i] != c[n - 1 - i]) {
            return None;
        }
        let half: Vec<String> = c.iter().rev().take(n.div_ceil(2)).map(|x| x.to_string()).collect();
        Some(if span % 2 == 0 {
            format!("[{}]", half.join(","))
        } else {
            format!("({})", half.join(","))
        })
    }

    /// Signed monomial sum, graded-lex descending.
    pub fn render_sum(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let single = names.iter().all(|n| n.chars().count() == 1);
        let mut terms: Vec<(&Monomial, &T)> = self.terms.iter().collect();
        terms.sort_by(|a, b| grlex(b.0, a.0));
        let mut out = String::new();
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            for (v, &k) in e.iter().enumerate() {
                let name = names.get(v).cloned().unwrap_or_else(|| format!("t{}", v + 1));
                match k {
                    0 => {}
                    1 => factors.push(name),
                    _ => factors.push(format!("{name}^{k}")),
                }
            }
            let sep = if single { "" } else { "*" };
            if factors.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&factors.join(sep));
            } else {
                out.push_str(&abs.to_string());
                out.push_str(sep);
                out.push_str(&factors.join(sep));
            }
        }
        out
    }
}

/// Default variable names: `t` for one variable, `t1, t2, …` otherwise.
pub fn default_var_names(nvars: usize) -> Vec<String> {
    if nvars == 1 {
        vec!["t".into()]
    } else {
        (1..=nvars).map(|i| format!("t{i}")).collect()
    }
}

impl<T: Coeff> fmt::Display for Laurent<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_sum(&default_var_names(self.nvars)))
    }
}

impl<T: Coeff> fmt::Debug for Laurent<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}

macro_rules! ring_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<T: Coeff> std::ops::$trait<&Laurent<T>> for &Laurent<T> {
            type Output = Laurent<T>;
            /// Panics when the variable counts differ.
            fn $method(self, rhs: &Laurent<T>) -> Laurent<T> {
                self.$checked(rhs).expect("Laurent ring mismatch")
            }
        }
    };
}
ring_op!(Add, add, checked_add);
ring_op!(Sub, sub, checked_sub);
ring_op!(Mul, mul, checked_mul);

impl<T: Coeff> std::ops::Neg for &Laurent<T> {
    type Output = Laurent<T>;
    fn neg(self) -> Laurent<T> {
        Laurent::neg(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Predicates<T> {
    pub is_monic_univariate: bool,
    pub degree_span: Vec<i64>,
    pub is_symmetric_under_inversion: bool,
    pub value_at_ones: T,
}

/// Largest number of variables the gcd supports.
pub const MAX_GCD_VARS: usize = 3;

/// Normalized gcd of a list; zeros are ignored.
pub fn laurent_gcd<T: Coeff>(polys: &[Laurent<T>]) -> Result<Laurent<T>> {
    let nonzero: Vec<&Laurent<T>> = polys.iter().filter(|p| !p.is_zero()).collect();
    let Some(first) = nonzero.first() else {
        return Err(Error::ZeroIdeal);
    };
    let n = first.nvars;
    if nonzero.iter().any(|p| p.nvars != n) {
        let other = nonzero.iter().find(|p| p.nvars != n).unwrap().nvars;
        return Err(Error::RingMismatch(n, other));
    }
    if n > MAX_GCD_VARS {
        return Err(Error::Unsupported(format!("gcd in {n} variables (at most {MAX_GCD_VARS})")));
    }
    let mut g = to_poly(first);
    for p in &nonzero[1..] {
        if g.len() == 1 && g.terms.values().next().unwrap().abs().is_one() {
            break;
        }
        g = poly_gcd(&g, &to_poly(p));
    }
    g.normalize_units()
}

/// Shift to nonnegative exponents with every variable's minimum at 0.
fn to_poly<T: Coeff>(p: &Laurent<T>) -> Laurent<T> {
    let lo: Monomial = p.min_exponents().iter().map(|x| -x).collect();
    p.shift(&lo)
}

/// Gcd of polynomials with nonnegative exponents, up to sign.
fn poly_gcd<T: Coeff>(p: &Laurent<T>, q: &Laurent<T>) -> Laurent<T> {
    if p.is_zero() {
        return q.clone();
    }
    if q.is_zero() {
        return p.clone();
    }
    let main = (0..p.nvars).rev().find(|&v| p.degree_in(v) > 0 || q.degree_in(v) > 0);
    let Some(v) = main else {
        let a = p.coeff(&vec![0; p.nvars]);
        let b = q.coeff(&vec![0; q.nvars]);
        return Laurent::constant(p.nvars, a.gcd(&b));
    };
    if p.degree_in(v) == 0 {
        return poly_gcd(p, &content(q, v));
    }
    if q.degree_in(v) == 0 {
        return poly_gcd(&content(p, v), q);
    }
    let cp = content(p, v);
    let cq = content(q, v);
    let c = poly_gcd(&cp, &cq);
    let mut a = p.div_exact(&cp).expect("content divides");
    let mut b = q.div_exact(&cq).expect("content divides");
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    let g = subresultant_last(a, b, v);
    let g = if g.degree_in(v) == 0 {
        Laurent::one(p.nvars)
    } else {
        let cg = content(&g, v);
        g.div_exact(&cg).expect("content divides")
    };
    &c * &g
}

fn content<T: Coeff>(p: &Laurent<T>, v: usize) -> Laurent<T> {
    let d = p.degree_in(v);
    let mut g = Laurent::zero(p.nvars);
    for k in 0..=d {
        let c = p.coeff_in(v, k);
        if c.is_zero() {
            continue;
        }
        g = poly_gcd(&g, &c);
        if g.len() == 1 && g.terms.values().next().unwrap().abs().is_one() && g.max_exponents().iter().all(|&x| x == 0) {
            break;
        }
    }
    g
}

/// Pseudo-remainder of `a` by `b` as polynomials in `t_v`.
fn prem<T: Coeff>(a: &Laurent<T>, b: &Laurent<T>, v: usize) -> Laurent<T> {
    let db = b.degree_in(v);
    let lb = b.coeff_in(v, db);
    let mut r = a.clone();
    let mut e = a.degree_in(v) - db + 1;
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let s = r.coeff_in(v, dr).shift(&unit_shift(r.nvars, v, dr - db));
        r = &(&lb * &r) - &(&s * b);
        e -= 1;
    }
    if e > 0 {
        r = &lb.pow(e as u32) * &r;
    }
    r
}

fn unit_shift(n: usize, v: usize, k: i64) -> Monomial {
    let mut e = vec![0; n];
    e[v] = k;
    e
}

/// Last nonzero remainder of the subresultant PRS of `a`, `b` in `t_v`
/// (`deg a ≥ deg b > 0`); associate to the gcd of the primitive parts.
fn subresultant_last<T: Coeff>(mut a: Laurent<T>, mut b: Laurent<T>, v: usize) -> Laurent<T> {
    let n = a.nvars;
    let mut g = Laurent::one(n);
    let mut h = Laurent::one(n);
    loop {
        let delta = a.degree_in(v) - b.degree_in(v);
        let r = prem(&a, &b, v);
        if r.is_zero() {
            return b;
        }
        if r.degree_in(v) == 0 {
            return r;
        }
        let denom = &g * &h.pow(delta as u32);
        a = b;
        b = r.div_exact(&denom).expect("subresultant division is exact");
        g = a.coeff_in(v, a.degree_in(v));
        h = if delta == 0 {
            h
        } else {
            let num = g.pow(delta as u32);
            num.div_exact(&h.pow(delta as u32 - 1)).expect("subresultant division is exact")
        };
    }
}

/// Vertices of the Newton polytope with their coefficients, sorted by
/// exponent vector.
pub fn newton_vertices<T: Coeff>(p: &Laurent<T>) -> Result<Vec<(Monomial, T)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let pts: Vec<Monomial> = p.terms.keys().cloned().collect();
    let verts: Vec<Monomial> = match p.nvars {
        0 => pts,
        1 => {
            let mut v = vec![pts[0].clone(), pts[pts.len() - 1].clone()];
            v.dedup();
            v
        }
        2 => hull_2d(&pts),
        _ => pts
            .iter()
            .enumerate()
            .filter(|(i, x)| {
                let others: Vec<&Monomial> = pts.iter().enumerate().filter(|(j, _)| j != i).map(|(_, y)| y).collect();
                !in_convex_hull(x, &others)
            })
            .map(|(_, x)| x.clone())
            .collect(),
    };
    let mut out: Vec<(Monomial, T)> = verts.into_iter().map(|e| {
        let c = p.coeff(&e);
        (e, c)
    }).collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

fn cross(o: &[i64], a: &[i64], b: &[i64]) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Strict convex hull (no collinear points) of distinct 2-d points,
/// counter-clockwise from the lexicographically smallest.
pub fn hull_2d(pts: &[Monomial]) -> Vec<Monomial> {
    let mut p: Vec<Monomial> = pts.to_vec();
    p.sort();
    p.dedup();
    if p.len() <= 2 {
        return p;
    }
    let mut lower: Vec<Monomial> = Vec::new();
    for x in &p {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], x) <= 0 {
            lower.pop();
        }
        lower.push(x.clone());
    }
    let mut upper: Vec<Monomial> = Vec::new();
    for x in p.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], x) <= 0 {
            upper.pop();
        }
        upper.push(x.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Whether `x` is a convex combination of `others`, by Carathéodory:
/// search affinely independent subsets of size at most `dim + 1`.
fn in_convex_hull(x: &[i64], others: &[&Monomial]) -> bool {
    let d = x.len();
    if others.iter().any(|o| o.as_slice() == x) {
        return true;
    }
    for k in 2..=(d + 1).min(others.len()) {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            if in_simplex(x, &idx.iter().map(|&i| others[i]).collect::<Vec<_>>()) {
                return true;
            }
            if !advance(&mut idx, others.len()) {
                break;
            }
        }
    }
    false
}

fn advance(s: &mut [usize], n: usize) -> bool {
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

/// Exact barycentric test via Cramer's rule on the Gram system.
fn in_simplex(x: &[i64], s: &[&Monomial]) -> bool {
    let d = x.len();
    let k = s.len() - 1;
    let b: Vec<Vec<i128>> = (1..=k).map(|i| (0..d).map(|j| (s[i][j] - s[0][j]) as i128).collect()).collect();
    let y: Vec<i128> = (0..d).map(|j| (x[j] - s[0][j]) as i128).collect();
    let gram = |u: &[i128], v: &[i128]| u.iter().zip(v).map(|(a, b)| a * b).sum::<i128>();
    let m = Matrix::<i128>::from_rows(k, (0..k).map(|i| (0..k).map(|j| gram(&b[i], &b[j])).collect()).collect());
    let det = m.det();
    if det == 0 {
        return false;
    }
    let rhs: Vec<i128> = (0..k).map(|i| gram(&b[i], &y)).collect();
    let mut nums = Vec::with_capacity(k);
    for i in 0..k {
        let mut mi = m.clone();
        for (r, v) in rhs.iter().enumerate() {
            mi[(r, i)] = *v;
        }
        nums.push(mi.det());
    }
    // x - s0 must lie in the span: B·nums = det·y.
    for j in 0..d {
        let lhs: i128 = (0..k).map(|i| b[i][j] * nums[i]).sum();
        if lhs != det * y[j] {
            return false;
        }
    }
    let sign = det.signum();
    let total: i128 = nums.iter().sum();
    nums.iter().all(|n| n * sign >= 0) && total * sign <= det * sign
}

/// `p` with exponent vectors mapped through the unimodular matrix `k`.
pub fn change_variables<T: Coeff>(p: &Laurent<T>, k: &Matrix<i64>) -> Result<Laurent<T>> {
    if k.rows() != p.nvars() || !k.is_unimodular() {
        return Err(Error::BadBasis);
    }
    Ok(p.map_exponents(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type P = Laurent<BigInt>;

    fn b() -> P {
        P::var(2, 0, 1)
    }
    fn c() -> P {
        P::var(2, 1, 1)
    }
    fn k(n: i64) -> P {
        P::constant(2, BigInt::from(n))
    }

    #[test]
    fn arithmetic() {
        let p = (&(&b() - &k(1)) * &(&c() - &k(1))).scalar_mul(&BigInt::from(2));
        let want = P::from_terms(
            2,
            [(vec![1, 1], 2), (vec![1, 0], -2), (vec![0, 1], -2), (vec![0, 0], 2)]
                .map(|(e, c)| (e, BigInt::from(c))),
        );
        assert_eq!(p, want);
        assert!((&p + &p.neg()).is_zero());
        let t = P::univariate(0, &[1, 1]);
        let quintic = &(&t * &P::univariate(0, &[1, 0, 1])) * &P::univariate(0, &[2, -3, 2]);
        assert_eq!(quintic, P::univariate(0, &[2, -1, 1, 1, -1, 2]));
        assert_eq!(p.checked_add(&t), Err(Error::RingMismatch(2, 1)));
    }

    #[test]
    fn normalization() {
        let p = P::univariate(-2, &[3, 4, 5, 4, 3]);
        assert_eq!(p.normalize_units().unwrap(), P::univariate(0, &[3, 4, 5, 4, 3]));
        assert_eq!(P::univariate(-3, &[-1]).normalize_units().unwrap(), P::univariate(0, &[1]));
        let q = &(&(&(&b() * &c()).scalar_mul(&BigInt::from(-3)) - &b().scalar_mul(&BigInt::from(2)))
            - &c().scalar_mul(&BigInt::from(2)))
            - &k(3);
        assert_eq!(q.normalize_units().unwrap().render(&["b".into(), "c".into()]), "3bc + 2b + 2c + 3");
        assert_eq!(P::zero(1).normalize_units(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn gcds() {
        let delta = P::from_terms(
            2,
            [(vec![1, 1], 3), (vec![1, 0], 2), (vec![0, 1], 2), (vec![0, 0], 3)].map(|(e, c)| (e, BigInt::from(c))),
        );
        let m1 = (&(&b() - &k(1)) * &delta).neg();
        let m2 = &(&c() - &k(1)) * &delta;
        assert_eq!(laurent_gcd(&[m1, m2, P::zero(2)]).unwrap(), delta);
        let s = P::var(2, 0, 1);
        let t = P::var(2, 1, 1);
        assert_eq!(laurent_gcd(&[&k(1) - &t, &s - &k(1)]).unwrap(), k(1));
        assert_eq!(laurent_gcd(&[P::zero(1)]), Err(Error::ZeroIdeal));
        let x = P::univariate(-1, &[2, 0, 4]);
        assert_eq!(laurent_gcd(std::slice::from_ref(&x)).unwrap(), x.normalized());
        let big = P::from_terms(4, [(vec![0, 0, 0, 1], BigInt::from(1))]);
        assert!(matches!(laurent_gcd(&[big]), Err(Error::Unsupported(_))));
    }

    #[test]
    fn division() {
        let f = P::univariate(-1, &[1, -2, 1]);
        let g = P::univariate(0, &[-1, 1]);
        assert_eq!(f.div_exact(&g).unwrap(), P::univariate(-1, &[-1, 1]));
        assert!(P::univariate(0, &[1, 0, 1]).div_exact(&g).is_none());
    }

    #[test]
    fn newton() {
        let delta = P::from_terms(
            2,
            [(vec![1, 1], 3), (vec![1, 0], 2), (vec![0, 1], 2), (vec![0, 0], 3)].map(|(e, c)| (e, BigInt::from(c))),
        );
        let v: Vec<i64> = newton_vertices(&delta).unwrap().iter().map(|(_, c)| c.try_into().unwrap()).collect();
        assert_eq!(v, vec![3, 2, 2, 3]);
        let u = P::univariate(0, &[2, 2, -3, 2, 2]);
        let v = newton_vertices(&u).unwrap();
        assert_eq!(v, vec![(vec![0], BigInt::from(2)), (vec![4], BigInt::from(2))]);
        let m = P::univariate(2, &[7]);
        assert_eq!(newton_vertices(&m).unwrap().len(), 1);
        let cube = P::from_terms(
            3,
            [vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 1], vec![0, 1, 1]]
                .map(|e| (e, BigInt::from(1))),
        );
        assert_eq!(newton_vertices(&cube).unwrap().len(), 6);
        let with_centre = P::from_terms(
            3,
            [vec![0, 0, 0], vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2], vec![1, 1, 0], vec![0, 0, 1]]
                .map(|e| (e, BigInt::from(1))),
        );
        assert_eq!(newton_vertices(&with_centre).unwrap().len(), 4);
    }

    #[test]
    fn predicates_and_rendering() {
        let p = P::univariate(0, &[3, 4, 5, 4, 3]);
        let pr = p.predicates();
        assert!(!pr.is_monic_univariate && pr.is_symmetric_under_inversion);
        assert_eq!((pr.degree_span, pr.value_at_ones), (vec![4], BigInt::from(19)));
        assert_eq!(p.render(&["t".into()]), "[3,4,5]");
        assert!(P::univariate(0, &[1, 1, -4, 1, 1]).predicates().is_monic_univariate);
        let one = P::univariate(0, &[1]).predicates();
        assert!(one.is_monic_univariate && one.is_symmetric_under_inversion);
        assert_eq!(P::univariate(0, &[2, -1, 1, 1, -1, 2]).render(&["t".into()]), "(2,-1,1)");
        assert_eq!(P::univariate(0, &[1, 2]).render(&["t".into()]), "2t + 1");
    }

    #[test]
    fn variable_change() {
        let bc = &b() * &c();
        let id = Matrix::<i64>::identity(2);
        assert_eq!(change_variables(&bc, &id).unwrap(), bc);
        let shear = Matrix::<i64>::from_i64(2, &[vec![1, 1], vec![0, 1]]);
        assert_eq!(change_variables(&bc, &shear).unwrap(), P::monomial(vec![2, 1], BigInt::from(1)));
        let bad = Matrix::<i64>::from_i64(2, &[vec![2, 0], vec![0, 1]]);
        assert_eq!(change_variables(&bc, &bad), Err(Error::BadBasis));
    }
}
