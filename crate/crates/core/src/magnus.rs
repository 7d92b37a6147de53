//! Free-group words, the mod-2 Magnus embedding and Fox derivatives.
//!
//! `M(x_i) = 1 + X_i` and `M(x_i⁻¹) = 1 + X_i + X_i² + ⋯` in `F2<<X1..X4>>`,
//! truncated at a fixed degree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest generator index.
pub const MAX_GENERATORS: u8 = 4;
/// Largest supported truncation degree.
pub const MAX_DEGREE: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub gen: u8,
    pub exp: i8,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        Letter {
            gen: self.gen,
            exp: -self.exp,
        }
    }
}

/// A freely reduced word in `x1..x4`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<Letter>,
}

fn check_gen(g: u8) -> Result<()> {
    if g == 0 || g > MAX_GENERATORS {
        return Err(Error::InvalidInput(format!(
            "generator index {g} outside 1..={MAX_GENERATORS}"
        )));
    }
    Ok(())
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    /// Reduces `(gen, ±1)` pairs to canonical form.
    pub fn new(letters: &[(u8, i8)]) -> Result<Word> {
        let mut w = Word::identity();
        for &(g, e) in letters {
            check_gen(g)?;
            if e != 1 && e != -1 {
                return Err(Error::InvalidInput(format!("exponent {e} is not ±1")));
            }
            w.push(Letter { gen: g, exp: e });
        }
        Ok(w)
    }

    pub fn generator(i: u8) -> Result<Word> {
        Word::new(&[(i, 1)])
    }

    fn push(&mut self, l: Letter) {
        if self.letters.last() == Some(&l.inverse()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, o: &Word) -> Word {
        let mut w = self.clone();
        for &l in &o.letters {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Word {
        let mut w = Word::identity();
        for _ in 0..e {
            w = w.mul(self);
        }
        w
    }

    /// `u v u⁻¹ v⁻¹`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.mul(v).mul(&u.inverse()).mul(&v.inverse())
    }

    /// Generators `x1..x4`, inverses `X1..X4` or `x1^-1`, juxtaposed;
    /// whitespace is ignored.
    pub fn parse(s: &str) -> Result<Word> {
        let cs: Vec<(usize, char)> = s.char_indices().collect();
        let mut w = Word::identity();
        let mut k = 0;
        let err = |pos: usize, msg: &str| Error::InvalidInput(format!("position {pos}: {msg}"));
        while k < cs.len() {
            let (pos, c) = cs[k];
            if c.is_whitespace() {
                k += 1;
                continue;
            }
            let mut exp: i8 = match c {
                'x' => 1,
                'X' => -1,
                _ => return Err(err(pos, &format!("expected x or X, found {c:?}"))),
            };
            k += 1;
            let g = match cs.get(k) {
                Some((_, d)) if d.is_ascii_digit() => d.to_digit(10).unwrap() as u8,
                Some((p, d)) => {
                    return Err(err(*p, &format!("expected generator index, found {d:?}")))
                }
                None => return Err(err(s.len(), "expected generator index")),
            };
            if g == 0 || g > MAX_GENERATORS {
                return Err(err(
                    cs[k].0,
                    &format!("generator index {g} outside 1..={MAX_GENERATORS}"),
                ));
            }
            k += 1;
            if let Some((p, '^')) = cs.get(k) {
                let rest: String = cs[k + 1..].iter().take(2).map(|c| c.1).collect();
                if rest != "-1" {
                    return Err(err(*p, "only ^-1 is accepted as an exponent"));
                }
                exp = -exp;
                k += 3;
            }
            w.push(Letter { gen: g, exp });
        }
        Ok(w)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| {
                if l.exp > 0 {
                    format!("x{}", l.gen)
                } else {
                    format!("X{}", l.gen)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Truncated series over `Z/2` in `X1..X4`, one bit per monomial of
/// degree at most `max_degree`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    max_degree: usize,
    bits: Vec<bool>,
}

const R: usize = MAX_GENERATORS as usize;

fn offset(len: usize) -> usize {
    (0..len).map(|k| R.pow(k as u32)).sum()
}

fn index_of(seq: &[u8]) -> usize {
    let mut v = 0;
    for &i in seq {
        v = v * R + (i as usize - 1);
    }
    offset(seq.len()) + v
}

fn seq_of(mut idx: usize) -> Vec<u8> {
    let mut len = 0;
    while idx >= R.pow(len as u32) {
        idx -= R.pow(len as u32);
        len += 1;
    }
    let mut out = vec![0u8; len];
    for k in (0..len).rev() {
        out[k] = (idx % R) as u8 + 1;
        idx /= R;
    }
    out
}

impl TruncSeries {
    pub fn zero(max_degree: usize) -> Result<Self> {
        if max_degree > MAX_DEGREE {
            return Err(Error::InvalidInput(format!(
                "degree {max_degree} exceeds cap {MAX_DEGREE}"
            )));
        }
        Ok(TruncSeries {
            max_degree,
            bits: vec![false; offset(max_degree + 1)],
        })
    }

    pub fn one(max_degree: usize) -> Result<Self> {
        let mut s = Self::zero(max_degree)?;
        s.bits[0] = true;
        Ok(s)
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Coefficient of `X_{i1}⋯X_{in}`; zero beyond the truncation degree.
    pub fn coeff(&self, seq: &[u8]) -> u8 {
        if seq.len() > self.max_degree || seq.iter().any(|&i| i == 0 || i as usize > R) {
            return 0;
        }
        self.bits[index_of(seq)] as u8
    }

    pub fn toggle(&mut self, seq: &[u8]) {
        if seq.len() <= self.max_degree {
            let k = index_of(seq);
            self.bits[k] = !self.bits[k];
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.max_degree, o.max_degree, "mixed truncation degrees");
        let bits = self.bits.iter().zip(&o.bits).map(|(a, b)| a ^ b).collect();
        TruncSeries {
            max_degree: self.max_degree,
            bits,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.max_degree, o.max_degree, "mixed truncation degrees");
        let mut out = TruncSeries {
            max_degree: self.max_degree,
            bits: vec![false; self.bits.len()],
        };
        let a = self.monomials();
        let b = o.monomials();
        for u in &a {
            for v in &b {
                if u.len() + v.len() <= self.max_degree {
                    let mut w = u.clone();
                    w.extend_from_slice(v);
                    out.toggle(&w);
                }
            }
        }
        out
    }

    /// Monomials with coefficient 1, by degree then lexicographically.
    pub fn monomials(&self) -> Vec<Vec<u8>> {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(k, _)| seq_of(k))
            .collect()
    }

    /// The same series truncated to a lower degree.
    pub fn truncate(&self, d: usize) -> Self {
        let d = d.min(self.max_degree);
        TruncSeries {
            max_degree: d,
            bits: self.bits[..offset(d + 1)].to_vec(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.bits[0] && self.bits[1..].iter().all(|b| !b)
    }
}

pub fn monomial_string(seq: &[u8]) -> String {
    if seq.is_empty() {
        "1".to_string()
    } else {
        seq.iter().map(|i| format!("X{i}")).collect()
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ms = self.monomials();
        if ms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = ms.iter().map(|m| monomial_string(m)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn letter_series(l: Letter, d: usize) -> Result<TruncSeries> {
    let mut s = TruncSeries::one(d)?;
    let top = if l.exp > 0 { 1.min(d) } else { d };
    for k in 1..=top {
        s.toggle(&vec![l.gen; k]);
    }
    Ok(s)
}

/// Image of `word` under the mod-2 Magnus embedding, truncated at `max_degree`.
pub fn magnus(word: &Word, max_degree: usize) -> Result<TruncSeries> {
    if max_degree == 0 {
        return Err(Error::InvalidInput("max_degree must be at least 1".into()));
    }
    let mut acc = TruncSeries::one(max_degree)?;
    for &l in word.letters() {
        acc = acc.mul(&letter_series(l, max_degree)?);
    }
    Ok(acc)
}

fn check_index(seq: &[u8]) -> Result<()> {
    if seq.is_empty() {
        return Err(Error::InvalidInput(
            "index sequence must be nonempty".into(),
        ));
    }
    if seq.len() > MAX_DEGREE {
        return Err(Error::InvalidInput(format!(
            "index length {} exceeds {MAX_DEGREE}",
            seq.len()
        )));
    }
    seq.iter().try_for_each(|&g| check_gen(g))
}

/// `μ2(I; w)`: coefficient of `X_I` in the Magnus image.
pub fn mu2(seq: &[u8], word: &Word) -> Result<u8> {
    check_index(seq)?;
    Ok(magnus(word, seq.len())?.coeff(seq))
}

/// Element of `F2[F]` as the set of words with coefficient 1.
type GroupRing = BTreeSet<Vec<Letter>>;

fn toggle(set: &mut GroupRing, w: Vec<Letter>) {
    if !set.remove(&w) {
        set.insert(w);
    }
}

/// `∂/∂x_j` of one reduced word, mod 2.
fn fox_word(w: &[Letter], j: u8, out: &mut GroupRing) {
    for (k, l) in w.iter().enumerate() {
        if l.gen != j {
            continue;
        }
        // ∂x/∂x = 1 leaves the prefix; ∂x⁻¹/∂x = −x⁻¹ appends x⁻¹
        let end = if l.exp > 0 { k } else { k + 1 };
        toggle(out, w[..end].to_vec());
    }
}

pub fn fox_derivative(elem: &BTreeSet<Vec<Letter>>, j: u8) -> BTreeSet<Vec<Letter>> {
    let mut out = GroupRing::new();
    for w in elem {
        fox_word(w, j, &mut out);
    }
    out
}

/// `ε(∂ⁿw/∂x_{i1}⋯∂x_{in}) mod 2`, innermost derivative `x_{in}`.
pub fn fox_mu2(seq: &[u8], word: &Word) -> Result<u8> {
    check_index(seq)?;
    let mut elem = GroupRing::new();
    elem.insert(word.letters().to_vec());
    for &j in seq.iter().rev() {
        elem = fox_derivative(&elem, j);
    }
    Ok((elem.len() % 2) as u8)
}

/// All order-preserving interleavings of `a` and `b`, with multiplicity.
pub fn proper_shuffles(a: &[u8], b: &[u8]) -> Vec<Vec<u8>> {
    if a.is_empty() {
        return vec![b.to_vec()];
    }
    if b.is_empty() {
        return vec![a.to_vec()];
    }
    let mut out = Vec::new();
    for mut t in proper_shuffles(&a[1..], b) {
        t.insert(0, a[0]);
        out.push(t);
    }
    for mut t in proper_shuffles(a, &b[1..]) {
        t.insert(0, b[0]);
        out.push(t);
    }
    out
}

/// `Σ_{H ∈ PSh(I,J)} μ2(Hi)` where `μ(Hi)` is the coefficient `μ2(H; w)`
/// of the word `w` standing for the `i`-th longitude.
pub fn shuffle_check(a: &[u8], b: &[u8], i: u8, word: &Word) -> Result<u8> {
    check_gen(i)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidInput(
            "shuffle factors must be nonempty".into(),
        ));
    }
    if a.len() + b.len() > MAX_DEGREE - 1 {
        return Err(Error::InvalidInput(format!(
            "|I| + |J| exceeds {}",
            MAX_DEGREE - 1
        )));
    }
    let series = magnus(word, a.len() + b.len())?;
    let mut acc = 0u8;
    for h in proper_shuffles(a, b) {
        acc ^= series.coeff(&h);
    }
    Ok(acc)
}

/// An ideal of `Z/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ideal {
    Zero,
    Full,
}

/// Cyclic permutations of the proper subsequences of `seq` of length ≥ 2,
/// deduplicated and sorted.
pub fn lower_indices(seq: &[u8]) -> Vec<Vec<u8>> {
    let n = seq.len();
    let mut out = BTreeSet::new();
    if n < 3 {
        return Vec::new();
    }
    for mask in 1u32..(1 << n) - 1 {
        let sub: Vec<u8> = (0..n)
            .filter(|k| mask & (1 << k) != 0)
            .map(|k| seq[k])
            .collect();
        if sub.len() < 2 {
            continue;
        }
        for r in 0..sub.len() {
            let mut c = sub[r..].to_vec();
            c.extend_from_slice(&sub[..r]);
            out.insert(c);
        }
    }
    out.into_iter().collect()
}

/// `Δ2(I)`: generated by `C(2^e, t) mod 2` for `1 ≤ t ≤ |I|`, `t < 2^e`, and
/// the lower coefficients `μ2(J)`. Every index in `lower_indices(I)` must be
/// present in `lower_mu`.
pub fn delta2(seq: &[u8], e_s: u32, lower_mu: &BTreeMap<Vec<u8>, u8>) -> Result<Ideal> {
    check_index(seq)?;
    if e_s >= 31 || seq.len() as u64 > 1u64 << e_s {
        return Err(Error::InvalidInput(format!(
            "|I| = {} exceeds 2^{e_s}",
            seq.len()
        )));
    }
    let n = 1u64 << e_s;
    let top = (seq.len() as u64).min(n - 1);
    // Lucas: C(n, t) is odd iff the bits of t lie inside those of n
    if (1..=top).any(|t| t & !n == 0) {
        return Ok(Ideal::Full);
    }
    for j in lower_indices(seq) {
        match lower_mu.get(&j) {
            Some(v) if v % 2 == 1 => return Ok(Ideal::Full),
            Some(_) => {}
            None => {
                return Err(Error::InvalidInput(format!(
                    "missing lower coefficient μ2({})",
                    monomial_string(&j)
                )))
            }
        }
    }
    Ok(Ideal::Zero)
}

/// The lower coefficients of `word` needed by `delta2`.
pub fn lower_coefficients(seq: &[u8], word: &Word) -> Result<BTreeMap<Vec<u8>, u8>> {
    check_index(seq)?;
    let series = magnus(word, seq.len())?;
    Ok(lower_indices(seq)
        .into_iter()
        .map(|j| {
            let v = series.coeff(&j);
            (j, v)
        })
        .collect())
}
