//! Unipotent groups `N_n(F2)`, the representation `ρ_I`, and the Galois
//! action of `τ1, τ2, τ3` on the radicals generating `K`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::biquad::BiquadInt;
use crate::magnus::{self, Word};
use crate::symbol4::KCertificate;
use crate::{Error, Result};

/// Upper unitriangular matrix over `F2`; row `i` is a bitmask of columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnipotentMatrix {
    n: usize,
    rows: Vec<u16>,
}

impl UnipotentMatrix {
    pub fn identity(n: usize) -> Self {
        assert!((1..=16).contains(&n), "dimension {n} outside 1..=16");
        UnipotentMatrix {
            n,
            rows: (0..n).map(|i| 1u16 << i).collect(),
        }
    }

    /// `I + E_ij`, 1-based, `i < j`.
    pub fn elementary(n: usize, i: usize, j: usize) -> Self {
        assert!(
            1 <= i && i < j && j <= n,
            "E_{i}{j} is not strictly upper in dimension {n}"
        );
        let mut m = Self::identity(n);
        m.rows[i - 1] |= 1 << (j - 1);
        m
    }

    /// From the strictly upper entries `(j, k) ↦ v`, 1-based.
    pub fn from_upper(n: usize, entry: impl Fn(usize, usize) -> u8) -> Self {
        let mut m = Self::identity(n);
        for j in 1..=n {
            for k in j + 1..=n {
                if entry(j, k) % 2 == 1 {
                    m.rows[j - 1] |= 1 << (k - 1);
                }
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, j: usize, k: usize) -> u8 {
        ((self.rows[j - 1] >> (k - 1)) & 1) as u8
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    /// Positions `(j, k)` of the nonzero strictly upper entries.
    pub fn off_diagonal(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 1..=self.n {
            for k in j + 1..=self.n {
                if self.entry(j, k) == 1 {
                    out.push((j, k));
                }
            }
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "dimension mismatch");
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                (0..self.n)
                    .filter(|k| r >> k & 1 == 1)
                    .fold(0u16, |acc, k| acc ^ o.rows[k])
            })
            .collect();
        UnipotentMatrix { n: self.n, rows }
    }

    /// `Σ_k (A − I)^k`, finite since `A − I` is nilpotent.
    pub fn inverse(&self) -> Self {
        let id = Self::identity(self.n);
        let nil = UnipotentMatrix {
            n: self.n,
            rows: self.rows.iter().zip(&id.rows).map(|(a, b)| a ^ b).collect(),
        };
        let mut acc = id.clone();
        let mut p = id;
        for _ in 1..self.n {
            p = nil_mul(&p, &nil);
            acc.rows.iter_mut().zip(&p.rows).for_each(|(a, b)| *a ^= b);
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::identity(self.n), |acc, _| acc.mul(self))
    }

    /// Whether the unitriangular shape holds.
    pub fn is_valid(&self) -> bool {
        self.rows.len() == self.n
            && self.rows.iter().enumerate().all(|(i, &r)| {
                let below = (1u32 << i) - 1;
                r >> i & 1 == 1 && (r as u32) & below == 0 && (r as u32) >> self.n == 0
            })
    }
}

fn nil_mul(a: &UnipotentMatrix, b: &UnipotentMatrix) -> UnipotentMatrix {
    let rows = a
        .rows
        .iter()
        .map(|&r| {
            (0..a.n)
                .filter(|k| r >> k & 1 == 1)
                .fold(0u16, |acc, k| acc ^ b.rows[k])
        })
        .collect();
    UnipotentMatrix { n: a.n, rows }
}

impl fmt::Display for UnipotentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 1..=self.n {
            let row: Vec<String> = (1..=self.n).map(|k| self.entry(j, k).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// `ρ_I(w)` in `N_{|I|+1}(F2)`, entry `(j, k) = μ2(i_j ⋯ i_{k−1}; w)`.
pub fn rho_i(word: &Word, seq: &[u8]) -> Result<UnipotentMatrix> {
    if seq.is_empty() || seq.len() > magnus::MAX_DEGREE {
        return Err(Error::InvalidInput(format!(
            "index length {} outside 1..={}",
            seq.len(),
            magnus::MAX_DEGREE
        )));
    }
    let series = magnus::magnus(word, seq.len())?;
    if seq.iter().any(|&g| g == 0 || g > magnus::MAX_GENERATORS) {
        return Err(Error::InvalidInput(format!(
            "index {seq:?} outside 1..={}",
            magnus::MAX_GENERATORS
        )));
    }
    Ok(UnipotentMatrix::from_upper(seq.len() + 1, |j, k| {
        series.coeff(&seq[j - 1..k - 1])
    }))
}

/// Breadth-first closure of `gens` under right multiplication.
pub fn closure<T: Clone + Eq + Hash>(id: T, gens: &[T], mul: impl Fn(&T, &T) -> T) -> Vec<T> {
    let mut seen = HashSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = mul(&x, g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
        order.push(x);
    }
    order
}

/// Evaluate a word under `x_i ↦ gens[i-1]`; generators past `gens.len()`
/// map to the identity.
pub fn eval_word<T: Clone>(
    word: &Word,
    id: &T,
    gens: &[T],
    mul: impl Fn(&T, &T) -> T,
    inv: impl Fn(&T) -> T,
) -> T {
    let mut acc = id.clone();
    for l in word.letters() {
        if let Some(g) = gens.get(l.gen as usize - 1) {
            acc = if l.exp > 0 {
                mul(&acc, g)
            } else {
                mul(&acc, &inv(g))
            };
        }
    }
    acc
}

/// `g1 = I + E12`, `g2 = I + E23`, `g3 = I + E34`.
pub fn n4_generators() -> [UnipotentMatrix; 3] {
    [
        UnipotentMatrix::elementary(4, 1, 2),
        UnipotentMatrix::elementary(4, 2, 3),
        UnipotentMatrix::elementary(4, 3, 4),
    ]
}

fn wd(s: &str) -> Word {
    Word::parse(s).expect("static word")
}

/// The eight defining relators of `N4(F2)` in `x1, x2, x3`.
pub fn n4_relators() -> Vec<(&'static str, Word)> {
    let r = |s: &str, e: u32| wd(s).pow(e);
    let long = wd("x1 x2 x3 x2").pow(2).mul(&wd("x3")).pow(2);
    vec![
        ("x1^2", r("x1", 2)),
        ("x2^2", r("x2", 2)),
        ("x3^2", r("x3", 2)),
        ("(x1x3)^2", r("x1 x3", 2)),
        ("(x1x2)^4", r("x1 x2", 4)),
        ("(x2x3)^4", r("x2 x3", 4)),
        ("(x1x2x3)^4", r("x1 x2 x3", 4)),
        ("((x1x2x3x2)^2x3)^2", long),
    ]
}

/// Relators generating the kernel of `x_i ↦ g_i (i ≤ 3)`, `x4 ↦ 1`.
pub fn kernel_relators() -> Vec<(&'static str, Word)> {
    let mut v = n4_relators();
    v.push(("x4", wd("x4")));
    v
}

/// `(x1x2x3x2)²`, mapped to the corner element of `N4(F2)`.
pub fn corner_word() -> Word {
    wd("x1 x2 x3 x2").pow(2)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresentationReport {
    pub relations: Vec<(String, bool)>,
    pub order: usize,
    pub corner: Vec<(usize, usize)>,
}

impl PresentationReport {
    pub fn passed(&self) -> bool {
        self.relations.iter().all(|r| r.1) && self.order == 64 && self.corner == [(1, 4)]
    }
}

impl fmt::Display for PresentationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ok = self.relations.iter().filter(|r| r.1).count();
        write!(
            f,
            "{ok}/{} relations OK, order {}",
            self.relations.len(),
            self.order
        )?;
        for (name, good) in &self.relations {
            if !good {
                write!(f, "\n  failed: {name}")?;
            }
        }
        if self.corner != [(1, 4)] {
            write!(
                f,
                "\n  (g1g2g3g2)^2 off-diagonal entries at {:?}",
                self.corner
            )?;
        }
        Ok(())
    }
}

/// Checks the eight relations on `g1, g2, g3`, the order of the group they
/// generate, and the shape of `(g1g2g3g2)²`.
pub fn verify_n4_presentation() -> PresentationReport {
    let gens = n4_generators();
    let id = UnipotentMatrix::identity(4);
    let mul = |a: &UnipotentMatrix, b: &UnipotentMatrix| a.mul(b);
    let inv = |a: &UnipotentMatrix| a.inverse();
    let relations = n4_relators()
        .into_iter()
        .map(|(name, w)| {
            (
                name.to_string(),
                eval_word(&w, &id, &gens, mul, inv).is_identity(),
            )
        })
        .collect();
    let order = closure(id.clone(), &gens, mul).len();
    let corner = eval_word(&corner_word(), &id, &gens, mul, inv).off_diagonal();
    PresentationReport {
        relations,
        order,
        corner,
    }
}

/// Order of the group generated by `I + E_{i,i+1}` in dimension `n`.
pub fn superdiagonal_closure_order(n: usize) -> usize {
    let gens: Vec<_> = (1..n)
        .map(|i| UnipotentMatrix::elementary(n, i, i + 1))
        .collect();
    closure(UnipotentMatrix::identity(n), &gens, |a, b| a.mul(b)).len()
}

/// Base symbols `√p1, √p2, √p3, √θ1, √θ2, √θ3, √θ4`; the radicals of `K`
/// are monomials in them.
const SYMBOLS: [&str; 7] = ["√p1", "√p2", "√p3", "√θ1", "√θ2", "√θ3", "√θ4"];

/// The nine radicals in table order, as bitmasks over `SYMBOLS`.
pub const RADICALS: [&str; 9] = [
    "√p1",
    "√p2",
    "√p3",
    "√θ1θ2",
    "√θ1θ3",
    "√θ1",
    "√θ2",
    "√θ3",
    "√θ4",
];

/// Bitmask of a radical label such as `√θ1θ3` or `√p2`.
pub fn radical_mask(label: &str) -> Result<u8> {
    let body = label
        .strip_prefix('√')
        .ok_or_else(|| Error::InvalidInput(format!("radical {label:?} lacks √")))?;
    if let Some(d) = body.strip_prefix('p') {
        return match d {
            "1" => Ok(1),
            "2" => Ok(2),
            "3" => Ok(4),
            _ => Err(Error::InvalidInput(format!("radical {label:?}"))),
        };
    }
    let mut mask = 0u8;
    for part in body.split('θ').skip(1) {
        match part.parse::<u8>() {
            Ok(i @ 1..=4) => mask |= 1 << (2 + i),
            _ => return Err(Error::InvalidInput(format!("radical {label:?}"))),
        }
    }
    if mask == 0 || !body.starts_with('θ') {
        return Err(Error::InvalidInput(format!("radical {label:?}")));
    }
    Ok(mask)
}

pub fn mask_label(mask: u8) -> String {
    if mask & 7 != 0 {
        return (0..3)
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| SYMBOLS[k])
            .collect::<Vec<_>>()
            .join("·");
    }
    let idx: String = (3..7)
        .filter(|k| mask >> k & 1 == 1)
        .map(|k| format!("θ{}", k - 2))
        .collect();
    format!("√{idx}")
}

/// A field automorphism of `K` as a signed permutation of the base symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RadicalAction {
    /// `image[s] = (sign, t)`: symbol `s` goes to `sign · symbol t`.
    image: [(i8, u8); 7],
}

impl RadicalAction {
    pub fn identity() -> Self {
        let mut image = [(1, 0); 7];
        for (s, e) in image.iter_mut().enumerate() {
            *e = (1, s as u8);
        }
        RadicalAction { image }
    }

    /// Builds the action from its values on the nine radicals, given as
    /// `(sign, label)`. The images of `√θ1θ2` and `√θ1θ3` must agree with
    /// those forced by the single radicals.
    pub fn from_table(table: &[(i8, &str); 9]) -> Result<Self> {
        let mut image = [(0i8, 0u8); 7];
        let single = |(sgn, label): (i8, &str)| -> Result<(i8, u8)> {
            let m = radical_mask(label)?;
            if m.count_ones() != 1 {
                return Err(Error::InvalidInput(format!("{label} is not a base symbol")));
            }
            Ok((sgn, m.trailing_zeros() as u8))
        };
        for k in 0..3 {
            image[k] = single(table[k])?;
        }
        for k in 0..4 {
            image[3 + k] = single(table[5 + k])?;
        }
        let mut targets: Vec<u8> = image.iter().map(|e| e.1).collect();
        targets.sort_unstable();
        if targets != [0, 1, 2, 3, 4, 5, 6] {
            return Err(Error::InvalidInput(format!(
                "table {table:?} does not permute the symbols"
            )));
        }
        let act = RadicalAction { image };
        for k in [3, 4] {
            let expect = (table[k].0, radical_mask(table[k].1)?);
            let got = act.apply(radical_mask(RADICALS[k])?);
            if got != expect {
                return Err(Error::InvalidInput(format!(
                    "{} ↦ {}{} in the table but the single radicals force {}{}",
                    RADICALS[k],
                    if expect.0 < 0 { "−" } else { "" },
                    mask_label(expect.1),
                    if got.0 < 0 { "−" } else { "" },
                    mask_label(got.1)
                )));
            }
        }
        Ok(act)
    }

    /// Image of the monomial `mask`.
    pub fn apply(&self, mask: u8) -> (i8, u8) {
        let mut sign = 1;
        let mut out = 0;
        for s in 0..7 {
            if mask >> s & 1 == 1 {
                let (sg, t) = self.image[s];
                sign *= sg;
                out |= 1 << t;
            }
        }
        (sign, out)
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &Self) -> Self {
        let mut image = [(0, 0); 7];
        for (s, e) in image.iter_mut().enumerate() {
            let (s1, t1) = o.image[s];
            let (s2, t2) = self.image[t1 as usize];
            *e = (s1 * s2, t2);
        }
        RadicalAction { image }
    }

    pub fn inverse(&self) -> Self {
        let mut image = [(0, 0); 7];
        for (s, &(sg, t)) in self.image.iter().enumerate() {
            image[t as usize] = (sg, s as u8);
        }
        RadicalAction { image }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Sign on `√p_k`, provided the action fixes each `√p_k` up to sign.
    pub fn p_sign(&self, k: usize) -> Option<i8> {
        let (sg, t) = self.image[k];
        (t as usize == k).then_some(sg)
    }

    /// Index permutation induced on `θ1..θ4` (0-based).
    pub fn theta_permutation(&self) -> [usize; 4] {
        let mut p = [0; 4];
        for (i, e) in p.iter_mut().enumerate() {
            *e = self.image[3 + i].1 as usize - 3;
        }
        p
    }

    /// Images of the nine radicals as `(sign, label)`.
    pub fn table(&self) -> Vec<(i8, String)> {
        RADICALS
            .iter()
            .map(|r| {
                let (s, m) = self.apply(radical_mask(r).expect("static label"));
                (s, mask_label(m))
            })
            .collect()
    }
}

/// `τ1, τ2, τ3` on `(√p1, √p2, √p3, √θ1θ2, √θ1θ3, √θ1, √θ2, √θ3, √θ4)`.
pub fn tau_tables() -> [[(i8, &'static str); 9]; 3] {
    [
        [
            (-1, "√p1"),
            (1, "√p2"),
            (1, "√p3"),
            (1, "√θ3θ4"),
            (1, "√θ1θ3"),
            (1, "√θ3"),
            (1, "√θ4"),
            (1, "√θ1"),
            (1, "√θ2"),
        ],
        [
            (1, "√p1"),
            (-1, "√p2"),
            (1, "√p3"),
            (-1, "√θ1θ2"),
            (-1, "√θ1θ3"),
            (-1, "√θ1"),
            (1, "√θ2"),
            (1, "√θ3"),
            (1, "√θ4"),
        ],
        [
            (1, "√p1"),
            (1, "√p2"),
            (-1, "√p3"),
            (1, "√θ1θ2"),
            (1, "√θ2θ4"),
            (1, "√θ2"),
            (1, "√θ1"),
            (1, "√θ4"),
            (1, "√θ3"),
        ],
    ]
}

pub fn tau_actions() -> Result<[RadicalAction; 3]> {
    let t = tau_tables();
    Ok([
        RadicalAction::from_table(&t[0])?,
        RadicalAction::from_table(&t[1])?,
        RadicalAction::from_table(&t[2])?,
    ])
}

/// Conjugate of `x ∈ Q(√p1, √p3)` under the given signs on `√p1`, `√p3`.
fn conjugate13(x: &BiquadInt, s1: i8, s3: i8) -> BiquadInt {
    let mut y = x.clone();
    if s1 < 0 {
        y.c[1] = -&y.c[1];
    }
    if s3 < 0 {
        y.c[2] = -&y.c[2];
    }
    if s1 * s3 < 0 {
        y.c[3] = -&y.c[3];
    }
    y
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct TauReport {
    pub relations: Vec<(String, bool)>,
    pub consistency: Vec<String>,
    pub order: usize,
    pub paired_order: usize,
    pub corner_fixes_f: bool,
    pub corner_negates_theta1: bool,
}

impl TauReport {
    pub fn passed(&self) -> bool {
        self.relations.iter().all(|r| r.1)
            && self.consistency.is_empty()
            && self.order == 64
            && self.paired_order == 64
            && self.corner_fixes_f
            && self.corner_negates_theta1
    }
}

impl fmt::Display for TauReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ok = self.relations.iter().filter(|r| r.1).count();
        write!(
            f,
            "{ok}/{} relations OK, order {}, paired order {}",
            self.relations.len(),
            self.order,
            self.paired_order
        )?;
        for (name, good) in &self.relations {
            if !good {
                write!(f, "\n  failed: {name}")?;
            }
        }
        for c in &self.consistency {
            write!(f, "\n  inconsistent: {c}")?;
        }
        if !self.corner_fixes_f {
            write!(f, "\n  (τ1τ2τ3τ2)² moves a generator of F")?;
        }
        if !self.corner_negates_theta1 {
            write!(f, "\n  (τ1τ2τ3τ2)² does not negate √θ1")?;
        }
        Ok(())
    }
}

/// Checks the `τ` tables against the certificate's generators (each `τ`
/// permutes `θ1..θ4` as its signs on `√p1, √p3` dictate, and its sign on
/// `√θ1√θ2√θ3√θ4 = h√p2` matches its sign on `√p2`), the eight relations,
/// the isomorphism `τ_i ↦ g_i`, and the action of `(τ1τ2τ3τ2)²`.
pub fn verify_tau_action(cert: &KCertificate) -> Result<TauReport> {
    let taus = tau_actions()?;
    let gens = cert.splitting_generators();
    if gens.len() != 4 {
        return Err(Error::InvalidInput(format!(
            "{} generators, expected 4",
            gens.len()
        )));
    }
    let mut rep = TauReport::default();
    let all_r = 0b111_1000u8;
    for (i, t) in taus.iter().enumerate() {
        let (Some(s1), Some(s2), Some(s3)) = (t.p_sign(0), t.p_sign(1), t.p_sign(2)) else {
            rep.consistency.push(format!("τ{} moves some √p", i + 1));
            continue;
        };
        let perm = t.theta_permutation();
        for (k, &pk) in perm.iter().enumerate() {
            if conjugate13(&gens[k], s1, s3) != gens[pk] {
                rep.consistency
                    .push(format!("τ{}(θ{}) ≠ θ{}", i + 1, k + 1, pk + 1));
            }
        }
        if t.apply(all_r).0 != s2 {
            rep.consistency
                .push(format!("τ{} on √θ1√θ2√θ3√θ4 vs √p2", i + 1));
        }
    }
    let id = RadicalAction::identity();
    let tmul = |a: &RadicalAction, b: &RadicalAction| a.compose(b);
    let tinv = |a: &RadicalAction| a.inverse();
    let ginv = |a: &UnipotentMatrix| a.inverse();
    let gmul = |a: &UnipotentMatrix, b: &UnipotentMatrix| a.mul(b);
    let gs = n4_generators();
    let gid = UnipotentMatrix::identity(4);
    for (name, w) in n4_relators() {
        let tau_ok = eval_word(&w, &id, &taus, tmul, tinv).is_identity();
        let g_ok = eval_word(&w, &gid, &gs, gmul, ginv).is_identity();
        rep.relations.push((name.replace('x', "τ"), tau_ok && g_ok));
    }
    rep.order = closure(id, &taus, tmul).len();
    let pairs: Vec<_> = taus.iter().cloned().zip(gs.iter().cloned()).collect();
    rep.paired_order = closure((id, gid), &pairs, |a, b| (a.0.compose(&b.0), a.1.mul(&b.1))).len();
    let c = eval_word(&corner_word(), &id, &taus, tmul, tinv);
    rep.corner_fixes_f = RADICALS[..5].iter().all(|r| {
        let m = radical_mask(r).expect("static label");
        c.apply(m) == (1, m)
    });
    let m1 = radical_mask("√θ1")?;
    rep.corner_negates_theta1 = c.apply(m1) == (-1, m1);
    Ok(rep)
}
