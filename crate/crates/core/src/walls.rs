//! Wall types ⟨v, a⟩ for a Mukai vector of square v², their exceptional
//! loci, saturations, and decompositions of v inside a rank-2 lattice.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::BinaryForm;
use crate::lattice::{Lattice, LatticeVector};
use crate::serde_big;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wall {
    #[serde(with = "serde_big::scalar")]
    pub v_sq: BigInt,
    #[serde(with = "serde_big::scalar")]
    pub a_sq: BigInt,
    #[serde(with = "serde_big::scalar")]
    pub av: BigInt,
    #[serde(with = "serde_big::scalar")]
    pub vma_sq: BigInt,
    #[serde(with = "serde_big::scalar")]
    pub a_vma: BigInt,
    #[serde(with = "serde_big::scalar")]
    pub disc: BigInt,
    pub saturated: bool,
    pub descriptor: ExceptionalDescriptor,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "m", rename_all = "kebab-case")]
pub enum BaseFactor {
    K3,
    K3Isogenous,
    Hilb(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalDescriptor {
    #[serde(with = "serde_big::scalar")]
    pub fiber_dim: BigInt,
    #[serde(with = "serde_big::scalar")]
    pub codim: BigInt,
    pub base_factors: Vec<BaseFactor>,
    pub hilbert_chow: bool,
    pub lagrangian_pn: bool,
}

fn superscript(n: &BigInt) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string()
        .chars()
        .map(|c| match c.to_digit(10) {
            Some(d) => DIGITS[d as usize],
            None => '⁻',
        })
        .collect()
}

impl BaseFactor {
    pub fn render(&self) -> String {
        match self {
            BaseFactor::K3 => "S".into(),
            BaseFactor::K3Isogenous => "S′".into(),
            BaseFactor::Hilb(m) => format!("S^[{m}]"),
        }
    }
}

impl ExceptionalDescriptor {
    /// Text in the style "ℙ²-bundle over S×S′".
    pub fn interpretation(&self) -> String {
        // the Hilbert-Chow divisor is birationally a ℙ¹-bundle over the incidence locus
        let dim = if self.hilbert_chow { BigInt::one() } else { self.fiber_dim.clone() };
        let fiber = format!("ℙ{}", superscript(&dim));
        if self.base_factors.is_empty() {
            return fiber;
        }
        let base: Vec<String> = self.base_factors.iter().map(|b| b.render()).collect();
        let mut s = format!("{fiber}-bundle over {}", base.join("×"));
        if self.base_factors.contains(&BaseFactor::K3Isogenous) {
            s.push_str(" (S, S′ isogenous)");
        }
        s
    }
}

fn check_v_sq(v_sq: &BigInt) -> Result<()> {
    if !v_sq.is_positive() || v_sq.is_odd() {
        return Err(Error::InvalidArgument(format!(
            "v² must be a positive even integer, got {v_sq}"
        )));
    }
    Ok(())
}

/// Factor of the base for a summand of the given square.
fn factor_for(sq: &BigInt, isotropic_isogenous: bool) -> Option<BaseFactor> {
    if sq.is_negative() {
        None
    } else if sq.is_zero() {
        Some(if isotropic_isogenous { BaseFactor::K3Isogenous } else { BaseFactor::K3 })
    } else {
        let m = (sq / 2u32 + 1u32).to_u64().expect("moderate dimension");
        Some(BaseFactor::Hilb(m))
    }
}

pub fn describe_exceptional(w: &Wall) -> ExceptionalDescriptor {
    let hilbert_chow = w.a_sq.is_zero() && w.av.is_one();
    let fiber_dim: BigInt = &w.a_vma - 1u32;
    let lagrangian_pn = w.a_sq == BigInt::from(-2) && BigInt::from(2) * &w.av == w.v_sq;
    let mut base = Vec::new();
    if hilbert_chow {
        // ℙ¹-bundle over S × S^[n−2]
        base.push(BaseFactor::K3);
        let n_minus_2 = (&w.v_sq / 2u32 - 1u32).to_u64().expect("moderate dimension");
        match n_minus_2 {
            0 => {}
            1 => base.push(BaseFactor::K3),
            m => base.push(BaseFactor::Hilb(m)),
        }
    } else {
        let iso = w.av >= BigInt::from(2);
        base.extend(factor_for(&w.a_sq, iso));
        base.extend(factor_for(&w.vma_sq, false));
        base.sort();
    }
    ExceptionalDescriptor {
        codim: fiber_dim.clone(),
        fiber_dim,
        base_factors: base,
        hilbert_chow,
        lagrangian_pn,
    }
}

impl Wall {
    pub fn new(v_sq: &BigInt, a_sq: &BigInt, av: &BigInt) -> Result<Wall> {
        check_v_sq(v_sq)?;
        if *a_sq < BigInt::from(-2) || a_sq.is_odd() {
            return Err(Error::InvalidArgument(format!("a² = {a_sq} is not an even integer ≥ −2")));
        }
        if av.is_negative() || BigInt::from(2) * av > *v_sq {
            return Err(Error::InvalidArgument(format!("(a,v) = {av} outside [0, v²/2]")));
        }
        if a_sq * v_sq >= av * av {
            return Err(Error::InvalidArgument("⟨v,a⟩ is not of signature (1,1)".into()));
        }
        let vma_sq = v_sq - BigInt::from(2) * av + a_sq;
        let a_vma = av - a_sq;
        let disc = a_sq * v_sq - av * av;
        let g = BinaryForm::new(v_sq.clone(), av.clone(), a_sq.clone())?;
        let saturated = find_index_embeddings(&g, v_sq)?
            .iter()
            .all(|e| e.index.is_one());
        let mut w = Wall {
            v_sq: v_sq.clone(),
            a_sq: a_sq.clone(),
            av: av.clone(),
            vma_sq,
            a_vma,
            disc,
            saturated,
            descriptor: ExceptionalDescriptor {
                fiber_dim: BigInt::zero(),
                codim: BigInt::zero(),
                base_factors: Vec::new(),
                hilbert_chow: false,
                lagrangian_pn: false,
            },
        };
        w.descriptor = describe_exceptional(&w);
        Ok(w)
    }

    /// The lattice ⟨v, a⟩ in the basis (v, a).
    pub fn lattice(&self) -> BinaryForm {
        BinaryForm::new(self.v_sq.clone(), self.av.clone(), self.a_sq.clone()).expect("even")
    }
}

/// All wall types for the given v², sorted by ((a,a), (a,v)).
pub fn enumerate_wall_types(v_sq: &BigInt) -> Result<Vec<Wall>> {
    check_v_sq(v_sq)?;
    let half = v_sq / 2u32;
    let mut out = Vec::new();
    let mut a_sq = BigInt::from(-2);
    // a² · v² < (a,v)² ≤ (v²/2)² bounds a²
    while &a_sq * v_sq < &half * &half {
        let mut av = BigInt::zero();
        while av <= half {
            if &a_sq * v_sq < &av * &av {
                out.push(Wall::new(v_sq, &a_sq, &av)?);
            }
            av += 1;
        }
        a_sq += 2;
    }
    Ok(out)
}

/// Markdown table with the columns (a,a), (a,v), (v−a,v−a), Discriminant, Interpretation.
pub fn render_markdown(walls: &[Wall]) -> String {
    let mut s = String::from("| (a,a) | (a,v) | (v−a,v−a) | Discriminant | Interpretation |\n");
    s.push_str("|---|---|---|---|---|\n");
    for w in walls {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} |",
            w.a_sq,
            w.av,
            w.vma_sq,
            w.disc,
            w.descriptor.interpretation()
        );
    }
    s
}

pub fn render_csv(walls: &[Wall]) -> String {
    let mut s = String::from("a_sq,av,vma_sq,a_vma,disc,saturated,fiber_dim,interpretation\n");
    for w in walls {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},\"{}\"",
            w.a_sq,
            w.av,
            w.vma_sq,
            w.a_vma,
            w.disc,
            w.saturated,
            w.descriptor.fiber_dim,
            w.descriptor.interpretation()
        );
    }
    s
}

/// Flip a into the half-space (a,v) ≥ 0, using h to break the tie at (a,v) = 0.
pub fn normalize(
    lattice: &Lattice,
    a: &LatticeVector,
    v: &LatticeVector,
    h: &LatticeVector,
) -> Result<LatticeVector> {
    let vv = lattice.square(v)?;
    let aa = lattice.square(a)?;
    let av = lattice.pair(a, v)?;
    if aa < BigInt::from(-2) || BigInt::from(2) * av.abs() > vv {
        return Err(Error::InvalidArgument(
            "a does not satisfy a² ≥ −2 and |(a,v)| ≤ v²/2".into(),
        ));
    }
    let flip = if av.is_zero() {
        let ha = lattice.pair(h, a)?;
        if ha.is_zero() {
            return Err(Error::InvalidArgument("(h,a) = 0: h does not separate".into()));
        }
        ha.is_negative()
    } else {
        av.is_negative()
    };
    Ok(if flip { a.neg() } else { a.clone() })
}

/// G = (2(n−1) n−1; n−1 −2), the wall lattice of a Lagrangian ℙⁿ.
pub fn lagrangian_lattice(n: u64) -> Result<BinaryForm> {
    if n < 2 {
        return Err(Error::InvalidN(n));
    }
    let m = BigInt::from(n - 1);
    BinaryForm::new(BigInt::from(2) * &m, m, BigInt::from(-2))
}

/// Expected codimension N((v,a) − 1) of the stratum of v = N·a + b.
pub fn isotropic_stratum_codim(mult: &BigInt, va: &BigInt) -> BigInt {
    mult * (va - 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexEmbedding {
    pub overlattice: BinaryForm,
    #[serde(with = "serde_big::scalar")]
    pub index: BigInt,
    /// Coordinates of the second generator of G in the basis (v, w) of the overlattice.
    #[serde(with = "serde_big::vec")]
    pub a_image: Vec<BigInt>,
}

/// Overlattices H ⊇ G = ⟨v, a⟩ in which v keeps its square and is the first
/// basis vector, with (v, w) normalized into [0, v²/2]; includes index 1.
pub fn find_index_embeddings(g: &BinaryForm, v_sq: &BigInt) -> Result<Vec<IndexEmbedding>> {
    if g.a != *v_sq {
        return Err(Error::InvalidArgument("first basis vector of G must be v".into()));
    }
    check_v_sq(v_sq)?;
    let disc = g.disc().abs();
    if disc.is_zero() {
        return Err(Error::Degenerate);
    }
    let (vv, av, aa) = (&g.a, &g.b, &g.c);
    let half = v_sq / 2u32;
    let mut out = Vec::new();
    let mut i = BigInt::one();
    while &i * &i <= disc {
        if disc.is_multiple_of(&(&i * &i)) {
            let mut k = BigInt::zero();
            while k < i {
                // w = (a − k v) / i
                let vw_num = av - &k * vv;
                let ww_num = aa - BigInt::from(2) * &k * av + &k * &k * vv;
                let ii = &i * &i;
                if vw_num.is_multiple_of(&i) && ww_num.is_multiple_of(&ii) {
                    let vw = &vw_num / &i;
                    let ww = &ww_num / &ii;
                    if ww.is_even() {
                        // a = k v + i w; replace w by ε(w + j v)
                        let mut found = None;
                        for eps in [1i32, -1] {
                            let base = if eps == 1 { vw.clone() } else { -&vw };
                            // ε(v,w) + j v² ∈ [0, v²/2]
                            let j = (-&base).div_ceil(vv);
                            let val = &base + &j * vv;
                            if val <= half {
                                found = Some((eps, j * eps, val));
                                break;
                            }
                        }
                        let (eps, j, vw2) = found.expect("some normalization exists");
                        // w' = ε(w + j' v) with j' = ε·j … expressed via a = (k − i j') v + i ε w'
                        let jp = &j * eps;
                        let w2_sq = &ww + BigInt::from(2) * &jp * &vw + &jp * &jp * vv;
                        let over = BinaryForm::new(vv.clone(), vw2, w2_sq)?;
                        let a_image = vec![&k - &i * &jp, &i * eps];
                        out.push(IndexEmbedding { overlattice: over, index: i.clone(), a_image });
                    }
                }
                k += 1;
            }
        }
        i += 1;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionKind {
    HilbertChow,
    Irreducible,
    NonBasic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObstructionRule {
    NotEffective,
    NegativeOnIrreducibleSpherical,
    ReducibleSpherical,
    NonPrimitiveIsotropic,
    SquareBelowMinusTwo,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    pub rule: ObstructionRule,
    pub summand: LatticeVector,
    pub witness: Option<LatticeVector>,
    #[serde(with = "serde_big::scalar")]
    pub pairing: BigInt,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub kind: DecompositionKind,
    pub summands: [LatticeVector; 2],
    pub distinguished: bool,
    pub obstruction: Option<Obstruction>,
}

/// Effective classes of H inside a coordinate box: the monoid generated by the
/// declared effective spherical class orthogonal to v and the classes D with
/// D² ≥ −2 and (v, D) > 0.
struct Monoid<'a> {
    h: &'a BinaryForm,
    bound: i64,
    s_eff: Option<(i64, i64)>,
    gens: Vec<(i64, i64)>,
    memo: HashMap<(i64, i64), bool>,
}

impl<'a> Monoid<'a> {
    fn new(h: &'a BinaryForm, bound: i64, s_eff: Option<(i64, i64)>) -> Self {
        let mut gens: Vec<(i64, i64)> = Vec::new();
        for x in -bound..=bound {
            for y in -bound..=bound {
                let lv = Self::level_of(h, (x, y));
                if lv.is_positive() && h.eval(&x.into(), &y.into()) >= BigInt::from(-2) {
                    gens.push((x, y));
                }
            }
        }
        if let Some(s) = s_eff {
            gens.push(s);
        }
        gens.sort_by_key(|&g| Self::level_of(h, g));
        Monoid { h, bound, s_eff, gens, memo: HashMap::new() }
    }

    fn level_of(h: &BinaryForm, p: (i64, i64)) -> BigInt {
        &h.a * p.0 + &h.b * p.1
    }

    fn level(&self, p: (i64, i64)) -> BigInt {
        Self::level_of(self.h, p)
    }

    fn in_box(&self, p: (i64, i64)) -> bool {
        p.0.abs() <= self.bound && p.1.abs() <= self.bound
    }

    fn effective(&mut self, p: (i64, i64)) -> bool {
        if p == (0, 0) {
            return true;
        }
        if !self.in_box(p) {
            return false;
        }
        let lv = self.level(p);
        if lv.is_negative() {
            return false;
        }
        if lv.is_zero() {
            return match self.s_eff {
                Some(s) => {
                    let k = if s.0 != 0 { p.0 / s.0 } else { p.1 / s.1 };
                    k > 0 && (k * s.0, k * s.1) == p
                }
                None => false,
            };
        }
        if let Some(&r) = self.memo.get(&p) {
            return r;
        }
        // seed false to cut cycles through level-0 generators
        self.memo.insert(p, false);
        let mut res = false;
        let gens = self.gens.clone();
        for g in gens {
            if self.level(g) > lv {
                break;
            }
            let rest = (p.0 - g.0, p.1 - g.1);
            if rest == (0, 0) || self.effective(rest) {
                res = true;
                break;
            }
        }
        self.memo.insert(p, res);
        res
    }

    /// Whether p decomposes as a generator plus a nonzero effective class.
    fn reducible(&mut self, p: (i64, i64)) -> bool {
        let lv = self.level(p);
        let gens = self.gens.clone();
        for g in gens {
            if self.level(g) > lv {
                break;
            }
            let rest = (p.0 - g.0, p.1 - g.1);
            if rest != (0, 0) && self.effective(rest) {
                return true;
            }
        }
        false
    }
}

fn to_pair(v: &LatticeVector) -> Result<(i64, i64)> {
    let conv = |x: &BigInt| {
        x.to_i64()
            .ok_or_else(|| Error::InvalidArgument("summand coordinates too large".into()))
    };
    Ok((conv(&v.coords[0])?, conv(&v.coords[1])?))
}

fn lv(p: (i64, i64)) -> LatticeVector {
    LatticeVector::from_i64(&[p.0, p.1])
}

/// Classify v = a + (v − a) in H (basis (v, a0)); `summand` holds the
/// coordinates of a. `effective_sign` selects which generator of v⊥ ∩ H is
/// effective when that generator is spherical.
pub fn analyze_decomposition(
    h: &BinaryForm,
    summand: &LatticeVector,
    effective_sign: i32,
    search_box: u64,
) -> Result<DecompositionReport> {
    let sig = h.signature()?;
    if sig != (1, 1) {
        return Err(Error::NotIndefinite(sig.0, sig.1));
    }
    if summand.len() != 2 {
        return Err(Error::RankMismatch { expected: 2, got: summand.len() });
    }
    let a = to_pair(summand)?;
    let b = (1 - a.0, -a.1);
    let pair = |p: (i64, i64), q: (i64, i64)| {
        h.pair((&p.0.into(), &p.1.into()), (&q.0.into(), &q.1.into()))
    };
    let sq = |p: (i64, i64)| pair(p, p);

    // generator of v⊥ ∩ H: ((v,a0), −v²)/gcd
    let g = h.b.gcd(&h.a);
    let perp = (
        (&h.b / &g).to_i64().ok_or(Error::Unsupported("large lattice".into()))?,
        (-&h.a / &g).to_i64().ok_or(Error::Unsupported("large lattice".into()))?,
    );
    let perp = if effective_sign < 0 { (-perp.0, -perp.1) } else { perp };
    let s_eff = (sq(perp) == BigInt::from(-2)).then_some(perp);
    let bound = search_box.max(a.0.unsigned_abs()).max(a.1.unsigned_abs()).max(b.0.unsigned_abs()) as i64;
    let bound = bound.max(b.1.abs());
    let mut mono = Monoid::new(h, bound, s_eff);

    let summands = [lv(a), lv(b)];
    let det_ab = a.0 * b.1 - a.1 * b.0;
    let distinguished = det_ab.abs() == 1;
    let hc = |p: (i64, i64)| sq(p).is_zero() && mono_level(h, p) == BigInt::one();
    if hc(a) || hc(b) {
        return Ok(DecompositionReport {
            kind: DecompositionKind::HilbertChow,
            summands,
            distinguished,
            obstruction: None,
        });
    }
    let both = [a, b];
    let obstruct = |rule, s: (i64, i64), w: Option<(i64, i64)>, pairing: BigInt, text: String| {
        Some(Obstruction { rule, summand: lv(s), witness: w.map(lv), pairing, text })
    };
    let mut obstruction = None;
    for &s in &both {
        if obstruction.is_none() && !mono.effective(s) {
            obstruction = obstruct(
                ObstructionRule::NotEffective,
                s,
                None,
                mono_level(h, s),
                "summand is not effective".into(),
            );
        }
    }
    if obstruction.is_none() {
        // irreducible spherical classes in the box, ordered by level then coordinates
        let mut spherical: Vec<(i64, i64)> = Vec::new();
        for x in -bound..=bound {
            for y in -bound..=bound {
                let p = (x, y);
                if sq(p) == BigInt::from(-2) && mono.effective(p) {
                    spherical.push(p);
                }
            }
        }
        spherical.sort_by_key(|&p| (mono_level(h, p), p));
        let mut irreducible = Vec::new();
        for p in spherical {
            if !mono.reducible(p) {
                irreducible.push(p);
            }
        }
        'rule1: for &s in &both {
            for &t in &irreducible {
                if t == s {
                    continue;
                }
                let pr = pair(t, s);
                if pr.is_negative() {
                    obstruction = obstruct(
                        ObstructionRule::NegativeOnIrreducibleSpherical,
                        s,
                        Some(t),
                        pr.clone(),
                        format!("pairs negatively with irreducible spherical class: ({t:?}, {s:?}) = {pr}"),
                    );
                    break 'rule1;
                }
            }
        }
        if obstruction.is_none() {
            for &s in &both {
                if sq(s) == BigInt::from(-2) && !irreducible.contains(&s) {
                    obstruction = obstruct(
                        ObstructionRule::ReducibleSpherical,
                        s,
                        None,
                        sq(s),
                        "spherical but not irreducible".into(),
                    );
                    break;
                }
            }
        }
    }
    if obstruction.is_none() {
        for &s in &both {
            let c = s.0.gcd(&s.1);
            if sq(s).is_zero() && c > 1 {
                obstruction = obstruct(
                    ObstructionRule::NonPrimitiveIsotropic,
                    s,
                    Some((s.0 / c, s.1 / c)),
                    BigInt::from(c),
                    format!("isotropic but not primitive (multiplicity {c})"),
                );
                break;
            }
        }
    }
    if obstruction.is_none() {
        for &s in &both {
            if sq(s) < BigInt::from(-2) {
                obstruction = obstruct(
                    ObstructionRule::SquareBelowMinusTwo,
                    s,
                    None,
                    sq(s),
                    "square below −2".into(),
                );
                break;
            }
        }
    }
    let kind = if obstruction.is_some() {
        DecompositionKind::NonBasic
    } else {
        DecompositionKind::Irreducible
    };
    Ok(DecompositionReport { kind, summands, distinguished, obstruction })
}

fn mono_level(h: &BinaryForm, p: (i64, i64)) -> BigInt {
    &h.a * p.0 + &h.b * p.1
}
