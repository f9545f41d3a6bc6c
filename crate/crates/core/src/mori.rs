//! Walls, Mori cone and ample cone of S^[n] for a K3 surface S with Pic(S) = ℤf.
//!
//! Mukai lattice coordinates are (e₁, f₁, f) with Gram U ⊕ ⟨f²⟩,
//! v = e₁ + (n−1)f₁ and δ = e₁ − (n−1)f₁. Divisors and curve rays are written
//! s·f − t·δ and stored as the pair (s, t).

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{cmp_frac, exact_sqrt, isqrt};
use crate::error::{Error, Result};
use crate::lattice::{DualVector, Lattice, LatticeVector};
use crate::pell::{solutions_near_crossing, square_solutions};
use crate::serde_big;
use crate::surd::surd_cf;

/// C = −2(n−1)²(n+3), the lower bound for squares of wall rays.
pub fn bound_window(n: u64) -> BigInt {
    let m = BigInt::from(n) - 1;
    BigInt::from(-2) * &m * &m * (BigInt::from(n) + 3)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicardSetup {
    pub n: u64,
    #[serde(with = "serde_big::scalar")]
    pub f_sq: BigInt,
}

/// One admissible pair ((a,v), (a,a)) and the Pell constant c = k² − 2(n−1)(a,a).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallCondition {
    pub k: BigInt,
    pub a_sq: BigInt,
    pub c: BigInt,
}

impl PicardSetup {
    pub fn new(n: u64, f_sq: BigInt) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidN(n));
        }
        if f_sq < BigInt::from(2) || f_sq.is_odd() {
            return Err(Error::InvalidArgument(format!(
                "f² must be an even integer ≥ 2, got {f_sq}"
            )));
        }
        Ok(PicardSetup { n, f_sq })
    }

    pub fn from_i64(n: u64, f_sq: i64) -> Result<Self> {
        Self::new(n, BigInt::from(f_sq))
    }

    pub fn m(&self) -> BigInt {
        BigInt::from(self.n - 1)
    }

    pub fn two_m(&self) -> BigInt {
        BigInt::from(2 * (self.n - 1))
    }

    /// D = 2(n−1)f², the discriminant of the Pell equations u² − Dγ² = c.
    pub fn pell_d(&self) -> BigInt {
        self.two_m() * &self.f_sq
    }

    pub fn window(&self) -> BigInt {
        bound_window(self.n)
    }

    pub fn mukai_lattice(&self) -> Lattice {
        let u = Lattice::hyperbolic("e1", "f1");
        let f = Lattice::rank_one(self.f_sq.clone(), "f").expect("even");
        Lattice::direct_sum(&[&u, &f])
    }

    pub fn v(&self) -> LatticeVector {
        LatticeVector::new(vec![BigInt::one(), self.m(), BigInt::zero()])
    }

    pub fn delta(&self) -> LatticeVector {
        LatticeVector::new(vec![BigInt::one(), -self.m(), BigInt::zero()])
    }

    /// Mukai coordinates of s·f − t·δ.
    pub fn divisor(&self, s: &BigInt, t: &BigInt) -> LatticeVector {
        LatticeVector::new(vec![-t, &self.m() * t, s.clone()])
    }

    /// (s f − t δ, s′ f − t′ δ) = s s′ f² − 2(n−1) t t′.
    pub fn pic_pair(&self, s: &BigInt, t: &BigInt, s2: &BigInt, t2: &BigInt) -> BigInt {
        s * s2 * &self.f_sq - self.two_m() * t * t2
    }

    pub fn conditions(&self) -> Vec<WallCondition> {
        let m = self.m();
        let two_m = self.two_m();
        let mut out = Vec::new();
        let mut k = BigInt::zero();
        while k <= m {
            let mut a = BigInt::from(-2);
            while &two_m * &a < &k * &k {
                out.push(WallCondition { k: k.clone(), a_sq: a.clone(), c: &k * &k - &two_m * &a });
                a += 2;
            }
            k += 1;
        }
        out
    }

    fn conditions_by_c(&self) -> BTreeMap<BigInt, Vec<WallCondition>> {
        let mut map: BTreeMap<BigInt, Vec<WallCondition>> = BTreeMap::new();
        for w in self.conditions() {
            map.entry(w.c.clone()).or_default().push(w);
        }
        map
    }
}

/// Primitive ray s·f − t·δ oriented to pair positively with ample classes:
/// s > 0, or (s, t) = (0, −1) for δ itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ray {
    #[serde(with = "serde_big::scalar")]
    pub s: BigInt,
    #[serde(with = "serde_big::scalar")]
    pub t: BigInt,
}

impl Ray {
    /// Primitive effective generator of the line through s·f − t·δ.
    pub fn effective(s: &BigInt, t: &BigInt) -> Result<Ray> {
        if s.is_zero() && t.is_zero() {
            return Err(Error::ZeroVector);
        }
        let g = s.gcd(t);
        let (s, t) = (s / &g, t / &g);
        Ok(if s.is_positive() || (s.is_zero() && t.is_negative()) {
            Ray { s, t }
        } else {
            Ray { s: -s, t: -t }
        })
    }

    pub fn delta() -> Ray {
        Ray { s: BigInt::zero(), t: -BigInt::one() }
    }

    pub fn square(&self, setup: &PicardSetup) -> BigInt {
        setup.pic_pair(&self.s, &self.t, &self.s, &self.t)
    }

    /// Divisibility of s f − t δ in H²(S^[n], ℤ), where f is primitive in a
    /// unimodular lattice: gcd(s, 2(n−1)t).
    pub fn divisibility(&self, setup: &PicardSetup) -> BigInt {
        self.s.gcd(&(setup.two_m() * &self.t))
    }

    /// Compare slopes t/s for rays with s > 0.
    pub fn cmp_slope(&self, other: &Ray) -> Ordering {
        cmp_frac(&self.t, &self.s, &other.t, &other.s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankThreeWall {
    /// a = α e₁ + β f₁ + γ f
    pub a: LatticeVector,
    #[serde(with = "serde_big::scalar")]
    pub a_sq: BigInt,
    #[serde(with = "serde_big::scalar")]
    pub av: BigInt,
    pub ray: Ray,
    #[serde(with = "serde_big::scalar")]
    pub rho_sq: BigInt,
    #[serde(with = "serde_big::scalar")]
    pub dv: BigInt,
}

/// The wall through the Pell solution (u, γ) of u² − Dγ² = c for the condition
/// (k, a²), where u = (δ, a). Requires u ≡ ±k mod 2(n−1).
fn wall_from(setup: &PicardSetup, cond: &WallCondition, u: &BigInt, gamma: &BigInt) -> Option<RankThreeWall> {
    let two_m = setup.two_m();
    let k = &cond.k;
    let (u, gamma) = if (u - k).is_multiple_of(&two_m) {
        (u.clone(), gamma.clone())
    } else if (u + k).is_multiple_of(&two_m) {
        (-u, -gamma)
    } else {
        return None;
    };
    let alpha = (k - &u) / &two_m;
    let beta = (k + &u) / 2u32;
    let a = LatticeVector::new(vec![alpha, beta, gamma.clone()]);
    // (v,v)a − (a,v)v = 2(n−1)γ f − u δ
    let ray = Ray::effective(&(&two_m * &gamma), &u).ok()?;
    Some(RankThreeWall {
        a,
        a_sq: cond.a_sq.clone(),
        av: k.clone(),
        rho_sq: ray.square(setup),
        dv: ray.divisibility(setup),
        ray,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallEnumeration {
    pub walls: Vec<RankThreeWall>,
    #[serde(with = "serde_big::scalar")]
    pub window: BigInt,
    pub gamma_limit: u64,
    /// walls found with ρ² below the window (dropped from `walls`)
    pub below_window: Vec<RankThreeWall>,
}

/// All walls a = αe₁ + βf₁ + γf with |γ| ≤ gamma_limit, one per ray, sorted by ray.
pub fn enumerate_walls_rank3(setup: &PicardSetup, gamma_limit: u64) -> Result<WallEnumeration> {
    let d = setup.pell_d();
    let mut by_ray: BTreeMap<Ray, RankThreeWall> = BTreeMap::new();
    let conds = setup.conditions();
    for g in 0..=gamma_limit {
        let g = BigInt::from(g);
        for cond in &conds {
            let Some(r) = exact_sqrt(&(&d * &g * &g + &cond.c)) else { continue };
            for u in [r.clone(), -r] {
                for gamma in [g.clone(), -g.clone()] {
                    if !(&u - &cond.k).is_multiple_of(&setup.two_m()) {
                        continue;
                    }
                    // for (a,v) = 0 keep the sign of a pairing positively with N f − δ, N ≫ 0
                    if cond.k.is_zero() && !(gamma.is_positive() || (gamma.is_zero() && u.is_negative())) {
                        continue;
                    }
                    if let Some(w) = wall_from(setup, cond, &u, &gamma) {
                        let better = match by_ray.get(&w.ray) {
                            Some(old) => (&w.av, &w.a_sq, &w.a) < (&old.av, &old.a_sq, &old.a),
                            None => true,
                        };
                        if better {
                            by_ray.insert(w.ray.clone(), w);
                        }
                    }
                }
            }
        }
    }
    let window = setup.window();
    let (walls, below): (Vec<_>, Vec<_>) =
        by_ray.into_values().partition(|w| w.rho_sq >= window);
    Ok(WallEnumeration { walls, window, gamma_limit, below_window: below })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SecondRay {
    Wall(RankThreeWall),
    /// No wall ray outside the positive cone; the ray is the boundary
    /// s² f² = 2(n−1) t², rational exactly when 2(n−1)f² is a square.
    PositiveConeBoundary { ray: Option<Ray> },
}

impl SecondRay {
    pub fn wall_ray(&self) -> Option<&Ray> {
        match self {
            SecondRay::Wall(w) => Some(&w.ray),
            SecondRay::PositiveConeBoundary { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoriResult {
    pub setup: PicardSetup,
    /// δ∨ = δ/2(n−1) in the basis (f, δ)
    pub delta_ray: DualVector,
    pub second_ray: SecondRay,
    #[serde(with = "serde_big::scalar")]
    pub window: BigInt,
}

fn boundary(setup: &PicardSetup) -> SecondRay {
    let ray = exact_sqrt(&setup.pell_d()).map(|r| Ray::effective(&setup.two_m(), &r).expect("nonzero"));
    SecondRay::PositiveConeBoundary { ray }
}

fn result(setup: &PicardSetup, best: Option<RankThreeWall>) -> MoriResult {
    let delta_ray = DualVector::new(vec![BigInt::zero(), BigInt::one()], setup.two_m()).expect("nonzero");
    MoriResult {
        setup: setup.clone(),
        delta_ray,
        second_ray: best.map(SecondRay::Wall).unwrap_or_else(|| boundary(setup)),
        window: setup.window(),
    }
}

fn consider(best: &mut Option<RankThreeWall>, w: RankThreeWall) {
    let replace = match best {
        None => true,
        Some(b) => match w.ray.cmp_slope(&b.ray) {
            Ordering::Greater => true,
            Ordering::Equal => (&w.av, &w.a_sq) < (&b.av, &b.a_sq),
            Ordering::Less => false,
        },
    };
    if replace {
        *best = Some(w);
    }
}

/// Generators of the Mori cone: δ∨ and the wall ray of maximal slope t/s,
/// located through the solution classes of the Pell equations u² − Dγ² = c.
pub fn mori_generators(setup: &PicardSetup) -> Result<MoriResult> {
    let d = setup.pell_d();
    let two_m = setup.two_m();
    let root = exact_sqrt(&d);
    let mut best: Option<RankThreeWall> = None;
    for (c, conds) in setup.conditions_by_c() {
        let sols = match &root {
            Some(r) => square_solutions(r, &c)?,
            None => solutions_near_crossing(&d, &c, &two_m)?.into_iter().collect(),
        };
        for (u, gamma) in sols {
            if !gamma.is_positive() {
                continue;
            }
            for cond in &conds {
                if let Some(w) = wall_from(setup, cond, &u, &gamma) {
                    consider(&mut best, w);
                }
            }
        }
    }
    Ok(result(setup, best))
}

/// The same generators by a direct scan over γ = 1, 2, …, stopping once no
/// larger γ can beat the best slope found. Errors past `gamma_ceiling`.
pub fn mori_generators_exhaustive(setup: &PicardSetup, gamma_ceiling: u64) -> Result<MoriResult> {
    let d = setup.pell_d();
    let two_m = setup.two_m();
    let by_c = setup.conditions_by_c();
    let c_max = by_c.keys().next_back().expect("k = 1, a² = 0 is always admissible").clone();
    let root = exact_sqrt(&d);
    let mut best: Option<RankThreeWall> = None;
    let mut g = BigInt::one();
    loop {
        if g > BigInt::from(gamma_ceiling) {
            return Err(Error::CeilingExceeded {
                ceiling: BigInt::from(gamma_ceiling),
                context: format!("exhaustive wall scan for n={}, f²={}", setup.n, setup.f_sq),
            });
        }
        let base = &d * &g * &g;
        let mut u = isqrt(&base) + 1;
        let top = isqrt(&(&base + &c_max));
        while u <= top {
            let c = &u * &u - &base;
            if let Some(conds) = by_c.get(&c) {
                for cond in conds {
                    if let Some(w) = wall_from(setup, cond, &u, &g) {
                        consider(&mut best, w);
                    }
                }
            }
            u += 1;
        }
        // u − rγ ≥ 1 forces c > 2rγ when D = r²
        if let Some(r) = &root {
            if BigInt::from(2) * r * &g >= c_max {
                break;
            }
        }
        if let Some(b) = &best {
            let (s, t) = (&b.ray.s, &b.ray.t);
            let gap = &two_m * &two_m * t * t - &d * s * s;
            if &g * &g * gap >= &c_max * s * s {
                break;
            }
        }
        g += 1;
    }
    Ok(result(setup, best))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmpleReport {
    /// D = x f − y δ
    #[serde(with = "serde_big::scalar")]
    pub x: BigInt,
    #[serde(with = "serde_big::scalar")]
    pub y: BigInt,
    pub ample: bool,
    #[serde(with = "serde_big::scalar")]
    pub square: BigInt,
    /// (D, δ∨) = y
    #[serde(with = "serde_big::scalar")]
    pub delta_pairing: BigInt,
    #[serde(with = "serde_big::opt")]
    pub second_ray_pairing: Option<BigInt>,
    pub second_ray: SecondRay,
    pub failures: Vec<String>,
}

pub fn is_ample(setup: &PicardSetup, x: &BigInt, y: &BigInt) -> Result<AmpleReport> {
    let mori = mori_generators(setup)?;
    Ok(is_ample_with(setup, &mori, x, y))
}

/// Ampleness of x f − y δ against precomputed Mori generators.
pub fn is_ample_with(setup: &PicardSetup, mori: &MoriResult, x: &BigInt, y: &BigInt) -> AmpleReport {
    let square = setup.pic_pair(x, y, x, y);
    let mut failures = Vec::new();
    if !square.is_positive() {
        failures.push(format!("(D,D) = {square} is not positive"));
    }
    if !y.is_positive() {
        failures.push(format!("(D,δ∨) = {y} is not positive"));
    }
    let second_ray_pairing = match &mori.second_ray {
        SecondRay::Wall(w) => {
            let p = setup.pic_pair(x, y, &w.ray.s, &w.ray.t);
            if !p.is_positive() {
                failures.push(format!(
                    "(D, {}f − {}δ) = {p} is not positive",
                    w.ray.s, w.ray.t
                ));
            }
            Some(p)
        }
        SecondRay::PositiveConeBoundary { .. } => {
            if !x.is_positive() {
                failures.push("D lies in the negative component of the positive cone".into());
            }
            None
        }
    };
    AmpleReport {
        x: x.clone(),
        y: y.clone(),
        ample: failures.is_empty(),
        square,
        delta_pairing: y.clone(),
        second_ray_pairing,
        second_ray: mori.second_ray.clone(),
        failures,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct N3Solution {
    #[serde(with = "serde_big::scalar")]
    pub a: BigInt,
    #[serde(with = "serde_big::scalar")]
    pub b: BigInt,
    /// d a² − 4 b²
    #[serde(with = "serde_big::scalar")]
    pub value: BigInt,
    pub case: u8,
}

/// Coprime a, b > 0 with d a² − 4b² in one of the five cases
/// −2; −4 with 4 | a; −4 with 2 ‖ a; −12 with 2 ‖ a; −36 with 4 | a,
/// drawn from the solution window around each class; these rays a f − b δ
/// are the candidate extremal rays of S^[3].
pub fn n3_pell_conditions(f_sq: &BigInt) -> Result<Vec<N3Solution>> {
    PicardSetup::new(3, f_sq.clone())?;
    let root = exact_sqrt(f_sq);
    let mut out = Vec::new();
    for target in [2i64, 4, 12, 36] {
        let n = BigInt::from(target);
        let sols: Vec<(BigInt, BigInt)> = match &root {
            Some(r) => square_solutions(r, &n)?,
            None => solutions_near_crossing(f_sq, &n, &BigInt::from(8))?.into_iter().collect(),
        };
        for (x, a) in sols {
            if !x.is_positive() || !a.is_positive() || x.is_odd() {
                continue;
            }
            let b = x / 2u32;
            if !a.gcd(&b).is_one() {
                continue;
            }
            let v4 = a.mod_floor(&BigInt::from(4));
            let case = match target {
                2 => Some(1),
                4 if v4.is_zero() => Some(2),
                4 if v4 == BigInt::from(2) => Some(3),
                12 if v4 == BigInt::from(2) => Some(4),
                36 if v4.is_zero() => Some(5),
                _ => None,
            };
            if let Some(case) = case {
                out.push(N3Solution { value: f_sq * &a * &a - 4 * &b * &b, a, b, case });
            }
        }
    }
    out.sort_by(|p, q| (&p.a, &p.b).cmp(&(&q.a, &q.b)));
    out.dedup();
    Ok(out)
}

/// The solution of maximal slope b/a, i.e. the second extremal ray of S^[3].
pub fn n3_second_ray(f_sq: &BigInt) -> Result<Option<Ray>> {
    let sols = n3_pell_conditions(f_sq)?;
    Ok(sols
        .iter()
        .map(|p| Ray { s: p.a.clone(), t: p.b.clone() })
        .max_by(|p, q| p.cmp_slope(q)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormRow {
    #[serde(with = "serde_big::scalar")]
    pub a: BigInt,
    #[serde(with = "serde_big::scalar")]
    pub b: BigInt,
    /// f² a² − 2(n−1) b²
    #[serde(with = "serde_big::scalar")]
    pub value: BigInt,
    pub convergent: bool,
}

/// Pairs (a, b) with b/a a convergent or intermediate fraction of √(f²/2(n−1))
/// over one period, starting at the first convergent, with |f² a² − 2(n−1) b²| ≤ window.
pub fn small_norm_table(setup: &PicardSetup, window: &BigInt, max_rows: Option<usize>) -> Result<Vec<NormRow>> {
    if window.is_negative() {
        return Ok(Vec::new());
    }
    let two_m = setup.two_m();
    if exact_sqrt(&setup.pell_d()).is_some() {
        return Err(Error::Unsupported("√(f²/2(n−1)) is rational".into()));
    }
    let cf = surd_cf(&setup.pell_d(), &two_m, 0)?;
    let len = cf.period_start + cf.period_len - 1;
    let conv = &cf.convergents;
    let q = &cf.partial_quotients;
    let value = |a: &BigInt, b: &BigInt| &setup.f_sq * a * a - &two_m * b * b;
    let mut rows = Vec::new();
    for (b, a) in conv.iter().take(len) {
        rows.push(NormRow { value: value(a, b), a: a.clone(), b: b.clone(), convergent: true });
    }
    for k in 1..len.saturating_sub(1) {
        let (b0, a0) = &conv[k - 1];
        let (b1, a1) = &conv[k];
        let mut j = BigInt::one();
        while j < q[k + 1] {
            let a = a0 + &j * a1;
            let b = b0 + &j * b1;
            rows.push(NormRow { value: value(&a, &b), a, b, convergent: false });
            j += 1;
        }
    }
    rows.retain(|r| r.value.abs() <= *window);
    rows.sort_by(|p, q| (&p.a, &p.b).cmp(&(&q.a, &q.b)));
    if let Some(mx) = max_rows {
        rows.truncate(mx);
    }
    Ok(rows)
}

/// Convert a small nonnegative BigInt to usize (for counts coming from CLI input).
pub fn to_usize(x: &BigInt) -> Result<usize> {
    x.to_usize().ok_or_else(|| Error::InvalidArgument(format!("{x} out of range")))
}
