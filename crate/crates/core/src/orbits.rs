//! Monodromy orbits of rays via Eichler invariants, and degrees realizing a
//! prescribed orbit as the second extremal ray of S^[n].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::isqrt;
use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, MarkedMukaiSetup};
use crate::mori::{mori_generators, PicardSetup, Ray, SecondRay};
use crate::serde_big;

pub use crate::mori::bound_window;

/// (ρ², dv(ρ), ±[ρ/dv(ρ)]); equal triples mean the same monodromy orbit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RayOrbit {
    #[serde(with = "serde_big::scalar")]
    pub rho_sq: BigInt,
    #[serde(with = "serde_big::scalar")]
    pub dv: BigInt,
    /// class of ρ/dv in ℤ/2(n−1), reduced to [0, n−1] up to sign
    #[serde(with = "serde_big::scalar")]
    pub disc_class: BigInt,
}

pub fn orbit_invariants(mukai: &MarkedMukaiSetup, rho: &LatticeVector) -> Result<RayOrbit> {
    if !rho.is_primitive() {
        return Err(Error::InvalidArgument("ρ must be primitive".into()));
    }
    let rho_sq = mukai.pair(rho, rho)?;
    let dv = mukai.divisibility(rho)?;
    let class = mukai.disc_class(rho)?;
    Ok(RayOrbit { rho_sq, dv, disc_class: mukai.disc_group().up_to_sign(&class) })
}

/// Invariants of s f − t δ for Pic(S) = ℤf, with f primitive in H²(S, ℤ).
pub fn ray_orbit(setup: &PicardSetup, ray: &Ray) -> RayOrbit {
    let dv = ray.divisibility(setup);
    let two_m = setup.two_m();
    // ρ/dv ≡ −(t/dv)·δ = −(2(n−1)t/dv)·δ∨
    let class = (-(&two_m * &ray.t) / &dv).mod_floor(&two_m);
    let up = &two_m - &class;
    RayOrbit {
        rho_sq: ray.square(setup),
        dv,
        disc_class: if up < class { up.mod_floor(&two_m) } else { class },
    }
}

pub fn same_orbit(mukai: &MarkedMukaiSetup, r1: &LatticeVector, r2: &LatticeVector) -> Result<bool> {
    Ok(orbit_invariants(mukai, r1)? == orbit_invariants(mukai, r2)?)
}

/// s f − t δ inside the full Mukai lattice, with f = e₂ + (f²/2) f₂.
pub fn embed_ray(mukai: &MarkedMukaiSetup, setup: &PicardSetup, ray: &Ray) -> Result<LatticeVector> {
    if mukai.n != setup.n || mukai.algebraic_rank() < 2 {
        return Err(Error::InvalidArgument("setups disagree".into()));
    }
    let mut y = vec![BigInt::zero(); mukai.algebraic_rank()];
    y[0] = ray.s.clone();
    y[1] = &ray.s * (&setup.f_sq / 2u32);
    mukai.from_h2(&-&ray.t, &y)
}

/// Classes g ∈ v⊥ of square ±2 with (δ∨, g) integral; x ↦ x + (x,g)g for
/// g² = −2 and x ↦ −x + (x,g)g for g² = 2 generate a subgroup of the
/// monodromy group. Uses the default Mukai lattice labels.
pub fn monodromy_generators(mukai: &MarkedMukaiSetup) -> Result<Vec<LatticeVector>> {
    let l = &mukai.ambient;
    let m = i64::try_from(mukai.n - 1).map_err(|_| Error::InvalidN(mukai.n))?;
    let mut gens = vec![
        l.combo(&[(1, "e2"), (-1, "f2")])?,
        l.combo(&[(1, "e2"), (1, "f2")])?,
        l.combo(&[(1, "e3"), (-1, "f3")])?,
        l.combo(&[(1, "e3"), (1, "f3")])?,
        l.combo(&[(1, "e4"), (-1, "f4")])?,
        l.combo(&[(1, "e2"), (1, "e3"), (-1, "f3")])?,
        l.combo(&[(1, "f2"), (1, "e4"), (1, "f4")])?,
        l.combo(&[(1, "x1")])?,
        l.combo(&[(1, "x1"), (1, "e3")])?,
    ];
    // δ + e + (m∓1)f has square ∓2
    gens.push(mukai.delta.add(&l.combo(&[(1, "e2"), (m - 1, "f2")])?));
    gens.push(mukai.delta.add(&l.combo(&[(1, "e3"), (m + 1, "f3")])?));
    for g in &gens {
        let sq = mukai.pair(g, g)?;
        debug_assert!(sq.abs() == BigInt::from(2));
        debug_assert!(mukai.pair(g, &mukai.v)?.is_zero());
    }
    Ok(gens)
}

pub fn apply_generator(mukai: &MarkedMukaiSetup, g: &LatticeVector, x: &LatticeVector) -> Result<LatticeVector> {
    let sq = mukai.pair(g, g)?;
    let xg = mukai.pair(x, g)?;
    if sq == BigInt::from(-2) {
        Ok(x.combine(&BigInt::one(), g, &xg))
    } else if sq == BigInt::from(2) {
        Ok(x.combine(&-BigInt::one(), g, &xg))
    } else {
        Err(Error::BadReflection(sq))
    }
}

/// ρ² values of wall rays with divisibility s, and the residues t mod s that occur.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleSquare {
    #[serde(with = "serde_big::scalar")]
    pub rho_sq: BigInt,
    #[serde(with = "serde_big::vec")]
    pub t_residues: Vec<BigInt>,
}

/// Orbits of wall rays s f − t δ (s | 2(n−1), gcd(s,t) = 1) with C ≤ ρ² < 0
/// realized for some even f² ≥ 2.
///
/// A ray comes from a wall (k, a²) exactly when ρ² = −2(n−1)c/g² with
/// c = k² − 2(n−1)a², g = 2(n−1)γ/s and g t ≡ ±k mod 2(n−1); both conditions
/// and the parity of f² = (2(n−1)t² + ρ²)/s² depend on t only modulo 4(n−1)s².
pub fn admissible_rho_sq(n: u64, s: &BigInt) -> Result<Vec<AdmissibleSquare>> {
    let base = PicardSetup::new(n, BigInt::from(2))?;
    let two_m = base.two_m();
    if !s.is_positive() || !two_m.is_multiple_of(s) {
        return Err(Error::InvalidArgument(format!("s = {s} must divide 2(n−1) = {two_m}")));
    }
    let window = bound_window(n);
    let period = BigInt::from(2) * &two_m * s * s;
    let mut out: Vec<AdmissibleSquare> = Vec::new();
    for cond in base.conditions() {
        let num = &two_m * &cond.c;
        let mut g = BigInt::one();
        while &g * &g <= num {
            let gg = &g * &g;
            let gs = &g * s;
            if num.is_multiple_of(&gg) && gs.is_multiple_of(&two_m) {
                let rho_sq = -(&num / &gg);
                if rho_sq.is_even() && rho_sq >= window {
                    let mut t = BigInt::one();
                    while t <= period {
                        let f_num = &two_m * &t * &t + &rho_sq;
                        let ss = s * s;
                        let ok = t.gcd(s).is_one()
                            && ((&g * &t - &cond.k).is_multiple_of(&two_m)
                                || (&g * &t + &cond.k).is_multiple_of(&two_m))
                            && f_num.is_multiple_of(&ss)
                            && (&f_num / &ss).is_even();
                        if ok {
                            let r = t.mod_floor(s);
                            match out.iter_mut().find(|a| a.rho_sq == rho_sq) {
                                Some(a) => {
                                    if !a.t_residues.contains(&r) {
                                        a.t_residues.push(r);
                                    }
                                }
                                None => out.push(AdmissibleSquare { rho_sq: rho_sq.clone(), t_residues: vec![r] }),
                            }
                        }
                        t += 1;
                    }
                }
            }
            g += 1;
        }
    }
    for a in &mut out {
        a.t_residues.sort();
    }
    out.sort_by(|a, b| b.rho_sq.cmp(&a.rho_sq));
    Ok(out)
}

/// A vector σ f − τ δ with σ, τ > 0 and C ≤ ρ₀² < 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Competitor {
    #[serde(with = "serde_big::scalar")]
    pub sigma: BigInt,
    #[serde(with = "serde_big::scalar")]
    pub tau: BigInt,
    #[serde(with = "serde_big::scalar")]
    pub rho_sq: BigInt,
    /// τ/σ ≥ t/s
    pub beats: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignCertificate {
    pub n: u64,
    #[serde(with = "serde_big::scalar")]
    pub f_sq: BigInt,
    #[serde(with = "serde_big::scalar")]
    pub s: BigInt,
    #[serde(with = "serde_big::scalar")]
    pub t: BigInt,
    #[serde(with = "serde_big::scalar")]
    pub rho_sq: BigInt,
    pub orbit: RayOrbit,
    pub competitor_list: Vec<Competitor>,
    pub mori_second_ray: SecondRay,
    pub verdict: bool,
}

/// Every σ f − τ δ (σ, τ > 0, C ≤ ρ₀² < 0, off the ray of s f − t δ) that could
/// have slope τ/σ ≥ t/s; such σ satisfy σ² ≤ s²|C|/|ρ²|.
pub fn competitors(setup: &PicardSetup, s: &BigInt, t: &BigInt) -> Result<Vec<Competitor>> {
    let rho_sq = setup.pic_pair(s, t, s, t);
    if !rho_sq.is_negative() {
        return Err(Error::InvalidArgument("ρ² must be negative".into()));
    }
    let c = setup.window();
    let two_m = setup.two_m();
    let sigma_max = isqrt(&(s * s * c.abs() / rho_sq.abs()));
    let mut out = Vec::new();
    let mut sigma = BigInt::one();
    while sigma <= sigma_max {
        let fs = &setup.f_sq * &sigma * &sigma;
        let mut tau = isqrt(&(&fs / &two_m)).max(BigInt::one());
        let hi = isqrt(&((&fs - &c) / &two_m));
        while tau <= hi {
            let val = &fs - &two_m * &tau * &tau;
            if val.is_negative() && val >= c && &sigma * t != &tau * s {
                let beats = &tau * s >= t * &sigma;
                out.push(Competitor { sigma: sigma.clone(), tau: tau.clone(), rho_sq: val, beats });
            }
            tau += 1;
        }
        sigma += 1;
    }
    Ok(out)
}

/// Smallest t ≡ t_residue (mod s), t ≤ t_ceiling, for which
/// f² = (2(n−1)t² + ρ²)/s² is an even integer ≥ 2, no competitor reaches the
/// slope t/s, and s f − t δ is the second Mori generator.
pub fn design_degree(
    n: u64,
    s: &BigInt,
    t_residue: &BigInt,
    rho_sq: &BigInt,
    t_ceiling: &BigInt,
) -> Result<DesignCertificate> {
    let two_m = BigInt::from(2 * n.saturating_sub(1));
    if n < 2 {
        return Err(Error::InvalidN(n));
    }
    if !s.is_positive() || !two_m.is_multiple_of(s) {
        return Err(Error::InvalidArgument(format!("s = {s} must divide 2(n−1) = {two_m}")));
    }
    let window = bound_window(n);
    if !rho_sq.is_negative() || *rho_sq < window {
        return Err(Error::InvalidArgument(format!("ρ² = {rho_sq} outside [{window}, 0)")));
    }
    let mut t = t_residue.mod_floor(s);
    if t.is_zero() {
        t = s.clone();
    }
    let ss = s * s;
    while t <= *t_ceiling {
        let f_num = &two_m * &t * &t + rho_sq;
        if t.gcd(s).is_one() && f_num.is_positive() && f_num.is_multiple_of(&ss) && (&f_num / &ss).is_even() {
            let f_sq = &f_num / &ss;
            let setup = PicardSetup::new(n, f_sq.clone())?;
            let comps = competitors(&setup, s, &t)?;
            if comps.iter().all(|c| !c.beats) {
                let mori = mori_generators(&setup)?;
                let ray = Ray { s: s.clone(), t: t.clone() };
                if mori.second_ray.wall_ray() == Some(&ray) {
                    return Ok(DesignCertificate {
                        n,
                        f_sq,
                        orbit: ray_orbit(&setup, &ray),
                        s: s.clone(),
                        t,
                        rho_sq: rho_sq.clone(),
                        competitor_list: comps,
                        mori_second_ray: mori.second_ray,
                        verdict: true,
                    });
                }
            }
        }
        t += s;
    }
    Err(Error::CeilingExceeded {
        ceiling: t_ceiling.clone(),
        context: format!("t ≡ {t_residue} mod {s} for n={n}, ρ²={rho_sq}"),
    })
}
