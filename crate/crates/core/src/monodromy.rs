//! Explicit isometries: reflections, the monodromy test, an isometry of Λ₇
//! acting by 5 on the discriminant group, and reflections in square-2 classes
//! of Pic(S^[3]).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{det, exact_sqrt, mat_mul, transpose};
use crate::error::{Error, Result};
use crate::forms::{equivalent, reduce, BinaryForm};
use crate::lattice::{Lattice, LatticeVector, MarkedMukaiSetup};
use crate::mori::{is_ample_with, mori_generators, MoriResult, PicardSetup, SecondRay};
use crate::orbits::{orbit_invariants, RayOrbit};
use crate::serde_big;
use crate::surd::surd_cf;
use crate::walls::{enumerate_wall_types, Wall};

/// Columns of `matrix` are the images of the basis vectors of `parent`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Isometry {
    #[serde(with = "serde_big::mat")]
    pub matrix: Vec<Vec<BigInt>>,
    pub parent: Lattice,
}

impl Isometry {
    pub fn new(parent: Lattice, matrix: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = parent.rank();
        if matrix.len() != r || matrix.iter().any(|row| row.len() != r) {
            return Err(Error::RankMismatch { expected: r, got: matrix.len() });
        }
        let g = parent.gram().to_vec();
        if mat_mul(&mat_mul(&transpose(&matrix), &g), &matrix) != g {
            return Err(Error::NotIsometry);
        }
        if det(&matrix).abs() != BigInt::one() {
            return Err(Error::NotIsometry);
        }
        Ok(Isometry { matrix, parent })
    }

    pub fn identity(parent: Lattice) -> Self {
        let matrix = crate::arith::identity(parent.rank());
        Isometry { matrix, parent }
    }

    pub fn negate(&self) -> Self {
        let matrix = self.matrix.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        Isometry { matrix, parent: self.parent.clone() }
    }

    pub fn apply(&self, x: &LatticeVector) -> Result<LatticeVector> {
        self.parent.check(x)?;
        let coords = self
            .matrix
            .iter()
            .map(|row| row.iter().zip(&x.coords).map(|(a, b)| a * b).sum())
            .collect();
        Ok(LatticeVector::new(coords))
    }

    pub fn compose(&self, other: &Isometry) -> Result<Isometry> {
        if self.parent != other.parent {
            return Err(Error::InvalidArgument("isometries of different lattices".into()));
        }
        Ok(Isometry { matrix: mat_mul(&self.matrix, &other.matrix), parent: self.parent.clone() })
    }

    pub fn is_involution(&self) -> bool {
        mat_mul(&self.matrix, &self.matrix) == crate::arith::identity(self.parent.rank())
    }
}

/// D ↦ −D + (D, g)·g for (g, g) = 2.
pub fn reflect(parent: &Lattice, g: &LatticeVector) -> Result<Isometry> {
    let sq = parent.square(g)?;
    if sq != BigInt::from(2) {
        return Err(Error::BadReflection(sq));
    }
    let r = parent.rank();
    let mut matrix = vec![vec![BigInt::zero(); r]; r];
    for j in 0..r {
        let ej = parent.basis_vector(j);
        let c = parent.pair(&ej, g)?;
        for i in 0..r {
            matrix[i][j] = &c * &g.coords[i] - if i == j { BigInt::one() } else { BigInt::zero() };
        }
    }
    Isometry::new(parent.clone(), matrix)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonodromyReport {
    /// u with φ(δ∨) ≡ u·δ∨ in ℤ/2(n−1)
    #[serde(with = "serde_big::scalar")]
    pub disc_unit: BigInt,
    #[serde(with = "serde_big::scalar")]
    pub disc_order: BigInt,
    pub orientation_preserving: bool,
    pub is_monodromy: bool,
}

/// Monodromy test for an isometry of a lattice whose first basis vector is δ
/// (square −2(n−1)) and whose remaining basis vectors span a unimodular
/// lattice orthogonal to δ.
pub fn is_monodromy(phi: &Isometry) -> Result<MonodromyReport> {
    let l = &phi.parent;
    let g = l.gram();
    let two_m = -g[0][0].clone();
    if !two_m.is_positive() || g[0][1..].iter().any(|x| !x.is_zero()) {
        return Err(Error::InvalidArgument("first basis vector must be δ, orthogonal to the rest".into()));
    }
    let rest: Vec<Vec<BigInt>> = g[1..].iter().map(|r| r[1..].to_vec()).collect();
    if !rest.is_empty() && det(&rest).abs() != BigInt::one() {
        return Err(Error::Unsupported("complement of δ is not unimodular".into()));
    }
    let img = phi.apply(&l.basis_vector(0))?;
    if img.coords[1..].iter().any(|c| !c.is_multiple_of(&two_m)) {
        return Err(Error::Divisibility("φ(δ) − kδ is not divisible by 2(n−1)".into()));
    }
    let unit = img.coords[0].mod_floor(&two_m);
    let positive: Vec<Vec<BigInt>> = l
        .diagonalize()
        .into_iter()
        .filter(|(_, sq)| sq.is_positive())
        .map(|(v, _)| v)
        .collect();
    let mut pm = Vec::new();
    for p in &positive {
        let mut row = Vec::new();
        for q in &positive {
            let fq = phi.apply(&LatticeVector::new(q.clone()))?;
            row.push(l.pair(&LatticeVector::new(p.clone()), &fq)?);
        }
        pm.push(row);
    }
    let orientation_preserving = positive.is_empty() || det(&pm).is_positive();
    let pm_one = unit.is_one() || unit == &two_m - 1u32;
    Ok(MonodromyReport {
        is_monodromy: pm_one && orientation_preserving,
        disc_unit: unit,
        disc_order: two_m,
        orientation_preserving,
    })
}

/// Λ₇ ⊇ ⟨δ⟩ ⊕ U(e₂, f₂) with α(δ) = 5δ + 12(e₂ + f₂), α(e₂) = δ + 2e₂ + 3f₂,
/// α(f₂) = δ + 3e₂ + 2f₂ (identity on the rest of Λ₇).
pub fn build_alpha_n7() -> Result<Isometry> {
    let parent = Lattice::with_labels(
        crate::arith::mat_from_i64(&[&[-12, 0, 0], &[0, 0, 1], &[0, 1, 0]]),
        vec!["delta".into(), "e2".into(), "f2".into()],
    )?;
    let matrix = crate::arith::mat_from_i64(&[&[5, 1, 1], &[12, 2, 3], &[12, 3, 2]]);
    Isometry::new(parent, matrix)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    /// the image lattice matches no wall class: the image ray is not extremal
    /// and the ample cones differ
    ImageNotExtremal,
    ImageMatchesWallClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguityVerdict {
    pub n: u64,
    pub v: LatticeVector,
    pub a: LatticeVector,
    /// primitive generator of the ray of (v,v)a − (a,v)v, sign chosen as (a,v)v − (v,v)a
    pub a_prime: LatticeVector,
    pub alpha_a_prime: LatticeVector,
    pub b: LatticeVector,
    pub alpha_report: MonodromyReport,
    #[serde(with = "serde_big::scalar")]
    pub alpha_unit_squared: BigInt,
    pub orbit_a_prime: RayOrbit,
    pub orbit_alpha_a_prime: RayOrbit,
    #[serde(with = "serde_big::scalar")]
    pub saturation_index: BigInt,
    pub wall_in: BinaryForm,
    pub wall_in_reduced: BinaryForm,
    pub image_lattice: BinaryForm,
    pub image_reduced: BinaryForm,
    pub classification_hits: Vec<Wall>,
    pub equivalent_to_some_wall: bool,
    pub conclusion: Conclusion,
}

/// Transport the wall ⟨v, a⟩ with a = 5f₁ + e₂ − f₂ through α on Λ₇ and test
/// whether the image lattice is a wall lattice.
pub fn ambiguity_pipeline(n: u64) -> Result<AmbiguityVerdict> {
    if n != 7 {
        return Err(Error::Unsupported("the ambiguity construction is fixed at n = 7".into()));
    }
    let alpha = build_alpha_n7()?;
    let mukai = MarkedMukaiSetup::new(n, Some(Lattice::hyperbolic("e2", "f2")))?;
    let l = &mukai.ambient;
    let v = mukai.v.clone();
    let a = l.combo(&[(5, "f1"), (1, "e2"), (-1, "f2")])?;
    let vv = l.square(&v)?;
    let av = l.pair(&a, &v)?;
    // a′ = (a,v)v − (v,v)a, made primitive
    let a_prime = v.combine(&av, &a, &-&vv).primitive()?;
    let (k, y) = mukai.h2_coords(&a_prime)?;
    let mut h2 = vec![k];
    h2.extend(y);
    let img = alpha.apply(&LatticeVector::new(h2))?;
    let alpha_a_prime = mukai.from_h2(&img.coords[0], &img.coords[1..])?;
    let diff = alpha_a_prime.sub(&v);
    let b = diff
        .div_exact(&vv)
        .map_err(|_| Error::Divisibility("(α(a′) − v)/(v,v) is not integral".into()))?;
    let (sat, index) = l.saturate(&[v.clone(), alpha_a_prime.clone()])?;
    let sat_form = BinaryForm::from_lattice(&Lattice::new(l.gram_of(&sat)?)?)?;
    let image_lattice = BinaryForm::new(vv.clone(), l.pair(&v, &b)?, l.square(&b)?)?;
    if !equivalent(&sat_form, &image_lattice)? {
        return Err(Error::InvalidArgument("⟨v, b⟩ is not the saturation of ⟨v, α(a′)⟩".into()));
    }
    let wall_in = BinaryForm::new(vv.clone(), av.clone(), l.square(&a)?)?;
    let hits: Vec<Wall> = enumerate_wall_types(&vv)?
        .into_iter()
        .filter(|w| w.disc == image_lattice.disc())
        .collect();
    let mut matches = false;
    for w in &hits {
        matches |= equivalent(&w.lattice(), &image_lattice)?;
    }
    let report = is_monodromy(&alpha)?;
    let order2 = BigInt::from(2) * &report.disc_order;
    Ok(AmbiguityVerdict {
        n,
        alpha_unit_squared: (&report.disc_unit * &report.disc_unit).mod_floor(&order2),
        alpha_report: report,
        orbit_a_prime: orbit_invariants(&mukai, &a_prime)?,
        orbit_alpha_a_prime: orbit_invariants(&mukai, &alpha_a_prime)?,
        v,
        a,
        a_prime,
        alpha_a_prime,
        b,
        saturation_index: index,
        wall_in_reduced: reduce(&wall_in)?.reduced,
        wall_in,
        image_reduced: reduce(&image_lattice)?.reduced,
        image_lattice,
        classification_hits: hits,
        equivalent_to_some_wall: matches,
        conclusion: if matches { Conclusion::ImageMatchesWallClass } else { Conclusion::ImageNotExtremal },
    })
}

/// Reflection in g = x f − y δ on Pic(S^[n]) with basis (f, δ).
pub fn reflect_pic(setup: &PicardSetup, x: &BigInt, y: &BigInt) -> Result<Isometry> {
    let pic = Lattice::with_labels(
        vec![vec![setup.f_sq.clone(), BigInt::zero()], vec![BigInt::zero(), -setup.two_m()]],
        vec!["f".into(), "delta".into()],
    )?;
    reflect(&pic, &LatticeVector::new(vec![x.clone(), -y]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutionHit {
    #[serde(with = "serde_big::scalar")]
    pub f_sq: BigInt,
    /// g = x f − y δ with f² x² − 4y² = 2
    #[serde(with = "serde_big::scalar")]
    pub x: BigInt,
    #[serde(with = "serde_big::scalar")]
    pub y: BigInt,
    #[serde(with = "serde_big::opt")]
    pub second_ray_pairing: Option<BigInt>,
    pub second_ray: SecondRay,
}

/// Candidates g = x f − y δ with g² = 2 on S^[3]: y/x is then a convergent of
/// √(f²)/2, so the first `periods` periods of that expansion are searched.
pub fn involution_candidates(f_sq: &BigInt, periods: usize) -> Result<Vec<(BigInt, BigInt)>> {
    if exact_sqrt(f_sq).is_some() {
        return Ok(Vec::new());
    }
    let cf = surd_cf(f_sq, &BigInt::from(2), 0)?;
    let count = cf.period_start + periods.max(1) * cf.period_len;
    let cf = surd_cf(f_sq, &BigInt::from(2), count)?;
    Ok(cf
        .convergents
        .iter()
        .filter(|(y, x)| f_sq * x * x - 4 * y * y == BigInt::from(2))
        .map(|(y, x)| (x.clone(), y.clone()))
        .collect())
}

fn involution_hit(f_sq: &BigInt, periods: usize) -> Result<Option<InvolutionHit>> {
    let setup = PicardSetup::new(3, f_sq.clone())?;
    let cands = involution_candidates(f_sq, periods)?;
    if cands.is_empty() {
        return Ok(None);
    }
    let mori: MoriResult = mori_generators(&setup)?;
    for (x, y) in cands {
        let rep = is_ample_with(&setup, &mori, &x, &y);
        if rep.ample {
            return Ok(Some(InvolutionHit {
                f_sq: f_sq.clone(),
                x,
                y,
                second_ray_pairing: rep.second_ray_pairing,
                second_ray: rep.second_ray,
            }));
        }
    }
    Ok(None)
}

/// Even f² ≤ ceiling for which S^[3] carries an ample g with g² = 2, ordered by f².
pub fn find_involution_degree(ceiling: &BigInt, periods: usize) -> Result<Vec<InvolutionHit>> {
    if *ceiling < BigInt::from(2) {
        return Err(Error::InvalidArgument("ceiling must be at least 2".into()));
    }
    let mut degrees = Vec::new();
    let mut f = BigInt::from(2);
    while f <= *ceiling {
        degrees.push(f.clone());
        f += 2;
    }
    let hits: Result<Vec<Option<InvolutionHit>>> =
        degrees.par_iter().map(|f| involution_hit(f, periods)).collect();
    Ok(hits?.into_iter().flatten().collect())
}
