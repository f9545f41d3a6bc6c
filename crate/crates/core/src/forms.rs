//! Integral binary quadratic forms (rank-2 lattices): reduction, GL₂(ℤ)
//! equivalence and bounded representation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{exact_sqrt, isqrt};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::serde_big;

pub type Mat2 = [[BigInt; 2]; 2];

/// The Gram matrix (a b; b c).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "FormRepr", into = "FormRepr")]
pub struct BinaryForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

#[derive(Serialize, Deserialize)]
struct FormRepr {
    #[serde(with = "serde_big::mat")]
    gram: Vec<Vec<BigInt>>,
}

impl From<BinaryForm> for FormRepr {
    fn from(f: BinaryForm) -> Self {
        FormRepr { gram: vec![vec![f.a, f.b.clone()], vec![f.b, f.c]] }
    }
}

impl TryFrom<FormRepr> for BinaryForm {
    type Error = Error;

    fn try_from(r: FormRepr) -> Result<Self> {
        let g = r.gram;
        if g.len() != 2 || g.iter().any(|row| row.len() != 2) {
            return Err(Error::NotSquare);
        }
        if g[0][1] != g[1][0] {
            return Err(Error::NotSymmetric);
        }
        BinaryForm::new(g[0][0].clone(), g[0][1].clone(), g[1][1].clone())
    }
}

/// Which notion of equivalence to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equivalence {
    /// GL₂(ℤ): isomorphism of abstract lattices.
    General,
    /// SL₂(ℤ): proper equivalence.
    Proper,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduced {
    pub reduced: BinaryForm,
    #[serde(with = "mat2_serde")]
    pub transform: Mat2,
}

mod mat2_serde {
    use super::Mat2;
    use num_bigint::BigInt;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &Mat2, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<BigInt>> = m.iter().map(|r| r.to_vec()).collect();
        crate::serde_big::mat::serialize(&rows, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Mat2, D::Error> {
        use serde::de::Error;
        let rows = crate::serde_big::mat::deserialize(d)?;
        if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
            return Err(D::Error::custom("transform must be 2x2"));
        }
        Ok([
            [rows[0][0].clone(), rows[0][1].clone()],
            [rows[1][0].clone(), rows[1][1].clone()],
        ])
    }
}

pub fn mat2(a: i64, b: i64, c: i64, d: i64) -> Mat2 {
    [[a.into(), b.into()], [c.into(), d.into()]]
}

pub fn mat2_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn mat2_det(x: &Mat2) -> BigInt {
    &x[0][0] * &x[1][1] - &x[0][1] * &x[1][0]
}

pub fn mat2_identity() -> Mat2 {
    mat2(1, 0, 0, 1)
}

impl BinaryForm {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Result<Self> {
        if a.is_odd() || c.is_odd() {
            return Err(Error::NotEven);
        }
        Ok(BinaryForm { a, b, c })
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into())
    }

    pub fn from_lattice(l: &Lattice) -> Result<Self> {
        if l.rank() != 2 {
            return Err(Error::RankMismatch { expected: 2, got: l.rank() });
        }
        let g = l.gram();
        Self::new(g[0][0].clone(), g[0][1].clone(), g[1][1].clone())
    }

    pub fn to_lattice(&self) -> Lattice {
        Lattice::new(vec![
            vec![self.a.clone(), self.b.clone()],
            vec![self.b.clone(), self.c.clone()],
        ])
        .expect("even symmetric")
    }

    /// ac − b², the determinant of the Gram matrix.
    pub fn disc(&self) -> BigInt {
        &self.a * &self.c - &self.b * &self.b
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + BigInt::from(2) * &self.b * x * y + &self.c * y * y
    }

    pub fn pair(&self, x: (&BigInt, &BigInt), y: (&BigInt, &BigInt)) -> BigInt {
        &self.a * x.0 * y.0 + &self.b * (x.0 * y.1 + x.1 * y.0) + &self.c * x.1 * y.1
    }

    /// Tᵀ·F·T, the form in the basis given by the columns of T.
    pub fn transform(&self, t: &Mat2) -> BinaryForm {
        let c0 = (&t[0][0], &t[1][0]);
        let c1 = (&t[0][1], &t[1][1]);
        BinaryForm { a: self.pair(c0, c0), b: self.pair(c0, c1), c: self.pair(c1, c1) }
    }

    pub fn signature(&self) -> Result<(u8, u8)> {
        let d = self.disc();
        if d.is_zero() {
            Err(Error::Degenerate)
        } else if d.is_negative() {
            Ok((1, 1))
        } else if self.a.is_positive() {
            Ok((2, 0))
        } else {
            Ok((0, 2))
        }
    }

    /// Whether the form represents zero nontrivially over ℤ.
    pub fn is_isotropic(&self) -> bool {
        let d = -self.disc();
        d.is_positive() && exact_sqrt(&d).is_some()
    }
}

/// Canonical GL₂(ℤ) representative of an indefinite form, with the basis change.
pub fn reduce(f: &BinaryForm) -> Result<Reduced> {
    reduce_with(f, Equivalence::General)
}

pub fn reduce_with(f: &BinaryForm, eq: Equivalence) -> Result<Reduced> {
    let sig = f.signature()?;
    if sig != (1, 1) {
        return Err(Error::NotIndefinite(sig.0, sig.1));
    }
    let r = if f.is_isotropic() {
        isotropic_canonical(f, eq)
    } else {
        anisotropic_canonical(f, eq)
    };
    debug_assert_eq!(f.transform(&r.transform), r.reduced);
    Ok(r)
}

pub fn equivalent(f: &BinaryForm, g: &BinaryForm) -> Result<bool> {
    equivalent_with(f, g, Equivalence::General)
}

pub fn equivalent_with(f: &BinaryForm, g: &BinaryForm, eq: Equivalence) -> Result<bool> {
    let sf = f.signature()?;
    let sg = g.signature()?;
    if sf != sg || f.disc() != g.disc() {
        return Ok(false);
    }
    if sf == (1, 1) {
        Ok(reduce_with(f, eq)?.reduced == reduce_with(g, eq)?.reduced)
    } else {
        Ok(definite_canonical(f, eq) == definite_canonical(g, eq))
    }
}

/// All (x, y) with |x|, |y| ≤ box and q(x, y) = m, ascending.
pub fn solve(f: &BinaryForm, m: &BigInt, bound: u64) -> Vec<(BigInt, BigInt)> {
    let b = bound as i64;
    let mut out = Vec::new();
    for x in -b..=b {
        let x = BigInt::from(x);
        for y in -b..=b {
            let y = BigInt::from(y);
            if f.eval(&x, &y) == *m {
                out.push((x.clone(), y));
            }
        }
    }
    out
}

fn isotropic_lines(f: &BinaryForm) -> Vec<(BigInt, BigInt)> {
    let r = exact_sqrt(&-f.disc()).expect("isotropic");
    let prim = |x: BigInt, y: BigInt| {
        let g = x.gcd(&y);
        (x / &g, y / g)
    };
    if f.a.is_zero() {
        vec![prim(BigInt::one(), BigInt::zero()), prim(-&f.c, BigInt::from(2) * &f.b)]
    } else {
        vec![prim(-&f.b + &r, f.a.clone()), prim(-&f.b - &r, f.a.clone())]
    }
}

fn isotropic_canonical(f: &BinaryForm, eq: Equivalence) -> Reduced {
    let mut best: Option<Reduced> = None;
    for (x0, y0) in isotropic_lines(f) {
        let e = x0.extended_gcd(&y0);
        let (p, q) = if e.gcd.is_one() { (e.x, e.y) } else { (-e.x, -e.y) };
        // second basis vector (−q, p) gives determinant x0·p + y0·q = 1
        let (mut x1, mut y1) = (-q, p);
        let mut bp = f.pair((&x0, &y0), (&x1, &y1));
        if eq == Equivalence::General && bp.is_negative() {
            x1 = -x1;
            y1 = -y1;
            bp = -bp;
        }
        let cp = f.eval(&x1, &y1);
        let two_k = BigInt::from(2) * bp.abs();
        let target = -((-&cp).mod_floor(&two_k));
        let j = (&target - &cp) / (BigInt::from(2) * &bp);
        let t: Mat2 = [[x0.clone(), &x1 + &j * &x0], [y0.clone(), &y1 + &j * &y0]];
        let cand = Reduced { reduced: f.transform(&t), transform: t };
        let better = match &best {
            None => true,
            Some(b) => (&cand.reduced.b, &cand.reduced.c) > (&b.reduced.b, &b.reduced.c),
        };
        if better {
            best = Some(cand);
        }
    }
    best.expect("two isotropic lines")
}

/// Forms here are (A, B, C) = (a, 2b, c) with Δ = B² − 4AC.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Abc(BigInt, BigInt, BigInt);

fn step_matrix(t: &BigInt) -> Mat2 {
    [[BigInt::zero(), -BigInt::one()], [BigInt::one(), t.clone()]]
}

fn rho(f: &Abc, delta: &BigInt, s: &BigInt) -> (Abc, BigInt) {
    let Abc(_, b, c) = f;
    let c_abs = c.abs();
    let two_c = BigInt::from(2) * &c_abs;
    let bp = if &c_abs <= s {
        s - (s + b).mod_floor(&two_c)
    } else {
        let r = (-b).mod_floor(&two_c);
        if r > c_abs {
            r - &two_c
        } else {
            r
        }
    };
    let t = (&bp + b) / (BigInt::from(2) * c);
    let ap = (&bp * &bp - delta) / (BigInt::from(4) * c);
    (Abc(c.clone(), bp, ap), t)
}

fn is_reduced(f: &Abc, s: &BigInt) -> bool {
    let Abc(a, b, _) = f;
    let two_a = BigInt::from(2) * a.abs();
    b.is_positive() && b <= s && two_a <= s + b && two_a > s - b
}

fn reduced_cycle(start: &Abc, t0: Mat2, delta: &BigInt, s: &BigInt) -> Vec<(Abc, Mat2)> {
    let mut f = start.clone();
    let mut t = t0;
    let mut guard = 0usize;
    while !is_reduced(&f, s) {
        let (g, k) = rho(&f, delta, s);
        t = mat2_mul(&t, &step_matrix(&k));
        f = g;
        guard += 1;
        assert!(guard < 100_000, "reduction did not terminate");
    }
    let first = f.clone();
    let mut out = vec![(f.clone(), t.clone())];
    loop {
        let (g, k) = rho(&f, delta, s);
        t = mat2_mul(&t, &step_matrix(&k));
        f = g;
        if f == first {
            break;
        }
        out.push((f.clone(), t.clone()));
    }
    out
}

fn anisotropic_canonical(f: &BinaryForm, eq: Equivalence) -> Reduced {
    let two = BigInt::from(2);
    let start = Abc(f.a.clone(), &two * &f.b, f.c.clone());
    let delta = &start.1 * &start.1 - BigInt::from(4) * &start.0 * &start.2;
    let s = isqrt(&delta);
    let mut all = reduced_cycle(&start, mat2_identity(), &delta, &s);
    if eq == Equivalence::General {
        let flipped = Abc(start.0.clone(), -&start.1, start.2.clone());
        all.extend(reduced_cycle(&flipped, mat2(1, 0, 0, -1), &delta, &s));
    }
    let (g, t) = all.into_iter().min_by(|x, y| x.0.cmp(&y.0)).expect("nonempty cycle");
    Reduced { reduced: BinaryForm { a: g.0, b: g.1 / &two, c: g.2 }, transform: t }
}

/// Gauss-reduced representative of a definite form.
fn definite_canonical(f: &BinaryForm, eq: Equivalence) -> BinaryForm {
    let neg = f.a.is_negative();
    let (mut a, mut b, mut c) = if neg {
        (-&f.a, -&f.b, -&f.c)
    } else {
        (f.a.clone(), f.b.clone(), f.c.clone())
    };
    loop {
        // bring 2b into (−a, a]
        let two_a = BigInt::from(2) * &a;
        let k = (BigInt::from(2) * &b + &a - BigInt::one()).div_floor(&two_a);
        if !k.is_zero() {
            c = &c - BigInt::from(2) * &k * &b + &k * &k * &a;
            b = &b - &k * &a;
        }
        if c < a {
            std::mem::swap(&mut a, &mut c);
            b = -b;
        } else {
            break;
        }
    }
    if eq == Equivalence::General || a == c || BigInt::from(2) * &b == a {
        b = b.abs();
    }
    if neg {
        BinaryForm { a: -a, b: -b, c: -c }
    } else {
        BinaryForm { a, b, c }
    }
}
