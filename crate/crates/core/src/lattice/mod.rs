//! Integral lattices given by Gram matrices, their vectors and dual vectors.

mod echelon;
mod mukai;

pub use echelon::{column_echelon, Echelon};
pub use mukai::{DiscGroup, MarkedMukaiSetup};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, content};
use crate::error::{Error, Result};
use crate::serde_big;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LatticeRepr")]
pub struct Lattice {
    rank: usize,
    #[serde(with = "serde_big::mat")]
    gram: Vec<Vec<BigInt>>,
    labels: Vec<String>,
}

#[derive(Deserialize)]
struct LatticeRepr {
    rank: usize,
    #[serde(with = "serde_big::mat")]
    gram: Vec<Vec<BigInt>>,
    #[serde(default)]
    labels: Vec<String>,
}

impl TryFrom<LatticeRepr> for Lattice {
    type Error = Error;

    fn try_from(r: LatticeRepr) -> Result<Self> {
        let l = Lattice::with_labels(r.gram, r.labels)?;
        if l.rank != r.rank {
            return Err(Error::RankMismatch { expected: r.rank, got: l.rank });
        }
        Ok(l)
    }
}

/// Integer coordinates in the distinguished basis of some lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeVector {
    #[serde(with = "serde_big::vec")]
    pub coords: Vec<BigInt>,
}

/// A rational vector `coords / denom` in the basis of a lattice, kept in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualVector {
    #[serde(with = "serde_big::vec")]
    pub coords: Vec<BigInt>,
    #[serde(with = "serde_big::scalar")]
    pub denom: BigInt,
}

impl Lattice {
    pub fn new(gram: Vec<Vec<BigInt>>) -> Result<Self> {
        Self::with_labels(gram, Vec::new())
    }

    pub fn with_labels(gram: Vec<Vec<BigInt>>, labels: Vec<String>) -> Result<Self> {
        let rank = gram.len();
        if rank == 0 || gram.iter().any(|r| r.len() != rank) {
            return Err(Error::NotSquare);
        }
        for i in 0..rank {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
            if gram[i][i].is_odd() {
                return Err(Error::NotEven);
            }
        }
        let labels = if labels.is_empty() {
            (0..rank).map(|i| format!("b{i}")).collect()
        } else if labels.len() == rank {
            labels
        } else {
            return Err(Error::RankMismatch { expected: rank, got: labels.len() });
        };
        Ok(Lattice { rank, gram, labels })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(arith::mat_from_i64(rows))
    }

    /// The hyperbolic plane U with basis labels `e`, `f`.
    pub fn hyperbolic(e: &str, f: &str) -> Self {
        Self::with_labels(
            arith::mat_from_i64(&[&[0, 1], &[1, 0]]),
            vec![e.to_string(), f.to_string()],
        )
        .expect("U is valid")
    }

    /// −E8: the negated Cartan matrix of E8.
    pub fn e8_negative(prefix: &str) -> Self {
        let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
        let mut g = vec![vec![BigInt::zero(); 8]; 8];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = BigInt::from(-2);
        }
        for &(i, j) in &edges {
            g[i][j] = BigInt::one();
            g[j][i] = BigInt::one();
        }
        let labels = (1..=8).map(|i| format!("{prefix}{i}")).collect();
        Self::with_labels(g, labels).expect("-E8 is valid")
    }

    /// The rank-one lattice ⟨q⟩.
    pub fn rank_one(q: BigInt, label: &str) -> Result<Self> {
        Self::with_labels(vec![vec![q]], vec![label.to_string()])
    }

    pub fn direct_sum(parts: &[&Lattice]) -> Self {
        let rank: usize = parts.iter().map(|p| p.rank).sum();
        let mut g = vec![vec![BigInt::zero(); rank]; rank];
        let mut labels = Vec::with_capacity(rank);
        let mut off = 0;
        for p in parts {
            for i in 0..p.rank {
                for j in 0..p.rank {
                    g[off + i][off + j] = p.gram[i][j].clone();
                }
            }
            labels.extend(p.labels.iter().cloned());
            off += p.rank;
        }
        Self::with_labels(g, labels).expect("direct sum of valid lattices")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &[Vec<BigInt>] {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn check(&self, x: &LatticeVector) -> Result<()> {
        if x.coords.len() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, got: x.coords.len() });
        }
        Ok(())
    }

    pub fn vector(&self, coords: Vec<BigInt>) -> Result<LatticeVector> {
        let v = LatticeVector { coords };
        self.check(&v)?;
        Ok(v)
    }

    pub fn basis_vector(&self, i: usize) -> LatticeVector {
        let mut c = vec![BigInt::zero(); self.rank];
        c[i] = BigInt::one();
        LatticeVector { coords: c }
    }

    /// Vector from a sparse combination of labelled basis vectors.
    pub fn combo(&self, terms: &[(i64, &str)]) -> Result<LatticeVector> {
        let mut c = vec![BigInt::zero(); self.rank];
        for &(k, label) in terms {
            let i = self
                .label_index(label)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown basis label {label}")))?;
            c[i] += k;
        }
        Ok(LatticeVector { coords: c })
    }

    /// Gram-matrix image `G x`.
    pub fn apply_gram(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.gram
            .iter()
            .map(|row| row.iter().zip(x).map(|(g, c)| g * c).sum())
            .collect()
    }

    pub fn pair(&self, x: &LatticeVector, y: &LatticeVector) -> Result<BigInt> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.pair_raw(&x.coords, &y.coords))
    }

    pub(crate) fn pair_raw(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        self.apply_gram(y).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn square(&self, x: &LatticeVector) -> Result<BigInt> {
        self.pair(x, x)
    }

    /// Pairing of a dual vector with a lattice vector.
    pub fn pair_dual(&self, x: &DualVector, y: &LatticeVector) -> Result<BigRational> {
        self.check(y)?;
        if x.coords.len() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, got: x.coords.len() });
        }
        Ok(BigRational::new(self.pair_raw(&x.coords, &y.coords), x.denom.clone()))
    }

    /// Gram matrix of a list of vectors.
    pub fn gram_of(&self, vs: &[LatticeVector]) -> Result<Vec<Vec<BigInt>>> {
        for v in vs {
            self.check(v)?;
        }
        Ok(vs
            .iter()
            .map(|x| vs.iter().map(|y| self.pair_raw(&x.coords, &y.coords)).collect())
            .collect())
    }

    pub fn discriminant(&self) -> BigInt {
        arith::det(&self.gram)
    }

    /// gcd of (ρ, x) over the basis of this lattice.
    pub fn divisibility(&self, rho: &LatticeVector) -> Result<BigInt> {
        self.check(rho)?;
        if rho.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(content(&self.apply_gram(&rho.coords)))
    }

    /// Orthogonal basis of the rational span of the lattice (Lagrange diagonalization),
    /// returned as integral vectors together with their squares.
    pub fn diagonalize(&self) -> Vec<(Vec<BigInt>, BigInt)> {
        let r = self.rank;
        let q = |x: &[BigRational], y: &[BigRational]| -> BigRational {
            let mut s = BigRational::zero();
            for i in 0..r {
                if x[i].is_zero() {
                    continue;
                }
                for j in 0..r {
                    if !y[j].is_zero() && !self.gram[i][j].is_zero() {
                        s += &x[i] * &y[j] * BigRational::from_integer(self.gram[i][j].clone());
                    }
                }
            }
            s
        };
        let mut remaining: Vec<Vec<BigRational>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        while !remaining.is_empty() {
            let pick = remaining.iter().position(|w| !q(w, w).is_zero());
            let idx = match pick {
                Some(i) => i,
                None => {
                    let mut found = None;
                    'outer: for i in 0..remaining.len() {
                        for j in i + 1..remaining.len() {
                            if !q(&remaining[i], &remaining[j]).is_zero() {
                                found = Some((i, j));
                                break 'outer;
                            }
                        }
                    }
                    match found {
                        Some((i, j)) => {
                            let sum: Vec<BigRational> = remaining[i]
                                .iter()
                                .zip(&remaining[j])
                                .map(|(a, b)| a + b)
                                .collect();
                            remaining[i] = sum;
                            i
                        }
                        None => {
                            for w in remaining.drain(..) {
                                out.push((integral(&w), BigInt::zero()));
                            }
                            break;
                        }
                    }
                }
            };
            let w = remaining.remove(idx);
            let ww = q(&w, &w);
            for x in remaining.iter_mut() {
                let c = q(x, &w) / &ww;
                for (xi, wi) in x.iter_mut().zip(&w) {
                    *xi -= &c * wi;
                }
            }
            let wi = integral(&w);
            let sq = self.pair_raw(&wi, &wi);
            out.push((wi, sq));
        }
        out
    }

    /// Numbers of positive and negative squares.
    pub fn signature(&self) -> (usize, usize) {
        let d = self.diagonalize();
        let p = d.iter().filter(|(_, s)| s.is_positive()).count();
        let n = d.iter().filter(|(_, s)| s.is_negative()).count();
        (p, n)
    }
}

fn integral(w: &[BigRational]) -> Vec<BigInt> {
    let l = w
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let v: Vec<BigInt> = w.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let c = content(&v);
    if c.is_zero() || c.is_one() {
        v
    } else {
        v.into_iter().map(|x| x / &c).collect()
    }
}

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticeVector { coords }
    }

    pub fn from_i64(xs: &[i64]) -> Self {
        LatticeVector { coords: arith::vec_from_i64(xs) }
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector { coords: vec![BigInt::zero(); rank] }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn content(&self) -> BigInt {
        content(&self.coords)
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// The primitive vector on the same ray.
    pub fn primitive(&self) -> Result<LatticeVector> {
        let c = self.content();
        if c.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(LatticeVector { coords: self.coords.iter().map(|x| x / &c).collect() })
    }

    pub fn add(&self, o: &LatticeVector) -> LatticeVector {
        debug_assert_eq!(self.len(), o.len());
        LatticeVector { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &LatticeVector) -> LatticeVector {
        debug_assert_eq!(self.len(), o.len());
        LatticeVector { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> LatticeVector {
        LatticeVector { coords: self.coords.iter().map(|a| a * k).collect() }
    }

    pub fn neg(&self) -> LatticeVector {
        LatticeVector { coords: self.coords.iter().map(|a| -a).collect() }
    }

    /// `a·self + b·o`.
    pub fn combine(&self, a: &BigInt, o: &LatticeVector, b: &BigInt) -> LatticeVector {
        LatticeVector {
            coords: self.coords.iter().zip(&o.coords).map(|(x, y)| a * x + b * y).collect(),
        }
    }

    /// Divide every coordinate by `d`, failing unless the division is exact.
    pub fn div_exact(&self, d: &BigInt) -> Result<LatticeVector> {
        if d.is_zero() {
            return Err(Error::Divisibility("division by zero".into()));
        }
        let mut out = Vec::with_capacity(self.len());
        for c in &self.coords {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return Err(Error::Divisibility(format!("{c} is not divisible by {d}")));
            }
            out.push(q);
        }
        Ok(LatticeVector { coords: out })
    }
}

impl DualVector {
    /// `coords / denom` in lowest terms with positive denominator.
    pub fn new(coords: Vec<BigInt>, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        let g = content(&coords).gcd(&denom);
        let sign = if denom.is_negative() { -BigInt::one() } else { BigInt::one() };
        let g = g * sign;
        Ok(DualVector {
            coords: coords.iter().map(|c| c / &g).collect(),
            denom: denom / g,
        })
    }

    pub fn from_vector(v: &LatticeVector) -> Self {
        DualVector { coords: v.coords.clone(), denom: BigInt::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// The vector `denom · self`, which is integral.
    pub fn numerator(&self) -> LatticeVector {
        LatticeVector { coords: self.coords.clone() }
    }

    pub fn scale(&self, k: &BigRational) -> DualVector {
        let coords = self.coords.iter().map(|c| c * k.numer()).collect();
        DualVector::new(coords, &self.denom * k.denom()).expect("nonzero denominator")
    }
}
