//! The Mukai lattice with a marked vector v of square 2n−2.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{DualVector, Lattice, LatticeVector};
use crate::arith::content;
use crate::error::{Error, Result};
use crate::serde_big;

/// Ambient lattice U ⊕ A where U = ⟨e1, f1⟩ carries v = e1 + (n−1)f1 and
/// δ = e1 − (n−1)f1. A is either U³ ⊕ (−E8)² or a declared algebraic part.
/// `unimodular_complement` states that A sits primitively in a unimodular
/// lattice (the K3 lattice), which is what divisibility is measured against.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedMukaiSetup {
    pub n: u64,
    pub ambient: Lattice,
    pub v: LatticeVector,
    pub delta: LatticeVector,
    pub unimodular_complement: bool,
}

/// The cyclic group H₂/H² of order 2(n−1), generated by δ∨.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscGroup {
    #[serde(with = "serde_big::scalar")]
    pub order: BigInt,
}

impl DiscGroup {
    pub fn reduce(&self, c: &BigInt) -> BigInt {
        c.mod_floor(&self.order)
    }

    /// Representative of ±c in [0, order/2].
    pub fn up_to_sign(&self, c: &BigInt) -> BigInt {
        let r = self.reduce(c);
        let s = &self.order - &r;
        if s < r {
            s.mod_floor(&self.order)
        } else {
            r
        }
    }

    pub fn is_unit(&self, c: &BigInt) -> bool {
        c.gcd(&self.order).is_one()
    }
}

impl MarkedMukaiSetup {
    pub fn new(n: u64, algebraic: Option<Lattice>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidN(n));
        }
        let u = Lattice::hyperbolic("e1", "f1");
        let a = match algebraic {
            Some(a) => a,
            None => {
                let parts = [
                    Lattice::hyperbolic("e2", "f2"),
                    Lattice::hyperbolic("e3", "f3"),
                    Lattice::hyperbolic("e4", "f4"),
                    Lattice::e8_negative("x"),
                    Lattice::e8_negative("y"),
                ];
                let refs: Vec<&Lattice> = parts.iter().collect();
                Lattice::direct_sum(&refs)
            }
        };
        let ambient = Lattice::direct_sum(&[&u, &a]);
        let m = BigInt::from(n - 1);
        let mut v = LatticeVector::zero(ambient.rank());
        v.coords[0] = BigInt::one();
        v.coords[1] = m.clone();
        let mut delta = LatticeVector::zero(ambient.rank());
        delta.coords[0] = BigInt::one();
        delta.coords[1] = -m;
        Ok(MarkedMukaiSetup { n, ambient, v, delta, unimodular_complement: true })
    }

    pub fn with_unimodular_complement(mut self, flag: bool) -> Self {
        self.unimodular_complement = flag;
        self
    }

    /// n − 1.
    pub fn m(&self) -> BigInt {
        BigInt::from(self.n - 1)
    }

    /// 2(n − 1) = (v,v) = −(δ,δ).
    pub fn two_m(&self) -> BigInt {
        BigInt::from(2 * (self.n - 1))
    }

    pub fn algebraic_rank(&self) -> usize {
        self.ambient.rank() - 2
    }

    /// Gram matrix of the declared part A.
    pub fn algebraic_gram(&self) -> Vec<Vec<BigInt>> {
        self.ambient.gram()[2..].iter().map(|r| r[2..].to_vec()).collect()
    }

    pub fn pair(&self, x: &LatticeVector, y: &LatticeVector) -> Result<BigInt> {
        self.ambient.pair(x, y)
    }

    /// Write ρ ∈ v⊥ as k·δ + y with y in A.
    pub fn h2_coords(&self, rho: &LatticeVector) -> Result<(BigInt, Vec<BigInt>)> {
        self.ambient.check(rho)?;
        if !self.ambient.pair_raw(&self.v.coords, &rho.coords).is_zero() {
            return Err(Error::NotInVPerp);
        }
        Ok((rho.coords[0].clone(), rho.coords[2..].to_vec()))
    }

    /// Ambient vector k·δ + y.
    pub fn from_h2(&self, k: &BigInt, y: &[BigInt]) -> Result<LatticeVector> {
        if y.len() != self.algebraic_rank() {
            return Err(Error::RankMismatch { expected: self.algebraic_rank(), got: y.len() });
        }
        let mut c = vec![k.clone(), -(k * self.m())];
        c.extend(y.iter().cloned());
        Ok(LatticeVector::new(c))
    }

    /// H² = v⊥ = ℤδ ⊕ A with basis (δ, A-basis), and that basis in ambient coordinates.
    pub fn h2_lattice(&self) -> (Lattice, Vec<LatticeVector>) {
        let r = self.algebraic_rank();
        let mut basis = vec![self.delta.clone()];
        for i in 0..r {
            basis.push(self.ambient.basis_vector(i + 2));
        }
        let gram = self.ambient.gram_of(&basis).expect("basis in ambient");
        let mut labels = vec!["delta".to_string()];
        labels.extend(self.ambient.labels()[2..].iter().cloned());
        (Lattice::with_labels(gram, labels).expect("even sublattice"), basis)
    }

    /// dv(ρ): the positive generator of (ρ, H²).
    pub fn divisibility(&self, rho: &LatticeVector) -> Result<BigInt> {
        let (k, y) = self.h2_coords(rho)?;
        if k.is_zero() && y.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroVector);
        }
        let along_delta = &k * self.two_m();
        let rest = if self.unimodular_complement {
            content(&y)
        } else {
            let g = self.algebraic_gram();
            let gy: Vec<BigInt> = g
                .iter()
                .map(|row| row.iter().zip(&y).map(|(a, b)| a * b).sum())
                .collect();
            content(&gy)
        };
        Ok(along_delta.gcd(&rest))
    }

    pub fn disc_group(&self) -> DiscGroup {
        DiscGroup { order: self.two_m() }
    }

    /// Class of ρ/dv(ρ) in H₂/H² ≅ ℤ/2(n−1), as a multiple of δ∨ in [0, 2(n−1)).
    pub fn disc_class(&self, rho: &LatticeVector) -> Result<BigInt> {
        if !self.unimodular_complement {
            let d = crate::arith::det(&self.algebraic_gram());
            if d.abs() != BigInt::one() {
                return Err(Error::Unsupported(
                    "discriminant group of a non-unimodular declared part".into(),
                ));
            }
        }
        let dv = self.divisibility(rho)?;
        let (k, _) = self.h2_coords(rho)?;
        let c = (self.two_m() * k) / dv;
        Ok(c.mod_floor(&self.two_m()))
    }

    /// θ∨(a) = a − ((a,v)/(v,v))·v.
    pub fn theta_dual(&self, a: &LatticeVector) -> Result<DualVector> {
        let av = self.ambient.pair(a, &self.v)?;
        let vv = self.two_m();
        let num = a.combine(&vv, &self.v, &-av);
        DualVector::new(num.coords, vv)
    }

    /// δ∨ = δ / 2(n−1).
    pub fn delta_dual(&self) -> DualVector {
        DualVector::new(self.delta.coords.clone(), self.two_m()).expect("nonzero")
    }
}
