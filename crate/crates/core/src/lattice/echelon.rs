//! Integer column echelon form with unimodular transforms; used for
//! kernels (orthogonal complements) and saturations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Lattice, LatticeVector};
use crate::arith;
use crate::error::{Error, Result};

/// `reduced = input · u`, with `u` unimodular and `u_inv` its inverse.
/// Row `i < rank` of `reduced` has its pivot in column `i`; columns from
/// `rank` on are zero.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Vec<Vec<BigInt>>,
    pub u: Vec<Vec<BigInt>>,
    pub u_inv: Vec<Vec<BigInt>>,
    pub rank: usize,
}

fn col_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let t = &row[src] * q;
        row[dst] -= t;
    }
}

fn col_swap(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

fn col_neg(m: &mut [Vec<BigInt>], a: usize) {
    for row in m.iter_mut() {
        row[a] = -&row[a];
    }
}

pub fn column_echelon(input: &[Vec<BigInt>], ncols: usize) -> Echelon {
    let mut b: Vec<Vec<BigInt>> = input.to_vec();
    let mut u = arith::identity(ncols);
    let mut ui = arith::identity(ncols);
    let mut p = 0usize;
    for row in 0..b.len() {
        if p == ncols {
            break;
        }
        loop {
            let best = (p..ncols)
                .filter(|&j| !b[row][j].is_zero())
                .min_by(|&x, &y| b[row][x].abs().cmp(&b[row][y].abs()));
            let Some(j0) = best else { break };
            if j0 != p {
                col_swap(&mut b, j0, p);
                col_swap(&mut u, j0, p);
                ui.swap(j0, p);
            }
            let mut clean = true;
            for j in p + 1..ncols {
                if b[row][j].is_zero() {
                    continue;
                }
                let q = b[row][j].div_floor(&b[row][p]);
                col_axpy(&mut b, j, p, &q);
                col_axpy(&mut u, j, p, &q);
                // row_p(u_inv) += q · row_j(u_inv)
                let add: Vec<BigInt> = ui[j].iter().map(|x| x * &q).collect();
                for (x, a) in ui[p].iter_mut().zip(add) {
                    *x += a;
                }
                if !b[row][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                if b[row][p].is_negative() {
                    col_neg(&mut b, p);
                    col_neg(&mut u, p);
                    for x in ui[p].iter_mut() {
                        *x = -&*x;
                    }
                }
                p += 1;
                break;
            }
        }
    }
    Echelon { reduced: b, u, u_inv: ui, rank: p }
}

fn normalize_sign(mut v: Vec<BigInt>) -> Vec<BigInt> {
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in v.iter_mut() {
                *x = -&*x;
            }
        }
    }
    v
}

impl Lattice {
    /// Saturated orthogonal complement of `s` with its induced Gram matrix and
    /// the basis vectors expressed in this lattice.
    pub fn orthogonal_complement(&self, s: &[LatticeVector]) -> Result<(Lattice, Vec<LatticeVector>)> {
        for x in s {
            self.check(x)?;
        }
        let rows: Vec<Vec<BigInt>> = s.iter().map(|x| self.apply_gram(&x.coords)).collect();
        let ech = column_echelon(&rows, self.rank());
        let basis: Vec<LatticeVector> = (ech.rank..self.rank())
            .map(|j| {
                let col: Vec<BigInt> = ech.u.iter().map(|row| row[j].clone()).collect();
                LatticeVector::new(normalize_sign(col))
            })
            .collect();
        if basis.is_empty() {
            return Err(Error::Unsupported("orthogonal complement is zero".into()));
        }
        let labels = (0..basis.len()).map(|i| format!("k{i}")).collect();
        let sub = Lattice::with_labels(self.gram_of(&basis)?, labels)?;
        Ok((sub, basis))
    }

    /// Basis of (span ⊗ Q) ∩ L together with the index of the span in it.
    pub fn saturate(&self, span: &[LatticeVector]) -> Result<(Vec<LatticeVector>, BigInt)> {
        for x in span {
            self.check(x)?;
        }
        if span.is_empty() {
            return Err(Error::InvalidArgument("empty span".into()));
        }
        let rows: Vec<Vec<BigInt>> = span.iter().map(|x| x.coords.clone()).collect();
        let ech = column_echelon(&rows, self.rank());
        if ech.rank < span.len() {
            return Err(Error::DependentSpan);
        }
        let k = span.len();
        let index = (0..k).fold(BigInt::one(), |acc, i| acc * &ech.reduced[i][i]);
        let basis = (0..k).map(|i| LatticeVector::new(ech.u_inv[i].clone())).collect();
        Ok((basis, index.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{big, mat_mul};

    fn lat(rows: &[&[i64]]) -> Lattice {
        Lattice::from_i64(rows).unwrap()
    }

    #[test]
    fn transforms_are_inverse() {
        let m = arith::mat_from_i64(&[&[4, 6, 10], &[3, -9, 2]]);
        let e = column_echelon(&m, 3);
        assert_eq!(mat_mul(&e.u, &e.u_inv), arith::identity(3));
        assert_eq!(mat_mul(&m, &e.u), e.reduced);
        assert_eq!(e.rank, 2);
    }

    #[test]
    fn delta_spans_v_perp_in_u() {
        for n in 2..9i64 {
            let u = Lattice::hyperbolic("e1", "f1");
            let v = LatticeVector::from_i64(&[1, n - 1]);
            let (sub, basis) = u.orthogonal_complement(&[v]).unwrap();
            assert_eq!(basis, vec![LatticeVector::from_i64(&[1, 1 - n])]);
            assert_eq!(sub.gram()[0][0], big(-2 * (n - 1)));
        }
    }

    #[test]
    fn empty_complement_is_whole_lattice() {
        let h = lat(&[&[10, 5], &[5, 2]]);
        let (sub, _) = h.orthogonal_complement(&[]).unwrap();
        assert_eq!(sub.discriminant(), h.discriminant());
    }

    #[test]
    fn spherical_generator_of_v_perp() {
        let h = lat(&[&[10, 5], &[5, 2]]);
        let (sub, basis) = h.orthogonal_complement(&[LatticeVector::from_i64(&[1, 0])]).unwrap();
        assert_eq!(basis, vec![LatticeVector::from_i64(&[1, -2])]);
        assert_eq!(sub.gram()[0][0], big(-2));
    }

    #[test]
    fn index_three_lagrangian() {
        let h = lat(&[&[28, 14], &[14, 6]]);
        let v = LatticeVector::from_i64(&[1, 0]);
        let a1 = LatticeVector::from_i64(&[-1, 3]);
        let (basis, idx) = h.saturate(&[v, a1]).unwrap();
        assert_eq!(idx, big(3));
        let g = h.gram_of(&basis).unwrap();
        assert_eq!(arith::det(&g), big(-28));
    }

    #[test]
    fn dependent_span_is_rejected() {
        let h = lat(&[&[2, 0], &[0, 2]]);
        let x = LatticeVector::from_i64(&[1, 1]);
        let y = LatticeVector::from_i64(&[2, 2]);
        assert_eq!(h.saturate(&[x, y]), Err(Error::DependentSpan));
    }
}
