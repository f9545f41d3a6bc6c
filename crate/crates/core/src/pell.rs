//! Generalized Pell equations x² − D y² = N.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{divisors, exact_sqrt};
use crate::error::{Error, Result};
use crate::surd::{expand, QuadraticSurd};

type Pair = (BigInt, BigInt);

fn check_nonsquare(d: &BigInt) -> Result<()> {
    if !d.is_positive() || exact_sqrt(d).is_some() {
        return Err(Error::InvalidArgument(format!("{d} is not a positive non-square")));
    }
    Ok(())
}

/// Smallest solution of x² − D y² = 1 with y > 0.
pub fn fundamental_unit(d: &BigInt) -> Result<Pair> {
    check_nonsquare(d)?;
    let start = QuadraticSurd::new(BigInt::zero(), d.clone(), BigInt::one())?;
    let ex = expand(&start, 2);
    let (mut a1, mut a2) = (BigInt::one(), BigInt::zero());
    let (mut b1, mut b2) = (BigInt::zero(), BigInt::one());
    for a in &ex.quotients {
        let an = a * &a1 + &a2;
        let bn = a * &b1 + &b2;
        a2 = std::mem::replace(&mut a1, an);
        b2 = std::mem::replace(&mut b1, bn);
        if &a1 * &a1 - d * &b1 * &b1 == BigInt::one() {
            return Ok((a1, b1));
        }
    }
    unreachable!("two periods always contain the fundamental unit")
}

/// Multiply (x, y) by ε^{±1} where ε = x₁ + y₁√D.
pub fn unit_step(p: &Pair, unit: &Pair, d: &BigInt, forward: bool) -> Pair {
    let (x, y) = p;
    let (x1, y1) = unit;
    if forward {
        (x * x1 + d * y * y1, x * y1 + y * x1)
    } else {
        (x * x1 - d * y * y1, y * x1 - x * y1)
    }
}

/// One primitive solution per class of x² − D y² = N (Lagrange–Matthews–Mollin),
/// normalized to x ≥ 0.
pub fn primitive_classes(d: &BigInt, n: &BigInt) -> Result<Vec<Pair>> {
    check_nonsquare(d)?;
    if n.is_zero() {
        return Err(Error::InvalidArgument("N must be nonzero".into()));
    }
    let m = n.abs();
    let mut out = BTreeSet::new();
    // z ∈ (−|N|/2, |N|/2] with z² ≡ D mod |N|
    let lo = -((&m - 1u32) / 2u32);
    let hi = &m / 2u32;
    let mut z = lo;
    while z <= hi {
        if (&z * &z - d).is_multiple_of(&m) {
            let start = QuadraticSurd::new(z.clone(), d.clone(), m.clone())?;
            let ex = expand(&start, 2);
            let (mut a1, mut a2) = (BigInt::one(), BigInt::zero());
            let (mut b1, mut b2) = (BigInt::zero(), BigInt::one());
            for (i, (a, st)) in ex.quotients.iter().zip(&ex.states).enumerate() {
                let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                if st.q.abs().is_one() && sign * &st.q * &m == *n {
                    let x = &m * &a1 - &z * &b1;
                    let y = b1.clone();
                    debug_assert_eq!(&x * &x - d * &y * &y, *n);
                    out.insert(if x.is_negative() { (-x, -y) } else { (x, y) });
                }
                let an = a * &a1 + &a2;
                let bn = a * &b1 + &b2;
                a2 = std::mem::replace(&mut a1, an);
                b2 = std::mem::replace(&mut b1, bn);
            }
        }
        z += 1;
    }
    Ok(out.into_iter().collect())
}

/// Class representatives of all solutions, primitive or not.
pub fn class_representatives(d: &BigInt, n: &BigInt) -> Result<Vec<Pair>> {
    let mut out = BTreeSet::new();
    let m = n.abs();
    let mut f = BigInt::one();
    while &f * &f <= m {
        let f2 = &f * &f;
        if m.is_multiple_of(&f2) {
            for (x, y) in primitive_classes(d, &(n / &f2))? {
                out.insert((&f * x, &f * y));
            }
        }
        f += 1;
    }
    Ok(out.into_iter().collect())
}

/// Order of ε acting on (ℤ[√D]/M) up to sign: the least j with ε^j ≡ ±1 mod M.
pub fn unit_order_mod(unit: &Pair, d: &BigInt, modulus: &BigInt) -> usize {
    let one = BigInt::one().mod_floor(modulus);
    let minus = (-BigInt::one()).mod_floor(modulus);
    let reduce = |p: Pair| (p.0.mod_floor(modulus), p.1.mod_floor(modulus));
    let mut cur = reduce(unit.clone());
    let mut j = 1;
    while !(cur.1.is_zero() && (cur.0 == one || cur.0 == minus)) {
        cur = reduce(unit_step(&cur, unit, d, true));
        j += 1;
    }
    j
}

/// Solutions of x² − D y² = N near the point where each unit orbit crosses
/// y = 0: for each class and its conjugate, the element with least y ≥ 0 and
/// the J elements on either side of it, together with their negatives, where
/// J is the order of ε modulo `modulus` up to sign. Every orbit element is
/// congruent modulo `modulus` to one of these.
pub fn solutions_near_crossing(d: &BigInt, n: &BigInt, modulus: &BigInt) -> Result<BTreeSet<Pair>> {
    if !n.is_positive() {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let unit = fundamental_unit(d)?;
    let window = unit_order_mod(&unit, d, modulus);
    let mut res = BTreeSet::new();
    for (x, y) in class_representatives(d, n)? {
        // x > 0 puts x + y√D on the positive branch, where forward steps raise y
        for start in [(x.clone(), y.clone()), (x, -y)] {
            let mut p = start;
            while p.1.is_negative() {
                p = unit_step(&p, &unit, d, true);
            }
            loop {
                let back = unit_step(&p, &unit, d, false);
                if back.1.is_negative() {
                    break;
                }
                p = back;
            }
            let mut fwd = p.clone();
            let mut bwd = p;
            res.insert((-&fwd.0, -&fwd.1));
            res.insert(fwd.clone());
            for _ in 0..window {
                fwd = unit_step(&fwd, &unit, d, true);
                bwd = unit_step(&bwd, &unit, d, false);
                for q in [&fwd, &bwd] {
                    res.insert((-&q.0, -&q.1));
                    res.insert(q.clone());
                }
            }
        }
    }
    Ok(res)
}

/// All solutions of x² − r² y² = N for N > 0, via N = (x − r y)(x + r y).
pub fn square_solutions(r: &BigInt, n: &BigInt) -> Result<Vec<Pair>> {
    if !r.is_positive() || !n.is_positive() {
        return Err(Error::InvalidArgument("need r > 0 and N > 0".into()));
    }
    let mut out = BTreeSet::new();
    for d1 in divisors(n) {
        let d2 = n / &d1;
        let sum = &d1 + &d2;
        let diff = &d2 - &d1;
        if sum.is_odd() || !diff.is_multiple_of(&(BigInt::from(2) * r)) {
            continue;
        }
        let x = sum / 2u32;
        let y = diff / (BigInt::from(2) * r);
        for (sx, sy) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            out.insert((&x * sx, &y * sy));
        }
    }
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::big;

    #[test]
    fn units() {
        assert_eq!(fundamental_unit(&big(2)).unwrap(), (big(3), big(2)));
        assert_eq!(fundamental_unit(&big(61)).unwrap(), (big(1766319049), big(226153980)));
        assert!(fundamental_unit(&big(16)).is_err());
    }

    #[test]
    fn classes_solve_equation() {
        for d in [2i64, 3, 5, 7, 13, 456, 1000] {
            for n in [-36i64, -12, -4, -2, -1, 1, 4, 9, 12, 28] {
                for (x, y) in class_representatives(&big(d), &big(n)).unwrap() {
                    assert_eq!(&x * &x - big(d) * &y * &y, big(n));
                }
            }
        }
    }

    #[test]
    fn brute_force_agrees_near_crossing() {
        // every small solution is reached from the crossing window by units
        for d in [2i64, 6, 12, 24, 456] {
            let dd = big(d);
            let unit = fundamental_unit(&dd).unwrap();
            for n in [1i64, 4, 8, 9, 12] {
                let near = solutions_near_crossing(&dd, &big(n), &big(4)).unwrap();
                for y in 0..200i64 {
                    let t = big(n) + &dd * y * y;
                    if let Some(x) = exact_sqrt(&t) {
                        for sol in [(x.clone(), big(y)), (-x, big(y))] {
                            let mut hit = false;
                            for dir in [false, true] {
                                let mut p = sol.clone();
                                for _ in 0..64 {
                                    hit |= near.contains(&p);
                                    p = unit_step(&p, &unit, &dd, dir);
                                }
                            }
                            assert!(hit, "d={d} n={n} y={y}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn square_case() {
        let sols = square_solutions(&big(4), &big(9)).unwrap();
        assert!(sols.contains(&(big(5), big(1))));
        for (x, y) in sols {
            assert_eq!(&x * &x - big(16) * &y * &y, big(9));
        }
    }
}
