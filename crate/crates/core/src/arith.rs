//! Small integer helpers on top of `num`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

/// Floor square root of a nonnegative integer.
pub fn isqrt(x: &BigInt) -> BigInt {
    assert!(!x.is_negative(), "isqrt of a negative number");
    x.sqrt()
}

pub fn exact_sqrt(x: &BigInt) -> Option<BigInt> {
    if x.is_negative() {
        return None;
    }
    let r = x.sqrt();
    (&r * &r == *x).then_some(r)
}

/// Gcd of all entries (zero for the zero vector).
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Compare a/b with c/d for positive denominators.
pub fn cmp_frac(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> Ordering {
    debug_assert!(b.is_positive() && d.is_positive());
    (a * d).cmp(&(c * b))
}

/// Positive divisors of |n| in increasing order, by trial division.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Integer determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose(a: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_from_i64(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn vec_from_i64(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_small() {
        assert_eq!(det(&mat_from_i64(&[&[12, 5], &[5, -2]])), big(-49));
        assert_eq!(det(&mat_from_i64(&[&[0, 1], &[1, 0]])), big(-1));
        assert_eq!(
            det(&mat_from_i64(&[&[0, 2, 1], &[2, 0, 3], &[1, 3, 0]])),
            big(12)
        );
    }

    #[test]
    fn divisor_list() {
        assert_eq!(divisors(&big(12)), vec_from_i64(&[1, 2, 3, 4, 6, 12]));
        assert_eq!(divisors(&big(-9)), vec_from_i64(&[1, 3, 9]));
    }

    #[test]
    fn square_roots() {
        assert_eq!(exact_sqrt(&big(49)), Some(big(7)));
        assert_eq!(exact_sqrt(&big(50)), None);
        assert_eq!(isqrt(&big(114 * 4)), big(21));
    }
}
