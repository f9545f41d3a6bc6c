//! Pell-guided and exhaustive Mori generators on the grid n ≤ 5, f² ≤ 200.

use hksym_core::mori::*;
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

fn grid() -> Vec<(u64, i64)> {
    (2..=5u64).flat_map(|n| (2..=200).step_by(2).map(move |f| (n, f))).collect()
}

#[test]
fn pell_route_matches_exhaustive_scan() {
    let bad: Vec<String> = grid()
        .par_iter()
        .filter_map(|&(n, f)| {
            let s = PicardSetup::from_i64(n, f).unwrap();
            let p = mori_generators(&s).unwrap();
            let e = mori_generators_exhaustive(&s, 10_000_000).unwrap();
            (p.second_ray.wall_ray() != e.second_ray.wall_ray()).then(|| format!("n={n} f²={f}"))
        })
        .collect();
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn wall_squares_respect_window() {
    grid().par_iter().for_each(|&(n, f)| {
        let s = PicardSetup::from_i64(n, f).unwrap();
        let w = enumerate_walls_rank3(&s, 40).unwrap();
        assert!(w.below_window.is_empty(), "n={n} f²={f}");
        for wall in &w.walls {
            assert!(wall.rho_sq >= bound_window(n));
            assert!(wall.rho_sq < BigInt::zero() || wall.ray == Ray::delta());
            // R = ρ/dv satisfies 2R² ≥ −(n+3)
            let r2x2 = BigInt::from(2) * &wall.rho_sq;
            assert!(r2x2 >= -BigInt::from(n + 3) * &wall.dv * &wall.dv, "n={n} f²={f}");
        }
    });
}

#[test]
fn second_ray_is_among_enumerated_walls() {
    grid().par_iter().for_each(|&(n, f)| {
        let s = PicardSetup::from_i64(n, f).unwrap();
        if let SecondRay::Wall(w) = mori_generators(&s).unwrap().second_ray {
            assert_eq!(s.mukai_lattice().square(&w.a).unwrap(), w.a_sq);
            assert_eq!(s.mukai_lattice().pair(&w.a, &s.v()).unwrap(), w.av);
            assert_eq!(w.ray.square(&s), w.rho_sq);
        }
    });
}

#[test]
fn n3_conditions_agree_with_walls() {
    (2..=200i64).step_by(2).collect::<Vec<_>>().par_iter().for_each(|&f| {
        let s = PicardSetup::from_i64(3, f).unwrap();
        let mori = mori_generators(&s).unwrap();
        let n3 = n3_second_ray(&BigInt::from(f)).unwrap();
        assert_eq!(mori.second_ray.wall_ray(), n3.as_ref(), "f²={f}");
    });
}

#[test]
fn ampleness_is_ray_invariant() {
    let s = PicardSetup::from_i64(3, 114).unwrap();
    let mori = mori_generators(&s).unwrap();
    for (x, y) in [(3, 16), (1, 1), (5, 26), (2, 11), (10, 1)] {
        let base = is_ample_with(&s, &mori, &BigInt::from(x), &BigInt::from(y)).ample;
        for k in 2..5 {
            let r = is_ample_with(&s, &mori, &BigInt::from(k * x), &BigInt::from(k * y));
            assert_eq!(r.ample, base);
        }
    }
}
