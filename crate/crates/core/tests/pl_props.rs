mod common;

use proptest::prelude::*;
use tropheight_core::geometry::{
    normalized_volume, reduce_point, translates_between, lattice_box, AffineMap, Lattice, RationalSimplex,
};
use tropheight_core::pl::{
    integrate_affine, integrate_pl, pl_eval, pl_validate, pushforward_affine, total_mass, AffinePiece,
    SimplicialMeasure,
};
use tropheight_core::rat::rat;
use tropheight_core::Rat;

use common::{circle_pl_strategy, grid_pl_strategy, small_rat};

fn triangle() -> impl Strategy<Value = RationalSimplex> {
    prop::collection::vec(prop::collection::vec(small_rat(6, 4), 2), 3)
        .prop_filter_map("degenerate", |v| RationalSimplex::new(v).ok())
}

fn segment2() -> impl Strategy<Value = RationalSimplex> {
    prop::collection::vec(prop::collection::vec(small_rat(6, 4), 2), 2)
        .prop_filter_map("degenerate", |v| RationalSimplex::new(v).ok())
}

fn measure2() -> impl Strategy<Value = SimplicialMeasure> {
    prop::collection::vec((small_rat(4, 3), prop_oneof![triangle(), segment2()]), 1..4).prop_map(|terms| {
        let terms = terms
            .into_iter()
            .map(|(c, s)| tropheight_core::pl::MeasureTerm { coefficient: c, simplex: s })
            .collect();
        SimplicialMeasure::new(terms, Lattice::standard(2)).unwrap()
    })
}

fn interval_measure(lattice: Lattice) -> impl Strategy<Value = SimplicialMeasure> {
    prop::collection::vec((small_rat(4, 3), small_rat(8, 5), small_rat(8, 5)), 1..4).prop_map(move |terms| {
        let terms = terms
            .into_iter()
            .filter(|(_, a, b)| a != b)
            .map(|(c, a, b)| tropheight_core::pl::MeasureTerm {
                coefficient: c,
                simplex: RationalSimplex::interval(a.clone().min(b.clone()), a.max(b)).unwrap(),
            })
            .collect();
        SimplicialMeasure::new(terms, lattice.clone()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn integration_is_linear_on_the_circle(
        ((_, f), mu, nu) in circle_pl_strategy().prop_flat_map(|(len, f)| {
            let l = f.lattice().clone();
            (Just((len, f)), interval_measure(l.clone()), interval_measure(l))
        })
    ) {
        let sum = integrate_pl(&f, &mu.plus(&nu)).unwrap();
        prop_assert_eq!(sum, integrate_pl(&f, &mu).unwrap() + integrate_pl(&f, &nu).unwrap());
        let k = rat(-5, 3);
        prop_assert_eq!(integrate_pl(&f, &mu.scaled(&k)).unwrap(), k * integrate_pl(&f, &mu).unwrap());
    }

    #[test]
    fn integration_is_linear_on_the_square(f in grid_pl_strategy(2), mu in measure2(), nu in measure2()) {
        prop_assert!(pl_validate(&f).is_empty());
        let sum = integrate_pl(&f, &mu.plus(&nu)).unwrap();
        prop_assert_eq!(sum, integrate_pl(&f, &mu).unwrap() + integrate_pl(&f, &nu).unwrap());
    }

    #[test]
    fn pushforward_keeps_mass(
        mu in measure2(),
        m in prop::collection::vec(prop::collection::vec(small_rat(3, 2), 2), 2),
        t in prop::collection::vec(small_rat(3, 2), 2),
    ) {
        let map = AffineMap::new(m, t).unwrap();
        match pushforward_affine(&mu, &map) {
            Ok(image) => prop_assert_eq!(total_mass(&image), total_mass(&mu)),
            Err(_) => prop_assume!(false),
        }
    }

    #[test]
    fn segment_integrals_match_riemann_sums(
        a in small_rat(5, 4), len in (1i64..=12, 1i64..=4).prop_map(|(p, q)| rat(p, q)),
        slope in small_rat(6, 3), c in small_rat(6, 3), n in 1i64..=40,
    ) {
        let b = &a + &len;
        let seg = RationalSimplex::interval(a.clone(), b).unwrap();
        let piece = AffinePiece::new(seg.clone(), vec![slope.clone()], c.clone()).unwrap();
        let exact = integrate_affine(&piece, &seg).unwrap();
        let h = &len / Rat::from_int(n);
        let left: Rat = (0..n).map(|i| piece.value(&[&a + &h * Rat::from_int(i)]) * &h).sum();
        // left sums of an affine function are off by exactly slope·len²/(2n)
        let bound = slope.abs() * &len * &len / Rat::from_int(2 * n);
        prop_assert!((exact - left).abs() <= bound);
    }

    #[test]
    fn triangle_integrals_match_riemann_sums(
        tri in triangle(), g in prop::collection::vec(small_rat(6, 3), 2), c in small_rat(6, 3), n in 1i64..=12,
    ) {
        let piece = AffinePiece::new(tri.clone(), g.clone(), c).unwrap();
        let exact = integrate_affine(&piece, &tri).unwrap();
        let v = tri.vertices();
        let e1: Vec<Rat> = (0..2).map(|k| (&v[1][k] - &v[0][k]) / Rat::from_int(n)).collect();
        let e2: Vec<Rat> = (0..2).map(|k| (&v[2][k] - &v[0][k]) / Rat::from_int(n)).collect();
        let grid = |i: i64, j: i64| -> Vec<Rat> {
            (0..2).map(|k| &v[0][k] + &e1[k] * Rat::from_int(i) + &e2[k] * Rat::from_int(j)).collect()
        };
        // n² congruent sub-triangles, each sampled at one of its vertices
        let mut samples = Rat::zero();
        for i in 0..n {
            for j in 0..n - i {
                samples += piece.value(&grid(i, j));
                if i + j + 2 <= n {
                    samples += piece.value(&grid(i + 1, j + 1));
                }
            }
        }
        let mass = normalized_volume(&tri);
        let riemann = &samples * &mass / Rat::from_int(n * n);
        let step = |e: &[Rat]| (&g[0] * &e[0] + &g[1] * &e[1]).abs();
        let bound = &mass * (step(&e1) + step(&e2));
        prop_assert!((exact - riemann).abs() <= bound);
    }

    #[test]
    fn evaluation_is_independent_of_the_cell(
        f in grid_pl_strategy(2),
        edge in 0u8..3, i in 0i64..2, t in (0i64..=8).prop_map(|p| rat(p, 8)),
    ) {
        prop_assume!(pl_validate(&f).is_empty());
        let p = match edge {
            0 => vec![rat(i, 2), t],
            1 => vec![t, rat(i, 2)],
            _ => vec![&t / Rat::from_int(2) + rat(i, 2), &t / Rat::from_int(2)],
        };
        let expected = pl_eval(&f, &reduce_point(&p, f.lattice()).unwrap()).unwrap();
        let lattice = f.lattice();
        let point = RationalSimplex::new(vec![p.clone()]).unwrap();
        let mut hits = 0;
        for piece in f.pieces() {
            for k in translates_between(&lattice_box(&piece.cell, lattice), &lattice_box(&point, lattice)) {
                let shift = lattice.vector(&k);
                if piece.cell.translate(&shift).contains(&p) {
                    let local: Vec<Rat> = p.iter().zip(&shift).map(|(a, b)| a - b).collect();
                    prop_assert_eq!(piece.value(&local), expected.clone());
                    hits += 1;
                }
            }
        }
        prop_assert!(hits >= 2);
    }
}
