#![allow(dead_code)]

use proptest::prelude::*;
use tropheight_core::geometry::{Lattice, RationalSimplex};
use tropheight_core::pl::{AffinePiece, PLFunction};
use tropheight_core::rat::rat;
use tropheight_core::Rat;

pub fn small_rat(num: i64, den: i64) -> impl Strategy<Value = Rat> {
    (-num..=num, 1..=den).prop_map(|(p, q)| rat(p, q))
}

pub fn unit_rat(den: i64) -> impl Strategy<Value = Rat> {
    (1..=den).prop_flat_map(|q| (0..q).prop_map(move |p| rat(p, q)))
}

pub fn lengths() -> Vec<Rat> {
    vec![Rat::one(), Rat::from_int(2), Rat::from_int(5), rat(7, 3), rat(1, 3)]
}

/// Continuous periodic PL function on `ℝ/ℓℤ` interpolating `values` at the
/// sorted, deduplicated `breaks` (fractions of the period).
pub fn circle_pl(length: &Rat, breaks: &[Rat], values: &[Rat]) -> PLFunction {
    let mut pts: Vec<(Rat, Rat)> = breaks.iter().cloned().zip(values.iter().cloned()).collect();
    pts.sort_by(|a, b| a.0.cmp(&b.0));
    pts.dedup_by(|a, b| a.0 == b.0);
    let k = pts.len();
    let pieces = (0..k)
        .map(|i| {
            let (a, fa) = (&pts[i].0 * length, pts[i].1.clone());
            let (b, fb) = if i + 1 < k {
                (&pts[i + 1].0 * length, pts[i + 1].1.clone())
            } else {
                ((&pts[0].0 + Rat::one()) * length, pts[0].1.clone())
            };
            let slope = (&fb - &fa) / (&b - &a);
            let constant = &fa - &slope * &a;
            AffinePiece::new(RationalSimplex::interval(a, b).unwrap(), vec![slope], constant).unwrap()
        })
        .collect();
    PLFunction::new(pieces, Lattice::circle(length.clone()).unwrap()).unwrap()
}

pub fn circle_pl_strategy() -> impl Strategy<Value = (Rat, PLFunction)> {
    (
        prop::sample::select(lengths()),
        prop::collection::vec((unit_rat(12), small_rat(6, 6)), 1..6),
    )
        .prop_map(|(len, pts)| {
            let (b, v): (Vec<_>, Vec<_>) = pts.into_iter().unzip();
            let f = circle_pl(&len, &b, &v);
            (len, f)
        })
}

/// Periodic PL function on `ℝ²/ℤ²` interpolating `values[i][j]` at `(i/k, j/k)`
/// over the triangulation of each grid square by its main diagonal.
pub fn grid_pl(values: &[Vec<Rat>]) -> PLFunction {
    let k = values.len() as i64;
    let at = |i: i64, j: i64| values[i.rem_euclid(k) as usize][j.rem_euclid(k) as usize].clone();
    let p = |i: i64, j: i64| vec![rat(i, k), rat(j, k)];
    let mut pieces = Vec::new();
    for i in 0..k {
        for j in 0..k {
            for tri in [[(i, j), (i + 1, j), (i + 1, j + 1)], [(i, j), (i, j + 1), (i + 1, j + 1)]] {
                let verts: Vec<Vec<Rat>> = tri.iter().map(|&(a, b)| p(a, b)).collect();
                let vals: Vec<Rat> = tri.iter().map(|&(a, b)| at(a, b)).collect();
                // solve for gradient and constant through the three vertices
                let (x0, x1, x2) = (&verts[0], &verts[1], &verts[2]);
                let (e1, e2) = (
                    [&x1[0] - &x0[0], &x1[1] - &x0[1]],
                    [&x2[0] - &x0[0], &x2[1] - &x0[1]],
                );
                let (d1, d2) = (&vals[1] - &vals[0], &vals[2] - &vals[0]);
                let det = &e1[0] * &e2[1] - &e1[1] * &e2[0];
                let gx = (&d1 * &e2[1] - &d2 * &e1[1]) / &det;
                let gy = (&e1[0] * &d2 - &e2[0] * &d1) / &det;
                let constant = &vals[0] - &gx * &x0[0] - &gy * &x0[1];
                pieces.push(
                    AffinePiece::new(RationalSimplex::new(verts).unwrap(), vec![gx, gy], constant).unwrap(),
                );
            }
        }
    }
    PLFunction::new(pieces, Lattice::standard(2)).unwrap()
}

pub fn grid_pl_strategy(k: usize) -> impl Strategy<Value = PLFunction> {
    prop::collection::vec(prop::collection::vec(small_rat(5, 4), k), k).prop_map(|v| grid_pl(&v))
}

/// `B₃(t)/3` at the fractional part of `t`; an antiderivative of `B₂({t})`.
pub fn b3_third(t: &Rat) -> Rat {
    let u = t.fract();
    (&u * &u * &u - Rat::new(3, 2) * &u * &u + Rat::new(1, 2) * &u) / Rat::from_int(3)
}

/// `∫_a^b (ℓ/2) B₂({x/ℓ}) dx` in closed form.
pub fn tate_cell_integral(length: &Rat, a: &Rat, b: &Rat) -> Rat {
    length * length / Rat::from_int(2) * (b3_third(&(b / length)) - b3_third(&(a / length)))
}
