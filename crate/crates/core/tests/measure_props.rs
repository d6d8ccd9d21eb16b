mod common;

use proptest::prelude::*;
use tropheight_core::geometry::{AffineMap, Lattice, RationalSimplex};
use tropheight_core::measure::{
    assemble_measure, gubler_coefficient, mass_check, pushforward_measure, tate_bundle, StrataBundle, StratumDatum,
};
use tropheight_core::pl::total_mass;
use tropheight_core::rat::rat;
use tropheight_core::Rat;

use common::{lengths, small_rat};

fn stratum() -> impl Strategy<Value = StratumDatum> {
    (
        0usize..=1,
        small_rat(6, 4),
        (1i64..=8, 1i64..=4).prop_map(|(p, q)| rat(p, q)),
        1i64..=4,
        (1i64..=6, 1i64..=4).prop_map(|(p, q)| rat(p, q)),
        prop_oneof![(1i64..=4), (-4i64..=-1)].prop_map(Rat::from_int),
        small_rat(4, 3),
    )
        .prop_map(|(e, a, w, degree, cov, slope, shift)| StratumDatum {
            name: format!("S[{a},{w}]"),
            e,
            simplex: RationalSimplex::interval(a.clone(), &a + &w).unwrap(),
            degree,
            lattice_l: Lattice::circle(cov).unwrap(),
            lattice: Lattice::standard(1),
            map: AffineMap::new(vec![vec![slope]], vec![shift]).unwrap(),
            nondegenerate: true,
        })
}

fn bundle(strata: Vec<StratumDatum>, mapping_degree: i64, length: Rat) -> StrataBundle {
    StrataBundle { d: 2, mapping_degree, strata, expected_mass: 0, torus: Lattice::circle(length).unwrap() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn pushforward_scales_mass_by_degree(
        strata in prop::collection::vec(stratum(), 1..4), deg in 1i64..=5, len in prop::sample::select(lengths()),
    ) {
        let b = bundle(strata, deg, len);
        let mu = assemble_measure(&b).unwrap();
        let pushed = pushforward_measure(&b, &mu).unwrap();
        prop_assert_eq!(total_mass(&pushed), Rat::from_int(deg) * total_mass(&mu));
        let mut expected = b.clone();
        expected.expected_mass = 0;
        prop_assert_eq!(mass_check(&expected, &pushed).discrepancy, total_mass(&pushed));
    }

    #[test]
    fn assembly_is_additive(a in prop::collection::vec(stratum(), 0..3), b in prop::collection::vec(stratum(), 0..3)) {
        let joined: Vec<_> = a.iter().chain(&b).cloned().collect();
        let whole = assemble_measure(&bundle(joined, 1, Rat::one())).unwrap();
        let parts = assemble_measure(&bundle(a, 1, Rat::one())).unwrap()
            .plus(&assemble_measure(&bundle(b, 1, Rat::one())).unwrap());
        prop_assert_eq!(whole.terms(), parts.terms());
    }

    #[test]
    fn coefficient_scales_with_lattice_index(s in stratum(), k in 1i64..=9) {
        let t = gubler_coefficient(2, &s).unwrap();
        let cov = s.lattice_l.covolume();
        let mut coarse_l = s.clone();
        coarse_l.lattice_l = Lattice::circle(&cov * Rat::from_int(k)).unwrap();
        prop_assert_eq!(gubler_coefficient(2, &coarse_l).unwrap(), &t * Rat::from_int(k));
        let mut coarse = s.clone();
        coarse.lattice = Lattice::circle(Rat::from_int(k)).unwrap();
        prop_assert_eq!(gubler_coefficient(2, &coarse).unwrap(), t / Rat::from_int(k));
    }
}

#[test]
fn tate_masses() {
    for len in [Rat::one(), Rat::from_int(5)] {
        let b = tate_bundle(&len).unwrap();
        let mu = pushforward_measure(&b, &assemble_measure(&b).unwrap()).unwrap();
        assert_eq!(total_mass(&mu), Rat::from_int(2));
        assert!(mass_check(&b, &mu).ok);
    }
}

/// The arithmetic path must stay free of floating point.
#[test]
fn no_floating_point_in_the_pipeline() {
    let src = concat!(env!("CARGO_MANIFEST_DIR"), "/src");
    for entry in std::fs::read_dir(src).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        for (i, line) in text.lines().enumerate() {
            let code = line.split("//").next().unwrap();
            let floaty = code.contains("f64") || code.contains("f32");
            // the only sanctioned conversion is the display helper on Rat
            let allowed = name == "rat.rs" && (code.contains("fn to_f64") || code.contains("to_f64().unwrap_or(f64::NAN)"));
            assert!(!floaty || allowed, "{name}:{} uses floating point: {line}", i + 1);
        }
    }
}
