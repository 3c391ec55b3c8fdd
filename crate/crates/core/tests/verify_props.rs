use hyperfund::exec::Exec;
use hyperfund::kernels::{MassRegime, OperatorFamily};
use hyperfund::quadrature::QuadratureSpec;
use hyperfund::verify::{identity_check, identity_grid, ode_pair_solve, OdeCoefficients};
use proptest::prelude::*;

const QUAD_TOL: f64 = 1e-10;

fn check(f: OperatorFamily) -> Result<(), TestCaseError> {
    let pair = ode_pair_solve(&OdeCoefficients::for_family(&f), (0.0, 3.0), 1e-12).unwrap();
    let quad = QuadratureSpec::with_tolerances(QUAD_TOL, 1e-13);
    let grid = identity_grid(3.0, 10);
    // the quadrature tolerance is relative, so scale by the largest value
    let scale = grid.iter().map(|&(b, t)| pair.ratio(t, b).unwrap().abs()).fold(1.0, f64::max);
    let rep = identity_check(&f, &pair, &grid, &quad, 10.0 * QUAD_TOL * scale, Exec::Parallel).unwrap();
    prop_assert!(rep.passed(), "{}: max {:e}", f.label(), rep.max_abs);
    prop_assert_eq!(rep.nodes, 100);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn tricomi_identity_for_any_positive_k(k in 0.2f64..4.0) {
        check(OperatorFamily::Tricomi { k })?;
    }

    #[test]
    fn desitter_kg_identity_for_any_mass(mass in 0.0f64..3.0, large in any::<bool>()) {
        let regime = if large { MassRegime::Large } else { MassRegime::Small };
        check(OperatorFamily::DeSitterKg { mass, regime })?;
    }

    #[test]
    fn klein_gordon_identity_for_any_mass(m in 0.0f64..4.0, imag in any::<bool>()) {
        check(if imag { OperatorFamily::KleinGordonImag { m } } else { OperatorFamily::KleinGordonReal { m } })?;
    }
}

#[test]
fn wave_identities_on_the_sample_grid() {
    check(OperatorFamily::DeSitterWave).unwrap();
    check(OperatorFamily::AntiDeSitterWave).unwrap();
    check(OperatorFamily::EinsteinDeSitter { m: 1 }).unwrap();
}
