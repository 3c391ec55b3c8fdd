use hyperfund::wavecore::{dalembert_first_datum, fd_wave_oracle, kirchhoff_first_datum, FdData, FdGrid, Profile};
use proptest::prelude::*;

fn gauss(r: f64) -> f64 {
    (-r * r).exp()
}

proptest! {
    #[test]
    fn translation_equivariance(h in -2.0f64..2.0, x in -3.0f64..3.0, s in 0.0f64..2.0) {
        let base = Profile::gaussian(0.1, 0.4).unwrap();
        let moved = base.clone().shifted(h);
        let lhs = dalembert_first_datum(&moved, x, s).unwrap();
        let rhs = dalembert_first_datum(&base, x - h, s).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-15 * (1.0 + rhs.abs()), "{lhs} vs {rhs}");
    }

    #[test]
    fn even_in_time(x in -3.0f64..3.0, s in 0.0f64..2.0) {
        let p = Profile::polynomial(vec![0.3, -1.0, 0.5, 0.25]);
        let a = dalembert_first_datum(&p, x, s).unwrap();
        let b = dalembert_first_datum(&p, x, -s).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn radial_three_dimensional_matches_reduced_line(rho in 0.2f64..2.0, r in 0.05f64..1.5) {
        // ρ w solves the line equation with odd data s g(|s|)
        let g = |y: &[f64]| gauss((y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt());
        let got = kirchhoff_first_datum(g, [rho, 0.0, 0.0], r).unwrap();
        let odd = |s: f64| s * gauss(s.abs());
        let want = (odd(rho + r) + odd(rho - r)) / (2.0 * rho);
        prop_assert!((got - want).abs() < 1e-8, "{got} vs {want}");
    }
}

#[test]
fn leapfrog_is_second_order_for_smooth_data() {
    let phi0 = Profile::gaussian(0.0, 0.3).unwrap();
    let zero = Profile::zero();
    let mut errs = Vec::new();
    for nx in [161, 321, 641] {
        let g = FdGrid {
            x_min: -2.0,
            x_max: 2.0,
            nx,
            t_end: 0.8,
            steps: 2 * (nx - 1),
            save_every: 2 * (nx - 1),
        };
        let f = fd_wave_oracle(FdData::Cauchy { phi0: &phi0, phi1: &zero }, &g).unwrap();
        let it = f.nt() - 1;
        let t = f.grid_t[it];
        let mut e = 0.0f64;
        for ix in 0..f.nx() {
            let exact = dalembert_first_datum(&phi0, f.grid_x[ix], t).unwrap();
            e = e.max((f.value(it, ix) - exact).abs());
        }
        errs.push(e);
    }
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((1.8..=2.2).contains(&order), "order {order} from {errs:?}");
    }
}
