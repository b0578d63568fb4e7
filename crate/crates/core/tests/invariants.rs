//! Property-based invariants of the kernels: weight normalization, basis
//! orthonormality, splitting identities, state round-trips, norm axioms and
//! config round-trips.

use proptest::prelude::*;

use rweno::config::parse_config;
use rweno::diagnostics::{l2_error, observed_orders};
use rweno::physics::{char_basis, euler_flux, interface_flux, llf_split, Conserved, GasModel, Primitive};
use rweno::weno::{self, WenoParams};

fn valid_primitive() -> impl Strategy<Value = Primitive> {
    (0.01f64..10.0, -10.0f64..10.0, 0.01f64..100.0)
        .prop_map(|(rho, u, p)| Primitive { rho, u, p })
}

fn finite_window() -> impl Strategy<Value = [f64; 5]> {
    prop::array::uniform5(-1e6f64..1e6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn weights_normalize_to_one(
        betas in prop::array::uniform3(0.0f64..1e8),
        epsilon in 1e-12f64..1e-2,
        power in 1u32..=2,
    ) {
        let params = WenoParams { epsilon, beta_power: power, ..WenoParams::default() };
        let w = weno::nonlinear_weights(betas, &params);
        let sum: f64 = w.iter().sum();
        prop_assert!((sum - 1.0).abs() <= 8.0 * f64::EPSILON, "sum = {sum:e}");
        prop_assert!(w.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn reconstruction_stays_in_candidate_hull(w in finite_window()) {
        let params = WenoParams::default();
        let cands = weno::candidate_values(&w);
        let lo = cands.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = cands.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let v = weno::reconstruct_interface(&w, &params);
        let pad = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
        prop_assert!(v >= lo - pad && v <= hi + pad, "{v} outside [{lo}, {hi}]");
    }

    #[test]
    fn splitting_identities(
        f in -1e3f64..1e3,
        u in -1e3f64..1e3,
        lambda in 0.0f64..1e3,
    ) {
        let (fp, fm) = llf_split(f, u, lambda);
        let scale = f.abs().max((lambda * u).abs()).max(1.0);
        prop_assert!((fp + fm - f).abs() <= 2.0 * f64::EPSILON * scale);
        prop_assert!((fp - fm - lambda * u).abs() <= 2.0 * f64::EPSILON * scale);
    }

    #[test]
    fn basis_is_orthonormal_pair(l in valid_primitive(), r in valid_primitive()) {
        let gas = GasModel::new(1.4).unwrap();
        let basis = char_basis(l.to_conserved(&gas), r.to_conserved(&gas), &gas).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut dot = 0.0;
                for k in 0..3 {
                    dot += basis.left[i][k] * basis.right[k][j];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                prop_assert!((dot - expect).abs() <= 1e-12, "L.R[{i}][{j}] = {dot}");
            }
        }
        prop_assert!(basis.lambda_max >= 0.0);
    }

    #[test]
    fn characteristic_projection_round_trips(w in valid_primitive(), v in valid_primitive()) {
        let gas = GasModel::new(1.4).unwrap();
        let basis = char_basis(w.to_conserved(&gas), v.to_conserved(&gas), &gas).unwrap();
        let f = euler_flux(w.to_conserved(&gas), &gas).unwrap();
        let back = basis.from_char(basis.to_char(f));
        let scale = f.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        for k in 0..3 {
            prop_assert!((back[k] - f[k]).abs() <= 1e-13 * scale);
        }
    }

    #[test]
    fn interface_flux_is_consistent(w in valid_primitive()) {
        let gas = GasModel::new(1.4).unwrap();
        let params = WenoParams::default();
        let state = w.to_conserved(&gas);
        let basis = char_basis(state, state, &gas).unwrap();
        let states = [state.as_array(); 6];
        let fluxes = [euler_flux(state, &gas).unwrap(); 6];
        let got = interface_flux(&states, &fluxes, &basis, basis.lambda_max, &params);
        let exact = euler_flux(state, &gas).unwrap();
        let scale = exact
            .iter()
            .chain(&[basis.lambda_max * state.energy])
            .fold(1.0f64, |m, x| m.max(x.abs()));
        for k in 0..3 {
            prop_assert!(
                (got[k] - exact[k]).abs() <= 1e-12 * scale,
                "component {k}: {} vs {}",
                got[k],
                exact[k]
            );
        }
    }

    #[test]
    fn primitive_conserved_round_trip(w in valid_primitive()) {
        let gas = GasModel::new(1.4).unwrap();
        let back = w.to_conserved(&gas).to_primitive(&gas).unwrap();
        prop_assert!((back.rho - w.rho).abs() <= 1e-14 * w.rho.abs());
        prop_assert!((back.u - w.u).abs() <= 1e-13 * w.u.abs().max(1.0));
        prop_assert!((back.p - w.p).abs() <= 1e-13 * w.p.abs());
    }

    #[test]
    fn l2_norm_axioms(
        a in prop::collection::vec(-1e3f64..1e3, 8),
        b in prop::collection::vec(-1e3f64..1e3, 8),
        c in prop::collection::vec(-1e3f64..1e3, 8),
    ) {
        let zero = l2_error(&a, &a).unwrap();
        prop_assert_eq!(zero, 0.0);
        let ab = l2_error(&a, &b).unwrap();
        prop_assert!(ab >= 0.0);
        // symmetry and triangle inequality
        prop_assert!((ab - l2_error(&b, &a).unwrap()).abs() <= 1e-12 * ab.max(1.0));
        let ac = l2_error(&a, &c).unwrap();
        let cb = l2_error(&c, &b).unwrap();
        prop_assert!(ab <= ac + cb + 1e-12 * (ac + cb).max(1.0));
    }

    #[test]
    fn observed_orders_scale_invariant(
        errors in prop::collection::vec(1e-12f64..1e3, 4),
        scale in 1e-6f64..1e6,
    ) {
        let res = vec![20usize, 40, 80, 160];
        let base = observed_orders(&errors, &res).unwrap();
        let scaled: Vec<f64> = errors.iter().map(|e| e * scale).collect();
        let after = observed_orders(&scaled, &res).unwrap();
        for (x, y) in base.iter().zip(&after) {
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
        }
    }
}

fn config_text() -> impl Strategy<Value = String> {
    let problem = prop::sample::select(vec!["advection", "acoustics", "sod", "sedov"]);
    let method = prop::sample::select(vec!["one", "two", "three"]);
    let lambda = prop::sample::select(vec!["window_max", "pointwise"]);
    let total = prop::sample::select(vec!["method_adapted", "gauss4", "both"]);
    (
        problem,
        method,
        0i64..=2,
        1usize..2000,
        (0.01f64..=1.0, 1.0001f64..3.0, 0.0f64..4.0),
        (1e-10f64..1e-2, 1u32..=2),
        lambda,
        total,
        "[a-z][a-z0-9_/]{0,12}",
    )
        .prop_map(
            |(problem, method, alpha, n, (cfl, gamma, t_final), (eps, power), lambda, total, dir)| {
                format!(
                    "problem = {problem}\nmethod = {method}\nalpha = {alpha}\n\
                     n_cells = {n}\ncfl = {cfl}\ngamma = {gamma}\nt_final = {t_final}\n\
                     weno_epsilon = {eps}\nweno_beta_power = {power}\n\
                     lambda_mode = {lambda}\ntotal_mode = {total}\nout_dir = {dir}\n"
                )
            },
        )
}

proptest! {
    #[test]
    fn config_serialization_round_trips(text in config_text()) {
        let (cfg, _) = parse_config(&text).unwrap();
        let (back, _) = parse_config(&cfg.serialize()).unwrap();
        prop_assert_eq!(cfg, back);
    }
}
