use rweno::diagnostics::TotalMode;
use rweno::driver::{run_euler, EulerSetup};
use rweno::mesh::Geometry;
use rweno::problems::{ProblemKind, ProblemSpec};
use rweno::schemes::{MethodId, SchemeParams};

fn main() {
    let method = match std::env::args().nth(1).as_deref() {
        Some("one") => MethodId::One,
        Some("two") => MethodId::Two,
        _ => MethodId::Three,
    };
    let t_final: f64 = std::env::args()
        .nth(2)
        .and_then(|v| v.parse().ok())
        .unwrap_or(8.5e-4);

    let setup = EulerSetup {
        problem: ProblemSpec::with_defaults(ProblemKind::Sedov),
        method,
        geometry: Geometry::Spherical,
        n_cells: 100,
        gamma: 1.4,
        cfl: 0.1,
        t_final,
        scheme: SchemeParams::default(),
        modes: vec![TotalMode::MethodAdapted],
    };
    match run_euler(&setup) {
        Ok(run) => {
            for (r, w, _e) in run.profile().unwrap().iter().take(9) {
                println!(
                    "r = {r:.4}  rho = {:.6}  u = {:+.4}  p = {:.4}",
                    w.rho, w.u, w.p
                );
            }
        }
        Err(e) => println!("failed: {e}"),
    }
}
