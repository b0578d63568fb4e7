use rweno::diagnostics::TotalMode;
use rweno::driver::{run_euler, EulerSetup};
use rweno::mesh::Geometry;
use rweno::problems::{ProblemKind, ProblemSpec};
use rweno::schemes::{MethodId, SchemeParams};

fn main() {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|v| v.parse().ok())
        .unwrap_or(640);
    let t_final: f64 = std::env::args()
        .nth(2)
        .and_then(|v| v.parse().ok())
        .unwrap_or(0.15);

    let setup = EulerSetup {
        problem: ProblemSpec::with_defaults(ProblemKind::Acoustics),
        method: MethodId::Three,
        geometry: Geometry::Spherical,
        n_cells: n,
        gamma: 1.4,
        cfl: 0.5,
        t_final,
        scheme: SchemeParams::default(),
        modes: vec![TotalMode::MethodAdapted],
    };
    match run_euler(&setup) {
        Ok(run) => {
            let prof = run.profile().unwrap();
            for (r, w, _e) in prof.iter().take(12) {
                println!(
                    "r = {r:.5}  rho = {:+.6e}  u = {:+.6e}  p-p0 = {:+.6e}",
                    w.rho - 1.0,
                    w.u,
                    w.p - 1.0 / 1.4
                );
            }
        }
        Err(e) => println!("failed: {e}"),
    }
}
