//! Run orchestration: single runs, convergence sweeps and conservation
//! audits, with CSV artifacts.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::config::{ConfigError, RunConfig};
use crate::diagnostics::{self, ConservationLedger, ConvergenceReport, TotalMode};
use crate::error::SolverError;
use crate::integrator::{advance, stable_dt, TimeControls};
use crate::mesh::{Geometry, RadialGrid};
use crate::physics::{GasModel, Primitive};
use crate::problems::{self, ProblemKind, ProblemSpec};
use crate::schemes::{rhs_advection, rhs_for, FieldState, MethodId, SchemeParams};

const GHOST_DEPTH: usize = 3;
const MAX_STEPS: u64 = 10_000_000;

#[derive(Debug, thiserror::Error)]
pub enum DriverError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Solver(#[from] SolverError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl DriverError {
    /// Process exit status: 2 config, 3 solver, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            DriverError::Config(_) => 2,
            DriverError::Solver(e) => match e {
                SolverError::InvalidAlpha(_)
                | SolverError::Grid(_)
                | SolverError::InvalidParameter(_) => 2,
                _ => 3,
            },
            DriverError::Io { .. } => 4,
        }
    }
}

fn write_file(path: &Path, content: &str) -> Result<(), DriverError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|source| DriverError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, content).map_err(|source| DriverError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Everything needed to march one Euler case.
#[derive(Clone, Debug)]
pub struct EulerSetup {
    pub problem: ProblemSpec,
    pub method: MethodId,
    pub geometry: Geometry,
    pub n_cells: usize,
    pub gamma: f64,
    pub cfl: f64,
    pub t_final: f64,
    pub scheme: SchemeParams,
    pub modes: Vec<TotalMode>,
}

impl EulerSetup {
    pub fn from_config(cfg: &RunConfig) -> Self {
        EulerSetup {
            problem: cfg.problem,
            method: cfg.method,
            geometry: cfg.geometry,
            n_cells: cfg.n_cells,
            gamma: cfg.gamma,
            cfl: cfg.cfl,
            t_final: cfg.t_final,
            scheme: SchemeParams {
                weno: cfg.weno,
                lambda_mode: cfg.lambda_mode,
            },
            modes: cfg.total_mode.modes(),
        }
    }

    pub fn with_method(mut self, method: MethodId) -> Self {
        self.method = method;
        self
    }

    pub fn with_cells(mut self, n_cells: usize) -> Self {
        self.n_cells = n_cells;
        self
    }
}

/// Completed Euler run: final state plus its conservation ledgers.
pub struct EulerRun {
    pub grid: RadialGrid,
    pub gas: GasModel,
    pub state: FieldState,
    pub ledgers: Vec<ConservationLedger>,
    pub steps: u64,
}

impl EulerRun {
    /// Interior (r, rho, u, p, E) rows.
    pub fn profile(&self) -> Result<Vec<(f64, Primitive, f64)>, SolverError> {
        self.grid
            .interior()
            .map(|i| {
                let w = self.state.primitive_at(&self.grid, &self.gas, i)?;
                let e = self.state.plain_cell(&self.grid, i).energy;
                Ok((self.grid.center(i), w, e))
            })
            .collect()
    }

    pub fn interior_density(&self) -> Result<Vec<f64>, SolverError> {
        Ok(self.profile()?.iter().map(|(_, w, _)| w.rho).collect())
    }

    pub fn interior_pressure(&self) -> Result<Vec<f64>, SolverError> {
        Ok(self.profile()?.iter().map(|(_, w, _)| w.p).collect())
    }
}

/// March one Euler problem to its final time.
pub fn run_euler(setup: &EulerSetup) -> Result<EulerRun, SolverError> {
    let (r_min, r_max) = setup.problem.domain();
    let grid = RadialGrid::new(setup.n_cells, r_min, r_max, setup.geometry, GHOST_DEPTH)?;
    let gas = GasModel::new(setup.gamma)?;
    let boundary = problems::boundary_for(&setup.problem, &gas).ok_or_else(|| {
        SolverError::InvalidParameter("advection runs through run_advection".into())
    })?;

    let prims = problems::init_euler(&setup.problem, &grid, &gas)?;
    let mut s0 = FieldState::from_primitives(&prims, &grid, &gas, setup.method.representation());
    boundary.apply(&mut s0, &grid, &gas);

    let mut ledgers = setup
        .modes
        .iter()
        .map(|&m| ConservationLedger::new(&s0, &grid, m))
        .collect::<Result<Vec<_>, _>>()?;

    let controls = TimeControls::new(setup.cfl, setup.t_final, MAX_STEPS)?;
    let rhs_fn = rhs_for(setup.method);
    let scheme = setup.scheme;
    let mut steps = 0u64;

    let state = advance(
        s0,
        &controls,
        |s, t| stable_dt(s, &grid, &gas, &controls, t),
        |s, _t| {
            boundary.apply(s, &grid, &gas);
            rhs_fn(s, &grid, &gas, &scheme)
        },
        |n, t, s| {
            steps = n;
            for ledger in &mut ledgers {
                ledger.record(t, s, &grid)?;
            }
            Ok(())
        },
    )?;

    Ok(EulerRun {
        grid,
        gas,
        state,
        ledgers,
        steps,
    })
}

/// Completed scalar advection run; `phi` is the unscaled interior profile.
pub struct AdvectionRun {
    pub grid: RadialGrid,
    pub phi: Vec<f64>,
    pub steps: u64,
    /// (mode, baseline total, residual rows (t, delta)).
    pub ledgers: Vec<(TotalMode, f64, Vec<(f64, f64)>)>,
}

/// March the scalar advection problem with the chosen method.
pub fn run_advection(
    c0: f64,
    method: MethodId,
    geometry: Geometry,
    n_cells: usize,
    cfl: f64,
    t_final: f64,
    scheme: &SchemeParams,
    modes: &[TotalMode],
) -> Result<AdvectionRun, SolverError> {
    let grid = RadialGrid::new(n_cells, 0.0, 2.0, geometry, GHOST_DEPTH)?;
    let scaled = method == MethodId::Three;

    let mut phi0 = problems::init_advection(&grid);
    if scaled {
        for (i, v) in phi0.iter_mut().enumerate() {
            *v *= grid.center_metric(i);
        }
    }

    let total = |field: &[f64]| -> Result<f64, SolverError> {
        scalar_total(field, &grid, method, TotalMode::MethodAdapted)
    };
    let gauss = |field: &[f64]| -> Result<f64, SolverError> {
        scalar_total(field, &grid, method, TotalMode::Gauss4)
    };
    let mut ledgers: Vec<(TotalMode, f64, Vec<(f64, f64)>)> = modes
        .iter()
        .map(|&m| {
            let baseline = match m {
                TotalMode::MethodAdapted => total(&phi0),
                TotalMode::Gauss4 => gauss(&phi0),
            }?;
            Ok((m, baseline, vec![(0.0, 0.0)]))
        })
        .collect::<Result<Vec<_>, SolverError>>()?;

    let controls = TimeControls::new(cfl, t_final, MAX_STEPS)?;
    let weno = scheme.weno;
    let dr = grid.dr();
    let mut steps = 0u64;

    let phi = advance(
        phi0,
        &controls,
        |_s, t| {
            let dt = controls.cfl * dr / c0;
            let remaining = controls.t_final - t;
            Ok(if dt < remaining { dt } else { remaining })
        },
        |s, t| {
            problems::fill_advection_ghosts(s, &grid, c0, t, scaled);
            rhs_advection(s, &grid, c0, method, &weno)
        },
        |n, t, s| {
            steps = n;
            for (mode, baseline, rows) in &mut ledgers {
                let v = match mode {
                    TotalMode::MethodAdapted => total(s)?,
                    TotalMode::Gauss4 => gauss(s)?,
                };
                rows.push((t, v - *baseline));
            }
            Ok(())
        },
    )?;

    let phi_interior: Vec<f64> = grid
        .interior()
        .map(|i| {
            if scaled {
                phi[i] / grid.center_metric(i)
            } else {
                phi[i]
            }
        })
        .collect();

    Ok(AdvectionRun {
        grid,
        phi: phi_interior,
        steps,
        ledgers,
    })
}

/// Discrete total of the scalar field (full-length, representation as
/// marched by `method`).
fn scalar_total(
    field: &[f64],
    grid: &RadialGrid,
    method: MethodId,
    mode: TotalMode,
) -> Result<f64, SolverError> {
    let scaled = method == MethodId::Three;
    match mode {
        TotalMode::MethodAdapted => Ok(grid
            .interior()
            .map(|i| {
                if scaled {
                    grid.dr() * field[i]
                } else {
                    grid.cell_volume(i) * field[i]
                }
            })
            .sum()),
        TotalMode::Gauss4 => {
            let unscaled: Vec<f64> = grid
                .interior()
                .map(|i| {
                    if scaled {
                        field[i] / grid.center_metric(i)
                    } else {
                        field[i]
                    }
                })
                .collect();
            diagnostics::gauss4_scalar_total(&unscaled, grid)
        }
    }
}

/// Restrict a fine interior profile onto the centers of a coarser grid of
/// `n_coarse` cells over the same domain. Odd ratios sample coincident
/// centers directly; even ratios place coarse centers on fine faces and use
/// sixth-order Lagrange interpolation through the six nearest fine centers.
pub fn restrict_to_coarse(fine: &[f64], n_coarse: usize) -> Result<Vec<f64>, SolverError> {
    let n_fine = fine.len();
    if n_coarse == 0 || n_fine % n_coarse != 0 {
        return Err(SolverError::InvalidParameter(format!(
            "restriction needs an integer resolution ratio, got {n_fine}/{n_coarse}"
        )));
    }
    let ratio = n_fine / n_coarse;
    if ratio == 1 {
        return Ok(fine.to_vec());
    }
    if ratio % 2 == 1 {
        return Ok((0..n_coarse)
            .map(|i| fine[ratio * i + (ratio - 1) / 2])
            .collect());
    }
    if n_fine < 6 {
        return Err(SolverError::InvalidParameter(
            "restriction needs at least six fine cells".into(),
        ));
    }
    let out = (0..n_coarse)
        .map(|i| {
            // coarse center lies on fine face `f`, between fine centers f-1, f
            let f = ratio * i + ratio / 2;
            let start = f.saturating_sub(3).min(n_fine - 6);
            let x = f as f64 - 0.5;
            let mut acc = 0.0;
            for k in 0..6 {
                let xk = (start + k) as f64;
                let mut w = 1.0;
                for m in 0..6 {
                    if m != k {
                        let xm = (start + m) as f64;
                        w *= (x - xm) / (xk - xm);
                    }
                }
                acc += w * fine[start + k];
            }
            acc
        })
        .collect();
    Ok(out)
}

/// Center of the interior cell with the steepest central gradient.
pub fn steepest_gradient_position(values: &[f64], grid: &RadialGrid) -> f64 {
    let mut best = 1;
    let mut best_mag = f64::NEG_INFINITY;
    for i in 1..values.len() - 1 {
        let mag = (values[i + 1] - values[i - 1]).abs();
        if mag > best_mag {
            best_mag = mag;
            best = i;
        }
    }
    grid.center(grid.interior().start + best)
}

/// Artifact paths produced by [`run`].
pub struct RunArtifacts {
    pub out_dir: PathBuf,
    pub profile: PathBuf,
    pub ledger: PathBuf,
    pub meta: PathBuf,
}

fn float(v: f64) -> String {
    format!("{v}")
}

/// Execute one configured run and emit `profile_<t>.csv`, `ledger.csv` and
/// `meta` into the configured output directory.
pub fn run(cfg: &RunConfig) -> Result<RunArtifacts, DriverError> {
    let out_dir = cfg.out_dir.clone();
    let profile_path = out_dir.join(format!("profile_{}.csv", float(cfg.t_final)));
    let ledger_path = out_dir.join("ledger.csv");
    let meta_path = out_dir.join("meta");

    let mut ledger_csv = String::from("t,delta_mass,delta_energy,mode\n");
    let steps;

    match cfg.problem {
        ProblemSpec::Advection { c0 } => {
            let scheme = SchemeParams {
                weno: cfg.weno,
                lambda_mode: cfg.lambda_mode,
            };
            let run = run_advection(
                c0,
                cfg.method,
                cfg.geometry,
                cfg.n_cells,
                cfg.cfl,
                cfg.t_final,
                &scheme,
                &cfg.total_mode.modes(),
            )?;
            steps = run.steps;

            let mut profile = String::from("r,phi\n");
            for (i, cell) in run.grid.interior().enumerate() {
                let _ = writeln!(
                    profile,
                    "{},{}",
                    float(run.grid.center(cell)),
                    float(run.phi[i])
                );
            }
            write_file(&profile_path, &profile)?;

            for (mode, _baseline, rows) in &run.ledgers {
                for &(t, delta) in rows {
                    let _ = writeln!(
                        ledger_csv,
                        "{},{},{},{}",
                        float(t),
                        float(delta),
                        float(0.0),
                        mode.name()
                    );
                }
            }
        }
        _ => {
            let run = run_euler(&EulerSetup::from_config(cfg))?;
            steps = run.steps;

            let mut profile = String::from("r,rho,u,p,E\n");
            for (r, w, e) in run.profile()? {
                let _ = writeln!(
                    profile,
                    "{},{},{},{},{}",
                    float(r),
                    float(w.rho),
                    float(w.u),
                    float(w.p),
                    float(e)
                );
            }
            write_file(&profile_path, &profile)?;

            for ledger in &run.ledgers {
                for row in ledger.rows() {
                    let _ = writeln!(
                        ledger_csv,
                        "{},{},{},{}",
                        float(row.t),
                        float(row.delta_mass),
                        float(row.delta_energy),
                        ledger.mode().name()
                    );
                }
            }
        }
    }

    write_file(&ledger_path, &ledger_csv)?;

    let meta = format!(
        "# solver metadata\nsolver_version = {}\nsteps = {steps}\n\n{}",
        env!("CARGO_PKG_VERSION"),
        cfg.serialize()
    );
    write_file(&meta_path, &meta)?;

    Ok(RunArtifacts {
        out_dir,
        profile: profile_path,
        ledger: ledger_path,
        meta: meta_path,
    })
}

fn check_dyadic(resolutions: &[usize]) -> Result<(), SolverError> {
    if resolutions.len() < 2 {
        return Err(SolverError::InvalidParameter(
            "sweep needs at least two resolutions".into(),
        ));
    }
    if resolutions.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SolverError::InvalidParameter(
            "resolutions must be strictly increasing".into(),
        ));
    }
    let base = resolutions[0];
    for &n in resolutions {
        let ratio = n / base;
        if n % base != 0 || !ratio.is_power_of_two() {
            return Err(SolverError::InvalidParameter(format!(
                "resolutions must be powers of two over the coarsest ({base}), got {n}"
            )));
        }
    }
    Ok(())
}

/// Convergence sweep. Advection measures against the exact solution at every
/// resolution; acoustics measures density against a finest-grid
/// metric-premultiplied (method three) reference restricted onto each
/// coarser grid.
pub fn sweep(cfg: &RunConfig, resolutions: &[usize]) -> Result<ConvergenceReport, DriverError> {
    check_dyadic(resolutions)?;
    let scheme = SchemeParams {
        weno: cfg.weno,
        lambda_mode: cfg.lambda_mode,
    };

    let report = match cfg.problem {
        ProblemSpec::Advection { c0 } => {
            let mut errors = Vec::new();
            for &n in resolutions {
                let run = run_advection(
                    c0,
                    cfg.method,
                    cfg.geometry,
                    n,
                    cfg.cfl,
                    cfg.t_final,
                    &scheme,
                    &[],
                )?;
                let exact: Vec<f64> = run
                    .grid
                    .interior()
                    .map(|i| {
                        problems::exact_advection(
                            run.grid.center(i),
                            cfg.t_final,
                            c0,
                            run.grid.geometry(),
                        )
                    })
                    .collect();
                errors.push(diagnostics::l2_error(&run.phi, &exact)?);
            }
            ConvergenceReport::from_errors(resolutions.to_vec(), errors)?
        }
        ProblemSpec::Acoustics { .. } => {
            let n_ref = *resolutions.last().expect("nonempty resolutions");
            let reference = run_euler(
                &EulerSetup::from_config(cfg)
                    .with_method(MethodId::Three)
                    .with_cells(n_ref),
            )?;
            let rho_ref = reference.interior_density()?;

            let mut ns = Vec::new();
            let mut errors = Vec::new();
            for &n in resolutions.iter().filter(|&&n| n < n_ref) {
                let run = run_euler(&EulerSetup::from_config(cfg).with_cells(n))?;
                let coarse_ref = restrict_to_coarse(&rho_ref, n)?;
                ns.push(n);
                errors.push(diagnostics::l2_error(&run.interior_density()?, &coarse_ref)?);
            }
            ConvergenceReport::from_errors(ns, errors)?
        }
        _ => {
            return Err(SolverError::InvalidParameter(
                "sweep requires a smooth problem (advection or acoustics)".into(),
            )
            .into())
        }
    };

    let mut csv = String::from("n,l2_error,order\n");
    for (i, (&n, &e)) in report.resolutions.iter().zip(&report.errors).enumerate() {
        let order = if i == 0 {
            String::new()
        } else {
            float(report.orders[i - 1])
        };
        let _ = writeln!(csv, "{n},{},{order}", float(e));
    }
    write_file(&cfg.out_dir.join("convergence.csv"), &csv)?;

    Ok(report)
}

/// One audited case: its ledgers, by method and resolution.
pub struct AuditEntry {
    pub method: MethodId,
    pub n_cells: usize,
    pub ledgers: Vec<ConservationLedger>,
}

/// Conservation audit over methods and resolutions for a shock problem.
pub fn audit(
    cfg: &RunConfig,
    resolutions: &[usize],
    methods: &[MethodId],
) -> Result<Vec<AuditEntry>, DriverError> {
    if !matches!(cfg.problem.kind(), ProblemKind::Sod | ProblemKind::Sedov) {
        return Err(SolverError::InvalidParameter(
            "audit requires a shock problem (sod or sedov)".into(),
        )
        .into());
    }
    if resolutions.is_empty() || methods.is_empty() {
        return Err(
            SolverError::InvalidParameter("audit needs resolutions and methods".into()).into(),
        );
    }

    let mut entries = Vec::new();
    for &method in methods {
        for &n in resolutions {
            let run = run_euler(
                &EulerSetup::from_config(cfg)
                    .with_method(method)
                    .with_cells(n),
            )?;
            entries.push(AuditEntry {
                method,
                n_cells: n,
                ledgers: run.ledgers,
            });
        }
    }

    let mut csv = String::from("method,n,t,delta_mass,delta_energy,mode\n");
    for entry in &entries {
        for ledger in &entry.ledgers {
            for row in ledger.rows() {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    entry.method.name(),
                    entry.n_cells,
                    float(row.t),
                    float(row.delta_mass),
                    float(row.delta_energy),
                    ledger.mode().name()
                );
            }
        }
    }
    write_file(&cfg.out_dir.join("residuals.csv"), &csv)?;

    Ok(entries)
}
