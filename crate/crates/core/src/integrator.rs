//! Classical four-stage RK4 time marching with CFL step selection.
//!
//! The RHS closure receives a mutable stage state so boundary fills can be
//! re-applied before every evaluation; stage states are fresh linear
//! combinations whose ghost cells are otherwise stale.

use crate::error::{Result, SolverError};
use crate::mesh::RadialGrid;
use crate::physics::GasModel;
use crate::schemes::FieldState;

/// Anything RK4 can march: supports cloning and `self += a * other`.
pub trait StateVector: Clone {
    fn axpy(&mut self, a: f64, other: &Self);
}

impl StateVector for f64 {
    fn axpy(&mut self, a: f64, other: &Self) {
        *self += a * other;
    }
}

impl StateVector for Vec<f64> {
    fn axpy(&mut self, a: f64, other: &Self) {
        debug_assert_eq!(self.len(), other.len());
        for (x, y) in self.iter_mut().zip(other) {
            *x += a * y;
        }
    }
}

impl StateVector for FieldState {
    fn axpy(&mut self, a: f64, other: &Self) {
        debug_assert_eq!(self.len(), other.len());
        debug_assert_eq!(self.repr(), other.repr());
        for (x, y) in self.cells_mut().iter_mut().zip(other.cells()) {
            x.rho += a * y.rho;
            x.mom += a * y.mom;
            x.energy += a * y.energy;
        }
    }
}

/// Time-marching controls.
#[derive(Clone, Copy, Debug)]
pub struct TimeControls {
    pub cfl: f64,
    pub t_final: f64,
    pub max_steps: u64,
}

impl TimeControls {
    pub fn new(cfl: f64, t_final: f64, max_steps: u64) -> Result<Self> {
        if !(cfl > 0.0 && cfl <= 1.0) {
            return Err(SolverError::InvalidParameter(format!(
                "Courant number must lie in (0, 1], got {cfl}"
            )));
        }
        if !(t_final >= 0.0) {
            return Err(SolverError::InvalidParameter(format!(
                "t_final must be nonnegative, got {t_final}"
            )));
        }
        if max_steps == 0 {
            return Err(SolverError::InvalidParameter(
                "max_steps must be positive".into(),
            ));
        }
        Ok(TimeControls {
            cfl,
            t_final,
            max_steps,
        })
    }
}

/// One classical RK4 step from time `t`. The RHS is called with the stage
/// state (mutable, for ghost refills) and the stage time.
pub fn rk4_step<S: StateVector>(
    s: &S,
    t: f64,
    dt: f64,
    rhs: &mut impl FnMut(&mut S, f64) -> Result<S>,
) -> Result<S> {
    let stage_err = |stage| move |e| SolverError::InStage { stage, source: Box::new(e) };

    let mut u = s.clone();
    let k1 = rhs(&mut u, t).map_err(stage_err(1))?;

    let mut u1 = s.clone();
    u1.axpy(0.5 * dt, &k1);
    let k2 = rhs(&mut u1, t + 0.5 * dt).map_err(stage_err(2))?;

    let mut u2 = s.clone();
    u2.axpy(0.5 * dt, &k2);
    let k3 = rhs(&mut u2, t + 0.5 * dt).map_err(stage_err(3))?;

    let mut u3 = s.clone();
    u3.axpy(dt, &k3);
    let k4 = rhs(&mut u3, t + dt).map_err(stage_err(4))?;

    let mut next = s.clone();
    next.axpy(dt / 6.0, &k1);
    next.axpy(dt / 3.0, &k2);
    next.axpy(dt / 3.0, &k3);
    next.axpy(dt / 6.0, &k4);
    Ok(next)
}

/// CFL-limited step `cfl * dr / max(|u| + a)` over interior cells, clipped
/// so the final step lands exactly on `t_final`.
pub fn stable_dt(
    s: &FieldState,
    grid: &RadialGrid,
    gas: &GasModel,
    controls: &TimeControls,
    t_now: f64,
) -> Result<f64> {
    let mut speed: f64 = 0.0;
    for i in grid.interior() {
        let w = s.primitive_at(grid, gas, i)?;
        speed = speed.max(w.max_wave_speed(gas)?);
    }
    if !(speed > 0.0) || !speed.is_finite() {
        return Err(SolverError::InvalidParameter(format!(
            "nonpositive maximum wave speed {speed}"
        )));
    }
    let dt = controls.cfl * grid.dr() / speed;
    let remaining = controls.t_final - t_now;
    Ok(if dt < remaining { dt } else { remaining })
}

/// March `s0` to `t_final`, recomputing `dt` from the current state each
/// step and invoking the observer after every accepted step.
pub fn advance<S: StateVector>(
    s0: S,
    controls: &TimeControls,
    mut dt_fn: impl FnMut(&S, f64) -> Result<f64>,
    mut rhs: impl FnMut(&mut S, f64) -> Result<S>,
    mut on_step: impl FnMut(u64, f64, &S) -> Result<()>,
) -> Result<S> {
    let mut s = s0;
    let mut t = 0.0;
    let mut step: u64 = 0;
    // relative slack keeps fp drift in the accumulated time from spawning a
    // denormal-width final step
    let eps = 1e-12 * controls.t_final.max(1.0);

    while t < controls.t_final - eps {
        if step >= controls.max_steps {
            return Err(SolverError::Divergence {
                max_steps: controls.max_steps,
                time: t,
            });
        }
        let at_step = |step, time| {
            move |e| SolverError::AtStep {
                step,
                time,
                source: Box::new(e),
            }
        };
        let dt = dt_fn(&s, t).map_err(at_step(step, t))?;
        let clipped = dt >= controls.t_final - t - eps;
        s = rk4_step(&s, t, dt, &mut rhs).map_err(at_step(step, t))?;
        t = if clipped { controls.t_final } else { t + dt };
        step += 1;
        on_step(step, t, &s).map_err(at_step(step, t))?;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Geometry;
    use crate::physics::Primitive;
    use crate::schemes::{rhs_for, FieldState, MethodId, Representation, SchemeParams};
    use approx::assert_relative_eq;

    #[test]
    fn rk4_single_decay_step() {
        let mut rhs = |u: &mut f64, _t: f64| Ok(-*u);
        let next = rk4_step(&1.0, 0.0, 0.1, &mut rhs).unwrap();
        // 1 - 0.1 + 0.005 - 1e-3/6 + 1e-4/24, forced by the four stages
        assert_relative_eq!(next, 0.90483750, epsilon = 1e-12);
    }

    #[test]
    fn rk4_zero_rhs_is_identity() {
        let s = vec![1.5, -2.0, 0.25];
        let mut rhs = |u: &mut Vec<f64>, _t: f64| Ok(vec![0.0; u.len()]);
        let next = rk4_step(&s, 0.0, 0.3, &mut rhs).unwrap();
        assert_eq!(next, s);
    }

    #[test]
    fn rk4_fourth_order_on_linear_decay() {
        let mut errs = Vec::new();
        for k in 0..5 {
            let n = 10 * 2u32.pow(k);
            let dt = 1.0 / n as f64;
            let mut u = 1.0;
            let mut rhs = |v: &mut f64, _t: f64| Ok(-*v);
            for i in 0..n {
                u = rk4_step(&u, i as f64 * dt, dt, &mut rhs).unwrap();
            }
            errs.push((u - (-1.0f64).exp()).abs());
        }
        let slope = (errs[0] / errs[4]).log2() / 4.0;
        assert!(
            (slope - 4.0).abs() <= 0.1,
            "RK4 slope {slope}; errors {errs:?}"
        );
    }

    #[test]
    fn rk4_stage_errors_carry_stage_index() {
        let mut calls = 0;
        let mut rhs = |_u: &mut f64, _t: f64| {
            calls += 1;
            if calls >= 3 {
                Err(SolverError::InvalidParameter("boom".into()))
            } else {
                Ok(0.0)
            }
        };
        match rk4_step(&1.0, 0.0, 0.1, &mut rhs) {
            Err(SolverError::InStage { stage, .. }) => assert_eq!(stage, 3),
            other => panic!("expected stage error, got {other:?}"),
        }
    }

    #[test]
    fn stable_dt_values() {
        let g = GasModel::new(1.4).unwrap();
        let grid = RadialGrid::new(100, 0.0, 1.0, Geometry::Cylindrical, 3).unwrap();
        let prims = vec![Primitive { rho: 1.0, u: 0.0, p: 1.0 }; grid.total_cells()];
        let s = FieldState::from_primitives(&prims, &grid, &g, Representation::Plain);

        let c = TimeControls::new(0.5, 10.0, 1000).unwrap();
        let dt = stable_dt(&s, &grid, &g, &c, 0.0).unwrap();
        assert_relative_eq!(dt, 0.5 * 0.01 / 1.4f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(dt, 0.0042257, epsilon = 1e-7);

        let c = TimeControls::new(0.1, 10.0, 1000).unwrap();
        let dt = stable_dt(&s, &grid, &g, &c, 0.0).unwrap();
        assert_relative_eq!(dt, 0.00084515, epsilon = 1e-7);

        // clipping to the remaining time
        let c = TimeControls::new(0.5, 1.0, 1000).unwrap();
        let dt = stable_dt(&s, &grid, &g, &c, 1.0 - 1e-5).unwrap();
        assert_relative_eq!(dt, 1e-5, epsilon = 1e-12);
    }

    #[test]
    fn advance_zero_final_time() {
        let c = TimeControls::new(0.5, 0.0, 10).unwrap();
        let s0 = vec![1.0, 2.0];
        let mut steps = 0;
        let s = advance(
            s0.clone(),
            &c,
            |_s, _t| Ok(0.1),
            |_s, _t| Ok(vec![0.0, 0.0]),
            |_n, _t, _s| {
                steps += 1;
                Ok(())
            },
        )
        .unwrap();
        assert_eq!(s, s0);
        assert_eq!(steps, 0);
    }

    #[test]
    fn advance_accumulates_exactly_to_t_final() {
        let c = TimeControls::new(0.5, 0.2, 10_000).unwrap();
        let mut sum = 0.0;
        let mut last_t = 0.0;
        let _ = advance(
            1.0f64,
            &c,
            |_s, t| Ok((0.013f64).min(c.t_final - t)),
            |u, _t| Ok(-*u),
            |_n, t, _s| {
                sum += t - last_t;
                last_t = t;
                Ok(())
            },
        )
        .unwrap();
        assert!((last_t - 0.2).abs() <= 1e-12, "final time {last_t}");
        assert!((sum - 0.2).abs() <= 1e-12, "accumulated dt {sum}");
    }

    #[test]
    fn advance_exceeding_max_steps_is_divergence() {
        let c = TimeControls::new(0.5, 1.0, 5).unwrap();
        let r = advance(
            1.0f64,
            &c,
            |_s, _t| Ok(1e-6),
            |_u, _t| Ok(0.0),
            |_n, _t, _s| Ok(()),
        );
        assert!(matches!(r, Err(SolverError::Divergence { .. })));
    }

    #[test]
    fn constant_euler_state_stays_put() {
        let g = GasModel::new(1.4).unwrap();
        let params = SchemeParams::default();
        let grid = RadialGrid::new(30, 0.0, 1.0, Geometry::Spherical, 3).unwrap();
        let w = Primitive { rho: 1.0, u: 0.0, p: 1.0 };
        for method in [MethodId::One, MethodId::Two, MethodId::Three] {
            let prims = vec![w; grid.total_cells()];
            let s0 = FieldState::from_primitives(&prims, &grid, &g, method.representation());
            let c = TimeControls::new(0.5, 0.05, 1000).unwrap();
            let rhs_fn = rhs_for(method);
            let s = advance(
                s0.clone(),
                &c,
                |s, t| stable_dt(s, &grid, &g, &c, t),
                |s, _t| rhs_fn(s, &grid, &g, &params),
                |_n, _t, _s| Ok(()),
            )
            .unwrap();
            for i in grid.interior() {
                let a = s.cells()[i].as_array();
                let b = s0.cells()[i].as_array();
                for k in 0..3 {
                    assert!(
                        (a[k] - b[k]).abs() <= 1e-12 * b[k].abs().max(1.0),
                        "method {method:?} drifted at cell {i}"
                    );
                }
            }
        }
    }

    #[test]
    fn trajectories_are_deterministic() {
        let g = GasModel::new(1.4).unwrap();
        let params = SchemeParams::default();
        let grid = RadialGrid::new(40, 0.0, 1.0, Geometry::Cylindrical, 3).unwrap();
        let run = || {
            let prims: Vec<Primitive> = (0..grid.total_cells())
                .map(|i| {
                    let r = grid.center(i);
                    Primitive {
                        rho: if r < 0.5 { 1.0 } else { 0.125 },
                        u: 0.0,
                        p: if r < 0.5 { 1.0 } else { 0.1 },
                    }
                })
                .collect();
            let s0 = FieldState::from_primitives(&prims, &grid, &g, Representation::Plain);
            let c = TimeControls::new(0.5, 0.05, 100_000).unwrap();
            advance(
                s0,
                &c,
                |s, t| stable_dt(s, &grid, &g, &c, t),
                |s, _t| {
                    crate::problems::fill_ambient_ghosts(
                        s,
                        &grid,
                        &g,
                        Primitive { rho: 1.0, u: 0.0, p: 1.0 },
                        Primitive { rho: 0.125, u: 0.0, p: 0.1 },
                    );
                    crate::schemes::rhs_method_one(s, &grid, &g, &params)
                },
                |_n, _t, _s| Ok(()),
            )
            .unwrap()
        };
        let a = run();
        let b = run();
        for (x, y) in a.cells().iter().zip(b.cells()) {
            assert_eq!(x.rho.to_bits(), y.rho.to_bits());
            assert_eq!(x.mom.to_bits(), y.mom.to_bits());
            assert_eq!(x.energy.to_bits(), y.energy.to_bits());
        }
    }
}
