//! Initial conditions, reference solutions and boundary fills for the four
//! verification problems.

use crate::error::{Result, SolverError};
use crate::mesh::{Geometry, RadialGrid};
use crate::physics::{GasModel, Primitive};
use crate::schemes::{FieldState, Representation};

/// Problem family with its physical parameters. Domain extents, default
/// geometry and final times follow the standard setups.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProblemSpec {
    /// Scalar advection of sin^4(pi r)/r^alpha at constant speed c0.
    Advection { c0: f64 },
    /// Small symmetric acoustic pulse on a stagnant background.
    Acoustics { amplitude: f64 },
    /// Two-state shock tube with a diaphragm.
    Sod { diaphragm: f64 },
    /// Point blast: concentrated hot spot of width `hot_spot_width` holding
    /// the deposited energy `blast_energy`.
    Sedov {
        blast_energy: f64,
        hot_spot_width: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemKind {
    Advection,
    Acoustics,
    Sod,
    Sedov,
}

impl ProblemSpec {
    pub fn with_defaults(kind: ProblemKind) -> Self {
        match kind {
            ProblemKind::Advection => ProblemSpec::Advection { c0: 1.0 },
            ProblemKind::Acoustics => ProblemSpec::Acoustics { amplitude: 1e-4 },
            ProblemKind::Sod => ProblemSpec::Sod { diaphragm: 0.5 },
            ProblemKind::Sedov => ProblemSpec::Sedov {
                blast_energy: 0.44,
                hot_spot_width: 0.03,
            },
        }
    }

    pub fn kind(&self) -> ProblemKind {
        match self {
            ProblemSpec::Advection { .. } => ProblemKind::Advection,
            ProblemSpec::Acoustics { .. } => ProblemKind::Acoustics,
            ProblemSpec::Sod { .. } => ProblemKind::Sod,
            ProblemSpec::Sedov { .. } => ProblemKind::Sedov,
        }
    }

    /// Radial extent of the computational domain.
    pub fn domain(&self) -> (f64, f64) {
        match self.kind() {
            ProblemKind::Advection => (0.0, 2.0),
            _ => (0.0, 1.0),
        }
    }

    pub fn default_geometry(&self) -> Geometry {
        match self.kind() {
            ProblemKind::Advection | ProblemKind::Sod => Geometry::Cylindrical,
            ProblemKind::Acoustics | ProblemKind::Sedov => Geometry::Spherical,
        }
    }

    /// Final time: advection runs one transit, Sod stops before any wave
    /// reaches a boundary, the acoustic pulse runs one half-width of travel
    /// (the ingoing and outgoing shells have just separated, far from the
    /// origin), and the blast runs to the standard snapshot time.
    pub fn default_t_final(&self) -> f64 {
        match self.kind() {
            ProblemKind::Advection => 1.0,
            ProblemKind::Acoustics => 0.1,
            ProblemKind::Sod => 0.2,
            ProblemKind::Sedov => 1.0,
        }
    }

    /// Sedov's stiff source needs the reduced Courant number.
    pub fn default_cfl(&self) -> f64 {
        match self.kind() {
            ProblemKind::Sedov => 0.1,
            _ => 0.5,
        }
    }
}

fn sin4(x: f64) -> f64 {
    let s = (std::f64::consts::PI * x).sin();
    s * s * s * s
}

/// Initial scalar profile sin^4(pi r)/r^alpha on [0, 1], zero elsewhere.
pub fn init_advection(grid: &RadialGrid) -> Vec<f64> {
    (0..grid.total_cells())
        .map(|i| {
            let r = grid.center(i);
            if r > 0.0 && r <= 1.0 {
                sin4(r) / grid.geometry().metric(r)
            } else {
                0.0
            }
        })
        .collect()
}

/// Exact advected profile at time `t`.
pub fn exact_advection(r: f64, t: f64, c0: f64, geometry: Geometry) -> f64 {
    if r > c0 * t && r <= c0 * t + 1.0 && r > 0.0 {
        sin4(r - c0 * t) / geometry.metric(r)
    } else {
        0.0
    }
}

/// Fill ghost values of the advection field from the exact solution at time
/// `t` (zero outside the pulse support). With `scaled` the field holds
/// `psi = r^alpha phi`.
pub fn fill_advection_ghosts(
    phi: &mut [f64],
    grid: &RadialGrid,
    c0: f64,
    t: f64,
    scaled: bool,
) {
    let gd = grid.ghost_depth();
    let total = grid.total_cells();
    let mut set = |i: usize| {
        let r = grid.center(i);
        let v = exact_advection(r, t, c0, grid.geometry());
        phi[i] = if scaled { grid.geometry().metric(r) * v } else { v };
    };
    for i in 0..gd {
        set(i);
        set(total - 1 - i);
    }
}

/// Stagnant background with a compact density/pressure pulse on
/// 0.4 <= r <= 0.6: `amplitude * sin^4(5 pi r)/r`, a single C^3 bump that
/// vanishes with three derivatives at both support edges (at r = 0.5 the
/// perturbation is amplitude * 2).
pub fn init_acoustics(grid: &RadialGrid, gas: &GasModel, amplitude: f64) -> Vec<Primitive> {
    let p0 = 1.0 / gas.gamma();
    (0..grid.total_cells())
        .map(|i| {
            let r = grid.center(i);
            let f = if (0.4..=0.6).contains(&r) {
                (5.0 * std::f64::consts::PI * r).sin().powi(4) / r
            } else {
                0.0
            };
            Primitive {
                rho: 1.0 + amplitude * f,
                u: 0.0,
                p: p0 + amplitude * f,
            }
        })
        .collect()
}

pub fn acoustics_ambient(gas: &GasModel) -> Primitive {
    Primitive {
        rho: 1.0,
        u: 0.0,
        p: 1.0 / gas.gamma(),
    }
}

pub const SOD_LEFT: Primitive = Primitive { rho: 1.0, u: 0.0, p: 1.0 };
pub const SOD_RIGHT: Primitive = Primitive { rho: 0.125, u: 0.0, p: 0.1 };

/// Two-state Riemann initial condition; a center sitting exactly on the
/// diaphragm takes the left state.
pub fn init_sod(grid: &RadialGrid, diaphragm: f64) -> Vec<Primitive> {
    (0..grid.total_cells())
        .map(|i| {
            if grid.center(i) <= diaphragm {
                SOD_LEFT
            } else {
                SOD_RIGHT
            }
        })
        .collect()
}

/// Cold quiescent background: the tiny pressure keeps the blast in the
/// strong-shock regime where the front stays inside the unit domain through
/// t = 1 (an order-one background pressure would blow the wave through the
/// outer boundary before the snapshot time).
pub const SEDOV_AMBIENT: Primitive = Primitive { rho: 1.0, u: 0.0, p: 1e-5 };

/// Hot-spot pressure for the point blast: energy `blast_energy` deposited in
/// a sphere/cylinder/slab of radius `hot_spot_width`.
pub fn sedov_hot_pressure(
    gas: &GasModel,
    geometry: Geometry,
    blast_energy: f64,
    hot_spot_width: f64,
) -> f64 {
    let alpha = geometry.alpha();
    3.0 * (gas.gamma() - 1.0) * blast_energy
        / ((alpha + 2) as f64 * std::f64::consts::PI * hot_spot_width.powi(alpha as i32 + 1))
}

/// Ambient gas everywhere except the cells inside the hot spot, whose
/// pressure is raised to hold the blast energy.
pub fn init_sedov(
    grid: &RadialGrid,
    gas: &GasModel,
    blast_energy: f64,
    hot_spot_width: f64,
) -> Result<Vec<Primitive>> {
    if hot_spot_width < grid.dr() {
        return Err(SolverError::InvalidParameter(format!(
            "hot spot width {hot_spot_width} is below one cell ({})",
            grid.dr()
        )));
    }
    let p_hot = sedov_hot_pressure(gas, grid.geometry(), blast_energy, hot_spot_width);
    Ok((0..grid.total_cells())
        .map(|i| {
            let r = grid.center(i);
            if r.abs() < hot_spot_width {
                Primitive { p: p_hot, ..SEDOV_AMBIENT }
            } else {
                SEDOV_AMBIENT
            }
        })
        .collect())
}

/// Mirror the first `depth` interior cells into the inner ghost layer with
/// the radial momentum negated. Metric-scaled states are rebuilt from the
/// mirrored plain values with the ghost's own metric factor.
pub fn fill_reflecting_ghosts(s: &mut FieldState, grid: &RadialGrid, depth: usize) {
    let gd = grid.ghost_depth();
    let depth = depth.min(gd);
    let repr = s.repr();
    for k in 0..depth {
        let interior = gd + k;
        let ghost = gd - 1 - k;
        let plain = s.plain_cell(grid, interior);
        let mirrored = crate::physics::Conserved {
            rho: plain.rho,
            mom: -plain.mom,
            energy: plain.energy,
        };
        s.cells_mut()[ghost] = match repr {
            Representation::Plain => mirrored,
            Representation::MetricScaled => mirrored.scale(grid.center_metric(ghost)),
        };
    }
}

/// Hold fixed ambient states in the inner and outer ghost layers.
pub fn fill_ambient_ghosts(
    s: &mut FieldState,
    grid: &RadialGrid,
    gas: &GasModel,
    inner: Primitive,
    outer: Primitive,
) {
    let gd = grid.ghost_depth();
    let total = grid.total_cells();
    let repr = s.repr();
    let conserved = |w: Primitive, i: usize| match repr {
        Representation::Plain => w.to_conserved(gas),
        Representation::MetricScaled => w.to_conserved(gas).scale(grid.center_metric(i)),
    };
    for i in 0..gd {
        s.cells_mut()[i] = conserved(inner, i);
        s.cells_mut()[total - 1 - i] = conserved(outer, total - 1 - i);
    }
}

/// Boundary treatment per problem.
#[derive(Clone, Copy, Debug)]
pub enum EulerBoundary {
    /// Both ghost layers hold fixed ambient states.
    Ambient { inner: Primitive, outer: Primitive },
    /// Reflecting centerline, fixed ambient outer state.
    ReflectingCenter { outer: Primitive },
}

impl EulerBoundary {
    pub fn apply(&self, s: &mut FieldState, grid: &RadialGrid, gas: &GasModel) {
        match *self {
            EulerBoundary::Ambient { inner, outer } => {
                fill_ambient_ghosts(s, grid, gas, inner, outer);
            }
            EulerBoundary::ReflectingCenter { outer } => {
                fill_ambient_ghosts(s, grid, gas, outer, outer);
                fill_reflecting_ghosts(s, grid, grid.ghost_depth());
            }
        }
    }
}

/// Boundary treatment for an Euler problem spec.
pub fn boundary_for(spec: &ProblemSpec, gas: &GasModel) -> Option<EulerBoundary> {
    match spec {
        ProblemSpec::Advection { .. } => None,
        ProblemSpec::Acoustics { .. } => Some(EulerBoundary::ReflectingCenter {
            outer: acoustics_ambient(gas),
        }),
        ProblemSpec::Sod { .. } => Some(EulerBoundary::Ambient {
            inner: SOD_LEFT,
            outer: SOD_RIGHT,
        }),
        ProblemSpec::Sedov { .. } => Some(EulerBoundary::ReflectingCenter {
            outer: SEDOV_AMBIENT,
        }),
    }
}

/// Primitive initial condition for an Euler problem spec.
pub fn init_euler(spec: &ProblemSpec, grid: &RadialGrid, gas: &GasModel) -> Result<Vec<Primitive>> {
    match *spec {
        ProblemSpec::Advection { .. } => Err(SolverError::InvalidParameter(
            "advection is a scalar problem".into(),
        )),
        ProblemSpec::Acoustics { amplitude } => Ok(init_acoustics(grid, gas, amplitude)),
        ProblemSpec::Sod { diaphragm } => Ok(init_sod(grid, diaphragm)),
        ProblemSpec::Sedov {
            blast_energy,
            hot_spot_width,
        } => init_sedov(grid, gas, blast_energy, hot_spot_width),
    }
}
