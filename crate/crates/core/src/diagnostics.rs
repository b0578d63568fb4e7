//! Error norms, observed convergence orders and conservation ledgers.

use crate::error::{Result, SolverError};
use crate::mesh::RadialGrid;
use crate::schemes::{FieldState, Representation};

/// How the discrete domain total is formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TotalMode {
    /// The telescoped invariant of the scheme that evolved the state:
    /// volume-weighted sums for plain states, `dr`-weighted sums of the
    /// scaled variables for metric-scaled states.
    MethodAdapted,
    /// Per-cell 4-point Gauss-Legendre quadrature of `r^alpha P(r)` with a
    /// degree-4 interpolant through the five nearest cell centers; a single
    /// rule usable across methods.
    Gauss4,
}

impl TotalMode {
    pub fn name(self) -> &'static str {
        match self {
            TotalMode::MethodAdapted => "method_adapted",
            TotalMode::Gauss4 => "gauss4",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    Mass,
    Momentum,
    Energy,
}

impl Component {
    fn pick(self, c: crate::physics::Conserved) -> f64 {
        match self {
            Component::Mass => c.rho,
            Component::Momentum => c.mom,
            Component::Energy => c.energy,
        }
    }
}

/// Unweighted RMS difference over two equal-length interior profiles.
pub fn l2_error(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(SolverError::Diagnostics(format!(
            "length mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let sum: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok((sum / a.len() as f64).sqrt())
}

/// Pairwise observed orders `log(e_k / e_{k+1}) / log(n_{k+1} / n_k)`.
pub fn observed_orders(errors: &[f64], resolutions: &[usize]) -> Result<Vec<f64>> {
    if errors.len() != resolutions.len() {
        return Err(SolverError::Diagnostics(
            "errors and resolutions must have equal length".into(),
        ));
    }
    if errors.iter().any(|&e| !(e > 0.0)) {
        return Err(SolverError::Diagnostics(
            "observed orders need strictly positive errors".into(),
        ));
    }
    if resolutions.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SolverError::Diagnostics(
            "resolutions must be strictly increasing".into(),
        ));
    }
    Ok(errors
        .windows(2)
        .zip(resolutions.windows(2))
        .map(|(e, n)| (e[0] / e[1]).ln() / (n[1] as f64 / n[0] as f64).ln())
        .collect())
}

/// Discrete domain total of one conserved component over interior cells.
pub fn discrete_total(
    s: &FieldState,
    grid: &RadialGrid,
    component: Component,
    mode: TotalMode,
) -> Result<f64> {
    match mode {
        TotalMode::MethodAdapted => Ok(match s.repr() {
            Representation::Plain => grid
                .interior()
                .map(|i| grid.cell_volume(i) * component.pick(s.cells()[i]))
                .sum(),
            Representation::MetricScaled => grid
                .interior()
                .map(|i| grid.dr() * component.pick(s.cells()[i]))
                .sum(),
        }),
        TotalMode::Gauss4 => {
            let values: Vec<f64> = grid
                .interior()
                .map(|i| component.pick(s.plain_cell(grid, i)))
                .collect();
            gauss4_scalar_total(&values, grid)
        }
    }
}

/// 4-point Gauss-Legendre nodes and weights on [-1, 1].
fn gauss4_rule() -> [(f64, f64); 4] {
    let s30 = 30f64.sqrt();
    let x_in = (3.0 / 7.0 - 2.0 / 7.0 * (6.0f64 / 5.0).sqrt()).sqrt();
    let x_out = (3.0 / 7.0 + 2.0 / 7.0 * (6.0f64 / 5.0).sqrt()).sqrt();
    let w_in = (18.0 + s30) / 36.0;
    let w_out = (18.0 - s30) / 36.0;
    [
        (-x_out, w_out),
        (-x_in, w_in),
        (x_in, w_in),
        (x_out, w_out),
    ]
}

/// Quadrature of `r^alpha P(r)` per cell with P the degree-4 interpolant of
/// the five nearest interior cell values; `values` is the unscaled interior
/// profile.
pub fn gauss4_scalar_total(values: &[f64], grid: &RadialGrid) -> Result<f64> {
    let n = grid.n_cells();
    if n < 5 {
        return Err(SolverError::Diagnostics(format!(
            "Gauss quadrature mode needs at least 5 cells, got {n}"
        )));
    }
    let gd = grid.ghost_depth();
    let rule = gauss4_rule();
    let mut total = 0.0;
    for ii in 0..n {
        let start = ii.saturating_sub(2).min(n - 5);
        let nodes: [f64; 5] = std::array::from_fn(|k| grid.center(gd + start + k));
        let vals: [f64; 5] = std::array::from_fn(|k| values[start + k]);

        let (rl, rr) = (grid.face(gd + ii), grid.face(gd + ii + 1));
        let half = 0.5 * (rr - rl);
        let mid = 0.5 * (rr + rl);
        let mut cell = 0.0;
        for (x, w) in rule {
            let r = mid + half * x;
            cell += w * grid.geometry().metric(r) * lagrange_eval(&nodes, &vals, r);
        }
        total += half * cell;
    }
    Ok(total)
}

fn lagrange_eval(nodes: &[f64; 5], vals: &[f64; 5], x: f64) -> f64 {
    let mut acc = 0.0;
    for k in 0..5 {
        let mut term = vals[k];
        for m in 0..5 {
            if m != k {
                term *= (x - nodes[m]) / (nodes[k] - nodes[m]);
            }
        }
        acc += term;
    }
    acc
}

/// Residual row: totals at time `t` minus the baseline totals.
#[derive(Clone, Copy, Debug)]
pub struct LedgerRow {
    pub t: f64,
    pub delta_mass: f64,
    pub delta_momentum: f64,
    pub delta_energy: f64,
}

/// Time series of conservation residuals against the t = 0 baseline.
#[derive(Clone, Debug)]
pub struct ConservationLedger {
    mode: TotalMode,
    baseline: [f64; 3],
    rows: Vec<LedgerRow>,
}

impl ConservationLedger {
    pub fn new(s0: &FieldState, grid: &RadialGrid, mode: TotalMode) -> Result<Self> {
        let baseline = [
            discrete_total(s0, grid, Component::Mass, mode)?,
            discrete_total(s0, grid, Component::Momentum, mode)?,
            discrete_total(s0, grid, Component::Energy, mode)?,
        ];
        Ok(ConservationLedger {
            mode,
            baseline,
            rows: vec![LedgerRow {
                t: 0.0,
                delta_mass: 0.0,
                delta_momentum: 0.0,
                delta_energy: 0.0,
            }],
        })
    }

    pub fn record(&mut self, t: f64, s: &FieldState, grid: &RadialGrid) -> Result<()> {
        let row = LedgerRow {
            t,
            delta_mass: discrete_total(s, grid, Component::Mass, self.mode)? - self.baseline[0],
            delta_momentum: discrete_total(s, grid, Component::Momentum, self.mode)?
                - self.baseline[1],
            delta_energy: discrete_total(s, grid, Component::Energy, self.mode)?
                - self.baseline[2],
        };
        self.rows.push(row);
        Ok(())
    }

    pub fn mode(&self) -> TotalMode {
        self.mode
    }

    pub fn baseline(&self) -> [f64; 3] {
        self.baseline
    }

    pub fn rows(&self) -> &[LedgerRow] {
        &self.rows
    }

    /// Mass and energy residuals of the latest row at or before `t`.
    pub fn residual_at(&self, t: f64) -> (f64, f64) {
        let row = self
            .rows
            .iter()
            .rev()
            .find(|r| r.t <= t + 1e-12)
            .unwrap_or(&self.rows[0]);
        (row.delta_mass, row.delta_energy)
    }
}

/// Errors and observed orders over a resolution ladder.
#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub resolutions: Vec<usize>,
    pub errors: Vec<f64>,
    pub orders: Vec<f64>,
}

impl ConvergenceReport {
    pub fn from_errors(resolutions: Vec<usize>, errors: Vec<f64>) -> Result<Self> {
        let orders = observed_orders(&errors, &resolutions)?;
        Ok(ConvergenceReport {
            resolutions,
            errors,
            orders,
        })
    }

    /// Order observed on the finest resolution pair.
    pub fn finest_order(&self) -> f64 {
        *self.orders.last().expect("report with at least two rows")
    }
}
