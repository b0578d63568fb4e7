//! Uniform cell-centered radial grids with ghost layers.
//!
//! Cell `i` occupies `[r_{i-1/2}, r_{i+1/2}]` and carries its value at the
//! center `r_i`. Ghost cells extend the layout below `r_min` and above
//! `r_max` with the same spacing; ghost centers below `r = 0` are allowed
//! and are only ever written by boundary fills.

use crate::error::{Result, SolverError};

/// Radial symmetry exponent: the flux divergence is `(1/r^alpha) d(r^alpha F)/dr`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Geometry {
    Cartesian,
    Cylindrical,
    Spherical,
}

impl Geometry {
    pub fn from_alpha(alpha: i64) -> Result<Self> {
        match alpha {
            0 => Ok(Geometry::Cartesian),
            1 => Ok(Geometry::Cylindrical),
            2 => Ok(Geometry::Spherical),
            other => Err(SolverError::InvalidAlpha(other)),
        }
    }

    pub fn alpha(self) -> u32 {
        match self {
            Geometry::Cartesian => 0,
            Geometry::Cylindrical => 1,
            Geometry::Spherical => 2,
        }
    }

    /// Metric factor `r^alpha`. Signed: negative radii (ghost centers) keep
    /// their sign for odd alpha so that scaled fields remain smooth across
    /// the axis.
    pub fn metric(self, r: f64) -> f64 {
        match self {
            Geometry::Cartesian => 1.0,
            Geometry::Cylindrical => r,
            Geometry::Spherical => r * r,
        }
    }
}

/// Uniform cell-centered grid over `[r_min, r_max]` with `ghost_depth`
/// ghost cells on each side.
#[derive(Clone, Debug)]
pub struct RadialGrid {
    n_cells: usize,
    ghost_depth: usize,
    r_min: f64,
    r_max: f64,
    dr: f64,
    geometry: Geometry,
}

impl RadialGrid {
    pub fn new(
        n_cells: usize,
        r_min: f64,
        r_max: f64,
        geometry: Geometry,
        ghost_depth: usize,
    ) -> Result<Self> {
        if n_cells == 0 {
            return Err(SolverError::Grid("n_cells must be positive".into()));
        }
        if !(r_max > r_min) {
            return Err(SolverError::Grid(format!(
                "r_max ({r_max}) must exceed r_min ({r_min})"
            )));
        }
        if r_min < 0.0 {
            return Err(SolverError::Grid(format!("r_min ({r_min}) must be >= 0")));
        }
        let dr = (r_max - r_min) / n_cells as f64;
        Ok(RadialGrid {
            n_cells,
            ghost_depth,
            r_min,
            r_max,
            dr,
            geometry,
        })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn ghost_depth(&self) -> usize {
        self.ghost_depth
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn dr(&self) -> f64 {
        self.dr
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    /// Total cell count including both ghost layers.
    pub fn total_cells(&self) -> usize {
        self.n_cells + 2 * self.ghost_depth
    }

    /// Index range of interior cells within the total layout.
    pub fn interior(&self) -> std::ops::Range<usize> {
        self.ghost_depth..self.ghost_depth + self.n_cells
    }

    /// Center radius of cell `i` (total indexing, ghosts included).
    pub fn center(&self, i: usize) -> f64 {
        self.r_min + (i as f64 - self.ghost_depth as f64 + 0.5) * self.dr
    }

    /// Left face radius of cell `k`; `face(total_cells())` is the rightmost face.
    pub fn face(&self, k: usize) -> f64 {
        self.r_min + (k as f64 - self.ghost_depth as f64) * self.dr
    }

    /// Interior cell centers, in order.
    pub fn interior_centers(&self) -> Vec<f64> {
        self.interior().map(|i| self.center(i)).collect()
    }

    /// `r^alpha` at the center of cell `i` (signed, see [`Geometry::metric`]).
    pub fn center_metric(&self, i: usize) -> f64 {
        self.geometry.metric(self.center(i))
    }

    /// `r^alpha` at face `k`.
    pub fn face_metric(&self, k: usize) -> f64 {
        self.geometry.metric(self.face(k))
    }

    /// Cell volume `(r_{i+1/2}^{a+1} - r_{i-1/2}^{a+1}) / (a+1)` (angular
    /// factors omitted). Exactly `dr` in the Cartesian case.
    pub fn cell_volume(&self, i: usize) -> f64 {
        let a = self.geometry.alpha();
        if a == 0 {
            return self.dr;
        }
        let rl = self.face(i);
        let rr = self.face(i + 1);
        let p = (a + 1) as i32;
        (rr.powi(p) - rl.powi(p)) / (a + 1) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn build_grid_layout() {
        let g = RadialGrid::new(4, 0.0, 1.0, Geometry::Cylindrical, 3).unwrap();
        assert_eq!(g.dr(), 0.25);
        let centers = g.interior_centers();
        assert_eq!(centers, vec![0.125, 0.375, 0.625, 0.875]);
        assert_eq!(g.total_cells(), 10);

        let g = RadialGrid::new(100, 0.0, 1.0, Geometry::Cylindrical, 3).unwrap();
        assert_relative_eq!(g.dr(), 0.01);
        assert_eq!(g.interior().len(), 100);

        let g = RadialGrid::new(1, 1.0, 2.0, Geometry::Cartesian, 0).unwrap();
        assert_eq!(g.interior_centers(), vec![1.5]);
    }

    #[test]
    fn centers_are_face_midpoints_and_faces_increase() {
        let g = RadialGrid::new(7, 0.0, 1.3, Geometry::Spherical, 3).unwrap();
        for i in 0..g.total_cells() {
            assert!(g.face(i + 1) > g.face(i));
            assert_relative_eq!(
                g.center(i),
                0.5 * (g.face(i) + g.face(i + 1)),
                epsilon = 1e-14
            );
        }
        // interior centers stay strictly positive even with r_min = 0
        for i in g.interior() {
            assert!(g.center(i) > 0.0);
        }
    }

    #[test]
    fn cell_volume_examples() {
        // alpha = 0 reduces to dr
        let g = RadialGrid::new(10, 0.5, 1.5, Geometry::Cartesian, 0).unwrap();
        for i in 0..g.total_cells() {
            assert_eq!(g.cell_volume(i), g.dr());
        }

        // alpha = 2, faces (0, 0.25) -> 0.25^3 / 3
        let g = RadialGrid::new(4, 0.0, 1.0, Geometry::Spherical, 0).unwrap();
        assert_relative_eq!(g.cell_volume(0), 0.25f64.powi(3) / 3.0, epsilon = 1e-15);

        // alpha = 1, faces (0.95, 1.05) -> (1.05^2 - 0.95^2)/2 = 0.1
        let g = RadialGrid::new(10, 0.45, 1.45, Geometry::Cylindrical, 0).unwrap();
        assert_relative_eq!(g.cell_volume(5), 0.1, epsilon = 1e-14);
    }

    #[test]
    fn face_metric_examples() {
        let g = RadialGrid::new(4, 0.0, 1.0, Geometry::Cartesian, 0).unwrap();
        for k in 0..=4 {
            assert_eq!(g.face_metric(k), 1.0);
        }
        let g = RadialGrid::new(4, 0.0, 1.0, Geometry::Spherical, 0).unwrap();
        assert_relative_eq!(g.face_metric(2), 0.25);
        let g = RadialGrid::new(4, 0.0, 1.0, Geometry::Cylindrical, 0).unwrap();
        assert_eq!(g.face_metric(0), 0.0);
    }

    #[test]
    fn volume_telescoping() {
        for geom in [Geometry::Cartesian, Geometry::Cylindrical, Geometry::Spherical] {
            let g = RadialGrid::new(137, 0.0, 2.0, geom, 3).unwrap();
            let sum: f64 = g.interior().map(|i| g.cell_volume(i)).sum();
            let p = (geom.alpha() + 1) as i32;
            let exact = (g.r_max().powi(p) - g.r_min().powi(p)) / (geom.alpha() + 1) as f64;
            assert_relative_eq!(sum, exact, epsilon = 1e-12);
        }
    }

    #[test]
    fn construction_errors() {
        assert!(RadialGrid::new(0, 0.0, 1.0, Geometry::Cartesian, 3).is_err());
        assert!(RadialGrid::new(4, 1.0, 1.0, Geometry::Cartesian, 3).is_err());
        assert!(RadialGrid::new(4, 2.0, 1.0, Geometry::Cartesian, 3).is_err());
        assert!(RadialGrid::new(4, -1.0, 1.0, Geometry::Cartesian, 3).is_err());
        assert!(Geometry::from_alpha(3).is_err());
        assert!(Geometry::from_alpha(-1).is_err());
    }

    #[test]
    fn ghost_centers_extend_below_zero() {
        let g = RadialGrid::new(10, 0.0, 1.0, Geometry::Cylindrical, 3).unwrap();
        assert_relative_eq!(g.center(0), -0.25);
        assert_relative_eq!(g.center(2), -0.05);
        assert_relative_eq!(g.center(3), 0.05);
        assert_relative_eq!(g.face(3), 0.0);
    }
}
