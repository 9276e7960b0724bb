//! Structured O-grid for a quarter plate with a circular hole at the origin.
//!
//! Grid lines run from the hole arc to the outer edges. Angular coordinate
//! `s` in `[0, 1]` maps to the arc angle `s pi/2`; the outer end of a line is
//! on the loaded edge `x = width` for `s <= 1/2` and on the top edge for
//! `s >= 1/2`. The radial coordinate is graded toward the hole with
//! `(exp(a t) - 1)/(exp(a) - 1)`. Doubling both counts nests the meshes.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use phasemix_core::fem::Mesh;
use phasemix_core::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateGeometry {
    pub width: f64,
    pub height: f64,
    pub radius: f64,
    /// Elements along the quarter arc, even.
    pub n_angular: usize,
    /// Elements from the hole to the outer edge.
    pub n_radial: usize,
    pub grading: f64,
}

impl PlateGeometry {
    pub fn benchmark(n_angular: usize, n_radial: usize) -> Self {
        PlateGeometry {
            width: 2.5,
            height: 2.5,
            radius: 0.9,
            n_angular,
            n_radial,
            grading: 1.5,
        }
    }

    pub fn node_id(&self, i: usize, j: usize) -> usize {
        j * (self.n_angular + 1) + i
    }

    /// The node at the top of the hole, `(0, radius)`.
    pub fn hole_top(&self) -> usize {
        self.node_id(self.n_angular, 0)
    }

    fn point(&self, s: f64, t: f64) -> [f64; 2] {
        let th = s * FRAC_PI_2;
        let a = [self.radius * th.cos(), self.radius * th.sin()];
        let b = if s <= 0.5 {
            [self.width, 2.0 * s * self.height]
        } else {
            [2.0 * (1.0 - s) * self.width, self.height]
        };
        let w = if self.grading == 0.0 {
            t
        } else {
            (self.grading * t).exp_m1() / self.grading.exp_m1()
        };
        [(1.0 - w) * a[0] + w * b[0], (1.0 - w) * a[1] + w * b[1]]
    }

    pub fn mesh(&self) -> Result<Mesh> {
        let (ns, nr) = (self.n_angular, self.n_radial);
        if ns < 2 || ns % 2 != 0 || nr == 0 {
            return Err(Error::InvalidMesh(format!("unsupported grid {ns} x {nr}")));
        }
        if !(self.radius > 0.0 && self.radius < self.width.min(self.height)) {
            return Err(Error::InvalidMesh("hole does not fit the plate".into()));
        }
        let mut nodes = Vec::with_capacity((ns + 1) * (nr + 1));
        for j in 0..=nr {
            for i in 0..=ns {
                let mut p = self.point(i as f64 / ns as f64, j as f64 / nr as f64);
                // exact zeros on the symmetry lines
                if i == 0 {
                    p[1] = 0.0;
                }
                if i == ns {
                    p[0] = 0.0;
                }
                nodes.push(p);
            }
        }
        let mut elements = Vec::with_capacity(ns * nr);
        for j in 0..nr {
            for i in 0..ns {
                elements.push([
                    self.node_id(i, j),
                    self.node_id(i, j + 1),
                    self.node_id(i + 1, j + 1),
                    self.node_id(i + 1, j),
                ]);
            }
        }
        let mut sets = BTreeMap::new();
        sets.insert("hole".to_string(), (0..=ns).map(|i| self.node_id(i, 0)).collect());
        sets.insert("bottom".to_string(), (0..=nr).map(|j| self.node_id(0, j)).collect());
        sets.insert("left".to_string(), (0..=nr).map(|j| self.node_id(ns, j)).collect());
        sets.insert("load".to_string(), (0..=ns / 2).map(|i| self.node_id(i, nr)).collect());
        sets.insert("top".to_string(), (ns / 2..=ns).map(|i| self.node_id(i, nr)).collect());
        Mesh::new(nodes, elements, sets)
    }

    /// Boundary segments as node pairs per set, in walking order.
    pub fn boundary_lines(&self) -> Vec<(&'static str, [usize; 2])> {
        let (ns, nr) = (self.n_angular, self.n_radial);
        let mut out = Vec::new();
        for j in 0..nr {
            out.push(("bottom", [self.node_id(0, j), self.node_id(0, j + 1)]));
        }
        for i in 0..ns / 2 {
            out.push(("load", [self.node_id(i, nr), self.node_id(i + 1, nr)]));
        }
        for i in ns / 2..ns {
            out.push(("top", [self.node_id(i, nr), self.node_id(i + 1, nr)]));
        }
        for j in (0..nr).rev() {
            out.push(("left", [self.node_id(ns, j + 1), self.node_id(ns, j)]));
        }
        for i in (0..ns).rev() {
            out.push(("hole", [self.node_id(i + 1, 0), self.node_id(i, 0)]));
        }
        out
    }
}

/// The coarse, fine and superfine benchmark meshes.
pub fn benchmark_meshes() -> [(&'static str, PlateGeometry); 3] {
    [
        ("coarse", PlateGeometry::benchmark(16, 8)),
        ("fine", PlateGeometry::benchmark(32, 16)),
        ("superfine", PlateGeometry::benchmark(64, 32)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corners_and_sets() {
        let g = PlateGeometry::benchmark(4, 2);
        let m = g.mesh().unwrap();
        assert_eq!((m.n_nodes(), m.n_elements()), (15, 8));
        assert_eq!(m.nodes()[g.hole_top()], [0.0, 0.9]);
        assert_eq!(m.nodes()[g.node_id(0, 0)], [0.9, 0.0]);
        assert_eq!(m.nodes()[g.node_id(2, 2)], [2.5, 2.5]);
        for &n in m.node_set("load").unwrap() {
            assert!((m.nodes()[n][0] - 2.5).abs() < 1e-15);
        }
        for &n in m.node_set("hole").unwrap() {
            let p = m.nodes()[n];
            assert!(((p[0] * p[0] + p[1] * p[1]).sqrt() - 0.9).abs() < 1e-14);
        }
    }

    #[test]
    fn area_is_square_minus_quarter_disc() {
        // straight chords under-cover the arc, so the area converges from above
        let exact = 2.5 * 2.5 - std::f64::consts::PI * 0.81 / 4.0;
        let mut errors = Vec::new();
        for (_, g) in benchmark_meshes() {
            let m = g.mesh().unwrap();
            let a: f64 = (0..m.n_elements())
                .map(|e| phasemix_core::fem::element::area(&m.element_coords(e)).unwrap())
                .sum();
            errors.push(a - exact);
        }
        assert!(errors.iter().all(|&e| e > 0.0));
        assert!(errors[1] < errors[0] / 3.0 && errors[2] < errors[1] / 3.0);
    }
}
