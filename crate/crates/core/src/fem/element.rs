//! Bilinear quadrilateral (Q4) in plane strain with 2x2 Gauss quadrature.
//!
//! Local node order is counter-clockwise, `(-1,-1), (1,-1), (1,1), (-1,1)`
//! in the reference square. Strains use the engineering Voigt vector
//! `(eps_xx, eps_yy, gamma_xy)`.

use crate::{Error, Result};

pub type Coords = [[f64; 2]; 4];
pub type ElementMatrix = [[f64; 8]; 8];

const G: f64 = 0.577_350_269_189_625_8;

/// Gauss points in the reference square, all with unit weight.
pub const GAUSS_POINTS: [[f64; 2]; 4] = [[-G, -G], [G, -G], [G, G], [-G, G]];

const CORNERS: [[f64; 2]; 4] = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];

pub fn shape_functions(xi: f64, eta: f64) -> [f64; 4] {
    let mut n = [0.0; 4];
    for (a, c) in CORNERS.iter().enumerate() {
        n[a] = 0.25 * (1.0 + c[0] * xi) * (1.0 + c[1] * eta);
    }
    n
}

/// Derivatives with respect to `(xi, eta)`.
pub fn shape_derivatives(xi: f64, eta: f64) -> [[f64; 2]; 4] {
    let mut d = [[0.0; 2]; 4];
    for (a, c) in CORNERS.iter().enumerate() {
        d[a][0] = 0.25 * c[0] * (1.0 + c[1] * eta);
        d[a][1] = 0.25 * c[1] * (1.0 + c[0] * xi);
    }
    d
}

/// Physical shape-function gradients and `det J` at a reference point.
pub fn gradients(coords: &Coords, xi: f64, eta: f64) -> Result<([[f64; 2]; 4], f64)> {
    let dn = shape_derivatives(xi, eta);
    let mut j = [[0.0; 2]; 2];
    for a in 0..4 {
        for r in 0..2 {
            for c in 0..2 {
                j[r][c] += dn[a][r] * coords[a][c];
            }
        }
    }
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    if !(det > 0.0) {
        return Err(Error::InvalidMesh(alloc::format!(
            "non-positive Jacobian determinant {det:e}"
        )));
    }
    let inv = [[j[1][1] / det, -j[0][1] / det], [-j[1][0] / det, j[0][0] / det]];
    let mut g = [[0.0; 2]; 4];
    for a in 0..4 {
        g[a][0] = inv[0][0] * dn[a][0] + inv[0][1] * dn[a][1];
        g[a][1] = inv[1][0] * dn[a][0] + inv[1][1] * dn[a][1];
    }
    Ok((g, det))
}

/// Strain-displacement matrix for engineering strains.
pub fn b_matrix(grad: &[[f64; 2]; 4]) -> [[f64; 8]; 3] {
    let mut b = [[0.0; 8]; 3];
    for a in 0..4 {
        b[0][2 * a] = grad[a][0];
        b[1][2 * a + 1] = grad[a][1];
        b[2][2 * a] = grad[a][1];
        b[2][2 * a + 1] = grad[a][0];
    }
    b
}

/// `B` and `w det J` at every Gauss point.
pub fn gauss_data(coords: &Coords) -> Result<[([[f64; 8]; 3], f64); 4]> {
    let mut out = [([[0.0; 8]; 3], 0.0); 4];
    for (g, p) in GAUSS_POINTS.iter().enumerate() {
        let (grad, det) = gradients(coords, p[0], p[1])?;
        out[g] = (b_matrix(&grad), det);
    }
    Ok(out)
}

/// `sum_gp B^T D_gp B det J` for one 3x3 engineering plane-strain matrix per
/// Gauss point (unit thickness).
pub fn element_stiffness(coords: &Coords, d: &[[[f64; 3]; 3]; 4]) -> Result<ElementMatrix> {
    let data = gauss_data(coords)?;
    let mut k = [[0.0; 8]; 8];
    for (g, (b, w)) in data.iter().enumerate() {
        add_btdb(&mut k, b, &d[g], *w);
    }
    Ok(k)
}

pub(crate) fn add_btdb(k: &mut ElementMatrix, b: &[[f64; 8]; 3], d: &[[f64; 3]; 3], w: f64) {
    let mut db = [[0.0; 8]; 3];
    for r in 0..3 {
        for c in 0..8 {
            db[r][c] = d[r][0] * b[0][c] + d[r][1] * b[1][c] + d[r][2] * b[2][c];
        }
    }
    for i in 0..8 {
        for j in 0..8 {
            k[i][j] += w * (b[0][i] * db[0][j] + b[1][i] * db[1][j] + b[2][i] * db[2][j]);
        }
    }
}

/// `B u_e` at one Gauss point.
pub fn engineering_strain(b: &[[f64; 8]; 3], u: &[f64; 8]) -> [f64; 3] {
    let mut e = [0.0; 3];
    for (r, row) in b.iter().enumerate() {
        e[r] = row.iter().zip(u).map(|(x, y)| x * y).sum();
    }
    e
}

pub fn area(coords: &Coords) -> Result<f64> {
    Ok(gauss_data(coords)?.iter().map(|(_, w)| w).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{Dim, Stiffness4};

    fn unit_square() -> Coords {
        [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
    }

    fn elastic(e: f64, nu: f64) -> [[[f64; 3]; 3]; 4] {
        [Stiffness4::isotropic(e, nu, Dim::Two).unwrap().plane_strain_matrix(); 4]
    }

    #[test]
    fn partition_of_unity() {
        for p in GAUSS_POINTS {
            let n = shape_functions(p[0], p[1]);
            assert!((n.iter().sum::<f64>() - 1.0).abs() < 1e-15);
            let d = shape_derivatives(p[0], p[1]);
            assert!(d.iter().map(|r| r[0]).sum::<f64>().abs() < 1e-15);
        }
    }

    #[test]
    fn rigid_modes_are_in_the_null_space() {
        let c = [[0.1, 0.0], [1.3, 0.2], [1.1, 0.9], [-0.1, 1.2]];
        let k = element_stiffness(&c, &elastic(210.0, 0.3)).unwrap();
        let norm = k.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()));
        let mut modes = [[0.0; 8]; 3];
        for a in 0..4 {
            modes[0][2 * a] = 1.0;
            modes[1][2 * a + 1] = 1.0;
            modes[2][2 * a] = -c[a][1];
            modes[2][2 * a + 1] = c[a][0];
        }
        for m in modes {
            for row in k.iter() {
                let f: f64 = row.iter().zip(&m).map(|(x, y)| x * y).sum();
                assert!(f.abs() < 1e-9 * norm);
            }
        }
    }

    #[test]
    fn rotation_permutes_stiffness() {
        let k = element_stiffness(&unit_square(), &elastic(1.0, 0.25)).unwrap();
        // rotate the square by 90 degrees: node a moves to where node a+1 was
        let rot = [[1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.0, 0.0]];
        let kr = element_stiffness(&rot, &elastic(1.0, 0.25)).unwrap();
        // dofs of the rotated element expressed in the original frame:
        // (ux, uy)_rot = (-uy, ux)_orig
        let q = |a: usize, d: usize| -> (usize, f64) {
            if d == 0 {
                (2 * a + 1, 1.0)
            } else {
                (2 * a, -1.0)
            }
        };
        for a in 0..4 {
            for da in 0..2 {
                for b in 0..4 {
                    for db in 0..2 {
                        let (i, si) = q(a, da);
                        let (j, sj) = q(b, db);
                        let lhs = kr[2 * a + da][2 * b + db];
                        let rhs = si * sj * k[i][j];
                        assert!((lhs - rhs).abs() < 1e-14, "{a}{da} {b}{db}");
                    }
                }
            }
        }
    }

    #[test]
    fn inverted_element_rejected() {
        let c = [[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]];
        assert!(element_stiffness(&c, &elastic(1.0, 0.3)).is_err());
    }

    #[test]
    fn constant_strain_is_reproduced() {
        let c = [[0.1, 0.0], [1.3, 0.2], [1.1, 0.9], [-0.1, 1.2]];
        let mut u = [0.0; 8];
        for a in 0..4 {
            u[2 * a] = 0.01 * c[a][0] + 0.004 * c[a][1];
            u[2 * a + 1] = -0.02 * c[a][1];
        }
        for (b, _) in gauss_data(&c).unwrap() {
            let e = engineering_strain(&b, &u);
            assert!((e[0] - 0.01).abs() < 1e-15);
            assert!((e[1] + 0.02).abs() < 1e-15);
            assert!((e[2] - 0.004).abs() < 1e-15);
        }
        assert!((area(&[[0.0, 0.0], [2.0, 0.0], [2.0, 3.0], [0.0, 3.0]]).unwrap() - 6.0).abs() < 1e-14);
    }
}
