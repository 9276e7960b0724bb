//! Symmetric second-order tensors and fourth-order stiffness in Voigt storage.
//!
//! Components are always stored in the order `xx, yy, zz, yz, xz, xy` and
//! hold *tensor* components (`eps_xy`, not the engineering shear
//! `gamma_xy = 2 eps_xy`). The double contraction therefore weights the three
//! shear slots by two, and a [`Stiffness4`] is the matrix of the linear map
//! from tensor components to tensor components.
//!
//! Three dimensions are supported:
//!
//! - [`Dim::Three`]: all six components.
//! - [`Dim::Two`]: plane strain. In-plane `xx, yy, xy` plus the out-of-plane
//!   normal `zz`, which is needed to keep plastic strains traceless in the
//!   3D sense. `yz` and `xz` are always zero. Traces and deviators use the 3D
//!   convention.
//! - [`Dim::One`]: a scalar model. The single component is the coordinate
//!   along a fixed unit deviatoric direction, so a 1D tensor is deviatoric by
//!   definition (trace zero, deviator is the identity) and its stiffness is
//!   the shear-type modulus `E / (1 + nu)`.

use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::{Error, Result};

pub const XX: usize = 0;
pub const YY: usize = 1;
pub const ZZ: usize = 2;
pub const YZ: usize = 3;
pub const XZ: usize = 4;
pub const XY: usize = 5;

/// Contraction weights for the Voigt slots.
const WEIGHTS: [f64; 6] = [1.0, 1.0, 1.0, 2.0, 2.0, 2.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dim {
    One,
    /// Plane strain.
    Two,
    Three,
}

impl Dim {
    pub fn from_spatial(n: usize) -> Option<Dim> {
        match n {
            1 => Some(Dim::One),
            2 => Some(Dim::Two),
            3 => Some(Dim::Three),
            _ => None,
        }
    }

    pub fn spatial(self) -> usize {
        match self {
            Dim::One => 1,
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }

    /// Voigt slots that may hold nonzero values in this dimension.
    pub fn active_slots(self) -> &'static [usize] {
        match self {
            Dim::One => &[XX],
            Dim::Two => &[XX, YY, ZZ, XY],
            Dim::Three => &[XX, YY, ZZ, YZ, XZ, XY],
        }
    }

    /// Slots a caller is free to prescribe as total strain. In plane strain
    /// `zz` is kinematically zero.
    pub fn kinematic_slots(self) -> &'static [usize] {
        match self {
            Dim::One => &[XX],
            Dim::Two => &[XX, YY, XY],
            Dim::Three => &[XX, YY, ZZ, YZ, XZ, XY],
        }
    }
}

/// Symmetric second-order tensor (strain or stress).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymTensor2 {
    dim: Dim,
    c: [f64; 6],
}

impl SymTensor2 {
    pub const fn zero(dim: Dim) -> Self {
        SymTensor2 { dim, c: [0.0; 6] }
    }

    /// Identity of the ambient space: `[1]` in 1D, `diag(1, 1, 0)` in plane
    /// strain, `diag(1, 1, 1)` in 3D.
    pub fn identity(dim: Dim) -> Self {
        let mut c = [0.0; 6];
        match dim {
            Dim::One => c[XX] = 1.0,
            Dim::Two => {
                c[XX] = 1.0;
                c[YY] = 1.0;
            }
            Dim::Three => {
                c[XX] = 1.0;
                c[YY] = 1.0;
                c[ZZ] = 1.0;
            }
        }
        SymTensor2 { dim, c }
    }

    pub fn scalar(value: f64) -> Self {
        let mut c = [0.0; 6];
        c[XX] = value;
        SymTensor2 { dim: Dim::One, c }
    }

    /// Plane-strain tensor with `zz = 0`.
    pub fn plane(xx: f64, yy: f64, xy: f64) -> Self {
        SymTensor2 {
            dim: Dim::Two,
            c: [xx, yy, 0.0, 0.0, 0.0, xy],
        }
    }

    pub fn plane_with_zz(xx: f64, yy: f64, zz: f64, xy: f64) -> Self {
        SymTensor2 {
            dim: Dim::Two,
            c: [xx, yy, zz, 0.0, 0.0, xy],
        }
    }

    pub fn new(xx: f64, yy: f64, zz: f64, yz: f64, xz: f64, xy: f64) -> Self {
        SymTensor2 {
            dim: Dim::Three,
            c: [xx, yy, zz, yz, xz, xy],
        }
    }

    /// Builds a tensor from raw Voigt components, rejecting values in slots
    /// that are inactive for `dim`.
    pub fn from_components(dim: Dim, c: [f64; 6]) -> Result<Self> {
        for (slot, v) in c.iter().enumerate() {
            if *v != 0.0 && !dim.active_slots().contains(&slot) {
                return Err(Error::InvalidParameter {
                    name: "tensor component outside dimension",
                    value: *v,
                });
            }
        }
        Ok(SymTensor2 { dim, c })
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.dim
    }

    #[inline]
    pub fn components(&self) -> &[f64; 6] {
        &self.c
    }

    #[inline]
    pub fn get(&self, slot: usize) -> f64 {
        self.c[slot]
    }

    /// `A : B` with shear slots counted twice. Panics on a dimension
    /// mismatch; use [`double_contract`] for a checked version.
    #[inline]
    pub fn ddot(&self, other: &SymTensor2) -> f64 {
        assert_eq!(self.dim, other.dim, "double contraction across dimensions");
        let mut s = 0.0;
        for k in 0..6 {
            s += WEIGHTS[k] * self.c[k] * other.c[k];
        }
        s
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.ddot(self))
    }

    /// 3D trace; zero for 1D tensors.
    #[inline]
    pub fn trace(&self) -> f64 {
        match self.dim {
            Dim::One => 0.0,
            _ => self.c[XX] + self.c[YY] + self.c[ZZ],
        }
    }

    pub fn deviator(&self) -> SymTensor2 {
        let mut out = *self;
        if self.dim != Dim::One {
            let m = self.trace() / 3.0;
            out.c[XX] -= m;
            out.c[YY] -= m;
            out.c[ZZ] -= m;
        }
        out
    }

    /// `A / |A|` if `|A| > tol`, otherwise zero.
    pub fn sign(&self, tol: f64) -> SymTensor2 {
        let n = self.norm();
        if n > tol {
            *self * (1.0 / n)
        } else {
            SymTensor2::zero(self.dim)
        }
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|v| v.is_finite())
    }

    /// Von Mises equivalent of a stress tensor, `sqrt(3/2) |dev s|`.
    pub fn von_mises(&self) -> f64 {
        libm::sqrt(1.5) * self.deviator().norm()
    }
}

pub fn double_contract(a: &SymTensor2, b: &SymTensor2) -> Result<f64> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    Ok(a.ddot(b))
}

pub fn deviator(a: &SymTensor2) -> SymTensor2 {
    a.deviator()
}

pub fn tensor_sign(a: &SymTensor2, tol: f64) -> SymTensor2 {
    a.sign(tol)
}

impl Add for SymTensor2 {
    type Output = SymTensor2;
    fn add(mut self, rhs: SymTensor2) -> SymTensor2 {
        self += rhs;
        self
    }
}

impl Sub for SymTensor2 {
    type Output = SymTensor2;
    fn sub(mut self, rhs: SymTensor2) -> SymTensor2 {
        self -= rhs;
        self
    }
}

impl AddAssign for SymTensor2 {
    fn add_assign(&mut self, rhs: SymTensor2) {
        assert_eq!(self.dim, rhs.dim, "tensor sum across dimensions");
        for k in 0..6 {
            self.c[k] += rhs.c[k];
        }
    }
}

impl SubAssign for SymTensor2 {
    fn sub_assign(&mut self, rhs: SymTensor2) {
        assert_eq!(self.dim, rhs.dim, "tensor difference across dimensions");
        for k in 0..6 {
            self.c[k] -= rhs.c[k];
        }
    }
}

impl Neg for SymTensor2 {
    type Output = SymTensor2;
    fn neg(mut self) -> SymTensor2 {
        for v in self.c.iter_mut() {
            *v = -*v;
        }
        self
    }
}

impl Mul<f64> for SymTensor2 {
    type Output = SymTensor2;
    fn mul(mut self, s: f64) -> SymTensor2 {
        for v in self.c.iter_mut() {
            *v *= s;
        }
        self
    }
}

impl Mul<SymTensor2> for f64 {
    type Output = SymTensor2;
    fn mul(self, t: SymTensor2) -> SymTensor2 {
        t * self
    }
}

/// Fourth-order stiffness (or compliance) with major and minor symmetries,
/// stored as the 6x6 matrix acting on tensor components.
///
/// Plane-strain stiffnesses keep the full 3D matrix so that `zz` stresses and
/// out-of-plane plastic strains are handled exactly; [`Stiffness4::plane_strain_matrix`]
/// extracts the usual 3x3 engineering matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stiffness4 {
    dim: Dim,
    m: [[f64; 6]; 6],
}

impl Stiffness4 {
    /// Isotropic stiffness from Young's modulus and Poisson's ratio.
    pub fn isotropic(e: f64, nu: f64, dim: Dim) -> Result<Self> {
        if !(e > 0.0) || !e.is_finite() {
            return Err(Error::InvalidParameter {
                name: "young_modulus",
                value: e,
            });
        }
        if !(nu > -1.0 && nu < 0.5) {
            return Err(Error::InvalidParameter {
                name: "poisson_ratio",
                value: nu,
            });
        }
        let mu = e / (2.0 * (1.0 + nu));
        let mut m = [[0.0; 6]; 6];
        if dim == Dim::One {
            m[XX][XX] = 2.0 * mu;
            return Ok(Stiffness4 { dim, m });
        }
        let lambda = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = lambda;
            }
        }
        for (k, row) in m.iter_mut().enumerate() {
            row[k] += 2.0 * mu;
        }
        Ok(Stiffness4 { dim, m })
    }

    pub fn from_matrix(dim: Dim, m: [[f64; 6]; 6]) -> Self {
        Stiffness4 { dim, m }
    }

    pub fn zero(dim: Dim) -> Self {
        Stiffness4 {
            dim,
            m: [[0.0; 6]; 6],
        }
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.dim
    }

    #[inline]
    pub fn matrix(&self) -> &[[f64; 6]; 6] {
        &self.m
    }

    /// `C : A`.
    #[inline]
    pub fn apply(&self, a: &SymTensor2) -> SymTensor2 {
        assert_eq!(self.dim, a.dim, "stiffness applied across dimensions");
        let mut out = SymTensor2::zero(self.dim);
        for &i in self.dim.active_slots() {
            let row = &self.m[i];
            let mut s = 0.0;
            for &j in self.dim.active_slots() {
                s += row[j] * a.c[j];
            }
            out.c[i] = s;
        }
        out
    }

    /// `A : C : A`.
    #[inline]
    pub fn quadratic(&self, a: &SymTensor2) -> f64 {
        a.ddot(&self.apply(a))
    }

    /// `self . other` as linear maps (apply `other` first).
    pub fn compose(&self, other: &Stiffness4) -> Stiffness4 {
        assert_eq!(self.dim, other.dim);
        let mut m = [[0.0; 6]; 6];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let mut s = 0.0;
                for k in 0..6 {
                    s += self.m[i][k] * other.m[k][j];
                }
                *v = s;
            }
        }
        Stiffness4 { dim: self.dim, m }
    }

    pub fn scaled(&self, s: f64) -> Stiffness4 {
        let mut out = *self;
        for row in out.m.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        out
    }

    pub fn add_scaled(&mut self, other: &Stiffness4, s: f64) {
        assert_eq!(self.dim, other.dim);
        for i in 0..6 {
            for j in 0..6 {
                self.m[i][j] += s * other.m[i][j];
            }
        }
    }

    /// Inverse linear map on symmetric tensors (Gauss-Jordan with partial
    /// pivoting on the active block).
    pub fn inverse(&self) -> Result<Stiffness4> {
        let slots: &[usize] = match self.dim {
            Dim::One => &[XX],
            _ => &[XX, YY, ZZ, YZ, XZ, XY],
        };
        let n = slots.len();
        let mut a = [[0.0; 12]; 6];
        let mut scale: f64 = 0.0;
        for (r, &i) in slots.iter().enumerate() {
            for (c, &j) in slots.iter().enumerate() {
                a[r][c] = self.m[i][j];
                scale = scale.max(libm::fabs(self.m[i][j]));
            }
            a[r][n + r] = 1.0;
        }
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::SingularMatrix);
        }
        for col in 0..n {
            let mut piv = col;
            for r in col + 1..n {
                if libm::fabs(a[r][col]) > libm::fabs(a[piv][col]) {
                    piv = r;
                }
            }
            if libm::fabs(a[piv][col]) <= 1e-14 * scale {
                return Err(Error::SingularMatrix);
            }
            a.swap(col, piv);
            let p = a[col][col];
            for v in a[col].iter_mut().take(2 * n) {
                *v /= p;
            }
            for r in 0..n {
                if r != col {
                    let f = a[r][col];
                    if f != 0.0 {
                        for c in 0..2 * n {
                            a[r][c] -= f * a[col][c];
                        }
                    }
                }
            }
        }
        let mut m = [[0.0; 6]; 6];
        for (r, &i) in slots.iter().enumerate() {
            for (c, &j) in slots.iter().enumerate() {
                m[i][j] = a[r][n + c];
            }
        }
        Ok(Stiffness4 { dim: self.dim, m })
    }

    /// Engineering plane-strain matrix on `(xx, yy, gamma_xy)`.
    pub fn plane_strain_matrix(&self) -> [[f64; 3]; 3] {
        const SLOTS: [usize; 3] = [XX, YY, XY];
        let mut d = [[0.0; 3]; 3];
        for (r, &i) in SLOTS.iter().enumerate() {
            for (c, &j) in SLOTS.iter().enumerate() {
                let w = if j == XY { 0.5 } else { 1.0 };
                d[r][c] = self.m[i][j] * w;
            }
        }
        d
    }

    /// Voigt matrix in the natural size of the dimension: 1x1, 3x3 (engineering
    /// plane strain) or 6x6 (tensor components).
    pub fn voigt_matrix(&self) -> alloc::vec::Vec<alloc::vec::Vec<f64>> {
        use alloc::vec;
        match self.dim {
            Dim::One => vec![vec![self.m[XX][XX]]],
            Dim::Two => self.plane_strain_matrix().iter().map(|r| r.to_vec()).collect(),
            Dim::Three => self.m.iter().map(|r| r.to_vec()).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.m
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0_f64, |a, v| a.max(libm::fabs(*v)))
    }
}

pub fn isotropic_stiffness(e: f64, nu: f64, dim: Dim) -> Result<Stiffness4> {
    Stiffness4::isotropic(e, nu, dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t3(c: [f64; 6]) -> SymTensor2 {
        SymTensor2::new(c[0], c[1], c[2], c[3], c[4], c[5])
    }

    fn full(a: &SymTensor2) -> [[f64; 3]; 3] {
        let c = a.components();
        [
            [c[XX], c[XY], c[XZ]],
            [c[XY], c[YY], c[YZ]],
            [c[XZ], c[YZ], c[ZZ]],
        ]
    }

    #[test]
    fn double_contract_examples() {
        let i2 = SymTensor2::identity(Dim::Two);
        assert_eq!(double_contract(&i2, &i2).unwrap(), 2.0);
        let z = SymTensor2::zero(Dim::Two);
        let b = SymTensor2::plane(1.5, -2.0, 0.7);
        assert_eq!(double_contract(&z, &b).unwrap(), 0.0);
        let a = SymTensor2::plane(1.0, 3.0, 2.0);
        let b = SymTensor2::plane(4.0, 5.0, 0.0);
        assert_eq!(double_contract(&a, &b).unwrap(), 19.0);
    }

    #[test]
    fn double_contract_rejects_mixed_dims() {
        let err = double_contract(&SymTensor2::scalar(1.0), &SymTensor2::identity(Dim::Three));
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn shear_weight_matches_full_contraction() {
        let a = t3([1.0, 2.0, 3.0, 0.4, -0.5, 0.6]);
        let b = t3([-1.0, 0.5, 2.0, 1.4, 0.5, -0.3]);
        let (fa, fb) = (full(&a), full(&b));
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += fa[i][j] * fb[i][j];
            }
        }
        assert!((a.ddot(&b) - s).abs() < 1e-14);
    }

    #[test]
    fn deviator_examples() {
        let sph = SymTensor2::identity(Dim::Three) * 4.2;
        assert!(sph.deviator().norm() < 1e-14);
        let a = SymTensor2::new(3.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        assert_eq!(a.deviator(), SymTensor2::new(2.0, -1.0, -1.0, 0.0, 0.0, 0.0));
        let tl = SymTensor2::new(1.0, -0.25, -0.75, 0.2, 0.0, 0.3);
        assert_eq!(tl.deviator(), tl);
    }

    #[test]
    fn plane_strain_deviator_tracks_zz() {
        let d = SymTensor2::identity(Dim::Two).deviator();
        assert!((d.get(XX) - 1.0 / 3.0).abs() < 1e-15);
        assert!((d.get(ZZ) + 2.0 / 3.0).abs() < 1e-15);
        assert!(d.trace().abs() < 1e-15);
    }

    #[test]
    fn sign_examples() {
        assert_eq!(SymTensor2::zero(Dim::Three).sign(1e-12), SymTensor2::zero(Dim::Three));
        let a = SymTensor2::plane(3.0, 4.0, 0.0);
        let s = a.sign(1e-12);
        assert!((s.norm() - 1.0).abs() < 1e-15);
        assert_eq!(s, a * 0.2);
        assert_eq!((a * 7.5).sign(1e-12), s);
    }

    #[test]
    fn isotropic_examples() {
        let c1 = Stiffness4::isotropic(10.0, 0.0, Dim::One).unwrap();
        assert_eq!(c1.matrix()[XX][XX], 10.0);
        let (e, nu) = (50.0_f64, 0.3_f64);
        let c2 = Stiffness4::isotropic(e, nu, Dim::Two).unwrap();
        let hand = 50.0 * 0.7 / (1.3 * 0.4);
        assert!((c2.plane_strain_matrix()[0][0] - hand).abs() < 1e-12);
        assert!((hand - 67.307_692_307_692_3).abs() < 1e-10);
        assert!(Stiffness4::isotropic(1.0, 0.5, Dim::Three).is_err());
        assert!(Stiffness4::isotropic(1.0, -1.0, Dim::Three).is_err());
        assert!(Stiffness4::isotropic(0.0, 0.2, Dim::Three).is_err());
    }

    #[test]
    fn plane_strain_matrix_is_textbook() {
        let (e, nu) = (210.0, 0.25);
        let d = Stiffness4::isotropic(e, nu, Dim::Two).unwrap().plane_strain_matrix();
        let f = e / ((1.0 + nu) * (1.0 - 2.0 * nu));
        let expect = [
            [f * (1.0 - nu), f * nu, 0.0],
            [f * nu, f * (1.0 - nu), 0.0],
            [0.0, 0.0, f * (1.0 - 2.0 * nu) / 2.0],
        ];
        for r in 0..3 {
            for c in 0..3 {
                assert!((d[r][c] - expect[r][c]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn inverse_of_one_dimensional() {
        let c = Stiffness4::isotropic(4.0, 0.0, Dim::One).unwrap();
        let s = c.inverse().unwrap();
        assert!((s.matrix()[XX][XX] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        assert!(Stiffness4::zero(Dim::Three).inverse().is_err());
    }

    fn lame_apply(e: f64, nu: f64, a: &SymTensor2) -> [[f64; 3]; 3] {
        // sigma_ij = lambda delta_ij eps_kk + 2 mu eps_ij, written with explicit
        // index sums over C_ijkl.
        let lambda = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
        let mu = e / (2.0 * (1.0 + nu));
        let d = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
        let fa = full(a);
        let mut s = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let cijkl = lambda * d(i, j) * d(k, l)
                            + mu * (d(i, k) * d(j, l) + d(i, l) * d(j, k));
                        s[i][j] += cijkl * fa[k][l];
                    }
                }
            }
        }
        s
    }

    fn arb_t3() -> impl Strategy<Value = SymTensor2> {
        prop::array::uniform6(-10.0f64..10.0).prop_map(t3)
    }

    proptest! {
        #[test]
        fn contraction_is_bilinear_and_symmetric(a in arb_t3(), b in arb_t3(), c in arb_t3(), s in -3.0f64..3.0) {
            let lhs = (a * s + b).ddot(&c);
            let rhs = s * a.ddot(&c) + b.ddot(&c);
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
            prop_assert_eq!(a.ddot(&b), b.ddot(&a));
        }

        #[test]
        fn norm_triangle_inequality(a in arb_t3(), b in arb_t3(), c in arb_t3()) {
            prop_assert!((a - c).norm() <= (a - b).norm() + (b - c).norm() + 1e-12);
        }

        #[test]
        fn deviator_is_projection(a in arb_t3()) {
            let d = a.deviator();
            prop_assert!(d.trace().abs() <= 1e-12 * (1.0 + a.norm()));
            let dd = d.deviator();
            prop_assert!((dd - d).norm() <= 1e-12 * (1.0 + a.norm()));
        }

        #[test]
        fn apply_matches_index_contraction(a in arb_t3(), e in 1.0f64..100.0, nu in -0.9f64..0.49) {
            let c = Stiffness4::isotropic(e, nu, Dim::Three).unwrap();
            let s = full(&c.apply(&a));
            let r = lame_apply(e, nu, &a);
            let scale = r.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
            for i in 0..3 {
                for j in 0..3 {
                    prop_assert!((s[i][j] - r[i][j]).abs() <= 1e-12 * scale);
                }
            }
        }

        #[test]
        fn stiffness_is_symmetric_positive_definite(a in arb_t3(), e in 0.1f64..1e8, nu in -0.99f64..0.499) {
            let c = Stiffness4::isotropic(e, nu, Dim::Three).unwrap();
            let m = c.matrix();
            for i in 0..6 {
                for j in 0..6 {
                    prop_assert_eq!(m[i][j], m[j][i]);
                }
            }
            if a.norm() > 1e-9 {
                prop_assert!(c.quadratic(&a) > 0.0);
            }
        }

        #[test]
        fn inverse_composes_to_identity(e in 0.1f64..1e8, nu in -0.9f64..0.45, a in arb_t3()) {
            for dim in [Dim::Three, Dim::Two, Dim::One] {
                let c = Stiffness4::isotropic(e, nu, dim).unwrap();
                let id = c.inverse().unwrap().compose(&c);
                let mut t = SymTensor2::zero(dim);
                for &k in dim.active_slots() {
                    t.c[k] = a.c[k];
                }
                let back = id.apply(&t);
                prop_assert!((back - t).norm() <= 1e-10 * (1.0 + t.norm()));
            }
        }
    }
}
