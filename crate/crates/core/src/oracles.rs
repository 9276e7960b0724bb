//! Reference computations used by the test suite and `phasemix verify`.
//!
//! Everything here works on plain `Vec<f64>` in Mandel coordinates (shear
//! components scaled by `sqrt(2)`, so the tensor contraction is the Euclidean
//! dot product) and inverts matrices with its own elimination routine. Only
//! the raw stiffness entries and scalar constants are read from
//! [`PhaseParams`]; none of the energy or evolution code is called.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::phase::{PhaseParams, TransitionParams};
use crate::tensor::{Dim, SymTensor2, XX, XY, XZ, YY, YZ, ZZ};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub name: String,
    pub max_error: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub count: usize,
}

impl OracleReport {
    pub fn new(name: &str, max_error: f64, tolerance: f64, count: usize) -> Self {
        OracleReport {
            name: name.into(),
            max_error,
            tolerance,
            pass: max_error <= tolerance,
            count,
        }
    }

    /// Combines two batches of the same check.
    pub fn merge(&self, other: &OracleReport) -> OracleReport {
        let max_error = if self.max_error.is_nan() || other.max_error.is_nan() {
            f64::NAN
        } else {
            self.max_error.max(other.max_error)
        };
        OracleReport::new(&self.name, max_error, self.tolerance, self.count + other.count)
    }
}

const SQRT2: f64 = core::f64::consts::SQRT_2;

fn mandel_slots(dim: Dim) -> &'static [usize] {
    match dim {
        Dim::One => &[XX],
        Dim::Two => &[XX, YY, ZZ, XY],
        Dim::Three => &[XX, YY, ZZ, YZ, XZ, XY],
    }
}

fn mandel_weight(slot: usize) -> f64 {
    if slot >= YZ {
        SQRT2
    } else {
        1.0
    }
}

pub fn to_mandel(t: &SymTensor2) -> Vec<f64> {
    mandel_slots(t.dim())
        .iter()
        .map(|&s| t.get(s) * mandel_weight(s))
        .collect()
}

pub fn from_mandel(dim: Dim, v: &[f64]) -> SymTensor2 {
    let mut c = [0.0; 6];
    for (k, &s) in mandel_slots(dim).iter().enumerate() {
        c[s] = v[k] / mandel_weight(s);
    }
    SymTensor2::from_components(dim, c).expect("mandel vector in the right subspace")
}

/// Orthonormal basis of the deviatoric subspace in Mandel coordinates.
pub fn deviatoric_basis(dim: Dim) -> Vec<Vec<f64>> {
    let a = 1.0 / SQRT2;
    let b = 1.0 / libm::sqrt(6.0);
    match dim {
        Dim::One => vec![vec![1.0]],
        Dim::Two => vec![
            vec![a, -a, 0.0, 0.0],
            vec![b, b, -2.0 * b, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
        ],
        Dim::Three => vec![
            vec![a, -a, 0.0, 0.0, 0.0, 0.0],
            vec![b, b, -2.0 * b, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        ],
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn matvec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Dense inverse by Gauss-Jordan elimination with full row pivoting.
pub fn invert(a: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = a.len();
    let mut w: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    let scale = a.iter().flatten().fold(0.0_f64, |m, v| m.max(libm::fabs(*v)));
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| libm::fabs(w[x][col]).total_cmp(&libm::fabs(w[y][col])))
            .unwrap();
        if !(libm::fabs(w[piv][col]) > 1e-14 * scale) {
            return Err(Error::SingularMatrix);
        }
        w.swap(col, piv);
        let p = w[col][col];
        for v in w[col].iter_mut() {
            *v /= p;
        }
        let pivot_row = w[col].clone();
        for (r, row) in w.iter_mut().enumerate() {
            if r != col {
                let f = row[col];
                axpy(row, -f, &pivot_row);
            }
        }
    }
    Ok(w.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Stiffness of a phase as a Mandel matrix.
pub fn mandel_stiffness(p: &PhaseParams) -> Vec<Vec<f64>> {
    let m = p.stiffness().matrix();
    let slots = mandel_slots(p.dim());
    slots
        .iter()
        .map(|&a| {
            slots
                .iter()
                .map(|&b| mandel_weight(a) * m[a][b] / mandel_weight(b))
                .collect()
        })
        .collect()
}

/// Mixture data in Mandel form.
#[derive(Debug, Clone)]
pub struct ReferenceMixture {
    pub dim: Dim,
    pub stiffness: Vec<Vec<Vec<f64>>>,
    pub compliance: Vec<Vec<Vec<f64>>>,
    pub chemical: Vec<f64>,
    pub hardening: Vec<f64>,
    pub yield_stress: Vec<f64>,
}

impl ReferenceMixture {
    pub fn new(params: &[PhaseParams]) -> Result<Self> {
        let stiffness: Vec<_> = params.iter().map(mandel_stiffness).collect();
        let compliance = stiffness.iter().map(|c| invert(c)).collect::<Result<Vec<_>>>()?;
        Ok(ReferenceMixture {
            dim: params[0].dim(),
            stiffness,
            compliance,
            chemical: params.iter().map(|p| p.chemical_energy()).collect(),
            hardening: params.iter().map(|p| p.hardening()).collect(),
            yield_stress: params.iter().map(|p| p.yield_stress()).collect(),
        })
    }

    pub fn k(&self) -> usize {
        self.chemical.len()
    }

    /// Harmonic (Reuss) mean of the stiffnesses.
    pub fn effective_stiffness(&self, fractions: &[f64]) -> Result<Vec<Vec<f64>>> {
        let n = self.stiffness[0].len();
        let mut s = vec![vec![0.0; n]; n];
        for (lam, c) in fractions.iter().zip(&self.compliance) {
            for (row, crow) in s.iter_mut().zip(c) {
                axpy(row, *lam, crow);
            }
        }
        invert(&s)
    }

    /// `Psi_rel` from Mandel strain and plastic strains; fractions need not sum
    /// to one.
    pub fn relaxed_energy(&self, eps: &[f64], fractions: &[f64], plastic: &[Vec<f64>]) -> Result<f64> {
        let c_eff = self.effective_stiffness(fractions)?;
        let mut a = eps.to_vec();
        let mut rest = 0.0;
        for i in 0..self.k() {
            axpy(&mut a, -fractions[i], &plastic[i]);
            rest += fractions[i] * (0.5 * self.hardening[i] * dot(&plastic[i], &plastic[i]) + self.chemical[i]);
        }
        Ok(0.5 * dot(&a, &matvec(&c_eff, &a)) + rest)
    }

    pub fn stress(&self, eps: &[f64], fractions: &[f64], plastic: &[Vec<f64>]) -> Result<Vec<f64>> {
        let c_eff = self.effective_stiffness(fractions)?;
        let mut a = eps.to_vec();
        for i in 0..self.k() {
            axpy(&mut a, -fractions[i], &plastic[i]);
        }
        Ok(matvec(&c_eff, &a))
    }

    /// `Psi_i` of one phase at its own strain.
    pub fn phase_energy(&self, i: usize, eps: &[f64], plastic: &[f64]) -> f64 {
        let e: Vec<f64> = eps.iter().zip(plastic).map(|(x, p)| x - p).collect();
        0.5 * dot(&e, &matvec(&self.stiffness[i], &e))
            + 0.5 * self.hardening[i] * dot(plastic, plastic)
            + self.chemical[i]
    }
}

/// Central differences of `f` along each direction, refined by Richardson
/// extrapolation from steps `h` and `h/2` with `h` the power of two nearest
/// to `1e-6 * scale` (so `x +- h` is exact for short mantissas), compared
/// with the analytic directional derivatives. The error is relative to the
/// largest analytic value (or `floor`, if that is larger).
pub fn fd_gradient_check<F>(
    name: &str,
    f: F,
    point: &[f64],
    directions: &[Vec<f64>],
    analytic: &[f64],
    scale: f64,
    floor: f64,
    tolerance: f64,
) -> OracleReport
where
    F: Fn(&[f64]) -> f64,
{
    let h = libm::exp2(libm::round(libm::log2(1e-6 * scale)));
    let eval = |d: &[f64], t: f64| {
        let x: Vec<f64> = point.iter().zip(d).map(|(p, di)| p + t * di).collect();
        f(&x)
    };
    let mut reference = floor;
    for a in analytic {
        reference = reference.max(libm::fabs(*a));
    }
    let mut err: f64 = 0.0;
    for (d, a) in directions.iter().zip(analytic) {
        let d1 = (eval(d, h) - eval(d, -h)) / (2.0 * h);
        let d2 = (eval(d, 0.5 * h) - eval(d, -0.5 * h)) / h;
        let rich = (4.0 * d2 - d1) / 3.0;
        let e = libm::fabs(rich - a) / reference;
        err = if e.is_nan() { f64::NAN } else { err.max(e) };
    }
    OracleReport::new(name, err, tolerance, 1)
}

/// Exact rate-independent 1D linear kinematic hardening along a
/// piecewise-linear strain history given by its breakpoints. Returns
/// `(stress, plastic strain)` at every breakpoint.
pub fn kinematic_hardening_1d(c: f64, b: f64, r: f64, strains: &[f64]) -> Vec<(f64, f64)> {
    let mut eps_p = 0.0;
    strains
        .iter()
        .map(|&e| {
            let trial = c * (e - eps_p);
            let xi = trial - b * eps_p;
            let over = libm::fabs(xi) - r;
            if over > 0.0 {
                let s = if xi > 0.0 { 1.0 } else { -1.0 };
                eps_p += over / (c + b) * s;
            }
            (c * (e - eps_p), eps_p)
        })
        .collect()
}

/// Value of `phi_ij` as a function of the candidate plastic strain of the
/// dormant phase `j`, with everything else frozen.
pub struct TransitionYield {
    sigma: Vec<f64>,
    dev_sigma_norm: f64,
    source: Vec<f64>,
    radius: f64,
    reach: f64,
    constant: f64,
    b_j: f64,
    r: f64,
}

impl TransitionYield {
    pub fn new(
        eps: &SymTensor2,
        fractions: &[f64],
        plastic: &[SymTensor2],
        params: &[PhaseParams],
        trans: &TransitionParams,
        i: usize,
        j: usize,
    ) -> Result<Self> {
        let mix = ReferenceMixture::new(params)?;
        let p: Vec<Vec<f64>> = plastic.iter().map(to_mandel).collect();
        let sigma = mix.stress(&to_mandel(eps), fractions, &p)?;
        let complementary = |k: usize| 0.5 * dot(&sigma, &matvec(&mix.compliance[k], &sigma));
        let f_i = -complementary(i) - dot(&sigma, &p[i])
            + 0.5 * mix.hardening[i] * dot(&p[i], &p[i])
            + mix.chemical[i];
        // F_j(x) = -sigma:S_j:sigma/2 - sigma:x + b_j |x|^2 / 2 + c_j
        let constant = f_i + complementary(j) - mix.chemical[j];
        let elastic = matvec(&mix.compliance[i], &sigma);
        let basis = deviatoric_basis(eps.dim());
        let radius = libm::sqrt(
            basis
                .iter()
                .map(|e| {
                    let v = dot(e, &elastic);
                    v * v
                })
                .sum(),
        );
        // the maximizer over deviatoric x lies within |P_dev sigma - b_j eps_p_i| / b_j
        // of eps_p_i: beyond it the quadratic term outweighs the linear one
        let b_j = mix.hardening[j];
        let mut dev_sigma_sq = 0.0;
        let mut g_sq = 0.0;
        for e in &basis {
            let sd = dot(e, &sigma);
            let gd = sd - b_j * dot(e, &p[i]);
            dev_sigma_sq += sd * sd;
            g_sq += gd * gd;
        }
        Ok(TransitionYield {
            dev_sigma_norm: libm::sqrt(dev_sigma_sq),
            reach: libm::sqrt(g_sq) / b_j,
            sigma,
            source: p[i].clone(),
            radius,
            constant,
            b_j,
            r: trans.get(i, j),
        })
    }

    /// Deviatoric part of the parent's elastic strain `|dev(S_i : sigma)|`,
    /// the admissible distance of a bounded candidate from `eps_p_i`.
    pub fn parent_radius(&self) -> f64 {
        self.radius
    }

    /// Distance from `eps_p_i` that contains the unconstrained maximizer.
    pub fn unbounded_reach(&self) -> f64 {
        self.reach
    }

    /// Lipschitz constant of [`eval`](Self::eval) over deviatoric `x` with
    /// `|x| <= extent`.
    pub fn lipschitz(&self, extent: f64) -> f64 {
        self.dev_sigma_norm + self.b_j * extent + self.r
    }

    pub fn distance_from_source(&self, x: &[f64]) -> f64 {
        libm::sqrt(x.iter().zip(&self.source).map(|(a, b)| (a - b) * (a - b)).sum())
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let d: Vec<f64> = x.iter().zip(&self.source).map(|(a, b)| a - b).collect();
        self.constant + dot(&self.sigma, x) - 0.5 * self.b_j * dot(x, x) - self.r * libm::sqrt(dot(&d, &d))
    }
}

/// Best point of `phi_ij` over the deviatoric grid
/// `{sum_k t_k e_k : t_k in [-bound, bound] step resolution}` where `e_k` is
/// [`deviatoric_basis`]. Ties keep the first point in lexicographic order.
/// With `bounded`, points farther than [`TransitionYield::parent_radius`]
/// from the parent's plastic strain are skipped.
/// Returns the point, its grid coordinates and the value.
pub fn grid_argmax_phi(
    eps: &SymTensor2,
    fractions: &[f64],
    plastic: &[SymTensor2],
    params: &[PhaseParams],
    trans: &TransitionParams,
    i: usize,
    j: usize,
    resolution: f64,
    bound: f64,
    bounded: bool,
) -> Result<(SymTensor2, Vec<f64>, f64)> {
    if !(resolution > 0.0) {
        return Err(Error::InvalidParameter {
            name: "resolution",
            value: resolution,
        });
    }
    let dim = eps.dim();
    let basis = deviatoric_basis(dim);
    let per_axis = libm::floor(2.0 * bound / resolution + 1e-9) as usize + 1;
    let points = libm::pow(per_axis as f64, basis.len() as f64);
    if points > 1e7 {
        return Err(Error::GridTooLarge { points });
    }
    let phi = TransitionYield::new(eps, fractions, plastic, params, trans, i, j)?;
    let n = basis[0].len();
    let mut idx = vec![0usize; basis.len()];
    let mut best = f64::NEG_INFINITY;
    let mut best_t = vec![0.0; basis.len()];
    let mut x = vec![0.0; n];
    loop {
        x.iter_mut().for_each(|v| *v = 0.0);
        for (k, e) in basis.iter().enumerate() {
            axpy(&mut x, -bound + idx[k] as f64 * resolution, e);
        }
        let admissible = !bounded || phi.distance_from_source(&x) <= phi.parent_radius();
        let v = if admissible { phi.eval(&x) } else { f64::NEG_INFINITY };
        if v > best {
            best = v;
            for k in 0..idx.len() {
                best_t[k] = -bound + idx[k] as f64 * resolution;
            }
        }
        let mut k = idx.len();
        loop {
            if k == 0 {
                let mut out = vec![0.0; n];
                for (t, e) in best_t.iter().zip(&basis) {
                    axpy(&mut out, *t, e);
                }
                return Ok((from_mandel(dim, &out), best_t, best));
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < per_axis {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Closed-form Q4 stiffness of an axis-aligned `2 half_x` by `2 half_y`
/// rectangle for an engineering matrix
/// `[[d11, d12, 0], [d12, d22, 0], [0, 0, d33]]`, unit thickness.
/// Uses the exact integrals of products of shape-function derivatives.
pub fn q4_rectangle_stiffness(half_x: f64, half_y: f64, d: &[[f64; 3]; 3]) -> [[f64; 8]; 8] {
    const XI: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
    const ETA: [f64; 4] = [-1.0, -1.0, 1.0, 1.0];
    let (a, b) = (half_x, half_y);
    let ixx = |p: usize, q: usize| XI[p] * XI[q] * (b / a) * (1.0 + ETA[p] * ETA[q] / 3.0) / 4.0;
    let iyy = |p: usize, q: usize| ETA[p] * ETA[q] * (a / b) * (1.0 + XI[p] * XI[q] / 3.0) / 4.0;
    let ixy = |p: usize, q: usize| XI[p] * ETA[q] / 4.0;
    let mut k = [[0.0; 8]; 8];
    for p in 0..4 {
        for q in 0..4 {
            k[2 * p][2 * q] = d[0][0] * ixx(p, q) + d[2][2] * iyy(p, q);
            k[2 * p][2 * q + 1] = d[0][1] * ixy(p, q) + d[2][2] * ixy(q, p);
            k[2 * p + 1][2 * q] = d[0][1] * ixy(q, p) + d[2][2] * ixy(p, q);
            k[2 * p + 1][2 * q + 1] = d[1][1] * iyy(p, q) + d[2][2] * ixx(p, q);
        }
    }
    k
}

/// Plane-strain engineering matrix of an isotropic solid from `E` and `nu`.
pub fn plane_strain_isotropic(e: f64, nu: f64) -> [[f64; 3]; 3] {
    let f = e / ((1.0 + nu) * (1.0 - 2.0 * nu));
    [
        [f * (1.0 - nu), f * nu, 0.0],
        [f * nu, f * (1.0 - nu), 0.0],
        [0.0, 0.0, e / (2.0 * (1.0 + nu))],
    ]
}

/// Coordinates of a deviatoric tensor in [`deviatoric_basis`].
pub fn deviatoric_coordinates(t: &SymTensor2) -> Vec<f64> {
    let m = to_mandel(t);
    deviatoric_basis(t.dim()).iter().map(|e| dot(e, &m)).collect()
}

/// `min { sum_i lambda_i Psi_i(eps_i) : sum_i lambda_i eps_i = eps }` by
/// conjugate gradients on the strains of all populated phases but the one
/// with the largest fraction, whose strain is eliminated through the
/// constraint. Exact line search uses the (linear) gradient difference.
pub fn constrained_relaxation_min(
    eps: &SymTensor2,
    fractions: &[f64],
    plastic: &[SymTensor2],
    params: &[PhaseParams],
) -> Result<f64> {
    let mix = ReferenceMixture::new(params)?;
    let e = to_mandel(eps);
    let p: Vec<Vec<f64>> = plastic.iter().map(to_mandel).collect();
    let n = e.len();
    let m = (0..fractions.len())
        .max_by(|&a, &b| fractions[a].total_cmp(&fractions[b]))
        .unwrap();
    let free: Vec<usize> = (0..fractions.len()).filter(|&i| i != m && fractions[i] > 0.0).collect();
    let lm = fractions[m];

    let split = |x: &[f64]| -> Vec<Vec<f64>> {
        let mut strains = vec![e.clone(); fractions.len()];
        let mut em = e.clone();
        for (q, &i) in free.iter().enumerate() {
            strains[i] = x[q * n..(q + 1) * n].to_vec();
            axpy(&mut em, -fractions[i], &strains[i]);
        }
        strains[m] = em.iter().map(|v| v / lm).collect();
        strains
    };
    let objective = |x: &[f64]| -> f64 {
        let s = split(x);
        (0..fractions.len())
            .filter(|&i| fractions[i] > 0.0)
            .map(|i| fractions[i] * mix.phase_energy(i, &s[i], &p[i]))
            .sum()
    };
    let gradient = |x: &[f64]| -> Vec<f64> {
        let s = split(x);
        let stress = |i: usize| {
            let d: Vec<f64> = s[i].iter().zip(&p[i]).map(|(a, b)| a - b).collect();
            matvec(&mix.stiffness[i], &d)
        };
        let sm = stress(m);
        let mut g = Vec::with_capacity(free.len() * n);
        for &i in &free {
            let si = stress(i);
            g.extend(si.iter().zip(&sm).map(|(a, b)| fractions[i] * (a - b)));
        }
        g
    };

    let dof = free.len() * n;
    if dof == 0 {
        return Ok(objective(&[]));
    }
    let mut x: Vec<f64> = free.iter().flat_map(|_| e.iter().copied()).collect();
    let mut g = gradient(&x);
    let g0 = libm::sqrt(dot(&g, &g));
    let scale = mix
        .stiffness
        .iter()
        .flatten()
        .flatten()
        .fold(0.0_f64, |a, v| a.max(libm::fabs(*v)));
    let tol = 1e-13 * scale * libm::sqrt(dot(&e, &e)).max(1e-3) + 1e-15 * g0;
    let mut d: Vec<f64> = g.iter().map(|v| -v).collect();
    for it in 0..20 * dof {
        let gn = libm::sqrt(dot(&g, &g));
        if gn <= tol {
            return Ok(objective(&x));
        }
        let xd: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + b).collect();
        let hd: Vec<f64> = gradient(&xd).iter().zip(&g).map(|(a, b)| a - b).collect();
        let curv = dot(&d, &hd);
        if !(curv > 0.0) {
            return Err(Error::RelaxationNotConverged { gradient_norm: gn });
        }
        let alpha = -dot(&g, &d) / curv;
        axpy(&mut x, alpha, &d);
        let g_new = gradient(&x);
        let beta = if (it + 1) % dof == 0 {
            0.0
        } else {
            (dot(&g_new, &g_new) / dot(&g, &g)).max(0.0)
        };
        g = g_new;
        d = d.iter().zip(&g).map(|(di, gi)| beta * di - gi).collect();
    }
    let gn = libm::sqrt(dot(&g, &g));
    if gn <= tol {
        Ok(objective(&x))
    } else {
        Err(Error::RelaxationNotConverged { gradient_norm: gn })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fd_is_exact_on_quadratics() {
        let f = |x: &[f64]| 3.0 * x[0] * x[0] - 2.0 * x[0] * x[1] + 0.5 * x[1] * x[1] + x[1];
        let x = [0.75, -1.25];
        let grad = [6.0 * 0.75 + 2.0 * 1.25, -2.0 * 0.75 - 1.25 + 1.0];
        let dirs = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.5, 0.75]];
        let an = [grad[0], grad[1], 0.5 * grad[0] + 0.75 * grad[1]];
        let r = fd_gradient_check("quadratic", f, &x, &dirs, &an, 1.0, 0.0, 1e-10);
        assert!(r.pass, "{r:?}");
        let bad = [grad[0] * 1.01, grad[1], an[2]];
        assert!(!fd_gradient_check("canary", f, &x, &dirs, &bad, 1.0, 0.0, 1e-6).pass);
    }

    #[test]
    fn bilinear_hand_values() {
        let h = kinematic_hardening_1d(2.0, 1.0, 0.2, &[0.05, 0.1, 0.4]);
        assert!((h[0].0 - 0.1).abs() < 1e-15);
        assert!((h[1].0 - 0.2).abs() < 1e-15);
        assert!((h[2].0 - 0.4).abs() < 1e-14);
    }

    #[test]
    fn bauschinger_reverse_yield_after_two_r() {
        let (c, b, r) = (2.0, 1.0, 0.2);
        let up = kinematic_hardening_1d(c, b, r, &[0.4]);
        let peak = up[0].0;
        // unloading by 2r in stress stays elastic, a little more yields
        let e_rev = 0.4 - 2.0 * r / c;
        let h = kinematic_hardening_1d(c, b, r, &[0.4, e_rev + 1e-9, e_rev - 0.01]);
        assert!((h[1].0 - (peak - 2.0 * r)).abs() < 1e-8);
        assert_eq!(h[1].1, h[0].1);
        assert!(h[2].1 < h[1].1);
    }

    #[test]
    fn inverse_roundtrip() {
        let a = vec![vec![4.0, 1.0, 0.5], vec![1.0, 3.0, 0.2], vec![0.5, 0.2, 2.0]];
        let inv = invert(&a).unwrap();
        for i in 0..3 {
            let col: Vec<f64> = (0..3).map(|k| inv[k][i]).collect();
            let e = matvec(&a, &col);
            for (k, v) in e.iter().enumerate() {
                assert!((v - if k == i { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
        assert!(invert(&[vec![1.0, 2.0], vec![2.0, 4.0]]).is_err());
    }

    #[test]
    fn mandel_roundtrip_and_norm() {
        let t = SymTensor2::new(0.1, -0.2, 0.1, 0.03, -0.04, 0.05);
        let m = to_mandel(&t);
        assert!((dot(&m, &m).sqrt() - t.norm()).abs() < 1e-15);
        assert_eq!(from_mandel(Dim::Three, &m), t);
        let d = SymTensor2::plane_with_zz(0.3, -0.1, -0.2, 0.07);
        let coords = deviatoric_coordinates(&d);
        let mut back = vec![0.0; 4];
        for (c, e) in coords.iter().zip(deviatoric_basis(Dim::Two)) {
            axpy(&mut back, *c, &e);
        }
        assert!((from_mandel(Dim::Two, &back) - d).norm() < 1e-15);
    }

    #[test]
    fn relaxation_single_phase_and_equal_phases() {
        let p = PhaseParams::isotropic(10.0, 0.3, Dim::Three, 0.5, 0.1, 2.0).unwrap();
        let e = SymTensor2::new(0.01, -0.02, 0.005, 0.001, 0.0, 0.003);
        let ep = SymTensor2::new(0.002, -0.001, -0.001, 0.0, 0.0, 0.0);
        let one = constrained_relaxation_min(&e, &[1.0], &[ep], core::slice::from_ref(&p)).unwrap();
        let mix = ReferenceMixture::new(core::slice::from_ref(&p)).unwrap();
        assert!((one - mix.phase_energy(0, &to_mandel(&e), &to_mandel(&ep))).abs() < 1e-15);

        let two = constrained_relaxation_min(&e, &[0.3, 0.7], &[ep, ep], &[p.clone(), p.clone()]).unwrap();
        assert!((two - one).abs() < 1e-12 * one.abs());
    }

    #[test]
    fn grid_plateau_returns_first_point() {
        let params = vec![
            PhaseParams::new_unvalidated(
                crate::tensor::Stiffness4::isotropic(1.0, 0.0, Dim::One).unwrap(),
                0.0,
                0.1,
                0.0,
            )
            .unwrap(),
            PhaseParams::new_unvalidated(
                crate::tensor::Stiffness4::isotropic(1.0, 0.0, Dim::One).unwrap(),
                0.0,
                0.1,
                0.0,
            )
            .unwrap(),
        ];
        let trans = TransitionParams::uniform(2, 0.0).unwrap();
        let z = SymTensor2::scalar(0.0);
        let (x, t, v) = grid_argmax_phi(&z, &[1.0, 0.0], &[z, z], &params, &trans, 0, 1, 0.01, 0.05, false).unwrap();
        assert_eq!(t, vec![-0.05]);
        assert!((x.get(0) + 0.05).abs() < 1e-15);
        assert_eq!(v, 0.0);
    }

    #[test]
    fn grid_rejects_huge_searches() {
        let p = PhaseParams::isotropic(1.0, 0.3, Dim::Three, 0.0, 0.1, 1.0).unwrap();
        let trans = TransitionParams::uniform(2, 0.1).unwrap();
        let z = SymTensor2::zero(Dim::Three);
        let r = grid_argmax_phi(&z, &[1.0, 0.0], &[z, z], &[p.clone(), p], &trans, 0, 1, 1e-3, 0.05, false);
        assert!(matches!(r, Err(Error::GridTooLarge { .. })));
    }

    #[test]
    fn q4_rectangle_reference_matches_element() {
        let d = plane_strain_isotropic(70.0, 0.3);
        let d_model = crate::tensor::Stiffness4::isotropic(70.0, 0.3, Dim::Two).unwrap().plane_strain_matrix();
        for r in 0..3 {
            for c in 0..3 {
                assert!((d[r][c] - d_model[r][c]).abs() < 1e-12);
            }
        }
        let coords = [[1.0, 2.0], [2.5, 2.0], [2.5, 2.4], [1.0, 2.4]];
        let k = crate::fem::element_stiffness(&coords, &[d; 4]).unwrap();
        let reference = q4_rectangle_stiffness(0.75, 0.2, &d);
        for r in 0..8 {
            for c in 0..8 {
                assert!((k[r][c] - reference[r][c]).abs() < 1e-10 * 70.0, "{r} {c}");
            }
        }
    }
}
