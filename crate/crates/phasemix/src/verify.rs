//! Oracle checks on random instances.
//!
//! Every suite draws its instances from a ChaCha8 stream seeded by the
//! caller, so a seed fixes the whole run.

use std::fmt::Write as _;
use std::str::FromStr;

use phasemix_core::energy::{self, effective_elasticity, MixtureResponse};
use phasemix_core::evolution::{initiation_strain, step};
use phasemix_core::matpoint::{run_program, uniaxial_direction, LoadProgram};
use phasemix_core::oracles::{
    constrained_relaxation_min, deviatoric_basis, deviatoric_coordinates, fd_gradient_check, from_mandel,
    grid_argmax_phi, kinematic_hardening_1d, to_mandel, OracleReport, TransitionYield,
};
use phasemix_core::{
    Dim, Material, MixtureState, ModelOptions, PhaseParams, RegularizationParams, SymTensor2, TransitionParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::AppError;

pub const DEFAULT_SEED: u64 = 20240607;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Fd,
    Grid,
    SinglePhase,
    Relaxation,
    Fuzz,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["fd", "grid", "single-phase", "relaxation", "fuzz", "all"];
}

impl FromStr for Suite {
    type Err = AppError;

    fn from_str(s: &str) -> Result<Self, AppError> {
        Ok(match s {
            "fd" => Suite::Fd,
            "grid" => Suite::Grid,
            "single-phase" => Suite::SinglePhase,
            "relaxation" => Suite::Relaxation,
            "fuzz" => Suite::Fuzz,
            "all" => Suite::All,
            _ => {
                return Err(AppError::Usage(format!(
                    "unknown suite '{s}', expected one of {}",
                    Suite::NAMES.join(", ")
                )))
            }
        })
    }
}

pub fn run(suite: Suite, seed: u64) -> Result<Vec<OracleReport>, AppError> {
    let mut out = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Fd {
        out.extend(fd_checks(seed, 100)?);
    }
    if all || suite == Suite::Grid {
        out.extend(initiation_grid(seed, 20, 1e-3)?.reports);
    }
    if all || suite == Suite::SinglePhase {
        out.extend(single_phase()?.reports);
    }
    if all || suite == Suite::Relaxation {
        out.extend(relaxation(seed, 50)?);
    }
    if all || suite == Suite::Fuzz {
        out.extend(fuzz(seed, 100, 100)?.reports);
    }
    Ok(out)
}

/// One row per report, fixed columns.
pub fn table(reports: &[OracleReport]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<36} {:>6} {:>12} {:>12} {:>6}", "check", "n", "max_error", "tolerance", "result");
    for r in reports {
        let _ = writeln!(
            s,
            "{:<36} {:>6} {:>12.3e} {:>12.3e} {:>6}",
            r.name,
            r.count,
            r.max_error,
            r.tolerance,
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    s
}

fn merge(name: &str, tol: f64, reports: impl IntoIterator<Item = OracleReport>) -> OracleReport {
    reports
        .into_iter()
        .fold(OracleReport::new(name, 0.0, tol, 0), |acc, r| acc.merge(&r))
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

fn random_phase(rng: &mut ChaCha8Rng, dim: Dim, chemical: (f64, f64)) -> Result<PhaseParams, AppError> {
    Ok(PhaseParams::isotropic(
        uniform(rng, 1.0, 10.0),
        uniform(rng, 0.0, 0.45),
        dim,
        uniform(rng, chemical.0, chemical.1),
        uniform(rng, 0.005, 0.05),
        uniform(rng, 0.1, 2.0),
    )?)
}

fn random_tensor(rng: &mut ChaCha8Rng, dim: Dim, scale: f64) -> SymTensor2 {
    let mut c = [0.0; 6];
    for &s in dim.kinematic_slots() {
        c[s] = uniform(rng, -scale, scale);
    }
    SymTensor2::from_components(dim, c).expect("slots of the dimension")
}

fn random_deviatoric(rng: &mut ChaCha8Rng, dim: Dim, scale: f64) -> SymTensor2 {
    let basis = deviatoric_basis(dim);
    let mut x = vec![0.0; basis[0].len()];
    for e in &basis {
        let t = uniform(rng, -scale, scale);
        x.iter_mut().zip(e).for_each(|(a, b)| *a += t * b);
    }
    from_mandel(dim, &x)
}

fn random_fractions(rng: &mut ChaCha8Rng, k: usize, min: f64) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| uniform(rng, min.max(1e-3), 1.0)).collect();
    let total: f64 = w.iter().sum();
    let mut f: Vec<f64> = w.iter().map(|v| v / total).collect();
    let head: f64 = f[..k - 1].iter().sum();
    f[k - 1] = 1.0 - head;
    f
}

fn random_state(rng: &mut ChaCha8Rng, dim: Dim, k: usize, scale: f64) -> Result<MixtureState, AppError> {
    let f = random_fractions(rng, k, 0.05);
    let p = (0..k).map(|_| random_deviatoric(rng, dim, scale)).collect();
    Ok(MixtureState::new(f, p)?)
}

/// Stress and both driving forces against finite differences of the relaxed
/// energy. Fraction directions `e_i - e_j` and traceless plastic directions
/// keep the perturbed state admissible.
pub fn fd_checks(seed: u64, n: usize) -> Result<Vec<OracleReport>, AppError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xfd);
    let dim = Dim::Three;
    let (mut stress, mut fractions, mut plastic) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..n {
        let k = rng.random_range(2..=4);
        let params: Vec<PhaseParams> = (0..k)
            .map(|_| random_phase(&mut rng, dim, (-0.01, 0.01)))
            .collect::<Result<_, _>>()?;
        let state = random_state(&mut rng, dim, k, 0.02)?;
        let eps = random_tensor(&mut rng, dim, 0.05);
        let resp = MixtureResponse::new(&eps, &state, &params)?;

        let x0 = to_mandel(&eps);
        let dirs: Vec<Vec<f64>> = (0..x0.len())
            .map(|a| (0..x0.len()).map(|b| f64::from(u8::from(a == b))).collect())
            .collect();
        let sig = to_mandel(&resp.stress());
        let f = |x: &[f64]| energy::relaxed_energy(&from_mandel(dim, x), &state, &params).unwrap_or(f64::NAN);
        stress.push(fd_gradient_check("fd stress", f, &x0, &dirs, &sig, eps.norm(), 0.0, 1e-6));

        let forces: Vec<f64> = (0..k).map(|i| resp.driving_force_fraction(i)).collect();
        let (mut dirs, mut an) = (Vec::new(), Vec::new());
        for i in 0..k {
            for j in i + 1..k {
                let mut d = vec![0.0; k];
                d[i] = 1.0;
                d[j] = -1.0;
                dirs.push(d);
                an.push(forces[i] - forces[j]);
            }
        }
        let floor = forces.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        let plastic_strains = state.plastic_strains().to_vec();
        let f = |l: &[f64]| {
            MixtureState::new(l.to_vec(), plastic_strains.clone())
                .and_then(|s| energy::relaxed_energy(&eps, &s, &params))
                .unwrap_or(f64::NAN)
        };
        fractions.push(fd_gradient_check(
            "fd fraction forces",
            f,
            state.fractions(),
            &dirs,
            &an,
            1.0,
            floor,
            1e-6,
        ));

        let basis = deviatoric_basis(dim);
        for i in 0..k {
            let g = to_mandel(&resp.driving_force_plastic(i));
            let an: Vec<f64> = basis.iter().map(|e| e.iter().zip(&g).map(|(a, b)| a * b).sum()).collect();
            let p0 = to_mandel(state.plastic(i));
            let f = |x: &[f64]| {
                let mut s = state.clone();
                s.set_plastic(i, from_mandel(dim, x));
                energy::relaxed_energy(&eps, &s, &params).unwrap_or(f64::NAN)
            };
            let scale = state.plastic(i).norm().max(1e-3);
            plastic.push(fd_gradient_check("fd plastic forces", f, &p0, &basis, &an, scale, 0.0, 1e-6));
        }
    }
    Ok(vec![
        merge("fd stress", 1e-6, stress),
        merge("fd fraction forces", 1e-6, fractions),
        merge("fd plastic forces", 1e-6, plastic),
    ])
}

/// Closed-form initiation strain against the brute-force grid, in grid
/// cells (Chebyshev distance of the deviatoric coordinates).
struct GridInstance {
    eps: SymTensor2,
    state: MixtureState,
    params: Vec<PhaseParams>,
    trans: TransitionParams,
    i: usize,
    j: usize,
}

fn grid_instance(rng: &mut ChaCha8Rng, dim: Dim) -> Result<GridInstance, AppError> {
    let k = rng.random_range(2..=3);
    let params: Vec<PhaseParams> = (0..k)
        .map(|_| random_phase(rng, dim, (-0.01, 0.01)))
        .collect::<Result<_, _>>()?;
    let trans = TransitionParams::new(
        &(0..k)
            .map(|_| (0..k).map(|_| uniform(rng, 0.0, 0.02)).collect())
            .collect::<Vec<Vec<f64>>>(),
    )?;
    let j = rng.random_range(0..k);
    let i = (j + rng.random_range(1..k)) % k;
    let mut fractions = vec![0.0; k];
    if k == 2 {
        fractions[i] = 1.0;
    } else {
        let other = 3 - i - j;
        let l = uniform(rng, 0.2, 1.0);
        fractions[i] = l;
        fractions[other] = 1.0 - l;
    }
    let plastic: Vec<SymTensor2> = (0..k).map(|_| random_deviatoric(rng, dim, 0.005)).collect();
    let state = MixtureState::new(fractions, plastic)?;
    let eps = random_tensor(rng, dim, 0.02);
    Ok(GridInstance {
        eps,
        state,
        params,
        trans,
        i,
        j,
    })
}

impl GridInstance {
    fn yield_fn(&self) -> Result<TransitionYield, AppError> {
        Ok(TransitionYield::new(
            &self.eps,
            self.state.fractions(),
            self.state.plastic_strains(),
            &self.params,
            &self.trans,
            self.i,
            self.j,
        )?)
    }

    fn grid(&self, resolution: f64, bound: f64, bounded: bool) -> Result<(Vec<f64>, f64), AppError> {
        let (_, t, v) = grid_argmax_phi(
            &self.eps,
            self.state.fractions(),
            self.state.plastic_strains(),
            &self.params,
            &self.trans,
            self.i,
            self.j,
            resolution,
            bound,
            bounded,
        )?;
        Ok((t, v))
    }

    fn main(&self, bounded: bool) -> Result<SymTensor2, AppError> {
        let options = ModelOptions {
            bounded_initiation: bounded,
            ..ModelOptions::default()
        };
        Ok(initiation_strain(
            &self.eps,
            &self.state,
            &self.params,
            &self.trans,
            &options,
            self.i,
            self.j,
        )?)
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn cells(a: &[f64], b: &[f64], resolution: f64) -> f64 {
    a.iter().zip(b).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs() / resolution))
}

/// Grid search of `phi_ij` against [`initiation_strain`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    /// Literal argmax against the unconstrained grid, in cells.
    pub unbounded_cells: Vec<f64>,
    /// Bounded argmax against the grid restricted to the parent ball, in
    /// cells. The tangential slack of the ball makes this informational.
    pub bounded_cells: Vec<f64>,
    pub reports: Vec<OracleReport>,
}

/// `n` instances per mode, grid `resolution`, grids up to `[-0.1, 0.1]^3`.
///
/// Unbounded mode compares argmax coordinates (one cell) and checks that no
/// grid point beats the closed form. Bounded mode compares values: the closed form must dominate every admissible grid
/// point, and fall short of the best by at most `L h sqrt(3)`, the Lipschitz
/// bound over one cell diagonal. Instances with a ball radius below half a
/// diagonal are skipped, since the ball may then hold no grid point near
/// the maximizer.
pub fn initiation_grid(seed: u64, n: usize, resolution: f64) -> Result<GridResult, AppError> {
    let dim = Dim::Two;
    let fit = |reach: f64| (reach / resolution).ceil() * resolution;

    let diagonal = resolution * 3f64.sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e);
    let mut unbounded_shortfall = 0.0_f64;
    let mut unbounded_cells = Vec::with_capacity(n);
    while unbounded_cells.len() < n {
        let inst = grid_instance(&mut rng, dim)?;
        let phi = inst.yield_fn()?;
        let source = deviatoric_coordinates(inst.state.plastic(inst.i));
        let bound = fit(source.iter().fold(0.0_f64, |a, v| a.max(v.abs())) + phi.unbounded_reach() + 2.0 * resolution);
        if bound > 0.1 {
            continue;
        }
        let (t, v_grid) = inst.grid(resolution, bound, false)?;
        let x = inst.main(false)?;
        let extent = norm(&to_mandel(inst.state.plastic(inst.i))) + phi.unbounded_reach();
        let lh = phi.lipschitz(extent) * diagonal;
        unbounded_shortfall = unbounded_shortfall.max((v_grid - phi.eval(&to_mandel(&x))) / lh);
        unbounded_cells.push(cells(&deviatoric_coordinates(&x), &t, resolution));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9d);
    let mut bounded_cells = Vec::with_capacity(n);
    let (mut shortfall, mut gap) = (0.0_f64, 0.0_f64);
    while bounded_cells.len() < n {
        let inst = grid_instance(&mut rng, dim)?;
        let phi = inst.yield_fn()?;
        let source = deviatoric_coordinates(inst.state.plastic(inst.i));
        let rho = phi.parent_radius();
        let bound = fit(source.iter().fold(0.0_f64, |a, v| a.max(v.abs())) + rho + 2.0 * resolution);
        if bound > 0.1 || rho < 0.5 * diagonal {
            continue;
        }
        let x = inst.main(true)?;
        let (t, v_grid) = inst.grid(resolution, bound, true)?;
        let v_main = phi.eval(&to_mandel(&x));
        let extent = norm(&to_mandel(inst.state.plastic(inst.i))) + rho;
        let lh = phi.lipschitz(extent) * diagonal;
        shortfall = shortfall.max((v_grid - v_main) / lh);
        gap = gap.max((v_main - v_grid) / lh);
        bounded_cells.push(cells(&deviatoric_coordinates(&x), &t, resolution));
    }

    let worst = |c: &[f64]| c.iter().fold(0.0_f64, |a, &v| a.max(v));
    let reports = vec![
        OracleReport::new("initiation argmax (cells)", worst(&unbounded_cells), 1.0, n),
        OracleReport::new("initiation argmax shortfall (L h)", unbounded_shortfall.max(0.0), 1e-9, n),
        OracleReport::new("initiation bounded shortfall (L h)", shortfall.max(0.0), 1e-9, n),
        OracleReport::new("initiation bounded gap (L h)", gap.max(0.0), 1.0, n),
    ];
    Ok(GridResult {
        unbounded_cells,
        bounded_cells,
        reports,
    })
}

/// Errors of the single-phase cyclic run against the rate-independent
/// solution, largest viscosity first.
#[derive(Debug, Clone, PartialEq)]
pub struct SinglePhaseResult {
    /// `(eta1, max |sigma - sigma_ref| / r)`.
    pub errors: Vec<(f64, f64)>,
    pub reports: Vec<OracleReport>,
}

pub fn single_phase() -> Result<SinglePhaseResult, AppError> {
    let (c, b, r) = (2.0, 1.0, 0.2);
    let dim = Dim::Three;
    let phase = PhaseParams::isotropic(c, 0.0, dim, 0.0, r, b)?;
    let material = Material::new(vec![phase], TransitionParams::uniform(1, r)?, ModelOptions::for_stress_scale(c))?;
    let program = LoadProgram::cyclic(0.4, 6400, 2, uniaxial_direction(dim))?;
    let strains: Vec<f64> = (0..=program.n_steps()).map(|n| program.coordinate(n)).collect();
    let reference = kinematic_hardening_1d(c, b, r, &strains);
    let dt = 1.0;
    let mut errors = Vec::new();
    for a in [0.5, 0.05, 0.005] {
        let eta1 = a / (dt * (c + b));
        let reg = RegularizationParams::new(eta1, 1.0, dt)?;
        let series = run_program(&program, &material, &reg, &MixtureState::pure(dim, 1, 0))?;
        let e = series
            .records()
            .iter()
            .zip(&reference)
            .fold(0.0_f64, |m, (rec, (s, _))| m.max((rec.stress - s).abs() / r));
        errors.push((eta1, e));
    }
    let ratio = errors.windows(2).fold(0.0_f64, |m, w| m.max(w[0].1 / w[1].1));
    let reports = vec![
        OracleReport::new("single-phase stress / r", errors[0].1, 0.01, program.n_steps() + 1),
        OracleReport::new("single-phase error ratio", ratio, 1.0 - f64::EPSILON, errors.len()),
    ];
    Ok(SinglePhaseResult { errors, reports })
}

/// Closed-form relaxed energy against the numerical constrained minimum, and
/// the Reuss stiffness against the Voigt bound.
pub fn relaxation(seed: u64, n: usize) -> Result<Vec<OracleReport>, AppError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x3e1a);
    let dim = Dim::Three;
    let mut energy_report = OracleReport::new("relaxation energy", 0.0, 1e-6, 0);
    let mut bound_report = OracleReport::new("reuss <= voigt", 0.0, 1e-12, 0);
    for _ in 0..n {
        let k = rng.random_range(1..=4);
        let params: Vec<PhaseParams> = (0..k)
            .map(|_| random_phase(&mut rng, dim, (0.0, 0.01)))
            .collect::<Result<_, _>>()?;
        let state = random_state(&mut rng, dim, k, 0.02)?;
        let eps = random_tensor(&mut rng, dim, 0.05);
        let closed = energy::relaxed_energy(&eps, &state, &params)?;
        let numeric = constrained_relaxation_min(&eps, state.fractions(), state.plastic_strains(), &params)?;
        let rel = (closed - numeric).abs() / numeric.abs();
        energy_report = energy_report.merge(&OracleReport::new("", rel, 1e-6, 1));

        let reuss = effective_elasticity(&state, &params)?.stiffness;
        let mut worst = 0.0_f64;
        for _ in 0..10 {
            let a = random_tensor(&mut rng, dim, 1.0);
            let qr = reuss.quadratic(&a);
            let qv: f64 = params
                .iter()
                .zip(state.fractions())
                .map(|(p, l)| l * p.stiffness().quadratic(&a))
                .sum();
            worst = worst.max((qr - qv) / qv);
        }
        bound_report = bound_report.merge(&OracleReport::new("", worst.max(0.0), 1e-12, 1));
    }
    Ok(vec![energy_report, bound_report])
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzResult {
    pub reports: Vec<OracleReport>,
    pub steps: usize,
    /// Steps with at least one active transition.
    pub transforming_steps: usize,
    /// Steps with plastic flow.
    pub yielding_steps: usize,
}

const FUZZ_STEP: f64 = 0.01;
const FUZZ_REVERSION: f64 = 0.9;

/// Random strain walks on random three-phase materials, checking the state
/// invariants after every step. The walk reverts to zero, which bounds the
/// strain.
pub fn fuzz(seed: u64, configs: usize, steps: usize) -> Result<FuzzResult, AppError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xf022);
    let dim = Dim::Three;
    let (mut sum, mut bounds, mut trace, mut compl, mut diss) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    let (mut transforming, mut yielding) = (0, 0);
    for _ in 0..configs {
        let params: Vec<PhaseParams> = (0..3)
            .map(|_| random_phase(&mut rng, dim, (-0.01, 0.01)))
            .collect::<Result<_, _>>()?;
        let trans = TransitionParams::new(
            &(0..3)
                .map(|_| (0..3).map(|_| uniform(&mut rng, 0.0, 0.01)).collect())
                .collect::<Vec<Vec<f64>>>(),
        )?;
        let stiff = params.iter().fold(0.0_f64, |a, p| a.max(p.stiffness().max_abs()));
        let hard = params.iter().fold(0.0_f64, |a, p| a.max(p.hardening()));
        let material = Material::new(params, trans, ModelOptions::for_stress_scale(stiff))?;
        let dt = 1.0;
        // Both rates inside the explicit stability range, eta dt L in
        // [0.05, 0.5]. L bounds the curvature of the relaxed energy: in the
        // plastic strains by the stiffness, in the fractions by
        // stiffness * (|eps| + |eps_p|)^2, with each strain component below
        // FUZZ_STEP / (1 - FUZZ_REVERSION) and |eps_p| below the saturation
        // value stiffness * |eps| / b.
        let b_min = material.phases.iter().fold(f64::INFINITY, |a, p| a.min(p.hardening()));
        let eps_max = FUZZ_STEP / (1.0 - FUZZ_REVERSION) * 6f64.sqrt();
        let l_frac = stiff * (eps_max * (1.0 + stiff / b_min)).powi(2);
        let reg = RegularizationParams::new(
            uniform(&mut rng, 0.05, 0.5) / (dt * (stiff + hard)),
            uniform(&mut rng, 0.05, 0.5) / (dt * l_frac),
            dt,
        )?;
        let mut state = if rng.random_bool(0.5) {
            MixtureState::pure(dim, 3, rng.random_range(0..3))
        } else {
            MixtureState::with_fractions(dim, random_fractions(&mut rng, 3, 0.0))?
        };
        let mut eps = SymTensor2::zero(dim);
        for _ in 0..steps {
            eps = eps * FUZZ_REVERSION + random_tensor(&mut rng, dim, FUZZ_STEP);
            let (next, report) = step(&eps, &state, &material, &reg)?;
            let f = next.fractions();
            sum = sum.max((f.iter().sum::<f64>() - 1.0).abs());
            for &l in f {
                bounds = bounds.max((-l).max(l - 1.0).max(0.0));
            }
            for p in next.plastic_strains() {
                trace = trace.max(p.trace().abs());
            }
            let g = &report.transition_rates;
            for i in 0..3 {
                for j in i + 1..3 {
                    compl = compl.max(g.get(i, j).min(g.get(j, i)));
                }
            }
            let psi = report.relaxed_energy.abs();
            if report.dissipation_increment < 0.0 {
                diss = diss.max(-report.dissipation_increment / psi);
            }
            transforming += usize::from(!report.active_transitions.is_empty());
            yielding += usize::from(!report.active_yield.is_empty());
            state = next;
        }
    }
    let n = configs * steps;
    Ok(FuzzResult {
        reports: vec![
            OracleReport::new("fuzz sum(lambda) - 1", sum, 1e-12, n),
            OracleReport::new("fuzz lambda outside [0, 1]", bounds, 0.0, n),
            OracleReport::new("fuzz trace(eps_p)", trace, 1e-12, n),
            OracleReport::new("fuzz min(g_ij, g_ji)", compl, 0.0, n),
            OracleReport::new("fuzz dissipation / |psi|", diss, 1e-10, n),
        ],
        steps: n,
        transforming_steps: transforming,
        yielding_steps: yielding,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        for n in Suite::NAMES {
            assert!(n.parse::<Suite>().is_ok());
        }
        assert!(matches!("bogus".parse::<Suite>(), Err(AppError::Usage(_))));
    }

    #[test]
    fn table_has_fixed_columns() {
        let t = table(&[OracleReport::new("x", 1e-9, 1e-6, 3), OracleReport::new("y", 1.0, 0.5, 1)]);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].ends_with("PASS") && lines[2].ends_with("FAIL"));
        assert_eq!(lines[0].len(), lines[1].len());
    }
}
