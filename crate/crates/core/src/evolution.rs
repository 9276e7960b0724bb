//! Yield functions, viscous evolution rates, phase initiation and the
//! incremental update of one material point.
//!
//! With viscous regularization the stationarity conditions of the
//! dissipation Lagrangian solve explicitly:
//!
//! ```text
//! phi_i   = | C_eff:(dev eps - eps_p_eff) - b_i eps_p_i | - r_i
//! phi_ij  = dPsi/dlambda_i - dPsi/dlambda_j - r_ij |eps_p_j - eps_p_i|
//! deps_p_i/dt = eta1 (phi_i)_+ sign(C_eff:(dev eps - eps_p_eff) - b_i eps_p_i)
//! g_ij        = eta2 (phi_ij)_+
//! ```
//!
//! [`step`] integrates these with forward Euler in a fixed order: transition
//! rates (initiating dormant phases where needed), fractions, effective
//! tensors, plastic strains, stress.

use alloc::vec;
use alloc::vec::Vec;

use crate::energy::MixtureResponse;
use crate::phase::{advance_fractions, MixtureState, PhaseParams, TransitionMatrix, TransitionParams};
use crate::tensor::{Dim, SymTensor2};
use crate::{Error, Result};

/// Direction of the plastic flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FlowDirection {
    /// `sign(C_eff:(dev eps - eps_p_eff) - b_i eps_p_i)`, the direction the
    /// differential inclusion prescribes.
    #[default]
    FullDrivingForce,
    /// `sign(C_eff:(dev eps - eps_p_eff))`, backstress left out of the
    /// direction but kept in the magnitude.
    StressOnly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelOptions {
    pub flow_direction: FlowDirection,
    /// Norm below which `sign` returns zero (Pa).
    pub sign_tolerance: f64,
    /// Stationarity residual accepted by the initiation argmax (Pa).
    pub initiation_tolerance: f64,
    /// Keep birth strains within [`initiation_radius`] of the feeding phase.
    /// Without the bound a dormant phase with small `b_j` is born with a
    /// plastic strain of order `|sigma| / b_j`.
    pub bounded_initiation: bool,
}

impl ModelOptions {
    /// Tolerances scaled to a reference stress.
    pub fn for_stress_scale(stress_scale: f64) -> Self {
        ModelOptions {
            flow_direction: FlowDirection::FullDrivingForce,
            sign_tolerance: 1e-12 * stress_scale,
            initiation_tolerance: 1e-10 * stress_scale,
            bounded_initiation: true,
        }
    }
}

impl Default for ModelOptions {
    fn default() -> Self {
        Self::for_stress_scale(1.0)
    }
}

/// Phase constants, transition coefficients and numerical options.
#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    pub phases: Vec<PhaseParams>,
    pub transitions: TransitionParams,
    pub options: ModelOptions,
}

impl Material {
    pub fn new(
        phases: Vec<PhaseParams>,
        transitions: TransitionParams,
        options: ModelOptions,
    ) -> Result<Self> {
        if phases.is_empty() || transitions.k() != phases.len() {
            return Err(Error::InvalidState(alloc::format!(
                "{} phases but a {0}x{0} transition matrix was expected, got k = {1}",
                phases.len(),
                transitions.k()
            )));
        }
        let dim = phases[0].dim();
        if let Some(p) = phases.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: p.dim(),
            });
        }
        Ok(Material {
            phases,
            transitions,
            options,
        })
    }

    pub fn k(&self) -> usize {
        self.phases.len()
    }

    pub fn dim(&self) -> Dim {
        self.phases[0].dim()
    }
}

/// Viscosities and time step of the regularized update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizationParams {
    /// Plastic viscosity, 1/(Pa s).
    pub eta1: f64,
    /// Transition viscosity, 1/(Pa s).
    pub eta2: f64,
    /// Time step, s.
    pub dt: f64,
}

impl RegularizationParams {
    pub fn new(eta1: f64, eta2: f64, dt: f64) -> Result<Self> {
        for (name, v) in [("eta1", eta1), ("eta2", eta2), ("dt", dt)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter { name, value: v });
            }
        }
        Ok(RegularizationParams { eta1, eta2, dt })
    }

    pub fn with_dt(&self, dt: f64) -> Self {
        RegularizationParams { dt, ..*self }
    }
}

/// What happened during one [`step`].
#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub stress: SymTensor2,
    /// Phases with `phi_i > 0`.
    pub active_yield: Vec<usize>,
    /// Pairs `(i, j)` with `g_ij > 0`.
    pub active_transitions: Vec<(usize, usize)>,
    pub transition_rates: TransitionMatrix,
    /// `Psi_rel(eps_{n+1}, z_n) - Psi_rel(eps_{n+1}, z_{n+1})`, which equals
    /// `sigma_mid : d_eps - d_Psi_rel` with the midpoint stress of the frozen
    /// internal state.
    pub dissipation_increment: f64,
    pub initiated_phases: Vec<usize>,
    /// `Psi_rel` at the end of the step.
    pub relaxed_energy: f64,
}

impl StepReport {
    pub fn is_elastic(&self) -> bool {
        self.active_yield.is_empty() && self.active_transitions.is_empty()
    }
}

/// `r |end - start|`: cost of an instantaneous plastic-strain jump.
pub fn dissipation_distance(eps_p_start: &SymTensor2, eps_p_end: &SymTensor2, r: f64) -> f64 {
    r * (*eps_p_end - *eps_p_start).norm()
}

/// Argument of the plastic yield function of phase `i`.
fn plastic_driving(resp: &MixtureResponse<'_>, i: usize, eps_p_i: &SymTensor2) -> SymTensor2 {
    resp.deviatoric_stress() - *eps_p_i * resp.params()[i].hardening()
}

fn transition_yield_with(
    resp: &MixtureResponse<'_>,
    trans: &TransitionParams,
    i: usize,
    j: usize,
    force_i: f64,
    eps_p_j: &SymTensor2,
) -> f64 {
    let eps_p_i = resp.state().plastic(i);
    force_i
        - resp.driving_force_fraction_with(j, eps_p_j)
        - dissipation_distance(eps_p_i, eps_p_j, trans.get(i, j))
}

pub fn yield_plastic(
    eps: &SymTensor2,
    state: &MixtureState,
    params: &[PhaseParams],
    i: usize,
) -> Result<f64> {
    let resp = MixtureResponse::new(eps, state, params)?;
    Ok(plastic_driving(&resp, i, state.plastic(i)).norm() - params[i].yield_stress())
}

/// `phi_ij` with the plastic strains currently stored in `state`.
pub fn yield_transition(
    eps: &SymTensor2,
    state: &MixtureState,
    params: &[PhaseParams],
    trans: &TransitionParams,
    i: usize,
    j: usize,
) -> Result<f64> {
    if i == j {
        return Err(Error::InvalidState("transition yield needs i != j".into()));
    }
    let resp = MixtureResponse::new(eps, state, params)?;
    let fi = resp.driving_force_fraction(i);
    Ok(transition_yield_with(&resp, trans, i, j, fi, state.plastic(j)))
}

fn rate_direction(
    resp: &MixtureResponse<'_>,
    driving: &SymTensor2,
    options: &ModelOptions,
) -> SymTensor2 {
    match options.flow_direction {
        FlowDirection::FullDrivingForce => driving.sign(options.sign_tolerance),
        FlowDirection::StressOnly => resp.deviatoric_stress().sign(options.sign_tolerance),
    }
}

pub fn plastic_rate(
    eps: &SymTensor2,
    state: &MixtureState,
    material: &Material,
    reg: &RegularizationParams,
    i: usize,
) -> Result<SymTensor2> {
    let resp = MixtureResponse::new(eps, state, &material.phases)?;
    let xi = plastic_driving(&resp, i, state.plastic(i));
    let over = xi.norm() - material.phases[i].yield_stress();
    if over <= 0.0 {
        return Ok(SymTensor2::zero(eps.dim()));
    }
    Ok((rate_direction(&resp, &xi, &material.options) * (reg.eta1 * over)).deviator())
}

/// `g_ij = eta2 (phi_ij)_+`; zero when phase `i` is empty.
pub fn transition_rate(
    eps: &SymTensor2,
    state: &MixtureState,
    params: &[PhaseParams],
    trans: &TransitionParams,
    reg: &RegularizationParams,
    i: usize,
    j: usize,
) -> Result<f64> {
    if !state.is_active(i) {
        return Ok(0.0);
    }
    let phi = yield_transition(eps, state, params, trans, i, j)?;
    Ok(reg.eta2 * phi.max(0.0))
}

/// Plastic strain a dormant phase `j` is born with when fed from phase `i`:
/// the deviatoric maximizer of `phi_ij` over `eps_p_j`.
pub fn initiation_strain(
    eps: &SymTensor2,
    state: &MixtureState,
    params: &[PhaseParams],
    trans: &TransitionParams,
    options: &ModelOptions,
    i: usize,
    j: usize,
) -> Result<SymTensor2> {
    if i == j || state.is_active(j) || !state.is_active(i) {
        return Err(Error::InvalidState(alloc::format!(
            "initiation needs a dormant target and an active source (lambda_{} = {}, lambda_{} = {})",
            i + 1,
            state.fraction(i),
            j + 1,
            state.fraction(j)
        )));
    }
    let resp = MixtureResponse::new(eps, state, params)?;
    let radius = options.bounded_initiation.then(|| initiation_radius(&resp, i));
    initiation_from(&resp, trans, options, i, j, radius)
}

/// Largest distance between the birth strain of a phase fed by `i` and
/// `eps_p_i`: the deviatoric elastic strain `|dev(S_i : sigma)|` of phase `i`.
pub fn initiation_radius(resp: &MixtureResponse<'_>, i: usize) -> f64 {
    resp.params()[i]
        .compliance()
        .apply(&resp.stress())
        .deviator()
        .norm()
}

/// With `lambda_j = 0` the stress does not depend on `eps_p_j`. Writing
/// `x = eps_p_i + d`, `phi_ij = const + g:d - b_j/2 |d|^2 - r_ij |d|` with
/// `g = dev sigma - b_j eps_p_i`, so the maximizer points along `g` with
/// length `(|g| - r_ij)_+ / b_j`, clipped to the radius when one is given.
/// The stationarity residual of the result is checked before returning.
fn initiation_from(
    resp: &MixtureResponse<'_>,
    trans: &TransitionParams,
    options: &ModelOptions,
    i: usize,
    j: usize,
    radius: Option<f64>,
) -> Result<SymTensor2> {
    let b = resp.params()[j].hardening();
    if !(b > 0.0) {
        return Err(Error::InvalidParameter { name: "b", value: b });
    }
    let r = trans.get(i, j);
    let source = *resp.state().plastic(i);
    let g = resp.stress().deviator() - source * b;
    let gn = g.norm();
    let mut t = ((gn - r) / b).max(0.0);
    let mut clipped = false;
    if let Some(rho) = radius {
        if t > rho {
            t = rho;
            clipped = true;
        }
    }
    if t == 0.0 || gn == 0.0 {
        // zero is optimal iff |g| <= r, or the ball is a point
        let res = if clipped { 0.0 } else { (gn - r).max(0.0) };
        return check_initiation(source, res, options);
    }
    let u = g * (1.0 / gn);
    let x = source + u * t;
    // KKT: g - b d - r u = mu u, mu >= 0 and mu = 0 unless clipped
    let rest = g - u * (b * t) - u * r;
    let mu = rest.ddot(&u);
    let tangential = (rest - u * mu).norm();
    let res = if clipped {
        tangential + (-mu).max(0.0)
    } else {
        tangential + mu.abs()
    };
    check_initiation(x, res, options)
}

fn check_initiation(x: SymTensor2, residual: f64, options: &ModelOptions) -> Result<SymTensor2> {
    if residual <= options.initiation_tolerance {
        Ok(x.deviator())
    } else {
        Err(Error::InitiationNotConverged {
            best: x,
            gradient_norm: residual,
        })
    }
}

/// One increment of the material point to the prescribed strain `eps_next`.
pub fn step(
    eps_next: &SymTensor2,
    state: &MixtureState,
    material: &Material,
    reg: &RegularizationParams,
) -> Result<(MixtureState, StepReport)> {
    let k = state.k();
    let params = &material.phases[..];
    let trans = &material.transitions;
    let options = &material.options;

    let resp = MixtureResponse::new(eps_next, state, params)?;
    let psi_frozen = resp.relaxed_energy();
    let forces: Vec<f64> = (0..k).map(|i| resp.driving_force_fraction(i)).collect();
    let active: Vec<usize> = (0..k).filter(|&i| state.is_active(i)).collect();

    // Dormant targets: the source with the largest phi_ij fixes the birth strain.
    let mut plastic: Vec<SymTensor2> = state.plastic_strains().to_vec();
    let mut initiated = Vec::new();
    for j in (0..k).filter(|&j| !state.is_active(j)) {
        let mut best: Option<(f64, SymTensor2)> = None;
        for &i in &active {
            let radius = options.bounded_initiation.then(|| initiation_radius(&resp, i));
            let x = initiation_from(&resp, trans, options, i, j, radius)?;
            let phi = transition_yield_with(&resp, trans, i, j, forces[i], &x);
            if phi > 0.0 && best.as_ref().map_or(true, |(b, _)| phi > *b) {
                best = Some((phi, x));
            }
        }
        if let Some((_, x)) = best {
            plastic[j] = x;
            initiated.push(j);
        }
    }

    let mut g = TransitionMatrix::zeros(k);
    let mut active_transitions = Vec::new();
    for &i in &active {
        for j in 0..k {
            if j == i || (!state.is_active(j) && !initiated.contains(&j)) {
                continue;
            }
            let phi = if state.is_active(j) {
                forces[i] - forces[j] - dissipation_distance(&plastic[i], &plastic[j], trans.get(i, j))
            } else {
                transition_yield_with(&resp, trans, i, j, forces[i], &plastic[j])
            };
            if phi > 0.0 {
                g.set(i, j, reg.eta2 * phi);
                active_transitions.push((i, j));
            }
        }
    }

    let transformed = if g.is_zero() {
        MixtureState::from_parts(state.fractions().to_vec(), plastic)
    } else {
        advance_fractions(
            &MixtureState::from_parts(state.fractions().to_vec(), plastic),
            &g,
            reg.dt,
        )
    };

    let resp = MixtureResponse::new(eps_next, &transformed, params)?;
    let mut plastic = transformed.plastic_strains().to_vec();
    let mut active_yield = Vec::new();
    for i in (0..k).filter(|&i| transformed.is_active(i)) {
        let eps_p = transformed.plastic(i);
        let xi = plastic_driving(&resp, i, eps_p);
        let over = xi.norm() - params[i].yield_stress();
        if over > 0.0 {
            let dir = rate_direction(&resp, &xi, options);
            plastic[i] = (*eps_p + dir * (reg.eta1 * over * reg.dt)).deviator();
            active_yield.push(i);
        }
    }

    if active_yield.is_empty() && active_transitions.is_empty() {
        let resp = MixtureResponse::new(eps_next, state, params)?;
        let report = StepReport {
            stress: resp.stress(),
            active_yield,
            active_transitions,
            transition_rates: g,
            dissipation_increment: 0.0,
            initiated_phases: vec![],
            relaxed_energy: psi_frozen,
        };
        return Ok((state.clone(), report));
    }

    let next = MixtureState::from_parts(transformed.fractions().to_vec(), plastic);
    debug_assert!(next.validate().is_ok(), "{:?}", next.validate());
    let resp = MixtureResponse::new(eps_next, &next, params)?;
    let psi = resp.relaxed_energy();
    let report = StepReport {
        stress: resp.stress(),
        active_yield,
        active_transitions,
        transition_rates: g,
        dissipation_increment: psi_frozen - psi,
        initiated_phases: initiated,
        relaxed_energy: psi,
    };
    Ok((next, report))
}
