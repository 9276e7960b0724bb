//! Free energies of the mixture and their derivatives.
//!
//! The relaxed energy assumes a spatially constant stress inside the material
//! point, which yields the Reuss average of the phase stiffnesses:
//!
//! ```text
//! C_eff     = (sum_i lambda_i C_i^-1)^-1
//! eps_p_eff = sum_i lambda_i eps_p_i
//! Psi_rel   = 1/2 (eps - eps_p_eff) : C_eff : (eps - eps_p_eff)
//!           + 1/2 sum_i lambda_i b_i |eps_p_i|^2 + sum_i lambda_i c_i
//! ```
//!
//! The fraction derivative uses `d C_eff / d lambda_i = -C_eff C_i^-1 C_eff`.

use crate::phase::{MixtureState, PhaseParams};
use crate::tensor::{Stiffness4, SymTensor2};
use crate::{Error, Result};

/// Reuss stiffness and fraction-weighted plastic strain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveElasticity {
    pub stiffness: Stiffness4,
    pub plastic_strain: SymTensor2,
}

/// `1/2 (eps - eps_p) : C : (eps - eps_p) + b/2 |eps_p|^2 + c`.
pub fn phase_energy(eps: &SymTensor2, eps_p: &SymTensor2, params: &PhaseParams) -> f64 {
    let e = *eps - *eps_p;
    0.5 * params.stiffness().quadratic(&e)
        + 0.5 * params.hardening() * eps_p.ddot(eps_p)
        + params.chemical_energy()
}

pub fn effective_elasticity(
    state: &MixtureState,
    params: &[PhaseParams],
) -> Result<EffectiveElasticity> {
    if params.len() != state.k() {
        return Err(Error::InvalidState(alloc::format!(
            "{} phase parameter sets for {} phases",
            params.len(),
            state.k()
        )));
    }
    let dim = state.dim();
    let mut compliance = Stiffness4::zero(dim);
    let mut plastic = SymTensor2::zero(dim);
    for (i, p) in params.iter().enumerate() {
        let l = state.fraction(i);
        if l > 0.0 {
            compliance.add_scaled(p.compliance(), l);
            plastic += *state.plastic(i) * l;
        }
    }
    let stiffness = compliance.inverse()?;
    Ok(EffectiveElasticity {
        stiffness,
        plastic_strain: plastic,
    })
}

/// Everything derived from one `(eps, state)` pair: effective tensors, stress
/// and the driving forces. Build once per evaluation point and query.
#[derive(Debug, Clone)]
pub struct MixtureResponse<'a> {
    eps: SymTensor2,
    state: &'a MixtureState,
    params: &'a [PhaseParams],
    effective: EffectiveElasticity,
    stress: SymTensor2,
}

impl<'a> MixtureResponse<'a> {
    pub fn new(eps: &SymTensor2, state: &'a MixtureState, params: &'a [PhaseParams]) -> Result<Self> {
        if eps.dim() != state.dim() {
            return Err(Error::DimensionMismatch {
                left: eps.dim(),
                right: state.dim(),
            });
        }
        let effective = effective_elasticity(state, params)?;
        let stress = effective
            .stiffness
            .apply(&(*eps - effective.plastic_strain));
        Ok(MixtureResponse {
            eps: *eps,
            state,
            params,
            effective,
            stress,
        })
    }

    pub fn effective(&self) -> &EffectiveElasticity {
        &self.effective
    }

    pub fn state(&self) -> &MixtureState {
        self.state
    }

    pub fn params(&self) -> &[PhaseParams] {
        self.params
    }

    pub fn strain(&self) -> &SymTensor2 {
        &self.eps
    }

    /// `C_eff : (eps - eps_p_eff)`.
    pub fn stress(&self) -> SymTensor2 {
        self.stress
    }

    pub fn relaxed_energy(&self) -> f64 {
        let a = self.eps - self.effective.plastic_strain;
        let mut psi = 0.5 * a.ddot(&self.stress);
        for (i, p) in self.params.iter().enumerate() {
            let l = self.state.fraction(i);
            if l > 0.0 {
                let ep = self.state.plastic(i);
                psi += l * (0.5 * p.hardening() * ep.ddot(ep) + p.chemical_energy());
            }
        }
        psi
    }

    /// `d Psi_rel / d lambda_i` with the phase's own plastic strain.
    pub fn driving_force_fraction(&self, i: usize) -> f64 {
        self.driving_force_fraction_with(i, self.state.plastic(i))
    }

    /// `d Psi_rel / d lambda_i` as if phase `i` carried `eps_p_i`; used for
    /// dormant phases whose plastic strain is still a candidate.
    ///
    /// `-1/2 a:(C_eff C_i^-1 C_eff):a - sigma:eps_p_i + b_i/2 |eps_p_i|^2 + c_i`
    /// with `a = eps - eps_p_eff`, evaluated as `sigma : C_i^-1 : sigma`.
    pub fn driving_force_fraction_with(&self, i: usize, eps_p_i: &SymTensor2) -> f64 {
        let p = &self.params[i];
        -0.5 * p.compliance().quadratic(&self.stress) - self.stress.ddot(eps_p_i)
            + 0.5 * p.hardening() * eps_p_i.ddot(eps_p_i)
            + p.chemical_energy()
    }

    /// `d Psi_rel / d eps_p_i = lambda_i (b_i eps_p_i - sigma)`, deviatoric part.
    pub fn driving_force_plastic(&self, i: usize) -> SymTensor2 {
        let l = self.state.fraction(i);
        if l == 0.0 {
            return SymTensor2::zero(self.eps.dim());
        }
        let p = &self.params[i];
        ((*self.state.plastic(i) * p.hardening() - self.stress) * l).deviator()
    }

    /// `C_eff : (dev(eps) - eps_p_eff)`, the deviatoric stress seen by every
    /// phase.
    pub fn deviatoric_stress(&self) -> SymTensor2 {
        self.effective
            .stiffness
            .apply(&(self.eps.deviator() - self.effective.plastic_strain))
    }
}

pub fn relaxed_energy(eps: &SymTensor2, state: &MixtureState, params: &[PhaseParams]) -> Result<f64> {
    Ok(MixtureResponse::new(eps, state, params)?.relaxed_energy())
}

pub fn stress(eps: &SymTensor2, state: &MixtureState, params: &[PhaseParams]) -> Result<SymTensor2> {
    Ok(MixtureResponse::new(eps, state, params)?.stress())
}

pub fn driving_force_fraction(
    eps: &SymTensor2,
    state: &MixtureState,
    params: &[PhaseParams],
    i: usize,
) -> Result<f64> {
    Ok(MixtureResponse::new(eps, state, params)?.driving_force_fraction(i))
}

pub fn driving_force_plastic(
    eps: &SymTensor2,
    state: &MixtureState,
    params: &[PhaseParams],
    i: usize,
) -> Result<SymTensor2> {
    Ok(MixtureResponse::new(eps, state, params)?.driving_force_plastic(i))
}

/// `Psi_tot = sum_i lambda_i Psi_i(eps_i)` for explicit per-phase strains.
pub fn total_energy(
    phase_strains: &[SymTensor2],
    state: &MixtureState,
    params: &[PhaseParams],
) -> f64 {
    params
        .iter()
        .enumerate()
        .map(|(i, p)| state.fraction(i) * phase_energy(&phase_strains[i], state.plastic(i), p))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Dim;
    use alloc::vec;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn p1(c: f64, chem: f64, r: f64, b: f64) -> PhaseParams {
        PhaseParams::isotropic(c, 0.0, Dim::One, chem, r, b).unwrap()
    }

    #[test]
    fn phase_energy_examples() {
        let p = p1(2.0, 0.5, 0.1, 1.0);
        let z = SymTensor2::scalar(0.0);
        assert_eq!(phase_energy(&z, &z, &p1(2.0, 0.0, 0.1, 1.0)), 0.0);
        let e = SymTensor2::scalar(0.3);
        let ep = SymTensor2::scalar(0.1);
        assert!((phase_energy(&e, &ep, &p) - 0.545).abs() < 1e-15);
        assert!((phase_energy(&ep, &ep, &p) - (0.5 * 0.01 + 0.5)).abs() < 1e-15);
    }

    #[test]
    fn effective_elasticity_examples() {
        let params = vec![p1(2.0, 0.0, 0.1, 1.0), p1(6.0, 0.0, 0.1, 1.0)];
        let s = MixtureState::with_fractions(Dim::One, vec![0.5, 0.5]).unwrap();
        let eff = effective_elasticity(&s, &params).unwrap();
        assert!((eff.stiffness.matrix()[0][0] - 3.0).abs() < 1e-14);

        let single = vec![PhaseParams::isotropic(7.0, 0.25, Dim::Three, 0.0, 1.0, 1.0).unwrap()];
        let ep = SymTensor2::new(0.1, -0.05, -0.05, 0.01, 0.0, 0.02);
        let s = MixtureState::new(vec![1.0], vec![ep]).unwrap();
        let eff = effective_elasticity(&s, &single).unwrap();
        let c = single[0].stiffness();
        for i in 0..6 {
            for j in 0..6 {
                assert!((eff.stiffness.matrix()[i][j] - c.matrix()[i][j]).abs() < 1e-12);
            }
        }
        assert_eq!(eff.plastic_strain, ep);
    }

    #[test]
    fn vertex_fraction_reduces_to_present_phase() {
        let params = vec![
            PhaseParams::isotropic(3.0, 0.2, Dim::Two, 0.0, 1.0, 1.0).unwrap(),
            PhaseParams::isotropic(9.0, 0.3, Dim::Two, 0.0, 1.0, 1.0).unwrap(),
        ];
        let s = MixtureState::pure(Dim::Two, 2, 1);
        let eff = effective_elasticity(&s, &params).unwrap();
        let c = params[1].stiffness();
        for i in 0..6 {
            for j in 0..6 {
                assert!((eff.stiffness.matrix()[i][j] - c.matrix()[i][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn stress_examples() {
        let params = vec![p1(2.0, 0.0, 0.1, 1.0)];
        let s = MixtureState::new(vec![1.0], vec![SymTensor2::scalar(0.1)]).unwrap();
        let sig = stress(&SymTensor2::scalar(0.3), &s, &params).unwrap();
        assert!((sig.get(0) - 0.4).abs() < 1e-15);
        let zero = stress(&SymTensor2::scalar(0.1), &s, &params).unwrap();
        assert_eq!(zero.get(0), 0.0);
    }

    #[test]
    fn single_phase_relaxed_energy_is_phase_energy() {
        let p = PhaseParams::isotropic(5.0, 0.3, Dim::Three, 0.7, 1.0, 2.0).unwrap();
        let ep = SymTensor2::new(0.02, -0.01, -0.01, 0.0, 0.005, 0.0);
        let e = SymTensor2::new(0.03, 0.01, -0.02, 0.004, 0.0, -0.01);
        let s = MixtureState::new(vec![1.0], vec![ep]).unwrap();
        let psi = relaxed_energy(&e, &s, core::slice::from_ref(&p)).unwrap();
        assert!((psi - phase_energy(&e, &ep, &p)).abs() < 1e-14);
    }

    #[test]
    fn driving_force_examples() {
        let params = vec![
            PhaseParams::isotropic(4.0, 0.3, Dim::Three, 1.5, 0.1, 0.5).unwrap(),
            PhaseParams::isotropic(4.0, 0.3, Dim::Three, 1.5, 0.1, 0.5).unwrap(),
        ];
        let ep = SymTensor2::new(0.02, -0.01, -0.01, 0.0, 0.0, 0.003);
        let s = MixtureState::new(vec![0.3, 0.7], vec![ep, ep]).unwrap();
        let e = SymTensor2::new(0.05, 0.0, -0.01, 0.0, 0.01, 0.0);
        let r = MixtureResponse::new(&e, &s, &params).unwrap();
        assert!((r.driving_force_fraction(0) - r.driving_force_fraction(1)).abs() < 1e-15);

        let zero = MixtureState::with_fractions(Dim::Three, vec![0.3, 0.7]).unwrap();
        let z = SymTensor2::zero(Dim::Three);
        let r = MixtureResponse::new(&z, &zero, &params).unwrap();
        assert_eq!(r.driving_force_fraction(0), 1.5);
    }

    #[test]
    fn driving_force_plastic_examples() {
        let params = vec![p1(1.0, 0.0, 0.1, 2.0), p1(1.0, 0.0, 0.1, 2.0)];
        let s = MixtureState::new(
            vec![0.5, 0.5],
            vec![SymTensor2::scalar(0.1), SymTensor2::scalar(-0.1)],
        )
        .unwrap();
        let r = MixtureResponse::new(&SymTensor2::scalar(0.0), &s, &params).unwrap();
        assert_eq!(r.stress().get(0), 0.0);
        assert!((r.driving_force_plastic(0).norm() - 0.1).abs() < 1e-15);

        let dormant = MixtureState::new(
            vec![0.0, 1.0],
            vec![SymTensor2::scalar(0.3), SymTensor2::scalar(0.0)],
        )
        .unwrap();
        let r = MixtureResponse::new(&SymTensor2::scalar(0.2), &dormant, &params).unwrap();
        assert_eq!(r.driving_force_plastic(0), SymTensor2::scalar(0.0));
    }

    fn arb_dev3() -> impl Strategy<Value = SymTensor2> {
        prop::array::uniform6(-0.05f64..0.05)
            .prop_map(|c| SymTensor2::new(c[0], c[1], c[2], c[3], c[4], c[5]).deviator())
    }

    fn arb_mixture() -> impl Strategy<Value = (Vec<PhaseParams>, MixtureState)> {
        (
            prop::collection::vec((1.0f64..100.0, 0.0f64..0.45), 3),
            prop::collection::vec(0.01f64..1.0, 3),
            prop::collection::vec(arb_dev3(), 3),
        )
            .prop_map(|(moduli, raw, plastic)| {
                let params = moduli
                    .iter()
                    .map(|&(e, nu)| PhaseParams::isotropic(e, nu, Dim::Three, 0.0, 0.1, 1.0).unwrap())
                    .collect();
                let s: f64 = raw.iter().sum();
                let mut l: Vec<f64> = raw.iter().map(|v| v / s).collect();
                l[2] = 1.0 - l[0] - l[1];
                (params, MixtureState::new(l, plastic).unwrap())
            })
    }

    proptest! {
        #[test]
        fn reuss_below_voigt((params, state) in arb_mixture(), e in arb_dev3(), vol in -0.05f64..0.05) {
            let e = e + SymTensor2::identity(Dim::Three) * vol;
            let eff = effective_elasticity(&state, &params).unwrap();
            let voigt: f64 = params
                .iter()
                .enumerate()
                .map(|(i, p)| state.fraction(i) * p.stiffness().quadratic(&e))
                .sum();
            prop_assert!(eff.stiffness.quadratic(&e) <= voigt * (1.0 + 1e-12));
        }

        #[test]
        fn relaxation_never_exceeds_uniform_strain((params, state) in arb_mixture(), e in arb_dev3()) {
            let psi = relaxed_energy(&e, &state, &params).unwrap();
            let uniform = vec![e; 3];
            prop_assert!(psi <= total_energy(&uniform, &state, &params) + 1e-14);
        }

        #[test]
        fn energy_parts_nonnegative((params, state) in arb_mixture(), e in arb_dev3()) {
            let r = MixtureResponse::new(&e, &state, &params).unwrap();
            let chem: f64 = (0..3).map(|i| state.fraction(i) * params[i].chemical_energy()).sum();
            prop_assert!(r.relaxed_energy() - chem >= 0.0);
            prop_assert!(r.relaxed_energy().is_finite());
        }
    }
}
