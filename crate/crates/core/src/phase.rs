//! Phase parameters, the discrete mixture state and the transition matrix.
//!
//! A [`MixtureState`] is a discrete Young measure: volume fractions
//! `lambda_i` on the simplex together with one traceless plastic strain per
//! phase. Phases with `lambda_i = 0` are dormant; they keep a placeholder
//! plastic strain that carries no energy.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::tensor::{Dim, Stiffness4, SymTensor2};
use crate::{Error, Result};

/// Tolerance on `sum(lambda) = 1` and on plastic traces.
pub const CONSERVATION_TOL: f64 = 1e-12;

/// Material constants of a single phase.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseParams {
    stiffness: Stiffness4,
    compliance: Stiffness4,
    chemical_energy: f64,
    yield_stress: f64,
    hardening: f64,
}

impl PhaseParams {
    /// `stiffness` is `C_i`, `chemical_energy` the offset `c_i`,
    /// `yield_stress` the dissipation coefficient `r_i` and `hardening` the
    /// kinematic hardening modulus `b_i` (all in Pa).
    pub fn new(
        stiffness: Stiffness4,
        chemical_energy: f64,
        yield_stress: f64,
        hardening: f64,
    ) -> Result<Self> {
        if !chemical_energy.is_finite() {
            return Err(Error::InvalidParameter {
                name: "c",
                value: chemical_energy,
            });
        }
        if !(yield_stress > 0.0) || !yield_stress.is_finite() {
            return Err(Error::InvalidParameter {
                name: "r",
                value: yield_stress,
            });
        }
        if !(hardening > 0.0) || !hardening.is_finite() {
            return Err(Error::InvalidParameter {
                name: "b",
                value: hardening,
            });
        }
        let params = Self::new_unvalidated(stiffness, chemical_energy, yield_stress, hardening)?;
        // positive definiteness on the unit tensors of the active slots
        let dim = stiffness.dim();
        for &k in dim.active_slots() {
            let mut c = [0.0; 6];
            c[k] = 1.0;
            let e = SymTensor2::from_components(dim, c)?;
            if !(stiffness.quadratic(&e) > 0.0) {
                return Err(Error::InvalidState(format!(
                    "stiffness is not positive definite (slot {k})"
                )));
            }
        }
        Ok(params)
    }

    /// Skips the sign checks on `r` and `b`. Only the reference oracles use
    /// this, for degenerate limits such as `b = 0`.
    pub fn new_unvalidated(
        stiffness: Stiffness4,
        chemical_energy: f64,
        yield_stress: f64,
        hardening: f64,
    ) -> Result<Self> {
        let compliance = stiffness.inverse()?;
        Ok(PhaseParams {
            stiffness,
            compliance,
            chemical_energy,
            yield_stress,
            hardening,
        })
    }

    /// Isotropic phase from Young's modulus and Poisson's ratio.
    pub fn isotropic(
        e: f64,
        nu: f64,
        dim: Dim,
        chemical_energy: f64,
        yield_stress: f64,
        hardening: f64,
    ) -> Result<Self> {
        Self::new(
            Stiffness4::isotropic(e, nu, dim)?,
            chemical_energy,
            yield_stress,
            hardening,
        )
    }

    #[inline]
    pub fn stiffness(&self) -> &Stiffness4 {
        &self.stiffness
    }

    #[inline]
    pub fn compliance(&self) -> &Stiffness4 {
        &self.compliance
    }

    #[inline]
    pub fn chemical_energy(&self) -> f64 {
        self.chemical_energy
    }

    #[inline]
    pub fn yield_stress(&self) -> f64 {
        self.yield_stress
    }

    #[inline]
    pub fn hardening(&self) -> f64 {
        self.hardening
    }

    pub fn dim(&self) -> Dim {
        self.stiffness.dim()
    }
}

/// Dissipation coefficients `r_ij` of the transitions `i -> j`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionParams {
    k: usize,
    r: Vec<f64>,
}

impl TransitionParams {
    /// Full `k x k` matrix, row = source phase. The diagonal is ignored.
    pub fn new(matrix: &[Vec<f64>]) -> Result<Self> {
        let k = matrix.len();
        let mut r = vec![0.0; k * k];
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidState(format!(
                    "transition row {i} has {} entries, expected {k}",
                    row.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                if i == j {
                    continue;
                }
                if !(*v >= 0.0) || !v.is_finite() {
                    return Err(Error::InvalidParameter {
                        name: "r_trans",
                        value: *v,
                    });
                }
                r[i * k + j] = *v;
            }
        }
        Ok(TransitionParams { k, r })
    }

    /// `r_ij := r_i`, the coefficient of the source phase.
    pub fn source_indexed(r_source: &[f64]) -> Result<Self> {
        let k = r_source.len();
        let rows: Vec<Vec<f64>> = (0..k)
            .map(|i| (0..k).map(|j| if i == j { 0.0 } else { r_source[i] }).collect())
            .collect();
        Self::new(&rows)
    }

    /// Every off-diagonal entry equal to `r`.
    pub fn uniform(k: usize, r: f64) -> Result<Self> {
        Self::source_indexed(&vec![r; k])
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.r[i * self.k + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.k)
            .map(|i| self.r[i * self.k..(i + 1) * self.k].to_vec())
            .collect()
    }
}

/// Volume fractions and per-phase plastic strains at one material point.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureState {
    fractions: Vec<f64>,
    plastic: Vec<SymTensor2>,
}

impl MixtureState {
    pub fn new(fractions: Vec<f64>, plastic: Vec<SymTensor2>) -> Result<Self> {
        let state = MixtureState { fractions, plastic };
        state.validate()?;
        Ok(state)
    }

    /// All plastic strains zero.
    pub fn with_fractions(dim: Dim, fractions: Vec<f64>) -> Result<Self> {
        let plastic = vec![SymTensor2::zero(dim); fractions.len()];
        Self::new(fractions, plastic)
    }

    /// Single phase `index` of `k` occupies the whole point.
    pub fn pure(dim: Dim, k: usize, index: usize) -> Self {
        let mut fractions = vec![0.0; k];
        fractions[index] = 1.0;
        MixtureState {
            fractions,
            plastic: vec![SymTensor2::zero(dim); k],
        }
    }

    pub(crate) fn from_parts(fractions: Vec<f64>, plastic: Vec<SymTensor2>) -> Self {
        debug_assert_eq!(fractions.len(), plastic.len());
        MixtureState { fractions, plastic }
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.fractions.len();
        if k == 0 || self.plastic.len() != k {
            return Err(Error::InvalidState(format!(
                "{k} fractions but {} plastic strains",
                self.plastic.len()
            )));
        }
        let dim = self.plastic[0].dim();
        let mut sum = 0.0;
        for (i, &l) in self.fractions.iter().enumerate() {
            if !(0.0..=1.0).contains(&l) {
                return Err(Error::InvalidState(format!("lambda_{} = {l} outside [0, 1]", i + 1)));
            }
            sum += l;
        }
        if (sum - 1.0).abs() > CONSERVATION_TOL {
            return Err(Error::InvalidState(format!("fractions sum to {sum}, not 1")));
        }
        for (i, p) in self.plastic.iter().enumerate() {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: p.dim(),
                });
            }
            if !p.is_finite() {
                return Err(Error::InvalidState(format!("plastic strain {} not finite", i + 1)));
            }
            if p.trace().abs() > CONSERVATION_TOL * p.norm().max(1.0) {
                return Err(Error::InvalidState(format!(
                    "plastic strain {} has trace {}",
                    i + 1,
                    p.trace()
                )));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.fractions.len()
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.plastic[0].dim()
    }

    #[inline]
    pub fn fractions(&self) -> &[f64] {
        &self.fractions
    }

    #[inline]
    pub fn fraction(&self, i: usize) -> f64 {
        self.fractions[i]
    }

    #[inline]
    pub fn plastic_strains(&self) -> &[SymTensor2] {
        &self.plastic
    }

    #[inline]
    pub fn plastic(&self, i: usize) -> &SymTensor2 {
        &self.plastic[i]
    }

    #[inline]
    pub fn is_active(&self, i: usize) -> bool {
        self.fractions[i] > 0.0
    }

    /// Replaces the plastic strain of phase `i`, projected onto deviators.
    pub fn set_plastic(&mut self, i: usize, eps_p: SymTensor2) {
        assert_eq!(eps_p.dim(), self.dim());
        self.plastic[i] = eps_p.deviator();
    }
}

/// Transition rates `g_ij` (1/s), row = source phase.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    k: usize,
    g: Vec<f64>,
}

impl TransitionMatrix {
    pub fn zeros(k: usize) -> Self {
        TransitionMatrix {
            k,
            g: vec![0.0; k * k],
        }
    }

    /// Checks `g_ii = 0`, `g_ij >= 0` and `min(g_ij, g_ji) = 0`.
    pub fn new(matrix: &[Vec<f64>]) -> Result<Self> {
        let k = matrix.len();
        let mut g = vec![0.0; k * k];
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidState(format!("transition row {i} has wrong length")));
            }
            for (j, &v) in row.iter().enumerate() {
                if !(v >= 0.0) || !v.is_finite() {
                    return Err(Error::InvalidParameter { name: "g", value: v });
                }
                if i == j && v != 0.0 {
                    return Err(Error::InvalidState(format!("g_{0}{0} must be zero", i + 1)));
                }
                g[i * k + j] = v;
            }
        }
        let m = TransitionMatrix { k, g };
        for i in 0..k {
            for j in i + 1..k {
                if m.get(i, j).min(m.get(j, i)) != 0.0 {
                    return Err(Error::InvalidState(format!(
                        "g_{}{} and g_{}{} are both positive",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.g[i * self.k + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i != j && v >= 0.0);
        self.g[i * self.k + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.g.iter().all(|v| *v == 0.0)
    }

    /// `lambda_dot_i = sum_j (g_ji - g_ij)`.
    pub fn phase_rate(&self, i: usize) -> f64 {
        phase_rate(self, i)
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.k)
            .map(|i| self.g[i * self.k..(i + 1) * self.k].to_vec())
            .collect()
    }
}

pub fn phase_rate(g: &TransitionMatrix, i: usize) -> f64 {
    (0..g.k).map(|j| g.get(j, i) - g.get(i, j)).sum()
}

/// Explicit Euler step of the fractions. Undershoots are clipped to `[0, 1]`
/// and the vector is rescaled to sum to one; plastic strains are untouched.
pub fn advance_fractions(state: &MixtureState, g: &TransitionMatrix, dt: f64) -> MixtureState {
    assert_eq!(state.k(), g.k());
    if g.is_zero() {
        return state.clone();
    }
    let mut lambda: Vec<f64> = (0..state.k())
        .map(|i| (state.fractions[i] + dt * phase_rate(g, i)).clamp(0.0, 1.0))
        .collect();
    let sum: f64 = lambda.iter().sum();
    for l in lambda.iter_mut() {
        *l /= sum;
    }
    MixtureState {
        fractions: lambda,
        plastic: state.plastic.clone(),
    }
}
