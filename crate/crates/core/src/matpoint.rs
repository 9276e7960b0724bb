//! Strain-controlled material-point programs.
//!
//! The strain is `eps(t) = a(t) N` for a unit direction `N`; `a(t)` is either
//! a linear ramp or a triangle wave `0 -> +A -> 0 -> -A -> 0` per cycle.
//! Records report the scalar projections `eps:N` and `sigma:N`.

use alloc::vec::Vec;

use crate::evolution::{step, Material, RegularizationParams, StepReport};
use crate::phase::MixtureState;
use crate::tensor::{Dim, SymTensor2};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoadKind {
    Monotonic,
    Cyclic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadProgram {
    kind: LoadKind,
    amplitude: f64,
    steps_per_cycle: usize,
    n_cycles: usize,
    direction: SymTensor2,
}

/// Volume-preserving uniaxial direction `diag(2, -1, -1)/sqrt(6)`, or the
/// scalar unit in one dimension.
pub fn uniaxial_direction(dim: Dim) -> SymTensor2 {
    match dim {
        Dim::One => SymTensor2::scalar(1.0),
        Dim::Two => {
            let s = 1.0 / libm::sqrt(6.0);
            SymTensor2::plane_with_zz(2.0 * s, -s, -s, 0.0)
        }
        Dim::Three => {
            let s = 1.0 / libm::sqrt(6.0);
            SymTensor2::new(2.0 * s, -s, -s, 0.0, 0.0, 0.0)
        }
    }
}

fn unit(direction: SymTensor2) -> Result<SymTensor2> {
    let n = direction.norm();
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::InvalidParameter {
            name: "direction",
            value: n,
        });
    }
    Ok(direction * (1.0 / n))
}

fn check_amplitude(amplitude: f64) -> Result<()> {
    if amplitude < 0.0 || !amplitude.is_finite() {
        return Err(Error::InvalidParameter {
            name: "amplitude",
            value: amplitude,
        });
    }
    Ok(())
}

impl LoadProgram {
    /// Linear ramp from zero to `amplitude` over `n_steps` steps.
    pub fn monotonic(amplitude: f64, n_steps: usize, direction: SymTensor2) -> Result<Self> {
        check_amplitude(amplitude)?;
        if n_steps == 0 {
            return Err(Error::InvalidParameter {
                name: "n_steps",
                value: 0.0,
            });
        }
        Ok(LoadProgram {
            kind: LoadKind::Monotonic,
            amplitude,
            steps_per_cycle: n_steps,
            n_cycles: 1,
            direction: unit(direction)?,
        })
    }

    /// `steps_per_cycle` must be a positive multiple of four so that the
    /// turning points fall on steps.
    pub fn cyclic(
        amplitude: f64,
        steps_per_cycle: usize,
        n_cycles: usize,
        direction: SymTensor2,
    ) -> Result<Self> {
        check_amplitude(amplitude)?;
        if steps_per_cycle == 0 || steps_per_cycle % 4 != 0 {
            return Err(Error::InvalidParameter {
                name: "steps_per_cycle",
                value: steps_per_cycle as f64,
            });
        }
        if n_cycles == 0 {
            return Err(Error::InvalidParameter {
                name: "n_cycles",
                value: 0.0,
            });
        }
        Ok(LoadProgram {
            kind: LoadKind::Cyclic,
            amplitude,
            steps_per_cycle,
            n_cycles,
            direction: unit(direction)?,
        })
    }

    pub fn kind(&self) -> LoadKind {
        self.kind
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn steps_per_cycle(&self) -> usize {
        self.steps_per_cycle
    }

    pub fn n_cycles(&self) -> usize {
        self.n_cycles
    }

    pub fn direction(&self) -> &SymTensor2 {
        &self.direction
    }

    pub fn n_steps(&self) -> usize {
        self.steps_per_cycle * self.n_cycles
    }

    /// Scalar loading coordinate after `step` increments.
    pub fn coordinate(&self, step: usize) -> f64 {
        let a = self.amplitude;
        match self.kind {
            LoadKind::Monotonic => a * step as f64 / self.steps_per_cycle as f64,
            LoadKind::Cyclic => {
                let q = self.steps_per_cycle / 4;
                let s = step % self.steps_per_cycle;
                let x = if s <= q {
                    s as f64
                } else if s <= 3 * q {
                    (2 * q) as f64 - s as f64
                } else {
                    s as f64 - (4 * q) as f64
                };
                a * x / q as f64
            }
        }
    }

    pub fn strain(&self, step: usize) -> SymTensor2 {
        self.direction * self.coordinate(step)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeRecord {
    pub t: f64,
    pub strain: f64,
    pub stress: f64,
    /// Dissipation increment of the step ending at `t`; zero for the first
    /// record.
    pub dissipation: f64,
    pub fractions: Vec<f64>,
    /// `|eps_p_i|` for every phase.
    pub plastic_norms: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    k: usize,
    records: Vec<TimeRecord>,
}

impl TimeSeries {
    pub fn new(k: usize) -> Self {
        TimeSeries { k, records: Vec::new() }
    }

    pub fn push(&mut self, record: TimeRecord) -> Result<()> {
        if record.fractions.len() != self.k || record.plastic_norms.len() != self.k {
            return Err(Error::InvalidState(alloc::format!(
                "record has {} fractions and {} plastic norms, series has k = {}",
                record.fractions.len(),
                record.plastic_norms.len(),
                self.k
            )));
        }
        self.records.push(record);
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn records(&self) -> &[TimeRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

fn record(
    t: f64,
    eps: &SymTensor2,
    stress: &SymTensor2,
    dissipation: f64,
    state: &MixtureState,
    direction: &SymTensor2,
) -> TimeRecord {
    TimeRecord {
        t,
        strain: eps.ddot(direction),
        stress: stress.ddot(direction),
        dissipation,
        fractions: state.fractions().to_vec(),
        plastic_norms: state.plastic_strains().iter().map(|e| e.norm()).collect(),
    }
}

/// Runs steps `start + 1 ..= n_steps` from `state`, calling `observe` after
/// each step with the step index, the new state and the step report.
/// The first record describes `state` at step `start`.
pub fn run_program_from<F>(
    program: &LoadProgram,
    material: &Material,
    reg: &RegularizationParams,
    state: &MixtureState,
    start: usize,
    mut observe: F,
) -> Result<TimeSeries>
where
    F: FnMut(usize, &MixtureState, &StepReport),
{
    if state.k() != material.k() {
        return Err(Error::InvalidState(alloc::format!(
            "state has {} phases, material has {}",
            state.k(),
            material.k()
        )));
    }
    if program.direction().dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            left: program.direction().dim(),
            right: state.dim(),
        });
    }
    let dir = *program.direction();
    let mut series = TimeSeries::new(state.k());
    let eps0 = program.strain(start);
    let sigma0 = crate::energy::stress(&eps0, state, &material.phases)?;
    series.push(record(start as f64 * reg.dt, &eps0, &sigma0, 0.0, state, &dir))?;

    let mut current = state.clone();
    for n in start + 1..=program.n_steps() {
        let eps = program.strain(n);
        let (next, report) = step(&eps, &current, material, reg).map_err(|e| Error::StepFailed {
            step: n,
            source: alloc::boxed::Box::new(e),
        })?;
        series.push(record(
            n as f64 * reg.dt,
            &eps,
            &report.stress,
            report.dissipation_increment,
            &next,
            &dir,
        ))?;
        observe(n, &next, &report);
        current = next;
    }
    Ok(series)
}

pub fn run_program(
    program: &LoadProgram,
    material: &Material,
    reg: &RegularizationParams,
    initial: &MixtureState,
) -> Result<TimeSeries> {
    run_program_from(program, material, reg, initial, 0, |_, _, _| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::ModelOptions;
    use crate::phase::{PhaseParams, TransitionParams};
    use alloc::vec;

    #[test]
    fn triangle_wave_turning_points() {
        let p = LoadProgram::cyclic(0.5, 8, 2, SymTensor2::scalar(1.0)).unwrap();
        let a: Vec<f64> = (0..=16).map(|n| p.coordinate(n)).collect();
        assert_eq!(
            a,
            vec![0.0, 0.25, 0.5, 0.25, 0.0, -0.25, -0.5, -0.25, 0.0, 0.25, 0.5, 0.25, 0.0, -0.25, -0.5, -0.25, 0.0]
        );
        assert!(LoadProgram::cyclic(0.5, 6, 1, SymTensor2::scalar(1.0)).is_err());
    }

    #[test]
    fn direction_is_normalized() {
        let p = LoadProgram::monotonic(1.0, 4, SymTensor2::new(2.0, -1.0, -1.0, 0.0, 0.0, 0.0)).unwrap();
        assert!((p.direction().norm() - 1.0).abs() < 1e-15);
        assert!((p.strain(4).ddot(p.direction()) - 1.0).abs() < 1e-15);
        assert!((uniaxial_direction(Dim::Two).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_amplitude_is_flat() {
        let m = Material::new(
            vec![PhaseParams::isotropic(2.0, 0.0, Dim::One, 0.0, 0.1, 1.0).unwrap()],
            TransitionParams::uniform(1, 0.0).unwrap(),
            ModelOptions::default(),
        )
        .unwrap();
        let reg = RegularizationParams::new(1.0, 1.0, 0.1).unwrap();
        let p = LoadProgram::cyclic(0.0, 4, 3, SymTensor2::scalar(1.0)).unwrap();
        let s = run_program(&p, &m, &reg, &MixtureState::pure(Dim::One, 1, 0)).unwrap();
        assert_eq!(s.len(), 13);
        for r in s.records() {
            assert_eq!((r.strain, r.stress, r.dissipation), (0.0, 0.0, 0.0));
            assert_eq!(r.fractions, vec![1.0]);
        }
    }
}
