//! Model configuration files.
//!
//! Configs are TOML. Energies and stresses accept a plain number in Pa or a
//! string `"<value> <unit>"` with unit `Pa`, `kPa`, `MPa` or `GPa`. Unknown
//! keys are errors. [`ConfigFile::resolved`] rewrites every quantity as a
//! number in Pa; its TOML form loads back to the same model.
//!
//! ```toml
//! [model]
//! dimension = 3                 # 1, 2 (plane strain) or 3
//! poisson_ratio = 0.0
//! initial_fractions = [0, 0, 1]
//! flow_direction = "full_driving_force"   # or "stress_only"
//! bounded_initiation = true
//!
//! [regularization]
//! eta1 = 1.16e-10               # 1/(Pa s)
//! eta2 = 6.91e-9
//!
//! [[phases]]
//! name = "A"
//! intrinsic = { stiffness = "7.43 MPa", chemical_energy = "-0.81 kPa", yield_stress = 0.005, hardening = 0.04 }
//! transition_source = { stiffness = "21.6 MPa", chemical_energy = 0, yield_stress = 0.002, hardening = 0.02 }
//! ```
//!
//! `intrinsic` defines the phase energy and plastic yield stress. Transition
//! thresholds are `r_ij = transition_source.yield_stress` of the source phase
//! `i`, unless `[transitions] matrix` gives them explicitly.

use std::fmt;
use std::path::{Path, PathBuf};

use phasemix_core::evolution::FlowDirection;
use phasemix_core::matpoint::{uniaxial_direction, LoadProgram};
use phasemix_core::{
    Dim, Material, MixtureState, ModelOptions, PhaseParams, RegularizationParams, SymTensor2,
    TransitionParams,
};
use serde::{Deserialize, Serialize};

use crate::error::AppError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Number(f64),
    Text(String),
}

impl Quantity {
    /// Value in Pa.
    pub fn pascal(&self) -> Result<f64, String> {
        match self {
            Quantity::Number(v) => Ok(*v),
            Quantity::Text(s) => {
                let mut parts = s.split_whitespace();
                let (Some(v), unit, None) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(format!("cannot read quantity '{s}'"));
                };
                let v: f64 = v.parse().map_err(|_| format!("cannot read number in '{s}'"))?;
                let scale = match unit.unwrap_or("Pa") {
                    "Pa" => 1.0,
                    "kPa" => 1e3,
                    "MPa" => 1e6,
                    "GPa" => 1e9,
                    u => return Err(format!("unknown unit '{u}' in '{s}'")),
                };
                Ok(v * scale)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowDirectionName {
    #[default]
    FullDrivingForce,
    StressOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub dimension: u8,
    pub poisson_ratio: f64,
    pub initial_fractions: Vec<f64>,
    #[serde(default)]
    pub flow_direction: FlowDirectionName,
    #[serde(default = "yes")]
    pub bounded_initiation: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegularizationSection {
    pub eta1: f64,
    pub eta2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseBlock {
    /// Young's modulus.
    pub stiffness: Quantity,
    pub chemical_energy: Quantity,
    pub yield_stress: Quantity,
    pub hardening: Quantity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub intrinsic: PhaseBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transition_source: Option<PhaseBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionsSection {
    /// Row `i`, column `j` holds `r_ij`; the diagonal is ignored.
    pub matrix: Vec<Vec<Quantity>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProgramKind {
    Monotonic,
    Cyclic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DirectionSpec {
    /// `"uniaxial"`: volume-preserving uniaxial direction.
    Named(String),
    /// `[xx, yy, zz, yz, xz, xy]`, normalized on use.
    Components(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialPointSection {
    pub kind: ProgramKind,
    /// Peak value of `eps : N`.
    pub amplitude: f64,
    pub dt: f64,
    /// Steps per cycle, or the total step count of a monotonic ramp.
    pub steps_per_cycle: usize,
    #[serde(default = "one")]
    pub n_cycles: usize,
    #[serde(default = "uniaxial")]
    pub direction: DirectionSpec,
}

fn one() -> usize {
    1
}

fn uniaxial() -> DirectionSpec {
    DirectionSpec::Named("uniaxial".into())
}

fn default_fem_steps() -> usize {
    700
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FemSection {
    /// Gmsh file, relative to the config file.
    pub mesh: String,
    /// Final compressive displacement of the loaded edge (m).
    pub ramp_amplitude: f64,
    pub dt: f64,
    #[serde(default = "default_fem_steps")]
    pub n_steps: usize,
    #[serde(default)]
    pub snapshot_steps: Vec<usize>,
    /// Node id as numbered in the mesh file.
    pub probe_node: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub model: ModelSection,
    pub regularization: RegularizationSection,
    pub phases: Vec<PhaseSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transitions: Option<TransitionsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub material_point: Option<MaterialPointSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fem: Option<FemSection>,
}

/// A config checked against every model invariant.
#[derive(Debug, Clone)]
pub struct ModelConfig {
    pub file: ConfigFile,
    /// Directory relative paths are resolved against.
    pub base_dir: PathBuf,
    pub material: Material,
    pub initial: MixtureState,
    pub eta1: f64,
    pub eta2: f64,
}

impl fmt::Display for ConfigFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = toml::to_string(self).map_err(|_| fmt::Error)?;
        f.write_str(&text)
    }
}

fn schema(path: &str, message: impl Into<String>) -> AppError {
    AppError::Config {
        path: path.into(),
        message: message.into(),
    }
}

fn pa(q: &Quantity, key: &str) -> Result<f64, AppError> {
    q.pascal().map_err(|m| schema(key, m))
}

impl PhaseBlock {
    fn resolved(&self, key: &str) -> Result<PhaseBlock, AppError> {
        Ok(PhaseBlock {
            stiffness: Quantity::Number(pa(&self.stiffness, &format!("{key}.stiffness"))?),
            chemical_energy: Quantity::Number(pa(&self.chemical_energy, &format!("{key}.chemical_energy"))?),
            yield_stress: Quantity::Number(pa(&self.yield_stress, &format!("{key}.yield_stress"))?),
            hardening: Quantity::Number(pa(&self.hardening, &format!("{key}.hardening"))?),
        })
    }
}

impl ConfigFile {
    pub fn parse(text: &str, origin: &str) -> Result<Self, AppError> {
        toml::from_str(text).map_err(|e| AppError::Config {
            path: origin.into(),
            message: e.to_string(),
        })
    }

    /// Same config with every quantity in Pa.
    pub fn resolved(&self) -> Result<ConfigFile, AppError> {
        let mut out = self.clone();
        for (n, p) in out.phases.iter_mut().enumerate() {
            let key = format!("phases[{n}]");
            p.intrinsic = p.intrinsic.resolved(&format!("{key}.intrinsic"))?;
            if let Some(t) = &p.transition_source {
                p.transition_source = Some(t.resolved(&format!("{key}.transition_source"))?);
            }
        }
        if let Some(t) = &mut out.transitions {
            for (i, row) in t.matrix.iter_mut().enumerate() {
                for (j, q) in row.iter_mut().enumerate() {
                    *q = Quantity::Number(pa(q, &format!("transitions.matrix[{i}][{j}]"))?);
                }
            }
        }
        Ok(out)
    }

    pub fn dim(&self) -> Result<Dim, AppError> {
        Dim::from_spatial(self.model.dimension as usize)
            .ok_or_else(|| schema("model.dimension", format!("must be 1, 2 or 3, got {}", self.model.dimension)))
    }

    pub fn build(self, base_dir: &Path) -> Result<ModelConfig, AppError> {
        let resolved = self.resolved()?;
        let dim = resolved.dim()?;
        let nu = resolved.model.poisson_ratio;
        let k = resolved.phases.len();
        if k == 0 {
            return Err(schema("phases", "at least one phase is required"));
        }
        let mut phases = Vec::with_capacity(k);
        let mut stiffest: f64 = 0.0;
        for (n, p) in resolved.phases.iter().enumerate() {
            let b = &p.intrinsic;
            let num = |q: &Quantity| match q {
                Quantity::Number(v) => *v,
                Quantity::Text(_) => unreachable!("resolved"),
            };
            let e = num(&b.stiffness);
            stiffest = stiffest.max(e);
            let params = PhaseParams::isotropic(e, nu, dim, num(&b.chemical_energy), num(&b.yield_stress), num(&b.hardening))
                .map_err(|err| schema(&format!("phases[{n}].intrinsic"), err.to_string()))?;
            phases.push(params);
        }
        let transitions = match &resolved.transitions {
            Some(t) => {
                let rows: Vec<Vec<f64>> = t
                    .matrix
                    .iter()
                    .map(|row| row.iter().map(|q| q.pascal().unwrap_or(f64::NAN)).collect())
                    .collect();
                TransitionParams::new(&rows).map_err(|e| schema("transitions.matrix", e.to_string()))?
            }
            None => {
                let mut r = Vec::with_capacity(k);
                for (n, p) in resolved.phases.iter().enumerate() {
                    let Some(t) = &p.transition_source else {
                        return Err(schema(
                            &format!("phases[{n}].transition_source"),
                            "missing; required unless [transitions] matrix is given",
                        ));
                    };
                    r.push(t.yield_stress.pascal().unwrap_or(f64::NAN));
                }
                TransitionParams::source_indexed(&r).map_err(|e| schema("phases.transition_source", e.to_string()))?
            }
        };
        if transitions.k() != k {
            return Err(schema("transitions.matrix", format!("must be {k} x {k}")));
        }
        let mut options = ModelOptions::for_stress_scale(stiffest);
        options.flow_direction = match resolved.model.flow_direction {
            FlowDirectionName::FullDrivingForce => FlowDirection::FullDrivingForce,
            FlowDirectionName::StressOnly => FlowDirection::StressOnly,
        };
        options.bounded_initiation = resolved.model.bounded_initiation;
        let material = Material::new(phases, transitions, options).map_err(|e| schema("phases", e.to_string()))?;
        if resolved.model.initial_fractions.len() != k {
            return Err(schema(
                "model.initial_fractions",
                format!("has {} entries for {k} phases", resolved.model.initial_fractions.len()),
            ));
        }
        let initial = MixtureState::with_fractions(dim, resolved.model.initial_fractions.clone())
            .map_err(|e| schema("model.initial_fractions", e.to_string()))?;
        let reg = &resolved.regularization;
        RegularizationParams::new(reg.eta1, reg.eta2, 1.0).map_err(|e| schema("regularization", e.to_string()))?;
        if let Some(mp) = &resolved.material_point {
            if !(mp.dt > 0.0) {
                return Err(schema("material_point.dt", "must be positive"));
            }
        }
        if let Some(fem) = &resolved.fem {
            if dim != Dim::Two {
                return Err(schema("model.dimension", "[fem] requires dimension = 2"));
            }
            if !(fem.dt > 0.0) {
                return Err(schema("fem.dt", "must be positive"));
            }
            if let Some(&s) = fem.snapshot_steps.iter().find(|&&s| s > fem.n_steps) {
                return Err(schema("fem.snapshot_steps", format!("step {s} is after the last step")));
            }
        }
        Ok(ModelConfig {
            eta1: reg.eta1,
            eta2: reg.eta2,
            file: resolved,
            base_dir: base_dir.to_path_buf(),
            material,
            initial,
        })
    }
}

impl ModelConfig {
    pub fn load(path: &Path) -> Result<Self, AppError> {
        let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        ConfigFile::parse(&text, &path.display().to_string())?.build(&base)
    }

    pub fn from_str(text: &str, base_dir: &Path) -> Result<Self, AppError> {
        ConfigFile::parse(text, "<string>")?.build(base_dir)
    }

    pub fn k(&self) -> usize {
        self.material.k()
    }

    pub fn regularization(&self, dt: f64) -> Result<RegularizationParams, AppError> {
        RegularizationParams::new(self.eta1, self.eta2, dt).map_err(AppError::Model)
    }

    pub fn material_point(&self) -> Result<(&MaterialPointSection, LoadProgram), AppError> {
        let mp = self
            .file
            .material_point
            .as_ref()
            .ok_or_else(|| schema("material_point", "section missing"))?;
        let dim = self.material.dim();
        let direction = match &mp.direction {
            DirectionSpec::Named(n) if n == "uniaxial" => uniaxial_direction(dim),
            DirectionSpec::Named(n) => {
                return Err(schema("material_point.direction", format!("unknown direction '{n}'")))
            }
            DirectionSpec::Components(c) => {
                let arr: [f64; 6] = c
                    .as_slice()
                    .try_into()
                    .map_err(|_| schema("material_point.direction", "needs six components"))?;
                SymTensor2::from_components(dim, arr).map_err(|e| schema("material_point.direction", e.to_string()))?
            }
        };
        let program = match mp.kind {
            ProgramKind::Monotonic => LoadProgram::monotonic(mp.amplitude, mp.steps_per_cycle, direction),
            ProgramKind::Cyclic => LoadProgram::cyclic(mp.amplitude, mp.steps_per_cycle, mp.n_cycles, direction),
        }
        .map_err(|e| schema("material_point", e.to_string()))?;
        Ok((mp, program))
    }

    pub fn fem(&self) -> Result<&FemSection, AppError> {
        self.file.fem.as_ref().ok_or_else(|| schema("fem", "section missing"))
    }

    pub fn mesh_path(&self) -> Result<PathBuf, AppError> {
        Ok(self.base_dir.join(&self.fem()?.mesh))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
[model]
dimension = 1
poisson_ratio = 0.0
initial_fractions = [0, 1]

[regularization]
eta1 = 1.0
eta2 = 2.0

[[phases]]
intrinsic = { stiffness = "2 kPa", chemical_energy = 0, yield_stress = 0.5, hardening = 1 }
transition_source = { stiffness = 1, chemical_energy = 0, yield_stress = 0.25, hardening = 1 }

[[phases]]
intrinsic = { stiffness = 3000, chemical_energy = "-1 Pa", yield_stress = 0.5, hardening = 1 }
transition_source = { stiffness = 1, chemical_energy = 0, yield_stress = 0.75, hardening = 1 }
"#;

    #[test]
    fn units_convert() {
        assert_eq!(Quantity::Text("7.43 MPa".into()).pascal().unwrap(), 7.43e6);
        assert_eq!(Quantity::Text("-0.81 kPa".into()).pascal().unwrap(), -810.0);
        assert_eq!(Quantity::Text("5".into()).pascal().unwrap(), 5.0);
        assert!(Quantity::Text("5 psi".into()).pascal().is_err());
        assert!(Quantity::Text("MPa".into()).pascal().is_err());
    }

    #[test]
    fn builds_and_round_trips() {
        let c = ModelConfig::from_str(BASE, Path::new(".")).unwrap();
        assert_eq!(c.material.phases[0].stiffness().matrix()[0][0], 2000.0);
        assert_eq!(c.material.transitions.get(0, 1), 0.25);
        assert_eq!(c.material.transitions.get(1, 0), 0.75);
        let text = c.file.to_string();
        let again = ModelConfig::from_str(&text, Path::new(".")).unwrap();
        assert_eq!(again.file, c.file);
        assert_eq!(again.file.to_string(), text);
    }

    #[test]
    fn schema_errors_name_the_key() {
        let missing = BASE.replace("eta1 = 1.0\n", "");
        let e = ModelConfig::from_str(&missing, Path::new(".")).unwrap_err().to_string();
        assert!(e.contains("eta1"), "{e}");
        let unknown = BASE.replace("eta2 = 2.0", "eta2 = 2.0\neta3 = 1.0");
        let e = ModelConfig::from_str(&unknown, Path::new(".")).unwrap_err().to_string();
        assert!(e.contains("eta3") && e.contains("line"), "{e}");
        let bad = BASE.replace("[0, 1]", "[0.5, 0.6]");
        let e = ModelConfig::from_str(&bad, Path::new(".")).unwrap_err().to_string();
        assert!(e.contains("initial_fractions"), "{e}");
    }
}
