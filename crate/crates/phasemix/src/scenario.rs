//! Material-point and plate-benchmark runs with file output.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use phasemix_core::fem::{run_benchmark, BenchmarkResult, BenchmarkSettings, FemState, Mesh};
use phasemix_core::matpoint::{run_program, TimeRecord, TimeSeries};
use phasemix_core::tensor::XX;

use crate::config::ModelConfig;
use crate::error::AppError;
use crate::gmsh::{load_mesh, MeshFile};
use crate::series::{fmt_f64, write_series};
use crate::vtk::{state_fields, write_vtk};

fn create(path: &Path) -> Result<BufWriter<File>, AppError> {
    File::create(path).map(BufWriter::new).map_err(|e| AppError::io(path, e))
}

pub fn ensure_dir(dir: &Path) -> Result<(), AppError> {
    std::fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))
}

#[derive(Debug, Clone)]
pub struct MatpointOutput {
    pub series: TimeSeries,
    pub csv: PathBuf,
}

/// Runs the `[material_point]` program and writes `matpoint.csv`.
pub fn run_matpoint(cfg: &ModelConfig, out_dir: &Path) -> Result<MatpointOutput, AppError> {
    let (section, program) = cfg.material_point()?;
    let reg = cfg.regularization(section.dt)?;
    let series = run_program(&program, &cfg.material, &reg, &cfg.initial)?;
    ensure_dir(out_dir)?;
    let csv = out_dir.join("matpoint.csv");
    write_series(create(&csv)?, &series, None)?;
    Ok(MatpointOutput { series, csv })
}

#[derive(Debug, Clone)]
pub struct FemOutput {
    pub result: BenchmarkResult,
    /// Probe series: `strain` and `stress` are the `xx` components.
    pub probe: TimeSeries,
    /// File id of the probe node.
    pub probe_id: usize,
    pub files: Vec<PathBuf>,
}

/// Node-averaged probe quantities as a series record. The dissipation
/// column is the increment of the averaged dissipation density.
fn probe_record(step: &phasemix_core::fem::BenchmarkStep, previous: f64) -> TimeRecord {
    let p = &step.probe;
    TimeRecord {
        t: step.t,
        strain: p.strain.get(XX),
        stress: p.stress.get(XX),
        dissipation: if step.step == 0 { 0.0 } else { p.dissipation - previous },
        fractions: p.fractions.clone(),
        plastic_norms: p.plastic_norms.clone(),
    }
}

/// Runs the `[fem]` benchmark on the configured mesh (or `mesh_override`)
/// and writes `probe.csv`, `summary.csv` and `step_NNNN.vtk` snapshots.
pub fn run_fem(cfg: &ModelConfig, mesh_override: Option<&Path>, out_dir: &Path) -> Result<FemOutput, AppError> {
    let section = cfg.fem()?;
    let path = match mesh_override {
        Some(p) => p.to_path_buf(),
        None => cfg.mesh_path()?,
    };
    let MeshFile { mesh, node_ids } = load_mesh(&path)?;
    let probe = node_ids
        .iter()
        .position(|&n| n == section.probe_node)
        .ok_or_else(|| AppError::Config {
            path: path.display().to_string(),
            message: format!("probe_node {} is not in the mesh", section.probe_node),
        })?;
    let reg = cfg.regularization(section.dt)?;
    let settings = BenchmarkSettings::new(section.n_steps, section.ramp_amplitude, probe);
    ensure_dir(out_dir)?;

    let k = cfg.k();
    let mut series = TimeSeries::new(k);
    let mut files = Vec::new();
    let summary_path = out_dir.join("summary.csv");
    let mut summary = csv::Writer::from_writer(create(&summary_path)?);
    let mut head = vec!["step".to_string(), "t".into()];
    head.extend((1..=k).map(|i| format!("lambda_mean_{i}")));
    head.extend(["probe_von_mises", "load_reaction", "passes", "substeps"].map(String::from));
    summary.write_record(&head)?;

    let mut previous = 0.0;
    let result = run_benchmark(
        &mesh,
        &cfg.material,
        &reg,
        &cfg.initial,
        &settings,
        |state: &FemState, s| {
            let rec = probe_record(s, previous);
            previous = s.probe.dissipation;
            series.push(rec)?;
            let mut row = vec![s.step.to_string(), fmt_f64(s.t)];
            row.extend(s.domain_fractions.iter().map(|v| fmt_f64(*v)));
            row.push(fmt_f64(s.probe.von_mises));
            row.push(fmt_f64(s.load_reaction));
            let (passes, sub) = s.info.as_ref().map_or((0, 0), |i| (i.passes, i.substeps));
            row.push(passes.to_string());
            row.push(sub.to_string());
            summary
                .write_record(&row)
                .map_err(|e| phasemix_core::Error::InvalidState(e.to_string()))?;
            if section.snapshot_steps.contains(&s.step) {
                let p = out_dir.join(format!("step_{:04}.vtk", s.step));
                write_snapshot(&p, &mesh, s.step, state).map_err(|e| phasemix_core::Error::InvalidState(e.to_string()))?;
                files.push(p);
            }
            Ok(())
        },
    )?;
    summary.flush().map_err(|e| AppError::io(&summary_path, e))?;
    files.push(summary_path);

    let probe_path = out_dir.join("probe.csv");
    write_series(create(&probe_path)?, &series, Some(section.probe_node))?;
    files.push(probe_path);
    Ok(FemOutput {
        result,
        probe: series,
        probe_id: section.probe_node,
        files,
    })
}

fn write_snapshot(path: &Path, mesh: &Mesh, step: usize, state: &FemState) -> Result<(), AppError> {
    write_vtk(path, mesh, &format!("phasemix step {step}"), &state.u, &state_fields(state))
}
