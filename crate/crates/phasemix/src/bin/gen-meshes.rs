//! Writes the coarse, fine and superfine plate meshes as MSH 2.2 files and
//! prints their node and element counts.

use std::path::PathBuf;
use std::process::ExitCode;

use phasemix::gmsh::write_msh;
use phasemix::plate::benchmark_meshes;

fn main() -> ExitCode {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "configs/meshes".into()));
    if let Err(e) = std::fs::create_dir_all(&dir) {
        eprintln!("error: {}: {e}", dir.display());
        return ExitCode::FAILURE;
    }
    let mut summary = String::from("mesh,nodes,elements,hole_top_node\n");
    for (name, geom) in benchmark_meshes() {
        let mesh = match geom.mesh() {
            Ok(m) => m,
            Err(e) => {
                eprintln!("error: {name}: {e}");
                return ExitCode::FAILURE;
            }
        };
        let path = dir.join(format!("{name}.msh"));
        if let Err(e) = std::fs::write(&path, write_msh(&mesh, &geom.boundary_lines())) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::FAILURE;
        }
        summary.push_str(&format!("{name},{},{},{}\n", mesh.n_nodes(), mesh.n_elements(), geom.hole_top() + 1));
    }
    let path = dir.join("summary.csv");
    if let Err(e) = std::fs::write(&path, &summary) {
        eprintln!("error: {}: {e}", path.display());
        return ExitCode::FAILURE;
    }
    print!("{summary}");
    ExitCode::SUCCESS
}
