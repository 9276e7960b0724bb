//! Legacy ASCII VTK output of FE fields.

use std::fmt::Write as _;

use phasemix_core::fem::{element_fractions, element_von_mises, FemState, Mesh};

use crate::error::AppError;
use crate::series::fmt_f64;

/// Cell arrays written after the displacement field.
#[derive(Debug, Clone, PartialEq)]
pub struct CellField {
    pub name: String,
    pub values: Vec<f64>,
}

/// Phase fractions (`lambda_1..`) and von Mises stress as element means of
/// the Gauss values.
pub fn state_fields(state: &FemState) -> Vec<CellField> {
    let fr = element_fractions(state);
    let k = fr.first().map_or(0, |f| f.len());
    let mut out: Vec<CellField> = (0..k)
        .map(|i| CellField {
            name: format!("lambda_{}", i + 1),
            values: fr.iter().map(|f| f[i]).collect(),
        })
        .collect();
    out.push(CellField {
        name: "von_mises".into(),
        values: element_von_mises(state),
    });
    out
}

pub fn vtk_string(mesh: &Mesh, title: &str, displacement: &[f64], cells: &[CellField]) -> Result<String, AppError> {
    let (n, ne) = (mesh.n_nodes(), mesh.n_elements());
    if displacement.len() != 2 * n {
        return Err(AppError::Usage(format!(
            "displacement has {} entries for {n} nodes",
            displacement.len()
        )));
    }
    if let Some(f) = cells.iter().find(|f| f.values.len() != ne) {
        return Err(AppError::Usage(format!(
            "cell field {} has {} values for {ne} elements",
            f.name,
            f.values.len()
        )));
    }
    let mut s = String::new();
    let title = title.replace('\n', " ");
    let _ = writeln!(s, "# vtk DataFile Version 3.0\n{title}\nASCII\nDATASET UNSTRUCTURED_GRID");
    let _ = writeln!(s, "POINTS {n} double");
    for p in mesh.nodes() {
        let _ = writeln!(s, "{} {} 0", fmt_f64(p[0]), fmt_f64(p[1]));
    }
    let _ = writeln!(s, "CELLS {ne} {}", 5 * ne);
    for c in mesh.elements() {
        let _ = writeln!(s, "4 {} {} {} {}", c[0], c[1], c[2], c[3]);
    }
    let _ = writeln!(s, "CELL_TYPES {ne}");
    for _ in 0..ne {
        s.push_str("9\n");
    }
    let _ = writeln!(s, "POINT_DATA {n}\nVECTORS displacement double");
    for u in displacement.chunks(2) {
        let _ = writeln!(s, "{} {} 0", fmt_f64(u[0]), fmt_f64(u[1]));
    }
    if !cells.is_empty() {
        let _ = writeln!(s, "CELL_DATA {ne}");
        for f in cells {
            let _ = writeln!(s, "SCALARS {} double 1\nLOOKUP_TABLE default", f.name);
            for v in &f.values {
                s.push_str(&fmt_f64(*v));
                s.push('\n');
            }
        }
    }
    Ok(s)
}

pub fn write_vtk(
    path: &std::path::Path,
    mesh: &Mesh,
    title: &str,
    displacement: &[f64],
    cells: &[CellField],
) -> Result<(), AppError> {
    let text = vtk_string(mesh, title, displacement, cells)?;
    std::fs::write(path, text).map_err(|e| AppError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use phasemix_core::{Dim, Material, MixtureState, ModelOptions, PhaseParams, TransitionParams};

    #[test]
    fn single_element() {
        let mesh = Mesh::rectangle(1.0, 1.0, 1, 1).unwrap();
        let phases: Vec<PhaseParams> = (0..3)
            .map(|_| PhaseParams::isotropic(10.0, 0.3, Dim::Two, 0.0, 0.1, 0.1).unwrap())
            .collect();
        let mat = Material::new(phases, TransitionParams::uniform(3, 0.1).unwrap(), ModelOptions::default()).unwrap();
        let st = FemState::uniform(&mesh, &MixtureState::pure(Dim::Two, 3, 2), &mat).unwrap();
        let s = vtk_string(&mesh, "t", &st.u, &state_fields(&st)).unwrap();
        assert!(s.contains("POINTS 4 double\n"));
        assert!(s.contains("CELLS 1 5\n4 "));
        assert!(s.contains("CELL_TYPES 1\n9\n"));
        assert!(s.contains("SCALARS lambda_3 double 1\nLOOKUP_TABLE default\n1\n"));
        assert!(s.contains("SCALARS lambda_1 double 1\nLOOKUP_TABLE default\n0\n"));
        assert!(vtk_string(&mesh, "t", &[0.0; 3], &[]).is_err());
    }
}
