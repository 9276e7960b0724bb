//! Gmsh MSH 2.2 ASCII meshes.
//!
//! Grammar accepted (blank lines are ignored, unknown `$Section` blocks are
//! skipped up to their `$EndSection`):
//!
//! ```text
//! $MeshFormat
//! 2.2 0 <data-size>
//! $EndMeshFormat
//! $PhysicalNames             (optional)
//! <count>
//! <dim> <tag> "<name>"
//! $EndPhysicalNames
//! $Nodes
//! <count>
//! <id> <x> <y> <z>
//! $EndNodes
//! $Elements
//! <count>
//! <id> <type> <ntags> <tag>... <node>...
//! $EndElements
//! ```
//!
//! Type 3 (4-node quadrangle) elements form the mesh. Type 1 (2-node line)
//! elements add their nodes to the node set named by their first tag, which
//! must appear in `$PhysicalNames`. Every other element type is rejected.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use phasemix_core::fem::Mesh;

use crate::error::AppError;

/// A mesh with the node ids used in its file.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshFile {
    pub mesh: Mesh,
    /// File id of every node, by mesh index.
    pub node_ids: Vec<usize>,
}

impl MeshFile {
    pub fn index_of(&self, id: usize) -> Option<usize> {
        self.node_ids.iter().position(|&n| n == id)
    }
}

struct Lines<'a> {
    origin: &'a str,
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn err(&self, message: impl Into<String>) -> AppError {
        AppError::Parse {
            path: self.origin.into(),
            line: self.line,
            message: message.into(),
        }
    }

    fn next(&mut self) -> Option<&'a str> {
        for (n, l) in self.inner.by_ref() {
            let t = l.trim();
            if !t.is_empty() {
                self.line = n + 1;
                return Some(t);
            }
        }
        None
    }

    fn expect_next(&mut self, what: &str) -> Result<&'a str, AppError> {
        self.next().ok_or_else(|| self.err(format!("unexpected end of file, expected {what}")))
    }

    fn expect(&mut self, tag: &str) -> Result<(), AppError> {
        let l = self.expect_next(tag)?;
        if l != tag {
            return Err(self.err(format!("expected {tag}, found '{l}'")));
        }
        Ok(())
    }

    fn count(&mut self) -> Result<usize, AppError> {
        let l = self.expect_next("a count")?;
        l.parse().map_err(|_| self.err(format!("bad count '{l}'")))
    }

    fn number<T: std::str::FromStr>(&self, field: &str, what: &str) -> Result<T, AppError> {
        field.parse().map_err(|_| self.err(format!("bad {what} '{field}'")))
    }
}

pub fn parse_msh(text: &str, origin: &str) -> Result<MeshFile, AppError> {
    let mut lines = Lines {
        origin,
        inner: text.lines().enumerate().peekable(),
        line: 0,
    };
    let mut names: HashMap<usize, String> = HashMap::new();
    let mut node_ids = Vec::new();
    let mut coords = Vec::new();
    let mut raw_elements: Vec<(usize, [usize; 4])> = Vec::new();
    let mut raw_lines: Vec<(usize, usize, [usize; 2])> = Vec::new();
    let mut seen_format = false;
    let mut seen_nodes = false;
    let mut seen_elements = false;

    while let Some(l) = lines.next() {
        match l {
            "$MeshFormat" => {
                let v = lines.expect_next("version line")?;
                let f: Vec<&str> = v.split_whitespace().collect();
                if f.len() != 3 || f[0] != "2.2" {
                    return Err(lines.err(format!("unsupported format version '{v}', need 2.2")));
                }
                if f[1] != "0" {
                    return Err(lines.err("binary files are not supported"));
                }
                lines.expect("$EndMeshFormat")?;
                seen_format = true;
            }
            "$PhysicalNames" => {
                let n = lines.count()?;
                for _ in 0..n {
                    let l = lines.expect_next("physical name")?;
                    let mut parts = l.splitn(3, char::is_whitespace);
                    let (Some(_dim), Some(tag), Some(name)) = (parts.next(), parts.next(), parts.next()) else {
                        return Err(lines.err(format!("malformed physical name '{l}'")));
                    };
                    let tag: usize = lines.number(tag, "physical tag")?;
                    let name = name.trim();
                    if !(name.len() >= 2 && name.starts_with('"') && name.ends_with('"')) {
                        return Err(lines.err(format!("physical name {name} is not quoted")));
                    }
                    names.insert(tag, name[1..name.len() - 1].to_string());
                }
                lines.expect("$EndPhysicalNames")?;
            }
            "$Nodes" => {
                if !seen_format {
                    return Err(lines.err("$Nodes before $MeshFormat"));
                }
                let n = lines.count()?;
                for _ in 0..n {
                    let l = lines.expect_next("node")?;
                    let f: Vec<&str> = l.split_whitespace().collect();
                    if f.len() != 4 {
                        return Err(lines.err(format!("node line needs 4 fields, found {}", f.len())));
                    }
                    node_ids.push(lines.number::<usize>(f[0], "node id")?);
                    let x: f64 = lines.number(f[1], "coordinate")?;
                    let y: f64 = lines.number(f[2], "coordinate")?;
                    let z: f64 = lines.number(f[3], "coordinate")?;
                    if z != 0.0 {
                        return Err(lines.err(format!("node {} is out of plane (z = {z})", f[0])));
                    }
                    coords.push([x, y]);
                }
                lines.expect("$EndNodes")?;
                seen_nodes = true;
            }
            "$Elements" => {
                let n = lines.count()?;
                for _ in 0..n {
                    let l = lines.expect_next("element")?;
                    let f: Vec<usize> = l
                        .split_whitespace()
                        .map(|s| lines.number(s, "element field"))
                        .collect::<Result<_, _>>()?;
                    if f.len() < 3 {
                        return Err(lines.err("element line too short"));
                    }
                    let (id, kind, ntags) = (f[0], f[1], f[2]);
                    let nodes = &f[(3 + ntags).min(f.len())..];
                    let tag = if ntags > 0 { f.get(3).copied() } else { None };
                    match kind {
                        3 if nodes.len() == 4 => raw_elements.push((id, [nodes[0], nodes[1], nodes[2], nodes[3]])),
                        1 if nodes.len() == 2 => {
                            let Some(tag) = tag else {
                                return Err(lines.err(format!("line element {id} has no physical tag")));
                            };
                            raw_lines.push((lines.line, tag, [nodes[0], nodes[1]]));
                        }
                        1 | 3 => return Err(lines.err(format!("element {id} has {} nodes", nodes.len()))),
                        t => return Err(lines.err(format!("unsupported element type {t} (element {id})"))),
                    }
                }
                lines.expect("$EndElements")?;
                seen_elements = true;
            }
            s if s.starts_with('$') && !s.starts_with("$End") => {
                let end = format!("$End{}", &s[1..]);
                loop {
                    let l = lines.expect_next(&end)?;
                    if l == end {
                        break;
                    }
                }
            }
            other => return Err(lines.err(format!("unexpected line '{other}'"))),
        }
    }
    if !seen_nodes || !seen_elements {
        return Err(lines.err("missing $Nodes or $Elements"));
    }

    let mut index: HashMap<usize, usize> = HashMap::with_capacity(node_ids.len());
    for (i, &id) in node_ids.iter().enumerate() {
        if index.insert(id, i).is_some() {
            return Err(lines.err(format!("duplicate node id {id}")));
        }
    }
    let lookup = |id: usize, line: usize| -> Result<usize, AppError> {
        index.get(&id).copied().ok_or_else(|| AppError::Parse {
            path: origin.into(),
            line,
            message: format!("unknown node id {id}"),
        })
    };
    let mut elements = Vec::with_capacity(raw_elements.len());
    for (_, conn) in &raw_elements {
        let mut c = [0; 4];
        for (a, &id) in conn.iter().enumerate() {
            c[a] = lookup(id, 0)?;
        }
        elements.push(c);
    }
    let mut sets: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (line, tag, ends) in &raw_lines {
        let name = names.get(tag).ok_or_else(|| AppError::Parse {
            path: origin.into(),
            line: *line,
            message: format!("unknown physical name for tag {tag}"),
        })?;
        let set = sets.entry(name.clone()).or_default();
        for &id in ends {
            set.push(lookup(id, *line)?);
        }
    }
    let mesh = Mesh::new(coords, elements, sets).map_err(|e| AppError::Parse {
        path: origin.into(),
        line: 0,
        message: e.to_string(),
    })?;
    Ok(MeshFile { mesh, node_ids })
}

pub fn load_mesh(path: &Path) -> Result<MeshFile, AppError> {
    let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    parse_msh(&text, &path.display().to_string())
}

/// Writes `mesh` with 1-based node and element ids. Boundary segments become
/// line elements tagged with their set name; quadrangles get physical tag
/// `plate`.
pub fn write_msh(mesh: &Mesh, boundary: &[(&str, [usize; 2])]) -> String {
    let mut tags: Vec<&str> = Vec::new();
    for (name, _) in boundary {
        if !tags.contains(name) {
            tags.push(name);
        }
    }
    let tag_of = |name: &str| tags.iter().position(|t| *t == name).unwrap() + 1;
    let plate_tag = tags.len() + 1;
    let mut s = String::new();
    s.push_str("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n");
    let _ = writeln!(s, "$PhysicalNames\n{}", tags.len() + 1);
    for (i, t) in tags.iter().enumerate() {
        let _ = writeln!(s, "1 {} \"{t}\"", i + 1);
    }
    let _ = writeln!(s, "2 {plate_tag} \"plate\"\n$EndPhysicalNames");
    let _ = writeln!(s, "$Nodes\n{}", mesh.n_nodes());
    for (i, p) in mesh.nodes().iter().enumerate() {
        let _ = writeln!(s, "{} {:?} {:?} 0", i + 1, p[0], p[1]);
    }
    s.push_str("$EndNodes\n");
    let _ = writeln!(s, "$Elements\n{}", boundary.len() + mesh.n_elements());
    let mut id = 1;
    for (name, [a, b]) in boundary {
        let t = tag_of(name);
        let _ = writeln!(s, "{id} 1 2 {t} {t} {} {}", a + 1, b + 1);
        id += 1;
    }
    for c in mesh.elements() {
        let _ = writeln!(
            s,
            "{id} 3 2 {plate_tag} {plate_tag} {} {} {} {}",
            c[0] + 1,
            c[1] + 1,
            c[2] + 1,
            c[3] + 1
        );
        id += 1;
    }
    s.push_str("$EndElements\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: &str = "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n4\n1 0 0 0\n2 1 0 0\n3 1 1 0\n4 0 1 0\n$EndNodes\n$Elements\n1\n1 3 2 0 1 1 2 3 4\n$EndElements\n";

    #[test]
    fn unit_square() {
        let m = parse_msh(SQUARE, "square").unwrap();
        assert_eq!((m.mesh.n_nodes(), m.mesh.n_elements()), (4, 1));
    }

    #[test]
    fn triangles_rejected_with_type_and_line() {
        let text = SQUARE.replace("1 3 2 0 1 1 2 3 4", "1 2 2 0 1 1 2 3");
        let e = parse_msh(&text, "tri").unwrap_err().to_string();
        assert!(e.contains("type 2") && e.contains("tri:13"), "{e}");
    }

    #[test]
    fn version_and_names_checked() {
        let e = parse_msh(&SQUARE.replace("2.2 0 8", "4.1 0 8"), "v").unwrap_err().to_string();
        assert!(e.contains("v:2") && e.contains("4.1"), "{e}");
        let text = SQUARE.replace("1\n1 3 2 0 1 1 2 3 4", "2\n1 3 2 0 1 1 2 3 4\n2 1 2 7 7 1 2");
        let e = parse_msh(&text, "n").unwrap_err().to_string();
        assert!(e.contains("tag 7"), "{e}");
        let e = parse_msh(&SQUARE.replace("2 1 0 0", "2 1 zero 0"), "c").unwrap_err().to_string();
        assert!(e.contains("c:7"), "{e}");
    }

    #[test]
    fn write_then_read() {
        let mesh = Mesh::rectangle(2.0, 1.0, 2, 1).unwrap();
        let lines = [("left", [0usize, 3usize]), ("bottom", [0, 1]), ("bottom", [1, 2])];
        let text = write_msh(&mesh, &lines);
        let back = parse_msh(&text, "rt").unwrap();
        assert_eq!(back.mesh.nodes(), mesh.nodes());
        assert_eq!(back.mesh.elements(), mesh.elements());
        assert_eq!(back.mesh.node_set("bottom").unwrap(), &[0, 1, 2]);
        assert_eq!(back.index_of(4), Some(3));
    }
}
