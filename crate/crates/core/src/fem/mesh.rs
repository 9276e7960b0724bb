use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::element::{gradients, Coords, GAUSS_POINTS};
use crate::{Error, Result};

/// Q4 mesh with named boundary node sets. Node and element indices are
/// zero-based; file formats translate their own numbering.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nodes: Vec<[f64; 2]>,
    elements: Vec<[usize; 4]>,
    sets: BTreeMap<String, Vec<usize>>,
}

impl Mesh {
    pub fn new(
        nodes: Vec<[f64; 2]>,
        elements: Vec<[usize; 4]>,
        sets: BTreeMap<String, Vec<usize>>,
    ) -> Result<Self> {
        if nodes.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidMesh("non-finite node coordinate".into()));
        }
        for (e, conn) in elements.iter().enumerate() {
            if let Some(&n) = conn.iter().find(|&&n| n >= nodes.len()) {
                return Err(Error::InvalidMesh(alloc::format!(
                    "element {e} references missing node {n}"
                )));
            }
        }
        let mut sets = sets;
        for (name, list) in sets.iter_mut() {
            if let Some(&n) = list.iter().find(|&&n| n >= nodes.len()) {
                return Err(Error::InvalidMesh(alloc::format!(
                    "set '{name}' references missing node {n}"
                )));
            }
            list.sort_unstable();
            list.dedup();
        }
        let mesh = Mesh { nodes, elements, sets };
        for e in 0..mesh.elements.len() {
            let c = mesh.element_coords(e);
            for p in GAUSS_POINTS {
                gradients(&c, p[0], p[1]).map_err(|_| {
                    Error::InvalidMesh(alloc::format!("element {e} is inverted or degenerate"))
                })?;
            }
        }
        Ok(mesh)
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn elements(&self) -> &[[usize; 4]] {
        &self.elements
    }

    pub fn sets(&self) -> &BTreeMap<String, Vec<usize>> {
        &self.sets
    }

    pub fn node_set(&self, name: &str) -> Option<&[usize]> {
        self.sets.get(name).map(|v| v.as_slice())
    }

    pub fn element_coords(&self, e: usize) -> Coords {
        let c = &self.elements[e];
        [self.nodes[c[0]], self.nodes[c[1]], self.nodes[c[2]], self.nodes[c[3]]]
    }

    /// Elements incident to each node, in ascending order.
    pub fn node_elements(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.nodes.len()];
        for (e, conn) in self.elements.iter().enumerate() {
            for &n in conn {
                if out[n].last() != Some(&e) {
                    out[n].push(e);
                }
            }
        }
        out
    }

    /// Node adjacency through shared elements (excluding the node itself).
    pub fn node_graph(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for conn in &self.elements {
            for &a in conn {
                for &b in conn {
                    if a != b {
                        adj[a].push(b);
                    }
                }
            }
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Elements with at least one node in the named set.
    pub fn elements_touching(&self, name: &str) -> Vec<usize> {
        let Some(set) = self.node_set(name) else {
            return Vec::new();
        };
        let mut mark = vec![false; self.nodes.len()];
        for &n in set {
            mark[n] = true;
        }
        (0..self.elements.len())
            .filter(|&e| self.elements[e].iter().any(|&n| mark[n]))
            .collect()
    }

    /// Structured `nx` by `ny` grid on `[0, lx] x [0, ly]` with sets `left`,
    /// `right`, `bottom` and `top`. Node `(i, j)` has index `j (nx + 1) + i`.
    pub fn rectangle(lx: f64, ly: f64, nx: usize, ny: usize) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidMesh("empty grid".into()));
        }
        let id = |i: usize, j: usize| j * (nx + 1) + i;
        let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
        for j in 0..=ny {
            for i in 0..=nx {
                nodes.push([lx * i as f64 / nx as f64, ly * j as f64 / ny as f64]);
            }
        }
        let mut elements = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                elements.push([id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        let mut sets = BTreeMap::new();
        sets.insert("left".into(), (0..=ny).map(|j| id(0, j)).collect());
        sets.insert("right".into(), (0..=ny).map(|j| id(nx, j)).collect());
        sets.insert("bottom".into(), (0..=nx).map(|i| id(i, 0)).collect());
        sets.insert("top".into(), (0..=nx).map(|i| id(i, ny)).collect());
        Mesh::new(nodes, elements, sets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rectangle_counts_and_sets() {
        let m = Mesh::rectangle(2.0, 1.0, 4, 2).unwrap();
        assert_eq!((m.n_nodes(), m.n_elements()), (15, 8));
        assert_eq!(m.node_set("left").unwrap(), &[0, 5, 10]);
        assert_eq!(m.node_elements()[6], vec![0, 1, 4, 5]);
        assert_eq!(m.node_graph()[0], vec![1, 5, 6]);
    }

    #[test]
    fn inverted_and_dangling_rejected() {
        let nodes = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        assert!(Mesh::new(nodes.clone(), vec![[0, 3, 2, 1]], BTreeMap::new()).is_err());
        assert!(Mesh::new(nodes.clone(), vec![[0, 1, 2, 7]], BTreeMap::new()).is_err());
        let mut sets = BTreeMap::new();
        sets.insert(String::from("hole"), vec![9]);
        assert!(Mesh::new(nodes, vec![[0, 1, 2, 3]], sets).is_err());
    }
}
