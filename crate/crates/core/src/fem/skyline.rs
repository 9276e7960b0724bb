//! Symmetric positive-definite skyline storage with an in-place Cholesky
//! factorization, plus reverse Cuthill-McKee ordering to keep the profile small.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Reverse Cuthill-McKee permutation of a graph given as adjacency lists.
/// Returns `order[new] = old`. Disconnected components are handled in turn.
pub fn reverse_cuthill_mckee(adjacency: &[Vec<usize>]) -> Vec<usize> {
    let n = adjacency.len();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let seed = (0..n)
            .filter(|&v| !visited[v])
            .min_by_key(|&v| (adjacency[v].len(), v))
            .unwrap_or(0);
        let start = pseudo_peripheral(adjacency, seed, &visited);
        let mut queue = VecDeque::new();
        visited[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = adjacency[v].iter().copied().filter(|&w| !visited[w]).collect();
            next.sort_by_key(|&w| (adjacency[w].len(), w));
            next.dedup();
            for w in next {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

fn bfs_levels(adjacency: &[Vec<usize>], start: usize, blocked: &[bool]) -> Vec<usize> {
    let mut level = vec![usize::MAX; adjacency.len()];
    let mut queue = VecDeque::new();
    level[start] = 0;
    queue.push_back(start);
    while let Some(v) = queue.pop_front() {
        for &w in &adjacency[v] {
            if !blocked[w] && level[w] == usize::MAX {
                level[w] = level[v] + 1;
                queue.push_back(w);
            }
        }
    }
    level
}

fn pseudo_peripheral(adjacency: &[Vec<usize>], seed: usize, blocked: &[bool]) -> usize {
    let mut current = seed;
    let mut depth = 0;
    for _ in 0..8 {
        let level = bfs_levels(adjacency, current, blocked);
        let ecc = level.iter().filter(|&&l| l != usize::MAX).max().copied().unwrap_or(0);
        if ecc <= depth && depth > 0 {
            break;
        }
        depth = ecc;
        current = (0..adjacency.len())
            .filter(|&v| level[v] == ecc)
            .min_by_key(|&v| (adjacency[v].len(), v))
            .unwrap_or(current);
    }
    current
}

/// Upper triangle stored column by column from the first structurally
/// nonzero row down to the diagonal.
#[derive(Debug, Clone)]
pub struct SkylineMatrix {
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<f64>,
    factored: bool,
}

impl SkylineMatrix {
    /// `first_row[j]` is the smallest row index coupled to column `j`.
    pub fn new(first_row: Vec<usize>) -> Self {
        let n = first_row.len();
        let mut start = Vec::with_capacity(n + 1);
        start.push(0);
        for (j, &f) in first_row.iter().enumerate() {
            debug_assert!(f <= j);
            let s = start[j] + (j - f + 1);
            start.push(s);
        }
        let len = start[n];
        SkylineMatrix {
            first: first_row,
            start,
            data: vec![0.0; len],
            factored: false,
        }
    }

    pub fn n(&self) -> usize {
        self.first.len()
    }

    /// Stored entries, a measure of the profile.
    pub fn profile(&self) -> usize {
        self.data.len()
    }

    fn index(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        if i < self.first[j] {
            None
        } else {
            Some(self.start[j] + (i - self.first[j]))
        }
    }

    pub fn clear(&mut self) {
        self.data.iter_mut().for_each(|v| *v = 0.0);
        self.factored = false;
    }

    /// Adds `v` at `(i, j)`; only the upper triangle is kept, so callers
    /// add each symmetric pair once with `i <= j`.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.index(i, j).expect("entry outside the skyline");
        self.data[k] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.index(i, j).map_or(0.0, |k| self.data[k])
    }

    /// `y = A x` on the unfactored matrix.
    pub fn multiply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n()];
        for j in 0..self.n() {
            let f = self.first[j];
            let col = &self.data[self.start[j]..self.start[j + 1]];
            for (o, &a) in col.iter().enumerate() {
                let i = f + o;
                y[i] += a * x[j];
                if i != j {
                    y[j] += a * x[i];
                }
            }
        }
        y
    }

    /// In-place `A = U^T U`. Fails on the first non-positive pivot.
    pub fn factor(&mut self) -> Result<()> {
        let n = self.n();
        for j in 0..n {
            let fj = self.first[j];
            let sj = self.start[j];
            for i in fj..j {
                let fi = self.first[i];
                let si = self.start[i];
                let k0 = fi.max(fj);
                let mut s = self.data[sj + (i - fj)];
                let ci = &self.data[si + (k0 - fi)..si + (i - fi)];
                let cj = &self.data[sj + (k0 - fj)..sj + (i - fj)];
                s -= ci.iter().zip(cj).map(|(a, b)| a * b).sum::<f64>();
                let d = self.data[si + (i - fi)];
                self.data[sj + (i - fj)] = s / d;
            }
            let col = &self.data[sj..sj + (j - fj)];
            let d = self.data[sj + (j - fj)] - col.iter().map(|a| a * a).sum::<f64>();
            let scale = self.data[sj + (j - fj)].abs();
            if !(d > 1e-14 * scale) || !d.is_finite() {
                return Err(Error::SingularSystem { equation: j });
            }
            self.data[sj + (j - fj)] = libm::sqrt(d);
        }
        self.factored = true;
        Ok(())
    }

    /// Solves in place after [`factor`](Self::factor).
    pub fn solve(&self, b: &mut [f64]) {
        assert!(self.factored, "solve before factor");
        let n = self.n();
        // U^T y = b
        for j in 0..n {
            let fj = self.first[j];
            let sj = self.start[j];
            let col = &self.data[sj..sj + (j - fj)];
            let s: f64 = col.iter().zip(&b[fj..j]).map(|(a, x)| a * x).sum();
            b[j] = (b[j] - s) / self.data[sj + (j - fj)];
        }
        // U x = y
        for j in (0..n).rev() {
            let fj = self.first[j];
            let sj = self.start[j];
            b[j] /= self.data[sj + (j - fj)];
            let xj = b[j];
            for (o, a) in self.data[sj..sj + (j - fj)].iter().enumerate() {
                b[fj + o] -= a * xj;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize) -> SkylineMatrix {
        let first = (0..n).map(|j| j.saturating_sub(1)).collect();
        let mut a = SkylineMatrix::new(first);
        for j in 0..n {
            a.add(j, j, 2.0);
            if j > 0 {
                a.add(j - 1, j, -1.0);
            }
        }
        a
    }

    #[test]
    fn tridiagonal_solve() {
        let n = 50;
        let mut a = laplacian_1d(n);
        let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let mut b = a.multiply(&x);
        a.factor().unwrap();
        a.solve(&mut b);
        for (u, v) in b.iter().zip(&x) {
            assert!((u - v).abs() < 1e-11);
        }
    }

    #[test]
    fn dense_profile_matches_gaussian_elimination() {
        // 4x4 SPD with a hole in the profile of column 2
        let m = [
            [4.0, 1.0, 0.0, 0.5],
            [1.0, 3.0, 0.2, 0.0],
            [0.0, 0.2, 5.0, 1.0],
            [0.5, 0.0, 1.0, 6.0],
        ];
        let mut a = SkylineMatrix::new(vec![0, 0, 1, 0]);
        for j in 0..4 {
            for i in 0..=j {
                if i >= [0, 0, 1, 0][j] {
                    a.add(i, j, m[i][j]);
                }
            }
        }
        let mut b = vec![1.0, 2.0, 3.0, 4.0];
        let b0 = b.clone();
        a.factor().unwrap();
        a.solve(&mut b);
        for i in 0..4 {
            let r: f64 = (0..4).map(|j| m[i][j] * b[j]).sum();
            assert!((r - b0[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn singular_matrix_reports_equation() {
        let mut a = SkylineMatrix::new(vec![0, 0]);
        a.add(0, 0, 1.0);
        a.add(0, 1, 1.0);
        a.add(1, 1, 1.0);
        assert_eq!(a.factor(), Err(Error::SingularSystem { equation: 1 }));
    }

    #[test]
    fn rcm_reduces_bandwidth_of_shuffled_path() {
        // a path graph numbered 0, 5, 1, 6, ... has bandwidth ~n/2
        let n = 10;
        let labels: Vec<usize> = (0..n).map(|p| if p % 2 == 0 { p / 2 } else { n / 2 + p / 2 }).collect();
        let mut adj = vec![Vec::new(); n];
        for p in 0..n - 1 {
            adj[labels[p]].push(labels[p + 1]);
            adj[labels[p + 1]].push(labels[p]);
        }
        let order = reverse_cuthill_mckee(&adj);
        let mut pos = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let bw = (0..n).flat_map(|v| adj[v].iter().map(move |&w| (v, w))).map(|(v, w)| pos[v].abs_diff(pos[w])).max().unwrap();
        assert_eq!(bw, 1);
        let mut sorted = order.clone();
        sorted.sort();
        assert_eq!(sorted, (0..n).collect::<Vec<_>>());
    }
}
