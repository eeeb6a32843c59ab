//! Simple undirected graphs stored as rows of packed bits.
//!
//! A [`Graph`] is immutable once built. Row `v` holds the neighbourhood of
//! vertex `v`; rows are `ceil(n / 64)` words long, so the same type serves
//! 11-vertex base graphs and 500-vertex blow-ups.

pub mod canon;
pub mod color;
pub mod graph6;

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

pub use canon::{automorphism_orbits, canonical_form, canonical_labeling, CanonError, Labeling};
pub use color::{chromatic_number, is_k_colorable};
pub use graph6::{graph6_decode, graph6_encode, Graph6Error};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge ({u},{v}) has an endpoint outside 0..{n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
    #[error("edge ({u},{v}) listed more than once")]
    DuplicateEdge { u: usize, v: usize },
    #[error("self-loop at vertex {v}")]
    SelfLoop { v: usize },
}

/// Order plus a list of unordered pairs. Pairs are normalised to `u < v`
/// when turned into a [`Graph`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl EdgeList {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Self {
        Self { n, edges }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    stride: usize,
    bits: Vec<u64>,
}

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let stride = words_for(n);
        Self {
            n,
            stride,
            bits: vec![0; n * stride],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.set_edge(u, v);
            }
        }
        g
    }

    pub fn from_edges(list: &EdgeList) -> Result<Self, GraphError> {
        Self::from_pairs(list.n, &list.edges)
    }

    pub fn from_pairs(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n);
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(GraphError::VertexOutOfRange { u: a, v: b, n });
            }
            if a == b {
                return Err(GraphError::SelfLoop { v: a });
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if g.has_edge(u, v) {
                return Err(GraphError::DuplicateEdge { u, v });
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from small rows (`rows[v]` bit `u` set iff `u ~ v`).
    /// Caller guarantees symmetry and an empty diagonal.
    pub(crate) fn from_small_rows(n: usize, rows: &[u32]) -> Self {
        debug_assert!(n <= 32);
        let mut g = Self::empty(n);
        for (v, &row) in rows.iter().enumerate().take(n) {
            g.bits[v * g.stride] = u64::from(row);
        }
        g
    }

    /// Rows packed into `u32`, available while `n <= 32`.
    pub(crate) fn small_rows(&self) -> Option<Vec<u32>> {
        if self.n > 32 {
            return None;
        }
        Some(
            (0..self.n)
                .map(|v| self.bits[v * self.stride] as u32)
                .collect(),
        )
    }

    fn set_edge(&mut self, u: usize, v: usize) {
        self.bits[u * self.stride + v / 64] |= 1 << (v % 64);
        self.bits[v * self.stride + u / 64] |= 1 << (u % 64);
    }

    fn clear_edge(&mut self, u: usize, v: usize) {
        self.bits[u * self.stride + v / 64] &= !(1 << (v % 64));
        self.bits[v * self.stride + u / 64] &= !(1 << (u % 64));
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.bits
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        (self.bits[u * self.stride + v / 64] >> (v % 64)) & 1 == 1
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.stride..(v + 1) * self.stride]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v).iter().enumerate().flat_map(|(k, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + b)
                }
            })
        })
    }

    /// Edges as `(u, v)` with `u < v`, in row order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.size());
        for u in 0..self.n {
            out.extend(self.neighbors(u).filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub fn edge_list(&self) -> EdgeList {
        EdgeList::new(self.n, self.edges())
    }

    pub fn common_neighbor_count(&self, u: usize, v: usize) -> usize {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// No three mutually adjacent vertices: every edge has disjoint endpoint rows.
    pub fn is_triangle_free(&self) -> bool {
        for u in 0..self.n {
            for v in self.neighbors(u).filter(|&v| v > u) {
                if self.row(u).iter().zip(self.row(v)).any(|(a, b)| a & b != 0) {
                    return false;
                }
            }
        }
        true
    }

    /// Copy with the edge `uv` added (no-op if present).
    pub fn with_edge(&self, u: usize, v: usize) -> Self {
        assert!(u < self.n && v < self.n && u != v);
        let mut g = self.clone();
        g.set_edge(u, v);
        g
    }

    pub fn without_edge(&self, u: usize, v: usize) -> Self {
        let mut g = self.clone();
        g.clear_edge(u, v);
        g
    }

    /// Subgraph induced on `keep`, relabelled `0..keep.len()` in the given order.
    pub fn induced(&self, keep: &[usize]) -> Self {
        let mut g = Self::empty(keep.len());
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    g.set_edge(i, j);
                }
            }
        }
        g
    }

    /// `G - {u}`; vertices above `u` shift down by one.
    pub fn without_vertex(&self, u: usize) -> Self {
        let keep: Vec<usize> = (0..self.n).filter(|&v| v != u).collect();
        self.induced(&keep)
    }

    /// Image under `perm`: vertex `v` of `self` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut g = Self::empty(self.n);
        for (u, v) in self.edges() {
            g.set_edge(perm[u], perm[v]);
        }
        g
    }

    pub fn disjoint_union(&self, other: &Self) -> Self {
        let mut g = Self::empty(self.n + other.n);
        for (u, v) in self.edges() {
            g.set_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.set_edge(self.n + u, self.n + v);
        }
        g
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// BFS 2-colouring; `None` when an odd cycle exists.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let mut side = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in self.neighbors(u) {
                    if side[v] == u8::MAX {
                        side[v] = 1 - side[u];
                        queue.push_back(v);
                    } else if side[v] == side[u] {
                        return None;
                    }
                }
            }
        }
        Some(side)
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Graph(n={}, e={}, {:?})",
            self.n,
            self.size(),
            self.edges()
        )
    }
}
