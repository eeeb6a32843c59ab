//! Isomorphism-free generation of triangle-free graphs.
//!
//! Canonical augmentation: a child `C = P + v` is kept iff `v` lies in the
//! canonical deletion orbit of `C` and the neighbourhood `N(v)` is the least
//! set in its orbit under `Aut(P)`. The deletion orbit is the orbit of the
//! vertex maximising `(degree, sum of neighbour degrees)`, ties broken by the
//! largest canonical position. New neighbourhoods are independent sets of
//! the parent, so every child is triangle-free by construction.
//!
//! Output order is depth-first from a fixed list of subtree roots, so serial
//! and parallel runs emit identical sequences.

use std::collections::{BTreeSet, VecDeque};
use std::io::BufRead;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::canon::label_rows;
use crate::graph::{graph6_decode, is_k_colorable, Graph, Graph6Error};

/// Largest order accepted by [`enumerate_triangle_free`].
pub const MAX_ENUM_ORDER: usize = 13;
/// Largest order accepted by [`brute_force_all`].
pub const MAX_BRUTE_ORDER: usize = 7;

// Triangle-free classes by order (OEIS A006785), used for cost estimates.
const KNOWN_COUNTS: [u64; 17] = [
    1,
    1,
    2,
    3,
    7,
    14,
    38,
    107,
    410,
    1897,
    12172,
    105071,
    1262180,
    20797002,
    467871369,
    14232552452,
    581460254001,
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("order {n} exceeds the enumeration cap {cap}; {estimate}")]
    TooLarge {
        n: usize,
        cap: usize,
        estimate: String,
    },
    #[error("min_chromatic {min} exceeds n+1 = {}", .n + 1)]
    BadFilter { n: usize, min: usize },
}

fn cost_estimate(n: usize) -> String {
    match KNOWN_COUNTS.get(n) {
        Some(c) => format!(
            "about {c} triangle-free classes, roughly {:.0}x the n={MAX_ENUM_ORDER} run",
            *c as f64 / KNOWN_COUNTS[MAX_ENUM_ORDER] as f64
        ),
        None => "more than 5.8e11 triangle-free classes".to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct EnumFilter {
    pub require_triangle_free: bool,
    pub min_chromatic: usize,
    pub connected_only: bool,
    pub non_bipartite_only: bool,
}

impl EnumFilter {
    pub fn triangle_free() -> Self {
        Self {
            require_triangle_free: true,
            ..Self::default()
        }
    }

    pub fn with_min_chromatic(mut self, k: usize) -> Self {
        self.min_chromatic = k;
        self
    }

    pub fn connected(mut self) -> Self {
        self.connected_only = true;
        self
    }

    pub fn non_bipartite(mut self) -> Self {
        self.non_bipartite_only = true;
        self
    }

    fn validate(&self, n: usize) -> Result<(), EnumerateError> {
        if self.min_chromatic > n + 1 {
            return Err(EnumerateError::BadFilter {
                n,
                min: self.min_chromatic,
            });
        }
        Ok(())
    }

    pub fn accepts(&self, g: &Graph) -> bool {
        if self.connected_only && !g.is_connected() {
            return false;
        }
        if self.non_bipartite_only && g.is_bipartite() {
            return false;
        }
        if self.require_triangle_free && !g.is_triangle_free() {
            return false;
        }
        self.min_chromatic == 0 || !is_k_colorable(g, self.min_chromatic - 1)
    }

    /// Triangle-free graphs with chromatic number at least 4 have at least
    /// 11 vertices (the Grötzsch graph is the smallest), so such runs below
    /// that order are empty for a known reason.
    pub fn empty_by_theory(&self, n: usize) -> Option<&'static str> {
        if self.min_chromatic > n {
            Some("chromatic number cannot exceed the order")
        } else if self.min_chromatic >= 4 && n < 11 {
            Some("triangle-free graphs with chromatic number >= 4 need at least 11 vertices")
        } else if (self.min_chromatic >= 3 || self.non_bipartite_only) && n < 5 {
            Some("a triangle-free non-bipartite graph contains an odd cycle of length >= 5")
        } else {
            None
        }
    }
}

// ---------------------------------------------------------------------------
// Augmentation
// ---------------------------------------------------------------------------

const ROWS: usize = 16;

#[derive(Clone, Copy)]
struct Small {
    n: usize,
    rows: [u32; ROWS],
}

impl Small {
    fn empty() -> Self {
        Self {
            n: 0,
            rows: [0; ROWS],
        }
    }

    fn to_graph(self) -> Graph {
        Graph::from_small_rows(self.n, &self.rows[..self.n])
    }
}

fn image(set: u32, gen: &[u8]) -> u32 {
    let mut out = 0;
    let mut rest = set;
    while rest != 0 {
        let u = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        out |= 1 << gen[u];
    }
    out
}

/// `set` is the numerically least member of its orbit under `gens`.
fn is_orbit_min(set: u32, gens: &[[u8; 32]], scratch: &mut Vec<u32>) -> bool {
    scratch.clear();
    scratch.push(set);
    let mut head = 0;
    while head < scratch.len() {
        let x = scratch[head];
        head += 1;
        for g in gens {
            let y = image(x, g);
            if y < set {
                return false;
            }
            if !scratch.contains(&y) {
                scratch.push(y);
            }
        }
    }
    true
}

struct Expander<'p> {
    parent: &'p Small,
    degrees: [u32; ROWS],
    max_degree: u32,
    gens: Vec<[u8; 32]>,
    scratch: Vec<u32>,
}

impl<'p> Expander<'p> {
    fn new(parent: &'p Small) -> Self {
        let m = parent.n;
        let mut degrees = [0; ROWS];
        for (d, row) in degrees.iter_mut().zip(&parent.rows).take(m) {
            *d = row.count_ones();
        }
        let max_degree = degrees[..m].iter().copied().max().unwrap_or(0);
        let gens = if m > 1 {
            label_rows(m, &parent.rows[..m]).raw_generators().to_vec()
        } else {
            Vec::new()
        };
        Self {
            parent,
            degrees,
            max_degree,
            gens,
            scratch: Vec::new(),
        }
    }

    fn run(&mut self, emit: &mut impl FnMut(Small)) {
        let m = self.parent.n;
        let all = if m == 0 { 0 } else { (1u32 << m) - 1 };
        self.sets(0, 0, all, emit);
    }

    fn sets(&mut self, set: u32, size: u32, cand: u32, emit: &mut impl FnMut(Small)) {
        if size + cand.count_ones() < self.max_degree {
            return;
        }
        if size >= self.max_degree {
            if let Some(child) = self.try_child(set, size) {
                emit(child);
            }
        }
        let mut rest = cand;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            // only vertices above v remain candidates, minus v's neighbours
            let next = rest & !self.parent.rows[v as usize];
            self.sets(set | (1 << v), size + 1, next, emit);
        }
    }

    fn try_child(&mut self, set: u32, k: u32) -> Option<Small> {
        let m = self.parent.n;
        let new_bit = 1u32 << m;
        let mut child = *self.parent;
        child.n = m + 1;
        let mut degrees = [0u32; ROWS];
        for u in 0..m {
            let inside = (set >> u) & 1;
            degrees[u] = self.degrees[u] + inside;
            if degrees[u] > k {
                return None;
            }
            if inside == 1 {
                child.rows[u] |= new_bit;
            }
        }
        child.rows[m] = set;
        degrees[m] = k;

        let neighbour_sum = |row: u32| -> u32 {
            let mut s = 0;
            let mut rest = row;
            while rest != 0 {
                s += degrees[rest.trailing_zeros() as usize];
                rest &= rest - 1;
            }
            s
        };
        let own = neighbour_sum(set);
        let mut tied = 1u32 << m;
        for u in 0..m {
            if degrees[u] == k {
                let s = neighbour_sum(child.rows[u]);
                if s > own {
                    return None;
                }
                if s == own {
                    tied |= 1 << u;
                }
            }
        }

        if !self.gens.is_empty() && !is_orbit_min(set, &self.gens, &mut self.scratch) {
            return None;
        }
        if tied == new_bit {
            return Some(child);
        }
        let lab = label_rows(m + 1, &child.rows[..m + 1]);
        let mut w = m;
        let mut best_pos = 0;
        let mut rest = tied;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let pos = lab.position(u);
            if pos >= best_pos {
                best_pos = pos;
                w = u;
            }
        }
        lab.same_orbit(m, w).then_some(child)
    }
}

fn expand(parent: &Small, emit: &mut impl FnMut(Small)) {
    Expander::new(parent).run(emit);
}

fn dfs(node: &Small, target: usize, emit: &mut impl FnMut(Small)) {
    if node.n == target {
        emit(*node);
        return;
    }
    expand(node, &mut |child| dfs(&child, target, emit));
}

/// Every class at order `level`, in generation order.
fn level_classes(level: usize) -> Vec<Small> {
    let mut out = Vec::new();
    dfs(&Small::empty(), level, &mut |g| out.push(g));
    out
}

fn split_level(n: usize) -> usize {
    n.saturating_sub(3).min(10)
}

// ---------------------------------------------------------------------------
// Public streams
// ---------------------------------------------------------------------------

/// Triangle-free classes of one order passing a filter, one representative
/// each. Iterate for a lazy stream, or use [`TriangleFreeEnumerator::par_fold`].
#[derive(Debug, Clone)]
pub struct TriangleFreeEnumerator {
    n: usize,
    filter: EnumFilter,
}

impl TriangleFreeEnumerator {
    pub fn new(n: usize, filter: EnumFilter) -> Result<Self, EnumerateError> {
        if n > MAX_ENUM_ORDER {
            return Err(EnumerateError::TooLarge {
                n,
                cap: MAX_ENUM_ORDER,
                estimate: cost_estimate(n),
            });
        }
        filter.validate(n)?;
        Ok(Self { n, filter })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn filter(&self) -> EnumFilter {
        self.filter
    }

    fn roots(&self) -> Vec<Small> {
        level_classes(split_level(self.n))
    }

    /// Folds each subtree into its own accumulator on the current rayon pool.
    /// The accumulators come back in subtree order, so merging them left to
    /// right gives the same answer for any worker count.
    pub fn par_fold<A, I, F>(&self, init: I, fold: F) -> Vec<A>
    where
        A: Send,
        I: Fn() -> A + Sync,
        F: Fn(&mut A, Graph) + Sync,
    {
        let n = self.n;
        let filter = self.filter;
        self.roots()
            .par_iter()
            .map(|root| {
                let mut acc = init();
                dfs(root, n, &mut |g| {
                    let g = g.to_graph();
                    if filter.accepts(&g) {
                        fold(&mut acc, g);
                    }
                });
                acc
            })
            .collect()
    }

    /// Number of classes before filtering.
    pub fn count_unfiltered(&self) -> u64 {
        let n = self.n;
        self.roots()
            .par_iter()
            .map(|root| {
                let mut c = 0u64;
                dfs(root, n, &mut |_| c += 1);
                c
            })
            .sum()
    }
}

impl IntoIterator for TriangleFreeEnumerator {
    type Item = Graph;
    type IntoIter = TriangleFreeStream;

    fn into_iter(self) -> TriangleFreeStream {
        let roots = self.roots();
        TriangleFreeStream {
            n: self.n,
            filter: self.filter,
            roots,
            next_root: 0,
            buffer: VecDeque::new(),
        }
    }
}

pub struct TriangleFreeStream {
    n: usize,
    filter: EnumFilter,
    roots: Vec<Small>,
    next_root: usize,
    buffer: VecDeque<Graph>,
}

impl Iterator for TriangleFreeStream {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        while self.buffer.is_empty() {
            let root = self.roots.get(self.next_root)?;
            self.next_root += 1;
            let (n, filter, buffer) = (self.n, self.filter, &mut self.buffer);
            dfs(root, n, &mut |g| {
                let g = g.to_graph();
                if filter.accepts(&g) {
                    buffer.push_back(g);
                }
            });
        }
        self.buffer.pop_front()
    }
}

/// Stream of triangle-free classes of order `n` passing `filter`.
pub fn enumerate_triangle_free(
    n: usize,
    filter: EnumFilter,
) -> Result<TriangleFreeStream, EnumerateError> {
    Ok(TriangleFreeEnumerator::new(n, filter)?.into_iter())
}

/// One canonical representative per isomorphism class of all graphs of
/// order `n`, by labelling every one of the `2^(n choose 2)` labelled graphs.
/// Sorted by canonical adjacency rows.
pub fn brute_force_all(n: usize) -> Result<Vec<Graph>, EnumerateError> {
    if n > MAX_BRUTE_ORDER {
        return Err(EnumerateError::TooLarge {
            n,
            cap: MAX_BRUTE_ORDER,
            estimate: format!("2^{} labelled graphs", n * n.saturating_sub(1) / 2),
        });
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
    let mut classes: BTreeSet<Vec<u32>> = BTreeSet::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let mut rows = [0u32; ROWS];
        for (k, &(u, v)) in pairs.iter().enumerate() {
            if (mask >> k) & 1 == 1 {
                rows[u] |= 1 << v;
                rows[v] |= 1 << u;
            }
        }
        let lab = label_rows(n, &rows[..n]);
        classes.insert(lab.canonical_rows().to_vec());
    }
    Ok(classes
        .into_iter()
        .map(|rows| Graph::from_small_rows(n, &rows))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {source}")]
pub struct IngestError {
    pub line: usize,
    #[source]
    pub source: Graph6Error,
}

/// Decodes graph6 lines in input order. Blank lines are skipped; a bad line
/// yields an error carrying its 1-based line number and the stream goes on.
pub fn ingest_graph6<R: BufRead>(reader: R) -> impl Iterator<Item = Result<Graph, IngestError>> {
    reader.lines().enumerate().filter_map(|(idx, line)| {
        let line = match line {
            Ok(l) => l,
            Err(_) => {
                return Some(Err(IngestError {
                    line: idx + 1,
                    source: Graph6Error::BadLength { offset: 0 },
                }))
            }
        };
        if line.trim().is_empty() {
            return None;
        }
        Some(graph6_decode(line.trim()).map_err(|source| IngestError {
            line: idx + 1,
            source,
        }))
    })
}
