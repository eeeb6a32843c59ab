//! Named graphs and blow-up families with frozen vertex labellings.
//!
//! Grötzsch graph (`F1`), index → name:
//!
//! | 0 | 1 | 2 | 3 | 4 | 5 | 6 | 7 | 8 | 9 | 10 |
//! |---|---|---|---|---|---|---|---|---|---|----|
//! | v13 | v23 | v1 | v2 | x | u1 | u2 | u3 | w13 | w23 | y |
//!
//! `F2`: `v13 v23 v2 x u1 u2 u3 w13 w23 w2 y`;
//! `F3`: `v13 v23 v1 w2 x u1 u2 u3 w13 w23 y`.
//! Both have 11 vertices and ship as edge-list data files (`data/*.edges`).
//!
//! `sk_ab(a, b)`: parts `0..a` and `a..a+b`; the edge `(0, a)` is subdivided
//! by the new vertex `a+b`. `kab_circ_k3(a, b)`: vertex `a` (in the part of
//! size `b`) is shared with the triangle `{a, a+b, a+b+1}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blowup::BlowupSpec;
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("empty hub class: t must be at least 1")]
    EmptyHubClass,
    #[error("split {split:?} sums to {found}, required sum is {required}")]
    SplitSum {
        split: [u64; 3],
        found: u64,
        required: u64,
    },
    #[error("split {split:?} has an empty class; every entry must be at least 1")]
    EmptySplitClass { split: [u64; 3] },
    #[error("order {n} is below the minimum {min} for this family")]
    OrderTooSmall { n: u64, min: u64 },
    #[error("r = 0 parts cannot hold {n} vertices")]
    ZeroParts { n: usize },
    #[error("part sizes must be at least 1 (got a={a}, b={b})")]
    ZeroPart { a: usize, b: usize },
    #[error("malformed data file: {0}")]
    Data(String),
}

// ---------------------------------------------------------------------------
// Grötzsch graph
// ---------------------------------------------------------------------------

pub const GROTZSCH_NAMES: [&str; 11] = [
    "v13", "v23", "v1", "v2", "x", "u1", "u2", "u3", "w13", "w23", "y",
];

pub mod grotzsch_vertex {
    pub const V13: usize = 0;
    pub const V23: usize = 1;
    pub const V1: usize = 2;
    pub const V2: usize = 3;
    pub const X: usize = 4;
    pub const U1: usize = 5;
    pub const U2: usize = 6;
    pub const U3: usize = 7;
    pub const W13: usize = 8;
    pub const W23: usize = 9;
    pub const Y: usize = 10;
}

const GROTZSCH_EDGES: [(&str, &str); 20] = [
    ("v13", "u1"),
    ("v1", "u1"),
    ("v23", "u2"),
    ("v2", "u2"),
    ("u1", "u2"),
    ("u1", "w13"),
    ("u2", "w23"),
    ("v13", "y"),
    ("v23", "y"),
    ("v1", "y"),
    ("v2", "y"),
    ("x", "y"),
    ("x", "w13"),
    ("x", "w23"),
    ("v13", "u3"),
    ("v23", "u3"),
    ("w13", "u3"),
    ("w23", "u3"),
    ("v2", "w13"),
    ("v1", "w23"),
];

fn named_graph(names: &[&str], edges: &[(&str, &str)]) -> Result<Graph, ConstructionError> {
    let index = |s: &str| {
        names
            .iter()
            .position(|&m| m == s)
            .ok_or_else(|| ConstructionError::Data(format!("unknown vertex {s}")))
    };
    let pairs = edges
        .iter()
        .map(|&(a, b)| Ok((index(a)?, index(b)?)))
        .collect::<Result<Vec<_>, ConstructionError>>()?;
    Graph::from_pairs(names.len(), &pairs).map_err(|e| ConstructionError::Data(e.to_string()))
}

/// The Grötzsch graph in the labelling of the module table.
pub fn grotzsch() -> Graph {
    named_graph(&GROTZSCH_NAMES, &GROTZSCH_EDGES).expect("built-in edge list is valid")
}

// ---------------------------------------------------------------------------
// Data-file bases
// ---------------------------------------------------------------------------

pub const F2_DATA: &str = include_str!("../data/f2.edges");
pub const F3_DATA: &str = include_str!("../data/f3.edges");
pub const F2_SHA256: &str = "0730db6c34f2f574bdccccf58d713168bfe6bbffa01b2e2e19f3fb51ad1f30e7";
pub const F3_SHA256: &str = "8a22dce50b0d3809bf378adb182ddede88ae46df4acd5879d9eb036e79ec913a";

/// A base graph read from the `vertices ...` / `a b` edge-list format.
#[derive(Debug, Clone)]
pub struct NamedBase {
    pub names: Vec<String>,
    pub graph: Graph,
}

impl NamedBase {
    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

pub fn parse_named_edges(text: &str) -> Result<NamedBase, ConstructionError> {
    let mut names: Option<Vec<String>> = None;
    let mut edges = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields[0] == "vertices" {
            names = Some(fields[1..].iter().map(|s| s.to_string()).collect());
        } else if fields.len() == 2 {
            edges.push((fields[0].to_string(), fields[1].to_string()));
        } else {
            return Err(ConstructionError::Data(format!("line {}: {raw}", k + 1)));
        }
    }
    let names = names.ok_or_else(|| ConstructionError::Data("missing vertices line".into()))?;
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let edge_refs: Vec<(&str, &str)> = edges
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    let graph = named_graph(&name_refs, &edge_refs)?;
    Ok(NamedBase { names, graph })
}

pub fn f2_base() -> NamedBase {
    parse_named_edges(F2_DATA).expect("bundled F2 data parses")
}

pub fn f3_base() -> NamedBase {
    parse_named_edges(F3_DATA).expect("bundled F3 data parses")
}

// ---------------------------------------------------------------------------
// Blow-up families
// ---------------------------------------------------------------------------

fn xy_blowup(base: &NamedBase, s: u64, t: u64) -> Result<BlowupSpec, ConstructionError> {
    if t == 0 {
        return Err(ConstructionError::EmptyHubClass);
    }
    let mut sizes = vec![1u64; base.graph.order()];
    sizes[base.index("x").expect("base has x")] = s;
    sizes[base.index("y").expect("base has y")] = t;
    Ok(BlowupSpec::new(base.graph.clone(), sizes))
}

/// `F1(s, t)`: the Grötzsch graph with `x` and `y` replaced by independent
/// sets of sizes `s` and `t`. `s = 0` drops the `x` class.
pub fn f1_st(s: u64, t: u64) -> Result<BlowupSpec, ConstructionError> {
    if t == 0 {
        return Err(ConstructionError::EmptyHubClass);
    }
    let mut sizes = vec![1u64; 11];
    sizes[grotzsch_vertex::X] = s;
    sizes[grotzsch_vertex::Y] = t;
    Ok(BlowupSpec::new(grotzsch(), sizes))
}

/// Closed-form edge count of `F1(s, t)`.
pub fn f1_st_edge_count(s: u64, t: u64) -> u64 {
    13 + 2 * s + 4 * t + s * t
}

/// The parameters `(⌊(n−11)/2⌋, ⌈(n−7)/2⌉)` of the balanced `F1(s, t)`.
pub fn f1_balanced_params(n: u64) -> Result<(u64, u64), ConstructionError> {
    if n < 11 {
        return Err(ConstructionError::OrderTooSmall { n, min: 11 });
    }
    Ok(((n - 11) / 2, (n - 7).div_ceil(2)))
}

/// `F1(n)`: `v13, v1, v23` become classes of sizes `split`, `y` becomes `W`.
/// Normally `Σ split = ⌊(n−7)/2⌋` and `|W| = ⌈(n−7)/2⌉`; `swapped` exchanges
/// floor and ceiling.
pub fn f1_n(n: u64, split: [u64; 3], swapped: bool) -> Result<BlockSplit, ConstructionError> {
    if n < 11 {
        return Err(ConstructionError::OrderTooSmall { n, min: 11 });
    }
    let (lo, hi) = ((n - 7) / 2, (n - 7).div_ceil(2));
    let (required, w) = if swapped { (hi, lo) } else { (lo, hi) };
    let found: u64 = split.iter().sum();
    if found != required {
        return Err(ConstructionError::SplitSum {
            split,
            found,
            required,
        });
    }
    if split.contains(&0) {
        return Err(ConstructionError::EmptySplitClass { split });
    }
    let mut sizes = vec![1u64; 11];
    sizes[grotzsch_vertex::V13] = split[0];
    sizes[grotzsch_vertex::V1] = split[1];
    sizes[grotzsch_vertex::V23] = split[2];
    sizes[grotzsch_vertex::Y] = w;
    Ok(BlockSplit {
        split,
        spec: BlowupSpec::new(grotzsch(), sizes),
    })
}

/// An `F1(n)` member together with the split that produced it.
#[derive(Debug, Clone)]
pub struct BlockSplit {
    pub split: [u64; 3],
    pub spec: BlowupSpec,
}

/// Closed-form edge count of `F1(n)` for split sum `a` and `|W| = b`.
pub fn f1_n_edge_count(a: u64, b: u64) -> u64 {
    9 + 2 * a + a * b + 2 * b
}

/// Every split of `F1(n)` with entries ≥ 1, in lexicographic order.
pub fn f1_n_splits(n: u64, swapped: bool) -> Vec<[u64; 3]> {
    if n < 11 {
        return Vec::new();
    }
    let sum = if swapped {
        (n - 7).div_ceil(2)
    } else {
        (n - 7) / 2
    };
    let mut out = Vec::new();
    for a in 1..sum {
        for b in 1..sum.saturating_sub(a) {
            let c = sum - a - b;
            if c >= 1 {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// `F2(s, t)`: blow-up of the 11-vertex base `F2` at `x` (size `s`) and `y` (size `t`).
pub fn f2_st(s: u64, t: u64) -> Result<BlowupSpec, ConstructionError> {
    xy_blowup(&f2_base(), s, t)
}

/// `F3(s, t)`: blow-up of the 11-vertex base `F3` at `x` and `y`.
pub fn f3_st(s: u64, t: u64) -> Result<BlowupSpec, ConstructionError> {
    xy_blowup(&f3_base(), s, t)
}

// ---------------------------------------------------------------------------
// Turán and bipartite-derived graphs
// ---------------------------------------------------------------------------

/// Part sizes of `T(n, r)`, largest first.
pub fn turan_parts(n: usize, r: usize) -> Vec<usize> {
    (0..r).map(|i| n / r + usize::from(i < n % r)).collect()
}

/// Complete multipartite graph with the given part sizes; parts are
/// consecutive index ranges.
pub fn complete_multipartite(parts: &[usize]) -> Graph {
    let mut part_of = Vec::new();
    for (p, &size) in parts.iter().enumerate() {
        part_of.extend(std::iter::repeat_n(p, size));
    }
    let n = part_of.len();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if part_of[u] != part_of[v] {
                edges.push((u, v));
            }
        }
    }
    Graph::from_pairs(n, &edges).expect("multipartite pairs are valid")
}

pub fn turan(n: usize, r: usize) -> Result<Graph, ConstructionError> {
    if r == 0 {
        return if n == 0 {
            Ok(Graph::empty(0))
        } else {
            Err(ConstructionError::ZeroParts { n })
        };
    }
    Ok(complete_multipartite(&turan_parts(n, r)))
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    complete_multipartite(&[a, b])
}

/// `K(a,b)` with the edge `(0, a)` subdivided by vertex `a+b`.
pub fn sk_ab(a: usize, b: usize) -> Result<Graph, ConstructionError> {
    if a == 0 || b == 0 {
        return Err(ConstructionError::ZeroPart { a, b });
    }
    let mid = a + b;
    let mut edges: Vec<(usize, usize)> = complete_bipartite(a, b)
        .edges()
        .into_iter()
        .filter(|&e| e != (0, a))
        .collect();
    edges.push((0, mid));
    edges.push((a, mid));
    Ok(Graph::from_pairs(a + b + 1, &edges).expect("subdivision pairs are valid"))
}

/// `K(a,b)` sharing vertex `a` (part of size `b`) with a triangle.
pub fn kab_circ_k3(a: usize, b: usize) -> Result<Graph, ConstructionError> {
    if b == 0 {
        return Err(ConstructionError::ZeroPart { a, b });
    }
    let (p, q) = (a + b, a + b + 1);
    let mut edges = complete_bipartite(a, b).edges();
    edges.extend([(a, p), (a, q), (p, q)]);
    Ok(Graph::from_pairs(a + b + 2, &edges).expect("triangle pairs are valid"))
}

// ---------------------------------------------------------------------------
// Family dispatch
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyParams {
    Grotzsch,
    F1St {
        s: u64,
        t: u64,
    },
    F1N {
        n: u64,
        split: [u64; 3],
        swapped: bool,
    },
    F2St {
        s: u64,
        t: u64,
    },
    F3St {
        s: u64,
        t: u64,
    },
    Turan {
        n: usize,
        r: usize,
    },
    CompleteBipartite {
        a: usize,
        b: usize,
    },
    SkAb {
        a: usize,
        b: usize,
    },
    KabCircK3 {
        a: usize,
        b: usize,
    },
}

impl FamilyParams {
    pub fn build(&self) -> Result<Graph, ConstructionError> {
        Ok(match *self {
            Self::Grotzsch => grotzsch(),
            Self::F1St { s, t } => f1_st(s, t)?.expand(),
            Self::F1N { n, split, swapped } => f1_n(n, split, swapped)?.spec.expand(),
            Self::F2St { s, t } => f2_st(s, t)?.expand(),
            Self::F3St { s, t } => f3_st(s, t)?.expand(),
            Self::Turan { n, r } => turan(n, r)?,
            Self::CompleteBipartite { a, b } => complete_bipartite(a, b),
            Self::SkAb { a, b } => sk_ab(a, b)?,
            Self::KabCircK3 { a, b } => kab_circ_k3(a, b)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::chromatic_number;
    use rand::{Rng, SeedableRng};
    use sha2::{Digest, Sha256};

    #[test]
    fn grotzsch_shape() {
        let g = grotzsch();
        assert_eq!((g.order(), g.size()), (11, 20));
        let mut d = g.degrees();
        d.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(d, vec![5, 4, 4, 4, 4, 4, 3, 3, 3, 3, 3]);
        assert_eq!(g.degree(grotzsch_vertex::Y), 5);
        assert!(g.is_triangle_free());
        assert_eq!(chromatic_number(&g), 4);
        use grotzsch_vertex::*;
        for (a, b) in [(U1, U2), (U2, W23), (W23, U3), (U3, W13), (W13, U1)] {
            assert!(g.has_edge(a, b));
        }
        let ring = g.induced(&[U1, U2, U3, W13, W23]);
        assert_eq!(ring.size(), 5);
        assert!(ring.degrees().iter().all(|&d| d == 2));
    }

    #[test]
    fn data_files_match_checksums() {
        assert_eq!(hex::encode(Sha256::digest(F2_DATA.as_bytes())), F2_SHA256);
        assert_eq!(hex::encode(Sha256::digest(F3_DATA.as_bytes())), F3_SHA256);
    }

    #[test]
    fn data_file_bases_are_structurally_sound() {
        let f2 = f2_base();
        assert_eq!((f2.graph.order(), f2.graph.size()), (11, 20));
        assert!(f2.graph.is_triangle_free());
        assert!(f2.graph.is_connected());
        let f3 = f3_base();
        assert_eq!((f3.graph.order(), f3.graph.size()), (11, 21));
        assert!(f3.graph.is_triangle_free());
        let (v1, w2, x) = (
            f3.index("v1").unwrap(),
            f3.index("w2").unwrap(),
            f3.index("x").unwrap(),
        );
        assert!(f3.graph.has_edge(v1, w2) && f3.graph.has_edge(w2, x));
        assert!(chromatic_number(&f3.graph) <= 3);
    }

    #[test]
    fn f2_f3_blowups() {
        let g2 = f2_st(1, 1).unwrap().expand();
        assert!(g2.is_triangle_free());
        assert!(chromatic_number(&f3_st(1, 1).unwrap().expand()) <= 3);
        for (s, t) in [(0, 1), (3, 4), (5, 2)] {
            assert_eq!(f2_st(s, t).unwrap().expand().order() as u64, 9 + s + t);
            assert!(f3_st(s, t).unwrap().expand().is_triangle_free());
        }
        assert_eq!(f2_st(1, 0).unwrap_err(), ConstructionError::EmptyHubClass);
    }

    #[test]
    fn f1_st_examples() {
        assert_eq!(f1_st(1, 1).unwrap().expand(), grotzsch());
        let g = f1_st(2, 4).unwrap().expand();
        assert_eq!((g.order(), g.size()), (15, 41));
        assert_eq!(
            f1_st(3, 0).unwrap_err().to_string(),
            "empty hub class: t must be at least 1"
        );
        let g = f1_st(0, 2).unwrap().expand();
        assert_eq!(g.order(), 11);
        assert!(g.is_triangle_free());
    }

    #[test]
    fn f1_st_edge_formula_on_seeded_sample() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let (s, t) = (rng.gen_range(0..30u64), rng.gen_range(1..30u64));
            let g = f1_st(s, t).unwrap().expand();
            assert_eq!(g.size() as u64, f1_st_edge_count(s, t));
            assert_eq!(g.order() as u64, 9 + s + t);
        }
    }

    #[test]
    fn f1_st_chromatic_number_in_small_range() {
        for s in 0..=5 {
            for t in 1..=5 {
                let g = f1_st(s, t).unwrap().expand();
                assert!(g.is_triangle_free());
                // Grötzsch is vertex-critical: dropping the x class leaves χ = 3
                let expected = if s == 0 { 3 } else { 4 };
                assert_eq!(chromatic_number(&g), expected, "s={s} t={t}");
            }
        }
    }

    #[test]
    fn balanced_f1_hits_edge_bound_for_odd_n() {
        for n in (11u64..=61).step_by(2) {
            let (s, t) = f1_balanced_params(n).unwrap();
            assert_eq!(4 * f1_st_edge_count(s, t), n * n - 6 * n + 29);
        }
    }

    #[test]
    fn f1_n_examples() {
        let g = f1_n(15, [2, 1, 1], false).unwrap().spec.expand();
        assert_eq!((g.order(), g.size()), (15, 41));
        assert_eq!(f1_n_edge_count(4, 4), 41);
        let e = f1_n(11, [1, 1, 1], false).unwrap_err();
        assert_eq!(
            e,
            ConstructionError::SplitSum {
                split: [1, 1, 1],
                found: 3,
                required: 2
            }
        );
        assert!(matches!(
            f1_n(13, [3, 0, 0], false),
            Err(ConstructionError::EmptySplitClass { .. })
        ));
        let g = f1_n(13, [1, 1, 1], false).unwrap().spec.expand();
        assert_eq!(g.order(), 13);
        assert!(g.is_triangle_free());
    }

    #[test]
    fn f1_n_edge_count_ignores_split() {
        for swapped in [false, true] {
            let splits = f1_n_splits(17, swapped);
            assert!(splits.len() >= 2);
            let counts: Vec<usize> = splits
                .iter()
                .map(|&s| f1_n(17, s, swapped).unwrap().spec.expand().size())
                .collect();
            assert!(counts.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn turan_and_bipartite() {
        let t = turan(5, 2).unwrap();
        assert_eq!(t.size(), 6);
        assert_eq!(turan(10, 2).unwrap().size(), 25);
        assert_eq!(turan(6, 3).unwrap().size(), 12);
        assert!(turan(3, 0).is_err());
        assert_eq!(turan(0, 0).unwrap().order(), 0);
        for n in 0..20 {
            assert_eq!(turan(n, 2).unwrap().size(), n * n / 4);
        }
        assert_eq!(complete_bipartite(2, 3).size(), 6);
    }

    #[test]
    fn subdivided_and_glued() {
        let c5 = sk_ab(2, 2).unwrap();
        assert_eq!((c5.order(), c5.size()), (5, 5));
        assert!(c5.is_triangle_free() && !c5.is_bipartite());
        assert!(c5.degrees().iter().all(|&d| d == 2));
        let p = sk_ab(1, 1).unwrap();
        assert_eq!((p.order(), p.size()), (3, 2));
        let sk = sk_ab(4, 3).unwrap();
        assert_eq!((sk.order(), sk.size()), (8, 13));
        let k = kab_circ_k3(2, 2).unwrap();
        assert_eq!((k.order(), k.size()), (6, 7));
        assert!(!k.is_triangle_free());
        assert!(sk_ab(0, 3).is_err() && kab_circ_k3(2, 0).is_err());
    }
}
