//! Certified Perron roots of non-negative matrices and graphs.
//!
//! For an irreducible non-negative `M` and any positive vector `v`,
//! `min_i (Mv)_i / v_i ≤ ρ(M) ≤ max_i (Mv)_i / v_i`. The certifier produces
//! such vectors by shifted power iteration in integer arithmetic, so every
//! interval it reports is valid regardless of how far the iteration got.

mod compare;

pub use compare::{
    compare_rho, compare_rho_graphs, compare_sources, ComparisonOutcome, MatrixSource, PerronSource,
};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exact::{char_poly, parse_rational, to_decimal, Poly, Q};
use crate::graph::Graph;

/// Largest dimension accepted by exact characteristic polynomials.
pub const CHAR_POLY_MAX_DIM: usize = 64;
/// Default iteration budget for one certification.
pub const DEFAULT_MAX_ITERATIONS: usize = 20_000;
/// Digits used when printing interval endpoints.
pub const REPORT_DIGITS: usize = 15;

const START_PRECISION: u64 = 64;
const MAX_PRECISION: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("matrix is not square (row {row} has {len} entries, expected {dim})")]
    NotSquare { row: usize, len: usize, dim: usize },
    #[error("entry ({i},{j}) is negative")]
    Negative { i: usize, j: usize },
    #[error("matrix has dimension 0")]
    Empty,
    #[error("matrix is reducible")]
    Reducible,
    #[error("dimension {dim} exceeds the exact-arithmetic cap {cap}")]
    TooLarge { dim: usize, cap: usize },
    #[error("comparison undecided under budget: a in {a}, b in {b}")]
    Undecided {
        a: Box<CertifiedInterval>,
        b: Box<CertifiedInterval>,
    },
}

/// The default tolerance `10^-9`.
pub fn default_tol() -> Q {
    parse_rational("1e-9").expect("literal parses")
}

// ---------------------------------------------------------------------------
// Intervals
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedInterval {
    pub lo: Q,
    pub hi: Q,
    pub converged: bool,
}

impl CertifiedInterval {
    pub fn point(x: Q) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
            converged: true,
        }
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Q) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn midpoint(&self) -> Q {
        (&self.lo + &self.hi) / Q::from_integer(2.into())
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Endpoints as decimal strings rounded outward.
    pub fn to_decimal_pair(&self, digits: usize) -> (String, String) {
        (
            to_decimal(&self.lo, digits, false),
            to_decimal(&self.hi, digits, true),
        )
    }
}

impl fmt::Display for CertifiedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.to_decimal_pair(REPORT_DIGITS);
        write!(f, "[{lo}, {hi}]")?;
        if !self.converged {
            write!(f, " (unconverged)")?;
        }
        Ok(())
    }
}

impl Serialize for CertifiedInterval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let (lo, hi) = self.to_decimal_pair(REPORT_DIGITS);
        let mut st = s.serialize_struct("CertifiedInterval", 3)?;
        st.serialize_field("lo", &lo)?;
        st.serialize_field("hi", &hi)?;
        st.serialize_field("converged", &self.converged)?;
        st.end()
    }
}

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonnegMatrix {
    entries: Vec<Vec<Q>>,
}

impl NonnegMatrix {
    pub fn new(entries: Vec<Vec<Q>>) -> Result<Self, SpectralError> {
        let dim = entries.len();
        if dim == 0 {
            return Err(SpectralError::Empty);
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != dim {
                return Err(SpectralError::NotSquare {
                    row: i,
                    len: row.len(),
                    dim,
                });
            }
            if let Some(j) = row.iter().position(Signed::is_negative) {
                return Err(SpectralError::Negative { i, j });
            }
        }
        Ok(Self { entries })
    }

    pub fn from_graph(g: &Graph) -> Result<Self, SpectralError> {
        let n = g.order();
        Self::new(
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| Q::from_integer(i64::from(g.has_edge(i, j)).into()))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<Q>] {
        &self.entries
    }

    /// Every index reaches every other along non-zero entries.
    pub fn is_irreducible(&self) -> bool {
        let n = self.dim();
        let reach = |forward: bool| {
            let mut seen = vec![false; n];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(i) = stack.pop() {
                for j in 0..n {
                    let e = if forward {
                        &self.entries[i][j]
                    } else {
                        &self.entries[j][i]
                    };
                    if !seen[j] && !e.is_zero() {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        reach(true) && reach(false)
    }

    pub fn char_poly(&self) -> Result<Poly, SpectralError> {
        if self.dim() > CHAR_POLY_MAX_DIM {
            return Err(SpectralError::TooLarge {
                dim: self.dim(),
                cap: CHAR_POLY_MAX_DIM,
            });
        }
        Ok(char_poly(&self.entries))
    }
}

/// Exact coefficients of `det(xI − M)`.
pub fn char_poly_exact(m: &NonnegMatrix) -> Result<Poly, SpectralError> {
    m.char_poly()
}

// ---------------------------------------------------------------------------
// Collatz–Wielandt certifier
// ---------------------------------------------------------------------------

/// Refinable Perron-root enclosure of one irreducible matrix.
#[derive(Debug, Clone)]
pub struct PerronCertifier {
    // M = rows / denom with integer entries
    rows: Vec<Vec<(usize, BigInt)>>,
    denom: BigInt,
    v: Vec<BigInt>,
    precision: u64,
    shift: BigInt,
    best: CertifiedInterval,
    last_width: Option<Q>,
    stagnant: u32,
    iterations: usize,
    exact: bool,
}

impl PerronCertifier {
    pub fn new(m: &NonnegMatrix) -> Result<Self, SpectralError> {
        let dim = m.dim();
        if dim == 1 {
            return Ok(Self::fixed(m.entries[0][0].clone()));
        }
        if !m.is_irreducible() {
            return Err(SpectralError::Reducible);
        }
        let denom = m
            .entries
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
        let rows = m
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, e)| !e.is_zero())
                    .map(|(j, e)| (j, (e * Q::from_integer(denom.clone())).to_integer()))
                    .collect()
            })
            .collect();
        let mut c = Self {
            rows,
            denom,
            v: vec![BigInt::one() << START_PRECISION; dim],
            precision: START_PRECISION,
            shift: BigInt::one(),
            best: CertifiedInterval {
                lo: Q::zero(),
                hi: Q::zero(),
                converged: false,
            },
            last_width: None,
            stagnant: 0,
            iterations: 0,
            exact: false,
        };
        c.step_with(true);
        Ok(c)
    }

    fn fixed(value: Q) -> Self {
        Self {
            rows: Vec::new(),
            denom: BigInt::one(),
            v: Vec::new(),
            precision: 0,
            shift: BigInt::zero(),
            best: CertifiedInterval::point(value),
            last_width: None,
            stagnant: 0,
            iterations: 0,
            exact: true,
        }
    }

    pub fn interval(&self) -> &CertifiedInterval {
        &self.best
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    fn step_with(&mut self, first: bool) {
        let n = self.v.len();
        let cd = &self.shift * &self.denom;
        let u: Vec<BigInt> = (0..n)
            .map(|i| {
                let mut acc = &cd * &self.v[i];
                for (j, e) in &self.rows[i] {
                    acc += e * &self.v[*j];
                }
                acc
            })
            .collect();
        // extreme ratios u_i / v_i by cross-multiplication
        let (mut imin, mut imax) = (0, 0);
        for i in 1..n {
            if &u[i] * &self.v[imin] < &u[imin] * &self.v[i] {
                imin = i;
            }
            if &u[i] * &self.v[imax] > &u[imax] * &self.v[i] {
                imax = i;
            }
        }
        let shift = Q::from_integer(self.shift.clone());
        let ratio = |i: usize| Q::new(u[i].clone(), &self.denom * &self.v[i]) - &shift;
        let (lo, hi) = (ratio(imin), ratio(imax));
        let width = &hi - &lo;
        if first {
            self.best.lo = lo;
            self.best.hi = hi;
        } else {
            if lo > self.best.lo {
                self.best.lo = lo;
            }
            if hi < self.best.hi {
                self.best.hi = hi;
            }
        }
        // precision doubles when the per-step width stops shrinking
        if let Some(prev) = &self.last_width {
            if width.is_zero() {
                self.exact = true;
            } else if &width * Q::new(100.into(), 99.into()) >= *prev {
                self.stagnant += 1;
                if self.stagnant >= 4 && self.precision < MAX_PRECISION {
                    self.precision *= 2;
                    self.stagnant = 0;
                }
            } else {
                self.stagnant = 0;
            }
        }
        self.last_width = Some(width);
        let half: BigInt = self.best.lo.floor().to_integer() / 2;
        self.shift = half.max(BigInt::one());
        let max_u = u.iter().max().expect("dim ≥ 2").clone();
        self.v = u
            .iter()
            .map(|ui| {
                let (qt, r) = (ui << self.precision).div_rem(&max_u);
                if r.is_zero() {
                    qt
                } else {
                    qt + 1
                }
            })
            .collect();
        self.iterations += 1;
    }

    /// Iterates until the width is at most `tol` or `max_iterations` more
    /// steps have run. Returns the number of steps taken.
    pub fn refine(&mut self, tol: &Q, max_iterations: usize) -> usize {
        let mut taken = 0;
        while !self.exact && self.best.width() > *tol && taken < max_iterations {
            self.step_with(false);
            taken += 1;
        }
        self.best.converged = self.exact || self.best.width() <= *tol;
        taken
    }
}

/// Perron-root enclosure of an irreducible matrix, of width at most `tol`
/// unless the iteration cap is hit (then flagged unconverged).
pub fn rho_certified(m: &NonnegMatrix, tol: &Q) -> Result<CertifiedInterval, SpectralError> {
    let mut c = PerronCertifier::new(m)?;
    c.refine(tol, DEFAULT_MAX_ITERATIONS);
    Ok(c.best)
}

// ---------------------------------------------------------------------------
// Graphs
// ---------------------------------------------------------------------------

/// Refinable spectral-radius enclosure of a graph: one certifier per
/// non-trivial component, combined by maximum.
#[derive(Debug, Clone)]
pub struct GraphCertifier {
    graph: Graph,
    parts: Vec<PerronCertifier>,
}

impl GraphCertifier {
    pub fn new(g: &Graph) -> Self {
        let parts = g
            .components()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| {
                let m = NonnegMatrix::from_graph(&g.induced(&c)).expect("adjacency is valid");
                PerronCertifier::new(&m).expect("connected component is irreducible")
            })
            .collect();
        Self {
            graph: g.clone(),
            parts,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn interval(&self) -> CertifiedInterval {
        if self.parts.is_empty() {
            return CertifiedInterval::point(Q::zero());
        }
        let lo = self
            .parts
            .iter()
            .map(|p| &p.best.lo)
            .max()
            .expect("non-empty");
        let hi = self
            .parts
            .iter()
            .map(|p| &p.best.hi)
            .max()
            .expect("non-empty");
        CertifiedInterval {
            lo: lo.clone(),
            hi: hi.clone(),
            converged: self.parts.iter().all(|p| p.best.converged) || lo == hi,
        }
    }

    /// Refines the components that can still carry the maximum.
    pub fn refine(&mut self, tol: &Q, max_iterations: usize) -> usize {
        let mut taken = 0;
        loop {
            let cur = self.interval();
            if cur.width() <= *tol || taken >= max_iterations {
                break;
            }
            let mut progressed = false;
            for p in &mut self.parts {
                if p.best.hi >= cur.lo && p.best.width() > *tol {
                    let step = p.refine(tol, (max_iterations - taken).min(64));
                    taken += step;
                    progressed |= step > 0;
                }
            }
            if !progressed {
                break;
            }
        }
        let width_ok = self.interval().width() <= *tol;
        for p in &mut self.parts {
            p.best.converged = p.exact || p.best.width() <= *tol;
        }
        if width_ok {
            for p in &mut self.parts {
                p.best.converged = true;
            }
        }
        taken
    }
}

/// Spectral radius of `g` (maximum over components); `[0, 0]` without edges.
pub fn rho_graph(g: &Graph, tol: &Q) -> CertifiedInterval {
    let mut c = GraphCertifier::new(g);
    c.refine(tol, DEFAULT_MAX_ITERATIONS);
    let mut out = c.interval();
    out.converged = out.width() <= *tol;
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete_bipartite, grotzsch};
    use crate::exact::{q, qf, Sturm};
    use rand::{Rng, SeedableRng};

    fn sqrt_in(iv: &CertifiedInterval, square: i64) -> bool {
        // lo² ≤ square ≤ hi² with lo ≥ 0
        let s = q(square);
        &iv.lo * &iv.lo <= s && s <= &iv.hi * &iv.hi
    }

    fn cycle(n: usize) -> Graph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_pairs(n, &e).unwrap()
    }

    #[test]
    fn closed_forms() {
        let tol = default_tol();
        let iv = rho_graph(&complete_bipartite(2, 3), &tol);
        assert!(sqrt_in(&iv, 6) && iv.width() <= tol && iv.converged);
        assert!(rho_graph(&cycle(5), &tol).contains(&q(2)));
        let union = cycle(5).disjoint_union(&complete_bipartite(1, 5));
        assert!(sqrt_in(&rho_graph(&union, &tol), 5));
        assert_eq!(
            rho_graph(&Graph::empty(1), &tol),
            CertifiedInterval::point(q(0))
        );
        assert!(rho_graph(&Graph::complete(2), &tol).contains(&q(1)));
    }

    #[test]
    fn grotzsch_radius() {
        let tol = default_tol();
        let iv = rho_graph(&grotzsch(), &tol);
        assert!(iv.width() <= tol);
        assert!(iv.lo >= q(3) && iv.hi <= q(4));
        assert!(&iv.hi * &iv.hi <= q(20));
        let p = NonnegMatrix::from_graph(&grotzsch())
            .unwrap()
            .char_poly()
            .unwrap();
        let s = Sturm::new(&p.squarefree());
        assert_eq!(s.count_in(&iv.lo, &iv.hi), 1);
        assert_eq!(s.count_above(&iv.hi), 0);
    }

    #[test]
    fn one_by_one_and_errors() {
        let m = NonnegMatrix::new(vec![vec![qf(7, 3)]]).unwrap();
        assert_eq!(
            rho_certified(&m, &default_tol()).unwrap(),
            CertifiedInterval::point(qf(7, 3))
        );
        let red = NonnegMatrix::new(vec![vec![q(1), q(1)], vec![q(0), q(1)]]).unwrap();
        assert_eq!(
            rho_certified(&red, &default_tol()),
            Err(SpectralError::Reducible)
        );
        assert!(matches!(
            NonnegMatrix::new(vec![vec![q(0), q(-1)], vec![q(1), q(0)]]),
            Err(SpectralError::Negative { i: 0, j: 1 })
        ));
        assert!(NonnegMatrix::new(vec![vec![q(0), q(1)]]).is_err());
    }

    #[test]
    fn char_polys_of_small_graphs() {
        let k2 = NonnegMatrix::from_graph(&Graph::complete(2)).unwrap();
        assert_eq!(char_poly_exact(&k2).unwrap(), Poly::from_ints(&[-1, 0, 1]));
        let c5 = char_poly_exact(&NonnegMatrix::from_graph(&cycle(5)).unwrap()).unwrap();
        assert_eq!(c5.eval(&q(2)), q(0));
        assert_eq!(Sturm::new(&c5.squarefree()).count_above(&q(2)), 0);
        let big = NonnegMatrix::from_graph(&cycle(65)).unwrap();
        assert!(matches!(
            char_poly_exact(&big),
            Err(SpectralError::TooLarge { .. })
        ));
    }

    #[test]
    fn intervals_bracket_exact_roots() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let mut tested = 0;
        while tested < 100 {
            let n = rng.gen_range(2..=8);
            let entries: Vec<Vec<Q>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            if rng.gen_bool(0.45) {
                                qf(rng.gen_range(1..9), rng.gen_range(1..4))
                            } else {
                                q(0)
                            }
                        })
                        .collect()
                })
                .collect();
            let m = NonnegMatrix::new(entries).unwrap();
            if !m.is_irreducible() {
                continue;
            }
            tested += 1;
            let iv = rho_certified(&m, &default_tol()).unwrap();
            let s = Sturm::new(&m.char_poly().unwrap().squarefree());
            // ρ is the largest real root: exactly one root at or above lo, none above hi
            assert_eq!(s.count_above(&iv.hi), 0, "{iv}");
            assert!(
                s.count_above(&(&iv.lo - qf(1, 1_000_000_000_000))) >= 1,
                "{iv}"
            );
        }
    }

    #[test]
    fn adding_an_edge_raises_the_radius() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let tol = qf(1, 1_000_000_000_000);
        let mut tested = 0;
        while tested < 100 {
            let n = rng.gen_range(3..=9);
            let mut e = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.4) {
                        e.push((u, v));
                    }
                }
            }
            let g = Graph::from_pairs(n, &e).unwrap();
            let missing: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
                .filter(|&(u, v)| !g.has_edge(u, v))
                .collect();
            if !g.is_connected() || missing.is_empty() {
                continue;
            }
            tested += 1;
            let (u, v) = missing[rng.gen_range(0..missing.len())];
            let before = rho_graph(&g, &tol);
            let after = rho_graph(&g.with_edge(u, v), &tol);
            assert!(after.lo > before.hi, "{before} vs {after}");
        }
    }

    #[test]
    fn interval_serializes_as_outward_decimals() {
        let iv = CertifiedInterval {
            lo: qf(1, 3),
            hi: qf(2, 3),
            converged: true,
        };
        let s = serde_json::to_string(&iv).unwrap();
        assert_eq!(
            s,
            r#"{"lo":"0.333333333333333","hi":"0.666666666666667","converged":true}"#
        );
    }
}
