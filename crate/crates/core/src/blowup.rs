//! Independent-set blow-ups, their equitable quotient matrices, and the
//! balanced-family polynomial `g(x, t) = det((x + n/2)·I − B(n, t))`.
//!
//! `B(n, t)` is the quotient of `F1((n−11−t)/2, (n−7+t)/2)` with classes in the
//! Grötzsch order `v13, v23, v1, v2, A_x, u1, u2, u3, w13, w23, A_y`; the `A_x`
//! class is kept even when empty so the matrix is always 11×11.

use log::warn;
use num_traits::Zero;
use thiserror::Error;

use crate::constructions::{grotzsch, grotzsch_vertex};
use crate::exact::{det_rational, interpolate, q, qf, Poly, Q};
use crate::graph::Graph;
use crate::spectral::NonnegMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlowupError {
    #[error("sizes has length {found}, base has {expected} vertices")]
    SizeCount { expected: usize, found: usize },
    #[error("every class is empty")]
    NoClasses,
    #[error("base graph restricted to non-empty classes is disconnected")]
    Disconnected,
    #[error("n − 11 − t = {value} must be even and non-negative")]
    Parity { value: i64 },
    #[error("n − 7 + t = {value} must be positive")]
    EmptyHub { value: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupSpec {
    base: Graph,
    sizes: Vec<u64>,
}

impl BlowupSpec {
    /// Panics if `sizes` does not have one entry per base vertex; see [`BlowupSpec::try_new`].
    pub fn new(base: Graph, sizes: Vec<u64>) -> Self {
        Self::try_new(base, sizes).expect("one class size per base vertex")
    }

    pub fn try_new(base: Graph, sizes: Vec<u64>) -> Result<Self, BlowupError> {
        if sizes.len() != base.order() {
            return Err(BlowupError::SizeCount {
                expected: base.order(),
                found: sizes.len(),
            });
        }
        Ok(Self { base, sizes })
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn order(&self) -> u64 {
        self.sizes.iter().sum()
    }

    /// `Σ s_i·s_j` over base edges, without expanding.
    pub fn edge_count(&self) -> u128 {
        self.base
            .edges()
            .iter()
            .map(|&(u, v)| u128::from(self.sizes[u]) * u128::from(self.sizes[v]))
            .sum()
    }

    /// Base vertices with a non-empty class, in base order.
    pub fn retained(&self) -> Vec<usize> {
        (0..self.sizes.len())
            .filter(|&v| self.sizes[v] > 0)
            .collect()
    }

    /// The blown-up graph. Classes are consecutive vertex ranges in base
    /// order; empty classes vanish.
    pub fn expand(&self) -> Graph {
        let mut start = Vec::with_capacity(self.sizes.len() + 1);
        let mut acc = 0usize;
        for &s in &self.sizes {
            start.push(acc);
            acc += s as usize;
        }
        let mut pairs = Vec::new();
        for (u, v) in self.base.edges() {
            for a in start[u]..start[u] + self.sizes[u] as usize {
                for b in start[v]..start[v] + self.sizes[v] as usize {
                    pairs.push((a.min(b), a.max(b)));
                }
            }
        }
        Graph::from_pairs(acc, &pairs).expect("blow-up pairs are distinct and in range")
    }
}

// ---------------------------------------------------------------------------
// Quotient matrices
// ---------------------------------------------------------------------------

/// Divisor matrix of the class partition: `entries[i][j] = sizes[j]` when
/// classes `i` and `j` come from adjacent base vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientMatrix {
    pub classes: Vec<usize>,
    pub class_sizes: Vec<u64>,
    pub entries: Vec<Vec<Q>>,
}

impl QuotientMatrix {
    /// Quotient over the listed base vertices, empty classes included.
    pub fn over(base: &Graph, sizes: &[u64], classes: &[usize]) -> Self {
        let entries = classes
            .iter()
            .map(|&u| {
                classes
                    .iter()
                    .map(|&v| {
                        if base.has_edge(u, v) {
                            Q::from_integer(sizes[v].into())
                        } else {
                            Q::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self {
            classes: classes.to_vec(),
            class_sizes: classes.iter().map(|&v| sizes[v]).collect(),
            entries,
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// `sizes[i]·Q[i][j] = sizes[j]·Q[j][i]` for all `i, j`.
    pub fn is_size_symmetric(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| {
            (0..d).all(|j| {
                Q::from_integer(self.class_sizes[i].into()) * &self.entries[i][j]
                    == Q::from_integer(self.class_sizes[j].into()) * &self.entries[j][i]
            })
        })
    }

    pub fn to_matrix(&self) -> NonnegMatrix {
        NonnegMatrix::new(self.entries.clone()).expect("quotient entries are non-negative")
    }
}

/// Quotient over the non-empty classes. The retained base must be connected
/// so the Perron root is simple and equals the blow-up's spectral radius.
pub fn quotient_matrix(spec: &BlowupSpec) -> Result<QuotientMatrix, BlowupError> {
    let kept = spec.retained();
    if kept.is_empty() {
        return Err(BlowupError::NoClasses);
    }
    if !spec.base.induced(&kept).is_connected() {
        return Err(BlowupError::Disconnected);
    }
    Ok(QuotientMatrix::over(&spec.base, &spec.sizes, &kept))
}

// ---------------------------------------------------------------------------
// The balanced family and g(x, t)
// ---------------------------------------------------------------------------

/// Class sizes `((n−11−t)/2, (n−7+t)/2)` at `x` and `y`.
pub fn balanced_class_sizes(n: u64, t: i64) -> Result<(u64, u64), BlowupError> {
    let a = n as i64 - 11 - t;
    if a < 0 || a % 2 != 0 {
        return Err(BlowupError::Parity { value: a });
    }
    let b = n as i64 - 7 + t;
    if b <= 0 {
        return Err(BlowupError::EmptyHub { value: b });
    }
    Ok(((a / 2) as u64, (b / 2) as u64))
}

/// The 11×11 matrix `B(n, t)` in Grötzsch class order.
pub fn b_pi(n: u64, t: i64) -> Result<QuotientMatrix, BlowupError> {
    if t.abs() > 23 {
        warn!("t = {t} lies outside |t| ≤ 23, the range the balancedness argument covers");
    }
    let (sx, sy) = balanced_class_sizes(n, t)?;
    let mut sizes = vec![1u64; 11];
    sizes[grotzsch_vertex::X] = sx;
    sizes[grotzsch_vertex::Y] = sy;
    let all: Vec<usize> = (0..11).collect();
    Ok(QuotientMatrix::over(&grotzsch(), &sizes, &all))
}

/// `g(x, t) = det((x + n/2)·I − B(n, t))`, exactly.
pub fn g_eval(n: u64, t: i64, x: &Q) -> Result<Q, BlowupError> {
    let b = b_pi(n, t)?;
    let shift = x + qf(n as i64, 2);
    let m: Vec<Vec<Q>> = b
        .entries
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, v)| if i == j { &shift - v } else { -v.clone() })
                .collect()
        })
        .collect();
    Ok(det_rational(&m))
}

/// The 13 smallest admissible `n ≥ 30` for a given `t`.
pub fn g_nodes(t: i64) -> Vec<u64> {
    (30u64..)
        .filter(|&n| balanced_class_sizes(n, t).is_ok())
        .take(13)
        .collect()
}

/// `g(x, t)` as a polynomial in `n` for fixed `x` and `t`, interpolated exactly.
pub fn g_coefficients_in_n(x: &Q, t: i64) -> Result<Poly, BlowupError> {
    let nodes = g_nodes(t);
    let xs: Vec<Q> = nodes.iter().map(|&n| q(n as i64)).collect();
    let ys = nodes
        .iter()
        .map(|&n| g_eval(n, t, x))
        .collect::<Result<Vec<Q>, _>>()?;
    Ok(interpolate(&xs, &ys))
}

/// Expected `n^10` and `n^9` coefficients of `g(x, t)`.
pub fn g_leading_prediction(x: &Q, t: i64) -> (Q, Q) {
    let d = q(2048);
    let c10 = (q(6) + q(4) * x) / &d;
    let c9 = (q(39) + q(t * t) + q(108) * x + q(76) * x * x) / &d;
    (c10, c9)
}

/// Outcome of comparing the interpolated coefficients with the prediction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GLeadingCheck {
    pub degree: Option<usize>,
    pub c11: Q,
    pub c10: Q,
    pub c9: Q,
    pub expected_c10: Q,
    pub expected_c9: Q,
}

impl GLeadingCheck {
    pub fn holds(&self) -> bool {
        self.c10 == self.expected_c10 && self.c9 == self.expected_c9
    }
}

pub fn check_g_leading(x: &Q, t: i64) -> Result<GLeadingCheck, BlowupError> {
    let p = g_coefficients_in_n(x, t)?;
    let (expected_c10, expected_c9) = g_leading_prediction(x, t);
    Ok(GLeadingCheck {
        degree: p.degree(),
        c11: p.coeff(11),
        c10: p.coeff(10),
        c9: p.coeff(9),
        expected_c10,
        expected_c9,
    })
}

/// Whether the `n^10` and `n^9` coefficients of `g(x, t)` equal
/// `(6+4x)/2048` and `(39+t²+108x+76x²)/2048` exactly.
pub fn verify_g_leading(x: &Q, t: i64) -> Result<bool, BlowupError> {
    Ok(check_g_leading(x, t)?.holds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::f1_st;
    use crate::exact::char_poly;

    #[test]
    fn k2_blowup_is_complete_bipartite() {
        let spec = BlowupSpec::new(Graph::complete(2), vec![2, 3]);
        let g = spec.expand();
        assert_eq!((g.order(), g.size()), (5, 6));
        assert!(g.is_bipartite());
        let qm = quotient_matrix(&spec).unwrap();
        assert_eq!(qm.entries, vec![vec![q(0), q(3)], vec![q(2), q(0)]]);
        assert_eq!(char_poly(&qm.entries), Poly::from_ints(&[-6, 0, 1]));
    }

    #[test]
    fn unit_sizes_give_adjacency() {
        let g = grotzsch();
        let qm = quotient_matrix(&BlowupSpec::new(g.clone(), vec![1; 11])).unwrap();
        for i in 0..11 {
            for j in 0..11 {
                assert_eq!(qm.entries[i][j], q(i64::from(g.has_edge(i, j))));
            }
        }
    }

    #[test]
    fn large_blowup_shape() {
        let spec = f1_st(45, 47).unwrap();
        assert_eq!(spec.order(), 101);
        assert_eq!(spec.edge_count(), 2406);
        assert_eq!(spec.expand().size(), 2406);
    }

    #[test]
    fn disconnected_retained_base_is_rejected() {
        let base = Graph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        let spec = BlowupSpec::new(base, vec![1, 0, 1]);
        assert_eq!(quotient_matrix(&spec), Err(BlowupError::Disconnected));
        assert!(BlowupSpec::try_new(Graph::complete(2), vec![1]).is_err());
    }

    #[test]
    fn b_pi_matches_displayed_matrix() {
        // Rows v13,v23,v1,v2,A_x,u1,u2,u3,w13,w23,A_y with a = (n−11−t)/2,
        // b = (n−7+t)/2 at A_x and A_y.
        let (n, t) = (101u64, 0i64);
        let (a, b) = (45i64, 47i64);
        let layout: [[i64; 11]; 11] = [
            [0, 0, 0, 0, 0, 1, 0, 1, 0, 0, b],
            [0, 0, 0, 0, 0, 0, 1, 1, 0, 0, b],
            [0, 0, 0, 0, 0, 1, 0, 0, 0, 1, b],
            [0, 0, 0, 0, 0, 0, 1, 0, 1, 0, b],
            [0, 0, 0, 0, 0, 0, 0, 0, 1, 1, b],
            [1, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0],
            [0, 1, 0, 1, 0, 1, 0, 0, 0, 1, 0],
            [1, 1, 0, 0, 0, 0, 0, 0, 1, 1, 0],
            [0, 0, 0, 1, a, 1, 0, 1, 0, 0, 0],
            [0, 0, 1, 0, a, 0, 1, 1, 0, 0, 0],
            [1, 1, 1, 1, a, 0, 0, 0, 0, 0, 0],
        ];
        let m = b_pi(n, t).unwrap();
        for i in 0..11 {
            for j in 0..11 {
                assert_eq!(m.entries[i][j], q(layout[i][j]), "entry ({i},{j})");
            }
        }
        assert!(m.is_size_symmetric());
    }

    #[test]
    fn g_is_char_poly_shifted() {
        let n = 51u64;
        let p = char_poly(&b_pi(n, 0).unwrap().entries);
        for x in [q(-2), qf(-1, 3), q(0), q(5)] {
            let y = &x + qf(n as i64, 2);
            assert_eq!(g_eval(n, 0, &x).unwrap(), p.eval(&y));
        }
    }

    #[test]
    fn g_positive_beyond_root_and_parity_checked() {
        assert!(g_eval(101, 0, &q(0)).unwrap() > Q::zero());
        assert_eq!(
            g_eval(20, 0, &q(0)).unwrap_err(),
            BlowupError::Parity { value: 9 }
        );
    }

    #[test]
    fn leading_coefficients_reproduce() {
        let c = check_g_leading(&q(0), 0).unwrap();
        assert_eq!((c.c10.clone(), c.c9.clone()), (qf(6, 2048), qf(39, 2048)));
        assert!(c.c11.is_zero());
        assert_eq!(c.degree, Some(10));
        let c = check_g_leading(&q(-2), 0).unwrap();
        assert_eq!(c.c10, qf(-2, 2048));
        let c = check_g_leading(&q(0), 1).unwrap();
        assert_eq!(c.c9, qf(40, 2048));
        for x in [-2, -1, 0] {
            for t in [-1, 0, 1, 2] {
                assert!(verify_g_leading(&q(x), t).unwrap(), "x={x} t={t}");
            }
        }
    }
}
