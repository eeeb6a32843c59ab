//! Certified ordering of two Perron roots.
//!
//! Intervals are refined alternately until they separate. If they keep
//! overlapping, equality is decided exactly: the largest common root `r` of
//! the two characteristic polynomials inside the overlap is isolated with
//! Sturm sequences, and each side equals `r` iff its polynomial has no root
//! above `r`.

use std::cmp::Ordering;

use num_traits::Zero;

use super::{CertifiedInterval, GraphCertifier, NonnegMatrix, PerronCertifier, SpectralError};
use crate::exact::{qf, Poly, Sturm, Q};
use crate::graph::Graph;

/// Anything with a refinable Perron-root enclosure and an exact polynomial
/// whose largest real root is that Perron root.
pub trait PerronSource {
    fn interval(&self) -> CertifiedInterval;
    /// Refines toward width `tol`; returns the iterations spent.
    fn refine(&mut self, tol: &Q, max_iterations: usize) -> usize;
    fn perron_poly(&self) -> Result<Poly, SpectralError>;
}

/// A matrix together with its certifier.
#[derive(Debug, Clone)]
pub struct MatrixSource {
    matrix: NonnegMatrix,
    certifier: PerronCertifier,
}

impl MatrixSource {
    pub fn new(m: &NonnegMatrix) -> Result<Self, SpectralError> {
        Ok(Self {
            matrix: m.clone(),
            certifier: PerronCertifier::new(m)?,
        })
    }
}

impl PerronSource for MatrixSource {
    fn interval(&self) -> CertifiedInterval {
        self.certifier.interval().clone()
    }

    fn refine(&mut self, tol: &Q, max_iterations: usize) -> usize {
        self.certifier.refine(tol, max_iterations)
    }

    fn perron_poly(&self) -> Result<Poly, SpectralError> {
        self.matrix.char_poly()
    }
}

impl PerronSource for GraphCertifier {
    fn interval(&self) -> CertifiedInterval {
        GraphCertifier::interval(self)
    }

    fn refine(&mut self, tol: &Q, max_iterations: usize) -> usize {
        GraphCertifier::refine(self, tol, max_iterations)
    }

    fn perron_poly(&self) -> Result<Poly, SpectralError> {
        NonnegMatrix::from_graph(self.graph())?.char_poly()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonOutcome {
    pub ordering: Ordering,
    pub a: CertifiedInterval,
    pub b: CertifiedInterval,
    /// Decided by exact polynomial arithmetic rather than interval separation.
    pub exact: bool,
}

enum Exact {
    Decided(Ordering),
    Unequal,
    Unavailable,
}

fn isolate_and_decide(pa: &Poly, pb: &Poly, lo: &Q, hi: &Q) -> Exact {
    let (sa_poly, sb_poly) = (pa.squarefree(), pb.squarefree());
    let h = sa_poly.gcd(&sb_poly);
    if h.degree().unwrap_or(0) == 0 {
        return Exact::Unequal;
    }
    let (sa, sb, sh) = (Sturm::new(&sa_poly), Sturm::new(&sb_poly), Sturm::new(&h));
    let decide = |above_a: usize, above_b: usize| match (above_a == 0, above_b == 0) {
        (true, true) => Exact::Decided(Ordering::Equal),
        (true, false) => Exact::Decided(Ordering::Less),
        (false, true) => Exact::Decided(Ordering::Greater),
        (false, false) => Exact::Unequal,
    };
    let (mut a, mut b) = (lo.clone(), hi.clone());
    if sh.count_in(&a, &b) == 0 {
        // the only candidate left is the left endpoint itself
        if h.eval(&a).is_zero() {
            return decide(sa.count_above(&a), sb.count_above(&a));
        }
        return Exact::Unequal;
    }
    let two = Q::from_integer(2.into());
    // keep exactly the largest common root r in (a, b], then shrink until
    // it is also the only root of either polynomial there
    while sh.count_in(&a, &b) > 1 || sa.count_in(&a, &b) > 1 || sb.count_in(&a, &b) > 1 {
        let m = (&a + &b) / &two;
        if sh.count_in(&m, &b) >= 1 {
            a = m;
        } else {
            b = m;
        }
    }
    decide(sa.count_above(&b), sb.count_above(&b))
}

/// Orders the Perron roots of two sources. `budget` caps the total number
/// of refinement iterations across both sides.
pub fn compare_sources(
    a: &mut dyn PerronSource,
    b: &mut dyn PerronSource,
    budget: usize,
) -> Result<ComparisonOutcome, SpectralError> {
    let mut spent = 0usize;
    let mut exact_tried = false;
    let mut known_unequal = false;
    loop {
        let (ia, ib) = (a.interval(), b.interval());
        if ia.hi < ib.lo || ib.hi < ia.lo {
            let ordering = if ia.hi < ib.lo {
                Ordering::Less
            } else {
                Ordering::Greater
            };
            return Ok(ComparisonOutcome {
                ordering,
                a: ia,
                b: ib,
                exact: false,
            });
        }
        if !exact_tried && !known_unequal {
            exact_tried = true;
            let lo = (&ia.lo).max(&ib.lo).clone();
            let hi = (&ia.hi).min(&ib.hi).clone();
            let verdict = match (a.perron_poly(), b.perron_poly()) {
                (Ok(pa), Ok(pb)) => isolate_and_decide(&pa, &pb, &lo, &hi),
                _ => Exact::Unavailable,
            };
            match verdict {
                Exact::Decided(ordering) => {
                    return Ok(ComparisonOutcome {
                        ordering,
                        a: ia,
                        b: ib,
                        exact: true,
                    })
                }
                Exact::Unequal => known_unequal = true,
                Exact::Unavailable => {}
            }
        }
        if spent >= budget {
            return Err(SpectralError::Undecided {
                a: Box::new(ia),
                b: Box::new(ib),
            });
        }
        // alternate sides, each aiming well below the current overlap
        let target = ia.width().min(ib.width()) * qf(1, 16);
        let target = if target.is_zero() {
            qf(1, 1 << 20)
        } else {
            target
        };
        let share = ((budget - spent) / 2).max(1);
        let used_a = a.refine(&target, share.min(256));
        let used_b = b.refine(&target, share.min(256));
        spent += used_a + used_b;
        if used_a + used_b == 0 {
            // both already at target or exact: nothing more to gain
            spent = budget;
        }
    }
}

pub fn compare_rho(
    a: &NonnegMatrix,
    b: &NonnegMatrix,
    budget: usize,
) -> Result<ComparisonOutcome, SpectralError> {
    let mut sa = MatrixSource::new(a)?;
    let mut sb = MatrixSource::new(b)?;
    compare_sources(&mut sa, &mut sb, budget)
}

pub fn compare_rho_graphs(
    a: &Graph,
    b: &Graph,
    budget: usize,
) -> Result<ComparisonOutcome, SpectralError> {
    let mut sa = GraphCertifier::new(a);
    let mut sb = GraphCertifier::new(b);
    compare_sources(&mut sa, &mut sb, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::quotient_matrix;
    use crate::constructions::{complete_bipartite, f1_st, turan};
    use crate::exact::q;
    use crate::spectral::DEFAULT_MAX_ITERATIONS;

    fn k23() -> NonnegMatrix {
        NonnegMatrix::new(vec![vec![q(0), q(3)], vec![q(2), q(0)]]).unwrap()
    }

    #[test]
    fn identical_inputs_are_equal() {
        let o = compare_rho(&k23(), &k23(), DEFAULT_MAX_ITERATIONS).unwrap();
        assert_eq!(o.ordering, Ordering::Equal);
        assert!(o.exact);
    }

    #[test]
    fn quotient_and_graph_agree_exactly() {
        // √6 both ways: K(2,3) itself and its quotient
        let g = NonnegMatrix::from_graph(&complete_bipartite(2, 3)).unwrap();
        let o = compare_rho(&g, &k23(), DEFAULT_MAX_ITERATIONS).unwrap();
        assert_eq!(o.ordering, Ordering::Equal);
    }

    #[test]
    fn balanced_blowup_beats_neighbour() {
        let a = quotient_matrix(&f1_st(45, 47).unwrap())
            .unwrap()
            .to_matrix();
        let b = quotient_matrix(&f1_st(44, 48).unwrap())
            .unwrap()
            .to_matrix();
        let o = compare_rho(&a, &b, DEFAULT_MAX_ITERATIONS).unwrap();
        assert_eq!(o.ordering, Ordering::Greater);
        let o = compare_rho(&b, &a, DEFAULT_MAX_ITERATIONS).unwrap();
        assert_eq!(o.ordering, Ordering::Less);
    }

    #[test]
    fn turan_two_below_turan_three() {
        let o = compare_rho_graphs(
            &turan(10, 2).unwrap(),
            &turan(10, 3).unwrap(),
            DEFAULT_MAX_ITERATIONS,
        )
        .unwrap();
        assert_eq!(o.ordering, Ordering::Less);
    }

    #[test]
    fn isomorphic_graphs_compare_equal() {
        let g = complete_bipartite(3, 4);
        let h = g.permuted(&[6, 5, 4, 3, 2, 1, 0]);
        let o = compare_rho_graphs(&g, &h, DEFAULT_MAX_ITERATIONS).unwrap();
        assert_eq!(o.ordering, Ordering::Equal);
        // equal spectral radius, different graphs: K(1,4) vs K(2,2) ⊔ K1 both have ρ = 2
        let star = complete_bipartite(1, 4);
        let c4 = complete_bipartite(2, 2).disjoint_union(&Graph::empty(1));
        let o = compare_rho_graphs(&star, &c4, DEFAULT_MAX_ITERATIONS).unwrap();
        assert_eq!(o.ordering, Ordering::Equal);
    }

    #[test]
    fn antisymmetric_on_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..40 {
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let n = rng.gen_range(2..=7);
                let mut e = Vec::new();
                for u in 0..n {
                    for v in (u + 1)..n {
                        if rng.gen_bool(0.5) {
                            e.push((u, v));
                        }
                    }
                }
                Graph::from_pairs(n, &e).unwrap()
            };
            let (g, h) = (mk(&mut rng), mk(&mut rng));
            let ab = compare_rho_graphs(&g, &h, DEFAULT_MAX_ITERATIONS).unwrap();
            let ba = compare_rho_graphs(&h, &g, DEFAULT_MAX_ITERATIONS).unwrap();
            assert_eq!(ab.ordering, ba.ordering.reverse());
        }
    }
}
