//! Exhaustive extremal searches and certified checks of the quantitative
//! claims: edge and spectral maximisers at small order, Nosal's bound,
//! vertex deletion, multipartite perturbation, balanced blow-ups, and the
//! spectral-radius window of the balanced Grötzsch blow-up.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::blowup::{quotient_matrix, BlowupError, QuotientMatrix};
use crate::constructions::{
    f1_balanced_params, f1_n, f1_n_splits, f1_st, sk_ab, turan, turan_parts, ConstructionError,
};
use crate::enumerate::{
    brute_force_all, EnumFilter, EnumerateError, TriangleFreeEnumerator, MAX_BRUTE_ORDER,
};
use crate::exact::{q, qf, Q};
use crate::graph::{canonical_form, graph6_encode, is_k_colorable, Graph};
use crate::spectral::{
    compare_sources, rho_graph, ComparisonOutcome, GraphCertifier, MatrixSource, NonnegMatrix,
    PerronCertifier, SpectralError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Blowup(#[from] BlowupError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error("input graph contains a triangle")]
    NotTriangleFree,
    #[error("vertex {u} out of range for order {n}")]
    VertexOutOfRange { u: usize, n: usize },
    #[error("malformed perturbation: {0}")]
    MalformedPerturbation(String),
    #[error("order {n} below the minimum {min}")]
    OrderTooSmall { n: u64, min: u64 },
}

/// Whether a run agrees with what the paper predicts for it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Prediction {
    Yes,
    No,
    NotApplicable,
}

impl Prediction {
    fn from_bool(b: bool) -> Self {
        if b {
            Self::Yes
        } else {
            Self::No
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Objective {
    Edges,
    Rho,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum ExtremalValue {
    Edges(u64),
    Rho(crate::spectral::CertifiedInterval),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalReport {
    pub n: usize,
    pub objective: Objective,
    pub filter: EnumFilter,
    /// graph6 of canonical forms, sorted.
    pub winners: Vec<String>,
    pub value: Option<ExtremalValue>,
    pub classes_examined: u64,
    pub matches_paper_prediction: Prediction,
    /// The prediction lies inside the range where the claim is a theorem,
    /// so a mismatch is a genuine failure rather than an out-of-range note.
    pub prediction_in_range: bool,
    pub prediction_detail: String,
    /// Classes whose comparison with the leader stayed undecided under budget.
    pub ties_under_budget: Vec<String>,
    pub winners_revalidated: bool,
    pub empty_by_theory: Option<String>,
}

fn canonical_g6(g: &Graph) -> String {
    graph6_encode(&canonical_form(g).expect("enumeration orders are within the labelling cap"))
}

/// Filter re-check through routes independent of the enumerator: triangles
/// by scanning all triples, bipartiteness and connectivity by search,
/// chromatic bound by colouring.
fn revalidate(g: &Graph, filter: &EnumFilter) -> bool {
    let n = g.order();
    let triangle_free = (0..n).all(|a| {
        (a + 1..n).all(|b| {
            !g.has_edge(a, b) || (b + 1..n).all(|c| !(g.has_edge(a, c) && g.has_edge(b, c)))
        })
    });
    (!filter.require_triangle_free || triangle_free)
        && (!filter.connected_only || g.is_connected())
        && (!filter.non_bipartite_only || g.bipartition().is_none())
        && (filter.min_chromatic == 0 || !is_k_colorable(g, filter.min_chromatic - 1))
}

fn enumerator(n: usize, filter: EnumFilter) -> Result<TriangleFreeEnumerator, VerifyError> {
    let filter = EnumFilter {
        require_triangle_free: true,
        ..filter
    };
    Ok(TriangleFreeEnumerator::new(n, filter)?)
}

fn is_plain(filter: &EnumFilter) -> bool {
    filter.min_chromatic <= 1 && !filter.connected_only && !filter.non_bipartite_only
}

// ---------------------------------------------------------------------------
// Edge maximisers
// ---------------------------------------------------------------------------

/// `F1(n)` members for both floor/ceiling variants and every split.
pub fn f1_n_family(n: u64) -> Vec<Graph> {
    let mut out = Vec::new();
    for swapped in [false, true] {
        for split in f1_n_splits(n, swapped) {
            if let Ok(b) = f1_n(n, split, swapped) {
                out.push(b.spec.expand());
            }
        }
    }
    out
}

/// `⌊(n−3)²/4⌋ + 5`.
pub fn f1_edge_bound(n: u64) -> u64 {
    let m = n.saturating_sub(3);
    m * m / 4 + 5
}

pub fn extremal_edges(n: usize, filter: EnumFilter) -> Result<ExtremalReport, VerifyError> {
    let e = enumerator(n, filter)?;
    let filter = e.filter();
    let parts = e.par_fold(
        || (0u64, None::<usize>, Vec::<Graph>::new()),
        |acc: &mut (u64, Option<usize>, Vec<Graph>), g| {
            acc.0 += 1;
            let m = g.size();
            match acc.1 {
                Some(best) if m < best => {}
                Some(best) if m == best => acc.2.push(g),
                _ => {
                    acc.1 = Some(m);
                    acc.2 = vec![g];
                }
            }
        },
    );
    let examined: u64 = parts.iter().map(|p| p.0).sum();
    let best = parts.iter().filter_map(|p| p.1).max();
    let winner_graphs: Vec<Graph> = parts
        .into_iter()
        .filter(|p| p.1 == best)
        .flat_map(|p| p.2)
        .collect();
    let winners: BTreeSet<String> = winner_graphs.iter().map(canonical_g6).collect();
    let winners_revalidated = winner_graphs.iter().all(|g| revalidate(g, &filter));

    let (prediction, in_range, detail) = match best {
        None => (
            Prediction::NotApplicable,
            false,
            "no classes pass the filter".to_string(),
        ),
        Some(value) => edge_prediction(n, &filter, value as u64, &winners),
    };
    Ok(ExtremalReport {
        n,
        objective: Objective::Edges,
        filter,
        winners: winners.into_iter().collect(),
        value: best.map(|v| ExtremalValue::Edges(v as u64)),
        classes_examined: examined,
        matches_paper_prediction: prediction,
        prediction_in_range: in_range,
        prediction_detail: detail,
        ties_under_budget: Vec::new(),
        winners_revalidated,
        empty_by_theory: filter.empty_by_theory(n).map(str::to_string),
    })
}

fn edge_prediction(
    n: usize,
    filter: &EnumFilter,
    value: u64,
    winners: &BTreeSet<String>,
) -> (Prediction, bool, String) {
    let n64 = n as u64;
    if filter.min_chromatic >= 4 && !filter.connected_only {
        let bound = f1_edge_bound(n64);
        let family: BTreeSet<String> = f1_n_family(n64).iter().map(canonical_g6).collect();
        let structural = !family.is_empty() && winners.is_subset(&family);
        let ok = value == bound && structural;
        let detail = format!(
            "bound floor((n-3)^2/4)+5 = {bound}, found {value}; F1(n) family has {} classes, \
             winners {} inside it; the bound is a theorem only for n >= 150",
            family.len(),
            if structural { "all" } else { "not all" }
        );
        return (Prediction::from_bool(ok), n >= 150, detail);
    }
    if is_plain(filter) {
        let target = canonical_g6(&turan(n, 2).expect("r = 2"));
        let mantel = n64 * n64 / 4;
        let ok = value == mantel && winners.len() == 1 && winners.contains(&target);
        let detail = format!(
            "floor(n^2/4) = {mantel}, found {value}; unique winner T(n,2): {}",
            winners.len() == 1 && winners.contains(&target)
        );
        return (Prediction::from_bool(ok), true, detail);
    }
    (
        Prediction::NotApplicable,
        false,
        "no edge prediction for this filter".to_string(),
    )
}

// ---------------------------------------------------------------------------
// Spectral maximisers
// ---------------------------------------------------------------------------

/// Coarse width used to prune before the certified tournament.
fn screening_tol() -> Q {
    qf(1, 1_000_000)
}

/// Outcome of a certified tournament over a candidate list.
#[derive(Debug, Clone)]
pub struct Tournament {
    pub winners: Vec<Graph>,
    pub ties_under_budget: Vec<Graph>,
    pub value: Option<crate::spectral::CertifiedInterval>,
    pub comparisons: usize,
    pub exact_comparisons: usize,
}

/// Finds every graph not certified below the maximum spectral radius.
/// Candidates are visited in sorted canonical order, so the result does not
/// depend on how they were produced.
pub fn spectral_tournament(
    graphs: Vec<Graph>,
    tol: &Q,
    budget: usize,
) -> Result<Tournament, VerifyError> {
    let mut cands: Vec<(Graph, GraphCertifier)> = graphs
        .into_iter()
        .map(|g| {
            let c = canonical_form(&g).expect("within labelling cap");
            let mut cert = GraphCertifier::new(&c);
            cert.refine(&screening_tol(), budget);
            (c, cert)
        })
        .collect();
    cands.sort_by(|a, b| a.0.cmp(&b.0));
    cands.dedup_by(|a, b| a.0 == b.0);
    if cands.is_empty() {
        return Ok(Tournament {
            winners: Vec::new(),
            ties_under_budget: Vec::new(),
            value: None,
            comparisons: 0,
            exact_comparisons: 0,
        });
    }
    let best_lo = cands
        .iter()
        .map(|c| c.1.interval().lo)
        .max()
        .expect("non-empty");
    cands.retain(|c| c.1.interval().hi >= best_lo);

    let mut comparisons = 0;
    let mut exact_comparisons = 0;
    let mut iter = cands.into_iter();
    let mut leaders = vec![iter.next().expect("max survives")];
    let mut ties: Vec<(Graph, GraphCertifier)> = Vec::new();
    let mut compare = |a: &mut GraphCertifier, b: &mut GraphCertifier| {
        let r = compare_sources(a, b, budget);
        comparisons += 1;
        if let Ok(ComparisonOutcome { exact: true, .. }) = &r {
            exact_comparisons += 1;
        }
        r
    };
    for mut cand in iter {
        match compare(&mut cand.1, &mut leaders[0].1) {
            Ok(o) => match o.ordering {
                Ordering::Less => {}
                Ordering::Equal => leaders.push(cand),
                Ordering::Greater => {
                    leaders = vec![cand];
                    let pending = std::mem::take(&mut ties);
                    for mut t in pending {
                        match compare(&mut t.1, &mut leaders[0].1) {
                            Ok(o) if o.ordering == Ordering::Less => {}
                            Ok(o) if o.ordering == Ordering::Equal => leaders.push(t),
                            Ok(_) => unreachable!("a tie cannot beat the new leader it trailed"),
                            Err(SpectralError::Undecided { .. }) => ties.push(t),
                            Err(e) => return Err(e.into()),
                        }
                    }
                }
            },
            Err(SpectralError::Undecided { .. }) => ties.push(cand),
            Err(e) => return Err(e.into()),
        }
    }
    leaders[0].1.refine(tol, budget);
    let mut value = leaders[0].1.interval();
    value.converged = value.width() <= *tol;
    Ok(Tournament {
        winners: leaders.into_iter().map(|c| c.0).collect(),
        ties_under_budget: ties.into_iter().map(|c| c.0).collect(),
        value: Some(value),
        comparisons,
        exact_comparisons,
    })
}

pub fn extremal_spectral(
    n: usize,
    filter: EnumFilter,
    tol: &Q,
    budget: usize,
) -> Result<ExtremalReport, VerifyError> {
    let e = enumerator(n, filter)?;
    let filter = e.filter();
    // per subtree: keep graphs whose screening interval can still reach the
    // subtree's best lower bound
    let parts = e.par_fold(
        || (0u64, None::<Q>, Vec::<(Graph, Q)>::new()),
        |acc: &mut (u64, Option<Q>, Vec<(Graph, Q)>), g| {
            acc.0 += 1;
            let iv = rho_graph(&g, &screening_tol());
            if acc.1.as_ref().is_some_and(|lo| iv.hi < *lo) {
                return;
            }
            if acc.1.as_ref().is_none_or(|lo| iv.lo > *lo) {
                let lo = iv.lo.clone();
                acc.2.retain(|(_, hi)| *hi >= lo);
                acc.1 = Some(lo);
            }
            acc.2.push((g, iv.hi));
        },
    );
    let examined: u64 = parts.iter().map(|p| p.0).sum();
    let best_lo = parts.iter().filter_map(|p| p.1.clone()).max();
    let survivors: Vec<Graph> = parts
        .into_iter()
        .flat_map(|p| p.2)
        .filter(|(_, hi)| best_lo.as_ref().is_some_and(|lo| hi >= lo))
        .map(|(g, _)| g)
        .collect();
    let t = spectral_tournament(survivors, tol, budget)?;
    let winners: Vec<String> = t.winners.iter().map(canonical_g6).collect();
    let ties: Vec<String> = t.ties_under_budget.iter().map(canonical_g6).collect();
    let winners_revalidated = t.winners.iter().all(|g| revalidate(g, &filter));
    let (prediction, in_range, detail) = if winners.is_empty() {
        (
            Prediction::NotApplicable,
            false,
            "no classes pass the filter".to_string(),
        )
    } else {
        spectral_prediction(n, &filter, &winners, &ties)
    };
    Ok(ExtremalReport {
        n,
        objective: Objective::Rho,
        filter,
        winners,
        value: t.value.map(ExtremalValue::Rho),
        classes_examined: examined,
        matches_paper_prediction: prediction,
        prediction_in_range: in_range,
        prediction_detail: detail,
        ties_under_budget: ties,
        winners_revalidated,
        empty_by_theory: filter.empty_by_theory(n).map(str::to_string),
    })
}

/// `SK(⌈(n−1)/2⌉, ⌊(n−1)/2⌋)`, the predicted non-bipartite maximiser.
pub fn sk_prediction(n: usize) -> Result<Graph, VerifyError> {
    let m = n.saturating_sub(1);
    Ok(sk_ab(m.div_ceil(2), m / 2)?)
}

fn spectral_prediction(
    n: usize,
    filter: &EnumFilter,
    winners: &[String],
    ties: &[String],
) -> (Prediction, bool, String) {
    let unique_is = |target: &str| ties.is_empty() && winners.len() == 1 && winners[0] == target;
    if filter.min_chromatic >= 4 && n >= 11 {
        let (s, t) = f1_balanced_params(n as u64).expect("n ≥ 11");
        let predicted = f1_st(s, t).expect("t ≥ 2").expand();
        let target = canonical_g6(&predicted);
        let chi = crate::graph::chromatic_number(&predicted);
        let ok = unique_is(&target);
        let detail = format!(
            "predicted F1({s},{t}) = {target} (chromatic number {chi}); unique winner \
             matches: {ok}; asymptotic statement, not asserted at this order"
        );
        return (Prediction::from_bool(ok), false, detail);
    }
    if filter.non_bipartite_only && filter.min_chromatic <= 3 && n >= 5 {
        let target = canonical_g6(&sk_prediction(n).expect("n ≥ 5"));
        let ok = unique_is(&target);
        return (
            Prediction::from_bool(ok),
            true,
            format!("predicted SK = {target}; unique winner matches: {ok}"),
        );
    }
    if is_plain(filter) {
        let target = canonical_g6(&turan(n, 2).expect("r = 2"));
        let ok = unique_is(&target);
        return (
            Prediction::from_bool(ok),
            true,
            format!("predicted T(n,2) = {target}; unique winner matches: {ok}"),
        );
    }
    (
        Prediction::NotApplicable,
        false,
        "no spectral prediction for this filter".to_string(),
    )
}

/// The unique spectral maximiser among triangle-free classes of order `n`
/// (from the all-graphs oracle) is `T(n, 2)`.
pub fn verify_spectral_turan(n: usize, tol: &Q, budget: usize) -> Result<bool, VerifyError> {
    if n > MAX_BRUTE_ORDER {
        return Err(EnumerateError::TooLarge {
            n,
            cap: MAX_BRUTE_ORDER,
            estimate: "uses the all-graphs oracle".to_string(),
        }
        .into());
    }
    let tf: Vec<Graph> = brute_force_all(n)?
        .into_iter()
        .filter(Graph::is_triangle_free)
        .collect();
    let t = spectral_tournament(tf, tol, budget)?;
    let target = canonical_form(&turan(n, 2)?).expect("small");
    Ok(t.ties_under_budget.is_empty() && t.winners == vec![target])
}

// ---------------------------------------------------------------------------
// Pointwise inequalities
// ---------------------------------------------------------------------------

/// Widths tried in turn; any certified enclosure is valid, so a coarse one
/// that already settles an inequality saves the work of a tight one.
fn widths(tol: &Q) -> Vec<Q> {
    let mut out: Vec<Q> = [qf(1, 100), qf(1, 1_000_000)]
        .into_iter()
        .filter(|w| w > tol)
        .collect();
    out.push(tol.clone());
    out
}

/// `ρ(g) ≤ √e(g) + 10⁻⁹`, using the certified upper bound.
pub fn check_nosal(g: &Graph, tol: &Q) -> Result<bool, VerifyError> {
    if !g.is_triangle_free() {
        return Err(VerifyError::NotTriangleFree);
    }
    let e = q(g.size() as i64);
    let mut cert = GraphCertifier::new(g);
    let mut holds = false;
    for w in widths(tol) {
        cert.refine(&w, crate::spectral::DEFAULT_MAX_ITERATIONS);
        let hi = cert.interval().hi - qf(1, 1_000_000_000);
        holds = !hi.is_positive() || &hi * &hi <= e;
        if holds {
            break;
        }
    }
    Ok(holds)
}

/// `ρ(g)² ≤ ρ(g − u)² + 2·d(u) + 10⁻⁹` with the lower bound on the left and
/// the upper bound on the right.
pub fn check_vertex_deletion(g: &Graph, u: usize, tol: &Q) -> Result<bool, VerifyError> {
    if u >= g.order() {
        return Err(VerifyError::VertexOutOfRange { u, n: g.order() });
    }
    Ok(deletion_holds(&mut GraphCertifier::new(g), u, tol))
}

/// The deletion inequality at every vertex, sharing one certifier for `g`.
pub fn check_vertex_deletion_all(g: &Graph, tol: &Q) -> bool {
    let mut whole = GraphCertifier::new(g);
    (0..g.order()).all(|u| deletion_holds(&mut whole, u, tol))
}

fn deletion_holds(whole: &mut GraphCertifier, u: usize, tol: &Q) -> bool {
    let g = whole.graph().clone();
    let slack = q(2 * g.degree(u) as i64) + qf(1, 1_000_000_000);
    let mut rest = GraphCertifier::new(&g.without_vertex(u));
    for w in widths(tol) {
        whole.refine(&w, crate::spectral::DEFAULT_MAX_ITERATIONS);
        rest.refine(&w, crate::spectral::DEFAULT_MAX_ITERATIONS);
        let (lo, hi) = (whole.interval().lo, rest.interval().hi);
        if &lo * &lo <= &hi * &hi + &slack {
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Multipartite perturbation
// ---------------------------------------------------------------------------

/// A complete multipartite graph with some class-edges added and some
/// cross-edges deleted. Parts occupy consecutive index ranges, largest first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PerturbationSpec {
    pub part_sizes: Vec<usize>,
    pub added: Vec<(usize, usize)>,
    pub deleted: Vec<(usize, usize)>,
    /// The integer `k` of the unbalanced estimate, when it is to be checked.
    pub k: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationBound {
    /// `|ρ(G) − ρ(K) − 2(α₁−α₂)/n| ≤ 56(α₁+α₂)φ/n²` when `n₁−n_r ≤ n/400`.
    Near,
    /// The upper estimate against `ρ(T(n,r))` when `n₁−n_r ≥ 2k`.
    Unbalanced,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PerturbationGates {
    pub alpha1: usize,
    pub alpha2: usize,
    pub n: usize,
    pub r: usize,
    /// `max{α₁, α₂} ≤ n/(20r)³`.
    pub small_perturbation: bool,
    /// Tool convention for "n sufficiently large": `n ≥ 400·r`.
    pub large_n_proxy: bool,
    /// `n₁ − n_r ≤ n/400`.
    pub near_balanced: bool,
    /// `n₁ − n_r ≥ 2k` (and `k ≤ n/(20r)³`) for the supplied `k`.
    pub unbalanced: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PerturbationEvaluation {
    pub bound: PerturbationBound,
    pub verdict: Verdict,
    pub gates: PerturbationGates,
    /// Certified upper bound of the left-hand side.
    pub lhs_upper: String,
    pub rhs: String,
}

impl PerturbationSpec {
    pub fn order(&self) -> usize {
        self.part_sizes.iter().sum()
    }

    fn part_of(&self) -> Vec<usize> {
        self.part_sizes
            .iter()
            .enumerate()
            .flat_map(|(p, &s)| std::iter::repeat_n(p, s))
            .collect()
    }

    pub fn validate(&self) -> Result<(), VerifyError> {
        let bad = |m: String| Err(VerifyError::MalformedPerturbation(m));
        if self.part_sizes.is_empty() || self.part_sizes.contains(&0) {
            return bad("part sizes must be positive".into());
        }
        if self.part_sizes.windows(2).any(|w| w[0] < w[1]) {
            return bad("part sizes must be non-increasing".into());
        }
        let part = self.part_of();
        let n = part.len();
        let mut seen = BTreeSet::new();
        for (list, same) in [(&self.added, true), (&self.deleted, false)] {
            for &(u, v) in list.iter() {
                if u >= n || v >= n || u == v {
                    return bad(format!("pair ({u},{v}) out of range for n={n}"));
                }
                if (part[u] == part[v]) != same {
                    let kind = if same { "class" } else { "cross" };
                    return bad(format!("pair ({u},{v}) is not a {kind} pair"));
                }
                if !seen.insert((u.min(v), u.max(v))) {
                    return bad(format!("pair ({u},{v}) listed twice"));
                }
            }
        }
        Ok(())
    }

    pub fn base_graph(&self) -> Graph {
        crate::constructions::complete_multipartite(&self.part_sizes)
    }

    pub fn graph(&self) -> Graph {
        let mut g = self.base_graph();
        for &(u, v) in &self.added {
            g = g.with_edge(u, v);
        }
        for &(u, v) in &self.deleted {
            g = g.without_edge(u, v);
        }
        g
    }

    /// Equitable partition: touched vertices are singletons, the untouched
    /// rest of each part is one class.
    fn quotient(&self) -> Option<QuotientMatrix> {
        let part = self.part_of();
        let n = part.len();
        let mut touched = vec![false; n];
        for &(u, v) in self.added.iter().chain(&self.deleted) {
            touched[u] = true;
            touched[v] = true;
        }
        let mut classes: Vec<Vec<usize>> =
            (0..n).filter(|&v| touched[v]).map(|v| vec![v]).collect();
        for p in 0..self.part_sizes.len() {
            let rest: Vec<usize> = (0..n).filter(|&v| part[v] == p && !touched[v]).collect();
            if !rest.is_empty() {
                classes.push(rest);
            }
        }
        let added: BTreeSet<(usize, usize)> = self
            .added
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        let deleted: BTreeSet<(usize, usize)> = self
            .deleted
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        let adj = |u: usize, v: usize| {
            let key = (u.min(v), u.max(v));
            if part[u] == part[v] {
                added.contains(&key)
            } else {
                !deleted.contains(&key)
            }
        };
        let entries: Vec<Vec<Q>> = classes
            .iter()
            .map(|ci| {
                let rep = ci[0];
                classes
                    .iter()
                    .map(|cj| q(cj.iter().filter(|&&w| w != rep && adj(rep, w)).count() as i64))
                    .collect()
            })
            .collect();
        let m = QuotientMatrix {
            classes: classes.iter().map(|c| c[0]).collect(),
            class_sizes: classes.iter().map(|c| c.len() as u64).collect(),
            entries,
        };
        m.to_matrix().is_irreducible().then_some(m)
    }

    fn gates(&self) -> PerturbationGates {
        let n = self.order();
        let r = self.part_sizes.len();
        let (a1, a2) = (self.added.len(), self.deleted.len());
        let cube = (20 * r as u128).pow(3);
        let spread = self.part_sizes[0] - self.part_sizes[r - 1];
        PerturbationGates {
            alpha1: a1,
            alpha2: a2,
            n,
            r,
            small_perturbation: a1.max(a2) as u128 * cube <= n as u128,
            large_n_proxy: n >= 400 * r,
            near_balanced: 400 * spread <= n,
            unbalanced: self
                .k
                .is_some_and(|k| spread as u64 >= 2 * k && u128::from(k) * cube <= n as u128),
        }
    }
}

fn certify_perturbed(spec: &PerturbationSpec, tol: &Q) -> crate::spectral::CertifiedInterval {
    match spec.quotient() {
        Some(m) => {
            let mut c = PerronCertifier::new(&m.to_matrix()).expect("irreducible quotient");
            c.refine(tol, crate::spectral::DEFAULT_MAX_ITERATIONS);
            c.interval().clone()
        }
        None => rho_graph(&spec.graph(), tol),
    }
}

/// Evaluates one of the two estimates with certified values, ignoring the
/// size gates (they are reported in `gates`). The part-size hypothesis of
/// the chosen estimate must hold, otherwise the verdict is NOT_APPLICABLE.
pub fn evaluate_perturbation_inequality(
    spec: &PerturbationSpec,
    bound: PerturbationBound,
    tol: &Q,
) -> Result<PerturbationEvaluation, VerifyError> {
    spec.validate()?;
    let gates = spec.gates();
    let n = q(gates.n as i64);
    let r = gates.r as i64;
    let (a1, a2) = (gates.alpha1 as i64, gates.alpha2 as i64);
    let spread = (spec.part_sizes[0] - spec.part_sizes[gates.r - 1]) as i64;
    let shift = q(2 * (a1 - a2)) / &n;
    let na = |rhs: Q| PerturbationEvaluation {
        bound,
        verdict: Verdict::NotApplicable,
        gates: gates.clone(),
        lhs_upper: String::new(),
        rhs: crate::exact::to_decimal(&rhs, 15, false),
    };
    let dec = |x: &Q, up: bool| crate::exact::to_decimal(x, 15, up);
    match bound {
        PerturbationBound::Near => {
            let phi = spread.max(2 * (a1 + a2));
            let rhs = q(56 * (a1 + a2) * phi) / (&n * &n);
            if !gates.near_balanced {
                return Ok(na(rhs));
            }
            if a1 == 0 && a2 == 0 {
                // G = K: the left side is exactly zero
                return Ok(PerturbationEvaluation {
                    bound,
                    verdict: Verdict::Pass,
                    gates,
                    lhs_upper: dec(&Q::zero(), true),
                    rhs: dec(&rhs, false),
                });
            }
            let rg = certify_perturbed(spec, tol);
            let k = PerturbationSpec {
                added: Vec::new(),
                deleted: Vec::new(),
                ..spec.clone()
            };
            let rk = certify_perturbed(&k, tol);
            let d_lo = &rg.lo - &rk.hi - &shift;
            let d_hi = &rg.hi - &rk.lo - &shift;
            let upper = d_lo.abs().max(d_hi.abs());
            let verdict = if upper <= rhs {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            Ok(PerturbationEvaluation {
                bound,
                verdict,
                gates,
                lhs_upper: dec(&upper, true),
                rhs: dec(&rhs, false),
            })
        }
        PerturbationBound::Unbalanced => {
            let Some(k) = spec.k else {
                return Ok(na(Q::zero()));
            };
            let k = k as i64;
            let psi = (3 * k).max(2 * (a1 + a2));
            let base = q(1) - q(28 * r * psi) / &n;
            let fourth = {
                let sq = &base * &base;
                &sq * &sq
            };
            let tn = turan(gates.n, gates.r)?;
            let rt = {
                let t = PerturbationSpec {
                    part_sizes: turan_parts(gates.n, gates.r),
                    added: Vec::new(),
                    deleted: Vec::new(),
                    k: None,
                };
                debug_assert_eq!(t.base_graph(), tn);
                certify_perturbed(&t, tol)
            };
            let rhs = &rt.lo + &shift - q(2 * (r - 1) * k * k) / (q(r) * &n) * fourth
                + q(56 * (a1 + a2) * 7 * r * psi) / (&n * &n);
            if !gates.unbalanced {
                return Ok(na(rhs));
            }
            let rg = certify_perturbed(spec, tol);
            let verdict = if rg.hi <= rhs {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            Ok(PerturbationEvaluation {
                bound,
                verdict,
                gates,
                lhs_upper: dec(&rg.hi, true),
                rhs: dec(&rhs, false),
            })
        }
    }
}

/// Checks whichever estimate applies, returning NOT_APPLICABLE whenever
/// `max{α₁,α₂} ≤ n/(20r)³` or the `n ≥ 400r` proxy fails.
pub fn check_perturbation_bound(spec: &PerturbationSpec, tol: &Q) -> Result<Verdict, VerifyError> {
    spec.validate()?;
    let g = spec.gates();
    if !g.small_perturbation || !g.large_n_proxy {
        return Ok(Verdict::NotApplicable);
    }
    if g.near_balanced {
        return Ok(evaluate_perturbation_inequality(spec, PerturbationBound::Near, tol)?.verdict);
    }
    if g.unbalanced {
        return Ok(
            evaluate_perturbation_inequality(spec, PerturbationBound::Unbalanced, tol)?.verdict,
        );
    }
    Ok(Verdict::NotApplicable)
}

// ---------------------------------------------------------------------------
// Balanced blow-ups
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlowupComparison {
    pub s: i64,
    pub x_class: u64,
    pub y_class: u64,
    /// The floor/ceiling rounding reproduces the maximiser's parameters.
    pub same_parameters: bool,
    /// Certified ordering against the maximiser.
    pub outcome: String,
    /// Decided by exact polynomial arithmetic rather than separation.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalancedBlowupReport {
    pub n: u64,
    pub s_star: i64,
    pub x_class: u64,
    pub y_class: u64,
    pub comparisons: Vec<BlowupComparison>,
    /// Comparisons certified LESS.
    pub strict: usize,
    /// Comparisons certified EQUAL because the graphs coincide.
    pub same_graph: usize,
    pub holds: bool,
}

/// Parameters `(⌊(n−11−s)/2⌋, ⌈(n−7+s)/2⌉)`.
pub fn shifted_params(n: u64, s: i64) -> (u64, u64) {
    let a = (n as i64 - 11 - s).div_euclid(2);
    let b = (n as i64 - 7 + s + 1).div_euclid(2);
    (a as u64, b as u64)
}

/// Certifies, for every `s ≠ s*` with `|s| ≤ 22`, that the `F1` built from
/// `shifted_params(n, s)` has spectral radius below the balanced one, or
/// equal to it exactly when the rounding rebuilds the balanced parameters.
pub fn check_balanced_blowup(n: u64, budget: usize) -> Result<BalancedBlowupReport, VerifyError> {
    if n < 60 {
        return Err(VerifyError::OrderTooSmall { n, min: 60 });
    }
    let s_star = if n % 2 == 1 { 0 } else { 1 };
    let (xs, ys) = shifted_params(n, s_star);
    let star_matrix = quotient_matrix(&f1_st(xs, ys)?)?.to_matrix();
    let mut star = MatrixSource::new(&star_matrix)?;
    let mut comparisons = Vec::new();
    let (mut strict, mut same) = (0, 0);
    let mut holds = true;
    for s in -22i64..=22 {
        if s == s_star {
            continue;
        }
        let (x, y) = shifted_params(n, s);
        // the one other s that lands on the maximiser's parameters is the
        // equality case and must certify EQUAL
        let same_parameters = (x, y) == (xs, ys);
        let m = quotient_matrix(&f1_st(x, y)?)?.to_matrix();
        let mut other = MatrixSource::new(&m)?;
        let o = compare_sources(&mut other, &mut star, budget)?;
        let expected = if same_parameters {
            Ordering::Equal
        } else {
            Ordering::Less
        };
        holds &= o.ordering == expected;
        match o.ordering {
            Ordering::Less => strict += 1,
            Ordering::Equal if same_parameters => same += 1,
            _ => {}
        }
        let outcome = match o.ordering {
            Ordering::Less => "LESS",
            Ordering::Equal => "EQUAL",
            Ordering::Greater => "GREATER",
        }
        .to_string();
        comparisons.push(BlowupComparison {
            s,
            x_class: x,
            y_class: y,
            same_parameters,
            outcome,
            exact: o.exact,
        });
    }
    Ok(BalancedBlowupReport {
        n,
        s_star,
        x_class: xs,
        y_class: ys,
        comparisons,
        strict,
        same_graph: same,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalClaimReport {
    pub n: u64,
    pub rho: crate::spectral::CertifiedInterval,
    pub lower: String,
    pub upper: String,
    pub holds: bool,
}

/// Lower constant of the window, `13.2`.
pub fn window_constant() -> Q {
    qf(66, 5)
}

/// `(n−3)/2 − 13.2/n ≤ ρ(F1(⌊(n−11)/2⌋, ⌈(n−7)/2⌉)) ≤ n/2`, certified.
pub fn check_interval_claim(n: u64, tol: &Q) -> Result<IntervalClaimReport, VerifyError> {
    if n < 60 {
        return Err(VerifyError::OrderTooSmall { n, min: 60 });
    }
    let (s, t) = f1_balanced_params(n)?;
    let m: NonnegMatrix = quotient_matrix(&f1_st(s, t)?)?.to_matrix();
    let mut c = PerronCertifier::new(&m)?;
    c.refine(tol, crate::spectral::DEFAULT_MAX_ITERATIONS);
    let rho = c.interval().clone();
    let nq = q(n as i64);
    let lower = (&nq - q(3)) / q(2) - window_constant() / &nq;
    let upper = &nq / q(2);
    let holds = rho.lo >= lower && rho.hi <= upper && rho.width() <= *tol;
    Ok(IntervalClaimReport {
        n,
        lower: crate::exact::to_decimal(&lower, 15, false),
        upper: crate::exact::to_decimal(&upper, 15, true),
        rho,
        holds,
    })
}

/// `(n, e)` for the balanced `F1`, by construction and by the closed form
/// `⌊(n−3)²/4⌋ + 5`.
pub fn balanced_edge_identity(n: u64) -> Result<(u64, u64), VerifyError> {
    let (s, t) = f1_balanced_params(n)?;
    let built = f1_st(s, t)?.expand().size() as u64;
    Ok((built, f1_edge_bound(n)))
}

// ---------------------------------------------------------------------------
// Seeded inputs for property runs
// ---------------------------------------------------------------------------

/// `count` random graphs of order `1..=max_n`, edge probability 1/2, each
/// paired with a random vertex.
pub fn seeded_graphs(seed: u64, count: usize, max_n: usize) -> Vec<(Graph, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_n);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            let u = rng.gen_range(0..n);
            (Graph::from_pairs(n, &edges).expect("pairs in range"), u)
        })
        .collect()
}

/// `count` perturbations of balanced `K₂(a, a)` with `2a ≤ 2·max_a` and at
/// most three perturbing edges. Balanced parts keep the near-balanced
/// hypothesis `n₁ − n_r ≤ n/400` true at every order below 400.
pub fn seeded_perturbations(seed: u64, count: usize, max_a: usize) -> Vec<PerturbationSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let a = rng.gen_range(2..=max_a);
            random_perturbation(&mut rng, vec![a, a])
        })
        .collect()
}

fn random_perturbation(rng: &mut ChaCha8Rng, part_sizes: Vec<usize>) -> PerturbationSpec {
    let a = part_sizes[0];
    let n: usize = part_sizes.iter().sum();
    let mut spec = PerturbationSpec {
        part_sizes,
        added: Vec::new(),
        deleted: Vec::new(),
        k: None,
    };
    let edges = rng.gen_range(0..=3);
    let mut used = BTreeSet::new();
    while spec.added.len() + spec.deleted.len() < edges {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u == v || !used.insert((u.min(v), u.max(v))) {
            continue;
        }
        if (u < a) == (v < a) {
            spec.added.push((u, v));
        } else {
            spec.deleted.push((u, v));
        }
    }
    spec
}
