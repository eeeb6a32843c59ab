//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use spectral_extremal::blowup::{check_g_leading, verify_g_leading};
use spectral_extremal::constructions::{grotzsch, turan};
use spectral_extremal::enumerate::{brute_force_all, enumerate_triangle_free, EnumFilter};
use spectral_extremal::exact::{q, qf};
use spectral_extremal::graph::{canonical_form, graph6_encode, is_k_colorable, Graph};
use spectral_extremal::spectral::{
    compare_sources, default_tol, GraphCertifier, DEFAULT_MAX_ITERATIONS,
};
use spectral_extremal::verify::{
    balanced_edge_identity, check_balanced_blowup, check_interval_claim, check_nosal,
    check_perturbation_bound, check_vertex_deletion, evaluate_perturbation_inequality,
    extremal_edges, extremal_spectral, seeded_graphs, seeded_perturbations, sk_prediction,
    verify_spectral_turan, ExtremalValue, PerturbationBound, Prediction, Verdict,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn canon(g: &Graph) -> Graph {
    canonical_form(g).expect("small orders")
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

fn enumeration_oracle() -> Outcome {
    let start = Instant::now();
    let mut counts = Vec::new();
    let mut ok = true;
    for n in 1..=7 {
        let oracle: BTreeSet<Graph> = brute_force_all(n)
            .unwrap()
            .into_iter()
            .filter(Graph::is_triangle_free)
            .collect();
        let ours: Vec<Graph> = enumerate_triangle_free(n, EnumFilter::default())
            .unwrap()
            .map(|g| canon(&g))
            .collect();
        let set: BTreeSet<Graph> = ours.iter().cloned().collect();
        ok &= set.len() == ours.len() && set == oracle;
        counts.push(oracle.len());
    }
    let elapsed = start.elapsed();
    ok &= elapsed <= Duration::from_secs(120);
    outcome(
        ok,
        format!("oracle counts n=1..7 {counts:?}, class sets equal; {elapsed:.1?}"),
    )
}

fn grotzsch_minimality() -> Outcome {
    let f = EnumFilter::triangle_free().with_min_chromatic(4);
    let at10 = enumerate_triangle_free(10, f).unwrap().count();
    let start = Instant::now();
    let at11: Vec<Graph> = enumerate_triangle_free(11, f)
        .unwrap()
        .map(|g| canon(&g))
        .collect();
    let elapsed = start.elapsed();
    let gz = canon(&grotzsch());
    let ok = at10 == 0
        && at11.contains(&gz)
        && at11.iter().all(|g| !is_k_colorable(g, 3))
        && elapsed <= Duration::from_secs(600);
    outcome(
        ok,
        format!(
            "n=10: {at10} classes; n=11: {} class(es), Grötzsch present: {}; {elapsed:.1?}",
            at11.len(),
            at11.contains(&gz)
        ),
    )
}

fn non_bipartite_maximiser() -> Outcome {
    let start = Instant::now();
    let tol = default_tol();
    let mut ok = true;
    let mut notes = Vec::new();
    for n in 5..=10 {
        let f = EnumFilter::triangle_free().non_bipartite();
        let r = extremal_spectral(n, f, &tol, DEFAULT_MAX_ITERATIONS).unwrap();
        let sk = canon(&sk_prediction(n).unwrap());
        let converged = matches!(&r.value, Some(ExtremalValue::Rho(iv)) if iv.width() <= tol);
        ok &= r.winners == vec![graph6_encode(&sk)]
            && r.ties_under_budget.is_empty()
            && r.winners_revalidated
            && converged;
        // independent pass: every other class certified below SK
        let reference = GraphCertifier::new(&sk);
        let (mut below, mut separated, mut other) = (0usize, 0usize, 0usize);
        for g in enumerate_triangle_free(n, f).unwrap() {
            let g = canon(&g);
            if g == sk {
                continue;
            }
            let mut a = GraphCertifier::new(&g);
            let mut b = reference.clone();
            match compare_sources(&mut a, &mut b, DEFAULT_MAX_ITERATIONS) {
                Ok(o) if o.ordering == Ordering::Less => {
                    below += 1;
                    separated += usize::from(!o.exact);
                }
                _ => other += 1,
            }
        }
        ok &= other == 0;
        notes.push(format!("n={n}: {below} below ({separated} by separation)"));
    }
    let elapsed = start.elapsed();
    ok &= elapsed <= Duration::from_secs(900);
    outcome(
        ok,
        format!("unique SK winner; {}; {elapsed:.1?}", notes.join(", ")),
    )
}

fn mantel_and_spectral_turan() -> Outcome {
    let mut ok = true;
    for n in 3..=13usize {
        let r = extremal_edges(n, EnumFilter::default()).unwrap();
        let t = graph6_encode(&canon(&turan(n, 2).unwrap()));
        ok &= r.value == Some(ExtremalValue::Edges((n * n / 4) as u64))
            && r.winners == vec![t]
            && r.winners_revalidated;
    }
    let tol = default_tol();
    for n in 2..=7 {
        ok &= verify_spectral_turan(n, &tol, DEFAULT_MAX_ITERATIONS).unwrap();
    }
    outcome(
        ok,
        "edge maximum floor(n^2/4) uniquely at T(n,2) for n=3..13; spectral Turán n=2..7",
    )
}

fn balanced_blowup() -> Outcome {
    let mut ok = true;
    let mut slowest = Duration::ZERO;
    let mut tallies = BTreeSet::new();
    for n in (60..=80).chain([1001, 10_000, 1_000_001]) {
        let start = Instant::now();
        let r = check_balanced_blowup(n, DEFAULT_MAX_ITERATIONS).unwrap();
        slowest = slowest.max(start.elapsed());
        let equal_is_same = r
            .comparisons
            .iter()
            .all(|c| (c.outcome == "EQUAL") == c.same_parameters);
        ok &= r.holds && r.comparisons.len() == 44 && equal_is_same;
        tallies.insert((r.comparisons.len(), r.strict, r.same_graph));
    }
    ok &= slowest <= Duration::from_secs(60);
    outcome(
        ok,
        format!(
            "n=60..80, 1001, 10^4, 10^6+1: (comparisons, LESS, EQUAL) = {tallies:?}; the \
             EQUAL one is the s whose rounding rebuilds the maximiser; slowest {slowest:.1?}"
        ),
    )
}

fn g_coefficients() -> Outcome {
    let mut ok = true;
    for x in [-2, -1, 0] {
        for t in [-1i64, 0, 1, 2] {
            let xq = q(x);
            ok &= verify_g_leading(&xq, t).unwrap();
            // independent restatement of the expected values
            let c = check_g_leading(&xq, t).unwrap();
            ok &= c.c10 == (q(6) + q(4 * x)) / q(2048)
                && c.c9 == q(39 + t * t + 108 * x + 76 * x * x) / q(2048);
        }
    }
    let mut case_two = true;
    for x in [q(-2), q(-1), q(0), qf(1, 2), q(5), qf(-3, 7)] {
        let c = check_g_leading(&x, 1).unwrap();
        case_two &= c.c9 == (q(40) + q(108) * &x + q(76) * &x * &x) / q(2048);
    }
    case_two &= check_g_leading(&q(0), 1).unwrap().c9 == qf(40, 2048);
    outcome(
        ok && case_two,
        "n^10 and n^9 coefficients exact on x in {-2,-1,0} x t in {-1,0,1,2}; \
         g(x,1) n^9 coefficient (40+108x+76x^2)/2048, 40/2048 at x=0",
    )
}

fn interval_claim() -> Outcome {
    let tol = default_tol();
    let mut ok = true;
    let mut notes = Vec::new();
    for n in [100, 1001, 100_000] {
        let r = check_interval_claim(n, &tol).unwrap();
        ok &= r.holds && r.rho.width() <= tol;
        let (lo, hi) = r.rho.to_decimal_pair(12);
        notes.push(format!("n={n}: [{lo}, {hi}]"));
    }
    outcome(ok, notes.join("; "))
}

fn property_suites() -> Outcome {
    let tol = default_tol();
    let mut classes = 0;
    let mut nosal_ok = true;
    for n in 1..=9 {
        for g in enumerate_triangle_free(n, EnumFilter::default()).unwrap() {
            classes += 1;
            nosal_ok &= check_nosal(&g, &tol).unwrap();
        }
    }
    let random = seeded_graphs(0, 1000, 10);
    let deletion_ok = random
        .iter()
        .all(|(g, u)| check_vertex_deletion(g, *u, &tol).unwrap());
    let specs = seeded_perturbations(0, 100, 100);
    let mut pert_ok = specs.len() == 100;
    let mut gated_na = 0;
    for s in &specs {
        pert_ok &= s.order() <= 200 && s.added.len() + s.deleted.len() <= 3;
        let ev = evaluate_perturbation_inequality(s, PerturbationBound::Near, &tol).unwrap();
        pert_ok &= ev.gates.near_balanced && ev.verdict == Verdict::Pass;
        gated_na +=
            usize::from(check_perturbation_bound(s, &tol).unwrap() == Verdict::NotApplicable);
    }
    outcome(
        nosal_ok && deletion_ok && pert_ok,
        format!(
            "Nosal on {classes} triangle-free classes (n<=9): {nosal_ok}; vertex deletion on \
             1000 seeded graphs: {deletion_ok}; near-balanced perturbation estimate on 100 \
             seeded K2(a,a) specs: {pert_ok} (size gates fail at this scale, the gated check \
             reports {gated_na}/100 NOT_APPLICABLE)"
        ),
    )
}

fn desk_scale_substitute() -> Outcome {
    let tol = default_tol();
    let f = EnumFilter::triangle_free().with_min_chromatic(4);
    let mut ok = true;
    let mut notes = Vec::new();
    for n in [11, 12] {
        let e = extremal_edges(n, f).unwrap();
        let r = extremal_spectral(n, f, &tol, DEFAULT_MAX_ITERATIONS).unwrap();
        for rep in [&e, &r] {
            ok &= !rep.winners.is_empty()
                && rep.winners_revalidated
                && rep.matches_paper_prediction != Prediction::NotApplicable
                && !rep.prediction_in_range;
        }
        notes.push(format!(
            "n={n}: edges {:?} ({:?}), rho ({:?})",
            e.value, e.matches_paper_prediction, r.matches_paper_prediction
        ));
    }
    let identity = (11..=500).all(|n| {
        let (built, formula) = balanced_edge_identity(n).unwrap();
        let m = n - 3;
        built == formula && formula == m * m / 4 + 5
    });
    ok &= identity;
    outcome(
        ok,
        format!("{}; edge identity 11..=500: {identity}", notes.join("; ")),
    )
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_spectral-extremal");
    let run = |workers: &str| {
        let out = Command::new(bin)
            .args([
                "verify-all",
                "--deterministic",
                "--seed",
                "0",
                "--workers",
                workers,
            ])
            .output()
            .expect("binary runs");
        (out.status.code(), out.stdout)
    };
    let (c1, a) = run("1");
    let (c2, b) = run("1");
    let (c3, c) = run("8");
    let ok = c1 == Some(0) && c2 == Some(0) && c3 == Some(0) && a == b && a == c && !a.is_empty();
    outcome(
        ok,
        format!(
            "verify-all twice with 1 worker and once with 8: exit {c1:?}/{c2:?}/{c3:?}, \
             {} bytes, identical: {}",
            a.len(),
            a == b && a == c
        ),
    )
}

// ---------------------------------------------------------------------------

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "enumeration matches the all-graphs oracle, n=1..7",
            enumeration_oracle,
        ),
        (
            "no triangle-free 4-chromatic graph at n=10, Grötzsch at n=11",
            grotzsch_minimality,
        ),
        (
            "unique non-bipartite spectral maximiser is SK, n=5..10",
            non_bipartite_maximiser,
        ),
        (
            "Mantel n=3..13 and spectral Turán n=2..7",
            mantel_and_spectral_turan,
        ),
        (
            "balanced blow-up is the spectral maximiser over |s|<=22",
            balanced_blowup,
        ),
        ("exact n^10/n^9 coefficients of g(x,t)", g_coefficients),
        (
            "spectral radius window of the balanced blow-up",
            interval_claim,
        ),
        (
            "Nosal, vertex deletion and perturbation property suites",
            property_suites,
        ),
        (
            "desk-scale substitute for the asymptotic statements",
            desk_scale_substitute,
        ),
        (
            "verify-all is byte-identical across runs and worker counts",
            determinism,
        ),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        let status = if o.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!o.pass);
        println!("criterion {:>2} {status}: {name} — {}", i + 1, o.detail);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
