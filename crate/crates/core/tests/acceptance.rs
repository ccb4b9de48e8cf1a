//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fail.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Ratio;

use topocent::forests::{lplus_diag_rational, tree_center};
use topocent::spectral::topological_centrality;
use topocent::verify::{random_instances, run_suite, CheckResult, Suite, VerifyConfig};
use topocent::walks::{estimate_hitting_mc_with, McOptions};
use topocent::{build_spectral, Graph};

const SEED: u64 = 42;

struct Outcome {
    ok: bool,
    detail: String,
}

fn from_checks(results: &[CheckResult]) -> Outcome {
    let failed: Vec<String> = results.iter().filter(|r| !r.passed).map(|r| r.line()).collect();
    let worst = results
        .iter()
        .filter(|r| r.tolerance > 0.0)
        .map(|r| r.max_residual / r.tolerance)
        .fold(0.0, f64::max);
    Outcome {
        ok: failed.is_empty(),
        detail: if failed.is_empty() {
            format!("{} checks, worst residual/tolerance {worst:.1e}", results.len())
        } else {
            failed.join("; ")
        },
    }
}

fn checks_named(suite: Suite, names: &[&str]) -> Vec<CheckResult> {
    run_suite(suite, &VerifyConfig { seed: SEED, ..Default::default() })
        .into_iter()
        .filter(|r| names.contains(&r.name.as_str()))
        .collect()
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    out.detail += &format!(", {:.2}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs());
    if elapsed > limit {
        out.ok = false;
    }
    out
}

fn criterion_1() -> Outcome {
    timed(Duration::from_secs(60), || {
        from_checks(&checks_named(Suite::Detour, &["avg_detour_eq_lplus_diag"]))
    })
}

fn criterion_2() -> Outcome {
    from_checks(&checks_named(
        Suite::Commute,
        &["commute_eq_vol_resistance", "detour_hitting_eq_commute", "detour_reversal_symmetry"],
    ))
}

fn criterion_3() -> Outcome {
    from_checks(&checks_named(Suite::Circuit, &["recurrence_eq_detour", "superposition_reciprocity"]))
}

fn criterion_4() -> Outcome {
    let mut out = from_checks(&checks_named(Suite::Forests, &["forest_diag_eq_spectral"]));
    let r = |a, b| Ratio::new(a, b);
    let hand = [
        (Graph::path(3), vec![r(5, 9), r(2, 9), r(5, 9)]),
        (Graph::complete(3), vec![r(2, 9); 3]),
        (Graph::star(4), vec![r(3, 16), r(11, 16), r(11, 16), r(11, 16)]),
        (Graph::path(4), vec![r(7, 8), r(3, 8), r(3, 8), r(7, 8)]),
    ];
    let exact = hand.iter().all(|(g, want)| lplus_diag_rational(g).as_ref() == Ok(want));
    out.ok &= exact;
    out.detail += &format!(", exact rationals on P3/K3/S4/P4: {exact}");
    out
}

fn criterion_5() -> Outcome {
    let mut out = from_checks(&checks_named(Suite::Trees, &["tree_formula_eq_spectral", "argmax_cstar_in_center"]));
    let p4 = Graph::path(4);
    let center = tree_center(&p4).unwrap_or_default();
    let cstar = topological_centrality(&build_spectral(&p4).expect("connected"));
    let tie = center == [1, 2] && (cstar[1] - cstar[2]).abs() < 1e-12 && cstar[1] > cstar[0];
    out.ok &= tie;
    out.detail += &format!(", P4 center {center:?}");
    out
}

fn criterion_6() -> Outcome {
    let mut out = from_checks(&checks_named(Suite::MonteCarlo, &["hitting_within_4_sigma", "worker_count_independent"]));
    let g = Graph::complete(4);
    let opts = McOptions::default();
    let a = estimate_hitting_mc_with(&g, 0, 1, 10_000, SEED, opts);
    let b = estimate_hitting_mc_with(&g, 0, 1, 10_000, SEED, opts);
    let repeatable = a.is_ok() && a == b;
    out.ok &= repeatable;
    out.detail += &format!(", repeatable for fixed seed: {repeatable}");
    out
}

fn criterion_7() -> Outcome {
    timed(Duration::from_secs(120), || {
        from_checks(&checks_named(
            Suite::Extremal,
            &["star_minimizes_tree_kirchhoff", "complete_minimizes_kirchhoff_n5"],
        ))
    })
}

fn criterion_8() -> Outcome {
    let results = run_suite(Suite::Perturbation, &VerifyConfig { seed: SEED, ..Default::default() });
    let mut out = from_checks(&results);
    let notes: Vec<&str> = results.iter().filter_map(|r| r.note.as_deref()).collect();
    out.detail += &format!("; {}", notes.join("; "));
    out
}

fn criterion_9() -> Outcome {
    let mut out = from_checks(&checks_named(
        Suite::Spectral,
        &["routes_agree", "moore_penrose", "double_centering", "embedding_gram"],
    ));
    // the instances used by the walk and circuit criteria as well
    let mut worst = [0.0f64; 3];
    let graphs = random_instances(SEED, 10, 100, 4, 12, 0.4)
        .into_iter()
        .chain(random_instances(SEED, 20, 50, 3, 10, 0.4));
    let mut count = 0;
    for g in graphs {
        let b = build_spectral(&g).expect("connected");
        let (r1, r2) = b.moore_penrose_residuals();
        worst[0] = worst[0].max(b.route_discrepancy());
        worst[1] = worst[1].max(r1.max(r2));
        worst[2] = worst[2].max(b.centering_residual());
        count += 1;
    }
    let ok = worst[0] <= 1e-8 && worst[1] <= 1e-9 && worst[2] <= 1e-10;
    out.ok &= ok;
    out.detail += &format!(
        ", {count} further instances: routes {:.1e}, moore-penrose {:.1e}, centering {:.1e}",
        worst[0], worst[1], worst[2]
    );
    out
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("average detour overhead equals l+_kk", criterion_1),
        ("commute time, detour equivalence and reversal symmetry", criterion_2),
        ("electrical recurrence equals detour overhead; superposition and reciprocity", criterion_3),
        ("forest census diagonal equals spectral diagonal", criterion_4),
        ("tree formula, center containment and P4 tie", criterion_5),
        ("Monte Carlo hitting times within 4 sigma, deterministic", criterion_6),
        ("star and complete graph minimize the Kirchhoff index", criterion_7),
        ("perturbation direction table", criterion_8),
        ("spectral self-consistency", criterion_9),
    ];
    let mut all = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let out = f();
        all &= out.ok;
        println!("{} criterion {}: {name} ({})", if out.ok { "PASS" } else { "FAIL" }, i + 1, out.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
