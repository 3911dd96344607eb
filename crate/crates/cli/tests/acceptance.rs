//! Acceptance suite. Prints one line per criterion:
//! `[criterion N] PASS|FAIL|SKIP <detail>` and exits non-zero on any FAIL.
//!
//! Criteria 1–9 need the Epinions edge list in `ROBUSTNET_DATA` (default:
//! the workspace's `data/`, see `scripts/fetch_epinions.sh`). Without it
//! they report SKIP; set `ROBUSTNET_REQUIRE_DATA=1` to turn a missing
//! dataset into a failure.

use std::time::Instant;

use rand::Rng;
use robustnet::adversary::{CorruptionSpec, Strategy};
use robustnet::components::{connected_components, connected_components_bfs};
use robustnet::generate::{generate_ba, generate_gnm, BaSpec};
use robustnet::privacy::{dp_guarantee, paalec_params, PrivacyParams};
use robustnet::protocols::{
    run_2sff, run_a3f, select_fat_nodes, select_participants, ProtocolConfig, ProtocolKind,
};
use robustnet::rng::{rng_from_seed, substream};
use robustnet::theorem::TheoremInstanceSpec;
use robustnet::{play_game, GameConfig, Graph, NodeId};
use robustnet_cli::output::csv_string;
use robustnet_cli::source::{epinions_path, load_edgelist_file};
use robustnet_cli::sweep::{run_sweep_with_threads, SummaryRow};
use robustnet_cli::{run_theorem_check, GraphSource, SweepSpec};

const REPS: usize = 10;
const EPINIONS_NODES: usize = 75_879;
const EPINIONS_EDGE_LINES: usize = 508_837;
/// Undirected edge count after symmetrizing and deduplicating. Taken from
/// the dataset's public statistics; not yet confirmed by a local run.
const EPINIONS_UNDIRECTED_EDGES: usize = 405_740;

enum Status {
    Pass,
    Fail,
    Skip,
}

struct Report {
    failed: usize,
    skipped: usize,
}

impl Report {
    fn record(&mut self, id: &str, status: Status, detail: String) {
        let word = match status {
            Status::Pass => "PASS",
            Status::Fail => {
                self.failed += 1;
                "FAIL"
            }
            Status::Skip => {
                self.skipped += 1;
                "SKIP"
            }
        };
        println!("[criterion {id}] {word} {detail}");
    }

    fn check(&mut self, id: &str, pass: bool, detail: String) {
        self.record(id, if pass { Status::Pass } else { Status::Fail }, detail);
    }
}

fn ba(n: usize, m: usize, seed: u64) -> Graph {
    generate_ba(
        BaSpec {
            n,
            m_attach: m,
            seed_size: m + 1,
        },
        &mut rng_from_seed(seed),
    )
    .unwrap()
}

// ---------------------------------------------------------------- Epinions

fn epinions_point(
    g: &Graph,
    kind: ProtocolKind,
    m: u32,
    q: f64,
    adversary: Strategy,
    fractions: &[f64],
) -> Vec<SummaryRow> {
    let mut spec = SweepSpec::new(GraphSource::Epinions);
    spec.protocols = vec![kind];
    spec.m_values = vec![m];
    spec.q_values = vec![q];
    spec.adversary = adversary;
    spec.fractions = fractions.to_vec();
    spec.replicates = REPS;
    spec.base_seed = 2024;
    run_sweep_with_threads(&spec, g, 0).unwrap().summary
}

fn mean_at(g: &Graph, kind: ProtocolKind, m: u32, adversary: Strategy, fraction: f64) -> f64 {
    epinions_point(g, kind, m, 1.0, adversary, &[fraction])[0]
        .frac_all
        .mean
}

fn epinions_criteria(report: &mut Report) {
    let path = match epinions_path() {
        Ok(p) => p,
        Err(e) => {
            let strict = std::env::var_os("ROBUSTNET_REQUIRE_DATA").is_some();
            for id in 1..=9 {
                let status = if strict { Status::Fail } else { Status::Skip };
                report.record(
                    &id.to_string(),
                    status,
                    format!("needs the Epinions dataset: {e}"),
                );
            }
            return;
        }
    };
    let start = Instant::now();
    let snap = load_edgelist_file(&path).unwrap();
    let g = &snap.graph;
    let load_s = start.elapsed().as_secs_f64();
    use ProtocolKind::{A3f, None as NoProtocol, TwoSff};
    use Strategy::{RandomFailures as Random, TargetedDegree as Targeted};

    let x = mean_at(g, NoProtocol, 0, Targeted, 0.2);
    report.check(
        "1",
        x < 0.05,
        format!("no enrichment, targeted 20%: mean {x:.4} < 0.05"),
    );

    let x = mean_at(g, A3f, 15, Targeted, 0.15);
    report.check(
        "2",
        x >= 0.92,
        format!("15-A3F, targeted 15%: mean {x:.4} >= 0.92"),
    );

    let x = mean_at(g, A3f, 15, Targeted, 0.3);
    report.check(
        "3",
        (x - 0.85).abs() <= 0.07,
        format!("15-A3F, targeted 30%: mean {x:.4} in 0.85 ± 0.07"),
    );

    let x = mean_at(g, TwoSff, 15, Targeted, 0.3);
    report.check(
        "4",
        (x - 0.60).abs() <= 0.10,
        format!("15-2SFF, targeted 30%: mean {x:.4} in 0.60 ± 0.10"),
    );

    let a = mean_at(g, A3f, 10, Random, 0.9);
    let s = mean_at(g, TwoSff, 10, Random, 0.9);
    report.check(
        "5",
        (a - 0.80).abs() <= 0.08 && (s - 0.60).abs() <= 0.08 && a > s,
        format!(
            "random 90%, m=10: A3F {a:.4} in 0.80 ± 0.08, 2SFF {s:.4} in 0.60 ± 0.08, A3F > 2SFF"
        ),
    );

    let pts = epinions_point(g, TwoSff, 5, 1.0, Random, &[0.0, 0.05, 0.1, 0.15, 0.2]);
    let worst = pts
        .iter()
        .map(|p| p.frac_all.mean)
        .fold(f64::INFINITY, f64::min);
    report.check(
        "6",
        worst >= 0.95,
        format!("5-2SFF, random <= 20%: min mean {worst:.4} >= 0.95"),
    );

    let x = mean_at(g, A3f, 15, Random, 0.6);
    report.check(
        "7",
        x >= 0.95,
        format!("15-A3F, random 60%: mean {x:.4} >= 0.95"),
    );

    let fractions = [0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3];
    let full = epinions_point(g, A3f, 15, 1.0, Targeted, &fractions);
    let partial = epinions_point(g, A3f, 15, 0.1, Targeted, &fractions);
    let gaps: Vec<f64> = full
        .iter()
        .zip(&partial)
        .map(|(f, p)| {
            (p.frac_participants.expect("participants survive").mean - f.frac_all.mean).abs()
        })
        .collect();
    let worst = gaps.iter().copied().fold(0.0, f64::max);
    report.check(
        "8",
        worst <= 0.05,
        format!("15-A3F q=0.1 vs full participation, targeted 0–30%: max gap {worst:.4} <= 0.05"),
    );

    let ok = g.node_count() == EPINIONS_NODES
        && snap.data_lines == EPINIONS_EDGE_LINES
        && g.edge_count() == EPINIONS_UNDIRECTED_EDGES;
    report.check(
        "9",
        ok,
        format!(
            "ingest: nodes {} (want {EPINIONS_NODES}), edge lines {} (want {EPINIONS_EDGE_LINES}), \
             undirected {} (golden {EPINIONS_UNDIRECTED_EDGES}), self-loops {}, loaded in {load_s:.2}s",
            g.node_count(),
            snap.data_lines,
            g.edge_count(),
            snap.self_loops
        ),
    );

    // per-point budget, single-threaded, on the real graph
    let mut spec = SweepSpec::new(GraphSource::Epinions);
    spec.protocols = vec![A3f];
    spec.m_values = vec![15];
    spec.adversary = Targeted;
    spec.fractions = vec![0.3];
    spec.replicates = 1;
    spec.timing = true;
    let ms = run_sweep_with_threads(&spec, g, 1).unwrap().rows[0]
        .wall_ms
        .unwrap();
    report.check(
        "9/budget",
        ms < 10_000.0,
        format!("15-A3F sweep point on Epinions, 1 thread: {ms:.0} ms < 10000 ms"),
    );
}

// ---------------------------------------------------------------- properties

fn criterion_10(report: &mut Report) {
    let mut rng = rng_from_seed(10);
    let mut mismatches = 0;
    for _ in 0..1_000 {
        let n = rng.gen_range(1..=1_000u32) as usize;
        let max_m = (n * (n - 1) / 2).min(2 * n);
        let m = rng.gen_range(0..=max_m as u32) as usize;
        let g = generate_gnm(n, m, &mut rng).unwrap();
        if connected_components(&g) != connected_components_bfs(&g) {
            mismatches += 1;
        }
    }
    let mut big_mismatches = 0;
    for seed in 0..20u64 {
        let g = ba(100_000, 1 + (seed % 3) as usize, 100 + seed);
        // drop 5% of nodes at random so there are many components
        let removed = select_participants(
            &g.nodes().collect::<Vec<_>>(),
            0.05,
            &mut substream(seed, 1),
        )
        .unwrap();
        let sub = g.remove_nodes(&removed).unwrap().graph;
        if connected_components(&sub) != connected_components_bfs(&sub) {
            big_mismatches += 1;
        }
    }
    report.check(
        "10",
        mismatches == 0 && big_mismatches == 0,
        format!(
            "union-find vs BFS: {mismatches}/1000 random graphs (n <= 1000) and \
             {big_mismatches}/20 BA graphs (n = 100000) differ"
        ),
    );
}

fn criterion_11(report: &mut Report) {
    let mut checked = 0;
    let mut differing = 0;
    for gseed in 0..10u64 {
        let g = ba(2_000, 1 + (gseed % 3) as usize, gseed);
        for seed in 0..10u64 {
            for q in [1.0, 0.5, 0.1] {
                for (strategy, fraction) in [
                    (Strategy::RandomFailures, 0.3),
                    (Strategy::TargetedDegree, 0.1),
                    (Strategy::RandomFailures, 0.0),
                ] {
                    let corruption = CorruptionSpec { strategy, fraction };
                    let none = ProtocolConfig {
                        kind: ProtocolKind::None,
                        m: 0,
                        q,
                        fat_count: None,
                    };
                    let base = play_game(&g, &GameConfig::new(none, corruption, seed)).unwrap();
                    for kind in [ProtocolKind::TwoSff, ProtocolKind::A3f] {
                        let cfg = ProtocolConfig { kind, ..none };
                        checked += 1;
                        if play_game(&g, &GameConfig::new(cfg, corruption, seed)).unwrap() != base {
                            differing += 1;
                        }
                    }
                }
            }
        }
    }
    report.check(
        "11",
        differing == 0,
        format!("m=0 vs no protocol: {differing}/{checked} outcomes differ"),
    );
}

fn criterion_12(report: &mut Report) {
    let mut bad = 0;
    let mut cases = 0;
    for seed in 0..50u64 {
        let base = ba(1_000, 1, seed);
        // isolated nodes make some 2SFF participants idle
        let g = Graph::from_edges(base.node_count() + 50, base.edges()).unwrap();
        let mut rng = rng_from_seed(seed);
        let all: Vec<NodeId> = g.nodes().collect();
        let q = [1.0, 0.5, 0.1][seed as usize % 3];
        let participants = select_participants(&all, q, &mut rng).unwrap();
        let eligible = participants.iter().filter(|&&v| g.degree(v) > 0).count() as u64;
        let m = (seed % 16) as u32;
        let fat = select_fat_nodes(&g, 10).unwrap();
        let two = run_2sff(&g, &participants, m, &mut rng).unwrap();
        let a3f = run_a3f(&g, &participants, &fat, m, &mut rng).unwrap();
        cases += 2;
        bad += (two.messages_sent != 2 * m as u64 * eligible) as usize;
        bad += (a3f.messages_sent != 2 * m as u64 * participants.len() as u64) as usize;
    }
    report.check(
        "12",
        bad == 0,
        format!("messages = 2·m·|eligible participants|: {bad}/{cases} runs disagree"),
    );
}

fn criterion_13(report: &mut Report) {
    let spec = TheoremInstanceSpec {
        n: 10_000,
        c: 1.0,
        a: 0.2,
        b: 0.6,
        alpha: 0.5,
        beta: 1.0,
        gamma: 1.0,
    };
    let r = run_theorem_check(spec, 100, 13).unwrap();
    report.check(
        "13",
        spec.lower_condition() && r.connected_trials() >= 95,
        format!(
            "C=1 a=0.2 b=0.6 alpha=0.5, n=10^4: honest graph connected in {}/100 trials (need >= 95)",
            r.connected_trials()
        ),
    );
}

fn criterion_14(report: &mut Report) {
    let spec = TheoremInstanceSpec {
        n: 10_000,
        c: 1.0,
        a: 0.2,
        b: 0.8,
        alpha: 0.4,
        beta: 0.5,
        gamma: 0.5,
    };
    let r = run_theorem_check(spec, 100, 14).unwrap();
    let hyp = spec.lower_condition() && spec.upper_condition();
    report.check(
        "14",
        hyp && r.trials_meeting_bound() >= 95,
        format!(
            "C=1 a=0.2 b=0.8 alpha=0.4 beta=gamma=0.5, n=10^4: xi >= {:.2} - 0.02 in {}/100 trials \
             (need >= 95; mean xi {:.4})",
            r.xi_bound(),
            r.trials_meeting_bound(),
            r.mean_xi()
        ),
    );
}

fn criterion_15(report: &mut Report) {
    let mut spec = SweepSpec::new(GraphSource::parse_ba("5000,2,3").unwrap());
    spec.protocols = vec![ProtocolKind::None, ProtocolKind::TwoSff, ProtocolKind::A3f];
    spec.m_values = vec![0, 3, 8];
    spec.q_values = vec![1.0, 0.25];
    spec.fractions = vec![0.0, 0.2, 0.6];
    spec.replicates = 3;
    spec.base_seed = 15;
    let g = spec.graph.resolve(spec.base_seed).unwrap();
    let one = csv_string(&run_sweep_with_threads(&spec, &g, 1).unwrap().rows).unwrap();
    let many = csv_string(&run_sweep_with_threads(&spec, &g, 8).unwrap().rows).unwrap();
    let again = csv_string(&run_sweep_with_threads(&spec, &g, 3).unwrap().rows).unwrap();
    report.check(
        "15",
        one == many && one == again,
        format!("{} CSV bytes identical at 1, 8 and 3 threads", one.len()),
    );
}

fn criterion_16(report: &mut Report) {
    // References evaluated at 40 digits from the exact binary inputs.
    let paalec: [(f64, f64, f64, f64, f64, f64); 5] = [
        (
            0.5,
            2.0,
            1e-5,
            100.0,
            1.2840254166877414841,
            0.23025850929940456677,
        ),
        (
            1.0,
            1.0,
            0.1,
            1.0,
            2.7182818284590452354,
            4.605170185988091257,
        ),
        (
            3.0,
            0.7,
            0.02,
            7.5,
            72.654424207165494134,
            1.0432061347808389434,
        ),
        (
            0.1,
            1.0,
            1e-9,
            1000.0,
            1.1051709180756476309,
            0.041446531673892822188,
        ),
        (
            2.5,
            3.0,
            0.3,
            2.0,
            2.3009758908928249279,
            1.2039728043259360296,
        ),
    ];
    let close = |got: f64, want: f64| (got - want).abs() <= 1e-12 * want.abs();
    let mut bad = Vec::new();
    for (epsilon, sensitivity, delta, s, alpha, beta) in paalec {
        let p = PrivacyParams {
            epsilon,
            delta,
            sensitivity,
            s,
            xi: 1.0,
        };
        let got = paalec_params(&p).unwrap();
        if !close(got.alpha, alpha) || !close(got.beta, beta) {
            bad.push(format!("paalec{:?}", (epsilon, sensitivity, delta, s)));
        }
    }
    let inv_e = PrivacyParams {
        epsilon: 1.0,
        delta: (-1.0f64).exp(),
        sensitivity: 1.0,
        s: 2.0,
        xi: 1.0,
    };
    if !close(paalec_params(&inv_e).unwrap().beta, 0.99999999999999996622) {
        bad.push("beta at delta=1/e".into());
    }
    let dp: [(f64, f64, f64); 4] = [
        (0.9, 0.01, 0.109999999999999978),
        (0.95, 1e-5, 0.05001000000000004441),
        (0.123456789, 0.3, 1.0),
        (1.0, 0.25, 0.25),
    ];
    for (xi, delta, want) in dp {
        let g = dp_guarantee(&PrivacyParams {
            epsilon: 0.7,
            delta,
            sensitivity: 1.0,
            s: 1.0,
            xi,
        })
        .unwrap();
        if !close(g.any_node_delta, want) || g.any_node_epsilon != 0.7 || g.component_delta != delta
        {
            bad.push(format!("dp(xi={xi}, delta={delta})"));
        }
    }
    report.check(
        "16",
        bad.is_empty(),
        format!(
            "privacy formulas to 12 significant digits, delta clamped at 1; mismatches: {bad:?}"
        ),
    );
}

/// Not a numbered criterion: the per-point time budget on a BA graph of the
/// same size as Epinions, so it is checked even without the dataset.
fn point_budget_surrogate(report: &mut Report) {
    let mut spec = SweepSpec::new(GraphSource::parse_ba("75879,7,8").unwrap());
    spec.protocols = vec![ProtocolKind::A3f, ProtocolKind::TwoSff];
    spec.m_values = vec![15];
    spec.adversary = Strategy::TargetedDegree;
    spec.fractions = vec![0.3];
    spec.replicates = 1;
    spec.timing = true;
    let g = spec.graph.resolve(0).unwrap();
    let rows = run_sweep_with_threads(&spec, &g, 1).unwrap().rows;
    let worst = rows.iter().map(|r| r.wall_ms.unwrap()).fold(0.0, f64::max);
    report.check(
        "budget",
        worst < 10_000.0,
        format!(
            "15-round sweep point, 1 thread, BA n=75879 with {} edges: slowest {worst:.0} ms < 10000 ms",
            g.edge_count()
        ),
    );
}

fn main() {
    if std::env::var_os(robustnet_cli::source::DATA_DIR_ENV).is_none() {
        // tests run from the crate directory; look in the workspace's data/
        let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
        std::env::set_var(robustnet_cli::source::DATA_DIR_ENV, root);
    }
    let mut report = Report {
        failed: 0,
        skipped: 0,
    };
    epinions_criteria(&mut report);
    criterion_10(&mut report);
    criterion_11(&mut report);
    criterion_12(&mut report);
    criterion_13(&mut report);
    criterion_14(&mut report);
    criterion_15(&mut report);
    criterion_16(&mut report);
    point_budget_surrogate(&mut report);
    println!(
        "acceptance: {} failed, {} skipped",
        report.failed, report.skipped
    );
    if report.failed > 0 {
        std::process::exit(1);
    }
}
