//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when a criterion fails that is not listed in `KNOWN_DEVIATIONS`.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twohop_core::adversary::{AttackBehavior, AttackKind, ScriptedOverride};
use twohop_core::engine::{render_message_trace, render_trace, run, Outcome, RunConfig, RunRecord, Scheme};
use twohop_core::graph::{
    geometric_from_positions, has_k_connected_rooted_spanning_trees, is_rs_robust, vertex_connectivity,
    DirectedGraph, NodeId,
};
use twohop_core::harness::{
    k9_minus5, repro_scenario, sweep, AttackScenario, RunDraw, SweepConfig, SweepResult, NINE_NODE_START,
};
use twohop_core::protocol::{algorithm2_majority_vote, Vote};

mod common;
use common::{build, naive_rs_robust};

/// Absolute tolerance on success rates (20 runs per cell).
const RATE_TOL: f64 = 0.1;

/// Criteria allowed to fail, each with the part that is expected to miss.
const KNOWN_DEVIATIONS: [(&str, &str); 1] = [("8", "8c-wmsr")];

struct Verdict {
    id: &'static str,
    title: &'static str,
    pass: bool,
    /// Failed sub-checks, matched against `KNOWN_DEVIATIONS`.
    failed_parts: Vec<String>,
    detail: Vec<String>,
    elapsed: Duration,
}

impl Verdict {
    fn known_deviation(&self) -> bool {
        !self.pass
            && !self.failed_parts.is_empty()
            && self.failed_parts.iter().all(|p| {
                KNOWN_DEVIATIONS
                    .iter()
                    .any(|(id, part)| *id == self.id && p == part)
            })
    }
}

/// Safety tally shared by criteria 2 to 8.
#[derive(Default)]
struct Safety {
    runs: usize,
    violating_runs: Vec<String>,
    excluded_plain: usize,
}

impl Safety {
    fn record(&mut self, what: &str, rec: &RunRecord) {
        self.runs += 1;
        if rec.evaluation.safety_violations > 0 {
            self.violating_runs
                .push(format!("{what}: {} violations", rec.evaluation.safety_violations));
        }
    }

    fn record_sweep(&mut self, what: &str, res: &SweepResult) {
        for row in &res.rows {
            if row.scheme == "plain" {
                self.excluded_plain += 1;
                continue;
            }
            self.runs += 1;
            if !row.safety_ok {
                self.violating_runs
                    .push(format!("{what}: {} f={} r={} seed={}", row.scheme, row.f, row.r, row.seed));
            }
        }
    }
}

fn timed<F: FnOnce(&mut Vec<String>, &mut Vec<String>) -> bool>(
    id: &'static str,
    title: &'static str,
    budget: Option<Duration>,
    body: F,
) -> Verdict {
    let start = Instant::now();
    let mut detail = Vec::new();
    let mut failed_parts = Vec::new();
    let mut pass = body(&mut detail, &mut failed_parts);
    let elapsed = start.elapsed();
    if let Some(b) = budget {
        detail.push(format!("runtime {:.2?} (budget {:.0?})", elapsed, b));
        if elapsed > b {
            pass = false;
            failed_parts.push(format!("{id}-runtime"));
        }
    }
    Verdict {
        id,
        title,
        pass,
        failed_parts,
        detail,
        elapsed,
    }
}

fn random_values(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(0.0..=100.0)).collect()
}

fn c1() -> Verdict {
    timed("1", "worked example reproduces x_2[1] and Phi_2[1]", Some(Duration::from_secs(1)), |d, _| {
        let report = repro_scenario("phi2-example").expect("scenario");
        for c in &report.checks {
            d.push(format!("{} {}: {}", if c.passed { "ok" } else { "MISS" }, c.name, c.detail));
        }
        report.passed()
    })
}

fn c2(safety: &mut Safety) -> Verdict {
    timed("2", "complete graphs tolerate f = n - 2", Some(Duration::from_secs(5)), |d, _| {
        let mut ok = true;
        for n in 4..=9 {
            let f = n - 2;
            for scheme in [Scheme::Scheme1, Scheme::Scheme2] {
                let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
                let mut cfg = RunConfig::new(DirectedGraph::complete(n), scheme, f, random_values(&mut rng, n));
                for a in (n - f + 1)..=n {
                    cfg.attacks.push((a, AttackBehavior::new(AttackKind::StaticValue { value: 120.0 })));
                }
                let on = cfg.attacks[0].1.activation;
                let rec = run(&cfg).expect("valid config");
                safety.record(&format!("K{n} {scheme}"), &rec);
                let flagged = rec
                    .evaluation
                    .attackers
                    .values()
                    .all(|s| s.network_flag_round == Some(on + 1));
                let conv = rec.evaluation.outcome == Outcome::Converged;
                if !(flagged && conv) {
                    ok = false;
                    d.push(format!("K{n} {scheme}: flagged one round after activation {flagged}, converged {conv}"));
                }
            }
        }
        d.push("n = 4..9, scheme1 and scheme2".into());
        ok
    })
}

fn c3(safety: &mut Safety) -> Verdict {
    timed("3", "all-honest runs produce no verdicts", Some(Duration::from_secs(30)), |d, _| {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut bad = 0;
        for t in 0..500 {
            let n = rng.gen_range(2..=20);
            let undirected = t % 2 == 0;
            let p: f64 = rng.gen_range(0.1..0.9);
            let bits: Vec<bool> = (0..n * n).map(|_| rng.gen_bool(p)).collect();
            let g = build(n, undirected, &bits);
            let scheme = if undirected { Scheme::Scheme1 } else { Scheme::Scheme2 };
            let f = rng.gen_range(1..=3);
            let cfg = RunConfig::new(g, scheme, f, random_values(&mut rng, n));
            let rec = run(&cfg).expect("valid config");
            safety.record(&format!("honest trial {t}"), &rec);
            if !rec.verdicts.is_empty() {
                bad += 1;
                d.push(format!("trial {t}: {} verdicts", rec.verdicts.len()));
            }
        }
        d.push(format!("500 runs, {bad} with verdicts"));
        bad == 0
    })
}

/// Condition-satisfying graph for `scheme`: complete graphs, complete graphs
/// with a few edges removed, or layered graphs of width `2f + 1`.
fn condition_graph(rng: &mut ChaCha8Rng, scheme: Scheme) -> (DirectedGraph, usize) {
    loop {
        let (g, f) = match rng.gen_range(0..3) {
            0 => {
                let n = rng.gen_range(4..=9);
                (DirectedGraph::complete(n), rng.gen_range(1..=n - 2))
            }
            1 => {
                let n = rng.gen_range(6..=10);
                let mut g = DirectedGraph::complete(n);
                for _ in 0..rng.gen_range(1..=3) {
                    let u = rng.gen_range(1..=n);
                    let v = rng.gen_range(1..=n);
                    if u != v && g.has_edge(u, v) {
                        g.remove_edge(u, v).expect("edge present");
                    }
                }
                (g, rng.gen_range(1..=3))
            }
            _ => {
                let f = rng.gen_range(1..=2);
                let layers = if f == 1 { rng.gen_range(3..=5) } else { 3 };
                (DirectedGraph::layered(layers, 2 * f + 1), f)
            }
        };
        let holds = match scheme {
            Scheme::Scheme1 => {
                g.check_scheme1_condition(f).is_ok_and(|c| c.holds())
                    && vertex_connectivity(&g).is_ok_and(|k| k > f)
            }
            _ => {
                g.check_scheme2_condition(f).holds()
                    && has_k_connected_rooted_spanning_trees(&g, f + 1).unwrap_or(false)
            }
        };
        if holds {
            return (g, f);
        }
    }
}

fn attack_for(rng: &mut ChaCha8Rng, g: &DirectedGraph, a: NodeId, partner: Option<NodeId>) -> (AttackKind, &'static str) {
    if let Some(p) = partner {
        return (AttackKind::CollusionPair { partner: p, offset: 50.0 }, "collusion-pair");
    }
    match rng.gen_range(0..5) {
        0 => (AttackKind::StaticValue { value: 120.0 }, "static-120"),
        1 => (AttackKind::StaticValue { value: rng.gen_range(0.0..=100.0) }, "static-in-range"),
        2 => (AttackKind::RelayTamper { victim: None, offset: 50.0 }, "relay-tamper"),
        3 => (AttackKind::Crash, "crash"),
        _ => {
            let mut o = ScriptedOverride::default();
            if let Some(&h) = g.in_neighbors(a).expect("id in range").iter().next() {
                o.remove_values.insert(h);
            }
            o.own_value = Some(rng.gen_range(0.0..=100.0));
            let script = BTreeMap::from([(rng.gen_range(2..=5), o)]);
            (AttackKind::Scripted { script }, "scripted")
        }
    }
}

fn c4(safety: &mut Safety) -> Verdict {
    timed("4", "misbehaving nodes are caught within a round", Some(Duration::from_secs(60)), |d, _| {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut misses = 0;
        let mut kinds: BTreeMap<&str, usize> = BTreeMap::new();
        for t in 0..200 {
            let scheme = if t % 2 == 0 { Scheme::Scheme1 } else { Scheme::Scheme2 };
            let (g, f) = condition_graph(&mut rng, scheme);
            let n = g.node_count();
            let mut nodes: Vec<NodeId> = (1..=n).collect();
            nodes.shuffle(&mut rng);
            let count = rng.gen_range(1..=f);
            let attackers = &nodes[..count];
            let mut cfg = RunConfig::new(g.clone(), scheme, f, random_values(&mut rng, n));
            cfg.seed = t as u64;
            // an adjacent attacker pair colludes on some trials
            let pair = (count >= 2 && rng.gen_bool(0.3) && g.has_edge(attackers[0], attackers[1]))
                .then(|| (attackers[0], attackers[1]));
            for (k, &a) in attackers.iter().enumerate() {
                let partner = match pair {
                    Some((x, y)) if k == 0 => (a == x).then_some(y),
                    Some((x, _)) if k == 1 => Some(x),
                    _ => None,
                };
                let (kind, name) = attack_for(&mut rng, &g, a, partner);
                *kinds.entry(name).or_default() += 1;
                cfg.attacks.push((a, AttackBehavior::new(kind)));
            }
            let rec = run(&cfg).expect("valid config");
            safety.record(&format!("completeness trial {t}"), &rec);
            let ev = &rec.evaluation;
            let mut late = Vec::new();
            for (a, s) in &ev.attackers {
                if let Some(dev) = s.first_deviation {
                    if !s.first_verdict.is_some_and(|v| v <= dev + 1) {
                        late.push((*a, dev, s.first_verdict));
                    }
                }
            }
            let wrongful = rec.verdicts.iter().filter(|v| rec.is_normal(v.suspect)).count();
            let good = late.is_empty() && wrongful == 0 && ev.outcome == Outcome::Converged && ev.safety_ok;
            if !good {
                misses += 1;
                d.push(format!(
                    "trial {t} {scheme} n={n} f={f}: late {late:?}, wrongful {wrongful}, outcome {}",
                    ev.outcome.as_str()
                ));
            }
        }
        d.push(format!("200 runs, attack mix {kinds:?}, {misses} misses"));
        misses == 0
    })
}

fn c5() -> Verdict {
    timed("5", "colluding pair on a 4-cycle goes undetected", None, |d, _| {
        let report = repro_scenario("collusion-4cycle").expect("scenario");
        for c in &report.checks {
            d.push(format!("{} {}: {}", if c.passed { "ok" } else { "MISS" }, c.name, c.detail));
        }
        let rounds = report.record.rounds_run();
        d.push(format!("{rounds} rounds, {} verdicts", report.record.verdicts.len()));
        report.passed() && report.record.verdicts.is_empty()
    })
}

fn c6() -> Verdict {
    timed("6", "robustness checker agrees with the naive definition", Some(Duration::from_secs(120)), |d, _| {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut checked = 0;
        let mut disagreements = 0;
        for t in 0..200 {
            let n = rng.gen_range(1..=8);
            let undirected = rng.gen_bool(0.5);
            let p: f64 = rng.gen_range(0.2..0.95);
            let bits: Vec<bool> = (0..n * n).map(|_| rng.gen_bool(p)).collect();
            let g = build(n, undirected, &bits);
            for r in 1..=3 {
                for s in 1..=4.min(n) {
                    checked += 1;
                    let fast = is_rs_robust(&g, r, s).expect("within cap").robust;
                    if fast != naive_rs_robust(&g, r, s) {
                        disagreements += 1;
                        d.push(format!("graph {t} n={n} r={r} s={s}: fast {fast}"));
                    }
                }
            }
        }
        d.push(format!("200 graphs, {checked} (r,s) pairs, {disagreements} disagreements"));
        disagreements == 0
    })
}

/// Random digraph with some `h -> i` pair outside `N_i` reached through at
/// least `2f + 1` relayers.
fn vote_instance(rng: &mut ChaCha8Rng, f: usize) -> (DirectedGraph, NodeId, NodeId, Vec<NodeId>) {
    loop {
        let n = rng.gen_range(2 * f + 3..=14);
        let p: f64 = rng.gen_range(0.5..0.95);
        let bits: Vec<bool> = (0..n * n).map(|_| rng.gen_bool(p)).collect();
        let g = build(n, false, &bits);
        let mut triples = Vec::new();
        for i in 1..=n {
            for h in 1..=n {
                if h == i || g.has_edge(h, i) {
                    continue;
                }
                let paths = g.two_hop_paths(h, i).expect("ids in range");
                if paths.len() > 2 * f {
                    triples.push((h, i, paths.into_iter().collect::<Vec<_>>()));
                }
            }
        }
        if let Some((h, i, relayers)) = triples.choose(rng).cloned() {
            return (g, h, i, relayers);
        }
    }
}

fn c7(safety: &mut Safety) -> Verdict {
    timed("7", "majority vote recovers the broadcast value", None, |d, _| {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut direct_bad = 0;
        let mut engine_bad = 0;
        for t in 0..1000 {
            let f = rng.gen_range(1..=3);
            let (g, h, i, relayers) = vote_instance(&mut rng, f);
            let c = rng.gen_range(0..=f);
            let corrupt: BTreeSet<NodeId> = relayers.choose_multiple(&mut rng, c).copied().collect();
            let colluding = rng.gen_bool(0.5);
            let shared_lie = rng.gen_range(0.0..=100.0);

            let truth: f64 = rng.gen_range(0.0..=100.0);
            let copies: Vec<f64> = relayers
                .iter()
                .map(|l| {
                    if !corrupt.contains(l) {
                        truth
                    } else if colluding {
                        shared_lie
                    } else {
                        rng.gen_range(0.0..=100.0)
                    }
                })
                .collect();
            if algorithm2_majority_vote(&copies) != Vote::Decided(truth) {
                direct_bad += 1;
            }

            // the same triple inside a protocol run: corrupted relayers rewrite
            // their copy of h in round 3
            let n = g.node_count();
            let mut cfg = RunConfig::new(g, Scheme::Scheme2, f, random_values(&mut rng, n));
            cfg.max_rounds = 4;
            let lie_round = 3;
            for &l in &corrupt {
                let lie = if colluding { shared_lie } else { rng.gen_range(0.0..=100.0) };
                let o = ScriptedOverride {
                    set_values: BTreeMap::from([(h, Some(lie))]),
                    ..ScriptedOverride::default()
                };
                cfg.attacks.push((
                    l,
                    AttackBehavior::new(AttackKind::Scripted {
                        script: BTreeMap::from([(lie_round, o)]),
                    }),
                ));
            }
            let rec = run(&cfg).expect("valid config");
            safety.record(&format!("vote trial {t}"), &rec);
            let by_i: Vec<_> = rec.verdicts.iter().filter(|v| v.detector == i).collect();
            let wrongful = by_i.iter().any(|v| rec.is_normal(v.suspect));
            let caught: BTreeSet<NodeId> = by_i
                .iter()
                .filter(|v| v.round == lie_round)
                .map(|v| v.suspect)
                .collect();
            let deviated: BTreeSet<NodeId> = rec.first_deviation.keys().copied().collect();
            if wrongful || !deviated.is_subset(&caught) {
                engine_bad += 1;
                if engine_bad <= 5 {
                    d.push(format!("trial {t}: h={h} i={i} corrupt {corrupt:?} caught {caught:?} wrongful {wrongful}"));
                }
            }
        }
        d.push(format!("1000 trials: {direct_bad} wrong direct votes, {engine_bad} wrong in-protocol outcomes"));
        direct_bad == 0 && engine_bad == 0
    })
}

/// Paper scale: 100 nodes, 20 runs per cell. The radius grid is thinned to
/// twelve points that bracket the connectivity knee and the complete draw.
fn c8_config() -> SweepConfig {
    SweepConfig {
        radius_grid: vec![15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 50.0, 60.0, 80.0, 100.0, 122.0, 145.0],
        ..SweepConfig::default()
    }
}

fn first_full_radius(res: &SweepResult, scheme: &str, f: usize, grid: &[f64]) -> Option<f64> {
    grid.iter()
        .copied()
        .find(|&r| res.cell(scheme, f, r).is_some_and(|c| c.success_rate >= 1.0 - RATE_TOL))
}

fn c8(safety: &mut Safety) -> Verdict {
    timed("8", "Monte Carlo success-rate shape", Some(Duration::from_secs(30 * 60)), |d, failed| {
        let base = c8_config();
        let labels: Vec<String> = base.labels().iter().map(|l| l.name()).collect();
        let mut ok = true;

        // (a) connectivity knee at f = 0
        let knee_grid = vec![15.0, 20.0, 25.0, 30.0];
        let a_cfg = SweepConfig {
            f_grid: vec![0],
            radius_grid: knee_grid.clone(),
            ..base.clone()
        };
        let a = sweep(&a_cfg).expect("valid sweep");
        safety.record_sweep("8a", &a);
        for label in &labels {
            let first = first_full_radius(&a, label, 0, &knee_grid);
            let rates: Vec<String> = knee_grid
                .iter()
                .map(|&r| format!("{:.2}", a.cell(label, 0, r).map_or(f64::NAN, |c| c.success_rate)))
                .collect();
            let hit = first.is_some_and(|r| r <= 25.0);
            d.push(format!("8a {label}: rates {} at r {:?}, full by {:?}", rates.join(" "), knee_grid, first));
            if !hit {
                ok = false;
                failed.push(format!("8a-{label}"));
            }
        }

        // (b) detection schemes dominate W-MSR under static-120
        let b_cfg = SweepConfig {
            f_grid: vec![15, 30, 45],
            schemes: vec![Scheme::Wmsr, Scheme::Scheme1, Scheme::Scheme2],
            ..base.clone()
        };
        let b = sweep(&b_cfg).expect("valid sweep");
        safety.record_sweep("8b", &b);
        let mut b_miss = Vec::new();
        for &f in &b_cfg.f_grid {
            for &r in &b_cfg.radius_grid {
                let w = b.cell("wmsr", f, r).map_or(0.0, |c| c.success_rate);
                for label in ["scheme1", "scheme2+relays"] {
                    let s = b.cell(label, f, r).map_or(0.0, |c| c.success_rate);
                    if s + RATE_TOL < w {
                        b_miss.push(format!("{label} {s:.2} < wmsr {w:.2} at f={f} r={r}"));
                    }
                }
            }
        }
        d.push(format!(
            "8b {} cells, {} below wmsr{}",
            b_cfg.f_grid.len() * b_cfg.radius_grid.len(),
            b_miss.len(),
            if b_miss.is_empty() { String::new() } else { format!(": {}", b_miss.join("; ")) }
        ));
        if !b_miss.is_empty() {
            ok = false;
            failed.push("8b".into());
        }

        // (c) complete draw with f = 60
        let r_complete = 145.0;
        let c_cfg = SweepConfig {
            f_grid: vec![60],
            radius_grid: vec![r_complete],
            schemes: vec![Scheme::Wmsr, Scheme::Scheme1, Scheme::Scheme2],
            ..base
        };
        let complete = (0..c_cfg.runs_per_cell).all(|run| {
            let g = geometric_from_positions(&RunDraw::new(&c_cfg, run).positions, r_complete);
            g.arc_count() == c_cfg.node_count * (c_cfg.node_count - 1)
        });
        d.push(format!("8c every draw complete at r={r_complete}: {complete}"));
        if !complete {
            ok = false;
            failed.push("8c-draw".into());
        }
        let c = sweep(&c_cfg).expect("valid sweep");
        safety.record_sweep("8c", &c);
        let rate = |s: &str| c.cell(s, 60, r_complete).map_or(f64::NAN, |c| c.success_rate);
        for (label, want) in [("scheme1", 1.0), ("scheme2", 1.0), ("wmsr", 0.0)] {
            let got = rate(label);
            let hit = (got - want).abs() <= RATE_TOL;
            d.push(format!("8c {label}: {got:.2} (want {want:.1})"));
            if !hit {
                ok = false;
                failed.push(format!("8c-{label}"));
            }
        }
        ok
    })
}

fn c9(safety: &Safety) -> Verdict {
    timed("9", "normal values stay in the safety interval", None, |d, _| {
        d.push(format!(
            "{} runs checked, {} violating, {} plain-scheme sweep runs excluded",
            safety.runs,
            safety.violating_runs.len(),
            safety.excluded_plain
        ));
        for v in safety.violating_runs.iter().take(10) {
            d.push(v.clone());
        }
        safety.runs > 0 && safety.violating_runs.is_empty()
    })
}

fn c10() -> Verdict {
    timed("10", "re-runs are byte-identical", None, |d, _| {
        let mut cfg = RunConfig::new(k9_minus5(), Scheme::Scheme2, 1, NINE_NODE_START.to_vec());
        cfg.threat_model = twohop_core::engine::ThreatModel::Unchecked;
        cfg.record_messages = true;
        cfg.seed = 10;
        cfg.attacks.push((2, AttackBehavior::new(AttackKind::StaticValue { value: 120.0 })));
        cfg.attacks.push((
            5,
            AttackBehavior::new(AttackKind::RelayTamper {
                victim: None,
                offset: 50.0,
            }),
        ));
        let a = run(&cfg).expect("valid config");
        let b = run(&cfg).expect("valid config");
        let traces = render_trace(&a) == render_trace(&b) && render_message_trace(&a) == render_message_trace(&b);

        let sweep_cfg = SweepConfig {
            node_count: 20,
            radius_grid: vec![25.0, 50.0],
            f_grid: vec![0, 3],
            runs_per_cell: 3,
            attack_scenario: AttackScenario::RelayTamper,
            ..SweepConfig::default()
        };
        let csv_with = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .expect("thread pool")
                .install(|| sweep(&sweep_cfg).expect("valid sweep").to_csv_string())
        };
        let one = csv_with(1);
        let csvs = one == csv_with(4) && one == csv_with(1);
        d.push(format!("traces identical {traces}, sweep CSV identical across 1 and 4 threads {csvs}"));
        traces && csvs
    })
}

fn main() -> ExitCode {
    let mut safety = Safety::default();
    let mut verdicts = Vec::new();
    let mut report = |v: Verdict| {
        let status = if v.pass {
            "PASS".to_string()
        } else if v.known_deviation() {
            format!("FAIL (known deviation: {})", v.failed_parts.join(", "))
        } else {
            "FAIL".to_string()
        };
        println!("criterion {:>2}: {status} - {} [{:.2?}]", v.id, v.title, v.elapsed);
        for line in &v.detail {
            println!("      {line}");
        }
        verdicts.push(v);
    };
    report(c1());
    report(c2(&mut safety));
    report(c3(&mut safety));
    report(c4(&mut safety));
    report(c5());
    report(c6());
    report(c7(&mut safety));
    report(c8(&mut safety));
    report(c9(&safety));
    report(c10());

    let unexpected: Vec<&str> = verdicts
        .iter()
        .filter(|v| !v.pass && !v.known_deviation())
        .map(|v| v.id)
        .collect();
    let passed = verdicts.iter().filter(|v| v.pass).count();
    println!("acceptance: {passed}/{} criteria pass", verdicts.len());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {}", unexpected.join(", "));
        ExitCode::FAILURE
    }
}
