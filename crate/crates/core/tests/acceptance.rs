// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any failed.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use bcc_core::butterfly::{count_butterflies, BipartiteView, Side};
use bcc_core::distance::bfs_distances;
use bcc_core::eval::{f1_score, synthesize_labels, EvalConfig};
use bcc_core::graph::{LabeledGraph, VertexId};
use bcc_core::incremental::IncrementalDistance;
use bcc_core::index::BcIndex;
use bcc_core::io::save_graph;
use bcc_core::leader::update_leader_chi;
use bcc_core::validate::{check_bcc, check_community, GroupRequirement};
use bcc_core::{l2p_search, mbcc_search, online_search, Algorithm, BccQuery, MbccQuery, WorkingSubgraph};
use common::*;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Butterfly degrees by quadruple enumeration over an adjacency matrix.
fn quad_oracle(g: &LabeledGraph, nl: usize) -> Vec<u64> {
    let n = g.vertex_count();
    let mut adj = vec![false; n * n];
    for (u, v) in g.edges() {
        adj[u as usize * n + v as usize] = true;
        adj[v as usize * n + u as usize] = true;
    }
    let e = |a: usize, b: usize| adj[a * n + b];
    let mut chi = vec![0u64; n];
    for a in 0..nl {
        for b in a + 1..nl {
            for c in nl..n {
                if !(e(a, c) && e(b, c)) {
                    continue;
                }
                for d in c + 1..n {
                    if e(a, d) && e(b, d) {
                        for v in [a, b, c, d] {
                            chi[v] += 1;
                        }
                    }
                }
            }
        }
    }
    chi
}

fn c1_butterfly_exactness() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let mut mismatches = 0;
    for _ in 0..200 {
        let nl = r.random_range(2..=40);
        let nr = r.random_range(2..=40);
        let g = random_bipartite(&mut r, nl, nr, 0.2);
        let st = count_butterflies(&BipartiteView::from_graph(&g, 0, 1)).map_err(|e| e.to_string())?;
        let oracle = quad_oracle(&g, nl);
        mismatches += g.vertices().filter(|&v| st.chi(v) != oracle[v as usize]).count();
    }
    let t = start.elapsed();
    ensure(mismatches == 0, || format!("{mismatches} vertex mismatches"))?;
    ensure(t < Duration::from_secs(5), || format!("took {t:?}"))?;
    Ok(format!("200 graphs, 0 mismatches, {:.2}s", t.as_secs_f64()))
}

fn c2_fixture_butterflies() -> Outcome {
    use walk::*;
    let g = walkthrough_graph();
    let st = count_butterflies(&BipartiteView::from_graph(&g, 0, 1)).map_err(|e| e.to_string())?;
    let got: Vec<u64> = [V1, V3, U2, U3, U5, U6].iter().map(|&v| st.chi(v)).collect();
    ensure(got == [6, 6, 3, 3, 3, 3], || format!("got {got:?}"))?;
    Ok("chi(v1)=chi(v3)=6, chi(u2)=chi(u3)=chi(u5)=chi(u6)=3".into())
}

fn c3_fixture_distances() -> Outcome {
    use walk::*;
    let g = walkthrough_graph();
    let mut ws = WorkingSubgraph::full(&g);
    let layers = |ws: &WorkingSubgraph<'_>, q| -> Vec<Vec<VertexId>> {
        let d = bfs_distances(ws, q).unwrap();
        (1..=4).map(|k| d.layer(k)).collect()
    };
    let sorted = |mut v: Vec<VertexId>| {
        v.sort_unstable();
        v
    };
    let before_l = vec![
        vec![V1, V2, V3],
        vec![U2, U3, U5, U6],
        sorted(vec![QR, U1, U4, U7]),
        vec![U9],
    ];
    let before_r = vec![
        sorted(vec![U1, U2, U3, U9]),
        sorted(vec![V1, V3, U4, U5, U7]),
        sorted(vec![QL, V2, U6]),
        vec![],
    ];
    ensure(layers(&ws, QL) == before_l, || "q_l row differs".into())?;
    ensure(layers(&ws, QR) == before_r, || "q_r row differs".into())?;

    let mut inc_r = IncrementalDistance::new(&ws, QR).map_err(|e| e.to_string())?;
    ws.delete(U9);
    let up = inc_r.fast_update_distances(&ws, &[U9]);
    let mut after_l = before_l.clone();
    after_l[3] = vec![];
    let after_r = vec![
        vec![U1, U2, U3],
        vec![V1, V3, U5],
        sorted(vec![QL, V2, U6, U4, U7]),
        vec![],
    ];
    ensure(layers(&ws, QL) == after_l, || "q_l row after deletion differs".into())?;
    ensure(layers(&ws, QR) == after_r, || "q_r row after deletion differs".into())?;
    ensure(up.changed == vec![U4, U7], || format!("changed {:?}", up.changed))?;
    Ok("all cells match; u4 and u7 move from 2 to 3".into())
}

fn c4_fast_distance() -> Outcome {
    let mut mismatches = 0usize;
    let mut steps = 0usize;
    for seed in 0..100u64 {
        let mut r = rng(1000 + seed);
        let n = r.random_range(20..=200);
        let p = r.random_range(1.5..6.0) / n as f64;
        let g = random_labeled(&mut r, n, 2, p, p);
        let mut ws = WorkingSubgraph::full(&g);
        let q = r.random_range(0..n as u32);
        let mut inc = IncrementalDistance::new(&ws, q).map_err(|e| e.to_string())?;
        loop {
            let ecc = inc.eccentricity(&ws);
            let far: Vec<VertexId> = if ecc == 0 { Vec::new() } else { inc.layer(&ws, ecc) };
            let mut batch: Vec<VertexId> = if far.is_empty() || r.random_bool(0.2) {
                // Occasionally delete arbitrary vertices, unreachable ones included.
                let alive: Vec<VertexId> = ws.alive_vertices().filter(|&v| v != q).collect();
                if alive.is_empty() {
                    break;
                }
                let k = r.random_range(1..=3.min(alive.len()));
                alive.choose_multiple(&mut r, k).copied().collect()
            } else {
                let k = r.random_range(1..=far.len());
                far.choose_multiple(&mut r, k).copied().collect()
            };
            batch.sort_unstable();
            ws.delete_all(&batch);
            inc.fast_update_distances(&ws, &batch);
            steps += 1;
            let full = bfs_distances(&ws, q).map_err(|e| e.to_string())?;
            mismatches += ws.alive_vertices().filter(|&v| inc.distance(v) != full.raw(v)).count();
        }
    }
    ensure(mismatches == 0, || {
        format!("{mismatches} mismatches over {steps} steps")
    })?;
    Ok(format!("100 graphs, {steps} deletion steps, 0 mismatches"))
}

fn recount_workload() -> Result<(usize, usize, usize), String> {
    let (mut online, mut lp, mut iterations) = (0, 0, 0);
    for seed in 0..10u64 {
        let g = ladder_workload(50 + seed, 300, 0.02);
        let q = BccQuery::new(seed as u32 * 7, 300 + seed as u32 * 7).with_k(2, 2);
        for (alg, total) in [(Algorithm::Online, &mut online), (Algorithm::Lp, &mut lp)] {
            let r = online_search(&g, &q.clone().with_algorithm(alg)).map_err(|e| e.to_string())?;
            ensure(r.status.is_found(), || {
                format!("workload {seed} infeasible under {alg}")
            })?;
            *total += r.stats.butterfly_recounts;
            if alg == Algorithm::Online {
                iterations += r.iterations;
            }
        }
    }
    Ok((online, lp, iterations))
}

fn c5_leader_updates() -> Outcome {
    let mut mismatches = 0usize;
    let mut checks = 0usize;
    for seed in 0..100u64 {
        let mut r = rng(2000 + seed);
        let n = r.random_range(8..=30);
        let g = random_labeled(&mut r, n, 2, 0.3, 0.5);
        let mut view = BipartiteView::from_graph(&g, 0, 1);
        let st = count_butterflies(&view).map_err(|e| e.to_string())?;
        let mut leaders: Vec<(VertexId, u64)> = [Side::Left, Side::Right]
            .into_iter()
            .filter_map(|s| st.best(&view, s))
            .map(|v| (v, st.chi(v)))
            .collect();
        let mut order: Vec<VertexId> = g.vertices().filter(|v| !leaders.iter().any(|l| l.0 == *v)).collect();
        order.shuffle(&mut r);
        for v in order {
            for (p, chi) in leaders.iter_mut() {
                *chi = update_leader_chi(&view, *p, v, *chi).map_err(|e| e.to_string())?;
            }
            view.remove(v);
            let fresh = count_butterflies(&view).map_err(|e| e.to_string())?;
            for &(p, chi) in &leaders {
                checks += 1;
                if fresh.chi(p) != chi {
                    mismatches += 1;
                }
            }
        }
    }
    ensure(mismatches == 0, || {
        format!("{mismatches} of {checks} updates disagree with a recount")
    })?;
    let (online, lp, iterations) = recount_workload()?;
    let ratio = lp as f64 / online as f64;
    ensure(ratio <= 0.2, || {
        format!("lp recounts {lp} vs online {online} (ratio {ratio:.3})")
    })?;
    Ok(format!(
        "{checks} updates exact; full counts lp {lp} vs online {online} over {iterations} iterations (ratio {ratio:.3})"
    ))
}

fn c6_two_approximation() -> Outcome {
    let start = Instant::now();
    let (mut cases, mut good, mut seed) = (0, 0, 0u64);
    let mut worst = 0.0f64;
    while cases < 50 {
        seed += 1;
        ensure(seed < 20_000, || format!("only {cases} solvable instances found"))?;
        let mut r = rng(3000 + seed);
        let n = r.random_range(6..=12);
        let g = random_labeled(&mut r, n, 2, 0.55, 0.45);
        let ls: Vec<_> = g.vertices_with_label(0).collect();
        let rs: Vec<_> = g.vertices_with_label(1).collect();
        if ls.is_empty() || rs.is_empty() {
            continue;
        }
        let (ql, qr) = (ls[r.random_range(0..ls.len())], rs[r.random_range(0..rs.len())]);
        let (k1, k2) = (r.random_range(1..=3), r.random_range(1..=3));
        let b = r.random_range(1..=2);
        let Some((opt, _)) = exhaustive_bcc(&g, (ql, k1), (qr, k2), b) else {
            continue;
        };
        cases += 1;
        let res = online_search(
            &g,
            &BccQuery::new(ql, qr)
                .with_k(k1, k2)
                .with_b(b)
                .with_algorithm(Algorithm::Online),
        )
        .map_err(|e| e.to_string())?;
        let valid = res.status.is_found() && check_bcc(&g, &res.vertices, (ql, k1), (qr, k2), b).is_ok();
        let diam = induced_diameter(&g, &res.vertices);
        if valid && diam <= 2 * opt {
            good += 1;
        }
        if opt > 0 {
            worst = worst.max(diam as f64 / opt as f64);
        }
    }
    let t = start.elapsed();
    ensure(good == 50, || format!("{good}/50 within twice the optimum"))?;
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!(
        "50/50 valid and within 2x (worst ratio {worst:.2}), {:.2}s",
        t.as_secs_f64()
    ))
}

fn c7_validity() -> Outcome {
    let mut checked = 0usize;
    let mut violations = Vec::new();
    for seed in 0..120u64 {
        let mut r = rng(4000 + seed);
        let n = r.random_range(8..=60);
        let labels = if seed % 3 == 0 { 3 } else { 2 };
        let p_in = r.random_range(0.1..0.6);
        let p_cross = r.random_range(0.05..0.4);
        let g = random_labeled(&mut r, n, labels, p_in, p_cross);
        let by_label: Vec<Vec<VertexId>> = (0..labels).map(|l| g.vertices_with_label(l).collect()).collect();
        if by_label.iter().any(|v| v.is_empty()) {
            continue;
        }
        let pick = |r: &mut rand_chacha::ChaCha8Rng, l: usize| by_label[l][r.random_range(0..by_label[l].len())];
        let idx = BcIndex::build(&g, 0, 1).map_err(|e| e.to_string())?;
        for _ in 0..3 {
            let (ql, qr) = (pick(&mut r, 0), pick(&mut r, 1));
            let mut q = BccQuery::new(ql, qr).with_b(r.random_range(1..=2));
            if r.random_bool(0.5) {
                q = q.with_k(r.random_range(1..=3), r.random_range(1..=3));
            }
            q.eta = r.random_range(5..=60);
            for alg in [Algorithm::Online, Algorithm::Lp, Algorithm::L2p] {
                let q = q.clone().with_algorithm(alg);
                let res = if alg == Algorithm::L2p {
                    l2p_search(&g, &idx, &q)
                } else {
                    online_search(&g, &q)
                }
                .map_err(|e| e.to_string())?;
                if res.status.is_found() {
                    checked += 1;
                    if let Err(v) = check_bcc(&g, &res.vertices, (ql, res.k1), (qr, res.k2), q.b) {
                        violations.push(format!("seed {seed} {alg}: {v}"));
                    }
                }
            }
            if labels == 3 {
                let qs = vec![ql, qr, pick(&mut r, 2)];
                for alg in [Algorithm::Online, Algorithm::Lp, Algorithm::L2p] {
                    let mut mq = MbccQuery::new(qs.clone());
                    mq.algorithm = alg;
                    mq.eta = q.eta;
                    let res = mbcc_search(&g, &mq).map_err(|e| e.to_string())?;
                    if res.status.is_found() {
                        checked += 1;
                        let groups: Vec<GroupRequirement> = qs
                            .iter()
                            .zip(&res.ks)
                            .map(|(&query, &k)| GroupRequirement { query, k })
                            .collect();
                        if let Err(v) = check_community(&g, &res.vertices, &groups, mq.b) {
                            violations.push(format!("seed {seed} mbcc {alg}: {v}"));
                        }
                    }
                }
            }
        }
    }
    ensure(violations.is_empty(), || {
        format!("{} violations, first: {}", violations.len(), violations[0])
    })?;
    ensure(checked >= 100, || format!("only {checked} results found"))?;
    Ok(format!("{checked} found communities, 0 violations"))
}

fn c8_two_group_reduction() -> Outcome {
    let (mut found, mut seed, mut cases) = (0, 0u64, 0);
    while cases < 50 {
        seed += 1;
        let mut r = rng(5000 + seed);
        let n = r.random_range(8..=40);
        let g = random_labeled(&mut r, n, 2, 0.35, 0.3);
        let ls: Vec<_> = g.vertices_with_label(0).collect();
        let rs: Vec<_> = g.vertices_with_label(1).collect();
        if ls.is_empty() || rs.is_empty() {
            continue;
        }
        cases += 1;
        let (ql, qr) = (ls[r.random_range(0..ls.len())], rs[r.random_range(0..rs.len())]);
        let b = r.random_range(1..=2);
        for alg in [Algorithm::Online, Algorithm::Lp] {
            let single =
                online_search(&g, &BccQuery::new(ql, qr).with_b(b).with_algorithm(alg)).map_err(|e| e.to_string())?;
            let mut mq = MbccQuery::new(vec![ql, qr]);
            mq.b = b;
            mq.algorithm = alg;
            let multi = mbcc_search(&g, &mq).map_err(|e| e.to_string())?;
            ensure(
                single.vertices == multi.vertices && single.status.is_found() == multi.status.is_found(),
                || format!("seed {seed} {alg}: {:?} vs {:?}", single.vertices, multi.vertices),
            )?;
            if alg == Algorithm::Online && single.status.is_found() {
                found += 1;
            }
        }
    }
    Ok(format!("50/50 identical ({found} found, the rest infeasible in both)"))
}

/// A sparse background graph with two planted 8-cliques.
fn planted(seed: u64) -> (LabeledGraph, Vec<Vec<VertexId>>) {
    let mut r = rng(seed);
    let n = 200u32;
    let mut edges = Vec::new();
    for (a, b) in [(0u32, 8u32), (8, 16)] {
        for i in a..b {
            for j in i + 1..b {
                edges.push((i, j));
            }
        }
    }
    for v in 16..n {
        for _ in 0..2 {
            let w = r.random_range(0..n);
            if w != v {
                edges.push((v, w));
            }
        }
    }
    for v in 0..16 {
        let w = r.random_range(16..n);
        edges.push((v, w));
    }
    let g = LabeledGraph::from_edges(&vec![0; n as usize], vec!["_".into()], &edges).unwrap();
    (g, vec![(0..8).collect(), (8..16).collect()])
}

fn c9_planted_recovery() -> Outcome {
    let mut scores = Vec::new();
    for seed in 0..20u64 {
        let (g, comms) = planted(6000 + seed);
        let cfg = EvalConfig {
            rng_seed: seed,
            ..EvalConfig::default()
        };
        let s = synthesize_labels(&g, &comms, &cfg).map_err(|e| e.to_string())?;
        let mut r = rng(7000 + seed);
        let ql = s.graph.vertex_of(r.random_range(0..8)).unwrap();
        let qr = s.graph.vertex_of(r.random_range(8..16)).unwrap();
        let (a, b) = (s.graph.label(ql), s.graph.label(qr));
        let idx = BcIndex::build(&s.graph, a.min(b), a.max(b)).map_err(|e| e.to_string())?;
        let res = l2p_search(&s.graph, &idx, &BccQuery::new(ql, qr).with_algorithm(Algorithm::L2p))
            .map_err(|e| e.to_string())?;
        scores.push(f1_score(&res.vertices, &s.truth[0]).f1);
    }
    let mean = scores.iter().sum::<f64>() / scores.len() as f64;
    ensure(mean >= 0.8, || format!("mean F1 {mean:.3}"))?;
    Ok(format!("mean F1 {mean:.3} over 20 queries"))
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}

fn c10_performance_order() -> Outcome {
    let g = ladder_workload(77, 14_000, 0.05);
    let idx = BcIndex::build(&g, 0, 1).map_err(|e| e.to_string())?;
    let mut r = rng(78);
    let mut times = [Vec::new(), Vec::new(), Vec::new()];
    let mut slowest = 0.0f64;
    for _ in 0..5 {
        let i = r.random_range(0..14_000u32);
        let q = BccQuery::new(i, 14_000 + i).with_k(2, 2);
        for (slot, alg) in [Algorithm::L2p, Algorithm::Lp, Algorithm::Online]
            .into_iter()
            .enumerate()
        {
            let q = q.clone().with_algorithm(alg);
            let start = Instant::now();
            let res = if alg == Algorithm::L2p {
                l2p_search(&g, &idx, &q)
            } else {
                online_search(&g, &q)
            }
            .map_err(|e| e.to_string())?;
            let t = start.elapsed().as_secs_f64();
            ensure(res.status.is_found(), || format!("{alg} query {i} infeasible"))?;
            slowest = slowest.max(t);
            times[slot].push(t * 1e3);
        }
    }
    let [l2p, lp, online] = times.map(median);
    ensure(slowest < 10.0, || format!("slowest query {slowest:.2}s"))?;
    ensure(l2p <= lp && lp <= online, || {
        format!("medians l2p {l2p:.1}ms, lp {lp:.1}ms, online {online:.1}ms")
    })?;
    Ok(format!(
        "{} edges; medians l2p {l2p:.1}ms <= lp {lp:.1}ms <= online {online:.1}ms",
        g.edge_count()
    ))
}

fn c11_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let g = ladder_workload(90, 400, 0.05);
    let (e, l) = (dir.path().join("g.edges"), dir.path().join("g.labels"));
    save_graph(
        &g,
        std::fs::File::create(&e).map_err(|x| x.to_string())?,
        std::fs::File::create(&l).map_err(|x| x.to_string())?,
    )
    .map_err(|x| x.to_string())?;
    let run = |args: &[&str]| -> Result<Vec<u8>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_bcc"))
            .args(args)
            .output()
            .map_err(|x| x.to_string())?;
        ensure(out.status.code() == Some(0), || {
            String::from_utf8_lossy(&out.stderr).into_owned()
        })?;
        Ok(out.stdout)
    };
    let p = |x: &Path| x.to_str().unwrap().to_string();
    let (es, ls) = (p(&e), p(&l));
    let mut invocations: Vec<Vec<String>> = ["online", "lp", "l2p"]
        .iter()
        .map(|alg| {
            [
                "query",
                "--graph",
                &es,
                "--labels",
                &ls,
                "--ql",
                "5",
                "--qr",
                "405",
                "--k1",
                "2",
                "--k2",
                "2",
                "--algorithm",
                alg,
            ]
            .map(String::from)
            .to_vec()
        })
        .collect();
    invocations.push(
        [
            "gen-queries",
            "--graph",
            &es,
            "--labels",
            &ls,
            "--num-queries",
            "20",
            "--seed",
            "3",
        ]
        .map(String::from)
        .to_vec(),
    );
    invocations.push(["stats", "--graph", &es, "--labels", &ls].map(String::from).to_vec());
    for args in &invocations {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = run(&args)?;
        ensure(!first.is_empty(), || format!("{} printed nothing", args[0]))?;
        for _ in 1..5 {
            ensure(run(&args)? == first, || {
                format!("{} output differs between runs", args.join(" "))
            })?;
        }
    }
    Ok(format!("{} invocations x 5 runs, byte-identical", invocations.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("butterfly exactness", c1_butterfly_exactness),
        ("fixture butterfly degrees", c2_fixture_butterflies),
        ("fixture distances", c3_fixture_distances),
        ("fast distance exactness", c4_fast_distance),
        ("incremental leader updates", c5_leader_updates),
        ("2-approximation", c6_two_approximation),
        ("validity universality", c7_validity),
        ("two-group reduction", c8_two_group_reduction),
        ("planted community recovery", c9_planted_recovery),
        ("performance ordering", c10_performance_order),
        ("determinism", c11_determinism),
    ];
    let only: Option<usize> = std::env::var("BCC_ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != i + 1) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
