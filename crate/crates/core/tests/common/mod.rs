#![allow(dead_code)]

use pagrowth::estimator::{BinEstimate, EstimationConfig, EstimationResult, NodeFitness};
use pagrowth::temporal_net::{NodeId, NodeKind, Resolution, TemporalNetwork, Time};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random network of at most 10 member nodes (plus one citing source
/// when directed) with at least one selection.
pub fn random_fixture(seed: u64) -> TemporalNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let directed = rng.random_bool(0.5);
        let mut net = TemporalNetwork::new(Resolution::Step, directed);
        let source = (directed && rng.random_bool(0.5)).then(|| net.add_source_node("src", 0));
        let n = rng.random_range(2..=10);
        for i in 0..n {
            let birth = if i < 2 { 0 } else { rng.random_range(0..5) };
            net.add_node(&format!("n{i}"), birth);
        }
        let members: Vec<_> = net
            .nodes()
            .iter()
            .filter(|r| r.kind == NodeKind::Member)
            .map(|r| (r.id, r.birth_time))
            .collect();
        let mut t: Time = 0;
        for _ in 0..rng.random_range(1..=14) {
            t += rng.random_range(0..=1);
            let alive: Vec<NodeId> = members.iter().filter(|m| m.1 <= t).map(|m| m.0).collect();
            let target = alive[rng.random_range(0..alive.len())];
            let from = match source {
                Some(s) if rng.random_bool(0.5) => s,
                _ => {
                    let others: Vec<_> = alive.iter().copied().filter(|&x| x != target).collect();
                    if others.is_empty() {
                        continue;
                    }
                    others[rng.random_range(0..others.len())]
                }
            };
            net.connect(t, from, target).unwrap();
        }
        let selections = net.events().iter().any(|e| {
            let born = |id: NodeId| net.node(id).unwrap().birth_time;
            born(e.target) < e.time || (!directed && born(e.source) < e.time)
        });
        if selections {
            return net;
        }
    }
}

/// Degree of every node at the start of `t`, replayed from the raw events.
pub fn degrees_before(net: &TemporalNetwork, t: Time) -> Vec<u32> {
    let mut deg = vec![0u32; net.node_count()];
    for e in net.events().iter().filter(|e| e.time < t) {
        deg[e.target.index()] += 1;
        if !net.is_directed() {
            deg[e.source.index()] += 1;
        }
    }
    deg
}

/// `Σ log P(selection)` with each probability normalized by brute force over
/// the members born before the event time. `a[k]` is the attachment value at
/// degree `k` (the last entry covers higher degrees).
pub fn brute_force_log_likelihood(net: &TemporalNetwork, a: &[f64], eta: &[f64]) -> f64 {
    let attach = |k: u32| a[(k as usize).min(a.len() - 1)];
    let mut total = 0.0;
    for e in net.events() {
        let deg = degrees_before(net, e.time);
        let at_risk: Vec<usize> = net
            .nodes()
            .iter()
            .filter(|r| r.kind == NodeKind::Member && r.birth_time < e.time)
            .map(|r| r.id.index())
            .collect();
        let z: f64 = at_risk.iter().map(|&j| attach(deg[j]) * eta[j]).sum();
        let mut chosen = vec![e.target.index()];
        if !net.is_directed() {
            chosen.push(e.source.index());
        }
        for i in chosen.into_iter().filter(|i| at_risk.contains(i)) {
            total += (attach(deg[i]) * eta[i] / z).ln();
        }
    }
    total
}

/// Fourth-order central difference of `f` at `x` along coordinate `j`.
pub fn central_difference(f: &dyn Fn(&[f64]) -> f64, x: &[f64], j: usize, h: f64) -> f64 {
    let at = |d: f64| {
        let mut y = x.to_vec();
        y[j] += d;
        f(&y)
    };
    (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h)
}

/// An estimation result with per-degree bins and the given fitnesses for
/// node ids `0..eta.len()`.
pub fn synthetic_result(
    a: &[f64],
    labels: &[String],
    eta: &[f64],
    exposed: &[bool],
) -> EstimationResult {
    EstimationResult {
        a: a.iter()
            .enumerate()
            .map(|(k, &value)| BinEstimate {
                bin_lo: k as u32,
                bin_hi: k as u32,
                value,
                sigma: None,
                selections: 0.0,
                estimated: true,
            })
            .collect(),
        eta: labels
            .iter()
            .enumerate()
            .map(|(i, label)| NodeFitness {
                node_id: NodeId(i as u32),
                label: label.clone(),
                value: eta[i],
                exposed: exposed[i],
                selections: 0.0,
            })
            .collect(),
        alpha: None,
        alpha_stderr: None,
        objective_trace: vec![],
        converged: true,
        iterations: 0,
        sigma_fallback: false,
        config: EstimationConfig::default(),
        period: None,
    }
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// The `[p, 1 − p]` interval check used for frequency tests: is `count` within
/// `z` binomial standard errors of `n p`?
pub fn within_binomial_se(count: u64, n: u64, p: f64, z: f64) -> bool {
    let mean = n as f64 * p;
    let se = (n as f64 * p * (1.0 - p)).sqrt();
    (count as f64 - mean).abs() <= z * se
}
