//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use common::{
    brute_force_log_likelihood, central_difference, degrees_before, median, random_fixture,
};
use pagrowth::estimator::*;
use pagrowth::ingest::*;
use pagrowth::metrics::{build_series, rank_by_fitness};
use pagrowth::synth::*;
use pagrowth::temporal_net::{write_network, NodeId, NodeKind, TemporalNetwork};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SEEDS: [u64; 5] = [1, 2, 3, 4, 5];
const ALPHAS: [f64; 4] = [0.0, 0.3, 0.5, 1.0];

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

struct Run {
    alpha: f64,
    seed: u64,
    net: TemporalNetwork,
    truth: GroundTruth,
    result: EstimationResult,
    elapsed: Duration,
}

#[derive(Copy, Clone)]
enum Scenario {
    Exponent(f64),
    TwoPoint,
    Constant,
}

fn acceptance_run(scenario: Scenario, seed: u64) -> Run {
    let (alpha, fitness) = match scenario {
        Scenario::Exponent(a) => (
            a,
            FitnessDist::LogNormal {
                mu: 0.0,
                sigma: 0.25,
            },
        ),
        Scenario::TwoPoint => (
            0.5,
            FitnessDist::TwoPoint {
                low: 1.0,
                high: 3.0,
                p: 0.5,
            },
        ),
        Scenario::Constant => (0.5, FitnessDist::Constant),
    };
    let config = GeneratorConfig {
        n_steps: 3000,
        newcomers_per_step: 1,
        edges_per_newcomer: 3,
        kernel: Kernel::Exponent { alpha },
        fitness,
        directed: false,
        seed,
    };
    let started = Instant::now();
    let (net, truth) = generate(&config).unwrap();
    let result = estimate(&net, &EstimationConfig::default()).unwrap();
    Run {
        alpha,
        seed,
        net,
        truth,
        result,
        elapsed: started.elapsed(),
    }
}

struct Runs {
    exponent: Vec<Run>,
    two_point: Vec<Run>,
    constant: Vec<Run>,
}

fn runs() -> &'static Runs {
    static RUNS: OnceLock<Runs> = OnceLock::new();
    RUNS.get_or_init(|| {
        let batch = |scenarios: Vec<Scenario>| -> Vec<Run> {
            let jobs: Vec<(Scenario, u64)> = scenarios
                .into_iter()
                .flat_map(|s| SEEDS.map(|seed| (s, seed)))
                .collect();
            jobs.into_par_iter()
                .map(|(s, seed)| acceptance_run(s, seed))
                .collect()
        };
        Runs {
            exponent: batch(ALPHAS.iter().map(|&a| Scenario::Exponent(a)).collect()),
            two_point: batch(vec![Scenario::TwoPoint]),
            constant: batch(vec![Scenario::Constant]),
        }
    })
}

fn all_runs() -> impl Iterator<Item = &'static Run> {
    let r = runs();
    r.exponent.iter().chain(&r.two_point).chain(&r.constant)
}

fn fixture_results() -> &'static Vec<(TemporalNetwork, EstimationResult)> {
    static FIXTURES: OnceLock<Vec<(TemporalNetwork, EstimationResult)>> = OnceLock::new();
    FIXTURES.get_or_init(|| {
        (0..100)
            .into_par_iter()
            .map(|seed| {
                let net = random_fixture(seed);
                let config = EstimationConfig {
                    binning: BinningScheme::PerDegree,
                    ..Default::default()
                };
                let result = estimate(&net, &config).unwrap();
                (net, result)
            })
            .collect()
    })
}

fn exposed_values(result: &EstimationResult) -> Vec<(NodeId, f64)> {
    result
        .eta
        .iter()
        .filter(|e| e.exposed)
        .map(|e| (e.node_id, e.value))
        .collect()
}

fn exponent_recovery() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut slowest = 0.0f64;
    for &alpha in &ALPHAS {
        let runs: Vec<&Run> = runs()
            .exponent
            .iter()
            .filter(|r| r.alpha == alpha)
            .collect();
        let estimates: Vec<f64> = runs.iter().map(|r| r.result.alpha.unwrap()).collect();
        let hits = estimates
            .iter()
            .filter(|a| (*a - alpha).abs() <= 0.1)
            .count();
        ok &= hits >= 4;
        for r in &runs {
            slowest = slowest.max(r.elapsed.as_secs_f64());
            ok &= r.elapsed < Duration::from_secs(60);
        }
        let shown: Vec<String> = estimates.iter().map(|a| format!("{a:.3}")).collect();
        parts.push(format!("α={alpha}: {hits}/5 [{}]", shown.join(" ")));
    }
    check(
        ok,
        format!("{}; slowest run {slowest:.2}s", parts.join("; ")),
    )
}

fn fitness_recovery() -> Outcome {
    let mut ratios = Vec::new();
    for run in &runs().two_point {
        let truth = run.truth.fitness_values();
        let (high, low): (Vec<_>, Vec<_>) = exposed_values(&run.result)
            .into_iter()
            .partition(|(id, _)| truth[id.index()] > 2.0);
        let strip = |v: Vec<(NodeId, f64)>| v.into_iter().map(|x| x.1).collect::<Vec<_>>();
        ratios.push(median(strip(high)) / median(strip(low)));
    }
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.3}")).collect();
    check(
        ratios.iter().all(|&r| r >= 2.0),
        format!(
            "median high/low ratio per seed [{}], need ≥ 2",
            shown.join(" ")
        ),
    )
}

fn degenerate_fitness() -> Outcome {
    let mut fractions = Vec::new();
    for run in &runs().constant {
        let values = exposed_values(&run.result);
        let inside = values
            .iter()
            .filter(|(_, v)| (0.5..=2.0).contains(v))
            .count();
        fractions.push(inside as f64 / values.len() as f64);
    }
    let shown: Vec<String> = fractions.iter().map(|f| format!("{:.4}", f)).collect();
    check(
        fractions.iter().all(|&f| f >= 0.95),
        format!("fraction of η̂ in [0.5, 2] per seed [{}]", shown.join(" ")),
    )
}

fn largest_drop(trace: &[f64]) -> f64 {
    trace
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(f64::NEG_INFINITY, f64::max)
}

fn monotone_ascent() -> Outcome {
    let traces = all_runs()
        .map(|r| &r.result.objective_trace)
        .chain(fixture_results().iter().map(|f| &f.1.objective_trace));
    let mut worst = f64::NEG_INFINITY;
    let mut count = 0;
    for trace in traces {
        worst = worst.max(largest_drop(trace));
        count += 1;
    }
    check(
        worst <= 1e-9,
        format!("{count} traces, largest single-step drop {worst:e}"),
    )
}

fn max_normalized_difference(x: &EstimationResult, y: &EstimationResult) -> f64 {
    let pairs = x.a.iter().map(|b| b.value).zip(y.a.iter().map(|b| b.value));
    let pairs = pairs.chain(
        x.eta
            .iter()
            .map(|e| e.value)
            .zip(y.eta.iter().map(|e| e.value)),
    );
    pairs
        .map(|(u, v)| (u - v).abs() / u.abs().max(1.0))
        .fold(0.0, f64::max)
}

fn normalization() -> Outcome {
    let results = all_runs()
        .map(|r| &r.result)
        .chain(fixture_results().iter().map(|f| &f.1));
    let (mut checked, mut anchor_ok, mut worst_mean) = (0, true, 0.0f64);
    for r in results.filter(|r| r.converged) {
        checked += 1;
        anchor_ok &= r.a[0].bin_lo == 0 && r.a[0].value == 1.0;
        let exposed: Vec<f64> = r
            .eta
            .iter()
            .filter(|e| e.exposed)
            .map(|e| e.value)
            .collect();
        let mean = exposed.iter().sum::<f64>() / exposed.len() as f64;
        worst_mean = worst_mean.max((mean - 1.0).abs());
    }
    let mut worst_shift = 0.0f64;
    for run in runs().exponent.iter().filter(|r| r.seed == 1) {
        let scaled = estimate_from(
            &run.net,
            &EstimationConfig::default(),
            Start {
                a_scale: 10.0,
                eta_scale: 1.0,
            },
        )
        .unwrap();
        worst_shift = worst_shift.max(max_normalized_difference(&run.result, &scaled));
    }
    check(
        anchor_ok && worst_mean <= 1e-12 && worst_shift <= 1e-6,
        format!(
            "{checked} converged results, A[bin(0)] = 1: {anchor_ok}, max |mean η − 1| {worst_mean:e}, \
             max change from ×10 initial A {worst_shift:e}"
        ),
    )
}

fn likelihood_oracle() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..500u64 {
        let net = random_fixture(seed);
        let stats = build_sufficient_stats(&net, &BinningScheme::PerDegree).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: Vec<f64> = (0..stats.bin_count())
            .map(|_| rng.random_range(0.1..10.0))
            .collect();
        let eta: Vec<f64> = (0..stats.node_count())
            .map(|_| rng.random_range(0.1..10.0))
            .collect();
        let got = log_likelihood(&stats, &a, &eta).unwrap();
        let want = brute_force_log_likelihood(&net, &a, &eta);
        worst = worst.max((got - want).abs());
    }
    check(
        worst <= 1e-12,
        format!("500 fixtures, max |Δ log L| {worst:e}"),
    )
}

fn gradient_check() -> Outcome {
    let run = runs()
        .exponent
        .iter()
        .find(|r| r.alpha == 0.5 && r.seed == 1)
        .unwrap();
    let config = EstimationConfig::default();
    let stats = build_sufficient_stats(&run.net, &config.binning).unwrap();
    let fitted = fit(&stats, &config, Start::default()).unwrap();
    let analytic = gradient(&stats, &fitted.a, &fitted.eta, &config).unwrap();

    let nb = stats.bin_count();
    let x: Vec<f64> = fitted.a.iter().chain(&fitted.eta).map(|v| v.ln()).collect();
    let f = |x: &[f64]| {
        let a: Vec<f64> = x[..nb].iter().map(|v| v.exp()).collect();
        let eta: Vec<f64> = x[nb..].iter().map(|v| v.exp()).collect();
        penalized_objective(&stats, &a, &eta, &config).unwrap()
    };
    let mut coords: Vec<(usize, f64)> = (0..nb)
        .filter(|&b| analytic.scale_a[b] > 0.0)
        .map(|b| (b, analytic.scale_a[b]))
        .collect();
    let exposed: Vec<usize> = (0..stats.node_count())
        .filter(|&i| analytic.scale_eta[i] > 0.0)
        .collect();
    let stride = (exposed.len() / 40).max(1);
    coords.extend(
        exposed
            .iter()
            .step_by(stride)
            .map(|&i| (nb + i, analytic.scale_eta[i])),
    );
    let worst_fd = coords
        .par_iter()
        .map(|&(j, scale)| central_difference(&f, &x, j, 1e-4).abs() / scale)
        .reduce(|| 0.0, f64::max);
    let worst_analytic = analytic.max_relative();
    check(
        worst_fd <= 1e-6 && worst_analytic <= 1e-6,
        format!(
            "{} coordinates by finite differences: max relative {worst_fd:e}; analytic over all {} coordinates: {worst_analytic:e}",
            coords.len(),
            nb + stats.node_count()
        ),
    )
}

fn metrics_oracle() -> Outcome {
    let mut worst = 0.0f64;
    let mut anchored_ok = true;
    let mut identity = 0.0f64;
    for seed in 0..300u64 {
        let net = random_fixture(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: Vec<f64> = (0..rng.random_range(1..6))
            .map(|_| rng.random_range(0.1..10.0))
            .collect();
        let labels: Vec<String> = net.nodes().iter().map(|n| n.label.clone()).collect();
        let eta: Vec<f64> = labels.iter().map(|_| rng.random_range(0.1..10.0)).collect();
        let result = common::synthetic_result(&a, &labels, &eta, &vec![true; labels.len()]);
        let (_, t_end) = net.time_span().unwrap();
        let series = build_series(&net, &result, 0, t_end, false).unwrap();
        for (j, &t) in series.times.iter().enumerate() {
            let deg = degrees_before(&net, t);
            let members: Vec<usize> = net
                .nodes()
                .iter()
                .filter(|n| n.kind == NodeKind::Member && n.birth_time <= t)
                .map(|n| n.id.index())
                .collect();
            let s: f64 = members
                .iter()
                .map(|&i| a[(deg[i] as usize).min(a.len() - 1)] * eta[i])
                .sum();
            let c: f64 = members.iter().map(|&i| eta[i]).sum::<f64>() / members.len() as f64;
            let s_bar = s / members.len() as f64;
            for (got, want) in [(series.s[j], s), (series.s_bar[j], s_bar), (series.c[j], c)] {
                worst = worst.max((got - want).abs() / want.abs().max(1.0));
            }
            identity = identity
                .max((series.s[j] - series.s_bar[j] * series.n[j] as f64).abs() / series.s[j]);
        }
        let anchored = build_series(&net, &result, 0, t_end, true).unwrap();
        anchored_ok &= anchored.s[0] == 1.0 && anchored.s_bar[0] == 1.0 && anchored.c[0] == 1.0;
    }
    check(
        worst <= 1e-12 && identity <= 1e-12 && anchored_ok,
        format!(
            "300 fixtures, max relative error {worst:e}, max |S − S̄·N|/S {identity:e}, anchored start at 1: {anchored_ok}"
        ),
    )
}

fn noiseless_exponent_fit() -> Outcome {
    let mut worst = 0.0f64;
    for alpha in [0.0, 0.5, 1.0, 1.5] {
        for scheme in [
            BinningScheme::PerDegree,
            BinningScheme::Hybrid {
                linear_until: 10,
                base: 1.25,
            },
        ] {
            let binning = scheme.build(200);
            // Exact values at each bin's geometric-mean degree.
            let a: Vec<f64> = binning
                .iter()
                .map(|(lo, hi)| {
                    if lo == 0 {
                        1.0
                    } else {
                        let mean_log =
                            (lo..=hi).map(|k| (k as f64).ln()).sum::<f64>() / (hi - lo + 1) as f64;
                        (alpha * mean_log).exp()
                    }
                })
                .collect();
            let weights: Vec<f64> = (0..a.len()).map(|b| 1.0 + b as f64).collect();
            let fitted = fit_attachment_exponent(&binning, &a, &weights).unwrap();
            worst = worst.max((fitted.alpha - alpha).abs());
        }
    }
    check(
        worst <= 1e-8,
        format!("max |α̂ − α| {worst:e} over α ∈ {{0, 0.5, 1, 1.5}}, two binnings"),
    )
}

fn generator_fidelity() -> Outcome {
    let config = GeneratorConfig {
        n_steps: 14,
        kernel: Kernel::Exponent { alpha: 1.0 },
        fitness: FitnessDist::LogNormal {
            mu: 0.0,
            sigma: 0.5,
        },
        seed: 21,
        ..Default::default()
    };
    let (net, truth) = generate(&config).unwrap();
    let t = config.n_steps;
    let fitness = truth.fitness_values();

    // Probabilities from a separate degree replay.
    let deg = degrees_before(&net, t);
    let at_risk: Vec<usize> = net
        .nodes()
        .iter()
        .filter(|n| n.kind == NodeKind::Member && n.birth_time < t)
        .map(|n| n.id.index())
        .collect();
    let weight = |i: usize| if deg[i] == 0 { 1.0 } else { deg[i] as f64 } * fitness[i];
    let z: f64 = at_risk.iter().map(|&i| weight(i)).sum();

    let (ids, weights) = attachment_weights(&net, &config.kernel, &fitness, t).unwrap();
    assert_eq!(ids.iter().map(|i| i.index()).collect::<Vec<_>>(), at_risk);
    let sampler = AttachmentSampler::new(&weights);
    let draws = 100_000u64;
    let mut counts = vec![0u64; ids.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..draws {
        counts[sampler.sample(&mut rng)] += 1;
    }
    let mut worst = 0.0f64;
    for (j, &i) in at_risk.iter().enumerate() {
        let p = weight(i) / z;
        let se = (draws as f64 * p * (1.0 - p)).sqrt();
        worst = worst.max((counts[j] as f64 - draws as f64 * p).abs() / se);
    }

    let replay = |seed| {
        let (n, g) = generate(&GeneratorConfig {
            n_steps: 2000,
            seed,
            ..Default::default()
        })
        .unwrap();
        (write_network(&n), g.to_json().unwrap())
    };
    let identical = replay(8) == replay(8) && replay(8) != replay(9);
    check(
        worst <= 3.0 && identical,
        format!(
            "{} nodes at risk, 10^5 draws, max deviation {worst:.2} SE; byte-identical replay: {identical}",
            at_risk.len()
        ),
    )
}

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn ingestion_fixture() -> Outcome {
    let manifest: toml::Table = std::fs::read_to_string(fixture_path("corpus6.manifest.toml"))
        .unwrap()
        .parse()
        .unwrap();
    let expect = |section: &str, key: &str| manifest[section][key].as_integer().unwrap() as usize;
    let raw = parse_records(&fixture_path("corpus6.csv")).unwrap();
    let aliases = AliasMap::from_file(&fixture_path("aliases.tsv")).unwrap();
    let records = apply_aliases(&raw, &aliases);
    let members = |net: &TemporalNetwork| net.member_count();
    let sources = |net: &TemporalNetwork| net.node_count() - net.member_count();

    let mut mismatches = Vec::new();
    let mut compare = |name: &str, net: &TemporalNetwork, with_sources: bool| {
        let mut got = vec![members(net), net.events().len()];
        let mut want = vec![expect(name, "nodes"), expect(name, "events")];
        if with_sources {
            got.push(sources(net));
            want.push(expect(name, "sources"));
        }
        if got != want {
            mismatches.push(format!("{name}: {got:?} vs {want:?}"));
        }
    };
    compare(
        "coauthorship",
        &build_coauthorship(&records).unwrap(),
        false,
    );
    compare(
        "coauthorship_without_aliases",
        &build_coauthorship(&raw).unwrap(),
        false,
    );
    for (name, restrict, drop_self_citations) in [
        ("citation", false, false),
        ("citation_restricted", true, false),
        ("citation_without_self", false, true),
        ("citation_restricted_without_self", true, true),
    ] {
        let net = build_citation(
            &records,
            CitationOptions {
                restrict,
                drop_self_citations,
            },
        )
        .unwrap();
        compare(name, &net, true);
    }

    let co = build_coauthorship(&records).unwrap();
    let three = co.events().iter().filter(|e| e.time == 13).count();
    let hitt = co.find("Hitt M").unwrap();
    let isolated = co.final_degree(hitt).unwrap() == 0;
    check(
        mismatches.is_empty() && three == 3 && isolated && aliases.alias_count() == 2,
        format!(
            "6 network variants against the manifest, mismatches {mismatches:?}; 3-author record → {three} events; \
             single-author record isolated: {isolated}"
        ),
    )
}

fn ranking_format() -> Outcome {
    // Co-authorship column of the first period, in published order.
    let published = [
        ("Thomas H", 4.736),
        ("Wernerfelt B", 4.718),
        ("Bettis R", 4.116),
        ("Montgomery C", 3.951),
        ("Kim W", 3.610),
        ("Hitt M", 3.599),
        ("Robinson R", 3.578),
        ("Bracker J", 3.496),
        ("Macmillan I", 3.146),
        ("Pearce J", 3.096),
    ];
    let mut shuffled = published.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(1980);
    for i in (1..shuffled.len()).rev() {
        shuffled.swap(i, rng.random_range(0..=i));
    }
    let labels: Vec<String> = shuffled.iter().map(|p| p.0.to_string()).collect();
    let values: Vec<f64> = shuffled.iter().map(|p| p.1).collect();
    let result = common::synthetic_result(&[1.0], &labels, &values, &vec![true; labels.len()]);
    let ranked = rank_by_fitness(&result, 10).unwrap();
    let order: Vec<&str> = ranked.iter().map(|r| r.label.as_str()).collect();
    let expected: Vec<&str> = published.iter().map(|p| p.0).collect();
    let csv = pagrowth::metrics::ranking_csv(&ranked).unwrap();
    let first_row = csv.lines().nth(1).unwrap_or_default().to_string();
    check(
        order == expected && first_row == "1,Thomas H,4.736",
        format!("order {order:?}; first row {first_row:?}"),
    )
}

fn run_cli(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_pagrowth"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!(
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        ))
    }
}

fn end_to_end() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let p = |path: &Path| path.to_str().unwrap().to_string();
    let (data, est, metrics) = (
        dir.path().join("data"),
        dir.path().join("est"),
        dir.path().join("metrics"),
    );
    let started = Instant::now();
    let steps: [Vec<String>; 3] = [
        vec!["synth".into(), "--out-dir".into(), p(&data)],
        vec![
            "estimate".into(),
            "--network".into(),
            p(&data.join("network.tsv")),
            "--out-dir".into(),
            p(&est),
        ],
        vec![
            "metrics".into(),
            "--network".into(),
            p(&data.join("network.tsv")),
            "--results".into(),
            p(&est),
            "--out-dir".into(),
            p(&metrics),
        ],
    ];
    for args in &steps {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        run_cli(&args)?;
    }
    let elapsed = started.elapsed().as_secs_f64();
    let expected = [
        est.join("result_all.json"),
        est.join("pa_all.csv"),
        est.join("fitness_hist_all.csv"),
        est.join("summary.csv"),
        metrics.join("series_all.csv"),
        metrics.join("ranking_all.csv"),
    ];
    let missing: Vec<String> = expected
        .iter()
        .filter(|f| !f.exists())
        .map(|f| f.file_name().unwrap().to_string_lossy().into())
        .collect();
    check(
        missing.is_empty() && elapsed < 180.0,
        format!("synth → estimate → metrics in {elapsed:.1}s, missing outputs {missing:?}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("exponent recovery", exponent_recovery),
        ("fitness recovery", fitness_recovery),
        ("degenerate fitness", degenerate_fitness),
        ("monotone ascent", monotone_ascent),
        ("normalization exactness", normalization),
        ("likelihood oracle", likelihood_oracle),
        ("gradient check", gradient_check),
        ("metrics oracle", metrics_oracle),
        ("noiseless exponent fit", noiseless_exponent_fit),
        ("generator fidelity", generator_fidelity),
        ("ingestion fixture", ingestion_fixture),
        ("ranking format", ranking_format),
        ("end-to-end", end_to_end),
    ];
    let mut failed = 0;
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(criterion)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {name}: {status} ({detail})", i + 1);
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
