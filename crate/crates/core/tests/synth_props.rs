use pagrowth::synth::*;
use pagrowth::temporal_net::{write_network, NodeId, TemporalNetwork};

/// Targets drawn at step `t` of one run, with the at-risk weights of that step.
fn step_draws(config: &GeneratorConfig, t: u32) -> (Vec<NodeId>, Vec<f64>, Vec<NodeId>) {
    let (net, truth) = generate(config).unwrap();
    let (ids, weights) =
        attachment_weights(&net, &config.kernel, &truth.fitness_values(), t).unwrap();
    let targets = net
        .events()
        .iter()
        .filter(|e| e.time == t)
        .map(|e| e.target)
        .collect();
    (ids, weights, targets)
}

#[test]
fn uniform_kernel_picks_targets_uniformly() {
    // Ten nodes are at risk at step 9; 3334 runs give about 10^4 draws.
    let mut counts = [0u64; 10];
    for seed in 0..3334 {
        let config = GeneratorConfig {
            n_steps: 9,
            kernel: Kernel::Exponent { alpha: 0.0 },
            fitness: FitnessDist::Constant,
            seed,
            ..Default::default()
        };
        let (ids, _, targets) = step_draws(&config, 9);
        assert_eq!(ids.len(), 10);
        for t in targets {
            counts[t.index()] += 1;
        }
    }
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / 10.0;
    let chi2: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    // 99th percentile of chi-square with 9 degrees of freedom.
    assert!(chi2 < 21.666, "chi-square {chi2} for counts {counts:?}");
}

#[test]
fn double_fitness_doubles_the_selection_rate() {
    let (mut obs_high, mut obs_low) = (0.0, 0.0);
    let (mut exp_high, mut var_high) = (0.0, 0.0);
    let (mut unit_high, mut unit_low) = (0.0, 0.0);
    for seed in 0..3334 {
        let config = GeneratorConfig {
            n_steps: 9,
            kernel: Kernel::Exponent { alpha: 0.0 },
            fitness: FitnessDist::TwoPoint {
                low: 1.0,
                high: 2.0,
                p: 0.5,
            },
            seed,
            ..Default::default()
        };
        let (ids, weights, targets) = step_draws(&config, 9);
        let z: f64 = weights.iter().sum();
        let high: Vec<bool> = weights.iter().map(|&w| w > 1.5).collect();
        let p_high: f64 = weights
            .iter()
            .zip(&high)
            .filter(|(_, h)| **h)
            .map(|(w, _)| w / z)
            .sum();
        let n_high = high.iter().filter(|h| **h).count() as f64;
        for t in targets {
            let pos = ids.iter().position(|&i| i == t).unwrap();
            if high[pos] {
                obs_high += 1.0;
            } else {
                obs_low += 1.0;
            }
            exp_high += p_high;
            var_high += p_high * (1.0 - p_high);
            unit_high += n_high / z;
            unit_low += (ids.len() as f64 - n_high) / z;
        }
    }
    assert!(
        (obs_high - exp_high).abs() <= 3.0 * var_high.sqrt(),
        "high-group draws {obs_high}, expected {exp_high} ± {}",
        var_high.sqrt()
    );
    let ratio = (obs_high / unit_high) / (obs_low / unit_low);
    assert!((ratio - 2.0).abs() < 0.15, "rate ratio {ratio}");
}

#[test]
fn superlinear_kernel_concentrates_links() {
    let config = GeneratorConfig {
        n_steps: 5000,
        kernel: Kernel::Exponent { alpha: 1.5 },
        fitness: FitnessDist::Constant,
        seed: 2,
        ..Default::default()
    };
    let (net, _) = generate(&config).unwrap();
    let hist = empirical_degree_distribution(&net).unwrap();
    let max_degree = *hist.keys().next_back().unwrap();
    let share = max_degree as f64 / net.events().len() as f64;
    assert!(share > 0.5, "largest share {share}");
}

fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            for &k in &idx[i..=j] {
                r[k] = (i + j) as f64 / 2.0;
            }
            i = j + 1;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

fn age_degree_correlation(net: &TemporalNetwork) -> f64 {
    let age: Vec<f64> = net.nodes().iter().map(|n| -(n.birth_time as f64)).collect();
    let degree: Vec<f64> = net
        .nodes()
        .iter()
        .map(|n| net.final_degree(n.id).unwrap() as f64)
        .collect();
    spearman(&age, &degree)
}

/// Share of all link endpoints held by the oldest tenth of the nodes.
fn oldest_decile_share(net: &TemporalNetwork) -> f64 {
    let n = net.node_count();
    let total: u32 = net
        .nodes()
        .iter()
        .map(|r| net.final_degree(r.id).unwrap())
        .sum();
    let old: u32 = net.nodes()[..n / 10]
        .iter()
        .map(|r| net.final_degree(r.id).unwrap())
        .sum();
    old as f64 / total as f64
}

#[test]
fn older_nodes_end_with_more_links() {
    for seed in 1..=5 {
        let run = |alpha: f64| {
            let config = GeneratorConfig {
                n_steps: 1000,
                kernel: Kernel::Exponent { alpha },
                fitness: FitnessDist::Constant,
                seed,
                ..Default::default()
            };
            let net = generate(&config).unwrap().0;
            (age_degree_correlation(&net), oldest_decile_share(&net))
        };
        let ((rho_flat, share_flat), (rho_rich, share_rich)) = (run(0.0), run(1.0));
        assert!(rho_flat > 0.5, "seed {seed}: {rho_flat}");
        assert!(rho_rich > 0.5, "seed {seed}: {rho_rich}");
        assert!(
            share_rich > share_flat,
            "seed {seed}: {share_rich} <= {share_flat}"
        );
    }
}

#[test]
fn same_seed_same_stream() {
    for directed in [false, true] {
        let config = GeneratorConfig {
            n_steps: 400,
            directed,
            seed: 77,
            ..Default::default()
        };
        let (n1, t1) = generate(&config).unwrap();
        let (n2, t2) = generate(&config).unwrap();
        assert_eq!(write_network(&n1), write_network(&n2));
        assert_eq!(t1.to_json().unwrap(), t2.to_json().unwrap());
        let other = generate(&GeneratorConfig { seed: 78, ..config }).unwrap().0;
        assert_ne!(write_network(&n1), write_network(&other));
    }
}

#[test]
fn degree_histogram_covers_every_member() {
    let config = GeneratorConfig {
        n_steps: 300,
        ..Default::default()
    };
    let (net, _) = generate(&config).unwrap();
    let hist = empirical_degree_distribution(&net).unwrap();
    assert_eq!(hist.values().sum::<usize>(), net.member_count());
    let stubs: u64 = hist.iter().map(|(&k, &c)| k as u64 * c as u64).sum();
    assert_eq!(stubs, 2 * net.events().len() as u64);
}
