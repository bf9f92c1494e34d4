//! Growing networks with a known attachment kernel and known fitnesses.
//!
//! Step 0 lays down a seed of two nodes joined by one edge. Every later step
//! `t` adds `newcomers_per_step` nodes; each draws its fitness and then
//! attaches `edges_per_newcomer` edges. Every target is drawn independently,
//! with replacement, with probability `A_k η / Z` over the nodes born before
//! `t`, where `k` is the degree at the start of the step.
//!
//! Random numbers come from ChaCha8 seeded with `seed`. Step `t` reads
//! stream number `t`, starting at word 0, so each step's draws depend only on
//! `(seed, t)`. Within a step the order is: per newcomer, one fitness draw
//! followed by its target draws.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::temporal_net::{NodeId, NodeKind, Resolution, TemporalNetwork, Time};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Kernel {
    /// `A_0 = 1`, `A_k = k^α` for `k >= 1`.
    Exponent { alpha: f64 },
    /// `A_k = values[k]`; degrees past the end use the last entry.
    Table { values: Vec<f64> },
}

impl Kernel {
    pub fn value(&self, k: u32) -> f64 {
        match self {
            Kernel::Exponent { alpha } => {
                if k == 0 {
                    1.0
                } else {
                    (k as f64).powf(*alpha)
                }
            }
            Kernel::Table { values } => values[(k as usize).min(values.len() - 1)],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FitnessDist {
    Constant,
    LogNormal {
        mu: f64,
        sigma: f64,
    },
    /// `high` with probability `p`, otherwise `low`.
    TwoPoint {
        low: f64,
        high: f64,
        p: f64,
    },
}

impl FitnessDist {
    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            FitnessDist::Constant => 1.0,
            FitnessDist::LogNormal { mu, sigma } => {
                if sigma == 0.0 {
                    mu.exp()
                } else {
                    LogNormal::new(mu, sigma).expect("validated").sample(rng)
                }
            }
            FitnessDist::TwoPoint { low, high, p } => {
                if rng.random::<f64>() < p {
                    high
                } else {
                    low
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub n_steps: u32,
    pub newcomers_per_step: u32,
    pub edges_per_newcomer: u32,
    pub kernel: Kernel,
    pub fitness: FitnessDist,
    pub directed: bool,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            n_steps: 3000,
            newcomers_per_step: 1,
            edges_per_newcomer: 3,
            kernel: Kernel::Exponent { alpha: 0.5 },
            fitness: FitnessDist::LogNormal {
                mu: 0.0,
                sigma: 0.25,
            },
            directed: false,
            seed: 1,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.n_steps == 0 {
            return bad("n_steps must be positive".into());
        }
        if self.newcomers_per_step == 0 {
            return bad("newcomers_per_step must be positive".into());
        }
        if self.edges_per_newcomer == 0 {
            return bad("edges_per_newcomer must be positive".into());
        }
        match &self.kernel {
            Kernel::Exponent { alpha } if !alpha.is_finite() => {
                return bad(format!("alpha must be finite, got {alpha}"))
            }
            Kernel::Table { values } if values.is_empty() => {
                return bad("kernel table is empty".into())
            }
            Kernel::Table { values } if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) => {
                return bad("kernel table entries must be positive".into())
            }
            _ => {}
        }
        match self.fitness {
            FitnessDist::LogNormal { mu, sigma } if !(mu.is_finite() && sigma.is_finite() && sigma >= 0.0) => {
                bad(format!("log-normal fitness needs finite mu and sigma >= 0, got ({mu}, {sigma})"))
            }
            FitnessDist::TwoPoint { low, high, p }
                if !((0.0..=1.0).contains(&p) && low > 0.0 && high > 0.0 && low.is_finite() && high.is_finite()) =>
            {
                bad(format!("two-point fitness needs positive values and p in [0,1], got ({low}, {high}, {p})"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrueFitness {
    pub node_id: NodeId,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub kernel: Kernel,
    pub fitness: Vec<TrueFitness>,
}

impl GroundTruth {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn fitness_values(&self) -> Vec<f64> {
        self.fitness.iter().map(|f| f.value).collect()
    }
}

/// Draws indices with probability proportional to fixed weights.
#[derive(Clone, Debug)]
pub struct AttachmentSampler {
    cumulative: Vec<f64>,
}

impl AttachmentSampler {
    pub fn new(weights: &[f64]) -> Self {
        let mut acc = 0.0;
        let cumulative = weights
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        AttachmentSampler { cumulative }
    }

    pub fn total(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u = rng.random::<f64>() * self.total();
        self.cumulative
            .partition_point(|&c| c <= u)
            .min(self.cumulative.len() - 1)
    }
}

/// Weights `A_{k_j(t)} η_j` of the nodes born before `t`, in id order.
pub fn attachment_weights(
    net: &TemporalNetwork,
    kernel: &Kernel,
    fitness: &[f64],
    t: Time,
) -> Result<(Vec<NodeId>, Vec<f64>)> {
    let mut ids = Vec::new();
    let mut w = Vec::new();
    for n in net
        .nodes()
        .iter()
        .filter(|n| n.kind == NodeKind::Member && n.birth_time < t)
    {
        ids.push(n.id);
        w.push(kernel.value(net.degree_at(n.id, t)?) * fitness[n.id.index()]);
    }
    Ok((ids, w))
}

fn step_rng(seed: u64, step: Time) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(step as u64);
    rng.set_word_pos(0);
    rng
}

pub fn generate(config: &GeneratorConfig) -> Result<(TemporalNetwork, GroundTruth)> {
    config.validate()?;
    let total = 2 + config.n_steps as usize * config.newcomers_per_step as usize;
    let mut net = TemporalNetwork::new(Resolution::Step, config.directed);
    let mut fitness: Vec<f64> = Vec::with_capacity(total);
    let mut degree: Vec<u32> = Vec::with_capacity(total);

    let mut rng = step_rng(config.seed, 0);
    let a = net.add_node("v0", 0);
    let b = net.add_node("v1", 0);
    fitness.push(config.fitness.draw(&mut rng));
    fitness.push(config.fitness.draw(&mut rng));
    net.connect(0, a, b)?;
    degree.push(if config.directed { 0 } else { 1 });
    degree.push(1);

    let mut weights: Vec<f64> = Vec::with_capacity(total);
    let mut pending: Vec<usize> = Vec::new();
    for t in 1..=config.n_steps {
        let mut rng = step_rng(config.seed, t);
        weights.clear();
        weights.extend(
            degree
                .iter()
                .zip(&fitness)
                .map(|(&k, &f)| config.kernel.value(k) * f),
        );
        let sampler = AttachmentSampler::new(&weights);
        pending.clear();
        for _ in 0..config.newcomers_per_step {
            let id = net.add_node(&format!("v{}", net.node_count()), t);
            fitness.push(config.fitness.draw(&mut rng));
            for _ in 0..config.edges_per_newcomer {
                let target = sampler.sample(&mut rng);
                net.connect(t, id, NodeId(target as u32))?;
                pending.push(target);
                if !config.directed {
                    pending.push(id.index());
                }
            }
        }
        degree.resize(net.node_count(), 0);
        for &j in &pending {
            degree[j] += 1;
        }
    }

    let truth = GroundTruth {
        kernel: config.kernel.clone(),
        fitness: fitness
            .iter()
            .enumerate()
            .map(|(i, &value)| TrueFitness {
                node_id: NodeId(i as u32),
                value,
            })
            .collect(),
    };
    Ok((net, truth))
}

/// Histogram of final model degrees over member nodes.
pub fn empirical_degree_distribution(net: &TemporalNetwork) -> Result<BTreeMap<u32, usize>> {
    let mut hist = BTreeMap::new();
    for n in net.nodes().iter().filter(|n| n.kind == NodeKind::Member) {
        *hist.entry(net.final_degree(n.id)?).or_insert(0) += 1;
    }
    Ok(hist)
}
