//! Competitiveness and competency series and fitness rankings.
//!
//! Over the nodes that exist at `t` (members born at or before `t`):
//! total competitiveness `S(t) = Σ A_{k_i(t)} η_i`, average competitiveness
//! `S̄(t) = S(t) / N(t)`, and average competency `C(t) = Σ η_i / N(t)`.
//! A node of degree 0 and fitness 1 is selected with probability `1/S(t)`,
//! so a rising `S` means a harder time for an average newcomer.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::EstimationResult;
use crate::temporal_net::{NodeId, TemporalNetwork, Time};

fn fitness_of(result: &EstimationResult, node: NodeId) -> Result<f64> {
    result.fitness(node).ok_or(Error::Coverage(node))
}

pub fn total_competitiveness(
    net: &TemporalNetwork,
    result: &EstimationResult,
    t: Time,
) -> Result<f64> {
    let mut s = 0.0;
    for id in net.active_nodes(t) {
        s += result.attachment(net.degree_at(id, t)?) * fitness_of(result, id)?;
    }
    Ok(s)
}

pub fn average_competitiveness(s: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain(
            "average competitiveness is undefined with no nodes".into(),
        ));
    }
    Ok(s / n as f64)
}

pub fn average_competency(
    net: &TemporalNetwork,
    result: &EstimationResult,
    t: Time,
) -> Result<f64> {
    let active = net.active_nodes(t);
    if active.is_empty() {
        return Err(Error::NoActiveNodes(t));
    }
    let mut sum = 0.0;
    for &id in &active {
        sum += fitness_of(result, id)?;
    }
    Ok(sum / active.len() as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompetitivenessSeries {
    pub times: Vec<Time>,
    pub n: Vec<usize>,
    pub s: Vec<f64>,
    pub s_bar: Vec<f64>,
    pub c: Vec<f64>,
    /// Every series is divided by its value at the first time.
    pub anchored: bool,
}

impl CompetitivenessSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// The same series divided by its first values. Idempotent.
    pub fn anchor(&self) -> CompetitivenessSeries {
        if self.anchored || self.is_empty() {
            return self.clone();
        }
        let scale = |v: &[f64]| v.iter().map(|x| x / v[0]).collect::<Vec<_>>();
        CompetitivenessSeries {
            times: self.times.clone(),
            n: self.n.clone(),
            s: scale(&self.s),
            s_bar: scale(&self.s_bar),
            c: scale(&self.c),
            anchored: true,
        }
    }

    /// CSV with header `t,N,S,S_bar,C`; numbers use the shortest
    /// representation that parses back to the same value.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,N,S,S_bar,C\n");
        for i in 0..self.len() {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                self.times[i], self.n[i], self.s[i], self.s_bar[i], self.c[i]
            );
        }
        out
    }
}

/// Series over `[t_from, t_to]`, starting at the first time with a node.
pub fn build_series(
    net: &TemporalNetwork,
    result: &EstimationResult,
    t_from: Time,
    t_to: Time,
    anchored: bool,
) -> Result<CompetitivenessSeries> {
    if t_from > t_to {
        return Err(Error::InvalidRange {
            start: t_from,
            end: t_to,
        });
    }
    let mut series = CompetitivenessSeries {
        times: vec![],
        n: vec![],
        s: vec![],
        s_bar: vec![],
        c: vec![],
        anchored: false,
    };
    for t in t_from..=t_to {
        let active = net.active_nodes(t);
        if active.is_empty() {
            if series.is_empty() {
                continue;
            }
            return Err(Error::NoActiveNodes(t));
        }
        let mut s = 0.0;
        let mut eta_sum = 0.0;
        for &id in &active {
            let eta = fitness_of(result, id)?;
            s += result.attachment(net.degree_at(id, t)?) * eta;
            eta_sum += eta;
        }
        let n = active.len();
        series.times.push(t);
        series.n.push(n);
        series.s.push(s);
        series.s_bar.push(average_competitiveness(s, n)?);
        series.c.push(eta_sum / n as f64);
    }
    if series.is_empty() {
        return Err(Error::NoActiveNodes(t_to));
    }
    Ok(if anchored { series.anchor() } else { series })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankedNode {
    pub rank: usize,
    pub label: String,
    pub fitness: f64,
}

/// Exposed nodes by descending fitness, ties by ascending label.
pub fn rank_by_fitness(result: &EstimationResult, top_n: usize) -> Result<Vec<RankedNode>> {
    if top_n == 0 {
        return Err(Error::Config("top_n must be at least 1".into()));
    }
    let mut nodes: Vec<_> = result.eta.iter().filter(|e| e.exposed).collect();
    nodes.sort_by(|a, b| {
        b.value
            .total_cmp(&a.value)
            .then_with(|| a.label.cmp(&b.label))
    });
    Ok(nodes
        .into_iter()
        .take(top_n)
        .enumerate()
        .map(|(i, e)| RankedNode {
            rank: i + 1,
            label: e.label.clone(),
            fitness: e.value,
        })
        .collect())
}

/// `rank,author,fitness` with fitness to 3 decimals.
pub fn ranking_csv(ranking: &[RankedNode]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["rank", "author", "fitness"])
        .map_err(|e| Error::Domain(e.to_string()))?;
    for r in ranking {
        w.write_record([
            r.rank.to_string(),
            r.label.clone(),
            format!("{:.3}", r.fitness),
        ])
        .map_err(|e| Error::Domain(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Domain(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
