//! Selection tallies and risk-set occupancy extracted from an event stream.
//!
//! A node is at risk at step `t` when it was born strictly before `t`; the
//! degree that decides its bin is the degree at the start of `t`. An event
//! endpoint counts as a selection when it was at risk: the target of a
//! directed event, either endpoint of an undirected one. Endpoints born at
//! `t` are arrivals, not selections.
//!
//! Only steps with at least one selection enter the likelihood, so time is
//! compressed to those steps. Occupancy is stored as segments: a node sits in
//! one bin over a half-open run of compressed steps.

use super::binning::{BinningScheme, DegreeBinning};
use crate::error::Result;
use crate::temporal_net::{NodeId, NodeKind, TemporalNetwork, Time};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub node: NodeId,
    pub bin: u32,
    /// First compressed step (inclusive).
    pub start: u32,
    /// End compressed step (exclusive).
    pub end: u32,
}

#[derive(Clone, Debug)]
pub struct SufficientStats {
    pub(crate) binning: DegreeBinning,
    /// Time of each compressed step, ascending.
    pub(crate) steps: Vec<Time>,
    /// m(t): selections per compressed step.
    pub(crate) step_selections: Vec<f64>,
    /// m_b: selections per bin.
    pub(crate) bin_selections: Vec<f64>,
    /// c_i: selections per node id.
    pub(crate) node_selections: Vec<f64>,
    /// Occupancy segments grouped by node, ascending in `start`.
    pub(crate) segments: Vec<Segment>,
    /// Per node id, the range of its segments in `segments`.
    pub(crate) node_segments: Vec<(u32, u32)>,
    pub(crate) bin_exposed: Vec<bool>,
}

impl SufficientStats {
    pub fn binning(&self) -> &DegreeBinning {
        &self.binning
    }

    pub fn steps(&self) -> &[Time] {
        &self.steps
    }

    pub fn step_selections(&self) -> &[f64] {
        &self.step_selections
    }

    pub fn bin_selections(&self) -> &[f64] {
        &self.bin_selections
    }

    pub fn node_selections(&self) -> &[f64] {
        &self.node_selections
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn node_count(&self) -> usize {
        self.node_selections.len()
    }

    pub fn bin_count(&self) -> usize {
        self.binning.len()
    }

    pub fn total_selections(&self) -> f64 {
        self.step_selections.iter().sum()
    }

    /// Node appears in the risk set of at least one selection step.
    pub fn is_exposed(&self, node: NodeId) -> bool {
        self.node_segments
            .get(node.index())
            .is_some_and(|&(a, b)| b > a)
    }

    /// Some node occupies the bin during a selection step.
    pub fn is_bin_exposed(&self, bin: usize) -> bool {
        self.bin_exposed[bin]
    }

    pub fn exposed_bins(&self) -> Vec<usize> {
        (0..self.bin_count())
            .filter(|&b| self.bin_exposed[b])
            .collect()
    }

    pub(crate) fn node_segments(&self, node: usize) -> &[Segment] {
        let (a, b) = self.node_segments[node];
        &self.segments[a as usize..b as usize]
    }

    /// Bin occupied by `node` at compressed step `step`, if it is at risk then.
    pub fn bin_at(&self, node: NodeId, step: usize) -> Option<usize> {
        self.node_segments(node.index())
            .iter()
            .find(|s| (s.start as usize) <= step && step < s.end as usize)
            .map(|s| s.bin as usize)
    }

    /// The same risk sets observed `times` over: every count is multiplied.
    pub fn replicated(&self, times: u32) -> SufficientStats {
        let f = times as f64;
        let mut out = self.clone();
        for v in out
            .step_selections
            .iter_mut()
            .chain(out.bin_selections.iter_mut())
            .chain(out.node_selections.iter_mut())
        {
            *v *= f;
        }
        out
    }
}

/// Tallies selections and risk-set occupancy with batch semantics: every
/// selection at step `t` sees the degree state at the start of `t`.
pub fn build_sufficient_stats(
    net: &TemporalNetwork,
    scheme: &BinningScheme,
) -> Result<SufficientStats> {
    scheme.validate()?;
    let n = net.node_count();
    let directed = net.is_directed();

    // (time, node) for every selection, in event order.
    let mut picks: Vec<(Time, NodeId)> = Vec::new();
    for ev in net.events() {
        let endpoints: &[NodeId] = if directed {
            &[ev.target][..]
        } else {
            &[ev.source, ev.target][..]
        };
        for &x in endpoints {
            let rec = net.node(x)?;
            if rec.kind == NodeKind::Member && rec.birth_time < ev.time {
                picks.push((ev.time, x));
            }
        }
    }

    let mut steps: Vec<Time> = picks.iter().map(|p| p.0).collect();
    steps.dedup();

    // Largest degree any node carries into a selection step.
    let mut k_max = 0u32;
    if let Some(&last) = steps.last() {
        for rec in net
            .nodes()
            .iter()
            .filter(|r| r.kind == NodeKind::Member && r.birth_time < last)
        {
            k_max = k_max.max(net.degree_at(rec.id, last)?);
        }
    }
    let binning = scheme.build(k_max);

    let mut step_selections = vec![0.0; steps.len()];
    let mut bin_selections = vec![0.0; binning.len()];
    let mut node_selections = vec![0.0; n];
    let mut step_idx = 0usize;
    for &(t, x) in &picks {
        while steps[step_idx] != t {
            step_idx += 1;
        }
        let bin = binning.bin_of(net.degree_at(x, t)?);
        step_selections[step_idx] += 1.0;
        bin_selections[bin] += 1.0;
        node_selections[x.index()] += 1.0;
    }

    let mut segments: Vec<Segment> = Vec::new();
    let mut node_segments = vec![(0u32, 0u32); n];
    let mut bin_exposed = vec![false; binning.len()];
    let s_len = steps.len();
    for rec in net.nodes() {
        let begin = segments.len() as u32;
        if rec.kind == NodeKind::Member {
            let first = steps.partition_point(|&t| t <= rec.birth_time);
            if first < s_len {
                let incs = net.increment_times(rec.id);
                let mut j = incs.partition_point(|&u| u < steps[first]);
                let mut k = net.degree_offset(rec.id) + j as u32;
                let mut s = first;
                while s < s_len {
                    let next = if j < incs.len() {
                        steps.partition_point(|&t| t <= incs[j])
                    } else {
                        s_len
                    };
                    let bin = binning.bin_of(k) as u32;
                    match segments.last_mut() {
                        Some(prev)
                            if prev.node == rec.id && prev.bin == bin && prev.end as usize == s =>
                        {
                            prev.end = next as u32;
                        }
                        _ => segments.push(Segment {
                            node: rec.id,
                            bin,
                            start: s as u32,
                            end: next as u32,
                        }),
                    }
                    bin_exposed[bin as usize] = true;
                    if next < s_len {
                        while j < incs.len() && incs[j] < steps[next] {
                            j += 1;
                            k += 1;
                        }
                    }
                    s = next;
                }
            }
        }
        node_segments[rec.id.index()] = (begin, segments.len() as u32);
    }

    Ok(SufficientStats {
        binning,
        steps,
        step_selections,
        bin_selections,
        node_selections,
        segments,
        node_segments,
        bin_exposed,
    })
}
