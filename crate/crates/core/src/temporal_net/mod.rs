//! Growing multigraph with timestamped edge events and node birth times.
//!
//! Degrees are never stored as a snapshot. Each node keeps the sorted list
//! of times at which its model degree was incremented, so the degree at the
//! start of any step is a binary search away. For directed networks the
//! model degree is the in-degree; out-degree is not tracked.

mod format;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use format::{read_network, write_network};

/// Discrete time index at the network's resolution.
pub type Time = u32;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Resolution {
    Monthly,
    Yearly,
    Step,
}

impl Resolution {
    pub fn as_str(self) -> &'static str {
        match self {
            Resolution::Monthly => "monthly",
            Resolution::Yearly => "yearly",
            Resolution::Step => "step",
        }
    }
}

impl std::str::FromStr for Resolution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monthly" => Ok(Resolution::Monthly),
            "yearly" => Ok(Resolution::Yearly),
            "step" | "generic-step" => Ok(Resolution::Step),
            other => Err(Error::Config(format!("unknown resolution `{other}`"))),
        }
    }
}

/// Whether a node takes part in the attachment model.
///
/// `Source` nodes only emit directed events (one per citing record in a
/// citation network). They are never active, never counted in N(t), and
/// never selected.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Member,
    Source,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NodeRecord {
    pub id: NodeId,
    pub label: String,
    pub birth_time: Time,
    pub kind: NodeKind,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct EdgeEvent {
    pub time: Time,
    pub source: NodeId,
    pub target: NodeId,
    pub directed: bool,
}

/// Counts of active nodes per (time, degree) cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeTable {
    pub times: Vec<Time>,
    /// `counts[row][k]`; every row has the same width.
    pub counts: Vec<Vec<usize>>,
}

impl DegreeTable {
    pub fn get(&self, t: Time, k: usize) -> usize {
        self.times
            .iter()
            .position(|&x| x == t)
            .and_then(|row| self.counts[row].get(k).copied())
            .unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct TemporalNetwork {
    nodes: Vec<NodeRecord>,
    events: Vec<EdgeEvent>,
    resolution: Resolution,
    directed: bool,
    origin_year: Option<i32>,
    label_index: HashMap<String, NodeId>,
    /// Times of model-degree increments, per node, non-decreasing.
    increments: Vec<Vec<Time>>,
    /// Degree carried in from before a period slice.
    offsets: Vec<u32>,
}

impl TemporalNetwork {
    pub fn new(resolution: Resolution, directed: bool) -> Self {
        TemporalNetwork {
            nodes: Vec::new(),
            events: Vec::new(),
            resolution,
            directed,
            origin_year: None,
            label_index: HashMap::new(),
            increments: Vec::new(),
            offsets: Vec::new(),
        }
    }

    /// Calendar year that time index 0 corresponds to, when known.
    pub fn with_origin_year(mut self, year: i32) -> Self {
        self.origin_year = Some(year);
        self
    }

    pub fn origin_year(&self) -> Option<i32> {
        self.origin_year
    }

    pub fn set_origin_year(&mut self, year: Option<i32>) {
        self.origin_year = year;
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn nodes(&self) -> &[NodeRecord] {
        &self.nodes
    }

    pub fn events(&self) -> &[EdgeEvent] {
        &self.events
    }

    pub fn node(&self, id: NodeId) -> Result<&NodeRecord> {
        self.nodes.get(id.index()).ok_or(Error::UnknownNode(id))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of nodes that take part in the model (excludes citing sources).
    pub fn member_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Member)
            .count()
    }

    pub fn find(&self, label: &str) -> Option<NodeId> {
        self.label_index.get(label).copied()
    }

    /// Registers a member node. Idempotent on `label`: an existing node keeps
    /// its id and the earlier of the two birth times.
    pub fn add_node(&mut self, label: &str, birth_time: Time) -> NodeId {
        if let Some(&id) = self.label_index.get(label) {
            let rec = &mut self.nodes[id.index()];
            rec.birth_time = rec.birth_time.min(birth_time);
            return id;
        }
        let id = self.push_node(label, birth_time, NodeKind::Member);
        self.label_index.insert(label.to_owned(), id);
        id
    }

    /// Registers a non-selectable source node. Never deduplicated.
    pub fn add_source_node(&mut self, label: &str, birth_time: Time) -> NodeId {
        self.push_node(label, birth_time, NodeKind::Source)
    }

    fn push_node(&mut self, label: &str, birth_time: Time, kind: NodeKind) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(NodeRecord {
            id,
            label: label.to_owned(),
            birth_time,
            kind,
        });
        self.increments.push(Vec::new());
        self.offsets.push(0);
        id
    }

    pub fn add_event(&mut self, event: EdgeEvent) -> Result<()> {
        if event.directed != self.directed {
            return Err(Error::Config(format!(
                "event directed={} in a network with directed={}",
                event.directed, self.directed
            )));
        }
        if let Some(last) = self.events.last() {
            if event.time < last.time {
                return Err(Error::TimeRegression {
                    time: event.time,
                    last: last.time,
                });
            }
        }
        if event.source == event.target {
            return Err(Error::SelfLoop(event.source));
        }
        for id in [event.source, event.target] {
            let rec = self.node(id)?;
            if rec.birth_time > event.time {
                return Err(Error::BornAfterEvent {
                    node: id,
                    birth: rec.birth_time,
                    time: event.time,
                });
            }
        }
        if self.node(event.target)?.kind == NodeKind::Source {
            return Err(Error::Config(format!(
                "source node {} cannot be an event target",
                event.target
            )));
        }
        if !self.directed {
            if self.node(event.source)?.kind == NodeKind::Source {
                return Err(Error::Config(
                    "source nodes are only valid in directed networks".into(),
                ));
            }
            self.increments[event.source.index()].push(event.time);
        }
        self.increments[event.target.index()].push(event.time);
        self.events.push(event);
        Ok(())
    }

    /// Shorthand for appending an event with the network's own direction flag.
    pub fn connect(&mut self, time: Time, source: NodeId, target: NodeId) -> Result<()> {
        let directed = self.directed;
        self.add_event(EdgeEvent {
            time,
            source,
            target,
            directed,
        })
    }

    /// Model degree at the start of step `t`: only events strictly before `t`
    /// count, plus any degree carried in by a period slice.
    pub fn degree_at(&self, node: NodeId, t: Time) -> Result<u32> {
        let incs = self
            .increments
            .get(node.index())
            .ok_or(Error::UnknownNode(node))?;
        Ok(self.offsets[node.index()] + incs.partition_point(|&x| x < t) as u32)
    }

    /// Model degree after all events.
    pub fn final_degree(&self, node: NodeId) -> Result<u32> {
        let incs = self
            .increments
            .get(node.index())
            .ok_or(Error::UnknownNode(node))?;
        Ok(self.offsets[node.index()] + incs.len() as u32)
    }

    pub(crate) fn increment_times(&self, node: NodeId) -> &[Time] {
        &self.increments[node.index()]
    }

    pub(crate) fn degree_offset(&self, node: NodeId) -> u32 {
        self.offsets[node.index()]
    }

    pub fn is_active(&self, node: NodeId, t: Time) -> bool {
        self.nodes
            .get(node.index())
            .is_some_and(|n| n.kind == NodeKind::Member && n.birth_time <= t)
    }

    /// Member nodes with `birth_time <= t`.
    pub fn active_nodes(&self, t: Time) -> Vec<NodeId> {
        self.nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Member && n.birth_time <= t)
            .map(|n| n.id)
            .collect()
    }

    pub fn active_count(&self, t: Time) -> usize {
        self.nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Member && n.birth_time <= t)
            .count()
    }

    /// First and last event time.
    pub fn event_span(&self) -> Option<(Time, Time)> {
        Some((self.events.first()?.time, self.events.last()?.time))
    }

    /// Earliest and latest time that matters to the network: births and events.
    pub fn time_span(&self) -> Option<(Time, Time)> {
        let births = self
            .nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Member)
            .map(|n| n.birth_time);
        let times = births.chain(self.events.iter().map(|e| e.time));
        let (mut lo, mut hi) = (Time::MAX, Time::MIN);
        let mut any = false;
        for t in times {
            any = true;
            lo = lo.min(t);
            hi = hi.max(t);
        }
        any.then_some((lo, hi))
    }

    /// Restricts the event stream to `[t_start, t_end]`. All nodes keep their
    /// ids. With `carry_degrees`, each node starts the slice with the degree it
    /// had accumulated before `t_start`.
    pub fn slice_period(
        &self,
        t_start: Time,
        t_end: Time,
        carry_degrees: bool,
    ) -> Result<TemporalNetwork> {
        if t_start > t_end {
            return Err(Error::InvalidRange {
                start: t_start,
                end: t_end,
            });
        }
        let mut out = TemporalNetwork {
            nodes: self.nodes.clone(),
            events: Vec::new(),
            resolution: self.resolution,
            directed: self.directed,
            origin_year: self.origin_year,
            label_index: self.label_index.clone(),
            increments: vec![Vec::new(); self.nodes.len()],
            offsets: vec![0; self.nodes.len()],
        };
        if carry_degrees {
            for n in &self.nodes {
                out.offsets[n.id.index()] = self.degree_at(n.id, t_start)?;
            }
        }
        for ev in self
            .events
            .iter()
            .filter(|e| e.time >= t_start && e.time <= t_end)
        {
            out.add_event(*ev)?;
        }
        Ok(out)
    }

    /// Cell `(t, k)` holds the number of active nodes with degree `k` at the
    /// start of step `t`, for every `t` in `[t_from, t_to]`.
    pub fn degree_table(&self, t_from: Time, t_to: Time) -> Result<DegreeTable> {
        if t_from > t_to {
            return Err(Error::InvalidRange {
                start: t_from,
                end: t_to,
            });
        }
        let times: Vec<Time> = (t_from..=t_to).collect();
        let mut counts: Vec<Vec<usize>> = Vec::with_capacity(times.len());
        let mut width = 0;
        for &t in &times {
            let mut row: Vec<usize> = Vec::new();
            for n in self
                .nodes
                .iter()
                .filter(|n| n.kind == NodeKind::Member && n.birth_time <= t)
            {
                let k = self.degree_at(n.id, t)? as usize;
                if row.len() <= k {
                    row.resize(k + 1, 0);
                }
                row[k] += 1;
            }
            width = width.max(row.len());
            counts.push(row);
        }
        for row in &mut counts {
            row.resize(width.max(1), 0);
        }
        Ok(DegreeTable { times, counts })
    }
}
