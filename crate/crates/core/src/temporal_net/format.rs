//! Line-delimited network file.
//!
//! ```text
//! #resolution=monthly directed=0 origin=1980
//! N	0	0	Ansoff, HI
//! S	1	4	r17
//! E	4	1	0
//! ```
//!
//! Fields are tab-separated. `N` lines declare member nodes, `S` lines
//! declare non-selectable citing sources, `E` lines are events. Node ids are
//! dense and appear in increasing order starting at 0. Any later line that
//! starts with `#` is a comment.

use std::fmt::Write as _;
use std::path::Path;

use super::{NodeId, NodeKind, Resolution, TemporalNetwork, Time};
use crate::error::{Error, Result};

pub fn write_network(net: &TemporalNetwork) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "#resolution={} directed={}",
        net.resolution().as_str(),
        u8::from(net.is_directed())
    );
    if let Some(year) = net.origin_year() {
        let _ = write!(out, " origin={year}");
    }
    out.push('\n');
    for n in net.nodes() {
        let tag = match n.kind {
            NodeKind::Member => 'N',
            NodeKind::Source => 'S',
        };
        let label = n.label.replace(['\t', '\n', '\r'], " ");
        let _ = writeln!(out, "{tag}\t{}\t{}\t{label}", n.id, n.birth_time);
    }
    for e in net.events() {
        let _ = writeln!(out, "E\t{}\t{}\t{}", e.time, e.source, e.target);
    }
    out
}

pub fn read_network(path: &Path) -> Result<TemporalNetwork> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_network(&text, &path.display().to_string())
}

pub(crate) fn parse_network(text: &str, origin: &str) -> Result<TemporalNetwork> {
    let err = |line: usize, msg: String| Error::Parse {
        path: origin.to_owned(),
        line: line as u64,
        msg,
    };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| err(1, "empty network file".into()))?;
    let header = header
        .strip_prefix("#")
        .ok_or_else(|| err(1, "missing `#resolution=... directed=...` header".into()))?;

    let mut resolution = None;
    let mut directed = None;
    let mut origin_year = None;
    for field in header.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| err(1, format!("bad header field `{field}`")))?;
        match key {
            "resolution" => {
                resolution = Some(
                    value
                        .parse::<Resolution>()
                        .map_err(|e| err(1, e.to_string()))?,
                )
            }
            "directed" => {
                directed = Some(match value {
                    "0" => false,
                    "1" => true,
                    _ => return Err(err(1, format!("directed must be 0 or 1, got `{value}`"))),
                })
            }
            "origin" => {
                origin_year = Some(
                    value
                        .parse::<i32>()
                        .map_err(|e| err(1, format!("origin: {e}")))?,
                )
            }
            _ => return Err(err(1, format!("unknown header key `{key}`"))),
        }
    }
    let resolution = resolution.ok_or_else(|| err(1, "header lacks resolution".into()))?;
    let directed = directed.ok_or_else(|| err(1, "header lacks directed".into()))?;
    let mut net = TemporalNetwork::new(resolution, directed);
    net.set_origin_year(origin_year);

    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        match fields[0] {
            "N" | "S" => {
                if fields.len() != 4 {
                    return Err(err(
                        lineno,
                        format!("node line needs 4 fields, got {}", fields.len()),
                    ));
                }
                let id: u32 = fields[1]
                    .parse()
                    .map_err(|_| err(lineno, format!("bad node id `{}`", fields[1])))?;
                if id as usize != net.node_count() {
                    return Err(err(
                        lineno,
                        format!("node id {id} out of order; expected {}", net.node_count()),
                    ));
                }
                let birth: Time = fields[2]
                    .parse()
                    .map_err(|_| err(lineno, format!("bad birth time `{}`", fields[2])))?;
                let assigned = if fields[0] == "N" {
                    if net.find(fields[3]).is_some() {
                        return Err(err(lineno, format!("duplicate node label `{}`", fields[3])));
                    }
                    net.add_node(fields[3], birth)
                } else {
                    net.add_source_node(fields[3], birth)
                };
                debug_assert_eq!(assigned, NodeId(id));
            }
            "E" => {
                if fields.len() != 4 {
                    return Err(err(
                        lineno,
                        format!("event line needs 4 fields, got {}", fields.len()),
                    ));
                }
                let parse = |s: &str, what: &str| {
                    s.parse::<u32>()
                        .map_err(|_| err(lineno, format!("bad {what} `{s}`")))
                };
                let time = parse(fields[1], "time")?;
                let source = NodeId(parse(fields[2], "source id")?);
                let target = NodeId(parse(fields[3], "target id")?);
                net.connect(time, source, target)
                    .map_err(|e| err(lineno, e.to_string()))?;
            }
            other => return Err(err(lineno, format!("unknown line tag `{other}`"))),
        }
    }
    Ok(net)
}
