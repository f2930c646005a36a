//! Graph ingestion: edge lists and MatrixMarket-headered files, closed
//! neighborhoods, and node cost assignment.
//!
//! Accepted text layout:
//!
//! ```text
//! %%MatrixMarket matrix coordinate pattern symmetric   <- comment ('%' or '#')
//! 1882 1882 1740                                       <- optional header: rows cols nnz, rows == cols
//! 1 2                                                  <- records: u v [weight]
//! 2 3 1.0
//! ```
//!
//! Without a header, node ids are compacted in ascending order to `0..n`.
//! With a header, ids must lie in `1..=rows` and node `k` maps to `k - 1`,
//! so nodes that never occur in an edge still count.

use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

use flate2::read::GzDecoder;
use rand::distr::{Distribution, Uniform};
use serde::{Deserialize, Serialize};

use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::operators::random_source;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Undirected edges `(u, v)` with `u < v`, sorted and deduplicated.
    edges: Vec<(usize, usize)>,
    /// External id of each internal node, ascending.
    labels: Vec<u64>,
}

impl Graph {
    /// Builds a graph on nodes `0..n` (labels `0..n`) from arbitrary edges.
    /// Self-loops and duplicates are dropped.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut canon = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            if u != v {
                canon.push((u.min(v), u.max(v)));
            }
        }
        canon.sort_unstable();
        canon.dedup();
        Ok(Self {
            n,
            edges: canon,
            labels: (0..n as u64).collect(),
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Internal id of an external label.
    pub fn internal_id(&self, label: u64) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    /// Serializes with external labels. Nodes without edges are written as
    /// self-loops so that parsing the output yields the same graph.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let header = self
            .labels
            .iter()
            .enumerate()
            .all(|(i, &l)| l == i as u64 + 1);
        if header {
            out.push_str(&format!("{} {} {}\n", self.n, self.n, self.edges.len()));
        }
        let mut touched = vec![false; self.n];
        for &(u, v) in &self.edges {
            touched[u] = true;
            touched[v] = true;
            out.push_str(&format!("{} {}\n", self.labels[u], self.labels[v]));
        }
        if !header {
            for (i, _) in touched.iter().enumerate().filter(|(_, &t)| !t) {
                out.push_str(&format!("{0} {0}\n", self.labels[i]));
            }
        }
        out
    }
}

/// Parses an edge list, optionally preceded by a MatrixMarket size line.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut header: Option<usize> = None;
    let mut seen_record = false;
    let mut raw: Vec<(u64, u64)> = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.len() < 2 || tokens.len() > 3 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected `u v [weight]`, found {} fields", tokens.len()),
            });
        }
        let id = |t: &str| {
            t.parse::<u64>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid node id `{t}`"),
            })
        };
        let (u, v) = (id(tokens[0])?, id(tokens[1])?);
        if tokens.len() == 3 {
            if !seen_record && u == v {
                if let Ok(_nnz) = tokens[2].parse::<u64>() {
                    header = Some(u as usize);
                    seen_record = true;
                    continue;
                }
            }
            if tokens[2].parse::<f64>().is_err() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("invalid weight `{}`", tokens[2]),
                });
            }
        }
        seen_record = true;
        raw.push((u, v));
    }

    match header {
        Some(rows) => {
            if rows == 0 {
                return Err(Error::EmptyGraph);
            }
            let mut edges = Vec::with_capacity(raw.len());
            for &(u, v) in &raw {
                for id in [u, v] {
                    if id == 0 || id as usize > rows {
                        return Err(Error::Parse {
                            line: 0,
                            message: format!("node id {id} outside 1..={rows} declared by header"),
                        });
                    }
                }
                edges.push((u as usize - 1, v as usize - 1));
            }
            let mut g = Graph::from_edges(rows, edges)?;
            g.labels = (1..=rows as u64).collect();
            Ok(g)
        }
        None => {
            if raw.is_empty() {
                return Err(Error::EmptyGraph);
            }
            let mut labels: Vec<u64> = raw.iter().flat_map(|&(u, v)| [u, v]).collect();
            labels.sort_unstable();
            labels.dedup();
            let map = |x: u64| labels.binary_search(&x).expect("label collected above");
            let edges: Vec<(usize, usize)> = raw.iter().map(|&(u, v)| (map(u), map(v))).collect();
            let mut g = Graph::from_edges(labels.len(), edges)?;
            g.labels = labels;
            Ok(g)
        }
    }
}

/// Reads a graph file; `.gz` files are decompressed.
pub fn load_graph(path: &Path) -> Result<Graph> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::open(path).map_err(io_err)?;
    let mut text = String::new();
    if path.extension().is_some_and(|e| e == "gz") {
        GzDecoder::new(BufReader::new(file))
            .read_to_string(&mut text)
            .map_err(io_err)?;
    } else {
        BufReader::new(file)
            .read_to_string(&mut text)
            .map_err(io_err)?;
    }
    parse_edge_list(&text)
}

/// Closed neighborhoods `N(v) = {v} ∪ adj(v)` in compressed sparse rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighborhoods {
    offsets: Vec<usize>,
    nodes: Vec<usize>,
}

impl Neighborhoods {
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Sorted members of `N(v)`.
    #[inline]
    pub fn of(&self, v: usize) -> &[usize] {
        &self.nodes[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn bitset(&self, v: usize) -> BitVector {
        BitVector::from_indices(self.node_count(), self.of(v).iter().copied())
    }

    pub fn total_size(&self) -> usize {
        self.nodes.len()
    }

    /// Builds neighborhoods directly from per-node lists; each list gets
    /// its own node added and is sorted and deduplicated.
    pub fn from_lists(lists: Vec<Vec<usize>>) -> Result<Self> {
        let n = lists.len();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut nodes = Vec::new();
        offsets.push(0);
        for (v, mut list) in lists.into_iter().enumerate() {
            list.push(v);
            list.sort_unstable();
            list.dedup();
            if let Some(&bad) = list.iter().find(|&&u| u >= n) {
                return Err(Error::InvalidArgument(format!(
                    "neighbor {bad} out of range for {n} nodes"
                )));
            }
            nodes.extend(list);
            offsets.push(nodes.len());
        }
        Ok(Self { offsets, nodes })
    }
}

pub fn closed_neighborhoods(graph: &Graph) -> Neighborhoods {
    let n = graph.node_count();
    let mut degree = vec![1usize; n];
    for &(u, v) in graph.edges() {
        degree[u] += 1;
        degree[v] += 1;
    }
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0);
    for d in &degree {
        offsets.push(offsets.last().unwrap() + d);
    }
    let mut fill = offsets[..n].to_vec();
    let mut nodes = vec![0usize; offsets[n]];
    for v in 0..n {
        nodes[fill[v]] = v;
        fill[v] += 1;
    }
    for &(u, v) in graph.edges() {
        nodes[fill[u]] = v;
        fill[u] += 1;
        nodes[fill[v]] = u;
        fill[v] += 1;
    }
    for v in 0..n {
        nodes[offsets[v]..offsets[v + 1]].sort_unstable();
    }
    Neighborhoods { offsets, nodes }
}

/// How node costs are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CostModel {
    /// Every node costs 1.
    Uniform,
    /// Independent uniform draws from `[lo, hi]`, seeded per instance.
    RandomInterval { lo: f64, hi: f64, seed: u64 },
}

impl CostModel {
    /// The `[0.5, 1.5]` random setting.
    pub fn random_default(seed: u64) -> Self {
        CostModel::RandomInterval {
            lo: 0.5,
            hi: 1.5,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let CostModel::RandomInterval { lo, hi, .. } = *self {
            if lo.is_nan() || hi.is_nan() || lo >= hi {
                return Err(Error::InvalidArgument(format!(
                    "cost interval needs lo < hi, got [{lo}, {hi}]"
                )));
            }
            if lo <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "cost interval needs lo > 0, got {lo}"
                )));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            CostModel::Uniform => "uniform",
            CostModel::RandomInterval { .. } => "random",
        }
    }
}

pub fn assign_costs(graph: &Graph, model: &CostModel) -> Result<Vec<f64>> {
    assign_costs_n(graph.node_count(), model)
}

pub(crate) fn assign_costs_n(n: usize, model: &CostModel) -> Result<Vec<f64>> {
    model.validate()?;
    match *model {
        CostModel::Uniform => Ok(vec![1.0; n]),
        CostModel::RandomInterval { lo, hi, seed } => {
            let dist = Uniform::new_inclusive(lo, hi)
                .map_err(|e| Error::InvalidArgument(format!("cost interval: {e}")))?;
            let mut rng = random_source(seed);
            Ok((0..n).map(|_| dist.sample(&mut rng)).collect())
        }
    }
}
