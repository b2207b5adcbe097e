//! Anonymous, connected, undirected graphs with local port numbering.
//!
//! Every node of degree `d` numbers its incident edges `0..d`. Node indices
//! exist only for bookkeeping inside the simulator; agents observe nothing
//! but the degree of the node they stand on and the port they entered by.
//!
//! The text format is line oriented:
//!
//! ```text
//! # comment
//! n 3
//! 0: (1 1) (2 0)
//! 1: (2 1) (0 0)
//! 2: (0 1) (1 0)
//! ```
//!
//! Each node line lists `(neighbor entry-port)` pairs; the position in the
//! list is the local port number.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

/// Bookkeeping identity of a node. Never exposed to agent logic.
pub type NodeId = usize;
/// Local port number at a node.
pub type Port = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph size {n} is invalid: {reason}")]
    InvalidSize { n: usize, reason: &'static str },
    #[error("node {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: NodeId, n: usize },
    #[error("port {port} out of range at node {node} (degree {degree})")]
    PortOutOfRange {
        node: NodeId,
        port: Port,
        degree: usize,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("port {port} at node {node} is claimed by more than one edge")]
    DuplicatePort { node: NodeId, port: Port },
    #[error("port {port} at node {node} leads to ({to} {entry}) but that port does not lead back")]
    Inconsistent {
        node: NodeId,
        port: Port,
        to: NodeId,
        entry: Port,
    },
    #[error("self-loop at node {node}")]
    SelfLoop { node: NodeId },
    #[error("nodes {a} and {b} are joined by more than one edge")]
    MultiEdge { a: NodeId, b: NodeId },
    #[error("graph is disconnected: node {unreachable} is unreachable from node 0")]
    Disconnected { unreachable: NodeId },
}

/// A validated port-labeled graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    /// `adjacency[v][p] = (u, q)`: port `p` of `v` leads to `u`, entering by port `q`.
    adjacency: Vec<Vec<(NodeId, Port)>>,
}

impl Graph {
    /// Builds a graph from raw adjacency lists and checks every invariant.
    pub fn from_adjacency(adjacency: Vec<Vec<(NodeId, Port)>>) -> Result<Self, GraphError> {
        let graph = Graph { adjacency };
        graph.validate()?;
        Ok(graph)
    }

    /// Ring where port 0 is clockwise (`i -> i+1`) and port 1 counterclockwise.
    pub fn oriented_ring(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::InvalidSize {
                n,
                reason: "an oriented ring needs at least 3 nodes",
            });
        }
        let adjacency = (0..n)
            .map(|i| vec![((i + 1) % n, 1), ((i + n - 1) % n, 0)])
            .collect();
        Graph::from_adjacency(adjacency)
    }

    /// Star with node 0 as the center; center port `k` leads to leaf `k + 1`.
    pub fn star(n: usize) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::InvalidSize {
                n,
                reason: "a star needs at least 2 nodes",
            });
        }
        let mut adjacency = vec![Vec::new(); n];
        for leaf in 1..n {
            adjacency[0].push((leaf, 0));
            adjacency[leaf].push((0, leaf - 1));
        }
        Graph::from_adjacency(adjacency)
    }

    /// Path `0 - 1 - ... - (n-1)`. Interior nodes use port 0 towards the
    /// higher index and port 1 towards the lower one.
    pub fn path(n: usize) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::InvalidSize {
                n,
                reason: "a path needs at least 2 nodes",
            });
        }
        let mut adjacency: Vec<Vec<(NodeId, Port)>> = vec![Vec::new(); n];
        for v in 0..n - 1 {
            let up = adjacency[v].len();
            let down = adjacency[v + 1].len();
            adjacency[v].push((v + 1, down));
            adjacency[v + 1].push((v, up));
        }
        // Swap so the edge towards the higher index is port 0 at interior nodes.
        for v in 1..n - 1 {
            adjacency[v].swap(0, 1);
        }
        let graph = Graph::relink(adjacency);
        Graph::from_adjacency(graph)
    }

    /// Random connected simple graph: a random spanning tree plus up to
    /// `extra_edges` chords, with port numbers shuffled at every node.
    pub fn random_connected<R: Rng + ?Sized>(
        n: usize,
        extra_edges: usize,
        rng: &mut R,
    ) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::InvalidSize {
                n,
                reason: "a random graph needs at least 2 nodes",
            });
        }
        let mut neighbors: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        let mut order: Vec<NodeId> = (0..n).collect();
        order.shuffle(rng);
        for i in 1..n {
            let parent = order[rng.gen_range(0..i)];
            neighbors[parent].push(order[i]);
            neighbors[order[i]].push(parent);
        }
        let max_edges = n * (n - 1) / 2;
        let mut edges = n - 1;
        let mut added = 0;
        let mut attempts = 0;
        while added < extra_edges && edges < max_edges && attempts < 64 * (extra_edges + 1) {
            attempts += 1;
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a == b || neighbors[a].contains(&b) {
                continue;
            }
            neighbors[a].push(b);
            neighbors[b].push(a);
            edges += 1;
            added += 1;
        }
        for list in &mut neighbors {
            list.shuffle(rng);
        }
        let adjacency = neighbors
            .iter()
            .enumerate()
            .map(|(v, list)| {
                list.iter()
                    .map(|&u| {
                        let entry = neighbors[u].iter().position(|&w| w == v).unwrap();
                        (u, entry)
                    })
                    .collect()
            })
            .collect();
        Graph::from_adjacency(adjacency)
    }

    /// Recomputes entry ports after ports have been permuted locally.
    fn relink(adjacency: Vec<Vec<(NodeId, Port)>>) -> Vec<Vec<(NodeId, Port)>> {
        adjacency
            .iter()
            .enumerate()
            .map(|(v, list)| {
                list.iter()
                    .map(|&(u, _)| {
                        let entry = adjacency[u].iter().position(|&(w, _)| w == v).unwrap();
                        (u, entry)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.node_count()
    }

    /// Follows port `p` out of `v`, returning the neighbor and the entry port there.
    pub fn traverse(&self, v: NodeId, p: Port) -> Result<(NodeId, Port), GraphError> {
        let list = self.adjacency.get(v).ok_or(GraphError::NodeOutOfRange {
            node: v,
            n: self.node_count(),
        })?;
        list.get(p).copied().ok_or(GraphError::PortOutOfRange {
            node: v,
            port: p,
            degree: list.len(),
        })
    }

    /// True when every node has degree 2 and port 0 then port 1 returns home.
    pub fn is_oriented_ring(&self) -> bool {
        self.node_count() >= 3
            && self.nodes().all(|v| {
                self.degree(v) == 2 && {
                    let (u, q) = self.adjacency[v][0];
                    q == 1 && self.adjacency[u][1] == (v, 0)
                }
            })
    }

    fn validate(&self) -> Result<(), GraphError> {
        let n = self.node_count();
        if n == 0 {
            return Err(GraphError::InvalidSize {
                n,
                reason: "a graph needs at least one node",
            });
        }
        let mut claimed: Vec<Vec<bool>> = self.adjacency.iter().map(|l| vec![false; l.len()]).collect();
        for (v, list) in self.adjacency.iter().enumerate() {
            for &(u, q) in list {
                if u >= n {
                    return Err(GraphError::NodeOutOfRange { node: u, n });
                }
                if u == v {
                    return Err(GraphError::SelfLoop { node: v });
                }
                let degree = self.adjacency[u].len();
                if q >= degree {
                    return Err(GraphError::PortOutOfRange {
                        node: u,
                        port: q,
                        degree,
                    });
                }
                if std::mem::replace(&mut claimed[u][q], true) {
                    return Err(GraphError::DuplicatePort { node: u, port: q });
                }
            }
            for (i, &(u, _)) in list.iter().enumerate() {
                if list[..i].iter().any(|&(w, _)| w == u) {
                    return Err(GraphError::MultiEdge { a: v, b: u });
                }
            }
        }
        for (v, list) in self.adjacency.iter().enumerate() {
            for (p, &(u, q)) in list.iter().enumerate() {
                if self.adjacency[u][q] != (v, p) {
                    return Err(GraphError::Inconsistent {
                        node: v,
                        port: p,
                        to: u,
                        entry: q,
                    });
                }
            }
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &(u, _) in &self.adjacency[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        if let Some(unreachable) = seen.iter().position(|s| !s) {
            return Err(GraphError::Disconnected { unreachable });
        }
        Ok(())
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.node_count())?;
        for (v, list) in self.adjacency.iter().enumerate() {
            write!(f, "{v}:")?;
            for (u, q) in list {
                write!(f, " ({u} {q})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for Graph {
    type Err = GraphError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        parse_graph(text)
    }
}

/// Parses the plain-text graph format and validates the result.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let perr = |line: usize, message: String| GraphError::Parse { line, message };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| perr(1, "missing `n <count>` header".into()))?;
    let n: usize = header
        .strip_prefix('n')
        .map(str::trim)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| perr(header_line, format!("expected `n <count>`, found `{header}`")))?;
    if n == 0 {
        return Err(GraphError::InvalidSize {
            n,
            reason: "a graph needs at least one node",
        });
    }

    let mut adjacency: Vec<Option<Vec<(NodeId, Port)>>> = vec![None; n];
    for (line_no, line) in lines {
        let (index, rest) = line
            .split_once(':')
            .ok_or_else(|| perr(line_no, "expected `<node>: (<neighbor> <port>) ...`".into()))?;
        let v: NodeId = index
            .trim()
            .parse()
            .map_err(|_| perr(line_no, format!("bad node index `{}`", index.trim())))?;
        if v >= n {
            return Err(perr(line_no, format!("node {v} out of range for n = {n}")));
        }
        if adjacency[v].is_some() {
            return Err(perr(line_no, format!("node {v} listed twice")));
        }
        adjacency[v] = Some(parse_ports(rest).map_err(|m| perr(line_no, m))?);
    }
    let adjacency = adjacency
        .into_iter()
        .enumerate()
        .map(|(v, l)| l.ok_or_else(|| perr(header_line, format!("no line for node {v}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Graph::from_adjacency(adjacency)
}

fn parse_ports(rest: &str) -> Result<Vec<(NodeId, Port)>, String> {
    let mut out = Vec::new();
    let mut rest = rest.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| format!("expected `(` at `{rest}`"))?;
        let (pair, tail) = body
            .split_once(')')
            .ok_or_else(|| "unterminated `(`".to_string())?;
        let mut fields = pair.split_whitespace();
        let parse = |s: Option<&str>| -> Result<usize, String> {
            s.ok_or_else(|| format!("incomplete pair `({pair})`"))?
                .parse()
                .map_err(|_| format!("bad number in `({pair})`"))
        };
        let u = parse(fields.next())?;
        let q = parse(fields.next())?;
        if fields.next().is_some() {
            return Err(format!("too many fields in `({pair})`"));
        }
        out.push((u, q));
        rest = tail.trim_start();
    }
    Ok(out)
}

/// An oriented ring: every node has degree 2, port 0 clockwise, port 1
/// counterclockwise, nodes numbered ascending clockwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedRing(Graph);

impl OrientedRing {
    pub fn new(n: usize) -> Result<Self, GraphError> {
        Graph::oriented_ring(n).map(OrientedRing)
    }

    pub fn size(&self) -> usize {
        self.0.node_count()
    }

    pub fn graph(&self) -> &Graph {
        &self.0
    }

    pub fn into_graph(self) -> Graph {
        self.0
    }
}

impl std::ops::Deref for OrientedRing {
    type Target = Graph;

    fn deref(&self) -> &Graph {
        &self.0
    }
}

pub fn make_oriented_ring(n: usize) -> Result<OrientedRing, GraphError> {
    OrientedRing::new(n)
}

/// Fixed 8-node port-labeled graph used by the exhaustive test corpus.
pub const CORPUS_GRAPH_8: &str = "\
# 8 nodes, 11 edges, irregular port labeling
n 8
0: (3 1) (5 0) (1 2)
1: (4 0) (2 1) (0 2) (6 0)
2: (7 0) (1 1)
3: (6 1) (0 0) (5 2)
4: (1 0) (7 1)
5: (0 1) (6 2) (3 2)
6: (1 3) (3 0) (5 1)
7: (2 0) (4 1)
";

pub fn corpus_graph() -> Graph {
    parse_graph(CORPUS_GRAPH_8).expect("corpus graph is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_orientation() {
        let ring = make_oriented_ring(3).unwrap();
        assert_eq!(ring.size(), 3);
        assert!(ring.nodes().all(|v| ring.degree(v) == 2));
        assert_eq!(ring.traverse(0, 0).unwrap().0, 1);

        let ring = make_oriented_ring(6).unwrap();
        let mut v = 2;
        for _ in 0..6 {
            v = ring.traverse(v, 0).unwrap().0;
        }
        assert_eq!(v, 2);
        assert!(make_oriented_ring(4).unwrap().is_oriented_ring());
    }

    #[test]
    fn ring_too_small() {
        assert!(matches!(
            make_oriented_ring(2),
            Err(GraphError::InvalidSize { n: 2, .. })
        ));
    }

    #[test]
    fn traverse_examples() {
        let ring = Graph::oriented_ring(4).unwrap();
        assert_eq!(ring.traverse(0, 0).unwrap(), (1, 1));
        assert_eq!(ring.traverse(0, 1).unwrap(), (3, 0));
        assert_eq!(
            ring.traverse(0, 2),
            Err(GraphError::PortOutOfRange {
                node: 0,
                port: 2,
                degree: 2
            })
        );
        let star = Graph::star(4).unwrap();
        assert_eq!(star.traverse(0, 2).unwrap(), (3, 0));
    }

    #[test]
    fn path_ports() {
        let p = Graph::path(4).unwrap();
        assert_eq!(p.traverse(0, 0).unwrap().0, 1);
        assert_eq!(p.traverse(1, 0).unwrap().0, 2);
        assert_eq!(p.traverse(1, 1).unwrap().0, 0);
        assert_eq!(p.traverse(3, 0).unwrap().0, 2);
        assert_eq!(Graph::path(2).unwrap().edge_count(), 1);
    }

    #[test]
    fn parse_three_cycle() {
        let text = Graph::oriented_ring(3).unwrap().to_string();
        let g = parse_graph(&text).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.to_string(), text);
    }

    #[test]
    fn parse_rejects_duplicate_port() {
        let text = "n 3\n0: (1 0) (2 0)\n1: (0 0)\n2: (0 0)\n";
        assert_eq!(
            parse_graph(text),
            Err(GraphError::DuplicatePort { node: 0, port: 0 })
        );
    }

    #[test]
    fn parse_rejects_disconnected() {
        let text = "n 4\n0: (1 0)\n1: (0 0)\n2: (3 0)\n3: (2 0)\n";
        assert_eq!(
            parse_graph(text),
            Err(GraphError::Disconnected { unreachable: 2 })
        );
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "# header comment\nn 2\n0: (1 0)\n1: (0 x)\n";
        match parse_graph(text) {
            Err(GraphError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_graph("m 3\n"),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph("n 2\n0: (1 0)\n"),
            Err(GraphError::Parse { .. })
        ));
    }

    #[test]
    fn rejects_self_loops_and_multi_edges() {
        assert_eq!(
            parse_graph("n 2\n0: (0 1) (0 0) (1 0)\n1: (0 2)\n"),
            Err(GraphError::SelfLoop { node: 0 })
        );
        assert_eq!(
            parse_graph("n 2\n0: (1 0) (1 1)\n1: (0 0) (0 1)\n"),
            Err(GraphError::MultiEdge { a: 0, b: 1 })
        );
    }

    #[test]
    fn rejects_one_way_edges() {
        let text = "n 3\n0: (1 0) (2 0)\n1: (0 0)\n2: (1 0)\n";
        assert!(parse_graph(text).is_err());
    }

    #[test]
    fn corpus_graph_is_valid() {
        let g = corpus_graph();
        assert_eq!(g.node_count(), 8);
        assert_eq!(g.edge_count(), 11);
        assert!(!g.is_oriented_ring());
    }

    #[test]
    fn ports_contiguous_and_involutive() {
        let mut rng = rand::thread_rng();
        let mut graphs = vec![
            corpus_graph(),
            Graph::star(6).unwrap(),
            Graph::path(7).unwrap(),
            Graph::oriented_ring(9).unwrap(),
        ];
        for n in 2..12 {
            graphs.push(Graph::random_connected(n, n, &mut rng).unwrap());
        }
        for g in &graphs {
            for v in g.nodes() {
                for p in 0..g.degree(v) {
                    let (u, q) = g.traverse(v, p).unwrap();
                    assert_eq!(g.traverse(u, q).unwrap(), (v, p));
                }
                assert!(g.traverse(v, g.degree(v)).is_err());
            }
            assert_eq!(&parse_graph(&g.to_string()).unwrap(), g);
        }
    }
}
