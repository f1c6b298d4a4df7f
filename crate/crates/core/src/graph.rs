//! Simple undirected graphs, Kneser graphs and their standard matrices.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{self, BufRead, Write};

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::binomial;
use crate::error::{Error, Result};
use crate::matrix::BigIntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexLabel {
    Index(usize),
    /// A subset of `{1, ..., n}`, ascending.
    Subset(Vec<usize>),
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::Index(i) => write!(f, "{i}"),
            VertexLabel::Subset(s) => {
                let parts: Vec<String> = s.iter().map(ToString::to_string).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
        }
    }
}

/// A simple undirected graph with a fixed vertex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<VertexLabel>,
    /// Edges as `(i, j)` with `i < j`.
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Graph on `0..vertex_count`. Loops are rejected; repeated edges collapse.
    pub fn from_edges(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let labels = (0..vertex_count).map(VertexLabel::Index).collect();
        Self::with_labels(labels, edges)
    }

    pub fn with_labels(
        labels: Vec<VertexLabel>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidArgument(format!("loop at vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({a}, {b}) out of range for {n} vertices"
                )));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Graph { labels, edges: set })
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn connected_components(&self) -> usize {
        let n = self.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = n;
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                components -= 1;
            }
        }
        components
    }

    /// Writes the edge list: a `p edge V E` header, then one `i j` line per
    /// edge with 0-based canonical indices.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "p edge {} {}", self.vertex_count(), self.edge_count())?;
        for (a, b) in self.edges() {
            writeln!(out, "{a} {b}")?;
        }
        Ok(())
    }

    pub fn to_edge_list_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_edge_list(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("edge list is ASCII")
    }

    /// Reads the format produced by [`Graph::write_edge_list`]. Lines starting
    /// with `c` are comments.
    pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let no = i + 1;
            let line = line.map_err(|e| Error::Parse {
                line: no,
                message: e.to_string(),
            })?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('c') {
                continue;
            }
            let parts: Vec<&str> = t.split_whitespace().collect();
            let bad = |message: &str| Error::Parse {
                line: no,
                message: message.to_string(),
            };
            if parts.first() == Some(&"p") {
                if header.is_some() || parts.len() != 4 || parts[1] != "edge" {
                    return Err(bad("expected a single 'p edge V E' header"));
                }
                let v = parts[2].parse().map_err(|_| bad("bad vertex count"))?;
                let e = parts[3].parse().map_err(|_| bad("bad edge count"))?;
                header = Some((v, e));
                continue;
            }
            if header.is_none() {
                return Err(bad("edge before header"));
            }
            let [a, b] = parts[..] else {
                return Err(bad("expected 'i j'"));
            };
            let a = a.parse().map_err(|_| bad("bad vertex index"))?;
            let b = b.parse().map_err(|_| bad("bad vertex index"))?;
            edges.push((a, b));
        }
        let (v, e) = header.ok_or(Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let g = Graph::from_edges(v, edges)?;
        if g.edge_count() != e {
            return Err(Error::Parse {
                line: 1,
                message: format!("header declares {e} edges, found {}", g.edge_count()),
            });
        }
        Ok(g)
    }
}

/// All `k`-subsets of `{1, ..., n}` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut current: Vec<usize> = (1..=k).collect();
    loop {
        out.push(current.clone());
        // rightmost position that can still advance
        let Some(i) = (0..k).rev().find(|&i| current[i] < n - k + i + 1) else {
            break;
        };
        current[i] += 1;
        for j in i + 1..k {
            current[j] = current[j - 1] + 1;
        }
    }
    out
}

/// The Kneser graph `KG(n, k)`: `k`-subsets of `{1..n}`, adjacent when disjoint.
pub fn kneser_graph(n: usize, k: usize) -> Result<Graph> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if k > n {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds n = {n}")));
    }
    if n > 127 {
        return Err(Error::InvalidArgument(format!("n = {n} is too large")));
    }
    let subsets = k_subsets(n, k);
    let masks: Vec<u128> = subsets
        .iter()
        .map(|s| s.iter().fold(0u128, |m, &x| m | 1 << x))
        .collect();
    let mut edges = Vec::new();
    for i in 0..masks.len() {
        for j in i + 1..masks.len() {
            if masks[i] & masks[j] == 0 {
                edges.push((i, j));
            }
        }
    }
    let labels = subsets.into_iter().map(VertexLabel::Subset).collect();
    Graph::with_labels(labels, edges)
}

pub fn adjacency_matrix(g: &Graph) -> BigIntMatrix {
    let n = g.vertex_count();
    let mut a = BigIntMatrix::zeros(n, n);
    for (i, j) in g.edges() {
        a[(i, j)] = BigInt::one();
        a[(j, i)] = BigInt::one();
    }
    a
}

/// `L = D - A`.
pub fn laplacian_matrix(g: &Graph) -> BigIntMatrix {
    let n = g.vertex_count();
    let mut l = BigIntMatrix::zeros(n, n);
    for (i, d) in g.degrees().into_iter().enumerate() {
        l[(i, i)] = BigInt::from(d);
    }
    for (i, j) in g.edges() {
        l[(i, j)] = BigInt::from(-1);
        l[(j, i)] = BigInt::from(-1);
    }
    l
}

/// Strongly regular graph parameters `(v, k, lambda, mu)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SrgParameters {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
}

/// Parameters of `KG(n, 2)`.
pub fn srg_parameters(n: u64) -> Result<SrgParameters> {
    if n < 5 {
        return Err(Error::OutOfRange(n));
    }
    Ok(SrgParameters {
        v: binomial(n, 2),
        k: binomial(n - 2, 2),
        lambda: binomial(n - 4, 2),
        mu: binomial(n - 3, 2),
    })
}

/// Checks `A^2 = kI + lambda A + mu (J - A - I)` exactly.
pub fn verify_srg_identity(g: &Graph, prm: &SrgParameters) -> Result<bool> {
    let v = g.vertex_count();
    if v as u64 != prm.v {
        return Err(Error::Shape(format!(
            "graph has {v} vertices, parameters say {}",
            prm.v
        )));
    }
    let a = adjacency_matrix(g);
    let i = BigIntMatrix::identity(v);
    let j = BigIntMatrix::ones(v, v);
    let lhs = a.checked_mul(&a)?;
    let complement = j.checked_sub(&a)?.checked_sub(&i)?;
    let rhs = i
        .scale(&BigInt::from(prm.k))
        .checked_add(&a.scale(&BigInt::from(prm.lambda)))?
        .checked_add(&complement.scale(&BigInt::from(prm.mu)))?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_kneser_graphs() {
        let g = kneser_graph(3, 2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 0));

        let g = kneser_graph(4, 2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 3));
        assert_eq!(g.connected_components(), 3);

        let g = kneser_graph(5, 2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (10, 15));
        assert!(g.degrees().iter().all(|&d| d == 3));

        assert_eq!(kneser_graph(2, 2).unwrap().vertex_count(), 1);
    }

    #[test]
    fn kneser_rejects_bad_k() {
        assert!(kneser_graph(2, 3).is_err());
        assert!(kneser_graph(4, 0).is_err());
    }

    #[test]
    fn canonical_order_is_lexicographic() {
        let g = kneser_graph(4, 2).unwrap();
        let labels: Vec<String> = g.labels().iter().map(ToString::to_string).collect();
        assert_eq!(
            labels,
            ["{1,2}", "{1,3}", "{1,4}", "{2,3}", "{2,4}", "{3,4}"]
        );
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges, vec![(0, 5), (1, 4), (2, 3)]);
    }

    #[test]
    fn matrices() {
        assert_eq!(
            adjacency_matrix(&kneser_graph(3, 2).unwrap()),
            BigIntMatrix::zeros(3, 3)
        );
        let edge = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(
            adjacency_matrix(&edge),
            BigIntMatrix::from_rows(&[[0, 1], [1, 0]]).unwrap()
        );
        assert_eq!(
            laplacian_matrix(&edge),
            BigIntMatrix::from_rows(&[[1, -1], [-1, 1]]).unwrap()
        );
        let petersen = kneser_graph(5, 2).unwrap();
        let a = adjacency_matrix(&petersen);
        assert!(a.row_sums().iter().all(|s| *s == BigInt::from(3)));
        let l = laplacian_matrix(&petersen);
        assert!(l.diagonal().iter().all(|d| *d == BigInt::from(3)));
        assert!(l.row_sums().iter().all(|s| *s == BigInt::from(0)));
        assert!(l.is_symmetric());
    }

    #[test]
    fn srg_parameter_values() {
        let p = |n| {
            let s = srg_parameters(n).unwrap();
            (s.v, s.k, s.lambda, s.mu)
        };
        assert_eq!(p(5), (10, 3, 0, 1));
        assert_eq!(p(6), (15, 6, 1, 3));
        assert_eq!(p(7), (21, 10, 3, 6));
        assert_eq!(srg_parameters(4), Err(Error::OutOfRange(4)));
    }

    #[test]
    fn srg_identity() {
        let g5 = kneser_graph(5, 2).unwrap();
        let p5 = srg_parameters(5).unwrap();
        assert!(verify_srg_identity(&g5, &p5).unwrap());
        let g6 = kneser_graph(6, 2).unwrap();
        assert!(verify_srg_identity(&g6, &srg_parameters(6).unwrap()).unwrap());
        let wrong = SrgParameters { mu: 2, ..p5 };
        assert!(!verify_srg_identity(&g5, &wrong).unwrap());
        assert!(verify_srg_identity(&g6, &p5).is_err());
    }

    #[test]
    fn loops_rejected_and_duplicates_collapse() {
        assert!(Graph::from_edges(3, [(1, 1)]).is_err());
        assert!(Graph::from_edges(3, [(1, 3)]).is_err());
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = kneser_graph(5, 2).unwrap();
        let text = g.to_edge_list_string();
        assert!(text.starts_with("p edge 10 15\n"));
        let back = Graph::read_edge_list(text.as_bytes()).unwrap();
        assert_eq!(
            back.edges().collect::<Vec<_>>(),
            g.edges().collect::<Vec<_>>()
        );
        assert!(Graph::read_edge_list("0 1\n".as_bytes()).is_err());
        assert!(Graph::read_edge_list("p edge 2 2\n0 1\n".as_bytes()).is_err());
    }
}
