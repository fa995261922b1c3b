//! Weighted undirected multigraphs with optional per-edge orientation.
//!
//! Vertices and edges carry dense integer ids assigned at construction; every
//! cross-module reference is by id. Loops and parallel edges are first-class;
//! operations that cannot handle them say so and return an error.

use num_traits::One;

use crate::error::{Error, Result};
use crate::num::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

/// Which end of an edge: `U` is the end at `edge.u`, `V` the end at `edge.v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    U,
    V,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::U => Side::V,
            Side::V => Side::U,
        }
    }
    pub fn index(self) -> usize {
        match self {
            Side::U => 0,
            Side::V => 1,
        }
    }
    pub fn from_index(i: usize) -> Side {
        if i == 0 {
            Side::U
        } else {
            Side::V
        }
    }
}

/// One of the two ends of an edge. A loop has two distinct ends at the same
/// vertex. An `EdgeEnd` doubles as a dart: the dart leaves the vertex this
/// end is attached to and runs toward the opposite end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeEnd {
    pub edge: EdgeId,
    pub side: Side,
}

impl EdgeEnd {
    pub fn new(edge: EdgeId, side: Side) -> Self {
        EdgeEnd { edge, side }
    }
    pub fn reversed(self) -> Self {
        EdgeEnd {
            edge: self.edge,
            side: self.side.flip(),
        }
    }
}

/// Orientation of an edge: `UV` means directed from `u` to `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    UV,
    VU,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::UV => Dir::VU,
            Dir::VU => Dir::UV,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub weight: Rat,
    pub dir: Option<Dir>,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
    pub fn vertex_at(&self, side: Side) -> VertexId {
        match side {
            Side::U => self.u,
            Side::V => self.v,
        }
    }
    pub fn other(&self, w: VertexId) -> VertexId {
        if self.u == w {
            self.v
        } else {
            self.u
        }
    }
    /// Tail of the edge under its orientation.
    pub fn tail(&self) -> Option<VertexId> {
        self.dir.map(|d| match d {
            Dir::UV => self.u,
            Dir::VU => self.v,
        })
    }
    pub fn head(&self) -> Option<VertexId> {
        self.dir.map(|d| match d {
            Dir::UV => self.v,
            Dir::VU => self.u,
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct Multigraph {
    edges: Vec<Edge>,
    /// vertex -> incident edge ends; a loop appears twice.
    adj: Vec<Vec<EdgeEnd>>,
}

impl Multigraph {
    pub fn new(n_vertices: usize) -> Self {
        Multigraph {
            edges: Vec::new(),
            adj: vec![Vec::new(); n_vertices],
        }
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.adj.push(Vec::new());
        VertexId(self.adj.len() - 1)
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, weight: Rat) -> EdgeId {
        self.add_edge_dir(u, v, weight, None)
    }

    pub fn add_unit_edge(&mut self, u: VertexId, v: VertexId) -> EdgeId {
        self.add_edge(u, v, Rat::one())
    }

    pub fn add_edge_dir(
        &mut self,
        u: VertexId,
        v: VertexId,
        weight: Rat,
        dir: Option<Dir>,
    ) -> EdgeId {
        assert!(u.0 < self.adj.len() && v.0 < self.adj.len(), "bad endpoint");
        let id = EdgeId(self.edges.len());
        self.edges.push(Edge {
            id,
            u,
            v,
            weight,
            dir,
        });
        self.adj[u.0].push(EdgeEnd::new(id, Side::U));
        self.adj[v.0].push(EdgeEnd::new(id, Side::V));
        id
    }

    pub fn n_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.adj.len()).map(VertexId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.0]
    }

    pub fn try_edge(&self, id: EdgeId) -> Result<&Edge> {
        self.edges.get(id.0).ok_or(Error::UnknownEdgeId(id.0))
    }

    pub fn incident(&self, v: VertexId) -> &[EdgeEnd] {
        &self.adj[v.0]
    }

    /// Vertex an edge end is attached to.
    pub fn end_vertex(&self, end: EdgeEnd) -> VertexId {
        self.edge(end.edge).vertex_at(end.side)
    }

    /// Degree counting a loop twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v.0].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.adj.len())
            .map(|v| self.adj[v].len())
            .max()
            .unwrap_or(0)
    }

    pub fn set_dir(&mut self, e: EdgeId, dir: Option<Dir>) {
        self.edges[e.0].dir = dir;
    }

    pub fn set_weight(&mut self, e: EdgeId, w: Rat) {
        self.edges[e.0].weight = w;
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|e| e.is_loop())
    }

    /// Returns a pair of parallel edge ids if one exists.
    pub fn parallel_pair(&self) -> Option<(EdgeId, EdgeId)> {
        let mut seen = std::collections::HashMap::new();
        for e in &self.edges {
            if e.is_loop() {
                continue;
            }
            let key = if e.u.0 <= e.v.0 {
                (e.u.0, e.v.0)
            } else {
                (e.v.0, e.u.0)
            };
            if let Some(&first) = seen.get(&key) {
                return Some((EdgeId(first), e.id));
            }
            seen.insert(key, e.id.0);
        }
        None
    }

    pub fn is_simple(&self) -> bool {
        !self.has_loops() && self.parallel_pair().is_none()
    }

    pub fn require_simple(&self) -> Result<()> {
        if let Some(e) = self.edges.iter().find(|e| e.is_loop()) {
            return Err(Error::LoopPresent(e.id.0));
        }
        if let Some((a, b)) = self.parallel_pair() {
            return Err(Error::MultiEdgePresent(a.0, b.0));
        }
        Ok(())
    }

    pub fn fully_oriented(&self) -> bool {
        self.edges.iter().all(|e| e.dir.is_some())
    }

    /// Product of all edge weights; the empty product is 1.
    pub fn weight_product(&self) -> Rat {
        let mut p = Rat::one();
        for e in &self.edges {
            p *= &e.weight;
        }
        p
    }

    /// `E(g) \ subset`. Every id in `subset` must exist.
    pub fn edge_complement(&self, subset: &[EdgeId]) -> Result<Vec<EdgeId>> {
        let mut inside = vec![false; self.edges.len()];
        for &e in subset {
            if e.0 >= self.edges.len() {
                return Err(Error::UnknownEdgeId(e.0));
            }
            inside[e.0] = true;
        }
        Ok((0..self.edges.len())
            .filter(|&i| !inside[i])
            .map(EdgeId)
            .collect())
    }

    /// Connected components as a vertex -> component-index map.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let n = self.n_vertices();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = count;
            while let Some(v) = stack.pop() {
                for end in &self.adj[v] {
                    let w = self.end_vertex(end.reversed()).0;
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }

    pub fn is_connected(&self) -> bool {
        self.n_vertices() <= 1 || self.components().0 == 1
    }

    /// Number of connected components of the subgraph spanned by `edges`,
    /// counting only vertices touched by those edges.
    pub fn component_count_of(&self, edges: &[EdgeId]) -> usize {
        let mut dsu = Dsu::new(self.n_vertices());
        let mut touched = vec![false; self.n_vertices()];
        for &e in edges {
            let ed = self.edge(e);
            touched[ed.u.0] = true;
            touched[ed.v.0] = true;
            dsu.union(ed.u.0, ed.v.0);
        }
        let mut roots = std::collections::HashSet::new();
        for v in 0..self.n_vertices() {
            if touched[v] {
                roots.insert(dsu.find(v));
            }
        }
        roots.len()
    }

    /// Relabels vertices by `perm` (new id of vertex i is `perm[i]`),
    /// preserving edge ids, weights, orientations and incidence order.
    pub fn relabeled(&self, perm: &[usize]) -> Multigraph {
        assert_eq!(perm.len(), self.n_vertices());
        let mut g = Multigraph::new(self.n_vertices());
        let mut edges: Vec<Edge> = self.edges.clone();
        for e in &mut edges {
            e.u = VertexId(perm[e.u.0]);
            e.v = VertexId(perm[e.v.0]);
        }
        for e in edges {
            g.adj[e.u.0].push(EdgeEnd::new(e.id, Side::U));
            g.adj[e.v.0].push(EdgeEnd::new(e.id, Side::V));
            g.edges.push(e);
        }
        // adjacency lists must come out sorted by edge id for determinism
        for list in &mut g.adj {
            list.sort();
        }
        g
    }
}

/// Plain union-find.
pub struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }
    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }
    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{frac, rat};

    fn k4() -> Multigraph {
        let mut g = Multigraph::new(4);
        for (u, v) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
            g.add_unit_edge(VertexId(u), VertexId(v));
        }
        g
    }

    #[test]
    fn degree_sum_is_twice_edge_count() {
        let mut g = k4();
        g.add_edge(VertexId(0), VertexId(0), rat(1)); // loop counts 2
        let total: usize = g.vertices().map(|v| g.degree(v)).sum();
        assert_eq!(total, 2 * g.n_edges());
        assert_eq!(g.degree(VertexId(0)), 5);
    }

    #[test]
    fn weight_product_examples() {
        assert_eq!(k4().weight_product(), rat(1));
        let mut g = Multigraph::new(2);
        g.add_edge(VertexId(0), VertexId(1), rat(-1));
        g.add_edge(VertexId(0), VertexId(1), frac(-1, 2));
        assert_eq!(g.weight_product(), frac(1, 2));
        assert_eq!(Multigraph::new(3).weight_product(), rat(1));
    }

    #[test]
    fn complement_is_involution() {
        let g = k4();
        let s = vec![EdgeId(0), EdgeId(3), EdgeId(5)];
        let c = g.edge_complement(&s).unwrap();
        let cc = g.edge_complement(&c).unwrap();
        assert_eq!(cc, s);
        assert_eq!(g.edge_complement(&[]).unwrap().len(), 6);
        let full: Vec<_> = g.edges().iter().map(|e| e.id).collect();
        assert!(g.edge_complement(&full).unwrap().is_empty());
        assert_eq!(
            g.edge_complement(&[EdgeId(99)]),
            Err(Error::UnknownEdgeId(99))
        );
    }

    #[test]
    fn simplicity_checks() {
        let mut g = k4();
        assert!(g.require_simple().is_ok());
        g.add_unit_edge(VertexId(0), VertexId(1));
        assert!(matches!(
            g.require_simple(),
            Err(Error::MultiEdgePresent(0, 6))
        ));
        let mut h = Multigraph::new(1);
        h.add_unit_edge(VertexId(0), VertexId(0));
        assert_eq!(h.require_simple(), Err(Error::LoopPresent(0)));
    }

    #[test]
    fn components_and_relabel() {
        let mut g = Multigraph::new(5);
        g.add_unit_edge(VertexId(0), VertexId(1));
        g.add_unit_edge(VertexId(2), VertexId(3));
        let (n, comp) = g.components();
        assert_eq!(n, 3);
        assert_eq!(comp[0], comp[1]);
        assert_ne!(comp[0], comp[2]);
        assert!(!g.is_connected());

        let k = k4().relabeled(&[2, 0, 3, 1]);
        assert_eq!(k.n_edges(), 6);
        assert_eq!(k.degree(VertexId(0)), 3);
    }
}
