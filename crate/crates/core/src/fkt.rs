//! The FKT pipeline: Pfaffian orientations of embedded planar graphs,
//! PerfMatch via the Pfaffian, and the reduction computing the undirected
//! permanent of planar graphs of maximum degree 3 in polynomial time.
//!
//! The reduction: for G with all degrees 2 or 3 and nonzero weights, let
//! G_inv be the subgraph induced by the degree-3 vertices with every weight
//! replaced by its reciprocal. Complementation is a bijection between cycle
//! covers of G and perfect matchings of G_inv, and with p the product of all
//! edge weights of G, uperm G = p * PerfMatch G_inv.

use num_traits::Zero;

use crate::embed::{count_forward, Embedded, RotationSystem};
use crate::error::{Error, Result};
use crate::graph::{Dir, EdgeId, Multigraph, VertexId};
use crate::num::Rat;
use crate::oracle;
use crate::pfaffian::{matching_sign, pfaffian, MatchingSignInput};
use crate::skew::build_skew_adjacency;

/// An embedded planar graph whose every edge carries an orientation.
#[derive(Clone, Debug)]
pub struct OrientedPlanarGraph {
    pub embedded: Embedded,
}

impl OrientedPlanarGraph {
    pub fn graph(&self) -> &Multigraph {
        &self.embedded.graph
    }
}

/// Number of edges of a face walk oriented clockwise, i.e. against the
/// counterclockwise boundary walk of a bounded face.
pub fn cw_count(e: &Embedded, face: usize) -> usize {
    let len = e.faces.faces[face].len();
    len - count_forward(&e.graph, &e.faces.faces[face].darts)
}

/// Orients the graph so every face except the outer one hits its clockwise
/// parity target: spanning-tree edges are fixed arbitrarily, then the
/// cotree edges (a spanning tree of the dual) are settled leaf-first.
pub fn orient_with_face_targets(e: &Embedded, target: &[usize]) -> Result<Embedded> {
    let g = &e.graph;
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    let mut oriented = g.clone();
    // spanning tree by BFS in id order, oriented from u
    let n = g.n_vertices();
    let mut in_tree = vec![false; g.n_edges()];
    let mut seen = vec![false; n.max(1)];
    if n > 0 {
        seen[0] = true;
        let mut queue = std::collections::VecDeque::from([VertexId(0)]);
        while let Some(v) = queue.pop_front() {
            for end in g.incident(v) {
                let w = g.end_vertex(end.reversed());
                if !seen[w.0] {
                    seen[w.0] = true;
                    in_tree[end.edge.0] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    for i in 0..g.n_edges() {
        oriented.set_dir(EdgeId(i), Some(Dir::UV));
    }
    // dual spanning tree over cotree edges, rooted at the outer face
    let nf = e.faces.faces.len();
    let mut parent_edge: Vec<Option<EdgeId>> = vec![None; nf];
    let mut order = Vec::new();
    let mut visited = vec![false; nf];
    visited[e.outer] = true;
    let mut queue = std::collections::VecDeque::from([e.outer]);
    while let Some(f) = queue.pop_front() {
        order.push(f);
        for d in &e.faces.faces[f].darts {
            if in_tree[d.edge.0] {
                continue;
            }
            let g2 = e.faces.face_of(d.reversed());
            if !visited[g2] {
                visited[g2] = true;
                parent_edge[g2] = Some(d.edge);
                queue.push_back(g2);
            }
        }
    }
    // deepest faces first: when a face is processed only its parent edge is
    // still free
    for &f in order.iter().rev() {
        if f == e.outer {
            continue;
        }
        let pe = parent_edge[f].expect("cotree edges span the dual");
        let darts = &e.faces.faces[f].darts;
        let cw = darts.len() - count_forward(&oriented, darts);
        if cw % 2 != target[f] % 2 {
            let cur = oriented.edge(pe).dir.unwrap();
            oriented.set_dir(pe, Some(cur.flip()));
        }
    }
    Ok(Embedded {
        graph: oriented,
        rotation: e.rotation.clone(),
        faces: e.faces.clone(),
        outer: e.outer,
    })
}

/// Classical FKT construction: every bounded face gets an odd number of
/// clockwise edges, which makes every even central cycle oddly oriented.
pub fn pfaffian_orientation(g: &Multigraph, rot: &RotationSystem) -> Result<OrientedPlanarGraph> {
    g.require_simple()?;
    let e = Embedded::new(g.clone(), rot.clone())?;
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    let targets = vec![1usize; e.faces.faces.len()];
    let oriented = orient_with_face_targets(&e, &targets)?;
    Ok(OrientedPlanarGraph { embedded: oriented })
}

/// Checks the Pfaffian property by full central-cycle enumeration
/// (exponential; desk scale only). Returns the first violating cycle.
pub fn verify_pfaffian(og: &OrientedPlanarGraph) -> Option<oracle::Cycle> {
    let g = og.graph();
    oracle::enumerate_central_cycles(g)
        .into_iter()
        .find(|c| c.len() % 2 == 0 && !oracle::is_oddly_oriented(g, c))
}

/// PerfMatch via the Pfaffian of the oriented adjacency matrix. The global
/// sign is pinned by the permutation sign of one perfect matching; under a
/// Pfaffian orientation every matching has that same sign.
pub fn perfmatch_via_pfaffian(og: &OrientedPlanarGraph) -> Result<Rat> {
    let g = og.graph();
    let Some(witness) = oracle::first_perfect_matching(g) else {
        return Ok(Rat::zero());
    };
    let a = build_skew_adjacency(g)?;
    let pf = pfaffian(&a);
    let pairs: Vec<(usize, usize)> = witness
        .iter()
        .map(|&e| {
            let ed = g.edge(e);
            (ed.tail().unwrap().0, ed.head().unwrap().0)
        })
        .collect();
    let s = matching_sign(&MatchingSignInput::new(pairs)?);
    Ok(if s >= 0 { pf } else { -pf })
}

/// Strict variant: re-verifies the Pfaffian property first.
pub fn perfmatch_via_pfaffian_strict(og: &OrientedPlanarGraph) -> Result<Rat> {
    if let Some(c) = verify_pfaffian(og) {
        return Err(Error::OrientationNotVerifiedPfaffian(format!(
            "even central cycle of length {} is not oddly oriented",
            c.len()
        )));
    }
    perfmatch_via_pfaffian(og)
}

/// uperm of a planar graph with maximum degree 3, in polynomial time.
pub fn uperm_degree3(g: &Multigraph, rot: &RotationSystem) -> Result<Rat> {
    let e = Embedded::new(g.clone(), rot.clone())?;
    uperm_degree3_embedded(&e)
}

pub fn uperm_degree3_embedded(e: &Embedded) -> Result<Rat> {
    let g = &e.graph;
    for v in g.vertices() {
        if g.degree(v) > 3 {
            return Err(Error::DegreeTooHigh(v.0, g.degree(v)));
        }
    }
    if let Some(z) = g.edges().iter().find(|ed| ed.weight.is_zero()) {
        return Err(Error::ZeroWeightEdge(z.id.0));
    }
    if g.vertices().any(|v| g.degree(v) <= 1) {
        return Ok(Rat::zero());
    }
    let p = g.weight_product();

    // G_inv: induced on the degree-3 vertices, weights inverted
    let (mut ginv, rot_inv, _) = e.induced(|v| g.degree(v) == 3);
    for i in 0..ginv.n_edges() {
        let w = ginv.edge(EdgeId(i)).weight.clone();
        ginv.set_weight(EdgeId(i), w.recip());
    }
    if let Some(l) = ginv.edges().iter().find(|ed| ed.is_loop()) {
        return Err(Error::NotSimple(format!(
            "G_inv has a loop (edge {})",
            l.id.0
        )));
    }
    if let Some((a, b)) = ginv.parallel_pair() {
        return Err(Error::NotSimple(format!(
            "G_inv has parallel edges ({}, {})",
            a.0, b.0
        )));
    }
    // PerfMatch is multiplicative over components; orient each separately
    let inv_emb = Embedded::new(ginv, rot_inv)?;
    let (n_comp, comp) = inv_emb.graph.components();
    let mut result = p;
    for c in 0..n_comp {
        let (sub, sub_rot, _) = inv_emb.induced(|v| comp[v.0] == c);
        if sub.n_edges() == 0 {
            // an isolated degree-3 vertex can never be matched
            return Ok(Rat::zero());
        }
        let og = pfaffian_orientation(&sub, &sub_rot)?;
        let pm = perfmatch_via_pfaffian(&og)?;
        if pm.is_zero() {
            return Ok(Rat::zero());
        }
        result *= pm;
    }
    Ok(result)
}
