//! Semi-Pfaffian orientations, tension analysis, and the polynomial
//! computation of the undirected determinant for tension-free cubic planar
//! graphs.
//!
//! An orientation is semi-Pfaffian when every central cycle of length 2k is
//! oddly oriented exactly when k is odd. For a cubic planar graph without
//! tension carrying such an orientation, f(c) = (-1)^{|c|} sgn(complement c)
//! is the same for every cycle cover, so
//!
//! ```text
//! udet G = f * p * Pfaffian(A_inv)
//! ```
//!
//! where p is the product of all edge weights and A_inv inverts the nonzero
//! entries of the skew adjacency matrix. The constant f is pinned by one
//! witness cover.

use num_traits::Zero;

use crate::cover::DegreeSearch;
use crate::embed::Embedded;
use crate::error::{Error, Result};
use crate::fkt::orient_with_face_targets;
use crate::graph::{Dir, EdgeId, Multigraph, VertexId};
use crate::num::{sign_pow, Rat};
use crate::oracle::{self, Cycle};
use crate::pfaffian::{matching_sign, pfaffian, MatchingSignInput};
use crate::skew::build_skew_adjacency;

/// Default bound on the number of cotree edges for the exhaustive
/// orientation search (the search space is 2^cotree after gauge fixing).
pub const DEFAULT_SEARCH_BOUND: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InOut {
    /// The vertex's third edge lies on the bounded side of the cycle.
    In,
    /// The third edge lies on the unbounded side.
    Out,
}

/// Tension report for an even cycle of an embedded cubic graph.
#[derive(Clone, Debug)]
pub struct TensionReport {
    pub cycle: Cycle,
    /// Alternating bipartition classes along the cycle.
    pub classes: (Vec<VertexId>, Vec<VertexId>),
    pub out_counts: (usize, usize),
    pub tension: usize,
}

fn require_cubic(g: &Multigraph) -> Result<()> {
    for v in g.vertices() {
        if g.degree(v) != 3 {
            return Err(Error::NotCubic(v.0, g.degree(v)));
        }
    }
    Ok(())
}

fn check_cycle(g: &Multigraph, cycle: &Cycle) -> Result<()> {
    let k = cycle.vertices.len();
    if k == 0 || cycle.edges.len() != k {
        return Err(Error::CycleNotInGraph("empty or malformed cycle".into()));
    }
    let mut seen = std::collections::HashSet::new();
    for i in 0..k {
        let e = g.try_edge(cycle.edges[i])?;
        let (a, b) = (cycle.vertices[i], cycle.vertices[(i + 1) % k]);
        let joins = (e.u == a && e.v == b) || (e.u == b && e.v == a);
        if !joins || !seen.insert(a) {
            return Err(Error::CycleNotInGraph(format!(
                "edge {} does not join consecutive distinct vertices",
                cycle.edges[i].0
            )));
        }
    }
    Ok(())
}

/// Splits the faces into the two sides of a cycle; returns per-face `true`
/// when the face lies on the bounded side (the side not containing the
/// outer face).
fn bounded_side(e: &Embedded, cycle: &Cycle) -> Vec<bool> {
    let nf = e.faces.faces.len();
    let on_cycle: std::collections::HashSet<EdgeId> = cycle.edges.iter().copied().collect();
    // faces adjacent across any non-cycle edge are on the same side
    let mut dsu = crate::graph::Dsu::new(nf);
    for ed in e.graph.edges() {
        if !on_cycle.contains(&ed.id) {
            let (f1, f2) = e.faces.faces_of_edge(ed.id);
            dsu.union(f1, f2);
        }
    }
    let outer_root = dsu.find(e.outer);
    (0..nf).map(|f| dsu.find(f) != outer_root).collect()
}

/// Labels each cycle vertex by the side its third edge lies on.
pub fn classify_in_out(e: &Embedded, cycle: &Cycle) -> Result<Vec<(VertexId, InOut)>> {
    require_cubic(&e.graph)?;
    check_cycle(&e.graph, cycle)?;
    let inside = bounded_side(e, cycle);
    let cycle_edges: std::collections::HashSet<EdgeId> = cycle.edges.iter().copied().collect();
    let mut out = Vec::new();
    for &v in &cycle.vertices {
        let third = e
            .graph
            .incident(v)
            .iter()
            .find(|end| !cycle_edges.contains(&end.edge))
            .expect("cubic vertex on a cycle has one third edge");
        let (f1, f2) = e.faces.faces_of_edge(third.edge);
        debug_assert_eq!(
            inside[f1], inside[f2],
            "a non-cycle edge cannot straddle the cycle"
        );
        let label = if inside[f1] { InOut::In } else { InOut::Out };
        out.push((v, label));
    }
    Ok(out)
}

/// Tension of an even cycle: |out-vertices in V1 - out-vertices in V2| over
/// the alternating bipartition. The same number results from in-vertices.
pub fn tension(e: &Embedded, cycle: &Cycle) -> Result<TensionReport> {
    if cycle.len() % 2 != 0 {
        return Err(Error::OddCycle(cycle.len()));
    }
    let labels = classify_in_out(e, cycle)?;
    let mut classes = (Vec::new(), Vec::new());
    let mut out_counts = (0usize, 0usize);
    let mut in_counts = (0usize, 0usize);
    for (i, &(v, side)) in labels.iter().enumerate() {
        let first_class = i % 2 == 0;
        if first_class {
            classes.0.push(v);
        } else {
            classes.1.push(v);
        }
        match (side, first_class) {
            (InOut::Out, true) => out_counts.0 += 1,
            (InOut::Out, false) => out_counts.1 += 1,
            (InOut::In, true) => in_counts.0 += 1,
            (InOut::In, false) => in_counts.1 += 1,
        }
    }
    let t_out = out_counts.0.abs_diff(out_counts.1);
    let t_in = in_counts.0.abs_diff(in_counts.1);
    assert_eq!(t_out, t_in, "tension must not depend on the labelling");
    Ok(TensionReport {
        cycle: cycle.clone(),
        classes,
        out_counts,
        tension: t_out,
    })
}

/// Scans every even central cycle; returns the first one with nonzero
/// tension, or None when the graph is without tension.
pub fn is_without_tension(e: &Embedded) -> Result<Option<TensionReport>> {
    require_cubic(&e.graph)?;
    for c in oracle::enumerate_central_cycles(&e.graph) {
        if c.len() % 2 != 0 {
            continue;
        }
        let report = tension(e, &c)?;
        if report.tension != 0 {
            return Ok(Some(report));
        }
    }
    Ok(None)
}

/// Checks the 2k-parity rule on every central cycle; returns the first
/// violating cycle.
pub fn verify_semi_pfaffian(e: &Embedded) -> Result<Option<Cycle>> {
    require_cubic(&e.graph)?;
    if !e.graph.fully_oriented() {
        let bad = e.graph.edges().iter().find(|ed| ed.dir.is_none()).unwrap();
        return Err(Error::UnorientedEdge(bad.id.0));
    }
    let cycles = oracle::enumerate_central_cycles(&e.graph);
    Ok(find_violation(&e.graph, &cycles))
}

fn find_violation(g: &Multigraph, central: &[Cycle]) -> Option<Cycle> {
    central
        .iter()
        .find(|c| {
            c.len() % 2 == 0 && {
                let k = c.len() / 2;
                oracle::is_oddly_oriented(g, c) != (k % 2 == 1)
            }
        })
        .cloned()
}

/// Searches for a semi-Pfaffian orientation. A face-parity heuristic is
/// tried first (a face of length 2k targets clockwise parity k mod 2) and
/// verified; on failure the search falls back to exhausting the cotree
/// orientations (tree edges can be fixed: reversing all edges at one vertex
/// preserves every cycle's traversal parity). NotFound is reported only
/// after exhaustion.
pub fn find_semi_pfaffian(e: &Embedded) -> Result<Embedded> {
    find_semi_pfaffian_bounded(e, DEFAULT_SEARCH_BOUND)
}

pub fn find_semi_pfaffian_bounded(e: &Embedded, bound: usize) -> Result<Embedded> {
    require_cubic(&e.graph)?;
    e.graph.require_simple()?;
    let central = oracle::enumerate_central_cycles(&e.graph);

    // heuristic face targets, in clockwise-parity convention
    let mut targets = vec![0usize; e.faces.faces.len()];
    let mut odd_seen = 0;
    for (f, face) in e.faces.faces.iter().enumerate() {
        let len = face.len();
        targets[f] = if len % 2 == 0 {
            (len / 2) % 2
        } else {
            let a = (len - 1) / 2;
            odd_seen += 1;
            if odd_seen == 1 {
                (a + 1) % 2
            } else {
                a % 2
            }
        };
    }
    if let Ok(candidate) = orient_with_face_targets(e, &targets) {
        if find_violation(&candidate.graph, &central).is_none() {
            return Ok(candidate);
        }
    }

    // exhaustive fallback over cotree orientations, gauge-fixed tree
    let g = &e.graph;
    let mut in_tree = vec![false; g.n_edges()];
    let mut seen = vec![false; g.n_vertices()];
    if g.n_vertices() > 0 {
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
    if !seen.iter().all(|&s| s) {
        return Err(Error::NotConnected);
    }
    let cotree: Vec<EdgeId> = (0..g.n_edges())
        .filter(|&i| !in_tree[i])
        .map(EdgeId)
        .collect();
    if cotree.len() > bound {
        return Err(Error::SearchSpaceTooLarge(cotree.len(), bound));
    }
    let mut candidate = g.clone();
    for i in 0..candidate.n_edges() {
        candidate.set_dir(EdgeId(i), Some(Dir::UV));
    }
    for mask in 0u64..(1u64 << cotree.len()) {
        for (bit, &eid) in cotree.iter().enumerate() {
            let dir = if mask >> bit & 1 == 1 { Dir::VU } else { Dir::UV };
            candidate.set_dir(eid, Some(dir));
        }
        if find_violation(&candidate, &central).is_none() {
            return Ok(Embedded {
                graph: candidate,
                rotation: e.rotation.clone(),
                faces: e.faces.clone(),
                outer: e.outer,
            });
        }
    }
    Err(Error::NoSemiPfaffianOrientation)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct UdetOptions {
    /// Skip the (exponential) tension scan; the caller asserts it.
    pub assume_without_tension: bool,
    /// Trust a fully oriented input without re-verifying the parity rule.
    pub trust_orientation: bool,
}

/// udet of a tension-free cubic planar graph, computed as
/// f * p * Pfaffian(A_inv); the sign f comes from one greedily found cycle
/// cover (the complement of a perfect matching).
pub fn udet_cubic(e: &Embedded) -> Result<Rat> {
    udet_cubic_with(e, UdetOptions::default())
}

pub fn udet_cubic_with(e: &Embedded, opts: UdetOptions) -> Result<Rat> {
    require_cubic(&e.graph)?;
    e.graph.require_simple()?;
    if let Some(z) = e.graph.edges().iter().find(|ed| ed.weight.is_zero()) {
        return Err(Error::ZeroWeightEdge(z.id.0));
    }
    let oriented = if e.graph.fully_oriented() {
        if !opts.trust_orientation {
            if let Some(c) = verify_semi_pfaffian(e)? {
                return Err(Error::OrientationNotVerifiedPfaffian(format!(
                    "central cycle of length {} violates the semi-Pfaffian parity rule",
                    c.len()
                )));
            }
        }
        e.clone()
    } else {
        find_semi_pfaffian(e)?
    };
    if !opts.assume_without_tension {
        if let Some(report) = is_without_tension(&oriented)? {
            return Err(Error::TensionPresent(format!(
                "even central cycle of length {} has tension {}",
                report.cycle.len(),
                report.tension
            )));
        }
    }

    let g = &oriented.graph;
    let Some(witness_matching) = oracle::first_perfect_matching(g) else {
        return Ok(Rat::zero()); // no matching, hence no cycle cover
    };
    let witness_cover = g.edge_complement(&witness_matching)?;
    let k = g.component_count_of(&witness_cover);
    let pairs: Vec<(usize, usize)> = witness_matching
        .iter()
        .map(|&eid| {
            let ed = g.edge(eid);
            (ed.tail().unwrap().0, ed.head().unwrap().0)
        })
        .collect();
    let sgn = matching_sign(&MatchingSignInput::new(pairs)?);
    let f = sign_pow(k) * Rat::from_integer(sgn.into());

    let a = build_skew_adjacency(g)?;
    let a_inv = a.invert_entries();
    let p = g.weight_product();
    Ok(f * p * pfaffian(&a_inv))
}

/// Cycle covers of a cubic graph are complements of perfect matchings; used
/// by tests for the bijection and weight-product invariants.
pub fn cover_matching_bijection_holds(g: &Multigraph) -> bool {
    let covers = DegreeSearch::cycle_covers(g).collect_all();
    let matchings = DegreeSearch::perfect_matchings(g).collect_all();
    if covers.len() != matchings.len() {
        return false;
    }
    let matching_sets: std::collections::HashSet<Vec<EdgeId>> =
        matchings.into_iter().map(|m| m.edges).collect();
    covers.iter().all(|c| {
        let comp = g.edge_complement(&c.edges).unwrap();
        matching_sets.contains(&comp)
    })
}
