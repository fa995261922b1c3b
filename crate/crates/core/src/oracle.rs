//! Brute-force ground truth: cycle covers, perfect matchings, central
//! cycles, and the defining sums for the undirected determinant, undirected
//! permanent and PerfMatch. Everything here is exponential by design and
//! meant for desk-scale graphs; the polynomial pipelines in `fkt` and
//! `semipfaffian` are tested against it.

use std::ops::ControlFlow;

use num_traits::Zero;

use crate::cover::{Budget, Config, DegreeSearch};
use crate::error::{Error, Result};
use crate::graph::{EdgeEnd, EdgeId, Multigraph, Side, VertexId};
use crate::num::{sign_pow, Rat};
use crate::pfaffian::{matching_sign, MatchingSignInput};
use crate::skew::dart_is_forward;

/// A cycle cover: edge set, number of connected components, weight.
#[derive(Clone, Debug)]
pub struct CycleCover {
    pub edges: Vec<EdgeId>,
    pub component_count: usize,
    pub weight: Rat,
}

fn to_cover(g: &Multigraph, c: &Config) -> CycleCover {
    CycleCover {
        edges: c.edges.clone(),
        component_count: g.component_count_of(&c.edges),
        weight: c.weight.clone(),
    }
}

/// Every spanning subgraph in which each vertex has degree exactly 2,
/// in deterministic order.
pub fn enumerate_cycle_covers(g: &Multigraph) -> Vec<CycleCover> {
    DegreeSearch::cycle_covers(g)
        .collect_all()
        .iter()
        .map(|c| to_cover(g, c))
        .collect()
}

pub fn for_each_cycle_cover(
    g: &Multigraph,
    mut f: impl FnMut(&CycleCover) -> ControlFlow<()>,
) -> Result<()> {
    DegreeSearch::cycle_covers(g).for_each(Budget::none(), |c| f(&to_cover(g, c)))
}

/// udet G = (-1)^n sum over cycle covers of (-1)^{|c|} w(c).
pub fn udet(g: &Multigraph) -> Rat {
    udet_bounded(g, Budget::none()).expect("unbounded")
}

pub fn udet_bounded(g: &Multigraph, budget: Budget) -> Result<Rat> {
    let n = g.n_vertices();
    let inner = DegreeSearch::cycle_covers(g).fold_stats(
        budget,
        Rat::zero(),
        |cycles, w| sign_pow(cycles) * w,
        |a, b| a + b,
    )?;
    Ok(sign_pow(n) * inner)
}

/// uperm G = sum over cycle covers of w(c).
pub fn uperm(g: &Multigraph) -> Rat {
    uperm_bounded(g, Budget::none()).expect("unbounded")
}

pub fn uperm_bounded(g: &Multigraph, budget: Budget) -> Result<Rat> {
    DegreeSearch::cycle_covers(g).fold_stats(
        budget,
        Rat::zero(),
        |_, w| w.clone(),
        |a, b| a + b,
    )
}

/// Every edge set in which each vertex has degree exactly 1.
pub fn enumerate_perfect_matchings(g: &Multigraph) -> Vec<Vec<EdgeId>> {
    DegreeSearch::perfect_matchings(g)
        .collect_all()
        .into_iter()
        .map(|c| c.edges)
        .collect()
}

pub fn first_perfect_matching(g: &Multigraph) -> Option<Vec<EdgeId>> {
    DegreeSearch::perfect_matchings(g).first().map(|c| c.edges)
}

pub fn has_perfect_matching(g: &Multigraph) -> bool {
    first_perfect_matching(g).is_some()
}

/// PerfMatch G = sum over perfect matchings of the weight product.
pub fn perfmatch(g: &Multigraph) -> Rat {
    perfmatch_bounded(g, Budget::none()).expect("unbounded")
}

pub fn perfmatch_bounded(g: &Multigraph, budget: Budget) -> Result<Rat> {
    DegreeSearch::perfect_matchings(g).fold_stats(
        budget,
        Rat::zero(),
        |_, w| w.clone(),
        |a, b| a + b,
    )
}

/// A simple cycle: vertices in walk order, `edges[i]` joining `vertices[i]`
/// to `vertices[(i+1) % len]`. A loop is a length-1 cycle; a pair of parallel
/// edges is a length-2 cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Darts of one traversal direction: dart i leaves `vertices[i]`.
    pub fn darts(&self, g: &Multigraph) -> Vec<EdgeEnd> {
        (0..self.edges.len())
            .map(|i| {
                let e = g.edge(self.edges[i]);
                let from = self.vertices[i];
                let side = if e.u == from { Side::U } else { Side::V };
                EdgeEnd::new(self.edges[i], side)
            })
            .collect()
    }
}

/// All simple cycles of a multigraph, each exactly once (one traversal
/// direction), in deterministic order: loops, then parallel 2-cycles, then
/// longer cycles found from their smallest vertex.
pub fn enumerate_simple_cycles(g: &Multigraph) -> Vec<Cycle> {
    let mut out = Vec::new();
    for e in g.edges() {
        if e.is_loop() {
            out.push(Cycle {
                vertices: vec![e.u],
                edges: vec![e.id],
            });
        }
    }
    for e in g.edges() {
        for f in g.edges() {
            if e.id < f.id && !e.is_loop() && !f.is_loop() {
                let same = (e.u == f.u && e.v == f.v) || (e.u == f.v && e.v == f.u);
                if same {
                    out.push(Cycle {
                        vertices: vec![e.u, e.v],
                        edges: vec![e.id, f.id],
                    });
                }
            }
        }
    }
    // longer cycles: DFS from each root over larger-id vertices only
    for root in g.vertices() {
        let mut path_v = vec![root];
        let mut path_e: Vec<EdgeId> = Vec::new();
        let mut on_path = vec![false; g.n_vertices()];
        on_path[root.0] = true;
        dfs_cycles(g, root, root, &mut path_v, &mut path_e, &mut on_path, &mut out);
    }
    out
}

fn dfs_cycles(
    g: &Multigraph,
    root: VertexId,
    cur: VertexId,
    path_v: &mut Vec<VertexId>,
    path_e: &mut Vec<EdgeId>,
    on_path: &mut Vec<bool>,
    out: &mut Vec<Cycle>,
) {
    for end in g.incident(cur) {
        let e = g.edge(end.edge);
        if e.is_loop() || path_e.contains(&end.edge) {
            continue;
        }
        let next = g.end_vertex(end.reversed());
        if next == root && path_e.len() >= 2 {
            // close the cycle; keep one direction: second vertex < last vertex
            if path_v[1] < *path_v.last().unwrap() {
                let mut edges = path_e.clone();
                edges.push(end.edge);
                out.push(Cycle {
                    vertices: path_v.clone(),
                    edges,
                });
            }
            continue;
        }
        if next.0 <= root.0 || on_path[next.0] {
            continue;
        }
        path_v.push(next);
        path_e.push(end.edge);
        on_path[next.0] = true;
        dfs_cycles(g, root, next, path_v, path_e, on_path, out);
        on_path[next.0] = false;
        path_e.pop();
        path_v.pop();
    }
}

/// A cycle is central if deleting its vertices leaves a graph with a perfect
/// matching (the empty graph counts).
pub fn is_central(g: &Multigraph, cycle: &Cycle) -> bool {
    let mut removed = vec![false; g.n_vertices()];
    for v in &cycle.vertices {
        removed[v.0] = true;
    }
    let mut vmap = vec![usize::MAX; g.n_vertices()];
    let mut count = 0;
    for v in 0..g.n_vertices() {
        if !removed[v] {
            vmap[v] = count;
            count += 1;
        }
    }
    let mut h = Multigraph::new(count);
    for e in g.edges() {
        if !removed[e.u.0] && !removed[e.v.0] {
            h.add_edge(VertexId(vmap[e.u.0]), VertexId(vmap[e.v.0]), Rat::zero());
        }
    }
    has_perfect_matching(&h)
}

/// Every central simple cycle.
pub fn enumerate_central_cycles(g: &Multigraph) -> Vec<Cycle> {
    enumerate_simple_cycles(g)
        .into_iter()
        .filter(|c| is_central(g, c))
        .collect()
}

/// An even cycle is oddly oriented when, for either traversal direction, an
/// odd number of its edges point along the traversal. Requires every cycle
/// edge to be oriented.
pub fn is_oddly_oriented(g: &Multigraph, cycle: &Cycle) -> bool {
    let fwd = cycle
        .darts(g)
        .iter()
        .filter(|d| dart_is_forward(g, **d))
        .count();
    fwd % 2 == 1
}

/// Perfect pairing of an even set of stub indices.
pub type Pairing = Vec<(usize, usize)>;

fn pairing_support(p: &Pairing) -> Result<Vec<usize>> {
    let mut s: Vec<usize> = p.iter().flat_map(|&(a, b)| [a, b]).collect();
    s.sort_unstable();
    for w in s.windows(2) {
        if w[0] == w[1] {
            return Err(Error::MismatchedSupport);
        }
    }
    Ok(s)
}

/// Parity of the number of {{a,b},{c,d}} -> {{a,d},{c,b}} moves connecting
/// `base` to `p`; well defined independently of the move sequence.
pub fn pairing_parity(p: &Pairing, base: &Pairing) -> Result<usize> {
    let sp = pairing_support(p)?;
    let sb = pairing_support(base)?;
    if sp != sb {
        return Err(Error::MismatchedSupport);
    }
    // union of the two pairings decomposes into alternating cycles; each
    // cycle spanning k pairs costs k-1 moves
    let mut partner_p = std::collections::HashMap::new();
    let mut partner_b = std::collections::HashMap::new();
    for &(a, b) in p {
        partner_p.insert(a, b);
        partner_p.insert(b, a);
    }
    for &(a, b) in base {
        partner_b.insert(a, b);
        partner_b.insert(b, a);
    }
    let mut seen = std::collections::HashSet::new();
    let mut cycles = 0;
    for &start in &sp {
        if seen.contains(&start) {
            continue;
        }
        cycles += 1;
        let mut x = start;
        loop {
            seen.insert(x);
            let y = partner_p[&x];
            seen.insert(y);
            x = partner_b[&y];
            if x == start {
                break;
            }
        }
    }
    Ok((p.len() - cycles) % 2)
}

/// Outcome of the f_G constancy scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FConstancy {
    /// No cycle covers at all.
    Empty,
    Constant(i32),
    /// Two covers with differing f values.
    Violation(Vec<EdgeId>, Vec<EdgeId>),
}

/// Evaluates f_G(c) = (-1)^{|c|} sgn_G(complement of c) over every cycle
/// cover of a fully oriented simple cubic graph and reports whether it is
/// constant. A violation is a legitimate outcome for graphs outside the
/// hypotheses of the constancy proposition.
pub fn f_constancy_check(g: &Multigraph) -> Result<FConstancy> {
    g.require_simple()?;
    for v in g.vertices() {
        if g.degree(v) != 3 {
            return Err(Error::NotCubic(v.0, g.degree(v)));
        }
    }
    if !g.fully_oriented() {
        let e = g.edges().iter().find(|e| e.dir.is_none()).unwrap();
        return Err(Error::UnorientedEdge(e.id.0));
    }
    let mut result: Option<(i32, Vec<EdgeId>)> = None;
    let mut violation = None;
    for_each_cycle_cover(g, |c| {
        let f = f_value(g, c);
        match &result {
            None => {
                result = Some((f, c.edges.clone()));
                ControlFlow::Continue(())
            }
            Some((f0, first)) => {
                if *f0 != f {
                    violation = Some((first.clone(), c.edges.clone()));
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            }
        }
    })?;
    if let Some((a, b)) = violation {
        return Ok(FConstancy::Violation(a, b));
    }
    Ok(match result {
        None => FConstancy::Empty,
        Some((f, _)) => FConstancy::Constant(f),
    })
}

/// f_G(c) for a single cover of a cubic oriented graph.
pub fn f_value(g: &Multigraph, c: &CycleCover) -> i32 {
    let comp = g
        .edge_complement(&c.edges)
        .expect("cover edges are graph edges");
    let pairs: Vec<(usize, usize)> = comp
        .iter()
        .map(|&e| {
            let ed = g.edge(e);
            let tail = ed.tail().expect("oriented");
            let head = ed.head().expect("oriented");
            (tail.0, head.0)
        })
        .collect();
    let sgn = matching_sign(&MatchingSignInput::new(pairs).expect("complement is a matching"));
    let cover_sign = if c.component_count % 2 == 0 { 1 } else { -1 };
    cover_sign * sgn
}

/// Independent reference implementations that filter all 2^|E| edge subsets;
/// used to validate the pruned enumeration on small graphs.
pub mod reference {
    use super::*;

    fn for_each_subset(g: &Multigraph, mut f: impl FnMut(&[EdgeId])) {
        let m = g.n_edges();
        assert!(m <= 24, "subset filter is for small graphs");
        for mask in 0u64..(1u64 << m) {
            let subset: Vec<EdgeId> = (0..m).filter(|i| mask >> i & 1 == 1).map(EdgeId).collect();
            f(&subset);
        }
    }

    fn degrees(g: &Multigraph, subset: &[EdgeId]) -> Vec<usize> {
        let mut deg = vec![0usize; g.n_vertices()];
        for &e in subset {
            let ed = g.edge(e);
            deg[ed.u.0] += 1;
            deg[ed.v.0] += 1;
        }
        deg
    }

    pub fn cycle_covers(g: &Multigraph) -> Vec<Vec<EdgeId>> {
        let mut out = Vec::new();
        for_each_subset(g, |s| {
            if degrees(g, s).iter().all(|&d| d == 2) {
                out.push(s.to_vec());
            }
        });
        out
    }

    pub fn udet(g: &Multigraph) -> Rat {
        let mut total = Rat::zero();
        for s in cycle_covers(g) {
            let k = g.component_count_of(&s);
            let mut w = Rat::one();
            for &e in &s {
                w *= &g.edge(e).weight;
            }
            total += sign_pow(k) * w;
        }
        sign_pow(g.n_vertices()) * total
    }

    pub fn uperm(g: &Multigraph) -> Rat {
        let mut total = Rat::zero();
        for s in cycle_covers(g) {
            let mut w = Rat::one();
            for &e in &s {
                w *= &g.edge(e).weight;
            }
            total += w;
        }
        total
    }

    pub fn perfmatch(g: &Multigraph) -> Rat {
        let mut total = Rat::zero();
        for_each_subset(g, |s| {
            if degrees(g, s).iter().all(|&d| d == 1) {
                let mut w = Rat::one();
                for &e in s {
                    w *= &g.edge(e).weight;
                }
                total += w;
            }
        });
        total
    }

    use num_traits::One;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::graph::Multigraph;
    use crate::num::rat;

    #[test]
    fn c4_examples() {
        let g = corpus::cycle(4).graph;
        let covers = enumerate_cycle_covers(&g);
        assert_eq!(covers.len(), 1);
        assert_eq!(covers[0].component_count, 1);
        assert_eq!(covers[0].weight, rat(1));
        assert_eq!(udet(&g), rat(-1));
        assert_eq!(uperm(&g), rat(1));
        assert_eq!(perfmatch(&g), rat(2));
    }

    #[test]
    fn k4_examples() {
        let g = corpus::k4().graph;
        let covers = enumerate_cycle_covers(&g);
        assert_eq!(covers.len(), 3);
        assert!(covers.iter().all(|c| c.component_count == 1));
        assert_eq!(udet(&g), rat(-3));
        assert_eq!(uperm(&g), rat(3));
        assert_eq!(perfmatch(&g), rat(3));
        assert_eq!(enumerate_perfect_matchings(&g).len(), 3);
    }

    #[test]
    fn cube_udet_is_minus_3() {
        let g = corpus::cube_q3().graph;
        assert_eq!(udet(&g), rat(-3));
        assert_eq!(uperm(&g), rat(9));
        assert_eq!(perfmatch(&g), rat(9));
    }

    #[test]
    fn degree_deficient_graphs() {
        let mut g = Multigraph::new(3);
        g.add_unit_edge(VertexId(0), VertexId(1)); // vertex 2 isolated
        assert!(enumerate_cycle_covers(&g).is_empty());
        assert_eq!(uperm(&g), rat(0));
        assert_eq!(udet(&g), rat(0));
    }

    #[test]
    fn odd_vertex_count_has_no_matching() {
        let g = corpus::cycle(5).graph;
        assert!(enumerate_perfect_matchings(&g).is_empty());
        assert_eq!(perfmatch(&g), rat(0));
    }

    #[test]
    fn matches_subset_filter_reference() {
        let cases = [
            corpus::k4(),
            corpus::cycle(4),
            corpus::cycle(5),
            corpus::triangle_prism(),
            corpus::bowtie(),
            corpus::prism_with_chords(),
        ];
        for e in &cases {
            assert_eq!(udet(&e.graph), reference::udet(&e.graph));
            assert_eq!(uperm(&e.graph), reference::uperm(&e.graph));
            assert_eq!(perfmatch(&e.graph), reference::perfmatch(&e.graph));
        }
        for seed in 0..5 {
            let e = corpus::reweighted(&corpus::triangle_prism(), seed);
            assert_eq!(udet(&e.graph), reference::udet(&e.graph));
            assert_eq!(uperm(&e.graph), reference::uperm(&e.graph));
        }
    }

    #[test]
    fn simple_cycle_counts() {
        let k4 = corpus::k4().graph;
        let cycles = enumerate_simple_cycles(&k4);
        assert_eq!(cycles.len(), 7); // 4 triangles + 3 quadrilaterals

        let q3 = corpus::cube_q3().graph;
        let cycles = enumerate_simple_cycles(&q3);
        assert_eq!(cycles.len(), 28); // 6 + 16 + 6 by length

        // parallel edges and loops
        let mut g = Multigraph::new(2);
        g.add_unit_edge(VertexId(0), VertexId(1));
        g.add_unit_edge(VertexId(0), VertexId(1));
        g.add_unit_edge(VertexId(0), VertexId(0));
        let cycles = enumerate_simple_cycles(&g);
        assert_eq!(cycles.len(), 2); // the loop and the 2-cycle
    }

    #[test]
    fn central_cycles_of_k4_and_c6() {
        let k4 = corpus::k4().graph;
        let central = enumerate_central_cycles(&k4);
        assert_eq!(central.len(), 3);
        assert!(central.iter().all(|c| c.len() == 4));

        let c6 = corpus::cycle(6).graph;
        let central = enumerate_central_cycles(&c6);
        assert_eq!(central.len(), 1);
        assert_eq!(central[0].len(), 6);

        let q3 = corpus::cube_q3().graph;
        let central = enumerate_central_cycles(&q3);
        // six 4-faces and six hamiltonian cycles are central; of the sixteen
        // 6-cycles, the twelve leaving a rung pair are central and the four
        // leaving an antipodal pair are not
        assert_eq!(central.iter().filter(|c| c.len() == 4).count(), 6);
        assert_eq!(central.iter().filter(|c| c.len() == 6).count(), 12);
        assert_eq!(central.iter().filter(|c| c.len() == 8).count(), 6);
    }

    #[test]
    fn pairing_parity_basics() {
        let base: Pairing = vec![(0, 1), (2, 3)];
        assert_eq!(pairing_parity(&base, &base).unwrap(), 0);
        let one_move: Pairing = vec![(0, 3), (2, 1)];
        assert_eq!(pairing_parity(&one_move, &base).unwrap(), 1);
        let other: Pairing = vec![(0, 2), (1, 3)];
        assert_eq!(pairing_parity(&other, &base).unwrap(), 1);
        let bad: Pairing = vec![(0, 1), (2, 4)];
        assert!(pairing_parity(&bad, &base).is_err());
    }

    #[test]
    fn pairing_parity_is_minimal_move_distance() {
        // exhaust all pairings of 4 and 6 points; the computed parity must
        // equal the parity of the minimal number of moves from the base
        // (the quantity the tau bookkeeping needs), found by BFS
        for n in [4usize, 6] {
            let all = all_pairings(n);
            let base = all[0].clone();
            let mut dist = std::collections::HashMap::new();
            let norm = |p: &Pairing| {
                let mut q: Pairing =
                    p.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
                q.sort();
                q
            };
            dist.insert(norm(&base), 0usize);
            let mut queue = std::collections::VecDeque::from([base.clone()]);
            while let Some(p) = queue.pop_front() {
                let d = dist[&norm(&p)];
                for q in moves_of(&p) {
                    if !dist.contains_key(&norm(&q)) {
                        dist.insert(norm(&q), d + 1);
                        queue.push_back(q);
                    }
                }
            }
            for p in &all {
                assert_eq!(dist.len(), all.len());
                let parity = pairing_parity(p, &base).unwrap();
                assert_eq!(parity, dist[&norm(p)] % 2, "pairing {p:?}");
            }
        }
    }

    fn all_pairings(n: usize) -> Vec<Pairing> {
        fn rec(rest: &[usize], cur: &mut Pairing, out: &mut Vec<Pairing>) {
            if rest.is_empty() {
                out.push(cur.clone());
                return;
            }
            let a = rest[0];
            for i in 1..rest.len() {
                let b = rest[i];
                let mut next: Vec<usize> = rest[1..].to_vec();
                next.retain(|&x| x != b);
                cur.push((a, b));
                rec(&next, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(&(0..n).collect::<Vec<_>>(), &mut Vec::new(), &mut out);
        out
    }

    fn moves_of(p: &Pairing) -> Vec<Pairing> {
        let mut out = Vec::new();
        for i in 0..p.len() {
            for j in (i + 1)..p.len() {
                let (a, b) = p[i];
                let (c, d) = p[j];
                for (x, y) in [((a, d), (c, b)), ((a, c), (b, d))] {
                    let mut q = p.clone();
                    q[i] = x;
                    q[j] = y;
                    out.push(q);
                }
            }
        }
        out
    }
}
