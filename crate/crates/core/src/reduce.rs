//! The executable 3-CNF reduction: compiles a formula into planar weighted
//! graphs whose undirected permanent (permanent mode) or determinant
//! (determinant mode, times (-1)^m) equals the number of satisfying
//! assignments; plus the cubicization pipeline replacing degree-4 vertices
//! by a cubic gadget.
//!
//! An extended iff insertion synchronizes two edges e1 and e2: the iff body
//! splices into e1 and a two-rail corridor runs from its right vertex to
//! e2, crossing a declared list of edges; each crossed edge gets a pair of
//! skew crossovers. A valid corridor is a path in the dual graph: e1
//! borders F0, each crossed edge steps to the next face, e2 borders the
//! last. The compiler routes corridors by breadth-first search in the dual,
//! so insertion order alone fixes the output.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_traits::One;

use crate::builder::{Builder, ProvenanceMaps};
use crate::cnf::CnfFormula;
use crate::embed::{trace_faces, Embedded};
use crate::error::{Error, Result};
use crate::gadgets::{
    build_clause, build_crossover, build_deg4, build_iff, build_null, build_variable, Mode,
};
use crate::graph::{EdgeId, Side};
use crate::num::{rat, Rat};

/// A validated corridor: which dart of e1 faces the iff body, the crossed
/// edges with the dart facing the approach side, and the landing dart of e2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplicePlan {
    pub e1: EdgeId,
    pub e2: EdgeId,
    pub e1_side: Side,
    pub crossings: Vec<(EdgeId, Side)>,
    pub e2_side: Side,
}

/// Checks that `crossed` is a corridor for synchronizing `e1` with `e2` in
/// the embedding: consecutive crossings share faces. This is the spec of
/// the extended iff gadget; `apply_splice_plan` executes it.
pub fn make_extended_iff(
    e: &Embedded,
    e1: EdgeId,
    e2: EdgeId,
    crossed: &[EdgeId],
) -> Result<SplicePlan> {
    if e1 == e2 {
        if !crossed.is_empty() {
            return Err(Error::RoutingNotPlanar(
                "self-synchronization admits no crossings".into(),
            ));
        }
        return Ok(SplicePlan {
            e1,
            e2,
            e1_side: Side::U,
            crossings: vec![],
            e2_side: Side::U,
        });
    }
    e.graph.try_edge(e1)?;
    e.graph.try_edge(e2)?;
    for &r in crossed {
        if r == e1 || r == e2 {
            return Err(Error::RoutingNotPlanar(format!(
                "corridor crosses its own endpoint edge {}",
                r.0
            )));
        }
    }
    // walk faces along the declared corridor
    let sides_of = |edge: EdgeId| {
        let (fu, fv) = e.faces.faces_of_edge(edge);
        [(Side::U, fu), (Side::V, fv)]
    };
    let mut cur: Vec<(Option<Side>, usize)> =
        sides_of(e1).iter().map(|&(s, f)| (Some(s), f)).collect();
    let mut e1_side = None;
    let mut crossings = Vec::new();
    for &r in crossed {
        let mut next = None;
        'outer: for &(s1, f_prev) in &cur {
            for (sr, fr) in sides_of(r) {
                if fr == f_prev {
                    let f_next = sides_of(r)
                        .iter()
                        .find(|&&(s, _)| s != sr)
                        .map(|&(_, f)| f)
                        .unwrap();
                    next = Some((s1, sr, f_next));
                    break 'outer;
                }
            }
        }
        let Some((s1, sr, f_next)) = next else {
            return Err(Error::RoutingNotPlanar(format!(
                "edge {} does not border the corridor face",
                r.0
            )));
        };
        if e1_side.is_none() {
            e1_side = s1;
        }
        crossings.push((r, sr));
        cur = vec![(None, f_next)];
    }
    // the corridor must end on a face of e2
    let mut landing = None;
    'l: for &(s1, f) in &cur {
        for (s2, f2) in sides_of(e2) {
            if f2 == f {
                landing = Some((s1, s2));
                break 'l;
            }
        }
    }
    let Some((s1, e2_side)) = landing else {
        return Err(Error::RoutingNotPlanar(
            "corridor does not reach the second edge".into(),
        ));
    };
    if e1_side.is_none() {
        e1_side = s1;
    }
    Ok(SplicePlan {
        e1,
        e2,
        e1_side: e1_side.unwrap_or(Side::U),
        crossings,
        e2_side,
    })
}

/// Replacement record of one insertion: every split edge maps to the pieces
/// that now carry its synchronization role (all pieces lie on the same
/// all-or-nothing chain, so any of them can stand for the original edge).
#[derive(Clone, Debug, Default)]
pub struct Replacements {
    pub map: HashMap<usize, Vec<usize>>,
}

impl Replacements {
    pub fn resolve(&self, e: usize) -> usize {
        self.map.get(&e).map(|v| v[0]).unwrap_or(e)
    }

    /// Rewrites a set of equivalent target edges through this replacement.
    pub fn resolve_set(&self, set: &mut Vec<usize>) {
        let mut out = Vec::with_capacity(set.len());
        for &e in set.iter() {
            match self.map.get(&e) {
                Some(pieces) => out.extend_from_slice(pieces),
                None => out.push(e),
            }
        }
        out.sort_unstable();
        out.dedup();
        *set = out;
    }
}

/// Executes a splice plan inside a builder (ids are builder ids here).
///
/// The rotationally derived attachment orientations are tried first; should
/// any crossing or the landing come out twisted, the flip fallback walks the
/// remaining orientation masks in order until the Euler check passes, so the
/// result is deterministic either way.
fn apply_extended_iff(
    b: &mut Builder,
    mode: Mode,
    plan_e1: usize,
    plan_e1_side: Side,
    crossings: &[(usize, Side)],
    plan_e2: usize,
    plan_e2_side: Side,
    prov: &str,
) -> Replacements {
    if plan_e1 == plan_e2 {
        return apply_self_sync(b, mode, plan_e1, prov);
    }
    let flips = crossings.len() + 1;
    for mask in 0u32..(1 << flips) {
        let mut trial = b.clone();
        let rep = insert_corridor(
            &mut trial,
            mode,
            plan_e1,
            plan_e1_side,
            crossings,
            plan_e2,
            plan_e2_side,
            prov,
            mask,
        );
        if trial.check_planar().is_ok() {
            *b = trial;
            return rep;
        }
    }
    panic!("extended iff could not be embedded along the routed corridor");
}

#[allow(clippy::too_many_arguments)]
fn insert_corridor(
    b: &mut Builder,
    mode: Mode,
    plan_e1: usize,
    plan_e1_side: Side,
    crossings: &[(usize, Side)],
    plan_e2: usize,
    plan_e2_side: Side,
    prov: &str,
    flip_mask: u32,
) -> Replacements {
    let mut rep = Replacements::default();
    let iff = build_iff(b, mode, prov);

    // splice the left vertex into e1: the head half of the dart facing the
    // body's face attaches at l1; the tail half keeps the weight
    let ed1 = b.edge_ref(plan_e1).clone();
    let (pu, pv) = b.cut_edge(plan_e1);
    let (p_tail, p_head) = match plan_e1_side {
        Side::U => (pu, pv),
        Side::V => (pv, pu),
    };
    let e1_head = b.connect(iff.l1, p_head, Rat::one(), &format!("{prov}/e1-head"));
    let e1_new = b.connect(iff.l2, p_tail, ed1.weight.clone(), &format!("{prov}/e1-tail"));
    rep.map.insert(plan_e1, vec![e1_new, e1_head]);

    // rails from the right vertex, crossing each listed edge
    let mut up = iff.r1;
    let mut up_w = iff.r1_mult.clone();
    let mut lo = iff.r2;
    for (i, &(r, r_side)) in crossings.iter().enumerate() {
        let flip = flip_mask >> i & 1 == 1;
        let t = build_crossover(b, mode, &format!("{prov}/cross{i}-top"));
        let bo = build_crossover(b, mode, &format!("{prov}/cross{i}-bot"));
        let edr = b.edge_ref(r).clone();
        let (pru, prv) = b.cut_edge(r);
        let (mut pr_tail, mut pr_head) = match r_side {
            Side::U => (pru, prv),
            Side::V => (prv, pru),
        };
        if flip {
            std::mem::swap(&mut pr_tail, &mut pr_head);
        }
        let r_new = b.connect(t.lt, pr_head, edr.weight.clone(), &format!("{prov}/cross{i}-head"));
        let r_tail = b.connect(bo.lb, pr_tail, Rat::one(), &format!("{prov}/cross{i}-tail"));
        rep.map.insert(r, vec![r_new, r_tail]);
        b.connect(up, t.lb, up_w.clone(), &format!("{prov}/rail-up{i}"));
        up_w = Rat::one();
        b.connect(lo, bo.lt, Rat::one(), &format!("{prov}/rail-lo{i}"));
        b.connect(t.rb, bo.rt, Rat::one(), &format!("{prov}/link{i}"));
        up = t.rt;
        lo = bo.rb;
    }

    // land on e2; the chain carries w(e2) once and the -d multiplier once
    let ed2 = b.edge_ref(plan_e2).clone();
    let (p2u, p2v) = b.cut_edge(plan_e2);
    let (mut p2_tail, mut p2_head) = match plan_e2_side {
        Side::U => (p2u, p2v),
        Side::V => (p2v, p2u),
    };
    // landing at the iff's own right vertex mirrors the left-vertex rule
    let direct = crossings.is_empty();
    if direct {
        std::mem::swap(&mut p2_tail, &mut p2_head);
    }
    if flip_mask >> crossings.len() & 1 == 1 {
        std::mem::swap(&mut p2_tail, &mut p2_head);
    }
    let e2_new = b.connect(
        up,
        p2_head,
        ed2.weight.clone() * up_w,
        &format!("{prov}/e2-head"),
    );
    let e2_tail = b.connect(lo, p2_tail, Rat::one(), &format!("{prov}/e2-tail"));
    rep.map.insert(plan_e2, vec![e2_new, e2_tail]);
    rep
}

/// Synchronizes an edge with itself (the loop-avoidance trick): the iff's
/// two vertices both land on the edge, turning a loop into a plain cycle.
/// The right vertex must land from the side its stubs open into, so both
/// orientations are tried against the planarity check.
fn apply_self_sync(b: &mut Builder, mode: Mode, edge: usize, prov: &str) -> Replacements {
    for flip in [false, true] {
        let mut trial = b.clone();
        let rep = try_self_sync(&mut trial, mode, edge, prov, flip);
        if trial.check_planar().is_ok() {
            *b = trial;
            return rep;
        }
    }
    panic!("self-synchronization of edge {edge} failed to embed");
}

fn try_self_sync(
    b: &mut Builder,
    mode: Mode,
    edge: usize,
    prov: &str,
    flip: bool,
) -> Replacements {
    let mut rep = Replacements::default();
    let iff = build_iff(b, mode, prov);
    let ed = b.edge_ref(edge).clone();
    let (pu, pv) = b.cut_edge(edge);
    b.connect(iff.l1, pv, Rat::one(), &format!("{prov}/h1"));
    let h2 = b.connect(iff.l2, pu, ed.weight.clone(), &format!("{prov}/h2"));

    let (qa, qb) = b.cut_edge(h2);
    let (q_head, q_tail) = if flip { (qb, qa) } else { (qa, qb) };
    let h2a = b.connect(
        iff.r1,
        q_head,
        ed.weight.clone() * iff.r1_mult.clone(),
        &format!("{prov}/h2a"),
    );
    let h2b = b.connect(iff.r2, q_tail, Rat::one(), &format!("{prov}/h2b"));
    rep.map.insert(edge, vec![h2a, h2b]);
    rep
}

/// Applies a validated splice plan to an embedded graph, returning the new
/// embedding and where the synchronized edges went (dense ids).
pub fn apply_splice_plan(
    e: &Embedded,
    plan: &SplicePlan,
    mode: Mode,
) -> Result<(Embedded, HashMap<usize, EdgeId>)> {
    let mut b = Builder::from_embedded(e, "host");
    let crossings: Vec<(usize, Side)> =
        plan.crossings.iter().map(|&(r, s)| (r.0, s)).collect();
    let rep = apply_extended_iff(
        &mut b,
        mode,
        plan.e1.0,
        plan.e1_side,
        &crossings,
        plan.e2.0,
        plan.e2_side,
        "iff",
    );
    b.check_planar()?;
    let snap = b.snapshot();
    let out = Embedded::new(snap.graph.clone(), snap.rotation.clone())?;
    let mapped = rep
        .map
        .iter()
        .map(|(&old, pieces)| (old, snap.edge_to_dense[&pieces[0]]))
        .collect();
    Ok((out, mapped))
}

// ---------------------------------------------------------------------------
// compilation

#[derive(Clone, Debug)]
pub struct CompiledReduction {
    pub embedded: Embedded,
    pub mode: Mode,
    /// Accumulated factor: udet(input) = udet(output) / scale for the
    /// cubicization; 1 for plain compilation.
    pub scale: Rat,
    pub provenance: ProvenanceMaps,
}

/// A corridor routed between two families of equivalent edges: the chosen
/// representative on each end, its body-facing dart side, and the crossings.
struct RoutedCorridor {
    e1: usize,
    e1_side: Side,
    crossings: Vec<(usize, Side)>,
    e2: usize,
    e2_side: Side,
}

/// Routes the shortest corridor between any edge of `set1` and any edge of
/// `set2` by BFS in the dual of the current snapshot. Distinct components
/// connect directly (the plane's outer region is common). Crossing a target
/// edge never happens: its face terminates the search first.
fn route(b: &Builder, set1: &[usize], set2: &[usize]) -> Result<RoutedCorridor> {
    let snap = b.snapshot();
    let fs = trace_faces(&snap.graph, &snap.rotation)?;
    let dense1: Vec<EdgeId> = set1.iter().map(|e| snap.edge_to_dense[e]).collect();
    let dense2: Vec<EdgeId> = set2.iter().map(|e| snap.edge_to_dense[e]).collect();
    let (_, comp_of) = snap.graph.components();
    let c1 = comp_of[snap.graph.edge(dense1[0]).u.0];
    let c2 = comp_of[snap.graph.edge(dense2[0]).u.0];
    if c1 != c2 {
        // separate components share the outer region; connect through the
        // roomiest face on each side so nothing gets walled in
        let pick = |dense: &[EdgeId]| {
            let mut best: Option<(usize, EdgeId, Side)> = None;
            for &d in dense {
                for side in [Side::U, Side::V] {
                    let f = fs.face_of(crate::graph::EdgeEnd::new(d, side));
                    let len = fs.faces[f].len();
                    if best.map(|(l, _, _)| len > l).unwrap_or(true) {
                        best = Some((len, d, side));
                    }
                }
            }
            let (_, d, side) = best.expect("nonempty family");
            (d, side)
        };
        let (d1, e1_side) = pick(&dense1);
        let (d2, e2_side) = pick(&dense2);
        return Ok(RoutedCorridor {
            e1: snap.dense_to_edge[d1.0],
            e1_side,
            crossings: vec![],
            e2: snap.dense_to_edge[d2.0],
            e2_side,
        });
    }
    let nf = fs.faces.len();
    let goal = |f: usize| {
        for &d2 in &dense2 {
            for side in [Side::U, Side::V] {
                if fs.face_of(crate::graph::EdgeEnd::new(d2, side)) == f {
                    return Some((d2, side));
                }
            }
        }
        None
    };
    // crossing-free corridors: among all shared faces take the roomiest,
    // which keeps later corridors from being walled in
    {
        let mut best: Option<(usize, EdgeId, Side, EdgeId, Side)> = None;
        for &d1 in &dense1 {
            for side in [Side::U, Side::V] {
                let f = fs.face_of(crate::graph::EdgeEnd::new(d1, side));
                if let Some((d2, s2)) = goal(f) {
                    let len = fs.faces[f].len();
                    if best.map(|(l, ..)| len > l).unwrap_or(true) {
                        best = Some((len, d1, side, d2, s2));
                    }
                }
            }
        }
        if let Some((_, d1, s1, d2, s2)) = best {
            return Ok(RoutedCorridor {
                e1: snap.dense_to_edge[d1.0],
                e1_side: s1,
                crossings: vec![],
                e2: snap.dense_to_edge[d2.0],
                e2_side: s2,
            });
        }
    }
    // face -> (previous face, crossed edge, approach side)
    let mut prev: Vec<Option<(usize, EdgeId, Side)>> = vec![None; nf];
    let mut start_of: Vec<Option<(EdgeId, Side)>> = vec![None; nf];
    let mut seen = vec![false; nf];
    let mut queue = VecDeque::new();
    for &d1 in &dense1 {
        for side in [Side::U, Side::V] {
            let f = fs.face_of(crate::graph::EdgeEnd::new(d1, side));
            if !seen[f] {
                seen[f] = true;
                start_of[f] = Some((d1, side));
                queue.push_back(f);
            }
        }
    }
    let mut target = None;
    'bfs: while let Some(f) = queue.pop_front() {
        if let Some((d2, s2)) = goal(f) {
            target = Some((f, d2, s2));
            break 'bfs;
        }
        // explore crossable edges on this face's boundary in dart order
        for dart in &fs.faces[f].darts {
            let r = dart.edge;
            if dense1.contains(&r) || dense2.contains(&r) {
                continue;
            }
            let f_next = fs.face_of(dart.reversed());
            if !seen[f_next] {
                seen[f_next] = true;
                prev[f_next] = Some((f, r, dart.side));
                queue.push_back(f_next);
            }
        }
    }
    let Some((ft, d2, e2_side)) = target else {
        return Err(Error::RoutingNotPlanar(
            "no corridor found in the dual graph".into(),
        ));
    };
    let mut crossings_rev: Vec<(usize, Side)> = Vec::new();
    let mut f = ft;
    while let Some((pf, r, approach_side)) = prev[f] {
        crossings_rev.push((snap.dense_to_edge[r.0], approach_side));
        f = pf;
    }
    crossings_rev.reverse();
    let (d1, e1_side) = start_of[f].expect("walked back to a start face");
    Ok(RoutedCorridor {
        e1: snap.dense_to_edge[d1.0],
        e1_side,
        crossings: crossings_rev,
        e2: snap.dense_to_edge[d2.0],
        e2_side,
    })
}

/// Compiles a 3-CNF formula into a planar embedded graph: one variable
/// gadget per variable, one clause gadget per clause, one extended iff per
/// literal occurrence, loops self-synchronized away.
pub fn compile(phi: &CnfFormula, mode: Mode) -> Result<CompiledReduction> {
    let mut b = Builder::new();
    let vars: Vec<_> = (1..=phi.variable_count)
        .map(|i| build_variable(&mut b, &format!("var{i}")))
        .collect();
    let clauses: Vec<_> = (0..phi.clause_count())
        .map(|j| build_clause(&mut b, mode, &format!("clause{j}")))
        .collect();

    // synchronization targets: every edge of a synchronized cycle is an
    // equivalent splice target, so track the whole segment families and let
    // the router pick the nearest representative
    let mut pos_target: Vec<Vec<usize>> = vars.iter().map(|v| vec![v.pos_edge]).collect();
    let mut neg_target: Vec<Vec<usize>> = vars.iter().map(|v| vec![v.neg_edge]).collect();
    let mut literal_edges: Vec<[Vec<usize>; 3]> = clauses
        .iter()
        .map(|c| c.literal_edges.map(|e| vec![e]))
        .collect();
    let mut spliced = vec![[false; 2]; phi.variable_count];

    // insert the cheapest pending occurrence first: corridor crossings
    // multiply the cover count of the oracle that validates the output, so
    // the scheduler keeps them minimal (ties fall back to clause order)
    let mut pending: Vec<(usize, usize)> = (0..phi.clause_count())
        .flat_map(|j| (0..3).map(move |k| (j, k)))
        .collect();
    while !pending.is_empty() {
        let mut best: Option<(usize, RoutedCorridor, (usize, usize))> = None;
        for &(j, k) in &pending {
            let lit = phi.clauses[j][k];
            let target = if lit.negated {
                &neg_target[lit.var - 1]
            } else {
                &pos_target[lit.var - 1]
            };
            let routed = route(&b, &literal_edges[j][k], target)?;
            let cost = routed.crossings.len();
            if best.as_ref().map(|(c, _, _)| cost < *c).unwrap_or(true) {
                let replace = (cost, routed, (j, k));
                best = Some(replace);
                if cost == 0 {
                    break;
                }
            }
        }
        let (cost, routed, (j, k)) = best.expect("pending nonempty");
        if std::env::var("UCOUNT_DEBUG_ROUTE").is_ok() {
            eprintln!("occ {j}.{k}: crossings={cost}");
        }
        let lit = phi.clauses[j][k];
        let rep = apply_extended_iff(
            &mut b,
            mode,
            routed.e1,
            routed.e1_side,
            &routed.crossings,
            routed.e2,
            routed.e2_side,
            &format!("occ{j}.{k}"),
        );
        b.check_planar()?;
        spliced[lit.var - 1][lit.negated as usize] = true;
        for t in pos_target.iter_mut().chain(neg_target.iter_mut()) {
            rep.resolve_set(t);
        }
        for le in literal_edges.iter_mut() {
            for t in le.iter_mut() {
                rep.resolve_set(t);
            }
        }
        pending.retain(|&oc| oc != (j, k));
    }

    // loops of unused polarities are synchronized with themselves
    for i in 0..phi.variable_count {
        for (neg, target) in [(false, &mut pos_target), (true, &mut neg_target)] {
            if !spliced[i][neg as usize] {
                let e = target[i][0];
                let rep = apply_self_sync(&mut b, mode, e, &format!("selfsync{}{}", i + 1, neg));
                b.check_planar()?;
                rep.resolve_set(&mut target[i]);
            }
        }
    }

    let (embedded, provenance) = b.finish()?;
    Ok(CompiledReduction {
        embedded,
        mode,
        scale: Rat::one(),
        provenance,
    })
}

// ---------------------------------------------------------------------------
// cubicization

/// Replaces every degree-4 vertex by the cubic degree-4 vertex gadget and
/// pads degree-2 vertices to cubic with null edges. Determinant-mode
/// semantics: udet(output) = scale * udet(input) with scale = (-4)^k for k
/// replacements.
pub fn cubicize(e: &Embedded) -> Result<CompiledReduction> {
    for v in e.graph.vertices() {
        if e.graph.degree(v) > 4 {
            return Err(Error::DegreeTooHigh(v.0, e.graph.degree(v)));
        }
    }
    let mut b = Builder::from_embedded(e, "host");
    let mut k = 0usize;

    // degree-4 replacements
    let deg4: Vec<usize> = e
        .graph
        .vertices()
        .filter(|&v| e.graph.degree(v) == 4)
        .map(|v| v.0)
        .collect();
    for v in deg4 {
        let inst = build_deg4(&mut b, &format!("deg4@{v}"));
        let slots = b.rotation_ends(v);
        assert_eq!(slots.len(), 4);
        for (i, (edge, side)) in slots.into_iter().enumerate() {
            b.reattach_end(edge, side, inst.stubs_ccw[i]);
        }
        b.delete_vertex(v);
        b.check_planar()?;
        k += 1;
    }

    // pad degree-2 vertices in pairs along common faces
    loop {
        let needy_total = b
            .live_vertices()
            .filter(|&v| b.live_degree(v) == 2)
            .count();
        if needy_total == 0 {
            break;
        }
        let snap = b.snapshot();
        let fs = trace_faces(&snap.graph, &snap.rotation)?;
        let mut inserted = false;
        'faces: for face in &fs.faces {
            // walk positions of needy vertices: dart i leaves vertex_i
            let mut picks: Vec<(usize, usize)> = Vec::new(); // (walk pos, builder vertex)
            for (pos, dart) in face.darts.iter().enumerate() {
                let dv = snap.graph.end_vertex(*dart);
                let bv = snap.dense_to_vert[dv.0];
                if b.live_degree(bv) == 2 && !picks.iter().any(|&(_, w)| w == bv) {
                    picks.push((pos, bv));
                    if picks.len() == 2 {
                        break;
                    }
                }
            }
            if picks.len() == 2 {
                let null = build_null(&mut b, &format!("pad{k}"));
                let pends = [b.pend(), b.pend()];
                for (&(pos, bv), &p) in picks.iter().zip(pends.iter()) {
                    // the walk leaves bv by face.darts[pos]; insert the new
                    // end just before that dart in the rotation
                    let leave = face.darts[pos];
                    let builder_edge = snap.dense_to_edge[leave.edge.0];
                    let slot_pos = b.slot_position(bv, builder_edge, leave.side);
                    b.insert_pending_at(bv, slot_pos, p);
                }
                b.connect(pends[0], null.west, Rat::one(), "pad-a");
                b.connect(pends[1], null.east, Rat::one(), "pad-b");
                b.check_planar()?;
                inserted = true;
                break 'faces;
            }
        }
        if !inserted {
            return Err(Error::PaddingFailed(format!(
                "{needy_total} degree-2 vertices share no face in pairs"
            )));
        }
    }

    for v in b.live_vertices().collect::<Vec<_>>() {
        let d = b.live_degree(v);
        if d != 3 {
            return Err(Error::PaddingFailed(format!(
                "vertex {v} has degree {d} after padding"
            )));
        }
    }

    let (embedded, provenance) = b.finish()?;
    let mut scale = Rat::one();
    for _ in 0..k {
        scale *= rat(-4);
    }
    Ok(CompiledReduction {
        embedded,
        mode: Mode::Det,
        scale,
        provenance,
    })
}

/// Provenance sidecar JSON for a compiled reduction.
pub fn provenance_json(c: &CompiledReduction) -> String {
    let verts: BTreeMap<String, String> = c
        .provenance
        .vertices
        .iter()
        .enumerate()
        .map(|(i, p)| (i.to_string(), p.clone()))
        .collect();
    let edges: BTreeMap<String, String> = c
        .provenance
        .edges
        .iter()
        .enumerate()
        .map(|(i, p)| (i.to_string(), p.clone()))
        .collect();
    serde_json::to_string_pretty(&serde_json::json!({
        "mode": c.mode.name(),
        "scale": crate::num::format_rat(&c.scale),
        "vertices": verts,
        "edges": edges,
    }))
    .expect("serialization cannot fail")
}
