//! Degree-constrained subgraph enumeration: the search engine behind cycle
//! covers (target degree 2), perfect matchings (target degree 1) and gadget
//! signature tables (stubs add optional half-edges).
//!
//! The search is a depth-first scan over edge/stub decisions with
//! unit-propagation pruning: a vertex whose chosen degree exceeds its target,
//! or whose chosen + undecided degree falls short of it, kills the branch;
//! saturated or forced vertices decide their remaining items immediately.
//! With a fixed vertex and edge order the emission order is deterministic.

use std::ops::ControlFlow;
use std::time::Instant;

use num_traits::One;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Multigraph, VertexId};
use crate::num::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Undecided,
    In,
    Out,
}

/// An optional half-edge at `vertex`; `mult` scales the weight of any
/// configuration that uses it.
#[derive(Clone, Debug)]
pub struct StubItem {
    pub vertex: VertexId,
    pub mult: Rat,
}

/// One enumerated configuration: chosen edges plus chosen stubs, with the
/// weight product (stub multipliers included).
#[derive(Clone, Debug)]
pub struct Config {
    pub edges: Vec<EdgeId>,
    pub stubs: Vec<usize>,
    pub weight: Rat,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    pub deadline: Option<Instant>,
}

impl Budget {
    pub fn none() -> Self {
        Budget { deadline: None }
    }
    pub fn with_deadline(deadline: Instant) -> Self {
        Budget {
            deadline: Some(deadline),
        }
    }
}

#[derive(Clone)]
pub struct DegreeSearch<'g> {
    g: &'g Multigraph,
    stubs: Vec<StubItem>,
    target: Vec<u8>,
    /// per vertex: (item, contribution); loops appear once with weight 2
    items_at: Vec<Vec<(u32, u8)>>,
    n_items: usize,
}

/// Union-find with union by size and an undo log (no path compression, so
/// unions can be rolled back in reverse order).
#[derive(Clone)]
struct RollbackDsu {
    parent: Vec<u32>,
    size: Vec<u32>,
    log: Vec<u32>, // roots that were attached, in order
}

impl RollbackDsu {
    fn new(n: usize) -> Self {
        RollbackDsu {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            log: Vec::new(),
        }
    }
    fn find(&self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            x = self.parent[x as usize];
        }
        x
    }
    /// Returns false when both were already connected (a cycle closes).
    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (small, large) = if self.size[ra as usize] <= self.size[rb as usize] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small as usize] = large;
        self.size[large as usize] += self.size[small as usize];
        self.log.push(small);
        true
    }
    fn mark(&self) -> usize {
        self.log.len()
    }
    fn rollback(&mut self, mark: usize) {
        while self.log.len() > mark {
            let small = self.log.pop().unwrap();
            let large = self.parent[small as usize];
            self.parent[small as usize] = small;
            self.size[large as usize] -= self.size[small as usize];
        }
    }
}

#[derive(Clone)]
struct State {
    status: Vec<Status>,
    chosen: Vec<u16>,
    undec: Vec<u16>,
    trail: Vec<u32>,
    // incremental cover statistics
    dsu: RollbackDsu,
    dsu_marks: Vec<(u32, usize)>, // (trail index of the In item, dsu mark)
    cycles: u32,
    cycle_trail: Vec<u32>, // trail indices of items that closed a cycle
    weight: Rat,
    weight_trail: Vec<(u32, Rat)>, // (trail index, weight before the mult)
}

impl<'g> DegreeSearch<'g> {
    pub fn cycle_covers(g: &'g Multigraph) -> Self {
        Self::new(g, vec![], vec![2; g.n_vertices()])
    }

    pub fn perfect_matchings(g: &'g Multigraph) -> Self {
        Self::new(g, vec![], vec![1; g.n_vertices()])
    }

    pub fn with_stubs(g: &'g Multigraph, stubs: Vec<StubItem>) -> Self {
        let t = vec![2; g.n_vertices()];
        Self::new(g, stubs, t)
    }

    pub fn new(g: &'g Multigraph, stubs: Vec<StubItem>, target: Vec<u8>) -> Self {
        let m = g.n_edges();
        let mut items_at = vec![Vec::new(); g.n_vertices()];
        for e in g.edges() {
            if e.is_loop() {
                items_at[e.u.0].push((e.id.0 as u32, 2u8));
            } else {
                items_at[e.u.0].push((e.id.0 as u32, 1u8));
                items_at[e.v.0].push((e.id.0 as u32, 1u8));
            }
        }
        for (k, s) in stubs.iter().enumerate() {
            items_at[s.vertex.0].push(((m + k) as u32, 1u8));
        }
        DegreeSearch {
            g,
            n_items: m + stubs.len(),
            stubs,
            target,
            items_at,
        }
    }

    fn initial_state(&self) -> State {
        let n = self.g.n_vertices();
        let mut undec = vec![0u16; n];
        for (v, items) in self.items_at.iter().enumerate() {
            undec[v] = items.iter().map(|&(_, c)| c as u16).sum();
        }
        State {
            status: vec![Status::Undecided; self.n_items],
            chosen: vec![0; n],
            undec,
            trail: Vec::new(),
            dsu: RollbackDsu::new(n),
            dsu_marks: Vec::new(),
            cycles: 0,
            cycle_trail: Vec::new(),
            weight: Rat::one(),
            weight_trail: Vec::new(),
        }
    }

    fn item_vertices(&self, item: u32) -> (VertexId, Option<VertexId>, u8) {
        let m = self.g.n_edges();
        if (item as usize) < m {
            let e = self.g.edge(EdgeId(item as usize));
            if e.is_loop() {
                (e.u, None, 2)
            } else {
                (e.u, Some(e.v), 1)
            }
        } else {
            (self.stubs[item as usize - m].vertex, None, 1)
        }
    }

    fn decide(&self, st: &mut State, item: u32, put_in: bool, dirty: &mut Vec<usize>) -> bool {
        use num_traits::One;
        debug_assert_eq!(st.status[item as usize], Status::Undecided);
        st.status[item as usize] = if put_in { Status::In } else { Status::Out };
        let trail_idx = st.trail.len() as u32;
        st.trail.push(item);
        if put_in {
            let w = self.item_weight(item);
            if !w.is_one() {
                st.weight_trail.push((trail_idx, st.weight.clone()));
                st.weight *= w;
            }
            if (item as usize) < self.g.n_edges() {
                let e = self.g.edge(EdgeId(item as usize));
                if e.is_loop() {
                    st.cycles += 1;
                    st.cycle_trail.push(trail_idx);
                } else {
                    let mark = st.dsu.mark();
                    if st.dsu.union(e.u.0 as u32, e.v.0 as u32) {
                        st.dsu_marks.push((trail_idx, mark));
                    } else {
                        st.cycles += 1;
                        st.cycle_trail.push(trail_idx);
                    }
                }
            }
        }
        let (a, b, c) = self.item_vertices(item);
        // complete all counter updates before judging feasibility, or the
        // unwind would restore vertices that were never touched
        let mut ok = true;
        for v in std::iter::once(a).chain(b) {
            st.undec[v.0] -= c as u16;
            if put_in {
                st.chosen[v.0] += c as u16;
            }
            dirty.push(v.0);
        }
        for v in std::iter::once(a).chain(b) {
            let t = self.target[v.0] as u16;
            if st.chosen[v.0] > t || st.chosen[v.0] + st.undec[v.0] < t {
                ok = false;
            }
        }
        ok
    }

    fn propagate(&self, st: &mut State, dirty: &mut Vec<usize>) -> bool {
        while let Some(v) = dirty.pop() {
            let t = self.target[v] as u16;
            if st.chosen[v] > t || st.chosen[v] + st.undec[v] < t {
                return false;
            }
            if st.undec[v] == 0 {
                continue;
            }
            let force_in = st.chosen[v] + st.undec[v] == t;
            let force_out = st.chosen[v] == t;
            if !force_in && !force_out {
                continue;
            }
            // decide every undecided item at v
            let items: Vec<u32> = self.items_at[v]
                .iter()
                .map(|&(i, _)| i)
                .filter(|&i| st.status[i as usize] == Status::Undecided)
                .collect();
            for i in items {
                if !self.decide(st, i, force_in, dirty) {
                    return false;
                }
            }
        }
        true
    }

    fn unwind(&self, st: &mut State, mark: usize) {
        while st.trail.len() > mark {
            let trail_idx = (st.trail.len() - 1) as u32;
            let item = st.trail.pop().unwrap();
            let (a, b, c) = self.item_vertices(item);
            let was_in = st.status[item as usize] == Status::In;
            if was_in {
                if let Some(&(ti, _)) = st.weight_trail.last() {
                    if ti == trail_idx {
                        st.weight = st.weight_trail.pop().unwrap().1;
                    }
                }
                if let Some(&ti) = st.cycle_trail.last() {
                    if ti == trail_idx {
                        st.cycle_trail.pop();
                        st.cycles -= 1;
                    }
                }
                if let Some(&(ti, dsu_mark)) = st.dsu_marks.last() {
                    if ti == trail_idx {
                        st.dsu_marks.pop();
                        st.dsu.rollback(dsu_mark);
                    }
                }
            }
            for v in std::iter::once(a).chain(b) {
                st.undec[v.0] += c as u16;
                if was_in {
                    st.chosen[v.0] -= c as u16;
                }
            }
            st.status[item as usize] = Status::Undecided;
        }
    }

    fn item_weight(&self, item: u32) -> &Rat {
        let m = self.g.n_edges();
        if (item as usize) < m {
            &self.g.edge(EdgeId(item as usize)).weight
        } else {
            &self.stubs[item as usize - m].mult
        }
    }

    fn branch_item(&self, st: &State, hint: &mut usize) -> Option<u32> {
        let n = self.g.n_vertices();
        while *hint < n && st.undec[*hint] == 0 {
            *hint += 1;
        }
        if *hint == n {
            return None;
        }
        self.items_at[*hint]
            .iter()
            .map(|&(i, _)| i)
            .find(|&i| st.status[i as usize] == Status::Undecided)
    }

    fn emit_into(&self, st: &State, out: &mut Config) {
        use num_traits::One;
        let m = self.g.n_edges();
        out.edges.clear();
        out.stubs.clear();
        out.weight = Rat::one();
        for (i, s) in st.status.iter().enumerate() {
            if *s != Status::In {
                continue;
            }
            if i < m {
                out.edges.push(EdgeId(i));
                let w = &self.g.edge(EdgeId(i)).weight;
                if !w.is_one() {
                    out.weight *= w;
                }
            } else {
                out.stubs.push(i - m);
                let w = &self.stubs[i - m].mult;
                if !w.is_one() {
                    out.weight *= w;
                }
            }
        }
    }

    /// Runs the search, invoking `visit` on every valid configuration in
    /// deterministic order. `visit` may stop the search early.
    pub fn for_each(
        &self,
        budget: Budget,
        mut visit: impl FnMut(&Config) -> ControlFlow<()>,
    ) -> Result<()> {
        let mut scratch = Config {
            edges: Vec::new(),
            stubs: Vec::new(),
            weight: Rat::one(),
        };
        self.for_each_state(budget, |search, st| {
            search.emit_into(st, &mut scratch);
            visit(&scratch)
        })
    }

    /// Lean traversal handing the visitor the incrementally maintained
    /// cover statistics: number of closed cycles and the weight product.
    pub fn for_each_stats(
        &self,
        budget: Budget,
        mut visit: impl FnMut(usize, &Rat) -> ControlFlow<()>,
    ) -> Result<()> {
        self.for_each_state(budget, |_, st| visit(st.cycles as usize, &st.weight))
    }

    fn for_each_state(
        &self,
        budget: Budget,
        mut visit: impl FnMut(&Self, &State) -> ControlFlow<()>,
    ) -> Result<()> {
        let mut st = self.initial_state();
        let mut dirty: Vec<usize> = (0..self.g.n_vertices()).collect();
        if !self.propagate(&mut st, &mut dirty) {
            return Ok(());
        }
        let mut counter = 0u64;
        self.dfs(&mut st, 0, budget, &mut counter, &mut visit)
            .map(|_| ())
    }

    fn dfs(
        &self,
        st: &mut State,
        hint0: usize,
        budget: Budget,
        counter: &mut u64,
        visit: &mut impl FnMut(&Self, &State) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>> {
        *counter += 1;
        if *counter % 4096 == 0 {
            if let Some(d) = budget.deadline {
                if Instant::now() > d {
                    return Err(Error::ResourceBound("time budget exceeded".into()));
                }
            }
        }
        let mut hint = hint0;
        let Some(item) = self.branch_item(st, &mut hint) else {
            // fully decided; propagation guarantees all targets are met
            return Ok(visit(self, st));
        };
        for put_in in [true, false] {
            let mark = st.trail.len();
            let mut dirty = Vec::new();
            let ok = self.decide(st, item, put_in, &mut dirty)
                && self.propagate(st, &mut dirty);
            if ok {
                if let ControlFlow::Break(()) = self.dfs(st, hint, budget, counter, visit)? {
                    return Ok(ControlFlow::Break(()));
                }
            }
            self.unwind(st, mark);
        }
        Ok(ControlFlow::Continue(()))
    }

    /// All configurations, collected. Deterministic order.
    pub fn collect_all(&self) -> Vec<Config> {
        let mut out = Vec::new();
        self.for_each(Budget::none(), |c| {
            out.push(c.clone());
            ControlFlow::Continue(())
        })
        .expect("unbounded search cannot hit a budget");
        out
    }

    pub fn first(&self) -> Option<Config> {
        let mut out = None;
        self.for_each(Budget::none(), |c| {
            out = Some(c.clone());
            ControlFlow::Break(())
        })
        .expect("unbounded search cannot hit a budget");
        out
    }

    /// Folds `map` over all configurations and combines with `merge`,
    /// splitting the search over worker threads when the `parallel` feature
    /// is enabled. `merge` must be commutative and associative (exact
    /// arithmetic makes the usual sums order-independent).
    pub fn fold<T: Send + Clone>(
        &self,
        budget: Budget,
        init: T,
        map: impl Fn(&Config) -> T + Sync,
        merge: impl Fn(T, T) -> T + Sync,
    ) -> Result<T>
    where
        Self: Sync,
    {
        let mut scratch = Config {
            edges: Vec::new(),
            stubs: Vec::new(),
            weight: Rat::one(),
        };
        self.fold_states(
            budget,
            init,
            move |search: &Self, st: &State, scr: &mut Config| {
                search.emit_into(st, scr);
                map(scr)
            },
            merge,
            &mut scratch,
        )
    }

    /// Lean fold over (cycle count, weight) pairs.
    pub fn fold_stats<T: Send + Clone>(
        &self,
        budget: Budget,
        init: T,
        map: impl Fn(usize, &Rat) -> T + Sync,
        merge: impl Fn(T, T) -> T + Sync,
    ) -> Result<T> {
        let mut scratch = Config {
            edges: Vec::new(),
            stubs: Vec::new(),
            weight: Rat::one(),
        };
        self.fold_states(
            budget,
            init,
            move |_: &Self, st: &State, _: &mut Config| map(st.cycles as usize, &st.weight),
            merge,
            &mut scratch,
        )
    }

    fn fold_states<T: Send + Clone>(
        &self,
        budget: Budget,
        init: T,
        map: impl Fn(&Self, &State, &mut Config) -> T + Sync,
        merge: impl Fn(T, T) -> T + Sync,
        scratch: &mut Config,
    ) -> Result<T> {
        #[cfg(feature = "parallel")]
        {
            let _ = scratch;
            self.fold_states_par(budget, init, map, merge)
        }
        #[cfg(not(feature = "parallel"))]
        {
            let mut acc = Some(init);
            let mut st = self.initial_state();
            let mut dirty: Vec<usize> = (0..self.g.n_vertices()).collect();
            if !self.propagate(&mut st, &mut dirty) {
                return Ok(acc.take().unwrap());
            }
            let mut counter = 0u64;
            let mut visit = |search: &Self, state: &State| {
                let prev = acc.take().expect("accumulator present");
                acc = Some(merge(prev, map(search, state, scratch)));
                ControlFlow::Continue(())
            };
            self.dfs(&mut st, 0, budget, &mut counter, &mut visit)?;
            Ok(acc.expect("accumulator present"))
        }
    }

    pub fn fold_seq<T>(
        &self,
        budget: Budget,
        init: T,
        map: impl Fn(&Config) -> T,
        merge: impl Fn(T, T) -> T,
    ) -> Result<T> {
        let mut acc = Some(init);
        self.for_each(budget, |c| {
            let prev = acc.take().expect("accumulator always present");
            acc = Some(merge(prev, map(c)));
            ControlFlow::Continue(())
        })?;
        Ok(acc.expect("accumulator always present"))
    }

    #[cfg(feature = "parallel")]
    pub fn fold_par<T: Send + Clone>(
        &self,
        budget: Budget,
        init: T,
        map: impl Fn(&Config) -> T + Sync,
        merge: impl Fn(T, T) -> T + Sync,
    ) -> Result<T> {
        self.fold_states_par(
            budget,
            init,
            move |search: &Self, st: &State, scr: &mut Config| {
                search.emit_into(st, scr);
                map(scr)
            },
            merge,
        )
    }

    #[cfg(feature = "parallel")]
    fn fold_states_par<T: Send + Clone>(
        &self,
        budget: Budget,
        init: T,
        map: impl Fn(&Self, &State, &mut Config) -> T + Sync,
        merge: impl Fn(T, T) -> T + Sync,
    ) -> Result<T> {
        use rayon::prelude::*;

        // carve the search tree into independent subtrees, then scan each
        // sequentially on a worker
        let mut frontier: Vec<State> = Vec::new();
        let mut st = self.initial_state();
        let mut dirty: Vec<usize> = (0..self.g.n_vertices()).collect();
        if !self.propagate(&mut st, &mut dirty) {
            return Ok(init);
        }
        let depth_cap = 10;
        self.split(&mut st, 0, 0, depth_cap, &mut frontier);
        let results: Vec<Result<Option<T>>> = frontier
            .into_par_iter()
            .map(|mut sub| {
                let mut scratch = Config {
                    edges: Vec::new(),
                    stubs: Vec::new(),
                    weight: Rat::one(),
                };
                let mut acc: Option<T> = None;
                let mut counter = 0u64;
                let mut visit = |search: &Self, state: &State| {
                    let mapped = map(search, state, &mut scratch);
                    acc = Some(match acc.take() {
                        None => mapped,
                        Some(prev) => merge(prev, mapped),
                    });
                    ControlFlow::Continue(())
                };
                let _ = self.dfs(&mut sub, 0, budget, &mut counter, &mut visit)?;
                Ok(acc)
            })
            .collect();
        let mut acc = init;
        for r in results {
            if let Some(v) = r? {
                acc = merge(acc, v);
            }
        }
        Ok(acc)
    }

    #[cfg(feature = "parallel")]
    fn split(
        &self,
        st: &mut State,
        hint0: usize,
        depth: usize,
        cap: usize,
        frontier: &mut Vec<State>,
    ) {
        let mut hint = hint0;
        let Some(item) = self.branch_item(st, &mut hint) else {
            frontier.push(st.clone());
            return;
        };
        if depth == cap {
            frontier.push(st.clone());
            return;
        }
        for put_in in [true, false] {
            let mark = st.trail.len();
            let mut dirty = Vec::new();
            let ok = self.decide(st, item, put_in, &mut dirty)
                && self.propagate(st, &mut dirty);
            if ok {
                self.split(st, hint, depth + 1, cap, frontier);
            }
            self.unwind(st, mark);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Multigraph;

    fn path3() -> Multigraph {
        let mut g = Multigraph::new(3);
        g.add_unit_edge(VertexId(0), VertexId(1));
        g.add_unit_edge(VertexId(1), VertexId(2));
        g
    }

    #[test]
    fn cycle_cover_of_path_is_empty() {
        let g = path3();
        assert!(DegreeSearch::cycle_covers(&g).collect_all().is_empty());
    }

    #[test]
    fn c4_has_one_cover() {
        let mut g = Multigraph::new(4);
        for i in 0..4 {
            g.add_unit_edge(VertexId(i), VertexId((i + 1) % 4));
        }
        let covers = DegreeSearch::cycle_covers(&g).collect_all();
        assert_eq!(covers.len(), 1);
        assert_eq!(covers[0].edges.len(), 4);
    }

    #[test]
    fn loop_and_parallel_edges() {
        // vertex with a loop is covered by the loop alone
        let mut g = Multigraph::new(1);
        g.add_unit_edge(VertexId(0), VertexId(0));
        let covers = DegreeSearch::cycle_covers(&g).collect_all();
        assert_eq!(covers.len(), 1);

        // two parallel edges form the unique cover of a 2-vertex graph
        let mut h = Multigraph::new(2);
        h.add_unit_edge(VertexId(0), VertexId(1));
        h.add_unit_edge(VertexId(0), VertexId(1));
        let covers = DegreeSearch::cycle_covers(&h).collect_all();
        assert_eq!(covers.len(), 1);
        assert_eq!(covers[0].edges.len(), 2);
    }

    #[test]
    fn matchings_of_k4() {
        let mut g = Multigraph::new(4);
        for (u, v) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
            g.add_unit_edge(VertexId(u), VertexId(v));
        }
        let m = DegreeSearch::perfect_matchings(&g).collect_all();
        assert_eq!(m.len(), 3);
        let first = DegreeSearch::perfect_matchings(&g).first();
        assert!(first.is_some());
    }

    #[test]
    fn odd_graph_has_no_matching() {
        let g = path3();
        assert!(DegreeSearch::perfect_matchings(&g).collect_all().is_empty());
    }

    #[test]
    fn fold_matches_collect() {
        let e = crate::corpus::cube_q3();
        let n_seq = DegreeSearch::cycle_covers(&e.graph).collect_all().len();
        let n_fold = DegreeSearch::cycle_covers(&e.graph)
            .fold(Budget::none(), 0usize, |_| 1, |a, b| a + b)
            .unwrap();
        assert_eq!(n_seq, n_fold);
        assert_eq!(n_seq, 9); // 6 hamiltonian cycles + 3 pairs of opposite faces
    }
}
