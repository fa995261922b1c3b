//! Mutable embedded multigraphs for the reduction compiler.
//!
//! A `Builder` holds vertices with explicit counterclockwise rotation lists
//! whose entries are either live edge ends or pending slots (future
//! attachment points, invisible to face tracing). All gadget insertion is
//! positional: splicing replaces rotation entries in place, which preserves
//! planarity of the embedding by construction. `snapshot` compacts the live
//! part into a `Multigraph` + `RotationSystem` for face computations and
//! final export.

use std::collections::HashMap;

use num_traits::One;

use crate::embed::{Embedded, RotationSystem};
use crate::error::Result;
use crate::graph::{EdgeEnd, EdgeId, Multigraph, Side, VertexId};
use crate::num::Rat;

/// Pending attachment slot key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pend(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    End(usize, Side),
    Pending(Pend),
}

#[derive(Clone, Debug)]
pub struct BEdge {
    pub u: usize,
    pub v: usize,
    pub weight: Rat,
    pub prov: String,
}

impl BEdge {
    pub fn endpoint(&self, side: Side) -> usize {
        match side {
            Side::U => self.u,
            Side::V => self.v,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Builder {
    rot: Vec<Option<Vec<Slot>>>, // None = deleted vertex
    edges: Vec<Option<BEdge>>,
    vert_prov: Vec<String>,
    pending_at: HashMap<Pend, usize>,
    next_pend: u32,
}

/// Snapshot of the live part, with maps between builder and dense ids.
pub struct Snapshot {
    pub graph: Multigraph,
    pub rotation: RotationSystem,
    /// builder edge id -> dense id
    pub edge_to_dense: HashMap<usize, EdgeId>,
    pub dense_to_edge: Vec<usize>,
    pub vert_to_dense: HashMap<usize, VertexId>,
    pub dense_to_vert: Vec<usize>,
}

impl Builder {
    pub fn new() -> Self {
        Builder::default()
    }

    pub fn vertex(&mut self, prov: &str) -> usize {
        self.rot.push(Some(Vec::new()));
        self.vert_prov.push(prov.to_string());
        self.rot.len() - 1
    }

    pub fn pend(&mut self) -> Pend {
        self.next_pend += 1;
        Pend(self.next_pend - 1)
    }

    /// Adds an edge without placing its rotation entries; the caller must
    /// list both ends in `set_rotation` calls.
    pub fn edge(&mut self, u: usize, v: usize, weight: Rat, prov: &str) -> usize {
        self.edges.push(Some(BEdge {
            u,
            v,
            weight,
            prov: prov.to_string(),
        }));
        self.edges.len() - 1
    }

    pub fn unit_edge(&mut self, u: usize, v: usize, prov: &str) -> usize {
        self.edge(u, v, Rat::one(), prov)
    }

    /// Installs the full ccw rotation of `v`. Registers pending slots.
    pub fn set_rotation(&mut self, v: usize, slots: Vec<Slot>) {
        for s in &slots {
            if let Slot::Pending(p) = s {
                self.pending_at.insert(*p, v);
            }
        }
        self.rot[v] = Some(slots);
    }

    /// The edge end of non-loop edge `e` at vertex `v`.
    pub fn end_at(&self, e: usize, v: usize) -> Slot {
        let ed = self.edges[e].as_ref().unwrap();
        assert_ne!(ed.u, ed.v, "loop ends are ambiguous; name the side");
        if ed.u == v {
            Slot::End(e, Side::U)
        } else {
            assert_eq!(ed.v, v);
            Slot::End(e, Side::V)
        }
    }

    pub fn edge_ref(&self, e: usize) -> &BEdge {
        self.edges[e].as_ref().expect("live edge")
    }

    pub fn pending_vertex(&self, p: Pend) -> usize {
        self.pending_at[&p]
    }

    pub fn vertex_prov(&self, v: usize) -> &str {
        &self.vert_prov[v]
    }

    fn rot_mut(&mut self, v: usize) -> &mut Vec<Slot> {
        self.rot[v].as_mut().expect("live vertex")
    }

    fn replace_slot(&mut self, v: usize, old: Slot, new: Slot) {
        let list = self.rot_mut(v);
        let i = list
            .iter()
            .position(|&s| s == old)
            .unwrap_or_else(|| panic!("slot {old:?} not found at vertex {v}"));
        list[i] = new;
        if let Slot::Pending(p) = old {
            self.pending_at.remove(&p);
        }
        if let Slot::Pending(p) = new {
            self.pending_at.insert(p, v);
        }
    }

    /// Connects two pending slots with a new edge (tail at `pa`).
    pub fn connect(&mut self, pa: Pend, pb: Pend, weight: Rat, prov: &str) -> usize {
        let u = self.pending_at[&pa];
        let v = self.pending_at[&pb];
        let e = self.edge(u, v, weight, prov);
        self.replace_slot(u, Slot::Pending(pa), Slot::End(e, Side::U));
        self.replace_slot(v, Slot::Pending(pb), Slot::End(e, Side::V));
        e
    }

    /// Deletes edge `e`, leaving pending slots in both former positions.
    /// Returns (pend at u side, pend at v side).
    pub fn cut_edge(&mut self, e: usize) -> (Pend, Pend) {
        let ed = self.edges[e].clone().expect("live edge");
        let pu = self.pend();
        let pv = self.pend();
        self.replace_slot(ed.u, Slot::End(e, Side::U), Slot::Pending(pu));
        self.replace_slot(ed.endpoint(Side::V), Slot::End(e, Side::V), Slot::Pending(pv));
        self.edges[e] = None;
        (pu, pv)
    }

    /// Connects a pending slot to where edge `e`'s given side used to attach:
    /// splicing helper. The new edge's tail is at the pending slot's vertex.
    pub fn connect_pend_to_pend(&mut self, pa: Pend, pb: Pend, weight: Rat, prov: &str) -> usize {
        self.connect(pa, pb, weight, prov)
    }

    /// Deletes a vertex; its rotation must contain no live slots.
    pub fn delete_vertex(&mut self, v: usize) {
        let list = self.rot[v].take().expect("live vertex");
        assert!(
            list.is_empty()
                || list.iter().all(|s| matches!(s, Slot::Pending(_))),
            "vertex {v} still has live edge ends"
        );
        for s in list {
            if let Slot::Pending(p) = s {
                self.pending_at.remove(&p);
            }
        }
    }

    /// Inserts a new pending slot into `v`'s rotation at position `pos`
    /// (before the slot currently at `pos`).
    pub fn insert_pending_at(&mut self, v: usize, pos: usize, p: Pend) {
        let list = self.rot_mut(v);
        assert!(pos <= list.len());
        list.insert(pos, Slot::Pending(p));
        self.pending_at.insert(p, v);
    }

    /// Live edge ends at `v` in rotation order.
    pub fn rotation_ends(&self, v: usize) -> Vec<(usize, Side)> {
        self.rot[v]
            .as_ref()
            .expect("live vertex")
            .iter()
            .filter_map(|s| match s {
                Slot::End(e, side) => Some((*e, *side)),
                Slot::Pending(_) => None,
            })
            .collect()
    }

    /// Index of a live end in `v`'s rotation list (pendings counted).
    pub fn slot_position(&self, v: usize, e: usize, side: Side) -> usize {
        self.rot[v]
            .as_ref()
            .expect("live vertex")
            .iter()
            .position(|&s| s == Slot::End(e, side))
            .expect("slot present")
    }

    /// Moves edge `e`'s `side` endpoint onto the pending slot's vertex,
    /// removing the end from its old home.
    pub fn reattach_end(&mut self, e: usize, side: Side, p: Pend) {
        let w = self.pending_at[&p];
        let old_v = self.edges[e].as_ref().expect("live edge").endpoint(side);
        let list = self.rot_mut(old_v);
        let i = list
            .iter()
            .position(|&s| s == Slot::End(e, side))
            .expect("end present at old vertex");
        list.remove(i);
        self.replace_slot(w, Slot::Pending(p), Slot::End(e, side));
        let ed = self.edges[e].as_mut().unwrap();
        match side {
            Side::U => ed.u = w,
            Side::V => ed.v = w,
        }
    }

    pub fn live_edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.edges.len()).filter(|&i| self.edges[i].is_some())
    }

    pub fn live_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.rot.len()).filter(|&i| self.rot[i].is_some())
    }

    /// Degree of a live vertex counting only live edge ends.
    pub fn live_degree(&self, v: usize) -> usize {
        self.rot[v]
            .as_ref()
            .map(|l| l.iter().filter(|s| matches!(s, Slot::End(..))).count())
            .unwrap_or(0)
    }

    pub fn has_pendings(&self) -> bool {
        !self.pending_at.is_empty()
    }

    /// Compacts the live part. Pending slots are skipped; the relative order
    /// of live ends is preserved, so faces of the snapshot are the faces of
    /// the partial embedding.
    pub fn snapshot(&self) -> Snapshot {
        let mut vert_to_dense = HashMap::new();
        let mut dense_to_vert = Vec::new();
        for v in self.live_vertices() {
            vert_to_dense.insert(v, VertexId(dense_to_vert.len()));
            dense_to_vert.push(v);
        }
        let mut g = Multigraph::new(dense_to_vert.len());
        let mut edge_to_dense = HashMap::new();
        let mut dense_to_edge = Vec::new();
        for e in self.live_edges() {
            let ed = self.edges[e].as_ref().unwrap();
            let id = g.add_edge(
                vert_to_dense[&ed.u],
                vert_to_dense[&ed.v],
                ed.weight.clone(),
            );
            edge_to_dense.insert(e, id);
            dense_to_edge.push(e);
        }
        let mut rotation = RotationSystem::new(g.n_vertices());
        for (&bv, &dv) in vert_to_dense.iter() {
            let list = self.rot[bv].as_ref().unwrap();
            rotation.at[dv.0] = list
                .iter()
                .filter_map(|s| match s {
                    Slot::End(e, side) => Some(EdgeEnd::new(edge_to_dense[e], *side)),
                    Slot::Pending(_) => None,
                })
                .collect();
        }
        Snapshot {
            graph: g,
            rotation,
            edge_to_dense,
            dense_to_edge,
            vert_to_dense,
            dense_to_vert,
        }
    }

    /// Asserts the live part is a valid planar embedding; call after every
    /// insertion while compiling.
    pub fn check_planar(&self) -> Result<()> {
        let snap = self.snapshot();
        crate::embed::validate_embedding(&snap.graph, &snap.rotation)?;
        Ok(())
    }

    /// Final export: no pendings may remain. Returns the embedded graph and
    /// the provenance of every dense vertex and edge.
    pub fn finish(&self) -> Result<(Embedded, ProvenanceMaps)> {
        assert!(
            !self.has_pendings(),
            "pending slots remain: {:?}",
            self.pending_at
        );
        let snap = self.snapshot();
        let emb = Embedded::new(snap.graph, snap.rotation)?;
        let vertices = snap
            .dense_to_vert
            .iter()
            .map(|&bv| self.vert_prov[bv].clone())
            .collect();
        let edges = snap
            .dense_to_edge
            .iter()
            .map(|&be| self.edges[be].as_ref().unwrap().prov.clone())
            .collect();
        Ok((emb, ProvenanceMaps { vertices, edges }))
    }

    /// Imports an embedded graph: builder ids equal the dense ids.
    pub fn from_embedded(e: &Embedded, prov: &str) -> Builder {
        let mut b = Builder::new();
        for v in e.graph.vertices() {
            let bv = b.vertex(&format!("{prov}:v{}", v.0));
            debug_assert_eq!(bv, v.0);
        }
        for ed in e.graph.edges() {
            let be = b.edge(
                ed.u.0,
                ed.v.0,
                ed.weight.clone(),
                &format!("{prov}:e{}", ed.id.0),
            );
            debug_assert_eq!(be, ed.id.0);
        }
        for v in e.graph.vertices() {
            let slots = e.rotation.at[v.0]
                .iter()
                .map(|end| Slot::End(end.edge.0, end.side))
                .collect();
            b.set_rotation(v.0, slots);
        }
        b
    }
}

/// Provenance of the exported graph, by dense id.
#[derive(Clone, Debug)]
pub struct ProvenanceMaps {
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    #[test]
    fn build_a_triangle_and_splice() {
        let mut b = Builder::new();
        let v0 = b.vertex("v0");
        let v1 = b.vertex("v1");
        let v2 = b.vertex("v2");
        let e01 = b.unit_edge(v0, v1, "e01");
        let e12 = b.unit_edge(v1, v2, "e12");
        let e20 = b.unit_edge(v2, v0, "e20");
        b.set_rotation(v0, vec![b.end_at(e01, v0), b.end_at(e20, v0)]);
        b.set_rotation(v1, vec![b.end_at(e12, v1), b.end_at(e01, v1)]);
        b.set_rotation(v2, vec![b.end_at(e20, v2), b.end_at(e12, v2)]);
        b.check_planar().unwrap();

        // subdivide e01 through a new vertex
        let (pu, pv) = b.cut_edge(e01);
        let m = b.vertex("mid");
        let pm1 = b.pend();
        let pm2 = b.pend();
        b.set_rotation(m, vec![Slot::Pending(pm1), Slot::Pending(pm2)]);
        b.connect(pu, pm1, rat(1), "half1");
        b.connect(pv, pm2, rat(1), "half2");
        b.check_planar().unwrap();

        let (emb, prov) = b.finish().unwrap();
        assert_eq!(emb.graph.n_vertices(), 4);
        assert_eq!(emb.graph.n_edges(), 4);
        assert_eq!(emb.faces.faces.len(), 2);
        assert_eq!(prov.vertices.len(), 4);
    }

    #[test]
    fn from_embedded_roundtrip() {
        let e = crate::corpus::cube_q3();
        let b = Builder::from_embedded(&e, "cube");
        b.check_planar().unwrap();
        let (emb, _) = b.finish().unwrap();
        assert_eq!(emb.faces.faces.len(), 6);
        assert_eq!(crate::oracle::udet(&emb.graph), rat(-3));
    }
}
