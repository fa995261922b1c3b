//! Rotation systems, face tracing and the Euler planarity check.
//!
//! A rotation system lists, for every vertex, the counterclockwise cyclic
//! order of its incident edge ends. Faces are orbits of the walk rule
//! "arrive at a vertex, leave by the rotation successor of the arriving
//! end"; with counterclockwise rotations this traces every bounded face
//! counterclockwise (interior on the left of each dart) and the unbounded
//! face clockwise. An embedding is accepted as planar exactly when every
//! connected component satisfies V - E + F = 2.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{Dir, Edge, EdgeEnd, EdgeId, Multigraph, Side, VertexId};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RotationSystem {
    /// Per vertex, the ccw cyclic order of incident edge ends.
    pub at: Vec<Vec<EdgeEnd>>,
}

impl RotationSystem {
    pub fn new(n_vertices: usize) -> Self {
        RotationSystem {
            at: vec![Vec::new(); n_vertices],
        }
    }

    /// Builds the rotation at every vertex by sorting incident ends by angle,
    /// for graphs drawn with straight edges at the given coordinates. Loops
    /// and parallel edges are not supported here.
    pub fn from_coordinates(g: &Multigraph, pos: &[(f64, f64)]) -> Self {
        let mut rot = RotationSystem::new(g.n_vertices());
        for v in g.vertices() {
            let mut ends: Vec<(f64, EdgeEnd)> = g
                .incident(v)
                .iter()
                .map(|&end| {
                    let w = g.end_vertex(end.reversed());
                    let dx = pos[w.0].0 - pos[v.0].0;
                    let dy = pos[w.0].1 - pos[v.0].1;
                    (dy.atan2(dx), end)
                })
                .collect();
            ends.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            rot.at[v.0] = ends.into_iter().map(|(_, e)| e).collect();
        }
        rot
    }

    /// Position of `end` in the rotation at its vertex.
    fn position(&self, g: &Multigraph, end: EdgeEnd) -> Option<usize> {
        let v = g.end_vertex(end);
        self.at[v.0].iter().position(|&e| e == end)
    }

    /// Counterclockwise successor of `end` around its vertex.
    pub fn successor(&self, g: &Multigraph, end: EdgeEnd) -> EdgeEnd {
        let v = g.end_vertex(end);
        let list = &self.at[v.0];
        let i = self.position(g, end).expect("end missing from rotation");
        list[(i + 1) % list.len()]
    }
}

/// A face: the cyclic sequence of darts on its boundary walk. The dart
/// `EdgeEnd { edge, side }` leaves the vertex at `side` toward the other end;
/// the face lies on the left of each of its darts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub darts: Vec<EdgeEnd>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.darts.len()
    }
    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct FaceStructure {
    pub faces: Vec<Face>,
    /// dart -> face index, keyed by (edge id, side index).
    face_of_dart: Vec<[usize; 2]>,
}

impl FaceStructure {
    pub fn face_of(&self, dart: EdgeEnd) -> usize {
        self.face_of_dart[dart.edge.0][dart.side.index()]
    }

    /// The two faces incident to an edge (equal for a bridge).
    pub fn faces_of_edge(&self, e: EdgeId) -> (usize, usize) {
        (self.face_of_dart[e.0][0], self.face_of_dart[e.0][1])
    }

    /// Deterministic default outer face: longest boundary walk, ties broken
    /// by lowest face index (trace order).
    pub fn default_outer(&self) -> usize {
        let mut best = 0;
        for (i, f) in self.faces.iter().enumerate() {
            if f.len() > self.faces[best].len() {
                best = i;
            }
        }
        best
    }
}

/// Traces all faces of `g` under `rot`. Requires only that `rot` covers the
/// edge ends exactly; no planarity check.
pub fn trace_faces(g: &Multigraph, rot: &RotationSystem) -> Result<FaceStructure> {
    check_rotation_cover(g, rot)?;
    let m = g.n_edges();
    let mut face_of_dart = vec![[usize::MAX; 2]; m];
    let mut faces = Vec::new();
    for e in 0..m {
        for side in [Side::U, Side::V] {
            let start = EdgeEnd::new(EdgeId(e), side);
            if face_of_dart[e][side.index()] != usize::MAX {
                continue;
            }
            let idx = faces.len();
            let mut walk = Vec::new();
            let mut d = start;
            loop {
                face_of_dart[d.edge.0][d.side.index()] = idx;
                walk.push(d);
                // arrive at the far end of d, leave by the ccw successor
                d = rot.successor(g, d.reversed());
                if d == start {
                    break;
                }
            }
            faces.push(Face { darts: walk });
        }
    }
    Ok(FaceStructure {
        faces,
        face_of_dart,
    })
}

fn check_rotation_cover(g: &Multigraph, rot: &RotationSystem) -> Result<()> {
    if rot.at.len() != g.n_vertices() {
        return Err(Error::IncompleteRotation(format!(
            "rotation covers {} vertices, graph has {}",
            rot.at.len(),
            g.n_vertices()
        )));
    }
    for v in g.vertices() {
        let mut expected: Vec<EdgeEnd> = g.incident(v).to_vec();
        let mut got: Vec<EdgeEnd> = rot.at[v.0].clone();
        expected.sort();
        got.sort();
        if expected != got {
            return Err(Error::IncompleteRotation(format!(
                "vertex {} rotation does not list its incident edge ends exactly",
                v.0
            )));
        }
    }
    Ok(())
}

/// Face-traces the embedding and checks Euler's formula per connected
/// component. Returns the face structure on success.
pub fn validate_embedding(g: &Multigraph, rot: &RotationSystem) -> Result<FaceStructure> {
    let fs = trace_faces(g, rot)?;
    let (n_comp, comp) = g.components();
    let mut v_count = vec![0usize; n_comp];
    let mut e_count = vec![0usize; n_comp];
    let mut f_seen = vec![std::collections::HashSet::new(); n_comp];
    for v in g.vertices() {
        v_count[comp[v.0]] += 1;
    }
    for e in g.edges() {
        e_count[comp[e.u.0]] += 1;
    }
    for (i, f) in fs.faces.iter().enumerate() {
        let c = comp[g.end_vertex(f.darts[0]).0];
        f_seen[c].insert(i);
    }
    for c in 0..n_comp {
        // isolated vertices form their own trivially planar component
        if e_count[c] == 0 {
            continue;
        }
        let (v, e, f) = (v_count[c], e_count[c], f_seen[c].len());
        let chi = v as i64 - e as i64 + f as i64;
        if chi != 2 {
            return Err(Error::NotPlanarEmbedding { v, e, f, chi });
        }
    }
    Ok(fs)
}

/// An embedded graph: multigraph + validated rotation system + designated
/// outer face.
#[derive(Clone, Debug)]
pub struct Embedded {
    pub graph: Multigraph,
    pub rotation: RotationSystem,
    pub faces: FaceStructure,
    pub outer: usize,
}

impl Embedded {
    pub fn new(graph: Multigraph, rotation: RotationSystem) -> Result<Self> {
        let faces = validate_embedding(&graph, &rotation)?;
        let outer = faces.default_outer();
        Ok(Embedded {
            graph,
            rotation,
            faces,
            outer,
        })
    }

    pub fn with_outer_dart(graph: Multigraph, rotation: RotationSystem, dart: EdgeEnd) -> Result<Self> {
        let faces = validate_embedding(&graph, &rotation)?;
        let outer = faces.face_of(dart);
        Ok(Embedded {
            graph,
            rotation,
            faces,
            outer,
        })
    }

    /// Number of darts of the face walk whose edge orientation points along
    /// the walk. For an even closed walk this parity is traversal-invariant.
    pub fn forward_count(&self, face: usize) -> usize {
        count_forward(&self.graph, &self.faces.faces[face].darts)
    }

    /// Induced subgraph on `keep` (a vertex predicate) with the inherited
    /// rotation, relabelled densely. Returns the new graph, rotation and the
    /// old-vertex -> new-vertex map.
    pub fn induced(
        &self,
        keep: impl Fn(VertexId) -> bool,
    ) -> (Multigraph, RotationSystem, HashMap<usize, usize>) {
        let mut vmap = HashMap::new();
        for v in self.graph.vertices() {
            if keep(v) {
                let nv = vmap.len();
                vmap.insert(v.0, nv);
            }
        }
        let mut g = Multigraph::new(vmap.len());
        let mut emap: HashMap<usize, EdgeId> = HashMap::new();
        for e in self.graph.edges() {
            if vmap.contains_key(&e.u.0) && vmap.contains_key(&e.v.0) {
                let id = g.add_edge_dir(
                    VertexId(vmap[&e.u.0]),
                    VertexId(vmap[&e.v.0]),
                    e.weight.clone(),
                    e.dir,
                );
                emap.insert(e.id.0, id);
            }
        }
        let mut rot = RotationSystem::new(g.n_vertices());
        for v in self.graph.vertices() {
            if let Some(&nv) = vmap.get(&v.0) {
                rot.at[nv] = self.rotation.at[v.0]
                    .iter()
                    .filter_map(|end| {
                        emap.get(&end.edge.0)
                            .map(|&ne| EdgeEnd::new(ne, end.side))
                    })
                    .collect();
            }
        }
        (g, rot, vmap)
    }
}

/// Forward darts of an arbitrary closed walk given as darts.
pub fn count_forward(g: &Multigraph, darts: &[EdgeEnd]) -> usize {
    darts
        .iter()
        .filter(|d| {
            let e: &Edge = g.edge(d.edge);
            match e.dir {
                Some(Dir::UV) => d.side == Side::U,
                Some(Dir::VU) => d.side == Side::V,
                None => false,
            }
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn k4_standard_embedding_has_4_faces() {
        let e = corpus::k4();
        assert_eq!(e.faces.faces.len(), 4);
    }

    #[test]
    fn c4_has_2_faces() {
        let e = corpus::cycle(4);
        assert_eq!(e.faces.faces.len(), 2);
    }

    #[test]
    fn k5_fails_euler() {
        let (g, rot) = corpus::k5_with_rotation();
        match validate_embedding(&g, &rot) {
            Err(Error::NotPlanarEmbedding { .. }) => {}
            other => panic!("expected NotPlanarEmbedding, got {other:?}"),
        }
    }

    #[test]
    fn corrupted_rotation_is_rejected() {
        for make in [
            corpus::k4,
            corpus::triangle_prism,
            corpus::cube_q3,
            corpus::hex_prism,
        ] {
            let e = make();
            assert!(validate_embedding(&e.graph, &e.rotation).is_ok());
            // swapping two entries at a degree-3 vertex flips local order;
            // if this produces a non-planar rotation the check must fail,
            // and for these corpus graphs it always does
            let mut bad = e.rotation.clone();
            let v = (0..bad.at.len()).find(|&v| bad.at[v].len() >= 3).unwrap();
            bad.at[v].swap(0, 1);
            assert!(
                validate_embedding(&e.graph, &bad).is_err(),
                "corrupted rotation accepted"
            );
        }
    }

    #[test]
    fn missing_end_is_incomplete() {
        let e = corpus::k4();
        let mut bad = e.rotation.clone();
        bad.at[0].pop();
        assert!(matches!(
            validate_embedding(&e.graph, &bad),
            Err(Error::IncompleteRotation(_))
        ));
    }
}
