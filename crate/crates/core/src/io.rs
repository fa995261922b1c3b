//! JSON wire format for graphs and gadgets.
//!
//! ```json
//! {
//!   "vertices": [0, 1, 2],
//!   "edges": [{"id": 0, "u": 0, "v": 1, "w": "-1/2", "dir": "uv"}],
//!   "rotation": {"0": [[0, 0], [2, 1]]},
//!   "outer_face": [0, 0],
//!   "external": [{"stub": "a", "vertex": 2, "mult": "-1"}],
//!   "base_pairing": [["a", "b"], ["c", "d"]],
//!   "marked_edges": {"x": 0}
//! }
//! ```
//!
//! Weights are exact rational strings. `dir` is `"uv"`, `"vu"` or absent.
//! A rotation entry `[edge, end]` is the edge end at side `end` (0 = u,
//! 1 = v), listed counterclockwise per vertex. `outer_face` designates the
//! face lying to the left of the dart leaving side `end` of `edge`.
//! `external`, `base_pairing` and `marked_edges` appear in gadget files.

use std::collections::BTreeMap;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::embed::{Embedded, RotationSystem};
use crate::error::{Error, Result};
use crate::gadget::{Gadget, Stub};
use crate::graph::{Dir, EdgeEnd, EdgeId, Multigraph, Side, VertexId};
use crate::num::{format_rat, parse_rat};
use crate::skew::SkewMatrix;

#[derive(Serialize, Deserialize, Debug)]
struct EdgeJson {
    id: usize,
    u: usize,
    v: usize,
    w: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    dir: Option<String>,
}

#[derive(Serialize, Deserialize, Debug)]
struct StubJson {
    stub: String,
    vertex: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    mult: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, Default)]
struct FileJson {
    vertices: Vec<usize>,
    edges: Vec<EdgeJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    rotation: Option<BTreeMap<String, Vec<[usize; 2]>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    outer_face: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    external: Option<Vec<StubJson>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    base_pairing: Option<Vec<[String; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    marked_edges: Option<BTreeMap<String, usize>>,
}

/// Everything a graph or gadget file can carry.
#[derive(Clone, Debug, Default)]
pub struct GraphFile {
    pub graph: Multigraph,
    pub rotation: Option<RotationSystem>,
    pub outer_dart: Option<EdgeEnd>,
    pub external: Vec<Stub>,
    pub base_pairing: Option<Vec<(String, String)>>,
    pub marked_edges: Vec<(String, EdgeId)>,
}

impl GraphFile {
    pub fn from_graph(graph: Multigraph) -> Self {
        GraphFile {
            graph,
            ..Default::default()
        }
    }

    pub fn from_embedded(e: &Embedded) -> Self {
        let outer_dart = e.faces.faces[e.outer].darts.first().copied();
        GraphFile {
            graph: e.graph.clone(),
            rotation: Some(e.rotation.clone()),
            outer_dart,
            external: Vec::new(),
            base_pairing: None,
            marked_edges: Vec::new(),
        }
    }

    pub fn from_gadget(g: &Gadget) -> Self {
        GraphFile {
            graph: g.graph.clone(),
            rotation: None,
            outer_dart: None,
            external: g.external.clone(),
            base_pairing: g.base_pairing.clone(),
            marked_edges: g.marked_edges.clone(),
        }
    }

    pub fn to_gadget(&self) -> Gadget {
        Gadget {
            graph: self.graph.clone(),
            external: self.external.clone(),
            base_pairing: self.base_pairing.clone(),
            marked_edges: self.marked_edges.clone(),
        }
    }

    /// Validated embedding; errors if the file has no rotation.
    pub fn to_embedded(&self) -> Result<Embedded> {
        let rot = self.rotation.as_ref().ok_or(Error::MissingEmbedding)?;
        match self.outer_dart {
            Some(d) => Embedded::with_outer_dart(self.graph.clone(), rot.clone(), d),
            None => Embedded::new(self.graph.clone(), rot.clone()),
        }
    }
}

pub fn to_json(file: &GraphFile) -> String {
    let g = &file.graph;
    let edges = g
        .edges()
        .iter()
        .map(|e| EdgeJson {
            id: e.id.0,
            u: e.u.0,
            v: e.v.0,
            w: format_rat(&e.weight),
            dir: e.dir.map(|d| {
                match d {
                    Dir::UV => "uv",
                    Dir::VU => "vu",
                }
                .to_string()
            }),
        })
        .collect();
    let rotation = file.rotation.as_ref().map(|rot| {
        rot.at
            .iter()
            .enumerate()
            .map(|(v, ends)| {
                (
                    v.to_string(),
                    ends.iter().map(|e| [e.edge.0, e.side.index()]).collect(),
                )
            })
            .collect()
    });
    let external = if file.external.is_empty() {
        None
    } else {
        Some(
            file.external
                .iter()
                .map(|s| StubJson {
                    stub: s.name.clone(),
                    vertex: s.vertex.0,
                    mult: if s.mult.is_one() {
                        None
                    } else {
                        Some(format_rat(&s.mult))
                    },
                })
                .collect(),
        )
    };
    let marked = if file.marked_edges.is_empty() {
        None
    } else {
        Some(
            file.marked_edges
                .iter()
                .map(|(n, e)| (n.clone(), e.0))
                .collect(),
        )
    };
    let fj = FileJson {
        vertices: (0..g.n_vertices()).collect(),
        edges,
        rotation,
        outer_face: file.outer_dart.map(|d| [d.edge.0, d.side.index()]),
        external,
        base_pairing: file
            .base_pairing
            .as_ref()
            .map(|bp| bp.iter().map(|(a, b)| [a.clone(), b.clone()]).collect()),
        marked_edges: marked,
    };
    serde_json::to_string_pretty(&fj).expect("serialization cannot fail")
}

pub fn from_json(text: &str) -> Result<GraphFile> {
    let fj: FileJson =
        serde_json::from_str(text).map_err(|e| Error::BadFile(format!("json: {e}")))?;
    // vertices may carry arbitrary distinct labels; remap by position
    let mut vmap = BTreeMap::new();
    for (i, &v) in fj.vertices.iter().enumerate() {
        if vmap.insert(v, i).is_some() {
            return Err(Error::BadFile(format!("duplicate vertex id {v}")));
        }
    }
    let lookup_v = |v: usize| -> Result<VertexId> {
        vmap.get(&v)
            .map(|&i| VertexId(i))
            .ok_or(Error::UnknownVertexId(v))
    };
    let mut g = Multigraph::new(fj.vertices.len());
    let mut emap = BTreeMap::new();
    for e in &fj.edges {
        let dir = match e.dir.as_deref() {
            None => None,
            Some("uv") => Some(Dir::UV),
            Some("vu") => Some(Dir::VU),
            Some(other) => {
                return Err(Error::BadFile(format!("bad dir {other:?} on edge {}", e.id)))
            }
        };
        let id = g.add_edge_dir(lookup_v(e.u)?, lookup_v(e.v)?, parse_rat(&e.w)?, dir);
        if emap.insert(e.id, id).is_some() {
            return Err(Error::BadFile(format!("duplicate edge id {}", e.id)));
        }
    }
    let lookup_e = |e: usize| -> Result<EdgeId> {
        emap.get(&e).copied().ok_or(Error::UnknownEdgeId(e))
    };
    let rotation = match &fj.rotation {
        None => None,
        Some(map) => {
            let mut rot = RotationSystem::new(g.n_vertices());
            for (k, ends) in map {
                let v: usize = k
                    .parse()
                    .map_err(|_| Error::BadFile(format!("bad rotation key {k:?}")))?;
                let v = lookup_v(v)?;
                rot.at[v.0] = ends
                    .iter()
                    .map(|&[e, s]| Ok(EdgeEnd::new(lookup_e(e)?, Side::from_index(s))))
                    .collect::<Result<Vec<_>>>()?;
            }
            Some(rot)
        }
    };
    let outer_dart = match fj.outer_face {
        None => None,
        Some([e, s]) => Some(EdgeEnd::new(lookup_e(e)?, Side::from_index(s))),
    };
    let external = fj
        .external
        .unwrap_or_default()
        .iter()
        .map(|s| {
            Ok(Stub {
                name: s.stub.clone(),
                vertex: lookup_v(s.vertex)?,
                mult: match &s.mult {
                    None => crate::num::Rat::one(),
                    Some(m) => parse_rat(m)?,
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let marked_edges = fj
        .marked_edges
        .unwrap_or_default()
        .iter()
        .map(|(n, &e)| Ok((n.clone(), lookup_e(e)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(GraphFile {
        graph: g,
        rotation,
        outer_dart,
        external,
        base_pairing: fj
            .base_pairing
            .map(|bp| bp.into_iter().map(|[a, b]| (a, b)).collect()),
        marked_edges,
    })
}

/// Matrix files for the `pfaffian` subcommand: a JSON array of rows of
/// rational strings.
pub fn skew_from_json(text: &str) -> Result<SkewMatrix> {
    let rows: Vec<Vec<String>> =
        serde_json::from_str(text).map_err(|e| Error::BadFile(format!("json: {e}")))?;
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    SkewMatrix::from_rows(parsed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::num::{frac, rat};

    #[test]
    fn graph_roundtrip_with_embedding() {
        let e = corpus::cube_q3();
        let mut file = GraphFile::from_embedded(&e);
        file.graph.set_weight(EdgeId(3), frac(-1, 2));
        let text = to_json(&file);
        let back = from_json(&text).unwrap();
        assert_eq!(back.graph.n_vertices(), 8);
        assert_eq!(back.graph.n_edges(), 12);
        assert_eq!(back.graph.edge(EdgeId(3)).weight, frac(-1, 2));
        let emb = back.to_embedded().unwrap();
        assert_eq!(emb.faces.faces.len(), 6);
        assert_eq!(
            emb.outer,
            e.outer,
            "declared outer face must survive the roundtrip"
        );
        // deterministic output
        assert_eq!(text, to_json(&back));
    }

    #[test]
    fn gadget_roundtrip() {
        let mut g = Multigraph::new(2);
        let x = g.add_edge(VertexId(0), VertexId(1), rat(-1));
        let mut gd = Gadget::new(
            g,
            vec![
                Stub::unit("a", VertexId(0)),
                Stub {
                    name: "b".into(),
                    vertex: VertexId(1),
                    mult: rat(-1),
                },
            ],
        );
        gd.base_pairing = Some(vec![("a".into(), "b".into())]);
        gd.marked_edges = vec![("m".into(), x)];
        let text = to_json(&GraphFile::from_gadget(&gd));
        let back = from_json(&text).unwrap().to_gadget();
        assert_eq!(back.external.len(), 2);
        assert_eq!(back.external[1].mult, rat(-1));
        assert_eq!(back.base_pairing.as_ref().unwrap().len(), 1);
        assert_eq!(back.marked_edges, vec![("m".to_string(), x)]);
    }

    #[test]
    fn missing_embedding_is_an_error() {
        let g = corpus::k4().graph;
        let file = GraphFile::from_graph(g);
        assert!(matches!(file.to_embedded(), Err(Error::MissingEmbedding)));
    }

    #[test]
    fn skew_matrix_file() {
        let m = skew_from_json(r#"[["0","1/2"],["-1/2","0"]]"#).unwrap();
        assert_eq!(*m.get(0, 1), frac(1, 2));
        assert!(skew_from_json(r#"[["0","1"],["1","0"]]"#).is_err());
    }
}
