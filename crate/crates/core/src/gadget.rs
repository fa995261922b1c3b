//! Gadgets: graphs with dangling external stubs (and optionally marked
//! interface edges), and their permanental / determinantal signature tables
//! computed by exact enumeration.
//!
//! A cycle cover of a gadget may use an external stub as one of the two
//! cover edges at its vertex; components that end in stubs are open paths
//! and are not counted in the component number |c|. For the determinantal
//! flavor, four or more active stubs make the sign depend on how the open
//! paths pair the stubs; the correction exponent tau is the parity of the
//! number of pair modifications connecting the base pairing to the realized
//! one.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::cover::{DegreeSearch, StubItem};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Multigraph, VertexId};
use crate::num::{sign_pow, Rat};
use crate::oracle::{pairing_parity, Pairing};

#[derive(Clone, Debug)]
pub struct Stub {
    pub name: String,
    pub vertex: VertexId,
    /// Weight multiplier applied when the stub is active (1 unless the
    /// gadget declares otherwise, like the iff gadget's -d stub).
    pub mult: Rat,
}

impl Stub {
    pub fn unit(name: &str, vertex: VertexId) -> Self {
        Stub {
            name: name.to_string(),
            vertex,
            mult: Rat::one(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Gadget {
    pub graph: Multigraph,
    pub external: Vec<Stub>,
    /// Base pairing of external stub names, required for the determinantal
    /// flavor once four or more stubs exist.
    pub base_pairing: Option<Vec<(String, String)>>,
    /// Interface edges named like stubs: a cover's cell key also records
    /// which of these edges it contains (used by the variable and clause
    /// gadgets, whose interface is edge membership rather than stubs).
    pub marked_edges: Vec<(String, EdgeId)>,
}

impl Gadget {
    pub fn new(graph: Multigraph, external: Vec<Stub>) -> Self {
        Gadget {
            graph,
            external,
            base_pairing: None,
            marked_edges: Vec::new(),
        }
    }

    pub fn stub_index(&self, name: &str) -> Option<usize> {
        self.external.iter().position(|s| s.name == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignatureFlavor {
    Permanental,
    Determinantal,
}

/// Signature cell key: sorted names of active stubs and marked edges.
pub type CellKey = Vec<String>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureTable {
    pub flavor: SignatureFlavor,
    /// Nonzero cells only (the zero-omitting convention).
    pub entries: BTreeMap<CellKey, Rat>,
    /// Number of covers per cell, including cells that summed to zero.
    pub counts: BTreeMap<CellKey, usize>,
    /// For determinantal cells with >= 4 active stubs, the base pairing the
    /// tau bookkeeping was taken against.
    pub pairings: BTreeMap<CellKey, Vec<(String, String)>>,
}

impl SignatureTable {
    pub fn value(&self, key: &[&str]) -> Rat {
        let mut k: CellKey = key.iter().map(|s| s.to_string()).collect();
        k.sort();
        self.entries.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn total_cover_count(&self) -> usize {
        self.counts.values().sum()
    }
}

/// Computes the signature table of a gadget by exact enumeration.
pub fn gadget_signature(gadget: &Gadget, flavor: SignatureFlavor) -> Result<SignatureTable> {
    if flavor == SignatureFlavor::Determinantal
        && gadget.external.len() >= 4
        && gadget.base_pairing.is_none()
    {
        return Err(Error::MissingBasePairing(gadget.external.len()));
    }
    let g = &gadget.graph;
    let stubs: Vec<StubItem> = gadget
        .external
        .iter()
        .map(|s| StubItem {
            vertex: s.vertex,
            mult: s.mult.clone(),
        })
        .collect();
    let n = g.n_vertices();
    let search = DegreeSearch::with_stubs(g, stubs);
    let mut entries: BTreeMap<CellKey, Rat> = BTreeMap::new();
    let mut counts: BTreeMap<CellKey, usize> = BTreeMap::new();
    let mut pairings: BTreeMap<CellKey, Vec<(String, String)>> = BTreeMap::new();

    let configs = search.collect_all();
    for c in &configs {
        let mut key: CellKey = c
            .stubs
            .iter()
            .map(|&i| gadget.external[i].name.clone())
            .collect();
        for (name, e) in &gadget.marked_edges {
            if c.edges.contains(e) {
                key.push(name.clone());
            }
        }
        key.sort();

        let value = match flavor {
            SignatureFlavor::Permanental => c.weight.clone(),
            SignatureFlavor::Determinantal => {
                let k = closed_component_count(g, &c.edges, &c.stubs, gadget);
                let tau = if c.stubs.len() >= 4 {
                    let (pc, base, names) = stub_pairings(g, gadget, c)?;
                    pairings.entry(key.clone()).or_insert_with(|| {
                        base.iter()
                            .map(|&(a, b)| (names[a].clone(), names[b].clone()))
                            .collect()
                    });
                    pairing_parity(&pc, &base)?
                } else {
                    0
                };
                sign_pow(n + k + tau) * &c.weight
            }
        };
        *counts.entry(key.clone()).or_insert(0) += 1;
        *entries.entry(key).or_insert_with(Rat::zero) += value;
    }
    entries.retain(|_, v| !v.is_zero());
    Ok(SignatureTable {
        flavor,
        entries,
        counts,
        pairings,
    })
}

/// Components of the chosen edge subgraph that do not touch an active stub
/// (open stub-to-stub paths are not closed cycles).
fn closed_component_count(
    g: &Multigraph,
    edges: &[EdgeId],
    stubs: &[usize],
    gadget: &Gadget,
) -> usize {
    let mut dsu = crate::graph::Dsu::new(g.n_vertices());
    let mut touched = vec![false; g.n_vertices()];
    for &e in edges {
        let ed = g.edge(e);
        touched[ed.u.0] = true;
        touched[ed.v.0] = true;
        dsu.union(ed.u.0, ed.v.0);
    }
    let mut open_roots = std::collections::HashSet::new();
    for &s in stubs {
        let v = gadget.external[s].vertex;
        open_roots.insert(dsu.find(v.0));
        touched[v.0] = true;
    }
    let mut roots = std::collections::HashSet::new();
    for v in 0..g.n_vertices() {
        if touched[v] {
            roots.insert(dsu.find(v));
        }
    }
    roots.iter().filter(|r| !open_roots.contains(r)).count()
}

/// Realized stub pairing of a cover plus the base pairing it is compared
/// against, both as index pairings into the active stub list.
fn stub_pairings(
    g: &Multigraph,
    gadget: &Gadget,
    c: &crate::cover::Config,
) -> Result<(Pairing, Pairing, Vec<String>)> {
    let active: Vec<usize> = c.stubs.clone();
    let names: Vec<String> = active
        .iter()
        .map(|&i| gadget.external[i].name.clone())
        .collect();
    // walk open paths from each active stub to find its partner
    let mut partner: Vec<Option<usize>> = vec![None; active.len()];
    let mut adj: Vec<Vec<EdgeId>> = vec![Vec::new(); g.n_vertices()];
    for &e in &c.edges {
        let ed = g.edge(e);
        adj[ed.u.0].push(e);
        if !ed.is_loop() {
            adj[ed.v.0].push(e);
        }
    }
    let mut stubs_at: Vec<Vec<usize>> = vec![Vec::new(); g.n_vertices()];
    for (k, &i) in active.iter().enumerate() {
        stubs_at[gadget.external[i].vertex.0].push(k);
    }
    for k in 0..active.len() {
        if partner[k].is_some() {
            continue;
        }
        let start_v = gadget.external[active[k]].vertex;
        // a vertex carrying two active stubs pairs them with each other
        if stubs_at[start_v.0].len() == 2 && adj[start_v.0].is_empty() {
            let other = *stubs_at[start_v.0].iter().find(|&&x| x != k).unwrap();
            partner[k] = Some(other);
            partner[other] = Some(k);
            continue;
        }
        // otherwise follow the unique edge path until a stub vertex closes it
        let mut prev_edge: Option<EdgeId> = None;
        let mut at = start_v;
        loop {
            let next_edge = adj[at.0]
                .iter()
                .copied()
                .find(|&e| Some(e) != prev_edge)
                .expect("open path must continue");
            let at_next = g.edge(next_edge).other(at);
            if let Some(&end_stub) = stubs_at[at_next.0]
                .iter()
                .find(|&&x| x != k && partner[x].is_none())
            {
                // path terminates where another active stub sits and the
                // vertex has no further cover edge
                if adj[at_next.0].len() == 1 {
                    partner[k] = Some(end_stub);
                    partner[end_stub] = Some(k);
                    break;
                }
            }
            prev_edge = Some(next_edge);
            at = at_next;
        }
    }
    let mut pc: Pairing = Vec::new();
    for k in 0..active.len() {
        let p = partner[k].expect("all stubs paired");
        if k < p {
            pc.push((k, p));
        }
    }
    // base pairing: restriction of the gadget's declared pairing when it
    // pairs the active set perfectly, else consecutive pairs in name order
    let base = restricted_base(gadget, &names).unwrap_or_else(|| {
        let mut order: Vec<usize> = (0..names.len()).collect();
        order.sort_by(|&a, &b| names[a].cmp(&names[b]));
        order.chunks(2).map(|ch| (ch[0], ch[1])).collect()
    });
    Ok((pc, base, names))
}

fn restricted_base(gadget: &Gadget, names: &[String]) -> Option<Pairing> {
    let bp = gadget.base_pairing.as_ref()?;
    let mut pairs = Vec::new();
    for (a, b) in bp {
        let ia = names.iter().position(|n| n == a);
        let ib = names.iter().position(|n| n == b);
        match (ia, ib) {
            (Some(x), Some(y)) => pairs.push((x, y)),
            (None, None) => {}
            _ => return None, // pairing straddles the active set
        }
    }
    if pairs.len() * 2 == names.len() {
        Some(pairs)
    } else {
        None
    }
}
