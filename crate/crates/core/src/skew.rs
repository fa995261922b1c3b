//! Skew-symmetric rational matrices and the oriented-adjacency construction.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{Dir, Multigraph, Side};
use crate::num::Rat;

/// An n x n skew-symmetric matrix of exact rationals. Construction enforces
/// `a[i][j] == -a[j][i]` and a zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewMatrix {
    n: usize,
    entries: Vec<Rat>,
}

impl SkewMatrix {
    pub fn zero(n: usize) -> Self {
        SkewMatrix {
            n,
            entries: vec![Rat::zero(); n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let n = rows.len();
        let mut m = SkewMatrix::zero(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSkewSymmetric(i, row.len()));
            }
            for (j, x) in row.iter().enumerate() {
                m.entries[i * n + j] = x.clone();
            }
        }
        m.check()?;
        Ok(m)
    }

    fn check(&self) -> Result<()> {
        for i in 0..self.n {
            for j in i..self.n {
                let a = &self.entries[i * self.n + j];
                let b = &self.entries[j * self.n + i];
                if *a != -b.clone() {
                    return Err(Error::NotSkewSymmetric(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.n + j]
    }

    /// Sets `a[i][j] = x` and `a[j][i] = -x`.
    pub fn set(&mut self, i: usize, j: usize, x: Rat) {
        assert_ne!(i, j, "diagonal must stay zero");
        self.entries[j * self.n + i] = -x.clone();
        self.entries[i * self.n + j] = x;
    }

    /// Entrywise reciprocal of the nonzero entries. Skew-symmetry is
    /// preserved since 1/(-a) = -(1/a).
    pub fn invert_entries(&self) -> SkewMatrix {
        let mut out = SkewMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let a = self.get(i, j);
                if !a.is_zero() {
                    out.entries[i * self.n + j] = a.recip();
                }
            }
        }
        out
    }

    /// Swaps rows i,j and columns i,j (conjugation by a transposition).
    pub fn swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.n {
            self.entries.swap(i * self.n + k, j * self.n + k);
        }
        for k in 0..self.n {
            self.entries.swap(k * self.n + i, k * self.n + j);
        }
    }
}

/// Skew-symmetric adjacency matrix of a fully oriented simple graph:
/// an edge of weight w oriented i -> j gives `a[i][j] = w`, `a[j][i] = -w`.
pub fn build_skew_adjacency(g: &Multigraph) -> Result<SkewMatrix> {
    g.require_simple()?;
    let mut m = SkewMatrix::zero(g.n_vertices());
    for e in g.edges() {
        let dir = e.dir.ok_or(Error::UnorientedEdge(e.id.0))?;
        let (i, j) = match dir {
            Dir::UV => (e.u.0, e.v.0),
            Dir::VU => (e.v.0, e.u.0),
        };
        m.set(i, j, e.weight.clone());
    }
    m.check().expect("skew invariant must hold by construction");
    Ok(m)
}

/// Orients every edge from its lower-indexed endpoint (u side first).
pub fn orient_all_uv(g: &mut Multigraph) {
    for i in 0..g.n_edges() {
        g.set_dir(crate::graph::EdgeId(i), Some(Dir::UV));
    }
}

/// Dart direction agrees with the edge orientation.
pub fn dart_is_forward(g: &Multigraph, dart: crate::graph::EdgeEnd) -> bool {
    match g.edge(dart.edge).dir {
        Some(Dir::UV) => dart.side == Side::U,
        Some(Dir::VU) => dart.side == Side::V,
        None => false,
    }
}
