//! Standard embedded graphs used by the test suites, the acceptance gate and
//! the benchmarks: small named planar graphs plus a seeded generator of
//! random subcubic planar graphs with random nonzero rational weights.

use num_traits::Zero;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::embed::{Embedded, RotationSystem};
use crate::graph::{Multigraph, VertexId};
use crate::num::{frac, rat, Rat};

fn embed_from_coords(g: Multigraph, pos: &[(f64, f64)]) -> Embedded {
    let rot = RotationSystem::from_coordinates(&g, pos);
    Embedded::new(g, rot).expect("corpus graph must embed")
}

/// K4 drawn with vertex 3 inside the outer triangle 0-1-2.
pub fn k4() -> Embedded {
    let mut g = Multigraph::new(4);
    for (u, v) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
        g.add_unit_edge(VertexId(u), VertexId(v));
    }
    let pos = [(0.0, 0.0), (4.0, 0.0), (2.0, 3.0), (2.0, 1.0)];
    embed_from_coords(g, &pos)
}

/// The n-cycle, unit weights.
pub fn cycle(n: usize) -> Embedded {
    assert!(n >= 3);
    let mut g = Multigraph::new(n);
    for i in 0..n {
        g.add_unit_edge(VertexId(i), VertexId((i + 1) % n));
    }
    let pos: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let a = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            (a.cos(), a.sin())
        })
        .collect();
    embed_from_coords(g, &pos)
}

/// Prism over an n-gon: inner ring 0..n, outer ring n..2n, rungs i -- n+i.
pub fn prism(n: usize) -> Embedded {
    assert!(n >= 3);
    let mut g = Multigraph::new(2 * n);
    for i in 0..n {
        g.add_unit_edge(VertexId(i), VertexId((i + 1) % n));
    }
    for i in 0..n {
        g.add_unit_edge(VertexId(n + i), VertexId(n + (i + 1) % n));
    }
    for i in 0..n {
        g.add_unit_edge(VertexId(i), VertexId(n + i));
    }
    let mut pos = Vec::new();
    for r in [1.0, 2.0] {
        for i in 0..n {
            let a = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            pos.push((r * a.cos(), r * a.sin()));
        }
    }
    embed_from_coords(g, &pos)
}

pub fn triangle_prism() -> Embedded {
    prism(3)
}

/// The cube graph Q3 as a square prism.
pub fn cube_q3() -> Embedded {
    prism(4)
}

pub fn hex_prism() -> Embedded {
    prism(6)
}

/// Two triangles sharing a vertex; the shared vertex has degree 4.
pub fn bowtie() -> Embedded {
    let mut g = Multigraph::new(5);
    let c = VertexId(0);
    for (a, b) in [(1, 2), (3, 4)] {
        g.add_unit_edge(c, VertexId(a));
        g.add_unit_edge(VertexId(a), VertexId(b));
        g.add_unit_edge(VertexId(b), c);
    }
    let pos = [
        (0.0, 0.0),
        (-2.0, 1.0),
        (-2.0, -1.0),
        (2.0, -1.0),
        (2.0, 1.0),
    ];
    embed_from_coords(g, &pos)
}

/// Triangle prism plus one chord across a square face; gives two vertices of
/// degree 4 while staying planar.
pub fn prism_with_chords() -> Embedded {
    let mut g = Multigraph::new(6);
    for i in 0..3 {
        g.add_unit_edge(VertexId(i), VertexId((i + 1) % 3));
        g.add_unit_edge(VertexId(3 + i), VertexId(3 + (i + 1) % 3));
        g.add_unit_edge(VertexId(i), VertexId(3 + i));
    }
    // chord inside the square face 0-1-4-3
    g.add_unit_edge(VertexId(0), VertexId(4));
    let mut pos = Vec::new();
    for r in [1.0, 2.5] {
        for i in 0..3 {
            let a = 2.0 * std::f64::consts::PI * i as f64 / 3.0 + 0.3;
            pos.push((r * a.cos(), r * a.sin()));
        }
    }
    embed_from_coords(g, &pos)
}

/// K5 with a rotation system read off from an (impossible) straight-line
/// drawing; used to exercise the Euler rejection path.
pub fn k5_with_rotation() -> (Multigraph, RotationSystem) {
    let mut g = Multigraph::new(5);
    for u in 0..5 {
        for v in (u + 1)..5 {
            g.add_unit_edge(VertexId(u), VertexId(v));
        }
    }
    let pos: Vec<(f64, f64)> = (0..5)
        .map(|i| {
            let a = 2.0 * std::f64::consts::PI * i as f64 / 5.0;
            (a.cos(), a.sin())
        })
        .collect();
    let rot = RotationSystem::from_coordinates(&g, &pos);
    (g, rot)
}

/// Nonzero weights drawn from a small pool of rationals.
pub fn random_weight(rng: &mut impl Rng) -> Rat {
    let pool = [
        rat(1),
        rat(-1),
        rat(2),
        rat(-2),
        rat(3),
        frac(1, 2),
        frac(-1, 2),
        frac(2, 3),
        frac(-3, 2),
        frac(5, 3),
    ];
    pool[rng.gen_range(0..pool.len())].clone()
}

/// Reweights every edge with a random nonzero rational (seeded).
pub fn reweighted(e: &Embedded, seed: u64) -> Embedded {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = e.graph.clone();
    for i in 0..g.n_edges() {
        let w = random_weight(&mut rng);
        debug_assert!(!w.is_zero());
        g.set_weight(crate::graph::EdgeId(i), w);
    }
    Embedded::new(g, e.rotation.clone()).expect("reweighting preserves the embedding")
}

/// Random connected subcubic planar graph: an n-cycle plus random
/// non-crossing chords, each vertex hosting at most one chord end, drawn
/// with straight edges so the rotation comes from the coordinates.
/// Weights are random nonzero rationals.
pub fn random_subcubic_planar(seed: u64) -> Embedded {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(6..=16);
    let mut g = Multigraph::new(n);
    for i in 0..n {
        g.add_edge(
            VertexId(i),
            VertexId((i + 1) % n),
            random_weight(&mut rng),
        );
    }
    let mut chords: Vec<(usize, usize)> = Vec::new();
    let mut used = vec![false; n];
    let attempts = n * 3;
    for _ in 0..attempts {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let (a, b) = (a.min(b), a.max(b));
        // skip cycle edges and shared endpoints
        if b - a < 2 || (a == 0 && b == n - 1) || used[a] || used[b] {
            continue;
        }
        // chords are drawn inside the disk; two chords cross iff their
        // endpoints strictly interleave around the cycle
        let crosses = chords
            .iter()
            .any(|&(c, d)| (c < a && a < d && d < b) || (a < c && c < b && b < d));
        if crosses {
            continue;
        }
        used[a] = true;
        used[b] = true;
        chords.push((a, b));
        g.add_edge(VertexId(a), VertexId(b), random_weight(&mut rng));
    }
    let pos: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let ang = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            (ang.cos(), ang.sin())
        })
        .collect();
    embed_from_coords(g, &pos)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_embeddings_are_valid() {
        assert_eq!(k4().faces.faces.len(), 4);
        assert_eq!(cycle(6).faces.faces.len(), 2);
        assert_eq!(triangle_prism().faces.faces.len(), 5);
        assert_eq!(cube_q3().faces.faces.len(), 6);
        assert_eq!(hex_prism().faces.faces.len(), 8);
        assert_eq!(bowtie().faces.faces.len(), 3);
        assert_eq!(prism_with_chords().faces.faces.len(), 6);
    }

    #[test]
    fn random_subcubic_is_subcubic_and_planar() {
        for seed in 0..30 {
            let e = random_subcubic_planar(seed);
            assert!(e.graph.max_degree() <= 3, "seed {seed}");
            assert!(e.graph.is_connected());
            assert!(e.graph.edges().iter().all(|ed| !ed.weight.is_zero()));
        }
    }
}
