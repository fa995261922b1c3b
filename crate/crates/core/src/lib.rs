//! Exact computation of the undirected determinant and undirected permanent
//! of weighted planar graphs.
//!
//! The undirected determinant and permanent of a graph G are
//!
//! ```text
//! udet G  = (-1)^n  sum over cycle covers c  of (-1)^{|c|} w(c)
//! uperm G =         sum over cycle covers c  of w(c)
//! ```
//!
//! where a cycle cover (2-factor) is a spanning subgraph with every vertex
//! of degree 2, |c| its number of components and w(c) its weight product.
//!
//! The crate provides:
//! * exponential but heavily pruned oracles for both quantities, for
//!   PerfMatch, for gadget signature tables and for central-cycle scans
//!   ([`oracle`], [`gadget`]);
//! * exact Pfaffians of skew-symmetric rational matrices ([`pfaffian`]);
//! * the polynomial FKT pipeline computing uperm of planar graphs of
//!   maximum degree 3 ([`fkt`]);
//! * semi-Pfaffian orientations, tension analysis and the polynomial
//!   pipeline computing udet of tension-free cubic planar graphs
//!   ([`semipfaffian`]);
//! * an executable #3SAT reduction: 3-CNF formulas compile to planar
//!   weighted graphs whose uperm / udet count satisfying assignments, with
//!   machine-checked gadget signature tables, plus the cubicization that
//!   trades degree-4 vertices for a cubic gadget ([`reduce`]);
//! * DIMACS CNF parsing and a truth-table model counter ([`cnf`]);
//! * JSON (de)serialization of graphs and gadgets ([`io`]).
//!
//! All arithmetic is exact rational; nothing here rounds.

pub mod builder;
pub mod cnf;
pub mod corpus;
pub mod cover;
pub mod embed;
pub mod error;
pub mod fkt;
pub mod gadget;
pub mod gadgets;
pub mod graph;
pub mod io;
pub mod num;
pub mod oracle;
pub mod pfaffian;
pub mod reduce;
pub mod semipfaffian;
pub mod skew;

pub use error::{Error, Result};
pub use num::Rat;
