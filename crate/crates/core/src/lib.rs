//! Exact oracles, coefficient engines and polynomial interpolation for the
//! Potts partition function of list-colored graphs.
//!
//! `Z_G(w) = sum_sigma w^{mono(sigma)}` runs over all list assignments of a
//! [`ListGraph`], pinned vertices held fixed. At `w = 0` it counts proper list
//! colorings. The crate provides
//!
//! * exhaustive ground truth ([`exact`]),
//! * the coefficients of `Z_G(1 + x)` and of its logarithm by two independent
//!   engines ([`coeffs`], [`cluster`]),
//! * interpolation from the easy point `w = 1` through a disk-to-rectangle
//!   polynomial map ([`interpolator`]),
//! * complex zero scans ([`zeros`], [`scan`]),
//! * numeric probes of the recurrence and bounds behind zero-freeness
//!   ([`probes`]),
//! * the command-line front end ([`cli`]).

pub mod cli;
pub mod cluster;
pub mod coeffs;
pub mod condition;
pub mod exact;
pub mod graph;
pub mod interpolator;
pub mod numeric;
pub mod probes;
pub mod scan;
pub mod series;
pub mod surgery;
pub mod zeros;

pub use condition::{check_large_lists, ConditionReport, ConditionVariant};
pub use exact::{exact_eval, exact_poly, ColorResolved, MonoEdgePoly, OracleError};
pub use graph::{parse_graph, Color, GraphError, ListGraph, Vertex};
pub use surgery::{build_g_k, build_h_k, SplitGraph};
