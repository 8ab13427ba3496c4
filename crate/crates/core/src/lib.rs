//! Combinatorial, algebraic and numerical machinery for Lagrangian torus
//! fibrations on complements of simple normal crossing divisors.
//!
//! The crate is organised around the objects that show up in that story:
//!
//! - [`complex`]: dual complexes of normal crossing presentations, their
//!   stratifications and cones, and exact rational cohomology ranks.
//! - [`atlas`]: integral affine atlases with `GL(n, Z)` transition matrices
//!   and loop monodromy in both the non-archimedean and Lagrangian
//!   conventions.
//! - [`atbd`]: almost toric base diagrams in dimensions 2 and 3, polygon
//!   mutations, shears, wall-crossing checks and facet extraction.
//! - [`negvertex`]: the critical-point analysis of the plurisubharmonic
//!   potential on the negative vertex `xy = u1 + u2 + 1`, including a
//!   Lambert-W evaluator, amoeba sampling and gradient-flow tracing.
//! - [`group`]: free-group words, proper powers, Smith normal form and
//!   abelianization of finite presentations.
//! - [`evalmap`]: the partition-of-unity evaluation map on the local model
//!   `C^n` with coordinate hyperplanes, with Poisson-commutation and
//!   fullness checks.
//! - [`render`]: deterministic SVG output for diagrams and amoebas.
//! - [`verify`]: the end-to-end verification report used by the
//!   `fibrations verify-paper` subcommand and the acceptance test suite.
//!
//! Batch operations (Monte-Carlo checks, sweeps, randomised verification)
//! run on rayon when the default `parallel` feature is enabled; every such
//! entry point also has a `*_seq` variant, and building with
//! `--no-default-features` makes the parallel entry points sequential too.

pub mod atbd;
pub mod atlas;
pub mod complex;
pub mod evalmap;
pub mod fixtures;
pub mod group;
pub mod linalg;
pub mod negvertex;
pub(crate) mod par;
pub mod render;
pub mod verify;
