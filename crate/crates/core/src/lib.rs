//! Exact classification of two-dimensional pseudoconvex Reinhardt domains.
//!
//! A domain is described by its logarithmic image (an open convex polyhedron
//! cut out by monomial constraints, or a parabolic region) together with two
//! flags recording whether it meets the coordinate axes. On top of that
//! description the crate decides hyperbolicity, reduces strip domains to
//! normal forms through unimodular monomial maps, decides membership in the
//! Serre class, decides compactness of the automorphism group, builds Pell
//! automorphisms and answers proper-map existence questions between domains
//! of irrational type.
//!
//! Every decision is made in exact arithmetic over `Q` or a single real
//! quadratic field `Q(sqrt d)`. Floating point only appears when evaluating
//! the exhaustion functions in [`verdicts`].

pub mod automorphisms;
pub mod cli;
pub mod domain;
pub mod exact_arith;
pub mod normal_form;
pub mod pell;
pub mod proper_maps;
pub mod schema;
pub mod verdicts;

pub use domain::{DomainDesc, DomainShape, MonomialConstraint};
pub use exact_arith::{QuadExt, Rat};
pub use normal_form::{MonomialMap, NormalForm, NormalFormTag};
