//! Construction and certification of dense hypergraphs avoiding
//! `(k(r-t)+t, k)`-configurations.
//!
//! The crate is organised around five pieces:
//!
//! - [`hypercore`]: r-uniform hypergraphs, shadows, degrees, the `.hg` text
//!   format and the exhaustive `(s, k)`-configuration search.
//! - [`gadgets`]: small core graphs with a supporting t-graph, their
//!   non-edge girth and the eligibility check for packing.
//! - [`packer`]: a seeded random-greedy packer placing gadget copies with
//!   edge-disjoint supporting shadows and no cross-copy dense configurations.
//! - [`bounds`]: cleaning, t-tight components, cluster merging and the
//!   resulting certified upper bound, plus the table of known limits.
//! - [`oracle`]: exact maximum edge counts on a handful of vertices.

pub mod bounds;
pub mod combinatorics;
pub mod error;
pub mod gadgets;
pub mod hypercore;
pub mod io;
pub mod oracle;
pub mod packer;

pub use combinatorics::{binomial, factorial, Rational};
pub use error::{Error, Result};
pub use gadgets::{EligibilityReport, Gadget, Girth};
pub use hypercore::{ConfigSpec, ConfigurationWitness, Hypergraph};
pub use packer::{Certificate, PackingConfig, PackingState, RejectReason};

