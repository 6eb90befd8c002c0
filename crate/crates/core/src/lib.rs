//! Combinatorial non-abelian bundles and gerbes with connection on simplicial
//! complexes: exact group-level identities, their infinitesimal expansions, and
//! ε-scaling checks that the two agree at the expected order.

pub mod bf;
pub mod bundle;
pub mod cochain;
pub mod error;
pub mod gerbe;
pub mod io;
pub mod liegroup;
pub mod pathspace;
pub mod sample;
pub mod simplicial;

pub use error::{Error, Result};
