//! Library behind the `kweb` tool: graphs, webs (short subdivisions of
//! complete graphs), a small hypergraph Ramsey engine, and the extraction
//! pipeline that turns a web into an induced clique, an induced biclique, or
//! a clean branch subset — with independently checkable certificates.

pub mod bounds;
pub mod cert;
pub mod certify;
pub mod cli;
pub mod error;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod pipeline;
pub mod ramsey;
pub mod search;
pub mod web;

pub use error::{Error, Result};
