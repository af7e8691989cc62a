//! File formats, batch pipelines, the CLI driver and the annotation server
//! built on `wordorder-core`.

pub mod config;
pub mod conllu;
pub mod pipeline;
pub mod records;
pub mod server;

pub use wordorder_core as core;
