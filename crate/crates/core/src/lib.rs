//! Research-field monitoring over semantic-wiki project records.

pub mod api;
pub mod areas;
pub mod canonical;
pub mod chart;
pub mod corpus;
pub mod error;
pub mod indicators;
pub mod schema;
pub mod synth;
mod tsv;
pub mod warning;
pub mod wikitext;

pub use error::{Error, Result};
pub use warning::Warning;
