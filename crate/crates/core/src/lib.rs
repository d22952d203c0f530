//! Exact implicit linear algebra over labeled index sets.

pub mod cli;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod control;
pub mod emulator;
pub mod genop;
pub mod graph;
pub mod invariant;
pub mod label;
pub mod linkage;
pub mod network;
pub mod poly;
pub mod report;
pub mod space;

pub use error::{IlaError, Result};
pub use field::{Field, Gf, Q};
pub use label::{lbl, IndexSet, Label};
pub use space::{Form, IndexedVector, Mode, Space};
