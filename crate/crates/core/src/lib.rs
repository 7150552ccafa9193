pub mod census;
pub mod enumerate;
pub mod error;
pub mod escape;
pub mod field;
pub mod groups;
pub mod growth;
pub mod ledger;
pub mod matrix;
pub mod poly;
pub mod varieties;

pub use error::{Error, Result};
pub use field::{make_field, Field, FieldElem};
pub use groups::{make_group, Embedding, Family, GenSet, GroupSpec};
pub use ledger::LedgerTerm;
pub use matrix::Matrix;
