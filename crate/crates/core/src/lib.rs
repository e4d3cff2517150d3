pub mod braid;
pub mod error;
pub mod field;
pub mod homology;
pub mod invariants;
pub mod linalg;
pub mod murasugi3;
pub mod pl;
pub mod reduce;
pub mod registry;
pub mod resolution;
pub mod scanner;
pub mod shapes;

pub use braid::{BraidWord, MurasugiNF};
pub use error::{Error, ParseError, Result};
pub use field::{Field, FieldKind, Rational, F2};
pub use pl::PLFunction;
