pub mod conslaws;
pub mod expr;
pub mod geom;
pub mod models;
pub mod numverify;
pub mod operators;
pub mod symmetry;

pub use expr::{Expr, ExprError, Rational, Symbols, Var};
pub use geom::{Acts, Form, GeomError, MultiVec, Musical, Tensor11};
pub use symmetry::{ModelError, PhaseModel, SymmetryError};
