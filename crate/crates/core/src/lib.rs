//! Exact computation with toroidal vertex algebras built from toroidal Lie
//! algebras: the vacuum module `V(ℓ,0)`, its vertex operators, closures of
//! local fields, and coefficientwise verification of the axioms on windows.

pub mod axioms;
pub mod cache;
pub mod config;
pub mod error;
pub mod exec;
pub mod field;
pub mod index;
pub mod lie;
pub mod linalg;
pub mod pbw;
pub mod rational;
pub mod suite;
pub mod toroidal;
pub mod vacuum;
pub mod vertex;
pub mod window;

pub use error::{ConfigError, FieldError, LieError, ParseError, VertexError};
pub use index::{MultiIndex, TorIndex};
pub use lie::LieAlgebra;
pub use pbw::{CreationMode, Monomial, StateVector, Tail};
pub use rational::Rational;
pub use vacuum::{Mode, VacuumModule};
pub use vertex::{Session, SessionOptions};
pub use window::ModeWindow;
pub use field::{Field, FieldEngine, LocalityOrder};
