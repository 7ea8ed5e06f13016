//! Exact lossless compression, rank and proximate rank of single-hidden-layer
//! tanh networks, with solvers for uniform point cover problems and
//! executable hardness reductions.

pub mod compress;
pub mod constant;
pub mod cover;
pub mod format;
pub mod net;
pub mod proximate;
pub mod rational;
pub mod reductions;

pub use compress::{canonical_form, compress, equivalent, rank, reducibility, CompressedParameter, Reducibility};
pub use constant::ConstantTerm;
pub use net::{expand, BiaslessParameter, Expanded, Expansion, NetError, Parameter, SymmetryTransform, Unit};
pub use rational::{parse_rational, Rational};
