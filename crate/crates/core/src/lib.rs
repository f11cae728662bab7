pub mod error;
pub mod logmag;
pub mod scalar;
pub mod weights;
pub mod spaces;
pub mod operators;
pub mod criteria;
pub mod orbit;
pub mod witnesses;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
pub use witnesses::{ExactWitness, FloatWitness};

pub type ExactVector = spaces::SparseVector<Rational>;
pub type FloatVector = spaces::SparseVector<f64>;
pub type FloatVector32 = spaces::SparseVector<f32>;
