//! Certified homotopy continuation with complex interval arithmetic and
//! parametric Krawczyk tests.

pub mod benchmarks;
pub mod certify;
pub mod error;
pub mod interval;
pub mod krawczyk;
pub mod linalg;
pub mod serial;
pub mod system;
pub mod tracker;

pub use error::{Error, Result};
pub use interval::{ComplexInterval, IntervalBox, RealInterval};
pub use linalg::{IntervalMatrix, PointMatrix};
pub use system::{Homotopy, ParametricSystem, Term};
