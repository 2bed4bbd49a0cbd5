//! Exact and numerical tools for the Heisenberg group, its Rumin complex,
//! intrinsic Lipschitz graphs and the currents they carry.

pub mod currents;
pub mod error;
pub mod forms;
pub mod graphs;
pub mod heis;
pub mod hmaps;
pub mod jet;
pub mod linalg;
pub mod multivec;
pub mod parse;
pub mod poly;
pub mod quadrature;
pub mod rumin;
pub mod scalar;

pub use error::{Error, Result};
pub use forms::{Form, FrameRing, PolyForm};
pub use heis::{Metric, Point, Splitting};
pub use multivec::{CoVector, MultiVector, PlaneSpan};
pub use poly::Polynomial;
pub use scalar::Q;
