pub mod beltrami;
pub mod cohomology;
pub mod deformation;
pub mod error;
pub mod extend;
pub mod format;
pub mod forms;
pub mod frame;
pub mod harmonic;
pub mod identities;
pub mod kuranishi;
pub mod linalg;
pub mod predictor;
pub mod presentation;
pub mod report;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
pub use forms::{BidegreeBasis, Form, Mono};
pub use linalg::ExactMatrix;
pub use presentation::{LiePresentation, Op};
pub use scalar::{GaussianRational, Gr};
