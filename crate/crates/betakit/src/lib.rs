//! Multiscale flatness analysis for discrete measures in `R^d`.
//!
//! The crate measures how close a weighted point cloud is to lying on
//! affine n-planes across locations and scales, and aggregates those
//! measurements into the square functions whose behavior separates
//! rectifiable from unrectifiable measures:
//!
//! - [`fit`]: weighted L^p plane fitting and the beta coefficients;
//! - [`transport`]: the bounded-Lipschitz distance and the alpha
//!   coefficients, via an exact min-cost transshipment solver;
//! - [`decomp`]: Whitney cubes relative to a Lipschitz graph, exceptional
//!   sets of high-density balls, graph cubes, and the high-density /
//!   low-density / big-alpha stopping-time classification;
//! - [`multiscale`]: per-point square-function profiles and Carleson-type
//!   packing sums over cube families;
//! - [`generators`]: synthetic measures with known structure (segments,
//!   circles, Lipschitz graphs, the four-corner Cantor measure).
//!
//! See the `examples/` directory for one runnable example per capability,
//! and the `betakit` binary for the batch front-end.

pub mod error;
pub mod measure;
pub mod spatial;
pub mod dyadic;
pub mod plane;
pub mod fit;
pub mod transport;
pub mod decomp;
pub mod multiscale;
pub mod generators;
pub mod report;

pub use error::{Error, Result};
pub use measure::{Ball, DiscreteMeasure};
pub use plane::AffinePlane;
pub use spatial::SpatialIndex;
