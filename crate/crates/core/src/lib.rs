//! Polygonal knot embeddings and their Gromov distortion.
//!
//! The crate is organised around a closed polygonal curve ([`PolyCurve`]):
//!
//! - [`geom`]: points, curves, arclength parametrisation, segment distances,
//!   clearance.
//! - [`distortion`]: sampled lower estimates and a branch-and-bound enclosure
//!   of the distortion supremum.
//! - [`plat`]: explicit embeddings of highly twisted plat knots built from
//!   helical strands on touching cylinders.
//! - [`bounds`]: closed-form bridge-distance and distortion bounds for those
//!   knots.
//! - [`claims`]: sampling checks of the per-arc ratio estimates.
//! - [`refine`]: seeded simulated annealing that lowers sampled distortion
//!   through embedded curves.
//! - [`io`]: curve JSON and OBJ export.
//!
//! Data-parallel loops run on rayon when the `parallel` feature is enabled
//! (the default). Every parallel entry point also accepts [`Exec::Sequential`]
//! and produces bit-identical results.

pub mod bounds;
pub mod claims;
pub mod distortion;
mod error;
pub mod geom;
pub mod io;
mod par;
pub mod plat;
pub mod refine;
mod tree;

pub use bounds::BoundsReport;
pub use distortion::{CertifyOptions, DistortionCertificate, WitnessPair};
pub use error::{Error, Result};
pub use geom::{ArcKind, ArcTag, Point3, PolyCurve};
pub use par::Exec;
pub use plat::PlatSpec;
pub use refine::RefineConfig;
