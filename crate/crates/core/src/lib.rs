//! Exact root-system projections: build a root system, project it away from a
//! subset Θ of its simple roots, and find the root subsystems that survive.

pub mod angle;
pub mod catalog;
pub mod dynkin;
pub mod exact;
pub mod projector;
pub mod report;
pub mod subsystems;
pub mod theorems;
pub mod theta;

pub use catalog::{build, Convention, Family, RootSystemData, SystemLabel};
pub use exact::{inner, project_complement, gram_rank, Rational, RootVector};
pub use projector::{project_system, ProjectedSet};
pub use theta::ThetaSubset;
