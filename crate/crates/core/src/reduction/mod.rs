//! Pointwise coframe pipeline: adapted coframes from a structure
//! specification, structure coefficients, and the two normalization steps
//! that cut the structure group down to the unitary block.

mod adapted;
mod first;
mod grid;
mod pipeline;
mod reeb;
mod second;
mod structure;
mod types;

pub use adapted::adapted_coframe;
pub use first::{first_reduction, first_reduction_symbolic, FirstReduction};
pub use grid::{default_lattice, lattice_points};
pub use pipeline::{reduce, Backend, PipelineSettings, ReducedStructure, ReductionRecord};
pub use reeb::{reeb_field, reeb_of};
pub use second::{second_reduction, second_reduction_symbolic, SecondReduction};
pub use structure::{structure_coefficients, StructureCoefficients};
pub use types::{CoframeField, MetricData, Stage, SubRiemannianSpec};
