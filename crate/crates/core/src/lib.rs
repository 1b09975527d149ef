//! GKM criterion, GKM graphs and Betti numbers for cohomogeneity one actions.

pub mod catalog;
pub mod cohomology;
pub mod diagram;
pub mod error;
pub mod graph;
pub mod ratlin;
pub mod report;
pub mod verdict;
pub mod weyl;

pub use diagram::{GroupDatum, GroupDiagram, HomogeneousSpace, Params};
pub use error::{Error, Result};
pub use graph::{Edge, EdgeKind, GkmGraph, Orbit, Vertex};
pub use ratlin::{Covector, Rat, RatMatrix, Subspace};
pub use report::ValidationReport;
pub use verdict::{CaseTag, GkmVerdict};
pub use weyl::{CosetSpace, Family, GramForm, RootSet, WeylGroup};
