//! Temperley-Lieb diagrams, their spin-chain representation and the GNS
//! construction from the oriented-diagram functionals `omega_n`.

pub mod blocks;
pub mod diagram;
pub mod error;
pub mod export;
pub mod functional;
pub mod gns;
pub mod metric;
pub mod operator;
pub mod paths;
pub mod qnum;
pub mod relations;
pub mod spin;

pub use diagram::{PlanarDiagram, Strand, TLWord};
pub use error::{Error, Result};
pub use export::DiagramRecord;
pub use functional::{omega, StrandCounts};
pub use operator::{SparseOperator, C64};
pub use qnum::QContext;
