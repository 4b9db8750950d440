//! Orders on `L` built from a valuation: parity elimination in
//! `Gamma / 2 Gamma`, semi-sections with square witnesses, the lift of a
//! residue-field order through a semi-section, and the pipeline producing an
//! order making every `p_i` positive.

mod order;
mod parity;
mod pipeline;
mod semisection;

pub use order::{baer_krull_order, residue_order_catalog, OrderHandle, ResidueOrder, DEFAULT_CATALOG_CAP};
pub use parity::{f2_max_independent, ParityBasis};
pub use pipeline::{
    constraint_values, even_case_order_search, even_case_order_search_capped, even_residues, sufficiency_pipeline,
    OrderSearch, PipelineOutcome, PipelineReport,
};
pub use semisection::{build_semisection, build_semisection_with_base, SemiSection};
