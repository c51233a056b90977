//! Algebraic branching programs, labeled digraphs and the graph surgery that
//! turns them into binary variable matrices.

mod abp;
mod chain;
mod convert;

pub use abp::{parse_abp, serialize_abp, Abp, AbpEdge, LabeledDigraph};
pub use chain::{addition_chain, constant_abp, AdditionChain};
pub use convert::{
    abp_adjacency_matrix, abp_path_count, abp_path_value, abp_path_value_dp, abp_to_matrix,
    binarize, PATH_BUDGET,
};
