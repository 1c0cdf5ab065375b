//! Decide whether a 3-manifold, given by a presentation of its fundamental
//! group, fibres over the circle.

pub mod abelian;
pub mod batch;
pub mod brown;
pub mod cosets;
pub mod error;
pub mod folding;
pub mod fox;
pub mod laurent;
pub mod matrix;
pub mod pipeline;
pub mod plot;
pub mod presentation;
pub mod scalar;
pub mod suite;
pub mod word;

pub use abelian::{
    abelianization, is_simple_form, primitive_characters, to_standard_form, AbelianStructure, Character,
    CharacterSpace,
};
pub use batch::{batch_records, run_batch, BatchOptions, BatchSummary, CensusEntry};
pub use brown::{
    brown_quotient, brown_rank1, brown_rank2, punctured_torus_bundle_test, ConeReport, HeightWalk, LatticePath,
    QuotientResult, Rank1Result,
};
pub use cosets::{
    cyclic_cover, low_index_subgroups, reidemeister_schreier, simplify_presentation, simplify_protected,
    subgroup_homology, todd_coxeter, CosetTable, LowIndexResult, SubgroupPresentation, SubgroupSpec,
    DEFAULT_MAX_COSETS,
};
pub use error::{Error, Result};
pub use folding::{
    ascending_from_subwords, ascending_hnn_check, build_folded_graph, concat_double_relators, descent_check,
    extract_fiber_subwords, fiber_alphabet, generates_whole, graph_membership, is_basis, FoldedGraph, HnnResult,
    HnnVerdict, Side,
};
pub use fox::{
    abelian_eval, alexander_matrix, alexander_polynomial, fibred_obstructions, fox_derivative, simple_form_data,
    AlexanderData, AlexanderMatrix, DeltaStatus, GroupRingElem, ObstructionReport, SimpleFormData,
};
pub use presentation::{
    parse_blocks, parse_presentation, parse_presentations, substitute, substitute_str, Cusp, Flags,
    Generator, Presentation, TietzeLog, TietzeMove,
};
pub use laurent::{change_variables, laurent_gcd, newton_vertices, Laurent, Monomial};
pub use matrix::{smith_normal_form, Matrix, SmithDecomposition};
pub use pipeline::{
    corank_bounds, decide_fibred, dehn_fill, verify_certificate, Certificate, CorankOptions, CorankReport, Evidence,
    FibredOptions, FibredVerdict, Status,
};
pub use plot::{emit_plot, path_svg, plots, walk_svg};
pub use scalar::Coeff;

pub type IntMatrix = Matrix<BigInt>;
pub type LaurentPoly = Laurent<BigInt>;
pub use word::{cyclic_core, cyclic_reduce, exponent_vector, format_word, free_reduce, parse_word, Letter, Word};

pub use num_bigint::BigInt;
