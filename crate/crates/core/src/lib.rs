//! Exact computation and certification of superbridge numbers of polygonal
//! knots.

pub mod bounds;
pub mod certificates;
pub mod cli;
pub mod corpus;
pub mod format;
pub mod geometry;
pub mod gordan;
pub mod number;
pub mod search;
pub mod superbridge;

pub use bounds::{
    interval, lower_bound, parse_metadata, render_table, upper_bound, BoundInterval, BoundsError,
    KnotRecord, TableFormat, TableSubset,
};
pub use certificates::{
    build_even_system, build_odd_systems, find_certificate, verify_bundle, verify_even_certificate,
    verify_odd_bundle, BundleLayout, CertificateBundle, CertificateError, FindOutcome,
    VerifiedBound,
};
pub use cli::run_cli;
pub use corpus::{
    corpus, corpus_entry, load_certificate, load_realization, CorpusEntry, CorpusError,
};
pub use format::{
    parse_certificate, parse_coords, write_certificate, write_coords, CertificateDocument,
    FormatError,
};
pub use geometry::{
    descent_count, edge_vectors, normalize_pose, quantize, quantize_with_scale, sign_pattern,
    ApproxKnot, Degeneracy, Direction, EdgeVectors, GeometryError, PolygonalKnot, Sign,
    SignPattern,
};
pub use gordan::{
    gordan_decide, verify_null_combination, verify_separating, Certificate, GordanMatrix,
};
pub use number::{Rational, Vec3};
pub use search::{random_equilateral_polygon, Candidate, SearchConfig, SearchError, SearchStats};
pub use superbridge::{
    jin_upper_bound, realizable_patterns, sampled_lower_bound, superbridge_number,
    superbridge_with_certificate, CertifiedBy, RealizablePattern, SuperbridgeError,
    SuperbridgeResult,
};
