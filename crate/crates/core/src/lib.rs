//! Recognition of `(k, l)`-sparse graphs.
//!
//! A graph is `(k, l)`-sparse if every vertex set `X` induces at most
//! `max(k|X| - l, 0)` edges; for `2k <= l < 3k` only sets of three or more
//! vertices are constrained. [`check_sparsity`] decides the property for any
//! `0 <= l < 3k` and returns a violating set when the answer is negative.
//!
//! ```
//! use klsparse::{check_sparsity, Graph};
//!
//! let k4 = Graph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
//! let r = check_sparsity(&k4, 2, 3).unwrap();
//! assert!(!r.sparse);
//! assert_eq!(r.certificate.unwrap().vertices, vec![0, 1, 2, 3]);
//! assert!(check_sparsity(&k4, 2, 2).unwrap().sparse);
//! ```

pub mod error;
pub mod flow;
pub mod forests;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod orient;
pub mod recognize;
pub mod rooted;

pub use error::{Error, Result};
pub use forests::{forest_decomposition, Decomposition, ForestDecomposition};
pub use generate::{generate, GenKind, GenSpec};
pub use graph::{
    induced_edge_count, validate_input, verify_certificate, Certificate, Graph, Rejection,
    SparsityParams, SparsityRange,
};
pub use oracle::{brute_force_check, pebble_game_check};
pub use orient::{bounded_orientation, reorient_to_source, Orientation, Reorientation};
pub use recognize::{
    check_sparsity, check_superset_sparsity, saturated_violation, CertificateReport,
    RecognitionResult,
};
