//! Computational coarse geometry over finite extended metric spaces.
//!
//! The crate covers extended reals with `|∞ − ∞| = 0`, validated finite
//! metric spaces, the complete lattice `Lip X` of 1-Lipschitz functions
//! with its supremum metric, Λ-functions (cones) and the Lipschitz
//! envelope, rough isometries with exact rough distance on small spaces,
//! ml-isomorphisms (lifting a rough isometry to the function lattices and
//! reconstructing it again) and scaling experiments.
//!
//! `no_std` with `alloc`; IO, file formats and the CLI live in the
//! `coarse-lip` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod ext;
pub mod lambda;
pub mod lattice;
pub mod metric;
pub mod ml;
pub mod rough;
pub mod sample;
pub mod scaling;

pub use error::{Error, Violation};
pub use ext::{ext_dist, ExtReal, TOL};
pub use lambda::{
    envelope, is_finite_lambda, join_cones, lambda_decompose, lambda_dist_closed,
    lambda_irreducibility_witness, lambda_realize, lipschitzise, nearest_lambda, LambdaFn,
    NearestLambda,
};
pub use lattice::{
    is_k_eps_lipschitz, join, meet, min_lipschitz_eps, sup_dist, LipFn,
};
pub use metric::{components, cutoff, scale, validate_metric, ComponentPartition, MetricSpace, Space};
pub use rough::{defect, nearness, rough_distance_exact, IsometryDefect, MapPair};
