//! Doc-test shim for the guide under `book/`.
//!
//! mdBook cannot run book code samples against crate dependencies, so each
//! chapter is included here as module documentation: `cargo test --doc -p
//! multireg-book` compiles and executes every Rust block in the book. One
//! module per chapter keeps failures attributable.

#[doc = include_str!("../../../README.md")]
pub mod readme {}

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/measurement-model.md")]
pub mod measurement_model {}

#[doc = include_str!("../../../book/src/range-bias.md")]
pub mod range_bias {}

#[doc = include_str!("../../../book/src/azimuth-sdr.md")]
pub mod azimuth_sdr {}

#[doc = include_str!("../../../book/src/sdp-solver.md")]
pub mod sdp_solver {}

#[doc = include_str!("../../../book/src/gradient-projection.md")]
pub mod gradient_projection {}

#[doc = include_str!("../../../book/src/bcd.md")]
pub mod bcd {}

#[doc = include_str!("../../../book/src/monte-carlo.md")]
pub mod monte_carlo {}
