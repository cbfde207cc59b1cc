//! Confluence certificates for first-order term rewrite systems.
//!
//! Critical peaks are checked against joining diagrams that are decreasing
//! for the rule labeling. Left-linear systems additionally need relative
//! termination of their duplicating rules (verified through linear
//! polynomial interpretations) and, for the conversion version, the fan
//! property.

pub mod term;
pub mod rewrite;
pub mod peaks;
pub mod ars;
pub mod labeling;
pub mod relterm;
pub mod prover;
pub mod certificate;

#[cfg(test)]
mod testutil;
