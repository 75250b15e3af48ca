//! Avoidability of binary patterns with reversal.
//!
//! Patterns are words over `x`, `x^R`, `y`, `y^R`; an instance is the image
//! under a non-erasing morphism respecting reversal. [`engine::classify`]
//! decides the avoidability index (2, 3 or unavoidable) and the
//! [`verify`] module re-runs the finite searches that back the
//! classification.

pub mod engine;
pub mod error;
pub mod matcher;
pub mod pattern;
pub mod sequences;
pub mod verify;
pub mod word;

pub use engine::{classify, AvoidabilityIndex};
pub use error::{Error, Result};
pub use pattern::{canonical, parse_pattern, Pattern, Symbol};
pub use word::Word;
