//! Exact computation of pre- and post-Lie Magnus expansions in the free
//! post-Lie algebra on one generator, together with a floating-point Magnus
//! integrator for linear matrix ODEs used to check the formulas numerically.
//!
//! * [`exact`]: rationals, Bernoulli numbers, set partitions, descents.
//! * [`tree`]: planar rooted trees, left grafting, abelianization.
//! * [`engine`]: the truncated enveloping algebra and every series on it.
//! * [`numeric`]: matrix Magnus terms, time-ordered exponential, identities.
//! * [`cli`]: configuration, serialization, verification suites, commands.

pub mod cli;
pub mod engine;
pub mod exact;
pub mod numeric;
pub mod tree;

pub use engine::{Algebra, AlgebraError, Element, Mode, Monomial};
pub use exact::Rational;
pub use tree::PlanarTree;
