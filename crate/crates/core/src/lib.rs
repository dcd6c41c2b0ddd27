//! PAC-Bayes generalization bounds for interdependent samples.
//!
//! Dependencies between training examples are described by a
//! [`depgraph::DependencyGraph`]; an exact fractional cover of that graph
//! splits the sample into independent chunks, and the bounds in [`bounds`]
//! pay for the dependency through the cover's chromatic weight.

pub mod bounds;
pub mod covers;
pub mod depgraph;
pub mod gibbs;
pub mod klcore;
pub mod lp;

/// Exact rational used for cover weights and fractional chromatic numbers.
pub type Rational = num_rational::Ratio<i64>;
