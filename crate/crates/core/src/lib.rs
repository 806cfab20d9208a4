//! Exact combinatorial optimization over lattice chains with certified
//! real arithmetic.
//!
//! The crate computes the functions `F(n, r)` (maximum of a radical-sum
//! objective over strictly decreasing chains) and a certified upper
//! candidate set for `G(n)` (the sixfold-refined variant), together with
//! closed-form upper and lower bounds evaluated as directed-rounding
//! dyadic intervals. All comparisons, floors and bound checks are exact
//! or certified; no floating-point hardware semantics are relied on
//! anywhere in the computational paths.
//!
//! Layout:
//! - [`radical`]: canonical sums of rational multiples of integer roots,
//!   the exact value type of every objective.
//! - [`dyadic`]: dyadic rationals and outward-rounded intervals.
//! - [`elementary`]: certified `exp`, `log`, `log log` and the constants
//!   `e`, `ln 2`.
//! - [`lambert`]: the principal branch of Lambert's W on `[0, inf)`.
//! - [`chains`]: the feasible chain/profile regions and their enumeration.
//! - [`eval`]: the objectives `f`, `g` and related exact expressions.
//! - [`solver`]: dynamic programming for `F(n, r)`, the brute-force
//!   oracle, the sixfold search and table reproduction.
//! - [`bounds`]: closed-form upper/lower bounds and their certification
//!   against the solver.
//! - [`verify`]: named check suites used by the command line interface.

pub mod arith;
pub mod bounds;
pub mod chains;
pub mod dyadic;
pub mod elementary;
pub mod eval;
pub mod lambert;
pub mod radical;
pub mod rational;
pub mod solver;
pub mod verify;

pub use chains::{Chain, SixfoldProfile};
pub use dyadic::{Dyadic, DyadicInterval};
pub use radical::{RadicalSum, RadicalTerm};
pub use rational::Rational;
pub use solver::{SolveResult, TableCell, Witness};
