//! Exact symbolic computation of the intertwining operator, fusion and
//! exchange matrices, universal fusion matrix, Q(lambda) operator and
//! weighted trace functions for sl(2) at q = 1, over exact rational-function
//! arithmetic, together with mechanical verification of the identities
//! relating them.

pub mod cli;
pub mod error;
pub mod fusion_exchange;
pub mod hyperg;
pub mod intertwine;
pub mod ratfield;
pub mod scalars;
pub mod sl2;
pub mod trace;
pub mod universal;

pub use error::{CoreError, Result};
pub use ratfield::{Poly, RatFunc, Var};
pub use scalars::{factorial, pochhammer, Field, Rat};

/// Q(lambda): rational functions of the symbol lambda.
pub type QLambda = RatFunc<Rat>;
/// Q(mu): rational functions of the symbol mu.
pub type QMu = RatFunc<Rat>;
/// Q(mu)(u): the trace-function field, u encoding exp(lambda/2).
pub type QMuU = RatFunc<RatFunc<Rat>>;
/// Q(lambda)(h): coefficients of truncated universal elements.
pub type QLambdaH = RatFunc<RatFunc<Rat>>;
