//! Exact enumeration, asymptotics and uniform random generation for closed
//! lambda-terms and their BCI(p)/BCK(p) subclasses.
//!
//! The library is organised around exact integer sequences. Every counting
//! sequence is computed by at least one recurrence, and wherever an
//! independent route exists (a second functional equation, a closed form, a
//! brute-force enumeration) the two are cross-checked:
//!
//! * [`exactnum`]: arbitrary-precision integers/rationals and truncated
//!   exact power series (univariate and bivariate),
//! * [`sequences`]: the counting sequences themselves (Catalan, Motzkin,
//!   BCI(p), BCK(p), closed terms) with all cross-check routes,
//! * [`oracle`]: brute-force enumeration of enriched trees at small sizes,
//!   the ground truth for every recurrence,
//! * [`asymptotics`]: floating-point evaluation of the growth constants and
//!   bounds, with convergence diagnostics against the exact tables,
//! * [`sampler`]: exact-uniform random generation and unranking of terms.

#![allow(clippy::needless_range_loop, clippy::too_many_arguments)]

pub mod asymptotics;
pub mod exactnum;
pub mod oracle;
pub mod sampler;
pub mod sequences;
