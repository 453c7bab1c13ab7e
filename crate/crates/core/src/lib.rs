//! Exact-arithmetic reconstruction of Apéry-like rational approximants to
//! p-adic L-values: the 2- and 3-adic `ζ_p(3)` and the 2-adic Catalan
//! constant `L_2(2, χ)`.
//!
//! The pipeline is:
//!
//! 1. [`eisenstein`] builds q-expansions of Eisenstein series and their
//!    Eichler-type antiderivatives over exact rationals ([`qseries`]).
//! 2. [`curves`] supplies the modular-curve uniformizers and radius data.
//! 3. [`expansion`] re-expands `H = E*·(E′ + η)` in powers of the uniformizer,
//!    yielding the sequences `a_n`, `b_n`.
//! 4. [`oracle`] computes the target p-adic values independently, by
//!    interpolating special values along Kummer progressions.
//! 5. [`diophantine`] turns both into irrationality-exponent witnesses, and
//!    [`recurrence`] checks and guesses P-finite recurrences.

pub mod cli;
pub mod curves;
pub mod diophantine;
pub mod eisenstein;
pub mod error;
pub mod exactnum;
pub mod expansion;
pub mod oracle;
pub mod qseries;
pub mod recurrence;

pub use error::{Error, Result};
pub use exactnum::{Rational, Valuation};
pub use qseries::{ProductRecipe, QSeries};
