//! Regularity data: Bernoulli numbers, irregular pairs, the relative class
//! number h⁻, and one-sided p-th-power witnesses for cyclotomic-unit
//! eigencomponents.

mod bernoulli;
mod hminus;
mod vandiver;

pub use bernoulli::{bernoulli, irregular_pairs, is_regular, IrregularPair};
pub use hminus::{h_minus, h_minus_at, h_minus_eval, HMinusEval, MAX_PRECISION_BITS};
pub use vandiver::{eigen_exponents, eigen_symbol, vandiver_witness, VandiverWitness};
