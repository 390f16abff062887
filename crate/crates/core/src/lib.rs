//! Exact arithmetic in the p-th cyclotomic field Q(ζ_p) with power residue
//! symbols and the cyclotomic units ϖ_a and ε_a.
//!
//! The `harness` module checks the congruence and symbol identities at
//! primes dividing (x^p ± y^p)/(x ± y). The `regulab` module holds
//! regularity data.

pub mod arith;
mod bigjson;
pub mod cli;
pub mod cycint;
pub mod cycunits;
pub mod error;
pub mod harness;
pub mod par;
pub mod polyfq;
pub mod powsym;
pub mod regulab;
pub mod resfield;

pub use cycint::{CycInt, FieldCtx, GaloisElt};
pub use cycunits::{epsilon, unit_product_check, varpi, CycUnitLabel, UnitKind};
pub use error::{Error, Result};
pub use par::Exec;
pub use powsym::{symbol, symbol_vector, zeta_symbol, SymbolEvaluator, SymbolExp};
pub use regulab::{
    bernoulli, h_minus, irregular_pairs, vandiver_witness, IrregularPair, VandiverWitness,
};
pub use resfield::{ideal_dividing, split_prime, PrimeIdealRep, ResElt, Sign};
