//! Verification harness for primes q dividing (x^p ± y^p)/(x ± y): scanning,
//! the congruence and symbol identities at the ideal 𝔮 | x·ζ ± y, symbolic
//! replay of the telescoping chains, and Barlow–Abel relation checks.

mod barlow;
mod scan;
mod telescope;
mod verify;

pub use barlow::{
    barlow_abel_check, BarlowAbelReport, RelationCheck, REL_COPRIME, REL_FERMAT, REL_P_ADJUSTED,
    REL_SUM_POWER, REL_Y_DIV_P,
};
pub use scan::{
    coprime_pairs, scan, sweep, ScanRecord, ScanResult, SymbolTable, TermSymbol, Unfactored,
    UnitSymbol, MAX_TRIAL_BOUND,
};
pub use telescope::{
    telescope_replay, telescope_sweep, ChainEntry, TelescopeReport, TelescopeSweep,
};
pub use verify::{
    furtwangler_report, verify_congruences, verify_record, verify_symbol_identities,
    CongruenceReport, ConjugateRelation, FurtwanglerReport, IdentityCheck, NamedCheck,
    RecordVerdict, Specialization, SymbolIdentityReport,
};
