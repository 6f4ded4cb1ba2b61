//! A rewrite calculus for words in Φ(L)^{±1}, θ(L) and e^{2πbL} over the
//! Heisenberg algebra [ŷ_j, ŷ_k] = (i/2π)·b_{kj}.
//!
//! Every rewrite checks its side condition and records it, so a derivation
//! can be replayed and audited.

mod adjoint;
mod form;
mod script;
mod word;

pub use adjoint::{
    adjoint_of_generator, conjugate, constrained_representation, r_word, verify_adjoint, AdjointCase, AdjointReport,
    Derivation, RepDeviation,
};
pub use form::{Context, LinearForm};
pub use script::{audit, parse_script, parse_word, replay, replay_braid_proof, ProofReport, ProofStep, Script, BRAID_N3_SCRIPT};
pub use word::{
    apply_cancel, apply_commute, apply_fuse, apply_insert, apply_merge, apply_pentagon, apply_rule, apply_scalar, apply_shift,
    apply_split, apply_theta, shift_factors, substitute_center, Direction, Evidence, OperatorWord, Prefactor, Rule,
    Step, Token,
};
