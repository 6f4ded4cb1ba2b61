//! The quantum torus Y_kY_j = q^{2b_{jk}}Y_jY_k, factor chains in its skew
//! field, Weyl-type matrix representations and the quantum R^q-operator.

mod chain;
mod element;
mod rep;
pub(crate) mod rq;

pub use chain::{Factor, FactorChain};
pub use element::{pairing, QCoeff, QTorusElement};
pub use rep::{skew_normal_form, RepField, Representation, SkewNormalForm};
pub use rq::{
    apply_rq, apply_rq_matrices, central_elements_check, is_central_exponent, mu_decompose_check, mutate_matrices,
    quantum_braid_check, quantum_mutate, rq_by_mutations, verify_rq_equals_mutations, CentralElement, CentralReport,
    DecomposeReport, EntryDeviation, QuantumBraidReport, RqReport,
};
