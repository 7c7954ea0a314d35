//! Exact-arithmetic toolkit for weighted projective stacks P(λ) and the
//! Hom-stacks Hom_n(P¹, P(λ)): finite-field enumeration oracles, closed-form
//! point counts, Chow-ring presentations, spectral-sequence page models and
//! Grothendieck–Lefschetz trace evaluation.

pub mod binary_forms;
pub mod finite_field;
pub mod graded_algebra;
pub mod qpoly;
pub mod spectral_sequence;
pub mod stack_count;
pub mod zeta_trace;

pub use binary_forms::{BinaryForm, FormError, FormTuple, GcdDegree, TupleSpace, WeightVector};
pub use finite_field::{FieldElement, FieldError, FieldSpec, FieldTable};
pub use graded_algebra::{
    AlgebraError, ChernData, ChernSummand, PoincarePolynomial, RelationPresentation, ThetaPoly,
};
pub use qpoly::QPoly;
pub use spectral_sequence::{ClassEntry, CohomologyTable, DegreeGroup, PageError, PageTable};
pub use stack_count::{
    CountError, CountMethod, CountResult, CountValue, HomStackParams, DEFAULT_BUDGET,
};
pub use zeta_trace::{GroupDescriptor, LPolynomial, ModuliSpec, TraceError};
