//! Tensor calculus on a single coordinate chart.

mod alt;
mod big;
mod chart;
mod ops;
mod tensors;

pub use alt::{
    binomial, sort_with_sign, tuple_index, tuples, Alternating, Bivector, Co, Contra, KForm,
    Multivector, Trivector, Variance,
};
pub use big::{
    b_transform, basis_label, courant_bracket, frame_involutivity, is_closed, neutral_pairing,
    BigOperator, GeneralizedSection, SpanTest,
};
pub use chart::{Chart, TIME};
pub use ops::{
    bivector_from_sharp, concomitant_on, evaluate_form, evaluate_multivector, exterior_derivative,
    flat_form, flat_matrix, form_from_flat, interior_form, interior_product, jacobi_defect,
    lie_bracket, lie_derivative, lie_derivative_form_cartan, lie_derivative_form_leibniz,
    nijenhuis, nijenhuis_on, one_form, schouten_concomitant, schouten_square, sharp_bivector,
    sharp_matrix, sharp_metric, twist, LieDerivative,
};
pub use tensors::{Endomorphism, SymmetricTensor, VectorField};

pub(crate) use ops::d_raw;
