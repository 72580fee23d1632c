//! Classical and generalized almost contact structures on odd-dimensional
//! charts, checked through their cylinders `M x R`.

mod classical;
mod generalized;
mod sasakian;

pub use classical::{
    almost_contact_axioms, classical_checks, classical_normality, cylinder_lift_classical,
    lift_identities, metric_axioms, Cac, Cacm, ClassicalCheck, CylinderLift,
};
pub use generalized::{
    adapt_to_cylinder, adaptedness, conformal_cylinder, contactgen_check, gac_axioms,
    gac_construct, gac_operator_clauses, gac_tensor_clauses, image_frame, nondegenerate_analysis,
    normality_check, pw_classify, validate_gac, volume_certificate, ContactMethod, Gac, GacSource,
    NondegenerateReport, NormalityMethod, PwReport,
};
pub use sasakian::{
    derived_fundamental_form, gen_sasakian_check, gen_sasakian_cylinder_crosscheck,
    remotely_sasakian_check, SasakianPair,
};
