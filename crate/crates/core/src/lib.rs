//! Complementary CP maps and their output-purity characteristics.
//!
//! A CP map given by Kraus operators `V_α` is dilated to a single operator
//! `V: H_A → H_B ⊗ H_C`; tracing out either factor gives a pair of mutually
//! complementary maps. For pure inputs both outputs share their nonzero
//! spectrum, so every spectral purity measure (`ν_p`, minimal output entropy,
//! its convex closure) coincides on the pair.
//!
//! Modules:
//! - [`numerics`]: tensor products, partial traces, spectra, entropy, seeded sampling
//! - [`channel`]: Kraus / Stinespring / Choi representations
//! - [`families`]: channel generators with closed-form complements
//! - [`complement`]: complements, minimal dilations, equivalence witnesses, S-forms
//! - [`purity`]: `ν_p`, minimal output entropy, `Ĥ`, multiplicativity and additivity gaps
//! - [`gaussian`]: one-mode attenuation / amplifier channels and their dilations
//! - [`io`]: JSON channel files

pub mod channel;
pub mod complement;
mod error;
pub mod families;
pub mod gaussian;
pub mod io;
pub mod numerics;
pub mod purity;

pub use channel::{
    check_covariance, choi, choi_to_kraus, ChoiMatrix, EquivalenceWitness, KrausMap,
    StinespringOperator, WitnessKind,
};
pub use complement::{
    complement, complements_witness, double_complement_check, equivalence_witness, minimal_form,
    s_form, s_to_channel, SForm, WitnessReport,
};
pub use error::{Error, Result};
pub use gaussian::{
    complement_gaussian, dilate, BogoliubovDilation, GaussianChannel, GaussianKind,
};
pub use io::{ChannelFile, Metadata};
pub use numerics::{ComplexMatrix, ComplexVector, DensityMatrix, PureState, Subsystem, Tolerances};
pub use purity::{
    additivity_gap, h_hat, min_output_entropy, multiplicativity_gap, nu_p, nu_p_search,
    superadditivity_slack, wh_violation_threshold, wh_violation_witness, Ensemble, Exponent,
    OptimizerOptions, PurityResult,
};
