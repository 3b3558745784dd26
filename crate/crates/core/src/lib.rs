//! Exact arithmetic on cut-and-project model sets, discretizations of linear
//! maps and almost-periodicity estimators for discrete point sets.

pub mod analysis;
pub mod cutproject;
pub mod discretize;
pub mod error;
pub mod formats;
pub mod numeric;
pub mod pointset;

pub use analysis::{
    check_translation, density_r, density_r_plus, epsilon_translations, subadditivity_check,
    translation_ladder, uniform_density, weak_ap_probe, DensityProfile, DensitySample, DensitySup,
    Subadditivity, TranslationCheck, TranslationReport, Verdict, WeakApPair, WeakApReport,
};
pub use cutproject::{
    enumerate_model_set, enumerate_model_set_with, fixtures, image_scheme, iterated_scheme, translation_set,
    translation_set_with, window_inflation_density, window_inflation_density_with, CutProjectScheme,
    EnumerationConfig, ModelSetPatch, Window, DEFAULT_BUDGET,
};
pub use discretize::{
    apply_chain, apply_chain_with, apply_hat, chain_model_set, sample_rational_chain, sample_sl2_chain,
    sl2_from_angles, MapChain, RngState,
};
pub use error::{Error, Result};
pub use formats::{parse_chain, parse_qps, parse_scheme, qps_to_string, read_qps, write_qps};
pub use numeric::{
    ball_volume, invert_matrix, parse_rational, preimage_bounds, round_scalar, round_vector, Interval,
    IntervalBox, RMatrix, RVector, Rational,
};
pub use pointset::{DelonePair, Domain, PointSet};
