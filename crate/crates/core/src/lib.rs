//! Two-qubit nonlocality toolkit.
//!
//! The crate evaluates the CHSH combination and the cumulants of the joint
//! observable `S = X⊗Y − X⊗Y′ + X′⊗Y + X′⊗Y′` across a hierarchy of
//! correlation models: deterministic local hidden variables, non-steering
//! hidden-state ensembles, quantum states, and the PR box. The LHVT range of
//! each cumulant order gives a nonlocality witness; order 2 is the CHSH
//! inequality and order 3 is the skewness inequality.
//!
//! Module map:
//!
//! * [`linalg`]: fixed-size (2×2 and 4×4) complex matrices, Kronecker
//!   products, commutators and Hermitian eigenvalues.
//! * [`scenario`]: qubit observables, the joint operator `S`, bipartite
//!   states and their correlators and moments.
//! * [`hidden_variable`]: deterministic strategies, hidden-variable mixtures,
//!   the non-steering quadratic form, the toy steering model and the PR box.
//! * [`uncertainty`]: the direct-sum majorization bound and Horn partial-sum
//!   checks.
//! * [`cumulant`]: cumulants from moments, LHVT cumulant bounds and the
//!   witness classification.
//! * [`report`]: θ scans, bound tables and the self-verification suite used
//!   by the command-line front end.

pub mod cumulant;
pub mod error;
pub mod hidden_variable;
pub mod linalg;
pub mod optimize;
pub mod report;
pub mod scenario;
pub mod uncertainty;

pub use cumulant::{
    chsh_witness, classify, cumulants_from_moments, lhvt_cumulant_bounds, skewness_witness,
    CumulantBounds, CumulantReport, MomentSequence, Verdict, WitnessOutcome,
};
pub use error::{Error, Result};
pub use hidden_variable::{
    enumerate_strategies, lhvt_chsh_range, lhvt_s_distribution, nonsteering_quadratic, pr_box,
    toy_steering_max, Correlators, DeterministicStrategy, HiddenStateEnsemble,
    HiddenVariableMixture, NoSignalingBox, TwoPointDistribution,
};
pub use linalg::{
    commutator, hermitian_eigenvalues, kron, matmul, trace_expectation, ComplexMatrix, Spectrum,
    C64,
};
pub use scenario::{
    canonical_scenario, correlator, moment, product_state, s_operator, singlet,
    BipartiteScenario, DensityMatrix, QubitObservable,
};
pub use uncertainty::{
    expectation_diff_bound, expectation_sum_bound, horn_check, majorization_bound, majorizes,
    MajorizationVector, ProbabilityPair,
};
