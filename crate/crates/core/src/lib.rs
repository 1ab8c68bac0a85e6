//! Weighted Cauchy product algebras on truncated weighted sequence spaces.
//!
//! The space `lᵖ(β)` consists of formal power series `f = Σ f̂(n) zⁿ` with
//! `Σ |f̂(n)|ᵖ β(n)ᵖ < ∞`. A second positive weight sequence `δ` defines the
//! product
//!
//! ```text
//! (f ⋄ g)^(n) = Σ_{k=0}^{n} δₙ / (δₖ δ_{n-k}) · f̂(k) ĝ(n-k)
//! ```
//!
//! which is the ordinary Cauchy product at `δ ≡ 1` and the binomial
//! (exponential generating function) convolution at `δₙ = n!`.
//!
//! Everything here works in the graded quotient modulo `z^{D+1}`: series are
//! dense coefficient vectors of length `D + 1`, operators are
//! `(D+1) × (D+1)` matrices in the monomial basis, and every supremum or
//! series condition constant is computed by a finite scan that reports
//! whether it stabilized.
//!
//! Modules:
//! - [`weights`]: weight families, log-space weight ratios, condition constants
//! - [`series`]: truncated series, weighted norms, tails
//! - [`algebra`]: `⋄`, `⋄ᵢ`, unity, powers, inversion, the single character
//! - [`operators`]: multiplication/shift matrices, finite-rank approximants, induced norms
//! - [`lattice`]: Krylov echelon structure, cyclicity, closed ideals
//! - [`oracle`]: brute-force reference implementations for differential testing
//! - [`verify`]: the invariant suite behind `wcauchy verify`

pub mod algebra;
pub mod error;
pub mod lattice;
pub mod operators;
pub mod oracle;
pub mod series;
pub mod verify;
pub mod weights;

pub use num_complex::Complex64;

pub use algebra::{
    diamond, diamond_i, diamond_power, gelfand, invert, invert_i, spectrum_membership, unity,
};
pub use error::{Error, Result};
pub use lattice::{
    check_unicellularity_conditions, ideal_closure_index, is_cyclic, krylov_profile, KrylovProfile,
    TailTrend, UnicellularityRow, Verdict,
};
pub use operators::{
    compactness_profile, induced_norm_bounds, k_m_matrix, mult_matrix, mult_matrix_i, shift_apply,
    shift_matrix, CompactnessRow, NormBounds, NormMethod, OperatorMatrix,
};
pub use series::{FormalSeries, SpaceConfig};
pub use weights::{
    beta_tilde, diamond_ratio, holder_constant, make_weight_family, p1_product_bound, p1_tail_sum,
    shift_norm_constant, tail_constant, ConditionReport, ScanPolicy, WeightSequence,
};
