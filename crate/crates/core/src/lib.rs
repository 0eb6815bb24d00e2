//! Counting colored compositions over weight multisets, certified growth
//! exponents of their generating functions, and gap analysis of supports.
//!
//! A weight multiset `A` with generating function `a(t) = sum a_k t^k`
//! determines `b(t) = 1 / (1 - a(t))`, whose coefficient `b_n` counts the
//! ordered sums of `n` in which a part of weight `k` comes in `a_k` colors.
//! The growth rate `lim b_n^(1/n)` equals `1 / alpha`, with `alpha` the
//! positive solution of `a(t) = 1`.

// errors carry exact rationals for diagnostics
#![allow(clippy::result_large_err)]

pub mod analysis;
pub mod enumeration;
pub mod error;
pub mod growth;
pub mod multisets;
pub mod numeric;
pub mod series;

pub use analysis::{
    conductor, gap_profile, spec_semigroup, GapProfile, Lacunarity, SemigroupReport,
};
pub use enumeration::{
    compositions, count_by_enumeration, to_variety, ColoredComposition, Part, VarietyDescriptor,
};
pub use error::{
    AnalysisError, EnumerationError, MultisetError, SeriesError, SolveError, SpecError, VerifyError,
};
pub use growth::{
    b_sequence, beta_bracket, gcd_subsequence_roots, roots_table, solve_alpha, verify, RootBracket,
    RootsTable, SolverConfig, Witness,
};
pub use multisets::{Atom, CustomMultiset, Family, MultisetSpec, TailForm, TailMajorant};
pub use series::{recip_one_minus, TruncatedSeries};
