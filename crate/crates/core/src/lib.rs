//! Exact arithmetic for power sums, shuffle relations, and multizeta values
//! over A = F_q[t].
//!
//! The crate works with the degree-graded power sums S_d(k) (sums of 1/a^k
//! over the monic polynomials a of degree d), derives the F_p-coefficient
//! identities S_1(a) S_1(b) - S_1(a+b) = Sum f_i S_1(a_i) by a greedy
//! reduction in the canonical variable U = 1/(t^q - t), lifts them to shuffle
//! relations between multizeta values, and checks everything two ways: by
//! exact rational-function arithmetic at every depth and by truncated Laurent
//! expansions at the infinite place.
//!
//! Modules:
//! - [`field`]: F_{p^s} contexts, digit expansions, binomials mod p.
//! - [`polyring`]: polynomials in t over F_q, normalized fractions, the
//!   bracket quantities.
//! - [`laurent`]: truncated Laurent series in u = 1/t.
//! - [`powersum`]: S_d(k) by enumeration and by every available closed form.
//! - [`relations`]: the derivation and exact verification of relation sets.
//! - [`zeta`]: truncated multizeta values and numeric shuffle checks.
//! - [`families`]: closed-form relation-set generators and identity checks.
//! - [`cli`]: the `mzv` command-line front end.

pub mod cli;
pub mod error;
pub mod families;
pub mod field;
pub mod laurent;
pub mod polyring;
pub mod powersum;
pub mod relations;
pub mod zeta;

pub use error::Error;
pub use families::{
    check_large_indices, check_prop1, check_s1_neg_n, family_a1, family_a2, family_a3_q2,
    recursion_small_a, FamilyParams,
};
pub use field::{digits, is_even_mult, lucas_binom, make_field, DigitVec, FieldCtx, FqElem};
pub use laurent::LaurentTail;
pub use polyring::{monic_polys, BracketCache, FqPoly, RatFunc, DEFAULT_ENUM_BUDGET};
pub use powersum::{
    s1_closed_form, s_d_bruteforce, s_d_nested, s_d_special, upoly_eval, PowerSums, S1Form, UPoly,
};
pub use relations::{
    delta_d, derive_relation, shuffle_expand, verify_relation_exact, MZExpression, MZIndex,
    RelationSet, Verification,
};
pub use zeta::{
    valuation_lower_bound, verify_shuffle_numeric, zeta_trunc, SeriesMatch, ZetaRequest,
};
