//! Derivation of the relation sets S(a, b) expressing
//! S_1(a) S_1(b) - S_1(a+b) as an F_p-combination of degree-one power sums,
//! their lifting to multizeta shuffle identities, and exact verification at
//! arbitrary depth.
//!
//! The derivation works entirely on U-polynomials: the product minus the
//! single sum is a polynomial in U of degree below a + b whose exponents all
//! share the residue of a + b modulo q - 1, and repeatedly cancelling the top
//! term against the closed form of S_1(top) peels off one pair (f_i, a_i)
//! per step until nothing remains.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::field::{is_even_mult, FieldCtx};
use crate::polyring::RatFunc;
use crate::powersum::{s1_closed_form, PowerSums};

/// The derived data for a pair (a, b) over F_q: coefficients f_i in F_p^x
/// and strictly decreasing indices a_i < a + b, with every gap a + b - a_i
/// divisible by q - 1.
///
/// Serializes to the interchange form
/// `{"q":…,"a":…,"b":…,"pairs":[[f,a_i],…]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationSet {
    pub q: u64,
    pub a: u64,
    pub b: u64,
    pub pairs: Vec<(u64, u64)>,
}

impl RelationSet {
    /// Total weight a + b shared by every term of the lifted identity.
    pub fn weight(&self) -> u64 {
        self.a + self.b
    }

    /// Builds a set from raw (coefficient, index) terms, merging duplicates
    /// modulo p, dropping zeros, and sorting indices in descending order.
    pub fn from_terms(
        q: u64,
        p: u64,
        a: u64,
        b: u64,
        terms: impl IntoIterator<Item = (u64, u64)>,
    ) -> RelationSet {
        let mut merged: BTreeMap<u64, u64> = BTreeMap::new();
        for (f, index) in terms {
            let slot = merged.entry(index).or_insert(0);
            *slot = (*slot + f % p) % p;
        }
        let pairs = merged
            .into_iter()
            .rev()
            .filter(|&(_, f)| f != 0)
            .map(|(index, f)| (f, index))
            .collect();
        RelationSet { q, a, b, pairs }
    }

    /// Checks the container invariants; used liberally in tests.
    pub fn check_invariants(&self, p: u64) {
        let w = self.weight();
        let mut prev: Option<u64> = None;
        for &(f, index) in &self.pairs {
            assert!(f >= 1 && f < p, "coefficient {f} outside [1, {p})");
            assert!(index >= 1 && index < w, "index {index} outside (0, {w})");
            assert!(
                is_even_mult((w - index) as i64, self.q),
                "gap {} is not a multiple of q - 1",
                w - index
            );
            if let Some(prev) = prev {
                assert!(index < prev, "indices not strictly decreasing");
            }
            prev = Some(index);
        }
    }
}

/// Delta_d(a, b) = S_d(a) S_d(b) - S_d(a + b), exact and symmetric in (a, b).
pub fn delta_d(sums: &mut PowerSums, d: u32, a: u64, b: u64) -> Result<RatFunc, Error> {
    assert!(a >= 1 && b >= 1, "delta requires positive indices");
    let left = &sums.s_d(d, a as i64)? * &sums.s_d(d, b as i64)?;
    Ok(&left - &sums.s_d(d, (a + b) as i64)?)
}

/// Derives S(a, b) by the greedy reduction on U-polynomials.
///
/// Each step takes the highest remaining exponent n with coefficient
/// theta_n, emits the pair (f, n) with f = (-1)^n theta_n, and subtracts
/// f * S_1(n); the top exponent strictly decreases, so the loop ends with
/// the zero polynomial and Delta(a, b) = Sum f_i S_1(a_i) holds exactly.
pub fn derive_relation(ctx: &FieldCtx, a: u64, b: u64) -> RelationSet {
    assert!(a >= 1 && b >= 1, "relation indices must be positive");
    let p = ctx.p();
    let q = ctx.q();
    let mut delta = s1_closed_form(ctx, a).to_upoly(p).mul(&s1_closed_form(ctx, b).to_upoly(p));
    delta.sub_scaled(&s1_closed_form(ctx, a + b).to_upoly(p), 1);

    let mut pairs = Vec::new();
    while let Some((n, theta)) = delta.leading() {
        // The parity theorem in action: every surviving exponent keeps the
        // residue of a + b modulo q - 1.
        assert!(
            is_even_mult((a + b - n) as i64, q),
            "exponent {n} breaks the parity invariant for ({a}, {b})"
        );
        let f = if n % 2 == 0 { theta } else { (p - theta) % p };
        pairs.push((f, n));
        delta.sub_scaled(&s1_closed_form(ctx, n).to_upoly(p), f);
        debug_assert!(delta.leading().is_none_or(|(m, _)| m < n));
    }
    RelationSet { q, a, b, pairs }
}

/// Outcome of an exact identity check, carrying the nonzero difference as a
/// witness on failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verification {
    Holds,
    Fails(RatFunc),
}

impl Verification {
    pub fn holds(&self) -> bool {
        matches!(self, Verification::Holds)
    }

    pub fn witness(&self) -> Option<&RatFunc> {
        match self {
            Verification::Holds => None,
            Verification::Fails(diff) => Some(diff),
        }
    }
}

/// Checks S_d(a) S_d(b) - S_d(a+b) = Sum f_i S_d(a_i, a+b-a_i) by exact
/// rational arithmetic at the given depth d.
pub fn verify_relation_exact(
    sums: &mut PowerSums,
    rel: &RelationSet,
    d: u32,
) -> Result<Verification, Error> {
    let ctx = sums.ctx().clone();
    assert_eq!(rel.q, ctx.q(), "relation set belongs to a different field");
    let lhs = delta_d(sums, d, rel.a, rel.b)?;
    let w = rel.weight();
    let mut terms = Vec::with_capacity(rel.pairs.len());
    for &(f, index) in &rel.pairs {
        let nested = sums.nested(d, &[index, w - index])?;
        terms.push(nested.scale(ctx.embed_prime(f)));
    }
    let rhs = RatFunc::sum_many(&ctx, terms);
    let diff = &lhs - &rhs;
    Ok(if diff.is_zero() { Verification::Holds } else { Verification::Fails(diff) })
}

/// A multizeta index (s_1, ..., s_r) of depth r and weight s_1 + ... + s_r.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MZIndex(pub Vec<u64>);

impl MZIndex {
    pub fn weight(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for MZIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "zeta({})", parts.join(","))
    }
}

/// A formal Z/pZ-linear combination of multizeta indices, deduplicated with
/// no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MZExpression {
    p: u64,
    terms: BTreeMap<MZIndex, u64>,
}

impl MZExpression {
    pub fn new(p: u64) -> MZExpression {
        MZExpression { p, terms: BTreeMap::new() }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Adds coeff * zeta(index), merging modulo p; cancellations to zero
    /// drop the term.
    pub fn add_term(&mut self, index: MZIndex, coeff: u64) {
        let c = (self.terms.get(&index).copied().unwrap_or(0) + coeff % self.p) % self.p;
        if c == 0 {
            self.terms.remove(&index);
        } else {
            self.terms.insert(index, c);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MZIndex, u64)> + '_ {
        self.terms.iter().map(|(idx, &c)| (idx, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common weight when all terms share one, as produced by
    /// [`shuffle_expand`].
    pub fn homogeneous_weight(&self) -> Option<u64> {
        let mut weights = self.terms.keys().map(MZIndex::weight);
        let first = weights.next()?;
        weights.all(|w| w == first).then_some(first)
    }
}

impl fmt::Display for MZExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c == 1 {
                write!(f, "{idx}")?;
            } else {
                write!(f, "{c}*{idx}")?;
            }
        }
        Ok(())
    }
}

/// The right side of the shuffle identity for zeta(a) zeta(b):
/// zeta(a+b) + zeta(a,b) + zeta(b,a) + Sum f_i zeta(a_i, a+b-a_i),
/// merged over Z/pZ. Every term has weight a + b.
pub fn shuffle_expand(ctx: &FieldCtx, a: u64, b: u64) -> MZExpression {
    let rel = derive_relation(ctx, a, b);
    let w = a + b;
    let mut expr = MZExpression::new(ctx.p());
    expr.add_term(MZIndex(vec![w]), 1);
    expr.add_term(MZIndex(vec![a, b]), 1);
    expr.add_term(MZIndex(vec![b, a]), 1);
    for &(f, index) in &rel.pairs {
        expr.add_term(MZIndex(vec![index, w - index]), f);
    }
    expr
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::powersum::{upoly_eval, UPoly};

    fn f2() -> FieldCtx {
        make_field(2, 1).unwrap()
    }

    fn f3() -> FieldCtx {
        make_field(3, 1).unwrap()
    }

    #[test]
    fn delta_examples() {
        let ctx = f2();
        let mut sums = PowerSums::new(&ctx);
        // q = 2: S_1(1)^2 - S_1(2) = 0, so zeta(1)^2 = zeta(2).
        assert!(delta_d(&mut sums, 1, 1, 1).unwrap().is_zero());
        // q = 2: Delta(1, 2) = S_1(2) = 1/[1]^2.
        assert_eq!(
            delta_d(&mut sums, 1, 1, 2).unwrap(),
            RatFunc::parse(&ctx, "1/(t^4 + t^2)").unwrap()
        );

        // Delta(1, b) = 0 for 1 <= b <= q - 1.
        for (p, s) in [(3u64, 1u32), (2, 2), (5, 1)] {
            let ctx = make_field(p, s).unwrap();
            let mut sums = PowerSums::new(&ctx);
            for b in 1..ctx.q() {
                assert!(delta_d(&mut sums, 1, 1, b).unwrap().is_zero(), "q={}, b={b}", ctx.q());
            }
        }
    }

    #[test]
    fn delta_is_symmetric() {
        let ctx = f3();
        let mut sums = PowerSums::new(&ctx);
        for d in 1..=2u32 {
            for a in 1..=6u64 {
                for b in 1..=6u64 {
                    assert_eq!(
                        delta_d(&mut sums, d, a, b).unwrap(),
                        delta_d(&mut sums, d, b, a).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn derive_relation_examples() {
        let ctx = f2();
        assert!(derive_relation(&ctx, 1, 1).pairs.is_empty());
        assert_eq!(derive_relation(&ctx, 1, 2).pairs, vec![(1, 2)]);

        // (q^n, q^n - 1) always reduces to the single pair (-1, q^n).
        for (p, s) in [(2u64, 1u32), (3, 1), (2, 2)] {
            let ctx = make_field(p, s).unwrap();
            let q = ctx.q();
            for n in 1..=2u32 {
                let rel = derive_relation(&ctx, q.pow(n), q.pow(n) - 1);
                assert_eq!(rel.pairs, vec![(p - 1, q.pow(n))], "q={q}, n={n}");
            }
        }
    }

    #[test]
    fn derivation_grid_invariants() {
        // Termination bound, parity, symmetry, and reduction exactness over
        // the full grid a + b <= 40.
        for (p, s) in [(2u64, 1u32), (3, 1)] {
            let ctx = make_field(p, s).unwrap();
            let q = ctx.q();
            for a in 1..40u64 {
                for b in 1..=a {
                    if a + b > 40 {
                        continue;
                    }
                    let rel = derive_relation(&ctx, a, b);
                    rel.check_invariants(p);
                    assert!(rel.pairs.len() as u64 <= (a + b) / (q - 1) + 1);
                    assert_eq!(rel, {
                        let mut sym = derive_relation(&ctx, b, a);
                        std::mem::swap(&mut sym.a, &mut sym.b);
                        sym
                    });
                    // Sum f_i S_1(a_i) reassembles Delta(a, b) in U-form.
                    let mut delta = s1_closed_form(&ctx, a)
                        .to_upoly(p)
                        .mul(&s1_closed_form(&ctx, b).to_upoly(p));
                    delta.sub_scaled(&s1_closed_form(&ctx, a + b).to_upoly(p), 1);
                    let mut rebuilt = UPoly::zero(p);
                    for &(f, index) in &rel.pairs {
                        let mut part = s1_closed_form(&ctx, index).to_upoly(p);
                        part = part.mul(&UPoly::monomial(p, 0, f));
                        rebuilt = rebuilt.add(&part);
                    }
                    assert_eq!(rebuilt, delta, "q={q}, a={a}, b={b}");
                }
            }
        }
    }

    #[test]
    fn derivation_matches_exact_delta_at_depth_one() {
        let ctx = f3();
        let mut sums = PowerSums::new(&ctx);
        for a in 1..=7u64 {
            for b in 1..=7u64 {
                let rel = derive_relation(&ctx, a, b);
                let delta = delta_d(&mut sums, 1, a, b).unwrap();
                let mut rhs = RatFunc::zero(&ctx);
                for &(f, index) in &rel.pairs {
                    let v = upoly_eval(&ctx, &s1_closed_form(&ctx, index).to_upoly(3));
                    rhs = &rhs + &v.scale(ctx.embed_prime(f));
                }
                assert_eq!(delta, rhs, "a={a}, b={b}");
            }
        }
    }

    #[test]
    fn verification_lifts_to_higher_depth() {
        let ctx = f2();
        let mut sums = PowerSums::new(&ctx);
        let rel = derive_relation(&ctx, 1, 2);
        for d in 1..=2u32 {
            assert!(verify_relation_exact(&mut sums, &rel, d).unwrap().holds());
        }

        let ctx3 = f3();
        let mut sums3 = PowerSums::new(&ctx3);
        let rel = derive_relation(&ctx3, 3, 2);
        assert!(verify_relation_exact(&mut sums3, &rel, 2).unwrap().holds());
    }

    #[test]
    fn verification_reports_a_witness_for_forged_pairs() {
        let ctx = f2();
        let mut sums = PowerSums::new(&ctx);
        let forged = RelationSet { q: 2, a: 1, b: 2, pairs: vec![(1, 1)] };
        let outcome = verify_relation_exact(&mut sums, &forged, 1).unwrap();
        assert!(!outcome.holds());
        assert!(!outcome.witness().unwrap().is_zero());
    }

    #[test]
    fn shuffle_expansion_merges_in_characteristic() {
        // q = 2: zeta(1) zeta(1) = zeta(2); the 2 zeta(1,1) term vanishes.
        let ctx = f2();
        let expr = shuffle_expand(&ctx, 1, 1);
        let terms: Vec<(MZIndex, u64)> = expr.terms().map(|(i, c)| (i.clone(), c)).collect();
        assert_eq!(terms, vec![(MZIndex(vec![2]), 1)]);

        // Large indices at q = 3, n = 1: zeta(3) zeta(2) = zeta(5) + zeta(2,3).
        let ctx3 = f3();
        let expr = shuffle_expand(&ctx3, 3, 2);
        let terms: Vec<(MZIndex, u64)> = expr.terms().map(|(i, c)| (i.clone(), c)).collect();
        assert_eq!(
            terms,
            vec![(MZIndex(vec![2, 3]), 1), (MZIndex(vec![5]), 1)],
            "expr = {expr}"
        );
    }

    #[test]
    fn shuffle_expansion_is_weight_homogeneous_and_symmetric() {
        let ctx = f3();
        for a in 1..=8u64 {
            for b in 1..=8u64 {
                let expr = shuffle_expand(&ctx, a, b);
                assert_eq!(expr.homogeneous_weight(), Some(a + b));
                assert_eq!(expr, shuffle_expand(&ctx, b, a));
            }
        }
    }

    #[test]
    fn relation_set_json_schema() {
        let rel = RelationSet { q: 2, a: 1, b: 2, pairs: vec![(1, 2)] };
        let text = serde_json::to_string(&rel).unwrap();
        assert_eq!(text, r#"{"q":2,"a":1,"b":2,"pairs":[[1,2]]}"#);
        let back: RelationSet = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rel);
    }

    #[test]
    fn from_terms_merges_and_orders() {
        let rel = RelationSet::from_terms(3, 3, 2, 4, [(2, 4), (2, 2), (1, 4), (2, 2)]);
        // 2 + 1 = 0 mod 3 at index 4; 2 + 2 = 1 mod 3 at index 2.
        assert_eq!(rel.pairs, vec![(1, 2)]);
        rel.check_invariants(3);
    }

    #[test]
    fn mz_display() {
        let ctx = f3();
        let expr = shuffle_expand(&ctx, 1, 4);
        let text = expr.to_string();
        assert!(text.contains("zeta(5)"), "text = {text}");
        assert!(text.contains("zeta(1,4)"), "text = {text}");
    }
}
