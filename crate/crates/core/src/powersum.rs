//! Power sums S_d(k) over the monic polynomials of degree d, computed by
//! honest enumeration and by the closed forms that cover special shapes of
//! (d, k), plus the canonical polynomial form of S_1-expressions in the
//! variable U = 1/(t^q - t).
//!
//! The degree-one sums have an exact expansion
//!
//!   S_1(a) = alpha_{a,0} U^{phi_a(0)} + ... + alpha_{a,n_a} U^{phi_a(n_a)},
//!
//! with phi_a(i) = a - i(q-1) and binomial coefficients mod p; everything in
//! the relation machinery reduces S_1-identities in this form.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::field::{digits, lucas_binom, FieldCtx};
use crate::polyring::{
    monic_polys_with_budget, BracketCache, FqPoly, RatFunc, DEFAULT_ENUM_BUDGET, MAX_POLY_DEGREE,
};

/// A sparse polynomial in the formal symbol U with coefficients in Z/pZ.
/// No zero coefficients are stored; exponents are nonnegative.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UPoly {
    p: u64,
    terms: BTreeMap<u64, u64>,
}

impl UPoly {
    pub fn zero(p: u64) -> UPoly {
        UPoly { p, terms: BTreeMap::new() }
    }

    pub fn monomial(p: u64, exponent: u64, coeff: u64) -> UPoly {
        let mut out = UPoly::zero(p);
        out.add_term(exponent, coeff);
        out
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Term list as (exponent, coefficient), ascending in the exponent.
    pub fn terms(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    /// Highest exponent with its coefficient.
    pub fn leading(&self) -> Option<(u64, u64)> {
        self.terms.iter().next_back().map(|(&e, &c)| (e, c))
    }

    pub fn coeff(&self, exponent: u64) -> u64 {
        self.terms.get(&exponent).copied().unwrap_or(0)
    }

    /// Adds c * U^exponent in place.
    pub fn add_term(&mut self, exponent: u64, coeff: u64) {
        let c = (self.coeff(exponent) + coeff % self.p) % self.p;
        if c == 0 {
            self.terms.remove(&exponent);
        } else {
            self.terms.insert(exponent, c);
        }
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        assert_eq!(self.p, other.p, "mismatched coefficient moduli");
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        out
    }

    /// Subtracts f * other in place.
    pub fn sub_scaled(&mut self, other: &UPoly, f: u64) {
        assert_eq!(self.p, other.p, "mismatched coefficient moduli");
        let neg = (self.p - f % self.p) % self.p;
        for (e, c) in other.terms() {
            self.add_term(e, c * neg % self.p);
        }
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        assert_eq!(self.p, other.p, "mismatched coefficient moduli");
        let mut out = UPoly::zero(self.p);
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                out.add_term(e1 + e2, c1 * c2 % self.p);
            }
        }
        out
    }
}

/// One term of the degree-one closed form: index i, exponent
/// phi_a(i) = a - i(q-1), and the coefficient alpha_{a,i} in Z/pZ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct S1Term {
    pub i: u64,
    pub exponent: u64,
    pub coeff: u64,
}

/// The closed form of S_1(a) as a U-polynomial, with zero coefficients
/// dropped. Every exponent is congruent to a modulo q - 1 and lies in (0, a].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct S1Form {
    pub a: u64,
    pub terms: Vec<S1Term>,
}

impl S1Form {
    pub fn to_upoly(&self, p: u64) -> UPoly {
        let mut out = UPoly::zero(p);
        for t in &self.terms {
            out.add_term(t.exponent, t.coeff);
        }
        out
    }
}

/// The closed form of S_1(a): alpha_{a,0} = (-1)^a,
/// alpha_{a,i} = C(a - 1 - i(q-1), i) (-1)^{a+i} for 1 <= i <= (a-1)/q.
pub fn s1_closed_form(ctx: &FieldCtx, a: u64) -> S1Form {
    assert!(a >= 1, "S_1(a) requires a >= 1");
    let p = ctx.p();
    let q = ctx.q();
    let sign = |parity: u64| if parity.is_multiple_of(2) { 1 } else { p - 1 };
    let mut terms = vec![S1Term { i: 0, exponent: a, coeff: sign(a) }];
    for i in 1..=(a - 1) / q {
        let c = lucas_binom(a - 1 - i * (q - 1), i, p) * sign(a + i) % p;
        if c != 0 {
            terms.push(S1Term { i, exponent: a - i * (q - 1), coeff: c });
        }
    }
    S1Form { a, terms }
}

/// Substitutes U = 1/(t^q - t) exactly, lifting coefficients through the
/// prime subfield.
pub fn upoly_eval(ctx: &FieldCtx, x: &UPoly) -> RatFunc {
    assert_eq!(ctx.p(), x.p(), "coefficient modulus does not match the field");
    if x.is_zero() {
        return RatFunc::zero(ctx);
    }
    // Numerator = sum of theta_e [1]^{E - e} over the common power [1]^E.
    let bracket1 = {
        let q = ctx.q() as usize;
        let mut coeffs = vec![ctx.zero(); q + 1];
        coeffs[1] = ctx.neg(ctx.one());
        coeffs[q] = ctx.one();
        FqPoly::from_coeffs(ctx, coeffs)
    };
    let top = x.leading().unwrap().0;
    let mut num = FqPoly::zero(ctx);
    let mut power = FqPoly::one(ctx);
    let mut power_exp = 0u64;
    for (e, c) in x.terms().collect::<Vec<_>>().into_iter().rev() {
        let gap = (top - e) - power_exp;
        if gap > 0 {
            power = &power * &bracket1.pow(gap);
            power_exp += gap;
        }
        num = &num + &power.scale(ctx.embed_prime(c));
    }
    RatFunc::new(num, bracket1.pow(top))
}

/// S_d(k) by enumerating all q^d monic polynomials of degree d, with the
/// default budget. Exact; for k <= 0 the result is a polynomial.
pub fn s_d_bruteforce(ctx: &FieldCtx, d: u32, k: i64) -> Result<RatFunc, Error> {
    s_d_bruteforce_with_budget(ctx, d, k, DEFAULT_ENUM_BUDGET)
}

/// [`s_d_bruteforce`] with an explicit enumeration budget.
pub fn s_d_bruteforce_with_budget(
    ctx: &FieldCtx,
    d: u32,
    k: i64,
    budget: u64,
) -> Result<RatFunc, Error> {
    let iter = monic_polys_with_budget(ctx, d, budget)?;
    if k > 0 {
        let one = FqPoly::one(ctx);
        Ok(RatFunc::sum_many(
            ctx,
            iter.map(|m| RatFunc::new(one.clone(), m.pow(k as u64))),
        ))
    } else {
        let e = k.unsigned_abs();
        let mut acc = FqPoly::zero(ctx);
        for m in iter {
            acc = &acc + &m.pow(e);
        }
        Ok(RatFunc::from_poly(acc))
    }
}

/// Closed-form dispatcher for special shapes of (d, k):
///
/// - k = a p^n with a <= q: S_d(k) = 1/l_d^k;
/// - k = q^i - 1: S_d(k) = [d+i-1]...[d+1] / ([i-1]...[1] l_d^{q^i - 1});
/// - d = 1, k = 2 q^n - 1: S_1(k) = -[n+1]/[1]^{2 q^n};
/// - k = -m with d(q-1) greater than the base-q digit sum of m: 0;
/// - k = -(q^{d+j} - 1), j >= 0: S_d(k) = (-1)^d D_{d+j} / (L_d D_j^{q^d}).
///
/// Returns None when (d, k) matches no pattern or the closed form does not
/// fit the width limits. A returned value always equals the brute-force sum.
pub fn s_d_special(ctx: &FieldCtx, d: u32, k: i64) -> Option<RatFunc> {
    let q = ctx.q();
    let p = ctx.p();
    let mut cache = BracketCache::new(ctx);
    let ell_deg = checked_ell_degree(q, d)?;

    if k > 0 {
        let k = k as u64;
        // Strip p-powers: k = k0 p^v with p not dividing k0.
        let mut k0 = k;
        while k0.is_multiple_of(p) {
            k0 /= p;
        }
        if k0 <= q && ell_deg.checked_mul(k).is_some_and(|g| g <= MAX_POLY_DEGREE) {
            let ell = cache.ell(d).ok()?;
            return Some(RatFunc::new(FqPoly::one(ctx), ell.pow(k)));
        }
        if let Some(i) = exact_log(q, k + 1) {
            // k = q^i - 1 with i >= 1.
            if ell_deg.checked_mul(k).is_some_and(|g| g <= MAX_POLY_DEGREE)
                && q.checked_pow(d + i - 1).is_some_and(|g| g <= MAX_POLY_DEGREE)
            {
                let mut num = FqPoly::one(ctx);
                for j in d + 1..d + i {
                    num = &num * &cache.bracket(j).ok()?;
                }
                let mut den = cache.ell(d).ok()?.pow(k);
                for j in 1..i {
                    den = &den * &cache.bracket(j).ok()?;
                }
                return Some(RatFunc::new(num, den));
            }
        }
        if d == 1 && k % 2 == 1 {
            if let Some(n) = exact_log(q, k.div_ceil(2)) {
                // k = 2 q^n - 1.
                if q.checked_pow(n + 1).is_some_and(|g| g <= MAX_POLY_DEGREE)
                    && q.checked_mul(k + 1).is_some_and(|g| g <= MAX_POLY_DEGREE)
                {
                    let num = -cache.bracket(n + 1).ok()?;
                    let den = cache.bracket(1).ok()?.pow(k + 1);
                    return Some(RatFunc::new(num, den));
                }
            }
        }
        return None;
    }

    if k < 0 {
        let m = k.unsigned_abs();
        let digit_sum: u64 = digits(m, q).digits.iter().sum();
        if (d as u64) * (q - 1) > digit_sum {
            return Some(RatFunc::zero(ctx));
        }
        if let Some(e) = exact_log(q, m + 1) {
            if e >= d {
                let j = e - d;
                let fits = |n: u32| {
                    q.checked_pow(n)
                        .and_then(|g| g.checked_mul(n as u64))
                        .is_some_and(|g| g <= MAX_POLY_DEGREE)
                };
                if fits(d + j)
                    && q.checked_pow(j)
                        .and_then(|g| g.checked_mul(j as u64))
                        .and_then(|g| g.checked_mul(q.checked_pow(d)?))
                        .is_some_and(|g| g <= MAX_POLY_DEGREE)
                {
                    let mut num = cache.dfact(d + j).ok()?;
                    if d % 2 == 1 {
                        num = -num;
                    }
                    let den = &cache.lfact(d).ok()? * &cache.dfact(j).ok()?.pow(q.pow(d));
                    return Some(RatFunc::new(num, den));
                }
            }
        }
    }

    None
}

/// deg l_d = q + q^2 + ... + q^d, or None past the width limits.
fn checked_ell_degree(q: u64, d: u32) -> Option<u64> {
    let mut acc = 0u64;
    let mut power = 1u64;
    for _ in 0..d {
        power = power.checked_mul(q)?;
        acc = acc.checked_add(power)?;
    }
    Some(acc)
}

/// i with base^i = x, for x >= base (i >= 1).
fn exact_log(base: u64, x: u64) -> Option<u32> {
    let mut acc = base;
    let mut i = 1;
    while acc < x {
        acc = acc.checked_mul(base)?;
        i += 1;
    }
    (acc == x).then_some(i)
}

/// Nested power sum S_d(s_1, ..., s_r) with a throwaway cache; see
/// [`PowerSums::nested`] for repeated evaluation.
pub fn s_d_nested(ctx: &FieldCtx, d: u32, s: &[u64]) -> Result<RatFunc, Error> {
    PowerSums::new(ctx).nested(d, s)
}

/// Memoizing evaluator for S_d(k) and the nested sums built from them.
///
/// Values are computed once per (d, k): the closed-form dispatcher answers
/// when it can, and honest enumeration covers the rest.
pub struct PowerSums {
    ctx: FieldCtx,
    budget: u64,
    values: BTreeMap<(u32, i64), RatFunc>,
    below: BTreeMap<(u32, i64), RatFunc>,
}

impl PowerSums {
    pub fn new(ctx: &FieldCtx) -> PowerSums {
        PowerSums::with_budget(ctx, DEFAULT_ENUM_BUDGET)
    }

    pub fn with_budget(ctx: &FieldCtx, budget: u64) -> PowerSums {
        PowerSums { ctx: ctx.clone(), budget, values: BTreeMap::new(), below: BTreeMap::new() }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// S_d(k), memoized.
    pub fn s_d(&mut self, d: u32, k: i64) -> Result<RatFunc, Error> {
        if let Some(v) = self.values.get(&(d, k)) {
            return Ok(v.clone());
        }
        let v = match s_d_special(&self.ctx, d, k) {
            Some(v) => v,
            None => s_d_bruteforce_with_budget(&self.ctx, d, k, self.budget)?,
        };
        self.values.insert((d, k), v.clone());
        Ok(v)
    }

    /// Sum of S_e(k) over 0 <= e < d, memoized.
    pub fn sum_below(&mut self, d: u32, k: i64) -> Result<RatFunc, Error> {
        if let Some(v) = self.below.get(&(d, k)) {
            return Ok(v.clone());
        }
        let v = if d == 0 {
            RatFunc::zero(&self.ctx)
        } else {
            let prev = self.sum_below(d - 1, k)?;
            &prev + &self.s_d(d - 1, k)?
        };
        self.below.insert((d, k), v.clone());
        Ok(v)
    }

    /// Nested power sum S_d(s_1, ..., s_r) = S_d(s_1) multiplied by the sum
    /// over strictly decreasing chains d > d_2 > ... > d_r >= 0 of the
    /// products S_{d_i}(s_i). For r = 1 this is S_d(s_1); when d < r - 1
    /// there are no chains and the value is 0.
    pub fn nested(&mut self, d: u32, s: &[u64]) -> Result<RatFunc, Error> {
        assert!(!s.is_empty(), "nested power sums need at least one index");
        assert!(s.iter().all(|&x| x >= 1), "indices must be positive");
        let first = self.s_d(d, s[0] as i64)?;
        if s.len() == 1 {
            return Ok(first);
        }
        if first.is_zero() {
            return Ok(first);
        }
        let rest = self.chain_sum(d, &s[1..])?;
        Ok(&first * &rest)
    }

    /// Sum over chains bound > d_2 > ... of the products of S values.
    fn chain_sum(&mut self, bound: u32, rest: &[u64]) -> Result<RatFunc, Error> {
        if rest.len() == 1 {
            return self.sum_below(bound, rest[0] as i64);
        }
        let mut acc = RatFunc::zero(&self.ctx);
        for d2 in 0..bound {
            let head = self.s_d(d2, rest[0] as i64)?;
            if head.is_zero() {
                continue;
            }
            let tail = self.chain_sum(d2, &rest[1..])?;
            acc = &acc + &(&head * &tail);
        }
        Ok(acc)
    }
}
