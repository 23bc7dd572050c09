//! Truncated multizeta values in F_q((1/t)) and numeric verification of
//! shuffle identities as Laurent-series equalities.
//!
//! zeta(s_1, ..., s_r) sums the products S_{d_1}(s_1) ... S_{d_r}(s_r) over
//! strictly decreasing degree chains d_1 > ... > d_r >= 0. Each chain's
//! product is formed exactly in K and embedded once, so the only truncation
//! is the final cut at the requested order.
//!
//! Chains are pruned by a proven valuation bound: expanding
//! 1/m^s = u^{ds} (1 + w)^{-s} over all monic m of degree d, a monomial
//! survives the coefficient-space sum only when every one of the d free
//! coordinates appears with exponent a positive multiple of q - 1, forcing
//!
//!   val(S_d(s)) >= d s + (q - 1) d (d + 1) / 2.
//!
//! Any chain whose bounds sum past the precision contributes nothing to the
//! retained orders and is skipped.

use crate::error::Error;
use crate::laurent::LaurentTail;
use crate::polyring::RatFunc;
use crate::powersum::PowerSums;
use crate::relations::{shuffle_expand, MZIndex};

/// A multizeta evaluation request: the index tuple and the absolute u-order
/// through which coefficients are wanted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaRequest {
    pub index: MZIndex,
    pub precision: i64,
}

impl ZetaRequest {
    pub fn new(index: Vec<u64>, precision: i64) -> ZetaRequest {
        ZetaRequest { index: MZIndex(index), precision }
    }
}

/// Lower bound d s + (q - 1) d (d + 1) / 2 on the valuation of S_d(s).
pub fn valuation_lower_bound(q: u64, d: u32, s: u64) -> i64 {
    let d = d as i64;
    d * s as i64 + (q as i64 - 1) * d * (d + 1) / 2
}

/// The truncated multizeta value, correct through u^precision.
///
/// Fails when a contributing chain needs a degree whose enumeration exceeds
/// the cache's budget.
pub fn zeta_trunc(sums: &mut PowerSums, req: &ZetaRequest) -> Result<LaurentTail, Error> {
    let index = &req.index.0;
    assert!(
        !index.is_empty() && index.iter().all(|&s| s >= 1),
        "multizeta indices must be positive"
    );
    assert!(req.precision >= 1, "precision must be at least 1");
    let ctx = sums.ctx().clone();
    let mut acc = LaurentTail::zero(&ctx, req.precision);
    let start = RatFunc::one(&ctx);
    chains(sums, index, 0, None, req.precision, &start, req.precision, &mut acc)?;
    Ok(acc)
}

#[allow(clippy::too_many_arguments)]
fn chains(
    sums: &mut PowerSums,
    index: &[u64],
    pos: usize,
    upper: Option<u32>,
    remaining: i64,
    partial: &RatFunc,
    prec: i64,
    acc: &mut LaurentTail,
) -> Result<(), Error> {
    if pos == index.len() {
        *acc = &*acc + &LaurentTail::from_ratfunc(partial, prec);
        return Ok(());
    }
    let s = index[pos];
    let q = sums.ctx().q();
    // Positions below this one still need strictly smaller degrees.
    let floor = (index.len() - pos - 1) as u32;
    let mut d = floor;
    loop {
        if upper.is_some_and(|u| d >= u) {
            break;
        }
        let bound = valuation_lower_bound(q, d, s);
        if bound > remaining {
            break;
        }
        let value = sums.s_d(d, s as i64)?;
        if !value.is_zero() {
            let next = partial * &value;
            chains(sums, index, pos + 1, Some(d), remaining - bound, &next, prec, acc)?;
        }
        d += 1;
    }
    Ok(())
}

/// Outcome of a coefficient-by-coefficient series comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesMatch {
    Agrees,
    MismatchAt(i64),
}

impl SeriesMatch {
    pub fn agrees(&self) -> bool {
        matches!(self, SeriesMatch::Agrees)
    }
}

/// Compares zeta(a) zeta(b) against the expanded shuffle combination
/// through u^precision, reporting the first mismatching order.
pub fn verify_shuffle_numeric(
    sums: &mut PowerSums,
    a: u64,
    b: u64,
    precision: i64,
) -> Result<SeriesMatch, Error> {
    let ctx = sums.ctx().clone();
    let lhs = {
        let za = zeta_trunc(sums, &ZetaRequest::new(vec![a], precision))?;
        let zb = zeta_trunc(sums, &ZetaRequest::new(vec![b], precision))?;
        &za * &zb
    };
    let mut rhs = LaurentTail::zero(&ctx, precision);
    let expansion = shuffle_expand(&ctx, a, b);
    for (idx, coeff) in expansion.terms() {
        let tail = zeta_trunc(sums, &ZetaRequest { index: idx.clone(), precision })?;
        rhs = &rhs + &tail.scale(ctx.embed_prime(coeff));
    }
    Ok(match lhs.agrees_with(&rhs) {
        None => SeriesMatch::Agrees,
        Some(order) => SeriesMatch::MismatchAt(order),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::field::FieldCtx;

    fn f2() -> FieldCtx {
        make_field(2, 1).unwrap()
    }

    fn f3() -> FieldCtx {
        make_field(3, 1).unwrap()
    }

    #[test]
    fn single_zeta_has_constant_term_one() {
        for ctx in [f2(), f3()] {
            let mut sums = PowerSums::new(&ctx);
            for s in [1u64, 2, 5] {
                let tail = zeta_trunc(&mut sums, &ZetaRequest::new(vec![s], 10)).unwrap();
                assert_eq!(tail.valuation(), Some(0), "q={}, s={s}", ctx.q());
                assert_eq!(tail.coefficient(0), Some(ctx.one()));
            }
        }
    }

    #[test]
    fn depth_one_matches_the_partial_sums_of_embeddings() {
        let ctx = f3();
        let mut sums = PowerSums::new(&ctx);
        let n = 20;
        for s in [1u64, 4] {
            let zeta = zeta_trunc(&mut sums, &ZetaRequest::new(vec![s], n)).unwrap();
            let mut partial = LaurentTail::zero(&ctx, n);
            let mut d = 0u32;
            while valuation_lower_bound(3, d, s) <= n {
                let v = sums.s_d(d, s as i64).unwrap();
                partial = &partial + &LaurentTail::from_ratfunc(&v, n);
                d += 1;
            }
            assert_eq!(zeta.agrees_with(&partial), None, "s = {s}");
        }
    }

    #[test]
    fn square_of_zeta_one_is_zeta_two_at_q_two() {
        let ctx = f2();
        let mut sums = PowerSums::new(&ctx);
        assert!(verify_shuffle_numeric(&mut sums, 1, 1, 40).unwrap().agrees());
    }

    #[test]
    fn zeta_two_times_zeta_one_at_q_two() {
        // zeta(2) zeta(1) = zeta(3) + zeta(1,2) through u^40.
        let ctx = f2();
        let mut sums = PowerSums::new(&ctx);
        assert!(verify_shuffle_numeric(&mut sums, 2, 1, 40).unwrap().agrees());

        // The same identity, assembled by hand.
        let lhs = &zeta_trunc(&mut sums, &ZetaRequest::new(vec![2], 40)).unwrap()
            * &zeta_trunc(&mut sums, &ZetaRequest::new(vec![1], 40)).unwrap();
        let rhs = &zeta_trunc(&mut sums, &ZetaRequest::new(vec![3], 40)).unwrap()
            + &zeta_trunc(&mut sums, &ZetaRequest::new(vec![1, 2], 40)).unwrap();
        assert_eq!(lhs.agrees_with(&rhs), None);
    }

    #[test]
    fn derived_relation_passes_numeric_check_at_q_three() {
        let ctx = f3();
        let mut sums = PowerSums::new(&ctx);
        assert!(verify_shuffle_numeric(&mut sums, 2, 5, 30).unwrap().agrees());
    }

    #[test]
    fn refinement_keeps_reported_coefficients() {
        let ctx = f2();
        let mut sums = PowerSums::new(&ctx);
        let coarse = zeta_trunc(&mut sums, &ZetaRequest::new(vec![1, 2], 20)).unwrap();
        let fine = zeta_trunc(&mut sums, &ZetaRequest::new(vec![1, 2], 35)).unwrap();
        assert_eq!(coarse.agrees_with(&fine), None);

        let ctx3 = f3();
        let mut sums3 = PowerSums::new(&ctx3);
        let coarse = zeta_trunc(&mut sums3, &ZetaRequest::new(vec![5], 15)).unwrap();
        let fine = zeta_trunc(&mut sums3, &ZetaRequest::new(vec![5], 25)).unwrap();
        assert_eq!(coarse.agrees_with(&fine), None);
    }

    #[test]
    fn depth_two_valuation_bound() {
        // The minimal admissible chain for (s1, s2) is (1, 0), so the
        // valuation is at least s1 (and our sharper bound adds q - 1).
        let ctx = f3();
        let mut sums = PowerSums::new(&ctx);
        for (s1, s2) in [(1u64, 1u64), (2, 1), (3, 2)] {
            let tail = zeta_trunc(&mut sums, &ZetaRequest::new(vec![s1, s2], 25)).unwrap();
            let val = tail.valuation().expect("nonzero through u^25");
            assert!(
                val >= valuation_lower_bound(3, 1, s1),
                "(s1, s2) = ({s1}, {s2}): val = {val}"
            );
        }
    }

    #[test]
    fn budget_errors_surface() {
        let ctx = f2();
        let mut sums = PowerSums::with_budget(&ctx, 4);
        let err = zeta_trunc(&mut sums, &ZetaRequest::new(vec![5], 30));
        assert!(matches!(err, Err(Error::BudgetExceeded(_))));
    }
}
