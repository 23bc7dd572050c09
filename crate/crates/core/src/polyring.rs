//! Polynomials in t over F_q, normalized rational functions (the field K),
//! and the bracket quantities [n], l_n, D_n, L_n.
//!
//! [`FqPoly`] stores dense coefficients with no trailing zeros, so equality
//! is structural. [`RatFunc`] keeps a monic denominator coprime to the
//! numerator, making each value's representation unique.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Error;
use crate::field::{FieldCtx, FqElem};

/// Default cap on q^d when enumerating all monic polynomials of degree d.
pub const DEFAULT_ENUM_BUDGET: u64 = 1 << 24;

/// Largest storable polynomial degree (dense coefficients).
pub const MAX_POLY_DEGREE: u64 = 1 << 24;

/// A polynomial in t over F_q. Coefficients are indexed by degree and the
/// top stored coefficient is nonzero; the zero polynomial stores nothing.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FqPoly {
    ctx: FieldCtx,
    coeffs: Vec<FqElem>,
}

impl FqPoly {
    pub fn zero(ctx: &FieldCtx) -> FqPoly {
        FqPoly { ctx: ctx.clone(), coeffs: Vec::new() }
    }

    pub fn one(ctx: &FieldCtx) -> FqPoly {
        FqPoly::constant(ctx, ctx.one())
    }

    pub fn constant(ctx: &FieldCtx, c: FqElem) -> FqPoly {
        FqPoly::from_coeffs(ctx, vec![c])
    }

    /// The variable t.
    pub fn t(ctx: &FieldCtx) -> FqPoly {
        FqPoly::from_coeffs(ctx, vec![ctx.zero(), ctx.one()])
    }

    /// c * t^deg.
    pub fn monomial(ctx: &FieldCtx, c: FqElem, deg: usize) -> FqPoly {
        let mut coeffs = vec![ctx.zero(); deg + 1];
        coeffs[deg] = c;
        FqPoly::from_coeffs(ctx, coeffs)
    }

    /// Builds a polynomial from coefficients (low degree first), trimming
    /// trailing zeros.
    pub fn from_coeffs(ctx: &FieldCtx, mut coeffs: Vec<FqElem>) -> FqPoly {
        while coeffs.last() == Some(&ctx.zero()) {
            coeffs.pop();
        }
        FqPoly { ctx: ctx.clone(), coeffs }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs.get(i).copied().unwrap_or(self.ctx.zero())
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn leading(&self) -> FqElem {
        self.coeffs.last().copied().unwrap_or(self.ctx.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == self.ctx.one()
    }

    pub fn scale(&self, c: FqElem) -> FqPoly {
        if c == self.ctx.zero() {
            return FqPoly::zero(&self.ctx);
        }
        let coeffs = self.coeffs.iter().map(|&a| self.ctx.mul(a, c)).collect();
        FqPoly::from_coeffs(&self.ctx, coeffs)
    }

    pub fn make_monic(&self) -> FqPoly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(self.ctx.inv(self.leading()))
    }

    fn nonzero_terms(&self) -> usize {
        let zero = self.ctx.zero();
        self.coeffs.iter().filter(|&&c| c != zero).count()
    }

    /// The p-th power, realized as the coefficient Frobenius with exponents
    /// spread by p.
    pub fn frobenius(&self) -> FqPoly {
        let ctx = &self.ctx;
        let p = ctx.p() as usize;
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![ctx.zero(); (self.coeffs.len() - 1) * p + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != ctx.zero() {
                coeffs[i * p] = ctx.pow(c, ctx.p());
            }
        }
        FqPoly::from_coeffs(ctx, coeffs)
    }

    /// self^k. Factors k through its base-p digits so that most of the work
    /// happens on the sparse Frobenius powers self^{p^j}.
    pub fn pow(&self, k: u64) -> FqPoly {
        let ctx = &self.ctx;
        if k == 0 {
            return FqPoly::one(ctx);
        }
        if self.is_zero() {
            return FqPoly::zero(ctx);
        }
        let p = ctx.p();
        let mut acc = FqPoly::one(ctx);
        let mut base = self.clone();
        let mut e = k;
        loop {
            for _ in 0..e % p {
                acc = &acc * &base;
            }
            e /= p;
            if e == 0 {
                break;
            }
            base = base.frobenius();
        }
        acc
    }

    /// Euclidean division: (quotient, remainder) with
    /// deg r < deg divisor. Panics if the divisor is zero.
    pub fn div_rem(&self, divisor: &FqPoly) -> (FqPoly, FqPoly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        assert!(self.ctx == divisor.ctx, "mismatched field contexts");
        let ctx = &self.ctx;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (FqPoly::zero(ctx), self.clone());
        }
        let lead_inv = ctx.inv(divisor.leading());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![ctx.zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c == ctx.zero() {
                continue;
            }
            let f = ctx.mul(c, lead_inv);
            quot[i - dd] = f;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                let sub = ctx.mul(f, dc);
                rem[i - dd + j] = ctx.sub(rem[i - dd + j], sub);
            }
        }
        rem.truncate(dd);
        (FqPoly::from_coeffs(ctx, quot), FqPoly::from_coeffs(ctx, rem))
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn exact_div(&self, divisor: &FqPoly) -> FqPoly {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "exact_div with nonzero remainder");
        q
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &FqPoly) -> FqPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }
}

impl Add<&FqPoly> for &FqPoly {
    type Output = FqPoly;
    fn add(self, rhs: &FqPoly) -> FqPoly {
        assert!(self.ctx == rhs.ctx, "mismatched field contexts");
        let ctx = &self.ctx;
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|i| ctx.add(self.coeff(i), rhs.coeff(i))).collect();
        FqPoly::from_coeffs(ctx, coeffs)
    }
}

impl Sub<&FqPoly> for &FqPoly {
    type Output = FqPoly;
    fn sub(self, rhs: &FqPoly) -> FqPoly {
        assert!(self.ctx == rhs.ctx, "mismatched field contexts");
        let ctx = &self.ctx;
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|i| ctx.sub(self.coeff(i), rhs.coeff(i))).collect();
        FqPoly::from_coeffs(ctx, coeffs)
    }
}

impl Mul<&FqPoly> for &FqPoly {
    type Output = FqPoly;
    fn mul(self, rhs: &FqPoly) -> FqPoly {
        assert!(self.ctx == rhs.ctx, "mismatched field contexts");
        let ctx = &self.ctx;
        if self.is_zero() || rhs.is_zero() {
            return FqPoly::zero(ctx);
        }
        // Iterate the operand with fewer nonzero terms on the outside.
        let (outer, inner) = if self.nonzero_terms() <= rhs.nonzero_terms() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let zero = ctx.zero();
        let mut acc = vec![zero; outer.coeffs.len() + inner.coeffs.len() - 1];
        for (i, &a) in outer.coeffs.iter().enumerate() {
            if a == zero {
                continue;
            }
            for (j, &b) in inner.coeffs.iter().enumerate() {
                if b == zero {
                    continue;
                }
                acc[i + j] = ctx.add(acc[i + j], ctx.mul(a, b));
            }
        }
        FqPoly::from_coeffs(ctx, acc)
    }
}

impl Neg for &FqPoly {
    type Output = FqPoly;
    fn neg(self) -> FqPoly {
        let ctx = &self.ctx;
        let coeffs = self.coeffs.iter().map(|&c| ctx.neg(c)).collect();
        FqPoly::from_coeffs(ctx, coeffs)
    }
}

macro_rules! forward_poly_binop {
    ($trait:ident, $method:ident, $t:ty) => {
        impl $trait for $t {
            type Output = $t;
            fn $method(self, rhs: $t) -> $t {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&$t> for $t {
            type Output = $t;
            fn $method(self, rhs: &$t) -> $t {
                (&self).$method(rhs)
            }
        }
        impl $trait<$t> for &$t {
            type Output = $t;
            fn $method(self, rhs: $t) -> $t {
                self.$method(&rhs)
            }
        }
    };
}

forward_poly_binop!(Add, add, FqPoly);
forward_poly_binop!(Sub, sub, FqPoly);
forward_poly_binop!(Mul, mul, FqPoly);

impl Neg for FqPoly {
    type Output = FqPoly;
    fn neg(self) -> FqPoly {
        -&self
    }
}

impl fmt::Display for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let ctx = &self.ctx;
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == ctx.zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c == ctx.one()) {
                (0, _) => write!(f, "{}", ctx.render(c))?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{}*t", ctx.render(c))?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{}*t^{i}", ctx.render(c))?,
            }
        }
        Ok(())
    }
}

/// Enumerates the q^d monic polynomials of degree d in ascending
/// lexicographic order on the coefficient vector (c_0, ..., c_{d-1}),
/// constant term most significant. Fails when q^d exceeds the budget.
pub fn monic_polys(ctx: &FieldCtx, d: u32) -> Result<MonicIter, Error> {
    monic_polys_with_budget(ctx, d, DEFAULT_ENUM_BUDGET)
}

/// [`monic_polys`] with an explicit enumeration budget.
pub fn monic_polys_with_budget(ctx: &FieldCtx, d: u32, budget: u64) -> Result<MonicIter, Error> {
    let count = ctx
        .q()
        .checked_pow(d)
        .ok_or_else(|| Error::Overflow(format!("q^{d} does not fit 64 bits")))?;
    if count > budget {
        return Err(Error::BudgetExceeded(format!(
            "enumerating q^{d} = {count} monic polynomials exceeds the budget {budget}"
        )));
    }
    Ok(MonicIter { ctx: ctx.clone(), d: d as usize, next: 0, count })
}

/// Iterator over all monic polynomials of a fixed degree.
pub struct MonicIter {
    ctx: FieldCtx,
    d: usize,
    next: u64,
    count: u64,
}

impl Iterator for MonicIter {
    type Item = FqPoly;

    fn next(&mut self) -> Option<FqPoly> {
        if self.next >= self.count {
            return None;
        }
        let q = self.ctx.q();
        let mut coeffs = vec![self.ctx.zero(); self.d + 1];
        coeffs[self.d] = self.ctx.one();
        let mut x = self.next;
        // c_0 changes slowest: peel digits from the most significant end.
        for i in (0..self.d).rev() {
            coeffs[i] = self.ctx.elem(x % q);
            x /= q;
        }
        self.next += 1;
        Some(FqPoly::from_coeffs(&self.ctx, coeffs))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rem = (self.count - self.next) as usize;
        (rem, Some(rem))
    }
}

/// Memo table for the quantities [n] = t^{q^n} - t,
/// l_n = prod_{i=1..n} (t - t^{q^i}), D_n = [n] [n-1]^q ... [1]^{q^{n-1}},
/// and L_n = [n] [n-1] ... [1].
///
/// Entries are appended on demand; share one cache per worker.
pub struct BracketCache {
    ctx: FieldCtx,
    brackets: Vec<FqPoly>,
    ell: Vec<FqPoly>,
    dfact: Vec<FqPoly>,
    lfact: Vec<FqPoly>,
}

impl BracketCache {
    pub fn new(ctx: &FieldCtx) -> BracketCache {
        BracketCache {
            ctx: ctx.clone(),
            brackets: Vec::new(),
            ell: vec![FqPoly::one(ctx)],
            dfact: vec![FqPoly::one(ctx)],
            lfact: vec![FqPoly::one(ctx)],
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    fn q_pow(&self, n: u32) -> Result<u64, Error> {
        self.ctx
            .q()
            .checked_pow(n)
            .filter(|&d| d <= MAX_POLY_DEGREE)
            .ok_or_else(|| Error::Overflow(format!("degree q^{n} exceeds the storable width")))
    }

    /// [n] = t^{q^n} - t, n >= 1.
    pub fn bracket(&mut self, n: u32) -> Result<FqPoly, Error> {
        assert!(n >= 1, "[n] requires n >= 1");
        while self.brackets.len() < n as usize {
            let m = self.brackets.len() as u32 + 1;
            let deg = self.q_pow(m)? as usize;
            let ctx = &self.ctx;
            let mut coeffs = vec![ctx.zero(); deg + 1];
            coeffs[1] = ctx.neg(ctx.one());
            coeffs[deg] = ctx.one();
            self.brackets.push(FqPoly::from_coeffs(ctx, coeffs));
        }
        Ok(self.brackets[n as usize - 1].clone())
    }

    /// l_n = prod_{i=1..n} (t - t^{q^i}) = (-1)^n [n] ... [1]; l_0 = 1.
    pub fn ell(&mut self, n: u32) -> Result<FqPoly, Error> {
        while self.ell.len() <= n as usize {
            let m = self.ell.len() as u32;
            let deg = self.q_pow(m)? as usize;
            let ctx = &self.ctx;
            let mut coeffs = vec![ctx.zero(); deg + 1];
            coeffs[1] = ctx.one();
            coeffs[deg] = ctx.neg(ctx.one());
            let factor = FqPoly::from_coeffs(ctx, coeffs);
            let next = self.ell.last().unwrap() * &factor;
            self.ell.push(next);
        }
        Ok(self.ell[n as usize].clone())
    }

    /// D_n = [n] D_{n-1}^q; D_0 = 1.
    pub fn dfact(&mut self, n: u32) -> Result<FqPoly, Error> {
        while self.dfact.len() <= n as usize {
            let m = self.dfact.len() as u32;
            let bracket = self.bracket(m)?;
            let prev = self.dfact.last().unwrap().pow(self.ctx.q());
            self.dfact.push(&bracket * &prev);
        }
        Ok(self.dfact[n as usize].clone())
    }

    /// L_n = [n] L_{n-1}; L_0 = 1.
    pub fn lfact(&mut self, n: u32) -> Result<FqPoly, Error> {
        while self.lfact.len() <= n as usize {
            let m = self.lfact.len() as u32;
            let bracket = self.bracket(m)?;
            let prev = self.lfact.last().unwrap().clone();
            self.lfact.push(&bracket * &prev);
        }
        Ok(self.lfact[n as usize].clone())
    }
}

/// A normalized fraction of polynomials: monic denominator, coprime to the
/// numerator, so each value of K has exactly one representation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc {
    num: FqPoly,
    den: FqPoly,
}

impl RatFunc {
    /// Builds num/den in canonical form. Panics if den = 0.
    pub fn new(num: FqPoly, den: FqPoly) -> RatFunc {
        assert!(!den.is_zero(), "rational function with zero denominator");
        assert!(num.ctx() == den.ctx(), "mismatched field contexts");
        let ctx = num.ctx().clone();
        if num.is_zero() {
            return RatFunc { num, den: FqPoly::one(&ctx) };
        }
        let g = num.gcd(&den);
        let mut num = num.exact_div(&g);
        let mut den = den.exact_div(&g);
        if !den.is_monic() {
            let inv = ctx.inv(den.leading());
            num = num.scale(inv);
            den = den.scale(inv);
        }
        RatFunc { num, den }
    }

    pub fn zero(ctx: &FieldCtx) -> RatFunc {
        RatFunc { num: FqPoly::zero(ctx), den: FqPoly::one(ctx) }
    }

    pub fn one(ctx: &FieldCtx) -> RatFunc {
        RatFunc { num: FqPoly::one(ctx), den: FqPoly::one(ctx) }
    }

    pub fn from_poly(p: FqPoly) -> RatFunc {
        let den = FqPoly::one(p.ctx());
        RatFunc { num: p, den }
    }

    pub fn constant(ctx: &FieldCtx, c: FqElem) -> RatFunc {
        RatFunc::from_poly(FqPoly::constant(ctx, c))
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.num.ctx()
    }

    pub fn num(&self) -> &FqPoly {
        &self.num
    }

    pub fn den(&self) -> &FqPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the value lies in F_q[t].
    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// Multiplies by a field constant.
    pub fn scale(&self, c: FqElem) -> RatFunc {
        if c == self.ctx().zero() {
            return RatFunc::zero(self.ctx());
        }
        // A unit scalar cannot disturb coprimality or the monic denominator.
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Reciprocal. Panics on zero.
    pub fn inv(&self) -> RatFunc {
        assert!(!self.is_zero(), "cannot invert the zero rational function");
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    /// Integer power; negative exponents invert first (panics on zero base).
    pub fn pow(&self, k: i64) -> RatFunc {
        if k < 0 {
            return self.inv().pow(-k);
        }
        RatFunc { num: self.num.pow(k as u64), den: self.den.pow(k as u64) }
    }

    /// Sums many fractions with balanced combination so that gcd work stays
    /// on operands of comparable size.
    pub fn sum_many(ctx: &FieldCtx, items: impl IntoIterator<Item = RatFunc>) -> RatFunc {
        let mut levels: Vec<Option<RatFunc>> = Vec::new();
        for mut x in items {
            let mut level = 0;
            loop {
                if level == levels.len() {
                    levels.push(Some(x));
                    break;
                }
                match levels[level].take() {
                    None => {
                        levels[level] = Some(x);
                        break;
                    }
                    Some(y) => {
                        x = &x + &y;
                        level += 1;
                    }
                }
            }
        }
        levels
            .into_iter()
            .flatten()
            .fold(RatFunc::zero(ctx), |acc, x| &acc + &x)
    }
}

impl Add<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        // Classical gcd trick: combine over lcm of the denominators.
        let g = self.den.gcd(&rhs.den);
        let right = rhs.den.exact_div(&g);
        let left = self.den.exact_div(&g);
        let num = &self.num * &right + &rhs.num * &left;
        let den = &self.den * &right;
        RatFunc::new(num, den)
    }
}

impl Sub<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(self.ctx());
        }
        // Reduce across the diagonal first to keep the products small.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let num = &self.num.exact_div(&g1) * &rhs.num.exact_div(&g2);
        let den = &self.den.exact_div(&g2) * &rhs.den.exact_div(&g1);
        RatFunc::new(num, den)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

forward_poly_binop!(Add, add, RatFunc);
forward_poly_binop!(Sub, sub, RatFunc);
forward_poly_binop!(Mul, mul, RatFunc);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() && self.den.coeff(0) == self.ctx().one() {
            return write!(f, "{}", self.num);
        }
        let multi = |p: &FqPoly| p.nonzero_terms() > 1;
        if multi(&self.num) {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if multi(&self.den) {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

// ---- Text parsing ----

struct Scanner<'a> {
    ctx: &'a FieldCtx,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos) == Some(&b' ') {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expect(&mut self, c: u8) -> Result<(), Error> {
        if self.bump() != Some(c) {
            return Err(Error::InvalidArgument(format!(
                "expected '{}' at offset {}",
                c as char, self.pos
            )));
        }
        Ok(())
    }

    fn integer(&mut self) -> Result<u64, Error> {
        self.skip_ws();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::InvalidArgument(format!("expected a number at offset {start}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::InvalidArgument("number out of range".into()))
    }

    /// coeff := digits | '(' digits (',' digits)* ')'
    fn coefficient(&mut self) -> Result<FqElem, Error> {
        if self.peek() == Some(b'(') {
            self.bump();
            let mut coords = vec![self.integer()?];
            while self.peek() == Some(b',') {
                self.bump();
                coords.push(self.integer()?);
            }
            self.expect(b')')?;
            if coords.len() > self.ctx.s() as usize || coords.iter().any(|&c| c >= self.ctx.p()) {
                return Err(Error::InvalidArgument("coefficient tuple out of range".into()));
            }
            Ok(self.ctx.from_coords(&coords))
        } else {
            let v = self.integer()?;
            if v >= self.ctx.q() {
                return Err(Error::InvalidArgument(format!("coefficient {v} out of range")));
            }
            Ok(self.ctx.elem(v))
        }
    }

    /// term := coeff ['*' t ['^' exp]] | t ['^' exp]
    fn term(&mut self) -> Result<(FqElem, usize), Error> {
        let mut coeff = self.ctx.one();
        let mut saw_coeff = false;
        if self.peek() != Some(b't') {
            coeff = self.coefficient()?;
            saw_coeff = true;
        }
        if self.peek() == Some(b'*') {
            self.bump();
        } else if saw_coeff && self.peek() != Some(b't') {
            return Ok((coeff, 0));
        } else if saw_coeff && self.peek() == Some(b't') {
            return Err(Error::InvalidArgument("missing '*' between coefficient and t".into()));
        }
        if self.peek() == Some(b't') {
            self.bump();
            let exp = if self.peek() == Some(b'^') {
                self.bump();
                self.integer()? as usize
            } else {
                1
            };
            Ok((coeff, exp))
        } else {
            Ok((coeff, 0))
        }
    }

    fn poly(&mut self) -> Result<FqPoly, Error> {
        let mut acc = FqPoly::zero(self.ctx);
        let mut negate = false;
        if self.peek() == Some(b'-') {
            self.bump();
            negate = true;
        }
        loop {
            let (c, e) = self.term()?;
            let c = if negate { self.ctx.neg(c) } else { c };
            acc = &acc + &FqPoly::monomial(self.ctx, c, e);
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    negate = false;
                }
                Some(b'-') => {
                    self.bump();
                    negate = true;
                }
                _ => break,
            }
        }
        Ok(acc)
    }
}

impl FqPoly {
    /// Parses the textual syntax produced by `Display`, e.g.
    /// "t^3 + 2*t + 1" or "(1,1)*t^2 + (0,1)". A leading or interior '-'
    /// negates the following term.
    pub fn parse(ctx: &FieldCtx, text: &str) -> Result<FqPoly, Error> {
        let mut sc = Scanner { ctx, bytes: text.as_bytes(), pos: 0 };
        let poly = sc.poly()?;
        sc.skip_ws();
        if sc.pos != sc.bytes.len() {
            return Err(Error::InvalidArgument(format!(
                "trailing input at offset {} in polynomial text",
                sc.pos
            )));
        }
        Ok(poly)
    }
}

impl RatFunc {
    /// Parses "poly" or "poly/poly", where either side may be wrapped in
    /// parentheses as produced by `Display`.
    pub fn parse(ctx: &FieldCtx, text: &str) -> Result<RatFunc, Error> {
        let bytes = text.as_bytes();
        let mut depth = 0usize;
        let mut slash = None;
        for (i, &b) in bytes.iter().enumerate() {
            match b {
                b'(' => depth += 1,
                b')' => {
                    depth = depth
                        .checked_sub(1)
                        .ok_or_else(|| Error::InvalidArgument("unbalanced parentheses".into()))?
                }
                b'/' if depth == 0 => {
                    if slash.is_some() {
                        return Err(Error::InvalidArgument("more than one '/'".into()));
                    }
                    slash = Some(i);
                }
                _ => {}
            }
        }
        let side = |s: &str| -> Result<FqPoly, Error> {
            let s = s.trim();
            match FqPoly::parse(ctx, s) {
                Ok(p) => Ok(p),
                Err(e) => {
                    // Retry with one layer of wrapping parentheses removed.
                    if s.starts_with('(') && s.ends_with(')') {
                        FqPoly::parse(ctx, &s[1..s.len() - 1]).map_err(|_| e)
                    } else {
                        Err(e)
                    }
                }
            }
        };
        match slash {
            None => Ok(RatFunc::from_poly(side(text)?)),
            Some(i) => {
                let num = side(&text[..i])?;
                let den = side(&text[i + 1..])?;
                if den.is_zero() {
                    return Err(Error::InvalidArgument("zero denominator".into()));
                }
                Ok(RatFunc::new(num, den))
            }
        }
    }
}
