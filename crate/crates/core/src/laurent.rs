//! Truncated Laurent series in u = 1/t over F_q: elements of the completion
//! at the infinite place, carried to a finite absolute precision.
//!
//! A tail stores the coefficients of u^val .. u^prec and represents a value
//! known modulo O(u^{prec+1}). All arithmetic is exact through the tracked
//! order; precision only shrinks by the min rule.

use std::fmt;
use std::ops::{Add, Mul};

use serde_json::{json, Value};

use crate::error::Error;
use crate::field::{FieldCtx, FqElem};
use crate::polyring::RatFunc;

/// A truncated Laurent series c_v u^v + ... + c_N u^N + O(u^{N+1}).
///
/// The leading stored coefficient is nonzero; a tail with no known-nonzero
/// coefficient stores nothing and sets its valuation marker to N + 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentTail {
    ctx: FieldCtx,
    val: i64,
    coeffs: Vec<FqElem>,
    prec: i64,
}

impl LaurentTail {
    fn normalized(ctx: FieldCtx, mut val: i64, mut coeffs: Vec<FqElem>, prec: i64) -> LaurentTail {
        let zero = ctx.zero();
        let lead = coeffs.iter().position(|&c| c != zero);
        match lead {
            None => {
                coeffs.clear();
                val = prec + 1;
            }
            Some(k) => {
                coeffs.drain(..k);
                val += k as i64;
                while coeffs.last() == Some(&zero) {
                    coeffs.pop();
                }
            }
        }
        debug_assert!(val + coeffs.len() as i64 - 1 <= prec);
        LaurentTail { ctx, val, coeffs, prec }
    }

    /// The tail O(u^{prec+1}) with no known-nonzero coefficient.
    pub fn zero(ctx: &FieldCtx, prec: i64) -> LaurentTail {
        LaurentTail { ctx: ctx.clone(), val: prec + 1, coeffs: Vec::new(), prec }
    }

    /// Builds a tail from explicit coefficients starting at u^val.
    pub fn from_coeffs(ctx: &FieldCtx, val: i64, coeffs: Vec<FqElem>, prec: i64) -> LaurentTail {
        assert!(val + coeffs.len() as i64 - 1 <= prec, "coefficients extend past the precision");
        LaurentTail::normalized(ctx.clone(), val, coeffs, prec)
    }

    /// Expands an exact rational function into its Laurent tail through
    /// u^prec, by long division in powers of 1/t.
    pub fn from_ratfunc(x: &RatFunc, prec: i64) -> LaurentTail {
        let ctx = x.ctx().clone();
        if x.is_zero() {
            return LaurentTail::zero(&ctx, prec);
        }
        let num = x.num();
        let den = x.den();
        let n = num.degree().unwrap();
        let m = den.degree().unwrap();
        let val = m as i64 - n as i64;
        let terms = prec - val + 1;
        if terms <= 0 {
            return LaurentTail::zero(&ctx, prec);
        }
        // Reversed coefficient sequences are power series in u; divide them.
        let a = |j: usize| if j <= n { num.coeff(n - j) } else { ctx.zero() };
        let b = |j: usize| if j <= m { den.coeff(m - j) } else { ctx.zero() };
        let b0_inv = ctx.inv(b(0));
        let mut c: Vec<FqElem> = Vec::with_capacity(terms as usize);
        for j in 0..terms as usize {
            let mut acc = a(j);
            for i in 1..=j.min(m) {
                acc = ctx.sub(acc, ctx.mul(b(i), c[j - i]));
            }
            c.push(ctx.mul(acc, b0_inv));
        }
        LaurentTail::normalized(ctx, val, c, prec)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    /// Order through which the coefficients are known.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Exponent of the first known-nonzero coefficient, or None when the
    /// tail is zero through its precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.val)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of u^e; None when e lies beyond the precision.
    pub fn coefficient(&self, e: i64) -> Option<FqElem> {
        if e > self.prec {
            return None;
        }
        let idx = e - self.val;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            Some(self.ctx.zero())
        } else {
            Some(self.coeffs[idx as usize])
        }
    }

    pub fn scale(&self, c: FqElem) -> LaurentTail {
        if c == self.ctx.zero() {
            return LaurentTail::zero(&self.ctx, self.prec);
        }
        let coeffs = self.coeffs.iter().map(|&a| self.ctx.mul(a, c)).collect();
        LaurentTail::normalized(self.ctx.clone(), self.val, coeffs, self.prec)
    }

    /// k-th power for k >= 1.
    pub fn pow(&self, k: u64) -> LaurentTail {
        assert!(k >= 1, "tail powers require k >= 1");
        let mut acc = self.clone();
        for bit in (0..63 - k.leading_zeros() as usize).rev() {
            acc = &acc * &acc;
            if k >> bit & 1 == 1 {
                acc = &acc * self;
            }
        }
        acc
    }

    /// First u-order at which the two tails disagree, through the shared
    /// precision; None when they agree everywhere both are known.
    pub fn agrees_with(&self, other: &LaurentTail) -> Option<i64> {
        let prec = self.prec.min(other.prec);
        let lo = self.val.min(other.val);
        (lo..=prec).find(|&e| self.coefficient(e) != other.coefficient(e))
    }

    /// JSON form: valuation, precision, and the coefficient array starting
    /// at u^valuation. Coefficients are plain digits for prime fields and
    /// coordinate arrays for extensions.
    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self
            .coeffs
            .iter()
            .map(|&c| {
                if self.ctx.s() == 1 {
                    json!(c.index())
                } else {
                    json!(self.ctx.coords(c))
                }
            })
            .collect();
        json!({
            "valuation": self.val,
            "precision": self.prec,
            "coeffs": coeffs,
        })
    }

    pub fn from_json(ctx: &FieldCtx, value: &Value) -> Result<LaurentTail, Error> {
        let bad = |msg: &str| Error::InvalidArgument(format!("laurent json: {msg}"));
        let val = value["valuation"].as_i64().ok_or_else(|| bad("missing valuation"))?;
        let prec = value["precision"].as_i64().ok_or_else(|| bad("missing precision"))?;
        let raw = value["coeffs"].as_array().ok_or_else(|| bad("missing coeffs"))?;
        let mut coeffs = Vec::with_capacity(raw.len());
        for item in raw {
            let c = if ctx.s() == 1 {
                let idx = item.as_u64().ok_or_else(|| bad("coefficient is not a digit"))?;
                if idx >= ctx.q() {
                    return Err(bad("coefficient out of range"));
                }
                ctx.elem(idx)
            } else {
                let arr = item.as_array().ok_or_else(|| bad("coefficient is not a tuple"))?;
                let mut coords = Vec::with_capacity(arr.len());
                for v in arr {
                    coords.push(v.as_u64().ok_or_else(|| bad("coordinate is not a digit"))?);
                }
                if coords.len() > ctx.s() as usize || coords.iter().any(|&c| c >= ctx.p()) {
                    return Err(bad("coordinate out of range"));
                }
                ctx.from_coords(&coords)
            };
            coeffs.push(c);
        }
        if val + coeffs.len() as i64 - 1 > prec {
            return Err(bad("coefficients extend past the precision"));
        }
        Ok(LaurentTail::normalized(ctx.clone(), val, coeffs, prec))
    }
}

impl Add<&LaurentTail> for &LaurentTail {
    type Output = LaurentTail;
    fn add(self, rhs: &LaurentTail) -> LaurentTail {
        assert!(self.ctx == rhs.ctx, "mismatched field contexts");
        let ctx = &self.ctx;
        let prec = self.prec.min(rhs.prec);
        let lo = self.val.min(rhs.val).min(prec + 1);
        let coeffs = (lo..=prec)
            .map(|e| {
                ctx.add(
                    self.coefficient(e).unwrap_or(ctx.zero()),
                    rhs.coefficient(e).unwrap_or(ctx.zero()),
                )
            })
            .collect();
        LaurentTail::normalized(ctx.clone(), lo, coeffs, prec)
    }
}

impl Mul<&LaurentTail> for &LaurentTail {
    type Output = LaurentTail;
    fn mul(self, rhs: &LaurentTail) -> LaurentTail {
        assert!(self.ctx == rhs.ctx, "mismatched field contexts");
        let ctx = self.ctx.clone();
        // The unknown part of each operand starts at u^{prec+1}; the
        // product is known through the min of the cross bounds.
        let prec = (self.val + rhs.prec).min(rhs.val + self.prec);
        let lo = self.val + rhs.val;
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() || lo > prec {
            return LaurentTail::zero(&ctx, prec);
        }
        let len = (prec - lo + 1) as usize;
        let mut acc = vec![ctx.zero(); len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == ctx.zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if b == ctx.zero() {
                    continue;
                }
                acc[i + j] = ctx.add(acc[i + j], ctx.mul(a, b));
            }
        }
        LaurentTail::normalized(ctx, lo, acc, prec)
    }
}

macro_rules! forward_tail_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for LaurentTail {
            type Output = LaurentTail;
            fn $method(self, rhs: LaurentTail) -> LaurentTail {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&LaurentTail> for LaurentTail {
            type Output = LaurentTail;
            fn $method(self, rhs: &LaurentTail) -> LaurentTail {
                (&self).$method(rhs)
            }
        }
        impl $trait<LaurentTail> for &LaurentTail {
            type Output = LaurentTail;
            fn $method(self, rhs: LaurentTail) -> LaurentTail {
                self.$method(&rhs)
            }
        }
    };
}

forward_tail_binop!(Add, add);
forward_tail_binop!(Mul, mul);

impl fmt::Display for LaurentTail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ctx = &self.ctx;
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == ctx.zero() {
                continue;
            }
            let e = self.val + i as i64;
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (e, c == ctx.one()) {
                (0, _) => write!(f, "{}", ctx.render(c))?,
                (1, true) => write!(f, "u")?,
                (1, false) => write!(f, "{}*u", ctx.render(c))?,
                (_, true) => write!(f, "u^{e}")?,
                (_, false) => write!(f, "{}*u^{e}", ctx.render(c))?,
            }
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O(u^{})", self.prec + 1)
    }
}
