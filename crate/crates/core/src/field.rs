//! Finite fields F_q with q = p^s, base-p digit expansions, and binomial
//! coefficients modulo p via the digit-product rule.
//!
//! Elements of F_q are stored packed: the coordinate vector (a_0, ..., a_{s-1})
//! in the polynomial basis is encoded as the integer sum a_i * p^i. The field
//! is described by a [`FieldCtx`], which owns the modulus and the discrete
//! log tables used for multiplication.

use std::fmt;
use std::sync::Arc;

use crate::error::Error;

/// Largest supported field size. Keeps the log/exp tables desk-sized.
pub const MAX_Q: u64 = 1 << 16;

/// Small-field threshold below which full q-by-q operation tables are built.
const OP_TABLE_LIMIT: u64 = 256;

/// An element of F_q, packed as Sum a_i * p^i over the polynomial basis.
///
/// Elements are plain indices; all arithmetic goes through the owning
/// [`FieldCtx`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct FqElem(pub(crate) u32);

impl FqElem {
    /// The packed index of this element, in [0, q).
    pub fn index(self) -> u64 {
        self.0 as u64
    }
}

struct FieldData {
    p: u64,
    s: u32,
    q: u64,
    /// Low coefficients (c_0, ..., c_{s-1}) of the monic degree-s modulus
    /// over F_p. For s = 1 this is the placeholder [0], i.e. the modulus t.
    modulus: Vec<u64>,
    /// exp[i] = g^i for the fixed generator g of F_q^x, i in [0, q-1).
    exp: Vec<u32>,
    /// log[x] for x in [1, q); log[0] is unused.
    log: Vec<u32>,
    /// q*q addition table when q <= OP_TABLE_LIMIT, else empty.
    add_tbl: Vec<u32>,
    /// q*q multiplication table when q <= OP_TABLE_LIMIT, else empty.
    mul_tbl: Vec<u32>,
    /// Additive inverses, length q.
    neg_tbl: Vec<u32>,
}

/// The finite field F_q = F_{p^s}, deterministically constructed.
///
/// The modulus is the lexicographically smallest monic irreducible of degree
/// s over F_p, comparing coefficients from the constant term upward, so the
/// same (p, s) always produces the same field. Cloning is cheap.
#[derive(Clone)]
pub struct FieldCtx(Arc<FieldData>);

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        // Moduli are deterministic in (p, s).
        self.p() == other.p() && self.s() == other.s()
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldCtx(q = {}^{})", self.p(), self.s())
    }
}

/// Builds the field F_{p^s}. See [`FieldCtx::new`].
pub fn make_field(p: u64, s: u32) -> Result<FieldCtx, Error> {
    FieldCtx::new(p, s)
}

impl FieldCtx {
    /// Builds F_{p^s} with the deterministic modulus choice.
    ///
    /// Fails if p is not prime, s = 0, or p^s exceeds [`MAX_Q`].
    pub fn new(p: u64, s: u32) -> Result<FieldCtx, Error> {
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("p = {p} is not prime")));
        }
        if s == 0 {
            return Err(Error::InvalidArgument("extension degree s must be >= 1".into()));
        }
        let mut q: u64 = 1;
        for _ in 0..s {
            q = q
                .checked_mul(p)
                .filter(|&q| q <= MAX_Q)
                .ok_or_else(|| Error::Overflow(format!("q = {p}^{s} exceeds the supported width")))?;
        }

        let modulus = if s == 1 { vec![0] } else { smallest_irreducible(p, s) };
        let data = FieldData::build(p, s, q, modulus);
        Ok(FieldCtx(Arc::new(data)))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn s(&self) -> u32 {
        self.0.s
    }

    pub fn q(&self) -> u64 {
        self.0.q
    }

    /// Low coefficients (c_0, ..., c_{s-1}) of the monic modulus over F_p.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FqElem {
        FqElem(0)
    }

    pub fn one(&self) -> FqElem {
        FqElem(1)
    }

    /// The element with the given packed index.
    ///
    /// Panics if `index >= q`.
    pub fn elem(&self, index: u64) -> FqElem {
        assert!(index < self.q(), "element index {index} out of range for q = {}", self.q());
        FqElem(index as u32)
    }

    /// Embeds c in Z/pZ into the prime subfield of F_q.
    pub fn embed_prime(&self, c: u64) -> FqElem {
        FqElem((c % self.p()) as u32)
    }

    /// Coordinates of `a` in the polynomial basis, low degree first, length s.
    pub fn coords(&self, a: FqElem) -> Vec<u64> {
        let p = self.p();
        let mut x = a.0 as u64;
        (0..self.s())
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect()
    }

    /// Element with the given polynomial-basis coordinates (low degree first).
    pub fn from_coords(&self, coords: &[u64]) -> FqElem {
        assert!(coords.len() <= self.s() as usize, "too many coordinates");
        let p = self.p();
        let mut idx = 0u64;
        for &c in coords.iter().rev() {
            assert!(c < p, "coordinate {c} not reduced modulo p = {p}");
            idx = idx * p + c;
        }
        FqElem(idx as u32)
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        let d = &*self.0;
        if !d.add_tbl.is_empty() {
            return FqElem(d.add_tbl[(a.0 as u64 * d.q + b.0 as u64) as usize]);
        }
        FqElem(digit_add(a.0 as u64, b.0 as u64, d.p) as u32)
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        FqElem(self.0.neg_tbl[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        let d = &*self.0;
        if !d.mul_tbl.is_empty() {
            return FqElem(d.mul_tbl[(a.0 as u64 * d.q + b.0 as u64) as usize]);
        }
        if a.0 == 0 || b.0 == 0 {
            return FqElem(0);
        }
        let e = (d.log[a.0 as usize] as u64 + d.log[b.0 as usize] as u64) % (d.q - 1);
        FqElem(d.exp[e as usize])
    }

    /// Multiplicative inverse. Panics on zero.
    #[inline]
    pub fn inv(&self, a: FqElem) -> FqElem {
        assert!(a.0 != 0, "cannot invert zero");
        let d = &*self.0;
        let e = (d.q - 1 - d.log[a.0 as usize] as u64) % (d.q - 1);
        FqElem(d.exp[e as usize])
    }

    /// a^e with the convention a^0 = 1 (including 0^0 = 1).
    pub fn pow(&self, a: FqElem, e: u64) -> FqElem {
        if e == 0 {
            return self.one();
        }
        if a.0 == 0 {
            return self.zero();
        }
        let d = &*self.0;
        let l = (d.log[a.0 as usize] as u64 * (e % (d.q - 1))) % (d.q - 1);
        FqElem(d.exp[l as usize])
    }

    /// Renders `a` as a digit for prime fields or a coordinate tuple "(a0,a1)"
    /// for proper extensions.
    pub fn render(&self, a: FqElem) -> String {
        if self.s() == 1 {
            format!("{}", a.0)
        } else {
            let coords = self.coords(a);
            let inner: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
            format!("({})", inner.join(","))
        }
    }
}

impl FieldData {
    fn build(p: u64, s: u32, q: u64, modulus: Vec<u64>) -> FieldData {
        // Raw multiplication used only while the tables are under
        // construction: polynomial product modulo the modulus.
        let raw_mul = |a: u64, b: u64| -> u64 {
            let da = unpack(a, p, s);
            let db = unpack(b, p, s);
            let mut prod = vec![0u64; 2 * s as usize];
            for (i, &x) in da.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            // Reduce modulo the monic modulus: t^s = -(c_0 + ... + c_{s-1} t^{s-1}).
            for i in (s as usize..prod.len()).rev() {
                let top = prod[i];
                if top == 0 {
                    continue;
                }
                prod[i] = 0;
                for (j, &c) in modulus.iter().enumerate() {
                    let idx = i - s as usize + j;
                    prod[idx] = (prod[idx] + (p - c % p) % p * top) % p;
                }
            }
            pack(&prod[..s as usize], p)
        };

        // Discrete log tables over the fixed generator: the smallest packed
        // index whose multiplicative order is q - 1.
        let order_factors = prime_factors(q - 1);
        let generator = (1..q)
            .find(|&g| {
                order_factors.iter().all(|&r| {
                    let mut acc = 1u64;
                    let mut base = g;
                    let mut e = (q - 1) / r;
                    while e > 0 {
                        if e & 1 == 1 {
                            acc = raw_mul(acc, base);
                        }
                        base = raw_mul(base, base);
                        e >>= 1;
                    }
                    acc != 1
                })
            })
            .expect("F_q^x is cyclic");

        let mut exp = vec![0u32; (q - 1) as usize];
        let mut log = vec![0u32; q as usize];
        let mut acc = 1u64;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = acc as u32;
            log[acc as usize] = i as u32;
            acc = raw_mul(acc, generator);
        }
        debug_assert_eq!(acc, 1, "generator order must be q - 1");

        let mut neg_tbl = vec![0u32; q as usize];
        for (a, slot) in neg_tbl.iter_mut().enumerate() {
            *slot = digit_neg(a as u64, p) as u32;
        }

        let (mut add_tbl, mut mul_tbl) = (Vec::new(), Vec::new());
        if q <= OP_TABLE_LIMIT {
            add_tbl = vec![0u32; (q * q) as usize];
            mul_tbl = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    add_tbl[(a * q + b) as usize] = digit_add(a, b, p) as u32;
                    mul_tbl[(a * q + b) as usize] = raw_mul(a, b) as u32;
                }
            }
        }

        FieldData { p, s, q, modulus, exp, log, add_tbl, mul_tbl, neg_tbl }
    }
}

#[inline]
fn digit_add(mut a: u64, mut b: u64, p: u64) -> u64 {
    if p == 2 {
        return a ^ b;
    }
    let mut out = 0u64;
    let mut mult = 1u64;
    while a > 0 || b > 0 {
        out += (a % p + b % p) % p * mult;
        mult *= p;
        a /= p;
        b /= p;
    }
    out
}

fn digit_neg(mut a: u64, p: u64) -> u64 {
    if p == 2 {
        return a;
    }
    let mut out = 0u64;
    let mut mult = 1u64;
    while a > 0 {
        out += (p - a % p) % p * mult;
        mult *= p;
        a /= p;
    }
    out
}

fn unpack(mut x: u64, p: u64, s: u32) -> Vec<u64> {
    (0..s)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn pack(digits: &[u64], p: u64) -> u64 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Lexicographically smallest monic irreducible of degree s over F_p,
/// comparing coefficient vectors constant term first. Returned as the low
/// coefficients (c_0, ..., c_{s-1}).
fn smallest_irreducible(p: u64, s: u32) -> Vec<u64> {
    let s = s as usize;
    let total = p.pow(s as u32);
    for idx in 0..total {
        // c_0 is the most significant position so that counting upward walks
        // the candidates in low-degree-first lexicographic order.
        let mut coeffs = vec![0u64; s];
        let mut x = idx;
        for j in (0..s).rev() {
            coeffs[j] = x % p;
            x /= p;
        }
        let mut poly = coeffs.clone();
        poly.push(1);
        if modp_is_irreducible(&poly, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

/// Irreducibility by trial division over F_p: `poly` is monic, coefficients
/// low degree first.
fn modp_is_irreducible(poly: &[u64], p: u64) -> bool {
    let deg = poly.len() - 1;
    if deg == 1 {
        return true;
    }
    for div_deg in 1..=deg / 2 {
        for idx in 0..p.pow(div_deg as u32) {
            let mut divisor = unpack(idx, p, div_deg as u32);
            divisor.push(1);
            if modp_rem_is_zero(poly, &divisor, p) {
                return false;
            }
        }
    }
    true
}

fn modp_rem_is_zero(num: &[u64], den: &[u64], p: u64) -> bool {
    let mut rem: Vec<u64> = num.to_vec();
    let dd = den.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        if lead != 0 {
            let shift = rem.len() - 1 - dd;
            for (j, &c) in den.iter().enumerate() {
                rem[shift + j] = (rem[shift + j] + (p - c % p) % p * lead) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

/// A base-b digit expansion, little endian, with no leading zero digit
/// except for the single-digit expansion of 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitVec {
    pub base: u64,
    pub digits: Vec<u64>,
}

impl DigitVec {
    /// Reconstructs the expanded integer.
    pub fn value(&self) -> u64 {
        self.digits.iter().rev().fold(0, |acc, &d| acc * self.base + d)
    }
}

/// Base-b expansion of n, little endian. Panics if base < 2.
pub fn digits(n: u64, base: u64) -> DigitVec {
    assert!(base >= 2, "digit base must be at least 2");
    if n == 0 {
        return DigitVec { base, digits: vec![0] };
    }
    let mut digits = Vec::new();
    let mut x = n;
    while x > 0 {
        digits.push(x % base);
        x /= base;
    }
    DigitVec { base, digits }
}

/// C(m, n) modulo the prime p, via the product of digit-wise binomials.
///
/// Returns 0 exactly when some base-p digit of n exceeds the matching digit
/// of m, i.e. when adding n and m - n in base p carries. n > m gives 0.
pub fn lucas_binom(m: u64, n: u64, p: u64) -> u64 {
    debug_assert!(is_prime(p), "lucas_binom requires a prime modulus");
    if n > m {
        return 0;
    }
    let (mut m, mut n) = (m, n);
    let mut acc = 1u64;
    while n > 0 || m > 0 {
        acc = acc * binom_small(m % p, n % p, p) % p;
        if acc == 0 {
            return 0;
        }
        m /= p;
        n /= p;
    }
    acc
}

/// C(a, b) mod p for 0 <= a, b < p.
fn binom_small(a: u64, b: u64, p: u64) -> u64 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 1..=b {
        num = num * ((a - b + i) % p) % p;
        den = den * (i % p) % p;
    }
    num * modp_pow(den, p - 2, p) % p
}

fn modp_pow(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Whether n is an 'even' integer for F_q, i.e. divisible by q - 1.
/// Every integer is 'even' when q = 2.
pub fn is_even_mult(n: i64, q: u64) -> bool {
    let m = (q - 1) as i64;
    m == 1 || n.rem_euclid(m) == 0
}
