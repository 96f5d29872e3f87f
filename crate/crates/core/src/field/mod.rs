//! Arithmetic in finite fields GF(p^l) and exact linear algebra over them.
//!
//! Elements are stored by their canonical index in `[0, q)`: the polynomial
//! `c_0 + c_1 x + ... + c_{l-1} x^{l-1}` has index `c_0 + c_1 p + ... + c_{l-1} p^{l-1}`.
//! The same index is the serialized form of an element, so a field is fully
//! described by its name `"p^l"`.
//!
//! The modulus of a context is the smallest monic irreducible polynomial of
//! degree `l` when the non-leading coefficients are read as a base-`p` index.
//! For GF(4) this is `x^2 + x + 1`, for GF(16) `x^4 + x + 1`, for GF(9) `x^2 + 1`.

mod embed;
mod matrix;

pub use embed::{enlarge, FieldEmbedding};
pub use matrix::{in_span, vectors_rank, Matrix, Rref};

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{l} exceeds 2^16")]
    TooLarge { p: u32, l: u32 },
    #[error("no irreducible polynomial of degree {l} over GF({p}) was found")]
    NoIrreducible { p: u32, l: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element {index} is out of range for GF({order})")]
    ElementOutOfRange { index: u64, order: u32 },
    #[error("invalid field name {0:?}, expected \"p^l\"")]
    BadFieldName(String),
    #[error("no subfield embedding from GF({small}) into GF({large})")]
    NoSubfieldEmbedding { small: u32, large: u32 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: String, right: String },
}

/// An element of some GF(p^l), identified by its canonical index.
///
/// Elements carry no reference to their field; every operation goes through
/// a [`FieldCtx`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Inner {
    p: u32,
    l: u32,
    q: u32,
    /// Monic modulus, low degree first, `l + 1` coefficients.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    /// Addition table for small odd-characteristic fields.
    add: Option<Vec<u16>>,
}

/// Arithmetic context for GF(p^l). Cheap to clone.
#[derive(Clone)]
pub struct FieldCtx(Arc<Inner>);

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.l == other.0.l
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.l)
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.0.p, self.0.l)
    }
}

impl FromStr for FieldCtx {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FieldError::BadFieldName(s.to_string());
        let (p, l) = match s.trim().split_once('^') {
            Some((p, l)) => (p.trim(), l.trim()),
            None => (s.trim(), "1"),
        };
        let p = p.parse::<u32>().map_err(|_| bad())?;
        let l = l.parse::<u32>().map_err(|_| bad())?;
        FieldCtx::new(p, l)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldCtx {
    /// Builds GF(p^l) with the smallest monic irreducible modulus of degree `l`.
    pub fn new(p: u32, l: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if l == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u64).checked_pow(l).filter(|&q| q <= MAX_ORDER);
        let q = q.ok_or(FieldError::TooLarge { p, l })? as u32;
        let modulus = smallest_irreducible(p, l).ok_or(FieldError::NoIrreducible { p, l })?;

        let mulmod = |a: u32, b: u32| -> u32 {
            let prod = poly::mulmod(&digits(a, p, l), &digits(b, p, l), &modulus, p);
            undigits(&prod, p)
        };

        // Multiplicative group is cyclic; find its first generator by index.
        let order = q - 1;
        let (mut exp, mut log) = (vec![0u32; order.max(1) as usize], vec![0u32; q as usize]);
        'candidates: for g in 1..q {
            let mut x = 1u32;
            for k in 0..order {
                if k > 0 && x == 1 {
                    continue 'candidates;
                }
                exp[k as usize] = x;
                log[x as usize] = k;
                x = mulmod(x, g);
            }
            if x == 1 {
                break;
            }
        }

        let neg = (0..q)
            .map(|a| undigits(&digits(a, p, l).iter().map(|&c| (p - c) % p).collect::<Vec<_>>(), p))
            .collect();
        let add = (p != 2 && q <= 256).then(|| {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = add_digits(a, b, p, l) as u16;
                }
            }
            t
        });

        Ok(FieldCtx(Arc::new(Inner { p, l, q, modulus, exp, log, neg, add })))
    }

    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        FieldCtx::new(p, 1)
    }

    /// Smallest GF(p^l) with at least `min_order` elements.
    pub fn at_least(p: u32, min_order: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let mut l = 1u32;
        let mut q = p as u64;
        while q < min_order {
            l += 1;
            q = q.saturating_mul(p as u64);
            if q > MAX_ORDER {
                return Err(FieldError::TooLarge { p, l });
            }
        }
        FieldCtx::new(p, l)
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.l
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Modulus coefficients, low degree first, including the leading 1.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn name(&self) -> String {
        self.to_string()
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    pub fn elem(&self, index: u64) -> Result<FieldElem, FieldError> {
        if index < self.0.q as u64 {
            Ok(FieldElem(index as u32))
        } else {
            Err(FieldError::ElementOutOfRange { index, order: self.0.q })
        }
    }

    pub fn contains(&self, a: FieldElem) -> bool {
        a.0 < self.0.q
    }

    /// The prime-subfield element `c mod p`.
    pub fn constant(&self, c: u64) -> FieldElem {
        FieldElem((c % self.0.p as u64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.0.q).map(FieldElem)
    }

    /// Polynomial coefficients of `a`, low degree first (`l` entries).
    pub fn coefficients(&self, a: FieldElem) -> Vec<u32> {
        digits(a.0, self.0.p, self.0.l)
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Result<FieldElem, FieldError> {
        if coeffs.len() != self.0.l as usize {
            return Err(FieldError::DimensionMismatch { expected: self.0.l as usize, found: coeffs.len() });
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.0.p) {
            return Err(FieldError::ElementOutOfRange { index: c as u64, order: self.0.p });
        }
        Ok(FieldElem(undigits(coeffs, self.0.p)))
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let inner = &*self.0;
        if inner.p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        match &inner.add {
            Some(t) => FieldElem(t[(a.0 * inner.q + b.0) as usize] as u32),
            None => FieldElem(add_digits(a.0, b.0, inner.p, inner.l)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        let inner = &*self.0;
        let n = inner.q - 1;
        let k = (inner.log[a.0 as usize] + inner.log[b.0 as usize]) % n;
        FieldElem(inner.exp[k as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let inner = &*self.0;
        let n = inner.q - 1;
        Ok(FieldElem(inner.exp[((n - inner.log[a.0 as usize]) % n) as usize]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Dot product of two equal-length vectors.
    pub fn dot(&self, a: &[FieldElem], b: &[FieldElem]) -> FieldElem {
        debug_assert_eq!(a.len(), b.len());
        a.iter().zip(b).fold(FieldElem::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// Standard basis vector `e_i` of length `n`.
    pub fn unit_vector(&self, n: usize, i: usize) -> Vec<FieldElem> {
        let mut v = vec![FieldElem::ZERO; n];
        v[i] = FieldElem::ONE;
        v
    }

    pub fn vector_from_indices(&self, raw: &[u64]) -> Result<Vec<FieldElem>, FieldError> {
        raw.iter().map(|&x| self.elem(x)).collect()
    }

    /// The `index`-th vector of `F^n` in canonical order: coordinate 0 is the
    /// most significant base-`q` digit.
    pub fn vector_at(&self, n: usize, mut index: u64) -> Vec<FieldElem> {
        let q = self.0.q as u64;
        let mut v = vec![FieldElem::ZERO; n];
        for slot in v.iter_mut().rev() {
            *slot = FieldElem((index % q) as u32);
            index /= q;
        }
        v
    }

    /// `q^n`, saturating.
    pub fn space_size(&self, n: usize) -> u128 {
        (0..n).fold(1u128, |acc, _| acc.saturating_mul(self.0.q as u128))
    }
}

fn digits(mut a: u32, p: u32, l: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(l as usize);
    for _ in 0..l {
        d.push(a % p);
        a /= p;
    }
    d
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

fn add_digits(mut a: u32, mut b: u32, p: u32, l: u32) -> u32 {
    let mut out = 0u32;
    let mut scale = 1u32;
    for _ in 0..l {
        out += ((a % p + b % p) % p) * scale;
        a /= p;
        b /= p;
        scale = scale.wrapping_mul(p);
    }
    out
}

/// Smallest monic irreducible polynomial of degree `l` over GF(p), ordered by
/// the base-`p` index of its non-leading coefficients.
pub(crate) fn smallest_irreducible(p: u32, l: u32) -> Option<Vec<u32>> {
    let count = (p as u64).pow(l);
    (0..count).map(|idx| {
        let mut f = digits(idx as u32, p, l);
        f.push(1);
        f
    })
    .find(|f| poly::is_irreducible(f, p))
}

/// Dense polynomials over GF(p), low degree first.
pub(crate) mod poly {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        // p is prime: a^(p-2)
        let (mut base, mut e, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p as u64;
            }
            base = base * base % p as u64;
            e >>= 1;
        }
        acc as u32
    }

    /// Remainder of `a` modulo nonzero `m`.
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let m = trim(m.to_vec());
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let factor = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
            for (i, &c) in m.iter().enumerate() {
                let sub = (factor as u64 * c as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut prod = vec![0u32; a.len() + b.len()];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
            }
        }
        let mut r = rem(&prod, m, p);
        r.resize(m.len() - 1, 0);
        r
    }

    /// Trial division by every monic polynomial of degree `1..=deg/2`.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let deg = f.len() - 1;
        for d in 1..=deg / 2 {
            let count = (p as u64).pow(d as u32);
            for idx in 0..count {
                let mut g = Vec::with_capacity(d + 1);
                let mut x = idx;
                for _ in 0..d {
                    g.push((x % p as u64) as u32);
                    x /= p as u64;
                }
                g.push(1);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}
