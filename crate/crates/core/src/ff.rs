//! Finite fields GF(p^k) for odd primes p.
//!
//! Elements are stored as integer codes `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`
//! where `c_0 + c_1 x + ...` is the residue representative modulo the field's
//! defining polynomial. All arithmetic goes through log/antilog tables built
//! once per field, so a [`FieldContext`] is cheap to clone and share.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default bound on the field size `q`.
pub const DEFAULT_MAX_Q: u64 = 1 << 20;

/// Largest field for which a full `q * q` addition table is precomputed.
const ADD_TABLE_MAX_Q: u32 = 1024;

const NO_LOG: u32 = u32::MAX;

/// Raw element code, only meaningful together with the [`FieldContext`] it
/// came from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fq(pub(crate) u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

enum Adder {
    /// k = 1: plain modular addition.
    Prime,
    /// Full addition table, row-major `a * q + b`.
    Table(Vec<u32>),
    /// Zech logarithms: `zech[n] = log(1 + g^n)`.
    Zech(Vec<u32>),
}

struct Tables {
    p: u32,
    k: u32,
    q: u32,
    /// Monic defining polynomial over GF(p), lowest degree first. Empty when k = 1.
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for `i < 2(q-1)`.
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    adder: Adder,
}

/// The field GF(p^k) together with its arithmetic tables.
///
/// Two contexts with the same `(p, k)` use the same modulus and the same
/// element encoding and compare equal.
#[derive(Clone)]
pub struct FieldContext {
    inner: Arc<Tables>,
}

impl FieldContext {
    /// Builds GF(p^k) with the default size bound.
    pub fn new(p: u64, k: u32) -> Result<Self> {
        Self::with_max_q(p, k, DEFAULT_MAX_Q)
    }

    pub fn with_max_q(p: u64, k: u32, max_q: u64) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidField(
                "extension degree must be at least 1".into(),
            ));
        }
        if p == 2 {
            return Err(Error::InvalidField(
                "characteristic 2 is not supported".into(),
            ));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not a prime")));
        }
        if p.is_multiple_of(2) {
            return Err(Error::InvalidField(format!("{p} is even")));
        }
        let q = (p as u128)
            .checked_pow(k)
            .ok_or_else(|| Error::guard("field size", u128::MAX, max_q as u128))?;
        if q > max_q as u128 || q > u32::MAX as u128 / 2 {
            return Err(Error::guard("field size", q, max_q as u128));
        }
        Ok(Self {
            inner: Arc::new(Tables::build(p as u32, k, q as u32)),
        })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.inner.p
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.inner.k
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.inner.q
    }

    /// Defining polynomial over GF(p), lowest degree first (empty for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn same_field(&self, other: &FieldContext) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || (self.p() == other.p() && self.k() == other.k())
    }

    pub(crate) fn check_same(&self, other: &FieldContext) -> Result<()> {
        if self.same_field(other) {
            Ok(())
        } else {
            Err(Error::MixedFields {
                left: self.q() as u64,
                right: other.q() as u64,
            })
        }
    }

    /// Interprets `code` as an element; fails if `code >= q`.
    pub fn fq(&self, code: u32) -> Result<Fq> {
        if code < self.q() {
            Ok(Fq(code))
        } else {
            Err(Error::InvalidInput(format!(
                "element code {code} out of range for GF({})",
                self.q()
            )))
        }
    }

    /// Element from its coordinates `c_0, ..., c_{k-1}` over GF(p).
    pub fn from_coords(&self, coords: &[u32]) -> Result<Fq> {
        if coords.len() != self.k() as usize {
            return Err(Error::InvalidInput(format!(
                "expected {} coordinates, got {}",
                self.k(),
                coords.len()
            )));
        }
        let p = self.p();
        let mut code = 0u32;
        for &c in coords.iter().rev() {
            if c >= p {
                return Err(Error::InvalidInput(format!(
                    "coordinate {c} not in [0, {p})"
                )));
            }
            code = code * p + c;
        }
        Ok(Fq(code))
    }

    pub fn coords(&self, x: Fq) -> Vec<u32> {
        let p = self.p();
        let mut code = x.0;
        (0..self.k())
            .map(|_| {
                let c = code % p;
                code /= p;
                c
            })
            .collect()
    }

    /// Image of an integer under Z -> GF(p) -> GF(q).
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.p() as i64) as u32)
    }

    /// All q elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> + '_ {
        (0..self.q()).map(Fq)
    }

    pub fn enumerate_elements(&self) -> Vec<FieldElement> {
        self.elements().map(|x| self.wrap(x)).collect()
    }

    pub fn wrap(&self, x: Fq) -> FieldElement {
        debug_assert!(x.0 < self.q());
        FieldElement {
            ctx: self.clone(),
            value: x,
        }
    }

    /// The generator `g` used by the log tables.
    pub fn primitive_element(&self) -> Fq {
        Fq(self.inner.exp[1])
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let t = &*self.inner;
        match &t.adder {
            Adder::Prime => {
                let s = a.0 + b.0;
                Fq(if s >= t.p { s - t.p } else { s })
            }
            Adder::Table(table) => Fq(table[(a.0 * t.q + b.0) as usize]),
            Adder::Zech(zech) => {
                if a.0 == 0 {
                    return b;
                }
                if b.0 == 0 {
                    return a;
                }
                let la = t.log[a.0 as usize];
                let lb = t.log[b.0 as usize];
                let d = if lb >= la {
                    lb - la
                } else {
                    lb + (t.q - 1) - la
                };
                let z = zech[d as usize];
                if z == NO_LOG {
                    Fq::ZERO
                } else {
                    Fq(t.exp[(la + z) as usize])
                }
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        Fq(self.inner.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq::ZERO;
        }
        let t = &*self.inner;
        Fq(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
    }

    /// Multiplicative inverse. Panics on zero; use [`FieldElement::inv`] for
    /// the checked version.
    #[inline]
    pub fn inv(&self, a: Fq) -> Fq {
        assert!(!a.is_zero(), "inverse of zero");
        let t = &*self.inner;
        Fq(t.exp[(t.q - 1 - t.log[a.0 as usize]) as usize])
    }

    pub fn try_inv(&self, a: Fq) -> Result<Fq> {
        if a.is_zero() {
            Err(Error::ZeroInverse)
        } else {
            Ok(self.inv(a))
        }
    }

    pub fn pow(&self, a: Fq, e: u64) -> Fq {
        if e == 0 {
            return Fq::ONE;
        }
        if a.is_zero() {
            return Fq::ZERO;
        }
        let t = &*self.inner;
        let order = (t.q - 1) as u64;
        let l = (t.log[a.0 as usize] as u64 * (e % order)) % order;
        Fq(t.exp[l as usize])
    }

    /// Euler's criterion; zero counts as a square.
    pub fn is_square(&self, a: Fq) -> bool {
        a.is_zero() || self.pow(a, (self.q() as u64 - 1) / 2) == Fq::ONE
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fq) -> u64 {
        assert!(!a.is_zero(), "order of zero");
        let n = (self.q() - 1) as u64;
        let l = self.inner.log[a.0 as usize] as u64;
        n / num_integer::gcd(n, l)
    }

    /// `c` for elements of the prime field, `c0:c1:...` otherwise.
    pub fn format_element(&self, x: Fq) -> String {
        if x.0 < self.p() {
            x.0.to_string()
        } else {
            self.coords(x)
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(":")
        }
    }

    /// Parses `c` (prime field) or `c0:c1:...:c_{k-1}`.
    pub fn parse_element(&self, s: &str) -> Result<Fq> {
        let s = s.trim();
        let parts: Vec<&str> = s.split(':').collect();
        let parse = |t: &str| -> Result<i64> {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad field element '{s}'")))
        };
        if parts.len() == 1 {
            if self.k() == 1 {
                return Ok(self.from_int(parse(parts[0])?));
            }
            let v = parse(parts[0])?;
            if v < 0 || v >= self.p() as i64 {
                return Err(Error::Parse(format!(
                    "'{s}': a single integer must lie in [0, {}) over GF({})",
                    self.p(),
                    self.q()
                )));
            }
            return Ok(Fq(v as u32));
        }
        if parts.len() != self.k() as usize {
            return Err(Error::Parse(format!(
                "'{s}': expected {} colon-separated coordinates",
                self.k()
            )));
        }
        let coords = parts
            .iter()
            .map(|t| {
                let v = parse(t)?;
                if v < 0 || v >= self.p() as i64 {
                    Err(Error::Parse(format!(
                        "'{s}': coordinate {v} not in [0, {})",
                        self.p()
                    )))
                } else {
                    Ok(v as u32)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        self.from_coords(&coords)
    }
}

impl PartialEq for FieldContext {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other)
    }
}

impl Eq for FieldContext {}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k() == 1 {
            write!(f, "GF({})", self.p())
        } else {
            write!(f, "GF({}^{})", self.p(), self.k())
        }
    }
}

/// An element bundled with its field, with context-checked arithmetic.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    ctx: FieldContext,
    value: Fq,
}

impl FieldElement {
    pub fn ctx(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn value(&self) -> Fq {
        self.value
    }

    pub fn coords(&self) -> Vec<u32> {
        self.ctx.coords(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.ctx.check_same(&other.ctx)?;
        Ok(self.ctx.wrap(self.ctx.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.ctx.check_same(&other.ctx)?;
        Ok(self.ctx.wrap(self.ctx.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.ctx.check_same(&other.ctx)?;
        Ok(self.ctx.wrap(self.ctx.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> FieldElement {
        self.ctx.wrap(self.ctx.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.ctx.wrap(self.ctx.try_inv(self.value)?))
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.ctx.wrap(self.ctx.pow(self.value, e))
    }

    pub fn is_square(&self) -> bool {
        self.ctx.is_square(self.value)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ctx.format_element(self.value))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {:?}", self, self.ctx)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
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

impl Tables {
    fn build(p: u32, k: u32, q: u32) -> Tables {
        let modulus = if k == 1 {
            Vec::new()
        } else {
            smallest_irreducible(p, k as usize)
        };
        let slow = SlowField {
            p,
            k,
            modulus: &modulus,
        };

        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&g| factors.iter().all(|&r| slow.pow(g, order / r) != 1))
            .expect("multiplicative group of a finite field is cyclic");

        let mut exp = vec![0u32; 2 * (q as usize - 1)];
        let mut log = vec![NO_LOG; q as usize];
        let mut cur = 1u32;
        for i in 0..(q - 1) as usize {
            exp[i] = cur;
            exp[i + q as usize - 1] = cur;
            log[cur as usize] = i as u32;
            cur = slow.mul(cur, generator);
        }
        debug_assert_eq!(cur, 1);

        let neg = (0..q).map(|a| slow.neg(a)).collect();
        let adder = if k == 1 {
            Adder::Prime
        } else if q <= ADD_TABLE_MAX_Q {
            let mut table = Vec::with_capacity((q * q) as usize);
            for a in 0..q {
                for b in 0..q {
                    table.push(slow.add(a, b));
                }
            }
            Adder::Table(table)
        } else {
            let zech = (0..q - 1)
                .map(|n| {
                    let s = slow.add(exp[n as usize], 1);
                    if s == 0 {
                        NO_LOG
                    } else {
                        log[s as usize]
                    }
                })
                .collect();
            Adder::Zech(zech)
        };

        Tables {
            p,
            k,
            q,
            modulus,
            exp,
            log,
            neg,
            adder,
        }
    }
}

/// Coordinate-wise arithmetic used only while building tables.
struct SlowField<'a> {
    p: u32,
    k: u32,
    modulus: &'a [u32],
}

impl SlowField<'_> {
    fn decode(&self, mut code: u32) -> Vec<u64> {
        (0..self.k)
            .map(|_| {
                let c = code % self.p;
                code /= self.p;
                c as u64
            })
            .collect()
    }

    fn encode(&self, coords: &[u64]) -> u32 {
        coords
            .iter()
            .rev()
            .fold(0u32, |acc, &c| acc * self.p + c as u32)
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let x = self.decode(a);
        let y = self.decode(b);
        let s: Vec<u64> = x.iter().zip(&y).map(|(u, v)| (u + v) % p).collect();
        self.encode(&s)
    }

    fn neg(&self, a: u32) -> u32 {
        let p = self.p as u64;
        let s: Vec<u64> = self.decode(a).iter().map(|&u| (p - u) % p).collect();
        self.encode(&s)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        if self.k == 1 {
            return ((a as u64 * b as u64) % p) as u32;
        }
        let x = self.decode(a);
        let y = self.decode(b);
        let k = self.k as usize;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &u) in x.iter().enumerate() {
            for (j, &v) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u * v) % p;
            }
        }
        // Reduce with the monic modulus: x^k = -(m_0 + ... + m_{k-1} x^{k-1}).
        for d in (k..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &m) in self.modulus[..k].iter().enumerate() {
                let idx = d - k + i;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
        }
        prod.truncate(k);
        self.encode(&prod)
    }

    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// Lexicographically smallest monic irreducible of degree `k` over GF(p),
/// comparing `(c_0, c_1, ..., c_{k-1})` starting from the constant term.
fn smallest_irreducible(p: u32, k: usize) -> Vec<u32> {
    let total = (p as u64).pow(k as u32);
    for idx in 0..total {
        // c_0 is the most significant digit of idx.
        let mut rest = idx;
        let mut coeffs = vec![0u32; k + 1];
        for i in (0..k).rev() {
            coeffs[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[k] = 1;
        if naive_irreducible(p, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Trial division by every monic polynomial of degree at most deg/2.
fn naive_irreducible(p: u32, f: &[u32]) -> bool {
    let n = f.len() - 1;
    if n >= 2 && f[0] == 0 {
        return false;
    }
    for d in 1..=n / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut divisor = vec![0u32; d + 1];
            let mut rest = idx;
            for c in divisor.iter_mut().take(d) {
                *c = (rest % p as u64) as u32;
                rest /= p as u64;
            }
            divisor[d] = 1;
            if naive_rem_is_zero(p, f, &divisor) {
                return false;
            }
        }
    }
    true
}

fn naive_rem_is_zero(p: u32, f: &[u32], monic_divisor: &[u32]) -> bool {
    let p = p as u64;
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let d = monic_divisor.len() - 1;
    for top in (d..r.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        for (i, &m) in monic_divisor.iter().enumerate() {
            let idx = top - d + i;
            r[idx] = (r[idx] + (p - c) * m as u64) % p;
        }
    }
    r[..d].iter().all(|&c| c == 0)
}
