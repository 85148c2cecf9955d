//! Dense univariate polynomials over GF(q).
//!
//! [`Polynomial`] owns its field context and checks it on binary operations.
//! The [`dense`] functions work on bare coefficient slices and are what the
//! factorization and scan code uses in inner loops.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::ff::{FieldContext, Fq};

/// Coefficient-slice arithmetic, lowest degree first, no trailing zeros.
pub mod dense {
    use crate::ff::{FieldContext, Fq};

    #[inline]
    pub fn trim(v: &mut Vec<Fq>) {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
    }

    pub fn add(f: &FieldContext, a: &[Fq], b: &[Fq]) -> Vec<Fq> {
        let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        let mut out = long.to_vec();
        for (o, &s) in out.iter_mut().zip(short) {
            *o = f.add(*o, s);
        }
        trim(&mut out);
        out
    }

    pub fn sub(f: &FieldContext, a: &[Fq], b: &[Fq]) -> Vec<Fq> {
        let mut out = a.to_vec();
        if out.len() < b.len() {
            out.resize(b.len(), Fq::ZERO);
        }
        for (o, &s) in out.iter_mut().zip(b) {
            *o = f.sub(*o, s);
        }
        trim(&mut out);
        out
    }

    pub fn mul(f: &FieldContext, a: &[Fq], b: &[Fq]) -> Vec<Fq> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Fq::ZERO; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        trim(&mut out);
        out
    }

    pub fn scale(f: &FieldContext, a: &[Fq], c: Fq) -> Vec<Fq> {
        if c.is_zero() {
            return Vec::new();
        }
        a.iter().map(|&x| f.mul(x, c)).collect()
    }

    pub fn make_monic(f: &FieldContext, a: &[Fq]) -> Vec<Fq> {
        match a.last() {
            None => Vec::new(),
            Some(&lc) if lc == Fq::ONE => a.to_vec(),
            Some(&lc) => scale(f, a, f.inv(lc)),
        }
    }

    /// Reduces `a` modulo the monic polynomial `m` in place.
    pub fn rem_monic(f: &FieldContext, a: &mut Vec<Fq>, m: &[Fq]) {
        let d = m.len() - 1;
        debug_assert_eq!(m[d], Fq::ONE);
        while a.len() > d {
            let top = a.len() - 1;
            let c = a[top];
            if !c.is_zero() {
                let shift = top - d;
                for (i, &mi) in m[..d].iter().enumerate() {
                    if !mi.is_zero() {
                        a[shift + i] = f.sub(a[shift + i], f.mul(c, mi));
                    }
                }
            }
            a.pop();
        }
        trim(a);
    }

    /// Quotient and remainder for a nonzero divisor.
    pub fn divmod(f: &FieldContext, a: &[Fq], b: &[Fq]) -> (Vec<Fq>, Vec<Fq>) {
        assert!(!b.is_empty(), "division by the zero polynomial");
        let d = b.len() - 1;
        if a.len() <= d {
            return (Vec::new(), a.to_vec());
        }
        let lc_inv = f.inv(b[d]);
        let mut r = a.to_vec();
        let mut quot = vec![Fq::ZERO; a.len() - d];
        for top in (d..r.len()).rev() {
            let c = f.mul(r[top], lc_inv);
            quot[top - d] = c;
            if c.is_zero() {
                continue;
            }
            for (i, &bi) in b.iter().enumerate() {
                r[top - d + i] = f.sub(r[top - d + i], f.mul(c, bi));
            }
        }
        r.truncate(d);
        trim(&mut r);
        trim(&mut quot);
        (quot, r)
    }

    pub fn rem(f: &FieldContext, a: &[Fq], b: &[Fq]) -> Vec<Fq> {
        if b.last() == Some(&Fq::ONE) {
            let mut r = a.to_vec();
            rem_monic(f, &mut r, b);
            r
        } else {
            divmod(f, a, b).1
        }
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(f: &FieldContext, a: &[Fq], b: &[Fq]) -> Vec<Fq> {
        let mut x = make_monic(f, a);
        let mut y = make_monic(f, b);
        while !y.is_empty() {
            rem_monic(f, &mut x, &y);
            let r = make_monic(f, &x);
            x = y;
            y = r;
        }
        x
    }

    pub fn mulmod(f: &FieldContext, a: &[Fq], b: &[Fq], m: &[Fq]) -> Vec<Fq> {
        let mut prod = mul(f, a, b);
        rem_monic(f, &mut prod, m);
        prod
    }

    /// `base^e mod m` for a monic modulus `m`.
    pub fn powmod(f: &FieldContext, base: &[Fq], mut e: u64, m: &[Fq]) -> Vec<Fq> {
        let mut acc = vec![Fq::ONE];
        rem_monic(f, &mut acc, m);
        let mut b = base.to_vec();
        rem_monic(f, &mut b, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(f, &acc, &b, m);
            }
            e >>= 1;
            if e > 0 {
                b = mulmod(f, &b, &b, m);
            }
        }
        acc
    }

    pub fn derivative(f: &FieldContext, a: &[Fq]) -> Vec<Fq> {
        let mut out: Vec<Fq> = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, f.from_int(i as i64)))
            .collect();
        trim(&mut out);
        out
    }

    pub fn eval(f: &FieldContext, a: &[Fq], x: Fq) -> Fq {
        a.iter()
            .rev()
            .fold(Fq::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `a(-T^2)`: coefficient `c_i` moves to degree `2i` with sign `(-1)^i`.
    pub fn compose_neg_square(f: &FieldContext, a: &[Fq]) -> Vec<Fq> {
        if a.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Fq::ZERO; 2 * a.len() - 1];
        for (i, &c) in a.iter().enumerate() {
            out[2 * i] = if i % 2 == 1 { f.neg(c) } else { c };
        }
        out
    }
}

/// A polynomial over a finite field, coefficients lowest degree first.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    ctx: FieldContext,
    coeffs: Vec<Fq>,
}

impl Polynomial {
    pub fn new(ctx: &FieldContext, mut coeffs: Vec<Fq>) -> Self {
        debug_assert!(coeffs.iter().all(|c| c.code() < ctx.q()));
        dense::trim(&mut coeffs);
        Self {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    /// From element codes, validating each against the field size.
    pub fn from_codes(ctx: &FieldContext, codes: &[u32]) -> Result<Self> {
        let coeffs = codes
            .iter()
            .map(|&c| ctx.fq(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(ctx, coeffs))
    }

    /// Prime-field integer coefficients, reduced mod p.
    pub fn from_ints(ctx: &FieldContext, ints: &[i64]) -> Self {
        Self::new(ctx, ints.iter().map(|&n| ctx.from_int(n)).collect())
    }

    pub fn zero(ctx: &FieldContext) -> Self {
        Self::new(ctx, Vec::new())
    }

    pub fn one(ctx: &FieldContext) -> Self {
        Self::new(ctx, vec![Fq::ONE])
    }

    pub fn constant(ctx: &FieldContext, c: Fq) -> Self {
        Self::new(ctx, vec![c])
    }

    /// `c * T^degree`.
    pub fn monomial(ctx: &FieldContext, c: Fq, degree: usize) -> Self {
        let mut coeffs = vec![Fq::ZERO; degree + 1];
        coeffs[degree] = c;
        Self::new(ctx, coeffs)
    }

    /// The indeterminate `T`.
    pub fn t(ctx: &FieldContext) -> Self {
        Self::monomial(ctx, Fq::ONE, 1)
    }

    pub fn ctx(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Fq> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(Fq::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&Fq::ONE)
    }

    pub fn leading_coeff(&self) -> Fq {
        self.coeffs.last().copied().unwrap_or(Fq::ZERO)
    }

    fn same(&self, coeffs: Vec<Fq>) -> Self {
        Self::new(&self.ctx, coeffs)
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ctx.check_same(&other.ctx)?;
        Ok(self.same(dense::add(&self.ctx, &self.coeffs, &other.coeffs)))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ctx.check_same(&other.ctx)?;
        Ok(self.same(dense::sub(&self.ctx, &self.coeffs, &other.coeffs)))
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ctx.check_same(&other.ctx)?;
        Ok(self.same(dense::mul(&self.ctx, &self.coeffs, &other.coeffs)))
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(self.ctx.neg(Fq::ONE))
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ctx);
        for _ in 0..e {
            acc = self.same(dense::mul(&self.ctx, &acc.coeffs, &self.coeffs));
        }
        acc
    }

    /// Quotient and remainder with `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        self.ctx.check_same(&divisor.ctx)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (q, r) = dense::divmod(&self.ctx, &self.coeffs, &divisor.coeffs);
        Ok((self.same(q), self.same(r)))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ctx.check_same(&other.ctx)?;
        Ok(self.same(dense::gcd(&self.ctx, &self.coeffs, &other.coeffs)))
    }

    pub fn derivative(&self) -> Polynomial {
        self.same(dense::derivative(&self.ctx, &self.coeffs))
    }

    pub fn eval(&self, x: Fq) -> Fq {
        dense::eval(&self.ctx, &self.coeffs, x)
    }

    pub fn scale(&self, c: Fq) -> Polynomial {
        self.same(dense::scale(&self.ctx, &self.coeffs, c))
    }

    pub fn make_monic(&self) -> Polynomial {
        self.same(dense::make_monic(&self.ctx, &self.coeffs))
    }

    /// `f(-T^2)`.
    pub fn compose_neg_square(&self) -> Polynomial {
        self.same(dense::compose_neg_square(&self.ctx, &self.coeffs))
    }

    /// `(-1)^n f(-T^2)` for monic `f` of degree `n`, which is monic of degree `2n`.
    pub fn monic_neg_square(&self) -> Result<Polynomial> {
        if !self.is_monic() {
            return Err(Error::NotMonic);
        }
        let g = self.compose_neg_square();
        if self.coeffs.len().is_multiple_of(2) {
            Ok(g.neg())
        } else {
            Ok(g)
        }
    }

    /// `q^deg f`, and 0 for the zero polynomial.
    pub fn norm(&self) -> BigUint {
        match self.degree() {
            None => BigUint::from(0u32),
            Some(d) => BigUint::from(self.ctx.q()).pow(d as u32),
        }
    }

    /// True iff `gcd(f, f')` is constant.
    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::InvalidInput(
                "squarefreeness of the zero polynomial".into(),
            ));
        }
        let d = self.derivative();
        Ok(self.gcd(&d)?.is_constant())
    }

    /// Parses either a comma-separated coefficient list (constant term first,
    /// each coefficient `c` or `c0:c1:...`) or the monomial shorthand `T^n`.
    pub fn parse(ctx: &FieldContext, text: &str) -> Result<Polynomial> {
        let s = text.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        if let Some(rest) = s.strip_prefix('T').or_else(|| s.strip_prefix('t')) {
            let rest = rest.trim();
            let degree = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')
                    .and_then(|e| e.trim().parse::<usize>().ok())
                    .ok_or_else(|| Error::Parse(format!("bad monomial '{s}'")))?
            };
            return Ok(Polynomial::monomial(ctx, Fq::ONE, degree));
        }
        let coeffs = s
            .split(',')
            .map(|c| ctx.parse_element(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial::new(ctx, coeffs))
    }

    /// Inverse of [`Polynomial::parse`] for coefficient lists. The zero
    /// polynomial is written as `0`.
    pub fn to_coeff_string(&self) -> String {
        if self.is_zero() {
            return self.ctx.format_element(Fq::ZERO);
        }
        self.coeffs
            .iter()
            .map(|&c| self.ctx.format_element(c))
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl PartialOrd for Polynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficient codes from the constant term up.
impl Ord for Polynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ctx.q().hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let coeff = if c.code() < self.ctx.p() {
                self.ctx.format_element(c)
            } else {
                format!("({})", self.ctx.format_element(c))
            };
            match (i, c == Fq::ONE) {
                (0, _) => f.write_str(&coeff)?,
                (1, true) => f.write_str("T")?,
                (1, false) => write!(f, "{coeff}T")?,
                (_, true) => write!(f, "T^{i}")?,
                (_, false) => write!(f, "{coeff}T^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {:?}", self, self.ctx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u64, k: u32) -> FieldContext {
        FieldContext::new(p, k).unwrap()
    }

    fn poly(ctx: &FieldContext, ints: &[i64]) -> Polynomial {
        Polynomial::from_ints(ctx, ints)
    }

    #[test]
    fn gcd_is_monic() {
        let f3 = gf(3, 1);
        let g = poly(&f3, &[-1, 0, 1]).gcd(&poly(&f3, &[-1, 1])).unwrap();
        assert_eq!(g, poly(&f3, &[2, 1]));
        // scalar multiples have the same gcd
        let g2 = poly(&f3, &[-2, 0, 2]).gcd(&poly(&f3, &[1, -1])).unwrap();
        assert_eq!(g2, g);
    }

    #[test]
    fn derivative_in_characteristic_p() {
        let f3 = gf(3, 1);
        assert!(Polynomial::monomial(&f3, Fq::ONE, 3).derivative().is_zero());
        let f5 = gf(5, 1);
        assert!(Polynomial::monomial(&f5, Fq::ONE, 5).derivative().is_zero());
        assert_eq!(poly(&f5, &[1, 2, 3]).derivative(), poly(&f5, &[2, 6]));
    }

    #[test]
    fn evaluation() {
        let f3 = gf(3, 1);
        assert_eq!(poly(&f3, &[1, 0, 1]).eval(Fq::ONE), Fq(2));
    }

    #[test]
    fn neg_square_substitution() {
        let f3 = gf(3, 1);
        assert_eq!(
            poly(&f3, &[1, 1]).compose_neg_square(),
            poly(&f3, &[1, 0, 2])
        );
        assert_eq!(
            poly(&f3, &[0, 1]).compose_neg_square(),
            poly(&f3, &[0, 0, 2])
        );
        assert_eq!(
            poly(&f3, &[1, 0, 1]).compose_neg_square(),
            poly(&f3, &[1, 0, 0, 0, 1])
        );

        assert_eq!(
            poly(&f3, &[1, 1]).monic_neg_square().unwrap(),
            poly(&f3, &[2, 0, 1])
        );
        assert_eq!(
            poly(&f3, &[1, 0, 1]).monic_neg_square().unwrap(),
            poly(&f3, &[1, 0, 0, 0, 1])
        );
        assert_eq!(poly(&f3, &[1, 2]).monic_neg_square(), Err(Error::NotMonic));
    }

    #[test]
    fn norms() {
        let f9 = gf(3, 2);
        assert_eq!(poly(&f9, &[0, 1, 0, 1]).norm(), BigUint::from(729u32));
        assert_eq!(Polynomial::zero(&f9).norm(), BigUint::from(0u32));
        let f7 = gf(7, 1);
        assert_eq!(poly(&f7, &[5]).norm(), BigUint::from(1u32));
    }

    #[test]
    fn squarefreeness() {
        let f3 = gf(3, 1);
        assert!(poly(&f3, &[-1, 0, 1]).is_squarefree().unwrap());
        assert!(!poly(&f3, &[1, 2, 1]).is_squarefree().unwrap());
        // T^3 - 1 = (T - 1)^3 has zero derivative
        assert!(!poly(&f3, &[-1, 0, 0, 1]).is_squarefree().unwrap());
        assert!(!poly(&f3, &[0, 0, 0, 1]).is_squarefree().unwrap());
        assert!(Polynomial::zero(&f3).is_squarefree().is_err());
    }

    #[test]
    fn errors() {
        let f3 = gf(3, 1);
        let f5 = gf(5, 1);
        let a = poly(&f3, &[1, 1]);
        let b = poly(&f5, &[1, 1]);
        assert!(matches!(a.add(&b), Err(Error::MixedFields { .. })));
        assert!(matches!(a.mul(&b), Err(Error::MixedFields { .. })));
        assert_eq!(a.divmod(&Polynomial::zero(&f3)), Err(Error::DivisionByZero));
    }

    #[test]
    fn text_format() {
        let f9 = gf(3, 2);
        let f = Polynomial::parse(&f9, "0:0,1:0,2:1").unwrap();
        assert_eq!(f.coeff(0), Fq::ZERO);
        assert_eq!(f.coeff(1), Fq::ONE);
        assert_eq!(f9.coords(f.coeff(2)), vec![2, 1]);
        assert_eq!(f.to_coeff_string(), "0,1,2:1");
        assert_eq!(
            Polynomial::parse(&f9, "T^4").unwrap(),
            Polynomial::monomial(&f9, Fq::ONE, 4)
        );
        let f3 = gf(3, 1);
        assert_eq!(
            Polynomial::parse(&f3, "1,0,1").unwrap(),
            poly(&f3, &[1, 0, 1])
        );
        assert_eq!(
            Polynomial::parse(&f3, "1,0,1").unwrap().to_string(),
            "T^2 + 1"
        );
        assert!(Polynomial::parse(&f3, "1,x").is_err());
        assert!(Polynomial::parse(&f3, "").is_err());
        assert!(Polynomial::parse(&f9, "1:1:1").is_err());
        assert!(Polynomial::parse(&f3, "T^").is_err());
    }

    #[test]
    fn monic_neg_square_exhaustive_gf3() {
        let f3 = gf(3, 1);
        for n in 0..=6usize {
            let count = 3u32.pow(n as u32);
            for idx in 0..count {
                let mut coeffs = Vec::with_capacity(n + 1);
                let mut rest = idx;
                for _ in 0..n {
                    coeffs.push(Fq(rest % 3));
                    rest /= 3;
                }
                coeffs.push(Fq::ONE);
                let f = Polynomial::new(&f3, coeffs);
                let g = f.monic_neg_square().unwrap();
                assert!(g.is_monic());
                assert_eq!(g.degree(), Some(2 * n));
                assert!(g.coeffs().iter().skip(1).step_by(2).all(|c| c.is_zero()));
            }
        }
    }

    fn arb_poly(max_len: usize) -> impl Strategy<Value = (u8, Vec<u32>)> {
        (0u8..2, prop::collection::vec(0u32..9, 0..max_len))
    }

    fn field_of(which: u8) -> FieldContext {
        if which == 0 {
            gf(3, 1)
        } else {
            gf(3, 2)
        }
    }

    fn reduce(ctx: &FieldContext, codes: &[u32]) -> Polynomial {
        Polynomial::from_codes(ctx, &codes.iter().map(|c| c % ctx.q()).collect::<Vec<_>>()).unwrap()
    }

    proptest! {
        #[test]
        fn divmod_round_trip((which, a) in arb_poly(12), b in prop::collection::vec(0u32..9, 1..7)) {
            let ctx = field_of(which);
            let f = reduce(&ctx, &a);
            let d = reduce(&ctx, &b);
            prop_assume!(!d.is_zero());
            let (q, r) = f.divmod(&d).unwrap();
            prop_assert!(r.degree() < d.degree());
            prop_assert_eq!(q.mul(&d).unwrap().add(&r).unwrap(), f);
        }

        #[test]
        fn neg_square_is_multiplicative((which, a) in arb_poly(8), b in prop::collection::vec(0u32..9, 0..8)) {
            let ctx = field_of(which);
            let f = reduce(&ctx, &a);
            let g = reduce(&ctx, &b);
            prop_assert_eq!(
                f.mul(&g).unwrap().compose_neg_square(),
                f.compose_neg_square().mul(&g.compose_neg_square()).unwrap()
            );
        }

        #[test]
        fn coeff_string_round_trip((which, a) in arb_poly(10)) {
            let ctx = field_of(which);
            let f = reduce(&ctx, &a);
            prop_assert_eq!(Polynomial::parse(&ctx, &f.to_coeff_string()).unwrap(), f);
        }
    }
}
