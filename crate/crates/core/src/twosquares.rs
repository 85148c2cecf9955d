//! Deciding whether a monic `f` in GF(q)[T] can be written as `A^2 + T B^2`.
//!
//! A monic irreducible `P` is *inert* when `P(-T^2)` stays irreducible. Then
//! `f = A^2 + T B^2` is solvable exactly when every inert prime divides `f`
//! to an even power. For squarefree `f` with `f(0) != 0` the same information
//! is packaged as a signed cycle type: one `(deg P, sign)` pair per prime
//! factor, with sign `+1` when `P(-T^2)` splits.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::factor::{self, factor_monic, irreducible_monic, FactorConfig};
use crate::ff::{FieldContext, Fq};
use crate::poly::{dense, Polynomial};
use crate::DEFAULT_MAX_ENUM;

pub use crate::hyperoct::{Sign, SignedCycleType};

/// A witness `target = a^2 + T b^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub a: Polynomial,
    pub b: Polynomial,
    pub target: Polynomial,
}

impl Representation {
    pub fn verify(&self) -> bool {
        let ctx = self.target.ctx();
        let a2 = dense::mul(ctx, self.a.coeffs(), self.a.coeffs());
        let b2 = dense::mul(ctx, self.b.coeffs(), self.b.coeffs());
        let mut tb2 = vec![Fq::ZERO];
        tb2.extend(b2);
        dense::trim(&mut tb2);
        dense::add(ctx, &a2, &tb2) == self.target.coeffs()
    }
}

/// `make_monic(P(-T^2))` for monic `P`.
fn neg_square_monic(ctx: &FieldContext, p: &[Fq]) -> Vec<Fq> {
    let g = dense::compose_neg_square(ctx, p);
    dense::make_monic(ctx, &g)
}

pub(crate) fn inert_monic(ctx: &FieldContext, p: &[Fq]) -> bool {
    irreducible_monic(ctx, &neg_square_monic(ctx, p))
}

/// Whether the monic irreducible `p` stays prime under `T -> -T^2`.
pub fn is_inert_prime(p: &Polynomial) -> Result<bool> {
    if !factor::is_irreducible(p)? {
        return Err(Error::InvalidInput(format!("{p} is not irreducible")));
    }
    Ok(inert_monic(p.ctx(), p.coeffs()))
}

/// `b_q` on raw monic coefficients. Only primes of odd multiplicity matter.
pub(crate) fn bq_monic(ctx: &FieldContext, f: &[Fq], config: &FactorConfig) -> bool {
    factor_monic(ctx, f, config)
        .iter()
        .filter(|(_, e)| e % 2 == 1)
        .all(|(p, _)| !inert_monic(ctx, p))
}

/// The indicator `b_q(f)`: true iff `f = A^2 + T B^2` for some `A, B`.
pub fn is_sum_of_two_squares(f: &Polynomial) -> Result<bool> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    Ok(bq_monic(f.ctx(), f.coeffs(), &FactorConfig::default()))
}

/// Exhaustive search over `deg A <= n/2`, `deg B <= (n-1)/2`.
pub fn find_representation_bruteforce(f: &Polynomial) -> Result<Option<Representation>> {
    find_representation_bruteforce_with_limit(f, DEFAULT_MAX_ENUM)
}

pub fn find_representation_bruteforce_with_limit(
    f: &Polynomial,
    max_search: u64,
) -> Result<Option<Representation>> {
    let ctx = f.ctx();
    let n = match f.degree() {
        Some(n) => n,
        None => {
            return Err(Error::InvalidInput(
                "representation of the zero polynomial".into(),
            ))
        }
    };
    let a_len = n / 2 + 1;
    let b_len = if n == 0 { 0 } else { (n - 1) / 2 + 1 };
    let q = ctx.q() as u128;
    let space = q.checked_pow((a_len + b_len) as u32).unwrap_or(u128::MAX);
    if space > max_search as u128 {
        return Err(Error::guard(
            "representation search",
            space,
            max_search as u128,
        ));
    }

    // Every pair (A, B) is covered: each square A^2 is tabulated, and each B
    // is checked against the table. The first A in index order is kept.
    let mut squares: HashMap<Vec<Fq>, Vec<Fq>> = HashMap::new();
    for idx in 0..q.pow(a_len as u32) as u64 {
        let a = digits(ctx, a_len, idx);
        squares.entry(dense::mul(ctx, &a, &a)).or_insert(a);
    }
    for idx in 0..q.pow(b_len as u32) as u64 {
        let b = digits(ctx, b_len, idx);
        let b2 = dense::mul(ctx, &b, &b);
        let mut tb2 = vec![Fq::ZERO];
        tb2.extend(b2);
        dense::trim(&mut tb2);
        let rest = dense::sub(ctx, f.coeffs(), &tb2);
        if let Some(a) = squares.get(&rest) {
            return Ok(Some(Representation {
                a: Polynomial::new(ctx, a.clone()),
                b: Polynomial::new(ctx, b),
                target: f.clone(),
            }));
        }
    }
    Ok(None)
}

fn digits(ctx: &FieldContext, len: usize, mut idx: u64) -> Vec<Fq> {
    let q = ctx.q() as u64;
    let mut out: Vec<Fq> = (0..len)
        .map(|_| {
            let d = Fq((idx % q) as u32);
            idx /= q;
            d
        })
        .collect();
    dense::trim(&mut out);
    out
}

/// Builds `A, B` from the factorization: with `S^2 = -T`,
/// `f(-S^2) = G(S) G(-S)` where `G` collects one conjugate factor of each
/// split prime and `P(-S^2)^{e/2}` for each inert prime; `A` and `B` are read
/// off the even and odd parts of `G`. Returns `None` when `b_q(f) = 0`.
pub fn construct_representation(f: &Polynomial) -> Result<Option<Representation>> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let ctx = f.ctx();
    let config = FactorConfig::default();
    let mut g = vec![Fq::ONE];
    for (p, e) in factor_monic(ctx, f.coeffs(), &config) {
        let lifted = dense::compose_neg_square(ctx, &p);
        let part = if inert_monic(ctx, &p) {
            if e % 2 == 1 {
                return Ok(None);
            }
            pow(ctx, &lifted, e / 2)
        } else {
            // P(-S^2) = H(S) H(-S) with H monic of degree deg P.
            let split = factor_monic(ctx, &dense::make_monic(ctx, &lifted), &config);
            let h = &split[0].0;
            debug_assert_eq!(h.len(), p.len());
            pow(ctx, h, e)
        };
        g = dense::mul(ctx, &g, &part);
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (j, &c) in g.iter().enumerate() {
        // S^{2i} = (-T)^i and S^{2i+1} = S (-T)^i
        let i = j / 2;
        let v = if i % 2 == 1 { ctx.neg(c) } else { c };
        if j % 2 == 0 {
            a.push(v);
        } else {
            b.push(v);
        }
    }
    let rep = Representation {
        a: Polynomial::new(ctx, a),
        b: Polynomial::new(ctx, b),
        target: f.clone(),
    };
    debug_assert!(rep.verify());
    Ok(Some(rep))
}

fn pow(ctx: &FieldContext, base: &[Fq], e: u32) -> Vec<Fq> {
    (0..e).fold(vec![Fq::ONE], |acc, _| dense::mul(ctx, &acc, base))
}

fn check_frobenius_domain(f: &Polynomial) -> Result<()> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    if f.coeff(0).is_zero() {
        return Err(Error::InvalidInput("f(0) = 0".into()));
    }
    if !f.is_squarefree()? {
        return Err(Error::InvalidInput(format!("{f} is not squarefree")));
    }
    Ok(())
}

pub(crate) fn signed_type_monic(
    ctx: &FieldContext,
    f: &[Fq],
    config: &FactorConfig,
) -> SignedCycleType {
    SignedCycleType::new(
        factor_monic(ctx, f, config)
            .iter()
            .map(|(p, _)| {
                let sign = if inert_monic(ctx, p) {
                    Sign::Minus
                } else {
                    Sign::Plus
                };
                (p.len() - 1, sign)
            })
            .collect(),
    )
}

/// Signed cycle type of Frobenius for squarefree monic `f` with `f(0) != 0`.
pub fn signed_frobenius_type(f: &Polynomial) -> Result<SignedCycleType> {
    check_frobenius_domain(f)?;
    Ok(signed_type_monic(
        f.ctx(),
        f.coeffs(),
        &FactorConfig::default(),
    ))
}

/// Whether Frobenius lands in `X_n`; agrees with [`is_sum_of_two_squares`].
pub fn frobenius_in_xn(f: &Polynomial) -> Result<bool> {
    Ok(signed_frobenius_type(f)?.all_plus())
}
