//! Irreducibility testing and factorization of monic polynomials over GF(q).

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ff::{prime_factors, FieldContext, Fq};
use crate::poly::{dense, Polynomial};
use crate::DEFAULT_MAX_ENUM;

/// Below this value of `q^deg` factorization is done by trial division.
pub const DEFAULT_TRIAL_THRESHOLD: u64 = 10_000;

/// Seed used where callers do not supply one. Factorizations are canonical,
/// so the seed only affects running time.
pub const DEFAULT_SEED: u64 = 0x5eed_f00d;

/// A monic polynomial split into monic irreducibles with multiplicities,
/// sorted by [`Polynomial`]'s ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    input: Polynomial,
    factors: Vec<(Polynomial, u32)>,
}

impl Factorization {
    pub fn input(&self) -> &Polynomial {
        &self.input
    }

    pub fn factors(&self) -> &[(Polynomial, u32)] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Product of `prime^multiplicity`; equals the input.
    pub fn product(&self) -> Polynomial {
        let ctx = self.input.ctx();
        let mut acc = vec![Fq::ONE];
        for (prime, e) in &self.factors {
            for _ in 0..*e {
                acc = dense::mul(ctx, &acc, prime.coeffs());
            }
        }
        Polynomial::new(ctx, acc)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FactorConfig {
    pub seed: u64,
    pub trial_threshold: u64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            trial_threshold: DEFAULT_TRIAL_THRESHOLD,
        }
    }
}

fn check_monic(f: &Polynomial) -> Result<()> {
    if f.is_monic() {
        Ok(())
    } else {
        Err(Error::NotMonic)
    }
}

/// Rabin's test: `f` of degree n is irreducible iff `T^{q^n} = T mod f` and
/// `gcd(T^{q^{n/l}} - T, f) = 1` for every prime `l | n`.
pub fn is_irreducible(f: &Polynomial) -> Result<bool> {
    check_monic(f)?;
    if f.is_constant() {
        return Err(Error::InvalidInput("irreducibility of a constant".into()));
    }
    Ok(irreducible_monic(f.ctx(), f.coeffs()))
}

pub(crate) fn irreducible_monic(ctx: &FieldContext, f: &[Fq]) -> bool {
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    if f[0].is_zero() {
        return false;
    }
    let frob = Frobenius::new(ctx, f);
    let t = t_mod(ctx, f);
    // powers[i] = T^{q^i} mod f
    let mut powers = Vec::with_capacity(n + 1);
    powers.push(t.clone());
    for i in 0..n {
        let next = frob.apply(ctx, &powers[i]);
        powers.push(next);
    }
    if powers[n] != t {
        return false;
    }
    prime_factors(n as u64).into_iter().all(|l| {
        let h = dense::sub(ctx, &powers[n / l as usize], &t);
        dense::gcd(ctx, &h, f).len() == 1
    })
}

fn t_mod(ctx: &FieldContext, m: &[Fq]) -> Vec<Fq> {
    let mut t = vec![Fq::ZERO, Fq::ONE];
    dense::rem_monic(ctx, &mut t, m);
    t
}

/// The q-power map on `GF(q)[T]/(m)` as a matrix: `rows[i] = T^{iq} mod m`.
/// Since `c^q = c` on coefficients, `h^q = h(T^q)`.
struct Frobenius {
    rows: Vec<Vec<Fq>>,
    deg: usize,
}

impl Frobenius {
    fn new(ctx: &FieldContext, m: &[Fq]) -> Self {
        let deg = m.len() - 1;
        let tq = dense::powmod(ctx, &[Fq::ZERO, Fq::ONE], ctx.q() as u64, m);
        let mut rows = Vec::with_capacity(deg);
        let mut cur = vec![Fq::ONE];
        for _ in 0..deg {
            let next = dense::mulmod(ctx, &cur, &tq, m);
            rows.push(cur);
            cur = next;
        }
        Self { rows, deg }
    }

    fn apply(&self, ctx: &FieldContext, h: &[Fq]) -> Vec<Fq> {
        let mut out = vec![Fq::ZERO; self.deg];
        for (&c, row) in h.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(row) {
                *o = ctx.add(*o, ctx.mul(c, r));
            }
        }
        dense::trim(&mut out);
        out
    }
}

pub fn factor(f: &Polynomial, seed: u64) -> Result<Factorization> {
    factor_with(
        f,
        &FactorConfig {
            seed,
            ..FactorConfig::default()
        },
    )
}

pub fn factor_with(f: &Polynomial, config: &FactorConfig) -> Result<Factorization> {
    check_monic(f)?;
    let ctx = f.ctx();
    let factors = factor_monic(ctx, f.coeffs(), config)
        .into_iter()
        .map(|(p, e)| (Polynomial::new(ctx, p), e))
        .collect();
    Ok(Factorization {
        input: f.clone(),
        factors,
    })
}

/// Factorization on raw coefficients, sorted canonically.
pub(crate) fn factor_monic(
    ctx: &FieldContext,
    f: &[Fq],
    config: &FactorConfig,
) -> Vec<(Vec<Fq>, u32)> {
    let n = f.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let small = (ctx.q() as u128)
        .checked_pow(n as u32)
        .is_some_and(|s| s < config.trial_threshold as u128);
    let mut out = if small {
        trial_division(ctx, f)
    } else {
        distinct_degree(ctx, f, config.seed)
    };
    out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    out
}

/// Divides `rem` by the monic `p` as often as possible.
fn strip(ctx: &FieldContext, rem: &mut Vec<Fq>, p: &[Fq]) -> u32 {
    let mut e = 0;
    loop {
        let (quot, r) = dense::divmod(ctx, rem, p);
        if !r.is_empty() {
            return e;
        }
        *rem = quot;
        e += 1;
    }
}

fn trial_division(ctx: &FieldContext, f: &[Fq]) -> Vec<(Vec<Fq>, u32)> {
    let mut rem = f.to_vec();
    let mut out = Vec::new();
    let mut d = 1;
    while 2 * d < rem.len() {
        for p in irreducibles_of_degree(ctx, d).iter() {
            if 2 * d >= rem.len() {
                break;
            }
            let e = strip(ctx, &mut rem, p);
            if e > 0 {
                out.push((p.clone(), e));
            }
        }
        d += 1;
    }
    if rem.len() > 1 {
        out.push((rem, 1));
    }
    out
}

type IrreducibleCache = Mutex<HashMap<(u32, u32, usize), Arc<Vec<Vec<Fq>>>>>;

static IRREDUCIBLES: LazyLock<IrreducibleCache> = LazyLock::new(|| Mutex::new(HashMap::new()));

/// All monic irreducibles of degree `d`, in enumeration order. Only used for
/// small `q^d`, and memoized per field.
fn irreducibles_of_degree(ctx: &FieldContext, d: usize) -> Arc<Vec<Vec<Fq>>> {
    let key = (ctx.p(), ctx.k(), d);
    if let Some(list) = IRREDUCIBLES.lock().unwrap().get(&key) {
        return list.clone();
    }
    let count = (ctx.q() as u64).pow(d as u32);
    let list: Vec<Vec<Fq>> = (0..count)
        .map(|idx| monic_from_index(ctx, d, idx))
        .filter(|p| irreducible_monic(ctx, p))
        .collect();
    let list = Arc::new(list);
    IRREDUCIBLES.lock().unwrap().insert(key, list.clone());
    list
}

fn distinct_degree(ctx: &FieldContext, f: &[Fq], seed: u64) -> Vec<(Vec<Fq>, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = ctx.q() as u64;
    let mut rem = f.to_vec();
    let mut out = Vec::new();
    // Primes of degree < d have been removed completely from rem.
    let mut h = t_mod(ctx, &rem);
    let mut d = 1;
    while 2 * d < rem.len() {
        h = dense::powmod(ctx, &h, q, &rem);
        let diff = dense::sub(ctx, &h, &[Fq::ZERO, Fq::ONE]);
        let g = dense::gcd(ctx, &diff, &rem);
        if g.len() > 1 {
            for p in equal_degree(ctx, &g, d, &mut rng) {
                let e = strip(ctx, &mut rem, &p);
                debug_assert!(e > 0);
                out.push((p, e));
            }
            dense::rem_monic(ctx, &mut h, &rem);
        }
        d += 1;
    }
    if rem.len() > 1 {
        out.push((rem, 1));
    }
    out
}

/// Cantor-Zassenhaus splitting of a squarefree product of degree-`d` primes.
fn equal_degree(ctx: &FieldContext, g: &[Fq], d: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Fq>> {
    let n = g.len() - 1;
    if n == d {
        return vec![g.to_vec()];
    }
    let q = ctx.q();
    let half = (q as u64 - 1) / 2;
    loop {
        let mut a: Vec<Fq> = (0..n).map(|_| Fq(rng.gen_range(0..q))).collect();
        dense::trim(&mut a);
        if a.len() < 2 {
            continue;
        }
        // a^{(q^d - 1)/2} = (a * a^q * ... * a^{q^{d-1}})^{(q-1)/2}
        let mut conj = a.clone();
        let mut prod = a;
        for _ in 1..d {
            conj = dense::powmod(ctx, &conj, q as u64, g);
            prod = dense::mulmod(ctx, &prod, &conj, g);
        }
        let b = dense::powmod(ctx, &prod, half, g);
        let b1 = dense::sub(ctx, &b, &[Fq::ONE]);
        let u = dense::gcd(ctx, &b1, g);
        if u.len() > 1 && u.len() < g.len() {
            let (v, _) = dense::divmod(ctx, g, &u);
            let mut parts = equal_degree(ctx, &u, d, rng);
            parts.extend(equal_degree(ctx, &v, d, rng));
            return parts;
        }
    }
}

/// Monic polynomial of degree `n` whose lower coefficients are the base-q
/// digits of `idx` (constant term least significant).
pub fn monic_from_index(ctx: &FieldContext, n: usize, mut idx: u64) -> Vec<Fq> {
    let q = ctx.q() as u64;
    let mut coeffs = Vec::with_capacity(n + 1);
    for _ in 0..n {
        coeffs.push(Fq((idx % q) as u32));
        idx /= q;
    }
    coeffs.push(Fq::ONE);
    coeffs
}

pub(crate) fn checked_count(
    q: u32,
    exponent: usize,
    what: &'static str,
    limit: u64,
) -> Result<u64> {
    let size = (q as u128)
        .checked_pow(exponent as u32)
        .unwrap_or(u128::MAX);
    if size > limit as u128 {
        Err(Error::guard(what, size, limit as u128))
    } else {
        Ok(size as u64)
    }
}

/// All `q^n` monic polynomials of degree `n`, in index order.
pub fn enumerate_monic(
    ctx: &FieldContext,
    n: usize,
) -> Result<impl Iterator<Item = Polynomial> + '_> {
    enumerate_monic_with_limit(ctx, n, DEFAULT_MAX_ENUM)
}

pub fn enumerate_monic_with_limit(
    ctx: &FieldContext,
    n: usize,
    max_enum: u64,
) -> Result<impl Iterator<Item = Polynomial> + '_> {
    let count = checked_count(ctx.q(), n, "monic enumeration", max_enum)?;
    Ok((0..count).map(move |idx| Polynomial::new(ctx, monic_from_index(ctx, n, idx))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, k: u32) -> FieldContext {
        FieldContext::new(p, k).unwrap()
    }

    fn poly(ctx: &FieldContext, ints: &[i64]) -> Polynomial {
        Polynomial::from_ints(ctx, ints)
    }

    fn pairs(fac: &Factorization) -> Vec<(Polynomial, u32)> {
        fac.factors().to_vec()
    }

    #[test]
    fn irreducibility_small_cases() {
        let f3 = gf(3, 1);
        assert!(is_irreducible(&poly(&f3, &[1, 0, 1])).unwrap());
        assert!(!is_irreducible(&poly(&f3, &[-1, 0, 1])).unwrap());
        assert!(!is_irreducible(&poly(&f3, &[1, 0, 0, 0, 1])).unwrap());
        assert!(is_irreducible(&poly(&f3, &[2, 1])).unwrap());
        assert_eq!(is_irreducible(&poly(&f3, &[1, 2])), Err(Error::NotMonic));
        assert!(is_irreducible(&poly(&f3, &[1])).is_err());
    }

    #[test]
    fn quartic_splits_as_product_of_quadratics() {
        // found by scanning products of monic quadratics
        let f3 = gf(3, 1);
        let a = poly(&f3, &[2, 1, 1]);
        let b = poly(&f3, &[2, 2, 1]);
        assert_eq!(a.mul(&b).unwrap(), poly(&f3, &[1, 0, 0, 0, 1]));
        let fac = factor(&poly(&f3, &[1, 0, 0, 0, 1]), 1).unwrap();
        assert_eq!(pairs(&fac), vec![(a, 1), (b, 1)]);
    }

    #[test]
    fn factor_examples() {
        let f3 = gf(3, 1);
        let fac = factor(&poly(&f3, &[-1, 0, 1]), 0).unwrap();
        assert_eq!(
            pairs(&fac),
            vec![(poly(&f3, &[1, 1]), 1), (poly(&f3, &[2, 1]), 1)]
        );
        let fac = factor(&poly(&f3, &[0, 1, 2, 1]), 0).unwrap();
        assert_eq!(
            pairs(&fac),
            vec![(poly(&f3, &[0, 1]), 1), (poly(&f3, &[1, 1]), 2)]
        );
        assert!(factor(&poly(&f3, &[1]), 0).unwrap().is_empty());
        assert_eq!(factor(&poly(&f3, &[1, 2]), 0), Err(Error::NotMonic));
    }

    #[test]
    fn both_strategies_agree() {
        let trial = FactorConfig {
            seed: 7,
            trial_threshold: u64::MAX,
        };
        let cz = FactorConfig {
            seed: 7,
            trial_threshold: 0,
        };
        for ctx in [gf(3, 1), gf(5, 1), gf(3, 2)] {
            let max_n = if ctx.q() == 9 { 3 } else { 5 };
            for n in 1..=max_n {
                for f in enumerate_monic(&ctx, n).unwrap() {
                    let a = factor_with(&f, &trial).unwrap();
                    let b = factor_with(&f, &cz).unwrap();
                    assert_eq!(a, b, "{f:?}");
                }
            }
        }
    }

    #[test]
    fn high_multiplicity_and_p_th_powers() {
        let f3 = gf(3, 1);
        let cz = FactorConfig {
            seed: 3,
            trial_threshold: 0,
        };
        // (T^2 + 1)^3 (T + 2)^4 T^3, which has several inseparable pieces
        let f = poly(&f3, &[1, 0, 1])
            .pow(3)
            .mul(&poly(&f3, &[2, 1]).pow(4))
            .unwrap()
            .mul(&poly(&f3, &[0, 1]).pow(3))
            .unwrap();
        let fac = factor_with(&f, &cz).unwrap();
        assert_eq!(
            pairs(&fac),
            vec![
                (poly(&f3, &[0, 1]), 3),
                (poly(&f3, &[2, 1]), 4),
                (poly(&f3, &[1, 0, 1]), 3),
            ]
        );
        assert_eq!(fac.product(), f);
    }

    #[test]
    fn seeds_do_not_change_the_result() {
        let f9 = gf(3, 2);
        let big = poly(&f9, &[1, 0, 0, 0, 1])
            .mul(&poly(&f9, &[0, 1, 1, 1]))
            .unwrap()
            .mul(&poly(&f9, &[1, 1, 0, 0, 0, 1]))
            .unwrap();
        let base = factor(&big, 0).unwrap();
        for seed in 1..20 {
            assert_eq!(factor(&big, seed).unwrap(), base);
        }
        assert_eq!(base.product(), big);
    }

    #[test]
    fn enumeration_counts() {
        let f3 = gf(3, 1);
        let lin: Vec<Polynomial> = enumerate_monic(&f3, 1).unwrap().collect();
        assert_eq!(
            lin,
            vec![poly(&f3, &[0, 1]), poly(&f3, &[1, 1]), poly(&f3, &[2, 1])]
        );
        assert_eq!(enumerate_monic(&f3, 4).unwrap().count(), 81);
        assert_eq!(enumerate_monic(&gf(3, 2), 2).unwrap().count(), 81);
        assert!(enumerate_monic_with_limit(&f3, 5, 100).is_err());
        let mut all: Vec<Polynomial> = enumerate_monic(&f3, 4).unwrap().collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 81);
    }

    fn mobius(n: u64) -> i64 {
        let mut n = n;
        let mut sign = 1;
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                n /= d;
                if n.is_multiple_of(d) {
                    return 0;
                }
                sign = -sign;
            }
            d += 1;
        }
        if n > 1 {
            -sign
        } else {
            sign
        }
    }

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        for ctx in [gf(3, 1), gf(5, 1), gf(3, 2)] {
            let q = ctx.q() as i64;
            for n in 1..=4u64 {
                let expected: i64 = (1..=n)
                    .filter(|d| n % d == 0)
                    .map(|d| mobius(d) * q.pow((n / d) as u32))
                    .sum::<i64>()
                    / n as i64;
                let found = enumerate_monic(&ctx, n as usize)
                    .unwrap()
                    .filter(|f| is_irreducible(f).unwrap())
                    .count() as i64;
                assert_eq!(found, expected, "q = {q}, n = {n}");
            }
        }
    }

    #[test]
    fn factorizations_reconstruct_their_input() {
        for (ctx, max_n) in [(gf(3, 1), 5), (gf(3, 2), 3)] {
            for n in 1..=max_n {
                for f in enumerate_monic(&ctx, n).unwrap() {
                    let fac = factor(&f, 11).unwrap();
                    assert_eq!(fac.product(), f);
                    let mut prev: Option<&Polynomial> = None;
                    for (p, e) in fac.factors() {
                        assert!(*e >= 1 && p.is_monic());
                        assert!(is_irreducible(p).unwrap(), "{p:?} in {f:?}");
                        if let Some(prev) = prev {
                            assert!(prev < p);
                        }
                        prev = Some(p);
                    }
                }
            }
        }
    }
}
