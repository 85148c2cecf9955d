//! The affine group of `F_{p^2}` and the small-epsilon family
//! `T^{p^2} + a_1 T + a_0`, whose Galois group is `C_2 wr Aff(F_{p^2})`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ff::{is_prime, prime_factors, FieldContext, FieldElement, Fq};
use crate::hyperoct::{self, Partition, Sign, SignedPermutation};
use crate::intervals::{
    scan_exhaustive_against, scan_monte_carlo_against, AffineFields, DensityReport, Interval,
    ScanConfig, ScanMode,
};
use crate::poly::Polynomial;

/// Largest `p` accepted by the census and constant routines; keeps `p^2`
/// inside the field-size guard.
pub const MAX_AFFINE_P: u64 = 1 << 10;

/// `x -> a x + b` on `F_{p^2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    a: FieldElement,
    b: FieldElement,
}

impl AffineMap {
    pub fn new(a: FieldElement, b: FieldElement) -> Result<Self> {
        a.ctx().check_same(b.ctx())?;
        if a.ctx().k() != 2 {
            return Err(Error::InvalidInput(format!(
                "affine maps live on F_(p^2), got {:?}",
                a.ctx()
            )));
        }
        if a.is_zero() {
            return Err(Error::InvalidInput("affine map needs a != 0".into()));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> &FieldElement {
        &self.a
    }

    pub fn b(&self) -> &FieldElement {
        &self.b
    }

    pub fn ctx(&self) -> &FieldContext {
        self.a.ctx()
    }

    pub fn apply(&self, x: Fq) -> Fq {
        let ctx = self.ctx();
        ctx.add(ctx.mul(self.a.value(), x), self.b.value())
    }

    /// The map as a permutation of element codes `0..p^2`.
    pub fn permutation(&self) -> Vec<usize> {
        self.ctx()
            .elements()
            .map(|x| self.apply(x).code() as usize)
            .collect()
    }

    /// Cycle type found by walking the orbits of the permutation.
    pub fn orbit_cycle_type(&self) -> Partition {
        let perm = self.permutation();
        let mut seen = vec![false; perm.len()];
        let mut lengths = Vec::new();
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = perm[x];
                len += 1;
            }
            lengths.push(len);
        }
        Partition::from_parts(&lengths)
    }
}

/// All `p^2 (p^2 - 1)` maps, `a` outer and `b` inner, both by element code.
pub fn affine_group(ctx: &FieldContext) -> Result<Vec<AffineMap>> {
    let mut out = Vec::new();
    for a in ctx.elements().filter(|a| !a.is_zero()) {
        for b in ctx.elements() {
            out.push(AffineMap::new(ctx.wrap(a), ctx.wrap(b))?);
        }
    }
    Ok(out)
}

/// Cycle type from the order of `a` alone.
pub fn affine_cycle_type(m: &AffineMap) -> Partition {
    let ctx = m.ctx();
    let q = ctx.q() as usize;
    let p = ctx.p() as usize;
    if m.a.value() == Fq::ONE {
        if m.b.is_zero() {
            Partition::from_parts(&vec![1; q])
        } else {
            Partition::from_parts(&vec![p; q / p])
        }
    } else {
        let d = ctx.order(m.a.value()) as usize;
        let mut parts = vec![d; (q - 1) / d];
        parts.push(1);
        Partition::from_parts(&parts)
    }
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
    }
    if p > MAX_AFFINE_P {
        return Err(Error::guard(
            "affine prime",
            p as u128,
            MAX_AFFINE_P as u128,
        ));
    }
    Ok(())
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn totient(n: u64) -> u64 {
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, r| acc / r * (r - 1))
}

fn pow2(e: u64) -> BigUint {
    BigUint::one() << e
}

/// `N_lambda`: the number of elements of `Aff(F_{p^2})` of each cycle type.
pub fn n_lambda_census(p: u64) -> Result<BTreeMap<Partition, u64>> {
    check_odd_prime(p)?;
    let n = (p * p) as usize;
    let mut out = BTreeMap::new();
    out.insert(Partition::from_parts(&vec![1; n]), 1);
    out.insert(
        Partition::from_parts(&vec![p as usize; p as usize]),
        p * p - 1,
    );
    for d in divisors(p * p - 1).into_iter().filter(|&d| d != 1) {
        let mut parts = vec![d as usize; (p * p - 1) as usize / d as usize];
        parts.push(1);
        out.insert(Partition::from_parts(&parts), p * p * totient(d));
    }
    Ok(out)
}

/// The same census, tallied by orbit computation over every map.
pub fn n_lambda_census_enumerated(p: u64) -> Result<BTreeMap<Partition, u64>> {
    check_odd_prime(p)?;
    let ctx = FieldContext::new(p, 2)?;
    let mut out = BTreeMap::new();
    for m in affine_group(&ctx)? {
        *out.entry(m.orbit_cycle_type()).or_default() += 1;
    }
    Ok(out)
}

/// `c_p` from the closed formula.
pub fn c_p_formula(p: u64) -> Result<BigRational> {
    check_odd_prime(p)?;
    let n = p * p;
    let big = |x: BigUint| BigRational::from_integer(BigInt::from(x));
    let mut sum = BigUint::zero();
    for d in divisors(n - 1).into_iter().filter(|&d| d != 1) {
        sum += pow2((n - 1) * (d - 1) / d) * totient(d);
    }
    let first = big(BigUint::one()) / big(pow2(n) * n * (n - 1));
    let second = big(BigUint::one()) / big(pow2(p) * n);
    let third = big(sum) / big(pow2(n) * (n - 1));
    Ok(first + second + third)
}

/// `#(X_{p^2} cap C_2 wr Aff(F_{p^2}))` from the closed formula.
pub fn xn_cap_count(p: u64) -> Result<BigUint> {
    check_odd_prime(p)?;
    let n = p * p;
    let mut sum = BigUint::zero();
    for d in divisors(n - 1).into_iter().filter(|&d| d != 1) {
        sum += pow2((d - 1) * (n - 1) / d) * totient(d);
    }
    Ok(BigUint::one() + pow2(p * (p - 1)) * (n - 1) + sum * n)
}

/// `sum N_lambda prod_j 2^(lambda_j (j - 1))`: for a fixed permutation, each
/// `j`-cycle admits `2^(j-1)` sign assignments with product `+1`.
pub fn xn_cap_count_from_census(p: u64) -> Result<BigUint> {
    let mut total = BigUint::zero();
    for (lambda, count) in n_lambda_census(p)? {
        let exponent: u64 = lambda
            .multiplicities()
            .iter()
            .enumerate()
            .map(|(i, &m)| m as u64 * i as u64)
            .sum();
        total += pow2(exponent) * count;
    }
    Ok(total)
}

/// Brute force over every `(xi, sigma)` with `xi in {+-1}^(p^2)`.
/// Returns `(hits, group order)`.
pub fn xn_cap_count_enumerated(p: u64, max_enum: u64) -> Result<(u64, u64)> {
    check_odd_prime(p)?;
    let n = p * p;
    let order = (1u128 << n.min(127)) * (n as u128) * (n as u128 - 1);
    if n >= 64 || order > max_enum as u128 {
        return Err(Error::guard(
            "signed affine enumeration",
            order,
            max_enum as u128,
        ));
    }
    let ctx = FieldContext::new(p, 2)?;
    let mut hits = 0u64;
    for m in affine_group(&ctx)? {
        let perm = m.permutation();
        for mask in 0u64..1 << n {
            let signs = (0..n)
                .map(|i| {
                    if mask >> i & 1 == 1 {
                        Sign::Minus
                    } else {
                        Sign::Plus
                    }
                })
                .collect();
            if SignedPermutation::new(perm.clone(), signs)?.in_xn() {
                hits += 1;
            }
        }
    }
    Ok((hits, order as u64))
}

/// `binom(2p^2, p^2) / 4^(p^2)`, the density the family would have if its
/// Galois group were the full hyperoctahedral group.
pub fn binomial_reference(p: u64) -> Result<BigRational> {
    check_odd_prime(p)?;
    Ok(hyperoct::xn_density_closed_form((p * p) as usize))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantComparison {
    pub p: u64,
    pub c_p: BigRational,
    pub binom_ref: BigRational,
}

impl ConstantComparison {
    pub fn c_p_exceeds(&self) -> bool {
        self.c_p > self.binom_ref
    }
}

pub fn compare_constants(p: u64) -> Result<ConstantComparison> {
    Ok(ConstantComparison {
        p,
        c_p: c_p_formula(p)?,
        binom_ref: binomial_reference(p)?,
    })
}

/// Mean of `b_q` over `T^{p^2} + a_1 T + a_0`, `q = p^(2 nu)`, against `c_p`.
pub fn small_epsilon_experiment(
    p: u64,
    nu: u32,
    mode: &ScanMode,
    cfg: &ScanConfig,
) -> Result<DensityReport> {
    check_odd_prime(p)?;
    if nu == 0 {
        return Err(Error::InvalidInput("nu must be at least 1".into()));
    }
    let ctx = FieldContext::new(p, 2 * nu)?;
    let f0 = Polynomial::monomial(&ctx, Fq::ONE, (p * p) as usize);
    let iv = Interval::with_m(f0, 1)?;
    let c_p = c_p_formula(p)?;
    let mut report = match *mode {
        ScanMode::Exhaustive => scan_exhaustive_against(&iv, cfg, c_p.clone())?,
        ScanMode::MonteCarlo { samples, seed } => {
            scan_monte_carlo_against(&iv, samples, seed, cfg, c_p.clone())?
        }
    };
    report.affine = Some(AffineFields {
        nu,
        c_p,
        binom_ref: binomial_reference(p)?,
    });
    Ok(report)
}

/// Mean of `b_q` over `T^(2k+1) + a`; always `(q + 1) / (2q)`.
pub fn first_interval_experiment(
    ctx: &FieldContext,
    k: u32,
    cfg: &ScanConfig,
) -> Result<DensityReport> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let f0 = Polynomial::monomial(ctx, Fq::ONE, 2 * k as usize + 1);
    let iv = Interval::with_m(f0, 0)?;
    let q = ctx.q() as i64;
    scan_exhaustive_against(&iv, cfg, BigRational::new((q + 1).into(), (2 * q).into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cycle_type_examples() {
        let ctx = FieldContext::new(3, 2).unwrap();
        let map = |a: i64, b: i64| {
            AffineMap::new(ctx.wrap(ctx.from_int(a)), ctx.wrap(ctx.from_int(b))).unwrap()
        };
        assert_eq!(
            affine_cycle_type(&map(1, 0)),
            Partition::from_parts(&[1; 9])
        );
        assert_eq!(
            affine_cycle_type(&map(1, 1)),
            Partition::from_parts(&[3, 3, 3])
        );
        assert_eq!(
            affine_cycle_type(&map(-1, 0)),
            Partition::from_parts(&[2, 2, 2, 2, 1])
        );
        assert!(AffineMap::new(ctx.wrap(Fq::ZERO), ctx.wrap(Fq::ONE)).is_err());
    }

    #[test]
    fn cycle_types_match_orbits() {
        for p in [3, 5] {
            let ctx = FieldContext::new(p, 2).unwrap();
            let group = affine_group(&ctx).unwrap();
            assert_eq!(group.len() as u64, p * p * (p * p - 1));
            for m in &group {
                assert_eq!(affine_cycle_type(m), m.orbit_cycle_type(), "{m:?}");
            }
        }
    }

    #[test]
    fn census() {
        let census = n_lambda_census(3).unwrap();
        let values: Vec<u64> = census.values().copied().collect();
        assert_eq!(values.iter().sum::<u64>(), 72);
        let mut sorted = values.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 8, 9, 18, 36]);
        assert_eq!(census, n_lambda_census_enumerated(3).unwrap());
        assert_eq!(census[&Partition::from_parts(&[8, 1])], 36);
        let five = n_lambda_census(5).unwrap();
        assert_eq!(five.values().sum::<u64>(), 600);
        assert_eq!(five, n_lambda_census_enumerated(5).unwrap());
    }

    #[test]
    fn constants_at_three() {
        assert_eq!(c_p_formula(3).unwrap(), r(713, 4096));
        assert_eq!(xn_cap_count(3).unwrap(), BigUint::from(6417u32));
        assert_eq!(xn_cap_count_from_census(3).unwrap(), BigUint::from(6417u32));
        assert_eq!(xn_cap_count_enumerated(3, 100_000).unwrap(), (6417, 36864));
        assert!(xn_cap_count_enumerated(5, 100_000).unwrap_err().is_guard());
    }

    #[test]
    fn constants_agree_across_primes() {
        for p in [3u64, 5, 7, 11, 13] {
            let n = p * p;
            let count = xn_cap_count(p).unwrap();
            assert_eq!(count, xn_cap_count_from_census(p).unwrap());
            let den = pow2(n) * n * (n - 1);
            let c = c_p_formula(p).unwrap();
            assert_eq!(
                c,
                BigRational::new(BigInt::from(count), BigInt::from(den.clone()))
            );
            assert!((BigInt::from(den) % c.denom()).is_zero());
        }
    }

    #[test]
    fn binomial_comparison() {
        let three = compare_constants(3).unwrap();
        assert_eq!(three.binom_ref, r(12155, 65536));
        assert!(!three.c_p_exceeds());
        // the ordering already flips at p = 5
        for p in [5, 7, 11, 13] {
            assert!(compare_constants(p).unwrap().c_p_exceeds(), "p = {p}");
        }
    }

    #[test]
    fn rejects_bad_primes() {
        assert!(c_p_formula(2).is_err());
        assert!(c_p_formula(9).is_err());
        assert!(n_lambda_census(1).is_err());
    }

    #[test]
    fn first_interval_is_exact() {
        let cfg = ScanConfig::default();
        for (p, k, kk, expect) in [(3, 1, 1, r(2, 3)), (3, 2, 1, r(5, 9)), (3, 4, 2, r(41, 81))] {
            let ctx = FieldContext::new(p, k).unwrap();
            let report = first_interval_experiment(&ctx, kk, &cfg).unwrap();
            assert_eq!(report.mean, expect);
            assert!(report.deviation.is_zero());
        }
    }

    #[test]
    fn small_epsilon_at_nu_one() {
        let report =
            small_epsilon_experiment(3, 1, &ScanMode::Exhaustive, &ScanConfig::default()).unwrap();
        assert_eq!(report.total, 81);
        assert_eq!(report.n, 9);
        assert_eq!(report.m, 1);
        assert_eq!(report.reference, r(713, 4096));
        let extra = report.affine.unwrap();
        assert_eq!(extra.nu, 1);
        assert_eq!(extra.binom_ref, r(12155, 65536));
    }
}
