//! The hyperoctahedral group `C_2 wr S_n` and the subset `X_n` of signed
//! permutations whose sign product over every cycle is `+1`.
//!
//! Densities are exact rationals. `#X_n / (2^n n!)` is available three ways:
//! by enumerating the group, as a sum over cycle types, and as the closed form
//! `binom(2n, n) / 4^n`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Largest `n` for which the group is enumerated element by element.
pub const MAX_ENUM_DEGREE: usize = 8;

/// Largest `n` for which partitions are enumerated.
pub const MAX_PARTITION_DEGREE: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// An element `(xi, pi)` of `C_2 wr S_n`, acting on `C_2 x [n]` by
/// `(xi, pi).(x, w) = (xi(pi(w)) x, pi(w))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    signs: Vec<Sign>,
}

impl SignedPermutation {
    pub fn new(perm: Vec<usize>, signs: Vec<Sign>) -> Result<Self> {
        if perm.len() != signs.len() {
            return Err(Error::InvalidInput(format!(
                "permutation of {} points with {} signs",
                perm.len(),
                signs.len()
            )));
        }
        let mut seen = vec![false; perm.len()];
        for &i in &perm {
            if i >= perm.len() || seen[i] {
                return Err(Error::InvalidInput("not a bijection".into()));
            }
            seen[i] = true;
        }
        Ok(Self { perm, signs })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            signs: vec![Sign::Plus; n],
        }
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn act(&self, x: Sign, w: usize) -> (Sign, usize) {
        let t = self.perm[w];
        (self.signs[t] * x, t)
    }

    /// The action on the `2n` points `C_2 x [n]`, point `(x, w)` encoded as
    /// `2w + [x = -1]`.
    pub fn induced_permutation(&self) -> Vec<usize> {
        let encode = |x: Sign, w: usize| 2 * w + usize::from(x == Sign::Minus);
        let mut out = vec![0; 2 * self.n()];
        for w in 0..self.n() {
            for x in [Sign::Plus, Sign::Minus] {
                let (y, t) = self.act(x, w);
                out[encode(x, w)] = encode(y, t);
            }
        }
        out
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &SignedPermutation) -> Result<SignedPermutation> {
        wreath_compose(self, other)
    }

    pub fn inverse(&self) -> SignedPermutation {
        let n = self.n();
        let mut perm = vec![0; n];
        for (w, &t) in self.perm.iter().enumerate() {
            perm[t] = w;
        }
        // g^-1 (y, t) = (xi(t) y, pi^-1 t), so the new sign at w is xi(pi w).
        let signs = (0..n).map(|w| self.signs[self.perm[w]]).collect();
        SignedPermutation { perm, signs }
    }

    /// Cycles of the underlying permutation, each starting at its smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut w = start;
            while !seen[w] {
                seen[w] = true;
                orbit.push(w);
                w = self.perm[w];
            }
            out.push(orbit);
        }
        out
    }

    pub fn signed_cycle_type(&self) -> SignedCycleType {
        SignedCycleType::new(
            self.orbits()
                .iter()
                .map(|orbit| (orbit.len(), orbit_sign(&self.signs, orbit)))
                .collect(),
        )
    }

    /// Membership in `X_n`.
    pub fn in_xn(&self) -> bool {
        self.orbits()
            .iter()
            .all(|orbit| orbit_sign(&self.signs, orbit) == Sign::Plus)
    }
}

fn orbit_sign(signs: &[Sign], orbit: &[usize]) -> Sign {
    orbit.iter().fold(Sign::Plus, |acc, &w| acc * signs[w])
}

/// The group law induced by the action on `C_2 x [n]`: `(a * b).v = a.(b.v)`.
pub fn wreath_compose(a: &SignedPermutation, b: &SignedPermutation) -> Result<SignedPermutation> {
    if a.n() != b.n() {
        return Err(Error::InvalidInput(format!(
            "composing signed permutations of degree {} and {}",
            a.n(),
            b.n()
        )));
    }
    let n = a.n();
    let perm: Vec<usize> = (0..n).map(|w| a.perm[b.perm[w]]).collect();
    let mut signs = vec![Sign::Plus; n];
    for w in 0..n {
        let mid = b.perm[w];
        signs[a.perm[mid]] = a.signs[a.perm[mid]] * b.signs[mid];
    }
    Ok(SignedPermutation { perm, signs })
}

pub fn in_xn(g: &SignedPermutation) -> bool {
    g.in_xn()
}

/// Multiset of `(cycle length, sign product over the cycle)` pairs, kept
/// sorted. This is the conjugacy invariant used throughout.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedCycleType {
    pairs: Vec<(usize, Sign)>,
}

impl SignedCycleType {
    pub fn new(mut pairs: Vec<(usize, Sign)>) -> Self {
        pairs.sort();
        Self { pairs }
    }

    pub fn pairs(&self) -> &[(usize, Sign)] {
        &self.pairs
    }

    pub fn degree(&self) -> usize {
        self.pairs.iter().map(|&(len, _)| len).sum()
    }

    pub fn all_plus(&self) -> bool {
        self.pairs.iter().all(|&(_, s)| s == Sign::Plus)
    }

    /// The unsigned cycle type.
    pub fn partition(&self) -> Partition {
        Partition::from_parts(&self.pairs.iter().map(|&(len, _)| len).collect::<Vec<_>>())
    }

    /// `lambda[j-1]` and `lambda_plus[j-1]`: cycles of length `j`, and those
    /// among them with sign `+1`.
    fn counts(&self) -> (Vec<u32>, Vec<u32>) {
        let n = self.degree();
        let mut all = vec![0u32; n];
        let mut plus = vec![0u32; n];
        for &(len, s) in &self.pairs {
            all[len - 1] += 1;
            if s == Sign::Plus {
                plus[len - 1] += 1;
            }
        }
        (all, plus)
    }
}

impl fmt::Display for SignedCycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .pairs
            .iter()
            .map(|(len, s)| format!("{len}:{s}"))
            .collect();
        f.write_str(&parts.join("+"))
    }
}

impl FromStr for SignedCycleType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad signed cycle type '{s}'"));
        let pairs = s
            .split('+')
            .map(|item| {
                let (len, sign) = item.split_once(':').ok_or_else(bad)?;
                let len: usize = len.trim().parse().map_err(|_| bad())?;
                let sign = match sign.trim() {
                    "1" => Sign::Plus,
                    "-1" => Sign::Minus,
                    _ => return Err(bad()),
                };
                if len == 0 {
                    return Err(bad());
                }
                Ok((len, sign))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SignedCycleType::new(pairs))
    }
}

/// A partition of `n` by multiplicities: `lambda[j-1]` parts of size `j`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    lambda: Vec<u32>,
}

impl Partition {
    /// Checks `sum j * lambda_j = n`; trailing entries beyond `n` must be zero.
    pub fn new(n: usize, mut lambda: Vec<u32>) -> Result<Self> {
        let total: usize = lambda
            .iter()
            .enumerate()
            .map(|(i, &m)| (i + 1) * m as usize)
            .sum();
        if total != n {
            return Err(Error::InvalidInput(format!(
                "multiplicities sum to {total}, expected {n}"
            )));
        }
        lambda.resize(n, 0);
        Ok(Self { lambda })
    }

    pub fn from_parts(parts: &[usize]) -> Self {
        let n: usize = parts.iter().sum();
        let mut lambda = vec![0u32; n];
        for &part in parts {
            lambda[part - 1] += 1;
        }
        Self { lambda }
    }

    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.lambda
    }

    /// Number of parts of size `j`.
    pub fn multiplicity(&self, j: usize) -> u32 {
        if j == 0 {
            0
        } else {
            self.lambda.get(j - 1).copied().unwrap_or(0)
        }
    }

    /// Parts in decreasing order.
    pub fn parts(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &m) in self.lambda.iter().enumerate().rev() {
            out.extend(std::iter::repeat_n(i + 1, m as usize));
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self
            .lambda
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(i, m)| format!("{}^{m}", i + 1))
            .collect();
        f.write_str(&items.join(" "))
    }
}

/// All partitions of `n`, largest parts first in reverse lexicographic order.
pub fn partitions(n: usize) -> Result<Vec<Partition>> {
    if n > MAX_PARTITION_DEGREE {
        return Err(Error::guard(
            "partition enumeration",
            n as u128,
            MAX_PARTITION_DEGREE as u128,
        ));
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(rest: usize, max: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition::from_parts(current));
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            current.push(part);
            rec(rest - part, part, current, out);
            current.pop();
        }
    }
    rec(n, n, &mut current, &mut out);
    if n == 0 {
        out = vec![Partition { lambda: Vec::new() }];
    }
    Ok(out)
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Permutations in `S_n` with cycle type `lambda`: `n! / prod(lambda_j! j^lambda_j)`.
pub fn cycle_type_count(lambda: &Partition) -> BigUint {
    let mut den = BigUint::one();
    for (i, &m) in lambda.lambda.iter().enumerate() {
        den *= factorial(m as u64) * BigUint::from(i as u64 + 1).pow(m);
    }
    factorial(lambda.n() as u64) / den
}

/// `binom(2n, n) / 4^n`.
pub fn xn_density_closed_form(n: usize) -> BigRational {
    ratio(
        binomial(2 * n as u64, n as u64),
        BigUint::from(4u32).pow(n as u32),
    )
}

/// `sum over partitions of prod_j 1 / (lambda_j! (2j)^lambda_j)`.
pub fn xn_density_partition_sum(n: usize) -> Result<BigRational> {
    let mut total = BigRational::zero();
    for lambda in partitions(n)? {
        let mut den = BigUint::one();
        for (i, &m) in lambda.lambda.iter().enumerate() {
            den *= factorial(m as u64) * BigUint::from(2 * (i as u64 + 1)).pow(m);
        }
        total += ratio(BigUint::one(), den);
    }
    Ok(total)
}

/// Rearranges `perm` into the next permutation in lexicographic order.
fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Every element of `C_2 wr S_n`: permutations in lexicographic one-line
/// order, and for each, sign vectors as binary counters (bit `w` set means
/// `xi(w) = -1`).
pub fn enumerate_group(n: usize) -> Result<impl Iterator<Item = SignedPermutation>> {
    if n > MAX_ENUM_DEGREE {
        return Err(Error::guard(
            "hyperoctahedral enumeration",
            n as u128,
            MAX_ENUM_DEGREE as u128,
        ));
    }
    let mut perms = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        perms.push(perm.clone());
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(perms.into_iter().flat_map(move |perm| {
        (0u32..(1 << n)).map(move |bits| {
            let signs = (0..n)
                .map(|w| {
                    if bits >> w & 1 == 1 {
                        Sign::Minus
                    } else {
                        Sign::Plus
                    }
                })
                .collect();
            SignedPermutation {
                perm: perm.clone(),
                signs,
            }
        })
    }))
}

/// `(#X_n, #(C_2 wr S_n))` by full enumeration.
pub fn xn_count_enumerated(n: usize) -> Result<(u64, u64)> {
    let mut hits = 0u64;
    let mut total = 0u64;
    for g in enumerate_group(n)? {
        total += 1;
        if g.in_xn() {
            hits += 1;
        }
    }
    Ok((hits, total))
}

pub fn xn_density_enumerated(n: usize) -> Result<BigRational> {
    let (hits, total) = xn_count_enumerated(n)?;
    Ok(ratio(hits.into(), total.into()))
}

/// Probability that a uniform element of `C_2 wr S_n` has signed cycle type
/// `t`: the cycle-type probability times, for each length `j`, the chance
/// `binom(lambda_j, lambda_j^+) / 2^lambda_j` of the observed sign split.
pub fn signed_type_probability(t: &SignedCycleType) -> BigRational {
    let (all, plus) = t.counts();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for (i, (&m, &mp)) in all.iter().zip(&plus).enumerate() {
        if m == 0 {
            continue;
        }
        den *=
            factorial(m as u64) * BigUint::from(i as u64 + 1).pow(m) * BigUint::from(2u32).pow(m);
        num *= binomial(m as u64, mp as u64);
    }
    ratio(num, den)
}

/// Every signed cycle type of degree `n`.
pub fn all_signed_types(n: usize) -> Result<Vec<SignedCycleType>> {
    let mut out = Vec::new();
    for lambda in partitions(n)? {
        // choose the number of plus-signed cycles for every length
        let lengths: Vec<(usize, u32)> = lambda
            .lambda
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(i, &m)| (i + 1, m))
            .collect();
        let mut choice = vec![0u32; lengths.len()];
        loop {
            let mut pairs = Vec::new();
            for (&(len, m), &plus) in lengths.iter().zip(&choice) {
                pairs.extend(std::iter::repeat_n((len, Sign::Plus), plus as usize));
                pairs.extend(std::iter::repeat_n((len, Sign::Minus), (m - plus) as usize));
            }
            out.push(SignedCycleType::new(pairs));
            // odometer over choice[i] in 0..=lambda
            let mut i = 0;
            while i < choice.len() && choice[i] == lengths[i].1 {
                choice[i] = 0;
                i += 1;
            }
            if i == choice.len() {
                break;
            }
            choice[i] += 1;
        }
    }
    out.sort();
    Ok(out)
}

/// Empirical distribution vs `signed_type_probability`: half the L1 distance.
pub fn total_variation(
    empirical: &BTreeMap<SignedCycleType, BigRational>,
    n: usize,
) -> Result<BigRational> {
    let mut sum = BigRational::zero();
    let types = all_signed_types(n)?;
    for t in &types {
        let e = empirical.get(t).cloned().unwrap_or_else(BigRational::zero);
        let diff = e - signed_type_probability(t);
        sum += if diff < BigRational::zero() {
            -diff
        } else {
            diff
        };
    }
    // mass outside the theoretical support
    for (t, e) in empirical {
        if t.degree() != n {
            sum += e.clone();
        }
    }
    Ok(sum / BigRational::from_integer(2.into()))
}
