//! Short intervals `{f0 + h : deg h <= m}` around a monic `f0` of degree `n`,
//! and density scans of `b_q` over them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::factor::{factor_monic, FactorConfig};
use crate::ff::{FieldContext, Fq};
use crate::hyperoct::{self, Sign, SignedCycleType};
use crate::parallel::map_chunks;
use crate::poly::Polynomial;
use crate::twosquares::{bq_monic, inert_monic};
use crate::DEFAULT_MAX_ENUM;

#[derive(Clone, Copy, Debug)]
pub struct ScanConfig {
    pub workers: usize,
    pub max_enum: u64,
    pub factor: FactorConfig,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            workers: 1,
            max_enum: DEFAULT_MAX_ENUM,
            factor: FactorConfig::default(),
        }
    }
}

impl ScanConfig {
    pub fn with_workers(workers: usize) -> Self {
        Self {
            workers,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    f0: Polynomial,
    m: usize,
    epsilon: Option<BigRational>,
}

impl Interval {
    /// Perturbations of degree at most `m`, which must be below `deg f0`.
    pub fn with_m(f0: Polynomial, m: usize) -> Result<Self> {
        let n = Self::check_center(&f0)?;
        if m >= n {
            return Err(Error::InvalidInput(format!(
                "perturbation degree {m} must be below deg f0 = {n}"
            )));
        }
        Ok(Self {
            f0,
            m,
            epsilon: None,
        })
    }

    /// `m = floor(epsilon * n)` for `0 < epsilon < 1`.
    pub fn with_epsilon(f0: Polynomial, epsilon: BigRational) -> Result<Self> {
        let n = Self::check_center(&f0)?;
        if !epsilon.is_positive() || epsilon >= BigRational::from_integer(1.into()) {
            return Err(Error::InvalidInput(format!(
                "epsilon {epsilon} not in (0, 1)"
            )));
        }
        let m = (&epsilon * BigRational::from_integer(BigInt::from(n)))
            .floor()
            .to_integer();
        let m: usize = m.try_into().expect("0 <= m < n");
        Ok(Self {
            f0,
            m,
            epsilon: Some(epsilon),
        })
    }

    fn check_center(f0: &Polynomial) -> Result<usize> {
        if !f0.is_monic() {
            return Err(Error::NotMonic);
        }
        match f0.degree() {
            Some(n) if n >= 1 => Ok(n),
            _ => Err(Error::InvalidInput(
                "interval center must have degree >= 1".into(),
            )),
        }
    }

    pub fn f0(&self) -> &Polynomial {
        &self.f0
    }

    pub fn ctx(&self) -> &FieldContext {
        self.f0.ctx()
    }

    pub fn n(&self) -> usize {
        self.f0.coeffs().len() - 1
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn epsilon(&self) -> Option<&BigRational> {
        self.epsilon.as_ref()
    }

    /// `q^(m+1)`.
    pub fn size(&self) -> u128 {
        (self.ctx().q() as u128)
            .checked_pow(self.m as u32 + 1)
            .unwrap_or(u128::MAX)
    }

    fn checked_size(&self, limit: u64) -> Result<u64> {
        let size = self.size();
        if size > limit as u128 {
            Err(Error::guard("interval enumeration", size, limit as u128))
        } else {
            Ok(size as u64)
        }
    }

    /// `f0 + h`, where `h_0, ..., h_m` are the base-q digits of `idx`.
    pub fn member_coeffs(&self, mut idx: u64) -> Vec<Fq> {
        let ctx = self.ctx();
        let q = ctx.q() as u64;
        let mut coeffs = self.f0.coeffs().to_vec();
        for c in coeffs.iter_mut().take(self.m + 1) {
            *c = ctx.add(*c, Fq((idx % q) as u32));
            idx /= q;
        }
        coeffs
    }

    fn perturbed(&self, h: &[Fq]) -> Vec<Fq> {
        let ctx = self.ctx();
        let mut coeffs = self.f0.coeffs().to_vec();
        for (c, &d) in coeffs.iter_mut().zip(h) {
            *c = ctx.add(*c, d);
        }
        coeffs
    }

    pub fn member(&self, idx: u64) -> Polynomial {
        Polynomial::new(self.ctx(), self.member_coeffs(idx))
    }

    pub fn members(&self, max_enum: u64) -> Result<impl Iterator<Item = Polynomial> + '_> {
        let size = self.checked_size(max_enum)?;
        Ok((0..size).map(move |idx| self.member(idx)))
    }
}

/// Parses `"a/b"`, an integer, or a plain decimal such as `"0.5"` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
        let den = BigInt::from(10).pow(frac.len() as u32);
        return Ok(BigRational::new(digits, den));
    }
    s.parse::<BigRational>().map_err(|_| bad())
}

pub fn interval_members(iv: &Interval) -> Result<impl Iterator<Item = Polynomial> + '_> {
    iv.members(DEFAULT_MAX_ENUM)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScanMode {
    Exhaustive,
    MonteCarlo { samples: u64, seed: u64 },
}

/// Fields carried by reports of the `T^{p^2} + a_1 T + a_0` experiment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFields {
    pub nu: u32,
    pub c_p: BigRational,
    pub binom_ref: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityReport {
    pub p: u32,
    pub k: u32,
    pub q: u32,
    pub n: usize,
    pub m: usize,
    pub epsilon: Option<BigRational>,
    /// Center in the coefficient text format.
    pub f0: String,
    pub total: u64,
    pub hits: u64,
    pub skipped: u64,
    pub mean: BigRational,
    pub reference: BigRational,
    pub deviation: BigRational,
    pub mode: ScanMode,
    pub affine: Option<AffineFields>,
}

impl DensityReport {
    pub(crate) fn new(
        iv: &Interval,
        total: u64,
        hits: u64,
        reference: BigRational,
        mode: ScanMode,
    ) -> Self {
        let ctx = iv.ctx();
        let mean = BigRational::new(hits.into(), total.into());
        let deviation = (&mean - &reference).abs();
        Self {
            p: ctx.p(),
            k: ctx.k(),
            q: ctx.q(),
            n: iv.n(),
            m: iv.m(),
            epsilon: iv.epsilon().cloned(),
            f0: iv.f0().to_coeff_string(),
            total,
            hits,
            skipped: 0,
            mean,
            reference,
            deviation,
            mode,
            affine: None,
        }
    }

    pub fn misses(&self) -> u64 {
        self.total - self.hits
    }

    pub fn seed(&self) -> Option<u64> {
        match self.mode {
            ScanMode::Exhaustive => None,
            ScanMode::MonteCarlo { seed, .. } => Some(seed),
        }
    }
}

/// Exact mean of `b_q` over every member; reference `binom(2n, n) / 4^n`.
pub fn scan_exhaustive(iv: &Interval, cfg: &ScanConfig) -> Result<DensityReport> {
    let reference = hyperoct::xn_density_closed_form(iv.n());
    scan_exhaustive_against(iv, cfg, reference)
}

pub(crate) fn scan_exhaustive_against(
    iv: &Interval,
    cfg: &ScanConfig,
    reference: BigRational,
) -> Result<DensityReport> {
    let total = iv.checked_size(cfg.max_enum)?;
    let ctx = iv.ctx();
    let hits: u64 = map_chunks(total, cfg.workers, |range| {
        range
            .filter(|&i| bq_monic(ctx, &iv.member_coeffs(i), &cfg.factor))
            .count() as u64
    })
    .into_iter()
    .sum();
    Ok(DensityReport::new(
        iv,
        total,
        hits,
        reference,
        ScanMode::Exhaustive,
    ))
}

/// Uniform sampling of members with replacement. Draws are made serially from
/// one seeded stream, so the result does not depend on the worker count.
pub fn scan_monte_carlo(
    iv: &Interval,
    samples: u64,
    seed: u64,
    cfg: &ScanConfig,
) -> Result<DensityReport> {
    let reference = hyperoct::xn_density_closed_form(iv.n());
    scan_monte_carlo_against(iv, samples, seed, cfg, reference)
}

pub(crate) fn scan_monte_carlo_against(
    iv: &Interval,
    samples: u64,
    seed: u64,
    cfg: &ScanConfig,
    reference: BigRational,
) -> Result<DensityReport> {
    if samples == 0 {
        return Err(Error::InvalidInput(
            "at least one sample is required".into(),
        ));
    }
    if samples > cfg.max_enum {
        return Err(Error::guard(
            "monte carlo samples",
            samples as u128,
            cfg.max_enum as u128,
        ));
    }
    let ctx = iv.ctx();
    let q = ctx.q();
    let width = iv.m() + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<Fq> = (0..samples * width as u64)
        .map(|_| Fq(rng.gen_range(0..q)))
        .collect();
    let hits: u64 = map_chunks(samples, cfg.workers, |range| {
        range
            .filter(|&s| {
                let start = s as usize * width;
                let f = iv.perturbed(&draws[start..start + width]);
                bq_monic(ctx, &f, &cfg.factor)
            })
            .count() as u64
    })
    .into_iter()
    .sum();
    Ok(DensityReport::new(
        iv,
        samples,
        hits,
        reference,
        ScanMode::MonteCarlo { samples, seed },
    ))
}

/// Mean of `b_q` over all monic polynomials of degree `n`.
pub fn global_density(ctx: &FieldContext, n: usize, cfg: &ScanConfig) -> Result<DensityReport> {
    if n == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    let f0 = Polynomial::monomial(ctx, Fq::ONE, n);
    scan_exhaustive(&Interval::with_m(f0, n - 1)?, cfg)
}

/// Frequencies of the signed Frobenius type over the squarefree members with
/// nonzero constant term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedTypeHistogram {
    pub p: u32,
    pub k: u32,
    pub q: u32,
    pub n: usize,
    pub m: usize,
    pub f0: String,
    pub total: u64,
    pub skipped: u64,
    pub counts: BTreeMap<SignedCycleType, u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HistogramRow {
    pub signed_type: SignedCycleType,
    pub count: u64,
    pub probability: BigRational,
    pub theoretical: BigRational,
}

impl SignedTypeHistogram {
    pub fn considered(&self) -> u64 {
        self.total - self.skipped
    }

    pub fn empirical(&self) -> BTreeMap<SignedCycleType, BigRational> {
        let considered = self.considered().max(1);
        self.counts
            .iter()
            .map(|(t, &c)| (t.clone(), BigRational::new(c.into(), considered.into())))
            .collect()
    }

    pub fn skipped_fraction(&self) -> BigRational {
        BigRational::new(self.skipped.into(), self.total.max(1).into())
    }

    pub fn total_variation(&self) -> Result<BigRational> {
        hyperoct::total_variation(&self.empirical(), self.n)
    }

    /// One row per signed type of degree `n`, including unobserved ones.
    pub fn rows(&self) -> Result<Vec<HistogramRow>> {
        let empirical = self.empirical();
        Ok(hyperoct::all_signed_types(self.n)?
            .into_iter()
            .map(|t| HistogramRow {
                count: self.counts.get(&t).copied().unwrap_or(0),
                probability: empirical.get(&t).cloned().unwrap_or_else(BigRational::zero),
                theoretical: hyperoct::signed_type_probability(&t),
                signed_type: t,
            })
            .collect())
    }
}

pub fn signed_type_histogram(iv: &Interval, cfg: &ScanConfig) -> Result<SignedTypeHistogram> {
    let total = iv.checked_size(cfg.max_enum)?;
    let ctx = iv.ctx();
    let parts = map_chunks(total, cfg.workers, |range| {
        let mut counts: BTreeMap<SignedCycleType, u64> = BTreeMap::new();
        let mut skipped = 0u64;
        for i in range {
            let f = iv.member_coeffs(i);
            if f[0].is_zero() {
                skipped += 1;
                continue;
            }
            let factors = factor_monic(ctx, &f, &cfg.factor);
            if factors.iter().any(|&(_, e)| e > 1) {
                skipped += 1;
                continue;
            }
            let t = SignedCycleType::new(
                factors
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
            );
            *counts.entry(t).or_default() += 1;
        }
        (counts, skipped)
    });
    let mut counts: BTreeMap<SignedCycleType, u64> = BTreeMap::new();
    let mut skipped = 0u64;
    for (part, s) in parts {
        skipped += s;
        for (t, c) in part {
            *counts.entry(t).or_default() += c;
        }
    }
    Ok(SignedTypeHistogram {
        p: ctx.p(),
        k: ctx.k(),
        q: ctx.q(),
        n: iv.n(),
        m: iv.m(),
        f0: iv.f0().to_coeff_string(),
        total,
        skipped,
        counts,
    })
}
