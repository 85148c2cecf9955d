//! Machine-readable renderings of scan reports: JSON records, CSV tables and
//! the 12-significant-digit decimal form of exact rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intervals::{DensityReport, ScanMode, SignedTypeHistogram};

pub const DECIMAL_DIGITS: u32 = 12;

/// Round-half-up decimal with exactly [`DECIMAL_DIGITS`] significant digits.
pub fn decimal(r: &BigRational) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let num = r.numer().abs();
    let den = r.denom().clone();
    let ten = BigInt::from(10);
    // exponent e with 10^e <= |r| < 10^(e+1)
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    let scaled = |e: i64| -> BigRational {
        let r = BigRational::new(num.clone(), den.clone());
        if e >= 0 {
            r / BigRational::from_integer(ten.pow(e as u32))
        } else {
            r * BigRational::from_integer(ten.pow((-e) as u32))
        }
    };
    let one = BigRational::from_integer(1.into());
    let tenr = BigRational::from_integer(ten.clone());
    while scaled(e) >= tenr {
        e += 1;
    }
    while scaled(e) < one {
        e -= 1;
    }
    let shift = DECIMAL_DIGITS as i64 - 1 - e;
    let x = if shift >= 0 {
        BigRational::new(&num * ten.pow(shift as u32), den)
    } else {
        BigRational::new(num, den * ten.pow((-shift) as u32))
    };
    let (mut digits, rem) = x.numer().div_rem(x.denom());
    if rem * 2 >= *x.denom() {
        digits += 1;
    }
    if digits == ten.pow(DECIMAL_DIGITS) {
        digits /= 10;
        e += 1;
    }
    let digits = digits.to_string();
    let body = if (0..DECIMAL_DIGITS as i64).contains(&e) {
        let (int, frac) = digits.split_at(e as usize + 1);
        if frac.is_empty() {
            int.to_string()
        } else {
            format!("{int}.{frac}")
        }
    } else if (-6..0).contains(&e) {
        format!("0.{}{}", "0".repeat((-e - 1) as usize), digits)
    } else {
        format!("{}.{}e{}", &digits[..1], &digits[1..], e)
    };
    format!("{sign}{body}")
}

fn num(r: &BigRational) -> String {
    r.numer().to_string()
}

fn den(r: &BigRational) -> String {
    r.denom().to_string()
}

/// Flat form of a [`DensityReport`]; rationals are split into decimal-string
/// numerator and denominator so no precision is lost in transit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportRecord {
    pub q: u32,
    pub p: u32,
    pub k: u32,
    pub n: usize,
    pub m: usize,
    pub epsilon: Option<String>,
    pub f0: String,
    pub total: u64,
    pub hits: u64,
    pub mean_num: String,
    pub mean_den: String,
    pub reference_num: String,
    pub reference_den: String,
    pub deviation_decimal: String,
    pub mode: String,
    pub seed: Option<u64>,
    pub skipped: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_p_num: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_p_den: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binom_ref_num: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binom_ref_den: Option<String>,
}

pub const REPORT_COLUMNS: [&str; 17] = [
    "q",
    "p",
    "k",
    "n",
    "m",
    "epsilon",
    "f0",
    "total",
    "hits",
    "mean_num",
    "mean_den",
    "reference_num",
    "reference_den",
    "deviation_decimal",
    "mode",
    "seed",
    "skipped",
];

pub const AFFINE_COLUMNS: [&str; 5] =
    ["nu", "c_p_num", "c_p_den", "binom_ref_num", "binom_ref_den"];

pub const HISTOGRAM_COLUMNS: [&str; 6] = [
    "signed_type",
    "count",
    "probability_num",
    "probability_den",
    "theoretical_num",
    "theoretical_den",
];

impl From<&DensityReport> for ReportRecord {
    fn from(r: &DensityReport) -> Self {
        let affine = r.affine.as_ref();
        Self {
            q: r.q,
            p: r.p,
            k: r.k,
            n: r.n,
            m: r.m,
            epsilon: r.epsilon.as_ref().map(|e| e.to_string()),
            f0: r.f0.clone(),
            total: r.total,
            hits: r.hits,
            mean_num: num(&r.mean),
            mean_den: den(&r.mean),
            reference_num: num(&r.reference),
            reference_den: den(&r.reference),
            deviation_decimal: decimal(&r.deviation),
            mode: match r.mode {
                ScanMode::Exhaustive => "exhaustive",
                ScanMode::MonteCarlo { .. } => "monte_carlo",
            }
            .to_string(),
            seed: r.seed(),
            skipped: r.skipped,
            nu: affine.map(|a| a.nu),
            c_p_num: affine.map(|a| num(&a.c_p)),
            c_p_den: affine.map(|a| den(&a.c_p)),
            binom_ref_num: affine.map(|a| num(&a.binom_ref)),
            binom_ref_den: affine.map(|a| den(&a.binom_ref)),
        }
    }
}

impl ReportRecord {
    fn csv_fields(&self, affine: bool) -> Vec<String> {
        let opt = |o: &Option<String>| o.clone().unwrap_or_default();
        let mut out = vec![
            self.q.to_string(),
            self.p.to_string(),
            self.k.to_string(),
            self.n.to_string(),
            self.m.to_string(),
            opt(&self.epsilon),
            self.f0.clone(),
            self.total.to_string(),
            self.hits.to_string(),
            self.mean_num.clone(),
            self.mean_den.clone(),
            self.reference_num.clone(),
            self.reference_den.clone(),
            self.deviation_decimal.clone(),
            self.mode.clone(),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
            self.skipped.to_string(),
        ];
        if affine {
            out.push(self.nu.map(|s| s.to_string()).unwrap_or_default());
            out.push(opt(&self.c_p_num));
            out.push(opt(&self.c_p_den));
            out.push(opt(&self.binom_ref_num));
            out.push(opt(&self.binom_ref_den));
        }
        out
    }
}

fn csv_error(e: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("csv output: {e}"))
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(csv_error)?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn report_to_json(r: &DensityReport) -> String {
    serde_json::to_string_pretty(&ReportRecord::from(r)).expect("record serializes")
}

/// One header row and one row per report. The affine columns are appended
/// when any report carries them.
pub fn reports_to_csv(reports: &[DensityReport]) -> Result<String> {
    let affine = reports.iter().any(|r| r.affine.is_some());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = REPORT_COLUMNS.to_vec();
    if affine {
        header.extend(AFFINE_COLUMNS);
    }
    w.write_record(&header).map_err(csv_error)?;
    for r in reports {
        w.write_record(ReportRecord::from(r).csv_fields(affine))
            .map_err(csv_error)?;
    }
    finish(w)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistogramRowRecord {
    pub signed_type: String,
    pub count: u64,
    pub probability_num: String,
    pub probability_den: String,
    pub theoretical_num: String,
    pub theoretical_den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistogramRecord {
    pub q: u32,
    pub p: u32,
    pub k: u32,
    pub n: usize,
    pub m: usize,
    pub f0: String,
    pub total: u64,
    pub skipped: u64,
    pub total_variation_num: String,
    pub total_variation_den: String,
    pub total_variation_decimal: String,
    pub rows: Vec<HistogramRowRecord>,
}

impl HistogramRecord {
    pub fn new(h: &SignedTypeHistogram) -> Result<Self> {
        let tv = h.total_variation()?;
        let rows = h
            .rows()?
            .into_iter()
            .map(|row| HistogramRowRecord {
                signed_type: row.signed_type.to_string(),
                count: row.count,
                probability_num: num(&row.probability),
                probability_den: den(&row.probability),
                theoretical_num: num(&row.theoretical),
                theoretical_den: den(&row.theoretical),
            })
            .collect();
        Ok(Self {
            q: h.q,
            p: h.p,
            k: h.k,
            n: h.n,
            m: h.m,
            f0: h.f0.clone(),
            total: h.total,
            skipped: h.skipped,
            total_variation_num: num(&tv),
            total_variation_den: den(&tv),
            total_variation_decimal: decimal(&tv),
            rows,
        })
    }
}

pub fn histogram_to_json(h: &SignedTypeHistogram) -> Result<String> {
    Ok(serde_json::to_string_pretty(&HistogramRecord::new(h)?).expect("record serializes"))
}

pub fn histogram_to_csv(h: &SignedTypeHistogram) -> Result<String> {
    // the header row comes from the record's field names
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in HistogramRecord::new(h)?.rows {
        w.serialize(row).map_err(csv_error)?;
    }
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{FieldContext, Fq};
    use crate::intervals::{scan_exhaustive, signed_type_histogram, Interval, ScanConfig};
    use crate::poly::Polynomial;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal(&r(1, 2)), "0.500000000000");
        assert_eq!(decimal(&r(713, 4096)), "0.174072265625");
        assert_eq!(decimal(&r(1, 3)), "0.333333333333");
        assert_eq!(decimal(&r(2, 3)), "0.666666666667");
        assert_eq!(decimal(&r(-2, 3)), "-0.666666666667");
        assert_eq!(decimal(&r(0, 3)), "0");
        assert_eq!(decimal(&r(1, 1)), "1.00000000000");
        assert_eq!(decimal(&r(1, 81)), "0.0123456790123");
        assert_eq!(
            decimal(&r(9_999_999_999_999, 10_000_000_000_000)),
            "1.00000000000"
        );
        assert_eq!(decimal(&r(123_456_789_012_345, 1)), "1.23456789012e14");
        assert_eq!(
            decimal(&r(1, 1_000_000_000_000_000_000)),
            "1.00000000000e-18"
        );
    }

    proptest! {
        #[test]
        fn decimal_is_close(n in -1_000_000i64..1_000_000, d in 1i64..1_000_000) {
            let s = decimal(&r(n, d));
            let parsed: f64 = s.parse().unwrap();
            let exact = n as f64 / d as f64;
            prop_assert!((parsed - exact).abs() <= exact.abs() * 1e-11);
            let digits = s.trim_start_matches('-').split('e').next().unwrap().replace('.', "");
            if n != 0 {
                prop_assert_eq!(digits.trim_start_matches('0').len(), 12);
            }
        }
    }

    fn sample_report() -> DensityReport {
        let ctx = FieldContext::new(3, 2).unwrap();
        let f0 = Polynomial::monomial(&ctx, Fq::ONE, 3);
        scan_exhaustive(&Interval::with_m(f0, 1).unwrap(), &ScanConfig::default()).unwrap()
    }

    #[test]
    fn json_round_trip_and_keys() {
        let report = sample_report();
        let text = report_to_json(&report);
        let record: ReportRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(record, ReportRecord::from(&report));
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let keys: Vec<&String> = value.as_object().unwrap().keys().collect();
        assert_eq!(keys, REPORT_COLUMNS.to_vec());
        let extra = text.replacen('{', "{\"unexpected\": 1,", 1);
        assert!(serde_json::from_str::<ReportRecord>(&extra).is_err());
    }

    #[test]
    fn csv_header_is_stable() {
        let csv = reports_to_csv(&[sample_report(), sample_report()]).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), REPORT_COLUMNS.join(","));
        let row = lines.next().unwrap();
        assert!(row.starts_with("9,3,2,3,1,,\"0,0,0,1\",81,"));
        assert_eq!(lines.count(), 1);
    }

    #[test]
    fn histogram_outputs() {
        let ctx = FieldContext::new(3, 2).unwrap();
        let f0 = Polynomial::monomial(&ctx, Fq::ONE, 3);
        let h = signed_type_histogram(&Interval::with_m(f0, 1).unwrap(), &ScanConfig::default())
            .unwrap();
        let csv = histogram_to_csv(&h).unwrap();
        assert_eq!(csv.lines().next().unwrap(), HISTOGRAM_COLUMNS.join(","));
        assert_eq!(csv.lines().count(), 1 + h.rows().unwrap().len());
        let json = histogram_to_json(&h).unwrap();
        let back: HistogramRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.total, 81);
    }
}
