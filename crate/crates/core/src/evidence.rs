//! Numeric evidence for the tail and edge-factor conjectures.
//!
//! Both tables come from one streamed reduction of the all-ones grid: the
//! last `rows` tails feed the tail table and the grid left after reducing
//! down to `c` rows feeds the edge-ratio table.

use std::io::Write;

use rug::Rational;
use serde::Serialize;

use crate::edge_factors::{conformance, display, ConformanceReport, RatioKind};
use crate::error::{Error, Result};
use crate::grid::{uniform_grid, Edge, TriGrid};
use crate::reduction::Reducer;
use crate::scalar::{e_const, parse_decimal, BigFloat, Field, Real, Scalar};

/// The twelve edge ratios shown for the reduced 10-grid.
pub const TABLE2_RATIOS: [(usize, usize, RatioKind); 12] = [
    (4, 1, RatioKind::R21),
    (4, 2, RatioKind::R21),
    (6, 4, RatioKind::R21),
    (1, 1, RatioKind::R31),
    (5, 3, RatioKind::R31),
    (6, 4, RatioKind::R31),
    (2, 1, RatioKind::X),
    (3, 1, RatioKind::X),
    (4, 1, RatioKind::X),
    (4, 2, RatioKind::Y),
    (4, 3, RatioKind::Y),
    (5, 4, RatioKind::Y),
];

#[derive(Clone, Debug, PartialEq)]
pub struct TailRow<S> {
    pub i: usize,
    /// t(n,i).
    pub actual: S,
    /// (1/i)·1/(2e).
    pub conjectured: BigFloat,
    /// conjectured/actual − 1, the sign convention of the printed table.
    pub error: BigFloat,
    /// actual/conjectured − 1.
    pub deviation: BigFloat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioRow<S> {
    pub kind: RatioKind,
    /// Numerator and denominator labels as (r, d, e).
    pub numerator: (usize, usize, usize),
    pub denominator: (usize, usize, usize),
    pub observed: S,
    pub predicted: Rational,
    /// predicted/observed − 1.
    pub error: S,
}

impl<S> RatioRow<S> {
    pub fn label(&self) -> String {
        let (a, b, c) = self.numerator;
        let (x, y, z) = self.denominator;
        format!("<{a},{b},{c}>/<{x},{y},{z}>")
    }
}

#[derive(Clone, Debug)]
pub struct Evidence<S> {
    pub n: usize,
    pub tails: Vec<TailRow<S>>,
    /// The grid reduced to `c` rows, when requested.
    pub reduced: Option<TriGrid<S>>,
}

fn as_float<S: Real>(value: &S, precision_bits: u32) -> Result<BigFloat> {
    match value.to_scalar() {
        Scalar::Exact(q) => BigFloat::from_rational(&q, precision_bits),
        Scalar::Float(x) => Ok(x),
    }
}

/// Reduces the all-`unit` n-grid, keeping tails t(n,i) for `i ≤ rows` and
/// the grid with `c` rows.
///
/// Comparisons with 1/(2e) are made at `precision_bits`.
pub fn conjecture_evidence<S: Real>(
    n: usize,
    unit: S,
    rows: usize,
    c: Option<usize>,
    precision_bits: u32,
) -> Result<Evidence<S>> {
    if rows > n {
        return Err(Error::Domain {
            function: "tail table",
            args: format!("(n={n}, rows={rows})"),
        });
    }
    if let Some(c) = c {
        if c == 0 || c >= n {
            return Err(Error::Domain {
                function: "ratio table",
                args: format!("(n={n}, c={c})"),
            });
        }
    }
    let e = e_const(precision_bits)?;
    let one = BigFloat::from_int(1, precision_bits)?;
    let half_over_e = one.div(&e.add(&e))?;

    let mut reducer = Reducer::new(uniform_grid(n, unit)?);
    let mut reduced = None;
    let mut tails = Vec::new();
    loop {
        if let (Some(c), Some(g)) = (c, reducer.current()) {
            if g.n() == c {
                reduced = Some(g.clone());
            }
        }
        let Some(t) = reducer.next() else { break };
        let t = t?;
        let i = t.source_rows;
        if i <= rows {
            let actual = as_float(&t.top, precision_bits)?;
            let conjectured = half_over_e.div(&BigFloat::from_int(i as i64, precision_bits)?)?;
            let error = conjectured.div(&actual)?.sub(&one);
            let deviation = actual.div(&conjectured)?.sub(&one);
            tails.push(TailRow {
                i,
                actual: t.top,
                conjectured,
                error,
                deviation,
            });
        }
    }
    tails.reverse();
    Ok(Evidence { n, tails, reduced })
}

/// The twelve displayed ratios from a conformance report.
pub fn ratio_rows<S: Real>(report: &ConformanceReport<S>) -> Result<Vec<RatioRow<S>>> {
    TABLE2_RATIOS
        .iter()
        .map(|&(r, d, kind)| {
            let rec = report.find(r, d, kind).ok_or(Error::OutOfRange {
                n: report.c,
                r,
                d,
                e: 0,
            })?;
            let (numerator, denominator) = match kind {
                RatioKind::R21 => ((r, d, Edge::Right.index()), (r, d, 1)),
                RatioKind::R31 => ((r, d, Edge::Base.index()), (r, d, 1)),
                RatioKind::X => ((r, 1, 1), (r - 1, 1, 1)),
                RatioKind::Y => ((r, d, 1), (r, d - 1, 1)),
            };
            Ok(RatioRow {
                kind,
                numerator,
                denominator,
                observed: rec.observed.clone(),
                predicted: rec.predicted.clone(),
                error: rec.error.clone(),
            })
        })
        .collect()
}

impl<S: Real> Evidence<S> {
    pub fn conformance(&self) -> Option<Result<ConformanceReport<S>>> {
        self.reduced.as_ref().map(|g| conformance(g, g.n()))
    }
}

fn exact_value<S: Real>(value: &S) -> Result<Rational> {
    match value.to_scalar() {
        Scalar::Exact(q) => Ok(q),
        Scalar::Float(x) => x.to_rational().ok_or(Error::Domain {
            function: "exact_value",
            args: format!("({x})"),
        }),
    }
}

/// True when `value` is within one unit of the last printed place of the
/// decimal string `printed`, so both rounded and truncated prints match.
pub fn matches_printed<S: Real>(value: &S, printed: &str) -> Result<bool> {
    let target = parse_decimal(printed)?;
    let places = printed.split_once('.').map_or(0, |(_, f)| f.len());
    let ulp = Rational::from((
        1,
        rug::Integer::from(rug::Integer::u_pow_u(10, places as u32)),
    ));
    let gap = Rational::from(&exact_value(value)? - &target).abs();
    Ok(gap <= ulp)
}

/// Significant digits of a decimal literal.
pub fn significant_digits(printed: &str) -> usize {
    printed
        .trim_start_matches('-')
        .chars()
        .filter(char::is_ascii_digit)
        .skip_while(|&c| c == '0')
        .count()
}

/// True when `value` rounded to as many significant digits as `printed`
/// equals it.
pub fn matches_significant<S: Real>(value: &S, printed: &str) -> Result<bool> {
    let target = parse_decimal(printed)?;
    let digits = significant_digits(printed).max(1);
    let x = BigFloat::from_rational(&exact_value(value)?, 128)?;
    Ok(parse_decimal(&x.to_sig_string(digits))? == target)
}

#[derive(Serialize)]
struct TailCsvRow {
    i: usize,
    actual: String,
    conjectured: String,
    error: String,
    deviation: String,
}

/// CSV with columns i, actual, conjectured, error, deviation.
pub fn write_tail_table<S: Real, W: Write>(
    rows: &[TailRow<S>],
    out: W,
    sig_digits: usize,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(TailCsvRow {
            i: row.i,
            actual: display(&row.actual, sig_digits),
            conjectured: row.conjectured.to_sig_string(sig_digits),
            error: row.error.to_sig_string(sig_digits),
            deviation: row.deviation.to_sig_string(sig_digits),
        })?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct RatioCsvRow {
    ratio: String,
    kind: String,
    observed: String,
    predicted: String,
    error: String,
}

/// CSV with columns ratio, kind, observed, predicted, error.
pub fn write_ratio_table<S: Real, W: Write>(
    rows: &[RatioRow<S>],
    out: W,
    sig_digits: usize,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(RatioCsvRow {
            ratio: row.label(),
            kind: row.kind.to_string(),
            observed: display(&row.observed, sig_digits),
            predicted: row.predicted.to_string(),
            error: display(&row.error, sig_digits),
        })?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_grid_tail_deviation() {
        let ev = conjecture_evidence(3, Rational::from(1), 1, None, 128).unwrap();
        assert_eq!(ev.tails.len(), 1);
        assert_eq!(ev.tails[0].actual, Rational::from((4, 21)));
        assert!(ev.tails[0].deviation.to_sig_string(3).starts_with("0.0355"));
        assert!(ev.tails[0].error.to_f64() < 0.0);
    }

    #[test]
    fn six_grid_tail_deviation() {
        let ev = conjecture_evidence(6, Rational::from(1), 2, None, 128).unwrap();
        assert_eq!(ev.tails[0].i, 1);
        assert_eq!(ev.tails[1].i, 2);
        assert!(ev.tails[0]
            .deviation
            .to_sig_string(2)
            .starts_with("-0.0089"));
    }

    #[test]
    fn reduced_grid_is_kept() {
        let ev = conjecture_evidence(8, Rational::from(1), 0, Some(5), 64).unwrap();
        assert_eq!(ev.reduced.as_ref().unwrap().n(), 5);
        let report = ev.conformance().unwrap().unwrap();
        let rows = ratio_rows(&report);
        // A 5-grid lacks the 6th row used by some displayed ratios.
        assert!(rows.is_err());
        assert!(conjecture_evidence(8, Rational::from(1), 9, None, 64).is_err());
        assert!(conjecture_evidence(8, Rational::from(1), 1, Some(8), 64).is_err());
    }

    #[test]
    fn printed_comparisons() {
        let x = Rational::from((1837762865, 10_000_000_000u64));
        assert!(matches_printed(&x, "0.183776286").unwrap());
        assert!(matches_printed(&x, "0.1837762865").unwrap());
        assert!(!matches_printed(&x, "0.183776288").unwrap());
        assert_eq!(significant_digits("-0.00014"), 2);
        assert_eq!(significant_digits("0.0009"), 1);
        let e = Rational::from((889, 1_000_000));
        assert!(matches_significant(&e, "0.0009").unwrap());
        assert!(!matches_significant(&e, "0.001").unwrap());
        let neg = Rational::from((-144984, 1_000_000_000));
        assert!(matches_significant(&neg, "-0.00014").unwrap());
        assert!(!matches_significant(&neg.clone().abs(), "-0.00014").unwrap());
    }

    #[test]
    fn ratio_labels() {
        let ev = conjecture_evidence(12, Rational::from(1), 0, Some(10), 64).unwrap();
        let rows = ratio_rows(&ev.conformance().unwrap().unwrap()).unwrap();
        assert_eq!(rows[0].label(), "<4,1,2>/<4,1,1>");
        assert_eq!(rows[6].label(), "<2,1,1>/<1,1,1>");
        assert_eq!(rows[11].label(), "<5,4,1>/<5,3,1>");
        assert_eq!(rows[0].predicted, Rational::from(7));
        assert_eq!(rows[6].predicted, Rational::from((19, 27)));
    }
}
