//! Closed-form edge factors and conformance checks.
//!
//! The formulas are written once, generically over [`FormulaField`], so the
//! same definitions serve numeric evaluation here and symbolic evaluation
//! in [`crate::symbolic`].

use std::fmt;
use std::io::Write;

use rug::Rational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{factor_grid, proportionality, Edge, TriGrid};
use crate::reduction::reduce_fully;
use crate::scalar::{Field, Real};

/// A field with integer constants.
pub trait FormulaField: Field {
    fn int(value: i64) -> Self;
}

impl FormulaField for Rational {
    fn int(value: i64) -> Self {
        Rational::from(value)
    }
}

/// The factor functions over any [`FormulaField`].
pub mod formulas {
    use super::FormulaField;
    use crate::error::Result;

    fn k<T: FormulaField>(v: i64) -> T {
        T::int(v)
    }

    /// `a·u + b`.
    fn lin<T: FormulaField>(a: i64, u: &T, b: i64) -> T {
        k::<T>(a).mul(u).add(&k(b))
    }

    /// D(x,y,z) = xy/(x+y+z).
    pub fn delta<T: FormulaField>(x: &T, y: &T, z: &T) -> Result<T> {
        x.mul(y).div(&x.add(y).add(z))
    }

    /// Y(x,y,z) = (xy+yz+zx)/x.
    pub fn wye<T: FormulaField>(x: &T, y: &T, z: &T) -> Result<T> {
        x.mul(y).add(&y.mul(z)).add(&z.mul(x)).div(x)
    }

    /// x(c,r) = (r−1)/(2r−1) · (2(c−r)+3)/(c−r+1).
    pub fn x<T: FormulaField>(c: &T, r: &T) -> Result<T> {
        let cr = c.sub(r);
        let a = lin(1, r, -1).div(&lin(2, r, -1))?;
        let b = lin(2, &cr, 3).div(&lin(1, &cr, 1))?;
        Ok(a.mul(&b))
    }

    /// y(r,d) = (d−1)/(2d−3) · (2(r−d)+3)/(r−d+1).
    pub fn y<T: FormulaField>(r: &T, d: &T) -> Result<T> {
        let rd = r.sub(d);
        let a = lin(1, d, -1).div(&lin(2, d, -3))?;
        let b = lin(2, &rd, 3).div(&lin(1, &rd, 1))?;
        Ok(a.mul(&b))
    }

    /// z(r,d) = 1 − (d−1)/r · 1/(2(r−d)+3).
    pub fn z<T: FormulaField>(r: &T, d: &T) -> Result<T> {
        let a = lin(1, d, -1).div(r)?;
        let b = k::<T>(1).div(&lin(2, &r.sub(d), 3))?;
        Ok(k::<T>(1).sub(&a.mul(&b)))
    }

    /// r21(c,r,d) = (2(r−d)+1)/(2d−1); `c` is unused.
    pub fn r21<T: FormulaField>(_c: &T, r: &T, d: &T) -> Result<T> {
        lin(2, &r.sub(d), 1).div(&lin(2, d, -1))
    }

    /// r31(c,r,d) = (2(c−r)+1)/(2d−1).
    pub fn r31<T: FormulaField>(c: &T, r: &T, d: &T) -> Result<T> {
        lin(2, &c.sub(r), 1).div(&lin(2, d, -1))
    }

    /// f(c,i) = 1 + i/(c−i) · 1/(2c+1).
    pub fn f<T: FormulaField>(c: &T, i: &T) -> Result<T> {
        let a = i.div(&c.sub(i))?;
        let b = k::<T>(1).div(&lin(2, c, 1))?;
        Ok(k::<T>(1).add(&a.mul(&b)))
    }

    /// g(c) = c/(c−1) · (2c−1)/(2c+1).
    pub fn g<T: FormulaField>(c: &T) -> Result<T> {
        let a = c.div(&lin(1, c, -1))?;
        let b = lin(2, c, -1).div(&lin(2, c, 1))?;
        Ok(a.mul(&b))
    }
}

fn domain(function: &'static str, args: &[usize], ok: bool) -> Result<()> {
    if ok {
        return Ok(());
    }
    let list: Vec<String> = args.iter().map(|a| a.to_string()).collect();
    Err(Error::Domain {
        function,
        args: format!("({})", list.join(",")),
    })
}

fn q(v: usize) -> Rational {
    Rational::from(v)
}

/// x(c,r) for `2 ≤ r ≤ c`.
pub fn factor_x(c: usize, r: usize) -> Result<Rational> {
    domain("x", &[c, r], 2 <= r && r <= c)?;
    formulas::x(&q(c), &q(r))
}

/// y(r,d) for `2 ≤ d ≤ r`.
pub fn factor_y(r: usize, d: usize) -> Result<Rational> {
    domain("y", &[r, d], 2 <= d && d <= r)?;
    formulas::y(&q(r), &q(d))
}

/// z(r,d) for `1 ≤ d ≤ r`.
pub fn factor_z(r: usize, d: usize) -> Result<Rational> {
    domain("z", &[r, d], 1 <= d && d <= r)?;
    formulas::z(&q(r), &q(d))
}

/// r21(c,r,d) for `1 ≤ d ≤ r ≤ c`.
pub fn factor_r21(c: usize, r: usize, d: usize) -> Result<Rational> {
    domain("r21", &[c, r, d], 1 <= d && d <= r && r <= c)?;
    formulas::r21(&q(c), &q(r), &q(d))
}

/// r31(c,r,d) for `1 ≤ d ≤ r ≤ c`.
pub fn factor_r31(c: usize, r: usize, d: usize) -> Result<Rational> {
    domain("r31", &[c, r, d], 1 <= d && d <= r && r <= c)?;
    formulas::r31(&q(c), &q(r), &q(d))
}

/// f(c,i) for `1 ≤ i ≤ c−1`.
pub fn factor_f(c: usize, i: usize) -> Result<Rational> {
    domain("f", &[c, i], 1 <= i && i < c)?;
    formulas::f(&q(c), &q(i))
}

/// g(c) for `c ≥ 2`.
pub fn factor_g(c: usize) -> Result<Rational> {
    domain("g", &[c], c >= 2)?;
    formulas::g(&q(c))
}

/// Which edge ratio a conformance record compares.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RatioKind {
    /// ⟨r,d,2⟩/⟨r,d,1⟩ against r21(c,r,d).
    R21,
    /// ⟨r,d,3⟩/⟨r,d,1⟩ against r31(c,r,d).
    R31,
    /// ⟨r,1,1⟩/⟨r−1,1,1⟩ against x(c,r).
    X,
    /// ⟨r,d,1⟩/⟨r,d−1,1⟩ against y(r,d).
    Y,
}

impl fmt::Display for RatioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RatioKind::R21 => "r21",
            RatioKind::R31 => "r31",
            RatioKind::X => "x",
            RatioKind::Y => "y",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConformanceRecord<S> {
    pub r: usize,
    pub d: usize,
    pub kind: RatioKind,
    pub observed: S,
    pub predicted: Rational,
    /// predicted/observed − 1.
    pub error: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConformanceReport<S> {
    pub c: usize,
    pub records: Vec<ConformanceRecord<S>>,
    /// Largest |error| over all records.
    pub worst: S,
    /// Every error is exactly zero.
    pub exact: bool,
}

impl<S: Real> ConformanceReport<S> {
    pub fn find(&self, r: usize, d: usize, kind: RatioKind) -> Option<&ConformanceRecord<S>> {
        self.records
            .iter()
            .find(|rec| rec.r == r && rec.d == d && rec.kind == kind)
    }

    /// CSV with columns r, d, kind, observed, predicted, error.
    pub fn write_csv<W: Write>(&self, out: W, sig_digits: usize) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["r", "d", "kind", "observed", "predicted", "error"])?;
        for rec in &self.records {
            w.write_record([
                rec.r.to_string(),
                rec.d.to_string(),
                rec.kind.to_string(),
                display(&rec.observed, sig_digits),
                rec.predicted.to_string(),
                display(&rec.error, sig_digits),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Exact scalars print as fractions, floats with `sig_digits` digits.
pub fn display<S: Real>(value: &S, sig_digits: usize) -> String {
    match value.to_scalar() {
        crate::scalar::Scalar::Exact(q) => q.to_string(),
        crate::scalar::Scalar::Float(x) => x.to_sig_string(sig_digits),
    }
}

/// Compares every edge ratio of `g` with the factor predicted for a
/// `c_label`-grid.
pub fn conformance<S: Real>(g: &TriGrid<S>, c_label: usize) -> Result<ConformanceReport<S>> {
    if g.n() != c_label {
        return Err(Error::DimensionMismatch {
            left: g.n(),
            right: c_label,
        });
    }
    let c = c_label;
    let zero = g.labels()[0][0].sub(&g.labels()[0][0]);
    let one = zero.lift(&Rational::from(1));
    let edge = |r, d, e| g.edge(r, d, e).expect("coordinate inside grid");
    let mut records = Vec::new();
    let mut push = |r, d, kind, num: &S, den: &S, predicted: Rational| -> Result<()> {
        let observed = num.div(den)?;
        let error = observed.lift(&predicted).div(&observed)?.sub(&one);
        records.push(ConformanceRecord {
            r,
            d,
            kind,
            observed,
            predicted,
            error,
        });
        Ok(())
    };
    for r in 1..=c {
        for d in 1..=r {
            let left = edge(r, d, Edge::Left);
            push(
                r,
                d,
                RatioKind::R21,
                edge(r, d, Edge::Right),
                left,
                factor_r21(c, r, d)?,
            )?;
            push(
                r,
                d,
                RatioKind::R31,
                edge(r, d, Edge::Base),
                left,
                factor_r31(c, r, d)?,
            )?;
            if d == 1 && r >= 2 {
                push(
                    r,
                    1,
                    RatioKind::X,
                    left,
                    edge(r - 1, 1, Edge::Left),
                    factor_x(c, r)?,
                )?;
            }
            if d >= 2 {
                push(
                    r,
                    d,
                    RatioKind::Y,
                    left,
                    edge(r, d - 1, Edge::Left),
                    factor_y(r, d)?,
                )?;
            }
        }
    }
    let mut worst = zero;
    for rec in &records {
        let e = rec.error.abs();
        if e > worst {
            worst = e;
        }
    }
    let exact = records.iter().all(|rec| rec.error.is_zero());
    Ok(ConformanceReport {
        c,
        records,
        worst,
        exact,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Clause {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub c: usize,
    pub clauses: Vec<Clause>,
    /// Top tails t_r(c,i) for i = 1..=c, as fractions.
    pub tails: Vec<String>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| !c.passed)
    }
}

/// Checks the main theorem exactly on the c-grid built from the edge
/// factors.
///
/// Clauses: t_r(c,1) = c/(2c+1); t_r(c,i) = t_r(c,1)/i; T_r(c,c−i) =
/// f(c,i)·T_r(c−i); every reduced grid conforms exactly; and
/// t_r(c,c−i) = f(c,i)·Δ(1,1,r31(c−i,1,1)).
pub fn verify_main_theorem(c: usize) -> Result<TheoremReport> {
    if c < 2 {
        return Err(Error::TooFewRows { n: c, min: 2 });
    }
    let trace = reduce_fully(&factor_grid(c)?)?;
    // tails[k] comes from reducing the (c−k)-grid, so t_r(c,i) = tails[c−i].
    let tail = |i: usize| &trace.tails[c - i].top;
    let mut clauses = Vec::new();
    let mut clause = |name: String, passed: bool, detail: String| {
        clauses.push(Clause {
            name,
            passed,
            detail,
        })
    };

    let t1 = tail(1).clone();
    let expected = Rational::from((c as i64, 2 * c as i64 + 1));
    clause(
        "t(c,1) = c/(2c+1)".into(),
        t1 == expected,
        format!("t(c,1) = {t1}, expected {expected}"),
    );

    for i in 1..=c {
        let t = tail(i);
        let expected = &t1 / Rational::from(i);
        clause(
            format!("t(c,{i}) = t(c,1)/{i}"),
            *t == expected,
            format!("t(c,{i}) = {t}, expected {expected}"),
        );
        let record = &trace.tails[c - i];
        clause(
            format!("tails of the {i}-grid agree"),
            record.top == record.bottom_left && record.top == record.bottom_right,
            format!(
                "top {}, bottom-left {}, bottom-right {}",
                record.top, record.bottom_left, record.bottom_right
            ),
        );
    }

    for i in 0..c {
        let reduced = &trace.grids[i];
        let f = if i == 0 {
            Rational::from(1)
        } else {
            factor_f(c, i)?
        };
        let base = factor_grid(c - i)?;
        let k = proportionality(reduced, &base)?;
        if i > 0 {
            clause(
                format!("T(c,c-{i}) = f(c,{i}) T(c-{i})"),
                k.as_ref() == Some(&f),
                format!("ratio {:?}, expected {f}", k.map(|k| k.to_string())),
            );
        }
        let report = conformance(reduced, c - i)?;
        clause(
            format!("T(c,c-{i}) conforms to the edge factors"),
            report.exact,
            format!("worst error {}", report.worst),
        );
        let predicted = Rational::from(
            &f * &formulas::delta(
                &Rational::from(1),
                &Rational::from(1),
                &factor_r31(c - i, 1, 1)?,
            )?,
        );
        let observed = tail(c - i);
        clause(
            format!("t(c,c-{i}) = f(c,{i}) D(1,1,r31(c-{i},1,1))"),
            *observed == predicted,
            format!("t = {observed}, expected {predicted}"),
        );
    }

    let tails = (1..=c).map(|i| tail(i).to_string()).collect();
    Ok(TheoremReport { c, clauses, tails })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::uniform_grid;
    use crate::reduction::row_reduce;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn factor_examples() {
        assert_eq!(factor_x(3, 2).unwrap(), q(5, 6));
        assert_eq!(factor_y(3, 2).unwrap(), q(5, 2));
        assert_eq!(factor_z(3, 3).unwrap(), q(7, 9));
        assert_eq!(factor_x(10, 2).unwrap(), q(19, 27));
        assert_eq!(factor_r21(10, 4, 1).unwrap(), q(7, 1));
        assert_eq!(factor_r31(10, 1, 1).unwrap(), q(19, 1));
        for r in 1..8 {
            assert_eq!(factor_r21(9, r, r).unwrap(), q(1, 2 * r as i64 - 1));
        }
        assert_eq!(factor_g(3).unwrap(), q(15, 14));
        assert_eq!(factor_f(3, 1).unwrap(), q(15, 14));
        assert_eq!(factor_f(3, 2).unwrap(), q(9, 7));
    }

    #[test]
    fn domains_are_enforced() {
        assert!(factor_x(3, 1).is_err());
        assert!(factor_x(3, 4).is_err());
        assert!(factor_y(3, 1).is_err());
        assert!(factor_y(2, 3).is_err());
        assert!(factor_z(2, 0).is_err());
        assert!(factor_r21(3, 4, 1).is_err());
        assert!(factor_r31(3, 2, 3).is_err());
        assert!(factor_f(3, 3).is_err());
        assert!(factor_f(3, 0).is_err());
        assert!(factor_g(1).is_err());
    }

    #[test]
    fn factor_grid_conforms_exactly() {
        for c in 1..=8 {
            let report = conformance(&factor_grid(c).unwrap(), c).unwrap();
            assert!(report.exact, "c = {c}");
            assert_eq!(report.worst, q(0, 1));
        }
    }

    #[test]
    fn record_count() {
        // Two ratios per triangle, one x per row below the first, one y per
        // non-leftmost triangle.
        let c = 6;
        let report = conformance(&factor_grid(c).unwrap(), c).unwrap();
        let t = c * (c + 1) / 2;
        assert_eq!(report.records.len(), 2 * t + (c - 1) + (t - c));
    }

    #[test]
    fn uniform_grid_does_not_conform() {
        let report = conformance(&uniform_grid(3, q(1, 1)).unwrap(), 3).unwrap();
        assert!(!report.exact);
        let rec = report.find(1, 1, RatioKind::R31).unwrap();
        assert_eq!(rec.observed, q(1, 1));
        assert_eq!(rec.predicted, q(5, 1));
        assert_eq!(rec.error, q(4, 1));
        assert!(conformance(&uniform_grid(3, q(1, 1)).unwrap(), 4).is_err());
    }

    #[test]
    fn reduced_factor_grid_conforms() {
        let (reduced, _) = row_reduce(&factor_grid(7).unwrap()).unwrap();
        assert!(conformance(&reduced, 6).unwrap().exact);
    }

    #[test]
    fn main_theorem_small() {
        let report = verify_main_theorem(3).unwrap();
        assert!(
            report.passed(),
            "{:?}",
            report.failures().collect::<Vec<_>>()
        );
        assert_eq!(report.tails, vec!["3/7", "3/14", "1/7"]);
        for c in 2..=6 {
            assert!(verify_main_theorem(c).unwrap().passed(), "c = {c}");
        }
        assert!(verify_main_theorem(1).is_err());
    }

    #[test]
    fn conformance_csv_layout() {
        let report = conformance(&factor_grid(2).unwrap(), 2).unwrap();
        let mut buf = Vec::new();
        report.write_csv(&mut buf, 10).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("r,d,kind,observed,predicted,error"));
        assert_eq!(lines.next(), Some("1,1,r21,1,1,0"));
        assert_eq!(lines.next(), Some("1,1,r31,3,3,0"));
    }
}
