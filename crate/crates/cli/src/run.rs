use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use rug::Rational;
use serde_json::{json, Value};

use trigrid::edge_factors::{display, verify_main_theorem};
use trigrid::evidence::{conjecture_evidence, ratio_rows, write_ratio_table, write_tail_table};
use trigrid::grid::{check_symmetry, reconstruct_isotropic, upper_half_coords, AnyGrid};
use trigrid::oracle::bottom_corner_resistance;
use trigrid::reduction::{corner_resistance, reduce_fully, row_reduce, Corner};
use trigrid::symbolic::{self, IdentityId, ProofResult};
use trigrid::{factor_grid, uniform_grid, BigFloat, Real, TriGrid};

use crate::{Cli, Command, Format, GridSource, Labels, ModeArg};

const TABLE1_DIGITS: usize = 10;
const TABLE2_DIGITS: usize = 12;
const VALUE_DIGITS: usize = 20;

struct Ctx<'a> {
    cli: &'a Cli,
}

impl Ctx<'_> {
    fn mode(&self, default: ModeArg) -> ModeArg {
        self.cli.global.mode.unwrap_or(default)
    }

    fn prec(&self) -> u32 {
        self.cli.global.prec
    }

    fn format(&self) -> Format {
        self.cli.global.format
    }

    fn check_ceiling(&self, mode: ModeArg, n: usize) -> Result<()> {
        let ceiling = self.cli.global.exact_ceiling;
        if mode == ModeArg::Exact && n > ceiling {
            bail!("n = {n} exceeds the exact-mode ceiling {ceiling}; use --mode float or raise --exact-ceiling");
        }
        Ok(())
    }

    fn out(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.cli.global.out {
            Some(path) => Box::new(BufWriter::new(
                File::create(path).with_context(|| format!("creating {}", path.display()))?,
            )),
            None => Box::new(io::stdout().lock()),
        })
    }

    fn grid(&self, source: &GridSource, default_mode: ModeArg) -> Result<AnyGrid> {
        let mode = self.mode(default_mode);
        if let Some(path) = &source.input {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let g = AnyGrid::from_json(&text)?;
            return match (g, mode) {
                (AnyGrid::Exact(g), ModeArg::Float) => Ok(g.to_float(self.prec())?.into()),
                (AnyGrid::Float(_), ModeArg::Exact) if self.cli.global.mode.is_some() => {
                    bail!("a float grid cannot be read in exact mode")
                }
                (g, _) => Ok(g),
            };
        }
        let size = match source.labels {
            Labels::Uniform1 => source.n.or(source.c),
            Labels::Factors => source.c.or(source.n),
        }
        .context("give --n (or --c) or --input")?;
        if size == 0 {
            bail!("the grid needs at least one row");
        }
        self.check_ceiling(mode, size)?;
        let exact = match source.labels {
            Labels::Uniform1 if mode == ModeArg::Float => {
                return Ok(uniform_grid(size, BigFloat::from_int(1, self.prec())?)?.into());
            }
            Labels::Uniform1 => uniform_grid(size, Rational::from(1))?,
            Labels::Factors => factor_grid(size)?,
        };
        Ok(match mode {
            ModeArg::Exact => exact.into(),
            ModeArg::Float => exact.to_float(self.prec())?.into(),
        })
    }
}

pub fn dispatch(cli: &Cli) -> Result<bool> {
    let ctx = Ctx { cli };
    match &cli.command {
        Command::Reduce { source, steps, all } => match ctx.grid(source, ModeArg::Exact)? {
            AnyGrid::Exact(g) => reduce(&ctx, g, *steps, *all),
            AnyGrid::Float(g) => reduce(&ctx, g, *steps, *all),
        },
        Command::Tails { source } => match ctx.grid(source, ModeArg::Exact)? {
            AnyGrid::Exact(g) => tails(&ctx, g),
            AnyGrid::Float(g) => tails(&ctx, g),
        },
        Command::Table1 { n, rows } => table1(&ctx, *n, *rows),
        Command::Table2 { n, c, report } => table2(&ctx, *n, *c, report.as_deref()),
        Command::Verify {
            theorem,
            cmin,
            cmax,
            identities,
            only,
            oracle,
            nmax,
            ledger,
        } => {
            let none = !(*theorem || *identities || *oracle);
            verify(
                &ctx,
                VerifyPlan {
                    theorem: (*theorem || none).then_some((*cmin, *cmax)),
                    identities: (*identities || none).then_some(only.as_slice()),
                    oracle: (*oracle || none).then_some(*nmax),
                    ledger: ledger.as_deref(),
                },
            )
        }
        Command::Resistance {
            source,
            harmonic,
            oracle,
        } => resistance(&ctx, source, *harmonic, *oracle),
        Command::Isotropy { cmin, cmax } => isotropy(&ctx, *cmin, *cmax),
        Command::Oracle { source } => oracle_cmd(&ctx, source),
    }
}

fn reduce<S: Real>(ctx: &Ctx, g: TriGrid<S>, steps: usize, all: bool) -> Result<bool>
where
    TriGrid<S>: Into<AnyGrid>,
{
    if steps >= g.n() {
        bail!(
            "a {}-grid can be reduced by at most {} rows",
            g.n(),
            g.n() - 1
        );
    }
    let mut grids = vec![g];
    for _ in 0..steps {
        let (next, _) = row_reduce(grids.last().expect("non-empty"))?;
        grids.push(next);
    }
    let keep: Vec<AnyGrid> = if all {
        grids.into_iter().map(Into::into).collect()
    } else {
        vec![grids.pop().expect("non-empty").into()]
    };
    let mut out = ctx.out()?;
    match ctx.format() {
        Format::Json => {
            let docs: Vec<_> = keep.iter().map(AnyGrid::to_document).collect();
            if all {
                serde_json::to_writer_pretty(&mut out, &docs)?;
            } else {
                serde_json::to_writer_pretty(&mut out, &docs[0])?;
            }
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["n", "r", "d", "left", "right", "base"])?;
            for g in &keep {
                let doc = g.to_document();
                for t in &doc.triangles {
                    w.write_record([
                        doc.n.to_string(),
                        t.r.to_string(),
                        t.d.to_string(),
                        t.left.clone(),
                        t.right.clone(),
                        t.base.clone(),
                    ])?;
                }
            }
            w.flush()?;
        }
    }
    Ok(true)
}

fn tails<S: Real>(ctx: &Ctx, g: TriGrid<S>) -> Result<bool> {
    let trace = reduce_fully(&g)?;
    let mut out = ctx.out()?;
    match ctx.format() {
        Format::Csv => trace.write_tails_csv(&mut out, VALUE_DIGITS)?,
        Format::Json => {
            let rows: Vec<Value> = trace
                .tails
                .iter()
                .map(|t| {
                    json!({
                        "m": t.source_rows,
                        "top": display(&t.top, VALUE_DIGITS),
                        "bottom_left": display(&t.bottom_left, VALUE_DIGITS),
                        "bottom_right": display(&t.bottom_right, VALUE_DIGITS),
                    })
                })
                .collect();
            serde_json::to_writer_pretty(&mut out, &rows)?;
            writeln!(out)?;
        }
    }
    Ok(true)
}

fn table1(ctx: &Ctx, n: usize, rows: usize) -> Result<bool> {
    let mode = ctx.mode(ModeArg::Float);
    ctx.check_ceiling(mode, n)?;
    match mode {
        ModeArg::Exact => table1_with(ctx, n, rows, Rational::from(1)),
        ModeArg::Float => table1_with(ctx, n, rows, BigFloat::from_int(1, ctx.prec())?),
    }
}

fn table1_with<S: Real>(ctx: &Ctx, n: usize, rows: usize, unit: S) -> Result<bool> {
    let ev = conjecture_evidence(n, unit, rows, None, ctx.prec())?;
    let mut out = ctx.out()?;
    match ctx.format() {
        Format::Csv => write_tail_table(&ev.tails, &mut out, TABLE1_DIGITS)?,
        Format::Json => {
            let rows: Vec<Value> = ev
                .tails
                .iter()
                .map(|row| {
                    json!({
                        "i": row.i,
                        "actual": display(&row.actual, TABLE1_DIGITS),
                        "conjectured": row.conjectured.to_sig_string(TABLE1_DIGITS),
                        "error": row.error.to_sig_string(TABLE1_DIGITS),
                        "deviation": row.deviation.to_sig_string(TABLE1_DIGITS),
                    })
                })
                .collect();
            serde_json::to_writer_pretty(&mut out, &rows)?;
            writeln!(out)?;
        }
    }
    Ok(true)
}

fn table2(ctx: &Ctx, n: usize, c: usize, report: Option<&std::path::Path>) -> Result<bool> {
    let mode = ctx.mode(ModeArg::Float);
    ctx.check_ceiling(mode, n)?;
    if c >= n {
        bail!("c = {c} must be smaller than n = {n}");
    }
    match mode {
        ModeArg::Exact => table2_with(ctx, n, c, report, Rational::from(1)),
        ModeArg::Float => table2_with(ctx, n, c, report, BigFloat::from_int(1, ctx.prec())?),
    }
}

fn table2_with<S: Real>(
    ctx: &Ctx,
    n: usize,
    c: usize,
    report_path: Option<&std::path::Path>,
    unit: S,
) -> Result<bool> {
    let ev = conjecture_evidence(n, unit, 0, Some(c), ctx.prec())?;
    let report = ev.conformance().context("reduced grid missing")??;
    let rows = ratio_rows(&report)?;
    if let Some(path) = report_path {
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        report.write_csv(BufWriter::new(file), TABLE2_DIGITS)?;
    }
    let mut out = ctx.out()?;
    match ctx.format() {
        Format::Csv => write_ratio_table(&rows, &mut out, TABLE2_DIGITS)?,
        Format::Json => {
            let ratios: Vec<Value> = rows
                .iter()
                .map(|row| {
                    json!({
                        "ratio": row.label(),
                        "kind": row.kind.to_string(),
                        "observed": display(&row.observed, TABLE2_DIGITS),
                        "predicted": row.predicted.to_string(),
                        "error": display(&row.error, TABLE2_DIGITS),
                    })
                })
                .collect();
            let conformance: Vec<Value> = report
                .records
                .iter()
                .map(|rec| {
                    json!({
                        "r": rec.r,
                        "d": rec.d,
                        "kind": rec.kind.to_string(),
                        "observed": display(&rec.observed, TABLE2_DIGITS),
                        "predicted": rec.predicted.to_string(),
                        "error": display(&rec.error, TABLE2_DIGITS),
                    })
                })
                .collect();
            let doc = json!({
                "n": n,
                "c": c,
                "ratios": ratios,
                "worst_error": display(&report.worst, TABLE2_DIGITS),
                "conformance": conformance,
            });
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
    }
    Ok(true)
}

struct VerifyPlan<'a> {
    theorem: Option<(usize, usize)>,
    identities: Option<&'a [String]>,
    oracle: Option<usize>,
    ledger: Option<&'a std::path::Path>,
}

fn ledger_line(r: &ProofResult) -> String {
    let verdict = if r.passed() { "PASS" } else { "FAIL" };
    let mut line = format!(
        "{:<13} {:<48} vars={} degree={:<2} {} ({:.1} ms, {} points)",
        r.name,
        r.role,
        r.vars.len(),
        r.degree,
        verdict,
        r.elapsed_ms,
        r.points
    );
    if r.disagreement() {
        line.push_str(" exact and sampled checks disagree");
    }
    if let Some(e) = &r.error {
        line.push_str(&format!(" error: {e}"));
    }
    line
}

/// Bottom-corner resistance from the reduction trace and from the Laplacian.
fn both_routes(g: &TriGrid<Rational>) -> Result<(Rational, Rational)> {
    let trace = reduce_fully(g)?;
    let by_tails = trace.corner_pair_resistance(Corner::BottomLeft, Corner::BottomRight);
    Ok((by_tails, bottom_corner_resistance(g)?))
}

fn verify(ctx: &Ctx, plan: VerifyPlan) -> Result<bool> {
    let mut out = ctx.out()?;
    let human = ctx.format() == Format::Csv;
    let mut ok = true;
    let mut doc = serde_json::Map::new();

    if let Some((cmin, cmax)) = plan.theorem {
        ctx.check_ceiling(ModeArg::Exact, cmax)?;
        let mut reports = Vec::new();
        for c in cmin.max(2)..=cmax {
            let start = Instant::now();
            let report = verify_main_theorem(c)?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            ok &= report.passed();
            if human {
                let verdict = if report.passed() { "PASS" } else { "FAIL" };
                writeln!(
                    out,
                    "theorem c={c:<3} {verdict} ({} clauses, {ms:.1} ms)",
                    report.clauses.len()
                )?;
                for f in report.failures() {
                    writeln!(out, "  failed: {}: {}", f.name, f.detail)?;
                }
            }
            reports.push(serde_json::to_value(&report)?);
        }
        doc.insert("theorem".into(), Value::Array(reports));
    }

    if let Some(only) = plan.identities {
        let results: Vec<ProofResult> = if only.is_empty() {
            symbolic::verify_all()
        } else {
            only.iter()
                .map(|name| Ok(symbolic::verify(IdentityId::parse(name)?)))
                .collect::<trigrid::Result<_>>()?
        };
        for r in &results {
            ok &= r.passed() && !r.disagreement();
            if human {
                writeln!(out, "identity {}", ledger_line(r))?;
            }
        }
        if let Some(path) = plan.ledger {
            let file =
                File::create(path).with_context(|| format!("creating {}", path.display()))?;
            symbolic::write_ledger(&results, BufWriter::new(file))?;
        }
        doc.insert("identities".into(), serde_json::to_value(&results)?);
    }

    if let Some(nmax) = plan.oracle {
        ctx.check_ceiling(ModeArg::Exact, nmax)?;
        let mut rows = Vec::new();
        let cases = (1..=nmax)
            .map(|n| ("uniform1", n))
            .chain((2..=nmax).map(|c| ("factors", c)));
        for (labels, n) in cases {
            let g = if labels == "uniform1" {
                uniform_grid(n, Rational::from(1))?
            } else {
                factor_grid(n)?
            };
            let by_theorem = corner_resistance(&g)?;
            let (by_tails, laplacian) = both_routes(&g)?;
            let pass = by_tails == laplacian && by_theorem == laplacian;
            ok &= pass;
            if human {
                let verdict = if pass { "PASS" } else { "FAIL" };
                writeln!(
                    out,
                    "oracle {labels:<8} n={n:<3} {verdict} resistance {laplacian}"
                )?;
            }
            rows.push(json!({
                "labels": labels,
                "n": n,
                "reduction": by_theorem.to_string(),
                "laplacian": laplacian.to_string(),
                "passed": pass,
            }));
        }
        doc.insert("oracle".into(), Value::Array(rows));
    }

    if human {
        writeln!(
            out,
            "{}",
            if ok {
                "all checks passed"
            } else {
                "some checks FAILED"
            }
        )?;
    } else {
        doc.insert("passed".into(), Value::Bool(ok));
        serde_json::to_writer_pretty(&mut out, &Value::Object(doc))?;
        writeln!(out)?;
    }
    Ok(ok)
}

fn harmonic(n: usize, prec: u32) -> Result<BigFloat> {
    let mut h = Rational::new();
    for i in 1..=n {
        h += Rational::from((1, i as u64));
    }
    Ok(BigFloat::from_rational(&h, prec)?)
}

fn resistance(ctx: &Ctx, source: &GridSource, show_harmonic: bool, oracle: bool) -> Result<bool> {
    let g = ctx.grid(source, ModeArg::Exact)?;
    let n = g.n();
    let (value, float) = match (&g, oracle) {
        (AnyGrid::Exact(g), true) => {
            let r = bottom_corner_resistance(g)?;
            let f = BigFloat::from_rational(&r, ctx.prec())?;
            (r.to_string(), f)
        }
        (AnyGrid::Float(_), true) => bail!("the Laplacian route needs exact mode"),
        (AnyGrid::Exact(g), false) => {
            let r = corner_resistance(g)?;
            let f = BigFloat::from_rational(&r, ctx.prec())?;
            (r.to_string(), f)
        }
        (AnyGrid::Float(g), false) => {
            let r = corner_resistance(g)?;
            (r.to_sig_string(VALUE_DIGITS), r)
        }
    };
    let mut out = ctx.out()?;
    let ratio = if show_harmonic {
        Some(trigrid::scalar::Field::div(
            &float,
            &harmonic(n, ctx.prec())?,
        )?)
    } else {
        None
    };
    match ctx.format() {
        Format::Csv => {
            writeln!(out, "n,resistance,decimal")?;
            writeln!(out, "{n},{value},{}", float.to_sig_string(VALUE_DIGITS))?;
            if let Some(ratio) = &ratio {
                writeln!(out, "# EXPLORATORY r_n/H_n = {}", ratio.to_sig_string(12))?;
            }
        }
        Format::Json => {
            let mut doc = json!({
                "n": n,
                "resistance": value,
                "decimal": float.to_sig_string(VALUE_DIGITS),
                "route": if oracle { "laplacian" } else { "tails" },
            });
            if let Some(ratio) = &ratio {
                doc["exploratory_ratio_to_harmonic"] = json!(ratio.to_sig_string(12));
            }
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
    }
    Ok(true)
}

fn isotropy(ctx: &Ctx, cmin: usize, cmax: usize) -> Result<bool> {
    ctx.check_ceiling(ModeArg::Exact, cmax)?;
    let mut out = ctx.out()?;
    let mut ok = true;
    let mut rows = Vec::new();
    for c in cmin.max(1)..=cmax {
        let g = factor_grid(c)?;
        let report = check_symmetry(&g);
        let known: Vec<_> = upper_half_coords(c)
            .into_iter()
            .map(|(r, d)| ((r, d), g.triangle(r, d).expect("in range").clone()))
            .collect();
        let rebuilt = reconstruct_isotropic(c, &known)
            .map(|h| h == g)
            .unwrap_or(false);
        let pass = report.isotropic() && rebuilt;
        ok &= pass;
        rows.push(json!({
            "c": c,
            "vertical": report.vertical,
            "rotational": report.rotational,
            "slide": report.slide,
            "upper_half": known.len(),
            "triangles": g.labels().len(),
            "reconstructed": rebuilt,
        }));
        if ctx.format() == Format::Csv {
            writeln!(
                out,
                "c={c:<3} vertical={} rotational={} slide={} upper-half {}/{} reconstructed={} {}",
                report.vertical,
                report.rotational,
                report.slide,
                known.len(),
                g.labels().len(),
                rebuilt,
                if pass { "PASS" } else { "FAIL" }
            )?;
        }
    }
    if ctx.format() == Format::Json {
        serde_json::to_writer_pretty(&mut out, &json!({ "grids": rows, "passed": ok }))?;
        writeln!(out)?;
    }
    Ok(ok)
}

fn oracle_cmd(ctx: &Ctx, source: &GridSource) -> Result<bool> {
    let AnyGrid::Exact(g) = ctx.grid(source, ModeArg::Exact)? else {
        bail!("the oracle needs exact mode");
    };
    let (by_tails, laplacian) = both_routes(&g)?;
    let pass = by_tails == laplacian;
    let mut out = ctx.out()?;
    match ctx.format() {
        Format::Csv => {
            writeln!(out, "n,reduction,laplacian,match")?;
            writeln!(out, "{},{by_tails},{laplacian},{pass}", g.n())?;
        }
        Format::Json => {
            let doc = json!({
                "n": g.n(),
                "reduction": by_tails.to_string(),
                "laplacian": laplacian.to_string(),
                "match": pass,
            });
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
    }
    Ok(pass)
}
