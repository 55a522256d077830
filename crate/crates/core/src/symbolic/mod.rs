//! Exact symbolic verification of the rational-function identities behind
//! the main theorem.
//!
//! Each identity is checked twice: as an identity of rational functions
//! (exact cancellation over ℚ(c,r,d,…)), and at a tensor grid of random
//! integer points. A disagreement between the two is reported, never hidden.

mod catalog;
pub mod panels;
mod poly;
mod ratfn;

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::Rational;
use serde::Serialize;

pub use catalog::{Env, IdentityId};
pub use panels::Panel;
pub use poly::{MPoly, Monomial, Var, NVARS};
pub use ratfn::{with_peak_degree, RatFn};

use crate::edge_factors::formulas;
use crate::error::{Error, Result};
use crate::scalar::Field;

/// Sample values per variable in the numeric check.
pub const SAMPLES_PER_VAR: usize = 10;
/// Inclusive range of the sampled integers.
pub const SAMPLE_RANGE: (i64, i64) = (20, 200);

/// A named function usable in symbolic expressions.
pub struct Builtin {
    pub name: &'static str,
    pub arity: usize,
    pub eval: fn(&[RatFn]) -> Result<RatFn>,
}

/// The edge-factor functions over [`RatFn`].
pub fn symbolic_builtins() -> Vec<Builtin> {
    vec![
        Builtin {
            name: "D",
            arity: 3,
            eval: |a| formulas::delta(&a[0], &a[1], &a[2]),
        },
        Builtin {
            name: "Y",
            arity: 3,
            eval: |a| formulas::wye(&a[0], &a[1], &a[2]),
        },
        Builtin {
            name: "x",
            arity: 2,
            eval: |a| formulas::x(&a[0], &a[1]),
        },
        Builtin {
            name: "y",
            arity: 2,
            eval: |a| formulas::y(&a[0], &a[1]),
        },
        Builtin {
            name: "z",
            arity: 2,
            eval: |a| formulas::z(&a[0], &a[1]),
        },
        Builtin {
            name: "r21",
            arity: 3,
            eval: |a| formulas::r21(&a[0], &a[1], &a[2]),
        },
        Builtin {
            name: "r31",
            arity: 3,
            eval: |a| formulas::r31(&a[0], &a[1], &a[2]),
        },
        Builtin {
            name: "f",
            arity: 2,
            eval: |a| formulas::f(&a[0], &a[1]),
        },
        Builtin {
            name: "g",
            arity: 1,
            eval: |a| formulas::g(&a[0]),
        },
    ]
}

/// Calls a builtin by name, checking arity.
pub fn call_builtin(name: &str, args: &[RatFn]) -> Result<RatFn> {
    let b = symbolic_builtins()
        .into_iter()
        .find(|b| b.name == name)
        .ok_or_else(|| Error::UnknownIdentity(name.to_string()))?;
    if b.arity != args.len() {
        return Err(Error::DimensionMismatch {
            left: b.arity,
            right: args.len(),
        });
    }
    (b.eval)(args)
}

#[derive(Clone, Debug, Serialize)]
pub struct ProofResult {
    pub name: &'static str,
    pub role: &'static str,
    pub statement: &'static str,
    pub derived: bool,
    pub vars: Vec<&'static str>,
    /// Largest total degree of any intermediate rational function.
    pub degree: u32,
    /// lhs − rhs cancels to zero in ℚ(vars).
    pub exact: bool,
    /// Every sampled point where both sides are defined agrees.
    pub sampled: bool,
    pub points: usize,
    pub skipped: usize,
    pub elapsed_ms: f64,
    /// Non-zero residual numerator, when the exact check fails.
    pub residual: Option<String>,
    pub error: Option<String>,
}

impl ProofResult {
    pub fn passed(&self) -> bool {
        self.exact && self.sampled && self.error.is_none()
    }

    /// The exact and sampled checks reached different verdicts.
    pub fn disagreement(&self) -> bool {
        self.error.is_none() && self.exact != self.sampled
    }
}

fn exact_check(id: IdentityId) -> Result<(bool, u32, Option<String>)> {
    let env = Env::from_fn(RatFn::var);
    let mut ok = true;
    let mut residual = None;
    let (equations, degree) = with_peak_degree(|| id.equations(&env));
    for (lhs, rhs) in equations? {
        let diff = lhs.sub(&rhs);
        if !diff.is_zero() {
            ok = false;
            residual.get_or_insert_with(|| diff.to_string());
        }
    }
    Ok((ok, degree, residual))
}

/// Integer sample points for `vars`, reproducible per identity.
pub fn sample_values(id: IdentityId) -> Vec<i64> {
    let seed = 0x7269_6472 ^ (id as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(SAMPLES_PER_VAR);
    while values.len() < SAMPLES_PER_VAR {
        let v = rng.gen_range(SAMPLE_RANGE.0..=SAMPLE_RANGE.1);
        if !values.contains(&v) {
            values.push(v);
        }
    }
    values
}

fn sampled_check(id: IdentityId) -> Result<(bool, usize, usize)> {
    let vars = id.vars();
    let values = sample_values(id);
    let total = SAMPLES_PER_VAR.pow(vars.len() as u32);
    let (mut points, mut skipped, mut ok) = (0, 0, true);
    for index in 0..total {
        let mut assigned = [0i64; NVARS];
        let mut rest = index;
        for v in vars {
            assigned[v.slot()] = values[rest % SAMPLES_PER_VAR];
            rest /= SAMPLES_PER_VAR;
        }
        let env = Env::from_fn(|v| Rational::from(assigned[v.slot()]));
        match id.equations(&env) {
            Ok(eqs) => {
                points += 1;
                if eqs.iter().any(|(l, r)| l != r) {
                    ok = false;
                }
            }
            Err(Error::DivisionByZero) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok((ok && points > 0, points, skipped))
}

pub fn verify(id: IdentityId) -> ProofResult {
    let start = Instant::now();
    let mut result = ProofResult {
        name: id.name(),
        role: id.role(),
        statement: id.statement(),
        derived: id.derived(),
        vars: id.vars().iter().map(|v| v.name()).collect(),
        degree: 0,
        exact: false,
        sampled: false,
        points: 0,
        skipped: 0,
        elapsed_ms: 0.0,
        residual: None,
        error: None,
    };
    match exact_check(id) {
        Ok((ok, degree, residual)) => {
            result.exact = ok;
            result.degree = degree;
            result.residual = residual;
        }
        Err(e) => result.error = Some(e.to_string()),
    }
    match sampled_check(id) {
        Ok((ok, points, skipped)) => {
            result.sampled = ok;
            result.points = points;
            result.skipped = skipped;
        }
        Err(e) => {
            result.error.get_or_insert(e.to_string());
        }
    }
    result.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    result
}

/// Verifies one catalog entry by name (case-insensitive).
pub fn verify_identity(name: &str) -> Result<ProofResult> {
    Ok(verify(IdentityId::parse(name)?))
}

/// Verifies every catalog entry, in catalog order.
pub fn verify_all() -> Vec<ProofResult> {
    IdentityId::ALL.par_iter().map(|&id| verify(id)).collect()
}

/// Writes results as a JSON array.
pub fn write_ledger<W: Write>(results: &[ProofResult], out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, results)?;
    Ok(())
}
