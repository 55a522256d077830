use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rug::ops::Pow;
use rug::Rational;

use super::poly::{MPoly, Var, NVARS};
use crate::edge_factors::FormulaField;
use crate::error::{Error, Result};
use crate::scalar::Field;

thread_local! {
    static PEAK_DEGREE: Cell<u32> = const { Cell::new(0) };
}

fn note_degree(f: &RatFn) {
    let d = f.total_degree();
    PEAK_DEGREE.with(|p| p.set(p.get().max(d)));
}

/// Runs `f` and returns the largest total degree of any operand or result
/// of a [`RatFn`] operation performed on this thread meanwhile.
pub fn with_peak_degree<R>(f: impl FnOnce() -> R) -> (R, u32) {
    let saved = PEAK_DEGREE.with(|p| p.replace(0));
    let out = f();
    let peak = PEAK_DEGREE.with(|p| p.replace(saved.max(p.get())));
    (out, peak)
}

/// Multiset of primitive polynomials.
type Factors = BTreeMap<MPoly, u32>;

/// A rational function kept as `coeff · Π num / Π den`.
///
/// Every factor is primitive (see [`MPoly::normalize`]) and no factor
/// appears in both multisets, so zero is exactly `coeff == 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFn {
    coeff: Rational,
    num: Factors,
    den: Factors,
}

fn push(factors: &mut Factors, p: MPoly, k: u32) {
    if k > 0 {
        *factors.entry(p).or_insert(0) += k;
    }
}

/// Removes one copy of `p`.
fn take(factors: &mut Factors, p: &MPoly) {
    if let Some(k) = factors.get_mut(p) {
        *k -= 1;
        if *k == 0 {
            factors.remove(p);
        }
    }
}

fn expand(factors: &Factors) -> MPoly {
    factors
        .iter()
        .fold(MPoly::one(), |acc, (p, k)| acc.mul(&p.pow(*k)))
}

fn degree(factors: &Factors) -> u32 {
    factors.iter().map(|(p, k)| p.total_degree() * k).sum()
}

impl RatFn {
    pub fn zero() -> Self {
        Self::constant(Rational::new())
    }

    pub fn constant(c: Rational) -> Self {
        RatFn {
            coeff: c,
            num: Factors::new(),
            den: Factors::new(),
        }
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(&MPoly::var(v))
    }

    pub fn from_poly(p: &MPoly) -> Self {
        let mut out = RatFn::constant(Rational::from(1));
        out.absorb(p, true);
        out
    }

    /// Multiplies (or divides) in a polynomial, splitting off its content.
    fn absorb(&mut self, p: &MPoly, numerator: bool) {
        if p.is_zero() {
            debug_assert!(numerator);
            *self = RatFn::zero();
            return;
        }
        let (k, content, prim) = p.normalize();
        let side = if numerator {
            &mut self.num
        } else {
            &mut self.den
        };
        for v in Var::ALL {
            push(side, MPoly::var(v), content.0[v.slot()] as u32);
        }
        match prim.as_constant() {
            Some(_) => {}
            None => push(side, prim, 1),
        }
        if numerator {
            self.coeff *= k;
        } else {
            self.coeff /= k;
        }
    }

    /// Cancels factors common to numerator and denominator, including a
    /// denominator factor that divides a larger numerator factor (or the
    /// reverse).
    fn cancel(&mut self) {
        if self.coeff.cmp0() == Ordering::Equal {
            self.num.clear();
            self.den.clear();
            return;
        }
        self.cancel_identical();
        while let Some((n, d, quotient, numerator_wins)) = self.find_divisible() {
            take(&mut self.num, &n);
            take(&mut self.den, &d);
            self.absorb(&quotient, numerator_wins);
            self.cancel_identical();
        }
    }

    fn find_divisible(&self) -> Option<(MPoly, MPoly, MPoly, bool)> {
        for n in self.num.keys() {
            for d in self.den.keys() {
                let (dn, dd) = (n.total_degree(), d.total_degree());
                if dn > dd {
                    if let Some(q) = n.div_exact(d) {
                        return Some((n.clone(), d.clone(), q, true));
                    }
                } else if dd > dn {
                    if let Some(q) = d.div_exact(n) {
                        return Some((n.clone(), d.clone(), q, false));
                    }
                }
            }
        }
        None
    }

    fn cancel_identical(&mut self) {
        let shared: Vec<MPoly> = self
            .num
            .keys()
            .filter(|p| self.den.contains_key(*p))
            .cloned()
            .collect();
        for p in shared {
            let a = self.num[&p];
            let b = self.den[&p];
            let m = a.min(b);
            for (side, k) in [(&mut self.num, a), (&mut self.den, b)] {
                if k == m {
                    side.remove(&p);
                } else {
                    side.insert(p.clone(), k - m);
                }
            }
        }
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn numerator(&self) -> MPoly {
        expand(&self.num).scale(&self.coeff)
    }

    pub fn denominator(&self) -> MPoly {
        expand(&self.den)
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_empty() && self.den.is_empty()
    }

    pub fn as_constant(&self) -> Option<&Rational> {
        self.is_constant().then_some(&self.coeff)
    }

    /// Larger of the numerator and denominator total degrees.
    pub fn total_degree(&self) -> u32 {
        degree(&self.num).max(degree(&self.den))
    }

    pub fn vars(&self) -> Vec<Var> {
        Var::ALL
            .into_iter()
            .filter(|&v| {
                self.num
                    .keys()
                    .chain(self.den.keys())
                    .any(|p| p.degree_in(v) > 0)
            })
            .collect()
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        out.coeff = -out.coeff;
        out
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFn {
            coeff: Rational::from(self.coeff.recip_ref()),
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }

    pub fn eval(&self, point: &[Rational; NVARS]) -> Result<Rational> {
        let mut value = self.coeff.clone();
        for (p, k) in &self.num {
            value *= p.eval(point).pow(*k as i32);
        }
        for (p, k) in &self.den {
            let v = p.eval(point);
            if v.cmp0() == Ordering::Equal {
                return Err(Error::DivisionByZero);
            }
            value /= v.pow(*k as i32);
        }
        Ok(value)
    }

    fn sum(&self, other: &RatFn) -> RatFn {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        // Shared numerator factors G; denominators over their lcm L.
        let mut common = Factors::new();
        for (p, a) in &self.num {
            if let Some(b) = other.num.get(p) {
                push(&mut common, p.clone(), (*a).min(*b));
            }
        }
        let mut lcm = self.den.clone();
        for (p, b) in &other.den {
            let e = lcm.entry(p.clone()).or_insert(0);
            *e = (*e).max(*b);
        }
        let rest = |f: &Factors, remove: &Factors| {
            let mut out = Factors::new();
            for (p, k) in f {
                push(&mut out, p.clone(), k - remove.get(p).copied().unwrap_or(0));
            }
            out
        };
        let lift = |den: &Factors| rest(&lcm, den);
        let a = expand(&rest(&self.num, &common))
            .mul(&expand(&lift(&self.den)))
            .scale(&self.coeff);
        let b = expand(&rest(&other.num, &common))
            .mul(&expand(&lift(&other.den)))
            .scale(&other.coeff);
        let mut p = a.add(&b);
        if p.is_zero() {
            return RatFn::zero();
        }
        let mut den = lcm;
        let keys: Vec<MPoly> = den.keys().cloned().collect();
        for f in keys {
            while den.get(&f).copied().unwrap_or(0) > 0 {
                match p.div_exact(&f) {
                    Some(quotient) => {
                        p = quotient;
                        let k = den.get_mut(&f).expect("present");
                        *k -= 1;
                        if *k == 0 {
                            den.remove(&f);
                        }
                    }
                    None => break,
                }
            }
        }
        let mut out = RatFn {
            coeff: Rational::from(1),
            num: common,
            den,
        };
        out.absorb(&p, true);
        out.cancel();
        out
    }
}

impl Field for RatFn {
    fn add(&self, rhs: &Self) -> Self {
        let out = self.sum(rhs);
        note_degree(self);
        note_degree(rhs);
        note_degree(&out);
        out
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return RatFn::zero();
        }
        let mut out = self.clone();
        out.coeff *= &rhs.coeff;
        for (p, k) in &rhs.num {
            push(&mut out.num, p.clone(), *k);
        }
        for (p, k) in &rhs.den {
            push(&mut out.den, p.clone(), *k);
        }
        out.cancel();
        note_degree(self);
        note_degree(rhs);
        note_degree(&out);
        out
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.recip()?))
    }

    fn is_zero(&self) -> bool {
        self.coeff.cmp0() == Ordering::Equal
    }
}

impl FormulaField for RatFn {
    fn int(value: i64) -> Self {
        RatFn::constant(Rational::from(value))
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |factors: &Factors| {
            factors
                .iter()
                .map(|(p, k)| {
                    let base = if p.len() == 1 {
                        p.to_string()
                    } else {
                        format!("({p})")
                    };
                    if *k > 1 {
                        format!("{base}^{k}")
                    } else {
                        base
                    }
                })
                .collect::<Vec<_>>()
                .join("*")
        };
        if self.num.is_empty() {
            write!(f, "{}", self.coeff)?;
        } else if self.coeff == 1 {
            f.write_str(&side(&self.num))?;
        } else if self.coeff == -1 {
            write!(f, "-{}", side(&self.num))?;
        } else {
            write!(f, "{}*{}", self.coeff, side(&self.num))?;
        }
        if !self.den.is_empty() {
            write!(f, " / {}", side(&self.den))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: Var) -> RatFn {
        RatFn::var(x)
    }

    fn k(n: i64) -> RatFn {
        RatFn::int(n)
    }

    #[test]
    fn cancellation_is_structural() {
        let c = v(Var::C);
        let a = c.add(&k(1)).div(&c.sub(&k(1))).unwrap();
        let b = c.sub(&k(1)).div(&c.add(&k(1))).unwrap();
        assert_eq!(a.mul(&b), k(1));
        assert!(a.sub(&a).is_zero());
        assert!(k(1).div(&k(0)).is_err());
    }

    #[test]
    fn sums_reduce_to_lowest_terms() {
        // 1/(c−1) − 1/(c+1) = 2/(c²−1)
        let c = v(Var::C);
        let lhs = k(1)
            .div(&c.sub(&k(1)))
            .unwrap()
            .sub(&k(1).div(&c.add(&k(1))).unwrap());
        let rhs = k(2).div(&c.mul(&c).sub(&k(1))).unwrap();
        assert!(lhs.sub(&rhs).is_zero());
        // (c²−1)/(c−1) collapses to c+1.
        let q = c.mul(&c).sub(&k(1)).div(&c.sub(&k(1))).unwrap();
        assert_eq!(q, c.add(&k(1)));
        assert_eq!(q.total_degree(), 1);
    }

    #[test]
    fn content_is_split_off() {
        let c = v(Var::C);
        let r = v(Var::R);
        let p = c.mul(&r).mul(&k(-6)).add(&c.mul(&k(4)));
        assert_eq!(p.coeff(), &Rational::from(-2));
        assert_eq!(p.to_string(), "-2*(3*r - 2)*c");
        assert_eq!(p.vars(), vec![Var::C, Var::R]);
    }

    #[test]
    fn evaluation_matches_rational_arithmetic() {
        let c = v(Var::C);
        let r = v(Var::R);
        let e = c.div(&r.sub(&k(2))).unwrap().add(&r);
        let mut point: [Rational; NVARS] = Default::default();
        point[Var::C.slot()] = Rational::from(7);
        point[Var::R.slot()] = Rational::from(5);
        assert_eq!(e.eval(&point).unwrap(), Rational::from((22, 3)));
        point[Var::R.slot()] = Rational::from(2);
        assert!(e.eval(&point).is_err());
    }

    #[test]
    fn expanded_accessors() {
        let c = v(Var::C);
        let e = k(3).div(&c.mul(&c).add(&c)).unwrap();
        assert_eq!(e.numerator().to_string(), "3");
        assert_eq!(e.denominator().to_string(), "c^2 + c");
    }
}
