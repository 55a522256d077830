use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rug::ops::Pow;
use rug::{Integer, Rational};

/// The fixed variable universe of the identity catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    C,
    R,
    D,
    S,
    I,
    M,
    H,
}

pub const NVARS: usize = 7;

impl Var {
    pub const ALL: [Var; NVARS] = [Var::C, Var::R, Var::D, Var::S, Var::I, Var::M, Var::H];

    pub fn name(self) -> &'static str {
        match self {
            Var::C => "c",
            Var::R => "r",
            Var::D => "d",
            Var::S => "s",
            Var::I => "i",
            Var::M => "m",
            Var::H => "h",
        }
    }

    pub fn slot(self) -> usize {
        self as usize
    }
}

/// Exponent vector over [`Var::ALL`], ordered graded-lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u16; NVARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; NVARS])
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; NVARS];
        e[v.slot()] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
        Monomial(e)
    }

    /// `self / other` if every exponent stays non-negative.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a = a.checked_sub(*b)?;
        }
        Some(Monomial(e))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a = (*a).min(*b);
        }
        Monomial(e)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with rational coefficients.
///
/// No zero coefficient is ever stored, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = MPoly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one() -> Self {
        Self::constant(Rational::from(1))
    }

    pub fn var(v: Var) -> Self {
        let mut p = MPoly::zero();
        p.add_term(Monomial::var(v), Rational::from(1));
        p
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = MPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::new()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.cmp0() == Ordering::Equal {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().cmp0() == Ordering::Equal {
                    slot.remove();
                }
            }
        }
    }

    /// Largest monomial and its coefficient.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u16 {
        self.terms.keys().map(|m| m.0[v.slot()]).max().unwrap_or(0)
    }

    pub fn vars(&self) -> Vec<Var> {
        Var::ALL
            .into_iter()
            .filter(|&v| self.degree_in(v) > 0)
            .collect()
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, Rational::from(-c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, Rational::from(-c));
        }
        out
    }

    pub fn scale(&self, k: &Rational) -> MPoly {
        if k.cmp0() == Ordering::Equal {
            return MPoly::zero();
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, Rational::from(c * k)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), Rational::from(ca * cb));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut out = MPoly::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `self − c·m·other`, in place.
    fn sub_scaled(&mut self, other: &MPoly, m: &Monomial, c: &Rational) {
        for (mo, co) in &other.terms {
            self.add_term(mo.mul(m), -Rational::from(c * co));
        }
    }

    /// The quotient `self / divisor` when the division is exact.
    pub fn div_exact(&self, divisor: &MPoly) -> Option<MPoly> {
        let (dm, dc) = divisor.leading()?;
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        for v in Var::ALL {
            if divisor.degree_in(v) > self.degree_in(v) {
                return None;
            }
        }
        let (dm, dc) = (*dm, dc.clone());
        let mut rem = self.clone();
        let mut quotient = MPoly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let m = rm.checked_div(&dm)?;
            let c = Rational::from(rc / &dc);
            rem.sub_scaled(divisor, &m, &c);
            quotient.add_term(m, c);
        }
        Some(quotient)
    }

    /// Value at a point given in [`Var::ALL`] order.
    pub fn eval(&self, point: &[Rational; NVARS]) -> Rational {
        let mut acc = Rational::new();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (e, x) in m.0.iter().zip(point.iter()) {
                if *e > 0 {
                    term *= x.clone().pow(*e as i32);
                }
            }
            acc += term;
        }
        acc
    }

    /// Splits `self` into `k · x^a · p` with `p` having integer coprime
    /// coefficients, a positive leading coefficient, and no monomial factor.
    pub fn normalize(&self) -> (Rational, Monomial, MPoly) {
        let Some(first) = self.terms.keys().next() else {
            return (Rational::new(), Monomial::one(), MPoly::zero());
        };
        let content_m = self.terms.keys().fold(*first, |acc, m| acc.gcd(m));
        let mut denom_lcm = Integer::from(1);
        for c in self.terms.values() {
            denom_lcm.lcm_mut(c.denom());
        }
        let mut numer_gcd = Integer::new();
        for c in self.terms.values() {
            let scaled = Rational::from(c * &denom_lcm);
            numer_gcd.gcd_mut(scaled.numer());
        }
        let mut k = Rational::from((numer_gcd, denom_lcm));
        let leading_negative = self
            .leading()
            .map(|(_, c)| c.cmp0() == Ordering::Less)
            .unwrap_or(false);
        if leading_negative {
            k = -k;
        }
        let inv = Rational::from(k.recip_ref());
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                (
                    m.checked_div(&content_m)
                        .expect("content divides every term"),
                    Rational::from(c * &inv),
                )
            })
            .collect();
        (k, content_m, MPoly { terms })
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.cmp0() == Ordering::Less;
            let abs = Rational::from(c.abs_ref());
            if idx == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let unit = abs == 1;
            if !unit || m.is_one() {
                write!(f, "{abs}")?;
            }
            let mut first = unit;
            for v in Var::ALL {
                let e = m.0[v.slot()];
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                f.write_str(v.name())?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    fn c() -> MPoly {
        MPoly::var(Var::C)
    }

    fn r() -> MPoly {
        MPoly::var(Var::R)
    }

    #[test]
    fn graded_lex_order() {
        let c2 = Monomial([2, 0, 0, 0, 0, 0, 0]);
        let cr = Monomial([1, 1, 0, 0, 0, 0, 0]);
        let r3 = Monomial([0, 3, 0, 0, 0, 0, 0]);
        assert!(r3 > c2);
        assert!(c2 > cr);
        assert!(Monomial::var(Var::C) > Monomial::one());
    }

    #[test]
    fn arithmetic_and_display() {
        let p = c().add(&MPoly::constant(q(1))); // c + 1
        let m = c().sub(&MPoly::constant(q(1))); // c − 1
        let prod = p.mul(&m);
        assert_eq!(prod.to_string(), "c^2 - 1");
        assert_eq!(prod.sub(&prod), MPoly::zero());
        assert_eq!(c().mul(&r()).scale(&q(-2)).to_string(), "-2*c*r");
        assert_eq!(p.pow(2).to_string(), "c^2 + 2*c + 1");
    }

    #[test]
    fn exact_division() {
        let p = c().add(&MPoly::constant(q(1)));
        let m = c().sub(&r());
        let prod = p.mul(&m).mul(&m);
        assert_eq!(prod.div_exact(&m).unwrap(), p.mul(&m));
        assert_eq!(prod.div_exact(&p).unwrap(), m.mul(&m));
        assert!(prod.div_exact(&c()).is_none());
        assert!(p.div_exact(&MPoly::zero()).is_none());
    }

    #[test]
    fn normalization() {
        // −(4/3)·c·(c·r − 2) → k = −4/3, content c, primitive c·r − 2.
        let p = c()
            .mul(&c().mul(&r()).sub(&MPoly::constant(q(2))))
            .scale(&Rational::from((-4, 3)));
        let (k, m, prim) = p.normalize();
        assert_eq!(k, Rational::from((-4, 3)));
        assert_eq!(m, Monomial::var(Var::C));
        assert_eq!(prim.to_string(), "c*r - 2");
    }

    #[test]
    fn evaluation() {
        let p = c().mul(&c()).sub(&r().scale(&q(3)));
        let mut point: [Rational; NVARS] = Default::default();
        point[Var::C.slot()] = q(5);
        point[Var::R.slot()] = Rational::from((1, 3));
        assert_eq!(p.eval(&point), q(24));
    }
}
