use serde::Serialize;

use super::panels::{boundary_ratio, panel_corner, panel_interior};
use super::poly::Var;
use crate::edge_factors::formulas::{delta, f, g, r21, r31, x, y, z};
use crate::edge_factors::FormulaField;
use crate::error::{Error, Result};

/// Values bound to each catalog variable.
#[derive(Clone, Debug)]
pub struct Env<T> {
    pub c: T,
    pub r: T,
    pub d: T,
    pub s: T,
    pub i: T,
    pub m: T,
    pub h: T,
}

impl<T: Clone> Env<T> {
    pub fn from_fn(mut value: impl FnMut(Var) -> T) -> Self {
        Env {
            c: value(Var::C),
            r: value(Var::R),
            d: value(Var::D),
            s: value(Var::S),
            i: value(Var::I),
            m: value(Var::M),
            h: value(Var::H),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum IdentityId {
    A,
    B,
    C,
    D,
    E,
    EOdd,
    F,
    FOdd,
    G,
    GEven,
    H,
    HEven,
    I,
    IRight,
    IHorizontal,
    J,
    K,
    L,
    M,
    N,
}

impl IdentityId {
    pub const ALL: [IdentityId; 20] = [
        IdentityId::A,
        IdentityId::B,
        IdentityId::C,
        IdentityId::D,
        IdentityId::E,
        IdentityId::EOdd,
        IdentityId::F,
        IdentityId::FOdd,
        IdentityId::G,
        IdentityId::GEven,
        IdentityId::H,
        IdentityId::HEven,
        IdentityId::I,
        IdentityId::IRight,
        IdentityId::IHorizontal,
        IdentityId::J,
        IdentityId::K,
        IdentityId::L,
        IdentityId::M,
        IdentityId::N,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::A => "A",
            IdentityId::B => "B",
            IdentityId::C => "C",
            IdentityId::D => "D",
            IdentityId::E => "E",
            IdentityId::EOdd => "E-odd",
            IdentityId::F => "F",
            IdentityId::FOdd => "F-odd",
            IdentityId::G => "G",
            IdentityId::GEven => "G-even",
            IdentityId::H => "H",
            IdentityId::HEven => "H-even",
            IdentityId::I => "I",
            IdentityId::IRight => "I-right",
            IdentityId::IHorizontal => "I-horizontal",
            IdentityId::J => "J",
            IdentityId::K => "K",
            IdentityId::L => "L",
            IdentityId::M => "M",
            IdentityId::N => "N",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::UnknownIdentity(name.to_string()))
    }

    /// Where the identity is used.
    pub fn role(self) -> &'static str {
        match self {
            IdentityId::A => "tail product, base case",
            IdentityId::B => "tail product, inductive step",
            IdentityId::C => "vertical isotropy, second column",
            IdentityId::D => "vertical isotropy, column step",
            IdentityId::E => "vertical isotropy, even row centre",
            IdentityId::EOdd => "vertical isotropy, odd row centre",
            IdentityId::F => "vertical isotropy, even row step",
            IdentityId::FOdd => "vertical isotropy, odd row step",
            IdentityId::G => "slide isotropy, odd c+d centre",
            IdentityId::GEven => "slide isotropy, even c+d centre",
            IdentityId::H => "slide isotropy, odd c+d step",
            IdentityId::HEven => "slide isotropy, even c+d step",
            IdentityId::I => "interior base ratio after one reduction",
            IdentityId::IRight => "interior right ratio after one reduction",
            IdentityId::IHorizontal => "interior horizontal ratio after one reduction",
            IdentityId::J => "top corner ratios after one reduction",
            IdentityId::K => "left boundary ratio after one reduction",
            IdentityId::L => "top corner left label",
            IdentityId::M => "last reduction step",
            IdentityId::N => "tail closed form",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            IdentityId::A => "f(c,1) = g(c)",
            IdentityId::B => "f(c,s+1)/f(c,s) = g(c-s)",
            IdentityId::C => "y(r+1,2)/y(r,2) = 1 - (1/r)/(2(r-2)+3)",
            IdentityId::D => "y(r+1,s+1)/y(r,s+1) = z(r,s+1)/z(r,s)",
            IdentityId::E => "y(2m,m+1)*r21(c,2m,m+1) = 1",
            IdentityId::EOdd => "r21(c,2m+1,m+1) = 1",
            IdentityId::F => "y(2m,m-i)*y(2m,m+2+i)*r21(c,2m,m+2+i)/r21(c,2m,m+1+i) = 1",
            IdentityId::FOdd => {
                "y(2m+1,m+1-i)*y(2m+1,m+2+i)*r21(c,2m+1,m+2+i)/r21(c,2m+1,m+1+i) = 1"
            }
            IdentityId::G => "x(2h+1-d,h+1)*z(h,d) = 1",
            IdentityId::GEven => "x(2h-d,h)*z(h-1,d)*x(2h-d,h+1)*z(h,d) = 1",
            IdentityId::H => "z(h+i+1,d)*z(h-i-1,d)*x(2h+1-d,h+i+2)*x(2h+1-d,h-i) = 1",
            IdentityId::HEven => "x(2h-d,h+i+1)*z(h+i,d)*x(2h-d,h-i)*z(h-i-1,d) = 1",
            IdentityId::I => "BASE(c,r,d)/LEFT(c,r,d) = r31(c-1,r,d)",
            IdentityId::IRight => "RIGHT(c,r,d)/LEFT(c,r,d) = r21(c-1,r,d)",
            IdentityId::IHorizontal => "y(r,d-1)*LEFT(c,r,d)/LEFT(c,r,d-1) = y(r,d)",
            IdentityId::J => "RIGHT(c)/LEFT(c) = 1 and BASE(c)/LEFT(c) = r31(c-1,1,1)",
            IdentityId::K => "LEFT(c,r+1,1)/LEFT(c,r,1) = x(c-1,r+1)",
            IdentityId::L => "LEFT(c) = g(c)",
            IdentityId::M => "f(c,c-1)*D(1,1,r31(1,1,1)) = c/(2c+1)",
            IdentityId::N => "f(c,i)*D(1,1,r31(c-i,1,1))/(c/(2c+1)) = 1/(c-i)",
        }
    }

    pub fn vars(self) -> &'static [Var] {
        match self {
            IdentityId::A | IdentityId::L | IdentityId::M => &[Var::C],
            IdentityId::B => &[Var::C, Var::S],
            IdentityId::C => &[Var::R],
            IdentityId::D => &[Var::R, Var::S],
            IdentityId::E | IdentityId::EOdd => &[Var::C, Var::M],
            IdentityId::F | IdentityId::FOdd => &[Var::C, Var::M, Var::I],
            IdentityId::G | IdentityId::GEven => &[Var::D, Var::H],
            IdentityId::H | IdentityId::HEven => &[Var::D, Var::H, Var::I],
            IdentityId::I | IdentityId::IRight | IdentityId::IHorizontal => {
                &[Var::C, Var::R, Var::D]
            }
            IdentityId::J => &[Var::C],
            IdentityId::K => &[Var::C, Var::R],
            IdentityId::N => &[Var::C, Var::I],
        }
    }

    /// True for entries added to cover the parity cases and edges that the
    /// printed induction leaves implicit.
    pub fn derived(self) -> bool {
        matches!(
            self,
            IdentityId::EOdd
                | IdentityId::FOdd
                | IdentityId::GEven
                | IdentityId::HEven
                | IdentityId::IRight
                | IdentityId::IHorizontal
        )
    }

    /// Each `(lhs, rhs)` pair must agree identically.
    pub fn equations<T: FormulaField>(self, env: &Env<T>) -> Result<Vec<(T, T)>> {
        let k = |v: i64| T::int(v);
        let one = k(1);
        let lin = |a: i64, u: &T, b: i64| k(a).mul(u).add(&k(b));
        let Env {
            c,
            r,
            d,
            s,
            i,
            m,
            h,
            ..
        } = env;
        let eq = match self {
            IdentityId::A => vec![(f(c, &one)?, g(c)?)],
            IdentityId::B => {
                let s1 = lin(1, s, 1);
                vec![(f(c, &s1)?.div(&f(c, s)?)?, g(&c.sub(s))?)]
            }
            IdentityId::C => {
                let two = k(2);
                let rhs = one.sub(&one.div(r)?.div(&lin(2, &r.sub(&two), 3))?);
                vec![(y(&lin(1, r, 1), &two)?.div(&y(r, &two)?)?, rhs)]
            }
            IdentityId::D => {
                let s1 = lin(1, s, 1);
                let lhs = y(&lin(1, r, 1), &s1)?.div(&y(r, &s1)?)?;
                vec![(lhs, z(r, &s1)?.div(&z(r, s)?)?)]
            }
            IdentityId::E => {
                let (row, col) = (lin(2, m, 0), lin(1, m, 1));
                vec![(y(&row, &col)?.mul(&r21(c, &row, &col)?), one)]
            }
            IdentityId::EOdd => vec![(r21(c, &lin(2, m, 1), &lin(1, m, 1))?, one)],
            IdentityId::F | IdentityId::FOdd => {
                let (row, centre) = if self == IdentityId::F {
                    (lin(2, m, 0), m.clone())
                } else {
                    (lin(2, m, 1), lin(1, m, 1))
                };
                // Mirror pair (centre − i, centre + 2 + i) about centre + 1
                // for even rows; (M − i, M + 1 + i) with M = m + 1 for odd.
                let (lo, hi, prev) = if self == IdentityId::F {
                    (
                        centre.sub(i),
                        centre.add(&lin(1, i, 2)),
                        centre.add(&lin(1, i, 1)),
                    )
                } else {
                    (centre.sub(i), centre.add(&lin(1, i, 1)), centre.add(i))
                };
                let lhs = y(&row, &lo)?
                    .mul(&y(&row, &hi)?)
                    .mul(&r21(c, &row, &hi)?)
                    .div(&r21(c, &row, &prev)?)?;
                vec![(lhs, one)]
            }
            IdentityId::G => {
                let cc = lin(2, h, 1).sub(d);
                vec![(x(&cc, &lin(1, h, 1))?.mul(&z(h, d)?), one)]
            }
            IdentityId::GEven => {
                let cc = lin(2, h, 0).sub(d);
                let lhs = x(&cc, h)?
                    .mul(&z(&lin(1, h, -1), d)?)
                    .mul(&x(&cc, &lin(1, h, 1))?)
                    .mul(&z(h, d)?);
                vec![(lhs, one)]
            }
            IdentityId::H => {
                let cc = lin(2, h, 1).sub(d);
                let lhs = z(&h.add(&lin(1, i, 1)), d)?
                    .mul(&z(&h.sub(&lin(1, i, 1)), d)?)
                    .mul(&x(&cc, &h.add(&lin(1, i, 2)))?)
                    .mul(&x(&cc, &h.sub(i))?);
                vec![(lhs, one)]
            }
            IdentityId::HEven => {
                let cc = lin(2, h, 0).sub(d);
                let lhs = x(&cc, &h.add(&lin(1, i, 1)))?
                    .mul(&z(&h.add(i), d)?)
                    .mul(&x(&cc, &h.sub(i))?)
                    .mul(&z(&h.sub(&lin(1, i, 1)), d)?);
                vec![(lhs, one)]
            }
            IdentityId::I | IdentityId::IRight => {
                let p = panel_interior(c, r, d, &one)?;
                let c1 = lin(1, c, -1);
                if self == IdentityId::I {
                    vec![(p.base.div(&p.left)?, r31(&c1, r, d)?)]
                } else {
                    vec![(p.right.div(&p.left)?, r21(&c1, r, d)?)]
                }
            }
            IdentityId::IHorizontal => {
                let dm = lin(1, d, -1);
                let here = panel_interior(c, r, d, &one)?;
                let before = panel_interior(c, r, &dm, &one)?;
                let lhs = y(r, &dm)?.mul(&here.left).div(&before.left)?;
                vec![(lhs, y(r, d)?)]
            }
            IdentityId::J => {
                let p = panel_corner(c)?;
                let c1 = lin(1, c, -1);
                vec![
                    (p.right.div(&p.left)?, one.clone()),
                    (p.base.div(&p.left)?, r31(&c1, &one, &one)?),
                ]
            }
            IdentityId::K => {
                let c1 = lin(1, c, -1);
                vec![(boundary_ratio(c, r)?, x(&c1, &lin(1, r, 1))?)]
            }
            IdentityId::L => vec![(panel_corner(c)?.left, g(c)?)],
            IdentityId::M => {
                let lhs = f(c, &lin(1, c, -1))?.mul(&delta(&one, &one, &r31(&one, &one, &one)?)?);
                vec![(lhs, c.div(&lin(2, c, 1))?)]
            }
            IdentityId::N => {
                let ci = c.sub(i);
                let lhs = f(c, i)?
                    .mul(&delta(&one, &one, &r31(&ci, &one, &one)?)?)
                    .div(&c.div(&lin(2, c, 1))?)?;
                vec![(lhs, one.div(&ci)?)]
            }
        };
        Ok(eq)
    }
}
