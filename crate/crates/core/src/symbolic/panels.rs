//! Closed-form labels of a reduced triangle, assuming the factor-grid
//! pattern holds in the grid being reduced.
//!
//! Every function is generic, so the same expression is evaluated exactly
//! at integers and symbolically over [`super::RatFn`].

use crate::edge_factors::formulas::{delta, r21, r31, wye, x, y, z};
use crate::edge_factors::FormulaField;
use crate::error::Result;

/// The three labels of one new triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct Panel<T> {
    pub left: T,
    pub right: T,
    pub base: T,
}

fn k<T: FormulaField>(v: i64) -> T {
    T::int(v)
}

fn plus<T: FormulaField>(a: &T, b: i64) -> T {
    a.add(&k(b))
}

/// The three Y legs of triangle ⟨r,d⟩ with left label `left`, where
/// R = left·r21 and B = left·r31.
pub struct Legs<T> {
    pub y4: T,
    pub y8: T,
    pub y12: T,
}

pub fn legs<T: FormulaField>(left: &T, c: &T, r: &T, d: &T) -> Result<Legs<T>> {
    let one = k::<T>(1);
    let a = r21(c, r, d)?;
    let b = r31(c, r, d)?;
    Ok(Legs {
        y4: left.mul(&delta(&a, &b, &one)?),
        y8: left.mul(&delta(&b, &one, &a)?),
        y12: left.mul(&delta(&one, &a, &b)?),
    })
}

/// New triangle ⟨r,d⟩ for `3 ≤ r ≤ c−2`, `2 ≤ d ≤ r−1`, given the left
/// label `p0` of old triangle ⟨r,d−1⟩.
pub fn panel_interior<T: FormulaField>(c: &T, r: &T, d: &T, p0: &T) -> Result<Panel<T>> {
    let (r1, r2) = (plus(r, 1), plus(r, 2));
    let (dm, d1) = (plus(d, -1), plus(d, 1));
    let p1 = p0.mul(&y(r, d)?);
    let p2 = p1.mul(&x(c, &r1)?).mul(&z(r, d)?);
    let p3 = p2.mul(&y(&r1, &d1)?);
    let p4 = p2.mul(&z(&r1, d)?).mul(&x(c, &r2)?).mul(&y(&r2, &d1)?);
    let p1_next = p1.mul(&y(r, &d1)?);

    let left = wye(
        &legs(p0, c, r, &dm)?.y4,
        &legs(&p1, c, r, d)?.y8,
        &legs(&p2, c, &r1, d)?.y12,
    )?;
    let right = wye(
        &legs(&p1_next, c, r, &d1)?.y8,
        &legs(&p3, c, &r1, &d1)?.y12,
        &legs(&p1, c, r, d)?.y4,
    )?;
    let base = wye(
        &legs(&p4, c, &r2, &d1)?.y12,
        &legs(&p3, c, &r1, &d1)?.y8,
        &legs(&p2, c, &r1, d)?.y4,
    )?;
    Ok(Panel { left, right, base })
}

/// New top triangle ⟨1,1⟩, with the old top left label scaled to 1.
pub fn panel_corner<T: FormulaField>(c: &T) -> Result<Panel<T>> {
    let (one, two, three) = (k::<T>(1), k::<T>(2), k::<T>(3));
    let l21 = x(c, &two)?;
    let l22 = l21.mul(&y(&two, &two)?);
    let l32 = l21.mul(&x(c, &three)?).mul(&y(&three, &two)?);
    let t11 = legs(&one, c, &one, &one)?;
    let t21 = legs(&l21, c, &two, &one)?;
    let t22 = legs(&l22, c, &two, &two)?;
    let t32 = legs(&l32, c, &three, &two)?;
    Ok(Panel {
        left: t11.y8.add(&t21.y12),
        right: t11.y4.add(&t22.y12),
        base: wye(&t32.y12, &t22.y8, &t21.y4)?,
    })
}

/// Left label of new ⟨r,1⟩ with old left label of ⟨r,1⟩ scaled to 1.
pub fn boundary_left<T: FormulaField>(c: &T, r: &T) -> Result<T> {
    let one = k::<T>(1);
    let r1 = plus(r, 1);
    let next = x(c, &r1)?;
    Ok(legs(&one, c, r, &one)?
        .y8
        .add(&legs(&next, c, &r1, &one)?.y12))
}

/// Ratio of new left labels ⟨r+1,1,1⟩/⟨r,1,1⟩ along the left boundary.
pub fn boundary_ratio<T: FormulaField>(c: &T, r: &T) -> Result<T> {
    let one = k::<T>(1);
    let (r1, r2) = (plus(r, 1), plus(r, 2));
    let p1 = x(c, &r1)?;
    let p2 = p1.mul(&x(c, &r2)?);
    let upper = legs(&one, c, r, &one)?
        .y8
        .add(&legs(&p1, c, &r1, &one)?.y12);
    let lower = legs(&p1, c, &r1, &one)?
        .y8
        .add(&legs(&p2, c, &r2, &one)?.y12);
    lower.div(&upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edge_factors::{factor_g, factor_r21, factor_r31, factor_x};
    use crate::grid::{factor_grid, Edge};
    use crate::reduction::row_reduce;
    use rug::Rational;

    fn q(v: usize) -> Rational {
        Rational::from(v)
    }

    #[test]
    fn interior_matches_reduction() {
        let (c, r, d) = (7, 3, 2);
        let (reduced, _) = row_reduce(&factor_grid(c).unwrap()).unwrap();
        let g = factor_grid(c).unwrap();
        let p0 = g.get_edge(r, d - 1, Edge::Left.index()).unwrap();
        let panel = panel_interior(&q(c), &q(r), &q(d), &p0).unwrap();
        assert_eq!(
            panel.left,
            reduced.get_edge(r, d, Edge::Left.index()).unwrap()
        );
        assert_eq!(
            panel.right,
            reduced.get_edge(r, d, Edge::Right.index()).unwrap()
        );
        assert_eq!(
            panel.base,
            reduced.get_edge(r, d, Edge::Base.index()).unwrap()
        );
        let ratio = panel.base.clone() / &panel.left;
        assert_eq!(ratio, factor_r31(c - 1, r, d).unwrap());
        let ratio = panel.right.clone() / &panel.left;
        assert_eq!(ratio, factor_r21(c - 1, r, d).unwrap());
    }

    #[test]
    fn corner_and_boundary() {
        for c in 3..=9 {
            let p = panel_corner(&q(c)).unwrap();
            assert_eq!(p.left, p.right);
            assert_eq!(p.left, factor_g(c).unwrap());
            let b = p.base.clone() / &p.left;
            assert_eq!(b, factor_r31(c - 1, 1, 1).unwrap());
            assert_eq!(boundary_left(&q(c), &q(1)).unwrap(), p.left);
        }
        let ratio = boundary_ratio(&q(8), &q(3)).unwrap();
        assert_eq!(ratio, factor_x(7, 4).unwrap());
    }
}
