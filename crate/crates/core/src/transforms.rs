//! Series, parallel, Δ-Y and Y-Δ equivalences.
//!
//! Orientation follows the upright-triangle convention: `delta(x, y, z)` is
//! the Y leg attached to the vertex shared by the edges labelled `x` and
//! `y`, and `wye(a, b, c)` is the triangle edge opposite the leg `a`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

fn positive<S: Real>(what: &'static str, value: &S) -> Result<()> {
    if value.is_positive() {
        Ok(())
    } else {
        Err(Error::NonPositive {
            what,
            value: value.to_string(),
        })
    }
}

/// Legs of the Y that replaces an upright triangle, named by clock position.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct YTriple<S> {
    pub y12: S,
    pub y4: S,
    pub y8: S,
}

/// Δ(x,y,z) = xy/(x+y+z).
pub fn delta<S: Real>(x: &S, y: &S, z: &S) -> Result<S> {
    positive("delta argument", x)?;
    positive("delta argument", y)?;
    positive("delta argument", z)?;
    x.mul(y).div(&x.add(y).add(z))
}

/// Y(a,b,c) = (ab+bc+ca)/a.
pub fn wye<S: Real>(a: &S, b: &S, c: &S) -> Result<S> {
    positive("wye argument", a)?;
    positive("wye argument", b)?;
    positive("wye argument", c)?;
    a.mul(b).add(&b.mul(c)).add(&c.mul(a)).div(a)
}

/// The Y equivalent of a triangle with left, right and base labels.
///
/// y12 = Δ(L,R,B), y4 = Δ(R,B,L), y8 = Δ(B,L,R). The perimeter is formed
/// once and shared by the three legs.
pub fn delta_y<S: Real>(left: &S, right: &S, base: &S) -> Result<YTriple<S>> {
    positive("triangle edge", left)?;
    positive("triangle edge", right)?;
    positive("triangle edge", base)?;
    let perimeter = left.add(right).add(base);
    Ok(YTriple {
        y12: left.mul(right).div(&perimeter)?,
        y4: right.mul(base).div(&perimeter)?,
        y8: base.mul(left).div(&perimeter)?,
    })
}

/// Inverse of [`delta_y`]: returns (L, R, B).
pub fn y_delta<S: Real>(legs: &YTriple<S>) -> Result<(S, S, S)> {
    let YTriple { y12, y4, y8 } = legs;
    Ok((wye(y4, y8, y12)?, wye(y8, y12, y4)?, wye(y12, y4, y8)?))
}

pub fn series<S: Real>(a: &S, b: &S) -> Result<S> {
    positive("series argument", a)?;
    positive("series argument", b)?;
    Ok(a.add(b))
}

pub fn parallel<S: Real>(a: &S, b: &S) -> Result<S> {
    positive("parallel argument", a)?;
    positive("parallel argument", b)?;
    a.mul(b).div(&a.add(b))
}
