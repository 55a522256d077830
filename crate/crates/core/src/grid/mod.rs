//! Labelled n-grids.
//!
//! An n-grid has n rows of upright triangles; triangle ⟨r,d⟩ sits in row
//! `r` (counted from the apex) and diagonal `d`, with `1 ≤ d ≤ r ≤ n`.
//! Every edge of the grid is the left, right or base edge of exactly one
//! upright triangle, so storing three labels per upright triangle covers
//! all `3n(n+1)/2` edges.

mod io;
mod symmetry;

pub use io::{AnyGrid, GridDocument, TriangleDocument};
pub use symmetry::{
    check_symmetry, d_rim_corners, reconstruct_isotropic, upper_half_coords, Symmetry,
    SymmetryReport,
};

use rug::Rational;

use crate::edge_factors::{factor_r21, factor_r31, factor_x, factor_y};
use crate::error::{Error, Result};
use crate::scalar::{BigFloat, Mode, Real};

/// Edge position within an upright triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Edge {
    Left = 1,
    Right = 2,
    Base = 3,
}

impl Edge {
    pub const ALL: [Edge; 3] = [Edge::Left, Edge::Right, Edge::Base];

    pub fn from_index(e: usize) -> Option<Edge> {
        match e {
            1 => Some(Edge::Left),
            2 => Some(Edge::Right),
            3 => Some(Edge::Base),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    fn slot(self) -> usize {
        self as usize - 1
    }
}

/// Position of ⟨r,d⟩ in row-major order.
#[inline]
pub(crate) fn index(r: usize, d: usize) -> usize {
    r * (r - 1) / 2 + (d - 1)
}

/// All coordinates of an n-grid in (r, d) order.
pub fn coords(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).flat_map(|r| (1..=r).map(move |d| (r, d)))
}

pub fn triangle_count(n: usize) -> usize {
    n * (n + 1) / 2
}

#[derive(Clone, Debug, PartialEq)]
pub struct TriGrid<S> {
    n: usize,
    labels: Vec<[S; 3]>,
}

impl<S: Real> TriGrid<S> {
    /// Builds a grid from labels listed in (r, d) order as `[L, R, B]`.
    pub fn new(n: usize, labels: Vec<[S; 3]>) -> Result<Self> {
        if n == 0 {
            return Err(Error::TooFewRows { n, min: 1 });
        }
        if labels.len() != triangle_count(n) {
            return Err(Error::DimensionMismatch {
                left: labels.len(),
                right: triangle_count(n),
            });
        }
        let mode = labels[0][0].mode();
        for label in labels.iter().flatten() {
            if !label.is_positive() {
                return Err(Error::NonPositive {
                    what: "edge label",
                    value: label.to_string(),
                });
            }
            if label.mode() != mode {
                return Err(Error::ModeMismatch {
                    left: mode.name(),
                    right: label.mode().name(),
                });
            }
        }
        Ok(TriGrid { n, labels })
    }

    pub fn from_fn<F>(n: usize, mut label: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Result<[S; 3]>,
    {
        let labels = coords(n)
            .map(|(r, d)| label(r, d))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, labels)
    }

    /// Trusted constructor for labels produced by positivity-preserving
    /// operations.
    pub(crate) fn from_raw(n: usize, labels: Vec<[S; 3]>) -> Self {
        debug_assert_eq!(labels.len(), triangle_count(n));
        TriGrid { n, labels }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.labels[0][0].mode()
    }

    pub fn labels(&self) -> &[[S; 3]] {
        &self.labels
    }

    pub fn triangle(&self, r: usize, d: usize) -> Option<&[S; 3]> {
        if d >= 1 && d <= r && r <= self.n {
            Some(&self.labels[index(r, d)])
        } else {
            None
        }
    }

    pub fn edge(&self, r: usize, d: usize, edge: Edge) -> Option<&S> {
        self.triangle(r, d).map(|t| &t[edge.slot()])
    }

    /// Label ⟨r,d,e⟩ with `e` in {1, 2, 3}.
    pub fn get_edge(&self, r: usize, d: usize, e: usize) -> Result<S> {
        let out_of_range = Error::OutOfRange { n: self.n, r, d, e };
        let edge = Edge::from_index(e).ok_or(out_of_range)?;
        self.edge(r, d, edge)
            .cloned()
            .ok_or(Error::OutOfRange { n: self.n, r, d, e })
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &[S; 3])> {
        coords(self.n).zip(self.labels.iter())
    }

    /// Copy of the grid with one label replaced.
    pub fn with_edge(&self, r: usize, d: usize, edge: Edge, value: S) -> Result<Self> {
        if self.triangle(r, d).is_none() {
            return Err(Error::OutOfRange {
                n: self.n,
                r,
                d,
                e: edge.index(),
            });
        }
        let mut labels = self.labels.clone();
        labels[index(r, d)][edge.slot()] = value;
        Self::new(self.n, labels)
    }

    pub fn map<T: Real, F>(&self, mut f: F) -> Result<TriGrid<T>>
    where
        F: FnMut(&S) -> Result<T>,
    {
        let labels = self
            .labels
            .iter()
            .map(|[l, r, b]| Ok([f(l)?, f(r)?, f(b)?]))
            .collect::<Result<Vec<_>>>()?;
        TriGrid::new(self.n, labels)
    }

    /// Labelwise equality, using the backend tolerance in float mode.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self
                .labels
                .iter()
                .flatten()
                .zip(other.labels.iter().flatten())
                .all(|(a, b)| a.approx_eq(b))
    }

    /// Number of vertices, `(n+1)(n+2)/2`.
    pub fn vertex_count(&self) -> usize {
        (self.n + 1) * (self.n + 2) / 2
    }

    pub fn edge_count(&self) -> usize {
        3 * triangle_count(self.n)
    }
}

impl TriGrid<Rational> {
    pub fn to_float(&self, precision_bits: u32) -> Result<TriGrid<BigFloat>> {
        self.map(|q| BigFloat::from_rational(q, precision_bits))
    }
}

/// The n-grid with every label equal to `value`.
pub fn uniform_grid<S: Real>(n: usize, value: S) -> Result<TriGrid<S>> {
    if n == 0 {
        return Err(Error::TooFewRows { n, min: 1 });
    }
    if !value.is_positive() {
        return Err(Error::NonPositive {
            what: "uniform label",
            value: value.to_string(),
        });
    }
    let triangle = [value.clone(), value.clone(), value];
    Ok(TriGrid::from_raw(n, vec![triangle; triangle_count(n)]))
}

/// The c-grid whose labels satisfy the edge factors with equality and
/// ⟨1,1,1⟩ = 1.
///
/// The left column is built first from `x`, then each row from `y`; right
/// and base labels follow from `r21` and `r31`.
pub fn factor_grid(c: usize) -> Result<TriGrid<Rational>> {
    if c == 0 {
        return Err(Error::TooFewRows { n: c, min: 1 });
    }
    let mut labels = Vec::with_capacity(triangle_count(c));
    let mut column = Rational::from(1);
    for r in 1..=c {
        if r > 1 {
            column *= factor_x(c, r)?;
        }
        let mut left = column.clone();
        for d in 1..=r {
            if d > 1 {
                left *= factor_y(r, d)?;
            }
            let right = Rational::from(&left * &factor_r21(c, r, d)?);
            let base = Rational::from(&left * &factor_r31(c, r, d)?);
            labels.push([left.clone(), right, base]);
        }
    }
    TriGrid::new(c, labels)
}

/// Every label multiplied by `k`.
pub fn scale_grid<S: Real>(g: &TriGrid<S>, k: &S) -> Result<TriGrid<S>> {
    if !k.is_positive() {
        return Err(Error::NonPositive {
            what: "scale factor",
            value: k.to_string(),
        });
    }
    g.map(|v| Ok(v.mul(k)))
}

/// The constant `k` with `g = k·h` labelwise, if there is one.
pub fn proportionality<S: Real>(g: &TriGrid<S>, h: &TriGrid<S>) -> Result<Option<S>> {
    if g.n != h.n {
        return Err(Error::DimensionMismatch {
            left: g.n,
            right: h.n,
        });
    }
    let k = g.labels[0][0].div(&h.labels[0][0])?;
    let proportional = g
        .labels
        .iter()
        .flatten()
        .zip(h.labels.iter().flatten())
        .all(|(a, b)| a.approx_eq(&b.mul(&k)));
    Ok(proportional.then_some(k))
}
