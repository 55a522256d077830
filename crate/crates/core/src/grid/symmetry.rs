use crate::error::{Error, Result};
use crate::scalar::Real;

use super::{coords, index, triangle_count, TriGrid};

/// The three label symmetries of an isotropic grid.
///
/// Each maps triangle ⟨r,d⟩ onto another triangle and permutes its labels:
///
/// * vertical: ⟨r,d⟩ → ⟨r, r+1−d⟩, (L,R,B) → (R,L,B)
/// * rotational: ⟨r,d⟩ → ⟨n+d−r, n+1−r⟩, (L,R,B) → (B,L,R)
/// * slide: ⟨r,d⟩ → ⟨n+d−r, d⟩, (L,R,B) → (L,B,R)
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    Vertical,
    Rotational,
    Slide,
}

impl Symmetry {
    pub const ALL: [Symmetry; 3] = [Symmetry::Vertical, Symmetry::Rotational, Symmetry::Slide];

    pub fn image(self, n: usize, r: usize, d: usize) -> (usize, usize) {
        match self {
            Symmetry::Vertical => (r, r + 1 - d),
            Symmetry::Rotational => (n + d - r, n + 1 - r),
            Symmetry::Slide => (n + d - r, d),
        }
    }

    /// Labels the image triangle must carry.
    pub fn permute<S: Clone>(self, [l, r, b]: &[S; 3]) -> [S; 3] {
        match self {
            Symmetry::Vertical => [r.clone(), l.clone(), b.clone()],
            Symmetry::Rotational => [b.clone(), l.clone(), r.clone()],
            Symmetry::Slide => [l.clone(), b.clone(), r.clone()],
        }
    }

    /// The grid transformed by this symmetry.
    pub fn apply<S: Real>(self, g: &TriGrid<S>) -> TriGrid<S> {
        let n = g.n();
        let mut labels = g.labels().to_vec();
        for ((r, d), t) in g.iter() {
            let (r2, d2) = self.image(n, r, d);
            labels[index(r2, d2)] = self.permute(t);
        }
        TriGrid::from_raw(n, labels)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryReport<S> {
    pub vertical: bool,
    pub rotational: bool,
    pub slide: bool,
    /// Largest relative label mismatch over all three checks.
    pub max_violation: S,
}

impl<S> SymmetryReport<S> {
    pub fn isotropic(&self) -> bool {
        self.vertical && self.rotational && self.slide
    }
}

fn relative_gap<S: Real>(a: &S, b: &S) -> S {
    let diff = a.sub(b).abs();
    if diff.is_zero() {
        return diff;
    }
    let scale = if a.abs() > b.abs() { a.abs() } else { b.abs() };
    diff.div(&scale).unwrap_or(diff)
}

/// Evaluates the vertical, rotational and slide identities on every
/// triangle.
pub fn check_symmetry<S: Real>(g: &TriGrid<S>) -> SymmetryReport<S> {
    let n = g.n();
    let mut max_violation = g.labels()[0][0].sub(&g.labels()[0][0]);
    let mut holds = [true; 3];
    for (slot, sym) in Symmetry::ALL.iter().enumerate() {
        for ((r, d), t) in g.iter() {
            let (r2, d2) = sym.image(n, r, d);
            let expected = sym.permute(t);
            let actual = &g.labels()[index(r2, d2)];
            for (a, b) in expected.iter().zip(actual.iter()) {
                if !a.approx_eq(b) {
                    holds[slot] = false;
                }
                let gap = relative_gap(a, b);
                if gap > max_violation {
                    max_violation = gap;
                }
            }
        }
    }
    SymmetryReport {
        vertical: holds[0],
        rotational: holds[1],
        slide: holds[2],
        max_violation,
    }
}

/// Coordinates of the upper half of an isotropic c-grid:
/// `d = 1..=⌊(c+2)/3⌋`, `r = 2d−1..=⌊(c+d)/2⌋`.
pub fn upper_half_coords(c: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for d in 1..=c.div_ceil(3) {
        for r in (2 * d - 1)..=((c + d) / 2) {
            out.push((r, d));
        }
    }
    out
}

/// Corner triangles of the d-th rim of an n-grid.
pub fn d_rim_corners(n: usize, d: usize) -> [(usize, usize); 3] {
    [(2 * d - 1, d), (n + 1 - d, d), (n + 1 - d, n + 2 - 2 * d)]
}

/// Completes an isotropic grid from a subset of its triangles by applying
/// the slide, vertical and rotational symmetries until nothing changes.
pub fn reconstruct_isotropic<S: Real>(
    n: usize,
    known: &[((usize, usize), [S; 3])],
) -> Result<TriGrid<S>> {
    let mut slots: Vec<Option<[S; 3]>> = vec![None; triangle_count(n)];
    for ((r, d), t) in known {
        if *d < 1 || d > r || *r > n {
            return Err(Error::OutOfRange {
                n,
                r: *r,
                d: *d,
                e: 0,
            });
        }
        slots[index(*r, *d)] = Some(t.clone());
    }
    let order = [Symmetry::Slide, Symmetry::Vertical, Symmetry::Rotational];
    loop {
        let mut changed = false;
        for sym in order {
            for (r, d) in coords(n) {
                let Some(t) = slots[index(r, d)].clone() else {
                    continue;
                };
                let (r2, d2) = sym.image(n, r, d);
                let target = &mut slots[index(r2, d2)];
                if target.is_none() {
                    *target = Some(sym.permute(&t));
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let missing = slots.iter().filter(|s| s.is_none()).count();
    if missing > 0 {
        return Err(Error::Underdetermined { missing });
    }
    TriGrid::new(n, slots.into_iter().flatten().collect())
}
