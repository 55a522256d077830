//! Row reduction of labelled n-grids.
//!
//! One reduction replaces every upright triangle by its Y, drops the three
//! legs hanging off the grid corners (the tails), joins the remaining
//! boundary legs in series and turns each interior Y back into a triangle.
//! The result is an (n−1)-grid with the same resistances between the
//! remaining terminals.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::edge_factors::display;
use crate::error::{Error, Result};
use crate::grid::{check_symmetry, coords, index, triangle_count, AnyGrid, GridDocument, TriGrid};
use crate::scalar::Real;
use crate::transforms::{delta_y, series, wye, YTriple};

/// Grids with at least this many triangles are processed in parallel.
const PARALLEL_THRESHOLD: usize = 2048;

/// Y legs for every triangle of a source grid, in (r, d) order.
#[derive(Clone, Debug, PartialEq)]
pub struct YLayer<S> {
    n: usize,
    legs: Vec<YTriple<S>>,
}

impl<S: Real> YLayer<S> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn legs(&self, r: usize, d: usize) -> Option<&YTriple<S>> {
        (d >= 1 && d <= r && r <= self.n).then(|| &self.legs[index(r, d)])
    }

    pub fn leg(&self, at: LegRef) -> &S {
        let t = &self.legs[index(at.r, at.d)];
        match at.leg {
            Leg::Y12 => &t.y12,
            Leg::Y4 => &t.y4,
            Leg::Y8 => &t.y8,
        }
    }
}

/// The corner legs removed while reducing an m-grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailRecord<S> {
    pub source_rows: usize,
    pub top: S,
    pub bottom_left: S,
    pub bottom_right: S,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Corner {
    Apex,
    BottomLeft,
    BottomRight,
}

impl<S: Real> TailRecord<S> {
    pub fn at(&self, corner: Corner) -> &S {
        match corner {
            Corner::Apex => &self.top,
            Corner::BottomLeft => &self.bottom_left,
            Corner::BottomRight => &self.bottom_right,
        }
    }
}

/// Every grid and tail from repeated reduction down to the 1-grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionTrace<S> {
    /// T(n), T(n,n−1), …, T(n,1).
    pub grids: Vec<TriGrid<S>>,
    /// Tails from reducing the n-grid, the (n−1)-grid, …, the 1-grid.
    pub tails: Vec<TailRecord<S>>,
}

impl<S: Real> ReductionTrace<S> {
    pub fn top_tails(&self) -> impl Iterator<Item = &S> {
        self.tails.iter().map(|t| &t.top)
    }

    /// Resistance between two distinct corners of the original grid.
    ///
    /// Each corner is joined to the next grid's corner by its tail, and the
    /// 1-grid's Y joins the corners through two of its legs, so the
    /// resistance is the sum of both corners' tails.
    pub fn corner_pair_resistance(&self, a: Corner, b: Corner) -> S {
        let mut tails = self.tails.iter();
        let first = tails.next().expect("a trace has at least one tail");
        let start = first.at(a).add(first.at(b));
        tails.fold(start, |acc, t| acc.add(t.at(a)).add(t.at(b)))
    }

    /// CSV of tails with columns m, top, bottom_left, bottom_right.
    pub fn write_tails_csv<W: Write>(&self, out: W, sig_digits: usize) -> Result<()> {
        write_tails_csv(&self.tails, out, sig_digits)
    }
}

impl<S: Real> ReductionTrace<S>
where
    TriGrid<S>: Into<AnyGrid>,
{
    pub fn documents(&self) -> Vec<GridDocument> {
        self.grids
            .iter()
            .map(|g| g.clone().into().to_document())
            .collect()
    }
}

pub fn write_tails_csv<S: Real, W: Write>(
    tails: &[TailRecord<S>],
    out: W,
    sig_digits: usize,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["m", "top", "bottom_left", "bottom_right"])?;
    for t in tails {
        w.write_record([
            t.source_rows.to_string(),
            display(&t.top, sig_digits),
            display(&t.bottom_left, sig_digits),
            display(&t.bottom_right, sig_digits),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Leg {
    Y12,
    Y4,
    Y8,
}

/// A leg of the Y built from source triangle ⟨r,d⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LegRef {
    pub r: usize,
    pub d: usize,
    pub leg: Leg,
}

const fn at(r: usize, d: usize, leg: Leg) -> LegRef {
    LegRef { r, d, leg }
}

/// How one edge of the reduced grid is formed from source legs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeRule {
    /// Two boundary legs in series.
    Series(LegRef, LegRef),
    /// Y-Δ of an interior Y; `opposite` is the leg facing the new edge.
    Wye {
        opposite: LegRef,
        others: [LegRef; 2],
    },
}

impl EdgeRule {
    fn evaluate<S: Real>(&self, layer: &YLayer<S>) -> Result<S> {
        match *self {
            EdgeRule::Series(a, b) => series(layer.leg(a), layer.leg(b)),
            EdgeRule::Wye { opposite, others } => wye(
                layer.leg(opposite),
                layer.leg(others[0]),
                layer.leg(others[1]),
            ),
        }
    }
}

/// Construction of edge `edge` (1, 2, 3 = left, right, base) of triangle
/// ⟨r,d⟩ in the grid obtained by reducing an n-grid.
pub fn edge_rule(n: usize, r: usize, d: usize, edge: usize) -> Result<EdgeRule> {
    if n < 2 || d < 1 || d > r || r > n - 1 || !(1..=3).contains(&edge) {
        return Err(Error::OutOfRange {
            n: n.saturating_sub(1),
            r,
            d,
            e: edge,
        });
    }
    use Leg::*;
    Ok(match edge {
        1 if d == 1 => EdgeRule::Series(at(r, d, Y8), at(r + 1, d, Y12)),
        1 => EdgeRule::Wye {
            opposite: at(r, d - 1, Y4),
            others: [at(r, d, Y8), at(r + 1, d, Y12)],
        },
        2 if d == r => EdgeRule::Series(at(r, d, Y4), at(r + 1, d + 1, Y12)),
        2 => EdgeRule::Wye {
            opposite: at(r, d + 1, Y8),
            others: [at(r + 1, d + 1, Y12), at(r, d, Y4)],
        },
        _ if r == n - 1 => EdgeRule::Series(at(n, d, Y4), at(n, d + 1, Y8)),
        _ => EdgeRule::Wye {
            opposite: at(r + 2, d + 1, Y12),
            others: [at(r + 1, d + 1, Y8), at(r + 1, d, Y4)],
        },
    })
}

/// Legs of the tails removed from a layer of an n-grid.
pub fn tail_legs(n: usize) -> [LegRef; 3] {
    [at(1, 1, Leg::Y12), at(n, 1, Leg::Y8), at(n, n, Leg::Y4)]
}

fn map_triangles<T, U, F>(items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(usize, &T) -> Result<U> + Sync + Send,
{
    if items.len() >= PARALLEL_THRESHOLD {
        items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect()
    } else {
        items.iter().enumerate().map(|(i, t)| f(i, t)).collect()
    }
}

pub fn delta_y_layer<S: Real>(g: &TriGrid<S>) -> Result<YLayer<S>> {
    let legs = map_triangles(g.labels(), |_, [l, r, b]| delta_y(l, r, b))?;
    Ok(YLayer { n: g.n(), legs })
}

pub fn tails_of<S: Real>(layer: &YLayer<S>) -> TailRecord<S> {
    let [top, bl, br] = tail_legs(layer.n);
    TailRecord {
        source_rows: layer.n,
        top: layer.leg(top).clone(),
        bottom_left: layer.leg(bl).clone(),
        bottom_right: layer.leg(br).clone(),
    }
}

pub fn assemble_reduced<S: Real>(layer: &YLayer<S>) -> Result<TriGrid<S>> {
    let n = layer.n;
    if n < 2 {
        return Err(Error::TooFewRows { n, min: 2 });
    }
    let targets: Vec<(usize, usize)> = coords(n - 1).collect();
    let labels = map_triangles(&targets, |_, &(r, d)| {
        Ok([
            edge_rule(n, r, d, 1)?.evaluate(layer)?,
            edge_rule(n, r, d, 2)?.evaluate(layer)?,
            edge_rule(n, r, d, 3)?.evaluate(layer)?,
        ])
    })?;
    debug_assert_eq!(labels.len(), triangle_count(n - 1));
    Ok(TriGrid::from_raw(n - 1, labels))
}

/// One row reduction of a grid with at least two rows.
pub fn row_reduce<S: Real>(g: &TriGrid<S>) -> Result<(TriGrid<S>, TailRecord<S>)> {
    if g.n() < 2 {
        return Err(Error::TooFewRows { n: g.n(), min: 2 });
    }
    let layer = delta_y_layer(g)?;
    let tails = tails_of(&layer);
    Ok((assemble_reduced(&layer)?, tails))
}

/// Streams the reduction of a grid one row at a time without keeping the
/// intermediate grids.
///
/// Each call to `next` yields the tails of the current grid and replaces it
/// by its reduction; the final call yields the 1-grid's Y.
pub struct Reducer<S> {
    current: Option<TriGrid<S>>,
    finished: bool,
}

impl<S: Real> Reducer<S> {
    pub fn new(g: TriGrid<S>) -> Self {
        Reducer {
            current: Some(g),
            finished: false,
        }
    }

    /// The grid the next step will reduce; `None` once the 1-grid is gone.
    pub fn current(&self) -> Option<&TriGrid<S>> {
        if self.finished {
            None
        } else {
            self.current.as_ref()
        }
    }
}

impl<S: Real> Iterator for Reducer<S> {
    type Item = Result<TailRecord<S>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.finished {
            return None;
        }
        let g = self.current.as_ref()?;
        if g.n() == 1 {
            self.finished = true;
            return Some(delta_y_layer(g).map(|layer| tails_of(&layer)));
        }
        match row_reduce(g) {
            Ok((next, tails)) => {
                self.current = Some(next);
                Some(Ok(tails))
            }
            Err(e) => {
                self.finished = true;
                Some(Err(e))
            }
        }
    }
}

pub fn reduce_fully<S: Real>(g: &TriGrid<S>) -> Result<ReductionTrace<S>> {
    let mut grids = vec![g.clone()];
    let mut tails = Vec::with_capacity(g.n());
    let mut current = g.clone();
    while current.n() > 1 {
        let (next, t) = row_reduce(&current)?;
        tails.push(t);
        grids.push(next.clone());
        current = next;
    }
    tails.push(tails_of(&delta_y_layer(&current)?));
    Ok(ReductionTrace { grids, tails })
}

fn check_tails<S: Real>(t: &TailRecord<S>) -> Result<()> {
    if t.top.approx_eq(&t.bottom_left) && t.top.approx_eq(&t.bottom_right) {
        Ok(())
    } else {
        Err(Error::TailAsymmetry {
            m: t.source_rows,
            detail: format!(
                "top {}, bottom-left {}, bottom-right {}",
                t.top, t.bottom_left, t.bottom_right
            ),
        })
    }
}

/// Top tails t(n,m) for m = n down to 1 of the all-`unit` n-grid.
pub fn tail_sequence<S: Real>(n: usize, unit: S) -> Result<Vec<S>> {
    let g = crate::grid::uniform_grid(n, unit)?;
    Reducer::new(g)
        .map(|t| {
            let t = t?;
            check_tails(&t)?;
            Ok(t.top)
        })
        .collect()
}

/// Resistance between two corners of an isotropic grid, twice the sum of
/// its top tails.
pub fn corner_resistance<S: Real>(g: &TriGrid<S>) -> Result<S> {
    if !check_symmetry(g).isotropic() {
        return Err(Error::NotSymmetric);
    }
    let mut sum: Option<S> = None;
    for t in Reducer::new(g.clone()) {
        let t = t?;
        sum = Some(match sum {
            None => t.top,
            Some(s) => s.add(&t.top),
        });
    }
    let sum = sum.expect("a grid has at least one row");
    Ok(sum.add(&sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{factor_grid, scale_grid, uniform_grid};
    use rug::Rational;
    use std::collections::HashMap;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn all_labels(g: &TriGrid<Rational>) -> Vec<Rational> {
        g.labels().iter().flatten().cloned().collect()
    }

    #[test]
    fn uniform_three_fixture() {
        let g = uniform_grid(3, q(1, 1)).unwrap();
        let layer = delta_y_layer(&g).unwrap();
        assert!(layer
            .legs
            .iter()
            .all(|t| t.y12 == q(1, 3) && t.y4 == q(1, 3) && t.y8 == q(1, 3)));
        let (g2, t3) = row_reduce(&g).unwrap();
        assert_eq!(t3.top, q(1, 3));
        // Boundary edges 2/3, the three interior edges 1.
        for ((r, d), t) in g2.iter() {
            let [l, rt, b] = t;
            assert_eq!(*l, if d == 1 { q(2, 3) } else { q(1, 1) }, "<{r},{d},1>");
            assert_eq!(*rt, if d == r { q(2, 3) } else { q(1, 1) }, "<{r},{d},2>");
            assert_eq!(*b, if r == 2 { q(2, 3) } else { q(1, 1) }, "<{r},{d},3>");
        }
        let layer2 = delta_y_layer(&g2).unwrap();
        let top = layer2.legs(1, 1).unwrap();
        assert_eq!(top.y12, q(4, 21));
        assert_eq!(top.y4, q(2, 7));
        assert_eq!(top.y8, q(2, 7));
        let (g1, t2) = row_reduce(&g2).unwrap();
        assert_eq!(t2.top, q(4, 21));
        assert!(all_labels(&g1).iter().all(|v| *v == q(4, 7)));
        let trace = reduce_fully(&g).unwrap();
        let tops: Vec<_> = trace.top_tails().cloned().collect();
        assert_eq!(tops, vec![q(1, 3), q(4, 21), q(4, 21)]);
        let corner: Vec<_> = trace
            .grids
            .iter()
            .map(|g| g.labels()[0][0].clone())
            .collect();
        assert_eq!(corner, vec![q(1, 1), q(2, 3), q(4, 7)]);
    }

    #[test]
    fn factor_three_fixture() {
        let g = factor_grid(3).unwrap();
        let layer = delta_y_layer(&g).unwrap();
        assert_eq!(tails_of(&layer).top, q(1, 7));
        let reduced = assemble_reduced(&layer).unwrap();
        let expected = scale_grid(&factor_grid(2).unwrap(), &q(15, 14)).unwrap();
        assert_eq!(reduced, expected);
        let trace = reduce_fully(&g).unwrap();
        let tops: Vec<_> = trace.top_tails().cloned().collect();
        assert_eq!(tops, vec![q(1, 7), q(3, 14), q(3, 7)]);
    }

    #[test]
    fn six_grid_tails() {
        let tails = tail_sequence(6, q(1, 1)).unwrap();
        assert_eq!(tails[5], q(1713481, 9399450));
        assert_eq!(tails[4], q(933443973, 10004147950));
        assert_eq!(tail_sequence(1, q(1, 1)).unwrap(), vec![q(1, 3)]);
    }

    #[test]
    fn corner_resistance_examples() {
        assert_eq!(
            corner_resistance(&uniform_grid(1, q(1, 1)).unwrap()).unwrap(),
            q(2, 3)
        );
        assert_eq!(
            corner_resistance(&uniform_grid(3, q(1, 1)).unwrap()).unwrap(),
            q(10, 7)
        );
        let skew = uniform_grid(2, q(1, 1)).unwrap();
        let skew = skew
            .with_edge(1, 1, crate::grid::Edge::Left, q(2, 1))
            .unwrap();
        assert!(matches!(corner_resistance(&skew), Err(Error::NotSymmetric)));
    }

    #[test]
    fn one_grid_cannot_be_row_reduced() {
        let g = uniform_grid(1, q(1, 1)).unwrap();
        assert!(row_reduce(&g).is_err());
        let layer = delta_y_layer(&g).unwrap();
        assert!(assemble_reduced(&layer).is_err());
    }

    #[test]
    fn every_leg_is_used_once() {
        for n in 2..=9 {
            let mut uses: HashMap<LegRef, usize> = HashMap::new();
            for leg in tail_legs(n) {
                *uses.entry(leg).or_default() += 1;
            }
            let (mut series_legs, mut wye_edges) = (0, 0);
            for (r, d) in coords(n - 1) {
                for e in 1..=3 {
                    match edge_rule(n, r, d, e).unwrap() {
                        EdgeRule::Series(a, b) => {
                            series_legs += 2;
                            *uses.entry(a).or_default() += 1;
                            *uses.entry(b).or_default() += 1;
                        }
                        EdgeRule::Wye { opposite, .. } => {
                            wye_edges += 1;
                            // Each interior Y yields three edges, one per
                            // opposite leg.
                            *uses.entry(opposite).or_default() += 1;
                        }
                    }
                }
            }
            assert_eq!(series_legs, 6 * (n - 1));
            assert_eq!(wye_edges, 3 * (n - 1) * (n - 2) / 2);
            assert_eq!(uses.len(), 3 * triangle_count(n));
            assert!(uses.values().all(|&k| k == 1), "n = {n}");
            assert_eq!(3 + series_legs + wye_edges, 3 * triangle_count(n));
        }
    }

    #[test]
    fn wye_edges_share_one_y() {
        // The three edges built from one interior Y use the same three legs.
        let n = 7;
        let mut by_y: HashMap<Vec<LegRef>, usize> = HashMap::new();
        for (r, d) in coords(n - 1) {
            for e in 1..=3 {
                if let EdgeRule::Wye { opposite, others } = edge_rule(n, r, d, e).unwrap() {
                    let mut legs = vec![opposite, others[0], others[1]];
                    legs.sort_by_key(|l| (l.r, l.d, l.leg as u8));
                    *by_y.entry(legs).or_default() += 1;
                }
            }
        }
        assert!(by_y.values().all(|&k| k == 3));
    }

    #[test]
    fn reducer_matches_full_trace() {
        let g = factor_grid(6).unwrap();
        let trace = reduce_fully(&g).unwrap();
        let streamed: Vec<_> = Reducer::new(g).collect::<Result<_>>().unwrap();
        assert_eq!(streamed, trace.tails);
        assert_eq!(trace.grids.len(), 6);
        for (i, grid) in trace.grids.iter().enumerate() {
            assert_eq!(grid.n(), 6 - i);
        }
    }

    #[test]
    fn parallel_and_sequential_agree() {
        // 70 rows put both the layer and the assembly above the threshold.
        let g = uniform_grid(70, q(1, 1)).unwrap().to_float(128).unwrap();
        let layer = delta_y_layer(&g).unwrap();
        let sequential: Vec<_> = g
            .labels()
            .iter()
            .map(|[l, r, b]| delta_y(l, r, b).unwrap())
            .collect();
        assert_eq!(layer.legs, sequential);
    }

    #[test]
    fn tails_csv() {
        let trace = reduce_fully(&uniform_grid(2, q(1, 1)).unwrap()).unwrap();
        let mut buf = Vec::new();
        trace.write_tails_csv(&mut buf, 10).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "m,top,bottom_left,bottom_right\n2,1/3,1/3,1/3\n1,2/9,2/9,2/9\n"
        );
        assert_eq!(trace.documents().len(), 2);
    }
}
