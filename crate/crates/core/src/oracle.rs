//! Effective resistance from the weighted graph Laplacian, solved exactly.
//!
//! This is deliberately independent of the reduction code: it places the
//! grid on the lattice, assembles the Laplacian and eliminates.

use std::collections::HashMap;

use rug::Rational;

use crate::error::{Error, Result};
use crate::grid::TriGrid;
use crate::scalar::Field;

/// A lattice point `(x, y)`; vertices of an n-grid have `0 ≤ y ≤ n` and
/// `x = 2a + y` with `0 ≤ a ≤ n − y`.
pub type Point = (i64, i64);

#[derive(Clone, Debug, PartialEq)]
pub struct ResistorGraph {
    pub vertices: Vec<Point>,
    pub edges: Vec<(usize, usize, Rational)>,
    lookup: HashMap<Point, usize>,
}

impl ResistorGraph {
    pub fn vertex(&self, p: Point) -> Option<usize> {
        self.lookup.get(&p).copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|(a, b, _)| *a == v || *b == v)
            .count()
    }
}

/// Apex, bottom-left and bottom-right corners of an n-grid.
pub fn corner_vertices(n: usize) -> [Point; 3] {
    let n = n as i64;
    [(n, n), (0, 0), (2 * n, 0)]
}

/// Places each label ⟨r,d,e⟩ on its edge of the lattice.
///
/// Triangle ⟨r,d⟩ has its base at height `h = n − r`, base corners
/// `(h + 2(d−1), h)` and two to the right, and apex one up between them.
pub fn build_graph(g: &TriGrid<Rational>) -> ResistorGraph {
    let n = g.n() as i64;
    let mut vertices = Vec::new();
    let mut lookup = HashMap::new();
    for y in 0..=n {
        for a in 0..=(n - y) {
            let p = (2 * a + y, y);
            lookup.insert(p, vertices.len());
            vertices.push(p);
        }
    }
    let id = |p: Point| lookup[&p];
    let mut edges = Vec::with_capacity(g.edge_count());
    for ((r, d), [left, right, base]) in g.iter() {
        let h = n - r as i64;
        let x = h + 2 * (d as i64 - 1);
        let (bl, br, apex) = ((x, h), (x + 2, h), (x + 1, h + 1));
        edges.push((id(bl), id(apex), left.clone()));
        edges.push((id(apex), id(br), right.clone()));
        edges.push((id(bl), id(br), base.clone()));
    }
    ResistorGraph {
        vertices,
        edges,
        lookup,
    }
}

/// Solves `A·x = b` over the rationals by Gaussian elimination.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Result<Vec<Rational>> {
    let m = b.len();
    for col in 0..m {
        let pivot = (col..m)
            .find(|&row| !a[row][col].is_zero())
            .ok_or(Error::Singular)?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..m {
            if a[row][col].is_zero() {
                continue;
            }
            let factor = Rational::from(&a[row][col] / &a[col][col]);
            let (upper, lower) = a.split_at_mut(row);
            for (dst, src) in lower[0][col..m].iter_mut().zip(&upper[col][col..m]) {
                *dst -= Rational::from(&factor * src);
            }
            let delta = Rational::from(&factor * &b[col]);
            b[row] -= delta;
        }
    }
    let mut x = vec![Rational::new(); m];
    for row in (0..m).rev() {
        let mut acc = b[row].clone();
        for k in row + 1..m {
            acc -= Rational::from(&a[row][k] * &x[k]);
        }
        x[row] = acc / &a[row][row];
    }
    Ok(x)
}

/// Effective resistance between vertices `u` and `v`.
///
/// Grounds `v`, solves the reduced Laplacian system for a unit current
/// injected at `u`, and returns the potential at `u`.
pub fn effective_resistance(graph: &ResistorGraph, u: usize, v: usize) -> Result<Rational> {
    let count = graph.vertices.len();
    if u == v || u >= count || v >= count {
        return Err(Error::Domain {
            function: "effective_resistance",
            args: format!("({u},{v})"),
        });
    }
    let reduced = |w: usize| if w < v { w } else { w - 1 };
    let m = count - 1;
    let mut lap = vec![vec![Rational::new(); m]; m];
    for (a, b, resistance) in &graph.edges {
        if resistance.cmp0() != std::cmp::Ordering::Greater {
            return Err(Error::NonPositive {
                what: "resistance",
                value: resistance.to_string(),
            });
        }
        let conductance = Rational::from(resistance.recip_ref());
        if *a != v {
            lap[reduced(*a)][reduced(*a)] += &conductance;
        }
        if *b != v {
            lap[reduced(*b)][reduced(*b)] += &conductance;
        }
        if *a != v && *b != v {
            lap[reduced(*a)][reduced(*b)] -= &conductance;
            lap[reduced(*b)][reduced(*a)] -= &conductance;
        }
    }
    let mut rhs = vec![Rational::new(); m];
    rhs[reduced(u)] = Rational::from(1);
    let phi = solve(lap, rhs)?;
    Ok(phi[reduced(u)].clone())
}

/// Resistance between the two bottom corners of a grid.
pub fn bottom_corner_resistance(g: &TriGrid<Rational>) -> Result<Rational> {
    let graph = build_graph(g);
    let [_, bl, br] = corner_vertices(g.n());
    let u = graph.vertex(bl).expect("corner is a vertex");
    let v = graph.vertex(br).expect("corner is a vertex");
    effective_resistance(&graph, u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{factor_grid, uniform_grid};

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn graph_sizes() {
        let g = build_graph(&uniform_grid(1, q(1, 1)).unwrap());
        assert_eq!((g.vertices.len(), g.edges.len()), (3, 3));
        let g = build_graph(&uniform_grid(3, q(1, 1)).unwrap());
        assert_eq!((g.vertices.len(), g.edges.len()), (10, 18));
        let g = build_graph(&factor_grid(2).unwrap());
        assert_eq!((g.vertices.len(), g.edges.len()), (6, 9));
        let mut labels: Vec<_> = g.edges.iter().map(|e| e.2.clone()).collect();
        labels.sort();
        let mut expected = vec![q(1, 1); 6];
        expected.extend(vec![q(3, 1); 3]);
        assert_eq!(labels, expected);
    }

    #[test]
    fn edges_are_distinct_unit_segments() {
        for n in 1..=6 {
            let g = build_graph(&uniform_grid(n, q(1, 1)).unwrap());
            let mut seen = std::collections::HashSet::new();
            for (a, b, _) in &g.edges {
                let (pa, pb) = (g.vertices[*a], g.vertices[*b]);
                let (dx, dy) = ((pa.0 - pb.0).abs(), (pa.1 - pb.1).abs());
                assert!((dx, dy) == (1, 1) || (dx, dy) == (2, 0));
                assert!(seen.insert((*a.min(b), *a.max(b))));
            }
        }
    }

    #[test]
    fn corners_are_the_degree_two_vertices() {
        for n in 1..=5 {
            let g = build_graph(&uniform_grid(n, q(1, 1)).unwrap());
            let mut two: Vec<Point> = (0..g.vertices.len())
                .filter(|&v| g.degree(v) == 2)
                .map(|v| g.vertices[v])
                .collect();
            two.sort();
            let mut corners = corner_vertices(n).to_vec();
            corners.sort();
            assert_eq!(two, corners);
        }
        assert_eq!(corner_vertices(3), [(3, 3), (0, 0), (6, 0)]);
    }

    #[test]
    fn small_resistances() {
        assert_eq!(
            bottom_corner_resistance(&uniform_grid(1, q(1, 1)).unwrap()).unwrap(),
            q(2, 3)
        );
        assert_eq!(
            bottom_corner_resistance(&uniform_grid(3, q(1, 1)).unwrap()).unwrap(),
            q(10, 7)
        );
    }

    #[test]
    fn grounding_is_symmetric() {
        let graph = build_graph(&factor_grid(4).unwrap());
        let (u, v) = (0, graph.vertices.len() - 1);
        assert_eq!(
            effective_resistance(&graph, u, v).unwrap(),
            effective_resistance(&graph, v, u).unwrap()
        );
        assert!(effective_resistance(&graph, u, u).is_err());
    }
}
