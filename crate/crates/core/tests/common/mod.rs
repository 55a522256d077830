#![allow(dead_code)]

use rug::Rational;
use trigrid::grid::{coords, Symmetry};
use trigrid::TriGrid;

/// Printed rows of the tail table: (i, actual, conjectured, error).
pub const TABLE1: [(usize, &str, &str, &str); 10] = [
    (1, "0.183776286", "0.183939721", "0.0009"),
    (2, "0.091888053", "0.09196986", "0.0009"),
    (3, "0.061258443", "0.06131324", "0.0009"),
    (4, "0.045943311", "0.04598493", "0.0009"),
    (5, "0.036753773", "0.036787944", "0.0009"),
    (6, "0.030626823", "0.03065662", "0.001"),
    (7, "0.026249708", "0.026277103", "0.001"),
    (8, "0.02296602", "0.022992465", "0.0012"),
    (9, "0.020411064", "0.020437747", "0.0013"),
    (10, "0.018366", "0.018393972", "0.0015"),
];

/// Printed rows of the edge-ratio table: (label, observed, predicted, error).
pub const TABLE2: [(&str, &str, (i64, i64), &str); 12] = [
    ("<4,1,2>/<4,1,1>", "7.0010150391", (7, 1), "-0.00014"),
    ("<4,2,2>/<4,2,1>", "1.6667476811", (5, 3), "-0.00005"),
    ("<6,4,2>/<6,4,1>", "0.7142421068", (5, 7), "-0.00006"),
    ("<1,1,3>/<1,1,1>", "19.0125047453", (19, 1), "-0.00066"),
    ("<5,3,3>/<5,3,1>", "2.20046025", (11, 5), "-0.00021"),
    ("<6,4,3>/<6,4,1>", "1.2858046383", (9, 7), "-0.00007"),
    ("<2,1,1>/<1,1,1>", "0.7036757582", (19, 27), "0.00004"),
    ("<3,1,1>/<2,1,1>", "0.8499699096", (17, 20), "0.00004"),
    ("<4,1,1>/<3,1,1>", "0.9183432041", (45, 49), "0.00003"),
    ("<4,2,1>/<4,1,1>", "2.3334191779", (7, 3), "-0.00004"),
    ("<4,3,1>/<4,2,1>", "1.6667476811", (5, 3), "-0.00005"),
    ("<5,4,1>/<5,3,1>", "1.500093071", (3, 2), "-0.00006"),
];

/// The one printed error whose sign disagrees with its own row.
pub const TABLE2_SIGN_SLIP: &str = "<6,4,2>/<6,4,1>";

pub fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// Grid with labels taken in order from `values` (cycled).
pub fn grid_from(n: usize, values: &[Rational]) -> TriGrid<Rational> {
    let mut k = 0;
    TriGrid::from_fn(n, |_, _| {
        let mut next = || {
            let v = values[k % values.len()].clone();
            k += 1;
            v
        };
        Ok([next(), next(), next()])
    })
    .expect("positive labels")
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut root = x;
    while parent[root] != root {
        root = parent[root];
    }
    let mut x = x;
    while parent[x] != root {
        let up = parent[x];
        parent[x] = root;
        x = up;
    }
    root
}

fn slot(r: usize, d: usize, e: usize) -> usize {
    3 * (r * (r - 1) / 2 + d - 1) + e
}

/// Orbits of the edge slots (r, d, e) under the three grid symmetries;
/// returns a class id per slot.
pub fn symmetry_orbits(n: usize) -> Vec<usize> {
    let total = 3 * n * (n + 1) / 2;
    let mut parent: Vec<usize> = (0..total).collect();
    for sym in [Symmetry::Vertical, Symmetry::Rotational, Symmetry::Slide] {
        let moved = sym.permute(&[0usize, 1, 2]);
        for (r, d) in coords(n) {
            let (r2, d2) = sym.image(n, r, d);
            for (k, &from) in moved.iter().enumerate() {
                let a = find(&mut parent, slot(r, d, from));
                let b = find(&mut parent, slot(r2, d2, k));
                parent[a] = b;
            }
        }
    }
    (0..total).map(|s| find(&mut parent, s)).collect()
}

/// An isotropic grid with one value per symmetry orbit.
pub fn isotropic_grid(n: usize, values: &[Rational]) -> TriGrid<Rational> {
    let orbits = symmetry_orbits(n);
    let mut ids: Vec<usize> = orbits.clone();
    ids.sort_unstable();
    ids.dedup();
    let value = |s: usize| {
        let class = ids.binary_search(&orbits[s]).expect("known orbit");
        values[class % values.len()].clone()
    };
    TriGrid::from_fn(n, |r, d| {
        Ok([
            value(slot(r, d, 0)),
            value(slot(r, d, 1)),
            value(slot(r, d, 2)),
        ])
    })
    .expect("positive labels")
}
