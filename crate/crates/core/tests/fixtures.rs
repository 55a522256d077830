mod common;

use rug::Rational;

use common::{q, TABLE1, TABLE2, TABLE2_SIGN_SLIP};
use trigrid::edge_factors::{
    conformance, factor_f, factor_g, factor_x, factor_y, verify_main_theorem,
};
use trigrid::evidence::{conjecture_evidence, matches_printed, matches_significant, ratio_rows};
use trigrid::grid::{check_symmetry, proportionality, reconstruct_isotropic, upper_half_coords};
use trigrid::oracle::{bottom_corner_resistance, build_graph, corner_vertices};
use trigrid::reduction::{corner_resistance, reduce_fully, row_reduce, tail_sequence};
use trigrid::scalar::Real;
use trigrid::transforms::delta_y;
use trigrid::{factor_grid, uniform_grid, BigFloat, TriGrid};

fn triangles(g: &TriGrid<Rational>) -> Vec<[Rational; 3]> {
    g.labels().to_vec()
}

fn labels(rows: &[[(i64, i64); 3]]) -> Vec<[Rational; 3]> {
    rows.iter().map(|t| t.map(|(n, d)| q(n, d))).collect()
}

#[test]
fn all_ones_three_grid_reduces_to_seven_quarters() {
    let g = uniform_grid(3, q(1, 1)).unwrap();
    let (once, tails) = row_reduce(&g).unwrap();
    let b = (2, 3);
    let i = (1, 1);
    // Boundary edges 2/3; the three edges bounding the middle down triangle are 1.
    let expected = labels(&[[b, b, i], [b, i, b], [i, b, b]]);
    assert_eq!(triangles(&once), expected);
    assert_eq!(
        (
            tails.top.clone(),
            tails.bottom_left.clone(),
            tails.bottom_right.clone()
        ),
        (q(1, 3), q(1, 3), q(1, 3))
    );

    let (twice, second) = row_reduce(&once).unwrap();
    assert_eq!(triangles(&twice), vec![[q(4, 7), q(4, 7), q(4, 7)]]);
    assert_eq!(second.top, q(4, 21));

    let tails = tail_sequence(3, q(1, 1)).unwrap();
    assert_eq!(tails, vec![q(1, 3), q(4, 21), q(4, 21)]);
}

#[test]
fn six_grid_tails_are_exact() {
    let tails = tail_sequence(6, q(1, 1)).unwrap();
    assert_eq!(tails.len(), 6);
    assert_eq!(tails[5], q(1713481, 9399450));
    assert_eq!(tails[4], q(933443973, 10004147950));
}

#[test]
fn factor_grid_three_labels() {
    let g = factor_grid(3).unwrap();
    let expected = labels(&[
        [(1, 1), (1, 1), (5, 1)],
        [(5, 6), (5, 2), (5, 2)],
        [(5, 2), (5, 6), (5, 2)],
        [(1, 1), (5, 1), (1, 1)],
        [(5, 2), (5, 2), (5, 6)],
        [(5, 1), (1, 1), (1, 1)],
    ]);
    assert_eq!(triangles(&g), expected);
    assert_eq!(factor_x(3, 2).unwrap(), q(5, 6));
    assert_eq!(factor_y(3, 2).unwrap(), q(5, 2));
}

#[test]
fn factor_grid_two_labels() {
    let g = factor_grid(2).unwrap();
    let expected = labels(&[
        [(1, 1), (1, 1), (3, 1)],
        [(1, 1), (3, 1), (1, 1)],
        [(3, 1), (1, 1), (1, 1)],
    ]);
    assert_eq!(triangles(&g), expected);
}

#[test]
fn factor_grid_three_reduces_to_a_multiple_of_factor_grid_two() {
    let (reduced, tails) = row_reduce(&factor_grid(3).unwrap()).unwrap();
    let two = factor_grid(2).unwrap();
    assert_eq!(proportionality(&reduced, &two).unwrap(), Some(q(15, 14)));
    assert_eq!(factor_g(3).unwrap(), q(15, 14));
    assert_eq!(factor_f(3, 1).unwrap(), q(15, 14));
    assert_eq!(
        (tails.top, tails.bottom_left, tails.bottom_right),
        (q(1, 7), q(1, 7), q(1, 7))
    );
    // Top tails of the full trace: t(3,3), t(3,2), t(3,1).
    let trace = reduce_fully(&factor_grid(3).unwrap()).unwrap();
    let top: Vec<_> = trace.top_tails().cloned().collect();
    assert_eq!(top, vec![q(1, 7), q(3, 14), q(3, 7)]);
    let legs = delta_y(&q(15, 14), &q(15, 14), &q(45, 14)).unwrap();
    assert_eq!(legs.y12, q(3, 14));
}

#[test]
fn graph_counts_and_corners() {
    for n in 1..=10usize {
        let g = uniform_grid(n, q(1, 1)).unwrap();
        assert_eq!(g.vertex_count(), (n + 1) * (n + 2) / 2);
        assert_eq!(g.edge_count(), 3 * n * (n + 1) / 2);
        let graph = build_graph(&g);
        for p in corner_vertices(n) {
            let v = graph.vertex(p).unwrap();
            assert_eq!(graph.degree(v), 2, "corner of the {n}-grid");
        }
    }
}

#[test]
fn known_corner_resistances() {
    let uniform = [
        q(2, 3),
        q(10, 9),
        q(10, 7),
        q(206, 123),
        q(3326, 1773),
        q(43118, 21075),
        q(150806, 68761),
        q(11591578, 4989753),
    ];
    for (k, expected) in uniform.iter().enumerate() {
        let g = uniform_grid(k + 1, q(1, 1)).unwrap();
        assert_eq!(&corner_resistance(&g).unwrap(), expected, "n = {}", k + 1);
        assert_eq!(
            &bottom_corner_resistance(&g).unwrap(),
            expected,
            "n = {}",
            k + 1
        );
    }
}

#[test]
fn factor_grid_resistances_agree_with_the_laplacian() {
    for c in 1..=8usize {
        let g = factor_grid(c).unwrap();
        assert_eq!(
            corner_resistance(&g).unwrap(),
            bottom_corner_resistance(&g).unwrap(),
            "c = {c}"
        );
    }
}

#[test]
fn main_theorem_holds_up_to_twelve() {
    for c in 2..=12 {
        let report = verify_main_theorem(c).unwrap();
        let failed: Vec<_> = report.failures().map(|f| f.name.clone()).collect();
        assert!(failed.is_empty(), "c = {c}: {failed:?}");
        assert_eq!(
            report.tails[0],
            format!("{}", q(c as i64, 2 * c as i64 + 1))
        );
    }
}

#[test]
fn every_reduced_factor_grid_conforms_exactly() {
    for c in 2..=9usize {
        let trace = reduce_fully(&factor_grid(c).unwrap()).unwrap();
        for g in &trace.grids {
            assert!(
                conformance(g, g.n()).unwrap().exact,
                "c = {c}, rows = {}",
                g.n()
            );
        }
    }
}

#[test]
fn factor_grids_are_isotropic_and_rebuild_from_the_upper_half() {
    for c in 1..=12usize {
        let g = factor_grid(c).unwrap();
        assert!(check_symmetry(&g).isotropic(), "c = {c}");
        let known: Vec<_> = upper_half_coords(c)
            .into_iter()
            .map(|(r, d)| ((r, d), g.triangle(r, d).unwrap().clone()))
            .collect();
        assert!(known.len() < g.labels().len() || c <= 2);
        assert_eq!(reconstruct_isotropic(c, &known).unwrap(), g, "c = {c}");
    }
}

#[test]
fn tail_table_at_one_fifty() {
    let unit = BigFloat::from_int(1, 256).unwrap();
    let ev = conjecture_evidence(150, unit, 10, None, 256).unwrap();
    assert_eq!(ev.tails.len(), TABLE1.len());
    for (row, (i, actual, conjectured, error)) in ev.tails.iter().zip(TABLE1) {
        assert_eq!(row.i, i);
        assert!(
            matches_printed(&row.actual, actual).unwrap(),
            "t(150,{i}) = {}",
            row.actual
        );
        assert!(
            matches_printed(&row.conjectured, conjectured).unwrap(),
            "row {i}"
        );
        assert!(
            matches_significant(&row.error, error).unwrap(),
            "error in row {i}"
        );
    }
}

#[test]
fn ratio_table_at_one_fifty() {
    let unit = BigFloat::from_int(1, 256).unwrap();
    let ev = conjecture_evidence(150, unit, 0, Some(10), 256).unwrap();
    let report = ev.conformance().unwrap().unwrap();
    let rows = ratio_rows(&report).unwrap();
    assert_eq!(rows.len(), TABLE2.len());
    for (row, (label, observed, (num, den), error)) in rows.iter().zip(TABLE2) {
        assert_eq!(row.label(), label);
        assert_eq!(row.predicted, q(num, den), "{label}");
        assert!(
            matches_printed(&row.observed, observed).unwrap(),
            "{label}: {}",
            row.observed
        );
        if label == TABLE2_SIGN_SLIP {
            // Observed sits below 5/7, so predicted/observed − 1 is positive;
            // the printed value carries the wrong sign.
            assert!(row.observed.to_f64() < 5.0 / 7.0);
            assert!(row.error.is_positive());
            assert!(matches_significant(&row.error.abs(), error.trim_start_matches('-')).unwrap());
        } else {
            assert!(
                matches_significant(&row.error, error).unwrap(),
                "{label}: {}",
                row.error
            );
        }
    }
}
