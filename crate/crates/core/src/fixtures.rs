//! Built-in example complexes, charts, actions and covers.
//!
//! These back the test suites and `orbindex fixtures`, which writes them out
//! as a workspace directory.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use serde_json::Value;

use crate::charts::{cc, EmbeddedChart};
use crate::complex::{OpenSet, Simplex, SimplicialComplex};
use crate::constructible::ConstructibleFunction;
use crate::io;
use crate::linalg::Matrix;
use crate::orbifold::{EquivariantChart, GroupAction};
use crate::rational::{self, q};

fn complex(maximal: &[&[i64]]) -> Arc<SimplicialComplex> {
    Arc::new(SimplicialComplex::from_maximal(maximal.iter().map(|m| m.to_vec())).expect("fixture simplices are valid"))
}

fn chart(k: Arc<SimplicialComplex>, dim: usize, coords: &[(i64, &[i64])]) -> Arc<EmbeddedChart> {
    Arc::new(EmbeddedChart::from_integer_coords(k, dim, coords).expect("fixture coordinates are valid"))
}

fn perm(pairs: &[(i64, i64)]) -> BTreeMap<i64, i64> {
    pairs.iter().copied().collect()
}

fn matrix(rows: &[&[i64]]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|x| q(*x)).collect()).collect()
}

fn s(v: &[i64]) -> Simplex {
    Simplex::new(v.iter().copied()).expect("fixture simplex")
}

/// Closed interval `[0, 1]`.
pub fn interval() -> Arc<EmbeddedChart> {
    chart(complex(&[&[0, 1]]), 1, &[(0, &[0]), (1, &[1])])
}

/// Path `0 – 1 – 2` at `-1, 0, 1`.
pub fn path() -> Arc<EmbeddedChart> {
    chart(complex(&[&[0, 1], &[1, 2]]), 1, &[(0, &[-1]), (1, &[0]), (2, &[1])])
}

pub fn triangle() -> Arc<EmbeddedChart> {
    chart(complex(&[&[0, 1, 2]]), 2, &[(0, &[0, 0]), (1, &[4, 0]), (2, &[1, 3])])
}

/// Square `[-1,1]²` coned from its center `0`; corners `1..4` counterclockwise.
pub fn square() -> Arc<EmbeddedChart> {
    chart(
        complex(&[&[0, 1, 2], &[0, 2, 3], &[0, 3, 4], &[0, 1, 4]]),
        2,
        &[(0, &[0, 0]), (1, &[1, 1]), (2, &[-1, 1]), (3, &[-1, -1]), (4, &[1, -1])],
    )
}

const HEXAGON: [(i64, [i64; 2]); 6] = [
    (1, [2, 0]),
    (2, [1, 2]),
    (3, [-1, 2]),
    (4, [-2, 0]),
    (5, [-1, -2]),
    (6, [1, -2]),
];

/// Hexagon coned from the interior vertex `0`.
pub fn hexagon_disk() -> Arc<EmbeddedChart> {
    let k = complex(&[&[0, 1, 2], &[0, 2, 3], &[0, 3, 4], &[0, 4, 5], &[0, 5, 6], &[0, 1, 6]]);
    let mut coords: Vec<(i64, &[i64])> = vec![(0, &[0, 0])];
    coords.extend(HEXAGON.iter().map(|(v, c)| (*v, &c[..])));
    chart(k, 2, &coords)
}

/// Square annulus between `[-3,3]²` (vertices `0..3`) and `[-1,1]²` (`4..7`).
pub fn annulus() -> Arc<EmbeddedChart> {
    let mut maximal = Vec::new();
    for k in 0..4 {
        let (o, o1, i, i1) = (k, (k + 1) % 4, k + 4, (k + 1) % 4 + 4);
        maximal.push(vec![o, o1, i]);
        maximal.push(vec![i, i1, o1]);
    }
    let k = Arc::new(SimplicialComplex::from_maximal(maximal).expect("annulus"));
    chart(
        k,
        2,
        &[
            (0, &[3, 3]),
            (1, &[-3, 3]),
            (2, &[-3, -3]),
            (3, &[3, -3]),
            (4, &[1, 1]),
            (5, &[-1, 1]),
            (6, &[-1, -1]),
            (7, &[1, -1]),
        ],
    )
}

pub fn tetrahedron() -> Arc<EmbeddedChart> {
    chart(
        complex(&[&[0, 1, 2, 3]]),
        3,
        &[(0, &[0, 0, 0]), (1, &[1, 0, 0]), (2, &[0, 1, 0]), (3, &[0, 0, 1])],
    )
}

/// Octahedron coned from its center `0`; `1..6` are `±e₁, ±e₂, ±e₃`.
pub fn octahedron_ball() -> Arc<EmbeddedChart> {
    let mut maximal = Vec::new();
    for x in [1, 2] {
        for y in [3, 4] {
            for z in [5, 6] {
                maximal.push(vec![0, x, y, z]);
            }
        }
    }
    let k = Arc::new(SimplicialComplex::from_maximal(maximal).expect("octahedron"));
    chart(
        k,
        3,
        &[
            (0, &[0, 0, 0]),
            (1, &[1, 0, 0]),
            (2, &[-1, 0, 0]),
            (3, &[0, 1, 0]),
            (4, &[0, -1, 0]),
            (5, &[0, 0, 1]),
            (6, &[0, 0, -1]),
        ],
    )
}

/// Boundary of the octahedron, a 2-sphere.
pub fn octahedron_sphere() -> Arc<SimplicialComplex> {
    let mut maximal = Vec::new();
    for x in [1, 2] {
        for y in [3, 4] {
            for z in [5, 6] {
                maximal.push(vec![x, y, z]);
            }
        }
    }
    Arc::new(SimplicialComplex::from_maximal(maximal).expect("octahedron boundary"))
}

/// Boundary of a triangle, a circle.
pub fn circle() -> Arc<SimplicialComplex> {
    complex(&[&[0, 1], &[1, 2], &[0, 2]])
}

/// Hexagon boundary in the plane with its vertices `0..5`.
pub fn hexagon() -> Arc<EmbeddedChart> {
    let k = complex(&[&[0, 1], &[1, 2], &[2, 3], &[3, 4], &[4, 5], &[0, 5]]);
    let coords: Vec<(i64, &[i64])> = HEXAGON.iter().map(|(v, c)| (*v - 1, &c[..])).collect();
    chart(k, 2, &coords)
}

/// `Z/2` swapping the ends of [`path`], represented by `x ↦ -x`.
pub fn path_swap() -> EquivariantChart {
    let c = path();
    let g = GroupAction::new(Arc::clone(c.complex()), &[perm(&[(0, 2), (2, 0)])]).expect("swap");
    EquivariantChart::new(c, Arc::new(g), vec![matrix(&[&[-1]])]).expect("reflection")
}

/// Free `Z/2` on [`hexagon`], the antipodal rotation.
pub fn hexagon_free() -> EquivariantChart {
    let c = hexagon();
    let g = GroupAction::new(
        Arc::clone(c.complex()),
        &[perm(&[(0, 3), (1, 4), (2, 5), (3, 0), (4, 1), (5, 2)])],
    )
    .expect("rotation by three");
    EquivariantChart::new(c, Arc::new(g), vec![matrix(&[&[-1, 0], &[0, -1]])]).expect("antipodal map")
}

/// Dihedral group of order 8 on [`square`]; not regular until subdivided.
pub fn square_d4() -> EquivariantChart {
    let c = square();
    let rot = perm(&[(1, 2), (2, 3), (3, 4), (4, 1)]);
    let flip = perm(&[(1, 4), (4, 1), (2, 3), (3, 2)]);
    let g = GroupAction::new(Arc::clone(c.complex()), &[rot, flip]).expect("D4");
    EquivariantChart::new(
        c,
        Arc::new(g),
        vec![matrix(&[&[0, -1], &[1, 0]]), matrix(&[&[1, 0], &[0, -1]])],
    )
    .expect("D4 matrices")
}

/// A point with `Z/2` acting trivially, through the ghost labels `100, 101`.
pub fn point_z2() -> Arc<GroupAction> {
    let k = complex(&[&[0]]);
    Arc::new(GroupAction::new(k, &[perm(&[(100, 101), (101, 100)])]).expect("kernel action"))
}

/// Two-set covers exercised by the cosheaf suite.
pub fn covers() -> Vec<(&'static str, Arc<SimplicialComplex>, OpenSet, OpenSet)> {
    let c = circle();
    let arcs_u = OpenSet::star_of(Arc::clone(&c), [s(&[0]), s(&[1])]).expect("arc");
    let arcs_v = OpenSet::star_of(Arc::clone(&c), [s(&[1]), s(&[2])]).expect("arc");

    let i = Arc::clone(interval().complex());
    let ends_u = i.star_open(&s(&[0])).expect("star");
    let ends_v = i.star_open(&s(&[1])).expect("star");

    let d = Arc::clone(hexagon_disk().complex());
    let center = d.star_open(&s(&[0])).expect("star");
    let rest = center.complement_star();

    vec![
        ("circle_arcs", c, arcs_u, arcs_v),
        ("interval_ends", i, ends_u, ends_v),
        ("disk_center", d, center, rest),
    ]
}

/// The chart fixtures of the index suite.
pub fn index_charts() -> Vec<(&'static str, Arc<EmbeddedChart>)> {
    vec![
        ("square", square()),
        ("hexagon_disk", hexagon_disk()),
        ("annulus", annulus()),
        ("tetrahedron", tetrahedron()),
        ("octahedron_ball", octahedron_ball()),
    ]
}

/// Convex polytopes triangulated as subcomplexes.
pub fn convex_charts() -> Vec<(&'static str, Arc<EmbeddedChart>)> {
    vec![
        ("triangle", triangle()),
        ("square", square()),
        ("tetrahedron", tetrahedron()),
    ]
}

/// Equivariant chart fixtures.
pub fn equivariant_charts() -> Vec<(&'static str, EquivariantChart)> {
    vec![
        ("path_swap", path_swap()),
        ("hexagon_free", hexagon_free()),
        ("square_d4", square_d4()),
    ]
}

/// An `n × n` grid of unit squares, each cut along a random diagonal.
pub fn planar_grid<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Arc<EmbeddedChart> {
    let n = n as i64;
    let id = |i: i64, j: i64| i * (n + 1) + j;
    let mut maximal = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            if rng.gen_bool(0.5) {
                maximal.push(vec![a, b, c]);
                maximal.push(vec![a, c, d]);
            } else {
                maximal.push(vec![a, b, d]);
                maximal.push(vec![b, c, d]);
            }
        }
    }
    let k = Arc::new(SimplicialComplex::from_maximal(maximal).expect("grid"));
    let coords: BTreeMap<i64, Vec<_>> = (0..=n)
        .flat_map(|i| (0..=n).map(move |j| (id(i, j), vec![q(i), q(j)])))
        .collect();
    Arc::new(EmbeddedChart::new(k, 2, coords).expect("grid coordinates"))
}

/// The fixtures as named workspace documents.
pub fn documents() -> Vec<(String, Value)> {
    let mut out: Vec<(String, Value)> = Vec::new();
    let mut add = |name: &str, v: Value| out.push((name.to_string(), v));

    let plain = [
        ("interval", interval()),
        ("triangle", triangle()),
        ("hexagon_disk", hexagon_disk()),
        ("annulus", annulus()),
        ("tetrahedron", tetrahedron()),
        ("octahedron_ball", octahedron_ball()),
    ];
    for (name, c) in &plain {
        add(name, io::complex_json(c.complex()));
        add(&format!("{name}_chart"), io::chart_json(c, name, None));
    }
    for (complex, action, eq) in [
        ("path", "swap", path_swap()),
        ("hexagon", "hexagon_free", hexagon_free()),
        ("square", "square_d4", square_d4()),
    ] {
        add(complex, io::complex_json(eq.chart().complex()));
        add(action, io::action_json(eq.action(), complex));
        add(
            &format!("{complex}_chart"),
            io::chart_json(eq.chart(), complex, Some((action, eq.generator_matrices()))),
        );
    }
    add("point", io::complex_json(point_z2().complex()));
    add("point_z2", io::action_json(&point_z2(), "point"));
    add("circle", io::complex_json(&circle()));
    add("octahedron_sphere", io::complex_json(&octahedron_sphere()));

    let one = ConstructibleFunction::constant(Arc::clone(interval().complex()), rational::one());
    add("interval_one", io::function_json(&one, "interval"));
    let open = ConstructibleFunction::indicator(Arc::clone(interval().complex()), &[s(&[0, 1])]).expect("edge");
    add("interval_open", io::function_json(&open, "interval"));
    let tri = triangle();
    let disk = ConstructibleFunction::constant(Arc::clone(tri.complex()), rational::one());
    add("triangle_one", io::function_json(&disk, "triangle"));
    let inside = ConstructibleFunction::indicator(Arc::clone(tri.complex()), &[s(&[0, 1, 2])]).expect("face");
    add("triangle_open", io::function_json(&inside, "triangle"));
    add(
        "triangle_one_cc",
        io::table_json(&cc(&disk, &tri).expect("cc"), "triangle_chart"),
    );
    let five = ConstructibleFunction::constant(circle(), rational::q(5));
    add("circle_five", io::function_json(&five, "circle"));
    let path_one = ConstructibleFunction::constant(Arc::clone(path().complex()), rational::one());
    add("path_one", io::function_json(&path_one, "path"));

    for (name, _, u, v) in covers() {
        let complex = match name {
            "circle_arcs" => "circle",
            "interval_ends" => "interval",
            _ => "hexagon_disk",
        };
        add(name, io::cover_json(&u, &v, complex));
    }
    let center = hexagon_disk().complex().star_open(&s(&[0])).expect("star");
    add("disk_center_star", io::open_set_json(&center, "hexagon_disk"));
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Write [`documents`] into `dir`, one file per object.
pub fn write_workspace(dir: &std::path::Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, v) in documents() {
        std::fs::write(dir.join(format!("{name}.json")), io::to_text(&v))?;
    }
    Ok(())
}
