use approx::assert_relative_eq;
use proptest::prelude::*;

use stmesh_core::extrusion::{decompose_hyperprism, extrude_multi, uniform_levels, Hyperprism};
use stmesh_core::io::mesh_file::{format_mesh, format_spacetime_mesh, parse_mesh, parse_spacetime_mesh};
use stmesh_core::linalg;
use stmesh_core::mesh::{check_admissible, check_consistent, simplex_measure};
use stmesh_core::meshgen;
use stmesh_core::motion::{MotionSpec, PumpParams, PumpReading};
use stmesh_core::slicing::{slice_mesh, CellKind, Field};
use stmesh_core::{BoundaryClass, NodeId, Points, SimplexMesh, SpaceTimeMesh64, SpatialMesh64};

fn prism_case() -> impl Strategy<Value = (usize, Vec<f64>, f64)> {
    (1usize..=3).prop_flat_map(|d| {
        (
            Just(d),
            prop::collection::vec(-2.0f64..2.0, (d + 1) * d),
            0.01f64..2.0,
        )
    })
}

proptest! {
    #[test]
    fn prism_pieces_fill_the_prism((d, coords, tau) in prism_case()) {
        let base: Vec<&[f64]> = coords.chunks(d).collect();
        let area = linalg::simplex_measure(&base);
        prop_assume!(area > 1e-3);
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for t in [0.0, tau] {
            for p in &base {
                let mut r = p.to_vec();
                r.push(t);
                rows.push(r);
            }
        }
        let pts = Points::from_rows(d + 1, &rows);
        let prism = Hyperprism {
            bottom: (0..=d).map(NodeId).collect(),
            top: (d + 1..2 * d + 2).map(NodeId).collect(),
            tau,
        };
        let pieces = decompose_hyperprism(&prism, &pts).unwrap();
        prop_assert_eq!(pieces.len(), d + 1);
        let total: f64 = pieces.iter().map(|s| simplex_measure(s, &pts)).sum();
        prop_assert!((total - area * tau).abs() <= 1e-12 * area * tau);
    }

    #[test]
    fn static_slices_keep_the_base_measure(t in 0.0f64..1.0, slabs in 1usize..4) {
        let base = meshgen::unit_square::<f64>(3);
        let st = extrude_multi(&base, &uniform_levels(1.0, slabs), &MotionSpec::none(), Default::default()).unwrap();
        let s = slice_mesh(&st, t, &[]).unwrap();
        prop_assert!((s.total_measure() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn element_count_is_slabs_times_elements_times_n() {
    for (base, d) in [
        (meshgen::unit_interval::<f64>(5), 1),
        (meshgen::unit_square(2), 2),
        (meshgen::unit_cube(1), 3),
    ] {
        for k in 1..4 {
            let st = extrude_multi(&base, &uniform_levels(2.0, k), &MotionSpec::none(), Default::default()).unwrap();
            assert_eq!(st.num_elements(), k * base.num_elements() * (d + 1));
            assert_eq!(st.num_nodes(), (k + 1) * base.num_nodes());
            assert_relative_eq!(st.total_measure(), 2.0 * base.total_measure(), max_relative = 1e-13);
            assert!(check_consistent(&st.elements).unwrap().is_consistent());
        }
    }
}

#[test]
fn boundary_classes_cover_the_mantle() {
    let base = meshgen::unit_square::<f64>(2);
    let st = extrude_multi(&base, &uniform_levels(1.0, 3), &MotionSpec::none(), Default::default()).unwrap();
    let count = |c| st.boundary_of_class(c).count();
    assert_eq!(count(BoundaryClass::Sigma0), base.num_elements());
    assert_eq!(count(BoundaryClass::SigmaT), base.num_elements());
    // 8 boundary edges, two triangles per edge and slab
    assert_eq!(count(BoundaryClass::SigmaD), 8 * 2 * 3);
    assert_eq!(count(BoundaryClass::Unclassified), 0);
}

#[test]
fn mesh_file_round_trip_is_exact() {
    let mut base = meshgen::disk::<f64>(1.0, 3);
    for (i, x) in base.points.as_slice().to_vec().into_iter().enumerate() {
        base.points.get_mut(NodeId(i / 2))[i % 2] = x * (1.0 + 1.0 / 3.0);
    }
    let text = format_mesh(&base);
    let back: SpatialMesh64 = parse_mesh(&text).unwrap();
    assert_eq!(back.points.as_slice(), base.points.as_slice());
    assert_eq!(back.elements, base.elements);
    assert_eq!(back.boundary_tags, base.boundary_tags);
    assert_eq!(format_mesh(&back), text);

    let st = extrude_multi(&base, &[0.0, 0.1, 0.35], &MotionSpec::none(), Default::default()).unwrap();
    let text = format_spacetime_mesh(&st);
    let back: SpaceTimeMesh64 = parse_spacetime_mesh(&text).unwrap();
    assert_eq!(back.points.as_slice(), st.points.as_slice());
    assert_eq!(back.levels, st.levels);
    assert_eq!(back.boundary_facets.len(), st.boundary_facets.len());
    assert_eq!(format_spacetime_mesh(&back), text);
}

#[test]
fn moving_pump_slices_are_tetrahedra_and_wedges() {
    let base = meshgen::pump_chamber::<f64>(1, 2);
    let spec = MotionSpec::pump(PumpParams {
        amplitude: 0.1,
        reading: PumpReading::ZOnly,
        ..Default::default()
    });
    let st = extrude_multi(&base, &uniform_levels(1.0, 4), &spec, Default::default()).unwrap();
    assert!(check_admissible(&st).is_admissible());
    let height = Field::nodal("z", 1, st.points.iter().map(|p| p[2]).collect());
    for t in [0.1, 0.3, 0.5, 0.9] {
        let s = slice_mesh(&st, t, std::slice::from_ref(&height)).unwrap();
        assert_eq!(s.cells.len(), s.count(CellKind::Tetra) + s.count(CellKind::Wedge));
        let z = s.point_field("z").unwrap();
        for (i, p) in s.points.iter().enumerate() {
            assert!((z.values[i] - p[2]).abs() < 1e-12);
        }
    }
}
