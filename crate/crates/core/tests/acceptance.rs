//! Acceptance checks. Prints one line per criterion and exits non-zero if
//! any of them fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stmesh_core::dg::{self, DgGeometry, SolverConfig};
use stmesh_core::extrusion::{decompose_hyperprism, extrude_multi, uniform_levels, ExtrudeOptions, Hyperprism};
use stmesh_core::mesh::{check_admissible, make_consistent, simplex_measure};
use stmesh_core::meshgen;
use stmesh_core::motion::{MotionSpec, PumpParams, PumpReading};
use stmesh_core::slicing::{slice_mesh, CellKind, Field};
use stmesh_core::{BoundaryTag, NodeId, Points, Simplex, SimplexMesh, SpaceTimeMesh64, SpatialMesh64};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn ms(d: Duration) -> String {
    format!("{:.0} ms", d.as_secs_f64() * 1e3)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_simplex(d: usize, r: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    loop {
        let x: Vec<Vec<f64>> = (0..=d)
            .map(|_| (0..d).map(|_| r.gen_range(-1.0..1.0)).collect())
            .collect();
        let refs: Vec<&[f64]> = x.iter().map(|p| &p[..]).collect();
        if stmesh_core::linalg::simplex_measure(&refs) > 1e-3 {
            return x;
        }
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let mut worst = 0.0f64;
    let mut bad_count = 0;
    for d in 1..=3 {
        for _ in 0..200 {
            let base = random_simplex(d, &mut r);
            let tau: f64 = 2.0 - r.gen_range(0.0..2.0);
            let mut rows = Vec::new();
            for t in [0.0, tau] {
                for p in &base {
                    let mut q = p.clone();
                    q.push(t);
                    rows.push(q);
                }
            }
            let coords = Points::from_rows(d + 1, &rows);
            let prism = Hyperprism {
                bottom: (0..=d).map(NodeId).collect(),
                top: (d + 1..2 * d + 2).map(NodeId).collect(),
                tau,
            };
            let simplices = decompose_hyperprism(&prism, &coords).expect("non-degenerate base");
            if simplices.len() != d + 1 {
                bad_count += 1;
            }
            let refs: Vec<&[f64]> = base.iter().map(|p| &p[..]).collect();
            let expected = stmesh_core::linalg::simplex_measure(&refs) * tau;
            let total: f64 = simplices.iter().map(|s| simplex_measure(s, &coords)).sum();
            worst = worst.max((total - expected).abs() / expected);
        }
    }
    let elapsed = start.elapsed();
    let pass = bad_count == 0 && worst <= 1e-12 && elapsed < Duration::from_secs(1);
    outcome(
        pass,
        format!("600 prisms, max relative volume error {worst:.2e}, wrong counts {bad_count}, {}", ms(elapsed)),
    )
}

/// Jittered box mesh with shuffled labels, renumbered consistently.
fn random_mesh(d: usize, r: &mut ChaCha8Rng) -> SpatialMesh64 {
    let (n, jitter): (Vec<usize>, f64) = match d {
        1 => (vec![r.gen_range(1..=300)], 0.3),
        2 => (vec![r.gen_range(1..=12), r.gen_range(1..=12)], 0.15),
        _ => (vec![r.gen_range(1..=4), r.gen_range(1..=4), r.gen_range(1..=4)], 0.08),
    };
    let hi: Vec<f64> = (0..d).map(|_| r.gen_range(0.5..3.0)).collect();
    let lo = vec![0.0; d];
    let grid = meshgen::boxed(&lo, &hi, &n);
    let boundary = grid.boundary_nodes();
    let np = grid.points.len();
    let mut perm: Vec<usize> = (0..np).collect();
    perm.shuffle(r);
    let mut data = vec![0.0; np * d];
    for i in 0..np {
        let p = grid.points.get(NodeId(i));
        for c in 0..d {
            let h = hi[c] / n[c] as f64;
            let shift = if boundary[i] { 0.0 } else { r.gen_range(-jitter..jitter) * h };
            data[perm[i] * d + c] = p[c] + shift;
        }
    }
    let elements = grid
        .elements
        .iter()
        .map(|e| {
            let mut nodes: Vec<usize> = e.nodes.iter().map(|v| perm[v.0]).collect();
            nodes.shuffle(r);
            Simplex::new(nodes)
        })
        .collect();
    let mesh = SpatialMesh64::new(Points::new(d, data), elements, BTreeMap::new()).expect("valid mesh");
    let mut mesh = make_consistent(mesh);
    mesh.tag_untagged_boundary(BoundaryTag::Dirichlet);
    mesh
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut r = rng(2);
    let mut failures = 0;
    let mut largest = 0;
    for d in 1..=3 {
        for _ in 0..50 {
            let base = random_mesh(d, &mut r);
            largest = largest.max(base.elements.len());
            let k = r.gen_range(1..=5);
            let end = r.gen_range(0.1..2.0);
            let mesh = extrude_multi(&base, &uniform_levels(end, k), &MotionSpec::none(), Default::default());
            match mesh {
                Ok(m) if check_admissible(&m).is_admissible() => {}
                _ => failures += 1,
            }
        }
    }
    // two triangles that disagree on the order of their shared edge
    let bad = SpatialMesh64::new(
        Points::from_rows(2, &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]),
        vec![Simplex::new([0, 1, 2]), Simplex::new([3, 2, 1])],
        BTreeMap::new(),
    )
    .unwrap();
    let bypass = ExtrudeOptions {
        check_consistency: false,
        check_degeneracy: false,
    };
    let detected = match extrude_multi(&bad, &uniform_levels(1.0, 1), &MotionSpec::none(), bypass) {
        Ok(m) => !check_admissible(&m).is_admissible(),
        Err(_) => false,
    };
    let elapsed = start.elapsed();
    let pass = failures == 0 && detected && elapsed < Duration::from_secs(30);
    outcome(
        pass,
        format!(
            "150 random meshes (up to {largest} elements), {failures} rejected, ordering violation detected: {detected}, {}",
            ms(elapsed)
        ),
    )
}

fn criterion_3() -> Outcome {
    let a = dg::count_dofs(951_360, 3);
    let b = dg::count_dofs(2_618_880, 3);
    let pass = a.velocity == 14_270_400 && b.velocity == 39_283_200;
    outcome(
        pass,
        format!(
            "velocity dofs {} and {}, pressure dofs {} and {}",
            a.velocity, b.velocity, a.pressure, b.pressure
        ),
    )
}

fn criterion_4() -> Outcome {
    let base = meshgen::unit_cube::<f64>(8);
    let start = Instant::now();
    let mesh = extrude_multi(&base, &uniform_levels(1.0, 4), &MotionSpec::none(), Default::default())
        .expect("static extrusion");
    let affine = |p: &[f64]| 0.3 + 1.5 * p[0] - 2.0 * p[1] + 0.25 * p[2] + 4.0 * p[3];
    let values: Vec<f64> = mesh.points.iter().map(affine).collect();
    let field = Field::nodal("f", 1, values);
    let mut r = rng(4);
    let (mut vol_err, mut field_err, mut other_cells) = (0.0f64, 0.0f64, 0usize);
    for _ in 0..20 {
        let t: f64 = r.gen_range(0.0..1.0);
        let slice = slice_mesh(&mesh, t, std::slice::from_ref(&field)).expect("time in range");
        vol_err = vol_err.max((slice.total_measure() - 1.0).abs());
        other_cells += slice.cells.len() - slice.count(CellKind::Tetra) - slice.count(CellKind::Wedge);
        let f = slice.point_field("f").expect("field sliced");
        for (i, p) in slice.points.iter().enumerate() {
            let exact = affine(&[p[0], p[1], p[2], t]);
            field_err = field_err.max((f.values[i] - exact).abs());
        }
    }
    let elapsed = start.elapsed();
    let pass = vol_err <= 1e-10 && other_cells == 0 && field_err <= 1e-12 && elapsed < Duration::from_secs(10);
    outcome(
        pass,
        format!(
            "{} base tets, 20 slices, volume error {vol_err:.2e}, field error {field_err:.2e}, other cells {other_cells}, {}",
            base.elements.len(),
            ms(elapsed)
        ),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let base = meshgen::pump_chamber::<f64>(2, 2);
    let spec = MotionSpec::pump(PumpParams {
        amplitude: 0.1,
        reading: PumpReading::ZOnly,
        ..Default::default()
    });
    let slabs = 10;
    let levels = uniform_levels(1.0, slabs);
    let mesh = match extrude_multi(&base, &levels, &spec, Default::default()) {
        Ok(m) => m,
        Err(e) => return outcome(false, format!("extrusion failed: {e}")),
    };
    let admissible = check_admissible(&mesh).is_admissible();
    let volume = |t: f64| slice_mesh(&mesh, t, &[]).map(|s| s.total_measure()).unwrap_or(f64::NAN);
    let mut slab_measure = vec![0.0; slabs];
    for (e, el) in mesh.elements.iter().enumerate() {
        slab_measure[mesh.element_slab(e)] += simplex_measure(el, &mesh.points);
    }
    // inside a slab V(t) is a cubic, so Simpson's rule must reproduce the
    // slab measure
    let v0 = volume(0.0);
    let mut simpson_err = 0.0f64;
    let mut swing = 0.0f64;
    for s in 0..slabs {
        let (t0, t1) = (levels[s], levels[s + 1]);
        let (a, m, b) = (volume(t0), volume(0.5 * (t0 + t1)), volume(t1));
        let simpson = (t1 - t0) / 6.0 * (a + 4.0 * m + b);
        simpson_err = simpson_err.max((simpson - slab_measure[s]).abs() / slab_measure[s]);
        swing = swing.max((m - v0).abs()).max((b - v0).abs());
    }
    let closure = (volume(1.0) - v0).abs() / v0;
    let elapsed = start.elapsed();
    let pass = admissible && simpson_err <= 1e-9 && closure <= 1e-8 && swing > 1e-3 * v0;
    outcome(
        pass,
        format!(
            "{} elements, admissible {admissible}, V(0) {v0:.6}, max swing {swing:.3e}, Simpson vs slab measure {simpson_err:.2e}, |V(1)-V(0)|/V(0) {closure:.2e}, {}",
            mesh.num_elements(),
            ms(elapsed)
        ),
    )
}

fn static_mesh(base: &SpatialMesh64, slabs: usize) -> SpaceTimeMesh64 {
    extrude_multi(base, &uniform_levels(1.0, slabs), &MotionSpec::none(), Default::default()).expect("static extrusion")
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut tight = SolverConfig::default();
    tight.gmres.rel_tol = 1e-13;
    tight.gmres.max_iter = 2000;
    let default_cfg = SolverConfig::default();
    let cases = [
        (static_mesh(&meshgen::unit_interval(6), 3), vec![0.7]),
        (static_mesh(&meshgen::unit_square(3), 2), vec![0.3, -1.2]),
        (static_mesh(&meshgen::unit_square(8), 4), vec![-0.4, 0.9]),
    ];
    let mut max_err = 0.0f64;
    let mut iterations = Vec::new();
    let mut converged = true;
    for (i, (mesh, u)) in cases.iter().enumerate() {
        let (data, exact) = dg::patch_problem(u.clone());
        if i < 2 {
            match dg::solve(mesh, &data, &tight) {
                Ok(sol) => max_err = max_err.max(sol.velocity_max_error(mesh, |x, t| (exact.velocity)(x, t))),
                Err(_) => max_err = f64::INFINITY,
            }
        }
        match dg::solve(mesh, &data, &default_cfg) {
            Ok(sol) => iterations.push(sol.iterations),
            Err(_) => converged = false,
        }
    }
    // moving three-dimensional case
    let base = meshgen::pump_chamber::<f64>(2, 2);
    let spec = MotionSpec::pump(PumpParams {
        amplitude: 0.1,
        reading: PumpReading::ZOnly,
        ..Default::default()
    });
    let pump = extrude_multi(&base, &uniform_levels(1.0, 4), &spec, Default::default()).expect("pump extrusion");
    let data = dg::pump_problem(spec, 1.0);
    let pump_dofs = dg::count_dofs(pump.num_elements(), 3).total();
    match dg::solve(&pump, &data, &default_cfg) {
        Ok(sol) => iterations.push(sol.iterations),
        Err(_) => converged = false,
    }
    let elapsed = start.elapsed();
    let pass = max_err <= 1e-9 && converged && iterations.iter().all(|&k| k <= 500) && pump_dofs <= 50_000;
    outcome(
        pass,
        format!(
            "patch max error {max_err:.2e}, GMRES to 1e-5 in {iterations:?} iterations (largest system {pump_dofs} dofs), {}",
            ms(elapsed)
        ),
    )
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut cfg = SolverConfig::default();
    cfg.gmres.rel_tol = 1e-10;
    cfg.gmres.max_iter = 2000;
    let (data, exact) = dg::manufactured_1d(1.0);
    let mut hs = Vec::new();
    let mut eu = Vec::new();
    let mut ep = Vec::new();
    for n in [4usize, 8, 16, 32] {
        let mesh = static_mesh(&meshgen::unit_interval(n), n);
        let sol = match dg::solve(&mesh, &data, &cfg) {
            Ok(s) => s,
            Err(e) => return outcome(false, format!("solver failed at n = {n}: {e}")),
        };
        hs.push(1.0 / n as f64);
        eu.push(sol.velocity_l2_error(&mesh, |x, t| (exact.velocity)(x, t)).unwrap());
        ep.push(sol.pressure_l2_error(&mesh, |x, t| (exact.pressure)(x, t)).unwrap());
    }
    let rates: Vec<f64> = (1..eu.len()).map(|i| (eu[i - 1] / eu[i]).log2()).collect();
    let lx: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ly: Vec<f64> = eu.iter().map(|e| e.ln()).collect();
    let mx = lx.iter().sum::<f64>() / lx.len() as f64;
    let my = ly.iter().sum::<f64>() / ly.len() as f64;
    let fit = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / lx.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let order = *rates.last().unwrap();
    let pressure_ok = ep.windows(2).all(|w| w[1] <= w[0]);
    let elapsed = start.elapsed();
    let pass = order >= 1.5 && pressure_ok && elapsed < Duration::from_secs(300);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(" ");
    outcome(
        pass,
        format!(
            "velocity errors [{}], rates [{}], finest order {order:.2} (fit {fit:.2}), pressure errors [{}], {}",
            fmt(&eu),
            rates.iter().map(|x| format!("{x:.2}")).collect::<Vec<_>>().join(" "),
            fmt(&ep),
            ms(elapsed)
        ),
    )
}

fn quadratic_form(a: &stmesh_core::CsrMatrix64, x: &[f64]) -> f64 {
    let mut y = vec![0.0; x.len()];
    a.mul_vec(x, &mut y);
    x.iter().zip(&y).map(|(a, b)| a * b).sum()
}

fn criterion_8() -> Outcome {
    let base = meshgen::pump_chamber::<f64>(1, 2);
    let spec = MotionSpec::pump(PumpParams {
        amplitude: 0.1,
        reading: PumpReading::ZOnly,
        ..Default::default()
    });
    let mesh = extrude_multi(&base, &uniform_levels(1.0, 3), &spec, Default::default()).expect("extrusion");
    let cfg = SolverConfig::<f64>::default();
    let data = dg::pump_problem(spec, 1.0);
    let geo = DgGeometry::new(&mesh).expect("geometry");
    let d = dg::assemble_d_p(&geo, cfg.sigma_p);
    let system = dg::build_block_system(&mesh, &data, &cfg).expect("system");
    let d_sym = d.asymmetry() == 0.0 && system.d.asymmetry() == 0.0;
    let pu = dg::assemble_velocity_penalty(&geo, cfg.sigma_u);
    let mut r = rng(8);
    let mut min_form = f64::INFINITY;
    for _ in 0..1000 {
        let x: Vec<f64> = (0..pu.nrows).map(|_| r.gen_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..d.nrows).map(|_| r.gen_range(-1.0..1.0)).collect();
        min_form = min_form.min(quadratic_form(&pu, &x)).min(quadratic_form(&d, &y));
    }
    let slanted = mesh.interior_facets.iter().filter(|f| f.normal_time().abs() > 1e-12).count();
    let k = dg::assemble_a_h(&geo, &data, &cfg).add(&dg::assemble_b_t(&geo));
    let k_scale = k.triplets().map(|(_, _, v)| v.abs()).fold(0.0, f64::max);
    let k_asym = k.asymmetry() / k_scale;
    let pass = d_sym && min_form >= -1e-12 && slanted > 0 && k_asym > 1e-8;
    outcome(
        pass,
        format!(
            "D symmetric {d_sym}, min penalty form over 1000 vectors {min_form:.3e}, {slanted} interior facets with n_t != 0, relative asymmetry of K {k_asym:.2e}"
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("decomposition", criterion_1),
        ("admissibility", criterion_2),
        ("dof count", criterion_3),
        ("static slicing", criterion_4),
        ("pump motion", criterion_5),
        ("patch test", criterion_6),
        ("convergence", criterion_7),
        ("operator structure", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {} {name}: {status} ({})", i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
