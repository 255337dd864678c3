use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn stmesh(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stmesh"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const SORTED_SQUARE: &str = "stmesh 1 spatial
dim 2
nodes 4
0 0 0
1 1 0
2 0 1
3 1 1
elements 2
0 0 1 2
1 1 2 3
";

const UNSORTED_SQUARE: &str = "stmesh 1 spatial
dim 2
nodes 4
0 0 0
1 1 0
2 0 1
3 1 1
elements 2
0 0 1 2
1 3 2 1
";

#[test]
fn check_sorted_mesh_passes() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("sq.mesh"), SORTED_SQUARE).unwrap();
    let o = stmesh(dir.path(), &["check", "--mesh", "sq.mesh"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("ok"));
}

#[test]
fn check_reports_numbering_and_can_repair_it() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("sq.mesh"), UNSORTED_SQUARE).unwrap();
    assert_eq!(code(&stmesh(dir.path(), &["check", "--mesh", "sq.mesh"])), 3);
    assert_eq!(code(&stmesh(dir.path(), &["extrude", "--mesh", "sq.mesh", "--out", "st.mesh"])), 3);
    let o = stmesh(dir.path(), &["check", "--mesh", "sq.mesh", "--out", "fixed.mesh"]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&stmesh(dir.path(), &["check", "--mesh", "fixed.mesh"])), 0);
}

#[test]
fn check_detects_overlap_and_degeneracy() {
    let dir = TempDir::new().unwrap();
    // second triangle folds back over the first
    let overlap = SORTED_SQUARE.replace("3 1 1\n", "3 0.2 0.2\n");
    fs::write(dir.path().join("overlap.mesh"), overlap).unwrap();
    assert_eq!(code(&stmesh(dir.path(), &["check", "--mesh", "overlap.mesh"])), 4);
    let flat = SORTED_SQUARE.replace("3 1 1\n", "3 0.5 0.5\n");
    fs::write(dir.path().join("flat.mesh"), flat).unwrap();
    assert_eq!(code(&stmesh(dir.path(), &["check", "--mesh", "flat.mesh"])), 5);
}

#[test]
fn parse_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = SORTED_SQUARE.replace("1 1 2 3", "1 1 2 7");
    fs::write(dir.path().join("bad.mesh"), bad).unwrap();
    let o = stmesh(dir.path(), &["info", "--mesh", "bad.mesh"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 10"));
    assert_eq!(code(&stmesh(dir.path(), &["info", "--mesh", "missing.mesh"])), 2);
    assert_eq!(code(&stmesh(dir.path(), &["frobnicate"])), 2);
}

#[test]
fn extrude_unit_square_into_24_tetrahedra() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("sq.mesh"), SORTED_SQUARE).unwrap();
    let o = stmesh(dir.path(), &["extrude", "--mesh", "sq.mesh", "--slabs", "4", "--out", "st.mesh"]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(dir.path().join("st.mesh")).unwrap();
    assert!(text.starts_with("stmesh 1 spacetime"));
    assert!(text.lines().any(|l| l == "elements 24"));
    let info = stdout(&stmesh(dir.path(), &["info", "--mesh", "st.mesh"]));
    assert!(info.contains("elements 24"));
    assert!(info.contains("slabs 4"));
}

#[test]
fn generated_meshes_round_trip() {
    let dir = TempDir::new().unwrap();
    let o = stmesh(dir.path(), &["generate", "unit-square", "--n", "1", "--out", "g.mesh"]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read_to_string(dir.path().join("g.mesh")).unwrap().lines().nth(8), Some("0 0 1 2"));
    assert_eq!(code(&stmesh(dir.path(), &["check", "--mesh", "g.mesh"])), 0);
    let info = stdout(&stmesh(dir.path(), &["info", "--mesh", "g.mesh"]));
    assert!(info.contains("elements 2"));
    assert!(info.contains("boundary Dirichlet 4"));
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = "[mesh]
source = \"pump-chamber\"
n = 1
layers = 2

[time]
end = 1.0
slabs = 2

[motion]
kind = \"pump\"
amplitude = 0.1
reading = \"z-only\"
";
    fs::write(dir.path().join("run.toml"), cfg).unwrap();
    for out in ["a", "b"] {
        let mesh = format!("{out}.mesh");
        assert_eq!(code(&stmesh(dir.path(), &["extrude", "--config", "run.toml", "--out", &mesh])), 0);
        let o = stmesh(dir.path(), &["slice", "--mesh", &mesh, "--slices", "0.25,0.6", "--out", out]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let read = |p: &str| fs::read(dir.path().join(p)).unwrap();
    assert_eq!(read("a.mesh"), read("b.mesh"));
    for f in ["slice_000.vtk", "slice_001.vtk"] {
        let a = read(&format!("a/{f}"));
        assert_eq!(a, read(&format!("b/{f}")));
        assert!(String::from_utf8_lossy(&a).starts_with("# vtk DataFile Version"));
    }
}

#[test]
fn slice_outside_time_range_fails() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("sq.mesh"), SORTED_SQUARE).unwrap();
    stmesh(dir.path(), &["extrude", "--mesh", "sq.mesh", "--out", "st.mesh"]);
    let o = stmesh(dir.path(), &["slice", "--mesh", "st.mesh", "--slices", "2.0", "--out", "s"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn manufactured_solve_writes_decreasing_errors() {
    let dir = TempDir::new().unwrap();
    let cfg = "[mesh]
source = \"interval\"

[problem]
kind = \"manufactured\"
refinements = [4, 8, 16]

[solver]
rel_tol = 1e-10
max_iter = 2000

[output]
dir = \"out\"
";
    fs::write(dir.path().join("mms.toml"), cfg).unwrap();
    let o = stmesh(dir.path(), &["solve", "--config", "mms.toml"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("out/errors.csv")).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    let col = |i: usize| rows.iter().map(|r| r[i].parse::<f64>().unwrap()).collect::<Vec<_>>();
    let (u, p) = (col(2), col(4));
    assert!(u.windows(2).all(|w| w[1] < w[0]), "{u:?}");
    assert!(p.windows(2).all(|w| w[1] <= w[0]), "{p:?}");
}

#[test]
fn patch_solve_writes_slices_and_residuals() {
    let dir = TempDir::new().unwrap();
    let cfg = "[mesh]
source = \"unit-square\"
n = 2

[time]
end = 1.0
slabs = 2

[problem]
kind = \"patch\"
velocity = [0.5, -0.25]

[output]
dir = \"out\"
slices = [0.5]
";
    fs::write(dir.path().join("patch.toml"), cfg).unwrap();
    let o = stmesh(dir.path(), &["solve", "--config", "patch.toml", "--tol", "1e-12", "--sigma-u", "20"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let out = dir.path().join("out");
    let vtk = fs::read_to_string(out.join("solution_000.vtk")).unwrap();
    assert!(vtk.contains("velocity"));
    assert!(vtk.contains("pressure"));
    let residuals = fs::read_to_string(out.join("residuals.csv")).unwrap();
    assert!(residuals.starts_with("iteration,relative_residual"));
    let errors = fs::read_to_string(out.join("errors.csv")).unwrap();
    let eu: f64 = errors.lines().nth(1).unwrap().split(',').nth(2).unwrap().parse().unwrap();
    assert!(eu < 1e-8, "{eu}");
}

#[test]
fn solver_failure_exits_with_six() {
    let dir = TempDir::new().unwrap();
    let cfg = "[mesh]
source = \"unit-square\"
n = 3

[time]
slabs = 2

[problem]
kind = \"patch\"
velocity = [1.0, 1.0]

[solver]
max_iter = 1
preconditioner = \"none\"
rel_tol = 1e-12
";
    fs::write(dir.path().join("s.toml"), cfg).unwrap();
    assert_eq!(code(&stmesh(dir.path(), &["solve", "--config", "s.toml", "--out", "o"])), 6);
}

#[test]
fn bad_config_exits_with_two() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("c.toml"), "[time]\nslabs = 0\n").unwrap();
    assert_eq!(code(&stmesh(dir.path(), &["solve", "--config", "c.toml"])), 2);
    fs::write(dir.path().join("d.toml"), "[mesh]\nunknown = 1\n").unwrap();
    assert_eq!(code(&stmesh(dir.path(), &["solve", "--config", "d.toml"])), 2);
}
