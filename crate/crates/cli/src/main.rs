//! `stmesh`: mesh checks, space-time extrusion, slicing and the DG solver
//! from the command line.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use stmesh_core::dg::{self, DgError, ProblemData};
use stmesh_core::extrusion::{extrude_multi, uniform_levels, ExtrudeError, ExtrudeOptions};
use stmesh_core::io::config::{MeshSource, ProblemChoice};
use stmesh_core::io::csv::{write_errors, write_residuals, ErrorRow};
use stmesh_core::io::{self, vtk, IoError, RunConfig};
use stmesh_core::krylov::KrylovError;
use stmesh_core::mesh::{check_admissible, check_consistent, make_consistent, Violation};
use stmesh_core::meshgen;
use stmesh_core::motion::{MotionError, MotionSpec};
use stmesh_core::slicing::{slice_mesh, SliceError};
use stmesh_core::{BoundaryClass, BoundaryTag, MeshError, SimplexMesh, SpaceTimeMesh64, SpatialMesh64};

const EXIT_PARSE: u8 = 2;
const EXIT_CONSISTENCY: u8 = 3;
const EXIT_ADMISSIBILITY: u8 = 4;
const EXIT_DEGENERATE: u8 = 5;
const EXIT_SOLVER: u8 = 6;

#[derive(Parser)]
#[command(name = "stmesh", version, about = "Space-time simplex meshes and a space-time DG Stokes solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print counts and measures of a spatial or space-time mesh file.
    Info {
        #[arg(long)]
        mesh: PathBuf,
    },
    /// Check numbering and admissibility of a spatial mesh.
    Check {
        #[arg(long)]
        mesh: PathBuf,
        /// Sort element nodes before checking and write the result here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extrude a spatial mesh into a space-time mesh.
    Extrude {
        #[command(flatten)]
        input: Input,
        /// Number of slabs; overrides the config.
        #[arg(long)]
        slabs: Option<usize>,
        /// Final time; overrides the config.
        #[arg(long)]
        end: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write constant-time slices of a space-time mesh as VTK files.
    Slice {
        /// Space-time mesh file; without it the mesh is built from `--config`.
        #[arg(long)]
        mesh: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        slices: Vec<f64>,
        #[arg(long)]
        no_check: bool,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the DG pipeline described by a config file.
    Solve {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides the config.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        slices: Option<Vec<f64>>,
        /// Relative GMRES tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        sigma_u: Option<f64>,
        #[arg(long)]
        sigma_p: Option<f64>,
        #[arg(long)]
        no_check: bool,
    },
    /// Write a generated spatial mesh.
    Generate {
        #[arg(value_enum)]
        kind: Generated,
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Axial layers of cylinders.
        #[arg(long, default_value_t = 2)]
        layers: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Input {
    /// Spatial mesh file.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    mesh: Option<PathBuf>,
    /// Run config providing mesh, time levels and motion.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Skip consistency, admissibility and degeneracy checks.
    #[arg(long)]
    no_check: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Generated {
    Interval,
    UnitSquare,
    UnitCube,
    Disk,
    PumpChamber,
    Pipe,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Info { mesh } => info(&mesh),
        Command::Check { mesh, out } => check(&mesh, out.as_deref()),
        Command::Extrude {
            input,
            slabs,
            end,
            out,
        } => extrude(&input, slabs, end, &out),
        Command::Slice {
            mesh,
            config,
            slices,
            no_check,
            out,
        } => slice(mesh.as_deref(), config.as_deref(), &slices, no_check, &out),
        Command::Solve {
            config,
            out,
            slices,
            tol,
            sigma_u,
            sigma_p,
            no_check,
        } => {
            let overrides = Overrides {
                out,
                slices,
                tol,
                sigma_u,
                sigma_p,
                no_check,
            };
            solve(&config, overrides)
        }
        Command::Generate { kind, n, layers, out } => generate(kind, n, layers, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(e) = cause.downcast_ref::<IoError>() {
            return io_code(e);
        }
        if let Some(e) = cause.downcast_ref::<MeshError>() {
            return mesh_code(e);
        }
        if let Some(e) = cause.downcast_ref::<ExtrudeError>() {
            return extrude_code(e);
        }
        if let Some(e) = cause.downcast_ref::<DgError>() {
            return dg_code(e);
        }
        if cause.downcast_ref::<KrylovError>().is_some() {
            return EXIT_SOLVER;
        }
        if let Some(e) = cause.downcast_ref::<MotionError>() {
            return motion_code(e);
        }
        if cause.downcast_ref::<SliceError>().is_some() || cause.downcast_ref::<std::io::Error>().is_some() {
            return EXIT_PARSE;
        }
        if let Some(Failure(code)) = cause.downcast_ref::<Failure>() {
            return *code;
        }
    }
    1
}

fn io_code(e: &IoError) -> u8 {
    match e {
        IoError::Mesh(m) => mesh_code(m),
        IoError::Inconsistent(_) => EXIT_CONSISTENCY,
        IoError::NotAdmissible(_) => EXIT_ADMISSIBILITY,
        IoError::Parse { .. } | IoError::Io(_) | IoError::Config(_) => EXIT_PARSE,
    }
}

fn mesh_code(e: &MeshError) -> u8 {
    match e {
        MeshError::Inconsistent(_) => EXIT_CONSISTENCY,
        MeshError::NonManifoldFacet { .. } | MeshError::DuplicateElement(..) => EXIT_ADMISSIBILITY,
        MeshError::Degenerate { .. } | MeshError::DegenerateFacet { .. } | MeshError::NonPositiveHeight(_) => {
            EXIT_DEGENERATE
        }
        MeshError::Slab { source, .. } => mesh_code(source),
        _ => EXIT_PARSE,
    }
}

fn extrude_code(e: &ExtrudeError) -> u8 {
    match e {
        ExtrudeError::Mesh(m) => mesh_code(m),
        ExtrudeError::Motion { source, .. } => motion_code(source),
    }
}

fn motion_code(e: &MotionError) -> u8 {
    match e {
        MotionError::Solver(_) => EXIT_SOLVER,
        _ => EXIT_PARSE,
    }
}

fn dg_code(e: &DgError) -> u8 {
    match e {
        DgError::Mesh(m) => mesh_code(m),
        DgError::Solver(_) => EXIT_SOLVER,
        DgError::Config(_) | DgError::Dimension { .. } => EXIT_PARSE,
    }
}

/// Check failure with its exit code, after the report has been printed.
#[derive(Debug)]
struct Failure(u8);

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.0 {
            EXIT_CONSISTENCY => write!(f, "mesh is not consistently numbered"),
            EXIT_ADMISSIBILITY => write!(f, "mesh is not admissible"),
            EXIT_DEGENERATE => write!(f, "mesh has degenerate elements"),
            code => write!(f, "check failed ({code})"),
        }
    }
}

impl std::error::Error for Failure {}

fn is_spacetime(path: &Path) -> Result<bool> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let header = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    Ok(header.split_whitespace().nth(2) == Some("spacetime"))
}

fn info(path: &Path) -> Result<()> {
    if is_spacetime(path)? {
        let m: SpaceTimeMesh64 = io::read_spacetime_mesh(path)?;
        println!("space-time mesh, space dimension {}", m.space_dim());
        println!("nodes {}", m.num_nodes());
        println!("elements {}", m.num_elements());
        println!("slabs {}", m.num_slabs());
        println!("time [{}, {}]", m.start_time(), m.end_time());
        println!("measure {:.12e}", m.total_measure());
        println!("interior facets {}", m.interior_facets.len());
        for class in [
            BoundaryClass::Sigma0,
            BoundaryClass::SigmaT,
            BoundaryClass::SigmaD,
            BoundaryClass::SigmaR,
            BoundaryClass::Unclassified,
        ] {
            let n = m.boundary_of_class(class).count();
            if n > 0 {
                println!("boundary {} {n}", class.as_str());
            }
        }
    } else {
        let m: SpatialMesh64 = io::read_mesh(path, false)?;
        println!("spatial mesh, dimension {}", m.dim());
        println!("nodes {}", m.num_nodes());
        println!("elements {}", m.num_elements());
        println!("measure {:.12e}", m.total_measure());
        for tag in BoundaryTag::ALL {
            let n = m.boundary_tags.values().filter(|&&t| t == tag).count();
            if n > 0 {
                println!("boundary {tag} {n}");
            }
        }
    }
    Ok(())
}

fn check(path: &Path, out: Option<&Path>) -> Result<()> {
    let mut mesh: SpatialMesh64 = io::read_mesh(path, false)?;
    if let Some(out) = out {
        mesh = make_consistent(mesh);
        io::write_mesh(out, &mesh)?;
    }
    let consistency = check_consistent(&mesh.elements)?;
    println!("consistency violations {}", consistency.violations.len());
    let report = check_admissible(&mesh);
    let degenerate = report.degenerate().count();
    println!("pairs checked {}", report.pairs_checked);
    println!("degenerate elements {degenerate}");
    println!("admissibility violations {}", report.violations.len() - degenerate);
    for v in report.violations.iter().take(10) {
        match v {
            Violation::Degenerate { element, measure } => println!("  degenerate element {element} ({measure:e})"),
            Violation::Overlap { a, b } => println!("  elements {a} and {b} overlap"),
            Violation::HangingNode { node, element, host } => {
                println!("  node {node} of element {element} hangs on element {host}")
            }
            Violation::NonManifoldFacet { facet, count } => println!("  facet {facet:?} shared by {count} elements"),
            Violation::DuplicateElement { a, b } => println!("  elements {a} and {b} coincide"),
        }
    }
    if !consistency.is_consistent() {
        return Err(Failure(EXIT_CONSISTENCY).into());
    }
    if degenerate > 0 {
        return Err(Failure(EXIT_DEGENERATE).into());
    }
    if !report.is_admissible() {
        return Err(Failure(EXIT_ADMISSIBILITY).into());
    }
    println!("ok");
    Ok(())
}

fn options(no_check: bool) -> ExtrudeOptions {
    ExtrudeOptions {
        check_consistency: !no_check,
        check_degeneracy: !no_check,
    }
}

fn read_config(path: &Path) -> Result<RunConfig> {
    RunConfig::read(path).with_context(|| format!("config {}", path.display()))
}

/// Spatial mesh, time levels and motion of an extrusion.
fn extrusion_input(input: &Input, slabs: Option<usize>, end: Option<f64>) -> Result<(SpatialMesh64, Vec<f64>, MotionSpec<f64>)> {
    let (mesh, mut levels, motion) = match (&input.mesh, &input.config) {
        (Some(path), _) => {
            let mesh = io::read_mesh(path, !input.no_check)?;
            (mesh, uniform_levels(1.0, 1), MotionSpec::none())
        }
        (None, Some(path)) => {
            let mut cfg = read_config(path)?;
            if input.no_check {
                cfg.mesh.check = false;
            }
            (cfg.spatial_mesh(None)?, cfg.levels(), cfg.motion_spec()?)
        }
        (None, None) => bail!("need --mesh or --config"),
    };
    if slabs.is_some() || end.is_some() {
        let t1 = end.unwrap_or(levels[levels.len() - 1]);
        let k = slabs.unwrap_or(levels.len() - 1);
        if !(t1 > 0.0) || k == 0 {
            return Err(IoError::Config(format!("need end > 0 and slabs >= 1, got {t1} and {k}")).into());
        }
        levels = uniform_levels(t1, k);
    }
    Ok((mesh, levels, motion))
}

fn extrude(input: &Input, slabs: Option<usize>, end: Option<f64>, out: &Path) -> Result<()> {
    let (mesh, levels, motion) = extrusion_input(input, slabs, end)?;
    let st = extrude_multi(&mesh, &levels, &motion, options(input.no_check))?;
    io::write_spacetime_mesh(out, &st)?;
    println!(
        "{} elements, {} nodes, {} slabs -> {}",
        st.num_elements(),
        st.num_nodes(),
        st.num_slabs(),
        out.display()
    );
    Ok(())
}

fn slice(mesh: Option<&Path>, config: Option<&Path>, times: &[f64], no_check: bool, out: &Path) -> Result<()> {
    let st = match (mesh, config) {
        (Some(path), _) => io::read_spacetime_mesh(path)?,
        (None, Some(path)) => {
            let input = Input {
                mesh: None,
                config: Some(path.to_path_buf()),
                no_check,
            };
            let (mesh, levels, motion) = extrusion_input(&input, None, None)?;
            extrude_multi(&mesh, &levels, &motion, options(no_check))?
        }
        (None, None) => bail!("need --mesh or --config"),
    };
    if times.is_empty() {
        bail!(IoError::Config("no slice times given".into()));
    }
    fs::create_dir_all(out)?;
    for (i, &t) in times.iter().enumerate() {
        let s = slice_mesh(&st, t, &[])?;
        let file = out.join(format!("slice_{i:03}.vtk"));
        vtk::write_slice(&file, &s, &format!("slice t = {t}"))?;
        println!(
            "t = {t}: {} cells, measure {:.12e} -> {}",
            s.cells.len(),
            s.total_measure(),
            file.display()
        );
    }
    Ok(())
}

struct Overrides {
    out: Option<PathBuf>,
    slices: Option<Vec<f64>>,
    tol: Option<f64>,
    sigma_u: Option<f64>,
    sigma_p: Option<f64>,
    no_check: bool,
}

fn solve(path: &Path, o: Overrides) -> Result<()> {
    let mut cfg = read_config(path)?;
    if let Some(out) = o.out {
        cfg.output.dir = out;
    }
    if let Some(s) = o.slices {
        cfg.output.slices = s;
    }
    if let Some(t) = o.tol {
        cfg.solver.rel_tol = t;
    }
    if let Some(s) = o.sigma_u {
        cfg.solver.sigma_u = s;
    }
    if let Some(s) = o.sigma_p {
        cfg.solver.sigma_p = s;
    }
    if o.no_check {
        cfg.mesh.check = false;
    }
    cfg.validate()?;
    fs::create_dir_all(&cfg.output.dir)?;
    if cfg.problem.kind == ProblemChoice::Manufactured && !cfg.problem.refinements.is_empty() {
        return convergence_study(&cfg);
    }

    let mesh = cfg.spatial_mesh(None)?;
    let motion = cfg.motion_spec()?;
    let st = extrude_multi(&mesh, &cfg.levels(), &motion, options(o.no_check))?;
    let (data, exact) = problem(&cfg, mesh.dim(), motion)?;
    let sol = dg::solve(&st, &data, &cfg.solver_config())?;
    println!(
        "{} elements, {} unknowns, {} GMRES iterations, final residual {:.3e}",
        st.num_elements(),
        sol.velocity.len() + sol.pressure.len(),
        sol.iterations,
        sol.history.last().copied().unwrap_or(0.0)
    );
    write_residuals(&cfg.output.dir.join("residuals.csv"), &sol.history)?;
    if let Some(exact) = exact {
        let eu = sol.velocity_l2_error(&st, |x, t| (exact.velocity)(x, t))?;
        let ep = sol.pressure_l2_error(&st, |x, t| (exact.pressure)(x, t))?;
        println!("velocity L2 error {eu:.6e}, pressure L2 error {ep:.6e}");
        let row = ErrorRow {
            cells: mesh.num_elements(),
            h: st.h.iter().copied().fold(0.0, f64::max),
            velocity_l2: eu,
            pressure_l2: ep,
            iterations: sol.iterations,
        };
        write_errors(&cfg.output.dir.join("errors.csv"), &[row])?;
    }
    let fields = [sol.velocity_field("velocity"), sol.pressure_field("pressure")];
    for (i, &t) in cfg.output.slices.iter().enumerate() {
        let s = slice_mesh(&st, t, &fields)?;
        let file = cfg.output.dir.join(format!("solution_{i:03}.vtk"));
        vtk::write_slice(&file, &s, &format!("solution t = {t}"))?;
        println!("t = {t}: {} cells -> {}", s.cells.len(), file.display());
    }
    Ok(())
}

type Exact = Option<dg::ManufacturedSolution<f64>>;

fn problem(cfg: &RunConfig, dim: usize, motion: MotionSpec<f64>) -> Result<(ProblemData<f64>, Exact)> {
    let nu = cfg.problem.viscosity;
    let mismatch = |want: usize| IoError::Config(format!("problem needs a {want}-dimensional mesh, got {dim}"));
    Ok(match cfg.problem.kind {
        ProblemChoice::Zero => (ProblemData::zero(dim, nu), None),
        ProblemChoice::Patch => {
            let mut u = cfg.problem.velocity.clone();
            if u.is_empty() {
                u = vec![1.0; dim];
            }
            if u.len() != dim {
                return Err(mismatch(u.len()).into());
            }
            let (mut data, exact) = dg::patch_problem(u);
            data.viscosity = nu;
            (data, Some(exact))
        }
        ProblemChoice::Manufactured => {
            if dim != 1 {
                return Err(mismatch(1).into());
            }
            let (data, exact) = dg::manufactured_1d(nu);
            (data, Some(exact))
        }
        ProblemChoice::Pump => {
            if dim != 3 {
                return Err(mismatch(3).into());
            }
            (dg::pump_problem(motion, nu), None)
        }
    })
}

/// Manufactured solution on `[0, 1]` with `n` cells and `n` slabs for
/// every `n` in the refinement list.
fn convergence_study(cfg: &RunConfig) -> Result<()> {
    if !matches!(cfg.mesh.source, MeshSource::Interval) {
        return Err(IoError::Config("a convergence study needs `source = \"interval\"`".into()).into());
    }
    let end = cfg.levels()[cfg.levels().len() - 1];
    let (data, exact) = dg::manufactured_1d(cfg.problem.viscosity);
    let mut rows = Vec::new();
    for &n in &cfg.problem.refinements {
        let st = extrude_multi(&meshgen::unit_interval(n), &uniform_levels(end, n), &MotionSpec::none(), Default::default())?;
        let sol = dg::solve(&st, &data, &cfg.solver_config())?;
        let eu = sol.velocity_l2_error(&st, |x, t| (exact.velocity)(x, t))?;
        let ep = sol.pressure_l2_error(&st, |x, t| (exact.pressure)(x, t))?;
        println!("n = {n}: velocity {eu:.6e}, pressure {ep:.6e}, {} iterations", sol.iterations);
        rows.push(ErrorRow {
            cells: n,
            h: 1.0 / n as f64,
            velocity_l2: eu,
            pressure_l2: ep,
            iterations: sol.iterations,
        });
    }
    let file = cfg.output.dir.join("errors.csv");
    write_errors(&file, &rows)?;
    println!("-> {}", file.display());
    Ok(())
}

fn generate(kind: Generated, n: usize, layers: usize, out: &Path) -> Result<()> {
    if n == 0 || layers == 0 {
        return Err(anyhow!(IoError::Config("n and layers must be positive".into())));
    }
    let mesh: SpatialMesh64 = match kind {
        Generated::Interval => meshgen::unit_interval(n),
        Generated::UnitSquare => meshgen::unit_square(n),
        Generated::UnitCube => meshgen::unit_cube(n),
        Generated::Disk => meshgen::disk(1.0, n),
        Generated::PumpChamber => meshgen::pump_chamber(n, layers),
        Generated::Pipe => meshgen::pipe(n, layers),
    };
    io::write_mesh(out, &mesh)?;
    println!("{} elements, {} nodes -> {}", mesh.num_elements(), mesh.num_nodes(), out.display());
    Ok(())
}
