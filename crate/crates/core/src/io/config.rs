//! TOML run configuration.
//!
//! ```toml
//! [mesh]
//! source = "unit-square"   # file | gmsh | interval | unit-square | unit-cube | pump-chamber | pipe
//! n = 4                    # cells per direction, rings for cylinders
//! layers = 2               # axial layers for cylinders
//!
//! [time]
//! end = 1.0
//! slabs = 4
//!
//! [motion]
//! kind = "pump"            # none | pump | ypipe | tabulated
//! amplitude = 0.1
//! reading = "z-only"
//!
//! [problem]
//! kind = "pump"            # zero | patch | manufactured | pump
//!
//! [solver]
//! sigma_u = 40.0
//! rel_tol = 1e-5
//!
//! [output]
//! dir = "out"
//! slices = [0.25, 0.5]
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::IoError;
use crate::dg::{PreconditionerKind, PressurePin, SolverConfig};
use crate::extrusion::uniform_levels;
use crate::krylov::GmresConfig;
use crate::mesh::{BoundaryTag, SpatialMesh};
use crate::meshgen;
use crate::motion::{
    DisplacementField, MotionKind, MotionSpec, PumpParams, PumpReading, Smoothing, TabulatedMotion,
    YPipeParams,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeshSource {
    #[default]
    File,
    Gmsh,
    Interval,
    UnitSquare,
    UnitCube,
    PumpChamber,
    Pipe,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MeshSection {
    pub source: MeshSource,
    pub path: Option<PathBuf>,
    pub n: usize,
    pub layers: usize,
    pub check: bool,
}

impl Default for MeshSection {
    fn default() -> Self {
        Self {
            source: MeshSource::File,
            path: None,
            n: 4,
            layers: 2,
            check: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeSection {
    pub end: f64,
    pub slabs: usize,
    /// Explicit time levels; overrides `end` and `slabs`.
    pub levels: Option<Vec<f64>>,
}

impl Default for TimeSection {
    fn default() -> Self {
        Self {
            end: 1.0,
            slabs: 1,
            levels: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MotionChoice {
    #[default]
    None,
    Pump,
    Ypipe,
    Tabulated,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MotionSection {
    pub kind: MotionChoice,
    pub amplitude: Option<f64>,
    pub rest_height: Option<f64>,
    pub radius: Option<f64>,
    pub reading: PumpReading,
    pub anchor: Option<f64>,
    pub length: Option<f64>,
    pub smoothing: Smoothing,
    /// Tabulated per-node displacements, see [`parse_tabulated`].
    pub table: Option<PathBuf>,
    pub moving_tags: Option<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemChoice {
    /// Homogeneous data.
    Zero,
    /// Constant velocity, zero pressure.
    Patch,
    /// Smooth exact solution in one space dimension.
    Manufactured,
    /// Moving wall with valves.
    #[default]
    Pump,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProblemSection {
    pub kind: ProblemChoice,
    pub viscosity: f64,
    /// Velocity of the patch test.
    pub velocity: Vec<f64>,
    /// Cells per direction of a convergence study; empty runs once.
    pub refinements: Vec<usize>,
}

impl Default for ProblemSection {
    fn default() -> Self {
        Self {
            kind: ProblemChoice::Pump,
            viscosity: 1.0,
            velocity: Vec::new(),
            refinements: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    pub sigma_u: f64,
    pub sigma_p: f64,
    pub restart: usize,
    pub max_iter: usize,
    pub rel_tol: f64,
    pub preconditioner: PreconditionerKind,
    pub pressure_pin: PressurePin,
}

impl Default for SolverSection {
    fn default() -> Self {
        let c = SolverConfig::<f64>::default();
        Self {
            sigma_u: c.sigma_u,
            sigma_p: c.sigma_p,
            restart: c.gmres.restart,
            max_iter: c.gmres.max_iter,
            rel_tol: c.gmres.rel_tol,
            preconditioner: c.preconditioner,
            pressure_pin: c.pressure_pin,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
    pub slices: Vec<f64>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            slices: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub mesh: MeshSection,
    pub time: TimeSection,
    pub motion: MotionSection,
    pub problem: ProblemSection,
    pub solver: SolverSection,
    pub output: OutputSection,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        let cfg: Self = toml::from_str(text).map_err(|e| IoError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; relative paths inside it are resolved against
    /// the file's directory.
    pub fn read(path: &Path) -> Result<Self, IoError> {
        let mut cfg = Self::parse(&super::read_to_string(path)?)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.mesh.path, &mut cfg.motion.table].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), IoError> {
        let err = |m: String| Err(IoError::Config(m));
        let levels = self.levels();
        if levels.len() < 2 || levels.windows(2).any(|w| !(w[1] > w[0])) {
            return err(format!("time levels must increase: {levels:?}"));
        }
        if self.time.levels.is_none() && (!(self.time.end > 0.0) || self.time.slabs == 0) {
            return err("need end > 0 and slabs >= 1".into());
        }
        let (t0, t1) = (levels[0], levels[levels.len() - 1]);
        if let Some(t) = self.output.slices.iter().find(|&&t| t < t0 || t > t1) {
            return err(format!("slice time {t} outside [{t0}, {t1}]"));
        }
        let s = &self.solver;
        if !(s.sigma_u > 0.0 && s.sigma_p > 0.0) {
            return err("penalties must be positive".into());
        }
        if !(s.rel_tol > 0.0 && s.rel_tol < 1.0) {
            return err(format!("rel_tol {} outside (0, 1)", s.rel_tol));
        }
        if !(self.problem.viscosity > 0.0) {
            return err("viscosity must be positive".into());
        }
        if self.motion.kind == MotionChoice::Tabulated && self.motion.table.is_none() {
            return err("tabulated motion needs `table`".into());
        }
        Ok(())
    }

    pub fn levels(&self) -> Vec<f64> {
        match &self.time.levels {
            Some(l) => l.clone(),
            None => uniform_levels(self.time.end, self.time.slabs.max(1)),
        }
    }

    pub fn solver_config(&self) -> SolverConfig<f64> {
        let s = &self.solver;
        SolverConfig {
            sigma_u: s.sigma_u,
            sigma_p: s.sigma_p,
            gmres: GmresConfig {
                restart: s.restart,
                max_iter: s.max_iter,
                rel_tol: s.rel_tol,
            },
            preconditioner: s.preconditioner,
            pressure_pin: s.pressure_pin,
        }
    }

    /// Builds or reads the spatial mesh; `n` overrides the configured
    /// resolution of generated meshes.
    pub fn spatial_mesh(&self, n: Option<usize>) -> Result<SpatialMesh<f64>, IoError> {
        let m = &self.mesh;
        let n = n.unwrap_or(m.n).max(1);
        let path = || {
            m.path
                .as_deref()
                .ok_or_else(|| IoError::Config("mesh source needs `path`".into()))
        };
        Ok(match m.source {
            MeshSource::File => super::read_mesh(path()?, m.check)?,
            MeshSource::Gmsh => {
                let mesh = super::gmsh::read_gmsh(path()?)?;
                if m.check {
                    super::mesh_file::check_mesh(&mesh)?;
                }
                mesh
            }
            MeshSource::Interval => meshgen::unit_interval(n),
            MeshSource::UnitSquare => meshgen::unit_square(n),
            MeshSource::UnitCube => meshgen::unit_cube(n),
            MeshSource::PumpChamber => meshgen::pump_chamber(n, m.layers.max(1)),
            MeshSource::Pipe => meshgen::pipe(n, m.layers.max(1)),
        })
    }

    pub fn motion_spec(&self) -> Result<MotionSpec<f64>, IoError> {
        let m = &self.motion;
        let kind = match m.kind {
            MotionChoice::None => MotionKind::None,
            MotionChoice::Pump => {
                let d = PumpParams::default();
                MotionKind::Pump(PumpParams {
                    rest_height: m.rest_height.unwrap_or(d.rest_height),
                    amplitude: m.amplitude.unwrap_or(d.amplitude),
                    radius: m.radius.unwrap_or(d.radius),
                    reading: m.reading,
                })
            }
            MotionChoice::Ypipe => {
                let d = YPipeParams::default();
                MotionKind::YPipe(YPipeParams {
                    amplitude: m.amplitude.unwrap_or(d.amplitude),
                    anchor: m.anchor.unwrap_or(d.anchor),
                    length: m.length.unwrap_or(d.length),
                })
            }
            MotionChoice::Tabulated => {
                let path = m.table.as_deref().expect("validated");
                MotionKind::Tabulated(parse_tabulated(&super::read_to_string(path)?)?)
            }
        };
        let mut spec = MotionSpec::new(kind);
        spec.smoothing = m.smoothing;
        if let Some(tags) = &m.moving_tags {
            spec.moving_tags = tags
                .iter()
                .map(|t| t.parse::<BoundaryTag>().map_err(IoError::Config))
                .collect::<Result<_, _>>()?;
        }
        Ok(spec)
    }
}

/// Reads per-node displacements:
///
/// ```text
/// tabulated dim 2 nodes 4 times 2
/// time 0.0
/// 0.0 0.0       # one line per node
/// ...
/// time 1.0
/// ...
/// ```
pub fn parse_tabulated(text: &str) -> Result<TabulatedMotion<f64>, IoError> {
    use super::{parse_num, Lines};
    let mut lines = Lines::new(text);
    let (l, t) = lines.next_line()?;
    if t.len() != 7 || t[0] != "tabulated" || t[1] != "dim" || t[3] != "nodes" || t[5] != "times" {
        return Err(IoError::parse(l, "expected `tabulated dim D nodes N times K`"));
    }
    let dim: usize = parse_num(l, t[2])?;
    let nodes: usize = parse_num(l, t[4])?;
    let k: usize = parse_num(l, t[6])?;
    let mut times = Vec::with_capacity(k);
    let mut fields = Vec::with_capacity(k);
    for _ in 0..k {
        let (l, t) = lines.next_line()?;
        if t.len() != 2 || t[0] != "time" {
            return Err(IoError::parse(l, "expected `time t`"));
        }
        let time: f64 = parse_num(l, t[1])?;
        if times.last().is_some_and(|&p| time <= p) {
            return Err(IoError::parse(l, "times must increase"));
        }
        times.push(time);
        let mut f = DisplacementField::zeros(dim, nodes);
        for i in 0..nodes {
            let (l, t) = lines.next_line()?;
            if t.len() != dim {
                return Err(IoError::parse(l, format!("expected {dim} values")));
            }
            let v: Vec<f64> = t.iter().map(|s| parse_num(l, s)).collect::<Result<_, _>>()?;
            f.set(i, &v);
        }
        fields.push(f);
    }
    Ok(TabulatedMotion { times, fields })
}
