//! Constant-deficit level surfaces in (c1, c2, c3) space at fixed s.
//!
//! The deficit field is sampled on a corner-aligned grid over [-1, 1]^3;
//! unphysical points (and, in closed-form mode, points outside the
//! ordering condition) are not-defined and excluded. Surfaces come out
//! either as the grid points within a value band or as a triangle mesh
//! from a marching-tetrahedra split of each fully-defined cell.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::closed_form::{entropy_x_state, owid_x_state, Boundary};
use crate::error::{Error, Result};
use crate::linalg::EIGENVALUE_FLOOR;
use crate::oracle::{min_measured_entropy_x_reduced, OptimizerConfig};
use crate::states::{x_state_spectrum, XStateParams};

/// How the deficit field is evaluated at a grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldEvaluator {
    /// Closed form; defined only where the ordering condition holds.
    ClosedForm,
    /// Reduced sphere minimization; defined on every physical point.
    ReducedOracle,
}

/// A level-surface extraction request.
#[derive(Debug, Clone)]
pub struct SurfaceSpec {
    pub s: f64,
    pub target: f64,
    pub resolution: usize,
    pub evaluator: FieldEvaluator,
    pub band: f64,
    pub optimizer: OptimizerConfig,
}

impl SurfaceSpec {
    /// Defaults: resolution 96 cells per axis, reduced-oracle evaluator,
    /// point band 1e-3 bits, and a light sphere search per grid point.
    pub fn new(s: f64, target: f64) -> Result<Self> {
        if !target.is_finite() || target <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "target must be positive, got {target}"
            )));
        }
        if !s.is_finite() || s <= -1.0 || s >= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "s must lie in (-1, 1), got {s}"
            )));
        }
        Ok(Self {
            s,
            target,
            resolution: 96,
            evaluator: FieldEvaluator::ReducedOracle,
            band: 1e-3,
            optimizer: OptimizerConfig::new(24, 48, 120, 1e-12).expect("valid defaults"),
        })
    }

    pub fn with_resolution(mut self, resolution: usize) -> Result<Self> {
        if resolution < 16 {
            return Err(Error::InvalidArgument(format!(
                "resolution must be at least 16 cells per axis, got {resolution}"
            )));
        }
        self.resolution = resolution;
        Ok(self)
    }

    pub fn with_evaluator(mut self, evaluator: FieldEvaluator) -> Self {
        self.evaluator = evaluator;
        self
    }

    pub fn with_band(mut self, band: f64) -> Result<Self> {
        if !band.is_finite() || band <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "band must be positive, got {band}"
            )));
        }
        self.band = band;
        Ok(self)
    }

    pub fn with_optimizer(mut self, optimizer: OptimizerConfig) -> Self {
        self.optimizer = optimizer;
        self
    }
}

/// The deficit at one point of the cube, or `None` where the field is
/// not defined (unphysical, or outside the closed form's domain).
pub fn owid_field(
    s: f64,
    c: [f64; 3],
    evaluator: FieldEvaluator,
    cfg: &OptimizerConfig,
) -> Option<f64> {
    if s <= -1.0 || s >= 1.0 || c.iter().any(|v| v.abs() > 1.0) {
        return None;
    }
    if x_state_spectrum(s, c).min() < EIGENVALUE_FLOOR {
        return None;
    }
    let params = XStateParams::new(s, c[0], c[1], c[2]).expect("checked physical");
    match evaluator {
        FieldEvaluator::ClosedForm => owid_x_state(&params, Boundary::Strict).ok().map(|v| v.bits),
        FieldEvaluator::ReducedOracle => {
            let minimum = min_measured_entropy_x_reduced(&params, cfg);
            Some((minimum - entropy_x_state(&params)).max(0.0))
        }
    }
}

/// One emitted sample: a physical point of the cube and its deficit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub c: [f64; 3],
    pub owid: f64,
}

/// A sampled iso-surface: band-selected grid points plus a triangle mesh.
#[derive(Debug, Clone)]
pub struct LevelSurfaceSample {
    /// Grid points with |owid - target| <= band.
    pub points: Vec<SurfacePoint>,
    /// Mesh vertices (interpolated onto the surface, owid = target).
    pub vertices: Vec<SurfacePoint>,
    /// Triangles indexing into `vertices`.
    pub triangles: Vec<[usize; 3]>,
    pub grid_points_total: usize,
    pub grid_points_defined: usize,
    pub diagnostic: Option<String>,
}

impl LevelSurfaceSample {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.triangles.is_empty()
    }
}

struct FieldGrid {
    values: Vec<Option<f64>>,
    axis: Vec<f64>,
    n: usize,
}

impl FieldGrid {
    fn at(&self, i: usize, j: usize, k: usize) -> Option<f64> {
        self.values[(i * self.n + j) * self.n + k]
    }
}

fn evaluate_grid(
    s: f64,
    resolution: usize,
    evaluator: FieldEvaluator,
    cfg: &OptimizerConfig,
) -> FieldGrid {
    let n = resolution + 1;
    let axis: Vec<f64> = (0..n)
        .map(|i| -1.0 + 2.0 * i as f64 / resolution as f64)
        .collect();
    let values: Vec<Option<f64>> = (0..n * n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, jk) = (idx / (n * n), idx % (n * n));
            let (j, k) = (jk / n, jk % n);
            owid_field(s, [axis[i], axis[j], axis[k]], evaluator, cfg)
        })
        .collect();
    FieldGrid { values, axis, n }
}

/// Grid points where the field is defined and at least `target`; a
/// coarse proxy for the volume the surface encloses.
pub fn superlevel_count(
    s: f64,
    target: f64,
    resolution: usize,
    evaluator: FieldEvaluator,
    cfg: &OptimizerConfig,
) -> usize {
    evaluate_grid(s, resolution, evaluator, cfg)
        .values
        .iter()
        .filter(|v| matches!(v, Some(x) if *x >= target))
        .count()
}

// Cube corners indexed by bits (x, y<<1, z<<2); the six tetrahedra share
// the 0-7 main diagonal, so faces of neighboring cells match up.
const TETRAHEDRA: [[usize; 4]; 6] = [
    [0, 1, 3, 7],
    [0, 3, 2, 7],
    [0, 2, 6, 7],
    [0, 6, 4, 7],
    [0, 4, 5, 7],
    [0, 5, 1, 7],
];

/// Sample the constant-deficit surface described by `spec`.
///
/// Deterministic for a fixed spec: the grid is evaluated in index order
/// and cells are marched in index order.
pub fn sample_level_surface(spec: &SurfaceSpec) -> Result<LevelSurfaceSample> {
    if spec.resolution < 16 {
        return Err(Error::InvalidArgument(format!(
            "resolution must be at least 16 cells per axis, got {}",
            spec.resolution
        )));
    }
    if !spec.target.is_finite() || spec.target <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "target must be positive, got {}",
            spec.target
        )));
    }

    let grid = evaluate_grid(spec.s, spec.resolution, spec.evaluator, &spec.optimizer);
    let n = grid.n;

    let mut points = Vec::new();
    let mut max_defined = f64::NEG_INFINITY;
    let mut defined = 0usize;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if let Some(v) = grid.at(i, j, k) {
                    defined += 1;
                    max_defined = max_defined.max(v);
                    if (v - spec.target).abs() <= spec.band {
                        points.push(SurfacePoint {
                            c: [grid.axis[i], grid.axis[j], grid.axis[k]],
                            owid: v,
                        });
                    }
                }
            }
        }
    }

    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    let corner_offsets: [[usize; 3]; 8] =
        std::array::from_fn(|b| [b & 1, (b >> 1) & 1, (b >> 2) & 1]);
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            for k in 0..n - 1 {
                let mut corner_values = [0.0; 8];
                let mut corner_pos = [[0.0; 3]; 8];
                let mut all_defined = true;
                for (b, off) in corner_offsets.iter().enumerate() {
                    match grid.at(i + off[0], j + off[1], k + off[2]) {
                        Some(v) => {
                            corner_values[b] = v;
                            corner_pos[b] = [
                                grid.axis[i + off[0]],
                                grid.axis[j + off[1]],
                                grid.axis[k + off[2]],
                            ];
                        }
                        None => {
                            all_defined = false;
                            break;
                        }
                    }
                }
                if !all_defined {
                    continue;
                }
                for tet in &TETRAHEDRA {
                    march_tetrahedron(
                        tet.map(|b| corner_pos[b]),
                        tet.map(|b| corner_values[b]),
                        spec.target,
                        &mut vertices,
                        &mut triangles,
                    );
                }
            }
        }
    }

    let diagnostic = if points.is_empty() && triangles.is_empty() {
        Some(if max_defined == f64::NEG_INFINITY {
            "no physical grid points".to_string()
        } else {
            format!(
                "empty surface: target {} exceeds the field maximum {:.6} on the grid",
                spec.target, max_defined
            )
        })
    } else {
        None
    };

    Ok(LevelSurfaceSample {
        points,
        vertices,
        triangles,
        grid_points_total: n * n * n,
        grid_points_defined: defined,
        diagnostic,
    })
}

fn march_tetrahedron(
    pos: [[f64; 3]; 4],
    val: [f64; 4],
    target: f64,
    vertices: &mut Vec<SurfacePoint>,
    triangles: &mut Vec<[usize; 3]>,
) {
    let above: Vec<usize> = (0..4).filter(|&i| val[i] > target).collect();
    let below: Vec<usize> = (0..4).filter(|&i| val[i] <= target).collect();

    let mut cross = |a: usize, b: usize| -> usize {
        let t = (target - val[a]) / (val[b] - val[a]);
        let c = std::array::from_fn(|d| pos[a][d] + t * (pos[b][d] - pos[a][d]));
        vertices.push(SurfacePoint { c, owid: target });
        vertices.len() - 1
    };

    match above.len() {
        1 => {
            let a = above[0];
            let v = [cross(a, below[0]), cross(a, below[1]), cross(a, below[2])];
            triangles.push(v);
        }
        3 => {
            let b = below[0];
            let v = [cross(above[0], b), cross(above[1], b), cross(above[2], b)];
            triangles.push(v);
        }
        2 => {
            let (a0, a1) = (above[0], above[1]);
            let (b0, b1) = (below[0], below[1]);
            let q0 = cross(a0, b0);
            let q1 = cross(a0, b1);
            let q2 = cross(a1, b1);
            let q3 = cross(a1, b0);
            triangles.push([q0, q1, q2]);
            triangles.push([q0, q2, q3]);
        }
        _ => {}
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    /// CSV rows `c1,c2,c3,owid` of the band-selected grid points.
    CsvPoints,
    /// Wavefront OBJ of the extracted triangle mesh.
    ObjMesh,
}

/// Twelve significant digits, plenty for a 1e-6 round trip.
fn fmt_coord(x: f64) -> String {
    let mut out = format!("{x:.12}");
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    out
}

/// Write a sample to `path` in the chosen format.
pub fn export_surface(
    sample: &LevelSurfaceSample,
    format: ExportFormat,
    path: &Path,
) -> Result<()> {
    let body = match format {
        ExportFormat::CsvPoints => {
            let mut text = String::from("c1,c2,c3,owid\n");
            for p in &sample.points {
                let _ = writeln!(
                    text,
                    "{},{},{},{}",
                    fmt_coord(p.c[0]),
                    fmt_coord(p.c[1]),
                    fmt_coord(p.c[2]),
                    fmt_coord(p.owid)
                );
            }
            text
        }
        ExportFormat::ObjMesh => {
            if sample.triangles.is_empty() {
                return Err(Error::InvalidArgument(
                    "refusing to write an OBJ mesh with no triangles".into(),
                ));
            }
            let mut text = String::new();
            for v in &sample.vertices {
                let _ = writeln!(
                    text,
                    "v {} {} {}",
                    fmt_coord(v.c[0]),
                    fmt_coord(v.c[1]),
                    fmt_coord(v.c[2])
                );
            }
            for t in &sample.triangles {
                let _ = writeln!(text, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
            }
            text
        }
    };
    std::fs::write(path, body).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
