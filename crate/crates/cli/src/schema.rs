//! The JSON problem file: schema, validation and normalized output.

use std::path::Path;

use drsplit_core::nalgebra::DMatrix;
use drsplit_core::{ConvexFunction, LinearSubspace, Point, Problem, ProductProblem, Tolerances, Variant};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const DEFAULT_MAX_ITERS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Dr,
    DrSwitched,
    Parallel,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Dr => "dr",
            Mode::DrSwitched => "dr-switched",
            Mode::Parallel => "parallel",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub dimension: usize,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subspace: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<FunctionSpec>>,
    pub x0: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceOverrides>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orthonormality_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixedpoint_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divergence_threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_window: Option<usize>,
}

impl ToleranceOverrides {
    pub fn apply(&self, mut tol: Tolerances) -> Tolerances {
        if let Some(v) = self.orthonormality_tol {
            tol.orthonormality_tol = v;
        }
        if let Some(v) = self.fixedpoint_tol {
            tol.fixedpoint_tol = v;
        }
        if let Some(v) = self.divergence_threshold {
            tol.divergence_threshold = v;
        }
        if let Some(v) = self.tail_window {
            tol.tail_window = v;
        }
        tol
    }

    fn full(tol: &Tolerances) -> Self {
        Self {
            orthonormality_tol: Some(tol.orthonormality_tol),
            fixedpoint_tol: Some(tol.fixedpoint_tol),
            divergence_threshold: Some(tol.divergence_threshold),
            tail_window: Some(tol.tail_window),
        }
    }
}

/// One catalog function, written as `{"variant_name": {parameters}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSpec {
    IndicatorSubspace {
        basis: Vec<Vec<f64>>,
    },
    IndicatorAffine {
        anchor: Vec<f64>,
        basis: Vec<Vec<f64>>,
    },
    IndicatorHalfspace {
        normal: Vec<f64>,
        offset: f64,
    },
    IndicatorBall {
        center: Vec<f64>,
        radius: f64,
    },
    IndicatorSingleton {
        p: Vec<f64>,
    },
    IndicatorBox {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    IndicatorEpigraphAbs {
        slope: f64,
        intercept: f64,
    },
    Quadratic {
        matrix: Vec<Vec<f64>>,
        linear: Vec<f64>,
    },
    TiltedSquaredDistance {
        basis: Vec<Vec<f64>>,
        tilt: Vec<f64>,
    },
    QuadraticAffineRestricted {
        w: Vec<f64>,
        b: Vec<f64>,
        basis: Vec<Vec<f64>>,
    },
    Translate {
        inner: Box<FunctionSpec>,
        shift: Vec<f64>,
    },
}

/// The validated content of a problem file.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedProblem {
    pub model: Model,
    pub x0: Point,
    pub max_iters: usize,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Dr { problem: Problem, variant: Variant },
    Parallel(ProductProblem),
}

impl Model {
    pub fn mode(&self) -> Mode {
        match self {
            Model::Dr {
                variant: Variant::Standard,
                ..
            } => Mode::Dr,
            Model::Dr {
                variant: Variant::Switched,
                ..
            } => Mode::DrSwitched,
            Model::Parallel(_) => Mode::Parallel,
        }
    }

    /// Switches between the two DR variants. Parallel and DR problems have
    /// different inputs, so converting between them is an error.
    pub fn with_mode(self, mode: Mode) -> Result<Model> {
        match (self, mode) {
            (Model::Dr { problem, .. }, Mode::Dr) => Ok(Model::Dr {
                problem,
                variant: Variant::Standard,
            }),
            (Model::Dr { problem, .. }, Mode::DrSwitched) => Ok(Model::Dr {
                problem,
                variant: Variant::Switched,
            }),
            (m @ Model::Parallel(_), Mode::Parallel) => Ok(m),
            (m, mode) => Err(CliError::validation(
                "mode",
                format!("cannot run a {} problem in {} mode", m.mode().as_str(), mode.as_str()),
            )),
        }
    }
}

pub fn read_problem(path: &Path) -> Result<LoadedProblem> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })?;
    parse_problem(&text)
}

pub fn parse_problem(text: &str) -> Result<LoadedProblem> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: ProblemFile = serde_path_to_error::deserialize(de).map_err(|e| CliError::Parse {
        path: e.path().to_string(),
        message: e.into_inner().to_string(),
    })?;
    file.load()
}

fn point(path: &str, coords: &[f64], dim: usize) -> Result<Point> {
    if coords.len() != dim {
        return Err(CliError::validation(
            path,
            format!("expected {dim} coordinates, found {}", coords.len()),
        ));
    }
    Point::new(coords.to_vec()).map_err(|e| CliError::validation(path, e))
}

fn span(path: &str, basis: &[Vec<f64>], dim: usize) -> Result<LinearSubspace> {
    let raw = basis
        .iter()
        .enumerate()
        .map(|(i, v)| point(&format!("{path}[{i}]"), v, dim))
        .collect::<Result<Vec<_>>>()?;
    LinearSubspace::span(dim, &raw).map_err(|e| CliError::validation(path, e))
}

impl ProblemFile {
    pub fn load(&self) -> Result<LoadedProblem> {
        let dim = self.dimension;
        if dim == 0 {
            return Err(CliError::validation("dimension", "must be positive"));
        }
        let x0 = point("x0", &self.x0, dim)?;
        let model = match self.mode {
            Mode::Dr | Mode::DrSwitched => {
                if self.blocks.is_some() {
                    return Err(CliError::validation("blocks", "only allowed in parallel mode"));
                }
                let basis = self
                    .subspace
                    .as_ref()
                    .ok_or_else(|| CliError::validation("subspace", "missing"))?;
                let function = self
                    .function
                    .as_ref()
                    .ok_or_else(|| CliError::validation("function", "missing"))?;
                let subspace = span("subspace", basis, dim)?;
                let g = function.build("function", dim)?;
                let problem = Problem::new(subspace, g).map_err(|e| CliError::validation("function", e))?;
                let variant = if self.mode == Mode::Dr {
                    Variant::Standard
                } else {
                    Variant::Switched
                };
                Model::Dr { problem, variant }
            }
            Mode::Parallel => {
                if self.subspace.is_some() {
                    return Err(CliError::validation("subspace", "not allowed in parallel mode"));
                }
                if self.function.is_some() {
                    return Err(CliError::validation("function", "not allowed in parallel mode"));
                }
                let specs = self
                    .blocks
                    .as_ref()
                    .ok_or_else(|| CliError::validation("blocks", "missing"))?;
                let blocks = specs
                    .iter()
                    .enumerate()
                    .map(|(i, s)| s.build(&format!("blocks[{i}]"), dim))
                    .collect::<Result<Vec<_>>>()?;
                Model::Parallel(ProductProblem::new(blocks).map_err(|e| CliError::validation("blocks", e))?)
            }
        };
        let tolerances = self.tolerances.clone().unwrap_or_default().apply(Tolerances::default());
        tolerances
            .validate()
            .map_err(|e| CliError::validation("tolerances", e))?;
        let max_iters = self.max_iters.unwrap_or(DEFAULT_MAX_ITERS);
        if max_iters < tolerances.tail_window {
            return Err(CliError::validation(
                "max_iters",
                format!("must be at least tail_window ({})", tolerances.tail_window),
            ));
        }
        Ok(LoadedProblem {
            model,
            x0,
            max_iters,
            tolerances,
        })
    }
}

impl FunctionSpec {
    fn tag(&self) -> &'static str {
        match self {
            FunctionSpec::IndicatorSubspace { .. } => "indicator_subspace",
            FunctionSpec::IndicatorAffine { .. } => "indicator_affine",
            FunctionSpec::IndicatorHalfspace { .. } => "indicator_halfspace",
            FunctionSpec::IndicatorBall { .. } => "indicator_ball",
            FunctionSpec::IndicatorSingleton { .. } => "indicator_singleton",
            FunctionSpec::IndicatorBox { .. } => "indicator_box",
            FunctionSpec::IndicatorEpigraphAbs { .. } => "indicator_epigraph_abs",
            FunctionSpec::Quadratic { .. } => "quadratic",
            FunctionSpec::TiltedSquaredDistance { .. } => "tilted_squared_distance",
            FunctionSpec::QuadraticAffineRestricted { .. } => "quadratic_affine_restricted",
            FunctionSpec::Translate { .. } => "translate",
        }
    }

    pub fn build(&self, path: &str, dim: usize) -> Result<ConvexFunction> {
        let base = format!("{path}.{}", self.tag());
        let at = |field: &str| format!("{base}.{field}");
        let checked = |g: drsplit_core::Result<ConvexFunction>| g.map_err(|e| CliError::validation(base.as_str(), e));
        match self {
            FunctionSpec::IndicatorSubspace { basis } => {
                Ok(ConvexFunction::IndicatorSubspace(span(&at("basis"), basis, dim)?))
            }
            FunctionSpec::IndicatorAffine { anchor, basis } => checked(ConvexFunction::indicator_affine(
                point(&at("anchor"), anchor, dim)?,
                span(&at("basis"), basis, dim)?,
            )),
            FunctionSpec::IndicatorHalfspace { normal, offset } => checked(ConvexFunction::indicator_halfspace(
                point(&at("normal"), normal, dim)?,
                *offset,
            )),
            FunctionSpec::IndicatorBall { center, radius } => checked(ConvexFunction::indicator_ball(
                point(&at("center"), center, dim)?,
                *radius,
            )),
            FunctionSpec::IndicatorSingleton { p } => Ok(ConvexFunction::IndicatorSingleton(point(&at("p"), p, dim)?)),
            FunctionSpec::IndicatorBox { lo, hi } => checked(ConvexFunction::indicator_box(
                point(&at("lo"), lo, dim)?,
                point(&at("hi"), hi, dim)?,
            )),
            FunctionSpec::IndicatorEpigraphAbs { slope, intercept } => {
                if dim != 2 {
                    return Err(CliError::validation(base, "only defined in dimension 2"));
                }
                checked(ConvexFunction::indicator_epigraph_abs(*slope, *intercept))
            }
            FunctionSpec::Quadratic { matrix, linear } => {
                if matrix.len() != dim {
                    return Err(CliError::validation(
                        at("matrix"),
                        format!("expected {dim} rows, found {}", matrix.len()),
                    ));
                }
                let rows = matrix
                    .iter()
                    .enumerate()
                    .map(|(i, r)| point(&format!("{}[{i}]", at("matrix")), r, dim))
                    .collect::<Result<Vec<_>>>()?;
                let q = DMatrix::from_fn(dim, dim, |i, j| rows[i][j]);
                checked(ConvexFunction::quadratic(q, point(&at("linear"), linear, dim)?))
            }
            FunctionSpec::TiltedSquaredDistance { basis, tilt } => checked(ConvexFunction::tilted_squared_distance(
                span(&at("basis"), basis, dim)?,
                point(&at("tilt"), tilt, dim)?,
            )),
            FunctionSpec::QuadraticAffineRestricted { w, b, basis } => {
                checked(ConvexFunction::quadratic_affine_restricted(
                    point(&at("w"), w, dim)?,
                    point(&at("b"), b, dim)?,
                    span(&at("basis"), basis, dim)?,
                ))
            }
            FunctionSpec::Translate { inner, shift } => {
                let g = inner.build(&at("inner"), dim)?;
                checked(ConvexFunction::translate(g, point(&at("shift"), shift, dim)?))
            }
        }
    }

    /// The file form of an in-memory function. Subspaces are written as
    /// their orthonormal bases.
    pub fn describe(g: &ConvexFunction) -> Result<FunctionSpec> {
        let v = |p: &Point| p.coords().to_vec();
        let basis = |u: &LinearSubspace| u.basis().iter().map(v).collect::<Vec<_>>();
        Ok(match g {
            ConvexFunction::IndicatorSubspace(u) => FunctionSpec::IndicatorSubspace { basis: basis(u) },
            ConvexFunction::IndicatorAffine { anchor, subspace } => FunctionSpec::IndicatorAffine {
                anchor: v(anchor),
                basis: basis(subspace),
            },
            ConvexFunction::IndicatorHalfspace { normal, offset } => FunctionSpec::IndicatorHalfspace {
                normal: v(normal),
                offset: *offset,
            },
            ConvexFunction::IndicatorBall { center, radius } => FunctionSpec::IndicatorBall {
                center: v(center),
                radius: *radius,
            },
            ConvexFunction::IndicatorSingleton(p) => FunctionSpec::IndicatorSingleton { p: v(p) },
            ConvexFunction::IndicatorBox { lo, hi } => FunctionSpec::IndicatorBox { lo: v(lo), hi: v(hi) },
            ConvexFunction::IndicatorEpigraphAbs { slope, intercept } => FunctionSpec::IndicatorEpigraphAbs {
                slope: *slope,
                intercept: *intercept,
            },
            ConvexFunction::Quadratic(q) => FunctionSpec::Quadratic {
                matrix: q.matrix().row_iter().map(|r| r.iter().copied().collect()).collect(),
                linear: v(q.linear()),
            },
            ConvexFunction::TiltedSquaredDistance { subspace, tilt } => FunctionSpec::TiltedSquaredDistance {
                basis: basis(subspace),
                tilt: v(tilt),
            },
            ConvexFunction::QuadraticAffineRestricted {
                linear,
                offset,
                subspace,
            } => FunctionSpec::QuadraticAffineRestricted {
                w: v(linear),
                b: v(offset),
                basis: basis(subspace),
            },
            ConvexFunction::Translate { inner, shift } => FunctionSpec::Translate {
                inner: Box::new(Self::describe(inner)?),
                shift: v(shift),
            },
            ConvexFunction::Separable(_) => {
                return Err(CliError::validation(
                    "function",
                    "separable functions are written as parallel-mode blocks",
                ))
            }
        })
    }
}

impl LoadedProblem {
    /// A problem file that loads back to `self`, with every default spelled out.
    pub fn to_file(&self) -> Result<ProblemFile> {
        let (subspace, function, blocks, dimension) = match &self.model {
            Model::Dr { problem, .. } => (
                Some(problem.subspace().basis().iter().map(|b| b.coords().to_vec()).collect()),
                Some(FunctionSpec::describe(problem.function())?),
                None,
                problem.dim(),
            ),
            Model::Parallel(pp) => (
                None,
                None,
                Some(
                    pp.blocks()
                        .iter()
                        .map(FunctionSpec::describe)
                        .collect::<Result<Vec<_>>>()?,
                ),
                pp.dim(),
            ),
        };
        Ok(ProblemFile {
            dimension,
            mode: self.model.mode(),
            subspace,
            function,
            blocks,
            x0: self.x0.coords().to_vec(),
            max_iters: Some(self.max_iters),
            tolerances: Some(ToleranceOverrides::full(&self.tolerances)),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let file = self.to_file()?;
        Ok(serde_json::to_string_pretty(&file).expect("problem files always serialize"))
    }
}
