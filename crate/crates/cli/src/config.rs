//! Run configuration: one JSON document, optionally overridden by flags.

use std::path::PathBuf;

use anyhow::{bail, Context};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use colorcode::lattice::Color;
use colorcode::TorusSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Verify,
    Spectrum,
    Sweep,
    OrderParams,
    Condense,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
    Text,
}

/// Evenly spaced coupling values `start, start + step, ...` up to `stop`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Axis {
    pub fn single(value: f64) -> Self {
        Axis { start: value, stop: value, step: 1.0 }
    }

    pub fn check(&self, name: &str) -> anyhow::Result<()> {
        let in_range = |x: f64| (0.0..=1.0).contains(&x);
        if !in_range(self.start) || !in_range(self.stop) {
            bail!("{name}: range {}..{} leaves [0, 1]", self.start, self.stop);
        }
        if self.step.is_nan() || self.step <= 0.0 || !self.step.is_finite() {
            bail!("{name}: step must be positive, got {}", self.step);
        }
        if self.stop < self.start {
            bail!("{name}: stop {} is below start {}", self.stop, self.start);
        }
        Ok(())
    }

    /// Grid values, rounded to 12 decimals so that repeated steps print cleanly.
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n)
            .map(|k| ((self.start + k as f64 * self.step) * 1e12).round() / 1e12)
            .map(|x| x.min(1.0))
            .collect()
    }
}

impl std::str::FromStr for Axis {
    type Err = anyhow::Error;

    /// `value` or `start:stop:step`.
    fn from_str(s: &str) -> anyhow::Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.trim().parse::<f64>().with_context(|| format!("bad number {t:?} in {s:?}"));
        match parts.as_slice() {
            [v] => Ok(Axis::single(num(v)?)),
            [a, b, c] => Ok(Axis { start: num(a)?, stop: num(b)?, step: num(c)? }),
            _ => bail!("expected VALUE or START:STOP:STEP, got {s:?}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum GridShape {
    /// Full product `jr x jg x jb`.
    Cube,
    /// The plane `j_g = j_b`, spanned by the `jr` and `jg` axes.
    Slice,
    /// The line `j_r = j_g = j_b`, along the `jr` axis.
    Diagonal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Grid {
    pub shape: GridShape,
    pub jr: Axis,
    pub jg: Axis,
    pub jb: Axis,
}

impl Default for Grid {
    fn default() -> Self {
        let axis = Axis { start: 0.0, stop: 1.0, step: 0.05 };
        Grid { shape: GridShape::Slice, jr: axis, jg: axis, jb: axis }
    }
}

impl Grid {
    pub fn check(&self) -> anyhow::Result<()> {
        self.jr.check("jr")?;
        self.jg.check("jg")?;
        self.jb.check("jb")
    }

    pub fn points(&self) -> Vec<[f64; 3]> {
        let (r, g, b) = (self.jr.values(), self.jg.values(), self.jb.values());
        match self.shape {
            GridShape::Cube => {
                let mut out = Vec::with_capacity(r.len() * g.len() * b.len());
                for &x in &r {
                    for &y in &g {
                        out.extend(b.iter().map(|&z| [x, y, z]));
                    }
                }
                out
            }
            GridShape::Slice => r.iter().flat_map(|&x| g.iter().map(move |&y| [x, y, y])).collect(),
            GridShape::Diagonal => r.iter().map(|&x| [x, x, x]).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Solver {
    /// Largest `log2(dimension)` diagonalized densely.
    pub dense_limit_log2: u32,
    /// Eigenvalues requested from the iterative solver.
    pub k: usize,
    /// Eigenvalue agreement tolerance for equivalence checks.
    pub tol: f64,
    /// String order threshold for phase labels.
    pub threshold: f64,
    /// Lowest eigenvalues compared by the matrix-free equivalence stage of
    /// `verify`; 0 disables that stage.
    pub matrix_free_k: usize,
}

impl Default for Solver {
    fn default() -> Self {
        Solver { dense_limit_log2: 14, k: 10, tol: 1e-9, threshold: 0.5, matrix_free_k: 0 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Output {
    /// File to write; standard output when absent.
    pub path: Option<PathBuf>,
    /// Defaults per mode: CSV for sweeps and spectra, text for verify and
    /// condense, JSON for order parameters.
    pub format: Option<Format>,
}

/// Fault injected into the lattice before a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Injection {
    /// Give edge `edge` the next color in r, g, b order.
    RecolorEdge { edge: usize },
}

impl std::str::FromStr for Injection {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        match s.split_once(':') {
            Some(("recolor-edge", idx)) => Ok(Injection::RecolorEdge {
                edge: idx.parse().with_context(|| format!("bad edge index {idx:?}"))?,
            }),
            _ => bail!("unknown injection {s:?}; expected recolor-edge:<index>"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Theory {
    ColorCode,
    ToricCode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(default)]
pub struct RunConfig {
    /// Torus size `L1xL2`, both multiples of 3.
    pub lattice: String,
    pub mode: Mode,
    pub grid: Grid,
    /// `(j_r, j_g, j_b)` for single-point modes.
    pub couplings: [f64; 3],
    pub solver: Solver,
    pub output: Output,
    /// Worker threads; falls back to `COLORCODE_THREADS`, then all cores.
    pub threads: Option<usize>,
    pub seed: u64,
    pub inject: Option<Injection>,
    pub theory: Theory,
    /// Anyon labels to condense.
    pub condense: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            lattice: "3x3".into(),
            mode: Mode::Verify,
            grid: Grid::default(),
            couplings: [0.0; 3],
            solver: Solver::default(),
            output: Output::default(),
            threads: None,
            seed: 1,
            inject: None,
            theory: Theory::ColorCode,
            condense: Vec::new(),
        }
    }
}

pub fn parse_lattice(s: &str) -> anyhow::Result<TorusSpec> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .with_context(|| format!("lattice must look like L1xL2, got {s:?}"))?;
    let l1 = a.trim().parse().with_context(|| format!("bad L1 in {s:?}"))?;
    let l2 = b.trim().parse().with_context(|| format!("bad L2 in {s:?}"))?;
    Ok(TorusSpec::new(l1, l2)?)
}

impl RunConfig {
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).context("invalid configuration JSON")?;
        Ok(cfg)
    }

    pub fn check(&self) -> anyhow::Result<()> {
        parse_lattice(&self.lattice)?;
        self.grid.check()?;
        for (c, &j) in Color::ALL.iter().zip(&self.couplings) {
            if !(0.0..=1.0).contains(&j) {
                bail!("coupling j_{} = {j} is outside [0, 1]", c.letter());
            }
        }
        if !(self.solver.threshold > 0.0 && self.solver.threshold < 1.0) {
            bail!("threshold must lie in (0, 1), got {}", self.solver.threshold);
        }
        if self.solver.k == 0 {
            bail!("k must be positive");
        }
        if self.threads == Some(0) {
            bail!("threads must be positive");
        }
        Ok(())
    }

    pub fn torus(&self) -> anyhow::Result<TorusSpec> {
        parse_lattice(&self.lattice)
    }

    pub fn format(&self) -> Format {
        self.output.format.unwrap_or(match self.mode {
            Mode::Sweep | Mode::Spectrum => Format::Csv,
            Mode::Verify | Mode::Condense => Format::Text,
            Mode::OrderParams => Format::Json,
        })
    }
}

/// JSON schema of [`RunConfig`].
pub fn schema() -> serde_json::Value {
    serde_json::to_value(schemars::schema_for!(RunConfig)).expect("schema serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_values_include_stop() {
        let a: Axis = "0:1:0.05".parse().unwrap();
        let v = a.values();
        assert_eq!(v.len(), 21);
        assert_eq!(v[3], 0.15);
        assert_eq!(*v.last().unwrap(), 1.0);
        assert_eq!("0.3".parse::<Axis>().unwrap().values(), vec![0.3]);
    }

    #[test]
    fn grid_shapes() {
        let axis: Axis = "0:1:0.5".parse().unwrap();
        let mut g = Grid { shape: GridShape::Cube, jr: axis, jg: axis, jb: axis };
        assert_eq!(g.points().len(), 27);
        g.shape = GridShape::Slice;
        assert!(g.points().iter().all(|p| p[1] == p[2]));
        assert_eq!(g.points().len(), 9);
        g.shape = GridShape::Diagonal;
        assert_eq!(g.points(), vec![[0.0; 3], [0.5; 3], [1.0; 3]]);
    }

    #[test]
    fn rejects_bad_configs() {
        let mut cfg = RunConfig::default();
        cfg.grid.jr.step = 0.0;
        assert!(cfg.check().is_err());
        let mut cfg = RunConfig::default();
        cfg.grid.jg.stop = 1.5;
        assert!(cfg.check().is_err());
        let cfg = RunConfig { lattice: "4x3".into(), ..Default::default() };
        assert!(cfg.check().is_err());
    }

    #[test]
    fn json_round_trip_with_defaults() {
        let cfg = RunConfig::from_json(r#"{"lattice": "3x6", "mode": "sweep"}"#).unwrap();
        assert_eq!(cfg.mode, Mode::Sweep);
        assert_eq!(cfg.solver, Solver::default());
        let again = RunConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(again, cfg);
        assert!(schema()["properties"]["grid"].is_object());
    }

    #[test]
    fn injection_syntax() {
        assert_eq!("recolor-edge:5".parse::<Injection>().unwrap(), Injection::RecolorEdge { edge: 5 });
        assert!("flip:1".parse::<Injection>().is_err());
    }
}
