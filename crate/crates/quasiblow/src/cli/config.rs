//! JSON scenario configuration: parsing, defaulting, validation.
//!
//! JSON keeps the echoed configuration machine-round-trippable, which is what
//! makes repeated sweeps bit-reproducible.

use serde::{Deserialize, Serialize};

use crate::coeffs::SpeedModel;
use crate::companions::{CarlemannConfig, InitialProfile};
use crate::error::{Error, Result};
use crate::solver::RunConfig;
use crate::state::{Grid1D, ProfileModel};

fn default_cfl() -> f64 {
    0.4
}

fn default_scheme_order() -> u8 {
    2
}

fn default_record_every() -> usize {
    1
}

fn default_true() -> bool {
    true
}

/// Which artifacts a run emits.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Outputs {
    #[serde(default = "default_true")]
    pub timeseries: bool,
    #[serde(default = "default_true")]
    pub snapshots: bool,
    #[serde(default = "default_true")]
    pub plots: bool,
}

impl Default for Outputs {
    fn default() -> Self {
        Outputs {
            timeseries: true,
            snapshots: true,
            plots: true,
        }
    }
}

/// Blow-up detection settings: the terminal threshold (None = 1e6 x initial
/// max norm) and the crossing ladder used for 1/M extrapolation, as multiples
/// of the initial max norm.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct Thresholds {
    pub blowup: Option<f64>,
    pub ladder: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid1D> {
        Grid1D::new(self.x_min, self.x_max, self.n)
    }
}

/// One PDE run (kind = simulate), also the base of a sweep cell.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulateSpec {
    pub lambda: f64,
    pub eps: f64,
    pub model: SpeedModel,
    #[serde(default)]
    pub profile: ProfileModel,
    pub grid: GridSpec,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    pub t_max: f64,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default = "default_scheme_order")]
    pub scheme_order: u8,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    #[serde(default)]
    pub theorem: bool,
    #[serde(default)]
    pub outputs: Outputs,
}

impl SimulateSpec {
    pub fn run_config(&self) -> Result<RunConfig> {
        let grid = self.grid.build()?;
        let mut cfg = RunConfig::new(self.lambda, self.eps, self.model.clone(), grid, self.t_max);
        cfg.profile = self.profile.clone();
        cfg.cfl = self.cfl;
        cfg.blowup_threshold = self.thresholds.blowup;
        cfg.scheme_order = self.scheme_order;
        cfg.record_every = self.record_every;
        cfg.theorem = self.theorem;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Sweep axes; empty/missing axes fall back to the base value.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct SweepAxes {
    #[serde(default)]
    pub eps: Vec<f64>,
    #[serde(default)]
    pub lambda: Vec<f64>,
    #[serde(default)]
    pub n: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSpec {
    #[serde(flatten)]
    pub base: SimulateSpec,
    pub sweep: SweepAxes,
}

/// Closed-form Riccati query: direct parameters take precedence; otherwise
/// the comparison parameters are derived from the scenario fields.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RiccatiSpec {
    pub params: Option<RiccatiDirect>,
    pub lambda: Option<f64>,
    pub model: Option<SpeedModel>,
    #[serde(default)]
    pub profile: ProfileModel,
    pub eps: Option<f64>,
    #[serde(default)]
    pub t_eval: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RiccatiDirect {
    pub a: f64,
    pub y0: f64,
    pub m: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CarlemannSpec {
    /// optional preset: "classical" or "scalar_riccati"
    pub preset: Option<String>,
    #[serde(default)]
    pub coefficients: Option<[f64; 6]>,
    pub r0: Option<InitialProfile>,
    pub s0: Option<InitialProfile>,
    pub grid: GridSpec,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    pub t_max: f64,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default = "default_scheme_order")]
    pub scheme_order: u8,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    #[serde(default)]
    pub outputs: Outputs,
}

impl CarlemannSpec {
    pub fn config(&self) -> Result<CarlemannConfig> {
        let grid = self.grid.build()?;
        let mut cfg = match self.preset.as_deref() {
            Some("classical") => CarlemannConfig::classical(grid, self.t_max),
            Some("scalar_riccati") => CarlemannConfig::scalar_riccati(grid, self.t_max),
            Some(other) => {
                return Err(Error::Validation(format!(
                    "unknown carlemann preset '{other}' (expected classical or scalar_riccati)"
                )))
            }
            None => CarlemannConfig::new(grid, self.t_max),
        };
        if let Some([a1, b1, c1, a2, b2, c2]) = self.coefficients {
            cfg.a1 = a1;
            cfg.b1 = b1;
            cfg.c1 = c1;
            cfg.a2 = a2;
            cfg.b2 = b2;
            cfg.c2 = c2;
        }
        if let Some(r0) = &self.r0 {
            cfg.r0 = r0.clone();
        }
        if let Some(s0) = &self.s0 {
            cfg.s0 = s0.clone();
        }
        cfg.cfl = self.cfl;
        cfg.blowup_threshold = self.thresholds.blowup;
        cfg.scheme_order = self.scheme_order;
        cfg.record_every = self.record_every;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AmplitudeProfile {
    #[serde(default)]
    pub profile: ProfileModel,
    pub amplitude: f64,
}

/// The lambda = 2 power-model scenario with generic (u0, u1) data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PsystemSpec {
    /// power-model exponent
    pub a: f64,
    pub u0: AmplitudeProfile,
    pub u1: AmplitudeProfile,
    pub grid: GridSpec,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    pub t_max: f64,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default = "default_scheme_order")]
    pub scheme_order: u8,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    #[serde(default)]
    pub outputs: Outputs,
}

fn default_verify_samples() -> usize {
    100_000
}

fn default_verify_riccati_sets() -> usize {
    100
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifySpec {
    #[serde(default = "default_verify_samples")]
    pub samples: usize,
    #[serde(default = "default_verify_riccati_sets")]
    pub riccati_sets: usize,
}

impl Default for VerifySpec {
    fn default() -> Self {
        VerifySpec {
            samples: default_verify_samples(),
            riccati_sets: default_verify_riccati_sets(),
        }
    }
}

/// A fully parsed scenario document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScenarioSpec {
    Simulate(SimulateSpec),
    Sweep(SweepSpec),
    Riccati(RiccatiSpec),
    Carlemann(CarlemannSpec),
    Psystem(PsystemSpec),
    Verify(VerifySpec),
}

impl ScenarioSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ScenarioSpec::Simulate(_) => "simulate",
            ScenarioSpec::Sweep(_) => "sweep",
            ScenarioSpec::Riccati(_) => "riccati",
            ScenarioSpec::Carlemann(_) => "carlemann",
            ScenarioSpec::Psystem(_) => "psystem",
            ScenarioSpec::Verify(_) => "verify",
        }
    }
}

/// Parse and validate a scenario document (JSON text).
///
/// Parse failures carry serde's line/column context; validation failures name
/// the violated invariant.
pub fn parse_config(document: &str) -> Result<ScenarioSpec> {
    let spec: ScenarioSpec =
        serde_json::from_str(document).map_err(|e| Error::Parse(e.to_string()))?;
    validate(&spec)?;
    Ok(spec)
}

fn validate(spec: &ScenarioSpec) -> Result<()> {
    match spec {
        ScenarioSpec::Simulate(s) => {
            s.run_config()?;
        }
        ScenarioSpec::Sweep(s) => {
            if s.sweep.eps.is_empty() && s.sweep.lambda.is_empty() && s.sweep.n.is_empty() {
                return Err(Error::Validation(
                    "sweep needs at least one non-empty axis (eps, lambda, or n)".into(),
                ));
            }
            for cell in sweep_cells(s) {
                cell.run_config()?;
            }
        }
        ScenarioSpec::Riccati(r) => {
            if r.params.is_none() {
                let (Some(lambda), Some(model), Some(eps)) = (r.lambda, &r.model, r.eps) else {
                    return Err(Error::Validation(
                        "riccati needs either params {a, y0, m} or the scenario fields lambda, model, eps"
                            .into(),
                    ));
                };
                crate::riccati::compute_constants(lambda, model, &r.profile)?;
                if !(eps > 0.0) {
                    return Err(Error::Validation("eps must be positive".into()));
                }
            }
        }
        ScenarioSpec::Carlemann(c) => {
            c.config()?;
        }
        ScenarioSpec::Psystem(p) => {
            if p.a <= -1.0 {
                return Err(Error::Validation(
                    "psystem threshold formula needs exponent a > -1".into(),
                ));
            }
            p.grid.build()?;
        }
        ScenarioSpec::Verify(v) => {
            if v.samples == 0 {
                return Err(Error::Validation("verify needs samples >= 1".into()));
            }
        }
    }
    Ok(())
}

/// Cartesian product of the sweep axes in lexicographic order
/// (eps outermost, then lambda, then n).
pub fn sweep_cells(spec: &SweepSpec) -> Vec<SimulateSpec> {
    let eps_axis = if spec.sweep.eps.is_empty() {
        vec![spec.base.eps]
    } else {
        spec.sweep.eps.clone()
    };
    let lambda_axis = if spec.sweep.lambda.is_empty() {
        vec![spec.base.lambda]
    } else {
        spec.sweep.lambda.clone()
    };
    let n_axis = if spec.sweep.n.is_empty() {
        vec![spec.base.grid.n]
    } else {
        spec.sweep.n.clone()
    };
    let mut cells = Vec::new();
    for &eps in &eps_axis {
        for &lambda in &lambda_axis {
            for &n in &n_axis {
                let mut cell = spec.base.clone();
                cell.eps = eps;
                cell.lambda = lambda;
                cell.grid.n = n;
                cells.push(cell);
            }
        }
    }
    cells
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "kind": "simulate",
        "lambda": 1.0,
        "eps": 0.5,
        "model": {"family": "power", "params": [1.0]},
        "grid": {"x_min": -12.0, "x_max": 12.0, "n": 256},
        "t_max": 5.0
    }"#;

    #[test]
    fn minimal_document_gets_defaults() {
        let spec = parse_config(MINIMAL).unwrap();
        let ScenarioSpec::Simulate(s) = spec else {
            panic!("expected simulate")
        };
        assert_eq!(s.cfl, 0.4);
        assert_eq!(s.scheme_order, 2);
        assert_eq!(s.profile, ProfileModel::BumpX);
        assert!(s.outputs.timeseries && s.outputs.snapshots && s.outputs.plots);
        assert!(s.thresholds.blowup.is_none());
    }

    #[test]
    fn lambda_zero_rejected() {
        let doc = MINIMAL.replace(r#""lambda": 1.0"#, r#""lambda": 0.0"#);
        let err = parse_config(&doc).unwrap_err();
        assert!(err.to_string().contains("lambda"), "{err}");
    }

    #[test]
    fn theorem_flag_rejects_nonnegative_slope_profile() {
        let doc = MINIMAL.replace(
            r#""t_max": 5.0"#,
            r#""t_max": 5.0, "theorem": true, "profile": {"family": "poly_bump", "params": [0.0, 1.0]}"#,
        );
        let err = parse_config(&doc).unwrap_err();
        assert!(err.to_string().contains("negative slope"), "{err}");
    }

    #[test]
    fn parse_error_carries_position() {
        let err = parse_config("{\"kind\": \"simulate\",\n  broken").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line"), "{msg}");
    }

    #[test]
    fn sweep_cells_lexicographic() {
        let doc = r#"{
            "kind": "sweep",
            "lambda": 1.0,
            "eps": 0.5,
            "model": {"family": "power", "params": [1.0]},
            "grid": {"x_min": -12.0, "x_max": 12.0, "n": 64},
            "t_max": 1.0,
            "sweep": {"eps": [0.4, 0.2], "lambda": [0.5, 1.0], "n": []}
        }"#;
        let ScenarioSpec::Sweep(s) = parse_config(doc).unwrap() else {
            panic!()
        };
        let cells = sweep_cells(&s);
        assert_eq!(cells.len(), 4);
        assert_eq!((cells[0].eps, cells[0].lambda), (0.4, 0.5));
        assert_eq!((cells[1].eps, cells[1].lambda), (0.4, 1.0));
        assert_eq!((cells[3].eps, cells[3].lambda), (0.2, 1.0));
    }

    #[test]
    fn riccati_direct_params_parse() {
        let doc = r#"{"kind": "riccati", "params": {"a": 1.0, "y0": 1.0, "m": 0.0}}"#;
        let spec = parse_config(doc).unwrap();
        assert_eq!(spec.kind(), "riccati");
    }
}
