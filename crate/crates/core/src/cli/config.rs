use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::DEFAULT_EPS;
use crate::params::{ModelParams, ValidationTier};
use crate::stats::{CompareSettings, FitMethod};

/// Model parameters as they appear in a config file; any field may be
/// left out and supplied by a flag instead.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    #[serde(rename = "N")]
    pub clique_size: Option<usize>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub r: Option<f64>,
}

impl From<ModelParams> for ParamsSpec {
    fn from(m: ModelParams) -> Self {
        ParamsSpec {
            clique_size: Some(m.clique_size),
            p: Some(m.p),
            q: Some(m.q),
            r: Some(m.r),
        }
    }
}

impl ParamsSpec {
    fn overlay(self, top: ParamsSpec) -> ParamsSpec {
        ParamsSpec {
            clique_size: top.clique_size.or(self.clique_size),
            p: top.p.or(self.p),
            q: top.q.or(self.q),
            r: top.r.or(self.r),
        }
    }

    /// Assembles the parameters without range checks.
    pub fn resolve(&self) -> Result<ModelParams> {
        let mut missing = Vec::new();
        if self.clique_size.is_none() {
            missing.push("N");
        }
        for (name, v) in [("p", self.p), ("q", self.q), ("r", self.r)] {
            if v.is_none() {
                missing.push(name);
            }
        }
        if !missing.is_empty() {
            return Err(Error::Config(format!(
                "missing model parameters: {}",
                missing.join(", ")
            )));
        }
        Ok(ModelParams {
            clique_size: self.clique_size.unwrap_or_default(),
            p: self.p.unwrap_or_default(),
            q: self.q.unwrap_or_default(),
            r: self.r.unwrap_or_default(),
        })
    }
}

/// A complete experiment description. Loaded from a JSON file, then
/// overridden field by field by command-line flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub params: ParamsSpec,
    pub seeds: Vec<u64>,
    pub steps: u64,
    /// Defaults to `[steps]`.
    pub snapshot_at: Option<Vec<u64>>,
    pub w_max: usize,
    /// Defaults to `min(100, w_max)`.
    pub w_cut: Option<u64>,
    pub d_cut: u64,
    pub eps: f64,
    pub tail_tol: f64,
    pub weight_fit_window: Option<(u64, u64)>,
    pub degree_fit_window: Option<(u64, u64)>,
    pub fit_method: FitMethod,
    pub out_dir: PathBuf,
    pub export_edges: bool,
    pub track_all_cliques: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            params: ParamsSpec::default(),
            seeds: vec![0],
            steps: 10_000,
            snapshot_at: None,
            w_max: 200,
            w_cut: None,
            d_cut: 60,
            eps: DEFAULT_EPS,
            tail_tol: 1e-10,
            weight_fit_window: None,
            degree_fit_window: None,
            fit_method: FitMethod::LogLogLS,
            out_dir: PathBuf::from("ncg-out"),
            export_edges: false,
            track_all_cliques: false,
        }
    }
}

/// Flag values that override a loaded config. `None` leaves the field alone.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub params: ParamsSpec,
    pub seeds: Vec<u64>,
    pub steps: Option<u64>,
    pub snapshot_at: Option<Vec<u64>>,
    pub w_max: Option<usize>,
    pub w_cut: Option<u64>,
    pub d_cut: Option<u64>,
    pub eps: Option<f64>,
    pub tail_tol: Option<f64>,
    pub fit_method: Option<FitMethod>,
    pub out_dir: Option<PathBuf>,
    pub export_edges: bool,
    pub track_all_cliques: bool,
}

impl ExperimentConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            detail: e.to_string(),
        })
    }

    /// Precedence: built-in defaults, then the config file, then flags.
    pub fn load(path: Option<&Path>, flags: &Overrides) -> Result<Self> {
        let mut cfg = match path {
            Some(p) => Self::from_json_file(p)?,
            None => Self::default(),
        };
        cfg.apply(flags);
        Ok(cfg)
    }

    pub fn apply(&mut self, f: &Overrides) {
        self.params = self.params.overlay(f.params);
        if !f.seeds.is_empty() {
            self.seeds = f.seeds.clone();
        }
        macro_rules! take {
            ($($field:ident),*) => {$(
                if let Some(v) = f.$field.clone() {
                    self.$field = v;
                }
            )*};
        }
        take!(steps, w_max, d_cut, eps, tail_tol, fit_method, out_dir);
        if f.snapshot_at.is_some() {
            self.snapshot_at = f.snapshot_at.clone();
        }
        if f.w_cut.is_some() {
            self.w_cut = f.w_cut;
        }
        self.export_edges |= f.export_edges;
        self.track_all_cliques |= f.track_all_cliques;
    }

    /// Parameters checked at the simulable tier.
    pub fn model_params(&self) -> Result<ModelParams> {
        let p = self.params.resolve()?;
        p.ensure(ValidationTier::Simulable)?;
        Ok(p)
    }

    /// Sorted, deduplicated snapshot indices within `[0, steps]`.
    pub fn snapshot_indices(&self) -> Result<Vec<u64>> {
        let mut v = self.snapshot_at.clone().unwrap_or_else(|| vec![self.steps]);
        v.sort_unstable();
        v.dedup();
        if let Some(&bad) = v.iter().find(|&&s| s > self.steps) {
            return Err(Error::Config(format!(
                "snapshot index {bad} exceeds steps = {}",
                self.steps
            )));
        }
        Ok(v)
    }

    pub fn w_cut(&self) -> u64 {
        self.w_cut.unwrap_or(100.min(self.w_max as u64))
    }

    /// Checks every field; returns the validated parameters.
    pub fn validate(&self) -> Result<ModelParams> {
        let params = self.model_params()?;
        if self.seeds.is_empty() {
            return Err(Error::Config("at least one seed is required".into()));
        }
        let mut seen = self.seeds.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("seeds must be distinct".into()));
        }
        self.snapshot_indices()?;
        if self.w_max == 0 {
            return Err(Error::Config("w_max must be positive".into()));
        }
        let w_cut = self.w_cut();
        if w_cut == 0 || w_cut > self.w_max as u64 {
            return Err(Error::Config(format!(
                "w_cut = {w_cut} must lie in [1, w_max = {}]",
                self.w_max
            )));
        }
        if self.d_cut + 1 < params.clique_size as u64 {
            return Err(Error::Config(format!(
                "d_cut = {} is below N-1 = {}",
                self.d_cut,
                params.clique_size - 1
            )));
        }
        if !(self.eps > 0.0 && self.eps < 1.0 / 6.0) {
            return Err(Error::Config(format!(
                "eps = {} must lie in (0, 1/6)",
                self.eps
            )));
        }
        if !(self.tail_tol > 0.0 && self.tail_tol.is_finite()) {
            return Err(Error::Config(format!(
                "tail_tol = {} must be positive",
                self.tail_tol
            )));
        }
        Ok(params)
    }

    pub fn compare_settings(&self, params: ModelParams) -> CompareSettings {
        CompareSettings {
            w_cut: self.w_cut(),
            d_cut: self.d_cut,
            eps: self.eps,
            tail_tol: self.tail_tol,
            weight_fit_window: self.weight_fit_window,
            degree_fit_window: self.degree_fit_window,
            fit_method: self.fit_method,
            params: Some(params),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> ExperimentConfig {
        ExperimentConfig {
            params: ModelParams::new(4, 0.5, 0.5, 0.5).unwrap().into(),
            ..Default::default()
        }
    }

    #[test]
    fn json_round_trip_and_partial_files() {
        let cfg = reference();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(
            serde_json::from_str::<ExperimentConfig>(&text).unwrap(),
            cfg
        );

        let partial: ExperimentConfig =
            serde_json::from_str(r#"{"params": {"N": 3, "p": 1.0}, "steps": 10}"#).unwrap();
        assert_eq!(partial.steps, 10);
        assert_eq!(partial.seeds, vec![0]);
        let err = partial.validate().unwrap_err();
        assert!(err.to_string().contains("q, r"), "{err}");
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"stepz": 1}"#).is_err());
    }

    #[test]
    fn flags_override_file_values() {
        let mut cfg = reference();
        cfg.apply(&Overrides {
            params: ParamsSpec {
                p: Some(0.25),
                ..Default::default()
            },
            seeds: vec![7, 8],
            steps: Some(50),
            w_cut: Some(20),
            ..Default::default()
        });
        let p = cfg.validate().unwrap();
        assert_eq!((p.clique_size, p.p, p.q), (4, 0.25, 0.5));
        assert_eq!(cfg.seeds, vec![7, 8]);
        assert_eq!(cfg.snapshot_indices().unwrap(), vec![50]);
        assert_eq!(cfg.w_cut(), 20);
    }

    #[test]
    fn rejects_bad_fields() {
        let base = reference();
        type Edit = Box<dyn Fn(&mut ExperimentConfig)>;
        let cases: Vec<Edit> = vec![
            Box::new(|c| c.seeds = vec![]),
            Box::new(|c| c.seeds = vec![1, 1]),
            Box::new(|c| c.snapshot_at = Some(vec![5, 20_000])),
            Box::new(|c| c.w_max = 0),
            Box::new(|c| c.w_cut = Some(201)),
            Box::new(|c| c.d_cut = 2),
            Box::new(|c| c.eps = 0.2),
            Box::new(|c| c.tail_tol = 0.0),
            Box::new(|c| c.params.p = Some(0.0)),
        ];
        for (i, f) in cases.iter().enumerate() {
            let mut c = base.clone();
            f(&mut c);
            assert!(c.validate().is_err(), "case {i}");
        }
        let mut c = base;
        c.snapshot_at = Some(vec![100, 0, 100]);
        assert_eq!(c.snapshot_indices().unwrap(), vec![0, 100]);
    }
}
