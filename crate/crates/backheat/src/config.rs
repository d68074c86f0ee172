//! Flat key-value configuration: a plain-text file of `key = value` lines,
//! with every key overridable by a `--key value` command-line flag of the
//! same name. Unknown keys are rejected so typos surface immediately.

use crate::error::{Error, Result};
use crate::estimate::TruncationRule;
use crate::experiment::ExperimentConfig;
use crate::heat::{DiffusionProfile, ProblemInstance};
use crate::noise::NoiseConvention;
use std::collections::BTreeMap;
use std::path::PathBuf;

/// All recognised keys, shared by the file parser and the flag parser.
pub const KNOWN_KEYS: &[&str] = &[
    // problem selection
    "example",
    "profile",
    "t_final",
    "theta_coeffs",
    "f_coeffs",
    // experiment
    "n",
    "m",
    "sigma2",
    "noise_convention",
    "trials",
    "base_seed",
    "truncation",
    "qbv_epsilon",
    "classical_cap",
    "time_segments",
    "gl_order",
    "output_dir",
    "parallel",
    // dataset replay
    "data_dir",
    // instability demo
    "sizes",
    "demo_t",
    "vartheta",
    // bias study
    "bias_modes",
    "tail_caps",
    "bias_time",
];

/// Ordered key-value store with typed accessors.
#[derive(Debug, Clone, Default)]
pub struct KvConfig {
    entries: BTreeMap<String, String>,
}

impl KvConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`, got `{line}`", lineno + 1))
            })?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(Error::Config(format!("unknown key `{key}`")));
        }
        self.entries.insert(key.to_string(), value.to_string());
        Ok(())
    }

    /// Apply `--key value` pairs on top of the file contents.
    pub fn apply_flags(&mut self, args: &[String]) -> Result<()> {
        let mut it = args.iter();
        while let Some(arg) = it.next() {
            let key = arg.strip_prefix("--").ok_or_else(|| {
                Error::Config(format!("expected `--key value` pairs, got `{arg}`"))
            })?;
            let value = it
                .next()
                .ok_or_else(|| Error::Config(format!("flag --{key} is missing its value")))?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|s| s.as_str())
    }

    pub fn get_usize(&self, key: &str, default: usize) -> Result<usize> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|e| Error::Config(format!("{key} = {v}: {e}"))),
        }
    }

    pub fn get_u64(&self, key: &str, default: u64) -> Result<u64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|e| Error::Config(format!("{key} = {v}: {e}"))),
        }
    }

    pub fn get_f64(&self, key: &str, default: f64) -> Result<f64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|e| Error::Config(format!("{key} = {v}: {e}"))),
        }
    }

    pub fn get_bool(&self, key: &str, default: bool) -> Result<bool> {
        match self.get(key) {
            None => Ok(default),
            Some("true") | Some("1") | Some("yes") => Ok(true),
            Some("false") | Some("0") | Some("no") => Ok(false),
            Some(v) => Err(Error::Config(format!("{key} = {v}: expected true/false"))),
        }
    }

    pub fn get_f64_list(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|e| Error::Config(format!("{key} = {v}: {e}")))
                })
                .collect(),
        }
    }

    pub fn get_usize_list(&self, key: &str, default: &[usize]) -> Result<Vec<usize>> {
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|e| Error::Config(format!("{key} = {v}: {e}")))
                })
                .collect(),
        }
    }

    fn parse_profile(&self) -> Result<DiffusionProfile> {
        let spec = self.get("profile").unwrap_or("constant:1.0");
        if let Some(c) = spec.strip_prefix("constant:") {
            let c: f64 =
                c.parse().map_err(|e| Error::Config(format!("profile = {spec}: {e}")))?;
            if c <= 0.0 {
                return Err(Error::Config("constant profile must be positive".into()));
            }
            return Ok(DiffusionProfile::Constant(c));
        }
        match spec {
            "ex1" => Ok(DiffusionProfile::LinearEx1),
            "ex2" => Ok(DiffusionProfile::ExpEx2),
            other => {
                if let Some(table) = other.strip_prefix("tabulated:") {
                    let mut ts = Vec::new();
                    let mut vs = Vec::new();
                    for pair in table.split(';') {
                        let (t, v) = pair.split_once(':').ok_or_else(|| {
                            Error::Config(format!("tabulated profile entry `{pair}` (want t:v)"))
                        })?;
                        ts.push(t.trim().parse().map_err(|e| {
                            Error::Config(format!("tabulated time {t}: {e}"))
                        })?);
                        vs.push(v.trim().parse().map_err(|e| {
                            Error::Config(format!("tabulated value {v}: {e}"))
                        })?);
                    }
                    DiffusionProfile::tabulated(ts, vs)
                } else {
                    Err(Error::Config(format!(
                        "profile = {other}: expected constant:<c>, ex1, ex2 or tabulated:..."
                    )))
                }
            }
        }
    }

    /// Resolve the problem instance: a builtin id or a custom finite
    /// expansion (`theta_coeffs = p,q,value; ...` and
    /// `f_coeffs = p,q,c0,c1,...; ...` with polynomial time dependence).
    pub fn problem(&self) -> Result<ProblemInstance> {
        match self.get("example").unwrap_or("1") {
            "1" => ProblemInstance::builtin_example(1),
            "2" => ProblemInstance::builtin_example(2),
            "custom" => {
                let t_final = self.get_f64("t_final", 1.0)?;
                let profile = self.parse_profile()?;
                let parse_mode_list = |key: &str, min_fields: usize| -> Result<Vec<Vec<f64>>> {
                    match self.get(key) {
                        None => Ok(vec![]),
                        Some(text) => text
                            .split(';')
                            .filter(|s| !s.trim().is_empty())
                            .map(|entry| {
                                let fields: Vec<f64> = entry
                                    .split(',')
                                    .map(|s| {
                                        s.trim().parse().map_err(|e| {
                                            Error::Config(format!("{key} entry `{entry}`: {e}"))
                                        })
                                    })
                                    .collect::<Result<_>>()?;
                                if fields.len() < min_fields {
                                    return Err(Error::Config(format!(
                                        "{key} entry `{entry}`: need at least {min_fields} fields"
                                    )));
                                }
                                Ok(fields)
                            })
                            .collect(),
                    }
                };
                let theta = parse_mode_list("theta_coeffs", 3)?
                    .into_iter()
                    .map(|f| (f[0] as usize, f[1] as usize, f[2]))
                    .collect();
                let source = parse_mode_list("f_coeffs", 3)?
                    .into_iter()
                    .map(|f| (f[0] as usize, f[1] as usize, f[2..].to_vec()))
                    .collect();
                ProblemInstance::custom(profile, t_final, theta, source)
            }
            other => Err(Error::Config(format!("example = {other}: expected 1, 2 or custom"))),
        }
    }

    fn parse_truncation(&self) -> Result<TruncationRule> {
        let spec = self.get("truncation").unwrap_or("numeric");
        if spec == "numeric" {
            return Ok(TruncationRule::Numeric);
        }
        if let Some(rest) = spec.strip_prefix("theorem:") {
            let (w1, w2) = rest
                .split_once(',')
                .ok_or_else(|| Error::Config(format!("truncation = {spec}: want theorem:w1,w2")))?;
            let w1: f64 =
                w1.trim().parse().map_err(|e| Error::Config(format!("omega1: {e}")))?;
            let w2: f64 =
                w2.trim().parse().map_err(|e| Error::Config(format!("omega2: {e}")))?;
            return TruncationRule::theorem(w1, w2);
        }
        if let Some(rest) = spec.strip_prefix("manual:") {
            let (n, m) = rest
                .split_once(',')
                .ok_or_else(|| Error::Config(format!("truncation = {spec}: want manual:N,M")))?;
            let n_modes: usize =
                n.trim().parse().map_err(|e| Error::Config(format!("manual N: {e}")))?;
            let m_modes: usize =
                m.trim().parse().map_err(|e| Error::Config(format!("manual M: {e}")))?;
            return Ok(TruncationRule::Manual { n_modes, m_modes });
        }
        Err(Error::Config(format!(
            "truncation = {spec}: expected numeric, theorem:w1,w2 or manual:N,M"
        )))
    }

    fn parse_convention(&self) -> Result<NoiseConvention> {
        match self.get("noise_convention").unwrap_or("paper") {
            "paper" => Ok(NoiseConvention::Paper),
            "equal-amplitude" => Ok(NoiseConvention::EqualAmplitude),
            other => Err(Error::Config(format!(
                "noise_convention = {other}: expected paper or equal-amplitude"
            ))),
        }
    }

    /// Build the full experiment configuration, filling defaults.
    pub fn experiment(&self) -> Result<ExperimentConfig> {
        let problem = self.problem()?;
        let sigma2_levels = self.get_f64_list("sigma2", &[1e-1, 1e-2])?;
        let qbv_epsilons = self.get_f64_list("qbv_epsilon", &sigma2_levels)?;
        let cfg = ExperimentConfig {
            problem,
            n: self.get_usize("n", 21)?,
            m: self.get_usize("m", 21)?,
            sigma2_levels,
            convention: self.parse_convention()?,
            trials: self.get_usize("trials", 30)?,
            base_seed: self.get_u64("base_seed", 11)?,
            truncation: self.parse_truncation()?,
            qbv_epsilons,
            classical_cap: self.get_usize("classical_cap", 20)?,
            time_segments: self.get_usize("time_segments", 100)?,
            output_dir: PathBuf::from(self.get("output_dir").unwrap_or("out")),
            parallel: self.get_bool("parallel", true)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
