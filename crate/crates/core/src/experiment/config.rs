use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::{Domain, RealVector};
use crate::problems::{OracleMode, SequenceFamily};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemFamily {
    Quadratic,
    HolderPower,
    Nonsmooth,
    Linear,
}

impl FromStr for ProblemFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quadratic" => Ok(ProblemFamily::Quadratic),
            "holder_power" => Ok(ProblemFamily::HolderPower),
            "nonsmooth" => Ok(ProblemFamily::Nonsmooth),
            "linear" => Ok(ProblemFamily::Linear),
            other => Err(Error::Config(format!("problem.family: unknown family '{other}'"))),
        }
    }
}

impl ProblemFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            ProblemFamily::Quadratic => "quadratic",
            ProblemFamily::HolderPower => "holder_power",
            ProblemFamily::Nonsmooth => "nonsmooth",
            ProblemFamily::Linear => "linear",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    OnlineConvex,
    OnlineStronglyConvex,
    O2bConvexUniversal,
    Alg2Thm4,
    Alg2Cor1KnownL,
    Alg2Cor1UnknownL,
    Alg3GridSearch,
    BaselineOgd,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::OnlineConvex,
        Algorithm::OnlineStronglyConvex,
        Algorithm::O2bConvexUniversal,
        Algorithm::Alg2Thm4,
        Algorithm::Alg2Cor1KnownL,
        Algorithm::Alg2Cor1UnknownL,
        Algorithm::Alg3GridSearch,
        Algorithm::BaselineOgd,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::OnlineConvex => "online_convex",
            Algorithm::OnlineStronglyConvex => "online_strongly_convex",
            Algorithm::O2bConvexUniversal => "o2b_convex_universal",
            Algorithm::Alg2Thm4 => "alg2_thm4",
            Algorithm::Alg2Cor1KnownL => "alg2_cor1_known_L",
            Algorithm::Alg2Cor1UnknownL => "alg2_cor1_unknown_L",
            Algorithm::Alg3GridSearch => "alg3_grid_search",
            Algorithm::BaselineOgd => "baseline_ogd",
        }
    }

    pub fn is_online(self) -> bool {
        matches!(self, Algorithm::OnlineConvex | Algorithm::OnlineStronglyConvex)
    }

    pub fn is_guess_check(self) -> bool {
        matches!(self, Algorithm::Alg2Thm4 | Algorithm::Alg2Cor1KnownL | Algorithm::Alg2Cor1UnknownL)
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::Config(format!("algorithm: unknown algorithm '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainConfig {
    Ball { center: Vec<f64>, radius: f64 },
    Box { lower: Vec<f64>, upper: Vec<f64> },
    AllSpace,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProblemConfig {
    pub family: ProblemFamily,
    pub dimension: usize,
    pub center: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub nu: Option<f64>,
    pub lambda: f64,
    pub domain: DomainConfig,
    pub start: Option<Vec<f64>>,
    pub sequence: SequenceFamily,
    pub drift: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleConfig {
    pub mode: OracleMode,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutputConfig {
    pub trace_path: Option<PathBuf>,
    pub summary_path: Option<PathBuf>,
    pub stride: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub problem: ProblemConfig,
    pub algorithm: Algorithm,
    /// Strong-convexity input for guess-and-check runs.
    pub algorithm_lambda: Option<f64>,
    /// Smoothness input for the known-smoothness configuration.
    pub algorithm_smoothness: Option<f64>,
    pub budget: usize,
    pub oracle: OracleConfig,
    pub output: OutputConfig,
}

const KNOWN_KEYS: &[&str] = &[
    "problem.family",
    "problem.dimension",
    "problem.center",
    "problem.eigenvalues",
    "problem.nu",
    "problem.lambda",
    "problem.domain.kind",
    "problem.domain.center",
    "problem.domain.radius",
    "problem.domain.lower",
    "problem.domain.upper",
    "problem.start",
    "problem.sequence",
    "problem.drift",
    "algorithm",
    "algorithm.lambda",
    "algorithm.L",
    "budget",
    "oracle.mode",
    "oracle.sigma",
    "oracle.seed",
    "output.trace_path",
    "output.summary_path",
    "output.stride",
];

/// Rows above which traces are thinned by default.
const AUTO_STRIDE_ROWS: usize = 100_000;

fn split_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key=value", lineno + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if !KNOWN_KEYS.contains(&k) {
            return Err(Error::Config(format!("line {}: unknown key '{k}'", lineno + 1)));
        }
        if map.insert(k.to_string(), v.to_string()).is_some() {
            return Err(Error::Config(format!("line {}: duplicate key '{k}'", lineno + 1)));
        }
    }
    Ok(map)
}

struct Pairs(BTreeMap<String, String>);

impl Pairs {
    fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn required(&self, key: &str) -> Result<&str> {
        self.get(key).ok_or_else(|| Error::Config(format!("{key}: missing required key")))
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|v| v.parse::<T>().map_err(|_| Error::Config(format!("{key}: cannot parse '{v}'"))))
            .transpose()
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|s| {
                        let s = s.trim();
                        s.parse::<f64>()
                            .ok()
                            .filter(|x| x.is_finite())
                            .ok_or_else(|| Error::Config(format!("{key}: cannot parse '{s}' as a finite number")))
                    })
                    .collect()
            })
            .transpose()
    }
}

/// Broadcasts a single value to `dim` entries and checks the length otherwise.
fn sized(key: &str, v: Vec<f64>, dim: usize) -> Result<Vec<f64>> {
    match v.len() {
        1 => Ok(vec![v[0]; dim]),
        n if n == dim => Ok(v),
        n => Err(Error::Config(format!("{key}: expected {dim} entries, got {n}"))),
    }
}

pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<ExperimentConfig> {
    let p = Pairs(split_pairs(text)?);
    let family: ProblemFamily = p.required("problem.family")?.parse()?;
    let center = p.list("problem.center")?;
    let eigenvalues = p.list("problem.eigenvalues")?;
    let dimension = match p.parse::<usize>("problem.dimension")? {
        Some(d) => d,
        None => center
            .as_ref()
            .filter(|c| c.len() > 1)
            .or(eigenvalues.as_ref().filter(|e| e.len() > 1))
            .map_or(1, Vec::len),
    };
    if dimension == 0 {
        return Err(Error::Config("problem.dimension: must be positive".into()));
    }
    let center = sized("problem.center", center.unwrap_or_else(|| vec![0.0]), dimension)?;
    let eigenvalues = sized("problem.eigenvalues", eigenvalues.unwrap_or_else(|| vec![1.0]), dimension)?;
    let nu = p.parse::<f64>("problem.nu")?;
    let lambda = p.parse::<f64>("problem.lambda")?.unwrap_or(0.0);

    let domain = match p.get("problem.domain.kind").unwrap_or("ball") {
        "ball" => DomainConfig::Ball {
            center: sized("problem.domain.center", p.list("problem.domain.center")?.unwrap_or(vec![0.0]), dimension)?,
            radius: p.parse("problem.domain.radius")?.unwrap_or(1.0),
        },
        "box" => DomainConfig::Box {
            lower: sized("problem.domain.lower", p.list("problem.domain.lower")?.unwrap_or(vec![-1.0]), dimension)?,
            upper: sized("problem.domain.upper", p.list("problem.domain.upper")?.unwrap_or(vec![1.0]), dimension)?,
        },
        "all_space" => DomainConfig::AllSpace,
        other => return Err(Error::Config(format!("problem.domain.kind: unknown kind '{other}'"))),
    };
    let start = p.list("problem.start")?.map(|s| sized("problem.start", s, dimension)).transpose()?;
    let sequence = match p.get("problem.sequence") {
        Some(s) => s.parse::<SequenceFamily>().map_err(|_| Error::Config(format!("problem.sequence: unknown family '{s}'")))?,
        None => SequenceFamily::Fixed,
    };
    let drift = p.parse::<f64>("problem.drift")?.unwrap_or(0.0);

    let algorithm: Algorithm = p.required("algorithm")?.parse()?;
    let budget = p
        .parse::<usize>("budget")?
        .ok_or_else(|| Error::Config("budget: missing required key".into()))?;
    if budget == 0 {
        return Err(Error::Config("budget: must be positive".into()));
    }
    let seed = p.parse::<u64>("oracle.seed")?.unwrap_or(0);
    let mode = match p.get("oracle.mode").unwrap_or("deterministic") {
        "deterministic" => OracleMode::Deterministic,
        "stochastic" => OracleMode::Stochastic { sigma: p.parse("oracle.sigma")?.unwrap_or(0.0), seed },
        other => return Err(Error::Config(format!("oracle.mode: unknown mode '{other}'"))),
    };
    let stride = p.parse::<usize>("output.stride")?.unwrap_or((budget / AUTO_STRIDE_ROWS).max(1));
    if stride == 0 {
        return Err(Error::Config("output.stride: must be positive".into()));
    }

    let cfg = ExperimentConfig {
        problem: ProblemConfig { family, dimension, center, eigenvalues, nu, lambda, domain, start, sequence, drift },
        algorithm,
        algorithm_lambda: p.parse("algorithm.lambda")?,
        algorithm_smoothness: p.parse("algorithm.L")?,
        budget,
        oracle: OracleConfig { mode },
        output: OutputConfig {
            trace_path: p.get("output.trace_path").map(PathBuf::from),
            summary_path: p.get("output.summary_path").map(PathBuf::from),
            stride,
        },
    };
    cfg.validate()?;
    Ok(cfg)
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",")
}

impl ExperimentConfig {
    pub fn domain(&self) -> Result<Domain> {
        let d = self.problem.dimension;
        match &self.problem.domain {
            DomainConfig::Ball { center, radius } => Domain::ball(RealVector::new(center.clone())?, *radius),
            DomainConfig::Box { lower, upper } => {
                Domain::boxed(RealVector::new(lower.clone())?, RealVector::new(upper.clone())?)
            }
            DomainConfig::AllSpace => Domain::all_space(d),
        }
        .map_err(|e| Error::Config(format!("problem.domain: {e}")))
    }

    pub fn start(&self) -> Result<RealVector> {
        match &self.problem.start {
            Some(s) => RealVector::new(s.clone()),
            None => Ok(self.domain()?.center()),
        }
    }

    /// Algorithm/problem compatibility.
    pub fn validate(&self) -> Result<()> {
        let domain = self.domain()?;
        let a = self.algorithm;
        let fail = |msg: String| Err(Error::Config(format!("algorithm {}: {msg}", a.as_str())));
        if let Some(s) = &self.problem.start {
            if !domain.contains(&RealVector::new(s.clone())?, 1e-10)? {
                return Err(Error::Config("problem.start: lies outside the domain".into()));
            }
        }
        if self.problem.family == ProblemFamily::HolderPower && self.problem.nu.is_none() {
            return Err(Error::Config("problem.nu: required for holder_power".into()));
        }
        let stochastic = matches!(self.oracle.mode, OracleMode::Stochastic { .. });
        if let OracleMode::Stochastic { sigma, .. } = self.oracle.mode {
            if !(sigma >= 0.0 && sigma.is_finite()) {
                return Err(Error::Config(format!("oracle.sigma: must be finite and >= 0, got {sigma}")));
            }
        }
        match a {
            Algorithm::O2bConvexUniversal | Algorithm::BaselineOgd | Algorithm::OnlineConvex if !domain.is_bounded() => {
                fail("needs a bounded domain".into())
            }
            Algorithm::Alg3GridSearch if domain.is_bounded() => fail("needs problem.domain.kind=all_space".into()),
            _ if (a.is_guess_check() || a == Algorithm::Alg3GridSearch) && stochastic => {
                fail("runs only with a deterministic oracle".into())
            }
            _ if a.is_online() && stochastic => fail("online runs reveal exact gradients; use oracle.mode=deterministic".into()),
            Algorithm::Alg2Cor1KnownL => match (self.algorithm_lambda, self.algorithm_smoothness) {
                (_, Some(l)) if !(l.is_finite() && l > 0.0) => fail(format!("algorithm.L must be positive, got {l}")),
                (Some(lam), Some(l)) if l < lam => fail(format!("algorithm.L = {l} is below algorithm.lambda = {lam}")),
                _ => self.check_lambda(),
            },
            _ => self.check_lambda(),
        }
    }

    fn check_lambda(&self) -> Result<()> {
        match self.algorithm_lambda {
            Some(l) if !(l > 0.0 && l.is_finite()) => {
                Err(Error::Config(format!("algorithm.lambda: must be positive, got {l}")))
            }
            _ => Ok(()),
        }
    }

    /// Every key with its resolved value; parsing this back gives the same
    /// configuration.
    pub fn to_pairs(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        let p = &self.problem;
        put("problem.family", p.family.as_str().into());
        put("problem.dimension", p.dimension.to_string());
        put("problem.center", join(&p.center));
        put("problem.eigenvalues", join(&p.eigenvalues));
        if let Some(nu) = p.nu {
            put("problem.nu", format!("{nu:?}"));
        }
        put("problem.lambda", format!("{:?}", p.lambda));
        match &p.domain {
            DomainConfig::Ball { center, radius } => {
                put("problem.domain.kind", "ball".into());
                put("problem.domain.center", join(center));
                put("problem.domain.radius", format!("{radius:?}"));
            }
            DomainConfig::Box { lower, upper } => {
                put("problem.domain.kind", "box".into());
                put("problem.domain.lower", join(lower));
                put("problem.domain.upper", join(upper));
            }
            DomainConfig::AllSpace => put("problem.domain.kind", "all_space".into()),
        }
        if let Some(s) = &p.start {
            put("problem.start", join(s));
        }
        put("problem.sequence", p.sequence.as_str().into());
        put("problem.drift", format!("{:?}", p.drift));
        put("algorithm", self.algorithm.as_str().into());
        if let Some(l) = self.algorithm_lambda {
            put("algorithm.lambda", format!("{l:?}"));
        }
        if let Some(l) = self.algorithm_smoothness {
            put("algorithm.L", format!("{l:?}"));
        }
        put("budget", self.budget.to_string());
        match self.oracle.mode {
            OracleMode::Deterministic => put("oracle.mode", "deterministic".into()),
            OracleMode::Stochastic { sigma, seed } => {
                put("oracle.mode", "stochastic".into());
                put("oracle.sigma", format!("{sigma:?}"));
                put("oracle.seed", seed.to_string());
            }
        }
        if let Some(t) = &self.output.trace_path {
            put("output.trace_path", t.display().to_string());
        }
        if let Some(s) = &self.output.summary_path {
            put("output.summary_path", s.display().to_string());
        }
        put("output.stride", self.output.stride.to_string());
        m
    }

    pub fn to_config_string(&self) -> String {
        self.to_pairs().iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }
}
