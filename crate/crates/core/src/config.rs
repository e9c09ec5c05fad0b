//! Session configuration files.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::axioms::JacobiOptions;
use crate::error::ConfigError;
use crate::lie::LieAlgebra;
use crate::rational::{self, Rational};
use crate::suite::{SuitePlan, V0Plan};
use crate::vertex::{Session, SessionOptions};
use crate::window::ModeWindow;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    pub m0: (i64, i64),
    /// One range per torus direction; a single range is repeated over all of them.
    pub m: Vec<(i64, i64)>,
    pub states: Vec<String>,
    #[serde(default = "default_bound")]
    pub locality_bound: u32,
    #[serde(default = "default_depth")]
    pub depth: usize,
}

fn default_bound() -> u32 {
    8
}

fn default_depth() -> usize {
    2
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CacheConfig {
    #[serde(default = "default_capacity")]
    pub capacity: usize,
    #[serde(default = "default_termination")]
    pub termination_bound: i64,
    /// Persistent result cache, keyed by content hash.
    #[serde(default)]
    pub path: Option<PathBuf>,
}

fn default_capacity() -> usize {
    1 << 18
}

fn default_termination() -> i64 {
    256
}

impl Default for CacheConfig {
    fn default() -> Self {
        CacheConfig { capacity: default_capacity(), termination_bound: default_termination(), path: None }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub json: Option<PathBuf>,
    #[serde(default)]
    pub csv: Option<PathBuf>,
    /// Mutation testing outcomes.
    #[serde(default)]
    pub mutations: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default = "default_random_pairs")]
    pub random_pairs: usize,
    #[serde(default = "default_depth")]
    pub random_depth: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_spot_checks")]
    pub spot_checks: usize,
    #[serde(default = "default_vacuum_k")]
    pub vacuum_k: i64,
    #[serde(default)]
    pub v0: Option<V0Plan>,
    #[serde(default = "default_true")]
    pub module: bool,
}

fn default_random_pairs() -> usize {
    4
}

fn default_seed() -> u64 {
    7
}

fn default_spot_checks() -> usize {
    10
}

fn default_vacuum_k() -> i64 {
    2
}

fn default_true() -> bool {
    true
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            random_pairs: default_random_pairs(),
            random_depth: default_depth(),
            seed: default_seed(),
            spot_checks: default_spot_checks(),
            vacuum_k: default_vacuum_k(),
            v0: Some(V0Plan { depth: 3, max_degree: 3 }),
            module: true,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionConfig {
    /// Path to the Lie algebra JSON, relative to the config file, or `"sl2"`.
    pub lie: String,
    pub rank: usize,
    pub level: String,
    pub window: WindowConfig,
    #[serde(default)]
    pub suite: SuiteConfig,
    #[serde(default)]
    pub cache: CacheConfig,
    #[serde(default)]
    pub outputs: OutputConfig,
    /// Refuse suite runs whose estimated cell count exceeds this.
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_budget() -> u64 {
    50_000_000
}

/// A validated configuration with its session built.
pub struct Loaded {
    pub config: SessionConfig,
    pub lie_json: String,
    pub session: Session,
    pub window: ModeWindow,
}

impl SessionConfig {
    pub fn from_json_str(s: &str, base_dir: &Path) -> Result<Self, ConfigError> {
        let mut c: SessionConfig = serde_json::from_str(s).map_err(|e| ConfigError::from_json("config", e))?;
        c.base_dir = base_dir.to_path_buf();
        c.check()?;
        Ok(c)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = read(path)?;
        Self::from_json_str(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn level(&self) -> Result<Rational, ConfigError> {
        Ok(rational::parse(&self.level)?)
    }

    fn check(&self) -> Result<(), ConfigError> {
        if self.rank == 0 {
            return Err(ConfigError::Invalid("rank must be at least 1".into()));
        }
        self.level()?;
        let w = &self.window;
        if w.m0.0 > w.m0.1 || w.m.iter().any(|(a, b)| a > b) || w.m.is_empty() {
            return Err(ConfigError::Invalid("window ranges are empty".into()));
        }
        if w.m.len() != 1 && w.m.len() != self.rank {
            return Err(ConfigError::Invalid(format!("window has {} m-ranges but rank is {}", w.m.len(), self.rank)));
        }
        if w.states.is_empty() {
            return Err(ConfigError::Invalid("window needs at least one state".into()));
        }
        if let Some(v0) = &self.suite.v0 {
            if v0.depth == 0 {
                return Err(ConfigError::Invalid("v0 depth must be at least 1".into()));
            }
        }
        Ok(())
    }

    pub fn lie_json(&self) -> Result<String, ConfigError> {
        if self.lie == "sl2" {
            return Ok(serde_json::to_string(&LieAlgebra::sl2().to_spec()).expect("serializable"));
        }
        read(&self.base_dir.join(&self.lie))
    }

    pub fn session_options(&self) -> SessionOptions {
        SessionOptions { cache_capacity: self.cache.capacity, termination_bound: self.cache.termination_bound }
    }

    /// Loads the Lie algebra, builds the session and parses the window states.
    pub fn load(self) -> Result<Loaded, ConfigError> {
        let lie_json = self.lie_json()?;
        let lie = LieAlgebra::from_json_str(&lie_json)?;
        let session = Session::new(Arc::new(lie), self.rank, self.level()?, self.session_options());
        let states = self.window.states.iter().map(|e| session.parse_state(e)).collect::<Result<Vec<_>, _>>()?;
        let m = if self.window.m.len() == 1 { vec![self.window.m[0]; self.rank] } else { self.window.m.clone() };
        let window = ModeWindow::new(self.window.m0, m, states).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(Loaded { config: self, lie_json, session, window })
    }
}

impl Loaded {
    pub fn plan(&self) -> SuitePlan {
        let s = &self.config.suite;
        SuitePlan {
            window: self.window.clone(),
            jacobi: JacobiOptions { cap: self.config.window.locality_bound, spot_checks: s.spot_checks, seed: s.seed },
            random_pairs: s.random_pairs,
            random_depth: s.random_depth,
            random_max_k: 2,
            seed: s.seed,
            vacuum_k: s.vacuum_k,
            v0: s.v0,
            module: s.module,
        }
    }

    /// Estimated number of coefficient cells the suite touches: every pair
    /// check scans index pairs times states, a few times over.
    pub fn estimate(&self) -> u64 {
        let plan = self.plan();
        let pairs = (self.session.lie().dim().pow(2) + plan.random_pairs) as u64;
        let n = self.window.indices().len() as u64;
        let per_pair = n * n * self.window.states.len() as u64 * (4 + 2 * plan.jacobi.cap as u64);
        pairs * per_pair * if plan.module { 2 } else { 1 }
    }
}

fn read(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.display().to_string(), source })
}
