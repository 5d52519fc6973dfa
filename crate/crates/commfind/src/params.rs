//! Model and detector parameter sets, and the flat key/value config they
//! are resolved from.
//!
//! The symbol set follows the model family: `n` nodes, community sizes in
//! `[delta*k, k]` (or `[m, k]` for the any-size models), at most `d`
//! memberships per node, gap `epsilon`, community-edge fraction `gamma`,
//! density floor `alpha` (or `alpha_min`), distinctness fraction `beta`,
//! and the sparse-model constant `b`. Detector-side engineering knobs scale
//! the trial counts and sampling probabilities, whose textbook values are
//! asymptotic and can be far too conservative (or land above 1) at small
//! scale; effective values are echoed in every result.

use crate::error::Error;
use crate::Result;
use serde::Serialize;

/// The kind of planted instance being generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    CliqueSimilar,
    DenseSimilar,
    AffinitySimilar,
    AnySizeClique,
    AnySizeDense,
    Sparse,
}

impl ModelKind {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "clique" | "clique-similar" => ModelKind::CliqueSimilar,
            "dense" | "dense-similar" => ModelKind::DenseSimilar,
            "affinity" | "affinity-similar" => ModelKind::AffinitySimilar,
            "anysize-clique" | "any-size-clique" => ModelKind::AnySizeClique,
            "anysize-dense" | "any-size-dense" => ModelKind::AnySizeDense,
            "sparse" => ModelKind::Sparse,
            other => {
                return Err(Error::InvalidParams(format!("unknown model kind `{other}`")))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::CliqueSimilar => "clique",
            ModelKind::DenseSimilar => "dense",
            ModelKind::AffinitySimilar => "affinity",
            ModelKind::AnySizeClique => "anysize-clique",
            ModelKind::AnySizeDense => "anysize-dense",
            ModelKind::Sparse => "sparse",
        }
    }

    /// Models whose community sizes are drawn log-uniformly in `[m, k]`.
    pub fn is_any_size(&self) -> bool {
        matches!(self, ModelKind::AnySizeClique | ModelKind::AnySizeDense)
    }

    pub fn is_clique(&self) -> bool {
        matches!(self, ModelKind::CliqueSimilar | ModelKind::AnySizeClique)
    }
}

/// Fully resolved generation parameters.
#[derive(Debug, Clone, Serialize)]
pub struct ModelParams {
    pub n: usize,
    pub k: usize,
    /// Minimum community size for the any-size models; equals `k` otherwise.
    pub m: usize,
    /// Maximum memberships per node.
    pub d: u32,
    pub delta: f64,
    pub epsilon: f64,
    pub gamma: f64,
    /// Uniform density / affinity floor (`p_u >= sqrt(alpha)`).
    pub alpha: f64,
    /// Density floor for the any-size dense model.
    pub alpha_min: f64,
    /// Distinctness fraction.
    pub beta: f64,
    /// Sparse-model constant; pair probability is `b / sqrt(k)`.
    pub b: f64,
    pub community_count: usize,
}

impl ModelParams {
    /// Resolve and validate against a config for the given model kind.
    pub fn from_config(cfg: &Config, kind: ModelKind) -> Result<Self> {
        let n = cfg.require_usize("n", cfg.n)?;
        let k = cfg.require_usize("k", cfg.k)?;
        let community_count = cfg.require_usize("community_count", cfg.community_count)?;
        let d = cfg.d.unwrap_or(1);
        let delta = cfg.delta.unwrap_or(1.0);
        let epsilon = cfg.require_f64("epsilon", cfg.epsilon)?;
        let gamma = cfg.gamma.unwrap_or(1.0);
        let m = cfg.m.unwrap_or(k);
        let alpha = match kind {
            ModelKind::DenseSimilar | ModelKind::AffinitySimilar => {
                cfg.require_f64("alpha", cfg.alpha)?
            }
            _ => cfg.alpha.unwrap_or(1.0),
        };
        let alpha_min = match kind {
            ModelKind::AnySizeDense => cfg.require_f64("alpha_min", cfg.alpha_min)?,
            _ => cfg.alpha_min.unwrap_or(alpha),
        };
        let beta = cfg.beta.unwrap_or(1.0);
        let b = match kind {
            ModelKind::Sparse => cfg.require_f64("b", cfg.b)?,
            _ => cfg.b.unwrap_or(0.0),
        };

        let params = ModelParams {
            n, k, m, d, delta, epsilon, gamma, alpha, alpha_min, beta, b, community_count,
        };
        params.validate(kind)?;
        Ok(params)
    }

    pub fn validate(&self, kind: ModelKind) -> Result<()> {
        if !(0.0 < self.delta && self.delta <= 1.0) {
            return Err(Error::InvalidParams(format!("delta must be in (0, 1], got {}", self.delta)));
        }
        if self.delta * (self.k as f64) < 1.0 {
            return Err(Error::InvalidParams(format!(
                "delta * k must be at least 1, got {}",
                self.delta * self.k as f64
            )));
        }
        if self.d < 1 {
            return Err(Error::InvalidParams("d must be at least 1".into()));
        }
        if !(0.0 < self.epsilon && self.epsilon < 1.0) {
            return Err(Error::InvalidParams(format!(
                "epsilon must be in (0, 1), got {}",
                self.epsilon
            )));
        }
        if !(0.0 < self.gamma && self.gamma <= 1.0) {
            return Err(Error::InvalidParams(format!("gamma must be in (0, 1], got {}", self.gamma)));
        }
        let floor = match kind {
            ModelKind::AnySizeDense => self.alpha_min,
            _ => self.alpha,
        };
        if !kind.is_clique() && kind != ModelKind::Sparse {
            if !(0.0 < floor && floor <= 1.0) {
                return Err(Error::InvalidParams(format!(
                    "density floor must be in (0, 1], got {floor}"
                )));
            }
            if self.epsilon >= floor {
                return Err(Error::InvalidParams(format!(
                    "epsilon {} must be below the density floor {floor}",
                    self.epsilon
                )));
            }
        }
        if !(0.0 < self.beta && self.beta <= 1.0) {
            return Err(Error::InvalidParams(format!("beta must be in (0, 1], got {}", self.beta)));
        }
        if kind.is_any_size() && !(1 <= self.m && self.m <= self.k) {
            return Err(Error::InvalidParams(format!(
                "any-size models need 1 <= m <= k, got m = {}, k = {}",
                self.m, self.k
            )));
        }
        if kind == ModelKind::Sparse && self.b <= 10.0 {
            return Err(Error::InvalidParams(format!(
                "sparse model requires b > 10, got {}",
                self.b
            )));
        }
        Ok(())
    }
}

/// Detector-side parameters: the model symbols the algorithms read, plus
/// engineering knobs. Unset symbols fail with a named error when an
/// algorithm that needs them runs.
#[derive(Debug, Clone, Serialize)]
pub struct DetectorParams {
    pub k: Option<usize>,
    pub m: Option<usize>,
    pub d: Option<u32>,
    pub delta: Option<f64>,
    pub epsilon: Option<f64>,
    pub gamma: Option<f64>,
    pub alpha: Option<f64>,
    pub alpha_min: Option<f64>,
    pub beta: Option<f64>,
    pub b: Option<f64>,
    /// Multiplies every sampling probability formula.
    pub sample_prob_scale: f64,
    /// Multiplies every starting-node count.
    pub trial_count_scale: f64,
    /// The hidden constant in the robust sampling probability.
    pub robust_p_constant: f64,
    /// Explicit seed-set size, overriding the per-algorithm formula.
    pub t_override: Option<usize>,
    /// Enumerate only maximal cliques inside samples (with the adjusted
    /// sampling probability).
    pub use_maximal_cliques: bool,
    /// Override for the gap-relaxed `epsilon'`.
    pub epsilon_prime: Option<f64>,
    /// Per-trial cap on enumerated subsets/cliques.
    pub subset_budget: u64,
    /// Any-size clique membership test against the literal starting-node
    /// neighborhood instead of the unowned-edge arena.
    pub literal_v_scope: bool,
}

impl Default for DetectorParams {
    fn default() -> Self {
        DetectorParams {
            k: None,
            m: None,
            d: None,
            delta: None,
            epsilon: None,
            gamma: None,
            alpha: None,
            alpha_min: None,
            beta: None,
            b: None,
            sample_prob_scale: 1.0,
            trial_count_scale: 1.0,
            robust_p_constant: 1.0,
            t_override: None,
            use_maximal_cliques: false,
            epsilon_prime: None,
            subset_budget: 10_000_000,
            literal_v_scope: false,
        }
    }
}

impl DetectorParams {
    pub fn from_config(cfg: &Config) -> Result<Self> {
        let defaults = DetectorParams::default();
        let p = DetectorParams {
            k: cfg.k,
            m: cfg.m,
            d: cfg.d,
            delta: cfg.delta,
            epsilon: cfg.epsilon,
            gamma: cfg.gamma,
            alpha: cfg.alpha,
            alpha_min: cfg.alpha_min,
            beta: cfg.beta,
            b: cfg.b,
            sample_prob_scale: cfg.sample_prob_scale.unwrap_or(defaults.sample_prob_scale),
            trial_count_scale: cfg.trial_count_scale.unwrap_or(defaults.trial_count_scale),
            robust_p_constant: cfg.robust_p_constant.unwrap_or(defaults.robust_p_constant),
            t_override: cfg.t_override,
            use_maximal_cliques: cfg.use_maximal_cliques.unwrap_or(false),
            epsilon_prime: cfg.epsilon_prime,
            subset_budget: cfg.subset_budget.unwrap_or(defaults.subset_budget),
            literal_v_scope: cfg.literal_v_scope.unwrap_or(false),
        };
        if p.sample_prob_scale <= 0.0 || p.trial_count_scale <= 0.0 || p.robust_p_constant <= 0.0 {
            return Err(Error::InvalidParams(
                "sample_prob_scale, trial_count_scale, and robust_p_constant must be positive".into(),
            ));
        }
        if p.t_override == Some(0) {
            return Err(Error::InvalidParams("t_override must be at least 1".into()));
        }
        Ok(p)
    }

    pub(crate) fn req_f64(&self, name: &str, value: Option<f64>) -> Result<f64> {
        value.ok_or_else(|| Error::InvalidParams(format!("missing required parameter `{name}`")))
    }

    pub(crate) fn req_usize(&self, name: &str, value: Option<usize>) -> Result<usize> {
        value.ok_or_else(|| Error::InvalidParams(format!("missing required parameter `{name}`")))
    }

    /// Gap-relaxed epsilon' for the clique procedure:
    /// `eps^2 / (6 ln(d/(delta gamma)))` unless overridden.
    pub fn epsilon_prime_clique(&self) -> Result<f64> {
        if let Some(e) = self.epsilon_prime {
            return Ok(e);
        }
        self.derived_epsilon_prime(6.0)
    }

    /// Gap-relaxed epsilon' for the dense procedure:
    /// `eps^2 / (10 ln(d/(delta gamma)))` unless overridden.
    pub fn epsilon_prime_dense(&self) -> Result<f64> {
        if let Some(e) = self.epsilon_prime {
            return Ok(e);
        }
        self.derived_epsilon_prime(10.0)
    }

    fn derived_epsilon_prime(&self, constant: f64) -> Result<f64> {
        let epsilon = self.req_f64("epsilon", self.epsilon)?;
        let d = self.req_usize("d", self.d.map(|d| d as usize))? as f64;
        let delta = self.delta.unwrap_or(1.0);
        let gamma = self.gamma.unwrap_or(1.0);
        let ratio = d / (delta * gamma);
        if ratio <= 1.0 {
            return Err(Error::InvalidParams(format!(
                "epsilon' formula eps^2/({constant} ln(d/(delta gamma))) needs d/(delta gamma) > 1, \
                 got {ratio}; set epsilon_prime explicitly"
            )));
        }
        Ok(epsilon * epsilon / (constant * ratio.ln()))
    }
}

/// Flat `key = value` configuration. Every recognized key is optional here;
/// consumers fail with a named error when a key they need is missing.
#[derive(Debug, Clone, Default)]
pub struct Config {
    pub model: Option<String>,
    pub ambient: Option<String>,
    pub algo: Option<String>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub m: Option<usize>,
    pub d: Option<u32>,
    pub delta: Option<f64>,
    pub epsilon: Option<f64>,
    pub gamma: Option<f64>,
    pub alpha: Option<f64>,
    pub alpha_min: Option<f64>,
    pub beta: Option<f64>,
    pub b: Option<f64>,
    pub community_count: Option<usize>,
    pub ambient_q: Option<f64>,
    pub stress_count: Option<usize>,
    pub sample_prob_scale: Option<f64>,
    pub trial_count_scale: Option<f64>,
    pub robust_p_constant: Option<f64>,
    pub t_override: Option<usize>,
    pub use_maximal_cliques: Option<bool>,
    pub epsilon_prime: Option<f64>,
    pub subset_budget: Option<u64>,
    pub literal_v_scope: Option<bool>,
}

impl Config {
    /// Assign one key. Unknown keys and malformed values are errors.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn f64v(key: &str, value: &str) -> Result<f64> {
            value.parse().map_err(|_| {
                Error::InvalidParams(format!("key `{key}`: expected a number, got `{value}`"))
            })
        }
        fn usizev(key: &str, value: &str) -> Result<usize> {
            value.parse().map_err(|_| {
                Error::InvalidParams(format!("key `{key}`: expected an integer, got `{value}`"))
            })
        }
        fn boolv(key: &str, value: &str) -> Result<bool> {
            value.parse().map_err(|_| {
                Error::InvalidParams(format!("key `{key}`: expected true/false, got `{value}`"))
            })
        }
        match key {
            "model" => self.model = Some(value.to_string()),
            "ambient" => self.ambient = Some(value.to_string()),
            "algo" => self.algo = Some(value.to_string()),
            "n" => self.n = Some(usizev(key, value)?),
            "k" => self.k = Some(usizev(key, value)?),
            "m" => self.m = Some(usizev(key, value)?),
            "d" => self.d = Some(usizev(key, value)? as u32),
            "delta" => self.delta = Some(f64v(key, value)?),
            "epsilon" => self.epsilon = Some(f64v(key, value)?),
            "gamma" => self.gamma = Some(f64v(key, value)?),
            "alpha" => self.alpha = Some(f64v(key, value)?),
            "alpha_min" => self.alpha_min = Some(f64v(key, value)?),
            "beta" => self.beta = Some(f64v(key, value)?),
            "b" => self.b = Some(f64v(key, value)?),
            "community_count" => self.community_count = Some(usizev(key, value)?),
            "ambient_q" => self.ambient_q = Some(f64v(key, value)?),
            "stress_count" => self.stress_count = Some(usizev(key, value)?),
            "sample_prob_scale" => self.sample_prob_scale = Some(f64v(key, value)?),
            "trial_count_scale" => self.trial_count_scale = Some(f64v(key, value)?),
            "robust_p_constant" => self.robust_p_constant = Some(f64v(key, value)?),
            "t_override" => self.t_override = Some(usizev(key, value)?),
            "use_maximal_cliques" => self.use_maximal_cliques = Some(boolv(key, value)?),
            "epsilon_prime" => self.epsilon_prime = Some(f64v(key, value)?),
            "subset_budget" => self.subset_budget = Some(usizev(key, value)? as u64),
            "literal_v_scope" => self.literal_v_scope = Some(boolv(key, value)?),
            other => {
                return Err(Error::InvalidParams(format!("unknown config key `{other}`")));
            }
        }
        Ok(())
    }

    fn require_f64(&self, name: &str, value: Option<f64>) -> Result<f64> {
        value.ok_or_else(|| Error::InvalidParams(format!("missing required parameter `{name}`")))
    }

    fn require_usize(&self, name: &str, value: Option<usize>) -> Result<usize> {
        value.ok_or_else(|| Error::InvalidParams(format!("missing required parameter `{name}`")))
    }
}
