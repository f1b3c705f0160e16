use std::path::Path;

use multstrat::field::Field;
use multstrat::random::DEFAULT_SEED;
use serde::Deserialize;

/// Environment variable naming a TOML file of default budgets.
pub const CONFIG_ENV: &str = "MULTSTRAT_CONFIG";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub field: Option<Field>,
    /// Oracle modulus; defaults to the field characteristic, or 7 over `Q`.
    pub q: Option<u32>,
    pub nmax: u32,
    pub budget: u64,
    pub seed: u64,
    pub depth: usize,
    pub replay: Option<String>,
}

impl Default for Options {
    fn default() -> Self {
        Options { field: None, q: None, nmax: 10, budget: 1_000_000, seed: DEFAULT_SEED, depth: 3, replay: None }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub q: Option<u32>,
    pub nmax: Option<u32>,
    pub budget: Option<u64>,
    pub seed: Option<u64>,
    pub depth: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<ConfigFile, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }

    /// Reads the file named by the environment variable, if set.
    pub fn from_env() -> Result<ConfigFile, String> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) => Self::load(Path::new(&p)),
            None => Ok(ConfigFile::default()),
        }
    }

    pub fn apply(&self, mut o: Options) -> Options {
        o.q = o.q.or(self.q);
        o.nmax = self.nmax.unwrap_or(o.nmax);
        o.budget = self.budget.unwrap_or(o.budget);
        o.seed = self.seed.unwrap_or(o.seed);
        o.depth = self.depth.unwrap_or(o.depth);
        o
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_overrides_defaults() {
        let c: ConfigFile = toml::from_str("nmax = 6\nbudget = 5000\n").unwrap();
        let o = c.apply(Options::default());
        assert_eq!((o.nmax, o.budget, o.depth), (6, 5000, 3));
        assert!(toml::from_str::<ConfigFile>("colour = 1").is_err());
    }
}
