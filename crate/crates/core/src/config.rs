//! TOML group and subgroup configuration.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::extended::ExtendedOracle;
use crate::group::free::FreeGroup;
use crate::group::heisenberg::HeisenbergGroup;
use crate::group::racg::{CommutationGraph, RacgGroup};
use crate::group::zd::ZdGroup;
use crate::group::{GroupOracle, Word};
use crate::rewrite::group::RewritingGroup;
use crate::rewrite::RewritingSystem;
use crate::subgroup::SubgroupSpec;

/// Integer type used for group coordinates.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    I64,
    I128,
    #[default]
    Bigint,
}

/// A group family with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupConfig {
    Zd {
        d: usize,
        #[serde(default)]
        scalar: ScalarKind,
    },
    Heisenberg {
        #[serde(default)]
        include_c: bool,
        #[serde(default)]
        scalar: ScalarKind,
    },
    Free {
        rank: usize,
    },
    Racg {
        generators: Vec<String>,
        edges: Vec<(String, String)>,
    },
    Rewriting {
        /// Rules file, relative to the config file.
        rules: PathBuf,
        /// Rules text, filled in on load so the digest covers the rules.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rules_text: Option<String>,
        #[serde(default = "default_max_power")]
        max_power: u32,
        #[serde(default = "default_max_pairs")]
        max_pairs: usize,
    },
}

fn default_max_power() -> u32 {
    64
}

fn default_max_pairs() -> usize {
    100_000
}

impl GroupConfig {
    pub fn zd(d: usize) -> Self {
        GroupConfig::Zd {
            d,
            scalar: ScalarKind::I64,
        }
    }

    pub fn heisenberg() -> Self {
        GroupConfig::Heisenberg {
            include_c: false,
            scalar: ScalarKind::Bigint,
        }
    }

    pub fn free(rank: usize) -> Self {
        GroupConfig::Free { rank }
    }

    pub fn pentagon() -> Self {
        let generators: Vec<String> = (1..=5).map(|i| format!("s{i}")).collect();
        let edges = (0..5)
            .map(|i| (generators[i].clone(), generators[(i + 1) % 5].clone()))
            .collect();
        GroupConfig::Racg { generators, edges }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config(format!("group config: {e}")))
    }

    /// Reads a config file; rewriting rules are read relative to it.
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        if let GroupConfig::Rewriting { rules, rules_text, .. } = &mut cfg {
            let full = path.parent().unwrap_or(Path::new(".")).join(&*rules);
            let body = std::fs::read_to_string(&full)
                .map_err(|e| Error::config(format!("cannot read rules {}: {e}", full.display())))?;
            *rules_text = Some(body);
        }
        Ok(cfg)
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn digest(&self) -> String {
        let mut canonical = self.clone();
        if let GroupConfig::Rewriting { rules, .. } = &mut canonical {
            *rules = PathBuf::new();
        }
        digest_json(&canonical)
    }

    pub fn build(&self) -> Result<Arc<dyn GroupOracle>> {
        Ok(match self {
            GroupConfig::Zd { d, scalar } => match scalar {
                ScalarKind::I64 => Arc::new(ZdGroup::<i64>::new(*d)?),
                ScalarKind::I128 => Arc::new(ZdGroup::<i128>::new(*d)?),
                ScalarKind::Bigint => Arc::new(ZdGroup::<BigInt>::new(*d)?),
            },
            GroupConfig::Heisenberg { include_c, scalar } => match scalar {
                ScalarKind::I64 => Arc::new(HeisenbergGroup::<i64>::new(*include_c)),
                ScalarKind::I128 => Arc::new(HeisenbergGroup::<i128>::new(*include_c)),
                ScalarKind::Bigint => Arc::new(HeisenbergGroup::<BigInt>::new(*include_c)),
            },
            GroupConfig::Free { rank } => Arc::new(FreeGroup::new(*rank)?),
            GroupConfig::Racg { generators, edges } => {
                let index = |s: &String| {
                    generators
                        .iter()
                        .position(|g| g == s)
                        .ok_or_else(|| Error::config(format!("edge names unknown generator {s:?}")))
                };
                let pairs = edges
                    .iter()
                    .map(|(x, y)| Ok((index(x)?, index(y)?)))
                    .collect::<Result<Vec<_>>>()?;
                Arc::new(RacgGroup::new(
                    generators,
                    CommutationGraph::new(generators.len(), &pairs)?,
                )?)
            }
            GroupConfig::Rewriting {
                rules_text,
                max_power,
                max_pairs,
                ..
            } => {
                let text = rules_text
                    .as_deref()
                    .ok_or_else(|| Error::config("rewriting config was not loaded from a file"))?;
                Arc::new(RewritingGroup::new(
                    RewritingSystem::parse(text)?,
                    *max_pairs,
                    *max_power,
                )?)
            }
        })
    }
}

/// A subgroup given by generating words, plus an optional closed-form
/// distance and the generating-set extension switch.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupConfig {
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    /// Add each generating word to S as a new letter.
    #[serde(default)]
    pub extend_generating_set: bool,
}

impl SubgroupConfig {
    pub fn new(generators: &[&str], formula: Option<&str>) -> Self {
        Self {
            generators: generators.iter().map(|s| s.to_string()).collect(),
            formula: formula.map(str::to_string),
            extend_generating_set: false,
        }
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config(format!("subgroup config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn digest(&self) -> String {
        digest_json(self)
    }
}

fn digest_json<T: Serialize>(value: &T) -> String {
    let json = serde_json::to_vec(value).expect("config serializes");
    hex::encode(Sha256::digest(&json))
}

/// A group together with a subgroup, ready for computation.
#[derive(Clone)]
pub struct Setup {
    pub group: GroupConfig,
    pub subgroup: SubgroupConfig,
    pub oracle: Arc<dyn GroupOracle>,
    pub spec: Arc<SubgroupSpec>,
}

impl Setup {
    pub fn new(group: GroupConfig, subgroup: SubgroupConfig) -> Result<Self> {
        let base = group.build()?;
        let words: Vec<Word> = subgroup
            .generators
            .iter()
            .map(|w| base.parse_word(w))
            .collect::<Result<_>>()?;
        let (oracle, words): (Arc<dyn GroupOracle>, Vec<Word>) = if subgroup.extend_generating_set {
            let ext = ExtendedOracle::new(base.clone(), &words)?;
            let letters = (0..words.len())
                .map(|i| vec![crate::group::Generator((base.alphabet().len() + 2 * i) as u8)])
                .collect();
            (Arc::new(ext), letters)
        } else {
            (base, words)
        };
        let spec = SubgroupSpec::new(oracle.as_ref(), words, subgroup.formula.as_deref())?;
        Ok(Self {
            group,
            subgroup,
            oracle,
            spec: Arc::new(spec),
        })
    }

    pub fn group_digest(&self) -> String {
        self.group.digest()
    }

    pub fn subgroup_digest(&self) -> String {
        self.subgroup.digest()
    }
}
