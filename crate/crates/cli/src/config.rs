//! TOML experiment configs. Every table rejects unknown keys.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use blochlab::geometry::{Arc, CantorKind, CircleSet};
use blochlab::majorant::Majorant;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::Invalid;

/// Keys shared by every experiment.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Common {
    pub experiment: Option<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "yes")]
    pub plot: bool,
    pub out: Option<String>,
}

fn yes() -> bool {
    true
}

const COMMON_KEYS: [&str; 4] = ["experiment", "seed", "plot", "out"];

pub struct Loaded<T> {
    pub common: Common,
    pub params: T,
    /// Directory holding the config file; relative paths resolve against it.
    pub base: PathBuf,
}

pub fn load<T: DeserializeOwned>(path: &Path, experiment: &str) -> Result<Loaded<T>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Invalid(format!("cannot read config {}: {e}", path.display())))?;
    let mut table: toml::Table = toml::from_str(&text).map_err(|e| Invalid(format!("config syntax: {e}")))?;
    let mut common = toml::Table::new();
    for key in COMMON_KEYS {
        if let Some(v) = table.remove(key) {
            common.insert(key.to_string(), v);
        }
    }
    let common: Common = common.try_into().map_err(|e| Invalid(format!("config: {e}")))?;
    if let Some(name) = &common.experiment {
        if name != experiment {
            return Err(Invalid(format!("config is for experiment {name:?}, not {experiment:?}")).into());
        }
    }
    let params: T = table
        .try_into()
        .map_err(|e| Invalid(format!("config for {experiment}: {e}")))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(Loaded { common, params, base })
}

/// A set given either as a literal or as a Cantor generator with a depth.
#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SetSpec {
    pub literal: Option<String>,
    pub cantor: Option<String>,
    pub depth: Option<u32>,
    /// Arc hosting the Cantor construction instead of the whole circle.
    pub host: Option<String>,
}

pub const MAX_SET_DEPTH: u32 = 20;

impl SetSpec {
    pub fn build(&self) -> Result<CircleSet> {
        match (&self.literal, &self.cantor) {
            (Some(lit), None) => {
                if self.depth.is_some() || self.host.is_some() {
                    bail!(Invalid("depth and host only apply to Cantor sets".into()));
                }
                Ok(lit.parse::<CircleSet>().map_err(invalid)?)
            }
            (None, Some(desc)) => {
                let kind: CantorKind = desc.parse().map_err(invalid)?;
                let depth = self.depth.ok_or_else(|| Invalid("a Cantor set needs a depth".into()))?;
                if depth > MAX_SET_DEPTH {
                    bail!(Invalid(format!("set depth {depth} exceeds {MAX_SET_DEPTH}")));
                }
                match &self.host {
                    Some(h) => Ok(kind.build_in(depth, &parse_arc(h)?).map_err(invalid)?),
                    None => Ok(kind.build(depth).map_err(invalid)?),
                }
            }
            _ => bail!(Invalid("a set needs exactly one of literal or cantor".into())),
        }
    }

    pub fn cantor_kind(&self) -> Result<Option<CantorKind>> {
        self.cantor.as_deref().map(|d| d.parse().map_err(invalid)).transpose().map_err(Into::into)
    }
}

pub fn invalid(e: blochlab::Error) -> Invalid {
    Invalid(e.to_string())
}

pub fn parse_arc(s: &str) -> Result<Arc> {
    Ok(s.parse::<Arc>().map_err(invalid)?)
}

pub fn majorant(desc: &str, base: &Path) -> Result<Majorant> {
    Ok(Majorant::parse(desc, Some(base)).map_err(invalid)?)
}

pub fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Invalid(msg()).into())
    }
}

pub fn resolve(base: &Path, p: &str) -> PathBuf {
    let p = Path::new(p);
    if p.is_relative() {
        base.join(p)
    } else {
        p.to_path_buf()
    }
}

pub fn context<T>(r: blochlab::Result<T>, what: &str) -> Result<T> {
    r.map_err(|e| match e {
        blochlab::Error::Numeric(_) => anyhow::Error::new(e),
        other => Invalid(other.to_string()).into(),
    })
    .with_context(|| what.to_string())
}
