//! JSON cache of constructed group data, keyed by construction parameters.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::octagon::OctagonDomain;
use super::presentation::GroupPresentation;
use super::representation::FlatRepresentation;
use crate::error::{Error, Result};

pub const CACHE_ENV: &str = "TRACTOR_BGG_CACHE";
const OCTAGON_KEY: &str = "octagon:genus=2:angle=pi/4";

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct GroupCache {
    pub schema: u32,
    /// Generator matrices, row-major, per construction key.
    pub groups: BTreeMap<String, Vec<Vec<f64>>>,
}

/// `$TRACTOR_BGG_CACHE` if set, else the given default.
pub fn cache_path(configured: Option<&Path>) -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).map(PathBuf::from).or_else(|| configured.map(Path::to_path_buf))
}

impl GroupCache {
    pub fn load(path: &Path) -> Result<Self> {
        match fs::read_to_string(path) {
            Ok(s) => Ok(serde_json::from_str(&s)?),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Self { schema: 1, ..Self::default() }),
            Err(e) => Err(e.into()),
        }
    }

    /// Writes through a temporary file and a rename.
    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_string_pretty(self)?)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

fn to_rows(m: &DMatrix<f64>) -> Vec<f64> {
    m.transpose().iter().copied().collect()
}

/// The octagon group, read from the cache when present and stored otherwise.
pub fn cached_octagon_group(path: Option<&Path>) -> Result<FlatRepresentation> {
    let Some(path) = path else {
        return Ok(super::octagon::octagon_group());
    };
    let mut cache = GroupCache::load(path)?;
    let geometric = match cache.groups.get(OCTAGON_KEY) {
        Some(rows) => rows
            .iter()
            .map(|r| {
                if r.len() != 9 {
                    return Err(Error::Config(format!("cached matrix has {} entries", r.len())));
                }
                Ok(DMatrix::from_row_slice(3, 3, r))
            })
            .collect::<Result<Vec<_>>>()?,
        None => {
            let g = OctagonDomain::regular().generators;
            cache.schema = 1;
            cache.groups.insert(OCTAGON_KEY.into(), g.iter().map(to_rows).collect());
            cache.save(path)?;
            g
        }
    };
    FlatRepresentation::defining(GroupPresentation::surface(2), geometric)
}
