//! Persistent curve cache keyed by the content hash of the sweep definition.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use fraccurv_core::estimators::{CurvatureCurve, CurveOptions};

use crate::config::{MapSpec, OpenSetSpec, RunConfig};

#[derive(Serialize)]
struct CacheKey<'a> {
    ambient_dim: usize,
    maps: &'a [MapSpec],
    open_set: &'a OpenSetSpec,
    reference_radius: Option<f64>,
    options: &'a CurveOptions,
}

/// Hex SHA-256 of everything that determines the curve.
pub fn cache_key(cfg: &RunConfig, opts: &CurveOptions) -> String {
    let key = CacheKey {
        ambient_dim: cfg.ambient_dim,
        maps: &cfg.maps,
        open_set: &cfg.open_set,
        reference_radius: cfg.reference_radius,
        options: opts,
    };
    let bytes = serde_json::to_vec(&key).expect("key serializes");
    hex::encode(Sha256::digest(bytes))
}

pub struct CurveCache {
    dir: PathBuf,
}

impl CurveCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        CurveCache { dir: dir.into() }
    }

    /// `$FRACCURV_CACHE_DIR`, or `.fraccurv-cache` next to the configuration.
    pub fn for_config(config_path: &Path) -> Self {
        match std::env::var_os("FRACCURV_CACHE_DIR") {
            Some(d) => Self::new(d),
            None => {
                let parent = config_path.parent().unwrap_or(Path::new("."));
                Self::new(parent.join(".fraccurv-cache"))
            }
        }
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn load(&self, key: &str) -> Option<CurvatureCurve> {
        let text = std::fs::read(self.path(key)).ok()?;
        serde_json::from_slice(&text).ok()
    }

    pub fn store(&self, key: &str, curve: &CurvatureCurve) -> std::io::Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!("{key}.tmp{}", std::process::id()));
        std::fs::write(&tmp, serde_json::to_vec(curve).map_err(std::io::Error::other)?)?;
        std::fs::rename(tmp, self.path(key))
    }
}
