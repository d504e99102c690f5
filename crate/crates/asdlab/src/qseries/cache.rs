use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::QSeries;
use crate::error::{Error, Result};
use crate::exactnum::{format_rational, parse_rational, Rational};

/// On-disk form of a rational series.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct CacheFile {
    pub form_id: String,
    pub mu: u32,
    pub lo: i64,
    pub trunc: i64,
    pub coeffs: Vec<String>,
}

impl CacheFile {
    pub fn from_series(form_id: &str, f: &QSeries<Rational>) -> Self {
        CacheFile {
            form_id: form_id.to_string(),
            mu: f.mu(),
            lo: f.lo(),
            trunc: f.trunc(),
            coeffs: f.coeffs().iter().map(format_rational).collect(),
        }
    }

    pub fn to_series(&self) -> Result<QSeries<Rational>> {
        let coeffs = self.coeffs.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        Ok(QSeries::from_coeffs(&Rational::default(), self.mu, self.lo, coeffs, self.trunc))
    }
}

fn cache_path(dir: &Path, form_id: &str) -> PathBuf {
    let safe: String = form_id.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    // FNV-1a keeps distinct ids apart after sanitising.
    let mut h: u64 = 0xcbf29ce484222325;
    for b in form_id.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    dir.join(format!("{safe}-{h:016x}.json"))
}

/// A cached expansion valid to at least `min_trunc`, if present.
pub fn read_cache(dir: &Path, form_id: &str, min_trunc: i64) -> Option<QSeries<Rational>> {
    let text = fs::read_to_string(cache_path(dir, form_id)).ok()?;
    let file: CacheFile = serde_json::from_str(&text).ok()?;
    if file.form_id != form_id || file.trunc < min_trunc {
        return None;
    }
    file.to_series().ok()
}

pub fn write_cache(dir: &Path, form_id: &str, f: &QSeries<Rational>) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(e.to_string()))?;
    let json = serde_json::to_string(&CacheFile::from_series(form_id, f)).map_err(|e| Error::Io(e.to_string()))?;
    fs::write(cache_path(dir, form_id), json).map_err(|e| Error::Io(e.to_string()))
}
