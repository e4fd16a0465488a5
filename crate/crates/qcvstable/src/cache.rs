//! Table files and the on-disk table cache.
//!
//! A table file is CSV with header `alpha,N`, one row per grid point in
//! increasing α, preceded by one `#` line of `key=value` metadata:
//!
//! ```text
//! #estimator=qcv spec=n1 a=0.015 b=0.25 d=0.25 alpha_lo=0.6 alpha_hi=2 step=0.0025 cfg_digest=… direction=decreasing
//! alpha,N
//! 6.0000000000000000e-1,…
//! ```
//!
//! Values carry 17 significant digits so they read back bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use qcvstable_core::benchmarks::{mcculloch_nu, NuTable};
use qcvstable_core::qcv::ratio_value;
use qcvstable_core::table::{alpha_grid, MonotoneTable};
use qcvstable_core::{IntegrationConfig, RatioSpec, RatioTable};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "QCVSTABLE_CACHE_DIR";

/// Short hex digest of the integration settings.
pub fn cfg_digest(cfg: &IntegrationConfig) -> String {
    let text = format!(
        "step={:e};envelope_floor={:e};tail_switch_p={:e}",
        cfg.step, cfg.envelope_floor, cfg.tail_switch_p
    );
    hex::encode(&Sha256::digest(text.as_bytes())[..8])
}

/// Hex SHA-256 of a byte string.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq)]
pub enum TableKind {
    Ratio(RatioSpec),
    Nu,
}

/// Everything that determines the content of a table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRequest {
    pub kind: TableKind,
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    pub step: f64,
    pub cfg: IntegrationConfig,
}

impl TableRequest {
    pub fn ratio(spec: RatioSpec, alpha_lo: f64, alpha_hi: f64, step: f64, cfg: IntegrationConfig) -> Self {
        Self {
            kind: TableKind::Ratio(spec),
            alpha_lo,
            alpha_hi,
            step,
            cfg,
        }
    }

    pub fn nu(alpha_lo: f64, alpha_hi: f64, step: f64, cfg: IntegrationConfig) -> Self {
        Self {
            kind: TableKind::Nu,
            alpha_lo,
            alpha_hi,
            step,
            cfg,
        }
    }

    /// Metadata line without the leading `#` and the direction field.
    fn key(&self) -> String {
        let mut s = String::new();
        match &self.kind {
            TableKind::Ratio(spec) => {
                let name: String = spec
                    .name()
                    .chars()
                    .map(|c| if c.is_whitespace() || c == '=' { '_' } else { c })
                    .collect();
                let _ = write!(
                    s,
                    "estimator=qcv spec={name} a={} b={} d={} ",
                    spec.tail().a(),
                    spec.tail().b(),
                    spec.central_d()
                );
            }
            TableKind::Nu => s.push_str("estimator=mcculloch "),
        }
        let _ = write!(
            s,
            "alpha_lo={} alpha_hi={} step={} cfg_digest={}",
            self.alpha_lo,
            self.alpha_hi,
            self.step,
            cfg_digest(&self.cfg)
        );
        s
    }

    /// Cache file name: a readable prefix plus a digest of the key.
    pub fn file_name(&self) -> String {
        let prefix = match &self.kind {
            TableKind::Ratio(spec) => format!("qcv-{}", spec.name()),
            TableKind::Nu => "mcculloch".to_owned(),
        };
        let prefix: String = prefix
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
            .collect();
        format!("{prefix}-{}.csv", &sha256_hex(self.key().as_bytes())[..16])
    }

    /// Evaluates the table on its grid, grid points in parallel.
    pub fn compute(&self) -> Result<MonotoneTable> {
        self.cfg.validate()?;
        let alphas = alpha_grid(self.alpha_lo, self.alpha_hi, self.step)?;
        let values = alphas
            .par_iter()
            .map(|&a| match &self.kind {
                TableKind::Ratio(spec) => ratio_value(a, spec, &self.cfg),
                TableKind::Nu => mcculloch_nu(a, &self.cfg),
            })
            .collect::<qcvstable_core::Result<Vec<_>>>()?;
        Ok(MonotoneTable::new(alphas, values)?)
    }
}

/// Serializes a table with its metadata line.
pub fn render_table(req: &TableRequest, table: &MonotoneTable) -> String {
    let mut out = format!("#{} direction={}\nalpha,N\n", req.key(), table.direction().name());
    for (a, v) in table.alphas().iter().zip(table.values()) {
        let _ = writeln!(out, "{a:.16e},{v:.16e}");
    }
    out
}

/// Parsed table file.
#[derive(Debug, Clone, PartialEq)]
pub struct TableFile {
    /// Metadata pairs in file order.
    pub metadata: Vec<(String, String)>,
    pub alphas: Vec<f64>,
    pub values: Vec<f64>,
}

impl TableFile {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn parse(path: &Path, text: &str) -> Result<Self> {
        let bad = |line: usize, message: &str| Error::Parse {
            path: path.to_owned(),
            line,
            message: message.to_owned(),
        };
        let mut lines = text.lines();
        let meta = lines
            .next()
            .and_then(|l| l.strip_prefix('#'))
            .ok_or_else(|| bad(1, "missing `#` metadata line"))?;
        let metadata = meta
            .split_whitespace()
            .map(|kv| {
                kv.split_once('=')
                    .map(|(k, v)| (k.to_owned(), v.to_owned()))
                    .ok_or_else(|| bad(1, "metadata entries must be key=value"))
            })
            .collect::<Result<Vec<_>>>()?;
        if lines.next().map(str::trim) != Some("alpha,N") {
            return Err(bad(2, "expected header `alpha,N`"));
        }
        let mut alphas = Vec::new();
        let mut values = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (a, v) = line
                .split_once(',')
                .ok_or_else(|| bad(i + 3, "expected two columns"))?;
            let parse = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(i + 3, "not a number"));
            alphas.push(parse(a)?);
            values.push(parse(v)?);
        }
        Ok(Self {
            metadata,
            alphas,
            values,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(path, &text)
    }

    fn matches(&self, req: &TableRequest) -> bool {
        let expected = req.key();
        let pairs: Vec<(&str, &str)> = expected
            .split_whitespace()
            .filter_map(|kv| kv.split_once('='))
            .collect();
        pairs.iter().all(|(k, v)| self.get(k) == Some(v))
    }
}

/// Writes `contents` through a temporary sibling so readers never see a
/// partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// A loaded or freshly built table with the digest of its file bytes.
#[derive(Debug, Clone)]
pub struct CachedTable {
    pub table: MonotoneTable,
    pub path: PathBuf,
    pub digest: String,
    pub built: bool,
}

/// Directory of table files keyed by [`TableRequest`].
#[derive(Debug, Clone)]
pub struct TableCache {
    dir: PathBuf,
}

impl TableCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// `$QCVSTABLE_CACHE_DIR`, else `qcvstable` under the system temp dir.
    pub fn from_env() -> Self {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(d) if !d.is_empty() => Self::new(d),
            _ => Self::new(std::env::temp_dir().join("qcvstable")),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, req: &TableRequest) -> PathBuf {
        self.dir.join(req.file_name())
    }

    /// Reads the cached file for `req`, or builds and stores it. A cached
    /// file whose metadata disagrees with `req` or that fails to parse is
    /// rebuilt.
    pub fn load_or_build(&self, req: &TableRequest) -> Result<CachedTable> {
        let path = self.path_for(req);
        if let Ok(bytes) = fs::read(&path) {
            let text = String::from_utf8_lossy(&bytes);
            if let Ok(file) = TableFile::parse(&path, &text) {
                if file.matches(req) {
                    if let Ok(table) = MonotoneTable::new(file.alphas, file.values) {
                        return Ok(CachedTable {
                            table,
                            path,
                            digest: sha256_hex(&bytes),
                            built: false,
                        });
                    }
                }
            }
        }
        let table = req.compute()?;
        let text = render_table(req, &table);
        write_atomic(&path, &text)?;
        Ok(CachedTable {
            table,
            path,
            digest: sha256_hex(text.as_bytes()),
            built: true,
        })
    }

    pub fn ratio_table(&self, req: &TableRequest) -> Result<(RatioTable, CachedTable)> {
        let TableKind::Ratio(spec) = &req.kind else {
            return Err(Error::Usage("expected a ratio table request".into()));
        };
        let cached = self.load_or_build(req)?;
        let table = RatioTable::from_values(
            spec.clone(),
            cached.table.alphas().to_vec(),
            cached.table.values().to_vec(),
        )?;
        Ok((table, cached))
    }

    pub fn nu_table(&self, req: &TableRequest) -> Result<(NuTable, CachedTable)> {
        let cached = self.load_or_build(req)?;
        let table = NuTable::from_values(cached.table.alphas().to_vec(), cached.table.values().to_vec())?;
        Ok((table, cached))
    }
}
