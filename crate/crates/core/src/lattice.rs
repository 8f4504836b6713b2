//! Representation counts `r_d(k) = #{n ∈ Z^d \ 0 : |n|² = k}` for `d = 2, 3`.
//!
//! Tables are built by enumerating one fundamental wedge (`a ≥ b ≥ 0` or
//! `a ≥ b ≥ c ≥ 0`) and weighting each point by the size of its orbit under
//! coordinate permutations and sign flips. Work is split over disjoint
//! ranges of `k`, so every thread owns its slice of the output.
//!
//! # Cache file layout
//!
//! All integers little-endian:
//!
//! | offset | size | field                         |
//! |--------|------|-------------------------------|
//! | 0      | 8    | magic `b"LATSHELL"`           |
//! | 8      | 4    | version `u32` (= 1)           |
//! | 12     | 4    | dimension `u32`               |
//! | 16     | 8    | `max_norm_sq` `u64`           |
//! | 24     | 4·K  | `u32` counts for `k = 1..=K`  |

use std::collections::HashMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"LATSHELL";
const VERSION: u32 = 1;
const HEADER_LEN: usize = 24;

/// Largest cutoff accepted for each dimension.
pub const MAX_NORM_SQ_2D: u64 = 1_000_000_000;
pub const MAX_NORM_SQ_3D: u64 = 100_000_000;

/// Default memory budget for one table, in bytes.
pub const DEFAULT_BUDGET_BYTES: u64 = 1 << 30;

const CHUNK: usize = 1 << 15;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShellTable {
    dimension: u32,
    max_norm_sq: u64,
    /// `counts[k] = r_d(k)`; `counts[0] = 0`.
    counts: Vec<u32>,
}

impl ShellTable {
    pub fn build(dimension: u32, max_norm_sq: u64) -> Result<Self> {
        Self::build_with_budget(dimension, max_norm_sq, DEFAULT_BUDGET_BYTES)
    }

    pub fn build_with_budget(dimension: u32, max_norm_sq: u64, budget_bytes: u64) -> Result<Self> {
        validate(dimension, max_norm_sq, budget_bytes)?;
        let mut counts = vec![0u32; max_norm_sq as usize + 1];
        counts.par_chunks_mut(CHUNK).enumerate().for_each(|(i, chunk)| {
            let lo = (i * CHUNK) as u64;
            match dimension {
                2 => fill_2d(lo, chunk),
                _ => fill_3d(lo, chunk),
            }
        });
        counts[0] = 0;
        Ok(Self { dimension, max_norm_sq, counts })
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn max_norm_sq(&self) -> u64 {
        self.max_norm_sq
    }

    /// `r_d(k)`, or `None` beyond the cutoff.
    pub fn count(&self, k: u64) -> Option<u32> {
        self.counts.get(usize::try_from(k).ok()?).copied()
    }

    /// Counts indexed by `k`, starting at `k = 0`.
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Number of nonzero lattice points with `|n|² ≤ k` (capped at the cutoff).
    pub fn cumulative(&self, k: u64) -> u64 {
        let end = k.min(self.max_norm_sq) as usize;
        self.counts[..=end].iter().map(|&c| c as u64).sum()
    }

    /// `(k, r_d(k))` for every nonempty shell in increasing order of `k`.
    pub fn nonzero_shells(&self) -> impl DoubleEndedIterator<Item = (u64, u32)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &c)| c > 0)
            .map(|(k, &c)| (k as u64, c))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let io = |e: std::io::Error| Error::Cache(format!("{}: {e}", path.display()));
        let mut out = BufWriter::new(fs::File::create(path).map_err(io)?);
        out.write_all(MAGIC).map_err(io)?;
        out.write_all(&VERSION.to_le_bytes()).map_err(io)?;
        out.write_all(&self.dimension.to_le_bytes()).map_err(io)?;
        out.write_all(&self.max_norm_sq.to_le_bytes()).map_err(io)?;
        for c in &self.counts[1..] {
            out.write_all(&c.to_le_bytes()).map_err(io)?;
        }
        out.flush().map_err(io)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
        Self::from_bytes(&bytes)
    }

    fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |what: &str| Error::Cache(format!("malformed shell table: {what}"));
        if bytes.len() < HEADER_LEN || &bytes[..8] != MAGIC {
            return Err(bad("missing magic"));
        }
        let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
        if u32_at(8) != VERSION {
            return Err(bad("unsupported version"));
        }
        let dimension = u32_at(12);
        let max_norm_sq = u64::from_le_bytes(bytes[16..24].try_into().unwrap());
        if !(dimension == 2 || dimension == 3) || max_norm_sq == 0 {
            return Err(bad("bad header"));
        }
        let body = &bytes[HEADER_LEN..];
        if body.len() as u64 != 4 * max_norm_sq {
            return Err(bad("length does not match header"));
        }
        let mut counts = Vec::with_capacity(max_norm_sq as usize + 1);
        counts.push(0);
        counts.extend(body.chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().unwrap())));
        Ok(Self { dimension, max_norm_sq, counts })
    }
}

fn validate(dimension: u32, max_norm_sq: u64, budget_bytes: u64) -> Result<()> {
    let limit = match dimension {
        2 => MAX_NORM_SQ_2D,
        3 => MAX_NORM_SQ_3D,
        _ => return Err(Error::domain(format!("shell tables exist for d = 2, 3, not {dimension}"))),
    };
    if max_norm_sq == 0 {
        return Err(Error::domain("max_norm_sq must be at least 1"));
    }
    if max_norm_sq > limit {
        return Err(Error::Capacity(format!("max_norm_sq {max_norm_sq} exceeds {limit} for d = {dimension}")));
    }
    let bytes = 4 * (max_norm_sq + 1);
    if bytes > budget_bytes {
        return Err(Error::Capacity(format!("table needs {bytes} bytes, budget is {budget_bytes}")));
    }
    Ok(())
}

/// Smallest `x ≥ 0` with `x² ≥ v`.
fn ceil_sqrt(v: u64) -> u64 {
    let r = v.isqrt();
    if r * r == v { r } else { r + 1 }
}

/// Signed, permuted copies of `(a, b)` with `a ≥ b ≥ 0`, `a > 0`.
fn orbit_2d(a: u64, b: u64) -> u32 {
    if b == 0 || a == b { 4 } else { 8 }
}

/// Signed, permuted copies of `(a, b, c)` with `a ≥ b ≥ c ≥ 0`, `a > 0`.
fn orbit_3d(a: u64, b: u64, c: u64) -> u32 {
    let perms = if a == b && b == c {
        1
    } else if a == b || b == c {
        3
    } else {
        6
    };
    let nonzero = 1 + (b > 0) as u32 + (c > 0) as u32;
    perms << nonzero
}

/// Fill `chunk[i] = r₂(lo + i)`.
fn fill_2d(lo: u64, chunk: &mut [u32]) {
    let hi = lo + chunk.len() as u64; // exclusive
    // a ≥ b ⇒ a² ≥ k/2
    for a in ceil_sqrt(lo.div_ceil(2)).max(1)..=(hi - 1).isqrt() {
        let a2 = a * a;
        let b_lo = ceil_sqrt(lo.saturating_sub(a2));
        let b_hi = (hi - 1 - a2).isqrt().min(a);
        for b in b_lo..=b_hi {
            chunk[(a2 + b * b - lo) as usize] += orbit_2d(a, b);
        }
    }
}

/// Fill `chunk[i] = r₃(lo + i)`.
fn fill_3d(lo: u64, chunk: &mut [u32]) {
    let hi = lo + chunk.len() as u64;
    for a in ceil_sqrt(lo.div_ceil(3)).max(1)..=(hi - 1).isqrt() {
        let a2 = a * a;
        let rest = hi - 1 - a2;
        for b in 0..=rest.isqrt().min(a) {
            let ab = a2 + b * b;
            let c_lo = ceil_sqrt(lo.saturating_sub(ab));
            let c_hi = (hi - 1 - ab).isqrt().min(b);
            for c in c_lo..=c_hi {
                chunk[(ab + c * c - lo) as usize] += orbit_3d(a, b, c);
            }
        }
    }
}

type Registry = Mutex<HashMap<(u32, u64), Arc<ShellTable>>>;

fn registry() -> &'static Registry {
    static REGISTRY: OnceLock<Registry> = OnceLock::new();
    REGISTRY.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Process-wide shared table for `(dimension, max_norm_sq)`, built on first use.
pub fn shared(dimension: u32, max_norm_sq: u64) -> Result<Arc<ShellTable>> {
    shared_with_cache(dimension, max_norm_sq, None)
}

/// As [`shared`], additionally reading and writing a cache file in `cache_dir`.
pub fn shared_with_cache(
    dimension: u32,
    max_norm_sq: u64,
    cache_dir: Option<&Path>,
) -> Result<Arc<ShellTable>> {
    let key = (dimension, max_norm_sq);
    if let Some(t) = registry().lock().unwrap().get(&key) {
        return Ok(Arc::clone(t));
    }
    let table = match cache_dir {
        Some(dir) => load_or_build(dir, dimension, max_norm_sq)?,
        None => ShellTable::build(dimension, max_norm_sq)?,
    };
    let table = Arc::new(table);
    registry().lock().unwrap().entry(key).or_insert_with(|| Arc::clone(&table));
    Ok(table)
}

pub fn cache_path(dir: &Path, dimension: u32, max_norm_sq: u64) -> PathBuf {
    dir.join(format!("shells-d{dimension}-k{max_norm_sq}.bin"))
}

/// Read the table from `dir` if a valid file exists, otherwise build and write it.
pub fn load_or_build(dir: &Path, dimension: u32, max_norm_sq: u64) -> Result<ShellTable> {
    let path = cache_path(dir, dimension, max_norm_sq);
    if let Ok(t) = ShellTable::load(&path) {
        if t.dimension == dimension && t.max_norm_sq == max_norm_sq {
            return Ok(t);
        }
    }
    let t = ShellTable::build(dimension, max_norm_sq)?;
    fs::create_dir_all(dir).map_err(|e| Error::Cache(format!("{}: {e}", dir.display())))?;
    t.save(&path)?;
    Ok(t)
}
