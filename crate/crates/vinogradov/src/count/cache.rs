//! Disk serialization of representation tables.
//!
//! Layout (all integers little-endian u64):
//!
//! ```text
//! magic "VINTAB01" | s | X | entry count | (key, multiplicity)* sorted by key
//! ```
//!
//! Keys are written in strictly ascending order so a table serializes to
//! identical bytes on every run. The reader validates the header, the
//! ordering, the key bounds, and the total mass `sum(mult) = X^s` before
//! trusting a file; any violation is reported as a cache error so callers
//! can fall back to rebuilding.

use super::RepresentationTable;
use crate::domain::MomentEncoding;
use crate::error::{Error, Result};
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

/// File magic identifying version 1 of the table format.
pub const CACHE_MAGIC: &[u8; 8] = b"VINTAB01";

/// Serialize a standard-range (`lo = 1`) table to `path`.
pub fn write_table(path: &Path, table: &RepresentationTable) -> Result<()> {
    if table.lo != 1 {
        return Err(Error::Config(
            "only standard-range tables (lo = 1) are cached".into(),
        ));
    }
    let mut entries: Vec<(u64, u64)> = table.iter().collect();
    entries.sort_unstable_by_key(|&(k, _)| k);
    let mut buf = Vec::with_capacity(32 + entries.len() * 16);
    buf.extend_from_slice(CACHE_MAGIC);
    buf.extend_from_slice(&(table.s as u64).to_le_bytes());
    buf.extend_from_slice(&table.hi.to_le_bytes());
    buf.extend_from_slice(&(entries.len() as u64).to_le_bytes());
    for (key, mult) in entries {
        buf.extend_from_slice(&key.to_le_bytes());
        buf.extend_from_slice(&mult.to_le_bytes());
    }
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut file = fs::File::create(path)?;
    file.write_all(&buf)?;
    Ok(())
}

fn read_u64(bytes: &[u8], offset: usize) -> u64 {
    u64::from_le_bytes(bytes[offset..offset + 8].try_into().unwrap())
}

/// Deserialize and validate a table, checking it matches the expected
/// `(s, X)`.
pub fn read_table(path: &Path, s: u32, x: u64) -> Result<RepresentationTable> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.len() < 32 {
        return Err(Error::Cache(format!("{}: truncated header", path.display())));
    }
    if &bytes[0..8] != CACHE_MAGIC {
        return Err(Error::Cache(format!("{}: bad magic", path.display())));
    }
    let file_s = read_u64(&bytes, 8);
    let file_x = read_u64(&bytes, 16);
    let count = read_u64(&bytes, 24);
    if file_s != s as u64 || file_x != x {
        return Err(Error::Cache(format!(
            "{}: header is for (s={file_s}, X={file_x}), expected (s={s}, X={x})",
            path.display()
        )));
    }
    let expected_len = 32usize
        .checked_add((count as usize).checked_mul(16).ok_or_else(|| {
            Error::Cache(format!("{}: entry count overflows", path.display()))
        })?)
        .ok_or_else(|| Error::Cache(format!("{}: entry count overflows", path.display())))?;
    if bytes.len() != expected_len {
        return Err(Error::Cache(format!(
            "{}: expected {expected_len} bytes for {count} entries, found {}",
            path.display(),
            bytes.len()
        )));
    }

    let encoding = MomentEncoding::new(s, x)?;
    let (r1, r2, r3) = encoding.radices();
    let capacity = r1 as u128 * r2 as u128 * r3 as u128;
    let mut entries = Vec::with_capacity(count as usize);
    let mut total: u128 = 0;
    let mut prev_key: Option<u64> = None;
    for i in 0..count as usize {
        let key = read_u64(&bytes, 32 + 16 * i);
        let mult = read_u64(&bytes, 40 + 16 * i);
        if let Some(p) = prev_key {
            if key <= p {
                return Err(Error::Cache(format!(
                    "{}: keys not strictly ascending at entry {i}",
                    path.display()
                )));
            }
        }
        if (key as u128) >= capacity {
            return Err(Error::Cache(format!(
                "{}: key {key} outside the (s={s}, X={x}) key space",
                path.display()
            )));
        }
        if mult == 0 {
            return Err(Error::Cache(format!(
                "{}: zero multiplicity at entry {i}",
                path.display()
            )));
        }
        prev_key = Some(key);
        total += mult as u128;
        entries.push((key, mult));
    }
    if total != (x as u128).pow(s) {
        return Err(Error::Cache(format!(
            "{}: total mass {total} != X^s = {}",
            path.display(),
            (x as u128).pow(s)
        )));
    }
    RepresentationTable::from_entries(s, x, &entries, total)
}
