//! Append-only on-disk table of computed subgroup results.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! header (48 bytes)
//!   0  magic      b"MSUMSTOR"
//!   8  version    u32 (= 1)
//!  12  row_size   u32 (= 40)
//!  16  e_min      u64   smallest modulus stored (0 when empty)
//!  24  e_max      u64   largest modulus stored
//!  32  rows       u64
//!  40  checksum   u64   FNV-1a 64 over all row bytes in file order
//! rows (40 bytes each)
//!   e, order, min_generator, m, witness_hash   (u64 each)
//! ```
//!
//! `witness_hash` is FNV-1a 64 over the sorted witness residues, so it does
//! not depend on which generator of the subgroup was used.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use crate::engine::SubgroupKey;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 8] = b"MSUMSTOR";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 48;
pub const ROW_LEN: usize = 40;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(mut state: u64, bytes: &[u8]) -> u64 {
    for &b in bytes {
        state ^= b as u64;
        state = state.wrapping_mul(FNV_PRIME);
    }
    state
}

pub fn witness_hash(residues: &[u64]) -> u64 {
    let mut sorted = residues.to_vec();
    sorted.sort_unstable();
    sorted
        .iter()
        .fold(FNV_OFFSET, |h, x| fnv1a(h, &x.to_le_bytes()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StoreRow {
    pub key: SubgroupKey,
    pub m: u64,
    pub witness_hash: u64,
}

impl StoreRow {
    fn encode(&self) -> [u8; ROW_LEN] {
        let mut out = [0u8; ROW_LEN];
        let fields = [
            self.key.modulus,
            self.key.order,
            self.key.min_generator,
            self.m,
            self.witness_hash,
        ];
        for (chunk, v) in out.chunks_exact_mut(8).zip(fields) {
            chunk.copy_from_slice(&v.to_le_bytes());
        }
        out
    }

    fn decode(bytes: &[u8]) -> Self {
        let f = |i: usize| u64::from_le_bytes(bytes[8 * i..8 * i + 8].try_into().unwrap());
        Self {
            key: SubgroupKey {
                modulus: f(0),
                order: f(1),
                min_generator: f(2),
            },
            m: f(3),
            witness_hash: f(4),
        }
    }
}

#[derive(Debug)]
pub struct ResultStore {
    path: PathBuf,
    index: HashMap<SubgroupKey, StoreRow>,
    e_min: u64,
    e_max: u64,
    rows: u64,
    checksum: u64,
}

fn io(e: std::io::Error) -> Error {
    Error::Store(e.to_string())
}

impl ResultStore {
    /// Opens an existing store or creates an empty one.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        if !path.exists() {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(io)?;
            }
            let store = Self {
                path,
                index: HashMap::new(),
                e_min: 0,
                e_max: 0,
                rows: 0,
                checksum: FNV_OFFSET,
            };
            let mut f = File::create(&store.path).map_err(io)?;
            f.write_all(&store.header()).map_err(io)?;
            return Ok(store);
        }

        let mut bytes = Vec::new();
        File::open(&path)
            .and_then(|mut f| f.read_to_end(&mut bytes))
            .map_err(io)?;
        if bytes.len() < HEADER_LEN || &bytes[..8] != MAGIC {
            return Err(Error::Store(format!(
                "{} is not a result store",
                path.display()
            )));
        }
        let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
        let u64_at = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
        if u32_at(8) != VERSION || u32_at(12) as usize != ROW_LEN {
            return Err(Error::Store("unsupported store version".into()));
        }
        let rows = u64_at(32);
        let body = &bytes[HEADER_LEN..];
        if body.len() as u64 != rows * ROW_LEN as u64 {
            return Err(Error::Store(format!(
                "store holds {} bytes of rows, header says {rows} rows",
                body.len()
            )));
        }
        let checksum = fnv1a(FNV_OFFSET, body);
        if checksum != u64_at(40) {
            return Err(Error::Store("checksum mismatch".into()));
        }
        let index = body
            .chunks_exact(ROW_LEN)
            .map(StoreRow::decode)
            .map(|r| (r.key, r))
            .collect();
        Ok(Self {
            path,
            index,
            e_min: u64_at(16),
            e_max: u64_at(24),
            rows,
            checksum,
        })
    }

    fn header(&self) -> [u8; HEADER_LEN] {
        let mut h = [0u8; HEADER_LEN];
        h[..8].copy_from_slice(MAGIC);
        h[8..12].copy_from_slice(&VERSION.to_le_bytes());
        h[12..16].copy_from_slice(&(ROW_LEN as u32).to_le_bytes());
        h[16..24].copy_from_slice(&self.e_min.to_le_bytes());
        h[24..32].copy_from_slice(&self.e_max.to_le_bytes());
        h[32..40].copy_from_slice(&self.rows.to_le_bytes());
        h[40..48].copy_from_slice(&self.checksum.to_le_bytes());
        h
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn e_range(&self) -> Option<(u64, u64)> {
        (self.rows > 0).then_some((self.e_min, self.e_max))
    }

    pub fn get(&self, key: &SubgroupKey) -> Option<&StoreRow> {
        self.index.get(key)
    }

    /// Appends rows whose key is not stored yet; returns how many were new.
    pub fn append(&mut self, rows: &[StoreRow]) -> Result<usize> {
        let mut fresh = Vec::new();
        for r in rows {
            if let std::collections::hash_map::Entry::Vacant(e) = self.index.entry(r.key) {
                e.insert(*r);
                fresh.push(*r);
            }
        }
        if fresh.is_empty() {
            return Ok(0);
        }
        let mut buf = Vec::with_capacity(fresh.len() * ROW_LEN);
        for r in &fresh {
            buf.extend_from_slice(&r.encode());
            let e = r.key.modulus;
            self.e_min = if self.rows == 0 { e } else { self.e_min.min(e) };
            self.e_max = self.e_max.max(e);
            self.rows += 1;
        }
        self.checksum = fnv1a(self.checksum, &buf);
        let mut f = OpenOptions::new()
            .write(true)
            .open(&self.path)
            .map_err(io)?;
        f.seek(SeekFrom::End(0)).map_err(io)?;
        f.write_all(&buf).map_err(io)?;
        f.seek(SeekFrom::Start(0)).map_err(io)?;
        f.write_all(&self.header()).map_err(io)?;
        Ok(fresh.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(e: u64, g: u64, m: u64) -> StoreRow {
        StoreRow {
            key: SubgroupKey {
                modulus: e,
                order: 2,
                min_generator: g,
            },
            m,
            witness_hash: witness_hash(&[g, 1]),
        }
    }

    #[test]
    fn append_and_reload() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub/results.msum");
        let mut s = ResultStore::open(&path).unwrap();
        assert!(s.is_empty());
        assert_eq!(s.append(&[row(9, 8, 2), row(7, 6, 2)]).unwrap(), 2);
        assert_eq!(s.append(&[row(9, 8, 2)]).unwrap(), 0);
        let t = ResultStore::open(&path).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.e_range(), Some((7, 9)));
        assert_eq!(t.get(&row(7, 6, 2).key).unwrap().m, 2);
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(bytes.len(), HEADER_LEN + 2 * ROW_LEN);
    }

    #[test]
    fn corruption_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.msum");
        ResultStore::open(&path)
            .unwrap()
            .append(&[row(5, 4, 2)])
            .unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        let last = bytes.len() - 1;
        bytes[last] ^= 1;
        std::fs::write(&path, &bytes).unwrap();
        assert!(matches!(ResultStore::open(&path), Err(Error::Store(_))));
    }

    #[test]
    fn hash_ignores_order() {
        assert_eq!(witness_hash(&[3, 1, 2]), witness_hash(&[1, 2, 3]));
        assert_ne!(witness_hash(&[1, 2]), witness_hash(&[1, 3]));
    }
}
