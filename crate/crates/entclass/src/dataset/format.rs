//! The `.entd` binary dataset format and CSV export.
//!
//! Layout (little-endian):
//!
//! ```text
//! magic "ENTD" (4 bytes)
//! format version       u16
//! metadata JSON length u32
//! metadata JSON        (UTF-8)
//! n_samples            u64
//! M                    u32
//! payload              n_samples x (M x f32 features, u16 label)
//! CRC32 of all prior bytes  u32
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::dataset::{Dataset, DatasetMeta, Sample};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"ENTD";
pub const FORMAT_VERSION: u16 = 1;

/// Expected file size for a given metadata length, sample count, and M.
pub fn expected_file_size(meta_json_len: usize, n_samples: usize, m: usize) -> usize {
    4 + 2 + 4 + meta_json_len + 8 + 4 + n_samples * (m * 4 + 2) + 4
}

/// Serialize to bytes.
pub fn to_bytes(dataset: &Dataset) -> Result<Vec<u8>> {
    let meta_json = serde_json::to_vec(&dataset.meta)?;
    let m = dataset.feature_len();
    let mut buf =
        Vec::with_capacity(expected_file_size(meta_json.len(), dataset.len(), m));
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    buf.extend_from_slice(&(meta_json.len() as u32).to_le_bytes());
    buf.extend_from_slice(&meta_json);
    buf.extend_from_slice(&(dataset.len() as u64).to_le_bytes());
    buf.extend_from_slice(&(m as u32).to_le_bytes());
    for sample in &dataset.samples {
        if sample.features.len() != m {
            return Err(Error::ShapeMismatch(format!(
                "sample feature length {} != M {m}",
                sample.features.len()
            )));
        }
        for &f in &sample.features {
            buf.extend_from_slice(&f.to_le_bytes());
        }
        buf.extend_from_slice(&sample.label.to_le_bytes());
    }
    let crc = crc32fast::hash(&buf);
    buf.extend_from_slice(&crc.to_le_bytes());
    Ok(buf)
}

/// Parse from bytes, verifying magic, version, and checksum.
pub fn from_bytes(bytes: &[u8]) -> Result<Dataset> {
    let mut cursor = ByteCursor::new(bytes);
    let magic = cursor.take(4)?;
    if magic != MAGIC {
        return Err(Error::Format(format!(
            "bad magic {:02x?}, expected {MAGIC:02x?}",
            magic
        )));
    }
    let version = u16::from_le_bytes(cursor.take(2)?.try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(Error::VersionMismatch {
            found: version,
            supported: FORMAT_VERSION,
        });
    }
    let meta_len = u32::from_le_bytes(cursor.take(4)?.try_into().unwrap()) as usize;
    let meta_bytes = cursor.take(meta_len)?;
    let meta: DatasetMeta = serde_json::from_slice(meta_bytes)?;
    let n_samples = u64::from_le_bytes(cursor.take(8)?.try_into().unwrap()) as usize;
    let m = u32::from_le_bytes(cursor.take(4)?.try_into().unwrap()) as usize;

    let mut samples = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let mut features = Vec::with_capacity(m);
        let feat_bytes = cursor.take(m * 4)?;
        for chunk in feat_bytes.chunks_exact(4) {
            features.push(f32::from_le_bytes(chunk.try_into().unwrap()));
        }
        let label = u16::from_le_bytes(cursor.take(2)?.try_into().unwrap());
        samples.push(Sample { features, label });
    }

    let payload_end = cursor.pos;
    let stored = u32::from_le_bytes(cursor.take(4)?.try_into().unwrap());
    let computed = crc32fast::hash(&bytes[..payload_end]);
    if stored != computed {
        return Err(Error::ChecksumMismatch { stored, computed });
    }
    if cursor.pos != bytes.len() {
        return Err(Error::Format(format!(
            "{} trailing bytes after checksum",
            bytes.len() - cursor.pos
        )));
    }
    Ok(Dataset { samples, meta })
}

/// Write a dataset file.
pub fn write(dataset: &Dataset, path: &Path) -> Result<()> {
    let bytes = to_bytes(dataset)?;
    let mut file = BufWriter::new(File::create(path)?);
    file.write_all(&bytes)?;
    file.flush()?;
    Ok(())
}

/// Read a dataset file.
pub fn read(path: &Path) -> Result<Dataset> {
    let mut bytes = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
    from_bytes(&bytes)
}

/// CSV export: header `f0,...,f{M-1},label`, one row per sample.
pub fn write_csv(dataset: &Dataset, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    let m = dataset.feature_len();
    let header: Vec<String> = (0..m).map(|i| format!("f{i}")).collect();
    writeln!(out, "{},label", header.join(","))?;
    for sample in &dataset.samples {
        let row: Vec<String> = sample.features.iter().map(|f| f.to_string()).collect();
        writeln!(out, "{},{}", row.join(","), sample.label)?;
    }
    out.flush()?;
    Ok(())
}

struct ByteCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> ByteCursor<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.bytes.len() {
            return Err(Error::Truncated(format!(
                "needed {n} bytes at offset {}, file has {}",
                self.pos,
                self.bytes.len()
            )));
        }
        let slice = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }
}
