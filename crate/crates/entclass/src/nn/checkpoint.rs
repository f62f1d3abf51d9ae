//! The `ENTP` parameter checkpoint format.
//!
//! Same envelope style as the dataset format (little-endian):
//!
//! ```text
//! magic "ENTP" (4 bytes)
//! format version        u16
//! config JSON length    u32
//! config JSON           (UTF-8)
//! tensor count          u32
//! per tensor: name length u16, name, rank u8, dims u32 each, f32 data
//! CRC32 of all prior bytes  u32
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::numeric::Tensor;

pub const MAGIC: &[u8; 4] = b"ENTP";
pub const FORMAT_VERSION: u16 = 1;

/// A named tensor as stored in a checkpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedTensor {
    pub name: String,
    pub tensor: Tensor,
}

pub fn to_bytes(config: &serde_json::Value, tensors: &[(String, &Tensor)]) -> Result<Vec<u8>> {
    let config_json = serde_json::to_vec(config)?;
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    buf.extend_from_slice(&(config_json.len() as u32).to_le_bytes());
    buf.extend_from_slice(&config_json);
    buf.extend_from_slice(&(tensors.len() as u32).to_le_bytes());
    for (name, tensor) in tensors {
        let name_bytes = name.as_bytes();
        buf.extend_from_slice(&(name_bytes.len() as u16).to_le_bytes());
        buf.extend_from_slice(name_bytes);
        buf.push(tensor.shape().len() as u8);
        for &d in tensor.shape() {
            buf.extend_from_slice(&(d as u32).to_le_bytes());
        }
        for &v in tensor.data() {
            buf.extend_from_slice(&(v as f32).to_le_bytes());
        }
    }
    let crc = crc32fast::hash(&buf);
    buf.extend_from_slice(&crc.to_le_bytes());
    Ok(buf)
}

pub fn from_bytes(bytes: &[u8]) -> Result<(serde_json::Value, Vec<NamedTensor>)> {
    let mut pos = 0usize;
    let take = |pos: &mut usize, n: usize| -> Result<&[u8]> {
        if *pos + n > bytes.len() {
            return Err(Error::Truncated(format!(
                "needed {n} bytes at offset {pos}, file has {}",
                bytes.len()
            )));
        }
        let s = &bytes[*pos..*pos + n];
        *pos += n;
        Ok(s)
    };

    if take(&mut pos, 4)? != MAGIC {
        return Err(Error::Format("bad checkpoint magic".into()));
    }
    let version = u16::from_le_bytes(take(&mut pos, 2)?.try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(Error::VersionMismatch {
            found: version,
            supported: FORMAT_VERSION,
        });
    }
    let config_len = u32::from_le_bytes(take(&mut pos, 4)?.try_into().unwrap()) as usize;
    let config: serde_json::Value = serde_json::from_slice(take(&mut pos, config_len)?)?;
    let n_tensors = u32::from_le_bytes(take(&mut pos, 4)?.try_into().unwrap()) as usize;

    let mut tensors = Vec::with_capacity(n_tensors);
    for _ in 0..n_tensors {
        let name_len = u16::from_le_bytes(take(&mut pos, 2)?.try_into().unwrap()) as usize;
        let name = String::from_utf8(take(&mut pos, name_len)?.to_vec())
            .map_err(|e| Error::Format(format!("tensor name not UTF-8: {e}")))?;
        let rank = take(&mut pos, 1)?[0] as usize;
        let mut shape = Vec::with_capacity(rank);
        for _ in 0..rank {
            shape.push(u32::from_le_bytes(take(&mut pos, 4)?.try_into().unwrap()) as usize);
        }
        let numel: usize = shape.iter().product();
        let raw = take(&mut pos, numel * 4)?;
        let data: Vec<f64> = raw
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64)
            .collect();
        tensors.push(NamedTensor {
            name,
            tensor: Tensor::new(shape, data)?,
        });
    }

    let payload_end = pos;
    let stored = u32::from_le_bytes(take(&mut pos, 4)?.try_into().unwrap());
    let computed = crc32fast::hash(&bytes[..payload_end]);
    if stored != computed {
        return Err(Error::ChecksumMismatch { stored, computed });
    }
    Ok((config, tensors))
}

pub fn write(path: &Path, config: &serde_json::Value, tensors: &[(String, &Tensor)]) -> Result<()> {
    let bytes = to_bytes(config, tensors)?;
    let mut file = BufWriter::new(File::create(path)?);
    file.write_all(&bytes)?;
    file.flush()?;
    Ok(())
}

pub fn read(path: &Path) -> Result<(serde_json::Value, Vec<NamedTensor>)> {
    let mut bytes = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
    from_bytes(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample_tensors() -> Vec<(String, Tensor)> {
        vec![
            (
                "layer0.w".to_string(),
                Tensor::new(vec![2, 3], vec![0.5, -1.25, 2.0, 0.0, 3.5, -0.75]).unwrap(),
            ),
            ("layer0.b".to_string(), Tensor::new(vec![2], vec![1.0, -2.0]).unwrap()),
        ]
    }

    #[test]
    fn roundtrip_preserves_f32_values() {
        let tensors = sample_tensors();
        let refs: Vec<(String, &Tensor)> =
            tensors.iter().map(|(n, t)| (n.clone(), t)).collect();
        let config = json!({"arch": "test", "hidden": 4});
        let bytes = to_bytes(&config, &refs).unwrap();
        let (config_back, tensors_back) = from_bytes(&bytes).unwrap();
        assert_eq!(config, config_back);
        assert_eq!(tensors_back.len(), 2);
        for ((name, orig), back) in tensors.iter().zip(&tensors_back) {
            assert_eq!(name, &back.name);
            assert_eq!(orig.shape(), back.tensor.shape());
            // Values here are exactly representable in f32.
            assert_eq!(orig.data(), back.tensor.data());
        }
    }

    #[test]
    fn corruption_is_detected() {
        let tensors = sample_tensors();
        let refs: Vec<(String, &Tensor)> =
            tensors.iter().map(|(n, t)| (n.clone(), t)).collect();
        let mut bytes = to_bytes(&json!({}), &refs).unwrap();
        let mid = bytes.len() / 2;
        bytes[mid] ^= 0x01;
        assert!(matches!(
            from_bytes(&bytes),
            Err(Error::ChecksumMismatch { .. }) | Err(Error::Format(_))
        ));
    }

    #[test]
    fn truncation_is_detected() {
        let tensors = sample_tensors();
        let refs: Vec<(String, &Tensor)> =
            tensors.iter().map(|(n, t)| (n.clone(), t)).collect();
        let bytes = to_bytes(&json!({}), &refs).unwrap();
        assert!(matches!(
            from_bytes(&bytes[..bytes.len() - 8]),
            Err(Error::Truncated(_)) | Err(Error::ChecksumMismatch { .. })
        ));
    }
}
