//! Binary interchange for dense feature maps and model parameters.
//!
//! Tensor record (`.fgt`), all integers little-endian:
//!
//! ```text
//! "FGT1" | version u8 = 1 | dtype u8 = 1 (f32) | rank u8 | rank × u32 dims | f32 payload
//! ```
//!
//! Bundle (`.fgb`):
//!
//! ```text
//! "FGB1" | version u8 = 1 | count u32 | count × (name_len u16 | name utf-8 | tensor record)
//! ```

use std::collections::HashSet;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use thiserror::Error;

pub const TENSOR_MAGIC: [u8; 4] = *b"FGT1";
pub const BUNDLE_MAGIC: [u8; 4] = *b"FGB1";
pub const FORMAT_VERSION: u8 = 1;
pub const DTYPE_F32: u8 = 1;
pub const MAX_RANK: usize = 8;
pub const MAX_ELEMENTS: u64 = 1 << 31;

/// Payload is read in chunks of this many elements so a lying header cannot
/// force a large allocation before the data actually arrives.
const READ_CHUNK: usize = 1 << 16;

#[derive(Debug, Error)]
pub enum TensorError {
    #[error("format error: {0}")]
    Format(String),
    #[error("unsupported {what} {value}")]
    Unsupported { what: &'static str, value: u8 },
    #[error("truncated input: {0}")]
    Truncated(String),
    #[error("shape {0:?} exceeds the element limit")]
    Bounds(Vec<u64>),
    #[error("invalid tensor: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Row-major `f32` tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    shape: Vec<usize>,
    data: Vec<f32>,
}

impl Tensor {
    pub fn new(shape: Vec<usize>, data: Vec<f32>) -> Result<Self, TensorError> {
        if shape.is_empty() || shape.len() > MAX_RANK {
            return Err(TensorError::Invalid(format!("rank {} outside 1..=8", shape.len())));
        }
        let count = element_count(&shape.iter().map(|&d| d as u64).collect::<Vec<_>>())?;
        if count != data.len() as u64 {
            return Err(TensorError::Invalid(format!(
                "shape {shape:?} holds {count} elements, payload has {}",
                data.len()
            )));
        }
        Ok(Tensor { shape, data })
    }

    pub fn zeros(shape: Vec<usize>) -> Result<Self, TensorError> {
        let n = shape.iter().product();
        Tensor::new(shape, vec![0.0; n])
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f32> {
        self.data
    }

    /// Bitwise equality (distinguishes `-0.0` and NaN payloads).
    pub fn bit_eq(&self, other: &Tensor) -> bool {
        self.shape == other.shape
            && self.data.len() == other.data.len()
            && self.data.iter().zip(&other.data).all(|(a, b)| a.to_bits() == b.to_bits())
    }

    pub fn encoded_len(&self) -> usize {
        4 + 3 + 4 * self.shape.len() + 4 * self.data.len()
    }
}

fn element_count(dims: &[u64]) -> Result<u64, TensorError> {
    dims.iter()
        .try_fold(1u64, |acc, &d| acc.checked_mul(d).filter(|&n| n <= MAX_ELEMENTS))
        .ok_or_else(|| TensorError::Bounds(dims.to_vec()))
}

/// Writes one tensor record and returns the number of bytes written.
pub fn write_tensor<W: Write>(tensor: &Tensor, sink: &mut W) -> Result<usize, TensorError> {
    let mut header = Vec::with_capacity(7 + 4 * tensor.shape.len());
    header.extend_from_slice(&TENSOR_MAGIC);
    header.extend_from_slice(&[FORMAT_VERSION, DTYPE_F32, tensor.shape.len() as u8]);
    for &d in &tensor.shape {
        let d = u32::try_from(d).map_err(|_| TensorError::Bounds(vec![d as u64]))?;
        header.extend_from_slice(&d.to_le_bytes());
    }
    sink.write_all(&header)?;
    let mut buf = Vec::with_capacity(4 * READ_CHUNK.min(tensor.data.len()));
    for chunk in tensor.data.chunks(READ_CHUNK) {
        buf.clear();
        for v in chunk {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        sink.write_all(&buf)?;
    }
    Ok(tensor.encoded_len())
}

/// Reads one tensor record.
pub fn read_tensor<R: Read>(source: &mut R) -> Result<Tensor, TensorError> {
    let mut magic = [0u8; 4];
    read_exact(source, &mut magic, "tensor magic")?;
    if magic != TENSOR_MAGIC {
        return Err(TensorError::Format(format!("bad tensor magic {magic:02x?}")));
    }
    let mut head = [0u8; 3];
    read_exact(source, &mut head, "tensor header")?;
    let [version, dtype, rank] = head;
    if version != FORMAT_VERSION {
        return Err(TensorError::Unsupported {
            what: "version",
            value: version,
        });
    }
    if dtype != DTYPE_F32 {
        return Err(TensorError::Unsupported {
            what: "dtype",
            value: dtype,
        });
    }
    let rank = usize::from(rank);
    if rank == 0 || rank > MAX_RANK {
        return Err(TensorError::Format(format!("rank {rank} outside 1..=8")));
    }
    let mut dims = Vec::with_capacity(rank);
    for _ in 0..rank {
        let mut b = [0u8; 4];
        read_exact(source, &mut b, "tensor dims")?;
        dims.push(u64::from(u32::from_le_bytes(b)));
    }
    let count = element_count(&dims)? as usize;

    let mut data = Vec::new();
    let mut buf = vec![0u8; 4 * READ_CHUNK.min(count)];
    while data.len() < count {
        let n = READ_CHUNK.min(count - data.len());
        let bytes = &mut buf[..4 * n];
        read_exact(source, bytes, "tensor payload")?;
        data.reserve(n);
        data.extend(
            bytes
                .chunks_exact(4)
                .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]])),
        );
    }
    Ok(Tensor {
        shape: dims.into_iter().map(|d| d as usize).collect(),
        data,
    })
}

fn read_exact<R: Read>(source: &mut R, buf: &mut [u8], what: &str) -> Result<(), TensorError> {
    source.read_exact(buf).map_err(|e| match e.kind() {
        io::ErrorKind::UnexpectedEof => TensorError::Truncated(format!("end of input inside {what}")),
        _ => TensorError::Io(e),
    })
}

/// Named tensors in insertion order with unique names.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TensorBundle {
    entries: Vec<(String, Tensor)>,
}

impl TensorBundle {
    pub fn new() -> Self {
        TensorBundle::default()
    }

    /// Appends an entry; rejects duplicates and names longer than 65535 bytes.
    pub fn push(&mut self, name: impl Into<String>, tensor: Tensor) -> Result<(), TensorError> {
        let name = name.into();
        if name.len() > usize::from(u16::MAX) {
            return Err(TensorError::Invalid(format!("entry name of {} bytes", name.len())));
        }
        if self.get(&name).is_some() {
            return Err(TensorError::Invalid(format!("duplicate entry {name:?}")));
        }
        self.entries.push((name, tensor));
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Tensor> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn entries(&self) -> &[(String, Tensor)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn bit_eq(&self, other: &TensorBundle) -> bool {
        self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|((a, ta), (b, tb))| a == b && ta.bit_eq(tb))
    }
}

pub fn write_bundle<W: Write>(bundle: &TensorBundle, sink: &mut W) -> Result<usize, TensorError> {
    let count = u32::try_from(bundle.entries.len())
        .map_err(|_| TensorError::Invalid("too many bundle entries".into()))?;
    sink.write_all(&BUNDLE_MAGIC)?;
    sink.write_all(&[FORMAT_VERSION])?;
    sink.write_all(&count.to_le_bytes())?;
    let mut written = 9;
    for (name, tensor) in &bundle.entries {
        let len = u16::try_from(name.len())
            .map_err(|_| TensorError::Invalid(format!("entry name of {} bytes", name.len())))?;
        sink.write_all(&len.to_le_bytes())?;
        sink.write_all(name.as_bytes())?;
        written += 2 + name.len() + write_tensor(tensor, sink)?;
    }
    Ok(written)
}

pub fn read_bundle<R: Read>(source: &mut R) -> Result<TensorBundle, TensorError> {
    let mut magic = [0u8; 4];
    read_exact(source, &mut magic, "bundle magic")?;
    if magic != BUNDLE_MAGIC {
        return Err(TensorError::Format(format!("bad bundle magic {magic:02x?}")));
    }
    let mut version = [0u8; 1];
    read_exact(source, &mut version, "bundle version")?;
    if version[0] != FORMAT_VERSION {
        return Err(TensorError::Unsupported {
            what: "version",
            value: version[0],
        });
    }
    let mut count = [0u8; 4];
    read_exact(source, &mut count, "bundle entry count")?;
    let count = u32::from_le_bytes(count);

    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for _ in 0..count {
        let mut len = [0u8; 2];
        read_exact(source, &mut len, "entry name length")?;
        let mut name = vec![0u8; usize::from(u16::from_le_bytes(len))];
        read_exact(source, &mut name, "entry name")?;
        let name = String::from_utf8(name)
            .map_err(|_| TensorError::Format("entry name is not UTF-8".into()))?;
        if !seen.insert(name.clone()) {
            return Err(TensorError::Format(format!("duplicate entry name {name:?}")));
        }
        let tensor = read_tensor(source)?;
        entries.push((name, tensor));
    }
    Ok(TensorBundle { entries })
}

pub fn read_tensor_file(path: impl AsRef<Path>) -> Result<Tensor, TensorError> {
    read_tensor(&mut BufReader::new(File::open(path)?))
}

pub fn write_tensor_file(tensor: &Tensor, path: impl AsRef<Path>) -> Result<usize, TensorError> {
    let mut w = BufWriter::new(File::create(path)?);
    let n = write_tensor(tensor, &mut w)?;
    w.flush()?;
    Ok(n)
}

pub fn read_bundle_file(path: impl AsRef<Path>) -> Result<TensorBundle, TensorError> {
    read_bundle(&mut BufReader::new(File::open(path)?))
}

pub fn write_bundle_file(bundle: &TensorBundle, path: impl AsRef<Path>) -> Result<usize, TensorError> {
    let mut w = BufWriter::new(File::create(path)?);
    let n = write_bundle(bundle, &mut w)?;
    w.flush()?;
    Ok(n)
}
