//! JSON channel files.
//!
//! Complex scalars are `[re, im]` pairs and matrices are row-major nested
//! arrays, so a Kraus list is a rank-4 array `kraus[α][row][col] = [re, im]`.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::KrausMap;
use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, ComplexVector};

pub type EncodedMatrix = Vec<Vec<[f64; 2]>>;

pub fn encode_matrix(m: &ComplexMatrix) -> EncodedMatrix {
    (0..m.nrows())
        .map(|r| {
            (0..m.ncols())
                .map(|c| [m[(r, c)].re, m[(r, c)].im])
                .collect()
        })
        .collect()
}

pub fn encode_vector(v: &ComplexVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

/// Decodes a row-major nested array. Rows must have equal length and every
/// entry must be finite.
pub fn decode_matrix(rows: &EncodedMatrix) -> Result<ComplexMatrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Format("ragged matrix rows".into()));
    }
    let mut m = ComplexMatrix::zeros(nrows, ncols);
    for (r, row) in rows.iter().enumerate() {
        for (c, &[re, im]) in row.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return Err(Error::Format(format!("non-finite entry at ({r}, {c})")));
            }
            m[(r, c)] = Complex64::new(re, im);
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
}

impl Metadata {
    pub fn is_empty(&self) -> bool {
        self.name.is_none() && self.seed.is_none() && self.family.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelFile {
    pub d_in: usize,
    pub d_out: usize,
    pub kraus: Vec<EncodedMatrix>,
    #[serde(default, skip_serializing_if = "Metadata::is_empty")]
    pub metadata: Metadata,
}

impl ChannelFile {
    pub fn from_map(phi: &KrausMap, metadata: Metadata) -> Self {
        Self {
            d_in: phi.d_in(),
            d_out: phi.d_out(),
            kraus: phi.kraus().iter().map(encode_matrix).collect(),
            metadata,
        }
    }

    pub fn to_map(&self) -> Result<KrausMap> {
        let kraus = self
            .kraus
            .iter()
            .map(decode_matrix)
            .collect::<Result<Vec<_>>>()?;
        KrausMap::with_dims(self.d_in, self.d_out, kraus)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))
    }
}

pub fn read_channel(path: &Path) -> Result<KrausMap> {
    read_channel_file(path)?.to_map()
}

pub fn read_channel_file(path: &Path) -> Result<ChannelFile> {
    ChannelFile::from_json(&fs::read_to_string(path)?)
}

pub fn write_channel(path: &Path, phi: &KrausMap, metadata: Metadata) -> Result<()> {
    let text = ChannelFile::from_map(phi, metadata).to_json()?;
    write_atomic(path, text.as_bytes())
}

/// Writes to a sibling temporary file and renames it over `path`, so a failed
/// write never leaves a partial file behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path.file_name().ok_or_else(|| {
        Error::Io(std::io::Error::other(format!(
            "not a file path: {}",
            path.display()
        )))
    })?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    if let Err(e) = fs::write(&tmp, bytes) {
        let _ = fs::remove_file(&tmp);
        return Err(e.into());
    }
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::Io(e)
    })
}
