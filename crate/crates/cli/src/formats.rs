//! Batch serialization: CSV matrices and the LSB1 binary container.
//!
//! LSB1 layout: magic `LSB1`, `u32` LE column count, `u64` LE row count,
//! `rows × columns` little-endian `f64` values row-major, then a UTF-8 JSON
//! metadata blob preceded by its `u32` LE byte length. Files written here
//! round-trip byte-for-byte through [`read_lsb1`] → [`write_lsb1`].

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use latent_interp_core::priors::{PriorSpec, SampleBatch};
use latent_interp_core::NormSummary;
use serde::{Deserialize, Serialize};

use crate::run::CliError;

pub const LSB1_MAGIC: [u8; 4] = *b"LSB1";

/// Provenance blob stored at the tail of an LSB1 file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lsb1Metadata {
    pub prior: PriorSpec,
    pub seed: u64,
    pub scale: f64,
}

/// A raw LSB1 matrix. `columns` equals the prior dimension for sample
/// batches and `1 + D` for interpolation paths (λ in column 0).
#[derive(Debug, Clone, PartialEq)]
pub struct Lsb1File {
    pub columns: u32,
    pub rows: u64,
    pub data: Vec<f64>,
    pub metadata: Lsb1Metadata,
}

impl Lsb1File {
    pub fn from_batch(batch: &SampleBatch) -> Self {
        Lsb1File {
            columns: batch.dim() as u32,
            rows: batch.n() as u64,
            data: batch.data().to_vec(),
            metadata: Lsb1Metadata {
                prior: *batch.prior(),
                seed: batch.seed(),
                scale: batch.scale(),
            },
        }
    }

    /// Reinterpret as a sample batch; fails when the column count does not
    /// match the recorded prior (e.g. for path files).
    pub fn into_batch(self) -> Result<SampleBatch, CliError> {
        if self.columns != self.metadata.prior.dim() {
            return Err(CliError::Format(
                "column count does not match the recorded prior dimension".into(),
            ));
        }
        SampleBatch::from_parts(
            self.metadata.prior,
            self.rows as usize,
            self.metadata.seed,
            self.metadata.scale,
            self.data,
        )
        .map_err(|e| CliError::Format(format!("invalid batch data: {e}")))
    }
}

pub fn write_lsb1(path: &Path, file: &Lsb1File) -> Result<(), CliError> {
    debug_assert_eq!(file.data.len() as u64, file.rows * file.columns as u64);
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&LSB1_MAGIC)?;
    w.write_all(&file.columns.to_le_bytes())?;
    w.write_all(&file.rows.to_le_bytes())?;
    for v in &file.data {
        w.write_all(&v.to_le_bytes())?;
    }
    let metadata = serde_json::to_vec(&file.metadata).expect("metadata is serializable");
    w.write_all(&(metadata.len() as u32).to_le_bytes())?;
    w.write_all(&metadata)?;
    w.flush()?;
    Ok(())
}

pub fn read_lsb1(path: &Path) -> Result<Lsb1File, CliError> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if magic != LSB1_MAGIC {
        return Err(CliError::Format("not an LSB1 file (bad magic)".into()));
    }
    let mut u32buf = [0u8; 4];
    let mut u64buf = [0u8; 8];
    r.read_exact(&mut u32buf)?;
    let columns = u32::from_le_bytes(u32buf);
    r.read_exact(&mut u64buf)?;
    let rows = u64::from_le_bytes(u64buf);
    let count = rows
        .checked_mul(columns as u64)
        .ok_or_else(|| CliError::Format("matrix size overflow".into()))?;
    let mut data = Vec::with_capacity(count as usize);
    for _ in 0..count {
        r.read_exact(&mut u64buf)?;
        data.push(f64::from_le_bytes(u64buf));
    }
    r.read_exact(&mut u32buf)?;
    let metadata_len = u32::from_le_bytes(u32buf) as usize;
    let mut metadata_bytes = vec![0u8; metadata_len];
    r.read_exact(&mut metadata_bytes)?;
    let metadata: Lsb1Metadata = serde_json::from_slice(&metadata_bytes)
        .map_err(|e| CliError::Format(format!("metadata: {e}")))?;
    Ok(Lsb1File {
        columns,
        rows,
        data,
        metadata,
    })
}

/// CSV matrix with header `dim_0,…,dim_{D-1}`.
pub fn write_batch_csv(path: &Path, batch: &SampleBatch) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_matrix_csv(&mut w, &dim_header(batch.dim()), batch.dim(), batch.data())
}

/// CSV path file: `lambda` column first, then `dim_0,…`.
pub fn write_path_csv(
    path: &Path,
    lambdas: &[f64],
    points: &[Vec<f64>],
) -> Result<(), CliError> {
    let dim = points.first().map_or(0, |p| p.len());
    let mut header = vec!["lambda".to_string()];
    header.extend(dim_header(dim));
    let mut data = Vec::with_capacity(lambdas.len() * (dim + 1));
    for (l, point) in lambdas.iter().zip(points) {
        data.push(*l);
        data.extend_from_slice(point);
    }
    let mut w = BufWriter::new(File::create(path)?);
    write_matrix_csv(&mut w, &header, dim + 1, &data)
}

fn dim_header(dim: usize) -> Vec<String> {
    (0..dim).map(|j| format!("dim_{j}")).collect()
}

fn write_matrix_csv<W: Write>(
    w: &mut W,
    header: &[String],
    columns: usize,
    data: &[f64],
) -> Result<(), CliError> {
    writeln!(w, "{}", header.join(","))?;
    for row in data.chunks_exact(columns) {
        let mut first = true;
        for v in row {
            if !first {
                w.write_all(b",")?;
            }
            write!(w, "{v}")?;
            first = false;
        }
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Read a CSV matrix (any header) back as `(header, columns, row-major data)`.
pub fn read_csv_matrix(path: &Path) -> Result<(Vec<String>, usize, Vec<f64>), CliError> {
    let r = BufReader::new(File::open(path)?);
    let mut lines = r.lines();
    let header_line = lines
        .next()
        .ok_or_else(|| CliError::Format("empty CSV".into()))??;
    let header: Vec<String> = header_line.split(',').map(str::to_string).collect();
    let columns = header.len();
    let mut data = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let mut count = 0usize;
        for field in line.split(',') {
            let v: f64 = field
                .parse()
                .map_err(|_| CliError::Format(format!("row {}: bad number {field:?}", i + 1)))?;
            data.push(v);
            count += 1;
        }
        if count != columns {
            return Err(CliError::Format(format!(
                "row {}: {count} fields, expected {columns}",
                i + 1
            )));
        }
    }
    Ok((header, columns, data))
}

/// `bin_center,density` histogram export.
pub fn write_histogram_csv(path: &Path, summary: &NormSummary) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "bin_center,density")?;
    for bin in &summary.histogram {
        writeln!(w, "{},{}", bin.bin_center, bin.density)?;
    }
    w.flush()?;
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| CliError::Format(format!("serialize: {e}")))?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

/// Read the first two rows of an endpoints file; LSB1 is detected by magic,
/// anything else is parsed as CSV. A CSV `lambda` column is rejected.
pub fn read_endpoints(path: &Path) -> Result<(usize, Vec<f64>, Vec<f64>), CliError> {
    let mut probe = [0u8; 4];
    let is_lsb1 = {
        let mut f = File::open(path)?;
        f.read_exact(&mut probe).is_ok() && probe == LSB1_MAGIC
    };
    let (columns, data) = if is_lsb1 {
        let file = read_lsb1(path)?;
        (file.columns as usize, file.data)
    } else {
        let (header, columns, data) = read_csv_matrix(path)?;
        if header.first().map(String::as_str) == Some("lambda") {
            return Err(CliError::Format(
                "endpoints file is an interpolation path, not a batch".into(),
            ));
        }
        (columns, data)
    };
    if data.len() < 2 * columns || columns == 0 {
        return Err(CliError::Format(
            "endpoints file needs at least two rows".into(),
        ));
    }
    let x1 = data[..columns].to_vec();
    let x2 = data[columns..2 * columns].to_vec();
    Ok((columns, x1, x2))
}
