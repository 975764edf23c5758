//! Binary density snapshots.
//!
//! Layout (all little-endian): `"NNST"`, version `u16`, `d: u16`,
//! `n: u32`, `time: f64`, `n^d` density values as `f64` in row-major order
//! (last axis fastest), CRC32 of the payload bytes.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::simulator::Snapshot;
use crate::spectral::{GridField, TorusGrid};

use super::IoError;

pub const SNAPSHOT_MAGIC: [u8; 4] = *b"NNST";
pub const SNAPSHOT_VERSION: u16 = 1;

pub fn write_snapshot(snap: &Snapshot, out: &mut impl Write) -> Result<(), IoError> {
    let grid = snap.rho.grid();
    let mut header = Vec::with_capacity(20);
    header.extend_from_slice(&SNAPSHOT_MAGIC);
    header.extend_from_slice(&SNAPSHOT_VERSION.to_le_bytes());
    header.extend_from_slice(&(grid.dim() as u16).to_le_bytes());
    header.extend_from_slice(&(grid.n() as u32).to_le_bytes());
    header.extend_from_slice(&snap.time.to_le_bytes());
    let payload: Vec<u8> = snap.rho.values().iter().flat_map(|v| v.to_le_bytes()).collect();
    out.write_all(&header)?;
    out.write_all(&payload)?;
    out.write_all(&crc32fast::hash(&payload).to_le_bytes())?;
    Ok(())
}

pub fn read_snapshot(input: &mut impl Read) -> Result<Snapshot, IoError> {
    let mut header = [0u8; 20];
    input.read_exact(&mut header).map_err(truncated)?;
    if header[..4] != SNAPSHOT_MAGIC {
        return Err(IoError::Snapshot("bad magic".into()));
    }
    let version = u16::from_le_bytes([header[4], header[5]]);
    if version != SNAPSHOT_VERSION {
        return Err(IoError::Snapshot(format!("unsupported version {version}")));
    }
    let d = u16::from_le_bytes([header[6], header[7]]) as usize;
    let n = u32::from_le_bytes(header[8..12].try_into().expect("4 bytes")) as usize;
    let time = f64::from_le_bytes(header[12..20].try_into().expect("8 bytes"));
    let grid = TorusGrid::new(d, n).map_err(|e| IoError::Snapshot(e.to_string()))?;
    let mut payload = vec![0u8; 8 * grid.len()];
    input.read_exact(&mut payload).map_err(truncated)?;
    let mut crc = [0u8; 4];
    input.read_exact(&mut crc).map_err(truncated)?;
    if crc32fast::hash(&payload) != u32::from_le_bytes(crc) {
        return Err(IoError::Snapshot("checksum mismatch".into()));
    }
    let values = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    let rho = GridField::new(grid, values).map_err(|e| IoError::Snapshot(e.to_string()))?;
    Ok(Snapshot { time, rho })
}

fn truncated(e: std::io::Error) -> IoError {
    if e.kind() == std::io::ErrorKind::UnexpectedEof {
        IoError::Snapshot("file is truncated".into())
    } else {
        e.into()
    }
}

pub fn write_snapshot_file(snap: &Snapshot, path: &Path) -> Result<(), IoError> {
    let mut out = BufWriter::new(File::create(path)?);
    write_snapshot(snap, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn read_snapshot_file(path: &Path) -> Result<Snapshot, IoError> {
    read_snapshot(&mut BufReader::new(File::open(path)?))
}
