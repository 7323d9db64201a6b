//! Raw field dumps.
//!
//! Layout: a 64-byte header followed by the samples in row-major order as
//! little-endian `f64` pairs `(re, im)`.
//!
//! | offset | type      | content                 |
//! |--------|-----------|-------------------------|
//! | 0      | `[u8; 8]` | `b"BIMAXFLD"`           |
//! | 8      | `u32`     | format version (1)      |
//! | 12     | `u32`     | dimension               |
//! | 16     | `u64`     | points per axis `N`     |
//! | 24     | `f64`     | extent `L`              |
//! | 32     | `u32`     | components per sample (2) |
//! | 36     | zero padding to 64      |

use std::io::{Read, Write};

use bimax::spectral::{Field, Grid};
use bimax::Complex64;

pub const MAGIC: &[u8; 8] = b"BIMAXFLD";
pub const HEADER_LEN: usize = 64;
const VERSION: u32 = 1;

pub fn encode(f: &Field) -> Vec<u8> {
    let g = f.grid();
    let mut out = Vec::with_capacity(HEADER_LEN + 16 * f.values().len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(g.dim() as u32).to_le_bytes());
    out.extend_from_slice(&(g.points_per_axis() as u64).to_le_bytes());
    out.extend_from_slice(&g.extent().to_le_bytes());
    out.extend_from_slice(&2u32.to_le_bytes());
    out.resize(HEADER_LEN, 0);
    for v in f.values() {
        out.extend_from_slice(&v.re.to_le_bytes());
        out.extend_from_slice(&v.im.to_le_bytes());
    }
    out
}

pub fn write(f: &Field, mut w: impl Write) -> std::io::Result<()> {
    w.write_all(&encode(f))
}

fn bad(msg: &str) -> std::io::Error {
    std::io::Error::new(std::io::ErrorKind::InvalidData, msg.to_string())
}

pub fn read(mut r: impl Read) -> std::io::Result<Field> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() < HEADER_LEN || &bytes[..8] != MAGIC {
        return Err(bad("not a raw field dump"));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    if u32_at(8) != VERSION || u32_at(32) != 2 {
        return Err(bad("unsupported dump version or layout"));
    }
    let dim = u32_at(12) as usize;
    let n = u64::from_le_bytes(bytes[16..24].try_into().unwrap()) as usize;
    let grid = Grid::new(dim, n, f64_at(24)).map_err(|e| bad(&e.to_string()))?;
    let body = &bytes[HEADER_LEN..];
    if body.len() != 16 * grid.len() {
        return Err(bad("payload length does not match the header"));
    }
    let values = body.chunks_exact(16).map(|c| Complex64::new(f64_at_slice(&c[..8]), f64_at_slice(&c[8..]))).collect();
    Field::new(grid, values).map_err(|e| bad(&e.to_string()))
}

fn f64_at_slice(b: &[u8]) -> f64 {
    f64::from_le_bytes(b.try_into().unwrap())
}
