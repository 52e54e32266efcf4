//! Compact binary serialization for sampled grid functions.
//!
//! Layout (all integers and floats little-endian):
//!
//! ```text
//! offset  size  field
//! 0       4     magic "MGF1"
//! 4       4     u32 dimension d (1..=16)
//! 8       20·d  per axis: u64 node count, f64 min, f64 step
//! 8+20d   16·N  per node, row-major (last axis fastest): f64 re, f64 im
//! ```
//!
//! The decoder never trusts the header: node counts are multiplied under the
//! grid budget before any allocation, the payload length must match exactly,
//! and every decoded value must be finite.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{AxisSpec, GridFunction, GridSpec, MAX_DIM};

pub const MAGIC: [u8; 4] = *b"MGF1";
const AXIS_RECORD: usize = 8 + 8 + 8;
const VALUE_RECORD: usize = 16;

/// Serializes a grid function to the binary format.
pub fn to_bytes(f: &GridFunction) -> Vec<u8> {
    let spec = f.spec();
    let mut out = Vec::with_capacity(8 + AXIS_RECORD * spec.d() + VALUE_RECORD * spec.len());
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&(spec.d() as u32).to_le_bytes());
    for ax in spec.axes() {
        out.extend_from_slice(&(ax.n as u64).to_le_bytes());
        out.extend_from_slice(&ax.min.to_le_bytes());
        out.extend_from_slice(&ax.step.to_le_bytes());
    }
    for v in f.values() {
        out.extend_from_slice(&v.re.to_le_bytes());
        out.extend_from_slice(&v.im.to_le_bytes());
    }
    out
}

/// Decodes a grid function, validating structure before allocating.
pub fn from_bytes(bytes: &[u8]) -> Result<GridFunction> {
    let mut cursor = Cursor { bytes, pos: 0 };
    let magic = cursor.take(4)?;
    if magic != MAGIC {
        return Err(Error::Format { reason: "bad magic (expected MGF1)".into() });
    }
    let d = u32::from_le_bytes(cursor.take(4)?.try_into().unwrap()) as usize;
    if d == 0 || d > MAX_DIM {
        return Err(Error::Format { reason: format!("dimension {d} outside 1..={MAX_DIM}") });
    }
    let mut axes = Vec::with_capacity(d);
    for k in 0..d {
        let n = u64::from_le_bytes(cursor.take(8)?.try_into().unwrap());
        let min = f64::from_le_bytes(cursor.take(8)?.try_into().unwrap());
        let step = f64::from_le_bytes(cursor.take(8)?.try_into().unwrap());
        let n = usize::try_from(n)
            .map_err(|_| Error::Format { reason: format!("axis {k} node count overflows") })?;
        axes.push(AxisSpec { n, min, step });
    }
    // GridSpec::new re-checks counts, budget, and geometry.
    let spec = GridSpec::new(axes).map_err(|e| Error::Format { reason: format!("{e}") })?;
    let expected = spec
        .len()
        .checked_mul(VALUE_RECORD)
        .ok_or_else(|| Error::Format { reason: "payload size overflows".into() })?;
    let payload = cursor.rest();
    if payload.len() != expected {
        return Err(Error::Format {
            reason: format!("payload is {} bytes, grid needs {expected}", payload.len()),
        });
    }
    let mut values = Vec::with_capacity(spec.len());
    for chunk in payload.chunks_exact(VALUE_RECORD) {
        let re = f64::from_le_bytes(chunk[0..8].try_into().unwrap());
        let im = f64::from_le_bytes(chunk[8..16].try_into().unwrap());
        values.push(Complex64::new(re, im));
    }
    // GridFunction::new rejects non-finite values with their coordinates.
    GridFunction::new(spec, values).map_err(|e| Error::Format { reason: format!("{e}") })
}

/// Writes a grid function to a file in the binary format.
pub fn write_file(path: &std::path::Path, f: &GridFunction) -> Result<()> {
    std::fs::write(path, to_bytes(f))?;
    Ok(())
}

/// Reads a grid function from a file in the binary format.
pub fn read_file(path: &std::path::Path) -> Result<GridFunction> {
    from_bytes(&std::fs::read(path)?)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::Format { reason: "truncated input".into() })?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn rest(&self) -> &'a [u8] {
        &self.bytes[self.pos..]
    }
}
