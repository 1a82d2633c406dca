//! Flat binary tensor container.
//!
//! Layout: magic "LMLC", format version u32, tensor count u32, then per tensor a
//! u16 name length, the UTF-8 name, a dtype byte (1 = float32, 2 = int64), a rank
//! byte and the dims as u64, followed by raw row-major data. All integers and
//! floats little-endian. A fixed-point set writes exactly two tensors:
//! "classes" int64[N] and "points" float32[N, n, 3].

use crate::error::{Error, Result};
use crate::repr::fixed::FixedPointSet;

pub const MAGIC: &[u8; 4] = b"LMLC";
pub const FORMAT_VERSION: u32 = 1;

const DTYPE_F32: u8 = 1;
const DTYPE_I64: u8 = 2;

/// Parsed contents of a tensor file.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorFile {
    pub classes: Vec<i64>,
    /// [num_labels, points per label, 3]
    pub dims: [usize; 3],
    pub points: Vec<f32>,
}

fn write_tensor_header(out: &mut Vec<u8>, name: &str, dtype: u8, dims: &[u64]) {
    out.extend_from_slice(&(name.len() as u16).to_le_bytes());
    out.extend_from_slice(name.as_bytes());
    out.push(dtype);
    out.push(dims.len() as u8);
    for &d in dims {
        out.extend_from_slice(&d.to_le_bytes());
    }
}

pub fn serialize_tensors(fps: &FixedPointSet) -> Vec<u8> {
    let n_labels = fps.num_labels() as u64;
    let mut out = Vec::with_capacity(64 + fps.classes.len() * 8 + fps.points.len() * 4);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&2u32.to_le_bytes());

    write_tensor_header(&mut out, "classes", DTYPE_I64, &[n_labels]);
    for &c in &fps.classes {
        out.extend_from_slice(&c.to_le_bytes());
    }
    write_tensor_header(&mut out, "points", DTYPE_F32, &[n_labels, fps.n as u64, 3]);
    for &p in &fps.points {
        out.extend_from_slice(&p.to_le_bytes());
    }
    out
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, len: usize, what: &str) -> Result<&'a [u8]> {
        if self.pos + len > self.bytes.len() {
            return Err(Error::Binary {
                offset: self.pos,
                message: format!("truncated while reading {what}"),
            });
        }
        let slice = &self.bytes[self.pos..self.pos + len];
        self.pos += len;
        Ok(slice)
    }

    fn u16(&mut self, what: &str) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2, what)?.try_into().unwrap()))
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }
}

fn expect_tensor(cur: &mut Cursor, name: &str, dtype: u8, rank: u8) -> Result<Vec<u64>> {
    let name_at = cur.pos;
    let name_len = cur.u16("tensor name length")? as usize;
    let got_name = std::str::from_utf8(cur.take(name_len, "tensor name")?)
        .map_err(|_| Error::Binary { offset: name_at, message: "tensor name is not UTF-8".into() })?;
    if got_name != name {
        return Err(Error::Binary {
            offset: name_at,
            message: format!("expected tensor '{name}', found '{got_name}'"),
        });
    }
    let dtype_at = cur.pos;
    let got_dtype = cur.take(1, "dtype")?[0];
    if got_dtype != dtype {
        return Err(Error::Binary {
            offset: dtype_at,
            message: format!("tensor '{name}': expected dtype {dtype}, found {got_dtype}"),
        });
    }
    let rank_at = cur.pos;
    let got_rank = cur.take(1, "rank")?[0];
    if got_rank != rank {
        return Err(Error::Binary {
            offset: rank_at,
            message: format!("tensor '{name}': expected rank {rank}, found {got_rank}"),
        });
    }
    (0..rank).map(|_| cur.u64("tensor dim")).collect()
}

pub fn parse_tensors(bytes: &[u8]) -> Result<TensorFile> {
    let mut cur = Cursor { bytes, pos: 0 };
    let magic = cur.take(4, "magic")?;
    if magic != MAGIC {
        return Err(Error::Binary { offset: 0, message: format!("bad magic {magic:?}") });
    }
    let version_at = cur.pos;
    let version = cur.u32("format version")?;
    if version != FORMAT_VERSION {
        return Err(Error::Binary {
            offset: version_at,
            message: format!("unsupported format version {version}"),
        });
    }
    let count_at = cur.pos;
    let count = cur.u32("tensor count")?;
    if count != 2 {
        return Err(Error::Binary {
            offset: count_at,
            message: format!("expected 2 tensors, found {count}"),
        });
    }

    let class_dims = expect_tensor(&mut cur, "classes", DTYPE_I64, 1)?;
    let n_classes = class_dims[0] as usize;
    let mut classes = Vec::with_capacity(n_classes);
    for _ in 0..n_classes {
        classes.push(cur.u64("class code")? as i64);
    }

    let dims_at = cur.pos;
    let point_dims = expect_tensor(&mut cur, "points", DTYPE_F32, 3)?;
    let dims = [point_dims[0] as usize, point_dims[1] as usize, point_dims[2] as usize];
    if dims[0] != n_classes || dims[2] != 3 {
        return Err(Error::Binary {
            offset: dims_at,
            message: format!("points dims {dims:?} inconsistent with {n_classes} classes"),
        });
    }
    let mut points = Vec::with_capacity(dims[0] * dims[1] * dims[2]);
    for _ in 0..dims[0] * dims[1] * dims[2] {
        points.push(f32::from_le_bytes(cur.take(4, "point value")?.try_into().unwrap()));
    }
    if cur.pos != bytes.len() {
        return Err(Error::Binary {
            offset: cur.pos,
            message: format!("{} trailing bytes after the last tensor", bytes.len() - cur.pos),
        });
    }
    Ok(TensorFile { classes, dims, points })
}
