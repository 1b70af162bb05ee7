//! Flat binary container and CSV export for sampled fields.
//!
//! Binary layout (little endian): `N: f64`, `L: f64`, `n: u64`, then `n^N`
//! complex samples as `(re: f64, im: f64)` in row-major order.

use std::io::{Read, Write};

use num_complex::Complex64;

use super::grid::GridSpec;
use super::sampled::SampledField;
use crate::error::{Error, Result};

pub fn write_binary<W: Write>(f: &SampledField, mut w: W) -> Result<()> {
    let g = f.grid;
    w.write_all(&(g.dim as f64).to_le_bytes())?;
    w.write_all(&g.half_width.to_le_bytes())?;
    w.write_all(&(g.points as u64).to_le_bytes())?;
    let mut buf = Vec::with_capacity(16 * f.values.len());
    for v in &f.values {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_binary<R: Read>(mut r: R) -> Result<SampledField> {
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let dim = f64::from_le_bytes(b8);
    r.read_exact(&mut b8)?;
    let half_width = f64::from_le_bytes(b8);
    r.read_exact(&mut b8)?;
    let points = u64::from_le_bytes(b8);
    if dim.fract() != 0.0 || !(1.0..=3.0).contains(&dim) {
        return Err(Error::Format(format!("bad dimension {dim}")));
    }
    let grid = GridSpec::new(dim as usize, half_width, points as usize)
        .map_err(|e| Error::Format(e.to_string()))?;
    let mut raw = vec![0u8; 16 * grid.len()];
    r.read_exact(&mut raw)
        .map_err(|_| Error::Format("truncated sample data".into()))?;
    let values = raw
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect();
    let mut rest = Vec::new();
    r.read_to_end(&mut rest)?;
    if !rest.is_empty() {
        return Err(Error::Format(format!("{} trailing bytes", rest.len())));
    }
    SampledField::new(grid, values).map_err(|e| Error::Format(e.to_string()))
}

/// CSV with columns `x,re,im`; one-dimensional fields only.
pub fn write_csv<W: Write>(f: &SampledField, w: W) -> Result<()> {
    if f.grid.dim != 1 {
        return Err(Error::InvalidParameter("CSV export is for N = 1".into()));
    }
    let mut wr = csv::Writer::from_writer(w);
    let io = |e: csv::Error| Error::Format(e.to_string());
    wr.write_record(["x", "re", "im"]).map_err(io)?;
    for (j, v) in f.values.iter().enumerate() {
        wr.write_record([
            format!("{:e}", f.grid.coord(j)),
            format!("{:e}", v.re),
            format!("{:e}", v.im),
        ])
        .map_err(io)?;
    }
    wr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_roundtrip() {
        let g = GridSpec::new(2, 3.0, 8).unwrap();
        let f = SampledField::from_fn(g, |x| Complex64::new(x[0], x[1] * x[0]));
        let mut buf = Vec::new();
        write_binary(&f, &mut buf).unwrap();
        assert_eq!(buf.len(), 24 + 16 * 64);
        let back = read_binary(buf.as_slice()).unwrap();
        assert_eq!(back, f);
        assert!(read_binary(&buf[..100]).is_err());
    }

    #[test]
    fn csv_header_and_rows() {
        let g = GridSpec::new(1, 1.0, 8).unwrap();
        let f = SampledField::from_real_fn(g, |x| x[0]);
        let mut buf = Vec::new();
        write_csv(&f, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("x,re,im\n"));
        assert_eq!(s.lines().count(), 9);
    }
}
