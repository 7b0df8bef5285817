//! Complex wave-function samples on a uniform `(t, q)` lattice.
//!
//! Two layouts are supported. [`GridLayout::OnePlusOne`] holds `ψ(t, x)` for
//! one spatial dimension. [`GridLayout::Radial`] holds a spherically
//! symmetric field `ψ(t, r)` in 3+1 dimensions, where the spatial Laplacian
//! becomes `∂²_r + (2/r) ∂_r`.
//!
//! # Binary layout
//!
//! All integers and floats are little-endian.
//!
//! | offset | type      | content                           |
//! |-------:|-----------|-----------------------------------|
//! | 0      | `[u8; 8]` | magic `PTWGRID\0`                 |
//! | 8      | `u32`     | format version (1)                |
//! | 12     | `u32`     | layout: 0 = 1+1, 1 = radial       |
//! | 16     | `u64`     | `nt`                              |
//! | 24     | `u64`     | `nq`                              |
//! | 32     | `f64` × 4 | `h_t`, `h_q`, `t0`, `q0`          |
//! | 64     | `f64` × 2·nt·nq | `re, im` pairs, `t`-major    |

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"PTWGRID\0";
const VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridLayout {
    OnePlusOne,
    Radial,
}

/// Header data shared by the binary file and its JSON sidecar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridMeta {
    pub layout: GridLayout,
    pub nt: usize,
    pub nq: usize,
    pub h_t: f64,
    pub h_q: f64,
    pub t0: f64,
    pub q0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveGrid {
    meta: GridMeta,
    data: Vec<Complex64>,
}

impl WaveGrid {
    /// A grid of zeros.
    pub fn zeros(meta: GridMeta) -> Result<Self> {
        validate_meta(&meta)?;
        Ok(WaveGrid {
            meta,
            data: vec![Complex64::new(0.0, 0.0); meta.nt * meta.nq],
        })
    }

    /// Samples `f(t, q)` at every lattice node.
    pub fn from_fn(meta: GridMeta, mut f: impl FnMut(f64, f64) -> Complex64) -> Result<Self> {
        let mut g = Self::zeros(meta)?;
        for it in 0..meta.nt {
            for iq in 0..meta.nq {
                let v = f(g.t(it), g.q(iq));
                g.data[it * meta.nq + iq] = v;
            }
        }
        g.check_finite()?;
        Ok(g)
    }

    pub fn from_samples(meta: GridMeta, data: Vec<Complex64>) -> Result<Self> {
        validate_meta(&meta)?;
        if data.len() != meta.nt * meta.nq {
            return Err(Error::Format(format!(
                "expected {} samples, got {}",
                meta.nt * meta.nq,
                data.len()
            )));
        }
        let g = WaveGrid { meta, data };
        g.check_finite()?;
        Ok(g)
    }

    fn check_finite(&self) -> Result<()> {
        if self
            .data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            Ok(())
        } else {
            Err(Error::NonFinite("wave grid samples"))
        }
    }

    pub fn meta(&self) -> &GridMeta {
        &self.meta
    }

    pub fn layout(&self) -> GridLayout {
        self.meta.layout
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.meta.nt, self.meta.nq)
    }

    pub fn t(&self, it: usize) -> f64 {
        self.meta.t0 + self.meta.h_t * it as f64
    }

    pub fn q(&self, iq: usize) -> f64 {
        self.meta.q0 + self.meta.h_q * iq as f64
    }

    pub fn get(&self, it: usize, iq: usize) -> Complex64 {
        self.data[it * self.meta.nq + iq]
    }

    pub fn set(&mut self, it: usize, iq: usize, v: Complex64) {
        self.data[it * self.meta.nq + iq] = v;
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.data
    }

    /// Whether `(it, iq)` has a neighbour on every side.
    pub fn is_interior(&self, it: usize, iq: usize) -> bool {
        it >= 1 && iq >= 1 && it + 1 < self.meta.nt && iq + 1 < self.meta.nq
    }

    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        let m = &self.meta;
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        let layout: u32 = match m.layout {
            GridLayout::OnePlusOne => 0,
            GridLayout::Radial => 1,
        };
        w.write_all(&layout.to_le_bytes())?;
        w.write_all(&(m.nt as u64).to_le_bytes())?;
        w.write_all(&(m.nq as u64).to_le_bytes())?;
        for x in [m.h_t, m.h_q, m.t0, m.q0] {
            w.write_all(&x.to_le_bytes())?;
        }
        let mut buf = Vec::with_capacity(16 * self.data.len());
        for z in &self.data {
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format("bad magic; not a wave grid file".into()));
        }
        let version = read_u32(&mut r)?;
        if version != VERSION {
            return Err(Error::Format(format!(
                "unsupported grid format version {version}"
            )));
        }
        let layout = match read_u32(&mut r)? {
            0 => GridLayout::OnePlusOne,
            1 => GridLayout::Radial,
            other => return Err(Error::Format(format!("unknown layout code {other}"))),
        };
        let nt = usize::try_from(read_u64(&mut r)?)
            .map_err(|_| Error::Format("nt overflows usize".into()))?;
        let nq = usize::try_from(read_u64(&mut r)?)
            .map_err(|_| Error::Format("nq overflows usize".into()))?;
        let meta = GridMeta {
            layout,
            nt,
            nq,
            h_t: read_f64(&mut r)?,
            h_q: read_f64(&mut r)?,
            t0: read_f64(&mut r)?,
            q0: read_f64(&mut r)?,
        };
        validate_meta(&meta)?;
        let n = nt
            .checked_mul(nq)
            .ok_or_else(|| Error::Format("grid size overflows".into()))?;
        let mut data = Vec::with_capacity(n);
        for _ in 0..n {
            let re = read_f64(&mut r)?;
            let im = read_f64(&mut r)?;
            data.push(Complex64::new(re, im));
        }
        Self::from_samples(meta, data)
    }

    /// Writes `<path>` (binary) and `<path>.json` (header sidecar).
    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_binary(std::io::BufWriter::new(file))?;
        let mut sidecar = path.as_os_str().to_owned();
        sidecar.push(".json");
        let json =
            serde_json::to_string_pretty(&self.meta).map_err(|e| Error::Format(e.to_string()))?;
        std::fs::write(sidecar, json + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_binary(std::io::BufReader::new(file))
    }
}

fn validate_meta(m: &GridMeta) -> Result<()> {
    if m.nt == 0 || m.nq == 0 {
        return Err(Error::GridTooSmall(format!("{} x {} grid", m.nt, m.nq)));
    }
    let ok = |x: f64| x.is_finite() && x > 0.0;
    if !ok(m.h_t) || !ok(m.h_q) || !m.t0.is_finite() || !m.q0.is_finite() {
        return Err(Error::domain(
            "GridMeta",
            "spacings must be positive and offsets finite",
        ));
    }
    if m.layout == GridLayout::Radial && m.q0 <= 0.0 {
        return Err(Error::domain(
            "GridMeta",
            "radial grids must start at r > 0",
        ));
    }
    Ok(())
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta(layout: GridLayout) -> GridMeta {
        GridMeta {
            layout,
            nt: 3,
            nq: 4,
            h_t: 0.1,
            h_q: 0.2,
            t0: -1.0,
            q0: 0.5,
        }
    }

    #[test]
    fn binary_roundtrip() {
        let g =
            WaveGrid::from_fn(meta(GridLayout::Radial), |t, q| Complex64::new(t, q * q)).unwrap();
        let mut buf = Vec::new();
        g.write_binary(&mut buf).unwrap();
        assert_eq!(buf.len(), 64 + 16 * 12);
        assert_eq!(&buf[..8], b"PTWGRID\0");
        let back = WaveGrid::read_binary(&buf[..]).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn payload_is_t_major() {
        let g = WaveGrid::from_fn(meta(GridLayout::OnePlusOne), Complex64::new).unwrap();
        let mut buf = Vec::new();
        g.write_binary(&mut buf).unwrap();
        let at = |k: usize| f64::from_le_bytes(buf[64 + 8 * k..72 + 8 * k].try_into().unwrap());
        // second sample: it = 0, iq = 1
        assert_eq!(at(2), -1.0);
        assert_eq!(at(3), 0.5 + 0.2);
    }

    #[test]
    fn rejects_corrupt_input() {
        assert!(matches!(
            WaveGrid::read_binary(&b"NOTAGRID"[..]),
            Err(Error::Format(_))
        ));
        let g = WaveGrid::zeros(meta(GridLayout::OnePlusOne)).unwrap();
        let mut buf = Vec::new();
        g.write_binary(&mut buf).unwrap();
        buf.truncate(buf.len() - 3);
        assert!(matches!(WaveGrid::read_binary(&buf[..]), Err(Error::Io(_))));
    }

    #[test]
    fn validates_meta() {
        let mut m = meta(GridLayout::Radial);
        m.q0 = 0.0;
        assert!(WaveGrid::zeros(m).is_err());
        m.q0 = 1.0;
        m.h_t = -1.0;
        assert!(WaveGrid::zeros(m).is_err());
        let nan = WaveGrid::from_fn(meta(GridLayout::OnePlusOne), |_, _| {
            Complex64::new(f64::NAN, 0.0)
        });
        assert_eq!(nan.unwrap_err(), Error::NonFinite("wave grid samples"));
    }
}
