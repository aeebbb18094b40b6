//! Binary and CSV formats for fields and spectra.
//!
//! `MAJ1` (Cartesian, little-endian): magic, `u32` version = 1, `u32` rank
//! (3 or 4), `rank × u32` points per axis, `rank × f64` box lengths,
//! `f64` mass, then `Π dims × 4` `f64` spinor components, row-major with the
//! last axis fastest. For rank 4 the first axis is time.
//!
//! `MAJS` (spherical, little-endian): magic, `u32` version = 1, `u32` nr,
//! `u32` ntheta, `u32` nphi, `f64` rmax, `f64` mass, node arrays
//! `r[nr]`, `cosθ[ntheta]`, `w_θ[ntheta]`, `φ[nphi]`, then `nr·ntheta·nphi × 4`
//! `f64` spinor components ordered radius, θ, φ (φ fastest).

use std::io::{Read, Write};

use crate::error::{MajoranaError, Result};
use crate::fourier::{CartesianGrid, MomentumSpectrum, SpacetimeData, SpacetimeGrid, SpinorField};
use crate::hankel::{HankelSpectrum, SphericalField, SphericalGrid};
use crate::matrix::Spinor4;

pub const MAGIC_CARTESIAN: &[u8; 4] = b"MAJ1";
pub const MAGIC_SPHERICAL: &[u8; 4] = b"MAJS";
pub const VERSION: u32 = 1;

/// Raw contents of a `MAJ1` file.
#[derive(Clone, Debug, PartialEq)]
pub struct CartesianFile {
    pub dims: Vec<u32>,
    pub lengths: Vec<f64>,
    pub mass: f64,
    pub data: Vec<Spinor4>,
}

fn put_u32(w: &mut impl Write, v: u32) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

fn put_f64(w: &mut impl Write, v: f64) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

fn get_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn get_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

fn put_spinors(w: &mut impl Write, data: &[Spinor4]) -> Result<()> {
    for v in data {
        for c in v.iter() {
            put_f64(w, *c)?;
        }
    }
    Ok(())
}

fn get_spinors(r: &mut impl Read, n: usize) -> Result<Vec<Spinor4>> {
    (0..n)
        .map(|_| Ok(Spinor4::new(get_f64(r)?, get_f64(r)?, get_f64(r)?, get_f64(r)?)))
        .collect()
}

fn expect_magic(r: &mut impl Read, magic: &[u8; 4]) -> Result<()> {
    let mut m = [0u8; 4];
    r.read_exact(&mut m)?;
    if &m != magic {
        return Err(MajoranaError::Format(format!("bad magic {:?}", String::from_utf8_lossy(&m))));
    }
    let v = get_u32(r)?;
    if v != VERSION {
        return Err(MajoranaError::Format(format!("unsupported version {v}")));
    }
    Ok(())
}

pub fn write_cartesian(w: &mut impl Write, f: &CartesianFile) -> Result<()> {
    let count: usize = f.dims.iter().map(|&d| d as usize).product();
    if f.dims.len() != f.lengths.len() || count != f.data.len() {
        return Err(MajoranaError::ShapeMismatch("dims, lengths and data disagree".into()));
    }
    w.write_all(MAGIC_CARTESIAN)?;
    put_u32(w, VERSION)?;
    put_u32(w, f.dims.len() as u32)?;
    for &d in &f.dims {
        put_u32(w, d)?;
    }
    for &l in &f.lengths {
        put_f64(w, l)?;
    }
    put_f64(w, f.mass)?;
    put_spinors(w, &f.data)
}

pub fn read_cartesian(r: &mut impl Read) -> Result<CartesianFile> {
    expect_magic(r, MAGIC_CARTESIAN)?;
    let rank = get_u32(r)?;
    if rank != 3 && rank != 4 {
        return Err(MajoranaError::Format(format!("rank {rank} (expected 3 or 4)")));
    }
    let dims = (0..rank).map(|_| get_u32(r)).collect::<Result<Vec<_>>>()?;
    let lengths = (0..rank).map(|_| get_f64(r)).collect::<Result<Vec<_>>>()?;
    let mass = get_f64(r)?;
    let count: usize = dims.iter().map(|&d| d as usize).product();
    let data = get_spinors(r, count)?;
    Ok(CartesianFile { dims, lengths, mass, data })
}

impl From<&SpinorField> for CartesianFile {
    fn from(f: &SpinorField) -> Self {
        let n = f.grid.n as u32;
        Self {
            dims: vec![n; 3],
            lengths: vec![f.grid.length; 3],
            mass: f.mass,
            data: f.values.clone(),
        }
    }
}

impl From<&SpacetimeData> for CartesianFile {
    fn from(f: &SpacetimeData) -> Self {
        let n = f.grid.space.n as u32;
        let l = f.grid.space.length;
        Self {
            dims: vec![f.grid.nt as u32, n, n, n],
            lengths: vec![f.grid.lt, l, l, l],
            mass: f.mass,
            data: f.values.clone(),
        }
    }
}

impl CartesianFile {
    fn cubic(&self, from: usize) -> Result<CartesianGrid> {
        let d = &self.dims[from..];
        let l = &self.lengths[from..];
        if d.iter().any(|&x| x != d[0]) || l.iter().any(|&x| x != l[0]) {
            return Err(MajoranaError::Format("spatial axes must form a cube".into()));
        }
        CartesianGrid::new(d[0] as usize, l[0])
    }

    pub fn into_field(self) -> Result<SpinorField> {
        if self.dims.len() != 3 {
            return Err(MajoranaError::Format("expected a rank-3 file".into()));
        }
        Ok(SpinorField {
            grid: self.cubic(0)?,
            mass: self.mass,
            values: self.data,
        })
    }

    pub fn into_spacetime(self) -> Result<SpacetimeData> {
        if self.dims.len() != 4 {
            return Err(MajoranaError::Format("expected a rank-4 file".into()));
        }
        let grid = SpacetimeGrid::new(self.dims[0] as usize, self.lengths[0], self.cubic(1)?)?;
        Ok(SpacetimeData {
            grid,
            mass: self.mass,
            values: self.data,
        })
    }
}

pub fn write_spherical(w: &mut impl Write, f: &SphericalField) -> Result<()> {
    let g = &f.grid;
    w.write_all(MAGIC_SPHERICAL)?;
    put_u32(w, VERSION)?;
    put_u32(w, g.radial.nr as u32)?;
    put_u32(w, g.angular.ntheta as u32)?;
    put_u32(w, g.angular.nphi as u32)?;
    put_f64(w, g.radial.rmax)?;
    put_f64(w, f.mass)?;
    for arr in [&g.radial.r, &g.angular.cos_theta, &g.angular.w_theta, &g.angular.phi] {
        for &x in arr.iter() {
            put_f64(w, x)?;
        }
    }
    put_spinors(w, &f.values)
}

/// Reads a `MAJS` file, rebuilding the grid and checking the stored nodes
/// against it.
pub fn read_spherical(r: &mut impl Read) -> Result<SphericalField> {
    expect_magic(r, MAGIC_SPHERICAL)?;
    let nr = get_u32(r)? as usize;
    let nt = get_u32(r)? as usize;
    let np = get_u32(r)? as usize;
    let rmax = get_f64(r)?;
    let mass = get_f64(r)?;
    let grid = SphericalGrid::new(nr, rmax, nt, np)?;
    let expected = [&grid.radial.r, &grid.angular.cos_theta, &grid.angular.w_theta, &grid.angular.phi];
    for arr in expected {
        for &x in arr.iter() {
            let y = get_f64(r)?;
            if (x - y).abs() > 1e-12 * x.abs().max(1.0) {
                return Err(MajoranaError::Format("stored nodes disagree with the grid".into()));
            }
        }
    }
    let values = get_spinors(r, grid.len())?;
    Ok(SphericalField { grid, mass, values })
}

fn fmt(x: f64) -> String {
    format!("{x:.17e}")
}

fn spinor_cells(v: &Spinor4) -> [String; 4] {
    [fmt(v[0]), fmt(v[1]), fmt(v[2]), fmt(v[3])]
}

fn csv_err(e: csv::Error) -> MajoranaError {
    MajoranaError::Format(e.to_string())
}

/// Columns `x1, x2, x3, psi0..psi3`.
pub fn write_field_csv(w: impl Write, f: &SpinorField) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["x1", "x2", "x3", "psi0", "psi1", "psi2", "psi3"]).map_err(csv_err)?;
    for (i, v) in f.values.iter().enumerate() {
        let x = f.grid.position(i);
        let mut row = vec![fmt(x[0]), fmt(x[1]), fmt(x[2])];
        row.extend(spinor_cells(v));
        out.write_record(&row).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Columns `x0, x1, x2, x3, psi0..psi3`.
pub fn write_spacetime_csv(w: impl Write, f: &SpacetimeData) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["x0", "x1", "x2", "x3", "psi0", "psi1", "psi2", "psi3"]).map_err(csv_err)?;
    let ns = f.grid.space.len();
    for (i, v) in f.values.iter().enumerate() {
        let x = f.grid.space.position(i % ns);
        let mut row = vec![fmt(f.grid.time(i / ns)), fmt(x[0]), fmt(x[1]), fmt(x[2])];
        row.extend(spinor_cells(v));
        out.write_record(&row).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Columns `p1, p2, p3, psi0..psi3` with kernel (effective) momenta.
pub fn write_momentum_csv(w: impl Write, s: &MomentumSpectrum) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["p1", "p2", "p3", "psi0", "psi1", "psi2", "psi3"]).map_err(csv_err)?;
    for (i, v) in s.values.iter().enumerate() {
        let p = s.grid.effective_momentum(i, s.mass).0;
        let mut row = vec![fmt(p[0]), fmt(p[1]), fmt(p[2])];
        row.extend(spinor_cells(v));
        out.write_record(&row).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Columns `p, l, mu, psi0..psi3`.
pub fn write_hankel_csv(w: impl Write, s: &HankelSpectrum) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["p", "l", "mu", "psi0", "psi1", "psi2", "psi3"]).map_err(csv_err)?;
    for (mi, md) in s.modes.iter().enumerate() {
        for k in 0..s.nodes.len() {
            let mut row = vec![fmt(s.nodes.p[k]), md.l.to_string(), md.mu.to_string()];
            row.extend(spinor_cells(s.get(mi, k)));
            out.write_record(&row).map_err(csv_err)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Columns `r, theta, phi, psi0..psi3`.
pub fn write_spherical_csv(w: impl Write, f: &SphericalField) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["r", "theta", "phi", "psi0", "psi1", "psi2", "psi3"]).map_err(csv_err)?;
    for (i, v) in f.values.iter().enumerate() {
        let (r, t, p) = f.grid.coords(i);
        let mut row = vec![fmt(r), fmt(t), fmt(p)];
        row.extend(spinor_cells(v));
        out.write_record(&row).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}
