//! Fourier-Majorana transform on a periodic cubic grid.
//!
//! Kernel `O(p, x) = rotor(−p·x)·N(p)` with
//! `N(p) = ((E+m)·I + pʲγ⁰γʲ) / √((E+m)·2E)`; `N` is symmetric and
//! `γ⁰γʲ` anticommutes with `iγ⁰`, so `Oᵀ(p, x) = N(p)·rotor(p·x)`.
//!
//! Positions are `x_i = −L/2 + i·dx`; momentum index `q` maps to
//! `k = q − n/2 ∈ [−n/2, n/2)` and `p = 2πk/L`.
//!
//! Grid modes carrying a Nyquist component (`k = −n/2`) alias onto a
//! partner whose non-Nyquist components are negated. For the discrete
//! transform to stay orthogonal the partner must carry exactly `−p`, so the
//! Nyquist components of such a mode take the sign `+n/2` whenever its
//! first non-Nyquist, nonzero component is negative. Modes equal to their
//! own partner (every component `0` or Nyquist) use `N = I`.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::clifford::MajoranaRep;
use crate::error::{MajoranaError, Result};
use crate::matrix::{RealMatrix4, Spinor4};

type C4 = [Complex64; 4];

/// `E_p = √(|p|² + m²)`.
pub fn energy(p: [f64; 3], m: f64) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + m * m).sqrt()
}

/// `e^{iγ⁰·angle} = cos(angle)·I + sin(angle)·iγ⁰`.
pub fn rotor(angle: f64) -> RealMatrix4 {
    let (s, c) = angle.sin_cos();
    RealMatrix4::identity() * c + MajoranaRep::canonical_ref().gamma[0] * s
}

fn apply_rotor(angle: f64, v: &Spinor4) -> Spinor4 {
    let (s, c) = angle.sin_cos();
    v * c + i_gamma0(v) * s
}

/// `iγ⁰·v` in the canonical basis.
fn i_gamma0(v: &Spinor4) -> Spinor4 {
    Spinor4::new(v[2], v[3], -v[0], -v[1])
}

fn p_dot_k(p: [f64; 3]) -> RealMatrix4 {
    let k = MajoranaRep::canonical_ref().boost_generators();
    k[0] * p[0] + k[1] * p[1] + k[2] * p[2]
}

/// `N(p) = (p̸γ⁰ + m) / √((E+m)·2E)`.
pub fn kernel_norm(p: [f64; 3], m: f64) -> Result<RealMatrix4> {
    let e = energy(p, m);
    if e + m < 1e-12 {
        return Err(MajoranaError::DegenerateKernel);
    }
    Ok((RealMatrix4::identity() * (e + m) + p_dot_k(p)) / ((e + m) * 2.0 * e).sqrt())
}

/// Continuum kernel `O(p, x) = rotor(−p·x)·N(p)`.
pub fn kernel_o(p: [f64; 3], x: [f64; 3], m: f64) -> Result<RealMatrix4> {
    let px = p[0] * x[0] + p[1] * x[1] + p[2] * x[2];
    Ok(rotor(-px) * kernel_norm(p, m)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeKind {
    /// Ordinary mode, kernel normalizer `N(p)`.
    Regular,
    /// Its own alias partner; kernel normalizer `I`.
    SelfPaired,
    /// Massless `p = 0`: zeroed and flagged.
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CartesianGrid {
    /// Points per axis (even).
    pub n: usize,
    /// Box side length.
    pub length: f64,
}

impl CartesianGrid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 2 || n % 2 != 0 || !(length > 0.0) || !length.is_finite() {
            return Err(MajoranaError::InvalidGrid(format!("n = {n} (must be even ≥ 2), L = {length}")));
        }
        Ok(Self { n, length })
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn volume(&self) -> f64 {
        self.length.powi(3)
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -0.5 * self.length + i as f64 * self.dx()
    }

    /// Multi-index `(i, j, k)` of flat index, last axis fastest.
    pub fn unflatten(&self, idx: usize) -> [usize; 3] {
        let n = self.n;
        [idx / (n * n), (idx / n) % n, idx % n]
    }

    pub fn flatten(&self, a: [usize; 3]) -> usize {
        (a[0] * self.n + a[1]) * self.n + a[2]
    }

    pub fn position(&self, idx: usize) -> [f64; 3] {
        self.unflatten(idx).map(|i| self.coordinate(i))
    }

    /// Signed wave numbers `k ∈ [−n/2, n/2)` of momentum index `idx`.
    pub fn wave_numbers(&self, idx: usize) -> [i64; 3] {
        let h = (self.n / 2) as i64;
        self.unflatten(idx).map(|q| q as i64 - h)
    }

    /// Grid momentum `2πk/L` (before the Nyquist sign rule).
    pub fn grid_momentum(&self, idx: usize) -> [f64; 3] {
        let s = 2.0 * std::f64::consts::PI / self.length;
        self.wave_numbers(idx).map(|k| k as f64 * s)
    }

    /// Momentum carried by the kernel of mode `idx` and its kind.
    pub fn effective_momentum(&self, idx: usize, m: f64) -> ([f64; 3], ModeKind) {
        let h = (self.n / 2) as i64;
        let mut k = self.wave_numbers(idx);
        let nyq = k.map(|c| c == -h);
        let lead = k.iter().zip(nyq).find(|&(&c, q)| c != 0 && !q).map(|(&c, _)| c);
        let s = 2.0 * std::f64::consts::PI / self.length;
        match lead {
            None => {
                let p = k.map(|c| c as f64 * s);
                let kind = if m == 0.0 && k.iter().all(|&c| c == 0) {
                    ModeKind::Degenerate
                } else {
                    ModeKind::SelfPaired
                };
                (p, kind)
            }
            Some(first) => {
                if first < 0 {
                    for (c, q) in k.iter_mut().zip(nyq) {
                        if q {
                            *c = h;
                        }
                    }
                }
                (k.map(|c| c as f64 * s), ModeKind::Regular)
            }
        }
    }

    /// Kernel normalizer of mode `idx`: `N(p)`, `I`, or zero if degenerate.
    pub fn mode_norm(&self, idx: usize, m: f64) -> RealMatrix4 {
        let (p, kind) = self.effective_momentum(idx, m);
        match kind {
            ModeKind::Regular => kernel_norm(p, m).expect("regular modes are nondegenerate"),
            ModeKind::SelfPaired => RealMatrix4::identity(),
            ModeKind::Degenerate => RealMatrix4::zeros(),
        }
    }

    /// Discrete kernel `O(p_idx, x_pos) = rotor(−p·x)·N`.
    pub fn kernel(&self, mode: usize, pos: usize, m: f64) -> RealMatrix4 {
        rotor(-self.phase(mode, pos)) * self.mode_norm(mode, m)
    }

    /// `p·x` for grid mode and position, reduced exactly modulo `2π`.
    pub fn phase(&self, mode: usize, pos: usize) -> f64 {
        let k = self.wave_numbers(mode);
        let i = self.unflatten(pos);
        let n = self.n as i64;
        (0..3).map(|a| axis_angle(k[a], i[a] as i64, n)).sum()
    }

    pub fn mode_energy(&self, idx: usize, m: f64) -> f64 {
        energy(self.effective_momentum(idx, m).0, m)
    }
}

/// `2πk(−1/2 + i/n)` with the integer product reduced first.
fn axis_angle(k: i64, i: i64, n: i64) -> f64 {
    let r = (k * i).rem_euclid(n) as f64;
    2.0 * std::f64::consts::PI * r / n as f64 - std::f64::consts::PI * k as f64
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpinorField {
    pub grid: CartesianGrid,
    pub mass: f64,
    pub values: Vec<Spinor4>,
}

impl SpinorField {
    pub fn zeros(grid: CartesianGrid, mass: f64) -> Self {
        Self {
            grid,
            mass,
            values: vec![Spinor4::zeros(); grid.len()],
        }
    }

    pub fn from_fn(grid: CartesianGrid, mass: f64, f: impl Fn([f64; 3]) -> Spinor4 + Sync) -> Self {
        let values = (0..grid.len()).into_par_iter().map(|i| f(grid.position(i))).collect();
        Self { grid, mass, values }
    }

    /// `Σ_x |Ψ(x)|² dx³`.
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_squared()).sum::<f64>() * self.grid.dx().powi(3)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentumSpectrum {
    pub grid: CartesianGrid,
    pub mass: f64,
    pub values: Vec<Spinor4>,
    /// Modes zeroed because the kernel is degenerate there.
    pub skipped: Vec<usize>,
}

impl MomentumSpectrum {
    pub fn zeros(grid: CartesianGrid, mass: f64) -> Self {
        Self {
            grid,
            mass,
            values: vec![Spinor4::zeros(); grid.len()],
            skipped: degenerate_modes(&grid, mass),
        }
    }

    /// `Σ_p |ψ(p)|² / L³`, equal to the field norm².
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_squared()).sum::<f64>() / self.grid.volume()
    }

    /// `Σ_p E_p|ψ|² / Σ_p |ψ|²`.
    pub fn mean_energy(&self) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for (i, v) in self.values.iter().enumerate() {
            let w = v.norm_squared();
            num += self.grid.mode_energy(i, self.mass) * w;
            den += w;
        }
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }

    /// `Σ_p p|ψ|² / Σ_p |ψ|²` with effective momenta.
    pub fn mean_momentum(&self) -> [f64; 3] {
        let mut num = [0.0; 3];
        let mut den = 0.0;
        for (i, v) in self.values.iter().enumerate() {
            let w = v.norm_squared();
            let p = self.grid.effective_momentum(i, self.mass).0;
            for a in 0..3 {
                num[a] += p[a] * w;
            }
            den += w;
        }
        if den == 0.0 {
            [0.0; 3]
        } else {
            num.map(|x| x / den)
        }
    }
}

fn degenerate_modes(grid: &CartesianGrid, m: f64) -> Vec<usize> {
    if m == 0.0 {
        vec![grid.flatten([grid.n / 2; 3])]
    } else {
        Vec::new()
    }
}

/// Per-axis twiddles `e^{sign·i·2πk(−1/2 + i/n)}` indexed `[q][i]`.
fn twiddles(n: usize, sign: f64) -> Vec<Vec<Complex64>> {
    let h = (n / 2) as i64;
    (0..n)
        .map(|q| {
            (0..n)
                .map(|i| Complex64::from_polar(1.0, sign * axis_angle(q as i64 - h, i as i64, n as i64)))
                .collect()
        })
        .collect()
}

/// Separable transform `out[q] = Σ_i Π_a tw[q_a][i_a] · data[i]` over a
/// cube of side `n` with 4-component entries.
fn dft3(data: &[C4], n: usize, tw: &[Vec<Complex64>]) -> Vec<C4> {
    let mut cur = data.to_vec();
    for axis in 0..3 {
        let stride = n.pow(2 - axis as u32);
        let mut next = vec![[Complex64::new(0.0, 0.0); 4]; cur.len()];
        next.par_iter_mut().enumerate().for_each(|(idx, out)| {
                let q = (idx / stride) % n;
                let base = idx - q * stride;
                let mut acc = [Complex64::new(0.0, 0.0); 4];
                for (i, t) in tw[q].iter().enumerate() {
                    let v = &cur[base + i * stride];
                    for c in 0..4 {
                        acc[c] += t * v[c];
                    }
                }
                *out = acc;
            });
        cur = next;
    }
    cur
}

fn check_nonneg_mass(m: f64) -> Result<()> {
    if m < 0.0 || !m.is_finite() {
        return Err(MajoranaError::InvalidGrid(format!("mass {m} must be finite and ≥ 0")));
    }
    Ok(())
}

/// `ψ(p) = Σ_x O(p, x)·Ψ(x)·dx³`.
pub fn forward(field: &SpinorField) -> Result<MomentumSpectrum> {
    check_nonneg_mass(field.mass)?;
    let grid = field.grid;
    let n = grid.n;
    if field.values.len() != grid.len() {
        return Err(MajoranaError::ShapeMismatch("field length ≠ n³".into()));
    }
    let data: Vec<C4> = field.values.iter().map(|v| v.map(|x| Complex64::new(x, 0.0)).into()).collect();
    let z = dft3(&data, n, &twiddles(n, 1.0));
    let dv = grid.dx().powi(3);
    let m = field.mass;
    let values = z
        .par_iter()
        .enumerate()
        .map(|(idx, zc)| {
            let c = Spinor4::new(zc[0].re, zc[1].re, zc[2].re, zc[3].re);
            let s = Spinor4::new(zc[0].im, zc[1].im, zc[2].im, zc[3].im);
            let nm = grid.mode_norm(idx, m);
            // N = a·I + P·K with K traceless; rotor(−α)·K = K·rotor(α).
            let a = nm.trace() / 4.0;
            let pk = nm - RealMatrix4::identity() * a;
            (a * (c - i_gamma0(&s)) + pk * (c + i_gamma0(&s))) * dv
        })
        .collect();
    Ok(MomentumSpectrum {
        grid,
        mass: m,
        values,
        skipped: degenerate_modes(&grid, m),
    })
}

/// `Ψ(x) = (1/L³)·Σ_p Oᵀ(p, x)·ψ(p)`.
pub fn inverse(spec: &MomentumSpectrum) -> Result<SpinorField> {
    check_nonneg_mass(spec.mass)?;
    let grid = spec.grid;
    let n = grid.n;
    if spec.values.len() != grid.len() {
        return Err(MajoranaError::ShapeMismatch("spectrum length ≠ n³".into()));
    }
    let m = spec.mass;
    let data: Vec<C4> = spec
        .values
        .par_iter()
        .enumerate()
        .map(|(idx, psi)| {
            let nm = grid.mode_norm(idx, m);
            let a = nm.trace() / 4.0;
            let pk = nm - RealMatrix4::identity() * a;
            let u = psi * a + pk * psi;
            let v = i_gamma0(&(psi * a - pk * psi));
            [0, 1, 2, 3].map(|c| Complex64::new(u[c], v[c]))
        })
        .collect();
    let z = dft3(&data, n, &twiddles(n, -1.0));
    let inv_vol = 1.0 / grid.volume();
    let values = z
        .iter()
        .map(|zc| Spinor4::new(zc[0].re, zc[1].re, zc[2].re, zc[3].re) * inv_vol)
        .collect();
    Ok(SpinorField { grid, mass: m, values })
}

/// `ψ(p) ↦ rotor(−E_p·t)·ψ(p)`.
pub fn evolve(spec: &MomentumSpectrum, t: f64) -> MomentumSpectrum {
    let grid = spec.grid;
    let values = spec
        .values
        .par_iter()
        .enumerate()
        .map(|(idx, v)| apply_rotor(-grid.mode_energy(idx, spec.mass) * t, v))
        .collect();
    MomentumSpectrum {
        values,
        ..spec.clone()
    }
}

/// Complex Dirac matrix `γ^μ = −i·(iγ^μ)`.
pub fn dirac_gamma(mu: usize) -> Matrix4<Complex64> {
    let g = MajoranaRep::canonical_ref().gamma[mu];
    g.map(|x| Complex64::new(0.0, -x))
}

/// `(1 + sign·γ⁰)/2`.
pub fn particle_projector(sign: i32) -> Matrix4<Complex64> {
    let id = Matrix4::<Complex64>::identity();
    (id + dirac_gamma(0) * Complex64::new(sign as f64, 0.0)) * Complex64::new(0.5, 0.0)
}

pub fn complexify(v: &Spinor4) -> nalgebra::Vector4<Complex64> {
    v.map(|x| Complex64::new(x, 0.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexSpectrum {
    pub grid: CartesianGrid,
    pub mass: f64,
    pub values: Vec<nalgebra::Vector4<Complex64>>,
}

/// Applies `(1 ± γ⁰)/2` to every mode. The result is complex: `γ⁰` is
/// imaginary in a Majorana basis.
pub fn project_particle(spec: &MomentumSpectrum, sign: i32) -> ComplexSpectrum {
    let p = particle_projector(sign);
    ComplexSpectrum {
        grid: spec.grid,
        mass: spec.mass,
        values: spec.values.iter().map(|v| p * complexify(v)).collect(),
    }
}

/// Single-mode solution `N(p)·rotor(p·x − E_p·t)·ψ / L³` acting on a complex
/// mode amplitude.
pub fn mode_solution(grid: &CartesianGrid, mode: usize, pos: usize, t: f64, m: f64, psi: &Vector4<Complex64>) -> Vector4<Complex64> {
    let angle = grid.phase(mode, pos) - grid.mode_energy(mode, m) * t;
    let k = (grid.mode_norm(mode, m) * rotor(angle)).map(|x| Complex64::new(x, 0.0));
    k * psi / Complex64::new(grid.volume(), 0.0)
}

/// [`mode_solution`] with `iγ⁰` replaced by the scalar `sign·i` in the
/// phase: `N(p)·e^{sign·i(p·x − E_p·t)}·ψ / L³`. Agrees with the rotor form
/// on the range of `(1 + sign·γ⁰)/2`.
pub fn phase_substituted_solution(
    grid: &CartesianGrid,
    mode: usize,
    pos: usize,
    t: f64,
    m: f64,
    psi: &Vector4<Complex64>,
    sign: i32,
) -> Vector4<Complex64> {
    let angle = grid.phase(mode, pos) - grid.mode_energy(mode, m) * t;
    let phase = Complex64::from_polar(1.0, sign as f64 * angle);
    let n = grid.mode_norm(mode, m).map(|x| Complex64::new(x, 0.0));
    n * psi * phase / Complex64::new(grid.volume(), 0.0)
}

/// `(iγ⁰∂ₜ + iγʲ∂ⱼ − m)Ψ` at the middle time by centered differences,
/// periodic in space.
pub fn dirac_residual(prev: &SpinorField, cur: &SpinorField, next: &SpinorField, dt: f64) -> Vec<Spinor4> {
    let grid = cur.grid;
    let n = grid.n;
    let h = grid.dx();
    let g = &MajoranaRep::canonical_ref().gamma;
    (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let a = grid.unflatten(idx);
            let mut r = g[0] * ((next.values[idx] - prev.values[idx]) / (2.0 * dt)) - cur.values[idx] * cur.mass;
            for axis in 0..3 {
                let mut up = a;
                let mut dn = a;
                up[axis] = (a[axis] + 1) % n;
                dn[axis] = (a[axis] + n - 1) % n;
                let d = (cur.values[grid.flatten(up)] - cur.values[grid.flatten(dn)]) / (2.0 * h);
                r += g[axis + 1] * d;
            }
            r
        })
        .collect()
}

/// Periodic space-time grid: `nt` time samples over `lt`, spatial cube.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpacetimeGrid {
    pub nt: usize,
    pub lt: f64,
    pub space: CartesianGrid,
}

impl SpacetimeGrid {
    pub fn new(nt: usize, lt: f64, space: CartesianGrid) -> Result<Self> {
        if nt < 2 || nt % 2 != 0 || !(lt > 0.0) || !lt.is_finite() {
            return Err(MajoranaError::InvalidGrid(format!("nt = {nt}, L⁰ = {lt}")));
        }
        Ok(Self { nt, lt, space })
    }

    pub fn dt(&self) -> f64 {
        self.lt / self.nt as f64
    }

    pub fn len(&self) -> usize {
        self.nt * self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, i: usize) -> f64 {
        -0.5 * self.lt + i as f64 * self.dt()
    }

    /// `p⁰ = 2πk/L⁰`, `k = q − nt/2`.
    pub fn frequency(&self, q: usize) -> f64 {
        2.0 * std::f64::consts::PI * (q as f64 - (self.nt / 2) as f64) / self.lt
    }

    /// `p⁰·x⁰` reduced exactly modulo `2π`.
    pub fn time_phase(&self, q: usize, i: usize) -> f64 {
        axis_angle(q as i64 - (self.nt / 2) as i64, i as i64, self.nt as i64)
    }
}

/// Values indexed `[time or frequency][spatial point or mode]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpacetimeData {
    pub grid: SpacetimeGrid,
    pub mass: f64,
    pub values: Vec<Spinor4>,
}

/// `ψ(p⁰, p) = Σ_{x⁰} rotor(p⁰x⁰)·[Σ_x O(p, x)Ψ(x⁰, x)dx³]·dx⁰`.
pub fn spacetime_forward(field: &SpacetimeData) -> Result<SpacetimeData> {
    let g = field.grid;
    let ns = g.space.len();
    let mut spatial = Vec::with_capacity(g.len());
    for t in 0..g.nt {
        let slice = SpinorField {
            grid: g.space,
            mass: field.mass,
            values: field.values[t * ns..(t + 1) * ns].to_vec(),
        };
        spatial.extend(forward(&slice)?.values);
    }
    Ok(SpacetimeData {
        grid: g,
        mass: field.mass,
        values: time_transform(&g, &spatial, 1.0, g.dt()),
    })
}

/// `Ψ(x⁰, x) = (1/(L⁰L³))·Σ_p Oᵀ(p, x)·ψ(p)`.
pub fn spacetime_inverse(spec: &SpacetimeData) -> Result<SpacetimeData> {
    let g = spec.grid;
    let ns = g.space.len();
    let timed = time_transform(&g, &spec.values, -1.0, 1.0 / g.lt);
    let mut out = Vec::with_capacity(g.len());
    for t in 0..g.nt {
        let s = MomentumSpectrum {
            grid: g.space,
            mass: spec.mass,
            values: timed[t * ns..(t + 1) * ns].to_vec(),
            skipped: Vec::new(),
        };
        out.extend(inverse(&s)?.values);
    }
    Ok(SpacetimeData {
        grid: g,
        mass: spec.mass,
        values: out,
    })
}

/// `out[q][s] = w·Σ_i rotor(sign·p⁰_q·x⁰_i)·data[i][s]`.
fn time_transform(g: &SpacetimeGrid, data: &[Spinor4], sign: f64, w: f64) -> Vec<Spinor4> {
    let ns = g.space.len();
    let mut out = vec![Spinor4::zeros(); g.len()];
    out.par_chunks_mut(ns).enumerate().for_each(|(q, row)| {
        for i in 0..g.nt {
            let (s, c) = (sign * g.time_phase(q, i)).sin_cos();
            let src = &data[i * ns..(i + 1) * ns];
            for (o, v) in row.iter_mut().zip(src) {
                *o += (v * c + i_gamma0(v) * s) * w;
            }
        }
    });
    out
}
