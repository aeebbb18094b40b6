//! Hankel-Majorana transform on a spherical grid.
//!
//! Kernel
//! `Λ = (p·j_l + (E−m)·j_{l−1}·iγʳ)·Ω_lμ·P₊ + (p·j_{l−1} − (E−m)·j_l·iγʳ)·Ω_lμ·P₋`
//! with `j = j(pr)` and `P± = (1 ± σ³)/2`. Forward integrates `Λᵀ Ψ` with
//! weights `r²dr · d(cosθ) · dφ`; the inverse sums `Λ ψ` with weights
//! `Δp·(E+m)/(E·π)`.
//!
//! Radial nodes `r_i = i·dr`, `i = 1..=nr`, `dr = rmax/nr`. Momentum nodes sit
//! at cell midpoints `p_k = (k − ½)·Δp`, `k = 1..=np`, `Δp = p_max/np`,
//! default `p_max = π·nr/rmax`.

use rayon::prelude::*;

use crate::error::{MajoranaError, Result};
use crate::fourier::energy;
use crate::harmonics::{gamma_r, modes_up_to, omega_matrix, spin_down, spin_up, AngularGrid, AngularMode};
use crate::matrix::{RealMatrix4, Spinor4};
use crate::special::{spherical_bessel_array, spherical_bessel_derivative};

/// Fraction of the norm² allowed beyond `0.9·rmax` before a warning.
pub const TAIL_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct RadialGrid {
    pub nr: usize,
    pub rmax: f64,
    pub r: Vec<f64>,
    /// `r²·dr`.
    pub w: Vec<f64>,
}

impl RadialGrid {
    pub fn new(nr: usize, rmax: f64) -> Result<Self> {
        if nr == 0 || !(rmax > 0.0) || !rmax.is_finite() {
            return Err(MajoranaError::InvalidGrid(format!("nr = {nr}, rmax = {rmax}")));
        }
        let dr = rmax / nr as f64;
        let r: Vec<f64> = (1..=nr).map(|i| i as f64 * dr).collect();
        let w = r.iter().map(|x| x * x * dr).collect();
        Ok(Self { nr, rmax, r, w })
    }

    pub fn dr(&self) -> f64 {
        self.rmax / self.nr as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphericalGrid {
    pub radial: RadialGrid,
    pub angular: AngularGrid,
}

impl SphericalGrid {
    pub fn new(nr: usize, rmax: f64, ntheta: usize, nphi: usize) -> Result<Self> {
        Ok(Self {
            radial: RadialGrid::new(nr, rmax)?,
            angular: AngularGrid::new(ntheta, nphi)?,
        })
    }

    pub fn len(&self) -> usize {
        self.radial.nr * self.angular.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat index: radius slowest, then θ, then φ.
    pub fn index(&self, ir: usize, iang: usize) -> usize {
        ir * self.angular.len() + iang
    }

    pub fn weight(&self, ir: usize, iang: usize) -> f64 {
        let na = self.angular.nphi;
        self.radial.w[ir] * self.angular.weight(iang / na, iang % na)
    }

    /// `(r, θ, φ)` of a flat index.
    pub fn coords(&self, idx: usize) -> (f64, f64, f64) {
        let na = self.angular.len();
        let (ir, ia) = (idx / na, idx % na);
        let np = self.angular.nphi;
        (self.radial.r[ir], self.angular.theta[ia / np], self.angular.phi[ia % np])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphericalField {
    pub grid: SphericalGrid,
    pub mass: f64,
    pub values: Vec<Spinor4>,
}

impl SphericalField {
    pub fn zeros(grid: SphericalGrid, mass: f64) -> Self {
        let n = grid.len();
        Self {
            grid,
            mass,
            values: vec![Spinor4::zeros(); n],
        }
    }

    pub fn from_fn(grid: SphericalGrid, mass: f64, f: impl Fn(f64, f64, f64) -> Spinor4 + Sync) -> Self {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let (r, t, p) = grid.coords(i);
                f(r, t, p)
            })
            .collect();
        Self { grid, mass, values }
    }

    /// `⟨Φ, Ψ⟩ = Σ w·ΦᵀΨ`.
    pub fn inner(&self, other: &SphericalField) -> f64 {
        (0..self.grid.len())
            .map(|i| {
                let na = self.grid.angular.len();
                self.grid.weight(i / na, i % na) * self.values[i].dot(&other.values[i])
            })
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.inner(self)
    }

    /// Fraction of the norm² at `r > 0.9·rmax`.
    pub fn tail_fraction(&self) -> f64 {
        let total = self.norm_sqr();
        if total == 0.0 {
            return 0.0;
        }
        let na = self.grid.angular.len();
        let cut = 0.9 * self.grid.radial.rmax;
        let tail: f64 = (0..self.grid.len())
            .filter(|i| self.grid.radial.r[i / na] > cut)
            .map(|i| self.grid.weight(i / na, i % na) * self.values[i].norm_squared())
            .sum();
        tail / total
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentumNodes {
    pub p: Vec<f64>,
    pub dp: f64,
}

impl MomentumNodes {
    /// `np` cell midpoints on `(0, pmax]`.
    pub fn midpoints(np: usize, pmax: f64) -> Result<Self> {
        if np == 0 || !(pmax > 0.0) || !pmax.is_finite() {
            return Err(MajoranaError::InvalidGrid(format!("np = {np}, pmax = {pmax}")));
        }
        let dp = pmax / np as f64;
        Ok(Self {
            p: (1..=np).map(|k| (k as f64 - 0.5) * dp).collect(),
            dp,
        })
    }

    /// Midpoints up to the radial Nyquist bound `π·nr/rmax`.
    pub fn for_radial(radial: &RadialGrid, np: usize) -> Result<Self> {
        Self::midpoints(np, std::f64::consts::PI * radial.nr as f64 / radial.rmax)
    }

    /// Inverse-transform weight `Δp·(E+m)/(E·π)` of node `k`.
    pub fn weight(&self, k: usize, m: f64) -> f64 {
        let e = energy([self.p[k], 0.0, 0.0], m);
        self.dp * (e + m) / (e * std::f64::consts::PI)
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HankelSpectrum {
    pub nodes: MomentumNodes,
    pub mass: f64,
    pub lmax: i32,
    pub modes: Vec<AngularMode>,
    /// Indexed `[mode][k]` flattened as `mode·np + k`.
    pub coeffs: Vec<Spinor4>,
}

impl HankelSpectrum {
    pub fn zeros(nodes: MomentumNodes, mass: f64, lmax: i32) -> Self {
        let modes = modes_up_to(lmax);
        let n = modes.len() * nodes.len();
        Self {
            nodes,
            mass,
            lmax,
            modes,
            coeffs: vec![Spinor4::zeros(); n],
        }
    }

    pub fn mode_index(&self, mode: AngularMode) -> Option<usize> {
        self.modes.iter().position(|&m| m == mode)
    }

    pub fn get(&self, mode: usize, k: usize) -> &Spinor4 {
        &self.coeffs[mode * self.nodes.len() + k]
    }

    pub fn get_mut(&mut self, mode: usize, k: usize) -> &mut Spinor4 {
        let np = self.nodes.len();
        &mut self.coeffs[mode * np + k]
    }

    /// `Σ_k c_k |ψ_k|²` for one mode.
    pub fn mode_norm_sqr(&self, mode: usize) -> f64 {
        (0..self.nodes.len())
            .map(|k| self.nodes.weight(k, self.mass) * self.get(mode, k).norm_squared())
            .sum()
    }
}

/// `Λ(p, l, μ, r, θ, φ)`.
pub fn hankel_kernel(p: f64, mode: AngularMode, r: f64, theta: f64, phi: f64, m: f64) -> RealMatrix4 {
    let l = mode.l as usize;
    let j = spherical_bessel_array(l, p * r);
    kernel_from_radial(p, m, j[l], j[l - 1], &omega_matrix(mode, theta, phi), &gamma_r(theta, phi))
}

/// `∂_r Λ(p, l, μ, r, θ, φ)`.
pub fn hankel_kernel_dr(p: f64, mode: AngularMode, r: f64, theta: f64, phi: f64, m: f64) -> RealMatrix4 {
    let l = mode.l as usize;
    let x = p * r;
    let dl = p * spherical_bessel_derivative(l, x);
    let dlm = p * spherical_bessel_derivative(l - 1, x);
    kernel_from_radial(p, m, dl, dlm, &omega_matrix(mode, theta, phi), &gamma_r(theta, phi))
}

fn kernel_from_radial(p: f64, m: f64, jl: f64, jlm: f64, omega: &RealMatrix4, g: &RealMatrix4) -> RealMatrix4 {
    let em = energy([p, 0.0, 0.0], m) - m;
    let id = RealMatrix4::identity();
    (id * (p * jl) + g * (em * jlm)) * omega * spin_up() + (id * (p * jlm) - g * (em * jl)) * omega * spin_down()
}

/// Precomputed angular and radial tables shared by both directions.
struct Tables {
    /// `Ω_lμ` at each angular node, `[mode][iang]`.
    omega: Vec<Vec<RealMatrix4>>,
    /// `iγʳ` at each angular node.
    gr: Vec<RealMatrix4>,
    /// `j_l(p_k r_i)` indexed `[l][k][i]`.
    bessel: Vec<Vec<Vec<f64>>>,
}

impl Tables {
    fn new(grid: &SphericalGrid, nodes: &MomentumNodes, modes: &[AngularMode], lmax: i32) -> Self {
        let ang = &grid.angular;
        let omega = modes
            .par_iter()
            .map(|&md| ang.nodes().map(|(_, t, p, _)| omega_matrix(md, t, p)).collect())
            .collect();
        let gr = ang.nodes().map(|(_, t, p, _)| gamma_r(t, p)).collect();
        let lmax = lmax.max(0) as usize;
        let rows: Vec<Vec<Vec<f64>>> = nodes
            .p
            .par_iter()
            .map(|&p| grid.radial.r.iter().map(|&r| spherical_bessel_array(lmax, p * r)).collect())
            .collect();
        let bessel = (0..=lmax)
            .map(|l| rows.iter().map(|row| row.iter().map(|js| js[l]).collect()).collect())
            .collect();
        Self { omega, gr, bessel }
    }
}

#[derive(Clone, Debug)]
pub struct ForwardOutput {
    pub spectrum: HankelSpectrum,
    pub tail_fraction: f64,
    /// Set when the tail mass exceeds [`TAIL_TOL`].
    pub tail_warning: bool,
}

/// `ψ(p, l, μ) = Σ r²dr·d(cosθ)·dφ·Λᵀ(p, l, μ, r, θ, φ)·Ψ(r, θ, φ)`.
pub fn forward_hankel(field: &SphericalField, lmax: i32, nodes: &MomentumNodes) -> Result<ForwardOutput> {
    if lmax < 1 {
        return Err(MajoranaError::IndexOutOfRange(format!("lmax = {lmax} (need ≥ 1)")));
    }
    let grid = &field.grid;
    if field.values.len() != grid.len() {
        return Err(MajoranaError::ShapeMismatch("field length ≠ grid size".into()));
    }
    let modes = modes_up_to(lmax);
    let tab = Tables::new(grid, nodes, &modes, lmax);
    let m = field.mass;
    let na = grid.angular.len();
    let aw: Vec<f64> = grid.angular.nodes().map(|n| n.3).collect();
    let (up, down) = (spin_up(), spin_down());
    let per_mode: Vec<Vec<Spinor4>> = modes
        .par_iter()
        .enumerate()
        .map(|(mi, md)| {
            let l = md.l as usize;
            // Angular projections per shell, already carrying r²dr.
            let (a1, a2): (Vec<Spinor4>, Vec<Spinor4>) = (0..grid.radial.nr)
                .map(|ir| {
                    let mut s1 = Spinor4::zeros();
                    let mut s2 = Spinor4::zeros();
                    for ia in 0..na {
                        let v = &field.values[ir * na + ia];
                        let ot = tab.omega[mi][ia].transpose();
                        s1 += ot * v * aw[ia];
                        s2 += ot * (tab.gr[ia] * v) * aw[ia];
                    }
                    (s1 * grid.radial.w[ir], s2 * grid.radial.w[ir])
                })
                .unzip();
            (0..nodes.len())
                .map(|k| {
                    let p = nodes.p[k];
                    let em = energy([p, 0.0, 0.0], m) - m;
                    let (jl, jlm) = (&tab.bessel[l][k], &tab.bessel[l - 1][k]);
                    let mut plus = Spinor4::zeros();
                    let mut minus = Spinor4::zeros();
                    for ir in 0..grid.radial.nr {
                        plus += a1[ir] * (p * jl[ir]) + a2[ir] * (em * jlm[ir]);
                        minus += a1[ir] * (p * jlm[ir]) - a2[ir] * (em * jl[ir]);
                    }
                    up * plus + down * minus
                })
                .collect()
        })
        .collect();
    let spectrum = HankelSpectrum {
        nodes: nodes.clone(),
        mass: m,
        lmax,
        modes,
        coeffs: per_mode.into_iter().flatten().collect(),
    };
    let tail_fraction = field.tail_fraction();
    Ok(ForwardOutput {
        spectrum,
        tail_fraction,
        tail_warning: tail_fraction > TAIL_TOL,
    })
}

/// `Ψ′(r, θ, φ) = Σ_{l,μ} Σ_k Δp·(E+m)/(E·π)·Λ(p_k, l, μ, r, θ, φ)·ψ(p_k, l, μ)`.
pub fn inverse_hankel(spec: &HankelSpectrum, grid: &SphericalGrid) -> SphericalField {
    let tab = Tables::new(grid, &spec.nodes, &spec.modes, spec.lmax);
    let m = spec.mass;
    let np = spec.nodes.len();
    let na = grid.angular.len();
    let (up, down) = (spin_up(), spin_down());
    // Radial profiles B1, B2 per (mode, shell).
    let profiles: Vec<Vec<(Spinor4, Spinor4)>> = spec
        .modes
        .par_iter()
        .enumerate()
        .map(|(mi, md)| {
            let l = md.l as usize;
            let pre: Vec<(Spinor4, Spinor4, f64, f64)> = (0..np)
                .map(|k| {
                    let p = spec.nodes.p[k];
                    let c = spec.nodes.weight(k, m);
                    let em = energy([p, 0.0, 0.0], m) - m;
                    let psi = spec.get(mi, k);
                    (up * psi, down * psi, c * p, c * em)
                })
                .collect();
            (0..grid.radial.nr)
                .map(|ir| {
                    let mut b1 = Spinor4::zeros();
                    let mut b2 = Spinor4::zeros();
                    for (k, (pu, pd, cp, ce)) in pre.iter().enumerate() {
                        let jl = tab.bessel[l][k][ir];
                        let jlm = tab.bessel[l - 1][k][ir];
                        b1 += pu * (cp * jl) + pd * (cp * jlm);
                        b2 += pu * (ce * jlm) - pd * (ce * jl);
                    }
                    (b1, b2)
                })
                .collect()
        })
        .collect();
    let mut values = vec![Spinor4::zeros(); grid.len()];
    values.par_chunks_mut(na).enumerate().for_each(|(ir, shell)| {
        for (mi, prof) in profiles.iter().enumerate() {
            let (b1, b2) = prof[ir];
            for (ia, out) in shell.iter_mut().enumerate() {
                let o = &tab.omega[mi][ia];
                *out += o * b1 + tab.gr[ia] * (o * b2);
            }
        }
    });
    SphericalField {
        grid: grid.clone(),
        mass: m,
        values,
    }
}

/// `ψ ↦ rotor(−E_p·t)·ψ` per node.
pub fn evolve_hankel(spec: &HankelSpectrum, t: f64) -> HankelSpectrum {
    let np = spec.nodes.len();
    let coeffs = spec
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, v)| crate::fourier::rotor(-energy([spec.nodes.p[i % np], 0.0, 0.0], spec.mass) * t) * v)
        .collect();
    HankelSpectrum {
        coeffs,
        ..spec.clone()
    }
}

/// Time samples `x⁰_i = −L⁰/2 + i·L⁰/nt` and frequencies `p⁰_q = 2π(q − nt/2)/L⁰`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    pub nt: usize,
    pub lt: f64,
}

impl TimeGrid {
    pub fn new(nt: usize, lt: f64) -> Result<Self> {
        if nt < 2 || nt % 2 != 0 || !(lt > 0.0) || !lt.is_finite() {
            return Err(MajoranaError::InvalidGrid(format!("nt = {nt}, L⁰ = {lt}")));
        }
        Ok(Self { nt, lt })
    }

    pub fn dt(&self) -> f64 {
        self.lt / self.nt as f64
    }

    pub fn time(&self, i: usize) -> f64 {
        -0.5 * self.lt + i as f64 * self.dt()
    }

    pub fn frequency(&self, q: usize) -> f64 {
        2.0 * std::f64::consts::PI * (q as f64 - (self.nt / 2) as f64) / self.lt
    }

    /// `p⁰_q·x⁰_i` reduced exactly modulo `2π`.
    pub fn phase(&self, q: usize, i: usize) -> f64 {
        let n = self.nt as i64;
        let k = q as i64 - n / 2;
        let r = (k * i as i64).rem_euclid(n) as f64;
        2.0 * std::f64::consts::PI * r / n as f64 - std::f64::consts::PI * k as f64
    }
}

/// `ψ′(p⁰, ·) = Σ_i rotor(p⁰x⁰_i)·ψ(x⁰_i, ·)·dx⁰` over time samples of
/// spectra.
pub fn time_rotor_forward(tg: &TimeGrid, samples: &[HankelSpectrum]) -> Vec<HankelSpectrum> {
    time_rotor(tg, samples, 1.0, tg.dt())
}

/// Inverse of [`time_rotor_forward`], weight `1/L⁰`.
pub fn time_rotor_inverse(tg: &TimeGrid, spectra: &[HankelSpectrum]) -> Vec<HankelSpectrum> {
    time_rotor(tg, spectra, -1.0, 1.0 / tg.lt)
}

fn time_rotor(tg: &TimeGrid, data: &[HankelSpectrum], sign: f64, w: f64) -> Vec<HankelSpectrum> {
    (0..tg.nt)
        .map(|q| {
            let mut out = data[0].clone();
            for (o, idx) in out.coeffs.iter_mut().zip(0..) {
                let mut acc = Spinor4::zeros();
                for (i, d) in data.iter().enumerate() {
                    acc += crate::fourier::rotor(sign * tg.phase(q, i)) * d.coeffs[idx];
                }
                *o = acc * w;
            }
            out
        })
        .collect()
}

/// Space-time forward transform of time-sampled fields.
pub fn spacetime_hankel_forward(
    tg: &TimeGrid,
    fields: &[SphericalField],
    lmax: i32,
    nodes: &MomentumNodes,
) -> Result<Vec<HankelSpectrum>> {
    if fields.len() != tg.nt {
        return Err(MajoranaError::ShapeMismatch(format!("{} time samples for nt = {}", fields.len(), tg.nt)));
    }
    let spatial = fields
        .iter()
        .map(|f| forward_hankel(f, lmax, nodes).map(|o| o.spectrum))
        .collect::<Result<Vec<_>>>()?;
    Ok(time_rotor_forward(tg, &spatial))
}

/// Space-time inverse transform back to time-sampled fields.
pub fn spacetime_hankel_inverse(tg: &TimeGrid, spectra: &[HankelSpectrum], grid: &SphericalGrid) -> Vec<SphericalField> {
    time_rotor_inverse(tg, spectra).iter().map(|s| inverse_hankel(s, grid)).collect()
}
