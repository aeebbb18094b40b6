//! Majorana spherical harmonics `Y_lm`, spin operators, the spherical
//! matrices `Ω_lμ`, and angular-momentum operators on a Gauss–Legendre ×
//! uniform-φ grid.
//!
//! `x = r(sinθ cosφ, sinθ sinφ, cosθ)`.

use std::f64::consts::PI;

use crate::clifford::MajoranaRep;
use crate::error::{MajoranaError, Result};
use crate::fourier::rotor;
use crate::matrix::{RealMatrix4, Spinor4};
use crate::special::{gauss_legendre, normalized_legendre, normalized_legendre_dtheta, normalized_legendre_table};

/// Gauss–Legendre in `cosθ`, uniform in `φ ∈ [−π, π)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AngularGrid {
    pub ntheta: usize,
    pub nphi: usize,
    pub cos_theta: Vec<f64>,
    pub theta: Vec<f64>,
    /// Gauss–Legendre weights in `cosθ`.
    pub w_theta: Vec<f64>,
    pub phi: Vec<f64>,
}

impl AngularGrid {
    pub fn new(ntheta: usize, nphi: usize) -> Result<Self> {
        if ntheta == 0 || nphi < 2 {
            return Err(MajoranaError::InvalidGrid(format!("angular grid ({ntheta}, {nphi})")));
        }
        let (x, w) = gauss_legendre(ntheta);
        let theta = x.iter().map(|c| c.acos()).collect();
        let phi = (0..nphi).map(|j| -PI + 2.0 * PI * j as f64 / nphi as f64).collect();
        Ok(Self {
            ntheta,
            nphi,
            cos_theta: x,
            theta,
            w_theta: w,
            phi,
        })
    }

    pub fn len(&self) -> usize {
        self.ntheta * self.nphi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat index, φ fastest.
    pub fn index(&self, it: usize, ip: usize) -> usize {
        it * self.nphi + ip
    }

    /// Quadrature weight of node `(it, ip)`; the weights sum to `4π`.
    pub fn weight(&self, it: usize, ip: usize) -> f64 {
        let _ = ip;
        self.w_theta[it] * 2.0 * PI / self.nphi as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = (usize, f64, f64, f64)> + '_ {
        (0..self.ntheta).flat_map(move |it| {
            (0..self.nphi).map(move |ip| (self.index(it, ip), self.theta[it], self.phi[ip], self.weight(it, ip)))
        })
    }

    /// Largest `l` whose products are integrated exactly in `θ`.
    pub fn band_limit(&self) -> usize {
        self.ntheta - 1
    }
}

fn check_lm(l: i32, m: i32) -> Result<()> {
    if l < 0 || m.abs() > l {
        Err(MajoranaError::IndexOutOfRange(format!("Y_lm with l={l}, m={m}")))
    } else {
        Ok(())
    }
}

/// Scalar parts `(Y^c, Y^s) = N_lm P_l^m(cosθ)·(cos mφ, sin mφ)`.
pub fn y_parts(l: i32, m: i32, theta: f64, phi: f64) -> Result<(f64, f64)> {
    check_lm(l, m)?;
    let q = normalized_legendre(l, m, theta.cos());
    let a = m as f64 * phi;
    Ok((q * a.cos(), q * a.sin()))
}

/// `Y_lm = Y^c + iγ⁰Y^s = N_lm P_l^m(cosθ)·rotor(mφ)`.
pub fn majorana_y(l: i32, m: i32, theta: f64, phi: f64) -> Result<RealMatrix4> {
    check_lm(l, m)?;
    Ok(rotor(m as f64 * phi) * normalized_legendre(l, m, theta.cos()))
}

/// `Y_lm`, or the zero matrix when `(l, m)` is out of range.
fn y_or_zero(l: i32, m: i32, theta: f64, phi: f64) -> RealMatrix4 {
    majorana_y(l, m, theta, phi).unwrap_or_else(|_| RealMatrix4::zeros())
}

/// `σᵏ = γᵏγ⁵`, `k = 1, 2, 3` at indices `0, 1, 2`.
pub fn sigma() -> [RealMatrix4; 3] {
    MajoranaRep::canonical_ref().sigma()
}

pub fn unit_radial(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// `σʳ = x̂ₖσᵏ`.
pub fn sigma_r(theta: f64, phi: f64) -> RealMatrix4 {
    let n = unit_radial(theta, phi);
    let s = sigma();
    s[0] * n[0] + s[1] * n[1] + s[2] * n[2]
}

/// `iγʳ = x̂ₖiγᵏ`; symmetric, squares to `+I`.
pub fn gamma_r(theta: f64, phi: f64) -> RealMatrix4 {
    let n = unit_radial(theta, phi);
    let g = &MajoranaRep::canonical_ref().gamma;
    g[1] * n[0] + g[2] * n[1] + g[3] * n[2]
}

/// `(1 + σ³)/2`.
pub fn spin_up() -> RealMatrix4 {
    (RealMatrix4::identity() + sigma()[2]) * 0.5
}

/// `(1 − σ³)/2`.
pub fn spin_down() -> RealMatrix4 {
    (RealMatrix4::identity() - sigma()[2]) * 0.5
}

/// Index pair of a Majorana spherical matrix, `l ≥ 1`, `−l ≤ μ ≤ l − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AngularMode {
    pub l: i32,
    pub mu: i32,
}

impl AngularMode {
    pub fn new(l: i32, mu: i32) -> Result<Self> {
        if l < 1 || mu < -l || mu > l - 1 {
            return Err(MajoranaError::IndexOutOfRange(format!("Ω with l={l}, μ={mu}")));
        }
        Ok(Self { l, mu })
    }

    /// The mode `(l, −μ−1)` reached by `iγʳ`.
    pub fn partner(self) -> Self {
        Self {
            l: self.l,
            mu: -self.mu - 1,
        }
    }
}

/// All modes with `1 ≤ l ≤ lmax`, ordered by `l` then `μ`.
pub fn modes_up_to(lmax: i32) -> Vec<AngularMode> {
    (1..=lmax)
        .flat_map(|l| (-l..l).map(move |mu| AngularMode { l, mu }))
        .collect()
}

/// `Ω_lμ(θ, φ)`.
pub fn omega_matrix(mode: AngularMode, theta: f64, phi: f64) -> RealMatrix4 {
    let AngularMode { l, mu } = mode;
    let (lf, mf) = (l as f64, mu as f64);
    let s1 = sigma()[0];
    let up = (y_or_zero(l, mu, theta, phi) * -((lf - mf) / (2.0 * lf + 1.0)).sqrt()
        + y_or_zero(l, mu + 1, theta, phi) * s1 * ((lf + mf + 1.0) / (2.0 * lf + 1.0)).sqrt())
        * spin_up();
    let down = (y_or_zero(l - 1, mu, theta, phi) * s1 * ((lf + mf).max(0.0) / (2.0 * lf - 1.0)).sqrt()
        + y_or_zero(l - 1, mu + 1, theta, phi) * ((lf - mf - 1.0).max(0.0) / (2.0 * lf - 1.0)).sqrt())
        * spin_down();
    up + down
}

/// Scalar spherical-harmonic analysis/synthesis on an [`AngularGrid`], used
/// to differentiate band-limited functions exactly in both angles.
#[derive(Clone, Debug)]
pub struct AngularDerivative {
    grid: AngularGrid,
    lmax: usize,
    mmax: usize,
    /// `Q_l^m(cosθ_i)` indexed `[i][l][m]`.
    q: Vec<Vec<Vec<f64>>>,
    /// `∂θ Q_l^m(cosθ_i)` indexed `[i][l][m]`.
    dq: Vec<Vec<Vec<f64>>>,
    cos_mphi: Vec<Vec<f64>>,
    sin_mphi: Vec<Vec<f64>>,
}

impl AngularDerivative {
    pub fn new(grid: &AngularGrid) -> Self {
        let lmax = grid.band_limit();
        let mmax = lmax.min((grid.nphi - 1) / 2);
        let q: Vec<_> = grid.cos_theta.iter().map(|&x| normalized_legendre_table(lmax, x)).collect();
        let dq = q.iter().map(|t| normalized_legendre_dtheta(t)).collect();
        let cos_mphi = (0..=mmax).map(|m| grid.phi.iter().map(|p| (m as f64 * p).cos()).collect()).collect();
        let sin_mphi = (0..=mmax).map(|m| grid.phi.iter().map(|p| (m as f64 * p).sin()).collect()).collect();
        Self {
            grid: grid.clone(),
            lmax,
            mmax,
            q,
            dq,
            cos_mphi,
            sin_mphi,
        }
    }

    pub fn grid(&self) -> &AngularGrid {
        &self.grid
    }

    /// `(∂θ f, ∂φ f)` at the grid nodes for scalar samples `f`.
    pub fn gradient(&self, f: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let g = &self.grid;
        let (nt, np) = (g.ntheta, g.nphi);
        // Ring Fourier coefficients A_m(θ_i), B_m(θ_i).
        let mut a = vec![vec![0.0; self.mmax + 1]; nt];
        let mut b = vec![vec![0.0; self.mmax + 1]; nt];
        for it in 0..nt {
            let row = &f[it * np..(it + 1) * np];
            for m in 0..=self.mmax {
                let scale = if m == 0 { 1.0 } else { 2.0 } / np as f64;
                a[it][m] = scale * row.iter().zip(&self.cos_mphi[m]).map(|(x, c)| x * c).sum::<f64>();
                b[it][m] = scale * row.iter().zip(&self.sin_mphi[m]).map(|(x, s)| x * s).sum::<f64>();
            }
        }
        // Legendre analysis and θ-derivative synthesis per m.
        let mut da = vec![vec![0.0; self.mmax + 1]; nt];
        let mut db = vec![vec![0.0; self.mmax + 1]; nt];
        for m in 0..=self.mmax {
            for l in m..=self.lmax {
                let mut ca = 0.0;
                let mut cb = 0.0;
                for it in 0..nt {
                    let w = 2.0 * PI * g.w_theta[it] * self.q[it][l][m];
                    ca += w * a[it][m];
                    cb += w * b[it][m];
                }
                for it in 0..nt {
                    da[it][m] += ca * self.dq[it][l][m];
                    db[it][m] += cb * self.dq[it][l][m];
                }
            }
        }
        let mut dtheta = vec![0.0; nt * np];
        let mut dphi = vec![0.0; nt * np];
        for it in 0..nt {
            for ip in 0..np {
                let mut t = 0.0;
                let mut p = 0.0;
                for m in 0..=self.mmax {
                    let (c, s) = (self.cos_mphi[m][ip], self.sin_mphi[m][ip]);
                    t += da[it][m] * c + db[it][m] * s;
                    p += m as f64 * (b[it][m] * c - a[it][m] * s);
                }
                dtheta[it * np + ip] = t;
                dphi[it * np + ip] = p;
            }
        }
        (dtheta, dphi)
    }

    /// `(x × ∇)_k f` for `k = 0, 1, 2` (x, y, z).
    pub fn x_cross_grad(&self, k: usize, f: &[f64]) -> Vec<f64> {
        let (dt, dp) = self.gradient(f);
        let g = &self.grid;
        let mut out = vec![0.0; f.len()];
        for it in 0..g.ntheta {
            let cot = g.theta[it].cos() / g.theta[it].sin();
            for ip in 0..g.nphi {
                let i = g.index(it, ip);
                let (s, c) = g.phi[ip].sin_cos();
                out[i] = match k {
                    0 => -s * dt[i] - cot * c * dp[i],
                    1 => c * dt[i] - cot * s * dp[i],
                    _ => dp[i],
                };
            }
        }
        out
    }

    /// `L_k Ψ = −iγ⁰ (x × ∇)_k Ψ` for spinor samples.
    pub fn apply_l(&self, k: usize, psi: &[Spinor4]) -> Vec<Spinor4> {
        let comps: Vec<Vec<f64>> = (0..4)
            .map(|c| self.x_cross_grad(k, &psi.iter().map(|v| v[c]).collect::<Vec<_>>()))
            .collect();
        let g0 = MajoranaRep::canonical_ref().gamma[0];
        (0..psi.len())
            .map(|i| -(g0 * Spinor4::new(comps[0][i], comps[1][i], comps[2][i], comps[3][i])))
            .collect()
    }

    /// [`AngularDerivative::apply_l`] applied column by column.
    pub fn apply_l_matrix(&self, k: usize, m: &[RealMatrix4]) -> Vec<RealMatrix4> {
        let mut out = vec![RealMatrix4::zeros(); m.len()];
        for col in 0..4 {
            let c: Vec<Spinor4> = m.iter().map(|x| x.column(col).into_owned()).collect();
            for (o, v) in out.iter_mut().zip(self.apply_l(k, &c)) {
                o.set_column(col, &v);
            }
        }
        out
    }

    /// `σ·L` on matrix samples.
    pub fn sigma_dot_l_matrix(&self, m: &[RealMatrix4]) -> Vec<RealMatrix4> {
        let s = sigma();
        let mut out = vec![RealMatrix4::zeros(); m.len()];
        for (k, sk) in s.iter().enumerate() {
            for (o, v) in out.iter_mut().zip(self.apply_l_matrix(k, m)) {
                *o += sk * v;
            }
        }
        out
    }

    /// `σ·L` on spinor samples.
    pub fn sigma_dot_l(&self, psi: &[Spinor4]) -> Vec<Spinor4> {
        let s = sigma();
        let mut out = vec![Spinor4::zeros(); psi.len()];
        for (k, sk) in s.iter().enumerate() {
            for (o, v) in out.iter_mut().zip(self.apply_l(k, psi)) {
                *o += sk * v;
            }
        }
        out
    }
}

/// Samples of `f(θ, φ)` on every node of `grid`.
pub fn sample<T>(grid: &AngularGrid, f: impl Fn(f64, f64) -> T) -> Vec<T> {
    grid.nodes().map(|(_, t, p, _)| f(t, p)).collect()
}

/// `Σ w·Aᵢᵀ Bᵢ` over the angular grid.
pub fn angular_inner(grid: &AngularGrid, a: &[RealMatrix4], b: &[RealMatrix4]) -> RealMatrix4 {
    let mut acc = RealMatrix4::zeros();
    for (i, _, _, w) in grid.nodes() {
        acc += a[i].transpose() * b[i] * w;
    }
    acc
}
