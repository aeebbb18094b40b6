//! Initial conditions and small field utilities shared by the commands.

use majorana_core::fourier::{self, CartesianGrid, ModeKind, MomentumSpectrum, SpinorField};
use majorana_core::hankel::{self, HankelSpectrum, MomentumNodes, SphericalField, SphericalGrid};
use majorana_core::harmonics::{omega_matrix, AngularMode};
use majorana_core::matrix::Spinor4;

use crate::config::{Initial, RunConfig};

pub fn cartesian_grid(cfg: &RunConfig) -> Result<CartesianGrid, String> {
    CartesianGrid::new(cfg.grid.n, cfg.grid.length).map_err(|e| e.to_string())
}

pub fn spherical_grid(cfg: &RunConfig) -> Result<(SphericalGrid, MomentumNodes), String> {
    let g = &cfg.grid;
    let grid = SphericalGrid::new(g.nr, g.rmax, g.ntheta, g.nphi).map_err(|e| e.to_string())?;
    let nodes = MomentumNodes::for_radial(&grid.radial, g.np).map_err(|e| e.to_string())?;
    Ok((grid, nodes))
}

/// Grid mode whose wave numbers are nearest to `p`.
pub fn nearest_mode(grid: &CartesianGrid, p: [f64; 3]) -> usize {
    let h = (grid.n / 2) as i64;
    let q = p.map(|c| {
        let k = (c * grid.length / (2.0 * std::f64::consts::PI)).round() as i64;
        (k.clamp(-h, h - 1) + h) as usize
    });
    grid.flatten(q)
}

/// Initial spectrum on a Cartesian grid.
///
/// The Gaussian is built in momentum space,
/// `ψ(p) = rotor(−p·c)·exp(−|p − p₀|²w²/2)·χ·L³·(w²/2π)^{3/2}`, so that its
/// inverse is a packet of width `w` centred at `c` that drifts at the group
/// velocity.
pub fn cartesian_spectrum(cfg: &RunConfig) -> Result<MomentumSpectrum, String> {
    let grid = cartesian_grid(cfg)?;
    let m = cfg.mass;
    let mut spec = MomentumSpectrum::zeros(grid, m);
    match &cfg.initial {
        Initial::Gaussian {
            center,
            width,
            chi,
            momentum,
            ..
        } => {
            let chi = Spinor4::from(*chi);
            let amp = grid.volume() * (width * width / (2.0 * std::f64::consts::PI)).powf(1.5);
            for (idx, v) in spec.values.iter_mut().enumerate() {
                let (p, kind) = grid.effective_momentum(idx, m);
                if kind == ModeKind::Degenerate {
                    continue;
                }
                let d2: f64 = (0..3).map(|a| (p[a] - momentum[a]).powi(2)).sum();
                let pc: f64 = (0..3).map(|a| p[a] * center[a]).sum();
                *v = fourier::rotor(-pc) * chi * (amp * (-0.5 * d2 * width * width).exp());
            }
        }
        Initial::PlaneWave { p, chi } => {
            let idx = nearest_mode(&grid, *p);
            if grid.effective_momentum(idx, m).1 != ModeKind::Degenerate {
                spec.values[idx] = Spinor4::from(*chi);
            }
        }
        Initial::SphericalMode { .. } => return Err("spherical_mode needs geometry \"spherical\"".into()),
        Initial::Zero => {}
    }
    Ok(spec)
}

pub fn cartesian_field(cfg: &RunConfig) -> Result<SpinorField, String> {
    fourier::inverse(&cartesian_spectrum(cfg)?).map_err(|e| e.to_string())
}

/// Initial field on a spherical grid. Gaussians are `e^{−r²/2w²}·Ω_lμ·χ`;
/// their centre and carrier momentum are ignored.
pub fn spherical_field(cfg: &RunConfig) -> Result<SphericalField, String> {
    let (grid, nodes) = spherical_grid(cfg)?;
    let m = cfg.mass;
    match &cfg.initial {
        Initial::Gaussian { width, chi, l, mu, .. } => {
            let md = AngularMode::new(*l, *mu).map_err(|e| e.to_string())?;
            let chi = Spinor4::from(*chi);
            let w2 = width * width;
            Ok(SphericalField::from_fn(grid, m, move |r, t, p| {
                omega_matrix(md, t, p) * chi * (-r * r / (2.0 * w2)).exp()
            }))
        }
        Initial::SphericalMode { p, l, mu, chi } => {
            let md = AngularMode::new(*l, *mu).map_err(|e| e.to_string())?;
            let mut spec = HankelSpectrum::zeros(nodes.clone(), m, cfg.grid.lmax);
            let mi = spec.mode_index(md).ok_or("mode beyond lmax")?;
            let k = nearest_node(&nodes, *p);
            *spec.get_mut(mi, k) = Spinor4::from(*chi);
            Ok(hankel::inverse_hankel(&spec, &grid))
        }
        Initial::PlaneWave { .. } => Err("plane_wave needs geometry \"cartesian\"".into()),
        Initial::Zero => Ok(SphericalField::zeros(grid, m)),
    }
}

pub fn nearest_node(nodes: &MomentumNodes, p: f64) -> usize {
    let k = (p / nodes.dp - 0.5).round().max(0.0) as usize;
    k.min(nodes.len() - 1)
}

/// `⟨x⟩ = Σ x|Ψ|² / Σ|Ψ|²`, or `None` for a zero field.
pub fn centroid(f: &SpinorField) -> Option<[f64; 3]> {
    let mut acc = [0.0; 3];
    let mut total = 0.0;
    for (i, v) in f.values.iter().enumerate() {
        let w = v.norm_squared();
        let x = f.grid.position(i);
        for a in 0..3 {
            acc[a] += w * x[a];
        }
        total += w;
    }
    (total > 0.0).then(|| acc.map(|c| c / total))
}
