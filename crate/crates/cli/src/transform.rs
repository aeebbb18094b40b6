use majorana_core::fourier::{self, MomentumSpectrum};
use majorana_core::hankel::{self, HankelSpectrum};
use serde::Serialize;

use crate::config::{Geometry, RunConfig};
use crate::fields;
use crate::output::Sink;

pub const FOURIER_ROUND_TRIP_TOL: f64 = 1e-9;
pub const HANKEL_ROUND_TRIP_TOL: f64 = 1e-4;
/// Entries carrying at least this fraction of the spectral norm count as
/// significant.
pub const SIGNIFICANT_FRACTION: f64 = 1e-6;

#[derive(Debug, Serialize)]
pub struct DominantEntry {
    pub index: usize,
    /// Cartesian: effective momentum vector. Spherical: `[p]`.
    pub momentum: Vec<f64>,
    pub l: Option<i32>,
    pub mu: Option<i32>,
    pub fraction: f64,
}

#[derive(Debug, Serialize)]
pub struct Sparsity {
    pub entries: usize,
    pub significant_entries: usize,
    pub significant_fraction: f64,
    pub dominant: Option<DominantEntry>,
}

#[derive(Debug, Serialize)]
pub struct TransformReport {
    pub geometry: Geometry,
    pub mass: f64,
    pub max_norm_error: f64,
    pub relative_l2_error: f64,
    /// The checked quantity: max-norm error (Cartesian) or relative L²
    /// error (spherical).
    pub error: f64,
    pub tolerance: f64,
    pub tail_fraction: Option<f64>,
    pub tail_warning: bool,
    pub skipped_modes: Vec<usize>,
    pub sparsity: Sparsity,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct SpectrumReport {
    pub geometry: Geometry,
    pub mass: f64,
    pub norm: f64,
    pub skipped_modes: Vec<usize>,
    pub tail_warning: bool,
    pub sparsity: Sparsity,
}

fn sparsity(weights: &[f64], describe: impl Fn(usize) -> (Vec<f64>, Option<i32>, Option<i32>)) -> Sparsity {
    let total: f64 = weights.iter().sum();
    let significant = weights.iter().filter(|&&w| total > 0.0 && w >= SIGNIFICANT_FRACTION * total).count();
    let dominant = (total > 0.0).then(|| {
        // First maximum, so ties resolve deterministically.
        let (index, w) = weights
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &w)| if w > best.1 { (i, w) } else { best });
        let (momentum, l, mu) = describe(index);
        DominantEntry {
            index,
            momentum,
            l,
            mu,
            fraction: w / total,
        }
    });
    Sparsity {
        entries: weights.len(),
        significant_entries: significant,
        significant_fraction: SIGNIFICANT_FRACTION,
        dominant,
    }
}

fn fourier_sparsity(s: &MomentumSpectrum) -> Sparsity {
    let w: Vec<f64> = s.values.iter().map(|v| v.norm_squared()).collect();
    sparsity(&w, |i| (s.grid.effective_momentum(i, s.mass).0.to_vec(), None, None))
}

fn hankel_sparsity(s: &HankelSpectrum) -> Sparsity {
    let np = s.nodes.len();
    let w: Vec<f64> = s
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, v)| s.nodes.weight(i % np, s.mass) * v.norm_squared())
        .collect();
    sparsity(&w, |i| {
        let md = s.modes[i / np];
        (vec![s.nodes.p[i % np]], Some(md.l), Some(md.mu))
    })
}

fn tol(cfg: &RunConfig, id: &str, default: f64) -> f64 {
    cfg.tolerances.get(id).copied().unwrap_or(default)
}

pub fn run_transform(cfg: &RunConfig, sink: &Sink) -> Result<TransformReport, String> {
    match cfg.geometry {
        Geometry::Cartesian => {
            let field = fields::cartesian_field(cfg)?;
            let spec = fourier::forward(&field).map_err(|e| e.to_string())?;
            let back = fourier::inverse(&spec).map_err(|e| e.to_string())?;
            sink.field("input", &field)?;
            sink.momentum("spectrum", &spec)?;
            sink.field("reconstruction", &back)?;
            let mut max_err = 0.0_f64;
            let mut diff2 = 0.0;
            for (a, b) in field.values.iter().zip(&back.values) {
                max_err = max_err.max((a - b).amax());
                diff2 += (a - b).norm_squared();
            }
            let total: f64 = field.values.iter().map(|v| v.norm_squared()).sum();
            let rel = if total > 0.0 { (diff2 / total).sqrt() } else { diff2.sqrt() };
            let tolerance = tol(cfg, "transform.fourier_round_trip", FOURIER_ROUND_TRIP_TOL);
            Ok(TransformReport {
                geometry: Geometry::Cartesian,
                mass: cfg.mass,
                max_norm_error: max_err,
                relative_l2_error: rel,
                error: max_err,
                tolerance,
                tail_fraction: None,
                tail_warning: false,
                skipped_modes: spec.skipped.clone(),
                sparsity: fourier_sparsity(&spec),
                pass: max_err <= tolerance,
            })
        }
        Geometry::Spherical => {
            let (grid, nodes) = fields::spherical_grid(cfg)?;
            let field = fields::spherical_field(cfg)?;
            let out = hankel::forward_hankel(&field, cfg.grid.lmax, &nodes).map_err(|e| e.to_string())?;
            let back = hankel::inverse_hankel(&out.spectrum, &grid);
            sink.spherical("input", &field)?;
            sink.hankel("spectrum", &out.spectrum)?;
            sink.spherical("reconstruction", &back)?;
            let mut diff = field.clone();
            for (d, b) in diff.values.iter_mut().zip(&back.values) {
                *d -= b;
            }
            let max_err = diff.values.iter().map(|v| v.amax()).fold(0.0, f64::max);
            let total = field.norm_sqr();
            let rel = if total > 0.0 { (diff.norm_sqr() / total).sqrt() } else { diff.norm_sqr().sqrt() };
            let tolerance = tol(cfg, "transform.hankel_round_trip", HANKEL_ROUND_TRIP_TOL);
            Ok(TransformReport {
                geometry: Geometry::Spherical,
                mass: cfg.mass,
                max_norm_error: max_err,
                relative_l2_error: rel,
                error: rel,
                tolerance,
                tail_fraction: Some(out.tail_fraction),
                tail_warning: out.tail_warning,
                skipped_modes: Vec::new(),
                sparsity: hankel_sparsity(&out.spectrum),
                pass: rel <= tolerance,
            })
        }
    }
}

pub fn run_spectrum(cfg: &RunConfig, sink: &Sink) -> Result<SpectrumReport, String> {
    match cfg.geometry {
        Geometry::Cartesian => {
            let field = fields::cartesian_field(cfg)?;
            let spec = fourier::forward(&field).map_err(|e| e.to_string())?;
            sink.momentum("spectrum", &spec)?;
            Ok(SpectrumReport {
                geometry: Geometry::Cartesian,
                mass: cfg.mass,
                norm: spec.norm_sqr(),
                skipped_modes: spec.skipped.clone(),
                tail_warning: false,
                sparsity: fourier_sparsity(&spec),
            })
        }
        Geometry::Spherical => {
            let (_, nodes) = fields::spherical_grid(cfg)?;
            let field = fields::spherical_field(cfg)?;
            let out = hankel::forward_hankel(&field, cfg.grid.lmax, &nodes).map_err(|e| e.to_string())?;
            sink.hankel("spectrum", &out.spectrum)?;
            let s = &out.spectrum;
            Ok(SpectrumReport {
                geometry: Geometry::Spherical,
                mass: cfg.mass,
                norm: (0..s.modes.len()).map(|i| s.mode_norm_sqr(i)).sum(),
                skipped_modes: Vec::new(),
                tail_warning: out.tail_warning,
                sparsity: hankel_sparsity(s),
            })
        }
    }
}
