use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Verify,
    Evolve,
    Transform,
    Spectrum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    #[default]
    Cartesian,
    Spherical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Bin,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub n: usize,
    pub length: f64,
    pub nr: usize,
    pub ntheta: usize,
    pub nphi: usize,
    pub rmax: f64,
    pub lmax: i32,
    pub np: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            n: 16,
            length: 20.0,
            nr: 256,
            ntheta: 32,
            nphi: 64,
            rmax: 40.0,
            lmax: 5,
            np: 256,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Initial {
    /// Cartesian: packet centred at `center` with carrier momentum
    /// `momentum`. Spherical: radial Gaussian times `Ω_lμ·χ`.
    Gaussian {
        #[serde(default)]
        center: [f64; 3],
        width: f64,
        chi: [f64; 4],
        #[serde(default)]
        momentum: [f64; 3],
        #[serde(default = "default_l")]
        l: i32,
        #[serde(default)]
        mu: i32,
    },
    /// One Cartesian grid mode, the one nearest to `p`.
    PlaneWave { p: [f64; 3], chi: [f64; 4] },
    /// One Hankel mode at the momentum node nearest to `p`.
    SphericalMode { p: f64, l: i32, mu: i32, chi: [f64; 4] },
    Zero,
}

fn default_l() -> i32 {
    1
}

impl Default for Initial {
    fn default() -> Self {
        Initial::Gaussian {
            center: [0.0; 3],
            width: 2.0,
            chi: [0.3, -1.0, 0.7, 0.2],
            momentum: [0.0; 3],
            l: 1,
            mu: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeConfig {
    pub steps: usize,
    pub dt: f64,
    /// Write the field every this many steps; 0 writes none.
    pub dump_every: usize,
}

impl Default for TimeConfig {
    fn default() -> Self {
        Self {
            steps: 100,
            dt: 0.05,
            dump_every: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("majorana-out"),
            formats: vec![Format::Csv],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub mass: f64,
    pub geometry: Geometry,
    pub grid: GridConfig,
    pub initial: Initial,
    pub time: TimeConfig,
    pub output: OutputConfig,
    /// Per check id tolerance overrides.
    pub tolerances: BTreeMap<String, f64>,
    /// Seed for the randomized verification checks.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: None,
            mass: 1.0,
            geometry: Geometry::Cartesian,
            grid: GridConfig::default(),
            initial: Initial::default(),
            time: TimeConfig::default(),
            output: OutputConfig::default(),
            tolerances: BTreeMap::new(),
            seed: 1,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let cfg: RunConfig = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        let g = &self.grid;
        if !(self.mass >= 0.0) || !self.mass.is_finite() {
            return Err(format!("mass must be finite and ≥ 0, got {}", self.mass));
        }
        if g.n < 2 || g.n % 2 != 0 {
            return Err(format!("grid.n must be even and ≥ 2, got {}", g.n));
        }
        if [g.nr, g.ntheta, g.nphi, g.np].contains(&0) {
            return Err("grid sizes must be positive".into());
        }
        if !(g.length > 0.0 && g.rmax > 0.0) || !g.length.is_finite() || !g.rmax.is_finite() {
            return Err("grid lengths must be positive and finite".into());
        }
        if g.lmax < 1 {
            return Err(format!("grid.lmax must be ≥ 1, got {}", g.lmax));
        }
        if !self.time.dt.is_finite() {
            return Err("time.dt must be finite".into());
        }
        match &self.initial {
            Initial::Gaussian { width, l, mu, .. } => {
                if !(*width > 0.0) || !width.is_finite() {
                    return Err(format!("initial.width must be positive, got {width}"));
                }
                if *l < 1 || *mu < -*l || *mu > *l - 1 {
                    return Err(format!("initial (l, mu) = ({l}, {mu}) out of range"));
                }
            }
            Initial::SphericalMode { p, l, mu, .. } => {
                if !(*p > 0.0) || *l < 1 || *l > g.lmax || *mu < -*l || *mu > *l - 1 {
                    return Err(format!("spherical mode (p, l, mu) = ({p}, {l}, {mu}) out of range"));
                }
            }
            Initial::PlaneWave { .. } | Initial::Zero => {}
        }
        if self.tolerances.values().any(|t| !(*t >= 0.0)) {
            return Err("tolerance overrides must be ≥ 0".into());
        }
        Ok(())
    }

    pub fn wants(&self, f: Format) -> bool {
        self.output.formats.contains(&f)
    }
}
