use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use majorana_core::fourier::{MomentumSpectrum, SpinorField};
use majorana_core::hankel::{HankelSpectrum, SphericalField};
use majorana_core::io;
use serde::Serialize;

use crate::config::{Format, RunConfig};

/// Output directory plus the requested formats.
pub struct Sink {
    pub dir: PathBuf,
    csv: bool,
    bin: bool,
}

impl Sink {
    pub fn new(cfg: &RunConfig, dir: &Path) -> Result<Self, String> {
        std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            csv: cfg.wants(Format::Csv),
            bin: cfg.wants(Format::Bin),
        })
    }

    fn create(&self, name: &str) -> Result<BufWriter<File>, String> {
        let path = self.dir.join(name);
        File::create(&path)
            .map(BufWriter::new)
            .map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<(), String> {
        let mut w = self.create(name)?;
        serde_json::to_writer_pretty(&mut w, value).map_err(|e| e.to_string())?;
        writeln!(w).and_then(|_| w.flush()).map_err(|e| e.to_string())
    }

    pub fn field(&self, stem: &str, f: &SpinorField) -> Result<(), String> {
        if self.csv {
            io::write_field_csv(self.create(&format!("{stem}.csv"))?, f).map_err(|e| e.to_string())?;
        }
        if self.bin {
            let mut w = self.create(&format!("{stem}.maj"))?;
            io::write_cartesian(&mut w, &io::CartesianFile::from(f)).map_err(|e| e.to_string())?;
            w.flush().map_err(|e| e.to_string())?;
        }
        Ok(())
    }

    pub fn spherical(&self, stem: &str, f: &SphericalField) -> Result<(), String> {
        if self.csv {
            io::write_spherical_csv(self.create(&format!("{stem}.csv"))?, f).map_err(|e| e.to_string())?;
        }
        if self.bin {
            let mut w = self.create(&format!("{stem}.majs"))?;
            io::write_spherical(&mut w, f).map_err(|e| e.to_string())?;
            w.flush().map_err(|e| e.to_string())?;
        }
        Ok(())
    }

    /// Spectra are always written as CSV.
    pub fn momentum(&self, stem: &str, s: &MomentumSpectrum) -> Result<(), String> {
        io::write_momentum_csv(self.create(&format!("{stem}.csv"))?, s).map_err(|e| e.to_string())
    }

    pub fn hankel(&self, stem: &str, s: &HankelSpectrum) -> Result<(), String> {
        io::write_hankel_csv(self.create(&format!("{stem}.csv"))?, s).map_err(|e| e.to_string())
    }

    pub fn csv_writer(&self, name: &str) -> Result<csv::Writer<BufWriter<File>>, String> {
        Ok(csv::Writer::from_writer(self.create(name)?))
    }
}
