//! Real Majorana spinor algebra, the Pin(3,1) double cover of the Lorentz
//! group, and the Fourier-Majorana / Hankel-Majorana spectral transforms.
//!
//! Everything is expressed in a Majorana basis, so every matrix, field and
//! spectrum is real; the complex unit of ordinary Dirac theory is played by
//! the real matrix `iγ⁰` (see [`fourier::rotor`]).

pub mod clifford;
pub mod error;
pub mod fourier;
pub mod hankel;
pub mod harmonics;
pub mod io;
pub mod lorentz;
pub mod matrix;
pub mod special;

pub use clifford::MajoranaRep;
pub use error::{MajoranaError, Result};
pub use matrix::{RealMatrix4, Spinor4};
