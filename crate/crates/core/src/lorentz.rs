//! Pin(3,1) acting on Majorana spinors and its two-to-one map onto O(1,3).
//!
//! Convention: a spinor parameter maps to twice the vector parameter, so
//! `lambda_of(boost([η/2, 0, 0]))` is the x-boost of rapidity `η`, and
//! `lambda_of(rotation(θ))` rotates spatial vectors by `−2|θ|` about `θ̂`
//! in the active, column-vector convention.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::clifford::{MajoranaRep, GAMMA_PLUS, METRIC};
use crate::error::{MajoranaError, Result};
use crate::matrix::{max_abs, RealMatrix4};

/// Relative tolerance of the defining relations in [`pin_flags`].
pub const PIN_TOL: f64 = 1e-8;

/// Lorentz matrix, rows and columns ordered `(t, x, y, z)`.
pub type LorentzMatrix = RealMatrix4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coset {
    /// `Spin⁺(3,1)` itself, `d = 1`.
    Identity,
    /// `d = iγ⁵`.
    Gamma5,
    /// `d = iγ⁰`.
    Gamma0,
    /// `d = γ⁰γ⁵`.
    Gamma0Gamma5,
}

impl Coset {
    pub fn from_flags(a: i8, b: i8) -> Self {
        match (a, b) {
            (1, 1) => Coset::Identity,
            (1, -1) => Coset::Gamma5,
            (-1, 1) => Coset::Gamma0,
            _ => Coset::Gamma0Gamma5,
        }
    }

    pub fn representative(self, rep: &MajoranaRep) -> RealMatrix4 {
        match self {
            Coset::Identity => rep.basis[0],
            Coset::Gamma5 => rep.basis[5],
            Coset::Gamma0 => rep.basis[1],
            Coset::Gamma0Gamma5 => rep.basis[12],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PinElement {
    pub matrix: RealMatrix4,
    pub flag_a: i8,
    pub flag_b: i8,
}

impl PinElement {
    /// Classifies `m`, computing its flags.
    pub fn new(m: RealMatrix4) -> Result<Self> {
        let f = pin_flags(&m)?;
        Ok(Self {
            matrix: m,
            flag_a: f.flag_a,
            flag_b: f.flag_b,
        })
    }

    pub fn identity() -> Self {
        Self {
            matrix: RealMatrix4::identity(),
            flag_a: 1,
            flag_b: 1,
        }
    }

    pub fn compose(&self, other: &PinElement) -> PinElement {
        PinElement {
            matrix: self.matrix * other.matrix,
            flag_a: self.flag_a * other.flag_a,
            flag_b: self.flag_b * other.flag_b,
        }
    }

    pub fn neg(&self) -> PinElement {
        PinElement {
            matrix: -self.matrix,
            ..*self
        }
    }

    pub fn is_spin_plus(&self) -> bool {
        self.flag_a == 1 && self.flag_b == 1
    }
}

fn split(v: [f64; 3]) -> (f64, [f64; 3]) {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if n == 0.0 {
        (0.0, [0.0; 3])
    } else {
        (n, [v[0] / n, v[1] / n, v[2] / n])
    }
}

fn combine(u: [f64; 3], gens: &[RealMatrix4; 3]) -> RealMatrix4 {
    gens[0] * u[0] + gens[1] * u[1] + gens[2] * u[2]
}

/// `exp(bʲ γ⁰γʲ) = cosh|b|·I + sinh|b|·b̂ʲγ⁰γʲ`.
pub fn boost(b: [f64; 3]) -> PinElement {
    let rep = MajoranaRep::canonical_ref();
    let (n, u) = split(b);
    let m = RealMatrix4::identity() * n.cosh() + combine(u, &rep.boost_generators()) * n.sinh();
    PinElement {
        matrix: m,
        flag_a: 1,
        flag_b: 1,
    }
}

/// `exp(θʲ iγ⁵γ⁰γʲ) = cos|θ|·I + sin|θ|·θ̂ʲiγ⁵γ⁰γʲ`.
pub fn rotation(theta: [f64; 3]) -> PinElement {
    let rep = MajoranaRep::canonical_ref();
    let (n, u) = split(theta);
    let m = RealMatrix4::identity() * n.cos() + combine(u, &rep.rotation_generators()) * n.sin();
    PinElement {
        matrix: m,
        flag_a: 1,
        flag_b: 1,
    }
}

/// `Λ^μ_ν` from `S⁻¹ iγ^μ S = Λ^μ_ν iγ^ν`; row `μ`, column `ν`.
pub fn lambda_of(s: &PinElement) -> Result<LorentzMatrix> {
    lambda_of_matrix(&s.matrix)
}

pub fn lambda_of_matrix(s: &RealMatrix4) -> Result<LorentzMatrix> {
    let rep = MajoranaRep::canonical_ref();
    let inv = s
        .try_inverse()
        .ok_or_else(|| MajoranaError::NotPinMember("singular matrix".into()))?;
    let mut lam = LorentzMatrix::zeros();
    let mut residual = 0.0_f64;
    for mu in 0..4 {
        let x = inv * rep.gamma[mu] * s;
        let mut rebuilt = RealMatrix4::zeros();
        for nu in 0..4 {
            let c = crate::matrix::gram(&rep.gamma[nu], &x) / 4.0;
            lam[(mu, nu)] = c;
            rebuilt += rep.gamma[nu] * c;
        }
        residual = residual.max(max_abs(&(x - rebuilt)) / (1.0 + max_abs(&x)));
    }
    if residual > PIN_TOL {
        return Err(MajoranaError::LambdaResidual(residual));
    }
    Ok(lam)
}

pub fn metric() -> LorentzMatrix {
    LorentzMatrix::from_diagonal(&nalgebra::Vector4::from(METRIC))
}

/// Max-norm of `ΛᵀgΛ − g`.
pub fn metric_defect(lam: &LorentzMatrix) -> f64 {
    let g = metric();
    max_abs(&(lam.transpose() * g * lam - g))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PinFlags {
    pub flag_a: i8,
    pub flag_b: i8,
    pub coset: Coset,
}

/// Flags `a, b` with `iγ⁵S = a·S·iγ⁵` and `iγ⁰S = b·S⁻ᵀ·iγ⁰`.
pub fn pin_flags(s: &RealMatrix4) -> Result<PinFlags> {
    let rep = MajoranaRep::canonical_ref();
    let det = s.determinant();
    if (det.abs() - 1.0).abs() > PIN_TOL {
        return Err(MajoranaError::NotPinMember(format!("|det| = {}", det.abs())));
    }
    let inv_t = s
        .try_inverse()
        .ok_or_else(|| MajoranaError::NotPinMember("singular matrix".into()))?
        .transpose();
    let g5 = &rep.gamma5;
    let g0 = &rep.gamma[0];
    let scale_a = 1.0 + max_abs(s);
    let scale_b = 1.0 + max_abs(s).max(max_abs(&inv_t));
    let pick = |lhs: RealMatrix4, rhs: RealMatrix4, scale: f64| -> Option<i8> {
        if max_abs(&(lhs - rhs)) <= PIN_TOL * scale {
            Some(1)
        } else if max_abs(&(lhs + rhs)) <= PIN_TOL * scale {
            Some(-1)
        } else {
            None
        }
    };
    let a = pick(g5 * s, s * g5, scale_a)
        .ok_or_else(|| MajoranaError::NotPinMember("iγ⁵ relation fails for both signs".into()))?;
    let b = pick(g0 * s, inv_t * g0, scale_b)
        .ok_or_else(|| MajoranaError::NotPinMember("iγ⁰ relation fails for both signs".into()))?;
    Ok(PinFlags {
        flag_a: a,
        flag_b: b,
        coset: Coset::from_flags(a, b),
    })
}

/// The discrete subgroup Δ: `±1, ±iγ⁵, ±iγ⁰, ±γ⁰γ⁵`.
pub fn delta_group() -> Vec<RealMatrix4> {
    let rep = MajoranaRep::canonical_ref();
    let d = [rep.basis[0], rep.basis[5], rep.basis[1], rep.basis[12]];
    d.iter().copied().chain(d.iter().map(|m| -m)).collect()
}

#[derive(Clone, Copy, Debug)]
pub struct Polar {
    /// Orthogonal factor `Θ = exp(θʲ iγ⁵γ⁰γʲ)`.
    pub theta: PinElement,
    /// Symmetric positive-definite factor `Π = exp(bʲ γ⁰γʲ)`.
    pub pi: PinElement,
    pub theta_params: [f64; 3],
    pub boost_params: [f64; 3],
}

/// `S = Θ·Π` with `Π = sqrt(SᵀS)` and the exponent parameters recovered.
pub fn polar_decompose(s: &PinElement) -> Result<Polar> {
    if !s.is_spin_plus() {
        return Err(MajoranaError::NotPinMember("polar factorization needs Spin⁺".into()));
    }
    let rep = MajoranaRep::canonical_ref();
    let sts = s.matrix.transpose() * s.matrix;
    let eig = SymmetricEigen::new(sts);
    if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
        return Err(MajoranaError::NotPinMember("SᵀS is not positive definite".into()));
    }
    let root = eig.eigenvalues.map(|l| l.max(1e-14).sqrt());
    let q = &eig.eigenvectors;
    let pi = q * RealMatrix4::from_diagonal(&root) * q.transpose();
    let pi_inv = q * RealMatrix4::from_diagonal(&root.map(|x| 1.0 / x)) * q.transpose();
    let theta_m = s.matrix * pi_inv;

    let k = rep.boost_generators();
    let sh = [0, 1, 2].map(|j| (k[j] * pi).trace() / 4.0);
    let (shn, u) = split(sh);
    let bn = shn.asinh();
    let b = u.map(|x| x * bn);

    let r = rep.rotation_generators();
    let c = [0, 1, 2].map(|j| crate::matrix::gram(&r[j], &theta_m) / 4.0);
    let (cn, cu) = split(c);
    let cos = theta_m.trace() / 4.0;
    let theta = if cn == 0.0 {
        if cos < 0.0 {
            [std::f64::consts::PI, 0.0, 0.0]
        } else {
            [0.0; 3]
        }
    } else {
        cu.map(|x| x * cn.atan2(cos))
    };
    Ok(Polar {
        theta: PinElement {
            matrix: theta_m,
            flag_a: 1,
            flag_b: 1,
        },
        pi: PinElement {
            matrix: pi,
            flag_a: 1,
            flag_b: 1,
        },
        theta_params: theta,
        boost_params: b,
    })
}

#[derive(Clone, Debug)]
pub struct CommutantReport {
    /// Commutant dimension inside Γ_S for all six generators.
    pub gamma_s_all: usize,
    /// Commutant dimension inside Γ_S for the rotation generators only.
    pub gamma_s_rotations: usize,
    /// Commutant dimension in the full 16-dim matrix algebra, all generators.
    pub full_all: usize,
    /// Commutant dimension in the full matrix algebra, rotations only.
    pub full_rotations: usize,
    /// Whether the identity solves the full system.
    pub identity_in_solution: bool,
}

/// Dimension of `{M ∈ span(basis) : [M, G] = 0 ∀G}` via SVD rank.
pub fn commutant_dimension(basis: &[RealMatrix4], generators: &[RealMatrix4]) -> usize {
    let rows = 16 * generators.len();
    let a = DMatrix::from_fn(rows, basis.len(), |r, c| {
        let (g, e) = (r / 16, r % 16);
        let m = basis[c] * generators[g] - generators[g] * basis[c];
        m[(e / 4, e % 4)]
    });
    let sv = a.svd(false, false).singular_values;
    let rank = sv.iter().filter(|&&s| s > 1e-10).count();
    basis.len() - rank
}

pub fn commutant_check() -> CommutantReport {
    let rep = MajoranaRep::canonical_ref();
    let gamma_s: Vec<RealMatrix4> = GAMMA_PLUS.iter().map(|&i| rep.basis[i]).collect();
    let full: Vec<RealMatrix4> = rep.basis.to_vec();
    let rot = rep.rotation_generators().to_vec();
    let mut all = rep.boost_generators().to_vec();
    all.extend(rot.iter().copied());
    let id = RealMatrix4::identity();
    CommutantReport {
        gamma_s_all: commutant_dimension(&gamma_s, &all),
        gamma_s_rotations: commutant_dimension(&gamma_s, &rot),
        full_all: commutant_dimension(&full, &all),
        full_rotations: commutant_dimension(&full, &rot),
        identity_in_solution: all.iter().all(|g| max_abs(&(id * g - g * id)) == 0.0),
    }
}
