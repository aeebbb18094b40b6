//! Majorana matrices `iγ^μ`, the 16-element basis Γ, the 32-element group
//! Γ₂, and the intertwiner between two Majorana representations.
//!
//! Γ is ordered as
//! `[1, iγ⁰..iγ³, iγ⁵, γ⁰γ¹..γ⁰γ³, iγ⁵γ⁰γ¹..iγ⁵γ⁰γ³, γ⁰γ⁵, γ¹γ⁵..γ³γ⁵]`
//! and every product is formed from the real generators only:
//! `γ⁰γʲ = −(iγ⁰)(iγʲ)`, `γ⁰γ⁵ = −(iγ⁰)(iγ⁵)`, `γʲγ⁵ = −(iγʲ)(iγ⁵)`.

use std::sync::OnceLock;

use crate::error::{MajoranaError, Result};
use crate::matrix::{frobenius_distance, gram, max_abs, RealMatrix4};

/// Minkowski metric `g = diag(1, −1, −1, −1)`.
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// Γ indices whose elements square to `−I` (and are antisymmetric).
pub const GAMMA_MINUS: [usize; 6] = [1, 5, 9, 10, 11, 12];

/// Γ indices whose elements square to `+I` (and are symmetric); this is Γ_S.
pub const GAMMA_PLUS: [usize; 10] = [0, 2, 3, 4, 6, 7, 8, 13, 14, 15];

/// Human-readable labels in Γ order.
pub const GAMMA_LABELS: [&str; 16] = [
    "1", "iγ⁰", "iγ¹", "iγ²", "iγ³", "iγ⁵", "γ⁰γ¹", "γ⁰γ²", "γ⁰γ³", "iγ⁵γ⁰γ¹", "iγ⁵γ⁰γ²",
    "iγ⁵γ⁰γ³", "γ⁰γ⁵", "γ¹γ⁵", "γ²γ⁵", "γ³γ⁵",
];

/// Membership tolerance for "matrix ∈ Γ" (Frobenius distance).
pub const MEMBERSHIP_TOL: f64 = 1e-9;

pub type IntMatrix4 = [[i64; 4]; 4];

/// The canonical Majorana matrices `iγ⁰, iγ¹, iγ², iγ³` as exact integers.
pub const CANONICAL_INT: [IntMatrix4; 4] = [
    [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]],
    [[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]],
    [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]],
    [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, -1, 0]],
];

pub fn int_mul(a: &IntMatrix4, b: &IntMatrix4) -> IntMatrix4 {
    let mut c = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

pub fn int_to_real(a: &IntMatrix4) -> RealMatrix4 {
    RealMatrix4::from_fn(|i, j| a[i][j] as f64)
}

/// `iγ⁵ = −(iγ⁰)(iγ¹)(iγ²)(iγ³)` in exact integers.
pub fn canonical_gamma5_int() -> IntMatrix4 {
    let g = &CANONICAL_INT;
    let p = int_mul(&int_mul(&int_mul(&g[0], &g[1]), &g[2]), &g[3]);
    let mut out = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = -p[i][j];
        }
    }
    out
}

/// Exact check of `{iγ^μ, iγ^ν} = −2g^{μν}I` over all 16 ordered pairs of
/// the canonical integer matrices. Returns the number of pairs that hold.
pub fn canonical_clifford_exact() -> usize {
    let g = &CANONICAL_INT;
    let mut ok = 0;
    for mu in 0..4 {
        for nu in 0..4 {
            let ab = int_mul(&g[mu], &g[nu]);
            let ba = int_mul(&g[nu], &g[mu]);
            let target = if mu == nu { -2 * METRIC[mu] as i64 } else { 0 };
            let holds = (0..4).all(|i| {
                (0..4).all(|j| ab[i][j] + ba[i][j] == if i == j { target } else { 0 })
            });
            if holds {
                ok += 1;
            }
        }
    }
    ok
}

pub fn anticommutator(a: &RealMatrix4, b: &RealMatrix4) -> RealMatrix4 {
    a * b + b * a
}

pub fn commutator(a: &RealMatrix4, b: &RealMatrix4) -> RealMatrix4 {
    a * b - b * a
}

/// Sign `s` with `h² = s·I` for the Γ element at `index`.
pub fn square_sign(index: usize) -> f64 {
    if GAMMA_MINUS.contains(&index) {
        -1.0
    } else {
        1.0
    }
}

/// A real Majorana representation: generators, Γ basis and the group Γ₂.
#[derive(Clone, Debug, PartialEq)]
pub struct MajoranaRep {
    /// `iγ⁰, iγ¹, iγ², iγ³`.
    pub gamma: [RealMatrix4; 4],
    /// `iγ⁵ = −γ⁰γ¹γ²γ³`.
    pub gamma5: RealMatrix4,
    /// The 16 elements of Γ in the fixed order of this module.
    pub basis: [RealMatrix4; 16],
    /// Γ₂: the 16 basis elements followed by their negatives.
    pub group: Vec<RealMatrix4>,
}

impl MajoranaRep {
    /// Builds a representation from four generators, checking the Clifford
    /// relation to `tol` (max-norm).
    pub fn from_generators(gamma: [RealMatrix4; 4], tol: f64) -> Result<Self> {
        let defect = clifford_defect(&gamma);
        if defect > tol {
            return Err(MajoranaError::NotClifford(defect));
        }
        let [g0, g1, g2, g3] = gamma;
        let gamma5 = -(g0 * g1 * g2 * g3);
        let boost = |gj: &RealMatrix4| -(g0 * gj);
        let k = [boost(&g1), boost(&g2), boost(&g3)];
        let basis = [
            RealMatrix4::identity(),
            g0,
            g1,
            g2,
            g3,
            gamma5,
            k[0],
            k[1],
            k[2],
            gamma5 * k[0],
            gamma5 * k[1],
            gamma5 * k[2],
            -(g0 * gamma5),
            -(g1 * gamma5),
            -(g2 * gamma5),
            -(g3 * gamma5),
        ];
        let mut group: Vec<RealMatrix4> = basis.to_vec();
        group.extend(basis.iter().map(|m| -m));
        Ok(Self {
            gamma,
            gamma5,
            basis,
            group,
        })
    }

    /// The integer-entried canonical basis.
    pub fn canonical() -> Self {
        let g = CANONICAL_INT.map(|m| int_to_real(&m));
        Self::from_generators(g, 0.0).expect("canonical basis satisfies the Clifford relation")
    }

    /// Shared instance of [`MajoranaRep::canonical`].
    pub fn canonical_ref() -> &'static Self {
        static REP: OnceLock<MajoranaRep> = OnceLock::new();
        REP.get_or_init(Self::canonical)
    }

    /// `Q·A·Qᵀ` applied to every generator.
    pub fn conjugated(&self, q: &RealMatrix4) -> Result<Self> {
        let qt = q.transpose();
        Self::from_generators(self.gamma.map(|g| q * g * qt), 1e-9)
    }

    /// `γ⁰γʲ` for `j = 1, 2, 3` (boost generators; symmetric, square to `+I`).
    pub fn boost_generators(&self) -> [RealMatrix4; 3] {
        [self.basis[6], self.basis[7], self.basis[8]]
    }

    /// `iγ⁵γ⁰γʲ` for `j = 1, 2, 3` (rotation generators; square to `−I`).
    pub fn rotation_generators(&self) -> [RealMatrix4; 3] {
        [self.basis[9], self.basis[10], self.basis[11]]
    }

    /// Spin operators `σʲ = γʲγ⁵`.
    pub fn sigma(&self) -> [RealMatrix4; 3] {
        [self.basis[13], self.basis[14], self.basis[15]]
    }

    /// Index of the Γ element within [`MEMBERSHIP_TOL`] of `a`.
    pub fn index_of(&self, a: &RealMatrix4) -> Result<usize> {
        let mut best = f64::INFINITY;
        for (i, b) in self.basis.iter().enumerate() {
            let d = frobenius_distance(a, b);
            if d < MEMBERSHIP_TOL {
                return Ok(i);
            }
            best = best.min(d);
        }
        Err(MajoranaError::NotInGamma(best))
    }

    /// Index into Γ₂ (0..32) of `a`, if any.
    pub fn group_index_of(&self, a: &RealMatrix4) -> Option<usize> {
        self.group
            .iter()
            .position(|b| frobenius_distance(a, b) < MEMBERSHIP_TOL)
    }
}

/// Max-norm of `{iγ^μ, iγ^ν} + 2g^{μν}I` over all pairs.
pub fn clifford_defect(gamma: &[RealMatrix4; 4]) -> f64 {
    let mut worst = 0.0_f64;
    for mu in 0..4 {
        for nu in 0..4 {
            let mut m = anticommutator(&gamma[mu], &gamma[nu]);
            if mu == nu {
                m += RealMatrix4::identity() * (2.0 * METRIC[mu]);
            }
            worst = worst.max(max_abs(&m));
        }
    }
    worst
}

/// Partition of Γ into the elements commuting (Ω₊) and anticommuting (Ω₋)
/// with `a`, as index lists into Γ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaSets {
    pub commuting: Vec<usize>,
    pub anticommuting: Vec<usize>,
}

pub fn omega_sets(a: &RealMatrix4, rep: &MajoranaRep) -> Result<OmegaSets> {
    rep.index_of(a)?;
    let mut out = OmegaSets {
        commuting: Vec::new(),
        anticommuting: Vec::new(),
    };
    for (i, b) in rep.basis.iter().enumerate() {
        if max_abs(&commutator(a, b)) < MEMBERSHIP_TOL {
            out.commuting.push(i);
        } else {
            out.anticommuting.push(i);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct GramReport {
    /// `G_ij = tr(A_iᵀ A_j)` over Γ.
    pub gram: [[f64; 16]; 16],
    /// `max |G − 4I|`.
    pub max_deviation: f64,
    pub pass: bool,
}

/// Gram matrix of Γ; `tol = 0` demands exact equality with `4I`.
pub fn verify_basis_independence(rep: &MajoranaRep, tol: f64) -> GramReport {
    let mut g = [[0.0; 16]; 16];
    let mut dev = 0.0_f64;
    for i in 0..16 {
        for j in 0..16 {
            g[i][j] = gram(&rep.basis[i], &rep.basis[j]);
            let target = if i == j { 4.0 } else { 0.0 };
            dev = dev.max((g[i][j] - target).abs());
        }
    }
    GramReport {
        gram: g,
        max_deviation: dev,
        pass: dev <= tol,
    }
}

/// Group average `Σ_{g∈Γ₂} B(g⁻¹) S′ A(g)` for one seed `S′`.
pub fn group_average(rep_a: &MajoranaRep, rep_b: &MajoranaRep, seed: &RealMatrix4) -> RealMatrix4 {
    let mut s = RealMatrix4::zeros();
    for h in 0..16 {
        // g and −g contribute equally; g⁻¹ = (sign of g²)·g.
        s += (2.0 * square_sign(h)) * rep_b.basis[h] * seed * rep_a.basis[h];
    }
    s
}

/// Matrix `S` with `|det S| = 1` and `S·A(iγ^μ) = B(iγ^μ)·S`.
///
/// The sign is not canonical; see [`crate::matrix::pin_sign`].
pub fn intertwiner(rep_a: &MajoranaRep, rep_b: &MajoranaRep) -> Result<RealMatrix4> {
    for i in 0..4 {
        for j in 0..4 {
            let mut seed = RealMatrix4::zeros();
            seed[(i, j)] = 1.0;
            let s = group_average(rep_a, rep_b, &seed);
            let det = s.determinant();
            if det.abs() > 1e-8 * s.norm().powi(4).max(1e-300) {
                return Ok(s / det.abs().powf(0.25));
            }
        }
    }
    Err(MajoranaError::SingularIntertwiner)
}

/// Max-norm of `S·A(h) − B(h)·S` over all 16 `h ∈ Γ`.
pub fn intertwining_residual(s: &RealMatrix4, rep_a: &MajoranaRep, rep_b: &MajoranaRep) -> f64 {
    (0..16)
        .map(|h| max_abs(&(s * rep_a.basis[h] - rep_b.basis[h] * s)))
        .fold(0.0, f64::max)
}
