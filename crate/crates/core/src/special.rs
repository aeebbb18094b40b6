//! Gauss–Legendre quadrature, associated Legendre functions and spherical
//! Bessel functions of the first kind.

use std::f64::consts::PI;

use crate::error::{MajoranaError, Result};

/// Gauss–Legendre nodes (ascending) and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// `(P_n(z), P_n'(z))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

fn factorial_ratio(num: u32, den: u32) -> f64 {
    // num! / den!
    let mut r = 1.0;
    if num >= den {
        for k in den + 1..=num {
            r *= k as f64;
        }
    } else {
        for k in num + 1..=den {
            r /= k as f64;
        }
    }
    r
}

/// `P_l^m(ξ)` including the Condon–Shortley phase `(−1)^m`; negative `m`
/// via `P_l^{−m} = (−1)^m (l−m)!/(l+m)! P_l^m`.
pub fn assoc_legendre(l: i32, m: i32, xi: f64) -> Result<f64> {
    if l < 0 || m.abs() > l {
        return Err(MajoranaError::IndexOutOfRange(format!("P_l^m with l={l}, m={m}")));
    }
    if !(-1.0..=1.0).contains(&xi) {
        return Err(MajoranaError::IndexOutOfRange(format!("ξ = {xi} outside [−1, 1]")));
    }
    let ma = m.unsigned_abs();
    let lu = l as u32;
    let s = (1.0 - xi * xi).max(0.0).sqrt();
    let mut pmm = 1.0;
    for k in 1..=ma {
        pmm *= -((2 * k - 1) as f64) * s;
    }
    let val = if lu == ma {
        pmm
    } else {
        let mut a = pmm;
        let mut b = xi * (2 * ma + 1) as f64 * pmm;
        for ll in ma + 2..=lu {
            let c = ((2 * ll - 1) as f64 * xi * b - (ll + ma - 1) as f64 * a) / (ll - ma) as f64;
            a = b;
            b = c;
        }
        b
    };
    if m >= 0 {
        Ok(val)
    } else {
        let sign = if ma % 2 == 0 { 1.0 } else { -1.0 };
        Ok(sign * factorial_ratio(lu - ma, lu + ma) * val)
    }
}

/// `N_lm = √((2l+1)/(4π)·(l−m)!/(l+m)!)`.
pub fn harmonic_norm(l: i32, m: i32) -> f64 {
    let lu = l as i64;
    let mm = m as i64;
    ((2 * lu + 1) as f64 / (4.0 * PI) * factorial_ratio((lu - mm) as u32, (lu + mm) as u32)).sqrt()
}

/// Table of `Q_l^m(cosθ) = N_lm P_l^m(cosθ)` for `0 ≤ m ≤ l ≤ lmax`,
/// indexed `[l][m]`, by the normalized recurrence (stable to high `l`).
pub fn normalized_legendre_table(lmax: usize, x: f64) -> Vec<Vec<f64>> {
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut q = vec![vec![0.0; lmax + 1]; lmax + 1];
    let mut qmm = (1.0 / (4.0 * PI)).sqrt();
    for m in 0..=lmax {
        if m > 0 {
            let mf = m as f64;
            qmm *= -s * ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt();
        }
        q[m][m] = qmm;
        if m < lmax {
            q[m + 1][m] = x * ((2 * m + 3) as f64).sqrt() * qmm;
        }
        for l in m + 2..=lmax {
            let (lf, mf) = (l as f64, m as f64);
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
            q[l][m] = a * (x * q[l - 1][m] - b * q[l - 2][m]);
        }
    }
    q
}

/// `d/dθ Q_l^m(cosθ)` for `0 ≤ m ≤ l ≤ lmax` from a table built to `lmax`.
pub fn normalized_legendre_dtheta(q: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let lmax = q.len() - 1;
    let mut d = vec![vec![0.0; lmax + 1]; lmax + 1];
    for l in 0..=lmax {
        for m in 0..=l {
            let (lf, mf) = (l as f64, m as f64);
            let up = if m < l { ((lf + mf + 1.0) * (lf - mf)).sqrt() * q[l][m + 1] } else { 0.0 };
            let down_q = if m == 0 {
                if l >= 1 {
                    -q[l][1]
                } else {
                    0.0
                }
            } else {
                q[l][m - 1]
            };
            let down = ((lf + mf) * (lf - mf + 1.0)).sqrt() * down_q;
            d[l][m] = 0.5 * (up - down);
        }
    }
    d
}

/// `N_lm P_l^m(cosθ)` for any `|m| ≤ l`, using `Q_l^{−m} = (−1)^m Q_l^m`.
pub fn normalized_legendre(l: i32, m: i32, x: f64) -> f64 {
    let ma = m.unsigned_abs() as usize;
    let q = normalized_legendre_table(l as usize, x)[l as usize][ma];
    if m < 0 && ma % 2 == 1 {
        -q
    } else {
        q
    }
}

/// `j_l(x)` for `l = 0..=lmax`: upward recurrence when `x ≥ lmax`,
/// downward (Miller) recurrence normalized against `j₀` or `j₁` otherwise.
pub fn spherical_bessel_array(lmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; lmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let j0 = if x < 1e-4 {
        1.0 - x * x / 6.0 + x.powi(4) / 120.0
    } else {
        x.sin() / x
    };
    if x >= lmax as f64 {
        out[0] = j0;
        if lmax >= 1 {
            out[1] = x.sin() / (x * x) - x.cos() / x;
        }
        for l in 1..lmax {
            out[l + 1] = (2 * l + 1) as f64 / x * out[l] - out[l - 1];
        }
        return out;
    }
    let start = lmax + 30 + (40.0 * (lmax as f64 + 1.0)).sqrt().ceil() as usize;
    // Invariant at the top of each pass: cur = j_l, next = j_{l+1} (unnormalized).
    let mut next = 0.0;
    let mut cur = 1e-300;
    for l in (1..=start).rev() {
        let prev = (2 * l + 1) as f64 / x * cur - next;
        next = cur;
        cur = prev;
        if l - 1 <= lmax {
            out[l - 1] = cur;
        }
        if cur.abs() > 1e250 {
            let s = 1e-250;
            cur *= s;
            next *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    // out[0] holds the unnormalized j₀ and out[1] the unnormalized j₁.
    let j1 = if x < 1e-4 {
        x / 3.0 - x.powi(3) / 30.0
    } else {
        x.sin() / (x * x) - x.cos() / x
    };
    let scale = if j0.abs() >= j1.abs() || lmax == 0 {
        j0 / out[0]
    } else {
        j1 / out[1]
    };
    for v in out.iter_mut() {
        *v *= scale;
    }
    out
}

/// `j_l(x)`; `j₀(0) = 1`, `j_l(0) = 0` for `l ≥ 1`.
pub fn spherical_bessel(l: usize, x: f64) -> f64 {
    spherical_bessel_array(l, x)[l]
}

/// `j_l'(x) = (l·j_{l−1}(x) − (l+1)·j_{l+1}(x)) / (2l+1)`.
pub fn spherical_bessel_derivative(l: usize, x: f64) -> f64 {
    let j = spherical_bessel_array(l + 1, x);
    let lower = if l == 0 { 0.0 } else { l as f64 * j[l - 1] };
    (lower - (l + 1) as f64 * j[l + 1]) / (2 * l + 1) as f64
}
