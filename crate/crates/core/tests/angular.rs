use majorana_core::clifford::MajoranaRep;
use majorana_core::harmonics::*;
use majorana_core::matrix::{max_abs, RealMatrix4};
use majorana_core::special::{assoc_legendre, normalized_legendre_dtheta, normalized_legendre_table};

fn max_dev(a: &[RealMatrix4], b: &[RealMatrix4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| max_abs(&(x - y))).fold(0.0, f64::max)
}

/// Rodrigues oracle: `(−1)^m/(2^l l!)·(1−ξ²)^{m/2}·d^{l+m}/dξ^{l+m}(ξ²−1)^l`
/// by exact polynomial differentiation.
fn rodrigues(l: usize, m: usize, xi: f64) -> f64 {
    // Coefficients of (ξ²−1)^l, ascending powers.
    let mut poly = vec![1.0_f64];
    for _ in 0..l {
        let mut next = vec![0.0; poly.len() + 2];
        for (i, c) in poly.iter().enumerate() {
            next[i + 2] += c;
            next[i] -= c;
        }
        poly = next;
    }
    for _ in 0..l + m {
        poly = poly.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect();
        if poly.is_empty() {
            return 0.0;
        }
    }
    let val: f64 = poly.iter().rev().fold(0.0, |acc, c| acc * xi + c);
    let fact: f64 = (1..=l).map(|k| k as f64).product();
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    sign / (2f64.powi(l as i32) * fact) * (1.0 - xi * xi).powf(m as f64 / 2.0) * val
}

#[test]
fn legendre_matches_rodrigues() {
    for l in 0..=6usize {
        for m in 0..=l {
            for xi in [-0.93, -0.4, 0.0, 0.5, 0.77] {
                let a = assoc_legendre(l as i32, m as i32, xi).unwrap();
                let b = rodrigues(l, m, xi);
                assert!((a - b).abs() < 1e-12 * b.abs().max(1.0), "l={l} m={m} ξ={xi}");
            }
        }
    }
    assert!((assoc_legendre(3, 2, 0.5).unwrap() - rodrigues(3, 2, 0.5)).abs() < 1e-12);
}

#[test]
fn theta_derivative_matches_finite_difference() {
    let h = 1e-5;
    let th: f64 = 1.1;
    let q = normalized_legendre_table(8, th.cos());
    let d = normalized_legendre_dtheta(&q);
    let qp = normalized_legendre_table(8, (th + h).cos());
    let qm = normalized_legendre_table(8, (th - h).cos());
    for l in 0..=8 {
        for m in 0..=l {
            let fd = (qp[l][m] - qm[l][m]) / (2.0 * h);
            assert!((fd - d[l][m]).abs() < 1e-8, "l={l} m={m}");
        }
    }
}

#[test]
fn y_phi_derivative() {
    let g0 = MajoranaRep::canonical_ref().gamma[0];
    let h = 1e-5;
    for (l, m) in [(2, 1), (3, -2), (4, 4)] {
        let (t, p) = (0.8, -1.3);
        let fd = (majorana_y(l, m, t, p + h).unwrap() - majorana_y(l, m, t, p - h).unwrap()) / (2.0 * h);
        let exact = g0 * majorana_y(l, m, t, p).unwrap() * m as f64;
        assert!(max_abs(&(fd - exact)) < 1e-8);
    }
}

#[test]
fn harmonic_orthonormality_and_splitting() {
    let grid = AngularGrid::new(32, 64).unwrap();
    let lm: Vec<(i32, i32)> = (0..=6).flat_map(|l| (-l..=l).map(move |m| (l, m))).collect();
    let tables: Vec<Vec<RealMatrix4>> =
        lm.iter().map(|&(l, m)| sample(&grid, |t, p| majorana_y(l, m, t, p).unwrap())).collect();
    let mut worst = 0.0_f64;
    for (i, a) in tables.iter().enumerate() {
        for (j, b) in tables.iter().enumerate() {
            let g = angular_inner(&grid, a, b);
            let target = if i == j { RealMatrix4::identity() } else { RealMatrix4::zeros() };
            worst = worst.max(max_abs(&(g - target)));
        }
    }
    assert!(worst < 1e-10, "{worst:e}");
    // ⟨Y^s, Y^c⟩ = 0 and ⟨Y^s, Y^s⟩ + ⟨Y^c, Y^c⟩ = δδ.
    let mut split = 0.0_f64;
    for &(l, m) in &lm {
        for &(l2, m2) in &lm {
            let (mut sc, mut ss, mut cc) = (0.0, 0.0, 0.0);
            for (_, t, p, w) in grid.nodes() {
                let (c1, s1) = y_parts(l, m, t, p).unwrap();
                let (c2, s2) = y_parts(l2, m2, t, p).unwrap();
                sc += w * s2 * c1;
                ss += w * s2 * s1;
                cc += w * c2 * c1;
            }
            let target = if (l, m) == (l2, m2) { 1.0 } else { 0.0 };
            split = split.max(sc.abs()).max((ss + cc - target).abs());
        }
    }
    assert!(split < 1e-10, "{split:e}");
}

#[test]
fn omega_orthonormality() {
    let grid = AngularGrid::new(32, 64).unwrap();
    let modes = modes_up_to(5);
    let tables: Vec<Vec<RealMatrix4>> = modes.iter().map(|&md| sample(&grid, |t, p| omega_matrix(md, t, p))).collect();
    let mut worst = 0.0_f64;
    for (i, a) in tables.iter().enumerate() {
        for (j, b) in tables.iter().enumerate() {
            let target = if i == j { RealMatrix4::identity() } else { RealMatrix4::zeros() };
            worst = worst.max(max_abs(&(angular_inner(&grid, a, b) - target)));
        }
    }
    assert!(worst < 1e-9, "{worst:e}");
}

#[test]
fn omega_pointwise_relations() {
    let rep = MajoranaRep::canonical_ref();
    let s1 = sigma()[0];
    for md in modes_up_to(5) {
        for (t, p) in [(0.3, 0.1), (1.2, -2.0), (2.7, 2.9)] {
            let o = omega_matrix(md, t, p);
            assert!(max_abs(&(sigma_r(t, p) * o + o * s1)) < 1e-10);
            let sign = if md.mu % 2 == 0 { 1.0 } else { -1.0 };
            let rhs = omega_matrix(md.partner(), t, p) * rep.gamma5 * sign;
            assert!(max_abs(&(gamma_r(t, p) * o - rhs)) < 1e-10, "{md:?}");
        }
    }
}

#[test]
fn omega_angular_momentum_relations() {
    let grid = AngularGrid::new(32, 64).unwrap();
    let d = AngularDerivative::new(&grid);
    let s = sigma();
    let id = RealMatrix4::identity();
    for md in modes_up_to(5) {
        let o = sample(&grid, |t, p| omega_matrix(md, t, p));
        let l3 = d.apply_l_matrix(2, &o);
        let lhs: Vec<_> = l3.iter().zip(&o).map(|(a, b)| a + s[2] * b * 0.5).collect();
        let rhs: Vec<_> = o.iter().map(|b| b * (md.mu as f64 + 0.5)).collect();
        assert!(max_dev(&lhs, &rhs) < 1e-6, "J3 {md:?}");

        let sl = d.sigma_dot_l_matrix(&o);
        let rhs: Vec<_> = o.iter().map(|b| -(b * (s[2] * md.l as f64 + id))).collect();
        assert!(max_dev(&sl, &rhs) < 1e-6, "σ·L {md:?}");

        let go: Vec<_> = grid.nodes().map(|(i, t, p, _)| gamma_r(t, p) * o[i]).collect();
        let slg = d.sigma_dot_l_matrix(&go);
        let rhs: Vec<_> = go.iter().map(|b| b * (s[2] * md.l as f64 - id)).collect();
        assert!(max_dev(&slg, &rhs) < 1e-6, "σ·L iγʳ {md:?}");
    }
}

#[test]
fn orbital_algebra_and_y_eigenvalues() {
    let grid = AngularGrid::new(24, 48).unwrap();
    let d = AngularDerivative::new(&grid);
    let g0 = MajoranaRep::canonical_ref().gamma[0];
    for (l, m) in [(1, 0), (2, -1), (3, 2), (5, -4)] {
        let y = sample(&grid, |t, p| majorana_y(l, m, t, p).unwrap());
        let l3 = d.apply_l_matrix(2, &y);
        let want: Vec<_> = y.iter().map(|v| v * m as f64).collect();
        assert!(max_dev(&l3, &want) < 1e-7);
        let mut l2 = vec![RealMatrix4::zeros(); y.len()];
        for k in 0..3 {
            let once = d.apply_l_matrix(k, &y);
            for (acc, v) in l2.iter_mut().zip(d.apply_l_matrix(k, &once)) {
                *acc += v;
            }
        }
        let want: Vec<_> = y.iter().map(|v| v * (l * (l + 1)) as f64).collect();
        assert!(max_dev(&l2, &want) < 1e-7);
        // [L₁, L₂] = iγ⁰ L₃.
        let l12 = d.apply_l_matrix(0, &d.apply_l_matrix(1, &y));
        let l21 = d.apply_l_matrix(1, &d.apply_l_matrix(0, &y));
        let comm: Vec<_> = l12.iter().zip(&l21).map(|(a, b)| a - b).collect();
        let want: Vec<_> = l3.iter().map(|v| g0 * v).collect();
        assert!(max_dev(&comm, &want) < 1e-7);
    }
}

#[test]
fn sigma_dot_l_identity() {
    // σ·L = (L + σ/2)² − L² − 3/4 on a mixed test field.
    let grid = AngularGrid::new(20, 40).unwrap();
    let d = AngularDerivative::new(&grid);
    let s = sigma();
    let f = sample(&grid, |t, p| {
        majorana_y(2, 1, t, p).unwrap() + majorana_y(3, -2, t, p).unwrap() * s[0] + majorana_y(1, 0, t, p).unwrap() * 0.3
    });
    let apply_j = |k: usize, v: &[RealMatrix4]| -> Vec<RealMatrix4> {
        d.apply_l_matrix(k, v).iter().zip(v).map(|(a, b)| a + s[k] * b * 0.5).collect()
    };
    let mut j2 = vec![RealMatrix4::zeros(); f.len()];
    let mut l2 = vec![RealMatrix4::zeros(); f.len()];
    for k in 0..3 {
        for (acc, v) in j2.iter_mut().zip(apply_j(k, &apply_j(k, &f))) {
            *acc += v;
        }
        for (acc, v) in l2.iter_mut().zip(d.apply_l_matrix(k, &d.apply_l_matrix(k, &f))) {
            *acc += v;
        }
    }
    let rhs: Vec<_> = (0..f.len()).map(|i| j2[i] - l2[i] - f[i] * 0.75).collect();
    assert!(max_dev(&d.sigma_dot_l_matrix(&f), &rhs) < 1e-6);
}

#[test]
fn spherical_dirac_operator_matches_cartesian() {
    // iγʲ∂ⱼF = iγʳ(∂ᵣ − σ·L/r)F for F = e^{−r²/4}·r·Ω₂,₋₁(θ, φ).
    let rep = MajoranaRep::canonical_ref();
    let md = AngularMode::new(2, -1).unwrap();
    let f = |x: [f64; 3]| -> RealMatrix4 {
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let t = (x[2] / r).acos();
        let p = x[1].atan2(x[0]);
        omega_matrix(md, t, p) * (r * (-r * r / 4.0).exp())
    };
    let grid = AngularGrid::new(16, 32).unwrap();
    let d = AngularDerivative::new(&grid);
    let r = 1.3;
    let h = 1e-3;
    let shell = |rr: f64| sample(&grid, |t, p| omega_matrix(md, t, p) * (rr * (-rr * rr / 4.0).exp()));
    let (inner, mid, outer) = (shell(r - h), shell(r), shell(r + h));
    let sl = d.sigma_dot_l_matrix(&mid);
    let mut worst = 0.0_f64;
    for (i, t, p, _) in grid.nodes() {
        let n = unit_radial(t, p);
        let x = [r * n[0], r * n[1], r * n[2]];
        let mut cart = RealMatrix4::zeros();
        for j in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[j] += h;
            xm[j] -= h;
            cart += rep.gamma[j + 1] * ((f(xp) - f(xm)) / (2.0 * h));
        }
        let dr = (outer[i] - inner[i]) / (2.0 * h);
        let sph = gamma_r(t, p) * (dr - sl[i] / r);
        worst = worst.max(max_abs(&(cart - sph)));
    }
    assert!(worst < 1e-5, "{worst:e}");
}
