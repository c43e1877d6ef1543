//! The Hermite-type problem `f'' = 2x f' - 2E f` against an exact expansion
//! of the recurrence over integer polynomials in `(x, E)`.

use aim_spectrum::aim::{delta_at, scan_roots, AimConfig, HermiteProblem};
use aim_spectrum::numerics::{PScalar, Precision};

/// `p[i][j]` is the coefficient of `x^i E^j`.
type Poly = Vec<Vec<i128>>;

fn zero(nx: usize, ne: usize) -> Poly {
    vec![vec![0; ne]; nx]
}

fn add(a: &Poly, b: &Poly) -> Poly {
    let nx = a.len().max(b.len());
    let ne = a[0].len().max(b[0].len());
    let mut out = zero(nx, ne);
    for p in [a, b] {
        for (i, row) in p.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                out[i][j] += c;
            }
        }
    }
    out
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = zero(a.len() + b.len() - 1, a[0].len() + b[0].len() - 1);
    for (i, ra) in a.iter().enumerate() {
        for (j, ca) in ra.iter().enumerate() {
            for (k, rb) in b.iter().enumerate() {
                for (l, cb) in rb.iter().enumerate() {
                    out[i + k][j + l] += ca * cb;
                }
            }
        }
    }
    out
}

fn dx(a: &Poly) -> Poly {
    if a.len() == 1 {
        return zero(1, a[0].len());
    }
    a.iter().enumerate().skip(1).map(|(i, row)| row.iter().map(|c| c * i as i128).collect()).collect()
}

fn neg(a: &Poly) -> Poly {
    a.iter().map(|r| r.iter().map(|c| -c).collect()).collect()
}

/// `Δ_k(x = 0)` as coefficients in ascending powers of `E`.
fn exact_delta(k: usize) -> Vec<i128> {
    let lambda0: Poly = vec![vec![0], vec![2]];
    let s0: Poly = vec![vec![0, -2]];
    let (mut lam, mut s) = (vec![lambda0.clone()], vec![s0.clone()]);
    for i in 1..=k {
        let l = add(&add(&dx(&lam[i - 1]), &s[i - 1]), &mul(&lambda0, &lam[i - 1]));
        let t = add(&dx(&s[i - 1]), &mul(&s0, &lam[i - 1]));
        lam.push(l);
        s.push(t);
    }
    let d = add(&mul(&lam[k], &s[k - 1]), &neg(&mul(&lam[k - 1], &s[k])));
    d[0].clone()
}

fn eval(c: &[i128], e: i128) -> i128 {
    c.iter().rev().fold(0, |acc, v| acc * e + v)
}

#[test]
fn first_delta_closed_form() {
    // 4E(E - 1) = -4E + 4E²
    assert_eq!(exact_delta(1), vec![0, -4, 4]);
    let p = Precision::new(256).unwrap();
    let cfg = AimConfig { k_max: 4, precision: p, ..AimConfig::default() };
    for e in [-3.25, 0.0, 0.5, 1.0, 7.125] {
        let d = delta_at(&HermiteProblem, &PScalar::from_f64(e, p), 1, &cfg).unwrap();
        assert_eq!(d.to_f64(), 4.0 * e * (e - 1.0));
    }
}

#[test]
fn exact_delta_has_integer_roots_only() {
    for k in 1..=8 {
        let c = exact_delta(k);
        let degree = c.iter().rposition(|&v| v != 0).unwrap();
        assert_eq!(degree, k + 1, "k={k}");
        for n in 0..=k as i128 {
            assert_eq!(eval(&c, n), 0, "k={k}, E={n}");
        }
    }
}

#[test]
fn numeric_delta_matches_exact_expansion() {
    let p = Precision::new(256).unwrap();
    let cfg = AimConfig { k_max: 8, precision: p, ..AimConfig::default() };
    for k in 1..=8 {
        let c = exact_delta(k);
        for e in [-2i128, 3, 11] {
            let d = delta_at(&HermiteProblem, &PScalar::from_i64(e as i64, p), k, &cfg).unwrap();
            assert_eq!(d, PScalar::from_i64(eval(&c, e) as i64, p), "k={k}, E={e}");
        }
    }
}

#[test]
fn scanned_roots_are_the_integers() {
    for k in 1..=8 {
        let cfg = AimConfig {
            k_max: k.max(2),
            precision: Precision::new(192).unwrap(),
            e_min: -0.5,
            e_max: k as f64 + 0.5,
            e_grid_points: 16 * (k + 1),
            root_tol: 1e-13,
            ..AimConfig::default()
        };
        let roots: Vec<f64> = scan_roots(&HermiteProblem, k, &cfg).unwrap().roots.iter().map(PScalar::to_f64).collect();
        assert_eq!(roots.len(), k + 1, "k={k}: {roots:?}");
        for (n, r) in roots.iter().enumerate() {
            assert!((r - n as f64).abs() <= 1e-12, "k={k}: {roots:?}");
        }
    }
}
