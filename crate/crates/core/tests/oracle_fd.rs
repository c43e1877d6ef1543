use aim_spectrum::oracle::{
    assemble_with, lowest_eigenvalues, oracle_spectrum, refine_richardson, refine_richardson_with, CentrifugalMode,
    OracleConfig, RadialGrid, TridiagonalOperator,
};
use aim_spectrum::PotentialParams;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn random_tridiagonal(rng: &mut ChaCha8Rng, n: usize) -> TridiagonalOperator {
    let d = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
    let e = (0..n - 1).map(|_| rng.gen_range(-2.0..2.0)).collect();
    TridiagonalOperator::new(d, e).unwrap()
}

fn dense(op: &TridiagonalOperator) -> DMatrix<f64> {
    let n = op.dim();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = op.diagonal()[i];
        if i + 1 < n {
            m[(i, i + 1)] = op.off_diagonal()[i];
            m[(i + 1, i)] = op.off_diagonal()[i];
        }
    }
    m
}

fn sorted_eigs(op: &TridiagonalOperator) -> Vec<f64> {
    let mut ev: Vec<f64> = dense(op).symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

#[test]
fn sturm_bisection_matches_dense_solver() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for _ in 0..20 {
        let op = random_tridiagonal(&mut rng, 50);
        let ours = lowest_eigenvalues(&op, 50).unwrap();
        for (a, b) in ours.iter().zip(sorted_eigs(&op)) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }
}

#[test]
fn sturm_count_matches_dense_solver() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let n = rng.gen_range(2..12);
        let op = random_tridiagonal(&mut rng, n);
        let ev = sorted_eigs(&op);
        for _ in 0..10 {
            let sigma = rng.gen_range(-8.0..8.0);
            if ev.iter().any(|v| (v - sigma).abs() < 1e-9) {
                continue;
            }
            assert_eq!(op.sturm_count(sigma), ev.iter().filter(|&&v| v < sigma).count());
        }
    }
}

#[test]
fn box_converges_at_second_order() {
    let exact = PI * PI / 2.0;
    let mut errs = Vec::new();
    let mut grid = RadialGrid::new(1e-12, 1.0, 400).unwrap();
    for _ in 0..4 {
        let op = assemble_with(&grid, |_| Ok(0.0)).unwrap();
        errs.push(lowest_eigenvalues(&op, 1).unwrap()[0] - exact);
        grid = grid.halved();
    }
    for w in errs.windows(2) {
        let ratio = w[0] / w[1];
        assert!((ratio - 4.0).abs() < 0.2, "{errs:?}");
    }
}

#[test]
fn hydrogen_levels() {
    let grid = RadialGrid::new(1e-12, 60.0, 20_000).unwrap();
    let est = refine_richardson_with(&grid, 3, 2, |r| Ok(-1.0 / r)).unwrap();
    assert!((est[0].energy + 0.5).abs() < 1e-6, "{est:?}");
    assert!((est[1].energy + 0.125).abs() < 1e-6, "{est:?}");
}

#[test]
fn doubling_r_max_leaves_deep_states_alone() {
    let prm = PotentialParams::with_lambda_sq(-100.0, 0.3, 2.0, 0).unwrap();
    let lambda = prm.lambda();
    let a = RadialGrid::new(1e-12, 25.0 / lambda, 8000).unwrap();
    let b = RadialGrid::new(1e-12, 50.0 / lambda, 16_000).unwrap();
    let ea = refine_richardson(&prm, CentrifugalMode::Exact, &a, 2, 3).unwrap();
    let eb = refine_richardson(&prm, CentrifugalMode::Exact, &b, 2, 3).unwrap();
    for (x, y) in ea.iter().zip(&eb) {
        assert!(x.energy < -1.0);
        assert!(((x.energy - y.energy) / y.energy).abs() < 1e-8, "{} vs {}", x.energy, y.energy);
    }
}

#[test]
fn halving_r_min_is_harmless() {
    let prm = PotentialParams::with_lambda_sq(-160.0, 0.5, 2.0, 1).unwrap();
    let base = OracleConfig { levels: 2, n_points: 8000, ..OracleConfig::default() };
    let half = OracleConfig { r_min: base.r_min / 2.0, ..base };
    let a = oracle_spectrum(&prm, CentrifugalMode::Exact, 2, &base).unwrap();
    let b = oracle_spectrum(&prm, CentrifugalMode::Exact, 2, &half).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!(((x.energy - y.energy) / y.energy).abs() < 1e-9);
    }
}

#[test]
fn table2_p_wave_ground_state() {
    let prm = PotentialParams::with_lambda_sq(-160.0, 0.5, 2.0, 1).unwrap();
    let est = oracle_spectrum(&prm, CentrifugalMode::Exact, 1, &OracleConfig::default()).unwrap();
    let reference = -219.669_591_41;
    assert!(((est[0].energy - reference) / reference).abs() < 1e-5, "{est:?}");
}
