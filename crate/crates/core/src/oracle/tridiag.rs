//! Symmetric tridiagonal matrices and Sturm-sequence bisection.

use crate::error::{invalid, Result};

/// Symmetric tridiagonal matrix given by its diagonal and off-diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalOperator {
    diagonal: Vec<f64>,
    off_diagonal: Vec<f64>,
}

impl TridiagonalOperator {
    pub fn new(diagonal: Vec<f64>, off_diagonal: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() {
            return invalid("tridiagonal operator needs at least one row");
        }
        if off_diagonal.len() + 1 != diagonal.len() {
            return invalid(format!(
                "off-diagonal length {} does not match diagonal length {}",
                off_diagonal.len(),
                diagonal.len()
            ));
        }
        if diagonal.iter().chain(&off_diagonal).any(|v| !v.is_finite()) {
            return invalid("tridiagonal operator has non-finite entries");
        }
        Ok(TridiagonalOperator { diagonal, off_diagonal })
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.off_diagonal
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    /// Number of eigenvalues strictly below `sigma`: the count of negative
    /// pivots in the LDLᵀ factorization of `A - σI`.
    pub fn sturm_count(&self, sigma: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = self.diagonal[0] - sigma;
        for i in 0.. {
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
            if i + 1 == self.diagonal.len() {
                break;
            }
            let e = self.off_diagonal[i];
            q = (self.diagonal[i + 1] - sigma) - e * e / q;
        }
        count
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let n = self.diagonal.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off_diagonal[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off_diagonal[i].abs() } else { 0.0 };
            lo = lo.min(self.diagonal[i] - left - right);
            hi = hi.max(self.diagonal[i] + left + right);
        }
        (lo, hi)
    }

    /// The `index`-th smallest eigenvalue (0-based), bisected within `[lo, hi]`
    /// to relative width `rel_tol`.
    fn bisect_eigenvalue(&self, index: usize, mut lo: f64, mut hi: f64, rel_tol: f64) -> f64 {
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= rel_tol * lo.abs().max(hi.abs()) {
                return mid;
            }
            if self.sturm_count(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
}

/// The `count` smallest eigenvalues in ascending order, each isolated to
/// relative width 10⁻¹².
pub fn lowest_eigenvalues(op: &TridiagonalOperator, count: usize) -> Result<Vec<f64>> {
    if count > op.dim() {
        return invalid(format!("asked for {count} eigenvalues of a {}x{} matrix", op.dim(), op.dim()));
    }
    let (g_lo, g_hi) = op.gershgorin_bounds();
    let pad = 1e-12 * g_lo.abs().max(g_hi.abs()).max(1.0);
    let (g_lo, g_hi) = (g_lo - pad, g_hi + pad);
    let mut out: Vec<f64> = Vec::with_capacity(count);
    for index in 0..count {
        let lo = out.last().copied().map_or(g_lo, |prev| prev - pad);
        out.push(op.bisect_eigenvalue(index, lo, g_hi, 1e-12));
    }
    Ok(out)
}
