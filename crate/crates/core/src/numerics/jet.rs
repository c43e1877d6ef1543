//! Truncated Taylor jets about a fixed center.
//!
//! `coeffs[m] = f^(m)(x0) / m!`. Coefficients past a jet's degree are read as
//! zero by `mul` and `div`, so short jets behave as exact polynomials there;
//! `add` clips to the common degree instead. Callers that hold jets which are
//! only valid through their degree must pick `out_degree` accordingly.

use crate::error::{invalid, Error, Result};
use crate::numerics::scalar::{PScalar, Precision};

#[derive(Clone, Debug)]
pub struct Jet {
    center: PScalar,
    coeffs: Vec<PScalar>,
}

impl Jet {
    pub fn new(center: PScalar, coeffs: Vec<PScalar>) -> Result<Self> {
        if coeffs.is_empty() {
            return invalid("a jet needs at least one coefficient");
        }
        Ok(Jet { center, coeffs })
    }

    pub fn from_f64s(center: &PScalar, coeffs: &[f64]) -> Result<Self> {
        let p = center.precision();
        Self::new(center.clone(), coeffs.iter().map(|&c| PScalar::from_f64(c, p)).collect())
    }

    pub fn constant(center: &PScalar, value: PScalar) -> Self {
        Jet { center: center.clone(), coeffs: vec![value] }
    }

    pub fn zero(center: &PScalar, degree: usize) -> Self {
        let p = center.precision();
        Jet { center: center.clone(), coeffs: vec![PScalar::zero(p); degree + 1] }
    }

    #[inline]
    pub fn center(&self) -> &PScalar {
        &self.center
    }

    #[inline]
    pub fn coeffs(&self) -> &[PScalar] {
        &self.coeffs
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Value at the center.
    #[inline]
    pub fn value(&self) -> &PScalar {
        &self.coeffs[0]
    }

    pub fn precision(&self) -> Precision {
        self.center.precision()
    }

    pub fn truncated(&self, degree: usize) -> Jet {
        let mut coeffs: Vec<PScalar> = self.coeffs.iter().take(degree + 1).cloned().collect();
        coeffs.resize(degree + 1, PScalar::zero(self.precision()));
        Jet { center: self.center.clone(), coeffs }
    }

    fn check_center(&self, other: &Jet) -> Result<()> {
        if self.center == other.center {
            Ok(())
        } else {
            Err(Error::CenterMismatch)
        }
    }

    /// Sum through the common degree.
    pub fn add(&self, other: &Jet) -> Result<Jet> {
        self.check_center(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Jet { center: self.center.clone(), coeffs })
    }

    pub fn sub(&self, other: &Jet) -> Result<Jet> {
        self.check_center(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Jet { center: self.center.clone(), coeffs })
    }

    /// Truncated Cauchy product through `out_degree`.
    pub fn mul(&self, other: &Jet, out_degree: usize) -> Result<Jet> {
        self.check_center(other)?;
        let p = self.precision();
        let (da, db) = (self.degree(), other.degree());
        let coeffs = (0..=out_degree)
            .map(|m| {
                let lo = m.saturating_sub(db);
                let hi = m.min(da);
                let mut acc = PScalar::zero(p);
                if lo <= hi {
                    for i in lo..=hi {
                        acc = acc + &self.coeffs[i] * &other.coeffs[m - i];
                    }
                }
                acc
            })
            .collect();
        Ok(Jet { center: self.center.clone(), coeffs })
    }

    /// Derivative; consumes one order of validity.
    pub fn diff(&self) -> Result<Jet> {
        if self.degree() == 0 {
            return Err(Error::DerivativeExhausted { required: 1, available: 0 });
        }
        let coeffs = self.coeffs[1..].iter().enumerate().map(|(m, c)| c.scale_u64(m as u64 + 1)).collect();
        Ok(Jet { center: self.center.clone(), coeffs })
    }

    /// Quotient `self / den` through `out_degree`.
    pub fn div(&self, den: &Jet, out_degree: usize) -> Result<Jet> {
        self.check_center(den)?;
        if den.coeffs[0].is_zero() {
            return Err(Error::Singularity(format!("denominator vanishes at x0 = {}", self.center.to_f64())));
        }
        let p = self.precision();
        let inv = den.coeffs[0].recip();
        let dd = den.degree();
        let mut q: Vec<PScalar> = Vec::with_capacity(out_degree + 1);
        for m in 0..=out_degree {
            let mut acc = self.coeffs.get(m).cloned().unwrap_or_else(|| PScalar::zero(p));
            for i in 1..=m.min(dd) {
                acc = acc - &den.coeffs[i] * &q[m - i];
            }
            q.push(acc * &inv);
        }
        Ok(Jet { center: self.center.clone(), coeffs: q })
    }

    /// Evaluates the truncated series at `x` (Horner in `x - center`).
    pub fn eval_at(&self, x: &PScalar) -> PScalar {
        let t = x - &self.center;
        let mut acc = PScalar::zero(self.precision());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &t) + c;
        }
        acc
    }
}

/// Taylor expansion about `x0` of the polynomial `Σ poly[i] x^i`, zero-padded
/// or truncated to `out_degree`.
pub fn recenter_polynomial(poly: &[PScalar], x0: &PScalar, out_degree: usize) -> Jet {
    let p = x0.precision();
    let mut b: Vec<PScalar> = if poly.is_empty() { vec![PScalar::zero(p)] } else { poly.to_vec() };
    let n = b.len();
    // repeated synthetic division by (x - x0)
    for i in 0..n.saturating_sub(1) {
        for j in (i..n - 1).rev() {
            b[j] = &b[j] + &(x0 * &b[j + 1]);
        }
    }
    b.resize(out_degree.max(n - 1) + 1, PScalar::zero(p));
    b.truncate(out_degree + 1);
    Jet { center: x0.clone(), coeffs: b }
}

/// A rational function `num / den` held as two short jets about one center.
///
/// Multiplying a long jet by it costs O(degree · (deg num + deg den)) instead
/// of the O(degree²) of a dense product.
#[derive(Clone, Debug)]
pub struct RationalJet {
    num: Jet,
    den: Jet,
}

impl RationalJet {
    pub fn new(num: Jet, den: Jet) -> Result<Self> {
        num.check_center(&den)?;
        if den.value().is_zero() {
            return Err(Error::Singularity(format!("denominator vanishes at x0 = {}", num.center().to_f64())));
        }
        Ok(RationalJet { num, den })
    }

    pub fn polynomial(num: Jet) -> Self {
        let one = PScalar::one(num.precision());
        let den = Jet::constant(num.center(), one);
        RationalJet { num, den }
    }

    pub fn center(&self) -> &PScalar {
        self.num.center()
    }

    pub fn numerator(&self) -> &Jet {
        &self.num
    }

    pub fn denominator(&self) -> &Jet {
        &self.den
    }

    pub fn value(&self) -> PScalar {
        self.num.value() / self.den.value()
    }

    /// Dense Taylor jet through `degree`.
    pub fn to_jet(&self, degree: usize) -> Result<Jet> {
        self.num.div(&self.den, degree)
    }

    /// `(num · f) / den` through `out_degree`.
    pub fn mul_jet(&self, f: &Jet, out_degree: usize) -> Result<Jet> {
        self.num.mul(f, out_degree)?.div(&self.den, out_degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::new(256).unwrap()
    }

    fn c0() -> PScalar {
        PScalar::zero(p())
    }

    fn jet(center: &PScalar, v: &[f64]) -> Jet {
        Jet::from_f64s(center, v).unwrap()
    }

    fn as_f64(j: &Jet) -> Vec<f64> {
        j.coeffs().iter().map(PScalar::to_f64).collect()
    }

    #[test]
    fn add_is_componentwise_and_clips() {
        let c = c0();
        assert_eq!(as_f64(&jet(&c, &[1., 2.]).add(&jet(&c, &[3., 4.])).unwrap()), [4., 6.]);
        assert_eq!(as_f64(&jet(&c, &[1., 0., 5.]).add(&jet(&c, &[0., 1.])).unwrap()), [1., 1.]);
        let a = jet(&c, &[1., 2., 3.]);
        assert_eq!(as_f64(&a.add(&Jet::zero(&c, 1)).unwrap()), [1., 2.]);
    }

    #[test]
    fn center_mismatch_is_rejected() {
        let a = jet(&c0(), &[1.]);
        let b = jet(&PScalar::from_f64(0.5, p()), &[1.]);
        assert_eq!(a.add(&b).unwrap_err(), Error::CenterMismatch);
        assert_eq!(a.mul(&b, 0).unwrap_err(), Error::CenterMismatch);
        assert_eq!(a.div(&b, 0).unwrap_err(), Error::CenterMismatch);
    }

    #[test]
    fn mul_examples() {
        let c = c0();
        let one_plus_x = jet(&c, &[1., 1.]);
        assert_eq!(as_f64(&one_plus_x.mul(&one_plus_x, 2).unwrap()), [1., 2., 1.]);
        let a = jet(&c, &[3., -1., 0.25]);
        let unit = jet(&c, &[1., 0., 0.]);
        assert_eq!(as_f64(&a.mul(&unit, 2).unwrap()), [3., -1., 0.25]);
        let x = jet(&c, &[0., 1.]);
        assert_eq!(as_f64(&x.mul(&x, 1).unwrap()), [0., 0.]);
    }

    #[test]
    fn diff_examples() {
        let c = c0();
        assert_eq!(as_f64(&jet(&c, &[7., 3., 5.]).diff().unwrap()), [3., 10.]);
        assert_eq!(jet(&c, &[5.]).diff().unwrap_err(), Error::DerivativeExhausted { required: 1, available: 0 });
    }

    #[test]
    fn diff_of_recentred_geometric_series() {
        // 1/(1-x) about x0 has coefficients 1/(1-x0)^(m+1); its derivative
        // 1/(1-x)^2 has (m+1)/(1-x0)^(m+2).
        let x0 = PScalar::from_f64(0.3, p());
        let one = PScalar::one(p());
        let base = &one - &x0;
        let deg = 12;
        let coeffs = (0..=deg).map(|m| base.powi(m + 1).recip()).collect();
        let d = Jet::new(x0.clone(), coeffs).unwrap().diff().unwrap();
        assert_eq!(d.degree(), deg - 1);
        for (m, c) in d.coeffs().iter().enumerate() {
            let expect = base.powi(m + 2).recip().scale_u64(m as u64 + 1);
            let rel = ((c - &expect) / &expect).abs();
            assert!(rel.is_zero() || rel.binary_exponent().unwrap() < -245, "m={m}");
        }
    }

    #[test]
    fn div_examples() {
        let c = c0();
        let q = jet(&c, &[1.]).div(&jet(&c, &[1., -1.]), 3).unwrap();
        assert_eq!(as_f64(&q), [1., 1., 1., 1.]);
        let a = jet(&c, &[2., -4., 8.]);
        assert_eq!(as_f64(&a.div(&jet(&c, &[1.]), 2).unwrap()), [2., -4., 8.]);
        assert!(matches!(a.div(&jet(&c, &[0., 1.]), 2).unwrap_err(), Error::Singularity(_)));
    }

    #[test]
    fn recenter_examples() {
        let one = PScalar::one(p());
        let sq = [c0(), c0(), one.clone()];
        assert_eq!(as_f64(&recenter_polynomial(&sq, &one, 2)), [1., 2., 1.]);
        let k = PScalar::from_f64(4.5, p());
        let j = recenter_polynomial(std::slice::from_ref(&k), &PScalar::from_f64(-0.7, p()), 3);
        assert_eq!(as_f64(&j), [4.5, 0., 0., 0.]);
        // truncation below the polynomial degree keeps the low-order terms
        assert_eq!(as_f64(&recenter_polynomial(&sq, &one, 1)), [1., 2.]);
    }

    #[test]
    fn rational_matches_dense_product() {
        let c = PScalar::from_f64(0.25, p());
        let num = jet(&c, &[1., -2., 0.5, 3.]);
        let den = jet(&c, &[2., 0.1, -0.3]);
        let r = RationalJet::new(num, den).unwrap();
        let f = jet(&c, &[0.5, 1.5, -2.5, 0.75, 1.0, -1.0, 2.0]);
        let fast = r.mul_jet(&f, 6).unwrap();
        let dense = r.to_jet(6).unwrap().mul(&f, 6).unwrap();
        for (a, b) in fast.coeffs().iter().zip(dense.coeffs()) {
            let d = (a - b).abs();
            assert!(d.is_zero() || d.binary_exponent().unwrap() < -240);
        }
        assert!(RationalJet::new(jet(&c, &[1.]), jet(&c, &[0., 1.])).is_err());
    }
}
