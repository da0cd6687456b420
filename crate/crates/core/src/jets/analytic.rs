use num_complex::Complex64;

use super::WirtingerJet;
use crate::error::{Error, Result};

/// Scalar functions that can be composed with a jet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticFn {
    Reciprocal,
    Log,
    Exp,
    PowReal(f64),
}

/// Imaginary parts below this (relative) size are treated as roundoff when a
/// real positive constant term is required.
const REALITY_TOL: f64 = 1e-12;

fn real_positive(c: Complex64) -> Result<f64> {
    if c.re > 0.0 && c.im.abs() <= REALITY_TOL * c.re.max(1.0) {
        Ok(c.re)
    } else {
        Err(Error::LogOfNonpositive { re: c.re, im: c.im })
    }
}

/// Taylor coefficients `f^(m)(c) / m!` for `m = 0..=order`.
fn taylor_coeffs(f: AnalyticFn, c: Complex64, order: usize) -> Result<Vec<Complex64>> {
    let mut d = Vec::with_capacity(order + 1);
    match f {
        AnalyticFn::Reciprocal => {
            if c.norm() == 0.0 {
                return Err(Error::DivisionByZeroConstantTerm);
            }
            let inv = c.inv();
            let mut t = inv;
            for _ in 0..=order {
                d.push(t);
                t *= -inv;
            }
        }
        AnalyticFn::Log => {
            let x = real_positive(c)?;
            d.push(Complex64::new(x.ln(), 0.0));
            let inv = 1.0 / x;
            let mut p = inv;
            for m in 1..=order {
                let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
                d.push(Complex64::new(sign * p / m as f64, 0.0));
                p *= inv;
            }
        }
        AnalyticFn::Exp => {
            let e = c.exp();
            let mut t = e;
            for m in 0..=order {
                d.push(t);
                t /= (m + 1) as f64;
            }
        }
        AnalyticFn::PowReal(r) => {
            let x = real_positive(c).map_err(|_| {
                if c.norm() == 0.0 {
                    Error::DivisionByZeroConstantTerm
                } else {
                    Error::LogOfNonpositive { re: c.re, im: c.im }
                }
            })?;
            // binom(r, m) x^(r - m)
            let mut t = x.powf(r);
            for m in 0..=order {
                d.push(Complex64::new(t, 0.0));
                t *= (r - m as f64) / ((m + 1) as f64 * x);
            }
        }
    }
    Ok(d)
}

fn integer_power(j: &WirtingerJet, e: u64) -> Result<WirtingerJet> {
    let mut result = WirtingerJet::constant(j.space(), j.order(), Complex64::new(1.0, 0.0));
    let mut base = j.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&base)?;
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base)?;
        }
    }
    Ok(result)
}

pub(super) fn compose(j: &WirtingerJet, f: AnalyticFn) -> Result<WirtingerJet> {
    if let AnalyticFn::PowReal(r) = f {
        if r.fract() == 0.0 && r.abs() <= 64.0 {
            return if r >= 0.0 {
                integer_power(j, r as u64)
            } else {
                integer_power(&j.recip()?, (-r) as u64)
            };
        }
    }
    let c = j.value();
    let k = j.order();
    let d = taylor_coeffs(f, c, k)?;
    let mut nil = j.clone();
    nil.coeffs[0] = Complex64::new(0.0, 0.0);
    // Horner in the nilpotent part: terms beyond order K vanish.
    let mut acc = WirtingerJet::constant(j.space(), k, d[k]);
    for m in (0..k).rev() {
        acc = acc.mul(&nil)?.add_scalar(d[m]);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::{coordinate_jets, JetSpace};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ball_psi(base: &[Complex64], order: usize) -> WirtingerJet {
        let space = JetSpace::new(base.len(), order);
        let z = coordinate_jets(&space, order, base).unwrap();
        let mut acc = WirtingerJet::constant(&space, order, c(1.0, 0.0));
        for zi in &z {
            acc = acc.sub(&zi.mul(&zi.conjugate()).unwrap()).unwrap();
        }
        acc
    }

    #[test]
    fn ball_potential_hessian() {
        // -log(1 - |z|^2) at (0.5, 0): g_11 = 1/(3/4) + (1/4)/(9/16) = 16/9.
        let psi = ball_psi(&[c(0.5, 0.0), c(0.0, 0.0)], 2);
        let g = psi.ln().unwrap().neg();
        let g11 = g.partial(&[0], &[0]).unwrap();
        assert!((g11 - c(16.0 / 9.0, 0.0)).norm() < 1e-14);
        let g22 = g.partial(&[1], &[1]).unwrap();
        assert!((g22 - c(4.0 / 3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn pow_one_is_identity() {
        let psi = ball_psi(&[c(0.2, 0.1), c(-0.3, 0.0)], 4);
        let p = psi.powf(1.0).unwrap();
        for (a, b) in p.coeffs().iter().zip(psi.coeffs()) {
            assert!((a - b).norm() < 1e-15);
        }
        let cube_root = psi.powf(1.0 / 3.0).unwrap();
        let back = cube_root.mul(&cube_root).unwrap().mul(&cube_root).unwrap();
        for (a, b) in back.coeffs().iter().zip(psi.coeffs()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn reciprocal_inverts() {
        let psi = ball_psi(&[c(0.2, 0.1), c(-0.3, 0.0)], 5).add_scalar(c(0.0, 0.5));
        let prod = psi.mul(&psi.recip().unwrap()).unwrap();
        assert!((prod.value() - c(1.0, 0.0)).norm() < 1e-14);
        assert!(prod.coeffs()[1..].iter().all(|x| x.norm() < 1e-13));
    }

    #[test]
    fn log_rejects_nonpositive() {
        let psi = ball_psi(&[c(2.0, 0.0)], 2);
        assert!(matches!(psi.ln(), Err(Error::LogOfNonpositive { .. })));
        let z = WirtingerJet::constant(&JetSpace::new(1, 2), 2, c(0.0, 0.0));
        assert!(matches!(z.recip(), Err(Error::DivisionByZeroConstantTerm)));
        assert!(z.powf(0.5).is_err());
    }

    #[test]
    fn negative_integer_power() {
        let psi = ball_psi(&[c(0.1, 0.0)], 4);
        let a = psi.powf(-2.0).unwrap();
        let b = psi.mul(&psi).unwrap().recip().unwrap();
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert!((x - y).norm() < 1e-13);
        }
    }
}
