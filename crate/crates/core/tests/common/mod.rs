//! Shared generators and oracles for the property suites.
#![allow(dead_code)]

use ake_core::domains::DomainSpec;
use ake_core::jets::{MultiIndex, WirtingerJet};
use num_complex::Complex64;
use proptest::prelude::*;

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Points of `C^n` with coordinates in the square of half-width `r`.
pub fn point(n: usize, r: f64) -> impl Strategy<Value = Vec<C>> {
    prop::collection::vec((-r..r, -r..r), n).prop_map(|v| v.into_iter().map(|(a, b)| c(a, b)).collect())
}

/// Nonzero vectors of `C^n`.
pub fn direction(n: usize) -> impl Strategy<Value = Vec<C>> {
    point(n, 1.0).prop_filter("nonzero", |v| v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3)
}

/// `sum a_i |z_i|^2 + sum b_ij |z_i z_j|^2 + Re(sum h_ij z_i z_j) - 1` with
/// `a_i >= 1/2`, `b_ij >= 0`: strictly psh everywhere, negative at the origin.
pub fn spsh_polynomial(n: usize) -> impl Strategy<Value = DomainSpec> {
    let pairs = n * (n + 1) / 2;
    (
        prop::collection::vec(0.5..2.0f64, n),
        prop::collection::vec(0.0..0.5f64, pairs),
        prop::collection::vec((-0.15..0.15f64, -0.15..0.15f64), pairs),
    )
        .prop_map(move |(a, b, h)| {
            let mut terms = vec![(MultiIndex::zero(n), c(-1.0, 0.0))];
            let mut k = 0;
            for i in 0..n {
                terms.push((MultiIndex::from_axes(n, &[i], &[i]), c(a[i], 0.0)));
                for j in i..n {
                    terms.push((MultiIndex::from_axes(n, &[i, j], &[i, j]), c(b[k], 0.0)));
                    let hk = c(h[k].0, h[k].1);
                    terms.push((MultiIndex::from_axes(n, &[i, j], &[]), hk));
                    terms.push((MultiIndex::from_axes(n, &[], &[i, j]), hk.conj()));
                    k += 1;
                }
            }
            DomainSpec::new("random", n, terms, vec![c(0.0, 0.0); n]).unwrap()
        })
}

/// Sum of the jet's Taylor polynomial at the displacement `h`.
pub fn sum_jet(j: &WirtingerJet, h: &[C]) -> C {
    let space = j.space();
    let n = j.n();
    (0..j.coeffs().len())
        .map(|i| {
            let e = space.exponents(i);
            let mut v = j.coeffs()[i];
            for k in 0..n {
                v *= h[k].powu(e[k] as u32) * h[k].conj().powu(e[n + k] as u32);
            }
            v
        })
        .sum()
}

/// All multi-indices of total degree `1..=order` in dimension `n`.
pub fn multi_indices(n: usize, order: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut e = vec![0u32; 2 * n];
    loop {
        let mut k = 0;
        loop {
            if k == 2 * n {
                return out;
            }
            e[k] += 1;
            if e.iter().sum::<u32>() as usize <= order {
                break;
            }
            e[k] = 0;
            k += 1;
        }
        out.push(MultiIndex::new(e[..n].to_vec(), e[n..].to_vec()));
    }
}

/// Wirtinger partial by nested five-point central differences in the real
/// coordinates, with one Richardson step.
pub fn fd_partial(f: &dyn Fn(&[C]) -> f64, p: &[C], m: &MultiIndex, h: f64) -> C {
    let coarse = fd_stencil(f, p, m, h);
    let fine = fd_stencil(f, p, m, h / 2.0);
    (fine * 16.0 - coarse) / 15.0
}

fn fd_stencil(f: &dyn Fn(&[C]) -> f64, p: &[C], m: &MultiIndex, h: f64) -> C {
    let mut factors: Vec<(usize, C, C)> = Vec::new();
    for k in 0..p.len() {
        for _ in 0..m.alpha()[k] {
            factors.push((k, c(0.5, 0.0), c(0.0, -0.5)));
        }
        for _ in 0..m.beta()[k] {
            factors.push((k, c(0.5, 0.0), c(0.0, 0.5)));
        }
    }
    let d = factors.len();
    const OFF: [f64; 4] = [-2.0, -1.0, 1.0, 2.0];
    const W: [f64; 4] = [1.0, -8.0, 8.0, -1.0];
    let mut total = c(0.0, 0.0);
    for choice in 0..(1usize << d) {
        let mut coef = c(1.0, 0.0);
        for (b, &(_, cx, cy)) in factors.iter().enumerate() {
            coef *= if choice >> b & 1 == 0 { cx } else { cy };
        }
        let mut sum = 0.0;
        for odo in 0..4usize.pow(d as u32) {
            let mut q = p.to_vec();
            let mut w = 1.0;
            let mut code = odo;
            for (b, &(k, _, _)) in factors.iter().enumerate() {
                let s = code % 4;
                code /= 4;
                w *= W[s];
                if choice >> b & 1 == 0 {
                    q[k].re += OFF[s] * h;
                } else {
                    q[k].im += OFF[s] * h;
                }
            }
            sum += w * f(&q);
        }
        total += coef * sum / (12.0 * h).powi(d as i32);
    }
    total
}
