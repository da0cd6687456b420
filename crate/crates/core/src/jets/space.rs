//! Graded monomial tables shared by all jets of a given dimension.
//!
//! Monomials in the `2n` Wirtinger variables `(z_1..z_n, zbar_1..zbar_n)` are
//! enumerated by total degree, and lexicographically inside each degree. The
//! enumeration does not depend on the maximal order, so the table of order
//! `K - 1` is a prefix of the table of order `K`: truncation is a slice and
//! jets built from different spaces of the same dimension share a layout.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::MultiIndex;

#[derive(Debug)]
pub struct JetSpace {
    n: usize,
    max_order: usize,
    /// Exponent vectors, `2n` entries per monomial: holomorphic first.
    exps: Vec<u8>,
    /// `offsets[d]` is the number of monomials of degree `< d`.
    offsets: Vec<usize>,
    index: HashMap<Vec<u8>, usize>,
    /// `products[i][j]` is the index of `m_i * m_j`, for all `j` with
    /// `deg(m_j) <= max_order - deg(m_i)`.
    products: Vec<Vec<u32>>,
    conj: Vec<u32>,
    weight: Vec<f64>,
    /// Per variable: `(src, dst, exponent)` with `m_dst = m_src / x_var`,
    /// sorted by `src`.
    shifts: Vec<Vec<(u32, u32, f64)>>,
}

fn enumerate_degree(vars: usize, degree: usize, out: &mut Vec<Vec<u8>>) {
    fn rec(pos: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left as u8;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[pos] = e as u8;
            rec(pos + 1, left - e, cur, out);
        }
    }
    let mut cur = vec![0u8; vars];
    rec(0, degree, &mut cur, out);
}

impl JetSpace {
    pub fn new(n: usize, max_order: usize) -> Arc<Self> {
        assert!(n >= 1, "dimension must be positive");
        assert!(max_order < 64, "jet order {max_order} is unreasonably large");
        let vars = 2 * n;
        let mut monos: Vec<Vec<u8>> = Vec::new();
        let mut offsets = vec![0usize];
        for d in 0..=max_order {
            enumerate_degree(vars, d, &mut monos);
            offsets.push(monos.len());
        }
        let index: HashMap<Vec<u8>, usize> =
            monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let degree_of = |i: usize| offsets.partition_point(|&o| o <= i) - 1;

        let mut products = Vec::with_capacity(monos.len());
        let mut sum = vec![0u8; vars];
        for (i, mi) in monos.iter().enumerate() {
            let room = max_order - degree_of(i);
            let row: Vec<u32> = (0..offsets[room + 1])
                .map(|j| {
                    for (s, (a, b)) in sum.iter_mut().zip(mi.iter().zip(&monos[j])) {
                        *s = a + b;
                    }
                    index[&sum] as u32
                })
                .collect();
            products.push(row);
        }

        let conj = monos
            .iter()
            .map(|m| {
                let mut c = m[n..].to_vec();
                c.extend_from_slice(&m[..n]);
                index[&c] as u32
            })
            .collect();

        let weight = monos
            .iter()
            .map(|m| m.iter().map(|&e| factorial(e as usize)).product())
            .collect();

        let mut shifts = vec![Vec::new(); vars];
        for (i, m) in monos.iter().enumerate() {
            for (v, list) in shifts.iter_mut().enumerate() {
                if m[v] > 0 {
                    let mut lower = m.clone();
                    lower[v] -= 1;
                    list.push((i as u32, index[&lower] as u32, m[v] as f64));
                }
            }
        }

        let exps = monos.concat();
        Arc::new(Self { n, max_order, exps, offsets, index, products, conj, weight, shifts })
    }

    /// Process-wide cached table.
    pub fn shared(n: usize, max_order: usize) -> Arc<Self> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<JetSpace>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(s) = cache.lock().unwrap().get(&(n, max_order)) {
            return s.clone();
        }
        let s = Self::new(n, max_order);
        cache.lock().unwrap().entry((n, max_order)).or_insert(s).clone()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// Number of monomials of total degree `<= order`.
    pub fn len_upto(&self, order: usize) -> usize {
        self.offsets[order + 1]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.offsets.partition_point(|&o| o <= i) - 1
    }

    pub fn exponents(&self, i: usize) -> &[u8] {
        &self.exps[2 * self.n * i..2 * self.n * (i + 1)]
    }

    pub fn index_of(&self, m: &MultiIndex) -> Option<usize> {
        if m.n() != self.n {
            return None;
        }
        let key: Vec<u8> = m.alpha().iter().chain(m.beta()).map(|&e| e as u8).collect();
        self.index.get(&key).copied()
    }

    pub(crate) fn product_row(&self, i: usize) -> &[u32] {
        &self.products[i]
    }

    pub(crate) fn conj_index(&self, i: usize) -> usize {
        self.conj[i] as usize
    }

    /// `alpha! * beta!` for monomial `i`.
    pub(crate) fn weight(&self, i: usize) -> f64 {
        self.weight[i]
    }

    pub(crate) fn shifts(&self, var: usize) -> &[(u32, u32, f64)] {
        &self.shifts[var]
    }
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}
