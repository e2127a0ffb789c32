//! Truncated power series in holomorphic parameters t_1..t_m.

use std::collections::BTreeMap;

use crate::beltrami::{Beltrami, VectorForm};
use crate::forms::Form;
use crate::scalar::Gr;

/// Exponent vector of a monomial t^K.
pub type MultiIndex = Vec<u32>;

pub trait Coefficient: Clone + PartialEq {
    fn zero_like(n: usize) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn times(&self, s: &Gr) -> Self;
}

impl Coefficient for Form {
    fn zero_like(n: usize) -> Self {
        Form::zero(n)
    }
    fn is_zero(&self) -> bool {
        Form::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn times(&self, s: &Gr) -> Self {
        self.scale(s)
    }
}

impl Coefficient for VectorForm {
    fn zero_like(n: usize) -> Self {
        VectorForm::zero(n)
    }
    fn is_zero(&self) -> bool {
        VectorForm::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn times(&self, s: &Gr) -> Self {
        self.scale(s)
    }
}

pub fn degree(k: &[u32]) -> u32 {
    k.iter().sum()
}

/// All multi-indices of m parameters with total degree d, in descending lexicographic order.
pub fn multi_indices(m: usize, d: u32) -> Vec<MultiIndex> {
    fn rec(m: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == m {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a);
            rec(m, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(m, d, &mut Vec::new(), &mut out);
    out
}

/// All ways to write k = j + l with j ≠ 0 (first part nonzero).
pub fn splits(k: &[u32]) -> Vec<(MultiIndex, MultiIndex)> {
    let mut out = Vec::new();
    let mut j = vec![0u32; k.len()];
    loop {
        if degree(&j) > 0 {
            let l: MultiIndex = k.iter().zip(&j).map(|(a, b)| a - b).collect();
            out.push((j.clone(), l));
        }
        let mut i = 0;
        loop {
            if i == k.len() {
                return out;
            }
            if j[i] < k[i] {
                j[i] += 1;
                break;
            }
            j[i] = 0;
            i += 1;
        }
    }
}

pub fn unit(m: usize, i: usize) -> MultiIndex {
    let mut k = vec![0; m];
    k[i] = 1;
    k
}

pub fn monomial_name(k: &[u32], params: &[String]) -> String {
    let parts: Vec<String> = k
        .iter()
        .zip(params)
        .filter(|(e, _)| **e > 0)
        .map(|(e, p)| if *e == 1 { p.clone() } else { format!("{p}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series<T> {
    pub n: usize,
    pub params: Vec<String>,
    pub order: u32,
    pub coeffs: BTreeMap<MultiIndex, T>,
}

pub type FormSeries = Series<Form>;
pub type BeltramiSeries = Series<VectorForm>;

impl<T: Coefficient> Series<T> {
    pub fn new(n: usize, params: Vec<String>, order: u32) -> Self {
        Series { n, params, order, coeffs: BTreeMap::new() }
    }

    pub fn m(&self) -> usize {
        self.params.len()
    }

    pub fn get(&self, k: &[u32]) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(|| T::zero_like(self.n))
    }

    /// Stores a coefficient; zeros and terms past the truncation order are dropped.
    pub fn set(&mut self, k: MultiIndex, v: T) {
        if v.is_zero() || degree(&k) > self.order {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, v);
        }
    }

    pub fn add_to(&mut self, k: MultiIndex, v: &T) {
        let cur = self.get(&k);
        self.set(k, cur.plus(v));
    }

    /// Σ t^K c_K at numeric parameter values.
    pub fn evaluate(&self, t: &[Gr]) -> T {
        let mut out = T::zero_like(self.n);
        for (k, c) in &self.coeffs {
            let mut w = Gr::one();
            for (e, x) in k.iter().zip(t) {
                for _ in 0..*e {
                    w = &w * x;
                }
            }
            out = out.plus(&c.times(&w));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_degree(&self) -> u32 {
        self.coeffs.keys().map(|k| degree(k)).max().unwrap_or(0)
    }
}

impl BeltramiSeries {
    pub fn from_beltrami_terms(params: Vec<String>, order: u32, linear: &[Beltrami]) -> Self {
        let n = linear.first().map(|b| b.n()).unwrap_or(0);
        let m = params.len();
        let mut s = Series::new(n, params, order);
        for (i, b) in linear.iter().enumerate() {
            s.set(unit(m, i), b.to_vector_form());
        }
        s
    }
}
