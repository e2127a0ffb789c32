//! Invariant forms with constant coefficients over the coframe {τ, τ̄}.
//!
//! A monomial is a bit mask over 2n slots: bit k < n is τ^{k+1}, bit n + k is
//! τ̄^{k+1}. Increasing bit order is the canonical wedge order τ^I ∧ τ̄^J.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use itertools::Itertools;
use num_traits::{Signed, Zero};

use crate::scalar::Gr;

pub type Mono = u32;

pub const MAX_DIM: usize = 15;

/// Sign of moving monomial `b` past `a` into canonical order, as parity of
/// #{(x in a, y in b): x > y}. `None` when the masks overlap.
pub fn wedge_sign(a: Mono, b: Mono) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut parity = 0u32;
    let mut rest = b;
    while rest != 0 {
        let y = rest.trailing_zeros();
        rest &= rest - 1;
        parity += (a >> y).count_ones();
    }
    Some(parity % 2 == 1)
}

pub fn low_mask(n: usize) -> Mono {
    (1u32 << n) - 1
}

pub fn bidegree(n: usize, m: Mono) -> (usize, usize) {
    ((m & low_mask(n)).count_ones() as usize, (m >> n).count_ones() as usize)
}

/// (I, J) index lists, 1-based.
pub fn index_lists(n: usize, m: Mono) -> (Vec<usize>, Vec<usize>) {
    let i = (0..n).filter(|k| m >> k & 1 == 1).map(|k| k + 1).collect();
    let j = (0..n).filter(|k| m >> (n + k) & 1 == 1).map(|k| k + 1).collect();
    (i, j)
}

pub fn mono_from_lists(n: usize, i: &[usize], j: &[usize]) -> Mono {
    let mut m = 0;
    for &k in i {
        m |= 1 << (k - 1);
    }
    for &k in j {
        m |= 1 << (n + k - 1);
    }
    m
}

/// Conjugate monomial and the sign (-1)^{pq} of reordering.
pub fn conj_mono(n: usize, m: Mono) -> (Mono, bool) {
    let lo = m & low_mask(n);
    let hi = m >> n;
    let (p, q) = (lo.count_ones(), hi.count_ones());
    (hi | (lo << n), (p * q) % 2 == 1)
}

/// Interior product by the frame vector dual to slot `a`: removes the bit with
/// sign (-1)^{#bits below a}.
pub fn interior_mono(a: usize, m: Mono) -> Option<(Mono, bool)> {
    if m >> a & 1 == 0 {
        return None;
    }
    let below = (m & ((1u32 << a) - 1)).count_ones();
    Some((m & !(1 << a), below % 2 == 1))
}

/// Ordered basis of the invariant (p,q)-forms, lexicographic on (I, J).
#[derive(Clone, Debug)]
pub struct BidegreeBasis {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub monos: Vec<Mono>,
    index: HashMap<Mono, usize>,
}

impl BidegreeBasis {
    pub fn new(n: usize, p: isize, q: isize) -> Self {
        let mut monos = Vec::new();
        if p >= 0 && q >= 0 && p as usize <= n && q as usize <= n {
            let is: Vec<Vec<usize>> = (1..=n).combinations(p as usize).collect();
            let js: Vec<Vec<usize>> = (1..=n).combinations(q as usize).collect();
            for i in &is {
                for j in &js {
                    monos.push(mono_from_lists(n, i, j));
                }
            }
        }
        let index = monos.iter().enumerate().map(|(k, &m)| (m, k)).collect();
        BidegreeBasis { n, p: p.max(0) as usize, q: q.max(0) as usize, monos, index }
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn position(&self, m: Mono) -> Option<usize> {
        self.index.get(&m).copied()
    }

    pub fn form(&self, k: usize) -> Form {
        Form::monomial(self.n, self.monos[k], Gr::one())
    }

    /// Coordinates of a form in this basis; components of other bidegrees are ignored.
    pub fn coords(&self, f: &Form) -> Vec<Gr> {
        let mut v = vec![Gr::zero(); self.len()];
        for (m, c) in f.terms() {
            if let Some(k) = self.position(*m) {
                v[k] = c.clone();
            }
        }
        v
    }

    pub fn form_from(&self, v: &[Gr]) -> Form {
        let mut f = Form::zero(self.n);
        for (k, c) in v.iter().enumerate() {
            f.add_term(self.monos[k], c);
        }
        f
    }
}

/// Sort key matching the basis order within a bidegree.
pub fn mono_order_key(n: usize, m: Mono) -> (usize, usize, Vec<usize>, Vec<usize>) {
    let (p, q) = bidegree(n, m);
    let (i, j) = index_lists(n, m);
    (p, q, i, j)
}

/// A (possibly mixed-degree) invariant form.
#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    n: usize,
    terms: BTreeMap<Mono, Gr>,
}

impl Form {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_DIM, "complex dimension {n} exceeds {MAX_DIM}");
        Form { n, terms: BTreeMap::new() }
    }

    pub fn monomial(n: usize, m: Mono, c: Gr) -> Self {
        let mut f = Self::zero(n);
        f.add_term(m, &c);
        f
    }

    pub fn constant(n: usize, c: Gr) -> Self {
        Self::monomial(n, 0, c)
    }

    /// τ^k, 1-based.
    pub fn tau(n: usize, k: usize) -> Self {
        Self::monomial(n, 1 << (k - 1), Gr::one())
    }

    /// τ̄^k, 1-based.
    pub fn tau_bar(n: usize, k: usize) -> Self {
        Self::monomial(n, 1 << (n + k - 1), Gr::one())
    }

    /// One-form with slot index a in 0..2n.
    pub fn slot(n: usize, a: usize) -> Self {
        Self::monomial(n, 1 << a, Gr::one())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Gr)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: Mono) -> Gr {
        self.terms.get(&m).cloned().unwrap_or_else(Gr::zero)
    }

    pub fn add_term(&mut self, m: Mono, c: &Gr) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn sub_term(&mut self, m: Mono, c: &Gr) {
        self.add_term(m, &-c);
    }

    pub fn add_assign(&mut self, o: &Form) {
        for (m, c) in &o.terms {
            self.add_term(*m, c);
        }
    }

    pub fn add_scaled(&mut self, o: &Form, s: &Gr) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &o.terms {
            self.add_term(*m, &(c * s));
        }
    }

    pub fn add(&self, o: &Form) -> Form {
        let mut f = self.clone();
        f.add_assign(o);
        f
    }

    pub fn sub(&self, o: &Form) -> Form {
        let mut f = self.clone();
        for (m, c) in &o.terms {
            f.sub_term(*m, c);
        }
        f
    }

    pub fn neg(&self) -> Form {
        Form { n: self.n, terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn scale(&self, s: &Gr) -> Form {
        if s.is_zero() {
            return Form::zero(self.n);
        }
        Form { n: self.n, terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect() }
    }

    pub fn wedge(&self, o: &Form) -> Form {
        assert_eq!(self.n, o.n, "wedge of forms over different dimensions");
        let mut out = Form::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                if let Some(neg) = wedge_sign(*a, *b) {
                    let c = ca * cb;
                    if neg {
                        out.sub_term(a | b, &c);
                    } else {
                        out.add_term(a | b, &c);
                    }
                }
            }
        }
        out
    }

    pub fn conj(&self) -> Form {
        let mut out = Form::zero(self.n);
        for (m, c) in &self.terms {
            let (mm, neg) = conj_mono(self.n, *m);
            let cc = c.conj();
            out.add_term(mm, &if neg { -cc } else { cc });
        }
        out
    }

    /// Interior product with the frame vector dual to slot a (0..2n).
    pub fn interior(&self, a: usize) -> Form {
        let mut out = Form::zero(self.n);
        for (m, c) in &self.terms {
            if let Some((mm, neg)) = interior_mono(a, *m) {
                if neg {
                    out.sub_term(mm, c);
                } else {
                    out.add_term(mm, c);
                }
            }
        }
        out
    }

    pub fn component(&self, p: usize, q: usize) -> Form {
        Form {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| bidegree(self.n, **m) == (p, q))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn degree_component(&self, k: usize) -> Form {
        Form {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.count_ones() as usize == k)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Sorted list of bidegrees with nonzero components.
    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self.terms.keys().map(|m| bidegree(self.n, *m)).collect();
        v.sort();
        v.dedup();
        v
    }

    /// The bidegree, when the form is homogeneous and nonzero.
    pub fn pure_bidegree(&self) -> Option<(usize, usize)> {
        let b = self.bidegrees();
        (b.len() == 1).then(|| b[0])
    }

    pub fn map_coeffs(&self, f: impl Fn(&Gr) -> Gr) -> Form {
        let mut out = Form::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(*m, &f(c));
        }
        out
    }

    /// Terms in canonical display order.
    pub fn sorted_terms(&self) -> Vec<(Mono, Gr)> {
        let mut v: Vec<(Mono, Gr)> = self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        v.sort_by_key(|(m, _)| mono_order_key(self.n, *m));
        v
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let mono = mono_name(self.n, m, names);
            // Pull a leading minus out of real and purely imaginary coefficients.
            let neg = if c.is_real() { c.re().is_negative() } else { c.re().is_zero() && c.im().is_negative() };
            let c = if neg { -c } else { c };
            let cs = c.to_string();
            let needs_paren = !c.is_real() && !c.re().is_zero();
            let coeff = if needs_paren { format!("({cs})") } else { cs };
            match (k, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            if m == 0 {
                s.push_str(&coeff);
            } else if c.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{coeff}*{mono}"));
            }
        }
        s
    }
}

pub fn mono_name(n: usize, m: Mono, names: &[String]) -> String {
    let (i, j) = index_lists(n, m);
    let mut parts: Vec<String> = i.iter().map(|k| names[k - 1].clone()).collect();
    parts.extend(j.iter().map(|k| format!("~{}", names[k - 1])));
    parts.join("^")
}

pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("t{k}")).collect()
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&default_names(self.n)))
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&default_names(self.n)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: usize, k: usize) -> Form {
        Form::tau(n, k)
    }
    fn tb(n: usize, k: usize) -> Form {
        Form::tau_bar(n, k)
    }

    #[test]
    fn wedge_examples() {
        let n = 2;
        let w = t(n, 1).wedge(&t(n, 2));
        assert_eq!(w.coeff(0b0011), Gr::one());
        assert!(t(n, 1).wedge(&t(n, 1)).is_zero());
        let a = t(n, 1).wedge(&tb(n, 1));
        let b = t(n, 2).wedge(&tb(n, 2));
        let ab = a.wedge(&b);
        assert_eq!(ab.coeff(0b1111), Gr::from_int(-1));
    }

    #[test]
    fn conjugate_examples() {
        let n = 2;
        assert_eq!(t(n, 1).conj(), tb(n, 1));
        let a = t(n, 1).wedge(&tb(n, 2)).scale(&Gr::i());
        // conj(i τ1∧τ̄2) = -i τ̄1∧τ2 = i τ2∧τ̄1
        let expect = t(n, 2).wedge(&tb(n, 1)).scale(&Gr::i());
        assert_eq!(a.conj(), expect);
        assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn basis_order_is_lexicographic() {
        let b = BidegreeBasis::new(3, 1, 1);
        let lists: Vec<_> = b.monos.iter().map(|m| index_lists(3, *m)).collect();
        assert_eq!(lists[0], (vec![1], vec![1]));
        assert_eq!(lists[1], (vec![1], vec![2]));
        assert_eq!(lists[3], (vec![2], vec![1]));
        assert_eq!(b.len(), 9);
        assert!(BidegreeBasis::new(3, -1, 0).is_empty());
        assert!(BidegreeBasis::new(3, 4, 0).is_empty());
    }

    #[test]
    fn interior_signs() {
        let n = 2;
        let w = t(n, 1).wedge(&t(n, 2));
        assert_eq!(w.interior(0), t(n, 2));
        assert_eq!(w.interior(1), t(n, 1).neg());
    }
}
