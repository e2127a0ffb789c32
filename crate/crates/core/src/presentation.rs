//! Complex Lie algebra presentations: the differential on the (1,0)-coframe.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::forms::{bidegree, default_names, BidegreeBasis, Form, Mono};
use crate::linalg::{subspace, ExactMatrix};
use crate::scalar::Gr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Del,
    DelBar,
    DelDelBar,
}

impl Op {
    pub fn shift(self) -> (usize, usize) {
        match self {
            Op::Del => (1, 0),
            Op::DelBar => (0, 1),
            Op::DelDelBar => (1, 1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Op::Del => "del",
            Op::DelBar => "delbar",
            Op::DelDelBar => "deldelbar",
        }
    }
}

#[derive(Default)]
struct Caches {
    d_mono: RwLock<HashMap<Mono, Arc<Form>>>,
    ops: RwLock<HashMap<(Op, isize, isize), Arc<ExactMatrix>>>,
    d_total: RwLock<HashMap<isize, Arc<ExactMatrix>>>,
}

/// The invariant model: dτ^k for each (1,0)-coframe element, extended to
/// conjugates by dτ̄^k = conj(dτ^k).
pub struct LiePresentation {
    pub name: String,
    pub source: Option<String>,
    n: usize,
    names: Vec<String>,
    d_table: Vec<Form>,
    caches: Caches,
}

impl Clone for LiePresentation {
    fn clone(&self) -> Self {
        LiePresentation {
            name: self.name.clone(),
            source: self.source.clone(),
            n: self.n,
            names: self.names.clone(),
            d_table: self.d_table.clone(),
            caches: Caches::default(),
        }
    }
}

impl PartialEq for LiePresentation {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.d_table == o.d_table
    }
}

impl fmt::Debug for LiePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (n = {})", self.name, self.n)?;
        for k in 0..self.n {
            writeln!(f, "  d {} = {}", self.names[k], self.d_table[k].display_with(&self.names))?;
        }
        Ok(())
    }
}

impl LiePresentation {
    /// Validates d^2 = 0 and integrability.
    pub fn new(name: &str, names: Vec<String>, d_table: Vec<Form>) -> Result<Self> {
        let p = Self::unvalidated(name, names, d_table)?;
        p.validate()?;
        Ok(p)
    }

    /// Shape checks only; d^2 and integrability are not examined.
    pub(crate) fn unvalidated(name: &str, names: Vec<String>, d_table: Vec<Form>) -> Result<Self> {
        let n = names.len();
        if d_table.len() != n {
            return Err(Error::Parse(format!("{} differentials for {} coframe elements", d_table.len(), n)));
        }
        if n == 0 || n > crate::forms::MAX_DIM {
            return Err(Error::Parse(format!("unsupported dimension {n}")));
        }
        for (k, f) in d_table.iter().enumerate() {
            if f.n() != n {
                return Err(Error::PresentationMismatch(n, f.n()));
            }
            if f.terms().any(|(m, _)| m.count_ones() != 2) {
                return Err(Error::Parse(format!("d {} is not a 2-form", names[k])));
            }
        }
        let p = LiePresentation {
            name: name.to_string(),
            source: None,
            n,
            names,
            d_table,
            caches: Caches::default(),
        };
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let p = self;
        let n = self.n;
        for k in 0..n {
            let c02 = p.d_table[k].component(0, 2);
            if !c02.is_zero() {
                return Err(Error::Integrability {
                    name: p.names[k].clone(),
                    component: c02.display_with(&p.names),
                });
            }
        }
        for k in 0..n {
            let dd = p.d(&p.d_table[k]);
            if !dd.is_zero() {
                return Err(Error::Jacobi { name: p.names[k].clone(), residual: dd.display_with(&p.names) });
            }
        }
        Ok(())
    }

    pub fn with_source(mut self, source: &str) -> Self {
        self.source = Some(source.to_string());
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// dτ^k, 1-based.
    pub fn d_tau(&self, k: usize) -> &Form {
        &self.d_table[k - 1]
    }

    pub fn d_table(&self) -> &[Form] {
        &self.d_table
    }

    /// d of the coframe one-form in slot a (0..2n).
    pub fn d_slot(&self, a: usize) -> Form {
        if a < self.n {
            self.d_table[a].clone()
        } else {
            self.d_table[a - self.n].conj()
        }
    }

    pub fn d_mono(&self, m: Mono) -> Arc<Form> {
        if let Some(f) = self.caches.d_mono.read().unwrap().get(&m) {
            return f.clone();
        }
        let n = self.n;
        let mut out = Form::zero(n);
        let mut k = 0;
        for a in 0..2 * n {
            if m >> a & 1 == 0 {
                continue;
            }
            let prefix = m & ((1u32 << a) - 1);
            let suffix = m & !((1u32 << (a + 1)) - 1);
            let term = Form::monomial(n, prefix, Gr::one())
                .wedge(&self.d_slot(a))
                .wedge(&Form::monomial(n, suffix, Gr::one()));
            if k % 2 == 0 {
                out.add_assign(&term);
            } else {
                out = out.sub(&term);
            }
            k += 1;
        }
        let out = Arc::new(out);
        self.caches.d_mono.write().unwrap().insert(m, out.clone());
        out
    }

    pub fn d(&self, f: &Form) -> Form {
        let mut out = Form::zero(self.n);
        for (m, c) in f.terms() {
            out.add_scaled(&self.d_mono(*m), c);
        }
        out
    }

    fn d_part(&self, f: &Form, dp: usize) -> Form {
        let mut out = Form::zero(self.n);
        for (m, c) in f.terms() {
            let (p, _) = bidegree(self.n, *m);
            for (mm, cc) in self.d_mono(*m).terms() {
                if bidegree(self.n, *mm).0 == p + dp {
                    out.add_term(*mm, &(cc * c));
                }
            }
        }
        out
    }

    pub fn del(&self, f: &Form) -> Form {
        self.d_part(f, 1)
    }

    pub fn delbar(&self, f: &Form) -> Form {
        self.d_part(f, 0)
    }

    pub fn apply(&self, op: Op, f: &Form) -> Form {
        match op {
            Op::Del => self.del(f),
            Op::DelBar => self.delbar(f),
            Op::DelDelBar => self.del(&self.delbar(f)),
        }
    }

    pub fn basis(&self, p: isize, q: isize) -> BidegreeBasis {
        BidegreeBasis::new(self.n, p, q)
    }

    /// Matrix of op from A^{p,q} to A^{(p,q)+shift}; columns index the source basis.
    pub fn op_matrix(&self, op: Op, p: isize, q: isize) -> Arc<ExactMatrix> {
        if let Some(m) = self.caches.ops.read().unwrap().get(&(op, p, q)) {
            return m.clone();
        }
        let (dp, dq) = op.shift();
        let src = self.basis(p, q);
        let tgt = self.basis(p + dp as isize, q + dq as isize);
        let cols: Vec<Vec<Gr>> = (0..src.len()).map(|k| tgt.coords(&self.apply(op, &src.form(k)))).collect();
        let m = Arc::new(ExactMatrix::from_columns(tgt.len(), &cols));
        self.caches.ops.write().unwrap().insert((op, p, q), m.clone());
        m
    }

    /// Monomials of total degree k in bidegree-basis order.
    pub fn total_basis(&self, k: isize) -> Vec<Mono> {
        let mut v = Vec::new();
        if k < 0 {
            return v;
        }
        for p in 0..=k {
            v.extend(self.basis(p, k - p).monos);
        }
        v
    }

    /// Matrix of d from degree k to degree k + 1.
    pub fn d_total_matrix(&self, k: isize) -> Arc<ExactMatrix> {
        if let Some(m) = self.caches.d_total.read().unwrap().get(&k) {
            return m.clone();
        }
        let src = self.total_basis(k);
        let tgt = self.total_basis(k + 1);
        let idx: HashMap<Mono, usize> = tgt.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut mat = ExactMatrix::zeros(tgt.len(), src.len());
        for (j, m) in src.iter().enumerate() {
            for (mm, c) in self.d_mono(*m).terms() {
                mat.set(idx[mm], j, c.clone());
            }
        }
        let mat = Arc::new(mat);
        self.caches.d_total.write().unwrap().insert(k, mat.clone());
        mat
    }

    /// Component c of [E_a, E_b] over the full frame (slots 0..2n), from
    /// dω(X, Y) = -ω([X, Y]).
    pub fn bracket(&self, a: usize, b: usize) -> Vec<Gr> {
        let n2 = 2 * self.n;
        let mut v = vec![Gr::zero(); n2];
        if a == b {
            return v;
        }
        let (lo, hi, neg) = if a < b { (a, b, false) } else { (b, a, true) };
        let m: Mono = (1 << lo) | (1 << hi);
        for (c, slot) in v.iter_mut().enumerate() {
            let coef = self.d_slot(c).coeff(m);
            *slot = if neg { coef } else { -coef };
        }
        v
    }

    /// Every dτ^k is of pure type (2,0).
    pub fn is_complex_parallelizable(&self) -> bool {
        self.d_table.iter().all(|f| f.terms().all(|(m, _)| bidegree(self.n, *m) == (2, 0)))
    }

    /// Lower central series of the complexified algebra reaches zero.
    pub fn is_nilpotent(&self) -> bool {
        let n2 = 2 * self.n;
        let ads: Vec<ExactMatrix> = (0..n2)
            .map(|a| ExactMatrix::from_columns(n2, &(0..n2).map(|b| self.bracket(a, b)).collect::<Vec<_>>()))
            .collect();
        let mut g = ExactMatrix::identity(n2);
        for _ in 0..=n2 {
            if g.cols() == 0 {
                return true;
            }
            let mut next = ExactMatrix::zeros(n2, 0);
            for ad in &ads {
                next = next.hstack(&ad.mul(&g));
            }
            let next = subspace::basis(&next);
            if next.cols() == g.cols() {
                return false;
            }
            g = next;
        }
        g.cols() == 0
    }

    pub fn builtin(name: &str) -> Result<Self> {
        let key: String = name.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
        if key == "iwasawa" {
            return Ok(iwasawa());
        }
        if key == "cfp" {
            return Ok(cfp());
        }
        if let Some(rest) = key.strip_prefix("torus") {
            let digits = rest.trim_start_matches('(').trim_end_matches(')');
            if let Ok(n) = digits.parse::<usize>() {
                if (1..=crate::forms::MAX_DIM).contains(&n) {
                    return Ok(torus(n));
                }
            }
        }
        Err(Error::UnknownBuiltin(name.to_string()))
    }
}

pub fn torus(n: usize) -> LiePresentation {
    LiePresentation::new(&format!("torus({n})"), default_names(n), vec![Form::zero(n); n])
        .expect("torus is valid")
        .with_source("builtin")
}

/// dτ¹ = dτ² = 0, dτ³ = -τ¹∧τ².
pub fn iwasawa() -> LiePresentation {
    let n = 3;
    let d3 = Form::tau(n, 1).wedge(&Form::tau(n, 2)).neg();
    LiePresentation::new("iwasawa", default_names(n), vec![Form::zero(n), Form::zero(n), d3])
        .expect("iwasawa is valid")
        .with_source("builtin")
}

/// Five-dimensional 3-step nilpotent example with a jumping h^{1,1}.
///
/// The equations are kept exactly as stated for this example. They do not
/// satisfy d^2 = 0: d(dτ5) = ½((i-1)τ1∧τ4∧τ̄1 + (1+i)τ1∧τ̄1∧τ̄4), so the
/// presentation is built without validation and `validate()` reports it.
pub fn cfp() -> LiePresentation {
    let n = 5;
    let t = |k| Form::tau(n, k);
    let tb = |k| Form::tau_bar(n, k);
    let d3 = t(1).wedge(&tb(1)).add(&t(1).wedge(&tb(4)).scale(&Gr::from_parts(1, 1, 1, 1))).neg();
    let half = Gr::from_ratio(1, 2);
    let d5 = t(1).wedge(&tb(3)).add(&t(3).wedge(&tb(1))).sub(&t(2).wedge(&tb(2))).scale(&half);
    LiePresentation::unvalidated("cfp", default_names(n), vec![Form::zero(n), Form::zero(n), d3, Form::zero(n), d5])
        .expect("cfp has the right shape")
        .with_source("builtin")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_monos(n: usize) -> impl Iterator<Item = Mono> {
        0..(1u32 << (2 * n))
    }

    #[test]
    fn builtins_parse() {
        assert_eq!(LiePresentation::builtin("torus(2)").unwrap().n(), 2);
        assert_eq!(LiePresentation::builtin("iwasawa").unwrap().n(), 3);
        assert_eq!(LiePresentation::builtin("cfp").unwrap().n(), 5);
        assert!(matches!(LiePresentation::builtin("heisenberg"), Err(Error::UnknownBuiltin(_))));
        let iw = iwasawa();
        assert_eq!(iw.d_tau(3).coeff(0b011), Gr::from_int(-1));
        assert!(torus(2).d_table().iter().all(Form::is_zero));
    }

    #[test]
    fn complex_differentials_square_to_zero() {
        for p in [torus(2), iwasawa()] {
            let n = p.n();
            for m in all_monos(n) {
                let f = Form::monomial(n, m, Gr::one());
                assert!(p.del(&p.del(&f)).is_zero());
                assert!(p.delbar(&p.delbar(&f)).is_zero());
                let anti = p.del(&p.delbar(&f)).add(&p.delbar(&p.del(&f)));
                assert!(anti.is_zero());
                assert_eq!(p.d(&f).conj(), p.d(&f.conj()));
                assert_eq!(p.d(&f), p.del(&f).add(&p.delbar(&f)));
            }
        }
    }

    #[test]
    fn cfp_equations_fail_jacobi_on_t5() {
        let c = cfp();
        match c.validate() {
            Err(Error::Jacobi { name, .. }) => assert_eq!(name, "t5"),
            other => panic!("unexpected {other:?}"),
        }
        let n = 5;
        let dd = c.d(c.d_tau(5));
        let expected = Form::tau(n, 1)
            .wedge(&Form::tau(n, 4))
            .wedge(&Form::tau_bar(n, 1))
            .scale(&Gr::from_parts(-1, 2, 1, 2))
            .add(&Form::tau(n, 1).wedge(&Form::tau_bar(n, 1)).wedge(&Form::tau_bar(n, 4)).scale(&Gr::from_parts(1, 2, 1, 2)));
        assert_eq!(dd, expected);
        for k in 1..=4 {
            assert!(c.d(c.d_tau(k)).is_zero());
        }
    }

    #[test]
    fn cyclic_example_is_valid() {
        let n = 3;
        let t = |k| Form::tau(n, k);
        let p = LiePresentation::new("cyc", default_names(n), vec![t(2).wedge(&t(3)), t(3).wedge(&t(1)), t(1).wedge(&t(2))]);
        assert!(p.is_ok());
        assert!(!p.unwrap().is_nilpotent());
    }

    #[test]
    fn rejects_bad_structures() {
        let n = 2;
        let bad = LiePresentation::new(
            "bad",
            default_names(n),
            vec![Form::tau_bar(n, 1).wedge(&Form::tau_bar(n, 2)), Form::zero(n)],
        );
        assert!(matches!(bad, Err(Error::Integrability { .. })));
        let n = 3;
        let t = |k| Form::tau(n, k);
        // d(dτ3) = dτ1∧τ3 - τ1∧dτ3 = τ1∧τ2∧τ3
        let bad = LiePresentation::new("bad", default_names(n), vec![t(1).wedge(&t(2)), Form::zero(n), t(1).wedge(&t(3))]);
        assert!(matches!(bad, Err(Error::Jacobi { .. })));
    }

    #[test]
    fn brackets_and_flags() {
        let iw = iwasawa();
        let b = iw.bracket(0, 1);
        assert_eq!(b[2], Gr::one());
        assert!(iw.is_complex_parallelizable());
        assert!(iw.is_nilpotent());
        let c = cfp();
        // [θ̄1, θ4] = (1 - i) θ̄3
        let v = c.bracket(5, 3);
        assert_eq!(v[7], Gr::from_parts(1, 1, -1, 1));
        assert!(v.iter().enumerate().all(|(k, x)| k == 7 || x.is_zero()));
        for i in 2..=5 {
            assert!(c.bracket(4 + i, 3).iter().all(Gr::is_zero));
        }
        assert!(!c.is_complex_parallelizable());
        assert!(c.is_nilpotent());
    }
}
