//! Vector-valued forms, Beltrami differentials and the contraction calculus.

use std::fmt;

use crate::error::{Error, Result};
use crate::forms::{bidegree, Form};
use crate::linalg::ExactMatrix;
use crate::presentation::LiePresentation;
use crate::scalar::Gr;

/// Σ_a comps[a] ⊗ E_a over the full frame: E_a = θ_{a+1} for a < n and
/// θ̄_{a-n+1} for a ≥ n.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorForm {
    n: usize,
    comps: Vec<Form>,
}

impl VectorForm {
    pub fn zero(n: usize) -> Self {
        VectorForm { n, comps: vec![Form::zero(n); 2 * n] }
    }

    /// α ⊗ E_a.
    pub fn decomposable(alpha: Form, a: usize) -> Self {
        let mut v = Self::zero(alpha.n());
        v.comps[a] = alpha;
        v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn comp(&self, a: usize) -> &Form {
        &self.comps[a]
    }

    pub fn comp_mut(&mut self, a: usize) -> &mut Form {
        &mut self.comps[a]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Form::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        VectorForm { n: self.n, comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        VectorForm { n: self.n, comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, s: &Gr) -> Self {
        VectorForm { n: self.n, comps: self.comps.iter().map(|a| a.scale(s)).collect() }
    }

    pub fn add_scaled(&mut self, o: &Self, s: &Gr) {
        for (a, b) in self.comps.iter_mut().zip(&o.comps) {
            a.add_scaled(b, s);
        }
    }

    /// Complex conjugate: conj(α ⊗ θ_i) = conj(α) ⊗ θ̄_i.
    pub fn conj(&self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for a in 0..2 * n {
            let b = if a < n { a + n } else { a - n };
            out.comps[b] = self.comps[a].conj();
        }
        out
    }

    /// i_V α = Σ_a comps[a] ∧ (i_{E_a} α).
    pub fn contract(&self, alpha: &Form) -> Form {
        assert_eq!(self.n, alpha.n(), "contraction across different dimensions");
        let mut out = Form::zero(self.n);
        for (a, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let inner = alpha.interior(a);
            if !inner.is_zero() {
                out.add_assign(&c.wedge(&inner));
            }
        }
        out
    }

    /// Whether every leg lies in Λ^{0,s} ⊗ T^{1,0}.
    pub fn is_holomorphic_valued(&self) -> bool {
        let n = self.n;
        self.comps[n..].iter().all(Form::is_zero)
            && self.comps[..n].iter().all(|f| f.terms().all(|(m, _)| bidegree(n, *m).0 == 0))
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let n = self.n;
        let mut parts = Vec::new();
        for (a, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = if a < n { format!("d/d{}", names[a]) } else { format!("d/d~{}", names[a - n]) };
            parts.push(format!("({}) (x) {}", c.display_with(names), v));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Debug for VectorForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&crate::forms::default_names(self.n)))
    }
}

/// φ = Σ φ^i_{j̄} τ̄^j ⊗ θ_i stored as an n×n grid c[i][j] (0-based).
#[derive(Clone, PartialEq, Eq)]
pub struct Beltrami {
    n: usize,
    c: Vec<Vec<Gr>>,
}

impl Beltrami {
    pub fn zero(n: usize) -> Self {
        Beltrami { n, c: vec![vec![Gr::zero(); n]; n] }
    }

    pub fn from_grid(c: Vec<Vec<Gr>>) -> Self {
        let n = c.len();
        assert!(c.iter().all(|r| r.len() == n), "Beltrami grid must be square");
        Beltrami { n, c }
    }

    /// coeff · τ̄^j ⊗ θ_i with 1-based i (vector) and j (conjugate coframe).
    pub fn entry(n: usize, i: usize, j: usize, coeff: Gr) -> Self {
        let mut b = Self::zero(n);
        b.c[i - 1][j - 1] = coeff;
        b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// φ^i_{j̄}, 0-based.
    pub fn get(&self, i: usize, j: usize) -> &Gr {
        &self.c[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Gr) {
        self.c[i][j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().flatten().all(Gr::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                out.c[i][j] += &o.c[i][j];
            }
        }
        out
    }

    pub fn scale(&self, s: &Gr) -> Self {
        Beltrami { n: self.n, c: self.c.iter().map(|r| r.iter().map(|v| v * s).collect()).collect() }
    }

    /// The grid as a matrix M[i][j] = φ^i_{j̄}.
    pub fn matrix(&self) -> ExactMatrix {
        ExactMatrix::from_rows(self.c.clone())
    }

    pub fn to_vector_form(&self) -> VectorForm {
        let n = self.n;
        let mut v = VectorForm::zero(n);
        for i in 0..n {
            for j in 0..n {
                if !self.c[i][j].is_zero() {
                    v.comps[i].add_term(1 << (n + j), &self.c[i][j]);
                }
            }
        }
        v
    }

    /// Inverse of `to_vector_form`; None unless the input is (0,1)⊗T^{1,0}.
    pub fn from_vector_form(v: &VectorForm) -> Option<Self> {
        let n = v.n;
        let mut b = Self::zero(n);
        for a in 0..2 * n {
            for (m, c) in v.comps[a].terms() {
                if a >= n || m.count_ones() != 1 || m.trailing_zeros() < n as u32 {
                    return None;
                }
                b.c[a][m.trailing_zeros() as usize - n] = c.clone();
            }
        }
        Some(b)
    }

    pub fn contract(&self, alpha: &Form) -> Form {
        self.to_vector_form().contract(alpha)
    }

    pub fn display_with(&self, names: &[String]) -> String {
        self.to_vector_form().display_with(names)
    }
}

impl fmt::Debug for Beltrami {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&crate::forms::default_names(self.n)))
    }
}

fn check_dims(p: &LiePresentation, n: usize) -> Result<()> {
    if p.n() != n {
        return Err(Error::PresentationMismatch(p.n(), n));
    }
    Ok(())
}

/// e^{i_V} α = Σ_k i_V^k α / k!.
pub fn exp_contract(v: &VectorForm, alpha: &Form) -> Form {
    let mut out = alpha.clone();
    let mut term = alpha.clone();
    let mut k = 1i64;
    loop {
        term = v.contract(&term).scale(&Gr::from_ratio(1, k));
        if term.is_zero() {
            break;
        }
        out.add_assign(&term);
        k += 1;
    }
    out
}

/// Schouten bracket of two (0,1)⊗T^{1,0} forms; on decomposables
/// [α⊗θ_a, β⊗θ_b] = α∧β⊗[θ_a,θ_b]^{1,0} + α∧(i_{θ_a}dβ)^{0,1}⊗θ_b + β∧(i_{θ_b}dα)^{0,1}⊗θ_a.
pub fn schouten_bracket(p: &LiePresentation, v: &VectorForm, w: &VectorForm) -> Result<VectorForm> {
    check_dims(p, v.n)?;
    check_dims(p, w.n)?;
    let n = p.n();
    let mut out = VectorForm::zero(n);
    for a in 0..n {
        let alpha = &v.comps[a];
        if alpha.is_zero() {
            continue;
        }
        let d_alpha = p.d(alpha);
        for b in 0..n {
            let beta = &w.comps[b];
            if beta.is_zero() {
                continue;
            }
            let ab = alpha.wedge(beta);
            if !ab.is_zero() {
                let br = p.bracket(a, b);
                for (c, coef) in br.iter().enumerate().take(n) {
                    if !coef.is_zero() {
                        out.comps[c].add_scaled(&ab, coef);
                    }
                }
            }
            let t2 = alpha.wedge(&p.d(beta).interior(a).component(0, 1));
            out.comps[b].add_assign(&t2);
            let t3 = beta.wedge(&d_alpha.interior(b).component(0, 1));
            out.comps[a].add_assign(&t3);
        }
    }
    Ok(out)
}

/// ∂̄ on Λ^{0,s}⊗T^{1,0}: ∂̄(α⊗θ_i) = ∂̄α⊗θ_i + (-1)^s α∧∂̄θ_i with
/// ∂̄θ_i = Σ_l τ̄^l ⊗ [θ̄_l, θ_i]^{1,0}.
pub fn del_bar_vector(p: &LiePresentation, v: &VectorForm) -> Result<VectorForm> {
    check_dims(p, v.n)?;
    let n = p.n();
    let mut dbar_theta: Vec<VectorForm> = Vec::with_capacity(n);
    for i in 0..n {
        let mut t = VectorForm::zero(n);
        for l in 0..n {
            let br = p.bracket(n + l, i);
            for (k, coef) in br.iter().enumerate().take(n) {
                if !coef.is_zero() {
                    t.comps[k].add_term(1 << (n + l), coef);
                }
            }
        }
        dbar_theta.push(t);
    }
    let mut out = VectorForm::zero(n);
    for i in 0..n {
        let alpha = &v.comps[i];
        if alpha.is_zero() {
            continue;
        }
        out.comps[i].add_assign(&p.delbar(alpha));
        for (m, c) in alpha.terms() {
            let s = m.count_ones();
            let mono = Form::monomial(n, *m, if s % 2 == 0 { c.clone() } else { -c });
            for k in 0..n {
                let t = &dbar_theta[i].comps[k];
                if !t.is_zero() {
                    out.comps[k].add_assign(&mono.wedge(t));
                }
            }
        }
    }
    Ok(out)
}

/// ∂̄φ - ½[φ,φ].
pub fn integrability_defect(p: &LiePresentation, phi: &Beltrami) -> Result<VectorForm> {
    let v = phi.to_vector_form();
    let db = del_bar_vector(p, &v)?;
    let br = schouten_bracket(p, &v, &v)?;
    Ok(db.sub(&br.scale(&Gr::from_ratio(1, 2))))
}

pub fn is_integrable(p: &LiePresentation, phi: &Beltrami) -> Result<bool> {
    Ok(integrability_defect(p, phi)?.is_zero())
}

/// 𝓛^{1,0}_φ α = (-1)^q ∂(i_φ α) + i_φ(∂α) with q = 1.
pub fn lie_derivative_10(p: &LiePresentation, phi: &VectorForm, alpha: &Form) -> Result<Form> {
    check_dims(p, phi.n)?;
    Ok(phi.contract(&p.del(alpha)).sub(&p.del(&phi.contract(alpha))))
}
