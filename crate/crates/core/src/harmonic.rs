//! Adjoints, Laplacians, Green operators and harmonic projections for the
//! coframe-orthonormal metric, on scalar forms and on Λ^{0,s}⊗T^{1,0}.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::beltrami::{del_bar_vector, VectorForm};
use crate::error::{Error, Result};
use crate::forms::{BidegreeBasis, Form, Mono};
use crate::linalg::ExactMatrix;
use crate::presentation::{LiePresentation, Op};
use crate::scalar::Gr;

/// Recorded in reports wherever a metric-dependent quantity appears.
pub const METRIC_NOTE: &str = "coframe-orthonormal Hermitian metric (monomials orthonormal; same on T^{1,0}-valued forms)";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LaplacianKind {
    Dolbeault,
    BottChern,
}

/// Green operator G = □⁺ and harmonic projector H = 1 - □G.
#[derive(Clone, Debug)]
pub struct Green {
    pub laplacian: ExactMatrix,
    pub g: ExactMatrix,
    pub h: ExactMatrix,
}

impl Green {
    fn from_laplacian(l: ExactMatrix) -> Self {
        let g = l.pinv();
        let h = ExactMatrix::identity(l.rows()).sub(&l.mul(&g));
        Green { laplacian: l, g, h }
    }
}

type GreenKey = (LaplacianKind, isize, isize);

pub struct MetricContext<'a> {
    pres: &'a LiePresentation,
    greens: RwLock<HashMap<GreenKey, Arc<Green>>>,
    vector_greens: RwLock<HashMap<usize, Arc<Green>>>,
}

impl<'a> MetricContext<'a> {
    pub fn new(pres: &'a LiePresentation) -> Self {
        MetricContext { pres, greens: RwLock::default(), vector_greens: RwLock::default() }
    }

    pub fn presentation(&self) -> &LiePresentation {
        self.pres
    }

    fn op(&self, op: Op, p: isize, q: isize) -> Arc<ExactMatrix> {
        self.pres.op_matrix(op, p, q)
    }

    /// op* acting on A^{p,q}, with values in A^{(p,q) - shift}.
    pub fn adjoint(&self, op: Op, p: isize, q: isize) -> ExactMatrix {
        let (dp, dq) = op.shift();
        self.op(op, p - dp as isize, q - dq as isize).adjoint()
    }

    pub fn laplacian(&self, kind: LaplacianKind, p: isize, q: isize) -> ExactMatrix {
        let db = |a, b| self.op(Op::DelBar, a, b);
        let dl = |a, b| self.op(Op::Del, a, b);
        match kind {
            LaplacianKind::Dolbeault => {
                let out = db(p, q);
                let inc = db(p, q - 1);
                out.adjoint().mul(&out).add(&inc.mul(&inc.adjoint()))
            }
            LaplacianKind::BottChern => {
                // ∂∂̄∂̄*∂*
                let a = dl(p - 1, q);
                let b = db(p - 1, q - 1);
                let t1 = a.mul(&b).mul(&b.adjoint()).mul(&a.adjoint());
                // ∂̄*∂*∂∂̄
                let c = db(p, q);
                let e = dl(p, q + 1);
                let t2 = c.adjoint().mul(&e.adjoint()).mul(&e).mul(&c);
                // ∂̄*∂∂*∂̄
                let f = dl(p - 1, q + 1);
                let t3 = c.adjoint().mul(&f).mul(&f.adjoint()).mul(&c);
                // ∂*∂̄∂̄*∂
                let g = dl(p, q);
                let h = db(p + 1, q - 1);
                let t4 = g.adjoint().mul(&h).mul(&h.adjoint()).mul(&g);
                let t5 = c.adjoint().mul(&c);
                let t6 = g.adjoint().mul(&g);
                t1.add(&t2).add(&t3).add(&t4).add(&t5).add(&t6)
            }
        }
    }

    pub fn green(&self, kind: LaplacianKind, p: isize, q: isize) -> Arc<Green> {
        if let Some(g) = self.greens.read().unwrap().get(&(kind, p, q)) {
            return g.clone();
        }
        let g = Arc::new(Green::from_laplacian(self.laplacian(kind, p, q)));
        self.greens.write().unwrap().insert((kind, p, q), g.clone());
        g
    }

    fn basis(&self, p: isize, q: isize) -> BidegreeBasis {
        self.pres.basis(p, q)
    }

    /// Applies a matrix acting on A^{p,q} to a form, with the result read in A^{p',q'}.
    fn apply(&self, m: &ExactMatrix, f: &Form, from: (isize, isize), to: (isize, isize)) -> Form {
        let v = self.basis(from.0, from.1).coords(f);
        self.basis(to.0, to.1).form_from(&m.mul_vec(&v))
    }

    pub fn harmonic_part(&self, kind: LaplacianKind, f: &Form, p: isize, q: isize) -> Form {
        let g = self.green(kind, p, q);
        self.apply(&g.h, f, (p, q), (p, q))
    }

    pub fn green_apply(&self, kind: LaplacianKind, f: &Form, p: isize, q: isize) -> Form {
        let g = self.green(kind, p, q);
        self.apply(&g.g, f, (p, q), (p, q))
    }

    /// op* f for f in A^{p,q}.
    pub fn adjoint_apply(&self, op: Op, f: &Form, p: isize, q: isize) -> Form {
        let (dp, dq) = op.shift();
        let to = (p - dp as isize, q - dq as isize);
        self.apply(&self.adjoint(op, p, q), f, (p, q), to)
    }

    /// The d-closed representative γ = Hσ + ∂̄β, β = -(∂∂̄)*G_BC ∂Hσ.
    pub fn canonical_rep(&self, sigma: &Form) -> Result<Form> {
        let pr = self.pres;
        if sigma.is_zero() {
            return Ok(sigma.clone());
        }
        let Some((p, q)) = sigma.pure_bidegree() else {
            return Err(Error::DegreeMismatch("canonical representative needs a pure-type form".into()));
        };
        if !pr.delbar(sigma).is_zero() {
            return Err(Error::NotCocycle("input is not ∂̄-closed".into()));
        }
        let (p, q) = (p as isize, q as isize);
        let harm = self.harmonic_part(LaplacianKind::Dolbeault, sigma, p, q);
        let dh = pr.del(&harm);
        let g = self.green_apply(LaplacianKind::BottChern, &dh, p + 1, q);
        let beta = self.adjoint_apply(Op::DelDelBar, &g, p + 1, q).neg();
        let gamma = harm.add(&pr.delbar(&beta));
        if !pr.d(&gamma).is_zero() {
            return Err(Error::NotSolvable {
                order: "0".into(),
                detail: format!(
                    "∂σ_harm is not ∂∂̄-exact; obstruction ∂γ = {}",
                    pr.del(&gamma).display_with(pr.names())
                ),
            });
        }
        Ok(gamma)
    }

    /// Minimum-norm ∂̄-preimage ∂̄*G_∂̄ y of y in A^{p,q}.
    pub fn delbar_preimage(&self, y: &Form, p: isize, q: isize) -> Form {
        let g = self.green_apply(LaplacianKind::Dolbeault, y, p, q);
        self.adjoint_apply(Op::DelBar, &g, p, q)
    }

    /// Green data of the Laplacian on Λ^{0,s}⊗T^{1,0}.
    pub fn vector_green(&self, s: usize) -> Arc<Green> {
        if let Some(g) = self.vector_greens.read().unwrap().get(&s) {
            return g.clone();
        }
        let out = vector_dbar_matrix(self.pres, s);
        let lap = if s == 0 {
            out.adjoint().mul(&out)
        } else {
            let inc = vector_dbar_matrix(self.pres, s - 1);
            out.adjoint().mul(&out).add(&inc.mul(&inc.adjoint()))
        };
        let g = Arc::new(Green::from_laplacian(lap));
        self.vector_greens.write().unwrap().insert(s, g.clone());
        g
    }

    /// ∂̄*G v for v in Λ^{0,s}⊗T^{1,0}, s ≥ 1.
    pub fn vector_dbar_star_green(&self, v: &VectorForm, s: usize) -> VectorForm {
        let vb = VectorBasis::new(self.pres.n(), s);
        let g = self.vector_green(s);
        let x = g.g.mul_vec(&vb.coords(v));
        let inc = vector_dbar_matrix(self.pres, s - 1);
        VectorBasis::new(self.pres.n(), s - 1).vector_from(&inc.adjoint().mul_vec(&x))
    }

    pub fn vector_harmonic(&self, v: &VectorForm, s: usize) -> VectorForm {
        let vb = VectorBasis::new(self.pres.n(), s);
        vb.vector_from(&self.vector_green(s).h.mul_vec(&vb.coords(v)))
    }

    /// Basis of harmonic Λ^{0,1}⊗T^{1,0} forms in reduced echelon form.
    pub fn harmonic_beltrami_basis(&self) -> Vec<VectorForm> {
        let vb = VectorBasis::new(self.pres.n(), 1);
        let g = self.vector_green(1);
        let ker = g.laplacian.kernel();
        crate::cohomology::reduced_basis(&ker).iter().map(|c| vb.vector_from(c)).collect()
    }
}

/// Ordered basis of Λ^{0,s}⊗T^{1,0}: (τ̄^J, θ_i), J-major.
pub struct VectorBasis {
    pub n: usize,
    pub s: usize,
    pub elems: Vec<(Mono, usize)>,
}

impl VectorBasis {
    pub fn new(n: usize, s: usize) -> Self {
        let forms = BidegreeBasis::new(n, 0, s as isize);
        let elems = forms.monos.iter().flat_map(|&m| (0..n).map(move |i| (m, i))).collect();
        VectorBasis { n, s, elems }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn coords(&self, v: &VectorForm) -> Vec<Gr> {
        self.elems.iter().map(|&(m, i)| v.comp(i).coeff(m)).collect()
    }

    pub fn vector_from(&self, c: &[Gr]) -> VectorForm {
        let mut v = VectorForm::zero(self.n);
        for (&(m, i), x) in self.elems.iter().zip(c) {
            if !x.is_zero() {
                v.comp_mut(i).add_term(m, x);
            }
        }
        v
    }

    pub fn vector(&self, k: usize) -> VectorForm {
        let (m, i) = self.elems[k];
        VectorForm::decomposable(Form::monomial(self.n, m, Gr::one()), i)
    }
}

/// Matrix of ∂̄ from Λ^{0,s}⊗T^{1,0} to Λ^{0,s+1}⊗T^{1,0}.
pub fn vector_dbar_matrix(p: &LiePresentation, s: usize) -> ExactMatrix {
    let src = VectorBasis::new(p.n(), s);
    let tgt = VectorBasis::new(p.n(), s + 1);
    let cols: Vec<Vec<Gr>> = (0..src.len())
        .map(|k| tgt.coords(&del_bar_vector(p, &src.vector(k)).expect("same presentation")))
        .collect();
    ExactMatrix::from_columns(tgt.len(), &cols)
}
