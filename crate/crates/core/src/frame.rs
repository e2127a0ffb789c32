//! Frame changes induced by a Beltrami differential: the block inverse,
//! simultaneous contraction and the extension map e^{i_φ|i_φ̄}.
//!
//! One-form substitutions are 2n×2n matrices in row convention: slot a
//! (τ^a for a < n, τ̄^{a-n} otherwise) is replaced by Σ_b R[a][b] e_b.
//! With that convention simul(R) ∘ simul(S) = simul(S·R).

use std::cell::OnceCell;

use crate::beltrami::{exp_contract, Beltrami};
use crate::error::{Error, Result};
use crate::forms::Form;
use crate::linalg::ExactMatrix;
use crate::scalar::Gr;

/// The coframe change dζ = J(dz + φ dz̄) and its conjugate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameMatrix {
    pub j: ExactMatrix,
    pub phi: Beltrami,
}

impl FrameMatrix {
    pub fn new(j: ExactMatrix, phi: Beltrami) -> Result<Self> {
        let n = phi.n();
        if j.rows() != n || j.cols() != n {
            return Err(Error::PresentationMismatch(n, j.rows()));
        }
        if j.det().is_zero() {
            return Err(Error::SingularOperator("J is not invertible".into()));
        }
        Ok(FrameMatrix { j, phi })
    }

    /// The invariant case J = 1.
    pub fn invariant(phi: Beltrami) -> Self {
        FrameMatrix { j: ExactMatrix::identity(phi.n()), phi }
    }

    /// [[J, Jφ], [J̄φ̄, J̄]].
    pub fn matrix(&self) -> ExactMatrix {
        let n = self.phi.n();
        let p = self.phi.matrix();
        let jb = self.j.conj();
        let mut m = ExactMatrix::zeros(2 * n, 2 * n);
        m.set_block(0, 0, &self.j);
        m.set_block(0, n, &self.j.mul(&p));
        m.set_block(n, 0, &jb.mul(&p.conj()));
        m.set_block(n, n, &jb);
        m
    }

    /// Inverse assembled from the closed block formula.
    pub fn block_inverse(&self) -> Result<ExactMatrix> {
        let n = self.phi.n();
        let p = self.phi.matrix();
        let pb = p.conj();
        let id = ExactMatrix::identity(n);
        let a = id.sub(&p.mul(&pb)).inverse().ok_or(Error::SingularFrame)?;
        let b = id.sub(&pb.mul(&p)).inverse().ok_or(Error::SingularFrame)?;
        let ji = self.j.inverse().ok_or_else(|| Error::SingularOperator("J is not invertible".into()))?;
        let jbi = ji.conj();
        let mut m = ExactMatrix::zeros(2 * n, 2 * n);
        m.set_block(0, 0, &a.mul(&ji));
        m.set_block(0, n, &p.mul(&b).mul(&jbi).neg());
        m.set_block(n, 0, &b.mul(&pb).mul(&ji).neg());
        m.set_block(n, n, &b.mul(&jbi));
        Ok(m)
    }
}

/// det(1 - φ̄φ) ≠ 0.
pub fn check_small(phi: &Beltrami) -> Result<()> {
    let p = phi.matrix();
    if ExactMatrix::identity(phi.n()).sub(&p.conj().mul(&p)).det().is_zero() {
        return Err(Error::SingularFrame);
    }
    Ok(())
}

/// M⨝α: every one-form slot of every monomial is replaced by its image.
pub fn simul_contract(r: &ExactMatrix, alpha: &Form) -> Form {
    let n = alpha.n();
    assert_eq!(r.rows(), 2 * n, "substitution matrix has the wrong size");
    let images: Vec<Form> = (0..2 * n)
        .map(|a| {
            let mut f = Form::zero(n);
            for (b, c) in r.row(a).iter().enumerate() {
                if !c.is_zero() {
                    f.add_term(1 << b, c);
                }
            }
            f
        })
        .collect();
    let mut out = Form::zero(n);
    for (m, c) in alpha.terms() {
        let mut acc = Form::constant(n, c.clone());
        for a in 0..2 * n {
            if m & (1 << a) != 0 {
                acc = acc.wedge(&images[a]);
                if acc.is_zero() {
                    break;
                }
            }
        }
        out.add_assign(&acc);
    }
    out
}

/// 1 + φ + φ̄: τ^i ↦ τ^i + φ^i_j τ̄^j, τ̄^j ↦ τ̄^j + conj(φ^j_k) τ^k.
pub fn extension_matrix(phi: &Beltrami) -> ExactMatrix {
    let n = phi.n();
    let p = phi.matrix();
    let mut m = ExactMatrix::identity(2 * n);
    m.set_block(0, n, &p);
    m.set_block(n, 0, &p.conj());
    m
}

/// 1 - φ̄φ: identity on τ-slots, τ̄^j ↦ τ̄^j - (φ̄φ)^j_l τ̄^l.
pub fn one_minus_phibar_phi(phi: &Beltrami) -> ExactMatrix {
    let n = phi.n();
    let p = phi.matrix();
    let mut m = ExactMatrix::identity(2 * n);
    m.set_block(n, n, &ExactMatrix::identity(n).sub(&p.conj().mul(&p)));
    m
}

pub fn one_minus_phibar_phi_inverse(phi: &Beltrami) -> Result<ExactMatrix> {
    one_minus_phibar_phi(phi).inverse().ok_or(Error::SingularFrame)
}

/// 1 - φ̄φ + φ̄.
pub fn factor_matrix(phi: &Beltrami) -> ExactMatrix {
    let n = phi.n();
    let mut m = one_minus_phibar_phi(phi);
    m.set_block(n, 0, &phi.matrix().conj());
    m
}

/// Base coframe written in the deformed one: (τ; τ̄) = F^{-1}(τ(t); τ̄(t)).
pub fn to_deformed_matrix(phi: &Beltrami) -> Result<ExactMatrix> {
    check_small(phi)?;
    FrameMatrix::invariant(phi.clone()).block_inverse()
}

/// Rewrites a form given in the base coframe in the deformed coframe.
pub fn to_deformed(phi: &Beltrami, alpha: &Form) -> Result<Form> {
    Ok(simul_contract(&to_deformed_matrix(phi)?, alpha))
}

/// Rewrites a form given in the deformed coframe in the base coframe.
pub fn from_deformed(phi: &Beltrami, alpha: &Form) -> Form {
    simul_contract(&extension_matrix(phi), alpha)
}

/// e^{i_φ|i_φ̄}(α) in both coframes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extended {
    /// Expressed in the base coframe τ, τ̄.
    pub base: Form,
    /// Expressed in the deformed coframe τ(t), τ̄(t).
    pub deformed: Form,
}

/// Precomputed frame data for repeated use of the extension map with one φ.
/// Images of the pure holomorphic and antiholomorphic monomials are cached,
/// since every map here is multiplicative over that split.
#[derive(Clone, Debug)]
pub struct ExtensionFrame {
    pub phi: Beltrami,
    v: crate::beltrami::VectorForm,
    to_deformed: ExactMatrix,
    from_deformed: ExactMatrix,
    // (base, deformed) images of τ^I and of τ̄^J, indexed by I and J.
    hol: Vec<OnceCell<(Form, Form)>>,
    anti: Vec<OnceCell<(Form, Form)>>,
    // inverse images of τ(t)^I and of τ̄(t)^J.
    inv_hol: Vec<OnceCell<Form>>,
    inv_anti: Vec<OnceCell<Form>>,
}

fn cells<T>(n: usize) -> Vec<OnceCell<T>> {
    (0..1usize << n).map(|_| OnceCell::new()).collect()
}

impl ExtensionFrame {
    pub fn new(phi: &Beltrami) -> Result<Self> {
        let n = phi.n();
        let to_deformed = to_deformed_matrix(phi)?;
        Ok(ExtensionFrame {
            phi: phi.clone(),
            v: phi.to_vector_form(),
            to_deformed,
            from_deformed: extension_matrix(phi),
            hol: cells(n),
            anti: cells(n),
            inv_hol: cells(n),
            inv_anti: cells(n),
        })
    }

    fn image(&self, m: u32) -> (&(Form, Form), &(Form, Form)) {
        let n = self.phi.n();
        let lo = crate::forms::low_mask(n);
        let h = self.hol[(m & lo) as usize].get_or_init(|| {
            let b = exp_contract(&self.v, &Form::monomial(n, m & lo, Gr::one()));
            let d = simul_contract(&self.to_deformed, &b);
            (b, d)
        });
        let a = self.anti[(m >> n) as usize].get_or_init(|| {
            let b = exp_contract(&self.v.conj(), &Form::monomial(n, m & !lo, Gr::one()));
            let d = simul_contract(&self.to_deformed, &b);
            (b, d)
        });
        (h, a)
    }

    /// Each τ-slot goes through e^{i_φ}, each τ̄-slot through e^{i_φ̄}.
    pub fn extend(&self, alpha: &Form) -> Extended {
        let n = alpha.n();
        let mut base = Form::zero(n);
        let mut deformed = Form::zero(n);
        for (m, c) in alpha.terms() {
            let (h, a) = self.image(*m);
            base.add_scaled(&h.0.wedge(&a.0), c);
            deformed.add_scaled(&h.1.wedge(&a.1), c);
        }
        Extended { base, deformed }
    }

    /// The extension written in the base coframe only.
    pub fn extend_base(&self, alpha: &Form) -> Form {
        let mut base = Form::zero(alpha.n());
        for (m, c) in alpha.terms() {
            let (h, a) = self.image(*m);
            base.add_scaled(&h.0.wedge(&a.0), c);
        }
        base
    }

    /// e^{-i_φ|-i_φ̄}: a form on the deformed structure, given by its
    /// coefficients η in the deformed coframe, goes to
    /// Σ η_{IJ} e^{-i_φ}(τ(t)^I) ∧ e^{-i_φ̄}(τ̄(t)^J).
    pub fn inverse(&self, deformed: &Form) -> Form {
        let n = self.phi.n();
        let lo = crate::forms::low_mask(n);
        let mut out = Form::zero(n);
        for (m, c) in deformed.terms() {
            let h = self.inv_hol[(m & lo) as usize].get_or_init(|| {
                let v = self.v.scale(&Gr::from_int(-1));
                exp_contract(&v, &simul_contract(&self.from_deformed, &Form::monomial(n, m & lo, Gr::one())))
            });
            let a = self.inv_anti[(m >> n) as usize].get_or_init(|| {
                let vb = self.v.scale(&Gr::from_int(-1)).conj();
                exp_contract(&vb, &simul_contract(&self.from_deformed, &Form::monomial(n, m & !lo, Gr::one())))
            });
            out.add_scaled(&h.wedge(a), c);
        }
        out
    }

    pub fn to_deformed(&self, alpha: &Form) -> Form {
        simul_contract(&self.to_deformed, alpha)
    }
}

pub fn extension_map(phi: &Beltrami, alpha: &Form) -> Result<Extended> {
    Ok(ExtensionFrame::new(phi)?.extend(alpha))
}

pub fn inverse_extension(phi: &Beltrami, deformed: &Form) -> Result<Form> {
    Ok(ExtensionFrame::new(phi)?.inverse(deformed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: i64, b: i64, c: i64, d: i64) -> Gr {
        Gr::from_parts(a, b, c, d)
    }

    #[test]
    fn block_inverse_small_cases() {
        let f = FrameMatrix::invariant(Beltrami::zero(2));
        assert_eq!(f.block_inverse().unwrap(), ExactMatrix::identity(4));
        let a = g(2, 1, 1, 1);
        let c = g(1, 3, -1, 2);
        let f = FrameMatrix::new(ExactMatrix::from_rows(vec![vec![a.clone()]]), Beltrami::entry(1, 1, 1, c.clone())).unwrap();
        let inv = f.block_inverse().unwrap();
        let expected = (a * (Gr::one() - &c * &c.conj())).inv().unwrap();
        assert_eq!(*inv.get(0, 0), expected);
        assert_eq!(inv, f.matrix().inverse().unwrap());
    }

    #[test]
    fn singular_frame_is_refused() {
        let phi = Beltrami::entry(1, 1, 1, Gr::one());
        assert_eq!(check_small(&phi), Err(Error::SingularFrame));
        assert!(matches!(extension_map(&phi, &Form::tau(1, 1)), Err(Error::SingularFrame)));
    }

    #[test]
    fn extension_of_one_forms() {
        let n = 2;
        let phi = Beltrami::entry(n, 1, 2, g(1, 2, 0, 1));
        let e = extension_map(&phi, &Form::tau(n, 1)).unwrap();
        assert_eq!(e.base, Form::tau(n, 1).add(&Form::tau_bar(n, 2).scale(&g(1, 2, 0, 1))));
        assert_eq!(e.deformed, Form::tau(n, 1));
        assert_eq!(simul_contract(&extension_matrix(&phi), &Form::tau(n, 1)), e.base);
        let id = simul_contract(&ExactMatrix::identity(2 * n), &e.base);
        assert_eq!(id, e.base);
    }

    #[test]
    fn inverse_extension_composes_to_identity() {
        let n = 2;
        let phi = Beltrami::entry(n, 1, 2, g(1, 2, 1, 3)).add(&Beltrami::entry(n, 2, 1, g(0, 1, 1, 4)));
        for m in 0..16u32 {
            let a = Form::monomial(n, m, g(1, 1, 2, 1));
            let e = extension_map(&phi, &a).unwrap();
            assert_eq!(inverse_extension(&phi, &e.deformed).unwrap(), a);
            assert_eq!(from_deformed(&phi, &e.deformed), e.base);
        }
    }
}
