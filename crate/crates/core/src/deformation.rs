//! Deformed structure equations, Hodge numbers of deformed fibres and the
//! ∂̄-extension obstruction ([∂, i_φ] + ∂̄)((1 - φ̄φ)⨝σ).

use crate::beltrami::{integrability_defect, Beltrami, VectorForm};
use crate::cohomology::{dimension, Theory};
use crate::error::{Error, Result};
use crate::forms::Form;
use crate::frame::{check_small, one_minus_phibar_phi, one_minus_phibar_phi_inverse, simul_contract, ExtensionFrame};
use crate::linalg::ExactMatrix;
use crate::presentation::LiePresentation;
use crate::series::{splits, BeltramiSeries, FormSeries, MultiIndex, Series};

#[derive(Clone, Debug)]
pub struct DeformedPresentation {
    pub phi: Beltrami,
    /// The structure in the coframe τ^k(t) = τ^k + φ⌟τ^k.
    pub presentation: LiePresentation,
    /// Whether d^2 = 0 and integrability were verified on the result.
    pub validated: bool,
    pub frame: ExtensionFrame,
    /// (1 - φ̄φ)^{-1} as a substitution matrix.
    pub factor_inverse: ExactMatrix,
}

/// d τ^k(t) rewritten in the deformed coframe.
pub fn deform_structure(p: &LiePresentation, phi: &Beltrami) -> Result<DeformedPresentation> {
    let n = p.n();
    if phi.n() != n {
        return Err(Error::PresentationMismatch(n, phi.n()));
    }
    check_small(phi)?;
    let defect = integrability_defect(p, phi)?;
    if !defect.is_zero() {
        return Err(Error::NotIntegrable(defect.display_with(p.names())));
    }
    let v = phi.to_vector_form();
    let frame = ExtensionFrame::new(phi)?;
    let mut table = Vec::with_capacity(n);
    for k in 1..=n {
        let tk = Form::tau(n, k);
        let base = p.d(&tk.add(&v.contract(&tk)));
        let new = frame.to_deformed(&base);
        let c02 = new.component(0, 2);
        if !c02.is_zero() {
            return Err(Error::NotIntegrable(format!(
                "d {}(t) has (0,2)-part {}",
                p.names()[k - 1],
                c02.display_with(p.names())
            )));
        }
        table.push(new);
    }
    let name = format!("{}[phi]", p.name);
    let validated = p.validate().is_ok();
    let presentation = if validated {
        LiePresentation::new(&name, p.names().to_vec(), table)?
    } else {
        LiePresentation::unvalidated(&name, p.names().to_vec(), table)?
    };
    Ok(DeformedPresentation {
        phi: phi.clone(),
        presentation: presentation.with_source("deformed"),
        validated,
        frame,
        factor_inverse: one_minus_phibar_phi_inverse(phi)?,
    })
}

pub fn deformed_hodge(p: &LiePresentation, phi: &Beltrami, theory: Theory, pp: usize, q: usize) -> Result<usize> {
    let d = deform_structure(p, phi)?;
    Ok(dimension(&d.presentation, theory, pp as isize, q as isize))
}

/// ([∂, i_φ] + ∂̄) x = ∂(i_φ x) - i_φ(∂x) + ∂̄x.
pub fn obstruction_operator(p: &LiePresentation, v: &VectorForm, x: &Form) -> Form {
    p.del(&v.contract(x)).sub(&v.contract(&p.del(x))).add(&p.delbar(x))
}

/// ([∂, i_φ] + ∂̄)((1 - φ̄φ)⨝σ).
pub fn obstruction(p: &LiePresentation, phi: &Beltrami, sigma: &Form) -> Result<Form> {
    if phi.n() != p.n() || sigma.n() != p.n() {
        return Err(Error::PresentationMismatch(p.n(), if phi.n() != p.n() { phi.n() } else { sigma.n() }));
    }
    check_small(phi)?;
    let x = simul_contract(&one_minus_phibar_phi(phi), sigma);
    Ok(obstruction_operator(p, &phi.to_vector_form(), &x))
}

/// Coefficients of ([∂, i_φ(t)] + ∂̄) σ̃_t for holomorphic series φ(t), σ̃_t.
pub fn obstruction_series(p: &LiePresentation, phi: &BeltramiSeries, sigma: &FormSeries) -> FormSeries {
    let order = phi.order.max(sigma.order);
    let mut out: FormSeries = Series::new(p.n(), sigma.params.clone(), order);
    for (k, s) in &sigma.coeffs {
        out.add_to(k.clone(), &p.delbar(s));
    }
    for (j, v) in &phi.coeffs {
        for (l, s) in &sigma.coeffs {
            let k: MultiIndex = j.iter().zip(l).map(|(a, b)| a + b).collect();
            let t = p.del(&v.contract(s)).sub(&v.contract(&p.del(s)));
            out.add_to(k, &t);
        }
    }
    out
}

/// Both sides of the obstruction equivalence for one σ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionCheck {
    pub obstruction_zero: bool,
    pub dbar_t_zero: bool,
    /// ∂̄_t(e^{i_φ|i_φ̄}σ) = e^{i_φ|i_φ̄}((1 - φ̄φ)^{-1}⨝ obstruction) componentwise.
    pub identity_holds: bool,
}

impl ObstructionCheck {
    pub fn agree(&self) -> bool {
        self.obstruction_zero == self.dbar_t_zero && self.identity_holds
    }
}

/// Compares the obstruction with ∂̄_t of the extended form inside the
/// deformed presentation.
pub fn obstruction_equivalence_check(
    p: &LiePresentation,
    deformed: &DeformedPresentation,
    sigma: &Form,
) -> Result<ObstructionCheck> {
    let phi = &deformed.phi;
    let ob = obstruction(p, phi, sigma)?;
    let ext = deformed.frame.extend(sigma);
    let dbar_t = deformed.presentation.delbar(&ext.deformed);
    let pulled = simul_contract(&deformed.factor_inverse, &ob);
    Ok(ObstructionCheck { obstruction_zero: ob.is_zero(), dbar_t_zero: dbar_t.is_zero(), identity_holds: pulled == dbar_t })
}

/// Terms of the obstruction series at multi-index k, from σ̃ coefficients of lower order.
pub(crate) fn lower_order_terms(p: &LiePresentation, phi: &BeltramiSeries, sigma: &FormSeries, k: &[u32]) -> (Form, Form) {
    // (Σ φ_J⌟σ̃_L, Σ φ_J⌟∂σ̃_L) over J + L = k, J ≠ 0
    let n = p.n();
    let mut contr = Form::zero(n);
    let mut contr_d = Form::zero(n);
    for (j, l) in splits(k) {
        let Some(v) = phi.coeffs.get(&j) else { continue };
        let Some(s) = sigma.coeffs.get(&l) else { continue };
        contr.add_assign(&v.contract(s));
        contr_d.add_assign(&v.contract(&p.del(s)));
    }
    (contr, contr_d)
}
