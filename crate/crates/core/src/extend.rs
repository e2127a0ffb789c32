//! Power-series solutions σ̃_t of ([∂, i_φ(t)] + ∂̄)σ̃_t = 0 extending a
//! ∂̄-closed σ₀, so that e^{i_φ|i_φ̄}((1 - φ̄φ)^{-1}⨝σ̃_t) is ∂̄_t-closed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cohomology::{condition, dimension, Condition, Theory};
use crate::deformation::{lower_order_terms, obstruction_series};
use crate::error::{Error, Result};
use crate::forms::Form;
use crate::harmonic::{LaplacianKind, MetricContext};
use crate::presentation::Op;
use crate::series::{monomial_name, multi_indices, BeltramiSeries, FormSeries, Series};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtendMode {
    /// General (p,q): ∂σ̃_K = 0, ∂̄σ̃_K = -∂(Σ φ_J⌟σ̃_L).
    Pq,
    /// (p,0) forms.
    P0,
    /// (0,q) forms: the canonical representative extends unchanged.
    Zq,
    /// h^{p,q+1}_∂̄ = 0: ∂̄σ_K = -∂(Σ φ_J⌟σ_L) + Σ φ_J⌟∂σ_L.
    Vanishing,
}

impl ExtendMode {
    pub fn name(self) -> &'static str {
        match self {
            ExtendMode::Pq => "pq",
            ExtendMode::P0 => "p0",
            ExtendMode::Zq => "0q",
            ExtendMode::Vanishing => "vanishing",
        }
    }
}

impl fmt::Display for ExtendMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExtendMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pq" => Ok(ExtendMode::Pq),
            "p0" => Ok(ExtendMode::P0),
            "0q" => Ok(ExtendMode::Zq),
            "vanishing" => Ok(ExtendMode::Vanishing),
            o => Err(Error::Usage(format!("unknown extension mode `{o}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub label: String,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct Extension {
    pub mode: ExtendMode,
    pub bidegree: (usize, usize),
    pub hypotheses: Vec<HypothesisCheck>,
    /// Which sufficient condition was used, e.g. "SS^{2,0} and SS^{1,1}".
    pub route: String,
    pub hypotheses_hold: bool,
    /// The solution σ̃_t.
    pub sigma: FormSeries,
    /// Coefficients of ([∂, i_φ] + ∂̄)σ̃_t up to the order.
    pub residual: FormSeries,
    /// Per-order defects of the mode's own system.
    pub system_residual: FormSeries,
}

impl Extension {
    pub fn residual_zero(&self) -> bool {
        self.residual.is_zero() && self.system_residual.is_zero()
    }
}

fn check(pr: &crate::LiePresentation, c: Condition, p: usize, q: usize) -> HypothesisCheck {
    HypothesisCheck { label: c.label(p, q), holds: condition(pr, c, p as isize, q as isize) }
}

/// Solves the mode's system order by order. With `force` the hypotheses
/// are evaluated and recorded but not enforced, and nonzero residuals are
/// reported instead of raised.
pub fn extend_series(
    ctx: &MetricContext,
    phi: &BeltramiSeries,
    sigma0: &Form,
    mode: ExtendMode,
    order: u32,
    force: bool,
) -> Result<Extension> {
    let pr = ctx.presentation();
    let n = pr.n();
    if phi.n != n || sigma0.n() != n {
        return Err(Error::PresentationMismatch(n, if phi.n != n { phi.n } else { sigma0.n() }));
    }
    let (p, q) = match sigma0.pure_bidegree() {
        Some(b) => b,
        None if sigma0.is_zero() => return Err(Error::DegreeMismatch("zero input has no bidegree".into())),
        None => return Err(Error::DegreeMismatch("input is not of pure type".into())),
    };
    if !pr.delbar(sigma0).is_zero() {
        return Err(Error::NotCocycle("σ₀ is not ∂̄-closed".into()));
    }
    match mode {
        ExtendMode::P0 if q != 0 => return Err(Error::DegreeMismatch(format!("p0 mode needs q = 0, got ({p},{q})"))),
        ExtendMode::Zq if p != 0 => return Err(Error::DegreeMismatch(format!("0q mode needs p = 0, got ({p},{q})"))),
        _ => {}
    }

    let (hypotheses, route, holds) = hypotheses(pr, mode, p, q);
    if !holds && !force {
        let failed: Vec<String> = hypotheses.iter().filter(|h| !h.holds).map(|h| h.label.clone()).collect();
        return Err(Error::HypothesisFailed(format!("{} mode at ({p},{q}): {} fails", mode, failed.join(", "))));
    }

    let m = phi.m();
    let params = phi.params.clone();
    let mut sigma: FormSeries = Series::new(n, params.clone(), order);
    let mut system: FormSeries = Series::new(n, params, order);
    let zero = vec![0; m];
    let (pi, qi) = (p as isize, q as isize);

    let s0 = match mode {
        ExtendMode::Pq | ExtendMode::Zq => match ctx.canonical_rep(sigma0) {
            Ok(g) => g,
            Err(e) if !force => return Err(e),
            Err(_) => sigma0.clone(),
        },
        ExtendMode::P0 | ExtendMode::Vanishing => sigma0.clone(),
    };
    sigma.set(zero.clone(), s0.clone());
    if matches!(mode, ExtendMode::Pq | ExtendMode::P0) {
        system.set(zero, pr.del(&s0));
    }

    if mode != ExtendMode::Zq {
        for d in 1..=order {
            for k in multi_indices(m, d) {
                let (contr, contr_d) = lower_order_terms(pr, phi, &sigma, &k);
                let y = pr.del(&contr);
                let next = match mode {
                    ExtendMode::Pq => {
                        let x = ctx.delbar_preimage(&y, pi, qi + 1);
                        let dx = pr.del(&x);
                        let g = ctx.green_apply(LaplacianKind::BottChern, &dx, pi + 1, qi);
                        let corr = pr.delbar(&ctx.adjoint_apply(Op::DelDelBar, &g, pi + 1, qi));
                        x.neg().add(&corr)
                    }
                    ExtendMode::P0 => ctx.delbar_preimage(&y, pi, qi + 1).neg(),
                    ExtendMode::Vanishing => ctx.delbar_preimage(&contr_d.sub(&y), pi, qi + 1),
                    ExtendMode::Zq => unreachable!(),
                };
                let defect = match mode {
                    ExtendMode::Vanishing => pr.delbar(&next).add(&y).sub(&contr_d),
                    _ => pr.delbar(&next).add(&y).add(&pr.del(&next)),
                };
                sigma.set(k.clone(), next);
                system.set(k, defect);
            }
        }
    }

    let residual = obstruction_series(pr, phi, &sigma);
    let residual = truncate(residual, order);
    let out = Extension { mode, bidegree: (p, q), hypotheses, route, hypotheses_hold: holds, sigma, residual, system_residual: system };
    if !force && !out.residual_zero() {
        let (k, r) = out
            .residual
            .coeffs
            .iter()
            .chain(out.system_residual.coeffs.iter())
            .next()
            .expect("nonzero residual has a term");
        return Err(Error::NotSolvable {
            order: monomial_name(k, &out.sigma.params),
            detail: r.display_with(pr.names()),
        });
    }
    Ok(out)
}

fn truncate(mut s: FormSeries, order: u32) -> FormSeries {
    s.order = order;
    s.coeffs.retain(|k, _| crate::series::degree(k) <= order);
    s
}

/// The sufficient conditions for each mode, the route taken and whether it holds.
pub fn hypotheses(pr: &crate::LiePresentation, mode: ExtendMode, p: usize, q: usize) -> (Vec<HypothesisCheck>, String, bool) {
    use Condition::*;
    match mode {
        ExtendMode::Pq => {
            let hs = vec![check(pr, BlackboardB, p + 1, q), check(pr, BlackboardS, p, q + 1)];
            let ok = hs.iter().all(|h| h.holds);
            let route = format!("{} and {}", hs[0].label, hs[1].label);
            (hs, route, ok)
        }
        ExtendMode::P0 => {
            let mut hs = vec![check(pr, BlackboardS, p + 1, 0), check(pr, BlackboardS, p, 1)];
            if p == 1 {
                hs.push(check(pr, CalS, 1, 1));
            }
            let strong = hs[0].holds && hs[1].holds;
            let weak = p == 1 && hs[0].holds && hs[2].holds;
            let route = if strong || !weak {
                format!("{} and {}", hs[0].label, hs[1].label)
            } else {
                format!("{} and {}", hs[0].label, hs[2].label)
            };
            (hs, route, strong || weak)
        }
        ExtendMode::Zq => {
            let hs = vec![check(pr, CalB, 1, q)];
            let route = hs[0].label.clone();
            let ok = hs[0].holds;
            (hs, route, ok)
        }
        ExtendMode::Vanishing => {
            let h = dimension(pr, Theory::Dolbeault, p as isize, q as isize + 1);
            let label = format!("h^{{{},{}}}_dbar = 0", p, q + 1);
            (vec![HypothesisCheck { label: label.clone(), holds: h == 0 }], label, h == 0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beltrami::VectorForm;
    use crate::presentation::{iwasawa, torus};
    use crate::series::unit;

    fn one_param(n: usize, v: VectorForm, order: u32) -> BeltramiSeries {
        let mut s = Series::new(n, vec!["t".into()], order);
        s.set(unit(1, 0), v);
        s
    }

    #[test]
    fn zero_phi_gives_constant_series() {
        let t = torus(2);
        let ctx = MetricContext::new(&t);
        let phi: BeltramiSeries = Series::new(2, vec!["t".into()], 3);
        let s0 = Form::tau(2, 1).wedge(&Form::tau_bar(2, 2));
        let e = extend_series(&ctx, &phi, &s0, ExtendMode::Pq, 3, false).unwrap();
        assert_eq!(e.sigma.coeffs.len(), 1);
        assert_eq!(e.sigma.get(&[0]), s0);
    }

    #[test]
    fn iwasawa_p0_tau1_has_no_corrections() {
        let iw = iwasawa();
        let ctx = MetricContext::new(&iw);
        let phi = one_param(3, VectorForm::decomposable(Form::tau_bar(3, 1), 2), 3);
        let e = extend_series(&ctx, &phi, &Form::tau(3, 1), ExtendMode::P0, 3, true).unwrap();
        assert_eq!(e.sigma.coeffs.len(), 1);
        assert!(e.residual_zero());
    }

    #[test]
    fn iwasawa_zero_q() {
        let iw = iwasawa();
        let ctx = MetricContext::new(&iw);
        let phi = one_param(3, VectorForm::decomposable(Form::tau_bar(3, 2), 0), 2);
        let e = extend_series(&ctx, &phi, &Form::tau_bar(3, 1), ExtendMode::Zq, 2, false).unwrap();
        assert!(e.hypotheses_hold && e.residual_zero());
    }

    #[test]
    fn failing_hypothesis_is_named() {
        let iw = iwasawa();
        let ctx = MetricContext::new(&iw);
        let phi = one_param(3, VectorForm::decomposable(Form::tau_bar(3, 1), 2), 2);
        // ι^{2,0}_{BC,∂} is not injective on the Iwasawa manifold.
        let s0 = Form::tau(3, 1).wedge(&Form::tau_bar(3, 1));
        match extend_series(&ctx, &phi, &s0, ExtendMode::Pq, 2, false) {
            Err(Error::HypothesisFailed(msg)) => assert!(msg.contains("BB^{2,1}") || msg.contains("SS^{1,2}"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }
}
