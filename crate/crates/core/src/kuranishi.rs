//! The Kuranishi family φ(t) = Σ t_ν η_ν + ½∂̄*G[φ, φ] built order by order
//! on the invariant complex, with harmonic obstruction terms.

use crate::beltrami::{del_bar_vector, schouten_bracket, VectorForm};
use crate::error::{Error, Result};
use crate::harmonic::MetricContext;
use crate::series::{degree, multi_indices, splits, unit, BeltramiSeries, MultiIndex, Series};
use crate::scalar::Gr;

/// Where the first-order directions come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KuranishiBasis {
    /// Reduced echelon basis of the kernel of the Laplacian on Λ^{0,1}⊗T^{1,0}.
    Harmonic,
    /// A user-chosen list of ∂̄-closed directions (a subfamily).
    Explicit(Vec<VectorForm>),
}

#[derive(Clone, Debug)]
pub struct KuranishiSeries {
    pub basis: Vec<VectorForm>,
    pub basis_kind: &'static str,
    /// Coefficients φ_I.
    pub phi: BeltramiSeries,
    /// B_I = Σ_{J+L=I} [φ_J, φ_L].
    pub brackets: BeltramiSeries,
    /// ℍB_I; the obstruction to continuing past I.
    pub obstruction: BeltramiSeries,
    /// ∂̄φ_I - ½B_I + ½ℍB_I, which must vanish at every I.
    pub residual: BeltramiSeries,
    pub note: Option<String>,
}

impl KuranishiSeries {
    pub fn unobstructed(&self) -> bool {
        self.obstruction.is_zero()
    }

    pub fn residual_zero(&self) -> bool {
        self.residual.is_zero()
    }

    /// Highest degree with a nonzero coefficient.
    pub fn last_order(&self) -> u32 {
        self.phi.max_degree()
    }
}

pub fn kuranishi_series(ctx: &MetricContext, basis: &KuranishiBasis, params: Option<Vec<String>>, order: u32) -> Result<KuranishiSeries> {
    if order == 0 {
        return Err(Error::Usage("Kuranishi order must be at least 1".into()));
    }
    let p = ctx.presentation();
    let n = p.n();
    let (eta, kind) = match basis {
        KuranishiBasis::Harmonic => (ctx.harmonic_beltrami_basis(), "harmonic"),
        KuranishiBasis::Explicit(v) => {
            for e in v {
                if e.n() != n {
                    return Err(Error::PresentationMismatch(n, e.n()));
                }
                if !del_bar_vector(p, e)?.is_zero() {
                    return Err(Error::NotCocycle(format!("direction {} is not dbar-closed", e.display_with(p.names()))));
                }
            }
            (v.clone(), "explicit")
        }
    };
    let m = eta.len();
    let params = match params {
        Some(ps) if ps.len() == m => ps,
        Some(ps) => return Err(Error::Usage(format!("{} parameter names for {} directions", ps.len(), m))),
        None => (1..=m).map(|i| format!("t{i}")).collect(),
    };
    let mut phi: BeltramiSeries = Series::new(n, params.clone(), order);
    let mut brackets: BeltramiSeries = Series::new(n, params.clone(), order);
    let mut obstruction: BeltramiSeries = Series::new(n, params.clone(), order);
    let mut residual: BeltramiSeries = Series::new(n, params, order);
    let note = (m == 0).then(|| "rigid: no first-order directions".to_string());
    for (i, e) in eta.iter().enumerate() {
        phi.set(unit(m, i), e.clone());
        residual.set(unit(m, i), del_bar_vector(p, e)?);
    }
    let half = Gr::from_ratio(1, 2);
    for d in 2..=order {
        for k in multi_indices(m, d) {
            let b = bracket_sum(ctx, &phi, &k)?;
            let hb = ctx.vector_harmonic(&b, 2);
            let next = ctx.vector_dbar_star_green(&b, 2).scale(&half);
            let r = del_bar_vector(p, &next)?.sub(&b.scale(&half)).add(&hb.scale(&half));
            phi.set(k.clone(), next);
            brackets.set(k.clone(), b);
            obstruction.set(k.clone(), hb);
            residual.set(k, r);
        }
    }
    Ok(KuranishiSeries { basis: eta, basis_kind: kind, phi, brackets, obstruction, residual, note })
}

fn bracket_sum(ctx: &MetricContext, phi: &BeltramiSeries, k: &MultiIndex) -> Result<VectorForm> {
    let p = ctx.presentation();
    let mut b = VectorForm::zero(p.n());
    for (j, l) in splits(k) {
        if degree(&l) == 0 {
            continue;
        }
        let (Some(x), Some(y)) = (phi.coeffs.get(&j), phi.coeffs.get(&l)) else { continue };
        b = b.add(&schouten_bracket(p, x, y)?);
    }
    Ok(b)
}

/// ∂̄φ(t) - ½[φ(t), φ(t)] + ½ℍ[φ(t), φ(t)] truncated at the series order,
/// recomputed from φ(t) alone.
pub fn integrability_identity(ctx: &MetricContext, k: &KuranishiSeries) -> Result<BeltramiSeries> {
    let p = ctx.presentation();
    let phi = &k.phi;
    let mut out: BeltramiSeries = Series::new(phi.n, phi.params.clone(), phi.order);
    let half = Gr::from_ratio(1, 2);
    for (i, c) in &phi.coeffs {
        out.add_to(i.clone(), &del_bar_vector(p, c)?);
    }
    for (i, x) in &phi.coeffs {
        for (j, y) in &phi.coeffs {
            let s: MultiIndex = i.iter().zip(j).map(|(a, b)| a + b).collect();
            if degree(&s) <= phi.order {
                out.add_to(s, &schouten_bracket(p, x, y)?.scale(&half).scale(&Gr::from_int(-1)));
            }
        }
    }
    for (i, h) in &k.obstruction.coeffs {
        out.add_to(i.clone(), &h.scale(&half));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::Form;
    use crate::presentation::{cfp, iwasawa, torus};

    fn dir(n: usize, j: usize, i: usize) -> VectorForm {
        VectorForm::decomposable(Form::tau_bar(n, j), i - 1)
    }

    #[test]
    fn torus_is_linear() {
        let t = torus(2);
        let ctx = MetricContext::new(&t);
        let k = kuranishi_series(&ctx, &KuranishiBasis::Harmonic, None, 3).unwrap();
        assert_eq!(k.basis.len(), 4);
        assert_eq!(k.last_order(), 1);
        assert!(k.unobstructed() && k.residual_zero());
    }

    #[test]
    fn cfp_subfamily_is_exact() {
        let c = cfp();
        let ctx = MetricContext::new(&c);
        let basis = KuranishiBasis::Explicit(vec![dir(5, 5, 4), dir(5, 4, 4)]);
        let k = kuranishi_series(&ctx, &basis, None, 3).unwrap();
        assert_eq!(k.last_order(), 1);
        assert!(k.unobstructed() && k.residual_zero());
    }

    #[test]
    fn iwasawa_second_order() {
        let iw = iwasawa();
        let ctx = MetricContext::new(&iw);
        let k = kuranishi_series(&ctx, &KuranishiBasis::Harmonic, None, 3).unwrap();
        assert_eq!(k.basis.len(), 6);
        assert!(k.unobstructed(), "{:?}", k.obstruction);
        assert!(k.residual_zero());
        assert!(integrability_identity(&ctx, &k).unwrap().is_zero());
        assert_eq!(k.last_order(), 2);
    }
}
