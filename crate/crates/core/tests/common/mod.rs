//! Hand-derived cfp and Iwasawa oracles shared by the integration tests.
#![allow(dead_code)]

use nilhodge::beltrami::{Beltrami, VectorForm};
use nilhodge::series::{BeltramiSeries, FormSeries, Series};
use nilhodge::{Form, Gr};

pub fn w(a: Form, b: Form) -> Form {
    a.wedge(&b)
}

pub fn g(a: i64, b: i64, c: i64, d: i64) -> Gr {
    Gr::from_parts(a, b, c, d)
}

pub fn cfp_phi(t1: &Gr, t2: &Gr) -> Beltrami {
    Beltrami::entry(5, 4, 5, t1.clone()).add(&Beltrami::entry(5, 4, 4, t2.clone()))
}

/// The cfp structure equations in the deformed coframe, derived by hand by
/// substituting τ = F⁻¹τ(t) into the undeformed equations.
pub fn cfp_closed_form(t1: &Gr, t2: &Gr) -> Vec<Form> {
    let n = 5;
    let (tau, bar) = (|k| Form::tau(5, k), |k| Form::tau_bar(5, k));
    let c = &g(1, 1, 1, 1) / &(&Gr::one() - &(t2 * &t2.conj()));
    let d5 = w(tau(1), bar(3)).add(&w(tau(3), bar(1))).sub(&w(tau(2), bar(2))).scale(&Gr::from_ratio(1, 2));
    let d4 = d5.scale(&-t1);
    let d3 = w(tau(1), tau(4))
        .scale(&t2.conj())
        .add(&w(tau(1), tau(5)).scale(&t1.conj()))
        .scale(&c)
        .sub(&w(tau(1), bar(1)))
        .sub(&w(tau(1), bar(4)).add(&w(tau(1), bar(5)).scale(&(t1 * &t2.conj()))).scale(&c));
    vec![Form::zero(n), Form::zero(n), d3, d4, d5]
}

pub fn dir(n: usize, j: usize, i: usize) -> VectorForm {
    VectorForm::decomposable(Form::tau_bar(n, j), i - 1)
}

pub fn cfp_phi_series(order: u32) -> BeltramiSeries {
    let params = vec!["t1".to_string(), "t2".to_string()];
    Series::from_beltrami_terms(params, order, &[Beltrami::entry(5, 4, 5, Gr::one()), Beltrami::entry(5, 4, 4, Gr::one())])
}

/// σ₀ + t₁ τ⁵∧(θ₄⌟σ₀), which solves the extension equation exactly.
pub fn cfp_extension(sigma0: &Form, order: u32) -> FormSeries {
    let mut s = Series::new(5, vec!["t1".into(), "t2".into()], order);
    s.set(vec![0, 0], sigma0.clone());
    s.set(vec![1, 0], Form::tau(5, 5).wedge(&sigma0.interior(3)));
    s
}
