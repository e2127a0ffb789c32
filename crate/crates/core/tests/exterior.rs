//! Exterior calculus invariants on the shipped algebras.

use nilhodge::beltrami::{exp_contract, Beltrami};
use nilhodge::presentation::{cfp, iwasawa, torus};
use nilhodge::{Form, Gr, LiePresentation};
use proptest::prelude::*;

fn gr() -> impl Strategy<Value = Gr> {
    (-3i64..=3, 1i64..=4, -3i64..=3, 1i64..=4).prop_map(|(a, b, c, d)| Gr::from_parts(a, b, c, d))
}

/// A form of pure total degree k in dimension 3.
fn form_of_degree(k: u32) -> impl Strategy<Value = Form> {
    let monos: Vec<u32> = (0u32..64).filter(|m| m.count_ones() == k).collect();
    prop::collection::vec((prop::sample::select(monos), gr()), 1..5).prop_map(|ts| {
        let mut f = Form::zero(3);
        for (m, c) in ts {
            f.add_term(m, &c);
        }
        f
    })
}

fn any_form() -> impl Strategy<Value = (u32, Form)> {
    (0u32..=6).prop_flat_map(|k| form_of_degree(k).prop_map(move |f| (k, f)))
}

fn sign(k: u32) -> Gr {
    Gr::from_int(if k % 2 == 0 { 1 } else { -1 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn wedge_is_graded_commutative((k, a) in any_form(), (l, b) in any_form()) {
        prop_assert_eq!(a.wedge(&b), b.wedge(&a).scale(&sign(k * l)));
    }

    #[test]
    fn leibniz_rule((k, a) in any_form(), (_, b) in any_form()) {
        let iw = iwasawa();
        let lhs = iw.d(&a.wedge(&b));
        let rhs = iw.d(&a).wedge(&b).add(&a.wedge(&iw.d(&b)).scale(&sign(k)));
        prop_assert_eq!(lhs, rhs);
        let lhs = iw.delbar(&a.wedge(&b));
        let rhs = iw.delbar(&a).wedge(&b).add(&a.wedge(&iw.delbar(&b)).scale(&sign(k)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn conjugation_is_a_real_structure((_, a) in any_form(), (_, b) in any_form()) {
        let iw = iwasawa();
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!(a.wedge(&b).conj(), a.conj().wedge(&b.conj()));
        prop_assert_eq!(iw.d(&a.conj()), iw.d(&a).conj());
        prop_assert_eq!(iw.delbar(&a.conj()), iw.del(&a).conj());
    }
}

fn all_monomials(n: usize) -> impl Iterator<Item = Form> {
    (0u32..1 << (2 * n)).map(move |m| Form::monomial(n, m, Gr::one()))
}

fn assert_complex_identities(pr: &LiePresentation) {
    for a in all_monomials(pr.n()) {
        assert!(pr.d(&pr.d(&a)).is_zero(), "d^2 on {a}");
        assert!(pr.del(&pr.del(&a)).is_zero(), "del^2 on {a}");
        assert!(pr.delbar(&pr.delbar(&a)).is_zero(), "dbar^2 on {a}");
        assert!(pr.del(&pr.delbar(&a)).add(&pr.delbar(&pr.del(&a))).is_zero(), "anticommutator on {a}");
        assert_eq!(pr.d(&a), pr.del(&a).add(&pr.delbar(&a)));
    }
}

#[test]
fn bigraded_identities_hold_on_every_monomial() {
    for pr in [iwasawa(), torus(2), torus(3)] {
        assert!(pr.validate().is_ok());
        assert_complex_identities(&pr);
    }
}

#[test]
fn the_shipped_five_dimensional_example_violates_d_squared() {
    let c = cfp();
    let err = c.validate().unwrap_err().to_string();
    assert!(err.contains("d^2 != 0"), "{err}");
    let t5 = Form::tau(5, 5);
    assert!(!c.d(&c.d(&t5)).is_zero());
}

#[test]
fn exponential_contraction_of_a_two_form() {
    let n = 2;
    let a = Gr::from_parts(1, 2, 1, 3);
    let b = Gr::from_parts(-2, 1, 0, 1);
    let phi = Beltrami::entry(n, 1, 2, a.clone()).add(&Beltrami::entry(n, 2, 1, b.clone()));
    let t12 = Form::tau(n, 1).wedge(&Form::tau(n, 2));
    let got = exp_contract(&phi.to_vector_form(), &t12);
    // (τ¹ + a τ̄²) ∧ (τ² + b τ̄¹)
    let want = t12
        .add(&Form::tau(n, 1).wedge(&Form::tau_bar(n, 1)).scale(&b))
        .sub(&Form::tau(n, 2).wedge(&Form::tau_bar(n, 2)).scale(&a))
        .sub(&Form::tau_bar(n, 1).wedge(&Form::tau_bar(n, 2)).scale(&(&a * &b)));
    assert_eq!(got, want);
    assert_eq!(got.bidegrees().len(), 3);
}
