//! Cohomology tables, comparison maps and condition classes.

use nilhodge::cohomology::{
    betti, blackboard_b_direct, blackboard_s_direct, cal_b_direct, condition, dimension, duality_pairing, induced_map,
    pairing_matrix, representatives, sgg_check, Condition, Theory,
};
use nilhodge::format::parse_presentation;
use nilhodge::presentation::{iwasawa, torus};
use nilhodge::{Form, Gr, LiePresentation};

/// Primary Kodaira surface: dτ² = τ¹∧τ̄¹.
fn kodaira() -> LiePresentation {
    parse_presentation("name: kodaira\ndim: 2\ncoframe: [t1, t2]\nd:\n  t2:\n    - {coeff: \"1\", wedge: [t1, ~t1]}\n").unwrap()
}

#[test]
fn iwasawa_golden_numbers() {
    let iw = iwasawa();
    let h = |t, p, q| dimension(&iw, t, p, q);
    assert_eq!(h(Theory::Dolbeault, 1, 1), 6);
    assert_eq!(h(Theory::Aeppli, 1, 1), 8);
    assert_eq!(h(Theory::BottChern, 2, 0), 3);
    assert_eq!(h(Theory::Del, 2, 0), 2);
    assert_eq!(h(Theory::BottChern, 3, 0), 1);
    assert_eq!(h(Theory::Del, 3, 0), 1);
    assert_eq!(h(Theory::Dolbeault, 2, 1), 6);
    assert_eq!(h(Theory::Aeppli, 2, 1), 6);
    assert_eq!(h(Theory::BottChern, 3, 3), 1);
    assert_eq!(h(Theory::Del, 3, 3), 1);
    let b: Vec<usize> = (0..=6).map(|k| betti(&iw, k)).collect();
    assert_eq!(b, vec![1, 4, 8, 10, 8, 4, 1]);
}

#[test]
fn iwasawa_comparison_maps() {
    let iw = iwasawa();
    let inj = |s, t, p, q| induced_map(&iw, s, t, p, q).unwrap().injective;
    assert!(!inj(Theory::BottChern, Theory::Del, 2, 0));
    assert!(inj(Theory::Dolbeault, Theory::Aeppli, 1, 1));
    assert!(inj(Theory::BottChern, Theory::Del, 3, 0));
    assert!(!inj(Theory::Dolbeault, Theory::Aeppli, 2, 1));
    assert!(inj(Theory::BottChern, Theory::Del, 3, 3));
    assert!(sgg_check(&iw));
    for q in 1..=3 {
        assert!(condition(&iw, Condition::CalB, 1, q));
    }
}

#[test]
fn arrows_outside_the_diagram_are_refused() {
    assert!(induced_map(&iwasawa(), Theory::Aeppli, Theory::BottChern, 1, 1).is_err());
}

#[test]
fn kodaira_surface_is_not_sgg() {
    let k = kodaira();
    assert!(!sgg_check(&k));
    assert_eq!(dimension(&k, Theory::Dolbeault, 0, 1), 2);
    assert_eq!(dimension(&k, Theory::BottChern, 0, 1), 1);
    let b: Vec<usize> = (0..=4).map(|j| betti(&k, j)).collect();
    assert_eq!(b, vec![1, 3, 4, 3, 1]);
}

#[test]
fn direct_and_induced_condition_forms_agree() {
    for pr in [iwasawa(), kodaira(), torus(2)] {
        let n = pr.n() as isize;
        for p in 0..=n {
            for q in 0..=n {
                assert_eq!(condition(&pr, Condition::BlackboardB, p, q), blackboard_b_direct(&pr, p, q), "BB {p},{q}");
                assert_eq!(condition(&pr, Condition::BlackboardS, p, q), blackboard_s_direct(&pr, p, q), "SS {p},{q}");
                assert_eq!(condition(&pr, Condition::CalB, p, q), cal_b_direct(&pr, p, q), "B {p},{q}");
            }
        }
    }
}

#[test]
fn duality_and_euler_characteristic() {
    for pr in [iwasawa(), kodaira(), torus(3)] {
        let n = pr.n();
        let mut euler = 0i64;
        for p in 0..=n {
            for q in 0..=n {
                let (pi, qi) = (p as isize, q as isize);
                let bc = dimension(&pr, Theory::BottChern, pi, qi);
                assert_eq!(bc, dimension(&pr, Theory::Aeppli, (n - q) as isize, (n - p) as isize));
                assert_eq!(dimension(&pr, Theory::Dolbeault, pi, qi), dimension(&pr, Theory::Dolbeault, (n - p) as isize, (n - q) as isize));
                let m = pairing_matrix(&pr, p, q);
                assert!(m.rows() == m.cols() && m.rank() == m.rows(), "{} ({p},{q})", pr.name);
                let h = dimension(&pr, Theory::Dolbeault, pi, qi) as i64;
                euler += if (p + q) % 2 == 0 { h } else { -h };
            }
        }
        let chi: i64 = (0..=2 * n as isize).map(|k| if k % 2 == 0 { 1 } else { -1 } * betti(&pr, k) as i64).sum();
        assert_eq!(euler, chi);
    }
}

/// Sum of all basis monomials of a bidegree with distinct small coefficients.
fn generic(pr: &LiePresentation, p: isize, q: isize) -> Form {
    let mut f = Form::zero(pr.n());
    if p < 0 || q < 0 {
        return f;
    }
    for (k, m) in pr.basis(p, q).monos.iter().enumerate() {
        f.add_term(*m, &Gr::from_parts(k as i64 + 1, 2, 1 - k as i64, 3));
    }
    f
}

#[test]
fn pairing_is_well_defined_on_classes() {
    let iw = iwasawa();
    let n = 3isize;
    let mut moved = false;
    for (p, q) in [(1isize, 1isize), (2, 2), (1, 2)] {
        let a_reps = representatives(&iw, Theory::Aeppli, n - p, n - q);
        let b_reps = representatives(&iw, Theory::BottChern, p, q);
        let shift_a = iw.del(&generic(&iw, n - p - 1, n - q)).add(&iw.delbar(&generic(&iw, n - p, n - q - 1)));
        let shift_b = iw.del(&iw.delbar(&generic(&iw, p - 1, q - 1)));
        moved |= !shift_a.is_zero() || !shift_b.is_zero();
        for a in &a_reps {
            for b in &b_reps {
                let v = duality_pairing(&iw, a, b).unwrap();
                assert_eq!(duality_pairing(&iw, &a.add(&shift_a), &b.add(&shift_b)).unwrap(), v);
            }
        }
    }
    assert!(moved);
}

#[test]
fn pairing_sign_on_a_volume_pair() {
    let iw = iwasawa();
    let n = 3;
    let a = Form::tau(n, 2).wedge(&Form::tau(n, 3)).wedge(&Form::tau_bar(n, 2)).wedge(&Form::tau_bar(n, 3));
    let b = Form::tau(n, 1).wedge(&Form::tau_bar(n, 1));
    // τ²τ³τ̄²τ̄³ ∧ τ¹τ̄¹ reorders to τ¹τ²τ³τ̄¹τ̄²τ̄³ with 2 + 2 transpositions.
    assert_eq!(duality_pairing(&iw, &a, &b).unwrap(), Gr::one());
}

#[test]
fn representatives_are_cocycles() {
    let iw = iwasawa();
    for p in 0..=3isize {
        for q in 0..=3isize {
            for r in representatives(&iw, Theory::BottChern, p, q) {
                assert!(iw.d(&r).is_zero());
            }
            for r in representatives(&iw, Theory::Dolbeault, p, q) {
                assert!(iw.delbar(&r).is_zero());
            }
        }
    }
}
