//! Exact linear algebra against floating-point oracles and the Penrose axioms.

use nalgebra::{Complex, DMatrix};
use nilhodge::{ExactMatrix, Gr};
use proptest::prelude::*;

fn gr() -> impl Strategy<Value = Gr> {
    (-3i64..=3, 1i64..=4, -3i64..=3, 1i64..=4).prop_map(|(a, b, c, d)| Gr::from_parts(a, b, c, d))
}

/// Random matrices with a planted low rank so that rank deficiency is common.
fn matrix() -> impl Strategy<Value = ExactMatrix> {
    (1usize..=5, 1usize..=5, 1usize..=4).prop_flat_map(|(r, c, k)| {
        (prop::collection::vec(gr(), r * k), prop::collection::vec(gr(), k * c)).prop_map(move |(a, b)| {
            let a = ExactMatrix::from_rows(a.chunks(k).map(|x| x.to_vec()).collect());
            let b = ExactMatrix::from_rows(b.chunks(c).map(|x| x.to_vec()).collect());
            a.mul(&b)
        })
    })
}

fn to_float(m: &ExactMatrix) -> DMatrix<Complex<f64>> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        let (re, im) = m.get(i, j).to_f64_pair();
        Complex::new(re, im)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_matches_svd(m in matrix()) {
        let svd = to_float(&m).svd(false, false);
        let float_rank = svd.singular_values.iter().filter(|s| **s > 1e-9).count();
        prop_assert_eq!(m.rank(), float_rank);
    }

    #[test]
    fn pseudo_inverse_satisfies_penrose(m in matrix()) {
        let p = m.pinv();
        prop_assert_eq!(m.mul(&p).mul(&m), m.clone());
        prop_assert_eq!(p.mul(&m).mul(&p), p.clone());
        let mp = m.mul(&p);
        let pm = p.mul(&m);
        prop_assert_eq!(mp.adjoint(), mp);
        prop_assert_eq!(pm.adjoint(), pm);
    }

    #[test]
    fn kernel_is_annihilated_and_complete(m in matrix()) {
        let k = m.kernel_basis();
        prop_assert_eq!(k.len() + m.rank(), m.cols());
        for v in &k {
            prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_returns_minimum_norm(m in matrix(), x in prop::collection::vec(gr(), 5)) {
        let x = &x[..m.cols()];
        let b = m.mul_vec(x);
        let s = m.solve(&b).expect("consistent by construction");
        prop_assert_eq!(m.mul_vec(&s), b);
        // Minimum norm means s lies in the row space, i.e. s = pinv(A) A s.
        prop_assert_eq!(m.pinv().mul(&m).mul_vec(&s), s);
    }

    #[test]
    fn field_axioms(a in gr(), b in gr(), c in gr()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a.clone());
        }
        prop_assert_eq!(a.to_string().parse::<Gr>().unwrap(), a);
    }
}

#[test]
fn square_inverse_and_determinant_agree() {
    let m = ExactMatrix::from_rows(vec![
        vec![Gr::from_parts(1, 2, 1, 1), Gr::from_int(2), Gr::zero()],
        vec![Gr::i(), Gr::from_ratio(1, 3), Gr::one()],
        vec![Gr::zero(), Gr::from_parts(0, 1, -1, 2), Gr::from_int(4)],
    ]);
    let inv = m.inverse().unwrap();
    assert_eq!(m.mul(&inv), ExactMatrix::identity(3));
    assert_eq!(&m.det() * &inv.det(), Gr::one());
    let singular = ExactMatrix::from_ints(&[&[1, 2], &[2, 4]]);
    assert!(singular.inverse().is_none());
    assert!(singular.det().is_zero());
}
