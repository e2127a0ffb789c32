//! Dolbeault, ∂, Bott-Chern, Aeppli and de Rham cohomology of the invariant
//! complex, the comparison maps between them and the condition classes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::Form;
use crate::linalg::{subspace, ExactMatrix};
use crate::presentation::{LiePresentation, Op};
use crate::scalar::Gr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theory {
    Dolbeault,
    Del,
    BottChern,
    Aeppli,
    DeRham,
}

impl Theory {
    pub const BIGRADED: [Theory; 4] = [Theory::Dolbeault, Theory::Del, Theory::BottChern, Theory::Aeppli];

    pub fn name(self) -> &'static str {
        match self {
            Theory::Dolbeault => "dolbeault",
            Theory::Del => "del",
            Theory::BottChern => "bott_chern",
            Theory::Aeppli => "aeppli",
            Theory::DeRham => "de_rham",
        }
    }

    pub fn short(self) -> &'static str {
        match self {
            Theory::Dolbeault => "dbar",
            Theory::Del => "d",
            Theory::BottChern => "BC",
            Theory::Aeppli => "A",
            Theory::DeRham => "dR",
        }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theory {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_lowercase().replace('-', "_").as_str() {
            "dolbeault" | "dbar" | "delbar" => Ok(Theory::Dolbeault),
            "del" | "partial" => Ok(Theory::Del),
            "bott_chern" | "bc" | "bottchern" => Ok(Theory::BottChern),
            "aeppli" | "a" => Ok(Theory::Aeppli),
            "de_rham" | "derham" | "dr" => Ok(Theory::DeRham),
            other => Err(Error::Usage(format!("unknown cohomology theory `{other}`"))),
        }
    }
}

fn op(p: &LiePresentation, o: Op, a: isize, b: isize) -> ExactMatrix {
    (*p.op_matrix(o, a, b)).clone()
}

fn dim_of(p: &LiePresentation, a: isize, b: isize) -> usize {
    p.basis(a, b).len()
}

/// Spanning columns of the cocycle space Z^{p,q} of a theory.
pub fn cocycles(pr: &LiePresentation, t: Theory, p: isize, q: isize) -> ExactMatrix {
    match t {
        Theory::Dolbeault => op(pr, Op::DelBar, p, q).kernel(),
        Theory::Del => op(pr, Op::Del, p, q).kernel(),
        Theory::BottChern => op(pr, Op::Del, p, q).vstack(&op(pr, Op::DelBar, p, q)).kernel(),
        Theory::Aeppli => op(pr, Op::DelDelBar, p, q).kernel(),
        Theory::DeRham => (*pr.d_total_matrix(p)).kernel(),
    }
}

/// Spanning columns of the coboundary space B^{p,q} of a theory.
pub fn boundaries(pr: &LiePresentation, t: Theory, p: isize, q: isize) -> ExactMatrix {
    let b = match t {
        Theory::Dolbeault => op(pr, Op::DelBar, p, q - 1),
        Theory::Del => op(pr, Op::Del, p - 1, q),
        Theory::BottChern => op(pr, Op::DelDelBar, p - 1, q - 1),
        Theory::Aeppli => op(pr, Op::Del, p - 1, q).hstack(&op(pr, Op::DelBar, p, q - 1)),
        Theory::DeRham => (*pr.d_total_matrix(p - 1)).clone(),
    };
    let rows = if t == Theory::DeRham { pr.total_basis(p).len() } else { dim_of(pr, p, q) };
    if b.rows() != rows {
        // out-of-range source: empty operator
        return ExactMatrix::zeros(rows, 0);
    }
    subspace::basis(&b)
}

pub fn dimension(pr: &LiePresentation, t: Theory, p: isize, q: isize) -> usize {
    if t == Theory::DeRham {
        return betti(pr, p);
    }
    if dim_of(pr, p, q) == 0 {
        return 0;
    }
    // dim Z - dim B even when B is not inside Z, so that non-complexes still get numbers.
    subspace::dim(&cocycles(pr, t, p, q)).saturating_sub(subspace::dim(&boundaries(pr, t, p, q)))
}

pub fn betti(pr: &LiePresentation, k: isize) -> usize {
    if k < 0 || k as usize > 2 * pr.n() {
        return 0;
    }
    let z = cocycles(pr, Theory::DeRham, k, 0);
    let b = boundaries(pr, Theory::DeRham, k, 0);
    z.cols().saturating_sub(subspace::dim(&b))
}

/// Harmonic representatives: a basis of Z ∩ B^⊥ in reduced echelon form.
pub fn representatives(pr: &LiePresentation, t: Theory, p: isize, q: isize) -> Vec<Form> {
    if t == Theory::DeRham {
        return Vec::new();
    }
    let basis = pr.basis(p, q);
    if basis.is_empty() {
        return Vec::new();
    }
    let z = cocycles(pr, t, p, q);
    let b = boundaries(pr, t, p, q);
    let h = subspace::intersection(&z, &subspace::orth_complement(&b));
    reduced_basis(&h).iter().map(|v| basis.form_from(v)).collect()
}

/// Canonical basis of a column span: the nonzero rows of the RREF of its transpose.
pub fn reduced_basis(span: &ExactMatrix) -> Vec<Vec<Gr>> {
    if span.cols() == 0 {
        return Vec::new();
    }
    let r = span.transpose().rref();
    (0..r.pivots.len()).map(|k| r.matrix.row(k).to_vec()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub theory: Theory,
    pub n: usize,
    /// Bigraded dimensions keyed "p,q"; de Rham keyed by degree "k".
    pub dims: BTreeMap<String, usize>,
}

impl CohomologyTable {
    pub fn compute(pr: &LiePresentation, t: Theory) -> Self {
        let n = pr.n();
        let mut dims = BTreeMap::new();
        if t == Theory::DeRham {
            for k in 0..=2 * n {
                dims.insert(k.to_string(), betti(pr, k as isize));
            }
        } else {
            for p in 0..=n {
                for q in 0..=n {
                    dims.insert(format!("{p},{q}"), dimension(pr, t, p as isize, q as isize));
                }
            }
        }
        CohomologyTable { theory: t, n, dims }
    }

    pub fn get(&self, p: usize, q: usize) -> usize {
        self.dims.get(&format!("{p},{q}")).copied().unwrap_or(0)
    }

    pub fn degree(&self, k: usize) -> usize {
        self.dims.get(&k.to_string()).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedMapReport {
    pub source: Theory,
    pub target: Theory,
    pub p: usize,
    pub q: usize,
    pub injective: bool,
    pub surjective: bool,
    pub kernel_dim: usize,
    pub cokernel_dim: usize,
}

pub const ARROWS: [(Theory, Theory); 5] = [
    (Theory::BottChern, Theory::Del),
    (Theory::BottChern, Theory::Dolbeault),
    (Theory::Del, Theory::Aeppli),
    (Theory::Dolbeault, Theory::Aeppli),
    (Theory::BottChern, Theory::Aeppli),
];

/// The map induced by the identity on forms, ι^{p,q}_{source,target}.
pub fn induced_map(pr: &LiePresentation, s: Theory, t: Theory, p: usize, q: usize) -> Result<InducedMapReport> {
    if !ARROWS.contains(&(s, t)) {
        return Err(Error::InvalidArrow(s.name().into(), t.name().into()));
    }
    let (pi, qi) = (p as isize, q as isize);
    let zx = cocycles(pr, s, pi, qi);
    let bx = boundaries(pr, s, pi, qi);
    let zy = cocycles(pr, t, pi, qi);
    let by = boundaries(pr, t, pi, qi);
    // Saturating: without d^2 = 0 the boundaries need not sit inside the cocycles.
    let kernel_dim = subspace::dim(&subspace::intersection(&zx, &by)).saturating_sub(subspace::dim(&bx));
    let cokernel_dim = subspace::dim(&zy).saturating_sub(subspace::dim(&subspace::sum(&zx, &by)));
    Ok(InducedMapReport {
        source: s,
        target: t,
        p,
        q,
        injective: kernel_dim == 0,
        surjective: cokernel_dim == 0,
        kernel_dim,
        cokernel_dim,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Condition {
    /// ι_{BC,∂} injective.
    #[serde(rename = "BB")]
    BlackboardB,
    /// ι_{∂̄,A} injective.
    #[serde(rename = "SS")]
    BlackboardS,
    /// ι^{p-1,q}_{BC,∂̄} surjective.
    #[serde(rename = "B")]
    CalB,
    /// ∂(ker ∂̄ ∩ A^{p-1,q}) ⊆ im ∂̄.
    #[serde(rename = "S")]
    CalS,
}

impl Condition {
    pub const ALL: [Condition; 4] = [Condition::BlackboardB, Condition::BlackboardS, Condition::CalB, Condition::CalS];

    pub fn symbol(self) -> &'static str {
        match self {
            Condition::BlackboardB => "BB",
            Condition::BlackboardS => "SS",
            Condition::CalB => "B",
            Condition::CalS => "S",
        }
    }

    pub fn label(self, p: usize, q: usize) -> String {
        format!("{}^{{{p},{q}}}", self.symbol())
    }
}

impl FromStr for Condition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "BB" | "𝔹" => Ok(Condition::BlackboardB),
            "SS" | "𝕊" => Ok(Condition::BlackboardS),
            "B" | "ℬ" => Ok(Condition::CalB),
            "S" | "𝒮" => Ok(Condition::CalS),
            other => Err(Error::Usage(format!("unknown condition `{other}`"))),
        }
    }
}

fn in_range(pr: &LiePresentation, p: isize, q: isize) -> bool {
    let n = pr.n() as isize;
    (0..=n).contains(&p) && (0..=n).contains(&q)
}

/// Evaluates a condition class; bidegrees outside the complex are vacuously true.
pub fn condition(pr: &LiePresentation, c: Condition, p: isize, q: isize) -> bool {
    match c {
        Condition::BlackboardB => {
            !in_range(pr, p, q) || induced_map(pr, Theory::BottChern, Theory::Del, p as usize, q as usize).unwrap().injective
        }
        Condition::BlackboardS => {
            !in_range(pr, p, q)
                || induced_map(pr, Theory::Dolbeault, Theory::Aeppli, p as usize, q as usize).unwrap().injective
        }
        Condition::CalB => {
            !in_range(pr, p - 1, q)
                || induced_map(pr, Theory::BottChern, Theory::Dolbeault, (p - 1) as usize, q as usize)
                    .unwrap()
                    .surjective
        }
        Condition::CalS => cal_s_direct(pr, p, q),
    }
}

/// 𝒮^{p,q}: ∂̄x = ∂g solvable for every ∂̄-closed g in A^{p-1,q}.
pub fn cal_s_direct(pr: &LiePresentation, p: isize, q: isize) -> bool {
    if !in_range(pr, p - 1, q) || !in_range(pr, p, q) {
        return true;
    }
    let g = cocycles(pr, Theory::Dolbeault, p - 1, q);
    let img = op(pr, Op::Del, p - 1, q).mul(&g);
    let target = boundaries(pr, Theory::Dolbeault, p, q);
    subspace::contains(&target, &img)
}

/// 𝔹^{p,q} from its definition: ker ∂̄ ∩ im ∂ ⊆ im ∂∂̄.
pub fn blackboard_b_direct(pr: &LiePresentation, p: isize, q: isize) -> bool {
    if !in_range(pr, p, q) {
        return true;
    }
    let x = subspace::intersection(&cocycles(pr, Theory::Dolbeault, p, q), &boundaries(pr, Theory::Del, p, q));
    subspace::contains(&boundaries(pr, Theory::BottChern, p, q), &x)
}

/// 𝕊^{p,q} from its definition: ker ∂̄ ∩ im ∂ ⊆ im ∂̄.
pub fn blackboard_s_direct(pr: &LiePresentation, p: isize, q: isize) -> bool {
    if !in_range(pr, p, q) {
        return true;
    }
    let x = subspace::intersection(&cocycles(pr, Theory::Dolbeault, p, q), &boundaries(pr, Theory::Del, p, q));
    subspace::contains(&boundaries(pr, Theory::Dolbeault, p, q), &x)
}

/// ℬ^{p,q} from its definition: ker ∂̄ ⊆ (ker ∂ ∩ ker ∂̄) + im ∂̄ in A^{p-1,q}.
pub fn cal_b_direct(pr: &LiePresentation, p: isize, q: isize) -> bool {
    if !in_range(pr, p - 1, q) {
        return true;
    }
    let rhs = subspace::sum(
        &cocycles(pr, Theory::BottChern, p - 1, q),
        &boundaries(pr, Theory::Dolbeault, p - 1, q),
    );
    subspace::contains(&rhs, &cocycles(pr, Theory::Dolbeault, p - 1, q))
}

/// Every Gauduchon metric is strongly Gauduchon: ι^{0,1}_{BC,∂̄} surjective.
pub fn sgg_check(pr: &LiePresentation) -> bool {
    induced_map(pr, Theory::BottChern, Theory::Dolbeault, 0, 1).unwrap().surjective
}

/// Coefficient of the volume monomial in a ∧ b.
pub fn wedge_pairing(a: &Form, b: &Form) -> Gr {
    let n = a.n();
    let vol = (1u32 << (2 * n)) - 1;
    a.wedge(b).coeff(vol)
}

/// ⟨[a]_A, [b]_BC⟩ for a of bidegree (n-p, n-q) and b of bidegree (p, q).
pub fn duality_pairing(pr: &LiePresentation, a: &Form, b: &Form) -> Result<Gr> {
    let n = pr.n();
    if a.n() != n || b.n() != n {
        return Err(Error::PresentationMismatch(n, if a.n() != n { a.n() } else { b.n() }));
    }
    if a.is_zero() || b.is_zero() {
        return Ok(Gr::zero());
    }
    let (Some((ap, aq)), Some((bp, bq))) = (a.pure_bidegree(), b.pure_bidegree()) else {
        return Err(Error::DegreeMismatch("pairing arguments must be pure-type forms".into()));
    };
    if ap + bp != n || aq + bq != n {
        return Err(Error::DegreeMismatch(format!("({ap},{aq}) and ({bp},{bq}) are not complementary")));
    }
    if !pr.del(&pr.delbar(a)).is_zero() {
        return Err(Error::NotCocycle("first argument is not ∂∂̄-closed".into()));
    }
    if !pr.d(b).is_zero() {
        return Err(Error::NotCocycle("second argument is not d-closed".into()));
    }
    Ok(wedge_pairing(a, b))
}

/// Pairing matrix between Aeppli representatives at (n-p,n-q) and Bott-Chern
/// representatives at (p,q).
pub fn pairing_matrix(pr: &LiePresentation, p: usize, q: usize) -> ExactMatrix {
    let n = pr.n();
    let a = representatives(pr, Theory::Aeppli, (n - p) as isize, (n - q) as isize);
    let b = representatives(pr, Theory::BottChern, p as isize, q as isize);
    let rows: Vec<Vec<Gr>> = a.iter().map(|x| b.iter().map(|y| wedge_pairing(x, y)).collect()).collect();
    if rows.is_empty() {
        return ExactMatrix::zeros(0, b.len());
    }
    ExactMatrix::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{iwasawa, torus};

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn torus_dimensions() {
        let t = torus(2);
        for p in 0..=2 {
            for q in 0..=2 {
                for th in Theory::BIGRADED {
                    assert_eq!(dimension(&t, th, p, q), binom(2, p as usize) * binom(2, q as usize));
                }
            }
        }
        for &(s, tt) in &ARROWS {
            let r = induced_map(&t, s, tt, 1, 1).unwrap();
            assert!(r.injective && r.surjective);
        }
    }

    #[test]
    fn iwasawa_numbers() {
        let iw = iwasawa();
        assert_eq!(dimension(&iw, Theory::Dolbeault, 1, 1), 6);
        assert_eq!(dimension(&iw, Theory::Aeppli, 1, 1), 8);
        assert_eq!(dimension(&iw, Theory::BottChern, 2, 0), 3);
        assert_eq!(dimension(&iw, Theory::Del, 2, 0), 2);
        assert!(!induced_map(&iw, Theory::BottChern, Theory::Del, 2, 0).unwrap().injective);
        assert!(induced_map(&iw, Theory::BottChern, Theory::Del, 3, 0).unwrap().injective);
        assert!(matches!(
            induced_map(&iw, Theory::Aeppli, Theory::Del, 1, 1),
            Err(Error::InvalidArrow(_, _))
        ));
        assert!(sgg_check(&iw));
    }

    #[test]
    fn pairing_sign() {
        let iw = iwasawa();
        let n = 3;
        let a = Form::tau(n, 2).wedge(&Form::tau(n, 3)).wedge(&Form::tau_bar(n, 2)).wedge(&Form::tau_bar(n, 3));
        let b = Form::tau(n, 1).wedge(&Form::tau_bar(n, 1));
        assert_eq!(duality_pairing(&iw, &a, &b).unwrap(), Gr::one());
        assert_eq!(duality_pairing(&iw, &Form::zero(n), &b).unwrap(), Gr::zero());
        let t1 = torus(1);
        let one = Form::constant(1, Gr::one());
        let vol = Form::tau(1, 1).wedge(&Form::tau_bar(1, 1));
        assert_eq!(duality_pairing(&t1, &one, &vol).unwrap(), Gr::one());
    }
}

