//! Randomized identity suite for the contraction calculus and the
//! extension map, plus duality and Hodge-theory consistency checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::beltrami::{exp_contract, integrability_defect, is_integrable, lie_derivative_10, schouten_bracket, Beltrami, VectorForm};
use crate::cohomology::{betti, dimension, pairing_matrix, Theory};
use crate::deformation::{deform_structure, obstruction_equivalence_check};
use crate::error::Result;
use crate::forms::Form;
use crate::frame::{check_small, factor_matrix, simul_contract, ExtensionFrame};
use crate::harmonic::{LaplacianKind, MetricContext};
use crate::kuranishi::{kuranishi_series, KuranishiBasis};
use crate::linalg::ExactMatrix;
use crate::presentation::LiePresentation;
use crate::scalar::Gr;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub checks: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl CheckOutcome {
    fn new(name: &str) -> Self {
        CheckOutcome { name: name.into(), checks: 0, failures: 0, first_failure: None }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub presentation: String,
    pub seed: u64,
    pub samples: usize,
    pub integrable_samples: usize,
    /// d² = 0 and integrability of the presentation itself.
    pub structure: CheckOutcome,
    pub identities: Vec<CheckOutcome>,
    pub consistency: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn failures(&self) -> usize {
        self.structure.failures
            + self.identities.iter().map(|c| c.failures).sum::<usize>()
            + self.consistency.iter().map(|c| c.failures).sum::<usize>()
    }

    pub fn checks(&self) -> usize {
        self.structure.checks
            + self.identities.iter().map(|c| c.checks).sum::<usize>()
            + self.consistency.iter().map(|c| c.checks).sum::<usize>()
    }

    pub fn identity(&self, name: &str) -> Option<&CheckOutcome> {
        self.identities.iter().chain(&self.consistency).find(|c| c.name == name)
    }
}

pub const IDENTITY_NAMES: [&str; 6] =
    ["operator_identity", "commutator", "reality", "isomorphism", "extension_equivalence", "factorization"];

fn small_gr(rng: &mut ChaCha8Rng) -> Gr {
    let den = [3i64, 4, 5, 6, 7, 8];
    let a = rng.gen_range(-2..=2);
    let b = den[rng.gen_range(0..den.len())];
    let c = rng.gen_range(-2..=2);
    let d = den[rng.gen_range(0..den.len())];
    Gr::from_parts(a, b, c, d)
}

/// A dense random φ within the smallness gate; integrability is not required.
pub fn random_small_beltrami(n: usize, rng: &mut ChaCha8Rng) -> Beltrami {
    loop {
        let grid: Vec<Vec<Gr>> = (0..n).map(|_| (0..n).map(|_| small_gr(rng)).collect()).collect();
        let phi = Beltrami::from_grid(grid);
        if check_small(&phi).is_ok() {
            return phi;
        }
    }
}

/// A random φ within the smallness gate with at most 2n nonzero entries.
pub fn random_sparse_beltrami(n: usize, rng: &mut ChaCha8Rng) -> Beltrami {
    loop {
        let mut phi = Beltrami::zero(n);
        for _ in 0..n + rng.gen_range(0..=n) {
            phi.set(rng.gen_range(0..n), rng.gen_range(0..n), small_gr(rng));
        }
        if check_small(&phi).is_ok() {
            return phi;
        }
    }
}

/// First-order directions whose Kuranishi completion is used to sample
/// integrable φ. The builtin five-dimensional example uses its two-parameter
/// family; everything else uses the harmonic basis.
pub fn default_family(pr: &LiePresentation) -> KuranishiBasis {
    if pr.name == "cfp" && pr.source.as_deref() == Some("builtin") {
        let n = 5;
        KuranishiBasis::Explicit(vec![
            VectorForm::decomposable(Form::tau_bar(n, 5), 3),
            VectorForm::decomposable(Form::tau_bar(n, 4), 3),
        ])
    } else {
        KuranishiBasis::Harmonic
    }
}

/// Integrable φ from the Kuranishi family at random small parameters.
/// Returns fewer than `count` when the family is obstructed or rigid.
pub fn random_integrable(pr: &LiePresentation, family: &KuranishiBasis, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Beltrami>> {
    let ctx = MetricContext::new(pr);
    let k = kuranishi_series(&ctx, family, None, 4)?;
    let m = k.basis.len();
    let mut out = Vec::new();
    if m == 0 {
        return Ok(out);
    }
    let mut tries = 0;
    while out.len() < count && tries < 20 * count {
        tries += 1;
        let t: Vec<Gr> = (0..m).map(|_| small_gr(rng)).collect();
        let v = k.phi.evaluate(&t);
        let Some(phi) = Beltrami::from_vector_form(&v) else { continue };
        if check_small(&phi).is_ok() && is_integrable(pr, &phi)? {
            out.push(phi);
        }
    }
    Ok(out)
}

fn all_monomials(n: usize) -> impl Iterator<Item = Form> {
    (0..(1u32 << (2 * n))).map(move |m| Form::monomial(n, m, Gr::one()))
}

/// Runs every identity on every basis monomial for `samples` random φ.
pub fn run_suite(pr: &LiePresentation, samples: usize, seed: u64) -> Result<SuiteReport> {
    run_suite_with(pr, &default_family(pr), samples, seed)
}

pub fn run_suite_with(pr: &LiePresentation, family: &KuranishiBasis, samples: usize, seed: u64) -> Result<SuiteReport> {
    let n = pr.n();
    let names = pr.names().to_vec();
    let show = |f: &Form| f.display_with(&names);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut structure = CheckOutcome::new("structure");
    if let Err(e) = pr.validate() {
        structure.record(false, || e.to_string());
    } else {
        structure.record(true, String::new);
    }

    let mut op_id = CheckOutcome::new("operator_identity");
    let mut comm = CheckOutcome::new("commutator");
    let mut real = CheckOutcome::new("reality");
    let mut iso = CheckOutcome::new("isomorphism");
    let mut equiv = CheckOutcome::new("extension_equivalence");
    let mut fact = CheckOutcome::new("factorization");

    for _ in 0..samples {
        let phi = random_sparse_beltrami(n, &mut rng);
        let psi = random_sparse_beltrami(n, &mut rng);
        let v = phi.to_vector_form();
        let w = psi.to_vector_form();
        let minus_v = v.scale(&Gr::from_int(-1));
        let defect = integrability_defect(pr, &phi)?;
        let vw = schouten_bracket(pr, &v, &w)?;
        let fm = factor_matrix(&phi);
        let frame = ExtensionFrame::new(&phi)?;
        for a in all_monomials(n) {
            let lhs = exp_contract(&minus_v, &pr.d(&exp_contract(&v, &a)));
            let rhs = pr.d(&a).sub(&lie_derivative_10(pr, &v, &a)?).add(&defect.contract(&a));
            op_id.record(lhs == rhs, || format!("α = {}: {} vs {}", show(&a), show(&lhs), show(&rhs)));

            let lhs = vw.contract(&a);
            let rhs = lie_derivative_10(pr, &v, &w.contract(&a))?.sub(&w.contract(&lie_derivative_10(pr, &v, &a)?));
            comm.record(lhs == rhs, || format!("α = {}: {} vs {}", show(&a), show(&lhs), show(&rhs)));

            let e = frame.extend(&a);
            let ec = frame.extend_base(&a.conj());
            real.record(e.base.conj() == ec, || format!("α = {}", show(&a)));

            let back = frame.inverse(&e.deformed);
            let fwd = frame.extend(&frame.inverse(&a)).deformed;
            iso.record(back == a && fwd == a, || format!("α = {}", show(&a)));

            let lhs = exp_contract(&minus_v, &e.base);
            let rhs = simul_contract(&fm, &a);
            fact.record(lhs == rhs, || format!("α = {}: {} vs {}", show(&a), show(&lhs), show(&rhs)));
        }
    }

    let integrable = random_integrable(pr, family, samples, &mut rng)?;
    for phi in &integrable {
        let d = deform_structure(pr, phi)?;
        for a in all_monomials(n) {
            let c = obstruction_equivalence_check(pr, &d, &a)?;
            equiv.record(c.agree(), || format!("σ = {}: {:?}", show(&a), c));
        }
    }

    Ok(SuiteReport {
        presentation: pr.name.clone(),
        seed,
        samples,
        integrable_samples: integrable.len(),
        structure,
        identities: vec![op_id, comm, real, iso, equiv, fact],
        consistency: consistency_checks(pr),
    })
}

/// BC/Aeppli duality, pairing rank, harmonic kernels, Green identities and
/// the Frölicher Euler characteristic.
pub fn consistency_checks(pr: &LiePresentation) -> Vec<CheckOutcome> {
    let n = pr.n();
    let ni = n as isize;
    let ctx = MetricContext::new(pr);
    let mut dual = CheckOutcome::new("bc_aeppli_duality");
    let mut pair = CheckOutcome::new("pairing_full_rank");
    let mut ker_d = CheckOutcome::new("harmonic_kernel_dolbeault");
    let mut ker_bc = CheckOutcome::new("harmonic_kernel_bott_chern");
    let mut green = CheckOutcome::new("green_identities");
    let mut frol = CheckOutcome::new("frolicher_euler");
    let mut euler_dolbeault = 0i64;
    for p in 0..=n {
        for q in 0..=n {
            let (pi, qi) = (p as isize, q as isize);
            let bc = dimension(pr, Theory::BottChern, pi, qi);
            let ae = dimension(pr, Theory::Aeppli, ni - qi, ni - pi);
            dual.record(bc == ae, || format!("({p},{q}): BC {bc}, A^{{{},{}}} {ae}", n - q, n - p));

            let m = pairing_matrix(pr, p, q);
            let ok = m.rows() == m.cols() && m.rank() == m.rows();
            pair.record(ok, || format!("({p},{q}): {}x{} of rank {}", m.rows(), m.cols(), m.rank()));

            for (kind, theory, out) in
                [(LaplacianKind::Dolbeault, Theory::Dolbeault, &mut ker_d), (LaplacianKind::BottChern, Theory::BottChern, &mut ker_bc)]
            {
                let g = ctx.green(kind, pi, qi);
                let k = g.laplacian.cols() - g.laplacian.rank();
                let h = dimension(pr, theory, pi, qi);
                out.record(k == h, || format!("({p},{q}): ker {k}, h {h}"));
                green.record(green_ok(&g.laplacian, &g.g, &g.h), || format!("{kind:?} at ({p},{q})"));
            }
            let h = dimension(pr, Theory::Dolbeault, pi, qi) as i64;
            euler_dolbeault += if (p + q) % 2 == 0 { h } else { -h };
        }
    }
    let euler_betti: i64 = (0..=2 * n).map(|k| if k % 2 == 0 { betti(pr, k as isize) as i64 } else { -(betti(pr, k as isize) as i64) }).sum();
    frol.record(euler_dolbeault == euler_betti, || format!("Σ(-1)^(p+q) h^(p,q) = {euler_dolbeault}, Σ(-1)^k b_k = {euler_betti}"));
    vec![dual, pair, ker_d, ker_bc, green, frol]
}

/// □G = G□, □H = 0, GH = 0, H² = H, H* = H, G + H invertible.
fn green_ok(l: &ExactMatrix, g: &ExactMatrix, h: &ExactMatrix) -> bool {
    if l.rows() == 0 {
        return true;
    }
    l.mul(g) == g.mul(l)
        && l.mul(h).is_zero()
        && g.mul(h).is_zero()
        && h.mul(h) == *h
        && h.adjoint() == *h
        && g.add(h).inverse().is_some()
}
