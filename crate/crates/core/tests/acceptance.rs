//! One PASS/FAIL line per acceptance criterion.
//!
//! A FAIL line is printed with the first piece of evidence against the
//! criterion. The process exits 0 either way so that known, documented
//! failures do not hide regressions in the regular test targets.

mod common;

use std::time::Instant;

use common::*;
use nilhodge::cohomology::{cocycles, condition, dimension, induced_map, sgg_check, Condition, Theory};
use nilhodge::deformation::{deform_structure, deformed_hodge, obstruction_series};
use nilhodge::extend::{extend_series, ExtendMode};
use nilhodge::frame::FrameMatrix;
use nilhodge::harmonic::MetricContext;
use nilhodge::identities::{consistency_checks, random_small_beltrami, run_suite, CheckOutcome, IDENTITY_NAMES};
use nilhodge::kuranishi::{integrability_identity, kuranishi_series, KuranishiBasis};
use nilhodge::predictor::{predict_all, Verdict};
use nilhodge::presentation::{cfp, iwasawa, torus};
use nilhodge::{ExactMatrix, Gr, LiePresentation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn iwasawa_table() -> Outcome {
    let iw = iwasawa();
    let want = [
        (Theory::Dolbeault, 1, 1, 6),
        (Theory::Aeppli, 1, 1, 8),
        (Theory::BottChern, 2, 0, 3),
        (Theory::Del, 2, 0, 2),
        (Theory::BottChern, 3, 0, 1),
        (Theory::Del, 3, 0, 1),
        (Theory::Dolbeault, 2, 1, 6),
        (Theory::Aeppli, 2, 1, 6),
        (Theory::BottChern, 3, 3, 1),
        (Theory::Del, 3, 3, 1),
    ];
    for (t, p, q, h) in want {
        let got = dimension(&iw, t, p, q);
        ensure!(got == h, "h^{{{p},{q}}}_{} = {got}, expected {h}", t.name());
    }
    Ok(format!("{} numbers", want.len()))
}

fn iwasawa_maps() -> Outcome {
    let iw = iwasawa();
    let want = [
        (Theory::BottChern, Theory::Del, 2, 0, false),
        (Theory::Dolbeault, Theory::Aeppli, 1, 1, true),
        (Theory::BottChern, Theory::Del, 3, 0, true),
        (Theory::Dolbeault, Theory::Aeppli, 2, 1, false),
        (Theory::BottChern, Theory::Del, 3, 3, true),
    ];
    for (s, t, p, q, inj) in want {
        let r = induced_map(&iw, s, t, p, q).map_err(|e| e.to_string())?;
        ensure!(r.injective == inj, "{}->{} at ({p},{q}) injective = {}", s.name(), t.name(), r.injective);
    }
    ensure!(sgg_check(&iw), "sGG fails");
    for q in 1..=3 {
        ensure!(condition(&iw, Condition::CalB, 1, q), "B^{{1,{q}}} fails");
    }
    Ok("5 maps, sGG, B^{1,q}".into())
}

fn cfp_deformation() -> Outcome {
    let c = cfp();
    let (t1, t2) = (g(0, 1, 1, 2), g(1, 3, 0, 1));
    let phi = cfp_phi(&t1, &t2);
    let d = deform_structure(&c, &phi).map_err(|e| e.to_string())?;
    let want = cfp_closed_form(&t1, &t2);
    for (k, (got, exp)) in d.presentation.d_table().iter().zip(&want).enumerate() {
        ensure!(got == exp, "d t{}: got {got}, expected {exp}", k + 1);
    }
    for (t, before, after) in [(Theory::Dolbeault, 14, 11), (Theory::BottChern, 11, 9)] {
        let h0 = dimension(&c, t, 1, 1);
        let ht = deformed_hodge(&c, &phi, t, 1, 1).map_err(|e| e.to_string())?;
        ensure!((h0, ht) == (before, after), "h^{{1,1}}_{}: {h0} -> {ht}, expected {before} -> {after}", t.name());
        ensure!(ht <= h0, "h^{{1,1}}_{} jumps up", t.name());
    }
    Ok("equations match; 14 -> 11 and 11 -> 9".into())
}

fn cfp_extension_check() -> Outcome {
    let c = cfp();
    let ctx = MetricContext::new(&c);
    let phi = cfp_phi_series(3);
    let mut count = 0;
    for p in 1..=5isize {
        let basis = c.basis(p, 0);
        for v in cocycles(&c, Theory::Dolbeault, p, 0).columns() {
            let sigma0 = basis.form_from(&v);
            ensure!(obstruction_series(&c, &phi, &cfp_extension(&sigma0, 3)).is_zero(), "obstruction of the closed form for {sigma0}");
            let e = extend_series(&ctx, &phi, &sigma0, ExtendMode::P0, 3, true).map_err(|e| e.to_string())?;
            ensure!(e.residual_zero(), "p0 residual for {sigma0}");
            count += 1;
        }
    }
    Ok(format!("{count} closed (p,0) forms, p = 1..5"))
}

fn failures(outcomes: &[CheckOutcome], label: &str) -> Option<String> {
    outcomes.iter().find(|o| !o.passed()).map(|o| {
        format!("{label} {}: {}/{} failed, first: {}", o.name, o.failures, o.checks, o.first_failure.clone().unwrap_or_default())
    })
}

fn shipped() -> Vec<LiePresentation> {
    vec![iwasawa(), cfp(), torus(1), torus(2), torus(3)]
}

fn identity_suite() -> Outcome {
    let mut checks = 0;
    for pr in [torus(2), iwasawa(), cfp()] {
        let r = run_suite(&pr, 50, 7).map_err(|e| e.to_string())?;
        ensure!(r.samples >= 50, "{}: only {} samples", pr.name, r.samples);
        let ids: Vec<CheckOutcome> = IDENTITY_NAMES.iter().filter_map(|n| r.identity(n).cloned()).collect();
        ensure!(ids.len() == IDENTITY_NAMES.len(), "{}: missing identities", pr.name);
        if let Some(f) = failures(&ids, &pr.name) {
            return Err(f);
        }
        checks += ids.iter().map(|o| o.checks).sum::<usize>();
    }
    Ok(format!("{checks} checks"))
}

fn consistency() -> Outcome {
    let mut checks = 0;
    let mut bad = Vec::new();
    for pr in shipped() {
        let outs = consistency_checks(&pr);
        checks += outs.iter().map(|o| o.checks).sum::<usize>();
        if let Some(f) = failures(&outs, &pr.name) {
            bad.push(f);
        }
    }
    ensure!(bad.is_empty(), "{}", bad.join("; "));
    Ok(format!("{checks} checks"))
}

fn kuranishi() -> Outcome {
    let t = torus(2);
    let k = kuranishi_series(&MetricContext::new(&t), &KuranishiBasis::Harmonic, None, 3).map_err(|e| e.to_string())?;
    ensure!(k.last_order() == 1 && k.obstruction.is_zero(), "torus: last order {}", k.last_order());

    let c = cfp();
    let basis = KuranishiBasis::Explicit(vec![dir(5, 5, 4), dir(5, 4, 4)]);
    let k = kuranishi_series(&MetricContext::new(&c), &basis, Some(vec!["t1".into(), "t2".into()]), 3).map_err(|e| e.to_string())?;
    ensure!(k.last_order() == 1 && k.obstruction.is_zero(), "cfp: last order {}", k.last_order());
    ensure!(k.phi.get(&[1, 0]) == dir(5, 5, 4) && k.phi.get(&[0, 1]) == dir(5, 4, 4), "cfp: wrong linear terms");

    let iw = iwasawa();
    let ctx = MetricContext::new(&iw);
    let k = kuranishi_series(&ctx, &KuranishiBasis::Harmonic, None, 3).map_err(|e| e.to_string())?;
    let identity = integrability_identity(&ctx, &k).map_err(|e| e.to_string())?;
    ensure!(identity.is_zero(), "iwasawa: integrability identity nonzero");
    ensure!(k.residual_zero() && k.obstruction.is_zero(), "iwasawa: nonzero residual or obstruction");
    let e33 = dir(3, 3, 3);
    ensure!(k.phi.get(&[0, 1, 0, 1, 0, 0]) == e33, "iwasawa: [t2*t4] = {:?}", k.phi.get(&[0, 1, 0, 1, 0, 0]));
    ensure!(k.phi.get(&[1, 0, 0, 0, 1, 0]) == e33.scale(&-Gr::one()), "iwasawa: [t1*t5] = {:?}", k.phi.get(&[1, 0, 0, 0, 1, 0]));
    ensure!(k.last_order() == 2, "iwasawa: last order {}", k.last_order());
    Ok("torus linear, cfp subfamily exact, iwasawa unobstructed to order 3".into())
}

fn block_inverse() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut done = 0;
    while done < 200 {
        let n = rng.gen_range(1..=4);
        let phi = random_small_beltrami(n, &mut rng);
        let j = ExactMatrix::from_rows(
            (0..n)
                .map(|_| (0..n).map(|_| g(rng.gen_range(-3..=3), rng.gen_range(1..=3), rng.gen_range(-3..=3), rng.gen_range(1..=3))).collect())
                .collect(),
        );
        let Ok(f) = FrameMatrix::new(j, phi) else { continue };
        let block = f.block_inverse().map_err(|e| e.to_string())?;
        ensure!(Some(block) == f.matrix().inverse(), "sample {done}: block formula differs");
        done += 1;
    }
    Ok("200 samples".into())
}

fn predictor() -> Outcome {
    let verdict = |pr: &LiePresentation, p, q| predict_all(pr).into_iter().find(|d| d.p == p && d.q == q).map(|d| d.verdict);
    let iw = iwasawa();
    for q in 1..=3 {
        let v = verdict(&iw, 0, q);
        ensure!(v.is_some_and(|v| v.guaranteed()), "iwasawa (0,{q}): {v:?}");
    }
    for p in [1, 2] {
        let v = verdict(&iw, p, 0);
        ensure!(v == Some(Verdict::NoConclusion), "iwasawa ({p},0): {v:?}");
    }
    for n in 1..=3 {
        let bad: Vec<_> = predict_all(&torus(n)).into_iter().filter(|d| !d.verdict.guaranteed()).collect();
        ensure!(bad.is_empty(), "torus({n}) ({},{}): no conclusion", bad[0].p, bad[0].q);
    }
    Ok("iwasawa verdicts, torus(1..3) all guaranteed".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("iwasawa golden table", iwasawa_table),
        ("iwasawa induced maps", iwasawa_maps),
        ("cfp deformation", cfp_deformation),
        ("cfp extension", cfp_extension_check),
        ("identity suite", identity_suite),
        ("duality and hodge consistency", consistency),
        ("kuranishi", kuranishi),
        ("block inverse", block_inverse),
        ("predictor", predictor),
    ];
    let mut passed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = f();
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(detail) => {
                passed += 1;
                println!("PASS {} {name} ({detail}) [{secs:.1}s]", k + 1);
            }
            Err(why) => println!("FAIL {} {name}: {why} [{secs:.1}s]", k + 1),
        }
    }
    println!("{passed}/{} criteria pass", criteria.len());
}
