use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use nilhodge::cohomology::{condition, dimension, induced_map, pairing_matrix, sgg_check, CohomologyTable, Condition, Theory, ARROWS};
use nilhodge::deformation::deform_structure;
use nilhodge::extend::{extend_series, ExtendMode};
use nilhodge::format::{parse_beltrami, parse_bindings, parse_form_inline, parse_presentation, parse_presentation_with, ParametricBeltrami};
use nilhodge::harmonic::{MetricContext, METRIC_NOTE};
use nilhodge::identities::run_suite;
use nilhodge::kuranishi::{integrability_identity, kuranishi_series, KuranishiBasis};
use nilhodge::predictor::{invariance_predict, predict_all};
use nilhodge::report::{grid, key_values, series_lines, series_map, Report};
use nilhodge::LiePresentation;

#[derive(Parser)]
#[command(name = "nilhodge", version, about = "Cohomology and deformations of invariant complex structures on Lie algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Table,
    Json,
}

#[derive(Args)]
struct Common {
    /// Structure file (YAML).
    file: Option<PathBuf>,
    /// Builtin presentation: iwasawa, cfp, torus(N).
    #[arg(long, conflicts_with = "file")]
    builtin: Option<String>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Also write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a presentation and check d² = 0 and integrability.
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Hodge numbers of the chosen cohomology theories.
    Cohomology {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "dolbeault,del,bott_chern,aeppli,de_rham")]
        theories: String,
    },
    /// Condition classes and the comparison maps between theories.
    Conditions {
        #[command(flatten)]
        common: Common,
    },
    /// Deformation-invariance verdicts for h^{p,q}_dbar.
    Predict {
        #[command(flatten)]
        common: Common,
        #[arg(long, requires = "q")]
        p: Option<usize>,
        #[arg(long, requires = "p")]
        q: Option<usize>,
    },
    /// Deformed structure equations and Hodge numbers at fixed parameters.
    Deform {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        beltrami: PathBuf,
        /// Parameter values, e.g. "t1=i/2,t2=1/3".
        #[arg(long, default_value = "")]
        t: String,
        /// theory:p,q; repeatable. Defaults to every Dolbeault number.
        #[arg(long)]
        compare: Vec<String>,
    },
    /// The Kuranishi family to a given order.
    Kuranishi {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        order: u32,
        /// First-order directions from a Beltrami file instead of the harmonic basis.
        #[arg(long)]
        beltrami: Option<PathBuf>,
    },
    /// Power-series extension of a form along a Beltrami family.
    Extend {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        beltrami: PathBuf,
        /// Inline form, e.g. "t1^t2 + 1/2*~t1".
        #[arg(long)]
        sigma: String,
        #[arg(long, default_value = "pq")]
        mode: String,
        #[arg(long, default_value_t = 3)]
        order: u32,
        /// Run the iteration even when the hypotheses fail.
        #[arg(long)]
        force: bool,
    },
    /// Aeppli/Bott-Chern pairing matrix at (p,q).
    Pairing {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
    },
    /// Randomized identity suite and consistency checks.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

/// What a command produced: the report, its text rendering and whether it passed.
struct Outcome {
    report: Report,
    text: String,
    ok: bool,
}

fn load(c: &Common, validate: bool) -> anyhow::Result<LiePresentation> {
    match (&c.file, &c.builtin) {
        (_, Some(b)) => Ok(LiePresentation::builtin(b)?),
        (Some(f), None) => {
            let text = fs::read_to_string(f).with_context(|| format!("reading {}", f.display()))?;
            let pr = if validate { parse_presentation(&text)? } else { parse_presentation_with(&text, false)? };
            Ok(pr.with_source(&f.display().to_string()))
        }
        (None, None) => bail!("give a structure file or --builtin NAME"),
    }
}

fn load_beltrami(path: &PathBuf, pr: &LiePresentation) -> anyhow::Result<ParametricBeltrami> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_beltrami(&text, pr.names())?)
}

fn yes(b: bool) -> String {
    if b { "yes" } else { "no" }.into()
}

fn validate(c: &Common) -> anyhow::Result<Outcome> {
    let pr = load(c, true)?;
    if c.builtin.is_some() {
        pr.validate()?;
    }
    let rows = vec![
        ("dimension".to_string(), pr.n().to_string()),
        ("nilpotent".to_string(), yes(pr.is_nilpotent())),
        ("complex parallelizable".to_string(), yes(pr.is_complex_parallelizable())),
    ];
    let payload = json!({
        "valid": true,
        "nilpotent": pr.is_nilpotent(),
        "complex_parallelizable": pr.is_complex_parallelizable(),
    });
    let report = Report::new("validate", &pr, payload);
    let text = format!("{}valid\n{}", report.header(), key_values(&rows));
    Ok(Outcome { report, text, ok: true })
}

fn cohomology(c: &Common, theories: &str) -> anyhow::Result<Outcome> {
    let pr = load(c, false)?;
    let ts: Vec<Theory> = theories.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect::<Result<_, _>>()?;
    let mut text = String::new();
    let mut tables = BTreeMap::new();
    for t in ts {
        let table = CohomologyTable::compute(&pr, t);
        if t == Theory::DeRham {
            let row: Vec<String> = (0..=2 * pr.n()).map(|k| format!("b{k}={}", table.degree(k))).collect();
            text.push_str(&format!("de Rham: {}\n", row.join(" ")));
        } else {
            text.push_str(&grid(&format!("h^{{p,q}}_{}", t.short()), pr.n(), |p, q| table.get(p, q).to_string()));
        }
        tables.insert(t.name().to_string(), serde_json::to_value(&table.dims)?);
    }
    let report = Report::new("cohomology", &pr, json!({ "tables": tables }));
    Ok(Outcome { text: format!("{}{}", report.header(), text), report, ok: true })
}

fn conditions(c: &Common) -> anyhow::Result<Outcome> {
    let pr = load(c, false)?;
    let n = pr.n();
    let mut text = String::new();
    let mut conds = BTreeMap::new();
    for cond in Condition::ALL {
        let vals: Vec<Vec<bool>> =
            (0..=n).map(|p| (0..=n).map(|q| condition(&pr, cond, p as isize, q as isize)).collect()).collect();
        text.push_str(&grid(&format!("{}^{{p,q}}", cond.symbol()), n, |p, q| if vals[p][q] { "y" } else { "n" }.into()));
        conds.insert(cond.symbol().to_string(), vals);
    }
    let mut maps = BTreeMap::new();
    for (s, t) in ARROWS {
        let mut cells = BTreeMap::new();
        let mut shown = vec![vec![String::new(); n + 1]; n + 1];
        for p in 0..=n {
            for q in 0..=n {
                let m = induced_map(&pr, s, t, p, q)?;
                shown[p][q] = format!("{}/{}", m.kernel_dim, m.cokernel_dim);
                cells.insert(format!("{p},{q}"), json!({"kernel": m.kernel_dim, "cokernel": m.cokernel_dim}));
            }
        }
        let name = format!("{}->{}", s.short(), t.short());
        text.push_str(&grid(&format!("iota_{name} (kernel/cokernel)"), n, |p, q| shown[p][q].clone()));
        maps.insert(name, cells);
    }
    let sgg = sgg_check(&pr);
    text.push_str(&format!("sGG: {}\n", yes(sgg)));
    let report = Report::new("conditions", &pr, json!({ "conditions": conds, "maps": maps, "sgg": sgg }));
    Ok(Outcome { text: format!("{}{}", report.header(), text), report, ok: true })
}

fn predict(c: &Common, p: Option<usize>, q: Option<usize>) -> anyhow::Result<Outcome> {
    let pr = load(c, false)?;
    let n = pr.n();
    let (payload, body) = match (p, q) {
        (Some(p), Some(q)) => {
            if p > n || q > n {
                bail!("bidegree ({p},{q}) is outside 0..={n}");
            }
            let d = invariance_predict(&pr, p, q);
            (serde_json::to_value(&d)?, d.render())
        }
        _ => {
            let all = predict_all(&pr);
            let body = grid("h^{p,q}_dbar invariance", n, |p, q| {
                let v = all[p * (n + 1) + q].verdict.name();
                v.trim_start_matches("guaranteed-by-").trim_start_matches("guaranteed-").to_string()
            });
            (serde_json::to_value(&all)?, body)
        }
    };
    let report = Report::new("predict", &pr, json!({ "derivations": payload }));
    Ok(Outcome { text: format!("{}{}", report.header(), body), report, ok: true })
}

fn parse_compare(s: &str) -> anyhow::Result<(Theory, usize, usize)> {
    let (t, pq) = s.split_once(':').ok_or_else(|| anyhow!("--compare wants theory:p,q, got `{s}`"))?;
    let (p, q) = pq.split_once(',').ok_or_else(|| anyhow!("--compare wants theory:p,q, got `{s}`"))?;
    Ok((t.parse()?, p.trim().parse()?, q.trim().parse()?))
}

fn deform(c: &Common, beltrami: &PathBuf, t: &str, compare: &[String]) -> anyhow::Result<Outcome> {
    let pr = load(c, false)?;
    let n = pr.n();
    let family = load_beltrami(beltrami, &pr)?;
    let phi = family.evaluate(&parse_bindings(t)?)?;
    let d = deform_structure(&pr, &phi)?;
    let names = pr.names();
    let mut pairs: Vec<(Theory, usize, usize)> = compare.iter().map(|s| parse_compare(s)).collect::<anyhow::Result<_>>()?;
    if pairs.is_empty() {
        pairs = (0..=n).flat_map(|p| (0..=n).map(move |q| (Theory::Dolbeault, p, q))).collect();
    }
    let mut text = format!("phi = {}\n", phi.display_with(names));
    let mut eqs = BTreeMap::new();
    for (k, f) in d.presentation.d_table().iter().enumerate() {
        text.push_str(&format!("d {}(t) = {}\n", names[k], f.display_with(names)));
        eqs.insert(names[k].clone(), f.display_with(names));
    }
    text.push_str(&format!("deformed structure verified: {}\n", yes(d.validated)));
    let mut comps = Vec::new();
    for (th, p, q) in pairs {
        if p > n || q > n {
            bail!("bidegree ({p},{q}) is outside 0..={n}");
        }
        let before = dimension(&pr, th, p as isize, q as isize);
        let after = dimension(&d.presentation, th, p as isize, q as isize);
        text.push_str(&format!("h^{{{p},{q}}}_{}: {before} → {after}\n", th.short()));
        comps.push(json!({"theory": th.name(), "p": p, "q": q, "before": before, "after": after}));
    }
    let report = Report::new(
        "deform",
        &pr,
        json!({
            "phi": phi.display_with(names),
            "structure_equations": eqs,
            "validated": d.validated,
            "comparisons": comps,
        }),
    );
    Ok(Outcome { text: format!("{}{}", report.header(), text), report, ok: true })
}

fn kuranishi(c: &Common, order: u32, beltrami: &Option<PathBuf>) -> anyhow::Result<Outcome> {
    let pr = load(c, false)?;
    let names = pr.names();
    let ctx = MetricContext::new(&pr);
    let (basis, params) = match beltrami {
        Some(path) => {
            let fam = load_beltrami(path, &pr)?;
            if !fam.constant.is_zero() {
                bail!("every direction in {} must carry a parameter", path.display());
            }
            (KuranishiBasis::Explicit(fam.linear.iter().map(|b| b.to_vector_form()).collect()), Some(fam.params))
        }
        None => (KuranishiBasis::Harmonic, None),
    };
    let k = kuranishi_series(&ctx, &basis, params, order)?;
    let identity_zero = integrability_identity(&ctx, &k)?.is_zero();
    let mut text = format!("basis: {} ({} directions), order {}\n", k.basis_kind, k.basis.len(), order);
    if let Some(note) = &k.note {
        text.push_str(&format!("{note}\n"));
    }
    text.push_str("phi(t):\n");
    for l in series_lines(&k.phi, names) {
        text.push_str(&format!("  {l}\n"));
    }
    if !k.unobstructed() {
        text.push_str("obstruction:\n");
        for l in series_lines(&k.obstruction, names) {
            text.push_str(&format!("  {l}\n"));
        }
    }
    let rows = vec![
        ("last nonzero order".to_string(), k.last_order().to_string()),
        ("unobstructed".to_string(), yes(k.unobstructed())),
        ("recursion residual zero".to_string(), yes(k.residual_zero())),
        ("integrability identity".to_string(), yes(identity_zero)),
    ];
    text.push_str(&key_values(&rows));
    let report = Report::new(
        "kuranishi",
        &pr,
        json!({
            "basis": k.basis_kind,
            "order": order,
            "phi": series_map(&k.phi, names),
            "obstruction": series_map(&k.obstruction, names),
            "last_order": k.last_order(),
            "residual_zero": k.residual_zero(),
            "identity_zero": identity_zero,
        }),
    )
    .with_metric(METRIC_NOTE);
    let ok = k.residual_zero() && identity_zero;
    Ok(Outcome { text: format!("{}{}", report.header(), text), report, ok })
}

fn extend(c: &Common, beltrami: &PathBuf, sigma: &str, mode: &str, order: u32, force: bool) -> anyhow::Result<Outcome> {
    let pr = load(c, false)?;
    let names = pr.names();
    let ctx = MetricContext::new(&pr);
    let phi = load_beltrami(beltrami, &pr)?.to_series(order)?;
    let sigma0 = parse_form_inline(sigma, names)?;
    let mode: ExtendMode = mode.parse()?;
    let e = extend_series(&ctx, &phi, &sigma0, mode, order, force)?;
    let mut text = format!("mode {} at ({},{}), route {}\n", e.mode, e.bidegree.0, e.bidegree.1, e.route);
    for h in &e.hypotheses {
        text.push_str(&format!("  {}: {}\n", h.label, yes(h.holds)));
    }
    if !e.hypotheses_hold {
        text.push_str("hypotheses fail; series computed because --force was given\n");
    }
    text.push_str("sigma(t):\n");
    for l in series_lines(&e.sigma, names) {
        text.push_str(&format!("  {l}\n"));
    }
    text.push_str(&format!("obstruction residual zero: {}\n", yes(e.residual_zero())));
    let report = Report::new(
        "extend",
        &pr,
        json!({
            "mode": e.mode.name(),
            "bidegree": [e.bidegree.0, e.bidegree.1],
            "hypotheses": e.hypotheses,
            "hypotheses_hold": e.hypotheses_hold,
            "route": e.route,
            "sigma": series_map(&e.sigma, names),
            "residual": series_map(&e.residual, names),
            "residual_zero": e.residual_zero(),
        }),
    )
    .with_metric(METRIC_NOTE);
    let ok = e.residual_zero();
    Ok(Outcome { text: format!("{}{}", report.header(), text), report, ok })
}

fn pairing(c: &Common, p: usize, q: usize) -> anyhow::Result<Outcome> {
    let pr = load(c, false)?;
    let n = pr.n();
    if p > n || q > n {
        bail!("bidegree ({p},{q}) is outside 0..={n}");
    }
    let m = pairing_matrix(&pr, p, q);
    let rank = m.rank();
    let full = m.rows() == m.cols() && rank == m.rows();
    let rows: Vec<Vec<String>> = (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect();
    let mut text = format!("A^{{{},{}}} x BC^{{{p},{q}}}: {}x{} of rank {}\n", n - p, n - q, m.rows(), m.cols(), rank);
    for r in &rows {
        text.push_str(&format!("  [{}]\n", r.join(", ")));
    }
    text.push_str(&format!("nondegenerate: {}\n", yes(full)));
    let report = Report::new("pairing", &pr, json!({ "p": p, "q": q, "matrix": rows, "rank": rank, "nondegenerate": full }));
    Ok(Outcome { text: format!("{}{}", report.header(), text), report, ok: full })
}

fn verify(c: &Common, samples: usize, seed: u64) -> anyhow::Result<Outcome> {
    let pr = load(c, false)?;
    let r = run_suite(&pr, samples, seed)?;
    let mut rows = Vec::new();
    for o in std::iter::once(&r.structure).chain(&r.identities).chain(&r.consistency) {
        let mut v = format!("{}/{} failed", o.failures, o.checks);
        if let Some(f) = &o.first_failure {
            v.push_str(&format!("; first: {f}"));
        }
        rows.push((o.name.clone(), v));
    }
    let text = format!(
        "{} samples (seed {}), {} integrable\n{}total: {} checks, {} failures\n",
        r.samples,
        r.seed,
        r.integrable_samples,
        key_values(&rows),
        r.checks(),
        r.failures()
    );
    let ok = r.failures() == 0;
    let report = Report::new("verify", &pr, serde_json::to_value(&r)?).with_metric(METRIC_NOTE);
    Ok(Outcome { text: format!("{}{}", report.header(), text), report, ok })
}

fn dispatch(cmd: &Cmd) -> (anyhow::Result<Outcome>, &Common) {
    match cmd {
        Cmd::Validate { common } => (validate(common), common),
        Cmd::Cohomology { common, theories } => (cohomology(common, theories), common),
        Cmd::Conditions { common } => (conditions(common), common),
        Cmd::Predict { common, p, q } => (predict(common, *p, *q), common),
        Cmd::Deform { common, beltrami, t, compare } => (deform(common, beltrami, t, compare), common),
        Cmd::Kuranishi { common, order, beltrami } => (kuranishi(common, *order, beltrami), common),
        Cmd::Extend { common, beltrami, sigma, mode, order, force } => {
            (extend(common, beltrami, sigma, mode, *order, *force), common)
        }
        Cmd::Pairing { common, p, q } => (pairing(common, *p, *q), common),
        Cmd::Verify { common, samples, seed } => (verify(common, *samples, *seed), common),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (res, common) = dispatch(&cli.cmd);
    let out = match res {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::FAILURE;
        }
    };
    let json = out.report.to_json();
    match common.format {
        Format::Table => print!("{}", out.text),
        Format::Json => print!("{json}"),
    }
    if let Some(path) = &common.out {
        if let Err(e) = fs::write(path, &json) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::FAILURE;
        }
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
