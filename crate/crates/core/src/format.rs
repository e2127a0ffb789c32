//! Text formats: structure files, Beltrami files, form files and
//! parameter bindings.
//!
//! A structure file is YAML:
//!
//! ```yaml
//! name: iwasawa
//! dim: 3
//! coframe: [t1, t2, t3]
//! d:
//!   t3:
//!     - {coeff: "-1", wedge: [t1, t2]}
//! ```
//!
//! `~x` names the conjugate of coframe element `x`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::beltrami::Beltrami;
use crate::error::{Error, Result};
use crate::forms::{index_lists, mono_order_key, Form, Mono};
use crate::presentation::LiePresentation;
use crate::scalar::Gr;
use crate::series::{BeltramiSeries, Series};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Term {
    pub coeff: String,
    pub wedge: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StructureFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub coframe: Vec<String>,
    #[serde(default)]
    pub d: BTreeMap<String, Vec<Term>>,
}

fn yaml_err(e: serde_yaml::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Resolves `x` or `~x` to a slot index (τ^k at k-1, τ̄^k at n+k-1).
fn slot(names: &[String], s: &str) -> Result<usize> {
    let n = names.len();
    let (bar, base) = match s.trim().strip_prefix('~') {
        Some(b) => (true, b.trim()),
        None => (false, s.trim()),
    };
    let k = names.iter().position(|x| x == base).ok_or_else(|| Error::Parse(format!("unknown coframe element `{s}`")))?;
    Ok(if bar { n + k } else { k })
}

/// Wedge of named one-forms, in the given order.
fn wedge_of(names: &[String], factors: &[String]) -> Result<Form> {
    let n = names.len();
    let mut f = Form::constant(n, Gr::one());
    for s in factors {
        let a = slot(names, s)?;
        f = f.wedge(&Form::slot(n, a));
        if f.is_zero() {
            return Err(Error::Parse(format!("repeated factor in wedge {factors:?}")));
        }
    }
    Ok(f)
}

/// A Gaussian rational, allowing a sign in front of parentheses: `-(1+i)`.
pub fn parse_coeff(s: &str) -> Result<Gr> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(rest) = s.strip_prefix('-').filter(|r| r.starts_with('(')) {
        return Ok(-rest.parse::<Gr>()?);
    }
    if let Some(rest) = s.strip_prefix('+').filter(|r| r.starts_with('(')) {
        return rest.parse();
    }
    s.parse()
}

fn form_from_terms(names: &[String], terms: &[Term]) -> Result<Form> {
    let mut f = Form::zero(names.len());
    for t in terms {
        let c = parse_coeff(&t.coeff)?;
        f.add_scaled(&wedge_of(names, &t.wedge)?, &c);
    }
    Ok(f)
}

fn terms_of(f: &Form, names: &[String]) -> Vec<Term> {
    let n = f.n();
    let mut ts: Vec<(Mono, Gr)> = f.sorted_terms();
    ts.sort_by_key(|(m, _)| mono_order_key(n, *m));
    ts.into_iter()
        .map(|(m, c)| {
            let (i, j) = index_lists(n, m);
            let mut wedge: Vec<String> = i.iter().map(|k| names[k - 1].clone()).collect();
            wedge.extend(j.iter().map(|k| format!("~{}", names[k - 1])));
            Term { coeff: c.to_string(), wedge }
        })
        .collect()
}

fn check_names(names: &[String]) -> Result<()> {
    for (k, a) in names.iter().enumerate() {
        if a.is_empty() || a.starts_with('~') || a.contains(char::is_whitespace) {
            return Err(Error::Parse(format!("bad coframe name `{a}`")));
        }
        if names[..k].contains(a) {
            return Err(Error::Parse(format!("duplicate coframe name `{a}`")));
        }
    }
    Ok(())
}

/// Parses and validates (d² = 0, integrability).
pub fn parse_presentation(text: &str) -> Result<LiePresentation> {
    parse_presentation_with(text, true)
}

pub fn parse_presentation_with(text: &str, validate: bool) -> Result<LiePresentation> {
    let file: StructureFile = serde_yaml::from_str(text).map_err(yaml_err)?;
    if file.coframe.len() != file.dim {
        return Err(Error::Parse(format!("dim is {} but {} coframe names given", file.dim, file.coframe.len())));
    }
    check_names(&file.coframe)?;
    for key in file.d.keys() {
        if !file.coframe.contains(key) {
            return Err(Error::Parse(format!("d given for unknown coframe element `{key}`")));
        }
    }
    let table = file
        .coframe
        .iter()
        .map(|k| form_from_terms(&file.coframe, file.d.get(k).map(Vec::as_slice).unwrap_or(&[])))
        .collect::<Result<Vec<_>>>()?;
    let name = file.name.clone().unwrap_or_else(|| "unnamed".into());
    let p = if validate {
        LiePresentation::new(&name, file.coframe.clone(), table)?
    } else {
        LiePresentation::unvalidated(&name, file.coframe.clone(), table)?
    };
    Ok(p.with_source("file"))
}

/// Canonical structure file: terms in basis order, coefficients in lowest terms.
pub fn presentation_to_yaml(p: &LiePresentation) -> String {
    let names = p.names().to_vec();
    let d = names
        .iter()
        .zip(p.d_table())
        .filter(|(_, f)| !f.is_zero())
        .map(|(k, f)| (k.clone(), terms_of(f, &names)))
        .collect();
    let file = StructureFile { name: Some(p.name.clone()), dim: p.n(), coframe: names, d };
    serde_yaml::to_string(&file).expect("structure files serialize")
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FormFile {
    pub terms: Vec<Term>,
}

/// A form file, with names resolved against a presentation's coframe.
pub fn parse_form(text: &str, names: &[String]) -> Result<Form> {
    let file: FormFile = serde_yaml::from_str(text).map_err(yaml_err)?;
    form_from_terms(names, &file.terms)
}

/// Inline form syntax: `1*t1^~t2 + (1+i)*t3`.
pub fn parse_form_inline(s: &str, names: &[String]) -> Result<Form> {
    let mut f = Form::zero(names.len());
    for raw in split_top(s) {
        let raw = raw.trim();
        if raw.is_empty() {
            continue;
        }
        let (coeff, mono) = match raw.rsplit_once('*') {
            Some((c, m)) if !m.trim().starts_with(|c: char| c.is_ascii_digit() || c == '(') => (c.trim().to_string(), m),
            _ => {
                let (neg, body) = match raw.strip_prefix('-') {
                    Some(b) => (true, b),
                    None => (false, raw.strip_prefix('+').unwrap_or(raw)),
                };
                if slot(names, body.split('^').next().unwrap_or("")).is_ok() {
                    ((if neg { "-1" } else { "1" }).to_string(), body)
                } else {
                    (raw.to_string(), "")
                }
            }
        };
        let factors: Vec<String> = mono.split('^').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect();
        let c = match coeff.as_str() {
            "-" => Gr::from_int(-1),
            "+" | "" => Gr::one(),
            _ => parse_coeff(&coeff)?,
        };
        f.add_scaled(&wedge_of(names, &factors)?, &c);
    }
    Ok(f)
}

/// Splits a sum on top-level + and - (not inside parentheses or after / or *).
fn split_top(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    let mut prev = ' ';
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if (ch == '+' || ch == '-') && depth == 0 && !cur.trim().is_empty() && !matches!(prev, '/' | '*' | '(' | '^') {
            out.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
        if !ch.is_whitespace() {
            prev = ch;
        }
    }
    out.push(cur);
    out
}

pub fn form_to_yaml(f: &Form, names: &[String]) -> String {
    serde_yaml::to_string(&FormFile { terms: terms_of(f, names) }).expect("form files serialize")
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BeltramiTerm {
    pub coeff: String,
    pub conj_coframe: String,
    pub vector: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BeltramiFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<String>>,
    pub terms: Vec<BeltramiTerm>,
}

/// φ = φ_const + Σ t_ν φ_ν, linear in holomorphic parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametricBeltrami {
    pub n: usize,
    pub params: Vec<String>,
    pub constant: Beltrami,
    pub linear: Vec<Beltrami>,
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && s != "i"
}

/// `c`, `t1`, `-t2`, `1/2*t1`, `(1+i)*t2` into (coefficient, parameter).
fn split_coeff(s: &str) -> Result<(Gr, Option<String>)> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some((c, p)) = s.rsplit_once('*') {
        if is_ident(p) {
            let c = match c {
                "" | "+" => Gr::one(),
                "-" => Gr::from_int(-1),
                _ => parse_coeff(c)?,
            };
            return Ok((c, Some(p.to_string())));
        }
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.as_str()),
    };
    if is_ident(body) {
        return Ok((Gr::from_int(if neg { -1 } else { 1 }), Some(body.to_string())));
    }
    Ok((parse_coeff(&s)?, None))
}

pub fn parse_beltrami(text: &str, names: &[String]) -> Result<ParametricBeltrami> {
    let file: BeltramiFile = serde_yaml::from_str(text).map_err(yaml_err)?;
    let n = names.len();
    let mut params = file.params.clone().unwrap_or_default();
    let mut constant = Beltrami::zero(n);
    let mut linear: Vec<Beltrami> = vec![Beltrami::zero(n); params.len()];
    for t in &file.terms {
        let j = slot(names, &t.conj_coframe)?;
        if j < n {
            return Err(Error::Parse(format!("conj_coframe must be a conjugate element, got `{}`", t.conj_coframe)));
        }
        let i = slot(names, &t.vector)?;
        if i >= n {
            return Err(Error::Parse(format!("vector must be a (1,0) element, got `{}`", t.vector)));
        }
        let (c, p) = split_coeff(&t.coeff)?;
        let e = Beltrami::entry(n, i + 1, j - n + 1, c);
        match p {
            None => constant = constant.add(&e),
            Some(p) => {
                let k = match params.iter().position(|x| *x == p) {
                    Some(k) => k,
                    None if file.params.is_some() => return Err(Error::Parse(format!("undeclared parameter `{p}`"))),
                    None => {
                        params.push(p);
                        linear.push(Beltrami::zero(n));
                        params.len() - 1
                    }
                };
                linear[k] = linear[k].add(&e);
            }
        }
    }
    Ok(ParametricBeltrami { n, params, constant, linear })
}

impl ParametricBeltrami {
    /// Numeric φ at the given bindings; every parameter must be bound.
    pub fn evaluate(&self, bindings: &BTreeMap<String, Gr>) -> Result<Beltrami> {
        for k in bindings.keys() {
            if !self.params.contains(k) {
                return Err(Error::Usage(format!("binding for unknown parameter `{k}`")));
            }
        }
        let mut out = self.constant.clone();
        for (p, b) in self.params.iter().zip(&self.linear) {
            let v = bindings.get(p).ok_or_else(|| Error::Usage(format!("parameter `{p}` is not bound")))?;
            out = out.add(&b.scale(v));
        }
        Ok(out)
    }

    /// The linear family as a truncated series φ(t) = Σ t_ν φ_ν.
    pub fn to_series(&self, order: u32) -> Result<BeltramiSeries> {
        if !self.constant.is_zero() {
            return Err(Error::Usage("a Beltrami series needs every term to carry a parameter".into()));
        }
        Ok(Series::from_beltrami_terms(self.params.clone(), order, &self.linear).with_dim(self.n))
    }
}

impl BeltramiSeries {
    fn with_dim(mut self, n: usize) -> Self {
        self.n = n;
        self
    }
}

pub fn beltrami_to_yaml(phi: &Beltrami, names: &[String]) -> String {
    let n = phi.n();
    let mut terms = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let c = phi.get(i, j);
            if !c.is_zero() {
                terms.push(BeltramiTerm { coeff: c.to_string(), conj_coframe: format!("~{}", names[j]), vector: names[i].clone() });
            }
        }
    }
    serde_yaml::to_string(&BeltramiFile { params: None, terms }).expect("Beltrami files serialize")
}

/// `t1=i/2,t2=1/3`.
pub fn parse_bindings(s: &str) -> Result<BTreeMap<String, Gr>> {
    let mut out = BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| Error::Parse(format!("binding `{part}` has no `=`")))?;
        let k = k.trim();
        if !is_ident(k) {
            return Err(Error::Parse(format!("bad parameter name `{k}`")));
        }
        if out.insert(k.to_string(), v.trim().parse()?).is_some() {
            return Err(Error::Parse(format!("parameter `{k}` bound twice")));
        }
    }
    Ok(out)
}
