//! Sufficient conditions for deformation invariance of h^{p,q}_∂̄, applied
//! recursively with a derivation tree as certificate.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cohomology::{condition, dimension, Condition, Theory};
use crate::extend::HypothesisCheck;
use crate::presentation::LiePresentation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "guaranteed-by-inv-pq")]
    InvPq,
    #[serde(rename = "guaranteed-by-inv-p0")]
    InvP0,
    #[serde(rename = "guaranteed-by-inv-0q")]
    Inv0q,
    #[serde(rename = "guaranteed-q-equals-n")]
    QEqualsN,
    #[serde(rename = "guaranteed-by-vanishing")]
    Vanishing,
    #[serde(rename = "no-conclusion")]
    NoConclusion,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::InvPq => "guaranteed-by-inv-pq",
            Verdict::InvP0 => "guaranteed-by-inv-p0",
            Verdict::Inv0q => "guaranteed-by-inv-0q",
            Verdict::QEqualsN => "guaranteed-q-equals-n",
            Verdict::Vanishing => "guaranteed-by-vanishing",
            Verdict::NoConclusion => "no-conclusion",
        }
    }

    pub fn guaranteed(self) -> bool {
        self != Verdict::NoConclusion
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One rule tried at a bidegree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attempt {
    pub rule: Verdict,
    pub conditions: Vec<HypothesisCheck>,
    /// The (p,q-1) or (p,n-1) premise; None when the rule has none or it is vacuous.
    pub premise: Option<Box<Derivation>>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub p: usize,
    pub q: usize,
    pub verdict: Verdict,
    /// Rules tried in order; the last one holds when the verdict is guaranteed.
    pub attempts: Vec<Attempt>,
}

impl Derivation {
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, depth: usize) {
        let pad = "  ".repeat(depth);
        out.push_str(&format!("{pad}({},{}): {}\n", self.p, self.q, self.verdict));
        for a in &self.attempts {
            let conds: Vec<String> =
                a.conditions.iter().map(|c| format!("{}={}", c.label, if c.holds { "yes" } else { "no" })).collect();
            out.push_str(&format!(
                "{pad}  {} [{}] {}\n",
                a.rule.name().trim_start_matches("guaranteed-by-").trim_start_matches("guaranteed-"),
                conds.join(", "),
                if a.holds { "holds" } else { "fails" }
            ));
            if let Some(d) = &a.premise {
                d.render_into(out, depth + 2);
            }
        }
    }
}

pub struct Predictor<'a> {
    pr: &'a LiePresentation,
    memo: HashMap<(usize, usize), Derivation>,
}

impl<'a> Predictor<'a> {
    pub fn new(pr: &'a LiePresentation) -> Self {
        Predictor { pr, memo: HashMap::new() }
    }

    fn cond(&self, c: Condition, p: usize, q: usize) -> HypothesisCheck {
        HypothesisCheck { label: c.label(p, q), holds: condition(self.pr, c, p as isize, q as isize) }
    }

    /// The (p,q-1) premise; q = 0 is the vacuous base case.
    fn below(&mut self, p: usize, q: usize) -> (Option<Box<Derivation>>, bool) {
        if q == 0 {
            return (None, true);
        }
        let d = self.predict(p, q - 1);
        let ok = d.verdict.guaranteed();
        (Some(Box::new(d)), ok)
    }

    pub fn predict(&mut self, p: usize, q: usize) -> Derivation {
        if let Some(d) = self.memo.get(&(p, q)) {
            return d.clone();
        }
        let n = self.pr.n();
        let mut attempts = Vec::new();
        let mut verdict = Verdict::NoConclusion;

        let push = |attempts: &mut Vec<Attempt>, a: Attempt| -> bool {
            let ok = a.holds;
            attempts.push(a);
            ok
        };

        'rules: {
            if q == 0 {
                let conditions = vec![self.cond(Condition::BlackboardS, p + 1, 0), self.cond(Condition::BlackboardS, p, 1)];
                let holds = conditions.iter().all(|c| c.holds);
                if push(&mut attempts, Attempt { rule: Verdict::InvP0, conditions, premise: None, holds }) {
                    verdict = Verdict::InvP0;
                    break 'rules;
                }
            }
            if p == 0 {
                let conditions = vec![self.cond(Condition::CalB, 1, q)];
                let (premise, ok) = self.below(0, q);
                let holds = conditions[0].holds && ok;
                if push(&mut attempts, Attempt { rule: Verdict::Inv0q, conditions, premise, holds }) {
                    verdict = Verdict::Inv0q;
                    break 'rules;
                }
            }
            {
                let conditions =
                    vec![self.cond(Condition::BlackboardB, p + 1, q), self.cond(Condition::BlackboardS, p, q + 1)];
                let here = conditions.iter().all(|c| c.holds);
                let (premise, ok) = if here { self.below(p, q) } else { (None, false) };
                if push(&mut attempts, Attempt { rule: Verdict::InvPq, conditions, premise, holds: here && ok }) {
                    verdict = Verdict::InvPq;
                    break 'rules;
                }
            }
            if q == n {
                let (premise, ok) = self.below(p, q);
                if push(&mut attempts, Attempt { rule: Verdict::QEqualsN, conditions: vec![], premise, holds: ok }) {
                    verdict = Verdict::QEqualsN;
                    break 'rules;
                }
            }
            {
                let h = dimension(self.pr, Theory::Dolbeault, p as isize, q as isize + 1);
                let c = HypothesisCheck { label: format!("h^{{{},{}}}_dbar vanishes", p, q + 1), holds: h == 0 };
                let (premise, ok) = if c.holds { self.below(p, q) } else { (None, false) };
                let holds = c.holds && ok;
                if push(&mut attempts, Attempt { rule: Verdict::Vanishing, conditions: vec![c], premise, holds }) {
                    verdict = Verdict::Vanishing;
                }
            }
        }
        let d = Derivation { p, q, verdict, attempts };
        self.memo.insert((p, q), d.clone());
        d
    }
}

pub fn invariance_predict(pr: &LiePresentation, p: usize, q: usize) -> Derivation {
    Predictor::new(pr).predict(p, q)
}

/// Verdicts for every bidegree, row-major in p.
pub fn predict_all(pr: &LiePresentation) -> Vec<Derivation> {
    let mut pd = Predictor::new(pr);
    let n = pr.n();
    (0..=n).flat_map(|p| (0..=n).map(move |q| (p, q))).map(|(p, q)| pd.predict(p, q)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{iwasawa, torus};

    #[test]
    fn iwasawa_verdicts() {
        let iw = iwasawa();
        for q in 1..=3 {
            assert_eq!(invariance_predict(&iw, 0, q).verdict, Verdict::Inv0q);
        }
        assert_eq!(invariance_predict(&iw, 1, 0).verdict, Verdict::NoConclusion);
        assert_eq!(invariance_predict(&iw, 2, 0).verdict, Verdict::NoConclusion);
    }

    #[test]
    fn torus_everything_guaranteed() {
        for n in 1..=3 {
            assert!(predict_all(&torus(n)).iter().all(|d| d.verdict.guaranteed()));
        }
    }

    #[test]
    fn derivation_renders_premises() {
        let d = invariance_predict(&iwasawa(), 0, 2);
        let r = d.render();
        assert!(r.contains("(0,1)") && r.contains("(0,0)"), "{r}");
    }
}
