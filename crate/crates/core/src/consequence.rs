//! Equational and quasi-equational consequence over a finite list of
//! algebras, and experiments with the negative translation.
//!
//! A query holds over a catalog when every assignment satisfying the
//! premises also satisfies the goal. This is only evidence for the
//! corresponding statement about the whole variety.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{Elem, FiniteAlgebra};
use crate::ops::{bar_image, BarImage};
use crate::term::{
    evaluate_unchecked, parse_equation_with, random_term, strip_comment, translate, translate_set, Equation,
    ParseError, Term, Vars,
};

pub const DEFAULT_MAX_VARS: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConsequenceError {
    #[error("algebra {algebra} has no residual table but the query uses `\\`")]
    MissingResidual { algebra: usize },
    #[error("query uses {found} variables, the bound is {max}")]
    VarBound { found: usize, max: usize },
    #[error("algebra {algebra}: {message}")]
    NotResiduated { algebra: usize, message: String },
}

/// Premises and goal sharing one variable table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub premises: Vec<Equation>,
    pub goal: Equation,
    pub vars: Vars,
}

impl Query {
    pub fn new(premises: Vec<Equation>, goal: Equation, vars: Vars) -> Self {
        Query { premises, goal, vars }
    }

    /// Parses premises (one per line) and a goal, all over the same variables.
    pub fn parse(premises: &[&str], goal: &str) -> Result<Query, ParseError> {
        let mut vars = Vars::new();
        let premises = premises
            .iter()
            .map(|p| parse_equation_with(p, &mut vars))
            .collect::<Result<Vec<_>, _>>()?;
        let goal = parse_equation_with(goal, &mut vars)?;
        Ok(Query { premises, goal, vars })
    }

    pub fn var_count(&self) -> usize {
        self.vars
            .len()
            .max(self.goal.var_bound())
            .max(self.premises.iter().map(Equation::var_bound).max().unwrap_or(0))
    }

    fn contains_res(&self) -> bool {
        self.goal.contains_res() || self.premises.iter().any(Equation::contains_res)
    }

    /// `T(premises) => T(goal)`, same variables.
    pub fn translated(&self) -> Query {
        Query {
            premises: translate_set(&self.premises),
            goal: self.goal.translate(),
            vars: self.vars.clone(),
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let premises: Vec<String> = self.premises.iter().map(|p| p.pretty(&self.vars).to_string()).collect();
        if !premises.is_empty() {
            write!(f, "{} |= ", premises.join(", "))?;
        }
        write!(f, "{}", self.goal.pretty(&self.vars))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryFileError {
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("query has no `goal:` line")]
    MissingGoal,
}

/// Reads a query file:
///
/// ```text
/// premises:
///   x <= y
/// goal: y . x = x
/// ```
///
/// The `premises:` block is optional; `#` starts a comment.
pub fn parse_query_file(text: &str) -> Result<Query, QueryFileError> {
    let mut vars = Vars::new();
    let mut premises = Vec::new();
    let mut goal = None;
    let mut in_premises = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw);
        if body.is_empty() {
            continue;
        }
        let parse = |s: &str, vars: &mut Vars| {
            parse_equation_with(s, vars).map_err(|source| QueryFileError::Parse { line, source })
        };
        if let Some(rest) = body.strip_prefix("premises:") {
            if goal.is_some() {
                return Err(QueryFileError::Syntax {
                    line,
                    message: "`premises:` after `goal:`".into(),
                });
            }
            in_premises = true;
            if !rest.trim().is_empty() {
                premises.push(parse(rest.trim(), &mut vars)?);
            }
        } else if let Some(rest) = body.strip_prefix("goal:") {
            if goal.is_some() {
                return Err(QueryFileError::Syntax {
                    line,
                    message: "second `goal:`".into(),
                });
            }
            goal = Some(parse(rest.trim(), &mut vars)?);
            in_premises = false;
        } else if in_premises {
            premises.push(parse(body, &mut vars)?);
        } else {
            return Err(QueryFileError::Syntax {
                line,
                message: format!("expected `premises:` or `goal:`, found `{body}`"),
            });
        }
    }
    let goal = goal.ok_or(QueryFileError::MissingGoal)?;
    Ok(Query { premises, goal, vars })
}

/// An assignment under which all premises hold and the goal fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    /// Index into the catalog.
    pub algebra: usize,
    pub assignment: Vec<Elem>,
    pub premise_values: Vec<(Elem, Elem)>,
    pub goal_values: (Elem, Elem),
}

impl Counterexample {
    /// `x=a, y=nb: lhs = b, rhs = 1` using the names of `a`.
    pub fn render(&self, a: &FiniteAlgebra, vars: &Vars) -> String {
        let assignment: Vec<String> = self
            .assignment
            .iter()
            .enumerate()
            .map(|(i, &v)| format!("{}={}", vars.name(i), a.name(v)))
            .collect();
        format!(
            "algebra {}, {}: lhs = {}, rhs = {}",
            self.algebra,
            assignment.join(", "),
            a.name(self.goal_values.0),
            a.name(self.goal_values.1)
        )
    }

    /// Re-evaluates the query; `true` iff this is still a counterexample.
    pub fn verify(&self, algebras: &[FiniteAlgebra], query: &Query) -> bool {
        let Some(a) = algebras.get(self.algebra) else {
            return false;
        };
        if self.assignment.len() < query.var_count() || self.assignment.iter().any(|&v| v >= a.size()) {
            return false;
        }
        if query.contains_res() && !a.has_residual() {
            return false;
        }
        let ev = |e: &Equation| {
            (
                evaluate_unchecked(&e.lhs, a, &self.assignment),
                evaluate_unchecked(&e.rhs, a, &self.assignment),
            )
        };
        let premises_hold = query.premises.iter().all(|p| {
            let (l, r) = ev(p);
            l == r
        });
        let (l, r) = ev(&query.goal);
        premises_hold && l != r && (l, r) == self.goal_values
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Holds on every algebra of the catalog (not a claim about the variety).
    HoldsOverCatalog {
        algebras: usize,
        assignments: u64,
    },
    Counterexample(Counterexample),
}

impl Outcome {
    pub fn holds(&self) -> bool {
        matches!(self, Outcome::HoldsOverCatalog { .. })
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Outcome::Counterexample(c) => Some(c),
            Outcome::HoldsOverCatalog { .. } => None,
        }
    }
}

/// Calls `f` on every assignment of `k` variables over `0..n` in
/// lexicographic order until it returns `Some`.
fn first_assignment<T>(n: usize, k: usize, mut f: impl FnMut(&[Elem]) -> Option<T>) -> Option<T> {
    let mut env = vec![0; k];
    loop {
        if let Some(t) = f(&env) {
            return Some(t);
        }
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            env[i] += 1;
            if env[i] < n {
                break;
            }
            env[i] = 0;
        }
    }
}

fn counterexample_in(index: usize, a: &FiniteAlgebra, query: &Query, k: usize) -> Option<Counterexample> {
    first_assignment(a.size(), k, |env| counterexample_at(index, a, query, env))
}

/// Decides `premises |= goal` over `algebras`. The reported counterexample
/// is the least in (catalog index, assignment) order.
pub fn consequence(algebras: &[FiniteAlgebra], query: &Query, max_vars: usize) -> Result<Outcome, ConsequenceError> {
    let k = query.var_count();
    if k > max_vars {
        return Err(ConsequenceError::VarBound {
            found: k,
            max: max_vars,
        });
    }
    if query.contains_res() {
        if let Some(algebra) = algebras.iter().position(|a| !a.has_residual()) {
            return Err(ConsequenceError::MissingResidual { algebra });
        }
    }
    let found = algebras
        .par_iter()
        .enumerate()
        .find_map_first(|(i, a)| counterexample_in(i, a, query, k));
    Ok(match found {
        Some(c) => Outcome::Counterexample(c),
        None => Outcome::HoldsOverCatalog {
            algebras: algebras.len(),
            assignments: algebras.iter().map(|a| (a.size() as u64).pow(k as u32)).sum(),
        },
    })
}

/// Like [`consequence`]; the premises may encode inequations `s <= t` as
/// `s ^ t = s`, which the parser does for `<=`. Each assignment is checked
/// separately, so premises act as quasi-equational hypotheses.
pub fn quasi_consequence(
    algebras: &[FiniteAlgebra],
    query: &Query,
    max_vars: usize,
) -> Result<Outcome, ConsequenceError> {
    consequence(algebras, query, max_vars)
}

/// Whether `a` satisfies every equation under every assignment.
pub fn satisfies(a: &FiniteAlgebra, eqs: &[Equation], vars: usize) -> bool {
    first_assignment(a.size(), vars, |env| {
        eqs.iter()
            .any(|e| evaluate_unchecked(&e.lhs, a, env) != evaluate_unchecked(&e.rhs, a, env))
            .then_some(())
    })
    .is_none()
}

/// `T(t)` on `a` at `env` against `t` on the bar image at `bar env`.
pub fn gamma_holds(t: &Term, a: &FiniteAlgebra, image: &BarImage, env: &[Elem]) -> bool {
    let lhs = evaluate_unchecked(&translate(t), a, env);
    let rhs = evaluate_unchecked(t, &image.algebra, &image.map(env));
    image.hom[lhs] == rhs && image.carrier[rhs] == lhs
}

/// A failure of `T(t)(a) = t(bar a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaViolation {
    pub algebra: usize,
    pub term: Term,
    pub assignment: Vec<Elem>,
}

/// Knobs of [`translation_experiment`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExperimentOptions {
    pub max_vars: usize,
    /// Random terms added to the subterms of the query for check (a).
    pub random_terms: usize,
    pub random_depth: usize,
    pub seed: u64,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        ExperimentOptions {
            max_vars: DEFAULT_MAX_VARS,
            random_terms: 0,
            random_depth: 3,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationReport {
    /// Catalog members satisfying `T[E]`.
    pub in_target: Vec<usize>,
    pub gamma_checks: u64,
    /// Check (a).
    pub gamma_violations: Vec<GammaViolation>,
    /// Check (b): members of the target whose bar image fails `E` or is not
    /// orthomodular.
    pub image_violations: Vec<usize>,
    /// Check (c), forward: counterexamples to the translated query whose
    /// bar image is not a counterexample to the original one.
    pub transfer_checked: u64,
    pub transfer_violations: Vec<Counterexample>,
    /// Check (c), backward: counterexamples on orthomodular members that
    /// are not counterexamples to the translated query.
    pub converse_checked: u64,
    pub converse_violations: Vec<Counterexample>,
    /// The query and its translation, each over the target members.
    pub original: Outcome,
    pub translated: Outcome,
}

impl TranslationReport {
    pub fn clean(&self) -> bool {
        self.gamma_violations.is_empty()
            && self.image_violations.is_empty()
            && self.transfer_violations.is_empty()
            && self.converse_violations.is_empty()
    }
}

fn subterms<'t>(t: &'t Term, out: &mut Vec<&'t Term>) {
    out.push(t);
    match t {
        Term::Zero | Term::One | Term::Var(_) => {}
        Term::Neg(s) => subterms(s, out),
        Term::Meet(s, r) | Term::Join(s, r) | Term::Res(s, r) => {
            subterms(s, out);
            subterms(r, out);
        }
    }
}

/// Runs the three translation checks for the variety axiomatized by
/// `equations` over orthomodular lattices, against the residuated
/// ortholattices of `catalog` that satisfy the translated equations.
pub fn translation_experiment(
    catalog: &[FiniteAlgebra],
    equations: &[Equation],
    query: &Query,
    opts: ExperimentOptions,
) -> Result<TranslationReport, ConsequenceError> {
    let k = query
        .var_count()
        .max(equations.iter().map(Equation::var_bound).max().unwrap_or(0));
    if k > opts.max_vars {
        return Err(ConsequenceError::VarBound {
            found: k,
            max: opts.max_vars,
        });
    }
    let mut images = Vec::with_capacity(catalog.len());
    for (i, a) in catalog.iter().enumerate() {
        if !a.has_residual() {
            return Err(ConsequenceError::MissingResidual { algebra: i });
        }
        let image = bar_image(a).map_err(|e| ConsequenceError::NotResiduated {
            algebra: i,
            message: e.to_string(),
        })?;
        images.push(image);
    }
    let translated_eqs = translate_set(equations);
    let in_target: Vec<usize> = (0..catalog.len())
        .filter(|&i| satisfies(&catalog[i], &translated_eqs, k))
        .collect();

    // (a) on every subterm of the query and the axioms, plus random terms
    let mut terms: Vec<Term> = Vec::new();
    {
        let mut refs = Vec::new();
        for e in equations.iter().chain(&query.premises).chain([&query.goal]) {
            subterms(&e.lhs, &mut refs);
            subterms(&e.rhs, &mut refs);
        }
        for t in refs {
            if !terms.contains(t) {
                terms.push(t.clone());
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.random_terms {
            terms.push(random_term(&mut rng, opts.random_depth, k.max(1)));
        }
    }
    let kk = k.max(if opts.random_terms > 0 { 1 } else { 0 });
    let per_algebra: Vec<(u64, Vec<GammaViolation>)> = in_target
        .par_iter()
        .map(|&i| {
            let (a, image) = (&catalog[i], &images[i]);
            let mut checks = 0u64;
            let mut bad = Vec::new();
            first_assignment::<()>(a.size(), kk, |env| {
                for t in &terms {
                    checks += 1;
                    if !gamma_holds(t, a, image, env) {
                        bad.push(GammaViolation {
                            algebra: i,
                            term: t.clone(),
                            assignment: env.to_vec(),
                        });
                    }
                }
                None
            });
            (checks, bad)
        })
        .collect();
    let gamma_checks = per_algebra.iter().map(|p| p.0).sum();
    let gamma_violations = per_algebra.into_iter().flat_map(|p| p.1).collect();

    // (b)
    let image_violations = in_target
        .iter()
        .copied()
        .filter(|&i| {
            let img = &images[i].algebra;
            let oml = crate::classify::class_witness(img, crate::classify::ClassName::Oml).is_none();
            !oml || !satisfies(img, equations, k)
        })
        .collect();

    // (c)
    let tq = query.translated();
    let target: Vec<FiniteAlgebra> = in_target.iter().map(|&i| catalog[i].clone()).collect();
    let mut transfer_checked = 0;
    let mut transfer_violations = Vec::new();
    let mut converse_checked = 0;
    let mut converse_violations = Vec::new();
    for (j, &i) in in_target.iter().enumerate() {
        let (a, image) = (&catalog[i], &images[i]);
        let oml = image.algebra.size() == a.size();
        first_assignment::<()>(a.size(), k, |env| {
            if let Some(c) = counterexample_at(j, a, &tq, env) {
                transfer_checked += 1;
                if counterexample_at(j, &image.algebra, query, &image.map(env)).is_none() {
                    transfer_violations.push(Counterexample { algebra: i, ..c });
                }
            }
            if oml {
                if let Some(c) = counterexample_at(j, a, query, env) {
                    converse_checked += 1;
                    if counterexample_at(j, a, &tq, env).is_none() {
                        converse_violations.push(Counterexample { algebra: i, ..c });
                    }
                }
            }
            None
        });
    }
    let remap = |o: Outcome| match o {
        Outcome::Counterexample(c) => Outcome::Counterexample(Counterexample {
            algebra: in_target[c.algebra],
            ..c
        }),
        holds => holds,
    };
    let original = remap(consequence(&target, query, opts.max_vars)?);
    let translated = remap(consequence(&target, &tq, opts.max_vars)?);
    Ok(TranslationReport {
        in_target,
        gamma_checks,
        gamma_violations,
        image_violations,
        transfer_checked,
        transfer_violations,
        converse_checked,
        converse_violations,
        original,
        translated,
    })
}

/// Outcome of [`gamma_exhaustive`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaSweep {
    /// Distinct pairs (`T(t)` on `A`, `t` on the bar image) met per depth.
    pub distinct_by_depth: Vec<usize>,
    /// A term of least depth violating the identity, if any.
    pub violation: Option<GammaViolation>,
}

/// Checks `T(t)(a) = t(bar a)` for every term `t` of depth at most `depth`
/// in `vars` variables and every assignment.
///
/// The value of a term is the pair of its two term functions, and the pair
/// of a compound term depends only on the pairs of its arguments, so it is
/// enough to close the set of pairs under the operations level by level.
pub fn gamma_exhaustive(algebra: usize, a: &FiniteAlgebra, image: &BarImage, vars: usize, depth: usize) -> GammaSweep {
    use std::collections::HashSet;

    let n = a.size();
    let envs: Vec<Vec<Elem>> = {
        let mut out = Vec::new();
        first_assignment::<()>(n, vars, |env| {
            out.push(env.to_vec());
            None
        });
        out
    };
    let img = &image.algebra;
    let tilde: Vec<Elem> = (0..n).map(|x| a.res(x, 0)).collect();
    // (values of T(t) on A, values of t on the image) per assignment
    type Pair = (Vec<Elem>, Vec<Elem>);
    let leaf = |t: &Term| -> Pair {
        let lhs = envs.iter().map(|e| evaluate_unchecked(&translate(t), a, e)).collect();
        let rhs = envs.iter().map(|e| evaluate_unchecked(t, img, &image.map(e))).collect();
        (lhs, rhs)
    };
    let ok = |p: &Pair| p.0.iter().zip(&p.1).all(|(&l, &r)| image.carrier[r] == l);
    let violation = |t: &Term, p: &Pair| {
        let i =
            p.0.iter()
                .zip(&p.1)
                .position(|(&l, &r)| image.carrier[r] != l)
                .expect("violating pair");
        GammaViolation {
            algebra,
            term: t.clone(),
            assignment: envs[i].clone(),
        }
    };

    let mut level: Vec<(Pair, Term)> = Vec::new();
    let mut seen: HashSet<Pair> = HashSet::new();
    let mut leaves = vec![Term::Zero, Term::One];
    leaves.extend((0..vars).map(Term::var));
    for t in leaves {
        let p = leaf(&t);
        if !ok(&p) {
            return GammaSweep {
                distinct_by_depth: vec![seen.len()],
                violation: Some(violation(&t, &p)),
            };
        }
        if seen.insert(p.clone()) {
            level.push((p, t));
        }
    }
    let mut distinct_by_depth = vec![level.len()];
    let zip = |f: &dyn Fn(Elem, Elem) -> Elem, u: &[Elem], v: &[Elem]| -> Vec<Elem> {
        u.iter().zip(v).map(|(&x, &y)| f(x, y)).collect()
    };
    for _ in 0..depth {
        let current = level.clone();
        let mut fresh = Vec::new();
        let mut push = |p: Pair, t: Term, fresh: &mut Vec<(Pair, Term)>| -> Option<GammaViolation> {
            if seen.contains(&p) {
                return None;
            }
            if !ok(&p) {
                return Some(violation(&t, &p));
            }
            seen.insert(p.clone());
            fresh.push((p, t));
            None
        };
        for (p, t) in &current {
            let q = (
                p.0.iter().map(|&x| tilde[x]).collect(),
                p.1.iter().map(|&x| img.neg(x)).collect(),
            );
            if let Some(v) = push(q, Term::neg(t.clone()), &mut fresh) {
                return GammaSweep {
                    distinct_by_depth,
                    violation: Some(v),
                };
            }
        }
        for (p, s) in &current {
            for (q, r) in &current {
                let candidates: [(Pair, Term); 3] = [
                    (
                        (
                            zip(&|x, y| a.meet(x, y), &p.0, &q.0),
                            zip(&|x, y| img.meet(x, y), &p.1, &q.1),
                        ),
                        Term::meet(s.clone(), r.clone()),
                    ),
                    (
                        (
                            zip(&|x, y| a.join(x, y), &p.0, &q.0),
                            zip(&|x, y| img.join(x, y), &p.1, &q.1),
                        ),
                        Term::join(s.clone(), r.clone()),
                    ),
                    (
                        (
                            zip(&|x, y| a.res(x, y), &p.0, &q.0),
                            zip(&|x, y| img.res(x, y), &p.1, &q.1),
                        ),
                        Term::res(s.clone(), r.clone()),
                    ),
                ];
                for (pair, term) in candidates {
                    if let Some(v) = push(pair, term, &mut fresh) {
                        return GammaSweep {
                            distinct_by_depth,
                            violation: Some(v),
                        };
                    }
                }
            }
        }
        level.extend(fresh);
        distinct_by_depth.push(level.len());
    }
    GammaSweep {
        distinct_by_depth,
        violation: None,
    }
}

fn counterexample_at(index: usize, a: &FiniteAlgebra, query: &Query, env: &[Elem]) -> Option<Counterexample> {
    let mut premise_values = Vec::with_capacity(query.premises.len());
    for p in &query.premises {
        let v = (evaluate_unchecked(&p.lhs, a, env), evaluate_unchecked(&p.rhs, a, env));
        if v.0 != v.1 {
            return None;
        }
        premise_values.push(v);
    }
    let goal_values = (
        evaluate_unchecked(&query.goal.lhs, a, env),
        evaluate_unchecked(&query.goal.rhs, a, env),
    );
    (goal_values.0 != goal_values.1).then(|| Counterexample {
        algebra: index,
        assignment: env.to_vec(),
        premise_values,
        goal_values,
    })
}
