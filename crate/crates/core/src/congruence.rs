//! Congruences in the ortholattice signature `{^, v, -}` or the residuated
//! signature `{^, v, -, \}`, the congruence lattice, and 1-regularity.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{Elem, FiniteAlgebra, Table, Witness};

pub const DEFAULT_MAX_SIZE: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Signature {
    /// `{^, v, -}`
    Ol,
    /// `{^, v, -, \}`
    Rol,
}

impl Signature {
    pub fn as_str(self) -> &'static str {
        match self {
            Signature::Ol => "ol",
            Signature::Rol => "rol",
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Signature {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ol" => Ok(Signature::Ol),
            "rol" => Ok(Signature::Rol),
            other => Err(format!("unknown signature `{other}` (expected ol or rol)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CongruenceError {
    #[error("the residuated signature needs a residual table")]
    MissingResidual,
    #[error("algebra has {n} elements; congruence lattices are limited to {max}")]
    SizeBound { n: usize, max: usize },
}

/// A partition of the carrier. Class ids are numbered by first occurrence,
/// so equal partitions have equal `class` vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Congruence {
    class: Vec<usize>,
    signature: Signature,
}

impl Congruence {
    fn from_labels(labels: &[usize], signature: Signature) -> Self {
        let mut ids = vec![usize::MAX; labels.len()];
        let mut next = 0;
        let class = labels
            .iter()
            .map(|&l| {
                if ids[l] == usize::MAX {
                    ids[l] = next;
                    next += 1;
                }
                ids[l]
            })
            .collect();
        Congruence { class, signature }
    }

    pub fn identity(n: usize, signature: Signature) -> Self {
        Congruence {
            class: (0..n).collect(),
            signature,
        }
    }

    pub fn total(n: usize, signature: Signature) -> Self {
        Congruence {
            class: vec![0; n],
            signature,
        }
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn class_of(&self, x: Elem) -> usize {
        self.class[x]
    }

    pub fn class_ids(&self) -> &[usize] {
        &self.class
    }

    pub fn related(&self, x: Elem, y: Elem) -> bool {
        self.class[x] == self.class[y]
    }

    pub fn num_classes(&self) -> usize {
        self.class.iter().max().map_or(0, |m| m + 1)
    }

    pub fn classes(&self) -> Vec<Vec<Elem>> {
        let mut out = vec![Vec::new(); self.num_classes()];
        for (x, &c) in self.class.iter().enumerate() {
            out[c].push(x);
        }
        out
    }

    /// The class of the element `x`.
    pub fn block(&self, x: Elem) -> Vec<Elem> {
        (0..self.class.len()).filter(|&y| self.related(x, y)).collect()
    }

    /// The class of the top element.
    pub fn one_class(&self) -> Vec<Elem> {
        self.block(self.class.len() - 1)
    }

    pub fn is_identity(&self) -> bool {
        self.num_classes() == self.class.len()
    }

    pub fn is_total(&self) -> bool {
        self.num_classes() <= 1
    }

    /// Whether every pair related by `self` is related by `other`.
    pub fn is_finer_than(&self, other: &Congruence) -> bool {
        let n = self.class.len();
        (0..n).all(|x| (x + 1..n).all(|y| !self.related(x, y) || other.related(x, y)))
    }

    /// `{0}{na,b}{nb,a}{1}`: classes in order of their least element.
    pub fn render(&self, a: &FiniteAlgebra) -> String {
        self.classes()
            .iter()
            .map(|c| {
                let names: Vec<_> = c.iter().map(|&x| a.name(x).into_owned()).collect();
                format!("{{{}}}", names.join(","))
            })
            .collect()
    }

    fn sort_key(&self) -> (usize, String) {
        let ids: Vec<String> = self.class.iter().map(ToString::to_string).collect();
        (self.num_classes(), ids.join(","))
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
        self.parent[hi] = lo;
        true
    }
}

fn binary_ops(a: &FiniteAlgebra, signature: Signature) -> Result<Vec<&Table>, CongruenceError> {
    let mut ops = vec![a.meet_table(), a.join_table()];
    if signature == Signature::Rol {
        ops.push(a.residual().ok_or(CongruenceError::MissingResidual)?);
    }
    Ok(ops)
}

/// Least congruence containing all `pairs`. Compatibility only has to be
/// enforced along the merge edges: every other related pair is joined to
/// them by a chain of such edges.
pub fn generated_congruence(
    a: &FiniteAlgebra,
    pairs: &[(Elem, Elem)],
    signature: Signature,
) -> Result<Congruence, CongruenceError> {
    let ops = binary_ops(a, signature)?;
    let n = a.size();
    let mut uf = UnionFind::new(n);
    let mut queue: Vec<(Elem, Elem)> = Vec::new();
    for &(x, y) in pairs {
        if uf.union(x, y) {
            queue.push((x, y));
        }
    }
    while let Some((u, v)) = queue.pop() {
        let (nu, nv) = (a.neg(u), a.neg(v));
        if uf.union(nu, nv) {
            queue.push((nu, nv));
        }
        for op in &ops {
            for w in 0..n {
                for (p, q) in [(op.get(u, w), op.get(v, w)), (op.get(w, u), op.get(w, v))] {
                    if uf.union(p, q) {
                        queue.push((p, q));
                    }
                }
            }
        }
    }
    let labels: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
    Ok(Congruence::from_labels(&labels, signature))
}

pub fn principal_congruence(
    a: &FiniteAlgebra,
    pair: (Elem, Elem),
    signature: Signature,
) -> Result<Congruence, CongruenceError> {
    generated_congruence(a, &[pair], signature)
}

/// Least congruence containing both.
pub fn join(a: &FiniteAlgebra, theta: &Congruence, psi: &Congruence) -> Result<Congruence, CongruenceError> {
    let mut pairs = Vec::new();
    for c in theta.classes().iter().chain(psi.classes().iter()) {
        pairs.extend(c.windows(2).map(|w| (w[0], w[1])));
    }
    generated_congruence(a, &pairs, theta.signature)
}

/// Compatibility of `theta` with an arbitrary binary operation. Right
/// translations `w op _` are checked before left translations `_ op w`, over
/// related pairs `v < u`; the witness is `[w, u, v]` with the two unrelated
/// values.
pub fn respects(theta: &Congruence, op: &Table) -> Result<(), Witness> {
    let n = op.size();
    let related_pairs: Vec<(Elem, Elem)> = (0..n)
        .flat_map(|u| (0..u).map(move |v| (u, v)))
        .filter(|&(u, v)| theta.related(u, v))
        .collect();
    for w in 0..n {
        for &(u, v) in &related_pairs {
            let (p, q) = (op.get(w, u), op.get(w, v));
            if !theta.related(p, q) {
                return Err(Witness::new("respects-right", vec![w, u, v], vec![p, q]));
            }
        }
    }
    for w in 0..n {
        for &(u, v) in &related_pairs {
            let (p, q) = (op.get(u, w), op.get(v, w));
            if !theta.related(p, q) {
                return Err(Witness::new("respects-left", vec![w, u, v], vec![p, q]));
            }
        }
    }
    Ok(())
}

/// Compatibility with the negation.
pub fn respects_unary(theta: &Congruence, op: &[Elem]) -> Result<(), Witness> {
    let n = op.len();
    for u in 0..n {
        for v in u + 1..n {
            if theta.related(u, v) && !theta.related(op[u], op[v]) {
                return Err(Witness::new("respects-unary", vec![u, v], vec![op[u], op[v]]));
            }
        }
    }
    Ok(())
}

/// Whether `theta` is a congruence for every operation of its signature.
pub fn is_congruence(a: &FiniteAlgebra, theta: &Congruence) -> Result<(), Witness> {
    respects_unary(theta, a.neg_table())?;
    respects(theta, a.meet_table())?;
    respects(theta, a.join_table())?;
    if theta.signature == Signature::Rol {
        match a.residual() {
            Some(res) => respects(theta, res)?,
            None => return Err(Witness::new("MissingResidual", vec![], vec![])),
        }
    }
    Ok(())
}

/// The congruence lattice with the default size bound.
pub fn all_congruences(a: &FiniteAlgebra, signature: Signature) -> Result<Vec<Congruence>, CongruenceError> {
    all_congruences_bounded(a, signature, DEFAULT_MAX_SIZE)
}

/// All congruences, obtained as joins of principal congruences, sorted by
/// number of classes and then by class-id string.
pub fn all_congruences_bounded(
    a: &FiniteAlgebra,
    signature: Signature,
    max: usize,
) -> Result<Vec<Congruence>, CongruenceError> {
    let n = a.size();
    if n > max {
        return Err(CongruenceError::SizeBound { n, max });
    }
    binary_ops(a, signature)?;
    let pairs: Vec<(Elem, Elem)> = (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect();
    let principal: Vec<Congruence> = pairs
        .par_iter()
        .map(|&p| principal_congruence(a, p, signature).expect("signature checked"))
        .collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut all = vec![Congruence::identity(n, signature)];
    seen.insert(all[0].class.clone());
    let mut generators = Vec::new();
    for c in principal {
        if seen.insert(c.class.clone()) {
            generators.push(c.clone());
            all.push(c);
        }
    }
    // joins of a closed family with the generators reach every join
    let mut frontier = all.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for theta in &frontier {
            for g in &generators {
                let j = join(a, theta, g)?;
                if seen.insert(j.class.clone()) {
                    next.push(j.clone());
                    all.push(j);
                }
            }
        }
        frontier = next;
    }
    all.sort_by_cached_key(Congruence::sort_key);
    Ok(all)
}

/// Two distinct congruences sharing the class of 1, if any.
pub fn regularity_witness(
    a: &FiniteAlgebra,
    signature: Signature,
) -> Result<Option<(Congruence, Congruence)>, CongruenceError> {
    let all = all_congruences(a, signature)?;
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            if all[i].one_class() == all[j].one_class() {
                return Ok(Some((all[i].clone(), all[j].clone())));
            }
        }
    }
    Ok(None)
}

/// 1-regularity in the residuated signature.
pub fn check_1_regular(a: &FiniteAlgebra) -> Result<Option<(Congruence, Congruence)>, CongruenceError> {
    regularity_witness(a, Signature::Rol)
}
