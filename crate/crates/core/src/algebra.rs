//! Finite bounded involutive lattices stored as operation tables.
//!
//! The carrier of an algebra with `n` elements is `0..n`. Index `0` is always
//! the bottom and index `n - 1` the top; every constructor rejects tables that
//! break this normalization.

use std::borrow::Cow;
use std::fmt;

use thiserror::Error;

/// A carrier element, i.e. an index into `0..size`.
pub type Elem = usize;

/// A total binary operation on `0..n`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Table {
    n: usize,
    data: Vec<Elem>,
}

impl Table {
    pub fn from_fn(n: usize, mut f: impl FnMut(Elem, Elem) -> Elem) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                data.push(f(x, y));
            }
        }
        Table { n, data }
    }

    /// Wraps a row-major vector. Returns `None` when the length is not `n * n`.
    pub fn from_vec(n: usize, data: Vec<Elem>) -> Option<Self> {
        (data.len() == n * n).then_some(Table { n, data })
    }

    #[inline]
    pub fn get(&self, x: Elem, y: Elem) -> Elem {
        self.data[x * self.n + y]
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Elem] {
        &self.data
    }

    pub fn relabel(&self, perm: &[Elem]) -> Table {
        let mut data = vec![0; self.n * self.n];
        for x in 0..self.n {
            for y in 0..self.n {
                data[perm[x] * self.n + perm[y]] = perm[self.get(x, y)];
            }
        }
        Table { n: self.n, data }
    }
}

/// A structured counterexample: the violated law, the element tuple at which
/// it fails, and the evaluated values that disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub law: String,
    pub elements: Vec<Elem>,
    pub values: Vec<Elem>,
}

impl Witness {
    pub fn new(law: impl Into<String>, elements: Vec<Elem>, values: Vec<Elem>) -> Self {
        Witness {
            law: law.into(),
            elements,
            values,
        }
    }

    /// Formats the witness using the display names of `alg`.
    pub fn render(&self, alg: &FiniteAlgebra) -> String {
        let show = |xs: &[Elem]| {
            xs.iter()
                .map(|&x| {
                    if x < alg.size() {
                        alg.name(x).into_owned()
                    } else {
                        x.to_string()
                    }
                })
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut out = format!("{}({})", self.law, show(&self.elements));
        if !self.values.is_empty() {
            out.push_str(" values ");
            out.push_str(&show(&self.values));
        }
        out
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[Elem]| xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{}({})", self.law, join(&self.elements))?;
        if !self.values.is_empty() {
            write!(f, " values {}", join(&self.values))?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("empty carrier")]
    Empty,
    #[error("table `{table}` has the wrong shape")]
    TableShape { table: &'static str },
    #[error("table `{table}` mentions element {value} outside the carrier")]
    OutOfRange { table: &'static str, value: usize },
    #[error("cover relation has a cycle through {x} and {y}")]
    Cyclic { x: Elem, y: Elem },
    #[error("order has no bottom or no top")]
    MissingBounds,
    #[error("bottom must be index 0 and top must be index n-1")]
    BoundsNotNormalized,
    #[error("elements {x} and {y} have no meet or no join")]
    NotALattice { x: Elem, y: Elem },
    #[error("lattice law violated: {0}")]
    LatticeLaw(Witness),
    #[error("negation is not a permutation")]
    NegNotPermutation,
    #[error("negation is not an involution at {x}")]
    NegNotInvolution { x: Elem },
    #[error("negation is not antitone at {x} <= {y}")]
    NegNotAntitone { x: Elem, y: Elem },
    #[error("residual table violates x.y <= z <=> y <= x\\z: {0}")]
    ResidualViolation(Witness),
    #[error("expected {expected} names, got {got}")]
    NameCount { expected: usize, got: usize },
    #[error("invalid element name {0:?}")]
    BadName(String),
}

/// A finite bounded involutive lattice, optionally expanded by a residual of
/// the Sasaki product.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    meet: Table,
    join: Table,
    neg: Vec<Elem>,
    residual: Option<Table>,
    names: Option<Vec<String>>,
}

impl FiniteAlgebra {
    /// Builds an algebra from its tables and checks every invariant.
    pub fn new(
        meet: Table,
        join: Table,
        neg: Vec<Elem>,
        residual: Option<Table>,
        names: Option<Vec<String>>,
    ) -> Result<Self, AlgebraError> {
        let alg = FiniteAlgebra {
            meet,
            join,
            neg,
            residual,
            names,
        };
        alg.validate()?;
        Ok(alg)
    }

    /// Builds an algebra from up-set bitmasks (`up[x]` has bit `y` set iff
    /// `x <= y`). The order must already be a bounded lattice with the bounds
    /// normalized; this is the fast path used by the enumerator.
    pub fn from_up_sets(up: &[u64], neg: Vec<Elem>) -> Result<Self, AlgebraError> {
        let n = up.len();
        if n == 0 {
            return Err(AlgebraError::Empty);
        }
        let mut down = vec![0u64; n];
        for (x, &u) in up.iter().enumerate() {
            for (y, d) in down.iter_mut().enumerate() {
                if u >> y & 1 == 1 {
                    *d |= 1 << x;
                }
            }
        }
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let lower = down[x] & down[y];
                let m = (0..n)
                    .find(|&m| lower >> m & 1 == 1 && down[m] == lower)
                    .ok_or(AlgebraError::NotALattice { x, y })?;
                let upper = up[x] & up[y];
                let j = (0..n)
                    .find(|&j| upper >> j & 1 == 1 && up[j] == upper)
                    .ok_or(AlgebraError::NotALattice { x, y })?;
                meet[x * n + y] = m;
                join[x * n + y] = j;
            }
        }
        FiniteAlgebra::new(Table { n, data: meet }, Table { n, data: join }, neg, None, None)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let n = self.meet.n;
        if n == 0 {
            return Err(AlgebraError::Empty);
        }
        if self.meet.data.len() != n * n {
            return Err(AlgebraError::TableShape { table: "meet" });
        }
        if self.join.n != n || self.join.data.len() != n * n {
            return Err(AlgebraError::TableShape { table: "join" });
        }
        if self.neg.len() != n {
            return Err(AlgebraError::TableShape { table: "neg" });
        }
        for (table, data) in [("meet", &self.meet.data), ("join", &self.join.data), ("neg", &self.neg)] {
            if let Some(&value) = data.iter().find(|&&v| v >= n) {
                return Err(AlgebraError::OutOfRange { table, value });
            }
        }
        if let Some(res) = &self.residual {
            if res.n != n || res.data.len() != n * n {
                return Err(AlgebraError::TableShape { table: "res" });
            }
            if let Some(&value) = res.data.iter().find(|&&v| v >= n) {
                return Err(AlgebraError::OutOfRange { table: "res", value });
            }
        }
        if let Some(names) = &self.names {
            if names.len() != n {
                return Err(AlgebraError::NameCount {
                    expected: n,
                    got: names.len(),
                });
            }
            for name in names {
                if name.is_empty() || name.chars().any(char::is_whitespace) {
                    return Err(AlgebraError::BadName(name.clone()));
                }
            }
        }
        self.check_lattice_laws()?;

        let top = n - 1;
        for x in 0..n {
            if self.meet(0, x) != 0 || self.join(x, top) != top {
                return Err(AlgebraError::BoundsNotNormalized);
            }
        }

        let mut seen = vec![false; n];
        for &v in &self.neg {
            if std::mem::replace(&mut seen[v], true) {
                return Err(AlgebraError::NegNotPermutation);
            }
        }
        for x in 0..n {
            if self.neg(self.neg(x)) != x {
                return Err(AlgebraError::NegNotInvolution { x });
            }
        }
        for x in 0..n {
            for y in 0..n {
                if self.leq(x, y) && !self.leq(self.neg(y), self.neg(x)) {
                    return Err(AlgebraError::NegNotAntitone { x, y });
                }
            }
        }

        if let Some(res) = &self.residual {
            for x in 0..n {
                for y in 0..n {
                    let prod = self.meet(x, self.join(self.neg(x), y));
                    for z in 0..n {
                        if self.leq(prod, z) != self.leq(y, res.get(x, z)) {
                            return Err(AlgebraError::ResidualViolation(Witness::new(
                                "R",
                                vec![x, y, z],
                                vec![prod, res.get(x, z)],
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_lattice_laws(&self) -> Result<(), AlgebraError> {
        let n = self.size();
        let fail = |law: &str, elements: Vec<Elem>, values: Vec<Elem>| {
            Err(AlgebraError::LatticeLaw(Witness::new(law, elements, values)))
        };
        for x in 0..n {
            if self.meet(x, x) != x {
                return fail("meet-idempotent", vec![x], vec![self.meet(x, x)]);
            }
            if self.join(x, x) != x {
                return fail("join-idempotent", vec![x], vec![self.join(x, x)]);
            }
        }
        for x in 0..n {
            for y in 0..n {
                if self.meet(x, y) != self.meet(y, x) {
                    return fail("meet-commutative", vec![x, y], vec![self.meet(x, y), self.meet(y, x)]);
                }
                if self.join(x, y) != self.join(y, x) {
                    return fail("join-commutative", vec![x, y], vec![self.join(x, y), self.join(y, x)]);
                }
                let a = self.meet(x, self.join(x, y));
                if a != x {
                    return fail("absorption", vec![x, y], vec![a, x]);
                }
                let b = self.join(x, self.meet(x, y));
                if b != x {
                    return fail("absorption", vec![x, y], vec![b, x]);
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let l = self.meet(self.meet(x, y), z);
                    let r = self.meet(x, self.meet(y, z));
                    if l != r {
                        return fail("meet-associative", vec![x, y, z], vec![l, r]);
                    }
                    let l = self.join(self.join(x, y), z);
                    let r = self.join(x, self.join(y, z));
                    if l != r {
                        return fail("join-associative", vec![x, y, z], vec![l, r]);
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.meet.n
    }

    pub fn bottom(&self) -> Elem {
        0
    }

    pub fn top(&self) -> Elem {
        self.size() - 1
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.size()
    }

    #[inline]
    pub fn meet(&self, x: Elem, y: Elem) -> Elem {
        self.meet.get(x, y)
    }

    #[inline]
    pub fn join(&self, x: Elem, y: Elem) -> Elem {
        self.join.get(x, y)
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        self.neg[x]
    }

    /// `x <= y`, i.e. `x ^ y = x`.
    #[inline]
    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        self.meet(x, y) == x
    }

    pub fn meet_table(&self) -> &Table {
        &self.meet
    }

    pub fn join_table(&self) -> &Table {
        &self.join
    }

    pub fn neg_table(&self) -> &[Elem] {
        &self.neg
    }

    pub fn residual(&self) -> Option<&Table> {
        self.residual.as_ref()
    }

    pub fn has_residual(&self) -> bool {
        self.residual.is_some()
    }

    /// Residual lookup. Panics when the algebra carries no residual table.
    #[inline]
    pub fn res(&self, x: Elem, y: Elem) -> Elem {
        self.residual.as_ref().expect("algebra has no residual table").get(x, y)
    }

    /// Attaches a residual table after checking condition (R) exhaustively.
    pub fn with_residual(mut self, res: Table) -> Result<Self, AlgebraError> {
        self.residual = Some(res);
        self.validate()?;
        Ok(self)
    }

    pub fn without_residual(mut self) -> Self {
        self.residual = None;
        self
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self, AlgebraError> {
        self.names = Some(names);
        self.validate()?;
        Ok(self)
    }

    pub fn without_names(mut self) -> Self {
        self.names = None;
        self
    }

    /// Display label of `x`: its name when names are present, its index otherwise.
    pub fn name(&self, x: Elem) -> Cow<'_, str> {
        match &self.names {
            Some(names) => Cow::Borrowed(names[x].as_str()),
            None => Cow::Owned(x.to_string()),
        }
    }

    /// Looks an element up by display label.
    pub fn element_named(&self, label: &str) -> Option<Elem> {
        match &self.names {
            Some(names) => names.iter().position(|n| n == label),
            None => label.parse().ok().filter(|&x| x < self.size()),
        }
    }

    /// Renames the carrier along `perm` (old index to new index). The
    /// permutation must fix `0` and `n - 1`.
    pub fn relabel(&self, perm: &[Elem]) -> FiniteAlgebra {
        let n = self.size();
        assert_eq!(perm.len(), n);
        assert!(perm[0] == 0 && perm[n - 1] == n - 1, "relabeling must fix the bounds");
        let mut neg = vec![0; n];
        for x in 0..n {
            neg[perm[x]] = perm[self.neg[x]];
        }
        let names = self.names.as_ref().map(|names| {
            let mut out = vec![String::new(); n];
            for x in 0..n {
                out[perm[x]] = names[x].clone();
            }
            out
        });
        FiniteAlgebra {
            meet: self.meet.relabel(perm),
            join: self.join.relabel(perm),
            neg,
            residual: self.residual.as_ref().map(|r| r.relabel(perm)),
            names,
        }
    }

    /// Up-set bitmasks of the order. Only defined for carriers of at most 64 elements.
    pub fn up_sets(&self) -> Vec<u64> {
        let n = self.size();
        assert!(n <= 64, "bitset view needs at most 64 elements");
        (0..n)
            .map(|x| (0..n).filter(|&y| self.leq(x, y)).fold(0u64, |acc, y| acc | 1 << y))
            .collect()
    }
}

/// Builds an algebra from a cover relation (pairs `(lower, upper)`) and a
/// negation table. The order is the reflexive-transitive closure of the covers.
pub fn build_from_cover(
    n: usize,
    covers: &[(Elem, Elem)],
    neg: &[Elem],
    names: Option<Vec<String>>,
) -> Result<FiniteAlgebra, AlgebraError> {
    if n == 0 {
        return Err(AlgebraError::Empty);
    }
    if neg.len() != n {
        return Err(AlgebraError::TableShape { table: "neg" });
    }
    for &(x, y) in covers {
        if x >= n || y >= n {
            return Err(AlgebraError::OutOfRange {
                table: "covers",
                value: x.max(y),
            });
        }
    }
    if let Some(&value) = neg.iter().find(|&&v| v >= n) {
        return Err(AlgebraError::OutOfRange { table: "neg", value });
    }
    let mut seen = vec![false; n];
    for &v in neg {
        if std::mem::replace(&mut seen[v], true) {
            return Err(AlgebraError::NegNotPermutation);
        }
    }

    let mut le = vec![vec![false; n]; n];
    for (x, row) in le.iter_mut().enumerate() {
        row[x] = true;
    }
    for &(x, y) in covers {
        le[x][y] = true;
    }
    for k in 0..n {
        let via = le[k].clone();
        for row in le.iter_mut() {
            if row[k] {
                for (cell, &reach) in row.iter_mut().zip(&via) {
                    *cell |= reach;
                }
            }
        }
    }
    if let Some((x, y)) = (0..n)
        .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
        .find(|&(x, y)| le[x][y] && le[y][x])
    {
        return Err(AlgebraError::Cyclic { x, y });
    }

    let bottom = (0..n).find(|&b| (0..n).all(|x| le[b][x]));
    let top = (0..n).find(|&t| (0..n).all(|x| le[x][t]));
    match (bottom, top) {
        (Some(0), Some(t)) if t == n - 1 => {}
        (Some(_), Some(_)) => return Err(AlgebraError::BoundsNotNormalized),
        _ => return Err(AlgebraError::MissingBounds),
    }

    let mut meet = vec![0; n * n];
    let mut join = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            let lower: Vec<Elem> = (0..n).filter(|&z| le[z][x] && le[z][y]).collect();
            let upper: Vec<Elem> = (0..n).filter(|&z| le[x][z] && le[y][z]).collect();
            let m = lower
                .iter()
                .copied()
                .find(|&m| lower.iter().all(|&z| le[z][m]))
                .ok_or(AlgebraError::NotALattice { x, y })?;
            let j = upper
                .iter()
                .copied()
                .find(|&j| upper.iter().all(|&z| le[j][z]))
                .ok_or(AlgebraError::NotALattice { x, y })?;
            meet[x * n + y] = m;
            join[x * n + y] = j;
        }
    }

    for x in 0..n {
        if neg[neg[x]] != x {
            return Err(AlgebraError::NegNotInvolution { x });
        }
    }
    for x in 0..n {
        for y in 0..n {
            if le[x][y] && !le[neg[y]][neg[x]] {
                return Err(AlgebraError::NegNotAntitone { x, y });
            }
        }
    }

    FiniteAlgebra::new(
        Table { n, data: meet },
        Table { n, data: join },
        neg.to_vec(),
        None,
        names,
    )
}

/// Convenience wrapper around [`build_from_cover`] taking element names.
/// `covers` lists `(lower, upper)` name pairs and `neg` lists `(x, neg x)` pairs.
pub fn build_named(
    names: &[&str],
    covers: &[(&str, &str)],
    neg: &[(&str, &str)],
) -> Result<FiniteAlgebra, AlgebraError> {
    let idx = |s: &str| {
        names
            .iter()
            .position(|&n| n == s)
            .ok_or_else(|| AlgebraError::BadName(s.to_string()))
    };
    let covers = covers
        .iter()
        .map(|&(a, b)| Ok((idx(a)?, idx(b)?)))
        .collect::<Result<Vec<_>, AlgebraError>>()?;
    let mut table = vec![usize::MAX; names.len()];
    for &(a, b) in neg {
        table[idx(a)?] = idx(b)?;
        table[idx(b)?] = idx(a)?;
    }
    if table.contains(&usize::MAX) {
        return Err(AlgebraError::NegNotPermutation);
    }
    build_from_cover(
        names.len(),
        &covers,
        &table,
        Some(names.iter().map(|s| s.to_string()).collect()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn two_element_boolean_algebra() {
        let a = build_from_cover(2, &[(0, 1)], &[1, 0], None).unwrap();
        assert_eq!(a.meet(0, 1), 0);
        assert_eq!(a.join(0, 1), 1);
        assert!(a.leq(0, 1));
        assert!(!a.leq(1, 0));
    }

    #[test]
    fn b6_order() {
        let b6 = fixtures::b6();
        let e = |s| b6.element_named(s).unwrap();
        assert!(b6.leq(e("nb"), e("a")));
        assert!(!b6.leq(e("a"), e("b")));
        for x in b6.elements() {
            assert!(b6.leq(0, x));
        }
    }

    #[test]
    fn self_negated_midpoint_is_accepted_as_involutive() {
        // the 3-chain with neg(m) = m is a valid bounded involutive lattice
        let a = build_from_cover(3, &[(0, 1), (1, 2)], &[2, 1, 0], None).unwrap();
        assert_eq!(a.meet(1, a.neg(1)), 1);
    }

    #[test]
    fn missing_join_is_reported() {
        // 0 < a, 0 < b, a < c, a < d, b < c, b < d, c < 1, d < 1: a,b have no join
        let err = build_from_cover(
            6,
            &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)],
            &[5, 4, 3, 2, 1, 0],
            None,
        )
        .unwrap_err();
        assert_eq!(err, AlgebraError::NotALattice { x: 1, y: 2 });
    }

    #[test]
    fn negation_errors() {
        let err = build_from_cover(3, &[(0, 1), (1, 2)], &[2, 0, 1], None).unwrap_err();
        assert_eq!(err, AlgebraError::NegNotInvolution { x: 0 });
        // identity negation on the 2-chain is an involution but not antitone
        let err = build_from_cover(2, &[(0, 1)], &[0, 1], None).unwrap_err();
        assert_eq!(err, AlgebraError::NegNotAntitone { x: 0, y: 1 });
        let err = build_from_cover(2, &[(0, 1)], &[0, 0], None).unwrap_err();
        assert_eq!(err, AlgebraError::NegNotPermutation);
    }

    #[test]
    fn bounds_and_cycles() {
        let err = build_from_cover(2, &[(1, 0)], &[1, 0], None).unwrap_err();
        assert_eq!(err, AlgebraError::BoundsNotNormalized);
        let err = build_from_cover(3, &[(0, 1), (1, 0), (1, 2)], &[2, 1, 0], None).unwrap_err();
        assert_eq!(err, AlgebraError::Cyclic { x: 0, y: 1 });
        let err = build_from_cover(3, &[(0, 2)], &[2, 1, 0], None).unwrap_err();
        assert_eq!(err, AlgebraError::MissingBounds);
    }

    #[test]
    fn residual_table_is_validated() {
        let a = build_from_cover(2, &[(0, 1)], &[1, 0], None).unwrap();
        // x\y = -x v y on the 2-element Boolean algebra
        let good = Table::from_vec(2, vec![1, 1, 0, 1]).unwrap();
        assert!(a.clone().with_residual(good).is_ok());
        let bad = Table::from_vec(2, vec![1, 1, 1, 1]).unwrap();
        assert!(matches!(a.with_residual(bad), Err(AlgebraError::ResidualViolation(_))));
    }

    #[test]
    fn relabel_roundtrip() {
        let b6 = fixtures::b6();
        let perm = [0, 2, 1, 4, 3, 5];
        let swapped = b6.relabel(&perm);
        assert_ne!(swapped.names(), b6.names());
        assert_eq!(swapped.relabel(&perm), b6);
    }

    #[test]
    fn up_sets_path_matches_cover_path() {
        let b6 = fixtures::b6().without_names();
        let rebuilt = FiniteAlgebra::from_up_sets(&b6.up_sets(), b6.neg_table().to_vec()).unwrap();
        assert_eq!(rebuilt, b6);
    }
}
