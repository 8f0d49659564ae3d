//! Class membership (involutive lattice, ortholattice, orthomodular lattice,
//! residuated ortholattice), the benzene subalgebra search and magma laws.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{Elem, FiniteAlgebra, Table, Witness};
use crate::fixtures;
use crate::ops::{compute_coresidual, compute_residual};

/// Membership flags. `is_bil` holds for every valid [`FiniteAlgebra`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct AlgebraClass {
    pub is_bil: bool,
    pub is_ol: bool,
    pub is_oml: bool,
    pub is_rol: bool,
}

impl AlgebraClass {
    pub fn contains(self, class: ClassName) -> bool {
        match class {
            ClassName::Bil => self.is_bil,
            ClassName::Ol => self.is_ol,
            ClassName::Oml => self.is_oml,
            ClassName::Rol => self.is_rol,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassName {
    Bil,
    Ol,
    Oml,
    Rol,
}

impl ClassName {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassName::Bil => "bil",
            ClassName::Ol => "ol",
            ClassName::Oml => "oml",
            ClassName::Rol => "rol",
        }
    }
}

impl fmt::Display for ClassName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bil" => Ok(ClassName::Bil),
            "ol" => Ok(ClassName::Ol),
            "oml" => Ok(ClassName::Oml),
            "rol" => Ok(ClassName::Rol),
            other => Err(format!("unknown class `{other}` (expected bil, ol, oml or rol)")),
        }
    }
}

/// First `x` with `x ^ -x != 0`.
pub fn ol_violation(a: &FiniteAlgebra) -> Option<Witness> {
    a.elements().find_map(|x| {
        let v = a.meet(x, a.neg(x));
        (v != a.bottom()).then(|| Witness::new("OL", vec![x], vec![v, a.bottom()]))
    })
}

/// First `(x, y)` with `x <= y` but `y != x v (y ^ -x)`.
pub fn oml_quasi_violation(a: &FiniteAlgebra) -> Option<Witness> {
    for x in a.elements() {
        for y in a.elements() {
            if a.leq(x, y) {
                let rhs = a.join(x, a.meet(y, a.neg(x)));
                if rhs != y {
                    return Some(Witness::new("OML-quasi", vec![x, y], vec![y, rhs]));
                }
            }
        }
    }
    None
}

/// First `(x, y)` with `y != (x ^ y) v (y ^ -(x ^ y))`.
pub fn oml_identity_violation(a: &FiniteAlgebra) -> Option<Witness> {
    for x in a.elements() {
        for y in a.elements() {
            let m = a.meet(x, y);
            let rhs = a.join(m, a.meet(y, a.neg(m)));
            if rhs != y {
                return Some(Witness::new("OML-identity", vec![x, y], vec![y, rhs]));
            }
        }
    }
    None
}

/// All embeddings of the benzene ortholattice as a `{^, v, -, 0, 1}`
/// subalgebra. Each embedding lists the images of `0, na, nb, a, b, 1` and the
/// list is sorted lexicographically.
pub fn b6_embeddings(a: &FiniteAlgebra) -> Vec<[Elem; 6]> {
    let b6 = fixtures::b6();
    let n = a.size();
    let mut out = Vec::new();
    if n < 6 {
        return out;
    }
    for na in 1..n - 1 {
        for nb in 1..n - 1 {
            let map = [0, na, nb, a.neg(na), a.neg(nb), n - 1];
            let distinct = (0..6).all(|i| (i + 1..6).all(|j| map[i] != map[j]));
            if !distinct {
                continue;
            }
            let preserves = (0..6).all(|i| {
                map[b6.neg(i)] == a.neg(map[i])
                    && (0..6).all(|j| {
                        map[b6.meet(i, j)] == a.meet(map[i], map[j]) && map[b6.join(i, j)] == a.join(map[i], map[j])
                    })
            });
            if preserves {
                out.push(map);
            }
        }
    }
    out
}

/// The lexicographically first benzene embedding, if any.
pub fn b6_subalgebra(a: &FiniteAlgebra) -> Option<[Elem; 6]> {
    b6_embeddings(a).into_iter().next()
}

/// Classifies `a`. Orthomodularity is decided three ways (quasiequation,
/// identity, absence of a benzene subalgebra); disagreement is reported as a
/// `CrossCheckFailed` witness.
pub fn classify(a: &FiniteAlgebra) -> Result<AlgebraClass, Witness> {
    let is_ol = ol_violation(a).is_none();
    let is_oml = if is_ol {
        let quasi = oml_quasi_violation(a).is_none();
        let identity = oml_identity_violation(a).is_none();
        let b6_free = b6_subalgebra(a).is_none();
        if quasi != identity || quasi != b6_free {
            return Err(Witness::new(
                "CrossCheckFailed",
                vec![],
                vec![quasi as usize, identity as usize, b6_free as usize],
            ));
        }
        quasi
    } else {
        false
    };
    let is_rol = compute_residual(a).is_ok();
    if is_rol && !is_ol {
        return Err(Witness::new("CrossCheckFailed", vec![], vec![1, 0]));
    }
    if is_oml && !is_rol {
        return Err(Witness::new("CrossCheckFailed", vec![], vec![0, 1]));
    }
    Ok(AlgebraClass {
        is_bil: true,
        is_ol,
        is_oml,
        is_rol,
    })
}

/// Why `a` is not in `class`, or `None` when it is.
pub fn class_witness(a: &FiniteAlgebra, class: ClassName) -> Option<Witness> {
    match class {
        ClassName::Bil => None,
        ClassName::Ol => ol_violation(a),
        ClassName::Oml => {
            ol_violation(a).or_else(|| b6_subalgebra(a).map(|emb| Witness::new("B6Subalgebra", emb.to_vec(), vec![])))
        }
        ClassName::Rol => compute_residual(a).err(),
    }
}

/// Checks `res iff cores`: the residual exists exactly when the co-residual
/// does (the conversion formulas are checked inside [`compute_coresidual`]).
pub fn residual_coresidual_agree(a: &FiniteAlgebra) -> Result<(), Witness> {
    let res = compute_residual(a).is_ok();
    match compute_coresidual(a) {
        Ok(_) if res => Ok(()),
        Err(w) if w.law == "CrossCheckFailed" => Err(w),
        Err(_) if !res => Ok(()),
        _ => Err(Witness::new("CrossCheckFailed", vec![], vec![res as usize])),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MagmaLaw {
    Idempotent,
    Commutative,
    Associative,
    LeftAlternative,
    RightAlternative,
    Flexible,
    PowerAssociative,
}

impl MagmaLaw {
    pub const ALL: [MagmaLaw; 7] = [
        MagmaLaw::Idempotent,
        MagmaLaw::Commutative,
        MagmaLaw::Associative,
        MagmaLaw::LeftAlternative,
        MagmaLaw::RightAlternative,
        MagmaLaw::Flexible,
        MagmaLaw::PowerAssociative,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MagmaLaw::Idempotent => "idempotent",
            MagmaLaw::Commutative => "commutative",
            MagmaLaw::Associative => "associative",
            MagmaLaw::LeftAlternative => "left_alternative",
            MagmaLaw::RightAlternative => "right_alternative",
            MagmaLaw::Flexible => "flexible",
            MagmaLaw::PowerAssociative => "power_associative",
        }
    }
}

/// Result of [`magma_properties`]: the first counterexample for each law that fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MagmaProperties {
    failures: Vec<(MagmaLaw, Witness)>,
}

impl MagmaProperties {
    pub fn holds(&self, law: MagmaLaw) -> bool {
        self.witness(law).is_none()
    }

    pub fn witness(&self, law: MagmaLaw) -> Option<&Witness> {
        self.failures.iter().find(|(l, _)| *l == law).map(|(_, w)| w)
    }

    pub fn idempotent(&self) -> bool {
        self.holds(MagmaLaw::Idempotent)
    }
    pub fn commutative(&self) -> bool {
        self.holds(MagmaLaw::Commutative)
    }
    pub fn associative(&self) -> bool {
        self.holds(MagmaLaw::Associative)
    }
    pub fn left_alternative(&self) -> bool {
        self.holds(MagmaLaw::LeftAlternative)
    }
    pub fn right_alternative(&self) -> bool {
        self.holds(MagmaLaw::RightAlternative)
    }
    pub fn flexible(&self) -> bool {
        self.holds(MagmaLaw::Flexible)
    }
    pub fn power_associative(&self) -> bool {
        self.holds(MagmaLaw::PowerAssociative)
    }
}

fn first_pair(n: usize, mut f: impl FnMut(Elem, Elem) -> Option<Vec<Elem>>) -> Option<(Vec<Elem>, Vec<Elem>)> {
    for x in 0..n {
        for y in 0..n {
            if let Some(v) = f(x, y) {
                return Some((vec![x, y], v));
            }
        }
    }
    None
}

fn differ(l: Elem, r: Elem) -> Option<Vec<Elem>> {
    (l != r).then(|| vec![l, r])
}

/// Decides the magma laws of a binary table by exhaustive scan.
pub fn magma_properties(op: &Table) -> MagmaProperties {
    let n = op.size();
    let f = |x, y| op.get(x, y);
    let mut failures = Vec::new();
    let mut record = |law: MagmaLaw, found: Option<(Vec<Elem>, Vec<Elem>)>| {
        if let Some((elements, values)) = found {
            failures.push((law, Witness::new(law.as_str(), elements, values)));
        }
    };

    record(
        MagmaLaw::Idempotent,
        (0..n).find_map(|x| differ(f(x, x), x).map(|v| (vec![x], v))),
    );
    record(MagmaLaw::Commutative, first_pair(n, |x, y| differ(f(x, y), f(y, x))));
    let mut assoc = None;
    'assoc: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if let Some(v) = differ(f(f(x, y), z), f(x, f(y, z))) {
                    assoc = Some((vec![x, y, z], v));
                    break 'assoc;
                }
            }
        }
    }
    record(MagmaLaw::Associative, assoc);
    record(
        MagmaLaw::LeftAlternative,
        first_pair(n, |x, y| differ(f(f(x, x), y), f(x, f(x, y)))),
    );
    record(
        MagmaLaw::RightAlternative,
        first_pair(n, |x, y| differ(f(y, f(x, x)), f(f(y, x), x))),
    );
    record(
        MagmaLaw::Flexible,
        first_pair(n, |x, y| differ(f(f(x, y), x), f(x, f(y, x)))),
    );

    let mut power = None;
    'power: for a in 0..n {
        let mut sub = vec![a];
        let mut i = 0;
        while i < sub.len() {
            let len = sub.len();
            for j in 0..len {
                for v in [f(sub[i], sub[j]), f(sub[j], sub[i])] {
                    if !sub.contains(&v) {
                        sub.push(v);
                    }
                }
            }
            i += 1;
        }
        sub.sort_unstable();
        for &x in &sub {
            for &y in &sub {
                for &z in &sub {
                    if let Some(v) = differ(f(f(x, y), z), f(x, f(y, z))) {
                        power = Some((vec![a, x, y, z], v));
                        break 'power;
                    }
                }
            }
        }
    }
    record(MagmaLaw::PowerAssociative, power);
    MagmaProperties { failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::sasaki_product;

    #[test]
    fn fixture_classes() {
        let c = classify(&fixtures::b6()).unwrap();
        assert!(c.is_ol && !c.is_oml && c.is_rol);
        let c = classify(&fixtures::nonflexible()).unwrap();
        assert!(c.is_ol && !c.is_oml && !c.is_rol);
        let c = classify(&fixtures::bool2()).unwrap();
        assert!(c.is_bil && c.is_ol && c.is_oml && c.is_rol);
        let c = classify(&fixtures::mo2()).unwrap();
        assert!(c.is_oml && c.is_rol);
        let c = classify(&fixtures::chain3()).unwrap();
        assert!(c.is_bil && !c.is_ol && !c.is_oml && !c.is_rol);
    }

    #[test]
    fn degenerate_algebra_is_everything() {
        let one = crate::algebra::build_from_cover(1, &[], &[0], None).unwrap();
        let c = classify(&one).unwrap();
        assert!(c.is_bil && c.is_ol && c.is_oml && c.is_rol);
    }

    #[test]
    fn b6_embeds_in_itself_identically() {
        assert_eq!(b6_subalgebra(&fixtures::b6()), Some([0, 1, 2, 3, 4, 5]));
        assert_eq!(b6_embeddings(&fixtures::b6()).len(), 2);
        assert_eq!(b6_subalgebra(&fixtures::mo2()), None);
    }

    #[test]
    fn nonflexible_benzene_copies() {
        let f = fixtures::nonflexible();
        let e = |s| f.element_named(s).unwrap();
        let sets: Vec<Vec<Elem>> = b6_embeddings(&f)
            .iter()
            .map(|m| {
                let mut s = m.to_vec();
                s.sort_unstable();
                s
            })
            .collect();
        let mut expected = vec![0, e("nz"), e("y"), e("ny"), e("z"), 7];
        expected.sort_unstable();
        assert!(sets.contains(&expected));
        let first = b6_subalgebra(&f).unwrap();
        let mut first_set = first.to_vec();
        first_set.sort_unstable();
        let mut other = vec![0, e("x"), e("nz"), e("nx"), e("z"), 7];
        other.sort_unstable();
        assert_eq!(first_set, other);
    }

    #[test]
    fn sasaki_product_magma_laws() {
        for a in [
            fixtures::b6(),
            fixtures::nonflexible(),
            fixtures::bool4(),
            fixtures::chain3(),
        ] {
            let p = magma_properties(&sasaki_product(&a));
            assert!(p.idempotent() && p.left_alternative() && p.right_alternative());
            assert!(p.power_associative());
        }
        let p = magma_properties(&sasaki_product(&fixtures::b6()));
        assert!(p.flexible());
        assert!(!p.commutative());
        let p = magma_properties(&sasaki_product(&fixtures::mo2()));
        assert!(!p.associative() && !p.commutative());
    }

    #[test]
    fn nonflexible_is_not_flexible() {
        let f = fixtures::nonflexible();
        let p = magma_properties(&sasaki_product(&f));
        let w = p.witness(MagmaLaw::Flexible).unwrap();
        let (x, y) = (f.element_named("x").unwrap(), f.element_named("y").unwrap());
        assert_eq!(w.elements, vec![x, y]);
        assert_eq!(w.values, vec![x, 0]);
    }

    #[test]
    fn class_witnesses() {
        let w = class_witness(&fixtures::b6(), ClassName::Oml).unwrap();
        assert_eq!(w.elements, vec![0, 1, 2, 3, 4, 5]);
        assert!(class_witness(&fixtures::b6(), ClassName::Rol).is_none());
        let w = class_witness(&fixtures::chain3(), ClassName::Ol).unwrap();
        assert_eq!(w.values, vec![1, 0]);
    }

    #[test]
    fn coresidual_agrees_on_fixtures() {
        for a in [
            fixtures::b6(),
            fixtures::nonflexible(),
            fixtures::bool2(),
            fixtures::mo2(),
            fixtures::chain3(),
        ] {
            residual_coresidual_agree(&a).unwrap();
        }
    }
}
