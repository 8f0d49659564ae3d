//! Enumeration of ortholattices, orthomodular lattices and residuated
//! ortholattices up to isomorphism, and the table of their counts.

pub mod canon;
pub mod iso;
pub mod lattice;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{Elem, FiniteAlgebra};
use crate::classify::{classify, ClassName};
use crate::ops::residuate;

pub use canon::{canonical_code, canonical_form, CanonicalCode, CanonicalForm};
pub use iso::are_isomorphic;
pub use lattice::{lattices_of_size, CanonicalLattice, Lattice};

/// Largest supported size.
pub const HARD_CAP: usize = 12;

/// Bumped whenever catalog contents or order could change.
pub const GENERATOR_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("size {n} exceeds the enumeration cap {cap}")]
    SizeBound { n: usize, cap: usize },
}

fn check_cap(n: usize, cap: usize) -> Result<(), EnumError> {
    if n > cap.min(HARD_CAP) {
        Err(EnumError::SizeBound {
            n,
            cap: cap.min(HARD_CAP),
        })
    } else {
        Ok(())
    }
}

/// All bounded lattices with `n` elements up to isomorphism.
pub fn enumerate_lattices(n: usize) -> Result<Vec<Lattice>, EnumError> {
    check_cap(n, HARD_CAP)?;
    Ok(lattices_of_size(n, &|_| true).into_iter().map(|c| c.lattice).collect())
}

/// Every antitone involution of `l`; with `ortho` only those satisfying
/// `x ^ -x = 0`. Each involution is listed once per labeled solution.
pub fn involutions(l: &Lattice, ortho: bool) -> Vec<Vec<Elem>> {
    let n = l.size();
    let (h, d) = l.height_profile();
    let meet = l.meet_table();
    let join = l.join_table();
    let mut neg = vec![usize::MAX; n];
    let mut out = Vec::new();
    involution_search(l, ortho, &h, &d, &meet, &join, &mut neg, 0, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn involution_search(
    l: &Lattice,
    ortho: bool,
    h: &[usize],
    d: &[usize],
    meet: &[usize],
    join: &[usize],
    neg: &mut Vec<Elem>,
    from: usize,
    out: &mut Vec<Vec<Elem>>,
) {
    let n = l.size();
    let Some(x) = (from..n).find(|&x| neg[x] == usize::MAX) else {
        out.push(neg.clone());
        return;
    };
    for y in 0..n {
        if neg[y] != usize::MAX || h[y] != d[x] {
            continue;
        }
        if ortho && (meet[x * n + y] != 0 || join[x * n + y] != n - 1) {
            continue;
        }
        let fits = |u: usize, nu: usize| {
            (!l.leq(x, u) || l.leq(nu, y))
                && (!l.leq(u, x) || l.leq(y, nu))
                && (!l.leq(y, u) || l.leq(nu, x))
                && (!l.leq(u, y) || l.leq(x, nu))
        };
        if !(0..n).all(|u| neg[u] == usize::MAX || fits(u, neg[u])) {
            continue;
        }
        neg[x] = y;
        neg[y] = x;
        involution_search(l, ortho, h, d, meet, join, neg, x + 1, out);
        neg[x] = usize::MAX;
        neg[y] = usize::MAX;
    }
}

/// The involutive lattices over `l` (ortholattices when `ortho`) up to
/// isomorphism, canonically labeled and sorted by code.
pub fn attach_involutions(l: &Lattice, ortho: bool) -> Vec<(CanonicalCode, FiniteAlgebra)> {
    let mut found: Vec<(CanonicalCode, FiniteAlgebra)> = Vec::new();
    for neg in involutions(l, ortho) {
        let form = canonical_form(l.up_sets(), Some(&neg), None);
        if found.iter().any(|(c, _)| *c == form.code) {
            continue;
        }
        let up = form.relabel_up(l.up_sets());
        let neg = form.relabel_neg(&neg);
        let alg = FiniteAlgebra::from_up_sets(&up, neg).expect("lattice with antitone involution");
        found.push((form.code, alg));
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    found
}

/// The ortholattices over `l` up to isomorphism.
pub fn attach_orthocomplements(l: &Lattice) -> Vec<FiniteAlgebra> {
    attach_involutions(l, true).into_iter().map(|(_, a)| a).collect()
}

/// Complete list of representatives of one class at one size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    pub class: ClassName,
    pub size: usize,
    pub algebras: Vec<FiniteAlgebra>,
    pub codes: Vec<CanonicalCode>,
    pub generator_version: u32,
}

impl Catalog {
    pub fn len(&self) -> usize {
        self.algebras.len()
    }

    pub fn is_empty(&self) -> bool {
        self.algebras.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumOptions {
    /// Largest admissible size (never above [`HARD_CAP`]).
    pub cap: usize,
    /// Return odd sizes of ortho classes as empty without generating: a
    /// fixed point `x = -x` would give `x = x ^ -x = 0`.
    pub short_circuit_odd: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            cap: HARD_CAP,
            short_circuit_odd: true,
        }
    }
}

fn keeps(class: ClassName, c: crate::classify::AlgebraClass) -> bool {
    match class {
        ClassName::Bil => true,
        ClassName::Ol => c.is_ol,
        ClassName::Oml => c.is_oml,
        ClassName::Rol => c.is_rol,
    }
}

fn members_over(lattices: &[CanonicalLattice], class: ClassName) -> Vec<(CanonicalCode, FiniteAlgebra)> {
    let ortho = class != ClassName::Bil;
    let mut out: Vec<(CanonicalCode, FiniteAlgebra)> = lattices
        .par_iter()
        .flat_map_iter(|l| attach_involutions(&l.lattice, ortho))
        .filter_map(|(code, a)| {
            let c = classify(&a).expect("classification cross-checks agree");
            if !keeps(class, c) {
                return None;
            }
            let a = if matches!(class, ClassName::Oml | ClassName::Rol) {
                residuate(&a).expect("member is residuated")
            } else {
                a
            };
            Some((code, a))
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn catalog_from(class: ClassName, size: usize, members: Vec<(CanonicalCode, FiniteAlgebra)>) -> Catalog {
    let (codes, algebras) = members.into_iter().unzip();
    Catalog {
        class,
        size,
        algebras,
        codes,
        generator_version: GENERATOR_VERSION,
    }
}

/// Every algebra of `class` with `n` elements, up to isomorphism, in code
/// order. The one-element algebra is never listed.
pub fn enumerate_class(n: usize, class: ClassName) -> Result<Catalog, EnumError> {
    enumerate_class_with(n, class, EnumOptions::default())
}

pub fn enumerate_class_with(n: usize, class: ClassName, opts: EnumOptions) -> Result<Catalog, EnumError> {
    check_cap(n, opts.cap)?;
    let empty = n < 2 || (opts.short_circuit_odd && class != ClassName::Bil && n % 2 == 1);
    if empty {
        return Ok(catalog_from(class, n, Vec::new()));
    }
    let lattices = lattices_of_size(n, &|l: &Lattice| l.may_be_self_dual());
    Ok(catalog_from(class, n, members_over(&lattices, class)))
}

/// Catalogs of `class` for every size in `2..=max_n`.
pub fn enumerate_range(max_n: usize, class: ClassName) -> Result<Vec<Catalog>, EnumError> {
    check_cap(max_n, HARD_CAP)?;
    let mut out = Vec::new();
    for_each_level(
        max_n,
        |n, lattices| {
            out.push(catalog_from(class, n, members_over(lattices, class)));
        },
        class == ClassName::Bil,
    );
    Ok(out)
}

/// Runs `visit` on the self-dual candidates of each size `2..=max_n`
/// (even sizes only unless `odd`), sharing the lattice generation.
fn for_each_level(max_n: usize, mut visit: impl FnMut(usize, &[CanonicalLattice]), odd: bool) {
    if max_n < 2 {
        return;
    }
    let mut level = vec![lattice::base_lattice(2).expect("base")];
    let wanted = |n: usize| odd || n.is_multiple_of(2);
    for n in 2..=max_n {
        if n > 2 {
            level = if n == max_n {
                lattice::next_level(&level, &|l: &Lattice| l.may_be_self_dual())
            } else {
                lattice::next_level(&level, &|_| true)
            };
        }
        if wanted(n) {
            let dual: Vec<CanonicalLattice> = level.iter().filter(|l| l.lattice.may_be_self_dual()).cloned().collect();
            visit(n, &dual);
        } else {
            visit(n, &[]);
        }
    }
}

/// One row of the count table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountRow {
    pub n: usize,
    pub omls: usize,
    pub rols: usize,
}

/// Numbers of orthomodular and residuated ortholattices for `n = 2..=max_n`.
pub fn count_table(max_n: usize) -> Result<Vec<CountRow>, EnumError> {
    count_table_with(max_n, HARD_CAP)
}

pub fn count_table_with(max_n: usize, cap: usize) -> Result<Vec<CountRow>, EnumError> {
    check_cap(max_n, cap)?;
    let mut rows = Vec::new();
    for_each_level(
        max_n,
        |n, lattices| {
            let classes: Vec<_> = lattices
                .par_iter()
                .flat_map_iter(|l| attach_involutions(&l.lattice, true))
                .map(|(_, a)| classify(&a).expect("classification cross-checks agree"))
                .collect();
            rows.push(CountRow {
                n,
                omls: classes.iter().filter(|c| c.is_oml).count(),
                rols: classes.iter().filter(|c| c.is_rol).count(),
            });
        },
        false,
    );
    Ok(rows)
}

/// `n<TAB>omls<TAB>rols` lines.
pub fn format_counts(rows: &[CountRow]) -> String {
    rows.iter()
        .map(|r| format!("{}\t{}\t{}\n", r.n, r.omls, r.rols))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice(up: &[u64]) -> Lattice {
        Lattice::from_up_sets(up.to_vec()).unwrap()
    }

    #[test]
    fn orthocomplements_of_small_lattices() {
        assert_eq!(attach_orthocomplements(&lattice(&[0b11, 0b10])).len(), 1);
        // 3- and 4-chains
        assert!(attach_orthocomplements(&lattice(&[0b111, 0b110, 0b100])).is_empty());
        assert!(attach_orthocomplements(&lattice(&[0b1111, 0b1110, 0b1100, 0b1000])).is_empty());
        // the hexagon: 0 < 1 < 3 < 5, 0 < 2 < 4 < 5
        let hexagon = lattice(&[0b111111, 0b101010, 0b110100, 0b101000, 0b110000, 0b100000]);
        let ols = attach_orthocomplements(&hexagon);
        assert_eq!(ols.len(), 1);
        assert!(are_isomorphic(&ols[0], &crate::fixtures::b6()).is_some());
        assert_eq!(involutions(&hexagon, true).len(), 1);
        assert_eq!(involutions(&hexagon, false).len(), 2);
    }

    #[test]
    fn chains_carry_one_involution() {
        let chain3 = lattice(&[0b111, 0b110, 0b100]);
        assert_eq!(involutions(&chain3, false).len(), 1);
        assert!(involutions(&chain3, true).is_empty());
    }

    #[test]
    fn size_six_catalogs() {
        let rol = enumerate_class(6, ClassName::Rol).unwrap();
        assert_eq!(rol.len(), 2);
        assert!(rol.algebras.iter().all(FiniteAlgebra::has_residual));
        assert!(rol
            .algebras
            .iter()
            .any(|a| are_isomorphic(a, &crate::fixtures::b6()).is_some()));
        assert!(rol
            .algebras
            .iter()
            .any(|a| are_isomorphic(a, &crate::fixtures::mo2()).is_some()));
        assert_eq!(enumerate_class(6, ClassName::Oml).unwrap().len(), 1);
        assert_eq!(enumerate_class(7, ClassName::Ol).unwrap().len(), 0);
        assert_eq!(enumerate_class(1, ClassName::Ol).unwrap().len(), 0);
    }

    #[test]
    fn counts_to_eight() {
        let rows = count_table(8).unwrap();
        let omls: Vec<usize> = rows.iter().map(|r| r.omls).collect();
        let rols: Vec<usize> = rows.iter().map(|r| r.rols).collect();
        assert_eq!(omls, [1, 0, 1, 0, 1, 0, 2]);
        assert_eq!(rols, [1, 0, 1, 0, 2, 0, 4]);
        assert_eq!(format_counts(&rows[..2]), "2\t1\t1\n3\t0\t0\n");
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            enumerate_class(13, ClassName::Ol),
            Err(EnumError::SizeBound { n: 13, cap: 12 })
        );
        let opts = EnumOptions {
            cap: 10,
            ..Default::default()
        };
        assert!(enumerate_class_with(11, ClassName::Ol, opts).is_err());
    }
}
