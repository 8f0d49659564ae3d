use std::sync::OnceLock;

use proptest::prelude::*;

use rolkit::classify::ClassName;
use rolkit::congruence::{generated_congruence, is_congruence, Signature};
use rolkit::consequence::gamma_holds;
use rolkit::enumerate::{are_isomorphic, canonical_code, enumerate_range};
use rolkit::ops::{bar_image, sasaki_product};
use rolkit::term::{evaluate_unchecked, parse_with, translate, Term, Vars};
use rolkit::FiniteAlgebra;

fn term(vars: usize) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(Term::Zero), Just(Term::One), (0..vars).prop_map(Term::var),];
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Term::neg),
            (inner.clone(), inner.clone()).prop_map(|(s, t)| Term::meet(s, t)),
            (inner.clone(), inner.clone()).prop_map(|(s, t)| Term::join(s, t)),
            (inner.clone(), inner.clone()).prop_map(|(s, t)| Term::res(s, t)),
            inner.clone().prop_map(Term::tilde),
            inner.clone().prop_map(Term::bar),
            (inner.clone(), inner.clone()).prop_map(|(s, t)| Term::product(s, t)),
            (inner.clone(), inner).prop_map(|(s, t)| Term::hook(s, t)),
        ]
    })
}

fn members(class: ClassName) -> Vec<FiniteAlgebra> {
    enumerate_range(8, class)
        .unwrap()
        .into_iter()
        .flat_map(|c| c.algebras)
        .collect()
}

fn rols() -> &'static [FiniteAlgebra] {
    static CELL: OnceLock<Vec<FiniteAlgebra>> = OnceLock::new();
    CELL.get_or_init(|| members(ClassName::Rol))
}

fn ols() -> &'static [FiniteAlgebra] {
    static CELL: OnceLock<Vec<FiniteAlgebra>> = OnceLock::new();
    CELL.get_or_init(|| members(ClassName::Ol))
}

/// A permutation of `0..n` fixing both ends.
fn inner_permutation(n: usize, keys: &[u32]) -> Vec<usize> {
    let mut mid: Vec<usize> = (1..n - 1).collect();
    mid.sort_by_key(|&x| keys[x % keys.len()]);
    let mut perm = vec![0; n];
    perm[n - 1] = n - 1;
    for (new, &old) in (1..n - 1).zip(&mid) {
        perm[old] = new;
    }
    perm
}

proptest! {
    #[test]
    fn display_parses_back(t in term(3)) {
        let vars = Vars::numbered(3);
        let mut fresh = Vars::numbered(3);
        prop_assert_eq!(parse_with(&t.display(&vars).to_string(), &mut fresh).unwrap(), t.clone());
        let mut fresh = Vars::numbered(3);
        prop_assert_eq!(parse_with(&t.pretty(&vars).to_string(), &mut fresh).unwrap(), t);
    }

    #[test]
    fn canonical_code_ignores_labels(idx in 0usize..1000, keys in prop::collection::vec(any::<u32>(), 1..12)) {
        let all = ols();
        let a = &all[idx % all.len()];
        let perm = inner_permutation(a.size(), &keys);
        let b = a.relabel(&perm);
        prop_assert_eq!(
            canonical_code(&a.up_sets(), Some(a.neg_table())),
            canonical_code(&b.up_sets(), Some(b.neg_table()))
        );
        let f = are_isomorphic(a, &b).unwrap();
        for x in a.elements() {
            prop_assert_eq!(f[a.neg(x)], b.neg(f[x]));
        }
    }

    #[test]
    fn translated_terms_agree_with_the_bar_image(
        t in term(2),
        idx in 0usize..1000,
        x in 0usize..64,
        y in 0usize..64,
    ) {
        let all = rols();
        let a = &all[idx % all.len()];
        let image = bar_image(a).unwrap();
        let env = [x % a.size(), y % a.size()];
        prop_assert!(gamma_holds(&t, a, &image, &env));
        let lhs = evaluate_unchecked(&translate(&t), a, &env);
        prop_assert_eq!(image.hom[lhs], lhs_index(&image.carrier, lhs));
    }

    #[test]
    fn residual_is_adjoint_to_the_product(idx in 0usize..1000, x in 0usize..64, y in 0usize..64, z in 0usize..64) {
        let all = rols();
        let a = &all[idx % all.len()];
        let n = a.size();
        let (x, y, z) = (x % n, y % n, z % n);
        let prod = sasaki_product(a);
        prop_assert_eq!(a.leq(prod.get(x, y), z), a.leq(y, a.res(x, z)));
    }

    #[test]
    fn generated_relations_are_congruences(idx in 0usize..1000, x in 0usize..64, y in 0usize..64) {
        let all = rols();
        let a = &all[idx % all.len()];
        let n = a.size();
        let (x, y) = (x % n, y % n);
        for sig in [Signature::Ol, Signature::Rol] {
            let theta = generated_congruence(a, &[(x, y)], sig).unwrap();
            prop_assert!(theta.related(x, y));
            prop_assert!(is_congruence(a, &theta).is_ok());
        }
    }
}

fn lhs_index(carrier: &[usize], x: usize) -> usize {
    carrier
        .iter()
        .position(|&c| c == x)
        .expect("value lies in the bar image")
}
