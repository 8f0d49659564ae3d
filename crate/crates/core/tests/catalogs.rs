use rolkit::classify::{b6_subalgebra, classify, ClassName};
use rolkit::enumerate::{are_isomorphic, canonical_code, enumerate_class, enumerate_range};
use rolkit::format::{parse_catalog, write_catalog};
use rolkit::ops::compute_residual;

fn catalog_text(max_n: usize, class: ClassName) -> String {
    enumerate_range(max_n, class)
        .unwrap()
        .iter()
        .map(|c| write_catalog(c.class, c.size, &c.algebras))
        .collect()
}

#[test]
fn members_are_pairwise_non_isomorphic() {
    for n in [2, 4, 6, 8, 10] {
        let cat = enumerate_class(n, ClassName::Ol).unwrap();
        for (i, a) in cat.algebras.iter().enumerate() {
            for b in &cat.algebras[..i] {
                assert!(are_isomorphic(a, b).is_none(), "n = {n}");
            }
        }
        let mut codes = cat.codes.clone();
        codes.sort();
        codes.dedup();
        assert_eq!(codes.len(), cat.len());
    }
}

#[test]
fn members_belong_to_their_class() {
    for class in [ClassName::Ol, ClassName::Oml, ClassName::Rol] {
        for cat in enumerate_range(10, class).unwrap() {
            for a in &cat.algebras {
                assert_eq!(a.size(), cat.size);
                assert!(classify(a).unwrap().contains(class), "{class} n = {}", cat.size);
                if class != ClassName::Ol {
                    assert_eq!(a.residual(), Some(&compute_residual(a).unwrap()));
                }
            }
        }
    }
}

#[test]
fn class_inclusions() {
    for n in [2, 4, 6, 8, 10] {
        let ol = enumerate_class(n, ClassName::Ol).unwrap();
        let oml = enumerate_class(n, ClassName::Oml).unwrap();
        let rol = enumerate_class(n, ClassName::Rol).unwrap();
        assert!(oml.codes.iter().all(|c| rol.codes.contains(c)));
        assert!(rol.codes.iter().all(|c| ol.codes.contains(c)));
        let non_oml_ol = ol.algebras.iter().filter(|a| b6_subalgebra(a).is_some()).count();
        assert_eq!(ol.len() - oml.len(), non_oml_ol);
    }
}

#[test]
fn codes_match_members() {
    let cat = enumerate_class(8, ClassName::Ol).unwrap();
    for (a, code) in cat.algebras.iter().zip(&cat.codes) {
        assert_eq!(&canonical_code(&a.up_sets(), Some(a.neg_table())), code);
    }
}

#[test]
fn catalog_files_round_trip() {
    for cat in enumerate_range(8, ClassName::Rol).unwrap() {
        let text = write_catalog(cat.class, cat.size, &cat.algebras);
        let back = parse_catalog(&text).unwrap();
        assert_eq!(back.class, ClassName::Rol);
        assert_eq!(back.size, cat.size);
        assert_eq!(back.algebras, cat.algebras);
    }
}

#[test]
fn output_is_independent_of_thread_count() {
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                [ClassName::Ol, ClassName::Oml, ClassName::Rol]
                    .into_iter()
                    .map(|c| catalog_text(10, c))
                    .collect::<Vec<_>>()
            })
    };
    let single = run(1);
    assert_eq!(single, run(4));
    assert_eq!(single, run(3));
}
