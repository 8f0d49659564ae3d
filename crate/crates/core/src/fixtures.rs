//! Small named algebras used throughout the tests and the CLI examples.

use crate::algebra::{build_named, FiniteAlgebra, Table};

/// The benzene ortholattice: chains `0 < nb < a < 1` and `0 < na < b < 1`.
/// Carrier order is `0, na, nb, a, b, 1`.
pub fn b6() -> FiniteAlgebra {
    build_named(
        &["0", "na", "nb", "a", "b", "1"],
        &[
            ("0", "nb"),
            ("nb", "a"),
            ("a", "1"),
            ("0", "na"),
            ("na", "b"),
            ("b", "1"),
        ],
        &[("0", "1"), ("na", "a"), ("nb", "b")],
    )
    .expect("B6 fixture is a valid ortholattice")
}

/// The residual table of [`b6`], written out by hand
/// (row `x`, column `z` holds `x \ z`; carrier order `0, na, nb, a, b, 1`).
pub fn b6_reference_residual() -> Table {
    const O: usize = 0;
    const NA: usize = 1;
    const NB: usize = 2;
    const A: usize = 3;
    const B: usize = 4;
    const I: usize = 5;
    #[rustfmt::skip]
    let rows = vec![
        I, I, I, I, I, I,
        A, I, A, A, I, I,
        B, B, I, I, B, I,
        B, B, B, I, B, I,
        A, A, A, A, I, I,
        O, NA, NB, A, B, I,
    ];
    Table::from_vec(6, rows).expect("6x6 table")
}

/// The 8-element ortholattice whose Sasaki product is not flexible.
/// Carrier order is `0, x, ny, nz, y, nx, z, 1`.
pub fn nonflexible() -> FiniteAlgebra {
    build_named(
        &["0", "x", "ny", "nz", "y", "nx", "z", "1"],
        &[
            ("0", "nz"),
            ("0", "ny"),
            ("0", "x"),
            ("nz", "y"),
            ("nz", "nx"),
            ("ny", "z"),
            ("x", "z"),
            ("y", "1"),
            ("nx", "1"),
            ("z", "1"),
        ],
        &[("0", "1"), ("x", "nx"), ("y", "ny"), ("z", "nz")],
    )
    .expect("non-flexible fixture is a valid ortholattice")
}

/// The 2-element Boolean algebra.
pub fn bool2() -> FiniteAlgebra {
    build_named(&["0", "1"], &[("0", "1")], &[("0", "1")]).expect("valid")
}

/// The 4-element Boolean algebra `{0, a, na, 1}`.
pub fn bool4() -> FiniteAlgebra {
    build_named(
        &["0", "a", "na", "1"],
        &[("0", "a"), ("0", "na"), ("a", "1"), ("na", "1")],
        &[("0", "1"), ("a", "na")],
    )
    .expect("valid")
}

/// `MO2`: the horizontal sum of two 4-element Boolean algebras.
pub fn mo2() -> FiniteAlgebra {
    build_named(
        &["0", "a", "na", "b", "nb", "1"],
        &[
            ("0", "a"),
            ("0", "na"),
            ("0", "b"),
            ("0", "nb"),
            ("a", "1"),
            ("na", "1"),
            ("b", "1"),
            ("nb", "1"),
        ],
        &[("0", "1"), ("a", "na"), ("b", "nb")],
    )
    .expect("valid")
}

/// The 3-chain `0 < m < 1` with `neg m = m`: involutive but not an ortholattice.
pub fn chain3() -> FiniteAlgebra {
    build_named(&["0", "m", "1"], &[("0", "m"), ("m", "1")], &[("0", "1"), ("m", "m")]).expect("valid")
}
