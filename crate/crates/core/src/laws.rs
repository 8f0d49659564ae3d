//! Property suites: identities and quasi-identities of the Sasaki product,
//! the residual and the operations derived from it, checked by exhaustive
//! scans over a finite algebra.
//!
//! Every law reports the first violation in lexicographic order of its
//! arguments. Laws of the residuated group are skipped when the algebra is
//! not residuated.

use std::fmt;

use crate::algebra::{Elem, FiniteAlgebra, Table, Witness};
use crate::classify::{class_witness, magma_properties, ClassName};
use crate::ops::{
    bar_image, compute_coresidual, compute_residual, derived_ops, sasaki_hook, sasaki_product, DerivedOps,
};

/// Largest carrier for which the subset laws range over every subset.
pub const ALL_SUBSETS_MAX: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    SasakiProduct,
    WeakAssociativity,
    Residual,
    Tilde,
    Bar,
    BarImage,
    Orthomodularity,
}

impl Group {
    pub fn as_str(self) -> &'static str {
        match self {
            Group::SasakiProduct => "sasaki-product",
            Group::WeakAssociativity => "weak-associativity",
            Group::Residual => "residual",
            Group::Tilde => "tilde",
            Group::Bar => "bar",
            Group::BarImage => "bar-image",
            Group::Orthomodularity => "orthomodularity",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Evaluation context: the algebra with its derived tables.
pub struct Ctx<'a> {
    pub a: &'a FiniteAlgebra,
    pub prod: Table,
    pub hook: Table,
    /// Present iff the algebra is residuated.
    pub res: Option<Table>,
    pub derived: Option<DerivedOps>,
}

impl<'a> Ctx<'a> {
    /// Uses the attached residual, or computes one if the algebra has none.
    pub fn new(a: &'a FiniteAlgebra) -> Self {
        let res = match a.residual() {
            Some(r) => Some(r.clone()),
            None => compute_residual(a).ok(),
        };
        let derived = res.as_ref().map(|r| {
            let with = a
                .clone()
                .with_residual(r.clone())
                .expect("computed residual satisfies adjunction");
            derived_ops(&with).expect("residual present")
        });
        Ctx {
            a,
            prod: sasaki_product(a),
            hook: sasaki_hook(a),
            res,
            derived,
        }
    }

    pub fn is_residuated(&self) -> bool {
        self.res.is_some()
    }

    fn p(&self, x: Elem, y: Elem) -> Elem {
        self.prod.get(x, y)
    }

    fn h(&self, x: Elem, y: Elem) -> Elem {
        self.hook.get(x, y)
    }

    fn r(&self, x: Elem, y: Elem) -> Elem {
        self.res.as_ref().expect("residuated law").get(x, y)
    }

    fn d(&self) -> &DerivedOps {
        self.derived.as_ref().expect("residuated law")
    }

    fn t(&self, x: Elem) -> Elem {
        self.d().tilde[x]
    }

    fn b(&self, x: Elem) -> Elem {
        self.d().bar[x]
    }

    fn star(&self, x: Elem, y: Elem) -> Elem {
        self.d().star.get(x, y)
    }

    fn runder(&self, x: Elem, y: Elem) -> Elem {
        self.d().runder.get(x, y)
    }
}

type PointCheck = fn(&Ctx, &[Elem]) -> Option<Vec<Elem>>;
type SubsetCheck = fn(&Ctx, Elem, &[Elem]) -> Option<Vec<Elem>>;
type GlobalCheck = fn(&Ctx) -> Option<Witness>;

#[derive(Clone, Copy)]
enum Kind {
    /// Scanned over all `arity`-tuples.
    Point { arity: usize, check: PointCheck },
    /// Scanned over all `x` and the subsets `S` of the subset policy.
    Subset(SubsetCheck),
    /// Whole-algebra statement.
    Global(GlobalCheck),
}

#[derive(Clone, Copy)]
pub struct Law {
    pub id: &'static str,
    pub group: Group,
    pub statement: &'static str,
    /// Only meaningful on residuated algebras.
    pub residuated: bool,
    kind: Kind,
}

impl fmt::Debug for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Law").field("id", &self.id).finish()
    }
}

fn fail_if(bad: bool, values: impl FnOnce() -> Vec<Elem>) -> Option<Vec<Elem>> {
    bad.then(values)
}

const fn point(
    id: &'static str,
    group: Group,
    statement: &'static str,
    residuated: bool,
    arity: usize,
    check: PointCheck,
) -> Law {
    Law {
        id,
        group,
        statement,
        residuated,
        kind: Kind::Point { arity, check },
    }
}

fn bool_elem(b: bool) -> Elem {
    usize::from(b)
}

fn equivalence(id: &str, lhs: bool, rhs: bool) -> Option<Witness> {
    (lhs != rhs).then(|| Witness::new(id, vec![], vec![bool_elem(lhs), bool_elem(rhs)]))
}

fn is_oml(c: &Ctx) -> bool {
    class_witness(c.a, ClassName::Oml).is_none()
}

fn all_pairs(c: &Ctx, f: impl Fn(Elem, Elem) -> bool) -> bool {
    c.a.elements().all(|x| c.a.elements().all(|y| f(x, y)))
}

/// Laws of bounded involutive lattices.
pub const INVOLUTIVE_LAWS: &[Law] = &[
    point(
        "sasaki/right-monotone",
        Group::SasakiProduct,
        "y <= z => x.y <= x.z",
        false,
        3,
        |c, v| {
            let (x, y, z) = (v[0], v[1], v[2]);
            fail_if(c.a.leq(y, z) && !c.a.leq(c.p(x, y), c.p(x, z)), || {
                vec![c.p(x, y), c.p(x, z)]
            })
        },
    ),
    point(
        "hook/right-monotone",
        Group::SasakiProduct,
        "y <= z => x -> y <= x -> z",
        false,
        3,
        |c, v| {
            let (x, y, z) = (v[0], v[1], v[2]);
            fail_if(c.a.leq(y, z) && !c.a.leq(c.h(x, y), c.h(x, z)), || {
                vec![c.h(x, y), c.h(x, z)]
            })
        },
    ),
    point(
        "sasaki/bounds",
        Group::SasakiProduct,
        "x ^ y <= x.y <= x",
        false,
        2,
        |c, v| {
            let (x, y) = (v[0], v[1]);
            let p = c.p(x, y);
            fail_if(!c.a.leq(c.a.meet(x, y), p) || !c.a.leq(p, x), || {
                vec![c.a.meet(x, y), p, x]
            })
        },
    ),
    point(
        "sasaki/idempotent",
        Group::SasakiProduct,
        "x.x = x",
        false,
        1,
        |c, v| fail_if(c.p(v[0], v[0]) != v[0], || vec![c.p(v[0], v[0])]),
    ),
    point(
        "sasaki/unit",
        Group::SasakiProduct,
        "x.1 = 1.x = x",
        false,
        1,
        |c, v| {
            let (x, t) = (v[0], c.a.top());
            fail_if(c.p(x, t) != x || c.p(t, x) != x, || vec![c.p(x, t), c.p(t, x)])
        },
    ),
    point(
        "sasaki/zero",
        Group::SasakiProduct,
        "0.x = 0 and x.0 = x ^ -x",
        false,
        1,
        |c, v| {
            let x = v[0];
            let (l, r) = (c.p(0, x), c.p(x, 0));
            fail_if(l != 0 || r != c.a.meet(x, c.a.neg(x)), || vec![l, r])
        },
    ),
    point("hook/zero", Group::SasakiProduct, "x -> 0 = -x", false, 1, |c, v| {
        fail_if(c.h(v[0], 0) != c.a.neg(v[0]), || vec![c.h(v[0], 0), c.a.neg(v[0])])
    }),
    point(
        "sasaki/complement",
        Group::SasakiProduct,
        "x.-x = -x.x = x ^ -x",
        false,
        1,
        |c, v| {
            let (x, nx) = (v[0], c.a.neg(v[0]));
            let m = c.a.meet(x, nx);
            fail_if(c.p(x, nx) != m || c.p(nx, x) != m, || vec![c.p(x, nx), c.p(nx, x), m])
        },
    ),
    point(
        "sasaki/swap",
        Group::SasakiProduct,
        "x.y = (-x v y).x",
        false,
        2,
        |c, v| {
            let (x, y) = (v[0], v[1]);
            let r = c.p(c.a.join(c.a.neg(x), y), x);
            fail_if(c.p(x, y) != r, || vec![c.p(x, y), r])
        },
    ),
    point(
        "sasaki/left-alternative",
        Group::WeakAssociativity,
        "(x.x).y = x.(x.y)",
        false,
        2,
        |c, v| {
            let (x, y) = (v[0], v[1]);
            let (l, r) = (c.p(c.p(x, x), y), c.p(x, c.p(x, y)));
            fail_if(l != r, || vec![l, r])
        },
    ),
    point(
        "sasaki/right-alternative",
        Group::WeakAssociativity,
        "y.(x.x) = (y.x).x",
        false,
        2,
        |c, v| {
            let (x, y) = (v[0], v[1]);
            let (l, r) = (c.p(y, c.p(x, x)), c.p(c.p(y, x), x));
            fail_if(l != r, || vec![l, r])
        },
    ),
    Law {
        id: "sasaki/power-associative",
        group: Group::WeakAssociativity,
        statement: "the product is associative on every 1-generated submagma",
        residuated: false,
        kind: Kind::Global(|c| {
            magma_properties(&c.prod)
                .witness(crate::classify::MagmaLaw::PowerAssociative)
                .cloned()
        }),
    },
    point(
        "sasaki/left-absorb",
        Group::WeakAssociativity,
        "(x.y).x = x.y",
        false,
        2,
        |c, v| {
            let (x, y) = (v[0], v[1]);
            let l = c.p(c.p(x, y), x);
            fail_if(l != c.p(x, y), || vec![l, c.p(x, y)])
        },
    ),
    point(
        "sasaki/weak-flexible",
        Group::WeakAssociativity,
        "x.(y.x) <= (x.y).x",
        false,
        2,
        |c, v| {
            let (x, y) = (v[0], v[1]);
            let (l, r) = (c.p(x, c.p(y, x)), c.p(c.p(x, y), x));
            fail_if(!c.a.leq(l, r), || vec![l, r])
        },
    ),
    // stated for every involutive lattice so that non-flexible ones are reported
    point(
        "sasaki/flexible",
        Group::WeakAssociativity,
        "(x.y).x = x.(y.x)",
        false,
        2,
        |c, v| {
            let (x, y) = (v[0], v[1]);
            let (l, r) = (c.p(c.p(x, y), x), c.p(x, c.p(y, x)));
            fail_if(l != r, || vec![l, r])
        },
    ),
    Law {
        id: "orthomodularity/product-law",
        group: Group::Orthomodularity,
        statement: "orthomodular iff (x <= y => y.x = x)",
        residuated: false,
        kind: Kind::Global(|c| {
            let holds = all_pairs(c, |x, y| !c.a.leq(x, y) || c.p(y, x) == x);
            equivalence("orthomodularity/product-law", is_oml(c), holds)
        }),
    },
    Law {
        id: "orthomodularity/hook-adjoint",
        group: Group::Orthomodularity,
        statement: "orthomodular iff x.(x -> y) <= y",
        residuated: false,
        kind: Kind::Global(|c| {
            let holds = all_pairs(c, |x, y| c.a.leq(c.p(x, c.h(x, y)), y));
            equivalence("orthomodularity/hook-adjoint", is_oml(c), holds)
        }),
    },
    Law {
        id: "residual/iff-coresidual",
        group: Group::Residual,
        statement: "the product is residuated iff the hook has a co-residual",
        residuated: false,
        kind: Kind::Global(|c| {
            equivalence(
                "residual/iff-coresidual",
                compute_residual(c.a).is_ok(),
                compute_coresidual(c.a).is_ok(),
            )
        }),
    },
    Law {
        id: "residual/implies-ortholattice",
        group: Group::Residual,
        statement: "a residuated involutive lattice satisfies x ^ -x = 0",
        residuated: false,
        kind: Kind::Global(|c| {
            if c.is_residuated() {
                crate::classify::ol_violation(c.a)
            } else {
                None
            }
        }),
    },
];

/// Laws of residuated ortholattices.
pub const RESIDUATED_LAWS: &[Law] = &[
    point("residual/counit", Group::Residual, "x.(x \\ y) <= y", true, 2, |c, v| {
        let (x, y) = (v[0], v[1]);
        let l = c.p(x, c.r(x, y));
        fail_if(!c.a.leq(l, y), || vec![l, y])
    }),
    point("residual/self", Group::Residual, "x \\ x = 1", true, 1, |c, v| {
        fail_if(c.r(v[0], v[0]) != c.a.top(), || vec![c.r(v[0], v[0])])
    }),
    point("residual/right-monotone", Group::Residual, "y <= z => x \\ y <= x \\ z", true, 3, |c, v| {
        let (x, y, z) = (v[0], v[1], v[2]);
        fail_if(c.a.leq(y, z) && !c.a.leq(c.r(x, y), c.r(x, z)), || vec![c.r(x, y), c.r(x, z)])
    }),
    Law {
        id: "sasaki/join-distributive",
        group: Group::Residual,
        statement: "x.(join S) = join of x.s over S",
        residuated: true,
        kind: Kind::Subset(|c, x, s| {
            let a = c.a;
            let js = s.iter().fold(a.bottom(), |acc, &y| a.join(acc, y));
            let l = c.p(x, js);
            let r = s.iter().fold(a.bottom(), |acc, &y| a.join(acc, c.p(x, y)));
            fail_if(l != r, || vec![l, r])
        }),
    },
    Law {
        id: "residual/meet-distributive",
        group: Group::Residual,
        statement: "x \\ (meet S) = meet of x \\ s over S",
        residuated: true,
        kind: Kind::Subset(|c, x, s| {
            let a = c.a;
            let ms = s.iter().fold(a.top(), |acc, &y| a.meet(acc, y));
            let l = c.r(x, ms);
            let r = s.iter().fold(a.top(), |acc, &y| a.meet(acc, c.r(x, y)));
            fail_if(l != r, || vec![l, r])
        }),
    },
    point("residual/above-neg", Group::Residual, "-x <= x \\ y", true, 2, |c, v| {
        let (x, y) = (v[0], v[1]);
        fail_if(!c.a.leq(c.a.neg(x), c.r(x, y)), || vec![c.a.neg(x), c.r(x, y)])
    }),
    point("residual/neg-bounds", Group::Residual, "-(x \\ y) <= x <= -x \\ y", true, 2, |c, v| {
        let (x, y) = (v[0], v[1]);
        let (l, r) = (c.a.neg(c.r(x, y)), c.r(c.a.neg(x), y));
        fail_if(!c.a.leq(l, x) || !c.a.leq(x, r), || vec![l, r])
    }),
    point("residual/product-commutes", Group::Residual, "(x \\ y).x = x ^ (x \\ y) = x.(x \\ y)", true, 2, |c, v| {
        let (x, y) = (v[0], v[1]);
        let r = c.r(x, y);
        let (p, m, q) = (c.p(r, x), c.a.meet(x, r), c.p(x, r));
        fail_if(p != m || m != q, || vec![p, m, q])
    }),
    point("residual/meet-below", Group::Residual, "x ^ (x \\ y) <= y", true, 2, |c, v| {
        let (x, y) = (v[0], v[1]);
        let m = c.a.meet(x, c.r(x, y));
        fail_if(!c.a.leq(m, y), || vec![m, y])
    }),
    point("residual/meet-absorb", Group::Residual, "x \\ (x ^ y) = x \\ y", true, 2, |c, v| {
        let (x, y) = (v[0], v[1]);
        let l = c.r(x, c.a.meet(x, y));
        fail_if(l != c.r(x, y), || vec![l, c.r(x, y)])
    }),
    point("sasaki/right-absorb", Group::Residual, "x.y = x.(y.x)", true, 2, |c, v| {
        let (x, y) = (v[0], v[1]);
        let r = c.p(x, c.p(y, x));
        fail_if(c.p(x, y) != r, || vec![c.p(x, y), r])
    }),
    point("sasaki/zero-symmetric", Group::Residual, "x.y = 0 iff y.x = 0", true, 2, |c, v| {
        let (x, y) = (v[0], v[1]);
        fail_if((c.p(x, y) == 0) != (c.p(y, x) == 0), || vec![c.p(x, y), c.p(y, x)])
    }),
    point("tilde/antitone", Group::Tilde, "x <= y => ~y <= ~x", true, 2, |c, v| {
        let (x, y) = (v[0], v[1]);
        fail_if(c.a.leq(x, y) && !c.a.leq(c.t(y), c.t(x)), || vec![c.t(y), c.t(x)])
    }),
    point("tilde/bounds", Group::Tilde, "~1 = 0 and ~0 = 1", true, 0, |c, _| {
        let (t1, t0) = (c.t(c.a.top()), c.t(0));
        fail_if(t1 != 0 || t0 != c.a.top(), || vec![t1, t0])
    }),
    point("tilde/double-above", Group::Tilde, "x <= ~~x", true, 1, |c, v| {
        fail_if(!c.a.leq(v[0], c.t(c.t(v[0]))), || vec![c.t(c.t(v[0]))])
    }),
    point("tilde/triple", Group::Tilde, "~x = ~~~x", true, 1, |c, v| {
        let x = v[0];
        fail_if(c.t(x) != c.t(c.t(c.t(x))), || vec![c.t(x), c.t(c.t(c.t(x)))])
    }),
    point("tilde/join", Group::Tilde, "~(x v y) = ~x ^ ~y", true, 2, |c, v| {
        let (x, y) = (v[0], v[1]);
        let (l, r) = (c.t(c.a.join(x, y)), c.a.meet(c.t(x), c.t(y)));
        fail_if(l != r, || vec![l, r])
    }),
    point("tilde/double-is-tilde-neg", Group::Tilde, "~~x = ~-x", true, 1, |c, v| {
        let x = v[0];
        let (l, r) = (c.t(c.t(x)), c.t(c.a.neg(x)));
        fail_if(l != r, || vec![l, r])
    }),
    point("tilde/star-on-fixed", Group::Tilde, "x, y fixed by bar and x <= y => y * x = x", true, 2, |c, v| {
        let (x, y) = (v[0], v[1]);
        let applies = c.b(x) == x && c.b(y) == y && c.a.leq(x, y);
        fail_if(applies && c.star(y, x) != x, || vec![c.star(y, x)])
    }),
    point("tilde/meet", Group::Tilde, "~x v ~y = ~(x ^ y)", true, 2, |c, v| {
        let (x, y) = (v[0], v[1]);
        let (l, r) = (c.a.join(c.t(x), c.t(y)), c.t(c.a.meet(x, y)));
        fail_if(l != r, || vec![l, r])
    }),
    point("bar/idempotent", Group::Bar, "!!x = !x", true, 1, |c, v| {
        fail_if(c.b(c.b(v[0])) != c.b(v[0]), || vec![c.b(c.b(v[0])), c.b(v[0])])
    }),
    point("bar/neg", Group::Bar, "!-x = ~!x = ~x", true, 1, |c, v| {
        let x = v[0];
        let (p, q, r) = (c.b(c.a.neg(x)), c.t(c.b(x)), c.t(x));
        fail_if(p != q || q != r, || vec![p, q, r])
    }),
    point("bar/join", Group::Bar, "!(x v y) = !x v !y", true, 2, |c, v| {
        let (x, y) = (v[0], v[1]);
        let (l, r) = (c.b(c.a.join(x, y)), c.a.join(c.b(x), c.b(y)));
        fail_if(l != r, || vec![l, r])
    }),
    point("bar/meet", Group::Bar, "!(x ^ y) = !x ^ !y", true, 2, |c, v| {
        let (x, y) = (v[0], v[1]);
        let (l, r) = (c.b(c.a.meet(x, y)), c.a.meet(c.b(x), c.b(y)));
        fail_if(l != r, || vec![l, r])
    }),
    point("bar/product", Group::Bar, "!(x.y) = !x * !y", true, 2, |c, v| {
        let (x, y) = (v[0], v[1]);
        let (l, r) = (c.b(c.p(x, y)), c.star(c.b(x), c.b(y)));
        fail_if(l != r, || vec![l, r])
    }),
    Law {
        id: "bar-image/orthomodular",
        group: Group::BarImage,
        statement: "the fixed points of bar with ~ and => form an orthomodular lattice, bar is an ortholattice homomorphism onto it and => is its residual",
        residuated: true,
        kind: Kind::Global(|c| {
            let with = c.a.clone().with_residual(c.res.clone().expect("residuated law")).ok()?;
            match bar_image(&with) {
                Ok(_) => None,
                Err(crate::ops::BarImageError::InternalInvariantViolation(w)) => Some(w),
                Err(e) => Some(Witness::new(format!("bar-image/orthomodular: {e}"), vec![], vec![])),
            }
        }),
    },
    point("bar-image/residual", Group::BarImage, "!x \\ !y = !x => !y", true, 2, |c, v| {
        let (x, y) = (c.b(v[0]), c.b(v[1]));
        fail_if(c.r(x, y) != c.runder(x, y), || vec![c.r(x, y), c.runder(x, y)])
    }),
    Law {
        id: "orthomodularity/tilde-is-neg",
        group: Group::Orthomodularity,
        statement: "orthomodular iff ~x = -x",
        residuated: true,
        kind: Kind::Global(|c| {
            let holds = c.a.elements().all(|x| c.t(x) == c.a.neg(x));
            equivalence("orthomodularity/tilde-is-neg", is_oml(c), holds)
        }),
    },
    Law {
        id: "orthomodularity/bar-is-identity",
        group: Group::Orthomodularity,
        statement: "orthomodular iff !x = x",
        residuated: true,
        kind: Kind::Global(|c| {
            let holds = c.a.elements().all(|x| c.b(x) == x);
            equivalence("orthomodularity/bar-is-identity", is_oml(c), holds)
        }),
    },
    Law {
        id: "orthomodularity/residual-is-hook",
        group: Group::Orthomodularity,
        statement: "orthomodular iff x \\ y = x -> y",
        residuated: true,
        kind: Kind::Global(|c| {
            let holds = all_pairs(c, |x, y| c.r(x, y) == c.h(x, y));
            equivalence("orthomodularity/residual-is-hook", is_oml(c), holds)
        }),
    },
    Law {
        id: "orthomodularity/product-is-coresidual",
        group: Group::Orthomodularity,
        statement: "orthomodular iff x.y equals the co-residual of the hook",
        residuated: true,
        kind: Kind::Global(|c| {
            let cores = match compute_coresidual(c.a) {
                Ok(t) => t,
                Err(w) => return Some(w),
            };
            let holds = all_pairs(c, |x, y| c.p(x, y) == cores.get(x, y));
            equivalence("orthomodularity/product-is-coresidual", is_oml(c), holds)
        }),
    },
    Law {
        id: "residual/unique",
        group: Group::Residual,
        statement: "the residual is determined by the order: it equals the table computed from it",
        residuated: true,
        kind: Kind::Global(|c| {
            let computed = match compute_residual(c.a) {
                Ok(t) => t,
                Err(w) => return Some(w),
            };
            let res = c.res.as_ref().expect("residuated law");
            let (x, y) = c
                .a
                .elements()
                .flat_map(|x| c.a.elements().map(move |y| (x, y)))
                .find(|&(x, y)| computed.get(x, y) != res.get(x, y))?;
            Some(Witness::new("residual/unique", vec![x, y], vec![res.get(x, y), computed.get(x, y)]))
        }),
    },
];

/// Every law, involutive ones first.
pub fn all_laws() -> impl Iterator<Item = &'static Law> {
    INVOLUTIVE_LAWS.iter().chain(RESIDUATED_LAWS)
}

pub fn law(id: &str) -> Option<&'static Law> {
    all_laws().find(|l| l.id == id)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail(Witness),
    Skipped(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawResult {
    pub id: &'static str,
    pub group: Group,
    pub statement: &'static str,
    pub status: Status,
}

/// Calls `f` on every tuple in `0..n` of length `arity`, in lexicographic
/// order, until it returns `Some`.
fn scan<T>(n: usize, arity: usize, mut f: impl FnMut(&[Elem]) -> Option<T>) -> Option<T> {
    let mut v = vec![0; arity];
    if arity > 0 && n == 0 {
        return None;
    }
    loop {
        if let Some(t) = f(&v) {
            return Some(t);
        }
        let mut i = arity;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            v[i] += 1;
            if v[i] < n {
                break;
            }
            v[i] = 0;
        }
    }
}

/// The subsets `S` scanned by the subset laws: all of them up to
/// [`ALL_SUBSETS_MAX`] elements (as increasing bitmasks), otherwise the
/// empty set, singletons, pairs and the whole carrier.
pub fn subset_policy(n: usize) -> Vec<Vec<Elem>> {
    if n <= ALL_SUBSETS_MAX {
        (0u32..1 << n)
            .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
            .collect()
    } else {
        let mut out = vec![Vec::new()];
        out.extend((0..n).map(|i| vec![i]));
        out.extend((0..n).flat_map(|i| (i + 1..n).map(move |j| vec![i, j])));
        out.push((0..n).collect());
        out
    }
}

fn run_law(c: &Ctx, law: &Law, subsets: &[Vec<Elem>]) -> Status {
    if law.residuated && !c.is_residuated() {
        return Status::Skipped("not residuated");
    }
    let n = c.a.size();
    let found = match law.kind {
        Kind::Point { arity, check } => scan(n, arity, |v| {
            check(c, v).map(|vals| Witness::new(law.id, v.to_vec(), vals))
        }),
        Kind::Subset(check) => c.a.elements().find_map(|x| {
            subsets.iter().find_map(|s| {
                check(c, x, s).map(|vals| {
                    let mut elements = vec![x];
                    elements.extend(s);
                    Witness::new(law.id, elements, vals)
                })
            })
        }),
        Kind::Global(check) => check(c),
    };
    match found {
        None => Status::Pass,
        Some(w) => Status::Fail(w),
    }
}

/// Runs `laws` on `a`.
pub fn check_laws<'l>(a: &FiniteAlgebra, laws: impl IntoIterator<Item = &'l Law>) -> Vec<LawResult> {
    let c = Ctx::new(a);
    let subsets = subset_policy(a.size());
    laws.into_iter()
        .map(|law| LawResult {
            id: law.id,
            group: law.group,
            statement: law.statement,
            status: run_law(&c, law, &subsets),
        })
        .collect()
}

/// Runs every law on `a`.
pub fn check_all(a: &FiniteAlgebra) -> Vec<LawResult> {
    check_laws(a, all_laws())
}

/// The failed results, if any.
pub fn failures(results: &[LawResult]) -> Vec<&LawResult> {
    results.iter().filter(|r| matches!(r.status, Status::Fail(_))).collect()
}

/// Re-evaluates a reported violation; `true` if it is still a violation.
pub fn recheck(a: &FiniteAlgebra, w: &Witness) -> bool {
    let Some(law) = law(&w.law) else {
        return false;
    };
    let c = Ctx::new(a);
    if law.residuated && !c.is_residuated() {
        return false;
    }
    match law.kind {
        Kind::Point { arity, check } => w.elements.len() == arity && check(&c, &w.elements).as_ref() == Some(&w.values),
        Kind::Subset(check) => match w.elements.split_first() {
            Some((&x, s)) => check(&c, x, s).as_ref() == Some(&w.values),
            None => false,
        },
        Kind::Global(check) => check(&c).is_some(),
    }
}

/// One line per law: `PASS id`, `FAIL id: witness` or `SKIP id (reason)`.
pub fn render_report(a: &FiniteAlgebra, results: &[LawResult]) -> String {
    let mut out = String::new();
    for r in results {
        let line = match &r.status {
            Status::Pass => format!("PASS {:<18} {}  [{}]\n", r.group.as_str(), r.id, r.statement),
            Status::Fail(w) => format!(
                "FAIL {:<18} {}  [{}]: {}\n",
                r.group.as_str(),
                r.id,
                r.statement,
                w.render(a)
            ),
            Status::Skipped(why) => format!("SKIP {:<18} {} ({why})\n", r.group.as_str(), r.id),
        };
        out.push_str(&line);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::ops::residuate;

    fn status_of<'r>(results: &'r [LawResult], id: &str) -> &'r Status {
        &results.iter().find(|r| r.id == id).unwrap().status
    }

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<&str> = all_laws().map(|l| l.id).collect();
        ids.sort_unstable();
        let before = ids.len();
        ids.dedup();
        assert_eq!(ids.len(), before);
    }

    #[test]
    fn residuated_fixtures_pass_everything() {
        for a in [fixtures::b6(), fixtures::mo2(), fixtures::bool2(), fixtures::bool4()] {
            let a = residuate(&a).unwrap();
            let results = check_all(&a);
            assert!(failures(&results).is_empty(), "{}", render_report(&a, &results));
            assert!(results.iter().all(|r| r.status == Status::Pass));
        }
    }

    #[test]
    fn nonflexible_fails_flexibility_only() {
        let f = fixtures::nonflexible();
        let results = check_all(&f);
        let failed: Vec<&str> = failures(&results).iter().map(|r| r.id).collect();
        assert_eq!(failed, ["sasaki/flexible"]);
        let Status::Fail(w) = status_of(&results, "sasaki/flexible") else {
            panic!("flexibility should fail")
        };
        let e = |s| f.element_named(s).unwrap();
        assert_eq!(w.values, vec![e("x"), 0]);
        assert!(recheck(&f, w));
        assert!(matches!(status_of(&results, "residual/counit"), Status::Skipped(_)));
    }

    #[test]
    fn residual_computed_when_absent() {
        let b6 = fixtures::b6().without_residual();
        let results = check_all(&b6);
        assert!(results.iter().all(|r| r.status == Status::Pass));
    }

    #[test]
    fn wrong_residual_is_caught() {
        let b6 = residuate(&fixtures::b6()).unwrap();
        let hook = sasaki_hook(&b6);
        // the hook is not a residual on B6, so attaching it must be rejected
        assert!(b6.clone().with_residual(hook).is_err());
    }

    #[test]
    fn subset_policy_sizes() {
        assert_eq!(subset_policy(3).len(), 8);
        assert_eq!(subset_policy(8).len(), 256);
        assert_eq!(subset_policy(10).len(), 1 + 10 + 45 + 1);
    }

    #[test]
    fn scan_order_is_lexicographic() {
        let mut seen = Vec::new();
        let none: Option<()> = scan(2, 2, |v| {
            seen.push(v.to_vec());
            None
        });
        assert!(none.is_none());
        assert_eq!(seen, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        let mut count = 0;
        let _: Option<()> = scan(5, 0, |_| {
            count += 1;
            None
        });
        assert_eq!(count, 1);
    }
}
