//! Derived operations: Sasaki product and hook, the residual and co-residual,
//! and the operations `~`, bar, `*`, `=>` that live on residuated ortholattices.

use thiserror::Error;

use crate::algebra::{AlgebraError, Elem, FiniteAlgebra, Table, Witness};
use crate::classify;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("operation needs a residual table")]
pub struct MissingResidual;

/// `x . y = x ^ (-x v y)`.
pub fn sasaki_product(a: &FiniteAlgebra) -> Table {
    Table::from_fn(a.size(), |x, y| a.meet(x, a.join(a.neg(x), y)))
}

/// `x -> y = -x v (x ^ y)`.
pub fn sasaki_hook(a: &FiniteAlgebra) -> Table {
    Table::from_fn(a.size(), |x, y| a.join(a.neg(x), a.meet(x, y)))
}

/// Maximal elements of a subset (listed in index order).
fn maximal(a: &FiniteAlgebra, set: &[Elem]) -> Vec<Elem> {
    set.iter()
        .copied()
        .filter(|&y| !set.iter().any(|&w| w != y && a.leq(y, w)))
        .collect()
}

fn minimal(a: &FiniteAlgebra, set: &[Elem]) -> Vec<Elem> {
    set.iter()
        .copied()
        .filter(|&y| !set.iter().any(|&w| w != y && a.leq(w, y)))
        .collect()
}

/// Computes `x \ z` as the join of `{y : x.y <= z}` and checks that the join
/// belongs to the set. Fails with a `NoMaximum(x, z)` witness listing the
/// maximal elements of the offending set.
pub fn compute_residual(a: &FiniteAlgebra) -> Result<Table, Witness> {
    let n = a.size();
    let prod = sasaki_product(a);
    let mut data = Vec::with_capacity(n * n);
    for x in 0..n {
        for z in 0..n {
            let set: Vec<Elem> = (0..n).filter(|&y| a.leq(prod.get(x, y), z)).collect();
            let cand = set.iter().fold(a.bottom(), |acc, &y| a.join(acc, y));
            if !a.leq(prod.get(x, cand), z) {
                return Err(Witness::new("NoMaximum", vec![x, z], maximal(a, &set)));
            }
            data.push(cand);
        }
    }
    let res = Table::from_vec(n, data).expect("n*n entries");
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if a.leq(prod.get(x, y), z) != a.leq(y, res.get(x, z)) {
                    return Err(Witness::new(
                        "ResidualCheck",
                        vec![x, y, z],
                        vec![prod.get(x, y), res.get(x, z)],
                    ));
                }
            }
        }
    }
    Ok(res)
}

/// Returns a copy of `a` carrying its residual.
pub fn residuate(a: &FiniteAlgebra) -> Result<FiniteAlgebra, Witness> {
    let res = compute_residual(a)?;
    Ok(a.clone().with_residual(res).expect("computed residual satisfies (R)"))
}

/// Computes the co-residual `x (.) y` of the Sasaki hook as the meet of
/// `{z : y <= x -> z}`, then cross-checks it against the residual through
/// `x (.) y = -(x \ -y)` and `x \ y = -(x (.) -y)`.
pub fn compute_coresidual(a: &FiniteAlgebra) -> Result<Table, Witness> {
    let n = a.size();
    let hook = sasaki_hook(a);
    let mut data = Vec::with_capacity(n * n);
    let mut failure = None;
    'outer: for x in 0..n {
        for y in 0..n {
            let set: Vec<Elem> = (0..n).filter(|&z| a.leq(y, hook.get(x, z))).collect();
            let cand = set.iter().fold(a.top(), |acc, &z| a.meet(acc, z));
            if !a.leq(y, hook.get(x, cand)) {
                failure = Some(Witness::new("NoMinimum", vec![x, y], minimal(a, &set)));
                break 'outer;
            }
            data.push(cand);
        }
    }
    let residual = compute_residual(a);
    match (failure, residual) {
        (Some(w), Err(_)) => Err(w),
        (Some(_), Ok(_)) => Err(Witness::new("CrossCheckFailed", vec![], vec![0, 1])),
        (None, Err(_)) => Err(Witness::new("CrossCheckFailed", vec![], vec![1, 0])),
        (None, Ok(res)) => {
            let cores = Table::from_vec(n, data).expect("n*n entries");
            for x in 0..n {
                for y in 0..n {
                    let via_res = a.neg(res.get(x, a.neg(y)));
                    if cores.get(x, y) != via_res {
                        return Err(Witness::new(
                            "CrossCheckFailed",
                            vec![x, y],
                            vec![cores.get(x, y), via_res],
                        ));
                    }
                    let via_cores = a.neg(cores.get(x, a.neg(y)));
                    if res.get(x, y) != via_cores {
                        return Err(Witness::new(
                            "CrossCheckFailed",
                            vec![x, y],
                            vec![res.get(x, y), via_cores],
                        ));
                    }
                }
            }
            Ok(cores)
        }
    }
}

/// Operations defined from the residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedOps {
    /// `~x = x \ 0`
    pub tilde: Vec<Elem>,
    /// `bar x = ~~x`
    pub bar: Vec<Elem>,
    /// `x * y = x ^ (~x v y)`
    pub star: Table,
    /// `x => y = ~x v (x ^ y)`
    pub runder: Table,
}

pub fn derived_ops(a: &FiniteAlgebra) -> Result<DerivedOps, MissingResidual> {
    let res = a.residual().ok_or(MissingResidual)?;
    let n = a.size();
    let tilde: Vec<Elem> = (0..n).map(|x| res.get(x, 0)).collect();
    let bar: Vec<Elem> = (0..n).map(|x| tilde[tilde[x]]).collect();
    let star = Table::from_fn(n, |x, y| a.meet(x, a.join(tilde[x], y)));
    let runder = Table::from_fn(n, |x, y| a.join(tilde[x], a.meet(x, y)));
    Ok(DerivedOps {
        tilde,
        bar,
        star,
        runder,
    })
}

/// The algebra on the fixed points of bar together with the surjection
/// `x -> bar x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarImage {
    /// Carrier re-indexed in increasing original order; negation is `~`
    /// and the residual is `=>`, both restricted.
    pub algebra: FiniteAlgebra,
    /// `hom[x]` is the index of `bar x` in [`BarImage::algebra`].
    pub hom: Vec<Elem>,
    /// `carrier[i]` is the original index of element `i` of the image.
    pub carrier: Vec<Elem>,
}

impl BarImage {
    /// Translates an assignment over the original algebra into the image.
    pub fn map(&self, values: &[Elem]) -> Vec<Elem> {
        values.iter().map(|&v| self.hom[v]).collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BarImageError {
    #[error(transparent)]
    MissingResidual(#[from] MissingResidual),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(Witness),
}

fn invariant(law: &str, elements: Vec<Elem>, values: Vec<Elem>) -> BarImageError {
    BarImageError::InternalInvariantViolation(Witness::new(law, elements, values))
}

pub fn bar_image(a: &FiniteAlgebra) -> Result<BarImage, BarImageError> {
    let ops = derived_ops(a)?;
    let n = a.size();
    let carrier: Vec<Elem> = (0..n).filter(|&x| ops.bar[x] == x).collect();
    let mut index = vec![usize::MAX; n];
    for (i, &x) in carrier.iter().enumerate() {
        index[x] = i;
    }
    let m = carrier.len();
    let restrict = |f: &dyn Fn(Elem, Elem) -> Elem, law: &str| -> Result<Table, BarImageError> {
        let mut data = Vec::with_capacity(m * m);
        for &x in &carrier {
            for &y in &carrier {
                let v = f(x, y);
                if index[v] == usize::MAX {
                    return Err(invariant(law, vec![x, y], vec![v]));
                }
                data.push(index[v]);
            }
        }
        Ok(Table::from_vec(m, data).expect("m*m entries"))
    };
    let meet = restrict(&|x, y| a.meet(x, y), "bar-closed-meet")?;
    let join = restrict(&|x, y| a.join(x, y), "bar-closed-join")?;
    let runder = restrict(&|x, y| ops.runder.get(x, y), "bar-closed-runder")?;
    let mut neg = Vec::with_capacity(m);
    for &x in &carrier {
        let v = ops.tilde[x];
        if index[v] == usize::MAX {
            return Err(invariant("bar-closed-tilde", vec![x], vec![v]));
        }
        neg.push(index[v]);
    }
    let names = a
        .names()
        .map(|names| carrier.iter().map(|&x| names[x].clone()).collect());
    let image = FiniteAlgebra::new(meet, join, neg, None, names).map_err(|e| match e {
        AlgebraError::LatticeLaw(w) => BarImageError::InternalInvariantViolation(w),
        other => invariant(&format!("bar-image-invalid: {other}"), vec![], vec![]),
    })?;
    let hom: Vec<Elem> = (0..n).map(|x| index[ops.bar[x]]).collect();

    // bar is an ortholattice homomorphism onto the image, with - sent to ~
    for x in 0..n {
        if hom[a.neg(x)] != image.neg(hom[x]) {
            return Err(invariant(
                "bar-homomorphism",
                vec![x],
                vec![hom[a.neg(x)], image.neg(hom[x])],
            ));
        }
        for y in 0..n {
            if hom[a.meet(x, y)] != image.meet(hom[x], hom[y]) {
                return Err(invariant("bar-homomorphism", vec![x, y], vec![hom[a.meet(x, y)]]));
            }
            if hom[a.join(x, y)] != image.join(hom[x], hom[y]) {
                return Err(invariant("bar-homomorphism", vec![x, y], vec![hom[a.join(x, y)]]));
            }
        }
    }
    if let Some(w) = classify::ol_violation(&image) {
        return Err(BarImageError::InternalInvariantViolation(w));
    }
    if let Some(w) = classify::oml_quasi_violation(&image) {
        return Err(invariant("bar-image-orthomodular", w.elements, w.values));
    }
    let image_res = compute_residual(&image).map_err(|w| invariant("bar-image-residual", w.elements, w.values))?;
    if image_res != runder {
        let (i, j) = (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .find(|&(i, j)| image_res.get(i, j) != runder.get(i, j))
            .expect("tables differ somewhere");
        return Err(invariant(
            "bar-image-residual",
            vec![carrier[i], carrier[j]],
            vec![image_res.get(i, j), runder.get(i, j)],
        ));
    }
    let algebra = image.with_residual(runder).map_err(|e| match e {
        AlgebraError::ResidualViolation(w) => BarImageError::InternalInvariantViolation(w),
        other => invariant(&format!("bar-image-invalid: {other}"), vec![], vec![]),
    })?;
    Ok(BarImage { algebra, hom, carrier })
}
