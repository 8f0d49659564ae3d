//! Isomorphism test by backtracking, independent of the canonical labeling.

use crate::algebra::{Elem, FiniteAlgebra};

use super::canon::heights;

type Invariant = (usize, usize, u32, u32, bool);

fn invariants(a: &FiniteAlgebra) -> Vec<Invariant> {
    let up = a.up_sets();
    let n = a.size();
    let mut down = vec![0u64; n];
    for (x, &row) in up.iter().enumerate() {
        for (y, d) in down.iter_mut().enumerate() {
            if row >> y & 1 == 1 {
                *d |= 1 << x;
            }
        }
    }
    let h = heights(&up);
    let d = heights(&down);
    (0..n)
        .map(|x| (h[x], d[x], up[x].count_ones(), down[x].count_ones(), a.neg(x) == x))
        .collect()
}

struct Matcher<'a> {
    a: &'a FiniteAlgebra,
    b: &'a FiniteAlgebra,
    inv_a: Vec<Invariant>,
    inv_b: Vec<Invariant>,
    map: Vec<Option<Elem>>,
    used: Vec<bool>,
}

impl Matcher<'_> {
    fn consistent(&self, x: Elem, y: Elem) -> bool {
        if self.inv_a[x] != self.inv_b[y] || self.used[y] {
            return false;
        }
        self.map.iter().enumerate().all(|(u, m)| match m {
            None => true,
            Some(v) => self.a.leq(u, x) == self.b.leq(*v, y) && self.a.leq(x, u) == self.b.leq(y, *v),
        })
    }

    fn assign(&mut self, x: Elem, y: Elem) {
        self.map[x] = Some(y);
        self.used[y] = true;
    }

    fn unassign(&mut self, x: Elem) {
        if let Some(y) = self.map[x].take() {
            self.used[y] = false;
        }
    }

    fn search(&mut self, x: Elem) -> bool {
        let n = self.a.size();
        if x == n {
            return true;
        }
        if self.map[x].is_some() {
            return self.search(x + 1);
        }
        let nx = self.a.neg(x);
        for y in 0..n {
            if !self.consistent(x, y) {
                continue;
            }
            self.assign(x, y);
            let ny = self.b.neg(y);
            let paired = if nx == x {
                true
            } else if self.map[nx].is_none() && self.consistent(nx, ny) {
                self.assign(nx, ny);
                true
            } else {
                false
            };
            if paired && self.search(x + 1) {
                return true;
            }
            if nx != x && self.map[nx] == Some(ny) {
                self.unassign(nx);
            }
            self.unassign(x);
        }
        false
    }
}

/// A bijection `f` with `f(x ^ y) = f(x) ^ f(y)`, `f(x v y) = f(x) v f(y)` and
/// `f(-x) = -f(x)`, if one exists. Such a map also carries one residual to
/// the other, since the residual is determined by the order and negation.
pub fn are_isomorphic(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Option<Vec<Elem>> {
    let n = a.size();
    if n != b.size() {
        return None;
    }
    let inv_a = invariants(a);
    let inv_b = invariants(b);
    let mut sa = inv_a.clone();
    let mut sb = inv_b.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return None;
    }
    let mut m = Matcher {
        a,
        b,
        inv_a,
        inv_b,
        map: vec![None; n],
        used: vec![false; n],
    };
    if !m.search(0) {
        return None;
    }
    let f: Vec<Elem> = m.map.into_iter().map(|v| v.expect("complete map")).collect();
    let preserves = (0..n).all(|x| {
        f[a.neg(x)] == b.neg(f[x])
            && (0..n).all(|y| f[a.meet(x, y)] == b.meet(f[x], f[y]) && f[a.join(x, y)] == b.join(f[x], f[y]))
    });
    assert!(
        preserves,
        "order isomorphism commuting with negation must preserve the operations"
    );
    Some(f)
}
