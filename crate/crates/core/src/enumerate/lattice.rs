//! Bounded lattices up to isomorphism by canonical augmentation.
//!
//! Removing an atom from a lattice with at least three elements leaves a
//! lattice, so every lattice of size `m + 1` arises from one of size `m` by
//! adding a new atom below a suitable up-set `U`. A child is kept only when
//! its new atom lies in the automorphism orbit of the canonically chosen
//! atom; together with de-duplication among the children of one parent this
//! produces each isomorphism class exactly once, without a global table.

use std::collections::HashSet;

use rayon::prelude::*;

use super::canon::{canonical_form, down_sets, heights, CanonicalCode};

/// A bounded lattice on `0..n` given by up-set bitmasks. Lattices returned
/// by the enumerator are canonically labeled, which makes the labeling a
/// linear extension with bottom `0` and top `n - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    up: Vec<u64>,
}

impl Lattice {
    /// Wraps up-sets whose labeling is a linear extension with bottom `0`
    /// and top `n - 1`. Returns `None` if the order is not such a lattice.
    pub fn from_up_sets(up: Vec<u64>) -> Option<Lattice> {
        let n = up.len();
        if n == 0 || n > 64 {
            return None;
        }
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        if up[0] != all || up.iter().any(|&r| r >> (n - 1) & 1 == 0) {
            return None;
        }
        for (x, &r) in up.iter().enumerate() {
            if r >> x & 1 == 0 || r & ((1u64 << x) - 1) != 0 || r & !all != 0 {
                return None;
            }
            let mut s = r;
            while s != 0 {
                let y = s.trailing_zeros() as usize;
                s &= s - 1;
                if up[y] & !r != 0 {
                    return None;
                }
            }
        }
        let l = Lattice { up };
        let down = down_sets(&l.up);
        for x in 0..n {
            for y in x + 1..n {
                let m = 63 - (down[x] & down[y]).leading_zeros() as usize;
                if down[x] & down[y] & !down[m] != 0 {
                    return None;
                }
            }
        }
        Some(l)
    }

    pub fn size(&self) -> usize {
        self.up.len()
    }

    pub fn up_sets(&self) -> &[u64] {
        &self.up
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x] >> y & 1 == 1
    }

    pub fn down_sets(&self) -> Vec<u64> {
        down_sets(&self.up)
    }

    pub fn meet_table(&self) -> Vec<usize> {
        let n = self.size();
        let down = self.down_sets();
        let mut out = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                out[x * n + y] = 63 - (down[x] & down[y]).leading_zeros() as usize;
            }
        }
        out
    }

    pub fn join_table(&self) -> Vec<usize> {
        let n = self.size();
        let mut out = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                out[x * n + y] = (self.up[x] & self.up[y]).trailing_zeros() as usize;
            }
        }
        out
    }

    pub fn atoms(&self) -> Vec<usize> {
        let n = self.size();
        let down = self.down_sets();
        (1..n.saturating_sub(1))
            .filter(|&x| down[x].count_ones() == 2)
            .collect()
    }

    /// Heights from the bottom and from the top.
    pub fn height_profile(&self) -> (Vec<usize>, Vec<usize>) {
        (heights(&self.up), heights(&self.down_sets()))
    }

    /// Necessary condition for an antitone involution: as many atoms as
    /// coatoms and the same number of elements at each height from the
    /// bottom as from the top.
    pub fn may_be_self_dual(&self) -> bool {
        let (h, d) = self.height_profile();
        let n = self.size();
        let mut counts = vec![0i32; n + 1];
        for x in 0..n {
            counts[h[x]] += 1;
            counts[d[x]] -= 1;
        }
        counts.iter().all(|&c| c == 0)
    }
}

/// Meet of `x` and `y` when the labeling is a linear extension.
#[inline]
fn meet_of(down: &[u64], x: usize, y: usize) -> usize {
    63 - (down[x] & down[y]).leading_zeros() as usize
}

/// Every up-set `U` of `parent` not containing the bottom that is closed
/// under non-zero meets. These are exactly the up-sets above which a new
/// atom can be added.
pub fn atom_extensions(parent: &Lattice) -> Vec<u64> {
    let m = parent.size();
    let down = parent.down_sets();
    let mut out = Vec::new();
    if m < 2 {
        return out;
    }
    let top = m - 1;
    extend(
        &parent.up,
        &down,
        top,
        1 << top,
        meet_required(&down, top, 1 << top, 0),
        &mut out,
    );
    out
}

fn meet_required(down: &[u64], x: usize, set: u64, required: u64) -> u64 {
    let mut req = required;
    let mut s = set & !(1 << x);
    while s != 0 {
        let y = s.trailing_zeros() as usize;
        s &= s - 1;
        let mm = meet_of(down, x, y);
        if mm != 0 {
            req |= 1 << mm;
        }
    }
    req
}

fn extend(up: &[u64], down: &[u64], last: usize, set: u64, required: u64, out: &mut Vec<u64>) {
    if last == 1 {
        out.push(set);
        return;
    }
    let x = last - 1;
    let bit = 1u64 << x;
    if required & bit == 0 {
        extend(up, down, x, set, required, out);
    }
    if up[x] & !bit & !set == 0 {
        let with = set | bit;
        extend(up, down, x, with, meet_required(down, x, with, required), out);
    }
}

/// The child obtained by adding an atom (index 1) below `ext`.
pub fn add_atom(parent: &Lattice, ext: u64) -> Lattice {
    let m = parent.size();
    let mut up = Vec::with_capacity(m + 1);
    up.push((1u64 << (m + 1)) - 1);
    up.push(0b10 | (ext << 1));
    up.extend(parent.up[1..].iter().map(|&r| r << 1));
    Lattice { up }
}

/// Canonical lattice together with its code.
#[derive(Clone, Debug)]
pub struct CanonicalLattice {
    pub code: CanonicalCode,
    pub lattice: Lattice,
}

fn canonicalize(l: &Lattice) -> (CanonicalLattice, Vec<usize>, super::canon::CanonicalForm) {
    let form = canonical_form(&l.up, None, None);
    let lattice = Lattice {
        up: form.relabel_up(&l.up),
    };
    let labeling = form.labeling.clone();
    (
        CanonicalLattice {
            code: form.code.clone(),
            lattice,
        },
        labeling,
        form,
    )
}

/// Whether the atom `a` of `child` is in the orbit of the canonical atom.
fn is_canonical_child(child: &Lattice, a: usize) -> Option<CanonicalLattice> {
    let down = child.down_sets();
    let n = child.size();
    let atoms: Vec<usize> = (1..n - 1).filter(|&x| down[x].count_ones() == 2).collect();
    // atoms with fewer elements above come first in the canonical order
    let min_up = atoms.iter().map(|&x| child.up[x].count_ones()).min()?;
    if child.up[a].count_ones() != min_up {
        return None;
    }
    let (canon, labeling, form) = canonicalize(child);
    let c = *atoms
        .iter()
        .min_by_key(|&&x| labeling[x])
        .expect("a lattice with at least three elements has atoms");
    if c == a || form.known_same_orbit(a, c) {
        return Some(canon);
    }
    let colored = |v: usize| {
        let mut colors = vec![0u32; n];
        colors[v] = 1;
        canonical_form(&child.up, None, Some(&colors)).code
    };
    (colored(a) == colored(c)).then_some(canon)
}

/// Children of `parent` accepted by canonical augmentation, filtered by
/// `keep`, de-duplicated and sorted by code.
pub fn canonical_children(parent: &Lattice, keep: &(dyn Fn(&Lattice) -> bool + Sync)) -> Vec<CanonicalLattice> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for ext in atom_extensions(parent) {
        let child = add_atom(parent, ext);
        if !keep(&child) {
            continue;
        }
        if let Some(c) = is_canonical_child(&child, 1) {
            if seen.insert(c.code.clone()) {
                out.push(c);
            }
        }
    }
    out
}

/// The 1- and 2-element lattices.
pub fn base_lattice(n: usize) -> Option<CanonicalLattice> {
    let up = match n {
        1 => vec![1],
        2 => vec![0b11, 0b10],
        _ => return None,
    };
    let lattice = Lattice { up };
    let code = canonical_form(&lattice.up, None, None).code;
    Some(CanonicalLattice { code, lattice })
}

/// One generation step, in parallel over parents; the result is sorted by
/// code and so independent of scheduling.
pub fn next_level(parents: &[CanonicalLattice], keep: &(dyn Fn(&Lattice) -> bool + Sync)) -> Vec<CanonicalLattice> {
    let mut out: Vec<CanonicalLattice> = parents
        .par_iter()
        .flat_map_iter(|p| canonical_children(&p.lattice, keep))
        .collect();
    out.sort_by(|a, b| a.code.cmp(&b.code));
    out
}

/// All lattices of size `n` satisfying `keep_last`, up to isomorphism, in
/// code order. Intermediate sizes are generated in full.
pub fn lattices_of_size(n: usize, keep_last: &(dyn Fn(&Lattice) -> bool + Sync)) -> Vec<CanonicalLattice> {
    if n == 0 {
        return Vec::new();
    }
    if n <= 2 {
        return base_lattice(n).into_iter().filter(|l| keep_last(&l.lattice)).collect();
    }
    let mut level = vec![base_lattice(2).expect("base")];
    for m in 3..=n {
        let all = |_: &Lattice| true;
        level = if m == n {
            next_level(&level, keep_last)
        } else {
            next_level(&level, &all)
        };
    }
    level
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = (1..=8).map(|n| lattices_of_size(n, &|_| true).len()).collect();
        assert_eq!(counts, [1, 1, 1, 2, 5, 15, 53, 222]);
    }

    #[test]
    fn extensions_of_the_square() {
        let square = Lattice::from_up_sets(vec![0b1111, 0b1010, 0b1100, 0b1000]).unwrap();
        let mut exts = atom_extensions(&square);
        exts.sort_unstable();
        // {1}, {a,1}, {b,1}, {a,b,1}
        assert_eq!(exts, vec![0b1000, 0b1010, 0b1100, 0b1110]);
    }

    #[test]
    fn from_up_sets_validation() {
        assert!(Lattice::from_up_sets(vec![0b11, 0b10]).is_some());
        // two maximal elements
        assert!(Lattice::from_up_sets(vec![0b111, 0b010, 0b100]).is_none());
        // 0 < a, b < c, d < 1: a and b have two minimal upper bounds
        let up = vec![0b111111, 0b111010, 0b111100, 0b101000, 0b110000, 0b100000];
        assert!(Lattice::from_up_sets(up).is_none());
    }

    #[test]
    fn generated_lattices_are_valid() {
        for l in lattices_of_size(7, &|_| true) {
            assert!(Lattice::from_up_sets(l.lattice.up_sets().to_vec()).is_some());
        }
    }
}
