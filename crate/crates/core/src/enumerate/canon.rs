//! Canonical labeling of finite posets (with an optional involution and
//! vertex colors) by individualization and refinement.
//!
//! Posets are given by up-set bitmasks, so at most 64 elements. The initial
//! ordered partition is keyed by height, so every canonical labeling is a
//! linear extension with the bottom first and the top last.

use std::fmt;

/// Minimal serialization of a structure over the labelings explored by the
/// search: the size, the relabeled up-set rows, the relabeled involution
/// (if any) and the colors, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(Vec<u64>);

impl CanonicalCode {
    /// Big-endian bytes, so byte order agrees with the derived ordering.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().flat_map(|w| w.to_be_bytes()).collect()
    }

    pub fn words(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(":")?;
            }
            write!(f, "{w:x}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub code: CanonicalCode,
    /// `labeling[v]` is the canonical label of vertex `v`.
    pub labeling: Vec<usize>,
    /// Automorphisms met during the search (not necessarily generating).
    pub automorphisms: Vec<Vec<usize>>,
}

impl CanonicalForm {
    pub fn relabel_up(&self, up: &[u64]) -> Vec<u64> {
        relabel_up(up, &self.labeling)
    }

    pub fn relabel_neg(&self, neg: &[usize]) -> Vec<usize> {
        let mut out = vec![0; neg.len()];
        for (v, &w) in neg.iter().enumerate() {
            out[self.labeling[v]] = self.labeling[w];
        }
        out
    }

    /// Whether some automorphism met during the search maps `x` to `y`
    /// (transitively). `false` is inconclusive.
    pub fn known_same_orbit(&self, x: usize, y: usize) -> bool {
        let mut uf: Vec<usize> = (0..self.labeling.len()).collect();
        for g in &self.automorphisms {
            for (v, &w) in g.iter().enumerate() {
                union(&mut uf, v, w);
            }
        }
        find(&mut uf, x) == find(&mut uf, y)
    }
}

pub fn relabel_up(up: &[u64], labeling: &[usize]) -> Vec<u64> {
    let mut out = vec![0u64; up.len()];
    for (v, &row) in up.iter().enumerate() {
        out[labeling[v]] = map_bits(row, labeling);
    }
    out
}

fn map_bits(mut row: u64, labeling: &[usize]) -> u64 {
    let mut out = 0u64;
    while row != 0 {
        let u = row.trailing_zeros() as usize;
        row &= row - 1;
        out |= 1 << labeling[u];
    }
    out
}

fn find(uf: &mut [usize], mut x: usize) -> usize {
    while uf[x] != x {
        uf[x] = uf[uf[x]];
        x = uf[x];
    }
    x
}

fn union(uf: &mut [usize], x: usize, y: usize) {
    let (a, b) = (find(uf, x), find(uf, y));
    if a != b {
        uf[a.max(b)] = a.min(b);
    }
}

/// Heights (longest chain from a minimal element).
pub fn heights(up: &[u64]) -> Vec<usize> {
    let n = up.len();
    let down = down_sets(up);
    let mut by_size: Vec<usize> = (0..n).collect();
    by_size.sort_by_key(|&v| down[v].count_ones());
    let mut h = vec![0; n];
    for &v in &by_size {
        let mut below = down[v] & !(1 << v);
        let mut best = 0;
        while below != 0 {
            let u = below.trailing_zeros() as usize;
            below &= below - 1;
            best = best.max(h[u] + 1);
        }
        h[v] = best;
    }
    h
}

pub fn down_sets(up: &[u64]) -> Vec<u64> {
    let n = up.len();
    let mut down = vec![0u64; n];
    for (x, &row) in up.iter().enumerate() {
        let mut r = row;
        while r != 0 {
            let y = r.trailing_zeros() as usize;
            r &= r - 1;
            down[y] |= 1 << x;
        }
    }
    down
}

struct Search<'a> {
    n: usize,
    up: &'a [u64],
    down: Vec<u64>,
    neg: Option<&'a [usize]>,
    colors: Option<&'a [u32]>,
    best: Option<(Vec<u64>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

/// Ordered partition: `order` lists vertices, `cell[v]` is the position of
/// the first vertex of `v`'s cell.
#[derive(Clone)]
struct Partition {
    order: Vec<usize>,
    cell: Vec<usize>,
    cells: usize,
}

fn mix(h: u64, x: u64) -> u64 {
    (h ^ x).wrapping_mul(0x100_0000_01b3).rotate_left(17) ^ 0x9e37_79b9_7f4a_7c15
}

impl Search<'_> {
    fn initial(&self) -> Partition {
        let h = heights(self.up);
        let key = |v: usize| {
            (
                h[v],
                self.colors.map_or(0, |c| c[v]),
                self.down[v].count_ones(),
                self.up[v].count_ones(),
            )
        };
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| key(v));
        let mut cell = vec![0; self.n];
        let mut cells = 0;
        for p in 0..self.n {
            if p == 0 || key(order[p]) != key(order[p - 1]) {
                cells += 1;
                cell[order[p]] = p;
            } else {
                cell[order[p]] = cell[order[p - 1]];
            }
        }
        Partition { order, cell, cells }
    }

    /// Splits cells by how each vertex meets every cell from above and
    /// below, and by the cell of its image under the involution.
    fn refine(&self, part: &mut Partition) {
        loop {
            let mut masks: Vec<(usize, u64)> = Vec::with_capacity(part.cells);
            for p in 0..self.n {
                let v = part.order[p];
                if part.cell[v] == p {
                    masks.push((p, 0));
                }
                masks.last_mut().expect("cell opened").1 |= 1 << v;
            }
            let sig: Vec<u64> = (0..self.n)
                .map(|v| {
                    let mut h = 0xcbf2_9ce4_8422_2325u64;
                    for &(_, m) in &masks {
                        h = mix(h, u64::from((self.up[v] & m).count_ones()));
                        h = mix(h, u64::from((self.down[v] & m).count_ones()));
                    }
                    if let Some(neg) = self.neg {
                        h = mix(h, part.cell[neg[v]] as u64);
                    }
                    h
                })
                .collect();
            let mut order = part.order.clone();
            order.sort_by_key(|&v| (part.cell[v], sig[v]));
            let mut cell = vec![0; self.n];
            let mut cells = 0;
            for p in 0..self.n {
                let (v, prev) = (order[p], if p > 0 { Some(order[p - 1]) } else { None });
                match prev {
                    Some(u) if part.cell[u] == part.cell[v] && sig[u] == sig[v] => cell[v] = cell[u],
                    _ => {
                        cells += 1;
                        cell[v] = p;
                    }
                }
            }
            let stable = cells == part.cells;
            *part = Partition { order, cell, cells };
            if stable {
                return;
            }
        }
    }

    fn individualize(&self, part: &Partition, v: usize) -> Partition {
        let start = part.cell[v];
        let mut out = part.clone();
        let pos = out.order.iter().position(|&u| u == v).expect("vertex present");
        out.order[start..=pos].rotate_right(1);
        let mut p = start + 1;
        while p < self.n && part.cell[out.order[p]] == start {
            out.cell[out.order[p]] = start + 1;
            p += 1;
        }
        out.cell[v] = start;
        out.cells += 1;
        self.refine(&mut out);
        out
    }

    fn code(&self, order: &[usize]) -> (Vec<u64>, Vec<usize>) {
        let mut lab = vec![0; self.n];
        for (p, &v) in order.iter().enumerate() {
            lab[v] = p;
        }
        let mut code = Vec::with_capacity(1 + 3 * self.n);
        code.push(self.n as u64);
        code.extend(order.iter().map(|&v| map_bits(self.up[v], &lab)));
        if let Some(neg) = self.neg {
            code.extend(order.iter().map(|&v| lab[neg[v]] as u64));
        }
        if let Some(colors) = self.colors {
            code.extend(order.iter().map(|&v| u64::from(colors[v])));
        }
        (code, lab)
    }

    fn run(&mut self, part: Partition, prefix: &mut Vec<usize>) {
        if part.cells == self.n {
            let (code, lab) = self.code(&part.order);
            match &self.best {
                Some((best, best_lab)) if *best == code => {
                    let mut best_order = vec![0; self.n];
                    for (v, &p) in best_lab.iter().enumerate() {
                        best_order[p] = v;
                    }
                    let mut aut = vec![0; self.n];
                    for p in 0..self.n {
                        aut[best_order[p]] = part.order[p];
                    }
                    if aut.iter().enumerate().any(|(v, &w)| v != w) {
                        self.automorphisms.push(aut);
                    }
                }
                Some((best, _)) if *best <= code => {}
                _ => self.best = Some((code, lab)),
            }
            return;
        }
        let start = (0..self.n)
            .find(|&p| {
                let v = part.order[p];
                part.cell[v] == p && p + 1 < self.n && part.cell[part.order[p + 1]] == p
            })
            .expect("non-discrete partition has a non-singleton cell");
        let target: Vec<usize> = part.order[start..]
            .iter()
            .copied()
            .take_while(|&v| part.cell[v] == start)
            .collect();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &target {
            if !tried.is_empty() && self.pruned(prefix, &tried, v) {
                continue;
            }
            let child = self.individualize(&part, v);
            prefix.push(v);
            self.run(child, prefix);
            prefix.pop();
            tried.push(v);
        }
    }

    /// Whether `v` is in the orbit of an explored candidate under the known
    /// automorphisms fixing `prefix` pointwise.
    fn pruned(&self, prefix: &[usize], tried: &[usize], v: usize) -> bool {
        let mut uf: Vec<usize> = (0..self.n).collect();
        let mut any = false;
        for g in &self.automorphisms {
            if prefix.iter().all(|&p| g[p] == p) {
                any = true;
                for (x, &y) in g.iter().enumerate() {
                    union(&mut uf, x, y);
                }
            }
        }
        if !any {
            return false;
        }
        let root = find(&mut uf, v);
        tried.iter().any(|&u| find(&mut uf, u) == root)
    }
}

/// Canonical form of the poset `up` with optional involution and colors.
pub fn canonical_form(up: &[u64], neg: Option<&[usize]>, colors: Option<&[u32]>) -> CanonicalForm {
    let n = up.len();
    assert!(n <= 64, "canonical_form supports at most 64 elements");
    let mut search = Search {
        n,
        up,
        down: down_sets(up),
        neg,
        colors,
        best: None,
        automorphisms: Vec::new(),
    };
    if n == 0 {
        return CanonicalForm {
            code: CanonicalCode(vec![0]),
            labeling: Vec::new(),
            automorphisms: Vec::new(),
        };
    }
    let mut part = search.initial();
    search.refine(&mut part);
    search.run(part, &mut Vec::new());
    let (code, labeling) = search.best.expect("at least one leaf");
    CanonicalForm {
        code: CanonicalCode(code),
        labeling,
        automorphisms: search.automorphisms,
    }
}

pub fn canonical_code(up: &[u64], neg: Option<&[usize]>) -> CanonicalCode {
    canonical_form(up, neg, None).code
}
