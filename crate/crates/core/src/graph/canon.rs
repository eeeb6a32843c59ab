//! Canonical labelling by partition refinement and individualisation.
//!
//! The search explores the individualisation-refinement tree, keeps the leaf
//! with the lexicographically largest relabelled adjacency matrix, and prunes
//! with automorphisms found along the way (leaf certificates equal to the
//! first or best leaf). The automorphisms collected generate the full group,
//! so [`Labeling::orbits`] are the true vertex orbits.

use thiserror::Error;

use super::Graph;

/// Largest order accepted by [`canonical_form`].
pub const CANON_MAX_ORDER: usize = 24;

const SLOTS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("canonical labelling is limited to {CANON_MAX_ORDER} vertices, got {0}")]
    TooLarge(usize),
}

type Perm = [u8; SLOTS];

/// Result of a canonical-labelling search.
#[derive(Debug, Clone)]
pub struct Labeling {
    n: usize,
    lab: Perm,
    cert: [u32; SLOTS],
    generators: Vec<Perm>,
    orbits: Vec<usize>,
}

impl Labeling {
    /// `lab()[i]` is the original vertex placed at canonical position `i`.
    pub fn lab(&self) -> Vec<usize> {
        self.lab[..self.n].iter().map(|&v| usize::from(v)).collect()
    }

    /// Canonical position of original vertex `v`.
    pub fn position(&self, v: usize) -> usize {
        self.lab[..self.n]
            .iter()
            .position(|&x| usize::from(x) == v)
            .expect("vertex in range")
    }

    /// Canonical adjacency rows: bit `j` of row `i` set iff positions `i`, `j` are adjacent.
    pub fn canonical_rows(&self) -> &[u32] {
        &self.cert[..self.n]
    }

    pub fn canonical_graph(&self) -> Graph {
        Graph::from_small_rows(self.n, self.canonical_rows())
    }

    /// Generators of the automorphism group, as images `gen[v]`.
    pub fn generators(&self) -> Vec<Vec<usize>> {
        self.generators
            .iter()
            .map(|p| p[..self.n].iter().map(|&v| usize::from(v)).collect())
            .collect()
    }

    pub(crate) fn raw_generators(&self) -> &[Perm] {
        &self.generators
    }

    /// Orbit representative (smallest member) for every vertex.
    pub fn orbits(&self) -> &[usize] {
        &self.orbits
    }

    pub fn same_orbit(&self, u: usize, v: usize) -> bool {
        self.orbits[u] == self.orbits[v]
    }
}

// ---------------------------------------------------------------------------
// Ordered partitions
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
struct Partition {
    n: usize,
    lab: Perm,
    // bit i set iff a cell starts at position i
    starts: u32,
}

impl Partition {
    fn unit(n: usize) -> Self {
        let mut lab = [0u8; SLOTS];
        for (i, slot) in lab.iter_mut().enumerate().take(n) {
            *slot = i as u8;
        }
        Self {
            n,
            lab,
            starts: if n == 0 { 0 } else { 1 },
        }
    }

    #[inline]
    fn cell_end(&self, start: usize) -> usize {
        let above = if start + 1 >= SLOTS {
            0
        } else {
            self.starts >> (start + 1)
        };
        if above == 0 {
            self.n
        } else {
            start + 1 + above.trailing_zeros() as usize
        }
    }

    #[inline]
    fn is_discrete(&self) -> bool {
        self.starts.count_ones() as usize == self.n
    }

    fn mask(&self, from: usize, to: usize) -> u32 {
        self.lab[from..to].iter().fold(0, |m, &v| m | (1 << v))
    }

    /// Refine to the coarsest equitable partition finer than `self`,
    /// starting with the cells whose starts are in `queue`.
    fn refine(&mut self, rows: &[u32], mut queue: u32) {
        let n = self.n;
        let mut counts = [0u8; SLOTS];
        while queue != 0 && !self.is_discrete() {
            let w_start = queue.trailing_zeros() as usize;
            queue &= !(1 << w_start);
            let w_mask = self.mask(w_start, self.cell_end(w_start));
            let mut s = 0;
            while s < n {
                let e = self.cell_end(s);
                if e - s > 1 {
                    let mut uniform = true;
                    for i in s..e {
                        counts[i] = (rows[usize::from(self.lab[i])] & w_mask).count_ones() as u8;
                        uniform &= counts[i] == counts[s];
                    }
                    if !uniform {
                        let mut cell: Vec<(u8, u8)> =
                            (s..e).map(|i| (counts[i], self.lab[i])).collect();
                        cell.sort_unstable();
                        for (k, &(c, v)) in cell.iter().enumerate() {
                            self.lab[s + k] = v;
                            if k > 0 && c != cell[k - 1].0 {
                                self.starts |= 1 << (s + k);
                            }
                        }
                        let mut f = s;
                        while f < e {
                            queue |= 1 << f;
                            f = self.cell_end(f);
                        }
                    }
                }
                s = e;
            }
        }
    }

    /// Split `v` off the front of the cell starting at `start`.
    fn individualize(&mut self, start: usize, v: u8) {
        let end = self.cell_end(start);
        let at = (start..end)
            .find(|&i| self.lab[i] == v)
            .expect("vertex belongs to the target cell");
        self.lab.swap(start, at);
        // keep the remainder sorted so the child order is label independent
        self.lab[start + 1..end].sort_unstable();
        self.starts |= 1 << (start + 1);
    }
}

// ---------------------------------------------------------------------------
// Search tree
// ---------------------------------------------------------------------------

struct Leaf {
    lab: Perm,
    cert: [u32; SLOTS],
    path: Vec<u8>,
}

struct Search<'a> {
    rows: &'a [u32],
    n: usize,
    generators: Vec<Perm>,
    first: Option<Leaf>,
    best: Option<Leaf>,
}

fn common_prefix(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

impl<'a> Search<'a> {
    fn certificate(&self, p: &Partition) -> [u32; SLOTS] {
        let mut pos = [0u8; SLOTS];
        for i in 0..self.n {
            pos[usize::from(p.lab[i])] = i as u8;
        }
        let mut cert = [0u32; SLOTS];
        for (i, slot) in cert.iter_mut().enumerate().take(self.n) {
            let mut row = self.rows[usize::from(p.lab[i])];
            let mut out = 0u32;
            while row != 0 {
                let u = row.trailing_zeros() as usize;
                row &= row - 1;
                out |= 1 << pos[u];
            }
            *slot = out;
        }
        cert
    }

    fn record(&mut self, from: &Perm, to: &Perm) {
        let mut gamma = [0u8; SLOTS];
        for i in 0..self.n {
            gamma[usize::from(from[i])] = to[i];
        }
        if (0..self.n).any(|v| usize::from(gamma[v]) != v) {
            self.generators.push(gamma);
        }
    }

    /// Returns the depth to resume at when an automorphism makes the rest
    /// of the current subtree redundant.
    fn leaf(&mut self, p: &Partition, path: &[u8]) -> Option<usize> {
        let cert = self.certificate(p);
        let n = self.n;
        let Some(first) = &self.first else {
            let leaf = Leaf {
                lab: p.lab,
                cert,
                path: path.to_vec(),
            };
            self.best = Some(Leaf {
                lab: p.lab,
                cert,
                path: path.to_vec(),
            });
            self.first = Some(leaf);
            return None;
        };
        if first.cert[..n] == cert[..n] {
            let from = first.lab;
            let k = common_prefix(&first.path, path);
            self.record(&from, &p.lab);
            return Some(k);
        }
        let best = self.best.as_ref().expect("best set with first");
        match cert[..n].cmp(&best.cert[..n]) {
            std::cmp::Ordering::Equal => {
                let from = best.lab;
                let k = common_prefix(&best.path, path);
                self.record(&from, &p.lab);
                Some(k)
            }
            std::cmp::Ordering::Greater => {
                self.best = Some(Leaf {
                    lab: p.lab,
                    cert,
                    path: path.to_vec(),
                });
                None
            }
            std::cmp::Ordering::Less => None,
        }
    }

    /// Orbit of `v` under the generators that fix every vertex of `path`.
    fn stabilizer_orbit(&self, v: u8, path: &[u8]) -> u32 {
        let mut orbit = 1u32 << v;
        let usable: Vec<&Perm> = self
            .generators
            .iter()
            .filter(|g| path.iter().all(|&x| g[usize::from(x)] == x))
            .collect();
        if usable.is_empty() {
            return orbit;
        }
        loop {
            let mut next = orbit;
            let mut rest = orbit;
            while rest != 0 {
                let u = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                for g in &usable {
                    next |= 1 << g[u];
                }
            }
            if next == orbit {
                return orbit;
            }
            orbit = next;
        }
    }

    fn node(&mut self, p: &Partition, path: &mut Vec<u8>) -> Option<usize> {
        if p.is_discrete() {
            return self.leaf(p, path);
        }
        let mut start = 0;
        loop {
            let end = p.cell_end(start);
            if end - start > 1 {
                break;
            }
            start = end;
        }
        let end = p.cell_end(start);
        let cell: Vec<u8> = p.lab[start..end].to_vec();
        let depth = path.len();
        let mut tried = 0u32;
        for v in cell {
            if tried != 0 && self.stabilizer_orbit(v, path) & tried != 0 {
                continue;
            }
            tried |= 1 << v;
            let mut child = *p;
            child.individualize(start, v);
            child.refine(self.rows, 1 << start);
            path.push(v);
            let jump = self.node(&child, path);
            path.pop();
            if let Some(k) = jump {
                if k < depth {
                    return Some(k);
                }
            }
        }
        None
    }
}

fn orbit_representatives(n: usize, generators: &[Perm]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for g in generators {
        for v in 0..n {
            let a = find(&mut parent, v);
            let b = find(&mut parent, usize::from(g[v]));
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi] = lo;
            }
        }
    }
    (0..n).map(|v| find(&mut parent, v)).collect()
}

/// Labelling search on raw rows (`rows[v]` = neighbour mask of `v`).
pub(crate) fn label_rows(n: usize, rows: &[u32]) -> Labeling {
    assert!(n <= SLOTS);
    let mut root = Partition::unit(n);
    root.refine(rows, root.starts);
    let mut search = Search {
        rows,
        n,
        generators: Vec::new(),
        first: None,
        best: None,
    };
    let mut path = Vec::with_capacity(n);
    search.node(&root, &mut path);
    let best = search
        .best
        .take()
        .expect("search reaches at least one leaf");
    let orbits = orbit_representatives(n, &search.generators);
    Labeling {
        n,
        lab: best.lab,
        cert: best.cert,
        generators: search.generators,
        orbits,
    }
}

pub fn canonical_labeling(g: &Graph) -> Result<Labeling, CanonError> {
    if g.order() > CANON_MAX_ORDER {
        return Err(CanonError::TooLarge(g.order()));
    }
    let rows = g.small_rows().expect("order checked");
    Ok(label_rows(g.order(), &rows))
}

/// Isomorphs map to bit-identical outputs.
pub fn canonical_form(g: &Graph) -> Result<Graph, CanonError> {
    Ok(canonical_labeling(g)?.canonical_graph())
}

pub fn automorphism_orbits(g: &Graph) -> Result<Vec<usize>, CanonError> {
    Ok(canonical_labeling(g)?.orbits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn cycle(order: &[usize]) -> Graph {
        let n = order.len();
        let edges: Vec<_> = (0..n).map(|i| (order[i], order[(i + 1) % n])).collect();
        Graph::from_pairs(n, &edges).unwrap()
    }

    fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_pairs(n, &edges).unwrap()
    }

    fn all_perms(n: usize) -> Vec<Vec<usize>> {
        fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == used.len() {
                out.push(cur.clone());
                return;
            }
            for v in 0..used.len() {
                if !used[v] {
                    used[v] = true;
                    cur.push(v);
                    rec(cur, used, out);
                    cur.pop();
                    used[v] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }

    #[test]
    fn relabelled_five_cycles_agree() {
        let a = canonical_form(&cycle(&[0, 1, 2, 3, 4])).unwrap();
        let b = canonical_form(&cycle(&[0, 2, 4, 1, 3])).unwrap();
        assert_eq!(a, b);
        assert_eq!(canonical_form(&a).unwrap(), a);
    }

    #[test]
    fn path_and_triangle_differ() {
        let p3 = Graph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        let k3 = Graph::complete(3);
        assert_ne!(canonical_form(&p3).unwrap(), canonical_form(&k3).unwrap());
    }

    #[test]
    fn rejects_large_orders() {
        assert_eq!(
            canonical_form(&Graph::empty(25)).unwrap_err(),
            CanonError::TooLarge(25)
        );
        assert!(canonical_form(&Graph::empty(24)).is_ok());
    }

    #[test]
    fn symmetric_graphs_finish() {
        let k11_13 = Graph::from_pairs(
            24,
            &(0..11)
                .flat_map(|a| (11..24).map(move |b| (a, b)))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        for g in [Graph::empty(24), Graph::complete(24)] {
            let lab = canonical_labeling(&g).unwrap();
            assert!(lab.orbits().iter().all(|&r| r == 0));
        }
        let lab = canonical_labeling(&k11_13).unwrap();
        let expected: Vec<usize> = (0..24).map(|v| if v < 11 { 0 } else { 11 }).collect();
        assert_eq!(lab.orbits(), expected.as_slice());
    }

    #[test]
    fn invariant_under_random_relabelling() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..1000 {
            let n = rng.gen_range(0..=16);
            let p = rng.gen_range(0.0..1.0);
            let g = random_graph(&mut rng, n, p);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let h = g.permuted(&perm);
            assert_eq!(canonical_form(&g).unwrap(), canonical_form(&h).unwrap());
        }
    }

    #[test]
    fn orbits_match_exhaustive_automorphisms() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..150 {
            let n = rng.gen_range(1..=7);
            let p = rng.gen_range(0.0..1.0);
            let g = random_graph(&mut rng, n, p);
            let mut expected: Vec<usize> = (0..n).collect();
            let mut group = 0;
            for perm in all_perms(n) {
                if g.permuted(&perm) == g {
                    group += 1;
                    for v in 0..n {
                        let (a, b) = (expected[v], expected[perm[v]]);
                        let lo = a.min(b);
                        for r in expected.iter_mut() {
                            if *r == a || *r == b {
                                *r = lo;
                            }
                        }
                    }
                }
            }
            let lab = canonical_labeling(&g).unwrap();
            assert_eq!(lab.orbits(), expected.as_slice(), "{g:?}");
            for gen in lab.generators() {
                assert_eq!(g.permuted(&gen), g);
            }
            assert!(group >= 1);
        }
    }
}
