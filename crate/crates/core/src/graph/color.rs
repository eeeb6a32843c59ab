//! Exact vertex colouring by DSATUR-ordered backtracking.

use super::Graph;

struct Colorer<'a> {
    g: &'a Graph,
    k: usize,
    color: Vec<Option<usize>>,
    // neighbour_colors[v][c] = number of coloured neighbours of v using c
    neighbour_colors: Vec<Vec<u32>>,
    saturation: Vec<usize>,
}

impl<'a> Colorer<'a> {
    fn new(g: &'a Graph, k: usize) -> Self {
        let n = g.order();
        Self {
            g,
            k,
            color: vec![None; n],
            neighbour_colors: vec![vec![0; k]; n],
            saturation: vec![0; n],
        }
    }

    fn assign(&mut self, v: usize, c: usize) {
        self.color[v] = Some(c);
        for u in self.g.neighbors(v) {
            let slot = &mut self.neighbour_colors[u][c];
            if *slot == 0 {
                self.saturation[u] += 1;
            }
            *slot += 1;
        }
    }

    fn unassign(&mut self, v: usize, c: usize) {
        self.color[v] = None;
        for u in self.g.neighbors(v) {
            let slot = &mut self.neighbour_colors[u][c];
            *slot -= 1;
            if *slot == 0 {
                self.saturation[u] -= 1;
            }
        }
    }

    /// Uncoloured vertex of maximum saturation, ties by uncoloured degree, then index.
    fn pick(&self) -> Option<usize> {
        let mut best: Option<(usize, usize, usize)> = None;
        for v in 0..self.g.order() {
            if self.color[v].is_some() {
                continue;
            }
            let free_deg = self
                .g
                .neighbors(v)
                .filter(|&u| self.color[u].is_none())
                .count();
            let key = (self.saturation[v], free_deg);
            if best.is_none_or(|(s, d, _)| key > (s, d)) {
                best = Some((key.0, key.1, v));
            }
        }
        best.map(|(_, _, v)| v)
    }

    fn solve(&mut self, used: usize) -> bool {
        let Some(v) = self.pick() else {
            return true;
        };
        if self.saturation[v] >= self.k {
            return false;
        }
        // New colours are opened in increasing index, one at a time.
        let limit = (used + 1).min(self.k);
        for c in 0..limit {
            if self.neighbour_colors[v][c] != 0 {
                continue;
            }
            self.assign(v, c);
            if self.solve(used.max(c + 1)) {
                return true;
            }
            self.unassign(v, c);
        }
        false
    }
}

/// Whether `g` has a proper colouring with at most `k` colours.
pub fn is_k_colorable(g: &Graph, k: usize) -> bool {
    let n = g.order();
    if n == 0 {
        return true;
    }
    if k == 0 {
        return false;
    }
    if k >= n {
        return true;
    }
    if k == 1 {
        return g.size() == 0;
    }
    if k == 2 {
        return g.is_bipartite();
    }
    let mut colorer = Colorer::new(g, k);
    colorer.solve(0)
}

/// Least `k` with `is_k_colorable(g, k)`, searched upward from a clique bound.
pub fn chromatic_number(g: &Graph) -> usize {
    let n = g.order();
    if n == 0 {
        return 0;
    }
    let mut k = if g.size() == 0 {
        1
    } else if g.is_triangle_free() {
        2
    } else {
        3
    };
    while !is_k_colorable(g, k) {
        k += 1;
    }
    k
}
