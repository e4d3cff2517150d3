//! Gaussian elimination of invertible differential entries, with optional
//! tracking of chains through the homotopy equivalence.
//!
//! Cancelling an entry `x -> y` with coefficient `c` removes `x` and `y` and
//! replaces every entry `w -> z` by `w -> z - D(w,y) D(x,z) / c`. A tracked
//! chain in the degree of `y` is mapped to `z - (z_y / c) D(x)`; a chain in
//! the degree of `x` just loses its `x` component. When only entries between
//! generators of equal filtration are cancelled, both the complex and these
//! maps stay filtered, so filtration levels of classes are preserved.

use rustc_hash::FxHashMap as HashMap;

use crate::field::Field;
use crate::linalg::SparseVec;
use crate::resolution::Grading;

/// Rows stay short during cancellation, so they are plain vectors searched
/// linearly.
#[derive(Debug, Clone)]
pub struct CancelComplex<F> {
    gradings: Vec<Grading>,
    alive: Vec<bool>,
    out: Vec<Vec<(usize, F)>>,
    inc: Vec<Vec<usize>>,
    chains: Vec<(i32, HashMap<usize, F>)>,
}

fn remove_item(v: &mut Vec<usize>, x: usize) {
    if let Some(p) = v.iter().position(|&y| y == x) {
        v.swap_remove(p);
    }
}

impl<F: Field> CancelComplex<F> {
    pub fn new(gradings: Vec<Grading>) -> Self {
        let n = gradings.len();
        Self {
            gradings,
            alive: vec![true; n],
            out: vec![Vec::new(); n],
            inc: vec![Vec::new(); n],
            chains: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.gradings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gradings.is_empty()
    }

    pub fn grading(&self, g: usize) -> Grading {
        self.gradings[g]
    }

    /// Adds `coeff` to the entry `from -> to`.
    pub fn add_entry(&mut self, from: usize, to: usize, coeff: F) {
        let row = &mut self.out[from];
        match row.iter().position(|e| e.0 == to) {
            Some(p) => {
                let v = row[p].1.add(&coeff);
                if v.is_zero() {
                    row.swap_remove(p);
                    remove_item(&mut self.inc[to], from);
                } else {
                    row[p].1 = v;
                }
            }
            None => {
                if !coeff.is_zero() {
                    row.push((to, coeff));
                    self.inc[to].push(from);
                }
            }
        }
    }

    /// Starts tracking a chain living in homological degree `i`.
    pub fn track(&mut self, i: i32, chain: &SparseVec<F>) -> usize {
        let map = chain.entries().iter().cloned().collect();
        self.chains.push((i, map));
        self.chains.len() - 1
    }

    pub fn chain(&self, id: usize) -> SparseVec<F> {
        SparseVec::from_entries(self.chains[id].1.iter().map(|(g, c)| (*g, c.clone())).collect())
    }

    pub fn is_alive(&self, g: usize) -> bool {
        self.alive[g]
    }

    pub fn remaining(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&g| self.alive[g])
    }

    /// Entries of `D(g)`, sorted by target.
    pub fn row(&self, g: usize) -> SparseVec<F> {
        SparseVec::from_entries(self.out[g].clone())
    }

    pub fn entry_count(&self) -> usize {
        self.out.iter().map(|r| r.len()).sum()
    }

    fn cancel(&mut self, x: usize, y: usize) {
        let dx = self.out[x].clone();
        let c = dx.iter().find(|e| e.0 == y).expect("cancelled entry exists").1.clone();
        let (ix, iy) = (self.gradings[x].i, self.gradings[y].i);
        for (deg, chain) in &mut self.chains {
            if *deg == iy {
                if let Some(zy) = chain.get(&y).cloned() {
                    let f = zy.div(&c).neg();
                    for (t, v) in &dx {
                        let e = chain.entry(*t).or_insert_with(F::zero);
                        *e = e.add(&f.mul(v));
                        if e.is_zero() {
                            chain.remove(t);
                        }
                    }
                    chain.remove(&y);
                }
            } else if *deg == ix {
                chain.remove(&x);
            }
        }
        let sources: Vec<usize> = self.inc[y].iter().copied().filter(|&w| w != x).collect();
        for w in sources {
            let a = self.out[w].iter().find(|e| e.0 == y).expect("incoming entry exists").1.clone();
            let f = a.div(&c).neg();
            for (t, b) in &dx {
                if *t != y {
                    self.add_entry(w, *t, f.mul(b));
                }
            }
        }
        for g in [x, y] {
            for (t, _) in std::mem::take(&mut self.out[g]) {
                remove_item(&mut self.inc[t], g);
            }
            for s in std::mem::take(&mut self.inc[g]) {
                self.out[s].retain(|e| e.0 != g);
            }
            self.alive[g] = false;
        }
    }

    /// Cancels entries accepted by `allow(source, target)` until none remain.
    /// Among the candidates of a source, the target with the fewest incoming
    /// entries goes first.
    pub fn cancel_where(&mut self, allow: impl Fn(&Grading, &Grading) -> bool) -> usize {
        let mut total = 0;
        loop {
            let mut changed = 0;
            for x in 0..self.len() {
                while self.alive[x] {
                    let gx = self.gradings[x];
                    let best = self.out[x]
                        .iter()
                        .map(|e| e.0)
                        .filter(|&y| allow(&gx, &self.gradings[y]))
                        .min_by_key(|&y| (self.inc[y].len(), y));
                    match best {
                        Some(y) => {
                            self.cancel(x, y);
                            changed += 1;
                        }
                        None => break,
                    }
                }
            }
            total += changed;
            if changed == 0 {
                return total;
            }
        }
    }
}
