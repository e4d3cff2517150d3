//! Khovanov homology ranks by scanning a braid crossing by crossing in
//! Bar-Natan's cobordism category.
//!
//! Each partial braid gives a complex of crossingless tangles. After every
//! tensor step circles are delooped and isomorphisms eliminated, which keeps
//! the complex small. At the end the tangle is closed up, delooped into
//! empty diagrams, and eliminated until the differential vanishes; what is
//! left counts the homology.
//!
//! Objects are disk tangles only: the annular winding of circles is not
//! tracked, so this backend only produces `(i, j)` ranks.

mod cobordism;
mod tangle;

use std::collections::{BTreeMap, BTreeSet};

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::field::{Field, FieldKind, Rational, F2};
use crate::homology::{Detail, GradedDims};

pub use cobordism::{cap_last, close, compose, cup_last, stack, FormalMorphism};
pub use tangle::{loops, Diagram, Glued};

pub const DEFAULT_OBJECT_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormalObject {
    pub diagram: Diagram,
    /// Quantum shift.
    pub q: i32,
    /// Homological position.
    pub h: i32,
}

/// A complex over the cobordism category. Removed objects leave holes
/// until [`FormalComplex::compact`] is called.
#[derive(Debug, Clone)]
pub struct FormalComplex<F> {
    strands: usize,
    objects: Vec<FormalObject>,
    alive: Vec<bool>,
    out: Vec<BTreeMap<usize, FormalMorphism<F>>>,
    inc: Vec<BTreeSet<usize>>,
}

impl<F: Field> FormalComplex<F> {
    pub fn new(strands: usize) -> Self {
        Self {
            strands,
            objects: Vec::new(),
            alive: Vec::new(),
            out: Vec::new(),
            inc: Vec::new(),
        }
    }

    /// The trivial tangle: one object, no differential.
    pub fn identity(strands: usize) -> Self {
        let mut c = Self::new(strands);
        c.add_object(FormalObject {
            diagram: Diagram::identity(strands),
            q: 0,
            h: 0,
        });
        c
    }

    /// The two-term complex of `σ_i` (`letter = i`) or its inverse (`-i`).
    pub fn crossing(strands: usize, letter: i32) -> Self {
        let mut c = Self::new(strands);
        let id = Diagram::identity(strands);
        let cc = Diagram::cup_cap(strands, letter.unsigned_abs() as usize - 1);
        let (first, second) = if letter > 0 {
            ((id, 1, 0), (cc, 2, 1))
        } else {
            ((cc, -2, -1), (id, -1, 0))
        };
        let a = c.add_object(FormalObject {
            diagram: first.0,
            q: first.1,
            h: first.2,
        });
        let b = c.add_object(FormalObject {
            diagram: second.0,
            q: second.1,
            h: second.2,
        });
        c.add_entry(a, b, FormalMorphism::undotted());
        c
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn add_object(&mut self, o: FormalObject) -> usize {
        self.objects.push(o);
        self.alive.push(true);
        self.out.push(BTreeMap::new());
        self.inc.push(BTreeSet::new());
        self.objects.len() - 1
    }

    pub fn object(&self, x: usize) -> &FormalObject {
        &self.objects[x]
    }

    /// Live object indices.
    pub fn objects(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.objects.len()).filter(|&x| self.alive[x])
    }

    pub fn object_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    pub fn entry_count(&self) -> usize {
        self.out.iter().map(|r| r.len()).sum()
    }

    pub fn entry(&self, from: usize, to: usize) -> Option<&FormalMorphism<F>> {
        self.out[from].get(&to)
    }

    pub fn entries_from(&self, from: usize) -> impl Iterator<Item = (usize, &FormalMorphism<F>)> {
        self.out[from].iter().map(|(t, m)| (*t, m))
    }

    /// Adds `m` to the entry `from -> to`.
    pub fn add_entry(&mut self, from: usize, to: usize, m: FormalMorphism<F>) {
        let sum = match self.out[from].remove(&to) {
            Some(old) => old.add(&m),
            None => m,
        };
        if sum.is_zero() {
            self.inc[to].remove(&from);
        } else {
            self.out[from].insert(to, sum);
            self.inc[to].insert(from);
        }
    }

    fn remove_object(&mut self, x: usize) {
        for t in std::mem::take(&mut self.out[x]).into_keys() {
            self.inc[t].remove(&x);
        }
        for s in std::mem::take(&mut self.inc[x]) {
            self.out[s].remove(&x);
        }
        self.alive[x] = false;
    }

    /// Renumbers live objects densely, keeping their order.
    pub fn compact(&mut self) {
        let mut map = vec![usize::MAX; self.objects.len()];
        let mut next = Self::new(self.strands);
        for x in self.objects() {
            map[x] = next.add_object(self.objects[x].clone());
        }
        for x in 0..self.objects.len() {
            if self.alive[x] {
                for (t, m) in &self.out[x] {
                    next.add_entry(map[x], map[*t], m.clone());
                }
            }
        }
        *self = next;
    }

    /// `self ⊗ above`: the tangle of `above` is stacked on top of `self`.
    /// Objects may contain closed circles afterwards.
    pub fn tensor(&self, above: &Self) -> Self {
        debug_assert_eq!(self.strands, above.strands);
        let mut c = Self::new(self.strands);
        let mut index = BTreeMap::new();
        for a in self.objects() {
            for b in above.objects() {
                let (oa, ob) = (&self.objects[a], &above.objects[b]);
                let x = c.add_object(FormalObject {
                    diagram: oa.diagram.stack(&ob.diagram).diagram,
                    q: oa.q + ob.q,
                    h: oa.h + ob.h,
                });
                index.insert((a, b), x);
            }
        }
        for a in self.objects() {
            let da = &self.objects[a].diagram;
            let sign = if self.objects[a].h.rem_euclid(2) == 0 {
                F::one()
            } else {
                F::one().neg()
            };
            let ida = FormalMorphism::identity(da);
            for b in above.objects() {
                let db = &above.objects[b].diagram;
                let idb = FormalMorphism::identity(db);
                for (a2, f) in &self.out[a] {
                    let da2 = &self.objects[*a2].diagram;
                    let m = stack(f, da, da2, &idb, db, db);
                    c.add_entry(index[&(a, b)], index[&(*a2, b)], m);
                }
                for (b2, g) in &above.out[b] {
                    let db2 = &above.objects[*b2].diagram;
                    let m = stack(&ida, da, da, g, db, db2).scale(&sign);
                    c.add_entry(index[&(a, b)], index[&(a, *b2)], m);
                }
            }
        }
        c
    }

    /// Closes every tangle up as a braid closure.
    pub fn close(&self) -> Self {
        let mut c = Self::new(0);
        let mut index = vec![usize::MAX; self.objects.len()];
        for x in self.objects() {
            let o = &self.objects[x];
            index[x] = c.add_object(FormalObject {
                diagram: o.diagram.closure().diagram,
                q: o.q,
                h: o.h,
            });
        }
        for x in self.objects() {
            for (t, m) in &self.out[x] {
                let closed = close(m, &self.objects[x].diagram, &self.objects[*t].diagram);
                c.add_entry(index[x], index[*t], closed);
            }
        }
        c
    }

    /// Replaces every object containing a circle by two copies without it,
    /// shifted by `+1` and `-1` in quantum grading.
    pub fn deloop(&mut self) {
        let mut todo: Vec<usize> = self.objects().filter(|&x| self.objects[x].diagram.circles() > 0).collect();
        while let Some(x) = todo.pop() {
            let o = self.objects[x].clone();
            let d = &o.diagram;
            let smaller = d.with_circles(d.circles() - 1);
            let mut copies = [0; 2];
            for (slot, shift) in [1, -1].into_iter().enumerate() {
                copies[slot] = self.add_object(FormalObject {
                    diagram: smaller.clone(),
                    q: o.q + shift,
                    h: o.h,
                });
            }
            // the +1 copy pairs with a dotted cap and a plain cup
            let caps = [cap_last::<F>(d, true), cap_last::<F>(d, false)];
            let cups = [cup_last::<F>(d, false), cup_last::<F>(d, true)];
            let sources: Vec<usize> = self.inc[x].iter().copied().collect();
            for s in sources {
                let m = self.out[s][&x].clone();
                let ds = self.objects[s].diagram.clone();
                for slot in 0..2 {
                    let new = compose(&m, &ds, d, &caps[slot], &smaller);
                    self.add_entry(s, copies[slot], new);
                }
            }
            let targets: Vec<(usize, FormalMorphism<F>)> =
                self.out[x].iter().map(|(t, m)| (*t, m.clone())).collect();
            for (t, m) in targets {
                let dt = self.objects[t].diagram.clone();
                for slot in 0..2 {
                    let new = compose(&cups[slot], &smaller, d, &m, &dt);
                    self.add_entry(copies[slot], t, new);
                }
            }
            self.remove_object(x);
            if smaller.circles() > 0 {
                todo.extend(copies);
            }
        }
    }

    /// An entry that is an invertible multiple of an identity cobordism.
    fn is_isomorphism(&self, from: usize, to: usize, m: &FormalMorphism<F>) -> bool {
        let (a, b) = (&self.objects[from], &self.objects[to]);
        a.q == b.q && a.diagram == b.diagram && a.diagram.circles() == 0 && m.as_scalar().is_some()
    }

    /// Cancels one isomorphism `x -> y`, correcting the other entries by
    /// `-δ φ⁻¹ γ`.
    fn eliminate(&mut self, x: usize, y: usize) {
        let inv = self.out[x][&y].as_scalar().expect("isomorphism entry").inv();
        let dy = self.objects[y].diagram.clone();
        let sources: Vec<(usize, FormalMorphism<F>)> = self.inc[y]
            .iter()
            .filter(|&&w| w != x)
            .map(|&w| (w, self.out[w][&y].clone()))
            .collect();
        let targets: Vec<(usize, FormalMorphism<F>)> = self.out[x]
            .iter()
            .filter(|(&z, _)| z != y)
            .map(|(&z, m)| (z, m.clone()))
            .collect();
        for (w, gamma) in &sources {
            let dw = self.objects[*w].diagram.clone();
            for (z, delta) in &targets {
                let dz = &self.objects[*z].diagram;
                let m = compose(gamma, &dw, &dy, delta, dz).scale(&inv.neg());
                self.add_entry(*w, *z, m);
            }
        }
        self.remove_object(x);
        self.remove_object(y);
    }

    /// Eliminates isomorphism entries until none remain, cheapest first.
    /// Returns the number of eliminations.
    pub fn gauss_eliminate(&mut self) -> usize {
        let mut count = 0;
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for x in self.objects() {
                for (&y, m) in &self.out[x] {
                    if !self.is_isomorphism(x, y, m) {
                        continue;
                    }
                    let cost = self.out[x].len() + self.inc[y].len();
                    if best.is_none_or(|b| cost < b.0) {
                        best = Some((cost, x, y));
                    }
                }
            }
            match best {
                Some((_, x, y)) => {
                    self.eliminate(x, y);
                    count += 1;
                }
                None => return count,
            }
        }
    }
}

/// Removes all closed circles by delooping. Homotopy type is preserved.
pub fn deloop<F: Field>(mut c: FormalComplex<F>) -> FormalComplex<F> {
    c.deloop();
    c.compact();
    c
}

/// Eliminates every isomorphism entry. Homotopy type is preserved.
pub fn gauss_eliminate<F: Field>(mut c: FormalComplex<F>) -> FormalComplex<F> {
    c.gauss_eliminate();
    c.compact();
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    /// Largest number of objects allowed at any moment.
    pub object_cap: usize,
    /// Split the word in halves recursively instead of folding left to right.
    pub balanced: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            object_cap: DEFAULT_OBJECT_CAP,
            balanced: false,
        }
    }
}

/// Sizes after each simplification step, for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepStats {
    pub objects: usize,
    pub entries: usize,
}

struct Scanner {
    opts: ScanOptions,
    steps: Vec<StepStats>,
}

impl Scanner {
    fn check<F: Field>(&self, c: &FormalComplex<F>) -> Result<()> {
        let n = c.object_count();
        if n > self.opts.object_cap {
            return Err(Error::LimitExceeded {
                what: "object count",
                actual: n,
                limit: self.opts.object_cap,
            });
        }
        Ok(())
    }

    fn simplify<F: Field>(&mut self, mut c: FormalComplex<F>) -> Result<FormalComplex<F>> {
        self.check(&c)?;
        c.deloop();
        self.check(&c)?;
        c.gauss_eliminate();
        c.compact();
        self.steps.push(StepStats {
            objects: c.object_count(),
            entries: c.entry_count(),
        });
        Ok(c)
    }

    fn fold<F: Field>(&mut self, strands: usize, letters: &[i32]) -> Result<FormalComplex<F>> {
        let mut acc = FormalComplex::identity(strands);
        for &l in letters {
            acc = self.simplify(acc.tensor(&FormalComplex::crossing(strands, l)))?;
        }
        Ok(acc)
    }

    fn halves<F: Field>(&mut self, strands: usize, letters: &[i32]) -> Result<FormalComplex<F>> {
        if letters.len() <= 1 {
            return self.fold(strands, letters);
        }
        let (lo, hi) = letters.split_at(letters.len() / 2);
        let a = self.halves(strands, lo)?;
        let b = self.halves(strands, hi)?;
        self.simplify(a.tensor(&b))
    }
}

/// The simplified tangle complex of `w` and the size after every step.
pub fn scan_complex_with<F: Field>(w: &BraidWord, opts: &ScanOptions) -> Result<(FormalComplex<F>, Vec<StepStats>)> {
    let mut s = Scanner {
        opts: *opts,
        steps: Vec::new(),
    };
    let c = if opts.balanced {
        s.halves(w.strands(), w.letters())?
    } else {
        s.fold(w.strands(), w.letters())?
    };
    Ok((c, s.steps))
}

pub fn scan_complex(w: &BraidWord) -> Result<FormalComplex<Rational>> {
    Ok(scan_complex_with(w, &ScanOptions::default())?.0)
}

fn dims_over<F: Field>(w: &BraidWord, opts: &ScanOptions, field: FieldKind, detail: Detail) -> Result<GradedDims> {
    let (c, _) = scan_complex_with::<F>(w, opts)?;
    let mut s = Scanner {
        opts: *opts,
        steps: Vec::new(),
    };
    let closed = s.simplify(c.close())?;
    if closed.entry_count() != 0 {
        return Err(Error::Internal("closed complex kept a nonzero differential".into()));
    }
    let mut dims = BTreeMap::new();
    for x in closed.objects() {
        let o = closed.object(x);
        let key = match detail {
            Detail::I => (o.h, 0, 0),
            _ => (o.h, o.q, 0),
        };
        *dims.entry(key).or_insert(0) += 1;
    }
    Ok(GradedDims { field, detail, dims })
}

/// Khovanov homology ranks of the closure of `w`, graded by `(i, j)`.
pub fn scan_kh_dims(w: &BraidWord) -> Result<GradedDims> {
    scan_kh_dims_with(w, &ScanOptions::default(), FieldKind::Q, Detail::IJ)
}

pub fn scan_kh_dims_with(w: &BraidWord, opts: &ScanOptions, field: FieldKind, detail: Detail) -> Result<GradedDims> {
    if detail == Detail::IJK {
        return Err(Error::Incompatible(
            "the scanner works with disk tangles and has no annular grading".into(),
        ));
    }
    match field {
        FieldKind::Q => dims_over::<Rational>(w, opts, field, detail),
        FieldKind::F2 => dims_over::<F2>(w, opts, field, detail),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{homology_dims, Differential};
    use crate::resolution::build_cube;

    fn word(s: &str) -> BraidWord {
        BraidWord::parse(s).unwrap()
    }

    fn cube_dims(w: &BraidWord, field: FieldKind) -> GradedDims {
        homology_dims(&build_cube(w).unwrap(), Differential::Khovanov, field, Detail::IJ).unwrap()
    }

    #[test]
    fn deloop_single_circle() {
        let mut c = FormalComplex::<Rational>::new(0);
        c.add_object(FormalObject {
            diagram: Diagram::from_pairs(Vec::new(), 1),
            q: 0,
            h: 0,
        });
        let c = deloop(c);
        let mut shifts: Vec<i32> = c.objects().map(|x| c.object(x).q).collect();
        shifts.sort();
        assert_eq!(shifts, vec![-1, 1]);
        assert!(c.objects().all(|x| c.object(x).diagram.circles() == 0));
    }

    #[test]
    fn deloop_without_circles_is_identity() {
        let c = FormalComplex::<Rational>::crossing(3, 1);
        let d = deloop(c.clone());
        assert_eq!(d.object_count(), 2);
        assert_eq!(d.entry(0, 1), c.entry(0, 1));
    }

    #[test]
    fn identity_pair_eliminates() {
        let mut c = FormalComplex::<Rational>::new(2);
        let o = |h| FormalObject {
            diagram: Diagram::identity(2),
            q: 0,
            h,
        };
        let a = c.add_object(o(0));
        let b = c.add_object(o(1));
        c.add_entry(a, b, FormalMorphism::undotted());
        assert_eq!(gauss_eliminate(c).object_count(), 0);
    }

    #[test]
    fn single_crossing() {
        let c = scan_complex(&word("2: 1")).unwrap();
        assert_eq!(c.object_count(), 2);
        assert!(c.objects().all(|x| c.object(x).diagram.circles() == 0));
        let unknot = scan_kh_dims(&word("2: 1")).unwrap();
        assert_eq!(unknot.dims, BTreeMap::from([((0, -1, 0), 1), ((0, 1, 0), 1)]));
    }

    #[test]
    fn sigma2_squared_half() {
        // tensoring two crossings gives four objects; one deloops into two
        // and one isomorphism is eliminated, leaving three
        let (c, steps) = scan_complex_with::<Rational>(&word("3: 2 2"), &ScanOptions::default()).unwrap();
        assert_eq!(c.object_count(), 3);
        assert_eq!(steps.len(), 2);
        let mut hs: Vec<i32> = c.objects().map(|x| c.object(x).h).collect();
        hs.sort();
        assert_eq!(hs, vec![0, 1, 2]);
    }

    #[test]
    fn headline_row() {
        let w = word("3: -1 -2 -1 -2 -1 -2 2 2 2 2");
        let d = scan_kh_dims(&w).unwrap();
        assert_eq!(d.row(0), BTreeMap::from([(-3, 1), (-1, 3), (1, 2)]));
        assert_eq!(d, cube_dims(&w, FieldKind::Q));
    }

    #[test]
    fn balanced_split_agrees() {
        for s in ["3: -1 -2 -2 -1 2 2", "4: 1 -2 3 -1 2 -3 1", "2: 1 1 1"] {
            let w = word(s);
            let opts = ScanOptions {
                balanced: true,
                ..ScanOptions::default()
            };
            let b = scan_kh_dims_with(&w, &opts, FieldKind::Q, Detail::IJ).unwrap();
            assert_eq!(b, scan_kh_dims(&w).unwrap(), "{s}");
        }
    }

    #[test]
    fn matches_cube_on_small_words() {
        for s in ["3: 1 2 1 2", "3: 1 -2 1 -2", "4: 1 2 3 1 2 3", "2: -1 -1 -1 -1", "3: 1 1 2 -1 2", "1:", "3:"] {
            let w = word(s);
            assert_eq!(scan_kh_dims(&w).unwrap(), cube_dims(&w, FieldKind::Q), "{s}");
        }
    }

    #[test]
    fn f2_torsion() {
        // the trefoil has 2-torsion, so F2 ranks differ from Q ranks
        let w = word("2: 1 1 1");
        let f2 = scan_kh_dims_with(&w, &ScanOptions::default(), FieldKind::F2, Detail::IJ).unwrap();
        assert_eq!(f2, cube_dims(&w, FieldKind::F2));
        assert_ne!(f2.total(), scan_kh_dims(&w).unwrap().total());
    }

    #[test]
    fn cap_is_enforced() {
        let opts = ScanOptions {
            object_cap: 3,
            balanced: false,
        };
        let err = scan_kh_dims_with(&word("3: 1 2 1 2"), &opts, FieldKind::Q, Detail::IJ).unwrap_err();
        assert!(matches!(err, Error::LimitExceeded { .. }));
    }
}
