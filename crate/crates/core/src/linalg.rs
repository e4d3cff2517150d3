//! Sparse vectors and pivot-column reduction over an exact field.
//!
//! A vector's pivot is its largest nonzero index. Callers pick the index
//! order so that the pivot is the entry they want eliminated first.

use rustc_hash::FxHashMap as HashMap;

use crate::field::Field;

/// Entries sorted by strictly increasing index, no explicit zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVec<F> {
    entries: Vec<(usize, F)>,
}

impl<F: Field> Default for SparseVec<F> {
    fn default() -> Self {
        Self { entries: Vec::new() }
    }
}

impl<F: Field> SparseVec<F> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds from unsorted entries, summing duplicates and dropping zeros.
    pub fn from_entries(mut entries: Vec<(usize, F)>) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut out: Vec<(usize, F)> = Vec::with_capacity(entries.len());
        for (i, c) in entries {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 = last.1.add(&c),
                _ => out.push((i, c)),
            }
        }
        out.retain(|e| !e.1.is_zero());
        Self { entries: out }
    }

    pub fn unit(i: usize) -> Self {
        Self { entries: vec![(i, F::one())] }
    }

    pub fn entries(&self) -> &[(usize, F)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, F)> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> F {
        match self.entries.binary_search_by_key(&i, |e| e.0) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => F::zero(),
        }
    }

    pub fn pivot(&self) -> Option<(usize, &F)> {
        self.entries.last().map(|(i, c)| (*i, c))
    }

    /// `self + scale * other`
    pub fn axpy(&self, scale: &F, other: &Self) -> Self {
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i >= a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, scale.mul(&b[j].1)));
                j += 1;
            } else {
                let c = a[i].1.add(&scale.mul(&b[j].1));
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Self { entries: out }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::new();
        }
        Self {
            entries: self.entries.iter().map(|(i, x)| (*i, x.mul(c))).collect(),
        }
    }

    /// Keeps the entries whose index passes `keep`, renumbered by `map`.
    pub fn filter_map_index(&self, mut f: impl FnMut(usize) -> Option<usize>) -> Self {
        Self::from_entries(
            self.entries
                .iter()
                .filter_map(|(i, c)| f(*i).map(|k| (k, c.clone())))
                .collect(),
        )
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> SparseVec<G> {
        SparseVec::from_entries(self.entries.iter().map(|(i, c)| (*i, f(c))).collect())
    }
}

/// Applies a column-major sparse matrix to a vector.
pub fn apply<F: Field>(columns: &[SparseVec<F>], v: &SparseVec<F>) -> SparseVec<F> {
    let mut acc: HashMap<usize, F> = HashMap::default();
    for (j, c) in v.entries() {
        for (i, a) in columns[*j].entries() {
            let e = acc.entry(*i).or_insert_with(F::zero);
            *e = e.add(&a.mul(c));
        }
    }
    SparseVec::from_entries(acc.into_iter().collect())
}

/// Incremental basis of a column space, reduced so that pivots are distinct.
#[derive(Debug, Clone)]
pub struct PivotReducer<F> {
    basis: Vec<SparseVec<F>>,
    /// combination of inserted vectors producing each basis vector
    history: Option<Vec<SparseVec<F>>>,
    by_pivot: HashMap<usize, usize>,
    inserted: usize,
}

impl<F: Field> PivotReducer<F> {
    pub fn new() -> Self {
        Self {
            basis: Vec::new(),
            history: None,
            by_pivot: HashMap::default(),
            inserted: 0,
        }
    }

    /// Also records, for every basis vector, which inserted vectors built it.
    pub fn tracking() -> Self {
        Self {
            history: Some(Vec::new()),
            ..Self::new()
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_pivot(&self, i: usize) -> bool {
        self.by_pivot.contains_key(&i)
    }

    /// Inserts a vector; returns whether it enlarged the span.
    pub fn insert(&mut self, v: SparseVec<F>) -> bool {
        let id = self.inserted;
        self.inserted += 1;
        let mut comb = self.history.as_ref().map(|_| SparseVec::unit(id));
        let v = self.reduce_inner(v, comb.as_mut());
        match v.pivot() {
            None => false,
            Some((p, _)) => {
                self.by_pivot.insert(p, self.basis.len());
                self.basis.push(v);
                if let (Some(h), Some(c)) = (self.history.as_mut(), comb) {
                    h.push(c);
                }
                true
            }
        }
    }

    fn reduce_inner(&self, mut v: SparseVec<F>, mut comb: Option<&mut SparseVec<F>>) -> SparseVec<F> {
        while let Some((p, c)) = v.pivot() {
            let Some(&b) = self.by_pivot.get(&p) else { break };
            let row = &self.basis[b];
            let factor = c.div(row.pivot().unwrap().1).neg();
            if let (Some(comb), Some(h)) = (comb.as_deref_mut(), self.history.as_ref()) {
                *comb = comb.axpy(&factor, &h[b]);
            }
            v = v.axpy(&factor, row);
        }
        v
    }

    /// Reduces `v` until its pivot is not a basis pivot.
    pub fn reduce(&self, v: SparseVec<F>) -> SparseVec<F> {
        self.reduce_inner(v, None)
    }

    pub fn contains(&self, v: SparseVec<F>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coefficients `c` over the inserted vectors with `Σ c_i v_i = target`,
    /// if `target` is in the span. Requires a tracking reducer.
    pub fn solve(&self, target: SparseVec<F>) -> Option<SparseVec<F>> {
        let history = self.history.as_ref().expect("solve needs a tracking reducer");
        let mut v = target;
        let mut comb = SparseVec::new();
        while let Some((p, c)) = v.pivot() {
            let &b = self.by_pivot.get(&p)?;
            let row = &self.basis[b];
            let factor = c.div(row.pivot().unwrap().1);
            comb = comb.axpy(&factor, &history[b]);
            v = v.axpy(&factor.neg(), row);
        }
        Some(comb)
    }
}

impl<F: Field> Default for PivotReducer<F> {
    fn default() -> Self {
        Self::new()
    }
}

pub fn rank<F: Field>(columns: impl IntoIterator<Item = SparseVec<F>>) -> usize {
    let mut r = PivotReducer::new();
    for c in columns {
        r.insert(c);
    }
    r.rank()
}
