//! Homology ranks, filtration levels of classes and nonvanishing tests for
//! the cube complex.

use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Field, FieldKind, Rational, F2};
use crate::linalg::{PivotReducer, SparseVec};
use crate::reduce::CancelComplex;
use crate::resolution::{AnnularComplex, Grading, LeeChain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Differential {
    /// Khovanov's `∂`.
    Khovanov,
    /// Lee's `∂ + Φ`.
    Lee,
    /// The part of `∂` preserving the annular grading.
    AnnularKhovanov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Detail {
    I,
    IJ,
    IJK,
}

/// Homology dimensions keyed by `(i, j, k)`; gradings not resolved by
/// `detail` are stored as 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedDims {
    pub field: FieldKind,
    pub detail: Detail,
    pub dims: BTreeMap<(i32, i32, i32), usize>,
}

impl GradedDims {
    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn at_i(&self, i: i32) -> usize {
        self.dims.iter().filter(|(g, _)| g.0 == i).map(|(_, d)| d).sum()
    }

    pub fn get(&self, i: i32, j: i32, k: i32) -> usize {
        self.dims.get(&(i, j, k)).copied().unwrap_or(0)
    }

    /// Quantum grading to dimension at homological grading `i`.
    pub fn row(&self, i: i32) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for (g, d) in &self.dims {
            if g.0 == i {
                *out.entry(g.1).or_insert(0) += d;
            }
        }
        out
    }
}

/// Serialized as a flat list of cells, leaving out unresolved gradings.
impl Serialize for GradedDims {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Cell {
            i: i32,
            #[serde(skip_serializing_if = "Option::is_none")]
            j: Option<i32>,
            #[serde(skip_serializing_if = "Option::is_none")]
            k: Option<i32>,
            dim: usize,
        }
        let cells: Vec<Cell> = self
            .dims
            .iter()
            .map(|(&(i, j, k), &dim)| Cell {
                i,
                j: (self.detail != Detail::I).then_some(j),
                k: (self.detail == Detail::IJK).then_some(k),
                dim,
            })
            .collect();
        let mut st = s.serialize_struct("GradedDims", 4)?;
        st.serialize_field("field", &self.field)?;
        st.serialize_field("detail", &self.detail)?;
        st.serialize_field("dims", &cells)?;
        st.serialize_field("total", &self.total())?;
        st.end()
    }
}

/// Copies part of the cube complex into a cancellation workspace. Returns
/// the workspace and the map from cube generators to local indices.
pub(crate) fn workspace<F: Field>(
    c: &AnnularComplex,
    diff: Differential,
    strata: Option<(i32, i32)>,
) -> (CancelComplex<F>, Vec<usize>) {
    let keep = |i: i32| strata.is_none_or(|(lo, hi)| lo <= i && i <= hi);
    let mut local = vec![usize::MAX; c.len()];
    let mut gradings = Vec::new();
    for (g, gen) in c.generators().iter().enumerate() {
        if keep(gen.i) {
            local[g] = gradings.len();
            gradings.push(gen.grading());
        }
    }
    let mut w = CancelComplex::new(gradings);
    for (g, gen) in c.generators().iter().enumerate() {
        if local[g] == usize::MAX {
            continue;
        }
        let mut push = |row: &[(u32, i8)]| {
            for &(t, s) in row {
                let t = t as usize;
                if local[t] == usize::MAX {
                    continue;
                }
                if diff == Differential::AnnularKhovanov && c.generators()[t].k != gen.k {
                    continue;
                }
                w.add_entry(local[g], local[t], F::from_i64(s as i64));
            }
        };
        push(c.d_row(g));
        if diff == Differential::Lee {
            push(c.phi_row(g));
        }
    }
    (w, local)
}

fn check_detail(diff: Differential, detail: Detail) -> Result<()> {
    match (diff, detail) {
        (Differential::Lee, Detail::IJ | Detail::IJK) => Err(Error::Incompatible(
            "Lee homology is only graded by i".into(),
        )),
        (Differential::Khovanov, Detail::IJK) => Err(Error::Incompatible(
            "(i,j,k) gradings need the annular differential".into(),
        )),
        _ => Ok(()),
    }
}

fn dims_generic<F: Field>(c: &AnnularComplex, diff: Differential, detail: Detail, field: FieldKind) -> GradedDims {
    let (mut w, _) = workspace::<F>(c, diff, None);
    w.cancel_where(|_, _| true);
    debug_assert_eq!(w.entry_count(), 0);
    let mut dims = BTreeMap::new();
    for g in w.remaining() {
        let Grading { i, j, k } = w.grading(g);
        let key = match detail {
            Detail::I => (i, 0, 0),
            Detail::IJ => (i, j, 0),
            Detail::IJK => (i, j, k),
        };
        *dims.entry(key).or_insert(0) += 1;
    }
    GradedDims { field, detail, dims }
}

pub fn homology_dims(c: &AnnularComplex, diff: Differential, field: FieldKind, detail: Detail) -> Result<GradedDims> {
    check_detail(diff, detail)?;
    Ok(match field {
        FieldKind::Q => dims_generic::<Rational>(c, diff, detail, field),
        FieldKind::F2 => dims_generic::<F2>(c, diff, detail, field),
    })
}

/// `j - t k` on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationFunctional {
    pub t: Rational,
}

impl FiltrationFunctional {
    pub fn new(t: Rational) -> Result<Self> {
        if t.is_negative() || t > Rational::from_int(2) {
            return Err(Error::OutOfRange(format!("t = {t} outside [0, 2]")));
        }
        Ok(Self { t })
    }

    pub fn at(t: i64) -> Self {
        Self { t: Rational::from_int(t) }
    }

    pub fn value(&self, j: i32, k: i32) -> Rational {
        Rational::from_int(j as i64) - &self.t * &Rational::from_int(k as i64)
    }
}

/// A class `z` in degree 0 together with the boundaries from degree -1.
/// Generators carry `(j, k)`; columns are indexed by target generators.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelProblem<F> {
    pub source: Vec<(i32, i32)>,
    pub target: Vec<(i32, i32)>,
    pub columns: Vec<SparseVec<F>>,
    pub z: SparseVec<F>,
}

impl<F: Field> LevelProblem<F> {
    /// Every `(j, k)` pair that occurs, sources first.
    pub fn gradings(&self) -> impl Iterator<Item = (i32, i32)> + '_ {
        self.source.iter().chain(&self.target).copied()
    }
}

/// Maximises, over representatives of a class, the minimum of the
/// functional on the support.
pub trait FiltrationSolver<F: Field>: Send + Sync {
    fn name(&self) -> &'static str;

    /// `None` when the class is zero.
    fn level(&self, p: &LevelProblem<F>, phi: &FiltrationFunctional) -> Option<Rational>;
}

/// Column reduction with pivots at the lowest filtration value, then greedy
/// reduction of the class.
#[derive(Debug, Clone, Copy, Default)]
pub struct PivotReduction;

impl<F: Field> FiltrationSolver<F> for PivotReduction {
    fn name(&self) -> &'static str {
        "pivot-reduction"
    }

    fn level(&self, p: &LevelProblem<F>, phi: &FiltrationFunctional) -> Option<Rational> {
        let values: Vec<Rational> = p.target.iter().map(|&(j, k)| phi.value(j, k)).collect();
        let mut order: Vec<usize> = (0..p.target.len()).collect();
        order.sort_by(|&a, &b| values[a].cmp(&values[b]).then(a.cmp(&b)));
        // lowest value gets the largest position, so it is the pivot
        let n = order.len();
        let mut pos = vec![0; n];
        for (r, &g) in order.iter().enumerate() {
            pos[g] = n - 1 - r;
        }
        let remap = |v: &SparseVec<F>| v.filter_map_index(|g| Some(pos[g]));
        let mut red = PivotReducer::new();
        for col in &p.columns {
            red.insert(remap(col));
        }
        let z = red.reduce(remap(&p.z));
        z.pivot().map(|(q, _)| values[order[n - 1 - q]].clone())
    }
}

/// Walks the distinct filtration values upward, asking at each one whether
/// the part of the class below it is a boundary.
#[derive(Debug, Clone, Copy, Default)]
pub struct LevelSearch;

impl<F: Field> FiltrationSolver<F> for LevelSearch {
    fn name(&self) -> &'static str {
        "level-search"
    }

    fn level(&self, p: &LevelProblem<F>, phi: &FiltrationFunctional) -> Option<Rational> {
        let values: Vec<Rational> = p.target.iter().map(|&(j, k)| phi.value(j, k)).collect();
        let mut levels = values.clone();
        levels.sort();
        levels.dedup();
        let mut best: Option<Rational> = None;
        for lambda in levels {
            let below = |v: &SparseVec<F>| v.filter_map_index(|g| (values[g] < lambda).then_some(g));
            let mut red = PivotReducer::new();
            for col in &p.columns {
                red.insert(below(col));
            }
            if !red.contains(below(&p.z)) {
                return best;
            }
            best = Some(lambda);
        }
        // the whole class is a boundary
        let mut red = PivotReducer::new();
        for col in &p.columns {
            red.insert(col.clone());
        }
        if red.contains(p.z.clone()) {
            None
        } else {
            best
        }
    }
}

/// Builds the level problem for a `∂+Φ` cycle, after cancelling every entry
/// between generators with equal `(j, k)`.
pub fn level_problem<F: Field>(c: &AnnularComplex, z: &LeeChain) -> Result<LevelProblem<F>> {
    let zf = z.to_field::<F>();
    if !c.apply_lee(&zf).is_zero() {
        return Err(Error::NotACycle);
    }
    let i = z.i;
    let (mut w, local) = workspace::<F>(c, Differential::Lee, Some((i - 1, i + 1)));
    let zl = zf.filter_map_index(|g| Some(local[g]));
    let id = w.track(i, &zl);
    w.cancel_where(|a, b| a.j == b.j && a.k == b.k);
    let mut tpos = vec![usize::MAX; w.len()];
    let (mut source, mut target, mut src_ids) = (Vec::new(), Vec::new(), Vec::new());
    for g in w.remaining() {
        let gr = w.grading(g);
        if gr.i == i {
            tpos[g] = target.len();
            target.push((gr.j, gr.k));
        } else if gr.i == i - 1 {
            source.push((gr.j, gr.k));
            src_ids.push(g);
        }
    }
    let columns = src_ids
        .iter()
        .map(|&g| w.row(g).filter_map_index(|t| (tpos[t] != usize::MAX).then(|| tpos[t])))
        .collect();
    let z = w.chain(id).filter_map_index(|t| Some(tpos[t]));
    Ok(LevelProblem { source, target, columns, z })
}

/// Filtration level of the class of `z` with the default solver.
pub fn filtration_level(c: &AnnularComplex, z: &LeeChain, phi: &FiltrationFunctional) -> Result<Rational> {
    filtration_level_with(c, z, phi, &PivotReduction)
}

pub fn filtration_level_with(
    c: &AnnularComplex,
    z: &LeeChain,
    phi: &FiltrationFunctional,
    solver: &dyn FiltrationSolver<Rational>,
) -> Result<Rational> {
    let p = level_problem::<Rational>(c, z)?;
    solver.level(&p, phi).ok_or(Error::ZeroClass)
}

fn class_nonzero_generic<F: Field>(c: &AnnularComplex, z: &LeeChain, diff: Differential) -> Result<bool> {
    let i = z.i;
    let (mut w, local) = workspace::<F>(c, diff, Some((i - 1, i + 1)));
    let zl = z.to_field::<F>().filter_map_index(|g| Some(local[g]));
    let mut image = SparseVec::new();
    for (g, v) in zl.entries() {
        image = image.axpy(v, &w.row(*g));
    }
    if !image.is_zero() {
        return Err(Error::NotACycle);
    }
    let id = w.track(i, &zl);
    w.cancel_where(|_, _| true);
    Ok(!w.chain(id).is_zero())
}

/// Whether `z` is nonzero in homology for the chosen differential.
pub fn class_nonzero(c: &AnnularComplex, z: &LeeChain, diff: Differential, field: FieldKind) -> Result<bool> {
    match field {
        FieldKind::Q => class_nonzero_generic::<Rational>(c, z, diff),
        FieldKind::F2 => class_nonzero_generic::<F2>(c, z, diff),
    }
}
