//! Named strategies, selectable at run time: homology backends and
//! filtration-level solvers.

use std::collections::BTreeMap;

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::field::{FieldKind, Rational};
use crate::homology::{homology_dims, Detail, Differential, FiltrationSolver, GradedDims, LevelSearch, PivotReduction};
use crate::resolution::{build_cube_with_limit, DEFAULT_CROSSING_LIMIT};
use crate::scanner::{scan_kh_dims_with, ScanOptions};

/// Something that computes Khovanov homology ranks of a braid closure.
pub trait KhBackend: Send + Sync {
    fn name(&self) -> &'static str;

    fn kh_dims(&self, w: &BraidWord, field: FieldKind, detail: Detail) -> Result<GradedDims>;
}

/// The full cube of resolutions. `(i, j, k)` detail uses the annular part
/// of the differential.
#[derive(Debug, Clone, Copy)]
pub struct CubeBackend {
    pub crossing_limit: usize,
}

impl Default for CubeBackend {
    fn default() -> Self {
        Self {
            crossing_limit: DEFAULT_CROSSING_LIMIT,
        }
    }
}

impl KhBackend for CubeBackend {
    fn name(&self) -> &'static str {
        "cube"
    }

    fn kh_dims(&self, w: &BraidWord, field: FieldKind, detail: Detail) -> Result<GradedDims> {
        let c = build_cube_with_limit(w, self.crossing_limit)?;
        let diff = if detail == Detail::IJK {
            Differential::AnnularKhovanov
        } else {
            Differential::Khovanov
        };
        homology_dims(&c, diff, field, detail)
    }
}

/// Tangle scanning in the cobordism category.
#[derive(Debug, Clone, Copy, Default)]
pub struct ScanBackend {
    pub options: ScanOptions,
}

impl KhBackend for ScanBackend {
    fn name(&self) -> &'static str {
        "scan"
    }

    fn kh_dims(&self, w: &BraidWord, field: FieldKind, detail: Detail) -> Result<GradedDims> {
        scan_kh_dims_with(w, &self.options, field, detail)
    }
}

pub struct Registry {
    backends: BTreeMap<&'static str, Box<dyn KhBackend>>,
    solvers: BTreeMap<&'static str, Box<dyn FiltrationSolver<Rational>>>,
}

impl Registry {
    pub fn empty() -> Self {
        Self {
            backends: BTreeMap::new(),
            solvers: BTreeMap::new(),
        }
    }

    pub fn register_backend(&mut self, b: Box<dyn KhBackend>) {
        self.backends.insert(b.name(), b);
    }

    pub fn register_solver(&mut self, s: Box<dyn FiltrationSolver<Rational>>) {
        self.solvers.insert(s.name(), s);
    }

    pub fn backend(&self, name: &str) -> Result<&dyn KhBackend> {
        self.backends
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::UnknownStrategy(name.to_string()))
    }

    pub fn solver(&self, name: &str) -> Result<&dyn FiltrationSolver<Rational>> {
        self.solvers
            .get(name)
            .map(|s| s.as_ref())
            .ok_or_else(|| Error::UnknownStrategy(name.to_string()))
    }

    pub fn backend_names(&self) -> Vec<&'static str> {
        self.backends.keys().copied().collect()
    }

    pub fn solver_names(&self) -> Vec<&'static str> {
        self.solvers.keys().copied().collect()
    }
}

impl Default for Registry {
    /// `cube` and `scan` backends; `pivot-reduction` and `level-search` solvers.
    fn default() -> Self {
        let mut r = Self::empty();
        r.register_backend(Box::new(CubeBackend::default()));
        r.register_backend(Box::new(ScanBackend::default()));
        r.register_solver(Box::new(PivotReduction));
        r.register_solver(Box::new(LevelSearch));
        r
    }
}
