//! Enumeration of the shapes a `d_t` or Υ function can take.
//!
//! A shape is a path along an arrangement of candidate lines, switching
//! lines only where two of them cross, moving forward in `t`. For `d_t`
//! the path lives in the triangle under the two lines through `(1, 0)` of
//! slopes `n` and `-n+2` and must end at `(1, 0)`; corners where the slope
//! goes up between lines of different quantum classes are discarded when no
//! third line passes through the corner. For Υ the path starts at the origin
//! and stays in the cone `|y| <= c t`.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Rational;
use crate::pl::PLFunction;

pub const DEFAULT_STRANDS_CAP: usize = 8;
pub const DEFAULT_GENUS_CAP: usize = 6;

/// The line `y = j0 + slope * t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LineSpec {
    pub j0: i32,
    pub slope: i32,
    /// `j0 mod 4` collapsed to two classes; absent for Υ lines.
    pub subcomplex: Option<u8>,
}

impl LineSpec {
    pub fn dt(j0: i32, slope: i32) -> Self {
        Self {
            j0,
            slope,
            subcomplex: Some(u8::from(j0.rem_euclid(4) >= 2)),
        }
    }

    pub fn plain(j0: i32, slope: i32) -> Self {
        Self {
            j0,
            slope,
            subcomplex: None,
        }
    }

    pub fn at(&self, t: &Rational) -> Rational {
        &Rational::from_int(self.j0 as i64) + &(t * &Rational::from_int(self.slope as i64))
    }

    pub fn passes_through(&self, t: &Rational, y: &Rational) -> bool {
        self.at(t) == *y
    }

    /// Crossing parameter with `other`; `None` for parallel lines.
    pub fn meet(&self, other: &Self) -> Option<Rational> {
        (self.slope != other.slope)
            .then(|| Rational::new((other.j0 - self.j0) as i64, (self.slope - other.slope) as i64))
    }
}

pub type ShapeSet = BTreeSet<PLFunction>;

pub fn candidate_lines(n: usize) -> Result<Vec<LineSpec>> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("need at least 2 strands, got {n}")));
    }
    let n = n as i32;
    let mut lines = vec![LineSpec::dt(-n, n), LineSpec::dt(n - 2, -n + 2)];
    for j0 in (-n + 2..=n - 4).step_by(2) {
        for slope in (-n + 2..=n - 2).rev().step_by(2) {
            lines.push(LineSpec::dt(j0, slope));
        }
    }
    lines.sort();
    Ok(lines)
}

pub fn techprop_prunable(before: &LineSpec, after: &LineSpec, all: &[LineSpec]) -> Result<bool> {
    let t = before
        .meet(after)
        .ok_or_else(|| Error::OutOfRange("parallel lines never meet".into()))?;
    if after.slope <= before.slope || before.subcomplex == after.subcomplex {
        return Ok(false);
    }
    let y = before.at(&t);
    let third = all
        .iter()
        .any(|l| l != before && l != after && l.passes_through(&t, &y));
    Ok(!third)
}

/// Path search over a line arrangement.
struct Arrangement<'a> {
    lines: &'a [LineSpec],
    /// `[t_in, t_out]` where each line lies in the region, if anywhere.
    inside: Vec<Option<(Rational, Rational)>>,
    prune: bool,
    /// Required value at `t = 1`, if any.
    end: Option<Rational>,
    memo: HashMap<(usize, Rational), Vec<Vec<(Rational, Rational)>>>,
}

impl Arrangement<'_> {
    /// Every continuation of a path standing on line `a` at parameter `t0`,
    /// as the list of later breakpoints.
    fn suffixes(&mut self, a: usize, t0: &Rational) -> Vec<Vec<(Rational, Rational)>> {
        if let Some(v) = self.memo.get(&(a, t0.clone())) {
            return v.clone();
        }
        let mut out = Vec::new();
        let Some((tin, tout)) = self.inside[a].clone() else {
            return out;
        };
        let line = self.lines[a];
        if *t0 < tin {
            return out;
        }
        let one = Rational::one();
        if tout == one && self.end.as_ref().is_none_or(|e| line.at(&one) == *e) {
            out.push(vec![(one.clone(), line.at(&one))]);
        }
        for b in 0..self.lines.len() {
            let other = self.lines[b];
            let Some(t) = line.meet(&other) else { continue };
            if t <= *t0 || t >= one || t > tout {
                continue;
            }
            if self.inside[b].as_ref().is_none_or(|(bin, bout)| t < *bin || t > *bout) {
                continue;
            }
            if self.prune && techprop_prunable(&line, &other, self.lines).unwrap_or(false) {
                continue;
            }
            let corner = (t.clone(), line.at(&t));
            for rest in self.suffixes(b, &t) {
                let mut path = Vec::with_capacity(rest.len() + 1);
                path.push(corner.clone());
                path.extend(rest);
                out.push(path);
            }
        }
        self.memo.insert((a, t0.clone()), out.clone());
        out
    }
}

/// Sub-interval of `[0, 1]` where `lo(t) <= line(t) <= hi(t)`, all three linear.
fn clip(line: &LineSpec, lo: &LineSpec, hi: &LineSpec) -> Option<(Rational, Rational)> {
    let (mut a, mut b) = (Rational::zero(), Rational::one());
    // g(t) = u + v t >= 0 on the interval
    for (u, v) in [(line.j0 - lo.j0, line.slope - lo.slope), (hi.j0 - line.j0, hi.slope - line.slope)] {
        if v == 0 {
            if u < 0 {
                return None;
            }
        } else {
            let root = Rational::new(-(u as i64), v as i64);
            if v > 0 {
                a = a.max(root);
            } else {
                b = b.min(root);
            }
        }
    }
    (a <= b).then_some((a, b))
}

fn collect(paths: Vec<Vec<(Rational, Rational)>>, start: (Rational, Rational)) -> ShapeSet {
    paths
        .into_iter()
        .map(|rest| {
            let mut pts = vec![start.clone()];
            pts.extend(rest);
            PLFunction::new(pts).expect("paths run from 0 to 1")
        })
        .collect()
}

pub fn enumerate_dt_shapes(n: usize) -> Result<ShapeSet> {
    enumerate_dt_shapes_with_cap(n, DEFAULT_STRANDS_CAP)
}

pub fn enumerate_dt_shapes_with_cap(n: usize, cap: usize) -> Result<ShapeSet> {
    dt_shapes(n, cap, true)
}

/// All paths before the subcomplex corner rule is applied.
pub fn enumerate_dt_paths_unpruned(n: usize) -> Result<ShapeSet> {
    dt_shapes(n, DEFAULT_STRANDS_CAP, false)
}

fn dt_shapes(n: usize, cap: usize, prune: bool) -> Result<ShapeSet> {
    if n > cap {
        return Err(Error::LimitExceeded {
            what: "strand",
            actual: n,
            limit: cap,
        });
    }
    let lines = candidate_lines(n)?;
    let ni = n as i32;
    let (lo, hi) = (LineSpec::plain(-ni, ni), LineSpec::plain(ni - 2, -ni + 2));
    let mut arr = Arrangement {
        lines: &lines,
        inside: lines.iter().map(|l| clip(l, &lo, &hi)).collect(),
        prune,
        end: Some(Rational::zero()),
        memo: HashMap::new(),
    };
    let mut shapes = ShapeSet::new();
    let zero = Rational::zero();
    for a in 0..lines.len() {
        let start = (zero.clone(), lines[a].at(&zero));
        shapes.extend(collect(arr.suffixes(a, &zero), start));
    }
    Ok(shapes)
}

/// `d_t` of a 3-braid closure from `s - w` and the writhe.
pub fn dt3_closed_form(delta: i32, w: i32) -> Result<PLFunction> {
    let w = w as i64;
    match delta {
        -2 => Ok(PLFunction::linear_int(w - 3, 3)),
        0 => Ok(PLFunction::linear_int(w - 1, 1)),
        2 => Ok(PLFunction::linear_int(w + 1, -1)),
        _ => Err(Error::OutOfRange(format!("s - w = {delta} is not one of -2, 0, 2"))),
    }
}

pub fn upsilon_candidate_lines(c: usize) -> Result<Vec<LineSpec>> {
    if c < 1 {
        return Err(Error::OutOfRange("concordance genus must be at least 1".into()));
    }
    let c = c as i32;
    let mut lines = vec![LineSpec::plain(0, c), LineSpec::plain(0, -c)];
    for y in -c + 1..=c - 1 {
        for slope in -c..=c {
            lines.push(LineSpec::plain(y - slope, slope));
        }
    }
    lines.sort();
    lines.dedup();
    Ok(lines)
}

pub fn enumerate_upsilon_shapes(c: usize) -> Result<ShapeSet> {
    enumerate_upsilon_shapes_with_cap(c, DEFAULT_GENUS_CAP)
}

pub fn enumerate_upsilon_shapes_with_cap(c: usize, cap: usize) -> Result<ShapeSet> {
    if c > cap {
        return Err(Error::LimitExceeded {
            what: "genus",
            actual: c,
            limit: cap,
        });
    }
    let lines = upsilon_candidate_lines(c)?;
    let ci = c as i32;
    let (lo, hi) = (LineSpec::plain(0, -ci), LineSpec::plain(0, ci));
    let mut arr = Arrangement {
        lines: &lines,
        inside: lines.iter().map(|l| clip(l, &lo, &hi)).collect(),
        prune: false,
        end: None,
        memo: HashMap::new(),
    };
    let zero = Rational::zero();
    let mut shapes = ShapeSet::new();
    for a in 0..lines.len() {
        if lines[a].j0 == 0 {
            shapes.extend(collect(arr.suffixes(a, &zero), (zero.clone(), zero.clone())));
        }
    }
    Ok(shapes)
}
