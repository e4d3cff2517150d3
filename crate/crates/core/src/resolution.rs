//! The annular cube of resolutions of a braid closure.
//!
//! Geometry is fixed on an integer grid so that winding, nesting and
//! orientation of circles are exact. Strand position `p` sits at
//! `x = 8(p+1)`, crossing `c` occupies `8c < y < 8(c+1)`, and the closure arc
//! of position `p` runs around the left of the puncture at `(0, 1)`.
//!
//! A point `(c, p)` is strand position `p` at height `8c`, for `c` in
//! `0..=len`. Every point has an up port and a down port.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::linalg::SparseVec;

pub const DEFAULT_CROSSING_LIMIT: usize = 16;

const UP: usize = 1;
const DOWN: usize = 0;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Circle {
    /// Net number of times the walk goes around the puncture.
    pub winding: i32,
    pub essential: bool,
    /// Parity of the number of other circles enclosing this one in the plane.
    pub nesting_parity: u8,
    /// Whether the tracing walk runs counterclockwise.
    pub ccw: bool,
    /// Walk start `(level, position)`; the walk leaves it through the up port.
    pub start: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Resolution {
    pub choices: Vec<u8>,
    pub circles: Vec<Circle>,
    /// Circle index of each point, indexed by `level * strands + position`.
    pub point_circle: Vec<usize>,
}

impl Resolution {
    pub fn circle_at(&self, strands: usize, level: usize, position: usize) -> usize {
        self.point_circle[level * strands + position]
    }

    pub fn essential_count(&self) -> usize {
        self.circles.iter().filter(|c| c.essential).count()
    }
}

/// Whether smoothing `choice` at a crossing of sign `letter` keeps the strands vertical.
fn is_vertical(letter: i32, choice: u8) -> bool {
    (choice == 0) == (letter > 0)
}

struct Layout {
    n: usize,
    len: usize,
    partner: Vec<usize>,
}

impl Layout {
    fn new(w: &BraidWord, choices: &[u8]) -> Self {
        let n = w.strands();
        let len = w.len();
        let points = (len + 1) * n;
        let mut partner = vec![usize::MAX; 2 * points];
        let port = |c: usize, p: usize, dir: usize| 2 * (c * n + p) + dir;
        let mut link = |a: usize, b: usize| {
            partner[a] = b;
            partner[b] = a;
        };
        for (c, (&l, &ch)) in w.letters().iter().zip(choices).enumerate() {
            let q = l.unsigned_abs() as usize - 1;
            for p in 0..n {
                if p != q && p != q + 1 {
                    link(port(c, p, UP), port(c + 1, p, DOWN));
                }
            }
            if is_vertical(l, ch) {
                link(port(c, q, UP), port(c + 1, q, DOWN));
                link(port(c, q + 1, UP), port(c + 1, q + 1, DOWN));
            } else {
                link(port(c, q, UP), port(c, q + 1, UP));
                link(port(c + 1, q, DOWN), port(c + 1, q + 1, DOWN));
            }
        }
        for p in 0..n {
            link(port(len, p, UP), port(0, p, DOWN));
        }
        Self { n, len, partner }
    }

    fn x(&self, p: usize) -> i64 {
        8 * (p as i64 + 1)
    }

    /// Polyline from the point of port `a` to the point of port `b`, both ends
    /// included, plus the winding contribution of the step.
    fn step(&self, a: usize, b: usize) -> (Vec<(i64, i64)>, i32) {
        let (pa, da) = (a / 2, a % 2);
        let (pb, db) = (b / 2, b % 2);
        let (ca, qa) = (pa / self.n, pa % self.n);
        let (cb, qb) = (pb / self.n, pb % self.n);
        let (xa, ya) = (self.x(qa), 8 * ca as i64);
        let (xb, yb) = (self.x(qb), 8 * cb as i64);
        let big = 8 * self.len as i64;
        if da == UP && ca == self.len && db == DOWN && cb == 0 {
            let r = self.x(qa);
            let path = vec![(r, big), (r, big + r), (-r, big + r), (-r, -r), (r, -r), (r, 0)];
            return (path, 1);
        }
        if da == DOWN && ca == 0 && db == UP && cb == self.len {
            let r = self.x(qa);
            let path = vec![(r, 0), (r, -r), (-r, -r), (-r, big + r), (r, big + r), (r, big)];
            return (path, -1);
        }
        if da != db {
            return (vec![(xa, ya), (xb, yb)], 0);
        }
        // cap above level `ca`, or cup below it
        let yy = if da == UP { ya + 2 } else { ya - 2 };
        (vec![(xa, ya), (xa, yy), (xb, yy), (xb, yb)], 0)
    }
}

/// Traces circles without geometry: point-to-circle map, circle count and
/// essential flags.
pub(crate) fn trace_fast(w: &BraidWord, choices: &[u8]) -> (Vec<usize>, Vec<bool>) {
    let lay = Layout::new(w, choices);
    let points = (lay.len + 1) * lay.n;
    let mut circ = vec![usize::MAX; points];
    let mut essential = Vec::new();
    for start in 0..points {
        if circ[start] != usize::MAX {
            continue;
        }
        let id = essential.len();
        let mut winding = 0i32;
        let mut out = 2 * start + UP;
        loop {
            circ[out / 2] = id;
            let inn = lay.partner[out];
            let (pa, pb) = (out / 2, inn / 2);
            if out % 2 == UP && pa / lay.n == lay.len && inn % 2 == DOWN && pb / lay.n == 0 {
                winding += 1;
            } else if out % 2 == DOWN && pa / lay.n == 0 && inn % 2 == UP && pb / lay.n == lay.len {
                winding -= 1;
            }
            out = inn ^ 1;
            if out == 2 * start + UP {
                break;
            }
        }
        essential.push(winding != 0);
    }
    (circ, essential)
}

/// Resolves every crossing of `w` and traces the circles on the canonical embedding.
pub fn resolve(w: &BraidWord, choices: &[u8]) -> Result<Resolution> {
    if choices.len() != w.len() {
        return Err(Error::LengthMismatch {
            expected: w.len(),
            actual: choices.len(),
        });
    }
    if let Some(&bad) = choices.iter().find(|&&c| c > 1) {
        return Err(Error::OutOfRange(format!("smoothing choice {bad}")));
    }
    let lay = Layout::new(w, choices);
    let n = lay.n;
    let points = (lay.len + 1) * n;
    let mut point_circle = vec![usize::MAX; points];
    let mut polys: Vec<Vec<(i64, i64)>> = Vec::new();
    let mut circles = Vec::new();
    for start in 0..points {
        if point_circle[start] != usize::MAX {
            continue;
        }
        let id = circles.len();
        let mut poly: Vec<(i64, i64)> = Vec::new();
        let mut winding = 0;
        let mut out = 2 * start + UP;
        loop {
            point_circle[out / 2] = id;
            let inn = lay.partner[out];
            let (path, wind) = lay.step(out, inn);
            winding += wind;
            poly.extend_from_slice(&path[..path.len() - 1]);
            out = inn ^ 1;
            if out == 2 * start + UP {
                break;
            }
        }
        let twice_area: i64 = (0..poly.len())
            .map(|i| {
                let (x0, y0) = poly[i];
                let (x1, y1) = poly[(i + 1) % poly.len()];
                x0 * y1 - x1 * y0
            })
            .sum();
        circles.push(Circle {
            winding,
            essential: winding != 0,
            nesting_parity: 0,
            ccw: twice_area > 0,
            start: (start / n, start % n),
        });
        polys.push(poly);
    }
    for a in 0..circles.len() {
        // a point with odd height on the first vertical edge of circle a
        let pa = &polys[a];
        let (x0, y0) = (0..pa.len())
            .find_map(|i| {
                let (u, v) = (pa[i], pa[(i + 1) % pa.len()]);
                (u.0 == v.0 && u.1 != v.1).then(|| (u.0, u.1.min(v.1) + 1))
            })
            .expect("every circle has a vertical edge");
        let mut depth = 0u32;
        for (b, pb) in polys.iter().enumerate() {
            if b == a {
                continue;
            }
            let hits = (0..pb.len())
                .filter(|&i| {
                    let (u, v) = (pb[i], pb[(i + 1) % pb.len()]);
                    u.0 == v.0 && u.0 > x0 && u.1.min(v.1) < y0 && y0 < u.1.max(v.1)
                })
                .count();
            depth += (hits % 2) as u32;
        }
        circles[a].nesting_parity = (depth % 2) as u8;
    }
    Ok(Resolution {
        choices: choices.to_vec(),
        circles,
        point_circle,
    })
}

/// Homological, quantum and annular gradings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Grading {
    pub i: i32,
    pub j: i32,
    pub k: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Generator {
    /// Cube vertex; bit `len-1-c` holds the choice at letter `c`.
    pub vertex: u32,
    /// Circle labels; bit `m-1-r` set means circle `r` is labelled minus.
    pub labels: u32,
    pub i: i32,
    pub j: i32,
    pub k: i32,
}

impl Generator {
    pub fn grading(&self) -> Grading {
        Grading {
            i: self.i,
            j: self.j,
            k: self.k,
        }
    }
}

/// Sparse entries `(target generator, coefficient)` of one generator's image.
pub type Row = Vec<(u32, i8)>;

/// All enhanced resolutions of a braid closure with the Khovanov differential
/// and Lee's perturbation.
#[derive(Debug, Clone)]
pub struct AnnularComplex {
    word: BraidWord,
    circle_counts: Vec<u8>,
    essential: Vec<u32>,
    offsets: Vec<usize>,
    generators: Vec<Generator>,
    d: Vec<Row>,
    phi: Vec<Row>,
    strata: BTreeMap<i32, Vec<usize>>,
}

pub fn build_cube(w: &BraidWord) -> Result<AnnularComplex> {
    build_cube_with_limit(w, DEFAULT_CROSSING_LIMIT)
}

pub fn build_cube_with_limit(w: &BraidWord, limit: usize) -> Result<AnnularComplex> {
    let len = w.len();
    if len > limit {
        return Err(Error::LimitExceeded {
            what: "crossing",
            actual: len,
            limit,
        });
    }
    if len > 24 {
        return Err(Error::LimitExceeded {
            what: "crossing",
            actual: len,
            limit: 24,
        });
    }
    let n = w.strands();
    let verts = 1usize << len;
    let choices_of = |u: usize| -> Vec<u8> { (0..len).map(|c| ((u >> (len - 1 - c)) & 1) as u8).collect() };

    let mut point_circle: Vec<Vec<usize>> = Vec::with_capacity(verts);
    let mut circle_counts = Vec::with_capacity(verts);
    let mut essential = Vec::with_capacity(verts);
    // first point of each circle, for matching untouched circles along edges
    let mut first_point: Vec<Vec<usize>> = Vec::with_capacity(verts);
    for u in 0..verts {
        let (pc, ess) = trace_fast(w, &choices_of(u));
        let m = ess.len();
        if m > 31 {
            return Err(Error::LimitExceeded {
                what: "circle",
                actual: m,
                limit: 31,
            });
        }
        let mut firsts = vec![usize::MAX; m];
        for (pt, &c) in pc.iter().enumerate() {
            if firsts[c] == usize::MAX {
                firsts[c] = pt;
            }
        }
        let mut mask = 0u32;
        for (r, &e) in ess.iter().enumerate() {
            if e {
                mask |= 1 << (m - 1 - r);
            }
        }
        circle_counts.push(m as u8);
        essential.push(mask);
        point_circle.push(pc);
        first_point.push(firsts);
    }

    let n_plus = w.positive_count() as i32;
    let n_minus = w.negative_count() as i32;
    let mut offsets = Vec::with_capacity(verts + 1);
    let mut generators = Vec::new();
    for u in 0..verts {
        offsets.push(generators.len());
        let m = circle_counts[u] as u32;
        let ones = u.count_ones() as i32;
        for labels in 0..(1u32 << m) {
            let minus = labels.count_ones() as i32;
            let ess_minus = (labels & essential[u]).count_ones() as i32;
            let ess_total = essential[u].count_ones() as i32;
            generators.push(Generator {
                vertex: u as u32,
                labels,
                i: ones - n_minus,
                j: (m as i32 - 2 * minus) + ones + n_plus - 2 * n_minus,
                k: ess_total - 2 * ess_minus,
            });
        }
    }
    offsets.push(generators.len());

    let mut d: Vec<Row> = vec![Vec::new(); generators.len()];
    let mut phi: Vec<Row> = vec![Vec::new(); generators.len()];
    for u in 0..verts {
        let m = circle_counts[u] as usize;
        for c in 0..len {
            let bit = 1usize << (len - 1 - c);
            if u & bit != 0 {
                continue;
            }
            let v = u | bit;
            let mv = circle_counts[v] as usize;
            let sign: i8 = if (u >> (len - c)).count_ones().is_multiple_of(2) { 1 } else { -1 };
            let q = w.letters()[c].unsigned_abs() as usize - 1;
            let touched = [(c, q), (c, q + 1), (c + 1, q), (c + 1, q + 1)];
            let mut before: Vec<usize> = touched.iter().map(|&(l, p)| point_circle[u][l * n + p]).collect();
            let mut after: Vec<usize> = touched.iter().map(|&(l, p)| point_circle[v][l * n + p]).collect();
            before.sort_unstable();
            before.dedup();
            after.sort_unstable();
            after.dedup();
            // new circle index of every untouched old circle
            let mut map = vec![usize::MAX; m];
            for (r, slot) in map.iter_mut().enumerate() {
                if !before.contains(&r) {
                    *slot = point_circle[v][first_point[u][r]];
                }
            }
            let bit_of = |labels: u32, r: usize, count: usize| (labels >> (count - 1 - r)) & 1;
            for labels in 0..(1u32 << m) {
                let src = offsets[u] + labels as usize;
                let mut base = 0u32;
                for r in 0..m {
                    if map[r] != usize::MAX && bit_of(labels, r, m) == 1 {
                        base |= 1 << (mv - 1 - map[r]);
                    }
                }
                let set = |mask: u32, r: usize, minus: bool| if minus { mask | (1 << (mv - 1 - r)) } else { mask };
                let tgt = |mask: u32| (offsets[v] + mask as usize) as u32;
                if before.len() == 2 && after.len() == 1 {
                    let (a, b) = (bit_of(labels, before[0], m), bit_of(labels, before[1], m));
                    let r = after[0];
                    match (a, b) {
                        (0, 0) => d[src].push((tgt(set(base, r, false)), sign)),
                        (0, 1) | (1, 0) => d[src].push((tgt(set(base, r, true)), sign)),
                        _ => phi[src].push((tgt(set(base, r, false)), sign)),
                    }
                } else if before.len() == 1 && after.len() == 2 {
                    let (r1, r2) = (after[0], after[1]);
                    if bit_of(labels, before[0], m) == 0 {
                        d[src].push((tgt(set(set(base, r1, false), r2, true)), sign));
                        d[src].push((tgt(set(set(base, r1, true), r2, false)), sign));
                    } else {
                        d[src].push((tgt(set(set(base, r1, true), r2, true)), sign));
                        phi[src].push((tgt(set(set(base, r1, false), r2, false)), sign));
                    }
                } else {
                    return Err(Error::Internal(format!(
                        "edge at letter {c} changes circles {} -> {}",
                        before.len(),
                        after.len()
                    )));
                }
            }
        }
    }
    for row in d.iter_mut().chain(phi.iter_mut()) {
        row.sort_unstable_by_key(|e| e.0);
    }

    let mut strata: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (g, gen) in generators.iter().enumerate() {
        strata.entry(gen.i).or_default().push(g);
    }
    Ok(AnnularComplex {
        word: w.clone(),
        circle_counts,
        essential,
        offsets,
        generators,
        d,
        phi,
        strata,
    })
}

impl AnnularComplex {
    pub fn word(&self) -> &BraidWord {
        &self.word
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.circle_counts.len()
    }

    pub fn circle_count(&self, vertex: usize) -> usize {
        self.circle_counts[vertex] as usize
    }

    pub fn essential_mask(&self, vertex: usize) -> u32 {
        self.essential[vertex]
    }

    pub fn index_of(&self, vertex: usize, labels: u32) -> usize {
        self.offsets[vertex] + labels as usize
    }

    /// Global generator indices with homological grading `i`, ascending.
    pub fn stratum(&self, i: i32) -> &[usize] {
        self.strata.get(&i).map_or(&[], |v| v.as_slice())
    }

    pub fn strata(&self) -> impl Iterator<Item = (i32, &[usize])> {
        self.strata.iter().map(|(i, v)| (*i, v.as_slice()))
    }

    /// Entries of the Khovanov differential of generator `g`.
    pub fn d_row(&self, g: usize) -> &[(u32, i8)] {
        &self.d[g]
    }

    /// Entries of Lee's perturbation of generator `g`.
    pub fn phi_row(&self, g: usize) -> &[(u32, i8)] {
        &self.phi[g]
    }

    /// `∂` applied to a chain.
    pub fn apply_d<F: Field>(&self, z: &SparseVec<F>) -> SparseVec<F> {
        self.apply_rows(z, &self.d)
    }

    /// `Φ` applied to a chain.
    pub fn apply_phi<F: Field>(&self, z: &SparseVec<F>) -> SparseVec<F> {
        self.apply_rows(z, &self.phi)
    }

    /// `∂ + Φ` applied to a chain.
    pub fn apply_lee<F: Field>(&self, z: &SparseVec<F>) -> SparseVec<F> {
        let a = self.apply_d(z);
        a.axpy(&F::one(), &self.apply_phi(z))
    }

    fn apply_rows<F: Field>(&self, z: &SparseVec<F>, rows: &[Row]) -> SparseVec<F> {
        let mut out = Vec::new();
        for (g, c) in z.entries() {
            for &(t, s) in &rows[*g] {
                out.push((t as usize, c.mul(&F::from_i64(s as i64))));
            }
        }
        SparseVec::from_entries(out)
    }

    /// Generator table and sparse entries, for golden tests and debugging.
    pub fn to_json(&self) -> Value {
        let gens: Vec<Value> = self
            .generators
            .iter()
            .map(|g| json!({"vertex": g.vertex, "labels": g.labels, "i": g.i, "j": g.j, "k": g.k}))
            .collect();
        let entries = |rows: &[Row]| -> Vec<Value> {
            rows.iter()
                .enumerate()
                .flat_map(|(s, row)| row.iter().map(move |&(t, c)| json!([s, t, c])))
                .collect()
        };
        json!({
            "word": self.word.to_string(),
            "generators": gens,
            "d": entries(&self.d),
            "phi": entries(&self.phi),
        })
    }
}

/// A chain of the cube complex with rational coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct LeeChain {
    pub i: i32,
    pub terms: SparseVec<Rational>,
}

impl LeeChain {
    pub fn to_field<F: Field>(&self) -> SparseVec<F> {
        self.terms.map_coeffs(|c| {
            let (num, den) = c.to_pair().expect("chain coefficients fit in i64");
            F::from_i64(num).div(&F::from_i64(den))
        })
    }
}

/// A choice of direction for each closure component; `true` reverses the
/// braid direction. Components are numbered as in
/// [`BraidWord::strand_components`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Orientation {
    pub reversed: Vec<bool>,
}

impl Orientation {
    pub fn braid(w: &BraidWord) -> Self {
        Self {
            reversed: vec![false; w.closure_component_count()],
        }
    }

    pub fn reverse_all(&self) -> Self {
        Self {
            reversed: self.reversed.iter().map(|r| !r).collect(),
        }
    }
}

/// Per point `(level, position)`: whether the strand there runs upward.
fn point_directions(w: &BraidWord, o: &Orientation) -> Vec<bool> {
    let n = w.strands();
    let comp = w.strand_components();
    // start[q] = starting position of the strand currently at q
    let mut start: Vec<usize> = (0..n).collect();
    let mut up = Vec::with_capacity((w.len() + 1) * n);
    for c in 0..=w.len() {
        for &s in &start {
            up.push(!o.reversed[comp[s]]);
        }
        if c < w.len() {
            let q = w.letters()[c].unsigned_abs() as usize - 1;
            start.swap(q, q + 1);
        }
    }
    up
}

/// Smoothing choices of the oriented resolution for `o`.
pub fn oriented_choices(w: &BraidWord, o: &Orientation) -> Result<Vec<u8>> {
    let comps = w.closure_component_count();
    if o.reversed.len() != comps {
        return Err(Error::InvalidOrientation(format!(
            "{} flags for {} components",
            o.reversed.len(),
            comps
        )));
    }
    let n = w.strands();
    let up = point_directions(w, o);
    Ok(w.letters()
        .iter()
        .enumerate()
        .map(|(c, &l)| {
            let q = l.unsigned_abs() as usize - 1;
            let vertical = up[c * n + q] == up[c * n + q + 1];
            // choice 0 is vertical exactly for positive letters
            u8::from(vertical != (l > 0))
        })
        .collect())
}

fn vertex_of(choices: &[u8]) -> usize {
    choices.iter().fold(0, |acc, &c| (acc << 1) | c as usize)
}

/// Lee's cycle for the orientation `o`: every circle of the oriented
/// resolution carries `v+ + v-` or `v+ - v-`, chosen by nesting parity and
/// orientation.
pub fn lee_class(c: &AnnularComplex, o: &Orientation) -> Result<LeeChain> {
    let w = c.word();
    let choices = oriented_choices(w, o)?;
    let res = resolve(w, &choices)?;
    let up = point_directions(w, o);
    let n = w.strands();
    let m = res.circles.len();
    // minus_sign[r]: factor is v+ - v- on circle r
    let minus_sign: Vec<bool> = res
        .circles
        .iter()
        .map(|circ| {
            let (l, p) = circ.start;
            let agrees = up[l * n + p];
            let ccw = circ.ccw == agrees;
            let flag = u8::from(!ccw);
            (circ.nesting_parity ^ flag) == 1
        })
        .collect();
    let u = vertex_of(&choices);
    let mut terms = Vec::with_capacity(1 << m);
    for labels in 0..(1u32 << m) {
        let negs = (0..m)
            .filter(|&r| minus_sign[r] && (labels >> (m - 1 - r)) & 1 == 1)
            .count();
        let coeff = if negs % 2 == 0 { 1 } else { -1 };
        terms.push((c.index_of(u, labels), Rational::from_int(coeff)));
    }
    let i = choices.iter().map(|&x| x as i32).sum::<i32>() - w.negative_count() as i32;
    Ok(LeeChain {
        i,
        terms: SparseVec::from_entries(terms),
    })
}

/// The all-minus generator of the braid-oriented resolution.
pub fn psi_chain(c: &AnnularComplex) -> LeeChain {
    let w = c.word();
    let choices: Vec<u8> = w.letters().iter().map(|&l| u8::from(l < 0)).collect();
    let u = vertex_of(&choices);
    let m = c.circle_count(u);
    let g = c.index_of(u, (1u32 << m) - 1);
    LeeChain {
        i: 0,
        terms: SparseVec::from_entries(vec![(g, Rational::one())]),
    }
}
