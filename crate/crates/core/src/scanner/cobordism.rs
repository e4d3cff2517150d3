//! Morphisms of Bar-Natan's cobordism category, reduced by the local
//! relations: a sphere is 0, a dotted sphere is 1, two dots on a component
//! vanish, and necks are cut as `cylinder = (dot above) + (dot below)`.
//!
//! After neck cutting every cobordism `S -> T` is a combination of surfaces
//! whose components are disks, one per boundary component. The boundary
//! components are the loops of `S ∪ T` through boundary points (numbered by
//! smallest point), then the closed circles of `S`, then those of `T`. A
//! basis element is the set of dotted disks, stored as a bit mask.

use std::collections::BTreeMap;

use crate::field::Field;

use super::tangle::{loops, Diagram};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalMorphism<F> {
    terms: Vec<(u64, F)>,
}

impl<F: Field> FormalMorphism<F> {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u64, F)>) -> Self {
        let mut acc: BTreeMap<u64, F> = BTreeMap::new();
        for (m, c) in terms {
            let e = acc.entry(m).or_insert_with(F::zero);
            *e = e.add(&c);
        }
        Self {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// The surface with every disk undotted, e.g. a saddle.
    pub fn undotted() -> Self {
        Self {
            terms: vec![(0, F::one())],
        }
    }

    /// The identity of `d`: flat sheets on arcs, cut cylinders on circles.
    pub fn identity(d: &Diagram) -> Self {
        let l = d.points() / 2;
        let r = d.circles();
        necks(r, |k| (l + k, l + r + k), 0)
    }

    pub fn terms(&self) -> &[(u64, F)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `c` when the morphism is `c` times the undotted surface.
    pub fn as_scalar(&self) -> Option<&F> {
        match self.terms.as_slice() {
            [(0, c)] => Some(c),
            _ => None,
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, v)| (*m, v.mul(c))))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(&other.terms).cloned())
    }
}

/// Sum over ways of cutting `r` necks; neck `k` joins components
/// `ends(k).0` and `ends(k).1`. `base` is dotted in every term.
fn necks<F: Field>(r: usize, ends: impl Fn(usize) -> (usize, usize), base: u64) -> FormalMorphism<F> {
    let mut masks = vec![base];
    for k in 0..r {
        let (a, b) = ends(k);
        masks = masks.iter().flat_map(|m| [m | 1 << a, m | 1 << b]).collect();
    }
    FormalMorphism::from_terms(masks.into_iter().map(|m| (m, F::one())))
}

/// Caps off the last circle of `d`. `dotted` puts a dot on the cap.
pub fn cap_last<F: Field>(d: &Diagram, dotted: bool) -> FormalMorphism<F> {
    let l = d.points() / 2;
    let r = d.circles();
    let base = if dotted { 1 << (l + r - 1) } else { 0 };
    necks(r - 1, |k| (l + k, l + r + k), base)
}

/// Cups in a new last circle, turning `d` minus that circle into `d`.
pub fn cup_last<F: Field>(d: &Diagram, dotted: bool) -> FormalMorphism<F> {
    let l = d.points() / 2;
    let r = d.circles();
    let base = if dotted { 1 << (l + (r - 1) + (r - 1)) } else { 0 };
    necks(r - 1, |k| (l + k, l + (r - 1) + k), base)
}

/// How the disks of two factors glue into one surface, and which boundary
/// components of the result each glued piece carries.
struct Plan {
    pieces: Vec<Piece>,
}

struct Piece {
    /// Disks of the first and second factor in this piece.
    first: u64,
    second: u64,
    chi: i32,
    /// Result boundary components on this piece, as bits.
    outputs: Vec<u32>,
}

struct Builder {
    parent: Vec<usize>,
    chi: Vec<i32>,
    first: usize,
}

impl Builder {
    fn new(first: usize, second: usize) -> Self {
        let n = first + second;
        Self {
            parent: (0..n).collect(),
            chi: vec![1; n],
            first,
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = x;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    /// Glues along an arc (`dchi = -1`) or a circle (`dchi = 0`).
    fn glue(&mut self, a: usize, b: usize, dchi: i32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[rb] = ra;
            self.chi[ra] += self.chi[rb];
        }
        self.chi[ra] += dchi;
    }

    /// `outputs[c]` is a disk lying on result boundary component `c`.
    fn finish(mut self, outputs: &[usize]) -> Plan {
        let n = self.parent.len();
        let mut index = vec![usize::MAX; n];
        let mut pieces: Vec<Piece> = Vec::new();
        for x in 0..n {
            let r = self.find(x);
            if index[r] == usize::MAX {
                index[r] = pieces.len();
                pieces.push(Piece {
                    first: 0,
                    second: 0,
                    chi: self.chi[r],
                    outputs: Vec::new(),
                });
            }
            let p = &mut pieces[index[r]];
            if x < self.first {
                p.first |= 1 << x;
            } else {
                p.second |= 1 << (x - self.first);
            }
        }
        for (c, &x) in outputs.iter().enumerate() {
            let r = self.find(x);
            pieces[index[r]].outputs.push(c as u32);
        }
        Plan { pieces }
    }
}

impl Plan {
    fn apply<F: Field>(&self, f: &FormalMorphism<F>, g: &FormalMorphism<F>) -> FormalMorphism<F> {
        let mut out = Vec::new();
        for (mf, cf) in f.terms() {
            for (mg, cg) in g.terms() {
                let mut partial = vec![(0u64, cf.mul(cg))];
                for p in &self.pieces {
                    let dots = (mf & p.first).count_ones() + (mg & p.second).count_ones();
                    // genus from chi = 2 - 2g - b
                    let b = p.outputs.len() as i32;
                    let genus = (2 - p.chi - b) / 2;
                    debug_assert!(genus >= 0 && (2 - p.chi - b) % 2 == 0);
                    let e = dots as i32 + genus;
                    let weight = F::from_i64(1 << genus);
                    let all: u64 = p.outputs.iter().fold(0, |m, &c| m | 1 << c);
                    let choices: Vec<u64> = match (b, e) {
                        (0, 1) => vec![0],
                        (0, _) => vec![],
                        (_, 0) => p.outputs.iter().map(|&c| all & !(1 << c)).collect(),
                        (_, 1) => vec![all],
                        _ => vec![],
                    };
                    partial = partial
                        .iter()
                        .flat_map(|(m, c)| {
                            let c = c.mul(&weight);
                            choices.iter().map(move |x| (m | x, c.clone()))
                        })
                        .collect();
                    if partial.is_empty() {
                        break;
                    }
                }
                out.extend(partial);
            }
        }
        FormalMorphism::from_terms(out)
    }
}

/// `g ∘ f` for `f: s -> m` and `g: m -> t`.
pub fn compose<F: Field>(
    f: &FormalMorphism<F>,
    s: &Diagram,
    m: &Diagram,
    g: &FormalMorphism<F>,
    t: &Diagram,
) -> FormalMorphism<F> {
    if f.is_zero() || g.is_zero() {
        return FormalMorphism::zero();
    }
    let (lf, nlf) = loops(s, m);
    let (lg, nlg) = loops(m, t);
    let nf = nlf + s.circles() + m.circles();
    let ng = nlg + m.circles() + t.circles();
    let mut b = Builder::new(nf, ng);
    for p in 0..m.points() {
        if p < m.partner(p) {
            b.glue(lf[p], nf + lg[p], -1);
        }
    }
    for k in 0..m.circles() {
        b.glue(nlf + s.circles() + k, nf + nlg + k, 0);
    }
    let (lst, _) = loops(s, t);
    let mut outputs = Vec::new();
    let mut first_point = Vec::new();
    for p in 0..s.points() {
        if lst[p] == first_point.len() {
            first_point.push(p);
            outputs.push(lf[p]);
        }
    }
    outputs.extend((0..s.circles()).map(|k| nlf + k));
    outputs.extend((0..t.circles()).map(|k| nf + nlg + m.circles() + k));
    b.finish(&outputs).apply(f, g)
}

/// Places `g: b -> b2` on top of `f: a -> a2`, giving `a·b -> a2·b2`.
pub fn stack<F: Field>(
    f: &FormalMorphism<F>,
    a: &Diagram,
    a2: &Diagram,
    g: &FormalMorphism<F>,
    b: &Diagram,
    b2: &Diagram,
) -> FormalMorphism<F> {
    if f.is_zero() || g.is_zero() {
        return FormalMorphism::zero();
    }
    let n = a.strands();
    let (lf, nlf) = loops(a, a2);
    let (lg, nlg) = loops(b, b2);
    let nf = nlf + a.circles() + a2.circles();
    let ng = nlg + b.circles() + b2.circles();
    let mut bld = Builder::new(nf, ng);
    for m in 0..n {
        bld.glue(lf[n + m], nf + lg[m], -1);
    }
    let src = a.stack(b);
    let tgt = a2.stack(b2);
    let (lr, _) = loops(&src.diagram, &tgt.diagram);
    let mut outputs = Vec::new();
    let mut seen = 0;
    for p in 0..2 * n {
        if lr[p] == seen {
            seen += 1;
            outputs.push(if p < n { lf[p] } else { nf + lg[p] });
        }
    }
    outputs.extend((0..a.circles()).map(|k| nlf + k));
    outputs.extend((0..b.circles()).map(|k| nf + nlg + k));
    outputs.extend(src.new_circles.iter().map(|&m| lf[n + m]));
    outputs.extend((0..a2.circles()).map(|k| nlf + a.circles() + k));
    outputs.extend((0..b2.circles()).map(|k| nf + nlg + b.circles() + k));
    outputs.extend(tgt.new_circles.iter().map(|&m| lf[n + m]));
    bld.finish(&outputs).apply(f, g)
}

/// Closes `f: s -> t` up as a braid closure.
pub fn close<F: Field>(f: &FormalMorphism<F>, s: &Diagram, t: &Diagram) -> FormalMorphism<F> {
    if f.is_zero() {
        return FormalMorphism::zero();
    }
    let n = s.strands();
    let (lf, nlf) = loops(s, t);
    let nf = nlf + s.circles() + t.circles();
    // one flat strip per closing arc
    let mut b = Builder::new(nf, n);
    for k in 0..n {
        b.glue(nf + k, lf[k], -1);
        b.glue(nf + k, lf[n + k], -1);
    }
    let cs = s.closure();
    let ct = t.closure();
    let mut outputs: Vec<usize> = (0..s.circles()).map(|k| nlf + k).collect();
    outputs.extend(cs.new_circles.iter().map(|&p| lf[p]));
    outputs.extend((0..t.circles()).map(|k| nlf + s.circles() + k));
    outputs.extend(ct.new_circles.iter().map(|&p| lf[p]));
    b.finish(&outputs).apply(f, &FormalMorphism::undotted())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    type M = FormalMorphism<Rational>;

    fn circle() -> Diagram {
        Diagram::from_pairs(Vec::new(), 1)
    }

    fn empty() -> Diagram {
        Diagram::from_pairs(Vec::new(), 0)
    }

    #[test]
    fn spheres() {
        let e = empty();
        let c = circle();
        let cup: M = cup_last(&c, false);
        let dcup: M = cup_last(&c, true);
        let cap: M = cap_last(&c, false);
        let dcap: M = cap_last(&c, true);
        assert!(compose(&cup, &e, &c, &cap, &e).is_zero());
        assert_eq!(compose(&cup, &e, &c, &dcap, &e), M::undotted());
        assert_eq!(compose(&dcup, &e, &c, &cap, &e), M::undotted());
        assert!(compose(&dcup, &e, &c, &dcap, &e).is_zero());
    }

    #[test]
    fn neck_cutting_recovers_identity() {
        let c = circle();
        let e = empty();
        let lhs = compose::<Rational>(&cap_last(&c, true), &c, &e, &cup_last(&c, false), &c).add(&compose(
            &cap_last(&c, false),
            &c,
            &e,
            &cup_last(&c, true),
            &c,
        ));
        assert_eq!(lhs, M::identity(&c));
    }

    #[test]
    fn merge_then_split_is_a_tube() {
        let c = circle();
        let id = M::identity(&c);
        assert_eq!(compose(&id, &c, &c, &id, &c), id);
        // saddle to the cup-cap and back: a tube joining the two sheets
        let id2 = Diagram::identity(2);
        let cc = Diagram::cup_cap(2, 0);
        let round = compose(&M::undotted(), &id2, &cc, &M::undotted(), &id2);
        assert_eq!(round, M::from_terms([(0b01, Rational::one()), (0b10, Rational::one())]));
    }

    #[test]
    fn identities_are_neutral() {
        let id2 = Diagram::identity(3);
        let cc = Diagram::cup_cap(3, 1);
        let s = M::undotted();
        assert_eq!(compose(&M::identity(&id2), &id2, &id2, &s, &cc), s);
        assert_eq!(compose(&s, &id2, &cc, &M::identity(&cc), &cc), s);
        // renormalizing a normal form changes nothing
        let x = M::from_terms([(0b01, Rational::from_int(2)), (0b10, Rational::from_int(-1))]);
        assert_eq!(compose(&M::identity(&id2), &id2, &id2, &x, &cc), x);
    }

    #[test]
    fn stacking_identities() {
        let a = Diagram::cup_cap(3, 0);
        let b = Diagram::cup_cap(3, 0);
        let ab = a.stack(&b).diagram;
        assert_eq!(ab.circles(), 1);
        let got = stack::<Rational>(&M::identity(&a), &a, &a, &M::identity(&b), &b, &b);
        assert_eq!(got, M::identity(&ab));
    }

    #[test]
    fn closing_the_identity_strand() {
        // one strand closes to a circle; its identity closes to the cylinder
        let id = Diagram::identity(1);
        let got = close::<Rational>(&M::identity(&id), &id, &id);
        assert_eq!(got, M::identity(&circle()));
    }
}
