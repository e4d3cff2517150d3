//! The s-invariant, the annular `d_t` function, and nonvanishing of ψ.

use serde::Serialize;

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::field::{FieldKind, Rational};
use crate::homology::{
    class_nonzero, level_problem, workspace, Differential, FiltrationFunctional, FiltrationSolver, LevelProblem,
    PivotReduction,
};
use crate::pl::PLFunction;
use crate::resolution::{
    build_cube, build_cube_with_limit, lee_class, psi_chain, AnnularComplex, Orientation, DEFAULT_CROSSING_LIMIT,
};

fn braid_problem(c: &AnnularComplex) -> Result<LevelProblem<Rational>> {
    let z = lee_class(c, &Orientation::braid(c.word()))?;
    level_problem(c, &z)
}

fn level_at(p: &LevelProblem<Rational>, t: &Rational, solver: &dyn FiltrationSolver<Rational>) -> Result<Rational> {
    solver
        .level(p, &FiltrationFunctional { t: t.clone() })
        .ok_or_else(|| Error::Internal("Lee class is zero".into()))
}

fn s_from_problem(p: &LevelProblem<Rational>, solver: &dyn FiltrationSolver<Rational>) -> Result<i32> {
    let lvl = level_at(p, &Rational::zero(), solver)?;
    let v = lvl
        .to_i64()
        .ok_or_else(|| Error::Internal(format!("non-integral quantum level {lvl}")))?;
    Ok(v as i32 + 1)
}

pub fn s_invariant(w: &BraidWord) -> Result<i32> {
    let c = build_cube(w)?;
    s_from_problem(&braid_problem(&c)?, &PivotReduction)
}

pub fn dt_value(w: &BraidWord, t: &Rational) -> Result<Rational> {
    if t.is_negative() || *t > Rational::one() {
        return Err(Error::OutOfRange(format!("t = {t} outside [0, 1]")));
    }
    let c = build_cube(w)?;
    level_at(&braid_problem(&c)?, t, &PivotReduction)
}

/// Candidate corners: crossings in `(0, 1)` of the lines `j - t k`.
fn candidate_breakpoints(p: &LevelProblem<Rational>) -> Vec<Rational> {
    let mut pairs: Vec<(i32, i32)> = p.gradings().collect();
    pairs.sort_unstable();
    pairs.dedup();
    let mut ts = vec![Rational::zero(), Rational::one()];
    for (a, &(j1, k1)) in pairs.iter().enumerate() {
        for &(j2, k2) in &pairs[a + 1..] {
            if k1 != k2 {
                let t = Rational::new((j1 - j2) as i64, (k1 - k2) as i64);
                if t > Rational::zero() && t < Rational::one() {
                    ts.push(t);
                }
            }
        }
    }
    ts.sort();
    ts.dedup();
    ts
}

fn dt_from_problem(p: &LevelProblem<Rational>, solver: &dyn FiltrationSolver<Rational>) -> Result<PLFunction> {
    let ts = candidate_breakpoints(p);
    let values = ts.iter().map(|t| level_at(p, t, solver)).collect::<Result<Vec<_>>>()?;
    let two = Rational::from_int(2);
    for k in 0..ts.len() - 1 {
        let mid = &(&ts[k] + &ts[k + 1]) / &two;
        let expect = &(&values[k] + &values[k + 1]) / &two;
        let got = level_at(p, &mid, solver)?;
        if got != expect {
            return Err(Error::Internal(format!(
                "d_t is not linear on [{}, {}]: {got} != {expect} at the midpoint",
                ts[k],
                ts[k + 1]
            )));
        }
    }
    PLFunction::new(ts.into_iter().zip(values).collect())
}

pub fn dt_function(w: &BraidWord) -> Result<PLFunction> {
    dt_function_with(w, &PivotReduction)
}

pub fn dt_function_with(w: &BraidWord, solver: &dyn FiltrationSolver<Rational>) -> Result<PLFunction> {
    let c = build_cube(w)?;
    dt_from_problem(&braid_problem(&c)?, solver)
}

/// `s` read off the Khovanov page, valid when Khovanov and Lee homology
/// have equal rank in homological degree 0. `None` when they differ.
pub fn s_via_rank_matching(w: &BraidWord) -> Result<Option<i32>> {
    let c = build_cube(w)?;
    s_via_rank_matching_in(&c)
}

fn s_via_rank_matching_in(c: &AnnularComplex) -> Result<Option<i32>> {
    let z = lee_class(c, &Orientation::braid(c.word()))?;
    let (mut ws, local) = workspace::<Rational>(c, Differential::Lee, Some((-1, 1)));
    let id = ws.track(0, &z.terms.filter_map_index(|g| Some(local[g])));
    // removing every j-preserving entry leaves a basis of Kh
    ws.cancel_where(|a, b| a.j == b.j);
    let at_zero = |ws: &crate::reduce::CancelComplex<Rational>| ws.remaining().filter(|&g| ws.grading(g).i == 0).count();
    let kh0 = at_zero(&ws);
    let lowest = ws.chain(id).entries().iter().map(|(g, _)| ws.grading(*g).j).min();
    ws.cancel_where(|_, _| true);
    let lee0 = at_zero(&ws);
    if kh0 != lee0 {
        return Ok(None);
    }
    // no surviving differential touches degree 0, so every nonzero part is a nonzero class
    let lowest = lowest.ok_or_else(|| Error::Internal("Lee class projects to zero".into()))?;
    Ok(Some(lowest + 1))
}

pub fn psi_nonvanishing(w: &BraidWord, field: FieldKind) -> Result<bool> {
    let c = build_cube(w)?;
    class_nonzero(&c, &psi_chain(&c), Differential::Khovanov, field)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantSummary {
    pub writhe: i32,
    pub components: usize,
    pub self_linking: i32,
    pub s: i32,
    pub dt: PLFunction,
    pub psi: bool,
}

/// Everything the cube backend knows about a closure, from one cube.
pub fn summarize(w: &BraidWord, solver: &dyn FiltrationSolver<Rational>) -> Result<InvariantSummary> {
    summarize_with_limit(w, solver, DEFAULT_CROSSING_LIMIT)
}

pub fn summarize_with_limit(
    w: &BraidWord,
    solver: &dyn FiltrationSolver<Rational>,
    crossing_limit: usize,
) -> Result<InvariantSummary> {
    let c = build_cube_with_limit(w, crossing_limit)?;
    let p = braid_problem(&c)?;
    Ok(InvariantSummary {
        writhe: w.writhe(),
        components: w.closure_component_count(),
        self_linking: w.self_linking(),
        s: s_from_problem(&p, solver)?,
        dt: dt_from_problem(&p, solver)?,
        psi: class_nonzero(&c, &psi_chain(&c), Differential::Khovanov, FieldKind::Q)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::LevelSearch;

    fn word(s: &str) -> BraidWord {
        BraidWord::parse(s).unwrap()
    }

    const H_INV_S2_4: &str = "3: -1 -2 -1 -2 -1 -2 2 2 2 2";
    const H_S2_NEG4: &str = "3: 1 2 1 2 1 2 -2 -2 -2 -2";

    #[test]
    fn s_examples() {
        assert_eq!(s_invariant(&word(H_INV_S2_4)).unwrap(), -2);
        assert_eq!(s_invariant(&word("2: 1")).unwrap(), 0);
        assert_eq!(s_invariant(&word("2: 1 1")).unwrap(), 1);
        assert_eq!(s_invariant(&word("1:")).unwrap(), 0);
    }

    #[test]
    fn rank_matching_examples() {
        assert_eq!(s_via_rank_matching(&word(H_INV_S2_4)).unwrap(), Some(-2));
        assert_eq!(s_via_rank_matching(&word("2: 1")).unwrap(), Some(0));
    }

    #[test]
    fn dt_examples() {
        assert_eq!(dt_function(&word(H_S2_NEG4)).unwrap(), PLFunction::linear_int(-1, 3));
        assert_eq!(dt_function(&word("3:")).unwrap(), PLFunction::linear_int(-3, 3));
        assert_eq!(dt_function(&word(H_INV_S2_4)).unwrap(), PLFunction::linear_int(-3, 1));
        // s = 1 and w = 2 force d_0 = 0 and d_1 = 2
        assert_eq!(dt_function(&word("2: 1 1")).unwrap(), PLFunction::linear_int(0, 2));
        assert_eq!(dt_value(&word("1:"), &Rational::new(1, 2)).unwrap(), Rational::new(-1, 2));
        assert!(dt_value(&word("1:"), &Rational::new(3, 2)).is_err());
    }

    #[test]
    fn endpoints() {
        for s in ["3: 1 -2 1 -2 1", "4: 1 2 3 -1 -2", "3: -1 -1 2 2 -1", "2: -1 -1 -1"] {
            let w = word(s);
            let f = dt_function(&w).unwrap();
            assert_eq!(f.eval(&Rational::one()).unwrap(), Rational::from_int(w.writhe() as i64), "{s}");
            let s_inv = s_invariant(&w).unwrap();
            assert_eq!(f.eval(&Rational::zero()).unwrap(), Rational::from_int(s_inv as i64 - 1), "{s}");
        }
    }

    #[test]
    fn solvers_agree_on_dt() {
        let w = word("3: 1 -2 1 -2 2 2 -1");
        assert_eq!(dt_function_with(&w, &LevelSearch).unwrap(), dt_function(&w).unwrap());
    }

    #[test]
    fn psi_examples() {
        assert!(!psi_nonvanishing(&word("3: 1 2 1 2 1 2 -2 -2 -2 -2 -2"), FieldKind::Q).unwrap());
        assert!(psi_nonvanishing(&word(H_S2_NEG4), FieldKind::Q).unwrap());
        assert!(psi_nonvanishing(&word("2: 1"), FieldKind::Q).unwrap());
        assert!(!psi_nonvanishing(&word(H_INV_S2_4), FieldKind::Q).unwrap());
    }

    #[test]
    fn summary_of_headline_word() {
        let s = summarize(&word(H_INV_S2_4), &PivotReduction).unwrap();
        assert_eq!((s.writhe, s.s, s.psi, s.components), (-2, -2, false, 3));
        assert_eq!(s.dt, PLFunction::linear_int(-3, 1));
    }
}
