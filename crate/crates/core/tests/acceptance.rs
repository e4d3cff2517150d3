//! End-to-end acceptance battery. Runs every criterion, prints one line per
//! criterion and exits nonzero if any of them fails.

use std::collections::{BTreeMap, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use khb_core::homology::{
    homology_dims, Detail, Differential, FiltrationFunctional, FiltrationSolver, LevelProblem, LevelSearch,
    PivotReduction,
};
use khb_core::invariants::{dt_function, psi_nonvanishing, s_invariant, s_via_rank_matching, summarize};
use khb_core::linalg::SparseVec;
use khb_core::murasugi3::{classify3, in_list_a, mirror_nf, Classification3, Fallback};
use khb_core::resolution::{build_cube, AnnularComplex};
use khb_core::scanner::scan_kh_dims;
use khb_core::shapes::{dt3_closed_form, enumerate_dt_shapes, enumerate_upsilon_shapes};
use khb_core::{BraidWord, Error, Field, FieldKind, MurasugiNF, PLFunction, Rational, F2};

type Outcome = Result<String, String>;

const HEADLINE: &str = "3: -1 -2 -1 -2 -1 -2 2 2 2 2";

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: khb_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn word(s: &str) -> BraidWord {
    BraidWord::parse(s).unwrap()
}

fn random_word(rng: &mut ChaCha8Rng, strands: usize, max_len: usize) -> BraidWord {
    let len = if strands < 2 { 0 } else { rng.gen_range(0..=max_len) };
    let letters = (0..len)
        .map(|_| {
            let g = rng.gen_range(1..strands as i32);
            if rng.gen_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect();
    BraidWord::new(strands, letters).unwrap()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn headline_s() -> Outcome {
    let w = word(HEADLINE);
    let s = ok(s_invariant(&w))?;
    ensure(s == -2, || format!("s_invariant gave {s}"))?;
    let r = ok(s_via_rank_matching(&w))?;
    ensure(r == Some(-2), || format!("rank matching gave {r:?}"))?;
    let (dims, took) = timed(|| homology_dims(&build_cube(&w)?, Differential::Khovanov, FieldKind::Q, Detail::IJ));
    ok(dims)?;
    ensure(took < Duration::from_secs(60), || format!("cube homology took {took:?}"))?;
    Ok(format!("s = -2 both ways, 10-crossing cube in {took:.2?}"))
}

fn headline_row() -> Outcome {
    let w = word(HEADLINE);
    let c = ok(build_cube(&w))?;
    let expect: BTreeMap<i32, usize> = [(-3, 1), (-1, 3), (1, 2)].into();
    let cube = ok(homology_dims(&c, Differential::Khovanov, FieldKind::Q, Detail::IJ))?.row(0);
    ensure(cube == expect, || format!("cube row 0 is {cube:?}"))?;
    let scan = ok(scan_kh_dims(&w))?.row(0);
    ensure(scan == expect, || format!("scanner row 0 is {scan:?}"))?;
    let lee = ok(homology_dims(&c, Differential::Lee, FieldKind::Q, Detail::I))?;
    ensure(lee.at_i(0) == 6, || format!("Lee dimension at i=0 is {}", lee.at_i(0)))?;
    ensure(lee.total() == 8, || format!("total Lee dimension is {}", lee.total()))?;
    Ok("row 0 = {-3:1, -1:3, 1:2} from cube and scanner, Lee 6 at i=0, total 8".into())
}

fn shape_counts() -> Outcome {
    let mut seen = Vec::new();
    let mut failures = Vec::new();
    for (n, want) in [(3, 3), (4, 7), (5, 18)] {
        let (set, took) = timed(|| enumerate_dt_shapes(n));
        let got = ok(set)?.len();
        seen.push(format!("n={n}: {got}"));
        if got != want {
            failures.push(format!("n={n} gives {got} shapes, expected {want}"));
        }
        if took >= Duration::from_secs(10) {
            failures.push(format!("n={n} took {took:?}"));
        }
    }
    for (c, check, label) in [(1, (|k| k == 5) as fn(usize) -> bool, "= 5"), (2, |k| k > 50, "> 50")] {
        let (set, took) = timed(|| enumerate_upsilon_shapes(c));
        let got = ok(set)?.len();
        seen.push(format!("c={c}: {got}"));
        if !check(got) {
            failures.push(format!("c={c} gives {got} Upsilon shapes, expected {label}"));
        }
        if took >= Duration::from_secs(10) {
            failures.push(format!("c={c} took {took:?}"));
        }
    }
    if failures.is_empty() {
        Ok(seen.join(", "))
    } else {
        Err(failures.join("; "))
    }
}

/// Exponent lists of family-1 forms whose word has at most `budget`
/// letters, one per cyclic rotation class (rotations are conjugate).
fn family1_lists(budget: usize) -> Vec<Vec<u32>> {
    fn grow(prefix: &mut Vec<u32>, left: usize, out: &mut Vec<Vec<u32>>) {
        if !prefix.is_empty() && prefix.iter().any(|&a| a > 0) {
            out.push(prefix.clone());
        }
        for a in 0..left {
            prefix.push(a as u32);
            grow(prefix, left - 1 - a, out);
            prefix.pop();
        }
    }
    let mut all = Vec::new();
    grow(&mut Vec::new(), budget, &mut all);
    all.retain(|a| (1..a.len()).all(|r| {
        let rotated: Vec<u32> = a[r..].iter().chain(&a[..r]).copied().collect();
        rotated >= *a
    }));
    all
}

fn grid() -> Vec<MurasugiNF> {
    let mut nfs = Vec::new();
    for d in [0, 1] {
        for a in family1_lists(12 - 6 * d as usize) {
            nfs.push(MurasugiNF::Family1 { d, a });
        }
    }
    for d in -1..=1 {
        for m in -5..=5 {
            nfs.push(MurasugiNF::Family2 { d, m });
        }
    }
    for d in [0, 1] {
        for m in -3..=-1 {
            nfs.push(MurasugiNF::Family3 { d, m });
        }
    }
    nfs
}

struct GridRow {
    nf: MurasugiNF,
    writhe: i32,
    class: Classification3,
    dt: PLFunction,
    s: i32,
    psi: bool,
}

fn classify_with_fallback(nf: &MurasugiNF) -> khb_core::Result<Classification3> {
    let mirror = mirror_nf(nf);
    match classify3(nf, mirror.as_ref(), Fallback::None) {
        Err(Error::Undetermined) => classify3(nf, mirror.as_ref(), Fallback::Compute),
        r => r,
    }
}

fn grid_rows() -> Result<Vec<GridRow>, String> {
    grid()
        .into_iter()
        .map(|nf| {
            let w = ok(nf.to_word())?;
            let class = ok(classify_with_fallback(&nf))?;
            let sum = ok(summarize(&w, &PivotReduction))?;
            Ok(GridRow {
                writhe: w.writhe(),
                nf,
                class,
                dt: sum.dt,
                s: sum.s,
                psi: sum.psi,
            })
        })
        .collect()
}

fn dt3_grid(rows: &[GridRow]) -> Outcome {
    let mut by_source: BTreeMap<String, usize> = BTreeMap::new();
    for r in rows {
        let closed = ok(dt3_closed_form(r.class.delta, r.writhe))?;
        ensure(r.dt == closed, || {
            format!("{}: d_t = {} but the closed form for delta {} is {closed}", r.nf, r.dt, r.class.delta)
        })?;
        *by_source.entry(format!("{:?}", r.class.source)).or_default() += 1;
    }
    Ok(format!("{} normal forms agree ({by_source:?})", rows.len()))
}

fn psi_grid(rows: &[GridRow]) -> Outcome {
    let mut nonzero = 0;
    for r in rows {
        let listed = ok(in_list_a(&r.nf))?;
        let sharp = r.s == r.writhe - 2;
        ensure(r.psi == listed && listed == sharp, || {
            format!("{}: psi nonzero {}, in list A {listed}, s = w - 2 {sharp}", r.nf, r.psi)
        })?;
        nonzero += usize::from(r.psi);
    }
    let pivot = |m| psi_nonvanishing(&MurasugiNF::Family2 { d: 1, m }.to_word()?, FieldKind::Q);
    ensure(!ok(pivot(-5))?, || "psi of h s2^-5 is nonzero".into())?;
    ensure(ok(pivot(-4))?, || "psi of h s2^-4 vanishes".into())?;
    Ok(format!("{} normal forms agree ({nonzero} with psi nonzero), pivots hold", rows.len()))
}

/// `∂∘∂` on every generator, using the integer rows of the cube.
fn square_vanishes(c: &AnnularComplex, lee: bool) -> bool {
    let row = |g: usize| -> Vec<(u32, i64)> {
        let mut r: Vec<(u32, i64)> = c.d_row(g).iter().map(|&(t, s)| (t, s as i64)).collect();
        if lee {
            r.extend(c.phi_row(g).iter().map(|&(t, s)| (t, s as i64)));
        }
        r
    };
    (0..c.len()).all(|g| {
        let mut acc: HashMap<u32, i64> = HashMap::new();
        for (t, a) in row(g) {
            for (u, b) in row(t as usize) {
                *acc.entry(u).or_default() += a * b;
            }
        }
        acc.values().all(|&v| v == 0)
    })
}

/// `∂` keeps `j`, and every entry of `∂ + Φ` does not lower `j - t k` for
/// `t` in `{0, 2}`.
fn entries_filtered(c: &AnnularComplex) -> bool {
    let gens = c.generators();
    (0..c.len()).all(|g| {
        let a = &gens[g];
        let keeps_j = c.d_row(g).iter().all(|&(t, _)| gens[t as usize].j == a.j);
        let filtered = c.d_row(g).iter().chain(c.phi_row(g)).all(|&(t, _)| {
            let b = &gens[t as usize];
            [0, 2].iter().all(|&tau| b.j - tau * b.k >= a.j - tau * a.k)
        });
        keeps_j && filtered
    })
}

fn property_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let shapes: HashMap<usize, _> = (2..=4).map(|n| (n, enumerate_dt_shapes(n).unwrap())).collect();
    let count = 50;
    for _ in 0..count {
        let n = rng.gen_range(2..=4);
        let w = random_word(&mut rng, n, 10);
        let c = ok(build_cube(&w))?;
        ensure(square_vanishes(&c, false), || format!("{w}: d^2 != 0"))?;
        ensure(square_vanishes(&c, true), || format!("{w}: (d + Phi)^2 != 0"))?;
        ensure(entries_filtered(&c), || format!("{w}: an entry breaks the filtration"))?;
        let sum = ok(summarize(&w, &PivotReduction))?;
        let d0 = ok(sum.dt.eval(&Rational::zero()))?;
        let d1 = ok(sum.dt.eval(&Rational::one()))?;
        ensure(d1 == Rational::from_int(w.writhe() as i64), || format!("{w}: d_1 = {d1}"))?;
        ensure(d0 == Rational::from_int(sum.s as i64 - 1), || format!("{w}: d_0 = {d0}, s = {}", sum.s))?;
        let allowed: Vec<Rational> = (0..n as i64).map(|k| Rational::from_int(n as i64 - 2 * k)).collect();
        ensure(sum.dt.slopes().iter().all(|s| allowed.contains(s)), || {
            format!("{w}: slopes {:?}", sum.dt.slopes())
        })?;
        let shape = sum.dt.translate(&Rational::from_int(-(w.writhe() as i64)));
        ensure(shapes[&n].contains(&shape), || format!("{w}: shape {shape} is not enumerated"))?;
        let cube = ok(homology_dims(&c, Differential::Khovanov, FieldKind::Q, Detail::IJ))?;
        let scan = ok(scan_kh_dims(&w))?;
        ensure(cube == scan, || format!("{w}: scanner and cube ranks differ"))?;
    }
    Ok(format!("{count} random words"))
}

fn sample_points(fs: &[&PLFunction]) -> Vec<Rational> {
    let mut ts: Vec<Rational> = fs.iter().flat_map(|f| f.breakpoints().iter().map(|b| b.t.clone())).collect();
    ts.sort();
    ts.dedup();
    ts
}

fn mirror_and_union() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut knots = 0;
    while knots < 10 {
        let n = rng.gen_range(2..=4);
        let w = random_word(&mut rng, n, 10);
        if w.closure_component_count() != 1 {
            continue;
        }
        let (s, sm) = (ok(s_invariant(&w))?, ok(s_invariant(&w.mirror()))?);
        ensure(sm == -s, || format!("{w}: s = {s} but s(mirror) = {sm}"))?;
        knots += 1;
    }
    for _ in 0..10 {
        let (na, nb) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let a = random_word(&mut rng, na, 5);
        let b = random_word(&mut rng, nb, 5);
        let sum = ok(dt_function(&a))?.add(&ok(dt_function(&b))?);
        let joint = ok(dt_function(&a.disjoint_union(&b)))?;
        ensure(joint == sum, || format!("{a} and {b}: d_t of the union is {joint}, the sum is {sum}"))?;
    }
    let mut steps = 0;
    for _ in 0..20 {
        let n = rng.gen_range(2..=4);
        let w = random_word(&mut rng, n, 9);
        let g = rng.gen_range(1..n as i32) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let f = ok(dt_function(&w))?;
        let h = ok(dt_function(&w.with_letter(g).unwrap()))?;
        for t in sample_points(&[&f, &h]) {
            let diff = (&ok(h.eval(&t))? - &ok(f.eval(&t))?).abs();
            ensure(diff <= Rational::one(), || format!("{w} then {g}: d_t moves by {diff} at t = {t}"))?;
        }
        steps += 1;
    }
    let mut mono = 0;
    while mono < 20 {
        let w = random_word(&mut rng, 3, 9);
        let g = rng.gen_range(1..=2) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let f = ok(dt_function(&w))?;
        let h = ok(dt_function(&w.with_letter(g).unwrap()))?;
        let pts = sample_points(&[&f, &h]);
        for t in &pts[..pts.len() - 1] {
            let (a, b) = (f.right_slope(t), h.right_slope(t));
            let good = if g > 0 { b >= a } else { b <= a };
            ensure(good, || format!("{w} then {g}: slope goes from {a} to {b} at t = {t}"))?;
        }
        mono += 1;
    }
    Ok(format!("{knots} mirrors, 10 unions, {steps} added letters, {mono} 3-braid slope cases"))
}

fn random_level_problem(rng: &mut ChaCha8Rng) -> LevelProblem<F2> {
    let grading = |rng: &mut ChaCha8Rng| (rng.gen_range(-4..=4) * 2, rng.gen_range(-2..=2) * 2);
    let (ns, nt) = (rng.gen_range(0..=12), rng.gen_range(1..=12));
    let density = rng.gen_range(0.15..0.6);
    let random_vec = |rng: &mut ChaCha8Rng| {
        SparseVec::from_entries((0..nt).filter(|_| rng.gen_bool(density)).map(|t| (t, F2::one())).collect())
    };
    LevelProblem {
        source: (0..ns).map(|_| grading(rng)).collect(),
        target: (0..nt).map(|_| grading(rng)).collect(),
        columns: (0..ns).map(|_| random_vec(rng)).collect(),
        z: random_vec(rng),
    }
}

/// Best level over every representative `z + Σ_{c in S} c`, or `None` when
/// some representative is zero.
fn brute_force_level(p: &LevelProblem<F2>, phi: &FiltrationFunctional) -> Option<Rational> {
    let nt = p.target.len();
    let dense = |v: &SparseVec<F2>| v.entries().iter().fold(0u32, |m, (i, _)| m | 1 << i);
    let z = dense(&p.z);
    let cols: Vec<u32> = p.columns.iter().map(dense).collect();
    let mut best: Option<Rational> = None;
    for subset in 0u32..1 << cols.len() {
        let mut v = z;
        for (k, c) in cols.iter().enumerate() {
            if subset >> k & 1 == 1 {
                v ^= c;
            }
        }
        if v == 0 {
            return None;
        }
        let level = (0..nt)
            .filter(|&g| v >> g & 1 == 1)
            .map(|g| phi.value(p.target[g].0, p.target[g].1))
            .min()
            .unwrap();
        if best.as_ref().is_none_or(|b| level > *b) {
            best = Some(level);
        }
    }
    best
}

fn solver_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let ts = [Rational::zero(), Rational::new(1, 2), Rational::one(), Rational::from_int(2)];
    let count = 40;
    let mut zero_classes = 0;
    for case in 0..count {
        let p = random_level_problem(&mut rng);
        for t in &ts {
            let phi = ok(FiltrationFunctional::new(t.clone()))?;
            let want = brute_force_level(&p, &phi);
            let search = LevelSearch.level(&p, &phi);
            let pivot = PivotReduction.level(&p, &phi);
            ensure(search == want && pivot == want, || {
                format!("case {case} at t = {t}: brute force {want:?}, level search {search:?}, pivots {pivot:?}")
            })?;
            zero_classes += usize::from(want.is_none() && *t == ts[0]);
        }
    }
    Ok(format!("{count} random problems at 4 values of t ({zero_classes} zero classes)"))
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |n: usize, f: &dyn Fn() -> Outcome| {
        let (res, took) = timed(|| catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into())));
        match res {
            Ok(detail) => println!("criterion {n}: PASS ({detail}) [{took:.1?}]"),
            Err(why) => {
                failed += 1;
                println!("criterion {n}: FAIL ({why}) [{took:.1?}]");
            }
        }
    };
    report(1, &headline_s);
    report(2, &headline_row);
    report(3, &shape_counts);
    let (rows, grid_time) = timed(grid_rows);
    println!("verification grid computed in {grid_time:.1?}");
    report(4, &|| dt3_grid(rows.as_ref().map_err(Clone::clone)?));
    report(5, &|| psi_grid(rows.as_ref().map_err(Clone::clone)?));
    report(6, &property_suite);
    report(7, &mirror_and_union);
    report(8, &solver_oracle);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
