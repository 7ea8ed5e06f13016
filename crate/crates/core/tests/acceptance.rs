//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use tanhrank::compress::reducibility;
use tanhrank::cover::{
    build_graph, clique_partition_within, cover_to_partition, partition_to_cover, solve_scalar_cover, solve_upp_exact,
    verify_cover, verify_partition, CoverInstance, PointSet,
};
use tanhrank::format::{Document, GadgetLibrary};
use tanhrank::proximate::{construct_witness, exact_prank, exact_prank_biasless, greedy_bound, verify_upar_certificate};
use tanhrank::rational::{int, ratio, Rational};
use tanhrank::reductions::xsat::{tile_eps, Dir, Gadget, TileKind, TileType};
use tanhrank::reductions::{
    assignment_to_partition, brute_cover, brute_sat, brute_ssz, check_gadget, find_assignment, gadget_library,
    partition_to_assignment, ssz_certificate, ssz_to_upar, upc_to_par, xsat_to_upp, GridLayout, RestrictedFormula,
    SszInstance,
};
use tanhrank::{compress, expand, rank, Expansion, Parameter, SymmetryTransform, Unit};

const EVAL_TOLERANCE: f64 = 1e-9;
const C1_BUDGET: Duration = Duration::from_secs(10);
const C6_BUDGET: Duration = Duration::from_secs(60);
const C10_BUDGET: Duration = Duration::from_secs(60);
const C12_BUDGET: Duration = Duration::from_secs(1);
const UNIT_LIMIT: usize = 9;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration) -> Result<String, String> {
    let t = start.elapsed();
    check(t < budget, || format!("took {t:.2?}, budget {budget:?}"))?;
    Ok(format!("{t:.2?}"))
}

fn small(rng: &mut StdRng, lo: i64, hi: i64, den: i64) -> Rational {
    ratio(rng.gen_range(lo..=hi), den)
}

fn vector(rng: &mut StdRng, len: usize, lo: i64, hi: i64, den: i64) -> Vec<Rational> {
    (0..len).map(|_| small(rng, lo, hi, den)).collect()
}

/// Units often repeat or negate an earlier incoming vector, or have zero
/// incoming or outgoing weights, so every compression step is exercised.
fn random_parameter(rng: &mut StdRng, n: usize, m: usize, h: usize, den: i64) -> Parameter {
    let mut units: Vec<Unit> = Vec::with_capacity(h);
    for _ in 0..h {
        let a = if rng.gen_bool(0.1) { vec![Rational::zero(); m] } else { vector(rng, m, -3, 3, den) };
        let unit = match (units.len(), rng.gen_range(0..10)) {
            (k, 0..=2) if k > 0 => {
                let src = &units[rng.gen_range(0..k)];
                let s = if rng.gen_bool(0.5) { int(1) } else { int(-1) };
                Unit::new(a, src.b.iter().map(|v| v * &s).collect(), &src.c * &s)
            }
            (_, 3) => Unit::new(a, vec![Rational::zero(); n], small(rng, -2, 2, den)),
            _ => Unit::new(a, vector(rng, n, -2, 2, den), small(rng, -2, 2, den)),
        };
        units.push(unit);
    }
    Parameter::new(n, m, units, vector(rng, m, -2, 2, den)).unwrap()
}

fn random_transform(rng: &mut StdRng, h: usize) -> SymmetryTransform {
    let mut perm: Vec<usize> = (0..h).collect();
    for i in (1..h).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let signs = (0..h).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    SymmetryTransform::new(perm, signs).unwrap()
}

fn max_abs_error(w: &Parameter, rng: &mut StdRng, samples: usize) -> f64 {
    let c = compress(w);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let x: Vec<f64> = (0..w.n()).map(|_| rng.gen_range(-3.0..3.0)).collect();
        for (p, q) in w.evaluate(&x).iter().zip(c.evaluate(&x)) {
            worst = worst.max((p - q).abs());
        }
    }
    worst
}

fn criterion_1() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for k in 0..500 {
        let (n, m, h) = (rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(0..=8));
        let w = random_parameter(&mut rng, n, m, h, 2);
        let err = max_abs_error(&w, &mut rng, 1000);
        worst = worst.max(err);
        check(err <= EVAL_TOLERANCE, || format!("parameter {k}: error {err:e}"))?;
        let reduced = compress(&w).to_parameter_base();
        check(!reducibility(&reduced).is_reducible(), || format!("parameter {k}: output reducible"))?;
    }
    Ok(format!("500 parameters, max error {worst:.1e}, {}", within(start, C1_BUDGET)?))
}

fn incompressible_base(rng: &mut StdRng, n: usize, m: usize, r: usize) -> Parameter {
    loop {
        let units = (0..r).map(|_| Unit::new(vector(rng, m, -3, 3, 1), vector(rng, n, -3, 3, 1), small(rng, -3, 3, 1))).collect();
        let w = Parameter::new(n, m, units, vector(rng, m, -2, 2, 1)).unwrap();
        if !reducibility(&w).is_reducible() {
            return w;
        }
    }
}

fn random_expansion(rng: &mut StdRng, w: &Parameter) -> Expansion {
    let (n, m, h) = (w.n(), w.m(), w.h());
    let pick = if h == 0 { rng.gen_range(2..4) } else { rng.gen_range(0..4) };
    match pick {
        0 | 1 => {
            let unit = rng.gen_range(0..h);
            let first = vector(rng, m, -4, 4, 2);
            let a = &w.unit(unit).a;
            if pick == 0 {
                let second = a.iter().zip(&first).map(|(a, f)| a - f).collect();
                Expansion::Split { unit, first, second }
            } else {
                let second = first.iter().zip(a).map(|(f, a)| f - a).collect();
                Expansion::NegativeSplit { unit, first, second }
            }
        }
        2 => Expansion::ZeroOutgoing { b: vector(rng, n, -3, 3, 2), c: small(rng, -3, 3, 2) },
        _ => Expansion::ZeroIncoming { a: vector(rng, m, -3, 3, 2), c: small(rng, -3, 3, 2) },
    }
}

fn criterion_2() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    for k in 0..200 {
        let r = rng.gen_range(0..=4);
        let (n, m) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let mut w = incompressible_base(&mut rng, n, m, r);
        for _ in 0..rng.gen_range(0..=6) {
            let op = random_expansion(&mut rng, &w);
            w = expand(&w, &op).map_err(|e| e.to_string())?.parameter;
        }
        let w = random_transform(&mut rng, w.h()).apply(&w).map_err(|e| e.to_string())?;
        let got = rank(&w);
        check(got == r, || format!("fixture {k}: rank {got}, expected {r}"))?;
    }
    Ok("200 expanded fixtures".into())
}

fn criterion_3() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    for k in 0..300 {
        let (n, m, h) = (rng.gen_range(1..=2), rng.gen_range(1..=2), rng.gen_range(0..=6));
        let w = random_parameter(&mut rng, n, m, h, 2);
        let eps = small(&mut rng, 1, 6, 4);
        let greedy = greedy_bound(&eps, &w).map_err(|e| e.to_string())?;
        let exact = exact_prank(&eps, &w, UNIT_LIMIT).map_err(|e| e.to_string())?;
        let full = rank(&w);
        check(exact <= greedy.bound && greedy.bound <= full, || {
            format!("case {k}: exact {exact}, greedy {}, rank {full}", greedy.bound)
        })?;
        let witness = construct_witness(&eps, &w, &greedy).map_err(|e| e.to_string())?;
        let d = w.distance(&witness).map_err(|e| e.to_string())?;
        check(d <= eps, || format!("case {k}: witness at distance {d} > {eps}"))?;
        let wr = rank(&witness);
        check(wr == greedy.bound, || format!("case {k}: witness rank {wr}, bound {}", greedy.bound))?;
    }
    Ok("300 cases".into())
}

fn flat(values: &[i64]) -> Parameter {
    Parameter::from_flat(&values.iter().map(|&v| int(v)).collect::<Vec<_>>()).unwrap()
}

fn criterion_4() -> Outcome {
    let a = exact_prank(&int(1), &flat(&[2, 2, 0, 0, 0, 0, 0]), UNIT_LIMIT).map_err(|e| e.to_string())?;
    let b = exact_prank(&int(1), &flat(&[2, 2, 0, 5, 0, 0, 0]), UNIT_LIMIT).map_err(|e| e.to_string())?;
    check((a, b) == (0, 1), || format!("prank values {a} and {b}"))?;
    Ok("prank 0 and 1".into())
}

fn criterion_5() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let grid: Vec<Rational> = [(1, 8), (1, 4), (1, 2), (3, 4), (1, 1), (3, 2), (2, 1), (3, 1)].iter().map(|&(p, q)| ratio(p, q)).collect();
    let prank = |eps: &Rational, w: &Parameter| exact_prank(eps, w, UNIT_LIMIT).map_err(|e| e.to_string());
    for k in 0..100 {
        let (n, m, h) = (rng.gen_range(1..=2), rng.gen_range(1..=2), rng.gen_range(0..=5));
        // Integer entries: every nonzero merge, elimination or cancellation
        // slack is at least 1.
        let w = random_parameter(&mut rng, n, m, h, 1);
        let values = grid.iter().map(|e| prank(e, &w)).collect::<Result<Vec<_>, _>>()?;
        check(values.windows(2).all(|p| p[0] >= p[1]), || format!("case {k}: not antitone {values:?}"))?;
        let t = random_transform(&mut rng, h);
        let wt = t.apply(&w).map_err(|e| e.to_string())?;
        for e in &grid {
            check(prank(e, &wt)? == prank(e, &w)?, || format!("case {k}: transform changes prank at {e}"))?;
        }
        let tiny = ratio(1, 10 * (h as i64 + 1));
        let full = rank(&w);
        let at_tiny = prank(&tiny, &w)?;
        check(at_tiny == full, || format!("case {k}: prank {at_tiny} at {tiny}, rank {full}"))?;
        let norm = w.norm();
        let large = if norm.is_zero() { int(1) } else { norm };
        let at_large = prank(&large, &w)?;
        check(at_large == 0, || format!("case {k}: prank {at_large} at eps = {large}"))?;
    }
    Ok("100 parameters".into())
}

fn random_points(rng: &mut StdRng, p: usize, h: usize) -> PointSet {
    PointSet::new(p, (0..h).map(|_| vector(rng, p, 0, 8, 2)).collect()).unwrap()
}

fn criterion_6() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let start = Instant::now();
    let mut affirmative = 0;
    for k in 0..200 {
        let p = rng.gen_range(1..=3);
        let h = rng.gen_range(1..=10);
        let points = random_points(&mut rng, p, h);
        let eps = small(&mut rng, 1, 4, 2);
        let r = rng.gen_range(1..=h);
        let exact = solve_upp_exact(&points, &eps, 12).map_err(|e| e.to_string())?;
        let partition = exact.len() <= r;
        let radius = &eps / int(2);
        let cover = brute_cover(&points, &radius, r).map_err(|e| e.to_string())?;
        let clique = clique_partition_within(&build_graph(&points, &eps), r, 12).map_err(|e| e.to_string())?;
        check(partition == cover && cover == clique, || format!("instance {k}: partition {partition}, cover {cover}, clique {clique}"))?;
        let centres = partition_to_cover(&points, &exact, &eps).map_err(|e| e.to_string())?;
        check(verify_cover(&points, &centres, &radius), || format!("instance {k}: derived cover fails"))?;
        let back = cover_to_partition(&points, &centres, &eps).map_err(|e| e.to_string())?;
        check(back.len() <= exact.len() && verify_partition(&points, &back, &eps).unwrap_or(false), || {
            format!("instance {k}: derived partition fails")
        })?;
        affirmative += usize::from(partition);
    }
    Ok(format!("200 instances ({affirmative} affirmative), {}", within(start, C6_BUDGET)?))
}

fn criterion_7() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    for k in 0..200 {
        let h = rng.gen_range(0..=10);
        let xs = vector(&mut rng, h, -20, 20, 3);
        let eps = small(&mut rng, 1, 6, 4);
        let centres = solve_scalar_cover(&eps, &xs);
        let points = PointSet::new(1, xs.iter().map(|x| vec![x.clone()]).collect()).unwrap();
        let cover = tanhrank::cover::Cover { points: centres.iter().map(|c| vec![c.clone()]).collect() };
        check(verify_cover(&points, &cover, &eps), || format!("set {k}: not a cover"))?;
        let len = centres.len();
        let minimal = len == 0 || !brute_cover(&points, &eps, len - 1).map_err(|e| e.to_string())?;
        check(minimal, || format!("set {k}: {len} centres are not minimal"))?;
    }
    Ok("200 scalar sets".into())
}

fn criterion_8() -> Outcome {
    let lattice: Vec<Vec<Rational>> = (0..3).flat_map(|x| (0..3).map(move |y| vec![ratio(x, 2), ratio(y, 2)])).collect();
    let mut instances = 0;
    for mask in 1u32..1 << lattice.len() {
        if mask.count_ones() > 4 {
            continue;
        }
        let chosen: Vec<Vec<Rational>> = (0..lattice.len()).filter(|i| mask >> i & 1 == 1).map(|i| lattice[i].clone()).collect();
        let h = chosen.len();
        let points = PointSet::new(2, chosen).unwrap();
        for eps in [ratio(1, 4), ratio(1, 2)] {
            let inst = CoverInstance::new(points.clone(), eps.clone(), 0).unwrap();
            let par = upc_to_par(&inst).map_err(|e| e.to_string())?;
            let prank = exact_prank(&par.eps, &par.parameter, UNIT_LIMIT).map_err(|e| e.to_string())?;
            for r in 0..=h {
                let cover = brute_cover(&points, &eps, r).map_err(|e| e.to_string())?;
                check(cover == (prank <= r), || format!("mask {mask:#b}, eps {eps}, r {r}: cover {cover}, prank {prank}"))?;
                instances += 1;
            }
        }
    }
    Ok(format!("{instances} lattice instances"))
}

fn criterion_9() -> Outcome {
    let values = [-2i64, -1, 1, 2];
    let mut count = 0;
    for &a in &values {
        for &b in &values {
            for &c in &values {
                let inst = SszInstance::new(vec![a, b, c]).map_err(|e| e.to_string())?;
                let u = ssz_to_upar(&inst).map_err(|e| e.to_string())?;
                let prank = exact_prank_biasless(&u.eps, &u.parameter, UNIT_LIMIT).map_err(|e| e.to_string())?;
                let expected = brute_ssz(&inst.x).map_err(|e| e.to_string())?;
                check(u.parameter.h() == 9 && (prank <= u.r) == expected, || format!("x = {:?}: prank {prank}, r {}", inst.x, u.r))?;
                count += 1;
            }
        }
    }
    let inst = SszInstance::new(vec![-3, -4, 1, -5, 2]).map_err(|e| e.to_string())?;
    let u = ssz_to_upar(&inst).map_err(|e| e.to_string())?;
    check(u.parameter.h() == 25 && u.eps == ratio(3, 8) && u.r == 9, || format!("h {}, eps {}, r {}", u.parameter.h(), u.eps, u.r))?;
    let cert = ssz_certificate(&inst, &[0, 2, 4]).map_err(|e| e.to_string())?;
    let ok = verify_upar_certificate(&u.eps, u.r, &u.parameter, &cert).map_err(|e| e.to_string())?;
    check(ok, || "certificate from {1, 3, 5} rejected".into())?;
    Ok(format!("{count} triples, h = 25 instance certified"))
}

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn library_from(kind: TileKind, dirs: &[Dir], neg: Option<Dir>, r: usize, interior: &[(i64, i64)]) -> Gadget {
    let tile = TileType::new(kind, dirs, neg).unwrap();
    Gadget::new(tile, r, interior.iter().map(|&(x, y)| [ratio(x, 8), ratio(y, 8)]).collect()).unwrap()
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let eps = tile_eps();
    let shipped = GadgetLibrary::from_json_str(&fixture("gadgets.json")).map_err(|e| e.to_string())?;
    check(shipped.gadgets == gadget_library(), || "shipped library differs from the built-in one".into())?;
    check(shipped.gadgets.len() == 40, || format!("{} gadgets", shipped.gadgets.len()))?;
    for g in &shipped.gadgets {
        let report = check_gadget(g, &eps).map_err(|e| e.to_string())?;
        check(report.passes(g.r()), || format!("{} fails: {report:?}", g.tile()))?;
    }
    use Dir::*;
    let bad = [
        library_from(TileKind::Edge, &[W, E], None, 2, &[(4, 4), (4, 4), (4, 4)]),
        library_from(TileKind::Edge, &[W, E], None, 2, &[(2, 4), (2, 4), (6, 4), (6, 4)]),
        library_from(TileKind::Variable, &[W, E], Some(W), 2, &[(2, 4), (6, 4)]),
        library_from(TileKind::Clause, &[W, N, E], None, 3, &[(2, 4), (4, 6), (6, 4)]),
        library_from(TileKind::Variable, &[W, S, E], Some(S), 3, &[(2, 4), (6, 4), (4, 2)]),
    ];
    for g in &bad {
        let report = check_gadget(g, &eps).map_err(|e| e.to_string())?;
        check(!report.passes(g.r()), || format!("known-bad {} passes", g.tile()))?;
    }
    Ok(format!("40 gadgets pass, {} known-bad fail, {}", bad.len(), within(start, C10_BUDGET)?))
}

fn load(name: &str) -> Result<(RestrictedFormula, GridLayout), String> {
    let f = RestrictedFormula::from_json_str(&fixture(&format!("{name}_formula.json"))).map_err(|e| e.to_string())?;
    let layout = GridLayout::from_json_str(&fixture(&format!("{name}_layout.json"))).map_err(|e| e.to_string())?;
    Ok((f, layout))
}

fn criterion_11() -> Outcome {
    let mut notes = Vec::new();
    for (name, sat) in [("phi1", false), ("phi2", true), ("phi3", true)] {
        let (f, layout) = load(name)?;
        let red = xsat_to_upp(&f, &layout).map_err(|e| e.to_string())?;
        let got = brute_sat(&f).map_err(|e| e.to_string())?;
        check(got == sat, || format!("{name}: brute_sat {got}"))?;
        if sat {
            let a = find_assignment(&f).map_err(|e| e.to_string())?.expect("satisfiable");
            let p = assignment_to_partition(&f, &layout, &a).map_err(|e| e.to_string())?;
            let ok = verify_partition(&red.instance.points, &p, &red.instance.eps).map_err(|e| e.to_string())?;
            check(ok && p.len() == red.instance.r, || format!("{name}: partition with {} groups fails", p.len()))?;
            let back = partition_to_assignment(&f, &layout, &p).map_err(|e| e.to_string())?;
            check(f.satisfied_by(&back), || format!("{name}: recovered assignment unsatisfying"))?;
        }
        notes.push(format!("{name} h={} r={}", red.instance.points.len(), red.instance.r));
    }
    Ok(notes.join(", "))
}

fn criterion_12() -> Outcome {
    let mut rng = StdRng::seed_from_u64(12);
    let h = 100_000;
    let units: Vec<(Rational, Rational, Rational)> =
        (0..h).map(|_| (small(&mut rng, -5, 5, 1), small(&mut rng, -500, 500, 7), small(&mut rng, -20, 20, 3))).collect();
    let w = Parameter::scalar(units, int(0));
    let start = Instant::now();
    let c = compress(&w);
    let t_compress = within(start, C12_BUDGET)?;
    let start = Instant::now();
    let r = rank(&w);
    let t_rank = within(start, C12_BUDGET)?;
    check(r == c.r(), || format!("rank {r} differs from compressed size {}", c.r()))?;
    Ok(format!("h = {h}: compress {t_compress}, rank {t_rank}, rank {r}"))
}

fn main() {
    type Criterion = (u32, &'static str, fn() -> Outcome);
    let criteria: [Criterion; 12] = [
        (1, "compression soundness", criterion_1),
        (2, "rank of expanded fixtures", criterion_2),
        (3, "greedy bound sandwich", criterion_3),
        (4, "worked example", criterion_4),
        (5, "proximate rank properties", criterion_5),
        (6, "cover, partition and clique agreement", criterion_6),
        (7, "scalar cover optimality", criterion_7),
        (8, "point cover to proximate rank", criterion_8),
        (9, "subset sum zero to biasless proximate rank", criterion_9),
        (10, "gadget contracts", criterion_10),
        (11, "satisfiability pipeline", criterion_11),
        (12, "large input performance", criterion_12),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
