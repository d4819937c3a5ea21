//! End-to-end acceptance run. Prints one line per criterion and exits
//! nonzero if any of them fails.

mod common;

use std::collections::HashSet;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use common::*;
use garden_core::bwg::{
    apply_move, chordless_classes, enumerate_bwgs, equivalence_classes, morse_moves, BoundaryWeightedGarden,
    HalfGardenDiagram,
};
use garden_core::garden::{
    boundary_sums, edge_weights, face_signs, to_boundary_weighted, trace_garden, GardenError, TraceOptions,
    TracedGarden,
    DEFAULT_LAMBDA_TOL,
};
use garden_core::hb::{
    canonical_reduction, has_real_zero_mu, reduce_with, reduction_count_t, winding_number, zero_distribution, Color,
    ColoredArrangement,
};
use garden_core::hunt::{hawaii_check, hawaii_exhaustive, hawaii_wronskian, hunt_driver, Target, TrialConfig};
use garden_core::pencil::{
    catalan_degree, has_constant_real_count, real_count_profile, zeros_interlace, Pencil,
};
use garden_core::poly::{real_root_count, RealPoly, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(start: Instant, limit: f64) -> Result<(), String> {
    let s = start.elapsed().as_secs_f64();
    check(s < limit, || format!("took {s:.1} s, limit {limit} s"))
}

fn class_counts() -> Outcome {
    let start = Instant::now();
    let counts: Vec<usize> = (1..=6).map(|n| equivalence_classes(n).count).collect();
    check(counts == [1, 2, 4, 8, 14, 28], || format!("counts {counts:?}"))?;
    within_time(start, 60.0)?;
    Ok(format!("{counts:?}"))
}

fn chordless() -> Outcome {
    let counts: Vec<usize> = (1..=10).map(chordless_classes).collect();
    let expect: Vec<usize> = (1..=10usize).map(|n| (n + 1) / 2).collect();
    check(counts == expect, || format!("{counts:?} vs {expect:?}"))?;
    Ok(format!("{counts:?}"))
}

fn catalan() -> Outcome {
    let d: Vec<String> = (1..=5).map(|n| catalan_degree(n).map(|v| v.to_string()).map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
    check(d == ["1", "1", "2", "5", "14"], || format!("{d:?}"))?;
    Ok(d.join(", "))
}

/// Zeros of `P` and `Q` alternate strictly; `deg Q` is `n` or `n − 1`.
fn interlacing_pencil(rng: &mut ChaCha8Rng) -> Pencil {
    let n = rng.gen_range(1..=8usize);
    let mut x = -20i64;
    let pts: Vec<Rational> = (0..2 * n)
        .map(|_| {
            x += rng.gen_range(1..=6);
            r(x, 3)
        })
        .collect();
    let rs: Vec<Rational> = pts.iter().step_by(2).cloned().collect();
    let take = if rng.gen() { n } else { n - 1 };
    let ss: Vec<Rational> = pts.iter().skip(1).step_by(2).take(take).cloned().collect();
    Pencil::new(RealPoly::from_roots(&rs), RealPoly::from_roots(&ss), n).expect("independent")
}

fn projective_count(f: &RealPoly, n: usize) -> usize {
    let d = f.degree().expect("nonzero member");
    let finite = if d == 0 { 0 } else { real_root_count(f).unwrap() };
    finite + (n - d)
}

fn constant_count() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut members = 0;
    for i in 0..200 {
        let l = interlacing_pencil(&mut rng);
        let n = l.n();
        check(zeros_interlace(l.p(), l.q()).unwrap(), || "constructed pair does not interlace".into())?;
        let got = has_constant_real_count(&l).map_err(|e| e.to_string())?;
        check(got == (true, Some(n)), || format!("interlacing pencil {i}: {got:?}, n = {n}"))?;
        if i < 50 {
            let t = if rng.gen_range(0..10) == 0 { None } else { Some(r(rng.gen_range(-50..=50), rng.gen_range(1..=7))) };
            let m = l.member(t.as_ref());
            let k = projective_count(&m, n);
            check(k == n, || format!("member {m} has {k} real zeros, expected {n}"))?;
            members += 1;
        }
    }
    let mut varying = 0;
    while varying < 200 {
        let n = rng.gen_range(2..=8);
        let l = random_generic_pencil(&mut rng, n, 6);
        if zeros_interlace(l.p(), l.q()).unwrap_or(false) {
            continue;
        }
        let w = l.wronskian();
        if real_root_count(&w).unwrap() == 0 {
            continue;
        }
        let prof = real_count_profile(&l).map_err(|e| e.to_string())?;
        let distinct = prof.distinct_counts();
        check(distinct.len() >= 2, || format!("profile {:?} of ({}, {})", prof.counts, l.p(), l.q()))?;
        varying += 1;
    }
    within_time(start, 60.0)?;
    Ok(format!("200 interlacing, {members} members recounted, {varying} varying profiles"))
}

fn quartic_example() -> Outcome {
    let p = rp(&[-4, -5, 1, 0, 1]);
    let w = hawaii_wronskian(&p);
    let real = real_root_count(&w).map_err(|e| e.to_string())?;
    check(real == 0, || format!("W(P, P′) has {real} real zeros"))?;
    let l = Pencil::new(p.clone(), p.derivative(), 4).map_err(|e| e.to_string())?;
    let prof = real_count_profile(&l).map_err(|e| e.to_string())?;
    check(prof.is_constant(), || format!("profile {:?}", prof.counts))?;
    let h = hawaii_check(&p).map_err(|e| e.to_string())?;
    check(h.pass, || format!("{h:?}"))?;
    Ok(format!("w_real = {}, two_s = {}, profile {:?}", h.w_real, h.two_s, prof.counts))
}

fn circle_garden() -> Outcome {
    let l = Pencil::new(rp(&[1, 0, 1]), rp(&[0, 1]), 2).unwrap();
    let t = face_signs(&trace_garden(&l, &TraceOptions::default()).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    check((t.vertices.len(), t.chords.len(), t.ovals.len()) == (2, 1, 0), || {
        format!("{} vertices, {} chords, {} ovals", t.vertices.len(), t.chords.len(), t.ovals.len())
    })?;
    let w = edge_weights(&t).map_err(|e| e.to_string())?;
    let expect = 2.0 * 2f64.atan() / PI;
    check((w.chords[0] - expect).abs() < 1e-6, || format!("chord weight {} vs {expect}", w.chords[0]))?;
    let sums = boundary_sums(&t, &w).map_err(|e| e.to_string())?;
    check(sums.len() == 2 && sums.iter().all(|s| (s - 1.0).abs() < 1e-6), || format!("boundary sums {sums:?}"))?;
    let g = to_boundary_weighted(&t, &w, DEFAULT_LAMBDA_TOL).map_err(|e| e.to_string())?;
    let one_chord = BoundaryWeightedGarden::new(HalfGardenDiagram::new(vec![1, 0]).unwrap(), vec![1, 1], vec![vec![], vec![]])
        .unwrap();
    check(g.canonical_key() == one_chord.canonical_key(), || format!("key {}", g.canonical_key()))?;
    Ok(format!("chord weight {:.9}, boundary sums {:.9}, {:.9}", w.chords[0], sums[0], sums[1]))
}

/// Traces a random generic pencil, drawing again when the garden is
/// singular; returns the number of singular draws too.
fn traced_pencil(rng: &mut ChaCha8Rng, n: usize) -> Result<(Pencil, TracedGarden, usize), String> {
    let mut singular = 0;
    loop {
        let l = random_generic_pencil(rng, n, 6);
        match trace_garden(&l, &TraceOptions::default()).and_then(|t| face_signs(&t)) {
            Ok(t) => return Ok((l, t, singular)),
            Err(GardenError::Singular(_)) => singular += 1,
            Err(e) => return Err(format!("({}, {}), n = {n}: {e}", l.p(), l.q())),
        }
    }
}

fn conservation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let mut worst_boundary = 0.0f64;
    let mut singular = 0;
    for i in 0..50 {
        let n = 1 + i % 5;
        let (l, t, s) = traced_pencil(&mut rng, n)?;
        singular += s;
        let w = edge_weights(&t).map_err(|e| e.to_string())?;
        let err = (w.total - n as f64).abs();
        worst = worst.max(err);
        check(err < 1e-6, || format!("total {} for n = {n}, ({}, {})", w.total, l.p(), l.q()))?;
        let sums = boundary_sums(&t, &w).map_err(|e| e.to_string())?;
        for s in sums.iter().chain(&w.ovals) {
            let d = (s - s.round()).abs();
            worst_boundary = worst_boundary.max(d);
            check(s.round() >= 1.0 && d < 1e-4, || format!("boundary sum {s} for ({}, {})", l.p(), l.q()))?;
        }
    }
    Ok(format!("max |total − n| = {worst:.2e}, max boundary rounding {worst_boundary:.2e}, {singular} singular redraws"))
}

fn basis_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let key = |l: &Pencil| -> Result<String, String> {
        let t = face_signs(&trace_garden(l, &TraceOptions::default()).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let w = edge_weights(&t).map_err(|e| e.to_string())?;
        Ok(to_boundary_weighted(&t, &w, DEFAULT_LAMBDA_TOL).map_err(|e| e.to_string())?.canonical_key())
    };
    let mut singular = 0;
    for i in 0..25 {
        let (l, _, s) = traced_pencil(&mut rng, 2 + i % 4)?;
        singular += s;
        let k = key(&l)?;
        for _ in 0..4 {
            let (a, b, c, d) = random_basis_change(&mut rng);
            let m = l.change_basis(&a, &b, &c, &d).map_err(|e| e.to_string())?;
            let km = key(&m)?;
            check(km == k, || format!("{k} vs {km} for ({}, {})", l.p(), l.q()))?;
        }
    }
    Ok(format!("25 pencils × 4 bases, {singular} singular redraws"))
}

fn hermite_biehler() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut redraws = 0;
    for _ in 0..500 {
        let n = rng.gen_range(1..=8);
        let (p, q, mu, expect) = loop {
            let (p, q) = random_hb_pair(&mut rng, n, 5);
            // T needs deg Q = n − 1 with a positive leading coefficient
            if q.degree() != Some(n - 1) {
                continue;
            }
            let q = if *q.leading_coeff().unwrap() < r(0, 1) { q.scale(&r(-1, 1)) } else { q };
            let mu = random_mu(&mut rng);
            match upper_count_oracle(&p, &q, &mu) {
                Some(k) => break (p, q, mu, k),
                None => redraws += 1,
            }
        };
        let got = winding_number(&p, &q, &mu).map_err(|e| e.to_string())?;
        check(got == expect, || format!("winding {got}, oracle {expect} for P = {p}, Q = {q}, μ = {mu:?}"))?;
        let d = zero_distribution(&p, &q, &mu).map_err(|e| e.to_string())?;
        let t = reduction_count_t(&p, &q).map_err(|e| e.to_string())?;
        let diff = d.sharp_plus as i64 - d.sharp_minus as i64;
        check(diff.unsigned_abs() as usize == t && d.magnitude_law == Some(true), || format!("|#₊ − #₋| = {} but T = {t}", diff.abs()))?;
        let c = zero_distribution(&p, &q, &mu.conj()).map_err(|e| e.to_string())?;
        check(c.sharp_plus as i64 - c.sharp_minus as i64 == -diff, || format!("no sign flip for P = {p}, Q = {q}"))?;
    }
    let mut constructed = 0;
    for i in 0..200 {
        let n = rng.gen_range(1..=6);
        let mu = random_mu(&mut rng);
        let (p, q, shared) = if i % 4 == 0 {
            let a = r(rng.gen_range(-9..=9), rng.gen_range(1..=4));
            let lin = RealPoly::from_roots(&[a]);
            let dq = rng.gen_range(0..=n);
            constructed += 1;
            (&lin * &random_poly(&mut rng, n, 5), &lin * &random_poly(&mut rng, dq, 5), true)
        } else {
            // the float scan must be able to tell the zeros off the axis
            loop {
                let (p, q) = random_hb_pair(&mut rng, n, 5);
                if upper_count_oracle(&p, &q, &mu).is_some() {
                    break (p, q, false);
                }
                redraws += 1;
            }
        };
        let got = has_real_zero_mu(&p, &q, &mu).map_err(|e| e.to_string())?;
        check(got == shared, || format!("has_real_zero_mu = {got} for P = {p}, Q = {q}"))?;
        if shared {
            let Some(roots) = s_mu_roots(&p, &q, &mu) else {
                return Err(format!("eigenvalues of P + μQ did not converge for P = {p}, Q = {q}"));
            };
            let closest = roots.iter().map(|z| z.im.abs() / (1.0 + z.norm())).fold(f64::INFINITY, f64::min);
            check(closest < 1e-6, || format!("float scan misses the shared zero of P = {p}, Q = {q}"))?;
        }
    }
    within_time(start, 120.0)?;
    Ok(format!("500 winding checks, 200 real-zero checks with {constructed} shared zeros, {redraws} near-axis redraws"))
}

fn perestroika_closure() -> Outcome {
    let mut moves = 0;
    for n in 1..=6 {
        let all = enumerate_bwgs(n);
        let keys: HashSet<String> = all.iter().map(|g| g.canonical_key()).collect();
        for g in &all {
            for m in morse_moves(g) {
                let h = apply_move(g, &m).map_err(|e| format!("{m:?} on {}: {e}", g.canonical_key()))?;
                check(h.total_weight() == g.total_weight() && h.k() == g.k(), || format!("{m:?} on {}", g.canonical_key()))?;
                check(keys.contains(&h.canonical_key()), || format!("{} is not enumerated", h.canonical_key()))?;
                moves += 1;
            }
        }
    }
    Ok(format!("{moves} moves checked"))
}

fn hawaii_harness() -> Outcome {
    let mut lines = Vec::new();
    for d in 2..=3 {
        let r = hawaii_exhaustive(d, 3);
        check(r.violations.is_empty() && r.errors == 0, || format!("exhaustive degree {d}: {:?}", r.violations))?;
        lines.push(format!("degree {d}: {} polynomials", r.trials));
    }
    let cfg = TrialConfig { max_degree: 8, bound: 10, trials: 10_000, seed: 1, ..TrialConfig::default() };
    let a = hunt_driver(Target::Hawaii, &cfg);
    check(a.violations.is_empty() && a.errors == 0, || format!("random run: {} violations, {} errors", a.violations.len(), a.errors))?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| hunt_driver(Target::Hawaii, &cfg));
    check(serde_json::to_string(&a).unwrap() == serde_json::to_string(&b).unwrap(), || "reruns differ".into())?;
    lines.push(format!("random: {} trials, max w_real {}", a.completed, a.stats.max.get("w_real").map_or("none".into(), |v| v.to_string())));

    // reported, not judged
    let chords = hunt_driver(Target::Chords, &TrialConfig { max_degree: 5, bound: 5, trials: 200, seed: 2, ..TrialConfig::default() });
    lines.push(format!(
        "chords: {} done, {} skipped, {} errors, {} findings",
        chords.completed,
        chords.skipped,
        chords.errors,
        chords.violations.len()
    ));
    let qp = hunt_driver(
        Target::Qp,
        &TrialConfig { max_degree: 3, bound: 5, trials: 1000, seed: 3, alphas: vec![-1.0, -2.0], ..TrialConfig::default() },
    );
    lines.push(format!("qp: {} done, {} errors, {} findings", qp.completed, qp.errors, qp.violations.len()));
    Ok(lines.join("; "))
}

fn confluence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..1000 {
        let len = rng.gen_range(0..=20);
        let colors: Vec<Color> = (0..len).map(|_| *[Color::Black, Color::White].choose(&mut rng).unwrap()).collect();
        let stack = canonical_reduction(&ColoredArrangement::from_colors(colors.clone())).colors;
        for _ in 0..100 {
            let got = reduce_with(&colors, |k| rng.gen_range(0..k));
            check(got == stack, || format!("{:?} reduces two ways", ColoredArrangement::from_colors(colors.clone()).word()))?;
        }
    }
    Ok("1000 words × 100 orders".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("class counts", class_counts),
        ("chordless classes", chordless),
        ("catalan degrees", catalan),
        ("constant-count criterion", constant_count),
        ("quartic example", quartic_example),
        ("garden pipeline", circle_garden),
        ("weight conservation", conservation),
        ("basis invariance", basis_invariance),
        ("hermite-biehler", hermite_biehler),
        ("move closure", perestroika_closure),
        ("hawaii harness", hawaii_harness),
        ("reduction confluence", confluence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({secs:.1} s) {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({secs:.1} s) {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
