//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Tolerances are fixed below.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use grovemaze::circuit::{
    build_fitness_circuit, build_gt_comparator, build_gt_subtractor, build_oracle_circuit, build_validity_circuit,
    CutoffSource, OracleCutoff, RevCircuit,
};
use grovemaze::codec::{self, encode_path, parse_letters};
use grovemaze::fitness::{FitnessFormula, FitnessLandscape, FitnessSpec};
use grovemaze::grover::{prepare_uniform, GroverGeometry};
use grovemaze::maze::{Maze, SimMode};
use grovemaze::resources::fit_linear;
use grovemaze::search::{run_adaptive, Policy, SearchConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SMALL: &str = "2 0 0 1 1\n61\nc1\n";

const WORKED_EXAMPLE_BUDGET: Duration = Duration::from_secs(1);
const COMPARATOR_BUDGET: Duration = Duration::from_secs(10);
const DYNAMICS_BUDGET: Duration = Duration::from_secs(60);
const CONVERGENCE_BUDGET: Duration = Duration::from_secs(300);
const DYNAMICS_TOL: f64 = 1e-9;
const FIT_RESIDUAL_TOL: f64 = 0.05;
const CONVERGENCE_RUNS: u64 = 100;
const EPSILON: f64 = 0.05;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn run_path(c: &RevCircuit, x: u64) -> Result<(grovemaze::circuit::BasisState, i8, bool), String> {
    let mut s = c.blank_state();
    s.set(c.reg("path"), x);
    let (out, sign) = c.run_on_basis(&s).map_err(e2s)?;
    let clean = out.is_zero_on(&c.scratch_bits()) && out.get(c.reg("path")) == x;
    Ok((out, sign, clean))
}

fn worked_example() -> Verdict {
    let t0 = Instant::now();
    let maze = Maze::parse(SMALL).map_err(e2s)?;
    let aware = FitnessSpec::new(2, FitnessFormula::MainText, SimMode::WallAware).map_err(e2s)?;
    let blind = FitnessSpec::new(2, FitnessFormula::MainText, SimMode::WallBlind).map_err(e2s)?;
    let path = parse_letters("SE").map_err(e2s)?;
    let idx = encode_path(&path).map_err(e2s)?;
    ensure(idx.bits() == "1001", || format!("S,E encodes to {}", idx.bits()))?;
    let classical = aware.fitness(&maze, &path);
    ensure(classical == 4, || format!("classical fitness {classical}"))?;

    let fc = build_fitness_circuit(&maze, 2, &blind).map_err(e2s)?;
    let (out, _, clean) = run_path(&fc, idx.value())?;
    let reg = out.get(fc.reg("fitness"));
    let bits = format!("{reg:0w$b}", w = fc.reg("fitness").width);
    ensure(bits == "100" && clean, || format!("fitness register {bits}, clean={clean}"))?;

    let oc = build_oracle_circuit(&maze, 2, &blind, OracleCutoff::Constant(2)).map_err(e2s)?;
    let (_, sign, clean) = run_path(&oc, idx.value())?;
    ensure(sign == -1 && clean, || format!("oracle sign {sign}, clean={clean}"))?;
    let dt = t0.elapsed();
    ensure(dt < WORKED_EXAMPLE_BUDGET, || format!("took {dt:?}"))?;
    Ok(format!("f=4, register=100, sign=-1 in {dt:?}"))
}

fn comparator_exactness() -> Verdict {
    let t0 = Instant::now();
    let mut pairs = 0u64;
    let cmp = |c: &RevCircuit, f: u64, cut: Option<u64>| -> Result<u64, String> {
        let mut s = c.blank_state();
        s.set(c.reg("f"), f);
        if let Some(v) = cut {
            s.set(c.reg("c"), v);
        }
        let (out, sign) = c.run_on_basis(&s).map_err(e2s)?;
        let restored = out.get(c.reg("f")) == f
            && cut.is_none_or(|v| out.get(c.reg("c")) == v)
            && out.is_zero_on(c.ancillas())
            && sign == 1;
        ensure(restored, || format!("f={f} c={cut:?}: inputs or ancillas disturbed"))?;
        Ok(out.get(c.reg("b")))
    };
    for w in 1..=6usize {
        let reg = build_gt_comparator(w, CutoffSource::Register);
        let sub = build_gt_subtractor(w, CutoffSource::Register);
        for c in 0..(1u64 << w) {
            let cst = build_gt_comparator(w, CutoffSource::Constant(c));
            for f in 0..(1u64 << w) {
                let want = (f > c) as u64;
                for (name, got) in [
                    ("constant", cmp(&cst, f, None)?),
                    ("register", cmp(&reg, f, Some(c))?),
                    ("subtractor", cmp(&sub, f, Some(c))?),
                ] {
                    ensure(got == want, || format!("{name} width {w}: ({f}, {c}) gave {got}"))?;
                }
                pairs += 1;
            }
        }
    }
    let c4 = build_gt_comparator(4, CutoffSource::Constant(9));
    ensure(cmp(&c4, 11, None)? == 1 && cmp(&c4, 5, None)? == 0, || "(11,9)/(5,9) example".into())?;
    let dt = t0.elapsed();
    ensure(dt < COMPARATOR_BUDGET, || format!("took {dt:?}"))?;
    Ok(format!("{pairs} pairs × 3 constructions, 0 mismatches in {dt:?}"))
}

fn superposition() -> Verdict {
    for n in 0..=8u32 {
        let s = prepare_uniform(n).map_err(e2s)?;
        let want = 1.0 / (1u64 << n) as f64;
        ensure(s.len() == 1usize << (2 * n), || format!("n={n}: {} amplitudes", s.len()))?;
        ensure(s.amplitudes().iter().all(|a| a.re == want && a.im == 0.0), || format!("n={n}: inexact amplitude"))?;
    }
    Ok("amplitude exactly 2^-n on all 4^n states, n = 0..=8".into())
}

fn rotation_dynamics() -> Verdict {
    let t0 = Instant::now();
    let mut worst = 0.0f64;
    let mut cases = 0;
    for n in 1..=6u32 {
        let big_n = 1u64 << (2 * n);
        let mut ks = vec![1, 2, big_n / 4, big_n / 2, big_n - 1];
        ks.sort_unstable();
        ks.dedup();
        for k in ks {
            let g = GroverGeometry::new(n, k).map_err(e2s)?;
            let r_star = g.optimal_rounds().map_err(e2s)?;
            let r_max = (3 * r_star).max(3);
            // marked set: a k-subset chosen by a seeded shuffle
            let mut idx: Vec<usize> = (0..big_n as usize).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64 * 1000 + k);
            for i in (1..idx.len()).rev() {
                idx.swap(i, rng.gen_range(0..=i));
            }
            let marked = &idx[..k as usize];
            let mut s = prepare_uniform(n).map_err(e2s)?;
            let mut probs = Vec::new();
            for r in 0..=r_max {
                if r > 0 {
                    s.grover_iterate(marked, 1).map_err(e2s)?;
                }
                let sim = s.probability_of(marked);
                let closed = (((2 * r + 1) as f64) * (k as f64 / big_n as f64).sqrt().asin()).sin().powi(2);
                worst = worst.max((sim - closed).abs());
                ensure((sim - closed).abs() < DYNAMICS_TOL, || format!("n={n} k={k} r={r}: {sim} vs {closed}"))?;
                ensure((s.norm() - 1.0).abs() < 1e-12, || format!("n={n} k={k} r={r}: norm drift"))?;
                probs.push(sim);
            }
            let best = probs.iter().cloned().fold(f64::MIN, f64::max);
            // any r attaining the maximum (ties within 1e−12) counts as an argmax
            let near = probs
                .iter()
                .enumerate()
                .filter(|(_, &p)| p >= best - 1e-12)
                .any(|(r, _)| (r as i64 - r_star as i64).abs() <= 1);
            ensure(near, || format!("n={n} k={k}: r*={r_star} far from argmax of {probs:?}"))?;
            cases += 1;
        }
    }
    let dt = t0.elapsed();
    ensure(dt < DYNAMICS_BUDGET, || format!("took {dt:?}"))?;
    Ok(format!("{cases} (n,k) cases, max |sim − closed| = {worst:.2e} in {dt:?}"))
}

fn oracle_interchangeability() -> Verdict {
    let mut checked = 0u64;
    for m in 2..=4usize {
        let maze = Maze::generate(m, 100 + m as u64).map_err(e2s)?;
        let spec = FitnessSpec::new(m, FitnessFormula::MainText, SimMode::WallBlind).map_err(e2s)?;
        let width = spec.register_width();
        for n in 1..=3u32 {
            // independent reference: C − squared distance of the unchecked walk, mod 2^width
            let reference: Vec<i64> = (0..codec::path_count(n).map_err(e2s)? as u64)
                .map(|x| {
                    let (mut i, mut j) = (maze.start().row as i64, maze.start().col as i64);
                    for d in codec::decode_value(x, n).unwrap() {
                        let (di, dj) = d.delta();
                        i += di as i64;
                        j += dj as i64;
                    }
                    let d2 = (i - maze.goal().row as i64).pow(2) + (j - maze.goal().col as i64).pow(2);
                    (spec.offset - d2).rem_euclid(1 << width)
                })
                .collect();
            let landscape = FitnessLandscape::build(&maze, n, &spec).map_err(e2s)?.wrapped(width);
            ensure(landscape.values() == reference.as_slice(), || format!("m={m} n={n}: landscape mismatch"))?;
            for cutoff in -1..=spec.offset {
                let oc = build_oracle_circuit(&maze, n, &spec, OracleCutoff::Constant(cutoff)).map_err(e2s)?;
                let twice = oc.then(&oc).map_err(e2s)?;
                let marked = landscape.marked_set(cutoff);
                let mask = marked.mask();
                let mut signs = Vec::with_capacity(mask.len());
                for x in 0..mask.len() as u64 {
                    let (_, sign, clean) = run_path(&oc, x)?;
                    let want = if mask[x as usize] { -1 } else { 1 };
                    ensure(sign == want && clean, || {
                        format!("m={m} n={n} cutoff={cutoff} x={x}: sign {sign}, clean={clean}")
                    })?;
                    let (out2, sign2, _) = run_path(&twice, x)?;
                    let mut input = twice.blank_state();
                    input.set(twice.reg("path"), x);
                    ensure(sign2 == 1 && out2 == input, || format!("m={m} n={n} x={x}: O·O ≠ I"))?;
                    signs.push(sign);
                    checked += 1;
                }
                // the gate-level signs act on amplitudes exactly like the diagonal oracle
                let mut a = prepare_uniform(n).map_err(e2s)?;
                let mut b = a.clone();
                a.apply_signs(&signs).map_err(e2s)?;
                b.apply_oracle(&marked.indices).map_err(e2s)?;
                ensure(a == b, || format!("m={m} n={n} cutoff={cutoff}: engine states differ"))?;
            }
        }
    }
    Ok(format!("{checked} (maze, n, cutoff, x) signs match, ancillas clean, O² = I"))
}

fn validity() -> Verdict {
    let mut checked = 0u64;
    for m in 2..=4usize {
        let maze = Maze::generate(m, 200 + m as u64).map_err(e2s)?;
        for n in 1..=3u32 {
            let c = build_validity_circuit(&maze, n).map_err(e2s)?;
            for x in 0..codec::path_count(n).map_err(e2s)? as u64 {
                let (mut i, mut j) = (maze.start().row, maze.start().col);
                let mut inside = true;
                for d in codec::decode_value(x, n).map_err(e2s)? {
                    let (di, dj) = d.delta();
                    i += di;
                    j += dj;
                    inside &= (0..m as i32).contains(&i) && (0..m as i32).contains(&j);
                }
                let (out, _, clean) = run_path(&c, x)?;
                let v = out.get(c.reg("valid"));
                ensure(v == inside as u64 && clean, || {
                    format!("m={m} n={n} x={x}: v={v}, want {inside}, clean={clean}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} paths, 0 mismatches"))
}

fn convergence() -> Verdict {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut successes = 0u64;
    for run in 0..CONVERGENCE_RUNS {
        let m = rng.gen_range(2..=4usize);
        let n = rng.gen_range(1..=4u32);
        let maze = Maze::generate(m, rng.gen()).map_err(e2s)?;
        let spec = FitnessSpec::new(m, FitnessFormula::MainText, SimMode::WallAware).map_err(e2s)?;
        let cfg = SearchConfig {
            initial_cutoff: 0,
            epsilon: EPSILON,
            policy: Policy::KnownK,
            seed: rng.gen(),
            ..Default::default()
        };
        let out = run_adaptive(&maze, n, &spec, &cfg).map_err(e2s)?;
        let f_max = FitnessLandscape::build(&maze, n, &spec).map_err(e2s)?.max();
        ensure(out.f_max == f_max, || format!("run {run}: f_max mismatch"))?;
        let mut prev = cfg.initial_cutoff;
        for r in &out.trace.records {
            ensure(r.cutoff == prev && r.new_cutoff >= r.cutoff && r.new_cutoff <= f_max, || {
                format!("run {run}: cutoff sequence broken at round {}", r.round)
            })?;
            prev = r.new_cutoff;
        }
        let inc = out.trace.strict_increases() as i64;
        ensure(inc <= f_max - cfg.initial_cutoff, || format!("run {run}: {inc} increases > f_max − C₁"))?;
        if out.best.as_ref().is_some_and(|b| b.fitness == f_max) {
            successes += 1;
        }
    }
    let frac = successes as f64 / CONVERGENCE_RUNS as f64;
    let sigma = (EPSILON * (1.0 - EPSILON) / CONVERGENCE_RUNS as f64).sqrt();
    let floor = 1.0 - EPSILON - 3.0 * sigma;
    ensure(frac >= floor, || format!("success fraction {frac} < {floor:.4}"))?;
    let dt = t0.elapsed();
    ensure(dt < CONVERGENCE_BUDGET, || format!("took {dt:?}"))?;
    Ok(format!("{successes}/{CONVERGENCE_RUNS} reached f_max (floor {floor:.4}), traces monotone, in {dt:?}"))
}

fn resource_scaling() -> Verdict {
    let widths: Vec<usize> = (2..=8).collect();
    let tof: Vec<f64> =
        widths.iter().map(|&w| build_gt_comparator(w, CutoffSource::Register).count_gates().toffoli as f64).collect();
    let xs: Vec<f64> = widths.iter().map(|&w| w as f64).collect();
    let cfit = fit_linear(&xs, &tof).map_err(e2s)?;
    ensure(cfit.residual_ratio < FIT_RESIDUAL_TOL, || format!("comparator residual {}", cfit.residual_ratio))?;

    let m = 4;
    let maze = Maze::generate(m, 0).map_err(e2s)?;
    let spec = FitnessSpec::new(m, FitnessFormula::MainText, SimMode::WallBlind).map_err(e2s)?;
    let mut ns = Vec::new();
    let mut ps = Vec::new();
    for n in 1..=6u32 {
        let c = build_fitness_circuit(&maze, n, &spec).map_err(e2s)?;
        ps.push(c.count_stage("path-simulation").ok_or("no path-simulation stage")?.toffoli as f64);
        ns.push(n as f64);
    }
    let pfit = fit_linear(&ns, &ps).map_err(e2s)?;
    ensure(pfit.residual_ratio < FIT_RESIDUAL_TOL, || format!("path-sim residual {}", pfit.residual_ratio))?;

    for m in 2..=4usize {
        let maze = Maze::generate(m, 0).map_err(e2s)?;
        let spec = FitnessSpec::new(m, FitnessFormula::MainText, SimMode::WallBlind).map_err(e2s)?;
        for n in 1..=6u32 {
            for c in [
                build_fitness_circuit(&maze, n, &spec).map_err(e2s)?,
                build_oracle_circuit(&maze, n, &spec, OracleCutoff::Constant(1)).map_err(e2s)?,
                build_validity_circuit(&maze, n).map_err(e2s)?,
            ] {
                let w = c.reg("path").width;
                ensure(w == 2 * n as usize, || format!("m={m} n={n}: path register {w} bits"))?;
            }
        }
    }
    Ok(format!(
        "comparator {:.2}w{:+.2} (residual {:.4}); path-sim {:.2}n{:+.2} (residual {:.4}); path = 2n",
        cfit.slope, cfit.intercept, cfit.residual_ratio, pfit.slope, pfit.intercept, pfit.residual_ratio
    ))
}

fn determinism() -> Verdict {
    let exe = env!("CARGO_BIN_EXE_grovemaze");
    let dir = tempfile::tempdir().map_err(e2s)?;
    let maze = dir.path().join("small.maze");
    std::fs::write(&maze, SMALL).map_err(e2s)?;
    let run = |extra: &[&str], out: &Path| -> Result<Vec<u8>, String> {
        let status = Command::new(exe)
            .args(["solve", "--seed", "17", "--n"])
            .args(extra)
            .arg("--out")
            .arg(out)
            .output()
            .map_err(e2s)?;
        ensure(status.status.success(), || String::from_utf8_lossy(&status.stderr).into_owned())?;
        std::fs::read(out).map_err(e2s)
    };
    let maze_s = maze.to_str().ok_or("non-UTF-8 temp path")?;
    let setups: [&[&str]; 4] = [
        &["2", "--maze", maze_s, "--format", "csv"],
        &["2", "--maze", maze_s, "--format", "json"],
        &["3", "--m", "4", "--maze-seed", "9", "--policy", "guessed-k", "--format", "json"],
        &["3", "--m", "3", "--mode", "blind", "--samples", "5", "--no-stop", "--format", "csv"],
    ];
    for (i, setup) in setups.iter().enumerate() {
        let a = run(setup, &dir.path().join(format!("a{i}")))?;
        let b = run(setup, &dir.path().join(format!("b{i}")))?;
        ensure(!a.is_empty() && a == b, || format!("setup {i}: outputs differ"))?;
    }
    Ok(format!("{} solve configurations byte-identical across runs", setups.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 worked example", worked_example),
        ("2 comparator exactness", comparator_exactness),
        ("3 superposition", superposition),
        ("4 rotation dynamics", rotation_dynamics),
        ("5 oracle interchangeability", oracle_interchangeability),
        ("6 validity operator", validity),
        ("7 cutoff convergence", convergence),
        ("8 resource scaling", resource_scaling),
        ("9 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
