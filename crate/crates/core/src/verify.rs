//! Exhaustive circuit-against-reference suites.
//!
//! Each suite runs every basis input of a family of small circuits and
//! compares with an independent classical computation. The first mismatch is
//! kept as a counterexample.

use serde::Serialize;

use crate::circuit::{
    build_fitness_circuit, build_gt_comparator, build_oracle_circuit, build_validity_circuit, CutoffSource,
    OracleCutoff, RevCircuit,
};
use crate::codec;
use crate::error::{Error, Result};
use crate::fitness::{FitnessFormula, FitnessLandscape, FitnessSpec};
use crate::maze::{Maze, SimMode};

pub const MAX_VERIFY_N: u32 = 4;
pub const MAX_VERIFY_M: usize = 8;
pub const MAX_COMPARATOR_WIDTH: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyLimits {
    pub n_max: u32,
    pub m_max: usize,
    pub comparator_width: usize,
    /// Maze for size `m` is generated from `seed + m`.
    pub seed: u64,
}

impl Default for VerifyLimits {
    fn default() -> Self {
        VerifyLimits { n_max: 3, m_max: 4, comparator_width: 6, seed: 1 }
    }
}

impl VerifyLimits {
    pub fn check(&self) -> Result<()> {
        if self.n_max > MAX_VERIFY_N {
            return Err(Error::CapExceeded { n: self.n_max, cap: MAX_VERIFY_N });
        }
        if self.m_max < 2 || self.m_max > MAX_VERIFY_M {
            return Err(Error::invalid(format!("m_max must lie in 2..={MAX_VERIFY_M}, got {}", self.m_max)));
        }
        if self.comparator_width < 1 || self.comparator_width > MAX_COMPARATOR_WIDTH {
            return Err(Error::invalid(format!(
                "comparator width must lie in 1..={MAX_COMPARATOR_WIDTH}, got {}",
                self.comparator_width
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    pub counterexample: Option<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport { name: name.to_string(), cases: 0, failures: 0, counterexample: None }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn line(&self) -> String {
        match &self.counterexample {
            None => format!("PASS {:<16} {} cases", self.name, self.cases),
            Some(c) => format!("FAIL {:<16} {}/{} failed; first: {c}", self.name, self.failures, self.cases),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub limits: VerifyLimits,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }
}

/// All suites.
pub fn run_all(limits: &VerifyLimits) -> Result<VerifyReport> {
    limits.check()?;
    let suites = vec![
        check_fitness(limits)?,
        check_comparator_with(limits.comparator_width, build_gt_comparator),
        check_validity(limits)?,
        check_oracle(limits)?,
        check_involutions(limits)?,
    ];
    Ok(VerifyReport { limits: *limits, suites })
}

fn mazes(limits: &VerifyLimits) -> Result<Vec<Maze>> {
    (2..=limits.m_max).map(|m| Maze::generate(m, limits.seed.wrapping_add(m as u64))).collect()
}

fn blind_spec(m: usize) -> Result<FitnessSpec> {
    FitnessSpec::new(m, FitnessFormula::MainText, SimMode::WallBlind)
}

/// Runs `c` on `path = x` with all else zero; returns output, sign and
/// whether the scratch bits and the path came back clean.
fn run_path(c: &RevCircuit, x: u64, extra: &[(&str, u64)]) -> Result<(crate::circuit::BasisState, i8, bool)> {
    let mut s = c.blank_state();
    s.set(c.reg("path"), x);
    for &(name, v) in extra {
        s.set(c.reg(name), v);
    }
    let (out, sign) = c.run_on_basis(&s)?;
    let mut clean = out.is_zero_on(&c.scratch_bits()) && out.get(c.reg("path")) == x;
    for &(name, v) in extra {
        clean &= out.get(c.reg(name)) == v;
    }
    Ok((out, sign, clean))
}

/// Fitness register against the wrapped wall-blind landscape, for every
/// maze size and `n = 1..=n_max`.
pub fn check_fitness(limits: &VerifyLimits) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("fitness");
    for maze in mazes(limits)? {
        let spec = blind_spec(maze.size())?;
        for n in 1..=limits.n_max {
            let c = build_fitness_circuit(&maze, n, &spec)?;
            let want = FitnessLandscape::build(&maze, n, &spec)?.wrapped(spec.register_width());
            for x in 0..codec::path_count(n)? as u64 {
                let (out, _, clean) = run_path(&c, x, &[])?;
                let got = out.get(c.reg("fitness")) as i64;
                let exp = want.value(x as usize);
                rep.record(got == exp && clean, || {
                    format!(
                        "m={} n={n} x={x:0w$b}: got {got}, want {exp}, clean={clean}",
                        maze.size(),
                        w = 2 * n as usize
                    )
                });
            }
        }
    }
    Ok(rep)
}

/// Comparator against integer `>` on all pairs, constant and register
/// cutoffs, widths `1..=max_width`. The builder is a parameter so that a
/// deliberately broken one can be checked too.
pub fn check_comparator_with(max_width: usize, build: impl Fn(usize, CutoffSource) -> RevCircuit) -> SuiteReport {
    let mut rep = SuiteReport::new("comparator");
    for w in 1..=max_width {
        let reg = build(w, CutoffSource::Register);
        for cv in 0..(1u64 << w) {
            let cst = build(w, CutoffSource::Constant(cv));
            for fv in 0..(1u64 << w) {
                let want = (fv > cv) as u64;
                for (c, extra) in [(&cst, None), (&reg, Some(cv))] {
                    let mut s = c.blank_state();
                    s.set(c.reg("f"), fv);
                    if let Some(v) = extra {
                        s.set(c.reg("c"), v);
                    }
                    let (got, clean) = match c.run_on_basis(&s) {
                        Ok((out, sign)) => {
                            let restored = out.get(c.reg("f")) == fv
                                && extra.is_none_or(|v| out.get(c.reg("c")) == v)
                                && out.is_zero_on(c.ancillas())
                                && sign == 1;
                            (out.get(c.reg("b")), restored)
                        }
                        Err(_) => (u64::MAX, false),
                    };
                    let kind = if extra.is_some() { "register" } else { "constant" };
                    rep.record(got == want && clean, || {
                        format!("(f, c) = ({fv}, {cv}) width {w} {kind}: b={got}, want {want}, clean={clean}")
                    });
                }
            }
        }
    }
    rep
}

/// Validity flag against the bounds-only trajectory check.
pub fn check_validity(limits: &VerifyLimits) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("validity");
    for maze in mazes(limits)? {
        for n in 1..=limits.n_max {
            let c = build_validity_circuit(&maze, n)?;
            for x in 0..codec::path_count(n)? as u64 {
                let path = codec::decode_value(x, n)?;
                let want = maze.simulate_path(&path, SimMode::BoundsOnly).is_valid() as u64;
                let (out, _, clean) = run_path(&c, x, &[])?;
                let got = out.get(c.reg("valid"));
                rep.record(got == want && clean, || {
                    format!(
                        "m={} n={n} x={x:0w$b}: v={got}, want {want}, clean={clean}",
                        maze.size(),
                        w = 2 * n as usize
                    )
                });
            }
        }
    }
    Ok(rep)
}

/// Oracle sign against `(−1)^[f > cutoff]` on the wrapped landscape, for
/// every cutoff from −1 to `C`, bits all restored.
pub fn check_oracle(limits: &VerifyLimits) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("oracle-sign");
    for maze in mazes(limits)? {
        let spec = blind_spec(maze.size())?;
        for n in 1..=limits.n_max {
            let land = FitnessLandscape::build(&maze, n, &spec)?.wrapped(spec.register_width());
            for cutoff in -1..=spec.offset {
                let c = build_oracle_circuit(&maze, n, &spec, OracleCutoff::Constant(cutoff))?;
                let mask = land.marked_set(cutoff).mask();
                for x in 0..land.len() as u64 {
                    let (_, sign, clean) = run_path(&c, x, &[])?;
                    let want: i8 = if mask[x as usize] { -1 } else { 1 };
                    rep.record(sign == want && clean, || {
                        format!(
                            "m={} n={n} cutoff={cutoff} x={x}: sign {sign}, want {want}, clean={clean}",
                            maze.size()
                        )
                    });
                }
            }
        }
    }
    Ok(rep)
}

/// Oracle twice is the identity with sign +1; each circuit followed by its
/// inverse restores every input.
pub fn check_involutions(limits: &VerifyLimits) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("involutions");
    for maze in mazes(limits)? {
        let spec = blind_spec(maze.size())?;
        for n in 1..=limits.n_max {
            let oracle = build_oracle_circuit(&maze, n, &spec, OracleCutoff::Register)?;
            let twice = oracle.then(&oracle)?;
            let fit = build_fitness_circuit(&maze, n, &spec)?;
            let round_trip = fit.then(&fit.inverse())?;
            let valid = build_validity_circuit(&maze, n)?;
            let valid_trip = valid.then(&valid.inverse())?;
            let cut_max = 1u64 << spec.register_width();
            for x in 0..codec::path_count(n)? as u64 {
                for cutoff in [0, spec.offset as u64 / 2, cut_max - 1] {
                    let (_, sign, clean) = run_path(&twice, x, &[("cutoff", cutoff)])?;
                    rep.record(sign == 1 && clean, || {
                        format!("oracle² m={} n={n} x={x} cutoff={cutoff}: sign {sign}, clean={clean}", maze.size())
                    });
                }
                for (name, c) in [("fitness", &round_trip), ("validity", &valid_trip)] {
                    let (out, sign, _) = run_path(c, x, &[])?;
                    let mut input = c.blank_state();
                    input.set(c.reg("path"), x);
                    rep.record(out == input && sign == 1, || {
                        format!("{name}·inverse m={} n={n} x={x} not restored", maze.size())
                    });
                }
            }
        }
    }
    Ok(rep)
}
