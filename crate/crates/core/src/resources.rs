//! Qubit and gate budgets of the oracle, predicted in closed form and
//! measured from built circuits.
//!
//! Closed forms below follow this crate's constructions exactly, with
//! `w = w_pos`, `F` the fitness width and `D = 2w + 1`:
//!
//! | piece | Toffoli | CNOT | NOT |
//! |---|---|---|---|
//! | adder, width `L` | `2L` | `4L` | 0 |
//! | controlled ±1, width `w` | `2(w−1)` | `w` | `2w` for −1 |
//! | one path step | `8w` | `4w` | `16 + 4w` |
//! | squarer, width `w` | `2w(w−1) + 2S` | `2w + 4S` | 0 |
//! | GT against a register, width `F` | `7F − 2` | `2F` | `4F − 2` |
//!
//! where `S = (3w² + w)/2` is the summed width of the squarer's shifted adds.

use serde::Serialize;

use crate::circuit::{
    build_gt_comparator, build_oracle_circuit, position_width, CutoffSource, GateCounts, OracleCutoff,
};
use crate::codec;
use crate::error::{Error, Result};
use crate::fitness::{FitnessFormula, FitnessSpec};
use crate::maze::{Maze, SimMode};

/// Largest residual ratio `‖y − ŷ‖₂ / ‖y‖₂` accepted by a linear-fit claim.
pub const RESIDUAL_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegisterWidths {
    pub path: usize,
    /// Each of the two position registers.
    pub position: usize,
    pub difference: usize,
    pub sign: usize,
    pub square: usize,
    pub distance: usize,
    /// Width actually allocated for the fitness value (`r + 1` for the
    /// power-of-two offset, so that `C` itself fits).
    pub fitness: usize,
    /// The bare exponent `r` of the fitness constant.
    pub fitness_r: usize,
    pub cutoff: usize,
    pub flag: usize,
    pub ancilla: usize,
}

impl RegisterWidths {
    /// Named registers plus ancilla high-water.
    pub fn total(&self) -> usize {
        self.path
            + 2 * (self.position + self.difference + self.sign + self.square)
            + self.distance
            + self.fitness
            + self.cutoff
            + self.flag
            + self.ancilla
    }
}

/// Diffuser on the `2n`-qubit path register: `H X · C^{2n−1}Z · X H`, the
/// multi-controlled `Z` laddered through Toffolis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DiffuserCost {
    pub hadamard: usize,
    pub not: usize,
    pub toffoli: usize,
    pub phase: usize,
    pub ancilla: usize,
}

impl DiffuserCost {
    pub fn new(n: u32) -> DiffuserCost {
        let q = 2 * n as usize;
        let ladder = q.saturating_sub(2);
        DiffuserCost { hadamard: 2 * q, not: 2 * q, toffoli: 2 * ladder, phase: 1, ancilla: ladder }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResourceReport {
    pub n: u32,
    pub m: usize,
    pub formula: FitnessFormula,
    pub widths: RegisterWidths,
    pub total_qubits: usize,
    pub path_simulation: GateCounts,
    pub distance: GateCounts,
    pub fitness: GateCounts,
    /// One forward comparator against a cutoff register.
    pub comparator: GateCounts,
    /// The full oracle: fitness, comparator, phase and both uncomputes.
    pub oracle: GateCounts,
    pub diffuser: DiffuserCost,
    /// Predicted: serial gate count (an upper bound). Measured: exact.
    pub depth: usize,
}

fn counts(toffoli: usize, cnot: usize, not: usize) -> GateCounts {
    GateCounts { toffoli, cnot, not, ..GateCounts::default() }
}

fn pop(value: u64, width: usize) -> usize {
    let masked = if width >= 64 { value } else { value & ((1u64 << width) - 1) };
    masked.count_ones() as usize
}

fn check(n: u32, m: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::invalid("n must be ≥ 1"));
    }
    if m < 2 {
        return Err(Error::invalid("m must be ≥ 2"));
    }
    codec::check_len(n)
}

/// Closed-form budget for start `(0,0)` and goal `(m−1, m−1)`.
pub fn predict(n: u32, m: usize, formula: FitnessFormula) -> Result<ResourceReport> {
    check(n, m)?;
    let spec = FitnessSpec::new(m, formula, SimMode::WallBlind)?;
    let w = position_width(m, n);
    let f = spec.register_width() as usize;
    let d = 2 * w + 1;
    let nn = n as usize;

    let start = pop(n as u64, w);
    let path_simulation = counts(8 * w * nn, 4 * w * nn, 2 * start + nn * (16 + 4 * w));

    let s = (3 * w * w + w) / 2;
    let goal = pop((m - 1 + nn) as u64, w);
    let per_coord = counts(2 * w + 2 * (w - 1) + 2 * w * (w - 1) + 2 * s, 9 * w + 1 + 4 * s, 2 * goal);
    let distance = per_coord + per_coord + counts(4 * d, 8 * d, 0);
    let fitness = counts(2 * f, 4 * f, pop(spec.offset as u64, f));
    let comparator = counts(7 * f - 2, 2 * f, 4 * f - 2);

    let core = path_simulation + distance;
    let compute = core + fitness + core;
    let mut oracle = compute + compute + comparator + comparator;
    oracle.phase = 1;

    let pads = f - f.min(d);
    let ancilla = [w, w + 1, 2 * w + 1, 2, pads + 1, f + 1].into_iter().max().unwrap_or(0);
    let widths = RegisterWidths {
        path: 2 * nn,
        position: w,
        difference: w,
        sign: 1,
        square: 2 * w,
        distance: d,
        fitness: f,
        fitness_r: spec.r as usize,
        cutoff: f,
        flag: 1,
        ancilla,
    };
    oracle.ancilla_high_water = ancilla;
    let depth = oracle.total();
    Ok(ResourceReport {
        n,
        m,
        formula,
        widths,
        total_qubits: widths.total(),
        path_simulation: strip(path_simulation),
        distance: strip(distance),
        fitness: strip(fitness),
        comparator: strip(comparator),
        oracle: GateCounts { depth: 0, ..oracle },
        diffuser: DiffuserCost::new(n),
        depth,
    })
}

fn strip(c: GateCounts) -> GateCounts {
    GateCounts { depth: 0, ancilla_high_water: 0, ..c }
}

/// Counts read off an oracle circuit built against a cutoff register, over
/// a generated maze with default endpoints.
pub fn measure(n: u32, m: usize, formula: FitnessFormula) -> Result<ResourceReport> {
    check(n, m)?;
    let maze = Maze::generate(m, 0)?;
    let spec = FitnessSpec::new(m, formula, SimMode::WallBlind)?;
    let c = build_oracle_circuit(&maze, n, &spec, OracleCutoff::Register)?;
    let width = |name: &str| c.register(name).map_or(0, |r| r.width);
    let stage = |name: &str| c.count_stage(name).map(strip).unwrap_or_default();
    let widths = RegisterWidths {
        path: width("path"),
        position: width("row"),
        difference: width("diff_row"),
        sign: width("sign_row"),
        square: width("sq_row"),
        distance: width("distance"),
        fitness: width("fitness"),
        fitness_r: spec.r as usize,
        cutoff: width("cutoff"),
        flag: width("flag"),
        ancilla: c.ancillas().len(),
    };
    let oracle = c.count_gates();
    Ok(ResourceReport {
        n,
        m,
        formula,
        widths,
        total_qubits: c.width(),
        path_simulation: stage("path-simulation"),
        distance: stage("distance"),
        fitness: stage("fitness"),
        comparator: stage("comparator"),
        oracle: GateCounts { depth: 0, ..oracle },
        diffuser: DiffuserCost::new(n),
        depth: oracle.depth,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// `‖y − ŷ‖₂ / ‖y‖₂`.
    pub residual_ratio: f64,
}

/// Ordinary least squares `y ≈ slope·x + intercept`; needs ≥ 3 points.
pub fn fit_linear(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() {
        return Err(Error::invalid("fit series differ in length"));
    }
    if xs.len() < 3 {
        return Err(Error::invalid(format!("a linear fit needs ≥ 3 points, got {}", xs.len())));
    }
    let len = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / len;
    let my = ys.iter().sum::<f64>() / len;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("fit abscissae are all equal"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    let norm: f64 = ys.iter().map(|y| y * y).sum();
    let residual_ratio = if norm == 0.0 { 0.0 } else { (ssr / norm).sqrt() };
    Ok(LinearFit { slope, intercept, residual_ratio })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingCheck {
    pub claim: String,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub fit: LinearFit,
    pub pass: bool,
}

impl ScalingCheck {
    fn new(claim: &str, xs: Vec<f64>, ys: Vec<f64>) -> Result<ScalingCheck> {
        let fit = fit_linear(&xs, &ys)?;
        Ok(ScalingCheck { claim: claim.to_string(), pass: fit.residual_ratio < RESIDUAL_TOLERANCE, xs, ys, fit })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingSweep {
    pub comparator_widths: Vec<usize>,
    pub m: usize,
    pub ns: Vec<u32>,
}

impl Default for ScalingSweep {
    fn default() -> Self {
        ScalingSweep { comparator_widths: (2..=8).collect(), m: 4, ns: (1..=6).collect() }
    }
}

/// Comparator Toffolis linear in width, path-simulation Toffolis linear in
/// `n` and in `n·w_pos`. Counts come from built circuits.
pub fn check_asymptotics(sweep: &ScalingSweep) -> Result<Vec<ScalingCheck>> {
    let cmp: Vec<f64> = sweep
        .comparator_widths
        .iter()
        .map(|&w| build_gt_comparator(w, CutoffSource::Register).count_gates().toffoli as f64)
        .collect();
    let widths: Vec<f64> = sweep.comparator_widths.iter().map(|&w| w as f64).collect();

    let maze = Maze::generate(sweep.m, 0)?;
    let spec = FitnessSpec::new(sweep.m, FitnessFormula::MainText, SimMode::WallBlind)?;
    let mut path_counts = Vec::new();
    for &n in &sweep.ns {
        let c = crate::circuit::build_fitness_circuit(&maze, n, &spec)?;
        let t = c.count_stage("path-simulation").map_or(0, |g| g.toffoli);
        path_counts.push(t as f64);
    }
    let ns: Vec<f64> = sweep.ns.iter().map(|&n| n as f64).collect();
    let nw: Vec<f64> = sweep.ns.iter().map(|&n| (n as usize * position_width(sweep.m, n)) as f64).collect();

    Ok(vec![
        ScalingCheck::new("comparator toffoli ~ a·w + b", widths, cmp)?,
        ScalingCheck::new("path-simulation toffoli ~ a·n + b", ns, path_counts.clone())?,
        ScalingCheck::new("path-simulation toffoli ~ a·n·w_pos + b", nw, path_counts)?,
    ])
}

/// Plain-text table of a predicted and a measured report side by side.
pub fn render_table(predicted: &ResourceReport, measured: &ResourceReport) -> String {
    use std::fmt::Write as _;
    let mut s = String::new();
    let _ = writeln!(s, "n={} m={} formula={}", predicted.n, predicted.m, predicted.formula.name());
    let _ = writeln!(s, "{:<22}{:>12}{:>12}", "", "predicted", "measured");
    let rows: [(&str, usize, usize); 9] = [
        ("path qubits", predicted.widths.path, measured.widths.path),
        ("position qubits (×2)", predicted.widths.position, measured.widths.position),
        ("distance qubits", predicted.widths.distance, measured.widths.distance),
        ("fitness qubits", predicted.widths.fitness, measured.widths.fitness),
        ("ancilla high-water", predicted.widths.ancilla, measured.widths.ancilla),
        ("total qubits", predicted.total_qubits, measured.total_qubits),
        ("path-sim toffoli", predicted.path_simulation.toffoli, measured.path_simulation.toffoli),
        ("comparator toffoli", predicted.comparator.toffoli, measured.comparator.toffoli),
        ("oracle toffoli", predicted.oracle.toffoli, measured.oracle.toffoli),
    ];
    for (name, p, m) in rows {
        let _ = writeln!(s, "{name:<22}{p:>12}{m:>12}");
    }
    let _ = writeln!(s, "{:<22}{:>12}{:>12}", "depth", format!("≤{}", predicted.depth), measured.depth);
    s
}
