//! Gate-level fitness operator, phase oracle and validity operator.
//!
//! Positions use offset encoding: a coordinate `i` is stored as `i + n` in a
//! register of `⌈log₂(m + 2n)⌉ + 1` bits, so `n` unchecked moves in any
//! direction never leave `[0, 2^w)` and the top bit is free to act as a sign
//! once the goal offset is subtracted.

use serde::Serialize;

use super::arith::{
    add_into, conditional_negate, controlled_decrement, controlled_increment, square_into, sub_constant, sub_from,
};
use super::compare::{gt_const, gt_register};
use super::{CircuitBuilder, CutoffSource, Reg, RegisterRole, RevCircuit};
use crate::codec::{self, encode_direction};
use crate::error::{Error, Result};
use crate::fitness::FitnessSpec;
use crate::maze::{Cell, Direction, Maze};

fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// Width of each offset-encoded position register.
pub fn position_width(m: usize, n: u32) -> usize {
    ceil_log2(m as u64 + 2 * n as u64) as usize + 1
}

/// Register widths of the fitness circuit for given `(m, n, spec)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CircuitLayout {
    pub path: usize,
    pub position: usize,
    pub difference: usize,
    pub square: usize,
    pub distance: usize,
    pub fitness: usize,
}

impl CircuitLayout {
    pub fn new(m: usize, n: u32, spec: &FitnessSpec) -> CircuitLayout {
        let w = position_width(m, n);
        CircuitLayout {
            path: 2 * n as usize,
            position: w,
            difference: w,
            square: 2 * w,
            distance: 2 * w + 1,
            fitness: spec.register_width() as usize,
        }
    }
}

struct FitnessRegs {
    path: Reg,
    row: Reg,
    col: Reg,
    diff_row: Reg,
    diff_col: Reg,
    sign_row: Reg,
    sign_col: Reg,
    sq_row: Reg,
    sq_col: Reg,
    distance: Reg,
    fitness: Reg,
}

fn check_args(maze: &Maze, n: u32, spec: &FitnessSpec) -> Result<()> {
    codec::check_len(n)?;
    if spec.grid_size != maze.size() {
        return Err(Error::invalid(format!(
            "fitness spec built for m={} used with an m={} maze",
            spec.grid_size,
            maze.size()
        )));
    }
    Ok(())
}

fn alloc_fitness_regs(b: &mut CircuitBuilder, layout: &CircuitLayout) -> FitnessRegs {
    FitnessRegs {
        path: b.register("path", RegisterRole::Path, layout.path),
        row: b.register("row", RegisterRole::PositionRow, layout.position),
        col: b.register("col", RegisterRole::PositionCol, layout.position),
        diff_row: b.register("diff_row", RegisterRole::Difference, layout.difference),
        diff_col: b.register("diff_col", RegisterRole::Difference, layout.difference),
        sign_row: b.register("sign_row", RegisterRole::Sign, 1),
        sign_col: b.register("sign_col", RegisterRole::Sign, 1),
        sq_row: b.register("sq_row", RegisterRole::Square, layout.square),
        sq_col: b.register("sq_col", RegisterRole::Square, layout.square),
        distance: b.register("distance", RegisterRole::Distance, layout.distance),
        fitness: b.register("fitness", RegisterRole::Fitness, layout.fitness),
    }
}

/// Path-register bits `(hi, lo)` holding the code of step `k` (0-based).
fn step_bits(path: Reg, n: u32, k: u32) -> (usize, usize) {
    let lo = 2 * (n - 1 - k) as usize;
    (path.bit(lo + 1), path.bit(lo))
}

fn load_start(b: &mut CircuitBuilder, row: Reg, col: Reg, start: Cell, n: u32) {
    b.load_constant(&row.to_vec(), (start.row as i64 + n as i64) as u64);
    b.load_constant(&col.to_vec(), (start.col as i64 + n as i64) as u64);
}

/// One direction-controlled ±1 update of the position registers.
fn apply_step(b: &mut CircuitBuilder, path: Reg, n: u32, k: u32, row: Reg, col: Reg) {
    let (hi, lo) = step_bits(path, n, k);
    for d in Direction::ALL {
        let code = encode_direction(d);
        let flip_hi = code & 0b10 == 0;
        let flip_lo = code & 0b01 == 0;
        let ctl = b.ancilla();
        let select = |b: &mut CircuitBuilder| {
            if flip_hi {
                b.not(hi);
            }
            if flip_lo {
                b.not(lo);
            }
            b.toffoli(hi, lo, ctl);
            if flip_hi {
                b.not(hi);
            }
            if flip_lo {
                b.not(lo);
            }
        };
        select(b);
        match d {
            Direction::N => controlled_decrement(b, ctl, &row.to_vec()),
            Direction::E => controlled_increment(b, ctl, &col.to_vec()),
            Direction::S => controlled_increment(b, ctl, &row.to_vec()),
            Direction::W => controlled_decrement(b, ctl, &col.to_vec()),
        }
        select(b);
        b.release(&[ctl]);
    }
}

/// Emits path simulation and distance; returns the gate index where they begin.
fn append_distance_pipeline(b: &mut CircuitBuilder, regs: &FitnessRegs, maze: &Maze, n: u32) -> usize {
    let start = b.mark();
    b.begin_stage("path-simulation");
    load_start(b, regs.row, regs.col, maze.start(), n);
    for k in 0..n {
        apply_step(b, regs.path, n, k, regs.row, regs.col);
    }

    b.begin_stage("distance");
    let goal = maze.goal();
    for (pos, diff, sign, sq, target) in [
        (regs.row, regs.diff_row, regs.sign_row, regs.sq_row, goal.row),
        (regs.col, regs.diff_col, regs.sign_col, regs.sq_col, goal.col),
    ] {
        for (p, d) in pos.bits().zip(diff.bits()) {
            b.cnot(p, d);
        }
        sub_constant(b, (target as i64 + n as i64) as u64, &diff.to_vec());
        b.cnot(diff.msb(), sign.bit(0));
        conditional_negate(b, sign.bit(0), &diff.to_vec());
        square_into(b, &diff.to_vec(), &sq.to_vec());
    }
    for sq in [regs.sq_row, regs.sq_col] {
        let pad = b.ancilla();
        let mut operand = sq.to_vec();
        operand.push(pad);
        add_into(b, &operand, &regs.distance.to_vec());
        b.release(&[pad]);
    }
    b.end_stage();
    start
}

/// `fitness ← C − distance (mod 2^width)`.
fn append_fitness_write(b: &mut CircuitBuilder, regs: &FitnessRegs, spec: &FitnessSpec) {
    b.begin_stage("fitness");
    let width = regs.fitness.width;
    b.load_constant(&regs.fitness.to_vec(), spec.offset as u64);
    let mut operand: Vec<usize> = regs.distance.bits().take(width).collect();
    let pads = b.ancillas(width - operand.len());
    operand.extend_from_slice(&pads);
    sub_from(b, &operand, &regs.fitness.to_vec());
    b.release(&pads);
    b.end_stage();
}

fn append_fitness(b: &mut CircuitBuilder, regs: &FitnessRegs, maze: &Maze, n: u32, spec: &FitnessSpec) {
    let start = append_distance_pipeline(b, regs, maze, n);
    let end = b.mark();
    append_fitness_write(b, regs, spec);
    b.begin_stage("uncompute");
    b.uncompute_range(start, end);
    b.end_stage();
}

/// `F: |x⟩|0⟩_f ↦ |x⟩|fitness(x)⟩` under wall-blind semantics, fitness read
/// modulo `2^width`. Live registers: `path`, `fitness`; everything else
/// returns to zero.
pub fn build_fitness_circuit(maze: &Maze, n: u32, spec: &FitnessSpec) -> Result<RevCircuit> {
    check_args(maze, n, spec)?;
    let layout = CircuitLayout::new(maze.size(), n, spec);
    let mut b = CircuitBuilder::new();
    let regs = alloc_fitness_regs(&mut b, &layout);
    append_fitness(&mut b, &regs, maze, n, spec);
    Ok(b.finish(&["path", "fitness"]))
}

/// Fitness, comparator into flag `b`, `Z` on the flag, then both undone.
/// Net effect on `|x⟩|0…0⟩` is the sign `(−1)^[fitness(x) > cutoff]`.
/// With [`CutoffSource::Register`] a live `cutoff` register is added; the
/// constant carried by the source is then ignored.
pub fn build_oracle_circuit(maze: &Maze, n: u32, spec: &FitnessSpec, cutoff: OracleCutoff) -> Result<RevCircuit> {
    check_args(maze, n, spec)?;
    let layout = CircuitLayout::new(maze.size(), n, spec);
    let mut b = CircuitBuilder::new();
    let regs = alloc_fitness_regs(&mut b, &layout);
    let cutoff_reg = match cutoff {
        OracleCutoff::Register => Some(b.register("cutoff", RegisterRole::Cutoff, layout.fitness)),
        OracleCutoff::Constant(_) => None,
    };
    let flag = b.register("flag", RegisterRole::Flag, 1).bit(0);

    let fit_start = b.mark();
    append_fitness(&mut b, &regs, maze, n, spec);
    let fit_end = b.mark();

    b.begin_stage("comparator");
    let cmp_start = b.mark();
    let fbits = regs.fitness.to_vec();
    match (cutoff, cutoff_reg) {
        (OracleCutoff::Constant(c), _) if c < 0 => b.not(flag),
        (OracleCutoff::Constant(c), _) => gt_const(&mut b, &fbits, c as u64, flag),
        (OracleCutoff::Register, Some(reg)) => gt_register(&mut b, &fbits, &reg.to_vec(), flag),
        (OracleCutoff::Register, None) => unreachable!(),
    }
    let cmp_end = b.mark();
    b.begin_stage("phase");
    b.phase(flag);
    b.begin_stage("comparator-uncompute");
    b.uncompute_range(cmp_start, cmp_end);
    b.begin_stage("fitness-uncompute");
    b.uncompute_range(fit_start, fit_end);
    b.end_stage();

    let live: &[&str] = if cutoff_reg.is_some() { &["path", "cutoff"] } else { &["path"] };
    Ok(b.finish(live))
}

/// Cutoff of the oracle: a signed classical constant (negative marks every
/// path) or a quantum register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleCutoff {
    Constant(i64),
    Register,
}

impl From<CutoffSource> for OracleCutoff {
    fn from(s: CutoffSource) -> Self {
        match s {
            CutoffSource::Constant(c) => OracleCutoff::Constant(c as i64),
            CutoffSource::Register => OracleCutoff::Register,
        }
    }
}

/// `S: |x⟩|0⟩_v ↦ |x⟩|valid(x)⟩` where `valid` means every position along
/// the path stays inside the grid (walls ignored). Live: `path`, `valid`.
pub fn build_validity_circuit(maze: &Maze, n: u32) -> Result<RevCircuit> {
    codec::check_len(n)?;
    let m = maze.size();
    let w = position_width(m, n);
    let mut b = CircuitBuilder::new();
    let path = b.register("path", RegisterRole::Path, 2 * n as usize);
    let row = b.register("row", RegisterRole::PositionRow, w);
    let col = b.register("col", RegisterRole::PositionCol, w);
    let chain = b.register("chain", RegisterRole::ValidityChain, n as usize + 1);
    let valid = b.register("valid", RegisterRole::Flag, 1).bit(0);

    b.begin_stage("simulate-and-check");
    let start = b.mark();
    load_start(&mut b, row, col, maze.start(), n);
    b.not(chain.bit(0));
    let lo = n as u64; // offset of coordinate 0
    let hi = n as u64 + m as u64 - 1; // offset of coordinate m−1
    for k in 0..n {
        apply_step(&mut b, path, n, k, row, col);
        let seg = b.mark();
        let mut inside = Vec::new();
        for pos in [row, col] {
            let bits = pos.to_vec();
            let [above_lo, above_hi, ok] = [b.ancilla(), b.ancilla(), b.ancilla()];
            gt_const(&mut b, &bits, lo - 1, above_lo);
            gt_const(&mut b, &bits, hi, above_hi);
            b.not(above_hi);
            b.toffoli(above_lo, above_hi, ok);
            inside.push([above_lo, above_hi, ok]);
        }
        let phi = b.ancilla();
        b.toffoli(inside[0][2], inside[1][2], phi);
        b.toffoli(chain.bit(k as usize), phi, chain.bit(k as usize + 1));
        b.uncompute_except(seg, &[chain.bit(k as usize + 1)]);
        b.release(&[phi]);
        for bits in inside.iter().rev() {
            b.release(bits);
        }
    }
    b.begin_stage("readout");
    b.cnot(chain.bit(n as usize), valid);
    b.begin_stage("uncompute");
    b.uncompute_except(start, &[valid]);
    b.end_stage();
    Ok(b.finish(&["path", "valid"]))
}
