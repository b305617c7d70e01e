//! Reversible circuits over named bit registers, executed classically as
//! bijections on basis states.
//!
//! The gate set is NOT / CNOT / Toffoli plus a `Z` phase marker on a single
//! bit. Every gate is its own inverse, so the inverse of a circuit is its
//! gate list reversed. Phase is tracked as a ±1 sign per basis state.

mod arith;
mod builder;
mod compare;
mod maze_circuits;

use std::fmt::Write as _;
use std::ops::{Add, Range};

use serde::Serialize;

use crate::error::{Error, Result};

pub use arith::{build_adder, build_squarer, AdderOperand};
pub use builder::{CircuitBuilder, Reg};
pub use compare::{build_gt_comparator, build_gt_subtractor, CutoffSource};
pub use maze_circuits::{
    build_fitness_circuit, build_oracle_circuit, build_validity_circuit, position_width, CircuitLayout, OracleCutoff,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    Not {
        target: usize,
    },
    Cnot {
        control: usize,
        target: usize,
    },
    Toffoli {
        controls: [usize; 2],
        target: usize,
    },
    /// `Z` on one bit: multiplies the phase by −1 when the bit is 1.
    Phase {
        bit: usize,
    },
}

impl Gate {
    /// Bit the gate writes; `None` for the phase marker.
    pub fn target(&self) -> Option<usize> {
        match *self {
            Gate::Not { target } | Gate::Cnot { target, .. } | Gate::Toffoli { target, .. } => Some(target),
            Gate::Phase { .. } => None,
        }
    }

    pub fn bits(&self) -> Vec<usize> {
        match *self {
            Gate::Not { target } => vec![target],
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Toffoli { controls, target } => vec![controls[0], controls[1], target],
            Gate::Phase { bit } => vec![bit],
        }
    }

    fn apply(&self, bits: &mut [bool], sign: &mut i8) {
        match *self {
            Gate::Not { target } => bits[target] ^= true,
            Gate::Cnot { control, target } => bits[target] ^= bits[control],
            Gate::Toffoli { controls: [a, b], target } => bits[target] ^= bits[a] & bits[b],
            Gate::Phase { bit } => {
                if bits[bit] {
                    *sign = -*sign;
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegisterRole {
    Path,
    PositionRow,
    PositionCol,
    /// Coordinate difference to the goal, then its magnitude.
    Difference,
    /// Sign of a coordinate difference.
    Sign,
    Square,
    Distance,
    Fitness,
    Flag,
    /// Quantum cutoff register.
    Cutoff,
    /// Generic operand / result register of a standalone arithmetic circuit.
    Operand,
    /// Per-step cumulative validity bits.
    ValidityChain,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BitRegister {
    pub name: String,
    pub role: RegisterRole,
    /// First bit (the least significant).
    pub offset: usize,
    pub width: usize,
}

impl BitRegister {
    pub fn reg(&self) -> Reg {
        Reg::new(self.offset, self.width)
    }
}

/// A named span of the gate list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub name: String,
    pub gates: Range<usize>,
}

/// An assignment of every circuit bit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisState {
    bits: Vec<bool>,
}

impl BasisState {
    pub fn zeros(width: usize) -> Self {
        BasisState { bits: vec![false; width] }
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set_bit(&mut self, i: usize, v: bool) {
        self.bits[i] = v;
    }

    /// Write `value` into a register (LSB at `reg.offset`); high bits beyond the width are dropped.
    pub fn set(&mut self, reg: Reg, value: u64) {
        for (k, b) in reg.bits().enumerate() {
            self.bits[b] = k < 64 && (value >> k) & 1 == 1;
        }
    }

    pub fn get(&self, reg: Reg) -> u64 {
        reg.bits().enumerate().filter(|&(k, b)| k < 64 && self.bits[b]).fold(0u64, |acc, (k, _)| acc | (1 << k))
    }

    pub fn is_zero_on(&self, bits: &[usize]) -> bool {
        bits.iter().all(|&b| !self.bits[b])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct GateCounts {
    pub not: usize,
    pub cnot: usize,
    pub toffoli: usize,
    pub phase: usize,
    pub ancilla_high_water: usize,
    /// Longest chain of gates sharing a bit.
    pub depth: usize,
}

impl GateCounts {
    pub fn of_gates(gates: &[Gate], width: usize) -> GateCounts {
        let mut counts = GateCounts::default();
        let mut level = vec![0usize; width];
        for g in gates {
            match g {
                Gate::Not { .. } => counts.not += 1,
                Gate::Cnot { .. } => counts.cnot += 1,
                Gate::Toffoli { .. } => counts.toffoli += 1,
                Gate::Phase { .. } => counts.phase += 1,
            }
            let bits = g.bits();
            let l = 1 + bits.iter().map(|&b| level[b]).max().unwrap_or(0);
            for b in bits {
                level[b] = l;
            }
            counts.depth = counts.depth.max(l);
        }
        counts
    }

    pub fn total(&self) -> usize {
        self.not + self.cnot + self.toffoli + self.phase
    }
}

/// Gate tallies add; depth adds as the sequential upper bound and the
/// ancilla high-water takes the max.
impl Add for GateCounts {
    type Output = GateCounts;

    fn add(self, o: GateCounts) -> GateCounts {
        GateCounts {
            not: self.not + o.not,
            cnot: self.cnot + o.cnot,
            toffoli: self.toffoli + o.toffoli,
            phase: self.phase + o.phase,
            ancilla_high_water: self.ancilla_high_water.max(o.ancilla_high_water),
            depth: self.depth + o.depth,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RevCircuit {
    pub(crate) width: usize,
    pub(crate) gates: Vec<Gate>,
    pub(crate) registers: Vec<BitRegister>,
    /// Pooled scratch bits; zero on entry and on exit.
    pub(crate) ancillas: Vec<usize>,
    pub(crate) stages: Vec<Stage>,
    /// Registers that legitimately hold data after the circuit runs on a
    /// clean input; every other bit must come back to zero.
    pub(crate) live: Vec<String>,
}

impl RevCircuit {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn registers(&self) -> &[BitRegister] {
        &self.registers
    }

    pub fn register(&self, name: &str) -> Option<&BitRegister> {
        self.registers.iter().find(|r| r.name == name)
    }

    /// Register by name; panics if absent. For circuits whose layout is fixed.
    pub fn reg(&self, name: &str) -> Reg {
        self.register(name).unwrap_or_else(|| panic!("circuit has no register {name:?}")).reg()
    }

    pub fn ancillas(&self) -> &[usize] {
        &self.ancillas
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn stage(&self, name: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.name == name)
    }

    pub fn live_registers(&self) -> &[String] {
        &self.live
    }

    /// Bits outside the live registers: ancillas and work registers.
    pub fn scratch_bits(&self) -> Vec<usize> {
        let mut live = vec![false; self.width];
        for r in self.registers.iter().filter(|r| self.live.contains(&r.name)) {
            live[r.offset..r.offset + r.width].fill(true);
        }
        (0..self.width).filter(|&b| !live[b]).collect()
    }

    pub fn blank_state(&self) -> BasisState {
        BasisState::zeros(self.width)
    }

    /// Run on one basis state, returning the output state and the accumulated sign.
    pub fn run_on_basis(&self, input: &BasisState) -> Result<(BasisState, i8)> {
        if input.width() != self.width {
            return Err(Error::WidthMismatch { expected: self.width, actual: input.width() });
        }
        let mut state = input.clone();
        let mut sign = 1i8;
        for g in &self.gates {
            g.apply(&mut state.bits, &mut sign);
        }
        Ok((state, sign))
    }

    /// The formal inverse: gates in reverse order.
    pub fn inverse(&self) -> RevCircuit {
        let len = self.gates.len();
        let mut gates = self.gates.clone();
        gates.reverse();
        let mut stages: Vec<Stage> = self
            .stages
            .iter()
            .map(|s| Stage { name: format!("{}-inverse", s.name), gates: len - s.gates.end..len - s.gates.start })
            .collect();
        stages.reverse();
        RevCircuit { gates, stages, ..self.clone() }
    }

    /// This circuit followed by `other` over the same bit layout.
    pub fn then(&self, other: &RevCircuit) -> Result<RevCircuit> {
        if other.width != self.width {
            return Err(Error::WidthMismatch { expected: self.width, actual: other.width });
        }
        let shift = self.gates.len();
        let mut out = self.clone();
        out.gates.extend_from_slice(&other.gates);
        out.stages.extend(
            other
                .stages
                .iter()
                .map(|s| Stage { name: s.name.clone(), gates: s.gates.start + shift..s.gates.end + shift }),
        );
        Ok(out)
    }

    pub fn count_gates(&self) -> GateCounts {
        GateCounts { ancilla_high_water: self.ancillas.len(), ..GateCounts::of_gates(&self.gates, self.width) }
    }

    pub fn count_stage(&self, name: &str) -> Option<GateCounts> {
        self.stage(name).map(|s| GateCounts::of_gates(&self.gates[s.gates.clone()], self.width))
    }

    /// Text listing: register declarations as comments, then one
    /// `GATE targets controls` line per gate.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# width {}", self.width);
        for r in &self.registers {
            let _ = writeln!(out, "# register {} {:?} bits {}..{}", r.name, r.role, r.offset, r.offset + r.width);
        }
        if !self.ancillas.is_empty() {
            let list: Vec<String> = self.ancillas.iter().map(|b| b.to_string()).collect();
            let _ = writeln!(out, "# ancillas {}", list.join(","));
        }
        for s in &self.stages {
            let _ = writeln!(out, "# stage {} gates {}..{}", s.name, s.gates.start, s.gates.end);
        }
        for g in &self.gates {
            let _ = match *g {
                Gate::Not { target } => writeln!(out, "NOT {target}"),
                Gate::Cnot { control, target } => writeln!(out, "CNOT {target} {control}"),
                Gate::Toffoli { controls: [a, b], target } => {
                    writeln!(out, "TOFFOLI {target} {a},{b}")
                }
                Gate::Phase { bit } => writeln!(out, "Z {bit}"),
            };
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> RevCircuit {
        let mut b = CircuitBuilder::new();
        let x = b.register("x", RegisterRole::Operand, 3);
        b.not(x.bit(0));
        b.cnot(x.bit(0), x.bit(1));
        b.toffoli(x.bit(0), x.bit(1), x.bit(2));
        b.phase(x.bit(2));
        b.finish(&["x"])
    }

    #[test]
    fn identity_circuit() {
        let mut b = CircuitBuilder::new();
        let x = b.register("x", RegisterRole::Operand, 4);
        let c = b.finish(&["x"]);
        let mut s = c.blank_state();
        s.set(x, 0b1011);
        let (out, sign) = c.run_on_basis(&s).unwrap();
        assert_eq!(out, s);
        assert_eq!(sign, 1);
        assert_eq!(c.count_gates(), GateCounts::default());
    }

    #[test]
    fn single_not() {
        let mut b = CircuitBuilder::new();
        let x = b.register("x", RegisterRole::Operand, 1);
        b.not(x.bit(0));
        let c = b.finish(&["x"]);
        let (out, _) = c.run_on_basis(&c.blank_state()).unwrap();
        assert_eq!(out.get(x), 1);
    }

    #[test]
    fn width_mismatch() {
        let c = tiny();
        assert!(matches!(c.run_on_basis(&BasisState::zeros(5)), Err(Error::WidthMismatch { expected: 3, actual: 5 })));
    }

    #[test]
    fn inverse_restores_every_input() {
        let c = tiny();
        let inv = c.inverse();
        let x = c.reg("x");
        for v in 0..8 {
            let mut s = c.blank_state();
            s.set(x, v);
            let (mid, s1) = c.run_on_basis(&s).unwrap();
            let (back, s2) = inv.run_on_basis(&mid).unwrap();
            assert_eq!(back, s);
            // the phase marker fires on the same bit value both ways
            assert_eq!(s1, s2);
        }
    }

    #[test]
    fn counts_and_depth() {
        let c = tiny();
        let g = c.count_gates();
        assert_eq!((g.not, g.cnot, g.toffoli, g.phase), (1, 1, 1, 1));
        assert_eq!(g.depth, 4);
        let both = c.then(&c).unwrap().count_gates();
        let sum = g + g;
        assert_eq!((both.not, both.cnot, both.toffoli), (sum.not, sum.cnot, sum.toffoli));
        assert!(both.depth <= sum.depth);
    }

    #[test]
    fn text_listing() {
        let text = tiny().to_text();
        assert!(text.contains("NOT 0\nCNOT 1 0\nTOFFOLI 2 0,1\nZ 2\n"), "{text}");
        assert!(text.contains("# register x"));
    }
}
