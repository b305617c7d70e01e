use super::{BitRegister, Gate, RegisterRole, RevCircuit, Stage};

/// A contiguous bit range, least significant bit first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Reg {
    pub offset: usize,
    pub width: usize,
}

impl Reg {
    pub fn new(offset: usize, width: usize) -> Self {
        Reg { offset, width }
    }

    pub fn bit(&self, i: usize) -> usize {
        assert!(i < self.width, "bit {i} outside register of width {}", self.width);
        self.offset + i
    }

    pub fn bits(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.width
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.bits().collect()
    }

    pub fn msb(&self) -> usize {
        self.bit(self.width - 1)
    }
}

/// Accumulates gates over registers and a pool of reusable ancilla bits.
///
/// Released ancillas must already be back at zero; the builder does not
/// check this, the cleanup tests do.
#[derive(Debug, Default)]
pub struct CircuitBuilder {
    width: usize,
    gates: Vec<Gate>,
    registers: Vec<BitRegister>,
    ancillas: Vec<usize>,
    free: Vec<usize>,
    stages: Vec<Stage>,
    open_stage: Option<(String, usize)>,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, name: &str, role: RegisterRole, width: usize) -> Reg {
        assert!(self.registers.iter().all(|r| r.name != name), "duplicate register {name:?}");
        let reg = Reg::new(self.width, width);
        self.width += width;
        self.registers.push(BitRegister { name: name.to_string(), role, offset: reg.offset, width });
        reg
    }

    pub fn ancilla(&mut self) -> usize {
        if let Some(b) = self.free.pop() {
            return b;
        }
        let b = self.width;
        self.width += 1;
        self.ancillas.push(b);
        b
    }

    pub fn ancillas(&mut self, count: usize) -> Vec<usize> {
        (0..count).map(|_| self.ancilla()).collect()
    }

    pub fn release(&mut self, bits: &[usize]) {
        for &b in bits.iter().rev() {
            debug_assert!(self.ancillas.contains(&b), "bit {b} is not an ancilla");
            debug_assert!(!self.free.contains(&b), "ancilla {b} released twice");
            self.free.push(b);
        }
    }

    pub fn not(&mut self, target: usize) {
        self.gates.push(Gate::Not { target });
    }

    pub fn cnot(&mut self, control: usize, target: usize) {
        assert_ne!(control, target);
        self.gates.push(Gate::Cnot { control, target });
    }

    pub fn toffoli(&mut self, a: usize, b: usize, target: usize) {
        assert!(a != target && b != target);
        if a == b {
            self.cnot(a, target);
        } else {
            self.gates.push(Gate::Toffoli { controls: [a, b], target });
        }
    }

    pub fn phase(&mut self, bit: usize) {
        self.gates.push(Gate::Phase { bit });
    }

    /// Load a classical constant into a zeroed register with NOTs.
    pub fn load_constant(&mut self, bits: &[usize], value: u64) {
        for (k, &b) in bits.iter().enumerate() {
            if k < 64 && (value >> k) & 1 == 1 {
                self.not(b);
            }
        }
    }

    pub fn mark(&self) -> usize {
        self.gates.len()
    }

    /// Emit `body`'s gates in reverse order, i.e. its inverse.
    pub fn inverted(&mut self, body: impl FnOnce(&mut Self)) {
        let start = self.gates.len();
        body(self);
        self.gates[start..].reverse();
    }

    /// Append the inverse of the gates in `start..end`.
    pub fn uncompute_range(&mut self, start: usize, end: usize) {
        let replay: Vec<Gate> = self.gates[start..end].iter().rev().copied().collect();
        self.gates.extend(replay);
    }

    /// Append the inverse of the gates emitted since `start`, skipping those
    /// that write one of `keep`. Valid when no bit of `keep` is ever used as
    /// a control in that span: the kept results are then the only change.
    pub fn uncompute_except(&mut self, start: usize, keep: &[usize]) {
        let replay: Vec<Gate> = self.gates[start..]
            .iter()
            .rev()
            .filter(|g| g.target().is_none_or(|t| !keep.contains(&t)))
            .copied()
            .collect();
        debug_assert!(
            self.gates[start..].iter().all(|g| match *g {
                Gate::Cnot { control, .. } => !keep.contains(&control),
                Gate::Toffoli { controls, .. } => controls.iter().all(|c| !keep.contains(c)),
                Gate::Phase { bit } => !keep.contains(&bit),
                Gate::Not { .. } => true,
            }),
            "kept bit used as a control"
        );
        self.gates.extend(replay);
    }

    pub fn begin_stage(&mut self, name: &str) {
        self.end_stage();
        self.open_stage = Some((name.to_string(), self.gates.len()));
    }

    pub fn end_stage(&mut self) {
        if let Some((name, start)) = self.open_stage.take() {
            self.stages.push(Stage { name, gates: start..self.gates.len() });
        }
    }

    pub fn finish(mut self, live: &[&str]) -> RevCircuit {
        self.end_stage();
        debug_assert_eq!(self.free.len(), self.ancillas.len(), "ancilla still checked out");
        RevCircuit {
            width: self.width,
            gates: self.gates,
            registers: self.registers,
            ancillas: self.ancillas,
            stages: self.stages,
            live: live.iter().map(|s| s.to_string()).collect(),
        }
    }
}
