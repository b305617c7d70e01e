//! Reversible integer arithmetic on bit lists (LSB first).

use super::{CircuitBuilder, RegisterRole, RevCircuit};

/// `target += addend (mod 2^len)` with the MAJ/UMA ripple-carry network.
/// Both lists have the same length; one pooled ancilla carries the input carry.
pub(crate) fn add_into(b: &mut CircuitBuilder, addend: &[usize], target: &[usize]) {
    assert_eq!(addend.len(), target.len(), "adder operands differ in width");
    let len = addend.len();
    if len == 0 {
        return;
    }
    let carry = b.ancilla();
    // MAJ(x, y, z): z ends up holding the majority (the next carry).
    let maj = |b: &mut CircuitBuilder, x: usize, y: usize, z: usize| {
        b.cnot(z, y);
        b.cnot(z, x);
        b.toffoli(x, y, z);
    };
    // UMA(x, y, z): undoes MAJ on x, z and leaves the sum bit in y.
    let uma = |b: &mut CircuitBuilder, x: usize, y: usize, z: usize| {
        b.toffoli(x, y, z);
        b.cnot(z, x);
        b.cnot(x, y);
    };
    maj(b, carry, target[0], addend[0]);
    for i in 1..len {
        maj(b, addend[i - 1], target[i], addend[i]);
    }
    for i in (1..len).rev() {
        uma(b, addend[i - 1], target[i], addend[i]);
    }
    uma(b, carry, target[0], addend[0]);
    b.release(&[carry]);
}

/// `target -= subtrahend (mod 2^len)`.
pub(crate) fn sub_from(b: &mut CircuitBuilder, subtrahend: &[usize], target: &[usize]) {
    b.inverted(|b| add_into(b, subtrahend, target));
}

/// `target += value (mod 2^len)` through a temporarily loaded ancilla register.
pub(crate) fn add_constant(b: &mut CircuitBuilder, value: u64, target: &[usize]) {
    let tmp = b.ancillas(target.len());
    b.load_constant(&tmp, value);
    add_into(b, &tmp, target);
    b.load_constant(&tmp, value);
    b.release(&tmp);
}

pub(crate) fn sub_constant(b: &mut CircuitBuilder, value: u64, target: &[usize]) {
    b.inverted(|b| add_constant(b, value, target));
}

/// `x += 1 (mod 2^w)` when `control` is set, via a carry chain in ancillas.
pub(crate) fn controlled_increment(b: &mut CircuitBuilder, control: usize, x: &[usize]) {
    let w = x.len();
    if w == 0 {
        return;
    }
    let mut carry = vec![control];
    let chain = b.ancillas(w - 1);
    for t in 1..w {
        b.toffoli(carry[t - 1], x[t - 1], chain[t - 1]);
        carry.push(chain[t - 1]);
    }
    for t in (1..w).rev() {
        b.cnot(carry[t], x[t]);
        b.toffoli(carry[t - 1], x[t - 1], carry[t]);
    }
    b.cnot(control, x[0]);
    b.release(&chain);
}

/// `x -= 1 (mod 2^w)` when `control` is set: `x − 1 = ¬(¬x + 1)`.
pub(crate) fn controlled_decrement(b: &mut CircuitBuilder, control: usize, x: &[usize]) {
    for &bit in x {
        b.not(bit);
    }
    controlled_increment(b, control, x);
    for &bit in x {
        b.not(bit);
    }
}

/// Two's-complement negate `x` in place when `flag` is set.
pub(crate) fn conditional_negate(b: &mut CircuitBuilder, flag: usize, x: &[usize]) {
    for &bit in x {
        b.cnot(flag, bit);
    }
    controlled_increment(b, flag, x);
}

/// AND of `controls` into a fresh ancilla (or the control itself when there is one).
/// Returns the bit and the chain ancillas for [`and_all_undo`].
fn and_all(b: &mut CircuitBuilder, controls: &[usize]) -> (usize, Vec<usize>) {
    match controls {
        [] => panic!("and_all needs at least one control"),
        [only] => (*only, Vec::new()),
        [first, rest @ ..] => {
            let chain = b.ancillas(rest.len());
            let mut acc = *first;
            for (&c, &t) in rest.iter().zip(&chain) {
                b.toffoli(acc, c, t);
                acc = t;
            }
            (acc, chain)
        }
    }
}

/// `out += a·a`, schoolbook: for each bit `a_t`, copy `a` gated by `a_t`
/// into a scratch register and add it at offset `t`.
pub(crate) fn square_into(b: &mut CircuitBuilder, a: &[usize], out: &[usize]) {
    let w = a.len();
    assert!(out.len() >= 2 * w, "squarer output needs at least {} bits", 2 * w);
    for t in 0..w {
        let window = &out[t..];
        let scratch = b.ancillas(window.len());
        for s in 0..w {
            b.toffoli(a[t], a[s], scratch[s]);
        }
        add_into(b, &scratch, window);
        // undo the gated copy only; the addition into `window` stays
        for s in (0..w).rev() {
            b.toffoli(a[t], a[s], scratch[s]);
        }
        b.release(&scratch);
    }
}

fn and_all_undo(b: &mut CircuitBuilder, controls: &[usize], chain: &[usize]) {
    if let [first, rest @ ..] = controls {
        let mut accs = vec![*first];
        accs.extend_from_slice(chain);
        for (i, (&c, &t)) in rest.iter().zip(chain).enumerate().rev() {
            b.toffoli(accs[i], c, t);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdderOperand {
    /// Add the contents of register `a`.
    Register,
    /// Add a classical constant.
    Constant(u64),
}

/// Standalone adder: `b ← b ± operand (mod 2^width)`, applied only when every
/// bit of the `ctl` register is set. Registers: `a` (register operand only),
/// `b`, `ctl` (when `controls > 0`).
pub fn build_adder(width: usize, subtract: bool, controls: usize, operand: AdderOperand) -> RevCircuit {
    assert!(width >= 1, "adder width must be ≥ 1");
    let mut b = CircuitBuilder::new();
    let a = match operand {
        AdderOperand::Register => Some(b.register("a", RegisterRole::Operand, width)),
        AdderOperand::Constant(_) => None,
    };
    let target = b.register("b", RegisterRole::Operand, width);
    let ctl = (controls > 0).then(|| b.register("ctl", RegisterRole::Flag, controls));
    let target_bits = target.to_vec();

    let body = |b: &mut CircuitBuilder| match (ctl, a, operand) {
        (None, Some(a), _) => add_into(b, &a.to_vec(), &target_bits),
        (None, None, AdderOperand::Constant(v)) => add_constant(b, v, &target_bits),
        (Some(ctl), _, _) => {
            let controls = ctl.to_vec();
            let (gate, chain) = and_all(b, &controls);
            let tmp = b.ancillas(width);
            // gated copy of the operand; applying it twice restores `tmp`
            let copy = |b: &mut CircuitBuilder| match (a, operand) {
                (Some(a), _) => {
                    for (i, &t) in tmp.iter().enumerate() {
                        b.toffoli(gate, a.bit(i), t);
                    }
                }
                (None, AdderOperand::Constant(v)) => {
                    for (i, &t) in tmp.iter().enumerate() {
                        if i < 64 && (v >> i) & 1 == 1 {
                            b.cnot(gate, t);
                        }
                    }
                }
                (None, AdderOperand::Register) => unreachable!(),
            };
            copy(b);
            add_into(b, &tmp, &target_bits);
            copy(b);
            b.release(&tmp);
            and_all_undo(b, &controls, &chain);
            b.release(&chain);
        }
        (None, None, AdderOperand::Register) => unreachable!(),
    };
    if subtract {
        b.inverted(body);
    } else {
        body(&mut b);
    }
    let mut live = vec!["b"];
    if a.is_some() {
        live.push("a");
    }
    if ctl.is_some() {
        live.push("ctl");
    }
    b.finish(&live)
}

/// Standalone squarer: `|a⟩|0⟩ → |a⟩|a²⟩` with registers `a` (width) and
/// `square` (2·width).
pub fn build_squarer(width: usize) -> RevCircuit {
    assert!(width >= 1, "squarer width must be ≥ 1");
    let mut b = CircuitBuilder::new();
    let a = b.register("a", RegisterRole::Operand, width);
    let sq = b.register("square", RegisterRole::Square, 2 * width);
    square_into(&mut b, &a.to_vec(), &sq.to_vec());
    b.finish(&["a", "square"])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(c: &RevCircuit, inputs: &[(&str, u64)]) -> (super::super::BasisState, i8) {
        let mut s = c.blank_state();
        for &(name, v) in inputs {
            s.set(c.reg(name), v);
        }
        c.run_on_basis(&s).unwrap()
    }

    #[test]
    fn three_bit_add() {
        let c = build_adder(3, false, 0, AdderOperand::Register);
        let (out, _) = run(&c, &[("a", 0b001), ("b", 0b011)]);
        assert_eq!(out.get(c.reg("b")), 0b100);
        assert_eq!(out.get(c.reg("a")), 0b001);
    }

    #[test]
    fn adder_exhaustive_with_cleanup() {
        for w in 1..=4usize {
            let add = build_adder(w, false, 0, AdderOperand::Register);
            let sub = build_adder(w, true, 0, AdderOperand::Register);
            let m = 1u64 << w;
            for a in 0..m {
                for bv in 0..m {
                    let (out, sign) = run(&add, &[("a", a), ("b", bv)]);
                    assert_eq!(out.get(add.reg("b")), (a + bv) % m);
                    assert_eq!(out.get(add.reg("a")), a);
                    assert!(out.is_zero_on(add.ancillas()));
                    assert_eq!(sign, 1);
                    let (back, _) = sub.run_on_basis(&out).unwrap();
                    assert_eq!(back.get(add.reg("b")), bv, "sub∘add w={w} a={a} b={bv}");
                }
            }
        }
    }

    #[test]
    fn constant_add_and_subtract() {
        for w in 1..=4usize {
            let m = 1u64 << w;
            for k in 0..m {
                let add = build_adder(w, false, 0, AdderOperand::Constant(k));
                let sub = build_adder(w, true, 0, AdderOperand::Constant(k));
                for v in 0..m {
                    let (out, _) = run(&add, &[("b", v)]);
                    assert_eq!(out.get(add.reg("b")), (v + k) % m);
                    assert!(out.is_zero_on(add.ancillas()));
                    let (out, _) = run(&sub, &[("b", v)]);
                    assert_eq!(out.get(sub.reg("b")), (v + m - k) % m);
                }
            }
        }
    }

    #[test]
    fn controlled_add() {
        for controls in 1..=3usize {
            let c = build_adder(3, false, controls, AdderOperand::Register);
            let all = (1u64 << controls) - 1;
            for ctl in 0..=all {
                for a in 0..8 {
                    for bv in 0..8 {
                        let (out, _) = run(&c, &[("a", a), ("b", bv), ("ctl", ctl)]);
                        let want = if ctl == all { (a + bv) % 8 } else { bv };
                        assert_eq!(out.get(c.reg("b")), want);
                        assert!(out.is_zero_on(c.ancillas()));
                    }
                }
            }
        }
        let c = build_adder(3, true, 1, AdderOperand::Constant(5));
        for bv in 0..8 {
            assert_eq!(run(&c, &[("b", bv)]).0.get(c.reg("b")), bv);
            assert_eq!(run(&c, &[("b", bv), ("ctl", 1)]).0.get(c.reg("b")), (bv + 3) % 8);
        }
    }

    #[test]
    fn squarer_examples_and_exhaustive() {
        let c = build_squarer(2);
        assert_eq!(run(&c, &[("a", 0)]).0.get(c.reg("square")), 0);
        assert_eq!(run(&c, &[("a", 3)]).0.get(c.reg("square")), 9);
        for w in 1..=5usize {
            let c = build_squarer(w);
            for a in 0..(1u64 << w) {
                let (out, _) = run(&c, &[("a", a)]);
                // schoolbook multiply oracle
                let mut want = 0u64;
                for t in 0..w {
                    if (a >> t) & 1 == 1 {
                        want += a << t;
                    }
                }
                assert_eq!(out.get(c.reg("square")), want, "w={w} a={a}");
                assert_eq!(out.get(c.reg("a")), a);
                assert!(out.is_zero_on(c.ancillas()));
            }
        }
    }

    #[test]
    fn increment_and_negate() {
        for w in 1..=4usize {
            let m = 1u64 << w;
            let mut bld = CircuitBuilder::new();
            let x = bld.register("x", RegisterRole::Operand, w);
            let f = bld.register("f", RegisterRole::Flag, 1);
            controlled_increment(&mut bld, f.bit(0), &x.to_vec());
            let inc = bld.finish(&["x", "f"]);

            let mut bld = CircuitBuilder::new();
            let x2 = bld.register("x", RegisterRole::Operand, w);
            let f2 = bld.register("f", RegisterRole::Flag, 1);
            controlled_decrement(&mut bld, f2.bit(0), &x2.to_vec());
            let dec = bld.finish(&["x", "f"]);

            let mut bld = CircuitBuilder::new();
            let x3 = bld.register("x", RegisterRole::Operand, w);
            let f3 = bld.register("f", RegisterRole::Flag, 1);
            conditional_negate(&mut bld, f3.bit(0), &x3.to_vec());
            let neg = bld.finish(&["x", "f"]);

            for v in 0..m {
                for flag in 0..2u64 {
                    let (o, _) = run(&inc, &[("x", v), ("f", flag)]);
                    assert_eq!(o.get(x), (v + flag) % m);
                    assert!(o.is_zero_on(inc.ancillas()));
                    let (o, _) = run(&dec, &[("x", v), ("f", flag)]);
                    assert_eq!(o.get(x2), (v + m - flag) % m);
                    let (o, _) = run(&neg, &[("x", v), ("f", flag)]);
                    let want = if flag == 1 { (m - v) % m } else { v };
                    assert_eq!(o.get(x3), want);
                }
            }
        }
    }
}
