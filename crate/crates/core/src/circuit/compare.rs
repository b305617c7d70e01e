//! Greater-than comparators.
//!
//! The primary construction evaluates the prefix-equality formula
//! `GT(a, c) = ⋁_i [a_i ∧ ¬c_i ∧ ⋀_{j>i} (a_j ↔ c_j)]` from the most
//! significant bit down, keeping the running `⋀ (a_j ↔ c_j)` in a chain of
//! ancillas. At most one disjunct is true, so each term is XORed straight
//! into the output. The chain is then uncomputed, leaving only the output.
//!
//! A subtract-and-read-borrow variant is provided as an independent
//! construction for cross-checking.

use super::arith::{add_into, sub_from};
use super::{CircuitBuilder, RegisterRole, RevCircuit};

/// Where the cutoff comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutoffSource {
    /// A classical constant hard-wired into the gates.
    Constant(u64),
    /// A quantum register `c` of the same width as the compared value.
    Register,
}

/// `out ^= [a > value]`, with `value` a classical constant.
pub(crate) fn gt_const(b: &mut CircuitBuilder, a: &[usize], value: u64, out: usize) {
    let w = a.len();
    if w == 0 || (w < 64 && value >> w != 0) {
        // the register can never exceed a constant this large
        return;
    }
    let bit = |i: usize| (value >> i) & 1 == 1;
    let start = b.mark();
    let chain = b.ancillas(w);
    // chain[w-1] = 1: the empty prefix is equal
    b.not(chain[w - 1]);
    for i in (0..w).rev() {
        let eq = chain[i];
        if !bit(i) {
            b.toffoli(eq, a[i], out);
        }
        if i > 0 {
            let next = chain[i - 1];
            if bit(i) {
                b.toffoli(eq, a[i], next);
            } else {
                b.not(a[i]);
                b.toffoli(eq, a[i], next);
                b.not(a[i]);
            }
        }
    }
    b.uncompute_except(start, &[out]);
    b.release(&chain);
}

/// `out ^= [a > c]` for two registers of equal width. `c` is used as scratch
/// for `a ⊕ c` and restored.
pub(crate) fn gt_register(b: &mut CircuitBuilder, a: &[usize], c: &[usize], out: usize) {
    assert_eq!(a.len(), c.len(), "comparator operands differ in width");
    let w = a.len();
    if w == 0 {
        return;
    }
    let start = b.mark();
    let chain = b.ancillas(w);
    let term = b.ancilla();
    b.not(chain[w - 1]);
    for i in (0..w).rev() {
        let eq = chain[i];
        // c_i ← a_i ⊕ c_i; then a_i ∧ ¬c_i = a_i ∧ (a_i ⊕ c_i)
        b.cnot(a[i], c[i]);
        b.toffoli(a[i], c[i], term);
        b.toffoli(eq, term, out);
        b.toffoli(a[i], c[i], term);
        if i > 0 {
            b.not(c[i]);
            b.toffoli(eq, c[i], chain[i - 1]);
            b.not(c[i]);
        }
    }
    b.uncompute_except(start, &[out]);
    b.release(&[term]);
    b.release(&chain);
}

/// `out ^= [a > c]` by computing `c − a` one bit wider and reading its sign.
fn gt_by_subtraction(b: &mut CircuitBuilder, a: &[usize], c: &[usize], out: usize) {
    assert_eq!(a.len(), c.len());
    let pads = b.ancillas(2);
    let mut a_ext = a.to_vec();
    a_ext.push(pads[0]);
    let mut c_ext = c.to_vec();
    c_ext.push(pads[1]);
    sub_from(b, &a_ext, &c_ext);
    b.cnot(pads[1], out);
    add_into(b, &a_ext, &c_ext);
    b.release(&pads);
}

/// Registers: `f` (width), `c` (register source only), `b` (1-bit result).
pub fn build_gt_comparator(width: usize, source: CutoffSource) -> RevCircuit {
    build(width, source, false)
}

/// Same interface as [`build_gt_comparator`], built from a subtractor.
pub fn build_gt_subtractor(width: usize, source: CutoffSource) -> RevCircuit {
    build(width, source, true)
}

fn build(width: usize, source: CutoffSource, subtractor: bool) -> RevCircuit {
    assert!(width >= 1, "comparator width must be ≥ 1");
    let mut b = CircuitBuilder::new();
    let f = b.register("f", RegisterRole::Fitness, width);
    let c = match source {
        CutoffSource::Register => Some(b.register("c", RegisterRole::Cutoff, width)),
        CutoffSource::Constant(_) => None,
    };
    let flag = b.register("b", RegisterRole::Flag, 1);
    let a = f.to_vec();
    match (source, c, subtractor) {
        (CutoffSource::Constant(v), _, false) => gt_const(&mut b, &a, v, flag.bit(0)),
        (_, Some(c), false) => gt_register(&mut b, &a, &c.to_vec(), flag.bit(0)),
        (CutoffSource::Constant(v), _, true) => {
            if width >= 64 || v >> width == 0 {
                let tmp = b.ancillas(width);
                b.load_constant(&tmp, v);
                gt_by_subtraction(&mut b, &a, &tmp, flag.bit(0));
                b.load_constant(&tmp, v);
                b.release(&tmp);
            }
        }
        (_, Some(c), true) => gt_by_subtraction(&mut b, &a, &c.to_vec(), flag.bit(0)),
        (CutoffSource::Register, None, _) => unreachable!(),
    }
    let live: &[&str] = if c.is_some() { &["f", "c", "b"] } else { &["f", "b"] };
    b.finish(live)
}
