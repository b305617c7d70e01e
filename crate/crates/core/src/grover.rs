//! Exact amplitude amplification over the `2n`-qubit path register.
//!
//! The gate-level oracle restores every ancilla, so on the path register it
//! is exactly diagonal: a sign per basis index. The engine therefore keeps
//! only the `4ⁿ` path amplitudes.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::codec::{self, PathIndex};
use crate::error::{Error, Result};

/// Largest `n` accepted by the CSV state dump.
pub const DUMP_MAX_LEN: u32 = 6;

/// Below this many amplitudes the elementwise loops stay sequential.
const PAR_THRESHOLD: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq)]
pub struct PathState {
    n: u32,
    amps: Vec<Complex64>,
}

/// `|Ω⟩`: amplitude `1/2ⁿ` on every one of the `4ⁿ` paths.
pub fn prepare_uniform(n: u32) -> Result<PathState> {
    let len = codec::path_count(n)?;
    // 2ⁿ is a power of two, so the division is exact
    let a = 1.0 / (1u64 << n) as f64;
    Ok(PathState { n, amps: vec![Complex64::new(a, 0.0); len] })
}

impl PathState {
    pub fn basis(index: PathIndex) -> Result<PathState> {
        let len = codec::path_count(index.len())?;
        let mut amps = vec![Complex64::new(0.0, 0.0); len];
        amps[index.value() as usize] = Complex64::new(1.0, 0.0);
        Ok(PathState { n: index.len(), amps })
    }

    /// Wraps raw amplitudes; the length must be `4ⁿ`. Not renormalised.
    pub fn from_amplitudes(n: u32, amps: Vec<Complex64>) -> Result<PathState> {
        let len = codec::path_count(n)?;
        if amps.len() != len {
            return Err(Error::WidthMismatch { expected: len, actual: amps.len() });
        }
        Ok(PathState { n, amps })
    }

    pub fn path_len(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Total probability on `indices` (assumed distinct).
    pub fn probability_of(&self, indices: &[usize]) -> f64 {
        indices.iter().map(|&u| self.amps[u].norm_sqr()).sum()
    }

    fn check_indices(&self, marked: &[usize]) -> Result<()> {
        match marked.iter().find(|&&u| u >= self.amps.len()) {
            Some(&u) => Err(Error::IndexOutOfRange { value: u as u64, n: self.n }),
            None => Ok(()),
        }
    }

    /// `O = I − 2Π`: negate the amplitudes at `marked`. Duplicate indices
    /// are rejected, since they would silently cancel.
    pub fn apply_oracle(&mut self, marked: &[usize]) -> Result<()> {
        self.check_indices(marked)?;
        let mut seen = vec![false; self.amps.len()];
        for &u in marked {
            if std::mem::replace(&mut seen[u], true) {
                return Err(Error::invalid(format!("index {u} marked twice")));
            }
            self.amps[u] = -self.amps[u];
        }
        Ok(())
    }

    /// Diagonal oracle from a per-index sign table (e.g. read off a
    /// gate-level oracle circuit).
    pub fn apply_signs(&mut self, signs: &[i8]) -> Result<()> {
        if signs.len() != self.amps.len() {
            return Err(Error::WidthMismatch { expected: self.amps.len(), actual: signs.len() });
        }
        for (a, &s) in self.amps.iter_mut().zip(signs) {
            if s < 0 {
                *a = -*a;
            }
        }
        Ok(())
    }

    /// `D = 2|Ω⟩⟨Ω| − I`: every amplitude becomes `2·mean − a`.
    pub fn apply_diffuser(&mut self) {
        // sequential sum keeps the result independent of the thread count
        let sum: Complex64 = self.amps.iter().sum();
        let twice_mean = sum * (2.0 / self.amps.len() as f64);
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps.par_iter_mut().for_each(|a| *a = twice_mean - *a);
        } else {
            self.amps.iter_mut().for_each(|a| *a = twice_mean - *a);
        }
    }

    /// `(D·O)^rounds`.
    pub fn grover_iterate(&mut self, marked: &[usize], rounds: u64) -> Result<()> {
        self.check_indices(marked)?;
        for _ in 0..rounds {
            self.apply_oracle(marked)?;
            self.apply_diffuser();
        }
        Ok(())
    }

    /// Born-rule sample, deterministic for a given seed.
    pub fn measure(&self, seed: u64) -> Result<PathIndex> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(self.sampler()?.sample(&mut rng))
    }

    pub fn sampler(&self) -> Result<Sampler> {
        let weights = self.amps.iter().map(|a| a.norm_sqr());
        let dist = WeightedIndex::new(weights).map_err(|e| Error::invalid(format!("cannot sample state: {e}")))?;
        Ok(Sampler { n: self.n, dist })
    }

    /// `index,real,imag,probability` rows; only for `n ≤ 6`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        if self.n > DUMP_MAX_LEN {
            return Err(Error::CapExceeded { n: self.n, cap: DUMP_MAX_LEN });
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "real", "imag", "probability"])?;
        for (u, a) in self.amps.iter().enumerate() {
            w.write_record([u.to_string(), a.re.to_string(), a.im.to_string(), a.norm_sqr().to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Repeated measurement of one state.
#[derive(Debug, Clone)]
pub struct Sampler {
    n: u32,
    dist: WeightedIndex<f64>,
}

impl Sampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> PathIndex {
        let u = self.dist.sample(rng) as u64;
        PathIndex::new(u, self.n).expect("sampled index within 4^n")
    }
}

/// `N = 4ⁿ`, `k` marked, `θ = arcsin √(k/N)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroverGeometry {
    pub n: u32,
    pub big_n: u64,
    pub k: u64,
    pub theta: f64,
}

impl GroverGeometry {
    pub fn new(n: u32, k: u64) -> Result<GroverGeometry> {
        let big_n = codec::path_count(n)? as u64;
        if k > big_n {
            return Err(Error::invalid(format!("k = {k} exceeds N = {big_n}")));
        }
        let theta = if k == big_n { PI / 2.0 } else { (k as f64 / big_n as f64).sqrt().asin() };
        Ok(GroverGeometry { n, big_n, k, theta })
    }

    pub fn is_degenerate(&self) -> bool {
        self.k == 0
    }

    /// `sin²((2r+1)θ)`.
    pub fn success_probability(&self, rounds: u64) -> f64 {
        ((2 * rounds + 1) as f64 * self.theta).sin().powi(2)
    }

    /// `max(0, ⌊π/(4θ) − 1/2⌋)`.
    pub fn optimal_rounds(&self) -> Result<u64> {
        if self.is_degenerate() {
            return Err(Error::Degenerate);
        }
        let x = PI / (4.0 * self.theta) - 0.5;
        // absorb rounding when θ is an exact fraction of π (k = N/4 gives x = 1)
        Ok((x + 1e-9).floor().max(0.0) as u64)
    }
}

/// The 2×2 action of `G = D·O` on `span{|Ψ_⊥⟩, |Ψ_T⟩}` and its eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationSpectrum {
    /// Columns are the images of `|Ψ_⊥⟩` and `|Ψ_T⟩`.
    pub block: [[f64; 2]; 2],
    pub eigenvalues: [Complex64; 2],
}

/// `k` distinct indices spread evenly over `0..N`.
pub fn synthetic_marked(geometry: &GroverGeometry) -> Vec<usize> {
    let (k, big_n) = (geometry.k as u128, geometry.big_n as u128);
    (0..k).map(|i| (i * big_n / k.max(1)) as usize).collect()
}

/// Builds the rotation block by running the engine on the two basis
/// vectors of the invariant plane, then diagonalises it.
pub fn rotation_spectrum(geometry: &GroverGeometry) -> Result<RotationSpectrum> {
    if geometry.k == 0 || geometry.k == geometry.big_n {
        return Err(Error::Degenerate);
    }
    let n = geometry.n;
    let len = geometry.big_n as usize;
    let marked = synthetic_marked(geometry);
    let mut is_marked = vec![false; len];
    for &u in &marked {
        is_marked[u] = true;
    }
    let a_t = 1.0 / (geometry.k as f64).sqrt();
    let a_p = 1.0 / ((geometry.big_n - geometry.k) as f64).sqrt();
    let plane = |want_marked: bool| -> Vec<Complex64> {
        is_marked
            .iter()
            .map(|&m| match (m, want_marked) {
                (true, true) => Complex64::new(a_t, 0.0),
                (false, false) => Complex64::new(a_p, 0.0),
                _ => Complex64::new(0.0, 0.0),
            })
            .collect()
    };
    let perp = plane(false);
    let target = plane(true);
    let overlap = |x: &[Complex64], y: &[Complex64]| -> f64 { x.iter().zip(y).map(|(a, b)| (a.conj() * b).re).sum() };
    let mut block = [[0.0; 2]; 2];
    for (col, start) in [&perp, &target].into_iter().enumerate() {
        let mut s = PathState::from_amplitudes(n, start.clone())?;
        s.grover_iterate(&marked, 1)?;
        block[0][col] = overlap(&perp, s.amplitudes());
        block[1][col] = overlap(&target, s.amplitudes());
    }
    let tr = block[0][0] + block[1][1];
    let det = block[0][0] * block[1][1] - block[0][1] * block[1][0];
    let disc = Complex64::new(tr * tr - 4.0 * det, 0.0).sqrt();
    let eigenvalues = [(tr + disc) / 2.0, (tr - disc) / 2.0];
    Ok(RotationSpectrum { block, eigenvalues })
}

/// One row of a dynamics trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DynamicsRow {
    pub r: u64,
    pub predicted: f64,
    pub simulated: f64,
}

/// Marked probability after `r = 0..=r_max` iterations from `|Ω⟩`, both from
/// the closed form and from the engine, for a synthetic set of `k` paths.
pub fn dynamics(n: u32, k: u64, r_max: u64) -> Result<Vec<DynamicsRow>> {
    let g = GroverGeometry::new(n, k)?;
    if k == 0 {
        return Err(Error::invalid("k must be ≥ 1"));
    }
    let marked = synthetic_marked(&g);
    let mut s = prepare_uniform(n)?;
    let mut rows = Vec::with_capacity(r_max as usize + 1);
    for r in 0..=r_max {
        if r > 0 {
            s.grover_iterate(&marked, 1)?;
        }
        rows.push(DynamicsRow { r, predicted: g.success_probability(r), simulated: s.probability_of(&marked) });
    }
    Ok(rows)
}

pub fn write_dynamics_csv<W: Write>(rows: &[DynamicsRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["r", "predicted", "simulated"])?;
    for row in rows {
        w.write_record([row.r.to_string(), row.predicted.to_string(), row.simulated.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
