//! Dense pure-state simulation of hypergraph states.
//!
//! Bit `i` of an amplitude index is the computational value of qubit `i`.
//! Mixed states are handled as ensembles of pure states (see
//! [`NoiseModel`] and [`crate::stabilizer::MixedState`]).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Largest register the dense simulator will allocate by default.
pub const DEFAULT_QUBIT_LIMIT: usize = 24;

const NORM_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`
    pub fn zero(n: usize) -> Self {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    /// `|+⟩^⊗n`
    pub fn plus(n: usize) -> Self {
        let a = (1usize << n) as f64;
        StateVector {
            n,
            amps: vec![Complex64::new(a.sqrt().recip(), 0.0); 1 << n],
        }
    }

    /// Wraps raw amplitudes; the vector must be normalized.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(Error::param(format!("{len} amplitudes is not a power of two")));
        }
        let state = StateVector {
            n: len.trailing_zeros() as usize,
            amps,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::param(format!("state has squared norm {norm}")));
        }
        Ok(state)
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(mut amps: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::param("cannot normalize a zero vector"));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Self::from_amplitudes(amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            Err(Error::VertexOutOfRange { vertex: q, n: self.n })
        } else {
            Ok(())
        }
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Generalized CZ on `qubits`: negates every amplitude whose bits are
    /// all set on `qubits`. A single qubit gives a plain Z.
    pub fn apply_cz(&mut self, qubits: &[usize]) -> Result<()> {
        let mut mask = 0usize;
        for &q in qubits {
            self.check_qubit(q)?;
            mask |= 1 << q;
        }
        self.apply_cz_mask(mask);
        Ok(())
    }

    pub(crate) fn apply_cz_mask(&mut self, mask: usize) {
        // Walk the supersets of `mask` by enumerating subsets of its complement.
        let free = (self.amps.len() - 1) & !mask;
        let mut sub = free;
        loop {
            let idx = sub | mask;
            self.amps[idx] = -self.amps[idx];
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
    }

    pub fn apply_x(&mut self, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        self.apply_x_mask(1 << q);
        Ok(())
    }

    pub fn apply_z(&mut self, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        self.apply_cz_mask(1 << q);
        Ok(())
    }

    /// Applies `X^x` to all qubits in `mask` at once.
    pub(crate) fn apply_x_mask(&mut self, mask: usize) {
        if mask == 0 {
            return;
        }
        for idx in 0..self.amps.len() {
            let partner = idx ^ mask;
            if idx < partner {
                self.amps.swap(idx, partner);
            }
        }
    }

    /// Applies `Z` on every qubit of `mask`.
    pub(crate) fn apply_z_mask(&mut self, mask: usize) {
        if mask == 0 {
            return;
        }
        for (idx, a) in self.amps.iter_mut().enumerate() {
            if (idx & mask).count_ones() % 2 == 1 {
                *a = -*a;
            }
        }
    }

    pub fn apply_hadamard(&mut self, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        self.hadamard_unchecked(q);
        Ok(())
    }

    fn hadamard_unchecked(&mut self, q: usize) {
        let bit = 1usize << q;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for idx in 0..self.amps.len() {
            if idx & bit == 0 {
                let a = self.amps[idx];
                let b = self.amps[idx | bit];
                self.amps[idx] = (a + b) * s;
                self.amps[idx | bit] = (a - b) * s;
            }
        }
    }

    pub fn apply_pauli(&mut self, pauli: &PauliString) -> Result<()> {
        if pauli.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: pauli.len(),
                right: self.n,
            });
        }
        // Rightmost factor acts first: X^x Z^z.
        self.apply_z_mask(pauli.z_mask());
        self.apply_x_mask(pauli.x_mask());
        Ok(())
    }

    pub fn apply_error(&mut self, error: PauliError) {
        self.apply_z_mask(error.z);
        self.apply_x_mask(error.x);
    }

    /// Outcome probabilities after rotating X-basis qubits with Hadamards.
    pub fn basis_probabilities(&self, basis: &BasisAssignment) -> Result<Vec<f64>> {
        if basis.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: basis.len(),
                right: self.n,
            });
        }
        let mut rotated = self.clone();
        for q in basis.x_qubits() {
            rotated.hadamard_unchecked(q);
        }
        Ok(rotated.amps.iter().map(Complex64::norm_sqr).collect())
    }

    /// Debug dump: one `(bitstring, re, im)` entry per nonzero amplitude.
    /// Bitstrings are written qubit 0 first.
    pub fn to_json_dump(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(idx, a)| {
                let bits: String = (0..self.n)
                    .map(|q| if idx >> q & 1 == 1 { '1' } else { '0' })
                    .collect();
                serde_json::json!([bits, a.re, a.im])
            })
            .collect();
        serde_json::Value::Array(entries)
    }
}

/// Measurement basis per qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    X,
    Z,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisAssignment(pub Vec<Basis>);

impl BasisAssignment {
    pub fn all(n: usize, basis: Basis) -> Self {
        BasisAssignment(vec![basis; n])
    }

    /// X on `x_qubits`, Z everywhere else.
    pub fn x_on(n: usize, x_qubits: &[usize]) -> Self {
        let mut b = vec![Basis::Z; n];
        for &q in x_qubits {
            b[q] = Basis::X;
        }
        BasisAssignment(b)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn x_qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, b)| **b == Basis::X)
            .map(|(q, _)| q)
    }
}

impl fmt::Display for BasisAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            f.write_str(match b {
                Basis::X => "X",
                Basis::Z => "Z",
            })?;
        }
        Ok(())
    }
}

/// Samples one outcome per qubit. X outcomes are reported as `0` for `|+⟩`
/// and `1` for `|−⟩`. The state itself is left untouched.
pub fn measure<R: Rng + ?Sized>(state: &StateVector, basis: &BasisAssignment, rng: &mut R) -> Result<Vec<bool>> {
    let probs = state.basis_probabilities(basis)?;
    let idx = sample_index(&probs, rng.gen::<f64>());
    Ok(index_to_bits(idx, state.n))
}

fn sample_index(probs: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (idx, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            last_nonzero = idx;
        }
        acc += p;
        if u < acc {
            return idx;
        }
    }
    last_nonzero
}

/// Wraps amplitudes without the normalization check (projected branches).
pub(crate) fn raw_state(amps: Vec<Complex64>) -> StateVector {
    debug_assert!(amps.len().is_power_of_two());
    StateVector {
        n: amps.len().trailing_zeros() as usize,
        amps,
    }
}

pub(crate) fn index_to_bits(idx: usize, n: usize) -> Vec<bool> {
    (0..n).map(|q| idx >> q & 1 == 1).collect()
}

/// Precomputed outcome distribution for repeated sampling of one state in
/// one basis. Produces exactly the same outcomes as [`measure`] for the
/// same random stream.
#[derive(Clone, Debug)]
pub struct MeasurementSampler {
    n: usize,
    cumulative: Vec<f64>,
    last_nonzero: usize,
}

impl MeasurementSampler {
    pub fn new(state: &StateVector, basis: &BasisAssignment) -> Result<Self> {
        let probs = state.basis_probabilities(basis)?;
        let mut acc = 0.0;
        let mut last_nonzero = 0;
        let cumulative = probs
            .iter()
            .enumerate()
            .map(|(idx, &p)| {
                if p > 0.0 {
                    last_nonzero = idx;
                }
                acc += p;
                acc
            })
            .collect();
        Ok(MeasurementSampler {
            n: state.n,
            cumulative,
            last_nonzero,
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<bool> {
        let u = rng.gen::<f64>();
        let idx = self.cumulative.partition_point(|&c| c <= u);
        let idx = if idx >= self.cumulative.len() { self.last_nonzero } else { idx };
        index_to_bits(idx, self.n)
    }
}

/// `|H⟩` with the default qubit limit.
pub fn build_state(h: &Hypergraph) -> Result<StateVector> {
    build_state_with_limit(h, DEFAULT_QUBIT_LIMIT)
}

/// Applies one generalized CZ per hyperedge to `|+⟩^⊗n`.
pub fn build_state_with_limit(h: &Hypergraph, limit: usize) -> Result<StateVector> {
    let n = h.num_vertices();
    if n > limit {
        return Err(Error::TooLarge {
            what: "register",
            size: n,
            limit,
        });
    }
    let mut state = StateVector::plus(n);
    for e in h.edges() {
        state.apply_cz_mask(vertex_mask(e));
    }
    Ok(state)
}

pub(crate) fn vertex_mask(vs: &[usize]) -> usize {
    vs.iter().fold(0usize, |m, &v| m | 1 << v)
}

/// Compact form `2^{-n/2} (−1)^{f(x)}` with `f(x) = Σ_e Π_{i∈e} x_i mod 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhasePolynomial {
    n: usize,
    monomials: Vec<u64>,
}

impl PhasePolynomial {
    pub fn new(h: &Hypergraph) -> Result<Self> {
        let n = h.num_vertices();
        if n > 64 {
            return Err(Error::TooLarge {
                what: "phase polynomial",
                size: n,
                limit: 64,
            });
        }
        let monomials = h
            .edges()
            .map(|e| e.iter().fold(0u64, |m, &v| m | 1 << v))
            .collect();
        Ok(PhasePolynomial { n, monomials })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// `f(x)` for the bitstring `x`.
    pub fn evaluate(&self, x: u64) -> bool {
        self.monomials.iter().filter(|&&m| x & m == m).count() % 2 == 1
    }

    pub fn amplitude(&self, x: u64) -> f64 {
        let scale = (2f64).powf(-(self.n as f64) / 2.0);
        if self.evaluate(x) {
            -scale
        } else {
            scale
        }
    }

    pub fn to_state(&self) -> Result<StateVector> {
        if self.n > DEFAULT_QUBIT_LIMIT {
            return Err(Error::TooLarge {
                what: "register",
                size: self.n,
                limit: DEFAULT_QUBIT_LIMIT,
            });
        }
        let amps = (0..1u64 << self.n)
            .map(|x| Complex64::new(self.amplitude(x), 0.0))
            .collect();
        Ok(StateVector { n: self.n, amps })
    }
}

/// Applies `g_i = X_i · Π_{e∋i} CZ_{e∖{i}}` in place.
pub fn apply_stabilizer(state: &mut StateVector, h: &Hypergraph, i: usize) -> Result<()> {
    if h.num_vertices() != state.n {
        return Err(Error::DimensionMismatch {
            left: h.num_vertices(),
            right: state.n,
        });
    }
    state.check_qubit(i)?;
    for e in h.edges_containing(i) {
        state.apply_cz_mask(vertex_mask(e) & !(1 << i));
    }
    state.apply_x_mask(1 << i);
    Ok(())
}

/// Returns `g_i|ψ⟩` as a new state.
pub fn stabilizer_g(state: &StateVector, h: &Hypergraph, i: usize) -> Result<StateVector> {
    let mut out = state.clone();
    apply_stabilizer(&mut out, h, i)?;
    Ok(out)
}

/// `⟨ψ|g_i|ψ⟩`
pub fn expectation_g(state: &StateVector, h: &Hypergraph, i: usize) -> Result<f64> {
    let g = stabilizer_g(state, h, i)?;
    Ok(state.inner(&g)?.re)
}

/// `|⟨a|b⟩|²`
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr().min(1.0))
}

/// Tensor product of single-qubit Paulis from `{I, X, Z}`; character `q`
/// of the text form acts on qubit `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliString(Vec<Pauli>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Z,
}

impl PauliString {
    pub fn new(ops: Vec<Pauli>) -> Self {
        PauliString(ops)
    }

    /// Single `op` on qubit `q` of an `n`-qubit register.
    pub fn single(n: usize, q: usize, op: Pauli) -> Self {
        let mut ops = vec![Pauli::I; n];
        ops[q] = op;
        PauliString(ops)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn mask_of(&self, op: Pauli) -> usize {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, p)| **p == op)
            .fold(0, |m, (q, _)| m | 1 << q)
    }

    pub fn x_mask(&self) -> usize {
        self.mask_of(Pauli::X)
    }

    pub fn z_mask(&self) -> usize {
        self.mask_of(Pauli::Z)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'I' | 'i' => Ok(Pauli::I),
                'X' | 'x' => Ok(Pauli::X),
                'Z' | 'z' => Ok(Pauli::Z),
                other => Err(Error::param(format!("unknown Pauli {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(PauliString)
    }
}

/// `X^x Z^z` with qubit masks; phases are dropped since errors only enter
/// through density operators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliError {
    pub x: usize,
    pub z: usize,
}

impl PauliError {
    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }
}

/// Independent per-qubit Pauli channels plus an optional correlated
/// Z-error distribution.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseModel {
    #[serde(default)]
    pub z_flip: f64,
    #[serde(default)]
    pub x_flip: f64,
    #[serde(default)]
    pub depolarizing: f64,
    /// Explicit distribution over Z-error patterns, each given by the set
    /// of flipped qubits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_distribution: Option<Vec<ZPattern>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZPattern {
    pub qubits: Vec<usize>,
    pub probability: f64,
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        Self::default()
    }

    pub fn z_flip(p: f64) -> Self {
        NoiseModel {
            z_flip: p,
            ..Default::default()
        }
    }

    pub fn point_mass(qubits: Vec<usize>) -> Self {
        NoiseModel {
            z_distribution: Some(vec![ZPattern {
                qubits,
                probability: 1.0,
            }]),
            ..Default::default()
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        for (name, p) in [
            ("z_flip", self.z_flip),
            ("x_flip", self.x_flip),
            ("depolarizing", self.depolarizing),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::param(format!("{name} probability {p} outside [0, 1]")));
            }
        }
        if let Some(dist) = &self.z_distribution {
            let mut sum = 0.0;
            for pat in dist {
                if !(0.0..=1.0).contains(&pat.probability) {
                    return Err(Error::param(format!("pattern probability {} outside [0, 1]", pat.probability)));
                }
                if let Some(&q) = pat.qubits.iter().find(|&&q| q >= n) {
                    return Err(Error::VertexOutOfRange { vertex: q, n });
                }
                sum += pat.probability;
            }
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::param(format!("Z-error distribution sums to {sum}")));
            }
        }
        Ok(())
    }

    /// Probabilities of `I, X, Z, Y` on one qubit after composing the
    /// Z-flip, X-flip and depolarizing channels, indexed by `x | z << 1`.
    pub fn single_qubit_distribution(&self) -> [f64; 4] {
        let mut d = [1.0, 0.0, 0.0, 0.0];
        let compose = |d: [f64; 4], kick: [f64; 4]| {
            let mut out = [0.0; 4];
            for (a, &pa) in d.iter().enumerate() {
                for (b, &pb) in kick.iter().enumerate() {
                    out[a ^ b] += pa * pb;
                }
            }
            out
        };
        d = compose(d, [1.0 - self.z_flip, 0.0, self.z_flip, 0.0]);
        d = compose(d, [1.0 - self.x_flip, self.x_flip, 0.0, 0.0]);
        let p = self.depolarizing / 3.0;
        d = compose(d, [1.0 - self.depolarizing, p, p, p]);
        d
    }

    pub fn sample_error<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> PauliError {
        let mut err = PauliError::default();
        for q in 0..n {
            if self.z_flip > 0.0 && rng.gen::<f64>() < self.z_flip {
                err.z ^= 1 << q;
            }
            if self.x_flip > 0.0 && rng.gen::<f64>() < self.x_flip {
                err.x ^= 1 << q;
            }
            if self.depolarizing > 0.0 && rng.gen::<f64>() < self.depolarizing {
                match rng.gen_range(0..3) {
                    0 => err.x ^= 1 << q,
                    1 => err.z ^= 1 << q,
                    _ => {
                        err.x ^= 1 << q;
                        err.z ^= 1 << q;
                    }
                }
            }
        }
        if let Some(dist) = &self.z_distribution {
            let u = rng.gen::<f64>();
            let mut acc = 0.0;
            let mut chosen = dist.last();
            for pat in dist {
                acc += pat.probability;
                if u < acc {
                    chosen = Some(pat);
                    break;
                }
            }
            if let Some(pat) = chosen {
                err.z ^= vertex_mask(&pat.qubits);
            }
        }
        err
    }

    /// Every error pattern with nonzero probability, merged by pattern.
    /// Fails once more than `cap` patterns would be produced.
    pub fn enumerate_errors(&self, n: usize, cap: usize) -> Result<Vec<(f64, PauliError)>> {
        let single = self.single_qubit_distribution();
        let mut terms: Vec<(f64, PauliError)> = vec![(1.0, PauliError::default())];
        for q in 0..n {
            let mut next = Vec::with_capacity(terms.len() * 4);
            for &(p, e) in &terms {
                for (code, &pc) in single.iter().enumerate() {
                    if pc == 0.0 {
                        continue;
                    }
                    let mut e2 = e;
                    if code & 1 == 1 {
                        e2.x |= 1 << q;
                    }
                    if code & 2 == 2 {
                        e2.z |= 1 << q;
                    }
                    next.push((p * pc, e2));
                }
            }
            if next.len() > cap {
                return Err(Error::TooLarge {
                    what: "noise enumeration",
                    size: next.len(),
                    limit: cap,
                });
            }
            terms = next;
        }
        if let Some(dist) = &self.z_distribution {
            let mut merged: std::collections::BTreeMap<(usize, usize), f64> = Default::default();
            for &(p, e) in &terms {
                for pat in dist {
                    if pat.probability == 0.0 {
                        continue;
                    }
                    let z = e.z ^ vertex_mask(&pat.qubits);
                    *merged.entry((e.x, z)).or_default() += p * pat.probability;
                }
            }
            if merged.len() > cap {
                return Err(Error::TooLarge {
                    what: "noise enumeration",
                    size: merged.len(),
                    limit: cap,
                });
            }
            terms = merged.into_iter().map(|((x, z), p)| (p, PauliError { x, z })).collect();
        }
        Ok(terms)
    }
}

/// One ensemble member of the noisy preparation of `|H⟩`.
pub fn sample_noisy_state<R: Rng + ?Sized>(h: &Hypergraph, noise: &NoiseModel, rng: &mut R) -> Result<StateVector> {
    noise.validate(h.num_vertices())?;
    let mut state = build_state(h)?;
    state.apply_error(noise.sample_error(h.num_vertices(), rng));
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const EPS: f64 = 1e-12;

    fn close(a: Complex64, re: f64) -> bool {
        (a.re - re).abs() < EPS && a.im.abs() < EPS
    }

    #[test]
    fn build_state_examples() {
        let s = build_state(&Hypergraph::new(2)).unwrap();
        assert!(s.amplitudes().iter().all(|&a| close(a, 0.5)));

        let s = build_state(&Hypergraph::parse("2\n0 1").unwrap()).unwrap();
        let expected = [0.5, 0.5, 0.5, -0.5];
        for (a, e) in s.amplitudes().iter().zip(expected) {
            assert!(close(*a, e));
        }

        let s = build_state(&Hypergraph::parse("3\n0 1 2").unwrap()).unwrap();
        let r = 8f64.sqrt().recip();
        for x in 0..8 {
            assert!(close(s.amplitude(x), if x == 7 { -r } else { r }));
        }
        assert!(build_state_with_limit(&Hypergraph::new(5), 4).is_err());
    }

    #[test]
    fn cz_examples() {
        let mut s = StateVector::basis(3, 0b111);
        s.apply_cz(&[0, 1, 2]).unwrap();
        assert!(close(s.amplitude(7), -1.0));

        let mut s = StateVector::basis(1, 1);
        s.apply_cz(&[0]).unwrap();
        assert!(close(s.amplitude(1), -1.0));
        assert!(s.apply_cz(&[3]).is_err());
    }

    #[test]
    fn pauli_examples() {
        let mut s = StateVector::plus(1);
        s.apply_pauli(&"X".parse().unwrap()).unwrap();
        assert!((fidelity(&s, &StateVector::plus(1)).unwrap() - 1.0).abs() < EPS);

        let h = Hypergraph::parse("3\n0 1 2").unwrap();
        let psi = build_state(&h).unwrap();
        let mut z0 = psi.clone();
        z0.apply_pauli(&"ZII".parse().unwrap()).unwrap();
        assert!(psi.inner(&z0).unwrap().norm() < EPS);
        assert!("XYZ".parse::<PauliString>().is_err());
    }

    #[test]
    fn stabilizer_examples() {
        let h = Hypergraph::parse("3\n0 1 2").unwrap();
        let psi = build_state(&h).unwrap();
        for i in 0..3 {
            assert!((expectation_g(&psi, &h, i).unwrap() - 1.0).abs() < 1e-12);
        }
        let mut zi = psi.clone();
        zi.apply_z(1).unwrap();
        assert!((expectation_g(&zi, &h, 1).unwrap() + 1.0).abs() < 1e-12);

        let free = Hypergraph::new(2);
        let s = StateVector::zero(2);
        let g = stabilizer_g(&s, &free, 1).unwrap();
        assert!(close(g.amplitude(0b10), 1.0));
    }

    #[test]
    fn measurement_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let z = BasisAssignment::all(3, Basis::Z);
        let x = BasisAssignment::all(3, Basis::X);
        for _ in 0..50 {
            assert_eq!(measure(&StateVector::zero(3), &z, &mut rng).unwrap(), vec![false; 3]);
            assert_eq!(measure(&StateVector::plus(3), &x, &mut rng).unwrap(), vec![false; 3]);
        }
    }

    #[test]
    fn sampler_matches_measure() {
        let h = Hypergraph::parse("4\n0 1 2\n2 3").unwrap();
        let psi = build_state(&h).unwrap();
        let basis = BasisAssignment::x_on(4, &[0, 3]);
        let sampler = MeasurementSampler::new(&psi, &basis).unwrap();
        let mut a = ChaCha8Rng::seed_from_u64(9);
        let mut b = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..500 {
            assert_eq!(sampler.sample(&mut a), measure(&psi, &basis, &mut b).unwrap());
        }
    }

    #[test]
    fn noise_examples() {
        let h = Hypergraph::parse("3\n0 1 2").unwrap();
        let psi = build_state(&h).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = sample_noisy_state(&h, &NoiseModel::noiseless(), &mut rng).unwrap();
        assert_eq!(s, psi);

        let s = sample_noisy_state(&h, &NoiseModel::point_mass(vec![0, 2]), &mut rng).unwrap();
        let mut expected = psi.clone();
        expected.apply_z(0).unwrap();
        expected.apply_z(2).unwrap();
        assert_eq!(s, expected);

        assert!(NoiseModel::z_flip(1.5).validate(3).is_err());
    }

    #[test]
    fn single_qubit_channel_composition() {
        let d = NoiseModel {
            z_flip: 0.1,
            x_flip: 0.2,
            depolarizing: 0.0,
            z_distribution: None,
        }
        .single_qubit_distribution();
        let expected = [0.9 * 0.8, 0.9 * 0.2, 0.1 * 0.8, 0.1 * 0.2];
        for (a, b) in d.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        let terms = NoiseModel::z_flip(0.25).enumerate_errors(3, 1 << 10).unwrap();
        assert_eq!(terms.len(), 8);
        assert!((terms.iter().map(|t| t.0).sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(NoiseModel::z_flip(0.25).enumerate_errors(12, 100).is_err());
    }

    #[test]
    fn fidelity_examples() {
        let s = StateVector::plus(2);
        assert!((fidelity(&s, &s).unwrap() - 1.0).abs() < EPS);
        assert!((fidelity(&StateVector::zero(1), &StateVector::plus(1)).unwrap() - 0.5).abs() < EPS);
        assert!(fidelity(&StateVector::zero(1), &StateVector::zero(2)).is_err());
    }

    #[test]
    fn json_dump_lists_bitstrings() {
        let dump = StateVector::basis(3, 0b001).to_json_dump();
        assert_eq!(dump, serde_json::json!([["100", 1.0, 0.0]]));
    }
}
