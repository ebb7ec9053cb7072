//! Color-class stabilizer tests.
//!
//! A class `A_l` of a proper cover is measured in X while every other qubit
//! is measured in Z. Because no hyperedge meets `A_l` twice, each
//! `g_i, i ∈ A_l` becomes a classical parity of the outcomes:
//! `s_i = b_i ⊕ Σ_{e∋i} Π_{j∈e∖{i}} z_j`.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{validate_cover, Hypergraph, IndependenceCover};
use crate::state::{
    apply_stabilizer, build_state, index_to_bits, measure, raw_state, vertex_mask, BasisAssignment, NoiseModel, PauliError,
    StateVector,
};
use crate::stats::derive_seed;

/// Register size up to which projector-exact probabilities are computed.
pub const ANALYTIC_QUBIT_LIMIT: usize = 12;

/// Upper bound on enumerated error patterns for exact noise averaging.
pub const NOISE_ENUMERATION_CAP: usize = 1 << 14;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Syndrome {
    pub class: usize,
    /// Vertices of the tested class, ascending; `bits[k]` belongs to `vertices[k]`.
    pub vertices: Vec<usize>,
    pub bits: Vec<bool>,
}

impl Syndrome {
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&b| !b)
    }

    /// Vertices whose check fired.
    pub fn flagged(&self) -> Vec<usize> {
        self.vertices
            .iter()
            .zip(&self.bits)
            .filter(|(_, &b)| b)
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn bit(&self, vertex: usize) -> Option<bool> {
        self.vertices.binary_search(&vertex).ok().map(|k| self.bits[k])
    }
}

/// Syndromes accepted as correctable.
///
/// JSON form: `{"mode": "zero"}`, `{"mode": "weight", "t": 1}` or
/// `{"mode": "list", "syndromes": [[0], [2, 4]]}` where each listed syndrome
/// is the set of flagged vertices. The all-zero syndrome is always accepted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "CorrectableRepr", into = "CorrectableRepr")]
pub enum CorrectableSet {
    #[default]
    Zero,
    Weight {
        t: usize,
    },
    List {
        syndromes: Vec<Vec<usize>>,
    },
}

// Wire form; the empty-struct variant makes unknown keys next to
// `"mode": "zero"` an error.
#[derive(Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
enum CorrectableRepr {
    Zero {},
    Weight { t: usize },
    List { syndromes: Vec<Vec<usize>> },
}

impl From<CorrectableRepr> for CorrectableSet {
    fn from(r: CorrectableRepr) -> Self {
        match r {
            CorrectableRepr::Zero {} => CorrectableSet::Zero,
            CorrectableRepr::Weight { t } => CorrectableSet::Weight { t },
            CorrectableRepr::List { syndromes } => CorrectableSet::List { syndromes },
        }
    }
}

impl From<CorrectableSet> for CorrectableRepr {
    fn from(s: CorrectableSet) -> Self {
        match s {
            CorrectableSet::Zero => CorrectableRepr::Zero {},
            CorrectableSet::Weight { t } => CorrectableRepr::Weight { t },
            CorrectableSet::List { syndromes } => CorrectableRepr::List { syndromes },
        }
    }
}

impl CorrectableSet {
    pub fn contains(&self, s: &Syndrome) -> bool {
        self.contains_flagged(&s.flagged())
    }

    /// Membership test by flagged vertex set (ascending).
    pub fn contains_flagged(&self, flagged: &[usize]) -> bool {
        if flagged.is_empty() {
            return true;
        }
        match self {
            CorrectableSet::Zero => false,
            CorrectableSet::Weight { t } => flagged.len() <= *t,
            CorrectableSet::List { syndromes } => syndromes.iter().any(|s| {
                let set: BTreeSet<usize> = s.iter().copied().collect();
                set.len() == flagged.len() && flagged.iter().all(|v| set.contains(v))
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub passed: bool,
    pub syndrome: Syndrome,
    pub basis: BasisAssignment,
    pub bits: Vec<bool>,
}

/// Precomputed parity checks for one independent class.
#[derive(Clone, Debug)]
pub struct ClassChecker {
    class: usize,
    vertices: Vec<usize>,
    /// For each class vertex, the masks `e∖{i}` of edges containing it.
    terms: Vec<Vec<usize>>,
    basis: BasisAssignment,
}

impl ClassChecker {
    /// Fails with [`Error::ImproperClass`] if some edge meets `vertices` twice.
    pub fn new(h: &Hypergraph, class: usize, vertices: &[usize]) -> Result<Self> {
        let n = h.num_vertices();
        let mut vs = vertices.to_vec();
        vs.sort_unstable();
        vs.dedup();
        if let Some(&v) = vs.iter().find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        for e in h.edges() {
            if e.iter().filter(|v| vs.binary_search(v).is_ok()).count() >= 2 {
                return Err(Error::ImproperClass {
                    class,
                    edge: e.to_vec(),
                });
            }
        }
        let terms = vs
            .iter()
            .map(|&i| {
                h.edges_containing(i)
                    .map(|e| vertex_mask(e) & !(1 << i))
                    .collect()
            })
            .collect();
        Ok(ClassChecker {
            class,
            basis: BasisAssignment::x_on(n, &vs),
            vertices: vs,
            terms,
        })
    }

    pub fn from_cover(h: &Hypergraph, cover: &IndependenceCover, l: usize) -> Result<Self> {
        let vs = cover
            .class(l)
            .ok_or_else(|| Error::param(format!("class index {l} out of range for {} classes", cover.num_classes())))?;
        Self::new(h, l, vs)
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn basis(&self) -> &BasisAssignment {
        &self.basis
    }

    pub fn syndrome(&self, outcomes: &[bool]) -> Syndrome {
        let mask = outcomes
            .iter()
            .enumerate()
            .fold(0usize, |m, (q, &b)| if b { m | 1 << q } else { m });
        let bits = self
            .vertices
            .iter()
            .zip(&self.terms)
            .map(|(&i, terms)| {
                let mut s = mask >> i & 1 == 1;
                for &t in terms {
                    if mask & t == t {
                        s = !s;
                    }
                }
                s
            })
            .collect();
        Syndrome {
            class: self.class,
            vertices: self.vertices.clone(),
            bits,
        }
    }

    pub fn outcome(&self, bits: Vec<bool>, correctable: &CorrectableSet) -> TestOutcome {
        let syndrome = self.syndrome(&bits);
        TestOutcome {
            passed: correctable.contains(&syndrome),
            syndrome,
            basis: self.basis.clone(),
            bits,
        }
    }

    pub fn run<R: Rng + ?Sized>(
        &self,
        state: &StateVector,
        correctable: &CorrectableSet,
        rng: &mut R,
    ) -> Result<TestOutcome> {
        let bits = measure(state, &self.basis, rng)?;
        Ok(self.outcome(bits, correctable))
    }
}

/// Syndrome of class `vertices` from outcomes that are X bits on the class
/// and Z bits elsewhere.
pub fn parity_check(h: &Hypergraph, class: usize, vertices: &[usize], outcomes: &[bool]) -> Result<Syndrome> {
    if outcomes.len() != h.num_vertices() {
        return Err(Error::DimensionMismatch {
            left: outcomes.len(),
            right: h.num_vertices(),
        });
    }
    Ok(ClassChecker::new(h, class, vertices)?.syndrome(outcomes))
}

/// Measures class `l` in X and its complement in Z, then checks the
/// syndrome against `correctable`.
pub fn run_color_test<R: Rng + ?Sized>(
    state: &StateVector,
    h: &Hypergraph,
    cover: &IndependenceCover,
    l: usize,
    correctable: &CorrectableSet,
    rng: &mut R,
) -> Result<TestOutcome> {
    validate_cover(h, cover)?;
    ClassChecker::from_cover(h, cover, l)?.run(state, correctable, rng)
}

/// Measures qubit `i` in X and its neighbors in Z; returns the `g_i`
/// eigenvalue `+1` or `−1`.
pub fn run_single_stabilizer_test<R: Rng + ?Sized>(
    state: &StateVector,
    h: &Hypergraph,
    i: usize,
    rng: &mut R,
) -> Result<i8> {
    if i >= h.num_vertices() {
        return Err(Error::VertexOutOfRange {
            vertex: i,
            n: h.num_vertices(),
        });
    }
    // Qubits outside the neighborhood get Z too; their outcomes never enter
    // the parity, so the check's marginal is unchanged.
    let checker = ClassChecker::new(h, i, &[i])?;
    let outcome = checker.run(state, &CorrectableSet::Zero, rng)?;
    Ok(if outcome.syndrome.bits[0] { -1 } else { 1 })
}

/// A density operator given as a weighted family of pure states.
pub trait MixedState {
    fn num_qubits(&self) -> usize;

    fn for_each_member(&self, f: &mut dyn FnMut(f64, &StateVector) -> Result<()>) -> Result<()>;
}

impl MixedState for StateVector {
    fn num_qubits(&self) -> usize {
        StateVector::num_qubits(self)
    }

    fn for_each_member(&self, f: &mut dyn FnMut(f64, &StateVector) -> Result<()>) -> Result<()> {
        f(1.0, self)
    }
}

#[derive(Clone, Debug)]
pub struct Ensemble {
    n: usize,
    members: Vec<(f64, StateVector)>,
}

impl Ensemble {
    pub fn new(members: Vec<(f64, StateVector)>) -> Result<Self> {
        let n = members
            .first()
            .map(|m| m.1.num_qubits())
            .ok_or_else(|| Error::param("empty ensemble"))?;
        if let Some(m) = members.iter().find(|m| m.1.num_qubits() != n) {
            return Err(Error::DimensionMismatch {
                left: n,
                right: m.1.num_qubits(),
            });
        }
        let total: f64 = members.iter().map(|m| m.0).sum();
        if members.iter().any(|m| m.0 < 0.0) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::param(format!("ensemble weights sum to {total}")));
        }
        Ok(Ensemble { n, members })
    }

    /// `I / 2^n` as the uniform mixture of computational basis states.
    pub fn maximally_mixed(n: usize) -> Self {
        let w = ((1usize << n) as f64).recip();
        Ensemble {
            n,
            members: (0..1 << n).map(|x| (w, StateVector::basis(n, x))).collect(),
        }
    }

    pub fn members(&self) -> &[(f64, StateVector)] {
        &self.members
    }
}

impl MixedState for Ensemble {
    fn num_qubits(&self) -> usize {
        self.n
    }

    fn for_each_member(&self, f: &mut dyn FnMut(f64, &StateVector) -> Result<()>) -> Result<()> {
        for (w, s) in &self.members {
            f(*w, s)?;
        }
        Ok(())
    }
}

/// The noise-averaged preparation of `|H⟩`, expanded lazily.
#[derive(Clone, Debug)]
pub struct NoisyState {
    base: StateVector,
    errors: Vec<(f64, PauliError)>,
}

impl NoisyState {
    pub fn new(h: &Hypergraph, noise: &NoiseModel) -> Result<Self> {
        noise.validate(h.num_vertices())?;
        Ok(NoisyState {
            base: build_state(h)?,
            errors: noise.enumerate_errors(h.num_vertices(), NOISE_ENUMERATION_CAP)?,
        })
    }

    pub fn num_terms(&self) -> usize {
        self.errors.len()
    }
}

impl MixedState for NoisyState {
    fn num_qubits(&self) -> usize {
        self.base.num_qubits()
    }

    fn for_each_member(&self, f: &mut dyn FnMut(f64, &StateVector) -> Result<()>) -> Result<()> {
        for &(w, err) in &self.errors {
            let mut s = self.base.clone();
            s.apply_error(err);
            f(w, &s)?;
        }
        Ok(())
    }
}

/// `Tr(ρ Π_s)` for every syndrome `s` of the class, indexed by the syndrome
/// bitmask over the class vertices in ascending order.
///
/// Computed by splitting the state with `(I ± g_i)/2` one stabilizer at a
/// time; zero-norm branches are pruned.
pub fn syndrome_distribution(mixed: &dyn MixedState, h: &Hypergraph, vertices: &[usize]) -> Result<Vec<f64>> {
    let n = mixed.num_qubits();
    if n != h.num_vertices() {
        return Err(Error::DimensionMismatch {
            left: n,
            right: h.num_vertices(),
        });
    }
    if n > ANALYTIC_QUBIT_LIMIT {
        return Err(Error::TooLarge {
            what: "register for analytic probabilities",
            size: n,
            limit: ANALYTIC_QUBIT_LIMIT,
        });
    }
    let mut vs = vertices.to_vec();
    vs.sort_unstable();
    vs.dedup();
    let mut dist = vec![0.0; 1 << vs.len()];
    mixed.for_each_member(&mut |w, psi| split_projectors(psi.clone(), h, &vs, 0, 0, w, &mut dist))?;
    Ok(dist)
}

fn split_projectors(
    v: StateVector,
    h: &Hypergraph,
    vertices: &[usize],
    depth: usize,
    prefix: usize,
    weight: f64,
    dist: &mut [f64],
) -> Result<()> {
    let norm = v.norm_sqr();
    if norm < 1e-30 {
        return Ok(());
    }
    let Some(&i) = vertices.get(depth) else {
        dist[prefix] += weight * norm;
        return Ok(());
    };
    let mut gv = v.clone();
    apply_stabilizer(&mut gv, h, i)?;
    let amps_v = v.amplitudes();
    let amps_g = gv.amplitudes();
    let plus: Vec<_> = amps_v.iter().zip(amps_g).map(|(a, b)| (a + b) * 0.5).collect();
    let minus: Vec<_> = amps_v.iter().zip(amps_g).map(|(a, b)| (a - b) * 0.5).collect();
    split_projectors(raw_state(plus), h, vertices, depth + 1, prefix, weight, dist)?;
    split_projectors(raw_state(minus), h, vertices, depth + 1, prefix | 1 << depth, weight, dist)
}

/// Exact probability that the class-`l` test passes on `mixed`.
pub fn analytic_pass_probability(
    mixed: &dyn MixedState,
    h: &Hypergraph,
    cover: &IndependenceCover,
    l: usize,
    correctable: &CorrectableSet,
) -> Result<f64> {
    validate_cover(h, cover)?;
    let checker = ClassChecker::from_cover(h, cover, l)?;
    let dist = syndrome_distribution(mixed, h, checker.vertices())?;
    let vs = checker.vertices();
    Ok(dist
        .iter()
        .enumerate()
        .filter(|(s, _)| {
            let flagged: Vec<usize> = index_to_bits(*s, vs.len())
                .into_iter()
                .zip(vs)
                .filter(|(b, _)| *b)
                .map(|(_, &v)| v)
                .collect();
            correctable.contains_flagged(&flagged)
        })
        .map(|(_, p)| p)
        .sum::<f64>()
        .clamp(0.0, 1.0))
}

/// Per-group class pairs used by the blocked test schedule: group `l`
/// alternates between class `l` and class `l+1 (mod m)`.
pub fn paired_schedule(m: usize) -> Vec<(usize, usize)> {
    match m {
        0 => Vec::new(),
        1 => vec![(0, 0)],
        _ => (0..m).map(|l| (l, (l + 1) % m)).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AcceptabilityMethod {
    /// Exact when the register and the noise support are small enough,
    /// otherwise Monte Carlo.
    Auto { samples: usize, seed: u64 },
    Exact,
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassPassProbability {
    pub class: usize,
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcceptabilityReport {
    pub rounds: usize,
    pub per_class: Vec<ClassPassProbability>,
    /// Product of `p^k` over both tests of every group in the schedule.
    pub value: f64,
    pub exact: bool,
}

/// Probability that every block of the blocked schedule passes under
/// i.i.d. noise, with `k` blocks per configuration.
pub fn acceptability_probability(
    noise: &NoiseModel,
    h: &Hypergraph,
    cover: &IndependenceCover,
    correctable: &CorrectableSet,
    k: usize,
    method: AcceptabilityMethod,
) -> Result<AcceptabilityReport> {
    validate_cover(h, cover)?;
    noise.validate(h.num_vertices())?;
    let m = cover.num_classes();

    let exact_state = match method {
        AcceptabilityMethod::Exact => Some(NoisyState::new(h, noise)?),
        AcceptabilityMethod::Auto { .. } if h.num_vertices() <= ANALYTIC_QUBIT_LIMIT => NoisyState::new(h, noise).ok(),
        _ => None,
    };

    let mut per_class = Vec::with_capacity(m);
    for l in 0..m {
        let p = match (&exact_state, method) {
            (Some(rho), _) => analytic_pass_probability(rho, h, cover, l, correctable)?,
            (None, AcceptabilityMethod::Auto { samples, seed } | AcceptabilityMethod::MonteCarlo { samples, seed }) => {
                monte_carlo_pass_probability(noise, h, cover, l, correctable, samples, derive_seed(seed, l as u64))?
            }
            (None, AcceptabilityMethod::Exact) => unreachable!("exact state constructed above"),
        };
        per_class.push(ClassPassProbability { class: l, probability: p });
    }

    let value = paired_schedule(m)
        .iter()
        .map(|&(a, b)| per_class[a].probability.powi(k as i32) * per_class[b].probability.powi(k as i32))
        .product();
    Ok(AcceptabilityReport {
        rounds: k,
        per_class,
        value,
        exact: exact_state.is_some(),
    })
}

fn monte_carlo_pass_probability(
    noise: &NoiseModel,
    h: &Hypergraph,
    cover: &IndependenceCover,
    l: usize,
    correctable: &CorrectableSet,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if samples == 0 {
        return Err(Error::param("Monte Carlo estimate needs at least one sample"));
    }
    let checker = ClassChecker::from_cover(h, cover, l)?;
    let base = build_state(h)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passes = 0usize;
    for _ in 0..samples {
        let mut s = base.clone();
        s.apply_error(noise.sample_error(h.num_vertices(), &mut rng));
        if checker.run(&s, correctable, &mut rng)?.passed {
            passes += 1;
        }
    }
    Ok(passes as f64 / samples as f64)
}
