use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Bench, ProtocolParams, ProverModel, Register, RegisterKind};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, IndependenceCover};
use crate::stabilizer::{CorrectableSet, TestOutcome};
use crate::stats::{derive_seed, trial_rng};

/// Class pair for each of `upsilon` groups: the unordered pairs `a < b` in
/// lexicographic order, reused cyclically. With one class every group
/// tests class 0.
pub fn group_schedule(num_classes: usize, upsilon: usize) -> Vec<(usize, usize)> {
    let pairs: Vec<(usize, usize)> = if num_classes <= 1 {
        vec![(0, 0)]
    } else {
        (0..num_classes)
            .flat_map(|a| (a + 1..num_classes).map(move |b| (a, b)))
            .collect()
    };
    (0..upsilon).map(|j| pairs[j % pairs.len()]).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegisterTest {
    pub register: usize,
    pub class: usize,
    pub outcome: TestOutcome,
}

/// `K_ij` for one stabilizer in one group: passes out of the registers of
/// the group whose test checked vertex `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counter {
    pub vertex: usize,
    pub passes: u64,
    pub trials: u64,
}

impl Counter {
    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            1.0
        } else {
            self.passes as f64 / self.trials as f64
        }
    }

    /// Counters that saw no trials impose nothing.
    pub fn meets(&self, threshold: f64) -> bool {
        self.trials == 0 || self.rate() >= threshold
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub group: usize,
    pub classes: (usize, usize),
    pub tests: Vec<RegisterTest>,
    pub counters: Vec<Counter>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifierTranscript {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub discarded: Vec<usize>,
    pub target_register: usize,
    pub target_kind: RegisterKind,
    pub groups: Vec<GroupRecord>,
    pub threshold: f64,
    pub accepted: bool,
    /// `⟨H|ρ_tgt|H⟩`
    pub target_fidelity: f64,
}

fn count(tests: &[RegisterTest]) -> Vec<Counter> {
    let vertices: BTreeSet<usize> = tests
        .iter()
        .flat_map(|t| t.outcome.syndrome.vertices.iter().copied())
        .collect();
    vertices
        .into_iter()
        .map(|v| {
            let mut c = Counter {
                vertex: v,
                passes: 0,
                trials: 0,
            };
            for t in tests {
                if let Some(bit) = t.outcome.syndrome.bit(v) {
                    c.trials += 1;
                    // A flagged stabilizer still passes when the syndrome is
                    // correctable as a whole.
                    if !bit || t.outcome.passed {
                        c.passes += 1;
                    }
                }
            }
            c
        })
        .collect()
}

impl VerifierTranscript {
    /// Counters and decision recomputed from the stored outcomes.
    pub fn recount(&self) -> (Vec<Vec<Counter>>, bool) {
        let counters: Vec<Vec<Counter>> = self.groups.iter().map(|g| count(&g.tests)).collect();
        let accepted = counters.iter().flatten().all(|c| c.meets(self.threshold));
        (counters, accepted)
    }

    pub fn is_consistent(&self) -> bool {
        let (counters, accepted) = self.recount();
        accepted == self.accepted && counters.iter().zip(&self.groups).all(|(c, g)| *c == g.counters)
    }

    /// `(group, counter)` pairs in transcript order.
    pub fn counters(&self) -> impl Iterator<Item = (usize, &Counter)> + '_ {
        self.groups.iter().flat_map(|g| g.counters.iter().map(move |c| (g.group, c)))
    }
}

/// Reusable setup for repeated runs of the general verification protocol.
#[derive(Clone, Debug)]
pub struct Verification {
    bench: Bench,
    params: ProtocolParams,
    schedule: Vec<(usize, usize)>,
    correctable: CorrectableSet,
}

impl Verification {
    pub fn new(
        h: &Hypergraph,
        cover: &IndependenceCover,
        params: &ProtocolParams,
        prover: &ProverModel,
        correctable: &CorrectableSet,
    ) -> Result<Self> {
        params.check_desk_executable()?;
        if params.qubits_per_register != h.num_vertices() {
            return Err(Error::param(format!(
                "qubits_per_register is {} but the hypergraph has {} vertices",
                params.qubits_per_register,
                h.num_vertices()
            )));
        }
        let bench = Bench::new(h, cover, prover)?;
        Ok(Verification {
            schedule: group_schedule(bench.num_classes(), params.upsilon),
            bench,
            params: params.clone(),
            correctable: correctable.clone(),
        })
    }

    pub fn params(&self) -> &ProtocolParams {
        &self.params
    }

    pub fn schedule(&self) -> &[(usize, usize)] {
        &self.schedule
    }

    pub(crate) fn bench(&self) -> &Bench {
        &self.bench
    }

    pub fn run<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<VerifierTranscript> {
        self.run_with_target(rng).map(|(t, _)| t)
    }

    /// Run `index` under `master`, with the derived seed recorded.
    pub fn run_trial(&self, master: u64, index: u64) -> Result<VerifierTranscript> {
        let mut t = self.run(&mut trial_rng(master, index))?;
        t.seed = Some(derive_seed(master, index));
        Ok(t)
    }

    pub(crate) fn run_with_target<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(VerifierTranscript, Register)> {
        let p = &self.params;
        let total = p.total_registers() as usize;
        let registers = self.bench.prover().emit(total, rng);
        let mut order: Vec<usize> = (0..total).collect();
        order.shuffle(rng);

        let d = p.discard as usize;
        let target_register = order[d];
        let mut next = d + 1;
        let mut groups = Vec::with_capacity(p.upsilon);
        for (j, &(a, b)) in self.schedule.iter().enumerate() {
            let k_j = p.group_size(j) as usize;
            let mut tests = Vec::with_capacity(k_j);
            for (pos, &register) in order[next..next + k_j].iter().enumerate() {
                let class = if pos % 2 == 0 { a } else { b };
                let outcome = self.bench.test(&registers[register], class, &self.correctable, rng)?;
                tests.push(RegisterTest {
                    register,
                    class,
                    outcome,
                });
            }
            next += k_j;
            groups.push(GroupRecord {
                group: j,
                classes: (a, b),
                counters: count(&tests),
                tests,
            });
        }
        let threshold = p.threshold();
        let accepted = groups.iter().flat_map(|g| &g.counters).all(|c| c.meets(threshold));
        let target = registers[target_register].clone();
        let transcript = VerifierTranscript {
            seed: None,
            discarded: order[..d].to_vec(),
            target_register,
            target_kind: target.kind,
            groups,
            threshold,
            accepted,
            target_fidelity: self.bench.fidelity(&target)?,
        };
        Ok((transcript, target))
    }
}

pub fn run_verification<R: Rng + ?Sized>(
    h: &Hypergraph,
    cover: &IndependenceCover,
    params: &ProtocolParams,
    prover: &ProverModel,
    correctable: &CorrectableSet,
    rng: &mut R,
) -> Result<VerifierTranscript> {
    Verification::new(h, cover, params, prover, correctable)?.run(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::greedy_cover;
    use crate::protocol::StateSpec;

    fn triangle() -> (Hypergraph, IndependenceCover) {
        let h = Hypergraph::parse("3\n0 1\n1 2\n0 2").unwrap();
        let c = greedy_cover(&h);
        (h, c)
    }

    #[test]
    fn schedule_cycles_pairs() {
        assert_eq!(group_schedule(3, 3), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(group_schedule(2, 3), vec![(0, 1); 3]);
        assert_eq!(group_schedule(1, 2), vec![(0, 0); 2]);
    }

    #[test]
    fn honest_run_accepts_with_unit_fidelity() {
        let (h, c) = triangle();
        let params = ProtocolParams::desk(3, 3, 8, 2, 0.5, 2.0);
        let v = Verification::new(&h, &c, &params, &ProverModel::Honest {}, &CorrectableSet::Zero).unwrap();
        for i in 0..100 {
            let t = v.run_trial(5, i).unwrap();
            assert!(t.accepted);
            assert!(t.is_consistent());
            assert_eq!(t.discarded.len(), 2);
            assert!((t.target_fidelity - 1.0).abs() < 1e-12);
            assert_eq!(t.groups.iter().map(|g| g.tests.len()).sum::<usize>(), 24);
        }
    }

    #[test]
    fn zero_state_on_single_edge_is_rejected_at_large_k() {
        let h = Hypergraph::parse("2\n0 1").unwrap();
        let c = IndependenceCover::new(vec![vec![0], vec![1]]);
        let params = ProtocolParams::desk(2, 2, 200, 0, 0.5, 2.0);
        let prover = ProverModel::FixedState { state: StateSpec::Zero {} };
        let v = Verification::new(&h, &c, &params, &prover, &CorrectableSet::Zero).unwrap();
        let accepted = (0..50).filter(|&i| v.run_trial(1, i).unwrap().accepted).count();
        assert_eq!(accepted, 0);
    }

    #[test]
    fn tampered_transcript_is_inconsistent() {
        let (h, c) = triangle();
        let params = ProtocolParams::desk(3, 3, 4, 0, 0.5, 2.0);
        let v = Verification::new(&h, &c, &params, &ProverModel::Honest {}, &CorrectableSet::Zero).unwrap();
        let mut t = v.run_trial(0, 0).unwrap();
        t.groups[0].counters[0].passes -= 1;
        assert!(!t.is_consistent());
    }

    #[test]
    fn size_mismatch_and_full_scale_mode_rejected() {
        let (h, c) = triangle();
        let params = ProtocolParams::desk(4, 3, 4, 0, 0.5, 2.0);
        assert!(Verification::new(&h, &c, &params, &ProverModel::Honest {}, &CorrectableSet::Zero).is_err());
        let paper = crate::protocol::derive_paper_params(3, 3, 1, 1).unwrap().to_protocol_params();
        let err = Verification::new(&h, &c, &paper, &ProverModel::Honest {}, &CorrectableSet::Zero).unwrap_err();
        assert!(matches!(err, Error::NotDeskExecutable(_)));
    }
}
