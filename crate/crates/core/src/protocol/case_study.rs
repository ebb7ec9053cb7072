use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Bench, ProverModel, RegisterKind};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, IndependenceCover};
use crate::stabilizer::{paired_schedule, CorrectableSet, TestOutcome};
use crate::stats::{derive_seed, trial_rng};

/// Grouping used by the three-color protocol, recorded in every transcript.
pub const CASE_STUDY_GROUPING: &str = "3 test groups x 2k blocks + 1 computation block";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockTest {
    pub register: usize,
    pub group: usize,
    pub class: usize,
    pub outcome: TestOutcome,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseStudyTranscript {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub k: usize,
    pub grouping: String,
    /// Class pair tested by each group; blocks alternate between the two.
    pub group_classes: Vec<(usize, usize)>,
    /// `assignment[slot]` is the register placed in that slot. Slots
    /// `2k·g .. 2k·(g+1)` form group `g`; the last slot is computation.
    pub assignment: Vec<usize>,
    pub tests: Vec<BlockTest>,
    pub accepted: bool,
    pub computation_register: usize,
    pub bad_register: Option<usize>,
    pub bad_on_computation: Option<bool>,
    /// `⟨H|σ|H⟩` of the computation register.
    pub target_fidelity: f64,
}

/// Reusable setup for repeated runs of the three-color protocol.
#[derive(Clone, Debug)]
pub struct CaseStudy {
    bench: Bench,
    k: usize,
    correctable: CorrectableSet,
}

impl CaseStudy {
    pub fn new(
        h: &Hypergraph,
        cover: &IndependenceCover,
        k: usize,
        prover: &ProverModel,
        correctable: &CorrectableSet,
    ) -> Result<Self> {
        if cover.num_classes() != 3 {
            return Err(Error::param(format!(
                "the three-color protocol needs exactly 3 classes, cover has {}",
                cover.num_classes()
            )));
        }
        if k == 0 {
            return Err(Error::param("k must be at least 1"));
        }
        Ok(CaseStudy {
            bench: Bench::new(h, cover, prover)?,
            k,
            correctable: correctable.clone(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn registers(&self) -> usize {
        6 * self.k + 1
    }

    pub(crate) fn bench(&self) -> &Bench {
        &self.bench
    }

    pub fn run<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<CaseStudyTranscript> {
        self.run_with_target(rng).map(|(t, _)| t)
    }

    /// Run `index` under `master`, with the derived seed recorded.
    pub fn run_trial(&self, master: u64, index: u64) -> Result<CaseStudyTranscript> {
        let mut t = self.run(&mut trial_rng(master, index))?;
        t.seed = Some(derive_seed(master, index));
        Ok(t)
    }

    /// Also hands back the computation register's state.
    pub(crate) fn run_with_target<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
    ) -> Result<(CaseStudyTranscript, super::Register)> {
        let total = self.registers();
        let registers = self.bench.prover().emit(total, rng);
        let mut assignment: Vec<usize> = (0..total).collect();
        assignment.shuffle(rng);

        let schedule = paired_schedule(3);
        let per_group = 2 * self.k;
        let mut tests = Vec::with_capacity(total - 1);
        for (g, &(a, b)) in schedule.iter().enumerate() {
            for pos in 0..per_group {
                let register = assignment[g * per_group + pos];
                let class = if pos % 2 == 0 { a } else { b };
                let outcome = self.bench.test(&registers[register], class, &self.correctable, rng)?;
                tests.push(BlockTest {
                    register,
                    group: g,
                    class,
                    outcome,
                });
            }
        }
        let computation_register = assignment[total - 1];
        let bad_register = registers.iter().position(|r| r.kind == RegisterKind::Bad);
        let target = registers[computation_register].clone();
        let transcript = CaseStudyTranscript {
            seed: None,
            k: self.k,
            grouping: CASE_STUDY_GROUPING.to_string(),
            group_classes: schedule,
            accepted: tests.iter().all(|t| t.outcome.passed),
            tests,
            computation_register,
            bad_register,
            bad_on_computation: bad_register.map(|b| b == computation_register),
            target_fidelity: self.bench.fidelity(&target)?,
            assignment,
        };
        Ok((transcript, target))
    }
}

pub fn run_case_study<R: Rng + ?Sized>(
    h: &Hypergraph,
    cover: &IndependenceCover,
    k: usize,
    prover: &ProverModel,
    correctable: &CorrectableSet,
    rng: &mut R,
) -> Result<CaseStudyTranscript> {
    CaseStudy::new(h, cover, k, prover, correctable)?.run(rng)
}
