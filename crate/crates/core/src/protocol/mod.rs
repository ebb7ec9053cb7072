//! Verifier and prover state machines, transcripts and the statistical
//! experiments built on them.

mod case_study;
mod experiments;
mod params;
mod prover;
mod verification;

pub use case_study::{run_case_study, BlockTest, CaseStudy, CaseStudyTranscript, CASE_STUDY_GROUPING};
pub use experiments::{
    case_study_experiment, completeness_experiment, detectability_check, soundness_experiment,
    verification_experiment, CaseStudySummary, CompletenessReport, DetectabilityReport, SoundnessReport, SoundnessRow,
    VerificationSummary,
};
pub use params::{derive_paper_params, ParamMode, PaperParams, ProtocolParams, DESK_REGISTER_LIMIT};
pub use prover::{PreparedProver, ProverModel, Register, RegisterKind, StateSpec};
pub use verification::{
    group_schedule, run_verification, Counter, GroupRecord, RegisterTest, Verification, VerifierTranscript,
};

use rand::Rng;

use crate::error::{Error, Result};
use crate::hypergraph::{validate_cover, Hypergraph, IndependenceCover};
use crate::stabilizer::{syndrome_distribution, ClassChecker, CorrectableSet, TestOutcome, ANALYTIC_QUBIT_LIMIT};
use crate::state::{build_state, fidelity, MeasurementSampler, StateVector};

/// Checkers for every class plus cached samplers for the prover's reusable
/// states. Sampling through the cache consumes the random stream exactly as
/// a direct measurement would.
#[derive(Clone, Debug)]
pub(crate) struct Bench {
    h: Hypergraph,
    reference: StateVector,
    checkers: Vec<ClassChecker>,
    prover: PreparedProver,
    samplers: Vec<Vec<MeasurementSampler>>,
    shared_fidelity: Vec<f64>,
    all_vertices: Vec<usize>,
}

impl Bench {
    pub(crate) fn new(h: &Hypergraph, cover: &IndependenceCover, prover: &ProverModel) -> Result<Self> {
        validate_cover(h, cover)?;
        let reference = build_state(h)?;
        let checkers = (0..cover.num_classes())
            .map(|l| ClassChecker::from_cover(h, cover, l))
            .collect::<Result<Vec<_>>>()?;
        let prover = PreparedProver::new(prover, h)?;
        let mut samplers = Vec::new();
        let mut shared_fidelity = Vec::new();
        for (_, state) in prover.shared_states() {
            samplers.push(
                checkers
                    .iter()
                    .map(|c| MeasurementSampler::new(state, c.basis()))
                    .collect::<Result<Vec<_>>>()?,
            );
            shared_fidelity.push(fidelity(&reference, state)?);
        }
        Ok(Bench {
            h: h.clone(),
            reference,
            checkers,
            prover,
            samplers,
            shared_fidelity,
            all_vertices: (0..h.num_vertices()).collect(),
        })
    }

    pub(crate) fn hypergraph(&self) -> &Hypergraph {
        &self.h
    }

    pub(crate) fn num_classes(&self) -> usize {
        self.checkers.len()
    }

    pub(crate) fn prover(&self) -> &PreparedProver {
        &self.prover
    }

    pub(crate) fn test<R: Rng + ?Sized>(
        &self,
        register: &Register,
        class: usize,
        correctable: &CorrectableSet,
        rng: &mut R,
    ) -> Result<TestOutcome> {
        let checker = &self.checkers[class];
        match register.shared {
            Some(idx) => Ok(checker.outcome(self.samplers[idx][class].sample(rng), correctable)),
            None => checker.run(&register.state, correctable, rng),
        }
    }

    /// `⟨H|ρ|H⟩` for a register.
    pub(crate) fn fidelity(&self, register: &Register) -> Result<f64> {
        match register.shared {
            Some(idx) => Ok(self.shared_fidelity[idx]),
            None => fidelity(&self.reference, &register.state),
        }
    }

    /// `Tr(ρ Π_S)`, where `Π_S` projects onto the syndromes that every class
    /// test accepts. For `S = {0}` this is the projector onto `|H⟩`.
    pub(crate) fn projection(&self, state: &StateVector, correctable: &CorrectableSet) -> Result<f64> {
        if *correctable == CorrectableSet::Zero {
            return fidelity(&self.reference, state);
        }
        if state.num_qubits() > ANALYTIC_QUBIT_LIMIT {
            return Err(Error::TooLarge {
                what: "projection register",
                size: state.num_qubits(),
                limit: ANALYTIC_QUBIT_LIMIT,
            });
        }
        let dist = syndrome_distribution(state, &self.h, &self.all_vertices)?;
        Ok(dist
            .iter()
            .enumerate()
            .filter(|&(mask, _)| {
                self.checkers.iter().all(|c| {
                    let flagged: Vec<usize> = c.vertices().iter().copied().filter(|&v| mask >> v & 1 == 1).collect();
                    correctable.contains_flagged(&flagged)
                })
            })
            .map(|(_, p)| p)
            .sum::<f64>()
            .clamp(0.0, 1.0))
    }
}
