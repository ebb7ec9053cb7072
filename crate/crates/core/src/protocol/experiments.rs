use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, DiscreteCDF};

use super::{Bench, CaseStudy, ProtocolParams, ProverModel, Verification};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, IndependenceCover};
use crate::stabilizer::{syndrome_distribution, CorrectableSet};
use crate::stats::{completeness_bound, trial_rng, FrequencyEstimate};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseStudySummary {
    pub k: usize,
    pub acceptance: FrequencyEstimate,
    /// `1/(6k+1)`
    pub fooling_probability: f64,
    /// Accepted runs whose computation register was not the bad one.
    pub accepted_with_bad_tested: u64,
}

pub fn case_study_experiment(
    h: &Hypergraph,
    cover: &IndependenceCover,
    k: usize,
    prover: &ProverModel,
    correctable: &CorrectableSet,
    trials: u64,
    seed: u64,
) -> Result<CaseStudySummary> {
    require_trials(trials)?;
    let cs = CaseStudy::new(h, cover, k, prover, correctable)?;
    let runs: Vec<(bool, bool)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let tr = cs.run(&mut trial_rng(seed, t))?;
            Ok((tr.accepted, tr.bad_on_computation == Some(false)))
        })
        .collect::<Result<_>>()?;
    let accepted = runs.iter().filter(|r| r.0).count() as u64;
    Ok(CaseStudySummary {
        k,
        acceptance: FrequencyEstimate::new(accepted, trials)?,
        fooling_probability: 1.0 / (6 * k + 1) as f64,
        accepted_with_bad_tested: runs.iter().filter(|r| r.0 && r.1).count() as u64,
    })
}

fn require_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        Err(Error::param("trials must be at least 1"))
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectabilityReport {
    pub k: usize,
    pub alpha: f64,
    pub acceptance: FrequencyEstimate,
    /// `1 − 1/(α(6k+1))`, compared with `Tr(σ Π_S)` of the target.
    pub trace_bound: f64,
    /// `1/√(α(6k+1))`, compared with `⟨H|σ|H⟩` of the target.
    pub fidelity_bound: f64,
    /// Means over accepted runs; absent when nothing was accepted.
    pub mean_projection: Option<f64>,
    pub mean_fidelity: Option<f64>,
    /// Fraction of accepted runs whose target meets the trace bound.
    pub bound_satisfaction: Option<f64>,
    /// Frequency of accepting with a target below the trace bound.
    pub violations: FrequencyEstimate,
    /// `violations ≤ α`: the guarantee read as a significance statement.
    pub significance_respected: bool,
    /// Conditional means checked against both bounds. Vacuous (true) when
    /// the acceptance frequency is already below `α`.
    pub trace_bound_respected: bool,
    pub fidelity_bound_respected: bool,
}

#[allow(clippy::too_many_arguments)]
pub fn detectability_check(
    prover: &ProverModel,
    h: &Hypergraph,
    cover: &IndependenceCover,
    k: usize,
    alpha: f64,
    correctable: &CorrectableSet,
    trials: u64,
    seed: u64,
) -> Result<DetectabilityReport> {
    require_trials(trials)?;
    let blocks = (6 * k + 1) as f64;
    if !(alpha >= 1.0 / blocks && alpha <= 1.0) {
        return Err(Error::param(format!("alpha {alpha} outside [1/(6k+1), 1] = [{}, 1]", 1.0 / blocks)));
    }
    let cs = CaseStudy::new(h, cover, k, prover, correctable)?;
    let bench: &Bench = cs.bench();
    let shared_projection = bench
        .prover()
        .shared_states()
        .iter()
        .map(|(_, s)| bench.projection(s, correctable))
        .collect::<Result<Vec<_>>>()?;
    let trace_bound = 1.0 - 1.0 / (alpha * blocks);
    let fidelity_bound = 1.0 / (alpha * blocks).sqrt();

    // (accepted, projection, fidelity)
    let runs: Vec<(bool, f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let (tr, target) = cs.run_with_target(&mut trial_rng(seed, t))?;
            let proj = match target.shared {
                Some(i) => shared_projection[i],
                None if tr.accepted => bench.projection(&target.state, correctable)?,
                None => f64::NAN,
            };
            Ok((tr.accepted, proj, tr.target_fidelity))
        })
        .collect::<Result<_>>()?;

    let accepted: Vec<&(bool, f64, f64)> = runs.iter().filter(|r| r.0).collect();
    let count = accepted.len() as u64;
    let mean = |f: fn(&(bool, f64, f64)) -> f64| {
        (count > 0).then(|| accepted.iter().map(|r| f(r)).sum::<f64>() / count as f64)
    };
    let mean_projection = mean(|r| r.1);
    let mean_fidelity = mean(|r| r.2);
    let violations = accepted.iter().filter(|r| r.1 < trace_bound).count() as u64;
    let acceptance = FrequencyEstimate::new(count, trials)?;
    let vacuous = acceptance.estimate < alpha;
    let violations = FrequencyEstimate::new(violations, trials)?;
    Ok(DetectabilityReport {
        k,
        alpha,
        acceptance,
        trace_bound,
        fidelity_bound,
        mean_projection,
        mean_fidelity,
        bound_satisfaction: (count > 0)
            .then(|| accepted.iter().filter(|r| r.1 >= trace_bound).count() as f64 / count as f64),
        significance_respected: violations.estimate <= alpha,
        trace_bound_respected: vacuous || mean_projection.is_some_and(|p| p >= trace_bound),
        fidelity_bound_respected: vacuous || mean_fidelity.is_some_and(|f| f >= fidelity_bound),
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationSummary {
    pub acceptance: FrequencyEstimate,
    /// Frequency of accepting a target with fidelity below `1 − δ`.
    pub joint_bad_acceptance: FrequencyEstimate,
    pub mean_accepted_fidelity: Option<f64>,
}

fn verification_runs(v: &Verification, trials: u64, seed: u64, delta: f64) -> Result<VerificationSummary> {
    require_trials(trials)?;
    let runs: Vec<(bool, f64)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let tr = v.run(&mut trial_rng(seed, t))?;
            Ok((tr.accepted, tr.target_fidelity))
        })
        .collect::<Result<_>>()?;
    let accepted: Vec<f64> = runs.iter().filter(|r| r.0).map(|r| r.1).collect();
    let bad = accepted.iter().filter(|&&f| f < 1.0 - delta).count() as u64;
    Ok(VerificationSummary {
        acceptance: FrequencyEstimate::new(accepted.len() as u64, trials)?,
        joint_bad_acceptance: FrequencyEstimate::new(bad, trials)?,
        mean_accepted_fidelity: (!accepted.is_empty()).then(|| accepted.iter().sum::<f64>() / accepted.len() as f64),
    })
}

/// Exact probability that stabilizer `vertex` passes one class-`class`
/// test on each shared prover state, minimized over states.
fn min_pass_probability(bench: &Bench, class: usize, vertex: usize, correctable: &CorrectableSet) -> Result<f64> {
    let checker = &bench.checkers[class];
    let vs = checker.vertices();
    let pos = vs
        .iter()
        .position(|&v| v == vertex)
        .ok_or_else(|| Error::Invariant(format!("vertex {vertex} not in class {class}")))?;
    let mut worst: f64 = 1.0;
    for (_, state) in bench.prover().shared_states() {
        let dist = syndrome_distribution(state.as_ref(), bench.hypergraph(), vs)?;
        let p: f64 = dist
            .iter()
            .enumerate()
            .filter(|&(mask, _)| {
                let flagged: Vec<usize> = vs
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                mask >> pos & 1 == 0 || correctable.contains_flagged(&flagged)
            })
            .map(|(_, p)| p)
            .sum();
        worst = worst.min(p);
    }
    Ok(worst.clamp(0.0, 1.0))
}

/// Per-counter pass probabilities and trial counts implied by the schedule.
fn counter_model(v: &Verification, correctable: &CorrectableSet) -> Result<Vec<(u64, f64)>> {
    let bench = v.bench();
    let mut out = Vec::new();
    for (j, &(a, b)) in v.schedule().iter().enumerate() {
        let k_j = v.params().group_size(j);
        let (n_a, n_b) = if a == b { (k_j, 0) } else { (k_j.div_ceil(2), k_j / 2) };
        let va = bench.checkers[a].vertices();
        let vb = bench.checkers[b].vertices();
        let mut vertices: Vec<usize> = va.iter().chain(vb).copied().collect();
        vertices.sort_unstable();
        vertices.dedup();
        for vertex in vertices {
            let in_a = va.contains(&vertex);
            let in_b = a != b && vb.contains(&vertex);
            let trials = if in_a { n_a } else { 0 } + if in_b { n_b } else { 0 };
            let pa = if in_a { min_pass_probability(bench, a, vertex, correctable)? } else { 1.0 };
            let pb = if in_b { min_pass_probability(bench, b, vertex, correctable)? } else { 1.0 };
            out.push((trials, pa.min(pb)));
        }
    }
    Ok(out)
}

/// Smallest pass count meeting `threshold` out of `trials`, using the same
/// comparison as the verifier.
fn required_passes(threshold: f64, trials: u64) -> u64 {
    (0..=trials)
        .find(|&c| c as f64 / trials as f64 >= threshold)
        .unwrap_or(trials + 1)
}

/// `P(Bin(n, p) ≥ c)`
fn binomial_upper_tail(n: u64, p: f64, c: u64) -> f64 {
    if c == 0 {
        return 1.0;
    }
    if c > n {
        return 0.0;
    }
    match Binomial::new(p, n) {
        Ok(b) => (1.0 - b.cdf(c - 1)).clamp(0.0, 1.0),
        Err(_) => f64::NAN,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompletenessReport {
    pub n: usize,
    pub upsilon: usize,
    pub group_size: u64,
    pub epsilon: f64,
    pub r: f64,
    pub threshold: f64,
    /// Exact per-stabilizer pass probability of the honest state.
    pub honest_pass_rate: f64,
    pub acceptance: FrequencyEstimate,
    /// `1 − υN e^{−2ε²k_j/r²}`
    pub bound: f64,
    pub sigma: f64,
    pub satisfied: bool,
}

pub fn completeness_experiment(
    h: &Hypergraph,
    cover: &IndependenceCover,
    params: &ProtocolParams,
    correctable: &CorrectableSet,
    trials: u64,
    seed: u64,
) -> Result<CompletenessReport> {
    let v = Verification::new(h, cover, params, &ProverModel::Honest {}, correctable)?;
    let honest_pass_rate = counter_model(&v, correctable)?
        .iter()
        .map(|&(_, p)| p)
        .fold(1.0, f64::min);
    let summary = verification_runs(&v, trials, seed, 0.0)?;
    let k_min = (0..params.upsilon).map(|j| params.group_size(j)).min().unwrap_or(1);
    let bound = completeness_bound(
        params.upsilon as u64,
        params.qubits_per_register as u64,
        params.epsilon,
        params.r,
        k_min,
    )?;
    let acc = summary.acceptance;
    let sigma = acc.std_error();
    Ok(CompletenessReport {
        n: params.qubits_per_register,
        upsilon: params.upsilon,
        group_size: k_min,
        epsilon: params.epsilon,
        r: params.r,
        threshold: params.threshold(),
        honest_pass_rate,
        bound,
        sigma,
        satisfied: acc.estimate >= bound - 3.0 * sigma,
        acceptance: acc,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SoundnessRow {
    pub group_size: u64,
    pub acceptance: FrequencyEstimate,
    pub joint_bad_acceptance: FrequencyEstimate,
    pub mean_accepted_fidelity: Option<f64>,
    /// Binomial-tail upper bound on acceptance from the weakest counter.
    pub binomial_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SoundnessReport {
    pub delta: f64,
    pub threshold: f64,
    /// Lowest exact per-stabilizer pass probability of the prover's state.
    pub min_pass_probability: f64,
    /// `1 − 1/(Nυ)`
    pub fidelity_bound: f64,
    pub rows: Vec<SoundnessRow>,
    /// Joint frequency strictly decreasing (or pinned at zero) along `rows`.
    pub monotone_decreasing: bool,
}

#[allow(clippy::too_many_arguments)]
pub fn soundness_experiment(
    h: &Hypergraph,
    cover: &IndependenceCover,
    params: &ProtocolParams,
    group_sizes: &[u64],
    prover: &ProverModel,
    delta: f64,
    correctable: &CorrectableSet,
    trials: u64,
    seed: u64,
) -> Result<SoundnessReport> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::param(format!("delta {delta} outside [0, 1]")));
    }
    if group_sizes.is_empty() {
        return Err(Error::param("soundness sweep needs at least one k_j"));
    }
    let mut rows = Vec::with_capacity(group_sizes.len());
    let mut min_pass = 1.0f64;
    for &k_j in group_sizes {
        let p = params.clone().with_group_size(k_j);
        let v = Verification::new(h, cover, &p, prover, correctable)?;
        let model = counter_model(&v, correctable)?;
        let threshold = p.threshold();
        let binomial_bound = model
            .iter()
            .filter(|m| m.0 > 0)
            .map(|&(n, q)| binomial_upper_tail(n, q, required_passes(threshold, n)))
            .fold(1.0, f64::min);
        min_pass = model.iter().map(|m| m.1).fold(min_pass, f64::min);
        let s = verification_runs(&v, trials, seed, delta)?;
        rows.push(SoundnessRow {
            group_size: k_j,
            acceptance: s.acceptance,
            joint_bad_acceptance: s.joint_bad_acceptance,
            mean_accepted_fidelity: s.mean_accepted_fidelity,
            binomial_bound,
        });
    }
    let monotone_decreasing = rows.windows(2).all(|w| {
        let (a, b) = (w[0].joint_bad_acceptance.estimate, w[1].joint_bad_acceptance.estimate);
        b < a || (a == 0.0 && b == 0.0)
    });
    Ok(SoundnessReport {
        delta,
        threshold: params.threshold(),
        min_pass_probability: min_pass,
        fidelity_bound: 1.0 - 1.0 / (params.qubits_per_register * params.upsilon) as f64,
        rows,
        monotone_decreasing,
    })
}

/// Acceptance statistics for repeated verification runs.
#[allow(clippy::too_many_arguments)]
pub fn verification_experiment(
    h: &Hypergraph,
    cover: &IndependenceCover,
    params: &ProtocolParams,
    prover: &ProverModel,
    correctable: &CorrectableSet,
    delta: f64,
    trials: u64,
    seed: u64,
) -> Result<VerificationSummary> {
    verification_runs(&Verification::new(h, cover, params, prover, correctable)?, trials, seed, delta)
}
