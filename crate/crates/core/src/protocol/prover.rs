use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::state::{build_state, vertex_mask, NoiseModel, PauliString, StateVector};

/// A register state described relative to the hypergraph state `|H⟩`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    /// `|H⟩`
    Hypergraph {},
    /// `Z^x |H⟩` for the listed qubits.
    ZError { qubits: Vec<usize> },
    /// `P |H⟩` for a Pauli string such as `"XIZ"` (qubit 0 first).
    Pauli { ops: String },
    /// Normalized `Σ_p Z^{p} |H⟩` over the listed patterns.
    ZSuperposition { patterns: Vec<Vec<usize>> },
    /// `|0…0⟩`
    Zero {},
    /// `|+…+⟩`
    Plus {},
    /// Explicit amplitudes; `im` may be omitted for real states.
    Amplitudes {
        re: Vec<f64>,
        #[serde(default)]
        im: Vec<f64>,
    },
}

impl StateSpec {
    pub fn build(&self, h: &Hypergraph) -> Result<StateVector> {
        let n = h.num_vertices();
        let check = |qs: &[usize]| -> Result<()> {
            match qs.iter().find(|&&q| q >= n) {
                Some(&q) => Err(Error::VertexOutOfRange { vertex: q, n }),
                None => Ok(()),
            }
        };
        match self {
            StateSpec::Hypergraph {} => build_state(h),
            StateSpec::ZError { qubits } => {
                check(qubits)?;
                let mut s = build_state(h)?;
                for &q in qubits {
                    s.apply_z(q)?;
                }
                Ok(s)
            }
            StateSpec::Pauli { ops } => {
                let p: PauliString = ops.parse()?;
                if p.len() != n {
                    return Err(Error::DimensionMismatch { left: p.len(), right: n });
                }
                let mut s = build_state(h)?;
                s.apply_pauli(&p)?;
                Ok(s)
            }
            StateSpec::ZSuperposition { patterns } => {
                if patterns.is_empty() {
                    return Err(Error::param("z_superposition needs at least one pattern"));
                }
                let base = build_state(h)?;
                let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
                for p in patterns {
                    check(p)?;
                    let mask = vertex_mask(p);
                    for (x, a) in amps.iter_mut().enumerate() {
                        let sign = if (x & mask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                        *a += base.amplitude(x) * sign;
                    }
                }
                StateVector::normalized(amps)
            }
            StateSpec::Zero {} => Ok(StateVector::zero(n)),
            StateSpec::Plus {} => Ok(StateVector::plus(n)),
            StateSpec::Amplitudes { re, im } => {
                if re.len() != 1 << n {
                    return Err(Error::DimensionMismatch {
                        left: re.len(),
                        right: 1 << n,
                    });
                }
                if !im.is_empty() && im.len() != re.len() {
                    return Err(Error::DimensionMismatch {
                        left: im.len(),
                        right: re.len(),
                    });
                }
                let amps = re
                    .iter()
                    .enumerate()
                    .map(|(i, &r)| Complex64::new(r, im.get(i).copied().unwrap_or(0.0)))
                    .collect();
                StateVector::from_amplitudes(amps)
            }
        }
    }
}

/// How the prover fills the registers it is asked for.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProverModel {
    Honest {},
    /// Independent noisy preparations of `|H⟩`.
    IidNoisy { noise: NoiseModel },
    /// Honest registers except the first, which holds `bad`.
    SingleBadCopy { bad: StateSpec },
    /// The same state in every register.
    FixedState { state: StateSpec },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegisterKind {
    Honest,
    Noisy,
    Bad,
    Fixed,
}

/// One register as handed to the verifier.
#[derive(Clone, Debug)]
pub struct Register {
    pub state: Arc<StateVector>,
    pub kind: RegisterKind,
    /// Index into [`PreparedProver::shared_states`] when the state is one
    /// of the prover's reusable states.
    pub shared: Option<usize>,
}

/// A prover model with its fixed states already built.
#[derive(Clone, Debug)]
pub struct PreparedProver {
    model: ProverModel,
    n: usize,
    base: Arc<StateVector>,
    /// `(kind, state)` for every state the prover reuses.
    shared: Vec<(RegisterKind, Arc<StateVector>)>,
    noise: Option<NoiseModel>,
}

impl PreparedProver {
    pub fn new(model: &ProverModel, h: &Hypergraph) -> Result<Self> {
        let base = Arc::new(build_state(h)?);
        let (shared, noise) = match model {
            ProverModel::Honest {} => (vec![(RegisterKind::Honest, base.clone())], None),
            ProverModel::IidNoisy { noise } => {
                noise.validate(h.num_vertices())?;
                (Vec::new(), Some(noise.clone()))
            }
            ProverModel::SingleBadCopy { bad } => (
                vec![
                    (RegisterKind::Honest, base.clone()),
                    (RegisterKind::Bad, Arc::new(bad.build(h)?)),
                ],
                None,
            ),
            ProverModel::FixedState { state } => (vec![(RegisterKind::Fixed, Arc::new(state.build(h)?))], None),
        };
        Ok(PreparedProver {
            model: model.clone(),
            n: h.num_vertices(),
            base,
            shared,
            noise,
        })
    }

    pub fn model(&self) -> &ProverModel {
        &self.model
    }

    pub fn shared_states(&self) -> &[(RegisterKind, Arc<StateVector>)] {
        &self.shared
    }

    /// Produces `count` registers. Only the noisy model draws randomness.
    pub fn emit<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<Register> {
        let shared = |idx: usize| Register {
            state: self.shared[idx].1.clone(),
            kind: self.shared[idx].0,
            shared: Some(idx),
        };
        match &self.model {
            ProverModel::Honest {} | ProverModel::FixedState { .. } => (0..count).map(|_| shared(0)).collect(),
            ProverModel::SingleBadCopy { .. } => (0..count).map(|i| shared(if i == 0 { 1 } else { 0 })).collect(),
            ProverModel::IidNoisy { .. } => {
                let noise = self.noise.as_ref().expect("noise model present");
                (0..count)
                    .map(|_| {
                        let err = noise.sample_error(self.n, rng);
                        if err.is_identity() {
                            Register {
                                state: self.base.clone(),
                                kind: RegisterKind::Noisy,
                                shared: None,
                            }
                        } else {
                            let mut s = (*self.base).clone();
                            s.apply_error(err);
                            Register {
                                state: Arc::new(s),
                                kind: RegisterKind::Noisy,
                                shared: None,
                            }
                        }
                    })
                    .collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::fidelity;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn specs_build_expected_states() {
        let h = Hypergraph::parse("3\n0 1 2").unwrap();
        let hs = build_state(&h).unwrap();
        assert!((fidelity(&StateSpec::Hypergraph {}.build(&h).unwrap(), &hs).unwrap() - 1.0).abs() < 1e-12);
        let z0 = StateSpec::ZError { qubits: vec![0] }.build(&h).unwrap();
        assert!(fidelity(&z0, &hs).unwrap() < 1e-12);
        let p = StateSpec::Pauli { ops: "ZII".into() }.build(&h).unwrap();
        assert!((fidelity(&p, &z0).unwrap() - 1.0).abs() < 1e-12);
        let sup = StateSpec::ZSuperposition {
            patterns: vec![vec![], vec![1]],
        }
        .build(&h)
        .unwrap();
        assert!((fidelity(&sup, &hs).unwrap() - 0.5).abs() < 1e-12);
        assert!(StateSpec::ZError { qubits: vec![3] }.build(&h).is_err());
        assert!(StateSpec::Amplitudes { re: vec![1.0; 8], im: vec![] }.build(&h).is_err());
    }

    #[test]
    fn single_bad_copy_emits_one_bad_register() {
        let h = Hypergraph::parse("3\n0 1 2").unwrap();
        let model = ProverModel::SingleBadCopy {
            bad: StateSpec::ZError { qubits: vec![0] },
        };
        let p = PreparedProver::new(&model, &h).unwrap();
        let regs = p.emit(7, &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(regs.iter().filter(|r| r.kind == RegisterKind::Bad).count(), 1);
        assert_eq!(regs[0].kind, RegisterKind::Bad);
    }

    #[test]
    fn noiseless_iid_prover_is_honest() {
        let h = Hypergraph::parse("3\n0 1\n1 2").unwrap();
        let p = PreparedProver::new(
            &ProverModel::IidNoisy {
                noise: NoiseModel::noiseless(),
            },
            &h,
        )
        .unwrap();
        let hs = build_state(&h).unwrap();
        for r in p.emit(5, &mut ChaCha8Rng::seed_from_u64(1)) {
            assert_eq!(*r.state, hs);
        }
    }

    #[test]
    fn prover_spec_json_round_trip() {
        let m = ProverModel::SingleBadCopy {
            bad: StateSpec::ZError { qubits: vec![0, 2] },
        };
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"{"kind":"single_bad_copy","bad":{"kind":"z_error","qubits":[0,2]}}"#);
        assert_eq!(serde_json::from_str::<ProverModel>(&text).unwrap(), m);
        assert!(serde_json::from_str::<ProverModel>(r#"{"kind":"honest","extra":1}"#).is_err());
    }
}
