use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Natural logarithm of 2, 100 decimals (truncated).
const LN2_DIGITS: &str = "6931471805599453094172321214581765680755001343602552541206800094933936219696947156058633269964186875";

/// Registers a desk run may allocate.
pub const DESK_REGISTER_LIMIT: u128 = 1_000_000;

fn ln2() -> BigRational {
    let num: BigInt = LN2_DIGITS.parse().expect("static digits");
    let den = BigInt::from(10u32).pow(LN2_DIGITS.len() as u32);
    BigRational::new(num, den)
}

/// Full-scale parameters, computed exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct PaperParams {
    pub n: u64,
    pub gamma: u64,
    pub r: u64,
    pub k: u64,
    /// `γ(γ−1)/2`
    pub upsilon: u64,
    /// `1/N³`
    pub epsilon: BigRational,
    /// `N⁷r²/2`
    pub group_size: BigRational,
    /// `2N⁷υ⁷k²`; the discard count is this times `ln 2`.
    pub discard_coefficient: BigUint,
    /// `⌈2N⁷υ⁷k² ln 2⌉`
    pub discard_ceil: BigUint,
}

pub fn derive_paper_params(n: u64, gamma: u64, r: u64, k: u64) -> Result<PaperParams> {
    if n == 0 {
        return Err(Error::param("N must be at least 1"));
    }
    if gamma < 2 {
        return Err(Error::param("gamma must be at least 2"));
    }
    if r == 0 || k == 0 {
        return Err(Error::param("r and k must be positive"));
    }
    let upsilon = gamma * (gamma - 1) / 2;
    let big_n = BigUint::from(n);
    let n7 = big_n.pow(7);
    let epsilon = BigRational::new(BigInt::one(), BigInt::from(big_n.pow(3)));
    let group_size = BigRational::new(BigInt::from(&n7 * BigUint::from(r).pow(2)), BigInt::from(2u32));
    let discard_coefficient = BigUint::from(2u32) * &n7 * BigUint::from(upsilon).pow(7) * BigUint::from(k).pow(2);

    let d = BigRational::from_integer(BigInt::from(discard_coefficient.clone())) * ln2();
    let discard_ceil = d
        .ceil()
        .to_integer()
        .to_biguint()
        .expect("positive product");
    Ok(PaperParams {
        n,
        gamma,
        r,
        k,
        upsilon,
        epsilon,
        group_size,
        discard_coefficient,
        discard_ceil,
    })
}

fn ratio_to_f64(q: &BigRational) -> f64 {
    let num = q.numer().to_f64().unwrap_or(f64::INFINITY);
    let den = q.denom().to_f64().unwrap_or(f64::INFINITY);
    num / den
}

fn ratio_to_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl PaperParams {
    /// Registers requested from the prover: `υ·k_j + d + 1`.
    pub fn total_registers(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.upsilon)) * &self.group_size
            + BigRational::from_integer(BigInt::from(self.discard_ceil.clone()))
            + BigRational::one()
    }

    pub fn epsilon_f64(&self) -> f64 {
        ratio_to_f64(&self.epsilon)
    }

    /// Rows of `(name, exact value, approximate value)`.
    pub fn table(&self) -> Vec<(&'static str, String, f64)> {
        let d_approx = self.discard_coefficient.to_f64().unwrap_or(f64::INFINITY) * std::f64::consts::LN_2;
        vec![
            ("N", self.n.to_string(), self.n as f64),
            ("gamma", self.gamma.to_string(), self.gamma as f64),
            ("r", self.r.to_string(), self.r as f64),
            ("k", self.k.to_string(), self.k as f64),
            ("upsilon", self.upsilon.to_string(), self.upsilon as f64),
            ("epsilon", ratio_to_string(&self.epsilon), self.epsilon_f64()),
            ("k_j", ratio_to_string(&self.group_size), ratio_to_f64(&self.group_size)),
            (
                "d",
                format!(
                    "2*{}^7*{}^7*{}^2*ln2 = {}*ln2",
                    self.n, self.upsilon, self.k, self.discard_coefficient
                ),
                d_approx,
            ),
            ("d_ceil", self.discard_ceil.to_string(), self.discard_ceil.to_f64().unwrap_or(f64::INFINITY)),
            ("registers", ratio_to_string(&self.total_registers()), ratio_to_f64(&self.total_registers())),
        ]
    }

    /// Threshold slack and scale as execution parameters, flagged as
    /// full-scale so that runs refuse them.
    pub fn to_protocol_params(&self) -> ProtocolParams {
        let k_j = self.group_size.ceil().to_integer().to_u64().unwrap_or(u64::MAX);
        ProtocolParams {
            qubits_per_register: self.n as usize,
            gamma: self.gamma as usize,
            upsilon: self.upsilon as usize,
            group_sizes: vec![k_j],
            discard: self.discard_ceil.to_u64().unwrap_or(u64::MAX),
            epsilon: self.epsilon_f64(),
            r: self.r as f64,
            threshold: None,
            mode: ParamMode::Paper,
        }
    }
}

impl fmt::Display for PaperParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, exact, approx) in self.table() {
            writeln!(f, "{name:<10} {exact}  (~{approx:e})")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamMode {
    Paper,
    #[default]
    Desk,
}

/// Execution parameters for the general verification protocol.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolParams {
    /// `N`, qubits per register; must match the hypergraph.
    pub qubits_per_register: usize,
    pub gamma: usize,
    /// Number of test groups.
    pub upsilon: usize,
    /// `k_j` per group; a single entry applies to every group.
    pub group_sizes: Vec<u64>,
    /// `d`, registers discarded before testing.
    #[serde(default)]
    pub discard: u64,
    pub epsilon: f64,
    pub r: f64,
    /// Overrides the default `1/2 + (1−ε)/r`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default)]
    pub mode: ParamMode,
}

impl ProtocolParams {
    /// Desk parameters with `υ = γ(γ−1)/2` (at least one group).
    pub fn desk(qubits_per_register: usize, gamma: usize, group_size: u64, discard: u64, epsilon: f64, r: f64) -> Self {
        ProtocolParams {
            qubits_per_register,
            gamma,
            upsilon: (gamma * gamma.saturating_sub(1) / 2).max(1),
            group_sizes: vec![group_size],
            discard,
            epsilon,
            r,
            threshold: None,
            mode: ParamMode::Desk,
        }
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = Some(threshold);
        self
    }

    pub fn with_group_size(mut self, group_size: u64) -> Self {
        self.group_sizes = vec![group_size];
        self
    }

    /// `1/2 + (1−ε)/r` unless overridden.
    pub fn threshold(&self) -> f64 {
        self.threshold.unwrap_or(0.5 + (1.0 - self.epsilon) / self.r)
    }

    pub fn group_size(&self, j: usize) -> u64 {
        if self.group_sizes.len() == 1 {
            self.group_sizes[0]
        } else {
            self.group_sizes[j]
        }
    }

    pub fn total_registers(&self) -> u128 {
        (0..self.upsilon).map(|j| self.group_size(j) as u128).sum::<u128>() + self.discard as u128 + 1
    }

    pub fn validate(&self) -> Result<()> {
        if self.upsilon == 0 {
            return Err(Error::param("upsilon must be at least 1"));
        }
        if self.group_sizes.is_empty() || (self.group_sizes.len() != 1 && self.group_sizes.len() != self.upsilon) {
            return Err(Error::param(format!(
                "group_sizes must have 1 or {} entries, got {}",
                self.upsilon,
                self.group_sizes.len()
            )));
        }
        if self.group_sizes.contains(&0) {
            return Err(Error::param("every k_j must be at least 1"));
        }
        if self.epsilon.is_nan() || self.r.is_nan() || self.epsilon <= 0.0 || self.r <= 0.0 {
            return Err(Error::param("epsilon and r must be positive"));
        }
        if let Some(t) = self.threshold {
            if !t.is_finite() {
                return Err(Error::param("threshold must be finite"));
            }
        }
        Ok(())
    }

    /// Refuses full-scale parameters and anything beyond desk size.
    pub fn check_desk_executable(&self) -> Result<()> {
        self.validate()?;
        let registers = self.total_registers();
        if self.mode == ParamMode::Paper {
            return Err(Error::NotDeskExecutable(format!(
                "full-scale parameters: {registers} registers of {} qubits (upsilon={}, k_j={}, d={})",
                self.qubits_per_register,
                self.upsilon,
                self.group_size(0),
                self.discard
            )));
        }
        if registers > DESK_REGISTER_LIMIT {
            return Err(Error::NotDeskExecutable(format!(
                "{registers} registers exceed the desk limit of {DESK_REGISTER_LIMIT}"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_scale_examples() {
        let p = derive_paper_params(10, 3, 10, 1).unwrap();
        assert_eq!(p.upsilon, 3);
        assert_eq!(p.epsilon, BigRational::new(1.into(), 1000.into()));
        assert_eq!(p.group_size, BigRational::from_integer(500_000_000.into()));
        assert!(derive_paper_params(4, 1, 1, 1).is_err());
    }

    #[test]
    fn discard_count_for_small_instance() {
        let p = derive_paper_params(4, 3, 4, 2).unwrap();
        // 2 * 4^7 * 3^7 * 2^2 = 286_654_464
        assert_eq!(p.discard_coefficient, BigUint::from(286_654_464u64));
        // 286654464 * ln 2 = 198_693_733.516…
        assert_eq!(p.discard_ceil, BigUint::from(198_693_734u64));
    }

    #[test]
    fn half_integer_group_size_stays_exact() {
        let p = derive_paper_params(3, 3, 1, 1).unwrap();
        assert_eq!(p.group_size, BigRational::new(2187.into(), 2.into()));
    }

    #[test]
    fn full_scale_mode_is_refused() {
        let p = derive_paper_params(4, 3, 4, 2).unwrap().to_protocol_params();
        assert!(matches!(p.check_desk_executable(), Err(Error::NotDeskExecutable(_))));
        let desk = ProtocolParams::desk(4, 3, 16, 2, 0.5, 2.0);
        desk.check_desk_executable().unwrap();
        assert_eq!(desk.total_registers(), 3 * 16 + 2 + 1);
        assert!((desk.threshold() - 0.75).abs() < 1e-15);
        let huge = ProtocolParams::desk(4, 3, 1 << 30, 0, 0.5, 2.0);
        assert!(huge.check_desk_executable().is_err());
    }
}
