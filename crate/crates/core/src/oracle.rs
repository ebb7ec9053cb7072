//! Dense-matrix reference implementations for cross-checking the
//! simulator on small registers.
//!
//! Everything here is built straight from operator definitions (Kronecker
//! products, the CZ-conjugation form of the stabilizers, explicit density
//! matrices) and shares no code path with [`crate::state`] or
//! [`crate::stabilizer`]. Intended for `n ≤ 10`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub const ORACLE_QUBIT_LIMIT: usize = 10;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Square complex matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![c(0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = c(1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let dim = rows.len();
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        DenseMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, col: usize) -> Complex64 {
        self.data[r * self.dim + col]
    }

    fn set(&mut self, r: usize, col: usize, v: Complex64) {
        self.data[r * self.dim + col] = v;
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        let d = self.dim;
        // Most operators here are sparse; visit only the nonzeros of `other`.
        let rows: Vec<Vec<(usize, Complex64)>> = (0..d)
            .map(|k| (0..d).map(|j| (j, other.get(k, j))).filter(|e| e.1 != c(0.0)).collect())
            .collect();
        let mut out = Self::zeros(d);
        for i in 0..d {
            for (k, row) in rows.iter().enumerate() {
                let a = self.get(i, k);
                if a == c(0.0) {
                    continue;
                }
                for &(j, b) in row {
                    out.data[i * d + j] += a * b;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &DenseMatrix) -> DenseMatrix {
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> DenseMatrix {
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn kron(&self, other: &DenseMatrix) -> DenseMatrix {
        let (a, b) = (self.dim, other.dim);
        let mut out = Self::zeros(a * b);
        for i in 0..a {
            for j in 0..a {
                let x = self.get(i, j);
                for k in 0..b {
                    for l in 0..b {
                        out.set(i * b + k, j * b + l, x * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn single(op: [[f64; 2]; 2]) -> DenseMatrix {
    DenseMatrix::from_rows(&[vec![c(op[0][0]), c(op[0][1])], vec![c(op[1][0]), c(op[1][1])]])
}

/// `op` on qubit `q` of `n`, identity elsewhere. Qubit `q` is bit `q` of the
/// index, so the Kronecker factors run from qubit `n−1` down to qubit 0.
pub fn embed(n: usize, q: usize, op: &DenseMatrix) -> DenseMatrix {
    tensor(n, |k| (k == q).then(|| op.clone()))
}

/// `⊗_k op_k` with qubit 0 as the least significant factor; `None` is `I`.
fn tensor(n: usize, op: impl Fn(usize) -> Option<DenseMatrix>) -> DenseMatrix {
    let mut m = DenseMatrix::identity(1);
    for k in (0..n).rev() {
        m = m.kron(&op(k).unwrap_or_else(|| DenseMatrix::identity(2)));
    }
    m
}

pub fn pauli_x(n: usize, q: usize) -> DenseMatrix {
    embed(n, q, &single([[0.0, 1.0], [1.0, 0.0]]))
}

pub fn pauli_z(n: usize, q: usize) -> DenseMatrix {
    embed(n, q, &single([[1.0, 0.0], [0.0, -1.0]]))
}

pub fn hadamard(n: usize, q: usize) -> DenseMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    embed(n, q, &single([[s, s], [s, -s]]))
}

/// `I − 2 ⊗_{i∈e} |1⟩⟨1|_i`, assembled from the projector `|1⟩⟨1|` on each
/// edge qubit.
pub fn generalized_cz(n: usize, edge: &[usize]) -> DenseMatrix {
    let one = single([[0.0, 0.0], [0.0, 1.0]]);
    let proj = tensor(n, |k| edge.contains(&k).then(|| one.clone()));
    DenseMatrix::identity(1 << n).add(&proj.scale(c(-2.0)))
}

fn check_size(n: usize) -> Result<()> {
    if n > ORACLE_QUBIT_LIMIT {
        Err(Error::TooLarge {
            what: "dense oracle register",
            size: n,
            limit: ORACLE_QUBIT_LIMIT,
        })
    } else {
        Ok(())
    }
}

/// `Π_e CZ_e`
pub fn hypergraph_unitary(h: &Hypergraph) -> Result<DenseMatrix> {
    let n = h.num_vertices();
    check_size(n)?;
    let mut u = DenseMatrix::identity(1 << n);
    for e in h.edges() {
        u = u.matmul(&generalized_cz(n, e));
    }
    Ok(u)
}

/// `g_i = U X_i U` with `U = Π_e CZ_e`.
pub fn stabilizer(h: &Hypergraph, i: usize) -> Result<DenseMatrix> {
    Ok(stabilizers(h, &[i])?.remove(0))
}

/// `g_i` for each listed vertex, sharing one construction of `U`.
pub fn stabilizers(h: &Hypergraph, vertices: &[usize]) -> Result<Vec<DenseMatrix>> {
    let u = hypergraph_unitary(h)?;
    let n = h.num_vertices();
    vertices
        .iter()
        .map(|&i| {
            if i >= n {
                return Err(Error::VertexOutOfRange { vertex: i, n });
            }
            Ok(u.matmul(&pauli_x(n, i)).matmul(&u))
        })
        .collect()
}

/// `g_i v = U X_i U v` as three dense matrix-vector products, with `u` from
/// [`hypergraph_unitary`].
pub fn apply_stabilizer(u: &DenseMatrix, i: usize, v: &[Complex64]) -> Vec<Complex64> {
    let n = u.dim().trailing_zeros() as usize;
    u.apply(&pauli_x(n, i).apply(&u.apply(v)))
}

pub fn hypergraph_state(h: &Hypergraph) -> Result<Vec<Complex64>> {
    let n = h.num_vertices();
    let u = hypergraph_unitary(h)?;
    let plus = vec![c(((1usize << n) as f64).sqrt().recip()); 1 << n];
    Ok(u.apply(&plus))
}

/// Projector `Π_{i∈class} (I + (−1)^{s_i} g_i)/2` for syndrome bits `s`.
pub fn syndrome_projector(h: &Hypergraph, class: &[usize], syndrome: &[bool]) -> Result<DenseMatrix> {
    let gs = stabilizers(h, class)?;
    Ok(projector_from(&gs, syndrome))
}

fn projector_from(gs: &[DenseMatrix], syndrome: &[bool]) -> DenseMatrix {
    let dim = gs.first().map_or(1, DenseMatrix::dim);
    let mut p = DenseMatrix::identity(dim);
    for (g, &s) in gs.iter().zip(syndrome) {
        let sign = if s { -0.5 } else { 0.5 };
        let factor = DenseMatrix::identity(dim).scale(c(0.5)).add(&g.scale(c(sign)));
        p = p.matmul(&factor);
    }
    p
}

/// Explicit density matrix `Σ_k w_k |ψ_k⟩⟨ψ_k|`.
#[derive(Clone, Debug)]
pub struct DensityMatrix(pub DenseMatrix);

impl DensityMatrix {
    pub fn from_ensemble(members: &[(f64, Vec<Complex64>)]) -> Result<Self> {
        let dim = members
            .first()
            .map(|m| m.1.len())
            .ok_or_else(|| Error::param("empty ensemble"))?;
        check_size(dim.trailing_zeros() as usize)?;
        let mut rho = DenseMatrix::zeros(dim);
        for (w, psi) in members {
            for i in 0..dim {
                for j in 0..dim {
                    let v = rho.get(i, j) + psi[i] * psi[j].conj() * w;
                    rho.set(i, j, v);
                }
            }
        }
        Ok(DensityMatrix(rho))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        DensityMatrix(DenseMatrix::identity(1 << n).scale(c(((1usize << n) as f64).recip())))
    }

    /// `Tr(ρ A)` (real part).
    pub fn expectation(&self, op: &DenseMatrix) -> f64 {
        let d = self.0.dim;
        let mut t = c(0.0);
        for i in 0..d {
            for j in 0..d {
                t += self.0.get(i, j) * op.get(j, i);
            }
        }
        t.re
    }

    /// `Σ_k p_k P_k ρ P_k` for single-qubit Pauli channels on every qubit;
    /// `channel` lists `(probability, operator)` for the non-identity terms.
    pub fn apply_channel(&self, n: usize, channel: &[(f64, [[Complex64; 2]; 2])]) -> DensityMatrix {
        let mut rho = self.0.clone();
        for q in 0..n {
            let stay: f64 = 1.0 - channel.iter().map(|t| t.0).sum::<f64>();
            let mut next = rho.scale(c(stay));
            for (p, op) in channel {
                let m = embed(n, q, &DenseMatrix::from_rows(&[op[0].to_vec(), op[1].to_vec()]));
                next = next.add(&m.matmul(&rho).matmul(&adjoint(&m)).scale(c(*p)));
            }
            rho = next;
        }
        DensityMatrix(rho)
    }
}

/// `Σ_{s ∈ accepted} Tr(ρ Π_s)` by brute force over all syndromes of `class`.
pub fn pass_probability(
    rho: &DensityMatrix,
    h: &Hypergraph,
    class: &[usize],
    accepted: impl Fn(&[bool]) -> bool,
) -> Result<f64> {
    let gs = stabilizers(h, class)?;
    let mut total = 0.0;
    for bits in 0..1usize << class.len() {
        let s: Vec<bool> = (0..class.len()).map(|k| bits >> k & 1 == 1).collect();
        if accepted(&s) {
            total += rho.expectation(&projector_from(&gs, &s));
        }
    }
    Ok(total)
}

fn adjoint(m: &DenseMatrix) -> DenseMatrix {
    let d = m.dim;
    let mut out = DenseMatrix::zeros(d);
    for i in 0..d {
        for j in 0..d {
            out.set(i, j, m.get(j, i).conj());
        }
    }
    out
}

/// Exact outcome distribution when qubits in `x_qubits` are measured in X
/// and the rest in Z: `|⟨x| H_X |ψ⟩|²`.
pub fn outcome_distribution(psi: &[Complex64], x_qubits: &[usize]) -> Vec<f64> {
    let n = psi.len().trailing_zeros() as usize;
    let mut rot = DenseMatrix::identity(1 << n);
    for &q in x_qubits {
        rot = rot.matmul(&hadamard(n, q));
    }
    rot.apply(psi).iter().map(|a| a.norm_sqr()).collect()
}
