//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use hgverify::hypergraph::Hypergraph;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

/// Random hypergraph with `n` vertices and edges of size 2..=`max_edge`.
pub fn random_hypergraph<R: Rng>(rng: &mut R, n: usize, max_edge: usize, edges: usize) -> Hypergraph {
    let mut h = Hypergraph::new(n);
    let verts: Vec<usize> = (0..n).collect();
    for _ in 0..edges {
        let size = rng.gen_range(2..=max_edge.min(n));
        let e: Vec<usize> = verts.choose_multiple(rng, size).copied().collect();
        h.toggle_edge(e).unwrap();
    }
    h
}

pub fn random_amplitudes<R: Rng>(rng: &mut R, n: usize) -> Vec<Complex64> {
    let raw: Vec<Complex64> = (0..1usize << n)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    raw.into_iter().map(|a| a / norm).collect()
}

/// Two 3-edges sharing the pair {1, 2}; chromatic number 3.
pub fn twin_triangles() -> Hypergraph {
    Hypergraph::parse("4\n0 1 2\n1 2 3").unwrap()
}

/// A 9-vertex 3-uniform chain with chromatic number 3.
pub fn chain9() -> Hypergraph {
    Hypergraph::parse("9\n0 1 2\n2 3 4\n4 5 6\n6 7 8\n1 3 5\n3 5 7").unwrap()
}
