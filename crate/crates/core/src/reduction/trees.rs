use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{minor, require_nondegenerate, WeightMatrix};
use crate::error::{Error, Result};
use crate::lattice::{bareiss_determinant, IntMatrix};

/// Largest `k` the tree enumeration accepts unless told otherwise.
pub const DEFAULT_BRUTEFORCE_LIMIT: usize = 6;

/// Order of the torsion group `H^4`: the sum over spanning trees of the
/// complete graph on the `k+2` columns of the product of `|Δ_{s,t}|` over
/// tree edges. Computed as a cofactor of the weighted Laplacian.
pub fn g_omega_order(w: &WeightMatrix) -> Result<BigInt> {
    let minors = require_nondegenerate(w)?;
    let n = w.n();
    let mut lap = IntMatrix::zeros(n - 1, n - 1);
    for s in 0..n - 1 {
        let mut diag = BigInt::zero();
        for t in 0..n {
            if t == s {
                continue;
            }
            let weight = minor(&minors, s, t).abs();
            if t < n - 1 {
                lap[(s, t)] = -weight.clone();
            }
            diag += weight;
        }
        lap[(s, s)] = diag;
    }
    Ok(bareiss_determinant(&lap))
}

pub fn g_omega_order_bruteforce(w: &WeightMatrix) -> Result<BigInt> {
    g_omega_order_bruteforce_with_limit(w, DEFAULT_BRUTEFORCE_LIMIT)
}

/// Enumerates all `(k+2)^k` labelled trees by Prüfer sequence.
pub fn g_omega_order_bruteforce_with_limit(w: &WeightMatrix, limit: usize) -> Result<BigInt> {
    let k = w.k();
    if k > limit {
        return Err(Error::TooLarge { k, limit });
    }
    let minors = require_nondegenerate(w)?;
    let n = w.n();
    let weights: BTreeMap<(usize, usize), BigInt> =
        minors.iter().map(|(key, m)| (*key, m.abs())).collect();
    let mut total = BigInt::zero();
    let mut seq = vec![0usize; k];
    loop {
        total += prufer_edges(&seq, n)
            .iter()
            .fold(BigInt::one(), |acc, &(s, t)| acc * minor(&weights, s, t));
        // odometer increment
        let mut i = 0;
        while i < k {
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
        if i == k {
            return Ok(total);
        }
    }
}

fn prufer_edges(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n)
            .find(|&v| degree[v] == 1)
            .expect("a leaf always exists");
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}
