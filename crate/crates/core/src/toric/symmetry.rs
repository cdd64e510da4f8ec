use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{is_fano, AugmentedFan};
use crate::lattice::{cross, lattice_span_index, LatVec, UnimodularMap};

/// `W_0`: lattice automorphisms permuting the marks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryGroup {
    pub elements: Vec<UnimodularMap>,
}

impl SymmetryGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &UnimodularMap) -> bool {
        self.elements.contains(g)
    }

    /// Only the origin is fixed by every element.
    pub fn fixes_only_origin(&self) -> bool {
        let rows: Vec<LatVec> = self
            .elements
            .iter()
            .flat_map(|g| {
                [
                    LatVec::new(&g.a - 1, g.b.clone()),
                    LatVec::new(g.c.clone(), &g.d - 1),
                ]
            })
            .collect();
        !lattice_span_index(&rows).is_zero()
    }
}

/// The map with `p0 -> q0`, `p1 -> q1` if it is integral and unimodular.
fn map_pair(p0: &LatVec, p1: &LatVec, q0: &LatVec, q1: &LatVec) -> Option<UnimodularMap> {
    // g = Q P^{-1},  P^{-1} = adj(P) / det(P)
    let det = cross(p0, p1);
    if det.is_zero() {
        return None;
    }
    let entry = |a: BigInt| -> Option<BigInt> { a.is_multiple_of(&det).then(|| a / &det) };
    let a = entry(&q0.x * &p1.y - &q1.x * &p0.y)?;
    let b = entry(&q1.x * &p0.x - &q0.x * &p1.x)?;
    let c = entry(&q0.y * &p1.y - &q1.y * &p0.y)?;
    let d = entry(&q1.y * &p0.x - &q0.y * &p1.x)?;
    UnimodularMap::new(a, b, c, d).ok()
}

fn sorted(v: &[LatVec]) -> Vec<LatVec> {
    let mut s = v.to_vec();
    s.sort();
    s
}

/// All `g` in `GL(2,Z)` with `g(from) = to` as sets, where both are
/// counterclockwise cyclic vertex lists of fans or polygons. Any such `g`
/// sends the adjacent pair `(from[0], from[1])` to an adjacent pair of `to`,
/// in one orientation or the other.
fn equivalences(from: &[LatVec], to: &[LatVec]) -> Vec<UnimodularMap> {
    let n = from.len();
    if n != to.len() || n < 2 {
        return Vec::new();
    }
    let target = sorted(to);
    let mut out = Vec::new();
    for j in 0..n {
        let (q, r) = (&to[j], &to[(j + 1) % n]);
        for (q0, q1) in [(q, r), (r, q)] {
            if let Some(g) = map_pair(&from[0], &from[1], q0, q1) {
                let image: Vec<LatVec> = from.iter().map(|v| g.apply(v)).collect();
                if sorted(&image) == target {
                    out.push(g);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

pub fn symmetry_group(fan: &AugmentedFan) -> SymmetryGroup {
    SymmetryGroup {
        elements: equivalences(fan.marks(), fan.marks()),
    }
}

/// A lattice automorphism carrying the first cyclic vertex list onto the
/// second, if one exists.
pub fn equivalence(from: &[LatVec], to: &[LatVec]) -> Option<UnimodularMap> {
    equivalences(from, to).into_iter().next()
}

pub fn is_symmetric(fan: &AugmentedFan) -> bool {
    symmetry_group(fan).fixes_only_origin()
}

pub fn is_special_symmetric(fan: &AugmentedFan) -> bool {
    symmetry_group(fan).contains(&UnimodularMap::negation())
}

/// Fano and symmetric: the combinatorial criterion for a torus-invariant
/// Kähler-Einstein metric.
pub fn admits_kahler_einstein(fan: &AugmentedFan) -> bool {
    is_fano(fan) && is_symmetric(fan)
}
