//! Weight matrices of torus reductions of the quaternionic sphere: minors,
//! admissibility, cohomology and the isotropy data of the quotient.

mod isotropy;
mod trees;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::json::JsonInt;
use crate::lattice::{bareiss_determinant, smith_normal_form, IntMatrix};
use crate::toric::CohomologyGroup;

pub use isotropy::{
    cs_conditions_check, isotropy_data, kernel_phi, normalize_phi, raw_isotropy_vectors,
    rebase_to_span, IsotropyData,
};
pub use trees::{
    g_omega_order, g_omega_order_bruteforce, g_omega_order_bruteforce_with_limit,
    DEFAULT_BRUTEFORCE_LIMIT,
};

/// A `k x (k+2)` integer matrix of rank `k`. `k = 0` is the empty matrix
/// with two columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightMatrix {
    entries: IntMatrix,
}

impl WeightMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let k = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != k + 2) {
            return Err(Error::InvalidWeights(format!(
                "a weight matrix with {k} rows needs {} columns, found a row of length {}",
                k + 2,
                bad.len()
            )));
        }
        let entries = if k == 0 {
            IntMatrix::zeros(0, 2)
        } else {
            IntMatrix::from_rows(&rows)
        };
        let rank = smith_normal_form(&entries).rank();
        if rank != k {
            return Err(Error::DegenerateMatrix(format!(
                "weight matrix has rank {rank}, expected {k}"
            )));
        }
        Ok(WeightMatrix { entries })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        WeightMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// `[I | a | b]`.
    pub fn identity_augmented(a: &[BigInt], b: &[BigInt]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidWeights(
                "a and b must have the same length".into(),
            ));
        }
        let k = a.len();
        let rows = (0..k)
            .map(|i| {
                let mut row = vec![BigInt::zero(); k + 2];
                row[i] = BigInt::one();
                row[k] = a[i].clone();
                row[k + 1] = b[i].clone();
                row
            })
            .collect();
        WeightMatrix::new(rows)
    }

    /// Single-row matrix `(p1, p2, p3)`.
    pub fn from_triple(p: [i64; 3]) -> Result<Self> {
        WeightMatrix::from_i64(&[&p])
    }

    pub fn k(&self) -> usize {
        self.entries.nrows()
    }

    pub fn n(&self) -> usize {
        self.k() + 2
    }

    pub fn entries(&self) -> &IntMatrix {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.entries.to_rows()
    }

    /// The columns `(a, b)` when the matrix has the shape `[I | a | b]`.
    pub fn normal_form_columns(&self) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
        let k = self.k();
        for i in 0..k {
            for j in 0..k {
                let want = if i == j {
                    BigInt::one()
                } else {
                    BigInt::zero()
                };
                if self.entries[(i, j)] != want {
                    return None;
                }
            }
        }
        Some((self.entries.column(k), self.entries.column(k + 1)))
    }
}

impl Serialize for WeightMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::json::int_matrix::serialize(&self.to_rows(), s)
    }
}

impl<'de> Deserialize<'de> for WeightMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<JsonInt>> = Vec::deserialize(d)?;
        WeightMatrix::new(
            rows.into_iter()
                .map(|r| r.into_iter().map(|x| x.0).collect())
                .collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}

/// Maximal minors keyed by the 0-based deleted column pair `(p, q)`, `p < q`.
/// Kept columns stay in their original order.
pub fn minors_all(w: &WeightMatrix) -> BTreeMap<(usize, usize), BigInt> {
    let n = w.n();
    let mut out = BTreeMap::new();
    for p in 0..n {
        for q in p + 1..n {
            let kept: Vec<usize> = (0..n).filter(|&c| c != p && c != q).collect();
            out.insert(
                (p, q),
                bareiss_determinant(&w.entries.select_columns(&kept)),
            );
        }
    }
    out
}

/// `Δ` for an unordered deleted pair.
pub(crate) fn minor(minors: &BTreeMap<(usize, usize), BigInt>, s: usize, t: usize) -> &BigInt {
    &minors[&(s.min(t), s.max(t))]
}

pub fn is_nondegenerate(w: &WeightMatrix) -> bool {
    minors_all(w).values().all(|m| !m.is_zero())
}

/// gcd of all maximal minors.
pub fn determinantal_divisor(w: &WeightMatrix) -> Result<BigInt> {
    let d = minors_all(w)
        .values()
        .fold(BigInt::zero(), |acc, m| acc.gcd(m));
    if d.is_zero() {
        return Err(Error::DegenerateMatrix("all maximal minors vanish".into()));
    }
    Ok(d)
}

pub fn is_reduced(w: &WeightMatrix) -> bool {
    determinantal_divisor(w).is_ok_and(|d| d.is_one())
}

/// Divides every row by the gcd of its entries.
pub fn reduce_rows(w: &WeightMatrix) -> WeightMatrix {
    let rows = w
        .to_rows()
        .into_iter()
        .map(|r| {
            let g = r.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            r.into_iter().map(|x| x / &g).collect()
        })
        .collect();
    WeightMatrix::new(rows).expect("row scaling keeps the rank")
}

pub(crate) fn require_nondegenerate(w: &WeightMatrix) -> Result<BTreeMap<(usize, usize), BigInt>> {
    let minors = minors_all(w);
    if let Some(((p, q), _)) = minors.iter().find(|(_, m)| m.is_zero()) {
        return Err(Error::DegenerateMatrix(format!(
            "minor deleting columns {} and {} vanishes",
            p + 1,
            q + 1
        )));
    }
    Ok(minors)
}

/// Nondegenerate, and for every column `c` the minors deleting `c` and one
/// other column have gcd equal to the determinantal divisor. Degenerate
/// matrices are not admissible.
pub fn is_admissible(w: &WeightMatrix) -> Result<bool> {
    let minors = minors_all(w);
    let n = w.n();
    let d = minors.values().fold(BigInt::zero(), |acc, m| acc.gcd(m));
    let general = minors.values().all(|m| !m.is_zero())
        && (0..n).all(|c| {
            (0..n)
                .filter(|&x| x != c)
                .fold(BigInt::zero(), |acc, x| acc.gcd(minor(&minors, c, x)))
                == d
        });
    if let Some((a, b)) = w.normal_form_columns() {
        let shortcut = normal_form_admissible(&a, &b);
        if shortcut != general {
            return Err(Error::InternalInconsistency(format!(
                "admissibility of {} is {general} by minors but {shortcut} by the normal-form criterion",
                w.entries
            )));
        }
    }
    Ok(general)
}

fn normal_form_admissible(a: &[BigInt], b: &[BigInt]) -> bool {
    let k = a.len();
    let nonzero = a.iter().chain(b).all(|x| !x.is_zero());
    let coprime = (0..k).all(|i| a[i].gcd(&b[i]).is_one());
    let distinct = (0..k).all(|i| {
        (i + 1..k).all(|j| !((a[i] == a[j] && b[i] == b[j]) || (a[i] == -&a[j] && b[i] == -&b[j])))
    });
    nonzero && coprime && distinct
}

/// Cohomology of the smooth 3-Sasakian quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub b2: usize,
    #[serde(with = "crate::json::int")]
    pub torsion_order: BigInt,
    /// `H^0 .. H^7`.
    pub groups: Vec<CohomologyGroup>,
    pub pi1_trivial: bool,
}

pub fn s_omega_cohomology(w: &WeightMatrix) -> Result<CohomologyTable> {
    if !is_admissible(w)? {
        return Err(Error::NotAdmissible);
    }
    if !is_reduced(w) {
        return Err(Error::NotReduced(format!(
            "determinantal divisor is {}",
            determinantal_divisor(w)?
        )));
    }
    let k = w.k();
    let torsion_order = g_omega_order(w)?;
    let groups = vec![
        CohomologyGroup::free(1),
        CohomologyGroup::free(0),
        CohomologyGroup::free(k),
        CohomologyGroup::free(0),
        CohomologyGroup::torsion(torsion_order.clone()),
        CohomologyGroup::free(k),
        CohomologyGroup::free(0),
        CohomologyGroup::free(1),
    ];
    Ok(CohomologyTable {
        b2: k,
        torsion_order,
        groups,
        pi1_trivial: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> WeightMatrix {
        WeightMatrix::from_i64(&[&[1, 0, 1, 1], &[0, 1, 1, 2]]).unwrap()
    }

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn shape_validation() {
        assert!(matches!(
            WeightMatrix::from_i64(&[&[1, 2]]),
            Err(Error::InvalidWeights(_))
        ));
        assert!(matches!(
            WeightMatrix::from_i64(&[&[1, 0, 1, 1], &[2, 0, 2, 2]]),
            Err(Error::DegenerateMatrix(_))
        ));
        let empty = WeightMatrix::new(vec![]).unwrap();
        assert_eq!((empty.k(), empty.n()), (0, 2));
    }

    #[test]
    fn minors_examples() {
        let m = minors_all(&golden());
        let want = [
            ((0, 1), 1),
            ((0, 2), -1),
            ((0, 3), -1),
            ((1, 2), 2),
            ((1, 3), 1),
            ((2, 3), 1),
        ];
        for (key, v) in want {
            assert_eq!(m[&key], b(v), "deleted pair {key:?}");
        }
        let m = minors_all(&WeightMatrix::from_triple([5, 7, 11]).unwrap());
        assert_eq!(m[&(1, 2)], b(5));
        assert_eq!(m[&(0, 2)], b(7));
        assert_eq!(m[&(0, 1)], b(11));
        let m = minors_all(&WeightMatrix::new(vec![]).unwrap());
        assert_eq!(m.len(), 1);
        assert_eq!(m[&(0, 1)], b(1));
    }

    #[test]
    fn degeneracy_and_reduction() {
        let w = golden();
        assert!(is_nondegenerate(&w));
        assert_eq!(determinantal_divisor(&w).unwrap(), b(1));
        assert!(is_reduced(&w));
        let degenerate = WeightMatrix::from_i64(&[&[1, 0, 0, 1], &[0, 1, 1, 2]]).unwrap();
        assert!(!is_nondegenerate(&degenerate));
        assert!(!is_admissible(&degenerate).unwrap());
        let scaled = WeightMatrix::from_i64(&[&[2, 0, 2, 2], &[0, 2, 2, 4]]).unwrap();
        assert_eq!(determinantal_divisor(&scaled).unwrap(), b(4));
        assert!(!is_reduced(&scaled));
        assert_eq!(reduce_rows(&scaled), w);
    }

    #[test]
    fn admissibility_examples() {
        assert!(is_admissible(&golden()).unwrap());
        assert!(!is_admissible(&WeightMatrix::from_triple([2, 2, 1]).unwrap()).unwrap());
        assert!(is_admissible(&WeightMatrix::from_triple([3, 1, 1]).unwrap()).unwrap());
        let repeated = WeightMatrix::identity_augmented(&[b(1), b(1)], &[b(1), b(1)]).unwrap();
        assert!(!is_admissible(&repeated).unwrap());
        let opposite = WeightMatrix::identity_augmented(&[b(2), b(-2)], &[b(3), b(-3)]).unwrap();
        assert!(!is_admissible(&opposite).unwrap());
        assert!(is_admissible(&WeightMatrix::new(vec![]).unwrap()).unwrap());
    }

    #[test]
    fn normal_form_agrees_with_minors() {
        // exhaustive over small [I | a | b] with k = 2; a mismatch is an error
        let vals: Vec<i64> = (-3..=3).collect();
        for &a1 in &vals {
            for &a2 in &vals {
                for &b1 in &vals {
                    for &b2 in &vals {
                        let Ok(w) =
                            WeightMatrix::identity_augmented(&[b(a1), b(a2)], &[b(b1), b(b2)])
                        else {
                            continue;
                        };
                        is_admissible(&w).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn cohomology_examples() {
        let t = s_omega_cohomology(&golden()).unwrap();
        assert_eq!((t.b2, t.torsion_order.clone()), (2, b(24)));
        assert_eq!(t.groups[4], CohomologyGroup::torsion(b(24)));
        assert_eq!(t.groups[2], CohomologyGroup::free(2));
        assert_eq!(t.groups[3], CohomologyGroup::free(0));
        let t = s_omega_cohomology(&WeightMatrix::from_triple([1, 1, 1]).unwrap()).unwrap();
        assert_eq!((t.b2, t.torsion_order), (1, b(3)));
        let t = s_omega_cohomology(&WeightMatrix::from_triple([3, 1, 1]).unwrap()).unwrap();
        assert_eq!((t.b2, t.torsion_order), (1, b(7)));
        assert_eq!(
            s_omega_cohomology(&WeightMatrix::from_triple([2, 2, 1]).unwrap()),
            Err(Error::NotAdmissible)
        );
    }

    #[test]
    fn serde_round_trip() {
        let w = golden();
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, "[[1,0,1,1],[0,1,1,2]]");
        assert_eq!(serde_json::from_str::<WeightMatrix>(&s).unwrap(), w);
        let e: WeightMatrix = serde_json::from_str("[]").unwrap();
        assert_eq!(e.k(), 0);
        assert!(serde_json::from_str::<WeightMatrix>("[[1,2]]").is_err());
    }
}
