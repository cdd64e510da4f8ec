use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{cone_form, fano_index_with_witness, is_fano, AugmentedFan, SupportFunction};
use crate::error::{Error, Result};
use crate::lattice::{cross, lattice_span_index, smith_normal_form, IntMatrix, LatVec, RatVec};

/// Local groups of the orbifold surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbifoldReport {
    /// `|det(p_i, p_{i+1})|`, the order of the local group at each fixed point.
    #[serde(with = "crate::json::int_vec")]
    pub cone_orders: Vec<BigInt>,
    /// `a` with `n(rho) = a * primitive`.
    #[serde(with = "crate::json::int_vec")]
    pub ray_multiplicities: Vec<BigInt>,
    /// `Ord(X)`, the lcm of all local group orders.
    #[serde(with = "crate::json::int")]
    pub ord_x: BigInt,
}

pub fn orbifold_report(fan: &AugmentedFan) -> OrbifoldReport {
    let n = fan.num_rays();
    let cone_orders: Vec<BigInt> = (0..n)
        .map(|i| {
            let (p, q) = fan.cone(i);
            cross(p, q).abs()
        })
        .collect();
    let ray_multiplicities = fan.marks().iter().map(LatVec::content).collect();
    let ord_x = cone_orders.iter().fold(BigInt::one(), |acc, c| acc.lcm(c));
    OrbifoldReport {
        cone_orders,
        ray_multiplicities,
        ord_x,
    }
}

/// `pi_1^orb(X)` is trivial exactly when the marks span `N`.
pub fn pi1_orb_trivial(fan: &AugmentedFan) -> bool {
    lattice_span_index(fan.marks()).is_one()
}

/// Representatives of `Z^2 / (Z p + Z q)`, zero first.
pub fn coset_representatives(p: &LatVec, q: &LatVec) -> Vec<LatVec> {
    let snf = smith_normal_form(&IntMatrix::from_columns(&[p.clone(), q.clone()]));
    let d1 = snf.d[(0, 0)]
        .to_u64()
        .expect("cone of rank 2 with small index");
    let d2 = snf.d[(1, 1)]
        .to_u64()
        .expect("cone of rank 2 with small index");
    let col = |j: usize| LatVec::new(snf.u_inv[(0, j)].clone(), snf.u_inv[(1, j)].clone());
    let (e1, e2) = (col(0), col(1));
    let mut reps = Vec::with_capacity((d1 * d2) as usize);
    for c1 in 0..d1 {
        for c2 in 0..d2 {
            reps.push(&e1.scale(&BigInt::from(c1)) + &e2.scale(&BigInt::from(c2)));
        }
    }
    reps
}

fn all_witnesses(fan: &AugmentedFan, d: &BigInt) -> Vec<LatVec> {
    let dm = d.to_i64().expect("Fano index fits in i64");
    let mut out = Vec::new();
    for a in 0..dm {
        for b in 0..dm {
            let f = LatVec::new(a, b);
            if fan
                .marks()
                .iter()
                .all(|n| (f.dot(n) - BigInt::one()).is_multiple_of(d))
            {
                out.push(f);
            }
        }
    }
    out
}

/// The local group `Z^2 / (Z p + Z q)` injects into the circle through the
/// character `l` exactly when it is cyclic and `l` has full order on a
/// generator.
fn cone_injective(p: &LatVec, q: &LatVec, character: &RatVec) -> bool {
    let snf = smith_normal_form(&IntMatrix::from_columns(&[p.clone(), q.clone()]));
    if !snf.d[(0, 0)].is_one() {
        return false;
    }
    let order = &snf.d[(1, 1)];
    let generator = LatVec::new(snf.u_inv[(0, 1)].clone(), snf.u_inv[(1, 1)].clone());
    character.dot_lat(&generator).denom() == order
}

fn cone_characters(fan: &AugmentedFan, d: &BigInt, witness: &LatVec) -> Vec<RatVec> {
    let ones = SupportFunction::new(vec![BigInt::one(); fan.num_rays()]);
    let dq = BigRational::from_integer(d.clone());
    let w = witness.to_rat();
    (0..fan.num_rays())
        .map(|i| {
            let shifted = cone_form(fan, &ones, i).sub(&w);
            RatVec::new(&shifted.x / &dq, &shifted.y / &dq)
        })
        .collect()
}

fn seifert_verdict(fan: &AugmentedFan, d: &BigInt, witness: &LatVec) -> bool {
    cone_characters(fan, d, witness)
        .iter()
        .enumerate()
        .all(|(i, chi)| {
            let (p, q) = fan.cone(i);
            cone_injective(p, q, chi)
        })
}

/// Whether the circle V-bundle associated with the `d`-th root of the
/// anticanonical bundle (`d` = Fano index) has smooth total space: each local
/// group must act faithfully on the fibre.
///
/// The verdict is computed for every root (every residue class of witness)
/// and must agree.
pub fn seifert_total_space_smooth(fan: &AugmentedFan) -> Result<bool> {
    let fi = fano_index_with_witness(fan)?;
    let witnesses = all_witnesses(fan, &fi.index);
    let verdicts: Vec<bool> = witnesses
        .iter()
        .map(|w| seifert_verdict(fan, &fi.index, w))
        .collect();
    match verdicts.split_first() {
        None => Err(Error::InternalInconsistency(
            "no index witness found".into(),
        )),
        Some((first, rest)) if rest.iter().all(|v| v == first) => Ok(*first),
        Some(_) => Err(Error::InternalInconsistency(format!(
            "Seifert smoothness depends on the choice of root: witnesses {:?} gave {:?}",
            witnesses
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>(),
            verdicts
        ))),
    }
}

/// `Z^rank` plus a finite group of the given order (1 means torsion-free).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyGroup {
    pub rank: usize,
    #[serde(with = "crate::json::int")]
    pub torsion_order: BigInt,
}

impl CohomologyGroup {
    pub fn free(rank: usize) -> Self {
        CohomologyGroup {
            rank,
            torsion_order: BigInt::one(),
        }
    }

    pub fn torsion(order: BigInt) -> Self {
        CohomologyGroup {
            rank: 0,
            torsion_order: order,
        }
    }
}

impl fmt::Display for CohomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let free = match self.rank {
            0 => None,
            1 => Some("Z".to_string()),
            r => Some(format!("Z^{r}")),
        };
        let tors = (!self.torsion_order.is_one()).then(|| format!("T[{}]", self.torsion_order));
        match (free, tors) {
            (None, None) => write!(f, "0"),
            (Some(a), None) => write!(f, "{a}"),
            (None, Some(b)) => write!(f, "{b}"),
            (Some(a), Some(b)) => write!(f, "{a}+{b}"),
        }
    }
}

/// Diffeomorphism type `#m(S^2 x S^3)` of a smooth simply connected spin
/// 5-manifold with torsion-free `H_2` of rank `m`; `S^5` for `m = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Diffeotype {
    pub m: usize,
}

impl Diffeotype {
    pub fn ascii(&self) -> String {
        if self.m == 0 {
            "S^5".into()
        } else {
            format!("#{}(S^2xS^3)", self.m)
        }
    }
}

impl fmt::Display for Diffeotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 0 {
            write!(f, "S⁵")
        } else {
            write!(f, "#{}(S²×S³)", self.m)
        }
    }
}

impl FromStr for Diffeotype {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "S^5" || s == "S⁵" {
            return Ok(Diffeotype { m: 0 });
        }
        let inner = s
            .strip_prefix('#')
            .and_then(|r| {
                r.strip_suffix("(S^2xS^3)")
                    .or_else(|| r.strip_suffix("(S²×S³)"))
            })
            .ok_or_else(|| Error::InvalidParameter(format!("not a diffeotype: {s:?}")))?;
        let m = inner
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("not a diffeotype: {s:?}")))?;
        Ok(Diffeotype { m })
    }
}

impl Serialize for Diffeotype {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.ascii())
    }
}

impl<'de> Deserialize<'de> for Diffeotype {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Integral cohomology `H^0 .. H^5` of the Sasakian-Einstein circle bundle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct M5Homology {
    pub b2_x: usize,
    pub m: usize,
    pub cohomology: Vec<CohomologyGroup>,
    pub diffeotype: Diffeotype,
}

/// Cohomology and diffeotype of the smooth, simply connected total space.
/// Requires Fano, trivial orbifold fundamental group and a smooth Seifert
/// bundle.
pub fn homology_of_m(fan: &AugmentedFan) -> Result<M5Homology> {
    if !is_fano(fan) {
        return Err(Error::PreconditionFailed("is_fano".into()));
    }
    if !pi1_orb_trivial(fan) {
        return Err(Error::PreconditionFailed("pi1_orb_trivial".into()));
    }
    if !seifert_total_space_smooth(fan)? {
        return Err(Error::PreconditionFailed(
            "seifert_total_space_smooth".into(),
        ));
    }
    let b2_x = fan.num_rays() - 2;
    let m = b2_x - 1;
    // torsion parameter d = 1 and all boundary curves are rational
    let cohomology = vec![
        CohomologyGroup::free(1),
        CohomologyGroup::free(0),
        CohomologyGroup::free(m),
        CohomologyGroup::free(m),
        CohomologyGroup::free(0),
        CohomologyGroup::free(1),
    ];
    Ok(M5Homology {
        b2_x,
        m,
        cohomology,
        diffeotype: Diffeotype { m },
    })
}

/// Orbifold invariants of the weighted projective plane `P(a0, a1, a2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WpsReport {
    #[serde(with = "crate::json::rational")]
    pub c1_sq: BigRational,
    #[serde(with = "crate::json::rational")]
    pub chi_orb: BigRational,
    #[serde(with = "crate::json::rational")]
    pub tau_orb: BigRational,
    pub admits_ke: bool,
}

/// Miyaoka-Yau obstruction: a Kähler-Einstein orbifold metric needs
/// `chi_orb >= 3 tau_orb`, which for weighted planes holds only at equal
/// weights.
pub fn wps_ke_obstruction(
    a0: impl Into<BigInt>,
    a1: impl Into<BigInt>,
    a2: impl Into<BigInt>,
) -> Result<WpsReport> {
    let a = [a0.into(), a1.into(), a2.into()];
    if a.iter().any(|w| !w.is_positive()) {
        return Err(Error::InvalidWeights(format!(
            "weights must be positive: ({}, {}, {})",
            a[0], a[1], a[2]
        )));
    }
    if !a[0].gcd(&a[1]).gcd(&a[2]).is_one() {
        return Err(Error::InvalidWeights(format!(
            "weights ({}, {}, {}) are not coprime",
            a[0], a[1], a[2]
        )));
    }
    let prod = &a[0] * &a[1] * &a[2];
    let q = |n: BigInt| BigRational::new(n, prod.clone());
    let sum: BigInt = a.iter().sum();
    let c1_sq = q(&sum * &sum);
    let pair_sum = &a[1] * &a[2] + &a[0] * &a[2] + &a[0] * &a[1];
    let square_sum: BigInt = a.iter().map(|w| w * w).sum();
    let chi_orb = q(pair_sum);
    let tau_orb = q(square_sum) / BigRational::from_integer(BigInt::from(3));
    let three_tau = &tau_orb * BigRational::from_integer(BigInt::from(3));
    let admits_ke = chi_orb >= three_tau;
    Ok(WpsReport {
        c1_sq,
        chi_orb,
        tau_orb,
        admits_ke,
    })
}
