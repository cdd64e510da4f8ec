//! Augmented fans of toric orbifold surfaces and their combinatorial
//! invariants: support functions, the Fano condition and index, lattice
//! symmetry, local groups and the smoothness of the anticanonical Seifert
//! bundle.

mod orbifold;
mod symmetry;

pub use orbifold::{
    coset_representatives, homology_of_m, orbifold_report, pi1_orb_trivial,
    seifert_total_space_smooth, wps_ke_obstruction, CohomologyGroup, Diffeotype, M5Homology,
    OrbifoldReport, WpsReport,
};
pub use symmetry::{
    admits_kahler_einstein, equivalence, is_special_symmetric, is_symmetric, symmetry_group,
    SymmetryGroup,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{
    convex_hull, cross, half_plane_intersection, smith_normal_form, ConvexLatticePolygon,
    HalfPlane, IntMatrix, LatVec, RatVec, UnimodularMap,
};

/// A complete fan in `Z^2` with a marked lattice point on each ray.
///
/// Marks are stored counterclockwise starting from the lexicographically
/// smallest one; the 2-cones are spanned by cyclically adjacent marks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<LatVec>", into = "Vec<LatVec>")]
pub struct AugmentedFan {
    marks: Vec<LatVec>,
}

impl TryFrom<Vec<LatVec>> for AugmentedFan {
    type Error = Error;
    fn try_from(marks: Vec<LatVec>) -> Result<Self> {
        AugmentedFan::new(marks)
    }
}

impl From<AugmentedFan> for Vec<LatVec> {
    fn from(f: AugmentedFan) -> Self {
        f.marks
    }
}

impl AugmentedFan {
    /// Marks in counterclockwise order (any starting point).
    pub fn new(marks: Vec<LatVec>) -> Result<Self> {
        let n = marks.len();
        if n < 3 {
            return Err(Error::InvalidFan(format!(
                "a complete fan needs at least 3 rays, got {n}"
            )));
        }
        if let Some(z) = marks.iter().find(|m| m.is_zero()) {
            return Err(Error::InvalidFan(format!("mark {z} is the origin")));
        }
        for i in 0..n {
            let (a, b) = (&marks[i], &marks[(i + 1) % n]);
            if !cross(a, b).is_positive() {
                return Err(Error::InvalidFan(format!(
                    "consecutive marks {a}, {b} are not positively ordered"
                )));
            }
        }
        let wraps = (0..n)
            .filter(|&i| marks[(i + 1) % n].angle_cmp(&marks[i]) != std::cmp::Ordering::Greater)
            .count();
        if wraps != 1 {
            return Err(Error::InvalidFan(format!(
                "rays wind {wraps} times around the origin"
            )));
        }
        let mut marks = marks;
        let start = (0..n).min_by(|&i, &j| marks[i].cmp(&marks[j])).unwrap();
        marks.rotate_left(start);
        Ok(AugmentedFan { marks })
    }

    /// Marks in any order; they are sorted by angle first.
    pub fn from_marks_unordered(marks: &[LatVec]) -> Result<Self> {
        let mut sorted = marks.to_vec();
        if sorted.iter().any(LatVec::is_zero) {
            return Err(Error::InvalidFan("a mark is the origin".into()));
        }
        sorted.sort_by(|a, b| a.angle_cmp(b));
        AugmentedFan::new(sorted)
    }

    pub fn from_pairs(pairs: &[(i64, i64)]) -> Result<Self> {
        let marks: Vec<LatVec> = pairs.iter().map(|&(x, y)| LatVec::new(x, y)).collect();
        AugmentedFan::from_marks_unordered(&marks)
    }

    pub fn marks(&self) -> &[LatVec] {
        &self.marks
    }

    pub fn num_rays(&self) -> usize {
        self.marks.len()
    }

    /// The two marks spanning the `i`-th 2-cone.
    pub fn cone(&self, i: usize) -> (&LatVec, &LatVec) {
        let n = self.marks.len();
        (&self.marks[i % n], &self.marks[(i + 1) % n])
    }

    pub fn map(&self, g: &UnimodularMap) -> AugmentedFan {
        let image: Vec<LatVec> = self.marks.iter().map(|m| g.apply(m)).collect();
        AugmentedFan::from_marks_unordered(&image).expect("automorphisms map fans to fans")
    }

    /// The polygon with the marks as vertices, when they are in convex position.
    pub fn polygon(&self) -> Result<ConvexLatticePolygon> {
        ConvexLatticePolygon::new(self.marks.clone()).map_err(|_| Error::NotFano)
    }
}

/// Integer values `h(n(rho))` of a support function at the marks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SupportFunction {
    #[serde(with = "crate::json::int_vec")]
    pub values: Vec<BigInt>,
}

impl SupportFunction {
    pub fn new(values: Vec<BigInt>) -> Self {
        SupportFunction { values }
    }

    pub fn from_i64(values: &[i64]) -> Self {
        SupportFunction::new(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// `-k`: the value -1 at every mark.
    pub fn anticanonical(fan: &AugmentedFan) -> Self {
        SupportFunction::new(vec![-BigInt::one(); fan.num_rays()])
    }

    fn check_len(&self, fan: &AugmentedFan) -> Result<()> {
        if self.values.len() != fan.num_rays() {
            return Err(Error::InvalidParameter(format!(
                "support function has {} values for {} rays",
                self.values.len(),
                fan.num_rays()
            )));
        }
        Ok(())
    }
}

pub fn fan_from_polygon(p: &ConvexLatticePolygon) -> Result<AugmentedFan> {
    if !p.contains_origin_strictly() {
        return Err(Error::OriginNotInterior);
    }
    AugmentedFan::new(p.vertices().to_vec())
}

fn facet_planes(fan: &AugmentedFan, h: &SupportFunction) -> Vec<HalfPlane> {
    fan.marks()
        .iter()
        .zip(&h.values)
        .map(|(n, v)| {
            HalfPlane::new(n.clone(), BigRational::from_integer(v.clone()))
                .expect("marks are nonzero")
        })
        .collect()
}

/// Vertices of `{ m : <m, n(rho)> >= h(n(rho)) }`, possibly empty.
pub fn sigma_polytope(fan: &AugmentedFan, h: &SupportFunction) -> Result<Vec<RatVec>> {
    h.check_len(fan)?;
    half_plane_intersection(&facet_planes(fan, h)).map_err(|e| match e {
        Error::UnboundedRegion => {
            Error::InternalInconsistency("support polytope of a complete fan is unbounded".into())
        }
        other => other,
    })
}

/// The linear form agreeing with `h` on the two marks of cone `i`.
pub fn cone_form(fan: &AugmentedFan, h: &SupportFunction, i: usize) -> RatVec {
    let n = fan.num_rays();
    let (p, q) = fan.cone(i);
    let (hp, hq) = (&h.values[i % n], &h.values[(i + 1) % n]);
    let det = cross(p, q);
    RatVec::new(
        BigRational::new(hp * &q.y - hq * &p.y, det.clone()),
        BigRational::new(hq * &p.x - hp * &q.x, det),
    )
}

/// Strict upper convexity: every cone form is a vertex of `Sigma_h` at which
/// exactly the two facets of its own cone are active.
pub fn is_strictly_upper_convex(fan: &AugmentedFan, h: &SupportFunction) -> Result<bool> {
    h.check_len(fan)?;
    let n = fan.num_rays();
    for i in 0..n {
        let l = cone_form(fan, h, i);
        for j in 0..n {
            if j == i || j == (i + 1) % n {
                continue;
            }
            let slack = l.dot_lat(&fan.marks()[j]) - BigRational::from_integer(h.values[j].clone());
            if !slack.is_positive() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Marks in strictly convex position. Marks lying on the hull boundary but
/// not at a corner do not count.
pub fn is_fano(fan: &AugmentedFan) -> bool {
    let pts: Vec<RatVec> = fan.marks().iter().map(LatVec::to_rat).collect();
    convex_hull(&pts).is_ok_and(|h| h.len() == fan.num_rays())
}

/// The Fano index together with a witness `f` in `M` satisfying
/// `<f, n(rho)> = 1 (mod index)` for every mark, reduced into `[0, index)^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanoIndex {
    #[serde(with = "crate::json::int")]
    pub index: BigInt,
    pub witness: LatVec,
}

fn divisors_desc(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            small.push(d.clone());
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
        }
        d += 1;
    }
    large.extend(small.into_iter().rev());
    large
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let (_, s, _) = crate::lattice::ext_gcd(a, m);
    s.mod_floor(m)
}

/// Largest `m` such that `-k` has an `m`-th root modulo `M`: solvability of
/// `A f = 1 (mod m)` for the matrix `A` of marks, read off its Smith form.
pub fn fano_index_with_witness(fan: &AugmentedFan) -> Result<FanoIndex> {
    if !is_fano(fan) {
        return Err(Error::NotFano);
    }
    let r = fan.num_rays();
    let rows: Vec<Vec<BigInt>> = fan
        .marks()
        .iter()
        .map(|m| vec![m.x.clone(), m.y.clone()])
        .collect();
    let a = IntMatrix::from_rows(&rows);
    let snf = smith_normal_form(&a);
    let ones = IntMatrix::from_rows(&vec![vec![BigInt::one()]; r]);
    let c = &snf.u * &ones;
    let d1 = snf.d[(0, 0)].clone();
    let d2 = snf.d[(1, 1)].clone();
    if d2.is_zero() {
        return Err(Error::InvalidFan("marks do not span the plane".into()));
    }
    let m0 = (2..r).fold(BigInt::zero(), |g, i| g.gcd(&c[(i, 0)]));
    if m0.is_zero() {
        return Err(Error::InternalInconsistency(
            "anticanonical class is divisible by every integer".into(),
        ));
    }
    let solvable = |m: &BigInt, d: &BigInt, ci: &BigInt| ci.is_multiple_of(&d.gcd(m));
    let index = divisors_desc(&m0)
        .into_iter()
        .find(|m| solvable(m, &d1, &c[(0, 0)]) && solvable(m, &d2, &c[(1, 0)]))
        .expect("m = 1 is always solvable");
    let solve = |d: &BigInt, ci: &BigInt| -> BigInt {
        let e = d.gcd(&index);
        let modulus = &index / &e;
        if modulus.is_one() {
            return BigInt::zero();
        }
        ((ci / &e) * mod_inverse(&(d / &e), &modulus)).mod_floor(&modulus)
    };
    let g = IntMatrix::from_rows(&[vec![solve(&d1, &c[(0, 0)])], vec![solve(&d2, &c[(1, 0)])]]);
    let f = &snf.v * &g;
    let witness = LatVec::new(f[(0, 0)].mod_floor(&index), f[(1, 0)].mod_floor(&index));
    for m in fan.marks() {
        if !(witness.dot(m) - BigInt::one()).is_multiple_of(&index) {
            return Err(Error::InternalInconsistency(format!(
                "index witness {witness} fails at mark {m} mod {index}"
            )));
        }
    }
    Ok(FanoIndex { index, witness })
}

pub fn fano_index(fan: &AugmentedFan) -> Result<BigInt> {
    fano_index_with_witness(fan).map(|fi| fi.index)
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn rv(x: i64, y: i64) -> RatVec {
        RatVec::from_ints(x, y)
    }

    #[test]
    fn fan_validation() {
        assert!(AugmentedFan::from_pairs(&[(1, 0), (0, 1)]).is_err());
        assert!(AugmentedFan::from_pairs(&[(1, 0), (0, 1), (0, 0)]).is_err());
        // all marks in a half-plane: not complete
        assert!(AugmentedFan::from_pairs(&[(1, 0), (1, 1), (0, 1)]).is_err());
        // a cycle winding twice
        let twice: Vec<LatVec> = [(1, 0), (-1, 1), (0, -1), (1, 1), (-1, 0), (1, -2)]
            .iter()
            .map(|&(x, y)| LatVec::new(x, y))
            .collect();
        assert!(matches!(
            AugmentedFan::new(twice),
            Err(Error::InvalidFan(_))
        ));
    }

    #[test]
    fn fan_from_polygon_examples() {
        let tri = ConvexLatticePolygon::from_pairs(&[(0, 1), (1, 0), (-1, -1)]).unwrap();
        assert_eq!(fan_from_polygon(&tri).unwrap(), cp2());
        let oct = octagon().polygon().unwrap();
        assert_eq!(fan_from_polygon(&oct).unwrap().num_rays(), 8);
        let sq = ConvexLatticePolygon::from_pairs(&[(2, 0), (0, 2), (-2, 0), (0, -2)]).unwrap();
        let f = fan_from_polygon(&sq).unwrap();
        assert!(f.marks().iter().all(|m| m.content() == BigInt::from(2)));
        let off = ConvexLatticePolygon::from_pairs(&[(1, 1), (2, 1), (1, 2)]).unwrap();
        assert_eq!(fan_from_polygon(&off), Err(Error::OriginNotInterior));
    }

    #[test]
    fn sigma_examples() {
        let f = cp2();
        assert_eq!(
            sigma_polytope(&f, &SupportFunction::anticanonical(&f)).unwrap(),
            vec![rv(-1, -1), rv(2, -1), rv(-1, 2)]
        );
        let s = square();
        assert_eq!(
            sigma_polytope(&s, &SupportFunction::anticanonical(&s)).unwrap(),
            vec![rv(-1, -1), rv(1, -1), rv(1, 1), rv(-1, 1)]
        );
        assert!(sigma_polytope(&f, &SupportFunction::from_i64(&[1, 1, 1]))
            .unwrap()
            .is_empty());
        assert!(sigma_polytope(&f, &SupportFunction::from_i64(&[1, 1])).is_err());
    }

    #[test]
    fn upper_convexity_examples() {
        let f = cp2();
        assert!(is_strictly_upper_convex(&f, &SupportFunction::anticanonical(&f)).unwrap());
        let b = bent();
        assert!(!is_strictly_upper_convex(&b, &SupportFunction::anticanonical(&b)).unwrap());
        let s = square();
        assert!(!is_strictly_upper_convex(&s, &SupportFunction::from_i64(&[0, 0, 0, 0])).unwrap());
    }

    /// Brute-force concavity on a lattice sample: h(n + n') >= h(n) + h(n'),
    /// with h evaluated as the minimum of the cone forms, and the cone forms
    /// pairwise distinct.
    fn brute_upper_convex(fan: &AugmentedFan, h: &SupportFunction) -> bool {
        let n = fan.num_rays();
        let forms: Vec<RatVec> = (0..n).map(|i| cone_form(fan, h, i)).collect();
        let eval = |v: &LatVec| -> BigRational {
            // the cone containing v determines the value
            for (i, form) in forms.iter().enumerate() {
                let (p, q) = fan.cone(i);
                if !cross(p, v).is_negative() && !cross(v, q).is_negative() {
                    return form.dot_lat(v);
                }
            }
            unreachable!()
        };
        for i in 0..n {
            for j in 0..n {
                if i != j && forms[i] == forms[j] {
                    return false;
                }
            }
        }
        for x1 in -4..=4 {
            for y1 in -4..=4 {
                for x2 in -4..=4 {
                    for y2 in -4..=4 {
                        let a = LatVec::new(x1, y1);
                        let b = LatVec::new(x2, y2);
                        if eval(&(&a + &b)) < eval(&a) + eval(&b) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    #[test]
    fn upper_convexity_matches_brute_force() {
        for f in [
            cp2(),
            square(),
            hexagon(),
            octagon(),
            nonagon(),
            bent(),
            doubled_square(),
        ] {
            for h in [
                SupportFunction::anticanonical(&f),
                SupportFunction::new(vec![BigInt::zero(); f.num_rays()]),
                SupportFunction::new(
                    (0..f.num_rays())
                        .map(|i| BigInt::from(-(i as i64 % 3) - 1))
                        .collect(),
                ),
            ] {
                assert_eq!(
                    is_strictly_upper_convex(&f, &h).unwrap(),
                    brute_upper_convex(&f, &h),
                    "fan {:?} h {:?}",
                    f.marks(),
                    h.values
                );
            }
        }
    }

    #[test]
    fn fano_examples() {
        assert!(is_fano(&octagon()));
        assert!(is_fano(&nonagon()));
        assert!(!is_fano(&bent()));
        for f in [cp2(), square(), hexagon(), octagon(), nonagon(), bent()] {
            let k = SupportFunction::anticanonical(&f);
            assert_eq!(is_fano(&f), is_strictly_upper_convex(&f, &k).unwrap());
        }
    }

    #[test]
    fn index_examples() {
        let i = fano_index_with_witness(&cp2()).unwrap();
        assert_eq!(i.index, BigInt::from(3));
        assert_eq!(fano_index(&square()).unwrap(), BigInt::from(2));
        assert_eq!(fano_index(&hexagon()).unwrap(), BigInt::from(1));
        assert_eq!(fano_index(&octagon()).unwrap(), BigInt::from(2));
        assert_eq!(fano_index(&doubled_square()).unwrap(), BigInt::from(1));
        assert_eq!(fano_index(&bent()), Err(Error::NotFano));
    }

    /// Direct search over witnesses in [0, m)^2 for every m up to a bound.
    fn brute_index(f: &AugmentedFan) -> i64 {
        (1..=12)
            .rev()
            .find(|&m| {
                let mb = BigInt::from(m);
                (0..m).any(|a| {
                    (0..m).any(|b| {
                        let w = LatVec::new(a, b);
                        f.marks()
                            .iter()
                            .all(|n| (w.dot(n) - BigInt::one()).is_multiple_of(&mb))
                    })
                })
            })
            .unwrap()
    }

    #[test]
    fn index_matches_brute_force() {
        let extra = [
            AugmentedFan::from_pairs(&[(1, 0), (0, 1), (-1, 0), (-1, -1)]).unwrap(),
            AugmentedFan::from_pairs(&[(1, 0), (1, 2), (-1, 0), (-1, -2)]).unwrap(),
            AugmentedFan::from_pairs(&[(1, 0), (0, 1), (-1, -2)]).unwrap(),
            AugmentedFan::from_pairs(&[(1, 1), (-1, 2), (-1, -1), (1, -2)]).unwrap(),
        ];
        for f in [
            cp2(),
            square(),
            hexagon(),
            octagon(),
            nonagon(),
            doubled_square(),
        ]
        .into_iter()
        .chain(extra)
        {
            assert_eq!(
                fano_index(&f).unwrap(),
                BigInt::from(brute_index(&f)),
                "{:?}",
                f.marks()
            );
        }
    }
}
