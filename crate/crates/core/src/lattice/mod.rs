//! Exact rank-2 lattice arithmetic: integer and rational plane vectors,
//! `GL(2,Z)` maps, convex polygons, half-plane intersection and integer
//! normal forms.

mod matrix;
mod polygon;

pub use matrix::{
    bareiss_determinant, hermite_row_basis, lattice_span_index, smith_normal_form, IntMatrix,
    SnfResult,
};
pub use polygon::{
    convex_hull, half_plane_intersection, rat_cross, shoelace_area, ConvexLatticePolygon, HalfPlane,
};

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::json::JsonInt;

/// A point of the lattice `Z^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatVec {
    pub x: BigInt,
    pub y: BigInt,
}

impl LatVec {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        LatVec {
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn zero() -> Self {
        LatVec::new(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn dot(&self, other: &LatVec) -> BigInt {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn scale(&self, k: &BigInt) -> LatVec {
        LatVec {
            x: &self.x * k,
            y: &self.y * k,
        }
    }

    /// gcd of the coordinates; zero only for the origin.
    pub fn content(&self) -> BigInt {
        self.x.gcd(&self.y)
    }

    /// The primitive lattice vector on the same ray. Panics on the origin.
    pub fn primitive(&self) -> LatVec {
        let g = self.content();
        assert!(!g.is_zero(), "origin has no primitive direction");
        LatVec {
            x: &self.x / &g,
            y: &self.y / &g,
        }
    }

    pub fn to_rat(&self) -> RatVec {
        RatVec {
            x: BigRational::from_integer(self.x.clone()),
            y: BigRational::from_integer(self.y.clone()),
        }
    }

    /// Angular sector in `[0, 4)`: 0 for the open first quadrant plus the
    /// positive x-axis, and so on counterclockwise. Used for exact angle sorting.
    fn half_turn_key(&self) -> u8 {
        let (sx, sy) = (self.x.signum(), self.y.signum());
        let zero = BigInt::zero();
        match (sx.cmp(&zero), sy.cmp(&zero)) {
            (
                std::cmp::Ordering::Greater,
                std::cmp::Ordering::Greater | std::cmp::Ordering::Equal,
            ) => 0,
            (std::cmp::Ordering::Less | std::cmp::Ordering::Equal, std::cmp::Ordering::Greater) => {
                1
            }
            (std::cmp::Ordering::Less, std::cmp::Ordering::Less | std::cmp::Ordering::Equal) => 2,
            _ => 3,
        }
    }

    /// Exact comparison of polar angles in `[0, 2pi)`; the origin is not allowed.
    pub fn angle_cmp(&self, other: &LatVec) -> std::cmp::Ordering {
        let (ka, kb) = (self.half_turn_key(), other.half_turn_key());
        ka.cmp(&kb)
            .then_with(|| BigInt::zero().cmp(&cross(self, other)))
    }
}

impl fmt::Display for LatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl Add for &LatVec {
    type Output = LatVec;
    fn add(self, o: &LatVec) -> LatVec {
        LatVec {
            x: &self.x + &o.x,
            y: &self.y + &o.y,
        }
    }
}

impl Sub for &LatVec {
    type Output = LatVec;
    fn sub(self, o: &LatVec) -> LatVec {
        LatVec {
            x: &self.x - &o.x,
            y: &self.y - &o.y,
        }
    }
}

impl Neg for &LatVec {
    type Output = LatVec;
    fn neg(self) -> LatVec {
        LatVec {
            x: -&self.x,
            y: -&self.y,
        }
    }
}

impl Serialize for LatVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (JsonInt(self.x.clone()), JsonInt(self.y.clone())).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (x, y) = <(JsonInt, JsonInt)>::deserialize(d)?;
        Ok(LatVec { x: x.0, y: y.0 })
    }
}

/// `a.x * b.y - a.y * b.x`.
pub fn cross(a: &LatVec, b: &LatVec) -> BigInt {
    &a.x * &b.y - &a.y * &b.x
}

/// A point of `Q^2`, always in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RatVec {
    #[serde(with = "crate::json::rational")]
    pub x: BigRational,
    #[serde(with = "crate::json::rational")]
    pub y: BigRational,
}

impl RatVec {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        RatVec { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        LatVec::new(x, y).to_rat()
    }

    pub fn dot_lat(&self, n: &LatVec) -> BigRational {
        &self.x * BigRational::from_integer(n.x.clone())
            + &self.y * BigRational::from_integer(n.y.clone())
    }

    pub fn sub(&self, o: &RatVec) -> RatVec {
        RatVec {
            x: &self.x - &o.x,
            y: &self.y - &o.y,
        }
    }

    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    pub fn to_lat(&self) -> Option<LatVec> {
        self.is_integral()
            .then(|| LatVec::new(self.x.to_integer(), self.y.to_integer()))
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [rat_to_f64(&self.x), rat_to_f64(&self.y)]
    }
}

impl fmt::Display for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
    })
}

/// An element of `GL(2,Z)`, row-major `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnimodularMap {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl UnimodularMap {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        let m = UnimodularMap {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        };
        if m.det().abs() != BigInt::one() {
            return Err(Error::InvalidParameter(format!(
                "matrix [[{},{}],[{},{}]] has determinant {}",
                m.a,
                m.b,
                m.c,
                m.d,
                m.det()
            )));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        UnimodularMap::new(1, 0, 0, 1).unwrap()
    }

    pub fn negation() -> Self {
        UnimodularMap::new(-1, 0, 0, -1).unwrap()
    }

    /// The map sending the standard basis to the columns `e1 -> p`, `e2 -> q`,
    /// if `(p, q)` is a lattice basis.
    pub fn from_columns(p: &LatVec, q: &LatVec) -> Result<Self> {
        UnimodularMap::new(p.x.clone(), q.x.clone(), p.y.clone(), q.y.clone())
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn apply(&self, v: &LatVec) -> LatVec {
        LatVec {
            x: &self.a * &v.x + &self.b * &v.y,
            y: &self.c * &v.x + &self.d * &v.y,
        }
    }

    pub fn apply_rat(&self, v: &RatVec) -> RatVec {
        let r = |z: &BigInt| BigRational::from_integer(z.clone());
        RatVec {
            x: r(&self.a) * &v.x + r(&self.b) * &v.y,
            y: r(&self.c) * &v.x + r(&self.d) * &v.y,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &UnimodularMap) -> UnimodularMap {
        UnimodularMap {
            a: &self.a * &other.a + &self.b * &other.c,
            b: &self.a * &other.b + &self.b * &other.d,
            c: &self.c * &other.a + &self.d * &other.c,
            d: &self.c * &other.b + &self.d * &other.d,
        }
    }

    pub fn inverse(&self) -> UnimodularMap {
        // det = ±1, so the adjugate divided by det is integral
        let det = self.det();
        UnimodularMap {
            a: &self.d * &det,
            b: -&self.b * &det,
            c: -&self.c * &det,
            d: &self.a * &det,
        }
    }

    /// Inverse transpose; the induced action on the dual lattice.
    pub fn dual(&self) -> UnimodularMap {
        let inv = self.inverse();
        UnimodularMap {
            a: inv.a,
            b: inv.c,
            c: inv.b,
            d: inv.d,
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == UnimodularMap::identity()
    }

    pub fn rows(&self) -> [[BigInt; 2]; 2] {
        [
            [self.a.clone(), self.b.clone()],
            [self.c.clone(), self.d.clone()],
        ]
    }
}

impl fmt::Display for UnimodularMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl Serialize for UnimodularMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let j = |z: &BigInt| JsonInt(z.clone());
        [[j(&self.a), j(&self.b)], [j(&self.c), j(&self.d)]].serialize(s)
    }
}

impl<'de> Deserialize<'de> for UnimodularMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [[a, b], [c, dd]] = <[[JsonInt; 2]; 2]>::deserialize(d)?;
        UnimodularMap::new(a.0, b.0, c.0, dd.0).map_err(serde::de::Error::custom)
    }
}

/// Extended Euclid: returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_examples() {
        assert_eq!(
            cross(&LatVec::new(1, 0), &LatVec::new(0, 1)),
            BigInt::from(1)
        );
        assert_eq!(
            cross(&LatVec::new(1, 1), &LatVec::new(5, 2)),
            BigInt::from(-3)
        );
        assert_eq!(
            cross(&LatVec::new(2, 4), &LatVec::new(1, 2)),
            BigInt::from(0)
        );
    }

    #[test]
    fn angle_order_goes_counterclockwise() {
        let pts = [
            (1, 0),
            (1, 1),
            (0, 1),
            (-1, 1),
            (-1, 0),
            (-1, -1),
            (0, -1),
            (1, -1),
        ];
        for w in pts.windows(2) {
            let a = LatVec::new(w[0].0, w[0].1);
            let b = LatVec::new(w[1].0, w[1].1);
            assert_eq!(a.angle_cmp(&b), std::cmp::Ordering::Less, "{a} vs {b}");
        }
        assert_eq!(
            LatVec::new(2, 2).angle_cmp(&LatVec::new(1, 1)),
            std::cmp::Ordering::Equal
        );
    }

    #[test]
    fn unimodular_rejects_non_unit_det() {
        assert!(UnimodularMap::new(2, 0, 0, 1).is_err());
        let g = UnimodularMap::new(2, 1, 1, 1).unwrap();
        assert!(g.compose(&g.inverse()).is_identity());
        let v = LatVec::new(3, -7);
        assert_eq!(g.inverse().apply(&g.apply(&v)), v);
        // dual pairing is preserved
        let m = LatVec::new(-2, 5);
        assert_eq!(g.dual().apply(&m).dot(&g.apply(&v)), m.dot(&v));
    }

    #[test]
    fn primitive_and_content() {
        let v = LatVec::new(-6, 4);
        assert_eq!(v.content(), BigInt::from(2));
        assert_eq!(v.primitive(), LatVec::new(-3, 2));
    }
}
