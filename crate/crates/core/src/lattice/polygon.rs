use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{cross, LatVec, RatVec, UnimodularMap};
use crate::error::{Error, Result};

pub fn rat_cross(a: &RatVec, b: &RatVec) -> BigRational {
    &a.x * &b.y - &a.y * &b.x
}

/// Orientation of `c` relative to the directed line `a -> b`.
fn turn(a: &RatVec, b: &RatVec, c: &RatVec) -> BigRational {
    rat_cross(&b.sub(a), &c.sub(a))
}

/// Counterclockwise strictly convex hull, starting at the lexicographically
/// smallest vertex. Points on hull edges are dropped.
pub fn convex_hull(points: &[RatVec]) -> Result<Vec<RatVec>> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return Err(Error::DegenerateInput(format!(
            "need at least 3 distinct points, got {}",
            pts.len()
        )));
    }
    let mut lower: Vec<RatVec> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && !turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<RatVec> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(Error::DegenerateInput("all points are collinear".into()));
    }
    Ok(lower)
}

/// Shoelace area of a simple polygon, as a positive exact rational.
pub fn shoelace_area(vertices: &[RatVec]) -> Result<BigRational> {
    if vertices.len() < 3 {
        return Err(Error::DegenerateInput(format!(
            "polygon needs at least 3 vertices, got {}",
            vertices.len()
        )));
    }
    let n = vertices.len();
    let twice: BigRational = (0..n)
        .map(|i| rat_cross(&vertices[i], &vertices[(i + 1) % n]))
        .sum();
    Ok(twice.abs() / BigRational::from_integer(BigInt::from(2)))
}

/// `{ m : <m, normal> >= bound }`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfPlane {
    pub normal: LatVec,
    #[serde(with = "crate::json::rational")]
    pub bound: BigRational,
}

impl HalfPlane {
    pub fn new(normal: LatVec, bound: BigRational) -> Result<Self> {
        if normal.is_zero() {
            return Err(Error::DegenerateInput("half-plane normal is zero".into()));
        }
        Ok(HalfPlane { normal, bound })
    }

    pub fn from_ints(nx: i64, ny: i64, bound: i64) -> Result<Self> {
        HalfPlane::new(
            LatVec::new(nx, ny),
            BigRational::from_integer(BigInt::from(bound)),
        )
    }

    /// `<m, normal> - bound`; nonnegative exactly on the half-plane.
    pub fn slack(&self, m: &RatVec) -> BigRational {
        m.dot_lat(&self.normal) - &self.bound
    }

    pub fn contains(&self, m: &RatVec) -> bool {
        !self.slack(m).is_negative()
    }

    /// Point of the boundary line closest to the origin.
    fn foot(&self) -> RatVec {
        let nn = BigRational::from_integer(self.normal.dot(&self.normal));
        let s = &self.bound / nn;
        RatVec::new(
            &s * BigRational::from_integer(self.normal.x.clone()),
            &s * BigRational::from_integer(self.normal.y.clone()),
        )
    }

    /// Intersection of the two boundary lines, if they are not parallel.
    fn meet(&self, other: &HalfPlane) -> Option<RatVec> {
        let det = cross(&self.normal, &other.normal);
        if det.is_zero() {
            return None;
        }
        let det = BigRational::from_integer(det);
        let r = |z: &BigInt| BigRational::from_integer(z.clone());
        // solve [n1; n2] m = [b1; b2]
        let x = (&self.bound * r(&other.normal.y) - &other.bound * r(&self.normal.y)) / &det;
        let y = (r(&self.normal.x) * &other.bound - r(&other.normal.x) * &self.bound) / &det;
        Some(RatVec::new(x, y))
    }
}

impl fmt::Display for HalfPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<m,{}> >= {}", self.normal, self.bound)
    }
}

fn drop_redundant(mut poly: Vec<RatVec>) -> Vec<RatVec> {
    poly.dedup();
    while poly.len() > 1 && poly.first() == poly.last() {
        poly.pop();
    }
    let mut changed = true;
    while changed && poly.len() >= 3 {
        changed = false;
        let n = poly.len();
        for i in 0..n {
            let (a, b, c) = (&poly[(i + n - 1) % n], &poly[i], &poly[(i + 1) % n]);
            if a == b || turn(a, b, c).is_zero() {
                poly.remove(i);
                changed = true;
                break;
            }
        }
    }
    poly
}

/// Vertices (counterclockwise, lexicographically smallest first) of the
/// bounded intersection of the half-planes. Empty when the intersection is
/// empty or has no interior; `UnboundedRegion` when it is unbounded.
pub fn half_plane_intersection(planes: &[HalfPlane]) -> Result<Vec<RatVec>> {
    if planes.is_empty() {
        return Err(Error::UnboundedRegion);
    }
    // every vertex of a bounded answer, and a point of every boundary line,
    // lies strictly inside the starting box
    let mut reach = BigRational::from_integer(BigInt::from(1));
    let mut widen = |p: &RatVec| {
        for c in [&p.x, &p.y] {
            if c.abs() > reach {
                reach = c.abs();
            }
        }
    };
    for (i, a) in planes.iter().enumerate() {
        widen(&a.foot());
        for b in &planes[i + 1..] {
            if let Some(p) = a.meet(b) {
                widen(&p);
            }
        }
    }
    let r = reach * BigRational::from_integer(BigInt::from(2));
    let nr = -r.clone();
    let mut poly = vec![
        RatVec::new(nr.clone(), nr.clone()),
        RatVec::new(r.clone(), nr.clone()),
        RatVec::new(r.clone(), r.clone()),
        RatVec::new(nr.clone(), r.clone()),
    ];
    for plane in planes {
        let n = poly.len();
        let mut next = Vec::with_capacity(n + 1);
        for i in 0..n {
            let (p, q) = (&poly[i], &poly[(i + 1) % n]);
            let (sp, sq) = (plane.slack(p), plane.slack(q));
            if !sp.is_negative() {
                next.push(p.clone());
            }
            if (sp.is_positive() && sq.is_negative()) || (sp.is_negative() && sq.is_positive()) {
                let t = &sp / (&sp - &sq);
                let d = q.sub(p);
                next.push(RatVec::new(&p.x + &t * &d.x, &p.y + &t * &d.y));
            }
        }
        poly = drop_redundant(next);
        if poly.len() < 3 {
            return Ok(Vec::new());
        }
    }
    if poly.iter().any(|v| v.x.abs() == r || v.y.abs() == r) {
        return Err(Error::UnboundedRegion);
    }
    // canonical rotation
    let start = (0..poly.len())
        .min_by(|&i, &j| poly[i].cmp(&poly[j]))
        .unwrap();
    poly.rotate_left(start);
    Ok(poly)
}

/// A strictly convex lattice polygon, vertices counterclockwise with the
/// lexicographically smallest vertex first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConvexLatticePolygon {
    vertices: Vec<LatVec>,
}

impl ConvexLatticePolygon {
    /// Accepts any rotation of a counterclockwise strictly convex vertex cycle.
    pub fn new(vertices: Vec<LatVec>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::NotConvex(format!("{n} vertices")));
        }
        for i in 0..n {
            let (a, b, c) = (&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]);
            if !cross(&(b - a), &(c - b)).is_positive() {
                return Err(Error::NotConvex(format!("no strict left turn at {b}")));
            }
        }
        // positive turns with winding one: the edge directions wrap around once
        let edges: Vec<LatVec> = (0..n)
            .map(|i| &vertices[(i + 1) % n] - &vertices[i])
            .collect();
        let wraps = (0..n)
            .filter(|&i| edges[(i + 1) % n].angle_cmp(&edges[i]) != std::cmp::Ordering::Greater)
            .count();
        if wraps != 1 {
            return Err(Error::NotConvex("vertex cycle winds more than once".into()));
        }
        let mut vertices = vertices;
        let start = (0..n)
            .min_by(|&i, &j| vertices[i].cmp(&vertices[j]))
            .unwrap();
        vertices.rotate_left(start);
        Ok(ConvexLatticePolygon { vertices })
    }

    /// Builds the polygon from an unordered vertex set; every point must be
    /// a vertex of the hull.
    pub fn from_vertex_set(points: &[LatVec]) -> Result<Self> {
        let mut distinct = points.to_vec();
        distinct.sort();
        distinct.dedup();
        if distinct.len() != points.len() {
            return Err(Error::NotConvex("repeated vertex".into()));
        }
        let rat: Vec<RatVec> = points.iter().map(LatVec::to_rat).collect();
        let hull = convex_hull(&rat).map_err(|e| Error::NotConvex(e.to_string()))?;
        if hull.len() != points.len() {
            return Err(Error::NotConvex(format!(
                "{} of {} points are not hull vertices",
                points.len() - hull.len(),
                points.len()
            )));
        }
        let vertices = hull.iter().map(|v| v.to_lat().unwrap()).collect();
        ConvexLatticePolygon::new(vertices)
    }

    pub fn from_pairs(pairs: &[(i64, i64)]) -> Result<Self> {
        let pts: Vec<LatVec> = pairs.iter().map(|&(x, y)| LatVec::new(x, y)).collect();
        ConvexLatticePolygon::from_vertex_set(&pts)
    }

    pub fn vertices(&self) -> &[LatVec] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn rat_vertices(&self) -> Vec<RatVec> {
        self.vertices.iter().map(LatVec::to_rat).collect()
    }

    pub fn contains_origin_strictly(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| cross(&self.vertices[i], &self.vertices[(i + 1) % n]).is_positive())
    }

    /// Invariant under `v -> -v`.
    pub fn is_antipodal(&self) -> bool {
        let mut a = self.vertices.clone();
        let mut b: Vec<LatVec> = self.vertices.iter().map(|v| -v).collect();
        a.sort();
        b.sort();
        a == b
    }

    /// Image under a lattice automorphism, re-canonicalized.
    pub fn map(&self, g: &UnimodularMap) -> ConvexLatticePolygon {
        let mut image: Vec<LatVec> = self.vertices.iter().map(|v| g.apply(v)).collect();
        if g.det().is_negative() {
            image.reverse();
        }
        ConvexLatticePolygon::new(image).expect("lattice automorphisms preserve convexity")
    }

    pub fn area(&self) -> BigRational {
        shoelace_area(&self.rat_vertices()).expect("at least 3 vertices")
    }
}

impl fmt::Display for ConvexLatticePolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Serialize for ConvexLatticePolygon {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.vertices.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConvexLatticePolygon {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pts = Vec::<LatVec>::deserialize(d)?;
        ConvexLatticePolygon::from_vertex_set(&pts).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(x: i64, y: i64) -> RatVec {
        RatVec::from_ints(x, y)
    }

    fn rq(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn hull_examples() {
        let sq = convex_hull(&[rv(0, 0), rv(1, 0), rv(0, 1), rv(1, 1)]).unwrap();
        assert_eq!(sq, vec![rv(0, 0), rv(1, 0), rv(1, 1), rv(0, 1)]);
        let tri = convex_hull(&[rv(1, 0), rv(0, 1), rv(-1, -1), rv(0, 0)]).unwrap();
        assert_eq!(tri, vec![rv(-1, -1), rv(1, 0), rv(0, 1)]);
        // (1,1) is a genuine corner of {(3,0),(1,1),(0,3)} ...
        let three = convex_hull(&[rv(3, 0), rv(1, 1), rv(0, 3)]).unwrap();
        assert_eq!(three.len(), 3);
        // ... and interior once (-1,-1) joins
        let four = convex_hull(&[rv(3, 0), rv(1, 1), rv(0, 3), rv(-1, -1)]).unwrap();
        assert_eq!(four, vec![rv(-1, -1), rv(3, 0), rv(0, 3)]);
    }

    #[test]
    fn hull_drops_edge_midpoints_and_rejects_collinear() {
        let h = convex_hull(&[rv(0, 0), rv(2, 0), rv(1, 0), rv(0, 2)]).unwrap();
        assert_eq!(h, vec![rv(0, 0), rv(2, 0), rv(0, 2)]);
        assert!(matches!(
            convex_hull(&[rv(0, 0), rv(1, 1), rv(2, 2)]),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn intersection_examples() {
        let cp2 = [
            HalfPlane::from_ints(1, 0, -1).unwrap(),
            HalfPlane::from_ints(0, 1, -1).unwrap(),
            HalfPlane::from_ints(-1, -1, -1).unwrap(),
        ];
        assert_eq!(
            half_plane_intersection(&cp2).unwrap(),
            vec![rv(-1, -1), rv(2, -1), rv(-1, 2)]
        );
        let sq = [
            HalfPlane::from_ints(1, 0, -1).unwrap(),
            HalfPlane::from_ints(-1, 0, -1).unwrap(),
            HalfPlane::from_ints(0, 1, -1).unwrap(),
            HalfPlane::from_ints(0, -1, -1).unwrap(),
        ];
        assert_eq!(
            half_plane_intersection(&sq).unwrap(),
            vec![rv(-1, -1), rv(1, -1), rv(1, 1), rv(-1, 1)]
        );
        assert_eq!(
            half_plane_intersection(&[HalfPlane::from_ints(1, 0, 0).unwrap()]),
            Err(Error::UnboundedRegion)
        );
    }

    #[test]
    fn intersection_empty_degenerate_and_far_away() {
        let empty = [
            HalfPlane::from_ints(1, 0, 1).unwrap(),
            HalfPlane::from_ints(0, 1, 1).unwrap(),
            HalfPlane::from_ints(-1, -1, 1).unwrap(),
        ];
        assert!(half_plane_intersection(&empty).unwrap().is_empty());
        // a segment has no interior
        let seg = [
            HalfPlane::from_ints(1, 0, 0).unwrap(),
            HalfPlane::from_ints(-1, 0, 0).unwrap(),
            HalfPlane::from_ints(0, 1, 0).unwrap(),
            HalfPlane::from_ints(0, -1, -1).unwrap(),
        ];
        assert!(half_plane_intersection(&seg).unwrap().is_empty());
        // a half-plane nowhere near the origin is still unbounded
        assert_eq!(
            half_plane_intersection(&[HalfPlane::from_ints(1, 0, 1000).unwrap()]),
            Err(Error::UnboundedRegion)
        );
        let strip = [
            HalfPlane::from_ints(1, 0, 50).unwrap(),
            HalfPlane::from_ints(-1, 0, -51).unwrap(),
            HalfPlane::from_ints(1, 1, 0).unwrap(),
        ];
        assert_eq!(half_plane_intersection(&strip), Err(Error::UnboundedRegion));
    }

    #[test]
    fn intersection_with_rational_vertices() {
        // |x| <= 1, |y| <= 1, |x + y| <= 1/2
        let mut planes: Vec<HalfPlane> = [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .iter()
            .map(|&(a, b)| HalfPlane::from_ints(a, b, -1).unwrap())
            .collect();
        planes.push(HalfPlane::new(LatVec::new(2, 2), rq(-1, 1)).unwrap());
        planes.push(HalfPlane::new(LatVec::new(-2, -2), rq(-1, 1)).unwrap());
        let v = half_plane_intersection(&planes).unwrap();
        assert_eq!(v.len(), 6);
        assert_eq!(shoelace_area(&v).unwrap(), rq(7, 4));
    }

    #[test]
    fn shoelace_examples() {
        assert_eq!(
            shoelace_area(&[rv(-1, -1), rv(2, -1), rv(-1, 2)]).unwrap(),
            rq(9, 2)
        );
        assert_eq!(
            shoelace_area(&[rv(-1, -1), rv(1, -1), rv(1, 1), rv(-1, 1)]).unwrap(),
            rq(4, 1)
        );
        let hex = [
            rv(1, 0),
            rv(0, 1),
            rv(-1, 1),
            rv(-1, 0),
            rv(0, -1),
            rv(1, -1),
        ];
        assert_eq!(shoelace_area(&hex).unwrap(), rq(3, 1));
        assert!(shoelace_area(&hex[..2]).is_err());
    }

    #[test]
    fn polygon_canonical_order() {
        let p = ConvexLatticePolygon::from_pairs(&[(0, 1), (1, 0), (-1, -1)]).unwrap();
        assert_eq!(
            p.vertices(),
            &[LatVec::new(-1, -1), LatVec::new(1, 0), LatVec::new(0, 1)]
        );
        assert!(p.contains_origin_strictly());
        let q = ConvexLatticePolygon::new(vec![
            LatVec::new(1, 0),
            LatVec::new(0, 1),
            LatVec::new(-1, -1),
        ])
        .unwrap();
        assert_eq!(p, q);
        // clockwise input is rejected by `new`
        assert!(ConvexLatticePolygon::new(vec![
            LatVec::new(0, 1),
            LatVec::new(1, 0),
            LatVec::new(-1, -1),
        ])
        .is_err());
        assert!(ConvexLatticePolygon::from_pairs(&[(3, 0), (1, 1), (0, 3), (-1, -1)]).is_err());
    }

    #[test]
    fn polygon_map_handles_reflections() {
        let p = ConvexLatticePolygon::from_pairs(&[(1, 0), (0, 1), (-1, -1)]).unwrap();
        let swap = UnimodularMap::new(0, 1, 1, 0).unwrap();
        assert_eq!(p.map(&swap), p);
        let shear = UnimodularMap::new(1, 1, 0, 1).unwrap();
        assert_eq!(p.map(&shear).area(), p.area());
    }
}
