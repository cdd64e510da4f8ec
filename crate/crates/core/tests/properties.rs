use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use toric_diamond_core::diamond::{
    isotropy_to_polygon, polygon_to_isotropy_with_shear, weights_to_diamond,
};
use toric_diamond_core::lattice::{
    convex_hull, half_plane_intersection, lattice_span_index, shoelace_area, smith_normal_form,
    HalfPlane,
};
use toric_diamond_core::reduction::{
    cs_conditions_check, g_omega_order, g_omega_order_bruteforce, is_admissible, is_nondegenerate,
    isotropy_data, minors_all,
};
use toric_diamond_core::toric::{
    admits_kahler_einstein, fan_from_polygon, fano_index, homology_of_m, is_fano,
    is_special_symmetric, is_symmetric, orbifold_report, pi1_orb_trivial,
    seifert_total_space_smooth, sigma_polytope,
};
use toric_diamond_core::{
    AugmentedFan, ConvexLatticePolygon, IntMatrix, LatVec, RatVec, SupportFunction, UnimodularMap,
    WeightMatrix,
};

fn unimodular() -> impl Strategy<Value = UnimodularMap> {
    prop::collection::vec((0u8..4, -3i64..=3), 0..6).prop_map(|ops| {
        ops.into_iter()
            .fold(UnimodularMap::identity(), |acc, (kind, t)| {
                let e = match kind {
                    0 => UnimodularMap::new(1, t, 0, 1),
                    1 => UnimodularMap::new(1, 0, t, 1),
                    2 => UnimodularMap::new(0, 1, 1, 0),
                    _ => UnimodularMap::new(-1, 0, 0, 1),
                }
                .unwrap();
                e.compose(&acc)
            })
    })
}

fn int_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-50i64..=50, c), r).prop_map(|rows| {
            IntMatrix::from_rows(
                &rows
                    .into_iter()
                    .map(|row| row.into_iter().map(BigInt::from).collect())
                    .collect::<Vec<_>>(),
            )
        })
    })
}

fn lattice_points(max: i64, len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<LatVec>> {
    prop::collection::vec((-max..=max, -max..=max), len)
        .prop_map(|v| v.into_iter().map(|(x, y)| LatVec::new(x, y)).collect())
}

/// Hull vertices of `points` together with their negatives.
fn antipodal_polygon(points: &[LatVec]) -> Option<ConvexLatticePolygon> {
    let mut all: Vec<RatVec> = points.iter().map(LatVec::to_rat).collect();
    all.extend(points.iter().map(|p| (-p).to_rat()));
    let hull = convex_hull(&all).ok()?;
    let verts: Vec<LatVec> = hull.iter().map(|v| v.to_lat().unwrap()).collect();
    ConvexLatticePolygon::from_vertex_set(&verts).ok()
}

fn symmetric_fano_fan() -> impl Strategy<Value = AugmentedFan> {
    lattice_points(6, 2..6)
        .prop_filter_map("degenerate", |pts| antipodal_polygon(&pts))
        .prop_filter_map("origin on boundary", |p| fan_from_polygon(&p).ok())
}

fn admissible_normal_form() -> impl Strategy<Value = WeightMatrix> {
    (0usize..=5)
        .prop_flat_map(|k| prop::collection::vec((-9i64..=9, -9i64..=9), k))
        .prop_filter_map("not admissible", |ab| {
            let a: Vec<BigInt> = ab.iter().map(|p| BigInt::from(p.0)).collect();
            let b: Vec<BigInt> = ab.iter().map(|p| BigInt::from(p.1)).collect();
            let w = WeightMatrix::identity_augmented(&a, &b).ok()?;
            is_admissible(&w).ok()?.then_some(w)
        })
}

fn small_weight_matrix() -> impl Strategy<Value = WeightMatrix> {
    (0usize..=4).prop_flat_map(|k| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, k + 2), k).prop_filter_map(
            "rank deficient",
            |rows| {
                WeightMatrix::new(
                    rows.into_iter()
                        .map(|r| r.into_iter().map(BigInt::from).collect())
                        .collect(),
                )
                .ok()
            },
        )
    })
}

/// A `k x k` matrix of determinant ±1 from random row operations.
fn gl_k(k: usize, ops: &[(usize, usize, i64, bool)]) -> IntMatrix {
    let mut rows: Vec<Vec<BigInt>> = (0..k)
        .map(|i| (0..k).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    for &(i, j, t, flip) in ops {
        let (i, j) = (i % k, j % k);
        if i != j {
            let add: Vec<BigInt> = rows[j].iter().map(|x| x * t).collect();
            for (a, b) in rows[i].iter_mut().zip(add) {
                *a += b;
            }
        }
        if flip {
            rows.swap(i, j);
        }
    }
    IntMatrix::from_rows(&rows)
}

fn signed_permutation(w: &WeightMatrix, perm_seed: u64, signs: u64) -> WeightMatrix {
    let n = w.n();
    let mut order: Vec<usize> = (0..n).collect();
    let mut s = perm_seed;
    for i in (1..n).rev() {
        s = s
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        order.swap(i, (s >> 33) as usize % (i + 1));
    }
    let rows = w
        .to_rows()
        .into_iter()
        .map(|r| {
            order
                .iter()
                .enumerate()
                .map(|(pos, &c)| {
                    if signs >> pos & 1 == 1 {
                        -&r[c]
                    } else {
                        r[c].clone()
                    }
                })
                .collect()
        })
        .collect();
    WeightMatrix::new(rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn snf_reconstructs(a in int_matrix()) {
        let s = smith_normal_form(&a);
        prop_assert_eq!(&(&s.u_inv * &s.d) * &s.v_inv, a.clone());
        prop_assert_eq!(&(&s.u * &a) * &s.v, s.d.clone());
        let f = s.invariant_factors();
        for w in f.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert!(f.iter().all(|x| x.is_positive()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn hull_is_order_independent(pts in lattice_points(20, 3..15), rot in 0usize..15) {
        let rat: Vec<RatVec> = pts.iter().map(LatVec::to_rat).collect();
        let Ok(hull) = convex_hull(&rat) else { return Ok(()) };
        let mut shuffled = rat.clone();
        shuffled.reverse();
        let len = shuffled.len();
        shuffled.rotate_left(rot % len);
        prop_assert_eq!(convex_hull(&shuffled).unwrap(), hull.clone());
        // adding interior points changes nothing
        let mut more = rat.clone();
        let n = hull.len();
        let two = BigRational::from_integer(2.into());
        for i in 0..n {
            let (a, b) = (&hull[i], &hull[(i + 2) % n]);
            more.push(RatVec::new((&a.x + &b.x) / &two, (&a.y + &b.y) / &two));
        }
        prop_assert_eq!(convex_hull(&more).unwrap(), hull);
    }

    #[test]
    fn area_invariance(pts in lattice_points(20, 3..12), g in unimodular(), rot in 0usize..12) {
        let rat: Vec<RatVec> = pts.iter().map(LatVec::to_rat).collect();
        let Ok(hull) = convex_hull(&rat) else { return Ok(()) };
        let area = shoelace_area(&hull).unwrap();
        let mut rotated = hull.clone();
        let len = rotated.len();
        rotated.rotate_left(rot % len);
        prop_assert_eq!(shoelace_area(&rotated).unwrap(), area.clone());
        let image: Vec<RatVec> = hull.iter().map(|v| g.apply_rat(v)).collect();
        prop_assert_eq!(shoelace_area(&image).unwrap(), area);
    }

    #[test]
    fn span_index_invariance(pts in lattice_points(30, 1..6), g in unimodular()) {
        let image: Vec<LatVec> = pts.iter().map(|v| g.apply(v)).collect();
        prop_assert_eq!(lattice_span_index(&image), lattice_span_index(&pts));
    }

    #[test]
    fn half_planes_recovered(planes in prop::collection::vec((-5i64..=5, -5i64..=5, -6i64..=0), 3..9)) {
        let planes: Vec<HalfPlane> = planes
            .into_iter()
            .filter_map(|(x, y, b)| HalfPlane::from_ints(x, y, b).ok())
            .collect();
        let Ok(verts) = half_plane_intersection(&planes) else { return Ok(()) };
        let n = verts.len();
        for v in &verts {
            prop_assert!(planes.iter().all(|p| p.contains(v)));
        }
        // every plane touching the region along a segment is an edge line
        for p in &planes {
            let on: Vec<usize> = (0..n).filter(|&i| p.slack(&verts[i]).is_zero()).collect();
            if on.len() >= 2 {
                prop_assert_eq!(on.len(), 2);
                let (i, j) = (on[0], on[1]);
                prop_assert!(j == i + 1 || (i == 0 && j == n - 1));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn toric_predicates_are_lattice_invariant(
        fan in symmetric_fano_fan(),
        maps in prop::collection::vec(unimodular(), 10),
    ) {
        let fano = is_fano(&fan);
        let index = fano_index(&fan).ok();
        let sym = is_symmetric(&fan);
        let ke = admits_kahler_einstein(&fan);
        let pi1 = pi1_orb_trivial(&fan);
        let ord = orbifold_report(&fan).ord_x;
        let hom = homology_of_m(&fan).ok();
        for g in &maps {
            let img = fan.map(g);
            prop_assert_eq!(is_fano(&img), fano);
            prop_assert_eq!(fano_index(&img).ok(), index.clone());
            prop_assert_eq!(is_symmetric(&img), sym);
            prop_assert_eq!(admits_kahler_einstein(&img), ke);
            prop_assert_eq!(pi1_orb_trivial(&img), pi1);
            prop_assert_eq!(orbifold_report(&img).ord_x, ord.clone());
            prop_assert_eq!(homology_of_m(&img).ok(), hom.clone());
        }
    }

    #[test]
    fn special_symmetric_facts(fan in symmetric_fano_fan()) {
        prop_assert!(is_special_symmetric(&fan));
        prop_assert!(is_fano(&fan));
        let idx = fano_index(&fan).unwrap();
        prop_assert!(idx.is_one() || idx == BigInt::from(2));
        let sigma = sigma_polytope(&fan, &SupportFunction::anticanonical(&fan)).unwrap();
        prop_assert!(sigma.len() >= 3);
        let origin = RatVec::from_ints(0, 0);
        for n in fan.marks() {
            // <0, n> = 0 > -1 for every facet
            prop_assert!(origin.dot_lat(n) > BigRational::from_integer((-1).into()));
        }
        // polar dual of the anticanonical polytope is the hull of the marks
        let dual_planes: Vec<HalfPlane> = sigma
            .iter()
            .map(|v| {
                let den = v.x.denom().lcm(v.y.denom());
                let scaled = LatVec::new(
                    (&v.x * BigRational::from_integer(den.clone())).to_integer(),
                    (&v.y * BigRational::from_integer(den.clone())).to_integer(),
                );
                HalfPlane::new(scaled, BigRational::from_integer(-den)).unwrap()
            })
            .collect();
        let dual = half_plane_intersection(&dual_planes).unwrap();
        let dual_set: BTreeSet<LatVec> = dual.iter().map(|v| v.to_lat().unwrap()).collect();
        let marks: BTreeSet<LatVec> = fan.marks().iter().cloned().collect();
        prop_assert_eq!(dual_set, marks);
        // roots of the anticanonical bundle are unique when the marks span
        // the lattice; otherwise competing roots may disagree and that is
        // reported rather than resolved
        match seifert_total_space_smooth(&fan) {
            Ok(smooth) => {
                if smooth && pi1_orb_trivial(&fan) {
                    prop_assert!(homology_of_m(&fan).is_ok());
                }
            }
            Err(e) => {
                prop_assert!(!pi1_orb_trivial(&fan));
                prop_assert_eq!(e.code(), "INTERNAL_INCONSISTENCY");
            }
        }
    }

    #[test]
    fn normal_form_torsion_bound(w in admissible_normal_form()) {
        prop_assume!(w.k() > 0);
        let (a, b) = w.normal_form_columns().unwrap();
        let pa: BigInt = a.iter().product();
        let pb: BigInt = b.iter().product();
        prop_assert!(g_omega_order(&w).unwrap() >= pa.abs() + pb.abs());
    }

    #[test]
    fn isotropy_data_is_valid(w in admissible_normal_form()) {
        let d = isotropy_data(&w).unwrap();
        prop_assert!(cs_conditions_check(&d));
        prop_assert!(d.span_index().is_one());
        prop_assert_eq!(d.k(), w.k());
    }

    #[test]
    fn round_trip_through_polygon(w in admissible_normal_form()) {
        let d = isotropy_data(&w).unwrap();
        let p = isotropy_to_polygon(&d).unwrap();
        let (back, shear) = polygon_to_isotropy_with_shear(&p).unwrap();
        prop_assert_eq!(isotropy_to_polygon(&back).unwrap().map(&shear.inverse()), p.clone());
        let r = weights_to_diamond(&w).unwrap();
        prop_assert_eq!(r.m, 2 * w.k() + 1);
        prop_assert_eq!(r.polygon.len(), 2 * w.k() + 4);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn admissibility_is_equivalence_invariant(
        w in admissible_normal_form(),
        moves in prop::collection::vec(
            (prop::collection::vec((0usize..5, 0usize..5, -2i64..=2, any::<bool>()), 0..6), any::<u64>(), any::<u64>()),
            10,
        ),
    ) {
        let base = is_admissible(&w).unwrap();
        for (ops, perm, signs) in moves {
            let moved = if w.k() == 0 {
                signed_permutation(&w, perm, signs)
            } else {
                let g = gl_k(w.k(), &ops);
                let mixed = WeightMatrix::new((&g * w.entries()).to_rows()).unwrap();
                signed_permutation(&mixed, perm, signs)
            };
            prop_assert_eq!(is_admissible(&moved).unwrap(), base);
        }
    }

    #[test]
    fn minors_scale_by_determinant(w in small_weight_matrix(), ops in prop::collection::vec((0usize..5, 0usize..5, -3i64..=3, any::<bool>()), 0..6)) {
        prop_assume!(w.k() > 0);
        let g = gl_k(w.k(), &ops);
        let moved = WeightMatrix::new((&g * w.entries()).to_rows()).unwrap();
        let mut a: Vec<BigInt> = minors_all(&w).values().map(Signed::abs).collect();
        let mut b: Vec<BigInt> = minors_all(&moved).values().map(Signed::abs).collect();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn tree_oracles_agree(w in small_weight_matrix()) {
        prop_assume!(is_nondegenerate(&w));
        prop_assert_eq!(g_omega_order(&w).unwrap(), g_omega_order_bruteforce(&w).unwrap());
    }
}
