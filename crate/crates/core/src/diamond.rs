//! From weight matrices to the full set of invariants: isotropy data,
//! the special symmetric Fano polygon, volumes and Einstein constants, and
//! the infinite families.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{
    ext_gcd, rat_to_f64, shoelace_area, ConvexLatticePolygon, LatVec, UnimodularMap,
};
use crate::reduction::{
    determinantal_divisor, g_omega_order, is_admissible, is_reduced, isotropy_data, reduce_rows,
    s_omega_cohomology, CohomologyTable, IsotropyData, WeightMatrix,
};
use crate::toric::{
    admits_kahler_einstein, fan_from_polygon, fano_index, homology_of_m, is_fano, orbifold_report,
    pi1_orb_trivial, seifert_total_space_smooth, sigma_polytope, AugmentedFan, Diffeotype,
    SupportFunction,
};

/// The polygon with vertices `v_0 .. v_{k+2}` and `-v_1 .. -v_{k+1}`.
///
/// The only check is that these `2(k+2)` points are in strictly convex
/// position; the data need not span the whole lattice.
pub fn isotropy_to_polygon(d: &IsotropyData) -> Result<ConvexLatticePolygon> {
    let v = d.vectors();
    let mut points = v.to_vec();
    points.extend(v[1..v.len() - 1].iter().map(|x| -x));
    let polygon = ConvexLatticePolygon::from_vertex_set(&points)?;
    if !polygon.is_antipodal() {
        return Err(Error::InternalInconsistency(format!(
            "polygon from isotropy data is not antipodal: {:?}",
            polygon
                .vertices()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
        )));
    }
    Ok(polygon)
}

/// Primitive `(u, w)`, `w > 0`, by increasing `|u| + w`, positive `u` first.
fn shear_directions() -> impl Iterator<Item = (i64, i64)> {
    (1i64..).flat_map(|s| {
        (1..=s).rev().flat_map(move |w| {
            let u = s - w;
            let cands = if u == 0 {
                vec![(0, w)]
            } else {
                vec![(u, w), (-u, w)]
            };
            cands.into_iter().filter(|&(u, w)| u.gcd(&w) == 1)
        })
    })
}

pub fn polygon_to_isotropy(p: &ConvexLatticePolygon) -> Result<IsotropyData> {
    polygon_to_isotropy_with_shear(p).map(|(d, _)| d)
}

/// Isotropy data read off the lower chain of the sheared polygon, and the
/// shear used: the data's polygon is the image of `p` under it.
pub fn polygon_to_isotropy_with_shear(
    p: &ConvexLatticePolygon,
) -> Result<(IsotropyData, UnimodularMap)> {
    if !p.is_antipodal() {
        return Err(Error::NotSpecialSymmetric);
    }
    let fan = fan_from_polygon(p)?;
    if !is_fano(&fan) {
        return Err(Error::NotFano);
    }
    let verts = p.vertices();
    let n = verts.len();
    let edges: Vec<LatVec> = (0..n).map(|i| &verts[(i + 1) % n] - &verts[i]).collect();
    let (u, w) = shear_directions()
        .find(|&(u, w)| {
            let dir = LatVec::new(u, w);
            edges
                .iter()
                .all(|e| !crate::lattice::cross(&dir, e).is_zero())
        })
        .expect("finitely many edge directions");
    let (u, w) = (BigInt::from(u), BigInt::from(w));
    let (_, s, t) = ext_gcd(&u, &w);
    let shear = UnimodularMap::new(w.clone(), -u, s, t)?;
    let sheared: Vec<LatVec> = verts.iter().map(|v| shear.apply(v)).collect();
    let start = (0..n)
        .min_by(|&a, &b| sheared[a].x.cmp(&sheared[b].x))
        .expect("polygon is nonempty");
    let chain: Vec<LatVec> = (0..n / 2 + 1)
        .map(|i| sheared[(start + i) % n].clone())
        .collect();
    let data = IsotropyData::new(chain)?;
    if !data.condition_a() || !data.condition_b() {
        return Err(Error::InternalInconsistency(format!(
            "lower chain {:?} fails the ordering conditions",
            data.vectors()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
        )));
    }
    Ok((data, shear))
}

/// Volume of the Sasakian-Einstein 5-manifold over the polygon's surface.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SasakianVolume {
    /// Area of the anticanonical polytope.
    #[serde(with = "crate::json::rational")]
    pub vol_sigma: BigRational,
    /// Fano index.
    #[serde(with = "crate::json::int")]
    pub d: BigInt,
    pub vol_m: f64,
}

fn fano_fan(p: &ConvexLatticePolygon) -> Result<AugmentedFan> {
    let fan = fan_from_polygon(p)?;
    if !is_fano(&fan) {
        return Err(Error::NotFano);
    }
    Ok(fan)
}

fn volume_of_fan(fan: &AugmentedFan) -> Result<SasakianVolume> {
    let sigma = sigma_polytope(fan, &SupportFunction::anticanonical(fan))?;
    let vol_sigma = shoelace_area(&sigma)?;
    let d = fano_index(fan)?;
    let vol_m = rat_to_f64(&BigRational::from_integer(d.clone()))
        * (PI / 3.0).powi(3)
        * rat_to_f64(&vol_sigma);
    Ok(SasakianVolume {
        vol_sigma,
        d,
        vol_m,
    })
}

/// `vol(M) = d (pi/3)^3 area(Sigma)` with `d` the Fano index.
pub fn sasakian_volume(p: &ConvexLatticePolygon) -> Result<SasakianVolume> {
    volume_of_fan(&fano_fan(p)?)
}

/// Einstein constant of the metric rescaled to unit volume. The metric has
/// `Ric = 4g`; scaling `g` by `c^2` divides the constant by `c^2` and
/// multiplies the volume by `c^5`, so the unit-volume constant is
/// `4 vol^(2/5)`.
pub fn normalized_einstein_constant(p: &ConvexLatticePolygon) -> Result<f64> {
    Ok(einstein_constant_from_volume(sasakian_volume(p)?.vol_m))
}

fn einstein_constant_from_volume(vol_m: f64) -> f64 {
    4.0 * vol_m.powf(0.4)
}

/// Every invariant attached to one special symmetric Fano polygon.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiamondReport {
    pub omega: Option<WeightMatrix>,
    pub isotropy: IsotropyData,
    pub polygon: ConvexLatticePolygon,
    #[serde(with = "crate::json::int")]
    pub fano_index: BigInt,
    #[serde(with = "crate::json::int_vec")]
    pub cone_orders: Vec<BigInt>,
    #[serde(with = "crate::json::int")]
    pub ord_x: BigInt,
    #[serde(rename = "b2_X")]
    pub b2_x: usize,
    #[serde(rename = "b2_S")]
    pub b2_s: usize,
    pub m: usize,
    /// `None` when the total space is not a smooth simply connected manifold.
    pub diffeotype: Option<Diffeotype>,
    #[serde(rename = "smooth_M")]
    pub smooth_m: bool,
    pub pi1_orb_trivial: bool,
    #[serde(with = "crate::json::rational")]
    pub vol_sigma: BigRational,
    #[serde(rename = "vol_M")]
    pub vol_m: f64,
    pub lambda_normalized: f64,
    pub ke_exists: bool,
    pub s_cohomology: Option<CohomologyTable>,
}

fn assemble(
    polygon: ConvexLatticePolygon,
    isotropy: IsotropyData,
    omega: Option<WeightMatrix>,
    s_cohomology: Option<CohomologyTable>,
) -> Result<DiamondReport> {
    let fan = fano_fan(&polygon)?;
    let orb = orbifold_report(&fan);
    let vol = volume_of_fan(&fan)?;
    let smooth_m = seifert_total_space_smooth(&fan)?;
    let pi1 = pi1_orb_trivial(&fan);
    let diffeotype = if smooth_m && pi1 {
        Some(homology_of_m(&fan)?.diffeotype)
    } else {
        None
    };
    let b2_x = fan.num_rays() - 2;
    Ok(DiamondReport {
        omega,
        b2_s: isotropy.k(),
        isotropy,
        polygon,
        fano_index: vol.d,
        cone_orders: orb.cone_orders,
        ord_x: orb.ord_x,
        b2_x,
        m: b2_x - 1,
        diffeotype,
        smooth_m,
        pi1_orb_trivial: pi1,
        vol_sigma: vol.vol_sigma,
        vol_m: vol.vol_m,
        lambda_normalized: einstein_constant_from_volume(vol.vol_m),
        ke_exists: admits_kahler_einstein(&fan),
        s_cohomology,
    })
}

/// Report for a special symmetric Fano polygon given directly.
pub fn polygon_to_diamond(p: &ConvexLatticePolygon) -> Result<DiamondReport> {
    let isotropy = polygon_to_isotropy(p)?;
    assemble(p.clone(), isotropy, None, None)
}

/// Report for isotropy data given directly.
pub fn isotropy_to_diamond(d: &IsotropyData) -> Result<DiamondReport> {
    let polygon = isotropy_to_polygon(d)?;
    assemble(polygon, d.clone(), None, None)
}

/// The whole chain from an admissible weight matrix. A matrix that is not
/// reduced is first divided through by its row gcds; if that is not enough
/// the call fails with `NotReduced`.
pub fn weights_to_diamond(w: &WeightMatrix) -> Result<DiamondReport> {
    if !is_admissible(w)? {
        return Err(Error::NotAdmissible);
    }
    let w = if is_reduced(w) {
        w.clone()
    } else {
        reduce_rows(w)
    };
    if !is_reduced(&w) {
        return Err(Error::NotReduced(format!(
            "determinantal divisor is {} even after dividing rows by their gcd",
            determinantal_divisor(&w)?
        )));
    }
    let k = w.k();
    let isotropy = isotropy_data(&w)?;
    let polygon = isotropy_to_polygon(&isotropy)?;
    let cohomology = s_omega_cohomology(&w)?;
    let report = assemble(polygon, isotropy, Some(w.clone()), Some(cohomology))?;

    let mut problems = Vec::new();
    if report.m != 2 * k + 1 {
        problems.push(format!("m = {} but 2k+1 = {}", report.m, 2 * k + 1));
    }
    if report.polygon.len() != 2 * k + 4 {
        problems.push(format!(
            "polygon has {} vertices, expected {}",
            report.polygon.len(),
            2 * k + 4
        ));
    }
    if !report.ke_exists {
        problems.push("polygon does not admit a Kähler-Einstein metric".into());
    }
    if !report.smooth_m {
        problems.push("Seifert bundle over the surface is not smooth".into());
    }
    if !report.pi1_orb_trivial {
        problems.push("orbifold fundamental group is not trivial".into());
    }
    if !(report.fano_index.is_one() || report.fano_index == BigInt::from(2)) {
        problems.push(format!("Fano index {} is not 1 or 2", report.fano_index));
    }
    if !problems.is_empty() {
        return Err(Error::InternalInconsistency(format!(
            "weight matrix {}: {}; isotropy {:?}; polygon {:?}",
            w.entries(),
            problems.join("; "),
            report
                .isotropy
                .vectors()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>(),
            report
                .polygon
                .vertices()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>(),
        )));
    }
    Ok(report)
}

/// `p = (2q-1, 1, 1)` and its report. The quotient surface is the weighted
/// plane with weights `(p2+p3, p1+p3, p1+p2) = (2, 2q, 2q) ~ (1, q, q)`.
pub fn family_galicki_lawson(q: u64) -> Result<(WeightMatrix, DiamondReport)> {
    if q == 0 {
        return Err(Error::InvalidParameter("q must be at least 1".into()));
    }
    let q = BigInt::from(q);
    let p = [&q * 2 - 1, BigInt::one(), BigInt::one()];
    let a = [&p[1] + &p[2], &p[0] + &p[2], &p[0] + &p[1]];
    let g = a[0].gcd(&a[1]).gcd(&a[2]);
    let reduced: Vec<BigInt> = a.iter().map(|x| x / &g).collect();
    if reduced != [BigInt::one(), q.clone(), q.clone()] {
        return Err(Error::InternalInconsistency(format!(
            "quotient weights {reduced:?} are not (1, {q}, {q})"
        )));
    }
    let w = WeightMatrix::new(vec![p.to_vec()])?;
    let report = weights_to_diamond(&w)?;
    Ok((w, report))
}

fn primes_from(start: usize, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut seen = 0;
    let mut n = 2u64;
    while out.len() < count {
        if (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
        {
            if seen >= start {
                out.push(n);
            }
            seen += 1;
        }
        n += 1;
    }
    out
}

/// `count` admissible `[I | a | b]` matrices of size `k`, whose entries are
/// distinct primes taken from a window that slides with each member, so all
/// `a_i, b_j` are pairwise coprime. The seed picks the starting prime. The
/// torsion orders strictly increase along the list.
pub fn family_general(k: usize, count: usize, seed: u64) -> Result<Vec<WeightMatrix>> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let offset = (seed % 16) as usize;
    let attempts = 10 * count + 100;
    let pool = primes_from(offset, attempts + 2 * k);
    let mut out: Vec<WeightMatrix> = Vec::with_capacity(count);
    let mut last = BigInt::zero();
    for j in 0..attempts {
        if out.len() == count {
            break;
        }
        let window: Vec<BigInt> = pool[j..j + 2 * k]
            .iter()
            .map(|&x| BigInt::from(x))
            .collect();
        let w = WeightMatrix::identity_augmented(&window[..k], &window[k..])?;
        if !is_admissible(&w)? {
            return Err(Error::InternalInconsistency(format!(
                "generated matrix {} is not admissible",
                w.entries()
            )));
        }
        let order = g_omega_order(&w)?;
        if order > last {
            last = order;
            out.push(w);
        }
    }
    if out.len() < count {
        return Err(Error::InternalInconsistency(format!(
            "only {} of {count} family members found",
            out.len()
        )));
    }
    Ok(out)
}
