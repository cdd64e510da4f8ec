use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{
    determinantal_divisor, is_admissible, is_reduced, require_nondegenerate, WeightMatrix,
};
use crate::error::{Error, Result};
use crate::lattice::{
    cross, ext_gcd, hermite_row_basis, lattice_span_index, smith_normal_form, IntMatrix, LatVec,
};

/// Edge stabilizer vectors `v_0 .. v_{k+2}` of the torus action on the
/// quotient orbifold, with `v_0 = -v_{k+2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<LatVec>", into = "Vec<LatVec>")]
pub struct IsotropyData {
    v: Vec<LatVec>,
}

impl IsotropyData {
    /// Checks only the shape: at least three vectors and `v_0 = -v_last`.
    pub fn new(v: Vec<LatVec>) -> Result<Self> {
        if v.len() < 3 {
            return Err(Error::InvalidParameter(format!(
                "isotropy data needs at least 3 vectors, got {}",
                v.len()
            )));
        }
        if v[0] != -&v[v.len() - 1] {
            return Err(Error::InvalidParameter(format!(
                "first vector {} is not minus the last {}",
                v[0],
                v[v.len() - 1]
            )));
        }
        Ok(IsotropyData { v })
    }

    pub fn from_pairs(pairs: &[(i64, i64)]) -> Result<Self> {
        IsotropyData::new(pairs.iter().map(|&(x, y)| LatVec::new(x, y)).collect())
    }

    pub fn vectors(&self) -> &[LatVec] {
        &self.v
    }

    /// The `k` of the weight matrix this data would come from.
    pub fn k(&self) -> usize {
        self.v.len() - 3
    }

    /// First coordinates strictly increase.
    pub fn condition_a(&self) -> bool {
        self.v.windows(2).all(|w| w[0].x < w[1].x)
    }

    /// Slopes of consecutive differences strictly increase.
    pub fn condition_b(&self) -> bool {
        let steps: Vec<LatVec> = self.v.windows(2).map(|w| &w[1] - &w[0]).collect();
        steps.iter().all(|s| s.x.is_positive())
            && steps.windows(2).all(|s| cross(&s[0], &s[1]).is_positive())
    }

    pub fn span_index(&self) -> BigInt {
        lattice_span_index(&self.v)
    }
}

impl TryFrom<Vec<LatVec>> for IsotropyData {
    type Error = Error;
    fn try_from(v: Vec<LatVec>) -> Result<Self> {
        IsotropyData::new(v)
    }
}

impl From<IsotropyData> for Vec<LatVec> {
    fn from(d: IsotropyData) -> Self {
        d.v
    }
}

/// Both ordering conditions hold and the vectors span `Z^2`.
pub fn cs_conditions_check(d: &IsotropyData) -> bool {
    d.condition_a() && d.condition_b() && d.span_index().is_one()
}

/// A `2 x (k+2)` matrix whose rows are a basis of the integer kernel of `w`.
/// When the last two columns of that basis form an invertible block, the
/// basis is changed so that block is the identity.
pub fn kernel_phi(w: &WeightMatrix) -> Result<IntMatrix> {
    require_nondegenerate(w)?;
    if !is_reduced(w) {
        return Err(Error::NotReduced(format!(
            "determinantal divisor is {}",
            determinantal_divisor(w)?
        )));
    }
    let (k, n) = (w.k(), w.n());
    let snf = smith_normal_form(w.entries());
    let mut phi = IntMatrix::zeros(2, n);
    for r in 0..2 {
        for c in 0..n {
            phi[(r, c)] = snf.v[(c, k + r)].clone();
        }
    }
    let (p, q, s, t) = (
        phi[(0, k)].clone(),
        phi[(0, k + 1)].clone(),
        phi[(1, k)].clone(),
        phi[(1, k + 1)].clone(),
    );
    let det = &p * &t - &q * &s;
    if det.abs().is_one() {
        // inverse of [[p, q], [s, t]] is adj / det, and det = ±1
        let inv = IntMatrix::from_rows(&[vec![&t * &det, -&q * &det], vec![-&s * &det, &p * &det]]);
        phi = &inv * &phi;
    }
    if !(w.entries() * &phi.transpose()).is_zero() {
        return Err(Error::InternalInconsistency(format!(
            "kernel basis {phi} does not annihilate the weight matrix"
        )));
    }
    let factors = smith_normal_form(&phi).invariant_factors();
    if factors != [BigInt::one(), BigInt::one()] {
        return Err(Error::InternalInconsistency(format!(
            "kernel map {phi} is not surjective: invariant factors {factors:?}"
        )));
    }
    Ok(phi)
}

/// Primitive functionals ordered by `|g1| + |g2|`, one per sign class.
fn functionals() -> impl Iterator<Item = (i64, i64)> {
    (1i64..).flat_map(|s| {
        (0..=s).rev().flat_map(move |g1| {
            let g2 = s - g1;
            let mut out = vec![(g1, g2)];
            if g1 > 0 && g2 > 0 {
                out.push((g1, -g2));
            }
            out.into_iter().filter(|&(a, b)| a.gcd(&b) == 1)
        })
    })
}

/// Changes basis of the target, flips column signs and sorts columns so
/// every column `(b, c)` has `b > 0` and the slopes `c / b` strictly
/// increase, the smallest lying in `[0, 1)`.
pub fn normalize_phi(phi: &IntMatrix) -> Result<IntMatrix> {
    if phi.nrows() != 2 {
        return Err(Error::InvalidParameter(format!(
            "expected a matrix with 2 rows, got {}",
            phi.nrows()
        )));
    }
    let cols: Vec<LatVec> = (0..phi.ncols())
        .map(|j| LatVec::new(phi[(0, j)].clone(), phi[(1, j)].clone()))
        .collect();
    if let Some(j) = cols.iter().position(LatVec::is_zero) {
        return Err(Error::NormalizationImpossible(format!(
            "column {} is zero",
            j + 1
        )));
    }
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            if cross(&cols[i], &cols[j]).is_zero() {
                return Err(Error::NormalizationImpossible(format!(
                    "columns {} and {} are parallel, so their slopes tie in every basis",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    // with no parallel columns some functional is nonzero on all of them
    let g = functionals()
        .map(|(a, b)| LatVec::new(a, b))
        .find(|g| cols.iter().all(|c| !g.dot(c).is_zero()))
        .expect("finitely many lines to avoid");
    let (_, s, t) = ext_gcd(&g.x, &g.y);
    let h = LatVec::new(-t, s);
    let mut out: Vec<LatVec> = cols
        .iter()
        .map(|c| {
            let v = LatVec::new(g.dot(c), h.dot(c));
            if v.x.is_negative() {
                -&v
            } else {
                v
            }
        })
        .collect();
    let by_slope = |a: &LatVec, b: &LatVec| -> Ordering { (&a.y * &b.x).cmp(&(&b.y * &a.x)) };
    out.sort_by(by_slope);
    let shift = -out[0].y.div_floor(&out[0].x);
    for v in &mut out {
        v.y += &shift * &v.x;
    }
    Ok(IntMatrix::from_columns(&out))
}

/// `v_i = sum_{l <= i} col_l - sum_{l > i} col_l` for `i = 0 .. k+2`.
pub fn raw_isotropy_vectors(normalized_phi: &IntMatrix) -> Vec<LatVec> {
    let cols: Vec<LatVec> = (0..normalized_phi.ncols())
        .map(|j| {
            LatVec::new(
                normalized_phi[(0, j)].clone(),
                normalized_phi[(1, j)].clone(),
            )
        })
        .collect();
    let total = cols.iter().fold(LatVec::zero(), |acc, c| &acc + c);
    let mut v = vec![-&total];
    let mut partial = LatVec::zero();
    let two = BigInt::from(2);
    for c in &cols {
        partial = &partial + c;
        v.push(&partial.scale(&two) - &total);
    }
    v
}

/// Coordinates of the vectors in an upper-triangular basis of the lattice
/// they span. The coordinate change is lower triangular with positive
/// diagonal, so both ordering conditions survive.
pub fn rebase_to_span(v: &[LatVec]) -> Result<Vec<LatVec>> {
    let (e1, e2) = hermite_row_basis(v).ok_or_else(|| {
        Error::InternalInconsistency("isotropy vectors do not span a rank-2 lattice".into())
    })?;
    v.iter()
        .map(|p| {
            let (alpha, r) = p.x.div_rem(&e1.x);
            let (beta, r2) = (&p.y - &alpha * &e1.y).div_rem(&e2.y);
            if !r.is_zero() || !r2.is_zero() {
                return Err(Error::InternalInconsistency(format!(
                    "{p} is not in the lattice spanned by {e1}, {e2}"
                )));
            }
            Ok(LatVec::new(alpha, beta))
        })
        .collect()
}

/// Isotropy data of the quotient by the torus of an admissible, reduced
/// weight matrix.
pub fn isotropy_data(w: &WeightMatrix) -> Result<IsotropyData> {
    if !is_admissible(w)? {
        return Err(Error::NotAdmissible);
    }
    let phi = normalize_phi(&kernel_phi(w)?)?;
    let raw = raw_isotropy_vectors(&phi);
    let data = IsotropyData::new(rebase_to_span(&raw)?)?;
    if !cs_conditions_check(&data) {
        return Err(Error::InternalInconsistency(format!(
            "isotropy data {:?} from {} fails the ordering or span conditions",
            data.vectors()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>(),
            w.entries()
        )));
    }
    Ok(data)
}
