//! Rank-k numerical ranges of normal matrices.
//!
//! For normal `A` with eigenvalues `lambda_1..lambda_N` (with multiplicity),
//! `Lambda_k(A)` is the intersection of the convex hulls of every choice of
//! `N - k + 1` eigenvalues. Only the set of distinct values picked matters,
//! and a bigger set has a bigger hull, so [`rank_k_range_normal`] intersects
//! hulls over the minimal supports whose multiplicities reach `N - k + 1`.
//! [`rank_k_range_bruteforce`] enumerates the subsets directly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{intersect_all, ConvexRegion, Point2};
use crate::pauli::{i_pow, CorrelatedPauli, PauliKind};
use crate::state::{scalar_fit, Isometry, Matrix, C64};

/// Default tolerance for merging numerically equal eigenvalues.
pub const EIGEN_MERGE_TOL: f64 = 1e-9;

/// Largest number of distinct eigenvalues for support enumeration.
const MAX_DISTINCT: usize = 24;

/// Largest expanded multiset size accepted by the brute-force routine.
pub const MAX_BRUTEFORCE: usize = 20;

/// Distinct eigenvalues with multiplicities.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenMultiset {
    entries: Vec<(C64, usize)>,
}

impl EigenMultiset {
    /// Validates that values are separated by more than `EIGEN_MERGE_TOL`
    /// and multiplicities are positive.
    pub fn new(entries: Vec<(C64, usize)>) -> Result<Self> {
        for (i, &(v, m)) in entries.iter().enumerate() {
            if m == 0 {
                return Err(Error::InvalidNoise(format!("eigenvalue {v} has multiplicity 0")));
            }
            if entries[..i].iter().any(|&(w, _)| (w - v).norm() <= EIGEN_MERGE_TOL) {
                return Err(Error::InvalidNoise(format!("eigenvalue {v} is repeated")));
            }
        }
        Ok(Self { entries })
    }

    /// Groups `values` into distinct eigenvalues, merging within `tol` of
    /// the first representative seen.
    pub fn from_values(values: &[C64], tol: f64) -> Self {
        let mut entries: Vec<(C64, usize)> = Vec::new();
        for &v in values {
            match entries.iter_mut().find(|(w, _)| (*w - v).norm() <= tol) {
                Some(e) => e.1 += 1,
                None => entries.push((v, 1)),
            }
        }
        Self { entries }
    }

    pub fn entries(&self) -> &[(C64, usize)] {
        &self.entries
    }

    /// Total multiplicity `N`.
    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn multiplicity_of(&self, value: C64, tol: f64) -> usize {
        self.entries
            .iter()
            .find(|(w, _)| (*w - value).norm() <= tol)
            .map_or(0, |e| e.1)
    }

    fn check_rank(&self, k: usize) -> Result<usize> {
        let total = self.total();
        if k == 0 || k + 1 > total {
            return Err(Error::RankOutOfRange {
                k,
                max: total.saturating_sub(1),
            });
        }
        Ok(total - k + 1)
    }
}

fn to_point(z: C64) -> Point2 {
    Point2::new(z.re, z.im)
}

/// `Lambda_k` of a normal matrix with eigenvalues `eigs`, by minimal supports.
pub fn rank_k_range_normal(eigs: &EigenMultiset, k: usize) -> Result<ConvexRegion> {
    let need = eigs.check_rank(k)?;
    let m = eigs.entries.len();
    if m > MAX_DISTINCT {
        return Err(Error::EnumerationTooLarge(m));
    }
    let mult: Vec<usize> = eigs.entries.iter().map(|e| e.1).collect();
    let weight = |mask: u32| -> usize { (0..m).filter(|i| mask >> i & 1 == 1).map(|i| mult[i]).sum() };
    let mut hulls = Vec::new();
    for mask in 1u32..(1u32 << m) {
        let w = weight(mask);
        if w < need {
            continue;
        }
        // minimal: dropping any member falls short
        let minimal = (0..m)
            .filter(|i| mask >> i & 1 == 1)
            .all(|i| w - mult[i] < need);
        if !minimal {
            continue;
        }
        let pts: Vec<Point2> = (0..m)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| to_point(eigs.entries[i].0))
            .collect();
        hulls.push(ConvexRegion::hull(&pts));
    }
    Ok(intersect_all(&hulls).unwrap_or_else(ConvexRegion::empty))
}

/// `Lambda_k` by enumerating every `(N - k + 1)`-subset of the expanded
/// eigenvalue list.
pub fn rank_k_range_bruteforce(eigs: &EigenMultiset, k: usize) -> Result<ConvexRegion> {
    let total = eigs.total();
    if total > MAX_BRUTEFORCE {
        return Err(Error::EnumerationTooLarge(total));
    }
    let need = eigs.check_rank(k)?;
    let expanded: Vec<Point2> = eigs
        .entries
        .iter()
        .flat_map(|&(v, m)| std::iter::repeat_n(to_point(v), m))
        .collect();

    let mut acc: Option<ConvexRegion> = None;
    let mut idx: Vec<usize> = (0..need).collect();
    loop {
        let pts: Vec<Point2> = idx.iter().map(|&i| expanded[i]).collect();
        let hull = ConvexRegion::hull(&pts);
        acc = Some(match acc {
            None => hull,
            Some(a) => crate::geometry::intersect_convex(&a, &hull),
        });
        // next combination in lexicographic order
        let mut i = need;
        loop {
            if i == 0 {
                return Ok(acc.unwrap_or_else(ConvexRegion::empty));
            }
            i -= 1;
            if idx[i] != i + total - need {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..need {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Scalars `a_j` with `P A_j P = a_j P` for `P = V V^+`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JointRangePoint {
    pub a: Vec<C64>,
    /// `max_j |P A_j P - a_j P|`.
    pub residual: f64,
}

/// Certificate that `(a_1, ..., a_m)` lies in the joint rank-`k` range, `k`
/// being the number of columns of `v`; `None` if some `P A_j P` is not a
/// multiple of `P` within `tol`.
pub fn joint_membership(v: &Isometry, ops: &[Matrix], tol: f64) -> Result<Option<JointRangePoint>> {
    let p = v.projector();
    let mut a = Vec::with_capacity(ops.len());
    let mut worst: f64 = 0.0;
    for op in ops {
        let (mu, res) = scalar_fit(&p.sandwich(op)?, &p)?;
        if res > tol {
            return Ok(None);
        }
        worst = worst.max(res);
        a.push(mu);
    }
    Ok(Some(JointRangePoint { a, residual: worst }))
}

/// Entry of the 2x2 block of `op` on `span{|j>, |~j>}`; returns the
/// coefficient of `|row>` in `op |col>` for `row, col` in that pair.
fn block_entry(op: &CorrelatedPauli, row: usize, col: usize) -> C64 {
    let sign = |j: usize| if j.count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
    let zero = C64::new(0.0, 0.0);
    match op.kind() {
        PauliKind::I => if row == col { C64::new(1.0, 0.0) } else { zero },
        PauliKind::Z => if row == col { C64::new(sign(col), 0.0) } else { zero },
        PauliKind::X => if row != col { C64::new(1.0, 0.0) } else { zero },
        PauliKind::Y => if row != col { i_pow(op.n() as u32) * sign(col) } else { zero },
    }
}

/// Eigenvalues of `A + iB` for commuting correlated Paulis `A`, `B`.
///
/// Every correlated Pauli preserves each plane `span{|j>, |~j>}`, so the
/// spectrum is the union of the spectra of `2^(n-1)` blocks of size 2.
pub fn pair_eigenvalues(a: &CorrelatedPauli, b: &CorrelatedPauli) -> Result<Vec<C64>> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            got: b.n(),
        });
    }
    let (ab, ph_ab) = a.product_phase(b)?;
    let (ba, ph_ba) = b.product_phase(a)?;
    if ab.kind() != ba.kind() || (ph_ab - ph_ba).norm() > 1e-12 {
        return Err(Error::NonCommuting);
    }
    let n = a.n();
    let mask = (1usize << n) - 1;
    let i = C64::new(0.0, 1.0);
    let mut out = Vec::with_capacity(1 << n);
    for j in 0..1usize << (n - 1) {
        let k = !j & mask;
        let m = |r: usize, c: usize| block_entry(a, r, c) + i * block_entry(b, r, c);
        let (p, q, r, s) = (m(j, j), m(j, k), m(k, j), m(k, k));
        let half_tr = (p + s) * 0.5;
        let disc = ((p - s) * 0.5).powi(2) + q * r;
        let root = disc.sqrt();
        out.push(half_tr + root);
        out.push(half_tr - root);
    }
    Ok(out)
}

/// `Lambda_k(A, B) = Lambda_k(A + iB)` for commuting correlated Paulis.
pub fn normal_range_of_pair(a: &CorrelatedPauli, b: &CorrelatedPauli, k: usize) -> Result<ConvexRegion> {
    let eigs = EigenMultiset::from_values(&pair_eigenvalues(a, b)?, EIGEN_MERGE_TOL);
    rank_k_range_normal(&eigs, k)
}

/// The `{+-1 +- i}` multiset, each with multiplicity `mult`.
pub fn square_multiset(mult: usize) -> EigenMultiset {
    let vals = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];
    EigenMultiset {
        entries: vals.iter().map(|&(re, im)| (C64::new(re, im), mult)).collect(),
    }
}
