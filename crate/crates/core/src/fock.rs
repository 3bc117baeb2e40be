//! Truncated right quaternionic Fock space.
//!
//! Vectors store right coefficients `c_k = <Phi_k|f>`; operators are
//! `dim x dim` quaternion matrices acting with the entry on the left,
//! `(Af)_j = sum_k A_jk c_k`. Matrices are held as four real planes so a
//! product is a handful of real GEMMs.

use ndarray::linalg::general_mat_mul;
use ndarray::{s, Array2, ArrayView2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::{to_matrix, Quaternion, SliceAxis};

/// Default truncation tolerance for [`op_exp`].
pub const DEFAULT_EXP_TOL: f64 = 1e-16;

/// Scaled-norm target for scaling and squaring.
const EXP_THETA: f64 = 0.5;
const EXP_MAX_DEGREE: usize = 60;
const EXP_MAX_SQUARINGS: u32 = 60;

// ── summation ────────────────────────────────────────────────────────

/// Pairwise (cascade) sum with a fixed split, bit-reproducible.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().fold(0.0, |a, &b| a + b);
    }
    let (l, r) = v.split_at(v.len() / 2);
    pairwise_sum(l) + pairwise_sum(r)
}

pub fn pairwise_sum_q(v: &[Quaternion]) -> Quaternion {
    if v.len() <= 8 {
        return v.iter().fold(Quaternion::ZERO, |a, &b| a + b);
    }
    let (l, r) = v.split_at(v.len() / 2);
    pairwise_sum_q(l) + pairwise_sum_q(r)
}

// ── vectors ──────────────────────────────────────────────────────────

/// Truncated vector over `Phi_0 .. Phi_{dim-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    coeffs: Vec<Quaternion>,
}

impl FockVector {
    pub fn new(coeffs: Vec<Quaternion>) -> Self {
        Self { coeffs }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![Quaternion::ZERO; dim])
    }

    /// The unit vector `Phi_k`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.coeffs[k] = Quaternion::ONE;
        v
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    #[inline]
    pub fn coeffs(&self) -> &[Quaternion] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Quaternion> {
        self.coeffs
    }

    /// `f q`: every coefficient multiplied by `q` on the right.
    pub fn right_scale(&self, q: Quaternion) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * q).collect())
    }

    pub fn norm_sqr(&self) -> f64 {
        let sq: Vec<f64> = self.coeffs.iter().map(|c| c.norm_sqr()).collect();
        pairwise_sum(&sq)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Squared mass in coefficients `from..dim`.
    pub fn tail_mass(&self, from: usize) -> f64 {
        let sq: Vec<f64> = self.coeffs[from.min(self.dim())..]
            .iter()
            .map(|c| c.norm_sqr())
            .collect();
        pairwise_sum(&sq)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        check_dim(self.dim(), o.dim())?;
        Ok(Self::new(
            self.coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(&a, &b)| a + b)
                .collect(),
        ))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        check_dim(self.dim(), o.dim())?;
        Ok(Self::new(
            self.coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(&a, &b)| a - b)
                .collect(),
        ))
    }

    /// Largest coefficient distance, over all of `0..dim`.
    pub fn max_abs_diff(&self, o: &Self) -> Result<f64> {
        check_dim(self.dim(), o.dim())?;
        Ok(self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(&a, &b)| a.dist(b))
            .fold(0.0, f64::max))
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `<f|g> = sum_k conj(f_k) g_k`.
pub fn inner(f: &FockVector, g: &FockVector) -> Result<Quaternion> {
    check_dim(f.dim(), g.dim())?;
    let terms: Vec<Quaternion> = f
        .coeffs
        .iter()
        .zip(&g.coeffs)
        .map(|(&a, &b)| a.conj() * b)
        .collect();
    Ok(pairwise_sum_q(&terms))
}

/// Basis-fixed left scalar multiplication: `(q.f)_k = q f_k`.
pub fn left_mul(q: Quaternion, f: &FockVector) -> FockVector {
    FockVector::new(f.coeffs.iter().map(|&c| q * c).collect())
}

// ── protected block ──────────────────────────────────────────────────

/// Leading `dim - margin` basis states, where truncation does not reach
/// identities of low degree in `a`, `a^dag`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtectedBlock {
    pub dim: usize,
    pub margin: usize,
}

impl ProtectedBlock {
    pub fn new(dim: usize, margin: usize) -> Result<Self> {
        if margin == 0 || margin >= dim {
            return Err(Error::InvalidBlock { dim, margin });
        }
        Ok(Self { dim, margin })
    }

    /// Half the space, the default for exponentials at `|p|, |q| <= 1`.
    pub fn half(dim: usize) -> Result<Self> {
        Self::new(dim, dim / 2)
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.dim - self.margin
    }
}

// ── operators ────────────────────────────────────────────────────────

/// `dim x dim` quaternion matrix, `A[j][k] = <Phi_j|A Phi_k>`.
#[derive(Debug, Clone, PartialEq)]
pub struct QOperator {
    w: Array2<f64>,
    x: Array2<f64>,
    y: Array2<f64>,
    z: Array2<f64>,
}

impl QOperator {
    pub fn zeros(dim: usize) -> Self {
        let z = Array2::zeros((dim, dim));
        Self {
            w: z.clone(),
            x: z.clone(),
            y: z.clone(),
            z,
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zeros(dim);
        op.w.diag_mut().fill(1.0);
        op
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut op = Self::zeros(dim);
        for j in 0..dim {
            for k in 0..dim {
                op.set(j, k, f(j, k));
            }
        }
        op
    }

    /// Real matrix embedded as the `w` plane.
    pub fn from_real(m: Array2<f64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "operator matrices are square");
        let z = Array2::zeros(m.raw_dim());
        Self {
            w: m,
            x: z.clone(),
            y: z.clone(),
            z,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.w.nrows()
    }

    #[inline]
    pub fn get(&self, j: usize, k: usize) -> Quaternion {
        Quaternion::new(
            self.w[[j, k]],
            self.x[[j, k]],
            self.y[[j, k]],
            self.z[[j, k]],
        )
    }

    #[inline]
    pub fn set(&mut self, j: usize, k: usize, q: Quaternion) {
        self.w[[j, k]] = q.w;
        self.x[[j, k]] = q.x;
        self.y[[j, k]] = q.y;
        self.z[[j, k]] = q.z;
    }

    /// The four real planes `(w, x, y, z)`.
    pub fn planes(&self) -> [&Array2<f64>; 4] {
        [&self.w, &self.x, &self.y, &self.z]
    }

    fn planes_mut(&mut self) -> [&mut Array2<f64>; 4] {
        [&mut self.w, &mut self.x, &mut self.y, &mut self.z]
    }

    pub fn apply(&self, f: &FockVector) -> Result<FockVector> {
        check_dim(self.dim(), f.dim())?;
        let d = self.dim();
        let mut buf = Vec::with_capacity(d);
        let out = (0..d)
            .map(|j| {
                buf.clear();
                buf.extend((0..d).map(|k| self.get(j, k) * f.coeffs[k]));
                pairwise_sum_q(&buf)
            })
            .collect();
        Ok(FockVector::new(out))
    }

    pub fn compose(&self, o: &Self) -> Result<Self> {
        check_dim(self.dim(), o.dim())?;
        Ok(self.matmul(o))
    }

    fn matmul(&self, o: &Self) -> Self {
        let [w, x, y, z] = mul_planes(
            self.planes().map(|p| p.view()),
            o.planes().map(|p| p.view()),
        );
        Self { w, x, y, z }
    }

    fn zip_planes(&self, o: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut out = self.clone();
        for (dst, src) in out.planes_mut().into_iter().zip(o.planes()) {
            dst.zip_mut_with(src, |a, &b| *a = f(*a, b));
        }
        out
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        check_dim(self.dim(), o.dim())?;
        Ok(self.zip_planes(o, |a, b| a + b))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        check_dim(self.dim(), o.dim())?;
        Ok(self.zip_planes(o, |a, b| a - b))
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        for p in out.planes_mut() {
            p.mapv_inplace(|v| v * s);
        }
        out
    }

    /// `adjoint[j][k] = conj(A[k][j])`.
    pub fn adjoint(&self) -> Self {
        Self {
            w: self.w.t().to_owned(),
            x: self.x.t().mapv(|v| -v),
            y: self.y.t().mapv(|v| -v),
            z: self.z.t().mapv(|v| -v),
        }
    }

    pub fn commutator(&self, o: &Self) -> Result<Self> {
        check_dim(self.dim(), o.dim())?;
        Ok(self.matmul(o).zip_planes(&o.matmul(self), |a, b| a - b))
    }

    /// Induced 1-norm with entry moduli; submultiplicative for quaternion matrices.
    pub fn one_norm(&self) -> f64 {
        let d = self.dim();
        (0..d)
            .map(|k| {
                let col: Vec<f64> = (0..d).map(|j| self.get(j, k).norm()).collect();
                pairwise_sum(&col)
            })
            .fold(0.0, f64::max)
    }

    /// Largest entry distance over the full matrix.
    pub fn max_abs_diff(&self, o: &Self) -> Result<f64> {
        check_dim(self.dim(), o.dim())?;
        Ok(self.block_max_diff(o, self.dim()))
    }

    /// Largest entry distance over the leading `n x n` block.
    pub fn block_max_diff(&self, o: &Self, n: usize) -> f64 {
        let n = n.min(self.dim()).min(o.dim());
        let mut m: f64 = 0.0;
        for j in 0..n {
            for k in 0..n {
                m = m.max(self.get(j, k).dist(o.get(j, k)));
            }
        }
        m
    }

    /// Largest entry modulus over the leading `n x n` block.
    pub fn block_max_abs(&self, n: usize) -> f64 {
        let n = n.min(self.dim());
        let mut m: f64 = 0.0;
        for j in 0..n {
            for k in 0..n {
                m = m.max(self.get(j, k).norm());
            }
        }
        m
    }

    /// If every entry lies in one slice `R + I R`, returns that axis
    /// (`None` together with `true` for purely real matrices).
    fn common_slice(&self) -> Option<Option<SliceAxis>> {
        let d = self.dim();
        let mut best = (0.0, 0, 0);
        for j in 0..d {
            for k in 0..d {
                let n = self.get(j, k).imag_norm();
                if n > best.0 {
                    best = (n, j, k);
                }
            }
        }
        if best.0 == 0.0 {
            return Some(None);
        }
        let axis = SliceAxis::of(self.get(best.1, best.2))?;
        let scale = best.0;
        for j in 0..d {
            for k in 0..d {
                if axis.off_slice(self.get(j, k)) > 1e-15 * scale {
                    return None;
                }
            }
        }
        Some(Some(axis))
    }

    /// Entries rewritten as `w + t i`, with `t` the coordinate along `axis`.
    fn project_to_i(&self, axis: SliceAxis) -> Self {
        let d = self.dim();
        let mut out = Self::zeros(d);
        for j in 0..d {
            for k in 0..d {
                let (re, im) = axis.coords(self.get(j, k));
                out.w[[j, k]] = re;
                out.x[[j, k]] = im;
            }
        }
        out
    }

    fn lift_from_i(&self, axis: SliceAxis) -> Self {
        let mut out = Self::zeros(self.dim());
        out.w.assign(&self.w);
        out.x = self.x.mapv(|t| t * axis.ax);
        out.y = self.x.mapv(|t| t * axis.ay);
        out.z = self.x.mapv(|t| t * axis.az);
        out
    }
}

// (plane of a, plane of b, sign) for each output plane of a Hamilton product
const TERMS: [[(usize, usize, f64); 4]; 4] = [
    [(0, 0, 1.0), (1, 1, -1.0), (2, 2, -1.0), (3, 3, -1.0)],
    [(0, 1, 1.0), (1, 0, 1.0), (2, 3, 1.0), (3, 2, -1.0)],
    [(0, 2, 1.0), (1, 3, -1.0), (2, 0, 1.0), (3, 1, 1.0)],
    [(0, 3, 1.0), (1, 2, 1.0), (2, 1, -1.0), (3, 0, 1.0)],
];

/// Product of two quaternion matrices held as (possibly rectangular) planes.
fn mul_planes(a: [ArrayView2<f64>; 4], b: [ArrayView2<f64>; 4]) -> [Array2<f64>; 4] {
    let shape = (a[0].nrows(), b[0].ncols());
    let az = a.map(|p| p.iter().all(|&v| v == 0.0));
    let bz = b.map(|p| p.iter().all(|&v| v == 0.0));
    let mut out: [Array2<f64>; 4] = std::array::from_fn(|_| Array2::zeros(shape));
    for (dst, terms) in out.iter_mut().zip(TERMS.iter()) {
        for &(i, k, s) in terms {
            if az[i] || bz[k] {
                continue;
            }
            general_mat_mul(s, &a[i], &b[k], 1.0, dst);
        }
    }
    out
}

/// Leading `n x n` block of `ops[0] ops[1] ... ops[last]`, carrying only the
/// first `n` rows of the first factor and the first `n` columns of the last.
pub fn block_product(ops: &[&QOperator], n: usize) -> Result<QOperator> {
    let first = ops
        .first()
        .ok_or_else(|| Error::Invalid("empty product".into()))?;
    let d = first.dim();
    for op in ops {
        check_dim(d, op.dim())?;
    }
    let n = n.min(d);
    let rows =
        |op: &QOperator, cols: usize| op.planes().map(|p| p.slice(s![..n, ..cols]).to_owned());
    if ops.len() == 1 {
        let [w, x, y, z] = rows(first, n);
        return Ok(QOperator { w, x, y, z });
    }
    let mut acc = rows(first, d);
    for (idx, op) in ops.iter().enumerate().skip(1) {
        let cols = if idx + 1 == ops.len() { n } else { d };
        let right = op.planes().map(|p| p.slice(s![.., ..cols]));
        acc = mul_planes(acc.each_ref().map(|p| p.view()), right);
    }
    let [w, x, y, z] = acc;
    Ok(QOperator { w, x, y, z })
}

/// `(q.A)[j][k] = q A[j][k]`.
pub fn left_mul_op(q: Quaternion, a: &QOperator) -> QOperator {
    let mut out = QOperator::zeros(a.dim());
    for (j, k) in entries(a.dim()) {
        out.set(j, k, q * a.get(j, k));
    }
    out
}

/// `(A.q)[j][k] = A[j][k] q`.
pub fn right_mul_op(a: &QOperator, q: Quaternion) -> QOperator {
    let mut out = QOperator::zeros(a.dim());
    for (j, k) in entries(a.dim()) {
        out.set(j, k, a.get(j, k) * q);
    }
    out
}

fn entries(d: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..d).flat_map(move |j| (0..d).map(move |k| (j, k)))
}

/// `exp(A)` by scaling and squaring a Taylor polynomial. The scaled norm
/// is brought below one half and the degree is the smallest whose
/// remainder bound `theta^{m+1}/(m+1)!` is under `tol`. Operators whose
/// entries share one slice are exponentiated in that slice.
pub fn op_exp(a: &QOperator, tol: f64) -> Result<QOperator> {
    if !(tol > 0.0) {
        return Err(Error::Invalid(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    match a.common_slice() {
        Some(Some(axis)) => Ok(exp_general(&a.project_to_i(axis), tol)?.lift_from_i(axis)),
        _ => exp_general(a, tol),
    }
}

fn exp_general(a: &QOperator, tol: f64) -> Result<QOperator> {
    let d = a.dim();
    let norm = a.one_norm();
    if !norm.is_finite() {
        return Err(Error::NonConvergence { norm });
    }
    let mut s = 0u32;
    while norm / 2f64.powi(s as i32) > EXP_THETA {
        s += 1;
        if s > EXP_MAX_SQUARINGS {
            return Err(Error::NonConvergence { norm });
        }
    }
    let theta = norm / 2f64.powi(s as i32);
    let mut m = 1usize;
    let mut bound = theta * theta / 2.0;
    while bound > tol {
        m += 1;
        if m > EXP_MAX_DEGREE {
            return Err(Error::NonConvergence { norm });
        }
        bound *= theta / (m + 1) as f64;
    }
    let b = a.scale(1.0 / 2f64.powi(s as i32));
    let id = QOperator::identity(d);
    // Horner: I + B/1 (I + B/2 (... (I + B/m)))
    let mut p = id.zip_planes(&b.scale(1.0 / m as f64), |x, y| x + y);
    for k in (1..m).rev() {
        p = id.zip_planes(&b.matmul(&p).scale(1.0 / k as f64), |x, y| x + y);
    }
    for _ in 0..s {
        p = p.matmul(&p);
    }
    Ok(p)
}

/// Blockwise complex `2 dim x 2 dim` image of `A`, each entry replaced by
/// its 2x2 representation.
pub fn embed_complex(a: &QOperator) -> nalgebra::DMatrix<Complex64> {
    let d = a.dim();
    let mut m = nalgebra::DMatrix::<Complex64>::zeros(2 * d, 2 * d);
    for (j, k) in entries(d) {
        let b = to_matrix(a.get(j, k)).0;
        for r in 0..2 {
            for c in 0..2 {
                m[(2 * j + r, 2 * k + c)] = b[r][c];
            }
        }
    }
    m
}

// ── JSON ─────────────────────────────────────────────────────────────

#[derive(Serialize, Deserialize)]
struct FockJson {
    dim: usize,
    data: Vec<[f64; 4]>,
    layout: String,
}

const LAYOUT: &str = "row-major";

impl Serialize for FockVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FockJson {
            dim: self.dim(),
            data: self.coeffs.iter().map(|c| c.to_array()).collect(),
            layout: LAYOUT.into(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FockVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = FockJson::deserialize(d)?;
        if j.layout != LAYOUT || j.data.len() != j.dim {
            return Err(serde::de::Error::custom(
                "expected dim row-major quadruples",
            ));
        }
        Ok(FockVector::new(
            j.data.into_iter().map(Quaternion::from_array).collect(),
        ))
    }
}

impl Serialize for QOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FockJson {
            dim: self.dim(),
            data: entries(self.dim())
                .map(|(j, k)| self.get(j, k).to_array())
                .collect(),
            layout: LAYOUT.into(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = FockJson::deserialize(d)?;
        if j.layout != LAYOUT || j.data.len() != j.dim * j.dim {
            return Err(serde::de::Error::custom(
                "expected dim*dim row-major quadruples",
            ));
        }
        let dim = j.dim;
        Ok(QOperator::from_fn(dim, |r, c| {
            Quaternion::from_array(j.data[r * dim + c])
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_op(d: usize, seed: u64) -> QOperator {
        // small deterministic LCG so the unit tests need no RNG crate
        let mut s = seed;
        let mut next = move || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        QOperator::from_fn(d, |_, _| Quaternion::new(next(), next(), next(), next()))
    }

    #[test]
    fn basis_inner() {
        let e0 = FockVector::basis(4, 0);
        assert_eq!(inner(&e0, &e0).unwrap(), Quaternion::ONE);
        assert!(matches!(
            inner(&e0, &FockVector::basis(3, 0)),
            Err(Error::DimensionMismatch {
                expected: 4,
                found: 3
            })
        ));
    }

    #[test]
    fn matmul_matches_entrywise() {
        let a = sample_op(5, 1);
        let b = sample_op(5, 2);
        let c = a.compose(&b).unwrap();
        for j in 0..5 {
            for k in 0..5 {
                let mut acc = Quaternion::ZERO;
                for l in 0..5 {
                    acc += a.get(j, l) * b.get(l, k);
                }
                assert!(acc.dist(c.get(j, k)) < 1e-14);
            }
        }
    }

    #[test]
    fn adjoint_involution_and_commutator() {
        let a = sample_op(6, 3);
        assert_eq!(a.adjoint().adjoint(), a);
        assert_eq!(a.commutator(&a).unwrap().block_max_abs(6), 0.0);
    }

    #[test]
    fn exp_trivial_cases() {
        let z = QOperator::zeros(5);
        assert_eq!(op_exp(&z, 1e-16).unwrap(), QOperator::identity(5));
        let diag = QOperator::from_fn(4, |j, k| {
            if j == k {
                Quaternion::real(j as f64 - 1.5)
            } else {
                Quaternion::ZERO
            }
        });
        let e = op_exp(&diag, 1e-16).unwrap();
        for j in 0..4 {
            let want = (j as f64 - 1.5).exp();
            assert!((e.get(j, j).w - want).abs() < 1e-14 * want.max(1.0));
        }
        assert!(op_exp(&z, 0.0).is_err());
    }

    #[test]
    fn exp_inverse_pairing() {
        let a = sample_op(8, 7).scale(0.8);
        let e = op_exp(&a, 1e-16).unwrap();
        let f = op_exp(&a.scale(-1.0), 1e-16).unwrap();
        let id = QOperator::identity(8);
        assert!(e.compose(&f).unwrap().max_abs_diff(&id).unwrap() < 1e-10);
    }

    #[test]
    fn exp_slice_path_matches_general() {
        let axis = SliceAxis::new(0.3, -1.0, 0.7).unwrap();
        let a = QOperator::from_fn(6, |j, k| {
            Quaternion::in_slice((j as f64 - k as f64) * 0.2, 0.1 * (j + 2 * k) as f64, axis)
        });
        let fast = op_exp(&a, 1e-16).unwrap();
        let slow = exp_general(&a, 1e-16).unwrap();
        assert!(fast.max_abs_diff(&slow).unwrap() < 1e-13);
    }

    #[test]
    fn nonfinite_norm_fails() {
        let mut a = QOperator::zeros(3);
        a.set(0, 1, Quaternion::real(f64::INFINITY));
        assert!(matches!(
            op_exp(&a, 1e-12),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn embed_identity() {
        let m = embed_complex(&QOperator::identity(3));
        assert_eq!(m, nalgebra::DMatrix::<Complex64>::identity(6, 6));
    }

    #[test]
    fn json_round_trip() {
        let a = sample_op(3, 9);
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.starts_with("{\"dim\":3,\"data\":[["));
        assert!(s.ends_with("\"layout\":\"row-major\"}"));
        let b: QOperator = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        let v = FockVector::basis(3, 1);
        let w: FockVector = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(v, w);
    }

    #[test]
    fn block_rejects_bad_margin() {
        assert!(ProtectedBlock::new(8, 8).is_err());
        assert!(ProtectedBlock::new(8, 0).is_err());
        assert_eq!(ProtectedBlock::new(64, 16).unwrap().size(), 48);
    }

    #[test]
    fn block_product_matches_full_product() {
        let (a, b, c) = (sample_op(9, 1), sample_op(9, 2), sample_op(9, 3));
        let full = a.compose(&b).unwrap().compose(&c).unwrap();
        let blk = block_product(&[&a, &b, &c], 4).unwrap();
        assert_eq!(blk.dim(), 4);
        assert!(blk.block_max_diff(&full, 4) < 1e-12);
        assert!(block_product(&[&a], 3).unwrap().block_max_diff(&a, 3) == 0.0);
        assert!(block_product(&[], 3).is_err());
    }
}
