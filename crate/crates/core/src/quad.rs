//! Quadrature over quaternion space in polar coordinates `(r, theta, phi, psi)`
//! with `theta, psi` in `[0, 2pi)` and `phi` in `[0, pi]`.
//!
//! The radial integral is mapped to `t = r^2` and done by a generalized
//! Gauss-Laguerre rule, `phi` by Gauss-Legendre in `cos phi`, `theta` and
//! `psi` by the trapezoid rule. Sums over nodes are split into fixed chunks,
//! reduced in parallel, and combined in index order, so results do not
//! depend on the thread count.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{ProtectedBlock, QOperator};
use crate::gates::{squeeze, SqueezeParams};
use crate::ladder::LadderSet;
use crate::quat::{unpolar, PolarForm, Quaternion};
use crate::special::{factorial, gamma_half_integer, ln_factorial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    /// `(1/4pi) e^{-r^2} sin(phi) dr dtheta dphi dpsi`
    Paper,
    /// `(1/4pi^2) r e^{-r^2} sin(phi) dr dtheta dphi dpsi`
    Corrected,
}

impl Measure {
    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Paper => "paper",
            Measure::Corrected => "corrected",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureSpec {
    pub variant: Measure,
    pub radial_weight: &'static str,
    pub normalization: f64,
}

impl MeasureSpec {
    pub fn new(variant: Measure) -> Self {
        match variant {
            Measure::Paper => Self {
                variant,
                radial_weight: "e^{-r^2}",
                normalization: 1.0 / (4.0 * PI),
            },
            Measure::Corrected => Self {
                variant,
                radial_weight: "r e^{-r^2}",
                normalization: 1.0 / (4.0 * PI * PI),
            },
        }
    }

    /// Laguerre exponent after `t = r^2`: `r^k e^{-r^2} dr = t^{(k-1)/2} e^{-t} dt / 2`.
    fn alpha(&self) -> f64 {
        match self.variant {
            Measure::Paper => -0.5,
            Measure::Corrected => 0.0,
        }
    }

    /// Closed form of `int |q|^{2n} d mu`.
    pub fn moment_exact(&self, n: usize) -> f64 {
        match self.variant {
            Measure::Paper => PI * gamma_half_integer(n),
            Measure::Corrected => factorial(n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    pub n_radial: usize,
    pub n_theta: usize,
    pub n_phi: usize,
    pub n_psi: usize,
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        Self {
            n_radial: 24,
            n_theta: 36,
            n_phi: 4,
            n_psi: 8,
        }
    }
}

impl QuadratureGrid {
    pub fn new(n_radial: usize, n_theta: usize, n_phi: usize, n_psi: usize) -> Result<Self> {
        if [n_radial, n_theta, n_phi, n_psi].contains(&0) {
            return Err(Error::Invalid("grid sizes must be positive".into()));
        }
        Ok(Self {
            n_radial,
            n_theta,
            n_phi,
            n_psi,
        })
    }

    pub fn doubled(&self) -> Self {
        Self {
            n_radial: 2 * self.n_radial,
            n_theta: 2 * self.n_theta,
            n_phi: 2 * self.n_phi,
            n_psi: 2 * self.n_psi,
        }
    }

    pub fn len(&self) -> usize {
        self.n_radial * self.n_theta * self.n_phi * self.n_psi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

// ── One-dimensional rules ────────────────────────────────────────────

/// Eigenvalues of the symmetric tridiagonal Jacobi matrix.
fn jacobi_nodes(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let m = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            diag[i]
        } else if i + 1 == j {
            off[i]
        } else if j + 1 == i {
            off[j]
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    nodes.sort_by(f64::total_cmp);
    nodes
}

/// `(L_n(x), L_n'(x))` for the generalized Laguerre polynomial.
fn laguerre(n: usize, alpha: f64, x: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (1.0, 1.0 + alpha - x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    let d = (n as f64 * cur - (n as f64 + alpha) * prev) / x;
    (cur, d)
}

/// Nodes and weights for `int_0^inf f(t) t^alpha e^{-t} dt`, `alpha` in `{0, -1/2}`.
pub fn gauss_laguerre(n: usize, alpha: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::Invalid("rule needs at least one node".into()));
    }
    let diag: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
    let off: Vec<f64> = (1..n)
        .map(|k| (k as f64 * (k as f64 + alpha)).sqrt())
        .collect();
    let mut nodes = jacobi_nodes(&diag, &off);
    // Gamma(n + alpha + 1) / n!
    let ratio = if alpha == 0.0 {
        1.0
    } else if alpha == -0.5 {
        (gamma_half_integer(n).ln() - ln_factorial(n)).exp()
    } else {
        return Err(Error::Invalid(format!(
            "unsupported Laguerre exponent {alpha}"
        )));
    };
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (l, d) = laguerre(n, alpha, *x);
            *x -= l / d;
        }
        let (_, d) = laguerre(n, alpha, *x);
        weights.push(ratio / (*x * d * d));
    }
    Ok((nodes, weights))
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    let d = n as f64 * (x * cur - prev) / (x * x - 1.0);
    (cur, d)
}

/// Nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::Invalid("rule needs at least one node".into()));
    }
    let diag = vec![0.0; n];
    let off: Vec<f64> = (1..n)
        .map(|k| k as f64 / ((4 * k * k - 1) as f64).sqrt())
        .collect();
    let mut nodes = jacobi_nodes(&diag, &off);
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, d) = legendre(n, *x);
            *x -= p / d;
        }
        let (_, d) = legendre(n, *x);
        weights.push(2.0 / ((1.0 - *x * *x) * d * d));
    }
    Ok((nodes, weights))
}

// ── Nodes in H ───────────────────────────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub q: Quaternion,
    pub weight: f64,
}

/// All grid points with their full weights, radial index outermost.
pub fn nodes(g: &QuadratureGrid, m: &MeasureSpec) -> Result<Vec<Node>> {
    let (ts, wts) = gauss_laguerre(g.n_radial, m.alpha())?;
    let (xs, wxs) = gauss_legendre(g.n_phi)?;
    let wt = 2.0 * PI / g.n_theta as f64;
    let wp = 2.0 * PI / g.n_psi as f64;
    let mut out = Vec::with_capacity(g.len());
    for (&t, &w_r) in ts.iter().zip(&wts) {
        let r = t.sqrt();
        for it in 0..g.n_theta {
            let theta = it as f64 * wt;
            for (&x, &w_x) in xs.iter().zip(&wxs) {
                let phi = x.acos();
                for ip in 0..g.n_psi {
                    let psi = ip as f64 * wp;
                    let q = unpolar(&PolarForm { r, theta, phi, psi });
                    out.push(Node {
                        q,
                        weight: m.normalization * 0.5 * w_r * wt * w_x * wp,
                    });
                }
            }
        }
    }
    Ok(out)
}

const CHUNK: usize = 256;

/// `sum_nodes f(node)` into a flat accumulator of length `len`.
fn accumulate<F>(pts: &[Node], len: usize, f: F) -> Vec<Quaternion>
where
    F: Fn(&Node, &mut [Quaternion]) + Sync,
{
    let partials: Vec<Vec<Quaternion>> = pts
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = vec![Quaternion::ZERO; len];
            for p in chunk {
                f(p, &mut acc);
            }
            acc
        })
        .collect();
    partials
        .into_iter()
        .fold(vec![Quaternion::ZERO; len], |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        })
}

/// `Phi_n(q) = q^n / sqrt(n!)` for `n < dim`.
fn monomials(q: Quaternion, dim: usize) -> Vec<Quaternion> {
    let mut v = Vec::with_capacity(dim);
    let mut cur = Quaternion::ONE;
    for n in 0..dim {
        if n > 0 {
            cur = cur * q / (n as f64).sqrt();
        }
        v.push(cur);
    }
    v
}

/// `int |q|^{2n} d mu`.
pub fn moment(n: usize, m: &MeasureSpec, g: &QuadratureGrid) -> Result<f64> {
    let pts = nodes(g, m)?;
    let acc = accumulate(&pts, 1, |p, acc| {
        acc[0] += Quaternion::real(p.weight * p.q.norm_sqr().powi(n as i32));
    });
    Ok(acc[0].w)
}

/// `G[m][n] = int conj(Phi_m(q)) Phi_n(q) d mu`.
pub fn gram(dim: usize, m: &MeasureSpec, g: &QuadratureGrid) -> Result<QOperator> {
    let pts = nodes(g, m)?;
    let acc = accumulate(&pts, dim * dim, |p, acc| {
        let phi = monomials(p.q, dim);
        for j in 0..dim {
            let left = phi[j].conj() * p.weight;
            for k in 0..dim {
                acc[j * dim + k] += left * phi[k];
            }
        }
    });
    Ok(QOperator::from_fn(dim, |j, k| acc[j * dim + k]))
}

/// How the coherent projectors enter the integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    /// Normalized `eta_q`, integrated against the measure as written.
    Normalized,
    /// `e^{|q|^2} |eta_q><eta_q|`, which cancels the Gaussian in the measure.
    Weighted,
}

/// `int |eta_q><eta_q| d mu` truncated to `dim`.
pub fn resolution_of_identity(
    dim: usize,
    m: &MeasureSpec,
    g: &QuadratureGrid,
    frame: Frame,
) -> Result<QOperator> {
    let pts = nodes(g, m)?;
    let acc = accumulate(&pts, dim * dim, |p, acc| {
        let gauss = match frame {
            Frame::Normalized => (-p.q.norm_sqr()).exp(),
            Frame::Weighted => 1.0,
        };
        let c = monomials(p.q, dim);
        for j in 0..dim {
            let left = c[j] * (p.weight * gauss);
            for k in 0..dim {
                acc[j * dim + k] += left * c[k].conj();
            }
        }
    });
    Ok(QOperator::from_fn(dim, |j, k| acc[j * dim + k]))
}

/// `S(p) R S(p)^dag`.
pub fn squeezed_resolution(r: &QOperator, sp: &SqueezeParams, l: &LadderSet) -> Result<QOperator> {
    let s = squeeze(sp, l)?;
    s.compose(r)?.compose(&s.adjoint())
}

/// `sum_{n<dim} Phi_n(q) conj(Phi_n(p))`, which approximates `star_exp(q, conj(p))`.
/// Fails when the first omitted term exceeds `tol`.
pub fn kernel(q: Quaternion, p: Quaternion, dim: usize, tol: f64) -> Result<Quaternion> {
    let tail = (dim as f64 * (q.norm() * p.norm()).ln() - ln_factorial(dim)).exp();
    if tail > tol {
        let mut suggested = dim.max(1);
        while (suggested as f64 * (q.norm() * p.norm()).ln() - ln_factorial(suggested)).exp() > tol
        {
            suggested *= 2;
        }
        return Err(Error::InsufficientDim {
            tail,
            tol,
            suggested_dim: suggested,
        });
    }
    let (fq, fp) = (monomials(q, dim), monomials(p, dim));
    let terms: Vec<Quaternion> = fq.iter().zip(&fp).map(|(a, b)| *a * b.conj()).collect();
    Ok(crate::fock::pairwise_sum_q(&terms))
}

/// Largest change of a matrix-valued integral when all grid sizes double.
pub fn doubling_change<F>(g: &QuadratureGrid, f: F) -> Result<f64>
where
    F: Fn(&QuadratureGrid) -> Result<QOperator>,
{
    let a = f(g)?;
    let b = f(&g.doubled())?;
    a.max_abs_diff(&b)
}

/// Fails with `GridNotConverged` when doubling moves the result by `tol/10` or more.
pub fn require_converged(change: f64, tol: f64) -> Result<()> {
    if !(change < tol / 10.0) {
        return Err(Error::GridNotConverged { change });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralReport {
    pub measure_variant: Measure,
    pub integral: String,
    pub value: Vec<f64>,
    pub reference: Vec<f64>,
    pub deviation: f64,
    pub doubling_change: f64,
    pub grid: QuadratureGrid,
}

fn diagonal(m: &QOperator, n: usize) -> Vec<f64> {
    (0..n).map(|k| m.get(k, k).w).collect()
}

/// Moments `0..n_moments`, the Gram matrix of `gram_dim` monomials, and the
/// resolution of identity of size `res_dim` on `block` under both frames.
/// `dev` compares to the identity, or to the closed-form diagonal for the
/// Gram matrix under the printed measure.
pub fn quadrature_report(
    m: &MeasureSpec,
    g: &QuadratureGrid,
    n_moments: usize,
    gram_dim: usize,
    block: ProtectedBlock,
) -> Result<Vec<IntegralReport>> {
    let mut out = Vec::new();
    for n in 0..n_moments {
        let value = moment(n, m, g)?;
        let doubled = moment(n, m, &g.doubled())?;
        let reference = m.moment_exact(n);
        out.push(IntegralReport {
            measure_variant: m.variant,
            integral: format!("moment({n})"),
            value: vec![value],
            reference: vec![reference],
            deviation: (value - reference).abs() / reference.max(1.0),
            doubling_change: (value - doubled).abs() / reference.max(1.0),
            grid: *g,
        });
    }

    let gm = gram(gram_dim, m, g)?;
    let gram_ref: Vec<f64> = (0..gram_dim)
        .map(|n| m.moment_exact(n) / factorial(n))
        .collect();
    let target = QOperator::from_fn(gram_dim, |j, k| {
        if j == k {
            Quaternion::real(gram_ref[j])
        } else {
            Quaternion::ZERO
        }
    });
    out.push(IntegralReport {
        measure_variant: m.variant,
        integral: format!("gram({gram_dim})"),
        value: diagonal(&gm, gram_dim),
        reference: gram_ref,
        deviation: gm.max_abs_diff(&target)?,
        doubling_change: doubling_change(g, |gg| gram(gram_dim, m, gg))?,
        grid: *g,
    });

    let n = block.size();
    for frame in [Frame::Normalized, Frame::Weighted] {
        let r = resolution_of_identity(block.dim, m, g, frame)?;
        let id = QOperator::identity(block.dim);
        out.push(IntegralReport {
            measure_variant: m.variant,
            integral: format!(
                "resolution_of_identity({}, {})",
                block.dim,
                frame_name(frame)
            ),
            value: diagonal(&r, n),
            reference: vec![1.0; n],
            deviation: r.block_max_diff(&id, n),
            doubling_change: doubling_change(g, |gg| {
                resolution_of_identity(block.dim, m, gg, frame)
            })?,
            grid: *g,
        });
    }
    Ok(out)
}

fn frame_name(f: Frame) -> &'static str {
    match f {
        Frame::Normalized => "normalized",
        Frame::Weighted => "weighted",
    }
}
