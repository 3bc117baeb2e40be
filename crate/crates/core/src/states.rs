//! Coherent, pure squeezed and squeezed states, and expectation values.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{inner, left_mul_op, FockVector, ProtectedBlock, QOperator};
use crate::gates::{squeeze, SqueezeParams};
use crate::ladder::LadderSet;
use crate::quat::{slice_decompose, sqrt_slice, Quaternion, SliceAxis};
use crate::report::Check;
use crate::special::{even_coefficient, factorial, ln_factorial};

/// Default bound on squared tail mass and on normalization drift.
pub const DEFAULT_STATE_TOL: f64 = 1e-10;

/// `sum_{n >= dim} e^{-x} x^n / n!` with `x = |q|^2`, bounded by the first
/// omitted term times a geometric factor.
pub fn coherent_tail(q: Quaternion, dim: usize) -> f64 {
    let x = q.norm_sqr();
    if x == 0.0 {
        return 0.0;
    }
    let first = (-x + dim as f64 * x.ln() - ln_factorial(dim)).exp();
    let ratio = x / (dim as f64 + 1.0);
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    first / (1.0 - ratio)
}

fn suggest_dim(tail: impl Fn(usize) -> f64, tol: f64, from: usize) -> usize {
    let mut d = from.max(1);
    while tail(d) > tol && d < 1 << 20 {
        d += 1;
    }
    d
}

/// `c_n = e^{-|q|^2/2} q^n / sqrt(n!)` without any tail check.
pub fn coherent_unchecked(q: Quaternion, dim: usize) -> FockVector {
    let mut c = Vec::with_capacity(dim);
    let mut term = Quaternion::real((-0.5 * q.norm_sqr()).exp());
    for n in 0..dim {
        if n > 0 {
            term = term * q / (n as f64).sqrt();
        }
        c.push(term);
    }
    FockVector::new(c)
}

/// Normalized coherent state; rejects `dim` if the squared tail exceeds `tol`.
pub fn coherent(q: Quaternion, dim: usize, tol: f64) -> Result<FockVector> {
    let tail = coherent_tail(q, dim);
    if tail > tol {
        return Err(Error::InsufficientDim {
            tail,
            tol,
            suggested_dim: suggest_dim(|d| coherent_tail(q, d), tol, dim),
        });
    }
    Ok(coherent_unchecked(q, dim))
}

/// The coherent series with `q^n / n!` in place of `q^n / sqrt(n!)`.
pub fn coherent_factorial_form(q: Quaternion, dim: usize) -> FockVector {
    let pre = (-0.5 * q.norm_sqr()).exp();
    FockVector::new(
        (0..dim)
            .map(|n| q.powi(n as u32) * (pre / factorial(n)))
            .collect(),
    )
}

/// `S(p) Phi_0`.
pub fn pure_squeezed(sp: &SqueezeParams, l: &LadderSet) -> Result<FockVector> {
    squeeze(sp, l)?.apply(&FockVector::basis(l.dim, 0))
}

/// `c_{2n} = (cosh r)^{-1/2} (u tanh r)^n sqrt((2n)!) / (2^n n!)`, odd entries zero.
pub fn pure_squeezed_series(sp: &SqueezeParams, dim: usize) -> FockVector {
    let pre = sp.r.cosh().powf(-0.5);
    let ut = sp.phase() * sp.r.tanh();
    let mut c = vec![Quaternion::ZERO; dim];
    let mut pow = Quaternion::ONE;
    for n in 0..dim.div_ceil(2) {
        if n > 0 {
            pow *= ut;
        }
        c[2 * n] = pow * (pre * even_coefficient(n));
    }
    FockVector::new(c)
}

/// Squared mass of the pure squeezed state at levels `>= dim`.
pub fn pure_squeezed_tail(r: f64, dim: usize) -> f64 {
    let t2 = r.tanh().powi(2);
    if t2 == 0.0 {
        return 0.0;
    }
    let n0 = dim.div_ceil(2);
    // |c_{2n}|^2 = sech r * t^{2n} (2n)!/(4^n n!^2), decreasing in n
    let first = (-(r.cosh().ln()) + n0 as f64 * t2.ln() + ln_factorial(2 * n0)
        - 2.0 * ln_factorial(n0)
        - n0 as f64 * 4f64.ln())
    .exp();
    first / (1.0 - t2)
}

/// Smallest even `dim` keeping the pure squeezed tail under `tol`.
pub fn squeezed_dim(r: f64, tol: f64) -> usize {
    let d = suggest_dim(|d| pure_squeezed_tail(r, d), tol, 4);
    d + d % 2
}

/// `S(p) eta_q`.
pub fn squeezed_state(
    sp: &SqueezeParams,
    q: Quaternion,
    l: &LadderSet,
    tol: f64,
) -> Result<FockVector> {
    let eta = coherent(q, l.dim, tol)?;
    squeeze(sp, l)?.apply(&eta)
}

/// `D(q) S(p) Phi_0`.
pub fn displaced_squeezed(sp: &SqueezeParams, q: Quaternion, l: &LadderSet) -> Result<FockVector> {
    let d = crate::gates::displacement(q, l)?;
    d.apply(&pure_squeezed(sp, l)?)
}

// ── printed series for the pure squeezed state ──────────────────────

/// `e^{|p|^2/4} sum_n e^{n|p|^2} p^n sqrt((2n)!)/(2^n n!) Phi_{2n}`, cut at `dim`.
pub fn scs_printed_series(sp: &SqueezeParams, dim: usize) -> FockVector {
    let r2 = sp.r * sp.r;
    let mut c = vec![Quaternion::ZERO; dim];
    for n in 0..dim.div_ceil(2) {
        let mag = (0.25 * r2 + n as f64 * r2).exp() * even_coefficient(n);
        c[2 * n] = sp.p.powi(n as u32) * mag;
    }
    FockVector::new(c)
}

/// The anti-normal double sum
/// `e^{|p|^2/4} sum_{n,s} p^{n+s} conj(p)^n (2n+2s)! / (4^n (n+s)! n! sqrt((2s)!)) e^{s|p|^2} Phi_{2s}`
/// with both indices below `terms`.
pub fn scs_antinormal_series(sp: &SqueezeParams, dim: usize, terms: usize) -> FockVector {
    let r2 = sp.r * sp.r;
    let mut c = vec![Quaternion::ZERO; dim];
    for s in 0..terms.min(dim.div_ceil(2)) {
        let mut acc = Quaternion::ZERO;
        for n in 0..terms {
            let ln_mag = ln_factorial(2 * n + 2 * s)
                - n as f64 * 4f64.ln()
                - ln_factorial(n + s)
                - ln_factorial(n)
                - 0.5 * ln_factorial(2 * s);
            let phase = sp.p.powi((n + s) as u32) * sp.p.conj().powi(n as u32);
            acc += phase * ln_mag.exp();
        }
        c[2 * s] = acc * (0.25 * r2 + s as f64 * r2).exp();
    }
    FockVector::new(c)
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesReport {
    pub r: f64,
    /// `|a_{n+1}| / |a_n|` for the last two retained terms.
    pub term_ratio: f64,
    /// Asymptotic ratio `e^{r^2} r`; above one the series diverges.
    pub ratio_limit: f64,
    /// Norms of the partial sums at every even cut.
    pub partial_norms: Vec<f64>,
    pub deviation_from_oracle: f64,
    pub antinormal_deviation: f64,
}

/// Compares both printed series with `S(p) Phi_0`.
pub fn scs_series_check(
    sp: &SqueezeParams,
    l: &LadderSet,
    antinormal_terms: usize,
) -> Result<SeriesReport> {
    let oracle = pure_squeezed(sp, l)?;
    let printed = scs_printed_series(sp, l.dim);
    let anti = scs_antinormal_series(sp, l.dim, antinormal_terms);
    let mut partial = 0.0;
    let partial_norms = (0..l.dim.div_ceil(2))
        .map(|n| {
            partial += printed.coeffs()[2 * n].norm_sqr();
            partial.sqrt()
        })
        .collect();
    let m = l.dim.div_ceil(2);
    let term_ratio = if m >= 2 {
        printed.coeffs()[2 * (m - 1)].norm() / printed.coeffs()[2 * (m - 2)].norm()
    } else {
        0.0
    };
    Ok(SeriesReport {
        r: sp.r,
        term_ratio,
        ratio_limit: (sp.r * sp.r).exp() * sp.r,
        partial_norms,
        deviation_from_oracle: printed.max_abs_diff(&oracle)?,
        antinormal_deviation: anti.max_abs_diff(&oracle)?,
    })
}

// ── expectations ─────────────────────────────────────────────────────

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectationReport {
    pub mean_a: Quaternion,
    pub mean_adag: Quaternion,
    pub mean_x: Quaternion,
    pub mean_y: Quaternion,
    pub mean_n: Quaternion,
    pub mean_a_adag: Quaternion,
    pub mean_a_sq: Quaternion,
    pub mean_adag_sq: Quaternion,
    pub mean_n_sq: f64,
    pub mean_x_sq: f64,
    pub mean_y_sq: f64,
    pub var_x: f64,
    pub var_y: f64,
    pub var_n: f64,
    /// `None` when `<N>` is zero within tolerance.
    pub mandel_q: Option<f64>,
    /// Largest imaginary part among the means of self-adjoint operators.
    pub hermitian_imag: f64,
}

fn check_state(state: &FockVector, block: ProtectedBlock, tol: f64) -> Result<()> {
    let n2 = state.norm_sqr();
    if (n2 - 1.0).abs() > tol {
        return Err(Error::NotNormalized { norm_sqr: n2 });
    }
    let tail = state.tail_mass(block.size());
    if tail > tol {
        return Err(Error::InsufficientDim {
            tail,
            tol,
            suggested_dim: 2 * block.dim,
        });
    }
    Ok(())
}

/// Moments of `state`. Requires unit norm and squared mass beyond the
/// block below `tol`.
pub fn expectations(
    state: &FockVector,
    l: &LadderSet,
    block: ProtectedBlock,
    tol: f64,
) -> Result<ExpectationReport> {
    check_state(state, block, tol)?;
    let mean = |op: &QOperator| -> Result<Quaternion> { inner(state, &op.apply(state)?) };
    let ax = l.x_op.apply(state)?;
    let ay = l.y_op.apply(state)?;
    let an = l.n_op.apply(state)?;
    let mean_x = inner(state, &ax)?;
    let mean_y = inner(state, &ay)?;
    let mean_n = inner(state, &an)?;
    let mean_x_sq = ax.norm_sqr();
    let mean_y_sq = ay.norm_sqr();
    let mean_n_sq = an.norm_sqr();
    let a_adag = l.a.compose(&l.a_dag)?;
    let var_n = mean_n_sq - mean_n.w * mean_n.w;
    let mandel_q = if mean_n.w > tol {
        Some(var_n / mean_n.w - 1.0)
    } else {
        None
    };
    Ok(ExpectationReport {
        mean_a: mean(&l.a)?,
        mean_adag: mean(&l.a_dag)?,
        mean_x,
        mean_y,
        mean_n,
        mean_a_adag: mean(&a_adag)?,
        mean_a_sq: mean(&l.a_sq)?,
        mean_adag_sq: mean(&l.a_dag_sq)?,
        mean_n_sq,
        mean_x_sq,
        mean_y_sq,
        var_x: mean_x_sq - mean_x.w * mean_x.w,
        var_y: mean_y_sq - mean_y.w * mean_y.w,
        var_n,
        mandel_q,
        hermitian_imag: [mean_x, mean_y, mean_n]
            .iter()
            .map(|q| q.imag_norm())
            .fold(0.0, f64::max),
    })
}

/// `<dN^2>/<N> - 1`; undefined for the vacuum.
pub fn mandel_q(state: &FockVector, l: &LadderSet, block: ProtectedBlock, tol: f64) -> Result<f64> {
    expectations(state, l, block, tol)?
        .mandel_q
        .ok_or(Error::Undefined("Mandel Q needs <N> > 0"))
}

/// Closed forms for `S(p) Phi_0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PureSqueezedMoments {
    pub mean_a_adag: f64,
    pub mean_n: f64,
    pub mean_a_sq: Quaternion,
    pub var_x: f64,
    pub var_y: f64,
    pub var_product: f64,
    pub mean_n_sq: f64,
    pub var_n: f64,
    pub mandel_q: Option<f64>,
}

/// `cos theta` is the real part of `u`.
pub fn pure_squeezed_moments(sp: &SqueezeParams) -> PureSqueezedMoments {
    let r = sp.r;
    let (sh, ch) = (r.sinh(), r.cosh());
    let cos_t = sp.phase().w;
    let sin2_t = 1.0 - cos_t * cos_t;
    let (s2, c2) = ((2.0 * r).sinh(), (2.0 * r).cosh());
    let mean_n = sh * sh;
    let var_n = 2.0 * sh * sh * (1.0 + sh * sh);
    PureSqueezedMoments {
        mean_a_adag: ch * ch,
        mean_n,
        mean_a_sq: sp.phase() * (ch * sh),
        var_x: 0.25 * (c2 + s2 * cos_t),
        var_y: 0.25 * (c2 - s2 * cos_t),
        var_product: (1.0 + s2 * s2 * sin2_t) / 16.0,
        mean_n_sq: 3.0 * sh.powi(4) + 2.0 * sh * sh,
        var_n,
        mandel_q: if r > 0.0 {
            Some(1.0 + 2.0 * sh * sh)
        } else {
            None
        },
    }
}

/// `h = u^{1/2}` within the slice of `u`; a real negative `u` falls back to
/// the slice of `p` and then to the ladder axis.
pub fn half_phase(sp: &SqueezeParams, l: &LadderSet) -> (Quaternion, SliceAxis) {
    let u = sp.phase();
    let axis = slice_decompose(u).axis.unwrap_or(l.axis);
    (sqrt_slice(u, axis), axis)
}

/// `U = (conj(h).a + h.a^dag)/2`, `V = (-J/2).(conj(h).a - h.a^dag)`.
pub fn uv_operators(sp: &SqueezeParams, l: &LadderSet) -> Result<(QOperator, QOperator)> {
    let (h, axis) = half_phase(sp, l);
    let plus = left_mul_op(h.conj(), &l.a).add(&left_mul_op(h, &l.a_dag))?;
    let minus = left_mul_op(h.conj(), &l.a).sub(&left_mul_op(h, &l.a_dag))?;
    Ok((
        plus.scale(0.5),
        left_mul_op(axis.as_quaternion() * -0.5, &minus),
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct UvReport {
    pub var_u: f64,
    pub var_v: f64,
    pub checks: Vec<Check>,
    /// `<dV>^2 < 1/4`.
    pub ideally_squeezed: bool,
}

fn variance(op: &QOperator, state: &FockVector) -> Result<f64> {
    let v = op.apply(state)?;
    let m = inner(state, &v)?;
    Ok(v.norm_sqr() - m.w * m.w)
}

/// Variances of the rotated quadratures on `S(p) Phi_0`:
/// `(cosh r + sinh r)^2 / 4`, `(cosh r - sinh r)^2 / 4`, product `1/16`.
pub fn uv_quadrature_check(
    sp: &SqueezeParams,
    l: &LadderSet,
    block: ProtectedBlock,
    tol: f64,
) -> Result<UvReport> {
    if sp.r == 0.0 {
        return Err(Error::ZeroQuaternion);
    }
    let state = pure_squeezed(sp, l)?;
    check_state(&state, block, tol)?;
    let (u_op, v_op) = uv_operators(sp, l)?;
    let var_u = variance(&u_op, &state)?;
    let var_v = variance(&v_op, &state)?;
    let want_u = 0.25 * (sp.r.cosh() + sp.r.sinh()).powi(2);
    let want_v = 0.25 * (sp.r.cosh() - sp.r.sinh()).powi(2);
    Ok(UvReport {
        var_u,
        var_v,
        checks: vec![
            Check::new("uv_variance_u", (var_u - want_u).abs(), 1e-8),
            Check::new("uv_variance_v", (var_v - want_v).abs(), 1e-8),
            Check::new(
                "uv_variance_product",
                (var_u * var_v - 1.0 / 16.0).abs(),
                1e-8,
            ),
        ],
        ideally_squeezed: var_v < 0.25,
    })
}
