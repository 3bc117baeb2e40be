//! Computations restricted to one slice `C_I`, where every scalar commutes:
//! two-photon and squeezed coherent moments, Hermite polynomials, and the
//! Hermite form of the squeezed basis in the Bargmann representation.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{FockVector, ProtectedBlock};
use crate::gates::{displacement, squeeze, SqueezeParams};
use crate::ladder::LadderSet;
use crate::quat::{slice_decompose, sqrt_slice, Quaternion, SliceAxis};
use crate::special::factorial;
use crate::states::{coherent, expectations, ExpectationReport};

/// Tolerance for treating a quaternion as lying in a slice.
pub const SLICE_TOL: f64 = 1e-12;

/// `p = r_p e^{I theta_p}`, `q = r_q e^{I theta_q}` in one slice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SliceParams {
    pub axis: SliceAxis,
    pub r_p: f64,
    pub theta_p: f64,
    pub r_q: f64,
    pub theta_q: f64,
}

impl SliceParams {
    pub fn new(axis: SliceAxis, r_p: f64, theta_p: f64, r_q: f64, theta_q: f64) -> Self {
        Self {
            axis,
            r_p,
            theta_p,
            r_q,
            theta_q,
        }
    }

    /// Polar data of `p`, `q` relative to `axis`; both must lie in its slice.
    pub fn from_quaternions(p: Quaternion, q: Quaternion, axis: SliceAxis) -> Result<Self> {
        for v in [p, q] {
            let deviation = axis.off_slice(v);
            if deviation > SLICE_TOL * v.norm().max(1.0) {
                return Err(Error::OffSlice { deviation });
            }
        }
        let angle = |v: Quaternion| {
            let (re, im) = axis.coords(v);
            let t = im.atan2(re);
            if t < 0.0 {
                t + 2.0 * PI
            } else {
                t
            }
        };
        Ok(Self::new(axis, p.norm(), angle(p), q.norm(), angle(q)))
    }

    pub fn i_p(&self) -> Quaternion {
        self.unit(self.theta_p)
    }

    pub fn i_q(&self) -> Quaternion {
        self.unit(self.theta_q)
    }

    fn unit(&self, t: f64) -> Quaternion {
        let (s, c) = t.sin_cos();
        Quaternion::in_slice(c, s, self.axis)
    }

    pub fn p(&self) -> Quaternion {
        self.i_p() * self.r_p
    }

    pub fn q(&self) -> Quaternion {
        self.i_q() * self.r_q
    }

    pub fn squeeze_params(&self) -> SqueezeParams {
        SqueezeParams::new(self.p())
    }

    /// `frak_r = tanh(|p|) p / |p|`.
    pub fn frak_r(&self) -> Quaternion {
        self.i_p() * self.r_p.tanh()
    }
}

impl fmt::Display for SliceParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "axis={} r_p={} theta_p={} r_q={} theta_q={}",
            self.axis, self.r_p, self.theta_p, self.r_q, self.theta_q
        )
    }
}

/// One observable: the printed closed form, its value and the oracle value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceRow {
    pub observable: &'static str,
    pub printed: &'static str,
    pub closed_form: Quaternion,
    pub numeric: Quaternion,
    pub deviation: f64,
}

impl SliceRow {
    fn new(
        observable: &'static str,
        printed: &'static str,
        closed_form: Quaternion,
        numeric: Quaternion,
    ) -> Self {
        Self {
            observable,
            printed,
            closed_form,
            numeric,
            deviation: closed_form.dist(numeric),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SliceReport {
    pub params: SliceParams,
    pub rows: Vec<SliceRow>,
    pub snr: Option<f64>,
    pub mandel_q: Option<f64>,
}

fn require_axis(sl: &SliceParams, l: &LadderSet) -> Result<()> {
    let a = sl.axis.as_quaternion();
    let deviation = a.dist(l.axis.as_quaternion());
    if deviation > SLICE_TOL {
        return Err(Error::Invalid(format!(
            "ladder Y axis {} differs from slice axis {}",
            l.axis, sl.axis
        )));
    }
    Ok(())
}

fn numeric(
    state: &FockVector,
    l: &LadderSet,
    block: ProtectedBlock,
    tol: f64,
) -> Result<ExpectationReport> {
    expectations(state, l, block, tol)
}

fn r(v: f64) -> Quaternion {
    Quaternion::real(v)
}

/// `S(p) D(q) Phi_0` against the printed two-photon moments.
pub fn two_photon_expectations(
    sl: &SliceParams,
    l: &LadderSet,
    block: ProtectedBlock,
    tol: f64,
) -> Result<SliceReport> {
    require_axis(sl, l)?;
    let sp = sl.squeeze_params();
    let state = squeeze(&sp, l)?.apply(&coherent(sl.q(), l.dim, tol)?)?;
    let m = numeric(&state, l, block, tol)?;
    let (p, q, ip) = (sl.r_p, sl.q(), sl.i_p());
    let (sh, ch) = (p.sinh(), p.cosh());
    let (s2, c2) = ((2.0 * p).sinh(), (2.0 * p).cosh());
    let (tp, tq) = (sl.theta_p, sl.theta_q);
    let q2 = sl.r_q * sl.r_q;
    let cross = q2 * s2 * (2.0 * tq - tp).cos();
    let mean_a = q * ch + ip * q.conj() * sh;
    let mean_adag = q.conj() * ch + ip.conj() * q * sh;
    let mean_a_sq = ip * (0.5 * s2 * (1.0 + 2.0 * q2))
        + q * q * (ch * ch)
        + ip * ip * q.conj() * q.conj() * (sh * sh);
    let x2_a = c2 + 2.0 * q2 * c2 + 2.0 * q2 * s2 * (2.0 * tq - tp).cos();
    let x2_b = tp.cos() * s2 * (1.0 + 2.0 * q2)
        + 2.0 * q2 * ch * ch * (2.0 * tq).cos()
        + 2.0 * q2 * sh * sh * (2.0 * tp - 2.0 * tq).cos();
    let rows = vec![
        SliceRow::new("<a>", "cosh|p| q + I_p sinh|p| conj(q)", mean_a, m.mean_a),
        SliceRow::new("<a^dag>", "cosh|p| conj(q) + conj(I_p) sinh|p| q", mean_adag, m.mean_adag),
        SliceRow::new(
            "<X>",
            "|q|[cosh|p| cos(theta_q) + sinh|p| cos(theta_p - theta_q)]",
            r(sl.r_q * (ch * tq.cos() + sh * (tp - tq).cos())),
            m.mean_x,
        ),
        SliceRow::new(
            "<Y>",
            "|q|[cosh|p| sin(theta_q) + sinh|p| sin(theta_p - theta_q)]",
            r(sl.r_q * (ch * tq.sin() + sh * (tp - tq).sin())),
            m.mean_y,
        ),
        SliceRow::new(
            "<a a^dag>",
            "cosh^2|p| + cosh(2|p|)|q|^2 + |q|^2 sinh(2|p|) cos(2theta_q - theta_p)",
            r(ch * ch + c2 * q2 + cross),
            m.mean_a_adag,
        ),
        SliceRow::new(
            "<a^dag a>",
            "sinh^2|p| + cosh(2|p|)|q|^2 + |q|^2 sinh(2|p|) cos(2theta_q - theta_p)",
            r(sh * sh + c2 * q2 + cross),
            m.mean_n,
        ),
        SliceRow::new(
            "<a^2>",
            "1/2 I_p sinh(2|p|)(1 + 2|q|^2) + cosh^2|p| q^2 + I_p^2 sinh^2|p| conj(q)^2",
            mean_a_sq,
            m.mean_a_sq,
        ),
        SliceRow::new(
            "<(a^dag)^2>",
            "1/2 conj(I_p) sinh(2|p|)(1 + 2|q|^2) + cosh^2|p| conj(q)^2 + conj(I_p)^2 sinh^2|p| q^2",
            mean_a_sq.conj(),
            m.mean_adag_sq,
        ),
        SliceRow::new(
            "<X^2>",
            "1/2[cosh(2|p|) + 2|q|^2 cosh(2|p|) + 2|q|^2 sinh(2|p|) cos(2theta_q - theta_p)] + 1/2[cos(theta_p) sinh(2|p|)(1 + 2|q|^2) + 2|q|^2 cosh^2|p| cos(2theta_q) + 2|q|^2 sinh^2|p| cos(2theta_p - 2theta_q)]",
            r(0.5 * x2_a + 0.5 * x2_b),
            r(m.mean_x_sq),
        ),
        SliceRow::new(
            "<Y^2>",
            "1/2[cosh(2|p|) + 2|q|^2 cosh(2|p|) + 2|q|^2 sinh(2|p|) cos(2theta_q - theta_p)] - 1/2[cos(theta_p) sinh(2|p|)(1 + 2|q|^2) + 2|q|^2 cosh^2|p| cos(2theta_q) + 2|q|^2 sinh^2|p| cos(2theta_p - 2theta_q)]",
            r(0.5 * x2_a - 0.5 * x2_b),
            r(m.mean_y_sq),
        ),
    ];
    Ok(SliceReport {
        params: *sl,
        rows,
        snr: snr(&m),
        mandel_q: m.mandel_q,
    })
}

fn snr(m: &ExpectationReport) -> Option<f64> {
    (m.var_x > 0.0).then(|| m.mean_x.w * m.mean_x.w / m.var_x)
}

/// `D(q) S(p) Phi_0` against the printed squeezed coherent moments.
pub fn squeezed_coherent_expectations(
    sl: &SliceParams,
    l: &LadderSet,
    block: ProtectedBlock,
    tol: f64,
) -> Result<SliceReport> {
    require_axis(sl, l)?;
    let sp = sl.squeeze_params();
    let vac = squeeze(&sp, l)?.apply(&FockVector::basis(l.dim, 0))?;
    let state = displacement(sl.q(), l)?.apply(&vac)?;
    let m = numeric(&state, l, block, tol)?;
    let (p, q, ip) = (sl.r_p, sl.q(), sl.i_p());
    let (sh, ch) = (p.sinh(), p.cosh());
    let (s2, c2) = ((2.0 * p).sinh(), (2.0 * p).cosh());
    let (tp, tq) = (sl.theta_p, sl.theta_q);
    let q2 = sl.r_q * sl.r_q;
    let mean_a_sq = ip * (0.5 * s2) + q * q;
    let x2 = |sign: f64| {
        0.25 * (c2 * c2 + 2.0 * q2 + sign * (s2 * tp.cos() + 2.0 * q2 * (2.0 * tq).cos()))
    };
    let n_sq = 0.5 * s2 * s2 + sh.powi(4) + 2.0 * q2 * sh * sh + q2 * c2 + q2 * s2 + q2 * q2;
    let rows = vec![
        SliceRow::new("<a>", "q", q, m.mean_a),
        SliceRow::new("<a^dag>", "conj(q)", q.conj(), m.mean_adag),
        SliceRow::new("<N>", "sinh^2|p| + |q|^2", r(sh * sh + q2), m.mean_n),
        SliceRow::new("<X>", "|q| cos(theta_q)", r(sl.r_q * tq.cos()), m.mean_x),
        SliceRow::new("<Y>", "|q| sin(theta_q)", r(sl.r_q * tq.sin()), m.mean_y),
        SliceRow::new("<a^2>", "1/2 I_p sinh(2|p|) + q^2", mean_a_sq, m.mean_a_sq),
        SliceRow::new(
            "<(a^dag)^2>",
            "1/2 conj(I_p) sinh(2|p|) + conj(q)^2",
            mean_a_sq.conj(),
            m.mean_adag_sq,
        ),
        SliceRow::new("<a a^dag>", "cosh^2|p| + |q|^2", r(ch * ch + q2), m.mean_a_adag),
        SliceRow::new(
            "<X^2>",
            "1/4{cosh^2(2|p|) + 2|q|^2 + sinh(2|p|) cos(theta_p) + 2|q|^2 cos(2theta_q)}",
            r(x2(1.0)),
            r(m.mean_x_sq),
        ),
        SliceRow::new(
            "<Y^2>",
            "1/4{cosh^2(2|p|) + 2|q|^2 - sinh(2|p|) cos(theta_p) - 2|q|^2 cos(2theta_q)}",
            r(x2(-1.0)),
            r(m.mean_y_sq),
        ),
        SliceRow::new(
            "<N^2>",
            "1/2 sinh^2(2|p|) + sinh^4|p| + 2|q|^2 sinh^2|p| + |q|^2 cosh(2|p|) + |q|^2 sinh(2|p|) + |q|^4",
            r(n_sq),
            r(m.mean_n_sq),
        ),
        SliceRow::new(
            "<dN^2>",
            "1/2 sinh^2(2|p|) + |q|^2 e^{2|p|}",
            r(0.5 * s2 * s2 + q2 * (2.0 * p).exp()),
            r(m.var_n),
        ),
    ];
    Ok(SliceReport {
        params: *sl,
        rows,
        snr: snr(&m),
        mandel_q: m.mandel_q,
    })
}

// ── Hermite polynomials and the Bargmann representation ─────────────

/// `H_n(q) = n! sum_m (-1)^m (2q)^{n-2m} / (m! (n-2m)!)`.
pub fn hermite(n: usize, q: Quaternion) -> Quaternion {
    let nf = factorial(n);
    let two_q = q * 2.0;
    (0..=n / 2).fold(Quaternion::ZERO, |acc, m| {
        let c = nf / (factorial(m) * factorial(n - 2 * m));
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        acc + two_q.powi((n - 2 * m) as u32) * (sign * c)
    })
}

/// `f(q) = sum_n q^n / sqrt(n!) c_n`. Fails if the last retained terms are
/// still above `tol`, since the series would then be visibly truncated.
pub fn bargmann_eval(v: &FockVector, q: Quaternion, tol: f64) -> Result<Quaternion> {
    let mut basis = Quaternion::ONE;
    let mut terms = Vec::with_capacity(v.dim());
    for (n, &c) in v.coeffs().iter().enumerate() {
        if n > 0 {
            basis = basis * q / (n as f64).sqrt();
        }
        terms.push(basis * c);
    }
    let tail = terms
        .iter()
        .rev()
        .take(4)
        .map(|t| t.norm())
        .fold(0.0, f64::max);
    if tail > tol {
        return Err(Error::InsufficientDim {
            tail,
            tol,
            suggested_dim: 2 * v.dim(),
        });
    }
    Ok(crate::fock::pairwise_sum_q(&terms))
}

fn require_in_slice(sl: &SliceParams, q: Quaternion) -> Result<()> {
    let deviation = sl.axis.off_slice(q);
    if deviation > SLICE_TOL * q.norm().max(1.0) {
        return Err(Error::OffSlice { deviation });
    }
    Ok(())
}

/// `(1/sqrt(n!)) (1-|r|^2)^{1/4} [conj(r)/2]^{n/2} e^{r q^2/2}
///  H_n([(1-|r|^2) conj(r)^{-1} / 2]^{1/2} q)` with `r = frak_r`; square
/// roots are principal within the slice.
pub fn squeezed_basis_closed_form(n: usize, sl: &SliceParams, q: Quaternion) -> Result<Quaternion> {
    if sl.r_p == 0.0 {
        return Err(Error::ZeroQuaternion);
    }
    require_in_slice(sl, q)?;
    let fr = sl.frak_r();
    let one_minus = 1.0 - fr.norm_sqr();
    let c = sqrt_slice(fr.conj() * 0.5, sl.axis);
    let arg = sqrt_slice(fr.conj().inverse()? * (0.5 * one_minus), sl.axis) * q;
    let gauss = crate::quat::exp_q(fr * q * q * 0.5);
    let pre = one_minus.powf(0.25) / factorial(n).sqrt();
    Ok(c.powi(n as u32) * gauss * hermite(n, arg) * pre)
}

/// The same value built factor by factor: `exp(-conj(r) d^2/2)` on `q^n/sqrt(n!)`,
/// then `(sqrt(1-|r|^2))^{k+1/2}` on each monomial `q^k`, then `e^{r q^2/2}`.
pub fn squeezed_basis_factorized(n: usize, sl: &SliceParams, q: Quaternion) -> Result<Quaternion> {
    require_in_slice(sl, q)?;
    let fr = sl.frak_r();
    let s = (1.0 - fr.norm_sqr()).sqrt();
    let half_rbar = fr.conj() * 0.5;
    let nf = factorial(n);
    let mut acc = Quaternion::ZERO;
    for m in 0..=n / 2 {
        let k = n - 2 * m;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let coef = half_rbar.powi(m as u32) * (sign * nf / (factorial(m) * factorial(k)));
        acc += coef * q.powi(k as u32) * s.powf(k as f64 + 0.5);
    }
    Ok(crate::quat::exp_q(fr * q * q * 0.5) * acc / nf.sqrt())
}

/// Angle of the squeeze parameter where the principal branches of the
/// Hermite form stop agreeing with each other.
pub fn is_branch_cut(sl: &SliceParams) -> bool {
    let d = slice_decompose(sl.frak_r());
    d.y == 0.0 && d.x < 0.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ladder::build_ladder;

    #[test]
    fn hermite_low_orders() {
        let q = Quaternion::new(1.0, 1.0, 0.0, 0.0);
        assert_eq!(hermite(0, q), Quaternion::ONE);
        assert_eq!(hermite(1, q), q * 2.0);
        assert!(hermite(2, q).dist(Quaternion::new(-2.0, 8.0, 0.0, 0.0)) < 1e-14);
    }

    #[test]
    fn hermite_recurrence_and_parity() {
        let axis = SliceAxis::new(0.2, 0.9, -0.4).unwrap();
        let q = Quaternion::in_slice(0.7, -0.3, axis);
        for n in 1..20 {
            let lhs = hermite(n + 1, q);
            let rhs = q * hermite(n, q) * 2.0 - hermite(n - 1, q) * (2.0 * n as f64);
            assert!(lhs.dist(rhs) <= 1e-12 * lhs.norm().max(1.0), "n={n}");
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!(hermite(n, -q).dist(hermite(n, q) * sign) <= 1e-12 * lhs.norm().max(1.0));
        }
    }

    #[test]
    fn bargmann_basics() {
        let e0 = FockVector::basis(8, 0);
        assert_eq!(
            bargmann_eval(&e0, Quaternion::new(0.3, 0.1, 0.2, 0.0), 1e-12).unwrap(),
            Quaternion::ONE
        );
        let e3 = FockVector::basis(10, 3);
        let v = bargmann_eval(&e3, Quaternion::real(2.0), 1e-12).unwrap();
        assert!((v.w - 8.0 / 6f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn hermite_form_ground_state() {
        let sl = SliceParams::new(SliceAxis::I, 0.4, 0.0, 0.0, 0.0);
        let v = squeezed_basis_closed_form(0, &sl, Quaternion::ZERO).unwrap();
        assert!((v.w - 0.4f64.cosh().powf(-0.5)).abs() < 1e-15);
        assert!(squeezed_basis_closed_form(
            0,
            &SliceParams::new(SliceAxis::I, 0.0, 0.0, 0.0, 0.0),
            Quaternion::ZERO
        )
        .is_err());
    }

    #[test]
    fn hermite_form_small_squeeze_limit() {
        let sl = SliceParams::new(SliceAxis::J, 1e-9, 0.3, 0.0, 0.0);
        let q = Quaternion::in_slice(0.4, 0.2, SliceAxis::J);
        for n in 0..6 {
            let want = q.powi(n as u32) / factorial(n).sqrt();
            assert!(squeezed_basis_closed_form(n, &sl, q).unwrap().dist(want) < 1e-7);
        }
    }

    #[test]
    fn hermite_form_against_operator() {
        let l = build_ladder(128, SliceAxis::I).unwrap();
        let sl = SliceParams::new(SliceAxis::I, 0.5, 0.8, 0.0, 0.0);
        let s = squeeze(&sl.squeeze_params(), &l).unwrap();
        let q = Quaternion::new(0.3, 0.3, 0.0, 0.0);
        for n in 0..=6 {
            let col = s.apply(&FockVector::basis(128, n)).unwrap();
            let num = bargmann_eval(&col, q, 1e-12).unwrap();
            let cf = squeezed_basis_closed_form(n, &sl, q).unwrap();
            assert!(num.dist(cf) < 1e-7, "n={n}: {num} vs {cf}");
            let fac = squeezed_basis_factorized(n, &sl, q).unwrap();
            assert!(fac.dist(cf) < 1e-8);
        }
    }

    #[test]
    fn off_slice_rejected() {
        let sl = SliceParams::new(SliceAxis::I, 0.5, 0.8, 0.0, 0.0);
        assert!(matches!(
            squeezed_basis_closed_form(1, &sl, Quaternion::J),
            Err(Error::OffSlice { .. })
        ));
        assert!(SliceParams::from_quaternions(Quaternion::I, Quaternion::J, SliceAxis::I).is_err());
    }

    #[test]
    fn two_photon_vacuum_squeeze() {
        let l = build_ladder(64, SliceAxis::J).unwrap();
        let b = ProtectedBlock::new(64, 32).unwrap();
        let sl = SliceParams::new(SliceAxis::J, 0.0, 0.0, 0.8, PI / 5.0);
        let rep = two_photon_expectations(&sl, &l, b, 1e-10).unwrap();
        assert!(rep.rows[0].deviation < 1e-10);
        let rep = squeezed_coherent_expectations(&sl, &l, b, 1e-10).unwrap();
        let n = rep.rows.iter().find(|r| r.observable == "<N>").unwrap();
        assert!((n.numeric.w - 0.64).abs() < 1e-10);
    }

    #[test]
    fn corrected_second_moments() {
        let axis = SliceAxis::new(1.0, -2.0, 0.5).unwrap();
        let l = build_ladder(192, axis).unwrap();
        let b = ProtectedBlock::new(192, 64).unwrap();
        let (rp, tp, rq, tq) = (0.6, 1.0, 0.8, 0.6);
        let sl = SliceParams::new(axis, rp, tp, rq, tq);
        let get = |rep: &SliceReport, name: &str| {
            rep.rows
                .iter()
                .find(|r| r.observable == name)
                .unwrap()
                .clone()
        };
        let (s2, c2) = ((2.0 * rp).sinh(), (2.0 * rp).cosh());
        let q2 = rq * rq;

        let tp_rep = two_photon_expectations(&sl, &l, b, 1e-10).unwrap();
        for name in ["<X^2>", "<Y^2>"] {
            let row = get(&tp_rep, name);
            assert!(row.numeric.dist(row.closed_form * 0.5) < 1e-9, "{name}");
        }
        let sc = squeezed_coherent_expectations(&sl, &l, b, 1e-10).unwrap();
        let x2 = 0.25 * (c2 + 2.0 * q2 + s2 * tp.cos() + 2.0 * q2 * (2.0 * tq).cos());
        assert!((get(&sc, "<X^2>").numeric.w - x2).abs() < 1e-9);
        let dn = 0.5 * s2 * s2 + q2 * (c2 + s2 * (2.0 * tq - tp).cos());
        assert!((get(&sc, "<dN^2>").numeric.w - dn).abs() < 1e-9);
        for row in sc.rows.iter().chain(tp_rep.rows.iter()) {
            if !["<X^2>", "<Y^2>", "<N^2>", "<dN^2>"].contains(&row.observable) {
                assert!(row.deviation < 1e-9, "{}", row.observable);
            }
        }
    }
}
