//! Real quaternions and the pieces of slice calculus the rest of the crate
//! leans on: conjugation and norm, the 2x2 complex representation, polar
//! coordinates, slice decomposition, slice exponentials and the star
//! exponential `sum p^m q^m / m!`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A real quaternion `w + x i + y j + z k`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    #[inline]
    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    /// `re + axis * im`, an element of the slice through `axis`.
    #[inline]
    pub fn in_slice(re: f64, im: f64, axis: SliceAxis) -> Self {
        Self::new(re, im * axis.ax, im * axis.ay, im * axis.az)
    }

    #[inline]
    pub fn from_array(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    #[inline]
    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn norm(self) -> f64 {
        // hypot-style scaling is unnecessary at the magnitudes used here
        self.norm_sqr().sqrt()
    }

    /// Euclidean norm of the imaginary part.
    #[inline]
    pub fn imag_norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    #[inline]
    pub fn imag(self) -> Self {
        Self::new(0.0, self.x, self.y, self.z)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// `|self - other|`.
    #[inline]
    pub fn dist(self, other: Self) -> f64 {
        (self - other).norm()
    }

    pub fn inverse(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::ZeroQuaternion);
        }
        Ok(self.conj() / n2)
    }

    /// Integer power by repeated squaring.
    pub fn powi(self, n: u32) -> Self {
        let mut base = self;
        let mut acc = Quaternion::ONE;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |v: f64| if v.is_sign_negative() { '-' } else { '+' };
        write!(
            f,
            "{:e}{}{:e}i{}{:e}j{}{:e}k",
            self.w,
            sign(self.x),
            self.x.abs(),
            sign(self.y),
            self.y.abs(),
            sign(self.z),
            self.z.abs()
        )
    }
}

impl Add for Quaternion {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product: `ij = k`, `jk = i`, `ki = j`.
impl Mul for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

impl MulAssign for Quaternion {
    #[inline]
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn div(self, s: f64) -> Self {
        Self::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Self::real(w)
    }
}

/// Returns `(conj(q), |q|)`.
pub fn conj_norm(q: Quaternion) -> (Quaternion, f64) {
    (q.conj(), q.norm())
}

// ── 2x2 complex representation ───────────────────────────────────────

/// Row-major 2x2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2C(pub [[Complex64; 2]; 2]);

impl Mat2C {
    pub fn identity() -> Self {
        let o = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        Mat2C([[o, z], [z, o]])
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2C([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let m = &self.0;
        Mat2C([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn add(&self, o: &Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        Mat2C([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }

    /// Largest entrywise modulus of `self - o`.
    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        let mut m: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                m = m.max((self.0[r][c] - o.0[r][c]).norm());
            }
        }
        m
    }
}

impl Mul for Mat2C {
    type Output = Mat2C;
    fn mul(self, o: Mat2C) -> Mat2C {
        let (a, b) = (&self.0, &o.0);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Mat2C(out)
    }
}

/// `q0 + i q3, -q2 + i q1; q2 + i q1, q0 - i q3`, i.e. `i -> i sigma_1`,
/// `j -> -i sigma_2`, `k -> i sigma_3`.
pub fn to_matrix(q: Quaternion) -> Mat2C {
    Mat2C([
        [Complex64::new(q.w, q.z), Complex64::new(-q.y, q.x)],
        [Complex64::new(q.y, q.x), Complex64::new(q.w, -q.z)],
    ])
}

/// Inverse of [`to_matrix`]. Rejects matrices whose entries break the
/// quaternion pattern by more than `tol`.
pub fn from_matrix(m: &Mat2C, tol: f64) -> Result<Quaternion> {
    let e = &m.0;
    let q = Quaternion::new(
        0.5 * (e[0][0].re + e[1][1].re),
        0.5 * (e[0][1].im + e[1][0].im),
        0.5 * (e[1][0].re - e[0][1].re),
        0.5 * (e[0][0].im - e[1][1].im),
    );
    let deviation = to_matrix(q).max_abs_diff(m);
    if deviation > tol {
        return Err(Error::NotQuaternionic { deviation });
    }
    Ok(q)
}

// ── Polar form ───────────────────────────────────────────────────────

/// `q0 = r cos(theta)`, `q1 = r sin(theta) sin(phi) cos(psi)`,
/// `q2 = r sin(theta) sin(phi) sin(psi)`, `q3 = r sin(theta) cos(phi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarForm {
    pub r: f64,
    /// Exponent angle, in `[0, 2pi)`; [`polar`] always returns it in `[0, pi]`.
    pub theta: f64,
    pub phi: f64,
    pub psi: f64,
}

impl PolarForm {
    /// `sigma(n) = [[cos phi, sin phi e^{i psi}], [sin phi e^{-i psi}, -cos phi]]`.
    pub fn sigma_n(&self) -> Mat2C {
        let (sp, cp) = self.phi.sin_cos();
        let e = Complex64::from_polar(sp, self.psi);
        Mat2C([
            [Complex64::new(cp, 0.0), e],
            [e.conj(), Complex64::new(-cp, 0.0)],
        ])
    }

    /// Unit vector `n` whose pure quaternion `n1 i + n2 j + n3 k` maps to
    /// `i sigma(n)` under [`to_matrix`].
    pub fn direction(&self) -> [f64; 3] {
        let (sp, cp) = self.phi.sin_cos();
        let (ss, cs) = self.psi.sin_cos();
        [sp * cs, sp * ss, cp]
    }
}

/// Polar coordinates of `q`. The zero quaternion maps to all-zero angles;
/// real quaternions get `phi = psi = 0`.
pub fn polar(q: Quaternion) -> PolarForm {
    let r = q.norm();
    if r == 0.0 {
        return PolarForm {
            r: 0.0,
            theta: 0.0,
            phi: 0.0,
            psi: 0.0,
        };
    }
    let v = q.imag_norm();
    let theta = v.atan2(q.w);
    if v == 0.0 {
        return PolarForm {
            r,
            theta,
            phi: 0.0,
            psi: 0.0,
        };
    }
    let (n1, n2, n3) = (q.x / v, q.y / v, q.z / v);
    let phi = n3.clamp(-1.0, 1.0).acos();
    let psi = if n1 == 0.0 && n2 == 0.0 {
        0.0
    } else {
        let a = n2.atan2(n1);
        if a < 0.0 {
            a + 2.0 * PI
        } else {
            a
        }
    };
    PolarForm { r, theta, phi, psi }
}

pub fn unpolar(pf: &PolarForm) -> Quaternion {
    let (st, ct) = pf.theta.sin_cos();
    let n = pf.direction();
    Quaternion::new(
        pf.r * ct,
        pf.r * st * n[0],
        pf.r * st * n[1],
        pf.r * st * n[2],
    )
}

// ── Slices ───────────────────────────────────────────────────────────

/// A unit pure quaternion `I`, so that `I^2 = -1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliceAxis {
    pub ax: f64,
    pub ay: f64,
    pub az: f64,
}

impl SliceAxis {
    pub const I: SliceAxis = SliceAxis {
        ax: 1.0,
        ay: 0.0,
        az: 0.0,
    };
    pub const J: SliceAxis = SliceAxis {
        ax: 0.0,
        ay: 1.0,
        az: 0.0,
    };
    pub const K: SliceAxis = SliceAxis {
        ax: 0.0,
        ay: 0.0,
        az: 1.0,
    };

    /// Normalizes `(ax, ay, az)`; rejects the zero vector.
    pub fn new(ax: f64, ay: f64, az: f64) -> Result<Self> {
        let n = (ax * ax + ay * ay + az * az).sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::DegenerateAxis);
        }
        Ok(Self {
            ax: ax / n,
            ay: ay / n,
            az: az / n,
        })
    }

    #[inline]
    pub fn as_quaternion(self) -> Quaternion {
        Quaternion::new(0.0, self.ax, self.ay, self.az)
    }

    /// Axis of a non-real quaternion, `None` for reals.
    pub fn of(q: Quaternion) -> Option<SliceAxis> {
        SliceAxis::new(q.x, q.y, q.z).ok()
    }

    /// Distance of `q` from the slice `R + I R`: the norm of the imaginary
    /// component orthogonal to the axis.
    pub fn off_slice(self, q: Quaternion) -> f64 {
        let dot = q.x * self.ax + q.y * self.ay + q.z * self.az;
        let (ox, oy, oz) = (
            q.x - dot * self.ax,
            q.y - dot * self.ay,
            q.z - dot * self.az,
        );
        (ox * ox + oy * oy + oz * oz).sqrt()
    }

    /// Coordinates `(re, im)` of `q` in the slice (the off-slice part is dropped).
    pub fn coords(self, q: Quaternion) -> (f64, f64) {
        (q.w, q.x * self.ax + q.y * self.ay + q.z * self.az)
    }
}

impl fmt::Display for SliceAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == SliceAxis::I {
            write!(f, "i")
        } else if *self == SliceAxis::J {
            write!(f, "j")
        } else if *self == SliceAxis::K {
            write!(f, "k")
        } else {
            write!(f, "{};{};{}", self.ax, self.ay, self.az)
        }
    }
}

/// `q = x + axis * y` with `y >= 0`. `axis` is `None` exactly when `q` is real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceDecomposition {
    pub x: f64,
    pub y: f64,
    pub axis: Option<SliceAxis>,
}

pub fn slice_decompose(q: Quaternion) -> SliceDecomposition {
    let y = q.imag_norm();
    if y == 0.0 {
        return SliceDecomposition {
            x: q.w,
            y: 0.0,
            axis: None,
        };
    }
    SliceDecomposition {
        x: q.w,
        y,
        axis: Some(SliceAxis {
            ax: q.x / y,
            ay: q.y / y,
            az: q.z / y,
        }),
    }
}

/// `exp(x + I y) = e^x (cos y + I sin y)`.
pub fn exp_q(q: Quaternion) -> Quaternion {
    let d = slice_decompose(q);
    let ex = d.x.exp();
    match d.axis {
        None => Quaternion::real(ex),
        Some(axis) => {
            let (s, c) = d.y.sin_cos();
            Quaternion::in_slice(ex * c, ex * s, axis)
        }
    }
}

/// `q / |q|`, the quaternion realizing `e^{i theta sigma(n)}` of the polar form.
pub fn unit_phase(q: Quaternion) -> Result<Quaternion> {
    let n = q.norm();
    if n == 0.0 {
        return Err(Error::ZeroQuaternion);
    }
    Ok(q / n)
}

/// Principal square root within the slice of `q`: the angle is halved, so
/// the result has nonnegative real part. Negative reals have no slice of
/// their own; they resolve toward `+fallback`.
pub fn sqrt_slice(q: Quaternion, fallback: SliceAxis) -> Quaternion {
    let d = slice_decompose(q);
    let rho = (d.x * d.x + d.y * d.y).sqrt();
    if rho == 0.0 {
        return Quaternion::ZERO;
    }
    let axis = match d.axis {
        Some(a) => a,
        None if d.x >= 0.0 => return Quaternion::real(d.x.sqrt()),
        None => fallback,
    };
    let alpha = if d.axis.is_some() { d.y.atan2(d.x) } else { PI };
    let (s, c) = (0.5 * alpha).sin_cos();
    let m = rho.sqrt();
    Quaternion::in_slice(m * c, m * s, axis)
}

/// Hard cap on the number of star-exponential terms.
pub const STAR_EXP_MAX_TERMS: usize = 500;

/// `sum_m p^m q^m / m!`. The series is cut once the majorant
/// `|p|^m |q|^m / m!` of the next term drops below `tol`, or after
/// [`STAR_EXP_MAX_TERMS`] terms.
pub fn star_exp(p: Quaternion, q: Quaternion, tol: f64) -> Quaternion {
    let pq_abs = p.norm() * q.norm();
    let mut pm = Quaternion::ONE;
    let mut qm = Quaternion::ONE;
    let mut inv_fact = 1.0;
    let mut bound = 1.0;
    let mut sum = Quaternion::ZERO;
    for m in 0..STAR_EXP_MAX_TERMS {
        if m > 0 {
            pm *= p;
            qm *= q;
            inv_fact /= m as f64;
            bound *= pq_abs / m as f64;
        }
        if bound < tol && m > 0 {
            break;
        }
        sum += pm * qm * inv_fact;
    }
    sum
}

/// Angle of the unit phase `u` within its slice: `u = cos t + I sin t`, `t` in `[0, pi]`.
pub fn phase_angle(u: Quaternion) -> f64 {
    u.imag_norm().atan2(u.w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        a.dist(b) <= tol
    }

    #[test]
    fn multiplication_table() {
        let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
        assert_eq!(i * j, k);
        assert_eq!(j * i, -k);
        assert_eq!(j * k, i);
        assert_eq!(k * j, -i);
        assert_eq!(k * i, j);
        assert_eq!(i * k, -j);
        for u in [i, j, k] {
            assert_eq!(u * u, -Quaternion::ONE);
        }
    }

    #[test]
    fn mul_examples() {
        let q = Quaternion::new(0.3, -1.2, 2.0, 0.5);
        assert_eq!(q * Quaternion::ONE, q);
        // (1+i)(1+j) = 1 + j + i + ij = 1+i+j+k
        let lhs = Quaternion::new(1.0, 1.0, 0.0, 0.0) * Quaternion::new(1.0, 0.0, 1.0, 0.0);
        assert_eq!(lhs, Quaternion::new(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn conj_norm_examples() {
        assert_eq!(conj_norm(Quaternion::I).0, -Quaternion::I);
        assert_abs_diff_eq!(conj_norm(Quaternion::new(1.0, 1.0, 1.0, 1.0)).1, 2.0);
    }

    #[test]
    fn to_matrix_of_units() {
        assert_eq!(to_matrix(Quaternion::ONE), Mat2C::identity());
        let im = Complex64::new(0.0, 1.0);
        let z = Complex64::new(0.0, 0.0);
        assert_eq!(to_matrix(Quaternion::I), Mat2C([[z, im], [im, z]]));
    }

    #[test]
    fn from_matrix_rejects_off_pattern() {
        let mut m = to_matrix(Quaternion::new(1.0, 2.0, 3.0, 4.0));
        assert!(from_matrix(&m, 1e-12).is_ok());
        m.0[1][1] = Complex64::new(5.0, 0.0);
        assert!(matches!(
            from_matrix(&m, 1e-12),
            Err(Error::NotQuaternionic { .. })
        ));
    }

    #[test]
    fn polar_examples() {
        let p = polar(Quaternion::ONE);
        assert_eq!((p.r, p.theta), (1.0, 0.0));
        let p = polar(Quaternion::I);
        assert_abs_diff_eq!(p.r, 1.0);
        assert_abs_diff_eq!(p.theta, FRAC_PI_2);
        assert_abs_diff_eq!(p.phi, FRAC_PI_2);
        assert_abs_diff_eq!(p.psi, 0.0);
        let z = polar(Quaternion::ZERO);
        assert_eq!((z.r, z.theta, z.phi, z.psi), (0.0, 0.0, 0.0, 0.0));
        assert_eq!(unpolar(&z), Quaternion::ZERO);
    }

    #[test]
    fn polar_angles_in_range() {
        for q in [
            Quaternion::new(-1.0, -0.0, -2.0, 0.1),
            Quaternion::new(0.0, 0.0, 0.0, -3.0),
            Quaternion::new(2.0, -1.0, -1.0, -1.0),
            Quaternion::real(-4.0),
        ] {
            let p = polar(q);
            assert!((0.0..2.0 * PI).contains(&p.theta));
            assert!((0.0..=PI).contains(&p.phi));
            assert!((0.0..2.0 * PI).contains(&p.psi));
            assert!(close(unpolar(&p), q, 1e-14));
        }
    }

    #[test]
    fn slice_decompose_examples() {
        let d = slice_decompose(Quaternion::new(3.0, 4.0, 0.0, 0.0));
        assert_eq!((d.x, d.y), (3.0, 4.0));
        assert_eq!(d.axis, Some(SliceAxis::I));

        let d = slice_decompose(Quaternion::new(1.0, 1.0, 1.0, 1.0));
        assert_abs_diff_eq!(d.y, 3f64.sqrt());
        let a = d.axis.unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert_abs_diff_eq!(a.ax, s, epsilon = 1e-15);
        assert_abs_diff_eq!(a.ay, s, epsilon = 1e-15);
        assert_abs_diff_eq!(a.az, s, epsilon = 1e-15);

        let d = slice_decompose(Quaternion::real(5.0));
        assert_eq!((d.x, d.y, d.axis), (5.0, 0.0, None));
    }

    #[test]
    fn exp_examples() {
        assert_eq!(exp_q(Quaternion::ZERO), Quaternion::ONE);
        assert!(close(
            exp_q(Quaternion::I * FRAC_PI_2),
            Quaternion::I,
            1e-15
        ));
        assert!(matches!(
            unit_phase(Quaternion::ZERO),
            Err(Error::ZeroQuaternion)
        ));
    }

    #[test]
    fn star_exp_examples() {
        let q = Quaternion::new(0.2, -0.4, 0.1, 0.3);
        assert_eq!(star_exp(Quaternion::ZERO, q, 1e-16), Quaternion::ONE);
        let p = Quaternion::new(0.5, 0.1, -0.7, 0.2);
        let r = Quaternion::real(0.8);
        assert!(close(star_exp(p, r, 1e-17), exp_q(p * r), 1e-14));
        // same slice: commutative, so the star exponential is the ordinary one
        let axis = SliceAxis::new(1.0, -2.0, 0.5).unwrap();
        let a = Quaternion::in_slice(0.4, 0.9, axis);
        let b = Quaternion::in_slice(-0.3, 0.6, axis);
        assert!(close(star_exp(a, b, 1e-17), exp_q(a * b), 1e-14));
    }

    #[test]
    fn sqrt_slice_branch() {
        let axis = SliceAxis::J;
        let q = Quaternion::in_slice(-0.3, 0.4, axis);
        let s = sqrt_slice(q, SliceAxis::I);
        assert!(s.w >= 0.0);
        assert!(close(s * s, q, 1e-15));
        // negative real: tie resolved toward the fallback axis
        let s = sqrt_slice(Quaternion::real(-4.0), SliceAxis::K);
        assert!(close(s, Quaternion::K * 2.0, 1e-15));
        assert_eq!(
            sqrt_slice(Quaternion::real(9.0), SliceAxis::I),
            Quaternion::real(3.0)
        );
    }

    #[test]
    fn axis_rejects_zero() {
        assert_eq!(SliceAxis::new(0.0, 0.0, 0.0), Err(Error::DegenerateAxis));
        let a = SliceAxis::new(0.0, 3.0, 4.0).unwrap();
        let q = a.as_quaternion();
        assert!(close(q * q, -Quaternion::ONE, 1e-15));
    }
}
