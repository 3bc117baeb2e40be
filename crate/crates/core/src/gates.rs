//! Displacement and squeeze operators as operator exponentials, with the
//! identities they are expected to satisfy measured on a protected block.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{block_product, left_mul_op, op_exp, ProtectedBlock, QOperator, DEFAULT_EXP_TOL};
use crate::ladder::LadderSet;
use crate::quat::{Quaternion, SliceAxis};
use crate::report::Check;

/// `p = r u` with `r = |p|` and `u` the unit phase (absent when `p = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezeParams {
    pub p: Quaternion,
    pub r: f64,
    pub u: Option<Quaternion>,
}

impl SqueezeParams {
    pub fn new(p: Quaternion) -> Self {
        let r = p.norm();
        let u = if r > 0.0 { Some(p / r) } else { None };
        Self { p, r, u }
    }

    /// `p = r (cos theta + axis sin theta)`.
    pub fn from_polar(r: f64, theta: f64, axis: SliceAxis) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(Quaternion::in_slice(r * c, r * s, axis))
    }

    /// Unit phase, or 1 at `p = 0` where every formula multiplies it by zero.
    pub fn phase(&self) -> Quaternion {
        self.u.unwrap_or(Quaternion::ONE)
    }

    pub fn negate(&self) -> Self {
        Self::new(-self.p)
    }
}

fn exp(a: &QOperator) -> Result<QOperator> {
    op_exp(a, DEFAULT_EXP_TOL)
}

fn lin(terms: &[(Quaternion, &QOperator)]) -> QOperator {
    let d = terms[0].1.dim();
    terms.iter().fold(QOperator::zeros(d), |acc, (q, op)| {
        acc.add(&left_mul_op(*q, op))
            .expect("ladder operators share a dimension")
    })
}

/// `q.a^dag - conj(q).a`.
pub fn displacement_generator(q: Quaternion, l: &LadderSet) -> QOperator {
    lin(&[(q, &l.a_dag), (-q.conj(), &l.a)])
}

/// `D(q) = exp(q.a^dag - conj(q).a)`.
pub fn displacement(q: Quaternion, l: &LadderSet) -> Result<QOperator> {
    if q == Quaternion::ZERO {
        return Ok(l.identity.clone());
    }
    exp(&displacement_generator(q, l))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Ordering {
    /// `e^{-|q|^2/2} e^{q.a^dag} e^{-conj(q).a}`
    Normal,
    /// `e^{|q|^2/2} e^{-conj(q).a} e^{q.a^dag}`
    Antinormal,
}

pub fn ordered_displacement(q: Quaternion, l: &LadderSet, mode: Ordering) -> Result<QOperator> {
    let up = exp(&left_mul_op(q, &l.a_dag))?;
    let down = exp(&left_mul_op(-q.conj(), &l.a))?;
    let n2 = q.norm_sqr();
    Ok(match mode {
        Ordering::Normal => up.compose(&down)?.scale((-0.5 * n2).exp()),
        Ordering::Antinormal => down.compose(&up)?.scale((0.5 * n2).exp()),
    })
}

/// `D(q)^dag D(q) = I` on the block.
pub fn check_displacement_unitarity(
    q: Quaternion,
    l: &LadderSet,
    block: ProtectedBlock,
) -> Result<Check> {
    let d = displacement(q, l)?;
    let dev =
        block_product(&[&d.adjoint(), &d], block.size())?.block_max_diff(&l.identity, block.size());
    Ok(Check::new("displacement_unitarity", dev, 1e-9))
}

/// Normal and anti-normal products against the direct exponential.
pub fn check_displacement_orderings(
    q: Quaternion,
    l: &LadderSet,
    block: ProtectedBlock,
) -> Result<Vec<Check>> {
    let d = displacement(q, l)?;
    let n = block.size();
    let normal = ordered_displacement(q, l, Ordering::Normal)?;
    let anti = ordered_displacement(q, l, Ordering::Antinormal)?;
    Ok(vec![
        Check::new(
            "displacement_normal_ordering",
            normal.block_max_diff(&d, n),
            1e-9,
        ),
        Check::new(
            "displacement_antinormal_ordering",
            anti.block_max_diff(&d, n),
            1e-9,
        ),
    ])
}

/// `D^dag a D = a + q` and `D^dag a^dag D = a^dag + conj(q)` on the block.
pub fn check_displacement_shift(
    q: Quaternion,
    l: &LadderSet,
    block: ProtectedBlock,
) -> Result<Vec<Check>> {
    let d = displacement(q, l)?;
    let dd = d.adjoint();
    let n = block.size();
    let lower = block_product(&[&dd, &l.a, &d], n)?;
    let raise = block_product(&[&dd, &l.a_dag, &d], n)?;
    Ok(vec![
        Check::new(
            "displacement_shift_lower",
            lower.block_max_diff(&lin(&[(Quaternion::ONE, &l.a), (q, &l.identity)]), n),
            1e-8,
        ),
        Check::new(
            "displacement_shift_raise",
            raise.block_max_diff(
                &lin(&[(Quaternion::ONE, &l.a_dag), (q.conj(), &l.identity)]),
                n,
            ),
            1e-8,
        ),
    ])
}

/// `(p.(a^dag)^2 - conj(p).a^2) / 2`, anti-hermitian entry by entry.
pub fn squeeze_generator(sp: &SqueezeParams, l: &LadderSet) -> QOperator {
    lin(&[(sp.p * 0.5, &l.a_dag_sq), (sp.p.conj() * -0.5, &l.a_sq)])
}

/// `S(p) = exp((p.(a^dag)^2 - conj(p).a^2)/2)`.
pub fn squeeze(sp: &SqueezeParams, l: &LadderSet) -> Result<QOperator> {
    if sp.r == 0.0 {
        return Ok(l.identity.clone());
    }
    exp(&squeeze_generator(sp, l))
}

/// Anti-hermiticity of the generator, `S^dag = S(-p)` and unitarity.
pub fn check_squeeze_basic(
    sp: &SqueezeParams,
    l: &LadderSet,
    block: ProtectedBlock,
) -> Result<Vec<Check>> {
    basic_checks(sp, &squeeze(sp, l)?, l, block)
}

fn basic_checks(
    sp: &SqueezeParams,
    s: &QOperator,
    l: &LadderSet,
    block: ProtectedBlock,
) -> Result<Vec<Check>> {
    let g = squeeze_generator(sp, l);
    let n = block.size();
    let minus = squeeze(&sp.negate(), l)?;
    Ok(vec![
        Check::new(
            "squeeze_generator_antihermitian",
            g.adjoint().add(&g)?.block_max_abs(l.dim),
            0.0,
        ),
        Check::new(
            "squeeze_adjoint_is_inverse_parameter",
            s.adjoint().block_max_diff(&minus, n),
            1e-9,
        ),
        Check::new(
            "squeeze_unitarity",
            block_product(&[&s.adjoint(), s], n)?.block_max_diff(&l.identity, n),
            1e-9,
        ),
    ])
}

/// The three conjugation formulas with `u` acting by left multiplication:
/// `S^dag a S = cosh r a + (u sinh r).a^dag`, its adjoint, and
/// `S^dag N S = cosh^2 r a^dag a + (conj(u) sinh r cosh r).a^2
///  + (u sinh r cosh r).(a^dag)^2 + sinh^2 r a a^dag`.
pub fn check_squeeze_conjugation(
    sp: &SqueezeParams,
    l: &LadderSet,
    block: ProtectedBlock,
) -> Result<Vec<Check>> {
    conjugation_checks(sp, &squeeze(sp, l)?, l, block)
}

fn conjugation_checks(
    sp: &SqueezeParams,
    s: &QOperator,
    l: &LadderSet,
    block: ProtectedBlock,
) -> Result<Vec<Check>> {
    let sd = s.adjoint();
    let n = block.size();
    let u = sp.phase();
    let (sh, ch) = (sp.r.sinh(), sp.r.cosh());
    let one = Quaternion::ONE;
    let a_adag = l.a.compose(&l.a_dag)?;

    let lower = block_product(&[&sd, &l.a, s], n)?;
    let want_lower = lin(&[(one * ch, &l.a), (u * sh, &l.a_dag)]);
    let raise = block_product(&[&sd, &l.a_dag, s], n)?;
    let want_raise = lin(&[(one * ch, &l.a_dag), (u.conj() * sh, &l.a)]);
    let number = block_product(&[&sd, &l.n_op, s], n)?;
    let want_number = lin(&[
        (one * (ch * ch), &l.n_op),
        (u.conj() * (sh * ch), &l.a_sq),
        (u * (sh * ch), &l.a_dag_sq),
        (one * (sh * sh), &a_adag),
    ]);
    Ok(vec![
        Check::new(
            "squeeze_conjugation_lower",
            lower.block_max_diff(&want_lower, n),
            1e-8,
        ),
        Check::new(
            "squeeze_conjugation_raise",
            raise.block_max_diff(&want_raise, n),
            1e-8,
        ),
        Check::new(
            "squeeze_conjugation_number",
            number.block_max_diff(&want_number, n),
            1e-8,
        ),
    ])
}

/// Basic and conjugation checks sharing one evaluation of `S(p)`.
pub fn squeeze_checks(
    sp: &SqueezeParams,
    l: &LadderSet,
    block: ProtectedBlock,
) -> Result<Vec<Check>> {
    let s = squeeze(sp, l)?;
    let mut out = basic_checks(sp, &s, l, block)?;
    out.extend(conjugation_checks(sp, &s, l, block)?);
    Ok(out)
}

/// Nested brackets used to sum the conjugation series:
/// `[-A, a] = p.a^dag` and `[-A, [-A, a]] = |p|^2 a` with `A` the generator.
/// Each commutator cancels products whose entries grow like a power of
/// `n`, so deviations are taken relative to the largest such product entry.
pub fn check_squeeze_bch_steps(
    sp: &SqueezeParams,
    l: &LadderSet,
    block: ProtectedBlock,
) -> Result<Vec<Check>> {
    let minus_a = squeeze_generator(sp, l).scale(-1.0);
    let n = block.size();
    let first = minus_a.commutator(&l.a)?;
    let second = minus_a.commutator(&first)?;
    let scale1 = minus_a.compose(&l.a)?.block_max_abs(n).max(1.0);
    let scale2 = minus_a.compose(&first)?.block_max_abs(n).max(1.0);
    let dev1 = first.block_max_diff(&left_mul_op(sp.p, &l.a_dag), n);
    let dev2 = second.block_max_diff(&l.a.scale(sp.r * sp.r), n);
    Ok(vec![
        Check::new("squeeze_bch_first", dev1 / scale1, 1e-12),
        Check::new("squeeze_bch_second", dev2 / scale2, 1e-12),
    ])
}

/// Which `K0` exponent to use in the three-factor form of `S(p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum K0Exponent {
    /// `-2 log cosh(2r)`
    Stated,
    /// `-2 log cosh(r)`
    Derived,
}

impl K0Exponent {
    pub fn beta(self, r: f64) -> f64 {
        match self {
            K0Exponent::Stated => -2.0 * (2.0 * r).cosh().ln(),
            K0Exponent::Derived => -2.0 * r.cosh().ln(),
        }
    }
}

fn disentangled_factors(
    sp: &SqueezeParams,
    l: &LadderSet,
    variant: K0Exponent,
) -> Result<[QOperator; 3]> {
    let u = sp.u.ok_or(Error::ZeroQuaternion)?;
    let t = sp.r.tanh();
    Ok([
        exp(&left_mul_op(u * t, &l.k_plus))?,
        exp(&l.k_zero.scale(variant.beta(sp.r)))?,
        exp(&left_mul_op(-u.conj() * t, &l.k_minus))?,
    ])
}

/// `e^{alpha.K+} e^{beta K0} e^{gamma.K-}` with `alpha = u tanh r`,
/// `gamma = -conj(u) tanh r` and `beta` from `variant`.
pub fn disentangled_squeeze(
    sp: &SqueezeParams,
    l: &LadderSet,
    variant: K0Exponent,
) -> Result<QOperator> {
    let [f1, f2, f3] = disentangled_factors(sp, l, variant)?;
    f1.compose(&f2)?.compose(&f3)
}

/// Deviation of the three-factor product from `S(p)` on the block.
pub fn disentanglement_deviation(
    sp: &SqueezeParams,
    l: &LadderSet,
    block: ProtectedBlock,
    variant: K0Exponent,
) -> Result<f64> {
    let [f1, f2, f3] = disentangled_factors(sp, l, variant)?;
    let s = squeeze(sp, l)?;
    Ok(block_product(&[&f1, &f2, &f3], block.size())?.block_max_diff(&s, block.size()))
}

/// Coefficient in front of `(u.K+ + conj(u).K-)` in `S K0 S^dag`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum K0Coefficient {
    /// `-sinh(2r)`
    Printed,
    /// `-sinh(2r)/2`
    Half,
}

/// `e^A K0 e^-A` against `c (u.K+ + conj(u).K-) + cosh(2r) K0` on the block.
pub fn k0_conjugation_deviation(
    sp: &SqueezeParams,
    l: &LadderSet,
    block: ProtectedBlock,
    coef: K0Coefficient,
) -> Result<f64> {
    let s = squeeze(sp, l)?;
    let lhs = block_product(&[&s, &l.k_zero, &s.adjoint()], block.size())?;
    let u = sp.phase();
    let c = match coef {
        K0Coefficient::Printed => -(2.0 * sp.r).sinh(),
        K0Coefficient::Half => -0.5 * (2.0 * sp.r).sinh(),
    };
    let rhs = lin(&[
        (u * c, &l.k_plus),
        (u.conj() * c, &l.k_minus),
        (Quaternion::real((2.0 * sp.r).cosh()), &l.k_zero),
    ]);
    Ok(lhs.block_max_diff(&rhs, block.size()))
}

/// `e^A K- e^-A` against `sinh^2 r u^2.K+ + cosh^2 r K- - sinh(2r) u.K0`.
pub fn kminus_conjugation_deviation(
    sp: &SqueezeParams,
    l: &LadderSet,
    block: ProtectedBlock,
) -> Result<f64> {
    let s = squeeze(sp, l)?;
    let lhs = block_product(&[&s, &l.k_minus, &s.adjoint()], block.size())?;
    let u = sp.phase();
    let (sh, ch) = (sp.r.sinh(), sp.r.cosh());
    let rhs = lin(&[
        (u * u * (sh * sh), &l.k_plus),
        (Quaternion::real(ch * ch), &l.k_minus),
        (u * -(2.0 * sp.r).sinh(), &l.k_zero),
    ]);
    Ok(lhs.block_max_diff(&rhs, block.size()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ladder::build_ladder;
    use crate::report::all_passed;

    fn setup(dim: usize, margin: usize) -> (LadderSet, ProtectedBlock) {
        (
            build_ladder(dim, SliceAxis::I).unwrap(),
            ProtectedBlock::new(dim, margin).unwrap(),
        )
    }

    #[test]
    fn zero_parameters_give_identity() {
        let (l, b) = setup(16, 4);
        assert_eq!(displacement(Quaternion::ZERO, &l).unwrap(), l.identity);
        assert_eq!(
            squeeze(&SqueezeParams::new(Quaternion::ZERO), &l).unwrap(),
            l.identity
        );
        let n = ordered_displacement(Quaternion::ZERO, &l, Ordering::Normal).unwrap();
        assert_eq!(n, l.identity);
        let shift = check_displacement_shift(Quaternion::ZERO, &l, b).unwrap();
        assert!(shift.iter().all(|c| c.deviation == 0.0));
        let conj = check_squeeze_conjugation(&SqueezeParams::new(Quaternion::ZERO), &l, b).unwrap();
        assert!(conj.iter().all(|c| c.deviation == 0.0));
    }

    #[test]
    fn displacement_identities() {
        let (l, b) = setup(64, 32);
        let q = Quaternion::new(0.5, 0.0, 0.0, 0.5);
        assert!(check_displacement_unitarity(q, &l, b).unwrap().passed());
        assert!(all_passed(&check_displacement_shift(q, &l, b).unwrap()));
        assert!(all_passed(&check_displacement_orderings(q, &l, b).unwrap()));
    }

    #[test]
    fn squeeze_identities_small() {
        let (l, b) = setup(128, 124);
        for p in [Quaternion::real(0.8), Quaternion::J * 0.6] {
            let sp = SqueezeParams::new(p);
            assert!(all_passed(&check_squeeze_basic(&sp, &l, b).unwrap()));
            assert!(all_passed(&check_squeeze_conjugation(&sp, &l, b).unwrap()));
            assert!(all_passed(
                &check_squeeze_bch_steps(&sp, &l, ProtectedBlock::new(128, 8).unwrap()).unwrap()
            ));
        }
    }

    #[test]
    fn derived_exponent_wins() {
        let (l, b) = setup(128, 120);
        let sp = SqueezeParams::from_polar(0.7, 0.4, SliceAxis::K);
        let derived = disentanglement_deviation(&sp, &l, b, K0Exponent::Derived).unwrap();
        let stated = disentanglement_deviation(&sp, &l, b, K0Exponent::Stated).unwrap();
        assert!(derived < 1e-8, "{derived}");
        assert!(stated > 1e-2, "{stated}");
    }

    #[test]
    fn k0_half_coefficient() {
        let (l, b) = setup(128, 120);
        let sp = SqueezeParams::from_polar(0.5, 1.1, SliceAxis::J);
        assert!(k0_conjugation_deviation(&sp, &l, b, K0Coefficient::Half).unwrap() < 1e-8);
        assert!(k0_conjugation_deviation(&sp, &l, b, K0Coefficient::Printed).unwrap() > 1e-2);
        assert!(kminus_conjugation_deviation(&sp, &l, b).unwrap() < 1e-8);
    }
}
