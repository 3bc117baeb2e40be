//! The real span of `tau.G` for `tau` in `{1,i,j,k}` and `G` among the six
//! generators, with brackets computed on the operator realization and read
//! back by least squares on the protected block.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{left_mul_op, ProtectedBlock, QOperator};
use crate::ladder::{Generator, LadderSet};
use crate::quat::Quaternion;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Tau {
    One,
    I,
    J,
    K,
}

impl Tau {
    pub const ALL: [Tau; 4] = [Tau::One, Tau::I, Tau::J, Tau::K];
    pub const IMAGINARY: [Tau; 3] = [Tau::I, Tau::J, Tau::K];

    pub fn unit(self) -> Quaternion {
        match self {
            Tau::One => Quaternion::ONE,
            Tau::I => Quaternion::I,
            Tau::J => Quaternion::J,
            Tau::K => Quaternion::K,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Tau::One => "1",
            Tau::I => "i",
            Tau::J => "j",
            Tau::K => "k",
        }
    }
}

pub const ALGEBRA_DIM: usize = 24;

/// Coefficient of `tau.G` lives at `6 * tau + G`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlgebraElement {
    pub coeffs: [f64; ALGEBRA_DIM],
}

impl Default for AlgebraElement {
    fn default() -> Self {
        Self::zero()
    }
}

fn slot(tau: Tau, g: Generator) -> usize {
    6 * tau.index() + g.index()
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self {
            coeffs: [0.0; ALGEBRA_DIM],
        }
    }

    pub fn from_coeffs(coeffs: [f64; ALGEBRA_DIM]) -> Self {
        Self { coeffs }
    }

    pub fn basis(tau: Tau, g: Generator) -> Self {
        let mut e = Self::zero();
        e.coeffs[slot(tau, g)] = 1.0;
        e
    }

    /// `sum c.G` with the real coefficients `c` placed in the `tau` block.
    pub fn from_terms(tau: Tau, terms: &[(f64, Generator)]) -> Self {
        let mut e = Self::zero();
        for &(c, g) in terms {
            e.coeffs[slot(tau, g)] += c;
        }
        e
    }

    pub fn get(&self, tau: Tau, g: Generator) -> f64 {
        self.coeffs[slot(tau, g)]
    }

    pub fn set(&mut self, tau: Tau, g: Generator, v: f64) {
        self.coeffs[slot(tau, g)] = v;
    }

    /// Keep only the `tau` block.
    pub fn part(&self, tau: Tau) -> Self {
        let mut e = Self::zero();
        let r = 6 * tau.index()..6 * tau.index() + 6;
        e.coeffs[r.clone()].copy_from_slice(&self.coeffs[r]);
        e
    }

    /// Keep the real block and the `tau` block: the `h12` view.
    pub fn h12(&self, tau: Tau) -> Self {
        self.part(Tau::One).add(&self.part(tau))
    }

    pub fn supported_on(&self, taus: &[Tau]) -> bool {
        Tau::ALL
            .iter()
            .filter(|t| !taus.contains(t))
            .all(|&t| self.part(t).coeffs.iter().all(|&c| c == 0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut e = *self;
        e.coeffs.iter_mut().zip(o.coeffs).for_each(|(a, b)| *a += b);
        e
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut e = *self;
        e.coeffs.iter_mut().for_each(|a| *a *= s);
        e
    }

    /// `(x1 + tau x2) . self` for an element of the `h12` view over `tau`.
    pub fn slice_mul(&self, x1: f64, x2: f64, tau: Tau) -> Result<Self> {
        if tau == Tau::One || !self.supported_on(&[Tau::One, tau]) {
            return Err(Error::Invalid(
                "slice scalar needs an h12 element over an imaginary unit".into(),
            ));
        }
        let mut e = Self::zero();
        for g in Generator::ALL {
            let (c1, c2) = (self.get(Tau::One, g), self.get(tau, g));
            e.set(Tau::One, g, x1 * c1 - x2 * c2);
            e.set(tau, g, x1 * c2 + x2 * c1);
        }
        Ok(e)
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(o.coeffs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.max_abs_diff(&Self::zero())
    }

    /// Nonzero terms as `"tau.G" -> coefficient`.
    pub fn terms(&self, cutoff: f64) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        for tau in Tau::ALL {
            for g in Generator::ALL {
                let c = self.get(tau, g);
                if c.abs() > cutoff {
                    m.insert(term_name(tau, g), c);
                }
            }
        }
        m
    }
}

fn term_name(tau: Tau, g: Generator) -> String {
    match tau {
        Tau::One => g.symbol().to_string(),
        t => format!("{}.{}", t.symbol(), g.symbol()),
    }
}

/// `sum coeff.(tau.G)` as an operator.
pub fn realize(e: &AlgebraElement, l: &LadderSet) -> QOperator {
    let mut acc = QOperator::zeros(l.dim);
    for tau in Tau::ALL {
        for g in Generator::ALL {
            let c = e.get(tau, g);
            if c != 0.0 {
                let term = left_mul_op(tau.unit() * c, l.generator(g));
                acc = acc.add(&term).expect("ladder operators share a dimension");
            }
        }
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Decomposition {
    pub element: AlgebraElement,
    /// Largest entry of `op - realize(element)` on the block.
    pub residual: f64,
}

/// Least-squares fit of `op` by the 24 basis operators on the block. Each
/// quaternion plane is fitted separately by the six real generators.
pub fn decompose(op: &QOperator, l: &LadderSet, block: ProtectedBlock) -> Result<Decomposition> {
    if op.dim() != l.dim || block.dim != l.dim {
        return Err(Error::DimensionMismatch {
            expected: l.dim,
            found: op.dim(),
        });
    }
    let n = block.size();
    let rows = n * n;
    let design = DMatrix::from_fn(rows, 6, |r, c| {
        let g = Generator::ALL[c];
        l.generator(g).planes()[0][[r / n, r % n]]
    });
    let planes = op.planes();
    let rhs = DMatrix::from_fn(rows, 4, |r, p| planes[p][[r / n, r % n]]);
    let svd = design.clone().svd(true, true);
    let sol = svd
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::Invalid(e.to_string()))?;
    let fit = &design * &sol;
    let residual = (&fit - &rhs).iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut element = AlgebraElement::zero();
    for tau in Tau::ALL {
        for g in Generator::ALL {
            element.set(tau, g, sol[(g.index(), tau.index())]);
        }
    }
    Ok(Decomposition { element, residual })
}

/// Like [`decompose`], failing with `OutsideSpan` when the residual reaches `tol`.
pub fn decompose_within(
    op: &QOperator,
    l: &LadderSet,
    block: ProtectedBlock,
    tol: f64,
) -> Result<AlgebraElement> {
    let d = decompose(op, l, block)?;
    if !(d.residual < tol) {
        return Err(Error::OutsideSpan {
            residual: d.residual,
        });
    }
    Ok(d.element)
}

/// Realized operators plus the block and tolerance used to read brackets back.
#[derive(Debug, Clone)]
pub struct Algebra {
    pub ladder: LadderSet,
    pub block: ProtectedBlock,
    pub tol: f64,
}

impl Algebra {
    /// Degree-two products are exact away from the last two rows, so a
    /// margin of four is enough.
    pub fn new(ladder: LadderSet, block: ProtectedBlock, tol: f64) -> Result<Self> {
        if block.dim != ladder.dim || block.margin < 4 {
            return Err(Error::InvalidBlock {
                dim: block.dim,
                margin: block.margin,
            });
        }
        Ok(Self { ladder, block, tol })
    }

    pub fn realize(&self, e: &AlgebraElement) -> QOperator {
        realize(e, &self.ladder)
    }

    pub fn decompose(&self, op: &QOperator) -> Result<AlgebraElement> {
        decompose_within(op, &self.ladder, self.block, self.tol)
    }

    fn commutator(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        let op = self.realize(a).commutator(&self.realize(b))?;
        self.decompose(&op)
    }

    /// `AB - BA` for `A`, `B` in the `h12` view over `tau`.
    pub fn bracket_tau(
        &self,
        a: &AlgebraElement,
        b: &AlgebraElement,
        tau: Tau,
    ) -> Result<AlgebraElement> {
        for e in [a, b] {
            if !e.supported_on(&[Tau::One, tau]) {
                return Err(Error::Invalid(format!(
                    "element has components outside the {{1,{}}} blocks",
                    tau.symbol()
                )));
            }
        }
        self.commutator(a, b)
    }

    /// `[A1,B1] + sum_tau [A1,B_tau] + sum_tau [A_tau, B1 + B_tau]`.
    pub fn bracket_h24(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        let (a1, b1) = (a.part(Tau::One), b.part(Tau::One));
        let mut acc = self.commutator(&a1, &b1)?;
        for tau in Tau::IMAGINARY {
            let (at, bt) = (a.part(tau), b.part(tau));
            acc = acc.add(&self.commutator(&a1, &bt)?);
            acc = acc.add(&self.commutator(&at, &b1.add(&bt))?);
        }
        Ok(acc)
    }

    /// `sum_tau ([A1,B1]/3 + [A1,B_tau] + [A_tau, B1 + B_tau])`.
    pub fn bracket_h24_alternative(
        &self,
        a: &AlgebraElement,
        b: &AlgebraElement,
    ) -> Result<AlgebraElement> {
        let (a1, b1) = (a.part(Tau::One), b.part(Tau::One));
        let real = self.commutator(&a1, &b1)?;
        let mut acc = AlgebraElement::zero();
        for tau in Tau::IMAGINARY {
            let (at, bt) = (a.part(tau), b.part(tau));
            acc = acc
                .add(&real.scale(1.0 / 3.0))
                .add(&self.commutator(&a1, &bt)?)
                .add(&self.commutator(&at, &b1.add(&bt))?);
        }
        Ok(acc)
    }

    /// The full operator commutator read back into the basis, without
    /// dropping the mixed `[A_tau, B_tau']` terms.
    pub fn operator_bracket(
        &self,
        a: &AlgebraElement,
        b: &AlgebraElement,
    ) -> Result<Decomposition> {
        let op = self.realize(a).commutator(&self.realize(b))?;
        decompose(&op, &self.ladder, self.block)
    }
}

/// Largest coefficient of `[A,[B,C]] + [C,[A,B]] + [B,[C,A]]`.
pub fn jacobi_residual<F>(
    bracket: F,
    a: &AlgebraElement,
    b: &AlgebraElement,
    c: &AlgebraElement,
) -> Result<f64>
where
    F: Fn(&AlgebraElement, &AlgebraElement) -> Result<AlgebraElement>,
{
    let t1 = bracket(a, &bracket(b, c)?)?;
    let t2 = bracket(c, &bracket(a, b)?)?;
    let t3 = bracket(b, &bracket(c, a)?)?;
    Ok(t1.add(&t2).add(&t3).max_abs())
}

#[derive(Debug, Clone, Serialize)]
pub struct StructureEntry {
    pub left: String,
    pub right: String,
    pub result: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StructureTable {
    pub basis: Vec<String>,
    pub bracket: &'static str,
    pub entries: Vec<StructureEntry>,
}

/// Nonzero brackets of basis pairs under the `h24` bracket.
pub fn structure_constants(alg: &Algebra) -> Result<StructureTable> {
    let mut basis = Vec::with_capacity(ALGEBRA_DIM);
    for tau in Tau::ALL {
        for g in Generator::ALL {
            basis.push((tau, g));
        }
    }
    let mut entries = Vec::new();
    for &(t1, g1) in &basis {
        for &(t2, g2) in &basis {
            let r = alg.bracket_h24(
                &AlgebraElement::basis(t1, g1),
                &AlgebraElement::basis(t2, g2),
            )?;
            let result = r.terms(1e-9);
            if !result.is_empty() {
                entries.push(StructureEntry {
                    left: term_name(t1, g1),
                    right: term_name(t2, g2),
                    result: result
                        .into_iter()
                        .map(|(k, v)| (k, round_constant(v)))
                        .collect(),
                });
            }
        }
    }
    Ok(StructureTable {
        basis: basis.iter().map(|&(t, g)| term_name(t, g)).collect(),
        bracket: "h24",
        entries,
    })
}

/// Structure constants are small integers; snap least-squares noise.
fn round_constant(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() < 1e-9 {
        r
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ladder::build_ladder;
    use crate::quat::SliceAxis;
    use Generator::*;

    fn alg() -> Algebra {
        Algebra::new(
            build_ladder(16, SliceAxis::I).unwrap(),
            ProtectedBlock::new(16, 4).unwrap(),
            1e-9,
        )
        .unwrap()
    }

    fn sample(seed: u64, taus: &[Tau]) -> AlgebraElement {
        let mut s = seed;
        let mut e = AlgebraElement::zero();
        for &t in taus {
            for g in Generator::ALL {
                s = s
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                e.set(t, g, ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0);
            }
        }
        e
    }

    #[test]
    fn realize_basics() {
        let a = alg();
        assert_eq!(
            a.realize(&AlgebraElement::basis(Tau::One, Lower)),
            a.ladder.a
        );
        let j_id = a.realize(&AlgebraElement::basis(Tau::J, Identity));
        assert_eq!(j_id, left_mul_op(Quaternion::J, &a.ladder.identity));
        let (x, y) = (sample(1, &Tau::ALL), sample(2, &Tau::ALL));
        let lhs = a.realize(&x.scale(2.0).add(&y));
        let rhs = a.realize(&x).scale(2.0).add(&a.realize(&y)).unwrap();
        assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn decompose_round_trip_and_span() {
        let a = alg();
        let e = sample(3, &Tau::ALL);
        assert!(a.decompose(&a.realize(&e)).unwrap().max_abs_diff(&e) < 1e-12);
        let cube = a.ladder.a_sq.compose(&a.ladder.a).unwrap();
        assert!(matches!(a.decompose(&cube), Err(Error::OutsideSpan { .. })));
        let c = a.ladder.a_sq.commutator(&a.ladder.n_op).unwrap();
        let want = AlgebraElement::from_terms(Tau::One, &[(2.0, LowerSq)]);
        assert!(a.decompose(&c).unwrap().max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn tau_brackets() {
        let a = alg();
        let b = |x, y| {
            a.bracket_tau(
                &AlgebraElement::basis(Tau::One, x),
                &AlgebraElement::basis(Tau::One, y),
                Tau::K,
            )
            .unwrap()
        };
        assert!(b(Lower, Raise).max_abs_diff(&AlgebraElement::basis(Tau::One, Identity)) < 1e-12);
        let sq = AlgebraElement::from_terms(Tau::One, &[(4.0, Number), (2.0, Identity)]);
        assert!(b(LowerSq, RaiseSq).max_abs_diff(&sq) < 1e-12);
        let x = sample(4, &[Tau::One, Tau::K]);
        assert!(a.bracket_tau(&x, &x, Tau::K).unwrap().max_abs() < 1e-12);
        assert!(a.bracket_tau(&x, &sample(5, &[Tau::I]), Tau::K).is_err());
    }

    #[test]
    fn h12_is_a_lie_algebra() {
        let a = alg();
        for tau in Tau::IMAGINARY {
            let s = [Tau::One, tau];
            let (x, y, z) = (sample(6, &s), sample(7, &s), sample(8, &s));
            let br = |p: &AlgebraElement, q: &AlgebraElement| a.bracket_tau(p, q, tau);
            assert!(jacobi_residual(br, &x, &y, &z).unwrap() < 1e-9);
            let anti = br(&x, &y).unwrap().add(&br(&y, &x).unwrap());
            assert!(anti.max_abs() < 1e-12);
            let lhs = br(&x.slice_mul(0.3, -1.2, tau).unwrap(), &z).unwrap();
            let rhs = br(&x, &z).unwrap().slice_mul(0.3, -1.2, tau).unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-10);
        }
    }

    #[test]
    fn h24_forms_agree_and_close() {
        let a = alg();
        let (x, y) = (sample(9, &Tau::ALL), sample(10, &Tau::ALL));
        let p = a.bracket_h24(&x, &y).unwrap();
        assert!(p.max_abs_diff(&a.bracket_h24_alternative(&x, &y).unwrap()) < 1e-10);
        let anti = p.add(&a.bracket_h24(&y, &x).unwrap());
        assert!(anti.max_abs() < 1e-12);
        let (r1, r2) = (x.part(Tau::One), y.part(Tau::One));
        let real = a.bracket_h24(&r1, &r2).unwrap();
        assert!(real.max_abs_diff(&a.bracket_tau(&r1, &r2, Tau::I).unwrap()) < 1e-12);
    }

    #[test]
    fn h24_jacobi_fails_for_mixed_units() {
        let a = alg();
        let br = |p: &AlgebraElement, q: &AlgebraElement| a.bracket_h24(p, q);
        let mixed = jacobi_residual(
            br,
            &sample(21, &Tau::ALL),
            &sample(22, &Tau::ALL),
            &sample(23, &Tau::ALL),
        )
        .unwrap();
        assert!(mixed > 1e-3, "{mixed}");
        let s = [Tau::One, Tau::J];
        assert!(
            jacobi_residual(br, &sample(11, &s), &sample(12, &s), &sample(13, &s)).unwrap() < 1e-9
        );
    }

    #[test]
    fn mixed_units_leave_the_span() {
        let a = alg();
        let x = AlgebraElement::basis(Tau::I, LowerSq);
        let y = AlgebraElement::basis(Tau::J, RaiseSq);
        assert!(a.operator_bracket(&x, &y).unwrap().residual > 1.0);
    }

    #[test]
    fn structure_table_has_expected_entry() {
        let t = structure_constants(&alg()).unwrap();
        assert_eq!(t.basis.len(), 24);
        let e = t
            .entries
            .iter()
            .find(|e| e.left == "a^2" && e.right == "(a^dag)^2")
            .unwrap();
        assert_eq!(e.result.get("N"), Some(&4.0));
        assert_eq!(e.result.get("I"), Some(&2.0));
    }
}
