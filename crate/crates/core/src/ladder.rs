//! Ladder operators on the truncated space and their algebraic checks.

use ndarray::Array2;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{left_mul_op, right_mul_op, ProtectedBlock, QOperator};
use crate::quat::{Quaternion, SliceAxis};
use crate::report::Check;

/// The six operators spanning the Lie algebras, in storage order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Generator {
    Identity,
    Number,
    Lower,
    Raise,
    LowerSq,
    RaiseSq,
}

impl Generator {
    pub const ALL: [Generator; 6] = [
        Generator::Identity,
        Generator::Number,
        Generator::Lower,
        Generator::Raise,
        Generator::LowerSq,
        Generator::RaiseSq,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Generator::Identity => "I",
            Generator::Number => "N",
            Generator::Lower => "a",
            Generator::Raise => "a^dag",
            Generator::LowerSq => "a^2",
            Generator::RaiseSq => "(a^dag)^2",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone)]
pub struct LadderSet {
    pub dim: usize,
    pub axis: SliceAxis,
    pub identity: QOperator,
    pub a: QOperator,
    pub a_dag: QOperator,
    pub a_sq: QOperator,
    pub a_dag_sq: QOperator,
    pub n_op: QOperator,
    pub x_op: QOperator,
    pub y_op: QOperator,
    pub k_plus: QOperator,
    pub k_minus: QOperator,
    pub k_zero: QOperator,
}

impl LadderSet {
    pub fn generator(&self, g: Generator) -> &QOperator {
        match g {
            Generator::Identity => &self.identity,
            Generator::Number => &self.n_op,
            Generator::Lower => &self.a,
            Generator::Raise => &self.a_dag,
            Generator::LowerSq => &self.a_sq,
            Generator::RaiseSq => &self.a_dag_sq,
        }
    }
}

/// `a Phi_n = sqrt(n) Phi_{n-1}`, `a^dag = adjoint(a)`, `N = a^dag a`,
/// `X = (a + a^dag)/2`, `Y = (-axis/2).(a - a^dag)`, `K+ = (a^dag)^2/2`,
/// `K- = a^2/2`, `K0 = (N + I/2)/2`.
pub fn build_ladder(dim: usize, axis: SliceAxis) -> Result<LadderSet> {
    if dim < 4 {
        return Err(Error::Invalid(format!("ladder needs dim >= 4, got {dim}")));
    }
    let mut lower = Array2::zeros((dim, dim));
    for n in 1..dim {
        lower[[n - 1, n]] = (n as f64).sqrt();
    }
    let a = QOperator::from_real(lower);
    let a_dag = a.adjoint();
    let identity = QOperator::identity(dim);
    let n_op = a_dag.compose(&a)?;
    let a_sq = a.compose(&a)?;
    let a_dag_sq = a_dag.compose(&a_dag)?;
    let x_op = a.add(&a_dag)?.scale(0.5);
    let y_op = left_mul_op(axis.as_quaternion() * -0.5, &a.sub(&a_dag)?);
    let k_plus = a_dag_sq.scale(0.5);
    let k_minus = a_sq.scale(0.5);
    let k_zero = n_op.add(&identity.scale(0.5))?.scale(0.5);
    Ok(LadderSet {
        dim,
        axis,
        identity,
        a,
        a_dag,
        a_sq,
        a_dag_sq,
        n_op,
        x_op,
        y_op,
        k_plus,
        k_minus,
        k_zero,
    })
}

/// Bound for identities that hold exactly in exact arithmetic on the block.
pub const ALGEBRAIC_BOUND: f64 = 1e-12;

/// `q.a = a.q` and `q.a^dag = a^dag.q` entrywise over the whole matrix.
pub fn check_scalar_commute(q: Quaternion, l: &LadderSet) -> Check {
    let d = l.dim;
    let da = left_mul_op(q, &l.a).block_max_diff(&right_mul_op(&l.a, q), d);
    let db = left_mul_op(q, &l.a_dag).block_max_diff(&right_mul_op(&l.a_dag, q), d);
    Check::new("scalar_commutes_with_ladder", da.max(db), 1e-15)
}

fn bracket_dev(x: &QOperator, y: &QOperator, rhs: &QOperator, n: usize) -> f64 {
    x.commutator(y)
        .expect("ladder operators share a dimension")
        .block_max_diff(rhs, n)
}

/// `[K0,K+] = K+`, `[K0,K-] = -K-`, `[K+,K-] = -2K0` on the block.
pub fn check_su11(l: &LadderSet, block: ProtectedBlock) -> Result<Vec<Check>> {
    if block.margin < 4 || block.dim != l.dim {
        return Err(Error::InvalidBlock {
            dim: block.dim,
            margin: block.margin,
        });
    }
    let n = block.size();
    Ok(vec![
        Check::new(
            "su11_k0_kplus",
            bracket_dev(&l.k_zero, &l.k_plus, &l.k_plus, n),
            ALGEBRAIC_BOUND,
        ),
        Check::new(
            "su11_k0_kminus",
            bracket_dev(&l.k_zero, &l.k_minus, &l.k_minus.scale(-1.0), n),
            ALGEBRAIC_BOUND,
        ),
        Check::new(
            "su11_kplus_kminus",
            bracket_dev(&l.k_plus, &l.k_minus, &l.k_zero.scale(-2.0), n),
            ALGEBRAIC_BOUND,
        ),
    ])
}

/// Self-adjointness of `X`, `Y` and `[X,Y] = (axis/2).I` on the block.
pub fn check_xy(l: &LadderSet, block: ProtectedBlock) -> Vec<Check> {
    let d = l.dim;
    let rhs = left_mul_op(l.axis.as_quaternion() * 0.5, &l.identity);
    vec![
        Check::new(
            "x_self_adjoint",
            l.x_op.adjoint().block_max_diff(&l.x_op, d),
            0.0,
        ),
        Check::new(
            "y_self_adjoint",
            l.y_op.adjoint().block_max_diff(&l.y_op, d),
            0.0,
        ),
        Check::new(
            "xy_commutator",
            bracket_dev(&l.x_op, &l.y_op, &rhs, block.size()),
            ALGEBRAIC_BOUND,
        ),
    ]
}

/// `[a, a^dag] = I` on the block.
pub fn check_canonical(l: &LadderSet, block: ProtectedBlock) -> Check {
    Check::new(
        "canonical_commutator",
        bracket_dev(&l.a, &l.a_dag, &l.identity, block.size()),
        ALGEBRAIC_BOUND,
    )
}

/// A bracket of two generators against a real combination of generators.
#[derive(Debug, Clone)]
pub struct BracketRule {
    pub name: &'static str,
    pub left: Generator,
    pub right: Generator,
    pub rhs: Vec<(f64, Generator)>,
}

impl BracketRule {
    fn new(
        name: &'static str,
        left: Generator,
        right: Generator,
        rhs: &[(f64, Generator)],
    ) -> Self {
        Self {
            name,
            left,
            right,
            rhs: rhs.to_vec(),
        }
    }

    pub fn rhs_operator(&self, l: &LadderSet) -> QOperator {
        self.rhs
            .iter()
            .fold(QOperator::zeros(l.dim), |acc, &(c, g)| {
                acc.add(&l.generator(g).scale(c)).expect("same dimension")
            })
    }

    pub fn deviation(&self, l: &LadderSet, block: ProtectedBlock) -> f64 {
        bracket_dev(
            l.generator(self.left),
            l.generator(self.right),
            &self.rhs_operator(l),
            block.size(),
        )
    }
}

/// The eight brackets as they are usually tabulated; the `[a^2,(a^dag)^2]`
/// entry carries the sign `-2(2N+I)`.
pub fn printed_bracket_table() -> Vec<BracketRule> {
    use Generator::*;
    vec![
        BracketRule::new("[a,a^dag] = I", Lower, Raise, &[(1.0, Identity)]),
        BracketRule::new("[a,N] = a", Lower, Number, &[(1.0, Lower)]),
        BracketRule::new("[a^dag,N] = -a^dag", Raise, Number, &[(-1.0, Raise)]),
        BracketRule::new(
            "[a^2,(a^dag)^2] = -2(2N+I)",
            LowerSq,
            RaiseSq,
            &[(-4.0, Number), (-2.0, Identity)],
        ),
        BracketRule::new("[a^2,a^dag] = 2a", LowerSq, Raise, &[(2.0, Lower)]),
        BracketRule::new("[(a^dag)^2,a] = -2a^dag", RaiseSq, Lower, &[(-2.0, Raise)]),
        BracketRule::new("[a^2,N] = 2a^2", LowerSq, Number, &[(2.0, LowerSq)]),
        BracketRule::new(
            "[(a^dag)^2,N] = -2(a^dag)^2",
            RaiseSq,
            Number,
            &[(-2.0, RaiseSq)],
        ),
    ]
}

/// `[a^2,(a^dag)^2] = 2(2N+I)`, the value the operators actually give.
pub fn lowersq_raisesq_rule() -> BracketRule {
    BracketRule::new(
        "[a^2,(a^dag)^2] = 2(2N+I)",
        Generator::LowerSq,
        Generator::RaiseSq,
        &[(4.0, Generator::Number), (2.0, Generator::Identity)],
    )
}

pub fn check_bracket_table(l: &LadderSet, block: ProtectedBlock) -> Vec<Check> {
    printed_bracket_table()
        .iter()
        .map(|r| Check::new(r.name, r.deviation(l, block), ALGEBRAIC_BOUND))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{FockVector, ProtectedBlock};

    fn ladder(d: usize) -> LadderSet {
        build_ladder(d, SliceAxis::I).unwrap()
    }

    #[test]
    fn shift_rules() {
        let l = ladder(8);
        let e = |k| FockVector::basis(8, k);
        assert_eq!(l.a.apply(&e(1)).unwrap(), e(0));
        assert_eq!(l.a_dag.apply(&e(0)).unwrap(), e(1));
        let n5 = l.n_op.apply(&e(5)).unwrap();
        assert!(
            n5.max_abs_diff(&e(5).right_scale(Quaternion::real(5.0)))
                .unwrap()
                < 1e-14
        );
        assert!(build_ladder(3, SliceAxis::I).is_err());
    }

    #[test]
    fn number_operator_diagonal() {
        let l = ladder(12);
        for n in 0..12 {
            assert!((l.n_op.get(n, n).w - n as f64).abs() < 1e-14);
        }
        assert_eq!(l.n_op.adjoint(), l.n_op);
    }

    #[test]
    fn scalar_commute() {
        let l = ladder(10);
        assert_eq!(check_scalar_commute(Quaternion::ONE, &l).deviation, 0.0);
        assert!(check_scalar_commute(Quaternion::J, &l).passed());
    }

    #[test]
    fn su11_and_xy() {
        let l = build_ladder(20, SliceAxis::J).unwrap();
        let b = ProtectedBlock::new(20, 4).unwrap();
        assert!(check_su11(&l, b).unwrap().iter().all(Check::passed));
        assert!(check_xy(&l, b).iter().all(Check::passed));
        assert!(check_canonical(&l, b).passed());
        assert!(check_su11(&l, ProtectedBlock::new(20, 2).unwrap()).is_err());
    }

    #[test]
    fn corrected_bracket_sign() {
        let l = ladder(16);
        let b = ProtectedBlock::new(16, 4).unwrap();
        assert!(lowersq_raisesq_rule().deviation(&l, b) < 1e-12);
        let table = check_bracket_table(&l, b);
        let failing: Vec<_> = table
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.name.as_str())
            .collect();
        assert_eq!(failing, vec!["[a^2,(a^dag)^2] = -2(2N+I)"]);
    }
}
