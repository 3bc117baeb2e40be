use proptest::prelude::*;

use qfock::gates::{displacement, squeeze};
use qfock::quat::{from_matrix, polar, slice_decompose, star_exp, to_matrix, unpolar};
use qfock::states::{coherent, expectations, pure_squeezed};
use qfock::{
    build_ladder, inner, left_mul, FockVector, ProtectedBlock, Quaternion, SliceAxis, SqueezeParams,
};

fn quat(scale: f64) -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-scale..scale).prop_map(Quaternion::from_array)
}

fn axis() -> impl Strategy<Value = SliceAxis> {
    prop::array::uniform3(-1.0..1.0f64)
        .prop_filter("nonzero", |a| a.iter().map(|x| x * x).sum::<f64>() > 1e-2)
        .prop_map(|[x, y, z]| SliceAxis::new(x, y, z).unwrap())
}

fn vector(dim: usize) -> impl Strategy<Value = FockVector> {
    prop::collection::vec(quat(1.0), dim).prop_map(FockVector::new)
}

proptest! {
    #[test]
    fn conjugation_reverses_products(p in quat(3.0), q in quat(3.0)) {
        prop_assert!((p * q).conj().dist(q.conj() * p.conj()) <= 1e-12 * (1.0 + p.norm() * q.norm()));
    }

    #[test]
    fn matrix_round_trip(q in quat(5.0)) {
        prop_assert!(from_matrix(&to_matrix(q), 1e-12).unwrap().dist(q) <= 1e-12 * (1.0 + q.norm()));
    }

    #[test]
    fn polar_angles_in_range(q in quat(2.0)) {
        let pf = polar(q);
        prop_assert!((0.0..=std::f64::consts::PI).contains(&pf.theta));
        prop_assert!(unpolar(&pf).dist(q) <= 1e-12 * (1.0 + q.norm()));
    }

    #[test]
    fn slice_decomposition_reassembles(q in quat(2.0)) {
        let d = slice_decompose(q);
        if let Some(ax) = d.axis {
            prop_assert!(Quaternion::in_slice(d.x, d.y, ax).dist(q) <= 1e-12 * (1.0 + q.norm()));
        }
    }

    #[test]
    fn star_exp_commuting_limit(re in -1.0..1.0f64, im in -1.0..1.0f64, ax in axis()) {
        // inside one slice e_*^{pq} is the ordinary exponential of pq
        let p = Quaternion::in_slice(re, im, ax);
        let q = Quaternion::in_slice(0.3, -0.2, ax);
        let pq = p * q;
        let (r, v) = (pq.w, pq.imag_norm());
        let want = if v == 0.0 { Quaternion::real(r.exp()) } else { Quaternion::real(r.exp() * v.cos()) + pq.imag() * (r.exp() * v.sin() / v) };
        prop_assert!(star_exp(p, q, 1e-18).dist(want) <= 1e-12);
    }

    #[test]
    fn left_mul_transfers_through_inner(q in quat(1.0), f in vector(12), g in vector(12)) {
        let lhs = inner(&left_mul(q.conj(), &f), &g).unwrap();
        let rhs = inner(&f, &left_mul(q, &g)).unwrap();
        prop_assert!(lhs.dist(rhs) <= 1e-12 * (1.0 + q.norm() * f.norm() * g.norm()));
    }

    #[test]
    fn left_mul_composes(p in quat(1.0), q in quat(1.0), f in vector(8)) {
        let a = left_mul(q, &left_mul(p, &f));
        prop_assert!(a.max_abs_diff(&left_mul(q * p, &f)).unwrap() <= 1e-13 * (1.0 + f.norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn displacement_preserves_norm(q in quat(0.5), f in vector(8)) {
        let l = build_ladder(64, SliceAxis::I).unwrap();
        let mut padded = f.into_coeffs();
        padded.resize(64, Quaternion::ZERO);
        let f = FockVector::new(padded);
        let g = displacement(q, &l).unwrap().apply(&f).unwrap();
        prop_assert!((g.norm() - f.norm()).abs() <= 1e-9 * f.norm());
    }

    #[test]
    fn squeezed_vacuum_obeys_uncertainty(r in 0.05..0.8f64, theta in 0.0..std::f64::consts::TAU, ax in axis()) {
        let l = build_ladder(128, ax).unwrap();
        let sp = SqueezeParams::from_polar(r, theta, ax);
        let s = pure_squeezed(&sp, &l).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() <= 1e-10);
        let m = expectations(&s, &l, ProtectedBlock::half(128).unwrap(), 1e-10).unwrap();
        prop_assert!(m.var_x * m.var_y >= 1.0 / 16.0 - 1e-10);
        prop_assert!(m.mandel_q.unwrap() > 1.0);
    }

    #[test]
    fn squeeze_then_inverse_is_identity_on_coherent(r in 0.05..0.6f64, theta in 0.0..std::f64::consts::TAU, q in quat(0.5)) {
        let l = build_ladder(128, SliceAxis::J).unwrap();
        let sp = SqueezeParams::from_polar(r, theta, SliceAxis::K);
        let eta = coherent(q, 128, 1e-12).unwrap();
        let back = squeeze(&sp.negate(), &l).unwrap().apply(&squeeze(&sp, &l).unwrap().apply(&eta).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&eta).unwrap() <= 1e-9);
    }
}
