use gwloc_core::arith::{int, LaurentPoly, Rational};
use gwloc_core::engine::{compute_invariant, pure, TwistSpec};
use gwloc_core::oracles::{aspinwall_morrison, kontsevich, lines_on_hypersurface, ProjectiveWdvv};
use gwloc_core::target::{CurveClass, LineBundle, TargetModel};

fn constant(v: Rational) -> LaurentPoly {
    LaurentPoly::constant(v)
}

#[test]
fn plane_curves_through_points() {
    let m = TargetModel::projective_space(2);
    for d in 1..=4u32 {
        let ins = vec![pure(&m, 0, 2, 0); (3 * d - 1) as usize];
        let r = compute_invariant(&m, &CurveClass::new(d as i64, 0), &ins, None).unwrap();
        assert_eq!(r.value, constant(Rational::from_integer(kontsevich(d))), "d = {d}");
    }
}

#[test]
fn lines_in_p3_meeting_four_lines() {
    let m = TargetModel::projective_space(3);
    let ins = vec![pure(&m, 0, 2, 0); 4];
    let r = compute_invariant(&m, &CurveClass::new(1, 0), &ins, None).unwrap();
    let mut o = ProjectiveWdvv::new(3);
    assert_eq!(r.value, constant(o.invariant(1, &[2, 2, 2, 2])));
}

#[test]
fn p3_conics_meeting_eight_lines() {
    let m = TargetModel::projective_space(3);
    let ins = vec![pure(&m, 0, 2, 0); 8];
    let r = compute_invariant(&m, &CurveClass::new(2, 0), &ins, None).unwrap();
    assert_eq!(r.value, constant(int(92)));
}

#[test]
fn quintic_lines() {
    let m = TargetModel::projective_space(4);
    let t = TwistSpec::euler([LineBundle::pullback(5)]);
    let r = compute_invariant(&m, &CurveClass::new(1, 0), &[], Some(&t)).unwrap();
    assert_eq!(r.value, constant(Rational::from_integer(lines_on_hypersurface(5))));
}

#[test]
fn cubic_surface_lines() {
    let m = TargetModel::projective_space(3);
    let t = TwistSpec::euler([LineBundle::pullback(3)]);
    let r = compute_invariant(&m, &CurveClass::new(1, 0), &[], Some(&t)).unwrap();
    assert_eq!(r.value, constant(int(27)));
}

#[test]
fn local_p1_multiple_covers() {
    let m = TargetModel::projective_space(1);
    let t = TwistSpec::inverse([LineBundle::pullback(-1), LineBundle::pullback(-1)]);
    for d in 1..=4u32 {
        let r = compute_invariant(&m, &CurveClass::new(d as i64, 0), &[], Some(&t)).unwrap();
        assert_eq!(r.value, constant(aspinwall_morrison(d)), "d = {d}");
    }
}
