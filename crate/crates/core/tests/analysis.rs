use num_bigint::BigInt;
use num_rational::BigRational;
use origami_core::analysis::*;
use origami_core::modular::{classify, ElementType, Mat2Z};
use origami_core::{Exec, Origami};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn run(o: &Origami) -> Analysis {
    analyze(o, Limits::default(), Exec::default()).unwrap()
}

#[test]
fn torus_spectrum() {
    let a = run(&Origami::torus());
    assert_eq!(a.spectrum(), vec![q(1, 1)]);
    assert!(a.is_complete());
}

#[test]
fn l22_spectrum_and_complement() {
    let a = run(&Origami::l22());
    assert_eq!(a.spectrum(), vec![q(1, 1), q(1, 3)]);
    assert_eq!(
        a.full_spectrum(),
        vec![q(1, 1), q(1, 3), q(-1, 3), q(-1, 1)]
    );
    let comp = a.pieces.last().unwrap();
    assert_eq!(comp.origin, Origin::Complement);
    let report = comp.report.as_ref().unwrap();
    assert_eq!(
        (report.degree, report.vol_ratio.clone()),
        (Some(1), Some(q(1, 3)))
    );
    let r2 = comp.rank2.as_ref().unwrap();
    let t2 = Mat2Z::t_pow(2).projective_key();
    let mut seen = (false, false);
    for (g, m) in r2.domain.schreier_gens().iter().zip(&r2.images) {
        let t = m.trace();
        if g.matrix.projective_key() == t2 {
            assert!(t == BigInt::from(2) || t == BigInt::from(-2));
            assert!(!m.is_central());
            seen.0 = true;
        }
        if classify(&g.matrix) == (ElementType::Elliptic { order: 2 }) {
            assert_eq!(t, BigInt::from(0));
            seen.1 = true;
        }
    }
    assert_eq!(seen, (true, true));
}

#[test]
fn qmod9_spectrum() {
    let a = run(&Origami::qmod9());
    assert_eq!(a.spectrum(), vec![q(1, 1), q(1, 3), q(1, 3), q(1, 3)]);
    assert!(a.is_complete());
    let pullbacks: Vec<&Piece> = a
        .pieces
        .iter()
        .filter(|p| matches!(p.origin, Origin::Pullback { .. }))
        .collect();
    assert_eq!(pullbacks.len(), 2);
    assert_ne!(pullbacks[0].subspace, pullbacks[1].subspace);
    let comp = a
        .pieces
        .iter()
        .find(|p| p.origin == Origin::Complement)
        .unwrap();
    let r2 = comp.rank2.as_ref().unwrap();
    let t2 = Mat2Z::t_pow(2).projective_key();
    let i = r2
        .domain
        .schreier_gens()
        .iter()
        .position(|g| g.matrix.projective_key() == t2)
        .unwrap();
    let t = r2.images[i].trace();
    assert!(t == BigInt::from(1) || t == BigInt::from(-1));
    assert_eq!(comp.lambda(), Some(&q(1, 3)));
    for p in &pullbacks {
        assert_eq!(p.lambda(), Some(&q(1, 3)));
    }
}

#[test]
fn json_is_deterministic() {
    let a = serde_json::to_string(&run(&Origami::l22()).to_json()).unwrap();
    let b = serde_json::to_string(
        &analyze(&Origami::l22(), Limits::default(), Exec::Sequential)
            .unwrap()
            .to_json(),
    )
    .unwrap();
    assert_eq!(a, b);
    assert!(a.contains("\"spectrum\":[\"1\",\"1/3\"]"));
}

#[test]
fn overflow_is_reported_with_stage() {
    let limits = Limits {
        max_orbit: 1,
        ..Limits::default()
    };
    let e = analyze(&Origami::l22(), limits, Exec::Sequential).unwrap_err();
    assert_eq!(e.stage, Stage::VeechGroup);
    assert_eq!(e.error.class(), origami_core::ErrorClass::Overflow);
}
