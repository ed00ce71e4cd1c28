use num_bigint::BigInt;
use num_rational::BigRational;
use origami_core::lyapunov::*;
use origami_core::modular::*;
use origami_core::Error;

fn w(s: &str) -> WordST {
    WordST::parse(s).unwrap()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn embedding(pairs: &[(&str, &str)]) -> ModularEmbeddingData {
    let gens: Vec<WordST> = pairs.iter().map(|(g, _)| w(g)).collect();
    let imgs: Vec<Mat2Z> = pairs.iter().map(|(_, i)| w(i).to_matrix()).collect();
    ModularEmbeddingData::from_generators(&gens, &imgs, DEFAULT_MAX_COSETS).unwrap()
}

fn rho_l22() -> ModularEmbeddingData {
    embedding(&[("T^2", "T"), ("S", "S^-1")])
}

fn rho_qmod9() -> ModularEmbeddingData {
    embedding(&[("T^2", "T^-1 S"), ("S", "S^-1")])
}

fn row_at<'a>(r: &'a LyapunovReport, point: &str) -> &'a CuspRow {
    r.cusp_table
        .iter()
        .find(|c| c.cusp.point.to_string() == point)
        .unwrap()
}

#[test]
fn identity_embedding_has_exponent_one() {
    for g in [
        ModularSubgroup::full(),
        coset_enumerate(&[w("S"), w("T^2")], 100).unwrap(),
    ] {
        let r = lyapunov_exponent(&ModularEmbeddingData::inclusion(g), DEFAULT_MAX_COSETS).unwrap();
        assert_eq!(r.lambda, q(1, 1));
        assert_eq!(r.degree, Some(1));
    }
}

#[test]
fn finite_images_give_zero() {
    let theta = [("T^2", "1"), ("S", "1")];
    let r = lyapunov_exponent(&embedding(&theta), DEFAULT_MAX_COSETS).unwrap();
    assert!(matches!(r.image, ImageGroup::Finite { order: 1 }));
    assert_eq!(r.lambda, q(0, 1));
    // S ↦ S, T² ↦ 1: image of order 2
    let r = lyapunov_exponent(&embedding(&[("T^2", "1"), ("S", "S")]), DEFAULT_MAX_COSETS).unwrap();
    assert!(matches!(r.image, ImageGroup::Finite { order: 2 }));
    assert_eq!(r.lambda, q(0, 1));
    // the full group onto the order-3 subgroup generated by ST
    let r = lyapunov_exponent(&embedding(&[("S", "1"), ("T", "S T")]), DEFAULT_MAX_COSETS).unwrap();
    assert!(matches!(r.image, ImageGroup::Finite { order: 3 }));
}

#[test]
fn image_subgroups() {
    let ImageGroup::Lattice(g) = image_subgroup(&rho_qmod9(), DEFAULT_MAX_COSETS).unwrap() else {
        panic!()
    };
    assert_eq!(g.index(), 1);
    let ImageGroup::Lattice(g) =
        image_subgroup(&embedding(&[("S", "S"), ("T", "T")]), 100).unwrap()
    else {
        panic!()
    };
    assert_eq!(g.index(), 1);
    // ⟨T³⟩ alone is not a lattice
    let e = image_subgroup(&embedding(&[("T^2", "T^3"), ("S", "1")]), 500).unwrap_err();
    assert!(matches!(e, Error::ThinOrUnbounded { .. }));
}

#[test]
fn l22_embedding_derivation() {
    let r = lyapunov_exponent(&rho_l22(), DEFAULT_MAX_COSETS).unwrap();
    assert_eq!(r.lambda, q(1, 3));
    assert_eq!(r.degree, Some(1));
    assert_eq!(r.vol_ratio, Some(q(1, 3)));
    let inf = row_at(&r, "oo");
    assert_eq!(
        inf.contribution,
        Contribution::Parabolic {
            image_cusp: 0,
            k: 1
        }
    );
    assert!(inf.image.proj_eq(&Mat2Z::t()));
    let one = row_at(&r, "1");
    assert_eq!(one.contribution, Contribution::NoContribution);
    assert_eq!(one.image_type, ElementType::Elliptic { order: 3 });
}

#[test]
fn qmod9_embedding_derivation() {
    let r = lyapunov_exponent(&rho_qmod9(), DEFAULT_MAX_COSETS).unwrap();
    assert_eq!(r.lambda, q(1, 3));
    assert_eq!(r.degree, Some(1));
    let inf = row_at(&r, "oo");
    assert_eq!(inf.contribution, Contribution::NoContribution);
    assert!(inf.image_type.is_elliptic());
    let one = row_at(&r, "1");
    assert_eq!(
        one.contribution,
        Contribution::Parabolic {
            image_cusp: 0,
            k: 1
        }
    );
    assert!(one.image.proj_eq(&Mat2Z::t().inverse()) || one.image_type.is_parabolic());
}

#[test]
fn degree_inconsistency_is_detected() {
    let d = embedding(&[
        ("T^3", "T"),
        ("S T^3 S^-1", "T^-2"),
        ("T S T^3 S^-1 T^-1", "S T^-2 S^-1"),
    ]);
    assert_eq!(d.domain().index(), 12);
    assert_eq!(
        lyapunov_exponent(&d, DEFAULT_MAX_COSETS).unwrap_err(),
        Error::DegreeInconsistency(vec![3, 1])
    );
}

#[test]
fn hyperbolic_and_uncovered_images_are_rejected() {
    let d = embedding(&[("T^2", "T S T^-1 S^-1"), ("S", "S")]);
    assert!(matches!(
        lyapunov_exponent(&d, DEFAULT_MAX_COSETS),
        Err(Error::HyperbolicImage(_))
    ));
    let d = embedding(&[
        ("T^3", "T^2"),
        ("S T^3 S^-1", "T^-2"),
        ("T S T^3 S^-1 T^-1", "S T^2 S^-1"),
    ]);
    assert!(matches!(
        lyapunov_exponent(&d, DEFAULT_MAX_COSETS),
        Err(Error::UncoveredImageCusp(_))
    ));
}

#[test]
fn non_homomorphisms_are_rejected() {
    let gens = [w("S")];
    assert!(ModularEmbeddingData::from_generators(&gens, &[Mat2Z::t()], 100).is_err());
    let theta = coset_enumerate(&[w("S"), w("T^2")], 100).unwrap();
    let n = theta.schreier_gens().len();
    assert!(ModularEmbeddingData::new(theta.clone(), vec![Mat2Z::t(); n]).is_err());
    assert!(ModularEmbeddingData::new(theta, vec![Mat2Z::t(); n + 1]).is_err());
}

#[test]
fn restriction_preserves_exponent() {
    let d = rho_l22();
    // T⁴ and the conjugates of S: index 2 in the theta group
    let sub = stabilizer_of_action(
        &[w("S"), w("T^2")],
        &[
            origami_core::exact::Permutation::identity(2),
            origami_core::exact::Permutation::new(vec![1, 0]).unwrap(),
        ],
        DEFAULT_MAX_COSETS,
    )
    .unwrap();
    assert_eq!(sub.index(), 6);
    let (a, b) = finite_index_invariance_check(&d, &sub, DEFAULT_MAX_COSETS).unwrap();
    assert_eq!(a.lambda, b.lambda);
    assert_eq!(b.lambda, q(1, 3));
    let (a, b) = finite_index_invariance_check(&d, d.domain(), DEFAULT_MAX_COSETS).unwrap();
    assert_eq!((a.lambda, a.degree), (b.lambda, b.degree));
    let theta = d.domain().clone();
    let incl = ModularEmbeddingData::inclusion(ModularSubgroup::full());
    let (_, r) = finite_index_invariance_check(&incl, &theta, DEFAULT_MAX_COSETS).unwrap();
    assert_eq!(r.lambda, q(1, 1));
}

#[test]
fn embedding_json_round_trip() {
    let d = rho_qmod9();
    let text = serde_json::to_string(&d.to_json()).unwrap();
    let back = ModularEmbeddingData::parse(&text, DEFAULT_MAX_COSETS).unwrap();
    assert_eq!(back.domain(), d.domain());
    for (x, y) in back.images().iter().zip(d.images()) {
        assert!(x.proj_eq(y));
    }
    let lit = r#"{"generators":[{"word":"T^2","matrix":[[1,1],[0,1]]},{"word":"S","image":[["0","1"],["-1","0"]]}]}"#;
    let r = lyapunov_exponent(&ModularEmbeddingData::parse(lit, 100).unwrap(), 100).unwrap();
    assert_eq!(r.lambda, q(1, 3));
    assert!(ModularEmbeddingData::parse("{", 100).is_err());
}
