use num_bigint::BigInt;
use origami_core::modular::*;
use origami_core::Error;

fn w(s: &str) -> WordST {
    WordST::parse(s).unwrap()
}

fn theta() -> ModularSubgroup {
    coset_enumerate(&[w("S"), w("T^2")], DEFAULT_MAX_COSETS).unwrap()
}

fn gamma2() -> ModularSubgroup {
    coset_enumerate(&[w("T^2"), w("S T^-2 S^-1")], DEFAULT_MAX_COSETS).unwrap()
}

fn sorted_widths(g: &ModularSubgroup) -> Vec<usize> {
    let mut v: Vec<usize> = g.cusps().iter().map(|c| c.width).collect();
    v.sort_unstable();
    v
}

#[test]
fn word_matrix_constants() {
    assert_eq!(w("T").to_matrix(), Mat2Z::from_i64(1, 1, 0, 1));
    assert_eq!(w("1").to_matrix(), Mat2Z::identity());
    assert_eq!(w("SS").to_matrix(), Mat2Z::minus_identity());
    assert_eq!(matrix_to_word(&Mat2Z::minus_identity()), w("S S"));
    assert!(matrix_to_word(&Mat2Z::identity()).is_empty());
    let m = Mat2Z::from_i64(2, -1, 1, 0);
    assert_eq!(matrix_to_word(&m).to_matrix(), m);
}

#[test]
fn word_parsing_forms() {
    assert_eq!(w("TTS"), w("T^2 S"));
    assert_eq!(w("S^-1").to_matrix(), Mat2Z::s().inverse());
    assert_eq!(w("T^2 S T^-1").to_string(), "T^2 S T^-1");
    assert!(WordST::parse("TX").is_err());
}

#[test]
fn full_group_has_index_one() {
    let g = coset_enumerate(&[w("S"), w("T")], 100).unwrap();
    assert_eq!(g.index(), 1);
    let c = g.cusps();
    assert_eq!(c.len(), 1);
    assert_eq!(c[0].width, 1);
    assert_eq!(c[0].parabolic, Mat2Z::t());
}

#[test]
fn theta_group_index_and_cusps() {
    let g = theta();
    assert_eq!(g.index(), 3);
    assert_eq!(sorted_widths(&g), vec![1, 2]);
    let cusps = g.cusps();
    let one = cusps.iter().position(|c| c.width == 1).unwrap();
    // 1 = TS·∞ lies in the width-one class, whose stabilizer contains T²S
    let p = w("T^2 S").to_matrix();
    assert!(g.contains(&p));
    assert_eq!(g.cusp_index_of(&w("T S").to_matrix()), one);
    assert_ne!(g.cusp_index_of(&Mat2Z::identity()), one);
    assert!(classify(&cusps[one].parabolic).is_parabolic());
    let (_, m) = translation_exponent(&p).unwrap();
    assert_eq!(m.magnitude().to_string(), "1");
}

#[test]
fn gamma2_index_and_cusps() {
    let g = gamma2();
    assert_eq!(g.index(), 6);
    assert_eq!(sorted_widths(&g), vec![2, 2, 2]);
}

#[test]
fn membership() {
    let g = theta();
    assert!(g.contains(&Mat2Z::s()));
    assert!(!g.contains(&Mat2Z::t()));
    assert!(g.contains(&Mat2Z::identity()));
    assert!(g.contains(&Mat2Z::minus_identity()));
}

#[test]
fn rewriting_reproduces_members() {
    let g = theta();
    for sg in g.schreier_gens() {
        let (syl, sign) = g.rewrite_in_schreier(&sg.matrix).unwrap();
        assert_eq!(syl.len(), 1);
        assert_eq!(sign, 1);
    }
    let m = w("T^2 S").to_matrix();
    let (syl, sign) = g.rewrite_in_schreier(&m).unwrap();
    let prod = g.evaluate(&syl, |i| g.schreier_gens()[i].matrix.clone());
    assert!(prod.proj_eq(&m));
    assert_eq!(if sign > 0 { prod } else { prod.neg() }, m);
    for c in g.cusps() {
        let (syl, _) = g.rewrite_in_schreier(&c.parabolic).unwrap();
        assert!(g
            .evaluate(&syl, |i| g.schreier_gens()[i].matrix.clone())
            .proj_eq(&c.parabolic));
    }
    assert_eq!(g.rewrite_in_schreier(&Mat2Z::t()), Err(Error::NotAMember));
}

#[test]
fn classification() {
    assert_eq!(
        classify(&w("T^2 S").to_matrix()),
        ElementType::Parabolic {
            fixed_point: Cusp::from_pair(BigInt::from(1), BigInt::from(1))
        }
    );
    assert_eq!(
        classify(&w("T S^-1").to_matrix()),
        ElementType::Elliptic { order: 3 }
    );
    assert_eq!(classify(&Mat2Z::s()), ElementType::Elliptic { order: 2 });
    assert_eq!(classify(&Mat2Z::minus_identity()), ElementType::Center);
    assert_eq!(
        classify(&Mat2Z::from_i64(2, 1, 1, 1)),
        ElementType::Hyperbolic
    );
}

#[test]
fn translation_exponents() {
    let (g, m) = translation_exponent(&Mat2Z::t_pow(3)).unwrap();
    assert!(g.is_identity());
    assert_eq!(m, BigInt::from(3));
    let (_, m) = translation_exponent(&Mat2Z::t_pow(5).neg()).unwrap();
    assert_eq!(m, BigInt::from(5));
    let p = w("T^2 S").to_matrix();
    let (g, m) = translation_exponent(&p).unwrap();
    assert_eq!(
        g.act(&Cusp::infinity()),
        Cusp::from_pair(BigInt::from(1), BigInt::from(1))
    );
    assert_eq!(m, BigInt::from(-1));
    let conj = g.inverse().mul(&p).mul(&g);
    assert!(conj.proj_eq(&Mat2Z::t_pow(-1)));
    assert_eq!(translation_exponent(&Mat2Z::s()), Err(Error::NotParabolic));
}

#[test]
fn intersections() {
    let full = coset_enumerate(&[w("S"), w("T")], 100).unwrap();
    let th = theta();
    assert_eq!(th.intersect(&full).unwrap(), th);
    assert_eq!(th.intersect(&th).unwrap(), th);
    let i = th.intersect(&gamma2()).unwrap();
    assert_eq!(18 % i.index(), 0);
    assert_eq!(i.index(), 6);
    assert!(i.is_subgroup_of(&th));
}

#[test]
fn overflow_is_reported() {
    // ⟨T⟩ has infinite index
    assert!(matches!(
        coset_enumerate(&[w("T")], 200),
        Err(Error::EnumerationOverflow { .. })
    ));
}

#[test]
fn labeled_enumeration_transports_images() {
    // Γ_Θ → PSL₂(ℤ), T² ↦ T, S ↦ S⁻¹
    let (g, imgs) = coset_enumerate_with_images(
        &[w("T^2"), w("S")],
        &[Mat2Z::t(), Mat2Z::s().inverse()],
        1000,
    )
    .unwrap();
    assert_eq!(g.index(), 3);
    assert_eq!(imgs.len(), g.schreier_gens().len());
    for r in g.schreier_relators() {
        assert!(g
            .evaluate(&r, |i| imgs[i].clone())
            .proj_eq(&Mat2Z::identity()));
    }
    let rho = |m: &Mat2Z| {
        let (syl, _) = g.rewrite_in_schreier(m).unwrap();
        g.evaluate(&syl, |i| imgs[i].clone())
    };
    assert!(rho(&Mat2Z::t_pow(2)).proj_eq(&Mat2Z::t()));
    assert!(rho(&Mat2Z::s()).proj_eq(&Mat2Z::s().inverse()));
    // T²S ↦ T S⁻¹, elliptic of order 3
    assert_eq!(
        classify(&rho(&w("T^2 S").to_matrix())),
        ElementType::Elliptic { order: 3 }
    );
}

#[test]
fn labeled_enumeration_rejects_non_homomorphisms() {
    // S must go to an involution
    let r = coset_enumerate_with_images(&[w("S"), w("T")], &[Mat2Z::t(), Mat2Z::t()], 100);
    assert!(matches!(r, Err(Error::RelatorViolation(_))));
}

#[test]
fn subgroup_json_shape() {
    let j = serde_json::to_value(theta().to_json()).unwrap();
    assert_eq!(j["index"], 3);
    assert!(j["sigma_S"].is_array() && j["sigma_T"].is_array());
    assert_eq!(j["cusps"].as_array().unwrap().len(), 2);
}
