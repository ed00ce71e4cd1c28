//! End-to-end acceptance checks. Runs without the libtest harness so that every
//! criterion prints one PASS/FAIL line in a plain `cargo test` run.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use origami_core::analysis::{analyze, Analysis, Limits, Origin, Piece};
use origami_core::commensurability::{compare, Verdict};
use origami_core::exact::{simultaneous_conjugacy, MatZ, Permutation};
use origami_core::lyapunov::{
    finite_index_invariance_check, lyapunov_exponent, ImageGroup, ModularEmbeddingData,
};
use origami_core::modular::{
    classify, coset_enumerate, stabilizer_of_action, ElementType, Mat2Z, ModularSubgroup, StLetter,
    WordST, DEFAULT_MAX_COSETS,
};
use origami_core::monodromy::homology_rep;
use origami_core::rational::{rationals_up_to, sweep, Construction};
use origami_core::splitting::{restrict_to_rank2, tautological_subspace};
use origami_core::veech::veech_group;
use origami_core::{Error, Exec, Origami};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn w(s: &str) -> WordST {
    WordST::parse(s).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
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

fn timed<T>(limit: Duration, f: impl FnOnce() -> T) -> Result<(T, Duration), String> {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    ensure!(took < limit, "took {took:?}, limit {limit:?}");
    Ok((out, took))
}

fn run_analysis(o: &Origami) -> Result<Analysis, String> {
    analyze(o, Limits::default(), Exec::default()).map_err(|e| e.to_string())
}

fn t2_image(p: &Piece) -> Option<&Mat2Z> {
    let r2 = p.rank2.as_ref()?;
    let t2 = Mat2Z::t_pow(2).projective_key();
    let i = r2
        .domain
        .schreier_gens()
        .iter()
        .position(|g| g.matrix.projective_key() == t2)?;
    Some(&r2.images[i])
}

fn sorted_widths(g: &ModularSubgroup) -> Vec<usize> {
    let mut v: Vec<usize> = g.cusps().iter().map(|c| c.width).collect();
    v.sort_unstable();
    v
}

fn criterion_1() -> Check {
    let (a, took) = timed(Duration::from_secs(1), || run_analysis(&Origami::l22()))?;
    let a = a?;
    ensure!(
        a.stratum.kappa == vec![2] && a.stratum.genus == 2,
        "stratum {}",
        a.stratum
    );
    ensure!(a.veech.index() == 3, "Veech index {}", a.veech.index());
    ensure!(
        sorted_widths(&a.veech.subgroup) == vec![1, 2],
        "widths {:?}",
        sorted_widths(&a.veech.subgroup)
    );
    let origins: Vec<&Origin> = a.pieces.iter().map(|p| &p.origin).collect();
    ensure!(
        origins == [&Origin::Tautological, &Origin::Complement],
        "pieces {origins:?}"
    );
    ensure!(a.is_complete(), "pieces do not span H_1");
    let comp = &a.pieces[1];
    let r2 = comp.rank2.as_ref().ok_or("complement is not a plane")?;
    let (mut seen_t2, mut seen_s) = (false, false);
    let t2 = Mat2Z::t_pow(2).projective_key();
    for (g, m) in r2.domain.schreier_gens().iter().zip(&r2.images) {
        if g.matrix.projective_key() == t2 {
            ensure!(
                m.trace() == BigInt::from(2) || m.trace() == BigInt::from(-2),
                "T^2 image trace {}",
                m.trace()
            );
            ensure!(!m.is_central(), "T^2 image is central");
            seen_t2 = true;
        }
        if classify(&g.matrix) == (ElementType::Elliptic { order: 2 }) {
            ensure!(m.trace() == BigInt::from(0), "S image trace {}", m.trace());
            seen_s = true;
        }
    }
    ensure!(
        seen_t2 && seen_s,
        "missing T^2 or S generator in the domain"
    );
    let rep = comp.report.as_ref().ok_or("no exponent")?;
    ensure!(rep.lambda == q(1, 3), "lambda {}", rep.lambda);
    ensure!(rep.degree == Some(1), "degree {:?}", rep.degree);
    ensure!(
        rep.vol_ratio == Some(q(1, 3)),
        "vol ratio {:?}",
        rep.vol_ratio
    );
    Ok(format!(
        "H(2), index 3, widths {{1,2}}, lambda 1/3 = 1/3 * 1 ({took:.2?})"
    ))
}

fn criterion_2() -> Check {
    let o = Origami::qmod9();
    let (a, took) = timed(Duration::from_secs(10), || run_analysis(&o))?;
    let a = a?;
    ensure!(
        a.stratum.kappa == vec![2, 2, 2] && a.stratum.genus == 4,
        "stratum {}",
        a.stratum
    );
    ensure!(a.veech.index() == 3, "Veech index {}", a.veech.index());
    let quotients = o
        .quotient_covers()
        .into_iter()
        .filter(|x| x.origami.degree() == 3 && x.origami.stratum().genus == 2)
        .count();
    ensure!(quotients >= 2, "{quotients} genus-2 quotients of degree 3");
    let pullbacks: Vec<&Piece> = a
        .pieces
        .iter()
        .filter(|p| matches!(p.origin, Origin::Pullback { .. }))
        .collect();
    ensure!(pullbacks.len() == 2, "{} pullback planes", pullbacks.len());
    ensure!(
        pullbacks[0].subspace != pullbacks[1].subspace,
        "pullback planes coincide"
    );
    for p in &pullbacks {
        ensure!(
            p.lambda() == Some(&q(1, 3)),
            "pullback lambda {:?}",
            p.lambda()
        );
    }
    let comp = a
        .pieces
        .iter()
        .find(|p| p.origin == Origin::Complement)
        .ok_or("no complement")?;
    let t = t2_image(comp)
        .ok_or("no T^2 image on the complement")?
        .trace();
    ensure!(
        t == BigInt::from(1) || t == BigInt::from(-1),
        "complement T^2 trace {t}"
    );
    ensure!(
        comp.lambda() == Some(&q(1, 3)),
        "complement lambda {:?}",
        comp.lambda()
    );
    let spectrum = a.spectrum();
    ensure!(
        spectrum == vec![q(1, 1), q(1, 3), q(1, 3), q(1, 3)],
        "spectrum {spectrum:?}"
    );
    Ok(format!(
        "H(2,2,2), {quotients} genus-2 quotients, spectrum {{1, 1/3, 1/3, 1/3}} ({took:.2?})"
    ))
}

fn criterion_3() -> Check {
    for g in [
        ModularSubgroup::full(),
        coset_enumerate(&[w("S"), w("T^2")], 100).unwrap(),
    ] {
        let r = lyapunov_exponent(&ModularEmbeddingData::inclusion(g), DEFAULT_MAX_COSETS)
            .map_err(|e| e.to_string())?;
        ensure!(r.lambda == q(1, 1), "identity embedding gives {}", r.lambda);
    }
    let finite = [
        (vec![("T^2", "1"), ("S", "1")], 1),
        (vec![("T^2", "1"), ("S", "S")], 2),
        (vec![("S", "1"), ("T", "S T")], 3),
    ];
    for (pairs, order) in finite {
        let r =
            lyapunov_exponent(&embedding(&pairs), DEFAULT_MAX_COSETS).map_err(|e| e.to_string())?;
        ensure!(
            matches!(r.image, ImageGroup::Finite { order: o } if o == order),
            "image {:?}",
            r.image
        );
        ensure!(
            r.lambda == q(0, 1),
            "finite image of order {order} gives {}",
            r.lambda
        );
    }
    let corrupted = embedding(&[
        ("T^3", "T"),
        ("S T^3 S^-1", "T^-2"),
        ("T S T^3 S^-1 T^-1", "S T^-2 S^-1"),
    ]);
    let e = lyapunov_exponent(&corrupted, DEFAULT_MAX_COSETS);
    ensure!(
        matches!(e, Err(Error::DegreeInconsistency(_))),
        "library returned {e:?}"
    );
    let out = Command::new(env!("CARGO_BIN_EXE_origami"))
        .arg("lyapunov")
        .arg(fixture("corrupted_degree.json"))
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(
        out.status.code() == Some(4),
        "corrupted fixture exited with {:?}",
        out.status.code()
    );
    Ok("identity -> 1, finite images of order 1, 2, 3 -> 0, corrupted fixture exits 4".into())
}

/// A random transitive action of `⟨S, T²⟩` on at most four points: an involution for `S`
/// and an arbitrary permutation for `T²`.
fn random_restriction(rng: &mut ChaCha8Rng) -> ModularSubgroup {
    let gens = [w("S"), w("T^2")];
    loop {
        let n = rng.gen_range(1..=4);
        let mut pts: Vec<usize> = (0..n).collect();
        pts.shuffle(rng);
        let mut s: Vec<usize> = (0..n).collect();
        for pair in pts.chunks(2) {
            if pair.len() == 2 && rng.gen_bool(0.7) {
                s.swap(pair[0], pair[1]);
            }
        }
        let mut t: Vec<usize> = (0..n).collect();
        t.shuffle(rng);
        let perms = [Permutation::new(s).unwrap(), Permutation::new(t).unwrap()];
        if let Ok(g) = stabilizer_of_action(&gens, &perms, DEFAULT_MAX_COSETS) {
            return g;
        }
    }
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let goldens = [("L22", rho_l22()), ("Qmod9", rho_qmod9())];
    let (res, took) = timed(
        Duration::from_secs(30),
        || -> Result<(usize, Vec<usize>), String> {
            let mut count = 0;
            let mut indices = Vec::new();
            for _ in 0..12 {
                let sub = random_restriction(&mut rng);
                ensure!(sub.index() <= 12, "restriction of index {}", sub.index());
                indices.push(sub.index());
                for (name, d) in &goldens {
                    let (full, restricted) =
                        finite_index_invariance_check(d, &sub, DEFAULT_MAX_COSETS)
                            .map_err(|e| e.to_string())?;
                    ensure!(
                        full.lambda == restricted.lambda,
                        "{name} on index {}: {} vs {}",
                        sub.index(),
                        full.lambda,
                        restricted.lambda
                    );
                    count += 1;
                }
            }
            Ok((count, indices))
        },
    )?;
    let (count, mut indices) = res?;
    indices.sort_unstable();
    indices.dedup();
    Ok(format!(
        "{count} restrictions, indices {indices:?}, lambda unchanged ({took:.2?})"
    ))
}

fn criterion_5() -> Check {
    let (res, took) = timed(Duration::from_secs(5), || sweep(20, Exec::default()))?;
    let res = res.map_err(|e| e.to_string())?;
    ensure!(
        res.len() == rationals_up_to(20).len(),
        "sweep produced {} results",
        res.len()
    );
    let mut coverings = 0;
    for (lambda, c) in &res {
        ensure!(&c.lambda() == lambda, "{lambda} realized as {}", c.lambda());
        if let Construction::Covering {
            certificate: cert, ..
        } = c
        {
            let (g, s) = (cert.genus as i64, cert.cusps as i64);
            ensure!(
                -cert.euler_characteristic == 2 * g - 2 + s,
                "Riemann-Hurwitz fails for {lambda}"
            );
            ensure!(
                cert.lambda == q(cert_d(c), -cert.euler_characteristic),
                "lambda != d / -chi for {lambda}"
            );
            coverings += 1;
        }
    }
    ensure!(
        coverings + 1 == res.len(),
        "expected only 0 as a constant family"
    );
    Ok(format!(
        "{coverings} rationals with q <= 20 certified ({took:.2?})"
    ))
}

fn cert_d(c: &Construction) -> i64 {
    match c {
        Construction::Covering { spec, .. } => spec.params.d as i64,
        Construction::ConstantFamily => 0,
    }
}

fn criterion_6() -> Check {
    let r = compare(&rho_l22(), &rho_qmod9(), DEFAULT_MAX_COSETS).map_err(|e| e.to_string())?;
    ensure!(
        r.commensurable == Verdict::No,
        "commensurable: {:?}",
        r.commensurable
    );
    let wit = r.witness.as_ref().ok_or("no witness")?;
    let kinds = [
        wit.type1.split('@').next().unwrap_or(""),
        wit.type2.split('@').next().unwrap_or(""),
    ];
    ensure!(
        kinds.contains(&"parabolic") && kinds.iter().any(|k| k.starts_with("elliptic")),
        "witness types {} vs {}",
        wit.type1,
        wit.type2
    );
    ensure!(
        r.weakly_commensurable == Verdict::Undecided,
        "weak verdict {:?}",
        r.weakly_commensurable
    );
    ensure!(
        r.invariants.iter().all(|i| i.lambda == "1/3"),
        "exponents {:?}",
        r.invariants
    );
    Ok(format!(
        "No, witness {}: {} vs {}; weakly undecided",
        wit.word, wit.type1, wit.type2
    ))
}

fn random_origami(rng: &mut ChaCha8Rng, d: usize) -> Origami {
    loop {
        let mut r: Vec<usize> = (0..d).collect();
        let mut u: Vec<usize> = (0..d).collect();
        r.shuffle(rng);
        u.shuffle(rng);
        if let Ok(o) = Origami::new(Permutation::new(r).unwrap(), Permutation::new(u).unwrap()) {
            return o;
        }
    }
}

fn all_perms(d: usize) -> Vec<Permutation> {
    let mut out = vec![Vec::new()];
    for k in 0..d {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..=k).map(move |i| {
                    let mut q = p.clone();
                    q.insert(i, k);
                    q
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|p| Permutation::new(p).unwrap())
        .collect()
}

fn check_table(g: &ModularSubgroup) -> Result<(), String> {
    let (s, t) = (g.sigma_s(), g.sigma_t());
    ensure!(
        s.compose(s).unwrap().is_identity(),
        "sigma_S is not an involution"
    );
    ensure!(
        s.compose(t).unwrap().pow(3).is_identity(),
        "(sigma_S sigma_T)^3 is not trivial"
    );
    ensure!(
        g.cusps().iter().map(|c| c.width).sum::<usize>() == g.index(),
        "widths do not sum to the index"
    );
    let images: Vec<Mat2Z> = g.schreier_gens().iter().map(|x| x.matrix.clone()).collect();
    for rel in g.schreier_relators() {
        ensure!(
            g.evaluate(&rel, |i| images[i].clone()).is_central(),
            "relator is not central"
        );
    }
    Ok(())
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut samples: Vec<Origami> = vec![Origami::torus(), Origami::l22(), Origami::qmod9()];
    samples.extend((0..12).map(|i| random_origami(&mut rng, 2 + i % 5)));
    let mut matrices = 0;
    for o in &samples {
        let v = veech_group(o, 10_000).map_err(|e| e.to_string())?;
        check_table(&v.subgroup)?;
        let rep = homology_rep(&v, Exec::default()).map_err(|e| e.to_string())?;
        ensure!(
            rep.radical_dim + 1 == o.stratum().punctures,
            "radical {} for {} punctures",
            rep.radical_dim,
            o.stratum().punctures
        );
        for g in &rep.generators {
            let j = MatZ::standard_j(g.matrix.rows());
            ensure!(
                g.matrix.transpose().mul(&j).mul(&g.matrix) == j,
                "{} is not symplectic",
                g.word
            );
            matrices += 1;
        }
    }
    for gens in [
        vec![w("T^2"), w("S T^2 S^-1")],
        vec![w("T^2"), w("S")],
        vec![w("T^3"), w("S T^3 S^-1"), w("T S T^3 S^-1 T^-1")],
    ] {
        check_table(&coset_enumerate(&gens, 10_000).map_err(|e| e.to_string())?)?;
    }
    let mut conj = 0;
    for _ in 0..40 {
        let d = rng.gen_range(1..=6);
        let perms = all_perms(d);
        let a = random_origami(&mut rng, d);
        let b = if rng.gen_bool(0.5) {
            let tau = perms.choose(&mut rng).unwrap();
            Origami::new(a.r().conjugate_by(tau), a.u().conjugate_by(tau)).unwrap()
        } else {
            random_origami(&mut rng, d)
        };
        let brute = perms
            .iter()
            .any(|t| a.r().conjugate_by(t) == *b.r() && a.u().conjugate_by(t) == *b.u());
        ensure!(
            simultaneous_conjugacy(a.r(), a.u(), b.r(), b.u()).is_some() == brute,
            "conjugacy disagrees"
        );
        conj += 1;
    }
    let letters = [
        StLetter::S,
        StLetter::T,
        StLetter::S.inverse(),
        StLetter::T.inverse(),
    ];
    for _ in 0..200 {
        let len = rng.gen_range(0..20);
        let word = WordST::from_letters((0..len).map(|_| letters[rng.gen_range(0..4)]));
        let m = word.to_matrix();
        ensure!(
            WordST::from_matrix(&m).to_matrix() == m,
            "round trip fails for {word}"
        );
    }
    let five = Origami::parse("r=(1,2,3)(4,5); u=(1,4)(2,5)").map_err(|e| e.to_string())?;
    for o in [Origami::l22(), five, Origami::qmod9()] {
        let v = veech_group(&o, 10_000).map_err(|e| e.to_string())?;
        let rep = homology_rep(&v, Exec::default()).map_err(|e| e.to_string())?;
        let r2 = restrict_to_rank2(&rep, &tautological_subspace(&rep), &v.subgroup)
            .map_err(|e| e.to_string())?;
        for (g, m) in v.subgroup.schreier_gens().iter().zip(&r2.images) {
            ensure!(
                m.trace() == g.matrix.trace(),
                "tautological trace differs on {}",
                g.word
            );
        }
    }
    Ok(format!(
        "{} origamis, {matrices} symplectic matrices, {conj} conjugacy checks, 200 word round trips, 3 trace identities",
        samples.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("L(2,2) end-to-end", criterion_1),
        ("Qmod9 end-to-end", criterion_2),
        ("exponent engine", criterion_3),
        ("finite-index invariance", criterion_4),
        ("rational sweep", criterion_5),
        ("commensurability", criterion_6),
        ("property suites", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
