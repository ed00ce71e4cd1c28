use num_bigint::BigInt;
use num_traits::Zero;
use origami_core::exact::matrix::{rank, to_q};
use origami_core::exact::{FreeWord, MatZ};
use origami_core::modular::{Mat2Z, WordST};
use origami_core::monodromy::*;
use origami_core::veech::{veech_group, DEFAULT_MAX_ORBIT};
use origami_core::{Error, Exec, Origami};

fn w(s: &str) -> WordST {
    WordST::parse(s).unwrap()
}

fn widths(o: &Origami) -> (usize, Vec<usize>) {
    let v = veech_group(o, DEFAULT_MAX_ORBIT).unwrap();
    let mut ws: Vec<usize> = v.subgroup.cusps().iter().map(|c| c.width).collect();
    ws.sort_unstable();
    (v.index(), ws)
}

#[test]
fn veech_groups_of_examples() {
    assert_eq!(widths(&Origami::torus()), (1, vec![1]));
    assert_eq!(widths(&Origami::l22()), (3, vec![1, 2]));
    assert_eq!(widths(&Origami::qmod9()), (3, vec![1, 2]));
    let v = veech_group(&Origami::l22(), DEFAULT_MAX_ORBIT).unwrap();
    assert!(v.contains(&Mat2Z::s()));
    assert!(v.contains(&Mat2Z::t_pow(2)));
    assert!(!v.contains(&Mat2Z::t()));
    for (word, _) in &v.schreier_gens {
        assert!(v.origami.act_word(word).is_equivalent(&v.origami));
    }
}

#[test]
fn tree_shapes() {
    let t = graph_and_tree(&Origami::torus());
    assert_eq!((t.tree_edges.len(), t.rank()), (0, 2));
    assert_eq!(t.h_generators(), vec![FreeWord::x(), FreeWord::y()]);
    let l = graph_and_tree(&Origami::l22());
    assert_eq!((l.tree_edges.len(), l.rank()), (2, 4));
    let q = graph_and_tree(&Origami::qmod9());
    assert_eq!((q.tree_edges.len(), q.rank()), (8, 10));
    let o = Origami::qmod9();
    for g in q.h_generators() {
        assert_eq!(g.monodromy(o.r(), o.u()).apply(0), 0);
    }
}

#[test]
fn lifts_abelianize_correctly() {
    assert_eq!(lift_to_aut(&WordST::identity()), Aut2::identity());
    assert_eq!(lift_to_aut(&w("T")).abelianization(), Mat2Z::t());
    assert_eq!(lift_to_aut(&w("S")).abelianization(), Mat2Z::s());
    assert_eq!(
        lift_to_aut(&w("S S")).abelianization(),
        Mat2Z::minus_identity()
    );
    let x = w("T^3 S^-1 T S T^-2");
    assert_eq!(lift_to_aut(&x).abelianization(), x.to_matrix());
}

#[test]
fn stabilization() {
    let l = graph_and_tree(&Origami::l22());
    assert_eq!(
        stabilize_h(&Aut2::identity(), &l).unwrap(),
        Aut2::identity()
    );
    assert!(stabilize_h(&lift_to_aut(&w("T^2")), &l).is_ok());
    assert_eq!(
        stabilize_h(&lift_to_aut(&w("T")), &l),
        Err(Error::NotInVeechGroup)
    );
    let a = stabilize_h(&lift_to_aut(&w("T^2")), &l).unwrap();
    let m = rewrite_action(&a, &l).unwrap();
    let det = origami_core::exact::matrix::inverse_z(&m);
    assert!(det.is_some());
    assert!(rewrite_action(&Aut2::identity(), &l).unwrap().is_identity());
}

fn radical_dim(f: &origami_core::exact::AlternatingForm) -> usize {
    f.dim() - rank(&to_q(f.gram()))
}

#[test]
fn intersection_gram_examples() {
    let t = graph_and_tree(&Origami::torus());
    assert_eq!(t.intersection_gram().unwrap().gram(), &MatZ::standard_j(2));
    let l = graph_and_tree(&Origami::l22());
    assert_eq!(radical_dim(&l.intersection_gram().unwrap()), 0);
    let q = graph_and_tree(&Origami::qmod9());
    assert_eq!(radical_dim(&q.intersection_gram().unwrap()), 2);
}

/// Pairing with the all-vertical chain measures horizontal holonomy.
#[test]
fn intersection_with_core_curves_is_holonomy() {
    let o = Origami::qmod9();
    let t = graph_and_tree(&o);
    let d = o.degree();
    let all_y: Vec<BigInt> = (0..2 * d).map(|i| BigInt::from(u8::from(i >= d))).collect();
    let all_x: Vec<BigInt> = (0..2 * d).map(|i| BigInt::from(u8::from(i < d))).collect();
    for g in t.h_generators() {
        let (c, _) = t.edge_counts(0, &g);
        let (hx, hy) = g.abelianize();
        assert_eq!(
            t.pair_chains(&c, &all_y, IntersectionRule::Shifted),
            BigInt::from(hx)
        );
        assert_eq!(
            t.pair_chains(&c, &all_x, IntersectionRule::Shifted),
            BigInt::from(-hy)
        );
    }
}

#[test]
fn same_square_rule_is_not_invariant() {
    // the naive rule must fail at least one of: antisymmetry, radical dimension, invariance
    let o = Origami::qmod9();
    let v = veech_group(&o, DEFAULT_MAX_ORBIT).unwrap();
    let t = graph_and_tree(&o);
    let naive = t.intersection_gram_with(IntersectionRule::SameSquare);
    let ok = match naive {
        Err(_) => false,
        Ok(f) => {
            let g = f.gram().clone();
            radical_dim(&f) == 2
                && v.schreier_gens.iter().all(|(word, _)| {
                    let a = stabilize_h(&lift_to_aut(word), &t).unwrap();
                    let m = rewrite_action(&a, &t).unwrap();
                    m.transpose().mul(&g).mul(&m) == g
                })
        }
    };
    assert!(!ok);
}

#[test]
fn shifted_rule_is_invariant_on_cycles() {
    for o in [Origami::l22(), Origami::qmod9()] {
        let v = veech_group(&o, DEFAULT_MAX_ORBIT).unwrap();
        let t = graph_and_tree(&o);
        let g = t.intersection_gram().unwrap().gram().clone();
        for (word, _) in &v.schreier_gens {
            let a = stabilize_h(&lift_to_aut(word), &t).unwrap();
            let m = rewrite_action(&a, &t).unwrap();
            assert_eq!(m.transpose().mul(&g).mul(&m), g, "{word}");
        }
    }
}

#[test]
fn homology_reps_are_symplectic() {
    for (o, g) in [
        (Origami::torus(), 1),
        (Origami::l22(), 2),
        (Origami::qmod9(), 4),
    ] {
        let v = veech_group(&o, DEFAULT_MAX_ORBIT).unwrap();
        let rep = homology_rep(&v, Exec::default()).unwrap();
        assert_eq!(rep.genus, g);
        assert_eq!(rep.generators.len(), v.schreier_gens.len());
        for gen in &rep.generators {
            assert!(is_symplectic(&gen.matrix), "{}", gen.word);
        }
    }
}

#[test]
fn torus_rep_is_the_matrix_itself() {
    let v = veech_group(&Origami::torus(), DEFAULT_MAX_ORBIT).unwrap();
    let rep = homology_rep(&v, Exec::default()).unwrap();
    let [h, vv] = rep.tautological_plane();
    assert!(!h.iter().all(Zero::is_zero) && !vv.iter().all(Zero::is_zero));
    for gen in &rep.generators {
        let m = to_mat2(&gen.matrix).unwrap();
        // same trace; the basis may differ from (x, y) by a change of coordinates
        assert_eq!(m.trace(), gen.word.to_matrix().trace());
    }
}

#[test]
fn dualize_roundtrip() {
    let m = MatZ::standard_j(4);
    assert_eq!(dualize(&dualize(&m).unwrap()).unwrap(), m);
    assert!(dualize(&MatZ::identity(4)).unwrap().is_identity());
}
