mod common;

use common::{sl2_session, states, window};
use toroidal_core::axioms::{self, JacobiOptions, Realization, Status};

#[test]
fn generator_pairs_satisfy_jacobi() {
    let s = sl2_session(1, 1);
    let win = window(&s, 2, 1, &["vac", "e", "f(-1,0)*vac", "h(-1,1)*e"]);
    let real = Realization::algebra(&s);
    let gens = states(&s, &["e", "f", "h"]);
    for u in &gens {
        for v in &gens {
            let t = std::time::Instant::now();
            let f = axioms::check_jacobi(&real, u, v, &win, &JacobiOptions::default());
            eprintln!("{} {:?} {:?} {:?}", f.subject, f.status, f.witness, t.elapsed());
            assert!(f.passed());
        }
    }
}

#[test]
fn commutativity_order_one_fails_for_paired_generators() {
    let s = sl2_session(1, 1);
    let win = window(&s, 2, 1, &["vac", "e"]);
    let real = Realization::algebra(&s);
    let g = states(&s, &["e", "f"]);
    let f = axioms::check_weak_commutativity(&real, &g[0], &g[1], 1, &win);
    assert_eq!(f.status, Status::Fail);
    assert!(f.witness.is_some());
    assert!(axioms::check_weak_commutativity(&real, &g[0], &g[1], 2, &win).passed());
}

#[test]
fn skew_symmetry_and_involution_for_generators() {
    let s = sl2_session(1, 1);
    let win = window(&s, 2, 1, &["vac", "f", "e(-1,1)*vac"]);
    let real = Realization::algebra(&s);
    let gens = states(&s, &["e", "f", "h"]);
    for u in &gens {
        for v in &gens {
            let t = std::time::Instant::now();
            assert!(axioms::check_skew_symmetry(&real, u, v, &win).passed());
            assert!(axioms::check_skew_involution(&real, u, v, &win).passed());
            eprintln!("skew {:?}", t.elapsed());
        }
    }
}

#[test]
fn vacuum_identities_for_depth_two_state() {
    let s = sl2_session(1, 1);
    let win = window(&s, 2, 1, &["vac", "f", "e(-1,1)*vac"]);
    let u = s.parse_state("e(-1,1)*f").unwrap();
    for f in axioms::check_vacuum_identities(&s, &u, 2, &win) {
        assert!(f.passed(), "{:?}", f);
    }
    assert!(axioms::check_current_shift(&s, &win).passed());
    assert!(axioms::check_product_table(&s, &win, 3).passed());
}

#[test]
fn commutator_formula_for_depth_two_pair() {
    let s = sl2_session(1, 1);
    let win = window(&s, 2, 1, &["vac", "h"]);
    let real = Realization::algebra(&s);
    let u = s.parse_state("e(-1,1)*vac").unwrap();
    let v = s.parse_state("f(-1,0)*h").unwrap();
    let f = axioms::check_commutator_formula(&real, &u, &v, &win);
    assert!(f.passed(), "{:?}", f);
}
