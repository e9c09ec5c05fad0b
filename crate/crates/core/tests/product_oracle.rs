mod common;

use common::oracle::ProductOracle;
use common::{sl2_session, states};
use toroidal_core::index::box_points;
use toroidal_core::{StateVector, TorIndex};

#[test]
fn generator_products_match_residue_oracle() {
    let s = sl2_session(1, 1);
    let eng = s.engine();
    let ws = states(&s, &["vac", "f", "e(-1,1)*vac", "h(-1,0)*e"]);
    let tbox = [(-2, 2)];
    for a in 0..3 {
        for b in 0..3 {
            let (fa, fb) = (eng.generator(a), eng.generator(b));
            let am = |n0: i64, n: &TorIndex, w: &StateVector| eng.mode(&fa, n0, n, w).unwrap();
            let bm = |n0: i64, n: &TorIndex, w: &StateVector| eng.mode(&fb, n0, n, w).unwrap();
            for w in &ws {
                let oracle = ProductOracle::new(&am, &bm, w, 1, 9, &tbox);
                for m0 in -2..=2 {
                    for m in box_points(&[(-1, 1)]) {
                        let series = oracle.product(m0, &m);
                        let p = eng.product(&fa, m0, m.clone(), &fb);
                        for k0 in -2..=2 {
                            for k in box_points(&[(-1, 1)]) {
                                let lhs = eng.mode(&p, k0, &k, w).unwrap();
                                assert_eq!(lhs, oracle.mode(&series, k0, &k), "a={a} b={b} m0={m0} m={m} k0={k0} k={k}");
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn oracle_is_stable_under_wider_truncation() {
    let s = sl2_session(1, 2);
    let eng = s.engine();
    let w = s.parse_state("f(-2,1)*e").unwrap();
    let (fa, fb) = (eng.generator(0), eng.generator(1));
    let am = |n0: i64, n: &TorIndex, w: &StateVector| eng.mode(&fa, n0, n, w).unwrap();
    let bm = |n0: i64, n: &TorIndex, w: &StateVector| eng.mode(&fb, n0, n, w).unwrap();
    let narrow = ProductOracle::new(&am, &bm, &w, 1, 9, &[(-2, 2)]);
    let wide = ProductOracle::new(&am, &bm, &w, 1, 11, &[(-3, 3)]);
    for m0 in [-3, -1, 0, 2] {
        let m = TorIndex::from_slice(&[1]);
        let (sn, sw) = (narrow.product(m0, &m), wide.product(m0, &m));
        for k0 in -2..=2 {
            for k in box_points(&[(-1, 1)]) {
                assert_eq!(narrow.mode(&sn, k0, &k), wide.mode(&sw, k0, &k));
            }
        }
    }
}
