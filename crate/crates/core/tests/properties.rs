mod common;

use proptest::prelude::*;

use toroidal_core::lie::LieAlgebra;
use toroidal_core::rational::{self, int};
use toroidal_core::toroidal::{toroidal_bracket, LoopMode, ToroidalElement};
use toroidal_core::vacuum::Mode;
use toroidal_core::{StateVector, TorIndex};

fn loop_elem(rank: usize) -> impl Strategy<Value = ToroidalElement> {
    prop_oneof![
        5 => (0..3usize, -4..=4i64, prop::collection::vec(-2..=2i64, rank))
            .prop_map(|(b, m0, m)| ToroidalElement::loop_mode(LoopMode::new(b, m0, TorIndex::from(m)))),
        1 => (0..=rank).prop_map(move |i| ToroidalElement::derivation(rank, i)),
        1 => Just(ToroidalElement::central(rank)),
    ]
}

fn mode(rank: usize) -> impl Strategy<Value = Mode> {
    (0..3usize, -3..=3i64, prop::collection::vec(-2..=2i64, rank)).prop_map(|(b, n0, n)| Mode::new(b, n0, TorIndex::from(n)))
}

const STATES: [&str; 6] = ["vac", "e", "h", "f(-1,1)*vac", "e(-2,0)*f", "h(-1,-1)*e(-1,1)*vac"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn toroidal_jacobi(x in loop_elem(2), y in loop_elem(2), z in loop_elem(2)) {
        let g = LieAlgebra::sl2();
        let br = |a: &ToroidalElement, b: &ToroidalElement| toroidal_bracket(&g, a, b).unwrap();
        let sum = br(&x, &br(&y, &z)).add(&br(&y, &br(&z, &x))).add(&br(&z, &br(&x, &y)));
        prop_assert!(sum.is_zero());
        prop_assert_eq!(br(&x, &y), br(&y, &x).scale(&int(-1)));
    }

    /// The vacuum module is a representation: commutators of modes act as brackets.
    #[test]
    fn module_law(x in mode(1), y in mode(1), wi in 0..STATES.len(), level in prop_oneof![Just(0i64), Just(1), Just(-2)]) {
        let s = common::sl2_session(1, level);
        let v = s.module();
        let lie = s.lie();
        let w = s.parse_state(STATES[wi]).unwrap();
        let lhs = v.act(&x, &v.act(&y, &w)).sub(&v.act(&y, &v.act(&x, &w)));
        let mut rhs = StateVector::zero();
        let n = &x.n + &y.n;
        for (c, k) in lie.bracket_basis(x.basis, y.basis) {
            rhs.add_scaled(&v.act(&Mode::new(*c, x.n0 + y.n0, n.clone()), &w), k);
        }
        if x.n0 + y.n0 == 0 && n.is_zero() {
            rhs.add_scaled(&w, &(int(x.n0) * lie.form(x.basis, y.basis) * int(level)));
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn acted_states_stay_canonical(modes in prop::collection::vec(mode(2), 1..4)) {
        let s = common::sl2_session(2, 1);
        let out = s.module().act_word(&modes, &StateVector::vacuum());
        for (m, _) in out.terms() {
            prop_assert!(m.is_canonical());
        }
        let back = StateVector::from_json(s.lie(), 2, &out.to_json(s.lie())).unwrap();
        prop_assert_eq!(back, out);
    }

    #[test]
    fn rationals_roundtrip(p in -1000i64..1000, q in 1i64..1000) {
        let x = rational::parse(&format!("{p}/{q}")).unwrap();
        prop_assert_eq!(rational::parse(&rational::format(&x)).unwrap(), x);
    }
}
