#![allow(dead_code)]

pub mod multisets;
pub mod oracle;

use std::sync::Arc;

use toroidal_core::rational::int;
use toroidal_core::{LieAlgebra, ModeWindow, Session, SessionOptions, StateVector};

pub fn sl2_session(rank: usize, level: i64) -> Session {
    Session::new(Arc::new(LieAlgebra::sl2()), rank, int(level), SessionOptions::default())
}

pub fn states(s: &Session, exprs: &[&str]) -> Vec<StateVector> {
    exprs.iter().map(|e| s.parse_state(e).unwrap()).collect()
}

pub fn window(s: &Session, a: i64, b: i64, exprs: &[&str]) -> ModeWindow {
    ModeWindow::symmetric(s.rank(), a, b, states(s, exprs)).unwrap()
}
