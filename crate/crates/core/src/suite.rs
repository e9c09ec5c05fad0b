//! Work queue driving the axiom checks, mutation testing and report output.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::axioms::{self, Finding, JacobiOptions, Realization, Status};
use crate::exec;
use crate::lie::LieAlgebra;
use crate::pbw::StateVector;
use crate::rational;
use crate::vacuum::VacuumModule;
use crate::vertex::{Session, SessionOptions};
use crate::window::ModeWindow;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct V0Plan {
    pub depth: usize,
    pub max_degree: i64,
}

#[derive(Clone, Debug)]
pub struct SuitePlan {
    pub window: ModeWindow,
    pub jacobi: JacobiOptions,
    /// Random depth-bounded pairs checked in addition to all generator pairs.
    pub random_pairs: usize,
    pub random_depth: usize,
    pub random_max_k: i64,
    pub seed: u64,
    /// Largest `k` in the vacuum identities.
    pub vacuum_k: i64,
    pub v0: Option<V0Plan>,
    pub module: bool,
}

impl SuitePlan {
    pub fn new(window: ModeWindow) -> Self {
        SuitePlan {
            window,
            jacobi: JacobiOptions::default(),
            random_pairs: 4,
            random_depth: 2,
            random_max_k: 2,
            seed: 7,
            vacuum_k: 2,
            v0: Some(V0Plan { depth: 3, max_degree: 3 }),
            module: true,
        }
    }
}

/// A unit of the work queue. `key` identifies it across runs.
#[derive(Clone, Debug)]
pub enum Job {
    Lie,
    ProductTable,
    CurrentShift,
    Restrictedness,
    Jacobi(StateVector, StateVector),
    CommutatorFormula(StateVector, StateVector),
    Skew(StateVector, StateVector),
    Vacuum(StateVector),
    Creation(StateVector),
    V0(Vec<StateVector>),
    Module(Vec<(StateVector, StateVector)>),
}

impl Job {
    pub fn key(&self, lie: &LieAlgebra) -> String {
        let s = |v: &StateVector| v.display(lie).to_string();
        match self {
            Job::Lie => "lie".into(),
            Job::ProductTable => "product_table".into(),
            Job::CurrentShift => "current_shift".into(),
            Job::Restrictedness => "restrictedness".into(),
            Job::Jacobi(u, v) => format!("jacobi[{};{}]", s(u), s(v)),
            Job::CommutatorFormula(u, v) => format!("commutator[{};{}]", s(u), s(v)),
            Job::Skew(u, v) => format!("skew[{};{}]", s(u), s(v)),
            Job::Vacuum(u) => format!("vacuum[{}]", s(u)),
            Job::Creation(u) => format!("creation[{}]", s(u)),
            Job::V0(us) => format!("v0[{}]", us.iter().map(s).collect::<Vec<_>>().join(";")),
            Job::Module(ps) => format!("module[{}]", ps.iter().map(|(u, v)| format!("{},{}", s(u), s(v))).collect::<Vec<_>>().join(";")),
        }
    }
}

pub fn generators(s: &Session) -> Vec<StateVector> {
    (0..s.lie().dim()).map(StateVector::tail).collect()
}

/// Generator pairs followed by `plan.random_pairs` seeded random pairs.
pub fn test_pairs(s: &Session, plan: &SuitePlan) -> Vec<(StateVector, StateVector)> {
    let gens = generators(s);
    let mut pairs: Vec<_> = gens.iter().flat_map(|u| gens.iter().map(move |v| (u.clone(), v.clone()))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let pts = plan.window.tor_points();
    for _ in 0..plan.random_pairs {
        let u = axioms::random_state(&mut rng, s, plan.random_depth, plan.random_max_k, &pts);
        let v = axioms::random_state(&mut rng, s, plan.random_depth, plan.random_max_k, &pts);
        pairs.push((u, v));
    }
    pairs
}

pub fn plan_jobs(s: &Session, plan: &SuitePlan) -> Vec<Job> {
    let pairs = test_pairs(s, plan);
    let mut jobs = vec![Job::Lie, Job::ProductTable, Job::CurrentShift, Job::Restrictedness];
    for (u, v) in &pairs {
        jobs.push(Job::Jacobi(u.clone(), v.clone()));
        jobs.push(Job::CommutatorFormula(u.clone(), v.clone()));
        jobs.push(Job::Skew(u.clone(), v.clone()));
    }
    let mut singles: Vec<StateVector> = vec![StateVector::vacuum()];
    for (u, v) in &pairs {
        for x in [u, v] {
            if !singles.contains(x) {
                singles.push(x.clone());
            }
        }
    }
    for u in &singles {
        jobs.push(Job::Vacuum(u.clone()));
        jobs.push(Job::Creation(u.clone()));
    }
    if plan.v0.is_some() {
        jobs.push(Job::V0(singles.clone()));
    }
    if plan.module {
        jobs.push(Job::Module(pairs));
    }
    jobs
}

pub fn run_job(s: &Session, plan: &SuitePlan, job: &Job) -> Vec<Finding> {
    let win = &plan.window;
    let real = Realization::algebra(s);
    match job {
        Job::Lie => vec![axioms::check_lie(s.lie())],
        Job::ProductTable => vec![axioms::check_product_table(s, win, 3)],
        Job::CurrentShift => vec![axioms::check_current_shift(s, win)],
        Job::Restrictedness => vec![axioms::check_restrictedness(s, win, 3)],
        Job::Jacobi(u, v) => vec![axioms::check_jacobi(&real, u, v, win, &plan.jacobi)],
        Job::CommutatorFormula(u, v) => vec![axioms::check_commutator_formula(&real, u, v, win)],
        Job::Skew(u, v) => vec![axioms::check_skew_symmetry(&real, u, v, win), axioms::check_skew_involution(&real, u, v, win)],
        Job::Vacuum(u) => axioms::check_vacuum_identities(s, u, plan.vacuum_k, win),
        Job::Creation(u) => vec![axioms::check_creation(s, u, win)],
        Job::V0(us) => {
            let p = plan.v0.expect("v0 job without a plan");
            axioms::check_v0(s, p.depth, p.max_degree, win, us)
        }
        Job::Module(pairs) => {
            // a separate copy of V(ℓ,0) with its own caches acts as the module W
            let w = Session::new(Arc::new(s.lie().clone()), s.rank(), s.level().clone(), SessionOptions::default());
            let real = Realization { algebra: s, module: &w };
            axioms::check_module(&real, pairs, win, &plan.jacobi)
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Report {
    pub findings: Vec<Finding>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.findings.iter().all(Finding::passed)
    }

    pub fn cap_exceeded(&self) -> bool {
        self.findings.iter().any(|f| f.status == Status::CapExceeded)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| !f.passed())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.findings.iter().map(Finding::to_json).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("identity,subject,status,wall_ms,witness\n");
        for f in &self.findings {
            let status = serde_json::to_value(f.status).unwrap();
            let witness = f.witness.as_ref().map(|w| w.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                csv_field(&f.identity),
                csv_field(&f.subject),
                status.as_str().unwrap_or(""),
                f.wall_ms,
                csv_field(&witness)
            ));
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Runs every planned job on the work queue; findings come back in plan order.
pub fn run_suite(s: &Session, plan: &SuitePlan) -> Report {
    let jobs = plan_jobs(s, plan);
    Report { findings: exec::map(&jobs, |j| run_job(s, plan, j)).into_iter().flatten().collect() }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mutation {
    /// Adds `delta` to the coefficient of `b_k` in `[b_i, b_j]`.
    StructureConstant { i: usize, j: usize, k: usize, delta: String },
    /// Adds `delta` to `<b_i, b_j>`.
    Form { i: usize, j: usize, delta: String },
    /// Adds `delta` to the central term in commutators only.
    CentralShift { delta: String },
}

impl Mutation {
    pub fn describe(&self, lie: &LieAlgebra) -> String {
        match self {
            Mutation::StructureConstant { i, j, k, delta } => {
                format!("[{},{}] coefficient of {} += {}", lie.name(*i), lie.name(*j), lie.name(*k), delta)
            }
            Mutation::Form { i, j, delta } => format!("<{},{}> += {}", lie.name(*i), lie.name(*j), delta),
            Mutation::CentralShift { delta } => format!("central coefficient += {delta} in commutators"),
        }
    }

    pub fn apply(&self, s: &Session, opts: SessionOptions) -> Session {
        let lie = s.lie();
        let d = |x: &str| rational::parse(x).expect("mutation delta");
        match self {
            Mutation::StructureConstant { i, j, k, delta } => {
                let c = lie.structure_constant(*i, *j, *k) + d(delta);
                Session::new(Arc::new(lie.with_structure_constant(*i, *j, *k, c)), s.rank(), s.level().clone(), opts)
            }
            Mutation::Form { i, j, delta } => {
                let c = lie.form(*i, *j) + d(delta);
                Session::new(Arc::new(lie.with_form_entry(*i, *j, c)), s.rank(), s.level().clone(), opts)
            }
            Mutation::CentralShift { delta } => {
                let m = VacuumModule::new(Arc::new(lie.clone()), s.rank(), s.level().clone(), opts.cache_capacity).with_central_shift(d(delta));
                Session::from_module(m, opts)
            }
        }
    }
}

/// Every single-entry corruption: each structure constant, each form entry and
/// the central coefficient, all shifted by one.
pub fn all_mutations(lie: &LieAlgebra) -> Vec<Mutation> {
    let n = lie.dim();
    let one = "1".to_string();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out.push(Mutation::StructureConstant { i, j, k, delta: one.clone() });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            out.push(Mutation::Form { i, j, delta: one.clone() });
        }
    }
    out.push(Mutation::CentralShift { delta: one });
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MutationOutcome {
    pub mutation: Mutation,
    pub description: String,
    /// Whether the Lie data validation rejects the mutated algebra.
    pub lie_detected: bool,
    /// First vertex algebra level finding that failed, if any.
    pub va_finding: Option<Finding>,
}

impl MutationOutcome {
    pub fn detected(&self) -> bool {
        self.lie_detected || self.va_finding.is_some()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "mutation": self.mutation,
            "description": self.description,
            "lie_detected": self.lie_detected,
            "va_detected": self.va_finding.is_some(),
            "va_finding": self.va_finding.as_ref().map(Finding::to_json),
        })
    }
}

/// Runs the vertex algebra level checks on the mutated session until one fails.
pub fn run_mutation(s: &Session, plan: &SuitePlan, m: &Mutation) -> MutationOutcome {
    let ms = m.apply(s, SessionOptions::default());
    let lie_detected = !axioms::check_lie(ms.lie()).passed();
    let real = Realization::algebra(&ms);
    let win = &plan.window;
    let gens = generators(&ms);
    let mut va_finding = None;
    'search: for u in &gens {
        for v in &gens {
            let checks: [&dyn Fn() -> Finding; 2] = [
                &|| axioms::check_jacobi(&real, u, v, win, &plan.jacobi),
                &|| axioms::check_commutator_formula(&real, u, v, win),
            ];
            for c in checks {
                let f = c();
                if !f.passed() {
                    va_finding = Some(f);
                    break 'search;
                }
            }
        }
    }
    MutationOutcome { mutation: m.clone(), description: m.describe(s.lie()), lie_detected, va_finding }
}

pub fn run_mutations(s: &Session, plan: &SuitePlan, mutations: &[Mutation]) -> Vec<MutationOutcome> {
    exec::map(mutations, |m| run_mutation(s, plan, m))
}
