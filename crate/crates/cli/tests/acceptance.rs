//! Acceptance criteria, one PASS/FAIL line each. Bounds are pinned here and
//! do not depend on the verifier's own tolerances.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use mixed3::ambient::{make_flat_cosymplectic, make_pseudosphere, Level};
use mixed3::catalog;
use mixed3::config::Config;
use mixed3::error::Error;
use mixed3::structures::check_axioms;
use mixed3::verifier::{self, CheckReport};

const ALG: f64 = 1e-9;
const D1: f64 = 1e-6;
const D2: f64 = 5e-4;
const R_PERP_PHI_FLOOR: f64 = 0.05;
const AXIOM_BUDGET: Duration = Duration::from_secs(5);
const SUITE_BUDGET: Duration = Duration::from_secs(60);

struct Criterion {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Criterion {
    fn new() -> Self {
        Self { failures: Vec::new(), notes: Vec::new() }
    }

    fn below(&mut self, what: &str, value: f64, bound: f64) {
        if !(value < bound) {
            self.failures.push(format!("{what} = {value:.3e} not < {bound:.0e}"));
        }
    }

    fn above(&mut self, what: &str, value: f64, bound: f64) {
        if !(value > bound) {
            self.failures.push(format!("{what} = {value:.3e} not > {bound:.0e}"));
        }
    }

    fn truth(&mut self, what: &str, ok: bool) {
        if !ok {
            self.failures.push(what.to_string());
        }
    }

    fn note(&mut self, s: String) {
        self.notes.push(s);
    }
}

fn check(id: &str, cfg: &Config) -> CheckReport {
    verifier::run(&[id.to_string()], cfg).expect("known check").remove(0)
}

fn metric(r: &CheckReport, name: &str) -> f64 {
    r.metrics
        .iter()
        .find(|m| m.name == name)
        .unwrap_or_else(|| panic!("{} has no metric {name}", r.check_id))
        .value
}

/// Flags record 0 when the property holds.
fn flag(c: &mut Criterion, r: &CheckReport, name: &str) {
    c.truth(&format!("{}: {name}", r.check_id), metric(r, name) == 0.0);
}

fn c1(cfg: &Config) -> Criterion {
    let mut c = Criterion::new();
    let sphere = make_pseudosphere(1, Level::Positive).unwrap();
    let cosym = make_flat_cosymplectic(1, 1).unwrap();
    let start = Instant::now();
    let rs = check_axioms(&sphere, 100, cfg.seed).unwrap();
    let rc = check_axioms(&cosym, 100, cfg.seed).unwrap();
    let took = start.elapsed();
    for (k, v) in rs.by_axiom().iter().enumerate() {
        c.below(&format!("S^7 axiom {}", k + 1), *v, ALG);
    }
    for (k, v) in rc.by_axiom().iter().enumerate() {
        c.below(&format!("cosym axiom {}", k + 1), *v, ALG);
    }
    c.truth(&format!("axiom sweeps took {took:?}"), took < AXIOM_BUDGET);
    c.note(format!("max {:.2e}, {} ms", rs.max().max(rc.max()), took.as_millis()));
    c
}

fn c2(cfg: &Config) -> Criterion {
    let mut c = Criterion::new();
    let s = check("C03", cfg);
    c.below("sphere (∇φ) residual", metric(&s, "sasakian_phi"), D1);
    c.below("sphere ∇ξ residual", metric(&s, "sasakian_xi"), D1);
    let f = check("C04", cfg);
    c.below("cosym ∇φ", metric(&f, "nabla_phi"), ALG);
    c.below("cosym ∇ξ", metric(&f, "nabla_xi"), ALG);
    c
}

fn c3(cfg: &Config) -> Criterion {
    let mut c = Criterion::new();
    for n in [1usize, 2] {
        let r = check("C05", &Config { n, ..cfg.clone() });
        let target = (4 * n + 2) as f64;
        let lambda = metric(&r, "lambda");
        let eps1 = metric(&r, "eps1");
        c.below(&format!("n={n} ||λ| − {target}|"), (lambda.abs() - target).abs(), D2);
        c.below(&format!("n={n} Ric − λg"), metric(&r, "ricci_minus_lambda_g"), D2);
        c.below(&format!("n={n} λ + (4n+2)ε1"), (lambda + target * eps1).abs(), D2);
        c.note(format!("n={n}: λ = {lambda:.6}, ε1 = {eps1}"));
    }
    c
}

fn c4(cfg: &Config) -> Criterion {
    let mut c = Criterion::new();
    let r = check("C06", cfg);
    for f in ["anti_invariant", "xi1_normal", "xi2_normal", "xi3_tangent", "dim_xi_t_is_1", "dim_xi_n_is_2"] {
        flag(&mut c, &r, f);
    }
    c.below("anti-invariance residual", metric(&r, "anti_invariance_residual"), ALG);
    c.below("‖ξ3 + X1 + X2‖", metric(&r, "xi3_plus_x1_plus_x2"), ALG);
    c.below("|R|", metric(&r, "riemann_max"), D2);
    c.below("‖H‖", metric(&r, "mean_curvature"), D2);
    c
}

fn c5(cfg: &Config) -> Criterion {
    let mut c = Criterion::new();
    let t = check("C07", cfg);
    for f in ["anti_invariant", "xi1_normal", "xi2_normal", "xi3_normal"] {
        flag(&mut c, &t, f);
    }
    c.below("‖H‖", metric(&t, "mean_curvature"), D2);
    c.below("|R|", metric(&t, "riemann_max"), D2);
    let w = check("C08", cfg);
    c.below("∇⊥ξ", metric(&w, "normal_connection_xi"), D1);
    c.below("‖A_ξ‖", metric(&w, "shape_operator_xi"), D2);
    let l = check("C09", cfg);
    c.below("‖R⊥ξ‖", metric(&l, "normal_curvature_xi"), D2);
    c.below("∇⊥φY expansion", metric(&l, "normal_connection_phi"), D1);
    c.below("R⊥φZ closed form (α with φh tangent)", metric(&l, "closed_form_where_phi_h_tangent"), D2);
    flag(&mut c, &l, "closed_form_tested_for_some_alpha");
    let k = check("C10", cfg);
    c.above("max ‖R⊥(X,Y)φZ‖", metric(&k, "normal_curvature_phi"), R_PERP_PHI_FLOOR);
    c.note(format!(
        "closed form over all α: {:.3e} (φ_αh has normal part {:.3e} for α=1,2)",
        metric(&l, "closed_form_all_alpha"),
        metric(&l, "phi1_h_normal_part")
    ));
    c
}

fn c6(cfg: &Config) -> Criterion {
    let mut c = Criterion::new();
    let g = check("C11", cfg);
    for id in ["great-s3-fiber", "great-s3-alt"] {
        for f in ["invariant", "xi1_tangent", "xi2_tangent", "xi3_tangent"] {
            flag(&mut c, &g, &format!("{id}.{f}"));
        }
        c.below(&format!("{id} ‖h‖"), metric(&g, &format!("{id}.second_fundamental_form")), D2);
        c.below(&format!("{id} induced Sasakian"), metric(&g, &format!("{id}.induced_sasakian")), D1);
    }
    let d = check("C12", cfg);
    c.below("D bracket vs 2ε_ατ_α g(X,X)", metric(&d, "dphi_bracket_vs_prediction"), D2);
    c.note("D probe on great-s7-in-s11: on a 3-sphere D is zero".into());
    c
}

fn c7(cfg: &Config) -> Criterion {
    let mut c = Criterion::new();
    let r = check("C13", cfg);
    c.below("leaf J-algebra", metric(&r, "j_algebra"), ALG);
    c.below("leaf ∇J", metric(&r, "nabla_j"), ALG);
    flag(&mut c, &r, "second_fundamental_form_exactly_zero");
    c.below("block ξ bracket", metric(&r, "cosym-tangent-block.xi_bracket"), D2);
    c.below("block D bracket", metric(&r, "cosym-tangent-block.d_bracket_against_xi"), D2);
    c
}

fn c8(cfg: &Config) -> Criterion {
    let mut c = Criterion::new();
    let r = check("C17", cfg);
    let mut worst: f64 = 0.0;
    for entry in catalog::all().unwrap() {
        let id = entry.id;
        if entry.immersion.domain_dim() < 2 {
            // R⊥(X, X) = 0 on a curve
            c.note(format!("{id}: curve, identity vacuous"));
            continue;
        }
        let v = metric(&r, &format!("{id}.ricci_equation"));
        worst = worst.max(v);
        c.below(&format!("{id} R⊥ vs Ricci oracle"), v, D2);
    }
    c.note(format!("max discrepancy {worst:.2e}"));
    c
}

fn c9(cfg: &Config) -> Criterion {
    let mut c = Criterion::new();
    c.truth(
        "non-invariant plane rejected",
        matches!(catalog::great_sphere(1, &[0, 2, 4, 6], "bad"), Err(Error::PlaneNotInvariant(_))),
    );
    c.truth(
        "non-totally-real subspace rejected",
        matches!(catalog::real_sphere(1, &[4, 5], "bad"), Err(Error::SubspaceNotTotallyReal(_))),
    );
    c.truth("C15 passes", check("C15", cfg).passed());
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_mixed3"))
        .args(["verify", "--all", "--format", "json", "--seed", &cfg.seed.to_string()])
        .output()
        .expect("binary runs");
    let took = start.elapsed();
    c.truth(&format!("verify --all exit code {:?}", out.status.code()), out.status.code() == Some(0));
    c.truth(&format!("verify --all took {took:?}"), took < SUITE_BUDGET);
    c.note(format!("verify --all {} ms", took.as_millis()));
    c
}

#[test]
fn acceptance() {
    let cfg = Config::default();
    let criteria: [(&str, fn(&Config) -> Criterion); 9] = [
        ("axiom suite", c1),
        ("structure class", c2),
        ("Einstein constant", c3),
        ("Clifford torus", c4),
        ("flat torus", c5),
        ("invariant side", c6),
        ("cosymplectic side", c7),
        ("oracle equivalence", c8),
        ("negative controls", c9),
    ];
    let mut text = String::new();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let c = run(&cfg);
        let ok = c.failures.is_empty();
        failed += usize::from(!ok);
        text.push_str(&format!("criterion {} {:<20} {}\n", k + 1, name, if ok { "PASS" } else { "FAIL" }));
        for f in &c.failures {
            text.push_str(&format!("    fail: {f}\n"));
        }
        for n in &c.notes {
            text.push_str(&format!("    note: {n}\n"));
        }
    }
    // straight to the process stdout so the lines survive output capture
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).unwrap();
    out.flush().unwrap();
    assert_eq!(failed, 0, "{text}");
}
