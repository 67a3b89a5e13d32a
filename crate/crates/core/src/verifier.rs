//! Registry of named checks and the report format.
//!
//! Each check evaluates a set of metrics. A metric is either a residual that
//! must stay below its bound or a magnitude that must exceed it. The report's
//! `max_residual` and `tolerance` come from the metric closest to failing,
//! scaled so that `Pass ⇔ max_residual < tolerance` holds for both kinds.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::ambient::{make_flat_cosymplectic, make_pseudosphere, AmbientSpace, Level};
use crate::catalog::{self, CatalogEntry};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::exec::{par_map, sample_rng};
use crate::linalg::{Matrix, Vector};
use crate::structures::{check_axioms_with, check_parallelism_class, ParallelismClass};
use crate::submanifold::{
    christoffel, classify, distribution_bracket_probe, duality_residual, frame_at, gauss_residual,
    induced_structure_residuals, intrinsic_curvature, mean_curvature, normal_connection,
    normal_curvature, phi_coordinate_field, projected_normal_field, ricci_oracle_discrepancy,
    second_fundamental_form, shape_operator, shape_xi_relation, weingarten_residual, xi_field,
    BracketMode, PointFrame, SubmanifoldKind, XiTangency,
};

pub const REPORT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Lower bound on `‖R⊥(X,Y)φ_α Z‖` separating a flat torus from the
/// constant-curvature case.
pub const NONTRIVIAL_NORMAL_CURVATURE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Below,
    Above,
    /// Reported for inspection only; never decides the status.
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub relation: Relation,
}

impl Metric {
    pub fn below(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self { name: name.into(), value, bound, relation: Relation::Below }
    }

    pub fn above(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self { name: name.into(), value, bound, relation: Relation::Above }
    }

    /// Boolean condition as a 0/1 residual against 0.5.
    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self::below(name, if ok { 0.0 } else { 1.0 }, 0.5)
    }

    pub fn info(name: impl Into<String>, value: f64) -> Self {
        Self { name: name.into(), value, bound: 0.0, relation: Relation::Info }
    }

    /// How close to failing: `< 1` passes. NaN counts as failing.
    pub fn ratio(&self) -> f64 {
        let r = match self.relation {
            Relation::Below => self.value / self.bound,
            Relation::Above => self.bound / self.value,
            Relation::Info => return 0.0,
        };
        if r.is_nan() {
            f64::INFINITY
        } else {
            r
        }
    }

    pub fn passes(&self) -> bool {
        self.ratio() < 1.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "state", content = "reason")]
pub enum Status {
    Pass,
    Fail,
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    pub anchor: String,
    pub example_ids: Vec<String>,
    pub status: Status,
    pub max_residual: f64,
    pub tolerance: f64,
    pub points: usize,
    pub seed: u64,
    pub wall_time_ms: u64,
    pub metrics: Vec<Metric>,
    /// Error text when an evaluation aborted.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunOutput {
    pub version: String,
    pub config: Config,
    pub reports: Vec<CheckReport>,
}

enum Outcome {
    Done { examples: Vec<String>, points: usize, metrics: Vec<Metric> },
    Skip { examples: Vec<String>, reason: String },
}

struct CheckDef {
    id: &'static str,
    anchor: &'static str,
    run: fn(&Config, u64) -> Result<Outcome>,
}

const CHECKS: [CheckDef; 17] = [
    CheckDef { id: "C01", anchor: "φ_α² = τ_α(−I + η_α ⊗ ξ_α), η_α(ξ_α) = 1, ... ḡ(φ_αX, φ_αY) = τ_α[ḡ(X,Y) − ε_α η_α(X)η_α(Y)] on the unit pseudo-sphere", run: c01 },
    CheckDef { id: "C02", anchor: "R^{4n+3}_{2n+1} admits a positive mixed 3-cosymplectic structure", run: c02 },
    CheckDef { id: "C03", anchor: "is said to be a mixed 3-Sasakian structure: (∇̄_Xφ_α)Y = τ_α[ḡ(X,Y)ξ_α − ε_αη_α(Y)X], ∇̄_Xξ_α = −ε_αφ_αX", run: c03 },
    CheckDef { id: "C04", anchor: "is said to be a mixed 3-cosymplectic structure: ∇̄φ_α = 0, ∇̄ξ_α = 0", run: c04 },
    CheckDef { id: "C05", anchor: "is an Einstein space with Einstein constant λ = (4n+2)ε", run: c05 },
    CheckDef { id: "C06", anchor: "Therefore M is an anti-invariant submanifold of S^7_3 ... since ξ_3 = −X_1 − X_2; dim ξ_p^t = 1 and dim ξ_p^n = 2", run: c06 },
    CheckDef { id: "C07", anchor: "an anti-invariant flat minimal submanifold ... normal to the structure vector fields", run: c07 },
    CheckDef { id: "C08", anchor: "∇⊥_X ξ_α = −ε_α φ_α X and A_{ξ_α} X = 0", run: c08 },
    CheckDef { id: "C09", anchor: "R⊥(X,Y)ξ_α = 0 and R⊥(X,Y)φ_αZ = φ_αR(X,Y)Z − ε_ατ_α[g(Y,Z)φ_αX − g(X,Z)φ_αY]", run: c09 },
    CheckDef { id: "C10", anchor: "the normal connection is flat if and only if M is of constant sectional curvature ∓1", run: c10 },
    CheckDef { id: "C11", anchor: "an invariant submanifold tangent to the structure vector fields is mixed 3-Sasakian and totally geodesic; the ξ_α are all either tangent or normal", run: c11 },
    CheckDef { id: "C12", anchor: "the distribution D is never integrable: ḡ([X, φ_αX], ξ_α) = 2ε_ατ_α g(X,X) ≠ 0", run: c12 },
    CheckDef { id: "C13", anchor: "M is a para-hyper-Kähler manifold, totally geodesically immersed", run: c13 },
    CheckDef { id: "C14", anchor: "ḡ(φ_αX, Y) = ε_α g(A_{ξ_α}X, Y) ... then M is anti-invariant", run: c14 },
    CheckDef { id: "C15", anchor: "mixed 3-Sasakian manifolds do not admit anti-invariant submanifolds tangent to the structure vector fields", run: c15 },
    CheckDef { id: "C16", anchor: "is an Einstein space with Einstein constant λ = (4n+2)ε, ε = ∓1 according as the structure is positive or negative", run: c16 },
    CheckDef { id: "C17", anchor: "ḡ(R⊥(X,Y)N, N′) = ḡ(R̄(X,Y)N, N′) + g([A_N, A_N′]X, Y); ∇̄_XY = ∇_XY + h(X,Y)", run: c17 },
];

pub fn check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.id).collect()
}

/// Anchor text of a check.
pub fn anchor(id: &str) -> Option<&'static str> {
    CHECKS.iter().find(|c| c.id == id).map(|c| c.anchor)
}

/// Run the selected checks (all when `ids` is empty); reports are sorted by id.
pub fn run(ids: &[String], cfg: &Config) -> Result<Vec<CheckReport>> {
    cfg.validate()?;
    let mut selected: Vec<&CheckDef> = Vec::new();
    if ids.is_empty() {
        selected.extend(CHECKS.iter());
    } else {
        for id in ids {
            let def = CHECKS
                .iter()
                .find(|c| c.id.eq_ignore_ascii_case(id))
                .ok_or_else(|| Error::UnknownCheckId(id.clone()))?;
            if !selected.iter().any(|d| d.id == def.id) {
                selected.push(def);
            }
        }
    }
    selected.sort_by_key(|d| d.id);
    Ok(par_map(cfg.parallel, selected, |def| run_one(def, cfg)))
}

pub fn run_all(cfg: &Config) -> Result<RunOutput> {
    Ok(RunOutput { version: REPORT_VERSION.to_string(), config: cfg.clone(), reports: run(&[], cfg)? })
}

fn run_one(def: &CheckDef, cfg: &Config) -> CheckReport {
    let start = Instant::now();
    let stream = def.id[1..].parse::<u64>().unwrap_or(0);
    let outcome = (def.run)(cfg, stream);
    let wall_time_ms = start.elapsed().as_millis() as u64;
    let mut rep = CheckReport {
        check_id: def.id.to_string(),
        anchor: def.anchor.to_string(),
        example_ids: Vec::new(),
        status: Status::Fail,
        max_residual: f64::INFINITY,
        tolerance: 0.0,
        points: 0,
        seed: cfg.seed,
        wall_time_ms,
        metrics: Vec::new(),
        error: None,
    };
    match outcome {
        Err(e) => rep.error = Some(e.to_string()),
        Ok(Outcome::Skip { examples, reason }) => {
            rep.example_ids = examples;
            rep.status = Status::Skipped(reason);
            rep.max_residual = 0.0;
        }
        Ok(Outcome::Done { examples, points, metrics }) => {
            rep.example_ids = examples;
            rep.points = points;
            // first metric wins ties, so all-zero checks report their leading residual
            let worst = metrics.iter().fold(None::<&Metric>, |acc, m| match acc {
                Some(a) if m.ratio() <= a.ratio() => Some(a),
                _ => Some(m),
            });
            if let Some(worst) = worst {
                rep.tolerance = worst.bound;
                rep.max_residual = worst.ratio() * worst.bound;
                rep.status = if worst.passes() { Status::Pass } else { Status::Fail };
            } else {
                rep.error = Some("no metrics evaluated".into());
            }
            rep.metrics = metrics;
        }
    }
    rep
}

// ---- helpers ----

fn sphere_id(n: usize, level: Level) -> String {
    format!("s{}-{}", 4 * n + 3, if level == Level::Positive { "pos" } else { "neg" })
}

/// Parameter samples for one example of one check.
fn samples(e: &CatalogEntry, cfg: &Config, stream: u64, slot: u64) -> Vec<Vec<f64>> {
    (0..cfg.points)
        .map(|i| {
            let mut rng = sample_rng(cfg.seed, stream * 64 + slot, i);
            e.immersion.sample_params(&mut rng)
        })
        .collect()
}

/// Per-point metric vectors folded to their worst value per name.
fn fold_points(cfg: &Config, per_point: Vec<Result<Vec<Metric>>>) -> Result<Vec<Metric>> {
    let _ = cfg;
    let mut acc: Vec<Metric> = Vec::new();
    for ms in per_point {
        for m in ms? {
            match acc.iter_mut().find(|a| a.name == m.name) {
                None => acc.push(m),
                Some(a) => {
                    if m.ratio() > a.ratio() {
                        *a = m;
                    }
                }
            }
        }
    }
    Ok(acc)
}

/// Evaluate `f` at every sample point of an entry, in parallel when enabled.
fn over_points<F>(e: &CatalogEntry, cfg: &Config, stream: u64, slot: u64, f: F) -> Result<Vec<Metric>>
where
    F: Fn(&PointFrame) -> Result<Vec<Metric>> + Sync + Send,
{
    let pts = samples(e, cfg, stream, slot);
    let res = par_map(cfg.parallel, pts, |u| {
        let fr = frame_at(&e.immersion, &u, cfg)?;
        f(&fr)
    });
    fold_points(cfg, res)
}

fn prefixed(prefix: &str, ms: Vec<Metric>) -> Vec<Metric> {
    ms.into_iter().map(|mut m| {
        m.name = format!("{prefix}.{}", m.name);
        m
    }).collect()
}

fn axiom_metrics(space: &AmbientSpace, cfg: &Config) -> Result<Vec<Metric>> {
    let r = check_axioms_with(space, cfg.axiom_points, cfg.seed, cfg.parallel)?;
    let tol = cfg.tol_alg();
    let mut ms: Vec<Metric> =
        r.by_axiom().iter().enumerate().map(|(k, v)| Metric::below(format!("axiom{}", k + 1), *v, tol)).collect();
    ms.push(Metric::below("tangency", r.tangency, tol));
    Ok(ms)
}

fn einstein_metrics(space: &AmbientSpace, cfg: &Config, stream: u64) -> Result<Vec<Metric>> {
    let n = space.n();
    let target = (4 * n + 2) as f64;
    let eps1 = space.require_structure()?.eps(0);
    let tol = cfg.tol_d2();
    let per = par_map(cfg.parallel, (0..cfg.points).collect(), |i| {
        let mut rng = sample_rng(cfg.seed, stream * 64, i);
        let p = space.random_point(&mut rng);
        let r = space.ricci_and_einstein(&p, cfg)?;
        Ok(vec![
            Metric::below("abs_lambda_minus_4n2", (r.lambda.abs() - target).abs(), tol),
            Metric::below("lambda_plus_4n2_eps1", (r.lambda + target * eps1).abs(), tol),
            Metric::below("ricci_minus_lambda_g", r.residual, tol),
            Metric::below("fd_vs_space_form", r.fd_vs_oracle, tol),
            Metric::info("lambda", r.lambda),
            Metric::info("eps1", eps1),
        ])
    });
    fold_points(cfg, per)
}

fn parallelism_sasakian(space: &AmbientSpace, cfg: &Config) -> Result<Vec<Metric>> {
    let r = check_parallelism_class(space, cfg.points.max(10), cfg.seed, cfg)?;
    Ok(vec![
        Metric::below("sasakian_phi", r.eq10, cfg.tol_d1()),
        Metric::below("sasakian_xi", r.eq12, cfg.tol_d1()),
        Metric::above("nabla_phi_nonzero", r.eq9, 0.1),
        Metric::flag("class_sasakian", r.class == ParallelismClass::Sasakian),
    ])
}

fn tangency_flags(c: &crate::submanifold::Classification, want: &[XiTangency; 3]) -> Vec<Metric> {
    (0..3).map(|a| Metric::flag(format!("xi{}_{:?}", a + 1, want[a]).to_lowercase(), c.xi[a] == want[a])).collect()
}

// ---- checks ----

fn c01(cfg: &Config, _: u64) -> Result<Outcome> {
    let space = make_pseudosphere(cfg.n, Level::Positive)?;
    Ok(Outcome::Done { examples: vec![sphere_id(cfg.n, Level::Positive)], points: cfg.axiom_points, metrics: axiom_metrics(&space, cfg)? })
}

fn c02(cfg: &Config, _: u64) -> Result<Outcome> {
    let space = make_flat_cosymplectic(cfg.n, 1)?;
    Ok(Outcome::Done { examples: vec!["cosym".into()], points: cfg.axiom_points, metrics: axiom_metrics(&space, cfg)? })
}

fn c03(cfg: &Config, _: u64) -> Result<Outcome> {
    let space = make_pseudosphere(cfg.n, Level::Positive)?;
    Ok(Outcome::Done {
        examples: vec![sphere_id(cfg.n, Level::Positive)],
        points: cfg.points.max(10),
        metrics: parallelism_sasakian(&space, cfg)?,
    })
}

fn c04(cfg: &Config, _: u64) -> Result<Outcome> {
    let space = make_flat_cosymplectic(cfg.n, 1)?;
    let r = check_parallelism_class(&space, cfg.points.max(10), cfg.seed, cfg)?;
    Ok(Outcome::Done {
        examples: vec!["cosym".into()],
        points: r.points,
        metrics: vec![
            Metric::below("nabla_phi", r.eq9, cfg.tol_alg()),
            Metric::below("nabla_xi", r.eq11, cfg.tol_alg()),
            Metric::flag("class_cosymplectic", r.class == ParallelismClass::Cosymplectic),
        ],
    })
}

fn c05(cfg: &Config, stream: u64) -> Result<Outcome> {
    let space = make_pseudosphere(cfg.n, Level::Positive)?;
    Ok(Outcome::Done {
        examples: vec![sphere_id(cfg.n, Level::Positive)],
        points: cfg.points,
        metrics: einstein_metrics(&space, cfg, stream)?,
    })
}

fn c06(cfg: &Config, stream: u64) -> Result<Outcome> {
    let e = catalog::get("clifford-torus")?;
    let imm = &e.immersion;
    let metrics = over_points(&e, cfg, stream, 0, |fr| {
        let c = classify(imm, fr, cfg)?;
        let st = imm.ambient().require_structure()?;
        let sff = second_fundamental_form(imm, fr, cfg);
        let curv = intrinsic_curvature(imm, fr, cfg)?;
        let hm = mean_curvature(fr, &sff);
        let xi3 = st.xi(2, &fr.point) + &fr.tangent[0] + &fr.tangent[1];
        let mut ms = vec![
            Metric::flag("anti_invariant", c.kind == SubmanifoldKind::AntiInvariant),
            Metric::below("anti_invariance_residual", c.anti_invariant_residual, cfg.tol_alg()),
            Metric::below("xi3_plus_x1_plus_x2", xi3.amax(), cfg.tol_alg()),
            Metric::flag("dim_xi_t_is_1", c.dim_xi_t == 1),
            Metric::flag("dim_xi_n_is_2", c.dim_xi_n == 2),
            Metric::below("riemann_max", curv.max_abs, cfg.tol_d2()),
            Metric::below("mean_curvature", hm.norm, cfg.tol_d2()),
        ];
        ms.extend(tangency_flags(&c, &e.expected.xi));
        Ok(ms)
    })?;
    Ok(Outcome::Done { examples: vec![e.id.into()], points: cfg.points, metrics })
}

fn c07(cfg: &Config, stream: u64) -> Result<Outcome> {
    let e = catalog::get("flat-torus-n2")?;
    let imm = &e.immersion;
    let metrics = over_points(&e, cfg, stream, 0, |fr| {
        let c = classify(imm, fr, cfg)?;
        let sff = second_fundamental_form(imm, fr, cfg);
        let curv = intrinsic_curvature(imm, fr, cfg)?;
        let hm = mean_curvature(fr, &sff);
        let mut ms = vec![
            Metric::flag("anti_invariant", c.kind == SubmanifoldKind::AntiInvariant),
            Metric::below("anti_invariance_residual", c.anti_invariant_residual, cfg.tol_alg()),
            Metric::below("mean_curvature", hm.norm, cfg.tol_d2()),
            Metric::below("riemann_max", curv.max_abs, cfg.tol_d2()),
            Metric::above("second_fundamental_form_nonzero", sff.max_norm(), 0.1),
        ];
        ms.extend(tangency_flags(&c, &e.expected.xi));
        Ok(ms)
    })?;
    Ok(Outcome::Done { examples: vec![e.id.into()], points: cfg.points, metrics })
}

fn c08(cfg: &Config, stream: u64) -> Result<Outcome> {
    let e = catalog::get("flat-torus-n2")?;
    let imm = &e.immersion;
    let st = imm.ambient().require_structure()?;
    let metrics = over_points(&e, cfg, stream, 0, |fr| {
        let sff = second_fundamental_form(imm, fr, cfg);
        let (mut conn, mut shape, mut wein): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for a in 0..3 {
            let xf = xi_field(imm, a)?;
            for k in 0..fr.dim() {
                let d = normal_connection(imm, fr, k, &*xf, cfg)?;
                let want = st.phi(a, &fr.point, &fr.tangent[k]) * (-st.eps(a));
                conn = conn.max((d - want).amax());
            }
            shape = shape.max(shape_operator(imm.ambient(), fr, &sff, &st.xi(a, &fr.point)).amax());
            wein = wein.max(weingarten_residual(imm, fr, &sff, &*xf, cfg));
        }
        Ok(vec![
            Metric::below("normal_connection_xi", conn, cfg.tol_d1()),
            Metric::below("shape_operator_xi", shape, cfg.tol_d2()),
            Metric::below("weingarten_xi", wein, cfg.tol_d2()),
        ])
    })?;
    Ok(Outcome::Done { examples: vec![e.id.into()], points: cfg.points, metrics })
}

/// Normal-curvature data of the flat torus at one point.
struct TorusNormal {
    /// `max ‖R⊥(X_i,X_j) ξ_α‖`.
    r_xi: f64,
    /// Residual of `∇⊥_X φ_α Y = τ_α g(X,Y) ξ_α + φ_α ∇_X Y + (φ_α h(X,Y))^n`.
    conn_phi: f64,
    /// Per `α`: residual of `R⊥(X,Y)φ_α Z = −ε_α τ_α[g(Y,Z)φ_α X − g(X,Z)φ_α Y]`.
    closed_form: [f64; 3],
    /// Per `α`: `max ‖(φ_α h(X_i,X_j))^n‖`, whose vanishing the closed form needs.
    phi_h_normal: [f64; 3],
    /// `max ‖R⊥(X_i,X_j) φ_α X_k‖`.
    r_phi: f64,
}

fn torus_normal_curvature(e: &CatalogEntry, fr: &PointFrame, cfg: &Config) -> Result<TorusNormal> {
    let imm = &e.immersion;
    let space = imm.ambient();
    let st = space.require_structure()?;
    let m = fr.dim();
    let sff = second_fundamental_form(imm, fr, cfg);
    let gam = christoffel(imm, &fr.u, cfg);
    let mut out = TorusNormal { r_xi: 0.0, conn_phi: 0.0, closed_form: [0.0; 3], phi_h_normal: [0.0; 3], r_phi: 0.0 };
    for a in 0..3 {
        let xf = xi_field(imm, a)?;
        for k in 0..m {
            let pf = phi_coordinate_field(imm, a, k, cfg)?;
            for i in 0..m {
                let nab = fr.combine(&Vector::from_fn(m, |l, _| gam[l][(i, k)]));
                let phn = fr.normal_part(space, &st.phi(a, &fr.point, &sff.h[i][k]));
                out.phi_h_normal[a] = out.phi_h_normal[a].max(phn.amax());
                let want = st.xi(a, &fr.point) * (st.tau(a) * fr.gram[(i, k)]) + st.phi(a, &fr.point, &nab) + phn;
                let got = normal_connection(imm, fr, i, &*pf, cfg)?;
                out.conn_phi = out.conn_phi.max((got - want).amax());
            }
        }
        for i in 0..m {
            for j in (i + 1)..m {
                out.r_xi = out.r_xi.max(normal_curvature(imm, fr, i, j, &*xf, cfg)?.amax());
                for k in 0..m {
                    let pf = phi_coordinate_field(imm, a, k, cfg)?;
                    let r = normal_curvature(imm, fr, i, j, &*pf, cfg)?;
                    let (xi_, xj_) = (&fr.tangent[i], &fr.tangent[j]);
                    // intrinsic curvature vanishes on the flat torus
                    let want = (st.phi(a, &fr.point, xi_) * fr.gram[(j, k)]
                        - st.phi(a, &fr.point, xj_) * fr.gram[(i, k)])
                        * (-st.eps(a) * st.tau(a));
                    out.closed_form[a] = out.closed_form[a].max((&r - want).amax());
                    out.r_phi = out.r_phi.max(r.amax());
                }
            }
        }
    }
    Ok(out)
}

fn c09(cfg: &Config, stream: u64) -> Result<Outcome> {
    let e = catalog::get("flat-torus-n2")?;
    let metrics = over_points(&e, cfg, stream, 0, |fr| {
        let t = torus_normal_curvature(&e, fr, cfg)?;
        // the closed form is derived under (φ_α h)^n = 0; gate it on the α where that holds
        let holds: Vec<usize> = (0..3).filter(|&a| t.phi_h_normal[a] < cfg.tol_d2()).collect();
        let gated = holds.iter().map(|&a| t.closed_form[a]).fold(0.0, f64::max);
        let mut ms = vec![
            Metric::below("normal_curvature_xi", t.r_xi, cfg.tol_d2()),
            Metric::below("normal_connection_phi", t.conn_phi, cfg.tol_d1()),
            Metric::below("closed_form_where_phi_h_tangent", gated, cfg.tol_d2()),
            Metric::flag("closed_form_tested_for_some_alpha", !holds.is_empty()),
            Metric::info("closed_form_all_alpha", t.closed_form.iter().copied().fold(0.0, f64::max)),
        ];
        for a in 0..3 {
            ms.push(Metric::info(format!("phi{}_h_normal_part", a + 1), t.phi_h_normal[a]));
            ms.push(Metric::info(format!("closed_form_alpha{}", a + 1), t.closed_form[a]));
        }
        Ok(ms)
    })?;
    Ok(Outcome::Done { examples: vec![e.id.into()], points: cfg.points, metrics })
}

fn c10(cfg: &Config, stream: u64) -> Result<Outcome> {
    let e = catalog::get("flat-torus-n2")?;
    let imm = &e.immersion;
    let metrics = over_points(&e, cfg, stream, 0, |fr| {
        let big = torus_normal_curvature(&e, fr, cfg)?.r_phi;
        let curv = intrinsic_curvature(imm, fr, cfg)?;
        let dist = curv.sectional.iter().map(|s| (s.2.abs() - 1.0).abs()).fold(f64::INFINITY, f64::min);
        Ok(vec![
            Metric::above("normal_curvature_phi", big, NONTRIVIAL_NORMAL_CURVATURE),
            Metric::above("sectional_distance_from_unit", dist, 0.5),
        ])
    })?;
    Ok(Outcome::Done { examples: vec![e.id.into()], points: cfg.points, metrics })
}

const GREAT_SPHERES: [&str; 3] = ["great-s3-alt", "great-s3-fiber", "great-s7-in-s11"];

fn c11(cfg: &Config, stream: u64) -> Result<Outcome> {
    let mut metrics = Vec::new();
    for (slot, id) in GREAT_SPHERES.iter().enumerate() {
        let e = catalog::get(id)?;
        let imm = &e.immersion;
        let level = imm.ambient().level().map(|l| l.value()).unwrap_or(0.0);
        let ms = over_points(&e, cfg, stream, slot as u64, |fr| {
            let c = classify(imm, fr, cfg)?;
            let sff = second_fundamental_form(imm, fr, cfg);
            let hm = mean_curvature(fr, &sff);
            let (_, r10) = induced_structure_residuals(imm, fr, cfg)?;
            let curv = intrinsic_curvature(imm, fr, cfg)?;
            let ksec = curv.sectional.iter().map(|s| (s.2 - level).abs()).fold(0.0, f64::max);
            let mut ms = vec![
                Metric::flag("invariant", c.kind == SubmanifoldKind::Invariant),
                Metric::below("invariance_residual", c.invariant_residual, cfg.tol_alg()),
                Metric::flag("no_oblique_xi", !c.xi.contains(&XiTangency::Oblique)),
                Metric::below("second_fundamental_form", sff.max_norm(), cfg.tol_d2()),
                Metric::below("umbilical_residual", hm.umbilical_residual, cfg.tol_d2()),
                Metric::below("induced_sasakian", r10, cfg.tol_d1()),
                Metric::below("sectional_minus_level", ksec, cfg.tol_d2()),
            ];
            ms.extend(tangency_flags(&c, &e.expected.xi));
            Ok(ms)
        })?;
        metrics.extend(prefixed(id, ms));
    }
    Ok(Outcome::Done { examples: GREAT_SPHERES.iter().map(|s| s.to_string()).collect(), points: cfg.points, metrics })
}

fn c12(cfg: &Config, stream: u64) -> Result<Outcome> {
    let e = catalog::get("great-s7-in-s11")?;
    let imm = &e.immersion;
    let seed = cfg.seed;
    let pts = samples(&e, cfg, stream, 0);
    let per = par_map(cfg.parallel, pts.into_iter().enumerate().collect(), |(i, u)| {
        let fr = frame_at(imm, &u, cfg)?;
        let p = distribution_bracket_probe(imm, &fr, BracketMode::DPhi, seed ^ i as u64, cfg)?;
        let xx = distribution_bracket_probe(imm, &fr, BracketMode::XiXi, seed ^ i as u64, cfg)?;
        let nonzero = p.expected.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
        Ok(vec![
            Metric::below("dphi_bracket_vs_prediction", p.residual, cfg.tol_d2()),
            Metric::above("dphi_bracket_nonzero", nonzero, 0.05),
            Metric::below("xi_bracket_in_xi", xx.residual, cfg.tol_d2()),
        ])
    });
    let mut metrics = fold_points(cfg, per)?;
    // on the great 3-spheres D is trivial: TM = span{ξ_α}
    for (slot, id) in ["great-s3-alt", "great-s3-fiber"].iter().enumerate() {
        let g = catalog::get(id)?;
        let ms = over_points(&g, cfg, stream, slot as u64 + 1, |fr| {
            let c = classify(&g.immersion, fr, cfg)?;
            Ok(vec![Metric::flag(format!("{id}.tangent_space_is_xi_span"), c.dim_xi_t == fr.dim())])
        })?;
        metrics.extend(ms);
    }
    Ok(Outcome::Done {
        examples: vec![e.id.into(), "great-s3-alt".into(), "great-s3-fiber".into()],
        points: cfg.points,
        metrics,
    })
}

/// Matrix of `φ_α` restricted to an invariant submanifold, in the coordinate basis.
fn induced_j(imm: &crate::submanifold::Immersion, fr: &PointFrame, a: usize) -> Result<Matrix> {
    let st = imm.ambient().require_structure()?;
    let m = fr.dim();
    let mut j = Matrix::zeros(m, m);
    for k in 0..m {
        let c = fr.tangential_coeffs(imm.ambient(), &st.phi(a, &fr.point, &fr.tangent[k]));
        j.set_column(k, &c);
    }
    Ok(j)
}

fn c13(cfg: &Config, stream: u64) -> Result<Outcome> {
    let leaf = catalog::get("cosym-leaf")?;
    let imm = &leaf.immersion;
    let tau = crate::ambient::TAU;
    let mut metrics = over_points(&leaf, cfg, stream, 0, |fr| {
        let c = classify(imm, fr, cfg)?;
        let m = fr.dim();
        let id = Matrix::identity(m, m);
        let js: Vec<Matrix> = (0..3).map(|a| induced_j(imm, fr, a)).collect::<Result<_>>()?;
        let mut alg: f64 = 0.0;
        for a in 0..3 {
            alg = alg.max((&js[a] * &js[a] + &id * tau[a]).amax());
            // g(J X, J Y) = τ g(X, Y)
            alg = alg.max((js[a].transpose() * &fr.gram * &js[a] - &fr.gram * tau[a]).amax());
        }
        for &(a, b, g) in &crate::ambient::EVEN_PERMUTATIONS {
            alg = alg.max((&js[a] * &js[b] - &js[g] * tau[g]).amax());
            alg = alg.max((&js[b] * &js[a] + &js[g] * tau[g]).amax());
        }
        let sff = second_fundamental_form(imm, fr, cfg);
        let (r9, _) = induced_structure_residuals(imm, fr, cfg)?;
        Ok(vec![
            Metric::flag("invariant", c.kind == SubmanifoldKind::Invariant),
            Metric::below("j_algebra", alg, cfg.tol_alg()),
            Metric::below("nabla_j", r9, cfg.tol_alg()),
            Metric::flag("second_fundamental_form_exactly_zero", sff.max_norm() == 0.0),
        ])
    })?;
    let block = catalog::get("cosym-tangent-block")?;
    let bimm = &block.immersion;
    let bm = over_points(&block, cfg, stream, 1, |fr| {
        let xx = distribution_bracket_probe(bimm, fr, BracketMode::XiXi, cfg.seed, cfg)?;
        let dd = distribution_bracket_probe(bimm, fr, BracketMode::DD, cfg.seed, cfg)?;
        let (r9, _) = induced_structure_residuals(bimm, fr, cfg)?;
        Ok(vec![
            Metric::below("xi_bracket", xx.residual, cfg.tol_d2()),
            Metric::below("d_bracket_against_xi", dd.residual, cfg.tol_d2()),
            Metric::below("induced_cosymplectic", r9, cfg.tol_alg()),
        ])
    })?;
    metrics.extend(prefixed(block.id, bm));
    Ok(Outcome::Done { examples: vec![leaf.id.into(), block.id.into()], points: cfg.points, metrics })
}

fn c14(cfg: &Config, stream: u64) -> Result<Outcome> {
    let mut metrics = Vec::new();
    let ids = ["real-circle", "flat-torus-n2"];
    for (slot, id) in ids.iter().enumerate() {
        let e = catalog::get(id)?;
        let imm = &e.immersion;
        let ms = over_points(&e, cfg, stream, slot as u64, |fr| {
            let c = classify(imm, fr, cfg)?;
            let sff = second_fundamental_form(imm, fr, cfg);
            let rel = shape_xi_relation(imm, fr, &sff, cfg)?;
            let mut ms = vec![
                Metric::below("shape_xi_relation", rel, cfg.tol_d2()),
                Metric::flag("anti_invariant", c.kind == SubmanifoldKind::AntiInvariant),
                Metric::below("anti_invariance_residual", c.anti_invariant_residual, cfg.tol_alg()),
            ];
            if e.expected.totally_geodesic {
                ms.push(Metric::below("second_fundamental_form", sff.max_norm(), cfg.tol_d2()));
            }
            ms.extend(tangency_flags(&c, &e.expected.xi));
            Ok(ms)
        })?;
        metrics.extend(prefixed(id, ms));
    }
    Ok(Outcome::Done { examples: ids.iter().map(|s| s.to_string()).collect(), points: cfg.points, metrics })
}

fn c15(cfg: &Config, stream: u64) -> Result<Outcome> {
    let mut metrics = Vec::new();
    let mut examples = Vec::new();
    for (slot, e) in catalog::all()?.iter().enumerate() {
        if e.immersion.ambient().is_flat() {
            continue;
        }
        examples.push(e.id.to_string());
        let imm = &e.immersion;
        let ms = over_points(e, cfg, stream, slot as u64, |fr| {
            let c = classify(imm, fr, cfg)?;
            let anti = c.kind == SubmanifoldKind::AntiInvariant;
            let all_tangent = c.xi == [XiTangency::Tangent; 3];
            let some_tangent = c.dim_xi_t > 0;
            Ok(vec![
                Metric::flag("not_anti_invariant_and_xi_tangent", !(anti && all_tangent)),
                Metric::flag("dimension_law", !(anti && some_tangent) || (c.dim_xi_t, c.dim_xi_n) == (1, 2)),
                Metric::flag("kind_matches_catalog", c.kind == e.expected.kind),
                Metric::flag("xi_matches_catalog", c.xi == e.expected.xi),
                Metric::below("decomposition", c.decomposition_residual, cfg.tol_alg()),
            ])
        })?;
        metrics.extend(prefixed(e.id, ms));
    }
    Ok(Outcome::Done { examples, points: cfg.points, metrics })
}

fn c16(cfg: &Config, stream: u64) -> Result<Outcome> {
    let id = sphere_id(cfg.n, Level::Negative);
    let space = match make_pseudosphere(cfg.n, Level::Negative) {
        Ok(s) => s,
        Err(e) => return Ok(Outcome::Skip { examples: vec![id], reason: format!("construction unavailable: {e}") }),
    };
    let mut metrics = axiom_metrics(&space, cfg)?;
    metrics.extend(parallelism_sasakian(&space, cfg)?);
    metrics.extend(einstein_metrics(&space, cfg, stream)?);
    Ok(Outcome::Done { examples: vec![id], points: cfg.points, metrics })
}

fn c17(cfg: &Config, stream: u64) -> Result<Outcome> {
    let mut metrics = Vec::new();
    let mut examples = Vec::new();
    for (slot, e) in catalog::all()?.iter().enumerate() {
        let imm = &e.immersion;
        examples.push(e.id.to_string());
        let ms = over_points(e, cfg, stream, slot as u64, |fr| {
            let sff = second_fundamental_form(imm, fr, cfg);
            let mut ms = vec![
                Metric::below("gauss_reconstruction", gauss_residual(imm, fr, &sff, cfg), cfg.tol_d2()),
                Metric::below("h_shape_duality", duality_residual(imm.ambient(), fr, &sff), cfg.tol_d2()),
                Metric::below("h_symmetry", sff.asymmetry, cfg.tol_d2()),
            ];
            if fr.dim() >= 2 && !fr.normal.is_empty() {
                let mut worst: f64 = 0.0;
                let mut wein: f64 = 0.0;
                let mut rng = sample_rng(cfg.seed, stream * 64 + 63, fr.u.len());
                for _ in 0..2 {
                    use rand::Rng;
                    let c = Vector::from_fn(fr.point.len(), |_, _| rng.gen_range(-1.0..1.0));
                    let nf = projected_normal_field(imm, c, cfg);
                    worst = worst.max(ricci_oracle_discrepancy(imm, fr, &sff, &*nf, cfg)?);
                    wein = wein.max(weingarten_residual(imm, fr, &sff, &*nf, cfg));
                }
                ms.push(Metric::below("ricci_equation", worst, cfg.tol_d2()));
                ms.push(Metric::below("weingarten", wein, cfg.tol_d2()));
            }
            Ok(ms)
        })?;
        metrics.extend(prefixed(e.id, ms));
    }
    Ok(Outcome::Done { examples, points: cfg.points, metrics })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchors_nonempty_and_ids_unique() {
        let ids = check_ids();
        for (i, c) in CHECKS.iter().enumerate() {
            assert!(!c.anchor.trim().is_empty());
            assert!(!ids[i + 1..].contains(&c.id));
        }
    }

    #[test]
    fn unknown_id_rejected() {
        let err = run(&["C99".to_string()], &Config::default()).unwrap_err();
        assert_eq!(err, Error::UnknownCheckId("C99".into()));
    }

    #[test]
    fn metric_ratio_semantics() {
        assert!(Metric::below("a", 1e-10, 1e-9).passes());
        assert!(!Metric::below("a", 1e-8, 1e-9).passes());
        assert!(Metric::above("a", 1.0, 0.05).passes());
        assert!(!Metric::above("a", 0.01, 0.05).passes());
        assert!(!Metric::below("a", f64::NAN, 1.0).passes());
        assert!(Metric::flag("f", true).passes());
    }
}
