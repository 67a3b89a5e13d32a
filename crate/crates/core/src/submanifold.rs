//! Submanifold calculus for explicit immersions `f: U ⊂ R^m → M̄`.
//!
//! Tangent fields are the coordinate fields `X_i = ∂f/∂u_i`. Everything that
//! needs a derivative of a field along the submanifold differentiates the
//! field's formula in the parameters, so `∇̄_{X_i} V = tan_M̄(∂_i V)` and
//! coordinate brackets vanish.
//!
//! Normal fields are passed as closures `u ↦ N(f(u))`; nothing interpolates
//! a normal basis between points. Nested finite differences of fields built
//! from the Jacobian are only accurate with an analytic Jacobian, which every
//! catalog immersion supplies.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ambient::AmbientSpace;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{orthogonal_complement, rank, Matrix, Subspace, Vector};

pub type ParamMap = Arc<dyn Fn(&[f64]) -> Vector + Send + Sync>;
pub type ParamJacobian = Arc<dyn Fn(&[f64]) -> Matrix + Send + Sync>;

/// A vector field along the immersion, as a function of the parameters.
pub type Field<'a> = dyn Fn(&[f64]) -> Vector + Send + Sync + 'a;

#[derive(Clone)]
pub struct Immersion {
    name: String,
    domain_dim: usize,
    ambient: Arc<AmbientSpace>,
    map: ParamMap,
    jacobian: Option<ParamJacobian>,
    param_box: Vec<(f64, f64)>,
}

impl fmt::Debug for Immersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Immersion")
            .field("name", &self.name)
            .field("domain_dim", &self.domain_dim)
            .field("ambient", &self.ambient.label())
            .field("analytic_jacobian", &self.jacobian.is_some())
            .field("param_box", &self.param_box)
            .finish()
    }
}

impl Immersion {
    pub fn new(
        name: impl Into<String>,
        ambient: Arc<AmbientSpace>,
        param_box: Vec<(f64, f64)>,
        map: ParamMap,
    ) -> Self {
        Self { name: name.into(), domain_dim: param_box.len(), ambient, map, jacobian: None, param_box }
    }

    /// Attach an analytic Jacobian (columns are `∂f/∂u_i`).
    pub fn with_jacobian(mut self, jacobian: ParamJacobian) -> Self {
        self.jacobian = Some(jacobian);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }

    pub fn ambient_arc(&self) -> Arc<AmbientSpace> {
        Arc::clone(&self.ambient)
    }

    pub fn param_box(&self) -> &[(f64, f64)] {
        &self.param_box
    }

    pub fn has_analytic_jacobian(&self) -> bool {
        self.jacobian.is_some()
    }

    pub fn point(&self, u: &[f64]) -> Vector {
        (self.map)(u)
    }

    fn check_params(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.domain_dim {
            return Err(Error::DimensionMismatch { expected: self.domain_dim, found: u.len() });
        }
        Ok(())
    }

    /// Jacobian columns; central differences with step `h` when no analytic
    /// Jacobian is attached.
    pub fn jacobian_at(&self, u: &[f64], h: f64) -> Matrix {
        if let Some(j) = &self.jacobian {
            return j(u);
        }
        let d = self.ambient.coord_dim();
        let mut out = Matrix::zeros(d, self.domain_dim);
        let mut w = u.to_vec();
        for i in 0..self.domain_dim {
            w[i] = u[i] + h;
            let fp = self.point(&w);
            w[i] = u[i] - h;
            let fm = self.point(&w);
            w[i] = u[i];
            out.set_column(i, &((fp - fm) / (2.0 * h)));
        }
        out
    }

    pub fn tangent_fields(&self, u: &[f64], h: f64) -> Vec<Vector> {
        let j = self.jacobian_at(u, h);
        (0..self.domain_dim).map(|i| j.column(i).into_owned()).collect()
    }

    /// Uniform sample from the parameter box.
    pub fn sample_params<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        self.param_box.iter().map(|&(a, b)| rng.gen_range(a..b)).collect()
    }

    /// Midpoint of the parameter box.
    pub fn center(&self) -> Vec<f64> {
        self.param_box.iter().map(|&(a, b)| 0.5 * (a + b)).collect()
    }
}

fn shifted(u: &[f64], i: usize, h: f64) -> Vec<f64> {
    let mut w = u.to_vec();
    w[i] += h;
    w
}

/// Central difference of a parameter field along `u_i`.
fn diff(field: &Field<'_>, u: &[f64], i: usize, h: f64) -> Vector {
    (field(&shifted(u, i, h)) - field(&shifted(u, i, -h))) / (2.0 * h)
}

/// Tangent and normal data at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointFrame {
    pub u: Vec<f64>,
    pub point: Vector,
    pub tangent: Vec<Vector>,
    /// Induced metric `g_ij`.
    pub gram: Matrix,
    pub gram_inv: Matrix,
    /// Basis of `T_pM⊥` inside `T_pM̄`.
    pub normal: Vec<Vector>,
    pub normal_gram: Matrix,
}

impl PointFrame {
    pub fn dim(&self) -> usize {
        self.tangent.len()
    }

    /// Coefficients of the tangential part of `v` in the basis `X_i`.
    pub fn tangential_coeffs(&self, space: &AmbientSpace, v: &Vector) -> Vector {
        let g = space.metric();
        let rhs = Vector::from_iterator(self.dim(), self.tangent.iter().map(|x| g.dot(x, v)));
        &self.gram_inv * rhs
    }

    pub fn tangential(&self, space: &AmbientSpace, v: &Vector) -> Vector {
        self.combine(&self.tangential_coeffs(space, v))
    }

    /// Part of `v` normal to `M` inside `T_pM̄`.
    pub fn normal_part(&self, space: &AmbientSpace, v: &Vector) -> Vector {
        space.tangent_part(&self.point, v) - self.tangential(space, v)
    }

    /// `Σ c_i X_i`.
    pub fn combine(&self, c: &Vector) -> Vector {
        let mut out = Vector::zeros(self.point.len());
        for (ci, x) in c.iter().zip(&self.tangent) {
            out.axpy(*ci, x, 1.0);
        }
        out
    }

    /// `g(a, b)` for coefficient vectors.
    pub fn g(&self, a: &Vector, b: &Vector) -> f64 {
        (a.transpose() * &self.gram * b)[(0, 0)]
    }
}

/// Tangential/normal split without the validation `frame_at` performs; used at
/// shifted points inside finite-difference stencils.
fn light_frame(imm: &Immersion, u: &[f64], h: f64) -> Option<(Vector, Vec<Vector>, Matrix)> {
    let point = imm.point(u);
    let tangent = imm.tangent_fields(u, h);
    let gram = imm.ambient.metric().gram(&tangent);
    let inv = gram.try_inverse()?;
    Some((point, tangent, inv))
}

fn normal_part_light(space: &AmbientSpace, lf: &(Vector, Vec<Vector>, Matrix), v: &Vector) -> Vector {
    let (p, xs, inv) = lf;
    let g = space.metric();
    let rhs = Vector::from_iterator(xs.len(), xs.iter().map(|x| g.dot(x, v)));
    let c = inv * rhs;
    let mut out = space.tangent_part(p, v);
    for (ci, x) in c.iter().zip(xs) {
        out.axpy(-ci, x, 1.0);
    }
    out
}

pub fn frame_at(imm: &Immersion, u: &[f64], cfg: &Config) -> Result<PointFrame> {
    imm.check_params(u)?;
    let space = imm.ambient();
    let point = imm.point(u);
    space.check_point(&point)?;
    let tangent = imm.tangent_fields(u, cfg.fd_step1);
    let m = tangent.len();
    let r = rank(&tangent);
    if r < m {
        return Err(Error::RankDeficientJacobian { rank: r, expected: m });
    }
    let g = space.metric();
    let gram = g.gram(&tangent);
    let det = gram.determinant();
    if det.abs() < cfg.tol_alg() {
        return Err(Error::DegenerateInducedMetric { det: det.abs() });
    }
    let gram_inv = gram.clone().try_inverse().ok_or(Error::DegenerateInducedMetric { det: det.abs() })?;
    let mut span = tangent.clone();
    if let Some(nu) = space.sphere_normal(&point) {
        span.push(nu);
    }
    let normal = orthogonal_complement(&Subspace::new(span, g)?, g).basis().to_vec();
    let normal_gram = g.gram(&normal);
    Ok(PointFrame { u: u.to_vec(), point, tangent, gram, gram_inv, normal, normal_gram })
}

/// `∂_i X_j` as coordinate vectors: differences of the analytic Jacobian, or
/// second differences of the map.
fn coordinate_hessian(imm: &Immersion, u: &[f64], h: f64) -> Vec<Vec<Vector>> {
    let m = imm.domain_dim;
    let mut out = vec![vec![Vector::zeros(imm.ambient.coord_dim()); m]; m];
    if let Some(jac) = &imm.jacobian {
        for i in 0..m {
            let jp = jac(&shifted(u, i, h));
            let jm = jac(&shifted(u, i, -h));
            let dj = (jp - jm) / (2.0 * h);
            for (j, slot) in out[i].iter_mut().enumerate() {
                *slot = dj.column(j).into_owned();
            }
        }
        return out;
    }
    let f0 = imm.point(u);
    for i in 0..m {
        for j in i..m {
            let v = if i == j {
                (imm.point(&shifted(u, i, h)) - &f0 * 2.0 + imm.point(&shifted(u, i, -h))) / (h * h)
            } else {
                let pp = imm.point(&shifted(&shifted(u, i, h), j, h));
                let pm = imm.point(&shifted(&shifted(u, i, h), j, -h));
                let mp = imm.point(&shifted(&shifted(u, i, -h), j, h));
                let mm = imm.point(&shifted(&shifted(u, i, -h), j, -h));
                (pp - pm - mp + mm) / (4.0 * h * h)
            };
            out[i][j] = v.clone();
            out[j][i] = v;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecondFundamentalForm {
    /// `h(X_i, X_j)`, symmetrized.
    pub h: Vec<Vec<Vector>>,
    /// `∇̄_{X_i} X_j`.
    pub ambient_derivative: Vec<Vec<Vector>>,
    /// `max ‖h_ij − h_ji‖` before symmetrization.
    pub asymmetry: f64,
}

impl SecondFundamentalForm {
    /// `max ‖h_ij‖∞`.
    pub fn max_norm(&self) -> f64 {
        self.h.iter().flatten().map(|v| v.amax()).fold(0.0, f64::max)
    }
}

pub fn second_fundamental_form(imm: &Immersion, frame: &PointFrame, cfg: &Config) -> SecondFundamentalForm {
    let space = imm.ambient();
    let m = frame.dim();
    let hess = coordinate_hessian(imm, &frame.u, cfg.fd_step2);
    let amb: Vec<Vec<Vector>> =
        hess.iter().map(|row| row.iter().map(|v| space.tangent_part(&frame.point, v)).collect()).collect();
    let raw: Vec<Vec<Vector>> =
        amb.iter().map(|row| row.iter().map(|v| frame.normal_part(space, v)).collect()).collect();
    let mut asym: f64 = 0.0;
    let mut h = raw.clone();
    for i in 0..m {
        for j in 0..m {
            asym = asym.max((&raw[i][j] - &raw[j][i]).amax());
            h[i][j] = (&raw[i][j] + &raw[j][i]) * 0.5;
        }
    }
    SecondFundamentalForm { h, ambient_derivative: amb, asymmetry: asym }
}

/// `A_N` as a matrix on the coordinate basis: `A_N X_k = Σ_j A[j,k] X_j`,
/// from `g(A_N X_i, X_k) = ḡ(h_ik, N)`.
pub fn shape_operator(space: &AmbientSpace, frame: &PointFrame, sff: &SecondFundamentalForm, n: &Vector) -> Matrix {
    let m = frame.dim();
    let g = space.metric();
    let b = Matrix::from_fn(m, m, |i, k| g.dot(&sff.h[i][k], n));
    &frame.gram_inv * b
}

/// `max |ḡ(h_ij, N) − g(A_N X_i, X_j)|` over the normal basis.
pub fn duality_residual(space: &AmbientSpace, frame: &PointFrame, sff: &SecondFundamentalForm) -> f64 {
    let m = frame.dim();
    let g = space.metric();
    let mut r: f64 = 0.0;
    for n in &frame.normal {
        let a = shape_operator(space, frame, sff, n);
        let ga = &frame.gram * &a;
        for i in 0..m {
            for j in 0..m {
                r = r.max((g.dot(&sff.h[i][j], n) - ga[(j, i)]).abs());
            }
        }
    }
    r
}

/// Weingarten cross-check: `max_k ‖A_N X_k + tan_M(∇̄_{X_k} N)‖∞` for a normal
/// field `N`.
pub fn weingarten_residual(
    imm: &Immersion,
    frame: &PointFrame,
    sff: &SecondFundamentalForm,
    field: &Field<'_>,
    cfg: &Config,
) -> f64 {
    let space = imm.ambient();
    let n0 = field(&frame.u);
    let a = shape_operator(space, frame, sff, &n0);
    (0..frame.dim())
        .map(|k| {
            let dn = space.tangent_part(&frame.point, &diff(field, &frame.u, k, cfg.fd_step2));
            let lhs = frame.combine(&a.column(k).into_owned());
            (lhs + frame.tangential(space, &dn)).amax()
        })
        .fold(0.0, f64::max)
}

fn check_normal(imm: &Immersion, frame: &PointFrame, field: &Field<'_>, cfg: &Config) -> Result<()> {
    let n0 = field(&frame.u);
    let t = frame.tangential(imm.ambient(), &n0).amax();
    if t >= cfg.tol_d1() {
        return Err(Error::NotNormal { residual: t });
    }
    Ok(())
}

fn nabla_perp_light(imm: &Immersion, u: &[f64], k: usize, field: &Field<'_>, h: f64) -> Vector {
    let d = diff(field, u, k, h);
    match light_frame(imm, u, h) {
        Some(lf) => normal_part_light(imm.ambient(), &lf, &d),
        None => Vector::from_element(d.len(), f64::NAN),
    }
}

/// `∇⊥_{X_k} N`: normal part of the derivative of the field along `u_k`.
pub fn normal_connection(
    imm: &Immersion,
    frame: &PointFrame,
    k: usize,
    field: &Field<'_>,
    cfg: &Config,
) -> Result<Vector> {
    check_normal(imm, frame, field, cfg)?;
    let d = diff(field, &frame.u, k, cfg.fd_step1);
    Ok(frame.normal_part(imm.ambient(), &d))
}

/// `R⊥(X_i, X_j) N = ∇⊥_i ∇⊥_j N − ∇⊥_j ∇⊥_i N` by nested differences.
pub fn normal_curvature(
    imm: &Immersion,
    frame: &PointFrame,
    i: usize,
    j: usize,
    field: &Field<'_>,
    cfg: &Config,
) -> Result<Vector> {
    check_normal(imm, frame, field, cfg)?;
    if i == j {
        return Ok(Vector::zeros(frame.point.len()));
    }
    let h = cfg.fd_step2;
    let inner_j = |v: &[f64]| nabla_perp_light(imm, v, j, field, h);
    let inner_i = |v: &[f64]| nabla_perp_light(imm, v, i, field, h);
    let a = nabla_perp_light(imm, &frame.u, i, &inner_j, h);
    let b = nabla_perp_light(imm, &frame.u, j, &inner_i, h);
    Ok(a - b)
}

/// Right-hand side of the Ricci equation,
/// `ḡ(R̄(X_i,X_j)N, N′) + g([A_N, A_N′] X_i, X_j)`.
pub fn ricci_equation_rhs(
    space: &AmbientSpace,
    frame: &PointFrame,
    sff: &SecondFundamentalForm,
    i: usize,
    j: usize,
    n: &Vector,
    n2: &Vector,
) -> Result<f64> {
    let g = space.metric();
    let rbar = space.ambient_riemann(&frame.point, &frame.tangent[i], &frame.tangent[j], n)?;
    let a = shape_operator(space, frame, sff, n);
    let b = shape_operator(space, frame, sff, n2);
    let comm = &a * &b - &b * &a;
    let gc = &frame.gram * comm;
    Ok(g.dot(&rbar, n2) + gc[(j, i)])
}

/// `max |ḡ(R⊥(X_i,X_j)N, N_b) − rhs|` over coordinate pairs and the normal basis.
pub fn ricci_oracle_discrepancy(
    imm: &Immersion,
    frame: &PointFrame,
    sff: &SecondFundamentalForm,
    field: &Field<'_>,
    cfg: &Config,
) -> Result<f64> {
    let space = imm.ambient();
    let g = space.metric();
    let n0 = field(&frame.u);
    let m = frame.dim();
    let mut worst: f64 = 0.0;
    for i in 0..m {
        for j in (i + 1)..m {
            let r = normal_curvature(imm, frame, i, j, field, cfg)?;
            for nb in &frame.normal {
                let rhs = ricci_equation_rhs(space, frame, sff, i, j, &n0, nb)?;
                worst = worst.max((g.dot(&r, nb) - rhs).abs());
            }
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntrinsicCurvature {
    /// `R_ijkl = g(R(X_i,X_j)X_k, X_l)`, row-major `m⁴`.
    pub riemann: Vec<f64>,
    /// `(i, j, K(X_i, X_j))` for non-degenerate coordinate planes.
    pub sectional: Vec<(usize, usize, f64)>,
    pub max_abs: f64,
    pub is_flat: bool,
}

impl IntrinsicCurvature {
    pub fn component(&self, m: usize, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.riemann[((i * m + j) * m + k) * m + l]
    }
}

fn induced_gram(imm: &Immersion, u: &[f64], h: f64) -> Matrix {
    imm.ambient.metric().gram(&imm.tangent_fields(u, h))
}

/// `Γ^k_ij`, indexed `[k][i][j]`, from differences of the induced metric.
pub fn christoffel(imm: &Immersion, u: &[f64], cfg: &Config) -> Vec<Matrix> {
    let m = imm.domain_dim;
    let h = cfg.fd_step2;
    let g = induced_gram(imm, u, cfg.fd_step1);
    let ginv = g.try_inverse().unwrap_or_else(|| Matrix::from_element(m, m, f64::NAN));
    let dg: Vec<Matrix> = (0..m)
        .map(|l| (induced_gram(imm, &shifted(u, l, h), cfg.fd_step1) - induced_gram(imm, &shifted(u, l, -h), cfg.fd_step1)) / (2.0 * h))
        .collect();
    (0..m)
        .map(|k| {
            Matrix::from_fn(m, m, |i, j| {
                0.5 * (0..m)
                    .map(|l| ginv[(k, l)] * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]))
                    .sum::<f64>()
            })
        })
        .collect()
}

pub fn intrinsic_curvature(imm: &Immersion, frame: &PointFrame, cfg: &Config) -> Result<IntrinsicCurvature> {
    let m = frame.dim();
    let h = cfg.fd_step2;
    let u = &frame.u;
    let gam = christoffel(imm, u, cfg);
    let dgam: Vec<Vec<Matrix>> = (0..m)
        .map(|a| {
            let p = christoffel(imm, &shifted(u, a, h), cfg);
            let q = christoffel(imm, &shifted(u, a, -h), cfg);
            p.iter().zip(&q).map(|(x, y)| (x - y) / (2.0 * h)).collect()
        })
        .collect();
    // R^l_ijk with R(∂_i,∂_j)∂_k = R^l_ijk ∂_l
    let up = |l: usize, i: usize, j: usize, k: usize| {
        let mut r = dgam[i][l][(j, k)] - dgam[j][l][(i, k)];
        for s in 0..m {
            r += gam[l][(i, s)] * gam[s][(j, k)] - gam[l][(j, s)] * gam[s][(i, k)];
        }
        r
    };
    let gm = &frame.gram;
    let mut riemann = vec![0.0; m * m * m * m];
    let mut max_abs: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    let v: f64 = (0..m).map(|s| up(s, i, j, k) * gm[(s, l)]).sum();
                    riemann[((i * m + j) * m + k) * m + l] = v;
                    max_abs = max_abs.max(v.abs());
                }
            }
        }
    }
    let mut sectional = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            let den = gm[(i, i)] * gm[(j, j)] - gm[(i, j)] * gm[(i, j)];
            if den.abs() < cfg.tol_alg() {
                continue;
            }
            sectional.push((i, j, riemann[((i * m + j) * m + j) * m + i] / den));
        }
    }
    Ok(IntrinsicCurvature { riemann, sectional, max_abs, is_flat: max_abs < cfg.tol_d2() })
}

/// Sectional curvature of the plane `X_i ∧ X_j`.
pub fn sectional_curvature(curv: &IntrinsicCurvature, frame: &PointFrame, i: usize, j: usize) -> Result<f64> {
    let m = frame.dim();
    let gm = &frame.gram;
    let den = gm[(i, i)] * gm[(j, j)] - gm[(i, j)] * gm[(i, j)];
    if den.abs() < crate::linalg::TOL_ALG {
        return Err(Error::DegeneratePlane { i, j });
    }
    Ok(curv.component(m, i, j, j, i) / den)
}

/// `max ‖∇̄_{X_i} X_j − Σ_k Γ^k_ij X_k − h_ij‖∞` with intrinsic `Γ`.
pub fn gauss_residual(imm: &Immersion, frame: &PointFrame, sff: &SecondFundamentalForm, cfg: &Config) -> f64 {
    let gam = christoffel(imm, &frame.u, cfg);
    let m = frame.dim();
    let mut r: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            let c = Vector::from_fn(m, |k, _| gam[k][(i, j)]);
            let rec = frame.combine(&c) + &sff.h[i][j];
            r = r.max((&sff.ambient_derivative[i][j] - rec).amax());
        }
    }
    r
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanCurvature {
    pub h: Vector,
    pub norm: f64,
    /// `max ‖h_ij − g_ij H‖∞`.
    pub umbilical_residual: f64,
}

pub fn mean_curvature(frame: &PointFrame, sff: &SecondFundamentalForm) -> MeanCurvature {
    let m = frame.dim();
    let mut hv = Vector::zeros(frame.point.len());
    for i in 0..m {
        for j in 0..m {
            hv.axpy(frame.gram_inv[(i, j)], &sff.h[i][j], 1.0);
        }
    }
    hv /= m as f64;
    let mut umb: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            umb = umb.max((&sff.h[i][j] - &hv * frame.gram[(i, j)]).amax());
        }
    }
    MeanCurvature { norm: hv.amax(), h: hv, umbilical_residual: umb }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubmanifoldKind {
    Invariant,
    AntiInvariant,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum XiTangency {
    Tangent,
    Normal,
    Oblique,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub kind: SubmanifoldKind,
    pub xi: [XiTangency; 3],
    pub dim_xi_t: usize,
    pub dim_xi_n: usize,
    /// `max ‖nor(φ_α X_i)‖∞`.
    pub invariant_residual: f64,
    /// `max ‖tan(φ_α X_i)‖∞`.
    pub anti_invariant_residual: f64,
    pub xi_tangential: [Vector; 3],
    pub xi_normal: [Vector; 3],
    /// `max ‖ξ_α − ξ_α^t − ξ_α^n‖∞`.
    pub decomposition_residual: f64,
}

pub fn classify(imm: &Immersion, frame: &PointFrame, cfg: &Config) -> Result<Classification> {
    let space = imm.ambient();
    let st = space.require_structure()?;
    let p = &frame.point;
    let tol = cfg.tol_alg();
    let mut inv: f64 = 0.0;
    let mut anti: f64 = 0.0;
    for a in 0..3 {
        for x in &frame.tangent {
            let v = st.phi(a, p, x);
            let t = frame.tangential(space, &v);
            inv = inv.max((&v - &t).amax());
            anti = anti.max(t.amax());
        }
    }
    let kind = if inv < tol {
        SubmanifoldKind::Invariant
    } else if anti < tol {
        SubmanifoldKind::AntiInvariant
    } else {
        SubmanifoldKind::Neither
    };
    let mut xt: [Vector; 3] = std::array::from_fn(|_| Vector::zeros(p.len()));
    let mut xn = xt.clone();
    let mut tang = [XiTangency::Oblique; 3];
    let mut dec: f64 = 0.0;
    for a in 0..3 {
        let xi = st.xi(a, p);
        xt[a] = frame.tangential(space, &xi);
        xn[a] = frame.normal_part(space, &xi);
        dec = dec.max((&xi - &xt[a] - &xn[a]).amax());
        tang[a] = if xn[a].amax() < tol {
            XiTangency::Tangent
        } else if xt[a].amax() < tol {
            XiTangency::Normal
        } else {
            XiTangency::Oblique
        };
    }
    let nonzero = |vs: &[Vector; 3]| vs.iter().filter(|v| v.amax() >= tol).cloned().collect::<Vec<_>>();
    Ok(Classification {
        kind,
        xi: tang,
        dim_xi_t: rank(&nonzero(&xt)),
        dim_xi_n: rank(&nonzero(&xn)),
        invariant_residual: inv,
        anti_invariant_residual: anti,
        xi_tangential: xt,
        xi_normal: xn,
        decomposition_residual: dec,
    })
}

/// `u ↦ ξ_α(f(u))`.
pub fn xi_field(imm: &Immersion, alpha: usize) -> Result<Box<Field<'_>>> {
    let st = imm.ambient().require_structure()?;
    Ok(Box::new(move |u: &[f64]| st.xi(alpha, &imm.point(u))))
}

/// `u ↦ φ_α X_k(u)`.
pub fn phi_coordinate_field<'a>(imm: &'a Immersion, alpha: usize, k: usize, cfg: &Config) -> Result<Box<Field<'a>>> {
    let st = imm.ambient().require_structure()?;
    let h = cfg.fd_step1;
    Ok(Box::new(move |u: &[f64]| {
        let x = imm.jacobian_at(u, h).column(k).into_owned();
        st.phi(alpha, &imm.point(u), &x)
    }))
}

/// Normal projection of a constant coordinate vector, a smooth normal field.
pub fn projected_normal_field<'a>(imm: &'a Immersion, c: Vector, cfg: &Config) -> Box<Field<'a>> {
    let h = cfg.fd_step1;
    Box::new(move |u: &[f64]| match light_frame(imm, u, h) {
        Some(lf) => normal_part_light(imm.ambient(), &lf, &c),
        None => Vector::from_element(c.len(), f64::NAN),
    })
}

/// Induced structure conditions on a submanifold tangent to all `ξ_α` and
/// invariant under all `φ_α`, with the Levi-Civita connection of `M`:
/// returns `(max ‖(∇_X φ_α)Y‖, max ‖(∇_X φ_α)Y − τ_α[g(X,Y)ξ_α − ε_α η_α(Y)X]‖)`.
pub fn induced_structure_residuals(imm: &Immersion, frame: &PointFrame, cfg: &Config) -> Result<(f64, f64)> {
    let space = imm.ambient();
    let st = space.require_structure()?;
    let g = space.metric();
    let p = &frame.point;
    let h = cfg.fd_step1;
    let m = frame.dim();
    let mut r9: f64 = 0.0;
    let mut r10: f64 = 0.0;
    for a in 0..3 {
        for j in 0..m {
            let phi_xj = |u: &[f64]| st.phi(a, &imm.point(u), &imm.jacobian_at(u, h).column(j).into_owned());
            let xj = |u: &[f64]| imm.jacobian_at(u, h).column(j).into_owned();
            for i in 0..m {
                let d_phi = frame.tangential(space, &diff(&phi_xj, &frame.u, i, h));
                let d_x = frame.tangential(space, &diff(&xj, &frame.u, i, h));
                let lhs = d_phi - st.phi(a, p, &d_x);
                let (xi_, xj_) = (&frame.tangent[i], &frame.tangent[j]);
                let rhs = (st.xi(a, p) * g.dot(xi_, xj_) - xi_ * (st.eps(a) * st.eta(a, p, xj_))) * st.tau(a);
                r9 = r9.max(lhs.amax());
                r10 = r10.max((lhs - rhs).amax());
            }
        }
    }
    Ok((r9, r10))
}

/// Shape-operator relation for submanifolds normal to `ξ_α`:
/// `max |ḡ(φ_α X_i, X_j) − ε_α g(A_{ξ_α} X_i, X_j)|` over the `α` with `ξ_α` normal.
pub fn shape_xi_relation(imm: &Immersion, frame: &PointFrame, sff: &SecondFundamentalForm, cfg: &Config) -> Result<f64> {
    let space = imm.ambient();
    let st = space.require_structure()?;
    let g = space.metric();
    let p = &frame.point;
    let m = frame.dim();
    let mut r: f64 = 0.0;
    for a in 0..3 {
        let xi = st.xi(a, p);
        if frame.tangential(space, &xi).amax() >= cfg.tol_alg() {
            continue;
        }
        let ga = &frame.gram * shape_operator(space, frame, sff, &xi);
        for i in 0..m {
            for j in 0..m {
                let lhs = g.dot(&st.phi(a, p, &frame.tangent[i]), &frame.tangent[j]);
                r = r.max((lhs - st.eps(a) * ga[(j, i)]).abs());
            }
        }
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BracketMode {
    /// `ḡ([ξ_α, ξ_β], N)` for `N ∈ D`.
    XiXi,
    /// `ḡ([X, φ_α X], ξ_α)` against `2 ε_α τ_α g(X, X)`.
    DPhi,
    /// `ḡ([X, Y], ξ_α)` for `X, Y ∈ D`.
    DD,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketProbe {
    pub mode: BracketMode,
    /// Measured bracket pairings, one per `α` (per pair for `XiXi`).
    pub values: Vec<f64>,
    /// Predicted values; zero except in `DPhi` mode.
    pub expected: Vec<f64>,
    /// `max |value − expected|`.
    pub residual: f64,
}

const MAX_DIRECTION_SAMPLES: usize = 100;

/// Projection onto `D = TM ∩ span{ξ_α}⊥`, assuming all `ξ_α` tangent.
fn project_d(imm: &Immersion, u: &[f64], v: &Vector, h: f64) -> Vector {
    let space = imm.ambient();
    let st = space.structure().expect("checked by caller");
    let g = space.metric();
    let p = imm.point(u);
    let Some(lf) = light_frame(imm, u, h) else {
        return Vector::from_element(v.len(), f64::NAN);
    };
    let mut t = space.tangent_part(&p, v) - normal_part_light(space, &lf, v);
    for b in 0..3 {
        let xi = st.xi(b, &p);
        t.axpy(-st.eps(b) * g.dot(v, &xi), &xi, 1.0);
    }
    t
}

/// Lie bracket of two fields tangent to `M`: `Σ v^k ∂_k W − Σ w^k ∂_k V`.
fn bracket(imm: &Immersion, frame: &PointFrame, v: &Field<'_>, w: &Field<'_>, h: f64) -> Vector {
    let space = imm.ambient();
    let cv = frame.tangential_coeffs(space, &v(&frame.u));
    let cw = frame.tangential_coeffs(space, &w(&frame.u));
    let mut out = Vector::zeros(frame.point.len());
    for k in 0..frame.dim() {
        out += diff(w, &frame.u, k, h) * cv[k] - diff(v, &frame.u, k, h) * cw[k];
    }
    out
}

/// Probe integrability of the `ξ`-distribution and of `D` on a submanifold
/// tangent to all `ξ_α`. Fields are extended by projecting constant ambient
/// vectors onto the distribution along `M`.
pub fn distribution_bracket_probe(
    imm: &Immersion,
    frame: &PointFrame,
    mode: BracketMode,
    seed: u64,
    cfg: &Config,
) -> Result<BracketProbe> {
    let space = imm.ambient();
    let st = space.require_structure()?;
    let g = space.metric();
    let h = cfg.fd_step1;
    for a in 0..3 {
        let xi = st.xi(a, &frame.point);
        let n = frame.normal_part(space, &xi).amax();
        if n >= cfg.tol_alg() {
            return Err(Error::InvalidArgument(format!(
                "{}: ξ{} is not tangent (normal part {n:e})",
                imm.name(),
                a + 1
            )));
        }
    }
    let mut rng = crate::exec::sample_rng(seed, 0xB7, 0);
    let mut pick = |min_norm: f64| -> Result<Vector> {
        for _ in 0..MAX_DIRECTION_SAMPLES {
            let c = Vector::from_fn(frame.point.len(), |_, _| rng.gen_range(-1.0..1.0));
            let x = project_d(imm, &frame.u, &c, h);
            if x.amax() > 1e-3 && g.dot(&x, &x).abs() > min_norm {
                return Ok(c);
            }
        }
        Err(Error::NullDirection { attempts: MAX_DIRECTION_SAMPLES })
    };
    let (mut values, mut expected) = (Vec::new(), Vec::new());
    match mode {
        BracketMode::XiXi => {
            let c = pick(0.0)?;
            let n = project_d(imm, &frame.u, &c, h);
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                let fa = |u: &[f64]| st.xi(a, &imm.point(u));
                let fb = |u: &[f64]| st.xi(b, &imm.point(u));
                values.push(g.dot(&bracket(imm, frame, &fa, &fb, h), &n));
                expected.push(0.0);
            }
        }
        BracketMode::DPhi => {
            let c = pick(0.1)?;
            let x = |u: &[f64]| project_d(imm, u, &c, h);
            let x0 = x(&frame.u);
            for a in 0..3 {
                let phx = |u: &[f64]| st.phi(a, &imm.point(u), &x(u));
                let br = bracket(imm, frame, &x, &phx, h);
                values.push(g.dot(&br, &st.xi(a, &frame.point)));
                expected.push(2.0 * st.eps(a) * st.tau(a) * g.dot(&x0, &x0));
            }
        }
        BracketMode::DD => {
            let c1 = pick(0.0)?;
            let c2 = pick(0.0)?;
            let x = |u: &[f64]| project_d(imm, u, &c1, h);
            let y = |u: &[f64]| project_d(imm, u, &c2, h);
            let br = bracket(imm, frame, &x, &y, h);
            for a in 0..3 {
                values.push(g.dot(&br, &st.xi(a, &frame.point)));
                expected.push(0.0);
            }
        }
    }
    let residual = values.iter().zip(&expected).map(|(v, e)| (v - e).abs()).fold(0.0, f64::max);
    Ok(BracketProbe { mode, values, expected, residual })
}
