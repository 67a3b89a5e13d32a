//! Ambient spaces carrying metric mixed 3-structures.
//!
//! Three families are provided:
//!
//! * the flat para-hyperhermitian space `R^{4n+4}` with signs `(−^{2n+2}, +^{2n+2})`
//!   and the explicit para-hypercomplex triple `J1, J2, J3`;
//! * the pseudo-sphere `{x : ḡ(x, x) = c}`, `c = ±1`, inside that space, with the
//!   structure induced by the triple;
//! * the flat product `R^3_t × R^{4n}_y` with a constant mixed 3-structure
//!   (mixed 3-cosymplectic).
//!
//! Structure vector fields, their causal characters `ε_α` and all structure
//! tensors are evaluated pointwise; `ε_α` is always computed from the metric,
//! never assumed.
//!
//! On the pseudo-sphere of level `c` the structure is
//!
//! ```text
//! ξ_α(x)   = −c J_α x
//! φ_α X    = τ_α (J_α X − c ḡ(J_α X, x) x)       (τ_α times the tangential part)
//! η_α(X)   = ε_α ḡ(X, ξ_α)
//! ```
//!
//! which satisfies the algebraic axioms together with the Sasakian condition
//! `(∇̄_X φ_α)Y = τ_α[ḡ(X,Y)ξ_α − ε_α η_α(Y) X]` for both levels.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{
    orthogonal_complement, pseudo_orthonormalize, unit, Matrix, SignatureMetric, Subspace,
    Vector, TOL_ALG,
};

/// `τ_α`: two paracontact structures and one contact structure.
pub const TAU: [f64; 3] = [-1.0, -1.0, 1.0];

/// Even permutations `(α, β, γ)` of `(1, 2, 3)`, 0-based.
pub const EVEN_PERMUTATIONS: [(usize, usize, usize); 3] = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];

/// The para-hypercomplex triple on `R^{4n+4}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParaHypercomplexTriple {
    pub n: usize,
    pub j: [Matrix; 3],
}

impl ParaHypercomplexTriple {
    pub fn dim(&self) -> usize {
        4 * self.n + 4
    }

    pub fn apply(&self, alpha: usize, v: &Vector) -> Vector {
        &self.j[alpha] * v
    }

    /// Max entrywise residual of `J1² = J2² = Id`, `J3² = −Id`,
    /// `J1J2 = −J2J1 = J3` and the compatibility `ḡ(J_αX, J_αY) = τ_α ḡ(X, Y)`.
    pub fn residual(&self, g: &SignatureMetric) -> f64 {
        let d = self.dim();
        let id = Matrix::identity(d, d);
        let gm = g.as_matrix();
        let [j1, j2, j3] = &self.j;
        let mut r: f64 = 0.0;
        r = r.max((j1 * j1 - &id).amax());
        r = r.max((j2 * j2 - &id).amax());
        r = r.max((j3 * j3 + &id).amax());
        r = r.max((j1 * j2 - j3).amax());
        r = r.max((j2 * j1 + j3).amax());
        for (a, j) in self.j.iter().enumerate() {
            r = r.max((j.transpose() * &gm * j - &gm * TAU[a]).amax());
        }
        r
    }
}

/// Builds `J1, J2, J3` on `R^{4n+4}`:
/// `J1 x = (−x_{4n+3}, x_{4n+4}, …, −x_1, x_2)`, `J2` reverses the coordinates,
/// `J3 x = (−x_2, x_1, −x_4, x_3, …)`.
pub fn make_para_hypercomplex(n: usize) -> ParaHypercomplexTriple {
    let d = 4 * n + 4;
    let mut j1 = DMatrix::zeros(d, d);
    let mut j2 = DMatrix::zeros(d, d);
    let mut j3 = DMatrix::zeros(d, d);
    for i in 0..d {
        if i % 2 == 0 {
            j1[(i, d - 2 - i)] = -1.0;
            j3[(i, i + 1)] = -1.0;
        } else {
            j1[(i, d - i)] = 1.0;
            j3[(i, i - 1)] = 1.0;
        }
        j2[(i, d - 1 - i)] = 1.0;
    }
    ParaHypercomplexTriple { n, j: [j1, j2, j3] }
}

/// Level `c` of a pseudo-sphere `ḡ(x, x) = c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Positive,
    Negative,
}

impl Level {
    pub fn value(self) -> f64 {
        match self {
            Level::Positive => 1.0,
            Level::Negative => -1.0,
        }
    }

    pub fn from_sign(c: i32) -> Result<Self> {
        match c {
            1 => Ok(Level::Positive),
            -1 => Ok(Level::Negative),
            _ => Err(Error::InvalidArgument(format!("pseudo-sphere level must be ±1, got {c}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AmbientKind {
    FlatParaHyperhermitian,
    PseudoSphere,
    FlatMixedCosymplectic,
}

#[derive(Debug, Clone, PartialEq)]
enum StructureModel {
    Sphere { level: f64, triple: ParaHypercomplexTriple },
    Constant { phi: [Matrix; 3], xi: [Vector; 3] },
}

/// `(φ_α, ξ_α, η_α)` with constants `τ_α`, `ε_α`, evaluated pointwise.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedThreeStructure {
    tau: [f64; 3],
    eps: [f64; 3],
    metric: SignatureMetric,
    model: StructureModel,
}

impl MixedThreeStructure {
    fn new(metric: SignatureMetric, model: StructureModel, base_point: &Vector) -> Self {
        let mut s = Self { tau: TAU, eps: [0.0; 3], metric, model };
        for a in 0..3 {
            let xi = s.xi(a, base_point);
            s.eps[a] = s.metric.dot(&xi, &xi).signum();
        }
        s
    }

    pub fn tau(&self, alpha: usize) -> f64 {
        self.tau[alpha]
    }

    /// `ε_α = ḡ(ξ_α, ξ_α)`, computed at construction.
    pub fn eps(&self, alpha: usize) -> f64 {
        self.eps[alpha]
    }

    pub fn eps_all(&self) -> [f64; 3] {
        self.eps
    }

    pub fn xi(&self, alpha: usize, p: &Vector) -> Vector {
        match &self.model {
            StructureModel::Sphere { level, triple } => triple.apply(alpha, p) * (-level),
            StructureModel::Constant { xi, .. } => xi[alpha].clone(),
        }
    }

    pub fn phi(&self, alpha: usize, p: &Vector, x: &Vector) -> Vector {
        match &self.model {
            StructureModel::Sphere { triple, .. } => {
                let jx = triple.apply(alpha, x);
                let c = self.metric.dot(&jx, p) / self.metric.dot(p, p);
                (jx - p * c) * self.tau[alpha]
            }
            StructureModel::Constant { phi, .. } => &phi[alpha] * x,
        }
    }

    pub fn eta(&self, alpha: usize, p: &Vector, x: &Vector) -> f64 {
        self.eps[alpha] * self.metric.dot(x, &self.xi(alpha, p))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmbientSpace {
    kind: AmbientKind,
    n: usize,
    label: String,
    metric: SignatureMetric,
    level: Option<Level>,
    triple: ParaHypercomplexTriple,
    structure: Option<MixedThreeStructure>,
}

/// Seed used for the axiom sweep every structured constructor runs.
const CONSTRUCTION_SEED: u64 = 0x5EED;

impl AmbientSpace {
    pub fn kind(&self) -> AmbientKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn metric(&self) -> &SignatureMetric {
        &self.metric
    }

    pub fn level(&self) -> Option<Level> {
        self.level
    }

    /// The para-hypercomplex triple; on the cosymplectic product it acts on
    /// the `y`-block only.
    pub fn triple(&self) -> &ParaHypercomplexTriple {
        &self.triple
    }

    pub fn structure(&self) -> Option<&MixedThreeStructure> {
        self.structure.as_ref()
    }

    pub fn require_structure(&self) -> Result<&MixedThreeStructure> {
        self.structure.as_ref().ok_or_else(|| {
            Error::InvalidArgument(format!("{} carries no mixed 3-structure", self.label))
        })
    }

    /// Dimension of the flat coordinate space the points live in.
    pub fn coord_dim(&self) -> usize {
        self.metric.dim()
    }

    /// Dimension of the manifold itself.
    pub fn dim(&self) -> usize {
        match self.kind {
            AmbientKind::PseudoSphere => self.metric.dim() - 1,
            _ => self.metric.dim(),
        }
    }

    pub fn is_flat(&self) -> bool {
        self.kind != AmbientKind::PseudoSphere
    }

    pub fn constraint_residual(&self, p: &Vector) -> f64 {
        match self.level {
            Some(c) => (self.metric.dot(p, p) - c.value()).abs(),
            None => 0.0,
        }
    }

    pub fn check_point(&self, p: &Vector) -> Result<()> {
        self.metric.check_dim(p)?;
        let r = self.constraint_residual(p);
        if r >= TOL_ALG {
            return Err(Error::PointOffManifold { residual: r });
        }
        Ok(())
    }

    /// Unit normal of the pseudo-sphere in the flat space (the position vector).
    pub fn sphere_normal(&self, p: &Vector) -> Option<Vector> {
        self.level.map(|_| p.clone())
    }

    /// Orthogonal projection of a coordinate vector onto `T_p`.
    ///
    /// Also used slightly off the sphere, where it projects along the
    /// position vector of that point.
    pub fn tangent_part(&self, p: &Vector, v: &Vector) -> Vector {
        match self.level {
            Some(_) => {
                let c = self.metric.dot(v, p) / self.metric.dot(p, p);
                v - p * c
            }
            None => v.clone(),
        }
    }

    pub fn tangent_space(&self, p: &Vector) -> Subspace {
        match self.level {
            Some(_) => {
                let line = Subspace::new(vec![p.clone()], &self.metric)
                    .expect("point of a pseudo-sphere is non-zero");
                orthogonal_complement(&line, &self.metric)
            }
            None => Subspace::full(&self.metric),
        }
    }

    /// A distinguished point: the first positive axis for level +1, the first
    /// negative axis for level −1, the origin for flat spaces.
    pub fn base_point(&self) -> Vector {
        let d = self.coord_dim();
        match self.level {
            Some(Level::Positive) => {
                let i = self.metric.signs().iter().position(|s| *s > 0.0).unwrap();
                unit(d, i)
            }
            Some(Level::Negative) => {
                let i = self.metric.signs().iter().position(|s| *s < 0.0).unwrap();
                unit(d, i)
            }
            None => Vector::zeros(d),
        }
    }

    pub fn random_point<R: Rng>(&self, rng: &mut R) -> Vector {
        let d = self.coord_dim();
        loop {
            let x = Vector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0));
            match self.level {
                None => return x,
                Some(c) => {
                    let q = self.metric.dot(&x, &x) * c.value();
                    if q > 0.1 {
                        return x / q.sqrt();
                    }
                }
            }
        }
    }

    /// Coordinates i.i.d. uniform in [−1, 1], projected to `T_p`; not normalized.
    pub fn random_tangent<R: Rng>(&self, p: &Vector, rng: &mut R) -> Vector {
        let v = Vector::from_fn(self.coord_dim(), |_, _| rng.gen_range(-1.0..1.0));
        self.tangent_part(p, &v)
    }

    /// Levi-Civita derivative `∇̄_X Y` of a field given by a formula on the
    /// coordinate space: central difference of the flat derivative, projected
    /// to `T_p`.
    pub fn covariant_derivative<F>(&self, p: &Vector, x: &Vector, field: F, h: f64) -> Result<Vector>
    where
        F: Fn(&Vector) -> Vector,
    {
        self.check_point(p)?;
        self.metric.check_dim(x)?;
        Ok(self.covariant_derivative_unchecked(p, x, &field, h))
    }

    pub(crate) fn covariant_derivative_unchecked<F>(&self, p: &Vector, x: &Vector, field: &F, h: f64) -> Vector
    where
        F: Fn(&Vector) -> Vector + ?Sized,
    {
        let fwd = field(&(p + x * h));
        let bwd = field(&(p - x * h));
        let flat = (fwd - bwd) / (2.0 * h);
        self.tangent_part(p, &flat)
    }

    /// Space-form curvature `R̄(X,Y)Z = c(ḡ(Y,Z)X − ḡ(X,Z)Y)`, zero when flat.
    pub fn ambient_riemann(&self, p: &Vector, x: &Vector, y: &Vector, z: &Vector) -> Result<Vector> {
        self.check_point(p)?;
        Ok(match self.level {
            None => Vector::zeros(self.coord_dim()),
            Some(c) => {
                let g = &self.metric;
                (x * g.dot(y, z) - y * g.dot(x, z)) * c.value()
            }
        })
    }

    /// `R̄(X,Y)Z = ∇̄_X∇̄_Y Z − ∇̄_Y∇̄_X Z − ∇̄_{[X,Y]} Z` by nested central
    /// differences, with `X, Y, Z` extended as projections of constant vectors.
    pub fn ambient_riemann_fd(&self, p: &Vector, x: &Vector, y: &Vector, z: &Vector, h: f64) -> Result<Vector> {
        self.check_point(p)?;
        if self.is_flat() {
            // constant extensions in flat coordinates: every derivative vanishes
            return Ok(Vector::zeros(self.coord_dim()));
        }
        let ext = |v: &Vector| {
            let v = v.clone();
            move |q: &Vector| self.tangent_part(q, &v)
        };
        let (xf, yf, zf) = (ext(x), ext(y), ext(z));
        let nabla = |q: &Vector, a: &dyn Fn(&Vector) -> Vector, b: &dyn Fn(&Vector) -> Vector| {
            self.covariant_derivative_unchecked(q, &a(q), b, h)
        };
        let nab_y_z = |q: &Vector| nabla(q, &yf, &zf);
        let nab_x_z = |q: &Vector| nabla(q, &xf, &zf);
        let t1 = self.covariant_derivative_unchecked(p, &xf(p), &nab_y_z, h);
        let t2 = self.covariant_derivative_unchecked(p, &yf(p), &nab_x_z, h);
        let bracket = nabla(p, &xf, &yf) - nabla(p, &yf, &xf);
        let t3 = self.covariant_derivative_unchecked(p, &bracket, &zf, h);
        Ok(t1 - t2 - t3)
    }

    /// Ricci tensor on a pseudo-orthonormal tangent frame and the Einstein
    /// constant `λ = tr_g Ric / dim`.
    pub fn ricci_and_einstein(&self, p: &Vector, cfg: &Config) -> Result<EinsteinReport> {
        if self.kind != AmbientKind::PseudoSphere {
            return Err(Error::InvalidArgument("Einstein check requires a pseudo-sphere".into()));
        }
        self.check_point(p)?;
        let frame = pseudo_orthonormalize(&self.tangent_space(p), &self.metric)?;
        let m = frame.len();
        let signs: Vec<f64> = frame.iter().map(|f| f.1).collect();
        let mut ric = Matrix::zeros(m, m);
        let mut ric_oracle = Matrix::zeros(m, m);
        let mut fd_vs_oracle: f64 = 0.0;
        for a in 0..m {
            for b in a..m {
                let mut s = 0.0;
                let mut so = 0.0;
                for (u, si) in &frame {
                    let r = self.ambient_riemann_fd(p, u, &frame[a].0, &frame[b].0, cfg.fd_step2)?;
                    let ro = self.ambient_riemann(p, u, &frame[a].0, &frame[b].0)?;
                    fd_vs_oracle = fd_vs_oracle.max((&r - &ro).amax());
                    s += si * self.metric.dot(&r, u);
                    so += si * self.metric.dot(&ro, u);
                }
                ric[(a, b)] = s;
                ric[(b, a)] = s;
                ric_oracle[(a, b)] = so;
                ric_oracle[(b, a)] = so;
            }
        }
        let trace: f64 = (0..m).map(|a| ric[(a, a)] * signs[a]).sum();
        let lambda = trace / m as f64;
        let mut residual: f64 = 0.0;
        for a in 0..m {
            for b in 0..m {
                let target = if a == b { lambda * signs[a] } else { 0.0 };
                residual = residual.max((ric[(a, b)] - target).abs());
            }
        }
        let lambda_oracle = (0..m).map(|a| ric_oracle[(a, a)] * signs[a]).sum::<f64>() / m as f64;
        Ok(EinsteinReport { ricci: ric, frame_signs: signs, lambda, lambda_oracle, residual, fd_vs_oracle })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EinsteinReport {
    pub ricci: Matrix,
    pub frame_signs: Vec<f64>,
    /// From the finite-difference curvature.
    pub lambda: f64,
    /// From the space-form curvature formula.
    pub lambda_oracle: f64,
    /// `max |Ric − λ g|` on the frame.
    pub residual: f64,
    /// Max component difference between FD and space-form curvature.
    pub fd_vs_oracle: f64,
}

/// `R^{4n+4}` with signs `(−^{2n+2}, +^{2n+2})` and the para-hypercomplex triple.
pub fn make_flat_para_hyperhermitian(n: usize) -> Result<AmbientSpace> {
    let metric = SignatureMetric::split(2 * n + 2, 2 * n + 2);
    let triple = make_para_hypercomplex(n);
    let r = triple.residual(&metric);
    if r >= TOL_ALG {
        return Err(Error::StructureAxiomFailure { axiom: 0, residual: r });
    }
    Ok(AmbientSpace {
        kind: AmbientKind::FlatParaHyperhermitian,
        n,
        label: format!("R^{}_{}", 4 * n + 4, 2 * n + 2),
        metric,
        level: None,
        triple,
        structure: None,
    })
}

/// Pseudo-sphere `{ḡ(x,x) = level}` in the flat para-hyperhermitian space with
/// its induced mixed 3-structure; runs the axiom sweep before returning.
pub fn make_pseudosphere(n: usize, level: Level) -> Result<AmbientSpace> {
    let flat = make_flat_para_hyperhermitian(n)?;
    let c = level.value();
    let metric = flat.metric.clone();
    let model = StructureModel::Sphere { level: c, triple: flat.triple.clone() };
    let mut space = AmbientSpace {
        kind: AmbientKind::PseudoSphere,
        n,
        label: format!("S^{}({})", 4 * n + 3, if c > 0.0 { "+1" } else { "-1" }),
        metric: metric.clone(),
        level: Some(level),
        triple: flat.triple,
        structure: None,
    };
    let base = space.base_point();
    space.structure = Some(MixedThreeStructure::new(metric, model, &base));
    verify_construction(&space)?;
    Ok(space)
}

/// `R^3_t × R^{4n}_y` with `ξ_α = ∂t_α`, `φ_α = J_α` on the `y`-block and the
/// `t`-block fixed by `φ_α ξ_β = τ_β ξ_γ`, `φ_β ξ_α = −τ_α ξ_γ`.
///
/// The `t`-block metric is `(ε₁, ε₁, −ε₁)`; the `y`-block carries the
/// para-hyperhermitian signs.
pub fn make_flat_cosymplectic(n: usize, eps1: i32) -> Result<AmbientSpace> {
    if eps1 != 1 && eps1 != -1 {
        return Err(Error::InvalidArgument(format!("eps1 must be ±1, got {eps1}")));
    }
    let e = eps1 as i8;
    let t_metric = SignatureMetric::new(&[e, e, -e])?;
    let y_dim = 4 * n;
    let (metric, y_triple) = if n == 0 {
        (t_metric, make_para_hypercomplex(0))
    } else {
        let y_metric = SignatureMetric::split(2 * n, 2 * n);
        (t_metric.direct_sum(&y_metric), make_para_hypercomplex(n - 1))
    };
    let d = 3 + y_dim;
    let mut phi: [Matrix; 3] = std::array::from_fn(|_| Matrix::zeros(d, d));
    for &(a, b, c) in &EVEN_PERMUTATIONS {
        // φ_a ξ_b = τ_b ξ_c,  φ_b ξ_a = −τ_a ξ_c
        phi[a][(c, b)] = TAU[b];
        phi[b][(c, a)] = -TAU[a];
    }
    if n > 0 {
        for (a, ph) in phi.iter_mut().enumerate() {
            ph.view_mut((3, 3), (y_dim, y_dim)).copy_from(&y_triple.j[a]);
        }
    }
    let xi: [Vector; 3] = std::array::from_fn(|a| unit(d, a));
    let model = StructureModel::Constant { phi, xi };
    let (minus, _) = metric.index_counts();
    let mut space = AmbientSpace {
        kind: AmbientKind::FlatMixedCosymplectic,
        n,
        label: format!("R^{}_{}", 4 * n + 3, minus),
        metric: metric.clone(),
        level: None,
        triple: y_triple,
        structure: None,
    };
    let base = space.base_point();
    space.structure = Some(MixedThreeStructure::new(metric, model, &base));
    verify_construction(&space)?;
    Ok(space)
}

fn verify_construction(space: &AmbientSpace) -> Result<()> {
    let res = crate::structures::check_axioms_with(space, 100, CONSTRUCTION_SEED, false)?;
    for (k, r) in res.by_axiom().iter().enumerate() {
        if !(*r < TOL_ALG) {
            return Err(Error::StructureAxiomFailure { axiom: k as u8 + 1, residual: *r });
        }
    }
    Ok(())
}
