//! Pointwise checks of the mixed 3-structure axioms, the cosymplectic and
//! Sasakian conditions, and the adapted pseudo-orthonormal frame.

use serde::{Deserialize, Serialize};

use crate::ambient::{AmbientSpace, MixedThreeStructure, EVEN_PERMUTATIONS};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::exec::{par_range, sample_rng};
use crate::linalg::{Vector, TOL_ALG};

const AXIOM_STREAM: u64 = 0xA1;
const CLASS_STREAM: u64 = 0xA2;

/// Per-axiom maxima of the algebraic axioms over the sampled points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxiomResiduals {
    /// `φ² = τ(−I + η⊗ξ)`, `η(ξ) = 1`.
    pub r1: f64,
    /// `φ_α ξ_α = 0`, `η_α ∘ φ_α = 0`.
    pub r2: f64,
    /// `η_α(ξ_β) = 0`.
    pub r3: f64,
    pub r4: f64,
    pub r5: f64,
    pub r6: f64,
    /// Metric compatibility, including `ε_α = ḡ(ξ_α, ξ_α)` at every point.
    pub r7: f64,
    /// Skew-symmetry of `φ_α`.
    pub r8: f64,
    /// `ξ_α` and `φ_α X` lie in `T_p`.
    pub tangency: f64,
    pub points_tested: usize,
    pub seed: u64,
}

impl AxiomResiduals {
    pub fn by_axiom(&self) -> [f64; 8] {
        [self.r1, self.r2, self.r3, self.r4, self.r5, self.r6, self.r7, self.r8]
    }

    pub fn max(&self) -> f64 {
        self.by_axiom().iter().fold(self.tangency, |a, b| a.max(*b))
    }

    fn merge(self, o: Self) -> Self {
        Self {
            r1: self.r1.max(o.r1),
            r2: self.r2.max(o.r2),
            r3: self.r3.max(o.r3),
            r4: self.r4.max(o.r4),
            r5: self.r5.max(o.r5),
            r6: self.r6.max(o.r6),
            r7: self.r7.max(o.r7),
            r8: self.r8.max(o.r8),
            tangency: self.tangency.max(o.tangency),
            points_tested: self.points_tested + o.points_tested,
            seed: self.seed,
        }
    }

    fn zero(seed: u64) -> Self {
        Self {
            r1: 0.0,
            r2: 0.0,
            r3: 0.0,
            r4: 0.0,
            r5: 0.0,
            r6: 0.0,
            r7: 0.0,
            r8: 0.0,
            tangency: 0.0,
            points_tested: 0,
            seed,
        }
    }
}

pub fn check_axioms(space: &AmbientSpace, points: usize, seed: u64) -> Result<AxiomResiduals> {
    check_axioms_with(space, points, seed, true)
}

pub fn check_axioms_with(
    space: &AmbientSpace,
    points: usize,
    seed: u64,
    parallel: bool,
) -> Result<AxiomResiduals> {
    let st = space.require_structure()?;
    let per_point = par_range(parallel, points, |i| {
        let mut rng = sample_rng(seed, AXIOM_STREAM, i);
        let p = space.random_point(&mut rng);
        let x = space.random_tangent(&p, &mut rng);
        let y = space.random_tangent(&p, &mut rng);
        axioms_at(space, st, &p, &x, &y, seed)
    });
    Ok(per_point.into_iter().fold(AxiomResiduals::zero(seed), AxiomResiduals::merge))
}

/// Axiom residuals at one point for given tangent vectors `x`, `y`.
pub fn axioms_at(
    space: &AmbientSpace,
    st: &MixedThreeStructure,
    p: &Vector,
    x: &Vector,
    y: &Vector,
    seed: u64,
) -> AxiomResiduals {
    let g = space.metric();
    let xi: [Vector; 3] = std::array::from_fn(|a| st.xi(a, p));
    let phi = |a: usize, v: &Vector| st.phi(a, p, v);
    let eta = |a: usize, v: &Vector| st.eta(a, p, v);
    let tau = |a: usize| st.tau(a);
    let eps = |a: usize| st.eps(a);
    let mut r = AxiomResiduals::zero(seed);
    r.points_tested = 1;

    for a in 0..3 {
        let phx = phi(a, x);
        let e1 = phi(a, &phx) - (-x + &xi[a] * eta(a, x)) * tau(a);
        r.r1 = r.r1.max(e1.amax()).max((eta(a, &xi[a]) - 1.0).abs());

        r.r2 = r.r2.max(phi(a, &xi[a]).amax()).max(eta(a, &phx).abs());

        for b in 0..3 {
            if a != b {
                r.r3 = r.r3.max(eta(a, &xi[b]).abs());
            }
        }

        let phy = phi(a, y);
        let e7 = g.dot(&phx, &phy) - tau(a) * (g.dot(x, y) - eps(a) * eta(a, x) * eta(a, y));
        let eps_def = (g.dot(&xi[a], &xi[a]) - eps(a)).abs();
        r.r7 = r.r7.max(e7.abs()).max(eps_def);

        r.r8 = r.r8.max((g.dot(&phx, y) + g.dot(x, &phy)).abs());

        let tan = |v: &Vector| (v - space.tangent_part(p, v)).amax();
        r.tangency = r.tangency.max(tan(&xi[a])).max(tan(&phx));
    }

    for &(a, b, c) in &EVEN_PERMUTATIONS {
        let e4a = phi(a, &xi[b]) - &xi[c] * tau(b);
        let e4b = phi(b, &xi[a]) + &xi[c] * tau(a);
        r.r4 = r.r4.max(e4a.amax()).max(e4b.amax());

        let e5a = eta(a, &phi(b, x)) - tau(c) * eta(c, x);
        let e5b = eta(b, &phi(a, x)) + tau(c) * eta(c, x);
        r.r5 = r.r5.max(e5a.abs()).max(e5b.abs());

        let phc = phi(c, x) * tau(c);
        let e6a = phi(a, &phi(b, x)) - &xi[a] * (tau(a) * eta(b, x)) - &phc;
        let e6b = -phi(b, &phi(a, x)) + &xi[b] * (tau(b) * eta(a, x)) - &phc;
        r.r6 = r.r6.max(e6a.amax()).max(e6b.amax());
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParallelismClass {
    Cosymplectic,
    Sasakian,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParallelismReport {
    pub class: ParallelismClass,
    /// `‖(∇̄_X φ_α) Y‖`.
    pub eq9: f64,
    /// `‖(∇̄_X φ_α) Y − τ_α[ḡ(X,Y) ξ_α − ε_α η_α(Y) X]‖`.
    pub eq10: f64,
    /// `‖∇̄_X ξ_α‖`.
    pub eq11: f64,
    /// `‖∇̄_X ξ_α + ε_α φ_α X‖`.
    pub eq12: f64,
    pub points: usize,
    pub seed: u64,
}

/// `(∇̄_X φ_α) Y` at `p`, with `Y` extended by projecting the constant vector.
pub fn nabla_phi(space: &AmbientSpace, st: &MixedThreeStructure, alpha: usize, p: &Vector, x: &Vector, y: &Vector, h: f64) -> Vector {
    let y_ext = |q: &Vector| space.tangent_part(q, y);
    let phi_y = |q: &Vector| st.phi(alpha, q, &y_ext(q));
    let d_phi_y = space.covariant_derivative_unchecked(p, x, &phi_y, h);
    let d_y = space.covariant_derivative_unchecked(p, x, &y_ext, h);
    d_phi_y - st.phi(alpha, p, &d_y)
}

pub fn check_parallelism_class(
    space: &AmbientSpace,
    points: usize,
    seed: u64,
    cfg: &Config,
) -> Result<ParallelismReport> {
    let st = space.require_structure()?;
    let g = space.metric();
    let h = cfg.fd_step1;
    let per_point = par_range(cfg.parallel, points, |i| {
        let mut rng = sample_rng(seed, CLASS_STREAM, i);
        let p = space.random_point(&mut rng);
        let x = space.random_tangent(&p, &mut rng);
        let y = space.random_tangent(&p, &mut rng);
        let mut out = [0.0f64; 4];
        for a in 0..3 {
            let nphi = nabla_phi(space, st, a, &p, &x, &y, h);
            let rhs10 = (&st.xi(a, &p) * g.dot(&x, &y) - &x * (st.eps(a) * st.eta(a, &p, &y))) * st.tau(a);
            let nxi = space.covariant_derivative_unchecked(&p, &x, &|q: &Vector| st.xi(a, q), h);
            let rhs12 = st.phi(a, &p, &x) * (-st.eps(a));
            out[0] = out[0].max(nphi.amax());
            out[1] = out[1].max((&nphi - rhs10).amax());
            out[2] = out[2].max(nxi.amax());
            out[3] = out[3].max((nxi - rhs12).amax());
        }
        out
    });
    let m = per_point.into_iter().fold([0.0f64; 4], |acc, v| {
        [acc[0].max(v[0]), acc[1].max(v[1]), acc[2].max(v[2]), acc[3].max(v[3])]
    });
    let tol = cfg.tol_d1();
    let class = if m[0] < tol && m[2] < tol {
        ParallelismClass::Cosymplectic
    } else if m[1] < tol && m[3] < tol {
        ParallelismClass::Sasakian
    } else {
        ParallelismClass::Neither
    };
    Ok(ParallelismReport { class, eq9: m[0], eq10: m[1], eq11: m[2], eq12: m[3], points, seed })
}

/// Pseudo-orthonormal frame `{(E_i, φ1 E_i, φ2 E_i, φ3 E_i)_i, ξ1, ξ2, ξ3}` at `p`.
pub fn canonical_frame(space: &AmbientSpace, p: &Vector) -> Result<Vec<(Vector, f64)>> {
    space.check_point(p)?;
    let st = space.require_structure()?;
    let g = space.metric();
    let xis: Vec<(Vector, f64)> = (0..3).map(|a| (st.xi(a, p), st.eps(a))).collect();
    let mut fixed: Vec<(Vector, f64)> = xis.clone();
    let mut quads: Vec<(Vector, f64)> = Vec::new();
    let mut candidates: Vec<Vector> = space.tangent_space(p).basis().to_vec();

    let strip = |v: &mut Vector, frame: &[(Vector, f64)]| {
        for (u, s) in frame {
            let c = s * g.dot(v, u);
            v.axpy(-c, u, 1.0);
        }
    };
    for c in candidates.iter_mut() {
        strip(c, &fixed);
    }
    let quads_needed = (space.dim() - 3) / 4;
    while quads.len() < 4 * quads_needed {
        candidates.retain(|c| c.amax() >= TOL_ALG);
        if candidates.is_empty() {
            return Err(Error::FrameConstructionFailure("candidates exhausted".into()));
        }
        let selfs: Vec<f64> = candidates.iter().map(|c| g.dot(c, c)).collect();
        let (best, best_val) = selfs
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, s)| if s.abs() > acc.1 { (i, s.abs()) } else { acc });
        if best_val < TOL_ALG {
            let mut pair = None;
            'outer: for i in 0..candidates.len() {
                for j in (i + 1)..candidates.len() {
                    if g.dot(&candidates[i], &candidates[j]).abs() >= TOL_ALG {
                        pair = Some((i, j));
                        break 'outer;
                    }
                }
            }
            let (i, j) = pair.ok_or_else(|| {
                Error::FrameConstructionFailure("only null candidates remain".into())
            })?;
            let (a, b) = (candidates[i].clone(), candidates[j].clone());
            candidates[i] = &a + &b;
            candidates[j] = &a - &b;
            continue;
        }
        let v = candidates.remove(best);
        let s = selfs[best];
        let e = v / s.abs().sqrt();
        let mut quad = vec![(e.clone(), s.signum())];
        for a in 0..3 {
            let w = st.phi(a, p, &e);
            let sw = g.dot(&w, &w);
            if sw.abs() < TOL_ALG {
                return Err(Error::FrameConstructionFailure(format!("φ{} E is null", a + 1)));
            }
            quad.push((w / sw.abs().sqrt(), sw.signum()));
        }
        for c in candidates.iter_mut() {
            strip(c, &quad);
        }
        fixed.extend(quad.iter().cloned());
        quads.extend(quad);
    }
    quads.extend(xis);
    Ok(quads)
}
