//! Concrete immersions with their expected classification and flags.
//!
//! Ids are stable strings; `all()` returns entries sorted by id.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ambient::{make_flat_cosymplectic, make_pseudosphere, AmbientSpace, Level};
use crate::error::{Error, Result};
use crate::linalg::{unit, Matrix, Vector};
use crate::structures::ParallelismClass;
use crate::submanifold::{Immersion, ParamJacobian, ParamMap, SubmanifoldKind, XiTangency};

pub const IDS: [&str; 8] = [
    "clifford-torus",
    "cosym-leaf",
    "cosym-tangent-block",
    "flat-torus-n2",
    "great-s3-alt",
    "great-s3-fiber",
    "great-s7-in-s11",
    "real-circle",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    pub kind: SubmanifoldKind,
    pub xi: [XiTangency; 3],
    pub totally_geodesic: bool,
    pub minimal: bool,
    /// `None` for curves, where intrinsic curvature is vacuous.
    pub flat: Option<bool>,
    /// Parallelism class of the induced structure, for entries tangent to all `ξ_α`.
    pub induced_class: Option<ParallelismClass>,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub anchor: &'static str,
    pub immersion: Immersion,
    pub expected: Expected,
}

pub fn get(id: &str) -> Result<CatalogEntry> {
    match id {
        "clifford-torus" => clifford_torus(),
        "cosym-leaf" => cosymplectic_leaf(1),
        "cosym-tangent-block" => cosymplectic_tangent_block(2),
        "flat-torus-n2" => flat_torus(2),
        "great-s3-alt" => great_sphere(1, &[0, 1, 6, 7], "great-s3-alt"),
        "great-s3-fiber" => great_sphere(1, &[2, 3, 4, 5], "great-s3-fiber"),
        "great-s7-in-s11" => great_sphere(2, &[2, 3, 4, 5, 6, 7, 8, 9], "great-s7-in-s11"),
        "real-circle" => real_sphere(1, &[4, 6], "real-circle"),
        other => Err(Error::UnknownExample(other.to_string())),
    }
}

pub fn all() -> Result<Vec<CatalogEntry>> {
    IDS.iter().map(|id| get(id)).collect()
}

fn sphere(n: usize) -> Result<Arc<AmbientSpace>> {
    Ok(Arc::new(make_pseudosphere(n, Level::Positive)?))
}

pub fn clifford_torus() -> Result<CatalogEntry> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let map: ParamMap = Arc::new(move |u: &[f64]| {
        Vector::from_vec(vec![0.0, 0.0, 0.0, 0.0, u[0].cos(), u[0].sin(), u[1].cos(), u[1].sin()]) * s
    });
    let jac: ParamJacobian = Arc::new(move |u: &[f64]| {
        let mut j = Matrix::zeros(8, 2);
        j[(4, 0)] = -u[0].sin() * s;
        j[(5, 0)] = u[0].cos() * s;
        j[(6, 1)] = -u[1].sin() * s;
        j[(7, 1)] = u[1].cos() * s;
        j
    });
    let imm = Immersion::new("clifford-torus", sphere(1)?, vec![(-3.0, 3.0); 2], map).with_jacobian(jac);
    Ok(CatalogEntry {
        id: "clifford-torus",
        anchor: "the Clifford torus S^1(1/√2) × S^1(1/√2) ⊂ S^7_3 ... is an anti-invariant submanifold",
        immersion: imm,
        expected: Expected {
            kind: SubmanifoldKind::AntiInvariant,
            xi: [XiTangency::Normal, XiTangency::Normal, XiTangency::Tangent],
            totally_geodesic: false,
            minimal: true,
            flat: Some(true),
            induced_class: None,
        },
    })
}

/// `T^n → S^{4n+3}`, `x ↦ (0, cos x_1, sin x_1, …, cos x_{n+1}, sin x_{n+1})/√(n+1)`
/// with `x_{n+1} = −Σ x_i`.
pub fn flat_torus(n: usize) -> Result<CatalogEntry> {
    if n == 0 {
        return Err(Error::InvalidArgument("flat torus needs n ≥ 1".into()));
    }
    let d = 4 * n + 4;
    let off = 2 * n + 2;
    let s = 1.0 / ((n + 1) as f64).sqrt();
    let angles = move |u: &[f64]| {
        let mut x = u.to_vec();
        x.push(-u.iter().sum::<f64>());
        x
    };
    let map: ParamMap = Arc::new(move |u: &[f64]| {
        let x = angles(u);
        let mut v = Vector::zeros(d);
        for (k, xk) in x.iter().enumerate() {
            v[off + 2 * k] = xk.cos() * s;
            v[off + 2 * k + 1] = xk.sin() * s;
        }
        v
    });
    let jac: ParamJacobian = Arc::new(move |u: &[f64]| {
        let x = angles(u);
        let mut j = Matrix::zeros(d, n);
        for i in 0..n {
            for (k, sign) in [(i, 1.0), (n, -1.0)] {
                j[(off + 2 * k, i)] += -x[k].sin() * s * sign;
                j[(off + 2 * k + 1, i)] += x[k].cos() * s * sign;
            }
        }
        j
    });
    let id: &'static str = if n == 2 { "flat-torus-n2" } else { "flat-torus" };
    let imm = Immersion::new(id, sphere(n)?, vec![(-3.0, 3.0); n], map).with_jacobian(jac);
    Ok(CatalogEntry {
        id,
        anchor: "a minimal isometric immersion f: T^n → S^{4n+3}_{2n+1} ... an anti-invariant flat minimal submanifold",
        immersion: imm,
        expected: Expected {
            kind: SubmanifoldKind::AntiInvariant,
            xi: [XiTangency::Normal; 3],
            totally_geodesic: false,
            minimal: true,
            flat: if n >= 2 { Some(true) } else { None },
            induced_class: None,
        },
    })
}

/// Hyperspherical unit vector `ω(θ)` in `R^{k+1}` and its Jacobian.
fn hyperspherical(theta: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let k = theta.len();
    let mut w = vec![0.0; k + 1];
    let mut dw = vec![vec![0.0; k]; k + 1];
    for i in 0..=k {
        let tail = |t: f64, diff: bool| if i < k { if diff { -t.sin() } else { t.cos() } } else { 1.0 };
        let prefix: f64 = theta[..i].iter().map(|t| t.sin()).product();
        w[i] = prefix * tail(theta.get(i).copied().unwrap_or(0.0), false);
        for j in 0..k {
            dw[i][j] = if j < i {
                let p: f64 = theta[..i].iter().enumerate().map(|(l, t)| if l == j { t.cos() } else { t.sin() }).product();
                p * tail(theta.get(i).copied().unwrap_or(0.0), false)
            } else if j == i && i < k {
                prefix * tail(theta[i], true)
            } else {
                0.0
            };
        }
    }
    (w, dw)
}

/// Chart of `{x ∈ span(axes) : ḡ(x,x) = c}` in the pseudo-sphere: the
/// directions with sign `−c` are free parameters `a`, the others are
/// `√(1 + |a|²) ω(θ)`.
fn sphere_chart(id: &'static str, space: Arc<AmbientSpace>, axes: &[usize]) -> Result<Immersion> {
    let c = space.level().ok_or_else(|| Error::InvalidArgument("chart needs a pseudo-sphere".into()))?.value();
    let g = space.metric();
    let free: Vec<usize> = axes.iter().copied().filter(|&i| g.sign(i) * c < 0.0).collect();
    let radial: Vec<usize> = axes.iter().copied().filter(|&i| g.sign(i) * c > 0.0).collect();
    if radial.is_empty() {
        return Err(Error::InvalidArgument(format!("{id}: no direction of the sphere's causal type")));
    }
    let d = space.coord_dim();
    let nf = free.len();
    let m = nf + radial.len() - 1;
    let (free_m, radial_m) = (free.clone(), radial.clone());
    let map: ParamMap = Arc::new(move |u: &[f64]| {
        let (a, th) = u.split_at(nf);
        let r = (1.0 + a.iter().map(|x| x * x).sum::<f64>()).sqrt();
        let (w, _) = hyperspherical(th);
        let mut v = Vector::zeros(d);
        for (i, &ax) in free_m.iter().enumerate() {
            v[ax] = a[i];
        }
        for (i, &ax) in radial_m.iter().enumerate() {
            v[ax] = r * w[i];
        }
        v
    });
    let jac: ParamJacobian = Arc::new(move |u: &[f64]| {
        let (a, th) = u.split_at(nf);
        let r = (1.0 + a.iter().map(|x| x * x).sum::<f64>()).sqrt();
        let (w, dw) = hyperspherical(th);
        let mut j = Matrix::zeros(d, m);
        for (i, &ax) in free.iter().enumerate() {
            j[(ax, i)] = 1.0;
        }
        for (i, &ax) in radial.iter().enumerate() {
            for (l, al) in a.iter().enumerate() {
                j[(ax, l)] = al / r * w[i];
            }
            for t in 0..th.len() {
                j[(ax, nf + t)] = r * dw[i][t];
            }
        }
        j
    });
    Ok(Immersion::new(id, space, vec![(0.2, 1.2); m], map).with_jacobian(jac))
}

fn axes_label(axes: &[usize]) -> String {
    axes.iter().map(|i| format!("e{}", i + 1)).collect::<Vec<_>>().join(",")
}

/// Great pseudo-sphere of a `J`-invariant coordinate subspace.
pub fn great_sphere(n: usize, axes: &[usize], id: &'static str) -> Result<CatalogEntry> {
    let space = sphere(n)?;
    let d = space.coord_dim();
    for a in 0..3 {
        for &i in axes {
            let v = space.triple().apply(a, &unit(d, i));
            if let Some(k) = (0..d).find(|k| !axes.contains(k) && v[*k].abs() >= crate::linalg::TOL_ALG) {
                return Err(Error::PlaneNotInvariant(format!(
                    "J{} e{} has an e{} component outside span{{{}}}",
                    a + 1,
                    i + 1,
                    k + 1,
                    axes_label(axes)
                )));
            }
        }
    }
    let imm = sphere_chart(id, space, axes)?;
    Ok(CatalogEntry {
        id,
        anchor: "an invariant totally geodesic submanifold ..., tangent to the structure vector fields",
        immersion: imm,
        expected: Expected {
            kind: SubmanifoldKind::Invariant,
            xi: [XiTangency::Tangent; 3],
            totally_geodesic: true,
            minimal: true,
            flat: Some(false),
            induced_class: Some(ParallelismClass::Sasakian),
        },
    })
}

/// Great pseudo-sphere of a totally real coordinate subspace `W` (`J_α W ⊥ W`).
pub fn real_sphere(n: usize, axes: &[usize], id: &'static str) -> Result<CatalogEntry> {
    let space = sphere(n)?;
    let d = space.coord_dim();
    let g = space.metric();
    for a in 0..3 {
        for &i in axes {
            let v = space.triple().apply(a, &unit(d, i));
            for &k in axes {
                if g.dot(&v, &unit(d, k)).abs() >= crate::linalg::TOL_ALG {
                    return Err(Error::SubspaceNotTotallyReal(format!(
                        "ḡ(J{} e{}, e{}) ≠ 0 in span{{{}}}",
                        a + 1,
                        i + 1,
                        k + 1,
                        axes_label(axes)
                    )));
                }
            }
        }
    }
    let imm = sphere_chart(id, space, axes)?;
    let m = imm.domain_dim();
    Ok(CatalogEntry {
        id,
        anchor: "an anti-invariant totally geodesic submanifold ..., normal to the structure vector fields",
        immersion: imm,
        expected: Expected {
            kind: SubmanifoldKind::AntiInvariant,
            xi: [XiTangency::Normal; 3],
            totally_geodesic: true,
            minimal: true,
            flat: if m >= 2 { Some(false) } else { None },
            induced_class: None,
        },
    })
}

/// Affine immersion `v ↦ base + Σ v_i e_{axes[i]}` into a flat space.
fn affine(id: &'static str, space: Arc<AmbientSpace>, base: Vector, axes: Vec<usize>, bounds: (f64, f64)) -> Immersion {
    let d = space.coord_dim();
    let m = axes.len();
    let ax = axes.clone();
    let map: ParamMap = Arc::new(move |u: &[f64]| {
        let mut v = base.clone();
        for (i, &a) in ax.iter().enumerate() {
            v[a] += u[i];
        }
        v
    });
    let jac: ParamJacobian = Arc::new(move |_: &[f64]| {
        let mut j = Matrix::zeros(d, m);
        for (i, &a) in axes.iter().enumerate() {
            j[(a, i)] = 1.0;
        }
        j
    });
    Immersion::new(id, space, vec![bounds; m], map).with_jacobian(jac)
}

/// Leaf `{t = t₀} × R^{4n}` of the flat mixed 3-cosymplectic space.
pub fn cosymplectic_leaf(n: usize) -> Result<CatalogEntry> {
    let space = Arc::new(make_flat_cosymplectic(n, 1)?);
    let d = space.coord_dim();
    let mut base = Vector::zeros(d);
    base[0] = 0.3;
    base[1] = -0.2;
    base[2] = 0.5;
    let imm = affine("cosym-leaf", space, base, (3..d).collect(), (-1.0, 1.0));
    Ok(CatalogEntry {
        id: "cosym-leaf",
        anchor: "M is a para-hyper-Kähler manifold, totally geodesically immersed",
        immersion: imm,
        expected: Expected {
            kind: SubmanifoldKind::Invariant,
            xi: [XiTangency::Normal; 3],
            totally_geodesic: true,
            minimal: true,
            flat: Some(true),
            induced_class: None,
        },
    })
}

/// `R^3_t × W` with `W` a `J`-invariant 4-dimensional coordinate block of the
/// `y`-factor (needs `n ≥ 2` so that `W` is proper).
pub fn cosymplectic_tangent_block(n: usize) -> Result<CatalogEntry> {
    if n < 2 {
        return Err(Error::InvalidArgument("tangent block needs n ≥ 2".into()));
    }
    let space = Arc::new(make_flat_cosymplectic(n, 1)?);
    let d = space.coord_dim();
    // y-block pairs {k, 2n+1-k} of 2-blocks are J-invariant; take the two
    // middle ones of the first 8 y coordinates
    let yaxes = [2usize, 3, 4, 5];
    let mut axes = vec![0, 1, 2];
    axes.extend(yaxes.iter().map(|y| y + 3));
    let base = Vector::from_fn(d, |i, _| if axes.contains(&i) { 0.0 } else { 0.4 });
    let imm = affine("cosym-tangent-block", space, base, axes, (-1.0, 1.0));
    Ok(CatalogEntry {
        id: "cosym-tangent-block",
        anchor: "the distribution D is integrable",
        immersion: imm,
        expected: Expected {
            kind: SubmanifoldKind::Invariant,
            xi: [XiTangency::Tangent; 3],
            totally_geodesic: true,
            minimal: true,
            flat: Some(true),
            induced_class: Some(ParallelismClass::Cosymplectic),
        },
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntrySummary {
    pub id: String,
    pub ambient: String,
    pub dim: usize,
    pub anchor: String,
    pub expected: Expected,
}

pub fn summaries() -> Result<Vec<EntrySummary>> {
    Ok(all()?
        .into_iter()
        .map(|e| EntrySummary {
            id: e.id.to_string(),
            ambient: e.immersion.ambient().label().to_string(),
            dim: e.immersion.domain_dim(),
            anchor: e.anchor.to_string(),
            expected: e.expected,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::submanifold::{classify, frame_at, second_fundamental_form};

    #[test]
    fn ids_sorted_and_resolvable() {
        let mut sorted = IDS.to_vec();
        sorted.sort();
        assert_eq!(sorted, IDS.to_vec());
        for id in IDS {
            assert_eq!(get(id).unwrap().id, id);
        }
        assert!(matches!(get("nope"), Err(Error::UnknownExample(_))));
    }

    #[test]
    fn hyperspherical_jacobian_matches_differences() {
        let th = [0.4, 0.9, 0.7];
        let (_, dw) = hyperspherical(&th);
        let h = 1e-6;
        for j in 0..3 {
            let mut p = th;
            let mut q = th;
            p[j] += h;
            q[j] -= h;
            let (wp, _) = hyperspherical(&p);
            let (wq, _) = hyperspherical(&q);
            for i in 0..4 {
                assert!(((wp[i] - wq[i]) / (2.0 * h) - dw[i][j]).abs() < 1e-8);
            }
        }
        let (w, _) = hyperspherical(&th);
        assert!((w.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn charts_land_on_sphere_with_exact_jacobian() {
        let cfg = Config::default();
        for id in IDS {
            let e = get(id).unwrap();
            let imm = &e.immersion;
            let u = imm.center();
            let p = imm.point(&u);
            assert!(imm.ambient().constraint_residual(&p) < 1e-12, "{id}");
            let plain = Immersion::new(id, imm.ambient_arc(), imm.param_box().to_vec(), {
                let imm = imm.clone();
                Arc::new(move |u: &[f64]| imm.point(u))
            });
            let diff = (imm.jacobian_at(&u, cfg.fd_step1) - plain.jacobian_at(&u, cfg.fd_step1)).amax();
            assert!(diff < 1e-8, "{id}: {diff}");
        }
    }

    #[test]
    fn clifford_metric_and_xi3() {
        let cfg = Config::default();
        let e = clifford_torus().unwrap();
        let fr = frame_at(&e.immersion, &[0.0, 0.0], &cfg).unwrap();
        assert!((&fr.gram - Matrix::identity(2, 2) * 0.5).amax() < 1e-15);
        let st = e.immersion.ambient().structure().unwrap();
        let r = st.xi(2, &fr.point) + &fr.tangent[0] + &fr.tangent[1];
        assert!(r.amax() < 1e-15);
        let c = classify(&e.immersion, &fr, &cfg).unwrap();
        assert_eq!(c.kind, SubmanifoldKind::AntiInvariant);
        assert_eq!((c.dim_xi_t, c.dim_xi_n), (1, 2));
    }

    #[test]
    fn flat_torus_metric() {
        let cfg = Config::default();
        let e = flat_torus(2).unwrap();
        let fr = frame_at(&e.immersion, &[0.0, 0.0], &cfg).unwrap();
        let want = Matrix::from_row_slice(2, 2, &[2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0]);
        assert!((&fr.gram - want).amax() < 1e-15);
    }

    #[test]
    fn great_spheres_invariant_and_geodesic() {
        let cfg = Config::default();
        for id in ["great-s3-fiber", "great-s3-alt", "great-s7-in-s11"] {
            let e = get(id).unwrap();
            let fr = frame_at(&e.immersion, &e.immersion.center(), &cfg).unwrap();
            let c = classify(&e.immersion, &fr, &cfg).unwrap();
            assert_eq!(c.kind, SubmanifoldKind::Invariant, "{id}");
            assert_eq!(c.xi, [XiTangency::Tangent; 3], "{id}");
            let sff = second_fundamental_form(&e.immersion, &fr, &cfg);
            assert!(sff.max_norm() < 1e-6, "{id}: {}", sff.max_norm());
        }
    }

    #[test]
    fn negative_controls() {
        assert!(matches!(great_sphere(1, &[0, 1, 2, 3], "x"), Err(Error::PlaneNotInvariant(_))));
        assert!(matches!(real_sphere(1, &[4, 5], "x"), Err(Error::SubspaceNotTotallyReal(_))));
    }
}
