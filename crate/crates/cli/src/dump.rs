//! Pointwise tensor dumps for ambient spaces and catalog immersions.

use mixed3::ambient::{make_flat_cosymplectic, make_pseudosphere, AmbientSpace, Level};
use mixed3::catalog;
use mixed3::config::Config;
use mixed3::linalg::{Matrix, Vector};
use mixed3::submanifold::{classify, frame_at, mean_curvature, second_fundamental_form, shape_operator};
use serde_json::{json, Value};

use crate::CliError;

fn vec_json(v: &Vector) -> Value {
    json!(v.iter().copied().collect::<Vec<f64>>())
}

fn mat_json(m: &Matrix) -> Value {
    json!((0..m.nrows()).map(|i| m.row(i).iter().copied().collect::<Vec<f64>>()).collect::<Vec<_>>())
}

/// `s7-pos`, `s11-neg`, `cosym`, `cosym-neg`; spheres carry their own n.
pub fn parse_space(id: &str, n: usize) -> Option<Result<AmbientSpace, CliError>> {
    let build = |r: mixed3::error::Result<AmbientSpace>| Some(r.map_err(CliError::from));
    match id {
        "cosym" => return build(make_flat_cosymplectic(n, 1)),
        "cosym-neg" => return build(make_flat_cosymplectic(n, -1)),
        _ => {}
    }
    let (dim, level) = id.strip_prefix('s')?.split_once('-')?;
    let dim: usize = dim.parse().ok()?;
    let level = match level {
        "pos" => Level::Positive,
        "neg" => Level::Negative,
        _ => return None,
    };
    if dim < 7 || (dim - 3) % 4 != 0 {
        return Some(Err(CliError::Usage(format!("sphere dimension {dim} is not of the form 4n+3"))));
    }
    Some(make_pseudosphere((dim - 3) / 4, level).map_err(|e| match e {
        mixed3::error::Error::StructureAxiomFailure { .. } => {
            CliError::Usage(format!("{id} is unsupported: {e}"))
        }
        other => other.into(),
    }))
}

/// Numbers, or `eK` for the K-th (1-based) unit vector of length `len`.
fn parse_point(raw: &[String], len: usize) -> Result<Vec<f64>, CliError> {
    if let [one] = raw {
        if let Some(k) = one.strip_prefix('e') {
            let k: usize = k.parse().map_err(|_| CliError::Usage(format!("bad point `{one}`")))?;
            if k == 0 || k > len {
                return Err(CliError::Usage(format!("unit vector e{k} out of range 1..={len}")));
            }
            let mut v = vec![0.0; len];
            v[k - 1] = 1.0;
            return Ok(v);
        }
    }
    raw.iter()
        .map(|s| s.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad coordinate `{s}`"))))
        .collect()
}

pub fn dump(id: &str, point: Option<&[String]>, cfg: &Config) -> Result<Value, CliError> {
    if let Some(space) = parse_space(id, cfg.n) {
        return dump_space(id, &space?, point, cfg);
    }
    dump_example(id, point, cfg)
}

fn dump_space(id: &str, space: &AmbientSpace, point: Option<&[String]>, cfg: &Config) -> Result<Value, CliError> {
    let p = match point {
        Some(raw) => Vector::from_vec(parse_point(raw, space.coord_dim())?),
        None => space.base_point(),
    };
    if p.len() != space.coord_dim() {
        return Err(mixed3::error::Error::DimensionMismatch { expected: space.coord_dim(), found: p.len() }.into());
    }
    space.check_point(&p)?;
    let st = space.require_structure()?;
    let xi: Vec<Value> = (0..3)
        .map(|a| {
            let x = st.xi(a, &p);
            json!({"alpha": a + 1, "xi": vec_json(&x), "g(xi,xi)": space.metric().dot(&x, &x)})
        })
        .collect();
    let mut out = json!({
        "space": id,
        "label": space.label(),
        "kind": space.kind(),
        "dim": space.dim(),
        "metric_signs": space.metric().signs(),
        "point": vec_json(&p),
        "constraint_residual": space.constraint_residual(&p),
        "tau": [st.tau(0), st.tau(1), st.tau(2)],
        "eps": st.eps_all(),
        "xi": xi,
    });
    if let Ok(e) = space.ricci_and_einstein(&p, cfg) {
        out["einstein"] = json!({
            "lambda": e.lambda,
            "lambda_oracle": e.lambda_oracle,
            "ricci_minus_lambda_g": e.residual,
        });
    }
    Ok(out)
}

fn dump_example(id: &str, point: Option<&[String]>, cfg: &Config) -> Result<Value, CliError> {
    let entry = catalog::get(id)?;
    let imm = &entry.immersion;
    let space = imm.ambient();
    let u = match point {
        Some(raw) => parse_point(raw, imm.domain_dim())?,
        None => imm.center(),
    };
    let frame = frame_at(imm, &u, cfg)?;
    let sff = second_fundamental_form(imm, &frame, cfg);
    let mean = mean_curvature(&frame, &sff);
    let class = classify(imm, &frame, cfg)?;
    let m = frame.dim();
    let h: Vec<Value> = (0..m)
        .flat_map(|i| (i..m).map(move |j| (i, j)))
        .map(|(i, j)| json!({"ij": [i + 1, j + 1], "h": vec_json(&sff.h[i][j])}))
        .collect();
    let shape: Vec<Value> = frame
        .normal
        .iter()
        .map(|n| json!({"N": vec_json(n), "A_N": mat_json(&shape_operator(space, &frame, &sff, n))}))
        .collect();
    let xi: Vec<Value> = (0..3)
        .map(|a| {
            json!({
                "alpha": a + 1,
                "tangency": class.xi[a],
                "tangential_coeffs": vec_json(&frame.tangential_coeffs(space, &(&class.xi_tangential[a] + &class.xi_normal[a]))),
                "tangential": vec_json(&class.xi_tangential[a]),
                "normal": vec_json(&class.xi_normal[a]),
            })
        })
        .collect();
    Ok(json!({
        "example": entry.id,
        "ambient": space.label(),
        "dim": m,
        "u": u,
        "point": vec_json(&frame.point),
        "frame": frame.tangent.iter().map(vec_json).collect::<Vec<_>>(),
        "induced_metric": mat_json(&frame.gram),
        "normal_basis": frame.normal.iter().map(vec_json).collect::<Vec<_>>(),
        "second_fundamental_form": h,
        "shape_operators": shape,
        "mean_curvature_norm": mean.norm,
        "xi_decomposition": xi,
        "classification": {
            "kind": class.kind,
            "xi": class.xi,
            "dim_xi_t": class.dim_xi_t,
            "dim_xi_n": class.dim_xi_n,
            "invariant_residual": class.invariant_residual,
            "anti_invariant_residual": class.anti_invariant_residual,
            "decomposition_residual": class.decomposition_residual,
        },
        "expected": entry.expected,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_ids() {
        assert_eq!(parse_space("s7-pos", 3).unwrap().unwrap().n(), 1);
        assert_eq!(parse_space("s11-pos", 1).unwrap().unwrap().n(), 2);
        assert!(parse_space("s9-pos", 1).unwrap().is_err());
        assert!(parse_space("clifford-torus", 1).is_none());
        assert!(parse_space("s7-up", 1).is_none());
    }

    #[test]
    fn unit_point() {
        assert_eq!(parse_point(&["e2".into()], 3).unwrap(), vec![0.0, 1.0, 0.0]);
        assert!(parse_point(&["e4".into()], 3).is_err());
        assert_eq!(parse_point(&["0.5".into(), "-1".into()], 2).unwrap(), vec![0.5, -1.0]);
    }

    #[test]
    fn clifford_xi3_is_minus_frame_sum() {
        let v = dump("clifford-torus", Some(&["0".into(), "0".into()]), &Config::default()).unwrap();
        let c = &v["xi_decomposition"][2]["tangential_coeffs"];
        for k in 0..2 {
            assert!((c[k].as_f64().unwrap() + 1.0).abs() < 1e-9, "{c}");
        }
    }

    #[test]
    fn s7_eps() {
        let v = dump("s7-pos", Some(&["e5".into()]), &Config::default()).unwrap();
        assert_eq!(v["eps"], json!([-1.0, -1.0, 1.0]));
    }
}
