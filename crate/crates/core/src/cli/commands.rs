use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::antiderivative::{check_antiderivative, default_steps};
use crate::error::Error;
use crate::field::ScalarField;
use crate::ftc::{
    compositionality_check, integrate_box, integrate_box_from_f, integrate_parallelotope,
    integrate_triangle_symmetric, triangle_impossibility_check, IntegralResult, OracleComparison,
    TriangleOptions, CORNER_NAMES,
};
use crate::geometry::{Hypercuboid, Parallelotope};
use crate::oracle::{gauss_legendre_box, monte_carlo_affine, QuadratureConfig};
use crate::polycalc::poly_from_expr;

use super::args::{self, Scalar};
use super::format::{human, human_vec, json as num, json_vec};
use super::{CliError, Command, CommandOutput, QuadArgs, Status};

/// Relative agreement required of `integrate --verify`.
const VERIFY_RTOL: f64 = 1e-8;
/// Standard errors allowed by `parallelotope --verify`.
const VERIFY_SIGMAS: f64 = 4.0;

type Out = Result<CommandOutput, CliError>;

pub fn dispatch(command: &Command) -> Out {
    match command {
        Command::Integrate {
            dim,
            box_spec,
            f,
            big_f,
            exact,
            verify,
            quad,
        } => integrate(
            *dim,
            box_spec,
            f.as_deref(),
            big_f.as_deref(),
            *exact,
            *verify,
            quad,
        ),
        Command::CheckAntiderivative {
            dim,
            box_spec,
            f,
            big_f,
            grid,
            h,
            tol,
        } => check(*dim, box_spec, f, big_f, *grid, h.as_deref(), *tol),
        Command::Parallelotope {
            origin,
            edges,
            f,
            verify,
            samples,
            seed,
            quad,
        } => parallelotope(origin, edges, f, *verify, *samples, *seed, quad),
        Command::Triangle {
            p,
            q,
            r,
            f,
            sym_tol,
            sym_samples,
            quad,
        } => triangle(
            [p, q, r],
            f,
            TriangleOptions {
                sym_tol: *sym_tol,
                sym_samples: *sym_samples,
            },
            quad,
        ),
        Command::SubdivideCheck {
            dim,
            big_f,
            box_spec,
            grid,
            tol,
        } => subdivide(*dim, big_f, box_spec, grid, *tol),
        Command::Impossibility => Ok(impossibility()),
    }
}

fn quad_config(q: &QuadArgs) -> Result<QuadratureConfig, CliError> {
    Ok(QuadratureConfig::new(q.order, q.panels)?)
}

fn quad_inputs(o: &mut CommandOutput, q: &QuadArgs) {
    o.inputs.insert("order".into(), q.order.into());
    o.inputs.insert("panels".into(), q.panels.into());
}

struct BoxInput {
    axes: Vec<(Scalar, Scalar)>,
    h: Hypercuboid,
}

fn read_box(text: &str, dim: Option<usize>) -> Result<BoxInput, CliError> {
    let axes = args::parse_box(text)?;
    if let Some(d) = dim {
        if d != axes.len() {
            return Err(CliError::Usage(format!(
                "--dim {d} but --box has {} axes",
                axes.len()
            )));
        }
    }
    let h = Hypercuboid::new(
        axes.iter().map(|(a, _)| a.value).collect(),
        axes.iter().map(|(_, b)| b.value).collect(),
    )?;
    Ok(BoxInput { axes, h })
}

fn field(flag: &'static str, text: &str, n: usize) -> Result<ScalarField, CliError> {
    Ok(ScalarField::from_expr(args::parse_field(flag, text, n)?))
}

fn contributions_json(r: &IntegralResult) -> Value {
    Value::Array(
        r.contributions
            .iter()
            .map(|c| {
                json!({
                    "label": c.label.to_string(),
                    "sign": c.sign,
                    "value": num(c.value),
                })
            })
            .collect(),
    )
}

fn put_result(o: &mut CommandOutput, r: &IntegralResult) {
    o.result.insert("value".into(), num(r.value));
    o.human.push(format!("value: {}", human(r.value)));
    if let Some(c) = &r.oracle {
        put_oracle(o, c);
    }
    o.diagnostics
        .insert("method".into(), r.method.name().into());
    o.diagnostics
        .insert("contributions".into(), contributions_json(r));
}

fn put_oracle(o: &mut CommandOutput, c: &OracleComparison) {
    o.result.insert("oracle".into(), num(c.value));
    o.result.insert("abs_diff".into(), num(c.abs_diff));
    o.result.insert("rel_diff".into(), num(c.rel_diff));
    o.human.push(format!(
        "oracle: {} (abs diff {}, rel diff {})",
        human(c.value),
        human(c.abs_diff),
        human(c.rel_diff)
    ));
}

fn integrate(
    dim: Option<usize>,
    box_spec: &str,
    f: Option<&str>,
    big_f: Option<&str>,
    exact: bool,
    verify: bool,
    quad: &QuadArgs,
) -> Out {
    let mut o = CommandOutput::new("integrate");
    let b = read_box(box_spec, dim)?;
    let n = b.h.dim();
    let cfg = quad_config(quad)?;
    o.inputs.insert("dim".into(), n.into());
    o.inputs.insert("box".into(), box_spec.into());
    if let Some(t) = f {
        o.inputs.insert("f".into(), t.into());
    }
    if let Some(t) = big_f {
        o.inputs.insert("F".into(), t.into());
    }
    o.inputs.insert("exact".into(), exact.into());
    o.inputs.insert("verify".into(), verify.into());
    quad_inputs(&mut o, quad);

    let f_expr = f.map(|t| args::parse_field("f", t, n)).transpose()?;
    let big_f_expr = big_f.map(|t| args::parse_field("F", t, n)).transpose()?;

    let oracle = match (&f_expr, verify) {
        (Some(e), true) => Some(gauss_legendre_box(
            &ScalarField::from_expr(e.clone()),
            &b.h,
            &cfg,
        )?),
        _ => None,
    };

    if exact {
        let lower = b
            .axes
            .iter()
            .map(|(a, _)| a.exact())
            .collect::<Result<Vec<_>, _>>()?;
        let upper = b
            .axes
            .iter()
            .map(|(_, u)| u.exact())
            .collect::<Result<Vec<_>, _>>()?;
        let value = match (&f_expr, &big_f_expr) {
            (Some(e), _) => poly_from_expr(e)?.box_integral(&lower, &upper)?,
            (None, Some(e)) => poly_from_expr(e)?.vertex_sum(&lower, &upper)?,
            (None, None) => unreachable!("clap requires --f or --F"),
        };
        let approx = value.to_f64().unwrap_or(f64::NAN);
        o.result.insert("value".into(), value.to_string().into());
        o.human.push(format!("value: {value}"));
        o.diagnostics.insert("method".into(), "exact".into());
        o.diagnostics.insert("value_f64".into(), num(approx));
        if let Some(v) = oracle {
            let c = OracleComparison::new(approx, v);
            put_oracle(&mut o, &c);
            verdict(&mut o, &c);
        }
        return Ok(o);
    }

    let r = match (&f_expr, &big_f_expr) {
        (Some(e), _) => integrate_box_from_f(&ScalarField::from_expr(e.clone()), &b.h, &cfg)?,
        (None, Some(e)) => integrate_box(&ScalarField::from_expr(e.clone()), &b.h)?,
        (None, None) => unreachable!("clap requires --f or --F"),
    };
    let r = match oracle {
        Some(v) => r.with_oracle(v),
        None => r,
    };
    put_result(&mut o, &r);
    if let Some(c) = &r.oracle {
        verdict(&mut o, c);
    }
    Ok(o)
}

fn verdict(o: &mut CommandOutput, c: &OracleComparison) {
    let ok = c.rel_diff <= VERIFY_RTOL;
    o.diagnostics.insert("verify_rtol".into(), num(VERIFY_RTOL));
    if !ok {
        o.status = Status::Fail;
        o.human.push(format!(
            "verification failed: rel diff {} > {}",
            human(c.rel_diff),
            human(VERIFY_RTOL)
        ));
    }
}

fn check(
    dim: Option<usize>,
    box_spec: &str,
    f: &str,
    big_f: &str,
    grid: usize,
    h: Option<&str>,
    tol: f64,
) -> Out {
    let mut o = CommandOutput::new("check-antiderivative");
    let b = read_box(box_spec, dim)?;
    let n = b.h.dim();
    o.inputs.insert("dim".into(), n.into());
    o.inputs.insert("box".into(), box_spec.into());
    o.inputs.insert("f".into(), f.into());
    o.inputs.insert("F".into(), big_f.into());
    o.inputs.insert("grid".into(), grid.into());
    o.inputs.insert("tol".into(), num(tol));
    let f = field("f", f, n)?;
    let big_f = field("F", big_f, n)?;
    let steps = match h {
        None => default_steps(&b.h),
        Some(t) => {
            let v = args::parse_vector("h", t)?;
            match v.len() {
                1 => vec![v[0]; n],
                k if k == n => v,
                k => {
                    return Err(CliError::Usage(format!(
                        "--h: expected 1 or {n} steps, got {k}"
                    )))
                }
            }
        }
    };
    o.inputs.insert("h".into(), json_vec(&steps));

    let rep = check_antiderivative(&f, &big_f, &b.h, grid, &steps, tol)?;
    o.result.insert("value".into(), num(rep.max_rel_deviation));
    o.diagnostics
        .insert("points_checked".into(), rep.points_checked.into());
    o.diagnostics
        .insert("max_abs_deviation".into(), num(rep.max_abs_deviation));
    o.diagnostics
        .insert("max_rel_deviation".into(), num(rep.max_rel_deviation));
    o.diagnostics.insert("scale".into(), num(rep.scale));
    o.diagnostics
        .insert("worst_point".into(), json_vec(&rep.worst_point));
    o.diagnostics
        .insert("worst_mixed_partial".into(), num(rep.worst_mixed_partial));
    o.diagnostics
        .insert("worst_integrand".into(), num(rep.worst_integrand));
    o.diagnostics.insert("passed".into(), rep.passed.into());
    o.human
        .push(format!("points checked: {}", rep.points_checked));
    o.human.push(format!(
        "max abs deviation: {}",
        human(rep.max_abs_deviation)
    ));
    o.human.push(format!(
        "max rel deviation: {}",
        human(rep.max_rel_deviation)
    ));
    o.human.push(format!(
        "worst point: {} (mixed partial {}, f {})",
        human_vec(&rep.worst_point),
        human(rep.worst_mixed_partial),
        human(rep.worst_integrand)
    ));
    if rep.passed {
        o.human.push(format!("pass at tol {}", human(tol)));
    } else {
        o.status = Status::Fail;
        o.human.push(format!("FAIL at tol {}", human(tol)));
    }
    Ok(o)
}

fn parallelotope(
    origin: &str,
    edges: &str,
    f: &str,
    verify: bool,
    samples: u64,
    seed: u64,
    quad: &QuadArgs,
) -> Out {
    let mut o = CommandOutput::new("parallelotope");
    o.inputs.insert("origin".into(), origin.into());
    o.inputs.insert("edges".into(), edges.into());
    o.inputs.insert("f".into(), f.into());
    o.inputs.insert("verify".into(), verify.into());
    if verify {
        o.inputs.insert("samples".into(), samples.into());
        o.inputs.insert("seed".into(), seed.into());
    }
    quad_inputs(&mut o, quad);
    let origin = args::parse_vector("origin", origin)?;
    let columns = args::parse_columns("edges", edges)?;
    let n = origin.len();
    let field = field("f", f, n)?;
    let phi = Parallelotope::new(origin.clone(), columns.clone())?;
    let cfg = quad_config(quad)?;
    let r = integrate_parallelotope(&field, &phi, &cfg)?;
    o.diagnostics.insert("det".into(), num(phi.det()));
    o.diagnostics
        .insert("marked_vertex".into(), json_vec(&phi.marked_point()));
    if !verify {
        put_result(&mut o, &r);
        return Ok(o);
    }
    let mc = monte_carlo_affine(&field, &origin, &columns, samples, seed)?;
    let r = r.with_oracle(mc.estimate);
    put_result(&mut o, &r);
    let sigmas = mc.sigmas_from(r.value);
    o.diagnostics.insert(
        "monte_carlo".into(),
        json!({
            "estimate": num(mc.estimate),
            "std_error": num(mc.std_error),
            "samples": mc.samples,
            "seed": mc.seed,
            "sigmas": num(sigmas),
        }),
    );
    o.human.push(format!(
        "monte carlo: std error {}, {} sigma",
        human(mc.std_error),
        human(sigmas)
    ));
    if sigmas.is_nan() || sigmas > VERIFY_SIGMAS {
        o.status = Status::Fail;
        o.human
            .push(format!("verification failed: beyond {VERIFY_SIGMAS} sigma"));
    }
    Ok(o)
}

fn triangle(points: [&String; 3], f: &str, opts: TriangleOptions, quad: &QuadArgs) -> Out {
    let mut o = CommandOutput::new("triangle");
    for (name, text) in ["p", "q", "r"].into_iter().zip(points) {
        o.inputs.insert(name.into(), text.as_str().into());
    }
    o.inputs.insert("f".into(), f.into());
    o.inputs.insert("sym_tol".into(), num(opts.sym_tol));
    o.inputs
        .insert("sym_samples".into(), opts.sym_samples.into());
    quad_inputs(&mut o, quad);
    let p = args::parse_point2("p", points[0])?;
    let q = args::parse_point2("q", points[1])?;
    let r = args::parse_point2("r", points[2])?;
    let field = field("f", f, 2)?;
    let cfg = quad_config(quad)?;
    match integrate_triangle_symmetric(&field, p, q, r, &cfg, &opts) {
        Ok(t) => {
            put_result(&mut o, &t.result);
            let s = &t.symmetry;
            o.diagnostics
                .insert("mirror_vertex".into(), json_vec(&t.mirror_vertex));
            o.diagnostics
                .insert("parallelogram_value".into(), num(t.parallelogram_value));
            o.diagnostics.insert(
                "symmetry".into(),
                json!({
                    "samples": s.samples,
                    "worst_t": num(s.worst_t),
                    "max_deviation": num(s.max_deviation),
                    "tolerance": num(s.tolerance),
                    "passed": s.passed,
                }),
            );
            o.human
                .push(format!("mirror vertex S: {}", human_vec(&t.mirror_vertex)));
            o.human.push(format!(
                "symmetry: max deviation {} over {} samples",
                human(s.max_deviation),
                s.samples
            ));
            Ok(o)
        }
        Err(Error::Asymmetric {
            t,
            deviation,
            tolerance,
        }) => {
            let m = [(q[0] + r[0]) / 2.0, (q[1] + r[1]) / 2.0];
            let d = [(r[0] - q[0]) / 2.0, (r[1] - q[1]) / 2.0];
            let plus = [m[0] + t * d[0], m[1] + t * d[1]];
            let minus = [m[0] - t * d[0], m[1] - t * d[1]];
            o.status = Status::Fail;
            o.result.insert("value".into(), Value::Null);
            o.diagnostics.insert(
                "symmetry".into(),
                json!({
                    "samples": opts.sym_samples,
                    "worst_t": num(t),
                    "max_deviation": num(deviation),
                    "tolerance": num(tolerance),
                    "worst_points": [json_vec(&plus), json_vec(&minus)],
                    "passed": false,
                }),
            );
            o.human.push(format!(
                "symmetry check failed at t = {}: f{} and f{} differ by {} > {}",
                human(t),
                human_vec(&plus),
                human_vec(&minus),
                human(deviation),
                human(tolerance)
            ));
            Ok(o)
        }
        Err(e) => Err(e.into()),
    }
}

fn subdivide(dim: Option<usize>, big_f: &str, box_spec: &str, grid: &str, tol: f64) -> Out {
    let mut o = CommandOutput::new("subdivide-check");
    let b = read_box(box_spec, dim)?;
    let n = b.h.dim();
    o.inputs.insert("dim".into(), n.into());
    o.inputs.insert("F".into(), big_f.into());
    o.inputs.insert("box".into(), box_spec.into());
    o.inputs.insert("grid".into(), grid.into());
    o.inputs.insert("tol".into(), num(tol));
    let big_f = field("F", big_f, n)?;
    let counts = args::parse_counts("grid", grid)?;
    if counts.len() != n {
        return Err(CliError::Usage(format!(
            "--grid has {} entries for {n} axes",
            counts.len()
        )));
    }
    let cuts = b.h.equal_grid_cuts(&counts)?;
    let rep = compositionality_check(&big_f, &b.h, &cuts)?;
    let c = OracleComparison::new(rep.lhs, rep.rhs);
    o.result.insert("value".into(), num(rep.lhs));
    o.human.push(format!("lhs: {}", human(rep.lhs)));
    o.human.push(format!(
        "rhs: {} over {} pieces",
        human(rep.rhs),
        rep.pieces
    ));
    o.human.push(format!("diff: {}", human(rep.abs_diff)));
    o.result.insert("oracle".into(), num(rep.rhs));
    o.result.insert("abs_diff".into(), num(c.abs_diff));
    o.result.insert("rel_diff".into(), num(c.rel_diff));
    o.diagnostics.insert("pieces".into(), rep.pieces.into());
    let allowed = tol * rep.lhs.abs().max(1.0);
    if rep.abs_diff.is_nan() || rep.abs_diff > allowed {
        o.status = Status::Fail;
        o.human.push(format!("FAIL at tol {}", human(tol)));
    }
    Ok(o)
}

fn impossibility() -> CommandOutput {
    let mut o = CommandOutput::new("impossibility");
    let report = triangle_impossibility_check();
    let target: Map<String, Value> = CORNER_NAMES
        .iter()
        .zip(report.target)
        .map(|(c, v)| (c.to_string(), v.into()))
        .collect();
    o.result
        .insert("value".into(), report.total_matches().into());
    o.diagnostics.insert("target".into(), Value::Object(target));
    o.diagnostics
        .insert("symmetries".into(), report.symmetries.into());
    o.diagnostics
        .insert("distinct_targets".into(), report.distinct_targets.into());
    let mut per = Vec::new();
    for s in &report.searches {
        let t = &s.triangulation;
        let corners = |tri: &[usize; 3]| tri.iter().map(|&k| CORNER_NAMES[k]).collect::<String>();
        per.push(json!({
            "diagonal": t.name,
            "triangles": [corners(&t.triangles[0]), corners(&t.triangles[1])],
            "assignments": s.assignments,
            "matches": s.matches,
            "shared_coefficients": s.shared_coefficients.iter().collect::<Vec<_>>(),
            "unshared_coefficients": s.unshared_coefficients.iter().collect::<Vec<_>>(),
            "zero_vector_matches": s.zero_vector_matches,
            "shared_cancel_matches": s.shared_cancel_matches,
        }));
        let shared: Vec<String> = s.shared_coefficients.iter().map(i32::to_string).collect();
        o.human.push(format!(
            "diagonal {}: {} of {} assignments match; shared-vertex coefficients {{{}}}",
            t.name,
            s.matches,
            s.assignments,
            shared.join(", ")
        ));
    }
    o.diagnostics
        .insert("triangulations".into(), Value::Array(per));
    o.diagnostics
        .insert("claim_holds".into(), report.claim_holds.into());
    let counts: Vec<usize> = report.searches.iter().map(|s| s.matches).collect();
    let per_assign = report.searches.first().map_or(0, |s| s.assignments);
    let all_same = counts.windows(2).all(|w| w[0] == w[1]);
    let summary = if all_same {
        format!(
            "{} of {per_assign} assignments match, per triangulation",
            counts[0]
        )
    } else {
        format!("{counts:?} of {per_assign} assignments match")
    };
    if report.claim_holds {
        o.human.push(format!("{summary}; claim verified"));
    } else {
        o.status = Status::Fail;
        o.human.push(format!("{summary}; claim refuted"));
    }
    o
}
