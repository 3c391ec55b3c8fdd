use hyperfund::exec::{self, Exec};
use hyperfund::field::{Grid, SolutionField};
use hyperfund::kernels::OperatorFamily;
use hyperfund::quadrature::QuadratureSpec;
use hyperfund::tails::{heaviside_ratio_bound, tail_eval, tlin_bound_check, TailSample};
use hyperfund::transform::{
    apply_transform, desitter_cauchy_parts, edes_weighted_value, solve_desitter_cauchy, solve_edes_weighted, solve_source_problem, T0,
};
use hyperfund::verify::{identity_check, identity_grid, ode_pair_solve, pde_residual, Equation, OdeCoefficients, ResidualReport, Verdict};
use hyperfund::wavecore::{wave_source_family, Profile, SourceFamily};
use hyperfund::Error;
use serde::Serialize;
use serde_json::json;

use crate::config::{CommandKind, ProfileSpec, RunConfig, SourceSpec};
use crate::error::{CliError, ConfigError};
use crate::output::{num, Table};

/// Slack on the step-datum envelope, absorbing quadrature error.
const ENVELOPE_SLACK: f64 = 1e-9;

pub struct Artifact {
    pub verdict: Verdict,
    pub summary: String,
    pub table: Table,
    pub json: serde_json::Value,
}

enum Problem {
    Source(SourceFamily),
    Weighted(SourceFamily),
    Cauchy(Profile, Profile),
}

pub fn run(kind: CommandKind, cfg: &RunConfig, exec: Exec) -> Result<Artifact, CliError> {
    cfg.validate()?;
    match kind {
        CommandKind::Solve => solve(cfg, exec),
        CommandKind::Identities => identities(cfg, exec),
        CommandKind::Residual => residual(cfg, exec),
        CommandKind::Tail => tail(cfg, exec),
        CommandKind::Tlin => tlin(cfg, exec),
    }
}

fn config_json(cfg: &RunConfig) -> serde_json::Value {
    serde_json::to_value(cfg).expect("config serializes")
}

fn grid(cfg: &RunConfig) -> Result<Grid, CliError> {
    let g = &cfg.grid;
    Grid::uniform(g.x_min, g.x_max, g.nx, g.t_min, g.t_max, g.nt).map_err(|e| ConfigError::from_core("grid", e).into())
}

fn source(spec: &Option<SourceSpec>) -> Result<SourceFamily, ConfigError> {
    spec.clone().unwrap_or(SourceSpec::Constant { value: 1.0 }).build()
}

fn problem(cfg: &RunConfig, family: &OperatorFamily) -> Result<Problem, ConfigError> {
    let d = &cfg.data;
    if cfg.grid.t_min < T0 {
        return Err(ConfigError::new("grid.t_min", format!("must be >= {T0}, the initial time")));
    }
    if d.phi0.is_some() || d.phi1.is_some() {
        if *family != OperatorFamily::DeSitterWave {
            return Err(ConfigError::new("data.phi0", "Cauchy data is supported for the de Sitter wave operator only"));
        }
        if d.source.is_some() || d.weighted {
            return Err(ConfigError::new("data.source", "give either a source or Cauchy data, not both"));
        }
        let p0 = d.phi0.clone().unwrap_or(ProfileSpec::Zero).build("data.phi0")?;
        let p1 = d.phi1.clone().unwrap_or(ProfileSpec::Zero).build("data.phi1")?;
        return Ok(Problem::Cauchy(p0, p1));
    }
    if d.weighted {
        if *family != (OperatorFamily::EinsteinDeSitter { m: 1 }) {
            return Err(ConfigError::new("data.weighted", "the weighted problem is defined for edes with index 1"));
        }
        if cfg.grid.t_min <= 0.0 {
            return Err(ConfigError::new("grid.t_min", "the weighted problem needs t_min > 0"));
        }
        return Ok(Problem::Weighted(source(&d.source)?));
    }
    Ok(Problem::Source(source(&d.source)?))
}

fn solve_field(p: &Problem, family: &OperatorFamily, g: &Grid, q: &QuadratureSpec, exec: Exec) -> hyperfund::Result<SolutionField> {
    match p {
        Problem::Source(src) => solve_source_problem(family, src, g, q, exec),
        Problem::Weighted(src) => solve_edes_weighted(src, g, q, exec),
        Problem::Cauchy(p0, p1) => solve_desitter_cauchy(p0, p1, g, q, exec),
    }
}

fn solve(cfg: &RunConfig, exec: Exec) -> Result<Artifact, CliError> {
    let family = cfg.family.resolve()?;
    let p = problem(cfg, &family)?;
    let field = solve_field(&p, &family, &grid(cfg)?, &cfg.quad, exec)?;
    let mut t = Table::new("hyperfund.solution/1", &["x", "t", "u", "est_error", "status"]);
    t.meta("config", config_json(cfg));
    t.meta("family", &field.family);
    t.meta("problem", &field.problem);
    t.meta("method", &field.provenance.method);
    t.meta("max_imag", num(field.max_imag));
    for w in &field.warnings {
        t.meta("warning", w);
    }
    for (k, v) in &field.diagnostics {
        t.meta(&format!("diagnostic.{k}"), num(*v));
    }
    for (it, &tv) in field.grid_t.iter().enumerate() {
        for (ix, &xv) in field.grid_x.iter().enumerate() {
            let status = if field.excluded.contains(&(it, ix)) { "excluded" } else { "ok" };
            let i = it * field.nx() + ix;
            t.push(vec![num(xv), num(tv), num(field.values[i]), num(field.est_errors[i]), status.into()]);
        }
    }
    let summary = format!("solve {} ({}): {} nodes, {} excluded", field.family, field.problem, field.values.len(), field.excluded.len());
    Ok(Artifact {
        verdict: Verdict::Pass,
        summary,
        table: t,
        json: json!({ "schema": "hyperfund.solution/1", "config": config_json(cfg), "field": field }),
    })
}

#[derive(Serialize)]
struct ReportEnvelope<'a> {
    schema: &'static str,
    config: serde_json::Value,
    #[serde(flatten)]
    report: &'a ResidualReport,
}

fn report_artifact(cfg: &RunConfig, schema: &'static str, xname: &'static str, report: ResidualReport) -> Artifact {
    let mut t = Table::new(schema, &[xname, "t", "residual"]);
    t.meta("config", config_json(cfg));
    t.meta("family", &report.family);
    t.meta("check", &report.check);
    t.meta("max_abs", num(report.max_abs));
    t.meta("l2", num(report.l2));
    t.meta("tolerance", num(report.tolerance));
    t.meta("verdict", if report.passed() { "pass" } else { "fail" });
    for p in report.per_point.iter().flatten() {
        t.push(vec![num(p.x), num(p.t), num(p.residual)]);
    }
    let summary = format!(
        "{} {}: max |residual| {:e} vs tolerance {:e} over {} nodes",
        report.check, report.family, report.max_abs, report.tolerance, report.nodes
    );
    let json = serde_json::to_value(ReportEnvelope {
        schema,
        config: config_json(cfg),
        report: &report,
    })
    .expect("report serializes");
    Artifact {
        verdict: report.verdict,
        summary,
        table: t,
        json,
    }
}

fn identities(cfg: &RunConfig, exec: Exec) -> Result<Artifact, CliError> {
    let family = cfg.family.resolve()?;
    let s = &cfg.identities;
    if !(s.t_max > 0.0 && s.t_max.is_finite()) {
        return Err(ConfigError::new("identities.t_max", format!("must be positive, got {}", s.t_max)).into());
    }
    if s.n < 2 {
        return Err(ConfigError::new("identities.n", "need at least 2").into());
    }
    let pair = ode_pair_solve(&OdeCoefficients::for_family(&family), (0.0, s.t_max), s.ode_tol)?;
    let report = identity_check(&family, &pair, &identity_grid(s.t_max, s.n), &cfg.quad, s.tolerance, exec)?;
    Ok(report_artifact(cfg, "hyperfund.identities/1", "b", report))
}

fn residual(cfg: &RunConfig, exec: Exec) -> Result<Artifact, CliError> {
    let family = cfg.family.resolve()?;
    let p = problem(cfg, &family)?;
    let q = cfg.quad;
    let field = solve_field(&p, &family, &grid(cfg)?, &q, exec)?;
    let (h, tol) = (cfg.residual.h, cfg.residual.tolerance);
    let report = match &p {
        Problem::Source(src) => {
            let u = |x: f64, t: f64| Ok(apply_transform(&family, |r, b| wave_source_family(src, &[x], r, b), t, T0, &q)?.value);
            pde_residual(&field, &Equation::Family(family), src, h, tol, u, exec)?
        }
        Problem::Weighted(src) => {
            let u = |x: f64, t: f64| Ok(edes_weighted_value(src, x, t, &q)?.value);
            pde_residual(&field, &Equation::EdesWeighted, src, h, tol, u, exec)?
        }
        Problem::Cauchy(p0, p1) => {
            let u = |x: f64, t: f64| Ok(desitter_cauchy_parts(p0, p1, x, t, &q)?.total());
            pde_residual(&field, &Equation::Family(family), &SourceFamily::constant(0.0, 1), h, tol, u, exec)?
        }
    };
    Ok(report_artifact(cfg, "hyperfund.residual/1", "x", report))
}

fn tail(cfg: &RunConfig, exec: Exec) -> Result<Artifact, CliError> {
    let family = cfg.family.resolve()?;
    if family != OperatorFamily::DeSitterWave {
        return Err(ConfigError::new("family.name", "tail decomposition is defined for the de Sitter wave operator (desitter)").into());
    }
    if cfg.data.source.is_some() || cfg.data.weighted {
        return Err(ConfigError::new("data.source", "tail decomposition takes Cauchy data phi0, phi1").into());
    }
    if cfg.grid.t_min <= 0.0 {
        return Err(ConfigError::new("grid.t_min", "tail decomposition needs t_min > 0").into());
    }
    let s0 = cfg.data.phi0.clone().unwrap_or(ProfileSpec::Heaviside);
    let s1 = cfg.data.phi1.clone().unwrap_or(ProfileSpec::Zero);
    // the envelope is proven for the unit step only
    let step = s0 == ProfileSpec::Heaviside && s1 == ProfileSpec::Zero;
    let (p0, p1) = (s0.build("data.phi0")?, s1.build("data.phi1")?);
    let g = grid(cfg)?;
    let nodes = g.nodes();
    let res = exec::map(exec, &nodes, |&(x, t)| match tail_eval(&p0, &p1, x, t, &cfg.quad) {
        Ok(d) => {
            let bound = heaviside_ratio_bound(t);
            Ok(TailSample {
                x,
                t,
                u: d.u,
                huygensian: d.huygensian,
                tail: d.tail,
                ratio: d.ratio,
                bound,
                quotient: d.ratio / bound,
            })
        }
        Err(Error::SingularEvaluation(_)) => Ok(TailSample {
            x,
            t,
            u: f64::NAN,
            huygensian: f64::NAN,
            tail: f64::NAN,
            ratio: f64::NAN,
            bound: heaviside_ratio_bound(t),
            quotient: f64::NAN,
        }),
        Err(e) => Err(e.at_node(x, t)),
    });
    let rows = res.into_iter().collect::<hyperfund::Result<Vec<_>>>()?;
    let worst = rows.iter().filter(|r| r.ratio.is_finite()).map(|r| r.ratio - r.bound).fold(f64::NEG_INFINITY, f64::max);
    let verdict = if step && worst > ENVELOPE_SLACK { Verdict::Fail } else { Verdict::Pass };
    let verdict_str = if verdict == Verdict::Pass { "pass" } else { "fail" };
    let mut t = Table::new("hyperfund.tail/1", &["x", "t", "u", "huygensian", "tail", "ratio", "bound", "quotient"]);
    t.meta("config", config_json(cfg));
    t.meta("envelope_checked", step);
    t.meta("verdict", verdict_str);
    for r in &rows {
        t.push(vec![num(r.x), num(r.t), num(r.u), num(r.huygensian), num(r.tail), num(r.ratio), num(r.bound), num(r.quotient)]);
    }
    let summary = if step {
        format!("tail: max ratio - envelope {worst:e} over {} nodes", rows.len())
    } else {
        format!("tail: {} nodes (envelope not checked for these data)", rows.len())
    };
    Ok(Artifact {
        verdict,
        summary,
        table: t,
        json: json!({
            "schema": "hyperfund.tail/1",
            "config": config_json(cfg),
            "envelope_checked": step,
            "verdict": verdict,
            "rows": rows,
        }),
    })
}

fn tlin(cfg: &RunConfig, exec: Exec) -> Result<Artifact, CliError> {
    cfg.tlin.data.validate().map_err(|e| ConfigError::from_core("tlin.data", e))?;
    let rep = tlin_bound_check(&cfg.tlin.data, &cfg.tlin.options, &cfg.quad, exec)?;
    let mut t = Table::new("hyperfund.tlin/1", &["set", "x", "t", "u", "huygensian", "tail", "ratio", "bound", "quotient"]);
    t.meta("config", config_json(cfg));
    t.meta("c_short", num(rep.c_short));
    t.meta("c_long", num(rep.c_long));
    t.meta("growth", num(rep.growth));
    t.meta("heldout_max_quotient", num(rep.heldout_max_quotient));
    t.meta("verdict", if rep.verdict == Verdict::Pass { "pass" } else { "fail" });
    for (set, rows) in [("calibration", &rep.calibration), ("heldout", &rep.heldout)] {
        for r in rows {
            t.push(vec![
                set.into(),
                num(r.x),
                num(r.t),
                num(r.u),
                num(r.huygensian),
                num(r.tail),
                num(r.ratio),
                num(r.bound),
                num(r.quotient),
            ]);
        }
    }
    let summary = format!(
        "tlin: C(t<={}) = {:.6}, C(t<={}) = {:.6}, growth {:.2}%, held-out max quotient {:.6}",
        cfg.tlin.options.t_short,
        rep.c_short,
        cfg.tlin.options.t_long,
        rep.c_long,
        100.0 * rep.growth,
        rep.heldout_max_quotient
    );
    Ok(Artifact {
        verdict: rep.verdict,
        summary,
        table: t,
        json: json!({ "schema": "hyperfund.tlin/1", "config": config_json(cfg), "report": rep }),
    })
}
