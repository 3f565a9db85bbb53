use std::fmt::Write as _;

use majgeom::bloch::bloch_to_qubit;
use majgeom::canonical::canonicalize_triple;
use majgeom::experiments::{
    default_grid, linspace, singularity_scan, three_box_report, three_box_states, ScanParams, ScanRecord,
};
use majgeom::majorana::{
    discriminant_degeneracy, entanglement_entropy_state, majorana_points, majorana_polynomial,
    normalization_from_overlaps, symmetrize,
};
use majgeom::nlevel_values::{
    abl_distribution, coherent_point, modular_value_direct, projector, qutrit_modular_value_geometric,
    qutrit_projector_weak_value_geometric, weak_value_direct, EigenChoice, GellMannDirection, NLevelModularSpec,
};
use majgeom::numerics::{identity, solve_polynomial, unitarity_residual};
use majgeom::qubit_values::{self, QubitModularSpec};
use majgeom::{CMatrix, Error, GeometricBreakdown, NLevelState, PolarComplex, ProjectiveRoot};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::scenario::{self, EmptyScenario, GridInput, ScanScenario, Warnings};
use crate::{CliError, Command, Context, Mode, Output};

const VALUE_HEADER: &str = "quantity,qubit,modulus,argument,solid_angle,re,im\n";

fn num(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable result")
}

fn load<T: DeserializeOwned + Serialize>(ctx: &Context) -> Result<T, CliError> {
    let text = ctx
        .scenario_text
        .as_deref()
        .ok_or_else(|| CliError::usage("this command needs --scenario PATH or --input JSON"))?;
    scenario::parse(text)
}

fn polar_json(p: &PolarComplex) -> Value {
    let z = p.to_complex();
    let mut v = json!({ "modulus": p.modulus, "argument": p.argument, "re": z.re, "im": z.im });
    if let Some(u) = p.unwrapped_argument {
        v["unwrapped_argument"] = json!(u);
    }
    v
}

fn complex_json(z: majgeom::Complex64) -> Value {
    json!([z.re, z.im])
}

fn matrix_json(m: &CMatrix) -> Value {
    Value::Array((0..m.nrows()).map(|r| Value::Array((0..m.ncols()).map(|c| complex_json(m[(r, c)])).collect())).collect())
}

fn state_json(s: &NLevelState) -> Value {
    Value::Array(s.coefficients().iter().map(|z| complex_json(*z)).collect())
}

/// Geometric and/or direct evaluation of one quantity.
struct Evaluated {
    geometric: Option<(PolarComplex, GeometricBreakdown)>,
    geometric_error: Option<Error>,
    direct: Option<PolarComplex>,
    provenance: &'static str,
}

/// Runs the requested routes. In `both` mode an out-of-range
/// canonicalization falls back to the direct value alone.
fn evaluate(
    mode: Mode,
    geometric: impl FnOnce() -> majgeom::Result<(PolarComplex, GeometricBreakdown)>,
    direct: impl FnOnce() -> majgeom::Result<PolarComplex>,
) -> Result<Evaluated, CliError> {
    let mut ev = Evaluated { geometric: None, geometric_error: None, direct: None, provenance: mode.name() };
    if mode != Mode::Direct {
        match geometric() {
            Ok(g) => ev.geometric = Some(g),
            Err(e @ Error::EtaOutOfRange { .. }) if mode == Mode::Both => {
                ev.geometric_error = Some(e);
                ev.provenance = "direct";
            }
            Err(e) => return Err(e.into()),
        }
    }
    if mode != Mode::Geometric {
        ev.direct = Some(direct()?);
    }
    Ok(ev)
}

fn render_value(ev: &Evaluated, ctx: &Context) -> (Value, String, bool) {
    let mut results = serde_json::Map::new();
    let mut csv = String::from(VALUE_HEADER);
    let a = |x: f64| ctx.angle(x);
    if let Some((g, b)) = &ev.geometric {
        let mut v = polar_json(g);
        v["breakdown"] = to_json(b);
        results.insert("geometric".into(), v);
        for (k, f) in b.factors.iter().enumerate() {
            let z = f.value();
            let _ = writeln!(
                csv,
                "geometric,{},{},{},{},{},{}",
                k + 1,
                num(f.modulus_ratio),
                num(a(-0.5 * f.solid_angle)),
                num(a(f.solid_angle)),
                num(z.re),
                num(z.im)
            );
        }
        let z = g.to_complex();
        let total_angle: f64 = b.factors.iter().map(|f| f.solid_angle).sum();
        let _ = writeln!(
            csv,
            "geometric,total,{},{},{},{},{}",
            num(g.modulus),
            num(a(g.argument)),
            num(a(total_angle)),
            num(z.re),
            num(z.im)
        );
    }
    if let Some(e) = &ev.geometric_error {
        results.insert("geometric_error".into(), json!({ "kind": e.kind(), "message": e.to_string() }));
    }
    if let Some(d) = &ev.direct {
        results.insert("direct".into(), polar_json(d));
        let z = d.to_complex();
        let _ = writeln!(csv, "direct,total,{},{},,{},{}", num(d.modulus), num(a(d.argument)), num(z.re), num(z.im));
    }
    let mut mismatch = false;
    if let (Some((g, _)), Some(d)) = (&ev.geometric, &ev.direct) {
        let (m, arg) = g.discrepancy(d);
        mismatch = !g.agrees_with(d, ctx.tolerances.compare);
        results.insert("agreement".into(), json!({ "modulus_relative": m, "argument": arg }));
    }
    (Value::Object(results), csv, mismatch)
}

fn value_output(scenario: Value, ev: Evaluated, ctx: &Context, warnings: Warnings) -> Output {
    let (results, csv, mismatch) = render_value(&ev, ctx);
    Output { scenario, results, csv, provenance: ev.provenance, mismatch, warnings: warnings.0 }
}

pub(crate) fn dispatch(cmd: &Command, ctx: &Context) -> Result<Output, CliError> {
    match cmd {
        Command::QubitWeak => qubit_weak(ctx),
        Command::QubitModular => qubit_modular(ctx),
        Command::QutritWeak => qutrit_weak(ctx),
        Command::QutritModular => qutrit_modular(ctx),
        Command::NlevelDirect => nlevel_direct(ctx),
        Command::Majorana => majorana(ctx),
        Command::Canonicalize => canonicalize(ctx),
        Command::ScanSingularity(args) => scan(ctx, args),
        Command::ThreeBox => three_box(ctx),
        Command::Abl => abl(ctx),
    }
}

fn qubit_weak(ctx: &Context) -> Result<Output, CliError> {
    let sc: scenario::QubitWeakScenario = load(ctx)?;
    let mut w = Warnings::default();
    let (i, r, f) = (w.qubit("i", &sc.i)?, w.qubit("r", &sc.r)?, w.qubit("f", &sc.f)?);
    let ev = evaluate(
        ctx.mode,
        || qubit_values::projector_weak_value_geometric(&i, &r, &f),
        || qubit_values::projector_weak_value_direct(&bloch_to_qubit(&i), &bloch_to_qubit(&r), &bloch_to_qubit(&f)),
    )?;
    Ok(value_output(to_json(&sc), ev, ctx, w))
}

fn qubit_modular(ctx: &Context) -> Result<Output, CliError> {
    let sc: scenario::QubitModularScenario = load(ctx)?;
    let mut w = Warnings::default();
    let (i, f) = (w.qubit("i", &sc.i)?, w.qubit("f", &sc.f)?);
    let spec = QubitModularSpec { r: w.bloch("r", &sc.r)?, alpha: sc.alpha, beta: sc.beta };
    let ev = evaluate(
        ctx.mode,
        || qubit_values::modular_value_geometric(&i, &spec, &f),
        || qubit_values::modular_value_direct(&bloch_to_qubit(&i), &spec, &bloch_to_qubit(&f)),
    )?;
    Ok(value_output(to_json(&sc), ev, ctx, w))
}

fn qutrit_weak(ctx: &Context) -> Result<Output, CliError> {
    let sc: scenario::QutritWeakScenario = load(ctx)?;
    let mut w = Warnings::default();
    let i = w.state("i", &sc.i, Some(3))?;
    let r = w.state("r", &sc.r, Some(3))?;
    let f = w.state("f", &sc.f, Some(3))?;
    let ev = evaluate(
        ctx.mode,
        || qutrit_projector_weak_value_geometric(&i, &r, &f),
        || weak_value_direct(&i, &projector(&r), &f),
    )?;
    Ok(value_output(to_json(&sc), ev, ctx, w))
}

fn eigen_choice(e: &Option<scenario::EigenInput>) -> Result<EigenChoice, CliError> {
    match e {
        None => Ok(EigenChoice::Largest),
        Some(scenario::EigenInput::Index(k)) => Ok(EigenChoice::Index(*k)),
        Some(scenario::EigenInput::Named(s)) if s == "largest" => Ok(EigenChoice::Largest),
        Some(scenario::EigenInput::Named(s)) => Err(CliError::usage(format!("unknown eigen choice {s:?}"))),
    }
}

fn qutrit_modular(ctx: &Context) -> Result<Output, CliError> {
    let sc: scenario::QutritModularScenario = load(ctx)?;
    let mut w = Warnings::default();
    let i = w.state("i", &sc.i, Some(3))?;
    let f = w.state("f", &sc.f, Some(3))?;
    let mut spec = match (&sc.r8, &sc.observable) {
        (Some(r8), None) => NLevelModularSpec::gell_mann(&GellMannDirection::new(*r8)?, sc.alpha, sc.beta),
        (None, Some(m)) => {
            let a = scenario::matrix("observable", m)?;
            if a.nrows() != 3 {
                return Err(CliError::usage("observable must be 3x3"));
            }
            NLevelModularSpec::new(a, sc.alpha, sc.beta)
        }
        _ => return Err(CliError::usage("give exactly one of `r8` and `observable`")),
    };
    spec.eigen_choice = eigen_choice(&sc.eigen)?;
    let ev = evaluate(
        ctx.mode,
        || qutrit_modular_value_geometric(&i, &spec, &f),
        || modular_value_direct(&i, &spec, &f),
    )?;
    Ok(value_output(to_json(&sc), ev, ctx, w))
}

fn nlevel_direct(ctx: &Context) -> Result<Output, CliError> {
    if ctx.mode == Mode::Geometric {
        return Err(CliError::usage("nlevel-direct has no geometric route; use --mode direct or both"));
    }
    let sc: scenario::NLevelDirectScenario = load(ctx)?;
    let mut w = Warnings::default();
    let a = scenario::matrix("observable", &sc.observable)?;
    let i = w.state("i", &sc.i, Some(a.nrows()))?;
    let f = w.state("f", &sc.f, Some(a.nrows()))?;
    let weak = weak_value_direct(&i, &a, &f)?;
    let spec = match (sc.theta, sc.alpha) {
        (Some(t), _) => Some(NLevelModularSpec::evolution(a.clone(), t)),
        (None, Some(alpha)) => Some(NLevelModularSpec::new(a.clone(), alpha, sc.beta.unwrap_or(0.0))),
        (None, None) => None,
    };
    let modular = spec.map(|s| modular_value_direct(&i, &s, &f)).transpose()?;
    let mut results = json!({ "dim": a.nrows(), "weak_value": polar_json(&weak) });
    let mut csv = String::from("quantity,modulus,argument,re,im\n");
    let mut row = |name: &str, p: &PolarComplex| {
        let z = p.to_complex();
        let _ = writeln!(csv, "{name},{},{},{},{}", num(p.modulus), num(ctx.angle(p.argument)), num(z.re), num(z.im));
    };
    row("weak_value", &weak);
    if let Some(m) = &modular {
        results["modular_value"] = polar_json(m);
        row("modular_value", m);
    }
    Ok(Output { scenario: to_json(&sc), results, csv, provenance: "direct", mismatch: false, warnings: w.0 })
}

fn majorana(ctx: &Context) -> Result<Output, CliError> {
    let sc: scenario::MajoranaScenario = load(ctx)?;
    let mut w = Warnings::default();
    let state = match (&sc.state, &sc.points) {
        (Some(s), None) => w.state("state", s, None)?,
        (None, Some(p)) => {
            let pts = p.iter().enumerate().map(|(k, v)| w.bloch(&format!("points[{k}]"), v)).collect::<Result<Vec<_>, _>>()?;
            symmetrize(&pts)?.0
        }
        _ => return Err(CliError::usage("give exactly one of `state` and `points`")),
    };
    let rep = majorana_points(&state)?;
    let (back, _) = symmetrize(&rep.points)?;
    let roots: Vec<Value> = solve_polynomial(&majorana_polynomial(&state))?
        .iter()
        .map(|r| match r {
            ProjectiveRoot::Finite(z) => complex_json(*z),
            ProjectiveRoot::AtInfinity => json!("infinity"),
        })
        .collect();
    let angles: Vec<Value> = rep.points.iter().map(|p| json!({ "polar": p.theta(), "azimuth": p.phi() })).collect();
    let mut results = json!({
        "dim": state.dim(),
        "state": state_json(&state),
        "points": to_json(&rep.points),
        "angles": angles,
        "roots": roots,
        "k": rep.k,
        "k_from_overlaps": normalization_from_overlaps(&rep.points)?,
        "reconstruction_fidelity": back.fidelity(&state).powi(2),
        "product_state": coherent_point(&state).is_some(),
    });
    if state.dim() == 3 {
        results["discriminant"] = json!(discriminant_degeneracy(&state)?);
        results["entanglement_entropy"] = json!(entanglement_entropy_state(&state)?);
    }
    let mut csv = String::from("index,x,y,z,polar,azimuth\n");
    for (k, p) in rep.points.iter().enumerate() {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            k + 1,
            num(p.x),
            num(p.y),
            num(p.z),
            num(ctx.angle(p.theta())),
            num(ctx.angle(p.phi()))
        );
    }
    Ok(Output { scenario: to_json(&sc), results, csv, provenance: "direct", mismatch: false, warnings: w.0 })
}

fn canonicalize(ctx: &Context) -> Result<Output, CliError> {
    let sc: scenario::QutritWeakScenario = load(ctx)?;
    let mut w = Warnings::default();
    let i = w.state("i", &sc.i, Some(3))?;
    let r = w.state("r", &sc.r, Some(3))?;
    let f = w.state("f", &sc.f, Some(3))?;
    let t = canonicalize_triple(&i, &r, &f)?;
    let results = json!({
        "u1": matrix_json(&t.u1),
        "u2": matrix_json(&t.u2),
        "u_total": matrix_json(&t.u_total),
        "unitarity_residual": unitarity_residual(&t.u_total),
        "r_vec": to_json(&t.r_vec),
        "f_vec": to_json(&t.f_vec),
        "eta": t.f_params.theta,
        "r_params": to_json(&t.r_params),
        "f_params": to_json(&t.f_params),
        "i_points": to_json(&t.i_rep.points),
        "k_i": t.i_rep.k,
        "psi_i": state_json(&t.psi_i),
        "psi_r": state_json(&t.psi_r),
        "psi_f": state_json(&t.psi_f),
    });
    let mut csv = String::from("matrix,row,col,re,im\n");
    for (name, m) in [("u1", &t.u1), ("u2", &t.u2), ("u_total", &t.u_total)] {
        for r in 0..3 {
            for c in 0..3 {
                let _ = writeln!(csv, "{name},{r},{c},{},{}", num(m[(r, c)].re), num(m[(r, c)].im));
            }
        }
    }
    Ok(Output { scenario: to_json(&sc), results, csv, provenance: "geometric", mismatch: false, warnings: w.0 })
}

fn flag_names(r: &ScanRecord) -> String {
    let mut v = Vec::new();
    if r.flags.bifurcation {
        v.push("bifurcation");
    }
    if r.flags.singular {
        v.push("singular");
    }
    if r.flags.near_degenerate {
        v.push("near_degenerate");
    }
    v.join("|")
}

fn scan(ctx: &Context, args: &crate::ScanArgs) -> Result<Output, CliError> {
    let base: ScanScenario = match &ctx.scenario_text {
        Some(t) => scenario::parse(t)?,
        None => ScanScenario { version: 1, grid: None, epsilon: None, chi1: None, chi2: None },
    };
    let defaults = ScanParams::default();
    let default_grid_input = {
        let g = default_grid(2);
        GridInput { start: g[0], stop: g[1], count: 512 }
    };
    let g0 = base.grid.clone().unwrap_or(default_grid_input);
    let grid_in = GridInput {
        start: args.start.unwrap_or(g0.start),
        stop: args.stop.unwrap_or(g0.stop),
        count: args.count.unwrap_or(g0.count),
    };
    if grid_in.count < 2 {
        return Err(CliError::usage("scan needs at least 2 grid points"));
    }
    let effective = ScanScenario {
        version: 1,
        grid: Some(grid_in.clone()),
        epsilon: Some(args.epsilon.or(base.epsilon).unwrap_or(defaults.epsilon)),
        chi1: Some(args.chi1.or(base.chi1).unwrap_or(defaults.chi1)),
        chi2: Some(args.chi2.or(base.chi2).unwrap_or(defaults.chi2)),
    };
    let params = ScanParams {
        epsilon: effective.epsilon.unwrap_or_default(),
        chi1: effective.chi1.unwrap_or_default(),
        chi2: effective.chi2.unwrap_or_default(),
    };
    let grid = linspace(grid_in.start, grid_in.stop, grid_in.count);
    let res = singularity_scan(&grid, &params)?;

    let mut mismatch = false;
    if ctx.mode == Mode::Both {
        for r in res.records.iter().filter(|r| !r.flags.singular) {
            if let (Some(m), Some(a), Some(d)) = (r.wv_modulus, r.wv_argument, &r.wv_direct) {
                mismatch |= !PolarComplex::new(m, a).agrees_with(d, ctx.tolerances.compare);
            }
        }
    }
    let (below, above) = res.omega_sum_deviation().map_or((None, None), |(b, a)| (Some(b), Some(a)));
    let mut results = json!({
        "params": to_json(&res.params),
        "grid": to_json(&grid_in),
        "theta_b": res.theta_b,
        "theta_b_over_pi": res.theta_b.map(|t| t / std::f64::consts::PI),
        "theta_c": res.theta_c,
        "theta_c_over_pi": res.theta_c.map(|t| t / std::f64::consts::PI),
        "jumps": to_json(&res.jumps),
        "omega1_max_step": res.omega1_max_step,
        "omega2_max_step": res.omega2_max_step,
        "omega_sum_deviation": { "below": below, "above": above },
    });
    let mut records = to_json(&res.records);
    if ctx.mode == Mode::Direct {
        for r in records.as_array_mut().expect("array") {
            let obj = r.as_object_mut().expect("object");
            obj.remove("wv_modulus");
            obj.remove("wv_argument");
        }
    } else if ctx.mode == Mode::Geometric {
        for r in records.as_array_mut().expect("array") {
            r.as_object_mut().expect("object").remove("wv_direct");
        }
    }
    results["records"] = records;

    let a = |x: f64| ctx.angle(x);
    let mut csv = String::from("theta,alpha1,alpha2,beta1,beta2,omega1,omega2,wv_mod,wv_arg,flags\n");
    for r in &res.records {
        let (m, arg) = match ctx.mode {
            Mode::Direct => (r.wv_direct.map(|d| d.modulus), r.wv_direct.map(|d| d.argument)),
            _ => (r.wv_modulus, r.wv_argument),
        };
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{}",
            num(a(r.theta)),
            num(a(r.alpha1)),
            num(a(r.alpha2)),
            num(a(r.beta1)),
            num(a(r.beta2)),
            opt(r.omega1.map(a)),
            opt(r.omega2.map(a)),
            opt(m),
            opt(arg.map(a)),
            flag_names(r)
        );
    }
    Ok(Output { scenario: to_json(&effective), results, csv, provenance: ctx.mode.name(), mismatch, warnings: vec![] })
}

fn three_box(ctx: &Context) -> Result<Output, CliError> {
    let sc: EmptyScenario = match &ctx.scenario_text {
        Some(t) => scenario::parse(t)?,
        None => EmptyScenario { version: 1 },
    };
    let rep = three_box_report()?;
    let mismatch = ctx.mode == Mode::Both
        && rep.check("geometric_matches_direct").is_some_and(|d| d > ctx.tolerances.compare);
    let mut csv = String::from("box,qubit,modulus,solid_angle,weak_value_re,weak_value_im\n");
    for b in &rep.boxes {
        for (q, f) in b.factors.iter().enumerate() {
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{}",
                b.index,
                q + 1,
                num(f.modulus),
                num(ctx.angle(f.solid_angle)),
                num(f.weak_value.re),
                num(f.weak_value.im)
            );
        }
        let z = b.weak_value.to_complex();
        let total: f64 = b.factors.iter().map(|f| f.solid_angle).sum();
        let _ = writeln!(
            csv,
            "{},total,{},{},{},{}",
            b.index,
            num(b.weak_value.modulus),
            num(ctx.angle(total)),
            num(z.re),
            num(z.im)
        );
    }
    Ok(Output { scenario: to_json(&sc), results: to_json(&rep), csv, provenance: ctx.mode.name(), mismatch, warnings: vec![] })
}

fn matrix_input(m: &CMatrix) -> scenario::MatrixInput {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect()
}

fn state_input(s: &NLevelState) -> scenario::StateInput {
    s.coefficients().iter().map(|z| [z.re, z.im]).collect()
}

/// The one-box contexts `{P_k, 1 - P_k}` and the full three-box context.
fn default_abl_scenario() -> Result<scenario::AblScenario, CliError> {
    let (i, f) = three_box_states();
    let ps: Vec<CMatrix> = (0..3).map(|k| NLevelState::basis(3, k).map(|b| projector(&b))).collect::<Result<_, _>>()?;
    let mut contexts: Vec<scenario::ContextInput> = (0..3)
        .map(|k| scenario::ContextInput {
            name: format!("{{P{0}, 1-P{0}}}", k + 1),
            projectors: vec![matrix_input(&ps[k]), matrix_input(&(identity(3) - &ps[k]))],
        })
        .collect();
    contexts.push(scenario::ContextInput {
        name: "{P1, P2, P3}".into(),
        projectors: ps.iter().map(matrix_input).collect(),
    });
    Ok(scenario::AblScenario { version: 1, i: state_input(&i), f: state_input(&f), contexts })
}

fn abl(ctx: &Context) -> Result<Output, CliError> {
    let sc: scenario::AblScenario = match &ctx.scenario_text {
        None => default_abl_scenario()?,
        Some(t) => scenario::parse(t)?,
    };
    let mut w = Warnings::default();
    let i = w.state("i", &sc.i, None)?;
    let f = w.state("f", &sc.f, Some(i.dim()))?;
    let mut contexts = Vec::with_capacity(sc.contexts.len());
    for c in &sc.contexts {
        let ps = c
            .projectors
            .iter()
            .enumerate()
            .map(|(k, m)| scenario::matrix(&format!("{}[{k}]", c.name), m))
            .collect::<Result<Vec<_>, _>>()?;
        contexts.push((c.name.clone(), abl_distribution(&i, &ps, &f)?));
    }
    let mut csv = String::from("context,outcome,probability\n");
    for (name, probs) in &contexts {
        for (k, p) in probs.iter().enumerate() {
            let _ = writeln!(csv, "\"{}\",{},{}", name.replace('"', "\"\""), k + 1, num(*p));
        }
    }
    let results = json!({
        "contexts": contexts.iter().map(|(n, p)| json!({ "name": n, "probabilities": p })).collect::<Vec<_>>()
    });
    Ok(Output { scenario: to_json(&sc), results, csv, provenance: "direct", mismatch: false, warnings: w.0 })
}
