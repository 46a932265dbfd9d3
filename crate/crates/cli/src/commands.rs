use std::io::Read;
use std::path::Path;

use serde_json::{json, Value};

use aeq_core::bounds::{
    ball_bound, check_ball, check_diameter, check_sphere, diameter_bound,
    general_bound_pipeline_with, lemma_end_check, sphere_bound, BoundReport, PipelineOptions,
};
use aeq_core::constructions::{ConstructionKind, ConstructionSpec};
use aeq_core::error::Error;
use aeq_core::field::Mode;
use aeq_core::geometry::{is_almost_equidistant, Tolerance};
use aeq_core::io::{
    parse_graph_list, parse_matrix_csv, parse_point_set_csv, parse_point_set_json,
    point_set_to_csv, point_set_to_json, AnyPointSet,
};
use aeq_core::matrix::Matrix;
use aeq_core::search::{conjecture1_probe, optimize, SearchConfig, SearchConstraint};
use aeq_core::spectral::{
    certify, eigenvalues, gershgorin_bound, perron_frobenius_check, weyl_check,
};
use aeq_core::tdgraph::min_rank_scan;

use crate::args::{Cli, Command, Format, InputFormat, Kind, PointInput, TheoremArg};
use crate::report::{classify, Outcome, RunReport};

enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CmdResult = Result<Emit, Failure>;

enum Emit {
    Report {
        outcome: Outcome,
        payload: Value,
        message: Option<String>,
    },
    /// Non-report output (point sets, CSV tables) with the outcome it implies.
    Raw(Outcome, String),
}

fn report(outcome: Outcome, payload: Value) -> Emit {
    Emit::Report {
        outcome,
        payload,
        message: None,
    }
}

fn pass_if(ok: bool) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

pub fn run(cli: &Cli) -> Outcome {
    let name = cli.command.name();
    let inputs = json!({ "global": to_json(&cli.global), "args": to_json(&cli.command) });
    match dispatch(cli) {
        Ok(Emit::Report {
            outcome,
            payload,
            message,
        }) => {
            let mut rep = RunReport::new(name, inputs, outcome, payload);
            rep.message = message;
            rep.print();
            outcome
        }
        Ok(Emit::Raw(outcome, text)) => {
            crate::report::emit(&text);
            outcome
        }
        Err(f) => {
            let (outcome, msg, payload) = match f {
                Failure::Core(e) => {
                    let payload = match &e {
                        Error::NotAlmostEquidistant { witness } => {
                            json!({ "holds": false, "witness": witness })
                        }
                        Error::NotTriangleFree { index, witness } => {
                            json!({ "index": index, "witness": witness })
                        }
                        _ => Value::Null,
                    };
                    (classify(&e), e.to_string(), payload)
                }
                Failure::Io(m) => (Outcome::Error, m, Value::Null),
            };
            eprintln!("aeq {name}: {msg}");
            let mut rep = RunReport::error(name, inputs, msg);
            rep.outcome = outcome;
            rep.payload = payload;
            rep.print();
            outcome
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Io(format!("reading stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Failure::Io(format!("reading {}: {e}", path.display())))
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Io(format!("writing {}: {e}", path.display())))
}

fn is_csv(path: &Path, explicit: Option<InputFormat>) -> bool {
    match explicit {
        Some(f) => f == InputFormat::Csv,
        None => path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("csv")),
    }
}

fn load_points(
    path: &Path,
    format: Option<InputFormat>,
    force_exact: bool,
) -> Result<AnyPointSet, Failure> {
    let text = read_text(path)?;
    let any = if is_csv(path, format) {
        AnyPointSet::Float(parse_point_set_csv(&text)?)
    } else {
        parse_point_set_json(&text)?
    };
    Ok(if force_exact {
        AnyPointSet::Exact(any.to_exact()?)
    } else {
        any
    })
}

fn load_input(inp: &PointInput, cli: &Cli) -> Result<AnyPointSet, Failure> {
    load_points(&inp.input, inp.input_format, cli.global.exact)
}

fn tolerance(cli: &Cli, mode: Mode) -> Result<Tolerance, Failure> {
    let tol = match mode {
        Mode::Exact => Tolerance::exact(),
        Mode::Float => Tolerance {
            dist_tol: cli.global.tol,
            eig_tol: cli.global.eig_tol,
        },
    };
    tol.validate(mode)?;
    Ok(tol)
}

fn matrix(path: &Path) -> Result<Matrix<f64>, Failure> {
    Ok(parse_matrix_csv(&read_text(path)?)?)
}

/// Runs `$body` with `$s` bound to the concrete point set.
macro_rules! with_set {
    ($any:expr, $s:ident => $body:expr) => {
        match $any {
            AnyPointSet::Float($s) => $body,
            AnyPointSet::Exact($s) => $body,
        }
    };
}

fn bound_outcome(r: &BoundReport) -> Outcome {
    let stages_ok = r.stages.iter().all(|s| s.passed);
    let spectral_ok = r.detail.get("spectral_ok").is_none_or(|v| *v == 1.0);
    pass_if(r.satisfied != Some(false) && stages_ok && spectral_ok)
}

fn dispatch(cli: &Cli) -> CmdResult {
    let csv = cli.global.format == Format::Csv;
    match &cli.command {
        Command::Verify(inp) => {
            let any = load_input(inp, cli)?;
            let tol = tolerance(cli, any.mode())?;
            let v = with_set!(&any, s => is_almost_equidistant(s, &tol));
            Ok(report(
                pass_if(v.holds),
                json!({ "holds": v.holds, "witness": v.witness, "n": any.len(), "dim": any.dim(), "mode": any.mode() }),
            ))
        }
        Command::Certify(inp) => {
            let any = load_input(inp, cli)?;
            let tol = tolerance(cli, any.mode())?;
            let cert = with_set!(&any, s => certify(s, &tol))?;
            let mut payload = to_json(&cert);
            payload["spectrum"] = to_json(&cert.spectrum.as_ref().map(|s| s.values.clone()));
            Ok(report(pass_if(cert.lemma1_holds), payload))
        }
        Command::Construct {
            kind,
            dim,
            k,
            lift,
            out,
        } => {
            let kind = match kind {
                Kind::Simplex => ConstructionKind::Simplex {
                    k: k.unwrap_or(dim + 1),
                },
                Kind::TwoSimplices => ConstructionKind::TwoSimplices,
                Kind::Rosenfeld => ConstructionKind::Rosenfeld,
            };
            let spec = ConstructionSpec {
                kind,
                dim: *dim,
                lift: *lift,
            };
            let c = spec.build(&Tolerance::default())?;
            for w in &c.warnings {
                eprintln!("warning: {w}");
            }
            let text = if csv || out.as_deref().is_some_and(|p| is_csv(p, None)) {
                point_set_to_csv(&c.points)
            } else {
                format!(
                    "{}\n",
                    serde_json::to_string_pretty(&point_set_to_json(&c.points)).expect("json")
                )
            };
            match out {
                None => Ok(Emit::Raw(Outcome::Pass, text)),
                Some(path) => {
                    write_text(path, &text)?;
                    Ok(report(
                        Outcome::Pass,
                        json!({
                            "construction": to_json(&spec),
                            "n": c.points.len(),
                            "dim": c.points.dim(),
                            "warnings": c.warnings,
                            "out": path.display().to_string(),
                        }),
                    ))
                }
            }
        }
        Command::Bounds {
            theorem,
            dim,
            radius,
            c0,
            input,
            input_format,
        } => {
            let need = |v: Option<usize>, what: &str| {
                v.ok_or_else(|| {
                    Failure::Core(Error::OutOfRange(format!(
                        "--{what} is required without --input"
                    )))
                })
            };
            let rep = match input {
                Some(path) => {
                    let any = load_points(path, *input_format, cli.global.exact)?;
                    let tol = tolerance(cli, any.mode())?;
                    if let Some(d) = dim {
                        if *d != any.dim() {
                            return Err(Error::DimensionMismatch {
                                expected: *d,
                                found: any.dim(),
                            }
                            .into());
                        }
                    }
                    with_set!(&any, s => match theorem {
                        TheoremArg::Sphere => check_sphere(s, &tol),
                        TheoremArg::Diameter => check_diameter(s, &tol),
                        TheoremArg::Ball => check_ball(s, &tol),
                        TheoremArg::General => {
                            general_bound_pipeline_with(s, &tol, PipelineOptions::default())
                        }
                    })?
                }
                None => {
                    let tol = tolerance(cli, Mode::Float)?;
                    let d = need(*dim, "dim")?;
                    match theorem {
                        TheoremArg::Sphere => {
                            let r = radius
                                .ok_or_else(|| Error::OutOfRange("--radius is required".into()))?;
                            sphere_bound(d, r, &tol)?
                        }
                        TheoremArg::Diameter => diameter_bound(d)?,
                        TheoremArg::Ball => ball_bound(d, c0.unwrap_or(0.0))?,
                        TheoremArg::General => {
                            return Err(
                                Error::OutOfRange("--theorem general needs --input".into()).into()
                            )
                        }
                    }
                }
            };
            Ok(report(bound_outcome(&rep), to_json(&rep)))
        }
        Command::Search {
            dim,
            n,
            diameter_le_1,
            sphere_radius,
            restarts,
            seed,
            max_iters,
            out,
        } => {
            let mut cfg = SearchConfig::new(*dim, *n);
            cfg.restarts = *restarts;
            cfg.seed = *seed;
            cfg.max_iters = *max_iters;
            cfg.constraint = match (diameter_le_1, sphere_radius) {
                (true, _) => SearchConstraint::DiameterLeOne,
                (false, Some(radius)) => SearchConstraint::Sphere { radius: *radius },
                _ => SearchConstraint::None,
            };
            let res = optimize(&cfg)?;
            let outcome = if res.feasible {
                Outcome::Pass
            } else {
                Outcome::Infeasible
            };
            let payload = to_json(&res);
            if let Some(path) = out {
                write_text(
                    path,
                    &format!(
                        "{}\n",
                        serde_json::to_string_pretty(&payload).expect("json")
                    ),
                )?;
            }
            if csv {
                return Ok(Emit::Raw(outcome, point_set_to_csv(&res.best_points)));
            }
            Ok(report(outcome, payload))
        }
        Command::Probe {
            dim,
            restarts,
            seed,
            max_iters,
        } => {
            let mut budget = SearchConfig::new(*dim, *dim + 1);
            budget.restarts = *restarts;
            budget.seed = *seed;
            budget.max_iters = *max_iters;
            let table = conjecture1_probe(*dim, &budget)?;
            if csv {
                let mut text = String::from("n,feasible,best_penalty\n");
                for r in &table.rows {
                    text.push_str(&format!("{},{},{:?}\n", r.n, r.feasible, r.best_penalty));
                }
                return Ok(Emit::Raw(Outcome::Pass, text));
            }
            Ok(report(Outcome::Pass, to_json(&table)))
        }
        Command::Tdrank {
            n,
            graphs,
            exact_multiplicity,
        } => {
            let tol = tolerance(cli, Mode::Float)?;
            let all = parse_graph_list(&read_text(graphs)?)?;
            let total = all.len();
            let chosen: Vec<_> = all.into_iter().filter(|g| g.n() == *n).collect();
            let exact = *exact_multiplicity || cli.global.exact;
            let scan = min_rank_scan(*n, &chosen, &tol, exact)?;
            let row = |(i, r): &(usize, aeq_core::tdgraph::GraphRankRecord)| {
                json!({
                    "index": i,
                    "graph": aeq_core::io::graph_to_line(&r.graph),
                    "lambda2": r.lambda2,
                    "multiplicity": r.multiplicity,
                    "rank": r.rank,
                    "lambda2_positive": r.lambda2_positive,
                    "exact_multiplicity": r.exact_multiplicity,
                })
            };
            let summary = json!({
                "n": n,
                "graphs_in_file": total,
                "graphs_scanned": chosen.len(),
                "skipped": scan.skipped,
                "min_rank": scan.min_rank,
                "argmin": scan.argmin.iter().map(row).collect::<Vec<_>>(),
            });
            if csv {
                let mut text = String::from("index,lambda2,multiplicity,rank,lambda2_positive\n");
                for (i, r) in &scan.records {
                    text.push_str(&format!(
                        "{},{:?},{},{},{}\n",
                        i, r.lambda2, r.multiplicity, r.rank, r.lambda2_positive
                    ));
                }
                eprintln!("{}", serde_json::to_string(&summary).expect("json"));
                return Ok(Emit::Raw(Outcome::Pass, text));
            }
            let mut payload = summary;
            payload["records"] = Value::Array(scan.records.iter().map(row).collect());
            Ok(report(Outcome::Pass, payload))
        }
        Command::Pipeline { input, diameter } => {
            let any = load_input(input, cli)?;
            let tol = tolerance(cli, any.mode())?;
            let v = with_set!(&any, s => is_almost_equidistant(s, &tol));
            if !v.holds {
                return Ok(Emit::Report {
                    outcome: Outcome::Fail,
                    payload: json!({
                        "stages": [{ "name": "verify", "passed": false, "values": {}, "witness": v.witness }],
                    }),
                    message: Some("verify: set is not almost-equidistant".into()),
                });
            }
            let opts = PipelineOptions {
                diameter: *diameter,
            };
            let rep = with_set!(&any, s => general_bound_pipeline_with(s, &tol, opts))?;
            let message = rep.stages.iter().find(|s| !s.passed).map(|s| {
                format!(
                    "{}: {}",
                    s.name,
                    s.message.clone().unwrap_or_else(|| "stage failed".into())
                )
            });
            Ok(Emit::Report {
                outcome: bound_outcome(&rep),
                payload: to_json(&rep),
                message,
            })
        }
        Command::LemmaEnd { input, w0, x } => {
            let any = load_input(input, cli)?;
            let tol = tolerance(cli, any.mode())?;
            let r = with_set!(&any, s => lemma_end_check(s, *w0, *x, &tol))?;
            Ok(report(Outcome::Pass, to_json(&r)))
        }
        Command::Weyl { a, b } => {
            let r = weyl_check(&matrix(a)?, &matrix(b)?, cli.global.eig_tol)?;
            Ok(report(pass_if(r.holds), to_json(&r)))
        }
        Command::Perron { matrix: m } => {
            let r = perron_frobenius_check(&matrix(m)?, cli.global.eig_tol)?;
            Ok(report(pass_if(r.attained_by_nonnegative_real), to_json(&r)))
        }
        Command::Gershgorin { matrix: m } => {
            let m = matrix(m)?;
            let bound = gershgorin_bound(&m);
            let radius = eigenvalues(&m, cli.global.eig_tol)
                .ok()
                .map(|s| s.spectral_radius());
            let holds = radius.is_none_or(|r| r <= bound + cli.global.eig_tol);
            Ok(report(
                pass_if(holds),
                json!({ "bound": bound, "spectral_radius": radius, "holds": holds }),
            ))
        }
    }
}
