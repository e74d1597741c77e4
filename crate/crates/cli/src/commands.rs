use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use stp_core::algebra::{dist_v, m_add, m_product, norm_v, op_norm_v, v_add, v_product};
use stp_core::control::{
    continuous_forced_response, is_controllable, is_observable, projective_stationary_realization, reachable_layer,
    simulate_discrete_control, stationary_realization, RankReport, TimeKind,
};
use stp_core::dynamics::{
    continuous_solution_scheduled, continuous_solution_truncated, dimension_profile, is_dimension_bounded,
    is_invariant_dim, simulate_discrete,
};
use stp_core::io::{self, SystemFile};
use stp_core::quotient::{reduce_mat, reduce_vec};
use stp_core::{Error, Matrix, Vect, DEFAULT_TOL};

use crate::args::{AlgebraOp, AnalyzeArgs, Cli, Command, Report, SimulateArgs};
use crate::error::CliError;

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cli: Cli) -> Result<String> {
    let tol = tolerance()?;
    match cli.command {
        Command::Algebra { op, operands } => algebra(op, &operands, tol),
        Command::Simulate(args) => simulate(&args),
        Command::Analyze(args) => analyze(&args, tol),
    }
}

fn tolerance() -> Result<f64> {
    match std::env::var("STP_TOL") {
        Err(_) => Ok(DEFAULT_TOL),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(t) if t.is_finite() && t >= 0.0 => Ok(t),
            _ => Err(CliError::Usage(format!("STP_TOL must be a non-negative number, got {s:?}"))),
        },
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> stp_core::Result<T>) -> Result<T> {
    parse(&read(path)?).map_err(|source| CliError::File { path: path.to_path_buf(), source })
}

enum Operand {
    Mat(Matrix),
    Vec(Vect),
}

fn load_operand(path: &Path) -> Result<Operand> {
    load(path, |text| {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if value.get("rows").is_some() {
            io::parse_matrix(text).map(Operand::Mat)
        } else if value.get("dim").is_some() {
            io::parse_vector(text).map(Operand::Vec)
        } else {
            Err(Error::Parse("expected a matrix or vector object".into()))
        }
    })
}

fn load_matrix(path: &Path) -> Result<Matrix> {
    load(path, io::parse_matrix)
}

fn load_vector(path: &Path) -> Result<Vect> {
    load(path, io::parse_vector)
}

fn line(value: Value) -> String {
    let mut s = value.to_string();
    s.push('\n');
    s
}

fn algebra(op: AlgebraOp, operands: &[PathBuf], tol: f64) -> Result<String> {
    let unary = matches!(op, AlgebraOp::Norm | AlgebraOp::Reduce);
    let wanted = if unary { 1 } else { 2 };
    if operands.len() != wanted {
        return Err(CliError::Usage(format!("{op:?} takes {wanted} operand file(s), got {}", operands.len()).to_lowercase()));
    }
    let out = match op {
        AlgebraOp::Mprod => io::matrix_to_json(&m_product(&load_matrix(&operands[0])?, &load_matrix(&operands[1])?)?),
        AlgebraOp::Vprod => io::vector_to_json(&v_product(&load_matrix(&operands[0])?, &load_vector(&operands[1])?)?),
        AlgebraOp::Madd => io::matrix_to_json(&m_add(&load_matrix(&operands[0])?, &load_matrix(&operands[1])?)?),
        AlgebraOp::Vadd => io::vector_to_json(&v_add(&load_vector(&operands[0])?, &load_vector(&operands[1])?)?),
        AlgebraOp::Dist => {
            let d = dist_v(&load_vector(&operands[0])?, &load_vector(&operands[1])?)?;
            json!({ "dist": d }).to_string()
        }
        AlgebraOp::Norm => {
            let n = match load_operand(&operands[0])? {
                Operand::Mat(a) => op_norm_v(&a)?,
                Operand::Vec(x) => norm_v(&x),
            };
            json!({ "norm": n }).to_string()
        }
        AlgebraOp::Reduce => match load_operand(&operands[0])? {
            Operand::Mat(a) => io::matrix_to_json(&reduce_mat(&a, tol).rep),
            Operand::Vec(x) => io::vector_to_json(&reduce_vec(&x, tol).rep),
        },
    };
    Ok(out + "\n")
}

fn simulate(args: &SimulateArgs) -> Result<String> {
    let file = load(&args.system, io::parse_system)?;
    let x0 = load_vector(&args.x0)?;
    let input = args.input.as_deref().map(|p| load(p, io::parse_input)).transpose()?;
    let version = env!("CARGO_PKG_VERSION");
    let SystemFile { system, schedule } = file;

    let csv = match system.time_kind() {
        TimeKind::Discrete => {
            if args.times.is_some() || args.truncated.is_some() {
                return Err(CliError::Usage("discrete systems take --steps, not --times or --truncated".into()));
            }
            let steps = args.steps.ok_or_else(|| CliError::Usage("discrete systems need --steps".into()))?;
            match input {
                Some(u) => {
                    if schedule.constant().is_none() {
                        return Err(Error::Unsupported("inputs with a time-varying schedule".into()).into());
                    }
                    let traj = simulate_discrete_control(&system, &x0, &u, steps, args.max_dim)?;
                    io::trajectory_csv(traj.iter().map(|s| (s.t, &s.state)), version)
                }
                None => {
                    let traj = simulate_discrete(&schedule, &x0, steps, args.max_dim)?;
                    io::trajectory_csv(traj.iter().map(|s| (s.t, &s.state)), version)
                }
            }
        }
        TimeKind::Continuous => {
            if args.steps.is_some() {
                return Err(CliError::Usage("continuous systems take --times, not --steps".into()));
            }
            let ts = args.times.as_deref().ok_or_else(|| CliError::Usage("continuous systems need --times".into()))?;
            match (input, args.truncated) {
                (Some(_), Some(_)) => {
                    return Err(CliError::Usage("--input and --truncated cannot be combined".into()));
                }
                (Some(u), None) => {
                    if schedule.constant().is_none() {
                        return Err(Error::Unsupported("continuous systems with a time-varying schedule".into()).into());
                    }
                    let traj = continuous_forced_response(&system, &x0, &u, ts)?;
                    io::trajectory_csv(traj.iter().map(|s| (s.t, &s.state)), version)
                }
                (None, Some(order)) => {
                    let a = schedule.constant().ok_or_else(|| {
                        Error::Unsupported("continuous systems with a time-varying schedule".into())
                    })?;
                    let traj = continuous_solution_truncated(a, &x0, ts, order, args.max_dim)?;
                    let bound = traj.iter().map(|s| s.error_bound).fold(0.0, f64::max);
                    eprintln!("truncation error bound: {bound:e}");
                    io::trajectory_csv(traj.iter().map(|s| (s.t, &s.state)), version)
                }
                (None, None) => {
                    let traj = continuous_solution_scheduled(&schedule, &x0, ts)?;
                    io::trajectory_csv(traj.iter().map(|s| (s.t, &s.state)), version)
                }
            }
        }
    };

    match &args.out {
        Some(path) => {
            std::fs::write(path, csv).map_err(|source| CliError::Io { path: path.clone(), source })?;
            Ok(String::new())
        }
        None => Ok(csv),
    }
}

fn basis_json(report: &RankReport) -> Value {
    report.basis.iter().map(|b| b.data().to_vec()).collect()
}

fn analyze(args: &AnalyzeArgs, tol: f64) -> Result<String> {
    let file = load(&args.system, io::parse_system)?;
    let sys = &file.system;
    let a = sys.a();
    let r0 = || args.r0.ok_or_else(|| CliError::Usage("this report needs --r0".into()));

    let value = match args.report {
        Report::Profile => serde_json::to_value(dimension_profile(a, r0()?)?).expect("serializable"),
        Report::Invariant => {
            let r = r0()?;
            let bounded = is_dimension_bounded(a);
            let invariant = bounded && is_invariant_dim(a, r)?;
            json!({ "r0": r, "dimension_bounded": bounded, "invariant": invariant })
        }
        Report::Controllable => {
            let r = r0()?;
            let report = is_controllable(sys, r)?;
            let real = stationary_realization(sys, r)?;
            json!({
                "controllable": report.full_rank,
                "r_star": real.r_star,
                "rank": report.rank,
                "dim": report.dim,
                "basis": basis_json(&report),
            })
        }
        Report::Observable => {
            let r = r0()?;
            let report = is_observable(sys, r)?;
            let real = stationary_realization(sys, r)?;
            json!({
                "observable": report.full_rank,
                "r_star": real.r_star,
                "rank": report.rank,
                "dim": report.dim,
                "basis": basis_json(&report),
            })
        }
        Report::ReachableLayer { k } => {
            let report = reachable_layer(sys, r0()?, k)?;
            json!({
                "layer": k,
                "dim": report.dim,
                "rank": report.rank,
                "full_rank": report.full_rank,
                "basis": basis_json(&report),
            })
        }
        Report::Projective { r } => {
            let proj = projective_stationary_realization(a, r, tol)?;
            let matrix = match &proj {
                Some(p) => serde_json::to_value(io::MatrixJson::from(p)).expect("serializable"),
                None => Value::Null,
            };
            json!({ "r": r, "class_invariant": proj.is_some(), "A_proj": matrix })
        }
    };
    Ok(line(value))
}
