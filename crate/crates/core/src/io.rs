//! JSON and CSV formats.
//!
//! - matrix: `{"rows": m, "cols": n, "data": [row-major]}`
//! - vector: `{"dim": n, "data": [...]}`
//! - system: `{"A": matrix, "B"?: matrix, "C"?: matrix,
//!   "time_kind"?: "discrete" | "continuous", "A_schedule"?: [[index, matrix], ...]}`
//! - input: `{"breakpoints": [t0, t1, ...], "values": [[...], [...], ...]}`
//! - polynomial: `[{"mu_num", "mu_den", "rows", "cols", "data"}, ...]`
//! - trajectory CSV: a `# stp <version>` comment, then `t,dim,x_1,...,x_N`
//!   with shorter states padded by empty fields.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algebra::shape_class;
use crate::arith::Ratio;
use crate::control::{ControlSystem, TimeKind, ZohSignal};
use crate::dynamics::Schedule;
use crate::matrix::{Matrix, Vect};
use crate::poly::FormalPoly;
use crate::{Error, Result};

fn parse<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<Matrix> {
        Matrix::new(self.rows, self.cols, self.data.clone())
    }
}

impl From<&Matrix> for MatrixJson {
    fn from(m: &Matrix) -> Self {
        MatrixJson { rows: m.rows(), cols: m.cols(), data: m.data().to_vec() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorJson {
    pub dim: usize,
    pub data: Vec<f64>,
}

impl VectorJson {
    pub fn to_vect(&self) -> Result<Vect> {
        if self.dim != self.data.len() {
            return Err(Error::DataLength { expected: self.dim, actual: self.data.len() });
        }
        Vect::new(self.data.clone())
    }
}

impl From<&Vect> for VectorJson {
    fn from(v: &Vect) -> Self {
        VectorJson { dim: v.dim(), data: v.data().to_vec() }
    }
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    parse::<MatrixJson>(text)?.to_matrix()
}

pub fn parse_vector(text: &str) -> Result<Vect> {
    parse::<VectorJson>(text)?.to_vect()
}

pub fn matrix_to_json(m: &Matrix) -> String {
    serde_json::to_string(&MatrixJson::from(m)).expect("serializable")
}

pub fn vector_to_json(v: &Vect) -> String {
    serde_json::to_string(&VectorJson::from(v)).expect("serializable")
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeKindJson {
    #[default]
    Discrete,
    Continuous,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemJson {
    #[serde(rename = "A")]
    pub a: MatrixJson,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<MatrixJson>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub c: Option<MatrixJson>,
    #[serde(default)]
    pub time_kind: TimeKindJson,
    #[serde(rename = "A_schedule", default, skip_serializing_if = "Option::is_none")]
    pub a_schedule: Option<Vec<(usize, MatrixJson)>>,
}

/// A parsed system file.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemFile {
    pub system: ControlSystem,
    /// The periodic schedule when one is given, otherwise `A` itself.
    pub schedule: Schedule,
}

pub fn parse_system(text: &str) -> Result<SystemFile> {
    let raw: SystemJson = parse(text)?;
    let a = raw.a.to_matrix()?;
    let b = raw.b.as_ref().map(MatrixJson::to_matrix).transpose()?;
    let c = raw.c.as_ref().map(MatrixJson::to_matrix).transpose()?;
    let time_kind = match raw.time_kind {
        TimeKindJson::Discrete => TimeKind::Discrete,
        TimeKindJson::Continuous => TimeKind::Continuous,
    };
    let schedule = match raw.a_schedule {
        None => Schedule::Constant(a.clone()),
        Some(mut entries) => {
            entries.sort_by_key(|(i, _)| *i);
            if entries.iter().enumerate().any(|(pos, (i, _))| pos != *i) {
                return Err(Error::InvalidInput("A_schedule indices must be 0, 1, ..., P-1, each once".into()));
            }
            let list = entries.iter().map(|(_, m)| m.to_matrix()).collect::<Result<Vec<_>>>()?;
            let class = shape_class(&list[0]);
            if let Some(bad) = list.iter().find(|m| shape_class(m) != class) {
                return Err(Error::ShapeClassMismatch { left: class, right: shape_class(bad) });
            }
            Schedule::periodic(list)?
        }
    };
    Ok(SystemFile { system: ControlSystem::new(a, b, c, time_kind)?, schedule })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputJson {
    pub breakpoints: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

pub fn parse_input(text: &str) -> Result<ZohSignal> {
    let raw: InputJson = parse(text)?;
    let values = raw.values.into_iter().map(Vect::new).collect::<Result<Vec<_>>>()?;
    ZohSignal::new(raw.breakpoints, values)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyTermJson {
    pub mu_num: u64,
    pub mu_den: u64,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

pub fn parse_poly(text: &str) -> Result<FormalPoly> {
    let raw: Vec<PolyTermJson> = parse(text)?;
    let mut coeffs = Vec::with_capacity(raw.len());
    for t in raw {
        let m = Matrix::new(t.rows, t.cols, t.data)?;
        let mu = Ratio::new(t.mu_num, t.mu_den)?;
        if shape_class(&m) != mu {
            return Err(Error::ShapeClassMismatch { left: mu, right: shape_class(&m) });
        }
        coeffs.push(m);
    }
    FormalPoly::from_terms(coeffs)
}

pub fn poly_to_json(p: &FormalPoly) -> String {
    let terms: Vec<PolyTermJson> = p
        .terms()
        .map(|(mu, m)| PolyTermJson {
            mu_num: mu.num(),
            mu_den: mu.den(),
            rows: m.rows(),
            cols: m.cols(),
            data: m.data().to_vec(),
        })
        .collect();
    serde_json::to_string(&terms).expect("serializable")
}

/// Trajectory CSV with ragged rows padded to the widest state.
pub fn trajectory_csv<'a, I>(rows: I, version: &str) -> String
where
    I: IntoIterator<Item = (f64, &'a Vect)>,
{
    let rows: Vec<(f64, &Vect)> = rows.into_iter().collect();
    let width = rows.iter().map(|(_, v)| v.dim()).max().unwrap_or(0);
    let mut out = format!("# stp {version}\nt,dim");
    for i in 1..=width {
        write!(out, ",x_{i}").unwrap();
    }
    out.push('\n');
    for (t, v) in rows {
        write!(out, "{t},{}", v.dim()).unwrap();
        for x in v.data() {
            write!(out, ",{x}").unwrap();
        }
        for _ in v.dim()..width {
            out.push(',');
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let m = parse_matrix(r#"{"rows":2,"cols":2,"data":[1,2,3,4.5]}"#).unwrap();
        assert_eq!(m.get(1, 1), 4.5);
        assert_eq!(matrix_to_json(&m), r#"{"rows":2,"cols":2,"data":[1.0,2.0,3.0,4.5]}"#);
        assert_eq!(parse_matrix(&matrix_to_json(&m)).unwrap(), m);
    }

    #[test]
    fn malformed_files_are_parse_or_length_errors() {
        assert!(matches!(parse_matrix("{"), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix(r#"{"rows":2,"cols":2,"data":[1]}"#), Err(Error::DataLength { .. })));
        assert!(matches!(parse_vector(r#"{"dim":3,"data":[1,2]}"#), Err(Error::DataLength { .. })));
        assert!(matches!(parse_vector(r#"{"dim":1,"data":[1],"x":0}"#), Err(Error::Parse(_))));
    }

    #[test]
    fn system_with_schedule() {
        let text = r#"{
            "A": {"rows":1,"cols":1,"data":[1]},
            "time_kind": "discrete",
            "A_schedule": [[1, {"rows":2,"cols":4,"data":[1,0,1,1,-1,0,0,1]}],
                           [0, {"rows":2,"cols":4,"data":[0,0,1,-1,-1,1,1,1]}]]
        }"#;
        let sys = parse_system(text).unwrap();
        assert_eq!(sys.schedule.at(0).get(0, 3), -1.0);
        assert_eq!(sys.schedule.at(3).get(0, 3), 1.0);
        assert_eq!(sys.system.time_kind(), TimeKind::Discrete);

        let mixed = r#"{"A": {"rows":1,"cols":1,"data":[1]},
            "A_schedule": [[0, {"rows":1,"cols":2,"data":[1,1]}], [1, {"rows":1,"cols":1,"data":[1]}]]}"#;
        assert!(matches!(parse_system(mixed), Err(Error::ShapeClassMismatch { .. })));
        let gap = r#"{"A": {"rows":1,"cols":1,"data":[1]}, "A_schedule": [[1, {"rows":1,"cols":1,"data":[1]}]]}"#;
        assert!(matches!(parse_system(gap), Err(Error::InvalidInput(_))));
        let bad_b = r#"{"A": {"rows":2,"cols":2,"data":[1,0,0,1]}, "B": {"rows":3,"cols":1,"data":[1,1,1]}}"#;
        assert!(matches!(parse_system(bad_b), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn input_file() {
        let u = parse_input(r#"{"breakpoints":[0,1],"values":[[1,2],[3,4]]}"#).unwrap();
        assert_eq!(u.at(1.5).unwrap().data(), &[3.0, 4.0]);
        assert!(parse_input(r#"{"breakpoints":[0],"values":[[1],[2]]}"#).is_err());
    }

    #[test]
    fn poly_round_trip() {
        let text = r#"[{"mu_num":1,"mu_den":2,"rows":1,"cols":2,"data":[1,-1]},{"mu_num":1,"mu_den":1,"rows":1,"cols":1,"data":[2]}]"#;
        let p = parse_poly(text).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(parse_poly(&poly_to_json(&p)).unwrap(), p);
        let wrong = r#"[{"mu_num":1,"mu_den":1,"rows":1,"cols":2,"data":[1,-1]}]"#;
        assert!(matches!(parse_poly(wrong), Err(Error::ShapeClassMismatch { .. })));
    }

    #[test]
    fn csv_pads_ragged_rows() {
        let a = Vect::new(vec![1.0, 2.0, 3.0]).unwrap();
        let b = Vect::new(vec![-0.5]).unwrap();
        let csv = trajectory_csv([(0.0, &a), (1.0, &b)], "0.1.0");
        assert_eq!(csv, "# stp 0.1.0\nt,dim,x_1,x_2,x_3\n0,3,1,2,3\n1,1,-0.5,,\n");
    }
}
