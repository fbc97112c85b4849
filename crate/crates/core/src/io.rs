//! CSV point clouds and the JSON shapes of specs and reports.
//!
//! Reals are written as shortest round-trip decimals; infinite values as the
//! strings `"inf"` / `"-inf"`.

use std::io::{Read, Write};

use serde_json::{json, Map, Value};

use crate::cloud::{PointCloud, StratumLabel};
use crate::error::{Error, Result};
use crate::lipschitz::LipschitzReport;
use crate::linalg::{Matrix, Point};
use crate::prodint::{Atom, AtomicIntervalFunction};
use crate::reach::ReachEstimate;
use crate::whitney::WhitneyResult;

/// JSON value of a real.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        Value::String("nan".into())
    } else if x > 0.0 {
        Value::String("inf".into())
    } else {
        Value::String("-inf".into())
    }
}

/// Reads a real written by [`num`].
pub fn parse_num(v: &Value, what: &str) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(format!("{what}: not a real"))),
        Value::String(s) if s == "inf" => Ok(f64::INFINITY),
        Value::String(s) if s == "-inf" => Ok(f64::NEG_INFINITY),
        _ => Err(Error::Parse(format!("{what}: expected a real, got {v}"))),
    }
}

fn pair(p: Option<(usize, usize)>) -> Value {
    match p {
        Some((i, j)) => json!([i, j]),
        None => Value::Null,
    }
}

/// Pretty JSON text with a trailing newline.
pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Reads a cloud with header `x1,…,xd`.
pub fn read_cloud_csv<R: Read>(reader: R) -> Result<PointCloud> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Parse(format!("CSV header: {e}")))?.clone();
    let dim = headers.len();
    if dim == 0 {
        return Err(Error::Parse("CSV header is empty".into()));
    }
    for (j, h) in headers.iter().enumerate() {
        if h != format!("x{}", j + 1) {
            return Err(Error::Parse(format!("CSV header field {}: expected 'x{}', got '{h}'", j + 1, j + 1)));
        }
    }
    let mut pts = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let line = row + 2;
        let rec = rec.map_err(|e| Error::Parse(format!("CSV line {line}: {e}")))?;
        if rec.len() != dim {
            return Err(Error::Parse(format!("CSV line {line}: expected {dim} fields, got {}", rec.len())));
        }
        let mut p = Point::zeros(dim);
        for (j, field) in rec.iter().enumerate() {
            let x: f64 = field
                .parse()
                .map_err(|_| Error::Parse(format!("CSV line {line}, field x{}: '{field}' is not a real", j + 1)))?;
            if !x.is_finite() {
                return Err(Error::Parse(format!("CSV line {line}, field x{}: non-finite value", j + 1)));
            }
            p[j] = x;
        }
        pts.push(p);
    }
    PointCloud::new(dim, pts)
}

pub fn write_cloud_csv<W: Write>(mut w: W, cloud: &PointCloud) -> Result<()> {
    let header: Vec<String> = (1..=cloud.dim()).map(|j| format!("x{j}")).collect();
    writeln!(w, "{}", header.join(","))?;
    for p in cloud.points() {
        let row: Vec<String> = p.iter().map(|x| format!("{x}")).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn cloud_to_csv_string(cloud: &PointCloud) -> String {
    let mut buf = Vec::new();
    write_cloud_csv(&mut buf, cloud).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("CSV output is ASCII")
}

/// `{"dim": d, "points": [[…]], "labels": [{"k", "full_span"}]}`.
pub fn labeled_cloud_to_json(cloud: &PointCloud) -> Value {
    let points: Vec<Value> = cloud.points().iter().map(|p| Value::Array(p.iter().map(|&x| num(x)).collect())).collect();
    let mut m = Map::new();
    m.insert("dim".into(), json!(cloud.dim()));
    m.insert("points".into(), Value::Array(points));
    m.insert(
        "labels".into(),
        match cloud.labels() {
            Some(l) => serde_json::to_value(l).expect("labels serialize"),
            None => Value::Null,
        },
    );
    Value::Object(m)
}

pub fn labeled_cloud_from_json(v: &Value) -> Result<PointCloud> {
    let dim = v
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("labeled cloud: missing 'dim'".into()))? as usize;
    let rows = v
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("labeled cloud: missing 'points'".into()))?;
    let mut pts = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        let r = r.as_array().ok_or_else(|| Error::Parse(format!("labeled cloud: point {i} is not an array")))?;
        let xs = r
            .iter()
            .enumerate()
            .map(|(j, x)| parse_num(x, &format!("point {i}, coordinate {}", j + 1)))
            .collect::<Result<Vec<_>>>()?;
        pts.push(Point::from_vec(xs));
    }
    let cloud = PointCloud::new(dim, pts)?;
    match v.get("labels") {
        None | Some(Value::Null) => Ok(cloud),
        Some(l) => {
            let labels: Vec<StratumLabel> =
                serde_json::from_value(l.clone()).map_err(|e| Error::Parse(format!("labeled cloud: labels: {e}")))?;
            cloud.with_labels(labels)
        }
    }
}

/// `{"method", "value", "witness", "pairs_used", "h_min"}`.
pub fn reach_to_json(r: &ReachEstimate) -> Value {
    json!({
        "method": r.method.as_str(),
        "value": num(r.value),
        "witness": pair(r.witness),
        "pairs_used": r.pairs_used,
        "h_min": num(r.min_pair_distance),
    })
}

fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| num(m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn matrix_from_json(v: &Value, what: &str) -> Result<Matrix> {
    let rows = v.as_array().ok_or_else(|| Error::Parse(format!("{what}: expected an array of rows")))?;
    let nrows = rows.len();
    let mut data = Vec::new();
    let mut ncols = None;
    for (i, r) in rows.iter().enumerate() {
        let r = r.as_array().ok_or_else(|| Error::Parse(format!("{what}: row {i} is not an array")))?;
        if *ncols.get_or_insert(r.len()) != r.len() {
            return Err(Error::Parse(format!("{what}: ragged rows")));
        }
        for (j, x) in r.iter().enumerate() {
            data.push(parse_num(x, &format!("{what}[{i}][{j}]"))?);
        }
    }
    Ok(Matrix::from_row_slice(nrows, ncols.unwrap_or(0), &data))
}

pub fn matrix_json(m: &Matrix) -> Value {
    matrix_to_json(m)
}

/// `{"dim": d, "atoms": [{"t", "jump", "w"}]}`.
pub fn atomic_to_json(f: &AtomicIntervalFunction) -> Value {
    let atoms: Vec<Value> = f
        .atoms()
        .iter()
        .map(|a| json!({"t": num(a.t), "jump": matrix_to_json(&a.jump), "w": num(a.w)}))
        .collect();
    json!({"dim": f.dim(), "atoms": atoms})
}

/// Parses an atomic function; a missing `"w"` defaults to the GJ norm of the jump.
pub fn atomic_from_json(v: &Value) -> Result<AtomicIntervalFunction> {
    let dim = v
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("atomic function: missing 'dim'".into()))? as usize;
    let list = v
        .get("atoms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("atomic function: missing 'atoms'".into()))?;
    let mut atoms = Vec::with_capacity(list.len());
    for (k, a) in list.iter().enumerate() {
        let t = parse_num(a.get("t").ok_or_else(|| Error::Parse(format!("atom {k}: missing 't'")))?, "t")?;
        let jump = matrix_from_json(
            a.get("jump").ok_or_else(|| Error::Parse(format!("atom {k}: missing 'jump'")))?,
            &format!("atom {k} jump"),
        )?;
        let w = match a.get("w") {
            Some(w) => parse_num(w, &format!("atom {k} w"))?,
            None => crate::linalg::gj_norm(&jump)?,
        };
        atoms.push(Atom { t, jump, w });
    }
    AtomicIntervalFunction::new(dim, atoms)
}

/// `{"empirical", "paper", "name", "satisfied", "argmax"}`.
pub fn lipschitz_report_to_json(r: &LipschitzReport) -> Value {
    json!({
        "empirical": num(r.empirical),
        "paper": num(r.paper),
        "name": r.name.as_str(),
        "satisfied": r.satisfied,
        "argmax": pair(r.argmax),
    })
}

pub fn whitney_to_json(r: &WhitneyResult) -> Value {
    json!({
        "c": num(r.c),
        "c1": num(r.c1),
        "c2": num(r.c2),
        "argmax1": pair(r.argmax1),
        "argmax2": pair(r.argmax2),
    })
}

/// Parses any serde-described spec (B-set, multirotation) with a clear error.
pub fn spec_from_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidSpec(format!("{what}: {e}")))
}
