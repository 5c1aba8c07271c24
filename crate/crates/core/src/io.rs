//! JSON-lines and CSV readers and writers for the command-line tools.

use nalgebra::DMatrix;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cdist::ConvexDistance;
use crate::error::{Error, Result};
use crate::spec::Configuration;
use crate::statistics::{MultilinearPolynomial, TermRecord};
use crate::tensor::{DenseTensor, NormEstimate, Partition};

/// One value per nonblank line.
pub fn read_jsonl<T: DeserializeOwned>(text: &str) -> Result<Vec<T>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l)
                .map_err(|e| Error::InvalidArgument(format!("line {}: {e}", i + 1)))
        })
        .collect()
}

pub fn write_jsonl<T: Serialize>(items: &[T]) -> Result<String> {
    let mut out = String::new();
    for item in items {
        out.push_str(&serde_json::to_string(item)?);
        out.push('\n');
    }
    Ok(out)
}

/// A set `A` as one JSON array of values per line.
pub fn read_configurations(text: &str) -> Result<Vec<Configuration>> {
    read_jsonl(text)
}

pub fn read_polynomial(text: &str, num_vars: usize) -> Result<MultilinearPolynomial> {
    MultilinearPolynomial::from_records(num_vars, &read_jsonl::<TermRecord>(text)?)
}

pub fn write_polynomial(poly: &MultilinearPolynomial) -> Result<String> {
    write_jsonl(&poly.to_records())
}

/// One tensor entry; absent entries are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorRecord {
    pub index: Vec<usize>,
    pub value: f64,
}

/// Reads a tensor, inferring each axis length from the largest index seen
/// unless `shape` is given.
pub fn read_tensor(text: &str, shape: Option<Vec<usize>>) -> Result<DenseTensor> {
    let records: Vec<TensorRecord> = read_jsonl(text)?;
    let shape = match shape {
        Some(s) => s,
        None => {
            let first = records
                .first()
                .ok_or_else(|| Error::InvalidArgument("empty tensor file without a shape".into()))?;
            let mut s = vec![0; first.index.len()];
            for r in &records {
                if r.index.len() != s.len() {
                    return Err(Error::ShapeMismatch(format!(
                        "entry {:?} has order {} but the first has order {}",
                        r.index,
                        r.index.len(),
                        s.len()
                    )));
                }
                for (m, &i) in s.iter_mut().zip(&r.index) {
                    *m = (*m).max(i + 1);
                }
            }
            s
        }
    };
    let entries: Vec<(Vec<usize>, f64)> = records.into_iter().map(|r| (r.index, r.value)).collect();
    DenseTensor::from_entries(shape, &entries)
}

pub fn write_tensor(tensor: &DenseTensor) -> Result<String> {
    let records: Vec<TensorRecord> = tensor
        .nonzero_entries()
        .into_iter()
        .map(|(index, value)| TensorRecord { index, value })
        .collect();
    write_jsonl(&records)
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidArgument(format!("csv: {e}"))
}

/// A headerless CSV of reals; every row must have the same width.
pub fn read_matrix_csv(text: &str) -> Result<DMatrix<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let row = rec
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| Error::InvalidArgument(format!("row {}: `{f}` is not a number", i + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || ncols == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    Ok(DMatrix::from_row_iterator(rows.len(), ncols, rows.into_iter().flatten()))
}

pub fn write_matrix_csv(m: &DMatrix<f64>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in m.row_iter() {
        w.write_record(row.iter().map(|x| x.to_string())).map_err(csv_err)?;
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// `omega_id,d_t,gap,iterations`, one row per query point.
pub fn convex_distance_csv(results: &[ConvexDistance]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["omega_id", "d_t", "gap", "iterations"]).map_err(csv_err)?;
    for (i, r) in results.iter().enumerate() {
        w.write_record([i.to_string(), r.value.to_string(), r.gap.to_string(), r.iterations.to_string()])
            .map_err(csv_err)?;
    }
    finish(w)
}

/// `partition,value,restarts,gap`; the gap column is the spread between
/// the best and worst restart.
pub fn norms_csv(results: &[(Partition, NormEstimate)]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["partition", "value", "restarts", "gap"]).map_err(csv_err)?;
    for (p, e) in results {
        w.write_record([p.to_string(), e.value.to_string(), e.restarts.to_string(), e.spread.to_string()])
            .map_err(csv_err)?;
    }
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_round_trip() {
        let p = MultilinearPolynomial::new(4)
            .with_term(&[0, 2], 1.5)
            .unwrap()
            .with_term(&[], -2.0)
            .unwrap();
        let text = write_polynomial(&p).unwrap();
        assert_eq!(read_polynomial(&text, 4).unwrap(), p);
        assert!(read_polynomial(r#"{"order":2,"indices":[0],"coefficient":1.0}"#, 4).is_err());
    }

    #[test]
    fn tensor_round_trip() {
        let t = DenseTensor::from_fn(vec![2, 3], |i| (i[0] * 3 + i[1]) as f64);
        let text = write_tensor(&t).unwrap();
        assert_eq!(read_tensor(&text, Some(vec![2, 3])).unwrap(), t);
        assert_eq!(read_tensor(&text, None).unwrap(), t);
        assert!(read_tensor("{\"index\":[0],\"value\":1}\n{\"index\":[0,1],\"value\":1}", None).is_err());
    }

    #[test]
    fn matrices_and_sets() {
        let m = read_matrix_csv("1, 2\n3,4\n").unwrap();
        assert_eq!(m[(1, 0)], 3.0);
        assert_eq!(read_matrix_csv(&write_matrix_csv(&m).unwrap()).unwrap(), m);
        assert!(read_matrix_csv("1,2\n3\n").is_err());
        assert!(read_matrix_csv("1,x\n").is_err());
        let sets = read_configurations("[0,1,0]\n\n[1,0,0]\n").unwrap();
        assert_eq!(sets.len(), 2);
        assert_eq!(sets[1].entries(), &[1.0, 0.0, 0.0]);
        let err = read_configurations("[0,1]\nnope").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn norms_csv_quotes_partitions() {
        let e = NormEstimate { value: 1.0, restarts: 3, spread: 0.0, sweeps: 1 };
        let csv = norms_csv(&[("{1,2}".parse().unwrap(), e)]).unwrap();
        assert_eq!(csv, "partition,value,restarts,gap\n\"{1,2}\",1,3,0\n");
    }
}
