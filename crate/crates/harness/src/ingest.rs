//! CSV input and output for data matrices.

use std::path::Path;

use madd_core::DataMatrix;

use crate::error::{HarnessError, Result};

/// A data matrix read from CSV, with the label column split off if asked.
#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub data: DataMatrix,
    /// Labels in `1..=classes.len()`, numbered by first appearance.
    pub labels: Option<Vec<usize>>,
    /// Original label text for each label value.
    pub classes: Vec<String>,
    /// Feature names, when the file has a header.
    pub features: Option<Vec<String>>,
}

/// Reads a rectangular numeric CSV. `label_column` names a header field, or
/// gives a 1-based column index when the file has no header.
pub fn ingest_csv(path: &Path, has_header: bool, label_column: Option<&str>) -> Result<Ingested> {
    let file = std::fs::File::open(path).map_err(|e| HarnessError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let csv_err = |source| HarnessError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let input_err = |line: u64, column: Option<usize>, message: String| HarnessError::Input {
        path: path.to_path_buf(),
        line,
        column,
        message,
    };

    let header: Option<Vec<String>> = if has_header {
        Some(reader.headers().map_err(csv_err)?.iter().map(str::to_string).collect())
    } else {
        None
    };
    let label_idx = match (label_column, &header) {
        (None, _) => None,
        (Some(name), Some(h)) => Some(h.iter().position(|f| f == name).ok_or_else(|| {
            input_err(1, None, format!("no column named '{name}' in header"))
        })?),
        (Some(spec), None) => match spec.parse::<usize>() {
            Ok(i) if i >= 1 => Some(i - 1),
            _ => {
                return Err(HarnessError::Config(format!(
                    "without a header the label column must be a 1-based index, got '{spec}'"
                )))
            }
        },
    };

    let mut width = header.as_ref().map(Vec::len);
    let mut values = Vec::new();
    let mut classes: Vec<String> = Vec::new();
    let mut labels = Vec::new();
    let mut n = 0;
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line());
        match width {
            Some(w) if record.len() != w => {
                return Err(input_err(line, None, format!("row has {} fields, expected {w}", record.len())))
            }
            None => width = Some(record.len()),
            _ => {}
        }
        for (col, cell) in record.iter().enumerate() {
            if Some(col) == label_idx {
                let id = match classes.iter().position(|c| c == cell) {
                    Some(p) => p + 1,
                    None => {
                        classes.push(cell.to_string());
                        classes.len()
                    }
                };
                labels.push(id);
                continue;
            }
            let v: f64 = cell
                .parse()
                .map_err(|_| input_err(line, Some(col + 1), format!("'{cell}' is not a number")))?;
            if !v.is_finite() {
                return Err(input_err(line, Some(col + 1), format!("'{cell}' is not finite")));
            }
            values.push(v);
        }
        n += 1;
    }
    let width = width.unwrap_or(0);
    if let Some(i) = label_idx {
        if i >= width && n > 0 {
            return Err(HarnessError::Config(format!("label column {} is past the last column {width}", i + 1)));
        }
    }
    let d = width - usize::from(label_idx.is_some());
    if n == 0 || d == 0 {
        return Err(input_err(1, None, "no numeric data".into()));
    }
    let features = header.map(|h| {
        h.into_iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != label_idx)
            .map(|(_, f)| f)
            .collect()
    });
    Ok(Ingested {
        data: DataMatrix::new(n, d, values)?,
        labels: label_idx.map(|_| labels),
        classes,
        features,
    })
}

/// Writes `data` with a header `x1..xd`, plus a trailing `label` column.
pub fn write_csv(path: &Path, data: &DataMatrix, labels: Option<&[usize]>) -> Result<()> {
    let csv_err = |source| HarnessError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    let mut header: Vec<String> = (1..=data.d()).map(|q| format!("x{q}")).collect();
    if labels.is_some() {
        header.push("label".into());
    }
    w.write_record(&header).map_err(csv_err)?;
    for (i, row) in data.rows().enumerate() {
        let mut fields: Vec<String> = row.iter().map(f64::to_string).collect();
        if let Some(l) = labels {
            fields.push(l[i].to_string());
        }
        w.write_record(&fields).map_err(csv_err)?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}
