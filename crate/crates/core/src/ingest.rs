//! CSV reading and writing.
//!
//! Comma-delimited, UTF-8, optional single header line; LF or CRLF on read,
//! LF on write. Floats are written with the shortest representation that
//! parses back to the same bits, so write-then-read is lossless.

use std::fmt::Display;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

/// A column addressed by header name or by zero-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnRef {
    Name(String),
    Index(usize),
}

impl ColumnRef {
    /// Digits parse as an index, anything else as a name.
    pub fn parse(s: &str) -> Self {
        match s.trim().parse::<usize>() {
            Ok(i) => ColumnRef::Index(i),
            Err(_) => ColumnRef::Name(s.trim().to_string()),
        }
    }

    fn resolve(&self, header: Option<&[String]>, width: usize) -> Result<usize> {
        let idx = match self {
            ColumnRef::Index(i) => *i,
            ColumnRef::Name(name) => {
                let header = header.ok_or_else(|| {
                    Error::Parameter(format!("column `{name}` selected by name but the file has no header"))
                })?;
                header
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| Error::Parameter(format!("no column named `{name}`")))?
            }
        };
        if idx >= width {
            return Err(Error::Parameter(format!(
                "column index {idx} out of range for {width} columns"
            )));
        }
        Ok(idx)
    }
}

impl Display for ColumnRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ColumnRef::Name(n) => f.write_str(n),
            ColumnRef::Index(i) => write!(f, "{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IngestOptions {
    pub has_header: bool,
    /// Feature columns; `None` selects every column except the label.
    pub select_columns: Option<Vec<ColumnRef>>,
    pub standardize: bool,
    pub label_column: Option<ColumnRef>,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            has_header: true,
            select_columns: None,
            standardize: false,
            label_column: None,
        }
    }
}

/// Reads the selected numeric columns and, optionally, an integer label column.
///
/// Parse errors carry 1-based data-row (header excluded) and column numbers.
pub fn read_csv(path: impl AsRef<Path>, opts: &IngestOptions) -> Result<(DataMatrix, Option<Vec<i64>>)> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv_from(file, opts).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

/// [`read_csv`] over any reader.
pub fn read_csv_from<R: std::io::Read>(reader: R, opts: &IngestOptions) -> Result<(DataMatrix, Option<Vec<i64>>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(opts.has_header)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let header: Option<Vec<String>> = if opts.has_header {
        Some(rdr.headers().map_err(csv_error)?.iter().map(String::from).collect())
    } else {
        None
    };

    let mut records = rdr.records();
    let first = match records.next() {
        Some(rec) => Some(rec.map_err(csv_error)?),
        None => None,
    };
    let width = header
        .as_ref()
        .map(Vec::len)
        .or_else(|| first.as_ref().map(csv::StringRecord::len))
        .ok_or_else(|| Error::EmptyInput("CSV file has no rows".into()))?;

    let label_idx = opts
        .label_column
        .as_ref()
        .map(|c| c.resolve(header.as_deref(), width))
        .transpose()?;
    let feature_idx: Vec<usize> = match &opts.select_columns {
        Some(cols) => {
            let idx = cols
                .iter()
                .map(|c| c.resolve(header.as_deref(), width))
                .collect::<Result<Vec<_>>>()?;
            if let Some(l) = label_idx {
                if idx.contains(&l) {
                    return Err(Error::Parameter("label column cannot also be a feature".into()));
                }
            }
            idx
        }
        None => (0..width).filter(|&i| Some(i) != label_idx).collect(),
    };
    if feature_idx.is_empty() {
        return Err(Error::EmptySelection);
    }

    let mut values = Vec::new();
    let mut labels = label_idx.map(|_| Vec::new());
    let mut n = 0;
    for (row, rec) in first.into_iter().map(Ok).chain(records).enumerate() {
        let rec = rec.map_err(csv_error)?;
        let row = row + 1;
        for &c in &feature_idx {
            values.push(parse_field(&rec, row, c, |s| {
                s.parse::<f64>().ok().filter(|v| v.is_finite())
            })?);
        }
        if let (Some(l), Some(labels)) = (label_idx, labels.as_mut()) {
            labels.push(parse_field(&rec, row, l, |s| s.parse::<i64>().ok())?);
        }
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptyInput("CSV file has no data rows".into()));
    }

    let mut x = DataMatrix::new(n, feature_idx.len(), values)?;
    if let Some(header) = &header {
        x = x.with_column_names(feature_idx.iter().map(|&i| header[i].clone()).collect())?;
    }
    if opts.standardize {
        x = standardize(&x);
    }
    Ok((x, labels))
}

fn parse_field<T>(rec: &csv::StringRecord, row: usize, col: usize, parse: impl Fn(&str) -> Option<T>) -> Result<T> {
    let raw = rec.get(col).unwrap_or("");
    if raw.is_empty() {
        return Err(Error::Parse {
            row,
            column: col + 1,
            message: "missing value".into(),
        });
    }
    parse(raw).ok_or_else(|| Error::Parse {
        row,
        column: col + 1,
        message: format!("`{raw}` is not a finite number"),
    })
}

fn csv_error(e: csv::Error) -> Error {
    let row = e.position().map_or(0, |p| p.record() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io("<csv>", io),
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => Error::Parse {
            row,
            column: len as usize,
            message: format!("expected {expected_len} fields, found {len}"),
        },
        other => Error::Parse {
            row,
            column: 0,
            message: format!("{other:?}"),
        },
    }
}

/// Header fields of a CSV file, without reading the rest.
pub fn read_header(path: impl AsRef<Path>) -> Result<Vec<String>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let header = rdr.headers().map_err(|e| match csv_error(e) {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })?;
    Ok(header.iter().map(String::from).collect())
}

/// Per-feature `(x - mean) / std` with the population std; constant columns become zeros.
pub fn standardize(x: &DataMatrix) -> DataMatrix {
    let (n, d) = (x.n(), x.d());
    let mut out = x.values().to_vec();
    for k in 0..d {
        let mean = (0..n).map(|i| x.get(i, k)).sum::<f64>() / n as f64;
        let var = (0..n).map(|i| (x.get(i, k) - mean).powi(2)).sum::<f64>() / n as f64;
        let std = var.sqrt();
        for i in 0..n {
            out[i * d + k] = if std > 0.0 { (x.get(i, k) - mean) / std } else { 0.0 };
        }
    }
    let standardized = DataMatrix::new(n, d, out).expect("shape preserved");
    match x.column_names() {
        Some(names) => standardized.with_column_names(names.to_vec()).expect("same width"),
        None => standardized,
    }
}

/// Writes a header plus one line per sample; labels, when given, go in a final `label` column.
pub fn write_csv<L: Display>(path: impl AsRef<Path>, x: &DataMatrix, labels: Option<&[L]>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv_to(std::io::BufWriter::new(file), x, labels).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn write_csv_to<W: std::io::Write, L: Display>(writer: W, x: &DataMatrix, labels: Option<&[L]>) -> Result<()> {
    if let Some(l) = labels {
        if l.len() != x.n() {
            return Err(Error::Dimension(format!("{} labels for {} rows", l.len(), x.n())));
        }
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    let mut header: Vec<String> = match x.column_names() {
        Some(names) => names.to_vec(),
        None => (0..x.d()).map(|k| format!("x{k}")).collect(),
    };
    if labels.is_some() {
        header.push("label".into());
    }
    w.write_record(&header).map_err(csv_error)?;
    let mut fields = Vec::with_capacity(header.len());
    for (i, row) in x.rows().enumerate() {
        fields.clear();
        fields.extend(row.iter().map(|v| format!("{v:?}")));
        if let Some(l) = labels {
            fields.push(l[i].to_string());
        }
        w.write_record(&fields).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;
    use proptest::prelude::*;

    fn read_str(s: &str, opts: &IngestOptions) -> Result<(DataMatrix, Option<Vec<i64>>)> {
        read_csv_from(s.as_bytes(), opts)
    }

    fn no_header() -> IngestOptions {
        IngestOptions {
            has_header: false,
            ..Default::default()
        }
    }

    #[test]
    fn parses_with_header() {
        let (x, labels) = read_str("a,b\n1,2\n3,4", &IngestOptions::default()).unwrap();
        assert_eq!((x.n(), x.d()), (2, 2));
        assert_eq!(x.values(), &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(x.column_names().unwrap(), &["a", "b"]);
        assert!(labels.is_none());
    }

    #[test]
    fn crlf_accepted() {
        let (x, _) = read_str("a,b\r\n1,2\r\n3,4\r\n", &IngestOptions::default()).unwrap();
        assert_eq!(x.values(), &[1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn standardize_population_std() {
        let opts = IngestOptions {
            standardize: true,
            ..no_header()
        };
        let (x, _) = read_str("1\n3\n", &opts).unwrap();
        assert_eq!(x.values(), &[-1.0, 1.0]);
        let (x, _) = read_str("5,1\n5,3\n", &opts).unwrap();
        assert_eq!(x.values(), &[0.0, -1.0, 0.0, 1.0]);
    }

    #[test]
    fn standardize_is_idempotent() {
        let mut rng = Rng::new(6);
        let x = DataMatrix::new(40, 3, (0..120).map(|_| rng.uniform(-50.0, 80.0)).collect()).unwrap();
        let once = standardize(&x);
        let twice = standardize(&once);
        for (a, b) in once.values().iter().zip(twice.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn parse_error_location() {
        match read_str("1,x\n", &no_header()) {
            Err(Error::Parse { row, column, .. }) => assert_eq!((row, column), (1, 2)),
            other => panic!("unexpected {other:?}"),
        }
        match read_str("a,b\n1,2\n3,\n", &IngestOptions::default()) {
            Err(Error::Parse { row, column, .. }) => assert_eq!((row, column), (2, 2)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(read_str("1,nan\n", &no_header()), Err(Error::Parse { .. })));
    }

    #[test]
    fn column_selection_and_labels() {
        let text = "name,a,b,label\nfoo,1,2,0\nbar,3,4,1\n";
        let opts = IngestOptions {
            select_columns: Some(vec![ColumnRef::parse("b"), ColumnRef::Index(1)]),
            label_column: Some(ColumnRef::parse("label")),
            ..Default::default()
        };
        let (x, labels) = read_str(text, &opts).unwrap();
        assert_eq!(x.values(), &[2.0, 1.0, 4.0, 3.0]);
        assert_eq!(labels.unwrap(), vec![0, 1]);

        let bad = IngestOptions {
            select_columns: Some(vec![ColumnRef::parse("missing")]),
            ..Default::default()
        };
        assert!(matches!(read_str(text, &bad), Err(Error::Parameter(_))));
        let empty = IngestOptions {
            select_columns: Some(vec![]),
            ..Default::default()
        };
        assert!(matches!(read_str(text, &empty), Err(Error::EmptySelection)));
        let overlap = IngestOptions {
            select_columns: Some(vec![ColumnRef::Index(3)]),
            label_column: Some(ColumnRef::Index(3)),
            ..Default::default()
        };
        assert!(read_str(text, &overlap).is_err());
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = read_csv("/definitely/not/here.csv", &IngestOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
        assert!(err.to_string().contains("/definitely/not/here.csv"));
    }

    #[test]
    fn label_column_contract() {
        let x = DataMatrix::new(2, 1, vec![0.5, -2.0]).unwrap();
        let mut buf = Vec::new();
        write_csv_to(&mut buf, &x, None::<&[usize]>).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x0\n0.5\n-2.0\n");
        let mut buf = Vec::new();
        write_csv_to(&mut buf, &x, Some(&[1usize, 0][..])).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x0,label\n0.5,1\n-2.0,0\n");
    }

    #[test]
    fn seeded_roundtrip_through_file() {
        let mut rng = Rng::new(100);
        let x = DataMatrix::new(100, 5, (0..500).map(|_| rng.normal(0.0, 1e3)).collect()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        write_csv(&path, &x, None::<&[i64]>).unwrap();
        let (back, _) = read_csv(&path, &IngestOptions::default()).unwrap();
        let bits = |m: &DataMatrix| m.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&back), bits(&x));
    }

    proptest! {
        #[test]
        fn roundtrip_any_finite(values in proptest::collection::vec(proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO, 1..40)) {
            let x = DataMatrix::new(values.len(), 1, values).unwrap();
            let labels: Vec<i64> = (0..x.n() as i64).collect();
            let mut buf = Vec::new();
            write_csv_to(&mut buf, &x, Some(&labels[..])).unwrap();
            let opts = IngestOptions { label_column: Some(ColumnRef::parse("label")), ..Default::default() };
            let (back, back_labels) = read_csv_from(&buf[..], &opts).unwrap();
            let bits = |m: &DataMatrix| m.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
            prop_assert_eq!(bits(&back), bits(&x));
            prop_assert_eq!(back_labels.unwrap(), labels);
        }
    }
}
