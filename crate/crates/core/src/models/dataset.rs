use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Tolerance on unit row norms for a dataset flagged as normalized.
pub const NORM_TOL: f64 = 1e-12;

/// Row-major feature matrix with integer class labels.
///
/// Binary problems (`classes == 2`) read label `l` as the sign `2l − 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<f64>,
    labels: Vec<u32>,
    dim: usize,
    classes: u32,
    normalized: bool,
}

impl Dataset {
    /// `normalized` is verified, not assumed.
    pub fn new(
        features: Vec<f64>,
        labels: Vec<u32>,
        dim: usize,
        classes: u32,
        normalized: bool,
    ) -> Result<Self> {
        if dim == 0 || classes < 2 {
            return Err(Error::invalid("need d ≥ 1 and at least two classes"));
        }
        if features.len() != labels.len() * dim {
            return Err(Error::DimensionMismatch {
                expected: labels.len() * dim,
                got: features.len(),
            });
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= classes) {
            return Err(Error::invalid(format!("label {bad} outside 0..{classes}")));
        }
        let data = Self {
            features,
            labels,
            dim,
            classes,
            normalized,
        };
        if normalized {
            if let Some(i) = (0..data.len()).find(|&i| (norm(data.row(i)) - 1.0).abs() > NORM_TOL) {
                return Err(Error::invalid(format!("row {i} is not unit norm")));
            }
        }
        Ok(data)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn classes(&self) -> u32 {
        self.classes
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.dim..(i + 1) * self.dim]
    }

    pub fn label(&self, i: usize) -> u32 {
        self.labels[i]
    }

    /// Binary label as `±1`.
    pub fn sign(&self, i: usize) -> f64 {
        if self.labels[i] == 0 {
            -1.0
        } else {
            1.0
        }
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Scale every non-zero row to unit norm.
    pub fn normalize(mut self) -> Self {
        for row in self.features.chunks_mut(self.dim) {
            normalize_row(row);
        }
        self.normalized = self
            .features
            .chunks(self.dim)
            .all(|r| (norm(r) - 1.0).abs() <= NORM_TOL);
        self
    }

    pub(crate) fn replace_row(&mut self, i: usize, row: &[f64], label: u32, normalized: bool) {
        self.features[i * self.dim..(i + 1) * self.dim].copy_from_slice(row);
        self.labels[i] = label;
        self.normalized &= normalized;
    }

    /// Parse the text format: a header `# d=<d> c=<c> normalized=<0|1>`,
    /// then one comma-separated row per sample with `d` features and the
    /// class index last. Blank lines are skipped.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let reader = BufReader::new(reader);
        let mut lines = reader.lines().enumerate();
        let parse_err = |line: usize, message: String| Error::Parse { line, message };
        let (dim, classes, normalized) = loop {
            match lines.next() {
                None => return Err(parse_err(1, "empty input, expected header".into())),
                Some((i, line)) => {
                    let line = line.map_err(|e| parse_err(i + 1, e.to_string()))?;
                    if line.trim().is_empty() {
                        continue;
                    }
                    break parse_header(&line).map_err(|m| parse_err(i + 1, m))?;
                }
            }
        };
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for (i, line) in lines {
            let line = line.map_err(|e| parse_err(i + 1, e.to_string()))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != dim + 1 {
                return Err(parse_err(
                    i + 1,
                    format!("expected {} fields, found {}", dim + 1, fields.len()),
                ));
            }
            for f in &fields[..dim] {
                features.push(
                    f.parse::<f64>()
                        .map_err(|e| parse_err(i + 1, format!("{f:?}: {e}")))?,
                );
            }
            let label = fields[dim];
            labels.push(
                label
                    .parse::<u32>()
                    .map_err(|e| parse_err(i + 1, format!("label {label:?}: {e}")))?,
            );
        }
        if labels.is_empty() {
            return Err(parse_err(1, "no samples".into()));
        }
        Self::new(features, labels, dim, classes, normalized)
            .map_err(|e| parse_err(1, e.to_string()))
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> std::io::Result<()> {
        let mut w = BufWriter::new(writer);
        writeln!(
            w,
            "# d={} c={} normalized={}",
            self.dim,
            self.classes,
            u8::from(self.normalized)
        )?;
        for i in 0..self.len() {
            for v in self.row(i) {
                write!(w, "{v},")?;
            }
            writeln!(w, "{}", self.labels[i])?;
        }
        w.flush()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_csv(file)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(file).map_err(|e| Error::io(path, e))
    }
}

fn parse_header(line: &str) -> std::result::Result<(usize, u32, bool), String> {
    let body = line.trim().strip_prefix('#').ok_or_else(|| {
        format!("expected header `# d=<d> c=<c> normalized=<0|1>`, found {line:?}")
    })?;
    let (mut d, mut c, mut norm) = (None, None, None);
    for token in body.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| format!("bad header token {token:?}"))?;
        match key {
            "d" => d = Some(value.parse::<usize>().map_err(|e| format!("d: {e}"))?),
            "c" => c = Some(value.parse::<u32>().map_err(|e| format!("c: {e}"))?),
            "normalized" => {
                norm = Some(match value {
                    "0" => false,
                    "1" => true,
                    _ => return Err(format!("normalized must be 0 or 1, found {value:?}")),
                })
            }
            _ => return Err(format!("unknown header key {key:?}")),
        }
    }
    match (d, c, norm) {
        (Some(d), Some(c), Some(n)) => Ok((d, c, n)),
        _ => Err("header must set d, c and normalized".into()),
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn normalize_row(row: &mut [f64]) {
    let n = norm(row);
    if n > 0.0 {
        row.iter_mut().for_each(|x| *x /= n);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Dataset {
        Dataset::new(
            vec![0.6, 0.8, 1.0, 0.0, 0.1 / 3f64.sqrt(), 0.0],
            vec![1, 0, 1],
            2,
            2,
            false,
        )
        .unwrap()
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let data = tiny().normalize();
        let mut buf = Vec::new();
        data.write_csv(&mut buf).unwrap();
        let back = Dataset::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, data);
        assert!(back.is_normalized());
    }

    #[test]
    fn empty_input_is_a_parse_error() {
        assert!(matches!(
            Dataset::read_csv(&b""[..]),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Dataset::read_csv(&b"# d=2 c=2 normalized=0\n"[..]),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn malformed_row_reports_its_line() {
        let text = "# d=2 c=2 normalized=0\n1,2,0\n3,x,1\n";
        match Dataset::read_csv(text.as_bytes()) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("\"x\""), "{message}");
            }
            other => panic!("{other:?}"),
        }
        let short = "# d=2 c=2 normalized=0\n1,0\n";
        assert!(matches!(
            Dataset::read_csv(short.as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn normalized_flag_is_checked() {
        assert!(Dataset::new(vec![2.0, 0.0], vec![0], 2, 2, true).is_err());
        assert!(Dataset::new(vec![1.0, 0.0], vec![2], 2, 2, false).is_err());
    }

    #[test]
    fn signs() {
        let d = tiny();
        assert_eq!((d.sign(0), d.sign(1)), (1.0, -1.0));
    }
}
