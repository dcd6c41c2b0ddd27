//! CSV datasets and pair construction.
//!
//! One example per row: the label (or a real score in ranking mode) comes
//! first and the features follow. A first line whose leading field is not a
//! number is treated as a header.

use std::io::Read;
use std::path::Path;

use chromatic_pac::gibbs::{LabeledDataset, PairSet, ScoredSample};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::HarnessError;

struct Table {
    dim: usize,
    targets: Vec<f64>,
    features: Vec<f64>,
    lines: Vec<usize>,
}

fn read_table(mut reader: impl Read) -> Result<Table, HarnessError> {
    let mut bytes = Vec::new();
    reader
        .read_to_end(&mut bytes)
        .map_err(|e| HarnessError::io("<input>", e))?;
    // The reader's own line counter skips blank lines, and a record's offset
    // may point at the blank lines before it; count from the offsets instead.
    let line_of = |offset: u64| {
        let mut start = offset as usize;
        while start < bytes.len() && matches!(bytes[start], b'\n' | b'\r') {
            start += 1;
        }
        1 + bytes[..start].iter().filter(|&&b| b == b'\n').count()
    };
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes.as_slice());
    let mut table = Table {
        dim: 0,
        targets: Vec::new(),
        features: Vec::new(),
        lines: Vec::new(),
    };
    let mut first = true;
    for record in csv.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| line_of(p.byte()));
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parse = |field: &str| {
            field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| HarnessError::Parse {
                    line,
                    message: format!("expected a finite number, found {field:?}"),
                })
        };
        if first && record.get(0).is_some_and(|f| f.parse::<f64>().is_err()) {
            first = false;
            continue;
        }
        first = false;
        if record.len() < 2 {
            return Err(HarnessError::Parse {
                line,
                message: "need a label and at least one feature".into(),
            });
        }
        let dim = record.len() - 1;
        if table.dim == 0 {
            table.dim = dim;
        } else if dim != table.dim {
            return Err(HarnessError::Parse {
                line,
                message: format!("expected {} features, found {dim}", table.dim),
            });
        }
        table.targets.push(parse(&record[0])?);
        table.lines.push(line);
        for field in record.iter().skip(1) {
            table.features.push(parse(field)?);
        }
    }
    if table.targets.is_empty() {
        return Err(HarnessError::Parse {
            line: 0,
            message: "no examples".into(),
        });
    }
    Ok(table)
}

fn open(path: &Path) -> Result<std::fs::File, HarnessError> {
    std::fs::File::open(path).map_err(|e| HarnessError::io(path, e))
}

/// Classification dataset from CSV text; labels must be -1 or +1.
pub fn parse_dataset(reader: impl Read) -> Result<LabeledDataset, HarnessError> {
    let table = read_table(reader)?;
    let mut labels = Vec::with_capacity(table.targets.len());
    for (&t, &line) in table.targets.iter().zip(&table.lines) {
        if t == 1.0 || t == -1.0 {
            labels.push(t as i8);
        } else {
            return Err(HarnessError::Parse {
                line,
                message: format!("label {t} is not -1 or +1"),
            });
        }
    }
    Ok(LabeledDataset::new(table.dim, table.features, labels)?)
}

/// Ranking dataset: the first column is a real-valued score.
pub fn parse_scored(reader: impl Read) -> Result<ScoredSample, HarnessError> {
    let table = read_table(reader)?;
    Ok(ScoredSample::new(table.dim, table.features, table.targets)?)
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<LabeledDataset, HarnessError> {
    let path = path.as_ref();
    parse_dataset(open(path)?).map_err(|e| with_path(path, e))
}

pub fn load_scored(path: impl AsRef<Path>) -> Result<ScoredSample, HarnessError> {
    let path = path.as_ref();
    parse_scored(open(path)?).map_err(|e| with_path(path, e))
}

fn with_path(path: &Path, e: HarnessError) -> HarnessError {
    match e {
        HarnessError::Parse { line, message } => HarnessError::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    }
}

/// Writes a classification dataset in the format read by [`load_dataset`].
pub fn write_dataset(data: &LabeledDataset, writer: impl std::io::Write) -> Result<(), HarnessError> {
    let mut csv = csv::Writer::from_writer(writer);
    let mut header = vec!["label".to_string()];
    header.extend((0..data.dim()).map(|k| format!("x{k}")));
    csv.write_record(&header)?;
    for i in 0..data.len() {
        let mut row = vec![data.label(i).to_string()];
        row.extend(data.row(i).iter().map(f64::to_string));
        csv.write_record(&row)?;
    }
    csv.flush().map_err(|e| HarnessError::io("<output>", e))?;
    Ok(())
}

/// Class sizes after capping the pair count: both classes shrink by the same
/// factor, then the larger one loses examples until the product fits.
pub fn capped_class_sizes(pos: usize, neg: usize, cap: usize) -> (usize, usize) {
    if pos.saturating_mul(neg) <= cap {
        return (pos, neg);
    }
    let scale = (cap as f64 / (pos as f64 * neg as f64)).sqrt();
    let mut p = ((pos as f64 * scale).floor() as usize).clamp(1, pos);
    let mut n = ((neg as f64 * scale).floor() as usize).clamp(1, neg);
    while p * n > cap && (p > 1 || n > 1) {
        if p >= n {
            p -= 1;
        } else {
            n -= 1;
        }
    }
    (p, n)
}

/// All positive-negative pairs. With a cap smaller than `ℓ⁺ℓ⁻`, whole
/// examples are dropped uniformly at random from each class until the
/// product fits, so the pairs keep their bipartite structure.
pub fn build_pairs(data: &LabeledDataset, cap: Option<usize>, seed: u64) -> Result<PairSet, HarnessError> {
    let pos: Vec<usize> = (0..data.len()).filter(|&i| data.label(i) > 0).collect();
    let neg: Vec<usize> = (0..data.len()).filter(|&i| data.label(i) < 0).collect();
    let Some(cap) = cap.filter(|&c| pos.len().saturating_mul(neg.len()) > c) else {
        return Ok(PairSet::new(data, pos, neg)?);
    };
    if pos.is_empty() || neg.is_empty() {
        return Ok(PairSet::new(data, pos, neg)?);
    }
    if cap == 0 {
        return Err(HarnessError::Config("pair cap must be positive".into()));
    }
    let (kp, kn) = capped_class_sizes(pos.len(), neg.len(), cap);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pick = |class: &[usize], k: usize| {
        let mut chosen: Vec<usize> = sample(&mut rng, class.len(), k).into_iter().map(|i| class[i]).collect();
        chosen.sort_unstable();
        chosen
    };
    let pos = pick(&pos, kp);
    let neg = pick(&neg, kn);
    Ok(PairSet::new(data, pos, neg)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_is_skipped() {
        let d = parse_dataset("label,a,b\n1,0.5,2\n-1,1,1\n".as_bytes()).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.row(1), &[1.0, 1.0]);
    }

    #[test]
    fn errors_name_the_line() {
        let err = parse_dataset("label,a\n1,0.5\n-1,abc\n".as_bytes()).unwrap_err();
        assert!(matches!(err, HarnessError::Parse { line: 3, .. }), "{err:?}");
        let err = parse_dataset("1,0.5\n\n2,1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, HarnessError::Parse { line: 3, .. }), "{err:?}");
        let err = parse_dataset("1,0.5\n-1,1,2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, HarnessError::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn ranking_mode_keeps_real_scores() {
        let s = parse_scored("score,x\n0.3,1\n2.5,0\n".as_bytes()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.score(1), 2.5);
    }

    #[test]
    fn capped_sizes() {
        assert_eq!(capped_class_sizes(2, 3, 100), (2, 3));
        let (p, n) = capped_class_sizes(50, 50, 100);
        assert!(p * n <= 100 && p >= 9 && n >= 9);
        assert_eq!(capped_class_sizes(1, 1000, 10), (1, 10));
    }
}
