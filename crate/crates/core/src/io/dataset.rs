use crate::error::{Error, Result};
use crate::roc::Sample;
use std::io::{Read, Write};

/// Fewest rows accepted per group.
pub const MIN_GROUP_ROWS: usize = 2;

/// Reads a `score,group` CSV (extra columns ignored, any column order).
/// Group labels are `0` for reference and `1` for affected subjects. With
/// `log_transform`, scores must be positive and are replaced by their logs.
pub fn read_dataset<R: Read>(input: R, log_transform: bool) -> Result<Sample> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = rdr.headers()?.clone();
    let column = |name: &str| {
        headers.iter().position(|h| h.eq_ignore_ascii_case(name)).ok_or_else(|| Error::input(format!("dataset is missing the `{name}` column")))
    };
    let (score_col, group_col) = (column("score")?, column("group")?);
    let mut groups: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let raw = rec.get(score_col).unwrap_or("");
        let score: f64 = raw
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| Error::input(format!("line {line}: score `{raw}` is not a finite number")))?;
        let g = match rec.get(group_col).unwrap_or("") {
            "0" => 0,
            "1" => 1,
            other => return Err(Error::input(format!("line {line}: group must be 0 or 1, got `{other}`"))),
        };
        let value = if log_transform {
            if score <= 0.0 {
                return Err(Error::input(format!("line {line}: log transform needs positive scores, got {score}")));
            }
            score.ln()
        } else {
            score
        };
        groups[g].push(value);
    }
    for (g, v) in groups.iter().enumerate() {
        if v.len() < MIN_GROUP_ROWS {
            return Err(Error::input(format!("group {g} has {} rows; at least {MIN_GROUP_ROWS} are required", v.len())));
        }
    }
    let [y0, y1] = groups;
    Sample::new(y0, y1)
}

/// Writes scores in shortest round-trip notation, reference rows first.
pub fn write_dataset<W: Write>(sample: &Sample, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["score", "group"])?;
    for (g, scores) in [sample.reference(), sample.affected()].into_iter().enumerate() {
        for s in scores {
            w.write_record([s.to_string(), g.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_any_column_order() {
        let s = read_dataset("group,id,score\n0,a,1.5\n1,b,2.5\n0,c,0.5\n1,d,4\n".as_bytes(), false).unwrap();
        assert_eq!(s.reference(), &[1.5, 0.5]);
        assert_eq!(s.affected(), &[2.5, 4.0]);
    }

    #[test]
    fn missing_group_column_is_an_input_error() {
        let err = read_dataset("score\n1\n2\n".as_bytes(), false).unwrap_err();
        assert!(matches!(err, Error::Input(ref m) if m.contains("group")));
    }

    #[test]
    fn validation_errors() {
        assert!(read_dataset("score,group\n1,0\n2,1\n3,1\n".as_bytes(), false).is_err());
        assert!(read_dataset("score,group\n1,0\n2,0\nNaN,1\n3,1\n".as_bytes(), false).is_err());
        assert!(read_dataset("score,group\n1,0\n2,0\n3,2\n3,1\n".as_bytes(), false).is_err());
        assert!(read_dataset("score,group\n1,0\n0,0\n3,1\n3,1\n".as_bytes(), true).is_err());
    }

    #[test]
    fn log_transform_and_round_trip() {
        let s = read_dataset("score,group\n1,0\n2.718281828459045,0\n3,1\n0.1,1\n".as_bytes(), true).unwrap();
        assert!((s.reference()[1] - 1.0).abs() < 1e-15);
        let mut buf = Vec::new();
        write_dataset(&s, &mut buf).unwrap();
        assert_eq!(read_dataset(buf.as_slice(), false).unwrap(), s);
    }
}
