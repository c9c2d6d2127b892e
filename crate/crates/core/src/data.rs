//! Dataset I/O: the CSV record format and the embedded rat tumor data.
//!
//! CSV schema: a header `t1,...,tn,c1,...,cn` followed by one record per
//! line. Times are positive decimals; `c_i` is `0` or `1`, and by default `1`
//! marks a right-censored time.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::fit::{Dataset, Observation};

/// Time to tumor appearance in weeks for 50 litters of female rats, each
/// with one drug-treated rat (T) and two controls (C1, C2). Flags mark
/// right-censored times.
const RATS: [([f64; 3], [bool; 3]); 50] = [
    ([101.0, 49.0, 104.0], [true, false, true]),
    ([104.0, 104.0, 104.0], [true, true, true]),
    ([89.0, 104.0, 104.0], [true, true, true]),
    ([104.0, 94.0, 77.0], [false, true, false]),
    ([82.0, 77.0, 104.0], [true, true, true]),
    ([89.0, 91.0, 90.0], [false, true, true]),
    ([39.0, 45.0, 50.0], [false, true, false]),
    ([93.0, 104.0, 103.0], [true, true, true]),
    ([104.0, 63.0, 104.0], [true, true, true]),
    ([81.0, 104.0, 69.0], [true, true, true]),
    ([104.0, 104.0, 104.0], [true, true, true]),
    ([104.0, 83.0, 40.0], [true, true, false]),
    ([104.0, 104.0, 104.0], [true, true, true]),
    ([78.0, 104.0, 104.0], [true, true, true]),
    ([86.0, 55.0, 94.0], [false, false, true]),
    ([76.0, 87.0, 74.0], [true, true, true]),
    ([102.0, 104.0, 80.0], [false, true, true]),
    ([45.0, 79.0, 104.0], [false, true, true]),
    ([104.0, 104.0, 104.0], [true, true, true]),
    ([76.0, 84.0, 78.0], [true, false, false]),
    ([72.0, 95.0, 104.0], [false, true, true]),
    ([92.0, 104.0, 102.0], [false, true, false]),
    ([55.0, 104.0, 104.0], [true, true, true]),
    ([89.0, 104.0, 104.0], [false, true, true]),
    ([103.0, 91.0, 104.0], [false, true, true]),
    ([104.0, 102.0, 104.0], [true, true, true]),
    ([77.0, 97.0, 79.0], [true, true, true]),
    ([88.0, 96.0, 104.0], [false, false, true]),
    ([96.0, 104.0, 104.0], [false, true, true]),
    ([70.0, 104.0, 77.0], [false, true, true]),
    ([91.0, 70.0, 92.0], [true, true, true]),
    ([103.0, 69.0, 91.0], [false, true, true]),
    ([85.0, 72.0, 104.0], [true, true, true]),
    ([104.0, 104.0, 74.0], [true, true, true]),
    ([67.0, 104.0, 68.0], [false, true, false]),
    ([104.0, 104.0, 104.0], [true, true, true]),
    ([87.0, 104.0, 104.0], [true, true, true]),
    ([89.0, 104.0, 104.0], [true, true, true]),
    ([104.0, 81.0, 64.0], [true, false, false]),
    ([34.0, 104.0, 54.0], [false, true, false]),
    ([103.0, 73.0, 84.0], [false, false, false]),
    ([80.0, 104.0, 73.0], [false, true, true]),
    ([94.0, 104.0, 104.0], [false, true, true]),
    ([104.0, 101.0, 94.0], [true, false, true]),
    ([80.0, 81.0, 76.0], [false, false, true]),
    ([73.0, 104.0, 66.0], [false, true, false]),
    ([104.0, 98.0, 73.0], [true, true, true]),
    ([49.0, 83.0, 77.0], [true, true, true]),
    ([88.0, 79.0, 99.0], [true, true, true]),
    ([104.0, 104.0, 79.0], [true, true, false]),
];

/// Column labels of [`rats`].
pub const RATS_LABELS: [&str; 3] = ["T", "C1", "C2"];

/// The embedded 50-litter rat tumor dataset, in litter order.
pub fn rats() -> Dataset {
    let records = RATS
        .iter()
        .map(|(t, c)| Observation::new(t.to_vec(), c.to_vec()).expect("embedded record is valid"))
        .collect();
    Dataset::new(records)
        .and_then(|d| d.with_labels(RATS_LABELS.iter().map(|s| s.to_string()).collect()))
        .expect("embedded dataset is valid")
}

/// Reads a dataset in the CSV schema above. `censored_value` is the flag
/// value (0 or 1) that marks a censored time.
pub fn read_csv<R: Read>(reader: R, censored_value: u8) -> Result<Dataset> {
    if censored_value > 1 {
        return Err(Error::Parse(format!(
            "censored value must be 0 or 1, got {censored_value}"
        )));
    }
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = rdr
        .headers()
        .map_err(|e| Error::Parse(format!("line 1: {e}")))?
        .clone();
    let dim = header_dimension(&header)?;
    let mut records = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let line = row + 2;
        let rec = rec.map_err(|e| Error::Parse(format!("line {line}: {e}")))?;
        if rec.len() != 2 * dim {
            return Err(Error::Schema(format!(
                "line {line}: expected {} fields, found {}",
                2 * dim,
                rec.len()
            )));
        }
        let mut times = Vec::with_capacity(dim);
        for (j, field) in rec.iter().take(dim).enumerate() {
            let t: f64 = field
                .parse()
                .map_err(|_| Error::Parse(format!("line {line}: t{} = {field:?} is not a number", j + 1)))?;
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::Domain(format!(
                    "line {line}: t{} = {t} must be a positive time",
                    j + 1
                )));
            }
            times.push(t);
        }
        let mut censored = Vec::with_capacity(dim);
        for (j, field) in rec.iter().skip(dim).enumerate() {
            let flag = match field {
                "0" => 0u8,
                "1" => 1u8,
                other => {
                    return Err(Error::Parse(format!(
                        "line {line}: c{} = {other:?} must be 0 or 1",
                        j + 1
                    )))
                }
            };
            censored.push(flag == censored_value);
        }
        records.push(Observation::new(times, censored)?);
    }
    if records.is_empty() {
        return Err(Error::Schema("CSV contains a header but no records".into()));
    }
    Dataset::new(records)
}

fn header_dimension(header: &csv::StringRecord) -> Result<usize> {
    let fields: Vec<&str> = header.iter().collect();
    if fields.is_empty() || !fields.len().is_multiple_of(2) {
        return Err(Error::Schema(format!(
            "header must be t1,...,tn,c1,...,cn; found {} columns",
            fields.len()
        )));
    }
    let dim = fields.len() / 2;
    for (j, field) in fields.iter().enumerate() {
        let expected = if j < dim {
            format!("t{}", j + 1)
        } else {
            format!("c{}", j - dim + 1)
        };
        if !field.eq_ignore_ascii_case(&expected) {
            return Err(Error::Schema(format!(
                "header column {} is {field:?}, expected {expected:?}",
                j + 1
            )));
        }
    }
    Ok(dim)
}

fn write_header<W: Write + ?Sized>(out: &mut W, dim: usize) -> Result<()> {
    let cols: Vec<String> = (1..=dim)
        .map(|i| format!("t{i}"))
        .chain((1..=dim).map(|i| format!("c{i}")))
        .collect();
    writeln!(out, "{}", cols.join(","))?;
    Ok(())
}

/// Writes a dataset in the CSV schema with `1` marking censored times.
pub fn write_csv<W: Write + ?Sized>(out: &mut W, d: &Dataset) -> Result<()> {
    write_header(out, d.dim())?;
    for r in d.records() {
        let times = r.times().iter().map(|t| t.to_string());
        let flags = r
            .censored()
            .iter()
            .map(|c| if *c { "1" } else { "0" }.to_string());
        writeln!(out, "{}", times.chain(flags).collect::<Vec<_>>().join(","))?;
    }
    Ok(())
}

/// Writes uncensored sample points in the CSV schema.
pub fn write_points<W: Write + ?Sized>(out: &mut W, points: &[Vec<f64>]) -> Result<()> {
    let dim = points.first().map_or(0, Vec::len);
    write_header(out, dim)?;
    let zeros = vec!["0"; dim].join(",");
    for p in points {
        let times: Vec<String> = p.iter().map(|t| t.to_string()).collect();
        writeln!(out, "{},{zeros}", times.join(","))?;
    }
    Ok(())
}
