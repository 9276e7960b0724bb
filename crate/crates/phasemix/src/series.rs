//! CSV time series.
//!
//! Columns: `t, strain, stress, dissipation, lambda_1..lambda_k,
//! eps_p_norm_1..eps_p_norm_k`, with a leading `node` column for FE probe
//! series. Floats are written in shortest round-trip form.

use std::io::{Read, Write};

use phasemix_core::matpoint::{TimeRecord, TimeSeries};

use crate::error::AppError;

/// Shortest representation that parses back to the same bits.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn header(k: usize, with_node: bool) -> Vec<String> {
    let mut h: Vec<String> = Vec::with_capacity(5 + 2 * k);
    if with_node {
        h.push("node".into());
    }
    for s in ["t", "strain", "stress", "dissipation"] {
        h.push(s.into());
    }
    h.extend((1..=k).map(|i| format!("lambda_{i}")));
    h.extend((1..=k).map(|i| format!("eps_p_norm_{i}")));
    h
}

/// Writes `series`; `node` adds the node column with that id on every row.
pub fn write_series<W: Write>(out: W, series: &TimeSeries, node: Option<usize>) -> Result<(), AppError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(series.k(), node.is_some()))?;
    for r in series.records() {
        let mut row: Vec<String> = Vec::with_capacity(5 + 2 * series.k());
        if let Some(n) = node {
            row.push(n.to_string());
        }
        for v in [r.t, r.strain, r.stress, r.dissipation] {
            row.push(fmt_f64(v));
        }
        row.extend(r.fractions.iter().chain(&r.plastic_norms).map(|v| fmt_f64(*v)));
        w.write_record(&row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Reads a series written by [`write_series`]. Returns the node column when
/// present.
pub fn read_series<R: Read>(input: R, origin: &str) -> Result<(TimeSeries, Option<Vec<usize>>), AppError> {
    let mut r = csv::Reader::from_reader(input);
    let head: Vec<String> = r.headers()?.iter().map(String::from).collect();
    let with_node = head.first().is_some_and(|h| h == "node");
    let base = usize::from(with_node);
    let n = head.len().saturating_sub(base + 4);
    let k = n / 2;
    let parse_err = |line: usize, message: String| AppError::Parse {
        path: origin.into(),
        line,
        message,
    };
    if n % 2 != 0 || head != header(k, with_node) {
        return Err(parse_err(1, format!("unexpected header {}", head.join(","))));
    }
    let mut series = TimeSeries::new(k);
    let mut nodes = with_node.then(Vec::new);
    for (row, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = row + 2;
        let num = |c: usize| -> Result<f64, AppError> {
            rec[c]
                .parse()
                .map_err(|_| parse_err(line, format!("bad number '{}' in column {}", &rec[c], head[c])))
        };
        if let Some(ns) = nodes.as_mut() {
            ns.push(rec[0].parse().map_err(|_| parse_err(line, format!("bad node '{}'", &rec[0])))?);
        }
        let vals: Vec<f64> = (base..head.len()).map(num).collect::<Result<_, _>>()?;
        series.push(TimeRecord {
            t: vals[0],
            strain: vals[1],
            stress: vals[2],
            dissipation: vals[3],
            fractions: vals[4..4 + k].to_vec(),
            plastic_norms: vals[4 + k..].to_vec(),
        })?;
    }
    Ok((series, nodes))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> TimeSeries {
        let mut s = TimeSeries::new(2);
        for n in 0..5 {
            let t = n as f64 * 0.1;
            s.push(TimeRecord {
                t,
                strain: (t * 7.0).sin() * 1e-7,
                stress: -123456.789 * t,
                dissipation: 1.0 / 3.0 * t,
                fractions: vec![1.0 - t, t],
                plastic_norms: vec![std::f64::consts::PI * 1e-9, 0.0],
            })
            .unwrap();
        }
        s
    }

    #[test]
    fn round_trip_is_exact() {
        let s = sample();
        for node in [None, Some(17)] {
            let mut buf = Vec::new();
            write_series(&mut buf, &s, node).unwrap();
            let (back, nodes) = read_series(buf.as_slice(), "mem").unwrap();
            assert_eq!(back, s);
            assert_eq!(nodes, node.map(|n| vec![n; 5]));
        }
    }

    #[test]
    fn empty_series_is_header_only() {
        let mut buf = Vec::new();
        write_series(&mut buf, &TimeSeries::new(3), None).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "t,strain,stress,dissipation,lambda_1,lambda_2,lambda_3,eps_p_norm_1,eps_p_norm_2,eps_p_norm_3\n"
        );
        assert!(read_series(text.as_bytes(), "e").unwrap().0.is_empty());
    }

    #[test]
    fn bad_cell_reports_line() {
        let text = "t,strain,stress,dissipation,lambda_1,eps_p_norm_1\n0,0,0,0,1,0\n0.1,x,0,0,1,0\n";
        let e = read_series(text.as_bytes(), "s.csv").unwrap_err().to_string();
        assert!(e.starts_with("s.csv:3:") && e.contains("strain"), "{e}");
    }

    #[test]
    fn float_format() {
        for v in [0.0, -0.0, 1.5e-300, 6.02e23, 0.1, 1e-5, 123.456, f64::MIN_POSITIVE] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
        assert_eq!(fmt_f64(2.5e-7), "2.5e-7");
    }
}
