//! CSV readers and writers for scans, curves, tomography bundles and
//! reports.
//!
//! Every file has a header row, comma separators, `.` decimals and LF line
//! endings. Numbers are written in the shortest form that reads back to the
//! same value, so output is byte-for-byte reproducible.

use std::io::{Read, Write};

use csv::{ReaderBuilder, StringRecord, Terminator, WriterBuilder};

use crate::calibration::{ControlUnit, FringeScan};
use crate::error::{Error, Result};
use crate::interference::NoonCurves;
use crate::matrix::CMatrix;
use crate::scalar::Real;
use crate::tomography::{HomVisibility, TomographyDataset};
use crate::unitary::Unitary;

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    WriterBuilder::new().terminator(Terminator::Any(b'\n')).from_writer(w)
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    ReaderBuilder::new().trim(csv::Trim::All).from_reader(r)
}

fn num<T: Real>(x: T) -> String {
    let a = x.abs();
    if a != T::zero() && a.is_finite() && !(a >= T::lit(1e-4) && a < T::lit(1e15)) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

struct Columns {
    names: Vec<String>,
}

impl Columns {
    fn new(headers: &StringRecord) -> Self {
        Self {
            names: headers.iter().map(|h| h.to_ascii_lowercase()).collect(),
        }
    }

    fn find(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn require(&self, name: &str) -> Result<usize> {
        self.find(name).ok_or_else(|| Error::Format {
            line: 1,
            message: format!("missing column `{name}`"),
        })
    }
}

fn line_of(record: &StringRecord, fallback: usize) -> usize {
    record.position().map_or(fallback, |p| p.line() as usize)
}

fn field<'a>(record: &'a StringRecord, col: usize, name: &str, line: usize) -> Result<&'a str> {
    record.get(col).ok_or_else(|| Error::Format {
        line,
        message: format!("missing value for `{name}`"),
    })
}

fn parse<T: Real>(record: &StringRecord, col: usize, name: &str, line: usize) -> Result<T> {
    let s = field(record, col, name, line)?;
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .and_then(T::from_f64)
        .ok_or_else(|| Error::Format {
            line,
            message: format!("`{name}` is not a finite number: {s:?}"),
        })
}

fn parse_index(record: &StringRecord, col: usize, name: &str, line: usize) -> Result<usize> {
    let s = field(record, col, name, line)?;
    s.parse().map_err(|_| Error::Format {
        line,
        message: format!("`{name}` is not a mode index: {s:?}"),
    })
}

/// Reads a scan with columns `control,unit,out1[,out2][,acc1[,acc2]]`.
/// An empty `out2` column marks a single-output scan.
pub fn read_fringe_scan<T: Real, R: Read>(r: R, label: &str) -> Result<FringeScan<T>> {
    let mut rdr = reader(r);
    let cols = Columns::new(rdr.headers()?);
    let c_control = cols.require("control")?;
    let c_unit = cols.require("unit")?;
    let c_out = [Some(cols.require("out1")?), cols.find("out2")];
    let c_acc = [cols.find("acc1"), cols.find("acc2")];
    let mut control = Vec::new();
    let mut unit = None;
    let mut outputs: [Vec<T>; 2] = [Vec::new(), Vec::new()];
    let mut accidentals: [Vec<T>; 2] = [Vec::new(), Vec::new()];
    let mut second_present = None;
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = line_of(&rec, k + 2);
        control.push(parse(&rec, c_control, "control", line)?);
        let u = field(&rec, c_unit, "unit", line)?;
        let u = ControlUnit::parse(u).ok_or_else(|| Error::Format {
            line,
            message: format!("`unit` must be V or W, got {u:?}"),
        })?;
        if unit.is_some_and(|prev| prev != u) {
            return Err(Error::Format {
                line,
                message: "`unit` changes within the scan".into(),
            });
        }
        unit = Some(u);
        let has_second = c_out[1].is_some_and(|c| rec.get(c).is_some_and(|s| !s.is_empty()));
        if second_present.is_some_and(|p| p != has_second) {
            return Err(Error::Format {
                line,
                message: "`out2` is filled on some rows only".into(),
            });
        }
        second_present = Some(has_second);
        for o in 0..if has_second { 2 } else { 1 } {
            let name = ["out1", "out2"][o];
            outputs[o].push(parse(&rec, c_out[o].unwrap_or(0), name, line)?);
            let acc = match c_acc[o] {
                Some(c) if rec.get(c).is_some_and(|s| !s.is_empty()) => parse(&rec, c, ["acc1", "acc2"][o], line)?,
                _ => T::zero(),
            };
            accidentals[o].push(acc);
        }
    }
    let unit = unit.ok_or_else(|| Error::Format {
        line: 2,
        message: "scan has no rows".into(),
    })?;
    let n_out = if second_present == Some(true) { 2 } else { 1 };
    let [o1, o2] = outputs;
    let [a1, a2] = accidentals;
    let (outputs, accidentals) = if n_out == 2 {
        (vec![o1, o2], vec![a1, a2])
    } else {
        (vec![o1], vec![a1])
    };
    FringeScan::with_accidentals(control, unit, outputs, accidentals, label)
}

pub fn write_fringe_scan<T: Real, W: Write>(w: W, scan: &FringeScan<T>) -> Result<()> {
    let mut wtr = writer(w);
    let two = scan.outputs.len() == 2;
    let acc = scan.has_accidentals();
    let mut header = vec!["control", "unit", "out1", "out2"];
    if acc {
        header.extend(["acc1", "acc2"]);
    }
    wtr.write_record(&header)?;
    for k in 0..scan.len() {
        let mut row = vec![num(scan.control[k]), scan.unit.symbol().to_string(), num(scan.outputs[0][k])];
        row.push(if two { num(scan.outputs[1][k]) } else { String::new() });
        if acc {
            row.push(num(scan.accidentals[0][k]));
            row.push(if two { num(scan.accidentals[1][k]) } else { String::new() });
        }
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Two-photon curves as `control,P11,P02,P20`.
pub fn write_curves<T: Real, W: Write>(w: W, curves: &NoonCurves<T>) -> Result<()> {
    let mut wtr = writer(w);
    wtr.write_record(["control", "P11", "P02", "P20"])?;
    for k in 0..curves.len() {
        wtr.write_record([
            num(curves.control[k]),
            num(curves.p11[k]),
            num(curves.p02[k]),
            num(curves.p20[k]),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Named columns of equal length from a CSV with a header row.
pub fn read_columns<T: Real, R: Read>(r: R, names: &[&str]) -> Result<Vec<Vec<T>>> {
    let mut rdr = reader(r);
    let cols = Columns::new(rdr.headers()?);
    let idx = names.iter().map(|n| cols.require(n)).collect::<Result<Vec<_>>>()?;
    let mut out = vec![Vec::new(); names.len()];
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = line_of(&rec, k + 2);
        for ((col, name), dst) in idx.iter().zip(names).zip(&mut out) {
            dst.push(parse(&rec, *col, name, line)?);
        }
    }
    Ok(out)
}

pub fn write_columns<T: Real, W: Write>(w: W, names: &[&str], columns: &[&[T]]) -> Result<()> {
    let rows = columns.first().map_or(0, |c| c.len());
    if names.len() != columns.len() || columns.iter().any(|c| c.len() != rows) {
        return Err(Error::DimensionMismatch {
            what: "output columns",
            expected: names.len(),
            found: columns.len(),
        });
    }
    let mut wtr = writer(w);
    wtr.write_record(names)?;
    for k in 0..rows {
        wtr.write_record(columns.iter().map(|c| num(c[k])))?;
    }
    wtr.flush()?;
    Ok(())
}

/// Singles in long form, `input,output,probability,sigma`, with
/// `probability = P(output | input)`.
pub fn write_singles<T: Real, W: Write>(w: W, dataset: &TomographyDataset<T>) -> Result<()> {
    let mut wtr = writer(w);
    wtr.write_record(["input", "output", "probability", "sigma"])?;
    for (i, row) in dataset.singles.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            wtr.write_record([i.to_string(), j.to_string(), num(*p), num(dataset.singles_sigma[i][j])])?;
        }
    }
    wtr.flush()?;
    Ok(())
}

/// Singles matrix and its uncertainties; `sigma` may be omitted.
pub fn read_singles<T: Real, R: Read>(r: R) -> Result<(Vec<Vec<T>>, Vec<Vec<T>>)> {
    let mut rdr = reader(r);
    let cols = Columns::new(rdr.headers()?);
    let (ci, co, cp) = (cols.require("input")?, cols.require("output")?, cols.require("probability")?);
    let cs = cols.find("sigma");
    let mut entries = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = line_of(&rec, k + 2);
        let i = parse_index(&rec, ci, "input", line)?;
        let j = parse_index(&rec, co, "output", line)?;
        let p: T = parse(&rec, cp, "probability", line)?;
        let s: T = match cs {
            Some(c) => parse(&rec, c, "sigma", line)?,
            None => T::zero(),
        };
        entries.push((i, j, p, s, line));
    }
    let n = entries.iter().map(|e| e.0.max(e.1) + 1).max().unwrap_or(0);
    let mut singles = vec![vec![None; n]; n];
    let mut sigma = vec![vec![T::zero(); n]; n];
    for (i, j, p, s, line) in entries {
        if singles[i][j].replace(p).is_some() {
            return Err(Error::Format {
                line,
                message: format!("duplicate singles entry ({i}, {j})"),
            });
        }
        sigma[i][j] = s;
    }
    let singles = singles
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            row.into_iter()
                .enumerate()
                .map(|(j, p)| p.ok_or_else(|| Error::IncompleteDataset(format!("no singles entry for input {i}, output {j}"))))
                .collect()
        })
        .collect::<Result<Vec<Vec<T>>>>()?;
    Ok((singles, sigma))
}

/// HOM visibilities as `in_a,in_b,out_k,out_l,visibility,sigma`.
pub fn write_visibilities<T: Real, W: Write>(w: W, visibilities: &[HomVisibility<T>]) -> Result<()> {
    let mut wtr = writer(w);
    wtr.write_record(["in_a", "in_b", "out_k", "out_l", "visibility", "sigma"])?;
    for v in visibilities {
        wtr.write_record([
            v.inputs.0.to_string(),
            v.inputs.1.to_string(),
            v.outputs.0.to_string(),
            v.outputs.1.to_string(),
            num(v.value),
            num(v.sigma),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_visibilities<T: Real, R: Read>(r: R) -> Result<Vec<HomVisibility<T>>> {
    let mut rdr = reader(r);
    let cols = Columns::new(rdr.headers()?);
    let names = ["in_a", "in_b", "out_k", "out_l"];
    let idx = names.iter().map(|n| cols.require(n)).collect::<Result<Vec<_>>>()?;
    let cv = cols.require("visibility")?;
    let cs = cols.find("sigma");
    let mut out = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = line_of(&rec, k + 2);
        let m = idx
            .iter()
            .zip(names)
            .map(|(&c, n)| parse_index(&rec, c, n, line))
            .collect::<Result<Vec<_>>>()?;
        out.push(HomVisibility {
            inputs: (m[0], m[1]),
            outputs: (m[2], m[3]),
            value: parse(&rec, cv, "visibility", line)?,
            sigma: match cs {
                Some(c) => parse(&rec, c, "sigma", line)?,
                None => T::zero(),
            },
        });
    }
    Ok(out)
}

/// Reads a singles file and a visibility file into a dataset.
pub fn read_tomography_bundle<T: Real, R1: Read, R2: Read>(
    singles: R1,
    visibilities: R2,
    indistinguishability: T,
) -> Result<TomographyDataset<T>> {
    let (s, sigma) = read_singles(singles)?;
    let v = read_visibilities(visibilities)?;
    TomographyDataset::new(s, Some(sigma), v, indistinguishability)
}

/// Matrix entries as `out,in,re,im`.
pub fn write_matrix<T: Real, W: Write>(w: W, m: &CMatrix<T>) -> Result<()> {
    let mut wtr = writer(w);
    wtr.write_record(["out", "in", "re", "im"])?;
    for j in 0..m.rows() {
        for i in 0..m.cols() {
            let z = m[(j, i)];
            wtr.write_record([j.to_string(), i.to_string(), num(z.re), num(z.im)])?;
        }
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_matrix<T: Real, R: Read>(r: R) -> Result<CMatrix<T>> {
    let mut rdr = reader(r);
    let cols = Columns::new(rdr.headers()?);
    let (co, ci, cr, cm) = (cols.require("out")?, cols.require("in")?, cols.require("re")?, cols.require("im")?);
    let mut entries = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = line_of(&rec, k + 2);
        entries.push((
            parse_index(&rec, co, "out", line)?,
            parse_index(&rec, ci, "in", line)?,
            parse::<T>(&rec, cr, "re", line)?,
            parse::<T>(&rec, cm, "im", line)?,
        ));
    }
    let n = entries.iter().map(|e| e.0.max(e.1) + 1).max().unwrap_or(0);
    if entries.len() != n * n {
        return Err(Error::IncompleteDataset(format!("{} entries for a {n}x{n} matrix", entries.len())));
    }
    let mut m = CMatrix::zeros(n, n);
    for (j, i, re, im) in entries {
        m[(j, i)] = num_complex::Complex::new(re, im);
    }
    Ok(m)
}

pub fn read_unitary<T: Real, R: Read>(r: R) -> Result<Unitary<T>> {
    Unitary::new(read_matrix(r)?)
}

/// Formatting of a report entry. Floats use the shortest round-trip form,
/// switching to exponent notation outside `[1e-4, 1e15)`.
pub trait ReportValue {
    fn render(&self) -> String;
}

impl ReportValue for f64 {
    fn render(&self) -> String {
        num(*self)
    }
}

impl ReportValue for f32 {
    fn render(&self) -> String {
        num(*self)
    }
}

macro_rules! plain_report_value {
    ($($t:ty),*) => {$(
        impl ReportValue for $t {
            fn render(&self) -> String {
                self.to_string()
            }
        }
    )*};
}

plain_report_value!(usize, u64, u32, i64, i32, bool, String, &str);

impl<V: ReportValue + ?Sized> ReportValue for &V {
    fn render(&self) -> String {
        (**self).render()
    }
}

/// Ordered key-value report, written as aligned text or a one-row CSV.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub title: String,
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            entries: Vec::new(),
        }
    }

    pub fn add(&mut self, key: impl Into<String>, value: impl ReportValue) -> &mut Self {
        self.entries.push((key.into(), value.render()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", self.title)?;
        let width = self.entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.entries {
            writeln!(w, "  {k:<width$} = {v}")?;
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = writer(w);
        wtr.write_record(self.entries.iter().map(|(k, _)| k))?;
        wtr.write_record(self.entries.iter().map(|(_, v)| v))?;
        wtr.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interference::{mzi_unitary, MziParams};

    #[test]
    fn scan_round_trip_is_byte_exact() {
        let scan = FringeScan::with_accidentals(
            vec![0.0, 0.1, 0.25],
            ControlUnit::Watts,
            vec![vec![0.5, 0.91, 0.1], vec![0.5, 0.09, 0.9]],
            vec![vec![0.0, 0.01, 0.0], vec![0.02, 0.0, 0.0]],
            "s",
        )
        .unwrap();
        let mut buf = Vec::new();
        write_fringe_scan(&mut buf, &scan).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("control,unit,out1,out2,acc1,acc2\n0,W,0.5,0.5,0,0.02\n"));
        assert!(!text.contains('\r'));
        let back: FringeScan<f64> = read_fringe_scan(buf.as_slice(), "s").unwrap();
        assert_eq!(back, scan);
        let mut again = Vec::new();
        write_fringe_scan(&mut again, &back).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn single_output_scan() {
        let csv = "control,unit,out1,out2\n0,V,10,\n1,V,12,\n";
        let scan: FringeScan<f64> = read_fringe_scan(csv.as_bytes(), "").unwrap();
        assert_eq!(scan.outputs.len(), 1);
        assert_eq!(scan.unit, ControlUnit::Volts);
    }

    #[test]
    fn format_errors_name_field_and_line() {
        let csv = "control,unit,out1,out2\n0,W,1,2\n0.1,W,x,2\n";
        match read_fringe_scan::<f64, _>(csv.as_bytes(), "") {
            Err(Error::Format { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("out1"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            read_fringe_scan::<f64, _>("control,out1\n0,1\n".as_bytes(), ""),
            Err(Error::Format { .. })
        ));
        assert!(read_fringe_scan::<f64, _>("control,unit,out1\n0,K,1\n".as_bytes(), "").is_err());
    }

    #[test]
    fn tomography_bundle_round_trip() {
        let d = TomographyDataset::new(
            vec![vec![0.3, 0.7], vec![0.7, 0.3]],
            Some(vec![vec![0.01, 0.01], vec![0.02, 0.02]]),
            vec![HomVisibility { inputs: (0, 1), outputs: (0, 1), value: 0.84, sigma: 0.01 }],
            0.967,
        )
        .unwrap();
        let (mut s, mut v) = (Vec::new(), Vec::new());
        write_singles(&mut s, &d).unwrap();
        write_visibilities(&mut v, &d.visibilities).unwrap();
        let back = read_tomography_bundle(s.as_slice(), v.as_slice(), 0.967).unwrap();
        assert_eq!(back, d);
        let missing = "input,output,probability\n0,0,0.5\n0,1,0.5\n1,0,0.5\n";
        assert!(matches!(read_singles::<f64, _>(missing.as_bytes()), Err(Error::IncompleteDataset(_))));
    }

    #[test]
    fn unitary_round_trip() {
        let u = mzi_unitary(&MziParams { eta1: 0.47, eta2: 0.52, phi: 2.08 }).unwrap();
        let mut buf = Vec::new();
        write_matrix(&mut buf, u.matrix()).unwrap();
        let back: Unitary<f64> = read_unitary(buf.as_slice()).unwrap();
        assert_eq!(back.matrix(), u.matrix());
    }

    #[test]
    fn report_layouts() {
        let mut r = Report::new("fit");
        r.add("alpha", 13.43).add("phi0", 0.837).add("tiny", -2.5e-33);
        let mut text = Vec::new();
        r.write_text(&mut text).unwrap();
        assert_eq!(String::from_utf8(text).unwrap(), "fit\n  alpha = 13.43\n  phi0  = 0.837\n  tiny  = -2.5e-33\n");
        let mut csv = Vec::new();
        r.write_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "alpha,phi0,tiny\n13.43,0.837,-2.5e-33\n");
        assert_eq!(r.get("phi0"), Some("0.837"));
    }

    #[test]
    fn columns_round_trip() {
        let mut buf = Vec::new();
        write_columns(&mut buf, &["t", "phi"], &[&[0.0, 1.5], &[0.1, -0.2]]).unwrap();
        let cols: Vec<Vec<f64>> = read_columns(buf.as_slice(), &["phi", "t"]).unwrap();
        assert_eq!(cols, vec![vec![0.1, -0.2], vec![0.0, 1.5]]);
    }
}
