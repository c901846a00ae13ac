//! Result documents and their JSON / CSV encodings.
//!
//! Complex numbers are `[re, im]` pairs; reals are plain numbers. CSV uses a
//! single header row, `.` as decimal point and `,` as separator.

use std::fs;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::args::{Common, Format};
use crate::commands::Failure;

pub type Cx = [f64; 2];

pub fn cx(z: Complex64) -> Cx {
    [z.re, z.im]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeunRecord {
    pub a: Cx,
    pub alpha: Cx,
    pub beta: Cx,
    pub gamma: Cx,
    pub delta: Cx,
    pub epsilon: Cx,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub q: Cx,
    pub e: Vec<Cx>,
    pub system_residual: f64,
    pub recurrence_residual: f64,
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReduceDoc {
    pub params: HeunRecord,
    /// `N` of the equation that was reduced (after the power transform for
    /// positive `ε`).
    pub order: usize,
    pub positive_epsilon: Option<usize>,
    pub seed: u64,
    pub expected: usize,
    pub found: usize,
    pub complete: bool,
    pub spurious: usize,
    pub solutions: Vec<SolutionRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QpolyDoc {
    pub params: HeunRecord,
    pub order: usize,
    pub seed: u64,
    pub complete: bool,
    /// Monic, ascending powers of `q`; absent on shortfall.
    pub coefficients: Option<Vec<Cx>>,
    /// Closed-form polynomial for `N <= 2`, made monic.
    pub closed_form: Option<Vec<Cx>>,
    /// `max |c_k - closed_k|` relative to the largest closed-form coefficient.
    pub max_deviation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalRow {
    pub z: Cx,
    pub u: Option<Cx>,
    pub du: Option<Cx>,
    /// Scaled ODE residual.
    pub residual: Option<f64>,
    pub in_disk: bool,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalDoc {
    pub params: HeunRecord,
    pub order: usize,
    pub seed: u64,
    pub index: usize,
    /// `"z=0"` or `"z=1"`.
    pub family: String,
    pub q: Cx,
    pub numerator: Vec<Cx>,
    pub denominator: Vec<Cx>,
    pub rows: Vec<EvalRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShootRow {
    pub series: Option<f64>,
    pub shooting: Option<f64>,
    pub relative_difference: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDoc {
    pub v0: f64,
    pub v1: f64,
    pub sigma: f64,
    pub mass_scale: f64,
    pub threshold: f64,
    pub emin: f64,
    pub emax: f64,
    pub grid: usize,
    pub energies: Vec<f64>,
    pub bound_state_count: usize,
    pub count_method_agreement: bool,
    pub shooting: Option<Vec<ShootRow>>,
    pub shooting_agreement: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Doc {
    Reduce(ReduceDoc),
    Qpoly(QpolyDoc),
    Eval(EvalDoc),
    Spectrum(SpectrumDoc),
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn pair(z: Option<Cx>) -> [String; 2] {
    match z {
        Some([re, im]) => [num(re), num(im)],
        None => Default::default(),
    }
}

impl Doc {
    /// Header followed by data rows.
    pub fn table(&self) -> Vec<Vec<String>> {
        let s = |x: &str| x.to_string();
        match self {
            Doc::Reduce(d) => {
                let mut header = vec![s("index"), s("q_re"), s("q_im")];
                for k in 1..=d.order {
                    header.push(format!("e{k}_re"));
                    header.push(format!("e{k}_im"));
                }
                header.extend(["system_residual", "recurrence_residual", "degenerate"].map(s));
                let rows = d.solutions.iter().enumerate().map(|(i, r)| {
                    let mut row = vec![i.to_string(), num(r.q[0]), num(r.q[1])];
                    row.extend(r.e.iter().flat_map(|e| [num(e[0]), num(e[1])]));
                    row.extend([num(r.system_residual), num(r.recurrence_residual), r.degenerate.to_string()]);
                    row
                });
                std::iter::once(header).chain(rows).collect()
            }
            Doc::Qpoly(d) => {
                let header = ["power", "re", "im", "closed_re", "closed_im"].map(s).to_vec();
                let len = d.coefficients.as_ref().or(d.closed_form.as_ref()).map_or(0, Vec::len);
                let rows = (0..len).map(|k| {
                    let [re, im] = pair(d.coefficients.as_ref().map(|c| c[k]));
                    let [cre, cim] = pair(d.closed_form.as_ref().and_then(|c| c.get(k).copied()));
                    vec![k.to_string(), re, im, cre, cim]
                });
                std::iter::once(header).chain(rows).collect()
            }
            Doc::Eval(d) => {
                let header =
                    ["z_re", "z_im", "u_re", "u_im", "du_re", "du_im", "residual", "in_disk", "note"].map(s).to_vec();
                let rows = d.rows.iter().map(|r| {
                    let mut row = vec![num(r.z[0]), num(r.z[1])];
                    row.extend(pair(r.u));
                    row.extend(pair(r.du));
                    row.extend([opt(r.residual), r.in_disk.to_string(), r.note.clone().unwrap_or_default()]);
                    row
                });
                std::iter::once(header).chain(rows).collect()
            }
            Doc::Spectrum(d) => {
                let header = [
                    "index",
                    "energy",
                    "shooting_energy",
                    "relative_difference",
                    "bound_state_count",
                    "count_method_agreement",
                ]
                .map(s)
                .to_vec();
                let n = d.shooting.as_ref().map_or(d.energies.len(), Vec::len);
                let rows = (0..n).map(|i| {
                    let sh = d.shooting.as_ref().map(|t| &t[i]);
                    let energy = sh.map_or(d.energies.get(i).copied(), |r| r.series);
                    vec![
                        i.to_string(),
                        opt(energy),
                        opt(sh.and_then(|r| r.shooting)),
                        opt(sh.and_then(|r| r.relative_difference)),
                        d.bound_state_count.to_string(),
                        d.count_method_agreement.to_string(),
                    ]
                });
                std::iter::once(header).chain(rows).collect()
            }
        }
    }
}

pub fn render(doc: &Doc, format: Format) -> Result<Vec<u8>, Failure> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(doc).map_err(Failure::io)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in doc.table() {
                w.write_record(&row).map_err(Failure::io)?;
            }
            w.into_inner().map_err(|e| Failure::io(e.into_error()))
        }
    }
}

pub fn write(doc: &Doc, common: &Common) -> Result<(), Failure> {
    let bytes = render(doc, common.format)?;
    match &common.output {
        Some(path) => fs::write(path, bytes).map_err(Failure::io),
        None => std::io::stdout().write_all(&bytes).map_err(Failure::io),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Doc {
        let h = HeunRecord {
            a: [3.0, 0.0],
            alpha: [0.1, -0.2],
            beta: [2.5, 0.0],
            gamma: [0.75, 0.0],
            delta: [3.85, -0.2],
            epsilon: [-1.0, 0.0],
        };
        Doc::Reduce(ReduceDoc {
            params: h,
            order: 1,
            positive_epsilon: None,
            seed: 7,
            expected: 2,
            found: 1,
            complete: false,
            spurious: 0,
            solutions: vec![SolutionRecord {
                q: [1.0 / 3.0, 1e-300],
                e: vec![[-0.1234567890123456, 5e-17]],
                system_residual: 1.2e-15,
                recurrence_residual: 0.0,
                degenerate: false,
            }],
        })
    }

    #[test]
    fn json_round_trips() {
        let doc = sample();
        let bytes = render(&doc, Format::Json).unwrap();
        let back: Doc = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(back, doc);
        assert_eq!(render(&back, Format::Json).unwrap(), bytes);
    }

    #[test]
    fn csv_has_one_header_and_plain_decimals() {
        let text = String::from_utf8(render(&sample(), Format::Csv).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], "index,q_re,q_im,e1_re,e1_im,system_residual,recurrence_residual,degenerate");
        assert!(lines[1].starts_with("0,0.3333333333333333,1e-300,-0.1234567890123456,5e-17,"));
    }
}
