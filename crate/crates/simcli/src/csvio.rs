//! CSV output: trajectories and sweep summaries.
//!
//! Comma separated, `\n` terminated, mandatory header. Reals are written with
//! 17 significant digits (`{:.16e}`), which round-trips every `f64`.

use std::io::{Read, Write};

use ambient_attitude::{Mat3d, Sample, TrialSummary, Vec3d};
use thiserror::Error;

pub const TRAJECTORY_HEADER: [&str; 19] = [
    "t", "r00", "r01", "r02", "r10", "r11", "r12", "r20", "r21", "r22", "wx", "wy", "wz", "u_norm", "err_r",
    "err_omega", "v_tilde", "w", "w_dot_bound",
];

pub const SWEEP_HEADER: [&str; 5] = ["seed", "initial_residual", "classification", "final_err_r", "final_err_omega"];

#[derive(Debug, Error)]
pub enum CsvError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("unexpected header: {0}")]
    Header(String),
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
}

pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_reader(r)
}

pub fn write_trajectory<W: Write>(out: W, samples: &[Sample<f64>]) -> Result<(), CsvError> {
    let mut w = writer(out);
    w.write_record(TRAJECTORY_HEADER)?;
    for s in samples {
        let mut row = Vec::with_capacity(TRAJECTORY_HEADER.len());
        row.push(fmt_real(s.t));
        row.extend(s.r.to_row_major().into_iter().map(fmt_real));
        row.extend(s.omega.to_array().into_iter().map(fmt_real));
        row.extend([s.u_norm, s.err_r, s.err_omega, s.v_tilde, s.w, s.w_dot_bound].map(fmt_real));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trajectory<R: Read>(input: R) -> Result<Vec<Sample<f64>>, CsvError> {
    let mut r = reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(TRAJECTORY_HEADER) {
        return Err(CsvError::Header(header.iter().collect::<Vec<_>>().join(",")));
    }
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let v = rec
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CsvError::Row { row: i + 1, message: e.to_string() })?;
        if v.len() != TRAJECTORY_HEADER.len() {
            return Err(CsvError::Row {
                row: i + 1,
                message: format!("expected {} fields, found {}", TRAJECTORY_HEADER.len(), v.len()),
            });
        }
        let mut r9 = [0.0; 9];
        r9.copy_from_slice(&v[1..10]);
        out.push(Sample {
            t: v[0],
            r: Mat3d::from_row_major(r9),
            omega: Vec3d::new(v[10], v[11], v[12]),
            u_norm: v[13],
            err_r: v[14],
            err_omega: v[15],
            v_tilde: v[16],
            w: v[17],
            w_dot_bound: v[18],
        });
    }
    Ok(out)
}

pub fn write_sweep<W: Write>(out: W, trials: &[TrialSummary<f64>]) -> Result<(), CsvError> {
    let mut w = writer(out);
    w.write_record(SWEEP_HEADER)?;
    for t in trials {
        w.write_record([
            t.seed.to_string(),
            fmt_real(t.initial_residual),
            t.outcome.as_str().to_string(),
            fmt_real(t.final_err_r),
            fmt_real(t.final_err_omega),
        ])?;
    }
    w.flush()?;
    Ok(())
}
