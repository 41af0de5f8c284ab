use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use kdl_core::bounds::{
    bridge_distance, distortion_lower_bound, make_report, pardon_bound, ALTERNATING_REPRESENTATIVITY,
};
use kdl_core::distortion::{distortion_certified_with, distortion_sampled};
use kdl_core::plat::{build_plat, make_alternating_jm_spec, min_rows};
use kdl_core::CertifyOptions;
use serde::Serialize;

use crate::Status;

/// Rows above this `b` are certified only on request.
const CERTIFY_UP_TO: usize = 4;
const SWEEP_SAMPLES: usize = 1024;

pub const COLUMNS: [&str; 13] = [
    "b",
    "n",
    "t",
    "d",
    "lower_bound",
    "pardon_bound",
    "sampled_delta",
    "certified_lo",
    "certified_hi",
    "upper_bound",
    "alpha",
    "L",
    "runtime_ms",
];

#[derive(Debug, Serialize)]
pub struct SweepRow {
    pub b: usize,
    pub n: usize,
    pub t: i32,
    pub d: usize,
    pub lower_bound: f64,
    pub pardon_bound: f64,
    pub sampled_delta: f64,
    pub certified_lo: Option<f64>,
    pub certified_hi: Option<f64>,
    pub upper_bound: f64,
    pub alpha: f64,
    #[serde(rename = "L")]
    pub length: f64,
    pub runtime_ms: u128,
}

impl SweepRow {
    /// Violated sandwich inequalities, if any.
    fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.sampled_delta > self.upper_bound {
            out.push(format!(
                "sampled {} > upper bound {}",
                self.sampled_delta, self.upper_bound
            ));
        }
        if let (Some(lo), Some(hi)) = (self.certified_lo, self.certified_hi) {
            if self.lower_bound > hi {
                out.push(format!("lower bound {} > certified hi {hi}", self.lower_bound));
            }
            if lo > hi {
                out.push(format!("certified lo {lo} > hi {hi}"));
            }
            if self.sampled_delta > hi + 1e-12 * hi {
                out.push(format!("sampled {} > certified hi {hi}", self.sampled_delta));
            }
        }
        out
    }
}

pub struct SweepArgs {
    pub b_min: usize,
    pub b_max: usize,
    pub t: i32,
    pub eps: f64,
    pub samples: usize,
    pub certify_all: bool,
}

fn row(args: &SweepArgs, b: usize) -> Result<SweepRow> {
    let start = Instant::now();
    let n = min_rows(b) + 1;
    let spec = make_alternating_jm_spec(b, n, args.t)?;
    let curve = build_plat(&spec, args.samples)?;
    let report = make_report(&spec, Some(&curve), ALTERNATING_REPRESENTATIVITY)?;
    let sampled = distortion_sampled(&curve, SWEEP_SAMPLES)?;
    let (lo, hi) = if b <= CERTIFY_UP_TO || args.certify_all {
        let opts = CertifyOptions::new(args.eps).budget(crate::commands::budget(None)?);
        let cert = distortion_certified_with(&curve, &opts)?;
        (Some(cert.lo), Some(cert.hi))
    } else {
        (None, None)
    };
    let d = bridge_distance(b, n)?;
    Ok(SweepRow {
        b,
        n,
        t: args.t,
        d,
        lower_bound: distortion_lower_bound(b, d),
        pardon_bound: pardon_bound(ALTERNATING_REPRESENTATIVITY),
        sampled_delta: sampled.ratio,
        certified_lo: lo,
        certified_hi: hi,
        upper_bound: report.upper_bound.expect("report built with a curve"),
        alpha: report.alpha.expect("report built with a curve"),
        length: curve.total_len(),
        runtime_ms: start.elapsed().as_millis(),
    })
}

pub fn run(args: SweepArgs, csv_path: &Path) -> Result<Status> {
    if args.b_min < 3 || args.b_min > args.b_max {
        bail!(
            "need 3 ≤ b-min ≤ b-max, got b-min = {}, b-max = {}",
            args.b_min,
            args.b_max
        );
    }
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(csv_path)
        .with_context(|| format!("writing {}", csv_path.display()))?;
    writer.write_record(COLUMNS)?;
    let mut status = Status::Ok;
    for b in args.b_min..=args.b_max {
        let r = row(&args, b)?;
        writer.serialize(&r)?;
        writer.flush()?;
        let problems = r.violations();
        println!(
            "b={} n={} d={} sampled={:.4} certified={} upper={:.1} ({} ms){}",
            r.b,
            r.n,
            r.d,
            r.sampled_delta,
            match (r.certified_lo, r.certified_hi) {
                (Some(lo), Some(hi)) => format!("[{lo:.4}, {hi:.4}]"),
                _ => "-".into(),
            },
            r.upper_bound,
            r.runtime_ms,
            if problems.is_empty() {
                String::new()
            } else {
                format!(" VIOLATION: {}", problems.join("; "))
            }
        );
        if !problems.is_empty() {
            status = Status::Invariant;
        }
    }
    Ok(status)
}
