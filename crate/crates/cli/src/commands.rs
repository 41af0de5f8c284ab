use std::path::Path;

use anyhow::{bail, Context, Result};
use kdl_core::bounds::make_report;
use kdl_core::claims::{self, ClaimCheck, HelixGenerator};
use kdl_core::distortion::{distortion_certified_with, distortion_sampled_with, DEFAULT_BUDGET};
use kdl_core::plat::build_plat;
use kdl_core::refine::refine as anneal;
use kdl_core::{io, ArcKind, CertifyOptions, Error, Exec, PolyCurve, RefineConfig};
use serde_json::json;

use crate::{Mode, PlatArgs, Status};

pub fn read_curve(path: &Path) -> Result<PolyCurve> {
    io::read_curve(path).with_context(|| format!("reading curve {}", path.display()))
}

/// Cell cap: the flag if given, else `KDL_BUDGET`, else the library default.
pub fn budget(flag: Option<u64>) -> Result<u64> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("KDL_BUDGET") {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("KDL_BUDGET must be a positive integer, got {v:?}")),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

pub fn build(plat: PlatArgs, samples: usize, out: &Path, obj: Option<&Path>) -> Result<Status> {
    let spec = plat.spec()?;
    let curve = build_plat(&spec, samples)?;
    io::write_curve(out, &curve)?;
    if let Some(obj) = obj {
        std::fs::write(obj, io::curve_to_obj(&curve)).with_context(|| format!("writing {}", obj.display()))?;
    }
    let arcs = curve.arcs().unwrap_or_default();
    let count = |k| arcs.iter().filter(|a| a.kind == k).count();
    println!(
        "wrote {}: {} vertices, arcs: {} bridge, {} vertical, {} twist; length {:.6}, clearance {:.6}",
        out.display(),
        curve.num_vertices(),
        count(ArcKind::Bridge),
        count(ArcKind::Vertical),
        count(ArcKind::Twist),
        curve.total_len(),
        curve.min_clearance()
    );
    Ok(Status::Ok)
}

pub fn distortion(
    path: &Path,
    mode: Mode,
    eps: f64,
    samples: usize,
    budget_flag: Option<u64>,
    sequential: bool,
) -> Result<Status> {
    let curve = read_curve(path)?;
    let exec = if sequential { Exec::Sequential } else { Exec::default() };
    match mode {
        Mode::Sampled => {
            let w = distortion_sampled_with(&curve, samples, exec)?;
            let out = json!({"mode": "sampled", "samples": samples, "ratio": w.ratio, "s": w.s, "t": w.t});
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(Status::Ok)
        }
        Mode::Certified => {
            let opts = CertifyOptions::new(eps).budget(budget(budget_flag)?).exec(exec);
            match distortion_certified_with(&curve, &opts) {
                Ok(cert) => {
                    println!("{}", serde_json::to_string_pretty(&cert)?);
                    Ok(Status::Ok)
                }
                Err(Error::BudgetExceeded(cert)) => {
                    println!("{}", serde_json::to_string_pretty(&cert)?);
                    eprintln!(
                        "error: budget of {} cells exhausted before reaching eps = {eps}; interval above is partial",
                        cert.cells_expanded
                    );
                    Ok(Status::Budget)
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

pub fn bounds(plat: PlatArgs, curve: Option<&Path>, representativity: u32) -> Result<Status> {
    let spec = plat.spec()?;
    let curve = curve.map(read_curve).transpose()?;
    if let Some(c) = &curve {
        let twists = c
            .arcs()
            .unwrap_or_default()
            .iter()
            .filter(|a| a.kind == ArcKind::Twist)
            .count();
        if twists != 2 * spec.region_count() {
            bail!(
                "curve has {twists} twist arcs but the plat (b = {}, n = {}) has {}",
                plat.b,
                plat.n,
                2 * spec.region_count()
            );
        }
    }
    let report = make_report(&spec, curve.as_ref(), representativity)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(Status::Ok)
}

fn print_check(check: &ClaimCheck, label: &str) {
    let verdict = if check.pass { "PASS" } else { "FAIL" };
    println!(
        "{verdict} {} t={}: max ratio {:.4} {} {:.4} ({label})",
        check.claim,
        check.half_twists,
        check.max_ratio,
        if check.pass { "≤" } else { ">" },
        check.bound,
    );
    if !check.pass {
        let [p, q] = check.witness;
        println!(
            "  witness pair ({}, {}, {}) and ({}, {}, {})",
            p.x, p.y, p.z, q.x, q.y, q.z
        );
    }
}

pub fn verify(t: u32, samples: usize, inject_fault: bool) -> Result<Status> {
    let generator: HelixGenerator = if inject_fault {
        claims::squashed_helix
    } else {
        claims::helix
    };
    let one = claims::check_helix_claim(t, samples, generator)?;
    let two = claims::check_adjacent_claim(t, samples, generator)?;
    print_check(&one, "2πt");
    print_check(&two, "4πt");
    Ok(if one.pass && two.pass {
        Status::Ok
    } else {
        Status::Invariant
    })
}

pub fn refine(path: &Path, out: &Path, cfg: &RefineConfig, log: Option<&Path>) -> Result<Status> {
    let curve = read_curve(path)?;
    let result = anneal(&curve, cfg)?;
    io::write_curve(out, &result.curve)?;
    if let Some(log) = log {
        let mut w = csv::Writer::from_path(log).with_context(|| format!("writing {}", log.display()))?;
        for entry in &result.log {
            w.serialize(entry)?;
        }
        w.flush()?;
    }
    println!(
        "sampled distortion {:.6} -> {:.6} after {} iterations ({} accepted), min clearance {:.6}",
        result.initial_ratio, result.best_ratio, cfg.iterations, result.accepted, result.min_clearance_seen
    );
    Ok(Status::Ok)
}
