//! Batch front end: each command loads a system file, validates it, runs
//! one analysis, and renders a deterministic plain-text report.
//!
//! Exit codes: 0 success, 1 input/contract error, 2 numerical or
//! consistency failure. Reports start with the `ncergo-report/1` version
//! line. CSV output prints decimals with 17 significant digits; report
//! floats use shortest round-trip decimal form. Identical inputs produce
//! byte-identical output.

use std::fmt::Write as _;
use std::path::Path;

use crate::algebra::{Element, State};
use crate::averaging::FixedPointProjection;
use crate::error::Error;
use crate::optimization::{
    self, gauge, m_value_with, HermanReport, MaximizingFace, StateSetDescriptor,
};
use crate::sysfile::{ParsedSystem, SystemFile};
use crate::Result;

pub const REPORT_HEADER: &str = "ncergo-report/1";

/// Default averaging horizon.
pub const DEFAULT_KMAX: u64 = 1024;

/// What a command produced: the stdout text and the process exit code.
#[derive(Debug, Clone)]
pub struct CmdOutcome {
    pub exit_code: i32,
    pub report: String,
}

fn outcome_from_error(e: &Error) -> CmdOutcome {
    CmdOutcome {
        exit_code: e.exit_code(),
        report: format!("{REPORT_HEADER}\nerror: {e}\n"),
    }
}

/// 17 significant digits, for CSV cells.
fn sig17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Shortest round-trip decimal, for report lines.
fn fmt(v: f64) -> String {
    format!("{v}")
}

fn fmt_complex(z: num_complex::Complex<f64>) -> String {
    if z.im >= 0.0 {
        format!("{}+{}i", fmt(z.re), fmt(z.im))
    } else {
        format!("{}-{}i", fmt(z.re), fmt(-z.im))
    }
}

fn write_element(out: &mut String, indent: &str, e: &Element<f64>) {
    for (b, block) in e.blocks().iter().enumerate() {
        let rows: Vec<String> = (0..block.rows())
            .map(|r| {
                let cells: Vec<String> = (0..block.cols())
                    .map(|c| fmt_complex(block[(r, c)]))
                    .collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        let _ = writeln!(out, "{indent}block {b}: [{}]", rows.join(", "));
    }
}

fn write_state(out: &mut String, indent: &str, s: &State<f64>) {
    write_element(out, indent, &s.density_element());
}

fn load_validated(path: &Path) -> Result<ParsedSystem> {
    let file = SystemFile::load(path)?;
    let system = file.parse()?;
    system.action.require_valid()?;
    Ok(system)
}

/// `validate`: exit 0 and VALID, or exit 1 with one line per violation.
pub fn cmd_validate(path: &Path) -> CmdOutcome {
    let inner = || -> Result<CmdOutcome> {
        let file = SystemFile::load(path)?;
        let system = file.parse()?;
        let report = system.action.validate()?;
        let mut out = format!("{REPORT_HEADER}\n");
        if report.is_valid() {
            out.push_str("VALID\n");
            Ok(CmdOutcome {
                exit_code: 0,
                report: out,
            })
        } else {
            for v in &report.violations {
                let _ = writeln!(out, "violation: {v}");
            }
            Ok(CmdOutcome {
                exit_code: 1,
                report: out,
            })
        }
    };
    inner().unwrap_or_else(|e| outcome_from_error(&e))
}

/// `gauge`: writes the per-window CSV and prints the limit comparison.
pub fn cmd_gauge(path: &Path, observable: &str, k_max: u64, out_csv: &Path) -> CmdOutcome {
    let inner = || -> Result<CmdOutcome> {
        let system = load_validated(path)?;
        let a = system
            .observables
            .get(observable)
            .ok_or_else(|| Error::UnknownName(observable.into()))?;
        let projection = FixedPointProjection::compute(&system.action)?;
        let report = gauge(&system.action, &projection, a, k_max)?;

        let schedule = system.action.schedule();
        let gen_count = system.action.presentation().generator_count();
        let mut csv = String::from("k,gamma_k,defect_k,diag_k\n");
        for (i, &g) in report.gammas.iter().enumerate() {
            let k = (i + 1) as u64;
            let mut max_defect = 0f64;
            for gidx in 0..gen_count {
                let mut word = vec![0i64; gen_count];
                word[gidx] = 1;
                let d = schedule.defect(k, &word)?;
                max_defect = max_defect.max(*d.numer() as f64 / *d.denom() as f64);
            }
            let _ = writeln!(
                csv,
                "{k},{},{},{}",
                sig17(g),
                sig17(max_defect),
                sig17(report.diagnostics[i])
            );
        }
        std::fs::write(out_csv, csv)?;

        let gap = (report.gamma_estimate - report.m_value).abs();
        let out = format!(
            "{REPORT_HEADER}\nGamma = {}, m = {}, |Gamma - m| = {}\n",
            fmt(report.gamma_estimate),
            fmt(report.m_value),
            fmt(gap)
        );
        Ok(CmdOutcome {
            exit_code: 0,
            report: out,
        })
    };
    inner().unwrap_or_else(|e| outcome_from_error(&e))
}

/// State-set choice for `maximize`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetChoice {
    /// All invariant states.
    Sg,
    /// Invariant tracial states.
    Tg,
    /// Invariant states vanishing on the file's ideal.
    Ann,
}

impl SetChoice {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "SG" | "sg" => Ok(SetChoice::Sg),
            "TG" | "tg" => Ok(SetChoice::Tg),
            "ann" | "ANN" => Ok(SetChoice::Ann),
            other => Err(Error::InvalidWord(format!(
                "unknown state set {other:?} (expected SG, TG, or ann)"
            ))),
        }
    }
}

/// `maximize`: prints the optimization value, certificate state, and face.
pub fn cmd_maximize(path: &Path, observable: &str, set: SetChoice) -> CmdOutcome {
    let inner = || -> Result<CmdOutcome> {
        let system = load_validated(path)?;
        let a = system
            .observables
            .get(observable)
            .ok_or_else(|| Error::UnknownName(observable.into()))?;
        let descriptor = match set {
            SetChoice::Sg => StateSetDescriptor::InvariantStates,
            SetChoice::Tg => StateSetDescriptor::InvariantTracialStates,
            SetChoice::Ann => {
                let ideal = system
                    .ideal
                    .clone()
                    .ok_or_else(|| Error::InvalidIdeal("file has no \"ideal\" key".into()))?;
                StateSetDescriptor::Annihilator { ideal }
            }
        };
        let projection = FixedPointProjection::compute(&system.action)?;
        let report = m_value_with(&system.action, &projection, a, &descriptor)?;

        let mut out = format!("{REPORT_HEADER}\n");
        let _ = writeln!(out, "m = {}", fmt(report.value));
        let _ = writeln!(out, "certificate_value = {}", fmt(report.certificate_value));
        match &report.face {
            MaximizingFace::Spectral {
                top_eigenvalue,
                multiplicity,
                eigenprojector,
            } => {
                let _ = writeln!(
                    out,
                    "face: spectral, top_eigenvalue = {}, multiplicity = {multiplicity}",
                    fmt(*top_eigenvalue)
                );
                out.push_str("eigenprojector:\n");
                write_element(&mut out, "  ", eigenprojector);
            }
            MaximizingFace::OrbitVertices {
                orbits,
                orbit_values,
                argmax_orbits,
            } => {
                let _ = writeln!(out, "face: orbit vertices");
                for (i, (orbit, v)) in orbits.iter().zip(orbit_values).enumerate() {
                    let tag = if argmax_orbits.contains(&i) {
                        " (max)"
                    } else {
                        ""
                    };
                    let _ = writeln!(out, "  orbit {orbit:?}: value = {}{tag}", fmt(*v));
                }
            }
            MaximizingFace::HullVertices {
                vertex_values,
                argmax_indices,
            } => {
                let _ = writeln!(out, "face: hull vertices");
                for (i, v) in vertex_values.iter().enumerate() {
                    let tag = if argmax_indices.contains(&i) {
                        " (max)"
                    } else {
                        ""
                    };
                    let _ = writeln!(out, "  vertex {i}: value = {}{tag}", fmt(*v));
                }
            }
        }
        out.push_str("certificate:\n");
        write_state(&mut out, "  ", &report.certificate);
        Ok(CmdOutcome {
            exit_code: 0,
            report: out,
        })
    };
    inner().unwrap_or_else(|e| outcome_from_error(&e))
}

/// `analyze`: fixed-algebra structure and unique/strict ergodicity.
pub fn cmd_analyze(path: &Path) -> CmdOutcome {
    let inner = || -> Result<CmdOutcome> {
        let system = load_validated(path)?;
        let algebra = optimization::fixed_algebra_analysis(&system.action)?;
        let ergodicity = optimization::unique_ergodicity(&system.action)?;

        let mut out = format!("{REPORT_HEADER}\n");
        let _ = writeln!(out, "dim_fixed: {}", algebra.dimension);
        let _ = writeln!(out, "abelian: {}", algebra.abelian);
        let _ = writeln!(out, "unique: {}", ergodicity.unique);
        let _ = writeln!(out, "strict: {}", ergodicity.strict);
        if let Some(phi) = &ergodicity.invariant_state {
            out.push_str("invariant_state:\n");
            write_state(&mut out, "  ", phi);
            for (k, dev, bound) in &ergodicity.convergence_samples {
                let _ = writeln!(
                    out,
                    "convergence k={k}: max_deviation = {}, bound = {}",
                    fmt(*dev),
                    fmt(*bound)
                );
            }
        }
        if algebra.abelian {
            out.push_str("minimal_projections:\n");
            for (i, p) in algebra.minimal_projections.iter().enumerate() {
                let _ = writeln!(out, "  projection {i}:");
                write_element(&mut out, "    ", p);
            }
        }
        Ok(CmdOutcome {
            exit_code: 0,
            report: out,
        })
    };
    inner().unwrap_or_else(|e| outcome_from_error(&e))
}

/// Which states the `herman` command ranges over.
#[derive(Debug, Clone)]
pub enum HermanStates {
    /// The full state space.
    All,
    /// Named states from the file.
    Named(Vec<String>),
}

/// Verdict line and exit code for a seminorm-equivalence report. The
/// equivalence is a theorem, so an inconsistent report signals a numerical
/// bug and exits 2.
pub fn herman_verdict(report: &HermanReport<f64>) -> (&'static str, i32) {
    if report.consistent {
        ("CONSISTENT", 0)
    } else {
        ("INCONSISTENT", 2)
    }
}

/// `herman`: the value interval of the limit states versus seminorm decay.
pub fn cmd_herman(
    path: &Path,
    observable: &str,
    lambda: Option<f64>,
    states: &HermanStates,
    k_max: u64,
) -> CmdOutcome {
    let inner = || -> Result<CmdOutcome> {
        let system = load_validated(path)?;
        let x = system
            .observables
            .get(observable)
            .ok_or_else(|| Error::UnknownName(observable.into()))?;
        let descriptor = match states {
            HermanStates::All => StateSetDescriptor::InvariantStates,
            HermanStates::Named(names) => {
                let mut hull = Vec::with_capacity(names.len());
                for name in names {
                    hull.push(
                        system
                            .states
                            .get(name)
                            .ok_or_else(|| Error::UnknownName(name.clone()))?
                            .clone(),
                    );
                }
                StateSetDescriptor::FiniteHull(hull)
            }
        };
        let report = optimization::herman_check(&system.action, &descriptor, x, lambda, k_max)?;

        let mut out = format!("{REPORT_HEADER}\n");
        let _ = writeln!(out, "lambda = {}", fmt(report.lambda));
        let _ = writeln!(
            out,
            "interval = [{}, {}]",
            fmt(report.spectrum_interval.0),
            fmt(report.spectrum_interval.1)
        );
        let _ = writeln!(out, "spectrum_singleton: {}", report.spectrum_singleton);
        let tail: Vec<String> = report
            .window
            .iter()
            .map(|&k| {
                format!(
                    "s_{k} = {}",
                    fmt(report.seminorm_sequence[(k - 1) as usize])
                )
            })
            .collect();
        let _ = writeln!(out, "seminorm_tail: {}", tail.join(", "));
        let _ = writeln!(out, "seminorm_converges: {}", report.seminorm_converges);
        let (verdict, exit_code) = herman_verdict(&report);
        let _ = writeln!(out, "{verdict}");
        Ok(CmdOutcome {
            exit_code,
            report: out,
        })
    };
    inner().unwrap_or_else(|e| outcome_from_error(&e))
}
