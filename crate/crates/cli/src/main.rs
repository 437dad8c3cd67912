use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use dynline::heights::arch::escape_region_radius;
use dynline::heights::render::{fmt15, julia_render, RenderSpec};
use dynline::{
    bogomolov_scan, canonical_height, line_preperiodic, orbit_point, parse_element, parse_line,
    parse_maps, parse_polynomial, same_julia, symmetry_group, HeightError, PreperiodicityVerdict,
    SameJulia, SplitPolynomialMap,
};

#[derive(Parser)]
#[command(
    name = "dynline",
    version,
    about = "Exact heights, symmetries and preperiodicity for split polynomial maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical height of a rational point.
    Height {
        #[arg(long, allow_hyphen_values = true)]
        map: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 1)]
        conductor: u32,
    },
    /// Preperiodicity of a point.
    PointOrbit {
        #[arg(long, allow_hyphen_values = true)]
        map: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        conductor: u32,
    },
    /// Symmetry group of the Julia set.
    Symmetry {
        #[arg(long, allow_hyphen_values = true)]
        map: String,
        #[arg(long, default_value_t = 1)]
        conductor: u32,
    },
    /// Whether map2 = τ∘map1 with τ a symmetry of J(map1).
    SameJulia {
        #[arg(long, allow_hyphen_values = true)]
        map1: String,
        #[arg(long, allow_hyphen_values = true)]
        map2: String,
        #[arg(long, default_value_t = 1)]
        conductor: u32,
    },
    /// Preperiodicity of a line under a split map.
    LineDecide {
        /// Maps separated by `;`.
        #[arg(long, allow_hyphen_values = true)]
        maps: String,
        #[arg(long, allow_hyphen_values = true)]
        line: String,
        #[arg(long, default_value_t = 1)]
        conductor: u32,
        #[arg(long, default_value_t = 1000)]
        budget: u64,
    },
    /// Canonical heights of small rational points on a line.
    Scan {
        #[arg(long, allow_hyphen_values = true)]
        maps: String,
        #[arg(long, allow_hyphen_values = true)]
        line: String,
        /// Natural log of the largest parameter size, e.g. 2.302585092994046.
        #[arg(long)]
        height_bound: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// CSV destination; the summary goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Escape-time image of the filled Julia set.
    Julia {
        #[arg(long, allow_hyphen_values = true)]
        map: String,
        /// `xmin,xmax,ymin,ymax`.
        #[arg(long, allow_hyphen_values = true, default_value = "-2,2,-2,2")]
        window: String,
        #[arg(long, default_value_t = 512)]
        res: usize,
        #[arg(long, default_value_t = 256)]
        max_iter: u32,
        /// Binary graymap destination.
        #[arg(long)]
        out: PathBuf,
        /// Optional CSV of Green estimates.
        #[arg(long)]
        green_out: Option<PathBuf>,
        /// Defaults to the certified escape radius of the map.
        #[arg(long)]
        escape_radius: Option<f64>,
        #[arg(long, default_value_t = 1)]
        conductor: u32,
        /// Embedding index j in ζ_N ↦ exp(2πij/N).
        #[arg(long, default_value_t = 1)]
        embedding: u32,
    },
}

enum Outcome {
    Definite(Value),
    Unknown(Value),
}

#[derive(Debug)]
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

/// Rounds every float to 15 significant digits so output is stable.
fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64");
            if let Some(r) = fmt15(x)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
            {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn to_json<T: Serialize>(x: &T) -> Value {
    let mut v = serde_json::to_value(x).expect("serializable");
    round_floats(&mut v);
    v
}

fn verdict(v: PreperiodicityVerdict) -> Outcome {
    let unknown = v.is_unknown();
    let j = to_json(&v);
    if unknown {
        Outcome::Unknown(j)
    } else {
        Outcome::Definite(j)
    }
}

fn check_conductor(n: u32) -> Result<(), InputError> {
    if n == 0 {
        return Err(InputError("conductor must be at least 1".into()));
    }
    Ok(())
}

fn write_file(path: &PathBuf, bytes: &[u8]) -> Result<(), InputError> {
    fs::write(path, bytes).map_err(|e| InputError(format!("cannot write {}: {e}", path.display())))
}

fn parse_window(text: &str) -> Result<(f64, f64, f64, f64), InputError> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| InputError(format!("bad window `{text}`: {e}")))?;
    match parts[..] {
        [a, b, c, d] => Ok((a, b, c, d)),
        _ => Err(InputError(format!(
            "window needs 4 numbers, got {}",
            parts.len()
        ))),
    }
}

fn run(cmd: Command) -> Result<Outcome, InputError> {
    match cmd {
        Command::Height {
            map,
            point,
            tol,
            conductor,
        } => {
            check_conductor(conductor)?;
            let f = parse_polynomial(&map, conductor)?;
            let x = parse_element(&point, conductor)?;
            let x = x
                .as_rational()
                .cloned()
                .ok_or_else(|| InputError("height needs a rational point".into()))?;
            if !(tol > 0.0) {
                return Err(InputError("tol must be positive".into()));
            }
            match canonical_height(&f, &x, tol) {
                Ok(r) => Ok(Outcome::Definite(to_json(&r))),
                Err(HeightError::ToleranceUnreachable {
                    place,
                    achieved,
                    requested,
                }) => Ok(Outcome::Unknown(to_json(&json!({
                    "status": "unknown",
                    "reason": "tolerance unreachable",
                    "place": place,
                    "achieved": achieved,
                    "requested": requested,
                })))),
                Err(HeightError::BitBudget { bits, cap }) => Ok(Outcome::Unknown(json!({
                    "status": "unknown",
                    "reason": "bit budget exhausted",
                    "bits": bits,
                    "cap": cap,
                }))),
                Err(e) => Err(e.into()),
            }
        }
        Command::PointOrbit {
            map,
            point,
            budget,
            conductor,
        } => {
            check_conductor(conductor)?;
            let f = parse_polynomial(&map, conductor)?;
            let x = parse_element(&point, conductor)?;
            Ok(verdict(orbit_point(&f, &x, budget)?))
        }
        Command::Symmetry { map, conductor } => {
            check_conductor(conductor)?;
            let f = parse_polynomial(&map, conductor)?;
            Ok(Outcome::Definite(to_json(&symmetry_group(&f)?)))
        }
        Command::SameJulia {
            map1,
            map2,
            conductor,
        } => {
            check_conductor(conductor)?;
            let f = parse_polynomial(&map1, conductor)?;
            let g = parse_polynomial(&map2, conductor)?;
            let v = match same_julia(&f, &g)? {
                SameJulia::Yes(tau) => json!({
                    "same": true,
                    "tau": { "a": tau.a().to_string(), "b": tau.b().to_string() },
                }),
                SameJulia::No(reason) => json!({ "same": false, "reason": reason }),
            };
            Ok(Outcome::Definite(v))
        }
        Command::LineDecide {
            maps,
            line,
            conductor,
            budget,
        } => {
            check_conductor(conductor)?;
            let phi = SplitPolynomialMap::new(parse_maps(&maps, conductor)?)?;
            let l = parse_line(&line, Some(phi.dimension()), conductor)?;
            Ok(verdict(line_preperiodic(&phi, &l, budget)?))
        }
        Command::Scan {
            maps,
            line,
            height_bound,
            tol,
            out,
        } => {
            let phi = SplitPolynomialMap::new(parse_maps(&maps, 1)?)?;
            let l = parse_line(&line, Some(phi.dimension()), 1)?;
            if !(tol > 0.0) {
                return Err(InputError("tol must be positive".into()));
            }
            let report = bogomolov_scan(&phi, &l, height_bound, tol)?;
            if let Some(path) = &out {
                write_file(path, report.to_csv().as_bytes())?;
            }
            let errors = report
                .rows
                .iter()
                .filter(|r| r.flag.starts_with("error"))
                .count();
            let summary = to_json(&json!({
                "height_bound": report.height_bound,
                "max_size": report.max_size,
                "tol": report.tol,
                "points": report.rows.len(),
                "errors": errors,
                "zero_candidates": to_json(&report)["zero_candidates"],
                "epsilon_hat": report.epsilon_hat,
                "epsilon_at": report.epsilon_at.as_ref().map(ToString::to_string),
            }));
            Ok(if errors > 0 {
                Outcome::Unknown(summary)
            } else {
                Outcome::Definite(summary)
            })
        }
        Command::Julia {
            map,
            window,
            res,
            max_iter,
            out,
            green_out,
            escape_radius,
            conductor,
            embedding,
        } => {
            check_conductor(conductor)?;
            let f = parse_polynomial(&map, conductor)?;
            f.require_degree(2)?;
            let radius = match escape_radius {
                Some(r) => r,
                None => escape_region_radius(&f, embedding).max(2.0),
            };
            let spec = RenderSpec::new(parse_window(&window)?, res, max_iter, radius)?;
            let image = julia_render(&f, embedding, &spec)?;
            write_file(&out, &image.to_pgm())?;
            if let Some(path) = &green_out {
                write_file(path, image.green_csv().as_bytes())?;
            }
            let inside = image.counts.iter().filter(|&&c| c >= max_iter).count();
            Ok(Outcome::Definite(to_json(&json!({
                "width": image.width(),
                "height": image.height(),
                "max_iter": max_iter,
                "escape_radius": radius,
                "bounded_pixels": inside,
                "out": out.display().to_string(),
            }))))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(Outcome::Definite(v)) => {
            println!("{v}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::Unknown(v)) => {
            println!("{v}");
            ExitCode::from(2)
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_to_fifteen_digits() {
        let mut v = json!({ "x": 0.1 + 0.2, "nested": [std::f64::consts::PI], "n": 3 });
        round_floats(&mut v);
        assert_eq!(v["x"].to_string(), "0.3");
        assert_eq!(v["nested"][0].to_string(), "3.14159265358979");
        assert_eq!(v["n"].to_string(), "3");
    }

    #[test]
    fn window_parsing() {
        assert_eq!(
            parse_window("-2, 2,-1.5,1.5").ok(),
            Some((-2.0, 2.0, -1.5, 1.5))
        );
        assert!(parse_window("0,1,2").is_err());
        assert!(parse_window("a,b,c,d").is_err());
    }
}
