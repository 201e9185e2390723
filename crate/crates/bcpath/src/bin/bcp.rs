//! Command-line front end: plan paths, classify endpoint conditions, compute
//! winding numbers, normalize sampled paths, run deformations and check
//! results against the lattice oracle. Every subcommand prints JSON; SVG
//! output is optional.
//!
//! Exit codes: 0 success, 1 usage or input errors, 2 domain errors
//! (infeasible constructions, unreachable classes).

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use bcpath::classifier::{classify_space, is_free_class};
use bcpath::cs::{CsPath, SampledPath};
use bcpath::dubins::{minimal_path, minimal_path_in_class, solve_all};
use bcpath::geometry::{scale_to_unit_curvature, DirectedPoint};
use bcpath::homotopy::{
    normalize_to_cs, skew_homotopy, type_i_operation, type_ii_operation, DeformationTrace,
    EngineConfig,
};
use bcpath::lattice::{shortest_path, shortest_path_in_class, LatticeConfig};
use bcpath::proximity::classify_with_resolution;
use bcpath::svg::{classification_scene, filmstrip, Scene};
use bcpath::winding::{class_index_k, relative_winding, winding_number, ClosurePath, TurningMap};
use bcpath::{Error, Orientation};

#[derive(Parser)]
#[command(name = "bcp", version, about = "Bounded-curvature path planning and classification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct EndpointArgs {
    /// Start pose as "x,y,theta" (theta in radians, or with a `deg` suffix).
    #[arg(long, value_parser = parse_pose)]
    x: DirectedPoint,
    /// Goal pose, same format.
    #[arg(long, value_parser = parse_pose)]
    y: DirectedPoint,
    /// Curvature bound; inputs are rescaled to the unit bound and lengths
    /// reported back in input units.
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal-length path between two poses.
    Plan {
        #[command(flatten)]
        endpoints: EndpointArgs,
        /// Also list all six candidate words.
        #[arg(long)]
        all: bool,
    },
    /// Minimal-length path with a prescribed winding number.
    PlanInClass {
        #[command(flatten)]
        endpoints: EndpointArgs,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value_t = 8)]
        loop_cap: u32,
    },
    /// Proximity condition of an endpoint pair.
    Classify {
        #[command(flatten)]
        endpoints: EndpointArgs,
        #[arg(long, default_value_t = 0.01)]
        omega_resolution: f64,
        /// Write an SVG of the configuration.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Homotopy classes per winding number.
    ClassifySpace {
        #[command(flatten)]
        endpoints: EndpointArgs,
        /// Winding range "lo..hi" (inclusive); defaults to k-2..k+2.
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        n_range: Option<(i64, i64)>,
        #[arg(long, default_value_t = 0.01)]
        omega_resolution: f64,
        /// Produce freeness witnesses longer than this bound.
        #[arg(long)]
        witness_length: Option<f64>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Winding number and turning map of a path read from JSON.
    Winding {
        /// Path file (cs path JSON).
        #[arg(long)]
        path: PathBuf,
    },
    /// Normalize a sampled path (JSON) to cs form.
    Normalize {
        /// Sampled path JSON; omit to use a seeded demo spline.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Write the deformation trace as JSON lines.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write an SVG filmstrip of the trace.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Apply a deformation move to a cs path.
    Deform {
        /// Path file (cs path JSON).
        #[arg(long)]
        path: PathBuf,
        #[command(subcommand)]
        mv: Move,
    },
    /// Discretized shortest-path check against the analytic planner.
    Oracle {
        #[command(flatten)]
        endpoints: EndpointArgs,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        /// Constrain the winding number.
        #[arg(long, allow_hyphen_values = true)]
        n: Option<i64>,
        /// Use the admissible straight-line heuristic.
        #[arg(long)]
        guided: bool,
    },
    /// Render a path file to SVG.
    Render {
        #[arg(long)]
        path: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also draw the adjacent circles of both endpoints.
        #[arg(long)]
        circles: bool,
    },
}

#[derive(Subcommand)]
enum Move {
    /// Insert a figure-8 at an interior arc-length position.
    Type1 {
        #[arg(long)]
        at: f64,
    },
    /// Push a segment with a disk.
    Type2 {
        #[arg(long)]
        segment: usize,
        #[arg(long)]
        depth: f64,
        #[arg(long, default_value = "L")]
        side: String,
        /// Write the deformed path here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Deform an RSL word into an LSR word.
    Skew {
        #[arg(long, default_value_t = 24)]
        steps: usize,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

fn parse_pose(s: &str) -> Result<DirectedPoint, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected \"x,y,theta\", got {s:?}"));
    }
    let x: f64 = parts[0].parse().map_err(|e| format!("x: {e}"))?;
    let y: f64 = parts[1].parse().map_err(|e| format!("y: {e}"))?;
    let theta = if let Some(deg) = parts[2].strip_suffix("deg") {
        deg.trim()
            .parse::<f64>()
            .map_err(|e| format!("theta: {e}"))?
            .to_radians()
    } else {
        parts[2].parse().map_err(|e| format!("theta: {e}"))?
    };
    Ok(DirectedPoint::from_xyh(x, y, theta))
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected \"lo..hi\", got {s:?}"))?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("lo: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("hi: {e}"))?;
    if lo > hi {
        return Err("empty range".into());
    }
    Ok((lo, hi))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_)
        | Error::InsufficientData(_)
        | Error::InvalidInput(_)
        | Error::Io(_)
        | Error::Json(_) => 1,
        _ => 2,
    }
}

fn main() {
    // Usage errors exit 1 (help and version still exit 0).
    let cli = Cli::try_parse().unwrap_or_else(|e| {
        let code = if e.use_stderr() { 1 } else { 0 };
        let _ = e.print();
        std::process::exit(code);
    });
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            let payload = json!({"error": e.to_string()});
            eprintln!("{payload}");
            std::process::exit(exit_code(&e));
        }
    }
}

fn read_cs_path(path: &PathBuf) -> Result<CsPath, Error> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Relative artifact paths land in `BCP_OUT_DIR` when it is set.
fn out_path(p: &std::path::Path) -> PathBuf {
    match std::env::var_os("BCP_OUT_DIR") {
        Some(dir) if p.is_relative() => {
            let dir = PathBuf::from(dir);
            let _ = std::fs::create_dir_all(&dir);
            dir.join(p)
        }
        _ => p.to_path_buf(),
    }
}

fn write_artifact(p: &std::path::Path, contents: &str) -> Result<(), Error> {
    std::fs::write(out_path(p), contents)?;
    Ok(())
}

fn write_trace_jsonl(path: &PathBuf, trace: &DeformationTrace) -> Result<(), Error> {
    use std::io::Write;
    let mut f = std::fs::File::create(out_path(path))?;
    for (frame, stats) in trace.frames.iter().zip(&trace.per_frame) {
        let line = json!({"stats": stats, "frame": frame});
        writeln!(f, "{line}")?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Plan { endpoints, all } => {
            let (x, y, scale) =
                scale_to_unit_curvature(&endpoints.x, &endpoints.y, endpoints.kappa)?;
            let m = minimal_path(&x, &y);
            let mut out = json!({
                "word": m.primary().word.label(),
                "length": m.length() / scale,
                "multiple_minimizers": m.multiple,
                "ties": m.minimizers.iter().map(|c| c.word.label()).collect::<Vec<_>>(),
                "path": m.path(),
                "kappa": endpoints.kappa,
            });
            if all {
                out["candidates"] = serde_json::to_value(solve_all(&x, &y))?;
            }
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Command::PlanInClass {
            endpoints,
            n,
            loop_cap,
        } => {
            let (x, y, scale) =
                scale_to_unit_curvature(&endpoints.x, &endpoints.y, endpoints.kappa)?;
            let closure = ClosurePath::pin(&x, &y);
            let path = minimal_path_in_class(&x, &y, &closure, n, loop_cap)?;
            let out = json!({
                "n": n,
                "clockwise_positive_label": -n,
                "length": path.length() / scale,
                "path": path,
                "closure_word": closure.word.label(),
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Command::Classify {
            endpoints,
            omega_resolution,
            svg,
        } => {
            let (x, y, _) = scale_to_unit_curvature(&endpoints.x, &endpoints.y, endpoints.kappa)?;
            let report = classify_with_resolution(&x, &y, omega_resolution);
            if let Some(file) = svg {
                write_artifact(&file, &classification_scene(&x, &y, &report).to_svg())?;
            }
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::ClassifySpace {
            endpoints,
            n_range,
            omega_resolution,
            witness_length,
            svg,
        } => {
            let (x, y, _) = scale_to_unit_curvature(&endpoints.x, &endpoints.y, endpoints.kappa)?;
            let closure = ClosurePath::pin(&x, &y);
            let k = class_index_k(&x, &y, &closure)?.k;
            let (lo, hi) = n_range.unwrap_or((k - 2, k + 2));
            let report = classify_space(&x, &y, &closure, lo..=hi, omega_resolution)?;
            let mut out = serde_json::to_value(&report)?;
            out["clockwise_positive_labels"] = json!(report
                .entries
                .iter()
                .map(|e| -e.n)
                .collect::<Vec<_>>());
            if let Some(bound) = witness_length {
                let mut witnesses = Vec::new();
                for entry in &report.entries {
                    for class in &entry.classes {
                        witnesses.push(serde_json::to_value(is_free_class(class, bound)?)?);
                    }
                }
                out["freeness"] = json!(witnesses);
            }
            if let Some(file) = svg {
                let mut scene = classification_scene(&x, &y, &report.proximity);
                for entry in &report.entries {
                    for class in &entry.classes {
                        if let Some(rep) = &class.representative {
                            scene.add_cs_path(rep, "#117a65", false);
                        }
                    }
                }
                write_artifact(&file, &scene.to_svg())?;
            }
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Command::Winding { path } => {
            let cs = read_cs_path(&path)?;
            let closure = ClosurePath::pin(&cs.start, &cs.end());
            let n = winding_number(&cs, &closure)?;
            let rho = relative_winding(&cs);
            let tau = TurningMap::of(&cs);
            let out = json!({
                "winding": n,
                "clockwise_positive_label": -n,
                "relative_winding": rho,
                "turning_breakpoints": tau.breakpoints,
                "closure_word": closure.word.label(),
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Command::Normalize {
            input,
            seed,
            trace,
            svg,
        } => {
            let sampled: SampledPath = match input {
                Some(file) => serde_json::from_str(&std::fs::read_to_string(file)?)?,
                None => {
                    use rand::SeedableRng;
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                    bcpath::synth::spline_path(&mut rng, 6.0, 0.9, 0.01)
                }
            };
            let (cs, deformation) = normalize_to_cs(&sampled, &EngineConfig::default())?;
            if let Some(file) = &trace {
                write_trace_jsonl(file, &deformation)?;
            }
            if let Some(file) = &svg {
                write_artifact(file, &filmstrip(&deformation, 4))?;
            }
            let worst = deformation
                .per_frame
                .iter()
                .map(|f| f.max_curvature)
                .fold(0.0f64, f64::max);
            let out = json!({
                "cs_path": cs,
                "complexity": cs.complexity(),
                "length": cs.length(),
                "frames": deformation.frames.len(),
                "max_frame_curvature": worst,
                "winding": deformation.per_frame.last().map(|f| f.winding),
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Command::Deform { path, mv } => {
            let cs = read_cs_path(&path)?;
            match mv {
                Move::Type1 { at } => {
                    let out = type_i_operation(&cs, at)?;
                    println!("{}", serde_json::to_string_pretty(&out)?);
                }
                Move::Type2 {
                    segment,
                    depth,
                    side,
                    out,
                } => {
                    let side = match side.as_str() {
                        "L" | "l" => Orientation::Ccw,
                        "R" | "r" => Orientation::Cw,
                        other => {
                            return Err(Error::InvalidParameter(format!(
                                "side must be L or R, got {other:?}"
                            )))
                        }
                    };
                    let pushed = type_ii_operation(&cs, segment, depth, side)?;
                    let text = serde_json::to_string_pretty(&pushed)?;
                    match out {
                        Some(file) => write_artifact(&file, &text)?,
                        None => println!("{text}"),
                    }
                }
                Move::Skew { steps, trace, svg } => {
                    let deformation = skew_homotopy(&cs, steps)?;
                    if let Some(file) = &trace {
                        write_trace_jsonl(file, &deformation)?;
                    }
                    if let Some(file) = &svg {
                        write_artifact(file, &filmstrip(&deformation, 5))?;
                    }
                    let out = json!({
                        "frames": deformation.frames.len(),
                        "winding": deformation.per_frame.last().map(|f| f.winding),
                        "final_frame_end": deformation.final_frame().end,
                    });
                    println!("{}", serde_json::to_string_pretty(&out)?);
                }
            }
        }
        Command::Oracle {
            endpoints,
            step,
            n,
            guided,
        } => {
            let (x, y, scale) =
                scale_to_unit_curvature(&endpoints.x, &endpoints.y, endpoints.kappa)?;
            let mut cfg = LatticeConfig::with_step(step);
            cfg.use_heuristic = guided;
            let t0 = Instant::now();
            let result = match n {
                Some(n) => {
                    let closure = ClosurePath::pin(&x, &y);
                    shortest_path_in_class(&x, &y, &closure, n, &cfg)?
                }
                None => shortest_path(&x, &y, &cfg)?,
            };
            let analytic = minimal_path(&x, &y).length();
            let out = json!({
                "length": result.length / scale,
                "lattice_length": result.lattice_length / scale,
                "analytic_length": analytic / scale,
                "slack": cfg.slack(analytic) / scale,
                "nodes_expanded": result.expanded,
                "runtime_ms": t0.elapsed().as_millis(),
                "polyline": result.polyline,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Command::Render { path, out, circles } => {
            let cs = read_cs_path(&path)?;
            let mut scene = Scene::new();
            if circles {
                let (l0, r0) = bcpath::adjacent_circles(&cs.start);
                let (l1, r1) = bcpath::adjacent_circles(&cs.end());
                for c in [&l0, &r0, &l1, &r1] {
                    scene.add_circle(c, "#999999");
                }
            }
            scene.add_cs_path(&cs, "#1a5276", false);
            let target = out_path(&out);
            std::fs::write(&target, scene.to_svg())?;
            println!("{}", json!({"written": target}));
        }
    }
    Ok(())
}
