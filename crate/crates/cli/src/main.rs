//! loclab: exact tooling for wireless localization guard placement.
//!
//! Subcommands generate the spike lower-bound polygon, verify and decide
//! localization schemes over exact line arrangements, synthesize monotone
//! formulas, compute the lower-bound analysis' quantitative objects, search
//! for minimal vertex-guard sets, and render scenes to SVG.
//!
//! Exit codes: 0 = success / positive verdict; 2 = valid run with a negative
//! verdict (not localizable, verification failed, search infeasible);
//! 1 = usage or input error.

mod render;
mod scene;

use std::io::Read;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use loclab::arrangement::{
    build_labeling, decide_against_labeling, synthesize_dnf, verify_against_labeling,
    AmbiguityWitness, Localizability, Workers,
};
use loclab::bounds::{cone_separation_max_ray, min_separators, separation_threshold};
use loclab::geom::{Point, Scalar};
use loclab::search::{general_solution_with, min_vertex_guards_with, vertex_solution_with};
use loclab::spike::{SpikeParams, SpikePolygon};

use render::{Layer, RenderError, Viewport, WitnessMarkers};
use scene::{parse_scene, scene_to_json, spike_from_scene, spike_scene, Scene};

#[derive(Parser)]
#[command(
    name = "loclab",
    about = "Exact-arithmetic toolkit for wireless localization guard placement",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SceneArg {
    /// Scene JSON file, or `-` for stdin.
    scene: String,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the spike lower-bound polygon P(m, w, h, delta) as a scene.
    Gen {
        #[arg(long)]
        m: usize,
        /// Spike pitch, as an integer or "p/q".
        #[arg(long)]
        w: Scalar,
        /// Spike height unit.
        #[arg(long)]
        h: Scalar,
        /// Spike base width.
        #[arg(long)]
        delta: Scalar,
        /// Output file (stdout when omitted).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check the scene's formula against every arrangement cell.
    Verify(SceneArg),
    /// Decide whether any monotone formula localizes the scene.
    Decide(SceneArg),
    /// Synthesize the canonical monotone DNF and emit the completed scene.
    Synth(SceneArg),
    /// Quantitative bounds for one spike of a generated polygon.
    Bounds {
        #[command(flatten)]
        scene: SceneArg,
        /// Spike index in 2..=m-1.
        #[arg(long)]
        spike: usize,
    },
    /// Exhaustive minimal vertex-guard search over canonical candidates.
    Search {
        #[command(flatten)]
        scene: SceneArg,
        #[arg(long)]
        kmax: usize,
        /// Time budget in seconds.
        #[arg(long, default_value_t = 60)]
        budget: u64,
    },
    /// Verified vertex-guard solution for a generated spike polygon.
    SolveVertex {
        #[command(flatten)]
        scene: SceneArg,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Verified general-position solution for a generated spike polygon.
    SolveGeneral {
        #[command(flatten)]
        scene: SceneArg,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Render the scene to SVG.
    Render {
        #[command(flatten)]
        scene: SceneArg,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Comma-separated subset of polygon,cones,cells,witnesses.
        #[arg(long, default_value = "polygon,cones")]
        layers: String,
        /// Viewport "xmin,ymin,xmax,ymax" (rationals); polygon bbox + margin
        /// when omitted.
        #[arg(long)]
        viewport: Option<String>,
        /// JSON file with a decide witness to mark (implies the witnesses
        /// layer).
        #[arg(long)]
        witness: Option<PathBuf>,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes; anything else is a
            // usage error (exit 1 by this tool's contract).
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
    }
}

fn workers() -> Workers {
    match std::env::var("LOCLAB_THREADS") {
        Ok(v) => Workers(v.parse().unwrap_or(1)),
        Err(_) => Workers(1),
    }
}

fn read_scene(path: &str) -> Result<Scene, String> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("reading stdin: {e}"))?;
        buf
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))?
    };
    parse_scene(&text).map_err(|e| e.to_string())
}

fn write_out(out: &Option<PathBuf>, data: &[u8]) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, data).map_err(|e| format!("writing {path:?}: {e}")),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(data)
                .map_err(|e| format!("writing stdout: {e}"))
        }
    }
}

#[derive(Serialize)]
struct DecideOutput {
    ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<AmbiguityWitness>,
}

#[derive(Serialize)]
struct BoundsOutput {
    spike: usize,
    threshold: Scalar,
    k: u64,
    #[serde(rename = "formulaValue")]
    formula_value: Scalar,
    #[serde(rename = "achievingRay")]
    achieving_ray: RayEndpoints,
}

#[derive(Serialize)]
struct RayEndpoints {
    from: Point,
    through: Point,
}

fn run(cli: Cli) -> Result<i32, String> {
    let workers = workers();
    match cli.command {
        Command::Gen {
            m,
            w,
            h,
            delta,
            out,
        } => {
            let params = SpikeParams::new(m, w, h, delta).map_err(|e| e.to_string())?;
            let sp = SpikePolygon::build(params).map_err(|e| e.to_string())?;
            let json = scene_to_json(&spike_scene(&sp));
            write_out(&out, json.as_bytes())?;
            Ok(0)
        }
        Command::Verify(arg) => {
            let scene = read_scene(&arg.scene)?;
            let formula = scene
                .formula
                .as_ref()
                .ok_or("scene has no formula to verify")?;
            let labeling = build_labeling(&scene.polygon, &scene.guards, workers)
                .map_err(|e| e.to_string())?;
            let verdict = verify_against_labeling(&labeling, formula);
            println!(
                "{}",
                serde_json::to_string_pretty(&verdict).expect("verdict serializes")
            );
            Ok(if verdict.ok { 0 } else { 2 })
        }
        Command::Decide(arg) => {
            let scene = read_scene(&arg.scene)?;
            let labeling = build_labeling(&scene.polygon, &scene.guards, workers)
                .map_err(|e| e.to_string())?;
            let output = match decide_against_labeling(&labeling) {
                Localizability::Localizable => DecideOutput {
                    ok: true,
                    witness: None,
                },
                Localizability::NotLocalizable(w) => DecideOutput {
                    ok: false,
                    witness: Some(w),
                },
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&output).expect("output serializes")
            );
            Ok(if output.ok { 0 } else { 2 })
        }
        Command::Synth(arg) => {
            let mut scene = read_scene(&arg.scene)?;
            let labeling = build_labeling(&scene.polygon, &scene.guards, workers)
                .map_err(|e| e.to_string())?;
            match synthesize_dnf(&labeling) {
                Ok(formula) => {
                    scene.formula = Some(formula);
                    println!("{}", scene_to_json(&scene));
                    Ok(0)
                }
                Err(e) => {
                    if let loclab::arrangement::SynthesisError::NotLocalizable(w) = &e {
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&DecideOutput {
                                ok: false,
                                witness: Some(w.clone()),
                            })
                            .expect("output serializes")
                        );
                    }
                    eprintln!("error: {e}");
                    Ok(2)
                }
            }
        }
        Command::Bounds { scene, spike } => {
            let scene = read_scene(&scene.scene)?;
            let sp = spike_from_scene(&scene).map_err(|e| e.to_string())?;
            let threshold = separation_threshold(&sp, spike).map_err(|e| e.to_string())?;
            let k = min_separators(&sp, spike).map_err(|e| e.to_string())?;
            let (value, ray) = cone_separation_max_ray(&sp, spike).map_err(|e| e.to_string())?;
            let output = BoundsOutput {
                spike,
                threshold,
                k,
                formula_value: value,
                achieving_ray: RayEndpoints {
                    from: ray.origin.clone(),
                    through: sp.tip(spike + 1).clone(),
                },
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&output).expect("output serializes")
            );
            Ok(0)
        }
        Command::Search {
            scene,
            kmax,
            budget,
        } => {
            let scene = read_scene(&scene.scene)?;
            let report =
                min_vertex_guards_with(&scene.polygon, kmax, Duration::from_secs(budget), workers)
                    .map_err(|e| e.to_string())?;
            let found = report.best_found.is_some();
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
            Ok(if found { 0 } else { 2 })
        }
        Command::SolveVertex { scene, out } => {
            let scene = read_scene(&scene.scene)?;
            let sp = spike_from_scene(&scene).map_err(|e| e.to_string())?;
            let solution = vertex_solution_with(&sp, workers).map_err(|e| e.to_string())?;
            let solved = Scene {
                polygon: sp.polygon().clone(),
                roles: Some(sp.roles().to_vec()),
                guards: solution.guards,
                formula: Some(solution.formula),
            };
            write_out(&out, scene_to_json(&solved).as_bytes())?;
            Ok(0)
        }
        Command::SolveGeneral { scene, out } => {
            let scene = read_scene(&scene.scene)?;
            let sp = spike_from_scene(&scene).map_err(|e| e.to_string())?;
            let solution = general_solution_with(&sp, workers).map_err(|e| e.to_string())?;
            let solved = Scene {
                polygon: sp.polygon().clone(),
                roles: Some(sp.roles().to_vec()),
                guards: solution.guards,
                formula: Some(solution.formula),
            };
            write_out(&out, scene_to_json(&solved).as_bytes())?;
            Ok(0)
        }
        Command::Render {
            scene,
            out,
            layers,
            viewport,
            witness,
        } => {
            let scene = read_scene(&scene.scene)?;
            let mut layer_list = Vec::new();
            for name in layers.split(',').filter(|s| !s.is_empty()) {
                layer_list.push(Layer::parse(name.trim()).map_err(|e| e.to_string())?);
            }
            let vp = match viewport {
                None => None,
                Some(spec) => Some(parse_viewport(&spec)?),
            };
            let mut markers = WitnessMarkers::default();
            if let Some(path) = witness {
                markers = load_witness(&path)?;
                if !layer_list.contains(&Layer::Witnesses) {
                    layer_list.push(Layer::Witnesses);
                }
            }
            let svg = render_svg_checked(&scene, vp, &layer_list, &markers)?;
            write_out(&out, &svg)?;
            Ok(0)
        }
    }
}

fn render_svg_checked(
    scene: &Scene,
    vp: Option<Viewport>,
    layers: &[Layer],
    markers: &WitnessMarkers,
) -> Result<Vec<u8>, String> {
    render::render_svg(scene, vp, layers, markers).map_err(|e: RenderError| e.to_string())
}

fn parse_viewport(spec: &str) -> Result<Viewport, String> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 4 {
        return Err("viewport must be xmin,ymin,xmax,ymax".to_string());
    }
    let parse =
        |s: &str| -> Result<Scalar, String> { s.trim().parse().map_err(|e| format!("{e}")) };
    let vp = Viewport {
        x_min: parse(parts[0])?,
        y_min: parse(parts[1])?,
        x_max: parse(parts[2])?,
        y_max: parse(parts[3])?,
    };
    if vp.x_min >= vp.x_max || vp.y_min >= vp.y_max {
        return Err("viewport is empty".to_string());
    }
    Ok(vp)
}

/// Pull witness representative points out of a decide/verify output file.
fn load_witness(path: &PathBuf) -> Result<WitnessMarkers, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("reading {path:?}: {e}"))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| format!("witness JSON: {e}"))?;
    let mut points = Vec::new();
    collect_representatives(&value, &mut points)?;
    if points.is_empty() {
        return Err("witness file contains no representative points".to_string());
    }
    Ok(WitnessMarkers { points })
}

fn collect_representatives(value: &serde_json::Value, out: &mut Vec<Point>) -> Result<(), String> {
    match value {
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                if k == "representative" {
                    let p: Point = serde_json::from_value(v.clone())
                        .map_err(|e| format!("bad representative: {e}"))?;
                    out.push(p);
                } else {
                    collect_representatives(v, out)?;
                }
            }
        }
        serde_json::Value::Array(items) => {
            for v in items {
                collect_representatives(v, out)?;
            }
        }
        _ => {}
    }
    Ok(())
}
