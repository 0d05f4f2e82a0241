use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use chambrier::apartment_compactification::ApartmentModel;
use chambrier::building_compactification::tree::base_edge;
use chambrier::building_compactification::{bordered_set, extend_retraction};
use chambrier::building_kernel::{TreeBuilding, Vertex};
use chambrier::cli_io::{self, Viewport};
use chambrier::core_facade::{core, facade, facade_fan};
use chambrier::exact_geometry::build_root_system;
use chambrier::fan_kernel::fj::build_fj;
use chambrier::fan_kernel::{check_hypotheses, parse_generators, Ambient, Fan};
use chambrier::{ChambrierError, Result};

#[derive(Parser)]
#[command(name = "chambrier", version, about = "Polyhedral compactifications of apartments and trees")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// A fan given either by a root system type and a generator set, or by a fan file.
#[derive(Args)]
struct Source {
    /// Root system type such as A2, B2 or A1xA2.
    #[arg(long = "type")]
    ty: Option<String>,
    /// Generators merged across, such as "s" or "" for the Weyl fan.
    #[arg(long = "J")]
    j: Option<String>,
    /// Fan file written by fan-build.
    file: Option<PathBuf>,
}

#[derive(Args)]
struct Out {
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Window {
    /// Thickness of the tree: every vertex has q + 1 neighbors.
    #[arg(long)]
    q: usize,
    /// Radius of the window around the base chamber.
    #[arg(long)]
    radius: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Cmd {
    /// Root system data of a type.
    Rootsys {
        #[arg(long = "type")]
        ty: String,
        #[command(flatten)]
        out: Out,
    },
    /// Builds the fan merging Weyl facets across the generators of J.
    FanBuild {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Out,
    },
    /// Checks the hypotheses H1-H7 on a fan.
    FanCheck {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Out,
    },
    /// Renders a rank-2 fan as SVG.
    FanPlot {
        #[command(flatten)]
        src: Source,
        /// Hatch the cores smaller than their cone.
        #[arg(long)]
        cores: bool,
        /// Viewport radius in the invariant metric.
        #[arg(long, default_value_t = 4.0)]
        radius: f64,
        #[command(flatten)]
        out: Out,
    },
    /// Core of a cone.
    Core {
        #[command(flatten)]
        src: Source,
        /// Cone id or index.
        #[arg(long)]
        cone: String,
        #[command(flatten)]
        out: Out,
    },
    /// Facade of a cone.
    Facade {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        cone: String,
        #[command(flatten)]
        out: Out,
    },
    /// Fan induced on the facade of a cone, with the bordered cones it comes from.
    FacadeFan {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        cone: String,
        #[command(flatten)]
        out: Out,
    },
    /// Limit of the ray from a point in a direction, in the compactified apartment.
    ApartmentLimit {
        #[command(flatten)]
        src: Source,
        /// Rational coordinates such as "1/2,-1".
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
        #[command(flatten)]
        out: Out,
    },
    /// Window of the regular tree.
    TreeBuild {
        #[command(flatten)]
        window: Window,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Shuffle the vertex list with this seed.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: Out,
    },
    /// Retraction onto an apartment centered at a chamber, extended to vertices and ends.
    TreeRetract {
        #[command(flatten)]
        window: Window,
        /// Two boundary vertices spanning the apartment, such as "a00,b11".
        #[arg(long)]
        apartment: String,
        /// Chamber of the apartment, such as "a0-a" or "base".
        #[arg(long)]
        chamber: String,
        /// Vertex "a01", chamber "a0-a01" or end "end(a011)".
        #[arg(long)]
        point: String,
        #[command(flatten)]
        out: Out,
    },
    /// Ends of the tree window, with the first edge of the ray to each from an origin.
    TreeBoundary {
        #[command(flatten)]
        window: Window,
        #[arg(long)]
        origin: Option<String>,
        #[command(flatten)]
        out: Out,
    },
    /// Hypotheses, cores and facades of every cone of a fan.
    Report {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Out,
    },
}

fn invalid(msg: impl Into<String>) -> ChambrierError {
    ChambrierError::Validation(msg.into())
}

fn emit(out: &Out, text: &str) -> Result<()> {
    match &out.out {
        Some(p) => std::fs::write(p, text).map_err(|e| invalid(format!("cannot write {}: {e}", p.display()))),
        None => {
            // a closed pipe downstream is not an error of the command
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn emit_json(out: &Out, v: &Value) -> Result<()> {
    emit(out, &(serde_json::to_string_pretty(v).expect("values serialize") + "\n"))
}

fn load(src: &Source) -> Result<(Fan, Ambient)> {
    match (&src.ty, &src.file) {
        (Some(ty), None) => {
            let rs = build_root_system(ty)?;
            let j = src.j.as_deref().unwrap_or("");
            let j = parse_generators(j, rs.rank).ok_or_else(|| invalid(format!("bad generator set {j:?} for {ty}")))?;
            Ok((build_fj(&rs, &j), Ambient::from_root_system(&rs)))
        }
        (None, Some(path)) => {
            if src.j.is_some() {
                return Err(invalid("--J goes with --type, not with a fan file"));
            }
            let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
            let fan = cli_io::fan_from_str(&text)?;
            let rs = build_root_system(&fan.label)?;
            if rs.rank != fan.dim {
                return Err(ChambrierError::DimensionMismatch { expected: rs.rank, got: fan.dim });
            }
            Ok((fan, Ambient::from_root_system(&rs)))
        }
        (Some(_), Some(_)) => Err(invalid("give either --type or a fan file, not both")),
        (None, None) => Err(invalid("give --type (with --J) or a fan file")),
    }
}

fn describe(fan: &Fan) -> String {
    format!("{} J={{{}}}: {} cones", fan.label, fan.j_string(), fan.len())
}

fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Rootsys { ty, out } => {
            let rs = build_root_system(&ty)?;
            let amb = Ambient::from_root_system(&rs);
            let mut v = rs.to_json();
            v["schema"] = json!(cli_io::SCHEMA);
            v["weyl_order"] = json!(amb.order());
            eprintln!("{}: rank {}, {} positive roots, Weyl group of order {}", rs.label, rs.rank, rs.positive_roots.len(), amb.order());
            emit_json(&out, &v)
        }
        Cmd::FanBuild { src, out } => {
            let (fan, _) = load(&src)?;
            eprintln!("{}", describe(&fan));
            emit(&out, &cli_io::fan_to_string(&fan))
        }
        Cmd::FanCheck { src, out } => {
            let (fan, amb) = load(&src)?;
            let rep = check_hypotheses(&fan, &amb);
            for s in &rep.statuses {
                eprintln!("  {} {}", s.name, if s.pass { "pass" } else { "FAIL" });
            }
            if let Some(bad) = rep.first_failure() {
                let w = serde_json::to_string(&bad.witness).expect("witnesses serialize");
                return Err(ChambrierError::hypothesis(&bad.name, w));
            }
            eprintln!("{}: all hypotheses hold", describe(&fan));
            emit_json(&out, &json!({"schema": cli_io::SCHEMA, "label": fan.label, "J": fan.j_string(), "report": rep, "all_pass": true}))
        }
        Cmd::FanPlot { src, cores, radius, out } => {
            if !(radius.is_finite() && radius > 0.0) {
                return Err(invalid("--radius must be positive"));
            }
            let (fan, amb) = load(&src)?;
            let scene = cli_io::render_fan(&fan, &amb, Viewport { radius }, cores)?;
            eprintln!("{}; {} regions, {} hatched cores", describe(&fan), scene.region_count(), scene.cores.len());
            emit(&out, &scene.to_svg())
        }
        Cmd::Core { src, cone, out } => {
            let (fan, amb) = load(&src)?;
            let c = core(&fan, &amb, cli_io::resolve_cone(&fan, &cone)?)?;
            eprintln!("core of {}: dimension {}, stabilizer of order {}", c.cone_id, c.core_cone.span_dim, c.stabilizer.len());
            emit_json(&out, &c.to_json(&amb))
        }
        Cmd::Facade { src, cone, out } => {
            let (fan, amb) = load(&src)?;
            let f = facade(&fan, &amb, cli_io::resolve_cone(&fan, &cone)?)?;
            eprintln!("facade of {}: dimension {}, group of order {}", f.base_cone_id, f.dim, f.group.len());
            emit_json(&out, &f.to_json())
        }
        Cmd::FacadeFan { src, cone, out } => {
            let (fan, amb) = load(&src)?;
            let idx = cli_io::resolve_cone(&fan, &cone)?;
            let ff = facade_fan(&fan, &amb, idx)?;
            let bordered = bordered_set(&fan, &amb, idx)?;
            eprintln!("facade fan of {}: {} cones in dimension {}", fan.cones[idx].id, ff.fan.len(), ff.facade.dim);
            emit_json(
                &out,
                &json!({
                    "schema": cli_io::SCHEMA,
                    "facade": ff.facade.to_json(),
                    "fan": ff.fan.to_json(),
                    "preimage": ff.preimage.iter().map(|&i| fan.cones[i].id.clone()).collect::<Vec<_>>(),
                    "bordered": bordered.to_json(),
                }),
            )
        }
        Cmd::ApartmentLimit { src, point, direction, out } => {
            let (fan, amb) = load(&src)?;
            let x = cli_io::parse_vector(&point, fan.dim)?;
            let v = cli_io::parse_vector(&direction, fan.dim)?;
            let model = ApartmentModel::new(fan, amb)?;
            let p = model.ray_limit(&x, &v)?;
            eprintln!("limit in the facade of cone {}", p.direction);
            emit_json(&out, &json!({"schema": cli_io::SCHEMA, "point": p}))
        }
        Cmd::TreeBuild { window, format, seed, out } => {
            let t = TreeBuilding::new(window.q, window.radius)?;
            eprintln!("tree q={} radius={}: {} vertices, {} ends", t.q, t.radius, t.vertices().len(), t.boundary().len());
            match format {
                Format::Dot => emit(&out, &t.to_dot()),
                Format::Json => {
                    let mut v = t.to_json();
                    if let Some(seed) = seed {
                        let mut rng = ChaCha8Rng::seed_from_u64(seed);
                        if let Some(vs) = v["vertices"].as_array_mut() {
                            vs.shuffle(&mut rng);
                        }
                    }
                    emit_json(&out, &v)
                }
            }
        }
        Cmd::TreeRetract { window, apartment, chamber, point, out } => {
            let t = TreeBuilding::new(window.q, window.radius)?;
            let (a, b) = apartment.split_once(',').ok_or_else(|| invalid("--apartment takes two boundary vertices \"x,y\""))?;
            let apt = t.apartment(&Vertex::parse(a.trim())?, &Vertex::parse(b.trim())?)?;
            let c = cli_io::parse_chamber(&chamber)?;
            let x = cli_io::parse_tree_point(&point)?;
            let image = extend_retraction(&t, &apt, &c, &x)?;
            eprintln!("{} retracts to {image:?}", x.name());
            emit_json(
                &out,
                &json!({
                    "schema": cli_io::SCHEMA,
                    "apartment": apt.vertices.iter().map(|v| v.name()).collect::<Vec<_>>(),
                    "chamber": c.name(),
                    "point": x.name(),
                    "image": image,
                }),
            )
        }
        Cmd::TreeBoundary { window, origin, out } => {
            let t = TreeBuilding::new(window.q, window.radius)?;
            let origin = origin.map(|o| Vertex::parse(&o)).transpose()?;
            let mut ends = Vec::new();
            for b in t.boundary() {
                let mut e = json!({"end": format!("end({})", b.name())});
                if let Some(o) = &origin {
                    let (v, v1) = base_edge(&t, &t.ray(o, &b)?)?;
                    e["base_edge"] = json!([v.name(), v1.name()]);
                }
                ends.push(e);
            }
            eprintln!("tree q={} radius={}: {} ends", t.q, t.radius, ends.len());
            emit_json(&out, &json!({"schema": cli_io::SCHEMA, "q": t.q, "radius": t.radius, "ends": ends}))
        }
        Cmd::Report { src, out } => {
            let (fan, amb) = load(&src)?;
            let r = cli_io::report(&fan, &amb)?;
            eprint!("{}", cli_io::report_text(&r));
            emit_json(&out, &r)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let text = serde_json::to_string_pretty(&cli_io::error_json(&e)).expect("values serialize") + "\n";
            let _ = std::io::stdout().write_all(text.as_bytes());
            eprintln!("error: {e}");
            ExitCode::from(cli_io::exit_code(&e) as u8)
        }
    }
}
