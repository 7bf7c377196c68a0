//! Command-line surface: figure and report emitters plus the verification
//! suite.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage error (from the
//! argument parser), 3 data-file error.

use caspr::apdata::Tile;
use caspr::cps;
use caspr::inflation;
use caspr::patchfile;
use caspr::render::{self, ColorBy};
use caspr::reproject::{self, ReprojectionKind};
use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "caspr",
    about = "Exact engine for the Spectre/CASPr tiling family: cohomology, inflation, windows, reprojections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cohomology of the tiling space, per representation and in total.
    Cohomology {
        /// Compute over the integers (expanded matrices and stabilized
        /// quotients) instead of representation by representation.
        #[arg(long)]
        integral: bool,
        /// Write the report to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a patch by repeated inflation of a seed tile.
    Inflate {
        /// Seed tile name (Gamma, Delta, Theta, Lambda, Xi, Pi, Sigma, Phi, Psi).
        #[arg(long, default_value = "Psi")]
        seed: String,
        /// Number of inflation half-steps; must be even.
        #[arg(long, default_value_t = 4)]
        steps: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render a patch file to SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        svg: PathBuf,
        /// type, parity or edge.
        #[arg(long, default_value = "type")]
        color_by: String,
    },
    /// Produce a window cloud by star-projection or by the chaos game.
    Window {
        /// project or chaos.
        #[arg(long, default_value = "project")]
        method: String,
        /// Point budget for the chaos game.
        #[arg(long, default_value_t = 100_000)]
        points: usize,
        /// PRNG seed (chaos), recorded in the output file.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Inflation half-steps for the projection method; must be even.
        #[arg(long, default_value_t = 8)]
        steps: u32,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Exact density bookkeeping of the cut-and-project scheme.
    Density,
    /// Enumerate the Fourier module (Bragg positions) within a radius.
    Dual {
        #[arg(long, default_value_t = 3.0)]
        radius: f64,
        /// Internal-space cutoff keeping the enumeration finite.
        #[arg(long, default_value_t = 0.6)]
        internal_radius: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproject a patch file onto a target lattice.
    Reproject {
        /// hex or metatile.
        #[arg(long)]
        target: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run the full verification suite.
    Verify,
}

fn out_path(p: &Path) -> PathBuf {
    if p.is_absolute() {
        return p.to_path_buf();
    }
    match std::env::var("CASPR_OUT_DIR") {
        Ok(dir) if !dir.is_empty() => Path::new(&dir).join(p),
        _ => p.to_path_buf(),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), ExitCode> {
    let path = out_path(path);
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            let _ = std::fs::create_dir_all(dir);
        }
    }
    std::fs::write(&path, contents).map_err(|e| {
        eprintln!("cannot write {}: {e}", path.display());
        ExitCode::from(3)
    })
}

fn read_file(path: &Path) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("cannot read {}: {e}", path.display());
        ExitCode::from(3)
    })
}

fn parse_tile(name: &str) -> Result<Tile, ExitCode> {
    Tile::parse(name).ok_or_else(|| {
        eprintln!("unknown tile name '{name}'");
        ExitCode::from(2)
    })
}

fn run() -> Result<ExitCode, ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Cohomology { integral, out } => {
            let (text, ok) = if integral {
                let rep = caspr::cohomology::integral_report();
                let ok = rep.h1.limit_rank == 4
                    && rep.h2.limit_rank == 10
                    && rep.h1.torsion.is_empty()
                    && rep.h2.torsion.is_empty()
                    && rep.h1.stable
                    && rep.h2.stable;
                (rep.render_text(), ok)
            } else {
                let rep = caspr::cohomology::cech_report();
                let ok = rep.h1_total == 4 && rep.h2_total == 10;
                (rep.render_text(), ok)
            };
            match out {
                Some(p) => write_file(&p, &text)?,
                None => print!("{text}"),
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Inflate { seed, steps, out } => {
            let tile = parse_tile(&seed)?;
            let patch = inflation::generate_patch(tile, steps).map_err(|e| {
                eprintln!("{e}");
                ExitCode::from(2)
            })?;
            write_file(&out, &patchfile::write_patch(&patch))?;
            eprintln!("{} tiles written", patch.len());
            Ok(ExitCode::SUCCESS)
        }
        Command::Render {
            file,
            svg,
            color_by,
        } => {
            let color = ColorBy::parse(&color_by).ok_or_else(|| {
                eprintln!("--color-by must be type, parity or edge");
                ExitCode::from(2)
            })?;
            let patch = patchfile::read_patch(&read_file(&file)?).map_err(|e| {
                eprintln!("{e}");
                ExitCode::from(3)
            })?;
            write_file(&svg, &render::render_patch(&patch, color))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Window {
            method,
            points,
            seed,
            steps,
            out,
            svg,
        } => {
            let cloud = match method.as_str() {
                "project" => cps::window_stream(Tile::Psi, steps),
                "chaos" => cps::chaos_game(points, seed),
                _ => {
                    eprintln!("--method must be project or chaos");
                    return Err(ExitCode::from(2));
                }
            };
            write_file(&out, &patchfile::write_cloud(&cloud))?;
            if let Some(svg_path) = svg {
                write_file(&svg_path, &render::render_cloud(&cloud))?;
            }
            eprintln!("{} window points written", cloud.points.len());
            Ok(ExitCode::SUCCESS)
        }
        Command::Density => {
            let rep = cps::density_report();
            print!("{}", rep.render_text());
            Ok(if rep.densities_agree() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Dual {
            radius,
            internal_radius,
            out,
        } => {
            let pts = cps::fourier_points(radius, internal_radius);
            let mut text = String::from("# Bragg positions: physical re, im, internal re, im\n");
            for p in &pts {
                text.push_str(&format!(
                    "{:.9},{:.9},{:.9},{:.9}\n",
                    p.physical.re, p.physical.im, p.internal.re, p.internal.im
                ));
            }
            match out {
                Some(p) => write_file(&p, &text)?,
                None => print!("{text}"),
            }
            eprintln!("{} Bragg positions", pts.len());
            Ok(ExitCode::SUCCESS)
        }
        Command::Reproject {
            target,
            input,
            out,
            svg,
        } => {
            let kind = match target.as_str() {
                "hex" => ReprojectionKind::Hexagon,
                "metatile" => ReprojectionKind::Metatile,
                _ => {
                    eprintln!("--target must be hex or metatile");
                    return Err(ExitCode::from(2));
                }
            };
            let patch = patchfile::read_patch(&read_file(&input)?).map_err(|e| {
                eprintln!("{e}");
                ExitCode::from(3)
            })?;
            let deformed = reproject::reproject(&patch, kind).map_err(|e| {
                eprintln!("{e}");
                ExitCode::from(1)
            })?;
            // Patch format plus a projection header; coordinates are
            // target-lattice rationals written num/den.
            let mut text = String::from("caspr patch v1\n");
            text.push_str(&format!("projection {}\n", kind.name()));
            text.push_str(&format!("count {}\n", deformed.tiles.len()));
            for (tile, rot, verts) in &deformed.tiles {
                let v0 = &verts[0];
                text.push_str(&format!(
                    "{} {} R {}/{} {}/{}\n",
                    tile.name(),
                    rot,
                    v0.a.numer(),
                    v0.a.denom(),
                    v0.b.numer(),
                    v0.b.denom()
                ));
            }
            write_file(&out, &text)?;
            if let Some(svg_path) = svg {
                write_file(&svg_path, &render::render_deformed(&deformed))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify => {
            let results = caspr::verify::run_all();
            print!("{}", caspr::verify::render_results(&results));
            Ok(if results.iter().all(|r| r.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(code) => code,
    }
}
