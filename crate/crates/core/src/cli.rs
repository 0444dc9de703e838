//! The `mapslice` command line.
//!
//! Exit codes: 0 on success, 1 on bad input (flags, mesh, planes), 2 when a
//! file cannot be read or written.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::io::{self, ActivationLog, ColorMode};
use crate::microstructure::{CellTemplate, TemplateKind};
use crate::oracle::{self, VerifyConfig};
use crate::paving::Paving;
use crate::sweep::{sweep, MicroConfig, PlaneStack, SliceActivation, SweepConfig};
use crate::traversal::LoopMode;
use crate::Error;

#[derive(Debug, Parser)]
#[command(
    name = "mapslice",
    version,
    about = "Slice cubic tetrahedral maps with plane-activated box traversal",
    args_conflicts_with_subcommands = true
)]
pub struct Cli {
    #[command(flatten)]
    pub run: RunArgs,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Mesh JSON file.
    #[arg(long, value_name = "PATH")]
    pub mesh: Option<PathBuf>,
    /// Paving level; boxes per edge n = 2^nu.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(0..=20))]
    pub nu: u32,
    #[arg(long, allow_hyphen_values = true, requires_all = ["z_step", "count"], conflicts_with = "planes")]
    pub z_start: Option<f64>,
    #[arg(long, requires_all = ["z_start", "count"])]
    pub z_step: Option<f64>,
    #[arg(long, requires_all = ["z_start", "z_step"])]
    pub count: Option<usize>,
    /// File of ascending z values.
    #[arg(long, value_name = "FILE")]
    pub planes: Option<PathBuf>,
    #[arg(long, default_value = "sound", value_parser = ["sound", "paper-det", "always-scan"])]
    pub loop_mode: String,
    /// Generate microstructure from this template.
    #[arg(long, value_parser = ["edge-frame", "octet", "diagonal-cross"])]
    pub template: Option<String>,
    /// Slab half-width for microstructure slicing.
    #[arg(long, requires = "template")]
    pub slab: Option<f64>,
    /// Write one SVG per plane into this directory.
    #[arg(long, value_name = "PATH")]
    pub svg_dir: Option<PathBuf>,
    /// Write the activation log (JSON).
    #[arg(long, value_name = "PATH")]
    pub log: Option<PathBuf>,
    /// Write per-plane statistics (CSV).
    #[arg(long, value_name = "PATH")]
    pub stats: Option<PathBuf>,
    /// Reuse the previous plane's microstructure per box.
    #[arg(long)]
    pub cache_active: bool,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare the traversal against brute-force oracles.
    #[command(hide = true)]
    Verify {
        #[arg(long, default_value_t = 10)]
        maps: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=6))]
        max_nu: u32,
    },
}

enum Failure {
    Input(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. } => Failure::Io(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// Runs the command line with process stdout and stderr.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_cli_with(args, &mut std::io::stdout(), &mut std::io::stderr())
}

pub fn run_cli_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Some(Command::Verify { maps, seed, max_nu }) => verify(out, maps, seed, max_nu),
        None => run(&cli.run, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            if cli.run.mesh.is_none() {
                let _ = writeln!(err, "\n{}", <Cli as clap::CommandFactory>::command().render_usage());
            }
            1
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn verify(out: &mut dyn Write, maps: usize, seed: u64, max_nu: u32) -> Result<i32, Failure> {
    let checks = oracle::verify(&VerifyConfig { maps, seed, max_nu });
    for c in &checks {
        writeln!(out, "{c}").map_err(|e| Failure::Io(e.to_string()))?;
    }
    Ok(if checks.iter().all(|c| c.passed) { 0 } else { 1 })
}

fn plane_stack(args: &RunArgs) -> Result<PlaneStack, Failure> {
    match (&args.planes, args.z_start, args.z_step, args.count) {
        (Some(path), None, None, None) => Ok(PlaneStack::new(io::read_planes(path)?)?),
        (None, Some(start), Some(step), Some(count)) => Ok(PlaneStack::uniform(start, step, count)?),
        _ => Err(Failure::Input(
            "give either --planes FILE or all of --z-start, --z-step, --count".into(),
        )),
    }
}

fn run(args: &RunArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let mesh_path = args
        .mesh
        .as_ref()
        .ok_or_else(|| Failure::Input("--mesh is required".into()))?;
    let maps = io::load_mesh(mesh_path)?;
    let planes = plane_stack(args)?;
    let loop_mode: LoopMode = args.loop_mode.parse().map_err(Failure::Input)?;
    let micro = match &args.template {
        Some(t) => {
            let kind: TemplateKind = t.parse().map_err(Failure::Input)?;
            if args.slab.is_some_and(|s| !(s >= 0.0)) {
                return Err(Failure::Input("--slab must be >= 0".into()));
            }
            Some(MicroConfig {
                template: CellTemplate::new(kind, 0.1, 5)?,
                slab: args.slab,
            })
        }
        None => None,
    };
    let config = SweepConfig {
        loop_mode,
        micro,
        cache_active: args.cache_active,
        jobs: args.jobs,
    };
    let paving = Paving::new(args.nu);
    let mut records: Vec<SliceActivation> = Vec::new();
    let stats = sweep(&maps, &planes, paving, &config, &mut records).map_err(|e| Failure::from(e.source))?;

    if let Some(dir) = &args.svg_dir {
        fs::create_dir_all(dir).map_err(|e| Failure::from(Error::Io { path: dir.clone(), source: e }))?;
        for i in 0..planes.len() {
            let lo = records.partition_point(|r| r.plane_index < i);
            let hi = records.partition_point(|r| r.plane_index <= i);
            io::write_svg(&records[lo..hi], dir.join(format!("plane_{i:04}.svg")), ColorMode::Order)?;
        }
    }
    if let Some(path) = &args.log {
        ActivationLog::from_records(paving.n(), &records).write(path)?;
    }
    if let Some(path) = &args.stats {
        io::write_stats(&stats, path)?;
    }
    let w = |e: std::io::Error| Failure::Io(e.to_string());
    writeln!(
        out,
        "{} maps, {} planes, n = {}: {} activations, {} cuboid tests",
        maps.len(),
        planes.len(),
        paving.n(),
        stats.total_activations(),
        stats.total_cuboid_tests()
    )
    .map_err(w)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_cli_with(
            std::iter::once("mapslice").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn missing_mesh_is_an_input_error() {
        let (code, _, err) = run(&["--z-start", "0", "--z-step", "0.1", "--count", "3"]);
        assert_eq!(code, 1);
        assert!(err.contains("--mesh") && err.contains("Usage"), "{err}");
    }

    #[test]
    fn unknown_flag_and_help() {
        assert_eq!(run(&["--bogus"]).0, 1);
        assert_eq!(run(&["--loop-mode", "sometimes"]).0, 1);
        let (code, out, _) = run(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("--loop-mode") && !out.contains("verify"));
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let (code, _, err) = run(&["--mesh", "/nonexistent/m.json", "--planes", "/nonexistent/p.txt"]);
        assert_eq!(code, 2, "{err}");
    }
}
