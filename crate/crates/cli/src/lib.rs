//! Command-line front end. Each subcommand loads its inputs, calls one
//! library operation and renders the result; artifacts are collected in
//! memory so the same code path serves both fresh runs and manifest reruns.

pub mod args;
mod commands;
pub mod manifest;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;

use args::{Cli, Command};
use manifest::{default_path, sha256_hex, FileHash, RunManifest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;

#[derive(Debug)]
pub enum Failure {
    /// Bad flags, unreadable files, schema or validation errors.
    Invalid(String),
    /// Valid input the requested operation cannot serve.
    Infeasible(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => EXIT_INVALID,
            Failure::Infeasible(_) => EXIT_INFEASIBLE,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Invalid(m) | Failure::Infeasible(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<patrol_core::Error> for Failure {
    fn from(e: patrol_core::Error) -> Self {
        if e.is_infeasible() {
            Failure::Infeasible(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

pub type CliResult<T> = Result<T, Failure>;

/// Inputs read and artifacts produced by one command.
#[derive(Debug, Default)]
pub struct Run {
    pub inputs: Vec<FileHash>,
    pub outputs: Vec<(PathBuf, Vec<u8>)>,
    pub seed: Option<u64>,
    /// Human-readable summary lines for stdout.
    pub notes: Vec<String>,
}

impl Run {
    fn read(&mut self, path: &Path) -> CliResult<String> {
        let bytes =
            std::fs::read(path).map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))?;
        self.inputs.push(FileHash {
            path: path.to_path_buf(),
            sha256: sha256_hex(&bytes),
        });
        String::from_utf8(bytes).map_err(|_| Failure::Invalid(format!("{} is not UTF-8", path.display())))
    }

    fn emit(&mut self, path: &Path, bytes: Vec<u8>) {
        self.outputs.push((path.to_path_buf(), bytes));
    }

    fn emit_json<T: serde::Serialize>(&mut self, path: &Path, value: &T) {
        let mut s = serde_json::to_string_pretty(value).expect("output serializes");
        s.push('\n');
        self.emit(path, s.into_bytes());
    }

    fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }
}

/// Parses `argv` (program name first) and runs it, returning the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Rerun(a) => rerun(&a.manifest_file),
        _ => fresh(&cli, &argv[1..]),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("{f}");
            f.exit_code()
        }
    }
}

/// Prints to stdout, ignoring a closed pipe.
fn say(lines: &[String]) {
    let mut out = std::io::stdout().lock();
    for line in lines {
        let _ = writeln!(out, "{line}");
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Invalid(format!("cannot create {}: {e}", dir.display())))?;
    }
    std::fs::write(path, bytes).map_err(|e| Failure::Invalid(format!("cannot write {}: {e}", path.display())))
}

fn fresh(cli: &Cli, argv: &[OsString]) -> CliResult<()> {
    let run = commands::execute(&cli.command)?;
    say(&run.notes);
    for (path, bytes) in &run.outputs {
        write_file(path, bytes)?;
    }
    let manifest_path = match (&cli.manifest, run.outputs.first()) {
        (Some(p), _) => p.clone(),
        (None, Some((out, _))) => default_path(out),
        (None, None) => return Ok(()),
    };
    let manifest = RunManifest {
        tool: "patrol".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: cli.command.name().into(),
        argv: argv.iter().map(|a| a.to_string_lossy().into_owned()).collect(),
        cwd: std::env::current_dir().map_err(|e| Failure::Invalid(format!("no working directory: {e}")))?,
        config: serde_json::to_value(&cli.command).expect("arguments serialize"),
        seed: run.seed,
        inputs: run.inputs,
        outputs: run
            .outputs
            .iter()
            .map(|(path, bytes)| FileHash {
                path: path.clone(),
                sha256: sha256_hex(bytes),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    write_file(&manifest_path, text.as_bytes())
}

/// Repeats the recorded command in memory and compares every output hash.
fn rerun(path: &Path) -> CliResult<()> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let m: RunManifest =
        serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    let resolve = |p: &Path| if p.is_absolute() { p.to_path_buf() } else { m.cwd.join(p) };
    std::env::set_current_dir(&m.cwd)
        .map_err(|e| Failure::Invalid(format!("cannot enter {}: {e}", m.cwd.display())))?;

    let mut argv = vec!["patrol".to_string()];
    argv.extend(m.argv.iter().cloned());
    let cli = Cli::try_parse_from(&argv).map_err(|e| Failure::Invalid(format!("manifest arguments: {e}")))?;
    if matches!(cli.command, Command::Rerun(_)) {
        return Err(Failure::Invalid("a manifest cannot record a rerun".into()));
    }
    let run = commands::execute(&cli.command)?;

    let mut report = Vec::new();
    let mut mismatches = 0;
    for want in &m.inputs {
        let got = run.inputs.iter().find(|h| resolve(&h.path) == resolve(&want.path));
        if got.map(|h| &h.sha256) != Some(&want.sha256) {
            report.push(format!("input {} changed", want.path.display()));
            mismatches += 1;
        }
    }
    for want in &m.outputs {
        match run.outputs.iter().find(|(p, _)| resolve(p) == resolve(&want.path)) {
            Some((_, bytes)) if sha256_hex(bytes) == want.sha256 => {
                report.push(format!("identical {}", want.path.display()))
            }
            Some(_) => {
                report.push(format!("differs   {}", want.path.display()));
                mismatches += 1;
            }
            None => {
                report.push(format!("missing   {}", want.path.display()));
                mismatches += 1;
            }
        }
    }
    if run.outputs.len() != m.outputs.len() {
        report.push(format!("{} outputs recorded, {} produced", m.outputs.len(), run.outputs.len()));
        mismatches += 1;
    }
    say(&report);
    if mismatches > 0 {
        return Err(Failure::Invalid(format!("{mismatches} mismatch(es) against {}", path.display())));
    }
    Ok(())
}
