//! The `arbor` command line.
//!
//! Exit codes: 0 success, 1 the operation failed (including lint errors),
//! 2 bad usage or configuration, 3 the store is locked or unavailable.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use arbor_api::{AppState, Config};
use arbor_core::{lint_statement_text, ExportFormat, LintReport, LintWarning, StatementId};
use arbor_store::seed::{smoking_dialog, synthetic_corpus, CorpusParams};
use arbor_store::{Actor, CorpusFile, Store, StoreConfig, StoreError};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_STORE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "arbor", version, about = "Run and administer an argument graph service")]
pub struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Store directory; overrides the configuration.
    #[arg(long, global = true, value_name = "DIR")]
    store: Option<PathBuf>,
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the HTTP service until interrupted.
    Serve,
    /// Load a corpus file into an empty store.
    Import { file: PathBuf },
    /// Write the store's corpus (or graph) to FILE, or stdout.
    Export {
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ExportKind::Corpus)]
        format: ExportKind,
        /// Keep usernames and credential digests.
        #[arg(long)]
        with_names: bool,
    },
    /// Check statement texts against the guidelines.
    Lint {
        text: Option<String>,
        /// One text per line; `-` reads stdin.
        #[arg(long, conflicts_with = "text")]
        file: Option<PathBuf>,
    },
    /// Moderate a statement offline.
    Mod {
        #[arg(value_enum)]
        action: ModAction,
        id: u64,
    },
    /// Administer users offline.
    User {
        #[command(subcommand)]
        action: UserAction,
    },
    /// Produce a bundled corpus.
    Seed {
        #[arg(value_enum)]
        corpus: SeedCorpus,
        /// Write the corpus here instead of importing it into the store.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = CorpusParams::default().seed)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExportKind {
    Corpus,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModAction {
    Approve,
    Demote,
}

#[derive(Debug, Subcommand)]
enum UserAction {
    MakeModerator { username: String },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SeedCorpus {
    Smoking,
    Synthetic,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Store(StoreError),
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Store(
                StoreError::Locked(_) | StoreError::Unavailable(_) | StoreError::CorruptLog(_),
            ) => EXIT_STORE,
            CliError::Store(_) | CliError::Failed(_) => EXIT_FAILURE,
        }
    }

    fn kind(&self) -> &'static str {
        match self.exit_code() {
            EXIT_CONFIG => "config",
            EXIT_STORE => "store_unavailable",
            _ => "failed",
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) | CliError::Failed(m) => f.write_str(m),
            CliError::Store(e) => write!(f, "{e}"),
        }
    }
}

impl From<StoreError> for CliError {
    fn from(e: StoreError) -> Self {
        CliError::Store(e)
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    out: &'a mut dyn Write,
    env: &'a dyn Fn(&str) -> Option<String>,
}

impl Ctx<'_> {
    fn config(&self) -> Result<Config, CliError> {
        let mut config = Config::load(self.cli.config.as_deref(), self.env)
            .map_err(|e| CliError::Config(e.to_string()))?;
        if let Some(dir) = &self.cli.store {
            config.store = dir.clone();
        }
        Ok(config)
    }

    fn open_store(&self) -> Result<Store, CliError> {
        let config = self.config()?;
        let store_config = StoreConfig { draft_threshold: config.draft_threshold, ..StoreConfig::default() };
        Ok(Store::open(&config.store, store_config)?)
    }

    fn print(&mut self, human: impl std::fmt::Display, machine: serde_json::Value) -> Result<(), CliError> {
        let res = if self.cli.json { writeln!(self.out, "{machine}") } else { writeln!(self.out, "{human}") };
        res.map_err(|e| CliError::Failed(format!("cannot write output: {e}")))
    }
}

/// Parse `args` and run. Output goes to `out`, diagnostics to `err`.
/// Returns the process exit code.
pub fn run<I, T>(
    args: I,
    out: &mut dyn Write,
    err: &mut dyn Write,
    env: &dyn Fn(&str) -> Option<String>,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    let json = cli.json;
    let mut ctx = Ctx { cli: &cli, out, env };
    match dispatch(&mut ctx) {
        Ok(code) => code,
        Err(e) => {
            if json {
                let _ = writeln!(err, "{}", json!({"error": {"kind": e.kind(), "message": e.to_string()}}));
            } else {
                let _ = writeln!(err, "error: {e}");
            }
            e.exit_code()
        }
    }
}

fn dispatch(ctx: &mut Ctx) -> Result<i32, CliError> {
    match &ctx.cli.command {
        Command::Serve => serve(ctx),
        Command::Import { file } => import(ctx, file),
        Command::Export { file, format, with_names } => export(ctx, file.as_deref(), *format, *with_names),
        Command::Lint { text, file } => lint(ctx, text.as_deref(), file.as_deref()),
        Command::Mod { action, id } => moderate(ctx, *action, StatementId(*id)),
        Command::User { action: UserAction::MakeModerator { username } } => {
            let mut store = ctx.open_store()?;
            let user = store.set_moderator(username, true)?;
            ctx.print(
                format_args!("{} is now a moderator", user.username),
                json!({"username": user.username, "is_moderator": true}),
            )?;
            Ok(EXIT_OK)
        }
        Command::Seed { corpus, out, seed } => seed_corpus(ctx, *corpus, out.as_deref(), *seed),
    }
}

fn serve(ctx: &mut Ctx) -> Result<i32, CliError> {
    let config = ctx.config()?;
    let store_config = StoreConfig { draft_threshold: config.draft_threshold, ..StoreConfig::default() };
    let store = Store::open(&config.store, store_config)?;
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| CliError::Failed(format!("cannot start runtime: {e}")))?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(config.addr)
            .await
            .map_err(|e| CliError::Failed(format!("cannot listen on {}: {e}", config.addr)))?;
        let state = AppState::new(store, config.settings());
        arbor_api::serve(listener, state).await.map_err(|e| CliError::Failed(format!("server error: {e}")))
    })?;
    Ok(EXIT_OK)
}

fn read_corpus(path: &Path) -> Result<CorpusFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Failed(format!("cannot read {}: {e}", path.display())))?;
    Ok(CorpusFile::from_json(&text)?)
}

fn import(ctx: &mut Ctx, file: &Path) -> Result<i32, CliError> {
    let corpus = read_corpus(file)?;
    let mut store = ctx.open_store()?;
    let summary = store.import(corpus)?;
    ctx.print(summary, serde_json::to_value(summary).expect("summary serializes"))?;
    Ok(EXIT_OK)
}

fn write_output(ctx: &mut Ctx, file: Option<&Path>, body: &str) -> Result<(), CliError> {
    match file {
        Some(p) if p != Path::new("-") => std::fs::write(p, body)
            .map_err(|e| CliError::Failed(format!("cannot write {}: {e}", p.display()))),
        _ => ctx
            .out
            .write_all(body.as_bytes())
            .map_err(|e| CliError::Failed(format!("cannot write output: {e}"))),
    }
}

fn export(ctx: &mut Ctx, file: Option<&Path>, format: ExportKind, with_names: bool) -> Result<i32, CliError> {
    let store = ctx.open_store()?;
    let body = match format {
        ExportKind::Corpus => {
            let corpus = store.export_corpus();
            let corpus = if with_names { corpus } else { corpus.pseudonymized() };
            corpus.to_json()
        }
        ExportKind::Json => store.export_graph(ExportFormat::Json),
        ExportKind::Dot => store.export_graph(ExportFormat::Dot),
    };
    let to_stdout = file.is_none_or(|p| p == Path::new("-"));
    write_output(ctx, file, &body)?;
    if !to_stdout {
        let summary = store.export_corpus().summary();
        ctx.print(summary, serde_json::to_value(summary).expect("summary serializes"))?;
    }
    Ok(EXIT_OK)
}

fn describe_warning(w: &LintWarning) -> String {
    match w {
        LintWarning::IndexicalReference { word, position } => {
            format!("warning: context-dependent word {word:?} at {position}")
        }
        LintWarning::ConjunctionCandidate { token, position } => {
            format!("warning: {:?} at {position} may join two statements", token.trim())
        }
    }
}

fn lint(ctx: &mut Ctx, text: Option<&str>, file: Option<&Path>) -> Result<i32, CliError> {
    let texts: Vec<(usize, String)> = match (text, file) {
        (Some(t), _) => vec![(1, t.to_string())],
        (None, Some(path)) => {
            let reader: Box<dyn BufRead> = if path == Path::new("-") {
                Box::new(std::io::stdin().lock())
            } else {
                let f = std::fs::File::open(path)
                    .map_err(|e| CliError::Failed(format!("cannot read {}: {e}", path.display())))?;
                Box::new(std::io::BufReader::new(f))
            };
            let mut lines = Vec::new();
            for (i, line) in reader.lines().enumerate() {
                let line = line.map_err(|e| CliError::Failed(format!("cannot read input: {e}")))?;
                if !line.trim().is_empty() {
                    lines.push((i + 1, line));
                }
            }
            lines
        }
        (None, None) => return Err(CliError::Config("give a text or --file".into())),
    };

    let reports: Vec<(usize, String, LintReport)> = texts
        .into_iter()
        .map(|(n, t)| {
            let r = lint_statement_text(&t);
            (n, t, r)
        })
        .collect();
    let failed = reports.iter().filter(|(_, _, r)| !r.is_ok()).count();

    if ctx.cli.json {
        let items: Vec<_> = reports
            .iter()
            .map(|(line, text, report)| json!({"line": line, "text": text, "report": report}))
            .collect();
        ctx.print("", json!({"texts": items.len(), "with_errors": failed, "results": items}))?;
    } else {
        let mut buf = String::new();
        for (line, text, report) in &reports {
            if report.errors.is_empty() && report.warnings.is_empty() {
                continue;
            }
            buf.push_str(&format!("{line}: {text}\n"));
            for e in &report.errors {
                let name = serde_json::to_value(e).expect("serializes");
                buf.push_str(&format!("  error: {}\n", name.as_str().unwrap_or_default()));
            }
            for w in &report.warnings {
                buf.push_str(&format!("  {}\n", describe_warning(w)));
            }
        }
        buf.push_str(&format!("{} texts, {failed} with errors", reports.len()));
        ctx.print(buf, json!(null))?;
    }
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILURE })
}

fn moderate(ctx: &mut Ctx, action: ModAction, id: StatementId) -> Result<i32, CliError> {
    let mut store = ctx.open_store()?;
    let statement = match action {
        ModAction::Approve => store.approve(Actor::Operator, id)?,
        ModAction::Demote => store.demote(Actor::Operator, id)?,
    };
    ctx.print(
        format_args!("statement {} is now {}", statement.id, status_name(statement.status)),
        json!({"statement": statement.id, "status": statement.status}),
    )?;
    Ok(EXIT_OK)
}

fn status_name(s: arbor_core::Status) -> &'static str {
    match s {
        arbor_core::Status::Draft => "draft",
        arbor_core::Status::Approved => "approved",
    }
}

fn seed_corpus(ctx: &mut Ctx, which: SeedCorpus, out: Option<&Path>, seed: u64) -> Result<i32, CliError> {
    let corpus = match which {
        SeedCorpus::Smoking => smoking_dialog(),
        SeedCorpus::Synthetic => synthetic_corpus(CorpusParams { seed, ..CorpusParams::default() }),
    };
    let summary = corpus.summary();
    match out {
        Some(path) => write_output(ctx, Some(path), &corpus.to_json())?,
        None => {
            let mut store = ctx.open_store()?;
            store.import(corpus)?;
        }
    }
    if out != Some(Path::new("-")) {
        ctx.print(summary, serde_json::to_value(summary).expect("summary serializes"))?;
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("arbor").chain(args.iter().copied()), &mut out, &mut err, &|_| None);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn lint_single_text() {
        let (code, out, _) = run_args(&["lint", "Are there stupid questions?"]);
        assert_eq!(code, EXIT_FAILURE);
        assert!(out.contains("error: is_question"), "{out}");
        assert_eq!(run_args(&["lint", "Smoking causes lung cancer"]).0, EXIT_OK);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_CONFIG);
        assert_eq!(run_args(&["lint"]).0, EXIT_CONFIG);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn missing_config_file_exits_2() {
        let (code, _, err) = run_args(&["--config", "/nonexistent/arbor.toml", "export"]);
        assert_eq!(code, EXIT_CONFIG, "{err}");
    }
}
