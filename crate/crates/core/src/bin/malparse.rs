use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use malparse::service::{serve, AnalyzeResponse, AppState};
use malparse::{analyze_text, evaluate, load_corpus, render_report, AnalyzeOptions, EvalOptions, Grammar, Outcome};

/// Error-tolerant parser for learner English.
#[derive(Parser)]
#[command(name = "malparse", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Grammar file; defaults to the bundled demonstration grammar.
    #[arg(long, global = true, env = "ICICLE_GRAMMAR")]
    grammar: Option<PathBuf>,
    /// Rule weight overrides, one `rule-id weight` pair per line.
    #[arg(long, global = true)]
    weights: Option<PathBuf>,
    /// Edge budget per sentence.
    #[arg(long, global = true)]
    max_edges: Option<usize>,
    /// Omitted non-determiner constituents allowed per sentence.
    #[arg(long, global = true)]
    max_other_omissions: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Diagnose a text.
    Parse {
        #[arg(long, conflicts_with = "file", required_unless_present = "file")]
        text: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        /// Print the reports as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Evaluate an annotated corpus.
    Eval {
        #[arg(long)]
        corpus: PathBuf,
        /// File of sentences to leave out, one per line.
        #[arg(long)]
        exclude: Option<PathBuf>,
        /// Count a match only when found codes equal the expected codes.
        #[arg(long)]
        exact: bool,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
    },
}

const USAGE: u8 = 1;
const GRAMMAR: u8 = 2;
const CORPUS: u8 = 3;

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("malparse: {msg}");
    ExitCode::from(code)
}

fn load_grammar(common: &Common) -> Result<(String, Grammar), String> {
    let (id, mut grammar) = match &common.grammar {
        Some(path) => {
            let src = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let g = Grammar::load(&src).map_err(|e| format!("{}: {e}", path.display()))?;
            let id = path.file_stem().map_or_else(|| "grammar".into(), |s| s.to_string_lossy().into_owned());
            (id, g)
        }
        None => ("demo".to_owned(), Grammar::demo()),
    };
    if let Some(path) = &common.weights {
        let src = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        grammar.apply_overrides(&src).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok((id, grammar))
}

fn options(common: &Common) -> AnalyzeOptions {
    let mut o = AnalyzeOptions::default();
    if let Some(n) = common.max_edges {
        o.budget.max_edges = n;
    }
    if let Some(n) = common.max_other_omissions {
        o.policy.max_other_omissions = n;
    }
    o
}

fn print_reports(text: &str, grammar: &Grammar, opts: &AnalyzeOptions, json: bool) {
    let sentences = analyze_text(text, grammar, opts);
    if json {
        let body = serde_json::to_string_pretty(&AnalyzeResponse { sentences }).expect("serializable");
        println!("{body}");
        return;
    }
    for r in &sentences {
        let status = match &r.outcome {
            Outcome::ErrorFree => "ok",
            Outcome::ErrorsFound(_) => "errors",
            Outcome::NoParse if r.budget_exceeded => "no parse (budget exceeded)",
            Outcome::NoParse => "no parse",
        };
        println!("[{status}] {}", r.text);
        if let Outcome::ErrorsFound(errs) = &r.outcome {
            for e in errs {
                println!("  {} {:?} {}: {}", e.code.as_str(), e.char_span, e.highlighted(text), e.message);
            }
        }
        if let Some(tree) = &r.chosen_parse {
            println!("  {tree}");
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let opts = options(&cli.common);

    match cli.command {
        Command::Parse { text, file, json } => {
            let text = match (text, file) {
                (Some(t), _) => t,
                (None, Some(p)) => match std::fs::read_to_string(&p) {
                    Ok(t) => t,
                    Err(e) => return fail(USAGE, format!("{}: {e}", p.display())),
                },
                (None, None) => return fail(USAGE, "one of --text or --file is required"),
            };
            let (_, grammar) = match load_grammar(&cli.common) {
                Ok(g) => g,
                Err(e) => return fail(GRAMMAR, e),
            };
            print_reports(&text, &grammar, &opts, json);
        }
        Command::Eval { corpus, exclude, exact, json } => {
            let (_, grammar) = match load_grammar(&cli.common) {
                Ok(g) => g,
                Err(e) => return fail(GRAMMAR, e),
            };
            let items = match std::fs::read_to_string(&corpus) {
                Ok(src) => match load_corpus(&src) {
                    Ok(items) => items,
                    Err(e) => return fail(CORPUS, format!("{}: {e}", corpus.display())),
                },
                Err(e) => return fail(CORPUS, format!("{}: {e}", corpus.display())),
            };
            let exclude = match exclude.map(std::fs::read_to_string).transpose() {
                Ok(list) => list
                    .unwrap_or_default()
                    .lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty() && !l.starts_with('#'))
                    .map(str::to_owned)
                    .collect(),
                Err(e) => return fail(USAGE, e),
            };
            let report = evaluate(&items, &grammar, &EvalOptions { analyze: opts, exclude, exact });
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            } else {
                print!("{}", render_report(&report));
            }
        }
        Command::Serve { port, host } => {
            let id = cli
                .common
                .grammar
                .as_ref()
                .and_then(|p| p.file_stem())
                .map_or_else(|| "demo".to_owned(), |s| s.to_string_lossy().into_owned());
            let state = AppState::pending(id, opts);
            let loader = state.clone();
            let common = cli.common;
            std::thread::spawn(move || match load_grammar(&common) {
                Ok((_, g)) => {
                    loader.set_grammar(g);
                }
                Err(e) => {
                    eprintln!("malparse: {e}");
                    std::process::exit(GRAMMAR.into());
                }
            });
            let runtime = match tokio::runtime::Runtime::new() {
                Ok(rt) => rt,
                Err(e) => return fail(USAGE, e),
            };
            let addr = SocketAddr::new(host, port);
            eprintln!("malparse: listening on http://{addr}");
            if let Err(e) = runtime.block_on(serve(addr, state)) {
                return fail(USAGE, e);
            }
        }
    }
    ExitCode::SUCCESS
}
