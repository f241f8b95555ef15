use std::io::{self, BufRead, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use closure_lab::examples;
use closure_lab::session::{CliError, Options, Session};

#[derive(Parser)]
#[command(name = "closure-lab", version, about = "Explore closure operations on graded modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct EvalArgs {
    /// Degree bound for bad-relation searches.
    #[arg(long, default_value_t = 12)]
    deg_bound: i64,
    /// Seed for sampled ideal families.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl EvalArgs {
    fn options(&self) -> Options {
        Options {
            deg_bound: self.deg_bound,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a script and report every statement.
    Run {
        script: String,
        /// Print the JSON report instead of text.
        #[arg(long)]
        json: bool,
        /// Also write the JSON report to this file.
        #[arg(long)]
        out: Option<String>,
        #[command(flatten)]
        eval: EvalArgs,
    },
    /// Read statements interactively. `:save FILE`, `:load FILE` and `:quit` are commands.
    Repl {
        #[command(flatten)]
        eval: EvalArgs,
    },
    /// Run the built-in worked examples and compare against their known outcomes.
    #[command(alias = "verify-paper")]
    VerifyExamples {
        /// Print each example's full transcript.
        #[arg(long)]
        verbose: bool,
        #[command(flatten)]
        eval: EvalArgs,
    },
}

const EXIT_FAILED_CHECK: u8 = 1;
const EXIT_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { script, json, out, eval } => run(&script, json, out.as_deref(), eval.options()),
        Command::Repl { eval } => repl(eval.options()),
        Command::VerifyExamples { verbose, eval } => verify(verbose, &eval.options()),
    }
}

fn run(path: &str, json: bool, out: Option<&str>, options: Options) -> ExitCode {
    let src = match std::fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("closure-lab: cannot read {path}: {e}");
            return ExitCode::from(EXIT_ERROR);
        }
    };
    let mut session = Session::new(options);
    let result = session.run(&src);
    let report = session.report();
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        print!("{}", session.render_text());
    }
    if let Some(out) = out {
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        if let Err(e) = std::fs::write(out, text + "\n") {
            eprintln!("closure-lab: cannot write {out}: {e}");
            return ExitCode::from(EXIT_ERROR);
        }
    }
    match result {
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(EXIT_ERROR)
        }
        Ok(()) if session.all_passed() => ExitCode::SUCCESS,
        Ok(()) => ExitCode::from(EXIT_FAILED_CHECK),
    }
}

fn repl(options: Options) -> ExitCode {
    let mut session = Session::new(options.clone());
    let mut buffer = String::new();
    let stdin = io::stdin();
    let prompt = |cont: bool| {
        print!("{}", if cont { "... " } else { "> " });
        let _ = io::stdout().flush();
    };
    prompt(false);
    for line in stdin.lock().lines() {
        let Ok(line) = line else { break };
        let trimmed = line.trim();
        if buffer.is_empty() && trimmed.starts_with(':') {
            let (cmd, arg) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
            match (cmd, arg.trim()) {
                (":quit" | ":q", _) => return ExitCode::SUCCESS,
                (":save", path) if !path.is_empty() => match session.save(path) {
                    Ok(()) => println!("saved to {path}"),
                    Err(e) => eprintln!("{e}"),
                },
                (":load", path) if !path.is_empty() => match Session::load(path, options.clone()) {
                    Ok(s) => {
                        session = s;
                        println!("loaded {path} (digest {})", session.digest());
                    }
                    Err(e) => eprintln!("{e}"),
                },
                _ => eprintln!("commands: :save FILE, :load FILE, :quit"),
            }
            prompt(false);
            continue;
        }
        buffer.push_str(&line);
        buffer.push('\n');
        if !trimmed.ends_with(';') {
            prompt(!buffer.trim().is_empty());
            continue;
        }
        let before = session.log().len();
        let result = session.run(&buffer);
        for e in &session.log()[before..] {
            println!("{}", e.outcome.text);
        }
        if let Err(e) = result {
            eprintln!("{e}");
        }
        buffer.clear();
        prompt(false);
    }
    ExitCode::SUCCESS
}

fn verify(verbose: bool, options: &Options) -> ExitCode {
    let mut ok = true;
    for ex in examples::all() {
        match examples::run(&ex, options) {
            Ok(res) => {
                ok &= res.passed;
                println!(
                    "{:<13} {}  {} ({} checks)",
                    res.name,
                    if res.passed { "PASS" } else { "FAIL" },
                    ex.about,
                    res.verdicts.len()
                );
                if !res.passed {
                    println!("    expected {:?}, got {:?}", ex.expected, res.verdicts);
                }
                if verbose {
                    for line in res.session.render_text().lines() {
                        println!("    {line}");
                    }
                }
            }
            Err(e) => {
                ok = false;
                report_error(ex.name, &e);
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILED_CHECK)
    }
}

fn report_error(name: &str, e: &CliError) {
    println!("{name:<13} ERROR");
    for line in e.to_string().lines() {
        println!("    {line}");
    }
}
