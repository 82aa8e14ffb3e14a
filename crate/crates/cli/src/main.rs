use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use polycomplex::io::{from_json, to_dot, to_json};
use polycomplex::morphism::automorphism_search;
use polycomplex::suite::{run_suite, NEGATIVE_CONTROL, SUITES};
use polycomplex::symmetry::{automorphism_group, is_flag_transitive};
use polycomplex::twist::{
    generalized_power, merged_diagram, twist_cyclic, verify_subcomplex_theorem, verify_twist_skel,
};
use polycomplex::{catalog, power, regular, validate, Error, IncidenceComplex, Limits};

#[derive(Parser)]
#[command(name = "polycomplex", version, about = "Incidence complexes, power complexes and twisting")]
struct Cli {
    #[command(flatten)]
    caps: Caps,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Caps {
    /// Largest group to enumerate.
    #[arg(long, global = true, env = "POLYCOMPLEX_CAP_GROUP", default_value_t = Limits::default().group_order)]
    cap_group: usize,
    /// Most cosets Todd–Coxeter may define.
    #[arg(long, global = true, env = "POLYCOMPLEX_CAP_COSETS", default_value_t = Limits::default().cosets)]
    cap_cosets: usize,
    /// Most vertices of a power complex.
    #[arg(long, global = true, env = "POLYCOMPLEX_CAP_VERTICES", default_value_t = Limits::default().vertices)]
    cap_vertices: usize,
    /// Node budget of isomorphism and automorphism searches.
    #[arg(long, global = true, env = "POLYCOMPLEX_CAP_SEARCH", default_value_t = Limits::default().search_nodes)]
    cap_search: u64,
    /// Most flags walked by flag-level checks.
    #[arg(long, global = true, env = "POLYCOMPLEX_CAP_FLAGS", default_value_t = Limits::default().flags)]
    cap_flags: usize,
}

impl Caps {
    fn limits(&self) -> Limits {
        Limits {
            group_order: self.cap_group,
            cosets: self.cap_cosets,
            vertices: self.cap_vertices,
            search_nodes: self.cap_search,
            flags: self.cap_flags,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Args)]
struct Output {
    /// Write the complex here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// List or build catalog complexes.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
    /// Report rank, f-vector, c-vector, flags, regularity and group order.
    Analyze {
        /// Catalog name or path to a JSON complex.
        complex: String,
    },
    /// Build the power complex n^K.
    Power {
        #[arg(long)]
        n: usize,
        /// Catalog name or path to a JSON complex.
        #[arg(long)]
        base: String,
        #[command(flatten)]
        output: Output,
    },
    /// Twisting constructions.
    Twist {
        #[command(subcommand)]
        command: TwistCommand,
    },
    /// Group computations.
    Group {
        #[command(subcommand)]
        command: GroupCommand,
    },
    /// Run checks; exits 1 when any fails.
    Verify {
        #[command(subcommand)]
        command: VerifyCommand,
    },
    /// Write a complex as JSON or as a DOT Hasse diagram.
    Export {
        complex: String,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    List,
    Build {
        name: String,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum TwistCommand {
    /// n^K rebuilt from C_n wreath Aut(K).
    Cyclic {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        base: String,
        #[command(flatten)]
        output: Output,
    },
    /// The generalized power complex L^K for L = {q_1,...}.
    Lk {
        /// Comma-separated Schläfli symbol; empty for a 2-edge.
        #[arg(long, allow_hyphen_values = true)]
        schlafli: String,
        #[arg(long)]
        base: String,
        /// Coset cap for this run (overrides --cap-cosets).
        #[arg(long)]
        cap: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// skel_{d+j}(L^K) against L^{skel_j(K)}.
    VerifySkel {
        #[arg(long)]
        schlafli: String,
        #[arg(long)]
        base: String,
        #[arg(long)]
        j: i32,
    },
    /// Faces and co-faces of L^K against smaller generalized powers.
    VerifyFaces {
        #[arg(long)]
        schlafli: String,
        #[arg(long)]
        base: String,
        #[arg(long)]
        i: usize,
    },
    /// The merged Coxeter diagram as DOT.
    Diagram {
        #[arg(long)]
        schlafli: String,
        #[arg(long)]
        base: String,
    },
}

#[derive(Subcommand)]
enum GroupCommand {
    /// Automorphism group order and generators (on face ids).
    Aut { complex: String },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Distinguished subgroups, their conditions, and the rebuilt complex.
    System { complex: String },
    /// One named suite.
    Suite { name: String },
    /// Every suite except the negative control.
    All,
}

/// Reads a complex from a JSON file, or builds it from the catalog.
fn load(spec: &str) -> Result<IncidenceComplex> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {spec}"))?;
        return Ok(from_json(&text)?);
    }
    Ok(catalog::build_named(spec)?)
}

fn parse_schlafli(text: &str) -> Result<Vec<u32>> {
    let trimmed = text.trim().trim_start_matches('{').trim_end_matches('}');
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(',')
        .map(|s| s.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad Schläfli entry {s:?}")).into()))
        .collect()
}

fn emit(complex: &IncidenceComplex, output: &Output) -> Result<()> {
    let text = match output.format {
        Format::Json => to_json(complex),
        Format::Dot => to_dot(complex),
    };
    match &output.out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            print_json(&json!({"written": path, "f_vector": complex.f_vector()}));
        }
        None => write_stdout(&text),
    }
    Ok(())
}

fn print_json(value: &Value) {
    write_stdout(&serde_json::to_string_pretty(value).expect("values serialize"));
}

/// A closed pipe (`| head`) is not an error.
fn write_stdout(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    if !text.ends_with('\n') {
        let _ = out.write_all(b"\n");
    }
}

/// A cap error becomes the string `unknown(cap)`.
fn capped(result: polycomplex::Result<Value>, cap: impl std::fmt::Display) -> Result<Value> {
    match result {
        Ok(v) => Ok(v),
        Err(e) if e.is_cap() => Ok(json!(format!("unknown({cap})"))),
        Err(e) => Err(e.into()),
    }
}

fn analyze(c: &IncidenceComplex, limits: &Limits) -> Result<Value> {
    let report = validate(c);
    let flags = c.flag_count();
    let aut_order =
        capped(automorphism_search(c, limits.search_nodes).map(|s| json!(s.order.to_string())), limits.search_nodes)?;
    let regular = if flags > limits.flags as u128 {
        json!(format!("unknown({})", limits.flags))
    } else {
        capped(
            automorphism_group(c, limits.search_nodes, limits.group_order).map(|g| json!(is_flag_transitive(&g, c))),
            limits.search_nodes,
        )?
    };
    Ok(json!({
        "rank": c.rank(),
        "f_vector": c.f_vector(),
        "c_vector": report.c_vector,
        "flags": flags.to_string(),
        "valid": report.is_valid(),
        "vertex_describable": c.is_vertex_describable(),
        "regular": regular,
        "aut_order": aut_order,
    }))
}

/// Exit status 0 on pass, 1 on a failed check.
fn verdict(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let limits = cli.caps.limits();
    match cli.command {
        Command::Catalog { command: CatalogCommand::List } => {
            print_json(&serde_json::to_value(catalog::entries())?);
        }
        Command::Catalog { command: CatalogCommand::Build { name, output } } => {
            emit(&catalog::build_named(&name)?, &output)?;
        }
        Command::Analyze { complex } => print_json(&analyze(&load(&complex)?, &limits)?),
        Command::Power { n, base, output } => {
            let p = power::power_complex(n, &load(&base)?, limits.vertices)?;
            emit(p.complex(), &output)?;
        }
        Command::Twist { command } => match command {
            TwistCommand::Cyclic { n, base, output } => {
                let t = twist_cyclic(n, &load(&base)?, None, &limits)?;
                eprintln!("group order {}", t.group_order());
                emit(&t.complex, &output)?;
            }
            TwistCommand::Lk { schlafli, base, cap, output } => {
                let limits = Limits { cosets: cap.unwrap_or(limits.cosets), ..limits };
                let t = generalized_power(&parse_schlafli(&schlafli)?, &load(&base)?, None, &limits)?;
                eprintln!("group order {} = {} * {}", t.group_order(), t.kernel_order, t.base_order);
                emit(&t.complex, &output)?;
            }
            TwistCommand::VerifySkel { schlafli, base, j } => {
                let ok = verify_twist_skel(&parse_schlafli(&schlafli)?, &load(&base)?, j, &limits)?;
                print_json(&json!({"isomorphic": ok}));
                return Ok(verdict(ok));
            }
            TwistCommand::VerifyFaces { schlafli, base, i } => {
                let r = verify_subcomplex_theorem(&parse_schlafli(&schlafli)?, &load(&base)?, i, &limits)?;
                print_json(&serde_json::to_value(&r)?);
                return Ok(verdict(r.passed()));
            }
            TwistCommand::Diagram { schlafli, base } => {
                print!("{}", merged_diagram(&parse_schlafli(&schlafli)?, &load(&base)?)?.to_dot());
            }
        },
        Command::Group { command: GroupCommand::Aut { complex } } => {
            let c = load(&complex)?;
            let found = automorphism_search(&c, limits.search_nodes)?;
            print_json(&json!({
                "degree": c.len(),
                "order": found.order.to_string(),
                "generators": found.generators,
                "search_nodes": found.nodes,
            }));
        }
        Command::Verify { command } => match command {
            VerifyCommand::System { complex } => {
                let r = regular::round_trip(&load(&complex)?, &limits)?;
                print_json(&serde_json::to_value(&r)?);
                return Ok(verdict(r.passed()));
            }
            VerifyCommand::Suite { name } => {
                if name != NEGATIVE_CONTROL && !SUITES.contains(&name.as_str()) {
                    return Err(Error::InvalidArgument(format!(
                        "unknown suite {name:?}; known: {}, {NEGATIVE_CONTROL}",
                        SUITES.join(", ")
                    ))
                    .into());
                }
                let r = run_suite(&name, &limits)?;
                print_json(&serde_json::to_value(&r)?);
                return Ok(verdict(r.passed));
            }
            VerifyCommand::All => {
                let mut reports = Vec::new();
                for name in SUITES {
                    reports.push(run_suite(name, &limits)?);
                }
                let passed = reports.iter().all(|r| r.passed);
                let summary: Vec<Value> =
                    reports.iter().map(|r| json!({"suite": r.suite, "passed": r.passed})).collect();
                print_json(&json!({"passed": passed, "suites": summary, "reports": reports}));
                return Ok(verdict(passed));
            }
        },
        Command::Export { complex, output } => emit(&load(&complex)?, &output)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(e) if e.is_cap() => 3,
        Some(Error::Parse(_) | Error::InvalidArgument(_) | Error::MalformedPoset(_)) => 2,
        Some(_) => 1,
        None => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
