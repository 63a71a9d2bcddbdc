//! `nashadj`: command-line front end.
//!
//! Exit status is 0 for definite answers, 2 for unknown or inconclusive
//! ones and 1 for errors.  The effective configuration is printed to stderr
//! before any output.

mod input;
mod render;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nashadj::atlas::{
    build_ffp_graph, builtin_catalog, builtin_reference, load_catalog, parse_reference, validate_catalog, GraphOptions,
};
use nashadj::nashcrit::{nash_verdict, NashStatus};
use nashadj::resolver::{resolve_family, resolve_with, ResolveOptions};
use nashadj::valorder::{
    decide_ffp_adjacency, decide_ffp_adjacency_within, enumerate_dominated, val_leq, val_leq_by, Criterion, EnumLimits,
    TopologicalType,
};
use serde_json::Value;

const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Parser, Debug)]
#[command(
    name = "nashadj",
    version,
    about = "Valuative domination, adjacencies and Nash obstructions for plane curve types"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Number of generic parameter values sampled by `family`.
    #[arg(long, global = true, default_value_t = 3)]
    samples: usize,
    /// Largest degree of the number fields used while resolving.
    #[arg(long, global = true, default_value_t = 16)]
    max_ext_degree: usize,
    /// Cap on the chain length explored by `enum-dominated`.
    #[arg(long, global = true)]
    max_vertices: Option<usize>,
    /// Do not print the configuration banner.
    #[arg(long, short, global = true)]
    quiet: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CriterionArg {
    AllCurves,
    AllValuations,
    MinimalModelValuations,
    MinimalModelCurves,
}

impl From<CriterionArg> for Criterion {
    fn from(c: CriterionArg) -> Self {
        match c {
            CriterionArg::AllCurves => Criterion::AllCurves,
            CriterionArg::AllValuations => Criterion::AllValuations,
            CriterionArg::MinimalModelValuations => Criterion::MinimalModelValuations,
            CriterionArg::MinimalModelCurves => Criterion::MinimalModelCurves,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Intersection data of a proximity tree.
    Tree {
        /// JSON file (tree, tree with divisor, pair or branch bundle); `-` for stdin.
        file: Option<String>,
        /// Build the tree of one branch from its characteristic sequence instead.
        #[arg(long = "char", value_delimiter = ',', conflicts_with = "file")]
        char_seq: Option<Vec<u64>>,
    },
    /// Resolve a plane curve given by an equation in x and y.
    Resolve {
        /// Polynomial expression; read from stdin when absent or `-`.
        expr: Option<String>,
    },
    /// Compare the special fibre of a family in s with its generic fibre.
    Family {
        /// Polynomial expression in s, x and y; read from stdin when absent or `-`.
        expr: Option<String>,
    },
    /// Decide ν_E ≤ ν_F for a pair.
    Valcmp {
        /// Pair JSON file; `-` for stdin.
        #[arg(long)]
        pair: String,
        #[arg(long, value_enum, default_value = "minimal-model-curves")]
        criterion: CriterionArg,
    },
    /// List the prime divisors dominated by a divisor F.
    EnumDominated {
        /// JSON file (tree with divisor, pair or branch bundle); `-` for stdin.
        file: Option<String>,
        /// Take F at the end of the branch with this characteristic sequence.
        #[arg(long = "char", value_delimiter = ',', conflicts_with = "file")]
        char_seq: Option<Vec<u64>>,
    },
    /// Decide whether the special type deforms to the generic one fixing free points.
    Ffp {
        /// Catalog name or equation of the special singularity F.
        special: String,
        /// Catalog name or equation of the generic singularity E.
        generic: String,
        /// Complexity bound of the search; defaults to the larger complexity.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Nash-adjacency verdict for a pair of prime divisors.
    Nash {
        /// Pair JSON file; `-` for stdin.
        #[arg(long)]
        pair: String,
    },
    /// Catalog-wide adjacency graphs.
    Atlas {
        #[command(subcommand)]
        command: AtlasCommand,
    },
}

#[derive(Subcommand, Debug)]
enum AtlasCommand {
    /// Decide the classical adjacencies between catalog entries.
    Build {
        #[arg(long, default_value_t = 16)]
        max_mu: i64,
        /// Also search for adjacencies missing from the reference.
        #[arg(long)]
        discover: bool,
        /// Keep only edges not implied by longer paths.
        #[arg(long)]
        reduce: bool,
        /// Catalog file replacing the built-in one.
        #[arg(long)]
        catalog: Option<String>,
        /// Classical reference file replacing the built-in one.
        #[arg(long)]
        reference: Option<String>,
    },
}

enum Answer {
    Definite,
    Unknown,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Tree { .. } => "tree",
            Command::Resolve { .. } => "resolve",
            Command::Family { .. } => "family",
            Command::Valcmp { .. } => "valcmp",
            Command::EnumDominated { .. } => "enum-dominated",
            Command::Ffp { .. } => "ffp",
            Command::Nash { .. } => "nash",
            Command::Atlas { .. } => "atlas build",
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::Resolve { .. } | Command::Family { .. } => Format::Json,
            Command::Atlas { .. } => Format::Dot,
            _ => Format::Text,
        }
    }

    fn formats(&self) -> &'static [Format] {
        match self {
            Command::Tree { .. } | Command::Resolve { .. } | Command::Atlas { .. } => {
                &[Format::Json, Format::Dot, Format::Text]
            }
            Command::Ffp { .. } => &[Format::Json, Format::Dot, Format::Text],
            _ => &[Format::Json, Format::Text],
        }
    }
}

fn banner(cli: &Cli, format: Format) -> String {
    let g = &cli.global;
    format!(
        "# nashadj {} | command={} | format={} | seed={} | samples={} | max-ext-degree={} | max-vertices={}",
        env!("CARGO_PKG_VERSION"),
        cli.command.name(),
        format!("{format:?}").to_lowercase(),
        g.seed,
        g.samples,
        g.max_ext_degree,
        g.max_vertices.map_or("none".to_string(), |m| m.to_string()),
    )
}

struct Out {
    format: Format,
    text: String,
}

impl Out {
    fn emit(&mut self, json: impl FnOnce() -> Value, dot: impl FnOnce() -> String, text: impl FnOnce() -> String) {
        self.text = match self.format {
            Format::Json => format!("{}\n", serde_json::to_string_pretty(&json()).expect("JSON serializes")),
            Format::Dot => dot(),
            Format::Text => text(),
        };
    }
}

fn no_dot() -> String {
    unreachable!("format checked before dispatch")
}

fn type_of(arg: &str, opts: &ResolveOptions) -> Result<TopologicalType, String> {
    let expr = match builtin_catalog().into_iter().find(|e| e.name == arg) {
        Some(e) => e.expr,
        None => arg.to_string(),
    };
    let f = input::curve(&expr)?;
    Ok(resolve_with(&f, opts)
        .map_err(|e| format!("{arg}: {e}"))?
        .topological_type())
}

fn run(cli: &Cli, out: &mut Out) -> Result<Answer, String> {
    let g = &cli.global;
    let opts = ResolveOptions {
        max_ext_degree: g.max_ext_degree,
    };
    match &cli.command {
        Command::Tree { file, char_seq } => {
            let (tree, d) = match char_seq {
                Some(c) => input::branch(c).map(|(t, d)| (t, Some(d)))?,
                None => input::marked_tree(&input::document(file.as_deref())?)?,
            };
            out.emit(
                || render::tree_json(&tree, d.as_ref()),
                || tree.to_dot(d.as_ref()),
                || render::tree_text(&tree, d.as_ref()),
            );
            Ok(Answer::Definite)
        }
        Command::Resolve { expr } => {
            let expr = input::expression(expr.as_deref())?;
            let f = input::curve(&expr)?;
            let r = resolve_with(&f, &opts).map_err(|e| e.to_string())?;
            out.emit(|| r.to_json(), || r.to_dot(), || render::resolution_text(&r));
            Ok(Answer::Definite)
        }
        Command::Family { expr } => {
            let expr = input::expression(expr.as_deref())?;
            let f = input::curve(&expr)?;
            let rep = resolve_family(&f, g.samples, g.seed, &opts).map_err(|e| e.to_string())?;
            out.emit(|| rep.to_json(), no_dot, || render::family_text(&rep));
            Ok(if rep.agreed() {
                Answer::Definite
            } else {
                Answer::Unknown
            })
        }
        Command::Valcmp { pair, criterion } => {
            let cfg = input::pair(&input::document(Some(pair))?)?;
            let v = if *criterion == CriterionArg::MinimalModelCurves {
                val_leq(&cfg)
            } else {
                val_leq_by(&cfg, (*criterion).into())
            }
            .map_err(|e| e.to_string())?;
            out.emit(
                || render::val_json(&cfg.tree, &v),
                no_dot,
                || {
                    format!(
                        "{}\n{}",
                        if v.holds { "HOLDS" } else { "FAILS" },
                        render::val_table(&cfg.tree, &v)
                    )
                },
            );
            Ok(Answer::Definite)
        }
        Command::EnumDominated { file, char_seq } => {
            let (tree, d) = match char_seq {
                Some(c) => input::branch(c)?,
                None => match input::marked_tree(&input::document(file.as_deref())?)? {
                    (t, Some(d)) => (t, d),
                    (_, None) => return Err("the input carries no divisor".into()),
                },
            };
            let en = enumerate_dominated(
                &tree,
                &d,
                EnumLimits {
                    max_vertices: g.max_vertices,
                },
            )
            .map_err(|e| e.to_string())?;
            out.emit(|| render::enum_json(&en), no_dot, || render::enum_text(&en));
            Ok(if en.partial { Answer::Unknown } else { Answer::Definite })
        }
        Command::Ffp {
            special,
            generic,
            bound,
        } => {
            let f = type_of(special, &opts)?;
            let e = type_of(generic, &opts)?;
            let v = match bound {
                Some(b) => decide_ffp_adjacency_within(&e, &f, *b),
                None => decide_ffp_adjacency(&e, &f),
            };
            let table = match &v.witness {
                Some(w) => Some(render::val_table(&w.tree, &val_leq(w).map_err(|e| e.to_string())?)),
                None => None,
            };
            out.emit(
                || render::ffp_json(&v),
                || match &v.witness {
                    Some(w) => w.tree.to_dot(Some(&w.right)),
                    None => "graph dual {\n}\n".to_string(),
                },
                || render::ffp_text(&v, table.clone()),
            );
            Ok(Answer::Definite)
        }
        Command::Nash { pair } => {
            let cfg = input::pair(&input::document(Some(pair))?)?;
            let v = nash_verdict(&cfg).map_err(|e| e.to_string())?;
            out.emit(|| render::nash_json(&v, &cfg), no_dot, || render::nash_text(&v, &cfg));
            Ok(if v.status == NashStatus::Unknown {
                Answer::Unknown
            } else {
                Answer::Definite
            })
        }
        Command::Atlas {
            command:
                AtlasCommand::Build {
                    max_mu,
                    discover,
                    reduce,
                    catalog,
                    reference,
                },
        } => {
            let entries = match catalog {
                Some(p) => load_catalog(p.as_ref()).map_err(|e| format!("{p}: {e}"))?,
                None => builtin_catalog(),
            };
            let refs = match reference {
                Some(p) => {
                    let text = std::fs::read_to_string(p).map_err(|e| format!("cannot read {p}: {e}"))?;
                    parse_reference(&text).map_err(|e| format!("{p}: {e}"))?
                }
                None => builtin_reference(),
            };
            let report = validate_catalog(&entries, &opts);
            let graph = build_ffp_graph(
                &report,
                &refs,
                &GraphOptions {
                    max_mu: *max_mu,
                    discover: *discover,
                },
            );
            let shown = if *reduce {
                graph.transitive_reduction()
            } else {
                graph.clone()
            };
            out.emit(|| shown.to_json(), || shown.to_dot(), || render::atlas_text(&graph));
            Ok(Answer::Definite)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let format = cli.global.format.unwrap_or_else(|| cli.command.default_format());
    if !cli.global.quiet {
        eprintln!("{}", banner(&cli, format));
    }
    if !cli.command.formats().contains(&format) {
        eprintln!(
            "error: {} does not support --format {}",
            cli.command.name(),
            format!("{format:?}").to_lowercase()
        );
        return ExitCode::from(1);
    }
    let mut out = Out {
        format,
        text: String::new(),
    };
    match run(&cli, &mut out) {
        Ok(answer) => {
            print!("{}", out.text);
            ExitCode::from(match answer {
                Answer::Definite => 0,
                Answer::Unknown => 2,
            })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
