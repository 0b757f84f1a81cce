use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use stree_cli::{parse_program, run_program, CliError};
use stree_core::automata::{
    bool_complement, bool_intersect, bool_union, complete, determinize, embed_cta, embed_fa,
    embed_fa_vertical, parse_fa, parse_fsta, parse_ncfta, run_accept, to_pure_states, trace_run,
    write_fsta, Fsta,
};
use stree_core::grammar::{automaton_to_grammar, generate, grammar_to_automaton, parse_grammar, write_grammar};
use stree_core::rste::{parse_rste_with, Binding};
use stree_core::term::{parse_term_document, term_encode};
use stree_core::{parse_tree, vertical_encode, StringTree};

/// String trees, their automata, grammars and expressions.
#[derive(Parser)]
#[command(name = "stree", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// A tree given inline, with `-f FILE`, or on standard input.
#[derive(Args)]
struct TreeInput {
    /// Tree text such as `<a<b>>`
    tree: Option<String>,
    /// Read the tree from a file
    #[arg(short = 'f', long = "file", conflicts_with = "tree")]
    file: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a tree and print it in canonical form
    Parse(TreeInput),
    /// Move every label symbol in front of the node's children
    Reduce(TreeInput),
    /// Exit 0 if the automaton accepts the tree, 1 otherwise
    Accept {
        automaton: String,
        #[command(flatten)]
        input: TreeInput,
    },
    /// Print one accepting run, leftmost leaf first
    Trace {
        automaton: String,
        #[command(flatten)]
        input: TreeInput,
        /// Maximum number of moves
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
    },
    /// Subset construction (purifies first)
    Determinize { automaton: String },
    /// Replace symbols used as states by twin states
    Purify { automaton: String },
    /// Add a sink state to a deterministic automaton
    Complete { automaton: String },
    Union { first: String, second: String },
    Intersect { first: String, second: String },
    Complement { automaton: String },
    /// Automaton for single-node trees whose label a string automaton accepts
    EmbedFa { fa: String },
    /// Automaton for vertical encodings of a string automaton's language
    EmbedFaVertical { fa: String },
    /// Automaton for encodings of terms accepted by a ranked tree automaton
    EmbedCta { ncfta: String },
    /// Grammar to automaton
    G2a { grammar: String },
    /// Automaton to grammar
    A2g { automaton: String },
    /// List grammar members by size
    Generate {
        grammar: String,
        #[arg(long, default_value_t = 6)]
        max_nodes: usize,
        #[arg(long, default_value_t = 100)]
        max_count: usize,
    },
    /// Match a whole tree against an expression and print the groups
    Match {
        expression: String,
        #[command(flatten)]
        input: TreeInput,
        /// Expression variables, e.g. `X,Y`
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
    },
    /// Run a rule file on a tree and print the final `out`
    Transform {
        rules: String,
        #[command(flatten)]
        input: TreeInput,
    },
    /// Vertical encoding of a string
    EncodeOmega { string: String },
    /// String-tree encoding of a ranked term such as `+(1,2)`
    EncodeTau {
        term: Option<String>,
        #[arg(short = 'f', long = "file", conflicts_with = "term")]
        file: Option<String>,
    },
}

fn read_file(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })
}

fn read_stdin() -> Result<String, CliError> {
    let mut text = String::new();
    io::stdin()
        .read_to_string(&mut text)
        .map_err(|source| CliError::Io {
            path: "<stdin>".into(),
            source,
        })?;
    Ok(text)
}

fn text_or_file(inline: &Option<String>, file: &Option<String>) -> Result<String, CliError> {
    match (inline, file) {
        (Some(t), _) => Ok(t.clone()),
        (None, Some(path)) => read_file(path),
        (None, None) => read_stdin(),
    }
}

impl TreeInput {
    fn read(&self) -> Result<StringTree, CliError> {
        let text = text_or_file(&self.tree, &self.file)?;
        let text = if self.tree.is_some() {
            text.as_str()
        } else {
            text.trim_end_matches(['\n', '\r'])
        };
        Ok(parse_tree(text)?)
    }
}

fn automaton(path: &str) -> Result<Fsta, CliError> {
    Ok(parse_fsta(&read_file(path)?)?)
}

fn show_binding(b: &Binding) -> String {
    match b {
        Binding::One(t) => t.to_string(),
        Binding::Many(ts) => {
            let parts: Vec<String> = ts.iter().map(StringTree::to_string).collect();
            format!("[{}]", parts.join(" "))
        }
    }
}

/// Runs one command, writing results to `out`. Returns the exit status
/// for verdict commands.
fn execute(command: Command, out: &mut impl Write) -> Result<u8, CliError> {
    let mut print = |s: &str| {
        out.write_all(s.as_bytes())
            .and_then(|_| if s.ends_with('\n') { Ok(()) } else { out.write_all(b"\n") })
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })
    };
    match command {
        Command::Parse(input) => print(&input.read()?.to_string())?,
        Command::Reduce(input) => print(&input.read()?.reduce().to_string())?,
        Command::Accept { automaton: path, input } => {
            let accepted = run_accept(&automaton(&path)?, &input.read()?)?;
            print(if accepted { "accepted" } else { "rejected" })?;
            return Ok(if accepted { 0 } else { 1 });
        }
        Command::Trace {
            automaton: path,
            input,
            limit,
        } => {
            let a = automaton(&path)?;
            let Some(trace) = trace_run(&a, &input.read()?, limit)? else {
                print("rejected")?;
                return Ok(1);
            };
            print(&format!("start {}", trace.start.render(&a)))?;
            for step in &trace.steps {
                print(&format!("{:<28} {}", step.kind.render(&a), step.tree.render(&a)))?;
            }
        }
        Command::Determinize { automaton: path } => {
            print(&write_fsta(&determinize(&to_pure_states(&automaton(&path)?))))?
        }
        Command::Purify { automaton: path } => {
            print(&write_fsta(&to_pure_states(&automaton(&path)?)))?
        }
        Command::Complete { automaton: path } => print(&write_fsta(&complete(&automaton(&path)?)?))?,
        Command::Union { first, second } => {
            print(&write_fsta(&bool_union(&automaton(&first)?, &automaton(&second)?)?))?
        }
        Command::Intersect { first, second } => {
            print(&write_fsta(&bool_intersect(&automaton(&first)?, &automaton(&second)?)?))?
        }
        Command::Complement { automaton: path } => {
            print(&write_fsta(&bool_complement(&automaton(&path)?)?))?
        }
        Command::EmbedFa { fa } => print(&write_fsta(&embed_fa(&parse_fa(&read_file(&fa)?)?)))?,
        Command::EmbedFaVertical { fa } => {
            print(&write_fsta(&embed_fa_vertical(&parse_fa(&read_file(&fa)?)?)))?
        }
        Command::EmbedCta { ncfta } => {
            print(&write_fsta(&embed_cta(&parse_ncfta(&read_file(&ncfta)?)?)))?
        }
        Command::G2a { grammar } => {
            print(&write_fsta(&grammar_to_automaton(&parse_grammar(&read_file(&grammar)?)?)))?
        }
        Command::A2g { automaton: path } => {
            print(&write_grammar(&automaton_to_grammar(&automaton(&path)?)))?
        }
        Command::Generate {
            grammar,
            max_nodes,
            max_count,
        } => {
            let g = parse_grammar(&read_file(&grammar)?)?;
            for t in generate(&g, max_nodes, max_count) {
                print(&t.to_string())?;
            }
        }
        Command::Match {
            expression,
            input,
            vars,
        } => {
            let mut declared = BTreeSet::new();
            for v in &vars {
                let mut cs = v.chars();
                match (cs.next(), cs.next()) {
                    (Some(c), None) => declared.insert(c),
                    _ => return Err(CliError::Usage(format!("variable `{v}` is not a single symbol"))),
                };
            }
            let pattern = parse_rste_with(&expression, &declared)?;
            let Some(b) = pattern.match_tree(&input.read()?)? else {
                print("no match")?;
                return Ok(1);
            };
            print(&format!("0: {}", b.whole))?;
            for (g, binding) in &b.groups {
                print(&format!("{g}: {}", show_binding(binding)))?;
            }
        }
        Command::Transform { rules, input } => {
            let program = parse_program(&read_file(&rules)?)?;
            print(&run_program(&program, &input.read()?)?.to_string())?;
        }
        Command::EncodeOmega { string } => print(&vertical_encode(&string).to_string())?,
        Command::EncodeTau { term, file } => {
            let (_, t) = parse_term_document(&text_or_file(&term, &file)?)?;
            print(&term_encode(&t).to_string())?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match execute(cli.command, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
