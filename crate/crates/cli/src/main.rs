use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use arcgraph::adjoint::{iterated_delta_right, tight_core};
use arcgraph::digraph::{find_homomorphism, walk_count};
use arcgraph::poset::{dedekind, ideal_lattice, iterated_ideal_lattice, level_sizes, width_with_limit};
use arcgraph::verify::{corpus_from_json, max_tt, named_corpus, render_table, run_corpus};
use arcgraph::{
    generate, iterated_arc_graph, optimal_coloring, BTable, Budget, Digraph, Error, GraphKind, Poset,
};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "arcgraph", version, about = "Iterated arc graphs, ideal lattices and exact chromatic numbers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Element limit for lattice enumeration
    #[arg(long, global = true)]
    budget: Option<usize>,
}

#[derive(Args)]
struct Output {
    /// Write the result here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Table {
    /// b-table cache file
    #[arg(long, default_value = "btable.json")]
    table: PathBuf,
    /// Recompute every value and cross-check it against the cache
    #[arg(long)]
    no_cache: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a digraph from a named family
    Gen {
        #[arg(long)]
        kind: GraphKind,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Iterated arc graph of a digraph
    Delta {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Optimal colouring of a loop-free digraph
    Chi {
        input: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Find a homomorphism between two digraphs (prints null if none)
    Hom {
        source: PathBuf,
        target: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Maximum antichain and chain partition of a poset file or of I^k(K̄_n)
    Width {
        input: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Ideal lattice of a poset file, or I^k(K̄_n)
    Ideals {
        input: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Print level sizes instead of the lattice
        #[arg(long)]
        levels: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Width b(n,k) of I^k(K̄_n), cached in the b-table
    Bnk {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        table: Table,
    },
    /// Number of antichains of subsets of an n-set
    Dedekind {
        #[arg(long)]
        n: usize,
    },
    /// Right adjoint of the arc graph construction, applied k times
    Deltar {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Tight core of the right adjoint
    Core {
        input: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Compare exact chromatic numbers with the width formula over a corpus
    Verify {
        /// Iterate counts, e.g. --k 1 --k 2
        #[arg(long, default_values_t = [1usize])]
        k: Vec<usize>,
        /// Corpus name (default, standard, small) or a corpus JSON file
        #[arg(long, default_value = "default")]
        corpus: String,
        #[command(flatten)]
        table: Table,
        /// JSON lines report
        #[command(flatten)]
        out: Output,
    },
    /// Largest transitive tournament whose k-th arc graph is n-colourable
    MaxTt {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Largest tournament to try
        #[arg(long)]
        cap: Option<usize>,
        /// Allow arc graphs up to 2000 vertices instead of 200
        #[arg(long)]
        extended: bool,
    },
    /// Graphviz source for a digraph file, a poset file, or the Hasse diagram of I^k(K̄_n)
    ExportDot {
        input: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Draw symmetric arc pairs as one undirected edge
        #[arg(long)]
        merge_symmetric: bool,
        #[command(flatten)]
        out: Output,
    },
}

enum Failure {
    Usage(String),
    Lib(Error),
    Disagreement(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn read_digraph(path: &Path) -> Result<Digraph, Failure> {
    Ok(Digraph::from_json(&read_input(path)?)?)
}

fn read_poset(path: &Path) -> Result<Poset, Failure> {
    Ok(Poset::from_json(&read_input(path)?)?)
}

fn emit(out: &Output, text: &str) -> Result<(), Failure> {
    match &out.out {
        Some(path) => fs::write(path, format!("{text}\n"))?,
        None => {
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "{text}")?;
        }
    }
    Ok(())
}

/// A poset given either as a file or as `--n` and `--k`.
fn poset_source(
    input: &Option<PathBuf>,
    n: Option<usize>,
    k: Option<usize>,
    budget: &Budget,
) -> Result<Poset, Failure> {
    match (input, n, k) {
        (Some(path), None, None) => read_poset(path),
        (None, Some(n), Some(k)) => Ok(iterated_ideal_lattice(n, k, budget.elements)?),
        _ => Err(Failure::Usage(
            "give either a poset file or both --n and --k".into(),
        )),
    }
}

fn open_table(t: &Table) -> Result<BTable, Failure> {
    Ok(BTable::load(&t.table)?.recompute_all(t.no_cache))
}

fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    (0..r).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut budget = Budget::default();
    if let Some(b) = cli.budget {
        budget.elements = b;
    }
    match cli.command {
        Command::Gen { kind, n, out } => emit(&out, &generate(kind, n)?.to_json()),
        Command::Delta { input, k, out } => {
            let g = read_digraph(&input)?;
            let size = walk_count(&g, k + 1);
            if size > budget.elements {
                return Err(Error::SizeBudgetExceeded {
                    what: "iterated arc graph",
                    reached: size,
                    limit: budget.elements,
                }
                .into());
            }
            emit(&out, &iterated_arc_graph(&g, k).to_json())
        }
        Command::Chi { input, out } => {
            let c = optimal_coloring(&read_digraph(&input)?)?;
            emit(&out, &c.to_json())
        }
        Command::Hom {
            source,
            target,
            out,
        } => {
            let map = find_homomorphism(&read_digraph(&source)?, &read_digraph(&target)?);
            let text = serde_json::to_string(&map).map_err(Error::from)?;
            emit(&out, &text)
        }
        Command::Width { input, n, k, out } => {
            let p = poset_source(&input, n, k, &budget)?;
            let cert = width_with_limit(&p, budget.width_elements)?;
            emit(&out, &serde_json::to_string(&cert).map_err(Error::from)?)
        }
        Command::Ideals {
            input,
            n,
            k,
            levels,
            out,
        } => {
            let lattice = match input {
                Some(path) => ideal_lattice(&read_poset(&path)?, budget.elements)?,
                None => poset_source(&None, n, k, &budget)?,
            };
            if levels {
                emit(&out, &serde_json::to_string(&level_sizes(&lattice)?).map_err(Error::from)?)
            } else {
                emit(&out, &lattice.to_json()?)
            }
        }
        Command::Bnk { n, k, table } => {
            let t = open_table(&table)?;
            let b = t.b(n, k, &budget)?;
            t.save()?;
            println!("{b}");
            Ok(())
        }
        Command::Dedekind { n } => {
            println!("{}", dedekind(n, budget.elements)?);
            Ok(())
        }
        Command::Deltar { input, k, out } => {
            let g = iterated_delta_right(&read_digraph(&input)?, k, &budget)?;
            emit(&out, &g.to_json())
        }
        Command::Core { input, out } => {
            let tc = tight_core(&read_digraph(&input)?, &budget)?;
            emit(&out, &tc.core.to_json())
        }
        Command::Verify {
            k,
            corpus,
            table,
            out,
        } => {
            if k.contains(&0) {
                return Err(Failure::Usage("--k values must be at least 1".into()));
            }
            let instances = match named_corpus(&corpus) {
                Some(c) => c,
                None => corpus_from_json(&read_input(Path::new(&corpus))?)?,
            };
            let t = open_table(&table)?;
            let reports = run_corpus(&instances, &k, &t, &budget);
            t.save()?;
            print!("{}", render_table(&reports));
            if let Some(path) = &out.out {
                let lines: String = reports.iter().map(|r| r.to_json_line() + "\n").collect();
                fs::write(path, lines)?;
            }
            let disagree = reports.iter().filter(|r| !r.agreement && !r.budget_exceeded).count();
            let over = reports.iter().filter(|r| r.budget_exceeded).count();
            if disagree > 0 {
                return Err(Failure::Disagreement(format!("{disagree} report(s) disagree")));
            }
            if over > 0 {
                return Err(Error::SizeBudgetExceeded {
                    what: "verification instances",
                    reached: over,
                    limit: 0,
                }
                .into());
            }
            Ok(())
        }
        Command::MaxTt {
            n,
            k,
            cap,
            extended,
        } => {
            let vertex_limit = if extended { 2000 } else { 200 };
            // walks of k+1 vertices in TT_m are (k+1)-subsets
            let auto = (1..)
                .take_while(|&m| binomial(m, k + 1) <= vertex_limit)
                .last()
                .unwrap_or(1);
            let cap = cap.unwrap_or(auto);
            if binomial(cap, k + 1) > vertex_limit {
                return Err(Failure::Usage(format!(
                    "--cap {cap} exceeds {vertex_limit} arc graph vertices; pass --extended or lower it"
                )));
            }
            let m = max_tt(n, k, cap, &budget)?;
            println!("{m}");
            if m == cap {
                eprintln!("note: the cap {cap} was reached");
            }
            Ok(())
        }
        Command::ExportDot {
            input,
            n,
            k,
            merge_symmetric,
            out,
        } => {
            let dot = match (&input, n, k) {
                (Some(path), None, None) => {
                    let text = read_input(path)?;
                    let value: serde_json::Value =
                        serde_json::from_str(&text).map_err(Error::from)?;
                    if value.get("arcs").is_some() {
                        Digraph::from_json(&text)?.to_dot(merge_symmetric)
                    } else {
                        Poset::from_json(&text)?.hasse_dot()?
                    }
                }
                _ => poset_source(&input, n, k, &budget)?.hasse_dot()?,
            };
            emit(&out, dot.trim_end())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Disagreement(msg)) => {
            eprintln!("arcgraph: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("arcgraph: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("arcgraph: {e}");
            ExitCode::from(if e.is_budget() { 3 } else { 2 })
        }
    }
}
