use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use og4_core::classifier::{
    is_basic, lemma_profiles, sweep, BasicSummary, ClassifierError, LemmaReport, Mode,
    SweepOptions, SweepReport,
};
use og4_core::families::{make_pair_with_cap, FamilyError, FamilyId, FamilyPair, VertexLabel};
use og4_core::group::{GroupShape, DEFAULT_ELEMENT_CAP};
use og4_core::quotient::{og4_facts, Og4Facts};

const SCHEMA: u32 = 1;

/// Groups up to this order are analysed exhaustively unless a mode is given.
const AUTO_EXHAUSTIVE_LIMIT: usize = 500;

#[derive(Parser)]
#[command(name = "og4", version, about = "Basic pairs of independent-cycle type on torus grids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Fast,
    Exhaustive,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Fast => Mode::Fast,
            ModeArg::Exhaustive => Mode::Exhaustive,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Graph6,
    Json,
}

#[derive(clap::Args)]
struct PairArgs {
    /// Family: row1 .. row5
    family: FamilyId,
    r: u32,
    s: u32,
}

#[derive(clap::Args)]
struct Tuning {
    /// Normal subgroups to examine; defaults to exhaustive for groups of
    /// order at most 500 and fast above.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Largest group order that may be materialised.
    #[arg(long, default_value_t = DEFAULT_ELEMENT_CAP)]
    max_group_order: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Build a family member and write its graph.
    Construct {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum, default_value = "graph6")]
        format: Format,
        /// Write here instead of stdout; graph6 output also gets a
        /// `.labels.json` sidecar with the vertex coordinates.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ELEMENT_CAP)]
        max_group_order: usize,
    },
    /// Decide basicness and report every examined normal quotient.
    Analyze {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Compare minimal normal subgroups and order-two normal subgroups
    /// with their stated forms.
    Lemmas {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Check every family cell with 3 <= r <= MAX_R, 3 <= s <= MAX_S.
    Sweep {
        max_r: u32,
        max_s: u32,
        #[command(flatten)]
        tuning: Tuning,
        /// Print a plain-text table instead of JSON.
        #[arg(long)]
        table: bool,
    },
    /// Print a family member to stdout.
    Export {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_ELEMENT_CAP)]
        max_group_order: usize,
    },
}

/// Exit 2 for bad input, 1 for checks that came out wrong.
enum Failure {
    Usage(String),
    Check(String),
}

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<ClassifierError> for Failure {
    fn from(e: ClassifierError) -> Self {
        match e {
            ClassifierError::Family(f) => f.into(),
            ClassifierError::Quotient(q) => Failure::Check(q.to_string()),
            ClassifierError::MixedOrientation => Failure::Check(e.to_string()),
        }
    }
}

struct Built {
    pair: FamilyPair,
    requested: [u32; 2],
    swapped: bool,
}

fn build(args: &PairArgs, cap: usize) -> Result<Built, Failure> {
    let (r, s, swapped) = args.family.resolve_parameters(args.r, args.s)?;
    let pair = make_pair_with_cap(args.family, r, s, cap)?;
    Ok(Built {
        pair,
        requested: [args.r, args.s],
        swapped,
    })
}

fn pick_mode(tuning: &Tuning, group_order: usize) -> Mode {
    tuning
        .mode
        .map(Mode::from)
        .unwrap_or_else(|| Mode::auto(group_order, AUTO_EXHAUSTIVE_LIMIT))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialise");
    text.push('\n');
    text
}

#[derive(Serialize)]
struct GeneratorOut {
    word: String,
    images: Vec<u32>,
}

#[derive(Serialize)]
struct NamedOut {
    generators: Vec<String>,
    order: usize,
    shape: GroupShape,
}

#[derive(Serialize)]
struct PairOut {
    schema: u32,
    family: FamilyId,
    r: u32,
    s: u32,
    requested: [u32; 2],
    swapped: bool,
    vertex_count: usize,
    labels: Vec<VertexLabel>,
    edges: Vec<[usize; 2]>,
    graph6: String,
    group_order: usize,
    generators: Vec<GeneratorOut>,
    named_subgroups: BTreeMap<String, NamedOut>,
}

fn pair_json(b: &Built) -> String {
    let p = &b.pair;
    to_json(&PairOut {
        schema: SCHEMA,
        family: p.family,
        r: p.r(),
        s: p.s(),
        requested: b.requested,
        swapped: b.swapped,
        vertex_count: p.graph().vertex_count(),
        labels: p.vertices().labels().to_vec(),
        edges: p.graph().edges().map(|(u, v)| [u, v]).collect(),
        graph6: p.graph().to_graph6(),
        group_order: p.group().order(),
        generators: p
            .grid
            .generators
            .iter()
            .map(|(w, g)| GeneratorOut {
                word: w.to_string(),
                images: g.images().to_vec(),
            })
            .collect(),
        named_subgroups: p
            .grid
            .named
            .iter()
            .map(|(name, n)| {
                let out = NamedOut {
                    generators: n.generators.iter().map(|w| w.to_string()).collect(),
                    order: n.subgroup.order(),
                    shape: n.shape,
                };
                (name.clone(), out)
            })
            .collect(),
    })
}

#[derive(Serialize)]
struct LabelsOut<'a> {
    schema: u32,
    family: FamilyId,
    r: u32,
    s: u32,
    labels: &'a [VertexLabel],
}

#[derive(Serialize)]
struct GraphInfo {
    vertices: usize,
    edges: usize,
}

#[derive(Serialize)]
struct AnalyzeOut {
    schema: u32,
    command: &'static str,
    requested: [u32; 2],
    swapped: bool,
    graph: GraphInfo,
    og4: Og4Facts,
    #[serde(flatten)]
    report: BasicSummary,
}

#[derive(Serialize)]
struct LemmasOut {
    schema: u32,
    command: &'static str,
    requested: [u32; 2],
    swapped: bool,
    all_hold: bool,
    #[serde(flatten)]
    report: LemmaReport,
}

#[derive(Serialize)]
struct SweepOut<'a> {
    schema: u32,
    command: &'static str,
    #[serde(flatten)]
    report: &'a SweepReport,
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Construct {
            pair,
            format,
            output,
            max_group_order,
        } => {
            let b = build(&pair, max_group_order)?;
            match format {
                Format::Json => write_out(output.as_ref(), &pair_json(&b)),
                Format::Graph6 => {
                    let text = format!("{}\n", b.pair.graph().to_graph6());
                    if let Some(path) = &output {
                        let mut sidecar = path.clone().into_os_string();
                        sidecar.push(".labels.json");
                        let labels = to_json(&LabelsOut {
                            schema: SCHEMA,
                            family: b.pair.family,
                            r: b.pair.r(),
                            s: b.pair.s(),
                            labels: b.pair.vertices().labels(),
                        });
                        write_out(Some(&PathBuf::from(sidecar)), &labels)?;
                    }
                    write_out(output.as_ref(), &text)
                }
            }
        }
        Command::Export {
            pair,
            format,
            max_group_order,
        } => {
            let b = build(&pair, max_group_order)?;
            let text = match format {
                Format::Json => pair_json(&b),
                Format::Graph6 => format!("{}\n", b.pair.graph().to_graph6()),
            };
            write_out(None, &text)
        }
        Command::Analyze { pair, tuning } => {
            let b = build(&pair, tuning.max_group_order)?;
            let mode = pick_mode(&tuning, b.pair.group().order());
            let report = is_basic(&b.pair, mode)?;
            let og4 = og4_facts(b.pair.graph(), b.pair.group())
                .map_err(|e| Failure::Check(e.to_string()))?;
            let out = AnalyzeOut {
                schema: SCHEMA,
                command: "analyze",
                requested: b.requested,
                swapped: b.swapped,
                graph: GraphInfo {
                    vertices: b.pair.graph().vertex_count(),
                    edges: b.pair.graph().edge_count(),
                },
                og4,
                report: report.summary(),
            };
            write_out(None, &to_json(&out))
        }
        Command::Lemmas { pair, tuning } => {
            let b = build(&pair, tuning.max_group_order)?;
            let mode = pick_mode(&tuning, b.pair.group().order());
            let report = lemma_profiles(&b.pair, mode)?;
            let all_hold = report.all_hold();
            let out = LemmasOut {
                schema: SCHEMA,
                command: "lemmas",
                requested: b.requested,
                swapped: b.swapped,
                all_hold,
                report,
            };
            write_out(None, &to_json(&out))?;
            if all_hold {
                Ok(())
            } else {
                Err(Failure::Check("a lemma check failed".into()))
            }
        }
        Command::Sweep {
            max_r,
            max_s,
            tuning,
            table,
        } => {
            if max_r < 3 || max_s < 3 {
                return Err(Failure::Usage("sweep bounds must be at least 3".into()));
            }
            let opts = SweepOptions {
                mode: tuning.mode.map(Mode::from),
                auto_threshold: AUTO_EXHAUSTIVE_LIMIT,
                element_cap: tuning.max_group_order,
            };
            let report = sweep(max_r, max_s, opts);
            let text = if table {
                report.render_table()
            } else {
                to_json(&SweepOut {
                    schema: SCHEMA,
                    command: "sweep",
                    report: &report,
                })
            };
            write_out(None, &text)?;
            if report.mismatches.is_empty() {
                Ok(())
            } else {
                Err(Failure::Check(format!("{} mismatches", report.mismatches.len())))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("og4: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("og4: {msg}");
            ExitCode::from(2)
        }
    }
}
