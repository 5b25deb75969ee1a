//! Command-line pipeline: `convert`, `annotate`, `dot`, and `rules check`.
//!
//! Exit codes: 0 success, 1 input/parse error, 2 validation error,
//! 3 rule-file error. Outputs are byte-identical for identical inputs and
//! configuration.

mod dot;
mod report;

pub use dot::render_dot;
pub use report::{build_report, render_report, ComponentReport, Explanation, Report};

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::ingest::{self, IngestError, SymbolClassMap};
use crate::library::{
    builtin_annotations, load_rule_dir, run_pipeline, AnnotationRuleFile, LibraryError,
    PipelineError, PipelineOutput,
};
use crate::model::{CircuitGraph, Vocabulary, WikidataLinkTable};
use crate::triple::{turtle, Namespaces};

/// Classified failure; the variant decides the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable input or unparseable text: exit 1.
    Input(String),
    /// A readable input that violates the model: exit 2.
    Validation(String),
    /// Broken rule files: exit 3.
    Rules(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Rules(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Validation(m) | CliError::Rules(m) => f.write_str(m),
        }
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        match e {
            IngestError::Sexpr(_) | IngestError::JsonSyntax(_) => CliError::Input(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<LibraryError> for CliError {
    fn from(e: LibraryError) -> Self {
        CliError::Rules(e.to_string())
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Rules(inner) => CliError::Rules(inner.to_string()),
            PipelineError::Library(inner) => CliError::Rules(inner.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "schemantic",
    version,
    about = "Annotate electrical schematics with component functions via triple-graph reasoning"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert schematics to their raw Turtle representation.
    Convert(ConvertArgs),
    /// Run preprocessing and annotation rules; emit enriched Turtle and a report.
    Annotate(AnnotateArgs),
    /// Render a schematic (optionally pre-annotated Turtle) as Graphviz DOT.
    Dot(ConvertArgs),
    /// Rule-file utilities.
    Rules(RulesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    Kicad,
    Json,
    Turtle,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Input files (.kicad_sch, .json, .ttl). With several inputs, output
    /// paths must be directories.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    from: Option<InputFormat>,
    /// Treat ingest warnings (floating pins, unknown lib_ids) as errors.
    #[arg(long)]
    strict: bool,
    /// Extra symbol-class map TSV (extends the built-in table).
    #[arg(long)]
    map: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ConvertArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Output file (single input) or directory (several inputs); stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AnnotateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Enriched Turtle output file or directory; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// JSON report output file or directory.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Additional annotation rule directories, applied in lexical file order
    /// after the built-in rules. Repeatable.
    #[arg(long = "rules")]
    rules: Vec<PathBuf>,
    /// Include rule names and bindings per derived function in the report.
    #[arg(long)]
    explain: bool,
    /// Keep preprocessing-derived connects triples in the Turtle output.
    #[arg(long)]
    keep_derived_connects: bool,
    /// Wikidata link table TSV (replaces the built-in table).
    #[arg(long)]
    links: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RulesArgs {
    #[command(subcommand)]
    command: RulesCommand,
}

#[derive(Debug, Subcommand)]
enum RulesCommand {
    /// Parse and validate rule files or directories (defaults to the
    /// built-in rule library).
    Check { paths: Vec<PathBuf> },
}

/// Entry point; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Convert(args) => cmd_convert(args),
        Command::Annotate(args) => cmd_annotate(args),
        Command::Dot(args) => cmd_dot(args),
        Command::Rules(args) => match args.command {
            RulesCommand::Check { paths } => cmd_rules_check(&paths),
        },
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn detect_format(path: &Path, forced: Option<InputFormat>) -> Result<InputFormat, CliError> {
    if let Some(f) = forced {
        return Ok(f);
    }
    match path.extension().and_then(|e| e.to_str()) {
        Some("kicad_sch") => Ok(InputFormat::Kicad),
        Some("json") => Ok(InputFormat::Json),
        Some("ttl") => Ok(InputFormat::Turtle),
        other => Err(CliError::Input(format!(
            "{}: cannot infer input format from extension {:?}; use --from",
            path.display(),
            other.unwrap_or("")
        ))),
    }
}

fn symbol_map(common: &CommonArgs, vocab: &mut Vocabulary) -> Result<SymbolClassMap, CliError> {
    match &common.map {
        None => Ok(SymbolClassMap::builtin()),
        Some(path) => {
            let mut map = SymbolClassMap::builtin();
            let extra = SymbolClassMap::parse_tsv(&read_input(path)?, vocab)
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            map.extend(extra);
            Ok(map)
        }
    }
}

struct LoadedGraph {
    graph: CircuitGraph,
    warnings: Vec<String>,
}

fn load_graph(
    path: &Path,
    format: InputFormat,
    map: &SymbolClassMap,
    vocab: &Vocabulary,
) -> Result<LoadedGraph, CliError> {
    let text = read_input(path)?;
    let prefix = |e: CliError| match e {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        CliError::Validation(m) => CliError::Validation(format!("{}: {m}", path.display())),
        CliError::Rules(m) => CliError::Rules(format!("{}: {m}", path.display())),
    };
    match format {
        InputFormat::Kicad => {
            let result = ingest::load_kicad(&text, map).map_err(|e| prefix(e.into()))?;
            Ok(LoadedGraph {
                graph: result.graph,
                warnings: result.warnings,
            })
        }
        InputFormat::Json => {
            let graph = ingest::load_json_graph(&text, vocab).map_err(|e| prefix(e.into()))?;
            Ok(LoadedGraph {
                graph,
                warnings: Vec::new(),
            })
        }
        InputFormat::Turtle => {
            let (store, _) = turtle::parse(&text)
                .map_err(|e| prefix(CliError::Input(e.to_string())))?;
            let (graph, warnings) = CircuitGraph::from_triples(&store, vocab)
                .map_err(|e| prefix(CliError::Validation(e.to_string())))?;
            Ok(LoadedGraph { graph, warnings })
        }
    }
}

fn enforce_strict(strict: bool, warnings: &[String]) -> Result<(), CliError> {
    if strict && !warnings.is_empty() {
        return Err(CliError::Validation(format!(
            "strict mode: {}",
            warnings.join("; ")
        )));
    }
    Ok(())
}

/// Resolves the output path for one input. With several inputs the target
/// must be a directory; single outputs may be plain files.
fn output_path(
    target: &Path,
    input: &Path,
    multiple: bool,
    extension: &str,
) -> Result<PathBuf, CliError> {
    if multiple || target.is_dir() {
        if !target.is_dir() {
            return Err(CliError::Input(format!(
                "{}: output must be an existing directory when processing several inputs",
                target.display()
            )));
        }
        let stem = input
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("output");
        Ok(target.join(format!("{stem}{extension}")))
    } else {
        Ok(target.to_path_buf())
    }
}

fn write_output(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn emit(target: &Option<PathBuf>, input: &Path, multiple: bool, extension: &str, content: &str) -> Result<(), CliError> {
    match target {
        Some(path) => write_output(&output_path(path, input, multiple, extension)?, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Runs `work` over all inputs (in parallel when there are several) and
/// returns the results in input order.
fn for_each_input<T: Send>(
    inputs: &[PathBuf],
    work: impl Fn(&Path) -> Result<T, CliError> + Sync,
) -> Result<Vec<T>, CliError> {
    if inputs.len() == 1 {
        return Ok(vec![work(&inputs[0])?]);
    }
    inputs
        .par_iter()
        .map(|p| work(p))
        .collect::<Result<Vec<_>, _>>()
}

fn cmd_convert(args: ConvertArgs) -> Result<(), CliError> {
    let mut vocab = Vocabulary::new();
    load_default_links(&mut vocab)?;
    let map = symbol_map(&args.common, &mut vocab)?;
    let vocab = vocab;
    let outputs = for_each_input(&args.common.inputs, |path| {
        let format = detect_format(path, args.common.from)?;
        let loaded = load_graph(path, format, &map, &vocab)?;
        enforce_strict(args.common.strict, &loaded.warnings)?;
        for w in &loaded.warnings {
            eprintln!("warning: {}: {w}", path.display());
        }
        Ok(turtle::serialize(
            &loaded.graph.to_triples(&vocab),
            &Namespaces::default(),
        ))
    })?;
    let multiple = args.common.inputs.len() > 1;
    for (input, content) in args.common.inputs.iter().zip(&outputs) {
        emit(&args.output, input, multiple, ".ttl", content)?;
    }
    Ok(())
}

fn load_default_links(vocab: &mut Vocabulary) -> Result<(), CliError> {
    let table = WikidataLinkTable::parse_tsv(include_str!("../../data/wikidata_links.tsv"))
        .map_err(|e| CliError::Validation(format!("bundled wikidata_links.tsv: {e}")))?;
    apply_links(vocab, &table)
}

fn apply_links(vocab: &mut Vocabulary, table: &WikidataLinkTable) -> Result<(), CliError> {
    for (class_iri, qid) in table.entries() {
        vocab
            .set_link(class_iri, qid)
            .map_err(|e| CliError::Validation(e.to_string()))?;
    }
    Ok(())
}

fn cmd_annotate(args: AnnotateArgs) -> Result<(), CliError> {
    let mut vocab = Vocabulary::new();
    match &args.links {
        None => load_default_links(&mut vocab)?,
        Some(path) => {
            let table = WikidataLinkTable::parse_tsv(&read_input(path)?)
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            apply_links(&mut vocab, &table)?;
        }
    }
    let map = symbol_map(&args.common, &mut vocab)?;
    let mut rule_files = builtin_annotations(&mut vocab);
    for dir in &args.rules {
        rule_files.extend(load_rule_dir(dir, &mut vocab)?);
    }
    let vocab = vocab;

    struct Outcome {
        turtle: String,
        report: String,
    }
    let outputs = for_each_input(&args.common.inputs, |path| {
        let format = detect_format(path, args.common.from)?;
        let loaded = load_graph(path, format, &map, &vocab)?;
        enforce_strict(args.common.strict, &loaded.warnings)?;
        let out: PipelineOutput = run_pipeline(&loaded.graph, &vocab, &rule_files)?;
        for w in loaded.warnings.iter().chain(&out.warnings) {
            eprintln!("warning: {}: {w}", path.display());
        }
        let store = if args.keep_derived_connects {
            out.enriched_with_derived_connects()
        } else {
            out.enriched.clone()
        };
        let report = build_report(&out, args.explain, &loaded.warnings);
        Ok(Outcome {
            turtle: turtle::serialize(&store, &Namespaces::default()),
            report: render_report(&report),
        })
    })?;

    let multiple = args.common.inputs.len() > 1;
    for (input, outcome) in args.common.inputs.iter().zip(&outputs) {
        emit(&args.output, input, multiple, ".ttl", &outcome.turtle)?;
        if let Some(report_target) = &args.report {
            write_output(
                &output_path(report_target, input, multiple, ".report.json")?,
                &outcome.report,
            )?;
        }
    }
    Ok(())
}

fn cmd_dot(args: ConvertArgs) -> Result<(), CliError> {
    let mut vocab = Vocabulary::new();
    load_default_links(&mut vocab)?;
    let map = symbol_map(&args.common, &mut vocab)?;
    let vocab = vocab;
    let outputs = for_each_input(&args.common.inputs, |path| {
        let format = detect_format(path, args.common.from)?;
        let loaded = load_graph(path, format, &map, &vocab)?;
        enforce_strict(args.common.strict, &loaded.warnings)?;
        Ok(render_dot(&loaded.graph))
    })?;
    let multiple = args.common.inputs.len() > 1;
    for (input, content) in args.common.inputs.iter().zip(&outputs) {
        emit(&args.output, input, multiple, ".dot", content)?;
    }
    Ok(())
}

fn cmd_rules_check(paths: &[PathBuf]) -> Result<(), CliError> {
    let mut vocab = Vocabulary::new();
    if paths.is_empty() {
        let pre = crate::library::builtin_preprocessing();
        for (name, set) in pre.stages() {
            println!("{name}: {} rules ok", set.len());
        }
        for file in builtin_annotations(&mut vocab) {
            println!(
                "{}: {} rules ok",
                file.file_name,
                file.rules.len() + file.guarded.len()
            );
        }
        return Ok(());
    }
    for path in paths {
        if path.is_dir() {
            for file in load_rule_dir(path, &mut vocab)? {
                println!(
                    "{}: {} rules ok",
                    file.file_name,
                    file.rules.len() + file.guarded.len()
                );
            }
        } else {
            let text = read_input(path)?;
            let file = AnnotationRuleFile::load(&path.display().to_string(), &text, &mut vocab)?;
            println!("{}: {} rules ok", file.file_name, file.rules.len());
        }
    }
    Ok(())
}
