//! `ucount`: exact counting of weighted 2-factors and perfect matchings in
//! planar graphs, gadget signature tables, and the 3-CNF reduction compiler.
//!
//! Exit codes: 0 success, 1 verification or golden-table mismatch, 2 input
//! error, 3 resource bound exceeded.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use ucount_core::cnf;
use ucount_core::cover::Budget;
use ucount_core::embed::Embedded;
use ucount_core::error::Error;
use ucount_core::fkt;
use ucount_core::gadget::{gadget_signature, SignatureFlavor, SignatureTable};
use ucount_core::gadgets::{golden_table, GadgetKind, Mode};
use ucount_core::io::{from_json, skew_from_json, to_json, GraphFile};
use ucount_core::num::format_rat;
use ucount_core::oracle;
use ucount_core::pfaffian;
use ucount_core::reduce;
use ucount_core::semipfaffian;

#[derive(Parser)]
#[command(name = "ucount", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit machine-readable JSON reports.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Args, Clone)]
struct Bounds {
    /// Refuse exponential oracles above this vertex count (exit 3).
    #[arg(long, default_value_t = 64)]
    max_vertices: usize,
    /// Abort enumeration after this many seconds (exit 3).
    #[arg(long)]
    max_seconds: Option<u64>,
}

impl Bounds {
    fn budget(&self) -> Budget {
        match self.max_seconds {
            Some(s) => Budget::with_deadline(Instant::now() + Duration::from_secs(s)),
            None => Budget::none(),
        }
    }
    fn check_vertices(&self, n: usize) -> Result<(), Error> {
        if n > self.max_vertices {
            return Err(Error::ResourceBound(format!(
                "graph has {n} vertices, above --max-vertices {}",
                self.max_vertices
            )));
        }
        Ok(())
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Quantity {
    Udet,
    Uperm,
    Perfmatch,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Method {
    Oracle,
    Fkt,
    Semipfaffian,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FlavorArg {
    Perm,
    Det,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Det,
    Perm,
}

impl ModeArg {
    fn mode(self) -> Mode {
        match self {
            ModeArg::Det => Mode::Det,
            ModeArg::Perm => Mode::Perm,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute udet, uperm or PerfMatch of a graph file.
    Count {
        graph: PathBuf,
        #[arg(long, value_enum)]
        quantity: Quantity,
        #[arg(long, value_enum, default_value = "oracle")]
        method: Method,
        /// Run the oracle alongside a polynomial method and fail on mismatch.
        #[arg(long)]
        cross_check: bool,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Print (and optionally diff) a gadget's signature table.
    Signature {
        /// Gadget file; omit when using --builtin.
        gadget: Option<PathBuf>,
        /// One of: skew-crossover, iff, iff-multi, variable, clause,
        /// auxiliary, null-edge, degree4-vertex.
        #[arg(long)]
        builtin: Option<String>,
        #[arg(long, value_enum, default_value = "det")]
        mode: ModeArg,
        /// Signature flavor; defaults to the flavor the gadget's table is
        /// stated in.
        #[arg(long, value_enum)]
        flavor: Option<FlavorArg>,
        /// Golden table file to diff against (exit 1 on mismatch).
        #[arg(long)]
        golden: Option<PathBuf>,
        /// Diff against the built-in golden table (exit 1 on mismatch).
        #[arg(long)]
        golden_builtin: bool,
        /// Write the gadget (graph, stubs, base pairing) as JSON.
        #[arg(long)]
        emit_gadget: Option<PathBuf>,
    },
    /// Compile a 3-CNF DIMACS file into a planar weighted graph.
    Compile {
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Also run the cubicization (determinant mode only).
        #[arg(long)]
        cubicize: bool,
        #[arg(short, long)]
        output: PathBuf,
        /// Provenance sidecar path (default: OUTPUT with .provenance.json).
        #[arg(long)]
        provenance: Option<PathBuf>,
    },
    /// Count satisfying assignments of a 3-CNF DIMACS file by truth table.
    Satcount { input: PathBuf },
    /// Orient a graph (Pfaffian or semi-Pfaffian) and write the result.
    Orient {
        graph: PathBuf,
        #[arg(long, conflicts_with = "semi_pfaffian")]
        pfaffian: bool,
        #[arg(long)]
        semi_pfaffian: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Verify an orientation (exit 1 when the check fails).
    Verify {
        graph: PathBuf,
        #[arg(long, conflicts_with = "semi_pfaffian")]
        pfaffian: bool,
        #[arg(long)]
        semi_pfaffian: bool,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Tension of the even central cycles of an embedded cubic graph.
    Tension {
        graph: PathBuf,
        /// Scan every even central cycle (the default scans and summarizes).
        #[arg(long)]
        all_central: bool,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Pfaffian of a skew-symmetric rational matrix file.
    Pfaffian {
        matrix: PathBuf,
        /// Cross-check against the defining sum (dimension-bounded).
        #[arg(long)]
        by_definition: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let started = Instant::now();
    match run(&cli, started) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn configure_threads() {
    #[cfg(feature = "parallel")]
    if let Ok(v) = std::env::var("UCOUNT_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::ResourceBound(_)
        | Error::SearchSpaceTooLarge(_, _)
        | Error::DimensionTooLargeForOracle(_, _)
        | Error::TooManyVariables(_, _) => 3,
        _ => 2,
    }
}

fn read_file(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::BadFile(format!("{}: {e}", path.display())))
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|e| Error::BadFile(format!("{}: {e}", path.display())))
}

fn sha256(text: &str) -> String {
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    format!("{:x}", h.finalize())
}

fn load_embedded(path: &PathBuf) -> Result<(GraphFile, Embedded, String), Error> {
    let text = read_file(path)?;
    let file = from_json(&text)?;
    let emb = file.to_embedded()?;
    Ok((file, emb, sha256(&text)))
}

struct Report {
    fields: BTreeMap<&'static str, serde_json::Value>,
}

impl Report {
    fn new(command: &str) -> Self {
        let mut fields = BTreeMap::new();
        fields.insert("command", serde_json::json!(command));
        Report { fields }
    }
    fn set(&mut self, key: &'static str, v: impl Into<serde_json::Value>) {
        self.fields.insert(key, v.into());
    }
    fn finish(&mut self, cli: &Cli, started: Instant) {
        self.set("elapsed_ms", started.elapsed().as_millis() as u64);
        if cli.json {
            let map: serde_json::Map<String, serde_json::Value> = self
                .fields
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect();
            println!("{}", serde_json::to_string_pretty(&map).unwrap());
        } else {
            for (k, v) in &self.fields {
                if *k == "command" {
                    continue;
                }
                match v {
                    serde_json::Value::String(s) => println!("{k}: {s}"),
                    other => println!("{k}: {other}"),
                }
            }
        }
    }
}

fn run(cli: &Cli, started: Instant) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Count {
            graph,
            quantity,
            method,
            cross_check,
            bounds,
        } => cmd_count(cli, started, graph, *quantity, *method, *cross_check, bounds.clone()),
        Command::Signature {
            gadget,
            builtin,
            mode,
            flavor,
            golden,
            golden_builtin,
            emit_gadget,
        } => cmd_signature(
            cli,
            started,
            gadget.as_ref(),
            builtin.as_deref(),
            mode.mode(),
            *flavor,
            golden.as_ref(),
            *golden_builtin,
            emit_gadget.as_ref(),
        ),
        Command::Compile {
            input,
            mode,
            cubicize,
            output,
            provenance,
        } => cmd_compile(cli, started, input, mode.mode(), *cubicize, output, provenance),
        Command::Satcount { input } => {
            let phi = cnf::parse_dimacs(&read_file(input)?)?;
            let n = cnf::sat_count(&phi)?;
            let mut rep = Report::new("satcount");
            rep.set("input", input.display().to_string());
            rep.set("variables", phi.variable_count as u64);
            rep.set("clauses", phi.clause_count() as u64);
            rep.set("result", n.to_string());
            rep.finish(cli, started);
            Ok(ExitCode::SUCCESS)
        }
        Command::Orient {
            graph,
            pfaffian: pf,
            semi_pfaffian,
            output,
        } => cmd_orient(cli, started, graph, *pf, *semi_pfaffian, output),
        Command::Verify {
            graph,
            pfaffian: pf,
            semi_pfaffian,
            bounds,
        } => cmd_verify(cli, started, graph, *pf, *semi_pfaffian, bounds),
        Command::Tension {
            graph,
            all_central,
            bounds,
        } => cmd_tension(cli, started, graph, *all_central, bounds),
        Command::Pfaffian {
            matrix,
            by_definition,
        } => {
            let text = read_file(matrix)?;
            let m = skew_from_json(&text)?;
            let pf = pfaffian::pfaffian(&m);
            let mut rep = Report::new("pfaffian");
            rep.set("input", matrix.display().to_string());
            rep.set("input_sha256", sha256(&text));
            rep.set("result", format_rat(&pf));
            if *by_definition {
                let by_def = pfaffian::pfaffian_by_definition(&m)?;
                rep.set("by_definition", format_rat(&by_def));
                if by_def != pf {
                    rep.set("verification", "MISMATCH");
                    rep.finish(cli, started);
                    return Ok(ExitCode::from(1));
                }
                rep.set("verification", "pass");
            }
            rep.finish(cli, started);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_count(
    cli: &Cli,
    started: Instant,
    graph: &PathBuf,
    quantity: Quantity,
    method: Method,
    cross_check: bool,
    bounds: Bounds,
) -> Result<ExitCode, Error> {
    let text = read_file(graph)?;
    let file = from_json(&text)?;
    let g = &file.graph;
    let budget = bounds.budget();

    let compute = |method: Method| -> Result<ucount_core::Rat, Error> {
        match (method, quantity) {
            (Method::Oracle, Quantity::Udet) => {
                bounds.check_vertices(g.n_vertices())?;
                oracle::udet_bounded(g, budget)
            }
            (Method::Oracle, Quantity::Uperm) => {
                bounds.check_vertices(g.n_vertices())?;
                oracle::uperm_bounded(g, budget)
            }
            (Method::Oracle, Quantity::Perfmatch) => {
                bounds.check_vertices(g.n_vertices())?;
                oracle::perfmatch_bounded(g, budget)
            }
            (Method::Fkt, Quantity::Uperm) => {
                let emb = file.to_embedded()?;
                fkt::uperm_degree3_embedded(&emb)
            }
            (Method::Fkt, Quantity::Perfmatch) => {
                let emb = file.to_embedded()?;
                let og = fkt::pfaffian_orientation(&emb.graph, &emb.rotation)?;
                fkt::perfmatch_via_pfaffian(&og)
            }
            (Method::Semipfaffian, Quantity::Udet) => {
                let emb = file.to_embedded()?;
                semipfaffian::udet_cubic(&emb)
            }
            (Method::Fkt, Quantity::Udet) => Err(Error::BadFile(
                "the fkt method computes uperm or perfmatch, not udet".into(),
            )),
            (Method::Semipfaffian, _) => Err(Error::BadFile(
                "the semipfaffian method computes udet only".into(),
            )),
        }
    };

    let result = compute(method)?;
    let mut rep = Report::new("count");
    rep.set("input", graph.display().to_string());
    rep.set("input_sha256", sha256(&text));
    rep.set(
        "quantity",
        match quantity {
            Quantity::Udet => "udet",
            Quantity::Uperm => "uperm",
            Quantity::Perfmatch => "perfmatch",
        },
    );
    rep.set(
        "method",
        match method {
            Method::Oracle => "oracle",
            Method::Fkt => "fkt",
            Method::Semipfaffian => "semipfaffian",
        },
    );
    rep.set("result", format_rat(&result));
    if cross_check && method != Method::Oracle {
        let reference = compute(Method::Oracle)?;
        rep.set("oracle", format_rat(&reference));
        if reference != result {
            rep.set("cross_check", "MISMATCH");
            rep.finish(cli, started);
            return Ok(ExitCode::from(1));
        }
        rep.set("cross_check", "pass");
    }
    rep.finish(cli, started);
    Ok(ExitCode::SUCCESS)
}

fn table_to_json(t: &SignatureTable) -> serde_json::Value {
    let entries: Vec<serde_json::Value> = t
        .entries
        .iter()
        .map(|(k, v)| serde_json::json!({"subset": k, "value": format_rat(v)}))
        .collect();
    serde_json::json!({
        "flavor": match t.flavor {
            SignatureFlavor::Permanental => "permanental",
            SignatureFlavor::Determinantal => "determinantal",
        },
        "entries": entries,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_signature(
    cli: &Cli,
    started: Instant,
    gadget_path: Option<&PathBuf>,
    builtin: Option<&str>,
    mode: Mode,
    flavor: Option<FlavorArg>,
    golden: Option<&PathBuf>,
    golden_builtin: bool,
    emit: Option<&PathBuf>,
) -> Result<ExitCode, Error> {
    let (gadget, kind) = match (gadget_path, builtin) {
        (Some(p), None) => (from_json(&read_file(p)?)?.to_gadget(), None),
        (None, Some(name)) => {
            let kind = GadgetKind::parse(name)
                .ok_or_else(|| Error::BadFile(format!("unknown builtin gadget {name:?}")))?;
            (kind.make(mode), Some(kind))
        }
        _ => {
            return Err(Error::BadFile(
                "pass exactly one of a gadget file or --builtin".into(),
            ))
        }
    };
    let flavor = match (flavor, kind) {
        (Some(FlavorArg::Perm), _) => SignatureFlavor::Permanental,
        (Some(FlavorArg::Det), _) => SignatureFlavor::Determinantal,
        (None, Some(k)) => k.golden_flavor(mode),
        (None, None) => SignatureFlavor::Permanental,
    };
    if let Some(path) = emit {
        write_file(path, &to_json(&GraphFile::from_gadget(&gadget)))?;
    }
    let table = gadget_signature(&gadget, flavor)?;
    let mut rep = Report::new("signature");
    if let Some(k) = kind {
        rep.set("builtin", k.name());
        rep.set("mode", mode.name());
    }
    rep.set("flavor", match flavor {
        SignatureFlavor::Permanental => "permanental",
        SignatureFlavor::Determinantal => "determinantal",
    });
    rep.set("table", table_to_json(&table));
    if !cli.json {
        println!("signature table ({} cells):", table.entries.len());
        for (k, v) in &table.entries {
            let label = if k.is_empty() {
                "{}".to_string()
            } else {
                format!("{{{}}}", k.join(","))
            };
            println!("  {label} -> {}", format_rat(v));
        }
    }
    let expected = if golden_builtin {
        let k = kind.ok_or_else(|| {
            Error::BadFile("--golden-builtin requires --builtin".into())
        })?;
        Some(golden_table(k, mode))
    } else if let Some(path) = golden {
        let v: serde_json::Value = serde_json::from_str(&read_file(path)?)
            .map_err(|e| Error::BadFile(format!("golden file: {e}")))?;
        let mut map = BTreeMap::new();
        for ent in v["entries"]
            .as_array()
            .ok_or_else(|| Error::BadFile("golden file lacks entries".into()))?
        {
            let subset: Vec<String> = ent["subset"]
                .as_array()
                .ok_or_else(|| Error::BadFile("golden entry lacks subset".into()))?
                .iter()
                .map(|s| s.as_str().unwrap_or_default().to_string())
                .collect();
            let mut key = subset;
            key.sort();
            let val = ucount_core::num::parse_rat(
                ent["value"]
                    .as_str()
                    .ok_or_else(|| Error::BadFile("golden entry lacks value".into()))?,
            )?;
            map.insert(key, val);
        }
        Some(map)
    } else {
        None
    };
    if let Some(expected) = expected {
        if table.entries != expected {
            rep.set("golden", "MISMATCH");
            rep.finish(cli, started);
            return Ok(ExitCode::from(1));
        }
        rep.set("golden", "pass");
    }
    rep.finish(cli, started);
    Ok(ExitCode::SUCCESS)
}

fn cmd_compile(
    cli: &Cli,
    started: Instant,
    input: &PathBuf,
    mode: Mode,
    do_cubicize: bool,
    output: &PathBuf,
    provenance: &Option<PathBuf>,
) -> Result<ExitCode, Error> {
    let text = read_file(input)?;
    let phi = cnf::parse_dimacs(&text)?;
    let mut compiled = reduce::compile(&phi, mode)?;
    if do_cubicize {
        if mode != Mode::Det {
            return Err(Error::BadFile(
                "--cubicize applies to determinant-mode reductions".into(),
            ));
        }
        let scaled = reduce::cubicize(&compiled.embedded)?;
        compiled = reduce::CompiledReduction {
            scale: compiled.scale * scaled.scale.clone(),
            ..scaled
        };
    }
    let out_text = to_json(&GraphFile::from_embedded(&compiled.embedded));
    write_file(output, &out_text)?;
    let prov_path = provenance.clone().unwrap_or_else(|| {
        let mut p = output.clone();
        p.set_extension("provenance.json");
        p
    });
    write_file(&prov_path, &reduce::provenance_json(&compiled))?;
    let mut rep = Report::new("compile");
    rep.set("input", input.display().to_string());
    rep.set("input_sha256", sha256(&text));
    rep.set("mode", mode.name());
    rep.set("variables", phi.variable_count as u64);
    rep.set("clauses", phi.clause_count() as u64);
    rep.set("vertices", compiled.embedded.graph.n_vertices() as u64);
    rep.set("edges", compiled.embedded.graph.n_edges() as u64);
    rep.set("scale", format_rat(&compiled.scale));
    rep.set("output", output.display().to_string());
    rep.set("output_sha256", sha256(&out_text));
    rep.set("provenance", prov_path.display().to_string());
    rep.finish(cli, started);
    Ok(ExitCode::SUCCESS)
}

fn cmd_orient(
    cli: &Cli,
    started: Instant,
    graph: &PathBuf,
    pf: bool,
    semi: bool,
    output: &PathBuf,
) -> Result<ExitCode, Error> {
    if pf == semi {
        return Err(Error::BadFile(
            "pass exactly one of --pfaffian or --semi-pfaffian".into(),
        ));
    }
    let (_, emb, digest) = load_embedded(graph)?;
    let oriented = if pf {
        fkt::pfaffian_orientation(&emb.graph, &emb.rotation)?.embedded
    } else {
        semipfaffian::find_semi_pfaffian(&emb)?
    };
    let out_text = to_json(&GraphFile::from_embedded(&oriented));
    write_file(output, &out_text)?;
    let mut rep = Report::new("orient");
    rep.set("input", graph.display().to_string());
    rep.set("input_sha256", digest);
    rep.set("kind", if pf { "pfaffian" } else { "semi-pfaffian" });
    rep.set("output", output.display().to_string());
    rep.finish(cli, started);
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    cli: &Cli,
    started: Instant,
    graph: &PathBuf,
    pf: bool,
    semi: bool,
    bounds: &Bounds,
) -> Result<ExitCode, Error> {
    if pf == semi {
        return Err(Error::BadFile(
            "pass exactly one of --pfaffian or --semi-pfaffian".into(),
        ));
    }
    let (_, emb, digest) = load_embedded(graph)?;
    bounds.check_vertices(emb.graph.n_vertices())?;
    let violation = if pf {
        fkt::verify_pfaffian(&fkt::OrientedPlanarGraph {
            embedded: emb.clone(),
        })
    } else {
        semipfaffian::verify_semi_pfaffian(&emb)?
    };
    let mut rep = Report::new("verify");
    rep.set("input", graph.display().to_string());
    rep.set("input_sha256", digest);
    rep.set("kind", if pf { "pfaffian" } else { "semi-pfaffian" });
    match violation {
        Some(c) => {
            rep.set("verification", "FAIL");
            rep.set("witness_cycle_length", c.len() as u64);
            rep.set(
                "witness_vertices",
                serde_json::json!(c.vertices.iter().map(|v| v.0).collect::<Vec<_>>()),
            );
            rep.finish(cli, started);
            Ok(ExitCode::from(1))
        }
        None => {
            rep.set("verification", "pass");
            rep.finish(cli, started);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_tension(
    cli: &Cli,
    started: Instant,
    graph: &PathBuf,
    all_central: bool,
    bounds: &Bounds,
) -> Result<ExitCode, Error> {
    let (_, emb, digest) = load_embedded(graph)?;
    bounds.check_vertices(emb.graph.n_vertices())?;
    let mut rep = Report::new("tension");
    rep.set("input", graph.display().to_string());
    rep.set("input_sha256", digest);
    if all_central {
        let mut rows = Vec::new();
        let mut max_tension = 0usize;
        for c in oracle::enumerate_central_cycles(&emb.graph) {
            if c.len() % 2 != 0 {
                continue;
            }
            let r = semipfaffian::tension(&emb, &c)?;
            max_tension = max_tension.max(r.tension);
            rows.push(serde_json::json!({
                "length": c.len(),
                "vertices": c.vertices.iter().map(|v| v.0).collect::<Vec<_>>(),
                "tension": r.tension,
            }));
            if !cli.json {
                println!(
                    "cycle len {} [{}] tension {}",
                    c.len(),
                    c.vertices
                        .iter()
                        .map(|v| v.0.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                    r.tension
                );
            }
        }
        rep.set("cycles", serde_json::json!(rows));
        rep.set("max_tension", max_tension as u64);
        rep.set("without_tension", max_tension == 0);
    } else {
        let witness = semipfaffian::is_without_tension(&emb)?;
        match witness {
            None => rep.set("without_tension", true),
            Some(r) => {
                rep.set("without_tension", false);
                rep.set("witness_cycle_length", r.cycle.len() as u64);
                rep.set("witness_tension", r.tension as u64);
            }
        }
    }
    rep.finish(cli, started);
    Ok(ExitCode::SUCCESS)
}
