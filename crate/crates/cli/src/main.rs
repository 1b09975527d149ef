use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use gkm_core::catalog::{catalog_entries, diagram_source, find_entry, run_entry};
use gkm_core::cohomology::{betti_numbers, ht_dimension, sym_dim};
use gkm_core::diagram::{parse_diagram_with, parse_homogeneous_with, validate, validate_homogeneous, Params};
use gkm_core::graph::{build_graph, emit_dot, emit_json, homogeneous_space_graph, GkmGraph};
use gkm_core::ratlin::format_rat;
use gkm_core::verdict::{gkm_verdict, CaseTag};
use gkm_core::{Error, RatMatrix};

/// GKM verdicts, graphs and Betti numbers for cohomogeneity one group diagrams.
#[derive(Parser, Debug)]
#[command(name = "gkm", version)]
struct Cli {
    /// Print coset representatives and generator words.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether the torus action is GKM.
    Check(InputArgs),
    /// Emit the GKM graph of a diagram.
    Graph {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Equivariant cohomology dimensions and Betti numbers.
    Betti {
        #[command(flatten)]
        input: InputArgs,
        /// Highest polynomial degree in the h_d table (default n + 2).
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Emit the GKM graph of an equal-rank homogeneous space G/K.
    Homogeneous {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// List or run the built-in catalog.
    Catalog(CatalogArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Input JSON file; a catalog diagram name is used when no such file exists.
    input: String,
    /// Parameter binding, e.g. `-P p=2`.
    #[arg(short = 'P', value_name = "NAME=VALUE", value_parser = parse_param)]
    params: Vec<(String, i64)>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Dot)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct CatalogArgs {
    #[arg(long)]
    list: bool,
    #[arg(long, value_name = "ID")]
    run: Option<String>,
    #[arg(long)]
    run_all: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Dot,
    Json,
}

fn parse_param(s: &str) -> Result<(String, i64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let v = v.trim().parse().map_err(|e| format!("parameter `{k}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

/// Failure with its exit status.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotGkm(_) | Error::FormalityViolation(_) => 1,
            _ => 2,
        };
        Fail(code, e.to_string())
    }
}

type CmdResult = Result<u8, Fail>;

fn read_input(name: &str) -> Result<String, Fail> {
    let path = Path::new(name);
    if path.exists() {
        return std::fs::read_to_string(path).map_err(|e| Fail(2, format!("{name}: {e}")));
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(name);
    diagram_source(stem)
        .or_else(|| diagram_source(&format!("{stem}_hom")))
        .map(str::to_string)
        .ok_or_else(|| Fail(2, format!("{name}: no such file or catalog diagram")))
}

fn params(input: &InputArgs) -> Params {
    input.params.iter().cloned().collect()
}

/// Writes through a temporary file in the same directory, then renames.
fn write_atomic(path: &Path, text: &str) -> Result<(), Fail> {
    let io = |e: std::io::Error| Fail(2, format!("{}: {e}", path.display()));
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| Fail(2, format!("{}: not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = std::fs::File::create(&tmp).and_then(|mut f| {
        f.write_all(text.as_bytes())?;
        f.sync_all()
    });
    if let Err(e) = result.and_then(|_| std::fs::rename(&tmp, path)) {
        let _ = std::fs::remove_file(&tmp);
        return Err(io(e));
    }
    Ok(())
}

fn emit(g: &GkmGraph, out: &OutputArgs) -> Result<(), Fail> {
    let text = match out.format {
        Format::Dot => emit_dot(g),
        Format::Json => emit_json(g),
    };
    match &out.output {
        Some(path) => {
            write_atomic(path, &text)?;
            println!("{}: {} vertices, {} edges", g.name, g.vertices.len(), g.edges.len());
        }
        None => {
            print!("{text}");
            eprintln!("{}: {} vertices, {} edges", g.name, g.vertices.len(), g.edges.len());
        }
    }
    Ok(())
}

fn matrix_string(m: &RatMatrix) -> String {
    let rows: Vec<String> = m.rows().iter().map(|r| format!("[{}]", r.iter().map(format_rat).collect::<Vec<_>>().join(","))).collect();
    format!("[{}]", rows.join(","))
}

fn print_vertices(g: &GkmGraph) {
    for v in &g.vertices {
        println!("  {} {:<12} {}", v.node_name(), v.word, matrix_string(&v.representative));
    }
}

fn cmd_check(input: &InputArgs, verbose: bool) -> CmdResult {
    let d = parse_diagram_with(&read_input(&input.input)?, &params(input))?;
    let rep = validate(&d);
    if !rep.all_passed() {
        return Err(Fail(2, format!("invalid diagram {}\n{rep}", d.name)));
    }
    let v = gkm_verdict(&d);
    let side = |full: bool| if full { "full rank" } else { "not full rank" };
    println!(
        "rank condition: {} (rank G = {}, rank H = {}, K+ {}, K- {})",
        if v.rank.holds { "holds" } else { "fails" },
        v.rank.rank_g,
        v.rank.rank_h,
        side(v.rank.kplus_full_rank),
        side(v.rank.kminus_full_rank)
    );
    if v.roots.holds {
        println!("root condition: holds");
    } else {
        let roots: Vec<String> = v.roots.offending.iter().map(ToString::to_string).collect();
        println!("root condition: fails; roots vanishing on t ∩ h: {}", roots.join(", "));
    }
    if v.swapped {
        println!("note: K+ and K- exchanged so that K+ has full rank");
    }
    if let Some(l) = &v.lambda {
        println!("slice weight: {l}");
    }
    if !v.is_gkm {
        println!("NOT GKM");
        return Ok(1);
    }
    println!("GKM ({}), χ={}", v.case_tag, v.euler.map_or("?".into(), |c| c.to_string()));
    if verbose {
        let g = build_graph(&d)?;
        println!("fixed points:");
        print_vertices(&g);
    }
    Ok(0)
}

fn cmd_graph(input: &InputArgs, out: &OutputArgs, verbose: bool) -> CmdResult {
    let d = parse_diagram_with(&read_input(&input.input)?, &params(input))?;
    let rep = validate(&d);
    if !rep.all_passed() {
        return Err(Fail(2, format!("invalid diagram {}\n{rep}", d.name)));
    }
    if gkm_verdict(&d).case_tag == CaseTag::NotGkm {
        return Err(Fail(1, format!("{}: the action is not GKM", d.name)));
    }
    let g = build_graph(&d)?;
    if verbose {
        eprintln!("fixed points:");
        for v in &g.vertices {
            eprintln!("  {} {:<12} {}", v.node_name(), v.word, matrix_string(&v.representative));
        }
    }
    emit(&g, out)?;
    Ok(0)
}

fn load_graph(input: &InputArgs) -> Result<GkmGraph, Fail> {
    let text = read_input(&input.input)?;
    let params = params(input);
    if let Ok(s) = parse_homogeneous_with(&text, &params) {
        return Ok(homogeneous_space_graph(&s)?);
    }
    let d = parse_diagram_with(&text, &params)?;
    let rep = validate(&d);
    if !rep.all_passed() {
        return Err(Fail(2, format!("invalid diagram {}\n{rep}", d.name)));
    }
    if gkm_verdict(&d).case_tag == CaseTag::NotGkm {
        return Err(Fail(1, format!("{}: the action is not GKM", d.name)));
    }
    Ok(build_graph(&d)?)
}

fn cmd_betti(input: &InputArgs, max_degree: Option<usize>, verbose: bool) -> CmdResult {
    let g = load_graph(input)?;
    let n = g.n.ok_or_else(|| Fail(2, format!("{}: dimensions are needed to fix the manifold dimension", g.name)))?;
    if verbose {
        println!("fixed points:");
        print_vertices(&g);
    }
    let b = betti_numbers(&g, n)?;
    let top = max_degree.unwrap_or(n + 2);
    let mut all = b.betti.clone();
    all.extend(&b.over_degree);
    println!("{:>3} {:>8} {:>8}", "d", "h_d", "b_2d");
    for d in 0..=top {
        let h = match b.ht_dims.get(d) {
            Some(&h) => h,
            None => ht_dimension(&g, d)?,
        };
        if all.len() <= d {
            let next = h as i64 - all.iter().enumerate().map(|(i, bi)| bi * sym_dim(d - i, g.rank) as i64).sum::<i64>();
            all.push(next);
        }
        println!("{d:>3} {h:>8} {:>8}", all[d]);
    }
    let chi = g.vertices.len();
    let rep = gkm_core::cohomology::poincare_check(&b, n, chi);
    print!("{rep}");
    let list: Vec<String> = b.betti.iter().map(ToString::to_string).collect();
    println!("b = {}", list.join(","));
    Ok(if rep.all_passed() { 0 } else { 1 })
}

fn cmd_homogeneous(input: &InputArgs, out: &OutputArgs, verbose: bool) -> CmdResult {
    let s = parse_homogeneous_with(&read_input(&input.input)?, &params(input))?;
    let rep = validate_homogeneous(&s);
    if !rep.all_passed() {
        return Err(Fail(2, format!("invalid homogeneous space {}\n{rep}", s.name)));
    }
    let g = homogeneous_space_graph(&s)?;
    if verbose {
        eprintln!("fixed points:");
        for v in &g.vertices {
            eprintln!("  {} {:<12} {}", v.node_name(), v.word, matrix_string(&v.representative));
        }
    }
    emit(&g, out)?;
    Ok(0)
}

fn cmd_catalog(args: &CatalogArgs, verbose: bool) -> CmdResult {
    if args.list {
        let entries = catalog_entries();
        for e in &entries {
            println!("{:<12} {:<12} {}", e.id, format!("{:?}", e.kind).to_lowercase(), e.description);
        }
        println!("{} entries", entries.len());
        return Ok(0);
    }
    if let Some(id) = &args.run {
        let e = find_entry(id).ok_or_else(|| Fail(2, format!("no catalog entry `{id}`")))?;
        let rep = run_entry(&e);
        print!("{rep}");
        let ok = rep.all_passed();
        println!("{}: {}", e.id, if ok { "pass" } else { "FAIL" });
        return Ok(if ok { 0 } else { 1 });
    }
    let start = Instant::now();
    let entries = catalog_entries();
    let reports: Vec<_> = entries.par_iter().map(|e| (e, run_entry(e))).collect();
    let mut failed = 0;
    for (e, rep) in &reports {
        let ok = rep.all_passed();
        if !ok {
            failed += 1;
        }
        println!("{:<12} {}", e.id, if ok { "pass" } else { "FAIL" });
        if verbose || !ok {
            for c in rep.failures() {
                println!("    {}: {}", c.name, c.message);
            }
        }
    }
    println!("{} of {} entries passed in {:.2?}", reports.len() - failed, reports.len(), start.elapsed());
    Ok(if failed == 0 { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let v = cli.verbose;
    let result = match &cli.command {
        Command::Check(input) => cmd_check(input, v),
        Command::Graph { input, output } => cmd_graph(input, output, v),
        Command::Betti { input, max_degree } => cmd_betti(input, *max_degree, v),
        Command::Homogeneous { input, output } => cmd_homogeneous(input, output, v),
        Command::Catalog(args) => cmd_catalog(args, v),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
