//! Command-line front end: parse one input, run one computation, emit one
//! machine-readable document.
//!
//! Documents are deterministic byte for byte: JSON objects are emitted with
//! sorted keys, tables in their natural grade order, and every number is
//! exact (coefficients and torsion orders print as decimal strings, since
//! they can exceed machine words). Exit codes separate failure classes:
//! 2 for unreadable or malformed input, 3 for a blown enumeration cap, 4
//! for a violated law or identity.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use knotkit::bicomplex::{self, LawReport};
use knotkit::diagram::{parse_pd, LinkDiagram};
use knotkit::nanoword::{parse_phrase, ParsedPhrase, StarPhrase};
use knotkit::{colored, kauffman, khovanov, Error, Laurent, Result};

/// Exact link invariants: bracket and Jones polynomials, Khovanov
/// homology, colored Jones via cabling, and the contraction bicomplex.
#[derive(Parser)]
#[command(name = "knotkit", version, max_term_width = 80)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kauffman bracket polynomial.
    Bracket(DiagramJob),
    /// Framed Jones polynomial (bracket, sign-normalized).
    Jones(DiagramJob),
    /// Khovanov homology table and its graded Euler characteristic.
    Khovanov(DiagramJob),
    /// Colored Jones polynomial at the given widths.
    ColoredJones(WidthsJob),
    /// Cable a diagram or a nanoword phrase.
    Cable(WidthsJob),
    /// Contraction bicomplex: differential laws, homology table, and the
    /// graded Euler identity against the colored Jones polynomial.
    Bicomplex(BicomplexJob),
    /// Run every cross-check on one input; nonzero exit on any failure.
    Verify(VerifyJob),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    /// Planar diagram code: `X(a,b,c,d)` and `U(n)` entries, or the JSON
    /// mirror `{"crossings": [[a,b,c,d], ...], "unknots": n}`.
    Pd,
    /// A nanoword phrase, e.g. `ABAB | A=a+ B=b-`.
    Nanoword,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct Io {
    /// Input file; `-` reads standard input.
    input: String,
    /// How to read the input.
    #[arg(long, value_enum, default_value_t = InputFormat::Pd)]
    format: InputFormat,
    /// How to write the result.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,
    /// Give up (exit 3) past this many enumerated states or generators.
    #[arg(long, default_value_t = knotkit::DEFAULT_CAP)]
    cap: u64,
    /// Write the document here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DiagramJob {
    #[command(flatten)]
    io: Io,
}

#[derive(Args)]
struct WidthsJob {
    #[command(flatten)]
    io: Io,
    /// Cable widths, one per component, e.g. `--n 2,1`.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<u32>,
}

#[derive(Args)]
struct BicomplexJob {
    #[command(flatten)]
    io: Io,
    /// Cable widths, one per component.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<u32>,
    /// Include the law-check report in the document.
    #[arg(long)]
    check_laws: bool,
    /// Include the full iterated-homology table in the document.
    #[arg(long)]
    emit_table: bool,
}

#[derive(Args)]
struct VerifyJob {
    #[command(flatten)]
    io: Io,
    /// Cable widths for the cabling-dependent checks; defaults to width 1
    /// on every component.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<u32>>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code() as u8);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

/// Sizes the global thread pool from `KNOTKIT_THREADS`. Results are
/// byte-identical at every thread count; the knob only trades time.
fn init_threads() -> Result<()> {
    let Ok(raw) = std::env::var("KNOTKIT_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::Parse(format!("KNOTKIT_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Parse(format!("cannot size the thread pool: {e}")))
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Bracket(job) => {
            let d = load_diagram(&job.io)?;
            let p = kauffman::bracket(&d, job.io.cap)?;
            emit(&job.io, json!({ "bracket": poly_value(&p) }), poly_csv(&p))
        }
        Command::Jones(job) => {
            let d = load_diagram(&job.io)?;
            let p = kauffman::jones_framed(&d, job.io.cap)?;
            emit(&job.io, json!({ "jones_framed": poly_value(&p) }), poly_csv(&p))
        }
        Command::Khovanov(job) => run_khovanov(job),
        Command::ColoredJones(job) => {
            let d = load_diagram(&job.io)?;
            check_arity(&job.n, &d)?;
            let p = colored::colored_jones(&d, &job.n, job.io.cap)?;
            emit(&job.io, json!({ "colored_jones": poly_value(&p), "n": job.n }), poly_csv(&p))
        }
        Command::Cable(job) => run_cable(job),
        Command::Bicomplex(job) => run_bicomplex(job),
        Command::Verify(job) => run_verify(job),
    }
}

fn read_input(io: &Io) -> Result<String> {
    if io.input == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::Parse(format!("cannot read standard input: {e}")))?;
        Ok(text)
    } else {
        fs::read_to_string(&io.input)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", io.input)))
    }
}

fn load_diagram(io: &Io) -> Result<LinkDiagram> {
    match io.format {
        InputFormat::Pd => parse_pd(&read_input(io)?),
        InputFormat::Nanoword => Err(Error::Parse(
            "this command needs a planar-diagram input; a nanoword fixes no crossing embedding"
                .into(),
        )),
    }
}

fn check_arity(n: &[u32], d: &LinkDiagram) -> Result<()> {
    if n.len() != d.component_count() {
        return Err(Error::Parse(format!(
            "width list has {} entries for a {}-component link",
            n.len(),
            d.component_count()
        )));
    }
    Ok(())
}

fn emit(io: &Io, doc: Value, csv: String) -> Result<()> {
    let text = match io.output {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&doc)
                .map_err(|e| Error::Parse(format!("cannot serialize the document: {e}")))?;
            s.push('\n');
            s
        }
        OutputFormat::Csv => csv,
    };
    match &io.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// A Laurent polynomial as `{"terms": [[exponent, "coefficient"], ...],
/// "text": "..."}`; coefficients are decimal strings to stay exact.
fn poly_value(p: &Laurent) -> Value {
    let terms: Vec<Value> = p.pairs().map(|(e, c)| json!([e, c.to_string()])).collect();
    json!({ "terms": terms, "text": p.to_string() })
}

fn poly_csv(p: &Laurent) -> String {
    let mut s = String::from("exp,coeff\n");
    for (e, c) in p.pairs() {
        s.push_str(&format!("{e},{c}\n"));
    }
    s
}

fn run_khovanov(job: DiagramJob) -> Result<()> {
    let d = load_diagram(&job.io)?;
    let table = khovanov::homology(&d, job.io.cap)?;
    let rows: Vec<Value> = table
        .iter()
        .map(|(&(i, j), h)| {
            json!({
                "i": i,
                "j": j,
                "rank": h.free_rank,
                "torsion": torsion_strings(&h.torsion),
            })
        })
        .collect();
    let euler = khovanov::graded_euler_homology(&table);
    let mut csv = String::from("i,j,rank,torsion\n");
    for (&(i, j), h) in &table {
        csv.push_str(&format!("{i},{j},{},{}\n", h.free_rank, torsion_strings(&h.torsion).join(";")));
    }
    emit(
        &job.io,
        json!({ "homology": rows, "euler": poly_value(&euler) }),
        csv,
    )
}

fn torsion_strings(torsion: &[knotkit::Int]) -> Vec<String> {
    torsion.iter().map(|t| t.to_string()).collect()
}

fn run_cable(job: WidthsJob) -> Result<()> {
    match job.io.format {
        InputFormat::Pd => {
            let d = parse_pd(&read_input(&job.io)?)?;
            check_arity(&job.n, &d)?;
            let widths: Vec<usize> = job.n.iter().map(|&w| w as usize).collect();
            let c = d.cable(&widths)?;
            let word = StarPhrase::from_gauss(&c.gauss_code());
            emit(
                &job.io,
                json!({
                    "crossings": c.crossings().len(),
                    "pd": c.to_pd_json(),
                    "word": word.to_string(),
                }),
                format!("{}\n", c.to_pd_text()),
            )
        }
        InputFormat::Nanoword => {
            let word = match parse_phrase(&read_input(&job.io)?)? {
                ParsedPhrase::Star(p) => p.cable(&job.n)?.to_string(),
                ParsedPhrase::Signs(p) => p.cable(&job.n)?.to_string(),
            };
            emit(&job.io, json!({ "word": word }), format!("{word}\n"))
        }
    }
}

fn laws_value(report: &LawReport) -> Value {
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| json!({ "law": v.law, "j": v.j, "k": v.k, "i": v.i, "col": v.col, "row": v.row }))
        .collect();
    json!({
        "dsecond2": report.dsecond2,
        "dprime2": report.dprime2,
        "anticommute": report.anticommute,
        "j_preserved": report.j_preserved,
        "violations": violations,
    })
}

fn run_bicomplex(job: BicomplexJob) -> Result<()> {
    let d = load_diagram(&job.io)?;
    check_arity(&job.n, &d)?;
    let b = bicomplex::build_bicomplex(&d, &job.n, job.io.cap)?;
    let report = b.verify_laws()?;
    if !report.ok() {
        // Emit the evidence before signaling the law failure.
        emit(&job.io, json!({ "laws": laws_value(&report) }), law_csv(&report))?;
        let v = &report.violations[0];
        return Err(Error::Law(format!(
            "{} fails at j={} k={} i={} entry ({}, {})",
            v.law, v.j, v.k, v.i, v.row, v.col
        )));
    }
    let table = b.iterated_homology()?;
    let colored = colored::colored_jones(&d, &job.n, job.io.cap)?;
    let chain = b.chain_euler();
    let homology = bicomplex::homology_euler(&table);
    let mut doc = serde_json::Map::new();
    if job.check_laws {
        doc.insert("laws".into(), laws_value(&report));
    }
    if job.emit_table {
        let rows: Vec<Value> = table
            .iter()
            .map(|(&(k, i, j), h)| {
                json!({
                    "k": k,
                    "i": i,
                    "j": j,
                    "rank": h.free_rank,
                    "torsion": torsion_strings(&h.torsion),
                })
            })
            .collect();
        doc.insert("table".into(), Value::Array(rows));
    }
    doc.insert(
        "euler".into(),
        json!({
            "chain": poly_value(&chain),
            "homology": poly_value(&homology),
            "colored_jones": poly_value(&colored),
            "chain_equal": chain == colored,
            "equal": homology == colored,
        }),
    );
    let mut csv = String::from("k,i,j,rank,torsion\n");
    for (&(k, i, j), h) in &table {
        csv.push_str(&format!(
            "{k},{i},{j},{},{}\n",
            h.free_rank,
            torsion_strings(&h.torsion).join(";")
        ));
    }
    emit(&job.io, Value::Object(doc), csv)
}

fn law_csv(report: &LawReport) -> String {
    let mut s = String::from("law,j,k,i,col,row\n");
    for v in &report.violations {
        s.push_str(&format!("{},{},{},{},{},{}\n", v.law, v.j, v.k, v.i, v.col, v.row));
    }
    s
}

struct Check {
    name: &'static str,
    instance: String,
    ok: bool,
}

fn run_verify(job: VerifyJob) -> Result<()> {
    let mut checks: Vec<Check> = Vec::new();
    match job.io.format {
        InputFormat::Pd => {
            let d = parse_pd(&read_input(&job.io)?)?;
            let n = job.n.clone().unwrap_or_else(|| vec![1; d.component_count()]);
            check_arity(&n, &d)?;
            verify_diagram(&d, &n, job.io.cap, &mut checks)?;
        }
        InputFormat::Nanoword => {
            let phrase = parse_phrase(&read_input(&job.io)?)?;
            let signs = match phrase {
                ParsedPhrase::Signs(p) => p,
                ParsedPhrase::Star(p) => p.project(),
            };
            let n = job.n.clone().unwrap_or_else(|| vec![1; signs.word_count()]);
            if n.len() != signs.word_count() {
                return Err(Error::Parse(format!(
                    "width list has {} entries for a {}-word phrase",
                    n.len(),
                    signs.word_count()
                )));
            }
            checks.push(Check {
                name: "cable-then-project-commutes",
                instance: format!("n={n:?}"),
                ok: knotkit::nanoword::commute_cable_project(&signs, &n)?,
            });
        }
    }
    let all_ok = checks.iter().all(|c| c.ok);
    let rows: Vec<Value> = checks
        .iter()
        .map(|c| json!({ "check": c.name, "instance": c.instance, "ok": c.ok }))
        .collect();
    let mut csv = String::from("check,instance,ok\n");
    for c in &checks {
        csv.push_str(&format!("{},{},{}\n", c.name, c.instance, c.ok));
    }
    emit(&job.io, json!({ "checks": rows, "ok": all_ok }), csv)?;
    if let Some(bad) = checks.iter().find(|c| !c.ok) {
        return Err(Error::Law(format!("{} failed on {}", bad.name, bad.instance)));
    }
    Ok(())
}

/// The full battery on a planar diagram: the cabled word consistency, both
/// Euler readings of the cable, the bicomplex laws and identity, and
/// invariance of the framed Jones polynomial under the framed moves at
/// every site. Checks run smallest first so a failure names a minimal
/// instance.
fn verify_diagram(d: &LinkDiagram, n: &[u32], cap: u64, checks: &mut Vec<Check>) -> Result<()> {
    let widths: Vec<usize> = n.iter().map(|&w| w as usize).collect();
    let cable = d.cable(&widths)?;
    let instance = format!("n={n:?}");

    let direct = StarPhrase::from_gauss(&cable.gauss_code());
    let worded = StarPhrase::from_gauss(&d.gauss_code()).cable(n)?;
    checks.push(Check {
        name: "cable-word-consistency",
        instance: instance.clone(),
        ok: direct.equal_up_to_renaming(&worded),
    });

    let framed = kauffman::jones_framed(&cable, cap)?;
    checks.push(Check {
        name: "chain-euler-matches-bracket",
        instance: instance.clone(),
        ok: khovanov::graded_euler_chain(&cable, cap)? == framed,
    });
    let table = khovanov::homology(&cable, cap)?;
    checks.push(Check {
        name: "homology-euler-matches-bracket",
        instance: instance.clone(),
        ok: khovanov::graded_euler_homology(&table) == framed,
    });

    let b = bicomplex::build_bicomplex(d, n, cap)?;
    let report = b.verify_laws()?;
    let law_instance = report
        .violations
        .first()
        .map(|v| format!("{}: j={} k={} i={}", v.law, v.j, v.k, v.i))
        .unwrap_or_else(|| instance.clone());
    checks.push(Check { name: "differential-laws", instance: law_instance, ok: report.ok() });
    if report.ok() {
        let colored = colored::colored_jones(d, n, cap)?;
        let homology = bicomplex::homology_euler(&b.iterated_homology()?);
        checks.push(Check {
            name: "euler-identity",
            instance: instance.clone(),
            ok: b.chain_euler() == colored && homology == colored,
        });
    } else {
        checks.push(Check {
            name: "euler-identity",
            instance: "skipped: differential laws failed".into(),
            ok: false,
        });
    }

    let base = kauffman::jones_framed(d, cap)?;
    let mut r1 = Check { name: "framed-kink-pair-invariance", instance: "all arcs".into(), ok: true };
    for arc in 0..d.n_arcs() {
        if kauffman::jones_framed(&d.apply_framed_r1(arc)?, cap)? != base {
            r1 = Check { name: r1.name, instance: format!("arc {arc}"), ok: false };
            break;
        }
    }
    checks.push(r1);
    let mut r2 = Check { name: "finger-move-invariance", instance: "all sites".into(), ok: true };
    for (t, site) in d.r2_sites().into_iter().enumerate() {
        if kauffman::jones_framed(&d.apply_r2(site)?, cap)? != base {
            r2 = Check { name: r2.name, instance: format!("site {t}"), ok: false };
            break;
        }
    }
    checks.push(r2);
    let mut r3 = Check { name: "triangle-move-invariance", instance: "all sites".into(), ok: true };
    for (t, site) in d.r3_sites().iter().enumerate() {
        if kauffman::jones_framed(&d.apply_r3(site)?, cap)? != base {
            r3 = Check { name: r3.name, instance: format!("site {t}"), ok: false };
            break;
        }
    }
    checks.push(r3);
    Ok(())
}
