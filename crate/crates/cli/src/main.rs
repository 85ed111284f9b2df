//! `ncdb`: verify, classify, localise and evaluate double brackets.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage
//! or parse errors.

use std::io::{self, Read};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ncdb::axioms::{self, VerificationReport, WitnessPolicy};
use ncdb::classify::{self, FamilyParams};
use ncdb::localize::{localize, LocalisationPlan};
use ncdb::repspace::{check_induced_poisson_multi, MatrixPoint};
use ncdb::speclang::{parse, SpecDocument};
use ncdb::{BracketSpec, WeightVector, Q};
use serde_json::{json, Value};

const SCHEMA: &str = "ncdb.report/v1";

#[derive(Parser)]
#[command(name = "ncdb", version, about = "Exact double-bracket verification on free and Laurent algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Print a JSON report instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Weight, Poisson property, H0-skew-symmetry and Jacobi for a spec file.
    Verify {
        /// Spec file, or `-` for stdin.
        file: String,
        /// Sets both degree bounds.
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long, default_value_t = axioms::DEFAULT_PAIR_DEGREE)]
        pair_degree: usize,
        #[arg(long, default_value_t = axioms::DEFAULT_TRIPLE_DEGREE)]
        triple_degree: usize,
        /// Weight to test, e.g. `1,-1,-1`. Defaults to the file's weight, then to an inferred one.
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Brute-force Jacobi identity of the associated bracket.
    Jacobi {
        file: String,
        #[arg(long, default_value_t = axioms::DEFAULT_TRIPLE_DEGREE)]
        max_degree: usize,
        /// Collect every failing triple instead of the first.
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Brute-force H0-skew-symmetry of the associated bracket.
    H0skew {
        file: String,
        #[arg(long, default_value_t = axioms::DEFAULT_PAIR_DEGREE)]
        max_degree: usize,
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Parameter searches over the classified families.
    Classify {
        #[command(subcommand)]
        which: ClassifyCmd,
    },
    /// Extend a weighted spec to the Laurent algebra inverting some generators.
    Localize {
        file: String,
        /// Comma-separated generator names.
        #[arg(long)]
        invert: String,
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Trace identities of the induced bracket at random rational matrices.
    Rep {
        file: String,
        #[arg(long, default_value_t = 2)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        #[arg(long, default_value_t = 1)]
        points: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Print a bundled spec.
    Builtin {
        /// mdbI, mdbII, kontsevich, cl1, cl1-1, cl1-2, cl3a, cl3b, cld, cld2
        name: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        rho: Option<String>,
        /// Four comma-separated values.
        #[arg(long, allow_hyphen_values = true, default_value = "0,0,0,0")]
        gamma: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        #[arg(long, default_value = "0,0,0")]
        first: String,
        #[arg(long, default_value = "0,0,0")]
        second: String,
        #[arg(long, default_value_t = 4)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        delta: usize,
    },
}

#[derive(Subcommand)]
enum ClassifyCmd {
    /// Two-generator family at a given lambda.
    Cl1 {
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        lambda: String,
        /// Search gamma over the integers -N..=N instead of {0, -2 lambda}.
        #[arg(long)]
        grid: Option<i64>,
        #[command(flatten)]
        out: Output,
    },
    /// Three generators of weight (1,1,1).
    Cl3a {
        #[command(flatten)]
        out: Output,
    },
    /// Three generators of weight (1,1,-1).
    Cl3b {
        #[command(flatten)]
        out: Output,
    },
    /// The two families for d >= 4, every delta.
    Families {
        /// Comma-separated dimensions.
        #[arg(long, default_value = "4,5")]
        d: String,
        #[command(flatten)]
        out: Output,
    },
}

/// Usage-level failure, reported with exit code 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

type Run = Result<bool, Usage>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_input(file: &str) -> Result<String, Usage> {
    let mut s = String::new();
    if file == "-" {
        io::stdin().read_to_string(&mut s)?;
    } else {
        s = std::fs::read_to_string(file).map_err(|e| Usage(format!("{file}: {e}")))?;
    }
    Ok(s)
}

fn load(file: &str) -> Result<(SpecDocument, BracketSpec), Usage> {
    let text = read_input(file)?;
    let doc = parse(&text).map_err(|e| Usage(format!("{}:{e}", if file == "-" { "<stdin>" } else { file })))?;
    for w in doc.lint() {
        eprintln!("warning: {w}");
    }
    let spec = doc.to_spec()?;
    Ok((doc, spec))
}

fn parse_list(s: &str) -> Result<Vec<Q>, Usage> {
    s.split(',')
        .map(|x| x.trim().parse::<Q>().map_err(|_| Usage(format!("bad rational `{}`", x.trim()))))
        .collect()
}

fn parse_q(s: &str) -> Result<Q, Usage> {
    s.trim().parse::<Q>().map_err(|_| Usage(format!("bad rational `{s}`")))
}

fn triple(s: &str) -> Result<[Q; 3], Usage> {
    parse_list(s)?.try_into().map_err(|_| Usage(format!("expected three values, got `{s}`")))
}

/// Weight from the flag, else the document, else inference.
fn pick_weight(flag: Option<&str>, spec: &BracketSpec) -> Result<Option<WeightVector>, Usage> {
    if let Some(f) = flag {
        return Ok(Some(WeightVector::new(parse_list(f)?)));
    }
    if let Some(w) = spec.weight() {
        return Ok(Some(w.clone()));
    }
    Ok(axioms::infer_weight(spec).ok())
}

fn envelope(command: &str, name: Option<&str>, ok: bool, reports: &[VerificationReport], data: Value) -> Value {
    let mut v = json!({
        "schema": SCHEMA,
        "command": command,
        "status": if ok { "pass" } else { "fail" },
        "reports": reports.iter().map(VerificationReport::to_json).collect::<Vec<_>>(),
    });
    if let Some(n) = name {
        v["spec"] = json!(n);
    }
    if !data.is_null() {
        v["data"] = data;
    }
    v
}

fn print_report(r: &VerificationReport, indent: usize) {
    let pad = " ".repeat(indent);
    let mut line = format!("{pad}{} {}", if r.passed() { "PASS" } else { "FAIL" }, r.axiom);
    if let Some(d) = r.max_degree {
        line.push_str(&format!(" (degree <= {d}, {} checked)", r.checked));
    } else if r.checked > 0 {
        line.push_str(&format!(" ({} checked)", r.checked));
    }
    println!("{line}");
    for n in &r.notes {
        println!("{pad}  note: {n}");
    }
    for w in &r.witnesses {
        println!("{pad}  witness at ({})", w.inputs.join(", "));
        println!("{pad}    expected: {}", w.expected);
        println!("{pad}    actual:   {}", w.actual);
        println!("{pad}    residual: {}", w.residual);
    }
    for c in &r.children {
        print_report(c, indent + 2);
    }
}

fn emit(out: &Output, command: &str, name: Option<&str>, reports: &[VerificationReport], data: Value) -> bool {
    let ok = reports.iter().all(VerificationReport::passed);
    if out.json {
        let v = envelope(command, name, ok, reports, data);
        println!("{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        for r in reports {
            print_report(r, 0);
        }
    }
    ok
}

fn run(cmd: Command) -> Run {
    match cmd {
        Command::Verify { file, max_degree, pair_degree, triple_degree, weight, out } => {
            let (doc, spec) = load(&file)?;
            let (pd, td) = max_degree.map_or((pair_degree, triple_degree), |k| (k, k));
            let report = match pick_weight(weight.as_deref(), &spec)? {
                Some(w) => axioms::check_modified_poisson_battery(&spec, &w, pd, td),
                None => {
                    let mut r = VerificationReport::all(
                        "modified_double_poisson",
                        vec![axioms::check_h0_skew(&spec, pd), axioms::check_jacobi(&spec, td)],
                    );
                    r.notes.push("no weight given and none could be inferred; weight checks skipped".into());
                    r
                }
            };
            Ok(emit(&out, "verify", doc.name.as_deref(), &[report], Value::Null))
        }
        Command::Jacobi { file, max_degree, all, out } => {
            let (doc, spec) = load(&file)?;
            let r = axioms::check_jacobi_with(&spec, max_degree, policy(all));
            Ok(emit(&out, "jacobi", doc.name.as_deref(), &[r], Value::Null))
        }
        Command::H0skew { file, max_degree, all, out } => {
            let (doc, spec) = load(&file)?;
            let r = axioms::check_h0_skew_with(&spec, max_degree, policy(all));
            Ok(emit(&out, "h0skew", doc.name.as_deref(), &[r], Value::Null))
        }
        Command::Classify { which } => classify_cmd(which),
        Command::Localize { file, invert, weight, out } => {
            let (doc, spec) = load(&file)?;
            let names: Vec<&str> = invert.split(',').map(str::trim).collect();
            let plan = LocalisationPlan::by_names(spec.algebra(), &names)?;
            let w = pick_weight(weight.as_deref(), &spec)?
                .ok_or_else(|| Usage("no weight given and none could be inferred".into()))?;
            let (lspec, lw) = match localize(&spec, &w, &plan) {
                Ok(x) => x,
                Err(e) => {
                    let r = VerificationReport::rejected("weight", e.to_string());
                    return Ok(emit(&out, "localize", doc.name.as_deref(), &[r], Value::Null));
                }
            };
            let r = axioms::check_poisson_property(&lspec, &lw);
            let mut ldoc = SpecDocument::from_spec(&lspec, doc.name.as_deref());
            ldoc.comments = doc.comments.clone();
            let text = ldoc.render();
            if out.json {
                let ext: Vec<String> = lw.extended(lspec.algebra()).iter().map(Q::to_string).collect();
                Ok(emit(&out, "localize", doc.name.as_deref(), &[r], json!({ "document": text, "letter_weights": ext })))
            } else {
                print!("{text}");
                eprintln!("{} poisson_property on the localised algebra", if r.passed() { "PASS" } else { "FAIL" });
                Ok(r.passed())
            }
        }
        Command::Rep { file, size, seed, max_degree, points, out } => {
            let (doc, spec) = load(&file)?;
            if size == 0 || points == 0 {
                return Err(Usage("--size and --points must be positive".into()));
            }
            let pts: Vec<MatrixPoint> = (0..points as u64)
                .map(|k| MatrixPoint::sample(spec.algebra(), size, seed.wrapping_add(k)))
                .collect();
            let r = check_induced_poisson_multi(&spec, &pts, max_degree);
            Ok(emit(&out, "rep", doc.name.as_deref(), &[r], json!({ "size": size, "seed": seed, "points": points })))
        }
        Command::Builtin { name, lambda, rho, gamma, alpha, beta, first, second, d, delta } => {
            let lambda = parse_q(&lambda)?;
            let params = match name.as_str() {
                "mdbI" => FamilyParams::MdbI,
                "mdbII" => FamilyParams::MdbII,
                "kontsevich" => FamilyParams::Kontsevich,
                "cl1" => {
                    let gamma: [Q; 4] =
                        parse_list(&gamma)?.try_into().map_err(|_| Usage("--gamma needs four values".into()))?;
                    let rho = rho.as_deref().map(parse_q).transpose()?.unwrap_or_else(|| lambda.clone());
                    FamilyParams::Cl1 { lambda, rho, gamma }
                }
                "cl1-1" | "cl1-2" => {
                    let a = parse_q(alpha.as_deref().unwrap_or("0"))?;
                    let b = parse_q(beta.as_deref().unwrap_or("0"))?;
                    if name == "cl1-1" {
                        FamilyParams::Cl1Minus { lambda, alpha: a, beta: b }
                    } else {
                        FamilyParams::Cl1Plus { lambda, alpha: a, beta: b }
                    }
                }
                "cl3a" => FamilyParams::Cl3a {
                    alpha: triple(alpha.as_deref().unwrap_or("0,0,0"))?,
                    beta: triple(beta.as_deref().unwrap_or("0,0,0"))?,
                },
                "cl3b" => FamilyParams::Cl3b { first: triple(&first)?, second: triple(&second)? },
                "cld" => FamilyParams::Cld { d, delta },
                "cld2" => FamilyParams::Cld2 { d, delta },
                other => return Err(Usage(format!("unknown builtin `{other}`"))),
            };
            let (spec, _) = classify::build(&params)?;
            let mut doc = SpecDocument::from_spec(&spec, Some(&name));
            doc.comments.push(params.to_string());
            print!("{}", doc.render());
            Ok(true)
        }
    }
}

fn policy(all: bool) -> WitnessPolicy {
    if all {
        WitnessPolicy::All
    } else {
        WitnessPolicy::First
    }
}

fn triple_strings(t: &[Q; 3]) -> Vec<String> {
    t.iter().map(Q::to_string).collect()
}

/// Survivor table indexed by the admissible triples in both slots.
fn triple_table(survivors: &[classify::TriplePair]) -> Value {
    let triples = classify::admissible_triples();
    let table: Vec<Vec<bool>> = triples
        .iter()
        .map(|a| triples.iter().map(|b| survivors.iter().any(|(x, y)| x == a && y == b)).collect())
        .collect();
    json!({
        "triples": triples.iter().map(triple_strings).collect::<Vec<_>>(),
        "table": table,
    })
}

fn grid_report<P>(name: &str, g: &classify::GridSearch<P>, render: impl Fn(&P) -> String) -> VerificationReport {
    let mut r = VerificationReport::all(name, Vec::new());
    r.checked = g.grid_size as u64;
    r.notes.push(format!("{} of {} grid points survive", g.survivors.len(), g.grid_size));
    if !g.disagreements.is_empty() {
        r.status = axioms::Status::Fail;
        for p in &g.disagreements {
            r.notes.push(format!("closed form disagrees at {}", render(p)));
        }
    }
    r
}

fn classify_cmd(which: ClassifyCmd) -> Run {
    match which {
        ClassifyCmd::Cl1 { lambda, grid, out } => {
            let lambda = parse_q(&lambda)?;
            let g = match grid {
                None => classify::search_cl1(&lambda)?,
                Some(n) => {
                    let gammas: Vec<Q> = (-n..=n).map(Q::from_int).collect();
                    classify::search_cl1_on(&lambda, &[lambda.clone(), -&lambda], &gammas, false)
                }
            };
            let show = |(rho, gamma): &classify::Cl1Point| {
                format!("rho={rho} gamma=({})", gamma.iter().map(Q::to_string).collect::<Vec<_>>().join(","))
            };
            let r = grid_report("classify_cl1", &g, show);
            if !out.json {
                for p in &g.survivors {
                    println!("{}", show(p));
                }
            }
            let data = json!({
                "lambda": lambda.to_string(),
                "grid_size": g.grid_size,
                "exhaustive": g.exhaustive,
                "survivors": g.survivors.iter().map(|(rho, gamma)| json!({
                    "rho": rho.to_string(),
                    "gamma": gamma.iter().map(Q::to_string).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            });
            Ok(emit(&out, "classify cl1", None, &[r], data))
        }
        ClassifyCmd::Cl3a { out } => triple_cmd("cl3a", classify::search_cl3a(), out),
        ClassifyCmd::Cl3b { out } => triple_cmd("cl3b", classify::search_cl3b(), out),
        ClassifyCmd::Families { d, out } => {
            let dims = d
                .split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| Usage(format!("bad dimension `{x}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            let mut reports = Vec::new();
            for d in dims {
                for delta in 0..=d {
                    reports.push(classify::verify_family_props(d, delta)?);
                }
            }
            Ok(emit(&out, "classify families", None, &reports, Value::Null))
        }
    }
}

fn triple_cmd(name: &str, g: classify::GridSearch<classify::TriplePair>, out: Output) -> Run {
    let show = |(a, b): &classify::TriplePair| {
        format!("({}) ({})", triple_strings(a).join(","), triple_strings(b).join(","))
    };
    let r = grid_report(&format!("classify_{name}"), &g, show);
    if !out.json {
        for p in &g.survivors {
            println!("{}", show(p));
        }
    }
    let mut data = triple_table(&g.survivors);
    data["grid_size"] = json!(g.grid_size);
    data["survivors"] = json!(g.survivors.len());
    Ok(emit(&out, &format!("classify {name}"), None, &[r], data))
}
