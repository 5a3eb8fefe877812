use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lie_poset::algebra::LieAlgebra;
use lie_poset::cohomology::ce_cohomology_dims;
use lie_poset::contact::{
    build_contact_form, classify_h2, contact_form, is_contact, kernel_is_expected, Certificate, Classification,
    ContactSequence, ContactVerdict,
};
use lie_poset::index::{index, index_formula_h2, symbolic_index, SYMBOLIC_DIM_BOUND};
use lie_poset::io::{
    complex_to_json, functional_to_json, hasse_dot, parse_complex, parse_poset, parse_structure_constants,
    poset_to_json,
};
use lie_poset::linalg::format_q;
use lie_poset::sweep::{sweep, SYMBOLIC_INDEX_DIM};
use lie_poset::topology::{betti_numbers, order_complex};
use lie_poset::{Error, Poset};

const MAX_N: usize = 9;

#[derive(Parser)]
#[command(name = "lie-poset", version, about = "Contact and Frobenius type-A Lie poset algebras")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Args)]
struct Randomness {
    /// Seed for every randomized step (required: no hidden entropy)
    #[arg(long)]
    seed: u64,
    /// Random functionals sampled per randomized rank test
    #[arg(long, default_value_t = 3)]
    trials: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Decide contactness of a poset (or structure-constant) JSON file
    Classify {
        file: Option<PathBuf>,
        #[command(flatten)]
        rand: Randomness,
    },
    /// Cross-check classification and index formulas on all posets of height <= 2
    Sweep {
        #[arg(long, default_value_t = 7)]
        max_n: usize,
        #[command(flatten)]
        rand: Randomness,
    },
    /// Replay a contact sequence and verify its contact form
    Build { file: Option<PathBuf> },
    /// Index of a poset or structure-constant algebra
    Index {
        file: Option<PathBuf>,
        #[command(flatten)]
        rand: Randomness,
    },
    /// Betti numbers of an order complex or explicit complex; Lie algebra
    /// cohomology dimensions for structure constants
    Homology { file: Option<PathBuf> },
    /// Hasse diagram of a poset in DOT
    ExportDot { file: Option<PathBuf> },
}

enum Failure {
    Lib(Error),
    Input(String),
    Discrepancy(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            let (code, kind, message) = match &f {
                Failure::Lib(e @ (Error::SizeBound { .. } | Error::HeightBound { .. })) => (4, "size_bound", e.to_string()),
                Failure::Lib(e) => (2, "input", e.to_string()),
                Failure::Input(m) => (2, "input", m.clone()),
                Failure::Discrepancy(k) => (3, "discrepancy", format!("{k} discrepancies")),
            };
            eprintln!("{}", json!({ "error": { "kind": kind, "message": message } }));
            ExitCode::from(code)
        }
    }
}

fn read_input(file: &Option<PathBuf>) -> CliResult<String> {
    match file {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

enum Input {
    Poset(Poset),
    Algebra(LieAlgebra),
    Complex(lie_poset::topology::SimplicialComplex),
}

fn parse_input(text: &str) -> CliResult<Input> {
    let v: Value = serde_json::from_str(text).map_err(|e| Failure::Lib(Error::Parse(e.to_string())))?;
    if v.get("n").is_some() {
        Ok(Input::Poset(parse_poset(text)?))
    } else if v.get("dim").is_some() {
        Ok(Input::Algebra(parse_structure_constants(text)?))
    } else if v.get("faces").is_some() {
        Ok(Input::Complex(parse_complex(text)?))
    } else {
        Err(Failure::Input("expected a poset (\"n\"), algebra (\"dim\") or complex (\"faces\") object".into()))
    }
}

fn emit(format: Format, value: &Value, text: impl FnOnce() -> String) -> CliResult<String> {
    match format {
        Format::Json => Ok(format!("{}\n", serde_json::to_string_pretty(value).expect("json"))),
        Format::Text => Ok(text()),
        Format::Dot => Err(Failure::Input("--format dot is only supported by export-dot".into())),
    }
}

fn run(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Classify { file, rand } => classify(cli.format, &read_input(file)?, rand),
        Command::Sweep { max_n, rand } => {
            if *max_n > MAX_N {
                return Err(Error::SizeBound { size: *max_n, bound: MAX_N }.into());
            }
            let summary = sweep(*max_n, rand.seed, rand.trials)?;
            let out = emit(cli.format, &serde_json::to_value(&summary).expect("json"), || summary.to_text())?;
            if summary.total_discrepancies() > 0 {
                print!("{out}");
                return Err(Failure::Discrepancy(summary.total_discrepancies()));
            }
            Ok(out)
        }
        Command::Build { file } => build(cli.format, &read_input(file)?),
        Command::Index { file, rand } => index_cmd(cli.format, &read_input(file)?, rand),
        Command::Homology { file } => homology(cli.format, &read_input(file)?),
        Command::ExportDot { file } => match parse_input(&read_input(file)?)? {
            Input::Poset(p) => Ok(hasse_dot(&p)),
            _ => Err(Failure::Input("export-dot needs a poset".into())),
        },
    }
}

fn classify(format: Format, text: &str, rand: &Randomness) -> CliResult<String> {
    let p = match parse_input(text)? {
        Input::Poset(p) => p,
        Input::Algebra(g) => return classify_algebra(format, &g, rand),
        Input::Complex(_) => return Err(Failure::Input("classify needs a poset or an algebra".into())),
    };
    let class = classify_h2(&p)?;
    let mut report = json!({ "poset": poset_to_json(&p) });
    match &class {
        Classification::Contact(cert) => {
            report["verdict"] = json!("contact");
            report["certificate"] = match cert {
                Certificate::Sequence(seq) => json!({ "sequence": seq }),
                Certificate::TwoFrobenius { components } => json!({ "frobenius_components": components }),
            };
            let phi = contact_form(&p, rand.seed)?.expect("contact posets have a form");
            report["contact_form"] = functional_to_json(&phi);
        }
        Classification::NotContact(o) => {
            report["verdict"] = json!("not_contact");
            report["obstruction"] = serde_json::to_value(o).expect("json");
            report["reason"] = json!(o.describe());
        }
    }
    report["index"] = json!({ "formula": index_formula_h2(&p)? });
    let mut center_dim = Value::Null;
    if p.n() > 1 {
        let g = LieAlgebra::type_a(&p)?;
        report["index"]["randomized"] = serde_json::to_value(index(&g, rand.trials, rand.seed)).expect("json");
        center_dim = json!(g.center().len());
    }
    report["center_dim"] = center_dim;
    report["betti"] = json!(betti_numbers(&order_complex(&p), false)?);
    emit(format, &report, || {
        let mut s = format!("verdict: {}\n", report["verdict"].as_str().unwrap_or_default());
        if let Some(r) = report.get("reason") {
            s += &format!("obstruction: {}\n", r.as_str().unwrap_or_default());
        }
        if let Some(f) = report.get("contact_form") {
            s += &format!("contact form: {f}\n");
        }
        s += &format!("index: {}\n", report["index"]["formula"]);
        s += &format!("center dim: {}\nbetti: {}\n", report["center_dim"], report["betti"]);
        s
    })
}

fn classify_algebra(format: Format, g: &LieAlgebra, rand: &Randomness) -> CliResult<String> {
    let report = match is_contact(g, rand.trials, rand.seed)? {
        ContactVerdict::Witness(phi) => json!({ "verdict": "contact", "contact_form": functional_to_json(&phi) }),
        ContactVerdict::NotContactCertified(reason) => json!({ "verdict": "not_contact", "certified": true, "reason": reason }),
        ContactVerdict::NotContact { failure_bound } => {
            json!({ "verdict": "not_contact", "certified": false, "failure_bound": failure_bound })
        }
    };
    emit(format, &report, || {
        let mut s = format!("verdict: {}\n", report["verdict"].as_str().unwrap_or_default());
        for key in ["reason", "failure_bound", "contact_form"] {
            if let Some(v) = report.get(key) {
                s += &format!("{key}: {v}\n");
            }
        }
        s
    })
}

fn build(format: Format, text: &str) -> CliResult<String> {
    let seq = ContactSequence::from_json(text)?;
    let phi = build_contact_form(&seq)?;
    let p = seq.replay()?.poset;
    let g = LieAlgebra::type_a(&p)?;
    let det = g.extended_matrix(&phi)?.determinant()?;
    let report = json!({
        "poset": poset_to_json(&p),
        "contact_form": functional_to_json(&phi),
        "det": format_q(&det),
        "kernel_matches": kernel_is_expected(&p, &phi)?,
    });
    emit(format, &report, || {
        format!(
            "poset: {}\ncontact form: {}\ndet: {}\nkernel matches: {}\n",
            report["poset"], report["contact_form"], report["det"], report["kernel_matches"]
        )
    })
}

fn index_cmd(format: Format, text: &str, rand: &Randomness) -> CliResult<String> {
    let (g, formula, symbolic_bound) = match parse_input(text)? {
        Input::Poset(p) => {
            let formula = if p.height() <= 2 { Some(index_formula_h2(&p)?) } else { None };
            (LieAlgebra::type_a(&p)?, formula, SYMBOLIC_INDEX_DIM)
        }
        Input::Algebra(g) => (g, None, SYMBOLIC_DIM_BOUND),
        Input::Complex(_) => return Err(Failure::Input("index needs a poset or an algebra".into())),
    };
    let sampled = index(&g, rand.trials, rand.seed);
    let symbolic = if g.dim() <= symbolic_bound { Some(symbolic_index(&g, rand.seed)?) } else { None };
    let report = json!({
        "dim": g.dim(),
        "randomized": sampled,
        "symbolic": symbolic,
        "formula": formula,
    });
    emit(format, &report, || {
        let mut s = format!("dim: {}\nindex (randomized): {}\n", g.dim(), sampled.index);
        if let Some(v) = symbolic {
            s += &format!("index (symbolic): {v}\n");
        }
        if let Some(v) = formula {
            s += &format!("index (formula): {v}\n");
        }
        s
    })
}

fn homology(format: Format, text: &str) -> CliResult<String> {
    let report = match parse_input(text)? {
        Input::Algebra(g) => {
            let d = ce_cohomology_dims(&g)?;
            json!({ "h0": d.h0, "h1": d.h1, "h2": d.h2 })
        }
        input => {
            let k = match input {
                Input::Poset(p) => order_complex(&p),
                Input::Complex(k) => k,
                Input::Algebra(_) => unreachable!(),
            };
            json!({
                "complex": complex_to_json(&k),
                "betti": betti_numbers(&k, false)?,
                "reduced_betti": betti_numbers(&k, true)?,
                "euler_characteristic": k.euler_characteristic(),
            })
        }
    };
    emit(format, &report, || match report.get("betti") {
        Some(b) => format!("betti: {b}\nreduced: {}\n", report["reduced_betti"]),
        None => format!("H0: {}\nH1: {}\nH2: {}\n", report["h0"], report["h1"], report["h2"]),
    })
}
