use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use pqml::axioms::{instance, sahlqvist_check, SahlqvistError, NAMES};
use pqml::breakdown::{invariant_subdomain_check, Breakdown, BreakdownError, ExistsMode};
use pqml::corpus::{all_formulas, FormulaShape};
use pqml::diversity::duplicate_structure;
use pqml::frames::{FrameError, Model};
use pqml::gallery::{self, GalleryError};
use pqml::io::{frame_from_json, frame_to_dot, frame_to_json, IoError};
use pqml::semantics::{EvalError, Evaluator, DEFAULT_MAX_WORLDS};
use pqml::{diversity, diversity_generated, parse, Formula, GeneralFrame, Valuation, Validity, Var, WorldSet};

mod selfcheck;

#[derive(Parser)]
#[command(name = "pqml", version, about = "Propositionally quantified modal logic on finite frames")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FrameArg {
    /// Gallery id such as `cyclic:5`, or a path to a frame JSON file.
    #[arg(long)]
    frame: String,
}

#[derive(Args)]
struct EvalOpts {
    /// Formula text, or a macro such as `@At:1`, `@5` or `@Trs:2`.
    #[arg(long)]
    formula: String,
    /// Value of a variable, e.g. `--val p0=a,b`. Repeatable; `p0=` is the empty set.
    #[arg(long = "val")]
    vals: Vec<String>,
    /// World count above which quantifiers over the full powerset are refused.
    #[arg(long, default_value_t = DEFAULT_MAX_WORLDS)]
    max_worlds: usize,
    /// Use brute-force quantification instead of the class-based evaluator.
    #[arg(long)]
    oracle: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print it in canonical form.
    Parse {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        json: bool,
    },
    /// Print the extension of a formula, or its truth value at one world.
    Eval {
        #[command(flatten)]
        frame: FrameArg,
        #[command(flatten)]
        opts: EvalOpts,
        #[arg(long)]
        at: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Check validity over every admissible valuation.
    Valid {
        #[command(flatten)]
        frame: FrameArg,
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = DEFAULT_MAX_WORLDS)]
        max_worlds: usize,
        #[arg(long)]
        json: bool,
    },
    /// Number of duplicate classes.
    Diversity {
        #[command(flatten)]
        frame: FrameArg,
        /// Largest diversity over point-generated subframes instead.
        #[arg(long)]
        generated: bool,
        #[arg(long)]
        json: bool,
    },
    /// Duplicate classes with their local shape and quotient successors.
    Classes {
        #[command(flatten)]
        frame: FrameArg,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        dot: bool,
    },
    /// Per-class Boolean breakdown of a formula.
    Breakdown {
        #[command(flatten)]
        frame: FrameArg,
        #[command(flatten)]
        opts: EvalOpts,
        #[arg(long)]
        json: bool,
    },
    /// Compare quantification over the admissible family with the full powerset.
    InvariantCheck {
        #[command(flatten)]
        frame: FrameArg,
        /// Corpus formulas; defaults to every small one-variable formula.
        #[arg(long = "formula")]
        formulas: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Print a named axiom instance.
    Axiom {
        /// One of K, Dual, Bc, Q, At, R, 5, T, Tdia, M, E, Qvb, Alt, AltB, Trs, TrsB, D45, Collapse, WorldProp, SuccSet.
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        phi: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Classify a quantifier-free formula as Sahlqvist or not.
    Sahlqvist {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        json: bool,
    },
    /// The subframe of worlds reachable from a world in at most `depth` steps.
    Truncate {
        #[command(flatten)]
        frame: FrameArg,
        #[arg(long)]
        at: String,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        dot: bool,
    },
    /// List the gallery, or show one entry.
    Gallery {
        id: Option<String>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        dot: bool,
    },
    /// Run a quick randomized pass over the library's invariants.
    Selfcheck {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// A failure with its exit code.
struct Exit {
    code: u8,
    message: String,
}

impl Exit {
    fn usage(message: impl Into<String>) -> Self {
        Exit {
            code: 2,
            message: message.into(),
        }
    }

    fn guardrail(message: impl Into<String>) -> Self {
        Exit {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<EvalError> for Exit {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::TooManyWorlds { .. } | EvalError::TooManyValuations { .. } => {
                Exit::guardrail(e.to_string())
            }
            _ => Exit::usage(e.to_string()),
        }
    }
}

impl From<FrameError> for Exit {
    fn from(e: FrameError) -> Self {
        match e {
            FrameError::FamilyTooLarge(_) => Exit::guardrail(e.to_string()),
            _ => Exit::usage(e.to_string()),
        }
    }
}

impl From<GalleryError> for Exit {
    fn from(e: GalleryError) -> Self {
        match e {
            GalleryError::Eval(e) => e.into(),
            GalleryError::Frame(e) => e.into(),
            _ => Exit::usage(e.to_string()),
        }
    }
}

impl From<IoError> for Exit {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Frame(e) => e.into(),
            _ => Exit::usage(e.to_string()),
        }
    }
}

impl From<BreakdownError> for Exit {
    fn from(e: BreakdownError) -> Self {
        Exit::usage(e.to_string())
    }
}

type Outcome = Result<ExitCode, Exit>;

fn load_frame(spec: &str) -> Result<(GeneralFrame, Option<String>), Exit> {
    if spec.ends_with(".json") || Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec)
            .map_err(|e| Exit::usage(format!("cannot read {spec}: {e}")))?;
        Ok((frame_from_json(&text)?, None))
    } else {
        let entry = gallery::lookup(spec)?;
        Ok((entry.frame, entry.caveat))
    }
}

fn formula(text: &str) -> Result<Formula, Exit> {
    let Some(body) = text.strip_prefix('@') else {
        return parse(text).map_err(|e| Exit::usage(e.to_string()));
    };
    let (name, n) = match body.split_once(':') {
        Some((name, n)) => {
            let n = n
                .parse()
                .map_err(|_| Exit::usage(format!("bad macro parameter in {text:?}")))?;
            (name, Some(n))
        }
        None => (body, None),
    };
    let name = NAMES
        .iter()
        .find(|known| known.eq_ignore_ascii_case(name))
        .ok_or_else(|| Exit::usage(format!("unknown macro {text:?}; known: {}", NAMES.join(", "))))?;
    Ok(instance(name, n, None).map_err(|e| Exit::usage(e.to_string()))?.formula)
}

fn world(g: &GeneralFrame, name: &str) -> Result<usize, Exit> {
    g.base.index_of(name).map_err(|e| Exit::usage(e.to_string()))
}

fn names(g: &GeneralFrame, x: WorldSet) -> Vec<String> {
    x.iter().map(|w| g.base.name(w).to_string()).collect()
}

fn show(g: &GeneralFrame, x: WorldSet) -> String {
    format!("{{{}}}", names(g, x).join(", "))
}

fn valuation(g: &GeneralFrame, specs: &[String]) -> Result<Valuation, Exit> {
    let mut v = Valuation::new();
    for spec in specs {
        let (var, worlds) = spec
            .split_once('=')
            .ok_or_else(|| Exit::usage(format!("--val expects p<i>=w,w,..., got {spec:?}")))?;
        let var = var
            .trim()
            .strip_prefix('p')
            .and_then(|i| i.parse().ok())
            .map(Var)
            .ok_or_else(|| Exit::usage(format!("--val variables are written p<i>, got {var:?}")))?;
        let mut x = WorldSet::EMPTY;
        for w in worlds.split(',').map(str::trim).filter(|w| !w.is_empty()) {
            x.insert(world(g, w)?);
        }
        v.set(var, x);
    }
    Ok(v)
}

fn show_valuation(g: &GeneralFrame, v: &Valuation) -> String {
    let parts: Vec<String> = v.iter().map(|(p, x)| format!("{p}={}", show(g, x))).collect();
    parts.join(" ")
}

fn bound(phi: &Formula, v: &Valuation) -> Result<(), Exit> {
    let missing: Vec<String> = phi
        .free_vars()
        .into_iter()
        .filter(|p| !v.contains(*p))
        .map(|p| p.to_string())
        .collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(Exit::usage(format!("no value for {}; pass --val", missing.join(", "))))
    }
}

fn caveat(note: &Option<String>) {
    if let Some(note) = note {
        eprintln!("caveat: {note}");
    }
}

fn extension(g: &GeneralFrame, phi: &Formula, v: &Valuation, opts: &EvalOpts) -> Result<WorldSet, Exit> {
    if g.is_full() && !opts.oracle {
        let ds = duplicate_structure(&g.base);
        return Ok(Breakdown::new(&g.base, &ds).extension(phi, v)?);
    }
    Ok(Evaluator::new(g).max_worlds(opts.max_worlds).extension(phi, v)?)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Parse { formula: text, json } => {
            let phi = formula(&text)?;
            if json {
                let free: Vec<String> = phi.free_vars().iter().map(|p| p.to_string()).collect();
                println!(
                    "{}",
                    json!({
                        "formula": phi.to_string(),
                        "free": free,
                        "size": phi.size(),
                        "modal_depth": phi.modal_depth(),
                        "quantifier_depth": phi.quantifier_depth(),
                    })
                );
            } else {
                println!("{phi}");
            }
        }
        Command::Eval { frame, opts, at, json } => {
            let (g, note) = load_frame(&frame.frame)?;
            caveat(&note);
            let phi = formula(&opts.formula)?;
            let v = valuation(&g, &opts.vals)?;
            bound(&phi, &v)?;
            let ext = extension(&g, &phi, &v, &opts)?;
            match (at, json) {
                (Some(w), false) => println!("{}", ext.contains(world(&g, &w)?)),
                (Some(w), true) => {
                    println!("{}", json!({"world": w, "holds": ext.contains(world(&g, &w)?)}))
                }
                (None, false) => println!("{}", show(&g, ext)),
                (None, true) => println!("{}", json!({"extension": names(&g, ext)})),
            }
        }
        Command::Valid { frame, formula: text, max_worlds, json } => {
            let (g, note) = load_frame(&frame.frame)?;
            caveat(&note);
            let phi = formula(&text)?;
            let verdict = Evaluator::new(&g).max_worlds(max_worlds).validity(&phi)?;
            match &verdict {
                Validity::Valid if json => println!("{}", json!({"valid": true})),
                Validity::Valid => println!("valid"),
                Validity::Invalid { valuation, world } if json => {
                    let vals: serde_json::Map<String, serde_json::Value> = valuation
                        .iter()
                        .map(|(p, x)| (p.to_string(), json!(names(&g, x))))
                        .collect();
                    println!(
                        "{}",
                        json!({"valid": false, "world": g.base.name(*world), "valuation": vals})
                    );
                }
                Validity::Invalid { valuation, world } => {
                    println!("invalid");
                    println!("fails at {} under {}", g.base.name(*world), show_valuation(&g, valuation));
                }
            }
            if !verdict.is_valid() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Diversity { frame, generated, json } => {
            let (g, _) = load_frame(&frame.frame)?;
            let d = diversity(&g.base);
            let dg = diversity_generated(&g.base);
            if json {
                println!("{}", json!({"diversity": d, "generated": dg}));
            } else {
                println!("{}", if generated { dg } else { d });
            }
        }
        Command::Classes { frame, json, dot } => {
            let (g, _) = load_frame(&frame.frame)?;
            let ds = duplicate_structure(&g.base);
            if dot {
                print!("{}", ds.to_dot(&g.base));
            } else if json {
                let classes: Vec<_> = (0..ds.len())
                    .map(|i| {
                        json!({
                            "worlds": names(&g, ds.classes[i]),
                            "kind": ds.kinds[i].to_string(),
                            "sees": ds.quotient[i].iter().collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&classes).expect("serializes"));
            } else {
                for i in 0..ds.len() {
                    let sees: Vec<String> = ds.quotient[i].iter().map(|j| format!("D{j}")).collect();
                    println!(
                        "D{i} {} {} -> [{}]",
                        show(&g, ds.classes[i]),
                        ds.kinds[i],
                        sees.join(", ")
                    );
                }
            }
        }
        Command::Breakdown { frame, opts, json } => {
            let (g, note) = load_frame(&frame.frame)?;
            caveat(&note);
            if !g.is_full() {
                return Err(Exit::usage("breakdown needs a frame with the full powerset"));
            }
            let phi = formula(&opts.formula)?;
            let v = valuation(&g, &opts.vals)?;
            bound(&phi, &v)?;
            let ds = duplicate_structure(&g.base);
            let mode = if opts.oracle { ExistsMode::Powerset } else { ExistsMode::Profiles };
            let fs = Breakdown::new(&g.base, &ds).mode(mode).per_class(&phi, &v)?;
            if json {
                let rows: Vec<_> = fs
                    .iter()
                    .zip(&ds.classes)
                    .map(|(f, &d)| json!({"worlds": names(&g, d), "formula": f.to_string()}))
                    .collect();
                println!("{}", serde_json::to_string_pretty(&rows).expect("serializes"));
            } else {
                for (i, (f, &d)) in fs.iter().zip(&ds.classes).enumerate() {
                    println!("D{i} {}: {f}", show(&g, d));
                }
            }
        }
        Command::InvariantCheck { frame, formulas, json } => {
            let (g, _) = load_frame(&frame.frame)?;
            let corpus = if formulas.is_empty() {
                all_formulas(&FormulaShape::new(1, 6, 2, 1))
            } else {
                formulas.iter().map(|t| formula(t)).collect::<Result<_, _>>()?
            };
            let report = invariant_subdomain_check(&g, &corpus)?;
            match &report.violation {
                None if json => println!(
                    "{}",
                    json!({
                        "passed_corpus": true,
                        "formulas": report.formulas_checked,
                        "valuations": report.valuations_checked,
                    })
                ),
                None => println!(
                    "passed corpus ({} formulas, {} valuations)",
                    report.formulas_checked, report.valuations_checked
                ),
                Some(bad) if json => println!(
                    "{}",
                    json!({
                        "passed_corpus": false,
                        "formula": bad.formula.to_string(),
                        "valuation": show_valuation(&g, &bad.valuation),
                        "world": g.base.name(bad.world),
                        "restricted": names(&g, bad.restricted),
                        "full": names(&g, bad.full),
                    })
                ),
                Some(bad) => {
                    println!("violation: {}", bad.formula);
                    if !bad.valuation.is_empty() {
                        println!("valuation: {}", show_valuation(&g, &bad.valuation));
                    }
                    println!("over the family: {}", show(&g, bad.restricted));
                    println!("over all sets:   {}", show(&g, bad.full));
                    println!("first differing world: {}", g.base.name(bad.world));
                }
            }
            if !report.passed_corpus() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Axiom { name, n, phi, json } => {
            let phi = phi.map(|t| formula(&t)).transpose()?;
            let known = NAMES
                .iter()
                .find(|k| k.eq_ignore_ascii_case(&name))
                .ok_or_else(|| Exit::usage(format!("unknown axiom {name:?}; known: {}", NAMES.join(", "))))?;
            let inst = instance(known, n, phi).map_err(|e| Exit::usage(e.to_string()))?;
            if json {
                let params: serde_json::Map<_, _> =
                    inst.params.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
                println!(
                    "{}",
                    json!({
                        "name": inst.name,
                        "params": params,
                        "formula": inst.formula.to_string(),
                        "notes": inst.notes,
                    })
                );
            } else {
                println!("{}", inst.formula);
                for note in &inst.notes {
                    eprintln!("note: {note}");
                }
            }
        }
        Command::Sahlqvist { formula: text, json } => {
            let phi = formula(&text)?;
            let report = match sahlqvist_check(&phi) {
                Ok(r) => r,
                Err(e @ SahlqvistError::Quantified) => return Err(Exit::usage(e.to_string())),
            };
            if json {
                println!("{}", json!({"sahlqvist": report.is_sahlqvist, "trace": report.trace}));
            } else {
                println!("{}", if report.is_sahlqvist { "sahlqvist" } else { "not sahlqvist" });
                for line in &report.trace {
                    println!("  {line}");
                }
            }
            if !report.is_sahlqvist {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Truncate { frame, at, depth, dot } => {
            let (g, _) = load_frame(&frame.frame)?;
            let w = world(&g, &at)?;
            let (sub, _) = Model::new(g, Valuation::new())?.truncated_submodel(w, depth);
            if dot {
                print!("{}", frame_to_dot(&sub.frame.base));
            } else {
                println!("{}", frame_to_json(&sub.frame));
            }
        }
        Command::Gallery { id, json, dot } => match id {
            None => {
                for e in gallery::catalogue() {
                    if json {
                        println!("{}", json!({"id": e.id, "provenance": e.provenance}));
                    } else {
                        println!("{:<16} {}", e.id, e.provenance);
                    }
                }
            }
            Some(id) => {
                let e = gallery::lookup(&id)?;
                if dot {
                    print!("{}", frame_to_dot(&e.frame.base));
                } else if json {
                    println!("{}", e.to_json());
                } else {
                    println!("{}", e.id);
                    println!("provenance: {}", e.provenance);
                    if let Some(c) = &e.caveat {
                        println!("caveat: {c}");
                    }
                    println!("worlds: {}", e.frame.base.names().join(" "));
                    let edges: Vec<String> = e
                        .frame
                        .base
                        .edges()
                        .into_iter()
                        .map(|(a, b)| format!("{}->{}", e.frame.base.name(a), e.frame.base.name(b)))
                        .collect();
                    println!("relation: {}", edges.join(" "));
                }
            }
        },
        Command::Selfcheck { seed } => {
            if !selfcheck::run(seed) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
