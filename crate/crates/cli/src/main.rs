//! `subminimal`: JSON front end to the library. Exit status 0 means ok or
//! theorem, 1 refuted or violation, 2 a usage or input error.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use subminimal::algebra::{
    check_nalgebra, dual_frame, general_algebraic_filtration, least_filtration_correspondence,
    sublattice_filtration, NAlgebra,
};
use subminimal::antichain::{build_delta, order_onto, positive_morphism};
use subminimal::filtration::{decide_with, greatest_filtration, DecideConfig, Verdict};
use subminimal::frames::json::{frame_from_json, frame_to_json, model_from_json, model_to_json};
use subminimal::frames::{
    countermodel_search_with, eval, frame_class, Countermodel, FrameError, SearchConfig,
};
use subminimal::modal::{
    check_proof, check_proof_of, en_check, modal_nframe_from_json, ns4_frame_from_json,
    ns4_refutation, rn_validity, HilbertProof, ProofLine, System,
};
use subminimal::syntax::{
    close_set, godel_translate, parse_modal, parse_prop, Formula, ModalFormula,
};
use subminimal::LogicId;

#[derive(Parser)]
#[command(name = "subminimal", version, about = "Subminimal logics of negation")]
struct Cli {
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Largest frame size for countermodel searches.
    #[arg(long, global = true, default_value_t = 4)]
    max_worlds: usize,
    /// Give up on searches after this many milliseconds.
    #[arg(long, global = true)]
    timeout_ms: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its normal rendering.
    Parse {
        formula: String,
        /// Read the bi-modal language (`[]`, `[n]`, `F`).
        #[arg(long)]
        modal: bool,
    },
    /// Decide a formula in N, NeF, CoPC or MPC.
    Decide(LogicFormula),
    /// Search for a countermodel on frames of the logic.
    Countermodel(LogicFormula),
    /// Check an N-frame and report the logics whose frame class contains it.
    CheckFrame {
        #[arg(long)]
        frame: String,
        /// Fail unless the frame belongs to this logic.
        #[arg(long)]
        logic: Option<LogicId>,
    },
    /// Greatest filtration of a model through the subformulas of a formula.
    Filtrate {
        #[arg(long)]
        model: String,
        #[arg(long)]
        sigma: String,
    },
    #[command(subcommand)]
    Algebra(AlgebraCommand),
    /// The matrix of order-preserving images and positive morphisms among
    /// the frames of the antichain.
    Antichain {
        #[arg(long, default_value_t = 2)]
        max_n: usize,
        /// Largest index for the positive-morphism matrix.
        #[arg(long, default_value_t = 2)]
        max_n_positive: usize,
    },
    /// Translate a formula into the bi-modal language.
    Translate { formula: String },
    #[command(subcommand)]
    Ns4(Ns4Command),
}

#[derive(Args)]
struct LogicFormula {
    #[arg(long)]
    logic: LogicId,
    formula: String,
}

#[derive(Subcommand)]
enum AlgebraCommand {
    /// Dual frame of an N-algebra.
    Dual {
        #[arg(long)]
        algebra: String,
    },
    /// Check the N-algebra axioms.
    Check {
        #[arg(long)]
        algebra: String,
    },
    /// Filtration of an algebra and valuation through a set of formulas.
    Filtrate {
        #[arg(long)]
        algebra: String,
        /// JSON object from variables to elements.
        #[arg(long)]
        valuation: String,
        #[arg(long)]
        sigma: String,
        /// JSON array of elements; defaults to the generated sublattice.
        #[arg(long)]
        sublattice: Option<String>,
    },
}

#[derive(Subcommand)]
enum Ns4Command {
    /// Validity of a bi-modal formula on an NS4 frame.
    Valid {
        #[arg(long)]
        frame: String,
        formula: String,
    },
    /// Check a Hilbert derivation.
    CheckProof {
        #[arg(long)]
        proof: String,
        /// System for proofs given as a bare list of lines.
        #[arg(long, default_value = "ns4")]
        system: String,
        /// Premise for proofs given as a bare list of lines; repeatable.
        #[arg(long)]
        premise: Vec<String>,
        /// Require the last line to be this formula.
        #[arg(long)]
        target: Option<String>,
    },
    /// The condition E_n on a frame with an arbitrary N.
    En {
        #[arg(long)]
        frame: String,
        #[arg(long)]
        n: usize,
    },
    /// Whether the rule R_n preserves validity on a frame with an arbitrary N.
    Rn {
        #[arg(long)]
        frame: String,
        #[arg(long)]
        n: usize,
    },
}

/// What a command reports: a status with an optional witness and exit code.
struct Outcome {
    status: &'static str,
    witness: Option<Value>,
    code: u8,
}

impl Outcome {
    fn ok(witness: Value) -> Outcome {
        Outcome { status: "ok", witness: Some(witness), code: 0 }
    }

    fn violation(witness: Value) -> Outcome {
        Outcome { status: "violation", witness: Some(witness), code: 1 }
    }

    fn verdict(ok: bool, witness: Value) -> Outcome {
        if ok {
            Outcome::ok(witness)
        } else {
            Outcome::violation(witness)
        }
    }
}

type CliResult = Result<Outcome, String>;

/// Inline JSON if the argument looks like JSON, otherwise a file path.
fn read_json(arg: &str) -> Result<Value, String> {
    let text = match arg.trim_start().chars().next() {
        Some('{') | Some('[') => arg.to_owned(),
        _ => fs::read_to_string(arg).map_err(|e| format!("{arg}: {e}"))?,
    };
    serde_json::from_str(&text).map_err(|e| format!("{arg}: {e}"))
}

fn prop(s: &str) -> Result<Formula, String> {
    parse_prop(s).map_err(|e| format!("{s:?}: {e}"))
}

fn modal(s: &str) -> Result<ModalFormula, String> {
    parse_modal(s).map_err(|e| format!("{s:?}: {e}"))
}

fn countermodel_json(f: &Formula, c: &Countermodel) -> Result<Value, String> {
    if eval(&c.model, f).contains(c.world) {
        return Err(format!("internal error: countermodel does not refute {f}"));
    }
    let mut v = model_to_json(&c.model);
    v["world"] = json!(c.world);
    Ok(v)
}

fn search_config(cli: &Cli) -> SearchConfig {
    let mut cfg = SearchConfig::new(cli.max_worlds);
    cfg.deadline = cli.timeout_ms.map(|ms| Instant::now() + Duration::from_millis(ms));
    cfg
}

fn algebra(arg: &str) -> Result<NAlgebra, String> {
    serde_json::from_value(read_json(arg)?).map_err(|e| format!("{arg}: {e}"))
}

fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Parse { formula, modal: m } => {
            if *m {
                let f = modal(formula)?;
                Ok(Outcome::ok(json!({
                    "formula": f.to_string(),
                    "size": f.size(),
                    "depth": f.depth(),
                    "vars": f.vars(),
                })))
            } else {
                let f = prop(formula)?;
                Ok(Outcome::ok(json!({
                    "formula": f.to_string(),
                    "size": f.size(),
                    "depth": f.depth(),
                    "vars": f.vars(),
                })))
            }
        }
        Command::Decide(LogicFormula { logic, formula }) => {
            let f = prop(formula)?;
            let cfg = DecideConfig { search: search_config(cli), ..DecideConfig::default() };
            match decide_with(*logic, &f, &cfg).map_err(|e| e.to_string())? {
                Verdict::Theorem { instances } => Ok(Outcome {
                    status: "theorem",
                    witness: Some(json!({
                        "instances": instances.iter().map(|i| i.to_string()).collect::<Vec<_>>()
                    })),
                    code: 0,
                }),
                Verdict::Refuted(c) => Ok(Outcome {
                    status: "refuted",
                    witness: Some(countermodel_json(&f, &c)?),
                    code: 1,
                }),
                Verdict::NoCountermodelUpToBound { max_worlds } => Ok(Outcome {
                    status: "no-countermodel-up-to-bound",
                    witness: Some(json!({ "max_worlds": max_worlds })),
                    code: 0,
                }),
            }
        }
        Command::Countermodel(LogicFormula { logic, formula }) => {
            let f = prop(formula)?;
            match countermodel_search_with(*logic, &f, &search_config(cli)).map_err(|e| e.to_string())? {
                Some(c) => Ok(Outcome {
                    status: "refuted",
                    witness: Some(countermodel_json(&f, &c)?),
                    code: 1,
                }),
                None => Ok(Outcome {
                    status: "no-countermodel-up-to-bound",
                    witness: Some(json!({ "max_worlds": cli.max_worlds })),
                    code: 0,
                }),
            }
        }
        Command::CheckFrame { frame, logic } => {
            let fr = match frame_from_json(&read_json(frame)?) {
                Ok(fr) => fr,
                Err(FrameError::Json(e)) => return Err(e),
                Err(e) => return Ok(Outcome::violation(json!({ "reason": e.to_string() }))),
            };
            let classes: serde_json::Map<String, Value> = LogicId::ALL
                .iter()
                .map(|&l| (l.to_string(), json!(frame_class(&fr, l))))
                .collect();
            let ok = logic.is_none_or(|l| frame_class(&fr, l));
            Ok(Outcome::verdict(ok, json!({ "classes": classes })))
        }
        Command::Filtrate { model, sigma } => {
            let m = model_from_json(&read_json(model)?).map_err(|e| e.to_string())?;
            let sigma = close_set([&prop(sigma)?]);
            let r = greatest_filtration(&m, &sigma).map_err(|e| e.to_string())?;
            Ok(Outcome::ok(r.to_json()))
        }
        Command::Algebra(cmd) => run_algebra(cmd),
        Command::Antichain { max_n, max_n_positive } => {
            let ds: Vec<_> = (0..=*max_n).map(build_delta).collect();
            let leq: Vec<Vec<bool>> = ds
                .iter()
                .map(|a| ds.iter().map(|b| order_onto(&a.poset, &b.poset).is_some()).collect())
                .collect();
            let k = (*max_n_positive).min(*max_n);
            let pos: Vec<Vec<bool>> = ds[..=k]
                .iter()
                .map(|a| ds[..=k].iter().map(|b| positive_morphism(&a.poset, &b.poset).is_some()).collect())
                .collect();
            let antichain = (0..ds.len()).all(|i| (0..ds.len()).all(|j| leq[i][j] == (i == j)));
            Ok(Outcome::verdict(
                antichain,
                json!({ "leq": leq, "positive": pos, "sizes": ds.iter().map(|d| d.poset.size()).collect::<Vec<_>>() }),
            ))
        }
        Command::Translate { formula } => {
            let f = prop(formula)?;
            Ok(Outcome::ok(json!({ "formula": godel_translate(&f).to_string() })))
        }
        Command::Ns4(cmd) => run_ns4(cmd),
    }
}

fn run_algebra(cmd: &AlgebraCommand) -> CliResult {
    match cmd {
        AlgebraCommand::Dual { algebra: a } => {
            let a = algebra(a)?;
            let d = dual_frame(&a).map_err(|e| e.to_string())?;
            let mut v = frame_to_json(d.top_frame.frame());
            v["top"] = json!(d.top_frame.top());
            v["filters"] = json!(d
                .filters
                .iter()
                .map(|&f| (0..a.size).filter(|&x| f >> x & 1 == 1).collect::<Vec<_>>())
                .collect::<Vec<_>>());
            Ok(Outcome::ok(v))
        }
        AlgebraCommand::Check { algebra: a } => {
            let a = algebra(a)?;
            Ok(match check_nalgebra(&a) {
                Ok(()) => Outcome::ok(json!({ "size": a.size })),
                Err(e) => Outcome::violation(json!({ "reason": e.to_string() })),
            })
        }
        AlgebraCommand::Filtrate { algebra: a, valuation, sigma, sublattice } => {
            let a = algebra(a)?;
            let mu: BTreeMap<String, usize> =
                serde_json::from_value(read_json(valuation)?).map_err(|e| format!("valuation: {e}"))?;
            let sigma: BTreeSet<Formula> = close_set([&prop(sigma)?]);
            let r = match sublattice {
                Some(l) => {
                    let l: Vec<usize> =
                        serde_json::from_value(read_json(l)?).map_err(|e| format!("sublattice: {e}"))?;
                    general_algebraic_filtration(&a, &mu, &sigma, &l)
                }
                None => sublattice_filtration(&a, &mu, &sigma),
            }
            .map_err(|e| e.to_string())?;
            let corr = sublattice.is_none() && least_filtration_correspondence(&a, &mu, &sigma);
            Ok(Outcome::ok(json!({
                "elements": r.elements,
                "algebra": r.algebra,
                "valuation": r.valuation,
                "correspondence": corr,
            })))
        }
    }
}

fn proof(arg: &str, system: &str, premises: &[String]) -> Result<HilbertProof, String> {
    let v = read_json(arg)?;
    if v.is_array() {
        let lines: Vec<ProofLine> = serde_json::from_value(v).map_err(|e| format!("{arg}: {e}"))?;
        let system = match system.to_ascii_lowercase().as_str() {
            "ns4" => System::NS4,
            "cos4" => System::CoS4,
            s => return Err(format!("unknown system '{s}' (expected ns4 or cos4)")),
        };
        let premises = premises.iter().map(|p| modal(p)).collect::<Result<_, _>>()?;
        Ok(HilbertProof { system, premises, lines })
    } else {
        serde_json::from_value(v).map_err(|e| format!("{arg}: {e}"))
    }
}

fn run_ns4(cmd: &Ns4Command) -> CliResult {
    match cmd {
        Ns4Command::Valid { frame, formula } => {
            let fr = ns4_frame_from_json(&read_json(frame)?).map_err(|e| e.to_string())?;
            let f = modal(formula)?;
            Ok(match ns4_refutation(&fr, &f) {
                None => Outcome::ok(json!({ "worlds": fr.size() })),
                Some((val, w)) => Outcome::violation(json!({
                    "valuation": val.iter().map(|(k, b)| (k.clone(), json!(b.0))).collect::<serde_json::Map<_, _>>(),
                    "world": w,
                })),
            })
        }
        Ns4Command::CheckProof { proof: p, system, premise, target } => {
            let p = proof(p, system, premise)?;
            let res = match target {
                Some(t) => check_proof_of(&p, &modal(t)?),
                None => check_proof(&p),
            };
            Ok(match res {
                Ok(()) => Outcome::ok(json!({ "lines": p.lines.len() })),
                Err(bad) => Outcome::violation(json!({ "line": bad.index, "reason": bad.reason })),
            })
        }
        Ns4Command::En { frame, n } => {
            let fr = modal_nframe_from_json(&read_json(frame)?).map_err(|e| e.to_string())?;
            Ok(Outcome::verdict(en_check(&fr, *n), json!({ "n": n })))
        }
        Ns4Command::Rn { frame, n } => {
            let fr = modal_nframe_from_json(&read_json(frame)?).map_err(|e| e.to_string())?;
            Ok(Outcome::verdict(rn_validity(&fr, *n), json!({ "n": n })))
        }
    }
}

fn print(cli_pretty: bool, v: &Value) {
    let s = if cli_pretty {
        serde_json::to_string_pretty(v)
    } else {
        serde_json::to_string(v)
    };
    println!("{}", s.expect("JSON values serialize"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => {
            let mut v = json!({ "status": o.status });
            if let Some(w) = o.witness {
                v["witness"] = w;
            }
            print(cli.pretty, &v);
            ExitCode::from(o.code)
        }
        Err(e) => {
            print(cli.pretty, &json!({ "status": "error", "message": e }));
            ExitCode::from(2)
        }
    }
}
