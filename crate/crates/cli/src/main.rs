use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use prequant_core::cech::{
    compare_models, curvature, dglie_membership, flat_moduli, gauge_reduce, holonomy_along, is_integral,
    prequantize_torus, r3_corpus, DeligneCochain, GaugeBand, GaugeOutcome, Nerve, SemidirectElement,
};
use prequant_core::conventions::{Conventions, JacobiConvention, SlotOrder};
use prequant_core::exterior::{parse_form, parse_vector_field, Chart, ChartRef};
use prequant_core::linalg::SparseVec;
use prequant_core::linfinity::{
    abelian, is_cocycle, string_extension, su2, verify_l_infinity, verify_morphism, LInfinityData, LieCocycle,
    MorphismComponents,
};
use prequant_core::nplectic::{
    dw_check, jacobi_report, kernel_complex, ks_cocycle_with, l_infty_bracket_with, solve_hamiltonian, Observable,
    PreNPlectic,
};
use prequant_core::runner::{emit_report, list_scenarios, parse_overrides, run_scenario, DEFAULT_SEED};
use prequant_core::{Error, Scalar};

#[derive(Parser)]
#[command(
    name = "prequant",
    version,
    about = "Exact higher prequantum geometry on flat charts"
)]
struct Cli {
    /// Print elapsed wall time to stderr.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one L∞ bracket of observables.
    Bracket {
        #[command(flatten)]
        structure: Structure,
        #[command(flatten)]
        obs: Observables,
    },
    /// Generalized Jacobi identities on a set of observables.
    Jacobi {
        #[command(flatten)]
        structure: Structure,
        #[command(flatten)]
        obs: Observables,
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
        #[arg(long, default_value = "shuffle")]
        jacobi: String,
    },
    /// Kostant–Souriau cocycle ι_{v₁∧⋯∧v_k} ω on Hamiltonian fields.
    Ks {
        #[command(flatten)]
        structure: Structure,
        /// Vector field, e.g. `x0*pd1`; repeatable.
        #[arg(long = "field", required = true)]
        fields: Vec<String>,
    },
    /// Betti numbers of the closed-form complex on a torus.
    Kernel {
        #[arg(long, default_value = "T2")]
        chart: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        band: i64,
    },
    /// De Donder–Weyl check of dH against the n-ary bracket.
    Dw {
        #[command(flatten)]
        structure: Structure,
        #[arg(long)]
        hamiltonian: String,
        #[arg(long = "field", required = true)]
        fields: Vec<String>,
    },
    /// Verify L∞ relations of structure constants.
    Lverify {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
        #[arg(long, default_value = "shuffle")]
        jacobi: String,
    },
    /// Chevalley–Eilenberg cocycle check.
    Cocycle {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// Cocycle JSON: {"degree": k, "values": [{"inputs": [...], "value": "..."}]}, or `killing`.
        #[arg(long)]
        cochain: String,
    },
    /// Extension of a Lie algebra by a cocycle, as L∞ structure constants.
    Extend {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        cochain: String,
    },
    /// Verify an L∞ morphism between two algebras.
    Morphism {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        /// Components JSON: [{"inputs": [...], "output": {"name": "value"}}].
        #[arg(long)]
        components: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
    },
    /// Čech–Deligne cochains.
    #[command(subcommand)]
    Deligne(Deligne),
    /// Built-in scenarios.
    #[command(subcommand)]
    Scenario(Scenario),
}

#[derive(Subcommand)]
enum Deligne {
    /// Cocycle check with residuals.
    Check { cochain: PathBuf },
    /// Glued curvature and its periods.
    Curv { cochain: PathBuf },
    /// Search for a gauge transformation between two cochains.
    Gauge {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = 2)]
        poly: u32,
        #[arg(long, default_value_t = 2)]
        wave: i64,
    },
    /// Holonomy along each torus axis.
    Holonomy { cochain: PathBuf },
    /// Flat moduli sampling on S¹ or T².
    Flat {
        #[arg(long, default_value = "s1")]
        nerve: String,
        #[arg(long, default_value_t = 12)]
        samples: usize,
        #[arg(long, default_value_t = 2)]
        poly: u32,
        #[arg(long, default_value_t = 2)]
        wave: i64,
        #[arg(long, env = "PREQUANT_SEED")]
        seed: Option<u64>,
    },
    /// Membership of an element in the strict model of a cocycle.
    Dglie { cocycle: PathBuf, element: PathBuf },
    /// Compare the strict model with the L∞ bracket; `--corpus r3` uses the built-in corpus.
    Compare {
        #[arg(long)]
        corpus: Option<String>,
        cocycle: Option<PathBuf>,
        members: Option<PathBuf>,
    },
    /// Emit the T² prequantization cocycle of curvature k dx∧dy.
    Prequantize { k: i64 },
}

#[derive(Subcommand)]
enum Scenario {
    List,
    Run {
        name: String,
        /// Parameter override `key=value`; repeatable.
        #[arg(long = "set")]
        set: Vec<String>,
        #[arg(long, env = "PREQUANT_SEED")]
        seed: Option<u64>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Structure {
    /// Chart code: `R3`, `T2`, or axis letters such as `rt`.
    #[arg(long, default_value = "R3")]
    chart: String,
    #[arg(long)]
    omega: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "last-first")]
    slots: String,
}

#[derive(Args)]
struct Observables {
    /// Hamiltonian form of a degree-0 pair (its field is solved for); repeatable.
    #[arg(long = "pair")]
    pairs: Vec<String>,
    /// Higher observable `degree:form`; repeatable, placed after the pairs.
    #[arg(long = "higher")]
    higher: Vec<String>,
}

#[derive(Args)]
struct AlgebraArg {
    /// `su2`, `abelian:a,b,...`, or a JSON file.
    #[arg(long)]
    algebra: String,
}

type Outcome = Result<(Value, bool), Error>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = dispatch(cli.command);
    if cli.timing {
        eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn print(v: &Value) {
    let mut text = serde_json::to_vec_pretty(v).expect("JSON values serialize");
    text.push(b'\n');
    write_stdout(&text);
}

fn write_stdout(bytes: &[u8]) {
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = std::io::stdout().lock().write_all(bytes);
}

fn finish(out: Outcome) -> Result<u8, Error> {
    let (v, ok) = out?;
    print(&v);
    Ok(if ok { 0 } else { 1 })
}

fn dispatch(cmd: Command) -> Result<u8, Error> {
    match cmd {
        Command::Bracket { structure, obs } => finish(bracket(&structure, &obs)),
        Command::Jacobi {
            structure,
            obs,
            max_arity,
            jacobi,
        } => finish(jacobi_cmd(&structure, &obs, max_arity, &jacobi)),
        Command::Ks { structure, fields } => finish(ks(&structure, &fields)),
        Command::Kernel { chart, n, band } => {
            let kc = kernel_complex(&Chart::from_code(&chart)?, n, band)?;
            finish(Ok((serde_json::to_value(&kc).expect("serializable"), true)))
        }
        Command::Dw {
            structure,
            hamiltonian,
            fields,
        } => finish(dw(&structure, &hamiltonian, &fields)),
        Command::Lverify {
            algebra,
            max_arity,
            jacobi,
        } => {
            let l = load_algebra(&algebra.algebra)?;
            let r = verify_l_infinity(&l, max_arity, convention(&jacobi)?)?;
            finish(Ok((serde_json::to_value(&r).expect("serializable"), r.all_zero)))
        }
        Command::Cocycle { algebra, cochain } => {
            let g = load_algebra(&algebra.algebra)?;
            let mu = load_cochain(&g, &cochain)?;
            let (ok, residual) = is_cocycle(&g, &mu)?;
            let residual: BTreeMap<String, String> = residual
                .iter()
                .map(|(k, v)| (format!("{k:?}"), v.to_string()))
                .collect();
            finish(Ok((json!({"cocycle": ok, "residual": residual}), ok)))
        }
        Command::Extend { algebra, cochain } => {
            let g = load_algebra(&algebra.algebra)?;
            let mu = load_cochain(&g, &cochain)?;
            finish(Ok((string_extension(&g, &mu)?.to_json(), true)))
        }
        Command::Morphism {
            source,
            target,
            components,
            max_arity,
        } => {
            let (src, dst) = (load_algebra(&source)?, load_algebra(&target)?);
            let f = load_morphism(&src, &dst, &read_json(&components)?)?;
            let r = verify_morphism(&f, &src, &dst, max_arity)?;
            finish(Ok((serde_json::to_value(&r).expect("serializable"), r.all_zero)))
        }
        Command::Deligne(d) => finish(deligne(d)),
        Command::Scenario(Scenario::List) => {
            let list: Vec<Value> = list_scenarios()
                .iter()
                .map(|s| json!({"name": s.name, "summary": s.summary, "parameters": s.defaults.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect::<BTreeMap<_, _>>()}))
                .collect();
            finish(Ok((json!(list), true)))
        }
        Command::Scenario(Scenario::Run { name, set, seed, json }) => {
            let overrides = parse_overrides(&set)?;
            let report = run_scenario(&name, &overrides, seed.unwrap_or(DEFAULT_SEED))?;
            let bytes = emit_report(&report);
            match json {
                Some(path) => {
                    std::fs::write(&path, &bytes).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
                }
                None => write_stdout(&bytes),
            }
            for c in &report.checks {
                eprintln!("{} {}", if c.pass { "pass" } else { "FAIL" }, c.name);
            }
            Ok(report.exit_code() as u8)
        }
    }
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn slot_order(s: &str) -> Result<SlotOrder, Error> {
    serde_json::from_value(json!(s)).map_err(|e| Error::InvalidOverride(format!("slots: {e}")))
}

fn convention(s: &str) -> Result<JacobiConvention, Error> {
    serde_json::from_value(json!(s)).map_err(|e| Error::InvalidOverride(format!("jacobi: {e}")))
}

fn structure(s: &Structure) -> Result<(ChartRef, PreNPlectic, SlotOrder), Error> {
    let chart = Chart::from_code(&s.chart)?;
    let p = PreNPlectic::new(parse_form(&chart, &s.omega)?, s.n)?;
    Ok((chart, p, slot_order(&s.slots)?))
}

fn observables(chart: &ChartRef, p: &PreNPlectic, o: &Observables) -> Result<Vec<Observable>, Error> {
    let mut out = Vec::new();
    for h in &o.pairs {
        out.push(Observable::Pair(solve_hamiltonian(p, &parse_form(chart, h)?)?.pair));
    }
    for s in &o.higher {
        let (deg, form) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected degree:form, got `{s}`")))?;
        let deg: usize = deg
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad degree in `{s}`")))?;
        out.push(Observable::form(p, deg, parse_form(chart, form)?)?);
    }
    Ok(out)
}

fn bracket(s: &Structure, o: &Observables) -> Outcome {
    let (chart, p, slots) = structure(s)?;
    let args = observables(&chart, &p, o)?;
    let r = l_infty_bracket_with(&p, &args, slots)?;
    Ok((
        json!({"arguments": args.iter().map(Observable::to_json).collect::<Vec<_>>(), "result": r.to_json()}),
        true,
    ))
}

fn jacobi_cmd(s: &Structure, o: &Observables, max_arity: usize, jacobi: &str) -> Outcome {
    let (chart, p, slots) = structure(s)?;
    let args = observables(&chart, &p, o)?;
    let r = jacobi_report(
        &p,
        &args,
        max_arity,
        Conventions {
            jacobi: convention(jacobi)?,
            slots,
        },
    )?;
    Ok((r.to_json(), r.all_zero()))
}

fn ks(s: &Structure, fields: &[String]) -> Outcome {
    let (chart, p, slots) = structure(s)?;
    let fs = fields
        .iter()
        .map(|f| parse_vector_field(&chart, f))
        .collect::<Result<Vec<_>, _>>()?;
    let c = ks_cocycle_with(&p, &fs, slots)?;
    Ok((json!({"cocycle": c.to_string(), "form": c.to_json()}), true))
}

fn dw(s: &Structure, h: &str, fields: &[String]) -> Outcome {
    let (chart, p, slots) = structure(s)?;
    let fs = fields
        .iter()
        .map(|f| parse_vector_field(&chart, f))
        .collect::<Result<Vec<_>, _>>()?;
    let r = dw_check(&p, &parse_form(&chart, h)?, &fs, slots)?;
    Ok((r.to_json(), r.holds))
}

fn load_algebra(arg: &str) -> Result<LInfinityData, Error> {
    if arg == "su2" {
        return Ok(su2());
    }
    if let Some(names) = arg.strip_prefix("abelian:") {
        let names: Vec<&str> = names.split(',').map(str::trim).collect();
        return Ok(abelian(&names));
    }
    LInfinityData::from_json(&read_json(Path::new(arg))?)
}

fn scalar(v: &Value) -> Result<Scalar, Error> {
    match v {
        Value::String(s) => s.parse(),
        Value::Number(n) => n.to_string().parse(),
        _ => Err(Error::Parse(format!("expected a scalar, got {v}"))),
    }
}

fn indices(g: &LInfinityData, v: &Value) -> Result<Vec<usize>, Error> {
    v.as_array()
        .ok_or_else(|| Error::Parse("inputs must be an array of generator names".into()))?
        .iter()
        .map(|n| g.index_of(n.as_str().ok_or_else(|| Error::Parse(format!("bad generator {n}")))?))
        .collect()
}

fn load_cochain(g: &LInfinityData, arg: &str) -> Result<LieCocycle, Error> {
    if arg == "killing" {
        return Ok(LieCocycle::killing_three_form(g));
    }
    let v = read_json(Path::new(arg))?;
    let degree = v["degree"]
        .as_u64()
        .ok_or_else(|| Error::Parse("cochain needs an integer `degree`".into()))? as usize;
    let mut mu = LieCocycle::zero(g.dim(), degree);
    for entry in v["values"]
        .as_array()
        .ok_or_else(|| Error::Parse("cochain needs `values`".into()))?
    {
        mu.set(&indices(g, &entry["inputs"])?, scalar(&entry["value"])?)?;
    }
    Ok(mu)
}

fn load_morphism(src: &LInfinityData, dst: &LInfinityData, v: &Value) -> Result<MorphismComponents, Error> {
    let mut f = MorphismComponents::new();
    for entry in v
        .as_array()
        .ok_or_else(|| Error::Parse("components must be an array".into()))?
    {
        let inputs = indices(src, &entry["inputs"])?;
        let mut out = SparseVec::new();
        for (name, c) in entry["output"]
            .as_object()
            .ok_or_else(|| Error::Parse("output must be an object".into()))?
        {
            out.insert(dst.index_of(name)?, scalar(c)?);
        }
        f.set(src, dst, &inputs, out)?;
    }
    Ok(f)
}

fn load_deligne(path: &Path) -> Result<DeligneCochain, Error> {
    DeligneCochain::from_json(&read_json(path)?)
}

fn deligne(cmd: Deligne) -> Outcome {
    match cmd {
        Deligne::Check { cochain } => {
            let r = load_deligne(&cochain)?.is_cocycle()?;
            Ok((serde_json::to_value(&r).expect("serializable"), r.is_cocycle))
        }
        Deligne::Curv { cochain } => {
            let c = load_deligne(&cochain)?;
            let f = curvature(&c)?;
            let periods = c.nerve().torus_dim().map(|_| is_integral(&f)).transpose()?;
            let ok = periods.as_ref().is_none_or(|p| p.integral);
            Ok((
                json!({"curvature": f.to_string(), "form": f.to_json(), "integrality": periods}),
                ok,
            ))
        }
        Deligne::Gauge {
            first,
            second,
            poly,
            wave,
        } => {
            let out = gauge_reduce(
                &load_deligne(&first)?,
                &load_deligne(&second)?,
                GaugeBand { poly, wave },
            )?;
            Ok(match out {
                GaugeOutcome::Witness(b) => (json!({"equivalent": true, "witness": b.to_json()}), true),
                GaugeOutcome::NoWitness { obstruction } => {
                    (json!({"equivalent": false, "obstruction": obstruction}), false)
                }
            })
        }
        Deligne::Holonomy { cochain } => {
            let c = load_deligne(&cochain)?;
            let d = c
                .nerve()
                .torus_dim()
                .ok_or_else(|| Error::WrongNerve("holonomy needs a torus cover".into()))?;
            let hs = (0..d).map(|a| holonomy_along(&c, a)).collect::<Result<Vec<_>, _>>()?;
            Ok((serde_json::to_value(&hs).expect("serializable"), true))
        }
        Deligne::Flat {
            nerve,
            samples,
            poly,
            wave,
            seed,
        } => {
            let n = match nerve.as_str() {
                "s1" => Nerve::circle(),
                "t2" => Nerve::torus(2)?,
                other => return Err(Error::WrongNerve(format!("unknown nerve `{other}` (use s1 or t2)"))),
            };
            let r = flat_moduli(&n, 1, GaugeBand { poly, wave }, samples, seed.unwrap_or(DEFAULT_SEED))?;
            let ok = r.classification_matches_holonomy && r.holonomy_gauge_invariant && r.automorphisms_are_constants;
            Ok((serde_json::to_value(&r).expect("serializable"), ok))
        }
        Deligne::Dglie { cocycle, element } => {
            let a = load_deligne(&cocycle)?;
            let e = SemidirectElement::from_json(&read_json(&element)?)?;
            let r = dglie_membership(&a, &e)?;
            Ok((r.to_json(), r.member))
        }
        Deligne::Compare {
            corpus,
            cocycle,
            members,
        } => {
            let (a, ms) = match (corpus.as_deref(), cocycle, members) {
                (Some("r3"), _, _) => r3_corpus()?,
                (None, Some(c), Some(m)) => {
                    let ms = read_json(&m)?
                        .as_array()
                        .ok_or_else(|| Error::Parse("members must be a JSON array".into()))?
                        .iter()
                        .map(SemidirectElement::from_json)
                        .collect::<Result<Vec<_>, _>>()?;
                    (load_deligne(&c)?, ms)
                }
                _ => {
                    return Err(Error::InvalidOverride(
                        "give --corpus r3 or a cocycle and a members file".into(),
                    ))
                }
            };
            Ok((compare_models(&a, &ms)?.to_json(), true))
        }
        Deligne::Prequantize { k } => Ok((prequantize_torus(&k.into())?.to_json(), true)),
    }
}
