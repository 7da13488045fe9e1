//! The `sidon` command-line tool.
//!
//! Every subcommand produces a JSON report wrapped in an envelope carrying
//! `format_version`, the parameter echo, input digests and the seed. The
//! report is deterministic; wall time goes only into the run manifest written
//! next to `--out`.

mod args;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value as Json};
use sha2::{Digest, Sha256};

pub use args::{BoundsCmd, Cli, Command, ConstructCmd, GlobalOpts, ModeArg};

use crate::bounds::{self, BoundReport, Verdict};
use crate::constructions::{self, ConstructionReport, Status};
use crate::counting::{self, energy_k, energy_prime_k_enumerate, energy_prime_k_with, rep_histogram};
use crate::error::{Error, Result};
use crate::format::{parse_set, serialize_set, serialize_set_text, ParseOptions};
use crate::set::GroundSet;
use crate::sidon::{self, BFamilyParams};
use crate::structure::{self, PipelineOptions, PipelineReport, StructureCertificate};
use crate::util::Exponent;
use crate::CompositionMode;

pub const FORMAT_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

/// Wrapper written for every subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct Envelope {
    pub format_version: u32,
    pub tool_version: &'static str,
    pub command: String,
    pub params: Json,
    pub inputs: Vec<InputDigest>,
    pub seed: Option<u64>,
    /// `ok`, `violation` or `error`.
    pub status: &'static str,
    pub exit_code: i32,
    pub result: Json,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool_version: &'static str,
    pub command: String,
    pub params: Json,
    pub inputs: Vec<InputDigest>,
    pub seed: Option<u64>,
    pub wall_time_ms: u128,
    pub outputs: Vec<String>,
}

/// What a subcommand hands back before it is wrapped.
struct Outcome {
    result: Json,
    ok: bool,
    summary: String,
}

impl Outcome {
    fn new(result: impl Serialize, ok: bool, summary: impl Into<String>) -> Self {
        Outcome { result: to_json(&result), ok, summary: summary.into() }
    }
}

fn to_json<T: Serialize + ?Sized>(v: &T) -> Json {
    serde_json::to_value(v).expect("report types serialize")
}

/// Per-run state: input digests and the resolved seed.
struct Ctx {
    global: GlobalOpts,
    inputs: Vec<InputDigest>,
    seed: Option<u64>,
    extra_outputs: Vec<PathBuf>,
}

impl Ctx {
    fn read(&mut self, role: &str, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.inputs.push(InputDigest {
            role: role.into(),
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).map_err(|e| Error::MalformedInput { line: 0, column: 0, message: e.to_string() })
    }

    fn set(&mut self, role: &str, path: &Path) -> Result<GroundSet> {
        let text = self.read(role, path)?;
        parse_set(&text, ParseOptions { allow_duplicates: self.global.allow_duplicates })
    }

    /// `--seed`, or one derived from the input digests so reruns agree.
    fn seed(&mut self) -> u64 {
        let s = self.global.seed.unwrap_or_else(|| {
            let mut h = Sha256::new();
            for d in &self.inputs {
                h.update(d.sha256.as_bytes());
            }
            let digest = h.finalize();
            u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
        });
        self.seed = Some(s);
        s
    }
}

fn exponent(s: &str, what: &str) -> Result<Exponent> {
    s.parse().map_err(|e: Error| Error::invalid(format!("--{what}: {e}")))
}

fn command_name(cmd: &Command) -> String {
    match to_json(cmd).get("command") {
        Some(Json::String(s)) => s.clone(),
        _ => "unknown".into(),
    }
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let _ = env_logger::Builder::new().filter_level(log::LevelFilter::Warn).try_init();
    if let Some(t) = cli.global.threads {
        if t == 0 {
            eprintln!("error: --threads must be >= 1");
            return 2;
        }
        // A pool may already exist when `run` is called twice in one process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    run_parsed(cli)
}

fn run_parsed(cli: Cli) -> i32 {
    let start = Instant::now();
    let command = command_name(&cli.command);
    let mut params = to_json(&cli.command);
    if let Json::Object(m) = &mut params {
        m.remove("command");
        m.insert("global".into(), to_json(&cli.global));
    }
    let mut ctx = Ctx { global: cli.global.clone(), inputs: Vec::new(), seed: None, extra_outputs: Vec::new() };
    let (status, code, result, summary) = match dispatch(&mut ctx, &cli.command) {
        Ok(o) if o.ok => ("ok", 0, o.result, o.summary),
        Ok(o) => ("violation", 1, o.result, o.summary),
        Err(e) => {
            let code = e.exit_code();
            ("error", code, json!({ "error": e.to_string() }), format!("error: {e}"))
        }
    };
    let envelope = Envelope {
        format_version: FORMAT_VERSION,
        tool_version: TOOL_VERSION,
        command: command.clone(),
        params: params.clone(),
        inputs: ctx.inputs.clone(),
        seed: ctx.seed,
        status,
        exit_code: code,
        result,
    };
    let mut text = serde_json::to_string_pretty(&envelope).expect("serializable");
    text.push('\n');
    match &cli.global.out {
        Some(out) => {
            if let Err(e) = std::fs::write(out, &text) {
                eprintln!("error: cannot write {}: {e}", out.display());
                return 2;
            }
            let mut outputs = vec![out.display().to_string()];
            outputs.extend(ctx.extra_outputs.iter().map(|p| p.display().to_string()));
            let manifest = RunManifest {
                tool_version: TOOL_VERSION,
                command,
                params,
                inputs: ctx.inputs,
                seed: ctx.seed,
                wall_time_ms: start.elapsed().as_millis(),
                outputs,
            };
            let path = manifest_path(out);
            let mtext = serde_json::to_string_pretty(&manifest).expect("serializable") + "\n";
            if let Err(e) = std::fs::write(&path, mtext) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 2;
            }
            println!("{summary}");
        }
        None => {
            print!("{text}");
            eprintln!("{summary}");
        }
    }
    code
}

/// `report.json` -> `report.json.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn dispatch(ctx: &mut Ctx, cmd: &Command) -> Result<Outcome> {
    let cap = ctx.global.cap;
    match cmd {
        Command::Energy { input, k, mode, with_prime } => {
            let a = ctx.set("set", &input.set)?;
            let mode = CompositionMode::from(*mode);
            let mut r = energy_k(&a, *k, mode)?;
            if *with_prime {
                r.distinct_variant_value = Some(energy_prime_k_with(&a, *k, mode, Default::default())?);
            }
            let summary = format!(
                "E_{k}({mode}) = {} over |A| = {}, kappa = {}",
                r.value,
                a.len(),
                r.kappa.map_or("n/a".into(), |x| format!("{x:.6}"))
            );
            Ok(Outcome::new(r, true, summary))
        }
        Command::EnergyPrime { input, k, mode, reading, enumerate } => {
            let a = ctx.set("set", &input.set)?;
            let mode = CompositionMode::from(*mode);
            let reading = (*reading).into();
            let value = energy_prime_k_with(&a, *k, mode, reading)?;
            let mut ok = true;
            let mut result = json!({ "k": k, "mode": mode, "reading": reading, "set_size": a.len(), "value": value.to_string() });
            if *enumerate {
                let brute = energy_prime_k_enumerate(&a, *k, mode, reading)?;
                ok = brute == value;
                result["enumerated"] = json!(brute.to_string());
                result["agrees"] = json!(ok);
            }
            Ok(Outcome::new(result, ok, format!("E'_{k}({mode}) = {value}")))
        }
        Command::Histogram { input, right, mode } => {
            let a = ctx.set("set", &input.set)?;
            let b = match right {
                Some(p) => ctx.set("right", p)?,
                None => a.clone(),
            };
            let h = rep_histogram(&a, &b, (*mode).into())?;
            let summary = format!("{} distinct values from {} pairs", h.support_size(), h.total);
            Ok(Outcome::new(h, true, summary))
        }
        Command::Verify { input, g, k, mode } => {
            let s = ctx.set("set", &input.set)?;
            let mode = CompositionMode::from(*mode);
            let mult = sidon::verify_multiplicity(&s, *g as u64, mode)?;
            let mut ok = mult.is_none();
            let mut result = json!({ "set_size": s.len(), "g": g, "mode": mode, "multiplicity_ok": mult.is_none(), "multiplicity_witness": mult });
            if let Some(k) = k {
                if mode != CompositionMode::Difference {
                    return Err(Error::invalid("B°_k[g] membership is defined through differences; use --mode diff"));
                }
                let w = sidon::verify_bfamily(&s, BFamilyParams::new(*k, *g)?)?;
                ok &= w.is_none();
                result["k"] = json!(k);
                result["bfamily_ok"] = json!(w.is_none());
                result["bfamily_witness"] = to_json(&w);
            }
            let summary = if ok { "verified".to_string() } else { "violation found (witness in report)".to_string() };
            Ok(Outcome::new(result, ok, summary))
        }
        Command::Exact { input, k, mode } => {
            let a = ctx.set("set", &input.set)?;
            let r = sidon::sid_k_exact(&a, *k, (*mode).into(), cap)?;
            let summary = format!("Sid_{k} = {} ({} nodes)", r.size, r.nodes);
            Ok(Outcome::new(r, true, summary))
        }
        Command::Greedy { input, k, mode } => {
            let a = ctx.set("set", &input.set)?;
            let seed = ctx.seed();
            let mode = CompositionMode::from(*mode);
            let b = sidon::sid_k_greedy(&a, *k, mode, seed)?;
            let verified = sidon::verify_multiplicity(&b, *k as u64, mode)?.is_none();
            let summary = format!("greedy subset of size {} (verified: {verified})", b.len());
            Ok(Outcome::new(json!({ "k": k, "mode": mode, "size": b.len(), "subset": b, "verified": verified }), verified, summary))
        }
        Command::Extract { input, k, mode } => {
            let a = ctx.set("set", &input.set)?;
            let seed = ctx.seed();
            let r = sidon::extract_random(&a, *k, (*mode).into(), seed, ctx.global.trials)?;
            let summary = format!(
                "subset of size {} with multiplicities <= {} (verified: {})",
                r.subset.len(),
                r.certified_bound,
                r.verified
            );
            let ok = r.verified;
            Ok(Outcome::new(r, ok, summary))
        }
        Command::DenseCore { input, g } => {
            let a = ctx.set("set", &input.set)?;
            let (core, report) = sidon::dense_core_extract(&a, *g)?;
            let ok = report.floor_holds;
            let summary = format!("|A_*| = {}, energy ratio {:.6} (floor {:e})", core.len(), report.ratio, report.floor);
            Ok(Outcome::new(json!({ "core": core, "report": report }), ok, summary))
        }
        Command::Construct { which, set_out } => {
            let report = construct(ctx, which)?;
            if let Some(path) = set_out {
                let text = if path.extension().is_some_and(|e| e == "txt") {
                    serialize_set_text(&report.set)
                } else {
                    serialize_set(&report.set) + "\n"
                };
                std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                ctx.extra_outputs.push(path.clone());
            }
            let ok = report.status != Status::Fail;
            let summary = format!("|A| = {}, status {:?}: {}", report.set.len(), report.status, report.claim);
            Ok(Outcome::new(report, ok, summary))
        }
        Command::Decompose { input, delta, eps } => {
            let a = ctx.set("set", &input.set)?;
            let cert = structure::energy_gap_decompose(&a, exponent(delta, "delta")?, exponent(eps, "eps")?)?;
            let summary = format!("{} after {} steps", cert.kind(), cert.trace.len());
            Ok(Outcome::new(cert, true, summary))
        }
        Command::Rigid { input, delta, eps } => {
            let a = ctx.set("set", &input.set)?;
            let cert = structure::rigid_structure(&a, exponent(delta, "delta")?, exponent(eps, "eps")?)?;
            let summary = format!("{} after {} steps", cert.kind(), cert.trace.len());
            Ok(Outcome::new(cert, true, summary))
        }
        Command::PopularShifts { input, theta } => {
            let a = ctx.set("set", &input.set)?;
            let p = structure::popular_symmetry_set(&a, *theta)?;
            let summary = format!("{} shifts t with |A ∩ (A+t)| >= {theta}", p.len());
            Ok(Outcome::new(json!({ "theta": theta, "size": p.len(), "shifts": p }), true, summary))
        }
        Command::Pipeline { input, delta, eps, core } => {
            let a = ctx.set("set", &input.set)?;
            let opts = PipelineOptions {
                delta: exponent(delta, "delta")?,
                eps: exponent(eps, "eps")?,
                seed: ctx.seed(),
                trials: ctx.global.trials,
                core: (*core).into(),
            };
            let r = structure::sum_product_pipeline(&a, opts)?;
            let ok = r.extraction.verified;
            let summary = format!(
                "{:?} branch: subset of size {} (sqrt target {}, verified: {ok})",
                r.branch, r.subset_size, r.sqrt_target
            );
            Ok(Outcome::new(r, ok, summary))
        }
        Command::Bounds { which } => bounds_cmd(ctx, which),
        Command::Heritability { input, x, k, g } => {
            let s = ctx.set("set", &input.set)?;
            let r = if x.is_empty() {
                bounds::slice_sidon_check(&s)?
            } else {
                let shifts = x
                    .iter()
                    .enumerate()
                    .map(|(i, p)| ctx.set(&format!("x{}", i + 1), p))
                    .collect::<Result<Vec<_>>>()?;
                bounds::heritability_slice(&s, &shifts, *k, *g)?
            };
            Ok(bound_outcome(r))
        }
        Command::AuditPlunnecke { input, n, m, budget } => {
            let a = ctx.set("set", &input.set)?;
            Ok(bound_outcome(bounds::plunnecke_audit(&a, *n, *m, *budget)?))
        }
        Command::VerifyCertificate { input, cert } => {
            let a = ctx.set("set", &input.set)?;
            let text = ctx.read("cert", cert)?;
            let mismatches = verify_any_certificate(&a, &text)?;
            let ok = mismatches.is_empty();
            let summary = if ok {
                "certificate verified".to_string()
            } else {
                format!("{} mismatches", mismatches.len())
            };
            Ok(Outcome::new(json!({ "verified": ok, "mismatches": mismatches }), ok, summary))
        }
        Command::Bench { n } => bench(ctx, *n),
    }
}

/// Accepts a bare certificate or pipeline report, or an envelope holding one.
fn verify_any_certificate(a: &GroundSet, text: &str) -> Result<Vec<String>> {
    let mut v: Json = serde_json::from_str(text).map_err(|e| Error::MalformedInput {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if v.get("format_version").is_some() && v.get("result").is_some() && v.get("tool_version").is_some() {
        v = v["result"].take();
    }
    let bad = |e: serde_json::Error| Error::MalformedInput { line: 0, column: 0, message: e.to_string() };
    if v.get("branch").is_some() {
        let report: PipelineReport = serde_json::from_value(v).map_err(bad)?;
        structure::verify_pipeline(a, &report)
    } else {
        let cert: StructureCertificate = serde_json::from_value(v).map_err(bad)?;
        structure::verify_certificate(a, &cert)
    }
}

fn construct(ctx: &mut Ctx, which: &ConstructCmd) -> Result<ConstructionReport> {
    match which {
        ConstructCmd::Sidon { n } => constructions::sidon_report(*n),
        ConstructCmd::Linstrom { g, n, base } => match (base, n) {
            (Some(p), _) => {
                let b = ctx.set("base", p)?;
                constructions::linstrom_from_base(*g, &b)
            }
            (None, Some(n)) => constructions::linstrom_like(*g, *n),
            (None, None) => Err(Error::invalid("linstrom needs --n or --base")),
        },
        ConstructCmd::Geometric { base, n, k } => constructions::geometric_sumproduct_example(*base, *n, *k),
        ConstructCmd::Hyperbola { p, k, t } => constructions::hyperbola_family(*p, *k, *t),
        ConstructCmd::Fpmult { p, order, k } => {
            let seed = ctx.seed();
            constructions::fp_mult_example(*p, *order, seed, *k)
        }
    }
}

fn bound_outcome(r: BoundReport) -> Outcome {
    let ok = r.verdict != Verdict::Violated;
    let summary = format!(
        "{}: measured {} vs bound {} ({:?})",
        r.name,
        r.measured.map_or("n/a".into(), |m| m.to_string()),
        r.bound,
        r.verdict
    );
    Outcome::new(r, ok, summary)
}

fn bounds_cmd(ctx: &mut Ctx, which: &BoundsCmd) -> Result<Outcome> {
    let cap = ctx.global.cap;
    match which {
        BoundsCmd::Sumset { b, c, a, k, sigma } => {
            let b = ctx.set("b", b)?;
            let c = ctx.set("c", c)?;
            let a = a.as_ref().map(|p| ctx.set("a", p)).transpose()?;
            Ok(bound_outcome(bounds::sumset_sidon_upper(&b, &c, *k, *sigma, a.as_ref(), cap)?))
        }
        BoundsCmd::Diffset { input, k } => {
            let a = ctx.set("set", &input.set)?;
            let r = bounds::diffset_bounds(&a, *k, cap)?;
            let ok = r.facts_hold && r.difference.verdict != Verdict::Violated && r.sum.verdict != Verdict::Violated;
            let summary = format!(
                "|D| = {}, |S| = {}, min r_(D-D) = {}, min r_(D+S) = {} (facts hold: {})",
                r.d_size, r.s_size, r.min_r_dd, r.min_r_ds, r.facts_hold
            );
            Ok(Outcome::new(r, ok, summary))
        }
        BoundsCmd::Size { n, k, g, setting, set } => {
            let s = set.as_ref().map(|p| ctx.set("set", p)).transpose()?;
            Ok(bound_outcome(bounds::bfamily_size_upper(*n, *k, *g, (*setting).into(), s.as_ref())?))
        }
    }
}

/// Wall-clock timings; the only report that is not reproducible.
fn bench(ctx: &mut Ctx, n: i64) -> Result<Outcome> {
    if n < 4 {
        return Err(Error::invalid("bench needs --n >= 4"));
    }
    let seed = ctx.seed();
    let a = GroundSet::interval(0, n - 1);
    let mut rows = Vec::new();
    let mut time = |name: &str, f: &mut dyn FnMut() -> Result<()>| -> Result<()> {
        let t = Instant::now();
        f()?;
        rows.push(json!({ "op": name, "n": n, "ms": t.elapsed().as_secs_f64() * 1e3 }));
        Ok(())
    };
    time("energy_k(k=2)", &mut || energy_k(&a, 2, CompositionMode::Difference).map(drop))?;
    time("energy_k(k=4)", &mut || energy_k(&a, 4, CompositionMode::Difference).map(drop))?;
    time("energy_prime_k(k=3)", &mut || counting::energy_prime_k(&a, 3).map(drop))?;
    time("extract(k=2)", &mut || sidon::extract_random(&a, 2, CompositionMode::Difference, seed, 4).map(drop))?;
    time("greedy(k=1)", &mut || sidon::sid_k_greedy(&a, 1, CompositionMode::Difference, seed).map(drop))?;
    let small = GroundSet::interval(0, 23);
    time("exact(k=1, n=24)", &mut || sidon::sid_k_exact(&small, 1, CompositionMode::Difference, 40).map(drop))?;
    let summary = rows
        .iter()
        .map(|r| format!("{:<22} {:>10.3} ms", r["op"].as_str().unwrap_or(""), r["ms"].as_f64().unwrap_or(0.0)))
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Outcome::new(json!({ "timings": rows }), true, summary))
}
