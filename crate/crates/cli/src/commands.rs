use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use gvdc::bounds::{gv_guarantee, main_threshold_exact, parse_rational, simple_threshold, PaperConstants};
use gvdc::codes::{odd_prime_power, parse_defining_vector, CyclicCode, DoubleCirculantCode};
use gvdc::gf2poly::{factorize, kasami_factors};
use gvdc::numbertheory::{kasami_check, next_kasami_prime, primes_from};
use gvdc::spectrum::{
    dc_weight_distribution, low_weight_search, low_weight_search_best, min_distance_exact, weight_distribution,
    WeightDistribution, DEFAULT_EXHAUSTIVE_LIMIT,
};
use gvdc::verify::{
    expected_count_bruteforce, expected_count_exact, experiment_distance, prob_positive_bruteforce, run_suite,
    trial_seed, ExperimentSpec, LemmaReport, Mode, SuiteOptions,
};
use serde_json::json;

use crate::config::{constants_with, ExperimentConfig};
use crate::error::{CliError, CliResult};
use crate::output::{sha256_hex, sidecar_manifest, Run};
use crate::plot::{read_records, render_svg, write_records, PlotKind};
use crate::{Command, ConstArgs, ExperimentArgs};

pub(crate) fn dispatch(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Factor { n, kasami } => factor(n, kasami),
        Command::Primes { from, count, all } => primes(from, count, all),
        Command::Thresholds { n, b } => thresholds(n, b.as_deref()),
        Command::AuditConstants(c) => audit_constants(&c),
        Command::Sample { n, seed, count } => sample(n, seed, count),
        Command::Mindist { n, a, exact, search, effort, seed } => mindist(n, &a, exact, search, effort, seed),
        Command::Spectrum { code, out, dim_limit } => spectrum(&code, out.as_deref(), dim_limit),
        Command::Expected { n, w, bruteforce } => expected(n, w, bruteforce),
        Command::Verify { suite, seed, samples, quick, consts } => verify(&suite, seed, samples, quick, &consts),
        Command::Experiment(a) => experiment(&a),
        Command::Plot { records, kind, out } => plot(&records, &kind, &out),
    }
}

fn factor(n: usize, kasami: bool) -> CliResult<()> {
    let f = factorize(n)?;
    f.self_check()?;
    if kasami {
        let (p, m) = odd_prime_power(n)?;
        let k = kasami_factors(p as u64, m)?;
        if k.factors() != f.factors() {
            return Err(CliError::Violated(format!("explicit family for {p}^{m} differs from the factorization")));
        }
        eprintln!("explicit family for {p}^{m} matches");
    }
    println!("degree,weight,factor");
    for g in f.factors() {
        println!("{},{},{}", g.degree().unwrap_or(0), g.weight(), g);
    }
    Ok(())
}

fn primes(from: u64, count: usize, all: bool) -> CliResult<()> {
    let list = if all {
        primes_from(from, count)
    } else {
        let mut out = Vec::with_capacity(count);
        let mut cur = from;
        while out.len() < count {
            let p = next_kasami_prime(cur)?;
            out.push(p);
            cur = p + 1;
        }
        out
    };
    println!("p,order_of_2,primitive,wieferich_ok,kasami");
    for p in list {
        let r = kasami_check(p)?;
        println!("{},{},{},{},{}", r.p, r.order_of_2, r.primitive, r.wieferich_ok, r.kasami);
    }
    Ok(())
}

fn thresholds(n: u64, b: Option<&str>) -> CliResult<()> {
    let b = match b {
        Some(s) => parse_rational(s)?,
        None => PaperConstants::default().b.0,
    };
    let simple = simple_threshold(n).map(|w| w.to_string()).unwrap_or_default();
    let main = main_threshold_exact(n, &b)?;
    println!("n,b,gv_guarantee,simple_threshold,main_threshold");
    println!("{n},{},{},{simple},{main}", gvdc::bounds::format_rational(&b), gv_guarantee(n));
    Ok(())
}

fn load_constants(c: &ConstArgs) -> CliResult<(PaperConstants, BTreeMap<String, String>)> {
    let cfg = ExperimentConfig::load_opt(c.config.as_deref())?;
    let overrides = cfg.constant_overrides(&c.set)?;
    Ok((constants_with(&overrides)?, overrides))
}

/// Prints reports as a table, writes the optional JSON report and maps
/// any violation to exit code 2.
fn finish_reports(
    command: &str,
    reports: &[LemmaReport],
    consts: &PaperConstants,
    overrides: &BTreeMap<String, String>,
    params: serde_json::Value,
    out: Option<&Path>,
) -> CliResult<()> {
    for r in reports {
        println!("{r}");
        for n in &r.notes {
            println!("    {n}");
        }
    }
    let violated: Vec<&LemmaReport> = reports.iter().filter(|r| r.is_violated()).collect();
    println!("{} checks, {} violated", reports.len(), violated.len());
    if let Some(path) = out {
        let config = json!({ "command": command, "params": params, "constants": consts, "overrides": overrides });
        let mut run = Run::start(command, config.clone());
        let manifest = sidecar_manifest(path);
        let doc = json!({
            "config": config,
            "input_hash": run.input_hash(),
            "manifest": manifest.file_name().map(|s| s.to_string_lossy().into_owned()),
            "violated": violated.len(),
            "reports": reports,
        });
        let mut text = serde_json::to_string_pretty(&doc)?;
        text.push('\n');
        run.write(path, text.as_bytes())?;
        run.finish(&manifest)?;
    }
    if violated.is_empty() {
        Ok(())
    } else {
        let ids: Vec<String> = violated.iter().map(|r| r.lemma_id.clone()).collect();
        Err(CliError::Violated(ids.join(", ")))
    }
}

fn audit_constants(c: &ConstArgs) -> CliResult<()> {
    let (consts, overrides) = load_constants(c)?;
    println!("constant,value");
    for (k, v) in consts.fields() {
        println!("{k},{v}");
    }
    if !overrides.is_empty() {
        println!("# overridden: {}", overrides.keys().cloned().collect::<Vec<_>>().join(","));
    }
    println!();
    let opts = SuiteOptions::default();
    let mut reports = Vec::new();
    for s in ["kappa", "enumeration", "c2series"] {
        reports.extend(run_suite(s, &consts, &opts)?);
    }
    finish_reports("audit-constants", &reports, &consts, &overrides, json!({}), c.report.as_deref())
}

fn sample(n: usize, seed: u64, count: u64) -> CliResult<()> {
    for i in 0..count {
        println!("{}", DoubleCirculantCode::sample(n, trial_seed(seed, i))?.serialize());
    }
    Ok(())
}

fn mindist(n: usize, a: &str, exact: bool, search: Option<usize>, effort: usize, seed: u64) -> CliResult<()> {
    let code = DoubleCirculantCode::new(parse_defining_vector(a, n)?)?;
    println!("code={}", code.serialize());
    let res = match search {
        Some(w) => match low_weight_search(&code, w, effort, seed) {
            Some(r) => r,
            None => {
                println!("found=false");
                println!("note=no codeword of weight <= {w} in {effort} information sets");
                return Ok(());
            }
        },
        None if exact || n <= DEFAULT_EXHAUSTIVE_LIMIT => min_distance_exact(&code)?,
        None => low_weight_search_best(&code, effort, seed)
            .ok_or_else(|| CliError::Usage("search returned no codeword".into()))?,
    };
    if search.is_some() {
        println!("found=true");
    }
    println!("d={}", res.value);
    println!("exact={}", res.exact);
    println!("witness={}", res.witness.to_hex());
    Ok(())
}

fn spectrum(code: &Path, out: Option<&Path>, dim_limit: usize) -> CliResult<()> {
    let text = std::fs::read_to_string(code)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", code.display())))?;
    let text = text.trim();
    let wd = match CyclicCode::parse(text) {
        Ok(c) => weight_distribution(&c, dim_limit)?,
        Err(cyc) => match DoubleCirculantCode::parse(text) {
            Ok(dc) => WeightDistribution::from_u64(&dc_weight_distribution(&dc)?)?,
            Err(dce) => {
                return Err(CliError::Usage(format!("not a cyclic code ({cyc}) nor a double circulant code ({dce})")))
            }
        },
    };
    let csv = wd.to_csv();
    match out {
        None => print!("{csv}"),
        Some(path) => {
            let mut run = Run::start("spectrum", json!({ "code": text, "dim_limit": dim_limit }));
            run.write(path, csv.as_bytes())?;
            run.finish(&sidecar_manifest(path))?;
            println!("wrote {} (d = {:?})", path.display(), wd.min_distance());
        }
    }
    Ok(())
}

fn expected(n: usize, w: usize, bruteforce: bool) -> CliResult<()> {
    let e = expected_count_exact(n, w)?;
    if !bruteforce {
        println!("n,w,expected");
        println!("{n},{w},{e}");
        return Ok(());
    }
    let b = expected_count_bruteforce(n, w)?;
    let p = prob_positive_bruteforce(n, w)?;
    println!("n,w,expected,expected_bruteforce,prob_positive");
    println!("{n},{w},{e},{b},{p}");
    if e != b {
        return Err(CliError::Violated(format!("lattice value {e} differs from brute force {b}")));
    }
    if p > e {
        return Err(CliError::Violated(format!("Pr[X(w)>0] = {p} exceeds E[X(w)] = {e}")));
    }
    Ok(())
}

fn verify(suite: &str, seed: u64, samples: u64, quick: bool, c: &ConstArgs) -> CliResult<()> {
    let (consts, overrides) = load_constants(c)?;
    let opts = SuiteOptions { seed, mc_samples: samples, full: !quick, ..SuiteOptions::default() };
    let reports = run_suite(suite, &consts, &opts)?;
    let params = json!({ "suite": suite, "seed": seed, "samples": samples, "quick": quick });
    finish_reports("verify", &reports, &consts, &overrides, params, c.report.as_deref())
}

/// Effective experiment parameters after merging config and flags.
struct Resolved {
    spec: ExperimentSpec,
    snapshot: serde_json::Value,
    out_dir: PathBuf,
}

fn resolve(a: &ExperimentArgs) -> CliResult<Resolved> {
    let cfg = ExperimentConfig::load_opt(a.config.as_deref())?;
    let mut overrides = cfg.constant_overrides(&a.set)?;
    if let Some(b) = &a.b {
        overrides.insert("b".into(), b.clone());
    }
    let consts = constants_with(&overrides)?;
    let (p, m) = if a.n.is_some() || a.p.is_some() { (a.p, a.m) } else { (cfg.p, cfg.m) };
    let n = match (a.n.or(if a.p.is_some() { None } else { cfg.n }), p) {
        (Some(n), _) => n,
        (None, Some(p)) => {
            let m = m.unwrap_or(1);
            p.checked_pow(m).ok_or_else(|| CliError::Usage("p^m overflows".into()))?
        }
        (None, None) => return Err(CliError::Usage("give --n or --p (flag or config)".into())),
    };
    let exhaustive = a.exhaustive || cfg.exhaustive.unwrap_or(false);
    let trials = a.trials.or(cfg.trials).unwrap_or(100);
    let seed = a.seed.or(cfg.seed).unwrap_or(0);
    let effort = a.effort.or(cfg.effort).unwrap_or(200);
    let mode = match a.mode.as_deref().or(cfg.mode.as_deref()) {
        Some("exact") => Mode::Exact,
        Some("search") => Mode::Search { effort },
        None if n <= DEFAULT_EXHAUSTIVE_LIMIT => Mode::Exact,
        None => Mode::Search { effort },
        Some(other) => return Err(CliError::Usage(format!("unknown mode {other:?}; expected exact|search"))),
    };
    let mut spec = ExperimentSpec::new(n, trials, seed);
    spec.mode = mode;
    spec.exhaustive = exhaustive;
    spec.b = consts.b.0.clone();
    spec.max_trials = a.max_trials.or(cfg.max_trials);
    spec.w = a.w.or(cfg.w);
    // Worker count and output location are left out: they must not change results.
    let snapshot = json!({
        "n": n,
        "p": p,
        "m": m,
        "trials": if exhaustive { None } else { Some(trials) },
        "seed": seed,
        "mode": mode,
        "exhaustive": exhaustive,
        "max_trials": spec.max_trials,
        "w": spec.w,
        "constants": consts,
        "overrides": overrides,
    });
    let out_dir = a.out_dir.clone().or(cfg.out_dir).unwrap_or_else(|| PathBuf::from("gvdc-out"));
    Ok(Resolved { spec, snapshot, out_dir })
}

fn experiment(a: &ExperimentArgs) -> CliResult<()> {
    let Resolved { spec, snapshot, out_dir } = resolve(a)?;
    let mut run = Run::start("experiment", snapshot.clone());
    let (records, summary) = experiment_distance(&spec)?;

    let mut csv = Vec::new();
    write_records(&mut csv, &records)?;
    run.write(&out_dir.join("records.csv"), &csv)?;

    let doc = json!({
        "config": snapshot,
        "input_hash": run.input_hash(),
        "manifest": "manifest.json",
        "records": "records.csv",
        "records_sha256": sha256_hex(&csv),
        "summary": summary,
    });
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    run.write(&out_dir.join("summary.json"), text.as_bytes())?;
    run.finish(&out_dir.join("manifest.json"))?;

    let mut line = format!(
        "n={} trials={} {} threshold={} gv={} d<=threshold: {}",
        summary.n,
        summary.trials_run,
        summary.threshold_kind,
        summary.threshold,
        summary.gv_guarantee,
        summary.empirical_probability
    );
    if let Some(b) = &summary.simple_bound {
        let _ = write!(line, " bound={b}");
    }
    if summary.truncated {
        line.push_str(" (truncated)");
    }
    println!("{line}");
    println!("wrote {}", out_dir.display());
    if summary.bound_respected == Some(false) && spec.exhaustive && spec.mode == Mode::Exact && !summary.truncated {
        return Err(CliError::Violated("exact probability exceeds the simple bound".into()));
    }
    Ok(())
}

fn plot(records: &Path, kind: &str, out: &Path) -> CliResult<()> {
    let kind = PlotKind::parse(kind)?;
    let bytes = std::fs::read(records)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", records.display())))?;
    let recs = read_records(&bytes[..])?;
    let reference = format!("records sha256 {}", sha256_hex(&bytes));
    let svg = render_svg(&recs, kind, &reference)?;
    let config = json!({ "records": records.display().to_string(), "records_sha256": sha256_hex(&bytes), "kind": format!("{kind:?}") });
    let mut run = Run::start("plot", config);
    run.write(out, svg.as_bytes())?;
    run.finish(&sidecar_manifest(out))?;
    println!("wrote {}", out.display());
    Ok(())
}
