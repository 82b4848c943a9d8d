mod runconfig;
mod table;

use clap::{Args, Parser, Subcommand};
use rrtomb_core::config::HypothesisConfig;
use rrtomb_core::demography::run_pipeline;
use rrtomb_core::inference::{
    adjusted_p, beta, odds_lower_bound, posterior_odds, tau, theta_lower_bound,
};
use rrtomb_core::onomasticon::Onomasticon;
use rrtomb_core::rational::{fmt_exact, fmt_fixed, fmt_sci, fmt_sig, Q};
use rrtomb_core::sensitivity::{run_suite, Suite};
use rrtomb_core::{analyze_with, with_threads, Error, Exec, Result};
use runconfig::{Format, Num, RuleOverrides, RunConfig};
use serde_json::{json, Value};
use std::process::ExitCode;
use table::Table;

#[derive(Parser)]
#[command(
    name = "rrtomb",
    version,
    about = "Relevance-and-rareness tail analysis for inscribed name clusters"
)]
struct Cli {
    /// Run config (TOML, one section per module)
    #[arg(long, global = true)]
    config: Option<String>,
    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for enumeration (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Enumerate on the calling thread only
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Default)]
struct Sources {
    /// Onomasticon fixture path, or "bundled"
    #[arg(long)]
    onomasticon: Option<String>,
    /// Hypothesis file path, or "bundled"
    #[arg(long)]
    hypothesis: Option<String>,
    /// Trial count n2
    #[arg(long)]
    n2: Option<u64>,
    #[arg(long)]
    bonus_divisor: Option<Num>,
    #[arg(long)]
    unknown_son_factor: Option<Num>,
    #[arg(long)]
    require_yeshua: bool,
    #[arg(long)]
    allow_father_yeshua: bool,
    #[arg(long)]
    no_unknown_sons: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Score the observed tomb and enumerate its tail
    Analyze(Sources),
    /// Run a scenario suite against the baseline
    Sweep {
        #[command(flatten)]
        src: Sources,
        /// Suite file path, or "bundled"
        #[arg(long)]
        suite: Option<String>,
    },
    /// Population pipeline down to the trial count
    Demography {
        #[arg(long)]
        total_deceased: Option<Num>,
        #[arg(long)]
        literacy_affluence_fraction: Option<Num>,
    },
    /// Adjusted p-value, posterior odds and bounds from a tail area
    Infer {
        /// Tail area q
        #[arg(long)]
        q: Option<Num>,
        /// Trial count n2 (default 1100)
        #[arg(long)]
        n2: Option<u64>,
        /// P(B|A) values (repeatable)
        #[arg(long)]
        theta: Vec<Num>,
        /// Confidence complements (repeatable)
        #[arg(long)]
        alpha: Vec<Num>,
    },
    /// Load and check every file a run config references
    ValidateConfig {
        /// Run config to check (alternative to --config)
        path: Option<String>,
    },
}

struct Ctx {
    run: RunConfig,
    format: Format,
    exec: Exec,
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 2 } else { 1 })
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let path = match &cli.cmd {
        Cmd::ValidateConfig { path: Some(p) } => Some(p.clone()),
        _ => cli.config.clone(),
    };
    let run = RunConfig::load(path.as_deref())?;
    let ctx = Ctx {
        format: cli.format.or(run.output.format).unwrap_or_default(),
        threads: cli.threads.or(run.output.threads),
        exec: if cli.sequential {
            Exec::Sequential
        } else {
            Exec::Parallel
        },
        run,
    };
    if ctx.threads == Some(0) {
        return Err(Error::Config("--threads must be at least 1".into()));
    }
    let threads = ctx.threads;
    with_threads(threads, move || dispatch(cli.cmd, &ctx))?
}

fn dispatch(cmd: Cmd, ctx: &Ctx) -> Result<ExitCode> {
    match cmd {
        Cmd::Analyze(src) => analyze(ctx, &src),
        Cmd::Sweep { src, suite } => sweep(ctx, &src, suite),
        Cmd::Demography {
            total_deceased,
            literacy_affluence_fraction,
        } => demography(ctx, total_deceased, literacy_affluence_fraction),
        Cmd::Infer {
            q,
            n2,
            theta,
            alpha,
        } => infer(ctx, q, n2, theta, alpha),
        Cmd::ValidateConfig { .. } => validate(ctx),
    }
}

fn load_inputs(ctx: &Ctx, src: &Sources) -> Result<(Onomasticon, HypothesisConfig)> {
    let onom = Onomasticon::load(
        src.onomasticon
            .as_deref()
            .unwrap_or(&ctx.run.onomasticon.source),
    )?;
    let mut cfg = HypothesisConfig::load(
        src.hypothesis
            .as_deref()
            .unwrap_or(&ctx.run.hypothesis.source),
    )?;
    let flags = RuleOverrides {
        bonus_divisor: src.bonus_divisor.clone(),
        unknown_son_factor: src.unknown_son_factor.clone(),
        require_yeshua_in_tomb: src.require_yeshua.then_some(true),
        allow_father_yeshua: src.allow_father_yeshua.then_some(true),
        count_unknown_sons: src.no_unknown_sons.then_some(false),
    };
    ctx.run.rules.clone().merge(flags).apply(&mut cfg.rules)?;
    if let Some(n) = src.n2.or(ctx.run.inference.n2) {
        cfg.n2 = n;
    }
    if cfg.n2 == 0 {
        return Err(Error::Config("n2 must be at least 1".into()));
    }
    Ok((onom, cfg))
}

fn emit(ctx: &Ctx, table: Table, records: Vec<Value>) {
    match ctx.format {
        Format::Table => print!("{table}"),
        Format::Records => {
            for r in records {
                println!("{r}");
            }
        }
    }
}

fn q_pair(x: &Q, decimal: String) -> Value {
    json!({ "exact": fmt_exact(x), "decimal": decimal })
}

fn analyze(ctx: &Ctx, src: &Sources) -> Result<ExitCode> {
    let (onom, cfg) = load_inputs(ctx, src)?;
    let a = analyze_with(&onom, &cfg, ctx.exec)?;
    let ratio = a.tail.valid_ratio();
    let rows: Vec<(&str, &Q, String)> = vec![
        (
            "observed_rr",
            &a.observed.value,
            fmt_sci(&a.observed.value, 4),
        ),
        (
            "total_mass",
            &a.tail.total_mass,
            fmt_sci(&a.tail.total_mass, 4),
        ),
        (
            "valid_mass",
            &a.tail.valid_mass,
            fmt_sci(&a.tail.valid_mass, 4),
        ),
        ("valid_ratio", &ratio, fmt_sig(&ratio, 4)),
        (
            "tail_mass",
            &a.tail.tail_mass,
            fmt_sci(&a.tail.tail_mass, 4),
        ),
        (
            "proportion",
            &a.tail.proportion,
            fmt_sci(&a.tail.proportion, 4),
        ),
        (
            "adjusted_area",
            &a.adjusted_area,
            fmt_sig(&a.adjusted_area, 4),
        ),
    ];
    let mut t = Table::new(&["quantity", "value"]);
    let mut rec = serde_json::Map::new();
    rec.insert("record".into(), json!("analyze"));
    rec.insert("hypothesis".into(), json!(cfg.name));
    rec.insert("n2".into(), json!(cfg.n2));
    for (k, v, d) in &rows {
        t.row(vec![k.to_string(), d.clone()]);
        rec.insert(k.to_string(), q_pair(v, d.clone()));
    }
    t.row(vec!["n2".into(), cfg.n2.to_string()]);
    emit(ctx, t, vec![Value::Object(rec)]);
    Ok(ExitCode::SUCCESS)
}

fn sweep(ctx: &Ctx, src: &Sources, suite: Option<String>) -> Result<ExitCode> {
    let (onom, cfg) = load_inputs(ctx, src)?;
    let suite = Suite::load(suite.as_deref().unwrap_or(&ctx.run.sweep.suite))?;
    let results = run_suite(
        &onom,
        &cfg,
        &suite,
        src.n2.or(ctx.run.inference.n2),
        ctx.exec,
    );
    let mut t = Table::new(&[
        "scenario",
        "block",
        "observed_rr",
        "adjusted",
        "printed",
        "match",
    ]);
    let mut recs = Vec::new();
    let mut worst = 0u8;
    for (sc, r) in suite.scenario.iter().zip(results) {
        let block = sc.block.clone().unwrap_or_default();
        match r {
            Ok(rep) => {
                let digits = rep.printed.as_ref().map_or(4, |p| p.digits.max(4));
                let adjusted = fmt_sig(&rep.adjusted_area, digits);
                let m = rep.matches();
                let flag = m.map_or("-", |b| if b { "yes" } else { "NO" });
                t.row(vec![
                    rep.name.clone(),
                    block.clone(),
                    fmt_sci(&rep.observed_rr, 4),
                    adjusted.clone(),
                    rep.printed.as_ref().map_or("-".into(), |p| p.text.clone()),
                    flag.into(),
                ]);
                recs.push(json!({
                    "record": "scenario",
                    "name": rep.name,
                    "block": block,
                    "observed_rr": q_pair(&rep.observed_rr, fmt_sci(&rep.observed_rr, 4)),
                    "proportion": q_pair(&rep.proportion, fmt_sci(&rep.proportion, 4)),
                    "adjusted_area": q_pair(&rep.adjusted_area, adjusted),
                    "printed": rep.printed.as_ref().map(|p| p.text.clone()),
                    "match": m,
                }));
            }
            Err(e) => {
                worst = worst.max(if e.is_config() { 2 } else { 1 });
                t.row(vec![
                    sc.name.clone(),
                    block.clone(),
                    "error".into(),
                    e.to_string(),
                    "-".into(),
                    "-".into(),
                ]);
                recs.push(json!({ "record": "scenario", "name": sc.name, "block": block, "error": e.to_string() }));
            }
        }
    }
    emit(ctx, t, recs);
    Ok(ExitCode::from(worst))
}

fn demography(ctx: &Ctx, total: Option<Num>, literacy: Option<Num>) -> Result<ExitCode> {
    let mut p = ctx.run.demography.clone();
    if let Some(v) = total {
        p.total_deceased = v.0;
    }
    if let Some(v) = literacy {
        p.literacy_affluence_fraction = v.0;
    }
    let r = run_pipeline(&p)?;
    let rows: Vec<(&str, &Q, String)> = vec![
        (
            "deceased_per_gender",
            &r.deceased_per_gender,
            fmt_fixed(&r.deceased_per_gender, 0),
        ),
        (
            "adult_jewish_raw",
            &r.raw.adult_jewish_per_gender,
            fmt_fixed(&r.raw.adult_jewish_per_gender, 1),
        ),
        (
            "adult_jewish",
            &r.adult_jewish_per_gender,
            fmt_fixed(&r.adult_jewish_per_gender, 0),
        ),
        (
            "inscribed_males",
            &r.inscribed_males,
            fmt_fixed(&r.inscribed_males, 0),
        ),
        (
            "inscribed_females",
            &r.inscribed_females,
            fmt_fixed(&r.inscribed_females, 0),
        ),
        (
            "trials_exact",
            &r.trials_exact,
            fmt_fixed(&r.trials_exact, 1),
        ),
        ("trials", &r.trials, fmt_fixed(&r.trials, 0)),
    ];
    let mut t = Table::new(&["quantity", "value"]);
    let mut rec = serde_json::Map::new();
    rec.insert("record".into(), json!("demography"));
    for (k, v, d) in &rows {
        t.row(vec![k.to_string(), d.clone()]);
        rec.insert(k.to_string(), q_pair(v, d.clone()));
    }
    t.row(vec!["excavated".into(), r.excavated.to_string()]);
    t.row(vec![
        "full_population_tombs".into(),
        r.full_population_tombs.to_string(),
    ]);
    rec.insert("excavated".into(), json!(r.excavated));
    rec.insert(
        "full_population_tombs".into(),
        json!(r.full_population_tombs),
    );
    emit(ctx, t, vec![Value::Object(rec)]);
    Ok(ExitCode::SUCCESS)
}

fn infer(
    ctx: &Ctx,
    q: Option<Num>,
    n2: Option<u64>,
    theta: Vec<Num>,
    alpha: Vec<Num>,
) -> Result<ExitCode> {
    let sec = &ctx.run.inference;
    let q = q
        .or(sec.q.clone())
        .ok_or_else(|| Error::Config("infer needs --q or [inference] q".into()))?
        .0;
    let n2 = n2.or(sec.n2).unwrap_or(1100);
    let thetas = if theta.is_empty() {
        sec.theta.clone()
    } else {
        theta
    };
    let alphas = if alpha.is_empty() {
        sec.alpha.clone()
    } else {
        alpha
    };
    let p = adjusted_p(&q, n2)?;
    let b = beta(&q, n2);
    let mut t = Table::new(&["quantity", "argument", "value"]);
    let mut recs = Vec::new();
    let mut row = |name: &str, arg: &str, v: &Q, d: String, extra: Value| {
        t.row(vec![name.into(), arg.into(), d.clone()]);
        let mut r = json!({ "record": "infer", "quantity": name, "value": q_pair(v, d) });
        if !arg.is_empty() {
            r["argument"] = json!(arg);
        }
        if let (Value::Object(r), Value::Object(e)) = (&mut r, extra) {
            r.extend(e);
        }
        recs.push(r);
    };
    row(
        "adjusted_p",
        "",
        &p.value,
        fmt_sig(&p.value, 4),
        json!({ "clamped": p.clamped }),
    );
    row("beta", "", &b, fmt_sig(&b, 4), json!({}));
    for th in &thetas {
        let v = &th.0;
        let o = posterior_odds(v, n2, &q)?;
        row(
            "posterior_odds",
            &format!("theta={th}"),
            &o,
            fmt_fixed(&o, 0),
            json!({}),
        );
        let tv = tau(v, n2, &q)?;
        row(
            "tau",
            &format!("theta={th}"),
            &tv,
            fmt_sig(&tv, 4),
            json!({}),
        );
    }
    for al in &alphas {
        let v = &al.0;
        let tb = theta_lower_bound(v, n2, &q)?;
        row(
            "theta_bound",
            &format!("alpha={al}"),
            &tb.value,
            fmt_sig(&tb.value, 3),
            json!({ "degenerate": tb.degenerate }),
        );
        let ob = odds_lower_bound(v, n2, &q)?;
        row(
            "odds_bound",
            &format!("alpha={al}"),
            &ob.value,
            fmt_fixed(&ob.value, 2),
            json!({ "degenerate": ob.degenerate }),
        );
    }
    emit(ctx, t, recs);
    Ok(ExitCode::SUCCESS)
}

fn validate(ctx: &Ctx) -> Result<ExitCode> {
    let (onom, cfg) = load_inputs(ctx, &Sources::default())?;
    let spec = cfg.build(&onom)?;
    cfg.observed.resolve(&spec)?;
    let suite = Suite::load(&ctx.run.sweep.suite)?;
    run_pipeline(&ctx.run.demography)?;
    let mut t = Table::new(&["item", "status"]);
    t.row(vec![
        "onomasticon".into(),
        format!("ok ({} generics)", onom.generics.len()),
    ]);
    t.row(vec![
        "hypothesis".into(),
        format!(
            "ok ({}: {} women, {} men categories)",
            spec.name,
            spec.women.len(),
            spec.men.len()
        ),
    ]);
    t.row(vec![
        "suite".into(),
        format!("ok ({} scenarios)", suite.scenario.len()),
    ]);
    t.row(vec!["demography".into(), "ok".into()]);
    let rec = json!({
        "record": "validate",
        "ok": true,
        "generics": onom.generics.len(),
        "hypothesis": spec.name,
        "scenarios": suite.scenario.len(),
    });
    emit(ctx, t, vec![rec]);
    Ok(ExitCode::SUCCESS)
}
