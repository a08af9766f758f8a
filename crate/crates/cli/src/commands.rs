use std::path::PathBuf;
use std::sync::Mutex;

use eaed_core::channel::capacity_optimal_threshold;
use eaed_core::de::{t_opt_scan_resumable, threshold, DeConfig, ScanPoint, TScan, Threshold};
use eaed_core::distributions::WeightTables;
use eaed_core::montecarlo::{estimate_ber, simulated_threshold, Verdict};
use eaed_core::numeric::db_to_linear;
use eaed_core::{capacity, transition_probs, ChannelParams, ComponentCode, Ensemble, Error, TransitionTable};
use serde::{Deserialize, Serialize};

use crate::config::{invalid, ExperimentConfig};
use crate::output::{Checkpoint, Sink};

/// Whether a command finished within its compute budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Done,
    BudgetExceeded,
}

pub struct Ctx {
    pub cfg: ExperimentConfig,
    pub sink: Sink,
    pub checkpoint: Option<PathBuf>,
}

fn core(e: Error) -> anyhow::Error {
    match e {
        Error::Config(_)
        | Error::Bracket { .. }
        | Error::InvalidRadius { .. }
        | Error::InvalidVariant(_)
        | Error::UnsupportedField(_) => invalid(e.to_string()),
        other => other.into(),
    }
}

fn f(x: f64) -> String {
    format!("{x}")
}

fn load_table(cfg: &ExperimentConfig, code: &ComponentCode) -> anyhow::Result<TransitionTable> {
    TransitionTable::load_or_build(code, cfg.decoder, cfg.weights, cfg.cache_dir.as_deref()).map_err(core)
}

pub fn capacity_cmd(ctx: &Ctx) -> anyhow::Result<Status> {
    let c = &ctx.cfg.channel;
    let rows = vec![capacity_row(c.esn0_db, c.t)];
    ctx.sink.table("capacity", &ctx.cfg, CAPACITY_HEADER, &rows)?;
    Ok(Status::Done)
}

const CAPACITY_HEADER: &[&str] = &["esn0_db", "T", "delta_c", "eps_c", "capacity"];

fn capacity_row(esn0_db: f64, t: f64) -> Vec<String> {
    let p = ChannelParams::from_db(esn0_db, t);
    let tp = transition_probs(p);
    vec![f(esn0_db), f(t), f(tp.delta), f(tp.epsilon), f(capacity(p))]
}

pub fn capacity_scan(ctx: &Ctx) -> anyhow::Result<Status> {
    let mut rows = Vec::new();
    let mut optimum = Vec::new();
    for db in ctx.cfg.esn0_grid() {
        for t in ctx.cfg.t_grid() {
            rows.push(capacity_row(db, t));
        }
        let (t_star, c_star) = capacity_optimal_threshold(db_to_linear(db));
        optimum.push(CapacityOptimum {
            esn0_db: db,
            t_star,
            capacity: c_star,
            capacity_t0: capacity(ChannelParams::from_db(db, 0.0)),
        });
    }
    ctx.sink.table("capacity-scan", &ctx.cfg, CAPACITY_HEADER, &rows)?;
    ctx.sink.summary("capacity-scan", &ctx.cfg, &optimum)?;
    Ok(Status::Done)
}

#[derive(Serialize)]
struct CapacityOptimum {
    esn0_db: f64,
    t_star: f64,
    capacity: f64,
    capacity_t0: f64,
}

pub fn weights(ctx: &Ctx) -> anyhow::Result<Status> {
    let code = ctx.cfg.component()?;
    let w = WeightTables::for_code_with(&code, ctx.cfg.weights);
    let rows: Vec<Vec<String>> = match w.exact_counts() {
        Some(exact) => exact.iter().enumerate().map(|(b, a)| vec![b.to_string(), a.to_string()]).collect(),
        None => w.counts().iter().enumerate().map(|(b, a)| vec![b.to_string(), f(*a)]).collect(),
    };
    ctx.sink.table("weights", &ctx.cfg, &["b1", "A"], &rows)?;
    Ok(Status::Done)
}

pub fn transition_table(ctx: &Ctx) -> anyhow::Result<Status> {
    let code = ctx.cfg.component()?;
    let table = load_table(&ctx.cfg, &code)?;
    let rows: Vec<Vec<String>> = table
        .entries()
        .into_iter()
        .map(|(a, b, dp, ep, p)| vec![a.as_char().to_string(), b.as_char().to_string(), dp.to_string(), ep.to_string(), f(p)])
        .collect();
    ctx.sink
        .table("transition-table", &ctx.cfg, &["alpha", "beta", "Dp", "Ep", "prob"], &rows)?;
    Ok(Status::Done)
}

fn de_threshold(cfg: &ExperimentConfig, table: &TransitionTable, t: f64) -> anyhow::Result<Threshold> {
    let th = threshold(table, cfg.ensemble, t, &cfg.de).map_err(core)?;
    if th.at_lower_bound {
        return Err(invalid(format!(
            "density evolution already converges at the lower bracket end {} dB; lower --bracket-lo-db",
            cfg.de.bracket_lo_db
        )));
    }
    Ok(th)
}

pub fn threshold_cmd(ctx: &Ctx) -> anyhow::Result<Status> {
    let code = ctx.cfg.component()?;
    let table = load_table(&ctx.cfg, &code)?;
    let th = de_threshold(&ctx.cfg, &table, ctx.cfg.channel.t)?;
    let rows = vec![vec![f(ctx.cfg.channel.t), f(th.esn0_db)]];
    ctx.sink.table("threshold", &ctx.cfg, &["T", "esn0_star_db"], &rows)?;
    ctx.sink.summary("threshold", &ctx.cfg, &th)?;
    if th.non_monotone {
        eprintln!("warning: density evolution failed above the threshold (non-monotone)");
    }
    Ok(Status::Done)
}

fn run_scan(ctx: &Ctx, cfg: &ExperimentConfig) -> anyhow::Result<TScan> {
    let code = cfg.component()?;
    let table = load_table(cfg, &code)?;
    let scan = cfg.scan_config()?;
    let hash = cfg.hash();
    let known: Vec<ScanPoint> = match &ctx.checkpoint {
        Some(p) => Checkpoint::load(p, &hash),
        None => Vec::new(),
    };
    if !known.is_empty() {
        eprintln!("resuming with {} checkpointed points", known.len());
    }
    let done = Mutex::new(known.clone());
    let save = |p: &ScanPoint| {
        let mut pts = done.lock().unwrap();
        pts.push(p.clone());
        if let Some(path) = &ctx.checkpoint {
            if let Err(e) = Checkpoint::save(path, &hash, &pts) {
                eprintln!("warning: cannot write checkpoint: {e}");
            }
        }
    };
    let result = t_opt_scan_resumable(&table, cfg.ensemble, &cfg.de, &scan, &known, &save).map_err(core)?;
    if let Some(path) = &ctx.checkpoint {
        let _ = std::fs::remove_file(path);
    }
    Ok(result)
}

fn scan_rows(scan: &TScan) -> Vec<Vec<String>> {
    let mut pts = scan.points.clone();
    pts.sort_by(|a, b| a.t.total_cmp(&b.t));
    pts.dedup_by(|a, b| a.t == b.t);
    pts.iter().map(|p| vec![f(p.t), f(p.esn0_db)]).collect()
}

pub fn scan_t(ctx: &Ctx, command: &str) -> anyhow::Result<Status> {
    let scan = run_scan(ctx, &ctx.cfg)?;
    ctx.sink.table(command, &ctx.cfg, &["T", "esn0_star_db"], &scan_rows(&scan))?;
    ctx.sink.summary(command, &ctx.cfg, &scan)?;
    Ok(Status::Done)
}

pub fn simulate(ctx: &Ctx) -> anyhow::Result<Status> {
    let cfg = &ctx.cfg;
    ensure_product(cfg)?;
    let code = cfg.component()?;
    let sim = cfg.sim_config()?;
    let est = estimate_ber(&code, &sim, cfg.channel.esn0_db, cfg.channel.t).map_err(core)?;
    let rows = vec![vec![
        f(est.esn0_db),
        f(est.t),
        est.iterations.to_string(),
        est.frames.to_string(),
        est.bit_errors.to_string(),
        f(est.ber),
        f(est.ci_lo),
        f(est.ci_hi),
    ]];
    ctx.sink.table(
        "simulate",
        cfg,
        &["esn0_db", "T", "iters", "frames", "bit_errors", "ber", "ci_lo", "ci_hi"],
        &rows,
    )?;
    ctx.sink.summary("simulate", cfg, &est)?;
    Ok(if est.verdict == Verdict::Undecided {
        Status::BudgetExceeded
    } else {
        Status::Done
    })
}

fn ensure_product(cfg: &ExperimentConfig) -> anyhow::Result<()> {
    if cfg.ensemble != Ensemble::Product {
        return Err(invalid("Monte-Carlo simulation supports product codes only"));
    }
    Ok(())
}

/// Simulated threshold at one `T`; the bracket defaults to offsets from the
/// DE threshold.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimPoint {
    pub t: f64,
    pub esn0_star_db: Option<f64>,
    pub esn0_starstar_db: f64,
    pub interval_lo_db: f64,
    pub interval_hi_db: f64,
    pub budget_exhausted: bool,
    pub frames: u64,
}

fn sim_point(cfg: &ExperimentConfig, code: &ComponentCode, table: Option<&TransitionTable>, t: f64) -> anyhow::Result<SimPoint> {
    let s = &cfg.search;
    let de = match (s.lo_db, s.hi_db, table) {
        (Some(_), Some(_), _) => None,
        (_, _, Some(table)) => {
            let de_cfg = DeConfig {
                width_db: cfg.scan.width_db,
                ..cfg.de.clone()
            };
            Some(threshold(table, Ensemble::Product, t, &de_cfg).map_err(core)?.esn0_db)
        }
        _ => None,
    };
    let base = de.unwrap_or(0.0);
    let lo = s.lo_db.unwrap_or(base + s.offset_lo_db);
    let hi = s.hi_db.unwrap_or(base + s.offset_hi_db);
    let sim = simulated_threshold(code, &cfg.sim_config()?, t, lo, hi, s.width_db, s.max_expansions).map_err(core)?;
    Ok(SimPoint {
        t,
        esn0_star_db: de,
        esn0_starstar_db: sim.esn0_db,
        interval_lo_db: sim.interval_lo_db,
        interval_hi_db: sim.interval_hi_db,
        budget_exhausted: sim.budget_exhausted,
        frames: sim.probes.iter().map(|p| p.frames).sum(),
    })
}

pub fn sim_threshold(ctx: &Ctx) -> anyhow::Result<Status> {
    let cfg = &ctx.cfg;
    ensure_product(cfg)?;
    let code = cfg.component()?;
    let table = match (cfg.search.lo_db, cfg.search.hi_db) {
        (Some(_), Some(_)) => None,
        _ => Some(load_table(cfg, &code)?),
    };
    let p = sim_point(cfg, &code, table.as_ref(), cfg.channel.t)?;
    let rows = vec![vec![f(p.t), f(p.esn0_starstar_db), f(p.interval_lo_db), f(p.interval_hi_db)]];
    ctx.sink.table(
        "sim-threshold",
        cfg,
        &["T", "esn0_starstar_db", "interval_lo", "interval_hi"],
        &rows,
    )?;
    ctx.sink.summary("sim-threshold", cfg, &p)?;
    Ok(if p.budget_exhausted {
        Status::BudgetExceeded
    } else {
        Status::Done
    })
}

#[derive(Serialize)]
struct GainRow {
    code: String,
    ensemble: Ensemble,
    scan: TScan,
}

/// Staircase code of the shortened `(63,39,4)` code against the product codes
/// of the same component and of its unshortened parent.
pub fn reproduce_fig4a_point(ctx: &Ctx) -> anyhow::Result<Status> {
    let mut out = Vec::new();
    for (code, ensemble) in [
        ("nu6t4-shortened", Ensemble::Staircase),
        ("nu6t4-shortened", Ensemble::Product),
        ("nu6t4", Ensemble::Product),
    ] {
        let cfg = ExperimentConfig {
            code: code.into(),
            ensemble,
            ..ctx.cfg.clone()
        };
        let sub = Ctx {
            cfg: cfg.clone(),
            sink: ctx.sink.clone(),
            checkpoint: ctx.checkpoint.as_ref().map(|p| p.with_extension(format!("{code}.{ensemble}.ckpt"))),
        };
        out.push(GainRow {
            code: code.into(),
            ensemble,
            scan: run_scan(&sub, &cfg)?,
        });
    }
    let rows: Vec<Vec<String>> = out
        .iter()
        .map(|r| {
            vec![
                r.code.clone(),
                r.ensemble.to_string(),
                f(r.scan.t_opt),
                f(r.scan.threshold_zero_db),
                f(r.scan.threshold_opt_db),
                f(r.scan.gain_db),
            ]
        })
        .collect();
    ctx.sink.table(
        "reproduce-fig4a-point",
        &ctx.cfg,
        &["code", "ensemble", "T_opt", "esn0_star_t0_db", "esn0_star_opt_db", "gain_db"],
        &rows,
    )?;
    ctx.sink.summary("reproduce-fig4a-point", &ctx.cfg, &out)?;
    Ok(Status::Done)
}

#[derive(Serialize)]
struct Fig5 {
    de_t_opt: f64,
    de_gain_db: f64,
    points: Vec<SimPoint>,
}

/// DE and simulated thresholds over `T`, including the DE optimum.
pub fn reproduce_fig5(ctx: &Ctx) -> anyhow::Result<Status> {
    let cfg = &ctx.cfg;
    let code = cfg.component()?;
    let table = load_table(cfg, &code)?;
    let scan = run_scan(
        &Ctx {
            cfg: cfg.clone(),
            sink: ctx.sink.clone(),
            checkpoint: ctx.checkpoint.as_ref().map(|p| p.with_extension("scan.ckpt")),
        },
        cfg,
    )?;
    let mut ts = cfg.search.t_values.clone();
    ts.push(scan.t_opt);
    ts.sort_by(f64::total_cmp);
    ts.dedup_by(|a, b| (*a - *b).abs() < 1e-9);

    let hash = cfg.hash();
    let mut points: Vec<SimPoint> = match &ctx.checkpoint {
        Some(p) => Checkpoint::load(p, &hash),
        None => Vec::new(),
    };
    for &t in &ts {
        if points.iter().any(|p| (p.t - t).abs() < 1e-12) {
            continue;
        }
        let p = sim_point(cfg, &code, Some(&table), t)?;
        eprintln!(
            "T {t:.4}: simulated {:.4} dB, DE {:.4} dB",
            p.esn0_starstar_db,
            p.esn0_star_db.unwrap_or(f64::NAN)
        );
        points.push(p);
        if let Some(path) = &ctx.checkpoint {
            Checkpoint::save(path, &hash, &points)?;
        }
    }
    points.sort_by(|a, b| a.t.total_cmp(&b.t));
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| {
            let de = p.esn0_star_db.unwrap_or(f64::NAN);
            vec![
                f(p.t),
                f(de),
                f(p.esn0_starstar_db),
                f(p.interval_lo_db),
                f(p.interval_hi_db),
                f(p.esn0_starstar_db - de),
            ]
        })
        .collect();
    ctx.sink.table(
        "reproduce-fig5",
        cfg,
        &["T", "esn0_star_db", "esn0_starstar_db", "interval_lo", "interval_hi", "gap_db"],
        &rows,
    )?;
    let exhausted = points.iter().any(|p| p.budget_exhausted);
    ctx.sink.summary(
        "reproduce-fig5",
        cfg,
        &Fig5 {
            de_t_opt: scan.t_opt,
            de_gain_db: scan.gain_db,
            points,
        },
    )?;
    if let Some(path) = &ctx.checkpoint {
        let _ = std::fs::remove_file(path);
    }
    Ok(if exhausted {
        Status::BudgetExceeded
    } else {
        Status::Done
    })
}
