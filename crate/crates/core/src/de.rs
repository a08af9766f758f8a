//! Density evolution of message error and erasure probabilities on the GLDPC
//! ensemble (product codes) and the spatially coupled ensemble (staircase
//! codes), with noise-threshold search and erasure-threshold scans.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{transition_probs, ChannelParams, ChannelTriple};
use crate::error::{Error, Result};
use crate::numeric::{golden_section_min, CompensatedSum, LnFactorial};
use crate::transition::TransitionTable;

/// In the log-domain evaluation, terms of the `(D', E')` convolution below
/// this mass are skipped.
const F_SKIP: f64 = 1e-30;

/// Error and erasure probability of the variable-to-check messages.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DeState {
    pub delta: f64,
    pub epsilon: f64,
}

impl DeState {
    pub const ZERO: DeState = DeState { delta: 0.0, epsilon: 0.0 };

    pub fn new(delta: f64, epsilon: f64) -> Self {
        Self { delta, epsilon }
    }

    /// Bit error probability when erasures are resolved by a fair coin.
    pub fn rho(&self) -> f64 {
        self.delta + 0.5 * self.epsilon
    }

    fn midpoint(a: DeState, b: DeState) -> DeState {
        DeState::new(0.5 * (a.delta + b.delta), 0.5 * (a.epsilon + b.epsilon))
    }
}

impl From<ChannelTriple> for DeState {
    fn from(c: ChannelTriple) -> Self {
        Self::new(c.delta, c.epsilon)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ensemble {
    /// GLDPC ensemble of a product code.
    Product,
    /// Spatially coupled ensemble of a staircase code.
    Staircase,
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ensemble::Product => "product",
            Ensemble::Staircase => "staircase",
        })
    }
}

impl FromStr for Ensemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "product" | "gldpc" => Ok(Ensemble::Product),
            "staircase" | "sc" | "sc-gldpc" => Ok(Ensemble::Staircase),
            other => Err(Error::Config(format!("unknown ensemble `{other}`"))),
        }
    }
}

/// Stopping rules and search settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DeConfig {
    /// A run has converged when the final `rho` is below this.
    pub rho_target: f64,
    /// A run stops once `rho` changes by less than this in one iteration.
    pub stagnation: f64,
    /// Safety cap on the number of iterations per run.
    pub max_iterations: usize,
    pub bracket_lo_db: f64,
    pub bracket_hi_db: f64,
    /// Bisection stops when the bracket is narrower than this.
    pub width_db: f64,
    /// Number of coupled variable-node groups kept in the recursion.
    pub sc_groups: usize,
    /// `rho` of the coupled ensemble averages groups `1..=sc_average`.
    pub sc_average: usize,
    /// Extra probes above the threshold that check for non-monotone
    /// convergence.
    pub monotonicity_probes: usize,
}

impl Default for DeConfig {
    fn default() -> Self {
        Self {
            rho_target: 1e-10,
            stagnation: 1e-12,
            max_iterations: 100_000,
            bracket_lo_db: -2.0,
            bracket_hi_db: 8.0,
            width_db: 1e-3,
            sc_groups: 32,
            sc_average: 10,
            monotonicity_probes: 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    Stagnated,
    IterationCap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeOutcome {
    pub converged: bool,
    pub rho: f64,
    pub iterations: usize,
    pub stop: StopReason,
}

/// Above this length the multinomial coefficients may leave the `f64` range
/// and the recursion is evaluated term by term in the log domain.
const DIRECT_MAX_N: usize = 600;

/// One check-node update `chi_rec` for a fixed table and channel.
pub struct Recursion<'a> {
    table: &'a TransitionTable,
    channel: ChannelTriple,
    lf: LnFactorial,
    direct: Option<Coefficients>,
}

/// Per-cell weights `C(n-1; D', E')` times the transition terms, so that a
/// step reduces to power tables and multiply-adds.
struct Coefficients {
    delta: Vec<f64>,
    epsilon: Vec<f64>,
    /// `C(n-1, E')` for `E' >= d_des`, indexed by `E' - d_des`.
    tail: Vec<f64>,
}

impl<'a> Recursion<'a> {
    pub fn new(table: &'a TransitionTable, channel: ChannelTriple) -> Self {
        let lf = LnFactorial::new(table.n());
        let direct = (table.n() <= DIRECT_MAX_N).then(|| Self::coefficients(table, channel, &lf));
        Self {
            table,
            channel,
            lf,
            direct,
        }
    }

    fn coefficients(table: &TransitionTable, ch: ChannelTriple, lf: &LnFactorial) -> Coefficients {
        let n1 = table.n() - 1;
        let d_des = table.d_des();
        let mut delta = vec![0.0; (n1 + 1) * d_des];
        let mut epsilon = vec![0.0; (n1 + 1) * d_des];
        for dp in 0..=n1 {
            for ep in 0..d_des.min(n1 - dp + 1) {
                let m = lf.ln_multinomial(n1 as i64, dp as i64, ep as i64).exp();
                let [t01, tq1, t10, tq0] = table.off_diagonal(dp, ep);
                delta[dp * d_des + ep] = m * (ch.delta * (1.0 - t10) + ch.epsilon * tq1 + ch.correct * t01);
                epsilon[dp * d_des + ep] = m * ch.epsilon * (1.0 - tq1 - tq0);
            }
        }
        let tail = (d_des..=n1).map(|e| lf.ln_binom(n1 as i64, e as i64).exp()).collect();
        Coefficients { delta, epsilon, tail }
    }

    pub fn channel(&self) -> ChannelTriple {
        self.channel
    }

    /// `chi_rec(state)`.
    pub fn step(&self, m: DeState) -> DeState {
        let out = match &self.direct {
            Some(coef) => self.step_direct(coef, m),
            None => self.step_log(m),
        };
        DeState::new(out.delta.clamp(0.0, 1.0), out.epsilon.clamp(0.0, 1.0))
    }

    fn step_direct(&self, coef: &Coefficients, m: DeState) -> DeState {
        let n1 = self.table.n() - 1;
        let d_des = self.table.d_des();
        let c = (1.0 - m.delta - m.epsilon).max(0.0);
        let pd = powers(m.delta, n1);
        let pe = powers(m.epsilon, n1);
        let pc = powers(c, n1);
        let (mut d_sum, mut e_sum) = (0.0, 0.0);
        for dp in 0..=n1 {
            if pd[dp] == 0.0 {
                break;
            }
            let row = dp * d_des;
            for ep in 0..d_des.min(n1 - dp + 1) {
                let f = pd[dp] * pe[ep] * pc[n1 - dp - ep];
                d_sum += coef.delta[row + ep] * f;
                e_sum += coef.epsilon[row + ep] * f;
            }
        }
        // With E' >= d_des the decoder returns its input unchanged.
        let pq = powers(1.0 - m.epsilon, n1);
        let tail: f64 = coef
            .tail
            .iter()
            .enumerate()
            .map(|(i, b)| b * pe[d_des + i] * pq[n1 - d_des - i])
            .sum();
        DeState::new(
            d_sum + self.channel.delta * tail,
            e_sum + self.channel.epsilon * tail,
        )
    }

    /// Term-by-term evaluation with log-domain masses; terms below
    /// `F_SKIP` are dropped.
    fn step_log(&self, m: DeState) -> DeState {
        let n1 = self.table.n() - 1;
        let d_des = self.table.d_des();
        let ChannelTriple {
            delta: dc,
            epsilon: ec,
            correct: cc,
        } = self.channel;
        let c = (1.0 - m.delta - m.epsilon).max(0.0);
        let (ld, le, lc) = (ln0(m.delta), ln0(m.epsilon), ln0(c));
        let ln_skip = F_SKIP.ln();
        // Most likely error count; past it, rows below the skip bound end the loop.
        let mode = ((n1 + 1) as f64 * m.delta).floor() as usize;

        let mut d_sum = CompensatedSum::new();
        let mut e_sum = CompensatedSum::new();
        for dp in 0..=n1 {
            let mut row_alive = false;
            for ep in 0..d_des.min(n1 - dp + 1) {
                let lf = self.lf.ln_multinomial(n1 as i64, dp as i64, ep as i64)
                    + pow_ln(dp, ld)
                    + pow_ln(ep, le)
                    + pow_ln(n1 - dp - ep, lc);
                if !(lf >= ln_skip) {
                    continue;
                }
                row_alive = true;
                let f = lf.exp();
                let [t01, tq1, t10, tq0] = self.table.off_diagonal(dp, ep);
                d_sum.add(f * (dc * (1.0 - t10) + ec * tq1 + cc * t01));
                e_sum.add(f * ec * (1.0 - tq1 - tq0));
            }
            if !row_alive && dp > mode {
                break;
            }
        }
        let tail = binomial_upper_tail(&self.lf, n1, m.epsilon, d_des);
        d_sum.add(dc * tail);
        e_sum.add(ec * tail);
        DeState::new(d_sum.value(), e_sum.value())
    }
}

/// `[1, x, x^2, ..., x^n]`.
fn powers(x: f64, n: usize) -> Vec<f64> {
    let mut p = Vec::with_capacity(n + 1);
    let mut acc = 1.0;
    for _ in 0..=n {
        p.push(acc);
        acc *= x;
    }
    p
}

fn ln0(p: f64) -> f64 {
    if p > 0.0 {
        p.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// `k * ln_p` with `0 * ln 0 = 0`.
#[inline]
fn pow_ln(k: usize, ln_p: f64) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * ln_p
    }
}

/// `P(Bin(n, p) >= k)`, summed term by term.
fn binomial_upper_tail(lf: &LnFactorial, n: usize, p: f64, k: usize) -> f64 {
    if k > n || p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    let mode = ((n + 1) as f64 * p).floor() as usize;
    let mut s = CompensatedSum::new();
    for e in k..=n {
        let lt = lf.ln_binom(n as i64, e as i64) + e as f64 * lp + (n - e) as f64 * lq;
        let t = lt.exp();
        s.add(t);
        if e > mode && t < 1e-300 {
            break;
        }
    }
    s.value().min(1.0)
}

/// One step of the coupled recursion over groups `1..=G`; `groups[0]` is the
/// left boundary, held at zero when `pinned`, otherwise copied from group 1.
/// Beyond the last group the state continues unchanged.
pub fn sc_step(rec: &Recursion<'_>, groups: &[DeState], pinned: bool) -> Vec<DeState> {
    let g = groups.len() - 1;
    let left = if pinned { DeState::ZERO } else { groups[1] };
    let at = |i: usize| -> DeState {
        match i {
            0 => left,
            i if i > g => groups[g],
            i => groups[i],
        }
    };
    // rec_out[i] = chi_rec at check group i, for i = 1..=g+1.
    let mut rec_out = vec![DeState::ZERO; g + 2];
    let mut last: Option<(DeState, DeState)> = None;
    for (i, slot) in rec_out.iter_mut().enumerate().skip(1) {
        let hat = DeState::midpoint(at(i - 1), at(i));
        let out = match last {
            Some((h, o)) if h == hat => o,
            _ => rec.step(hat),
        };
        last = Some((hat, out));
        *slot = out;
    }
    let mut next = vec![DeState::ZERO; g + 1];
    for i in 1..=g {
        next[i] = DeState::midpoint(rec_out[i], rec_out[i + 1]);
    }
    if !pinned {
        next[0] = next[1];
    }
    next
}

fn average_rho(groups: &[DeState], count: usize) -> f64 {
    let upto = count.min(groups.len() - 1);
    let s: f64 = groups[1..=upto].iter().map(DeState::rho).sum();
    s / upto as f64
}

/// Iterates the GLDPC recursion from the channel state until `rho` stagnates.
pub fn run_gldpc(rec: &Recursion<'_>, cfg: &DeConfig) -> DeOutcome {
    let mut state = DeState::from(rec.channel());
    let mut prev = state.rho();
    iterate(cfg, |_| {
        state = rec.step(state);
        let rho = state.rho();
        let change = (rho - prev).abs();
        prev = rho;
        (rho, change)
    })
}

/// Iterates the coupled recursion with `cfg.sc_groups` groups.
pub fn run_sc(rec: &Recursion<'_>, cfg: &DeConfig) -> DeOutcome {
    run_sc_with(rec, cfg, true)
}

fn run_sc_with(rec: &Recursion<'_>, cfg: &DeConfig, pinned: bool) -> DeOutcome {
    let mut groups = vec![DeState::from(rec.channel()); cfg.sc_groups + 1];
    if pinned {
        groups[0] = DeState::ZERO;
    }
    let mut prev = average_rho(&groups, cfg.sc_average);
    iterate(cfg, |_| {
        groups = sc_step(rec, &groups, pinned);
        let rho = average_rho(&groups, cfg.sc_average);
        let change = (rho - prev).abs();
        prev = rho;
        (rho, change)
    })
}

fn iterate<F: FnMut(usize) -> (f64, f64)>(cfg: &DeConfig, mut step: F) -> DeOutcome {
    let mut rho = f64::NAN;
    for it in 1..=cfg.max_iterations {
        let (r, change) = step(it);
        rho = r;
        if change < cfg.stagnation {
            return DeOutcome {
                converged: rho < cfg.rho_target,
                rho,
                iterations: it,
                stop: StopReason::Stagnated,
            };
        }
    }
    DeOutcome {
        converged: rho < cfg.rho_target,
        rho,
        iterations: cfg.max_iterations,
        stop: StopReason::IterationCap,
    }
}

/// Runs density evolution for one channel point.
pub fn evaluate(table: &TransitionTable, ensemble: Ensemble, channel: ChannelParams, cfg: &DeConfig) -> DeOutcome {
    let rec = Recursion::new(table, transition_probs(channel));
    match ensemble {
        Ensemble::Product => run_gldpc(&rec, cfg),
        Ensemble::Staircase => run_sc(&rec, cfg),
    }
}

/// Bisection probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub esn0_db: f64,
    pub outcome: DeOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    /// Smallest probed `E_s/N_0` (dB) at which density evolution converged.
    pub esn0_db: f64,
    /// Largest probed `E_s/N_0` (dB) at which it did not.
    pub below_db: f64,
    /// Set when a probe above the threshold failed to converge.
    pub non_monotone: bool,
    /// Set when the lower end of the bracket already converged.
    pub at_lower_bound: bool,
    pub probes: Vec<Probe>,
}

/// Noise threshold in dB for the erasure threshold `t`.
pub fn threshold(table: &TransitionTable, ensemble: Ensemble, t: f64, cfg: &DeConfig) -> Result<Threshold> {
    let mut probes = Vec::new();
    let mut run = |db: f64| {
        let outcome = evaluate(table, ensemble, ChannelParams::from_db(db, t), cfg);
        probes.push(Probe { esn0_db: db, outcome });
        outcome.converged
    };
    let (mut lo, mut hi) = (cfg.bracket_lo_db, cfg.bracket_hi_db);
    if !(lo < hi) {
        return Err(Error::Bracket {
            lo_db: lo,
            hi_db: hi,
            reason: "empty bracket".into(),
        });
    }
    if !run(hi) {
        return Err(Error::Bracket {
            lo_db: lo,
            hi_db: hi,
            reason: format!("no convergence at the upper end (T = {t})"),
        });
    }
    if run(lo) {
        return Ok(Threshold {
            esn0_db: lo,
            below_db: lo,
            non_monotone: false,
            at_lower_bound: true,
            probes,
        });
    }
    while hi - lo > cfg.width_db {
        let mid = 0.5 * (lo + hi);
        if run(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut non_monotone = false;
    let span = cfg.bracket_hi_db - hi;
    for i in 1..=cfg.monotonicity_probes {
        let db = hi + span * i as f64 / (cfg.monotonicity_probes + 1) as f64;
        non_monotone |= !run(db);
    }
    Ok(Threshold {
        esn0_db: hi,
        below_db: lo,
        non_monotone,
        at_lower_bound: false,
        probes,
    })
}

/// Grid points added per extension when the minimum lies on the upper edge.
const EXTEND_POINTS: usize = 5;

/// Scan settings for the optimal erasure threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScanConfig {
    /// Grid of `T` values; must contain `0`. The grid is extended upwards
    /// while its minimum lies on the upper edge.
    pub grid: Vec<f64>,
    /// Golden-section refinement stops when the `T` bracket is narrower than this.
    pub refine_tol: f64,
    /// Bisection width used for every threshold in the scan.
    pub width_db: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            grid: (0..=20).map(|i| i as f64 * 0.01).collect(),
            refine_tol: 1e-3,
            width_db: 1e-5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub t: f64,
    pub esn0_db: f64,
    pub non_monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TScan {
    /// Grid points followed by the refinement points, in evaluation order.
    pub points: Vec<ScanPoint>,
    pub t_opt: f64,
    pub threshold_opt_db: f64,
    pub threshold_zero_db: f64,
    /// `threshold(0) - threshold(T_opt)`.
    pub gain_db: f64,
}

/// Minimizes the noise threshold over `T`: grid scan in parallel, then
/// golden-section refinement around the best grid point. A threshold stuck at
/// the lower end of the bracket is reported as a bracket error.
pub fn t_opt_scan(table: &TransitionTable, ensemble: Ensemble, de: &DeConfig, scan: &ScanConfig) -> Result<TScan> {
    t_opt_scan_resumable(table, ensemble, de, scan, &[], &|_| {})
}

/// [`t_opt_scan`] that reuses the points in `known` (matched on `T`) and
/// reports every newly computed point to `on_point`.
pub fn t_opt_scan_resumable(
    table: &TransitionTable,
    ensemble: Ensemble,
    de: &DeConfig,
    scan: &ScanConfig,
    known: &[ScanPoint],
    on_point: &(dyn Fn(&ScanPoint) + Sync),
) -> Result<TScan> {
    let mut grid = scan.grid.clone();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    if grid.first() != Some(&0.0) || grid.iter().any(|t| !(*t >= 0.0)) {
        return Err(Error::Config("the T grid must contain 0 and no negative values".into()));
    }
    let cfg = DeConfig {
        width_db: scan.width_db,
        ..de.clone()
    };
    let point = |t: f64| -> Result<ScanPoint> {
        if let Some(p) = known.iter().find(|p| (p.t - t).abs() < 1e-12) {
            return Ok(p.clone());
        }
        let th = threshold(table, ensemble, t, &cfg)?;
        if th.at_lower_bound {
            return Err(Error::Bracket {
                lo_db: cfg.bracket_lo_db,
                hi_db: cfg.bracket_hi_db,
                reason: format!("already converges at the lower end (T = {t})"),
            });
        }
        let p = ScanPoint {
            t,
            esn0_db: th.esn0_db,
            non_monotone: th.non_monotone,
        };
        on_point(&p);
        Ok(p)
    };
    let mut points = grid.par_iter().map(|&t| point(t)).collect::<Result<Vec<_>>>()?;
    let argmin = |pts: &[ScanPoint]| {
        (0..pts.len())
            .min_by(|&a, &b| pts[a].esn0_db.total_cmp(&pts[b].esn0_db))
            .unwrap()
    };
    // A minimum on the upper edge extends the grid by the last spacing.
    let mut best = argmin(&points);
    while grid.len() > 1 && best == grid.len() - 1 && grid[best] < 1.0 {
        let step = grid[best] - grid[best - 1];
        let extra: Vec<f64> = (1..=EXTEND_POINTS)
            .map(|i| grid[best] + step * i as f64)
            .filter(|&t| t <= 1.0)
            .collect();
        if extra.is_empty() {
            break;
        }
        points.extend(extra.par_iter().map(|&t| point(t)).collect::<Result<Vec<_>>>()?);
        grid.extend(extra);
        best = argmin(&points);
    }
    let threshold_zero_db = points[0].esn0_db;
    let (mut t_opt, mut threshold_opt_db) = (points[best].t, points[best].esn0_db);

    if grid.len() > 1 {
        let a = grid[best.saturating_sub(1)];
        let b = grid[(best + 1).min(grid.len() - 1)];
        let mut refined = Vec::new();
        let (t, th) = golden_section_min(
            |t| match point(t) {
                Ok(p) => {
                    refined.push(p.clone());
                    p.esn0_db
                }
                Err(_) => f64::INFINITY,
            },
            a,
            b,
            scan.refine_tol,
        );
        points.extend(refined);
        if th < threshold_opt_db {
            t_opt = t;
            threshold_opt_db = th;
        }
    }
    Ok(TScan {
        points,
        t_opt,
        threshold_opt_db,
        threshold_zero_db,
        gain_db: threshold_zero_db - threshold_opt_db,
    })
}
