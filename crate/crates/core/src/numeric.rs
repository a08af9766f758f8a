//! Small numerical helpers shared by the analysis modules: log-domain
//! combinatorics, compensated summation, golden-section search and binomial
//! confidence intervals.

/// Natural logarithms of `0! ..= max!`.
#[derive(Debug, Clone)]
pub struct LnFactorial {
    table: Vec<f64>,
}

impl LnFactorial {
    pub fn new(max: usize) -> Self {
        let table = (0..=max)
            .map(|i| libm::lgamma(i as f64 + 1.0))
            .collect();
        Self { table }
    }

    pub fn max(&self) -> usize {
        self.table.len() - 1
    }

    #[inline]
    pub fn ln_fact(&self, n: usize) -> f64 {
        self.table[n]
    }

    /// `ln C(n, k)`, or `-inf` outside `0 <= k <= n`.
    #[inline]
    pub fn ln_binom(&self, n: i64, k: i64) -> f64 {
        if n < 0 || k < 0 || k > n {
            return f64::NEG_INFINITY;
        }
        let (n, k) = (n as usize, k as usize);
        self.table[n] - self.table[k] - self.table[n - k]
    }

    /// `ln C(n; k1, k2) = ln n! / (k1! k2! (n-k1-k2)!)`, `-inf` for invalid arguments.
    #[inline]
    pub fn ln_multinomial(&self, n: i64, k1: i64, k2: i64) -> f64 {
        if n < 0 || k1 < 0 || k2 < 0 || k1 + k2 > n {
            return f64::NEG_INFINITY;
        }
        let (n, k1, k2) = (n as usize, k1 as usize, k2 as usize);
        self.table[n] - self.table[k1] - self.table[k2] - self.table[n - k1 - k2]
    }

    /// `ln (n! / prod parts!)` where the parts must sum to `n`; `-inf` if any part
    /// is negative or the parts do not add up.
    #[inline]
    pub fn ln_multinomial_parts(&self, n: i64, parts: &[i64]) -> f64 {
        if n < 0 {
            return f64::NEG_INFINITY;
        }
        let mut sum = 0;
        let mut acc = self.table[n as usize];
        for &p in parts {
            if p < 0 {
                return f64::NEG_INFINITY;
            }
            sum += p;
            if sum > n {
                return f64::NEG_INFINITY;
            }
            acc -= self.table[p as usize];
        }
        if sum != n {
            return f64::NEG_INFINITY;
        }
        acc
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Minimizes a unimodal `f` on `[a, b]` by golden-section search until the
/// bracket is narrower than `tol`. Returns `(x_min, f(x_min))`.
pub fn golden_section_min<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Standard-normal quantile function (Acklam's approximation, relative error
/// below 1.2e-9).
pub fn normal_quantile(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e1,
        2.209460984245205e2,
        -2.759285104469687e2,
        1.38357751867269e2,
        -3.066479806614716e1,
        2.506628277459239,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e1,
        1.615858368580409e2,
        -1.556989798598866e2,
        6.680131188771972e1,
        -1.328068155288572e1,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-3,
        -3.223964580411365e-1,
        -2.400758277161838,
        -2.549732539343734,
        4.374664141464968,
        2.938163982698783,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-3,
        3.224671290700398e-1,
        2.445134137142996,
        3.754408661907416,
    ];
    let p_low = 0.02425;
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    if p < p_low {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - p_low {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -normal_quantile(1.0 - p)
    }
}

/// Wilson score interval for `successes` out of `trials` at two-sided
/// confidence `confidence`.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = normal_quantile(0.5 + confidence / 2.0);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Converts decibels to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}
