//! Counter requirements for top-k identification on i.i.d. Zipf streams.
//!
//! Under a Zipf law with skew `alpha` over `D` items, item `i` has
//! probability `f_i = i^-alpha / Γ_alpha(D)`. Space Saving keeps the top-k
//! resident iff `m > k + (1 - F_k) / f_k`. The constant-probability variant
//! ([`crate::counters::RapPrime`]) needs `P > f_m / f_k` and
//! `f_k > (F_m - F_k + P (1 - F_m)) / (m - k)`; with the admission
//! probability chosen from the skew it needs asymptotically fewer counters.

use crate::{Error, Result};

/// Largest domain summed term by term; larger domains use Euler–Maclaurin.
pub const EXACT_SUM_MAX_DOMAIN: f64 = 1e8;

/// Terms summed directly before the Euler–Maclaurin tail takes over.
const EM_HEAD: u64 = 1000;

/// Default slack constant `c` in the counter selections.
pub const DEFAULT_C_CONST: f64 = 10.0;

/// Generalized harmonic number `Γ_alpha(D) = Σ_{i=1..D} i^-alpha`.
///
/// Non-integer `domain` is truncated. Domains up to 1e8 are summed exactly;
/// beyond that the tail is evaluated by Euler–Maclaurin (see
/// [`gamma_alpha_euler_maclaurin`]).
///
/// # Panics
/// When `domain < 1`.
pub fn gamma_alpha(alpha: f64, domain: f64) -> f64 {
    assert!(domain >= 1.0, "domain must be at least 1, got {domain}");
    if domain <= EXACT_SUM_MAX_DOMAIN {
        gamma_alpha_exact(alpha, domain as u64)
    } else {
        gamma_alpha_euler_maclaurin(alpha, domain)
    }
}

/// Direct summation, smallest terms first.
pub fn gamma_alpha_exact(alpha: f64, domain: u64) -> f64 {
    if alpha == 0.0 {
        return domain as f64;
    }
    (1..=domain).rev().map(|i| (i as f64).powf(-alpha)).sum()
}

/// Exact head `Σ_{i<1000}` plus an Euler–Maclaurin tail from 1000 to `D`
/// with Bernoulli corrections through `B_6`.
///
/// The remainder is bounded by `2ζ(8)/(2π)^8 · |f^(7)(1000)|`, which is below
/// `1e-17` for every `alpha <= 4`, far under `1e-6` relative.
pub fn gamma_alpha_euler_maclaurin(alpha: f64, domain: f64) -> f64 {
    let d = domain.floor();
    if d < (EM_HEAD + 1) as f64 {
        return gamma_alpha_exact(alpha, d as u64);
    }
    let head = gamma_alpha_exact(alpha, EM_HEAD - 1);
    let n = EM_HEAD as f64;

    // ∫_n^d x^-alpha dx, stable through alpha = 1.
    let log_ratio = (d / n).ln();
    let s = 1.0 - alpha;
    let integral = if s == 0.0 {
        log_ratio
    } else {
        n.powf(s) * (s * log_ratio).exp_m1() / s
    };

    let f = |x: f64| x.powf(-alpha);
    // q-th derivative of x^-alpha.
    let deriv = |q: i32, x: f64| {
        let rising: f64 = (0..q).map(|j| alpha + j as f64).product();
        let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
        sign * rising * x.powf(-alpha - q as f64)
    };
    const BERNOULLI_OVER_FACTORIAL: [(i32, f64); 3] =
        [(1, 1.0 / 12.0), (3, -1.0 / 720.0), (5, 1.0 / 30240.0)];
    let corrections: f64 = BERNOULLI_OVER_FACTORIAL
        .iter()
        .map(|&(q, b)| b * (deriv(q, d) - deriv(q, n)))
        .sum();

    head + integral + (f(n) + f(d)) / 2.0 + corrections
}

/// Cumulative probability `F_r = Γ_alpha(r) / Γ_alpha(D)` of the top `r`
/// ranks.
pub fn cumulative_freq(alpha: f64, domain: f64, rank: u64) -> Result<f64> {
    if rank == 0 || rank as f64 > domain.floor() {
        return Err(Error::invalid("rank", format!("must lie in 1..={domain}, got {rank}")));
    }
    if rank as f64 == domain.floor() {
        return Ok(1.0);
    }
    Ok(gamma_alpha(alpha, rank as f64) / gamma_alpha(alpha, domain))
}

/// Workload and target for the counter-requirement formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryInputs {
    pub k: u64,
    pub alpha: f64,
    /// Domain size; a float so that domains such as `2^64` or `2^80` fit.
    pub domain: f64,
    pub c_const: f64,
}

impl TheoryInputs {
    pub fn new(k: u64, alpha: f64, domain: f64) -> Self {
        Self {
            k,
            alpha,
            domain,
            c_const: DEFAULT_C_CONST,
        }
    }

    pub fn with_c(self, c_const: f64) -> Self {
        Self { c_const, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::invalid("k", "must be at least 1"));
        }
        if !(self.domain.is_finite() && self.domain >= self.k as f64) {
            return Err(Error::invalid("domain", format!("must be finite and >= k, got {}", self.domain)));
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::invalid("alpha", format!("must be finite and >= 0, got {}", self.alpha)));
        }
        if !(self.c_const.is_finite() && self.c_const > 0.0) {
            return Err(Error::invalid("c", format!("must be positive, got {}", self.c_const)));
        }
        Ok(())
    }
}

/// Smallest integer strictly above `bound`.
fn strictly_above(bound: f64) -> u128 {
    bound.floor().max(0.0) as u128 + 1
}

/// `bound` rounded up, ignoring floating-point noise just above an integer.
fn ceil_count(x: f64) -> u128 {
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-9 * nearest.abs().max(1.0) {
        nearest as u128
    } else {
        x.ceil() as u128
    }
}

/// Counters Space Saving needs to keep the top-k resident:
/// the smallest `m > k + k^alpha (Γ_alpha(D) - Γ_alpha(k))`.
pub fn ss_required_counters(inputs: &TheoryInputs) -> Result<u128> {
    inputs.validate()?;
    let k = inputs.k as f64;
    let tail = gamma_alpha(inputs.alpha, inputs.domain) - gamma_alpha(inputs.alpha, k);
    Ok(strictly_above(k + k.powf(inputs.alpha) * tail.max(0.0)))
}

/// Admission probability and counter count for the constant-probability
/// variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RapPrimeSelection {
    pub admission_probability: f64,
    pub counters: u128,
}

/// Regime-dependent `(P, m)`:
///
/// * `0 < alpha < 1`: `P = D^((alpha² - alpha)/(1 + alpha))`,
///   `m = c·k·D^((1 - alpha)/(1 + alpha))`
/// * `alpha = 1`: `P = sqrt(1 / ln D)`, `m = c·k·sqrt(ln D)`
///
/// `m` is rounded up and `P` clamped to `(0, 1]`. Other skews have no
/// selection rule and are rejected.
pub fn rap_prime_selection(inputs: &TheoryInputs) -> Result<RapPrimeSelection> {
    inputs.validate()?;
    let TheoryInputs {
        k,
        alpha,
        domain,
        c_const,
    } = *inputs;
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::UnsupportedRegime(alpha));
    }
    let k = k as f64;
    let (p, m) = if alpha < 1.0 {
        let p = domain.powf((alpha * alpha - alpha) / (1.0 + alpha));
        let m = c_const * k * domain.powf((1.0 - alpha) / (1.0 + alpha));
        (p, m)
    } else {
        let ln_d = domain.ln();
        ((1.0 / ln_d).sqrt(), c_const * k * ln_d.sqrt())
    };
    let admission_probability = if p.is_finite() && p > 0.0 { p.min(1.0) } else { 1.0 };
    Ok(RapPrimeSelection {
        admission_probability,
        counters: ceil_count(m).max(1),
    })
}

/// Outcome of the two convergence constraints for a `(P, m)` choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstraintCheck {
    /// `P > f_m / f_k`: a missing top-k item eventually gets a counter.
    pub admission: bool,
    /// `f_k > (F_m - F_k + P (1 - F_m)) / (m - k)`: resident top-k items
    /// keep their counters.
    pub keep_counter: bool,
}

impl ConstraintCheck {
    pub fn both(&self) -> bool {
        self.admission && self.keep_counter
    }
}

/// Evaluates both constraints under the Zipf model with exact or
/// Euler–Maclaurin Γ values. Requires `k < m <= D`.
pub fn check_rap_prime_constraints(inputs: &TheoryInputs, p: f64, m: u128) -> Result<ConstraintCheck> {
    inputs.validate()?;
    if m <= inputs.k as u128 {
        return Err(Error::invalid("m", format!("must exceed k = {}, got {m}", inputs.k)));
    }
    if m as f64 > inputs.domain.floor() {
        return Err(Error::invalid("m", format!("must not exceed the domain {}, got {m}", inputs.domain)));
    }
    let alpha = inputs.alpha;
    let (k, m) = (inputs.k as f64, m as f64);

    // f_m / f_k = (m/k)^-alpha
    let admission = p > (m / k).powf(-alpha);

    // Both sides scaled by Γ_alpha(D).
    let g_k = gamma_alpha(alpha, k);
    let g_m = gamma_alpha(alpha, m);
    let g_d = gamma_alpha(alpha, inputs.domain);
    let rhs = (g_m - g_k + p * (g_d - g_m)) / (m - k);
    let keep_counter = k.powf(-alpha) > rhs;

    Ok(ConstraintCheck {
        admission,
        keep_counter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_64: f64 = 18_446_744_073_709_551_616.0;

    #[test]
    fn gamma_small_values() {
        for alpha in [0.0, 0.5, 1.0, 2.3] {
            assert_eq!(gamma_alpha(alpha, 1.0), 1.0);
        }
        assert!((gamma_alpha(1.0, 3.0) - (1.0 + 0.5 + 1.0 / 3.0)).abs() < 1e-15);
        assert_eq!(gamma_alpha(0.0, 1234.0), 1234.0);
    }

    #[test]
    fn gamma_reference_values() {
        let g2 = gamma_alpha(2.0, 1e6);
        let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
        // Tail of Σ 1/i² past 10^6 is about 1e-6.
        assert!((g2 - (zeta2 - 1e-6)).abs() < 1e-9, "{g2}");
        assert!((g2 - 1.645).abs() < 1e-3);

        let g1 = gamma_alpha(1.0, 1e6);
        assert!((g1 - (1.78f64 * 1e6).ln()).abs() / g1 < 0.01, "{g1}");
        // H_n = ln n + γ + 1/(2n) - ...
        let harmonic = (1e6f64).ln() + 0.577_215_664_901_532_9 + 0.5e-6;
        assert!((g1 - harmonic).abs() < 1e-10);
    }

    #[test]
    fn euler_maclaurin_matches_direct_sum() {
        for alpha in [0.0, 0.3, 0.6, 0.8, 1.0, 1.2, 2.0] {
            for d in [2_000u64, 10_007, 1_000_000] {
                let exact = gamma_alpha_exact(alpha, d);
                let em = gamma_alpha_euler_maclaurin(alpha, d as f64);
                assert!((exact - em).abs() / exact < 1e-12, "alpha {alpha} d {d}: {exact} vs {em}");
            }
        }
        assert_eq!(gamma_alpha_euler_maclaurin(0.7, 10.0), gamma_alpha_exact(0.7, 10));
    }

    #[test]
    fn gamma_monotone() {
        let ds = [2.0, 10.0, 1e3, 1e5, 1e9, 1e15];
        for w in ds.windows(2) {
            assert!(gamma_alpha(0.8, w[1]) > gamma_alpha(0.8, w[0]));
        }
        let alphas = [0.0, 0.4, 0.8, 1.0, 1.5];
        for w in alphas.windows(2) {
            assert!(gamma_alpha(w[1], 1e4) < gamma_alpha(w[0], 1e4));
            assert!(gamma_alpha(w[1], 1e10) < gamma_alpha(w[0], 1e10));
        }
    }

    #[test]
    fn cumulative_values() {
        assert_eq!(cumulative_freq(0.9, 500.0, 500).unwrap(), 1.0);
        assert!((cumulative_freq(1.0, 2.0, 1).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((cumulative_freq(0.0, 40.0, 10).unwrap() - 0.25).abs() < 1e-15);
        assert!(cumulative_freq(1.0, 10.0, 0).is_err());
        assert!(cumulative_freq(1.0, 10.0, 11).is_err());
    }

    #[test]
    fn ss_counters_worked_example() {
        let m = ss_required_counters(&TheoryInputs::new(32, 0.8, TWO_64)).unwrap();
        assert!((513_000..=627_000).contains(&m), "{m}");
    }

    /// Raw `k + (1 - F_k)/f_k` from explicit probabilities.
    fn raw_ss_bound(k: u64, alpha: f64, domain: u64) -> f64 {
        let weights: Vec<f64> = (1..=domain).map(|i| (i as f64).powf(-alpha)).collect();
        let total: f64 = weights.iter().sum();
        let f_k = weights[k as usize - 1] / total;
        let big_f_k: f64 = weights[..k as usize].iter().sum::<f64>() / total;
        k as f64 + (1.0 - big_f_k) / f_k
    }

    #[test]
    fn ss_counters_against_raw_inequality() {
        for (k, alpha, d) in [(1, 0.0, 1000), (5, 0.0, 77), (3, 0.7, 5000), (10, 1.0, 20_000), (2, 1.5, 300)] {
            let m = ss_required_counters(&TheoryInputs::new(k, alpha, d as f64)).unwrap() as f64;
            let raw = raw_ss_bound(k, alpha, d);
            assert!(m > raw && m - 1.0 <= raw + 1e-6, "k {k} alpha {alpha} d {d}: m {m} raw {raw}");
        }
        // Uniform: bound is exactly D.
        assert_eq!(ss_required_counters(&TheoryInputs::new(1, 0.0, 1000.0)).unwrap(), 1001);
        assert_eq!(ss_required_counters(&TheoryInputs::new(1, 1.0, 1.0)).unwrap(), 2);
        assert_eq!(ss_required_counters(&TheoryInputs::new(7, 0.8, 7.0)).unwrap(), 8);
    }

    #[test]
    fn rap_prime_worked_example() {
        let sel = rap_prime_selection(&TheoryInputs::new(32, 0.8, TWO_64)).unwrap();
        assert!((0.017..0.0199).contains(&sel.admission_probability), "{sel:?}");
        assert!((40_000..=48_000).contains(&sel.counters), "{sel:?}");
    }

    #[test]
    fn rap_prime_skew_one() {
        let sel = rap_prime_selection(&TheoryInputs::new(1, 1.0, 100f64.exp()).with_c(1.0)).unwrap();
        assert!((sel.admission_probability - 0.1).abs() < 1e-12);
        assert_eq!(sel.counters, 10);
    }

    #[test]
    fn rap_prime_rejects_other_regimes() {
        for alpha in [0.0, 1.2, 2.0] {
            assert!(matches!(
                rap_prime_selection(&TheoryInputs::new(4, alpha, 1e6)),
                Err(Error::UnsupportedRegime(_))
            ));
        }
        assert!(rap_prime_selection(&TheoryInputs::new(0, 0.5, 1e6)).is_err());
        assert!(rap_prime_selection(&TheoryInputs::new(4, 0.5, 1e6).with_c(0.0)).is_err());
    }

    #[test]
    fn constraints_hold_for_selected_pair() {
        let inputs = TheoryInputs::new(32, 0.8, (1u64 << 24) as f64);
        let sel = rap_prime_selection(&inputs).unwrap();
        let check = check_rap_prime_constraints(&inputs, sel.admission_probability, sel.counters).unwrap();
        assert!(check.both(), "{sel:?} {check:?}");
    }

    #[test]
    fn space_saving_degenerate_case() {
        for (k, alpha, d) in [(32u64, 0.8, (1u64 << 24) as f64), (4, 1.0, 1e6), (10, 0.5, 1e5)] {
            let inputs = TheoryInputs::new(k, alpha, d);
            let m = ss_required_counters(&inputs).unwrap();
            let check = check_rap_prime_constraints(&inputs, 1.0, m).unwrap();
            assert!(check.both(), "{inputs:?} {check:?}");
            let short = check_rap_prime_constraints(&inputs, 1.0, m - 2).unwrap();
            assert!(short.admission && !short.keep_counter);
        }
    }

    #[test]
    fn tiny_probability_fails_admission() {
        for alpha in [0.3, 0.8, 1.0] {
            let inputs = TheoryInputs::new(16, alpha, 1e6);
            let check = check_rap_prime_constraints(&inputs, 1e-12, 17).unwrap();
            assert!(!check.admission);
        }
        let inputs = TheoryInputs::new(16, 0.8, 1e6);
        assert!(check_rap_prime_constraints(&inputs, 0.5, 16).is_err());
        assert!(check_rap_prime_constraints(&inputs, 0.5, 2_000_000).is_err());
    }
}
