//! Exact arithmetic functions and the explicit bound checks on omega(n),
//! tau(n), phi(n) and the two trigonometric sums that every other module
//! consumes.

use crate::util::Kahan;

/// Euler-Mascheroni constant, 17 significant digits.
pub const EULER_GAMMA: f64 = 0.5772156649015329;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ArithError {
    #[error("n = 0 is not a valid input")]
    Zero,
    #[error("bound undefined for n = {0} (needs n >= 3 so that log log n > 0)")]
    BoundDomain(u64),
    #[error("trig sums need x >= 1, got {0}")]
    TrigDomain(f64),
}

/// Complete factorization of a positive integer, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    pub primes: Vec<(u64, u32)>,
}

impl Factorization {
    /// Trial division up to sqrt(n); desk scale does not justify more.
    pub fn factorize(n: u64) -> Result<Self, ArithError> {
        if n == 0 {
            return Err(ArithError::Zero);
        }
        let mut primes = Vec::new();
        let mut m = n;
        for p in [2u64, 3] {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            if e > 0 {
                primes.push((p, e));
            }
        }
        // 6k +- 1 wheel
        let mut d = 5u64;
        while d.saturating_mul(d) <= m {
            for p in [d, d + 2] {
                if m % p == 0 {
                    let mut e = 0;
                    while m % p == 0 {
                        m /= p;
                        e += 1;
                    }
                    primes.push((p, e));
                }
            }
            d += 6;
        }
        if m > 1 {
            primes.push((m, 1));
        }
        Ok(Factorization { n, primes })
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> u32 {
        self.primes.len() as u32
    }

    /// Number of divisors.
    pub fn tau(&self) -> u64 {
        self.primes.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    /// Euler totient.
    pub fn phi(&self) -> u64 {
        self.primes
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.primes.iter().all(|&(_, e)| e == 1)
    }

    pub fn prime_list(&self) -> Vec<u64> {
        self.primes.iter().map(|&(p, _)| p).collect()
    }
}

pub fn omega(n: u64) -> Result<u32, ArithError> {
    Ok(Factorization::factorize(n)?.omega())
}

pub fn tau(n: u64) -> Result<u64, ArithError> {
    Ok(Factorization::factorize(n)?.tau())
}

pub fn phi(n: u64) -> Result<u64, ArithError> {
    Ok(Factorization::factorize(n)?.phi())
}

pub fn is_squarefree(n: u64) -> Result<bool, ArithError> {
    Ok(Factorization::factorize(n)?.is_squarefree())
}

/// Outcome of one explicit-bound evaluation, oriented as `value <= bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitBoundReport {
    pub n: u64,
    pub value: f64,
    pub bound: f64,
    pub satisfied: bool,
    /// bound - value.
    pub margin: f64,
}

impl ExplicitBoundReport {
    fn new(n: u64, value: f64, bound: f64) -> Self {
        ExplicitBoundReport {
            n,
            value,
            bound,
            satisfied: value <= bound,
            margin: bound - value,
        }
    }

    /// True when the margin sits inside the floating-point noise band.
    pub fn is_marginal(&self) -> bool {
        self.margin.abs() <= crate::report::MARGINAL_BAND * self.bound.abs().max(1.0)
    }
}

fn loglog(n: u64) -> Result<(f64, f64), ArithError> {
    if n < 3 {
        return Err(ArithError::BoundDomain(n));
    }
    let ln = (n as f64).ln();
    Ok((ln, ln.ln()))
}

/// omega(n) <= log n/log log n + 1.45743 log n/(log log n)^2, n >= 3.
pub fn check_omega_bound(n: u64) -> Result<ExplicitBoundReport, ArithError> {
    let (ln, ll) = loglog(n)?;
    let w = Factorization::factorize(n)?.omega() as f64;
    Ok(ExplicitBoundReport::new(
        n,
        w,
        ln / ll + 1.45743 * ln / (ll * ll),
    ))
}

/// tau(n) <= exp(1.5379 log 2 log n / log log n), n >= 3.
pub fn check_tau_bound(n: u64) -> Result<ExplicitBoundReport, ArithError> {
    let (ln, ll) = loglog(n)?;
    let t = Factorization::factorize(n)?.tau() as f64;
    Ok(ExplicitBoundReport::new(
        n,
        t,
        (1.5379 * std::f64::consts::LN_2 * ln / ll).exp(),
    ))
}

/// phi(n) > n e^{-gamma} / (log log n + 2.50637/log log n), n >= 3.
///
/// Oriented as `value <= bound` with value = the formula and bound = phi(n);
/// the two sides never tie (transcendental vs integer).
pub fn check_phi_bound(n: u64) -> Result<ExplicitBoundReport, ArithError> {
    let (_, ll) = loglog(n)?;
    let p = Factorization::factorize(n)?.phi() as f64;
    let formula = (n as f64) * (-EULER_GAMMA).exp() / (ll + 2.50637 / ll);
    Ok(ExplicitBoundReport::new(n, formula, p))
}

/// The two uniform trigonometric sum bounds: for x >= 1 and any real alpha,
///   sum_{n<=x} (1-cos(alpha n))/n <= log x + gamma + log 2 + 3/x,
///   sum_{n<=x} |sin(alpha n)|/n  <= (2/pi)(log x + gamma + log 2 + 3/x).
/// Sums use compensated summation; reports carry n = floor(x).
pub fn trig_sum_check(
    alpha: f64,
    x: f64,
) -> Result<(ExplicitBoundReport, ExplicitBoundReport), ArithError> {
    if !(x >= 1.0) {
        return Err(ArithError::TrigDomain(x));
    }
    let top = x.floor() as u64;
    let mut cos_sum = Kahan::new();
    let mut sin_sum = Kahan::new();
    for n in 1..=top {
        let (s, c) = (alpha * n as f64).sin_cos();
        cos_sum.add((1.0 - c) / n as f64);
        sin_sum.add(s.abs() / n as f64);
    }
    let base = x.ln() + EULER_GAMMA + std::f64::consts::LN_2 + 3.0 / x;
    let first = ExplicitBoundReport::new(top, cos_sum.value(), base);
    let second = ExplicitBoundReport::new(
        top,
        sin_sum.value(),
        2.0 / std::f64::consts::PI * base,
    );
    Ok((first, second))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_examples() {
        assert_eq!(Factorization::factorize(1).unwrap().primes, vec![]);
        assert_eq!(
            Factorization::factorize(30).unwrap().primes,
            vec![(2, 1), (3, 1), (5, 1)]
        );
        assert_eq!(Factorization::factorize(1024).unwrap().primes, vec![(2, 10)]);
        assert_eq!(Factorization::factorize(0), Err(ArithError::Zero));
    }

    #[test]
    fn factorization_reconstructs_n() {
        for n in 1..5000u64 {
            let f = Factorization::factorize(n).unwrap();
            let prod: u64 = f.primes.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, n);
            assert!(f.primes.windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn arithmetic_function_values() {
        assert_eq!(omega(30).unwrap(), 3);
        assert_eq!(tau(12).unwrap(), 6);
        assert_eq!(phi(10).unwrap(), 4);
        assert!(is_squarefree(30).unwrap());
        assert!(!is_squarefree(12).unwrap());
        assert!(is_squarefree(1).unwrap());
    }

    #[test]
    fn tau_matches_divisor_enumeration() {
        for n in 1..=10_000u64 {
            let direct = (1..=n).filter(|d| n % d == 0).count() as u64;
            assert_eq!(tau(n).unwrap(), direct, "n={n}");
        }
    }

    #[test]
    fn phi_is_multiplicative_on_coprime_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 1000 {
            let m = rng.gen_range(2u64..5000);
            let n = rng.gen_range(2u64..5000);
            if num_integer::gcd(m, n) != 1 {
                continue;
            }
            assert_eq!(phi(m * n).unwrap(), phi(m).unwrap() * phi(n).unwrap());
            checked += 1;
        }
    }

    #[test]
    fn omega_bound_examples() {
        // direct formula evaluation is the oracle here
        let r = check_omega_bound(3).unwrap();
        assert!(r.satisfied && r.value == 1.0);
        let ln = 3f64.ln();
        let ll = ln.ln();
        assert!((r.bound - (ln / ll + 1.45743 * ln / (ll * ll))).abs() < 1e-12);

        let r = check_omega_bound(30030).unwrap(); // primorial, extremal case
        assert!(r.satisfied && r.value == 6.0);

        let r = check_omega_bound(1024).unwrap();
        assert!(r.satisfied && r.value == 1.0);

        assert!(check_omega_bound(2).is_err());
    }

    #[test]
    fn tau_bound_examples() {
        let r = check_tau_bound(12).unwrap();
        assert!(r.satisfied && r.value == 6.0);
        let expect = (1.5379 * 2f64.ln() * 12f64.ln() / 12f64.ln().ln()).exp();
        assert!((r.bound - expect).abs() < 1e-9 * expect);

        // highly composite stress case, tau by brute force
        let n = 720_720u64;
        let direct = (1..=n).filter(|d| n % d == 0).count() as u64;
        let r = check_tau_bound(n).unwrap();
        assert_eq!(r.value, direct as f64);
        assert!(r.satisfied);

        let r = check_tau_bound(3).unwrap();
        assert!(r.satisfied && r.value == 2.0);
    }

    #[test]
    fn phi_bound_examples() {
        for n in [30030u64, 97, 3] {
            let r = check_phi_bound(n).unwrap();
            assert!(r.satisfied, "n={n}");
        }
        assert_eq!(check_phi_bound(97).unwrap().bound, 96.0);
    }

    #[test]
    fn small_range_bound_sweep() {
        for n in 3..=20_000u64 {
            assert!(check_omega_bound(n).unwrap().satisfied, "omega n={n}");
            assert!(check_tau_bound(n).unwrap().satisfied, "tau n={n}");
            assert!(check_phi_bound(n).unwrap().satisfied, "phi n={n}");
        }
    }

    #[test]
    fn trig_sums_examples() {
        let (a, b) = trig_sum_check(0.0, 100.0).unwrap();
        assert_eq!(a.value, 0.0);
        assert_eq!(b.value, 0.0);
        assert!(a.satisfied && b.satisfied);
        assert!((a.bound - (100f64.ln() + EULER_GAMMA + 2f64.ln() + 0.03)).abs() < 1e-12);

        // single term: (1 - cos pi)/1 = 2
        let (a, _) = trig_sum_check(std::f64::consts::PI, 1.0).unwrap();
        assert!((a.value - 2.0).abs() < 1e-12);
        assert!((a.bound - (EULER_GAMMA + 2f64.ln() + 3.0)).abs() < 1e-12);
        assert!(a.satisfied);

        let (a, b) = trig_sum_check(1.0, 1000.0).unwrap();
        assert!(a.satisfied && b.satisfied);

        assert!(trig_sum_check(1.0, 0.5).is_err());
    }
}
