//! Dirichlet character group mod squarefree q, built from per-prime
//! components through a fixed least primitive root at every prime.
//! Also: Kronecker symbols, Gauss sums and the Fourier expansion check.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::arith::Factorization;
use crate::report::VerificationRecord;
use crate::util::{unit_phase, KahanComplex};

const NONUNIT: u32 = u32::MAX;

/// Character construction is restricted to squarefree moduli up to this size.
pub const MAX_MODULUS: u64 = 1_000_000;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CharError {
    #[error("modulus {0} is not squarefree")]
    NotSquarefree(u64),
    #[error("modulus {0} exceeds the supported limit {MAX_MODULUS}")]
    ModulusTooLarge(u64),
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("character {0} is not primitive")]
    NotPrimitive(String),
    #[error("operation rejects the trivial character")]
    TrivialCharacter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// The full character group mod squarefree q; characters are produced one at
/// a time so sweeps over large moduli never hold the whole group in memory.
pub struct CharacterGroup {
    q: u64,
    primes: Vec<u64>,
    generators: Vec<u64>,
    /// lcm of the component group orders p-1.
    m: u64,
    strides: Vec<u64>,
    /// index[i][x] = discrete log of x base generators[i] mod primes[i].
    index: Vec<Vec<u32>>,
    /// roots[j] = e(j/m).
    roots: Vec<Complex64>,
}

impl CharacterGroup {
    pub fn new(q: u64) -> Result<Self, CharError> {
        if q == 0 {
            return Err(CharError::ZeroModulus);
        }
        if q > MAX_MODULUS {
            return Err(CharError::ModulusTooLarge(q));
        }
        let fact = Factorization::factorize(q).expect("q > 0");
        if !fact.is_squarefree() {
            return Err(CharError::NotSquarefree(q));
        }
        let primes = fact.prime_list();
        let mut m = 1u64;
        for &p in &primes {
            m = num_integer::lcm(m, p - 1);
        }
        let generators: Vec<u64> = primes.iter().map(|&p| least_primitive_root(p)).collect();
        let index: Vec<Vec<u32>> = primes
            .iter()
            .zip(&generators)
            .map(|(&p, &g)| discrete_log_table(p, g))
            .collect();
        let strides: Vec<u64> = primes.iter().map(|&p| m / (p - 1)).collect();
        let roots: Vec<Complex64> = (0..m).map(|j| unit_phase(j, m)).collect();
        Ok(CharacterGroup {
            q,
            primes,
            generators,
            m,
            strides,
            index,
            roots,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    /// Group order phi(q).
    pub fn order(&self) -> u64 {
        self.primes.iter().map(|&p| p - 1).product()
    }

    /// Number of primitive characters: prod (p-2); zero when 2 | q.
    pub fn primitive_count(&self) -> u64 {
        self.primes.iter().map(|&p| p - 2).product()
    }

    /// Build the character with the given component exponents (one per prime,
    /// ascending; exponent at p lives in [0, p-1)).
    pub fn character(&self, exponents: &[u64]) -> DirichletCharacter {
        assert_eq!(exponents.len(), self.primes.len());
        for (i, &a) in exponents.iter().enumerate() {
            assert!(a < (self.primes[i] - 1).max(1));
        }
        let values = self.build_values(exponents);
        DirichletCharacter {
            q: self.q,
            components: self.primes.iter().copied().zip(exponents.iter().copied()).collect(),
            values,
        }
    }

    fn build_values(&self, exponents: &[u64]) -> Vec<Complex64> {
        let k = self.primes.len();
        let coeff: Vec<u64> = (0..k).map(|i| exponents[i] * self.strides[i]).collect();
        let mut residues = vec![0u64; k];
        let mut values = Vec::with_capacity(self.q as usize);
        for _n in 0..self.q {
            let mut j = 0u64;
            let mut zero = false;
            for i in 0..k {
                let idx = self.index[i][residues[i] as usize];
                if idx == NONUNIT {
                    zero = true;
                    break;
                }
                j += coeff[i] * idx as u64;
            }
            values.push(if zero {
                Complex64::new(0.0, 0.0)
            } else {
                self.roots[(j % self.m) as usize]
            });
            for i in 0..k {
                residues[i] += 1;
                if residues[i] == self.primes[i] {
                    residues[i] = 0;
                }
            }
        }
        if self.q == 1 {
            values[0] = Complex64::new(1.0, 0.0);
        }
        values
    }

    /// All phi(q) characters in a fixed exponent-odometer order
    /// (ascending primes, last component fastest).
    pub fn iter(&self) -> impl Iterator<Item = DirichletCharacter> + '_ {
        ExponentOdometer::new(self.primes.clone()).map(move |e| self.character(&e))
    }

    /// Only the primitive characters (every component exponent nonzero).
    pub fn iter_primitive(&self) -> impl Iterator<Item = DirichletCharacter> + '_ {
        ExponentOdometer::new(self.primes.clone())
            .filter(|e| e.iter().all(|&a| a != 0))
            .map(move |e| self.character(&e))
    }
}

struct ExponentOdometer {
    primes: Vec<u64>,
    state: Vec<u64>,
    done: bool,
}

impl ExponentOdometer {
    fn new(primes: Vec<u64>) -> Self {
        let state = vec![0; primes.len()];
        ExponentOdometer {
            primes,
            state,
            done: false,
        }
    }
}

impl Iterator for ExponentOdometer {
    type Item = Vec<u64>;
    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let out = self.state.clone();
        let mut i = self.primes.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.state[i] += 1;
            if self.state[i] < self.primes[i] - 1 || (self.primes[i] == 2 && self.state[i] < 1) {
                break;
            }
            self.state[i] = 0;
        }
        Some(out)
    }
}

/// A Dirichlet character mod squarefree q with its value table precomputed;
/// immutable and freely shareable across sweep workers.
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    q: u64,
    components: Vec<(u64, u64)>,
    values: Vec<Complex64>,
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn components(&self) -> &[(u64, u64)] {
        &self.components
    }

    /// chi(n) for any integer n.
    #[inline]
    pub fn eval(&self, n: i64) -> Complex64 {
        self.values[n.rem_euclid(self.q as i64) as usize]
    }

    /// chi(n) for 0 <= n < q (table lookup).
    #[inline]
    pub fn value_at(&self, n_mod_q: usize) -> Complex64 {
        self.values[n_mod_q]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// For squarefree q: primitive iff every prime component is nontrivial
    /// (a modulus divisible by 2 therefore has no primitive characters).
    pub fn is_primitive(&self) -> bool {
        self.components.iter().all(|&(_, a)| a != 0)
    }

    pub fn is_trivial(&self) -> bool {
        self.components.iter().all(|&(_, a)| a == 0)
    }

    /// Multiplicative order of the character in the dual group: the lcm of
    /// the component orders (p-1)/gcd(a_p, p-1).
    pub fn order(&self) -> u64 {
        self.components.iter().fold(1u64, |acc, &(p, a)| {
            let ord = if a == 0 {
                1
            } else {
                (p - 1) / num_integer::gcd(p - 1, a)
            };
            num_integer::lcm(acc, ord)
        })
    }

    pub fn is_real(&self) -> bool {
        self.order() <= 2
    }

    /// Sign of chi(-1): even means chi(-1) = 1. Computed in integer
    /// arithmetic from the component exponents.
    pub fn parity(&self) -> Parity {
        let s: u64 = self.components.iter().map(|&(_, a)| a).sum();
        if s % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn conjugate(&self) -> DirichletCharacter {
        DirichletCharacter {
            q: self.q,
            components: self
                .components
                .iter()
                .map(|&(p, a)| (p, if a == 0 { 0 } else { p - 1 - a }))
                .collect(),
            values: self.values.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Stable report label: `q=<q>;a=<a_p1>,...,<a_pk>` over ascending primes.
    pub fn label(&self) -> String {
        let exps: Vec<String> = self.components.iter().map(|&(_, a)| a.to_string()).collect();
        format!("q={};a={}", self.q, exps.join(","))
    }
}

/// Exactly the phi(q) characters mod squarefree q, q <= 10^6.
pub fn enumerate_characters(q: u64) -> Result<Vec<DirichletCharacter>, CharError> {
    let group = CharacterGroup::new(q)?;
    Ok(group.iter().collect())
}

fn modpow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Least primitive root of an odd prime p (deterministic so character labels
/// are reproducible); returns 1 for p = 2.
pub fn least_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let fact = Factorization::factorize(p - 1).expect("p > 2");
    'g: for g in 2..p {
        for &(f, _) in &fact.primes {
            if modpow(g, (p - 1) / f, p) == 1 {
                continue 'g;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root")
}

fn discrete_log_table(p: u64, g: u64) -> Vec<u32> {
    let mut table = vec![NONUNIT; p as usize];
    if p == 2 {
        table[1] = 0;
        return table;
    }
    let mut x = 1u64;
    for k in 0..(p - 1) {
        table[x as usize] = k as u32;
        x = ((x as u128 * g as u128) % p as u128) as u64;
    }
    table
}

/// Kronecker symbol (d|n) with the usual conventions at 2, -1 and 0.
pub fn kronecker(d: i64, n: i64) -> i32 {
    if n == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let mut result = 1i32;
    let mut n = n;
    if n < 0 {
        n = -n;
        if d < 0 {
            result = -result;
        }
    }
    while n % 2 == 0 {
        n /= 2;
        if d % 2 == 0 {
            return 0;
        }
        let d8 = d.rem_euclid(8);
        if d8 == 3 || d8 == 5 {
            result = -result;
        }
    }
    if n == 1 {
        return result;
    }
    // Jacobi symbol (d mod n | n) for odd n > 1 by reciprocity.
    let mut a = d.rem_euclid(n) as u64;
    let mut m = n as u64;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if m % 8 == 3 || m % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            result = -result;
        }
        a %= m;
    }
    if m == 1 {
        result
    } else {
        0
    }
}

/// Table of q-th roots of unity e_q(t) = e(t/q), shared by the sum kernels.
pub struct QRoots {
    q: u64,
    table: Vec<Complex64>,
}

impl QRoots {
    pub fn new(q: u64) -> Self {
        QRoots {
            q,
            table: (0..q).map(|t| unit_phase(t, q)).collect(),
        }
    }

    #[inline]
    pub fn eq(&self, t: u64) -> Complex64 {
        self.table[(t % self.q) as usize]
    }

    #[inline]
    pub fn eq_i(&self, t: i64) -> Complex64 {
        self.table[t.rem_euclid(self.q as i64) as usize]
    }
}

/// A complete Gauss sum tau(chi) with the modulus-sqrt reference value.
#[derive(Debug, Clone)]
pub struct GaussSumValue {
    pub character: String,
    pub value: Complex64,
    pub modulus_sqrt: f64,
}

/// tau(chi) = sum_{a=1..q} chi(a) e(a/q) by direct summation. Non-primitive
/// characters are allowed; |tau| = sqrt(q) is then not guaranteed.
pub fn gauss_sum(chi: &DirichletCharacter) -> GaussSumValue {
    let q = chi.modulus();
    let roots = QRoots::new(q);
    gauss_sum_with(chi, &roots)
}

pub fn gauss_sum_with(chi: &DirichletCharacter, roots: &QRoots) -> GaussSumValue {
    let q = chi.modulus();
    let mut acc = KahanComplex::new();
    for a in 1..=q {
        acc.add(chi.value_at((a % q) as usize) * roots.eq(a));
    }
    GaussSumValue {
        character: chi.label(),
        value: acc.value(),
        modulus_sqrt: (q as f64).sqrt(),
    }
}

/// Checks chi(n) = (1/tau(conj chi)) sum_a conj(chi)(a) e(an/q) by direct
/// summation of the right-hand side; primitive characters only.
pub fn verify_fourier_expansion(
    chi: &DirichletCharacter,
    n: i64,
) -> Result<VerificationRecord, CharError> {
    if !chi.is_primitive() {
        return Err(CharError::NotPrimitive(chi.label()));
    }
    let q = chi.modulus();
    let roots = QRoots::new(q);
    let bar = chi.conjugate();
    let tau_bar = gauss_sum_with(&bar, &roots).value;
    let n_red = n.rem_euclid(q as i64) as u64;
    let mut acc = KahanComplex::new();
    for a in 1..=q {
        acc.add(bar.value_at((a % q) as usize) * roots.eq(a * n_red % q.max(1)));
    }
    let rhs = acc.value() / tau_bar;
    let deviation = (rhs - chi.eval(n)).norm();
    let mut params = BTreeMap::new();
    params.insert("char".into(), chi.label());
    params.insert("n".into(), n.to_string());
    params.insert("q".into(), q.to_string());
    Ok(VerificationRecord::from_bounds(
        "fourier-expansion",
        params,
        deviation,
        1e-9,
    ))
}
