//! Exact counts for the coprimality sieve and the multiplicative congruence
//! count I_q(N, U).

use std::collections::BTreeMap;

use crate::arith::Factorization;
use crate::report::VerificationRecord;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CongruenceError {
    #[error("parameter out of domain: {0}")]
    Domain(String),
    #[error("instance too large: {0} (N+1)*U residue updates; cap is {MAX_WORK}")]
    TooLarge(u64),
}

/// Residue updates allowed per instance; keeps desk-scale instances bounded.
pub const MAX_WORK: u64 = 200_000_000;

/// #{1 <= u <= U : gcd(u, q) = 1} together with the sieve-lemma record
/// |count - phi(q)/q * U| <= 2^omega(q) (deviation computed exactly).
pub fn sieve_count(q: u64, u_max: u64) -> Result<(u64, VerificationRecord), CongruenceError> {
    if q == 0 {
        return Err(CongruenceError::Domain("q >= 1 required".into()));
    }
    let mut count = 0u64;
    for u in 1..=u_max {
        if num_integer::gcd(u, q) == 1 {
            count += 1;
        }
    }
    let f = Factorization::factorize(q).expect("q > 0");
    let phi = f.phi();
    // deviation = |count*q - phi*U| / q, exact in the integers
    let num = (count as i128 * q as i128 - phi as i128 * u_max as i128).unsigned_abs();
    let lhs = num as f64 / q as f64;
    let rhs = 2f64.powi(f.omega() as i32);
    let mut p = BTreeMap::new();
    p.insert("q".into(), q.to_string());
    p.insert("U".into(), u_max.to_string());
    p.insert("count".into(), count.to_string());
    Ok((count, VerificationRecord::from_bounds("lemma-2.4", p, lhs, rhs)))
}

/// One multiplicative congruence count instance: solutions of
/// n1 u1 = n2 u2 (mod q) with M <= n_i <= M+N (closed range, N+1 values),
/// 1 <= u_i <= U and gcd(u1 u2, q) = 1.
#[derive(Debug, Clone, Copy)]
pub struct CongruenceCountInstance {
    pub q: u64,
    pub m: i64,
    pub n: u64,
    pub u: u64,
}

impl CongruenceCountInstance {
    /// The stated hypothesis window 24 <= U <= N/12.
    pub fn hypothesis_holds(&self) -> bool {
        self.u >= 24 && 12 * self.u <= self.n
    }
}

/// Exact I_q(N, U) by bucketing the residues n*u mod q: the count equals
/// sum_lambda I(lambda)^2 where I(lambda) = #{(n,u) : n u = lambda (mod q)}.
/// O(N U) time, O(q) space.
pub fn count_iq(inst: &CongruenceCountInstance) -> Result<u64, CongruenceError> {
    let q = inst.q;
    if q == 0 || inst.n == 0 || inst.u == 0 {
        return Err(CongruenceError::Domain(
            "q >= 1, N >= 1, U >= 1 required".into(),
        ));
    }
    let work = (inst.n + 1).saturating_mul(inst.u);
    if work > MAX_WORK {
        return Err(CongruenceError::TooLarge(work));
    }
    let mut buckets = vec![0u64; q as usize];
    for u in 1..=inst.u {
        if num_integer::gcd(u, q) != 1 {
            continue;
        }
        // n*u mod q stepped by u to avoid a multiply per item
        let mut r = (inst.m as i128 * u as i128).rem_euclid(q as i128) as u64;
        let step = u % q;
        for _ in 0..=inst.n {
            buckets[r as usize] += 1;
            r += step;
            if r >= q {
                r -= q;
            }
        }
    }
    let total: u128 = buckets.iter().map(|&c| c as u128 * c as u128).sum();
    u64::try_from(total).map_err(|_| CongruenceError::TooLarge(u64::MAX))
}

/// I_q(N, U) <= 2UN(NU/q + log(1.85 U)) under 24 <= U <= N/12. The variable
/// range is the closed one (N+1 values of each n_i); the report notes the
/// convention.
pub fn check_iq_bound(inst: &CongruenceCountInstance) -> Result<VerificationRecord, CongruenceError> {
    let mut p = BTreeMap::new();
    p.insert("q".into(), inst.q.to_string());
    p.insert("M".into(), inst.m.to_string());
    p.insert("N".into(), inst.n.to_string());
    p.insert("U".into(), inst.u.to_string());
    p.insert("n_range".into(), "closed [M, M+N]".into());
    if !inst.hypothesis_holds() {
        return Ok(VerificationRecord::hypotheses_unmet(
            "lemma-2.5",
            p,
            "24 <= U <= N/12",
        ));
    }
    let count = count_iq(inst)?;
    let (nf, uf, qf) = (inst.n as f64, inst.u as f64, inst.q as f64);
    let rhs = 2.0 * uf * nf * (nf * uf / qf + (1.85 * uf).ln());
    Ok(VerificationRecord::from_bounds(
        "lemma-2.5",
        p,
        count as f64,
        rhs,
    ))
}
