//! Counting permutations by residues of `maj` and of inverse `maj`.
//!
//! Brute force walks `S_n` in lexicographic order, split into `n` blocks by
//! first letter. Blocks are tallied independently (optionally on a rayon
//! pool) and merged by addition in block order, so the result does not
//! depend on the thread count. Everything is exact integer arithmetic.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::CountMatrix;
use crate::perm::{all_permutations, next_lex, word_inverse_maj, word_maj};
use crate::poly::QPolynomial;
use crate::scalar::{self, Count};

/// Largest degree any enumeration will accept (`12! = 479001600`).
pub const CEILING: usize = 12;

/// Which statistic a single-residue count constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Maj,
    InverseMaj,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Closed,
    Recurrence,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Brute => "brute",
            Method::Closed => "closed",
            Method::Recurrence => "recurrence",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Method::Brute),
            "closed" => Ok(Method::Closed),
            "recurrence" => Ok(Method::Recurrence),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

/// The parameters `(n, k, ℓ, i, j)` of a joint residue count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CongruenceQuery {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub i: usize,
    pub j: usize,
}

impl CongruenceQuery {
    pub fn new(n: usize, k: usize, l: usize, i: usize, j: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("degree must be positive".into()));
        }
        if k == 0 || l == 0 {
            return Err(Error::InvalidArgument("moduli must be positive".into()));
        }
        if i >= k {
            return Err(Error::InvalidArgument(format!(
                "i = {i} must be below k = {k}"
            )));
        }
        if j >= l {
            return Err(Error::InvalidArgument(format!(
                "j = {j} must be below l = {l}"
            )));
        }
        Ok(Self { n, k, l, i, j })
    }

    pub fn matches(&self, maj: usize, inverse_maj: usize) -> bool {
        maj % self.k == self.i && inverse_maj % self.l == self.j
    }
}

pub(crate) fn check_ceiling(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("degree must be positive".into()));
    }
    if n > CEILING {
        return Err(Error::TooLarge {
            n,
            ceiling: CEILING,
        });
    }
    Ok(())
}

fn check_moduli(k: usize, l: usize) -> Result<()> {
    if k == 0 || l == 0 {
        return Err(Error::InvalidArgument("moduli must be positive".into()));
    }
    Ok(())
}

/// Runs `visit(acc, word, maj, inverse_maj)` over all of `S_n`, one
/// accumulator per first-letter block, returned in block order.
pub fn fold_blocks<A, I, V>(n: usize, threads: usize, init: I, visit: V) -> Result<Vec<A>>
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, &[usize], usize, usize) + Sync,
{
    check_ceiling(n)?;
    let run_block = |first: usize| {
        let mut acc = init();
        let mut word: Vec<usize> = std::iter::once(first)
            .chain((1..=n).filter(|&v| v != first))
            .collect();
        let mut scratch = vec![0; n + 1];
        loop {
            let maj = word_maj(&word);
            let imaj = word_inverse_maj(&word, &mut scratch);
            visit(&mut acc, &word, maj, imaj);
            if !next_lex(&mut word[1..]) {
                break;
            }
        }
        acc
    };
    if threads <= 1 {
        return Ok((1..=n).map(run_block).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    Ok(pool.install(|| (1..=n).into_par_iter().map(run_block).collect()))
}

/// `m_n(i\k; j\ℓ)` by direct enumeration of `S_n` through the
/// [`Permutation`](crate::Permutation) API.
pub fn count_bruteforce(query: &CongruenceQuery) -> Result<u64> {
    check_ceiling(query.n)?;
    Ok(all_permutations(query.n)
        .filter(|p| query.matches(p.maj(), p.inverse().maj()))
        .count() as u64)
}

/// Per-block tallies of the full `k × ℓ` table; their sum is the census.
pub fn brute_matrix_blocks(n: usize, k: usize, l: usize) -> Result<Vec<CountMatrix<u64>>> {
    check_moduli(k, l)?;
    fold_blocks(
        n,
        1,
        || CountMatrix::zeros(n, k, l),
        |m, _, maj, imaj| m.entries[maj % k][imaj % l] += 1,
    )
}

/// The full `k × ℓ` table by enumeration.
pub fn brute_matrix(n: usize, k: usize, l: usize, threads: usize) -> Result<CountMatrix<u64>> {
    check_moduli(k, l)?;
    let blocks = fold_blocks(
        n,
        threads,
        || CountMatrix::zeros(n, k, l),
        |m, _, maj, imaj| m.entries[maj % k][imaj % l] += 1,
    )?;
    blocks
        .iter()
        .try_fold(CountMatrix::zeros(n, k, l), |acc, b| acc.checked_add(b))
}

/// `n! / (k·ℓ)`, valid when `k ≠ 1` divides `n` and `ℓ ≠ 1` divides `n - 1`.
/// Outside those hypotheses this refuses rather than guessing.
pub fn count_closed_form<T: Count>(query: &CongruenceQuery) -> Result<T> {
    let CongruenceQuery { n, k, l, .. } = *query;
    if k == 1 {
        return Err(Error::NotApplicable(
            "k = 1 is excluded (k must be a divisor of n other than 1)".into(),
        ));
    }
    if n % k != 0 {
        return Err(Error::NotApplicable(format!(
            "k = {k} does not divide n = {n}"
        )));
    }
    if l == 1 {
        return Err(Error::NotApplicable(
            "l = 1 is excluded (l must be a divisor of n-1 other than 1)".into(),
        ));
    }
    if (n - 1) % l != 0 {
        return Err(Error::NotApplicable(format!(
            "l = {l} does not divide n-1 = {}",
            n - 1
        )));
    }
    let denom = scalar::mul(&scalar::lift::<T>(k)?, &scalar::lift(l)?)?;
    scalar::div_exact(&scalar::factorial(n)?, &denom)
}

/// `n! / k`: how many `σ ∈ S_n` have `maj(σ) ≡ j (mod k)`, and equally
/// how many have `maj(σ⁻¹) ≡ j (mod k)`, for `1 ≤ k ≤ n`.
pub fn count_maj_residue<T: Count>(n: usize, k: usize, j: usize) -> Result<T> {
    if k == 0 || k > n {
        return Err(Error::NotApplicable(format!(
            "modulus k = {k} must lie in 1..={n}"
        )));
    }
    if j >= k {
        return Err(Error::InvalidArgument(format!(
            "j = {j} must be below k = {k}"
        )));
    }
    scalar::div_exact(&scalar::factorial(n)?, &scalar::lift(k)?)
}

/// Enumeration counterpart of [`count_maj_residue`], for either side.
pub fn count_maj_residue_bruteforce(n: usize, k: usize, j: usize, side: Side) -> Result<u64> {
    check_moduli(k, 1)?;
    let tallies = fold_blocks(
        n,
        1,
        || 0u64,
        |c, _, maj, imaj| {
            let stat = match side {
                Side::Maj => maj,
                Side::InverseMaj => imaj,
            };
            if stat % k == j {
                *c += 1;
            }
        },
    )?;
    Ok(tallies.into_iter().sum())
}

/// `m_n(i\k; j\ℓ) = (n-2)!·(n-1)²/(k·ℓ) + m_{n-1}(i\k; j\ℓ)` for
/// `k, ℓ ≠ 1` both dividing `n - 1`. `previous` is the degree `n - 1` count.
pub fn count_recurrence<T: Count>(query: &CongruenceQuery, previous: T) -> Result<T> {
    let CongruenceQuery { n, k, l, .. } = *query;
    if n < 3 {
        return Err(Error::NotApplicable(format!(
            "n = {n} leaves no divisor of n-1 above 1"
        )));
    }
    if k == 1 || (n - 1) % k != 0 {
        return Err(Error::NotApplicable(format!(
            "k = {k} must be a divisor of n-1 = {} other than 1",
            n - 1
        )));
    }
    if l == 1 || (n - 1) % l != 0 {
        return Err(Error::NotApplicable(format!(
            "l = {l} must be a divisor of n-1 = {} other than 1",
            n - 1
        )));
    }
    let base: T = scalar::factorial(n - 2)?;
    let fresh = scalar::mul(
        &base,
        &scalar::mul(
            &scalar::lift::<T>((n - 1) / k)?,
            &scalar::lift((n - 1) / l)?,
        )?,
    )?;
    scalar::add(&fresh, &previous)
}

/// Every entry by the closed form.
pub fn closed_matrix<T: Count>(n: usize, k: usize, l: usize) -> Result<CountMatrix<T>> {
    let value = count_closed_form::<T>(&CongruenceQuery::new(n, k, l, 0, 0)?)?;
    Ok(CountMatrix {
        n,
        k,
        l,
        entries: vec![vec![value; l]; k],
    })
}

/// Every entry by the recurrence, seeded with the brute-force table at
/// degree `n - 1`.
pub fn recurrence_matrix(n: usize, k: usize, l: usize, threads: usize) -> Result<CountMatrix<u64>> {
    // Validate hypotheses before paying for the enumeration.
    count_recurrence::<u64>(&CongruenceQuery::new(n, k, l, 0, 0)?, 0)?;
    let previous = brute_matrix(n - 1, k, l, threads)?;
    let mut out = CountMatrix::zeros(n, k, l);
    for i in 0..k {
        for j in 0..l {
            let q = CongruenceQuery::new(n, k, l, i, j)?;
            out.entries[i][j] = count_recurrence(&q, previous.entries[i][j])?;
        }
    }
    Ok(out)
}

pub fn count_matrix(
    n: usize,
    k: usize,
    l: usize,
    method: Method,
    threads: usize,
) -> Result<CountMatrix<u64>> {
    match method {
        Method::Brute => brute_matrix(n, k, l, threads),
        Method::Closed => closed_matrix(n, k, l),
        Method::Recurrence => recurrence_matrix(n, k, l, threads),
    }
}

type MatrixKey = (usize, usize, usize, Method);

/// Memoised [`count_matrix`]. Results are pure functions of the key, so
/// entries never need invalidating.
#[derive(Debug, Default)]
pub struct MatrixCache {
    entries: Mutex<HashMap<MatrixKey, CountMatrix<u64>>>,
}

impl MatrixCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_compute(
        &self,
        n: usize,
        k: usize,
        l: usize,
        method: Method,
        threads: usize,
    ) -> Result<CountMatrix<u64>> {
        let key = (n, k, l, method);
        if let Some(hit) = self.entries.lock().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let computed = count_matrix(n, k, l, method, threads)?;
        self.entries
            .lock()
            .expect("cache lock")
            .insert(key, computed.clone());
        Ok(computed)
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `Σ_{σ ∈ S_n} q^{stat(σ)}` by enumeration.
pub fn maj_distribution(n: usize, side: Side, threads: usize) -> Result<QPolynomial<u64>> {
    check_ceiling(n)?;
    let top = n * (n - 1) / 2;
    let blocks = fold_blocks(
        n,
        threads,
        || vec![0u64; top + 1],
        |c, _, maj, imaj| {
            let stat = match side {
                Side::Maj => maj,
                Side::InverseMaj => imaj,
            };
            c[stat] += 1;
        },
    )?;
    let mut coefficients = vec![0u64; top + 1];
    for block in blocks {
        for (acc, x) in coefficients.iter_mut().zip(block) {
            *acc += x;
        }
    }
    Ok(QPolynomial::new(coefficients))
}

/// Checks `m_n(i\k; j\ℓ) = m_n(j\ℓ; i\k)` for all `i, j` by tallying
/// `M_n(ℓ, k)` over the images `τ = σ⁻¹` and comparing with the transpose
/// of `M_n(k, ℓ)`.
pub fn symmetry_check(n: usize, k: usize, l: usize, threads: usize) -> Result<bool> {
    check_moduli(k, l)?;
    let direct = brute_matrix(n, k, l, threads)?;
    let blocks = fold_blocks(
        n,
        threads,
        || {
            (
                CountMatrix::<u64>::zeros(n, l, k),
                vec![0usize; n],
                vec![0usize; n + 1],
            )
        },
        |(m, inv, scratch), word, _, _| {
            for (p, &v) in word.iter().enumerate() {
                inv[v - 1] = p + 1;
            }
            let maj_tau = word_maj(inv);
            let maj_tau_inv = word_inverse_maj(inv, scratch);
            m.entries[maj_tau % l][maj_tau_inv % k] += 1;
        },
    )?;
    let swapped = blocks
        .iter()
        .try_fold(CountMatrix::zeros(n, l, k), |acc, (b, _, _)| {
            acc.checked_add(b)
        })?;
    Ok(direct == swapped.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: usize, k: usize, l: usize, i: usize, j: usize) -> CongruenceQuery {
        CongruenceQuery::new(n, k, l, i, j).unwrap()
    }

    #[test]
    fn query_validation() {
        assert!(CongruenceQuery::new(4, 2, 2, 2, 0).is_err());
        assert!(CongruenceQuery::new(4, 2, 2, 0, 2).is_err());
        assert!(CongruenceQuery::new(4, 0, 2, 0, 0).is_err());
        assert!(CongruenceQuery::new(0, 1, 1, 0, 0).is_err());
    }

    #[test]
    fn published_small_values() {
        assert_eq!(count_bruteforce(&q(4, 2, 2, 0, 0)).unwrap(), 8);
        assert_eq!(count_bruteforce(&q(4, 3, 3, 0, 1)).unwrap(), 2);
        assert_eq!(count_bruteforce(&q(4, 3, 3, 1, 1)).unwrap(), 3);
    }

    #[test]
    fn closed_form_hypotheses() {
        assert_eq!(count_closed_form::<u64>(&q(6, 6, 5, 2, 3)).unwrap(), 24);
        assert_eq!(count_closed_form::<u64>(&q(4, 2, 3, 1, 2)).unwrap(), 4);
        let err = count_closed_form::<u64>(&q(4, 3, 3, 0, 0)).unwrap_err();
        assert_eq!(
            err,
            Error::NotApplicable("k = 3 does not divide n = 4".into())
        );
        assert!(count_closed_form::<u64>(&q(4, 1, 3, 0, 0)).is_err());
        assert!(count_closed_form::<u64>(&q(4, 2, 1, 0, 0)).is_err());
        assert!(matches!(
            count_closed_form::<u64>(&q(5, 5, 3, 0, 0)),
            Err(Error::NotApplicable(m)) if m.contains("does not divide n-1")
        ));
    }

    #[test]
    fn single_residue_counts() {
        assert_eq!(count_maj_residue::<u64>(4, 3, 0).unwrap(), 8);
        assert_eq!(count_maj_residue::<u64>(6, 1, 0).unwrap(), 720);
        assert_eq!(count_maj_residue::<u64>(5, 5, 2).unwrap(), 24);
        assert!(count_maj_residue::<u64>(4, 5, 0).is_err());
        assert_eq!(count_maj_residue_bruteforce(4, 3, 0, Side::Maj).unwrap(), 8);
        assert_eq!(
            count_maj_residue_bruteforce(4, 3, 0, Side::InverseMaj).unwrap(),
            8
        );
        assert_eq!(
            count_maj_residue_bruteforce(5, 5, 2, Side::Maj).unwrap(),
            24
        );
    }

    #[test]
    fn recurrence_values() {
        assert_eq!(count_recurrence::<u64>(&q(5, 2, 2, 0, 0), 8).unwrap(), 32);
        assert_eq!(count_bruteforce(&q(5, 2, 2, 0, 0)).unwrap(), 32);
        let prev = count_bruteforce(&q(4, 4, 4, 1, 3)).unwrap();
        assert_eq!(
            count_recurrence::<u64>(&q(5, 4, 4, 1, 3), prev).unwrap(),
            6 + prev
        );
        let prev = count_bruteforce(&q(4, 2, 4, 1, 3)).unwrap();
        let next = count_recurrence::<u64>(&q(5, 2, 4, 1, 3), prev).unwrap();
        assert_eq!(next, 12 + prev);
        assert_eq!(next, count_bruteforce(&q(5, 2, 4, 1, 3)).unwrap());
        assert!(count_recurrence::<u64>(&q(5, 3, 2, 0, 0), 0).is_err());
        assert!(count_recurrence::<u64>(&q(5, 2, 1, 0, 0), 0).is_err());
    }

    #[test]
    fn matrices() {
        let m = count_matrix(4, 2, 2, Method::Brute, 1).unwrap();
        assert_eq!(m.entries, vec![vec![8, 4], vec![4, 8]]);
        let m = count_matrix(4, 3, 3, Method::Brute, 1).unwrap();
        assert_eq!(m.entries, vec![vec![4, 2, 2], vec![2, 3, 3], vec![2, 3, 3]]);
        let m = count_matrix(6, 6, 5, Method::Closed, 1).unwrap();
        assert!(m.entries.iter().flatten().all(|&x| x == 24));
        let r = count_matrix(5, 2, 4, Method::Recurrence, 1).unwrap();
        assert_eq!(r, count_matrix(5, 2, 4, Method::Brute, 1).unwrap());
        assert!(count_matrix(13, 2, 2, Method::Brute, 1).is_err());
    }

    #[test]
    fn distributions() {
        assert_eq!(
            maj_distribution(1, Side::Maj, 1).unwrap().coefficients(),
            &[1]
        );
        assert_eq!(
            maj_distribution(2, Side::Maj, 1).unwrap().coefficients(),
            &[1, 1]
        );
        assert_eq!(
            maj_distribution(4, Side::Maj, 1).unwrap(),
            crate::poly::q_factorial(4).unwrap()
        );
        assert_eq!(
            maj_distribution(4, Side::InverseMaj, 2).unwrap(),
            crate::poly::q_factorial(4).unwrap()
        );
    }

    #[test]
    fn symmetry() {
        assert!(symmetry_check(4, 2, 2, 1).unwrap());
        assert!(symmetry_check(4, 3, 2, 1).unwrap());
        assert_eq!(
            brute_matrix(4, 3, 2, 1).unwrap(),
            brute_matrix(4, 2, 3, 1).unwrap().transpose()
        );
        assert!(brute_matrix(5, 4, 4, 1).unwrap().is_symmetric());
    }

    #[test]
    fn cache_reuses() {
        let cache = MatrixCache::new();
        assert!(cache.is_empty());
        let a = cache.get_or_compute(5, 2, 2, Method::Brute, 1).unwrap();
        let b = cache.get_or_compute(5, 2, 2, Method::Brute, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(cache.len(), 1);
        assert!(cache.get_or_compute(4, 3, 3, Method::Closed, 1).is_err());
        assert_eq!(cache.len(), 1);
    }

    #[test]
    fn method_parsing() {
        assert_eq!("closed".parse::<Method>().unwrap(), Method::Closed);
        assert!("fast".parse::<Method>().is_err());
        assert_eq!(Method::Recurrence.to_string(), "recurrence");
    }
}
