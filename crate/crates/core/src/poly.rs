//! Polynomials in `q` with nonnegative integer coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{self, Count};

/// Coefficient vector, index = exponent of `q`. Trailing zeros are trimmed,
/// except that the zero polynomial keeps a single `0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QPolynomial<T> {
    coefficients: Vec<T>,
}

impl<T: Count> QPolynomial<T> {
    pub fn new(mut coefficients: Vec<T>) -> Self {
        while coefficients.len() > 1 && coefficients.last().is_some_and(|c| c.is_zero()) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            coefficients.push(T::zero());
        }
        Self { coefficients }
    }

    pub fn one() -> Self {
        Self {
            coefficients: vec![T::one()],
        }
    }

    /// `1 + q + … + q^degree`.
    pub fn geometric(degree: usize) -> Self {
        Self {
            coefficients: vec![T::one(); degree + 1],
        }
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Value at `q = 1`.
    pub fn coefficient_sum(&self) -> Result<T> {
        self.coefficients
            .iter()
            .try_fold(T::zero(), |acc, c| scalar::add(&acc, c))
    }

    pub fn is_palindromic(&self) -> bool {
        self.coefficients.iter().eq(self.coefficients.iter().rev())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let mut out = vec![T::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (a, x) in self.coefficients.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in other.coefficients.iter().enumerate() {
                out[a + b] = scalar::add(&out[a + b], &scalar::mul(x, y)?)?;
            }
        }
        Ok(Self::new(out))
    }

    /// Remainder modulo `1 - q^k`: entry `r` sums the coefficients of the
    /// exponents congruent to `r` mod `k`.
    pub fn reduce_mod_qk(&self, k: usize) -> Result<Vec<T>> {
        if k == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let mut folded = vec![T::zero(); k];
        for (e, c) in self.coefficients.iter().enumerate() {
            folded[e % k] = scalar::add(&folded[e % k], c)?;
        }
        Ok(folded)
    }
}

/// `∏_{i=1}^{n-1} (1 + q + … + q^i)`, the generating function of `maj` over
/// `S_n`.
pub fn q_factorial<T: Count>(n: usize) -> Result<QPolynomial<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("degree must be positive".into()));
    }
    (1..n).try_fold(QPolynomial::one(), |acc, i| {
        acc.checked_mul(&QPolynomial::geometric(i))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::factorial;
    use num_bigint::BigUint;

    #[test]
    fn small_q_factorials() {
        assert_eq!(q_factorial::<u64>(1).unwrap().coefficients(), &[1]);
        assert_eq!(q_factorial::<u64>(2).unwrap().coefficients(), &[1, 1]);
        assert_eq!(q_factorial::<u64>(3).unwrap().coefficients(), &[1, 2, 2, 1]);
        let four = q_factorial::<u64>(4).unwrap();
        assert_eq!(four.coefficients(), &[1, 3, 5, 6, 5, 3, 1]);
        assert_eq!(four.degree(), 6);
        assert_eq!(four.coefficient_sum().unwrap(), 24);
        assert!(four.is_palindromic());
        assert!(q_factorial::<u64>(0).is_err());
    }

    #[test]
    fn folding() {
        let four = q_factorial::<u64>(4).unwrap();
        assert_eq!(four.reduce_mod_qk(3).unwrap(), vec![8, 8, 8]);
        assert_eq!(four.reduce_mod_qk(1).unwrap(), vec![24]);
        assert_eq!(
            q_factorial::<u64>(5).unwrap().reduce_mod_qk(4).unwrap(),
            vec![30; 4]
        );
        assert!(four.reduce_mod_qk(0).is_err());
        // k > n no longer folds evenly.
        assert_ne!(four.reduce_mod_qk(5).unwrap(), vec![24 / 5; 5]);
    }

    #[test]
    fn scalar_width() {
        // 21! overflows u64 but not u128 or BigUint.
        let narrow = q_factorial::<u64>(21).unwrap();
        assert_eq!(narrow.coefficient_sum(), Err(Error::Overflow("sum")));
        assert!(q_factorial::<u64>(25).is_err());
        let wide = q_factorial::<u128>(21).unwrap();
        assert_eq!(
            wide.coefficient_sum().unwrap(),
            factorial::<u128>(21).unwrap()
        );
        let big = q_factorial::<BigUint>(40).unwrap();
        assert_eq!(big.degree(), 40 * 39 / 2);
        assert_eq!(
            big.coefficient_sum().unwrap(),
            factorial::<BigUint>(40).unwrap()
        );
        assert!(big.is_palindromic());
        let folded = big.reduce_mod_qk(40).unwrap();
        let share = factorial::<BigUint>(39).unwrap();
        assert!(folded.iter().all(|c| *c == share));
    }
}
