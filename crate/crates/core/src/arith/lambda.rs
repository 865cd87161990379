use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{gen_binomial, MultiPoly, Rational, RationalFunction};
use crate::error::{Error, Result};

/// `scalar · ∏ (λ + c)^e` with rational shifts `c`.
///
/// Every graph contribution is of this form once the torus weights are
/// specialized, so products stay cheap and the expansion at λ = ∞ is
/// computed directly from generalized binomial series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaProduct {
    scalar: Rational,
    factors: BTreeMap<Rational, i32>,
}

impl LambdaProduct {
    pub fn constant(c: Rational) -> Self {
        LambdaProduct { scalar: c, factors: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// `(λ + c)^e`
    pub fn linear(c: Rational, e: i32) -> Self {
        let mut p = Self::one();
        p.mul_linear(c, e);
        p
    }

    pub fn scalar(&self) -> &Rational {
        &self.scalar
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Rational, i32)> {
        self.factors.iter().map(|(c, &e)| (c, e))
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    pub fn scale(&mut self, c: &Rational) {
        self.scalar *= c;
    }

    pub fn mul_linear(&mut self, c: Rational, e: i32) {
        if e == 0 {
            return;
        }
        let entry = self.factors.entry(c.clone()).or_insert(0);
        *entry += e;
        if *entry == 0 {
            self.factors.remove(&c);
        }
    }

    pub fn mul(&self, other: &LambdaProduct) -> LambdaProduct {
        let mut out = self.clone();
        out.scalar *= &other.scalar;
        for (c, &e) in &other.factors {
            out.mul_linear(c.clone(), e);
        }
        out
    }

    pub fn inv(&self) -> Result<LambdaProduct> {
        if self.scalar.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(LambdaProduct {
            scalar: self.scalar.recip(),
            factors: self.factors.iter().map(|(c, &e)| (c.clone(), -e)).collect(),
        })
    }

    /// Sum of exponents: the λ-degree of the leading term at infinity.
    pub fn top_degree(&self) -> i32 {
        self.factors.values().sum()
    }

    /// Coefficients of the expansion at λ = ∞ for the powers from
    /// `top_degree()` down to `lowest`, as a map power → coefficient.
    pub fn expand_at_infinity(&self, lowest: i32) -> BTreeMap<i32, Rational> {
        let top = self.top_degree();
        let mut out = BTreeMap::new();
        if self.is_zero() || top < lowest {
            return out;
        }
        let n = (top - lowest) as usize;
        // Series in u = 1/λ of ∏ (1 + c u)^e.
        let mut series = vec![Rational::zero(); n + 1];
        series[0] = Rational::one();
        for (c, &e) in &self.factors {
            if c.is_zero() {
                continue;
            }
            let mut f = Vec::with_capacity(n + 1);
            let mut cp = Rational::one();
            for i in 0..=n {
                f.push(gen_binomial(e as i64, i as u32) * &cp);
                cp *= c;
            }
            let mut next = vec![Rational::zero(); n + 1];
            for (i, a) in series.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in f.iter().enumerate().take(n + 1 - i) {
                    next[i + j] += a * b;
                }
            }
            series = next;
        }
        for (i, a) in series.into_iter().enumerate() {
            if !a.is_zero() {
                out.insert(top - i as i32, a * &self.scalar);
            }
        }
        out
    }

    pub fn to_rational_function(&self) -> RationalFunction {
        let mut num = MultiPoly::constant(self.scalar.clone());
        let mut den = MultiPoly::one();
        for (c, &e) in &self.factors {
            let lin = MultiPoly::lambda_plus(c.clone());
            if e > 0 {
                num = &num * &lin.pow(e as u32);
            } else {
                den = &den * &lin.pow((-e) as u32);
            }
        }
        RationalFunction::new(num, den).expect("product of linear factors is nonzero")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn expansion_matches_geometric_series() {
        // 1/(λ - 2) = λ^-1 + 2λ^-2 + 4λ^-3 + ...
        let p = LambdaProduct::linear(int(-2), -1);
        let e = p.expand_at_infinity(-4);
        assert_eq!(e[&-1], int(1));
        assert_eq!(e[&-2], int(2));
        assert_eq!(e[&-3], int(4));
        assert_eq!(e[&-4], int(8));
    }

    #[test]
    fn cancellation_and_scalar() {
        let mut p = LambdaProduct::linear(int(3), 2);
        p.mul_linear(int(3), -2);
        p.scale(&rat(5, 7));
        assert_eq!(p.top_degree(), 0);
        assert_eq!(p.expand_at_infinity(-3), [(0, rat(5, 7))].into());
        assert_eq!(p.to_rational_function(), RationalFunction::constant(rat(5, 7)));
    }

    #[test]
    fn polynomial_factor_expands_exactly() {
        // (λ+1)^2 λ^-1 = λ + 2 + λ^-1
        let mut p = LambdaProduct::linear(int(1), 2);
        p.mul_linear(int(0), -1);
        let e = p.expand_at_infinity(-3);
        assert_eq!(e, [(1, int(1)), (0, int(2)), (-1, int(1))].into());
    }
}
