use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{Monomial, MultiPoly, Rational, RationalFunction, Symbol};

/// Finite Laurent polynomial in λ with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i32, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { coeffs: BTreeMap::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(k: i32, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(k, c);
        p
    }

    pub fn from_terms(it: impl IntoIterator<Item = (i32, Rational)>) -> Self {
        let mut p = Self::zero();
        for (k, c) in it {
            p.add_term(k, c);
        }
        p
    }

    pub fn add_term(&mut self, k: i32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(k).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of λ^k, zero when absent.
    pub fn coefficient(&self, k: i32) -> Rational {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn min_exponent(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(&k, a)| (k, a * c)))
    }

    pub fn to_rational_function(&self) -> RationalFunction {
        let shift = self.min_exponent().unwrap_or(0).min(0);
        let num = MultiPoly::from_terms(
            self.coeffs.iter().map(|(&k, c)| (Monomial::var(Symbol::Lambda, (k - shift) as u32), c.clone())),
        );
        let den = MultiPoly::term(Monomial::var(Symbol::Lambda, (-shift) as u32), Rational::one());
        RationalFunction::new(num, den).expect("monomial denominator is nonzero")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, c) in self.coeffs.iter().rev() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                1 if a.is_one() => write!(f, "λ")?,
                1 => write!(f, "{a}λ")?,
                _ if a.is_one() => write!(f, "λ^{k}")?,
                _ => write!(f, "{a}λ^{k}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&k, c) in &rhs.coeffs {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&a, x) in &self.coeffs {
            for (&b, y) in &rhs.coeffs {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&k, c)| (k, -c.clone())).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    #[test]
    fn coefficient_lookup() {
        let f = LaurentPoly::from_terms([(-2, int(1)), (1, int(3))]);
        assert_eq!(f.coefficient(-2), int(1));
        assert_eq!(f.coefficient(0), int(0));
        assert_eq!(LaurentPoly::constant(int(5)).coefficient(0), int(5));
    }

    #[test]
    fn rational_function_roundtrip() {
        let f = LaurentPoly::from_terms([(-3, int(2)), (0, int(-1)), (2, int(7))]);
        assert_eq!(f.to_rational_function().to_laurent().unwrap(), f);
        assert_eq!(LaurentPoly::zero().to_rational_function(), RationalFunction::zero());
    }

    #[test]
    fn display() {
        let f = LaurentPoly::from_terms([(-2, int(1)), (1, int(-3))]);
        assert_eq!(f.to_string(), "-3λ + λ^-2");
    }
}
