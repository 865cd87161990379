use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{LaurentPoly, MultiPoly, Rational, Symbol};
use crate::error::{Error, Result};

/// A quotient of polynomials kept in canonical form: coprime, integral
/// coefficients with no common content, and a denominator whose leading
/// coefficient is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFunction {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn zero() -> Self {
        RationalFunction { num: MultiPoly::zero(), den: MultiPoly::one() }
    }

    pub fn one() -> Self {
        RationalFunction { num: MultiPoly::one(), den: MultiPoly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn var(s: Symbol) -> Self {
        Self::from_poly(MultiPoly::var(s))
    }

    pub fn lambda() -> Self {
        Self::var(Symbol::Lambda)
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        Self::normalized(p, MultiPoly::one())
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        Some(self.num.as_constant()? / self.den.as_constant()?)
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut s = self.num.symbols();
        s.extend(self.den.symbols());
        s
    }

    /// Re-run canonicalization on an already built value.
    pub fn normalize(&self) -> Self {
        Self::normalized(self.num.clone(), self.den.clone())
    }

    fn normalized(num: MultiPoly, den: MultiPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.as_constant().is_some() {
            (num, den)
        } else {
            let g = MultiPoly::gcd(&num, &den);
            if g.as_constant().is_some() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides numerator"), den.div_exact(&g).expect("gcd divides denominator"))
            }
        };
        Self::scaled(num, den)
    }

    /// `num / (rest * g)` where every common factor of `num` and the
    /// denominator divides `g`.
    fn normalized_against(num: MultiPoly, rest: MultiPoly, g: MultiPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let c = MultiPoly::gcd(&num, &g);
        let (num, g) = if c.as_constant().is_some() {
            (num, g)
        } else {
            (num.div_exact(&c).expect("gcd divides numerator"), g.div_exact(&c).expect("gcd divides"))
        };
        Self::scaled(num, &rest * &g)
    }

    /// Scale coprime `num` and `den` to integral coefficients with no common
    /// integer content and a positive leading denominator coefficient.
    fn scaled(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        // Clear denominators jointly, then remove the common integer content.
        let l = num.denominator_lcm().lcm(&den.denominator_lcm());
        let lr = Rational::from_integer(l);
        let (num, den) = (num.scale(&lr), den.scale(&lr));
        let mut g = num.numerator_gcd().gcd(&den.numerator_gcd());
        if den.leading_coefficient().is_negative() {
            g = -g;
        }
        let s = Rational::new(BigInt::one(), g);
        RationalFunction { num: num.scale(&s), den: den.scale(&s) }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn powi(&self, e: i32) -> Result<Self> {
        if e < 0 {
            return self.inv()?.powi(-e);
        }
        Ok(RationalFunction { num: self.num.pow(e as u32), den: self.den.pow(e as u32) }.normalize())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    /// Substitute values for the assigned symbols. Every symbol of `self` must
    /// be either assigned or listed in `keep`.
    pub fn evaluate(&self, assignment: &BTreeMap<Symbol, Rational>, keep: &BTreeSet<Symbol>) -> Result<Self> {
        if let Some(s) = self.symbols().into_iter().find(|s| !keep.contains(s) && !assignment.contains_key(s)) {
            return Err(Error::InvalidInput(format!("no value assigned to {s}")));
        }
        let den = self.den.substitute(assignment);
        if den.is_zero() {
            return Err(Error::DegenerateSpecialization);
        }
        Ok(Self::normalized(self.num.substitute(assignment), den))
    }

    /// Laurent expansion in λ, defined when the denominator is a monomial in λ.
    pub fn to_laurent(&self) -> Result<LaurentPoly> {
        if let Some(s) = self.symbols().into_iter().find(|&s| s != Symbol::Lambda) {
            return Err(Error::NotLaurent(format!("depends on {s}")));
        }
        if self.den.num_terms() != 1 {
            return Err(Error::NotLaurent(format!("denominator {}", self.den)));
        }
        let (dm, dc) = self.den.leading().unwrap();
        let shift = dm.exponent(Symbol::Lambda) as i32;
        let mut out = LaurentPoly::zero();
        for (m, c) in self.num.terms() {
            out.add_term(m.exponent(Symbol::Lambda) as i32 - shift, c / dc);
        }
        Ok(out)
    }

    /// Univariate coefficient vectors of numerator and denominator in λ.
    /// Fails if any other symbol is present.
    pub fn lambda_coefficients(&self) -> Result<(Vec<Rational>, Vec<Rational>)> {
        if let Some(s) = self.symbols().into_iter().find(|&s| s != Symbol::Lambda) {
            return Err(Error::InvalidInput(format!("unexpected symbol {s}")));
        }
        let conv = |p: &MultiPoly| {
            let mut v = vec![Rational::zero(); p.degree_in(Symbol::Lambda) as usize + 1];
            for (m, c) in p.terms() {
                v[m.exponent(Symbol::Lambda) as usize] = c.clone();
            }
            v
        };
        Ok((conv(&self.num), conv(&self.den)))
    }
}

impl From<LaurentPoly> for RationalFunction {
    fn from(l: LaurentPoly) -> Self {
        l.to_rational_function()
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == MultiPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::normalized(&self.num + &rhs.num, self.den.clone());
        }
        // Both operands are reduced, so only the common part of the
        // denominators can cancel against the new numerator.
        let g = MultiPoly::gcd(&self.den, &rhs.den);
        let d1 = self.den.div_exact(&g).expect("gcd divides denominator");
        let d2 = rhs.den.div_exact(&g).expect("gcd divides denominator");
        let num = &(&self.num * &d2) + &(&rhs.num * &d1);
        RationalFunction::normalized_against(num, &d1 * &d2, g)
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        let g1 = MultiPoly::gcd(&self.num, &rhs.den);
        let g2 = MultiPoly::gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        RationalFunction::scaled(&n1 * &n2, &d1 * &d2)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl Add for RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: RationalFunction) -> RationalFunction {
        &self + &rhs
    }
}

impl Sub for RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: RationalFunction) -> RationalFunction {
        &self - &rhs
    }
}

impl Mul for RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: RationalFunction) -> RationalFunction {
        &self * &rhs
    }
}
