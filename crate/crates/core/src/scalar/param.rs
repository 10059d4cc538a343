use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Serialize, Serializer};

use super::{Field, MPoly, Monomial, Rational};
use crate::error::{Error, Result};

/// Element of ℚ(p₀, p₁, …): a reduced fraction of polynomials.
///
/// Canonical form: `gcd(num, den) = 1` and `den` is monic under the lex
/// order (its leading coefficient is 1). Laurent monomials such as `p⁻¹` are
/// the fractions `1 / p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ParamFraction {
    num: MPoly<Rational>,
    den: MPoly<Rational>,
}

impl ParamFraction {
    pub fn new(num: MPoly<Rational>, den: MPoly<Rational>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    pub fn from_poly(p: MPoly<Rational>) -> Self {
        ParamFraction { num: p, den: MPoly::one() }
    }

    /// The parameter `p_index`.
    pub fn param(index: usize) -> Self {
        Self::from_poly(MPoly::var(index))
    }

    pub fn numer(&self) -> &MPoly<Rational> {
        &self.num
    }

    pub fn denom(&self) -> &MPoly<Rational> {
        &self.den
    }

    /// Specialize all parameters; `None` if the denominator vanishes there.
    pub fn evaluate(&self, point: &[Rational]) -> Option<Rational> {
        let d = self.den.evaluate(point);
        d.inv().map(|inv| self.num.evaluate(point) * &inv)
    }

    fn canonical(num: MPoly<Rational>, den: MPoly<Rational>) -> Self {
        if num.is_zero() {
            return Self::from_poly(MPoly::zero());
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = MPoly::gcd(&num, &den);
            if g.is_constant() {
                (num, den)
            } else {
                (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
            }
        };
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero denominator");
        if lc.is_one() {
            ParamFraction { num, den }
        } else {
            let inv = lc.inv().expect("nonzero");
            ParamFraction { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    fn den_is_one(&self) -> bool {
        self.den.is_constant()
    }
}

impl fmt::Display for ParamFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |i: usize| format!("q{i}");
        let paren = |p: &MPoly<Rational>| p.len() > 1;
        if self.den_is_one() {
            return self.num.fmt_with(f, &name);
        }
        if paren(&self.num) {
            write!(f, "(")?;
            self.num.fmt_with(f, &name)?;
            write!(f, ")")?;
        } else {
            self.num.fmt_with(f, &name)?;
        }
        write!(f, "/")?;
        if paren(&self.den) {
            write!(f, "(")?;
            self.den.fmt_with(f, &name)?;
            write!(f, ")")
        } else {
            self.den.fmt_with(f, &name)
        }
    }
}

impl fmt::Debug for ParamFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for ParamFraction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'a> Add<&'a ParamFraction> for ParamFraction {
    type Output = ParamFraction;
    fn add(self, rhs: &'a ParamFraction) -> ParamFraction {
        if self.den == rhs.den {
            if self.den_is_one() {
                return ParamFraction { num: self.num.add(&rhs.num), den: self.den };
            }
            return Self::canonical(self.num.add(&rhs.num), self.den);
        }
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        Self::canonical(num, self.den.mul(&rhs.den))
    }
}

impl<'a> Mul<&'a ParamFraction> for ParamFraction {
    type Output = ParamFraction;
    fn mul(self, rhs: &'a ParamFraction) -> ParamFraction {
        if self.num.is_zero() || rhs.num.is_zero() {
            return Self::zero();
        }
        if self.den_is_one() && rhs.den_is_one() {
            return ParamFraction { num: self.num.mul(&rhs.num), den: self.den };
        }
        Self::canonical(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Neg for ParamFraction {
    type Output = ParamFraction;
    fn neg(self) -> ParamFraction {
        ParamFraction { num: self.num.neg(), den: self.den }
    }
}

impl<'a> Sub<&'a ParamFraction> for ParamFraction {
    type Output = ParamFraction;
    fn sub(self, rhs: &'a ParamFraction) -> ParamFraction {
        self + &(-rhs.clone())
    }
}

impl Add for ParamFraction {
    type Output = ParamFraction;
    fn add(self, rhs: ParamFraction) -> ParamFraction {
        self + &rhs
    }
}

impl Sub for ParamFraction {
    type Output = ParamFraction;
    fn sub(self, rhs: ParamFraction) -> ParamFraction {
        self + &(-rhs)
    }
}

impl Mul for ParamFraction {
    type Output = ParamFraction;
    fn mul(self, rhs: ParamFraction) -> ParamFraction {
        self * &rhs
    }
}

impl<'a> AddAssign<&'a ParamFraction> for ParamFraction {
    fn add_assign(&mut self, rhs: &'a ParamFraction) {
        *self = std::mem::replace(self, Self::zero()) + rhs;
    }
}

impl<'a> SubAssign<&'a ParamFraction> for ParamFraction {
    fn sub_assign(&mut self, rhs: &'a ParamFraction) {
        *self = std::mem::replace(self, Self::zero()) - rhs;
    }
}

impl<'a> MulAssign<&'a ParamFraction> for ParamFraction {
    fn mul_assign(&mut self, rhs: &'a ParamFraction) {
        *self = std::mem::replace(self, Self::zero()) * rhs;
    }
}

impl Field for ParamFraction {
    fn zero() -> Self {
        Self::from_poly(MPoly::zero())
    }

    fn one() -> Self {
        Self::from_poly(MPoly::one())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(Self::canonical(self.den.clone(), self.num.clone()))
        }
    }

    fn from_rational(r: &Rational) -> Self {
        Self::from_poly(MPoly::constant(r.clone()))
    }
}

impl From<Rational> for ParamFraction {
    fn from(r: Rational) -> Self {
        Self::from_rational(&r)
    }
}

impl From<Monomial> for ParamFraction {
    fn from(m: Monomial) -> Self {
        Self::from_poly(MPoly::monomial(m, Rational::one()))
    }
}
