use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::coeff::Coeff;
use super::poly::Poly;
use crate::error::{Error, Result};

/// Quotient `num / den` of two polynomials.
///
/// On an exact backend the pair is canonical: `gcd(num, den) = 1`, `den`
/// monic, zero stored as `0/1`, so structural equality is equality of
/// functions. Floating backends only make `den` monic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "C: Coeff", deserialize = "C: Coeff"))]
#[serde(try_from = "RatFunRepr<C>")]
pub struct RatFun<C: Coeff> {
    num: Poly<C>,
    den: Poly<C>,
}

#[derive(Deserialize)]
#[serde(bound(deserialize = "C: Coeff"))]
struct RatFunRepr<C: Coeff> {
    num: Poly<C>,
    den: Poly<C>,
}

impl<C: Coeff> TryFrom<RatFunRepr<C>> for RatFun<C> {
    type Error = Error;

    fn try_from(r: RatFunRepr<C>) -> Result<Self> {
        RatFun::new(r.num, r.den)
    }
}

impl<C: Coeff> RatFun<C> {
    pub fn new(num: Poly<C>, den: Poly<C>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly<C>, den: Poly<C>) -> Self {
        if num.is_zero() {
            return RatFun::zero();
        }
        let (num, den) = if C::EXACT {
            let g = num.gcd(&den);
            if g.degree() == Some(0) {
                (num, den)
            } else {
                (num.div_rem(&g).0, den.div_rem(&g).0)
            }
        } else {
            (num, den)
        };
        let inv = C::one() / den.leading().unwrap().clone();
        RatFun {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn zero() -> Self {
        RatFun {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFun::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        RatFun::from_poly(Poly::constant(c))
    }

    pub fn from_poly(p: Poly<C>) -> Self {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn num(&self) -> &Poly<C> {
        &self.num
    }

    pub fn den(&self) -> &Poly<C> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, k: &C) -> Self {
        Self::normalized(self.num.scale(k), self.den.clone())
    }

    /// `f(u + c)`.
    pub fn shift(&self, c: &C) -> Self {
        if c.is_zero() {
            return self.clone();
        }
        let den = self.den.shift(c);
        let inv = C::one() / den.leading().unwrap().clone();
        RatFun {
            num: self.num.shift(c).scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn eval(&self, x: &C) -> Result<C> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Pole);
        }
        Ok(self.num.eval(x) / d)
    }

    /// Residue at `p`, which must be at most a simple pole.
    pub fn residue_at(&self, p: &C) -> Result<C> {
        let d = self.den.eval(p);
        if !d.is_zero() {
            return Ok(C::zero());
        }
        let n = self.num.eval(p);
        if n.is_zero() && !C::EXACT {
            return Ok(C::zero());
        }
        let mut order = 1;
        let mut dd = self.den.derivative();
        while dd.eval(p).is_zero() {
            order += 1;
            dd = dd.derivative();
        }
        if order > 1 {
            return Err(Error::HigherOrderPole { order });
        }
        Ok(n / self.den.derivative().eval(p))
    }

    /// Equality by evaluating both cross products at `max degree + 1`
    /// non-pole sample points drawn from `points`.
    pub fn sampled_eq<I>(&self, other: &Self, points: I) -> bool
    where
        I: IntoIterator<Item = C>,
    {
        let deg = |p: &Poly<C>| p.degree().map_or(0, |d| d);
        let bound = (deg(&self.num) + deg(&other.den)).max(deg(&other.num) + deg(&self.den));
        let mut used = 0;
        for x in points {
            let (d1, d2) = (self.den.eval(&x), other.den.eval(&x));
            if d1.is_zero() || d2.is_zero() {
                continue;
            }
            if self.num.eval(&x) * d2 != other.num.eval(&x) * d1 {
                return false;
            }
            used += 1;
            if used > bound {
                return true;
            }
        }
        false
    }
}

impl<C: Coeff> Add for &RatFun<C> {
    type Output = RatFun<C>;

    fn add(self, rhs: &RatFun<C>) -> RatFun<C> {
        if self.den == rhs.den {
            return RatFun::normalized(&self.num + &rhs.num, self.den.clone());
        }
        RatFun::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<C: Coeff> Sub for &RatFun<C> {
    type Output = RatFun<C>;

    fn sub(self, rhs: &RatFun<C>) -> RatFun<C> {
        self + &(-rhs)
    }
}

impl<C: Coeff> Mul for &RatFun<C> {
    type Output = RatFun<C>;

    fn mul(self, rhs: &RatFun<C>) -> RatFun<C> {
        if self.is_zero() || rhs.is_zero() {
            return RatFun::zero();
        }
        RatFun::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<C: Coeff> Neg for &RatFun<C> {
    type Output = RatFun<C>;

    fn neg(self) -> RatFun<C> {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<C: Coeff> Neg for RatFun<C> {
    type Output = RatFun<C>;

    fn neg(self) -> RatFun<C> {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Coeff> $tr for RatFun<C> {
            type Output = RatFun<C>;
            fn $m(self, rhs: RatFun<C>) -> RatFun<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coeff> fmt::Display for RatFun<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
