//! Dense univariate polynomials in the spectral parameter `u`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::coeff::Coeff;

/// Polynomial with ascending coefficients and no trailing zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> Poly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `u`.
    pub fn x() -> Self {
        Poly::new(vec![C::zero(), C::one()])
    }

    /// `u - root`.
    pub fn linear(root: &C) -> Self {
        Poly::new(vec![-root.clone(), C::one()])
    }

    /// Monic `∏ (u - r)`.
    pub fn from_roots<'a, I>(roots: I) -> Self
    where
        I: IntoIterator<Item = &'a C>,
    {
        roots
            .into_iter()
            .fold(Poly::one(), |acc, r| &acc * &Poly::linear(r))
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &C) -> C {
        let mut acc = C::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * C::from_i64(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, k: &C) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    /// `p(u + c)` by Horner's scheme on the polynomial `u + c`.
    pub fn shift(&self, c: &C) -> Self {
        if c.is_zero() {
            return self.clone();
        }
        let step = Poly::new(vec![c.clone(), C::one()]);
        let mut acc = Poly::zero();
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * &step) + &Poly::constant(a.clone());
        }
        acc
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => {
                let inv = C::one() / l.clone();
                self.scale(&inv)
            }
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![C::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * d.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor (exact backends).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.monic(), other.monic());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Poly::one(), |acc, _| &acc * self)
    }
}

impl<C: Coeff> Add for &Poly<C> {
    type Output = Poly<C>;

    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<C: Coeff> Sub for &Poly<C> {
    type Output = Poly<C>;

    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<C: Coeff> Mul for &Poly<C> {
    type Output = Poly<C>;

    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;

    fn neg(self) -> Poly<C> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Coeff> $tr for Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: Poly<C>) -> Poly<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coeff> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let c = c.to_json().to_string();
                match i {
                    0 => c,
                    1 => format!("{c}*u"),
                    _ => format!("{c}*u^{i}"),
                }
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

impl<C: Coeff> Serialize for Poly<C> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<serde_json::Value> = self.coeffs.iter().map(Coeff::to_json).collect();
        v.serialize(s)
    }
}

impl<'de, C: Coeff> Deserialize<'de> for Poly<C> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<serde_json::Value> = Vec::deserialize(d)?;
        let coeffs = v
            .iter()
            .map(C::from_json)
            .collect::<crate::Result<Vec<C>>>()
            .map_err(D::Error::custom)?;
        Ok(Poly::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::coeff::{q, Rational};
    use num_traits::Zero;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::new(c.iter().map(|&x| q(x, 1)).collect())
    }

    #[test]
    fn basics() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert_eq!(Poly::<Rational>::zero().degree(), None);
        assert_eq!(p(&[0, 0, 1]).shift(&q(1, 1)), p(&[1, 2, 1]));
        assert_eq!(Poly::from_roots(&[q(1, 1), q(-1, 1)]), p(&[-1, 0, 1]));
        let (quot, rem) = p(&[-1, 0, 1]).div_rem(&p(&[-1, 1]));
        assert_eq!(quot, p(&[1, 1]));
        assert!(rem.is_zero());
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[1, 2, 1])), p(&[1, 1]));
        assert_eq!(p(&[5, 3, 1]).derivative(), p(&[3, 2]));
        assert!(p(&[1, 1]).eval(&q(-1, 1)).is_zero());
    }

    fn small_poly() -> impl Strategy<Value = Poly<Rational>> {
        prop::collection::vec((-9i64..=9, 1i64..=4), 0..5)
            .prop_map(|v| Poly::new(v.into_iter().map(|(n, d)| q(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn shift_composes(f in small_poly(), a in -5i64..5, b in -5i64..5) {
            prop_assert_eq!(f.shift(&q(a, 1)).shift(&q(b, 2)), f.shift(&(q(a, 1) + q(b, 2))));
        }

        #[test]
        fn shift_is_multiplicative(f in small_poly(), g in small_poly(), c in -5i64..5) {
            let c = q(c, 3);
            prop_assert_eq!((&f * &g).shift(&c), &f.shift(&c) * &g.shift(&c));
        }

        #[test]
        fn division_identity(f in small_poly(), g in small_poly()) {
            prop_assume!(!g.is_zero());
            let (quot, rem) = f.div_rem(&g);
            prop_assert_eq!(&(&quot * &g) + &rem, f);
            prop_assert!(rem.degree() < g.degree() || rem.is_zero());
        }
    }
}
