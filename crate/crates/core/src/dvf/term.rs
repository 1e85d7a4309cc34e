//! Symbolic Laurent monomials in shifted `P_1` and `Q_a` factors.
//!
//! Every dressed-vacuum term is a signed product of such factors, so keeping
//! them symbolic lets the same object be turned into an exact rational
//! function, evaluated at a point, or inspected for its poles.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use super::data::BetheData;
use crate::error::{Error, Result};
use crate::ratfun::{Coeff, Poly, RatFun};
use crate::superalgebra::Grading;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FactorKind {
    /// The vacuum factor `P_1`.
    P,
    /// `Q_a` for a color `a`.
    Q(usize),
}

/// `P_1(u + shift)` or `Q_a(u + shift)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Factor {
    pub kind: FactorKind,
    pub shift: i64,
}

impl Factor {
    pub fn p(shift: i64) -> Self {
        Factor {
            kind: FactorKind::P,
            shift,
        }
    }

    pub fn q(a: usize, shift: i64) -> Self {
        Factor {
            kind: FactorKind::Q(a),
            shift,
        }
    }

    pub fn shifted(self, k: i64) -> Self {
        Factor {
            shift: self.shift + k,
            ..self
        }
    }

    fn base_roots<'a, C: Coeff>(&self, d: &'a BetheData<C>) -> &'a [C] {
        match self.kind {
            FactorKind::P => d.inhomogeneities(),
            FactorKind::Q(a) => d.roots(a),
        }
    }

    pub fn degree<C: Coeff>(&self, d: &BetheData<C>) -> usize {
        self.base_roots(d).len()
    }

    pub fn poly<C: Coeff>(&self, d: &BetheData<C>) -> Poly<C> {
        let base = match self.kind {
            FactorKind::P => d.p_poly(),
            FactorKind::Q(a) => d.q_poly(a),
        };
        base.shift(&C::from_i64(self.shift))
    }

    pub fn eval<C: Coeff>(&self, d: &BetheData<C>, u: &C) -> C {
        let x = u.clone() + C::from_i64(self.shift);
        match self.kind {
            FactorKind::P => d.p_value(&x),
            FactorKind::Q(a) => d.q_value(a, &x),
        }
    }

    /// Points `u` where the factor vanishes: `root - shift`.
    pub fn zeros<C: Coeff>(&self, d: &BetheData<C>) -> Vec<C> {
        let s = C::from_i64(self.shift);
        self.base_roots(d)
            .iter()
            .map(|r| r.clone() - s.clone())
            .collect()
    }

    /// Value at `u` with the linear factor `(u + shift - root_k)` removed.
    pub fn eval_without<C: Coeff>(&self, d: &BetheData<C>, u: &C, k: usize) -> C {
        let x = u.clone() + C::from_i64(self.shift);
        self.base_roots(d)
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .fold(C::one(), |acc, (_, r)| acc * (x.clone() - r.clone()))
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            FactorKind::P => "P1".to_string(),
            FactorKind::Q(a) => format!("Q{a}"),
        };
        match self.shift {
            0 => write!(f, "{name}(u)"),
            s if s > 0 => write!(f, "{name}(u+{s})"),
            s => write!(f, "{name}(u{s})"),
        }
    }
}

/// A signed Laurent monomial `sign · ∏ factor^power`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Term {
    pub sign: i8,
    pub powers: BTreeMap<Factor, i32>,
}

impl Term {
    pub fn one() -> Self {
        Term {
            sign: 1,
            powers: BTreeMap::new(),
        }
    }

    fn bump(&mut self, f: Factor, e: i32) {
        let entry = self.powers.entry(f).or_insert(0);
        *entry += e;
        if *entry == 0 {
            self.powers.remove(&f);
        }
    }

    /// `z(a; u + shift)` without the sign `p_a`.
    pub fn z(g: &Grading, a: usize, shift: i64) -> Self {
        let n = g.n_symbols();
        let pa = g.p(a);
        let mut t = Term::one();
        t.bump(Factor::p(if a == 1 { shift + 2 * pa } else { shift }), 1);
        if a > 1 {
            let s = g.partial_sum(a - 1);
            t.bump(Factor::q(a - 1, shift + s + 2 * pa), 1);
            t.bump(Factor::q(a - 1, shift + s), -1);
        }
        if a < n {
            let s = g.partial_sum(a);
            t.bump(Factor::q(a, shift + s - 2 * pa), 1);
            t.bump(Factor::q(a, shift + s), -1);
        }
        t
    }

    pub fn mul(&self, other: &Term) -> Term {
        let mut t = self.clone();
        t.sign *= other.sign;
        for (&f, &e) in &other.powers {
            t.bump(f, e);
        }
        t
    }

    pub fn negate(&self) -> Term {
        Term {
            sign: -self.sign,
            powers: self.powers.clone(),
        }
    }

    pub fn shifted(&self, k: i64) -> Term {
        Term {
            sign: self.sign,
            powers: self
                .powers
                .iter()
                .map(|(f, &e)| (f.shifted(k), e))
                .collect(),
        }
    }

    /// Drops factors that are constant for the given data.
    pub fn reduced<C: Coeff>(&self, d: &BetheData<C>) -> Term {
        Term {
            sign: self.sign,
            powers: self
                .powers
                .iter()
                .filter(|(f, _)| f.degree(d) > 0)
                .map(|(&f, &e)| (f, e))
                .collect(),
        }
    }

    /// Factors with negative power.
    pub fn denominator(&self) -> impl Iterator<Item = (Factor, u32)> + '_ {
        self.powers
            .iter()
            .filter(|(_, &e)| e < 0)
            .map(|(&f, &e)| (f, (-e) as u32))
    }

    pub fn eval<C: Coeff>(&self, d: &BetheData<C>, u: &C) -> Result<C> {
        let mut num = C::from_i64(self.sign as i64);
        let mut den = C::one();
        for (f, &e) in &self.powers {
            let v = f.eval(d, u);
            for _ in 0..e.unsigned_abs() {
                if e > 0 {
                    num = num * v.clone();
                } else {
                    den = den * v.clone();
                }
            }
        }
        if den.is_zero() {
            return Err(Error::Pole);
        }
        Ok(num / den)
    }

    pub fn to_ratfun<C: Coeff>(&self, d: &BetheData<C>) -> RatFun<C> {
        terms_to_ratfun(std::slice::from_ref(self), d)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |pos: bool| -> String {
            let parts: Vec<String> = self
                .powers
                .iter()
                .filter(|(_, &e)| (e > 0) == pos)
                .map(|(fac, &e)| match e.abs() {
                    1 => fac.to_string(),
                    k => format!("{fac}^{k}"),
                })
                .collect();
            if parts.is_empty() {
                "1".to_string()
            } else {
                parts.join(" ")
            }
        };
        let sign = if self.sign < 0 { "-" } else { "+" };
        write!(f, "{sign}[{}]/[{}]", side(true), side(false))
    }
}

/// Exact sum of terms over the least common multiple of their denominators.
pub fn terms_to_ratfun<C: Coeff>(terms: &[Term], d: &BetheData<C>) -> RatFun<C> {
    let mut env: BTreeMap<Factor, u32> = BTreeMap::new();
    for t in terms {
        for (f, e) in t.denominator() {
            let slot = env.entry(f).or_insert(0);
            *slot = (*slot).max(e);
        }
    }
    let mut cache: HashMap<Factor, Poly<C>> = HashMap::new();
    let mut poly_of = |f: Factor| cache.entry(f).or_insert_with(|| f.poly(d)).clone();
    let den = env
        .iter()
        .fold(Poly::one(), |acc, (&f, &e)| &acc * &poly_of(f).pow(e));
    let mut num = Poly::zero();
    for t in terms {
        let mut p = Poly::constant(C::from_i64(t.sign as i64));
        for (&f, &e) in &t.powers {
            if e > 0 {
                p = &p * &poly_of(f).pow(e as u32);
            }
        }
        for (&f, &e) in &env {
            let own = t.powers.get(&f).map_or(0, |&x| (-x).max(0) as u32);
            if e > own {
                p = &p * &poly_of(f).pow(e - own);
            }
        }
        num = &num + &p;
    }
    RatFun::new(num, den).expect("nonzero denominator")
}
