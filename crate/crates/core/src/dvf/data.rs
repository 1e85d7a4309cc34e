use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::ratfun::{q, Coeff, Poly, Rational};
use crate::superalgebra::Grading;

/// Bethe roots per color and the inhomogeneities of the quantum space.
///
/// Color `a` runs over `1..=r+s+1`; `Q_0` and `Q_{r+s+2}` are the constant 1.
/// Only color 1 carries a vacuum factor `P_1(u) = ∏ (u - w_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BetheData<C: Coeff> {
    grading: Grading,
    roots: Vec<Vec<C>>,
    inhomogeneities: Vec<C>,
}

impl<C: Coeff> BetheData<C> {
    pub fn new(grading: Grading, roots: Vec<Vec<C>>, inhomogeneities: Vec<C>) -> Result<Self> {
        if roots.len() != grading.rank() {
            return Err(Error::InvalidGrading(format!(
                "{} root colors given for rank {}",
                roots.len(),
                grading.rank()
            )));
        }
        Ok(BetheData {
            grading,
            roots,
            inhomogeneities,
        })
    }

    /// No Bethe roots and no sites: every z-function is 1.
    pub fn empty(grading: Grading) -> Self {
        let rank = grading.rank();
        BetheData {
            grading,
            roots: vec![Vec::new(); rank],
            inhomogeneities: Vec::new(),
        }
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    /// Roots of color `a`; empty for the boundary colors `0` and `r+s+2`.
    pub fn roots(&self, a: usize) -> &[C] {
        if a == 0 || a > self.roots.len() {
            return &[];
        }
        &self.roots[a - 1]
    }

    pub fn all_roots(&self) -> &[Vec<C>] {
        &self.roots
    }

    pub fn inhomogeneities(&self) -> &[C] {
        &self.inhomogeneities
    }

    pub fn n_roots(&self, a: usize) -> usize {
        self.roots(a).len()
    }

    pub fn n_sites(&self) -> usize {
        self.inhomogeneities.len()
    }

    pub fn total_roots(&self) -> usize {
        self.roots.iter().map(Vec::len).sum()
    }

    pub fn with_roots(&self, a: usize, roots: Vec<C>) -> Self {
        let mut out = self.clone();
        out.roots[a - 1] = roots;
        out
    }

    pub fn with_grading(&self, grading: Grading) -> Self {
        BetheData {
            grading,
            ..self.clone()
        }
    }

    pub fn q_poly(&self, a: usize) -> Poly<C> {
        Poly::from_roots(self.roots(a))
    }

    pub fn p_poly(&self) -> Poly<C> {
        Poly::from_roots(&self.inhomogeneities)
    }

    /// `Q_a(x)` by direct product over the roots.
    pub fn q_value(&self, a: usize, x: &C) -> C {
        self.roots(a)
            .iter()
            .fold(C::one(), |acc, r| acc * (x.clone() - r.clone()))
    }

    pub fn p_value(&self, x: &C) -> C {
        self.inhomogeneities
            .iter()
            .fold(C::one(), |acc, w| acc * (x.clone() - w.clone()))
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> BetheData<D> {
        BetheData {
            grading: self.grading.clone(),
            roots: self
                .roots
                .iter()
                .map(|rs| rs.iter().map(&f).collect())
                .collect(),
            inhomogeneities: self.inhomogeneities.iter().map(&f).collect(),
        }
    }
}

impl BetheData<Rational> {
    /// Random non-integer rational roots with small denominators, so that
    /// integer sample points never hit a pole.
    pub fn random_exact<R: Rng>(
        grading: &Grading,
        counts: &[usize],
        sites: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let roots = counts
            .iter()
            .map(|&n| (0..n).map(|_| random_fraction(rng)).collect())
            .collect();
        let w = (0..sites).map(|_| random_fraction(rng)).collect();
        BetheData::new(grading.clone(), roots, w)
    }

    pub fn to_complex(&self) -> BetheData<num_complex::Complex64> {
        self.map(Coeff::to_complex)
    }
}

/// `n/d` with `d ∈ {2,3,5,7}`, `d ∤ n` and `|n/d| ≤ 3`.
pub fn random_fraction<R: Rng>(rng: &mut R) -> Rational {
    const DENOMS: [i64; 4] = [2, 3, 5, 7];
    let d = DENOMS[rng.gen_range(0..DENOMS.len())];
    loop {
        let n = rng.gen_range(-3 * d..=3 * d);
        if n % d != 0 {
            return q(n, d);
        }
    }
}

#[derive(Serialize, Deserialize)]
struct DataRepr {
    grading: Grading,
    roots: Vec<Vec<Value>>,
    inhomogeneities: Vec<Value>,
}

impl<C: Coeff> Serialize for BetheData<C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DataRepr {
            grading: self.grading.clone(),
            roots: self
                .roots
                .iter()
                .map(|rs| rs.iter().map(Coeff::to_json).collect())
                .collect(),
            inhomogeneities: self.inhomogeneities.iter().map(Coeff::to_json).collect(),
        }
        .serialize(s)
    }
}

impl<'de, C: Coeff> Deserialize<'de> for BetheData<C> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DataRepr::deserialize(d)?;
        let conv = |v: &Vec<Value>| -> std::result::Result<Vec<C>, D::Error> {
            v.iter()
                .map(|x| C::from_json(x).map_err(D::Error::custom))
                .collect()
        };
        let roots = r
            .roots
            .iter()
            .map(conv)
            .collect::<std::result::Result<_, _>>()?;
        let w = conv(&r.inhomogeneities)?;
        BetheData::new(r.grading, roots, w).map_err(D::Error::custom)
    }
}
