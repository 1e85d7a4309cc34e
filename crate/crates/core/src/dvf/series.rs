//! Truncated series in the shift operator `X`, with `X f(u) = f(u+2) X`.

use super::data::BetheData;
use super::transfer::z_fn;
use crate::ratfun::{Coeff, RatFun};

/// `Σ_k c_k(u) X^k` truncated after `X^order`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSeries<C: Coeff> {
    coeffs: Vec<RatFun<C>>,
}

impl<C: Coeff> OperatorSeries<C> {
    pub fn identity(order: usize) -> Self {
        let mut coeffs = vec![RatFun::zero(); order + 1];
        coeffs[0] = RatFun::one();
        OperatorSeries { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<RatFun<C>>) -> Self {
        assert!(!coeffs.is_empty(), "a series keeps at least X^0");
        OperatorSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[RatFun<C>] {
        &self.coeffs
    }

    /// Coefficient of `X^k`; zero for negative `k`.
    pub fn coeff(&self, k: i64) -> RatFun<C> {
        if k < 0 {
            return RatFun::zero();
        }
        assert!(
            k as usize <= self.order(),
            "coefficient X^{k} beyond truncation order {}",
            self.order()
        );
        self.coeffs[k as usize].clone()
    }

    /// `c_k(u + offset - k + 1)`, i.e. `T^k(u + offset)` for the upper series
    /// and `T_k(u + offset)` for the lower one.
    pub fn shifted_coeff(&self, k: i64, offset: i64) -> RatFun<C> {
        match k {
            k if k < 0 => RatFun::zero(),
            0 => RatFun::one(),
            k => self.coeff(k).shift(&C::from_i64(offset - k + 1)),
        }
    }

    /// Exchange-rule product `(f X^m)(g X^n) = f(u) g(u+2m) X^{m+n}`.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut coeffs = vec![RatFun::zero(); order + 1];
        for (m, f) in self.coeffs.iter().enumerate().take(order + 1) {
            if f.is_zero() {
                continue;
            }
            for (n, g) in other.coeffs.iter().enumerate().take(order + 1 - m) {
                if g.is_zero() {
                    continue;
                }
                let term = f * &g.shift(&C::from_i64(2 * m as i64));
                coeffs[m + n] = &coeffs[m + n] + &term;
            }
        }
        OperatorSeries { coeffs }
    }

    /// The substitution `X -> -X`.
    pub fn negate_x(&self) -> Self {
        OperatorSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    /// `1 + sign·z X` for `power = +1`, or its inverse `Σ (-sign·z X)^k` for
    /// `power = -1`.
    pub fn linear_factor(z: &RatFun<C>, sign: i64, power: i64, order: usize) -> Self {
        let mut s = OperatorSeries::identity(order);
        if order == 0 {
            return s;
        }
        if power > 0 {
            s.coeffs[1] = z.scale(&C::from_i64(sign));
            return s;
        }
        // (z X)^k = z(u) z(u+2) ... z(u+2k-2) X^k
        let mut acc = RatFun::one();
        for k in 1..=order {
            acc = &acc * &z.shift(&C::from_i64(2 * (k as i64 - 1)));
            let c = if k % 2 == 1 { -sign } else { 1 };
            s.coeffs[k] = acc.scale(&C::from_i64(c));
        }
        s
    }
}

/// `(1 + z(n)X)^{p_n} ⋯ (1 + z(1)X)^{p_1}` truncated after `X^a_max`.
pub fn generating_series_upper<C: Coeff>(d: &BetheData<C>, a_max: usize) -> OperatorSeries<C> {
    let g = d.grading();
    (1..=g.n_symbols())
        .rev()
        .fold(OperatorSeries::identity(a_max), |acc, a| {
            acc.mul(&OperatorSeries::linear_factor(
                &z_fn(d, a),
                1,
                g.p(a),
                a_max,
            ))
        })
}

/// `(1 - z(1)X)^{-p_1} ⋯ (1 - z(n)X)^{-p_n}` truncated after `X^m_max`.
pub fn generating_series_lower<C: Coeff>(d: &BetheData<C>, m_max: usize) -> OperatorSeries<C> {
    let g = d.grading();
    (1..=g.n_symbols()).fold(OperatorSeries::identity(m_max), |acc, a| {
        acc.mul(&OperatorSeries::linear_factor(
            &z_fn(d, a),
            -1,
            -g.p(a),
            m_max,
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{enumerate_tableaux, SkewShape};
    use crate::dvf::transfer::transfer_tableau_sum;
    use crate::ratfun::{q, Rational};
    use crate::superalgebra::{enumerate_gradings, Grading};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn data(g: &Grading, seed: u64) -> BetheData<Rational> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        BetheData::random_exact(g, &vec![2; g.rank()], 2, &mut rng).unwrap()
    }

    #[test]
    fn constant_terms_are_one() {
        let d = data(&Grading::parse("+-+").unwrap(), 1);
        assert_eq!(generating_series_upper(&d, 3).coeff(0), RatFun::one());
        assert_eq!(generating_series_lower(&d, 3).coeff(0), RatFun::one());
        assert!(generating_series_upper(&d, 3).coeff(-1).is_zero());
        assert_eq!(
            generating_series_lower(&d, 3).shifted_coeff(0, 5),
            RatFun::one()
        );
    }

    #[test]
    fn coefficients_match_columns_and_rows() {
        let g = Grading::parse("+-+").unwrap();
        let d = data(&g, 2);
        let upper = generating_series_upper(&d, 3);
        let lower = generating_series_lower(&d, 3);
        for k in 1..=3 {
            let col = transfer_tableau_sum(&d, &SkewShape::column(k)).unwrap();
            let row = transfer_tableau_sum(&d, &SkewShape::row(k)).unwrap();
            assert_eq!(upper.shifted_coeff(k as i64, 0), col);
            assert_eq!(lower.shifted_coeff(k as i64, 0), row);
        }
    }

    #[test]
    fn inverse_relation() {
        for g in enumerate_gradings(1, 1).unwrap() {
            let d = data(&g, 3);
            let prod = generating_series_upper(&d, 3)
                .negate_x()
                .mul(&generating_series_lower(&d, 3));
            assert_eq!(prod, OperatorSeries::identity(3), "{g}");
        }
    }

    #[test]
    fn trivial_data_counts_rows() {
        for g in enumerate_gradings(1, 1).unwrap() {
            let d = BetheData::<Rational>::empty(g.clone());
            let lower = generating_series_lower(&d, 4);
            for m in 1..=4 {
                let signed: i64 = enumerate_tableaux(&SkewShape::row(m), &g)
                    .unwrap()
                    .iter()
                    .map(|t| t.entries().iter().map(|&b| g.p(b)).product::<i64>())
                    .sum();
                assert_eq!(lower.coeff(m as i64), RatFun::constant(q(signed, 1)));
            }
        }
    }
}
