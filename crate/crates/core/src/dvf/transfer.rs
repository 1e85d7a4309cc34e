//! Tableau sums and the two determinant formulas on the exact or floating
//! rational-function backend.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::data::BetheData;
use super::series::{generating_series_lower, generating_series_upper};
use super::term::{terms_to_ratfun, Term};
use crate::diagrams::{enumerate_tableaux, SkewShape, Tableau};
use crate::error::Result;
use crate::ratfun::{Coeff, RatFun};
use crate::superalgebra::Grading;

/// Offset `-μ_1 + μ'_1` of the spectral parameter attached to a shape.
pub fn shape_base(sh: &SkewShape) -> i64 {
    sh.mu().len() as i64 - sh.mu().part(1) as i64
}

/// Spectral offset of cell `(i, j)` relative to `u`.
pub fn cell_offset(sh: &SkewShape, i: usize, j: usize) -> i64 {
    shape_base(sh) - 2 * i as i64 + 2 * j as i64
}

pub fn z_fn<C: Coeff>(d: &BetheData<C>, a: usize) -> RatFun<C> {
    Term::z(d.grading(), a, 0).to_ratfun(d)
}

/// `∏ p_b z(b; u + offset)` over the cells of one tableau.
pub fn tableau_term(g: &Grading, t: &Tableau) -> Term {
    let sh = t.shape();
    t.iter().fold(Term::one(), |acc, ((i, j), b)| {
        let mut z = Term::z(g, b, cell_offset(sh, i, j));
        z.sign = g.p(b) as i8;
        acc.mul(&z)
    })
}

/// Every admissible tableau with its signed dressed-vacuum term, in
/// enumeration order.
pub fn tableau_terms(g: &Grading, sh: &SkewShape) -> Result<Vec<(Tableau, Term)>> {
    Ok(enumerate_tableaux(sh, g)?
        .into_iter()
        .map(|t| {
            let term = tableau_term(g, &t);
            (t, term)
        })
        .collect())
}

/// `T_{λ⊂μ}(u)` as the sum over admissible tableaux.
pub fn transfer_tableau_sum<C: Coeff>(d: &BetheData<C>, sh: &SkewShape) -> Result<RatFun<C>> {
    let terms: Vec<Term> = tableau_terms(d.grading(), sh)?
        .into_iter()
        .map(|(_, t)| t)
        .collect();
    Ok(terms_to_ratfun(&terms, d))
}

/// Ring operations needed by fraction-free elimination.
pub trait DetRing: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Division known to be exact.
    fn exact_div(&self, other: &Self) -> Self;
}

impl DetRing for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, other: &Self) -> Self {
        self / other
    }
}

impl<C: Coeff> DetRing for RatFun<C> {
    fn zero() -> Self {
        RatFun::zero()
    }
    fn one() -> Self {
        RatFun::one()
    }
    fn is_zero(&self) -> bool {
        RatFun::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, other: &Self) -> Self {
        self.div(other).expect("nonzero Bareiss pivot")
    }
}

/// Bareiss fraction-free determinant; the empty matrix has determinant 1.
pub fn bareiss<R: DetRing>(mut m: Vec<Vec<R>>) -> R {
    let n = m.len();
    let mut sign_flip = false;
    let mut prev = R::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign_flip = !sign_flip;
                }
                None => return R::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = v.exact_div(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let det = if n == 0 {
        R::one()
    } else {
        m[n - 1][n - 1].clone()
    };
    if sign_flip {
        det.neg()
    } else {
        det
    }
}

/// Index and spectral offset of entry `(i, j)` of the upper determinant.
pub fn jacobi_trudi_entry(sh: &SkewShape, i: usize, j: usize) -> (i64, i64) {
    let mc = sh.mu().conjugate();
    let lc = sh.lambda().conjugate();
    let (mi, lj) = (mc.part(i) as i64, lc.part(j) as i64);
    let (i, j) = (i as i64, j as i64);
    (mi - lj - i + j, shape_base(sh) - mi - lj + i + j - 1)
}

/// Index and spectral offset of entry `(i, j)` of the lower determinant.
pub fn giambelli_entry(sh: &SkewShape, i: usize, j: usize) -> (i64, i64) {
    let (mj, li) = (sh.mu().part(j) as i64, sh.lambda().part(i) as i64);
    let (i, j) = (i as i64, j as i64);
    (mj - li + i - j, shape_base(sh) + mj + li - i - j + 1)
}

/// Largest series index any determinant entry can ask for.
pub fn max_entry_index(sh: &SkewShape) -> usize {
    (sh.mu().len() + sh.mu().part(1)).saturating_sub(1)
}

/// Upper determinant over `μ_1 × μ_1` with entries `T^a(u + offset)` read off
/// the shifted coefficients of the upper generating series.
pub fn jacobi_trudi_det<C: Coeff>(d: &BetheData<C>, sh: &SkewShape) -> RatFun<C> {
    let n = sh.mu().part(1);
    let series = generating_series_upper(d, max_entry_index(sh));
    let m = (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    let (a, off) = jacobi_trudi_entry(sh, i, j);
                    series.shifted_coeff(a, off)
                })
                .collect()
        })
        .collect();
    bareiss(m)
}

/// Lower determinant over `μ'_1 × μ'_1` with entries `T_m(u + offset)` from
/// the lower generating series.
pub fn giambelli_dual_det<C: Coeff>(d: &BetheData<C>, sh: &SkewShape) -> RatFun<C> {
    let n = sh.mu().len();
    let series = generating_series_lower(d, max_entry_index(sh));
    let m = (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    let (k, off) = giambelli_entry(sh, i, j);
                    series.shifted_coeff(k, off)
                })
                .collect()
        })
        .collect();
    bareiss(m)
}

/// Tableau sum with each `z(a; ·)` replaced by the constant `x_a`.
pub fn character_limit<C: Coeff>(g: &Grading, sh: &SkewShape, x: &[C]) -> Result<C> {
    Ok(enumerate_tableaux(sh, g)?
        .iter()
        .map(|t| {
            t.entries().iter().fold(C::one(), |acc, &b| {
                acc * x[b - 1].clone() * C::from_i64(g.p(b))
            })
        })
        .fold(C::zero(), |a, b| a + b))
}

/// Classical super Jacobi-Trudi determinant in the commuting variables `x`,
/// with `e_a` the coefficient of `t^a` in `∏_b (1 + x_b t)^{p_b}`.
pub fn classical_jacobi_trudi<C: Coeff>(g: &Grading, sh: &SkewShape, x: &[C]) -> C {
    let order = max_entry_index(sh);
    let mut e = vec![C::zero(); order + 1];
    e[0] = C::one();
    for b in 1..=g.n_symbols() {
        let xb = x[b - 1].clone();
        if g.p(b) > 0 {
            for k in (1..=order).rev() {
                e[k] = e[k].clone() + xb.clone() * e[k - 1].clone();
            }
        } else {
            // multiply by 1/(1 + x t)
            for k in 1..=order {
                e[k] = e[k].clone() - xb.clone() * e[k - 1].clone();
            }
        }
    }
    let entry = |a: i64| -> C {
        if a < 0 || a as usize > order {
            C::zero()
        } else {
            e[a as usize].clone()
        }
    };
    let n = sh.mu().part(1);
    let m: Vec<Vec<RatFun<C>>> = (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| RatFun::constant(entry(jacobi_trudi_entry(sh, i, j).0)))
                .collect()
        })
        .collect();
    bareiss(m).num().coeff(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::Partition;
    use crate::ratfun::{q, Rational};
    use crate::superalgebra::enumerate_gradings;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn shape(text: &str) -> SkewShape {
        SkewShape::parse(text).unwrap()
    }

    fn sl21() -> Grading {
        Grading::parse("+-+").unwrap()
    }

    fn random_data(g: &Grading, seed: u64) -> BetheData<Rational> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let counts: Vec<usize> = (0..g.rank()).map(|a| 1 + (a + seed as usize) % 2).collect();
        BetheData::random_exact(g, &counts, 2, &mut rng).unwrap()
    }

    #[test]
    fn trivial_data_gives_unit_z() {
        for g in enumerate_gradings(1, 1).unwrap() {
            let d = BetheData::<Rational>::empty(g.clone());
            for a in 1..=g.n_symbols() {
                assert_eq!(z_fn(&d, a), RatFun::one());
            }
        }
    }

    #[test]
    fn worked_example_signs() {
        let terms = tableau_terms(&sl21(), &shape("2,1")).unwrap();
        let signs: Vec<i8> = terms.iter().map(|(_, t)| t.sign).collect();
        assert_eq!(signs, vec![-1, 1, 1, -1, -1, 1, 1, -1]);
    }

    #[test]
    fn empty_shape_is_one() {
        let d = random_data(&sl21(), 1);
        let empty = SkewShape::straight(Partition::empty());
        assert_eq!(transfer_tableau_sum(&d, &empty).unwrap(), RatFun::one());
        assert_eq!(jacobi_trudi_det(&d, &empty), RatFun::one());
        assert_eq!(giambelli_dual_det(&d, &empty), RatFun::one());
    }

    #[test]
    fn sl11_square_vanishes() {
        for g in enumerate_gradings(0, 0).unwrap() {
            let d = random_data(&g, 3);
            let sq = shape("2,2");
            assert!(transfer_tableau_sum(&d, &sq).unwrap().is_zero());
            assert!(jacobi_trudi_det(&d, &sq).is_zero());
            assert!(giambelli_dual_det(&d, &sq).is_zero());
        }
    }

    #[test]
    fn worked_example_determinant() {
        for seed in 0..3 {
            let d = random_data(&sl21(), seed);
            let series = generating_series_upper(&d, 3);
            let t = |a: i64, off: i64| series.shifted_coeff(a, off);
            let det = &(&t(2, -1) * &t(1, 2)) - &t(3, 0);
            assert_eq!(transfer_tableau_sum(&d, &shape("2,1")).unwrap(), det);
            assert_eq!(jacobi_trudi_det(&d, &shape("2,1")), det);
        }
    }

    #[test]
    fn t3_relation_in_sl21() {
        for seed in 0..3 {
            let d = random_data(&sl21(), seed + 10);
            let t3 = transfer_tableau_sum(&d, &SkewShape::column(3)).unwrap();
            let t22 = transfer_tableau_sum(&d, &shape("2,2")).unwrap();
            let p = RatFun::from_poly(d.p_poly().shift(&q(2, 1)));
            assert_eq!(t3, -t22.div(&p).unwrap());
        }
    }

    #[test]
    fn triple_identity_small_shapes() {
        for g in enumerate_gradings(1, 0).unwrap() {
            let d = random_data(&g, 5);
            for sh in SkewShape::all_in_box(3, 2) {
                let ts = transfer_tableau_sum(&d, &sh).unwrap();
                assert_eq!(ts, jacobi_trudi_det(&d, &sh), "{g} {sh}");
                assert_eq!(ts, giambelli_dual_det(&d, &sh), "{g} {sh}");
            }
        }
    }

    #[test]
    fn permuting_inhomogeneities_changes_nothing() {
        let g = sl21();
        let d = random_data(&g, 8);
        let mut w = d.inhomogeneities().to_vec();
        w.reverse();
        let e = BetheData::new(g, d.all_roots().to_vec(), w).unwrap();
        let sh = shape("3,2/1");
        assert_eq!(
            transfer_tableau_sum(&d, &sh).unwrap(),
            transfer_tableau_sum(&e, &sh).unwrap()
        );
    }

    #[test]
    fn character_limit_examples() {
        let ones = vec![q(1, 1); 4];
        for g in enumerate_gradings(1, 0).unwrap() {
            assert_eq!(
                character_limit(&g, &SkewShape::column(1), &ones).unwrap(),
                q(1, 1)
            );
        }
        let x = vec![q(2, 1), q(3, 1), q(5, 1)];
        let g = sl21();
        let sh = shape("2,1");
        let direct = character_limit(&g, &sh, &x).unwrap();
        assert_eq!(direct, classical_jacobi_trudi(&g, &sh, &x));
        assert!(
            character_limit(&Grading::parse("+-").unwrap(), &shape("2,2"), &x[..2])
                .unwrap()
                .is_zero()
        );
    }

    #[test]
    fn bareiss_integer_matrix() {
        let m: Vec<Vec<BigInt>> = [[2, 0, 1], [1, 3, 2], [1, 1, 2]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(bareiss(m), BigInt::from(6));
        let swap: Vec<Vec<BigInt>> = [[0, 1], [1, 0]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(bareiss(swap), BigInt::from(-1));
    }
}
