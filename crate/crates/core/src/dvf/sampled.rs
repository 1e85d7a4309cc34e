//! Exact certification of transfer-function identities by evaluation at
//! integer points.
//!
//! Every term of a tableau sum or of either determinant is a product of one
//! `z(b; u+x)` per argument `x` of a fixed multiset `M` (the contents of the
//! shape). Multiplying `∏_x ∏_b Q_b(u+x+S_b)` over `M` clears all
//! denominators and leaves a polynomial of degree at most
//! `|M| (Σ_b N_b + N)`, so agreement at one more point than that proves the
//! identity.
//!
//! At a point we also rescale `z(b; u0+x)` by the least common denominator
//! over `b` of the values at that argument. A term picks up one factor per
//! element of `M`, so both sides scale alike and all arithmetic stays in
//! the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::data::BetheData;
use super::transfer::{bareiss, cell_offset, giambelli_entry, jacobi_trudi_entry};
use crate::certificate::{Certificate, Method};
use crate::diagrams::{col_ok, row_ok, SkewShape};
use crate::error::{Error, Result};
use crate::ratfun::{Coeff, Rational};
use crate::superalgebra::Grading;

/// Argument window and series order a sample point is prepared for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleSpec {
    /// Offsets `x` with `|x| <= radius` are tabulated.
    pub radius: i64,
    /// Highest power of `X` kept in the pointwise generating series.
    pub order: usize,
}

impl SampleSpec {
    /// Window large enough for every shape with at most `rows` rows and
    /// `cols` columns, and products of such at `u ± 1`.
    pub fn for_box(rows: usize, cols: usize) -> Self {
        let order = rows + cols;
        SampleSpec {
            radius: order as i64 + 3,
            order,
        }
    }
}

/// Rescaled dressed-vacuum data at one integer point `u0`.
#[derive(Clone, Debug)]
pub struct SamplePoint {
    u0: i64,
    lo: i64,
    signs: Vec<i64>,
    /// `[x - lo][b - 1]`: rescaled `z(b; u0 + x)`.
    z: Vec<Vec<BigInt>>,
    scales: Vec<BigInt>,
    /// `[k][x - lo]`: coefficient of `X^k` of the upper series at `u0 + x`.
    upper: Vec<Vec<BigInt>>,
    lower: Vec<Vec<BigInt>>,
}

fn rational_z(d: &BetheData<Rational>, b: usize, x: &Rational) -> Result<Rational> {
    let g = d.grading();
    let n = g.n_symbols();
    let pb = Rational::from_i64(g.p(b));
    let two = Rational::from_i64(2);
    let mut num = if b == 1 {
        d.p_value(&(x.clone() + two.clone() * pb.clone()))
    } else {
        d.p_value(x)
    };
    let mut den = Rational::one();
    if b > 1 {
        let s = Rational::from_i64(g.partial_sum(b - 1));
        num *= d.q_value(b - 1, &(x.clone() + s.clone() + two.clone() * pb.clone()));
        den *= d.q_value(b - 1, &(x.clone() + s));
    }
    if b < n {
        let s = Rational::from_i64(g.partial_sum(b));
        num *= d.q_value(b, &(x.clone() + s.clone() - two * pb));
        den *= d.q_value(b, &(x.clone() + s));
    }
    if den.is_zero() {
        return Err(Error::Pole);
    }
    Ok(num / den)
}

type Coeffs = Vec<Vec<BigInt>>;

/// Pointwise series product `c_k(x) = Σ_m f_m(x) g_{k-m}(x + 2m)`.
fn series_mul(f: &Coeffs, g: &Coeffs, order: usize, len: usize) -> Coeffs {
    (0..=order)
        .map(|k| {
            let width = len.saturating_sub(2 * k);
            (0..width)
                .map(|i| {
                    (0..=k).fold(BigInt::zero(), |acc, m| {
                        let a = &f[m][i];
                        if a.is_zero() {
                            return acc;
                        }
                        acc + a * &g[k - m][i + 2 * m]
                    })
                })
                .collect()
        })
        .collect()
}

fn series_identity(order: usize, len: usize) -> Coeffs {
    (0..=order)
        .map(|k| {
            let v = if k == 0 {
                BigInt::one()
            } else {
                BigInt::zero()
            };
            vec![v; len.saturating_sub(2 * k)]
        })
        .collect()
}

/// `(1 + sign·z X)^power` with `power = ±1`, tabulated.
fn series_factor(z: &[BigInt], sign: i64, power: i64, order: usize) -> Coeffs {
    let len = z.len();
    let mut s = series_identity(order, len);
    if order == 0 {
        return s;
    }
    if power > 0 {
        for (i, slot) in s[1].iter_mut().enumerate() {
            *slot = &z[i] * sign;
        }
        return s;
    }
    // (z X)^k = z(x) z(x+2) ... z(x+2k-2) X^k
    for k in 1..=order {
        for i in 0..s[k].len() {
            s[k][i] = &s[k - 1][i] * &z[i + 2 * (k - 1)] * -sign;
        }
    }
    s
}

impl SamplePoint {
    pub fn new(d: &BetheData<Rational>, u0: i64, spec: SampleSpec) -> Result<Self> {
        let g = d.grading();
        let n = g.n_symbols();
        let lo = -spec.radius;
        let len = (2 * spec.radius + 1) as usize;
        let mut z = Vec::with_capacity(len);
        let mut scales = Vec::with_capacity(len);
        for idx in 0..len {
            let x = Rational::from_i64(u0 + lo + idx as i64);
            let vals = (1..=n)
                .map(|b| rational_z(d, b, &x))
                .collect::<Result<Vec<_>>>()?;
            let scale = vals.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            z.push(
                vals.iter()
                    .map(|v| v.numer() * (&scale / v.denom()))
                    .collect::<Vec<BigInt>>(),
            );
            scales.push(scale);
        }
        let column = |b: usize| -> Vec<BigInt> { z.iter().map(|row| row[b - 1].clone()).collect() };
        let mut upper = series_identity(spec.order, len);
        for a in (1..=n).rev() {
            upper = series_mul(
                &upper,
                &series_factor(&column(a), 1, g.p(a), spec.order),
                spec.order,
                len,
            );
        }
        let mut lower = series_identity(spec.order, len);
        for a in 1..=n {
            lower = series_mul(
                &lower,
                &series_factor(&column(a), -1, -g.p(a), spec.order),
                spec.order,
                len,
            );
        }
        Ok(SamplePoint {
            u0,
            lo,
            signs: g.signs().iter().map(|&s| s as i64).collect(),
            z,
            scales,
            upper,
            lower,
        })
    }

    pub fn u0(&self) -> i64 {
        self.u0
    }

    fn index(&self, x: i64) -> usize {
        let i = x - self.lo;
        assert!(
            i >= 0 && (i as usize) < self.z.len(),
            "argument offset {x} outside the tabulated window"
        );
        i as usize
    }

    /// Common denominator used to rescale the z-values at `u0 + x`.
    pub fn scale(&self, x: i64) -> &BigInt {
        &self.scales[self.index(x)]
    }

    /// Rescaled `z(b; u0 + x)`.
    pub fn z(&self, b: usize, x: i64) -> &BigInt {
        &self.z[self.index(x)][b - 1]
    }

    fn series_value(c: &Coeffs, lo: i64, k: i64, x: i64) -> BigInt {
        match k {
            k if k < 0 => BigInt::zero(),
            0 => BigInt::one(),
            k => {
                let row = c
                    .get(k as usize)
                    .unwrap_or_else(|| panic!("series index {k} beyond the tabulated order"));
                let i = x - k + 1 - lo;
                assert!(
                    i >= 0 && (i as usize) < row.len(),
                    "series entry ({k}, {x}) outside the tabulated window"
                );
                row[i as usize].clone()
            }
        }
    }

    /// Rescaled `T^a(u0 + x)` from the upper series.
    pub fn upper_t(&self, a: i64, x: i64) -> BigInt {
        Self::series_value(&self.upper, self.lo, a, x)
    }

    /// Rescaled `T_m(u0 + x)` from the lower series.
    pub fn lower_t(&self, m: i64, x: i64) -> BigInt {
        Self::series_value(&self.lower, self.lo, m, x)
    }
}

/// Integer sample points `0, 1, -1, 2, -2, ...`, skipping poles.
#[derive(Clone, Debug)]
pub struct Sampler {
    data: BetheData<Rational>,
    spec: SampleSpec,
    points: Vec<SamplePoint>,
    next: u64,
}

fn candidate(i: u64) -> i64 {
    let h = i.div_ceil(2) as i64;
    if i % 2 == 1 {
        h
    } else {
        -h
    }
}

impl Sampler {
    pub fn new(data: BetheData<Rational>, spec: SampleSpec) -> Self {
        Sampler {
            data,
            spec,
            points: Vec::new(),
            next: 0,
        }
    }

    pub fn data(&self) -> &BetheData<Rational> {
        &self.data
    }

    pub fn spec(&self) -> SampleSpec {
        self.spec
    }

    /// Makes at least `n` regular points available.
    pub fn ensure(&mut self, n: usize) -> Result<()> {
        let mut misses = 0;
        while self.points.len() < n {
            let u0 = candidate(self.next);
            self.next += 1;
            match SamplePoint::new(&self.data, u0, self.spec) {
                Ok(p) => self.points.push(p),
                Err(Error::Pole) => {
                    misses += 1;
                    if misses > 4 * n + 64 {
                        return Err(Error::Pole);
                    }
                }
                Err(e) => return Err(e),
            }
        }
        Ok(())
    }

    pub fn points(&self) -> &[SamplePoint] {
        &self.points
    }

    /// Degree bound for an identity whose terms carry `zdeg` z-factors.
    pub fn degree_bound(&self, zdeg: usize) -> usize {
        identity_degree_bound(&self.data, zdeg)
    }
}

pub fn identity_degree_bound<C: Coeff>(d: &BetheData<C>, zdeg: usize) -> usize {
    zdeg * (d.total_roots() + d.n_sites())
}

/// Compares two integer-valued evaluators at `degree_bound(zdeg) + 1` points.
pub fn certify_sampled<L, R>(
    name: impl Into<String>,
    sampler: &Sampler,
    zdeg: usize,
    lhs: L,
    rhs: R,
) -> Certificate
where
    L: Fn(&SamplePoint) -> BigInt,
    R: Fn(&SamplePoint) -> BigInt,
{
    let bound = sampler.degree_bound(zdeg);
    let need = bound + 1;
    let mut cert = Certificate::new(name, Method::Sampled, false);
    cert.degree_bound = Some(bound);
    if sampler.points().len() < need {
        cert.samples = Some(sampler.points().len());
        return cert.with_detail(format!(
            "only {} sample points prepared, {} needed",
            sampler.points().len(),
            need
        ));
    }
    for (k, p) in sampler.points()[..need].iter().enumerate() {
        if lhs(p) != rhs(p) {
            cert.samples = Some(k + 1);
            return cert.with_detail(format!("sides differ at u = {}", p.u0()));
        }
    }
    cert.samples = Some(need);
    cert.passed = true;
    cert
}

struct ColumnStage {
    offsets: Vec<i64>,
    fillings: Vec<Vec<usize>>,
    /// Compatible fillings of the previous stage.
    preds: Vec<Vec<u32>>,
}

/// Column-by-column transfer matrix for the tableau sum of one shape.
pub struct TableauDp {
    stages: Vec<ColumnStage>,
    n_cells: usize,
}

fn column_fillings(g: &Grading, h: usize) -> Vec<Vec<usize>> {
    fn rec(g: &Grading, h: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == h {
            out.push(cur.clone());
            return;
        }
        for b in 1..=g.n_symbols() {
            if cur.last().is_some_and(|&t| !col_ok(g, t, b)) {
                continue;
            }
            cur.push(b);
            rec(g, h, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(g, h, &mut Vec::new(), &mut out);
    out
}

impl TableauDp {
    pub fn new(g: &Grading, sh: &SkewShape) -> Self {
        let mc = sh.mu().conjugate();
        let lc = sh.lambda().conjugate();
        let mut stages: Vec<ColumnStage> = Vec::new();
        let mut prev_rows = 1..1;
        for j in 1..=sh.mu().part(1) {
            let rows = lc.part(j) + 1..mc.part(j) + 1;
            let fillings = column_fillings(g, rows.len());
            let preds = fillings
                .iter()
                .map(|f| match stages.last() {
                    None => vec![0],
                    Some(prev) => prev
                        .fillings
                        .iter()
                        .enumerate()
                        .filter(|(_, pf)| {
                            rows.clone().all(|i| {
                                if !prev_rows.contains(&i) {
                                    return true;
                                }
                                row_ok(g, pf[i - prev_rows.start], f[i - rows.start])
                            })
                        })
                        .map(|(k, _)| k as u32)
                        .collect(),
                })
                .collect();
            stages.push(ColumnStage {
                offsets: rows.clone().map(|i| cell_offset(sh, i, j)).collect(),
                fillings,
                preds,
            });
            prev_rows = rows;
        }
        TableauDp {
            stages,
            n_cells: sh.n_cells(),
        }
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    /// Rescaled `T_{λ⊂μ}(u0 + shift)`.
    pub fn eval(&self, p: &SamplePoint, shift: i64) -> BigInt {
        let mut vals = vec![BigInt::one()];
        for st in &self.stages {
            vals = st
                .fillings
                .iter()
                .zip(&st.preds)
                .map(|(f, preds)| {
                    let sum = preds
                        .iter()
                        .fold(BigInt::zero(), |acc, &k| acc + &vals[k as usize]);
                    if sum.is_zero() {
                        return sum;
                    }
                    f.iter().zip(&st.offsets).fold(sum, |acc, (&b, &x)| {
                        let w = p.z(b, x + shift);
                        if p.signs[b - 1] < 0 {
                            -(acc * w)
                        } else {
                            acc * w
                        }
                    })
                })
                .collect();
        }
        vals.into_iter().fold(BigInt::zero(), |a, b| a + b)
    }
}

/// Rescaled upper determinant at `u0 + shift`.
pub fn sampled_jacobi_trudi(sh: &SkewShape, p: &SamplePoint, shift: i64) -> BigInt {
    let n = sh.mu().part(1);
    let m = (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    let (a, off) = jacobi_trudi_entry(sh, i, j);
                    p.upper_t(a, off + shift)
                })
                .collect()
        })
        .collect();
    bareiss(m)
}

/// Rescaled lower determinant at `u0 + shift`.
pub fn sampled_giambelli(sh: &SkewShape, p: &SamplePoint, shift: i64) -> BigInt {
    let n = sh.mu().len();
    let m = (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    let (k, off) = giambelli_entry(sh, i, j);
                    p.lower_t(k, off + shift)
                })
                .collect()
        })
        .collect();
    bareiss(m)
}

/// Sorted spectral offsets of the cells, shifted by `shift`.
pub fn content_multiset(sh: &SkewShape, shift: i64) -> Vec<i64> {
    let mut v: Vec<i64> = sh
        .cells()
        .into_iter()
        .map(|(i, j)| cell_offset(sh, i, j) + shift)
        .collect();
    v.sort_unstable();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::Partition;
    use crate::dvf::{giambelli_dual_det, jacobi_trudi_det, transfer_tableau_sum};
    use crate::superalgebra::enumerate_gradings;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn data(g: &Grading, seed: u64) -> BetheData<Rational> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        BetheData::random_exact(g, &vec![2; g.rank()], 2, &mut rng).unwrap()
    }

    fn rescale(p: &SamplePoint, sh: &SkewShape, shift: i64, v: &Rational) -> Rational {
        content_multiset(sh, shift)
            .iter()
            .fold(v.clone(), |acc, &x| {
                acc * Rational::from_integer(p.scale(x).clone())
            })
    }

    #[test]
    fn pointwise_values_match_rational_functions() {
        let spec = SampleSpec::for_box(3, 3);
        for g in enumerate_gradings(1, 0).unwrap() {
            let d = data(&g, 11);
            let p = SamplePoint::new(&d, 2, spec).unwrap();
            for text in ["2,1", "3,2/1", "2,2,1/1", "3"] {
                let sh = SkewShape::parse(text).unwrap();
                let u = Rational::from_i64(2 + 1);
                let exact = transfer_tableau_sum(&d, &sh)
                    .unwrap()
                    .shift(&Rational::from_i64(1));
                let expect = rescale(&p, &sh, 1, &exact.eval(&Rational::from_i64(2)).unwrap());
                let dp = TableauDp::new(&g, &sh);
                assert_eq!(Rational::from_integer(dp.eval(&p, 1)), expect, "{g} {text}");
                assert_eq!(
                    Rational::from_integer(sampled_jacobi_trudi(&sh, &p, 1)),
                    expect
                );
                assert_eq!(
                    Rational::from_integer(sampled_giambelli(&sh, &p, 1)),
                    expect
                );
                let jt = jacobi_trudi_det(&d, &sh).eval(&u).unwrap();
                let gb = giambelli_dual_det(&d, &sh).eval(&u).unwrap();
                assert_eq!(rescale(&p, &sh, 1, &jt), expect);
                assert_eq!(rescale(&p, &sh, 1, &gb), expect);
            }
        }
    }

    #[test]
    fn determinant_terms_share_the_content_multiset() {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for k in 0..n {
                    let mut q = p.clone();
                    q.insert(k, n - 1);
                    out.push(q);
                }
            }
            out
        }
        for sh in SkewShape::all_in_box(4, 4) {
            let n = sh.mu().part(1);
            let target = content_multiset(&sh, 0);
            for sigma in perms(n) {
                let mut args = Vec::new();
                let mut nonzero = true;
                for i in 1..=n {
                    let j = sigma[i - 1] + 1;
                    let (a, off) = jacobi_trudi_entry(&sh, i, j);
                    if a < 0 {
                        nonzero = false;
                        break;
                    }
                    // column of height a at u + off: offsets off + a + 1 - 2k
                    args.extend((1..=a).map(|k| off + a + 1 - 2 * k));
                }
                if nonzero {
                    args.sort_unstable();
                    assert_eq!(args, target, "{sh} {sigma:?}");
                }
            }
        }
    }

    #[test]
    fn certify_detects_a_wrong_identity() {
        let g = Grading::parse("+-+").unwrap();
        let mut sampler = Sampler::new(data(&g, 4), SampleSpec::for_box(2, 2));
        sampler.ensure(sampler.degree_bound(3) + 1).unwrap();
        let sh = SkewShape::straight(Partition::new(vec![2, 1]).unwrap());
        let dp = TableauDp::new(&g, &sh);
        let ok = certify_sampled(
            "jt",
            &sampler,
            3,
            |p| dp.eval(p, 0),
            |p| sampled_jacobi_trudi(&sh, p, 0),
        );
        assert!(ok.passed);
        assert_eq!(ok.samples, Some(ok.degree_bound.unwrap() + 1));
        let bad = certify_sampled(
            "jt",
            &sampler,
            3,
            |p| dp.eval(p, 0),
            |p| sampled_jacobi_trudi(&sh, p, 2),
        );
        assert!(!bad.passed);
    }
}
