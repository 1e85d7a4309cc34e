//! Bilinear relations among rectangular transfer functions
//! `T_m^a(u) = T_{(m^a)}(u)`.

use std::collections::BTreeMap;
use std::sync::{OnceLock, RwLock, RwLockReadGuard};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::certificate::{Certificate, Method};
use crate::diagrams::{contains_forbidden_rectangle, Partition, SkewShape};
use crate::dvf::sampled::{
    certify_sampled, content_multiset, sampled_jacobi_trudi, SamplePoint, SampleSpec, Sampler,
    TableauDp,
};
use crate::dvf::{transfer_tableau_sum, BetheData};
use crate::error::{Error, Result};
use crate::ratfun::{RatFun, Rational};

pub fn rectangle(a: usize, m: usize) -> SkewShape {
    SkewShape::straight(Partition::rectangle(a, m))
}

/// Rectangular transfer functions `T_m^a` for `0 <= a <= a_max`,
/// `0 <= m <= m_max`.
pub struct TGrid {
    a_max: usize,
    m_max: usize,
    sampler: RwLock<Sampler>,
    dps: BTreeMap<(usize, usize), TableauDp>,
    exact: Vec<OnceLock<RatFun<Rational>>>,
}

impl TGrid {
    pub fn new(data: BetheData<Rational>, a_max: usize, m_max: usize) -> Result<Self> {
        let g = data.grading().clone();
        let dps = (0..=a_max)
            .flat_map(|a| (0..=m_max).map(move |m| (a, m)))
            .map(|(a, m)| ((a, m), TableauDp::new(&g, &rectangle(a, m))))
            .collect();
        let mut sampler = Sampler::new(data, SampleSpec::for_box(a_max + 1, m_max + 1));
        sampler.ensure(1)?;
        Ok(TGrid {
            a_max,
            m_max,
            sampler: RwLock::new(sampler),
            dps,
            exact: (0..(a_max + 1) * (m_max + 1))
                .map(|_| OnceLock::new())
                .collect(),
        })
    }

    pub fn data(&self) -> BetheData<Rational> {
        self.sampler.read().expect("sampler lock").data().clone()
    }

    pub fn bounds(&self) -> (usize, usize) {
        (self.a_max, self.m_max)
    }

    /// Sample points enough for identities with `zdeg` z-factors per term.
    pub fn sampler(&self, zdeg: usize) -> Result<RwLockReadGuard<'_, Sampler>> {
        {
            let s = self.sampler.read().expect("sampler lock");
            if s.points().len() > s.degree_bound(zdeg) {
                return Ok(s);
            }
        }
        {
            let mut s = self.sampler.write().expect("sampler lock");
            let need = s.degree_bound(zdeg) + 1;
            s.ensure(need)?;
        }
        Ok(self.sampler.read().expect("sampler lock"))
    }

    fn check(&self, a: usize, m: usize) -> Result<()> {
        if a > self.a_max || m > self.m_max {
            return Err(Error::BoundExceeded {
                a,
                m,
                a_max: self.a_max,
                m_max: self.m_max,
            });
        }
        Ok(())
    }

    /// Canonical rational function `T_m^a(u)`, computed once.
    pub fn get(&self, a: usize, m: usize) -> Result<RatFun<Rational>> {
        self.check(a, m)?;
        let slot = &self.exact[a * (self.m_max + 1) + m];
        if let Some(v) = slot.get() {
            return Ok(v.clone());
        }
        let v = transfer_tableau_sum(&self.data(), &rectangle(a, m))?;
        Ok(slot.get_or_init(|| v).clone())
    }

    /// Rescaled value of `T_m^a(u0 + shift)` at a sample point.
    pub fn at(&self, a: usize, m: usize, p: &SamplePoint, shift: i64) -> BigInt {
        self.dps[&(a, m)].eval(p, shift)
    }
}

/// One side of a bilinear relation: products of two rectangles at offsets.
type Side = Vec<[(usize, usize, i64); 2]>;

fn side_contents(side: &Side) -> Vec<Vec<i64>> {
    side.iter()
        .map(|pair| {
            let mut v: Vec<i64> = pair
                .iter()
                .flat_map(|&(a, m, s)| content_multiset(&rectangle(a, m), s))
                .collect();
            v.sort_unstable();
            v
        })
        .collect()
}

fn certify_bilinear(grid: &TGrid, name: String, lhs: Side, rhs: Side) -> Result<Certificate> {
    for &(a, m, _) in lhs.iter().chain(&rhs).flatten() {
        grid.check(a, m)?;
    }
    let contents: Vec<Vec<i64>> = side_contents(&lhs)
        .into_iter()
        .chain(side_contents(&rhs))
        .collect();
    if contents.windows(2).any(|w| w[0] != w[1]) {
        return Ok(Certificate::new(name, Method::Sampled, false)
            .with_detail("terms do not share one argument multiset; rescaling is not valid"));
    }
    let zdeg = contents[0].len();
    let eval = |side: &Side, p: &SamplePoint| -> BigInt {
        side.iter().fold(BigInt::zero(), |acc, pair| {
            acc + grid.at(pair[0].0, pair[0].1, p, pair[0].2)
                * grid.at(pair[1].0, pair[1].1, p, pair[1].2)
        })
    };
    Ok(certify_sampled(
        name,
        &*grid.sampler(zdeg)?,
        zdeg,
        |p| eval(&lhs, p),
        |p| eval(&rhs, p),
    ))
}

/// `T_m^a(u-1) T_m^a(u+1) = T_{m+1}^a T_{m-1}^a + T_m^{a-1} T_m^{a+1}`.
pub fn hirota_check(grid: &TGrid, a: usize, m: usize) -> Result<Certificate> {
    assert!(a >= 1 && m >= 1, "the bilinear relation needs a, m >= 1");
    certify_bilinear(
        grid,
        format!("hirota a={a} m={m}"),
        vec![[(a, m, -1), (a, m, 1)]],
        vec![
            [(a, m + 1, 0), (a, m - 1, 0)],
            [(a - 1, m, 0), (a + 1, m, 0)],
        ],
    )
}

/// Exact canonical version of [`hirota_check`] for small grids.
pub fn hirota_check_canonical(grid: &TGrid, a: usize, m: usize) -> Result<Certificate> {
    let one = Rational::from_integer(1.into());
    let t = |a, m| grid.get(a, m);
    let lhs = &t(a, m)?.shift(&-one.clone()) * &t(a, m)?.shift(&one);
    let rhs = &(&t(a, m + 1)? * &t(a, m - 1)?) + &(&t(a - 1, m)? * &t(a + 1, m)?);
    Ok(Certificate::new(
        format!("hirota a={a} m={m}"),
        Method::Canonical,
        lhs == rhs,
    ))
}

/// `T_m^a ≡ 0` for `a ∈ {r+2, r+3}`, `m ∈ {s+2, s+3}`: no admissible
/// tableau exists and the upper determinant vanishes identically. The
/// neighbours `T_m^{r+1}` and `T_{s+1}^a` are checked to be nonzero.
pub fn vanishing_check(grid: &TGrid, r: i64, s: i64) -> Result<Vec<Certificate>> {
    let data = grid.data();
    let g = data.grading();
    let (ra, sm) = ((r + 2) as usize, (s + 2) as usize);
    let mut out = Vec::new();
    for a in ra..=ra + 1 {
        for m in sm..=sm + 1 {
            grid.check(a, m)?;
            let sh = rectangle(a, m);
            let sampler = grid.sampler(sh.n_cells())?;
            let empty = contains_forbidden_rectangle(&sh, g.r(), g.s())
                && grid.dps[&(a, m)].eval(&sampler.points()[0], 0).is_zero();
            out.push(Certificate::new(
                format!("vanishing tableaux a={a} m={m}"),
                Method::Combinatorial,
                empty,
            ));
            out.push(certify_sampled(
                format!("vanishing determinant a={a} m={m}"),
                &sampler,
                sh.n_cells(),
                |p| sampled_jacobi_trudi(&sh, p, 0),
                |_| BigInt::zero(),
            ));
        }
    }
    let sampler = grid.sampler(0)?;
    let p = &sampler.points()[0];
    let boundary = (sm..=sm + 1)
        .map(|m| (ra - 1, m))
        .chain((ra..=ra + 1).map(|a| (a, sm - 1)));
    for (a, m) in boundary {
        grid.check(a, m)?;
        out.push(
            Certificate::new(
                format!("nonvanishing a={a} m={m}"),
                Method::Numeric,
                !grid.at(a, m, p, 0).is_zero(),
            )
            .with_detail(format!("evaluated at u = {}", p.u0())),
        );
    }
    Ok(out)
}

/// The two-term relations on the edges of the vanishing region, for
/// `m ∈ {s+2, s+3}` and `a ∈ {r+2, r+3}`.
pub fn restricted_relations(grid: &TGrid, r: i64, s: i64) -> Result<Vec<Certificate>> {
    let (a0, m0) = ((r + 1) as usize, (s + 1) as usize);
    let mut out = Vec::new();
    for m in m0 + 1..=m0 + 2 {
        out.push(certify_bilinear(
            grid,
            format!("restricted a={a0} m={m}"),
            vec![[(a0, m, -1), (a0, m, 1)]],
            vec![[(a0, m + 1, 0), (a0, m - 1, 0)]],
        )?);
    }
    for a in a0 + 1..=a0 + 2 {
        out.push(certify_bilinear(
            grid,
            format!("restricted a={a} m={m0}"),
            vec![[(a, m0, -1), (a, m0, 1)]],
            vec![[(a - 1, m0, 0), (a + 1, m0, 0)]],
        )?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superalgebra::{enumerate_gradings, Grading};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid(g: &Grading, seed: u64, a_max: usize, m_max: usize) -> TGrid {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = BetheData::random_exact(g, &vec![1; g.rank()], 1, &mut rng).unwrap();
        TGrid::new(d, a_max, m_max).unwrap()
    }

    #[test]
    fn hirota_sl11_both_methods() {
        for g in enumerate_gradings(0, 0).unwrap() {
            let t = grid(&g, 1, 2, 2);
            assert!(hirota_check(&t, 1, 1).unwrap().passed);
            assert!(hirota_check_canonical(&t, 1, 1).unwrap().passed);
        }
    }

    #[test]
    fn hirota_sl21_a2_m2() {
        let t = grid(&Grading::parse("+-+").unwrap(), 2, 3, 3);
        let c = hirota_check(&t, 2, 2).unwrap();
        assert!(c.passed, "{c:?}");
        assert_eq!(c.samples, Some(c.degree_bound.unwrap() + 1));
    }

    #[test]
    fn grid_bounds_are_enforced() {
        let t = grid(&Grading::parse("+-").unwrap(), 3, 2, 2);
        assert_eq!(
            hirota_check(&t, 2, 2).unwrap_err(),
            Error::BoundExceeded {
                a: 2,
                m: 3,
                a_max: 2,
                m_max: 2
            }
        );
        assert!(t.get(3, 0).is_err());
        assert_eq!(t.get(0, 2).unwrap(), RatFun::one());
    }

    #[test]
    fn vanishing_and_restricted_sl11() {
        let g = Grading::parse("+-").unwrap();
        let t = grid(&g, 4, 4, 4);
        assert!(t.get(2, 2).unwrap().is_zero());
        for c in vanishing_check(&t, 0, 0).unwrap() {
            assert!(c.passed, "{c:?}");
        }
        for c in restricted_relations(&t, 0, 0).unwrap() {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn vanishing_sl21_boundary() {
        let g = Grading::parse("+-+").unwrap();
        let t = grid(&g, 5, 4, 3);
        assert!(t.get(3, 2).unwrap().is_zero());
        assert!(!t.get(3, 1).unwrap().is_zero());
        assert!(vanishing_check(&t, 1, 0).unwrap().iter().all(|c| c.passed));
    }

    #[test]
    fn trivial_data_restricted_relations() {
        let g = Grading::parse("+-+").unwrap();
        let t = TGrid::new(BetheData::empty(g), 5, 4).unwrap();
        assert!(restricted_relations(&t, 1, 0)
            .unwrap()
            .iter()
            .all(|c| c.passed));
    }
}
