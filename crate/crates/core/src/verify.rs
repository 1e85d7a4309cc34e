//! Certificate producers shared by the command line and the test suites.

use num_bigint::BigInt;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::certificate::{Certificate, Method};
use crate::diagrams::{enumerate_tableaux, SkewShape, Tableau};
use crate::dvf::sampled::{
    certify_sampled, sampled_giambelli, sampled_jacobi_trudi, SamplePoint, SampleSpec, Sampler,
    TableauDp,
};
use crate::dvf::{
    cell_offset, generating_series_lower, generating_series_upper, giambelli_dual_det,
    jacobi_trudi_det, transfer_tableau_sum, BetheData,
};
use crate::error::{Error, Result};
use crate::ratfun::Rational;
use crate::superalgebra::Grading;
use crate::tsystem::{hirota_check, restricted_relations, vanishing_check, TGrid};

/// Flips the sign of one tableau in every tableau sum it appears in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignFault {
    /// Index in enumeration order.
    pub tableau: usize,
}

/// Seed for one grading derived from a run-level seed.
pub fn grading_seed(seed: u64, g: &Grading) -> u64 {
    g.signs().iter().fold(seed ^ 0x5eed, |h, &x| {
        h.wrapping_mul(0x100_0000_01b3).wrapping_add((x + 2) as u64)
    })
}

/// Random exact data with two roots per color and two sites.
pub fn random_data(g: &Grading, seed: u64) -> Result<BetheData<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    BetheData::random_exact(g, &vec![2; g.rank()], 2, &mut rng)
}

fn shape_box(sh: &SkewShape) -> (usize, usize) {
    (sh.mu().len(), sh.mu().part(1))
}

/// A sampler whose window holds every shape inside a `rows × cols` box.
pub fn sampler_for_box(d: BetheData<Rational>, rows: usize, cols: usize) -> Sampler {
    Sampler::new(d, SampleSpec::for_box(rows, cols))
}

fn check_window(sampler: &Sampler, sh: &SkewShape) -> Result<()> {
    let (rows, cols) = shape_box(sh);
    let need = SampleSpec::for_box(rows, cols);
    let have = sampler.spec();
    if have.order < need.order || have.radius < need.radius {
        return Err(Error::InvalidShape(format!(
            "shape {sh:?} exceeds the sample window"
        )));
    }
    Ok(())
}

fn tableau_value(g: &Grading, t: &Tableau, p: &SamplePoint) -> BigInt {
    let sh = t.shape();
    t.iter().fold(BigInt::one(), |acc, ((i, j), b)| {
        let v = acc * p.z(b, cell_offset(sh, i, j));
        if g.p(b) < 0 {
            -v
        } else {
            v
        }
    })
}

/// The tableau side at a point, with an optional injected sign error.
fn tableau_side<'a>(
    g: &Grading,
    dp: &'a TableauDp,
    faulty: Option<&Tableau>,
) -> impl Fn(&SamplePoint) -> BigInt + 'a {
    let g = g.clone();
    let faulty = faulty.cloned();
    move |p| {
        let v = dp.eval(p, 0);
        match &faulty {
            Some(t) => v - tableau_value(&g, t, p) * 2,
            None => v,
        }
    }
}

fn faulty_tableau(
    g: &Grading,
    sh: &SkewShape,
    fault: Option<SignFault>,
) -> Result<Option<Tableau>> {
    let Some(f) = fault else {
        return Ok(None);
    };
    Ok(enumerate_tableaux(sh, g)?.into_iter().nth(f.tableau))
}

fn prepare(sampler: &mut Sampler, sh: &SkewShape) -> Result<()> {
    check_window(sampler, sh)?;
    let need = sampler.degree_bound(sh.n_cells()) + 1;
    sampler.ensure(need)
}

/// Tableau sum against the column determinant.
pub fn jacobi_trudi_identity(
    sampler: &mut Sampler,
    sh: &SkewShape,
    fault: Option<SignFault>,
) -> Result<Certificate> {
    prepare(sampler, sh)?;
    let g = sampler.data().grading().clone();
    let dp = TableauDp::new(&g, sh);
    let bad = faulty_tableau(&g, sh, fault)?;
    Ok(certify_sampled(
        format!("jacobi_trudi {}", shape_label(sh)),
        sampler,
        sh.n_cells(),
        tableau_side(&g, &dp, bad.as_ref()),
        |p| sampled_jacobi_trudi(sh, p, 0),
    ))
}

/// Tableau sum against the row determinant.
pub fn giambelli_identity(
    sampler: &mut Sampler,
    sh: &SkewShape,
    fault: Option<SignFault>,
) -> Result<Certificate> {
    prepare(sampler, sh)?;
    let g = sampler.data().grading().clone();
    let dp = TableauDp::new(&g, sh);
    let bad = faulty_tableau(&g, sh, fault)?;
    Ok(certify_sampled(
        format!("giambelli {}", shape_label(sh)),
        sampler,
        sh.n_cells(),
        tableau_side(&g, &dp, bad.as_ref()),
        |p| sampled_giambelli(sh, p, 0),
    ))
}

/// Both determinant identities by exact rational-function arithmetic.
pub fn triple_identity_canonical(
    d: &BetheData<Rational>,
    sh: &SkewShape,
) -> Result<Vec<Certificate>> {
    let t = transfer_tableau_sum(d, sh)?;
    let label = shape_label(sh);
    Ok(vec![
        Certificate::new(
            format!("jacobi_trudi {label}"),
            Method::Canonical,
            t == jacobi_trudi_det(d, sh),
        ),
        Certificate::new(
            format!("giambelli {label}"),
            Method::Canonical,
            t == giambelli_dual_det(d, sh),
        ),
    ])
}

/// Series coefficients against column and row tableau sums, sampled.
pub fn series_consistency(
    sampler: &mut Sampler,
    a_max: usize,
    m_max: usize,
) -> Result<Vec<Certificate>> {
    let g = sampler.data().grading().clone();
    let mut out = Vec::new();
    for (k_max, column) in [(a_max, true), (m_max, false)] {
        for k in 1..=k_max {
            let sh = if column {
                SkewShape::column(k)
            } else {
                SkewShape::row(k)
            };
            prepare(sampler, &sh)?;
            let dp = TableauDp::new(&g, &sh);
            let name = if column {
                format!("upper_series X^{k}")
            } else {
                format!("lower_series X^{k}")
            };
            out.push(certify_sampled(
                name,
                sampler,
                k,
                |p| dp.eval(p, 0),
                |p| {
                    if column {
                        p.upper_t(k as i64, 0)
                    } else {
                        p.lower_t(k as i64, 0)
                    }
                },
            ));
        }
    }
    Ok(out)
}

/// Series coefficients against tableau sums as rational functions.
pub fn series_consistency_canonical(
    d: &BetheData<Rational>,
    a_max: usize,
    m_max: usize,
) -> Result<Vec<Certificate>> {
    let upper = generating_series_upper(d, a_max);
    let lower = generating_series_lower(d, m_max);
    let mut out = Vec::new();
    for a in 1..=a_max {
        let t = transfer_tableau_sum(d, &SkewShape::column(a))?;
        out.push(Certificate::new(
            format!("upper_series X^{a}"),
            Method::Canonical,
            upper.shifted_coeff(a as i64, 0) == t,
        ));
    }
    for m in 1..=m_max {
        let t = transfer_tableau_sum(d, &SkewShape::row(m))?;
        out.push(Certificate::new(
            format!("lower_series X^{m}"),
            Method::Canonical,
            lower.shifted_coeff(m as i64, 0) == t,
        ));
    }
    Ok(out)
}

/// Grid bounds covering the bilinear relation for `a, m <= max` and the
/// vanishing and restricted relations of the grading.
pub fn tsystem_grid(d: BetheData<Rational>, max: usize) -> Result<TGrid> {
    let g = d.grading();
    let a_max = (max + 1).max(g.r() as usize + 4);
    let m_max = (max + 1).max(g.s() as usize + 4);
    TGrid::new(d, a_max, m_max)
}

pub fn hirota_suite(grid: &TGrid, max: usize) -> Result<Vec<Certificate>> {
    let mut out = Vec::new();
    for a in 1..=max {
        for m in 1..=max {
            out.push(hirota_check(grid, a, m)?);
        }
    }
    Ok(out)
}

pub fn vanishing_suite(grid: &TGrid) -> Result<Vec<Certificate>> {
    let g = grid.data().grading().clone();
    vanishing_check(grid, g.r(), g.s())
}

pub fn restricted_suite(grid: &TGrid) -> Result<Vec<Certificate>> {
    let g = grid.data().grading().clone();
    restricted_relations(grid, g.r(), g.s())
}

pub fn shape_label(sh: &SkewShape) -> String {
    let join = |p: &[usize]| {
        p.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    if sh.lambda().is_empty() {
        format!("({})", join(sh.mu().parts()))
    } else {
        format!(
            "({})/({})",
            join(sh.mu().parts()),
            join(sh.lambda().parts())
        )
    }
}
