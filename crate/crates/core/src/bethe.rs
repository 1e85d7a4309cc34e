//! Bethe ansatz equations: residuals, a multi-start Newton solver, and the
//! residue checks behind pole-freeness of dressed vacuum forms.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagrams::{SkewShape, Tableau};
use crate::dvf::{cell_offset, tableau_terms, BetheData, Factor, FactorKind, Term};
use crate::error::{Error, Result};
use crate::superalgebra::Grading;

type C64 = Complex64;

/// Root counts per color and the inhomogeneities of an `N`-site chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BAESystem {
    pub grading: Grading,
    /// `N_a` for colors `a = 1..=r+s+1`.
    pub counts: Vec<usize>,
    pub inhomogeneities: Vec<C64>,
}

impl BAESystem {
    pub fn new(grading: Grading, counts: Vec<usize>, inhomogeneities: Vec<C64>) -> Result<Self> {
        if counts.len() != grading.rank() {
            return Err(Error::RootCountMismatch {
                color: 0,
                expected: grading.rank(),
                got: counts.len(),
            });
        }
        Ok(BAESystem {
            grading,
            counts,
            inhomogeneities,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.inhomogeneities.len()
    }

    pub fn total_roots(&self) -> usize {
        self.counts.iter().sum()
    }

    fn check_roots(&self, roots: &[Vec<C64>]) -> Result<()> {
        if roots.len() != self.counts.len() {
            return Err(Error::RootCountMismatch {
                color: 0,
                expected: self.counts.len(),
                got: roots.len(),
            });
        }
        for (a, (r, &n)) in roots.iter().zip(&self.counts).enumerate() {
            if r.len() != n {
                return Err(Error::RootCountMismatch {
                    color: a + 1,
                    expected: n,
                    got: r.len(),
                });
            }
        }
        Ok(())
    }

    pub fn data(&self, roots: &[Vec<C64>]) -> Result<BetheData<C64>> {
        self.check_roots(roots)?;
        BetheData::new(
            self.grading.clone(),
            roots.to_vec(),
            self.inhomogeneities.clone(),
        )
    }

    fn unflatten(&self, x: &[C64]) -> Vec<Vec<C64>> {
        let mut it = x.iter().copied();
        self.counts
            .iter()
            .map(|&n| it.by_ref().take(n).collect())
            .collect()
    }
}

/// A converged root configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BAESolution {
    /// Roots grouped by color, each group sorted.
    pub roots: Vec<Vec<C64>>,
    /// Max norm of the relative defect.
    pub residual: f64,
    /// Colors in which two roots coincide within the deduplication tolerance.
    pub collided: Vec<usize>,
}

impl BAESolution {
    pub fn data(&self, sys: &BAESystem) -> Result<BetheData<C64>> {
        sys.data(&self.roots)
    }
}

/// Both sides of the cleared equation at one root: `(lhs, rhs)` with the
/// defect `lhs - rhs`.
fn cleared_sides(d: &BetheData<C64>, a: usize, u: C64) -> (C64, C64) {
    let g = d.grading();
    let sigma = if g.degree(a) == 1 { -1.0 } else { 1.0 };
    let (l_num, l_den) = if a == 1 {
        let zeta = g.p(1) as f64;
        (d.p_value(&(u + zeta)), d.p_value(&(u - zeta)))
    } else {
        (C64::new(1.0, 0.0), C64::new(1.0, 0.0))
    };
    let mut r_num = C64::new(1.0, 0.0);
    let mut r_den = C64::new(1.0, 0.0);
    for b in 1..=g.rank() {
        let c = g.pairing(a, b);
        if c == 0 {
            continue;
        }
        r_num *= d.q_value(b, &(u + c as f64));
        r_den *= d.q_value(b, &(u - c as f64));
    }
    (-l_num * r_den, sigma * l_den * r_num)
}

fn raw_defects(sys: &BAESystem, roots: &[Vec<C64>]) -> Result<Vec<(C64, f64)>> {
    let d = sys.data(roots)?;
    let mut out = Vec::with_capacity(sys.total_roots());
    for a in 1..=sys.grading.rank() {
        for &u in d.roots(a) {
            let (l, r) = cleared_sides(&d, a, u);
            out.push((l - r, l.norm() + r.norm()));
        }
    }
    Ok(out)
}

/// Per-equation defects `(L - R) / (|L| + |R|)` of the cleared equations
/// `-P(u+ζ) ∏ Q_b(u-c_ab) = (-1)^{deg α_a} P(u-ζ) ∏ Q_b(u+c_ab)`, in color
/// order.
pub fn bae_residual(sys: &BAESystem, roots: &[Vec<C64>]) -> Result<Vec<C64>> {
    raw_defects(sys, roots)?
        .into_iter()
        .enumerate()
        .map(|(i, (f, scale))| {
            if scale == 0.0 {
                Err(Error::RootCollision(format!(
                    "both sides vanish at equation {i}"
                )))
            } else {
                Ok(f / scale)
            }
        })
        .collect()
}

fn max_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Multi-start Newton settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub seeds: usize,
    pub seed: u64,
    pub tol: f64,
    pub dedupe_tol: f64,
    pub max_iter: usize,
    pub max_halvings: usize,
    /// Seeds lie in `[-box_radius, box_radius]²`.
    pub box_radius: f64,
    pub cap: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            seeds: 64,
            seed: 0,
            tol: 1e-10,
            dedupe_tol: 1e-6,
            max_iter: 200,
            max_halvings: 30,
            box_radius: 3.0,
            cap: 8,
        }
    }
}

/// What happened to one Newton start.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum SeedOutcome {
    Converged { solution: usize },
    NoConvergence { residual: f64 },
    SingularJacobian { iteration: usize },
    Escaped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub solutions: Vec<BAESolution>,
    pub seeds: Vec<SeedOutcome>,
}

/// Radical inverse of `i` in base `b`.
fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= b as f64;
        r += f * (i % b) as f64;
        i /= b;
    }
    r
}

fn primes(n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(n);
    let mut c = 2u64;
    while out.len() < n {
        if out.iter().all(|&p| !c.is_multiple_of(p)) {
            out.push(c);
        }
        c += 1;
    }
    out
}

/// Point `index` of the Halton sequence, mapped to `dim` complex numbers.
fn halton_seed(index: u64, dim: usize, radius: f64) -> Vec<C64> {
    let bases = primes(2 * dim);
    (0..dim)
        .map(|k| {
            let re = radical_inverse(index, bases[2 * k]);
            let im = radical_inverse(index, bases[2 * k + 1]);
            C64::new(radius * (2.0 * re - 1.0), radius * (2.0 * im - 1.0))
        })
        .collect()
}

/// Extra Newton steps taken after the tolerance is first met.
const POLISH_STEPS: usize = 3;

enum NewtonEnd {
    Converged(Vec<C64>, f64),
    Stalled(f64),
    Singular(usize),
    Escaped,
}

/// Roots beyond this multiple of the seed box count as escaped to infinity,
/// where the relative defect can decay without a solution.
const ESCAPE_FACTOR: f64 = 1e4;

fn newton(sys: &BAESystem, mut x: Vec<C64>, cfg: &SolveConfig) -> NewtonEnd {
    let f_of = |x: &[C64]| -> Option<Vec<C64>> {
        raw_defects(sys, &sys.unflatten(x))
            .ok()
            .map(|v| v.into_iter().map(|(f, _)| f).collect())
    };
    let rel = |x: &[C64]| -> f64 {
        bae_residual(sys, &sys.unflatten(x)).map_or(f64::INFINITY, |v| max_norm(&v))
    };
    let n = x.len();
    let Some(mut f) = f_of(&x) else {
        return NewtonEnd::Stalled(f64::INFINITY);
    };
    let mut norm = DVector::from_vec(f.clone()).norm();
    let mut polish = 0;
    for it in 0..cfg.max_iter {
        let r = rel(&x);
        if r < cfg.tol {
            polish += 1;
            if polish > POLISH_STEPS {
                return NewtonEnd::Converged(x, r);
            }
        }
        let mut jac = DMatrix::<C64>::zeros(n, n);
        for j in 0..n {
            let h = 1e-6 * (1.0 + x[j].norm());
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let (Some(fp), Some(fm)) = (f_of(&xp), f_of(&xm)) else {
                return NewtonEnd::Singular(it);
            };
            for i in 0..n {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let Some(step) = jac.lu().solve(&DVector::from_vec(f.clone())) else {
            return NewtonEnd::Singular(it);
        };
        if step.iter().any(|s| !s.is_finite()) {
            return NewtonEnd::Singular(it);
        }
        if x.iter()
            .any(|z| z.norm() > ESCAPE_FACTOR * (1.0 + cfg.box_radius))
        {
            return NewtonEnd::Escaped;
        }
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..=cfg.max_halvings {
            let trial: Vec<C64> = x
                .iter()
                .zip(step.iter())
                .map(|(xi, si)| xi - si * t)
                .collect();
            if let Some(ft) = f_of(&trial) {
                let nt = DVector::from_vec(ft.clone()).norm();
                if nt < norm {
                    x = trial;
                    f = ft;
                    norm = nt;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            let r = rel(&x);
            return if r < cfg.tol {
                NewtonEnd::Converged(x, r)
            } else {
                NewtonEnd::Stalled(r)
            };
        }
    }
    let r = rel(&x);
    if r < cfg.tol {
        NewtonEnd::Converged(x, r)
    } else {
        NewtonEnd::Stalled(r)
    }
}

fn lex(a: &C64, b: &C64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn canonical(sys: &BAESystem, x: &[C64], residual: f64, dedupe: f64) -> BAESolution {
    let mut roots = sys.unflatten(x);
    let mut collided = Vec::new();
    for (a, group) in roots.iter_mut().enumerate() {
        group.sort_by(lex);
        let close = group
            .iter()
            .enumerate()
            .any(|(i, u)| group[i + 1..].iter().any(|v| (u - v).norm() < dedupe));
        if close {
            collided.push(a + 1);
        }
    }
    BAESolution {
        roots,
        residual,
        collided,
    }
}

fn distance(a: &BAESolution, b: &BAESolution) -> f64 {
    a.roots
        .iter()
        .flatten()
        .zip(b.roots.iter().flatten())
        .map(|(u, v)| (u - v).norm())
        .fold(0.0, f64::max)
}

/// Distinct converged solutions from deterministic Halton starts.
pub fn solve(sys: &BAESystem, cfg: &SolveConfig) -> Result<SolveReport> {
    let total = sys.total_roots();
    if total > cfg.cap {
        return Err(Error::SystemTooLarge {
            total,
            cap: cfg.cap,
        });
    }
    if total == 0 {
        let roots = vec![Vec::new(); sys.counts.len()];
        return Ok(SolveReport {
            solutions: vec![BAESolution {
                roots,
                residual: 0.0,
                collided: Vec::new(),
            }],
            seeds: vec![SeedOutcome::Converged { solution: 0 }],
        });
    }
    let start = 1 + cfg.seed.wrapping_mul(cfg.seeds as u64 + 1);
    let ends: Vec<NewtonEnd> = (0..cfg.seeds as u64)
        .into_par_iter()
        .map(|i| newton(sys, halton_seed(start + i, total, cfg.box_radius), cfg))
        .collect();
    let mut solutions: Vec<BAESolution> = Vec::new();
    let mut seeds = Vec::with_capacity(ends.len());
    for end in ends {
        seeds.push(match end {
            NewtonEnd::Converged(x, r) => {
                let s = canonical(sys, &x, r, cfg.dedupe_tol);
                let idx = match solutions
                    .iter()
                    .position(|t| distance(t, &s) < cfg.dedupe_tol)
                {
                    Some(i) => i,
                    None => {
                        solutions.push(s);
                        solutions.len() - 1
                    }
                };
                SeedOutcome::Converged { solution: idx }
            }
            NewtonEnd::Stalled(r) => SeedOutcome::NoConvergence { residual: r },
            NewtonEnd::Singular(it) => SeedOutcome::SingularJacobian { iteration: it },
            NewtonEnd::Escaped => SeedOutcome::Escaped,
        });
    }
    Ok(SolveReport { solutions, seeds })
}

/// A pole of the dressed vacuum form: `Q_color(u + shift)` vanishing at its
/// `root`-th zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PoleSite {
    pub color: usize,
    pub shift: i64,
    pub root: usize,
}

impl PoleSite {
    pub fn location(&self, d: &BetheData<C64>) -> C64 {
        d.roots(self.color)[self.root] - self.shift as f64
    }
}

const OVERLAP_TOL: f64 = 1e-9;

/// Residue of one term at a simple pole site.
fn term_residue(d: &BetheData<C64>, t: &Term, site: PoleSite) -> Result<C64> {
    let pole = Factor::q(site.color, site.shift);
    let order = match t.powers.get(&pole) {
        Some(&e) if e < 0 => (-e) as u32,
        _ => return Ok(C64::new(0.0, 0.0)),
    };
    if order > 1 {
        return Err(Error::HigherOrderPole {
            order: order as usize,
        });
    }
    let u0 = site.location(d);
    let mut num = C64::new(t.sign as f64, 0.0);
    let mut den = C64::new(1.0, 0.0);
    for (&f, &e) in &t.powers {
        let v = if f == pole {
            f.eval_without(d, &u0, site.root)
        } else {
            f.eval(d, &u0)
        };
        if e < 0 && v.norm() < OVERLAP_TOL {
            return Err(Error::OverlappingPoles(format!(
                "{f} also vanishes at the pole of {pole}"
            )));
        }
        for _ in 0..e.unsigned_abs() {
            if e > 0 {
                num *= v;
            } else {
                den *= v;
            }
        }
    }
    Ok(num / den)
}

/// Every denominator zero of the given terms.
fn pole_sites(d: &BetheData<C64>, terms: &[Term]) -> Vec<PoleSite> {
    let mut sites = std::collections::BTreeSet::new();
    for t in terms {
        for (f, _) in t.denominator() {
            if let FactorKind::Q(color) = f.kind {
                for root in 0..d.n_roots(color) {
                    sites.insert(PoleSite {
                        color,
                        shift: f.shift,
                        root,
                    });
                }
            }
        }
    }
    sites.into_iter().collect()
}

/// `|Σ residues| / max(1, Σ |residues|)`, so that roundoff in large
/// canceling terms is not mistaken for a pole.
fn residue_sum(d: &BetheData<C64>, terms: &[Term], site: PoleSite) -> Result<f64> {
    let mut sum = C64::new(0.0, 0.0);
    let mut size = 0.0;
    for t in terms {
        let r = term_residue(d, t, site)?;
        sum += r;
        size += r.norm();
    }
    Ok(sum.norm() / size.max(1.0))
}

/// Scaled `max_k |Res (p_b z(b;u) + p_{b+1} z(b+1;u))|` at `u = u_k^{(b)} - Σ_{j≤b} p_j`.
pub fn pair_residue_check(d: &BetheData<C64>, b: usize) -> Result<f64> {
    let g = d.grading();
    if b == 0 || b > g.rank() {
        return Err(Error::RootIndexOutOfRange {
            index: b,
            rank: g.rank(),
        });
    }
    let signed = |a: usize| {
        let mut t = Term::z(g, a, 0);
        t.sign = g.p(a) as i8;
        t
    };
    let terms = [signed(b), signed(b + 1)];
    let shift = g.partial_sum(b);
    (0..d.n_roots(b)).try_fold(0.0f64, |m, root| {
        let site = PoleSite {
            color: b,
            shift,
            root,
        };
        Ok(m.max(residue_sum(d, &terms, site)?))
    })
}

/// Largest scaled residue of `T_{λ⊂μ}(u)` over all candidate poles.
pub fn shape_pole_residue(d: &BetheData<C64>, sh: &SkewShape) -> Result<f64> {
    let terms: Vec<Term> = tableau_terms(d.grading(), sh)?
        .into_iter()
        .map(|(_, t)| t.reduced(d))
        .collect();
    pole_sites(d, &terms)
        .into_iter()
        .try_fold(0.0f64, |m, site| Ok(m.max(residue_sum(d, &terms, site)?)))
}

/// Largest scaled residue of `T^a(u)` over all candidate poles.
pub fn pole_freeness_check(d: &BetheData<C64>, a: usize) -> Result<f64> {
    shape_pole_residue(d, &SkewShape::column(a))
}

/// Terms of a tableau sum sharing one pole `Q_color(u + shift)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoleGroup {
    pub color: usize,
    /// The pole sits at `u_k^{(color)} + label`.
    pub label: i64,
    /// Indices into the tableau list.
    pub members: Vec<usize>,
    /// Max over roots of the summed residue; absent when the color has no roots.
    pub residue: Option<f64>,
}

/// Bethe-strap structure of a tableau sum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CancellationReport {
    pub tableaux: Vec<Tableau>,
    /// Groups of the requested color.
    pub groups: Vec<PoleGroup>,
    /// `(from, to, color, label)` for every pair of terms sharing a pole.
    pub edges: Vec<(usize, usize, usize, i64)>,
}

impl CancellationReport {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph strap {\n  node [shape=box];\n");
        for (i, t) in self.tableaux.iter().enumerate() {
            let _ = writeln!(s, "  t{i} [label=\"{t}\"];");
        }
        for &(from, to, color, label) in &self.edges {
            let _ = writeln!(s, "  t{from} -> t{to} [label=\"({color},{label})\"];");
        }
        s.push_str("}\n");
        s
    }
}

/// Groups the terms of `T_{λ⊂μ}` by shared pole and sums residues of color `b`.
pub fn cancellation_pairs(
    d: &BetheData<C64>,
    sh: &SkewShape,
    b: usize,
) -> Result<CancellationReport> {
    let pairs = tableau_terms(d.grading(), sh)?;
    let mut by_pole: BTreeMap<(usize, i64), Vec<usize>> = BTreeMap::new();
    for (i, (_, t)) in pairs.iter().enumerate() {
        for (f, _) in t.denominator() {
            if let FactorKind::Q(color) = f.kind {
                by_pole.entry((color, -f.shift)).or_default().push(i);
            }
        }
    }
    let terms: Vec<Term> = pairs.iter().map(|(_, t)| t.clone()).collect();
    let g = d.grading();
    let mut edges = Vec::new();
    for (i, (ti, term_i)) in pairs.iter().enumerate() {
        for (j, (tj, term_j)) in pairs.iter().enumerate() {
            let diff: Vec<_> = ti
                .iter()
                .zip(tj.iter())
                .filter(|(x, y)| x.1 != y.1)
                .collect();
            let [(((r, c), low), (_, high))] = diff[..] else {
                continue;
            };
            if high != low + 1 {
                continue;
            }
            let pole = Factor::q(low, cell_offset(sh, r, c) + g.partial_sum(low));
            let shared = |t: &Term| t.powers.get(&pole).is_some_and(|&e| e < 0);
            if shared(term_i) && shared(term_j) {
                edges.push((i, j, low, -pole.shift));
            }
        }
    }
    let mut groups = Vec::new();
    for (&(color, label), members) in &by_pole {
        if color != b {
            continue;
        }
        let residue = if d.n_roots(color) == 0 {
            None
        } else {
            let group: Vec<Term> = members.iter().map(|&i| terms[i].clone()).collect();
            let mut m = 0.0f64;
            for root in 0..d.n_roots(color) {
                let site = PoleSite {
                    color,
                    shift: -label,
                    root,
                };
                m = m.max(residue_sum(d, &group, site)?);
            }
            Some(m)
        };
        groups.push(PoleGroup {
            color,
            label,
            members: members.clone(),
            residue,
        });
    }
    edges.sort();
    Ok(CancellationReport {
        tableaux: pairs.into_iter().map(|(t, _)| t).collect(),
        groups,
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn sl2() -> BAESystem {
        BAESystem::new(Grading::parse("++").unwrap(), vec![1], vec![c(0.0), c(0.0)]).unwrap()
    }

    /// sl(1|2) family that stays feasible along the particle-hole chain.
    pub(crate) fn sl12(grading: &str) -> BAESystem {
        let counts = match grading {
            "+--" | "-+-" => vec![2, 1],
            _ => vec![2, 0],
        };
        BAESystem::new(
            Grading::parse(grading).unwrap(),
            counts,
            [0.1, -0.3, 0.25, 0.05].into_iter().map(c).collect(),
        )
        .unwrap()
    }

    #[test]
    fn sl2_oracle_defect_vanishes() {
        let r = bae_residual(&sl2(), &[vec![c(0.0)]]).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].norm() < 1e-15);
        assert!(bae_residual(&sl2(), &[vec![c(0.7)]]).unwrap()[0].norm() > 1e-3);
    }

    #[test]
    fn wrong_counts_rejected() {
        assert!(matches!(
            bae_residual(&sl2(), &[vec![]]),
            Err(Error::RootCountMismatch { .. })
        ));
    }

    #[test]
    fn sl2_solver_finds_zero() {
        let rep = solve(&sl2(), &SolveConfig::default()).unwrap();
        assert!(rep
            .solutions
            .iter()
            .any(|s| s.roots[0][0].norm() < 1e-10 && s.residual < 1e-10));
    }

    #[test]
    fn empty_system_has_the_empty_solution() {
        let sys = BAESystem::new(Grading::parse("+-+").unwrap(), vec![0, 0], vec![c(0.2)]).unwrap();
        let rep = solve(&sys, &SolveConfig::default()).unwrap();
        assert_eq!(rep.solutions.len(), 1);
        assert!(bae_residual(&sys, &rep.solutions[0].roots)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn over_cap_refused() {
        let sys = BAESystem::new(Grading::parse("++").unwrap(), vec![9], vec![c(0.0)]).unwrap();
        assert!(matches!(
            solve(&sys, &SolveConfig::default()),
            Err(Error::SystemTooLarge { .. })
        ));
    }

    #[test]
    fn infeasible_system_yields_nothing() {
        for gr in ["+--", "-+-", "--+"] {
            let sys = BAESystem::new(
                Grading::parse(gr).unwrap(),
                vec![1, 1],
                vec![c(0.1), c(-0.2)],
            )
            .unwrap();
            let rep = solve(&sys, &SolveConfig::default()).unwrap();
            assert!(rep.solutions.is_empty(), "{gr}: {:?}", rep.solutions);
        }
    }

    #[test]
    fn solver_is_deterministic() {
        let sys = sl12("+--");
        let a = solve(&sys, &SolveConfig::default()).unwrap();
        let b = solve(&sys, &SolveConfig::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn solved_systems_are_pole_free() {
        for gr in ["+--", "-+-", "--+"] {
            let sys = sl12(gr);
            let rep = solve(&sys, &SolveConfig::default()).unwrap();
            let good: Vec<_> = rep
                .solutions
                .iter()
                .filter(|s| s.collided.is_empty())
                .collect();
            assert!(!good.is_empty(), "{gr}");
            for s in good {
                assert!(s.residual < 1e-10);
                let d = s.data(&sys).unwrap();
                for b in 1..=2 {
                    assert!(pair_residue_check(&d, b).unwrap() < 1e-9, "{gr} b={b}");
                }
                for a in 1..=3 {
                    assert!(pole_freeness_check(&d, a).unwrap() < 1e-8, "{gr} a={a}");
                }
            }
        }
    }

    #[test]
    fn off_shell_residues_do_not_vanish() {
        let sys = sl12("-+-");
        let d = sys.data(&[vec![c(0.31), c(-0.77)], vec![c(0.12)]]).unwrap();
        assert!(pair_residue_check(&d, 1).unwrap() > 1e-3);
        assert!(pole_freeness_check(&d, 1).unwrap() > 1e-3);
        let rep = cancellation_pairs(&d, &SkewShape::column(1), 1).unwrap();
        assert!(rep.groups.iter().any(|g| g.residue.unwrap() > 1e-3));
    }

    #[test]
    fn no_roots_means_no_poles() {
        let d = BetheData::<C64>::new(
            Grading::parse("+-+").unwrap(),
            vec![vec![], vec![]],
            vec![c(0.3)],
        )
        .unwrap();
        assert_eq!(pair_residue_check(&d, 1).unwrap(), 0.0);
        assert_eq!(pole_freeness_check(&d, 2).unwrap(), 0.0);
    }

    #[test]
    fn permuting_roots_keeps_residual() {
        let sys = sl12("+--");
        let a = bae_residual(&sys, &[vec![c(0.3), c(-0.5)], vec![c(0.9)]]).unwrap();
        let b = bae_residual(&sys, &[vec![c(-0.5), c(0.3)], vec![c(0.9)]]).unwrap();
        assert!((max_norm(&a) - max_norm(&b)).abs() < 1e-15);
    }

    #[test]
    fn single_box_strap_is_a_chain() {
        for gr in ["+-+", "++--", "-+-+"] {
            let g = Grading::parse(gr).unwrap();
            let d = BetheData::<C64>::empty(g.clone());
            let rep = cancellation_pairs(&d, &SkewShape::column(1), 1).unwrap();
            let chain: Vec<(usize, usize, usize)> = rep
                .edges
                .iter()
                .map(|&(f, t, col, _)| (f, t, col))
                .collect();
            let want: Vec<_> = (0..g.rank()).map(|b| (b, b + 1, b + 1)).collect();
            assert_eq!(chain, want, "{gr}");
        }
    }

    #[test]
    fn strap_matches_figure() {
        let g = Grading::parse("+-+").unwrap();
        let d = BetheData::<C64>::empty(g);
        let sh = SkewShape::parse("2,1").unwrap();
        let rep = cancellation_pairs(&d, &sh, 1).unwrap();
        let names: Vec<String> = rep.tableaux.iter().map(|t| t.to_string()).collect();
        let idx = |s: &str| names.iter().position(|n| n == s).unwrap();
        let mut want = vec![
            (idx("1 1 / 2"), idx("1 1 / 3"), 2, 2),
            (idx("1 1 / 2"), idx("1 2 / 2"), 1, -3),
            (idx("1 1 / 3"), idx("1 2 / 3"), 1, -3),
            (idx("1 2 / 2"), idx("1 2 / 3"), 2, 2),
            (idx("1 2 / 2"), idx("1 3 / 2"), 2, -2),
            (idx("1 2 / 3"), idx("1 3 / 3"), 2, -2),
            (idx("1 3 / 2"), idx("1 3 / 3"), 2, 2),
            (idx("1 3 / 2"), idx("2 3 / 2"), 1, -1),
            (idx("1 3 / 3"), idx("2 3 / 3"), 1, -1),
            (idx("2 3 / 2"), idx("2 3 / 3"), 2, 2),
        ];
        want.sort();
        assert_eq!(rep.edges, want);
        assert!(rep.to_dot().contains("[label=\"(2,2)\"]"));
    }
}
