//! Particle-hole transformation of Bethe roots across an odd simple root.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bethe::{bae_residual, BAESolution, BAESystem};
use crate::dvf::BetheData;
use crate::error::{Error, Result};
use crate::ratfun::{Coeff, Poly};
use crate::superalgebra::Grading;

type C64 = Complex64;

/// `L(z+p_b) R(z+p_{b+1}) - L(z-p_b) R(z-p_{b+1})` with `L = P_1` for `b = 1`
/// and `Q_{b-1}` otherwise, and `R = Q_{b+1}` (the constant 1 past the last
/// color).
pub fn f_poly<C: Coeff>(d: &BetheData<C>, b: usize) -> Result<Poly<C>> {
    let g = d.grading();
    if b == 0 || b > g.rank() {
        return Err(Error::RootIndexOutOfRange {
            index: b,
            rank: g.rank(),
        });
    }
    if g.degree(b) == 0 {
        return Err(Error::EvenRoot(b));
    }
    let left = if b == 1 { d.p_poly() } else { d.q_poly(b - 1) };
    let right = d.q_poly(b + 1);
    let pb = C::from_i64(g.p(b));
    let pc = C::from_i64(g.p(b + 1));
    let plus = &left.shift(&pb) * &right.shift(&pc);
    let minus = &left.shift(&-pb) * &right.shift(&-pc);
    Ok(&plus - &minus)
}

/// Degree of `f` predicted from the root counts, and the predicted leading
/// coefficient; `None` when the predicted leading coefficient vanishes.
pub fn predicted_degree(
    g: &Grading,
    counts: &[usize],
    n_sites: usize,
    b: usize,
) -> Option<(usize, i64)> {
    let left = if b == 1 { n_sites } else { counts[b - 2] };
    let right = if b == g.rank() { 0 } else { counts[b] };
    let lead = 2 * g.p(b) * (left as i64 - right as i64);
    (lead != 0).then(|| (left + right - 1, lead))
}

/// Roots of a complex polynomial from the companion matrix, polished by Newton.
pub fn poly_roots(f: &Poly<C64>) -> Result<Vec<C64>> {
    let Some(deg) = f.degree() else {
        return Err(Error::ZeroFPolynomial);
    };
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = f.coeff(deg);
    let mut m = DMatrix::<C64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -f.coeff(i) / lead;
    }
    let schur = Schur::try_new(m, 1e-15, 10_000).ok_or(Error::MatchingFailure(
        "companion eigenvalues did not converge".into(),
    ))?;
    let df = f.derivative();
    let mut roots: Vec<C64> = schur
        .eigenvalues()
        .ok_or(Error::MatchingFailure("companion eigenvalues".into()))?
        .iter()
        .copied()
        .collect();
    for z in roots.iter_mut() {
        for _ in 0..8 {
            let d = df.eval(z);
            if d.norm() == 0.0 {
                break;
            }
            let step = f.eval(z) / d;
            *z -= step;
            if step.norm() <= 1e-16 * (1.0 + z.norm()) {
                break;
            }
        }
    }
    Ok(roots)
}

/// Defects after a particle-hole step, each the max relative defect.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualReport {
    /// Transformed equations at color `b-1` (absent for `b = 1`).
    pub lower_neighbor: Option<f64>,
    /// Transformed equations at color `b+1` (absent for the last color).
    pub upper_neighbor: Option<f64>,
    /// `L(ũ+p_b) R(ũ+p_{b+1}) = L(ũ-p_b) R(ũ-p_{b+1})` at every dual root.
    pub dual_roots: f64,
    /// Every equation of the reflected system.
    pub full: f64,
}

impl DualReport {
    pub fn max(&self) -> f64 {
        [
            self.lower_neighbor,
            self.upper_neighbor,
            Some(self.dual_roots),
            Some(self.full),
        ]
        .into_iter()
        .flatten()
        .fold(0.0, f64::max)
    }
}

/// One particle-hole step at color `b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualityResult {
    pub b: usize,
    /// Coefficients of `f`, constant term first.
    pub f: Poly<C64>,
    /// Roots of `f` matched to the original color-`b` roots.
    pub matched_roots: Vec<C64>,
    pub dual_roots: Vec<C64>,
    /// Two roots of `f` closer than the matching tolerance.
    pub multiple_roots: bool,
    pub new_grading: Grading,
    pub system: BAESystem,
    pub solution: BAESolution,
    pub verification: DualReport,
}

fn lex(a: &C64, b: &C64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn max_norm(v: impl IntoIterator<Item = C64>) -> f64 {
    v.into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Replaces the color-`b` roots of a solution by the complementary roots of
/// `f` and moves to the odd-reflected grading.
pub fn particle_hole(
    sys: &BAESystem,
    sol: &BAESolution,
    b: usize,
    match_tol: f64,
) -> Result<DualityResult> {
    let d = sol.data(sys)?;
    let f = f_poly(&d, b)?;
    if f.is_zero() {
        return Err(Error::ZeroFPolynomial);
    }
    let mut pool = poly_roots(&f)?;
    let multiple_roots = pool
        .iter()
        .enumerate()
        .any(|(i, u)| pool[i + 1..].iter().any(|v| (u - v).norm() < match_tol));
    let mut matched = Vec::new();
    for &u in d.roots(b) {
        let (k, dist) = pool
            .iter()
            .enumerate()
            .map(|(k, v)| (k, (u - v).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .ok_or_else(|| Error::MatchingFailure(format!("no root of f left for {u}")))?;
        if dist > match_tol {
            return Err(Error::MatchingFailure(format!(
                "root {u} is {dist:e} from the nearest root of f"
            )));
        }
        matched.push(pool.swap_remove(k));
    }
    pool.sort_by(lex);
    let new_grading = d.grading().reflect(b)?;
    let mut counts = sys.counts.clone();
    counts[b - 1] = pool.len();
    let system = BAESystem::new(new_grading.clone(), counts, sys.inhomogeneities.clone())?;
    let mut roots = sol.roots.clone();
    roots[b - 1] = pool.clone();
    let residual = max_norm(bae_residual(&system, &roots)?);
    let solution = BAESolution {
        roots,
        residual,
        collided: if multiple_roots { vec![b] } else { Vec::new() },
    };
    let mut res = DualityResult {
        b,
        f,
        matched_roots: matched,
        dual_roots: pool,
        multiple_roots,
        new_grading,
        system,
        solution,
        verification: DualReport {
            lower_neighbor: None,
            upper_neighbor: None,
            dual_roots: 0.0,
            full: 0.0,
        },
    };
    res.verification = verify_dual_bae(&res, &d)?;
    Ok(res)
}

/// Checks the reflected system's equations next to `b` and the defining
/// equation of the dual roots.
pub fn verify_dual_bae(res: &DualityResult, original: &BetheData<C64>) -> Result<DualReport> {
    let b = res.b;
    let defects = bae_residual(&res.system, &res.solution.roots)?;
    let mut start = 0;
    let mut per_color = Vec::new();
    for &n in &res.system.counts {
        per_color.push(max_norm(defects[start..start + n].iter().copied()));
        start += n;
    }
    let g = original.grading();
    let left = if b == 1 {
        original.p_poly()
    } else {
        original.q_poly(b - 1)
    };
    let right = original.q_poly(b + 1);
    let (pb, pc) = (g.p(b) as f64, g.p(b + 1) as f64);
    let dual = res.dual_roots.iter().map(|&u| {
        let plus = left.eval(&(u + pb)) * right.eval(&(u + pc));
        let minus = left.eval(&(u - pb)) * right.eval(&(u - pc));
        let scale = plus.norm() + minus.norm();
        if scale == 0.0 {
            C64::new(0.0, 0.0)
        } else {
            (plus - minus) / scale
        }
    });
    Ok(DualReport {
        lower_neighbor: (b > 1).then(|| per_color[b - 2]),
        upper_neighbor: (b < g.rank()).then(|| per_color[b]),
        dual_roots: max_norm(dual),
        full: max_norm(defects),
    })
}

/// Largest distance in a greedy nearest-neighbor matching of two root sets;
/// infinite when the sizes differ.
pub fn root_set_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut pool = b.to_vec();
    let mut worst = 0.0f64;
    for u in a {
        let (k, dist) = pool
            .iter()
            .enumerate()
            .map(|(k, v)| (k, (u - v).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("sizes agree");
        worst = worst.max(dist);
        pool.swap_remove(k);
    }
    worst
}

/// Result of a chain of particle-hole steps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathResult {
    pub steps: Vec<DualityResult>,
    pub system: BAESystem,
    pub solution: BAESolution,
}

pub fn grading_path_transform(
    sys: &BAESystem,
    sol: &BAESolution,
    path: &[usize],
    match_tol: f64,
) -> Result<PathResult> {
    let mut out = PathResult {
        steps: Vec::new(),
        system: sys.clone(),
        solution: sol.clone(),
    };
    for &b in path {
        let step = particle_hole(&out.system, &out.solution, b, match_tol)?;
        out.system = step.system.clone();
        out.solution = step.solution.clone();
        out.steps.push(step);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bethe::{solve, SolveConfig};
    use crate::ratfun::{q, Rational};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn sl12(grading: &str) -> BAESystem {
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

    fn good_solutions(sys: &BAESystem) -> Vec<BAESolution> {
        solve(sys, &SolveConfig::default())
            .unwrap()
            .solutions
            .into_iter()
            .filter(|s| s.collided.is_empty())
            .collect()
    }

    #[test]
    fn empty_neighbors_give_zero_f() {
        let g = Grading::parse("+-+-").unwrap();
        let d = BetheData::<Rational>::new(g, vec![vec![], vec![q(1, 2)], vec![]], vec![]).unwrap();
        assert!(f_poly(&d, 2).unwrap().is_zero());
    }

    #[test]
    fn last_color_boundary_is_constant() {
        let g = Grading::parse("++-").unwrap();
        let d = BetheData::<Rational>::new(g, vec![vec![q(0, 1)], vec![]], vec![]).unwrap();
        assert_eq!(f_poly(&d, 2).unwrap(), Poly::constant(q(2, 1)));
    }

    #[test]
    fn even_root_rejected() {
        let d = BetheData::<Rational>::empty(Grading::parse("++-").unwrap());
        assert!(matches!(f_poly(&d, 1), Err(Error::EvenRoot(1))));
    }

    #[test]
    fn degree_and_leading_coefficient() {
        let g = Grading::parse("+-+-").unwrap();
        let d = BetheData::<Rational>::new(
            g.clone(),
            vec![
                vec![q(1, 3), q(-1, 2), q(2, 5)],
                vec![q(1, 7)],
                vec![q(3, 2)],
            ],
            vec![q(1, 5), q(-2, 3)],
        )
        .unwrap();
        for b in 1..=3 {
            let f = f_poly(&d, b).unwrap();
            let (deg, lead) = predicted_degree(&g, &[3, 1, 1], 2, b).unwrap();
            assert_eq!(f.degree(), Some(deg), "b={b}");
            assert_eq!(f.leading().unwrap(), &q(lead, 1), "b={b}");
        }
    }

    #[test]
    fn roots_of_known_polynomial() {
        let f = Poly::from_roots(&[c(1.0), C64::new(0.0, 2.0), c(-0.5)]).scale(&c(3.0));
        let mut r = poly_roots(&f).unwrap();
        r.sort_by(lex);
        for (z, w) in r.iter().zip([c(-0.5), C64::new(0.0, 2.0), c(1.0)]) {
            assert!((z - w).norm() < 1e-12);
        }
    }

    #[test]
    fn chain_through_all_gradings() {
        let sys = sl12("+--");
        let sols = good_solutions(&sys);
        assert!(!sols.is_empty());
        for sol in &sols {
            let path = grading_path_transform(&sys, sol, &[1, 2], 1e-6).unwrap();
            let names: Vec<String> = path
                .steps
                .iter()
                .map(|s| s.new_grading.to_string())
                .collect();
            assert_eq!(names.len(), 2);
            assert_eq!(path.steps[0].new_grading, sys.grading.reflect(1).unwrap());
            assert_eq!(
                path.steps[1].new_grading,
                path.steps[0].new_grading.reflect(2).unwrap()
            );
            for step in &path.steps {
                assert!(step.verification.max() < 1e-8, "{:?}", step.verification);
            }
            assert_eq!(path.system.counts, vec![2, 0]);
            let back = grading_path_transform(&path.system, &path.solution, &[2, 1], 1e-6).unwrap();
            assert_eq!(back.system.grading, sys.grading);
            for (u, v) in back.solution.roots.iter().zip(&sol.roots) {
                assert!(root_set_distance(u, v) < 1e-7);
            }
        }
    }

    #[test]
    fn dual_count_follows_degree_law() {
        let sys = sl12("-+-");
        for sol in good_solutions(&sys) {
            for b in 1..=2 {
                let res = particle_hole(&sys, &sol, b, 1e-6).unwrap();
                let (deg, _) = predicted_degree(&sys.grading, &sys.counts, 4, b).unwrap();
                assert_eq!(res.f.degree(), Some(deg));
                assert_eq!(res.dual_roots.len(), deg - sys.counts[b - 1]);
                let twice = particle_hole(&res.system, &res.solution, b, 1e-6).unwrap();
                assert_eq!(twice.new_grading, sys.grading);
                let dist = root_set_distance(&twice.solution.roots[b - 1], &sol.roots[b - 1]);
                assert!(dist < 1e-8, "b={b} {dist:e}");
            }
        }
    }

    #[test]
    fn off_shell_matching_fails() {
        let sys = sl12("+--");
        let sol = BAESolution {
            roots: vec![vec![c(0.3), c(-0.4)], vec![c(0.11)]],
            residual: 1.0,
            collided: vec![],
        };
        assert!(matches!(
            particle_hole(&sys, &sol, 1, 1e-6),
            Err(Error::MatchingFailure(_))
        ));
    }

    #[test]
    fn perturbed_dual_roots_show_defect() {
        let sys = sl12("+--");
        let sol = &good_solutions(&sys)[0];
        let mut res = particle_hole(&sys, sol, 1, 1e-6).unwrap();
        res.dual_roots[0] += 1e-3;
        res.solution.roots[0] = res.dual_roots.clone();
        let d = sol.data(&sys).unwrap();
        assert!(verify_dual_bae(&res, &d).unwrap().max() > 1e-6);
    }

    #[test]
    fn empty_path_is_identity() {
        let sys = sl12("--+");
        let sol = BAESolution {
            roots: vec![vec![c(0.3), c(0.1)], vec![]],
            residual: 0.0,
            collided: vec![],
        };
        let p = grading_path_transform(&sys, &sol, &[], 1e-6).unwrap();
        assert!(p.steps.is_empty());
        assert_eq!(p.solution, sol);
    }
}
