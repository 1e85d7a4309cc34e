//! Gradings of sl(r+1|s+1) and the combinatorics of their simple root systems.
//!
//! A grading is a sign sequence `p_1, ..., p_{r+s+2}` with `r+1` entries `+1`
//! (the bosonic labels J₊) and `s+1` entries `-1` (the fermionic labels J₋).
//! Simple root systems that differ by an even Weyl reflection share a grading,
//! so gradings are the objects we enumerate, reflect and draw.
//!
//! The degenerate case `s = -1` (no `-1` entries) is accepted: it is plain
//! sl(r+1) and serves as a classical cross-check throughout the crate.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sign sequence fixing a simple root system of sl(r+1|s+1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "GradingRepr", into = "GradingRepr")]
pub struct Grading {
    p: Vec<i8>,
}

#[derive(Serialize, Deserialize)]
struct GradingRepr {
    r: i64,
    s: i64,
    p: Vec<i8>,
}

impl TryFrom<GradingRepr> for Grading {
    type Error = Error;

    fn try_from(repr: GradingRepr) -> Result<Self> {
        let g = Grading::new(repr.p)?;
        if g.r() != repr.r || g.s() != repr.s {
            return Err(Error::InvalidGrading(format!(
                "declared (r, s) = ({}, {}) but signs give ({}, {})",
                repr.r,
                repr.s,
                g.r(),
                g.s()
            )));
        }
        Ok(g)
    }
}

impl From<Grading> for GradingRepr {
    fn from(g: Grading) -> Self {
        GradingRepr {
            r: g.r(),
            s: g.s(),
            p: g.p,
        }
    }
}

/// Index `a` of a simple root `α_a`, `1 <= a <= r+s+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootIndex(usize);

impl RootIndex {
    pub fn get(self) -> usize {
        self.0
    }
}

impl Grading {
    /// Builds a grading from signs. Requires at least two symbols and at least
    /// one `+1`; `-1` entries may be absent (the sl(r+1) reduction).
    pub fn new(p: Vec<i8>) -> Result<Self> {
        if p.len() < 2 {
            return Err(Error::InvalidGrading(
                "need at least two symbols (one simple root)".into(),
            ));
        }
        if let Some(bad) = p.iter().find(|&&x| x != 1 && x != -1) {
            return Err(Error::InvalidGrading(format!("entry {bad} is not ±1")));
        }
        if !p.contains(&1) {
            return Err(Error::InvalidGrading("no +1 entry (r would be -1)".into()));
        }
        Ok(Grading { p })
    }

    /// The distinguished grading: `r+1` plus signs followed by `s+1` minus signs.
    pub fn distinguished(r: i64, s: i64) -> Result<Self> {
        check_rank(r, s)?;
        let mut p = vec![1i8; (r + 1) as usize];
        p.extend(std::iter::repeat_n(-1i8, (s + 1) as usize));
        Grading::new(p)
    }

    /// Parses strings such as `"+-+"` or `"+1,-1,+1"`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let p: Vec<i8> = if t.contains(',') {
            t.split(',')
                .map(|tok| match tok.trim() {
                    "+" | "+1" | "1" => Ok(1),
                    "-" | "-1" => Ok(-1),
                    other => Err(Error::Parse(format!("bad grading entry {other:?}"))),
                })
                .collect::<Result<_>>()?
        } else {
            t.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| match c {
                    '+' => Ok(1),
                    '-' => Ok(-1),
                    other => Err(Error::Parse(format!("bad grading character {other:?}"))),
                })
                .collect::<Result<_>>()?
        };
        Grading::new(p)
    }

    pub fn r(&self) -> i64 {
        self.p.iter().filter(|&&x| x == 1).count() as i64 - 1
    }

    pub fn s(&self) -> i64 {
        self.p.iter().filter(|&&x| x == -1).count() as i64 - 1
    }

    /// Number of symbols `|J| = r+s+2`.
    pub fn n_symbols(&self) -> usize {
        self.p.len()
    }

    /// Number of simple roots (colors) `r+s+1`.
    pub fn rank(&self) -> usize {
        self.p.len() - 1
    }

    pub fn signs(&self) -> &[i8] {
        &self.p
    }

    /// `p_a` for `a ∈ J` (1-based).
    pub fn p(&self, a: usize) -> i64 {
        self.p[a - 1] as i64
    }

    /// `Σ_{j<=k} p_j`, with the empty sum for `k = 0`.
    pub fn partial_sum(&self, k: usize) -> i64 {
        self.p[..k].iter().map(|&x| x as i64).sum()
    }

    pub fn is_bosonic(&self, a: usize) -> bool {
        self.p[a - 1] == 1
    }

    pub fn is_distinguished(&self) -> bool {
        self.p.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn root(&self, a: usize) -> Result<RootIndex> {
        if a == 0 || a > self.rank() {
            return Err(Error::RootIndexOutOfRange {
                index: a,
                rank: self.rank(),
            });
        }
        Ok(RootIndex(a))
    }

    /// Bilinear form on simple roots:
    /// `(α_k|α_l) = (p_k+p_{k+1})δ_{kl} - p_{k+1}δ_{k+1,l} - p_k δ_{k,l+1}`.
    pub fn cartan_pairing(&self, k: RootIndex, l: RootIndex) -> i64 {
        self.pairing(k.0, l.0)
    }

    pub(crate) fn pairing(&self, k: usize, l: usize) -> i64 {
        let mut v = 0;
        if k == l {
            v += self.p(k) + self.p(k + 1);
        }
        if k + 1 == l {
            v -= self.p(k + 1);
        }
        if k == l + 1 {
            v -= self.p(k);
        }
        v
    }

    /// Parity of `α_a`: `(1 - p_a p_{a+1}) / 2`.
    pub fn root_degree(&self, a: RootIndex) -> u8 {
        self.degree(a.0)
    }

    pub(crate) fn degree(&self, a: usize) -> u8 {
        ((1 - self.p(a) * self.p(a + 1)) / 2) as u8
    }

    /// Odd reflection at `α_b`: swaps `p_b` and `p_{b+1}`.
    pub fn odd_reflection(&self, b: RootIndex) -> Result<Grading> {
        self.reflect(b.0)
    }

    pub(crate) fn reflect(&self, b: usize) -> Result<Grading> {
        if b == 0 || b > self.rank() {
            return Err(Error::RootIndexOutOfRange {
                index: b,
                rank: self.rank(),
            });
        }
        if self.degree(b) == 0 {
            return Err(Error::EvenRoot(b));
        }
        let mut p = self.p.clone();
        p.swap(b - 1, b);
        Ok(Grading { p })
    }

    /// Indices of the odd simple roots.
    pub fn odd_roots(&self) -> Vec<usize> {
        (1..=self.rank()).filter(|&a| self.degree(a) == 1).collect()
    }

    /// Simple roots as coordinate vectors in the basis
    /// `ε_1..ε_{r+1}, δ_1..δ_{s+1}`.
    pub fn simple_root_vectors(&self) -> Vec<Vec<i64>> {
        let basis = self.symbol_basis();
        let dim = self.p.len();
        (0..self.rank())
            .map(|a| {
                let mut v = vec![0i64; dim];
                v[basis[a]] += 1;
                v[basis[a + 1]] -= 1;
                v
            })
            .collect()
    }

    /// Coordinate slot of each symbol `a ∈ J`: bosonic symbols fill the ε
    /// slots in order, fermionic ones the δ slots.
    fn symbol_basis(&self) -> Vec<usize> {
        let n_plus = (self.r() + 1) as usize;
        let (mut i, mut j) = (0, 0);
        self.p
            .iter()
            .map(|&x| {
                if x == 1 {
                    i += 1;
                    i - 1
                } else {
                    j += 1;
                    n_plus + j - 1
                }
            })
            .collect()
    }

    /// Diagonal bilinear form `(+1,...,+1,-1,...,-1)` on the ε/δ coordinates.
    pub fn form(&self, x: &[i64], y: &[i64]) -> i64 {
        let n_plus = (self.r() + 1) as usize;
        x.iter()
            .zip(y)
            .enumerate()
            .map(|(i, (a, b))| if i < n_plus { a * b } else { -a * b })
            .sum()
    }

    /// Dynkin diagram of this simple root system.
    pub fn dynkin_graph(&self) -> DynkinGraph {
        let basis = self.symbol_basis();
        let n_plus = (self.r() + 1) as usize;
        let name = |slot: usize| {
            if slot < n_plus {
                format!("ε{}", slot + 1)
            } else {
                format!("δ{}", slot - n_plus + 1)
            }
        };
        let nodes = (1..=self.rank())
            .map(|a| DynkinNode {
                index: a,
                odd: self.degree(a) == 1,
                label: format!("{}-{}", name(basis[a - 1]), name(basis[a])),
            })
            .collect();
        DynkinGraph {
            grading: self.clone(),
            nodes,
        }
    }
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, &x) in self.p.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(if x == 1 { "+" } else { "-" })?;
        }
        f.write_str(")")
    }
}

fn check_rank(r: i64, s: i64) -> Result<()> {
    if r < 0 || s < -1 || r + s < 0 {
        return Err(Error::InvalidGrading(format!(
            "sl({}|{}) has no simple roots or negative rank",
            r + 1,
            s + 1
        )));
    }
    Ok(())
}

/// All gradings of sl(r+1|s+1), distinguished one first, then in
/// lexicographic order with `+` before `-`.
pub fn enumerate_gradings(r: i64, s: i64) -> Result<Vec<Grading>> {
    check_rank(r, s)?;
    let n = (r + s + 2) as usize;
    let minus = (s + 1) as usize;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    fill_signs(n, minus, &mut current, &mut out);
    Ok(out)
}

fn fill_signs(n: usize, minus_left: usize, current: &mut Vec<i8>, out: &mut Vec<Grading>) {
    let remaining = n - current.len();
    if remaining == 0 {
        out.push(Grading { p: current.clone() });
        return;
    }
    if remaining > minus_left {
        current.push(1);
        fill_signs(n, minus_left, current, out);
        current.pop();
    }
    if minus_left > 0 {
        current.push(-1);
        fill_signs(n, minus_left - 1, current, out);
        current.pop();
    }
}

/// Gradings reachable from `start` through chains of odd reflections, in
/// breadth-first order.
pub fn odd_reflection_orbit(start: &Grading) -> Vec<Grading> {
    let mut seen = BTreeSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::from([start.clone()]);
    seen.insert(start.clone());
    while let Some(g) = queue.pop_front() {
        for b in g.odd_roots() {
            let h = g.reflect(b).expect("odd root");
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
        order.push(g);
    }
    order
}

/// Image of a simple root system under the odd reflection `ω_{α_b}`:
/// `α_b ↦ -α_b`, `β ↦ β + α_b` when `(α_b|β) ≠ 0`, otherwise fixed.
pub fn reflect_root_vectors(g: &Grading, roots: &[Vec<i64>], b: usize) -> Vec<Vec<i64>> {
    let alpha = &roots[b - 1];
    roots
        .iter()
        .enumerate()
        .map(|(c, beta)| {
            if c + 1 == b {
                alpha.iter().map(|x| -x).collect()
            } else if g.form(alpha, beta) != 0 {
                beta.iter().zip(alpha).map(|(x, y)| x + y).collect()
            } else {
                beta.clone()
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DynkinNode {
    pub index: usize,
    pub odd: bool,
    pub label: String,
}

/// Linear Dynkin chain with one node per simple root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DynkinGraph {
    pub grading: Grading,
    pub nodes: Vec<DynkinNode>,
}

impl DynkinGraph {
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        out.push_str("graph dynkin {\n");
        out.push_str(&format!("  label=\"{}\";\n", self.grading));
        out.push_str("  rankdir=LR;\n");
        for n in &self.nodes {
            let (fill, mark) = if n.odd { ("grey", "X") } else { ("white", "") };
            out.push_str(&format!(
                "  a{} [shape=circle, style=filled, fillcolor={}, label=\"{}\", xlabel=\"{}\"];\n",
                n.index, fill, mark, n.label
            ));
        }
        for w in self.nodes.windows(2) {
            out.push_str(&format!("  a{} -- a{};\n", w[0].index, w[1].index));
        }
        out.push_str("}\n");
        out
    }
}
