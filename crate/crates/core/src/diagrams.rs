//! Skew Young superdiagrams and admissible supertableaux.
//!
//! Coordinates follow the usual English convention: row `i` grows downwards,
//! column `j` to the right, `(1,1)` is the top-left corner of `μ`. There is no
//! bound on the number of rows.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::superalgebra::Grading;

/// Default cap on the number of cells handed to [`enumerate_tableaux`].
pub const DEFAULT_CELL_CAP: usize = 24;

/// Weakly decreasing sequence of positive parts (trailing zeros dropped).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} is not weakly decreasing"
            )));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The rectangle `(m^a)`: `a` rows of length `m`.
    pub fn rectangle(a: usize, m: usize) -> Self {
        if m == 0 {
            return Partition::empty();
        }
        Partition(vec![m; a])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// `λ_i` for 1-based `i`, zero past the end.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.part(1);
        Partition(
            (1..=width)
                .map(|j| self.0.iter().filter(|&&x| x >= j).count())
                .collect(),
        )
    }

    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && (1..=other.len()).all(|i| other.part(i) <= self.part(i))
    }

    /// All partitions fitting in a `rows x cols` box.
    pub fn in_box(rows: usize, cols: usize) -> Vec<Partition> {
        fn rec(rows: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            out.push(Partition::new(cur.clone()).unwrap());
            if cur.len() == rows {
                return;
            }
            for part in 1..=max {
                cur.push(part);
                rec(rows, part, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(rows, cols, &mut Vec::new(), &mut out);
        out.sort();
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Skew diagram `λ ⊂ μ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "ShapeRepr", into = "ShapeRepr")]
pub struct SkewShape {
    lambda: Partition,
    mu: Partition,
}

#[derive(Serialize, Deserialize)]
struct ShapeRepr {
    lambda: Vec<usize>,
    mu: Vec<usize>,
}

impl TryFrom<ShapeRepr> for SkewShape {
    type Error = Error;

    fn try_from(r: ShapeRepr) -> Result<Self> {
        SkewShape::new(Partition::new(r.lambda)?, Partition::new(r.mu)?)
    }
}

impl From<SkewShape> for ShapeRepr {
    fn from(s: SkewShape) -> Self {
        ShapeRepr {
            lambda: s.lambda.0,
            mu: s.mu.0,
        }
    }
}

impl SkewShape {
    pub fn new(lambda: Partition, mu: Partition) -> Result<Self> {
        if !mu.contains(&lambda) {
            return Err(Error::InvalidShape(format!("{lambda} is not inside {mu}")));
        }
        Ok(SkewShape { lambda, mu })
    }

    /// Straight shape `φ ⊂ μ`.
    pub fn straight(mu: Partition) -> Self {
        SkewShape {
            lambda: Partition::empty(),
            mu,
        }
    }

    pub fn column(a: usize) -> Self {
        SkewShape::straight(Partition::rectangle(a, 1))
    }

    pub fn row(m: usize) -> Self {
        SkewShape::straight(Partition::rectangle(1, m))
    }

    /// Parses `"2,1"` (straight) or `"3,3,2/1"` (`μ/λ`).
    pub fn parse(text: &str) -> Result<Self> {
        let parse_parts = |t: &str| -> Result<Partition> {
            let t = t.trim();
            if t.is_empty() || t == "0" {
                return Ok(Partition::empty());
            }
            let parts = t
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad partition entry {x:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            Partition::new(parts)
        };
        match text.split_once('/') {
            Some((mu, lambda)) => SkewShape::new(parse_parts(lambda)?, parse_parts(mu)?),
            None => Ok(SkewShape::straight(parse_parts(text)?)),
        }
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn mu(&self) -> &Partition {
        &self.mu
    }

    /// Cells in row-major order.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        (1..=self.mu.len())
            .flat_map(|i| (self.lambda.part(i) + 1..=self.mu.part(i)).map(move |j| (i, j)))
            .collect()
    }

    pub fn n_cells(&self) -> usize {
        self.mu.size() - self.lambda.size()
    }

    pub fn contains_cell(&self, i: usize, j: usize) -> bool {
        i >= 1 && j > self.lambda.part(i) && j <= self.mu.part(i)
    }

    /// All skew shapes `λ ⊆ μ` with `μ` inside a `rows x cols` box.
    pub fn all_in_box(rows: usize, cols: usize) -> Vec<SkewShape> {
        let parts = Partition::in_box(rows, cols);
        let mut out = Vec::new();
        for mu in &parts {
            for lambda in &parts {
                if mu.contains(lambda) {
                    out.push(SkewShape {
                        lambda: lambda.clone(),
                        mu: mu.clone(),
                    });
                }
            }
        }
        out
    }
}

impl fmt::Display for SkewShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lambda.is_empty() {
            write!(f, "{}", self.mu)
        } else {
            write!(f, "{}/{}", self.mu, self.lambda)
        }
    }
}

/// A filling of a skew shape by symbols of `J = {1, ..., r+s+2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tableau {
    shape: SkewShape,
    /// Entries in the row-major order of [`SkewShape::cells`].
    entries: Vec<usize>,
}

impl Tableau {
    pub fn new(shape: SkewShape, entries: Vec<usize>) -> Result<Self> {
        if entries.len() != shape.n_cells() {
            return Err(Error::InvalidShape(format!(
                "{} entries for {} cells",
                entries.len(),
                shape.n_cells()
            )));
        }
        Ok(Tableau { shape, entries })
    }

    /// Builds a tableau from rows of a straight or skew shape, reading
    /// left to right over the cells of each row.
    pub fn from_rows(shape: SkewShape, rows: &[&[usize]]) -> Result<Self> {
        Tableau::new(shape, rows.iter().flat_map(|r| r.iter().copied()).collect())
    }

    pub fn shape(&self) -> &SkewShape {
        &self.shape
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// Cells paired with their entries, row-major.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.shape
            .cells()
            .into_iter()
            .zip(self.entries.iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> Option<usize> {
        self.shape
            .cells()
            .iter()
            .position(|&c| c == (i, j))
            .map(|k| self.entries[k])
    }

    pub fn set_entry(&mut self, k: usize, value: usize) {
        self.entries[k] = value;
    }

    /// Entry matrix with `None` in the skew holes.
    pub fn rows(&self) -> Vec<Vec<Option<usize>>> {
        let mut rows: Vec<Vec<Option<usize>>> = (1..=self.shape.mu.len())
            .map(|i| vec![None; self.shape.mu.part(i)])
            .collect();
        for ((i, j), b) in self.iter() {
            rows[i - 1][j - 1] = Some(b);
        }
        rows
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.map_or(".".to_string(), |b| b.to_string()))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        f.write_str(&rows.join(" / "))
    }
}

impl Serialize for Tableau {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            lambda: &'a [usize],
            mu: &'a [usize],
            entries: Vec<Vec<Option<usize>>>,
        }
        Repr {
            lambda: self.shape.lambda.parts(),
            mu: self.shape.mu.parts(),
            entries: self.rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Tableau {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Repr {
            lambda: Vec<usize>,
            mu: Vec<usize>,
            entries: Vec<Vec<Option<usize>>>,
        }
        let r = Repr::deserialize(d)?;
        let shape = SkewShape::new(
            Partition::new(r.lambda).map_err(D::Error::custom)?,
            Partition::new(r.mu).map_err(D::Error::custom)?,
        )
        .map_err(D::Error::custom)?;
        let mut entries = Vec::with_capacity(shape.n_cells());
        for (i, j) in shape.cells() {
            let v = r
                .entries
                .get(i - 1)
                .and_then(|row| row.get(j - 1))
                .copied()
                .flatten()
                .ok_or_else(|| D::Error::custom(format!("missing entry at ({i},{j})")))?;
            entries.push(v);
        }
        Tableau::new(shape, entries).map_err(D::Error::custom)
    }
}

/// Whether `next` may sit to the right of `left` in a row.
pub(crate) fn row_ok(g: &Grading, left: usize, next: usize) -> bool {
    left < next || (left == next && g.is_bosonic(left))
}

/// Whether `next` may sit below `top` in a column.
pub(crate) fn col_ok(g: &Grading, top: usize, next: usize) -> bool {
    top < next || (top == next && !g.is_bosonic(top))
}

/// Admissibility: weak increase along rows and columns, strict down columns
/// for J₊ symbols, strict along rows for J₋ symbols.
pub fn is_admissible(t: &Tableau, g: &Grading) -> Result<bool> {
    let max = g.n_symbols();
    if let Some(&bad) = t.entries.iter().find(|&&b| b == 0 || b > max) {
        return Err(Error::EntryOutOfRange { entry: bad, max });
    }
    let cells = t.shape.cells();
    let index = |i: usize, j: usize| cells.iter().position(|&c| c == (i, j));
    for (k, &(i, j)) in cells.iter().enumerate() {
        let b = t.entries[k];
        if let Some(right) = index(i, j + 1) {
            if !row_ok(g, b, t.entries[right]) {
                return Ok(false);
            }
        }
        if let Some(below) = index(i + 1, j) {
            if !col_ok(g, b, t.entries[below]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All admissible tableaux on `shape` in lexicographic order of the
/// row-major reading word, with the default cell cap.
pub fn enumerate_tableaux(shape: &SkewShape, g: &Grading) -> Result<Vec<Tableau>> {
    enumerate_tableaux_capped(shape, g, DEFAULT_CELL_CAP)
}

pub fn enumerate_tableaux_capped(
    shape: &SkewShape,
    g: &Grading,
    cap: usize,
) -> Result<Vec<Tableau>> {
    let cells = shape.cells();
    if cells.len() > cap {
        return Err(Error::ShapeTooLarge {
            cells: cells.len(),
            cap,
        });
    }
    // Neighbour indices: the cell to the left and the cell above, if present.
    let left: Vec<Option<usize>> = cells
        .iter()
        .map(|&(i, j)| cells.iter().position(|&c| c == (i, j.wrapping_sub(1))))
        .collect();
    let above: Vec<Option<usize>> = cells
        .iter()
        .map(|&(i, j)| cells.iter().position(|&c| c == (i.wrapping_sub(1), j)))
        .collect();
    let mut out = Vec::new();
    let mut fill = vec![0usize; cells.len()];
    backtrack(0, g, &left, &above, &mut fill, &mut |entries| {
        out.push(Tableau {
            shape: shape.clone(),
            entries: entries.to_vec(),
        })
    });
    Ok(out)
}

fn backtrack(
    k: usize,
    g: &Grading,
    left: &[Option<usize>],
    above: &[Option<usize>],
    fill: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if k == fill.len() {
        emit(fill);
        return;
    }
    for b in 1..=g.n_symbols() {
        if let Some(l) = left[k] {
            if !row_ok(g, fill[l], b) {
                continue;
            }
        }
        if let Some(a) = above[k] {
            if !col_ok(g, fill[a], b) {
                continue;
            }
        }
        fill[k] = b;
        backtrack(k + 1, g, left, above, fill, emit);
    }
}

/// Whether the shape contains a full block of `r+2` rows and `s+2` columns.
pub fn contains_forbidden_rectangle(shape: &SkewShape, r: i64, s: i64) -> bool {
    let (h, w) = ((r + 2).max(0) as usize, (s + 2).max(0) as usize);
    if h == 0 || w == 0 {
        return true;
    }
    let rows = shape.mu.len();
    let cols = shape.mu.part(1);
    if h > rows || w > cols {
        return false;
    }
    (1..=rows + 1 - h).any(|i0| {
        (1..=cols + 1 - w)
            .any(|j0| (i0..i0 + h).all(|i| (j0..j0 + w).all(|j| shape.contains_cell(i, j))))
    })
}
