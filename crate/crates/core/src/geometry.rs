//! Exact orientation predicates on integer point sets and extraction of the
//! induced chirotope.
//!
//! Coordinates are generic over [`Coordinate`]; the crate root fixes the
//! usual instantiations (`PointSet` for arbitrary precision, `PointSetI64`
//! for small inputs). Determinants use fraction-free Bareiss elimination,
//! which only ever performs exact divisions on integer types.

use std::fmt::{self, Debug, Display};
use std::str::FromStr;

use thiserror::Error;

use crate::chirotope::Chirotope;
use crate::combinatorics::{choose, colex_rank, sort_with_parity, Colex, Lex};
use crate::scalar::Coordinate;
use crate::sign::Sign;
use crate::Mode;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("point set is empty")]
    Empty,
    #[error("point {index} has {got} coordinates, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, got: usize },
    #[error("orientation of {dim}-dimensional points needs {expected} points, got {got}")]
    Arity { dim: usize, expected: usize, got: usize },
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("points {} lie in a common hyperplane", crate::labels(.tuple))]
    Degenerate { tuple: Vec<usize> },
    #[error("k must be at least 3, got {0}")]
    SubsetSize(usize),
    #[error("point file line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Labeled points in `R^d`. Labels are the 0-based positions; text output
/// shows them 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Points<T> {
    dim: usize,
    coords: Vec<Vec<T>>,
}

impl<T: Coordinate> Points<T> {
    pub fn new(dim: usize, coords: Vec<Vec<T>>) -> Result<Self, GeometryError> {
        if dim < 2 {
            return Err(GeometryError::Dimension(dim));
        }
        if coords.is_empty() {
            return Err(GeometryError::Empty);
        }
        for (index, p) in coords.iter().enumerate() {
            if p.len() != dim {
                return Err(GeometryError::DimensionMismatch {
                    index,
                    expected: dim,
                    got: p.len(),
                });
            }
        }
        Ok(Points { dim, coords })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[T] {
        &self.coords[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[T]> {
        self.coords.iter().map(Vec::as_slice)
    }

    /// Orientation of the points with the given labels, in the given order.
    pub fn orientation_of(&self, labels: &[usize]) -> Result<Sign, GeometryError> {
        let pts: Vec<&[T]> = labels.iter().map(|&i| self.point(i)).collect();
        orientation(&pts)
    }

    /// First `(d+1)`-tuple (lexicographic) whose points are affinely dependent.
    pub fn first_degenerate_tuple(&self) -> Option<Vec<usize>> {
        Lex::new(self.len(), self.dim + 1).find(|t| self.orientation_of(t).map(Sign::is_zero).unwrap_or(true))
    }

    pub fn in_general_position(&self) -> bool {
        self.first_degenerate_tuple().is_none()
    }
}

impl<T: Coordinate + FromStr> Points<T> {
    /// Parses the point-set text format: a header line `n d` followed by
    /// `n` lines of `d` integers. Blank lines and lines starting with `#`
    /// are ignored.
    pub fn parse(text: &str) -> Result<Self, GeometryError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(GeometryError::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let head: Vec<usize> = header
            .split_whitespace()
            .map(|f| f.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|e| GeometryError::Parse {
                line: hline,
                msg: format!("bad header: {e}"),
            })?;
        let [n, d] = head[..] else {
            return Err(GeometryError::Parse {
                line: hline,
                msg: "header must be `n d`".into(),
            });
        };
        let mut coords = Vec::with_capacity(n);
        for (line, l) in lines {
            let p: Vec<T> = l
                .split_whitespace()
                .map(|f| {
                    f.parse::<T>().map_err(|_| GeometryError::Parse {
                        line,
                        msg: format!("not an integer: {f:?}"),
                    })
                })
                .collect::<Result<_, _>>()?;
            if p.len() != d {
                return Err(GeometryError::Parse {
                    line,
                    msg: format!("expected {d} coordinates, got {}", p.len()),
                });
            }
            coords.push(p);
        }
        if coords.len() != n {
            return Err(GeometryError::Parse {
                line: hline,
                msg: format!("header announces {n} points, found {}", coords.len()),
            });
        }
        Points::new(d, coords)
    }
}

impl<T: Coordinate + Display> Display for Points<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.len(), self.dim)?;
        for p in &self.coords {
            let row: Vec<String> = p.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Sign of `det [[1 ... 1], [p_0 ... p_d]]` for `d+1` points in `R^d`.
pub fn orientation<T: Coordinate, P: AsRef<[T]>>(points: &[P]) -> Result<Sign, GeometryError> {
    let Some(first) = points.first() else {
        return Err(GeometryError::Empty);
    };
    let dim = first.as_ref().len();
    for (index, p) in points.iter().enumerate() {
        if p.as_ref().len() != dim {
            return Err(GeometryError::DimensionMismatch {
                index,
                expected: dim,
                got: p.as_ref().len(),
            });
        }
    }
    if points.len() != dim + 1 {
        return Err(GeometryError::Arity {
            dim,
            expected: dim + 1,
            got: points.len(),
        });
    }
    // Subtracting the first row of the homogeneous matrix leaves the
    // determinant of the difference vectors.
    let origin = first.as_ref();
    let rows: Vec<Vec<T>> = points[1..]
        .iter()
        .map(|p| {
            p.as_ref()
                .iter()
                .zip(origin)
                .map(|(x, o)| x.clone() - o.clone())
                .collect()
        })
        .collect();
    Ok(bareiss_sign(rows))
}

fn bareiss_sign<T: Coordinate>(mut m: Vec<Vec<T>>) -> Sign {
    let n = m.len();
    if n == 0 {
        return Sign::Positive;
    }
    let mut flip = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    flip = !flip;
                }
                None => return Sign::Zero,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = v / prev.clone();
            }
        }
        prev = m[k][k].clone();
    }
    let s = Sign::of(&m[n - 1][n - 1]);
    if flip {
        -s
    } else {
        s
    }
}

impl<T: Coordinate> Points<T> {
    /// The rank-`(d+1)` chirotope of the set. Fails on the first
    /// degenerate tuple (in colexicographic order).
    pub fn chirotope(&self) -> Result<Chirotope, GeometryError> {
        let signs = self.orientation_table()?;
        if let Some(pos) = signs.iter().position(|s| s.is_zero()) {
            return Err(GeometryError::Degenerate {
                tuple: crate::combinatorics::colex_unrank(pos, self.dim + 1),
            });
        }
        Ok(Chirotope::from_signs(self.len(), self.dim + 1, signs).expect("orientation table has C(n, d+1) entries"))
    }

    /// Like [`Points::chirotope`] but keeps zero orientations.
    pub fn chirotope_allow_degenerate(&self) -> Result<Chirotope, GeometryError> {
        let signs = self.orientation_table()?;
        Ok(Chirotope::from_signs(self.len(), self.dim + 1, signs).expect("orientation table has C(n, d+1) entries"))
    }

    fn orientation_table(&self) -> Result<Vec<Sign>, GeometryError> {
        let r = self.dim + 1;
        if self.len() < r {
            return Err(GeometryError::TooFewPoints {
                needed: r,
                got: self.len(),
            });
        }
        Colex::new(self.len(), r).map(|t| self.orientation_of(&t)).collect()
    }
}

/// Convex-position and emptiness oracle working directly on coordinates.
///
/// A set in general position is convex iff each of its points lies on a
/// facet, i.e. a `d`-subset whose hyperplane has every remaining point
/// strictly on one side. A point is inside the hull iff it lies on the
/// inner side of every facet.
pub fn geometric_scan<T: Coordinate>(
    set: &Points<T>,
    k: usize,
    mode: Mode,
) -> Result<Option<Vec<usize>>, GeometryError> {
    if k < 3 {
        return Err(GeometryError::SubsetSize(k));
    }
    if let Some(tuple) = set.first_degenerate_tuple() {
        return Err(GeometryError::Degenerate { tuple });
    }
    if k > set.len() {
        return Ok(None);
    }
    let oracle = ScanOracle::new(set)?;
    for x in Lex::new(set.len(), k) {
        let Some(facets) = oracle.facets(&x) else {
            continue;
        };
        match mode {
            Mode::Gon => return Ok(Some(x)),
            Mode::Hole => {
                let empty = (0..set.len())
                    .filter(|q| !x.contains(q))
                    .all(|q| !oracle.inside(&facets, q));
                if empty {
                    return Ok(Some(x));
                }
            }
        }
    }
    Ok(None)
}

struct ScanOracle {
    n: usize,
    dim: usize,
    signs: Vec<Sign>,
}

struct Facet {
    vertices: Vec<usize>,
    inner: Sign,
}

impl ScanOracle {
    fn new<T: Coordinate>(set: &Points<T>) -> Result<Self, GeometryError> {
        let r = set.dim() + 1;
        let mut signs = Vec::with_capacity(choose(set.len(), r));
        for t in Colex::new(set.len(), r) {
            signs.push(set.orientation_of(&t)?);
        }
        Ok(ScanOracle {
            n: set.len(),
            dim: set.dim(),
            signs,
        })
    }

    fn orient(&self, tuple: &[usize]) -> Sign {
        let mut t = tuple.to_vec();
        match sort_with_parity(&mut t) {
            None => Sign::Zero,
            Some(odd) => {
                let s = self.signs[colex_rank(&t)];
                if odd {
                    -s
                } else {
                    s
                }
            }
        }
    }

    /// Facets of `conv(x)` if `x` is in convex position.
    fn facets(&self, x: &[usize]) -> Option<Vec<Facet>> {
        let d = self.dim;
        if x.len() <= d {
            // lower-dimensional: convex, and no point in general position
            // lies in its hull
            return Some(Vec::new());
        }
        let mut facets = Vec::new();
        let mut on_facet = vec![false; x.len()];
        for f in Lex::new(x.len(), d) {
            let verts: Vec<usize> = f.iter().map(|&i| x[i]).collect();
            let mut side = None;
            let mut supporting = true;
            for (i, &q) in x.iter().enumerate() {
                if f.contains(&i) {
                    continue;
                }
                let mut t = verts.clone();
                t.push(q);
                let s = self.orient(&t);
                match side {
                    None => side = Some(s),
                    Some(prev) if prev != s => {
                        supporting = false;
                        break;
                    }
                    _ => {}
                }
            }
            if supporting {
                for &i in &f {
                    on_facet[i] = true;
                }
                facets.push(Facet {
                    vertices: verts,
                    inner: side.expect("x has more than d points"),
                });
            }
        }
        on_facet.iter().all(|&b| b).then_some(facets)
    }

    fn inside(&self, facets: &[Facet], q: usize) -> bool {
        debug_assert!(q < self.n);
        !facets.is_empty()
            && facets.iter().all(|f| {
                let mut t = f.vertices.clone();
                t.push(q);
                self.orient(&t) == f.inner
            })
    }
}
