//! Axis-parallel boxes, vertex labels and affine parallelotopes.
//!
//! Vertex labels are binary words with bit `k` selecting the lower (`0`) or
//! upper (`1`) endpoint of axis `k`. Axis 1 is the most significant bit, so
//! lexicographic order on labels is the order of the label read as a binary
//! integer.

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Largest supported ambient dimension. Vertex enumeration is `2ⁿ`.
pub const MAX_DIM: usize = 32;

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::InvalidDimension {
            found: dim,
            max: MAX_DIM,
        });
    }
    Ok(())
}

/// A binary word of length `dim`; bit `k` (1-indexed) belongs to axis `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexLabel {
    dim: usize,
    index: u64,
}

impl VertexLabel {
    /// Label whose binary value (axis 1 most significant) is `index`.
    pub fn from_index(dim: usize, index: u64) -> Result<Self> {
        check_dim(dim)?;
        if dim < 64 && index >> dim != 0 {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: 64 - index.leading_zeros() as usize,
            });
        }
        Ok(Self { dim, index })
    }

    /// Build from explicit bits, axis 1 first.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        check_dim(bits.len())?;
        let index = bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b));
        Ok(Self {
            dim: bits.len(),
            index,
        })
    }

    pub fn all_ones(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            index: (1u64 << dim) - 1,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The label read as a binary integer.
    pub fn index(&self) -> u64 {
        self.index
    }

    /// Bit for `axis` (0-based).
    #[inline]
    pub fn bit(&self, axis: usize) -> bool {
        debug_assert!(axis < self.dim);
        (self.index >> (self.dim - 1 - axis)) & 1 == 1
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.dim).map(move |axis| self.bit(axis))
    }

    /// Same label with the bit of `axis` (0-based) set to `value`.
    pub fn with_bit(&self, axis: usize, value: bool) -> Self {
        let mask = 1u64 << (self.dim - 1 - axis);
        let index = if value {
            self.index | mask
        } else {
            self.index & !mask
        };
        Self { index, ..*self }
    }

    /// Number of zero bits, `#₀(b)`.
    pub fn count_zeros(&self) -> usize {
        self.dim - self.index.count_ones() as usize
    }

    /// `(−1)^{#₀(b)}`.
    pub fn sign(&self) -> i8 {
        if self.count_zeros().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Hamming distance, which is the path length between the two vertices
    /// in the edge graph of a box or parallelotope.
    pub fn graph_distance(&self, other: &VertexLabel) -> Result<usize> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok((self.index ^ other.index).count_ones() as usize)
    }

    /// The label as a point of the unit box, `(bit₁, …, bitₙ)`.
    pub fn unit_point(&self) -> Vec<f64> {
        self.bits().map(|b| if b { 1.0 } else { 0.0 }).collect()
    }

    /// All `2ⁿ` labels in lexicographic order.
    pub fn all(dim: usize) -> Result<impl Iterator<Item = VertexLabel>> {
        check_dim(dim)?;
        Ok((0..1u64 << dim).map(move |index| VertexLabel { dim, index }))
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

pub fn count_zeros(label: &VertexLabel) -> usize {
    label.count_zeros()
}

pub fn vertex_sign(label: &VertexLabel) -> i8 {
    label.sign()
}

pub fn graph_distance(u: &VertexLabel, v: &VertexLabel) -> Result<usize> {
    u.graph_distance(v)
}

/// Axis-parallel box `∏ [aⱼ, bⱼ]`. Degenerate axes (`aⱼ = bⱼ`) are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypercuboid {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Hypercuboid {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        check_dim(lower.len())?;
        for (j, (&a, &b)) in lower.iter().zip(&upper).enumerate() {
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::NonFiniteCoordinate { axis: j + 1 });
            }
            if a > b {
                return Err(Error::InvertedAxis {
                    axis: j + 1,
                    lower: a,
                    upper: b,
                });
            }
        }
        Ok(Self { lower, upper })
    }

    /// `[0, 1]ⁿ`.
    pub fn unit(dim: usize) -> Result<Self> {
        Self::new(vec![0.0; dim], vec![1.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn extent(&self, axis: usize) -> f64 {
        self.upper[axis] - self.lower[axis]
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|j| self.extent(j)).product()
    }

    /// First collapsed axis, if any.
    pub fn degenerate_axis(&self) -> Option<usize> {
        (0..self.dim()).find(|&j| self.lower[j] == self.upper[j])
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate_axis().is_some()
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == self.dim()
            && point
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&x, (&a, &b))| a <= x && x <= b)
    }

    /// Point of the vertex selected by `label`.
    pub fn vertex(&self, label: &VertexLabel) -> Vec<f64> {
        debug_assert_eq!(label.dim(), self.dim());
        (0..self.dim())
            .map(|j| {
                if label.bit(j) {
                    self.upper[j]
                } else {
                    self.lower[j]
                }
            })
            .collect()
    }

    /// All `2ⁿ` vertices in lexicographic label order.
    pub fn vertices_lex(&self) -> Vec<(VertexLabel, Vec<f64>)> {
        VertexLabel::all(self.dim())
            .expect("dimension validated at construction")
            .map(|label| {
                let p = self.vertex(&label);
                (label, p)
            })
            .collect()
    }

    /// Split along the given interior cut points. `cuts[j]` must be strictly
    /// increasing and strictly inside `(aⱼ, bⱼ)`. Sub-boxes come out in
    /// lexicographic order of their cell index, axis 1 slowest.
    pub fn subdivide_grid(&self, cuts: &[Vec<f64>]) -> Result<Vec<Hypercuboid>> {
        if cuts.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: cuts.len(),
            });
        }
        let mut breakpoints = Vec::with_capacity(self.dim());
        for (j, axis_cuts) in cuts.iter().enumerate() {
            let (a, b) = (self.lower[j], self.upper[j]);
            let mut points = vec![a];
            for &c in axis_cuts {
                if !(a < c && c < b) {
                    return Err(Error::InvalidCut {
                        axis: j + 1,
                        value: c,
                        reason: "outside the open interval",
                    });
                }
                if c <= *points.last().unwrap() {
                    return Err(Error::InvalidCut {
                        axis: j + 1,
                        value: c,
                        reason: "cuts must be strictly increasing",
                    });
                }
                points.push(c);
            }
            points.push(b);
            breakpoints.push(points);
        }

        let counts: Vec<usize> = breakpoints.iter().map(|p| p.len() - 1).collect();
        let total: usize = counts.iter().product();
        let mut out = Vec::with_capacity(total);
        let mut cell = vec![0usize; self.dim()];
        for _ in 0..total {
            let lower = cell
                .iter()
                .enumerate()
                .map(|(j, &i)| breakpoints[j][i])
                .collect();
            let upper = cell
                .iter()
                .enumerate()
                .map(|(j, &i)| breakpoints[j][i + 1])
                .collect();
            out.push(Hypercuboid::new(lower, upper)?);
            for j in (0..self.dim()).rev() {
                cell[j] += 1;
                if cell[j] < counts[j] {
                    break;
                }
                cell[j] = 0;
            }
        }
        Ok(out)
    }

    /// Equal splits: `splits[j]` pieces along axis `j`.
    pub fn equal_grid_cuts(&self, splits: &[usize]) -> Result<Vec<Vec<f64>>> {
        if splits.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: splits.len(),
            });
        }
        splits
            .iter()
            .enumerate()
            .map(|(j, &k)| {
                if k == 0 {
                    return Err(Error::InvalidConfig(format!(
                        "grid count on axis {} must be at least 1",
                        j + 1
                    )));
                }
                let (a, w) = (self.lower[j], self.extent(j));
                Ok((1..k).map(|i| a + w * i as f64 / k as f64).collect())
            })
            .collect()
    }
}

/// Relative singularity threshold applied to `|det T|`.
pub const DEFAULT_SINGULAR_RTOL: f64 = 1e-12;

/// Affine image `origin + T·[0,1]ⁿ`, marked at the image of the all-ones
/// vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Parallelotope {
    origin: DVector<f64>,
    edges: DMatrix<f64>,
    det: f64,
}

impl Parallelotope {
    /// `edges` lists the spanning edge vectors, i.e. the columns of `T`.
    pub fn new(origin: Vec<f64>, edges: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_threshold(origin, edges, DEFAULT_SINGULAR_RTOL)
    }

    /// Rejects `|det T|` below `rtol · ∏ⱼ ‖Tⱼ‖`, the Hadamard bound on the
    /// determinant, so the test is independent of overall scale.
    pub fn with_threshold(origin: Vec<f64>, edges: Vec<Vec<f64>>, rtol: f64) -> Result<Self> {
        let n = origin.len();
        check_dim(n)?;
        if edges.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: edges.len(),
            });
        }
        for col in &edges {
            if col.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: col.len(),
                });
            }
        }
        for (j, v) in origin.iter().chain(edges.iter().flatten()).enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteCoordinate { axis: j % n + 1 });
            }
        }
        let t = DMatrix::from_fn(n, n, |i, j| edges[j][i]);
        let det = t.clone().lu().determinant();
        let scale: f64 = t.column_iter().map(|c| c.norm()).product();
        let threshold = rtol * scale;
        if det.is_nan() || det.abs() <= threshold {
            return Err(Error::SingularMatrix { det, threshold });
        }
        Ok(Self {
            origin: DVector::from_vec(origin),
            edges: t,
            det,
        })
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    pub fn origin(&self) -> &[f64] {
        self.origin.as_slice()
    }

    pub fn edge_matrix(&self) -> &DMatrix<f64> {
        &self.edges
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn marked(&self) -> VertexLabel {
        VertexLabel::all_ones(self.dim()).expect("dimension validated")
    }

    /// `φ(u) = origin + T·u`.
    pub fn map(&self, u: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| self.origin[i] + (0..n).map(|j| self.edges[(i, j)] * u[j]).sum::<f64>())
            .collect()
    }

    pub fn vertex(&self, label: &VertexLabel) -> Vec<f64> {
        self.map(&label.unit_point())
    }

    pub fn marked_point(&self) -> Vec<f64> {
        self.vertex(&self.marked())
    }

    pub fn vertices(&self) -> Vec<(VertexLabel, Vec<f64>)> {
        VertexLabel::all(self.dim())
            .expect("dimension validated")
            .map(|label| {
                let p = self.vertex(&label);
                (label, p)
            })
            .collect()
    }
}
