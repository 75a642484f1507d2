use alloc::vec::Vec;
use core::fmt;

/// Error raised when constructing a [`PointBuffer`] from raw data.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PointError {
    #[error("coordinate buffer has {found} entries, expected {n_points} x {dim}")]
    Shape { n_points: usize, dim: usize, found: usize },
    #[error("dimension must be at least 1")]
    ZeroDim,
    #[error("coordinate {value} at row {row}, column {col} is outside [0, 1]")]
    OutOfRange { row: usize, col: usize, value: f64 },
}

/// `n_points x dim` row-major matrix of coordinates in `[0, 1]`.
#[derive(Clone, PartialEq)]
pub struct PointBuffer {
    n_points: usize,
    dim: usize,
    coords: Vec<f64>,
}

impl PointBuffer {
    /// Empty buffer of the given dimension.
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        PointBuffer {
            n_points: 0,
            dim,
            coords: Vec::new(),
        }
    }

    pub fn with_capacity(dim: usize, n_points: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        PointBuffer {
            n_points: 0,
            dim,
            coords: Vec::with_capacity(n_points * dim),
        }
    }

    /// Wraps a flat row-major buffer, validating shape and range.
    pub fn from_flat(n_points: usize, dim: usize, coords: Vec<f64>) -> Result<Self, PointError> {
        if dim == 0 {
            return Err(PointError::ZeroDim);
        }
        if coords.len() != n_points * dim {
            return Err(PointError::Shape {
                n_points,
                dim,
                found: coords.len(),
            });
        }
        for (idx, &value) in coords.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(PointError::OutOfRange {
                    row: idx / dim,
                    col: idx % dim,
                    value,
                });
            }
        }
        Ok(PointBuffer { n_points, dim, coords })
    }

    /// Builds a buffer from rows; every row must have the same length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, PointError> {
        let dim = rows.first().map_or(0, |r| r.as_ref().len());
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(PointError::Shape {
                    n_points: rows.len(),
                    dim,
                    found: coords.len() + row.len(),
                });
            }
            coords.extend_from_slice(row);
        }
        Self::from_flat(rows.len(), dim, coords)
    }

    /// Appends a row. Panics if its length differs from `dim` or a
    /// coordinate leaves `[0, 1]`.
    pub fn push(&mut self, row: &[f64]) {
        assert_eq!(row.len(), self.dim, "row length must equal dimension");
        assert!(
            row.iter().all(|v| (0.0..=1.0).contains(v)),
            "coordinates must lie in [0, 1]"
        );
        self.coords.extend_from_slice(row);
        self.n_points += 1;
    }

    #[inline]
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n_points
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n_points == 0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// Copy of the first `n` points.
    pub fn prefix(&self, n: usize) -> PointBuffer {
        let n = n.min(self.n_points);
        PointBuffer {
            n_points: n,
            dim: self.dim,
            coords: self.coords[..n * self.dim].to_vec(),
        }
    }

    /// Volume of the axis-aligned bounding box of all points.
    pub fn bounding_box_volume(&self) -> f64 {
        if self.n_points == 0 {
            return 0.0;
        }
        (0..self.dim)
            .map(|j| {
                let (lo, hi) = self.rows().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                    (lo.min(r[j]), hi.max(r[j]))
                });
                hi - lo
            })
            .product()
    }
}

impl fmt::Debug for PointBuffer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PointBuffer")
            .field("n_points", &self.n_points)
            .field("dim", &self.dim)
            .finish_non_exhaustive()
    }
}
