use serde::{Deserialize, Serialize};

use crate::error::{QapError, Result};
use crate::scalar::Weight;

/// A QAP instance: `n` facilities, `n` locations, a flow matrix between
/// facilities and a distance matrix between locations.
///
/// Both matrices are dense and row-major. Construction validates shape,
/// non-negativity, and that the worst-case objective (with headroom for
/// swap deltas) fits in `W`, so evaluation never overflows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QapInstance<W> {
    name: String,
    n: usize,
    flow: Vec<W>,
    distance: Vec<W>,
}

impl<W: Weight> QapInstance<W> {
    pub fn new(name: impl Into<String>, n: usize, flow: Vec<W>, distance: Vec<W>) -> Result<Self> {
        if n == 0 {
            return Err(QapError::EmptyInstance);
        }
        let expected = n.checked_mul(n).ok_or(QapError::Overflow)?;
        for (matrix, data) in [("flow", &flow), ("distance", &distance)] {
            if data.len() != expected {
                return Err(QapError::MatrixShape {
                    matrix,
                    n,
                    expected,
                    found: data.len(),
                });
            }
            if let Some(pos) = data
                .iter()
                .position(|&w| !w.is_admissible_entry() || w < W::zero())
            {
                return Err(QapError::InvalidEntry {
                    matrix,
                    row: pos / n,
                    col: pos % n,
                    value: data[pos].to_string(),
                });
            }
        }

        let inst = Self {
            name: name.into(),
            n,
            flow,
            distance,
        };
        // Swap deltas sum up to 4n terms of magnitude max(f)*max(d); the full
        // objective sums n^2 such terms. Require 4x headroom over the latter.
        let bound = 4.0 * (n as f64) * (n as f64) * inst.max_flow().as_f64() * inst.max_distance().as_f64();
        if !bound.is_finite() || bound >= W::max_value().as_f64() {
            return Err(QapError::Overflow);
        }
        Ok(inst)
    }

    /// Builds an instance from nested rows.
    pub fn from_rows(name: impl Into<String>, flow: &[Vec<W>], distance: &[Vec<W>]) -> Result<Self> {
        let n = flow.len();
        for (matrix, rows) in [("flow", flow), ("distance", distance)] {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(QapError::MatrixShape {
                    matrix,
                    n,
                    expected: n * n,
                    found: rows.iter().map(Vec::len).sum(),
                });
            }
        }
        Self::new(
            name,
            n,
            flow.iter().flatten().copied().collect(),
            distance.iter().flatten().copied().collect(),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Flow from facility `i` to facility `k`.
    #[inline]
    pub fn flow(&self, i: usize, k: usize) -> W {
        self.flow[i * self.n + k]
    }

    /// Distance from location `j` to location `l`.
    #[inline]
    pub fn distance(&self, j: usize, l: usize) -> W {
        self.distance[j * self.n + l]
    }

    #[inline]
    pub fn flow_row(&self, i: usize) -> &[W] {
        &self.flow[i * self.n..(i + 1) * self.n]
    }

    #[inline]
    pub fn distance_row(&self, j: usize) -> &[W] {
        &self.distance[j * self.n..(j + 1) * self.n]
    }

    pub fn flow_matrix(&self) -> &[W] {
        &self.flow
    }

    pub fn distance_matrix(&self) -> &[W] {
        &self.distance
    }

    pub fn max_flow(&self) -> W {
        max_of(&self.flow)
    }

    pub fn max_distance(&self) -> W {
        max_of(&self.distance)
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..i).all(|k| self.flow(i, k) == self.flow(k, i) && self.distance(i, k) == self.distance(k, i)))
    }

    /// Returns a copy under a different name.
    pub fn renamed(&self, name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..self.clone()
        }
    }
}

fn max_of<W: Weight>(data: &[W]) -> W {
    data.iter()
        .copied()
        .fold(W::zero(), |m, w| if w > m { w } else { m })
}
