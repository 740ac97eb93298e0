//! Objective evaluation and swap-neighborhood deltas.

use crate::assignment::{Assignment, SwapMove};
use crate::error::{QapError, Result};
use crate::instance::QapInstance;
use crate::scalar::Weight;

fn check_dims<W: Weight>(inst: &QapInstance<W>, a: &Assignment) -> Result<()> {
    if a.len() != inst.n() {
        return Err(QapError::DimensionMismatch {
            assignment: a.len(),
            instance: inst.n(),
        });
    }
    Ok(())
}

/// `sum_i sum_k flow(i,k) * distance(perm[i], perm[k])`, diagonal included.
pub fn evaluate<W: Weight>(inst: &QapInstance<W>, a: &Assignment) -> Result<W> {
    check_dims(inst, a)?;
    Ok(evaluate_unchecked(inst, a.as_slice()))
}

pub(crate) fn evaluate_unchecked<W: Weight>(inst: &QapInstance<W>, perm: &[usize]) -> W {
    let mut total = W::zero();
    for (i, &pi) in perm.iter().enumerate() {
        let frow = inst.flow_row(i);
        let drow = inst.distance_row(pi);
        for (&f, &pk) in frow.iter().zip(perm) {
            total += f * drow[pk];
        }
    }
    total
}

/// Cost change of swapping the locations of facilities `m.i` and `m.j`, in
/// O(n) and without building the swapped assignment. Handles asymmetric
/// matrices and non-zero diagonals.
pub fn swap_delta<W: Weight>(inst: &QapInstance<W>, a: &Assignment, m: SwapMove) -> Result<W> {
    check_dims(inst, a)?;
    m.check(inst.n())?;
    Ok(swap_delta_unchecked(inst, a.as_slice(), m.i, m.j))
}

pub(crate) fn swap_delta_unchecked<W: Weight>(inst: &QapInstance<W>, perm: &[usize], r: usize, s: usize) -> W {
    if r == s {
        return W::zero();
    }
    let (pr, ps) = (perm[r], perm[s]);
    let f = |i, k| inst.flow(i, k);
    let d = |j, l| inst.distance(j, l);

    let mut delta = (f(r, r) - f(s, s)) * (d(ps, ps) - d(pr, pr)) + (f(r, s) - f(s, r)) * (d(ps, pr) - d(pr, ps));
    for (k, &pk) in perm.iter().enumerate() {
        if k == r || k == s {
            continue;
        }
        delta += (f(k, r) - f(k, s)) * (d(pk, ps) - d(pk, pr)) + (f(r, k) - f(s, k)) * (d(ps, pk) - d(pr, pk));
    }
    delta
}

/// Cached deltas for every swap of the current assignment.
///
/// After a swap `(r, s)` is applied, moves disjoint from `{r, s}` are updated
/// in O(1) each and the `2n - 3` moves touching `r` or `s` are recomputed with
/// [`swap_delta`], so a full neighborhood refresh costs O(n^2) instead of O(n^3).
#[derive(Debug, Clone)]
pub struct SwapDeltaTable<W> {
    n: usize,
    deltas: Vec<W>,
}

impl<W: Weight> SwapDeltaTable<W> {
    pub fn new(inst: &QapInstance<W>, a: &Assignment) -> Result<Self> {
        check_dims(inst, a)?;
        let n = inst.n();
        let mut deltas = vec![W::zero(); n * n];
        for m in SwapMove::all(n) {
            deltas[m.i * n + m.j] = swap_delta_unchecked(inst, a.as_slice(), m.i, m.j);
        }
        Ok(Self { n, deltas })
    }

    /// Delta of `m` for the assignment the table currently tracks.
    #[inline]
    pub fn get(&self, m: SwapMove) -> W {
        let (i, j) = if m.i <= m.j { (m.i, m.j) } else { (m.j, m.i) };
        if i == j {
            W::zero()
        } else {
            self.deltas[i * self.n + j]
        }
    }

    /// Updates every entry after swap `(r, s)` has been applied; `after` is
    /// the assignment with the swap already performed.
    pub fn apply(&mut self, inst: &QapInstance<W>, after: &Assignment, m: SwapMove) {
        let n = self.n;
        let (r, s) = (m.i, m.j);
        if r == s {
            return;
        }
        let p = after.as_slice();
        let f = |i, k| inst.flow(i, k);
        let d = |j, l| inst.distance(j, l);
        let (pr, ps) = (p[r], p[s]);
        for u in 0..n {
            for v in u + 1..n {
                let idx = u * n + v;
                if u == r || u == s || v == r || v == s {
                    self.deltas[idx] = swap_delta_unchecked(inst, p, u, v);
                } else {
                    let (pu, pv) = (p[u], p[v]);
                    self.deltas[idx] += (f(r, u) - f(r, v) + f(s, v) - f(s, u))
                        * (d(ps, pu) - d(ps, pv) + d(pr, pv) - d(pr, pu))
                        + (f(u, r) - f(v, r) + f(v, s) - f(u, s)) * (d(pu, ps) - d(pv, ps) + d(pv, pr) - d(pu, pr));
                }
            }
        }
    }
}
