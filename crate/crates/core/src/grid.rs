//! Rectangular evaluation grids and a deterministic parallel map.

use crate::field::{Vec3, Vec4};

/// One uniformly spaced axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    /// Smallest coordinate.
    pub min: f64,
    /// Largest coordinate.
    pub max: f64,
    /// Number of grid points (at least 1; `min == max` requires count 1).
    pub count: usize,
}

impl Axis {
    /// Builds an axis, validating the bounds.
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self, String> {
        if !(min.is_finite() && max.is_finite()) {
            return Err("axis bounds must be finite".to_string());
        }
        if count == 0 {
            return Err("axis needs at least one point".to_string());
        }
        if count == 1 && min != max {
            return Err("a single-point axis needs min == max".to_string());
        }
        if count > 1 && min >= max {
            return Err("axis needs min < max".to_string());
        }
        Ok(Axis { min, max, count })
    }

    /// Coordinate of the `k`-th point.
    pub fn at(&self, k: usize) -> f64 {
        debug_assert!(k < self.count);
        if self.count == 1 {
            return self.min;
        }
        self.min + (self.max - self.min) * (k as f64) / ((self.count - 1) as f64)
    }

    /// Spacing between adjacent points (0 for a single-point axis).
    pub fn spacing(&self) -> f64 {
        if self.count <= 1 {
            0.0
        } else {
            (self.max - self.min) / ((self.count - 1) as f64)
        }
    }

    /// Index of the grid point nearest to `x`.
    pub fn nearest(&self, x: f64) -> usize {
        if self.count == 1 {
            return 0;
        }
        let t = (x - self.min) / (self.max - self.min) * ((self.count - 1) as f64);
        (t.round().max(0.0) as usize).min(self.count - 1)
    }
}

/// Rectangular grid over `(q, r, s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec3 {
    /// Axes in `(q, r, s)` order.
    pub axes: [Axis; 3],
}

impl GridSpec3 {
    /// Total number of points.
    pub fn len(&self) -> usize {
        self.axes[0].count * self.axes[1].count * self.axes[2].count
    }

    /// True when the grid has no points (never, by construction).
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Point at a 3-index.
    pub fn point(&self, idx: [usize; 3]) -> Vec3 {
        [
            self.axes[0].at(idx[0]),
            self.axes[1].at(idx[1]),
            self.axes[2].at(idx[2]),
        ]
    }

    /// Flattens a 3-index (`q` slowest, `s` fastest).
    pub fn linear(&self, idx: [usize; 3]) -> usize {
        (idx[0] * self.axes[1].count + idx[1]) * self.axes[2].count + idx[2]
    }

    /// Inverse of [`GridSpec3::linear`].
    pub fn unflatten(&self, lin: usize) -> [usize; 3] {
        let s = lin % self.axes[2].count;
        let rest = lin / self.axes[2].count;
        let r = rest % self.axes[1].count;
        let q = rest / self.axes[1].count;
        [q, r, s]
    }

    /// Iterates all 3-indices in linear order.
    pub fn indices(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        (0..self.len()).map(|lin| self.unflatten(lin))
    }

    /// 3-index of the grid point nearest to `p`.
    pub fn nearest(&self, p: Vec3) -> [usize; 3] {
        [
            self.axes[0].nearest(p[0]),
            self.axes[1].nearest(p[1]),
            self.axes[2].nearest(p[2]),
        ]
    }

    /// True for points not on the boundary of the index box.
    pub fn is_interior(&self, idx: [usize; 3]) -> bool {
        (0..3).all(|a| idx[a] > 0 && idx[a] + 1 < self.axes[a].count)
    }

    /// The up-to-six axis neighbours of an index, in fixed axis order.
    pub fn neighbours(&self, idx: [usize; 3]) -> Vec<[usize; 3]> {
        let mut out = Vec::with_capacity(6);
        for a in 0..3 {
            if idx[a] > 0 {
                let mut n = idx;
                n[a] -= 1;
                out.push(n);
            }
            if idx[a] + 1 < self.axes[a].count {
                let mut n = idx;
                n[a] += 1;
                out.push(n);
            }
        }
        out
    }
}

/// Rectangular grid over `(p, q, r, s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec4 {
    /// Axes in `(p, q, r, s)` order.
    pub axes: [Axis; 4],
}

impl GridSpec4 {
    /// Total number of points.
    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    /// True when the grid has no points (never, by construction).
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Point at a 4-index.
    pub fn point(&self, idx: [usize; 4]) -> Vec4 {
        std::array::from_fn(|a| self.axes[a].at(idx[a]))
    }

    /// Iterates all 4-indices, last axis fastest.
    pub fn indices(&self) -> impl Iterator<Item = [usize; 4]> + '_ {
        let counts = [
            self.axes[0].count,
            self.axes[1].count,
            self.axes[2].count,
            self.axes[3].count,
        ];
        (0..self.len()).map(move |lin| {
            let s = lin % counts[3];
            let rest = lin / counts[3];
            let r = rest % counts[2];
            let rest = rest / counts[2];
            let q = rest % counts[1];
            let p = rest / counts[1];
            [p, q, r, s]
        })
    }

    /// True for points not on the boundary of the index box.
    pub fn is_interior(&self, idx: [usize; 4]) -> bool {
        (0..4).all(|a| idx[a] > 0 && idx[a] + 1 < self.axes[a].count)
    }
}

/// Resolves a requested thread cap: 0 means all available cores.
pub fn thread_count(cap: usize) -> usize {
    let avail = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    if cap == 0 {
        avail
    } else {
        cap.min(avail).max(1)
    }
}

/// Applies `f` to `0..n` on up to `threads` OS threads and returns results
/// in index order. The split is by contiguous chunks, so the output is
/// identical to the sequential map regardless of thread count.
pub fn map_indexed_parallel<T, F>(n: usize, threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let threads = thread_count(threads).min(n.max(1));
    if threads <= 1 || n <= 1 {
        return (0..n).map(f).collect();
    }
    let chunk = n.div_ceil(threads);
    let mut pieces: Vec<Vec<T>> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for t in 0..threads {
            let lo = t * chunk;
            let hi = ((t + 1) * chunk).min(n);
            if lo >= hi {
                break;
            }
            let f = &f;
            handles.push(scope.spawn(move || (lo..hi).map(f).collect::<Vec<T>>()));
        }
        for h in handles {
            pieces.push(h.join().expect("worker thread panicked"));
        }
    });
    let mut out = Vec::with_capacity(n);
    for p in pieces {
        out.extend(p);
    }
    out
}
