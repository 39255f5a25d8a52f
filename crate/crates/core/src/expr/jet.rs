//! Second-order forward-mode jets over ℂ.
//!
//! A [`Jet2`] carries a value, the first partials with respect to up to
//! three declared variables, and the full symmetric matrix of second
//! partials. Propagation rules are the exact holomorphic chain rule, so the
//! derivatives are exact up to rounding (no truncation error). Mixed
//! partials are computed once and mirrored, so symmetry holds exactly.

use num_complex::Complex64 as C64;

/// Hard cap on the number of jet variables (two for user expressions, three
/// for the implicit-surface route).
pub const MAX_VARS: usize = 3;

/// Value, gradient and Hessian of a holomorphic expression at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    n: usize,
    v: C64,
    d: [C64; MAX_VARS],
    d2: [[C64; MAX_VARS]; MAX_VARS],
}

const ZERO: C64 = C64::new(0.0, 0.0);

impl Jet2 {
    /// Jet of a constant.
    pub fn constant(n: usize, value: C64) -> Self {
        assert!(n <= MAX_VARS);
        Jet2 {
            n,
            v: value,
            d: [ZERO; MAX_VARS],
            d2: [[ZERO; MAX_VARS]; MAX_VARS],
        }
    }

    /// Jet of the `idx`-th variable seeded at `value`.
    pub fn variable(n: usize, idx: usize, value: C64) -> Self {
        assert!(idx < n && n <= MAX_VARS);
        let mut jet = Jet2::constant(n, value);
        jet.d[idx] = C64::new(1.0, 0.0);
        jet
    }

    /// Number of active variables.
    pub fn nvars(&self) -> usize {
        self.n
    }

    /// Value of the expression.
    pub fn value(&self) -> C64 {
        self.v
    }

    /// First partial with respect to variable `i`.
    pub fn d(&self, i: usize) -> C64 {
        assert!(i < self.n);
        self.d[i]
    }

    /// Second partial with respect to variables `i` and `j`.
    pub fn d2(&self, i: usize, j: usize) -> C64 {
        assert!(i < self.n && j < self.n);
        self.d2[i][j]
    }

    /// True when value and all stored partials are finite.
    pub fn is_finite(&self) -> bool {
        let finite = |c: C64| c.re.is_finite() && c.im.is_finite();
        if !finite(self.v) {
            return false;
        }
        for i in 0..self.n {
            if !finite(self.d[i]) {
                return false;
            }
            for j in 0..=i {
                if !finite(self.d2[i][j]) {
                    return false;
                }
            }
        }
        true
    }

    /// Sum of two jets over the same variables.
    pub fn add(&self, rhs: &Jet2) -> Jet2 {
        debug_assert_eq!(self.n, rhs.n);
        let mut out = *self;
        out.v += rhs.v;
        for i in 0..self.n {
            out.d[i] += rhs.d[i];
            for j in 0..=i {
                let s = self.d2[i][j] + rhs.d2[i][j];
                out.d2[i][j] = s;
                out.d2[j][i] = s;
            }
        }
        out
    }

    /// Difference of two jets.
    pub fn sub(&self, rhs: &Jet2) -> Jet2 {
        self.add(&rhs.neg())
    }

    /// Negation.
    pub fn neg(&self) -> Jet2 {
        let mut out = *self;
        out.v = -out.v;
        for i in 0..self.n {
            out.d[i] = -out.d[i];
            for j in 0..self.n {
                out.d2[i][j] = -out.d2[i][j];
            }
        }
        out
    }

    /// Product rule.
    pub fn mul(&self, rhs: &Jet2) -> Jet2 {
        debug_assert_eq!(self.n, rhs.n);
        let mut out = Jet2::constant(self.n, self.v * rhs.v);
        for i in 0..self.n {
            out.d[i] = self.d[i] * rhs.v + self.v * rhs.d[i];
            for j in 0..=i {
                let s = self.d2[i][j] * rhs.v
                    + self.d[i] * rhs.d[j]
                    + self.d[j] * rhs.d[i]
                    + self.v * rhs.d2[i][j];
                out.d2[i][j] = s;
                out.d2[j][i] = s;
            }
        }
        out
    }

    /// Quotient rule via the reciprocal; `None` when the divisor is zero.
    pub fn div(&self, rhs: &Jet2) -> Option<Jet2> {
        Some(self.mul(&rhs.recip()?))
    }

    /// Reciprocal; `None` at a zero.
    pub fn recip(&self) -> Option<Jet2> {
        if self.v == ZERO {
            return None;
        }
        let inv = 1.0 / self.v;
        let inv2 = inv * inv;
        let mut out = Jet2::constant(self.n, inv);
        for i in 0..self.n {
            out.d[i] = -self.d[i] * inv2;
            for j in 0..=i {
                let s = (2.0 * self.d[i] * self.d[j] * inv - self.d2[i][j]) * inv2;
                out.d2[i][j] = s;
                out.d2[j][i] = s;
            }
        }
        Some(out)
    }

    /// Integer power `g^k`; `None` when `g = 0` and `k < 2` makes a
    /// derivative singular (negative exponents at zero, or first/second
    /// derivative of `g^1`/`g^0` needing `g^{-1}`).
    pub fn powi(&self, k: i32) -> Option<Jet2> {
        if k == 0 {
            return Some(Jet2::constant(self.n, C64::new(1.0, 0.0)));
        }
        if self.v == ZERO && k < 0 {
            return None;
        }
        let kf = C64::from(k as f64);
        let f0 = self.v.powi(k);
        let f1 = kf * self.v.powi(k - 1);
        let f2 = if k == 1 {
            ZERO
        } else {
            kf * C64::from((k - 1) as f64) * self.v.powi(k - 2)
        };
        Some(self.chain(f0, f1, f2))
    }

    /// Exponential.
    pub fn exp(&self) -> Jet2 {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    /// Principal-branch logarithm; `None` at zero.
    pub fn log(&self) -> Option<Jet2> {
        if self.v == ZERO {
            return None;
        }
        let f1 = 1.0 / self.v;
        Some(self.chain(self.v.ln(), f1, -f1 * f1))
    }

    /// Principal-branch square root (so `sqrt(1) = 1`); `None` at zero,
    /// where the derivative blows up.
    pub fn sqrt(&self) -> Option<Jet2> {
        if self.v == ZERO {
            return None;
        }
        let s = self.v.sqrt();
        let f1 = 0.5 / s;
        let f2 = -0.25 / (s * s * s);
        Some(self.chain(s, f1, f2))
    }

    /// Sine.
    pub fn sin(&self) -> Jet2 {
        let (s, c) = (self.v.sin(), self.v.cos());
        self.chain(s, c, -s)
    }

    /// Cosine.
    pub fn cos(&self) -> Jet2 {
        let (s, c) = (self.v.sin(), self.v.cos());
        self.chain(c, -s, -c)
    }

    /// Chain rule for a scalar function with value `f0` and derivatives
    /// `f1`, `f2` at `self.value()`.
    fn chain(&self, f0: C64, f1: C64, f2: C64) -> Jet2 {
        let mut out = Jet2::constant(self.n, f0);
        for i in 0..self.n {
            out.d[i] = f1 * self.d[i];
            for j in 0..=i {
                let s = f2 * self.d[i] * self.d[j] + f1 * self.d2[i][j];
                out.d2[i][j] = s;
                out.d2[j][i] = s;
            }
        }
        out
    }
}
