//! Null 1-forms on ℝ³ and the two holomorphic-potential constructions that
//! produce closed ones.
//!
//! A 1-form `ω = a dq + b dr + c ds` with complex coefficients is *null*
//! when `a² + b² + c² = 0`. Every nowhere-zero closed null form is locally
//! `dh` for a horizontally conformal map `h`, and its direction field spans
//! a conformal foliation. Two constructions are implemented:
//!
//! * the Lagrangian route ([`XiSolver`]): a potential `Ξ(z₁, z₂)` defines a
//!   surface `z = Ξ₁`, `w = −Ξ₂` under the incidence substitution
//!   `z₁ = (r+is)z − iqw`, `z₂ = iqz − (r−is)w`, and
//!   `ω = 2wz dq + i(w²+z²) dr + (w²−z²) ds` is closed and null;
//! * the graph route ([`NurowskiSolver`]): a potential `F(z, w)` defines the
//!   surface `z₁ = −F_z`, `z₂ = F_w`, which parametrizes the same objects
//!   wherever the Hessian duality between the two potentials is invertible.
//!
//! The residual operators ([`closedness_residual`], [`wedge_residual`],
//! [`key_operator_residual`], [`dzdw_degeneracy`]) consume fields
//! abstractly, so they apply to either route or to synthetic controls.

pub mod potential;

use crate::expr::{ExprError, HoloExpr};
use crate::field::{central_diff3, C64, FdStep, Field3, FieldError, Vec3};
use crate::grid::{map_indexed_parallel, GridSpec3};
use crate::newton::{newton_c2, SampleStatus, SolveError};

/// A 1-form `a dq + b dr + c ds` with complex coefficients at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullForm {
    /// Coefficient of `dq`.
    pub a: C64,
    /// Coefficient of `dr`.
    pub b: C64,
    /// Coefficient of `ds`.
    pub c: C64,
}

impl NullForm {
    /// Coefficients as an array `[a, b, c]`.
    pub fn coefficients(&self) -> [C64; 3] {
        [self.a, self.b, self.c]
    }

    /// `a² + b² + c²`; zero exactly for forms built by [`make_omega`].
    pub fn nullity(&self) -> C64 {
        self.a * self.a + self.b * self.b + self.c * self.c
    }

    /// Euclidean size `√(|a|² + |b|² + |c|²)`.
    pub fn norm(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr()).sqrt()
    }
}

/// The null form `ω = 2wz dq + i(w² + z²) dr + (w² − z²) ds`.
///
/// Null by the algebraic identity `(2wz)² − (w²+z²)² + (w²−z²)² = 0`, and
/// nonzero whenever `w ≠ 0` or `z ≠ 0`. With `w = 1` this is the
/// fibre-chart form `2z dq + i(1+z²) dr + (1−z²) ds` whose wedge residual
/// reproduces the first-order conformality test.
pub fn make_omega(z: C64, w: C64) -> NullForm {
    let i = C64::i();
    NullForm {
        a: 2.0 * w * z,
        b: i * (w * w + z * z),
        c: w * w - z * z,
    }
}

/// One solved point of a `(z, w)` field.
#[derive(Debug, Clone, Copy)]
pub struct ZwSample {
    /// Where the solve was attempted.
    pub point: Vec3,
    /// First fibre coordinate.
    pub z: C64,
    /// Second fibre coordinate (the forms are degenerate where it joins
    /// `z` at zero).
    pub w: C64,
    /// Solve outcome.
    pub status: SampleStatus,
    /// Newton iterations used.
    pub iters: usize,
    /// True when the solved point yields a vanishing form (`z ≈ w ≈ 0`),
    /// where the construction breaks down.
    pub degenerate: bool,
}

impl ZwSample {
    /// The rescaling factor `e^ψ = w²` that makes the fibre-chart form
    /// closed for this family.
    pub fn psi_scale(&self) -> C64 {
        self.w * self.w
    }

    /// The null form at this sample.
    pub fn omega(&self) -> NullForm {
        make_omega(self.z, self.w)
    }
}

const DEGENERATE_TOL: f64 = 1e-8;

fn finish_sample(point: Vec3, out: crate::newton::Newton2Result) -> ZwSample {
    let (z, w) = out.zw;
    ZwSample {
        point,
        z,
        w,
        status: out.status,
        iters: out.iters,
        degenerate: out.status.is_ok() && z.norm() + w.norm() < DEGENERATE_TOL,
    }
}

/// Pointwise `(z, w)` solver, the interface grid continuation works
/// against. Implemented by both potential routes.
pub trait ZwSolve: Sync {
    /// Solves at a point from a seed.
    fn solve_zw(&self, point: Vec3, seed: (C64, C64)) -> ZwSample;

    /// Reconstructs the error behind a failed sample by re-evaluating the
    /// system at the final iterate.
    fn describe_failure(&self, sample: &ZwSample) -> SolveError;

    /// Like [`ZwSolve::solve_zw`] but converts a failed status to an error.
    fn solve_zw_ok(&self, point: Vec3, seed: (C64, C64)) -> Result<ZwSample, FieldError> {
        promote(self, self.solve_zw(point, seed))
    }
}

fn promote<S: ZwSolve + ?Sized>(solver: &S, sample: ZwSample) -> Result<ZwSample, FieldError> {
    if sample.status.is_ok() {
        Ok(sample)
    } else {
        Err(FieldError::Solve {
            at: sample.point,
            source: solver.describe_failure(&sample),
        })
    }
}

type SysEval = Result<([C64; 2], [[C64; 2]; 2]), String>;

fn failure_from_eval(sample: &ZwSample, eval: SysEval) -> SolveError {
    match eval {
        Err(msg) => SolveError::Eval(msg),
        Ok((res, jac)) => {
            let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
            match sample.status {
                SampleStatus::SingularJacobian => SolveError::SingularJacobian { det: det.norm() },
                _ => SolveError::NoConverge {
                    iters: sample.iters,
                    residual: res[0].norm().max(res[1].norm()),
                },
            }
        }
    }
}

/// Values and first partials of the surface components `(Ξ₁, Ξ₂)` at a
/// point of ℂ². `d[i][j] = ∂Ξ_{i+1} / ∂z_{j+1}`.
#[derive(Debug, Clone, Copy)]
pub struct XiJet {
    /// `Ξ₁` value.
    pub xi1: C64,
    /// `Ξ₂` value.
    pub xi2: C64,
    /// First partials.
    pub d: [[C64; 2]; 2],
}

/// The surface data `(Ξ₁, Ξ₂)` on ℂ², in one of three representations.
#[derive(Debug, Clone)]
pub enum XiMap {
    /// A potential `Ξ(z₁, z₂)` with `Ξⱼ = ∂Ξ/∂zⱼ`; the surface is
    /// automatically Lagrangian.
    Potential(HoloExpr),
    /// Explicit components, each a 2-variable expression; Lagrangian only
    /// when `∂Ξ₂/∂z₁ = ∂Ξ₁/∂z₂` (see [`lagrangian_residual`]).
    Components {
        /// `Ξ₁(z₁, z₂)`.
        xi1: HoloExpr,
        /// `Ξ₂(z₁, z₂)`.
        xi2: HoloExpr,
    },
    /// The worked inverse-cubic family: `Ξ₁ ≡ 0` and `Ξ₂ = −g(z₂)` where
    /// `g` inverts `ζ ↦ i(ζ³ − ζ)` on the branch through `g(0) = 1`.
    /// `g` has no closed form and is evaluated by an inner Newton solve.
    InverseCubic,
}

/// Solves `i(g³ − g) = z₂` for `g` near `hint`; returns `(g, g')` with
/// `g' = 1 / (i(3g² − 1))`.
fn inverse_cubic_g(z2: C64, hint: C64) -> Result<(C64, C64), String> {
    let i = C64::i();
    let phi = |g: C64| i * (g * g * g - g);
    let dphi = |g: C64| i * (3.0 * g * g - 1.0);
    let tol = 1e-14 * (1.0 + z2.norm());
    let mut g = hint;
    for _ in 0..80 {
        let val = phi(g) - z2;
        if val.norm() < tol {
            return Ok((g, 1.0 / dphi(g)));
        }
        let deriv = dphi(g);
        if deriv.norm() < 1e-12 {
            return Err(format!("inverse-cubic branch point near g = {g}"));
        }
        g -= val / deriv;
    }
    if (phi(g) - z2).norm() < tol {
        Ok((g, 1.0 / dphi(g)))
    } else {
        Err(format!("inverse-cubic inversion stalled at g = {g}"))
    }
}

impl XiMap {
    fn arity_ok(&self) -> bool {
        match self {
            XiMap::Potential(xi) => xi.nvars() == 2,
            XiMap::Components { xi1, xi2 } => xi1.nvars() == 2 && xi2.nvars() == 2,
            XiMap::InverseCubic => true,
        }
    }

    /// Evaluates the components and their first partials at `(z1, z2)`.
    /// `hint` seeds any inner inversion (pass the current `w` iterate, or
    /// `1` when nothing better is known).
    pub fn eval(&self, z1: C64, z2: C64, hint: C64) -> Result<XiJet, String> {
        let zero = C64::new(0.0, 0.0);
        match self {
            XiMap::Potential(xi) => {
                let jet = xi.eval_jet2(&[z1, z2]).map_err(|e| e.to_string())?;
                Ok(XiJet {
                    xi1: jet.d(0),
                    xi2: jet.d(1),
                    d: [
                        [jet.d2(0, 0), jet.d2(0, 1)],
                        [jet.d2(1, 0), jet.d2(1, 1)],
                    ],
                })
            }
            XiMap::Components { xi1, xi2 } => {
                let j1 = xi1.eval_jet2(&[z1, z2]).map_err(|e| e.to_string())?;
                let j2 = xi2.eval_jet2(&[z1, z2]).map_err(|e| e.to_string())?;
                Ok(XiJet {
                    xi1: j1.value(),
                    xi2: j2.value(),
                    d: [[j1.d(0), j1.d(1)], [j2.d(0), j2.d(1)]],
                })
            }
            XiMap::InverseCubic => {
                let (g, gp) = inverse_cubic_g(z2, hint)?;
                Ok(XiJet {
                    xi1: zero,
                    xi2: -g,
                    d: [[zero, zero], [zero, -gp]],
                })
            }
        }
    }

    /// `(|Ξ₁(0,0)|, |Ξ₂(0,0) + 1|)`: both vanish for the normalization that
    /// makes the solved field take the value `(0, 1)` at the origin.
    pub fn normalization_defect(&self) -> Result<(f64, f64), String> {
        let zero = C64::new(0.0, 0.0);
        let jet = self.eval(zero, zero, C64::new(1.0, 0.0))?;
        Ok((jet.xi1.norm(), (jet.xi2 + 1.0).norm()))
    }
}

/// Shared knobs: reuse the foliation solver configuration.
pub type SolverConfig = crate::foliation::SolverConfig;

/// Newton solver for the Lagrangian-route field
/// `z = Ξ₁(z₁, z₂)`, `w = −Ξ₂(z₁, z₂)` under the incidence substitution.
#[derive(Debug, Clone)]
pub struct XiSolver {
    map: XiMap,
    config: SolverConfig,
}

impl XiSolver {
    /// Builds a solver for the given surface data.
    ///
    /// # Panics
    /// If an expression-backed representation does not have exactly two
    /// variables.
    pub fn new(map: XiMap, config: SolverConfig) -> Self {
        assert!(
            map.arity_ok(),
            "surface components take 2-variable expressions in (z1, z2)"
        );
        XiSolver { map, config }
    }

    /// The surface data.
    pub fn map(&self) -> &XiMap {
        &self.map
    }

    /// The solver configuration.
    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    fn eval_system(&self, point: Vec3, z: C64, w: C64) -> SysEval {
        let [q, r, s] = point;
        let alpha = C64::new(r, s);
        let beta = C64::new(0.0, -q);
        let z1 = alpha * z + beta * w;
        let z2 = -beta * z - alpha.conj() * w;
        let jet = self.map.eval(z1, z2, w)?;
        let res = [z - jet.xi1, w + jet.xi2];
        let jac = [
            [
                C64::new(1.0, 0.0) - (jet.d[0][0] * alpha - jet.d[0][1] * beta),
                -(jet.d[0][0] * beta - jet.d[0][1] * alpha.conj()),
            ],
            [
                jet.d[1][0] * alpha - jet.d[1][1] * beta,
                C64::new(1.0, 0.0) + jet.d[1][0] * beta - jet.d[1][1] * alpha.conj(),
            ],
        ];
        Ok((res, jac))
    }

    /// Solves for `(z, w)` at a point, seeded by `seed` (use `(0, 1)` at
    /// the origin for normalized surface data).
    pub fn solve_at(&self, point: Vec3, seed: (C64, C64)) -> ZwSample {
        let sys = |z: C64, w: C64| self.eval_system(point, z, w);
        let out = newton_c2(sys, seed, self.config.newton_tol, self.config.max_iters);
        finish_sample(point, out)
    }

    /// Like [`XiSolver::solve_at`] but converts a failed status to an error.
    pub fn solve_ok(&self, point: Vec3, seed: (C64, C64)) -> Result<ZwSample, FieldError> {
        promote(self, self.solve_at(point, seed))
    }
}

impl ZwSolve for XiSolver {
    fn solve_zw(&self, point: Vec3, seed: (C64, C64)) -> ZwSample {
        self.solve_at(point, seed)
    }

    fn describe_failure(&self, sample: &ZwSample) -> SolveError {
        failure_from_eval(sample, self.eval_system(sample.point, sample.z, sample.w))
    }
}

/// Newton solver for the graph-route field: `(z, w)` with
/// `(r+is)z − iqw = −F_z(z, w)` and `iqz − (r−is)w = F_w(z, w)`.
#[derive(Debug, Clone)]
pub struct NurowskiSolver {
    potential: HoloExpr,
    config: SolverConfig,
}

impl NurowskiSolver {
    /// Builds a solver for the potential `F(z, w)`.
    ///
    /// # Panics
    /// If the expression does not have exactly two variables.
    pub fn new(potential: HoloExpr, config: SolverConfig) -> Self {
        assert!(
            potential.nvars() == 2,
            "graph-route potential takes a 2-variable expression in (z, w)"
        );
        NurowskiSolver { potential, config }
    }

    /// The potential `F`.
    pub fn potential(&self) -> &HoloExpr {
        &self.potential
    }

    /// The solver configuration.
    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    fn eval_system(&self, point: Vec3, z: C64, w: C64) -> SysEval {
        let [q, r, s] = point;
        let alpha = C64::new(r, s);
        let beta = C64::new(0.0, -q);
        let jet = self
            .potential
            .eval_jet2(&[z, w])
            .map_err(|e| e.to_string())?;
        let res = [
            alpha * z + beta * w + jet.d(0),
            -beta * z - alpha.conj() * w - jet.d(1),
        ];
        let jac = [
            [alpha + jet.d2(0, 0), beta + jet.d2(0, 1)],
            [-beta - jet.d2(1, 0), -alpha.conj() - jet.d2(1, 1)],
        ];
        Ok((res, jac))
    }

    /// Solves for `(z, w)` at a point. A solution with `z ≈ w ≈ 0` is
    /// flagged degenerate: the form vanishes there and the construction
    /// gives no foliation direction.
    pub fn solve_at(&self, point: Vec3, seed: (C64, C64)) -> ZwSample {
        let sys = |z: C64, w: C64| self.eval_system(point, z, w);
        let out = newton_c2(sys, seed, self.config.newton_tol, self.config.max_iters);
        finish_sample(point, out)
    }

    /// Like [`NurowskiSolver::solve_at`] but converts a failed status to an
    /// error.
    pub fn solve_ok(&self, point: Vec3, seed: (C64, C64)) -> Result<ZwSample, FieldError> {
        promote(self, self.solve_at(point, seed))
    }
}

impl ZwSolve for NurowskiSolver {
    fn solve_zw(&self, point: Vec3, seed: (C64, C64)) -> ZwSample {
        self.solve_at(point, seed)
    }

    fn describe_failure(&self, sample: &ZwSample) -> SolveError {
        failure_from_eval(sample, self.eval_system(sample.point, sample.z, sample.w))
    }
}

/// A `(z, w)` field solved over a grid by breadth-first continuation.
#[derive(Debug, Clone)]
pub struct ZwGrid {
    /// The grid geometry.
    pub spec: GridSpec3,
    /// Samples in linear grid order.
    pub samples: Vec<ZwSample>,
    /// Linear indices in the order they were solved.
    pub solve_order: Vec<usize>,
}

impl ZwGrid {
    /// Sample at a 3-index.
    pub fn sample(&self, idx: [usize; 3]) -> &ZwSample {
        &self.samples[self.spec.linear(idx)]
    }

    /// Fraction of samples with ok status.
    pub fn ok_fraction(&self) -> f64 {
        let ok = self.samples.iter().filter(|s| s.status.is_ok()).count();
        ok as f64 / self.samples.len().max(1) as f64
    }
}

/// Solves a `(z, w)` field over `spec` breadth-first from the grid point
/// nearest `seed_point`, seeding each newly discovered point with its
/// parent's solution. Deterministic layer order; solves within a layer may
/// run on up to `threads` OS threads (0 = all cores). Fails only when the
/// starting point itself does not solve.
pub fn grid_zw<S>(
    solver: &S,
    spec: &GridSpec3,
    seed_point: Vec3,
    seed: (C64, C64),
    threads: usize,
) -> Result<ZwGrid, FieldError>
where
    S: ZwSolve + ?Sized,
{
    let n = spec.len();
    let start = spec.nearest(seed_point);
    let start_lin = spec.linear(start);
    let first = promote(solver, solver.solve_zw(spec.point(start), seed))?;

    let mut samples: Vec<Option<ZwSample>> = vec![None; n];
    let mut discovered = vec![false; n];
    let mut order = Vec::with_capacity(n);
    samples[start_lin] = Some(first);
    discovered[start_lin] = true;
    order.push(start_lin);

    let mut frontier = vec![start_lin];
    while !frontier.is_empty() {
        let mut next: Vec<(usize, (C64, C64))> = Vec::new();
        for &lin in &frontier {
            let parent = samples[lin].as_ref().expect("frontier points are solved");
            let donated = if parent.status.is_ok() {
                (parent.z, parent.w)
            } else {
                seed
            };
            for nb in spec.neighbours(spec.unflatten(lin)) {
                let nb_lin = spec.linear(nb);
                if !discovered[nb_lin] {
                    discovered[nb_lin] = true;
                    next.push((nb_lin, donated));
                }
            }
        }
        let solved = map_indexed_parallel(next.len(), threads, |i| {
            let (lin, zw0) = next[i];
            solver.solve_zw(spec.point(spec.unflatten(lin)), zw0)
        });
        frontier = Vec::with_capacity(next.len());
        for ((lin, _), sample) in next.iter().zip(solved) {
            samples[*lin] = Some(sample);
            order.push(*lin);
            frontier.push(*lin);
        }
    }

    Ok(ZwGrid {
        spec: spec.clone(),
        samples: samples
            .into_iter()
            .map(|s| s.expect("grid is connected, every point is visited"))
            .collect(),
        solve_order: order,
    })
}

/// `∂Ξ₂/∂z₁ − ∂Ξ₁/∂z₂` at a point of ℂ²: zero iff the pair of components
/// admits a potential locally (the surface is Lagrangian).
pub fn lagrangian_residual(
    xi1: &HoloExpr,
    xi2: &HoloExpr,
    point: [C64; 2],
) -> Result<C64, ExprError> {
    let j1 = xi1.eval_jet2(&point)?;
    let j2 = xi2.eval_jet2(&point)?;
    Ok(j2.d(0) - j1.d(1))
}

/// Largest curl component of a form field, by central differences:
/// `max(|∂_q b − ∂_r a|, |∂_q c − ∂_s a|, |∂_r c − ∂_s b|)`.
/// Zero iff the form is closed at the point.
pub fn closedness_residual<F>(omega: &F, point: Vec3, fd: FdStep) -> Result<f64, FieldError>
where
    F: Field3<[C64; 3]> + ?Sized,
{
    let dq: [C64; 3] = central_diff3(omega, point, 0, fd)?;
    let dr: [C64; 3] = central_diff3(omega, point, 1, fd)?;
    let ds: [C64; 3] = central_diff3(omega, point, 2, fd)?;
    let curl = [dq[1] - dr[0], dq[2] - ds[0], dr[2] - ds[1]];
    Ok(curl.iter().fold(0.0f64, |m, v| m.max(v.norm())))
}

/// Coefficient of `ω ∧ dω` against `dq ∧ dr ∧ ds`, by central differences:
/// `a(∂_r c − ∂_s b) − b(∂_q c − ∂_s a) + c(∂_q b − ∂_r a)`.
///
/// For the fibre-chart form (`make_omega(z, 1)`) this equals `2i` times the
/// first-order conformality residual of `z`.
pub fn wedge_residual<F>(omega: &F, point: Vec3, fd: FdStep) -> Result<C64, FieldError>
where
    F: Field3<[C64; 3]> + ?Sized,
{
    let [a, b, c] = omega.at(point)?;
    let dq: [C64; 3] = central_diff3(omega, point, 0, fd)?;
    let dr: [C64; 3] = central_diff3(omega, point, 1, fd)?;
    let ds: [C64; 3] = central_diff3(omega, point, 2, fd)?;
    Ok(a * (dr[2] - ds[1]) - b * (dq[2] - ds[0]) + c * (dq[1] - dr[0]))
}

/// Applies the first-order operator
/// `2wz ∂_q + i(w²+z²) ∂_r + (w²−z²) ∂_s` to both components of a `(z, w)`
/// field by central differences. Both results vanish iff the graph of the
/// field is invariant under the ambient complex structure.
pub fn key_operator_residual<F>(
    zw: &F,
    point: Vec3,
    fd: FdStep,
) -> Result<(C64, C64), FieldError>
where
    F: Field3<(C64, C64)> + ?Sized,
{
    let (z, w) = zw.at(point)?;
    let dq: (C64, C64) = central_diff3(zw, point, 0, fd)?;
    let dr: (C64, C64) = central_diff3(zw, point, 1, fd)?;
    let ds: (C64, C64) = central_diff3(zw, point, 2, fd)?;
    let om = make_omega(z, w);
    Ok((
        om.a * dq.0 + om.b * dr.0 + om.c * ds.0,
        om.a * dq.1 + om.b * dr.1 + om.c * ds.1,
    ))
}

/// Euclidean size of the three components of `dz ∧ dw`, by central
/// differences. A near-zero value flags a point where the graph-route
/// potential `F` cannot exist (the surface fails to be a graph over
/// `(z, w)` there).
pub fn dzdw_degeneracy<F>(zw: &F, point: Vec3, fd: FdStep) -> Result<f64, FieldError>
where
    F: Field3<(C64, C64)> + ?Sized,
{
    let dq: (C64, C64) = central_diff3(zw, point, 0, fd)?;
    let dr: (C64, C64) = central_diff3(zw, point, 1, fd)?;
    let ds: (C64, C64) = central_diff3(zw, point, 2, fd)?;
    let c_qr = dq.0 * dr.1 - dr.0 * dq.1;
    let c_qs = dq.0 * ds.1 - ds.0 * dq.1;
    let c_rs = dr.0 * ds.1 - ds.0 * dr.1;
    Ok((c_qr.norm_sqr() + c_qs.norm_sqr() + c_rs.norm_sqr()).sqrt())
}

/// `‖Hess(Ξ) · J − Id‖` (max absolute entry), where `J` is the Jacobian of
/// the *inverse* of the gradient map `x ↦ (∂Ξ/∂z₁, ∂Ξ/∂z₂)`, obtained
/// independently: the inverse is evaluated by Newton around `point` and
/// differentiated by fourth-order central differences. Near zero exactly
/// when the Hessian duality between the two potential routes holds with an
/// invertible, symmetric Jacobian.
///
/// Fails with a singular-Jacobian error when the Hessian is not invertible
/// at `point` (a linear `Ξ`, for example, has no dual potential).
pub fn jacobian_duality_check(xi: &HoloExpr, point: [C64; 2]) -> Result<f64, SolveError> {
    let jet = xi
        .eval_jet2(&point)
        .map_err(|e| SolveError::Eval(e.to_string()))?;
    let hess = [
        [jet.d2(0, 0), jet.d2(0, 1)],
        [jet.d2(1, 0), jet.d2(1, 1)],
    ];
    let scale = hess
        .iter()
        .flatten()
        .fold(0.0f64, |m, v| m.max(v.norm()))
        .max(1.0);
    assert!(
        (hess[0][1] - hess[1][0]).norm() <= 1e-10 * scale,
        "mixed partials disagree; jets are broken"
    );
    let det = hess[0][0] * hess[1][1] - hess[0][1] * hess[1][0];
    if det.norm() < 1e-8 * scale * scale {
        return Err(SolveError::SingularJacobian { det: det.norm() });
    }

    let grad0 = [jet.d(0), jet.d(1)];

    // Local inverse of the gradient map by Newton, seeded at `point`.
    let invert = |target: [C64; 2]| -> Result<[C64; 2], SolveError> {
        let tol = 1e-14 * (1.0 + target[0].norm().max(target[1].norm()));
        let mut x = point;
        for _ in 0..60 {
            let j = xi
                .eval_jet2(&x)
                .map_err(|e| SolveError::Eval(e.to_string()))?;
            let res = [j.d(0) - target[0], j.d(1) - target[1]];
            if res[0].norm().max(res[1].norm()) < tol {
                return Ok(x);
            }
            let h = [[j.d2(0, 0), j.d2(0, 1)], [j.d2(1, 0), j.d2(1, 1)]];
            let d = h[0][0] * h[1][1] - h[0][1] * h[1][0];
            if d.norm() < 1e-14 {
                return Err(SolveError::SingularJacobian { det: d.norm() });
            }
            x[0] -= (res[0] * h[1][1] - res[1] * h[0][1]) / d;
            x[1] -= (res[1] * h[0][0] - res[0] * h[1][0]) / d;
        }
        Err(SolveError::NoConverge {
            iters: 60,
            residual: f64::NAN,
        })
    };

    // Fourth-order stencil keeps the differencing error of the inverse map
    // below the symmetry tolerance even for non-quadratic potentials.
    let mut jinv = [[C64::new(0.0, 0.0); 2]; 2];
    for col in 0..2 {
        let h = 1e-3 * (1.0 + grad0[col].norm());
        let shifted = |mul: f64| -> [C64; 2] {
            let mut t = grad0;
            t[col] += C64::new(mul * h, 0.0);
            t
        };
        let p2 = invert(shifted(2.0))?;
        let p1 = invert(shifted(1.0))?;
        let m1 = invert(shifted(-1.0))?;
        let m2 = invert(shifted(-2.0))?;
        for row in 0..2 {
            jinv[row][col] =
                (-p2[row] + 8.0 * p1[row] - 8.0 * m1[row] + m2[row]) / (12.0 * h);
        }
    }
    let jscale = jinv
        .iter()
        .flatten()
        .fold(0.0f64, |m, v| m.max(v.norm()))
        .max(1.0);
    assert!(
        (jinv[0][1] - jinv[1][0]).norm() <= 1e-10 * jscale,
        "inverse-map Jacobian is not symmetric; duality violated"
    );

    let prod = |i: usize, j: usize| hess[i][0] * jinv[0][j] + hess[i][1] * jinv[1][j];
    let worst = [
        (prod(0, 0) - 1.0).norm(),
        prod(0, 1).norm(),
        prod(1, 0).norm(),
        (prod(1, 1) - 1.0).norm(),
    ]
    .into_iter()
    .fold(0.0f64, f64::max);
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn nullity_is_algebraically_zero() {
        let cases = [
            (c(0.0, 0.0), c(1.0, 0.0)),
            (c(0.3, -0.7), c(1.2, 0.4)),
            (c(-2.0, 1.0), c(0.1, 0.1)),
            (c(5.0, -3.0), c(-4.0, 2.0)),
        ];
        for (z, w) in cases {
            let om = make_omega(z, w);
            let scale = (z.norm() + w.norm()).powi(4).max(1.0);
            assert!(om.nullity().norm() < 1e-14 * scale, "at ({z}, {w})");
        }
    }

    #[test]
    fn marked_form_values() {
        let om = make_omega(c(0.0, 0.0), c(1.0, 0.0));
        assert_eq!(om.coefficients(), [c(0.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)]);
        let om = make_omega(c(1.0, 0.0), c(0.0, 0.0));
        assert_eq!(om.coefficients(), [c(0.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)]);
        let om = make_omega(c(1.0, 0.0), c(1.0, 0.0));
        assert_eq!(om.coefficients(), [c(2.0, 0.0), c(0.0, 2.0), c(0.0, 0.0)]);
    }

    #[test]
    fn constant_potential_gives_the_constant_solution() {
        let xi = XiMap::Potential(parse("-z2", &["z1", "z2"]).unwrap());
        let solver = XiSolver::new(xi, cfg());
        for p in [[0.0, 0.0, 0.0], [0.5, -0.3, 0.2], [1.0, 2.0, -1.0]] {
            let s = solver.solve_at(p, (c(0.0, 0.0), c(1.0, 0.0)));
            assert!(s.status.is_ok());
            assert!(s.z.norm() < 1e-13 && (s.w - 1.0).norm() < 1e-13, "{p:?}");
            assert!(!s.degenerate);
        }
    }

    #[test]
    fn quadratic_potential_solves_the_linear_system() {
        let xi = XiMap::Potential(parse("z1^2/2 - z2", &["z1", "z2"]).unwrap());
        let solver = XiSolver::new(xi, cfg());
        let s = solver.solve_at([1.0, 0.0, 0.0], (c(0.0, 0.0), c(1.0, 0.0)));
        assert!(s.status.is_ok());
        assert!((s.w - 1.0).norm() < 1e-12, "w = {}", s.w);
        assert!((s.z - c(0.0, -1.0)).norm() < 1e-12, "z = {}", s.z);
    }

    #[test]
    fn inverse_cubic_hits_the_marked_point() {
        let solver = XiSolver::new(XiMap::InverseCubic, cfg());
        let s = solver.solve_at([0.0, 0.0, 3.0], (c(0.0, 0.0), c(1.0, 0.0)));
        assert!(s.status.is_ok());
        assert!(s.z.norm() < 1e-12, "z = {}", s.z);
        assert!((s.w - 2.0).norm() < 1e-12, "w = {}", s.w);
    }

    #[test]
    fn inverse_cubic_matches_the_square_root_family() {
        let solver = XiSolver::new(XiMap::InverseCubic, cfg());
        for p in [[0.1, 0.2, 0.1], [-0.3, -0.1, 0.25], [0.0, 0.3, -0.2], [2.0, 0.1, 0.0]] {
            let s = solver.solve_at(p, (c(0.0, 0.0), c(1.0, 0.0)));
            assert!(s.status.is_ok(), "{p:?}");
            let expect = C64::new(1.0 + p[2], p[1]).sqrt();
            assert!(s.z.norm() < 1e-12, "z at {p:?}");
            assert!((s.w - expect).norm() < 1e-10, "w at {p:?}: {} vs {expect}", s.w);
        }
    }

    #[test]
    fn normalization_defect_detects_the_convention() {
        let good = XiMap::Potential(parse("z1^2/2 - z2", &["z1", "z2"]).unwrap());
        let (a, b) = good.normalization_defect().unwrap();
        assert!(a < 1e-15 && b < 1e-15);
        let off = XiMap::Potential(parse("z1^2/2 + z2", &["z1", "z2"]).unwrap());
        let (_, b) = off.normalization_defect().unwrap();
        assert!((b - 2.0).abs() < 1e-15);
        let (a, b) = XiMap::InverseCubic.normalization_defect().unwrap();
        assert!(a < 1e-15 && b < 1e-13);
    }

    #[test]
    fn lagrangian_residual_marked_values() {
        let z1 = parse("z1", &["z1", "z2"]).unwrap();
        let z2 = parse("z2", &["z1", "z2"]).unwrap();
        let zero = parse("0", &["z1", "z2"]).unwrap();
        let p = [c(0.3, 0.1), c(-0.2, 0.5)];
        let r = lagrangian_residual(&z1, &z2, p).unwrap();
        assert!(r.norm() < 1e-15);
        let r = lagrangian_residual(&z2, &zero, p).unwrap();
        assert!((r + 1.0).norm() < 1e-15);
        let sq = parse("z2^2", &["z1", "z2"]).unwrap();
        let mixed = parse("2*z1*z2", &["z1", "z2"]).unwrap();
        let r = lagrangian_residual(&sq, &mixed, p).unwrap();
        assert!(r.norm() < 1e-14);
    }

    #[test]
    fn degenerate_linear_potential_is_flagged() {
        let f = parse("(w^2 - z^2)/2", &["z", "w"]).unwrap();
        let solver = NurowskiSolver::new(f, cfg());
        let s = solver.solve_at([0.0, 2.0, 0.0], (c(0.1, 0.0), c(0.5, 0.0)));
        assert!(s.status.is_ok());
        assert!(s.z.norm() < 1e-10 && s.w.norm() < 1e-10);
        assert!(s.degenerate);
    }

    #[test]
    fn dual_potentials_produce_the_same_field() {
        // For Ξ = ½z₁² + ½z₂² − z₂ the inverse gradient map integrates to
        // F = −½z² − ½w² + w.
        let xi = XiSolver::new(
            XiMap::Potential(parse("z1^2/2 + z2^2/2 - z2", &["z1", "z2"]).unwrap()),
            cfg(),
        );
        let f = NurowskiSolver::new(parse("-z^2/2 - w^2/2 + w", &["z", "w"]).unwrap(), cfg());
        for p in [[0.0, 0.0, 0.0], [0.2, 0.1, -0.1], [-0.15, 0.25, 0.2]] {
            let a = xi.solve_at(p, (c(0.0, 0.0), c(1.0, 0.0)));
            let b = f.solve_at(p, (c(0.0, 0.0), c(1.0, 0.0)));
            assert!(a.status.is_ok() && b.status.is_ok(), "{p:?}");
            assert!((a.z - b.z).norm() < 1e-10, "z at {p:?}");
            assert!((a.w - b.w).norm() < 1e-10, "w at {p:?}");
        }
    }

    #[test]
    fn duality_check_marked_values() {
        let xi = parse("z1^2/2 + z2^2", &["z1", "z2"]).unwrap();
        let r = jacobian_duality_check(&xi, [c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(r < 1e-12, "diagonal case: {r}");

        let xi = parse("z1^2/2 + z2^2/2 - z2", &["z1", "z2"]).unwrap();
        let r = jacobian_duality_check(&xi, [c(0.1, 0.2), c(-0.3, 0.1)]).unwrap();
        assert!(r < 1e-10, "shifted quadratic: {r}");

        let linear = parse("z2", &["z1", "z2"]).unwrap();
        let err = jacobian_duality_check(&linear, [c(0.0, 0.0), c(0.0, 0.0)]).unwrap_err();
        assert!(matches!(err, SolveError::SingularJacobian { .. }));
    }

    #[test]
    fn duality_check_handles_a_cubic_potential() {
        let xi = parse("z1^2/2 + z2^2/2 - z2 + z1^3/10", &["z1", "z2"]).unwrap();
        let r = jacobian_duality_check(&xi, [c(0.05, 0.0), c(0.1, -0.05)]).unwrap();
        assert!(r < 1e-7, "cubic case: {r}");
    }

    #[test]
    fn synthetic_field_residuals_match_hand_values() {
        let fd = FdStep::default();
        // (z, w) = (q, 1).
        let zw = |p: Vec3| Ok((C64::new(p[0], 0.0), c(1.0, 0.0)));
        let omega = |p: Vec3| {
            let (z, w) = (C64::new(p[0], 0.0), c(1.0, 0.0));
            Ok(make_omega(z, w).coefficients())
        };
        let p = [1.0, 0.4, -0.2];
        let closed = closedness_residual(&omega, p, fd).unwrap();
        assert!((closed - 2.0).abs() < 1e-9, "curl: {closed}");
        let wedge = wedge_residual(&omega, p, fd).unwrap();
        assert!((wedge - c(0.0, 4.0)).norm() < 1e-8, "wedge: {wedge}");
        let (kz, kw) = key_operator_residual(&zw, p, fd).unwrap();
        assert!((kz - 2.0).norm() < 1e-9, "operator on z: {kz}");
        assert!(kw.norm() < 1e-12, "operator on w: {kw}");
    }

    #[test]
    fn xi_route_passes_its_own_residuals() {
        let solver = XiSolver::new(
            XiMap::Potential(parse("z1^2/2 - z2", &["z1", "z2"]).unwrap()),
            cfg(),
        );
        let fd = FdStep::default();
        let seed = (c(0.0, 0.0), c(1.0, 0.0));
        let zw = |p: Vec3| solver.solve_ok(p, seed).map(|s| (s.z, s.w));
        let omega = |p: Vec3| {
            solver
                .solve_ok(p, seed)
                .map(|s| s.omega().coefficients())
        };
        for p in [[0.0, 0.0, 0.0], [0.15, -0.2, 0.1]] {
            let closed = closedness_residual(&omega, p, fd).unwrap();
            assert!(closed < 1e-6, "curl at {p:?}: {closed}");
            let (kz, kw) = key_operator_residual(&zw, p, fd).unwrap();
            assert!(kz.norm() < 1e-6 && kw.norm() < 1e-6, "operator at {p:?}");
        }
    }

    #[test]
    fn degeneracy_detector_separates_the_examples() {
        let fd = FdStep::default();
        // The inverse-cubic family has z ≡ 0, so dz ∧ dw = 0.
        let cubic = XiSolver::new(XiMap::InverseCubic, cfg());
        let seed = (c(0.0, 0.0), c(1.0, 0.0));
        let zw = |p: Vec3| cubic.solve_ok(p, seed).map(|s| (s.z, s.w));
        let d = dzdw_degeneracy(&zw, [0.0, 0.0, 0.0], fd).unwrap();
        assert!(d < 1e-10, "inverse cubic: {d}");

        // Chart form of the Hopf family: (z, w) = (0, 1/(1 + ir + s)).
        let guise = |p: Vec3| {
            let denom = C64::new(1.0 + p[2], p[1]);
            Ok((c(0.0, 0.0), 1.0 / denom))
        };
        let d = dzdw_degeneracy(&guise, [0.0, 0.0, 0.0], fd).unwrap();
        assert!(d < 1e-10, "reciprocal family: {d}");

        // Full quadratic potential: nondegenerate, size √2 at the origin.
        let quad = XiSolver::new(
            XiMap::Potential(parse("z1^2/2 + z2^2/2 - z2", &["z1", "z2"]).unwrap()),
            cfg(),
        );
        let zw = |p: Vec3| quad.solve_ok(p, seed).map(|s| (s.z, s.w));
        let d = dzdw_degeneracy(&zw, [0.0, 0.0, 0.0], fd).unwrap();
        assert!((d - 2.0f64.sqrt()).abs() < 1e-6, "quadratic: {d}");
    }

    #[test]
    fn grid_continuation_is_deterministic() {
        use crate::grid::Axis;
        let solver = XiSolver::new(
            XiMap::Potential(parse("z1^2/2 + z2^2/2 - z2", &["z1", "z2"]).unwrap()),
            cfg(),
        );
        let spec = GridSpec3 {
            axes: [
                Axis::new(-0.3, 0.3, 4).unwrap(),
                Axis::new(-0.3, 0.3, 4).unwrap(),
                Axis::new(-0.3, 0.3, 4).unwrap(),
            ],
        };
        let seed = (c(0.0, 0.0), c(1.0, 0.0));
        let g1 = grid_zw(&solver, &spec, [0.0, 0.0, 0.0], seed, 1).unwrap();
        let g3 = grid_zw(&solver, &spec, [0.0, 0.0, 0.0], seed, 3).unwrap();
        assert_eq!(g1.samples.len(), 64);
        assert!(g1.samples.iter().all(|s| s.status.is_ok()));
        assert_eq!(g1.solve_order, g3.solve_order);
        for (a, b) in g1.samples.iter().zip(&g3.samples) {
            assert_eq!((a.z, a.w), (b.z, b.w));
        }
    }
}
