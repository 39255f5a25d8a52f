//! Unit vector fields tangent to conformal foliations of ℝ³.
//!
//! A holomorphic surface in ℂ³ (a graph `z3 = Φ(z1, z2)` or a level set
//! `f(z1, z2, z3) = 0`) induces, through the incidence substitution
//! `z1 = (r+is)z − iq`, `z2 = iqz − (r−is)`, an implicit scalar equation for
//! the fibre coordinate `z(q, r, s)`. [`ImplicitSolver`] runs Newton on that
//! equation, [`field_from_z`] turns the solution into a unit vector, and
//! [`grid_field`] continues the solution across a grid breadth-first so that
//! every point stays on the branch picked by the seed.
//!
//! The same surface extends to a map on a slab of ℝ⁴ via
//! `z1 = (r+is)z + (p−iq)`, `z2 = (p+iq)z − (r−is)` ([`ImplicitSolver::solve_at4`]),
//! which is what the integrability tests in [`residuals`] consume.

pub mod curves;
pub mod hopf;
pub mod residuals;

use num_complex::Complex64;

use crate::expr::HoloExpr;
use crate::field::{C64, FieldError, Vec3, Vec4};
use crate::grid::{map_indexed_parallel, GridSpec3};
use crate::newton::{newton_c1, SampleStatus, SolveError};
use crate::twistor::{TwistorError, UnitVec3};

/// Tunable knobs for the pointwise Newton solves and the finite-difference
/// residuals built on top of them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Residual magnitude below which a solve counts as converged.
    pub newton_tol: f64,
    /// Iteration budget per point.
    pub max_iters: usize,
    /// Base finite-difference step; scaled by `1 + |coordinate|` per axis.
    pub fd_step: f64,
    /// |z| beyond which the iterate is reported as near the chart pole.
    pub pole_radius: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            newton_tol: 1e-12,
            max_iters: 50,
            fd_step: 1e-5,
            pole_radius: 1e6,
        }
    }
}

/// The holomorphic surface defining the field.
#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceFn {
    /// Graph `z3 = Φ(z1, z2)`; the expression has variables `(z1, z2)`.
    Graph(HoloExpr),
    /// Level set `f(z1, z2, z3) = 0`; the expression has variables
    /// `(z1, z2, z3)` (see [`crate::expr::parse_surface`]).
    Level(HoloExpr),
}

impl SurfaceFn {
    fn arity_ok(&self) -> bool {
        match self {
            SurfaceFn::Graph(phi) => phi.nvars() == 2,
            SurfaceFn::Level(f) => f.nvars() == 3,
        }
    }
}

/// One solved point of a field over ℝ³.
#[derive(Debug, Clone, Copy)]
pub struct FieldSample {
    /// Where the solve was attempted, `(q, r, s)`.
    pub point: Vec3,
    /// Final Newton iterate (meaningful when `status` is ok; the last
    /// iterate otherwise, kept so continuation can inspect it).
    pub z: C64,
    /// Unit vector obtained from `z`; exactly `(1, 0, 0)` for near-pole
    /// samples, where the chart value is off to infinity.
    pub unit: UnitVec3,
    /// Solve outcome.
    pub status: SampleStatus,
    /// Newton iterations used.
    pub iters: usize,
}

/// One solved point of the extension to ℝ⁴.
#[derive(Debug, Clone, Copy)]
pub struct FieldSample4 {
    /// Where the solve was attempted, `(p, q, r, s)`.
    pub point: Vec4,
    /// Final Newton iterate.
    pub z: C64,
    /// Unit vector obtained from `z`.
    pub unit: UnitVec3,
    /// Solve outcome.
    pub status: SampleStatus,
    /// Newton iterations used.
    pub iters: usize,
}

/// Unit vector associated to a fibre coordinate:
/// `u = (|z|²−1)/(|z|²+1)`, `v + iw = 2i z̄ / (|z|²+1)`.
///
/// Extended continuously by `(1, 0, 0)` as `|z| → ∞`.
pub fn field_from_z(z: C64) -> UnitVec3 {
    let n = z.norm_sqr();
    if !n.is_finite() || n > 1e300 {
        return UnitVec3::new(1.0, 0.0, 0.0).expect("pole limit is unit");
    }
    let d = n + 1.0;
    UnitVec3::normalized((n - 1.0) / d, 2.0 * z.im / d, 2.0 * z.re / d)
        .expect("image of the fibre chart is unit by construction")
}

/// Inverse of [`field_from_z`]: `z = (w + iv)/(1 − u)`.
///
/// Fails at the pole `u = 1`, which the chart does not cover.
pub fn z_from_unit(unit: UnitVec3) -> Result<C64, TwistorError> {
    let d = 1.0 - unit.u;
    if d.abs() < 1e-14 {
        return Err(TwistorError::ProjectionPole);
    }
    Ok(C64::new(unit.w / d, unit.v / d))
}

/// Newton solver for the fibre coordinate of a holomorphic surface.
#[derive(Debug, Clone)]
pub struct ImplicitSolver {
    surface: SurfaceFn,
    config: SolverConfig,
}

impl ImplicitSolver {
    /// Builds a solver for the given surface.
    ///
    /// # Panics
    /// If the expression arity does not match the surface kind (a graph
    /// needs two variables, a level set three).
    pub fn new(surface: SurfaceFn, config: SolverConfig) -> Self {
        assert!(
            surface.arity_ok(),
            "surface arity mismatch: a graph takes a 2-variable expression, a level set a 3-variable one"
        );
        ImplicitSolver { surface, config }
    }

    /// The surface this solver works on.
    pub fn surface(&self) -> &SurfaceFn {
        &self.surface
    }

    /// The solver configuration.
    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    /// Incidence substitution on ℝ⁴ and its `z`-derivative:
    /// `z1 = (r+is)z + (p−iq)`, `z2 = (p+iq)z − (r−is)`.
    fn incidence(at: Vec4, z: C64) -> ([C64; 2], [C64; 2]) {
        let [p, q, r, s] = at;
        let a = C64::new(r, s);
        let b = C64::new(p, q);
        let w1 = a * z + b.conj();
        let w2 = b * z - a.conj();
        ([w1, w2], [a, b])
    }

    /// `G(z)` and `G'(z)` for the scalar Newton iteration at a point of ℝ⁴.
    fn eval_g(&self, at: Vec4, z: C64) -> Result<(C64, C64), String> {
        let ([w1, w2], [dw1, dw2]) = Self::incidence(at, z);
        match &self.surface {
            SurfaceFn::Graph(phi) => {
                let jet = phi.eval_jet2(&[w1, w2]).map_err(|e| e.to_string())?;
                let val = z - jet.value();
                let deriv = Complex64::new(1.0, 0.0) - (jet.d(0) * dw1 + jet.d(1) * dw2);
                Ok((val, deriv))
            }
            SurfaceFn::Level(f) => {
                let jet = f.eval_jet2(&[w1, w2, z]).map_err(|e| e.to_string())?;
                let deriv = jet.d(0) * dw1 + jet.d(1) * dw2 + jet.d(2);
                Ok((jet.value(), deriv))
            }
        }
    }

    /// Solves for `z` at a point of the ℝ⁴ slab.
    pub fn solve_at4(&self, point: Vec4, seed: C64) -> FieldSample4 {
        let out = newton_c1(
            |z| self.eval_g(point, z),
            seed,
            self.config.newton_tol,
            self.config.max_iters,
            self.config.pole_radius,
        );
        let unit = if out.status == SampleStatus::NearPole {
            UnitVec3::new(1.0, 0.0, 0.0).expect("pole limit is unit")
        } else {
            field_from_z(out.z)
        };
        FieldSample4 {
            point,
            z: out.z,
            unit,
            status: out.status,
            iters: out.iters,
        }
    }

    /// Solves for `z` at a point of ℝ³ (the slice `p = 0` of the slab).
    pub fn solve_at(&self, point: Vec3, seed: C64) -> FieldSample {
        let s4 = self.solve_at4([0.0, point[0], point[1], point[2]], seed);
        FieldSample {
            point,
            z: s4.z,
            unit: s4.unit,
            status: s4.status,
            iters: s4.iters,
        }
    }

    /// Like [`ImplicitSolver::solve_at`] but converts a failed status into
    /// an error carrying the best available diagnostics.
    pub fn solve_ok(&self, point: Vec3, seed: C64) -> Result<FieldSample, FieldError> {
        let sample = self.solve_at(point, seed);
        if sample.status.is_ok() {
            return Ok(sample);
        }
        Err(FieldError::Solve {
            at: point,
            source: self.describe_failure(&sample),
        })
    }

    fn describe_failure(&self, sample: &FieldSample) -> SolveError {
        let at4 = [0.0, sample.point[0], sample.point[1], sample.point[2]];
        match sample.status {
            SampleStatus::BranchPoint => SolveError::BranchPoint {
                deriv: self
                    .eval_g(at4, sample.z)
                    .map(|(_, d)| d.norm())
                    .unwrap_or(f64::NAN),
            },
            SampleStatus::NearPole => SolveError::NearPole {
                magnitude: sample.z.norm(),
            },
            SampleStatus::SingularJacobian => SolveError::SingularJacobian { det: 0.0 },
            _ => SolveError::NoConverge {
                iters: sample.iters,
                residual: self
                    .eval_g(at4, sample.z)
                    .map(|(v, _)| v.norm())
                    .unwrap_or(f64::NAN),
            },
        }
    }

    /// First partials `(Φ₁, Φ₂)` of the graph function at the incidence
    /// image of `(point, z)`. For a level set, implicit differentiation
    /// gives `Φⱼ = −fⱼ/f₃`.
    fn graph_partials(&self, at: Vec4, z: C64) -> Result<(C64, C64), FieldError> {
        let point = [at[1], at[2], at[3]];
        let ([w1, w2], _) = Self::incidence(at, z);
        match &self.surface {
            SurfaceFn::Graph(phi) => {
                let jet = phi.eval_jet2(&[w1, w2]).map_err(|e| FieldError::Solve {
                    at: point,
                    source: SolveError::Eval(e.to_string()),
                })?;
                Ok((jet.d(0), jet.d(1)))
            }
            SurfaceFn::Level(f) => {
                let jet = f
                    .eval_jet2(&[w1, w2, z])
                    .map_err(|e| FieldError::Solve {
                        at: point,
                        source: SolveError::Eval(e.to_string()),
                    })?;
                let (f1, f2, f3) = (jet.d(0), jet.d(1), jet.d(2));
                let scale = (f1.norm() + f2.norm() + f3.norm()).max(1.0);
                if f3.norm() < 1e-12 * scale {
                    return Err(FieldError::OutsideDomain {
                        at: point,
                        reason: "surface is not a graph over the fibre coordinate here".to_string(),
                    });
                }
                Ok((-f1 / f3, -f2 / f3))
            }
        }
    }

    /// First-order conformality residual
    /// `2z z_q + i(1+z²) z_r + (1−z²) z_s` with the partials obtained by
    /// implicit differentiation (no finite differences).
    ///
    /// Solves at `point` from `seed` first; fails on a failed solve or at a
    /// branch point of the implicit function.
    pub fn pde_residual_implicit(&self, point: Vec3, seed: C64) -> Result<C64, FieldError> {
        let sample = self.solve_ok(point, seed)?;
        let z = sample.z;
        let [q, r, s] = point;
        let (phi1, phi2) = self.graph_partials([0.0, q, r, s], z)?;
        let denom =
            Complex64::new(1.0, 0.0) - C64::new(r, s) * phi1 - C64::new(0.0, q) * phi2;
        if denom.norm() < 1e-12 {
            return Err(FieldError::Solve {
                at: point,
                source: SolveError::BranchPoint {
                    deriv: denom.norm(),
                },
            });
        }
        let i = C64::i();
        let zq = (-i * phi1 + i * z * phi2) / denom;
        let zr = (z * phi1 - phi2) / denom;
        let zs = (i * z * phi1 + i * phi2) / denom;
        Ok(2.0 * z * zq + i * (1.0 + z * z) * zr + (1.0 - z * z) * zs)
    }

    /// Same residual with the partials by central differences: solves at
    /// `point`, then at the six offset points seeded from the base value.
    pub fn pde_residual_fd(&self, point: Vec3, seed: C64) -> Result<C64, FieldError> {
        let base = self.solve_ok(point, seed)?;
        let zf = |p: Vec3| self.solve_ok(p, base.z).map(|s| s.z);
        residuals::conformal_pde_residual(&zf, point, self.fd())
    }

    /// Finite-difference step policy derived from the configuration.
    pub fn fd(&self) -> crate::field::FdStep {
        crate::field::FdStep {
            base: self.config.fd_step,
        }
    }
}

/// A field solved over a whole grid by breadth-first continuation.
#[derive(Debug, Clone)]
pub struct FieldGrid {
    /// The grid geometry.
    pub spec: GridSpec3,
    /// Configuration the samples were solved with.
    pub config: SolverConfig,
    /// Samples in linear grid order (see [`GridSpec3::linear`]).
    pub samples: Vec<FieldSample>,
    /// Linear indices in the order they were solved (seed first).
    pub solve_order: Vec<usize>,
}

impl FieldGrid {
    /// Sample at a 3-index.
    pub fn sample(&self, idx: [usize; 3]) -> &FieldSample {
        &self.samples[self.spec.linear(idx)]
    }

    /// Fraction of samples with ok status.
    pub fn ok_fraction(&self) -> f64 {
        let ok = self.samples.iter().filter(|s| s.status.is_ok()).count();
        ok as f64 / self.samples.len().max(1) as f64
    }
}

/// Solves the field over `spec` breadth-first from the grid point nearest
/// `seed_point`, seeding each new point with the `z` of the neighbour that
/// discovered it (falling back to `seed` when that neighbour failed). The
/// layer order and parent assignment are deterministic; solves within a
/// layer may run on up to `threads` OS threads (0 = all cores).
///
/// Fails only if the seed point itself fails to converge.
pub fn grid_field(
    solver: &ImplicitSolver,
    spec: &GridSpec3,
    seed_point: Vec3,
    seed: C64,
    threads: usize,
) -> Result<FieldGrid, FieldError> {
    let n = spec.len();
    let start = spec.nearest(seed_point);
    let start_lin = spec.linear(start);
    let first = solver.solve_ok(spec.point(start), seed)?;

    let mut samples: Vec<Option<FieldSample>> = vec![None; n];
    let mut discovered = vec![false; n];
    let mut order = Vec::with_capacity(n);
    samples[start_lin] = Some(first);
    discovered[start_lin] = true;
    order.push(start_lin);

    let mut frontier = vec![start_lin];
    while !frontier.is_empty() {
        // Discover the next layer; each new point remembers the seed value
        // donated by the neighbour that found it.
        let mut next: Vec<(usize, C64)> = Vec::new();
        for &lin in &frontier {
            let parent = samples[lin].as_ref().expect("frontier points are solved");
            let donated = if parent.status.is_ok() { parent.z } else { seed };
            for nb in spec.neighbours(spec.unflatten(lin)) {
                let nb_lin = spec.linear(nb);
                if !discovered[nb_lin] {
                    discovered[nb_lin] = true;
                    next.push((nb_lin, donated));
                }
            }
        }
        let solved = map_indexed_parallel(next.len(), threads, |i| {
            let (lin, z0) = next[i];
            solver.solve_at(spec.point(spec.unflatten(lin)), z0)
        });
        frontier = Vec::with_capacity(next.len());
        for ((lin, _), sample) in next.iter().zip(solved) {
            samples[*lin] = Some(sample);
            order.push(*lin);
            frontier.push(*lin);
        }
    }

    Ok(FieldGrid {
        spec: spec.clone(),
        config: *solver.config(),
        samples: samples
            .into_iter()
            .map(|s| s.expect("grid is connected, every point is visited"))
            .collect(),
        solve_order: order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::grid::Axis;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn graph_solver(text: &str) -> ImplicitSolver {
        let phi = parse(text, &["z1", "z2"]).unwrap();
        ImplicitSolver::new(SurfaceFn::Graph(phi), SolverConfig::default())
    }

    #[test]
    fn chart_map_hits_the_marked_directions() {
        let m = field_from_z(c(0.0, 0.0));
        assert!((m.u + 1.0).abs() < 1e-15 && m.v.abs() < 1e-15 && m.w.abs() < 1e-15);
        let e = field_from_z(c(1.0, 0.0));
        assert!(e.u.abs() < 1e-15 && e.v.abs() < 1e-15 && (e.w - 1.0).abs() < 1e-15);
        let n = field_from_z(c(0.0, 1.0));
        assert!(n.u.abs() < 1e-15 && (n.v - 1.0).abs() < 1e-15 && n.w.abs() < 1e-15);
    }

    #[test]
    fn chart_map_round_trips() {
        for z in [c(0.3, -0.2), c(2.0, 1.0), c(-0.7, 0.9), c(0.0, -3.5)] {
            let back = z_from_unit(field_from_z(z)).unwrap();
            assert!((back - z).norm() < 1e-12, "z = {z}");
        }
        assert!(z_from_unit(UnitVec3::new(1.0, 0.0, 0.0).unwrap()).is_err());
    }

    #[test]
    fn zero_graph_is_the_constant_field() {
        let solver = graph_solver("0");
        let s = solver.solve_at([0.3, -0.2, 0.9], c(0.0, 0.0));
        assert!(s.status.is_ok());
        assert!(s.z.norm() < 1e-14);
        assert!((s.unit.u + 1.0).abs() < 1e-14);
    }

    #[test]
    fn linear_graph_solves_in_closed_form() {
        // z = (r+is)z - iq  =>  z = -iq / (1 - r - is).
        let solver = graph_solver("z1");
        let p = [0.7, 0.3, -0.4];
        let s = solver.solve_at(p, c(0.0, 0.0));
        assert!(s.status.is_ok());
        let expect = c(0.0, -p[0]) / (c(1.0, 0.0) - c(p[1], p[2]));
        assert!((s.z - expect).norm() < 1e-12);
        // The frozen case used across the docs.
        let s0 = solver.solve_at([1.0, 0.0, 0.0], c(0.0, 0.0));
        assert!((s0.z - c(0.0, -1.0)).norm() < 1e-13);
    }

    #[test]
    fn level_route_matches_graph_route() {
        let graph = graph_solver("z1^2");
        let f = crate::expr::parse_surface("z3 - z1^2").unwrap();
        let level = ImplicitSolver::new(SurfaceFn::Level(f), SolverConfig::default());
        let p = [0.2, 0.1, -0.3];
        let a = graph.solve_at(p, c(0.0, 0.0));
        let b = level.solve_at(p, c(0.0, 0.0));
        assert!(a.status.is_ok() && b.status.is_ok());
        assert!((a.z - b.z).norm() < 1e-12);
    }

    #[test]
    fn implicit_pde_residual_vanishes_for_linear_graph() {
        let solver = graph_solver("z1");
        let res = solver
            .pde_residual_implicit([0.3, 0.2, -0.1], c(0.0, 0.0))
            .unwrap();
        assert!(res.norm() < 1e-13);
    }

    #[test]
    fn fd_pde_residual_agrees_with_implicit_route() {
        let solver = graph_solver("z1*z2");
        let p = [0.25, -0.15, 0.2];
        let fd = solver.pde_residual_fd(p, c(0.0, 0.0)).unwrap();
        let im = solver.pde_residual_implicit(p, c(0.0, 0.0)).unwrap();
        assert!((fd - im).norm() < 1e-6, "fd {fd} vs implicit {im}");
    }

    #[test]
    fn slab_solve_restricts_to_slice_solve() {
        let solver = graph_solver("exp(z1) - 1");
        let p3 = [0.1, 0.2, -0.1];
        let a = solver.solve_at(p3, c(0.0, 0.0));
        let b = solver.solve_at4([0.0, 0.1, 0.2, -0.1], c(0.0, 0.0));
        assert!(a.status.is_ok());
        assert!((a.z - b.z).norm() == 0.0);
    }

    #[test]
    fn grid_continuation_covers_the_box_deterministically() {
        let solver = graph_solver("z1^2");
        let spec = GridSpec3 {
            axes: [
                Axis::new(-0.4, 0.4, 5).unwrap(),
                Axis::new(-0.4, 0.4, 5).unwrap(),
                Axis::new(-0.4, 0.4, 5).unwrap(),
            ],
        };
        let g1 = grid_field(&solver, &spec, [0.0, 0.0, 0.0], c(0.0, 0.0), 1).unwrap();
        let g4 = grid_field(&solver, &spec, [0.0, 0.0, 0.0], c(0.0, 0.0), 4).unwrap();
        assert_eq!(g1.samples.len(), 125);
        assert!(g1.samples.iter().all(|s| s.status.is_ok()));
        assert_eq!(g1.solve_order, g4.solve_order);
        for (a, b) in g1.samples.iter().zip(&g4.samples) {
            assert_eq!(a.z, b.z);
        }
        // Direct point solves agree with continuation.
        for idx in spec.indices() {
            let direct = solver.solve_at(spec.point(idx), c(0.0, 0.0));
            assert!((direct.z - g1.sample(idx).z).norm() < 1e-10);
        }
    }

    #[test]
    fn unit_samples_are_unit() {
        let solver = graph_solver("z1 + z2^2");
        for &p in &[[0.3, 0.1, 0.0], [0.0, -0.2, 0.4], [0.5, 0.0, -0.5]] {
            let s = solver.solve_at(p, c(0.0, 0.0));
            assert!(s.status.is_ok());
            let [u, v, w] = s.unit.as_array();
            assert!(((u * u + v * v + w * w).sqrt() - 1.0).abs() < 1e-12);
        }
    }
}
