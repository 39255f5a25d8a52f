//! Conformal foliations of ℝ³ and closed null 1-forms from holomorphic data.
//!
//! This crate turns holomorphic input (an expression in one or two complex
//! variables) into geometric fields on ℝ³ and checks the geometry
//! numerically. The pipeline has three legs:
//!
//! * [`twistor`] — the projective/quadric side: the fibration of ℂP₃ over
//!   the 4-sphere, chart maps between homogeneous and affine coordinates,
//!   the orthogonal complex structures parametrised by a unit vector, and a
//!   classifier for linear subspaces of ℂ³ viewed over ℝ.
//! * [`foliation`] — unit vector fields tangent to conformal foliations:
//!   an implicit Newton solver for the fibre coordinate `z(q,r,s)`, grid
//!   continuation, and residual tests (first-order PDE, orthonormal-frame
//!   test, almost-complex integrability, tangency tests).
//! * [`nullform`] — closed null complex 1-forms
//!   `ω = 2wz dq + i(w²+z²) dr + (w²−z²) ds`: two-variable Newton solvers
//!   for the defining implicit systems, closedness/nullity diagnostics,
//!   potentials by path integration, and the Legendre-type duality between
//!   the two systems.
//!
//! [`expr`] supplies the parsed expressions and forward-mode second-order
//! jets that feed every solver; [`eikonal`] builds the signed-distance
//! counterexample showing the smooth (non-analytic) theory diverges from
//! the real-analytic one.
//!
//! # Quick start
//!
//! Solve the graph equation for Φ(z₁, z₂) = z₁ at a point and read off the
//! unit vector of the induced foliation:
//!
//! ```
//! use twistleaf::expr::parse;
//! use twistleaf::foliation::{ImplicitSolver, SolverConfig, SurfaceFn, field_from_z};
//!
//! let phi = parse("z1", &["z1", "z2"]).unwrap();
//! let solver = ImplicitSolver::new(SurfaceFn::Graph(phi), SolverConfig::default());
//! let sample = solver.solve_at([1.0, 0.0, 0.0], num_complex::Complex64::new(0.0, 0.0));
//! assert!(sample.status.is_ok());
//! assert!((sample.z - num_complex::Complex64::new(0.0, -1.0)).norm() < 1e-12);
//! let u = field_from_z(sample.z);
//! assert!((u.v + 1.0).abs() < 1e-12);
//! ```

#![warn(missing_docs)]

pub mod eikonal;
pub mod expr;
pub mod field;
pub mod foliation;
pub mod grid;
pub mod newton;
pub mod nullform;
pub mod twistor;

pub use field::C64;
