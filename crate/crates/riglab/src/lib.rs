//! Analytic laboratory and exact Monte Carlo simulator for the sparse
//! inhomogeneous random intersection graph.
//!
//! An attribute set `W` of size `m` and a vertex set `V` of size `n` carry
//! independent non-negative weights `X_i ~ P1` and `Y_j ~ P2`. Each pair
//! `{w_i, v_j}` is linked in a bipartite graph with probability
//! `min(1, X_i * Y_j / sqrt(n * m))`, and two vertices of `V` are adjacent in
//! the intersection graph whenever they share at least one linked attribute
//! (the witness).
//!
//! The crate is organised around five concerns:
//!
//! * [`weights`] — weight laws `P1`, `P2`: moments, samplers, certified
//!   expectations.
//! * [`analytic`] — the limiting laws of the model: mixed Poisson intensities,
//!   the compound Poisson degree limit, the joint degree-degree limits
//!   `p_beta` / `p_infty`, tail asymptotes, and total-variation utilities.
//! * [`genmodel`] — exact samplers of the bipartite witness graph (a naive
//!   oracle and a bucketed envelope sampler with geometric skips), the
//!   one-mode intersection projection, and a tiny-instance exact enumerator.
//! * [`stats`] — empirical estimators over realised graphs and mergeable
//!   replica reports.
//! * [`cli`] — experiment configs, orchestration, and CSV/JSON reports.

pub mod analytic;
pub mod cli;
pub mod genmodel;
pub mod numeric;
pub mod rng;
pub mod stats;
pub mod weights;
