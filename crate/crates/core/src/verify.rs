//! The full invariant suite behind the `verify` command.
//!
//! Each check reports a name, the order it ran at, and a pass/fail verdict
//! with a short detail string. Checks never abort the run: an error inside a
//! check is recorded as a failure of that check.

use std::fmt::Write as _;

use num::{BigRational, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{
    base_potentials, closed_form_increments, closed_form_potential, divergence, facet_decomposition, field_a, flux,
    gradient, hodge_decompose, inner_product, is_stationary, phi_closed_forms, phi_profiles, remark_system,
    sigma_squared_exact, solve_remark_system, HodgeDecomposition, Potential, VertexSet, EXACT_SOLVE_MAX_ORDER,
};
use crate::graph::{build_graph, build_graph_inductive, edge_sign, ShapeGraph};
use crate::scalar::{ratio, Scalar};
use crate::shape::Shape;
use crate::sim::{
    empirical_martingale_increments, estimate_sigma2, martingale_residuals, stationary_mean_square, stream_rng,
    transition_kernel, walker_from_shape, Representation, WalkerChain,
};

/// Largest `k_max` accepted; exact field checks stop at 8 regardless.
pub const VERIFY_MAX_ORDER: u32 = 10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub k_max: u32,
    pub seed: u64,
    /// Random cuts per order in the flux check.
    pub flux_cuts: usize,
    /// Length of the walk in the per-shape martingale check.
    pub martingale_steps: u64,
    pub mc_steps: u64,
    pub mc_trials: u64,
    /// Trials for the two-step second moment at `K = 1`.
    pub two_step_trials: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            k_max: 8,
            seed: 20_240_601,
            flux_cuts: 200,
            martingale_steps: 100_000,
            mc_steps: 2_000,
            mc_trials: 4_000,
            two_step_trials: 200_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub k: u32,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub version: &'static str,
    pub k_max: u32,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    /// One line per check, then a summary line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{verdict} {:<32} K={:<2} {}", c.name, c.k, c.detail);
        }
        let _ = writeln!(
            out,
            "{} of {} checks passed (k_max={}, seed={}, version={})",
            self.checks.len() - self.failures(),
            self.checks.len(),
            self.k_max,
            self.seed,
            self.version
        );
        out
    }
}

type Outcome = Result<(bool, String)>;

struct Recorder {
    k: u32,
    checks: Vec<Check>,
}

impl Recorder {
    fn run(&mut self, name: &'static str, check: impl FnOnce() -> Outcome) {
        let (passed, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        self.checks.push(Check { name, k: self.k, passed, detail });
    }
}

fn verdict(passed: bool, detail: impl Into<String>) -> Outcome {
    Ok((passed, detail.into()))
}

pub fn run_verification(options: &VerifyOptions) -> Result<VerifyReport> {
    if options.k_max == 0 || options.k_max > VERIFY_MAX_ORDER {
        return Err(Error::Capacity { k: options.k_max, max: VERIFY_MAX_ORDER, what: "verification suite" });
    }
    let per_order: Vec<Vec<Check>> =
        (1..=options.k_max).into_par_iter().map(|k| checks_for_order(k, options)).collect();
    Ok(VerifyReport {
        version: crate::export::VERSION,
        k_max: options.k_max,
        seed: options.seed,
        checks: per_order.into_iter().flatten().collect(),
    })
}

fn checks_for_order(k: u32, options: &VerifyOptions) -> Vec<Check> {
    let mut r = Recorder { k, checks: Vec::new() };
    let g = match build_graph(k) {
        Ok(g) => g,
        Err(e) => {
            r.run("graph.build", || Err(e));
            return r.checks;
        }
    };
    graph_checks(&mut r, &g);
    r.run("fields.remark_system", || {
        let solution = solve_remark_system(&remark_system(k)?)?;
        verdict(solution == closed_form_increments::<BigRational>(k), "solution equals F_j")
    });
    if k <= EXACT_SOLVE_MAX_ORDER {
        field_checks(&mut r, &g, options);
    }
    if k < EXACT_SOLVE_MAX_ORDER {
        r.run("fields.recurrences", || recurrences(k));
    }
    sim_checks(&mut r, &g, options);
    r.checks
}

fn graph_checks(r: &mut Recorder, g: &ShapeGraph) {
    let k = g.order();
    let len = k as usize;
    let d_k = 2 * 3u64.pow(k);
    r.run("graph.edge_count", || {
        let handshake: u64 = g.vertices().map(|a| g.degree(a) as u64).sum();
        verdict(g.total_directed_edges() == d_k && handshake == d_k, format!("D_K = {d_k}"))
    });
    r.run("graph.crossing_count", || {
        let direct = g.canonical_moves().filter(|(a, b)| a.entry(0) > 0 && b.entry(0) < 0).count() as u64;
        let expected = 3u64.pow(k - 1);
        verdict(g.crossing_count() == expected && direct == expected, format!("delta_K = {expected}"))
    });
    r.run("graph.all_ones_degree", || {
        let d = g.degree(Shape::all_ones(len));
        verdict(d == len + 2, format!("degree {d}"))
    });
    r.run("graph.loops_and_reverses", || {
        for a in g.vertices() {
            let (plus, minus) = (g.edge_at(a, 0), g.edge_at(a, 1));
            if !(plus.is_loop() && minus.is_loop() && plus.a_value == 1 && minus.a_value == -1) {
                return verdict(false, format!("bad loops at {}", a.compact()));
            }
            for m in g.moves_from(a) {
                if !g.moves_from(m.head).any(|back| back.head == a && back.a_value == -m.a_value) {
                    return verdict(false, format!("missing reverse of {} -> {}", a.compact(), m.head.compact()));
                }
            }
        }
        verdict(true, "two signed loops per vertex, every move reversed with opposite sign")
    });
    r.run("graph.inductive_equals_direct", || {
        verdict(build_graph_inductive(k)? == *g, "identical labeled multigraphs")
    });
    r.run("graph.edge_sign_consistency", || {
        let mut pairs = 0u64;
        for a in g.vertices() {
            let heads: Vec<(Shape, i8)> = g.moves_from(a).map(|m| (m.head, m.a_value)).collect();
            for b in g.vertices().filter(|&b| b != a) {
                let s = edge_sign(a, b)?;
                if s.map(|x| -x) != edge_sign(b, a)? {
                    return verdict(false, format!("asymmetric at {} {}", a.compact(), b.compact()));
                }
                if s != heads.iter().find(|(h, _)| *h == b).map(|(_, v)| *v) {
                    return verdict(false, format!("adjacency disagrees at {} {}", a.compact(), b.compact()));
                }
                pairs += 1;
            }
        }
        verdict(true, format!("{pairs} ordered pairs"))
    });
    r.run("graph.degree_profile", || {
        for a in g.vertices() {
            let p = g.degree_profile(a)?;
            let positive = g.moves_from(a).filter(|m| m.a_value > 0).count() as u64 + 1;
            let ok = p.alpha_k(0) == 1
                && p.alpha_bar_k(0) == 1
                && p.alpha_k(1) + p.alpha_bar_k(1) == k as u64
                && p.alpha_k(1) == a.count_plus() as u64
                && p.alpha_total() == positive
                && p.alpha_total() + p.alpha_bar_total() == g.degree(a) as u64;
            if !ok {
                return verdict(false, format!("at {}", a.compact()));
            }
        }
        verdict(true, "loop counts, alpha_1 + alpha_bar_1 = K, totals")
    });
}

fn field_checks(r: &mut Recorder, g: &ShapeGraph, options: &VerifyOptions) {
    let k = g.order();
    let kk = k as i64;
    let a = field_a::<BigRational>(g);
    r.run("fields.norm_of_a", || verdict(inner_product(g, &a, &a)? == ratio(1, 1), "<A, A> = 1"));
    r.run("fields.a_stationary", || verdict(is_stationary(g, &a)?, "A is stationary"));
    r.run("fields.divergence_of_a", || {
        let div = divergence(g, &a)?;
        for v in g.vertices() {
            let p = g.degree_profile(v)?;
            if *div.get(v) != BigRational::from_integer((p.alpha_total() as i64 - p.alpha_bar_total() as i64).into()) {
                return verdict(false, format!("at {}", v.compact()));
            }
        }
        verdict(true, "div A = alpha - alpha_bar")
    });

    let h: HodgeDecomposition<BigRational> = match hodge_decompose(g, &a) {
        Ok(h) => h,
        Err(e) => {
            r.run("fields.hodge_identities", || Err(e));
            return;
        }
    };
    let b = &h.divergence_free;
    r.run("fields.hodge_identities", || {
        let sum_ok = h.gradient.add(b)? == a;
        let div_ok = divergence(g, b)?.is_zero();
        let orth_ok = h.orthogonality(g)?.is_zero();
        verdict(sum_ok && div_ok && orth_ok, "A = grad f + B, div B = 0, <grad f, B> = 0")
    });
    r.run("fields.closed_form_potential", || {
        verdict(h.potential == closed_form_potential(k), "solved f equals sum of F_i over -1 digits")
    });
    r.run("fields.base_potentials", || {
        let base = base_potentials::<BigRational>(k);
        verdict(base.f == closed_form_potential(k), "K/2 - (f1/2 + f2/(K+2)) equals the closed form")
    });
    r.run("fields.gauge_independence", || {
        let shifted = h.potential.map(|x| x.clone() + ratio(7, 3));
        let grad = gradient(g, &shifted)?;
        let b2 = a.sub(&grad)?;
        let same = grad == h.gradient
            && b2 == *b
            && martingale_residuals(g, &shifted)? == martingale_residuals(g, &h.potential)?;
        verdict(same, "f + c leaves grad f, B and residuals unchanged")
    });
    r.run("fields.divergence_grad_f1", || {
        let base = base_potentials::<BigRational>(k);
        let div = divergence(g, &gradient(g, &base.f1)?)?;
        for v in g.vertices() {
            let p = g.degree_profile(v)?;
            let expected = -2 * (p.alpha_odd() as i64 - p.alpha_bar_odd() as i64);
            if *div.get(v) != ratio(expected, 1) {
                return verdict(false, format!("at {}", v.compact()));
            }
        }
        verdict(true, "div grad f1 = -2(alpha_od - alpha_bar_od)")
    });
    r.run("fields.divergence_grad_f2", || {
        let base = base_potentials::<BigRational>(k);
        let div = divergence(g, &gradient(g, &base.f2)?)?;
        for v in g.vertices() {
            let p = g.degree_profile(v)?;
            let expected = -(kk + 2) * (p.alpha_even() as i64 - p.alpha_bar_even() as i64);
            if *div.get(v) != ratio(expected, 1) {
                return verdict(false, format!("at {}", v.compact()));
            }
        }
        verdict(true, "div grad f2 = -(K+2)(alpha_ev - alpha_bar_ev)")
    });
    r.run("fields.f2_digit_profile", || {
        let f2 = base_potentials::<BigRational>(k).f2;
        for v in g.vertices() {
            let p = g.degree_profile(v)?;
            if *f2.get(v) != ratio(p.alpha_k(2) as i64 - p.alpha_bar_k(2) as i64, 1) {
                return verdict(false, format!("at {}", v.compact()));
            }
        }
        verdict(true, "f2 = alpha_2 - alpha_bar_2")
    });
    r.run("fields.phi_closed_forms", || {
        let (phi, phi_bar) = phi_profiles::<BigRational>(g);
        let (cphi, cphi_bar) = phi_closed_forms::<BigRational>(g)?;
        let f2 = base_potentials::<BigRational>(k).f2;
        let sum_ok = phi.add(&phi_bar)? == divergence(g, &gradient(g, &f2)?)?;
        let n = k as usize;
        let mirror_ok = *phi.get(Shape::all_ones(n)) == -phi_bar.get(Shape::all_minus_ones(n)).clone();
        verdict(phi == cphi && phi_bar == cphi_bar && sum_ok && mirror_ok, "direct sums equal the degree formulas")
    });
    r.run("fields.stationary_fields", || {
        verdict(is_stationary(g, &h.gradient)? && is_stationary(g, b)?, "grad f and B are stationary")
    });
    r.run("fields.flux_cuts", || {
        let mut rng = stream_rng(options.seed, 1_000 + k as u64);
        for _ in 0..options.flux_cuts {
            let phi = VertexSet::from_predicate(k, |_| rng.random_bool(0.5));
            if !flux(g, b, &phi, &phi.complement())?.is_zero() {
                return verdict(false, "nonzero flux across a cut");
            }
        }
        for i in 0..k as usize {
            let (m, n) = (VertexSet::digit(k, i, 1), VertexSet::digit(k, i, -1));
            if !flux(g, b, &m, &n)?.is_zero() {
                return verdict(false, format!("nonzero flux across digit {}", i + 1));
            }
        }
        verdict(true, format!("{} random cuts and {k} digit cuts", options.flux_cuts))
    });
    r.run("fields.facet_decomposition", || {
        let facet = facet_decomposition(g, &h.gradient)?;
        let a_dot = inner_product(g, &a, &h.gradient)?;
        verdict(
            facet.direct == facet.facet_formula && facet.direct == a_dot,
            format!("<A, grad f> = {}", a_dot.render()),
        )
    });
    r.run("fields.sigma_squared", || {
        let report = sigma_squared_exact(k)?;
        let ok = report.sigma_squared == ratio(2, kk + 2)
            && report.a_dot_grad_f == ratio(kk, kk + 2)
            && report.b_norm_squared == report.sigma_squared;
        verdict(ok, format!("sigma^2 = {}", report.sigma_squared.render()))
    });
    r.run("fields.float_exact_agreement", || {
        let hf = hodge_decompose(g, &a.to_float())?;
        let ok = hf.potential.approx_eq(&h.potential.to_float())
            && hf.divergence_free.approx_eq(&b.to_float())
            && hf.divergence_residual(g)? <= 1e-10;
        verdict(ok, format!("{} CG iterations", hf.stats.iterations))
    });
    r.run("sim.martingale_residuals", || {
        verdict(martingale_residuals(g, &h.potential)?.is_zero(), "div B / degree vanishes")
    });
    r.run("sim.quadratic_variation", || {
        let q = stationary_mean_square(g, b)?;
        verdict(q == ratio(2, kk + 2), format!("E[B^2] = {}", q.render()))
    });
    if k <= 3 {
        r.run("sim.martingale_increments", || {
            let stats =
                empirical_martingale_increments(g, &h.potential.to_float(), options.martingale_steps, options.seed)?;
            let worst = stats.iter().map(|s| s.mean.abs() / s.std_error).fold(0.0, f64::max);
            verdict(worst <= 4.0, format!("max |mean| / se = {worst:.2} over {} steps", options.martingale_steps))
        });
    }
}

/// `f1(+a) = f1(a) + 1`, `f1(-a) = f1(a) - 1`, `f2(+a) = f2(a) + alpha_bar_1(a)`
/// and `f2(-a) = f2(a) - alpha_1(a)`, comparing orders `k` and `k + 1`.
fn recurrences(k: u32) -> Outcome {
    let g = build_graph(k)?;
    let small = base_potentials::<BigRational>(k);
    let big = base_potentials::<BigRational>(k + 1);
    let at = |p: &Potential<BigRational>, a: Shape| p.get(a).clone();
    for a in g.vertices() {
        let prof = g.degree_profile(a)?;
        let (up, down) = (a.prepend(1), a.prepend(-1));
        let ok = at(&big.f1, up) == at(&small.f1, a) + ratio(1, 1)
            && at(&big.f1, down) == at(&small.f1, a) - ratio(1, 1)
            && at(&big.f2, up) == at(&small.f2, a) + ratio(prof.alpha_bar_k(1) as i64, 1)
            && at(&big.f2, down) == at(&small.f2, a) - ratio(prof.alpha_k(1) as i64, 1);
        if !ok {
            return verdict(false, format!("at {}", a.compact()));
        }
    }
    verdict(true, "f1 and f2 under prepending a digit")
}

fn sim_checks(r: &mut Recorder, g: &ShapeGraph, options: &VerifyOptions) {
    let k = g.order();
    if k <= 4 {
        r.run("sim.kernel_equivalence", || {
            let walker = transition_kernel(k, Representation::Walker)?;
            let graph = transition_kernel(k, Representation::Graph)?;
            verdict(walker == graph && walker.is_stochastic(), "walker and graph kernels identical and stochastic")
        });
        r.run("sim.stationary_law", || {
            let kernel = transition_kernel(k, Representation::Graph)?;
            let law = g.vertices().map(|a| (a, ratio(g.degree(a) as i64, g.total_directed_edges() as i64))).collect();
            verdict(kernel.preserves(&law), "degree-proportional law is invariant")
        });
    }
    r.run("sim.translation_invariance", || {
        let chain = WalkerChain::new(g);
        let start = walker_from_shape(Shape::all_ones(k as usize), 0);
        let base = chain.path(&start, 200, &mut stream_rng(options.seed, 7))?;
        let shifted = chain.path(&start.shifted(5), 200, &mut stream_rng(options.seed, 7))?;
        let ok = base.iter().zip(&shifted).all(|(x, y)| x.shifted(5) == *y);
        verdict(ok, "shifted start shifts the path")
    });
    if k == 1 {
        r.run("sim.two_step_moment", || {
            let e = estimate_sigma2(1, 2, options.two_step_trials, options.seed)?;
            let (m, se) = (2.0 * e.point_estimate, 2.0 * e.std_error);
            let z = (m - 16.0 / 9.0) / se;
            verdict(z.abs() <= 4.0, format!("E[(Z_2 - Z_0)^2] = {m:.4} vs 16/9, z = {z:.2}"))
        });
    }
    if k <= 3 {
        r.run("sim.monte_carlo_sigma", || {
            let e = estimate_sigma2(k, options.mc_steps, options.mc_trials, options.seed)?;
            let target = 2.0 / (k as f64 + 2.0);
            let z = (e.point_estimate - target) / e.std_error;
            verdict(z.abs() <= 3.0, format!("{:.4} +- {:.4} vs {target:.4}, z = {z:.2}", e.point_estimate, e.std_error))
        });
    }
}
