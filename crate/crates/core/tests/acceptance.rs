//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use chainwalk::fields::{
    base_potentials, divergence, field_a, flux, gradient, hodge_decompose, phi_profiles, remark_system,
    sigma_squared_exact, solve_remark_system, PotentialSource, VertexSet,
};
use chainwalk::sim::{
    empirical_martingale_increments, estimate_sigma2, martingale_residuals, transition_kernel, Representation,
};
use chainwalk::{build_graph, build_graph_inductive, Shape};
use common::{
    classify, cube, digit_profile, divergence_by_edges, even, exact_second_moment, increment, odd, q,
    reference_potential, shape, signs,
};
use num::{BigRational, ToPrimitive};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(start: Instant, seconds: f64) -> Result<f64, String> {
    let elapsed = start.elapsed().as_secs_f64();
    ensure(elapsed < seconds, || format!("took {elapsed:.1} s, budget {seconds} s"))?;
    Ok(elapsed)
}

fn exact_diffusivity() -> Verdict {
    let start = Instant::now();
    for k in 1..=8u32 {
        let r = sigma_squared_exact(k).map_err(|e| e.to_string())?;
        ensure(r.source == PotentialSource::HodgeSolve, || format!("K={k}: potential not from the solver"))?;
        let target = q(2, k as i64 + 2);
        ensure(r.sigma_squared == target && r.b_norm_squared == target, || format!("K={k}: got {}", r.sigma_squared))?;
        ensure(r.a_norm_squared == q(1, 1), || format!("K={k}: |A|^2 = {}", r.a_norm_squared))?;
    }
    let t = within_budget(start, 60.0)?;
    Ok(format!("sigma^2 = 2/(K+2) exactly for K = 1..8 ({t:.1} s)"))
}

fn closed_form_agreement() -> Verdict {
    let start = Instant::now();
    for k in 1..=8u32 {
        let g = build_graph(k).map_err(|e| e.to_string())?;
        let h = hodge_decompose(&g, &field_a::<BigRational>(&g)).map_err(|e| e.to_string())?;
        for v in g.vertices() {
            ensure(*h.potential.get(v) == reference_potential(&signs(v)), || {
                format!("K={k}: f differs at {}", v.compact())
            })?;
            ensure(divergence_by_edges(&g, &h.divergence_free, v) == q(0, 1), || {
                format!("K={k}: div B nonzero at {}", v.compact())
            })?;
        }
    }
    let t = within_budget(start, 60.0)?;
    Ok(format!("solved f = closed form, div B = 0 at every vertex, K = 1..8 ({t:.1} s)"))
}

fn remark_system_check() -> Verdict {
    for k in 1..=10u32 {
        let s = solve_remark_system(&remark_system(k).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let expected: Vec<BigRational> = (1..=k as i64).map(|j| increment(k as i64, j)).collect();
        ensure(s == expected, || format!("K={k}: solution {s:?}"))?;
    }
    for k in 1..=8u32 {
        let g = build_graph(k).map_err(|e| e.to_string())?;
        let b = hodge_decompose(&g, &field_a::<BigRational>(&g)).map_err(|e| e.to_string())?.divergence_free;
        for i in 0..k as usize {
            let j = flux(&g, &b, &VertexSet::digit(k, i, 1), &VertexSet::digit(k, i, -1)).map_err(|e| e.to_string())?;
            ensure(j == q(0, 1), || format!("K={k}: flux across digit {} is {j}", i + 1))?;
        }
    }
    Ok("F_j reproduced for K = 1..10; digit-cut fluxes of B vanish for K = 1..8".into())
}

fn structural_counts() -> Verdict {
    for k in 1..=10u32 {
        let g = build_graph(k).map_err(|e| e.to_string())?;
        let d_k: u64 = g.vertices().map(|a| g.degree(a) as u64).sum();
        ensure(d_k == 2 * 3u64.pow(k) && g.total_directed_edges() == d_k, || format!("K={k}: |E_K| = {d_k}"))?;
        let crossing = g.canonical_moves().filter(|(a, b)| a.entry(0) == 1 && b.entry(0) == -1).count() as u64;
        ensure(crossing == 3u64.pow(k - 1) && g.crossing_count() == crossing, || {
            format!("K={k}: crossing count {crossing}")
        })?;
        ensure(g.degree(Shape::all_ones(k as usize)) == k as usize + 2, || format!("K={k}: all-ones degree"))?;
        let inductive = build_graph_inductive(k).map_err(|e| e.to_string())?;
        ensure(inductive == g, || format!("K={k}: inductive build differs"))?;
        if k <= 6 {
            for (a, b) in g.canonical_moves() {
                ensure(classify(&signs(a), &signs(b)) == Some(1), || format!("K={k}: bad positive edge"))?;
            }
        }
    }
    Ok("2*3^K edges, 3^(K-1) crossings, degree K+2, inductive = direct for K = 1..10".into())
}

fn identity_suite() -> Verdict {
    for k in 1..=7u32 {
        let kk = k as i64;
        let g = build_graph(k).map_err(|e| e.to_string())?;
        let base = base_potentials::<BigRational>(k);
        let big = base_potentials::<BigRational>(k + 1);
        let div1 = divergence(&g, &gradient(&g, &base.f1).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let div2 = divergence(&g, &gradient(&g, &base.f2).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let (phi, phi_bar) = phi_profiles::<BigRational>(&g);
        for v in cube(k as usize) {
            let s = shape(&v);
            let (al, ab) = digit_profile(&v);
            let fail = |what: &str| format!("K={k}: {what} fails at {}", s.compact());
            ensure(*div1.get(s) == q(-2 * (odd(&al) - odd(&ab)), 1), || fail("div grad f1"))?;
            ensure(*div2.get(s) == q(-(kk + 2) * (even(&al) - even(&ab)), 1), || fail("div grad f2"))?;
            ensure(al[1] + ab[1] == kk, || fail("alpha_1 + alpha_bar_1 = K"))?;
            ensure(big.f2.get(s.prepend(1)).clone() == base.f2.get(s).clone() + q(ab[1], 1), || fail("f2(+a)"))?;
            ensure(big.f2.get(s.prepend(-1)).clone() == base.f2.get(s).clone() - q(al[1], 1), || fail("f2(-a)"))?;
            let phi_ref = even(&ab) - (kk + 1) * even(&al) + odd(&al) + odd(&ab);
            let phi_bar_ref = -even(&al) + (kk + 1) * even(&ab) - odd(&ab) - odd(&al);
            ensure(*phi.get(s) == q(phi_ref, 1) && *phi_bar.get(s) == q(phi_bar_ref, 1), || fail("phi, phi_bar"))?;
        }
    }
    Ok("f1/f2 divergence identities, digit-count sum, f2 recurrences, phi closed forms for K = 1..7".into())
}

fn kernel_equivalence() -> Verdict {
    for k in 1..=4u32 {
        let w = transition_kernel(k, Representation::Walker).map_err(|e| e.to_string())?;
        let g = transition_kernel(k, Representation::Graph).map_err(|e| e.to_string())?;
        ensure(w == g && w.is_stochastic(), || format!("K={k}: kernels differ"))?;
    }
    Ok("walker and graph kernels identical for K = 1..4".into())
}

fn small_n_moment() -> Verdict {
    let start = Instant::now();
    let oracle = exact_second_moment(&build_graph(1).map_err(|e| e.to_string())?, 2);
    ensure(oracle == q(16, 9), || format!("enumeration gave {oracle}"))?;
    let e = estimate_sigma2(1, 2, 1_000_000, 2024).map_err(|e| e.to_string())?;
    let (m, se) = (2.0 * e.point_estimate, 2.0 * e.std_error);
    let z = (m - oracle.to_f64().unwrap()) / se;
    ensure(z.abs() <= 4.0, || format!("E[(Z2-Z0)^2] = {m:.5} +- {se:.5}, z = {z:.2}"))?;
    let t = within_budget(start, 30.0)?;
    Ok(format!("{m:.5} +- {se:.5} vs 16/9, z = {z:.2} ({t:.1} s)"))
}

fn monte_carlo_cells(seed: u64) -> Result<(usize, String), String> {
    let mut failures = 0;
    let mut cells = Vec::new();
    for k in [1u32, 2, 3, 10] {
        let e = estimate_sigma2(k, 10_000, 10_000, seed).map_err(|e| e.to_string())?;
        let target = 2.0 / (k as f64 + 2.0);
        let z = (e.point_estimate - target) / e.std_error;
        if z.abs() > 3.0 {
            failures += 1;
        }
        cells.push(format!("K={k}: {:.4}+-{:.4} z={z:.2}", e.point_estimate, e.std_error));
    }
    Ok((failures, cells.join("; ")))
}

fn monte_carlo_reproduction() -> Verdict {
    let start = Instant::now();
    let (first, cells) = monte_carlo_cells(1)?;
    let mut summary = format!("seed 1: {cells}");
    ensure(first <= 1, || format!("{first} of 4 cells outside 3 se; {summary}"))?;
    if first == 1 {
        let (second, cells) = monte_carlo_cells(2)?;
        summary = format!("{summary}; rerun seed 2: {cells}");
        ensure(second == 0, || format!("rerun failed {second} cells; {summary}"))?;
    }
    let t = within_budget(start, 600.0)?;
    Ok(format!("{summary} ({t:.1} s)"))
}

fn martingale_check() -> Verdict {
    for k in 1..=8u32 {
        let g = build_graph(k).map_err(|e| e.to_string())?;
        let f = hodge_decompose(&g, &field_a::<BigRational>(&g)).map_err(|e| e.to_string())?.potential;
        let r = martingale_residuals(&g, &f).map_err(|e| e.to_string())?;
        ensure(r.is_zero(), || format!("K={k}: nonzero residual"))?;
        if k <= 3 {
            let stats = empirical_martingale_increments(&g, &f.to_float(), 100_000, 9).map_err(|e| e.to_string())?;
            for s in stats {
                ensure(s.mean.abs() <= 4.0 * s.std_error, || {
                    format!("K={k}, shape {}: {} +- {}", s.shape.compact(), s.mean, s.std_error)
                })?;
            }
        }
    }
    Ok("div B / degree = 0 for K = 1..8; per-shape increments within 4 se for K = 1..3".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("exact diffusivity", exact_diffusivity),
        ("closed-form potential", closed_form_agreement),
        ("remark system", remark_system_check),
        ("structural counts", structural_counts),
        ("identity suite", identity_suite),
        ("kernel equivalence", kernel_equivalence),
        ("two-step moment", small_n_moment),
        ("Monte Carlo diffusivity", monte_carlo_reproduction),
        ("martingale check", martingale_check),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} ({name}): PASS - {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL - {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
