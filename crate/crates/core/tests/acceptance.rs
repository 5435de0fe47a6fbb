//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

use std::f64::consts::{FRAC_PI_3, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ambient_attitude::controller::closed_loop_field;
use ambient_attitude::integrator::{advance, E_SET_TOL};
use ambient_attitude::lyapunov::trace_identity_residuals;
use ambient_attitude::{
    admissible_region, classify_e_set, grad_v_tilde, height_w, max_epsilon, roa_sweep, rodrigues_exp, scenarios,
    simulate, v_tilde, w_dot_analytic, w_dot_bound, ESetTag, Gains, InitSampler, Mat3d, Method, Outcome, Reference,
    SimConfigd, Stated, Vec3d,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict { passed, detail: detail.into() }
}

fn unit3(rng: &mut impl Rng) -> Vec3d {
    let v = Vec3d::new(rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal));
    v * (1.0 / v.norm())
}

fn random_rotation(rng: &mut impl Rng) -> Mat3d {
    rodrigues_exp(unit3(rng), rng.random_range(-PI..PI)).unwrap()
}

/// Uniform point of the Frobenius ball of `radius` around zero.
fn ball9(rng: &mut impl Rng, radius: f64) -> Mat3d {
    let mut a = [0.0; 9];
    a.iter_mut().for_each(|x| *x = rng.sample(StandardNormal));
    let d = Mat3d::from_row_major(a);
    d * (radius * rng.random_range(0.0f64..1.0).powf(1.0 / 9.0) / d.norm())
}

fn c1_epsilon() -> Verdict {
    let m = max_epsilon(4.0f64, 2.0).unwrap();
    let e = 0.99 * m;
    verdict(
        (m - 1.6).abs() <= 1e-12 && (e - 1.584).abs() <= 1e-12,
        format!("max_epsilon(4,2) = {m:.15}, 0.99x = {e:.15}"),
    )
}

fn c2_off_manifold_norm() -> Verdict {
    let r = rodrigues_exp(Vec3d::basis(1), 2.0 * FRAC_PI_3).unwrap() * 1.1;
    let n = r.orthogonality_residual();
    verdict((n - 0.3637).abs() <= 5e-4 && n < (1.0f64 / 3.0).sqrt(), format!("‖RᵀR − I‖ = {n:.6}"))
}

fn c3_ideal() -> Verdict {
    let cfg = scenarios::ideal::<f64>();
    let start = Instant::now();
    let rec = simulate(&cfg).unwrap();
    let elapsed = start.elapsed();
    let last = rec.last().unwrap();
    let slack = 10.0 * cfg.dt * cfg.dt * cfg.record_every as f64;
    let worst = rec.samples.windows(2).map(|w| w[1].w - w[0].w).fold(f64::MIN, f64::max);
    verdict(
        last.err_r < 1e-6 && last.err_omega < 1e-6 && worst <= slack && elapsed < Duration::from_secs(1),
        format!(
            "err_r = {:.3e}, err_omega = {:.3e}, max ΔW = {worst:.3e} (slack {slack:.1e}), {elapsed:?}",
            last.err_r, last.err_omega
        ),
    )
}

fn c4_off_manifold() -> Verdict {
    let noisy = scenarios::off_manifold::<f64>();
    let clean = SimConfigd { noise_rel: 0.0, ..noisy };
    let start = Instant::now();
    let rec = simulate(&clean).unwrap();
    let clean_time = start.elapsed();
    let v0 = rec.samples[0].v_tilde;
    let v5 = rec.samples.iter().filter(|s| s.t >= 5.0 - 1e-9).map(|s| s.v_tilde).fold(f64::MIN, f64::max);

    let start = Instant::now();
    let rec = simulate(&noisy).unwrap();
    let noisy_time = start.elapsed();
    let last = rec.last().unwrap();
    verdict(
        (v0 - 0.0331).abs() < 1e-4
            && v5 < 1e-8
            && last.err_r < 0.1
            && last.err_omega < 0.1
            && clean_time < Duration::from_secs(1)
            && noisy_time < Duration::from_secs(1),
        format!(
            "Ṽ(0) = {v0:.5}, max Ṽ(t ≥ 5) = {v5:.3e}; noisy final err_r = {:.3e}, err_omega = {:.3e}; {clean_time:?} / {noisy_time:?}",
            last.err_r, last.err_omega
        ),
    )
}

fn c5_e_set_levels() -> Verdict {
    let g = scenarios::nominal_gains::<f64>();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for _ in 0..100 {
        let reference = Reference::new(random_rotation(&mut rng)).unwrap();
        let e1 = Stated::new(*reference.matrix(), Vec3d::zeros());
        ok &= classify_e_set(&e1, &reference, E_SET_TOL).unwrap().tag == ESetTag::E1;
        worst = worst.max(height_w(&e1, &reference, &g).unwrap().abs());

        let e2 = Stated::new(*reference.matrix() * rodrigues_exp(unit3(&mut rng), PI).unwrap(), Vec3d::zeros());
        ok &= classify_e_set(&e2, &reference, E_SET_TOL).unwrap().tag == ESetTag::E2;
        worst = worst.max((height_w(&e2, &reference, &g).unwrap() - 2.0 * g.k_p).abs());
    }
    verdict(ok && worst <= 1e-9, format!("max |W − level| = {worst:.3e}"))
}

fn c6_lie_derivative() -> Verdict {
    let g = scenarios::nominal_gains::<f64>();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut worst_rel, mut worst_gap) = (0.0f64, f64::MIN);
    for _ in 0..100 {
        let reference = Reference::new(random_rotation(&mut rng)).unwrap();
        let s = Stated::new(*reference.matrix() * random_rotation(&mut rng), unit3(&mut rng) * rng.random_range(0.1..3.0));
        // central difference of W along the closed-loop flow, RK4 sub-steps of ±h
        let h = 1e-5;
        let flow = |dt: f64| advance(&s, dt, Method::Rk4, |x| closed_loop_field(x, &reference, &g));
        let fd = (height_w(&flow(h), &reference, &g).unwrap() - height_w(&flow(-h), &reference, &g).unwrap()) / (2.0 * h);
        let wd = w_dot_analytic(&s, &reference, &g).unwrap();
        worst_rel = worst_rel.max((wd - fd).abs() / fd.abs());
        worst_gap = worst_gap.max(wd - w_dot_bound(&s, &reference, &g).unwrap());
    }
    verdict(
        worst_rel < 1e-4 && worst_gap <= 1e-12,
        format!("max rel err = {worst_rel:.3e}, max (Ẇ − bound) = {worst_gap:.3e}"),
    )
}

fn c7_gradient() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let region = admissible_region(1.0f64);
    let mut worst = 0.0f64;
    let mut n = 0;
    while n < 100 {
        let r = random_rotation(&mut rng) * (Mat3d::identity() + ball9(&mut rng, 0.3));
        if !region.contains(&r) {
            continue;
        }
        n += 1;
        let k_e = rng.random_range(0.5..2.0);
        let h = 1e-6;
        let mut fd = Mat3d::zeros();
        for i in 0..3 {
            for j in 0..3 {
                let (mut p, mut m) = (r, r);
                p.m[i][j] += h;
                m.m[i][j] -= h;
                fd.m[i][j] = (v_tilde(&p, k_e) - v_tilde(&m, k_e)) / (2.0 * h);
            }
        }
        let g = grad_v_tilde(&r, k_e);
        worst = worst.max((g - fd).norm() / g.norm());
    }
    verdict(worst < 1e-6, format!("max rel err = {worst:.3e}"))
}

fn c8_trace_identities() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let mut a = [0.0; 9];
        a.iter_mut().for_each(|x| *x = rng.random_range(-1.0..1.0));
        let (zs, zk) = Mat3d::from_row_major(a).sym_skew_split();
        let om = Vec3d::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        for (_, r) in trace_identity_residuals(&zs, &zk, om) {
            worst = worst.max(r.abs());
        }
    }
    verdict(worst <= 1e-12, format!("max |residual| = {worst:.3e} over 8 identities"))
}

fn c9_dominance() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut failures = 0;
    for _ in 0..100_000 {
        let a = Mat3d::identity() + ball9(&mut rng, 0.57);
        // oracle: |a_ii| > Σ_{j≠i} |a_ij|
        let dominant = (0..3).all(|i| a.m[i][i].abs() > (0..3).filter(|&j| j != i).map(|j| a.m[i][j].abs()).sum::<f64>());
        if !dominant {
            failures += 1;
        }
    }
    verdict(failures == 0, format!("{failures} counterexamples in 1e5 samples"))
}

fn c10_descent() -> Verdict {
    let base = SimConfigd { t_end: 5.0, ..scenarios::ideal::<f64>() };
    let sampler = InitSampler::admissible(base.gains.k_e, 1.0);
    let slack = 10.0 * base.dt * base.dt * base.record_every as f64;
    let mut worst = f64::MIN;
    for seed in 0..100 {
        let (r_init, omega_init) = sampler.sample(&base, seed);
        let rec = simulate(&SimConfigd { r_init, omega_init, ..base }).unwrap();
        for w in rec.samples.windows(2) {
            worst = worst.max(w[1].v_tilde - w[0].v_tilde);
        }
    }
    verdict(worst <= slack, format!("max ΔṼ = {worst:.3e} (slack {slack:.1e})"))
}

fn c11_almost_global() -> Verdict {
    let base = SimConfigd {
        t_end: 40.0,
        record_every: 1000,
        seed: 1000,
        ..scenarios::ideal::<f64>()
    };
    let sampler = InitSampler::admissible(base.gains.k_e, 1.0);
    let trials = roa_sweep(&base, 100, &sampler).unwrap();
    let e1 = trials.iter().filter(|t| t.outcome == Outcome::E1).count();

    let e2_cfg = scenarios::antipodal::<f64>();
    let stay = roa_sweep(&e2_cfg, 1, &InitSampler::Fixed).unwrap()[0].outcome;

    // rotate the half-turn start by 1e-6 about an axis with a component along
    // the half-turn axis e₃
    let tilt = rodrigues_exp(Vec3d::new(1.0, 1.0, 1.0) * (1.0 / 3f64.sqrt()), 1e-6).unwrap();
    let perturbed = SimConfigd { r_init: e2_cfg.r_init * tilt, ..e2_cfg };
    let escape = roa_sweep(&perturbed, 1, &InitSampler::Fixed).unwrap()[0].outcome;

    verdict(
        e1 == 100 && stay == Outcome::E2 && escape == Outcome::E1,
        format!("{e1}/100 random starts → E1; E₂ start → {}; perturbed E₂ start → {}", stay.as_str(), escape.as_str()),
    )
}

fn c12_orders() -> Verdict {
    let base = SimConfigd { t_end: 1.0, record_every: 1_000_000, ..scenarios::ideal::<f64>() };
    let final_state = |method: Method, dt: f64| {
        let rec = simulate(&SimConfigd { method, dt, ..base }).unwrap();
        rec.last().unwrap().state()
    };
    let reference = final_state(Method::Rk4, 1e-5);
    let err = |s: Stated| ((s.r - reference.r).norm_squared() + (s.omega - reference.omega).norm_squared()).sqrt();

    let euler = err(final_state(Method::Euler, 1e-2)) / err(final_state(Method::Euler, 5e-3));
    let rk4 = err(final_state(Method::Rk4, 4e-2)) / err(final_state(Method::Rk4, 2e-2));
    verdict(
        (euler - 2.0).abs() <= 0.3 * 2.0 && (rk4 - 16.0).abs() <= 0.3 * 16.0,
        format!("Euler ratio = {euler:.3}, RK4 ratio = {rk4:.3}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("1 epsilon window value", c1_epsilon),
        ("2 off-manifold initial norm", c2_off_manifold_norm),
        ("3 ideal scenario convergence", c3_ideal),
        ("4 off-manifold scenario", c4_off_manifold),
        ("5 E-set level values", c5_e_set_levels),
        ("6 Lie derivative oracle", c6_lie_derivative),
        ("7 gradient oracle", c7_gradient),
        ("8 trace identities", c8_trace_identities),
        ("9 diagonal dominance", c9_dominance),
        ("10 Ṽ descent", c10_descent),
        ("11 almost-global convergence", c11_almost_global),
        ("12 integrator orders", c12_orders),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let v = run();
        if !v.passed {
            failed += 1;
        }
        println!("{} [{name}] {}", if v.passed { "PASS" } else { "FAIL" }, v.detail);
    }
    // gains used above must be in the window
    debug_assert!(Gains::with_auto_epsilon(1.0f64, 4.0, 2.0).is_ok());
    if failed == 0 {
        println!("acceptance: all 12 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
