//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines reach the terminal under a plain
//! `cargo test`. The process fails when a criterion outside `KNOWN_FAILURES` fails,
//! or when a known failure starts passing and the list needs updating.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use blochlab::capacity::{capacity_degree1, condenser_capacity, CapacityProblem};
use blochlab::constructions::{
    default_stages, sa_pipeline, search_cutoff_constant, stolz_boundary_points, verify_cutoff_estimates, SAOptions,
    ThetaFactory,
};
use blochlab::disc::{DiscFunction, Polynomial};
use blochlab::fourier::{cauchy_projection, hilbert_transform, littlewood_paley_check, TrigPoly};
use blochlab::geometry::{normalize, symcond_integral, Arc, CantorKind, CircleSet};
use blochlab::inner::InnerFunction;
use blochlab::majorant::Majorant;
use blochlab::norms::{atomic_bw_upper, besov_b1_seminorm, DyadicStep, RadialAngularGrid};
use blochlab::quad::GaussLegendre;
use blochlab::setfun::{
    collar_partial_sums, content_bruteforce, entropy_partial_sums, hausdorff_content, trend, MeasureFunction, Trend,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Criteria expected to fail, with the reason recorded next to the entry.
const KNOWN_FAILURES: &[(u32, &str)] = &[(
    10,
    "the stated single-arc closed form 2a(1+log(1/a)) ignores the wrap-around of the shift; \
     the integral on the circle is 2a·log((1−a)/a) − 2·log(1−a)",
)];

type Outcome = (bool, String);

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + tag)
}

fn random_set(r: &mut ChaCha8Rng, max_components: usize) -> CircleSet {
    let m = r.gen_range(1..=max_components);
    let mut pts: Vec<f64> = (0..2 * m).map(|_| r.gen::<f64>()).collect();
    pts.sort_by(f64::total_cmp);
    let arcs: Vec<Arc> = pts
        .chunks(2)
        .filter(|p| p[1] > p[0])
        .map(|p| Arc::new(p[0], p[1] - p[0]).unwrap())
        .collect();
    normalize(&arcs)
}

fn c1_content_oracle() -> Outcome {
    let start = Instant::now();
    let betas = [MeasureFunction::power(1.0).unwrap(), MeasureFunction::power(0.5).unwrap(), MeasureFunction::entropy()];
    let mut r = rng(1);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let e = random_set(&mut r, 8);
        for b in &betas {
            let fast = hausdorff_content(&e, b).unwrap().value;
            let brute = content_bruteforce(&e, b).unwrap();
            worst = worst.max((fast - brute).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (worst <= 1e-12 && secs <= 60.0, format!("max |fast - brute| = {worst:e} over 600 cases in {secs:.2} s"))
}

fn c2_arc_content() -> Outcome {
    let table_t: Vec<f64> = (0..=64).map(|i| i as f64 / 64.0).collect();
    let table_b: Vec<f64> = table_t.iter().map(|t| t.sqrt()).collect();
    let betas = [
        ("power:1", MeasureFunction::power(1.0).unwrap()),
        ("power:0.5", MeasureFunction::power(0.5).unwrap()),
        ("power:0.25", MeasureFunction::power(0.25).unwrap()),
        ("entropy", MeasureFunction::entropy()),
        ("majorant power:1", MeasureFunction::from_majorant(&Majorant::power(1.0).unwrap()).unwrap()),
        ("majorant log:0.5", MeasureFunction::from_majorant(&Majorant::log(0.5).unwrap()).unwrap()),
        ("table sqrt", MeasureFunction::tabulated(table_t, table_b).unwrap()),
    ];
    let mut r = rng(2);
    let mut worst = (0.0f64, "all exact");
    for _ in 0..50 {
        let arc = Arc::new(r.gen(), r.gen_range(0.001..0.999)).unwrap();
        let e = normalize(&[arc]);
        for (name, b) in &betas {
            let d = (hausdorff_content(&e, b).unwrap().value - b.eval(arc.length())).abs();
            if d > worst.0 {
                worst = (d, name);
            }
        }
    }
    (worst.0 <= 1e-12, format!("max deviation {:e} ({}) over 50 arcs x {} measure functions", worst.0, worst.1, betas.len()))
}

/// Principal value of `∫ cot((t−θ)/2) u(t) dt/2π` by pairing `θ ± s`.
fn pv_hilbert(u: impl Fn(f64) -> f64, theta: f64) -> f64 {
    // The paired integrand is smooth at s = 0, so a fixed rule suffices.
    GaussLegendre::new(64).integrate(0.0, PI, |s| (u(theta + s) - u(theta - s)) / (0.5 * s).tan()) / (2.0 * PI)
}

fn c3_fourier() -> Outcome {
    let mut r = rng(3);
    let mut worst_hh = 0.0f64;
    for _ in 0..20 {
        let deg = r.gen_range(1..=16);
        let c: Vec<Complex64> = (0..=deg).map(|_| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect();
        let u = TrigPoly::from_fn(deg, |n| match n {
            0 => Complex64::new(c[0].re, 0.0),
            n if n > 0 => c[n as usize],
            n => c[(-n) as usize].conj(),
        });
        let hh = hilbert_transform(&hilbert_transform(&u).unwrap()).unwrap();
        for n in -(deg as i64)..=deg as i64 {
            let want = if n == 0 { u.coeff(0) } else { -u.coeff(n) } - if n == 0 { Complex64::new(u.mean(), 0.0) } else { Complex64::new(0.0, 0.0) };
            // H(H(u)) = −u + mean(u): the zero mode is −mean + mean = 0.
            let want = if n == 0 { Complex64::new(0.0, 0.0) } else { want };
            worst_hh = worst_hh.max((hh.coeff(n) - want).norm());
        }
    }
    let hc = hilbert_transform(&TrigPoly::cos(1)).unwrap();
    let sign_dev = (0..16)
        .map(|j| {
            let th = j as f64 / 16.0;
            (hc.eval_real(th) - pv_hilbert(|t| t.cos(), 2.0 * PI * th)).abs()
        })
        .fold(0.0, f64::max);
    let g = TrigPoly::from_fn(6, |n| Complex64::new(0.3 * n as f64, 1.0 / (1.0 + n.abs() as f64)));
    let as_trig = |p: &Polynomial| {
        let c = p.coeffs().to_vec();
        TrigPoly::from_fn(c.len() - 1, |n| if n >= 0 { c[n as usize] } else { Complex64::new(0.0, 0.0) })
    };
    let once = cauchy_projection(&g);
    let twice = cauchy_projection(&as_trig(&once));
    let idempotent = once.coeffs() == twice.coeffs();
    (
        worst_hh <= 1e-12 && sign_dev <= 1e-6 && idempotent,
        format!("H(H(u)) dev {worst_hh:e}; sign vs PV quadrature dev {sign_dev:e}; projection idempotent {idempotent}"),
    )
}

fn c4_littlewood_paley() -> Outcome {
    let start = Instant::now();
    let mut r = rng(4);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let deg = r.gen_range(0..=8);
        let mut poly = || {
            let c: Vec<Complex64> = (0..=deg).map(|_| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect();
            TrigPoly::from_fn(deg, |n| if n >= 0 { c[n as usize] } else { Complex64::new(0.0, 0.0) })
        };
        let (f, g) = (poly(), poly());
        let (lhs, rhs) = littlewood_paley_check(&f, &g, 0.9).unwrap();
        worst = worst.max((lhs - rhs).norm() / (1.0 + lhs.norm()));
    }
    let secs = start.elapsed().as_secs_f64();
    (worst <= 1e-6 && secs <= 30.0, format!("max |lhs - rhs|/(1+|lhs|) = {worst:e} in {secs:.2} s"))
}

fn c5_cutoff() -> Outcome {
    let start = Instant::now();
    let k = CantorKind::Fat { g0: 0.125, ratio: 0.125 }.build(4).unwrap();
    let w = Majorant::power(1.0).unwrap();
    let cands = [0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0];
    let Some((c, cut)) = search_cutoff_constant(&k, &w, 30, 2, 12, &cands).unwrap() else {
        return (false, "no candidate c passed the search".into());
    };
    let coarse = verify_cutoff_estimates(&cut, 2, 10_000, 12).unwrap();
    let fine = verify_cutoff_estimates(&cut, 2, 50_000, 12).unwrap();
    let mut max_f = 0.0f64;
    for j in 0..50_000 {
        max_f = max_f.max(cut.boundary(j as f64 / 50_000.0).norm());
    }
    for kk in 2..=12 {
        let u = 2f64.powi(-kk);
        for t in stolz_boundary_points(&k, u) {
            max_f = max_f.max(cut.value(Complex64::from_polar(1.0 - u, 2.0 * PI * t)).norm());
        }
    }
    let grid = RadialAngularGrid::new(8).unwrap();
    for z in grid.points() {
        max_f = max_f.max(cut.value(z).norm());
    }
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs());
    let (dc, dcw) = (rel(coarse.boundary_constant, fine.boundary_constant), rel(coarse.cw.value, fine.cw.value));
    let secs = start.elapsed().as_secs_f64();
    let ok = max_f <= 1.0 + 1e-12
        && coarse.boundary_constant.is_finite()
        && dc <= 0.1
        && coarse.cw.value.is_finite()
        && dcw <= 0.1
        && secs <= 120.0;
    (
        ok,
        format!(
            "c = {c}; max|f| = {max_f:.6}; C = {:.4} -> {:.4} ({:.2}%); cw = {:.4} -> {:.4} ({:.2}%); {secs:.1} s",
            coarse.boundary_constant,
            fine.boundary_constant,
            100.0 * dc,
            coarse.cw.value,
            fine.cw.value,
            100.0 * dcw
        ),
    )
}

fn sup_on_circle(p: &Polynomial) -> f64 {
    (0..65_536)
        .map(|j| p.value(Complex64::from_polar(1.0, 2.0 * PI * j as f64 / 65_536.0)).norm())
        .fold(0.0, f64::max)
}

fn c6_schwarz_pick() -> Outcome {
    let w = Majorant::log(0.5).unwrap();
    let grid = RadialAngularGrid::new(8).unwrap();
    let mut stage_ok = 0;
    let mut stages = 0;
    for factory in [ThetaFactory::Identity, ThetaFactory::Ladder { levels: 2, spread: 3 }] {
        let cert = sa_pipeline(&w, &default_stages(), &factory, &grid, &SAOptions::default()).unwrap();
        stages += cert.stages.len();
        stage_ok += cert.stages.iter().filter(|s| s.schwarz_pick_ok()).count();
    }
    let mut r = rng(6);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..100 {
        let deg = r.gen_range(1..=6);
        let g = Polynomial::new((0..=deg).map(|_| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect());
        let zeros: Vec<(Complex64, u32)> = (0..r.gen_range(1..=3))
            .map(|_| (Complex64::from_polar(r.gen_range(0.0..0.9), r.gen_range(0.0..2.0 * PI)), 1))
            .collect();
        let theta = InnerFunction::blaschke(&zeros).unwrap();
        let z = Complex64::from_polar(r.gen_range(0.0f64..0.99).sqrt(), r.gen_range(0.0..2.0 * PI));
        let d = 1.0 - z.norm();
        let (u, du) = theta.eval(z);
        let integrand = d * g.eval(u).1.norm() * du.norm() / w.at(d);
        let profile = theta.hyperbolic_derivative(z).unwrap() / w.at(d);
        let bound = sup_on_circle(&g) * profile;
        worst = worst.max((integrand - bound) / bound);
    }
    (
        stage_ok == stages && worst <= 1e-6,
        format!("{stage_ok}/{stages} pipeline stages within bound; worst relative excess over 100 triples {worst:e}"),
    )
}

fn c7_sa_controls() -> Outcome {
    let grid = RadialAngularGrid::new(8).unwrap();
    let mono = sa_pipeline(&Majorant::constant(), &default_stages(), &ThetaFactory::Monomial { k: 2 }, &grid, &SAOptions::default())
        .unwrap();
    let profiles: Vec<String> = mono.stages.iter().map(|s| format!("{:.4}", s.profile_sup)).collect();
    let ident = sa_pipeline(&Majorant::log(0.5).unwrap(), &default_stages(), &ThetaFactory::Identity, &grid, &SAOptions::default())
        .unwrap();
    let dev = ident.stages.iter().map(|s| (s.sup_dev - s.eps).abs()).fold(0.0, f64::max);
    (
        !mono.sa_trend() && dev <= 1e-2,
        format!(
            "monomial trend {} (profiles {}); identity max |sup|G-1| - eps| = {dev:.2e}",
            mono.sa_trend(),
            profiles.join(", ")
        ),
    )
}

fn c8_capacity() -> Outcome {
    let start = Instant::now();
    let mut r = rng(8);
    let arcs: Vec<Arc> = (0..20)
        .map(|_| Arc::new(r.gen_range(0..4096) as f64 / 4096.0, r.gen_range(205..3891) as f64 / 4096.0).unwrap())
        .collect();
    let sandwich_ok = arcs
        .par_iter()
        .filter(|&&i| {
            let lp = condenser_capacity(&CapacityProblem::new(i, None, 4096).unwrap()).unwrap();
            let (up, _) = capacity_degree1(&i).unwrap();
            lp.feasible && lp.value <= up + 1e-9
        })
        .count();
    let ladder_arcs: Vec<Arc> = (0..5)
        .map(|_| Arc::new(r.gen_range(0..256) as f64 / 256.0, r.gen_range(13..243) as f64 / 256.0).unwrap())
        .collect();
    // Within one grid the values grow with the t-level prefix; across grids the
    // full-level values grow with the resolution.
    let ladder_ok = ladder_arcs.par_iter().all(|&i| {
        let (up, _) = capacity_degree1(&i).unwrap();
        let mut prev_full = 0.0;
        [256, 512, 1024].iter().all(|&n| {
            let p = CapacityProblem::new(i, None, n).unwrap();
            let vals: Vec<f64> = (1..=p.t_levels.len())
                .map(|cut| {
                    let q = CapacityProblem { t_levels: p.t_levels[..cut].to_vec(), ..p.clone() };
                    condenser_capacity(&q).unwrap().value
                })
                .collect();
            let full = *vals.last().unwrap();
            let ok = vals.windows(2).all(|w| w[1] >= w[0] - 1e-9 * (1.0 + w[0]))
                && full >= prev_full - 1e-9 * (1.0 + prev_full)
                && full <= up + 1e-9;
            prev_full = full;
            ok
        })
    });
    let mut nested_ok = 0;
    for _ in 0..10 {
        let i = Arc::new(r.gen_range(0..256) as f64 / 256.0, r.gen_range(64..192) as f64 / 256.0).unwrap();
        let small = random_set(&mut r, 2);
        let big = small.union(&random_set(&mut r, 2));
        let base = CapacityProblem::new(i, None, 256).unwrap();
        let v = |k: CircleSet| condenser_capacity(&CapacityProblem { k: Some(k), ..base.clone() }).unwrap().value;
        let (a, b) = (v(small), v(big));
        if a <= b + 1e-9 * (1.0 + a.abs()) || b == f64::INFINITY {
            nested_ok += 1;
        }
    }
    let half = Arc::new(0.0, 0.5).unwrap();
    let abs = condenser_capacity(&CapacityProblem::new(half, None, 1024).unwrap()).unwrap();
    let rel = condenser_capacity(&CapacityProblem { k: Some(CircleSet::empty()), ..CapacityProblem::new(half, None, 1024).unwrap() })
        .unwrap();
    let exact = abs.value == rel.value;
    let lp4096 = condenser_capacity(&CapacityProblem::new(half, None, 4096).unwrap()).unwrap().value;
    let (up, _) = capacity_degree1(&half).unwrap();
    let width = (up - lp4096) / up;
    let secs = start.elapsed().as_secs_f64();
    (
        sandwich_ok == 20 && ladder_ok && nested_ok == 10 && exact,
        format!(
            "sandwich {sandwich_ok}/20; ladder monotone {ladder_ok}; nested K {nested_ok}/10; empty K exact {exact}; \
             half-circle width {:.2}% at 4096 (degree-1 attainment {}); {secs:.1} s",
            100.0 * width,
            if width <= 0.05 { "SUPPORTED" } else { "NOT SUPPORTED" }
        ),
    )
}

fn c9_norm_equivalence() -> Outcome {
    let mut r = rng(9);
    let w = Majorant::constant();
    let mut ratios = Vec::new();
    for _ in 0..20 {
        let mut v: Vec<f64> = (0..64).map(|_| r.gen_range(-1.0..1.0)).collect();
        let mean = v.iter().sum::<f64>() / 64.0;
        v.iter_mut().for_each(|x| *x -= mean);
        let g = DyadicStep::new(v).unwrap();
        let b = besov_b1_seminorm(&g).unwrap().value;
        let (a, _) = atomic_bw_upper(&g, &w, 6).unwrap();
        ratios.push(a / b);
    }
    let ok = ratios.iter().all(|q| q.is_finite() && *q > 0.0);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let c = hi.max(1.0 / lo);
    (ok, format!("atomic/besov ratios in [{lo:.4}, {hi:.4}], so c = {c:.4}"))
}

fn c10_battery() -> Outcome {
    let a = 0.25;
    let e = normalize(&[Arc::new(0.0, a).unwrap()]);
    let s = symcond_integral(&e, 1e-9).unwrap().limit_value().unwrap();
    let stated = 2.0 * a * (1.0 + (1.0 / a).ln());
    let circle = 2.0 * a * ((1.0 - a) / a).ln() - 2.0 * (1.0 - a).ln();
    let closed_ok = (s - stated).abs() <= 1e-4;
    let w = Majorant::power(1.0).unwrap();
    let kinds = [
        CantorKind::Fat { g0: 0.125, ratio: 0.125 },
        CantorKind::Fat { g0: 0.25, ratio: 0.25 },
        CantorKind::FatPower { g0: 0.25, exponent: 1.5 },
        CantorKind::FatPower { g0: 0.25, exponent: 3.0 },
        CantorKind::SelfSimilar { ratio: 1.0 / 3.0 },
        CantorKind::SelfSimilar { ratio: 0.45 },
    ];
    let depths = [64, 128, 256, 512, 1024];
    let mut agree = 0;
    let mut verdicts = Vec::new();
    for kind in kinds {
        let te = trend(&entropy_partial_sums(kind, &w, &depths)).unwrap();
        let tc = trend(&collar_partial_sums(kind, &depths)).unwrap();
        if te == tc {
            agree += 1;
        }
        verdicts.push(format!("{kind}: {}", if te == Trend::Finite { "finite" } else { "divergent" }));
    }
    (
        closed_ok && agree == 6,
        format!(
            "single arc: integral {s:.6}, stated closed form {stated:.6} (diff {:.4}), circle closed form {circle:.6}; \
             verdicts agree {agree}/6 [{}]",
            (s - stated).abs(),
            verdicts.join("; ")
        ),
    )
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run_cli(exp: &str, out: &Path, threads: &str) -> bool {
    Command::new(env!("CARGO_BIN_EXE_blochlab"))
        .args([exp, "--config"])
        .arg(configs().join(format!("{exp}.toml")))
        .arg("--out")
        .arg(out)
        .env("BLOCHLAB_THREADS", threads)
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

fn c11_determinism() -> Outcome {
    let exps = ["entropy", "content", "sparseness", "norms", "lp-check", "cutoff", "sa-run", "capacity", "char1"];
    let root = std::env::temp_dir().join(format!("blochlab-acceptance-{}", std::process::id()));
    let mut same = 0;
    let mut bad = Vec::new();
    for exp in exps {
        let (a, b) = (root.join(format!("{exp}-a")), root.join(format!("{exp}-b")));
        let ok = run_cli(exp, &a, "1") && run_cli(exp, &b, "4");
        let read = |d: &Path, f: &str| std::fs::read(d.join(f)).ok();
        if ok && read(&a, "report.csv").is_some() && read(&a, "report.csv") == read(&b, "report.csv") && read(&a, "plot.svg") == read(&b, "plot.svg") {
            same += 1;
        } else {
            bad.push(exp);
        }
    }
    let _ = std::fs::remove_dir_all(&root);
    (bad.is_empty(), format!("{same}/{} experiments byte-identical across runs with 1 and 4 threads {bad:?}", exps.len()))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 11] = [
        (1, "content oracle equivalence", c1_content_oracle),
        (2, "arc content identity", c2_arc_content),
        (3, "Fourier identities", c3_fourier),
        (4, "Littlewood-Paley calibration", c4_littlewood_paley),
        (5, "cut-off construction", c5_cutoff),
        (6, "Schwarz-Pick composition certificate", c6_schwarz_pick),
        (7, "SA pipeline controls", c7_sa_controls),
        (8, "capacity sandwich", c8_capacity),
        (9, "norm-equivalence sanity", c9_norm_equivalence),
        (10, "finiteness battery", c10_battery),
        (11, "determinism", c11_determinism),
    ];
    let mut unexpected = Vec::new();
    for (id, name, f) in criteria {
        let (pass, detail) = f();
        let known = KNOWN_FAILURES.iter().find(|k| k.0 == id);
        println!("{} criterion {id:>2} ({name}): {detail}", if pass { "PASS" } else { "FAIL" });
        match (pass, known) {
            (false, Some((_, why))) => println!("     known failure: {why}"),
            (false, None) => unexpected.push(format!("criterion {id} failed")),
            (true, Some(_)) => unexpected.push(format!("criterion {id} passed but is listed as a known failure")),
            (true, None) => {}
        }
    }
    if !unexpected.is_empty() {
        eprintln!("acceptance: {}", unexpected.join("; "));
        std::process::exit(1);
    }
}
