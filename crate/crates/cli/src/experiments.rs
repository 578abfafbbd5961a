//! The experiments: each turns validated parameters into a [`Report`].

use std::f64::consts::PI;
use std::path::Path;

use anyhow::Result;
use blochlab::capacity::{capacity_degree1, capacity_gap_report_capped};
use blochlab::constructions::{
    default_stages, sa_pipeline, search_cutoff_constant, verify_cutoff_estimates, SAOptions, ThetaFactory,
};
use blochlab::disc::{DiscFunction, Polynomial};
use blochlab::fourier::{hilbert_transform, littlewood_paley_check, TrigPoly};
use blochlab::geometry::{Arc, CircleSet};
use blochlab::norms::{
    atomic_bw_report, besov_b1_seminorm, bloch_w_norm, cw_seminorm, w1a_w_norm, zygmund_seminorm, BoundarySamples,
    Certificate, DyadicStep, RadialAngularGrid,
};
use blochlab::setfun::{
    collar_partial_sums, content_bruteforce, entropy_partial_sums, hausdorff_content, run_cover_content,
    sparseness_check, trend, w_entropy, EntropyValue, GeneratorTail, MeasureFunction, Trend, BRUTE_LIMIT,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::config::{context, majorant, parse_arc, require, SetSpec, MAX_SET_DEPTH};
use crate::plot::{Plot, Series};
use crate::report::{Cell, Report, Table, Unit};

use Unit::{Dimensionless as D, Measure as M, Text as T, Turns};

fn power_one() -> String {
    "power:1".into()
}

fn constant() -> String {
    "constant".into()
}

fn entropy_measure() -> String {
    "entropy".into()
}

fn plot(title: &str, x: &str, y: &str, log_x: bool, log_y: bool, series: Vec<Series>) -> Option<Plot> {
    Some(Plot { title: title.into(), x_label: x.into(), y_label: y.into(), log_x, log_y, series })
}

fn ev(v: EntropyValue) -> Cell {
    Cell::Num(v.finite().unwrap_or(f64::NEG_INFINITY))
}

fn verdict(partials: &[EntropyValue]) -> &'static str {
    match trend(partials) {
        Ok(Trend::Finite) => "finite",
        Ok(Trend::Divergent) => "divergent",
        Err(_) => "undetermined",
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntropyParams {
    #[serde(default = "power_one")]
    majorant: String,
    cantor: String,
    depths: Vec<u32>,
    #[serde(default = "yes")]
    tail: bool,
}

fn yes() -> bool {
    true
}

pub fn entropy(p: &EntropyParams, base: &Path) -> Result<Report> {
    let w = majorant(&p.majorant, base)?;
    let kind = SetSpec { cantor: Some(p.cantor.clone()), ..Default::default() }.cantor_kind()?.expect("set");
    require(!p.depths.is_empty(), || "depths must be nonempty".into())?;
    require(p.depths.windows(2).all(|d| d[0] < d[1]), || "depths must increase".into())?;
    require(p.depths.iter().all(|&d| (1..=MAX_SET_DEPTH).contains(&d)), || format!("depths must lie in 1..={MAX_SET_DEPTH}"))?;
    let ent = entropy_partial_sums(kind, &w, &p.depths);
    let col = collar_partial_sums(kind, &p.depths);
    let (ent_v, col_v) = (verdict(&ent), verdict(&col));
    let mut table = Table::new(&[
        ("depth", D),
        ("gaps", D),
        ("partial_entropy", Turns),
        ("tail_bound", Turns),
        ("total", Turns),
        ("collar_integral", Turns),
        ("entropy_verdict", T),
        ("collar_verdict", T),
    ]);
    let mut neg_entropy = Vec::new();
    let mut collar = Vec::new();
    for (i, &d) in p.depths.iter().enumerate() {
        let k = context(kind.build(d), "building the Cantor set")?;
        let tail = GeneratorTail { kind, from_generation: d };
        let rep = context(w_entropy(&k, &w, p.tail.then_some(&tail)), "entropy")?;
        let tail_cell = rep.tail_bound.map_or(Cell::Num(0.0), ev);
        table.push(vec![
            d.into(),
            rep.gap_count.into(),
            ev(rep.value),
            tail_cell,
            ev(rep.total()),
            ev(col[i]),
            ent_v.into(),
            col_v.into(),
        ]);
        if let Some(v) = rep.value.finite() {
            neg_entropy.push((d as f64, -v));
        }
        if let Some(v) = col[i].finite() {
            collar.push((d as f64, v));
        }
    }
    let positive = neg_entropy.iter().chain(&collar).all(|p| p.1 > 0.0);
    let series = [Series::new("-entropy", neg_entropy), Series::new("collar", collar)]
        .into_iter()
        .filter(|s| !s.points.is_empty())
        .collect();
    Ok(Report {
        table,
        plot: plot("Entropy and collar partial sums", "depth", "value [turns]", false, positive, series),
        flags: Vec::new(),
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContentParams {
    set: SetSpec,
    #[serde(default = "default_measures")]
    measures: Vec<String>,
    #[serde(default = "yes")]
    bruteforce: bool,
}

fn default_measures() -> Vec<String> {
    vec!["power:1".into(), "power:0.5".into(), "entropy".into()]
}

pub fn content(p: &ContentParams, base: &Path) -> Result<Report> {
    let e = p.set.build()?;
    require(!p.measures.is_empty(), || "measures must be nonempty".into())?;
    let mut table = Table::new(&[
        ("measure", T),
        ("content", M),
        ("cover_arcs", D),
        ("run_partition", M),
        ("bruteforce", M),
        ("agree", T),
    ]);
    let mut flags = Vec::new();
    let mut pts = Vec::new();
    for (i, desc) in p.measures.iter().enumerate() {
        let beta = context(MeasureFunction::parse(desc, Some(base)), "measure function")?;
        let exact = context(hausdorff_content(&e, &beta), "content")?;
        let runs = context(run_cover_content(&e, &beta), "run-partition content")?;
        let brute = if p.bruteforce && e.len() <= BRUTE_LIMIT {
            Some(context(content_bruteforce(&e, &beta), "brute-force content")?)
        } else {
            None
        };
        let agree = brute.map_or(true, |b| (b - exact.value).abs() <= 1e-12);
        if !agree {
            flags.push(format!("{desc}: content {} differs from brute force {}", exact.value, brute.unwrap_or(f64::NAN)));
        }
        table.push(vec![
            desc.as_str().into(),
            exact.value.into(),
            exact.cover.len().into(),
            runs.value.into(),
            brute.unwrap_or(f64::NAN).into(),
            agree.into(),
        ]);
        pts.push(((i + 1) as f64, exact.value));
    }
    Ok(Report {
        table,
        plot: plot("Hausdorff content per measure function", "measure index", "content [normalized-measure]", false, false, vec![Series::new("content", pts)]),
        flags,
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SparsenessParams {
    set: SetSpec,
    #[serde(default = "entropy_measure")]
    measure: String,
    probes: Option<Vec<String>>,
    #[serde(default = "default_probe_count")]
    probe_count: usize,
}

fn default_probe_count() -> usize {
    16
}

pub fn sparseness(p: &SparsenessParams, base: &Path, seed: u64) -> Result<Report> {
    let e = p.set.build()?;
    let beta = context(MeasureFunction::parse(&p.measure, Some(base)), "measure function")?;
    let probes: Vec<Arc> = match &p.probes {
        Some(list) => list.iter().map(|s| parse_arc(s)).collect::<Result<_>>()?,
        None => {
            require((1..=10_000).contains(&p.probe_count), || "probe_count must lie in 1..=10000".into())?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..p.probe_count)
                .map(|_| {
                    let (s, l): (f64, f64) = (rng.gen(), rng.gen_range(0.01..0.5));
                    Arc::new(s, l).expect("valid probe")
                })
                .collect()
        }
    };
    require(!probes.is_empty(), || "at least one probe arc is needed".into())?;
    let rep = context(sparseness_check(&e, &beta, &probes), "sparseness check")?;
    let mut table = Table::new(&[
        ("probe", D),
        ("start", Turns),
        ("length", Turns),
        ("content_probe", M),
        ("content_probe_minus_set", M),
        ("deficit", M),
        ("sparse_on_probes", T),
    ]);
    let mut pts = Vec::new();
    for r in &rep.rows {
        table.push(vec![
            r.probe_id.into(),
            r.probe.start().into(),
            r.probe.length().into(),
            r.content_i.into(),
            r.content_i_minus_e.into(),
            r.deficit.into(),
            rep.sparse_on_probes.into(),
        ]);
        pts.push(((r.probe_id + 1) as f64, r.deficit));
    }
    Ok(Report {
        table,
        plot: plot("Content deficit per probe arc", "probe", "deficit [normalized-measure]", false, false, vec![Series::new("deficit", pts)]),
        flags: Vec::new(),
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormsParams {
    #[serde(default = "constant")]
    majorant: String,
    coefficients: Vec<f64>,
    coefficients_im: Option<Vec<f64>>,
    #[serde(default = "default_grid_k")]
    grid_k: u32,
    #[serde(default = "default_step_depth")]
    step_depth: u32,
    dict_depth: Option<u32>,
    #[serde(default = "default_levels")]
    zygmund_levels: u32,
    #[serde(default = "default_samples")]
    boundary_samples: usize,
}

fn default_grid_k() -> u32 {
    10
}

fn default_step_depth() -> u32 {
    6
}

fn default_levels() -> u32 {
    10
}

fn default_samples() -> usize {
    4096
}

fn complex_coeffs(re: &[f64], im: Option<&Vec<f64>>) -> Result<Vec<Complex64>> {
    require(!re.is_empty() && re.len() <= 257, || "coefficients must have 1..=257 entries".into())?;
    if let Some(im) = im {
        require(im.len() == re.len(), || "coefficients_im must match coefficients in length".into())?;
    }
    let all = re.iter().chain(im.into_iter().flatten());
    require(all.clone().all(|v| v.is_finite()), || "coefficients must be finite".into())?;
    Ok(re.iter().enumerate().map(|(n, &a)| Complex64::new(a, im.map_or(0.0, |v| v[n]))).collect())
}

/// `Re f` on the circle for `f = Σ c_n z^n`.
fn real_part(c: &[Complex64]) -> TrigPoly {
    TrigPoly::from_fn(c.len() - 1, |n| match n {
        0 => Complex64::new(c[0].re, 0.0),
        n if n > 0 => 0.5 * c[n as usize],
        n => 0.5 * c[(-n) as usize].conj(),
    })
}

pub fn norms(p: &NormsParams, base: &Path) -> Result<Report> {
    let w = majorant(&p.majorant, base)?;
    let coeffs = complex_coeffs(&p.coefficients, p.coefficients_im.as_ref())?;
    require((1..=14).contains(&p.step_depth), || "step_depth must lie in 1..=14".into())?;
    let dict_depth = p.dict_depth.unwrap_or(p.step_depth.min(10));
    require(dict_depth <= 10, || "dict_depth must be at most 10".into())?;
    require((1..=20).contains(&p.zygmund_levels), || "zygmund_levels must lie in 1..=20".into())?;
    let grid = context(RadialAngularGrid::new(p.grid_k), "grid")?;
    let f = Polynomial::new(coeffs.clone());
    let re = real_part(&coeffs);
    let mut table = Table::new(&[("norm", T), ("value", D), ("certificate", T), ("grid", T)]);
    let mut flags = Vec::new();
    for rep in [bloch_w_norm(&f, &w, &grid), w1a_w_norm(&f, &w, &grid)] {
        if rep.certified == Certificate::NotConverged {
            flags.push(format!("{} did not converge on {}", rep.name, rep.grid_id));
        }
        if !rep.skipped_rings.is_empty() {
            flags.push(format!("{} skipped rings {:?}", rep.name, rep.skipped_rings));
        }
        table.push(vec![rep.name.into(), rep.value.into(), rep.certified.to_string().into(), rep.grid_id.into()]);
    }
    let ts: Vec<f64> = (2..p.zygmund_levels + 2).map(|j| 2f64.powi(-(j as i32))).collect();
    let zyg = context(zygmund_seminorm(&re, &ts), "Zygmund seminorm")?;
    table.push(vec!["zygmund_real_part".into(), zyg.into(), "lower".into(), format!("dyadic-t{}", ts.len()).into()]);
    let bs = BoundarySamples::from_fn(p.boundary_samples, |t| f.value(Complex64::from_polar(1.0, 2.0 * PI * t)));
    let cw = context(cw_seminorm(&bs, &w), "C_w seminorm")?;
    table.push(vec!["cw".into(), cw.value.into(), "upper".into(), format!("samples{}", p.boundary_samples).into()]);
    let step = context(DyadicStep::cell_averages(&re, p.step_depth), "cell averages")?;
    let besov = context(besov_b1_seminorm(&step), "Besov seminorm")?;
    table.push(vec!["besov_b1_real_part".into(), besov.value.into(), "converged".into(), format!("dyadic-d{}", p.step_depth).into()]);
    let atomic = context(atomic_bw_report(&step, &w, dict_depth), "atomic norm")?;
    if atomic.residual > 1e-8 {
        flags.push(format!("atomic representation residual {:e}", atomic.residual));
    }
    table.push(vec!["atomic_real_part".into(), atomic.value.into(), "upper".into(), format!("atoms-d{dict_depth}").into()]);
    Ok(Report { table, plot: None, flags })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LpParams {
    #[serde(default = "default_degree")]
    degree: usize,
    #[serde(default = "default_pairs")]
    pairs: usize,
    #[serde(default = "default_r")]
    r: f64,
}

fn default_degree() -> usize {
    8
}

fn default_pairs() -> usize {
    50
}

fn default_r() -> f64 {
    0.9
}

fn random_analytic(rng: &mut ChaCha8Rng, degree: usize) -> TrigPoly {
    let c: Vec<Complex64> = (0..=degree).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    TrigPoly::from_fn(degree, |n| if n >= 0 { c[n as usize] } else { Complex64::new(0.0, 0.0) })
}

pub fn lp_check(p: &LpParams, seed: u64) -> Result<Report> {
    require((1..=64).contains(&p.degree), || "degree must lie in 1..=64".into())?;
    require((1..=10_000).contains(&p.pairs), || "pairs must lie in 1..=10000".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = Table::new(&[
        ("pair", D),
        ("lhs_re", D),
        ("lhs_im", D),
        ("rhs_re", D),
        ("rhs_im", D),
        ("abs_diff", D),
        ("pass", T),
    ]);
    let mut flags = Vec::new();
    let mut pts = Vec::new();
    for k in 0..p.pairs {
        let (f, g) = (random_analytic(&mut rng, p.degree), random_analytic(&mut rng, p.degree));
        let (lhs, rhs) = context(littlewood_paley_check(&f, &g, p.r), "Littlewood-Paley check")?;
        let diff = (lhs - rhs).norm();
        let pass = diff <= 1e-6 * (1.0 + lhs.norm());
        if !pass {
            flags.push(format!("pair {k}: |lhs - rhs| = {diff:e}"));
        }
        table.push(vec![k.into(), lhs.re.into(), lhs.im.into(), rhs.re.into(), rhs.im.into(), diff.into(), pass.into()]);
        pts.push(((k + 1) as f64, diff));
    }
    Ok(Report {
        table,
        plot: plot("Littlewood-Paley discrepancy", "pair", "|lhs - rhs|", false, false, vec![Series::new("abs_diff", pts)]),
        flags,
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutoffParams {
    #[serde(default = "power_one")]
    majorant: String,
    set: SetSpec,
    #[serde(default = "default_n")]
    n_power: u32,
    #[serde(default = "default_whitney")]
    whitney_depth: u32,
    #[serde(default = "default_rings")]
    rings: u32,
    #[serde(default = "default_candidates")]
    candidates: Vec<f64>,
    #[serde(default = "default_cut_samples")]
    samples: Vec<usize>,
}

fn default_n() -> u32 {
    2
}

fn default_whitney() -> u32 {
    30
}

fn default_rings() -> u32 {
    12
}

fn default_candidates() -> Vec<f64> {
    vec![0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0]
}

fn default_cut_samples() -> Vec<usize> {
    vec![2000, 10000]
}

pub fn cutoff(p: &CutoffParams, base: &Path) -> Result<Report> {
    let w = majorant(&p.majorant, base)?;
    let k = p.set.build()?;
    require(!p.candidates.is_empty(), || "candidates must be nonempty".into())?;
    require(!p.samples.is_empty() && p.samples.iter().all(|&n| (1024..=1_000_000).contains(&n)), || {
        "samples must lie in 1024..=1000000".into()
    })?;
    require(p.rings >= 2 && p.rings <= 40, || "rings must lie in 2..=40".into())?;
    let found = context(search_cutoff_constant(&k, &w, p.whitney_depth, p.n_power, p.rings, &p.candidates), "cutoff search")?;
    let mut flags = Vec::new();
    let (c, cut, ok) = match found {
        Some((c, cut)) => (c, cut, true),
        None => {
            let c = p.candidates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            flags.push(format!("no candidate constant passed the growth test; reporting c = {c}"));
            let cut = context(blochlab::constructions::khrushchev_cutoff(&k, &w, c, p.whitney_depth), "cutoff")?;
            (c, cut, false)
        }
    };
    let mut table = Table::new(&[
        ("samples", D),
        ("c", D),
        ("c_found", T),
        ("terms", D),
        ("f_at_origin", D),
        ("stolz_max", D),
        ("boundary_constant", D),
        ("max_on_k", D),
        ("cw_near_range", D),
        ("cw", D),
    ]);
    let mut cs = Vec::new();
    let mut cws = Vec::new();
    for &n in &p.samples {
        let rep = context(verify_cutoff_estimates(&cut, p.n_power, n, p.rings), "cutoff estimates")?;
        let stolz = rep.stolz.iter().filter_map(|r| r.ratio).fold(0.0, f64::max);
        table.push(vec![
            n.into(),
            c.into(),
            ok.into(),
            cut.term_count().into(),
            cut.value_at_origin().into(),
            stolz.into(),
            rep.boundary_constant.into(),
            rep.max_on_k.into(),
            rep.cw.near_range.into(),
            rep.cw.value.into(),
        ]);
        cs.push((n as f64, rep.boundary_constant));
        cws.push((n as f64, rep.cw.value));
    }
    let positive = cs.iter().chain(&cws).all(|p| p.1 > 0.0);
    Ok(Report {
        table,
        plot: plot(
            "Cut-off constants under sample refinement",
            "boundary samples",
            "value",
            true,
            positive,
            vec![Series::new("boundary C", cs), Series::new("cw", cws)],
        ),
        flags,
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SaParams {
    majorant: String,
    #[serde(default = "default_theta")]
    theta: String,
    stages: Option<Vec<[f64; 2]>>,
    #[serde(default = "default_sa_grid")]
    grid_k: u32,
    #[serde(default = "default_samples")]
    boundary_samples: usize,
    polynomial: Option<(f64, usize)>,
}

fn default_theta() -> String {
    "identity".into()
}

fn default_sa_grid() -> u32 {
    8
}

pub fn sa_run(p: &SaParams, base: &Path) -> Result<Report> {
    let w = majorant(&p.majorant, base)?;
    let factory: ThetaFactory = context(p.theta.parse(), "inner-function factory")?;
    let stages: Vec<(f64, f64)> = match &p.stages {
        Some(s) => s.iter().map(|&[e, d]| (e, d)).collect(),
        None => default_stages(),
    };
    require(stages.len() <= 12, || "at most 12 stages".into())?;
    let grid = context(RadialAngularGrid::new(p.grid_k), "grid")?;
    let opts = SAOptions { boundary_samples: p.boundary_samples, polynomial: p.polynomial };
    let cert = context(sa_pipeline(&w, &stages, &factory, &grid, &opts), "SA pipeline")?;
    let mut table = Table::new(&[
        ("stage", D),
        ("eps", D),
        ("delta", Turns),
        ("degree", D),
        ("n_est", D),
        ("eta", D),
        ("profile_sup", D),
        ("profile_miss", T),
        ("bloch_norm", D),
        ("schwarz_pick_bound", D),
        ("schwarz_pick_ok", T),
        ("sup_dev", D),
        ("e_measure", M),
        ("skipped_samples", D),
        ("poly_tail", D),
        ("sa_trend", T),
    ]);
    let mut flags = Vec::new();
    let (mut norms, mut profiles) = (Vec::new(), Vec::new());
    for s in &cert.stages {
        if s.skipped_samples > 0 {
            flags.push(format!("stage {}: {} boundary samples overflowed", s.j, s.skipped_samples));
        }
        table.push(vec![
            s.j.into(),
            s.eps.into(),
            s.delta.into(),
            s.degree.into(),
            s.n_est.into(),
            s.eta.into(),
            s.profile_sup.into(),
            s.profile_miss.into(),
            s.bloch_norm.into(),
            s.schwarz_pick_bound.into(),
            s.schwarz_pick_ok().into(),
            s.sup_dev.into(),
            s.e_set.measure().into(),
            s.skipped_samples.into(),
            s.poly_tail.unwrap_or(f64::NAN).into(),
            cert.sa_trend().into(),
        ]);
        norms.push((s.j as f64, s.bloch_norm));
        profiles.push((s.j as f64, s.profile_sup));
    }
    let positive = norms.iter().chain(&profiles).all(|p| p.1 > 0.0);
    Ok(Report {
        table,
        plot: plot(
            "SA pipeline trend",
            "stage",
            "value",
            false,
            positive,
            vec![Series::new("Bloch norm", norms), Series::new("profile sup", profiles)],
        ),
        flags,
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacityParams {
    arc: String,
    k: Option<SetSpec>,
    #[serde(default = "default_resolutions")]
    resolutions: Vec<usize>,
    degree_cap: Option<usize>,
}

fn default_resolutions() -> Vec<usize> {
    vec![256, 512, 1024]
}

pub fn capacity(p: &CapacityParams) -> Result<Report> {
    let i = parse_arc(&p.arc)?;
    let k = match &p.k {
        Some(spec) => spec.build()?,
        None => CircleSet::empty(),
    };
    require(p.resolutions.iter().all(|&n| n <= 1 << 14), || "resolutions must be at most 16384".into())?;
    let rep = context(capacity_gap_report_capped(&i, &k, &p.resolutions, p.degree_cap), "capacity")?;
    let (upper, _) = context(capacity_degree1(&i), "degree-one capacity")?;
    let mut table = Table::new(&[
        ("grid_n", D),
        ("t_count", D),
        ("value_without_k", D),
        ("value_with_k", D),
        ("gap", D),
        ("lp_status", T),
        ("degree1_upper", D),
        ("sandwich_width", D),
        ("k_negligible", T),
    ]);
    let mut flags = Vec::new();
    let (mut lo, mut hi) = (Vec::new(), Vec::new());
    for r in &rep.rows {
        let status = if r.with_k.is_infinite() {
            "infeasible"
        } else if !r.converged {
            "not-converged"
        } else if !r.feasible {
            "violation"
        } else {
            "optimal"
        };
        if matches!(status, "not-converged" | "violation") {
            flags.push(format!("grid {}: LP status {status}", r.grid_n));
        }
        let width = (upper - r.without_k) / upper;
        table.push(vec![
            r.grid_n.into(),
            r.t_count.into(),
            r.without_k.into(),
            r.with_k.into(),
            r.gap.into(),
            status.into(),
            upper.into(),
            width.into(),
            rep.k_negligible.into(),
        ]);
        lo.push((r.grid_n as f64, r.without_k));
        if r.with_k.is_finite() {
            hi.push((r.grid_n as f64, r.with_k));
        }
    }
    let mut series = vec![Series::new("without K", lo), Series::new("degree-1 upper", rep.rows.iter().map(|r| (r.grid_n as f64, upper)).collect())];
    if !hi.is_empty() {
        series.insert(1, Series::new("with K", hi));
    }
    Ok(Report { table, plot: plot("Condenser capacity sandwich", "grid_n", "capacity", true, false, series), flags })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Char1Params {
    u: Vec<f64>,
    v: Vec<f64>,
    #[serde(default = "constant")]
    majorant: String,
    fourier_degree: Option<usize>,
    dict_depth: Option<u32>,
}

pub fn char1(p: &Char1Params, base: &Path) -> Result<Report> {
    let w = majorant(&p.majorant, base)?;
    let u = context(DyadicStep::new(p.u.clone()), "u")?;
    let v = context(DyadicStep::new(p.v.clone()), "v")?;
    require(u.depth() == v.depth(), || "u and v need the same number of values".into())?;
    let depth = u.depth();
    require((1..=10).contains(&depth), || "u and v need 2..=1024 values".into())?;
    let degree = p.fourier_degree.unwrap_or(4 << depth);
    require((1..=8192).contains(&degree), || "fourier_degree must lie in 1..=8192".into())?;
    let dict_depth = p.dict_depth.unwrap_or(depth);
    require(dict_depth <= 10, || "dict_depth must be at most 10".into())?;
    let hv = context(hilbert_transform(&v.fourier(degree)), "Hilbert transform")?;
    let hv = context(DyadicStep::cell_averages(&hv, depth), "cell averages")?;
    let mut table = Table::new(&[
        ("hilbert_sign", D),
        ("combination", T),
        ("besov", D),
        ("atomic", D),
        ("atomic_dual_bound", D),
        ("ratio", D),
    ]);
    let mut flags = Vec::new();
    for sign in [1i64, -1] {
        let h = hv.scaled(sign as f64);
        for (label, s) in [("u+Hv", 1.0), ("u-Hv", -1.0)] {
            let g = u.combine(&h, |a, b| a + s * b);
            let besov = context(besov_b1_seminorm(&g), "Besov seminorm")?;
            let atomic = context(atomic_bw_report(&g, &w, dict_depth), "atomic norm")?;
            if atomic.residual > 1e-8 {
                flags.push(format!("{label} (sign {sign}): atomic residual {:e}", atomic.residual));
            }
            let ratio = if besov.value > 0.0 { atomic.value / besov.value } else { f64::NAN };
            table.push(vec![
                sign.into(),
                label.into(),
                besov.value.into(),
                atomic.value.into(),
                atomic.dual_bound.into(),
                ratio.into(),
            ]);
        }
    }
    Ok(Report { table, plot: None, flags })
}
