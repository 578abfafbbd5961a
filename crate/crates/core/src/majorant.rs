//! Weight majorants `w` and their Dini-type integrals.

use std::fmt;
use std::path::Path;

use crate::error::{param, Error, Result};
use crate::quad::GaussLegendre;

/// Sampled weight table with linear interpolation between knots.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    t: Vec<f64>,
    w: Vec<f64>,
    source: String,
}

impl Table {
    pub fn new(t: Vec<f64>, w: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        if t.len() < 2 || t.len() != w.len() {
            return param("a weight table needs at least two (t, w) rows");
        }
        if t.windows(2).any(|p| p[1] <= p[0]) {
            return param("weight table t column must be strictly increasing");
        }
        if t[0] <= 0.0 || w.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
            return param("weight table needs t > 0 and finite w > 0");
        }
        if w.windows(2).any(|p| p[1] < p[0]) {
            return param("weight table must be nondecreasing");
        }
        Ok(Self { t, w, source: source.into() })
    }

    /// Reads a headerless two-column CSV of `t,w(t)` rows.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let (mut t, mut w) = (Vec::new(), Vec::new());
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            if rec.len() != 2 {
                return Err(Error::Parse(format!("{}: expected two columns", path.display())));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| Error::Parse(format!("not a number: {s:?}")));
            t.push(num(&rec[0])?);
            w.push(num(&rec[1])?);
        }
        Self::new(t, w, path.display().to_string())
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.t.len();
        if x <= self.t[0] {
            return self.w[0];
        }
        if x >= self.t[n - 1] {
            return self.w[n - 1];
        }
        let j = self.t.partition_point(|&k| k <= x);
        let (t0, t1) = (self.t[j - 1], self.t[j]);
        let (w0, w1) = (self.w[j - 1], self.w[j]);
        w0 + (w1 - w0) * (x - t0) / (t1 - t0)
    }

    pub fn knots(&self) -> &[f64] {
        &self.t
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MajorantKind {
    /// `w ≡ 1`.
    Constant,
    /// `w(t) = t^α`, `0 < α ≤ 1`.
    Power(f64),
    /// `w(t) = log(e/t)^{-c}`.
    Log(f64),
    Tabulated(Table),
}

/// Verdict on the square-Dini condition `∫_0 w(t)²/t dt < ∞`.
#[derive(Debug, Clone, PartialEq)]
pub enum DiniClass {
    Divergent,
    Convergent,
    /// Evidence: `dini_integral(w, 2, 2^{-k})` for `k = 1..`.
    Unknown(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Majorant {
    kind: MajorantKind,
    alpha_witness: Option<f64>,
}

impl Majorant {
    pub fn new(kind: MajorantKind) -> Result<Self> {
        let alpha_witness = match &kind {
            MajorantKind::Constant => Some(0.5),
            MajorantKind::Power(a) => {
                if !(*a > 0.0 && *a <= 1.0) {
                    return param(format!("power exponent {a} outside (0, 1]"));
                }
                (*a < 1.0).then(|| 0.5 * (a + 1.0))
            }
            MajorantKind::Log(c) => {
                if !(*c > 0.0) || !c.is_finite() {
                    return param(format!("log exponent {c} must be positive"));
                }
                (*c < 1.0).then(|| 0.5 * (1.0 + c))
            }
            MajorantKind::Tabulated(_) => None,
        };
        Ok(Self { kind, alpha_witness })
    }

    pub fn constant() -> Self {
        Self { kind: MajorantKind::Constant, alpha_witness: Some(0.5) }
    }

    pub fn power(alpha: f64) -> Result<Self> {
        Self::new(MajorantKind::Power(alpha))
    }

    pub fn log(c: f64) -> Result<Self> {
        Self::new(MajorantKind::Log(c))
    }

    pub fn kind(&self) -> &MajorantKind {
        &self.kind
    }

    /// Exponent `α` with `w(t)/t^α` nonincreasing, when one is known.
    pub fn alpha_witness(&self) -> Option<f64> {
        self.alpha_witness
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("majorant evaluated at t = {t} <= 0")));
        }
        Ok(self.at(t))
    }

    /// Evaluation without the domain check; `t` must be positive.
    #[inline]
    pub fn at(&self, t: f64) -> f64 {
        let t = t.min(1.0);
        match &self.kind {
            MajorantKind::Constant => 1.0,
            MajorantKind::Power(a) => t.powf(*a),
            MajorantKind::Log(c) => (1.0 - t.ln()).powf(-c),
            MajorantKind::Tabulated(tab) => tab.eval(t),
        }
    }

    /// `log w(e^{ln_t})`, finite even when `e^{ln_t}` underflows.
    pub fn ln_at(&self, ln_t: f64) -> f64 {
        let ln_t = ln_t.min(0.0);
        match &self.kind {
            MajorantKind::Constant => 0.0,
            MajorantKind::Power(a) => a * ln_t,
            MajorantKind::Log(c) => -c * (1.0 - ln_t).ln(),
            MajorantKind::Tabulated(tab) => tab.eval(ln_t.exp()).ln(),
        }
    }

    /// `∫_eps^1 w(t)^γ dt / t`.
    pub fn dini_integral(&self, gamma: f64, eps: f64) -> Result<f64> {
        if !(eps > 0.0 && eps < 1.0) {
            return param(format!("eps = {eps} must lie in (0, 1)"));
        }
        if !(gamma > 0.0) {
            return param("gamma must be positive");
        }
        // Substitute u = -ln t; panels of width ln 2 follow t = 2^{-k}.
        let big_u = -eps.ln();
        let mut cuts: Vec<f64> = Vec::new();
        let step = std::f64::consts::LN_2;
        let mut u = 0.0;
        while u < big_u {
            cuts.push(u);
            u += step;
        }
        if let MajorantKind::Tabulated(tab) = &self.kind {
            cuts.extend(tab.knots().iter().map(|k| -k.ln()).filter(|&v| v > 0.0 && v < big_u));
            cuts.sort_by(f64::total_cmp);
        }
        cuts.push(big_u);
        let f = |u: f64| self.at((-u).exp()).powf(gamma);
        let lo = GaussLegendre::new(10);
        let hi = GaussLegendre::new(20);
        let mut total = 0.0;
        for p in cuts.windows(2) {
            total += panel(&f, p[0], p[1], &lo, &hi, 40);
        }
        Ok(total)
    }

    pub fn classify_square_dini(&self) -> DiniClass {
        match &self.kind {
            MajorantKind::Constant => DiniClass::Divergent,
            MajorantKind::Power(_) => DiniClass::Convergent,
            MajorantKind::Log(c) => {
                if *c <= 0.5 {
                    DiniClass::Divergent
                } else {
                    DiniClass::Convergent
                }
            }
            MajorantKind::Tabulated(_) => DiniClass::Unknown(self.dini_evidence(40)),
        }
    }

    /// `dini_integral(w, 2, 2^{-k})` for `k = 1..=kmax`.
    pub fn dini_evidence(&self, kmax: u32) -> Vec<f64> {
        (1..=kmax)
            .map(|k| self.dini_integral(2.0, 2f64.powi(-(k as i32))).unwrap_or(f64::NAN))
            .collect()
    }

    /// Check monotonicity of `w` and of `w(t)/t^α` on a geometric grid.
    pub fn check_axioms(&self, samples: usize) -> Result<()> {
        let ts: Vec<f64> = (0..=samples).map(|i| 2f64.powf(-40.0 * i as f64 / samples as f64)).collect();
        for p in ts.windows(2) {
            let (big, small) = (p[0], p[1]);
            if self.at(small) > self.at(big) * (1.0 + 1e-12) {
                return Err(Error::Parameter(format!("majorant decreases between {small} and {big}")));
            }
            if let Some(a) = self.alpha_witness {
                if self.at(small) / small.powf(a) < self.at(big) / big.powf(a) * (1.0 - 1e-12) {
                    return Err(Error::Parameter(format!("w(t)/t^{a} fails to increase toward 0 at {small}")));
                }
            }
        }
        Ok(())
    }

    /// Parses `constant`, `power:a`, `log:c` or `table:<path>`; table paths are
    /// resolved against `base`.
    pub fn parse(desc: &str, base: Option<&Path>) -> Result<Self> {
        let d = desc.trim();
        if d == "constant" {
            return Ok(Self::constant());
        }
        let (name, arg) = d
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("unknown majorant descriptor {desc:?}")))?;
        let num = || {
            arg.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number in majorant descriptor {desc:?}")))
        };
        match name {
            "power" => Self::power(num()?),
            "log" => Self::log(num()?),
            "table" => {
                let p = Path::new(arg.trim());
                let full = match base {
                    Some(b) if p.is_relative() => b.join(p),
                    _ => p.to_path_buf(),
                };
                Self::new(MajorantKind::Tabulated(Table::from_csv(&full)?))
            }
            _ => Err(Error::Parse(format!("unknown majorant descriptor {desc:?}"))),
        }
    }
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, lo: &GaussLegendre, hi: &GaussLegendre, depth: u32) -> f64 {
    let c = lo.integrate(a, b, f);
    let fine = hi.integrate(a, b, f);
    if depth == 0 || (fine - c).abs() <= 1e-13 * fine.abs().max(1e-300) {
        return fine;
    }
    let m = 0.5 * (a + b);
    panel(f, a, m, lo, hi, depth - 1) + panel(f, m, b, lo, hi, depth - 1)
}

impl fmt::Display for Majorant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            MajorantKind::Constant => write!(f, "constant"),
            MajorantKind::Power(a) => write!(f, "power:{a}"),
            MajorantKind::Log(c) => write!(f, "log:{c}"),
            MajorantKind::Tabulated(t) => write!(f, "table:{}", t.source),
        }
    }
}
