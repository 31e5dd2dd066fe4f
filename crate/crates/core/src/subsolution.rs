//! Explicit fan subsolution for normalised data (`p- < p+`, `u+ = v+ = 0`,
//! `v- > 0`) in which the right interface carries the contact.
//!
//! Interior densities are the free parameters `rho- < rho1 < rho_K < rho2`;
//! everything else follows in closed form, pressures lie on the left isentrope,
//! and feasibility of the strict inequalities is checked, never assumed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{GasModel, PrimState};
use crate::riemann1d::RiemannData;
use crate::verifier::{lift, verify_subsolution, FanQuintuple, Region, ResidualReport, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubsolutionParams {
    pub rho1: f64,
    pub rho2: f64,
}

/// Constructed subsolution. `mu[2] = 0`; regions carry the lifted `(gamma, delta, C)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FanSubsolution {
    pub mu: [f64; 3],
    pub regions: [Region; 2],
    pub eps: [f64; 2],
    pub eps_tilde: [f64; 2],
    pub left: PrimState,
    pub right: PrimState,
    pub rho_k: f64,
}

impl FanSubsolution {
    pub fn quintuple(&self) -> FanQuintuple {
        lift(self)
    }

    pub fn params(&self) -> SubsolutionParams {
        SubsolutionParams { rho1: self.regions[0].rho, rho2: self.regions[1].rho }
    }
}

/// Window `V_est < rho- v-^2 < upper`. `v_est` is the boundary found by the
/// implemented search, not a proven threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmallnessWindow {
    pub upper: f64,
    pub v_est: f64,
}

impl SmallnessWindow {
    pub fn contains(&self, w: f64) -> bool {
        self.v_est < w && w < self.upper
    }
}

/// Ladder `rho1 = rho_K - h (rho_K - rho-)`, `rho2 = rho_K + h rho_K` for
/// `h = h0, h0/2, ...` down to `h_min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub h0: f64,
    pub h_min: f64,
    pub tol: Tolerances,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { h0: 0.5, h_min: (-40f64).exp2(), tol: Tolerances::default() }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        self.tol.validate()?;
        if !(self.h0 > 0.0 && self.h0 < 1.0 && self.h_min > 0.0 && self.h_min <= self.h0) {
            return Err(Error::domain(format!("need 0 < h_min <= h0 < 1, got h0={} h_min={}", self.h0, self.h_min)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub subsolution: FanSubsolution,
    pub h: f64,
    pub report: ResidualReport,
}

fn check_normalized(data: &RiemannData) -> Result<()> {
    data.validate()?;
    let (l, r) = (&data.left, &data.right);
    if !(l.p < r.p) {
        return Err(Error::domain(format!("normalised data needs p- < p+, got {} and {}", l.p, r.p)));
    }
    if r.u != 0.0 || r.v != 0.0 {
        return Err(Error::domain(format!("normalised data needs u+ = v+ = 0, got ({}, {})", r.u, r.v)));
    }
    Ok(())
}

/// `rho- (p+ - p-) / (p+ - p- - rho- v-^2)`.
pub fn rho_k(data: &RiemannData) -> Result<f64> {
    data.validate()?;
    let (l, r) = (&data.left, &data.right);
    let dp = r.p - l.p;
    if !(dp > 0.0) {
        return Err(Error::domain(format!("rho_K needs p- < p+, got {} and {}", l.p, r.p)));
    }
    let den = dp - l.rho * l.v * l.v;
    if !(den > 0.0) {
        return Err(Error::domain(format!("rho_K needs rho- v-^2 < p+ - p-, got {} >= {}", l.rho * l.v * l.v, dp)));
    }
    Ok(l.rho * dp / den)
}

/// Upper edge `(p+ - p-)^2 2 c_v / ((2 c_v + 1) p+ + p-)` of the window for `rho- v-^2`.
pub fn smallness_upper(g: &GasModel, p_minus: f64, p_plus: f64) -> Result<f64> {
    if !(p_minus > 0.0 && p_minus < p_plus && p_plus.is_finite()) {
        return Err(Error::domain(format!("need 0 < p- < p+, got {p_minus} and {p_plus}")));
    }
    let cv = g.c_v();
    let dp = p_plus - p_minus;
    Ok(dp * dp * 2.0 * cv / ((2.0 * cv + 1.0) * p_plus + p_minus))
}

/// Pressure on the isentrope through `(rho-, p-)`.
fn isentrope_pressure(g: &GasModel, left: &PrimState, rho: f64) -> f64 {
    left.p * (rho / left.rho).powf(g.gamma())
}

/// Smaller root `beta = beta_1` of the left and middle mass/momentum relations.
pub fn beta(data: &RiemannData, params: &SubsolutionParams) -> Result<f64> {
    let (l, r) = (&data.left, &data.right);
    let SubsolutionParams { rho1, rho2 } = *params;
    let (rm, vm) = (l.rho, l.v);
    let radicand = (rho2 - rho1) * (rho1 - rm) * ((rho2 - rm) * (r.p - l.p) - rm * rho2 * vm * vm);
    if !(radicand >= 0.0) {
        return Err(Error::domain(format!("negative radicand {radicand} in beta")));
    }
    let den = rho1 * (rho2 - rm);
    Ok(rm * (rho2 - rho1) / den * vm - radicand.sqrt() / den)
}

/// Closed-form subsolution for the given interior densities.
pub fn construct(data: &RiemannData, g: &GasModel, params: &SubsolutionParams) -> Result<FanSubsolution> {
    check_normalized(data)?;
    let (l, r) = (data.left, data.right);
    if !(l.v > 0.0) {
        return Err(Error::domain(format!("construction needs v- > 0, got {}", l.v)));
    }
    let rk = rho_k(data)?;
    let SubsolutionParams { rho1, rho2 } = *params;
    if !(l.rho < rho1 && rho1 < rk && rk < rho2 && rho2.is_finite()) {
        return Err(Error::domain(format!("need rho- < rho1 < rho_K < rho2, got {} < {rho1} < {rk} < {rho2}", l.rho)));
    }
    let b = beta(data, params)?;
    let cv = g.c_v();
    let (rm, vm, pm, pp) = (l.rho, l.v, l.p, r.p);
    let p1 = isentrope_pressure(g, &l, rho1);
    let p2 = isentrope_pressure(g, &l, rho2);

    let mu0 = (rho1 * b - rm * vm) / (rho1 - rm);
    let mu1 = -rho1 * b / (rho2 - rho1);
    let dv = vm - b;
    let eps1 = (pm - p1 + rho1 * rm / (rho1 - rm) * dv * dv) / rho1;
    let eps2 = (pp - p2) / rho2;
    let cross = 2.0 * (rho1 - rm) * (p1 * b - pm * vm) / (rm * rho1 * dv);
    let epst1 =
        vm * vm - b * b - 2.0 * cv * (p1 / rho1 - pm / rm) - cross + (p1 - pm) / rho1 - rm * dv * dv / (rho1 - rm);
    let epst2 = vm * vm - 2.0 * cv * (p2 / rho2 - pm / rm) - cross
        + (p2 - pp) / rho2
        + 2.0 * (rho2 - rho1) / (rho1 * rho2) * p1;

    let region = |rho, beta, p| Region { rho, alpha: l.u, beta, gamma: 0.0, delta: 0.0, c: 0.0, p };
    let mut sub = FanSubsolution {
        mu: [mu0, mu1, 0.0],
        regions: [region(rho1, b, p1), region(rho2, 0.0, p2)],
        eps: [eps1, eps2],
        eps_tilde: [epst1, epst2],
        left: l,
        right: r,
        rho_k: rk,
    };
    sub.regions = lift(&sub).regions;
    Ok(sub)
}

/// Relative residuals of the reduced system in the slack variables.
pub fn simplified_residuals(sub: &FanSubsolution, g: &GasModel) -> Vec<(&'static str, f64)> {
    fn rel(lhs: &[f64], rhs: &[f64]) -> f64 {
        let scale = lhs.iter().chain(rhs).fold(0.0f64, |m, t| m.max(t.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        (lhs.iter().sum::<f64>() - rhs.iter().sum::<f64>()) / scale
    }
    let cv = g.c_v();
    let [mu0, mu1, _] = sub.mu;
    let (l, r) = (&sub.left, &sub.right);
    let (rm, vm, pm, pp) = (l.rho, l.v, l.p, r.p);
    let [r1, r2] = sub.regions;
    let (rho1, b, p1, rho2, p2) = (r1.rho, r1.beta, r1.p, r2.rho, r2.p);
    let [e1, e2] = sub.eps;
    let [t1, t2] = sub.eps_tilde;
    let k1 = 0.5 * rho1 * (b * b + e1 + t1);
    let k2 = 0.5 * rho2 * (e2 + t2);
    let km = 0.5 * rm * vm * vm;
    vec![
        ("left.mass", rel(&[mu0 * rm, -mu0 * rho1], &[rm * vm, -rho1 * b])),
        ("left.momentum_y", rel(&[mu0 * rm * vm, -mu0 * rho1 * b], &[rm * vm * vm, -rho1 * (b * b + e1), pm, -p1])),
        (
            "left.energy",
            rel(
                &[mu0 * km, mu0 * cv * pm, -mu0 * k1, -mu0 * cv * p1],
                &[km * vm, (cv + 1.0) * pm * vm, -k1 * b, -(cv + 1.0) * p1 * b],
            ),
        ),
        ("middle.mass", rel(&[mu1 * rho1, -mu1 * rho2], &[rho1 * b])),
        ("middle.momentum_y", rel(&[mu1 * rho1 * b], &[rho1 * (b * b + e1), -rho2 * e2, p1, -p2])),
        ("middle.energy", rel(&[mu1 * k1, mu1 * cv * p1, -mu1 * k2, -mu1 * cv * p2], &[k1 * b, (cv + 1.0) * p1 * b])),
        ("right.momentum_y", rel(&[0.0], &[rho2 * e2, p2, -pp])),
    ]
}

/// Walks the `h` ladder and returns the first candidate whose lifted quintuple
/// passes the full verification.
pub fn find(data: &RiemannData, g: &GasModel, cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    check_normalized(data)?;
    if !(data.left.v > 0.0) {
        return Err(Error::NotFound(format!("window is empty for v- = {}", data.left.v)));
    }
    let rk = rho_k(data).map_err(|e| Error::NotFound(format!("no pivot density: {e}")))?;
    let rm = data.left.rho;
    let mut best: Option<(f64, f64, Vec<String>)> = None;
    let mut h = cfg.h0;
    while h >= cfg.h_min {
        let params = SubsolutionParams { rho1: rk - h * (rk - rm), rho2: rk + h * rk };
        if let Ok(sub) = construct(data, g, &params) {
            // non-positive C is an infeasible candidate, not bad input
            let Ok(report) = verify_subsolution(&sub.quintuple(), g, &cfg.tol) else {
                h *= 0.5;
                continue;
            };
            if report.passed {
                return Ok(SearchResult { subsolution: sub, h, report });
            }
            let m = report.min_strict_margin();
            if best.as_ref().map_or(true, |b| m > b.1) {
                best = Some((h, m, report.failures()));
            }
        }
        h *= 0.5;
    }
    Err(Error::NotFound(match best {
        Some((h, m, failed)) => format!(
            "no feasible h down to {}; best min strict margin {m:e} at h = {h:e}, failing {}",
            cfg.h_min,
            failed.join(", ")
        ),
        None => format!("no constructible candidate down to h = {}", cfg.h_min),
    }))
}

/// `t - (((2 c_v + 1) t + 1) / ((2 c_v + 1) + t))^((c_v + 1) / c_v)`.
pub fn f_lemma(g: &GasModel, t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("f needs t > 0, got {t}")));
    }
    Ok(f_raw(g.c_v(), t))
}

fn f_raw(cv: f64, t: f64) -> f64 {
    let a = 2.0 * cv + 1.0;
    t - ((a * t + 1.0) / (a + t)).powf((cv + 1.0) / cv)
}

/// Limits `(E1, E2)` of `(eps~1, eps~2)` as `rho1, rho2 -> rho_K`, for a given `w = rho- v-^2`.
pub fn e_tilde_parts(g: &GasModel, rho_minus: f64, p_minus: f64, p_plus: f64, w: f64) -> Result<(f64, f64)> {
    if !(rho_minus > 0.0 && p_minus > 0.0 && p_minus < p_plus && w > 0.0 && w < p_plus - p_minus) {
        return Err(Error::domain(format!(
            "need rho- > 0, 0 < p- < p+ and 0 < w < p+ - p-, got rho-={rho_minus} p-={p_minus} p+={p_plus} w={w}"
        )));
    }
    let cv = g.c_v();
    let vm2 = w / rho_minus;
    let rk = rho_minus * (p_plus - p_minus) / (p_plus - p_minus - w);
    let pk = p_minus * (rk / rho_minus).powf(g.gamma());
    let common = vm2 - 2.0 * cv * (pk / rk - p_minus / rho_minus) + 2.0 * (rk - rho_minus) * p_minus / (rho_minus * rk);
    let e1 = common + (pk - p_minus) / rk - rho_minus * vm2 / (rk - rho_minus);
    let e2 = common + (pk - p_plus) / rk;
    Ok((e1, e2))
}

/// Single-bracket form of `E1 = E2`, valid for any real `c_v > 0`.
pub fn e_tilde_unfactored(cv: f64, rho_minus: f64, p_minus: f64, p_plus: f64, w: f64) -> f64 {
    let dp = p_plus - p_minus;
    let ratio = dp / (dp - w);
    p_minus / rho_minus
        * ((1.0 - 2.0 * cv) * ratio.powf(1.0 / cv)
            + 2.0 * cv
            + (w * (p_minus + 2.0 * p_plus) - p_plus * dp) / (p_minus * dp))
}

/// `E` at the upper window edge in factored form, valid for any real `c_v > 0`.
pub fn e_tilde_factored(cv: f64, rho_minus: f64, p_minus: f64, p_plus: f64) -> f64 {
    let a = 2.0 * cv + 1.0;
    p_minus * (2.0 * cv - 1.0) * (a * p_minus + p_plus) / (rho_minus * (a * p_plus + p_minus))
        * f_raw(cv, p_plus / p_minus)
}

/// `E` for normalised data, with `rho- v-^2` replaced by the window's upper edge.
pub fn e_tilde(data: &RiemannData) -> Result<f64> {
    data.validate()?;
    let (l, r) = (&data.left, &data.right);
    if !(l.p < r.p) {
        return Err(Error::domain(format!("need p- < p+, got {} and {}", l.p, r.p)));
    }
    Ok(e_tilde_factored(data.gas.c_v(), l.rho, l.p, r.p))
}

fn window_datum(g: &GasModel, rho_minus: f64, p_minus: f64, p_plus: f64, w: f64) -> Result<RiemannData> {
    RiemannData::new(
        *g,
        PrimState::new(rho_minus, 0.0, (w / rho_minus).sqrt(), p_minus)?,
        PrimState::new(rho_minus, 0.0, 0.0, p_plus)?,
    )
}

/// Empirical lower end of the set of `rho- v-^2` where [`find`] succeeds.
///
/// Starts from a success point `upper (1 - 2^-k)` and bisects towards zero,
/// to absolute tolerance `1e-6 upper`. The returned `v_est` is a failing
/// point of the search.
pub fn estimate_threshold(
    g: &GasModel,
    rho_minus: f64,
    p_minus: f64,
    p_plus: f64,
    cfg: &SearchConfig,
) -> Result<SmallnessWindow> {
    let upper = smallness_upper(g, p_minus, p_plus)?;
    if !(rho_minus > 0.0 && rho_minus.is_finite()) {
        return Err(Error::domain(format!("density must be positive, got {rho_minus}")));
    }
    cfg.validate()?;
    let succeeds = |w: f64| -> Result<bool> {
        match find(&window_datum(g, rho_minus, p_minus, p_plus, w)?, g, cfg) {
            Ok(_) => Ok(true),
            Err(Error::NotFound(_)) => Ok(false),
            Err(e) => Err(e),
        }
    };
    let mut hi = None;
    for k in 1..=40 {
        let w = upper * (1.0 - (-(k as f64)).exp2());
        if w < upper && succeeds(w)? {
            hi = Some(w);
            break;
        }
    }
    let Some(mut hi) = hi else {
        return Err(Error::NotFound(format!("search fails everywhere below the upper edge {upper}")));
    };
    let mut lo = 0.0;
    while hi - lo > 1e-6 * upper {
        let mid = 0.5 * (lo + hi);
        if succeeds(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(SmallnessWindow { upper, v_est: lo })
}
