//! One-dimensional Riemann problem in the `y` direction: wave curves, the
//! middle-state solve, the 18-row wave-pattern table and the self-similar
//! solution `xi = y / t -> state`.
//!
//! The x-velocity `u` is transported passively and jumps only at the contact.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{GasModel, PrimState};

/// Default relative tolerance used to decide whether a wave is present.
pub const DEFAULT_TOL_CLS: f64 = 1e-9;

/// Riemann initial data: `left` for `y < 0`, `right` for `y > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannData {
    #[serde(flatten)]
    pub gas: GasModel,
    pub left: PrimState,
    pub right: PrimState,
}

impl RiemannData {
    pub fn new(gas: GasModel, left: PrimState, right: PrimState) -> Result<Self> {
        let d = RiemannData { gas, left, right };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        self.left.validate()?;
        self.right.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveKind {
    None,
    Shock,
    Rarefaction,
}

impl WaveKind {
    fn index(self) -> u8 {
        match self {
            WaveKind::None => 0,
            WaveKind::Shock => 1,
            WaveKind::Rarefaction => 2,
        }
    }

    fn label(self) -> &'static str {
        match self {
            WaveKind::None => "-",
            WaveKind::Shock => "shock",
            WaveKind::Rarefaction => "rarefaction",
        }
    }
}

/// The two constant states adjacent to the contact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MiddleStates {
    pub p: f64,
    pub v: f64,
    pub rho_left: f64,
    pub rho_right: f64,
    pub u_left: f64,
    pub u_right: f64,
    /// Relative residual of the pressure equation at the returned root.
    pub residual: f64,
}

impl MiddleStates {
    pub fn left_state(&self) -> PrimState {
        PrimState { rho: self.rho_left, u: self.u_left, v: self.v, p: self.p }
    }

    pub fn right_state(&self) -> PrimState {
        PrimState { rho: self.rho_right, u: self.u_right, v: self.v, p: self.p }
    }
}

/// One of the 18 wave structures, with the middle states when any wave is present.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavePattern {
    pub left_wave: WaveKind,
    pub contact: bool,
    pub right_wave: WaveKind,
    pub middle: Option<MiddleStates>,
}

impl WavePattern {
    /// Row number 1..=18 of the standard table (rows 10..=18 carry a contact).
    pub fn row(&self) -> u8 {
        1 + 3 * self.left_wave.index() + self.right_wave.index() + if self.contact { 9 } else { 0 }
    }

    pub fn shock_count(&self) -> usize {
        [self.left_wave, self.right_wave].iter().filter(|w| **w == WaveKind::Shock).count()
    }

    pub fn rarefaction_count(&self) -> usize {
        [self.left_wave, self.right_wave].iter().filter(|w| **w == WaveKind::Rarefaction).count()
    }

    pub fn description(&self) -> String {
        if self.row() == 1 {
            return "nothing".to_string();
        }
        format!(
            "{} | {} | {}",
            self.left_wave.label(),
            if self.contact { "contact" } else { "-" },
            self.right_wave.label()
        )
    }
}

fn check_anchor(rho_k: f64, p_k: f64) -> Result<()> {
    if !(rho_k > 0.0 && p_k > 0.0 && rho_k.is_finite() && p_k.is_finite()) {
        return Err(Error::domain(format!("invalid anchor state rho={rho_k}, p={p_k}")));
    }
    Ok(())
}

/// Velocity drop across an admissible shock from anchor `(rho_k, p_k)` up to pressure `p > p_k`.
pub fn shock_branch(g: &GasModel, rho_k: f64, p_k: f64, p: f64) -> Result<f64> {
    check_anchor(rho_k, p_k)?;
    if !(p > p_k) || !p.is_finite() {
        return Err(Error::domain(format!("shock branch needs p > p_K, got p={p}, p_K={p_k}")));
    }
    Ok(shock_gap(g, rho_k, p_k, p))
}

fn shock_gap(g: &GasModel, rho_k: f64, p_k: f64, p: f64) -> f64 {
    let cv = g.c_v();
    (p - p_k) * (2.0 * cv / (rho_k * (p_k + (2.0 * cv + 1.0) * p))).sqrt()
}

/// Velocity gap across a rarefaction from anchor pressure `p_k` down to `0 < p <= p_k`.
pub fn rarefaction_branch(g: &GasModel, rho_k: f64, p_k: f64, p: f64) -> Result<f64> {
    check_anchor(rho_k, p_k)?;
    if !(p > 0.0 && p <= p_k) {
        return Err(Error::domain(format!("rarefaction branch needs 0 < p <= p_K, got p={p}, p_K={p_k}")));
    }
    Ok(rarefaction_gap(g, rho_k, p_k, p))
}

fn rarefaction_gap(g: &GasModel, rho_k: f64, p_k: f64, p: f64) -> f64 {
    let cv = g.c_v();
    vacuum_bound(g, rho_k, p_k) * (1.0 - (p / p_k).powf(1.0 / (2.0 * (cv + 1.0))))
}

/// Limit of the rarefaction gap as `p -> 0`.
pub fn vacuum_bound(g: &GasModel, rho_k: f64, p_k: f64) -> f64 {
    let cv = g.c_v();
    2.0 * (cv * (cv + 1.0)).sqrt() * (p_k / rho_k).sqrt()
}

/// Density behind a shock reaching `p > p_k` (Hugoniot locus).
pub fn hugoniot_density(g: &GasModel, rho_k: f64, p_k: f64, p: f64) -> Result<f64> {
    check_anchor(rho_k, p_k)?;
    if !(p > p_k) || !p.is_finite() {
        return Err(Error::domain(format!("Hugoniot density needs p > p_K, got p={p}, p_K={p_k}")));
    }
    Ok(hugoniot_rho(g, rho_k, p_k, p))
}

fn hugoniot_rho(g: &GasModel, rho_k: f64, p_k: f64, p: f64) -> f64 {
    let a = 2.0 * g.c_v() + 1.0;
    rho_k * (a * p + p_k) / (a * p_k + p)
}

/// Density on the isentrope through `(rho_k, p_k)` at pressure `p`.
pub fn isentrope_density(g: &GasModel, rho_k: f64, p_k: f64, p: f64) -> Result<f64> {
    check_anchor(rho_k, p_k)?;
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::domain(format!("isentrope density needs p > 0, got {p}")));
    }
    Ok(isentrope_rho(g, rho_k, p_k, p))
}

fn isentrope_rho(g: &GasModel, rho_k: f64, p_k: f64, p: f64) -> f64 {
    let cv = g.c_v();
    rho_k * (p / p_k).powf(cv / (cv + 1.0))
}

/// Admissible wave curve through the anchor: the 1-wave from `(rho_k, v_k, p_k)`
/// reaches `v_k - wave_curve(p)` and the 3-wave reaches `v_k + wave_curve(p)`.
pub fn wave_curve(g: &GasModel, rho_k: f64, p_k: f64, p: f64) -> Result<f64> {
    check_anchor(rho_k, p_k)?;
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::domain(format!("wave curve needs p > 0, got {p}")));
    }
    Ok(wave_function(g, rho_k, p_k, p))
}

/// Signed wave function: shock gap above the anchor, minus the rarefaction gap below.
fn wave_function(g: &GasModel, rho_k: f64, p_k: f64, p: f64) -> f64 {
    if p > p_k {
        shock_gap(g, rho_k, p_k, p)
    } else {
        -rarefaction_gap(g, rho_k, p_k, p)
    }
}

/// `v_- - phi_1(p) = v_+ + phi_3(p)` rewritten as `pressure_function(p) = 0`, increasing in `p`.
fn pressure_function(d: &RiemannData, p: f64) -> f64 {
    let g = &d.gas;
    wave_function(g, d.left.rho, d.left.p, p) + wave_function(g, d.right.rho, d.right.p, p) + (d.right.v - d.left.v)
}

fn pressure_residual(d: &RiemannData, p: f64) -> f64 {
    let g = &d.gas;
    let fl = wave_function(g, d.left.rho, d.left.p, p);
    let fr = wave_function(g, d.right.rho, d.right.p, p);
    let scale = fl
        .abs()
        .max(fr.abs())
        .max(d.left.v.abs())
        .max(d.right.v.abs())
        .max(g.sound_speed_unchecked(d.left.rho, d.left.p))
        .max(g.sound_speed_unchecked(d.right.rho, d.right.p));
    (fl + fr + d.right.v - d.left.v).abs() / scale
}

/// Star-state solve. Bisection in `log p` with a safeguarded secant step.
pub fn solve_middle(data: &RiemannData) -> Result<MiddleStates> {
    data.validate()?;
    let g = &data.gas;
    let (l, r) = (&data.left, &data.right);

    let bound = vacuum_bound(g, l.rho, l.p) + vacuum_bound(g, r.rho, r.p);
    let gap = r.v - l.v;
    if gap >= bound {
        return Err(Error::Vacuum { gap, bound });
    }

    let f = |p: f64| pressure_function(data, p);
    let mut lo = l.p.min(r.p) * 1e-8;
    let mut hi = l.p.max(r.p) * 1e8;
    while f(lo) > 0.0 {
        lo *= 1e-8;
        if lo < 1e-290 {
            return Err(Error::Vacuum { gap, bound });
        }
    }
    while f(hi) < 0.0 {
        hi *= 1e8;
        if !hi.is_finite() {
            return Err(Error::domain("pressure bracket overflow"));
        }
    }

    let (mut flo, mut fhi) = (f(lo), f(hi));
    let mut p = (lo * hi).sqrt();
    for _ in 0..400 {
        // secant candidate, accepted only well inside the bracket
        let secant = lo - flo * (hi - lo) / (fhi - flo);
        let width = hi - lo;
        p = if secant.is_finite() && secant > lo + 0.01 * width && secant < hi - 0.01 * width {
            secant
        } else if hi / lo > 4.0 {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        let fp = f(p);
        if fp == 0.0 {
            break;
        }
        if fp < 0.0 {
            lo = p;
            flo = fp;
        } else {
            hi = p;
            fhi = fp;
        }
        // also bisect once per iteration so the bracket always shrinks geometrically
        let mid = if hi / lo > 4.0 { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            p = mid;
            break;
        }
        if fm < 0.0 {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            p = if flo.abs() < fhi.abs() { lo } else { hi };
            break;
        }
    }

    let v = 0.5 * ((l.v - wave_function(g, l.rho, l.p, p)) + (r.v + wave_function(g, r.rho, r.p, p)));
    let rho_left = if p > l.p { hugoniot_rho(g, l.rho, l.p, p) } else { isentrope_rho(g, l.rho, l.p, p) };
    let rho_right = if p > r.p { hugoniot_rho(g, r.rho, r.p, p) } else { isentrope_rho(g, r.rho, r.p, p) };
    Ok(MiddleStates { p, v, rho_left, rho_right, u_left: l.u, u_right: r.u, residual: pressure_residual(data, p) })
}

fn wave_kind(p_mid: f64, p_k: f64, tol: f64) -> WaveKind {
    if (p_mid - p_k).abs() <= tol * p_mid.max(p_k) {
        WaveKind::None
    } else if p_mid > p_k {
        WaveKind::Shock
    } else {
        WaveKind::Rarefaction
    }
}

pub fn classify(data: &RiemannData) -> Result<WavePattern> {
    classify_with(data, DEFAULT_TOL_CLS)
}

/// Classification with an explicit relative tolerance.
pub fn classify_with(data: &RiemannData, tol_cls: f64) -> Result<WavePattern> {
    let m = solve_middle(data)?;
    let left_wave = wave_kind(m.p, data.left.p, tol_cls);
    let right_wave = wave_kind(m.p, data.right.p, tol_cls);
    let contact = (m.rho_left - m.rho_right).abs() > tol_cls * m.rho_left.max(m.rho_right)
        || (data.left.u - data.right.u).abs() > tol_cls;
    let any = left_wave != WaveKind::None || right_wave != WaveKind::None || contact;
    Ok(WavePattern { left_wave, contact, right_wave, middle: any.then_some(m) })
}

/// Fan structure of a classified solution, ready for sampling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfSimilarSolution {
    pub data: RiemannData,
    pub pattern: WavePattern,
}

/// A discontinuity of the self-similar solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub left: PrimState,
    pub right: PrimState,
    pub speed: f64,
}

impl SelfSimilarSolution {
    pub fn new(data: &RiemannData, tol_cls: f64) -> Result<Self> {
        Ok(SelfSimilarSolution { data: *data, pattern: classify_with(data, tol_cls)? })
    }

    fn middle(&self) -> MiddleStates {
        self.pattern.middle.unwrap_or(MiddleStates {
            p: self.data.left.p,
            v: self.data.left.v,
            rho_left: self.data.left.rho,
            rho_right: self.data.right.rho,
            u_left: self.data.left.u,
            u_right: self.data.right.u,
            residual: 0.0,
        })
    }

    /// Shock speed of a 1-shock (`sign = -1`) or 3-shock (`sign = +1`) from outer state `k`.
    fn shock_speed(&self, k: &PrimState, p_mid: f64, sign: f64) -> f64 {
        let g = &self.data.gas;
        let cv = g.c_v();
        let c = g.sound_speed_unchecked(k.rho, k.p);
        let ratio = (2.0 * cv + 1.0) / (2.0 * (cv + 1.0)) * p_mid / k.p + 1.0 / (2.0 * (cv + 1.0));
        k.v + sign * c * ratio.sqrt()
    }

    /// `[head, tail]` of the left wave; equal for a shock or no wave.
    pub fn left_wave_speeds(&self) -> [f64; 2] {
        let g = &self.data.gas;
        let m = self.middle();
        let l = &self.data.left;
        match self.pattern.left_wave {
            WaveKind::None => [m.v; 2],
            WaveKind::Shock => [self.shock_speed(l, m.p, -1.0); 2],
            WaveKind::Rarefaction => {
                [l.v - g.sound_speed_unchecked(l.rho, l.p), m.v - g.sound_speed_unchecked(m.rho_left, m.p)]
            }
        }
    }

    /// `[tail, head]` of the right wave; equal for a shock or no wave.
    pub fn right_wave_speeds(&self) -> [f64; 2] {
        let g = &self.data.gas;
        let m = self.middle();
        let r = &self.data.right;
        match self.pattern.right_wave {
            WaveKind::None => [m.v; 2],
            WaveKind::Shock => [self.shock_speed(r, m.p, 1.0); 2],
            WaveKind::Rarefaction => {
                [m.v + g.sound_speed_unchecked(m.rho_right, m.p), r.v + g.sound_speed_unchecked(r.rho, r.p)]
            }
        }
    }

    pub fn contact_speed(&self) -> f64 {
        self.middle().v
    }

    /// State at `xi = y / t`.
    pub fn sample(&self, xi: f64) -> PrimState {
        let g = &self.data.gas;
        let cv = g.c_v();
        let (l, r) = (&self.data.left, &self.data.right);
        if self.pattern.row() == 1 {
            return if xi < 0.0 { *l } else { *r };
        }
        let m = self.middle();
        if xi < m.v {
            let [head, tail] = self.left_wave_speeds();
            if xi < head {
                *l
            } else if xi >= tail {
                m.left_state()
            } else {
                // v + 2 c_v c is constant and v - c = xi
                let cl = g.sound_speed_unchecked(l.rho, l.p);
                let c = (l.v + 2.0 * cv * cl - xi) / (2.0 * cv + 1.0);
                let rho = l.rho * (c / cl).powf(2.0 * cv);
                let p = l.p * (rho / l.rho).powf(g.gamma());
                PrimState { rho, u: l.u, v: xi + c, p }
            }
        } else {
            let [tail, head] = self.right_wave_speeds();
            if xi >= head {
                *r
            } else if xi < tail {
                m.right_state()
            } else {
                // v - 2 c_v c is constant and v + c = xi
                let cr = g.sound_speed_unchecked(r.rho, r.p);
                let c = (xi - r.v + 2.0 * cv * cr) / (2.0 * cv + 1.0);
                let rho = r.rho * (c / cr).powf(2.0 * cv);
                let p = r.p * (rho / r.rho).powf(g.gamma());
                PrimState { rho, u: r.u, v: xi - c, p }
            }
        }
    }

    /// Shocks and the contact, left to right.
    pub fn jumps(&self) -> Vec<Jump> {
        let mut out = Vec::new();
        if self.pattern.row() == 1 {
            return out;
        }
        let m = self.middle();
        if self.pattern.left_wave == WaveKind::Shock {
            out.push(Jump { left: self.data.left, right: m.left_state(), speed: self.left_wave_speeds()[0] });
        }
        if self.pattern.contact {
            out.push(Jump { left: m.left_state(), right: m.right_state(), speed: m.v });
        }
        if self.pattern.right_wave == WaveKind::Shock {
            out.push(Jump { left: m.right_state(), right: self.data.right, speed: self.right_wave_speeds()[0] });
        }
        out
    }

    /// Leftmost and rightmost signal speeds.
    pub fn extent(&self) -> [f64; 2] {
        if self.pattern.row() == 1 {
            return [0.0, 0.0];
        }
        [self.left_wave_speeds()[0], self.right_wave_speeds()[1]]
    }
}

/// State of the self-similar solution at `xi`; `pattern` must come from `classify`.
pub fn evaluate_selfsimilar(data: &RiemannData, pattern: &WavePattern, xi: f64) -> Result<PrimState> {
    if !xi.is_finite() {
        return Err(Error::domain("xi must be finite"));
    }
    data.validate()?;
    Ok(SelfSimilarSolution { data: *data, pattern: *pattern }.sample(xi))
}
