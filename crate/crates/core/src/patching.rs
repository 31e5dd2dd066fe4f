//! Symmetry transforms, proof-case dispatch and patched composites.
//!
//! Data are normalised by an optional reflection (so that `p- < p+`) followed
//! by a Galilean shift bringing the right state to rest. For a 1-shock plus
//! 3-rarefaction or a pure 1-shock, an auxiliary state is inserted so that a
//! fan subsolution on the left can be glued to an exact 3-wave on the right.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{GasModel, PrimState};
use crate::riemann1d::{
    classify_with, hugoniot_density, isentrope_density, rarefaction_branch, shock_branch, solve_middle, Jump,
    RiemannData, WaveKind, WavePattern,
};
use crate::subsolution::{estimate_threshold, find, SearchConfig, SearchResult, SmallnessWindow};
use crate::verifier::{verify_rarefaction, verify_solution, FanQuintuple, ResidualReport};

/// Objects carried along by the Galilean shift and the reflection `x -> -x`.
pub trait Transform: Sized {
    /// Adds `a` to every velocity (and its `y` component to every speed).
    fn shifted(&self, a: [f64; 2]) -> Self;
    /// Negates velocities and swaps left and right.
    fn reflected(&self) -> Self;
}

impl Transform for PrimState {
    fn shifted(&self, a: [f64; 2]) -> Self {
        PrimState { u: self.u + a[0], v: self.v + a[1], ..*self }
    }

    fn reflected(&self) -> Self {
        PrimState { u: -self.u, v: -self.v, ..*self }
    }
}

impl Transform for RiemannData {
    fn shifted(&self, a: [f64; 2]) -> Self {
        RiemannData { gas: self.gas, left: self.left.shifted(a), right: self.right.shifted(a) }
    }

    fn reflected(&self) -> Self {
        RiemannData { gas: self.gas, left: self.right.reflected(), right: self.left.reflected() }
    }
}

impl Transform for Jump {
    fn shifted(&self, a: [f64; 2]) -> Self {
        Jump { left: self.left.shifted(a), right: self.right.shifted(a), speed: self.speed + a[1] }
    }

    fn reflected(&self) -> Self {
        Jump { left: self.right.reflected(), right: self.left.reflected(), speed: -self.speed }
    }
}

/// `U + C/2 I` is carried like `v (x) v` and `C` like `|v|^2`. Mass, momentum,
/// entropy and the subsolution inequalities are invariant under this map; the
/// relaxed energy relation is not (its flux is linear in the mean velocity), so
/// a shifted quintuple is a description of the fan, certified in its own frame.
impl Transform for FanQuintuple {
    fn shifted(&self, a: [f64; 2]) -> Self {
        let mut q = *self;
        for r in q.regions.iter_mut() {
            let (al, be) = (r.alpha, r.beta);
            let m11 = r.gamma + 0.5 * r.c + 2.0 * a[0] * al + a[0] * a[0];
            let m22 = -r.gamma + 0.5 * r.c + 2.0 * a[1] * be + a[1] * a[1];
            let m12 = r.delta + a[0] * be + a[1] * al + a[0] * a[1];
            r.c += 2.0 * (a[0] * al + a[1] * be) + a[0] * a[0] + a[1] * a[1];
            r.gamma = 0.5 * (m11 - m22);
            r.delta = m12;
            r.alpha += a[0];
            r.beta += a[1];
        }
        q.mu = self.mu.map(|m| m + a[1]);
        q.left = self.left.shifted(a);
        q.right = self.right.shifted(a);
        q
    }

    fn reflected(&self) -> Self {
        let flip = |r: &crate::verifier::Region| crate::verifier::Region { alpha: -r.alpha, beta: -r.beta, ..*r };
        FanQuintuple {
            mu: [-self.mu[2], -self.mu[1], -self.mu[0]],
            regions: [flip(&self.regions[1]), flip(&self.regions[0])],
            left: self.right.reflected(),
            right: self.left.reflected(),
        }
    }
}

/// Shifts every velocity by `a`.
pub fn galilean_shift<T: Transform>(x: &T, a: [f64; 2]) -> T {
    x.shifted(a)
}

pub fn reflect<T: Transform>(x: &T) -> T {
    x.reflected()
}

/// Map `working = shift(-shift) . reflect^reflected (original)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub shift: [f64; 2],
    pub reflected: bool,
}

impl Frame {
    pub fn identity() -> Self {
        Frame { shift: [0.0, 0.0], reflected: false }
    }

    pub fn forward<T: Transform>(&self, x: &T) -> T {
        let y = if self.reflected { x.reflected() } else { x.shifted([0.0, 0.0]) };
        y.shifted([-self.shift[0], -self.shift[1]])
    }

    pub fn backward<T: Transform>(&self, x: &T) -> T {
        let y = x.shifted(self.shift);
        if self.reflected {
            y.reflected()
        } else {
            y
        }
    }

    /// Follows `self` by an extra shift of `-b`.
    pub fn then_shift(&self, b: [f64; 2]) -> Frame {
        Frame { shift: [self.shift[0] + b[0], self.shift[1] + b[1]], reflected: self.reflected }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub frame: Frame,
    pub original: RiemannData,
    pub normalized: RiemannData,
    /// `p- = p+`: no fan subsolution of this kind applies.
    pub equal_pressures: bool,
}

/// Reflects if `p- > p+`, then shifts the right state to rest.
pub fn normalize(data: &RiemannData) -> Result<Normalization> {
    data.validate()?;
    let reflected = data.left.p > data.right.p;
    let d = if reflected { data.reflected() } else { *data };
    let frame = Frame { shift: [d.right.u, d.right.v], reflected };
    let mut normalized = d.shifted([-d.right.u, -d.right.v]);
    // exact rest state, independent of rounding in the subtraction
    normalized.right.u = 0.0;
    normalized.right.v = 0.0;
    Ok(Normalization { frame, original: *data, normalized, equal_pressures: d.left.p == d.right.p })
}

pub fn denormalize<T: Transform>(n: &Normalization, x: &T) -> T {
    n.frame.backward(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProofCase {
    /// Only rarefactions (or nothing): the self-similar solution is the unique admissible one.
    Case1Unique,
    /// One shock and one rarefaction, inside the empirical window: fan alone.
    Case2,
    /// One shock and one rarefaction outside the window: fan plus trailing 3-rarefaction.
    Case3,
    /// Exactly one shock and no rarefaction: fan plus trailing 3-shock.
    Case4,
    /// Two shocks; composites are verified, not constructed.
    TwoShocks,
    /// A contact with no shock.
    ContactFamilyOpen,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub case: ProofCase,
    /// Row of the normalised pattern.
    pub row: u8,
    pub pattern: WavePattern,
    pub normalization: Normalization,
    /// `rho- (v- - v+)^2` in the normalised frame.
    pub w: f64,
    /// Empirical window, for one-shock-one-rarefaction data.
    pub window: Option<SmallnessWindow>,
}

pub fn case_dispatch(data: &RiemannData, tol_cls: f64, cfg: &SearchConfig) -> Result<CaseReport> {
    let normalization = normalize(data)?;
    let d = normalization.normalized;
    let pattern = classify_with(&d, tol_cls)?;
    let w = d.left.rho * d.left.v * d.left.v;
    let mut window = None;
    let case = match (pattern.left_wave, pattern.right_wave) {
        (WaveKind::Shock, WaveKind::Shock) => ProofCase::TwoShocks,
        (WaveKind::Shock, WaveKind::None) => ProofCase::Case4,
        (WaveKind::Shock, WaveKind::Rarefaction) => {
            let win = estimate_threshold(&d.gas, d.left.rho, d.left.p, d.right.p, cfg)?;
            window = Some(win);
            let inside = d.left.v > 0.0 && win.contains(w) && find(&d, &d.gas, cfg).is_ok();
            if inside {
                ProofCase::Case2
            } else {
                ProofCase::Case3
            }
        }
        (WaveKind::None | WaveKind::Rarefaction, WaveKind::Shock) => {
            // unreachable after normalisation, kept for completeness
            return Err(Error::domain(format!("unexpected pattern {} after normalisation", pattern.row())));
        }
        _ if pattern.contact => ProofCase::ContactFamilyOpen,
        _ => ProofCase::Case1Unique,
    };
    Ok(CaseReport { case, row: pattern.row(), pattern, normalization, w, window })
}

fn require_pattern(d: &RiemannData, right: WaveKind) -> Result<f64> {
    let pattern = classify_with(d, crate::riemann1d::DEFAULT_TOL_CLS)?;
    if pattern.left_wave != WaveKind::Shock || pattern.right_wave != right {
        return Err(Error::domain(format!(
            "auxiliary state needs a 1-shock with right wave {right:?}, got row {}",
            pattern.row()
        )));
    }
    Ok(solve_middle(d)?.p)
}

/// State `(rho^d, u+, v^d, p_M + delta)` joined to the right state by a 3-rarefaction.
pub fn delta_state_case3(data: &RiemannData, delta: f64) -> Result<PrimState> {
    data.validate()?;
    let p_mid = require_pattern(data, WaveKind::Rarefaction)?;
    let r = &data.right;
    let p = p_mid + delta;
    if !(delta > 0.0 && p < r.p) {
        return Err(Error::domain(format!("need 0 < delta < p+ - p_M = {}, got {delta}", r.p - p_mid)));
    }
    let g = &data.gas;
    let v = r.v - rarefaction_branch(g, r.rho, r.p, p)?;
    PrimState::new(isentrope_density(g, r.rho, r.p, p)?, r.u, v, p)
}

/// State `(rho^d, u+, v^d, p+ + delta)` joined to the right state by an admissible 3-shock.
pub fn delta_state_case4(data: &RiemannData, delta: f64) -> Result<PrimState> {
    data.validate()?;
    require_pattern(data, WaveKind::None)?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::domain(format!("need delta > 0, got {delta}")));
    }
    let r = &data.right;
    let g = &data.gas;
    let p = r.p + delta;
    let v = r.v + shock_branch(g, r.rho, r.p, p)?;
    PrimState::new(hugoniot_density(g, r.rho, r.p, p)?, r.u, v, p)
}

/// 3-wave (or 1-wave after reflection) glued to the fan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrailingWave {
    pub family: u8,
    pub kind: WaveKind,
    pub left: PrimState,
    pub right: PrimState,
    /// Edges of the wave; equal for a shock.
    pub speeds: [f64; 2],
}

impl Transform for TrailingWave {
    fn shifted(&self, a: [f64; 2]) -> Self {
        TrailingWave {
            left: self.left.shifted(a),
            right: self.right.shifted(a),
            speeds: self.speeds.map(|s| s + a[1]),
            ..*self
        }
    }

    fn reflected(&self) -> Self {
        TrailingWave {
            family: 4 - self.family,
            kind: self.kind,
            left: self.right.reflected(),
            right: self.left.reflected(),
            speeds: [-self.speeds[1], -self.speeds[0]],
        }
    }
}

impl TrailingWave {
    pub fn verify(&self, g: &GasModel, tol: &crate::verifier::Tolerances) -> Result<ResidualReport> {
        match self.kind {
            WaveKind::Shock => verify_solution(&[self.left, self.right], &[self.speeds[0]], g, tol),
            _ => verify_rarefaction(&self.left, &self.right, self.family, g, tol),
        }
    }
}

/// Composite in the original frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OriginalFrame {
    pub fan: FanQuintuple,
    pub trailing_wave: Option<TrailingWave>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchedSolution {
    pub case: ProofCase,
    pub delta: f64,
    /// Auxiliary state in the normalised frame.
    pub aux_state: Option<PrimState>,
    /// Fan and its verification in the working frame (aux state at rest).
    pub fan: SearchResult,
    pub trailing_wave: Option<TrailingWave>,
    pub trailing_report: Option<ResidualReport>,
    /// `lambda_3(aux) - mu_2` or `sigma - mu_2`.
    pub compatibility: Option<f64>,
    /// Original frame to working frame.
    pub frame: Frame,
    pub normalization: Normalization,
    pub original: OriginalFrame,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatchConfig {
    /// Starting `delta`; defaults to `0.1 (p+ - p_M)` or `0.1 p+`.
    pub delta0: Option<f64>,
    pub max_halvings: u32,
    pub tol_cls: f64,
    pub search: SearchConfig,
}

impl Default for PatchConfig {
    fn default() -> Self {
        PatchConfig {
            delta0: None,
            max_halvings: 40,
            tol_cls: crate::riemann1d::DEFAULT_TOL_CLS,
            search: SearchConfig::default(),
        }
    }
}

/// Builds the composite for cases 2 to 4 and describes it in both frames.
pub fn assemble(data: &RiemannData, cfg: &PatchConfig) -> Result<PatchedSolution> {
    let report = case_dispatch(data, cfg.tol_cls, &cfg.search)?;
    let norm = report.normalization;
    let d = norm.normalized;
    let g = d.gas;
    let tol = cfg.search.tol;
    match report.case {
        ProofCase::Case2 => {
            let fan = find(&d, &g, &cfg.search)?;
            let original =
                OriginalFrame { fan: norm.frame.backward(&fan.subsolution.quintuple()), trailing_wave: None };
            Ok(PatchedSolution {
                case: ProofCase::Case2,
                delta: 0.0,
                aux_state: None,
                fan,
                trailing_wave: None,
                trailing_report: None,
                compatibility: None,
                frame: norm.frame,
                normalization: norm,
                original,
            })
        }
        ProofCase::Case3 | ProofCase::Case4 => {
            let case3 = report.case == ProofCase::Case3;
            let p_mid = solve_middle(&d)?.p;
            let mut delta = cfg.delta0.unwrap_or(if case3 { 0.1 * (d.right.p - p_mid) } else { 0.1 * d.right.p });
            if !(delta > 0.0 && delta.is_finite()) {
                return Err(Error::domain(format!("delta0 must be positive, got {delta}")));
            }
            let mut last = String::from("no admissible delta on the ladder");
            for _ in 0..=cfg.max_halvings {
                let aux = if case3 { delta_state_case3(&d, delta) } else { delta_state_case4(&d, delta) };
                let aux = match aux {
                    Ok(a) => a,
                    Err(e) => {
                        last = format!("delta = {delta:e}: {e}");
                        delta *= 0.5;
                        continue;
                    }
                };
                let b = [aux.u, aux.v];
                let working = RiemannData {
                    gas: g,
                    left: d.left.shifted([-b[0], -b[1]]),
                    right: PrimState { u: 0.0, v: 0.0, ..aux },
                };
                match find(&working, &g, &cfg.search) {
                    Ok(fan) => {
                        let rest = working.right;
                        let right = d.right.shifted([-b[0], -b[1]]);
                        let (kind, speeds) = if case3 {
                            let c0 = g.sound_speed(&rest)?;
                            let c1 = g.sound_speed(&right)?;
                            (WaveKind::Rarefaction, [rest.v + c0, right.v + c1])
                        } else {
                            let sigma = -right.rho * right.v / (rest.rho - right.rho);
                            (WaveKind::Shock, [sigma, sigma])
                        };
                        let wave = TrailingWave { family: 3, kind, left: rest, right, speeds };
                        let trailing = wave.verify(&g, &tol)?;
                        let compat = speeds[0] - fan.subsolution.mu[2];
                        if trailing.passed && compat > 0.0 {
                            let frame = norm.frame.then_shift(b);
                            let original = OriginalFrame {
                                fan: frame.backward(&fan.subsolution.quintuple()),
                                trailing_wave: Some(frame.backward(&wave)),
                            };
                            return Ok(PatchedSolution {
                                case: report.case,
                                delta,
                                aux_state: Some(aux),
                                fan,
                                trailing_wave: Some(wave),
                                trailing_report: Some(trailing),
                                compatibility: Some(compat),
                                frame,
                                normalization: norm,
                                original,
                            });
                        }
                        last = format!(
                            "delta = {delta:e}: trailing wave check {:?}, compatibility {compat:e}",
                            trailing.failures()
                        );
                    }
                    Err(Error::NotFound(msg)) => last = format!("delta = {delta:e}: {msg}"),
                    Err(e) => return Err(e),
                }
                delta *= 0.5;
            }
            Err(Error::NotFound(format!("no feasible delta after {} halvings; last attempt {last}", cfg.max_halvings)))
        }
        other => Err(Error::domain(format!("{other:?} (row {}) has no patched construction", report.row))),
    }
}
