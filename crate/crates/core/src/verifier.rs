//! Residual and margin engine for fan subsolutions and piecewise-constant solutions.
//!
//! A fan subsolution is checked against the full algebraic system on the
//! partition `y < mu0 t < ... < mu2 t < y`: four jump relations on each of the
//! three interfaces (mass, x-momentum, y-momentum, energy), the speed order,
//! two positivity conditions per interior region and one entropy inequality per
//! interface. Equation residuals are normalised by the largest absolute term of
//! their equation.
//!
//! Strict inequalities (order, subsolution conditions) pass only with a
//! positive raw margin. Entropy inequalities are non-strict; their margin is
//! normalised like an equation residual and passes when `>= -tol_eq`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{GasModel, PrimState};
use crate::riemann1d::{Jump, DEFAULT_TOL_CLS};
use crate::subsolution::FanSubsolution;

pub const DEFAULT_TOL_EQ: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative tolerance on equation residuals.
    pub eq: f64,
    /// Relative tolerance deciding whether a wave is present.
    pub cls: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { eq: DEFAULT_TOL_EQ, cls: DEFAULT_TOL_CLS }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        if !(self.eq > 0.0 && self.cls > 0.0 && self.eq.is_finite() && self.cls.is_finite()) {
            return Err(Error::domain("tolerances must be positive and finite"));
        }
        Ok(())
    }
}

/// Constants of one interior region: density, velocity `(alpha, beta)`, the
/// traceless symmetric matrix `[[gamma, delta], [delta, -gamma]]`, `C` and pressure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub rho: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub c: f64,
    pub p: f64,
}

/// Full candidate: three speeds, two interior regions and the outer data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FanQuintuple {
    pub mu: [f64; 3],
    pub regions: [Region; 2],
    pub left: PrimState,
    pub right: PrimState,
}

impl FanQuintuple {
    pub fn validate(&self) -> Result<()> {
        self.left.validate()?;
        self.right.validate()?;
        if !self.mu.iter().all(|m| m.is_finite()) {
            return Err(Error::domain("non-finite fan speed"));
        }
        for (i, r) in self.regions.iter().enumerate() {
            let all = [r.rho, r.alpha, r.beta, r.gamma, r.delta, r.c, r.p];
            if !all.iter().all(|x| x.is_finite()) {
                return Err(Error::domain(format!("region {} has non-finite entries", i + 1)));
            }
            if !(r.rho > 0.0 && r.p > 0.0 && r.c > 0.0) {
                return Err(Error::domain(format!(
                    "region {}: rho, p and C must be positive (rho={}, p={}, C={})",
                    i + 1,
                    r.rho,
                    r.p,
                    r.c
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquationCheck {
    pub id: String,
    /// Signed `(lhs - rhs) / max |term|`.
    pub residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityKind {
    /// `margin > 0` required.
    Strict,
    /// `margin >= -tol_eq` required; margin is normalised.
    NonStrict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub id: String,
    pub margin: f64,
    pub kind: InequalityKind,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub tol_eq: f64,
    pub equations: Vec<EquationCheck>,
    pub inequalities: Vec<InequalityCheck>,
    pub passed: bool,
}

impl ResidualReport {
    fn new(tol_eq: f64) -> Self {
        ResidualReport { tol_eq, equations: Vec::new(), inequalities: Vec::new(), passed: true }
    }

    fn add_equation(&mut self, id: impl Into<String>, lhs: &[f64], rhs: &[f64]) {
        let scale = lhs.iter().chain(rhs).fold(0.0f64, |m, t| m.max(t.abs()));
        let diff = lhs.iter().sum::<f64>() - rhs.iter().sum::<f64>();
        let residual = if scale > 0.0 { diff / scale } else { 0.0 };
        let passed = residual.abs() <= self.tol_eq;
        self.passed &= passed;
        self.equations.push(EquationCheck { id: id.into(), residual, passed });
    }

    fn strict(&mut self, id: impl Into<String>, margin: f64) {
        let passed = margin > 0.0;
        self.passed &= passed;
        self.inequalities.push(InequalityCheck { id: id.into(), margin, kind: InequalityKind::Strict, passed });
    }

    /// Records `lhs <= rhs` with the margin normalised by the largest of `scale_terms`.
    fn non_strict(&mut self, id: impl Into<String>, lhs: &[f64], rhs: &[f64], scale_terms: &[f64]) {
        let scale = scale_terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
        let diff = rhs.iter().sum::<f64>() - lhs.iter().sum::<f64>();
        let margin = if scale > 0.0 { diff / scale } else { 0.0 };
        let passed = margin >= -self.tol_eq;
        self.passed &= passed;
        self.inequalities.push(InequalityCheck { id: id.into(), margin, kind: InequalityKind::NonStrict, passed });
    }

    /// Ids of every violated condition.
    pub fn failures(&self) -> Vec<String> {
        let eqs = self.equations.iter().filter(|e| !e.passed).map(|e| e.id.clone());
        let ineqs = self.inequalities.iter().filter(|i| !i.passed).map(|i| i.id.clone());
        eqs.chain(ineqs).collect()
    }

    pub fn max_abs_residual(&self) -> f64 {
        self.equations.iter().fold(0.0, |m, e| m.max(e.residual.abs()))
    }

    /// Smallest margin among strict inequalities (`+inf` when there are none).
    pub fn min_strict_margin(&self) -> f64 {
        self.inequalities
            .iter()
            .filter(|i| i.kind == InequalityKind::Strict)
            .fold(f64::INFINITY, |m, i| m.min(i.margin))
    }

    pub fn min_non_strict_margin(&self) -> f64 {
        self.inequalities
            .iter()
            .filter(|i| i.kind == InequalityKind::NonStrict)
            .fold(f64::INFINITY, |m, i| m.min(i.margin))
    }

    pub fn equation(&self, id: &str) -> Option<&EquationCheck> {
        self.equations.iter().find(|e| e.id == id)
    }

    pub fn inequality(&self, id: &str) -> Option<&InequalityCheck> {
        self.inequalities.iter().find(|e| e.id == id)
    }
}

/// Conserved densities and `y`-fluxes of one constant cell of the fan.
struct Cell {
    rho: f64,
    alpha: f64,
    beta: f64,
    delta: f64,
    /// `C/2 - gamma`, i.e. the `yy` entry of the momentum-flux proxy.
    yy: f64,
    c: f64,
    p: f64,
}

impl Cell {
    fn outer(s: &PrimState) -> Self {
        Cell { rho: s.rho, alpha: s.u, beta: s.v, delta: s.u * s.v, yy: s.v * s.v, c: s.u * s.u + s.v * s.v, p: s.p }
    }

    fn interior(r: &Region) -> Self {
        Cell { rho: r.rho, alpha: r.alpha, beta: r.beta, delta: r.delta, yy: 0.5 * r.c - r.gamma, c: r.c, p: r.p }
    }
}

/// Jump relations `speed (X_L - X_R) = F_L - F_R` and `speed [rho s] <= [rho s beta]`.
fn interface(report: &mut ResidualReport, g: &GasModel, name: &str, speed: f64, l: &Cell, r: &Cell) {
    let cv = g.c_v();
    report.add_equation(format!("{name}.mass"), &[speed * l.rho, -speed * r.rho], &[l.rho * l.beta, -r.rho * r.beta]);
    report.add_equation(
        format!("{name}.momentum_x"),
        &[speed * l.rho * l.alpha, -speed * r.rho * r.alpha],
        &[l.rho * l.delta, -r.rho * r.delta],
    );
    report.add_equation(
        format!("{name}.momentum_y"),
        &[speed * l.rho * l.beta, -speed * r.rho * r.beta],
        &[l.rho * l.yy, -r.rho * r.yy, l.p, -r.p],
    );
    report.add_equation(
        format!("{name}.energy"),
        &[speed * 0.5 * l.rho * l.c, -speed * 0.5 * r.rho * r.c, speed * cv * l.p, -speed * cv * r.p],
        &[
            0.5 * l.rho * l.c * l.beta,
            -0.5 * r.rho * r.c * r.beta,
            (cv + 1.0) * l.p * l.beta,
            -(cv + 1.0) * r.p * r.beta,
        ],
    );
    let (el, er) = (l.rho * g.entropy_unchecked(l.rho, l.p), r.rho * g.entropy_unchecked(r.rho, r.p));
    // s itself may vanish by cancellation, so scale by the size of its log terms
    let size = |c: &Cell| c.rho * (cv * c.p.ln().abs() + (cv + 1.0) * c.rho.ln().abs());
    let (ml, mr) = (size(l), size(r));
    report.non_strict(
        format!("{name}.entropy"),
        &[speed * er, -speed * el],
        &[er * r.beta, -el * l.beta],
        &[speed * ml, speed * mr, ml * l.beta, mr * r.beta],
    );
}

fn interface_jump(report: &mut ResidualReport, g: &GasModel, name: &str, j: &Jump) {
    interface(report, g, name, j.speed, &Cell::outer(&j.left), &Cell::outer(&j.right));
}

/// `C - alpha^2 - beta^2` and the determinant of `C/2 I - v (x) v + U`.
pub fn subsolution_margins(r: &Region) -> [f64; 2] {
    let trace = r.c - (r.alpha * r.alpha + r.beta * r.beta);
    let det = (0.5 * r.c - r.alpha * r.alpha + r.gamma) * (0.5 * r.c - r.beta * r.beta - r.gamma)
        - (r.delta - r.alpha * r.beta).powi(2);
    [trace, det]
}

/// Checks every condition of the algebraic characterisation of an admissible fan subsolution.
pub fn verify_subsolution(q: &FanQuintuple, g: &GasModel, tol: &Tolerances) -> Result<ResidualReport> {
    tol.validate()?;
    q.validate()?;
    let mut report = ResidualReport::new(tol.eq);
    let [mu0, mu1, mu2] = q.mu;
    report.strict("order.mu1_minus_mu0", mu1 - mu0);
    report.strict("order.mu2_minus_mu1", mu2 - mu1);

    let left = Cell::outer(&q.left);
    let c1 = Cell::interior(&q.regions[0]);
    let c2 = Cell::interior(&q.regions[1]);
    let right = Cell::outer(&q.right);
    interface(&mut report, g, "left", mu0, &left, &c1);
    interface(&mut report, g, "middle", mu1, &c1, &c2);
    interface(&mut report, g, "right", mu2, &c2, &right);

    for (i, r) in q.regions.iter().enumerate() {
        let [trace, det] = subsolution_margins(r);
        report.strict(format!("subsolution.{}.trace", i + 1), trace);
        report.strict(format!("subsolution.{}.determinant", i + 1), det);
    }

    // keep entropy checks grouped after the equations in the output order
    let (entropy, rest): (Vec<_>, Vec<_>) = report.inequalities.drain(..).partition(|c| c.id.ends_with(".entropy"));
    report.inequalities = rest.into_iter().chain(entropy).collect();
    Ok(report)
}

/// Checks jump relations and entropy inequalities of a piecewise-constant
/// solution `states[0] | speeds[0] | states[1] | ... | states[n]`.
pub fn verify_solution(states: &[PrimState], speeds: &[f64], g: &GasModel, tol: &Tolerances) -> Result<ResidualReport> {
    tol.validate()?;
    if states.len() != speeds.len() + 1 {
        return Err(Error::domain(format!(
            "need one more state than speeds, got {} states and {} speeds",
            states.len(),
            speeds.len()
        )));
    }
    for s in states {
        s.validate()?;
    }
    if let Some(w) = speeds.windows(2).find(|w| !(w[0] <= w[1])) {
        return Err(Error::domain(format!("interface speeds must be non-decreasing, got {} then {}", w[0], w[1])));
    }
    let mut report = ResidualReport::new(tol.eq);
    for (k, speed) in speeds.iter().enumerate() {
        let jump = Jump { left: states[k], right: states[k + 1], speed: *speed };
        interface_jump(&mut report, g, &format!("jump{k}"), &jump);
    }
    Ok(report)
}

/// Same checks as [`verify_solution`] over an explicit list of discontinuities.
pub fn verify_jumps(jumps: &[Jump], g: &GasModel, tol: &Tolerances) -> Result<ResidualReport> {
    tol.validate()?;
    let mut report = ResidualReport::new(tol.eq);
    for (k, j) in jumps.iter().enumerate() {
        j.left.validate()?;
        j.right.validate()?;
        interface_jump(&mut report, g, &format!("jump{k}"), j);
    }
    Ok(report)
}

/// Relations of a centred rarefaction of family 1 or 3 between two constant
/// states: equal entropy, constant Riemann invariant `v -/+ 2 c_v c`,
/// continuous `u`, and characteristic speeds that spread apart.
pub fn verify_rarefaction(
    left: &PrimState,
    right: &PrimState,
    family: u8,
    g: &GasModel,
    tol: &Tolerances,
) -> Result<ResidualReport> {
    tol.validate()?;
    left.validate()?;
    right.validate()?;
    let sign = match family {
        1 => 1.0,
        3 => -1.0,
        _ => return Err(Error::domain(format!("rarefactions exist for families 1 and 3, got {family}"))),
    };
    let mut report = ResidualReport::new(tol.eq);
    let cv = g.c_v();
    let (cl, cr) = (g.sound_speed(left)?, g.sound_speed(right)?);
    // unit term keeps the scale away from zero near rho = p = 1
    report.add_equation(
        "rarefaction.entropy",
        &[cv * left.p.ln(), -(cv + 1.0) * left.rho.ln(), 1.0],
        &[cv * right.p.ln(), -(cv + 1.0) * right.rho.ln(), 1.0],
    );
    report.add_equation(
        "rarefaction.riemann_invariant",
        &[left.v, sign * 2.0 * cv * cl],
        &[right.v, sign * 2.0 * cv * cr],
    );
    report.add_equation("rarefaction.u", &[left.u], &[right.u]);
    let idx = if family == 1 { 0 } else { 2 };
    let spread = g.eigenvalues(right)?[idx] - g.eigenvalues(left)?[idx];
    report.strict("rarefaction.fan_opens", spread);
    Ok(report)
}

/// Builds the full quintuple from a subsolution's slacks:
/// `C = alpha^2 + beta^2 + eps + eps~`, `gamma = C/2 - eps - beta^2`,
/// `delta_1 = alpha_1 beta_1`, `delta_2 = 0`, `mu_2 = 0`.
pub fn lift(sub: &FanSubsolution) -> FanQuintuple {
    let mut regions = sub.regions;
    for (i, r) in regions.iter_mut().enumerate() {
        let (eps, epst) = (sub.eps[i], sub.eps_tilde[i]);
        r.c = r.alpha * r.alpha + r.beta * r.beta + eps + epst;
        r.gamma = 0.5 * r.c - eps - r.beta * r.beta;
        r.delta = if i == 0 { r.alpha * r.beta } else { 0.0 };
    }
    FanQuintuple { mu: [sub.mu[0], sub.mu[1], 0.0], regions, left: sub.left, right: sub.right }
}

/// Inverse of the slack parameterisation: `[(eps_i, eps~_i)]` of each region.
pub fn slacks(q: &FanQuintuple) -> [(f64, f64); 2] {
    let f = |r: &Region| {
        let eps = 0.5 * r.c - r.gamma - r.beta * r.beta;
        (eps, r.c - r.alpha * r.alpha - r.beta * r.beta - eps)
    };
    [f(&q.regions[0]), f(&q.regions[1])]
}
