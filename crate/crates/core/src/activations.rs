//! Activation functions and their numeric classification against the
//! hypothesis sets of the approximation theorems.
//!
//! Each univariate activation can be probed for boundedness, monotonicity,
//! limits at infinity, `L^p` membership, and integrability of the radial
//! moment `t^{d-1} g(t)` on `[0, inf)`. The verdicts are advisory — they are
//! quadrature and grid estimates, not proofs — and declared analytic flags of
//! built-ins take precedence over probes.

use crate::quadrature::panel_integrate;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ActivationError {
    #[error("unknown activation '{0}'")]
    UnknownActivation(String),
    #[error("shift parameter alpha must be positive, got {0}")]
    InvalidAlpha(f64),
    #[error("dimension must be >= 1, got {0}")]
    InvalidDimension(usize),
    #[error("exponent p must satisfy 1 <= p < infinity, got {0}")]
    InvalidExponent(f64),
}

/// Declared limit behavior at one end of the real line.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum LimitFlag {
    #[default]
    Undeclared,
    NoLimit,
    Limit(f64),
}

/// Analytic properties declared for an activation. `None` fields are
/// undeclared and left to the numeric probes.
#[derive(Debug, Clone, Copy, Default)]
pub struct AnalyticFlags {
    pub continuous: Option<bool>,
    pub bounded: Option<bool>,
    pub monotone: Option<bool>,
    pub nonconstant: Option<bool>,
    pub limit_at_pos_inf: LimitFlag,
    pub limit_at_neg_inf: LimitFlag,
}

/// A univariate activation `g`, total and finite on finite inputs. Defined on
/// all of `R` (not just `[0, inf)`) because shifted arguments go negative.
#[derive(Clone)]
pub struct Activation {
    id: String,
    flags: AnalyticFlags,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Activation").field("id", &self.id).finish()
    }
}

impl Activation {
    pub fn new<F>(id: impl Into<String>, eval: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Activation {
            id: id.into(),
            flags: AnalyticFlags::default(),
            eval: Arc::new(eval),
        }
    }

    pub fn with_flags<F>(id: impl Into<String>, flags: AnalyticFlags, eval: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Activation {
            id: id.into(),
            flags,
            eval: Arc::new(eval),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn flags(&self) -> &AnalyticFlags {
        &self.flags
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 6] = [
    "gaussian",
    "logistic",
    "sech",
    "triangular-bump",
    "inverse-quadratic",
    "constant-one",
];

/// Returns a built-in activation with its declared analytic flags.
pub fn builtin(name: &str) -> Result<Activation, ActivationError> {
    let flags = |monotone, limits: (f64, f64)| AnalyticFlags {
        continuous: Some(true),
        bounded: Some(true),
        monotone: Some(monotone),
        nonconstant: Some(true),
        limit_at_pos_inf: LimitFlag::Limit(limits.0),
        limit_at_neg_inf: LimitFlag::Limit(limits.1),
    };
    Ok(match name {
        "gaussian" => Activation::with_flags(name, flags(false, (0.0, 0.0)), |t| (-t * t).exp()),
        "logistic" => Activation::with_flags(name, flags(true, (1.0, 0.0)), |t| {
            1.0 / (1.0 + (-t).exp())
        }),
        "sech" => Activation::with_flags(name, flags(false, (0.0, 0.0)), |t| {
            2.0 / (t.exp() + (-t).exp())
        }),
        "triangular-bump" => Activation::with_flags(name, flags(false, (0.0, 0.0)), |t| {
            (1.0 - t.abs()).max(0.0)
        }),
        "inverse-quadratic" => Activation::with_flags(name, flags(false, (0.0, 0.0)), |t| {
            1.0 / (1.0 + t * t)
        }),
        "constant-one" => {
            let mut f = flags(true, (1.0, 1.0));
            f.nonconstant = Some(false);
            Activation::with_flags(name, f, |_| 1.0)
        }
        _ => return Err(ActivationError::UnknownActivation(name.to_string())),
    })
}

/// The difference of shifted copies `h(t) = g(t + alpha) - g(t - alpha)`.
/// For continuous, monotone, bounded `g` this lands in `L^1(R)`, which is
/// what makes bounded sigmoidal activations usable for density arguments.
pub fn funahashi_transform(g: &Activation, alpha: f64) -> Result<Activation, ActivationError> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(ActivationError::InvalidAlpha(alpha));
    }
    let id = format!("funahashi({},{})", g.id(), alpha);
    let mut flags = AnalyticFlags {
        continuous: g.flags.continuous,
        bounded: g.flags.bounded,
        ..AnalyticFlags::default()
    };
    // If g settles at both ends, h tends to 0 at both ends.
    if let (LimitFlag::Limit(_), LimitFlag::Limit(_)) =
        (g.flags.limit_at_pos_inf, g.flags.limit_at_neg_inf)
    {
        flags.limit_at_pos_inf = LimitFlag::Limit(0.0);
        flags.limit_at_neg_inf = LimitFlag::Limit(0.0);
    }
    let inner = g.clone();
    Ok(Activation::with_flags(id, flags, move |t| {
        inner.eval(t + alpha) - inner.eval(t - alpha)
    }))
}

/// Quadrature and grid settings for [`classify`].
#[derive(Debug, Clone, Copy)]
pub struct ProbeSettings {
    /// Absolute adaptive-Simpson tolerance per unit panel.
    pub panel_tol: f64,
    /// Initial half-width of the integration domain.
    pub initial_domain: f64,
    /// Largest half-width tried; doubling stops here.
    pub domain_cap: f64,
    /// Doubling stops once the estimate moves less than this.
    pub convergence_tol: f64,
    /// Minimum relative growth per doubling to call the estimate diverging.
    pub divergence_growth: f64,
    /// Grid size for boundedness/monotonicity probing.
    pub grid_points: usize,
    /// Half-width of the probing grid.
    pub grid_half_width: f64,
    /// Two tail samples closer than this make a limit verdict.
    pub limit_tol: f64,
}

impl Default for ProbeSettings {
    fn default() -> Self {
        ProbeSettings {
            panel_tol: 1e-10,
            initial_domain: 16.0,
            domain_cap: 16384.0, // 2^14
            convergence_tol: 1e-12,
            divergence_growth: 0.01,
            grid_points: 10_000,
            grid_half_width: 64.0,
            limit_tol: 1e-9,
        }
    }
}

/// Three-valued probe verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        })
    }
}

/// Convergence status of a doubled-domain integral estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralStatus {
    /// The last doubling moved the estimate less than the convergence tol.
    Converged,
    /// Estimates grew monotonically by more than the divergence threshold
    /// per doubling all the way to the cap.
    Diverging,
    /// Neither settled nor clearly growing at the cap.
    Inconclusive,
}

/// An improper-integral estimate together with its tail diagnostic.
#[derive(Debug, Clone, Copy)]
pub struct IntegralEstimate {
    pub value: f64,
    pub status: IntegralStatus,
    /// Change contributed by the last doubling.
    pub last_delta: f64,
    /// Half-width at which probing stopped.
    pub domain: f64,
}

impl IntegralEstimate {
    pub fn passes(&self) -> bool {
        self.status == IntegralStatus::Converged
    }
}

/// Limit probe at one end of the real line.
#[derive(Debug, Clone, Copy)]
pub struct LimitProbe {
    pub value: Option<f64>,
    /// Difference between the last two tail samples.
    pub last_delta: f64,
}

impl LimitProbe {
    pub fn exists(&self) -> bool {
        self.value.is_some()
    }
}

/// Numeric hypothesis report for one activation at dimension `d` and
/// exponent `p`, with eligibility flags for the three theorem hypothesis
/// sets. Verdicts are advisory probes, not proofs.
#[derive(Debug, Clone)]
pub struct HypothesisReport {
    pub activation: String,
    pub dimension: usize,
    pub exponent: f64,
    /// `sup |g|` over the probe grid and tail samples.
    pub bounded_estimate: f64,
    pub bounded: Verdict,
    pub monotone: Verdict,
    pub nonconstant: Verdict,
    pub continuous: Verdict,
    pub limit_at_pos_inf: LimitProbe,
    pub limit_at_neg_inf: LimitProbe,
    /// Estimate of `int_R |g|^p`.
    pub lp_integral: IntegralEstimate,
    /// Estimate of `int_0^inf t^{d-1} |g(t)| dt`.
    pub radial_integral: IntegralEstimate,
    /// `g` continuous and in `L^p`, radial moment integrable.
    pub eligible_lp_radial: bool,
    /// `g` continuous, monotone, bounded, radial moment integrable.
    pub eligible_monotone_bounded: bool,
    /// `g` nonconstant, continuous, bounded, with a limit at one infinity.
    pub eligible_bounded_limit: bool,
}

/// Doubled-domain integral estimate of `f` over `[-T, T]` (symmetric) or
/// `[0, T]`, with the doubling/divergence policy from `settings`.
fn probe_integral<F: Fn(f64) -> f64>(
    f: &F,
    symmetric: bool,
    settings: &ProbeSettings,
) -> IntegralEstimate {
    let mut t = settings.initial_domain;
    let mut value = if symmetric {
        panel_integrate(f, -t, t, 1.0, settings.panel_tol)
    } else {
        panel_integrate(f, 0.0, t, 1.0, settings.panel_tol)
    };
    let mut all_growing = true;
    let mut last_delta = f64::INFINITY;
    while t < settings.domain_cap {
        let next_t = (2.0 * t).min(settings.domain_cap);
        let mut delta = panel_integrate(f, t, next_t, 1.0, settings.panel_tol);
        if symmetric {
            delta += panel_integrate(f, -next_t, -t, 1.0, settings.panel_tol);
        }
        let next = value + delta;
        last_delta = delta;
        let growth = delta / value.abs().max(f64::MIN_POSITIVE);
        if delta.abs() < settings.convergence_tol {
            return IntegralEstimate {
                value: next,
                status: IntegralStatus::Converged,
                last_delta,
                domain: next_t,
            };
        }
        if growth <= settings.divergence_growth {
            all_growing = false;
        }
        value = next;
        t = next_t;
    }
    IntegralEstimate {
        value,
        status: if all_growing {
            IntegralStatus::Diverging
        } else {
            IntegralStatus::Inconclusive
        },
        last_delta,
        domain: t,
    }
}

fn probe_limit(g: &Activation, positive: bool, settings: &ProbeSettings) -> LimitProbe {
    let mut t = settings.initial_domain;
    let sign = if positive { 1.0 } else { -1.0 };
    let mut prev = g.eval(sign * t);
    let mut last_delta = f64::INFINITY;
    while t < settings.domain_cap {
        t *= 2.0;
        let cur = g.eval(sign * t);
        last_delta = cur - prev;
        if last_delta.abs() < settings.limit_tol && cur.is_finite() {
            return LimitProbe {
                value: Some(cur),
                last_delta,
            };
        }
        prev = cur;
    }
    LimitProbe {
        value: None,
        last_delta,
    }
}

/// Classifies an activation against the theorem hypothesis sets.
///
/// Declared analytic flags override the corresponding probes; the integral
/// verdicts are always numeric.
pub fn classify(
    g: &Activation,
    d: usize,
    p: f64,
    settings: &ProbeSettings,
) -> Result<HypothesisReport, ActivationError> {
    if d < 1 {
        return Err(ActivationError::InvalidDimension(d));
    }
    if !(p >= 1.0) || !p.is_finite() {
        return Err(ActivationError::InvalidExponent(p));
    }

    // Grid probes: boundedness estimate, monotonicity, nonconstancy.
    let m = settings.grid_points.max(2);
    let half = settings.grid_half_width;
    let mut sup = 0.0f64;
    let mut min_val = f64::INFINITY;
    let mut max_val = f64::NEG_INFINITY;
    let mut up = false;
    let mut down = false;
    let mut prev = f64::NAN;
    for i in 0..m {
        let t = -half + 2.0 * half * i as f64 / (m - 1) as f64;
        let v = g.eval(t);
        sup = sup.max(v.abs());
        min_val = min_val.min(v);
        max_val = max_val.max(v);
        if i > 0 {
            let diff = v - prev;
            if diff > 1e-12 {
                up = true;
            } else if diff < -1e-12 {
                down = true;
            }
        }
        prev = v;
    }

    let mut limit_pos = probe_limit(g, true, settings);
    let mut limit_neg = probe_limit(g, false, settings);
    if let LimitFlag::Limit(v) = g.flags.limit_at_pos_inf {
        limit_pos.value = Some(v);
    }
    if let LimitFlag::Limit(v) = g.flags.limit_at_neg_inf {
        limit_neg.value = Some(v);
    }
    if let LimitFlag::NoLimit = g.flags.limit_at_pos_inf {
        limit_pos.value = None;
    }
    if let LimitFlag::NoLimit = g.flags.limit_at_neg_inf {
        limit_neg.value = None;
    }
    for probe in [&limit_pos, &limit_neg] {
        if let Some(v) = probe.value {
            sup = sup.max(v.abs());
        }
    }

    let monotone = match g.flags.monotone {
        Some(true) => Verdict::Yes,
        Some(false) => Verdict::No,
        None => {
            if up && down {
                Verdict::No
            } else {
                Verdict::Yes
            }
        }
    };
    let nonconstant = match g.flags.nonconstant {
        Some(true) => Verdict::Yes,
        Some(false) => Verdict::No,
        None => {
            if max_val - min_val > 1e-12 {
                Verdict::Yes
            } else {
                Verdict::No
            }
        }
    };
    let bounded = match g.flags.bounded {
        Some(true) => Verdict::Yes,
        Some(false) => Verdict::No,
        // A finite grid cannot certify boundedness; accept it only when both
        // tails settle, and stay agnostic otherwise.
        None => {
            if limit_pos.exists() && limit_neg.exists() && sup.is_finite() {
                Verdict::Yes
            } else {
                Verdict::Unknown
            }
        }
    };
    let continuous = match g.flags.continuous {
        Some(true) => Verdict::Yes,
        Some(false) => Verdict::No,
        None => Verdict::Unknown,
    };

    let lp_integral = probe_integral(&|t: f64| g.eval(t).abs().powf(p), true, settings);
    let dm1 = (d - 1) as i32;
    let radial_integral =
        probe_integral(&|t: f64| t.powi(dm1) * g.eval(t).abs(), false, settings);

    let not_discontinuous = continuous != Verdict::No;
    let eligible_lp_radial =
        not_discontinuous && lp_integral.passes() && radial_integral.passes();
    let eligible_monotone_bounded = not_discontinuous
        && monotone.is_yes()
        && bounded.is_yes()
        && radial_integral.passes();
    let eligible_bounded_limit = not_discontinuous
        && bounded.is_yes()
        && nonconstant.is_yes()
        && (limit_pos.exists() || limit_neg.exists());

    Ok(HypothesisReport {
        activation: g.id().to_string(),
        dimension: d,
        exponent: p,
        bounded_estimate: sup,
        bounded,
        monotone,
        nonconstant,
        continuous,
        limit_at_pos_inf: limit_pos,
        limit_at_neg_inf: limit_neg,
        lp_integral,
        radial_integral,
        eligible_lp_radial,
        eligible_monotone_bounded,
        eligible_bounded_limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::panel_integrate;

    #[test]
    fn builtin_values() {
        let g = builtin("gaussian").unwrap();
        assert_eq!(g.eval(0.0), 1.0);
        assert!((g.eval(1.0) - (-1.0f64).exp()).abs() < 1e-15);
        let sech = builtin("sech").unwrap();
        assert_eq!(sech.eval(0.0), 1.0);
        assert!((sech.eval(1.0) - 2.0 / (1.0f64.exp() + (-1.0f64).exp())).abs() < 1e-15);
        let one = builtin("constant-one").unwrap();
        assert_eq!(one.flags().nonconstant, Some(false));
        assert!(builtin("swish").is_err());
    }

    #[test]
    fn gaussian_is_lp_and_radially_integrable() {
        let g = builtin("gaussian").unwrap();
        for d in [1, 2, 3] {
            for p in [1.0, 2.0] {
                let r = classify(&g, d, p, &ProbeSettings::default()).unwrap();
                assert!(r.eligible_lp_radial, "gaussian d={d} p={p}");
                assert!(r.lp_integral.passes());
                assert!(r.radial_integral.passes());
                assert_eq!(r.monotone, Verdict::No);
            }
        }
        // p=1: int_R e^{-t^2} = sqrt(pi); d=2: int_0^inf t e^{-t^2} = 1/2.
        let r = classify(&g, 2, 1.0, &ProbeSettings::default()).unwrap();
        assert!((r.lp_integral.value - std::f64::consts::PI.sqrt()).abs() < 1e-8);
        assert!((r.radial_integral.value - 0.5).abs() < 1e-8);
    }

    #[test]
    fn logistic_is_bounded_limit_only() {
        let g = builtin("logistic").unwrap();
        let r = classify(&g, 2, 1.0, &ProbeSettings::default()).unwrap();
        assert_eq!(r.bounded, Verdict::Yes);
        assert_eq!(r.monotone, Verdict::Yes);
        assert_eq!(r.limit_at_pos_inf.value, Some(1.0));
        assert_eq!(r.limit_at_neg_inf.value, Some(0.0));
        assert_eq!(r.lp_integral.status, IntegralStatus::Diverging);
        assert_eq!(r.radial_integral.status, IntegralStatus::Diverging);
        assert!(!r.eligible_lp_radial);
        assert!(!r.eligible_monotone_bounded);
        assert!(r.eligible_bounded_limit);
    }

    #[test]
    fn constant_one_is_eligible_for_nothing() {
        let g = builtin("constant-one").unwrap();
        let r = classify(&g, 2, 1.0, &ProbeSettings::default()).unwrap();
        assert_eq!(r.nonconstant, Verdict::No);
        assert!(!r.eligible_lp_radial);
        assert!(!r.eligible_monotone_bounded);
        assert!(!r.eligible_bounded_limit);
    }

    #[test]
    fn mirrored_logistic_fits_the_monotone_bounded_hypotheses() {
        // g(t) = 1/(1 + e^t): monotone decreasing, bounded, t^2 g(t)
        // integrable, so it clears the monotone/bounded route in d=3 without
        // being L^p on the whole line.
        let g = Activation::with_flags(
            "mirrored-logistic",
            AnalyticFlags {
                continuous: Some(true),
                bounded: Some(true),
                monotone: Some(true),
                nonconstant: Some(true),
                limit_at_pos_inf: LimitFlag::Limit(0.0),
                limit_at_neg_inf: LimitFlag::Limit(1.0),
            },
            |t| 1.0 / (1.0 + t.exp()),
        );
        let r = classify(&g, 3, 1.0, &ProbeSettings::default()).unwrap();
        assert!(r.radial_integral.passes());
        assert!(r.eligible_monotone_bounded);
        assert!(r.eligible_bounded_limit);
        assert!(!r.eligible_lp_radial);
        // Independent reference for int_0^inf t^2/(1+e^t) dt via high
        // resolution fixed quadrature on [0, 80] (the tail is ~e^{-80}).
        let reference = panel_integrate(&|t: f64| t * t / (1.0 + t.exp()), 0.0, 80.0, 0.125, 1e-13);
        assert!(
            (r.radial_integral.value - reference).abs() < 1e-6,
            "estimate {} vs reference {reference}",
            r.radial_integral.value
        );
    }

    #[test]
    fn funahashi_transform_of_logistic() {
        let g = builtin("logistic").unwrap();
        let h = funahashi_transform(&g, 1.0).unwrap();
        // h(0) = sigma(1) - sigma(-1)
        let expected = 1.0 / (1.0 + (-1.0f64).exp()) - 1.0 / (1.0 + 1.0f64.exp());
        assert!((h.eval(0.0) - expected).abs() < 1e-15);
        assert!((h.eval(0.0) - 0.46212).abs() < 1e-5);
        // The transform of a bounded monotone function is L^1.
        let r = classify(&h, 1, 1.0, &ProbeSettings::default()).unwrap();
        assert!(r.lp_integral.passes());
        // int_R h = 2*alpha exactly for the logistic.
        assert!((r.lp_integral.value - 2.0).abs() < 1e-7);

        assert!(funahashi_transform(&g, 0.0).is_err());
        assert!(funahashi_transform(&g, -1.0).is_err());
    }

    #[test]
    fn funahashi_transform_of_constant_vanishes() {
        let one = builtin("constant-one").unwrap();
        let h = funahashi_transform(&one, 1.0).unwrap();
        for t in [-5.0, 0.0, 2.5, 100.0] {
            assert_eq!(h.eval(t), 0.0);
        }
    }

    #[test]
    fn classify_is_deterministic() {
        let g = builtin("sech").unwrap();
        let a = classify(&g, 2, 1.0, &ProbeSettings::default()).unwrap();
        let b = classify(&g, 2, 1.0, &ProbeSettings::default()).unwrap();
        assert_eq!(a.lp_integral.value.to_bits(), b.lp_integral.value.to_bits());
        assert_eq!(
            a.radial_integral.value.to_bits(),
            b.radial_integral.value.to_bits()
        );
    }

    #[test]
    fn classify_validates_inputs() {
        let g = builtin("gaussian").unwrap();
        assert!(classify(&g, 0, 1.0, &ProbeSettings::default()).is_err());
        assert!(classify(&g, 2, 0.5, &ProbeSettings::default()).is_err());
        assert!(classify(&g, 2, f64::INFINITY, &ProbeSettings::default()).is_err());
    }

    #[test]
    fn declared_flags_agree_with_probes_for_builtins() {
        for name in BUILTIN_NAMES {
            let g = builtin(name).unwrap();
            let declared = *g.flags();
            // Re-probe with the flags stripped.
            let bare = Activation::new(name, {
                let g = g.clone();
                move |t| g.eval(t)
            });
            let r = classify(&bare, 2, 1.0, &ProbeSettings::default()).unwrap();
            if r.monotone != Verdict::Unknown {
                assert_eq!(r.monotone.is_yes(), declared.monotone.unwrap(), "{name}");
            }
            if r.nonconstant != Verdict::Unknown {
                assert_eq!(
                    r.nonconstant.is_yes(),
                    declared.nonconstant.unwrap(),
                    "{name}"
                );
            }
            if let (Some(probed), LimitFlag::Limit(declared_v)) =
                (r.limit_at_pos_inf.value, declared.limit_at_pos_inf)
            {
                assert!((probed - declared_v).abs() < 1e-6, "{name}");
            }
        }
    }
}
